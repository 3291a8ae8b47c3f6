use proptest::prelude::*;

use gso_core::cuts::{ali_generate, epbm_generate, epi_generate, si_separate, submax_cut_generate};
use gso_core::functions::{
    random_bisubmodular, random_submodular, Concave, ConcaveOfLinear, ReadingsTable,
};
use gso_core::milp::relative_gap;
use gso_core::{lovasz_eval, KPoint, Permutation, SetPoint, TernaryPoint};

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn sized_perm(max: usize) -> impl Strategy<Value = (usize, Permutation, u64)> {
    (1..=max).prop_flat_map(|n| (Just(n), perm_strategy(n), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_column_entropy_is_at_most_log_bins(
        n in 1usize..5,
        rows in 1usize..80,
        bins in 2u16..9,
        seed in any::<u64>(),
    ) {
        let table = ReadingsTable::synthetic(n, 2, rows, bins, seed).unwrap();
        let f = table.entropy_oracle().unwrap();
        for i in 0..n {
            for q in 1..=2u8 {
                let mut codes = vec![0u8; n];
                codes[i] = q;
                let h = f.value(&KPoint::from_codes(2, codes).unwrap());
                prop_assert!(h >= -1e-12);
                prop_assert!(h <= (bins as f64).ln() + 1e-12);
            }
        }
    }

    #[test]
    fn lovasz_extension_agrees_on_vertices(n in 1usize..8, seed in any::<u64>(), mask in any::<u64>()) {
        let f = random_submodular(n, seed);
        let s = SetPoint::from_mask(n, mask & ((1u64 << n) - 1));
        prop_assert!((lovasz_eval(&f, &s.to_f64()).unwrap() - f.value(&s)).abs() < 1e-9);
    }

    #[test]
    fn epi_is_tight_along_its_chain((n, perm, seed) in sized_perm(8)) {
        let f = random_submodular(n, seed);
        let cut = epi_generate(&f, &perm).unwrap();
        let mut s = SetPoint::empty(n);
        prop_assert!((cut.affine(&s.to_f64()) - f.value(&s)).abs() < 1e-9);
        for &i in perm.order() {
            s.insert(i);
            prop_assert!((cut.affine(&s.to_f64()) - f.value(&s)).abs() < 1e-9);
        }
    }

    #[test]
    fn epi_underestimates_everywhere((n, perm, seed) in sized_perm(7), mask in any::<u64>()) {
        let f = random_submodular(n, seed);
        let cut = epi_generate(&f, &perm).unwrap();
        let s = SetPoint::from_mask(n, mask & ((1u64 << n) - 1));
        prop_assert!(cut.violation(&s.to_f64(), f.value(&s)) <= 1e-9);
    }

    #[test]
    fn submax_overestimates_and_touches_its_point(n in 1usize..8, seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let f = random_submodular(n, seed);
        let full = (1u64 << n) - 1;
        let s = SetPoint::from_mask(n, a & full);
        let t = SetPoint::from_mask(n, b & full);
        let cut = submax_cut_generate(&f, &s).unwrap();
        prop_assert!((cut.affine(&s.to_f64()) - f.value(&s)).abs() < 1e-9);
        prop_assert!(cut.violation(&t.to_f64(), f.value(&t)) <= 1e-9);
    }

    #[test]
    fn epbm_underestimates_ternary_points(
        (n, perm, seed) in sized_perm(6),
        signs in any::<u32>(),
        vals in proptest::collection::vec(-1i8..=1, 6),
    ) {
        let f = random_bisubmodular(n, seed);
        let sigma: Vec<i8> = (0..n).map(|i| if signs >> i & 1 == 1 { -1 } else { 1 }).collect();
        let cut = epbm_generate(&f, &perm, &sigma).unwrap();
        let t = TernaryPoint::from_vals(vals[..n].to_vec()).unwrap();
        prop_assert!(cut.violation(&t.to_f64(), f.value(&t)) <= 1e-9);
    }

    #[test]
    fn ali_is_valid_under_the_cardinality_cap(
        weights in proptest::collection::vec(0.0f64..20.0, 1..8),
        k_frac in 0.0f64..1.0,
        order_seed in any::<u64>(),
        mask in any::<u64>(),
    ) {
        let n = weights.len();
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let spec = ConcaveOfLinear::new(weights, Concave::Sqrt).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (order_seed.rotate_left(i as u32 * 7) ^ i as u64, i));
        let cut = ali_generate(&spec, k, &Permutation::new(order).unwrap()).unwrap();
        let s = SetPoint::from_mask(n, mask & ((1u64 << n) - 1));
        if s.cardinality() <= k {
            prop_assert!(cut.violation(&s.to_f64(), spec.eval(&s).unwrap()) <= 1e-9);
        }
    }

    #[test]
    fn si_separation_is_valid(
        n in 1usize..8,
        alpha in 0.1f64..3.0,
        k_frac in 0.0f64..1.0,
        x in proptest::collection::vec(0.0f64..=1.0, 8),
        mask in any::<u64>(),
    ) {
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let g = Concave::Log1p;
        let cut = si_separate(&g, alpha, k, &x[..n]).unwrap();
        let s = SetPoint::from_mask(n, mask & ((1u64 << n) - 1));
        if s.cardinality() <= k {
            let w = g.eval(alpha * s.cardinality() as f64);
            prop_assert!(cut.violation(&s.to_f64(), w) <= 1e-9);
        }
    }

    #[test]
    fn gap_is_nonnegative_and_zero_when_closed(lb in -1e6f64..1e6, extra in 0.0f64..1e6) {
        let ub = lb + extra;
        prop_assert!(relative_gap(ub, lb) >= 0.0);
        prop_assert_eq!(relative_gap(lb, lb), 0.0);
    }

    #[test]
    fn kpoint_codes_round_trip(codes in proptest::collection::vec(0u8..=3, 1..10)) {
        let p = KPoint::from_codes(3, codes.clone()).unwrap();
        prop_assert_eq!(p.codes(), codes.as_slice());
        let back = KPoint::from_binary(codes.len(), 3, &p.to_binary(), 1e-9).unwrap();
        prop_assert_eq!(back, p);
    }
}

//! Valid-inequality families with their generation and separation routines.

pub mod bisub;
pub mod cardinality;
pub mod cut;
pub mod epi;
pub mod ksub;
pub mod mir;
pub mod nogood;
pub mod submax;

pub use bisub::{bisub_separate, epbm_generate, signed_greedy};
pub use cardinality::{
    ali_generate, lift_epi_exact, lifting_budget, si_generate, si_separate, DEFAULT_LIFT_CAP,
};
pub use cut::{Cut, CutPool, Family, Orientation};
pub use epi::{epi_coefficients, epi_generate, epi_separate};
pub use ksub::{ksub_cut_generate, ksub_xi_compute, XiTable, DEFAULT_XI_CAP};
pub use mir::{dr_binary_cut, mir_generate, MonotoneForest};
pub use nogood::nogood_cut;
pub use submax::submax_cut_generate;

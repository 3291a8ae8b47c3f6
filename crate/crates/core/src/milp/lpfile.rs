//! Plain-text LP-style dump/load of a [`MilpModel`], for debugging.
//!
//! ```text
//! minimize
//!  obj: 1 w + 0.5 x0 + 3
//! subject to
//!  c0: 1 x0 + 1 x1 <= 1
//! bounds
//!  0 <= x0 <= 1
//!  -inf <= w <= inf
//! integers
//!  x0 x1
//! end
//! ```

use std::collections::HashMap;
use std::fmt::Write;

use super::model::{ConstraintOp, LinearConstraint, MilpModel, Sense};
use crate::error::{GsoError, Result};

fn fmt_num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{:?}", v)
    }
}

fn parse_num(s: &str, line: usize) -> Result<f64> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse().map_err(|_| GsoError::Parse {
            line,
            message: format!("bad number `{}`", s),
        }),
    }
}

pub fn write_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str(match model.sense {
        Sense::Minimize => "minimize\n",
        Sense::Maximize => "maximize\n",
    });
    out.push_str(" obj:");
    for (j, &c) in model.objective.iter().enumerate() {
        if c != 0.0 {
            let _ = write!(out, " {} {}", fmt_num(c), model.names[j]);
        }
    }
    let _ = writeln!(out, " {}", fmt_num(model.objective_constant));
    out.push_str("subject to\n");
    for (r, c) in model.constraints.iter().enumerate() {
        let _ = write!(out, " c{}:", r);
        for &(j, a) in &c.coeffs {
            let _ = write!(out, " {} {}", fmt_num(a), model.names[j]);
        }
        let _ = writeln!(out, " {} {}", c.op.symbol(), fmt_num(c.rhs));
    }
    out.push_str("bounds\n");
    for j in 0..model.num_vars() {
        let _ = writeln!(
            out,
            " {} <= {} <= {}",
            fmt_num(model.lower[j]),
            model.names[j],
            fmt_num(model.upper[j])
        );
    }
    out.push_str("integers\n");
    let ints: Vec<&str> = (0..model.num_vars())
        .filter(|&j| model.integer[j])
        .map(|j| model.names[j].as_str())
        .collect();
    if !ints.is_empty() {
        let _ = writeln!(out, " {}", ints.join(" "));
    }
    out.push_str("end\n");
    out
}

#[derive(PartialEq)]
enum Section {
    Head,
    Objective,
    Rows,
    Bounds,
    Integers,
    End,
}

/// Parses the format written by [`write_lp`]. Variables are declared by the
/// `bounds` section, in order.
pub fn read_lp(text: &str) -> Result<MilpModel> {
    let mut sense = None;
    let mut obj_terms: Vec<(String, f64)> = Vec::new();
    let mut obj_const = 0.0;
    let mut raw_rows: Vec<(Vec<(String, f64)>, ConstraintOp, f64)> = Vec::new();
    let mut bounds: Vec<(String, f64, f64)> = Vec::new();
    let mut ints: Vec<String> = Vec::new();
    let mut section = Section::Head;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "minimize" | "maximize" => {
                sense = Some(if line == "minimize" {
                    Sense::Minimize
                } else {
                    Sense::Maximize
                });
                section = Section::Objective;
                continue;
            }
            "subject to" => {
                section = Section::Rows;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "integers" => {
                section = Section::Integers;
                continue;
            }
            "end" => {
                section = Section::End;
                continue;
            }
            _ => {}
        }
        let err = |m: &str| GsoError::Parse {
            line: line_no,
            message: m.to_string(),
        };
        match section {
            Section::Head | Section::End => return Err(err("text outside of a section")),
            Section::Objective => {
                let body = line.strip_prefix("obj:").ok_or_else(|| err("expected `obj:`"))?;
                let toks: Vec<&str> = body.split_whitespace().collect();
                if toks.len() % 2 != 1 {
                    return Err(err("objective needs coefficient/name pairs and a constant"));
                }
                for pair in toks[..toks.len() - 1].chunks(2) {
                    obj_terms.push((pair[1].to_string(), parse_num(pair[0], line_no)?));
                }
                obj_const = parse_num(toks[toks.len() - 1], line_no)?;
            }
            Section::Rows => {
                let (_, body) = line.split_once(':').ok_or_else(|| err("row needs a label"))?;
                let toks: Vec<&str> = body.split_whitespace().collect();
                if toks.len() < 2 || !toks.len().is_multiple_of(2) {
                    return Err(err("malformed row"));
                }
                let op = match toks[toks.len() - 2] {
                    "<=" => ConstraintOp::Le,
                    ">=" => ConstraintOp::Ge,
                    "=" => ConstraintOp::Eq,
                    other => return Err(err(&format!("unknown operator `{}`", other))),
                };
                let rhs = parse_num(toks[toks.len() - 1], line_no)?;
                let mut terms = Vec::new();
                for pair in toks[..toks.len() - 2].chunks(2) {
                    terms.push((pair[1].to_string(), parse_num(pair[0], line_no)?));
                }
                raw_rows.push((terms, op, rhs));
            }
            Section::Bounds => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 5 || toks[1] != "<=" || toks[3] != "<=" {
                    return Err(err("bounds line must read `lo <= name <= hi`"));
                }
                bounds.push((
                    toks[2].to_string(),
                    parse_num(toks[0], line_no)?,
                    parse_num(toks[4], line_no)?,
                ));
            }
            Section::Integers => ints.extend(line.split_whitespace().map(str::to_string)),
        }
    }
    let sense = sense.ok_or(GsoError::Parse {
        line: 0,
        message: "missing objective sense".into(),
    })?;
    let mut model = MilpModel::new(sense);
    let mut index = HashMap::new();
    for (name, lo, hi) in bounds {
        let j = model.add_var(name.clone(), lo, hi, false, 0.0);
        index.insert(name, j);
    }
    let lookup = |name: &str| {
        index.get(name).copied().ok_or_else(|| GsoError::Parse {
            line: 0,
            message: format!("undeclared variable `{}`", name),
        })
    };
    for (name, c) in obj_terms {
        model.objective[lookup(&name)?] = c;
    }
    model.objective_constant = obj_const;
    for (terms, op, rhs) in raw_rows {
        let mut coeffs = Vec::with_capacity(terms.len());
        for (name, a) in terms {
            coeffs.push((lookup(&name)?, a));
        }
        model.add_constraint(LinearConstraint::new(coeffs, op, rhs));
    }
    for name in ints {
        let j = lookup(&name)?;
        model.integer[j] = true;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let mut m = MilpModel::new(Sense::Maximize);
        let x = m.add_binary("x0", 0.1);
        let w = m.add_var("w", f64::NEG_INFINITY, f64::INFINITY, false, 1.0);
        m.objective_constant = -2.5;
        m.add_constraint(LinearConstraint::le(vec![(w, 1.0), (x, -1.0 / 3.0)], 0.0));
        m.add_constraint(LinearConstraint::eq(vec![(x, 1.0)], 1.0));
        let text = write_lp(&m);
        let back = read_lp(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn reports_line_of_bad_token() {
        let text = "minimize\n obj: 1 x 0\nsubject to\n c0: 1 x <== 2\nbounds\n 0 <= x <= 1\nend\n";
        match read_lp(text) {
            Err(GsoError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {:?}", other),
        }
    }
}

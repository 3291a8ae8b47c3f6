//! Readings CSV: header `loc<id>_<type>`, one row per time sample.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{GsoError, Result};
use crate::functions::{RawReadings, ReadingsTable};

/// Splits `loc<id>_<type>` at the first underscore.
pub fn parse_header(h: &str) -> Option<(&str, &str)> {
    let rest = h.trim().strip_prefix("loc")?;
    let (id, ty) = rest.split_once('_')?;
    if id.is_empty() || ty.is_empty() {
        return None;
    }
    Some((id, ty))
}

/// Location and type names keep their order of first appearance.
pub fn read_raw_readings<R: Read>(reader: R) -> Result<RawReadings> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut location_ids: Vec<String> = Vec::new();
    let mut type_names: Vec<String> = Vec::new();
    let mut keys = Vec::with_capacity(headers.len());
    for h in headers.iter() {
        let (id, ty) = parse_header(h).ok_or_else(|| GsoError::Parse {
            line: 1,
            message: format!("column `{}` is not of the form loc<id>_<type>", h),
        })?;
        let l = position_or_push(&mut location_ids, id);
        let t = position_or_push(&mut type_names, ty);
        if keys.contains(&(l, t)) {
            return Err(GsoError::Parse {
                line: 1,
                message: format!("duplicate column `{}`", h),
            });
        }
        keys.push((l, t));
    }
    if keys.is_empty() {
        return Err(GsoError::Parse {
            line: 1,
            message: "no columns".into(),
        });
    }
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); keys.len()];
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        for (j, cell) in rec.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| GsoError::Parse {
                line,
                message: format!("cell `{}` in column `{}` is not a number", cell, &headers[j]),
            })?;
            if !v.is_finite() {
                return Err(GsoError::Parse {
                    line,
                    message: format!("cell in column `{}` is not finite", &headers[j]),
                });
            }
            values[j].push(v);
        }
    }
    if values[0].is_empty() {
        return Err(GsoError::Parse {
            line: 2,
            message: "no data rows".into(),
        });
    }
    Ok(RawReadings {
        location_ids,
        type_names,
        columns: keys.into_iter().zip(values).collect(),
    })
}

fn position_or_push(names: &mut Vec<String>, name: &str) -> usize {
    match names.iter().position(|n| n == name) {
        Some(p) => p,
        None => {
            names.push(name.to_string());
            names.len() - 1
        }
    }
}

pub fn read_readings_csv(path: &Path, bins: u16) -> Result<ReadingsTable> {
    let file = std::fs::File::open(path).map_err(GsoError::file(path))?;
    read_raw_readings(file)?.discretize(bins)
}

/// Writes values with shortest round-trip formatting, so reading back gives
/// identical numbers.
pub fn write_raw_readings<W: Write>(raw: &RawReadings, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<String> = raw
        .columns
        .iter()
        .map(|((l, t), _)| format!("loc{}_{}", raw.location_ids[*l], raw.type_names[*t]))
        .collect();
    w.write_record(&header)?;
    let rows = raw.columns.first().map_or(0, |c| c.1.len());
    for r in 0..rows {
        w.write_record(raw.columns.iter().map(|(_, v)| v[r].to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::synthetic_raw;

    #[test]
    fn headers() {
        assert_eq!(parse_header("loc12_temp"), Some(("12", "temp")));
        assert_eq!(parse_header("loc3_rel_hum"), Some(("3", "rel_hum")));
        assert_eq!(parse_header("x3_temp"), None);
        assert_eq!(parse_header("loc_temp"), None);
    }

    #[test]
    fn round_trip_matches_direct_construction() {
        let raw = synthetic_raw(4, 2, 30, 9).unwrap();
        let mut buf = Vec::new();
        write_raw_readings(&raw, &mut buf).unwrap();
        let back = read_raw_readings(buf.as_slice()).unwrap();
        assert_eq!(back, raw);
        assert_eq!(back.discretize(4).unwrap(), raw.discretize(4).unwrap());
    }

    #[test]
    fn bad_cells_report_lines() {
        let text = "loc1_t,loc2_t\n1.0,2.0\n3.0,abc\n";
        match read_raw_readings(text.as_bytes()) {
            Err(GsoError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{:?}", other),
        }
        assert!(read_raw_readings("loc1_t,foo\n1,2\n".as_bytes()).is_err());
        assert!(read_raw_readings("loc1_t,loc1_t\n1,2\n".as_bytes()).is_err());
    }
}

use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{HarnessError, Method, SweepResult, SweepRow};

pub const CSV_HEADER: &str = "kbar,phi_d,kicks,energy,method";

/// 17 significant digits, enough to reproduce every f64 exactly.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            num(r.kbar),
            num(r.phi_d),
            r.kicks,
            num(r.energy),
            r.method
        ));
    }
    out
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<(), HarnessError> {
    fs::write(path, csv_string(&result.rows)).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, HarnessError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(HarnessError::Csv {
                line: 1,
                message: format!(
                    "expected header `{CSV_HEADER}`, got `{}`",
                    other.unwrap_or("")
                ),
            })
        }
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let err = |message: String| HarnessError::Csv {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(err(format!("expected 5 fields, got {}", fields.len())));
            }
            let float = |s: &str| f64::from_str(s).map_err(|_| err(format!("bad number `{s}`")));
            Ok(SweepRow {
                kbar: float(fields[0])?,
                phi_d: float(fields[1])?,
                kicks: fields[2]
                    .parse()
                    .map_err(|_| err(format!("bad kick count `{}`", fields[2])))?,
                energy: float(fields[3])?,
                method: Method::from_str(fields[4]).map_err(err)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_result_is_header_only() {
        assert_eq!(csv_string(&[]), "kbar,phi_d,kicks,energy,method\n");
        assert!(parse_csv("kbar,phi_d,kicks,energy,method\n")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn malformed_lines_are_reported() {
        assert!(matches!(
            parse_csv("a,b\n"),
            Err(HarnessError::Csv { line: 1, .. })
        ));
        let text = format!("{CSV_HEADER}\n1,2,3,4\n");
        assert!(matches!(
            parse_csv(&text),
            Err(HarnessError::Csv { line: 2, .. })
        ));
        let text = format!("{CSV_HEADER}\n1,2,3,4,wave\n");
        assert!(parse_csv(&text).is_err());
    }

    fn method() -> impl Strategy<Value = Method> {
        prop_oneof![
            Just(Method::Analytic),
            Just(Method::Quantum),
            Just(Method::Classical),
            Just(Method::GapAbs),
            Just(Method::GapRel)
        ]
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            rows in prop::collection::vec(
                (any::<f64>(), any::<f64>(), 1usize..81, any::<f64>(), method()),
                0..40,
            )
        ) {
            let rows: Vec<SweepRow> = rows
                .into_iter()
                .filter(|r| r.0.is_finite() && r.1.is_finite() && r.3.is_finite())
                .map(|(kbar, phi_d, kicks, energy, method)| SweepRow { kbar, phi_d, kicks, energy, method })
                .collect();
            let back = parse_csv(&csv_string(&rows)).unwrap();
            prop_assert_eq!(back.len(), rows.len());
            for (a, b) in rows.iter().zip(&back) {
                prop_assert_eq!(a.kbar.to_bits(), b.kbar.to_bits());
                prop_assert_eq!(a.phi_d.to_bits(), b.phi_d.to_bits());
                prop_assert_eq!(a.energy.to_bits(), b.energy.to_bits());
                prop_assert_eq!(a.kicks, b.kicks);
                prop_assert_eq!(a.method, b.method);
            }
        }
    }
}

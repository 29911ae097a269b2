use std::io::Write;

use anyhow::Result;
use jtcomp::{AggregateResult, Summary};

pub const COLUMNS: [&str; 16] = [
    "scheme",
    "axis_name",
    "axis_value",
    "mean_rate",
    "rate_ci",
    "backhaul",
    "backhaul_ci",
    "qos_fraction",
    "unserved_fraction",
    "mean_cluster_size",
    "prb_utilization",
    "eq11_viol",
    "eq12_viol",
    "eq15_viol",
    "drops",
    "seed",
];

/// Marker for values that are undefined (no served users, fewer than two drops).
pub const NA: &str = "NA";

/// One experiment to emit: the swept axis (if any) and its result.
pub struct Block<'a> {
    pub axis: Option<(&'a str, f64)>,
    pub result: &'a AggregateResult,
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        NA.to_string()
    }
}

fn ci(s: &Summary) -> String {
    s.ci_half_width.map_or_else(|| NA.to_string(), number)
}

/// Writes `echo` as `# `-prefixed lines, then the CSV header and one row per
/// scheme of every block.
pub fn write_csv<W: Write>(mut out: W, echo: &str, blocks: &[Block<'_>], seed: u64) -> Result<()> {
    for line in echo.lines() {
        if line.is_empty() {
            writeln!(out, "#")?;
        } else {
            writeln!(out, "# {line}")?;
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for b in blocks {
        let (axis_name, axis_value) = match b.axis {
            Some((name, v)) => (name.to_string(), number(v)),
            None => ("none".to_string(), NA.to_string()),
        };
        for s in &b.result.schemes {
            w.write_record([
                s.scheme.to_string(),
                axis_name.clone(),
                axis_value.clone(),
                number(s.mean_rate.mean),
                ci(&s.mean_rate),
                number(s.backhaul.mean),
                ci(&s.backhaul),
                number(s.qos_fraction.mean),
                number(s.unserved_fraction.mean),
                number(s.mean_cluster_size.mean),
                number(s.prb_utilization.mean),
                s.eq11_violations.to_string(),
                s.eq12_violations.to_string(),
                s.eq15_violations.to_string(),
                b.result.drops.to_string(),
                seed.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1 + 0.2, 1e-13, 10f64.powf(-12.5), 123456.789, 0.0] {
            assert_eq!(number(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(number(f64::NAN), "NA");
    }

    #[test]
    fn header_only_for_no_blocks() {
        let mut buf = Vec::new();
        write_csv(&mut buf, "a = 1\n\n[b]", &[], 7).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, format!("# a = 1\n#\n# [b]\n{}\n", COLUMNS.join(",")));
    }
}

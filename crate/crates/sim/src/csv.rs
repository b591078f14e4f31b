//! CSV emission with locale-independent shortest-round-trip floats, plus
//! parsers so results survive a full write/read cycle at double precision.

use std::fmt::Write as _;

use crate::error::{Result, SimError};
use crate::harness::{NomPoint, PredictPoint, SweepPoint, SweepResult};

pub const SWEEP_HEADER: &str =
    "snr_db,ber_ml,ber_mm,ber_mmw,avg_nodes_ml,avg_nodes_mm,c_r_mm,c_r_max,nom_count,analytic_c_mm";
pub const PREDICT_HEADER: &str = "snr_db,analytic_c_mm,c_r_analytic";
pub const NOM_HEADER: &str = "snr_db,nom_count,trials";

/// A disabled or failed analytic overlay renders as NaN.
fn analytic_field(p: &SweepPoint) -> f64 {
    p.analytic_c_mm.unwrap_or(f64::NAN)
}

pub fn write_sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in &result.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            p.snr_db,
            p.ber_ml,
            p.ber_mm,
            p.ber_mmw,
            p.avg_nodes_ml,
            p.avg_nodes_mm,
            p.c_r_mm,
            p.c_r_max,
            p.nom_count,
            analytic_field(p)
        )
        .unwrap();
    }
    out
}

pub fn write_predict_csv(points: &[PredictPoint]) -> String {
    let mut out = String::from(PREDICT_HEADER);
    out.push('\n');
    for p in points {
        writeln!(out, "{},{},{}", p.snr_db, p.analytic_c_mm, p.c_r_analytic).unwrap();
    }
    out
}

pub fn write_nom_csv(points: &[NomPoint]) -> String {
    let mut out = String::from(NOM_HEADER);
    out.push('\n');
    for p in points {
        writeln!(out, "{},{},{}", p.snr_db, p.nom_count, p.trials).unwrap();
    }
    out
}

/// One parsed sweep row; exactly the ten emitted columns.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub snr_db: f64,
    pub ber_ml: f64,
    pub ber_mm: f64,
    pub ber_mmw: f64,
    pub avg_nodes_ml: f64,
    pub avg_nodes_mm: f64,
    pub c_r_mm: f64,
    pub c_r_max: f64,
    pub nom_count: u64,
    pub analytic_c_mm: f64,
}

fn field<'a>(cells: &'a [&'a str], i: usize, line: usize) -> Result<&'a str> {
    cells
        .get(i)
        .copied()
        .ok_or_else(|| SimError::config(format!("csv line {line}: missing column {i}")))
}

fn float(cells: &[&str], i: usize, line: usize) -> Result<f64> {
    let s = field(cells, i, line)?;
    s.parse::<f64>()
        .map_err(|_| SimError::config(format!("csv line {line}: \"{s}\" is not a number")))
}

fn integer(cells: &[&str], i: usize, line: usize) -> Result<u64> {
    let s = field(cells, i, line)?;
    s.parse::<u64>()
        .map_err(|_| SimError::config(format!("csv line {line}: \"{s}\" is not an integer")))
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SWEEP_HEADER => {}
        other => {
            return Err(SimError::config(format!(
                "unexpected csv header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let n = idx + 2;
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 10 {
            return Err(SimError::config(format!(
                "csv line {n}: expected 10 columns, got {}",
                cells.len()
            )));
        }
        rows.push(SweepRow {
            snr_db: float(&cells, 0, n)?,
            ber_ml: float(&cells, 1, n)?,
            ber_mm: float(&cells, 2, n)?,
            ber_mmw: float(&cells, 3, n)?,
            avg_nodes_ml: float(&cells, 4, n)?,
            avg_nodes_mm: float(&cells, 5, n)?,
            c_r_mm: float(&cells, 6, n)?,
            c_r_max: float(&cells, 7, n)?,
            nom_count: integer(&cells, 8, n)?,
            analytic_c_mm: float(&cells, 9, n)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_point(snr: f64, analytic: Option<f64>) -> SweepPoint {
        SweepPoint {
            snr_db: snr,
            ber_ml: 0.012345678901234567,
            ber_mm: 0.012345678901234567,
            ber_mmw: 0.1 / 3.0,
            avg_nodes_ml: 512.0,
            avg_nodes_mm: 71.4142135623,
            avg_nodes_mmw: 70.0,
            c_r_mm: 1.0 - 71.4142135623 / 512.0,
            c_r_mmw: 0.0,
            c_r_max: 0.861328125,
            nom_count: 2020,
            mm_ml_mismatches: 0,
            analytic_c_mm: analytic,
            analytic_error: None,
        }
    }

    #[test]
    fn sweep_round_trip_is_exact() {
        let result = SweepResult {
            trials: 10_000,
            points: vec![
                sample_point(0.0, Some(170.64877350993288)),
                sample_point(12.5, None),
            ],
        };
        let text = write_sweep_csv(&result);
        assert!(text.ends_with('\n'));
        let rows = parse_sweep_csv(&text).unwrap();
        assert_eq!(rows.len(), 2);
        for (row, p) in rows.iter().zip(&result.points) {
            assert_eq!(row.snr_db.to_bits(), p.snr_db.to_bits());
            assert_eq!(row.ber_ml.to_bits(), p.ber_ml.to_bits());
            assert_eq!(row.ber_mmw.to_bits(), p.ber_mmw.to_bits());
            assert_eq!(row.avg_nodes_mm.to_bits(), p.avg_nodes_mm.to_bits());
            assert_eq!(row.c_r_mm.to_bits(), p.c_r_mm.to_bits());
            assert_eq!(row.c_r_max.to_bits(), p.c_r_max.to_bits());
            assert_eq!(row.nom_count, p.nom_count);
            match p.analytic_c_mm {
                Some(v) => assert_eq!(row.analytic_c_mm.to_bits(), v.to_bits()),
                None => assert!(row.analytic_c_mm.is_nan()),
            }
        }
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(parse_sweep_csv("nope\n").is_err());
        let short = format!("{SWEEP_HEADER}\n1,2,3\n");
        let err = parse_sweep_csv(&short).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let bad = format!("{SWEEP_HEADER}\n0,0,0,0,0,0,0,0,x,0\n");
        assert!(parse_sweep_csv(&bad).is_err());
    }

    #[test]
    fn nom_and_predict_schemas() {
        let nom = write_nom_csv(&[NomPoint {
            snr_db: 5.0,
            nom_count: 564,
            trials: 10_000,
        }]);
        assert_eq!(nom, "snr_db,nom_count,trials\n5,564,10000\n");
        let predict = write_predict_csv(&[PredictPoint {
            snr_db: 40.0,
            analytic_c_mm: 70.428955078125,
            c_r_analytic: 0.25,
        }]);
        assert_eq!(
            predict,
            "snr_db,analytic_c_mm,c_r_analytic\n40,70.428955078125,0.25\n"
        );
    }
}

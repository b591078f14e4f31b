//! Flat `key = value` configuration files, figure presets, and the option
//! grammar shared by the file format and command-line overrides.

use sm_core::CsirModel;

use crate::error::{Result, SimError};
use crate::harness::SweepConfig;

/// Parses "start:step:stop" (inclusive, step > 0) or a comma list of dB
/// values.
pub fn parse_snr_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty snr grid".into());
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:step:stop, got \"{text}\""));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("\"{p}\" is not a number"))
            })
            .collect::<std::result::Result<_, _>>()?;
        let (start, step, stop) = (nums[0], nums[1], nums[2]);
        if !start.is_finite() || !step.is_finite() || !stop.is_finite() {
            return Err("snr grid endpoints must be finite".into());
        }
        if step <= 0.0 {
            return Err(format!("snr step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("snr stop {stop} is below start {start}"));
        }
        let mut points = Vec::new();
        let mut k = 0u32;
        loop {
            let p = start + step * f64::from(k);
            // Half-step slack absorbs accumulated rounding at the endpoint.
            if p > stop + step * 1e-9 {
                break;
            }
            points.push(p);
            k += 1;
        }
        Ok(points)
    } else {
        text.split(',')
            .map(|p| {
                let v = p
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| format!("\"{p}\" is not a number"))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(format!("snr point {v} is not finite"))
                }
            })
            .collect()
    }
}

/// "perfect" or 0 mean exact receiver knowledge, a positive number fixes the
/// estimation error variance, "variable" ties it to 1/snr.
pub fn parse_sigma_e(text: &str) -> std::result::Result<CsirModel, String> {
    match text.trim() {
        "variable" => Ok(CsirModel::Variable),
        "perfect" => Ok(CsirModel::Perfect),
        other => {
            let v = other
                .parse::<f64>()
                .map_err(|_| format!("\"{other}\" is not a number, \"perfect\", or \"variable\""))?;
            if !v.is_finite() || v < 0.0 {
                Err(format!("error variance must be finite and >= 0, got {v}"))
            } else if v == 0.0 {
                Ok(CsirModel::Perfect)
            } else {
                Ok(CsirModel::Fixed(v))
            }
        }
    }
}

fn parse_usize(value: &str, key: &str) -> std::result::Result<usize, String> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("{key} must be a positive integer, got \"{value}\""))
}

fn parse_u64(value: &str, key: &str) -> std::result::Result<u64, String> {
    value
        .trim()
        .parse::<u64>()
        .map_err(|_| format!("{key} must be a nonnegative integer, got \"{value}\""))
}

/// Applies `key = value` lines on top of `base`. Unknown keys are hard
/// errors; every diagnostic carries its 1-based line number.
pub fn apply_config_text(text: &str, mut base: SweepConfig) -> Result<SweepConfig> {
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(SimError::config(format!(
                "line {line_no}: expected key = value, got \"{line}\""
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let fail = |msg: String| SimError::config(format!("line {line_no}: {msg}"));
        match key {
            "m" => base.m = parse_usize(value, "m").map_err(fail)?,
            "nt" => base.n_t = parse_usize(value, "nt").map_err(fail)?,
            "nr" => base.n_r = parse_usize(value, "nr").map_err(fail)?,
            "snr" => base.snr_db_points = parse_snr_grid(value).map_err(fail)?,
            "trials" => base.trials = parse_u64(value, "trials").map_err(fail)?,
            "sigma_e" => base.csir = parse_sigma_e(value).map_err(fail)?,
            "seed" => base.base_seed = parse_u64(value, "seed").map_err(fail)?,
            "analytic" => {
                base.analytic_realizations = parse_u64(value, "analytic").map_err(fail)?
            }
            other => {
                return Err(SimError::config(format!(
                    "line {line_no}: unknown key \"{other}\""
                )))
            }
        }
    }
    Ok(base)
}

/// Scenario presets named after the figures they reproduce. All default to
/// perfect receiver knowledge; pass `sigma_e` to study estimation error.
pub fn preset(name: &str) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default_scenario();
    match name {
        // Miss counts for the early-terminating variant.
        "fig3" => {
            cfg.snr_db_points = vec![0.0, 5.0, 10.0];
            cfg.analytic_realizations = 0;
        }
        // Error-rate sweeps, determined shapes.
        "fig4a" => {
            cfg.snr_db_points = parse_snr_grid("0:2:30").unwrap();
            cfg.analytic_realizations = 0;
        }
        "fig4b" => {
            set_shape(&mut cfg, 16, 16, 16);
            cfg.snr_db_points = parse_snr_grid("0:2:30").unwrap();
            cfg.analytic_realizations = 0;
        }
        // Complexity sweeps with the analytic overlay, determined shapes.
        "fig5a" => {}
        "fig5b" => set_shape(&mut cfg, 16, 16, 16),
        // Under-determined shapes.
        "fig6a" => set_shape(&mut cfg, 8, 8, 6),
        "fig6b" => set_shape(&mut cfg, 16, 16, 12),
        // Over-determined shapes.
        "fig7a" => set_shape(&mut cfg, 8, 8, 10),
        "fig7b" => set_shape(&mut cfg, 16, 16, 20),
        // Reduction-ratio studies; override one dimension per run.
        "fig8" | "fig9" | "fig10" => {
            set_shape(&mut cfg, 16, 16, 16);
            cfg.snr_db_points = vec![20.0];
            cfg.analytic_realizations = 0;
        }
        other => {
            return Err(SimError::config(format!(
                "unknown preset \"{other}\" (expected fig3 .. fig10)"
            )))
        }
    }
    Ok(cfg)
}

fn set_shape(cfg: &mut SweepConfig, m: usize, n_t: usize, n_r: usize) {
    cfg.m = m;
    cfg.n_t = n_t;
    cfg.n_r = n_r;
}

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Result};
use etacert::analytic::eta_ns;
use etacert::npa::{min_efficiency_npa, NpaLevel};
use etacert::quantum::{min_efficiency_qr, SearchConfig};
use etacert::{Error, QUANTUM_MAX_EBERHARD};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, Output};

pub const HEADER: [&str; 9] = [
    "e_obs",
    "eta_qr",
    "eta_npa_l1",
    "eta_npa_l1ab",
    "eta_npa_l2",
    "eta_ns",
    "xi",
    "wall_time",
    "status",
];

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub e_min: f64,
    pub e_max: f64,
    pub points: usize,
    /// Explicit grid; replaces the log-spaced one when present.
    pub grid: Option<Vec<f64>>,
    pub xi: f64,
    pub levels: Vec<NpaLevel>,
    pub tol: f64,
    pub outputs: Vec<Output>,
    pub search: SearchConfig,
    pub timing: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_none() {
            if !(self.e_min > 0.0 && self.e_min <= self.e_max && self.e_max <= QUANTUM_MAX_EBERHARD)
            {
                bail!(
                    "grid must satisfy 0 < e_min <= e_max <= {QUANTUM_MAX_EBERHARD:.9}, got [{}, {}]",
                    self.e_min,
                    self.e_max
                );
            }
            if self.points == 0 {
                bail!("points must be at least 1");
            }
        }
        if !(0.0..1.0).contains(&self.xi) {
            bail!("xi must lie in [0, 1), got {}", self.xi);
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            bail!("tol must be positive, got {}", self.tol);
        }
        self.search.validate()?;
        Ok(())
    }

    /// `points` values e_min (e_max/e_min)^(i/points), i = 1..=points, so the
    /// grid covers (e_min, e_max] evenly in log scale.
    pub fn grid(&self) -> Vec<f64> {
        if let Some(g) = &self.grid {
            return g.clone();
        }
        let ratio = (self.e_max / self.e_min).ln();
        (1..=self.points)
            .map(|i| {
                if i == self.points {
                    self.e_max
                } else {
                    self.e_min * (ratio * i as f64 / self.points as f64).exp()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub e_obs: f64,
    pub eta_qr: Option<f64>,
    pub eta_npa_l1: Option<f64>,
    pub eta_npa_l1ab: Option<f64>,
    pub eta_npa_l2: Option<f64>,
    pub eta_ns: Option<f64>,
    pub xi: f64,
    pub wall_time: Option<f64>,
    pub status: String,
}

impl Row {
    fn empty(e_obs: f64, xi: f64) -> Self {
        Self {
            e_obs,
            eta_qr: None,
            eta_npa_l1: None,
            eta_npa_l1ab: None,
            eta_npa_l2: None,
            eta_ns: None,
            xi,
            wall_time: None,
            status: String::new(),
        }
    }

    pub fn npa_slot(&mut self, level: NpaLevel) -> &mut Option<f64> {
        match level {
            NpaLevel::One => &mut self.eta_npa_l1,
            NpaLevel::OnePlusAb => &mut self.eta_npa_l1ab,
            NpaLevel::Two => &mut self.eta_npa_l2,
        }
    }

    fn fields(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.map(sig9).unwrap_or_default();
        vec![
            sig9(self.e_obs),
            num(self.eta_qr),
            num(self.eta_npa_l1),
            num(self.eta_npa_l1ab),
            num(self.eta_npa_l2),
            num(self.eta_ns),
            sig9(self.xi),
            num(self.wall_time),
            self.status.clone(),
        ]
    }
}

/// Formats with 9 significant digits, switching to scientific notation
/// outside [1e-4, 1e9).
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exponent) {
        let rounded = format!("{:.*e}", 8, x);
        let value: f64 = rounded.parse().unwrap_or(x);
        let exponent = value.abs().log10().floor() as i32;
        format!("{:.*}", (8 - exponent).max(0) as usize, value)
    } else {
        format!("{x:.8e}")
    }
}

pub fn describe(err: &Error) -> String {
    match err {
        Error::Infeasible { achievable, .. } => format!("infeasible (max {})", sig9(*achievable)),
        other => other.to_string(),
    }
}

pub fn compute_row(spec: &SweepSpec, e_obs: f64) -> Row {
    let start = Instant::now();
    let mut row = Row::empty(e_obs, spec.xi);
    let mut problems = Vec::new();
    if spec.outputs.contains(&Output::Qr) {
        match min_efficiency_qr(e_obs, spec.xi, spec.tol, &spec.search) {
            Ok(r) => row.eta_qr = Some(r.eta),
            Err(e) => problems.push(format!("qr: {}", describe(&e))),
        }
    }
    if spec.outputs.contains(&Output::Npa) {
        for &level in &spec.levels {
            match min_efficiency_npa(e_obs, spec.xi, spec.tol, level) {
                Ok(b) => *row.npa_slot(level) = Some(b.eta),
                Err(e) => problems.push(format!("npa {level}: {}", describe(&e))),
            }
        }
    }
    if spec.outputs.contains(&Output::Analytic) && spec.xi == 0.0 {
        match eta_ns(e_obs) {
            Ok(v) => row.eta_ns = Some(v),
            Err(e) => problems.push(format!("analytic: {}", describe(&e))),
        }
    }
    row.status = if problems.is_empty() {
        "ok".into()
    } else {
        problems.join("; ")
    };
    if spec.timing {
        row.wall_time = Some(start.elapsed().as_secs_f64());
    }
    row
}

pub fn run(spec: &SweepSpec) -> Vec<Row> {
    spec.grid()
        .par_iter()
        .map(|&e| compute_row(spec, e))
        .collect()
}

pub fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(HEADER)?;
            for row in rows {
                w.write_record(row.fields())?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.753773512), "0.753773512");
        assert_eq!(sig9(0.0069510000001), "0.00695100000");
        assert_eq!(sig9(1.0), "1.00000000");
        assert_eq!(sig9(0.99999999996), "1.00000000");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(2.5e-7), "2.50000000e-7");
    }

    #[test]
    fn log_grid_ends_at_e_max() {
        let spec = SweepSpec {
            e_min: 0.001,
            e_max: 0.2071,
            points: 30,
            grid: None,
            xi: 0.0,
            levels: vec![NpaLevel::Two],
            tol: 1e-6,
            outputs: vec![Output::Analytic],
            search: SearchConfig::default(),
            timing: false,
        };
        let g = spec.grid();
        assert_eq!(g.len(), 30);
        assert!(g[0] > 0.001);
        assert_eq!(*g.last().unwrap(), 0.2071);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}

//! CSV/JSON emission with atomic writes.
//!
//! Every file is written to a temporary sibling and renamed into place, so a
//! crash never leaves a half-written dataset. Floats are formatted with
//! Rust's shortest round-trip representation (`.` decimal separator, no
//! locale dependence).

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::dynamics::SimulationResult;
use crate::pulse::ControlPulse;
use crate::Result;

/// Write `bytes` to `path` atomically (write-temp-then-rename).
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension(format!(
        "{}.tmp-{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Serialize `value` as pretty JSON and write it atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| crate::Error::Config(format!("json encoding: {e}")))?;
    body.push('\n');
    atomic_write(path, body.as_bytes())
}

/// Pulse samples as CSV with header `t,omega,delta`.
pub fn write_pulse_csv(path: &Path, samples: &[(f64, f64, f64)]) -> Result<()> {
    let mut s = String::from("t,omega,delta\n");
    for &(t, om, dl) in samples {
        s.push_str(&format!("{t},{om},{dl}\n"));
    }
    atomic_write(path, s.as_bytes())
}

/// Trajectory as CSV with header `t,omega,delta,p1,…,p_dim,fidelity`, the
/// fidelity column being the instantaneous overlap with `target` (row order
/// by time).
pub fn write_trajectory_csv(
    path: &Path,
    run: &SimulationResult,
    pulse: &ControlPulse,
    target: &nalgebra::DVector<num_complex::Complex64>,
) -> Result<()> {
    let dim = run.final_state().len();
    let mut header = String::from("t,omega,delta");
    for k in 1..=dim {
        header.push_str(&format!(",p{k}"));
    }
    header.push_str(",fidelity\n");
    let mut s = header;
    for (k, t) in run.times.iter().enumerate() {
        let om = pulse.omega(*t);
        let dl = pulse.delta(*t);
        s.push_str(&format!("{t},{om},{dl}"));
        for p in &run.populations[k] {
            s.push_str(&format!(",{p}"));
        }
        let overlap: num_complex::Complex64 = target
            .iter()
            .zip(run.states[k].iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        s.push_str(&format!(",{}\n", overlap.norm_sqr()));
    }
    atomic_write(path, s.as_bytes())
}

/// A named sweep dataset: first column is the parameter, the rest fidelities.
#[derive(Debug, Clone, Serialize)]
pub struct SweepData {
    pub name: String,
    /// Parameter column header (`delta` or `D`).
    pub param: String,
    pub columns: Vec<String>,
    /// `rows[k]` = `[param, col1, col2, …]`.
    pub rows: Vec<Vec<f64>>,
}

/// Sweep dataset as CSV with header `param,<columns…>`.
pub fn write_sweep_csv(path: &Path, data: &SweepData) -> Result<()> {
    let mut s = data.param.clone();
    for c in &data.columns {
        s.push(',');
        s.push_str(c);
    }
    s.push('\n');
    for row in &data.rows {
        let mut first = true;
        for v in row {
            if !first {
                s.push(',');
            }
            s.push_str(&format!("{v}"));
            first = false;
        }
        s.push('\n');
    }
    atomic_write(path, s.as_bytes())
}

//! Run configuration files (TOML, strict schema).
//!
//! A config either names a registry scenario or describes one inline with
//! `[model]` and `[ansatz]` blocks. Unknown keys are rejected. Example:
//!
//! ```toml
//! scenario = "heis-flip-optimal"
//! format = "csv"
//! steps_per_unit = 10000
//! quad_tol = 1e-10
//!
//! [sweep]
//! param = "delta"
//! lo = -0.5
//! hi = 0.5
//! step = 0.01
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::pulse::AnsatzSpec;
use crate::spinmodel::SpinSystemModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Registry scenario name; omit when the scenario is inline.
    pub scenario: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    /// Integrator step override (steps per unit time).
    pub steps_per_unit: Option<usize>,
    /// Quadrature tolerance override.
    pub quad_tol: Option<f64>,
    pub sweep: Option<SweepConfig>,
    /// Inline model block (alternative to `scenario`).
    pub model: Option<SpinSystemModel>,
    /// Inline ansatz block (alternative to `scenario`).
    pub ansatz: Option<AnsatzSpec>,
    /// Initial basis-state index of an inline scenario.
    pub initial: Option<usize>,
    /// Target basis-state index of an inline scenario.
    pub target: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: SweepParamName,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParamName {
    Delta,
    D,
}

impl std::str::FromStr for SweepParamName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(SweepParamName::Delta),
            "D" | "d" => Ok(SweepParamName::D),
            other => Err(Error::Config(format!(
                "unknown sweep parameter `{other}` (expected `delta` or `D`)"
            ))),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path)?;
        toml::from_str(&body).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg: RunConfig = toml::from_str(
            r#"
            scenario = "heis-flip-optimal"
            format = "json"
            steps_per_unit = 2000
            quad_tol = 1e-9

            [sweep]
            param = "delta"
            lo = -0.5
            hi = 0.5
            step = 0.1
            "#,
        )
        .unwrap();
        assert_eq!(cfg.scenario.as_deref(), Some("heis-flip-optimal"));
        assert_eq!(cfg.format, Some(OutputFormat::Json));
        assert_eq!(cfg.sweep.unwrap().param, SweepParamName::Delta);
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = toml::from_str::<RunConfig>("scenario = \"x\"\nbogus = 1\n");
        assert!(err.is_err());
        let err = toml::from_str::<RunConfig>(
            "[sweep]\nparam = \"delta\"\nlo = 0.0\nhi = 1.0\nstep = 0.1\nextra = 2\n",
        );
        assert!(err.is_err());
    }

    #[test]
    fn parses_inline_scenario() {
        let cfg: RunConfig = toml::from_str(
            r#"
            initial = 0
            target = 2

            [model]
            kind = "heisenberg_iso"
            j = 10.0
            dim = 3

            [ansatz]
            theta_family = "cubic"
            duration = 1.0
            kappa = "one"

            [ansatz.m_family.alpha_form]
            alpha = 0.125
            "#,
        )
        .unwrap();
        let model = cfg.model.unwrap();
        assert_eq!(model.j, 10.0);
        assert_eq!(model.b0, 1.0, "b0 defaults to 1");
        let ansatz = cfg.ansatz.unwrap();
        assert_eq!(ansatz.duration, 1.0);
    }

    #[test]
    fn ansatz_round_trips_through_toml() {
        use crate::pulse::{Kappa, MFamily, ThetaFamily};
        let spec = AnsatzSpec {
            theta_family: ThetaFamily::Sine,
            m_family: MFamily::AlphaForm { alpha: -0.2057 },
            duration: 1.0,
            kappa: Kappa::Sqrt2,
        };
        let body = toml::to_string(&spec).unwrap();
        let back: AnsatzSpec = toml::from_str(&body).unwrap();
        assert_eq!(back, spec);
        let spec = AnsatzSpec {
            theta_family: ThetaFamily::Cubic,
            m_family: MFamily::NForm { n: 2 },
            duration: 0.5,
            kappa: Kappa::Sqrt3,
        };
        let back: AnsatzSpec = toml::from_str(&toml::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}

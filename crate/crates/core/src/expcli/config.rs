//! Experiment configuration: JSON or flat `key = value` text.
//!
//! Flat grammar, one entry per line, `#` starts a comment:
//!
//! ```text
//! experiment = E2
//! scale_k = 12
//! set = elekes-ap:64
//! collinear_pins = -1,0; 0,0; 1,0
//! polynomials = x^2 + x*y + y^2; x + y
//! r_grid = 0.001, 0.01, 0.1
//! ```
//!
//! Lists of strings and of pins are separated by `;`, numeric lists by
//! `,`. Unset fields take the defaults of the chosen experiment.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::geomtools::default_r_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "E1")]
    SpecialForm,
    #[serde(rename = "E2")]
    PinnedTriple,
    #[serde(rename = "E3")]
    FourProjections,
    #[serde(rename = "E4")]
    EntropyGrowth,
    #[serde(rename = "E5")]
    CurvedFlat,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::SpecialForm,
        ExperimentKind::PinnedTriple,
        ExperimentKind::FourProjections,
        ExperimentKind::EntropyGrowth,
        ExperimentKind::CurvedFlat,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ExperimentKind::SpecialForm => "E1",
            ExperimentKind::PinnedTriple => "E2",
            ExperimentKind::FourProjections => "E3",
            ExperimentKind::EntropyGrowth => "E4",
            ExperimentKind::CurvedFlat => "E5",
        }
    }

    fn long_name(self) -> &'static str {
        match self {
            ExperimentKind::SpecialForm => "special_form",
            ExperimentKind::PinnedTriple => "pinned_triple",
            ExperimentKind::FourProjections => "four_projections",
            ExperimentKind::EntropyGrowth => "entropy_growth",
            ExperimentKind::CurvedFlat => "curved_flat",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    /// Accepts `E2`, `e2`, `pinned_triple` and `E2_PinnedTriple`.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ExperimentKind::ALL
            .into_iter()
            .find(|k| {
                let code = k.code().to_ascii_lowercase();
                norm == code
                    || norm == k.long_name()
                    || norm.strip_prefix(&format!("{code}_")).is_some_and(|rest| {
                        rest.replace('_', "") == k.long_name().replace('_', "")
                    })
            })
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub scale_k: u32,
    pub alpha: f64,
    pub kappa: f64,
    /// Planar set for E2 and E3.
    pub set: String,
    /// Factor sets for E4.
    pub set_a: String,
    pub set_b: String,
    /// Planar sets for E5.
    pub k_sets: Vec<String>,
    /// E1 battery, or the maps of E4. `random-sum` and `random-product`
    /// expand to seeded composed instances.
    pub polynomials: Vec<String>,
    /// Fourth projection `u(x) + v(y)` of E3.
    pub u: String,
    pub v: String,
    pub collinear_pins: Vec<(f64, f64)>,
    pub triangle_pins: Vec<(f64, f64)>,
    /// Squared instead of plain distances in E2.
    pub squared: bool,
    pub tolerance_c: f64,
    pub seed: u64,
    pub samples: usize,
    pub r_grid: Vec<f64>,
    /// Required area of the triangle pin triple.
    pub area_threshold: f64,
    /// Pass threshold for non-concentration audits.
    pub audit_threshold: f64,
    /// Also run at `scale_k + 2` and report drift.
    pub ladder: bool,
    /// Include wall-clock timings in the report (breaks byte determinism).
    pub timings: bool,
    pub output_path: Option<String>,
}

/// Keys naming constants the harness measures; configs may not set them.
const MEASURED_CONSTANTS: [&str; 7] = ["epsilon", "eps", "eta", "c", "c_alpha", "constant", "epsilon_alpha_kappa"];

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        let base = ExperimentConfig {
            experiment: kind,
            scale_k: 12,
            alpha: 1.0,
            kappa: 1.0,
            set: "elekes-ap:64".into(),
            set_a: "cantor:03".into(),
            set_b: "cantor:03".into(),
            k_sets: vec![],
            polynomials: vec![],
            u: "x^2".into(),
            v: "y".into(),
            collinear_pins: vec![(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
            triangle_pins: vec![(0.5, 0.0), (-0.5, 0.0), (0.0, 0.5)],
            squared: false,
            tolerance_c: 1.0,
            seed: 0,
            samples: 100_000,
            r_grid: default_r_grid(),
            area_threshold: 0.1,
            audit_threshold: 8.0,
            ladder: true,
            timings: false,
            output_path: None,
        };
        match kind {
            ExperimentKind::SpecialForm => ExperimentConfig {
                polynomials: ["x + y", "x*y", "x^2 + y^3", "random-sum", "x^2 + x*y + y^2"]
                    .map(String::from)
                    .to_vec(),
                ladder: false,
                ..base
            },
            ExperimentKind::PinnedTriple => base,
            ExperimentKind::FourProjections => ExperimentConfig {
                scale_k: 16,
                set: "grid-ap-dim:0.5".into(),
                ..base
            },
            ExperimentKind::EntropyGrowth => ExperimentConfig {
                scale_k: 16,
                alpha: 0.5,
                kappa: 0.5,
                polynomials: vec!["x^2 + x*y + y^2".into(), "x + y".into()],
                audit_threshold: 4.0,
                ..base
            },
            ExperimentKind::CurvedFlat => ExperimentConfig {
                k_sets: vec!["line:1024".into(), "circle:4096".into(), "grid-ap:64".into()],
                ..base
            },
        }
    }

    /// Range checks on the hypotheses' parameters.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let alpha_max = if self.experiment == ExperimentKind::EntropyGrowth { 1.0 } else { 2.0 };
        if !(self.kappa > 0.0 && self.kappa <= self.alpha && self.alpha < alpha_max) {
            return bad(format!(
                "need 0 < kappa <= alpha < {alpha_max}, got alpha = {}, kappa = {}",
                self.alpha, self.kappa
            ));
        }
        if !(2..=24).contains(&self.scale_k) {
            return bad(format!("scale_k must lie in 2..=24, got {}", self.scale_k));
        }
        if !(self.tolerance_c > 0.0 && self.tolerance_c.is_finite()) {
            return bad(format!("tolerance_c must be positive, got {}", self.tolerance_c));
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        if !(self.area_threshold >= 0.0 && self.audit_threshold > 0.0) {
            return bad("thresholds must be nonnegative".into());
        }
        if self.r_grid.is_empty() || self.r_grid.windows(2).any(|w| !(w[0] < w[1])) || self.r_grid[0] <= 0.0 {
            return bad("r_grid must be positive and strictly increasing".into());
        }
        if self.experiment == ExperimentKind::PinnedTriple
            && (self.collinear_pins.len() != 3 || self.triangle_pins.len() != 3)
        {
            return bad("E2 needs exactly three collinear and three triangle pins".into());
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        let Value::Object(map) = v else {
            return Err(Error::Config("config must be a JSON object".into()));
        };
        Self::from_map(map)
    }

    pub fn from_flat(text: &str) -> Result<Self> {
        let mut map = Map::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (key, val) = (key.trim(), val.trim());
            check_key(key)?;
            if map.contains_key(key) {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", n + 1)));
            }
            let value = flat_value(key, val).map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
            map.insert(key.to_string(), value);
        }
        Self::from_map(map)
    }

    /// JSON if the text starts with `{`, flat otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_flat(text)
        }
    }

    fn from_map(map: Map<String, Value>) -> Result<Self> {
        for key in map.keys() {
            check_key(key)?;
        }
        let kind: ExperimentKind = match map.get("experiment") {
            Some(Value::String(s)) => s.parse()?,
            Some(_) => return Err(Error::Config("`experiment` must be a string".into())),
            None => return Err(Error::Config("missing `experiment`".into())),
        };
        let Value::Object(mut merged) = serde_json::to_value(Self::defaults(kind)).expect("config serializes") else {
            unreachable!()
        };
        for (k, v) in map {
            merged.insert(k, v);
        }
        merged.insert("experiment".into(), serde_json::to_value(kind).expect("kind serializes"));
        let cfg: ExperimentConfig =
            serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn check_key(key: &str) -> Result<()> {
    if MEASURED_CONSTANTS.contains(&key) || key.starts_with("assumed_") {
        return Err(Error::Config(format!(
            "`{key}` names a constant the experiments measure; it cannot be supplied"
        )));
    }
    Ok(())
}

fn num(s: &str) -> std::result::Result<Value, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    serde_json::Number::from_f64(x).map(Value::Number).ok_or_else(|| format!("`{s}` is not finite"))
}

fn int(s: &str) -> std::result::Result<Value, String> {
    s.trim().parse::<u64>().map(Value::from).map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

fn flat_value(key: &str, val: &str) -> std::result::Result<Value, String> {
    let list = |sep: char| val.split(sep).map(str::trim).filter(|s| !s.is_empty());
    Ok(match key {
        "experiment" | "set" | "set_a" | "set_b" | "u" | "v" | "output_path" => Value::String(val.to_string()),
        "scale_k" | "seed" | "samples" => int(val)?,
        "alpha" | "kappa" | "tolerance_c" | "area_threshold" | "audit_threshold" => num(val)?,
        "squared" | "ladder" | "timings" => match val {
            "true" => Value::Bool(true),
            "false" => Value::Bool(false),
            _ => return Err(format!("`{val}` is not a boolean")),
        },
        "k_sets" | "polynomials" => Value::Array(list(';').map(|s| Value::String(s.into())).collect()),
        "r_grid" => Value::Array(list(',').map(num).collect::<std::result::Result<_, _>>()?),
        "collinear_pins" | "triangle_pins" => Value::Array(
            list(';')
                .map(|p| {
                    let (a, b) = p.split_once(',').ok_or_else(|| format!("pin `{p}` is not `x,y`"))?;
                    Ok(Value::Array(vec![num(a)?, num(b)?]))
                })
                .collect::<std::result::Result<_, String>>()?,
        ),
        _ => return Err(format!("unknown key `{key}`")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_json_agree() {
        let flat = "experiment = E2\nscale_k = 10  # smaller\ncollinear_pins = -1,0; 0,0; 1,0\nsquared = true\n";
        let a = ExperimentConfig::from_flat(flat).unwrap();
        assert_eq!(a.scale_k, 10);
        assert!(a.squared);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(ExperimentConfig::parse(&json).unwrap(), a);
        let b = ExperimentConfig::parse(r#"{"experiment": "pinned_triple", "scale_k": 10, "squared": true}"#).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kinds_parse() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.code().parse::<ExperimentKind>().unwrap(), k);
        }
        assert_eq!("E4_EntropyGrowth".parse::<ExperimentKind>().unwrap(), ExperimentKind::EntropyGrowth);
        assert_eq!("e5".parse::<ExperimentKind>().unwrap(), ExperimentKind::CurvedFlat);
        assert!("E6".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            "scale_k = 12",
            "experiment = E4\nepsilon = 0.1",
            "experiment = E4\nassumed_c = 2",
            "experiment = E4\nalpha = 1.2",
            "experiment = E2\nkappa = 1.5",
            "experiment = E2\nfoo = 1",
            "experiment = E2\nscale_k = 12\nscale_k = 13",
            "experiment = E2\nscale_k = -1",
            "experiment = E2\nsquared = yes",
            "experiment = E2\ncollinear_pins = 0,0; 1,0",
            "experiment E2",
        ] {
            assert!(matches!(ExperimentConfig::parse(bad), Err(Error::Config(_))), "accepted {bad:?}");
        }
        assert!(matches!(
            ExperimentConfig::parse(r#"{"experiment": "E1", "eta": 0.01}"#),
            Err(Error::Config(_))
        ));
        assert!(matches!(ExperimentConfig::parse("{nope"), Err(Error::Config(_))));
    }
}

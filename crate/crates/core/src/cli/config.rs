//! JSON run configurations.
//!
//! ```json
//! {"command": "verify-rate",
//!  "parameters": {"m": 1.0, "dipole": 1.0, "gamma": 1.0},
//!  "output_path": "out.json", "format": "json"}
//! ```
//!
//! Unknown keys are rejected with their path; defaults are filled in so the
//! echoed config reproduces the run exactly.

use std::path::PathBuf;

use serde_json::{json, Map, Value};

use super::CliError;
use crate::charge_model::{ChargeDistribution, PointCharge, RegularCharge};
use crate::dipole::{DipoleProblem, DEFAULT_WINDOW, WINDOW_POINTS};
use crate::dirac2d::{edge_energy_grid, Dirac2DConfig};
use crate::dirac_channel::{DiracChannelSpec, Kappa};
use crate::radial::log_eps_grid;

pub const DEFAULT_DIRAC2D_POINTS: usize = 4000;
pub const DEFAULT_DIRAC2D_K_MAX: f64 = 7.5;
/// Default energy window: `m - E` from `1e-2 m` to `1e-4 m`.
pub const DEFAULT_EDGE_WINDOW: (f64, f64, usize) = (1e-2, 1e-4, 17);
pub const DEFAULT_CHANNEL_WINDOW: [f64; 2] = [-20.0, 20.0];
pub const DEFAULT_MAX_COUNT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    MathieuRate,
    DipoleCount,
    VerifyRate,
    DiracChannel,
    Dirac2d,
    ChargeReport,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::MathieuRate,
        Command::DipoleCount,
        Command::VerifyRate,
        Command::DiracChannel,
        Command::Dirac2d,
        Command::ChargeReport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::MathieuRate => "mathieu-rate",
            Command::DipoleCount => "dipole-count",
            Command::VerifyRate => "verify-rate",
            Command::DiracChannel => "dirac-channel",
            Command::Dirac2d => "dirac2d",
            Command::ChargeReport => "charge-report",
        }
    }

    pub fn parse(name: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| CliError::UnknownCommand(name.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    MathieuRate {
        p: f64,
    },
    DipoleCount {
        m: f64,
        dipole: f64,
        gamma: f64,
        eps: Vec<f64>,
    },
    VerifyRate {
        m: f64,
        dipole: f64,
        gamma: f64,
    },
    DiracChannel {
        kappa: Kappa,
        nu: f64,
        theta: f64,
        window: [f64; 2],
        max_count: usize,
    },
    Dirac2d(Dirac2DConfig),
    ChargeReport(ChargeDistribution),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// A JSON object whose keys are consumed one by one; leftovers are errors.
struct Obj<'a> {
    path: String,
    map: &'a Map<String, Value>,
    seen: Vec<&'static str>,
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn invalid(path: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Invalid {
        path: path.into(),
        msg: msg.into(),
    }
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<Obj<'a>, CliError> {
    match v {
        Value::Object(map) => Ok(Obj {
            path: path.to_string(),
            map,
            seen: Vec::new(),
        }),
        _ => Err(invalid(path, "expected an object")),
    }
}

fn as_f64(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| invalid(path, "expected a number"))
}

fn as_f64_list(v: &Value, path: &str) -> Result<Vec<f64>, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid(path, "expected an array of numbers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_f64(x, &format!("{path}[{i}]")))
        .collect()
}

fn as_fixed<const N: usize>(v: &Value, path: &str) -> Result<[f64; N], CliError> {
    let xs = as_f64_list(v, path)?;
    xs.try_into()
        .map_err(|_| invalid(path, format!("expected {N} numbers")))
}

impl<'a> Obj<'a> {
    fn get(&mut self, key: &'static str) -> Option<(&'a Value, String)> {
        self.seen.push(key);
        self.map.get(key).map(|v| (v, join(&self.path, key)))
    }

    fn f64_or(&mut self, key: &'static str, default: f64) -> Result<f64, CliError> {
        match self.get(key) {
            Some((v, p)) => as_f64(v, &p),
            None => Ok(default),
        }
    }

    fn f64_req(&mut self, key: &'static str) -> Result<f64, CliError> {
        match self.get(key) {
            Some((v, p)) => as_f64(v, &p),
            None => Err(invalid(join(&self.path, key), "missing required number")),
        }
    }

    fn usize_or(&mut self, key: &'static str, default: usize) -> Result<usize, CliError> {
        match self.get(key) {
            Some((v, p)) => v
                .as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| invalid(p, "expected a nonnegative integer")),
            None => Ok(default),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        let mut extra: Vec<&String> = self
            .map
            .keys()
            .filter(|k| !self.seen.contains(&k.as_str()))
            .collect();
        extra.sort();
        match extra.first() {
            Some(k) => Err(invalid(join(&self.path, k), "unknown key")),
            None => Ok(()),
        }
    }
}

fn module(path: &str, e: crate::Error) -> CliError {
    invalid(path, e.to_string())
}

fn parse_params(command: Command, v: Option<&Value>) -> Result<Params, CliError> {
    let empty = Value::Object(Map::new());
    let mut o = as_obj(v.unwrap_or(&empty), "parameters")?;
    let params = match command {
        Command::MathieuRate => {
            let p = o.f64_req("p")?;
            if !(p.is_finite() && p >= 0.0) {
                return Err(invalid("parameters.p", "p must be a nonnegative number"));
            }
            Params::MathieuRate { p }
        }
        Command::DipoleCount | Command::VerifyRate => {
            let m = o.f64_or("m", 1.0)?;
            let dipole = o.f64_req("dipole")?;
            let gamma = o.f64_or("gamma", 1.0)?;
            DipoleProblem::new(m, dipole, gamma).map_err(|e| module("parameters", e))?;
            if command == Command::VerifyRate {
                Params::VerifyRate { m, dipole, gamma }
            } else {
                let eps = match o.get("eps") {
                    Some((v, p)) => {
                        let eps = as_f64_list(v, &p)?;
                        if eps.is_empty() {
                            return Err(invalid(p, "eps grid is empty"));
                        }
                        if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
                            return Err(invalid(p, "eps values must be positive"));
                        }
                        if eps.windows(2).any(|w| w[1] >= w[0]) {
                            return Err(invalid(p, "eps values must be strictly descending"));
                        }
                        eps
                    }
                    None => log_eps_grid(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1, WINDOW_POINTS)
                        .expect("default window is valid"),
                };
                Params::DipoleCount {
                    m,
                    dipole,
                    gamma,
                    eps,
                }
            }
        }
        Command::DiracChannel => {
            let k = o.f64_req("kappa")?;
            let kappa = Kappa::new(k).map_err(|e| module("parameters.kappa", e))?;
            let nu = o.f64_req("nu")?;
            let theta = o.f64_or("theta", 1.0)?;
            DiracChannelSpec::new(kappa, nu, theta).map_err(|e| module("parameters", e))?;
            let window = match o.get("window") {
                Some((v, p)) => {
                    let w = as_fixed::<2>(v, &p)?;
                    if !(w[0].is_finite() && w[1].is_finite() && w[0] < w[1]) {
                        return Err(invalid(p, "window must be [lo, hi] with lo < hi"));
                    }
                    w
                }
                None => DEFAULT_CHANNEL_WINDOW,
            };
            let max_count = o.usize_or("max_count", DEFAULT_MAX_COUNT)?;
            Params::DiracChannel {
                kappa,
                nu,
                theta,
                window,
                max_count,
            }
        }
        Command::Dirac2d => {
            let m = o.f64_or("m", 1.0)?;
            let dipole = o.f64_req("dipole")?;
            let n_r = o.usize_or("n_r", DEFAULT_DIRAC2D_POINTS)?;
            let k = o.f64_or("k_max", DEFAULT_DIRAC2D_K_MAX)?;
            let k_max = Kappa::new(k).map_err(|e| module("parameters.k_max", e))?;
            let energies = match o.get("energies") {
                Some((v, p)) => {
                    let e = as_f64_list(v, &p)?;
                    if e.len() < 3 {
                        return Err(invalid(p, "need at least 3 energies for a slope fit"));
                    }
                    e
                }
                None => {
                    let (hi, lo, n) = DEFAULT_EDGE_WINDOW;
                    if !(m.is_finite() && m > 0.0) {
                        return Err(invalid("parameters.m", "mass must be positive"));
                    }
                    edge_energy_grid(m, hi, lo, n).expect("default window is valid")
                }
            };
            let defaults = Dirac2DConfig::new(m, dipole, n_r, k_max, energies.clone())
                .map_err(|e| module("parameters", e))?;
            let r_min = o.f64_or("r_min", defaults.r_min)?;
            let r_max = o.f64_or("r_max", defaults.r_max)?;
            let cfg = Dirac2DConfig::with_radii(m, dipole, r_min, r_max, n_r, k_max, energies)
                .map_err(|e| module("parameters", e))?;
            Params::Dirac2d(cfg)
        }
        Command::ChargeReport => {
            let mut points = Vec::new();
            if let Some((v, p)) = o.get("points") {
                let arr = v
                    .as_array()
                    .ok_or_else(|| invalid(&p, "expected an array"))?;
                for (i, item) in arr.iter().enumerate() {
                    let mut q = as_obj(item, &format!("{p}[{i}]"))?;
                    let position = match q.get("position") {
                        Some((v, pp)) => as_fixed::<2>(v, &pp)?,
                        None => return Err(invalid(join(&q.path, "position"), "missing")),
                    };
                    let coupling = q.f64_req("coupling")?;
                    q.finish()?;
                    points.push(PointCharge { position, coupling });
                }
            }
            let mut regulars = Vec::new();
            if let Some((v, p)) = o.get("regulars") {
                let arr = v
                    .as_array()
                    .ok_or_else(|| invalid(&p, "expected an array"))?;
                for (i, item) in arr.iter().enumerate() {
                    let mut q = as_obj(item, &format!("{p}[{i}]"))?;
                    let center = match q.get("center") {
                        Some((v, pp)) => as_fixed::<3>(v, &pp)?,
                        None => return Err(invalid(join(&q.path, "center"), "missing")),
                    };
                    let total_charge = q.f64_req("total_charge")?;
                    let width = q.f64_req("width")?;
                    q.finish()?;
                    regulars.push(RegularCharge {
                        center,
                        total_charge,
                        width,
                    });
                }
            }
            if points.is_empty() && regulars.is_empty() {
                return Err(invalid("parameters", "at least one charge is required"));
            }
            Params::ChargeReport(ChargeDistribution::new(points, regulars))
        }
    };
    o.finish()?;
    Ok(params)
}

/// Parses and validates a JSON run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    parse_value(&root)
}

pub fn parse_value(root: &Value) -> Result<RunConfig, CliError> {
    let mut o = as_obj(root, "")?;
    let command = match o.get("command") {
        Some((Value::String(s), _)) => Command::parse(s)?,
        Some((_, p)) => return Err(invalid(p, "expected a string")),
        None => return Err(invalid("command", "missing command")),
    };
    let params = parse_params(command, o.get("parameters").map(|(v, _)| v))?;
    let output_path = match o.get("output_path") {
        Some((Value::String(s), _)) => Some(PathBuf::from(s)),
        Some((Value::Null, _)) | None => None,
        Some((_, p)) => return Err(invalid(p, "expected a string")),
    };
    let format = match o.get("format") {
        Some((Value::String(s), p)) => match s.as_str() {
            "json" => Format::Json,
            "csv" => Format::Csv,
            _ => return Err(invalid(p, format!("format must be json or csv, got {s:?}"))),
        },
        Some((_, p)) => return Err(invalid(p, "expected a string")),
        None => Format::Json,
    };
    o.finish()?;
    Ok(RunConfig {
        command,
        params,
        output_path,
        format,
    })
}

impl RunConfig {
    /// Canonical JSON form with every default spelled out.
    pub fn to_json(&self) -> Value {
        let parameters = match &self.params {
            Params::MathieuRate { p } => json!({ "p": p }),
            Params::DipoleCount {
                m,
                dipole,
                gamma,
                eps,
            } => json!({ "m": m, "dipole": dipole, "gamma": gamma, "eps": eps }),
            Params::VerifyRate { m, dipole, gamma } => {
                json!({ "m": m, "dipole": dipole, "gamma": gamma })
            }
            Params::DiracChannel {
                kappa,
                nu,
                theta,
                window,
                max_count,
            } => json!({
                "kappa": kappa.value(), "nu": nu, "theta": theta,
                "window": window, "max_count": max_count
            }),
            Params::Dirac2d(c) => json!({
                "m": c.m, "dipole": c.d_abs, "n_r": c.n_r, "k_max": c.k_max.value(),
                "energies": c.e_grid, "r_min": c.r_min, "r_max": c.r_max
            }),
            Params::ChargeReport(d) => json!({
                "points": d.points.iter().map(|p| json!({
                    "position": p.position, "coupling": p.coupling
                })).collect::<Vec<_>>(),
                "regulars": d.regulars.iter().map(|g| json!({
                    "center": g.center, "total_charge": g.total_charge, "width": g.width
                })).collect::<Vec<_>>(),
            }),
        };
        let mut root = json!({
            "command": self.command.name(),
            "parameters": parameters,
            "format": self.format.name(),
        });
        if let Some(p) = &self.output_path {
            root["output_path"] = json!(p.to_string_lossy());
        }
        root
    }
}

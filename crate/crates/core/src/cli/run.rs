use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use super::config::{Format, Params, RunConfig};
use super::CliError;
use crate::charge_model::{self, hypothesis_diagnostics};
use crate::dipole::{self, DipoleProblem};
use crate::dirac2d;
use crate::dirac_channel::{self, DiracChannelSpec, Shooting};
use crate::linalg::{EIGEN_ABS_TOL, MAX_REL_TOL, MIN_REL_TOL, ZERO_PIVOT_REL_TOL};
use crate::mathieu::{self, MathieuProblem};
use crate::radial;

/// Result of one command before serialization.
struct Outcome {
    results: Value,
    tolerances: Value,
    /// Header and rows for CSV output, when the command produces a table.
    table: Option<(&'static str, Vec<String>)>,
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn module_err(e: crate::Error) -> CliError {
    CliError::Module(e.to_string())
}

fn constants() -> Value {
    json!({
        "linalg.eigen_abs_tol": EIGEN_ABS_TOL,
        "linalg.zero_pivot_rel_tol": ZERO_PIVOT_REL_TOL,
        "linalg.min_rel_tol": MIN_REL_TOL,
        "linalg.max_rel_tol": MAX_REL_TOL,
        "mathieu.convergence_tol": mathieu::CONVERGENCE_TOL,
        "mathieu.max_doublings": mathieu::MAX_DOUBLINGS,
        "mathieu.mode_margin": mathieu::MODE_MARGIN,
        "radial.prufer_rel_tol": radial::PRUFER_REL_TOL,
        "radial.tail_margin": radial::TAIL_MARGIN,
        "dipole.window_points": dipole::WINDOW_POINTS,
        "dipole.default_window": dipole::DEFAULT_WINDOW,
        "dipole.shallow_window": dipole::SHALLOW_WINDOW,
        "dirac_channel.shooting_rel_tol": dirac_channel::SHOOTING_REL_TOL,
        "dirac_channel.eigen_tol": dirac_channel::EIGEN_TOL,
        "dirac2d.r_min_factor": dirac2d::R_MIN_FACTOR,
        "dirac2d.r_min_dipole_factor": dirac2d::R_MIN_DIPOLE_FACTOR,
        "dirac2d.r_max_factor": dirac2d::R_MAX_FACTOR,
        "dirac2d.reshift": dirac2d::RESHIFT,
        "charge_model.shell_tol": charge_model::SHELL_TOL,
        "charge_model.max_shell": charge_model::MAX_SHELL,
        "units": "hbar = v_F = 1; lengths in 1/m",
    })
}

fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.params {
        Params::MathieuRate { p } => {
            let spec = mathieu::spectrum(&MathieuProblem::new(*p).map_err(module_err)?)
                .map_err(module_err)?;
            let rows = spec
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, l)| format!("{i},{}", sci(*l)))
                .collect();
            Ok(Outcome {
                results: json!({
                    "p": p,
                    "rate": spec.rate,
                    "eigenvalues": spec.eigenvalues,
                    "negative_count": spec.negative().count(),
                    "n_modes": spec.problem.n_modes(),
                }),
                tolerances: json!({ "eigenvalue_abs": EIGEN_ABS_TOL, "truncation": mathieu::CONVERGENCE_TOL }),
                table: Some(("index,eigenvalue", rows)),
            })
        }
        Params::DipoleCount {
            m,
            dipole,
            gamma,
            eps,
        } => {
            let prob = DipoleProblem::new(*m, *dipole, *gamma).map_err(module_err)?;
            let curve = dipole::counting_curve(&prob, eps).map_err(module_err)?;
            let rows = curve
                .eps
                .iter()
                .zip(&curve.counts)
                .map(|(e, n)| format!("{},{n}", sci(*e)))
                .collect();
            let fit = if curve.len() >= 3 {
                curve.fit().ok().map(|f| json!(f))
            } else {
                None
            };
            Ok(Outcome {
                results: json!({
                    "p": prob.p,
                    "epsilon": curve.eps,
                    "count": curve.counts,
                    "fit": fit,
                    "note": dipole::EDGE_FACTOR_NOTE,
                }),
                tolerances: json!({ "prufer_rel": radial::PRUFER_REL_TOL }),
                table: Some(("epsilon,count", rows)),
            })
        }
        Params::VerifyRate { m, dipole, gamma } => {
            let prob = DipoleProblem::new(*m, *dipole, *gamma).map_err(module_err)?;
            let r = dipole::verify_rate(&prob).map_err(module_err)?;
            let rows = r
                .curve
                .eps
                .iter()
                .zip(&r.curve.counts)
                .map(|(e, n)| format!("{},{n}", sci(*e)))
                .collect();
            Ok(Outcome {
                results: json!({
                    "p": prob.p,
                    "fitted_slope": r.fitted_slope,
                    "predicted_rate": r.predicted_rate,
                    "rel_err": r.rel_err,
                    "stderr": r.stderr,
                    "window": r.window,
                    "epsilon": r.curve.eps,
                    "count": r.curve.counts,
                }),
                tolerances: json!({ "prufer_rel": radial::PRUFER_REL_TOL }),
                table: Some(("epsilon,count", rows)),
            })
        }
        Params::DiracChannel {
            kappa,
            nu,
            theta,
            window,
            max_count,
        } => {
            let spec = DiracChannelSpec::new(*kappa, *nu, *theta).map_err(module_err)?;
            let ev = dirac_channel::eigenvalues(&spec, (window[0], window[1]), *max_count)
                .map_err(module_err)?;
            let rows = ev
                .iter()
                .enumerate()
                .map(|(i, l)| format!("{i},{}", sci(*l)))
                .collect();
            Ok(Outcome {
                results: json!({
                    "classification": dirac_channel::classify(*kappa, *nu),
                    "exponent": spec.exponent(),
                    "r0": Shooting::for_spec(&spec).r0,
                    "eigenvalues": ev,
                }),
                tolerances: json!({
                    "shooting_rel": dirac_channel::SHOOTING_REL_TOL,
                    "eigenvalue_abs": dirac_channel::EIGEN_TOL,
                }),
                table: Some(("index,eigenvalue", rows)),
            })
        }
        Params::Dirac2d(c) => {
            let g = dirac2d::gap_slope(c).map_err(module_err)?;
            let rows = g
                .energies
                .iter()
                .zip(&g.counts)
                .map(|(e, n)| format!("{},{n}", sci(*e)))
                .collect();
            Ok(Outcome {
                results: json!({
                    "E": g.energies,
                    "count": g.counts,
                    "fit": g.fit,
                    "predicted_rate": g.predicted_rate,
                    "coarse_slope": g.coarse_slope,
                    "coarse_stderr": g.coarse_stderr,
                    "grid_converged": g.grid_converged,
                    "suggested_k_max": dirac2d::choose_k_max(2.0 * c.m * c.d_abs).ok().map(|k| k.value()),
                }),
                tolerances: json!({
                    "zero_pivot_rel": ZERO_PIVOT_REL_TOL,
                    "reshift": dirac2d::RESHIFT,
                }),
                table: Some(("E,count", rows)),
            })
        }
        Params::ChargeReport(dist) => {
            let report = hypothesis_diagnostics(dist);
            Ok(Outcome {
                results: json!(report),
                tolerances: json!({
                    "neutrality": charge_model::NEUTRALITY_TOL,
                    "shell": charge_model::SHELL_TOL,
                }),
                table: None,
            })
        }
    }
}

/// Renders the report for `cfg`. Output is byte-identical across runs
/// unless `timing` is set.
pub fn render(cfg: &RunConfig, timing: bool) -> Result<String, CliError> {
    let start = Instant::now();
    let out = execute(cfg)?;
    let echo = cfg.to_json();
    match cfg.format {
        Format::Json => {
            let mut root = json!({
                "config": echo,
                "results": out.results,
                "tolerances": out.tolerances,
                "constants": constants(),
            });
            if timing {
                root["wall_time_s"] = json!(start.elapsed().as_secs_f64());
            }
            let mut s = serde_json::to_string_pretty(&root).expect("serializable report");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let (header, rows) = out.table.ok_or_else(|| CliError::Invalid {
                path: "format".into(),
                msg: format!("{} has no tabular output; use json", cfg.command.name()),
            })?;
            let mut s = String::new();
            writeln!(s, "# config: {echo}").unwrap();
            if timing {
                writeln!(s, "# wall_time_s: {}", start.elapsed().as_secs_f64()).unwrap();
            }
            writeln!(s, "{header}").unwrap();
            for r in rows {
                writeln!(s, "{r}").unwrap();
            }
            Ok(s)
        }
    }
}

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

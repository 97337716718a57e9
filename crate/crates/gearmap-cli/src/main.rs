//! Command-line frontend: mapping runs, parameter inversion, region sweeps
//! and the applications, exported as labeled polyline sets.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use gearmap::curves::{CurveRole, CurveSet, RunConfig};
use gearmap::geartools::{multitooth, renormalized_gear_map, EdgeLabel};
use gearmap::rectmap::{
    alpha_roots, corner_jets, exterior_modulus_annular_rectangle, map_rectangle,
    mu_from_lambda, RectMap, RectParams,
};
use gearmap::solver::{invert, lambda_bounds, level_curves, InvertOptions, LevelKind};
use gearmap::spps::{lambda_functionals, SppsOptions};
use gearmap::{
    elliptic, goodman_ratio_integral, goodman_ratio_jet, GearParams, MapParams,
};

/// Parse a real number, allowing a π (or "pi") multiplier suffix.
fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    for suffix in ["π", "pi"] {
        if let Some(prefix) = s.strip_suffix(suffix) {
            let factor = if prefix.is_empty() || prefix == "+" {
                1.0
            } else if prefix == "-" {
                -1.0
            } else {
                prefix
                    .parse::<f64>()
                    .map_err(|e| format!("bad numeric prefix '{prefix}': {e}"))?
            };
            return Ok(factor * std::f64::consts::PI);
        }
    }
    s.parse::<f64>().map_err(|e| format!("bad number '{s}': {e}"))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid must look like 17x9, got '{s}'"))?;
    let w = w.parse::<usize>().map_err(|e| e.to_string())?;
    let h = h.parse::<usize>().map_err(|e| e.to_string())?;
    if w < 2 || h < 2 {
        return Err("grid needs at least 2 lines each way".into());
    }
    Ok((w, h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output path (JSON/SVG file, or stem for per-curve CSV files).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// ODE local error tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// JSON file with the same keys as the long flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "gearmap",
    version,
    about = "Conformal maps from the disk and from rectangles onto one-tooth gear domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map the unit disk onto a gear and export the boundary edges.
    #[command(allow_negative_numbers = true)]
    MapDisk {
        /// Prevertex angle t in (0, π/2); accepts a π suffix, e.g. 0.25π.
        #[arg(long, value_parser = parse_real)]
        t: Option<f64>,
        /// Accessory parameter λ.
        #[arg(long)]
        lambda: Option<f64>,
        /// Boundary samples per edge.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Map the conformal rectangle onto a gear and export mesh-line images.
    #[command(allow_negative_numbers = true)]
    MapRect {
        /// Imaginary part of the period ratio τ (the ratio is τ = i·this).
        #[arg(long, value_parser = parse_real)]
        tau: Option<f64>,
        /// Accessory parameter μ.
        #[arg(long)]
        mu: Option<f64>,
        /// Alternatively derive (τ, μ) from disk-side t…
        #[arg(long, value_parser = parse_real)]
        t: Option<f64>,
        /// …and λ.
        #[arg(long)]
        lambda: Option<f64>,
        /// Pick the α root with unbounded image instead of the bounded one.
        #[arg(long)]
        unbounded: bool,
        /// Mesh lines as WxH, e.g. 17x9.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve (β, γ) → (t, λ).
    #[command(allow_negative_numbers = true)]
    Invert {
        /// Gear ratio β > 1.
        #[arg(long)]
        beta: Option<f64>,
        /// Gear angle γ in (0, π); accepts a π suffix.
        #[arg(long, value_parser = parse_real)]
        gamma: Option<f64>,
        /// Initial guess for t.
        #[arg(long, value_parser = parse_real)]
        guess_t: Option<f64>,
        /// Initial guess for λ.
        #[arg(long)]
        guess_lambda: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Level curves of constant log β and constant γ over the region.
    #[command(allow_negative_numbers = true)]
    Region {
        /// Comma list of log β values, e.g. 0.2,0.4.
        #[arg(long, value_parser = parse_real, value_delimiter = ',')]
        beta_levels: Option<Vec<f64>>,
        /// Comma list of γ values, e.g. 0.1π,0.5π.
        #[arg(long, value_parser = parse_real, value_delimiter = ',')]
        gamma_levels: Option<Vec<f64>>,
        /// Smallest t of the sweep.
        #[arg(long, value_parser = parse_real)]
        t_min: Option<f64>,
        /// Largest t of the sweep.
        #[arg(long, value_parser = parse_real)]
        t_max: Option<f64>,
        /// Number of t samples.
        #[arg(long)]
        t_steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Regular n-tooth domain from a centered one-tooth gear map.
    #[command(allow_negative_numbers = true)]
    Multitooth {
        /// Number of teeth.
        #[arg(long)]
        n_teeth: Option<u32>,
        /// Disk-side parameter t…
        #[arg(long, value_parser = parse_real)]
        t: Option<f64>,
        /// …and λ; alternatively give --beta/--gamma to invert first.
        #[arg(long)]
        lambda: Option<f64>,
        /// Desired one-tooth gear ratio (used with --gamma).
        #[arg(long)]
        beta: Option<f64>,
        /// Desired one-tooth gear angle (used with --beta).
        #[arg(long, value_parser = parse_real)]
        gamma: Option<f64>,
        /// Boundary samples per edge of the one-tooth gear.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Conformal module of the exterior of an annular rectangle.
    #[command(allow_negative_numbers = true)]
    Modulus {
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_parser = parse_real)]
        gamma: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The first-Maclaurin-coefficient ratio, by pipeline and by integral.
    #[command(allow_negative_numbers = true)]
    Goodman {
        /// Outer prevertex angle t₁ ∈ [0, t₂).
        #[arg(long, value_parser = parse_real)]
        t1: Option<f64>,
        /// Inner prevertex angle t₂ ∈ (t₁, π).
        #[arg(long, value_parser = parse_real)]
        t2: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Diagnostic: series solutions against direct integration.
    #[command(allow_negative_numbers = true)]
    SppsCheck {
        #[arg(long, value_parser = parse_real)]
        t: Option<f64>,
        /// Series order.
        #[arg(long)]
        spps_order: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Fill missing option values from a JSON config file with flag-named keys.
struct ConfigFile {
    values: serde_json::Map<String, serde_json::Value>,
}

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<Self, String> {
        let values = match path {
            None => serde_json::Map::new(),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                let v: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))?;
                match v {
                    serde_json::Value::Object(m) => m,
                    _ => return Err("config must be a JSON object".into()),
                }
            }
        };
        Ok(ConfigFile { values })
    }

    fn real(&self, key: &str, flag: Option<f64>) -> Option<f64> {
        flag.or_else(|| {
            self.values.get(key).and_then(|v| match v {
                serde_json::Value::Number(n) => n.as_f64(),
                serde_json::Value::String(s) => parse_real(s).ok(),
                _ => None,
            })
        })
    }

    fn integer(&self, key: &str, flag: Option<usize>) -> Option<usize> {
        flag.or_else(|| self.values.get(key).and_then(|v| v.as_u64()).map(|v| v as usize))
    }
}

fn require(name: &str, v: Option<f64>) -> Result<f64, String> {
    v.ok_or_else(|| format!("missing required value --{name} (flag or config)"))
}

enum Failure {
    Usage(String),
    Numerical(gearmap::Error),
    Io(String),
}

impl From<gearmap::Error> for Failure {
    fn from(e: gearmap::Error) -> Self {
        Failure::Numerical(e)
    }
}

fn write_output(set: &mut CurveSet, out: &OutputArgs) -> Result<(), Failure> {
    set.finalize();
    let path = match &out.out {
        Some(p) => p.clone(),
        None => {
            print!("{}", set.to_json());
            return Ok(());
        }
    };
    match out.format {
        Format::Json => {
            fs::write(&path, set.to_json()).map_err(|e| Failure::Io(e.to_string()))?;
        }
        Format::Svg => {
            fs::write(&path, set.to_svg()).map_err(|e| Failure::Io(e.to_string()))?;
        }
        Format::Csv => {
            let stem = path.with_extension("");
            for (suffix, body) in set.to_csv_files() {
                let file = PathBuf::from(format!("{}.{}", stem.display(), suffix));
                fs::write(&file, body).map_err(|e| Failure::Io(e.to_string()))?;
            }
        }
    }
    Ok(())
}

fn run_config(tol: Option<f64>) -> RunConfig {
    let mut cfg = RunConfig::default();
    if let Some(t) = tol {
        cfg.ode_tol = t;
    }
    cfg
}

fn params_map(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::MapDisk {
            t,
            lambda,
            samples,
            output,
        } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let t = require("t", cfgf.real("t", t)).map_err(Failure::Usage)?;
            let lambda = require("lambda", cfgf.real("lambda", lambda)).map_err(Failure::Usage)?;
            let tol = cfgf.real("tol", output.tol);
            let samples = cfgf
                .integer("samples", samples)
                .unwrap_or(RunConfig::default().samples_per_edge);
            let cfg = run_config(tol);
            let params = MapParams::new(t, lambda)?;
            let gear = renormalized_gear_map(&params, cfg.ode_tol)?;
            let trace = gear.trace_boundary(samples)?;
            let mut set = CurveSet::new(
                "map-disk",
                params_map(&[
                    ("t", format!("{t}")),
                    ("lambda", format!("{lambda}")),
                    ("beta", format!("{}", gear.gear.beta)),
                    ("gamma", format!("{}", gear.gear.gamma)),
                ]),
                cfg,
            );
            for label in [
                EdgeLabel::InnerArc,
                EdgeLabel::OuterArc,
                EdgeLabel::ToothUpper,
                EdgeLabel::ToothLower,
            ] {
                set.push_complex(label.as_str(), CurveRole::BoundaryEdge, &trace.edge(label).points)?;
            }
            println!(
                "beta = {:.12}\ngamma = {:.12}",
                gear.gear.beta, gear.gear.gamma
            );
            write_output(&mut set, &output)
        }
        Command::MapRect {
            tau,
            mu,
            t,
            lambda,
            unbounded,
            grid,
            output,
        } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let tau = cfgf.real("tau", tau);
            let mu = cfgf.real("mu", mu);
            let t = cfgf.real("t", t);
            let lambda = cfgf.real("lambda", lambda);
            let (tau, mu) = match (tau, mu, t, lambda) {
                (Some(tau), Some(mu), _, _) => (tau, mu),
                (_, _, Some(t), Some(lambda)) => {
                    let m = elliptic::module_m(t)?;
                    (m, mu_from_lambda(t, lambda))
                }
                _ => {
                    return Err(Failure::Usage(
                        "need either --tau and --mu, or --t and --lambda".into(),
                    ))
                }
            };
            let cfg = run_config(cfgf.real("tol", output.tol));
            let (gw, gh) = grid.unwrap_or((cfg.grid_w, cfg.grid_h));
            let lat = elliptic::lattice_from_tau(Complex64::new(0.0, tau))?;
            let rparams = RectParams::new(Complex64::new(0.0, tau), mu)?;
            let jets = corner_jets(&rparams, &lat, cfg.ode_tol)?;
            let roots = alpha_roots(&jets)?;
            let mut chosen = None;
            for &alpha in &roots.roots {
                let map = RectMap::new(rparams, lat.clone(), alpha, cfg.ode_tol);
                if map.is_bounded()? != unbounded {
                    chosen = Some(map);
                    break;
                }
            }
            let map = chosen.ok_or_else(|| {
                Failure::Numerical(gearmap::Error::NoRoot {
                    detail: "no α root with the requested boundedness".into(),
                })
            })?;
            let curves = map_rectangle(&map, gw, gh)?;
            let mut set = CurveSet::new(
                "map-rect",
                params_map(&[
                    ("tau", format!("{tau}")),
                    ("mu", format!("{mu}")),
                    ("alpha", format!("{}", map.alpha)),
                    ("grid", format!("{gw}x{gh}")),
                ]),
                cfg,
            );
            for (i, v) in curves.vertical.iter().enumerate() {
                set.push_complex(format!("vertical-{i:02}"), CurveRole::MeshLine, v)?;
            }
            for (i, h) in curves.horizontal.iter().enumerate() {
                set.push_complex(format!("horizontal-{i:02}"), CurveRole::MeshLine, h)?;
            }
            set.push_complex("tooth-upper", CurveRole::BoundaryEdge, &curves.tooth_upper)?;
            set.push_complex("tooth-lower", CurveRole::BoundaryEdge, &curves.tooth_lower)?;
            set.push_complex("inner-arc", CurveRole::BoundaryEdge, &curves.inner_arc)?;
            set.push_complex("outer-arc", CurveRole::BoundaryEdge, &curves.outer_arc)?;
            println!("alpha = {:.12}", map.alpha);
            write_output(&mut set, &output)
        }
        Command::Invert {
            beta,
            gamma,
            guess_t,
            guess_lambda,
            output,
        } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let beta = require("beta", cfgf.real("beta", beta)).map_err(Failure::Usage)?;
            let gamma = require("gamma", cfgf.real("gamma", gamma)).map_err(Failure::Usage)?;
            let mut opts = InvertOptions::default();
            if let Some(tol) = cfgf.real("tol", output.tol) {
                opts.ode_tol = tol;
            }
            let guess = match (cfgf.real("guess-t", guess_t), cfgf.real("guess-lambda", guess_lambda)) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            };
            let target = GearParams::new(beta, gamma)?;
            let p = invert(&target, guess, &opts)?;
            println!("t = {:.12}\nlambda = {:.12}", p.t, p.lambda);
            Ok(())
        }
        Command::Region {
            beta_levels,
            gamma_levels,
            t_min,
            t_max,
            t_steps,
            output,
        } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let t_min = cfgf.real("t-min", t_min).unwrap_or(0.05);
            let t_max = cfgf
                .real("t-max", t_max)
                .unwrap_or(std::f64::consts::FRAC_PI_2 - 0.02);
            let steps = cfgf.integer("t-steps", t_steps).unwrap_or(40);
            let cfg = run_config(cfgf.real("tol", output.tol));
            let t_grid: Vec<f64> = (0..steps)
                .map(|i| t_min + (t_max - t_min) * i as f64 / (steps - 1).max(1) as f64)
                .collect();
            let mut set = CurveSet::new(
                "region",
                params_map(&[
                    ("t-min", format!("{t_min}")),
                    ("t-max", format!("{t_max}")),
                    ("t-steps", format!("{steps}")),
                ]),
                cfg.clone(),
            );
            let mut emit = |curves: Vec<gearmap::LevelCurve>| -> Result<(), Failure> {
                for c in curves {
                    let pts: Vec<(f64, f64)> = c.points.clone();
                    set.push_xy(c.label.clone(), CurveRole::LevelCurve, &pts)?;
                }
                Ok(())
            };
            if let Some(values) = beta_levels {
                emit(level_curves(LevelKind::LogBeta, &values, &t_grid, cfg.ode_tol))?;
            }
            if let Some(values) = gamma_levels {
                emit(level_curves(LevelKind::Gamma, &values, &t_grid, cfg.ode_tol))?;
            }
            // Region boundary curves for reference.
            let upper: Vec<(f64, f64)> = t_grid.iter().map(|&t| (t, lambda_bounds(t).1)).collect();
            let lower: Vec<(f64, f64)> = t_grid.iter().map(|&t| (t, lambda_bounds(t).0)).collect();
            set.push_xy("region-upper", CurveRole::BoundaryEdge, &upper)?;
            set.push_xy("region-lower", CurveRole::BoundaryEdge, &lower)?;
            write_output(&mut set, &output)
        }
        Command::Multitooth {
            n_teeth,
            t,
            lambda,
            beta,
            gamma,
            samples,
            output,
        } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let n = cfgf
                .integer("n-teeth", n_teeth.map(|v| v as usize))
                .ok_or_else(|| Failure::Usage("missing --n-teeth".into()))? as u32;
            let cfg = run_config(cfgf.real("tol", output.tol));
            let samples = cfgf
                .integer("samples", samples)
                .unwrap_or(RunConfig::default().samples_per_edge);
            let (t, lambda) = match (
                cfgf.real("t", t),
                cfgf.real("lambda", lambda),
                cfgf.real("beta", beta),
                cfgf.real("gamma", gamma),
            ) {
                (Some(t), Some(lambda), _, _) => (t, lambda),
                (_, _, Some(beta), Some(gamma)) => {
                    let opts = InvertOptions {
                        ode_tol: cfg.ode_tol.min(1e-11),
                        ..InvertOptions::default()
                    };
                    let p = invert(&GearParams::new(beta, gamma)?, None, &opts)?;
                    (p.t, p.lambda)
                }
                _ => {
                    return Err(Failure::Usage(
                        "need either --t and --lambda, or --beta and --gamma".into(),
                    ))
                }
            };
            let params = MapParams::new(t, lambda)?;
            let gear = renormalized_gear_map(&params, cfg.ode_tol)?;
            let mt = multitooth(&gear, n)?;
            let boundary = mt.boundary(samples)?;
            let mut set = CurveSet::new(
                "multitooth",
                params_map(&[
                    ("t", format!("{t}")),
                    ("lambda", format!("{lambda}")),
                    ("n-teeth", format!("{n}")),
                    ("one-tooth-beta", format!("{}", gear.gear.beta)),
                    ("one-tooth-gamma", format!("{}", gear.gear.gamma)),
                ]),
                cfg,
            );
            for (label, pts) in &boundary {
                set.push_complex(label.clone(), CurveRole::BoundaryEdge, pts)?;
            }
            println!(
                "one-tooth beta = {:.9}, gamma = {:.9}; n-tooth ratio = {:.9}",
                gear.gear.beta,
                gear.gear.gamma,
                gear.gear.beta.powf(1.0 / n as f64)
            );
            write_output(&mut set, &output)
        }
        Command::Modulus { beta, gamma, output } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let beta = require("beta", cfgf.real("beta", beta)).map_err(Failure::Usage)?;
            let gamma = require("gamma", cfgf.real("gamma", gamma)).map_err(Failure::Usage)?;
            let mut opts = InvertOptions::default();
            if let Some(tol) = cfgf.real("tol", output.tol) {
                opts.ode_tol = tol;
            }
            let modulus = exterior_modulus_annular_rectangle(beta, gamma, &opts)?;
            println!("exterior modulus = {modulus:.12}");
            Ok(())
        }
        Command::Goodman { t1, t2, output } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let t1 = require("t1", cfgf.real("t1", t1)).map_err(Failure::Usage)?;
            let t2 = require("t2", cfgf.real("t2", t2)).map_err(Failure::Usage)?;
            let tol = cfgf.real("tol", output.tol).unwrap_or(1e-11);
            let jet = goodman_ratio_jet(t1, t2, tol)?;
            let integral = goodman_ratio_integral(t1, t2, 1e-10)?;
            println!(
                "ratio (pipeline) = {jet:.12}\nratio (integral) = {integral:.12}\ndifference = {:.3e}",
                (jet - integral).abs()
            );
            Ok(())
        }
        Command::SppsCheck { t, spps_order, output } => {
            let cfgf = ConfigFile::load(output.config.as_deref()).map_err(Failure::Usage)?;
            let t = require("t", cfgf.real("t", t)).map_err(Failure::Usage)?;
            let mut opts = SppsOptions::default();
            if let Some(n) = cfgf.integer("spps-order", spps_order) {
                opts.order = n;
            }
            let tol = cfgf.real("tol", output.tol).unwrap_or(1e-11);
            let f = lambda_functionals(t, &opts)?;
            let (lo, hi) = f.domain;
            let mut worst = 0.0f64;
            for i in 1..=9 {
                let lambda = lo + (hi - lo) * i as f64 / 10.0;
                let (j1, ji, jm1) = f.jets(lambda)?;
                let map = gearmap::DiskMap::symmetric(MapParams::new(t, lambda)?, tol);
                for (spps, z) in [
                    (j1, Complex64::new(1.0, 0.0)),
                    (ji, Complex64::new(0.0, 1.0)),
                    (jm1, Complex64::new(-1.0, 0.0)),
                ] {
                    let ode = map.jet_at(z)?;
                    worst = worst
                        .max((spps.value - ode.value).norm())
                        .max((spps.d1 - ode.d1).norm())
                        .max((spps.d2 - ode.d2).norm());
                }
            }
            println!(
                "max |spps − ode| over 9 λ × 3 rays at t = {t}: {worst:.3e} (order {})",
                opts.order
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("io error: {msg}");
            ExitCode::from(4)
        }
    }
}

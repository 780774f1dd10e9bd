//! `explab`: generate dyadic sets, audit them, measure images and energies,
//! build Whitney decompositions and run the canned experiments.
//!
//! Exit codes: 0 success, 1 other failure, 2 configuration or usage error,
//! 3 a hypothesis audit failed (the report is still written).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use explab_core::dyadic::{audit_nonconcentration, audit_nonconcentration_2d, AnySet, NonConcentrationAudit};
use explab_core::energy::energy_count;
use explab_core::expcli::{self, emit_report, run_experiment, ExperimentConfig, Format};
use explab_core::geomtools::{
    verify_whitney, whitney_decompose, Domain, OpenUnitCube, PolynomialComplement, UnitSquareMinusDiagonal,
};
use explab_core::project::{image_at_scale, ProjectionFamily};
use explab_core::{BivariatePoly, Error, Exec};

#[derive(Parser, Debug)]
#[command(name = "explab", version, about = "Discretized projection and expansion experiments")]
struct Cli {
    /// Scale k (cells of side 2^-k); overrides the config for `run`.
    #[arg(long, global = true)]
    scale_k: Option<u32>,
    /// Random seed; overrides the config for `run`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Run kernels on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a set file from a recipe such as `ap:64`, `cantor:03`, `grid-ap:32`, `elekes-ap:16`.
    Gen { recipe: String },
    /// Non-concentration audit of a set file (ball form for planar sets).
    Audit {
        set: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Defaults to alpha.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 4.0)]
        threshold: f64,
    },
    /// Image of a planar set file under `linear:A,B`, `pinned:X,Y`, `pinned-sq:X,Y`, `graph:P` or `additive:U;V`.
    Image {
        set: PathBuf,
        #[arg(long)]
        family: String,
        /// Value cell scale (default: the set's scale).
        #[arg(long)]
        measure_k: Option<u32>,
        /// Also write the image as a `dyadic1` file.
        #[arg(long)]
        image_out: Option<PathBuf>,
    },
    /// Count pairs of cells with |P(c) - P(c')| <= c * delta.
    Energy {
        set: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1.0)]
        tolerance: f64,
    },
    /// Whitney cubes of `open-square`, `open-interval`, `open-cube`, `diagonal` or `poly:P`, one `depth i j [k]` per line.
    Whitney {
        #[arg(long, default_value = "open-square")]
        domain: String,
        #[arg(long, default_value_t = 8)]
        max_depth: u32,
    },
    /// Run an experiment from a config file (flat `key = value` or JSON).
    Run { config: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let res = match out {
        Some(p) => fs::write(p, bytes),
        None => std::io::stdout().write_all(bytes),
    };
    res.map_err(|e| Failure { code: 1, message: format!("write failed: {e}") })
}

fn load_set(path: &Path) -> Result<AnySet, Failure> {
    Ok(read(path)?.parse::<AnySet>()?)
}

fn json<T: serde::Serialize>(v: &T) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("serializable");
    b.push(b'\n');
    b
}

fn audit_csv(a: &NonConcentrationAudit) -> Vec<u8> {
    let (scale, pos) = match &a.worst_window {
        Some(w) => (w.scale.to_string(), w.position.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")),
        None => (String::new(), String::new()),
    };
    format!(
        "alpha,kappa,threshold,worst_ratio,window_scale,window_position,passed\n{},{},{},{},{},{},{}\n",
        a.alpha, a.kappa, a.threshold, a.worst_ratio, scale, pos, a.passed
    )
    .into_bytes()
}

fn domain(name: &str) -> Result<Box<dyn Domain>, Failure> {
    Ok(match name {
        "open-interval" => Box::new(OpenUnitCube { dim: 1 }),
        "open-square" => Box::new(OpenUnitCube { dim: 2 }),
        "open-cube" => Box::new(OpenUnitCube { dim: 3 }),
        "diagonal" => Box::new(UnitSquareMinusDiagonal),
        s => match s.strip_prefix("poly:") {
            Some(p) => Box::new(PolynomialComplement { p: p.parse::<BivariatePoly>()? }),
            None => return Err(usage(format!("unknown domain `{s}`"))),
        },
    })
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let format: Format = cli.format.parse()?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let out = cli.out.as_deref();
    match cli.command {
        Command::Gen { recipe } => {
            let k = cli.scale_k.unwrap_or(12);
            let text = if expcli::is_1d(&recipe) {
                expcli::set_1d(&recipe, k)?.to_string()
            } else {
                let s = expcli::set_2d(&recipe, k)?;
                if s.y_shift != 0.0 {
                    eprintln!("chart: y -> y - {}; measure at k = {}", s.y_shift, s.measure_k);
                }
                s.set.to_string()
            };
            write_out(out, text.as_bytes())?;
        }
        Command::Audit { set, alpha, kappa, threshold } => {
            let a = match load_set(&set)? {
                AnySet::One(s) => audit_nonconcentration(&s, alpha, kappa.unwrap_or(alpha), threshold, exec),
                AnySet::Two(s) => audit_nonconcentration_2d(&s, alpha, threshold, exec),
            };
            let bytes = match format {
                Format::Json => json(&a),
                Format::Csv => audit_csv(&a),
            };
            write_out(out, &bytes)?;
            if !a.passed {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Image { set, family, measure_k, image_out } => {
            let AnySet::Two(x) = load_set(&set)? else {
                return Err(usage("image needs a planar (dyadic2) set"));
            };
            let fam: ProjectionFamily = family.parse()?;
            let (img, est) = image_at_scale(&fam, &x, measure_k.unwrap_or(x.scale_k()), exec)?;
            if let Some(p) = image_out {
                write_out(Some(&p), img.to_string().as_bytes())?;
            }
            let bytes = match format {
                Format::Json => json(&est),
                Format::Csv => format!(
                    "inner_count,outer_count,lipschitz_bound_used,slack,measure_k,chart_lo,chart_log2_width,inner_exponent\n{},{},{},{},{},{},{},{}\n",
                    est.inner_count,
                    est.outer_count,
                    est.lipschitz_bound_used,
                    est.slack,
                    est.measure_k,
                    est.chart_lo,
                    est.chart_log2_width,
                    est.inner_exponent()
                )
                .into_bytes(),
            };
            write_out(out, &bytes)?;
        }
        Command::Energy { set, poly, tolerance } => {
            let AnySet::Two(x) = load_set(&set)? else {
                return Err(usage("energy needs a planar (dyadic2) set"));
            };
            let p: BivariatePoly = poly.parse()?;
            let ec = energy_count(&p, &x, tolerance, exec)?;
            let bytes = match format {
                Format::Json => json(&ec),
                Format::Csv => format!(
                    "quadruple_count,tolerance_c,total_pairs,normalized_exponent\n{},{},{},{}\n",
                    ec.quadruple_count, ec.tolerance_c, ec.total_pairs, ec.normalized_exponent
                )
                .into_bytes(),
            };
            write_out(out, &bytes)?;
        }
        Command::Whitney { domain: name, max_depth } => {
            let dom = domain(&name)?;
            let w = whitney_decompose(dom.as_ref(), max_depth, exec)?;
            let check = verify_whitney(dom.as_ref(), &w, exec);
            eprintln!(
                "{} cubes, accepted volume {}, unresolved {}, exterior {}; disjoint {}, distance failures {}, 2Q inside {}",
                w.cubes.len(),
                w.accepted_volume(),
                w.unresolved_volume(),
                w.exterior_volume(),
                check.disjoint,
                check.distance_failures,
                check.two_q_inside
            );
            let bytes = match format {
                Format::Json => json(&w),
                Format::Csv => w.to_text().into_bytes(),
            };
            write_out(out, &bytes)?;
        }
        Command::Run { config } => {
            let mut cfg = ExperimentConfig::parse(&read(&config)?)?;
            if let Some(k) = cli.scale_k {
                cfg.scale_k = k;
            }
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            cfg.validate()?;
            let report = run_experiment(&cfg, exec)?;
            let bytes = emit_report(&report, format)?;
            let target = out.map(Path::to_path_buf).or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
            write_out(target.as_deref(), &bytes)?;
            for v in &report.verdicts {
                eprintln!("{v}");
            }
            for a in report.audits.iter().filter(|a| !a.passed) {
                eprintln!("audit failed: {} at k = {}: {} > {}", a.name, a.scale_k, a.value, a.threshold);
            }
            if !report.audits_passed() {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! Command-line front end: `eval`, `optimize`, `bounds`, `competitor`, `plot`.

pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::verify_bounds;
use crate::competitor::{verify_energy_inequalities, CompetitorParams, SweepRow};
use crate::energy::{total_energy, AvgScheme, QuadratureConfig};
use crate::error::{ElasticaError, Result};
use crate::geometry::{grid_angles, BoundaryCurve, ConvexShape};
use crate::io::{read_shape, shape_json};
use crate::optimizer::{default_initial, minimize, Method, OptimizerConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
const PLOT_SAMPLES: usize = 512;

#[derive(Parser, Debug)]
#[command(name = "elastica", version, about = "Average-distance energy with an elastica penalty on convex domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn parse_p(s: &str) -> std::result::Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if p >= 1.0 && p.is_finite() {
        Ok(p)
    } else {
        Err(format!("p must be ≥ 1, got {s}"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long, default_value_t = 1.0, value_parser = parse_p)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub lambda: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Angular resolution of the average-distance quadrature.
    #[arg(long)]
    pub quad_n: Option<usize>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Output file (or prefix for `optimize`); a `<out>.manifest.json` is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
pub enum SchemeArg {
    Polar,
    Normal,
}

impl Common {
    fn quadrature(&self, base: QuadratureConfig) -> QuadratureConfig {
        let mut q = QuadratureConfig { seed: self.seed, ..base };
        if let Some(s) = self.scheme {
            q.scheme = match s {
                SchemeArg::Polar => AvgScheme::Polar,
                SchemeArg::Normal => AvgScheme::Normal,
            };
        }
        if let Some(n) = self.quad_n {
            q.n_theta = n;
            q.n_normal = n;
        }
        q
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Energy of a shape file.
    Eval {
        shape: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Minimise the energy from `--init` (a shape file or `disk(R)`).
    Optimize {
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long, default_value_t = crate::geometry::DEFAULT_K_MAX)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::ProjectedGradient)]
        method: MethodArg,
        #[command(flatten)]
        common: Common,
    },
    /// Table and JSON of the a-priori inequalities.
    Bounds {
        shape: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Competitor sweep over `--eps-list`.
    Competitor {
        shape: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.01, 0.005, 0.0025])]
        eps_list: Vec<f64>,
        /// Arc length of the probe point; defaults to the point of largest curvature.
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long, default_value_t = 8192)]
        samples: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// SVG of shape files (overlaid) or of a trace CSV.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    ProjectedGradient,
    SimplexSearch,
}

/// Provenance of one invocation. Written to `<out>.manifest.json`; the outputs themselves
/// carry no timestamps.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub config: serde_json::Value,
    pub version: String,
    pub seed: u64,
    pub timestamp: String,
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn write_manifest(
    out: &Path,
    command: &str,
    inputs: &[&Path],
    outputs: &[&Path],
    config: serde_json::Value,
    seed: u64,
) -> Result<()> {
    let m = RunManifest {
        command: command.into(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        config,
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    fs::write(manifest_path(out), serde_json::to_string_pretty(&m)? + "\n")?;
    Ok(())
}

/// Adds `"manifest": "<file>"` to a JSON object when it is written to a file.
fn with_manifest(mut v: serde_json::Value, out: Option<&Path>) -> serde_json::Value {
    if let (Some(out), Some(obj)) = (out, v.as_object_mut()) {
        obj.insert("manifest".into(), file_name(&manifest_path(out)).into());
    }
    v
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serialises") + "\n"
}

fn parse_init(init: &str) -> Result<ConvexShape> {
    let t = init.trim();
    if let Some(r) = t.strip_prefix("disk(").and_then(|s| s.strip_suffix(')')) {
        let r: f64 = r
            .trim()
            .parse()
            .map_err(|_| ElasticaError::Parse(format!("bad radius in {init:?}")))?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(ElasticaError::InvalidParameter(format!("disk radius must be positive, got {r}")));
        }
        return Ok(ConvexShape::disk(r));
    }
    read_shape(Path::new(t))
}

fn boundary_points(shape: &ConvexShape) -> Vec<crate::geometry::Point> {
    grid_angles(PLOT_SAMPLES).map(|t| shape.point(t)).collect()
}

fn cmd_eval(shape_path: &Path, c: &Common) -> Result<()> {
    let shape = read_shape(shape_path)?;
    let q = c.quadrature(QuadratureConfig::default());
    let e = total_energy(&shape, c.p, c.lambda, &q)?;
    let out = c.out.as_deref();
    emit(&pretty(&with_manifest(e.report_json(&q), out)), out)?;
    if let Some(o) = out {
        write_manifest(o, "eval", &[shape_path], &[o], serde_json::to_value(c)?, c.seed)?;
    }
    Ok(())
}

fn cmd_optimize(init: Option<&str>, max_iters: usize, k_max: usize, method: MethodArg, c: &Common) -> Result<()> {
    let initial = match init {
        Some(s) => parse_init(s)?,
        None => default_initial(c.p, c.lambda),
    };
    let base = OptimizerConfig::default();
    let config = OptimizerConfig {
        p: c.p,
        lambda: c.lambda,
        k_max,
        max_iters,
        seed: c.seed,
        method: match method {
            MethodArg::ProjectedGradient => Method::ProjectedGradient,
            MethodArg::SimplexSearch => Method::SimplexSearch,
        },
        quadrature: c.quadrature(base.quadrature),
        ..base
    };
    let trace = minimize(&config, &initial)?;
    let last = trace.rows.last().expect("trace has the initial row");
    let mut summary = serde_json::json!({
        "iterations": last.iter,
        "initial_energy": trace.rows[0].energy,
        "final_energy": last.energy,
        "converged": trace.converged,
        "stop_reason": trace.stop_reason,
        "error": trace.error,
        "config": config,
    });
    match c.out.as_deref() {
        Some(prefix) => {
            let csv_path = prefix.with_extension("csv");
            let shape_path = prefix.with_extension("json");
            trace.write_csv(fs::File::create(&csv_path)?)?;
            fs::write(&shape_path, shape_json(&trace.final_shape) + "\n")?;
            summary["trace"] = file_name(&csv_path).into();
            summary["final_shape"] = file_name(&shape_path).into();
            let summary_path = prefix.with_extension("summary.json");
            fs::write(&summary_path, pretty(&with_manifest(summary.clone(), Some(prefix))))?;
            let inputs: Vec<&Path> = init.map(Path::new).into_iter().collect();
            write_manifest(
                prefix,
                "optimize",
                &inputs,
                &[&csv_path, &shape_path, &summary_path],
                serde_json::to_value(config)?,
                c.seed,
            )?;
            print!("{}", pretty(&summary));
        }
        None => {
            summary["final_shape"] = serde_json::from_str(&shape_json(&trace.final_shape))?;
            print!("{}", pretty(&summary));
        }
    }
    Ok(())
}

fn cmd_bounds(shape_path: &Path, c: &Common) -> Result<bool> {
    let shape = read_shape(shape_path)?;
    let q = c.quadrature(QuadratureConfig::default());
    let id = shape_path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let report = verify_bounds(&shape, &id, c.p, c.lambda, &q)?;
    print!("{}", report.to_table());
    if let Some(o) = c.out.as_deref() {
        let v = with_manifest(serde_json::to_value(&report)?, Some(o));
        fs::write(o, pretty(&v))?;
        write_manifest(o, "bounds", &[shape_path], &[o], serde_json::to_value(c)?, c.seed)?;
    }
    Ok(report.all_pass())
}

fn cmd_competitor(
    shape_path: &Path,
    eps_list: &[f64],
    t1: Option<f64>,
    samples: usize,
    svg_out: Option<&Path>,
    c: &Common,
) -> Result<()> {
    let shape = read_shape(shape_path)?;
    let curve = BoundaryCurve::from_shape(&shape, samples)?;
    let params = CompetitorParams {
        p: c.p,
        lambda: c.lambda,
        n_theta: c.quad_n.unwrap_or(CompetitorParams::default().n_theta),
        ..CompetitorParams::default()
    };
    let report = verify_energy_inequalities(&curve, eps_list, &params, t1)?;
    let out = c.out.as_deref();
    emit(&pretty(&with_manifest(serde_json::to_value(&report)?, out)), out)?;
    if let Some(svg_path) = svg_out {
        // overlay at the smallest ε that was built
        let best = report
            .rows
            .iter()
            .filter_map(|r| match r {
                SweepRow::Built(b) => Some(b),
                SweepRow::Failed { .. } => None,
            })
            .min_by(|a, b| a.eps.total_cmp(&b.eps));
        let mut items = Vec::new();
        if let Some(b) = best {
            let (_, canon) = crate::competitor::canonical_frame(&curve, report.t1, report.t1 + b.eps)?;
            items.push(("original".to_string(), canon.vertices().to_vec()));
            items.push((format!("competitor, eps = {}", b.eps), b.competitor_curve.vertices().to_vec()));
        } else {
            items.push(("original".to_string(), curve.vertices().to_vec()));
        }
        fs::write(svg_path, svg::curves(&items))?;
    }
    if let Some(o) = out {
        let mut outputs = vec![o];
        outputs.extend(svg_out);
        write_manifest(
            o,
            "competitor",
            &[shape_path],
            &outputs,
            serde_json::json!({ "params": params, "eps_list": eps_list, "t1": t1, "samples": samples }),
            c.seed,
        )?;
    }
    Ok(())
}

fn cmd_plot(inputs: &[PathBuf], svg_path: &Path) -> Result<()> {
    let is_csv = |p: &Path| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let text = if inputs.len() == 1 && is_csv(&inputs[0]) {
        let mut rd = csv::Reader::from_path(&inputs[0]).map_err(|e| ElasticaError::Io(e.to_string()))?;
        let mut iters = Vec::new();
        let mut energy = Vec::new();
        for row in rd.deserialize::<crate::optimizer::TraceRow>() {
            let row = row.map_err(|e| ElasticaError::Parse(e.to_string()))?;
            iters.push(row.iter as f64);
            energy.push(row.energy);
        }
        if iters.is_empty() {
            return Err(ElasticaError::Parse("trace has no rows".into()));
        }
        svg::energy_trace(&iters, &energy)
    } else {
        let mut items = Vec::new();
        for p in inputs {
            if is_csv(p) {
                return Err(ElasticaError::InvalidParameter("plot one trace CSV at a time".into()));
            }
            items.push((file_name(p), boundary_points(&read_shape(p)?)));
        }
        svg::curves(&items)
    };
    fs::write(svg_path, text)?;
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("ELASTICA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn exit_code(e: &ElasticaError) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_DOMAIN
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Eval { shape, common } => cmd_eval(shape, common),
        Command::Optimize { init, max_iters, k_max, method, common } => {
            cmd_optimize(init.as_deref(), *max_iters, *k_max, *method, common)
        }
        Command::Bounds { shape, common } => cmd_bounds(shape, common).map(|_| ()),
        Command::Competitor { shape, eps_list, t1, samples, svg, common } => {
            cmd_competitor(shape, eps_list, *t1, *samples, svg.as_deref(), common)
        }
        Command::Plot { inputs, svg } => cmd_plot(inputs, svg),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

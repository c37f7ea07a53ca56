//! The `gauge-ga` command line.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::extensor::{Extensor, ExtensorRepr};
use crate::frame::{tetrad_bases, tetrad_components, Frame};
use crate::gauge::factor_gauge;
use crate::golden::{relative_residual, verify_golden, DeformedAlgebra};
use crate::metric::{MetricExtensor, MetricRepr, Product};
use crate::multivector::Multivector;
use crate::ortho::OrthoMetric;
use crate::random;

const CONVENTIONS: &str = "\
Conventions:
  Vectors e_1..e_n are 1-based in formulas and 0-based in JSON arrays.
  A multivector is {\"n\": n, \"coeffs\": [c_0, ..., c_{2^n-1}]}. Coefficient
  index m is a blade bitmask: bit i-1 set means e_i is a factor, taken in
  increasing index order. For n = 3: 0 = 1, 1 = e1, 2 = e2, 3 = e1^e2,
  4 = e3, 5 = e1^e3, 6 = e2^e3, 7 = e1^e2^e3.
  An extensor or metric is {\"n\": n, \"matrix\": [[row 0], ...]} in row-major
  order; column j is the image of e_{j+1}. A metric may add
  \"signature\": [p, q], which is checked on load.
  An eta file is either a matrix as above or {\"signature\": [p, q]}, meaning
  diag(+1 x p, -1 x q).
  A coordinate frame for `tetrad` is a matrix whose column i is d_i.
  Floats are written with 17 significant digits.

Exit codes: 0 pass, 1 verification failure, 2 input error.";

#[derive(Debug, Parser)]
#[command(name = "gauge-ga", version, about = "Metric Clifford algebras through gauge extensors", after_help = CONVENTIONS)]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, signature and degeneracy margin of a metric.
    Signature {
        #[arg(long)]
        metric: PathBuf,
    },
    /// Factor a metric as h† η h.
    Factor {
        #[arg(long)]
        metric: PathBuf,
        #[command(flatten)]
        eta: EtaArgs,
    },
    /// Evaluate one metric product.
    Product {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
        #[command(flatten)]
        eta: EtaArgs,
    },
    /// Tetrad bases and component tables.
    Tetrad {
        #[arg(long)]
        metric: PathBuf,
        /// Matrix whose columns are the coordinate vectors d_i (default: standard basis).
        #[arg(long)]
        coord: Option<PathBuf>,
        #[command(flatten)]
        eta: EtaArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check the transport identities on random multivectors.
    Verify {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Time direct against golden products.
    Bench {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Timed repetitions per n; the median is reported.
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = OpArg::Clifford)]
        op: OpArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct EtaArgs {
    /// JSON file with an eta matrix or {"signature": [p, q]}.
    #[arg(long, conflicts_with = "eta_signature")]
    pub eta: Option<PathBuf>,
    /// Eta as P,Q (default: the metric's own signature).
    #[arg(long, value_parser = parse_pair)]
    pub eta_signature: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OpArg {
    Wedge,
    Scalar,
    Lcontract,
    Rcontract,
    Clifford,
}

impl From<OpArg> for Product {
    fn from(o: OpArg) -> Product {
        match o {
            OpArg::Wedge => Product::Wedge,
            OpArg::Scalar => Product::Scalar,
            OpArg::Lcontract => Product::Lcontract,
            OpArg::Rcontract => Product::Rcontract,
            OpArg::Clifford => Product::Clifford,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Direct,
    Golden,
    Both,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected P,Q, got `{s}`"))?;
    let p = a.trim().parse().map_err(|e| format!("P: {e}"))?;
    let q = b.trim().parse().map_err(|e| format!("Q: {e}"))?;
    Ok((p, q))
}

/// Why a command did not exit 0.
#[derive(Debug)]
pub enum Failure {
    /// Report written, but a check failed.
    Verification(Value),
    /// Bad input; the message names the file and field.
    Input(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

fn input<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(input(path))?;
    serde_json::from_str(&text).map_err(input(path))
}

fn load_metric(path: &Path) -> Result<MetricExtensor, Failure> {
    let repr: MetricRepr = read_json(path)?;
    repr.into_metric().map_err(input(path))
}

fn load_multivector(path: &Path, n: usize) -> Result<Multivector, Failure> {
    let x: Multivector = read_json(path)?;
    if x.dim() != n {
        return Err(Failure::Input(format!(
            "{}: field `n`: metric has n = {n}, multivector has n = {}",
            path.display(),
            x.dim()
        )));
    }
    Ok(x)
}

fn load_eta(args: &EtaArgs, g: &MetricExtensor) -> Result<OrthoMetric, Failure> {
    let n = g.dim();
    let from_pair = |p: usize, q: usize, origin: &str| -> Result<OrthoMetric, Failure> {
        if p + q != n {
            return Err(Failure::Input(format!(
                "{origin}: signature [{p}, {q}] does not sum to n = {n}"
            )));
        }
        OrthoMetric::standard(p, n).map_err(|e| Failure::Input(format!("{origin}: {e}")))
    };
    if let Some((p, q)) = args.eta_signature {
        return from_pair(p, q, "--eta-signature");
    }
    let Some(path) = &args.eta else {
        let s = g.signature();
        return from_pair(s.p, s.q, "metric");
    };
    let v: Value = read_json(path)?;
    if v.get("matrix").is_some() {
        let repr: ExtensorRepr = serde_json::from_value(v).map_err(input(path))?;
        let m = repr.validate().map_err(input(path))?;
        let t = Extensor::new(m).map_err(input(path))?;
        return OrthoMetric::from_extensor(t)
            .map_err(|e| Failure::Input(format!("{}: field `matrix`: {e}", path.display())));
    }
    match v.get("signature") {
        Some(sig) => {
            let [p, q]: [usize; 2] = serde_json::from_value(sig.clone())
                .map_err(|e| Failure::Input(format!("{}: field `signature`: {e}", path.display())))?;
            from_pair(p, q, &format!("{}: field `signature`", path.display()))
        }
        None => Err(Failure::Input(format!(
            "{}: expected field `matrix` or field `signature`",
            path.display()
        ))),
    }
}

fn rows(m: &DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect()))
            .collect(),
    )
}

fn extensor_json(t: &Extensor) -> Value {
    json!({ "n": t.dim(), "matrix": rows(t.matrix()) })
}

fn mv_json(x: &Multivector) -> Value {
    json!({ "n": x.dim(), "coeffs": x.coeffs() })
}

fn cmd_signature(metric: &Path) -> Result<Value, Failure> {
    let g = load_metric(metric)?;
    let s = g.signature();
    Ok(json!({
        "n": g.dim(),
        "signature": [s.p, s.q],
        "eigenvalues": g.eigen().eigenvalues,
        "degeneracy_margin": g.degeneracy_margin(),
    }))
}

fn cmd_factor(metric: &Path, eta: &EtaArgs) -> Result<Value, Failure> {
    let g = load_metric(metric)?;
    let eta = load_eta(eta, &g)?;
    let f = factor_gauge(&g, &eta).map_err(input(metric))?;
    let opt = |t: &Option<Extensor>| t.as_ref().map(extensor_json).unwrap_or(Value::Null);
    Ok(json!({
        "n": g.dim(),
        "signature": [g.signature().p, g.signature().q],
        "eigenvalues": g.eigen().eigenvalues,
        "sigma": f.sigma,
        "d_sigma": opt(&f.d_sigma),
        "d_sqrt": opt(&f.d_sqrt),
        "theta": opt(&f.theta),
        "h": extensor_json(&f.h),
        "eta": extensor_json(eta.extensor()),
        "residual": f.residual(),
    }))
}

fn cmd_product(
    metric: &Path,
    op: Product,
    xp: &Path,
    yp: &Path,
    route: Route,
    eta: &EtaArgs,
) -> Result<Value, Failure> {
    let g = load_metric(metric)?;
    let n = g.dim();
    let x = load_multivector(xp, n)?;
    let y = load_multivector(yp, n)?;
    let mut out = Map::new();
    out.insert("n".into(), json!(n));
    out.insert("op".into(), json!(op.name()));
    let direct = match route {
        Route::Golden => None,
        _ => Some(g.direct_product(op, &x, &y).map_err(input(metric))?),
    };
    let golden = match route {
        Route::Direct => None,
        _ => {
            let eta = load_eta(eta, &g)?;
            let da = DeformedAlgebra::from_metric(g.clone(), eta).map_err(input(metric))?;
            Some(da.product(op, &x, &y).map_err(input(metric))?)
        }
    };
    if let Some(d) = &direct {
        out.insert("direct".into(), mv_json(d));
    }
    if let Some(h) = &golden {
        out.insert("golden".into(), mv_json(h));
    }
    if let (Some(d), Some(h)) = (&direct, &golden) {
        out.insert("diff".into(), json!(d.max_abs_diff(h).unwrap_or(f64::INFINITY)));
        out.insert("relative_diff".into(), json!(relative_residual(d, h, &x, &y)));
    }
    Ok(Value::Object(out))
}

fn cmd_tetrad(metric: &Path, coord: Option<&Path>, eta: &EtaArgs, tol: f64) -> Result<Value, Failure> {
    check_tol(tol)?;
    let g = load_metric(metric)?;
    let n = g.dim();
    let eta = load_eta(eta, &g)?;
    let coord = match coord {
        Some(path) => {
            let repr: ExtensorRepr = read_json(path)?;
            let m = repr.validate().map_err(input(path))?;
            if m.nrows() != n {
                return Err(Failure::Input(format!(
                    "{}: field `n`: metric has n = {n}, frame has n = {}",
                    path.display(),
                    m.nrows()
                )));
            }
            Frame::from_matrix(m).map_err(|e| Failure::Input(format!("{}: field `matrix`: {e}", path.display())))?
        }
        None => Frame::standard(n).map_err(input(metric))?,
    };
    let f = factor_gauge(&g, &eta).map_err(input(metric))?;
    let tf = tetrad_bases(&f.h, &eta).map_err(input(metric))?;
    let c = tetrad_components(&tf, &coord).map_err(input(metric))?;
    let checks = c.checks;
    let residuals = json!({
        "tetrad_lower": tf.lower_residual,
        "tetrad_upper": tf.upper_residual,
        "index_raising": checks.index_raising,
        "mutual_inverse": checks.mutual_inverse,
        "tetrad_metric": checks.tetrad_metric,
        "tetrad_lowering": checks.tetrad_lowering,
    });
    let worst = checks.max().max(tf.lower_residual).max(tf.upper_residual);
    let pass = worst <= tol;
    let report = json!({
        "index_convention": "tables are row-major: row = tetrad index alpha (first), column = coordinate index i (second); all indices 0-based",
        "n": n,
        "h": extensor_json(&f.h),
        "eta": extensor_json(eta.extensor()),
        "tetrad_vectors": rows(tf.frame.vectors()),
        "tetrad_reciprocal": rows(tf.frame.reciprocal()),
        "eps_lower_upper": rows(&c.lower_upper),
        "eps_lower_lower": rows(&c.lower_lower),
        "eps_upper_upper": rows(&c.upper_upper),
        "eps_upper_lower": rows(&c.upper_lower),
        "g_coord_lower": rows(&c.g_lower),
        "g_coord_upper": rows(&c.g_upper),
        "g_tetrad_lower": rows(&c.g_tetrad_lower),
        "g_tetrad_upper": rows(&c.g_tetrad_upper),
        "residuals": residuals,
        "max_residual": worst,
        "tolerance": tol,
        "pass": pass,
    });
    if pass {
        Ok(report)
    } else {
        Err(Failure::Verification(report))
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("--tol: must be positive, got {tol}")))
    }
}

fn cmd_verify(metric: &Path, trials: usize, seed: u64, tol: f64) -> Result<Value, Failure> {
    check_tol(tol)?;
    if trials == 0 {
        return Err(Failure::Input("--trials: must be at least 1".into()));
    }
    let g = load_metric(metric)?;
    let r = verify_golden(&g, trials, seed, tol).map_err(input(metric))?;
    let identities: Map<String, Value> = r
        .identities
        .iter()
        .map(|i| {
            (
                i.identity.to_string(),
                json!({ "description": i.description, "max_residual": i.max_residual, "pass": i.pass }),
            )
        })
        .collect();
    let report = json!({
        "n": r.n,
        "signature": r.signature,
        "trials": r.trials,
        "seed": r.seed,
        "tolerance": r.tolerance,
        "reconstruction_residual": r.reconstruction_residual,
        "identities": identities,
        "pass": r.pass,
    });
    if r.pass {
        Ok(report)
    } else {
        Err(Failure::Verification(report))
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

fn cmd_bench(n_min: usize, n_max: usize, reps: usize, op: Product, seed: u64) -> Result<Value, Failure> {
    if n_min < 2 || n_max > 12 || n_min > n_max {
        return Err(Failure::Input(format!(
            "--n-min/--n-max: need 2 <= n_min <= n_max <= 12, got {n_min}..{n_max}"
        )));
    }
    if reps == 0 {
        return Err(Failure::Input("--reps: must be at least 1".into()));
    }
    let mut table = Vec::new();
    for n in n_min..=n_max {
        let mut rng = random::stream(seed, n as u64);
        let g = random::any_metric(n, &mut rng);
        let x = random::multivector(n, &mut rng);
        let y = random::multivector(n, &mut rng);
        let t0 = Instant::now();
        let da = g.deformation().map_err(|e| Failure::Input(e.to_string()))?;
        let setup = t0.elapsed().as_secs_f64();
        let mut direct = Vec::with_capacity(reps);
        let mut golden = Vec::with_capacity(reps);
        for _ in 0..reps {
            let t = Instant::now();
            std::hint::black_box(g.direct_product(op, &x, &y).map_err(|e| Failure::Input(e.to_string()))?);
            direct.push(t.elapsed().as_secs_f64());
            let t = Instant::now();
            std::hint::black_box(da.product(op, &x, &y).map_err(|e| Failure::Input(e.to_string()))?);
            golden.push(t.elapsed().as_secs_f64());
        }
        let d = median(direct);
        let h = median(golden);
        table.push(json!({
            "n": n,
            "direct_seconds": d,
            "golden_seconds": h,
            "golden_setup_seconds": setup,
            "speedup": d / h,
        }));
    }
    Ok(json!({ "op": op.name(), "reps": reps, "seed": seed, "rows": table }))
}

/// Runs one parsed command and returns its report.
pub fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Signature { metric } => cmd_signature(metric),
        Command::Factor { metric, eta } => cmd_factor(metric, eta),
        Command::Product { metric, op, x, y, route, eta } => {
            cmd_product(metric, (*op).into(), x, y, *route, eta)
        }
        Command::Tetrad { metric, coord, eta, tol } => cmd_tetrad(metric, coord.as_deref(), eta, *tol),
        Command::Verify { metric, trials, seed, tol } => cmd_verify(metric, *trials, *seed, *tol),
        Command::Bench { n_min, n_max, reps, op, seed } => cmd_bench(*n_min, *n_max, *reps, (*op).into(), *seed),
    }
}

/// Pretty JSON with every float written as `d.ddddddddddddddddde±x`.
struct Precise<'a>(PrettyFormatter<'a>);

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        let mut s = String::new();
        write!(s, "{v:.16e}").expect("string write");
        w.write_all(s.as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes a report with 17 significant digits per float.
pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::new()));
    serde::Serialize::serialize(v, &mut ser).expect("in-memory write");
    buf.push(b'\n');
    String::from_utf8(buf).expect("json is utf-8")
}

fn emit(cli: &Cli, v: &Value) -> Result<(), Failure> {
    let text = to_json_string(v);
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(input(path)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let report = match &outcome {
        Ok(v) | Err(Failure::Verification(v)) => Some(v),
        Err(Failure::Input(_)) => None,
    };
    if let Some(v) = report {
        if let Err(Failure::Input(msg)) = emit(&cli, v) {
            eprintln!("error: {msg}");
            return 2;
        }
    }
    match outcome {
        Ok(_) => 0,
        Err(f) => {
            if let Failure::Input(msg) = &f {
                eprintln!("error: {msg}");
            }
            f.exit_code()
        }
    }
}

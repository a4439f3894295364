//! Command-line front end. `run` returns the process exit status:
//! 0 success, 1 a check or verification failed, 2 bad usage or input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cartan::{build_cartan, congruence_target, gl_from_sl, matrix_by_label, CartanDatum, SimplyLacedGraph};
use crate::functors::FunctorSpec;
use crate::klr::{format_element, parse_element, verify_klr_iso, KlrAlgebra};
use crate::params::{check_compat, preset_msv, symbolic_params, ParamSet, ParamsFile, SymbolNames};
use crate::ucat::text::parse_weight;
use crate::ucat::{bubble_value, grassmannian_check};
use crate::verify::{verify, VerificationPlan, WeightSample};

const DEFAULT_WINDOW: i64 = 5;

#[derive(Parser, Debug)]
#[command(name = "catq", version, about = "Exact computations in categorified quantum groups")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a Dynkin graph and print its Cartan matrix.
    CartanCheck(DatumArgs),
    /// Emit a parameter file (symbolic generic, cyclic, or the MSV preset).
    ParamsGen(GenArgs),
    /// Check c⁺c⁻ = −1/β and the sl₂-string law on a weight window.
    ParamsCheck(CheckArgs),
    /// Multiply two KLR elements and print the normal form.
    KlrMul(KlrMulArgs),
    /// Graded dimension of e(ν) R e(ν) in a degree range.
    KlrDim(KlrDimArgs),
    /// Value of a (possibly fake) bubble in End(𝟙_λ).
    BubbleEval(BubbleArgs),
    /// Infinite Grassmannian relation on a weight window.
    GrassmannCheck(GrassArgs),
    /// The gl_n weight with given sl_n pairings and coordinate sum.
    WeightsGlmap(GlmapArgs),
    /// Check that a rescaling functor preserves every defining relation.
    FunctorVerify(VerifyArgs),
    /// Check the KLR isomorphism between R_Q and R_Q′ on a tree.
    KlrIsoVerify(IsoArgs),
}

#[derive(Args, Debug)]
struct DatumArgs {
    /// Type A_n, e.g. `A3`.
    #[arg(long = "type", value_name = "An", conflicts_with = "datum")]
    ty: Option<String>,
    /// Graph JSON `{"vertices":[..],"edges":[[u,v],..]}`.
    #[arg(long)]
    datum: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Cyclic specialization (all β = −1).
    #[arg(long)]
    cyclic: bool,
    /// MSV preset for gl_n.
    #[arg(long, value_name = "N", conflicts_with_all = ["cyclic", "ty", "datum"])]
    msv: Option<u32>,
    #[arg(long, default_value = "t")]
    t_name: String,
    #[arg(long, default_value = "b")]
    beta_name: String,
    #[arg(long, default_value = "c")]
    c_name: String,
}

#[derive(Args, Debug)]
struct ParamsArgs {
    /// Parameter file; without it, generic symbolic parameters over `--type`.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long = "type", value_name = "An")]
    ty: Option<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    p: ParamsArgs,
    /// Pairings (or gl_n entries) range over [−W, W].
    #[arg(long)]
    window: Option<i64>,
}

#[derive(Args, Debug)]
struct KlrMulArgs {
    #[command(flatten)]
    p: ParamsArgs,
    /// e.g. `e(1 2) * s1 * x1`
    a: String,
    b: String,
}

#[derive(Args, Debug)]
struct KlrDimArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Word of vertex labels, e.g. `1,2,1`.
    #[arg(long, value_delimiter = ',')]
    word: Vec<u32>,
    #[arg(long, default_value_t = 6)]
    max_degree: i64,
}

#[derive(Args, Debug)]
struct BubbleArgs {
    #[command(flatten)]
    p: ParamsArgs,
    #[arg(long)]
    vertex: u32,
    /// `[a,b,..]` pairings or `(a,b,..)` gl_n entries.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    #[arg(long, allow_hyphen_values = true)]
    dots: i64,
    /// Counterclockwise instead of clockwise.
    #[arg(long)]
    ccw: bool,
}

#[derive(Args, Debug)]
struct GrassArgs {
    #[command(flatten)]
    p: ParamsArgs,
    #[arg(long)]
    window: Option<i64>,
    #[arg(long, default_value_t = 10)]
    degree: usize,
}

#[derive(Args, Debug)]
struct GlmapArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Vec<i64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Functor spec JSON `{"functor": .., "source": .., "target": .., "D": .., "root": ..}`.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    window: Option<i64>,
    /// Restrict to these relations (comma separated).
    #[arg(long, value_delimiter = ',')]
    relations: Vec<String>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Include passing instances in the JSON report.
    #[arg(long)]
    records: bool,
}

#[derive(Args, Debug)]
struct IsoArgs {
    #[arg(long = "type", value_name = "An")]
    ty: Option<String>,
    /// Source parameters (symbolic over `--type` if omitted).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Target parameters (symbolic with fresh names if omitted).
    #[arg(long)]
    params_prime: Option<PathBuf>,
    /// Root vertex label.
    #[arg(long)]
    root: u32,
    #[arg(long, default_value_t = 3)]
    strands: usize,
    #[arg(long, default_value_t = 6)]
    max_degree: i64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

/// Failure kinds mapped to exit codes.
enum Exit {
    Usage(String),
    Failed,
}

type Res = Result<(), Exit>;

fn usage<E: std::fmt::Display>(e: E) -> Exit {
    Exit::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| Exit::Usage(format!("{}: {e}", path.display())))
}

fn type_a(s: &str) -> Result<CartanDatum, Exit> {
    let n = s
        .strip_prefix(['A', 'a'])
        .and_then(|n| n.parse::<u32>().ok())
        .filter(|n| *n >= 1)
        .ok_or_else(|| Exit::Usage(format!("unsupported type {s:?} (expected A<n>)")))?;
    Ok(CartanDatum::type_a(n))
}

fn load_datum(a: &DatumArgs) -> Result<CartanDatum, Exit> {
    match (&a.ty, &a.datum) {
        (Some(t), _) => type_a(t),
        (None, Some(p)) => {
            let g = SimplyLacedGraph::from_json(&read(p)?).map_err(usage)?;
            build_cartan(g).map_err(usage)
        }
        (None, None) => Err(Exit::Usage("give --type or --datum".into())),
    }
}

fn load_params_file(path: &Path) -> Result<ParamSet, Exit> {
    ParamsFile::from_json(&read(path)?).and_then(|f| f.to_params()).map_err(usage)
}

fn load_params(a: &ParamsArgs) -> Result<ParamSet, Exit> {
    match (&a.params, &a.ty) {
        (Some(p), _) => load_params_file(p),
        (None, Some(t)) => symbolic_params(&type_a(t)?, &SymbolNames::default(), false).map_err(usage),
        (None, None) => Err(Exit::Usage("give --params or --type".into())),
    }
}

fn window(w: Option<i64>) -> Result<i64, Exit> {
    if let Some(w) = w {
        return if w >= 0 { Ok(w) } else { Err(Exit::Usage("window must be >= 0".into())) };
    }
    match std::env::var("CATQ_DEFAULT_WINDOW") {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|w| *w >= 0)
            .ok_or_else(|| Exit::Usage(format!("CATQ_DEFAULT_WINDOW={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_WINDOW),
    }
}

fn weights(p: &ParamSet, w: i64) -> Result<Vec<crate::cartan::Weight>, Exit> {
    WeightSample::Window { lo: -w, hi: w }.weights(p).map_err(usage)
}

fn emit<T: Serialize>(out: &mut dyn Write, v: &T) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, Exit> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(usage)
}

fn cartan_check(a: &DatumArgs, json: bool, out: &mut dyn Write) -> Res {
    let d = load_datum(a)?;
    if json {
        #[derive(Serialize)]
        struct R {
            labels: Vec<u32>,
            matrix: Vec<Vec<i64>>,
            tree: bool,
        }
        emit(out, &R { labels: d.labels().to_vec(), matrix: d.matrix().clone(), tree: d.is_tree() });
    } else {
        let m = matrix_by_label(&d);
        for &i in d.labels() {
            let row: Vec<String> = d.labels().iter().map(|&j| format!("{:>3}", m[&(i, j)])).collect();
            let _ = writeln!(out, "{i:>3} |{}", row.join(""));
        }
        let _ = writeln!(out, "OK: rank {}, {}", d.rank(), if d.is_tree() { "tree" } else { "not a tree" });
    }
    Ok(())
}

fn params_gen(a: &GenArgs, out: &mut dyn Write) -> Res {
    let p = match a.msv {
        Some(n) => preset_msv(n, None).map_err(usage)?,
        None => {
            let names = SymbolNames { t: a.t_name.clone(), beta: a.beta_name.clone(), c: a.c_name.clone() };
            symbolic_params(&load_datum(&a.datum)?, &names, a.cyclic).map_err(usage)?
        }
    };
    let f = ParamsFile::from_params(&p).map_err(usage)?;
    let _ = writeln!(out, "{}", f.to_json());
    Ok(())
}

fn params_check(a: &CheckArgs, json: bool, out: &mut dyn Write) -> Res {
    let p = load_params(&a.p)?;
    let ws = weights(&p, window(a.window)?)?;
    let rep = check_compat(&p, &ws);
    if json {
        emit(out, &rep);
    } else if rep.ok() {
        let _ = writeln!(out, "OK: 0 violations ({} checks on {} weights)", rep.checked, ws.len());
    } else {
        for v in rep.violations.iter().take(20) {
            let _ = writeln!(out, "{} at vertex {} @ {}: {} ≠ {}", v.law, v.vertex, v.weight, v.lhs, v.rhs);
        }
        for e in rep.errors.iter().take(20) {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "FAIL: {} violations, {} errors", rep.violations.len(), rep.errors.len());
    }
    if rep.ok() {
        Ok(())
    } else {
        Err(Exit::Failed)
    }
}

fn klr_mul(a: &KlrMulArgs, json: bool, out: &mut dyn Write) -> Res {
    let p = load_params(&a.p)?;
    let alg = KlrAlgebra::new(&p.datum, &p.q);
    let u = alg.normalize_raw(&parse_element(&p.datum, &a.a).map_err(usage)?);
    let v = alg.normalize_raw(&parse_element(&p.datum, &a.b).map_err(usage)?);
    let s = format_element(&p.datum, &alg.multiply(&u, &v));
    if json {
        emit(out, &serde_json::json!({ "product": s }));
    } else {
        let _ = writeln!(out, "{s}");
    }
    Ok(())
}

fn klr_dim(a: &KlrDimArgs, json: bool, out: &mut dyn Write) -> Res {
    let d = load_datum(&a.datum)?;
    if a.word.is_empty() {
        return Err(Exit::Usage("--word is required".into()));
    }
    let word: Vec<usize> = a.word.iter().map(|&l| d.index_of(l)).collect::<Result<_, _>>().map_err(usage)?;
    let dims: Vec<(i64, u64)> = (-a.max_degree..=a.max_degree)
        .map(|k| (k, crate::klr::graded_dim(&d, &word, k)))
        .filter(|(_, n)| *n > 0)
        .collect();
    if json {
        emit(out, &dims);
    } else {
        for (k, n) in dims {
            let _ = writeln!(out, "deg {k:>3}: {n}");
        }
    }
    Ok(())
}

fn bubble_eval(a: &BubbleArgs, json: bool, out: &mut dyn Write) -> Res {
    let p = load_params(&a.p)?;
    let i = p.datum.index_of(a.vertex).map_err(usage)?;
    let lam = parse_weight(&p.datum, &a.weight).map_err(usage)?;
    let v = bubble_value(i, &lam, a.dots, !a.ccw, &p).map_err(usage)?;
    if json {
        emit(out, &serde_json::json!({ "value": v.to_string() }));
    } else {
        let _ = writeln!(out, "{v}");
    }
    Ok(())
}

fn grassmann_check(a: &GrassArgs, json: bool, out: &mut dyn Write) -> Res {
    let p = load_params(&a.p)?;
    let ws = weights(&p, window(a.window)?)?;
    let mut reps = Vec::new();
    for lam in &ws {
        for i in 0..p.datum.rank() {
            reps.push(grassmannian_check(i, lam, a.degree, &p).map_err(usage)?);
        }
    }
    let bad: Vec<_> = reps.iter().filter(|r| !r.ok).collect();
    if json {
        emit(out, &reps);
    } else {
        for r in bad.iter().take(20) {
            if let Some((k, res)) = &r.residual {
                let _ = writeln!(out, "vertex {} @ {}: degree {k} residual {res}", r.vertex, r.weight);
            }
        }
        if bad.is_empty() {
            let _ = writeln!(out, "OK: {} checks through degree {}", reps.len(), a.degree);
        } else {
            let _ = writeln!(out, "FAIL: {} of {} checks", bad.len(), reps.len());
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Exit::Failed)
    }
}

fn weights_glmap(a: &GlmapArgs, json: bool, out: &mut dyn Write) -> Res {
    if a.n < 2 || a.mu.len() != a.n - 1 {
        return Err(Exit::Usage(format!("--mu needs n−1 = {} entries", a.n.saturating_sub(1))));
    }
    let r = gl_from_sl(a.n, a.d, &a.mu);
    if json {
        emit(out, &serde_json::json!({ "weight": r.as_ref().map(|w| w.entries.clone()) }));
    } else {
        match r {
            Some(w) => {
                let _ = writeln!(out, "{w}");
            }
            None => {
                let _ = writeln!(out, "no solution: need d ≡ {} (mod {})", congruence_target(a.n, &a.mu), a.n);
            }
        }
    }
    Ok(())
}

fn functor_verify(a: &VerifyArgs, json: bool, out: &mut dyn Write) -> Res {
    let spec = FunctorSpec::from_json(&read(&a.spec)?).map_err(usage)?;
    let f = spec.build().map_err(usage)?;
    let w = window(a.window)?;
    let mut plan = VerificationPlan::new(f, -w, w);
    plan.relations = a.relations.clone();
    plan.threads = a.threads;
    plan.keep_records = a.records;
    let rep = verify(&plan).map_err(usage)?;
    if json {
        emit(out, &rep);
    } else {
        let _ = write!(out, "{}", rep.to_table());
    }
    if rep.ok() {
        Ok(())
    } else {
        Err(Exit::Failed)
    }
}

fn klr_iso_verify(a: &IsoArgs, json: bool, out: &mut dyn Write) -> Res {
    let (p, pp) = match (&a.params, &a.params_prime) {
        (Some(x), Some(y)) => (load_params_file(x)?, load_params_file(y)?),
        (None, None) => {
            let d = type_a(a.ty.as_deref().ok_or_else(|| Exit::Usage("give --type or both parameter files".into()))?)?;
            let p = symbolic_params(&d, &SymbolNames::default(), false).map_err(usage)?;
            let names = SymbolNames { t: "u".into(), beta: "g".into(), c: "k".into() };
            (p, symbolic_params(&d, &names, false).map_err(usage)?)
        }
        _ => return Err(Exit::Usage("give both --params and --params-prime, or neither".into())),
    };
    if p.datum != pp.datum {
        return Err(Exit::Usage("parameter files use different data".into()));
    }
    let root = p.datum.index_of(a.root).map_err(usage)?;
    let (q, qp) = (Arc::new(p), Arc::new(pp));
    let rep = pool(a.threads)?
        .install(|| verify_klr_iso(&q.datum, &q.q, &qp.q, root, a.strands, a.max_degree))
        .map_err(usage)?;
    if json {
        emit(out, &rep);
    } else {
        let d: Vec<String> = rep.d.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "root {}: D = [{}]", rep.root, d.join(", "));
        for f in rep.relation_failures.iter().take(20) {
            let _ = writeln!(out, "FAIL {} on {:?}: {}", f.relation, f.word, f.residual);
        }
        for (w, k, x, y) in rep.dim_mismatches.iter().take(20) {
            let _ = writeln!(out, "FAIL dim {w:?} deg {k}: {x} vs {y}");
        }
        let _ = writeln!(
            out,
            "{}: {} relation instances, {} dimension entries",
            if rep.pass() { "OK" } else { "FAIL" },
            rep.relations_checked,
            rep.dim_entries_checked
        );
    }
    if rep.pass() {
        Ok(())
    } else {
        Err(Exit::Failed)
    }
}

/// Parse `args` (including the program name) and run one command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let json = cli.json;
    let r = match &cli.cmd {
        Cmd::CartanCheck(a) => cartan_check(a, json, out),
        Cmd::ParamsGen(a) => params_gen(a, out),
        Cmd::ParamsCheck(a) => params_check(a, json, out),
        Cmd::KlrMul(a) => klr_mul(a, json, out),
        Cmd::KlrDim(a) => klr_dim(a, json, out),
        Cmd::BubbleEval(a) => bubble_eval(a, json, out),
        Cmd::GrassmannCheck(a) => grassmann_check(a, json, out),
        Cmd::WeightsGlmap(a) => weights_glmap(a, json, out),
        Cmd::FunctorVerify(a) => functor_verify(a, json, out),
        Cmd::KlrIsoVerify(a) => klr_iso_verify(a, json, out),
    };
    match r {
        Ok(()) => 0,
        Err(Exit::Failed) => 1,
        Err(Exit::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

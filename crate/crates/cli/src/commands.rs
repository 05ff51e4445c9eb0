//! `bound`, `scan` and `demo`.

use std::cell::RefCell;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use concbound::bipartite::{
    bipartite_generators_for, lambda_spectrum_via_x, observation1_bound, ppt_min_eigenvalue,
    ppt_min_eigenvalue_worst, wootters_concurrence, CoefficientVector, SubsetSelector,
};
use concbound::generators::{
    bipartite_generators, tripartite_generators, ExampleFamily, OperatorTriples, TripartiteSplit,
};
use concbound::multipartite::{observation2_bound, TripleCoefficients};
use concbound::optimizer::{
    optimize_bound_bipartite, optimize_bound_multipartite, optimize_bound_with, optimize_total,
    threshold_scan, MultipartiteMode, OptimizerConfig, TripleSource,
};
use concbound::states::{ghz_noise, horodecki_state, random_density, w_noise, white_noise_mix};
use concbound::{DensityMatrix, TOL_DETECT};

use crate::error::{CliError, EXIT_DEMO_FAILED, EXIT_OK};
use crate::input::{Family, StateSource};
use crate::record::{
    sig12, BoundOutcome, Mode, RunRecord, RunResult, ScanOutcome, ScanRow, Verdict,
};

/// Lower bounds on concurrence from generalised Wootters spectra.
#[derive(Debug, Parser)]
#[command(name = "concbound", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound on one state.
    Bound(BoundArgs),
    /// Bisect a noisy family for its detection threshold.
    Scan(ScanArgs),
    /// Run a built-in end-to-end scenario.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Operator family for `obs2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operators {
    Canonical,
    Ghz,
    W,
}

impl Operators {
    fn source(self) -> TripleSource {
        match self {
            Self::Canonical => TripleSource::Canonical,
            Self::Ghz => TripleSource::Example(ExampleFamily::Ghz),
            Self::W => TripleSource::Example(ExampleFamily::W),
        }
    }

    /// Hand-picked operators for the GHZ and W families, canonical otherwise.
    fn default_for(family: Option<Family>) -> Self {
        match family {
            Some(Family::GhzNoise { .. } | Family::Ghz) => Self::Ghz,
            Some(Family::WNoise { .. } | Family::W) => Self::W,
            _ => Self::Canonical,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Canonical => "canonical",
            Self::Ghz => "ghz",
            Self::W => "w",
        }
    }
}

/// Options shared by `bound` and `scan`.
#[derive(Debug, Clone, Args)]
pub struct EvalOptions {
    #[arg(long, value_enum, default_value_t = Mode::Obs1)]
    pub mode: Mode,
    /// Subset size k.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Optimizer config as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub optimizer: Option<String>,
    /// Operators for obs2 (default: ghz/w for those families, canonical otherwise).
    #[arg(long, value_enum)]
    pub operators: Option<Operators>,
    /// Split for obs1 on three parties, e.g. 1|23.
    #[arg(long)]
    pub split: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    /// State file (JSON) or family descriptor such as family:w-noise,p=0.2.
    #[arg(long)]
    pub state: String,
    #[command(flatten)]
    pub eval: EvalOptions,
    /// Write the result here (JSON record unless --format csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// ghz-noise, w-noise, werner or horodecki:a=<value>.
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub eval: EvalOptions,
    /// Noise range lo:hi.
    #[arg(long, default_value = "0:1")]
    pub p_range: String,
    /// Final bracket width in p.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// CSV destination (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the JSON run record here.
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Ghz,
    W,
    Horodecki,
    WoottersCheck,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub scenario: Scenario,
    /// Subset size for the horodecki detection checks.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

fn parse_seed(text: &str) -> Result<u64, CliError> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse::<u64>(),
    };
    parsed.map_err(|_| CliError::Invalid(format!("CONCBOUND_SEED={text:?} is not a 64-bit integer")))
}

/// Default config, seed from `CONCBOUND_SEED` if set, then overlaid with `spec`.
pub fn load_optimizer(spec: Option<&str>) -> Result<OptimizerConfig, CliError> {
    let mut base = OptimizerConfig::default();
    if let Ok(seed) = std::env::var("CONCBOUND_SEED") {
        base.seed = parse_seed(&seed)?;
    }
    let Some(spec) = spec else {
        return Ok(base);
    };
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| CliError::Invalid(format!("cannot read optimizer config {spec}: {e}")))?
    };
    let overlay: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("optimizer config: {e}")))?;
    let serde_json::Value::Object(fields) = overlay else {
        return Err(CliError::Invalid("optimizer config must be a JSON object".into()));
    };
    let mut merged = serde_json::to_value(&base)?;
    if let serde_json::Value::Object(target) = &mut merged {
        target.extend(fields);
    }
    let cfg: OptimizerConfig =
        serde_json::from_value(merged).map_err(|e| CliError::Invalid(format!("optimizer config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

fn equal_local(rho: &DensityMatrix) -> Result<usize, CliError> {
    let dims = rho.dims();
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(CliError::Invalid(format!("expected equal local dimensions, got {dims:?}")));
    }
    Ok(dims[0])
}

/// Evaluate `opts.mode` on `rho`.
pub fn evaluate(
    rho: &DensityMatrix,
    opts: &EvalOptions,
    cfg: &OptimizerConfig,
    family: Option<Family>,
) -> Result<BoundOutcome, CliError> {
    if rho.parties() < 2 {
        return Err(CliError::Invalid("state must have at least two parties".into()));
    }
    let ppt = ppt_min_eigenvalue_worst(rho)?;
    let k = opts.k;
    let mut operators = None;
    let (bound, report) = match opts.mode {
        Mode::Obs1 => match rho.parties() {
            2 => {
                let r = optimize_bound_bipartite(rho, k, cfg)?;
                (Some(r.bound_on_c_squared), Some(r))
            }
            3 => {
                let split: TripartiteSplit = opts.split.as_deref().unwrap_or("1|23").parse()?;
                let gens = tripartite_generators(equal_local(rho)?, split)?;
                let r = optimize_bound_with(rho, &gens, k, cfg)?;
                operators = Some(format!("split {split}"));
                (Some(r.bound_on_c_squared), Some(r))
            }
            n => return Err(CliError::Invalid(format!("obs1 needs 2 or 3 parties, got {n}"))),
        },
        Mode::Obs2 => {
            let ops = opts.operators.unwrap_or_else(|| Operators::default_for(family));
            operators = Some(ops.name().to_string());
            let r = optimize_bound_multipartite(rho, k, cfg, MultipartiteMode::Joint(ops.source()))?;
            (Some(r.bound_on_c_squared), Some(r))
        }
        Mode::Obs3 => {
            let r = optimize_bound_multipartite(rho, k, cfg, MultipartiteMode::Splits)?;
            (Some(r.bound_on_c_squared), Some(r))
        }
        Mode::Wootters => {
            let c = wootters_concurrence(rho)?;
            (Some(c * c), None)
        }
        Mode::Ppt => (None, None),
        Mode::Total => {
            let gens = bipartite_generators_for(rho)?;
            let best = optimize_total(rho, &gens, cfg)?;
            (Some(best.delta * best.delta), None)
        }
    };
    let verdict = BoundOutcome::derive_verdict(opts.mode, bound, ppt, TOL_DETECT);
    Ok(BoundOutcome {
        mode: opts.mode,
        k,
        operators,
        bound_c_squared: bound,
        ppt_min_eig_worst_split: ppt,
        tol_detect: TOL_DETECT,
        verdict,
        report,
    })
}

fn dims_label(rho: &DensityMatrix) -> String {
    rho.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
}

fn write_bound_text(w: &mut dyn Write, source: &StateSource, rho: &DensityMatrix, o: &BoundOutcome) -> std::io::Result<()> {
    writeln!(w, "state: {source} (dims {})", dims_label(rho))?;
    match &o.operators {
        Some(ops) => writeln!(w, "mode: {} ({ops}), k = {}", o.mode, o.k)?,
        None => writeln!(w, "mode: {}, k = {}", o.mode, o.k)?,
    }
    if let (Some(b2), Some(b)) = (o.bound_c_squared, o.bound_c()) {
        writeln!(w, "bound on C^2: {}", sig12(b2))?;
        writeln!(w, "bound on C: {}", sig12(b))?;
    }
    if let Some(r) = &o.report {
        if let Some(t) = r.wall_time {
            writeln!(w, "subsets: {}, wall time: {t:.3} s", r.per_subset.len())?;
        }
    }
    writeln!(w, "ppt min eigenvalue (worst split): {}", sig12(o.ppt_min_eig_worst_split))?;
    writeln!(w, "verdict: {}", o.verdict)
}

fn bound_csv(o: &BoundOutcome) -> Result<Vec<u8>, CliError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["mode", "k", "bound_c2", "bound_c", "ppt_min_eig_worst_split", "verdict"])?;
    let opt = |x: Option<f64>| x.map(sig12).unwrap_or_default();
    wtr.write_record([
        o.mode.to_string(),
        o.k.to_string(),
        opt(o.bound_c_squared),
        opt(o.bound_c()),
        sig12(o.ppt_min_eig_worst_split),
        o.verdict.to_string(),
    ])?;
    wtr.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn cmd_bound(args: &BoundArgs, argv: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    let source = StateSource::parse(&args.state)?;
    let rho = source.load()?;
    let cfg = load_optimizer(args.eval.optimizer.as_deref())?;
    let start = Instant::now();
    let mut outcome = evaluate(&rho, &args.eval, &cfg, source.family())?;
    if let Some(r) = outcome.report.as_mut() {
        r.wall_time = Some(start.elapsed().as_secs_f64());
    }
    let record = RunRecord::new(argv, source.clone(), RunResult::Bound(outcome.clone()));
    let machine = |format: Format| -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => bound_csv(&outcome),
            _ => Ok(serde_json::to_vec_pretty(&record)?),
        }
    };
    match (&args.out, args.format) {
        (Some(path), format) => {
            std::fs::write(path, machine(format)?)?;
            write_bound_text(out, &source, &rho, &outcome)?;
        }
        (None, Format::Text) => write_bound_text(out, &source, &rho, &outcome)?,
        (None, format) => {
            out.write_all(&machine(format)?)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| CliError::Invalid(format!("--p-range {text:?}: expected lo:hi")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Invalid(format!("--p-range {text:?}: {s:?} is not a number")))
    };
    let (lo, hi) = (num(lo)?, num(hi)?);
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(CliError::Invalid(format!("--p-range {text:?}: need 0 <= lo < hi <= 1")));
    }
    Ok((lo, hi))
}

fn scan_family(text: &str) -> Result<Family, CliError> {
    let family: Family = text.parse()?;
    // Any p is fine here; it is replaced at every scan point.
    family.with_p(1.0)
}

#[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN
pub fn run_scan(args: &ScanArgs) -> Result<(Family, ScanOutcome), CliError> {
    let family = scan_family(&args.family)?;
    let (lo, hi) = parse_range(&args.p_range)?;
    if !(args.tol > 0.0) {
        return Err(CliError::Invalid("--tol must be positive".into()));
    }
    let cfg = load_optimizer(args.eval.optimizer.as_deref())?;
    let mode = args.eval.mode;
    let mut rows = Vec::new();
    let failure: RefCell<Option<CliError>> = RefCell::new(None);
    let scan = threshold_scan(
        |p| family.with_p(p).and_then(|f| f.build()).map_err(|e| to_lib(e, &failure)),
        |rho| {
            let o = evaluate(rho, &args.eval, &cfg, Some(family)).map_err(|e| to_lib(e, &failure))?;
            // p is filled in from the scan's evaluation log below.
            rows.push(ScanRow {
                p: f64::NAN,
                bound: o.bound_c_squared,
                ppt_min_eig_worst_split: o.ppt_min_eig_worst_split,
            });
            Ok(match mode {
                Mode::Ppt => -o.ppt_min_eig_worst_split,
                _ => o.bound_c().unwrap_or(0.0),
            })
        },
        lo,
        hi,
        args.tol,
        if mode == Mode::Ppt { 0.0 } else { TOL_DETECT },
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let scan = scan.map_err(|e| match e {
        concbound::Error::NotDetectedAtUpperEnd { .. } | concbound::Error::DetectedAtLowerEnd { .. } => {
            CliError::Scan(e)
        }
        other => CliError::Library(other),
    })?;
    for (row, &(p, _)) in rows.iter_mut().zip(&scan.evaluations) {
        row.p = p;
    }
    rows.sort_by(|a, b| a.p.total_cmp(&b.p));
    Ok((
        family,
        ScanOutcome {
            mode,
            k: args.eval.k,
            tol_p: args.tol,
            tol_detect: if mode == Mode::Ppt { 0.0 } else { TOL_DETECT },
            scan,
            rows,
        },
    ))
}

/// Stash a CLI error for the caller and hand the scanner a library error.
fn to_lib(e: CliError, slot: &RefCell<Option<CliError>>) -> concbound::Error {
    let lib = match &e {
        CliError::Library(inner) => inner.clone(),
        other => concbound::Error::InvalidState(other.to_string()),
    };
    slot.borrow_mut().get_or_insert(e);
    lib
}

pub fn scan_summary(s: &ScanOutcome) -> String {
    format!(
        "# threshold p* = {} +- {} (bracket [{}, {}], {} evaluations)",
        sig12(s.scan.threshold),
        sig12(s.scan.bracket_width / 2.0),
        sig12(s.scan.lower),
        sig12(s.scan.upper),
        s.scan.evaluations.len()
    )
}

pub fn scan_csv(s: &ScanOutcome) -> Result<Vec<u8>, CliError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["p", "bound", "ppt_min_eig_worst_split"])?;
    for row in &s.rows {
        wtr.write_record([
            sig12(row.p),
            row.bound.map(sig12).unwrap_or_default(),
            sig12(row.ppt_min_eig_worst_split),
        ])?;
    }
    let mut bytes = wtr.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    bytes.extend_from_slice(scan_summary(s).as_bytes());
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn cmd_scan(args: &ScanArgs, argv: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    let (family, outcome) = run_scan(args)?;
    let csv_bytes = scan_csv(&outcome)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv_bytes)?;
            writeln!(out, "{}", scan_summary(&outcome))?;
        }
        None => out.write_all(&csv_bytes)?,
    }
    if let Some(path) = &args.record {
        let record = RunRecord::new(argv, StateSource::Family(family), RunResult::Scan(outcome));
        std::fs::write(path, serde_json::to_vec_pretty(&record)?)?;
    }
    Ok(EXIT_OK)
}

struct Checks<'a> {
    out: &'a mut dyn Write,
    failed: usize,
}

impl Checks<'_> {
    fn check(&mut self, name: &str, ok: bool, detail: String) -> std::io::Result<()> {
        if !ok {
            self.failed += 1;
        }
        writeln!(self.out, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" })
    }

    fn info(&mut self, line: String) -> std::io::Result<()> {
        writeln!(self.out, "INFO {line}")
    }
}

fn unit_triple() -> std::collections::BTreeMap<SubsetSelector, TripleCoefficients> {
    [(SubsetSelector::new(vec![0], 1).expect("valid"), TripleCoefficients::ones(1))]
        .into_iter()
        .collect()
}

fn example_scan(family: &str, tol: f64) -> Result<ScanOutcome, CliError> {
    let args = ScanArgs {
        family: family.into(),
        eval: EvalOptions {
            mode: Mode::Obs2,
            k: 1,
            optimizer: None,
            operators: None,
            split: None,
        },
        p_range: "0.1:0.3".into(),
        tol,
        out: None,
        record: None,
    };
    run_scan(&args).map(|(_, s)| s)
}

fn demo_ghz(c: &mut Checks) -> Result<(), CliError> {
    let triples = OperatorTriples::example(ExampleFamily::Ghz);
    let map = unit_triple();
    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let b = observation2_bound(&ghz_noise(p)?, &triples, 1, &map)?.bound_on_c_squared;
        let want = (0.75 * (5.0 * p - 1.0)).max(0.0).powi(2) / 6.0;
        worst = worst.max((b - want).abs());
    }
    c.check("closed form (1/6)(3/4(5p-1))^2 on 21 points", worst <= 1e-9, format!("max deviation {worst:.2e}"))?;
    let s = example_scan("ghz-noise", 1e-4)?;
    c.check(
        "threshold p* = 1/5",
        (s.scan.threshold - 0.2).abs() <= 1e-4,
        format!("p* = {} +- {}", sig12(s.scan.threshold), sig12(s.scan.bracket_width / 2.0)),
    )?;
    Ok(())
}

fn demo_w(c: &mut Checks) -> Result<(), CliError> {
    let triples = OperatorTriples::example(ExampleFamily::W);
    let map = unit_triple();
    let s3 = 3f64.sqrt();
    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        let p = 0.2 + 0.04 * i as f64;
        let b = observation2_bound(&w_noise(p)?, &triples, 1, &map)?.bound_on_c_squared;
        let want = (p * (8.0 + s3) - s3).max(0.0).powi(2) / 96.0;
        worst = worst.max((b - want).abs());
    }
    c.check("closed form (1/96)[p(8+sqrt3)-sqrt3]^2", worst <= 1e-9, format!("max deviation {worst:.2e}"))?;
    let p_s = s3 / (8.0 + s3);
    let s = example_scan("w-noise", 1e-4)?;
    c.check(
        "obs2 threshold p_s = sqrt3/(8+sqrt3)",
        (s.scan.threshold - p_s).abs() <= 1e-4,
        format!("p* = {} (expected {})", sig12(s.scan.threshold), sig12(p_s)),
    )?;
    let ppt_scan = threshold_scan(w_noise, |rho| Ok(-ppt_min_eigenvalue_worst(rho)?), 0.0, 1.0, 1e-5, 0.0)
        .map_err(CliError::Scan)?;
    let p_ppt = 3.0 * (8.0 * 2f64.sqrt() - 3.0) / 119.0;
    c.check(
        "PPT boundary 3(8sqrt2-3)/119",
        (ppt_scan.threshold - p_ppt).abs() <= 1e-4,
        format!("sign change at {} (expected {})", sig12(ppt_scan.threshold), sig12(p_ppt)),
    )?;
    let rho = w_noise(0.2)?;
    let mins: Vec<f64> = TripartiteSplit::ALL
        .iter()
        .map(|s| ppt_min_eigenvalue(&rho, &s.bipartition()))
        .collect::<Result<_, _>>()?;
    let b = optimize_bound_multipartite(
        &rho,
        1,
        &load_optimizer(None)?,
        MultipartiteMode::Joint(TripleSource::Example(ExampleFamily::W)),
    )?
    .bound_on_c_squared;
    c.check(
        "p = 0.2 is PPT on every split yet detected",
        mins.iter().all(|&m| m >= -1e-9) && b > 1e-4,
        format!(
            "PT minima {}, obs2 bound {}",
            mins.iter().map(|&m| sig12(m)).collect::<Vec<_>>().join("/"),
            sig12(b)
        ),
    )?;
    c.info(format!(
        "bound-entanglement window [{}, {})",
        sig12(s.scan.threshold),
        sig12(ppt_scan.threshold)
    ))?;
    Ok(())
}

fn demo_horodecki(c: &mut Checks, k: usize) -> Result<(), CliError> {
    let cfg = load_optimizer(None)?;
    for a in [0.2, 0.5, 0.8] {
        let rho = horodecki_state(a)?;
        let ppt = ppt_min_eigenvalue_worst(&rho)?;
        c.check(&format!("a = {a}: PPT"), ppt >= -1e-9, format!("PT min eigenvalue {}", sig12(ppt)))?;
        let r = optimize_bound_bipartite(&rho, k, &cfg)?;
        c.check(
            &format!("a = {a}: obs1 (k = {k}) detects at p = 1"),
            r.bound_on_c_squared > TOL_DETECT,
            format!("bound {} over {} subsets", sig12(r.bound_on_c_squared), r.per_subset.len()),
        )?;
        let light = OptimizerConfig {
            restarts: 8,
            iterations: 60,
            ..cfg.clone()
        };
        let scan = threshold_scan(
            |p| white_noise_mix(&horodecki_state(a)?, p),
            |r| Ok(optimize_bound_bipartite(r, k, &light)?.bound_on_c()),
            0.5,
            1.0,
            5e-3,
            TOL_DETECT,
        );
        match scan {
            Ok(s) => c.info(format!("a = {a}: k = {k} threshold p* = {} +- {}", sig12(s.threshold), sig12(s.bracket_width / 2.0)))?,
            Err(e) => c.info(format!("a = {a}: k = {k} scan has no bracket ({e})"))?,
        }
    }
    Ok(())
}

fn demo_wootters(c: &mut Checks) -> Result<(), CliError> {
    // Reference: textbook formula from the eigenvalues of rho (sy x sy) rho* (sy x sy).
    let gens = bipartite_generators(2, 2)?;
    let map: std::collections::BTreeMap<_, _> =
        [(SubsetSelector::new(vec![0], 1)?, CoefficientVector::ones(1))].into_iter().collect();
    let mut worst: f64 = 0.0;
    for seed in 0..1000 {
        let rho = random_density(&[2, 2], 4, seed)?;
        let b = observation1_bound(&rho, &gens, 1, &map)?.bound_on_c_squared;
        let l = lambda_spectrum_via_x(&rho, gens.operator(0))?;
        let c_ref = (l[0] - l[1] - l[2] - l[3]).max(0.0);
        let c_lib = wootters_concurrence(&rho)?;
        worst = worst.max((b - c_ref * c_ref).abs()).max((c_lib * c_lib - b).abs());
    }
    c.check("1000 random two-qubit states: obs1(k=1) = C^2", worst <= 1e-9, format!("max deviation {worst:.2e}"))?;
    Ok(())
}

pub fn cmd_demo(args: &DemoArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let mut c = Checks { out, failed: 0 };
    match args.scenario {
        Scenario::Ghz => demo_ghz(&mut c)?,
        Scenario::W => demo_w(&mut c)?,
        Scenario::Horodecki => demo_horodecki(&mut c, args.k)?,
        Scenario::WoottersCheck => demo_wootters(&mut c)?,
    }
    Ok(if c.failed == 0 { EXIT_OK } else { EXIT_DEMO_FAILED })
}

pub fn run(cli: &Cli, argv: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Bound(a) => cmd_bound(a, argv, out),
        Command::Scan(a) => cmd_scan(a, argv, out),
        Command::Demo(a) => cmd_demo(a, out),
    }
}

/// Verdict of a stored bound record, recomputed from its numbers.
pub fn replay_verdict(record: &RunRecord) -> Option<Verdict> {
    match &record.result {
        RunResult::Bound(o) => Some(BoundOutcome::derive_verdict(
            o.mode,
            o.bound_c_squared,
            o.ppt_min_eig_worst_split,
            o.tol_detect,
        )),
        RunResult::Scan(_) => None,
    }
}

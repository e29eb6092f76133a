//! The `skewscope` command line.
//!
//! Bulk results go to stdout as text lines; a JSON run manifest goes to
//! stderr, or to the file named by `--summary`. Exit status is 0 on
//! success, 1 when a `verify` suite has failing checks and 2 on errors.

use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cube::{CoordSet, Subcube};
use crate::enumerate::{
    brute_force_minimal, brute_force_source, fsn, fsr, CoeffProvider, Enumeration, FfcCoeffs, ParentRule,
    SampledSkew, SkewQuery, SpectrumCoeffs,
};
use crate::error::{Error, Result};
use crate::fourier::{default_delta, format_coeff_line, Spectrum};
use crate::generators::{random_sparse, subcube_uniform, BchSpec, NoisyParity, SubcubeSampler, Tribes};
use crate::heavy::{
    ffc, find_heavy_exact, goldreich_levin, CoeffList, CorrBackend, FfcParams, GlParams, GlWeights, SampledAccess,
};
use crate::measure::{
    draw_samples, required_samples, write_measure, write_samples, CountingOracle, ExplicitMeasure, InputFile,
    MeasureFormat, SampleSet, Sampler, Sign, SkewReport,
};
use crate::verify::{run_suite, Suite, VerifyOptions};

/// Environment variable overriding the largest explicit dimension.
pub const MAX_EXPLICIT_ENV: &str = "SKEWSCOPE_MAX_EXPLICIT_N";
const DEFAULT_MAX_EXPLICIT: usize = 24;

#[derive(Parser, Debug)]
#[command(name = "skewscope", version, about = "Find minimal skewed subcubes of distributions on the Boolean cube")]
struct Cli {
    /// Worker threads for parallel stages; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON run manifest here instead of stderr.
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate measure or sample files.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Fourier spectra.
    Fourier {
        #[command(subcommand)]
        what: FourierCommand,
    },
    /// Heavy low-degree Fourier coefficients.
    Heavy {
        #[command(subcommand)]
        what: HeavyCommand,
    },
    /// Minimal skewed subcubes.
    Enumerate {
        #[command(subcommand)]
        what: EnumerateCommand,
    },
    /// Run a property suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct GenOut {
    /// Emit this many samples instead of the explicit measure.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Dense)]
    format: FormatArg,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Dense,
    Sparse,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Uniform on a subcube given as a +/-/* string.
    Subcube {
        #[arg(long)]
        cube: String,
        #[command(flatten)]
        out: GenOut,
    },
    /// Tribes on k blocks of width t; block i covers coordinates i*t..i*t+t-1.
    Tribes {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Noisy parity: n uniform bits plus a label at index n.
    Parity {
        #[arg(long)]
        n: usize,
        /// Secret coordinates, comma separated.
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        #[arg(long)]
        eta: f64,
        #[command(flatten)]
        out: GenOut,
    },
    /// Uniform on the dual of a BCH code of length 2^l - 1.
    Bch {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        e: u32,
        /// Print the number of minimum-weight codewords instead.
        #[arg(long)]
        count_min_weight: bool,
        #[command(flatten)]
        out: GenOut,
    },
    /// Uniform on a random support.
    Sparse {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        support: usize,
        #[command(flatten)]
        out: GenOut,
    },
}

#[derive(Args, Debug, Default)]
struct InputArgs {
    /// Measure file ("-" for stdin).
    #[arg(long, conflicts_with = "samples")]
    measure: Option<PathBuf>,
    /// Sample file ("-" for stdin).
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Rescale measures whose mean density is not 1.
    #[arg(long)]
    renormalize: bool,
}

#[derive(Subcommand, Debug)]
enum FourierCommand {
    /// Print `<mask-hex> <value>` lines ordered by size then mask.
    Dump {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.0)]
        min_abs: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Pairwise,
    Blocked,
}

impl From<BackendArg> for CorrBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Pairwise => CorrBackend::Pairwise,
            BackendArg::Blocked => CorrBackend::Blocked,
        }
    }
}

#[derive(Subcommand, Debug)]
enum HeavyCommand {
    /// Exact heavy coefficients from a measure's spectrum.
    Exact {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rho: f64,
    },
    /// Correlated-pair search on samples.
    Ffc {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BackendArg::Pairwise)]
        backend: BackendArg,
    },
    /// Bucket recursion from density queries to a measure.
    Gl {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Density bound; the measure's maximum density by default.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read bucket weights off the spectrum instead of querying.
        #[arg(long)]
        exact_weights: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProviderArg {
    Exact,
    Ffc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Positive,
    Negative,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = ProviderArg::Exact)]
    provider: ProviderArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constrain only parents skewed in the same direction.
    #[arg(long)]
    same_sign_parents: bool,
    /// Overall failure probability for sample input, split over all cubes.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Threshold of the top-level search (ffc provider).
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Pairwise)]
    backend: BackendArg,
}

#[derive(Subcommand, Debug)]
enum EnumerateCommand {
    /// Positive skew.
    Fsr(EnumerateArgs),
    /// Negative skew.
    Fsn(EnumerateArgs),
    /// Exhaustive search.
    Oracle {
        #[command(flatten)]
        args: EnumerateArgs,
        #[arg(long, value_enum, default_value_t = SignArg::Positive)]
        sign: SignArg,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
    bytes: usize,
}

/// Everything needed to re-run a command bit for bit.
#[derive(Serialize)]
struct RunManifest {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    seed: Option<u64>,
    params: Value,
    inputs: Vec<InputDigest>,
    results: Value,
}

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    stdout: &'a mut dyn Write,
}

struct Outcome {
    seed: Option<u64>,
    params: Value,
    inputs: Vec<InputDigest>,
    results: Value,
    ok: bool,
}

fn max_explicit_n() -> Result<usize> {
    match std::env::var(MAX_EXPLICIT_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::InvalidParameter(format!("{MAX_EXPLICIT_ENV}={v} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_EXPLICIT),
    }
}

fn guard_explicit(n: usize) -> Result<()> {
    let max = max_explicit_n()?;
    if n > max {
        return Err(Error::Unsupported(format!(
            "explicit measure with n = {n} exceeds {max}; set {MAX_EXPLICIT_ENV} to allow it"
        )));
    }
    Ok(())
}

fn read_source(path: Option<&PathBuf>, io: &mut Io<'_>) -> Result<(Vec<u8>, String)> {
    let mut bytes = Vec::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            bytes = fs::read(p)?;
            Ok((bytes, p.display().to_string()))
        }
        _ => {
            io.stdin.read_to_end(&mut bytes)?;
            Ok((bytes, "-".into()))
        }
    }
}

fn load(input: &InputArgs, io: &mut Io<'_>) -> Result<(InputFile, InputDigest)> {
    let path = input.measure.as_ref().or(input.samples.as_ref());
    let (bytes, name) = read_source(path, io)?;
    let file = InputFile::read(bytes.as_slice(), input.renormalize)?;
    match (&file, input.measure.is_some(), input.samples.is_some()) {
        (InputFile::Samples(_), true, _) => return Err(Error::InvalidParameter(format!("{name} holds samples, not a measure"))),
        (InputFile::Measure(_), _, true) => return Err(Error::InvalidParameter(format!("{name} holds a measure, not samples"))),
        _ => {}
    }
    if let InputFile::Measure(m) = &file {
        guard_explicit(m.dim())?;
    }
    let digest = InputDigest { path: name, sha256: format!("{:x}", Sha256::digest(&bytes)), bytes: bytes.len() };
    Ok((file, digest))
}

fn empirical(s: &SampleSet) -> Result<ExplicitMeasure> {
    guard_explicit(s.dim())?;
    s.empirical_measure()
}

fn write_list(out: &mut dyn Write, list: &CoeffList) -> Result<()> {
    for e in &list.entries {
        writeln!(out, "{}", format_coeff_line(e.set, e.value))?;
    }
    Ok(())
}

fn list_summary(list: &CoeffList) -> Value {
    json!({ "count": list.len(), "threshold": list.threshold, "degree": list.degree, "guarantee": list.guarantee })
}

fn cmd_gen(what: &GenCommand, io: &mut Io<'_>) -> Result<Outcome> {
    let (out, params): (&GenOut, Value) = match what {
        GenCommand::Subcube { cube, out } => (out, json!({ "generator": "subcube", "cube": cube })),
        GenCommand::Tribes { k, t, out } => (out, json!({ "generator": "tribes", "k": k, "t": t })),
        GenCommand::Parity { n, s, eta, out } => (out, json!({ "generator": "parity", "n": n, "s": s, "eta": eta })),
        GenCommand::Bch { l, e, out, .. } => (out, json!({ "generator": "bch", "l": l, "e": e })),
        GenCommand::Sparse { n, support, out } => (out, json!({ "generator": "sparse", "n": n, "support": support })),
    };
    let mut buf: Vec<u8> = Vec::new();
    let mut results = json!({});
    if let GenCommand::Bch { l, e, count_min_weight: true, .. } = what {
        let spec = BchSpec::new(*l, *e)?;
        let count = spec.count_min_weight_codewords()?;
        writeln!(buf, "{count}")?;
        results = json!({ "length": spec.len(), "distance": spec.distance(), "min_weight_codewords": count,
                          "field_polynomial": format!("{:#x}", spec.field().polynomial()) });
    } else if let Some(m) = out.samples {
        let sampler: Box<dyn Sampler> = match what {
            GenCommand::Subcube { cube, .. } => Box::new(SubcubeSampler(cube.parse::<Subcube>()?)),
            GenCommand::Tribes { k, t, .. } => Box::new(Tribes::new(*k, *t)?),
            GenCommand::Parity { n, s, eta, .. } => Box::new(NoisyParity::new(*n, &CoordSet::from_indices(*n, s)?, *eta)?),
            GenCommand::Bch { l, e, .. } => Box::new(BchSpec::new(*l, *e)?.dual_sampler()),
            GenCommand::Sparse { n, support, .. } => {
                guard_explicit(*n)?;
                Box::new(random_sparse(*n, *support, out.seed)?.sampler())
            }
        };
        let s = draw_samples(sampler.as_ref(), m, out.seed)?;
        write_samples(&mut buf, &s)?;
        results = json!({ "n": s.dim(), "samples": s.len() });
    } else {
        let m = match what {
            GenCommand::Subcube { cube, .. } => {
                let c: Subcube = cube.parse()?;
                guard_explicit(c.dim())?;
                subcube_uniform(&c)?
            }
            GenCommand::Tribes { k, t, .. } => {
                let tr = Tribes::new(*k, *t)?;
                guard_explicit(tr.dim())?;
                tr.explicit()?
            }
            GenCommand::Parity { n, s, eta, .. } => {
                guard_explicit(n + 1)?;
                NoisyParity::new(*n, &CoordSet::from_indices(*n, s)?, *eta)?.explicit()?
            }
            GenCommand::Bch { l, e, .. } => {
                let spec = BchSpec::new(*l, *e)?;
                guard_explicit(spec.len())?;
                spec.dual_measure()?
            }
            GenCommand::Sparse { n, support, .. } => {
                guard_explicit(*n)?;
                random_sparse(*n, *support, out.seed)?
            }
        };
        let format = match out.format {
            FormatArg::Dense => MeasureFormat::Dense,
            FormatArg::Sparse => MeasureFormat::Sparse,
        };
        write_measure(&mut buf, &m, format)?;
        results = json!({ "n": m.dim(), "inorm": m.inorm() });
    }
    match &out.out {
        Some(p) => fs::write(p, &buf)?,
        None => io.stdout.write_all(&buf)?,
    }
    Ok(Outcome { seed: Some(out.seed), params, inputs: Vec::new(), results, ok: true })
}

fn cmd_fourier(what: &FourierCommand, io: &mut Io<'_>) -> Result<Outcome> {
    let FourierCommand::Dump { input, min_abs } = what;
    let (file, digest) = load(input, io)?;
    let (m, empirical_input) = match file {
        InputFile::Measure(m) => (m, false),
        InputFile::Samples(s) => (empirical(&s)?, true),
    };
    let lines = Spectrum::of(&m).dump(*min_abs);
    for &(s, v) in &lines {
        writeln!(io.stdout, "{}", format_coeff_line(s, v))?;
    }
    Ok(Outcome {
        seed: None,
        params: json!({ "min_abs": min_abs }),
        inputs: vec![digest],
        results: json!({ "n": m.dim(), "count": lines.len(), "empirical": empirical_input }),
        ok: true,
    })
}

fn cmd_heavy(what: &HeavyCommand, io: &mut Io<'_>) -> Result<Outcome> {
    match what {
        HeavyCommand::Exact { input, k, rho } => {
            let (file, digest) = load(input, io)?;
            let m = match file {
                InputFile::Measure(m) => m,
                InputFile::Samples(s) => empirical(&s)?,
            };
            let list = find_heavy_exact(&m, *k, *rho);
            write_list(io.stdout, &list)?;
            Ok(Outcome { seed: None, params: json!({ "k": k, "rho": rho }), inputs: vec![digest], results: list_summary(&list), ok: true })
        }
        HeavyCommand::Ffc { input, k, rho, lambda, seed, backend } => {
            let (file, digest) = load(input, io)?;
            let InputFile::Samples(s) = file else {
                return Err(Error::InvalidParameter("the correlated-pair search needs a sample file".into()));
            };
            let params = FfcParams::new(s.dim(), *k, *rho, *lambda, *seed)?;
            let out = ffc(&s, &params, (*backend).into())?;
            write_list(io.stdout, &out.list)?;
            let mut results = list_summary(&out.list);
            results["raw_count"] = json!(out.raw.len());
            results["filter_samples"] = json!(out.filter_samples);
            results["recommended_filter_samples"] = json!(params.filter_samples());
            Ok(Outcome {
                seed: Some(*seed),
                params: serde_json::to_value(params).expect("serializable"),
                inputs: vec![digest],
                results,
                ok: true,
            })
        }
        HeavyCommand::Gl { input, rho, delta, t, seed, exact_weights } => {
            let (file, digest) = load(input, io)?;
            let InputFile::Measure(m) = file else {
                return Err(Error::InvalidParameter("query access needs a measure file".into()));
            };
            let params = GlParams::new(*rho, t.unwrap_or_else(|| m.inorm()), *delta, *seed)?;
            let spec;
            let oracle = CountingOracle::new(&m);
            let source = if *exact_weights {
                spec = Spectrum::of(&m);
                GlWeights::Exact(&spec)
            } else {
                GlWeights::Queries(&oracle)
            };
            let out = goldreich_levin(m.dim(), source, &params)?;
            write_list(io.stdout, &out.list)?;
            let mut results = list_summary(&out.list);
            results["queries"] = json!(out.queries);
            results["budget"] = json!(out.budget);
            results["budget_exceeded"] = json!(out.budget_exceeded);
            results["buckets_estimated"] = json!(out.buckets_estimated);
            let outcome = Outcome {
                seed: Some(*seed),
                params: serde_json::to_value(params).expect("serializable"),
                inputs: vec![digest],
                results,
                ok: true,
            };
            out.into_result()?;
            Ok(outcome)
        }
    }
}

fn enumerate_with(args: &EnumerateArgs, sign: Sign, oracle: bool, io: &mut Io<'_>) -> Result<Outcome> {
    let mut q = SkewQuery::new(args.k, args.gamma, args.eps, sign)?;
    if args.same_sign_parents {
        q = q.with_parent_rule(ParentRule::SameSign);
    }
    let (file, digest) = load(&args.input, io)?;
    let mut results = json!({});
    let (reports, stats): (Vec<SkewReport>, Option<Enumeration>) = match &file {
        InputFile::Measure(m) => {
            if oracle {
                (brute_force_minimal(m, &q)?, None)
            } else {
                if args.provider == ProviderArg::Ffc {
                    return Err(Error::InvalidParameter("the ffc provider needs a sample file".into()));
                }
                let spec = Spectrum::of(m);
                let provider = SpectrumCoeffs::exact(spec.clone());
                let e = run_engine(&spec, &provider, &q)?;
                (e.reports.clone(), Some(e))
            }
        }
        InputFile::Samples(s) => {
            if q.k > s.dim() {
                return Err(Error::InvalidParameter(format!("k = {} exceeds dimension {}", q.k, s.dim())));
            }
            let source = SampledSkew::union_bound(s, args.delta, q.k)?;
            let accuracy = q.gamma.min(0.5f64.powi(q.k as i32)) / 4.0;
            let need = required_samples(q.k, accuracy, source.delta());
            results["per_cube_delta"] = json!(source.delta());
            results["recommended_samples"] = json!(need);
            results["samples"] = json!(s.len());
            if oracle {
                (brute_force_source(&source, &q)?, None)
            } else {
                let e = match args.provider {
                    ProviderArg::Exact => {
                        guard_explicit(s.dim())?;
                        run_engine(&source, &SpectrumCoeffs::empirical(s)?, &q)?
                    }
                    ProviderArg::Ffc => {
                        let access = SampledAccess::new(s, default_delta(s.dim(), q.k))?;
                        let p = FfcCoeffs::build(s, &access, &q, args.rho, args.lambda, args.seed, args.backend.into())?;
                        results["ffc"] = json!({
                            "params": p.output().params,
                            "raw_count": p.output().raw.len(),
                            "list_count": p.output().list.len(),
                        });
                        run_engine(&source, &p, &q)?
                    }
                };
                (e.reports.clone(), Some(e))
            }
        }
    };
    for r in &reports {
        writeln!(io.stdout, "{r}")?;
    }
    results["count"] = json!(reports.len());
    results["estimated"] = json!(matches!(file, InputFile::Samples(_)));
    if let Some(e) = stats {
        results["stats"] = serde_json::to_value(e.stats).expect("serializable");
    }
    let params = json!({
        "k": q.k, "gamma": q.gamma, "eps": q.eps, "sign": q.sign, "parent_rule": q.parent_rule,
        "provider": format!("{:?}", args.provider).to_lowercase(), "delta": args.delta,
        "rho": args.rho, "lambda": args.lambda, "oracle": oracle,
    });
    Ok(Outcome { seed: Some(args.seed), params, inputs: vec![digest], results, ok: true })
}

fn run_engine(
    source: &dyn crate::enumerate::SkewSource,
    provider: &dyn CoeffProvider,
    q: &SkewQuery,
) -> Result<Enumeration> {
    match q.sign {
        Sign::Positive => fsr(source, provider, q),
        Sign::Negative => fsn(source, provider, q),
    }
}

fn cmd_verify(args: &VerifyArgs, io: &mut Io<'_>) -> Result<Outcome> {
    let suite: Suite = args.suite.parse()?;
    let opts = VerifyOptions { seed: args.seed, n: args.n, k: args.k, trials: args.trials };
    let report = run_suite(suite, &opts)?;
    for c in &report.checks {
        writeln!(io.stdout, "{c}")?;
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    writeln!(io.stdout, "{suite}: {} checks, {failed} failed", report.checks.len())?;
    Ok(Outcome {
        seed: Some(args.seed),
        params: serde_json::to_value(opts).expect("serializable"),
        inputs: Vec::new(),
        results: json!({ "suite": suite, "checks": report.checks.len(), "failed": failed }),
        ok: failed == 0,
    })
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> Result<Outcome> {
    match &cli.command {
        Command::Gen { what } => cmd_gen(what, io),
        Command::Fourier { what } => cmd_fourier(what, io),
        Command::Heavy { what } => cmd_heavy(what, io),
        Command::Enumerate { what } => match what {
            EnumerateCommand::Fsr(a) => enumerate_with(a, Sign::Positive, false, io),
            EnumerateCommand::Fsn(a) => enumerate_with(a, Sign::Negative, false, io),
            EnumerateCommand::Oracle { args, sign } => {
                let sign = match sign {
                    SignArg::Positive => Sign::Positive,
                    SignArg::Negative => Sign::Negative,
                };
                enumerate_with(args, sign, true, io)
            }
        },
        Command::Verify(a) => cmd_verify(a, io),
    }
}

/// Runs the command line `args` (program name first) against the given
/// streams and returns the exit status.
pub fn run_with<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    if let Some(w) = cli.workers {
        // the global pool can be configured once per process; later calls keep the first setting
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global();
    }
    let outcome = dispatch(&cli, &mut io);
    let _ = io.stdout.flush();
    match outcome {
        Ok(o) => {
            let manifest = RunManifest {
                tool: "skewscope",
                version: env!("CARGO_PKG_VERSION"),
                command: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
                seed: o.seed,
                params: o.params,
                inputs: o.inputs,
                results: o.results,
            };
            let text = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
            let written = match &cli.summary {
                Some(p) => fs::write(p, text).map_err(Error::from),
                None => stderr.write_all(text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Runs the process command line against the process streams.
pub fn run() -> i32 {
    let stdin = std::io::stdin();
    let mut stdin = stdin.lock();
    let stdout = std::io::stdout();
    let mut stdout = std::io::BufWriter::new(stdout.lock());
    let mut stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdin, &mut stdout, &mut stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &[u8]) -> (i32, String, String) {
        let mut input = stdin;
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("skewscope").chain(args.iter().copied());
        let code = run_with(argv, &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn uniform_fsr_is_empty() {
        let (code, measure, _) = call(&["gen", "sparse", "--n", "4", "--support", "16"], b"");
        assert_eq!(code, 0);
        let (code, out, err) = call(&["enumerate", "fsr", "--k", "2", "--gamma", "0.5", "--eps", "0.5"], measure.as_bytes());
        assert_eq!(code, 0, "{err}");
        assert!(out.is_empty());
        let manifest: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(manifest["results"]["count"], 0);
        assert_eq!(manifest["inputs"][0]["path"], "-");
    }

    #[test]
    fn errors_exit_nonzero() {
        let (code, _, err) = call(&["enumerate", "fsr", "--k", "2", "--gamma", "9", "--eps", "0.5"], b"garbage");
        assert_eq!(code, 2);
        assert!(err.starts_with("error:"));
        assert_eq!(call(&["verify", "nope"], b"").0, 2);
        assert_eq!(call(&["frobnicate"], b"").0, 2);
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use hyperberge::bounds::{bai_lu_bound, check_convexity_chain, threshold, ThresholdName};
use hyperberge::enumeration::{level_size, monotone_reduction_plan, LevelSpec, DEFAULT_BUDGET};
use hyperberge::io::{parse_any, to_json, to_text};
use hyperberge::verify::{
    verify_edge_theorem, verify_lemma_r_plus_2, verify_spectral_theorem, ChunkProgress, VerificationReport,
    VerifyError, VerifyOptions, DEFAULT_CERT_SAMPLE,
};
use hyperberge::{
    search_cycle, search_path, spectral_radius, verify_certificate, BergeCertificate, Hypergraph,
};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "hyperberge", version, about = "Berge Hamiltonicity and spectral thresholds of uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format; `gen` writes the text file format unless `json` is asked for.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Log progress to stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cycle,
    Path,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum GenKind {
    Empty,
    Complete,
    CliquePlusIsolated,
    CliquePlusPendant,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Certified bracket on the spectral radius.
    Lambda {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = hyperberge::spectral::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = hyperberge::spectral::DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Bai–Lu bound f_r(m), and the thresholds for n when given.
    Bound {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        /// Take r and m from a hypergraph file and compare with its spectral radius.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Search for a Hamiltonian Berge cycle or path.
    CheckBerge {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Cycle)]
        kind: Kind,
        /// Path start vertex (requires --to).
        #[arg(long, requires = "to")]
        from: Option<usize>,
        /// Path end vertex (requires --from).
        #[arg(long, requires = "from")]
        to: Option<usize>,
    },
    /// Check a certificate against a hypergraph.
    CheckCert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Emit a hypergraph file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification campaign.
    Verify {
        #[command(subcommand)]
        campaign: Campaign,
    },
}

#[derive(Args)]
struct CampaignOpts {
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Largest level, in labeled hypergraphs, that may be swept.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Hamiltonian certificates re-verified per level.
    #[arg(long, default_value_t = DEFAULT_CERT_SAMPLE)]
    cert_sample: usize,
    /// Also count isomorphism classes per level.
    #[arg(long)]
    classes: bool,
    /// Stream one JSON line per enumeration chunk to stderr.
    #[arg(long)]
    progress: bool,
    #[arg(long, default_value_t = hyperberge::spectral::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = hyperberge::spectral::DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Campaign {
    /// n-vertex (n-2)-graphs with n and n+1 edges, 5 <= n <= 8.
    Lemma21 {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        opts: CampaignOpts,
    },
    /// Edge-count thresholds for cycles and paths.
    Edges {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        opts: CampaignOpts,
    },
    /// Spectral threshold audit.
    Spectral {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: CampaignOpts,
    },
}

/// Failure that maps to the usage/infeasible exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_any(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(common: &Common, body: &str) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

impl Common {
    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

fn emit_json(common: &Common, value: &serde_json::Value) -> Result<()> {
    if common.format() == Format::Csv {
        bail!(usage("this subcommand only writes JSON"));
    }
    emit(common, &format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn run_lambda(common: &Common, input: &Path, tol: f64, max_iter: usize) -> Result<u8> {
    let h = read_hypergraph(input)?;
    let est = spectral_radius(&h, tol, max_iter).map_err(|e| usage(e.to_string()))?;
    emit_json(common, &serde_json::to_value(&est)?)?;
    Ok(EXIT_PASS)
}

fn run_bound(common: &Common, r: u32, m: Option<u64>, n: Option<u64>, input: Option<&Path>) -> Result<u8> {
    if r < 2 {
        bail!(usage("--r must be at least 2"));
    }
    let mut out = serde_json::Map::new();
    let (r, m) = match input {
        Some(path) => {
            let h = read_hypergraph(path)?;
            if h.r() as u32 != r {
                bail!(usage(format!("--r {r} disagrees with the file's r = {}", h.r())));
            }
            let est = spectral_radius(&h, hyperberge::spectral::DEFAULT_TOL, hyperberge::spectral::DEFAULT_MAX_ITER)?;
            let bound = bai_lu_bound(r, h.edge_count() as u64);
            out.insert("lambda_upper".into(), json!(est.upper));
            out.insert("within_bound".into(), json!(est.upper <= bound + 1e-9));
            (r, Some(h.edge_count() as u64))
        }
        None => (r, m),
    };
    out.insert("r".into(), json!(r));
    if let Some(m) = m {
        out.insert("m".into(), json!(m));
        out.insert("bai_lu".into(), json!(bai_lu_bound(r, m)));
    }
    if let Some(n) = n {
        let mut thresholds = serde_json::Map::new();
        for name in ThresholdName::ALL {
            if let Ok(t) = threshold(name, n, r as u64) {
                thresholds.insert(name.as_str().into(), json!(t.value.to_string()));
            }
        }
        out.insert("n".into(), json!(n));
        out.insert("thresholds".into(), thresholds.into());
        if let Ok(chain) = check_convexity_chain(n, r as u64) {
            out.insert("convexity_chain".into(), serde_json::to_value(&chain)?);
        }
        if let Ok(plan) = monotone_reduction_plan(n as usize, r as usize) {
            out.insert("reduction_plan".into(), serde_json::to_value(&plan)?);
        }
    }
    if m.is_none() && n.is_none() {
        bail!(usage("give --m, --n or --input"));
    }
    emit_json(common, &out.into())?;
    Ok(EXIT_PASS)
}

fn run_check_berge(common: &Common, input: &Path, kind: Kind, ends: Option<(usize, usize)>) -> Result<u8> {
    let h = read_hypergraph(input)?;
    let outcome = match kind {
        Kind::Cycle if ends.is_some() => bail!(usage("--from/--to only apply to paths")),
        Kind::Cycle => search_cycle(&h),
        Kind::Path => search_path(&h, ends).map_err(|e| usage(e.to_string()))?,
    };
    let verdict = if outcome.found() { "found" } else { "none" };
    let body = json!({
        "kind": match kind { Kind::Cycle => "cycle", Kind::Path => "path" },
        "verdict": verdict,
        "certificate": outcome.certificate,
        "none_reason": outcome.none_reason,
        "stats": outcome.stats,
    });
    emit_json(common, &body)?;
    Ok(EXIT_PASS)
}

fn run_check_cert(common: &Common, input: &Path, cert: &Path) -> Result<u8> {
    let h = read_hypergraph(input)?;
    let text = fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
    let cert: BergeCertificate =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", "certificate")))?;
    let result = verify_certificate(&h, &cert);
    let valid = result.is_ok();
    let body = json!({
        "valid": valid,
        "hamiltonian": valid && cert.is_hamiltonian(h.n()),
        "violations": result.err().unwrap_or_default(),
    });
    emit_json(common, &body)?;
    Ok(if valid { EXIT_PASS } else { EXIT_FAIL })
}

fn run_gen(common: &Common, kind: GenKind, n: usize, r: usize, m: Option<usize>, seed: u64) -> Result<u8> {
    let h = match kind {
        GenKind::Empty => Hypergraph::empty(n, r),
        GenKind::Complete => Hypergraph::complete(n, r),
        GenKind::CliquePlusIsolated => Hypergraph::clique_plus_isolated(n, r),
        GenKind::CliquePlusPendant => Hypergraph::clique_plus_pendant(n, r),
        GenKind::Random => {
            let Some(m) = m else { bail!(usage("--kind random needs --m")) };
            Hypergraph::random(n, r, m, &mut ChaCha8Rng::seed_from_u64(seed))
        }
    }
    .map_err(|e| usage(e.to_string()))?;
    let body = match common.format {
        None => to_text(&h),
        Some(Format::Json) => format!("{}\n", to_json(&h)),
        Some(Format::Csv) => bail!(usage("gen writes the text or JSON hypergraph format")),
    };
    emit(common, &body)?;
    Ok(EXIT_PASS)
}

fn campaign_options(opts: &CampaignOpts) -> Result<VerifyOptions> {
    if opts.jobs == 0 {
        bail!(usage("--jobs must be at least 1"));
    }
    Ok(VerifyOptions {
        jobs: opts.jobs,
        budget: opts.budget,
        cert_sample: opts.cert_sample,
        count_classes: opts.classes,
        tol: opts.tol,
        max_iter: opts.max_iter,
        ..Default::default()
    })
}

fn log_plan(n: usize, r: usize, ms: &[usize]) {
    for &m in ms {
        if let Ok(size) = level_size(&LevelSpec::all_labeled(n, r, m)) {
            info!("level n={n} r={r} m={m}: {size} labeled hypergraphs");
        }
    }
}

fn run_verify(common: &Common, campaign: &Campaign) -> Result<u8> {
    let opts = match campaign {
        Campaign::Lemma21 { opts, .. } | Campaign::Edges { opts, .. } | Campaign::Spectral { opts, .. } => opts,
    };
    let vopts = campaign_options(opts)?;
    let stream = opts.progress;
    let mut progress = |p: &ChunkProgress| {
        if stream {
            eprintln!("{}", serde_json::to_string(p).expect("plain data serializes"));
        }
    };
    let result = match *campaign {
        Campaign::Lemma21 { n, .. } => {
            log_plan(n, n.saturating_sub(2), &[n, n + 1]);
            verify_lemma_r_plus_2(n, &vopts, &mut progress)
        }
        Campaign::Edges { n, r, .. } => {
            if let Ok(plan) = monotone_reduction_plan(n, r) {
                log_plan(n, r, &[plan[0].m, plan[1].m]);
            }
            verify_edge_theorem(n, r, &vopts, &mut progress)
        }
        Campaign::Spectral { n, r, samples, seed, .. } => verify_spectral_theorem(n, r, samples, seed, &vopts, &mut progress),
    };
    let report = match result {
        Ok(report) => report,
        Err(e @ (VerifyError::Enumeration(_) | VerifyError::Spectral(_))) => return Err(e.into()),
        Err(e) => bail!(usage(e.to_string())),
    };
    info!("{} finished in {:.1}s: {}", report.campaign, report.wall_time_secs, verdict(&report));
    let body = match common.format() {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
        Format::Csv => report.csv(),
    };
    emit(common, &body)?;
    eprintln!("{}", verdict(&report));
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn verdict(report: &VerificationReport) -> &'static str {
    if report.pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let common = &cli.common;
    match &cli.command {
        Command::Lambda { input, tol, max_iter } => run_lambda(common, input, *tol, *max_iter),
        Command::Bound { r, m, n, input } => run_bound(common, *r, *m, *n, input.as_deref()),
        Command::CheckBerge { input, kind, from, to } => run_check_berge(common, input, *kind, from.zip(*to)),
        Command::CheckCert { input, cert } => run_check_cert(common, input, cert),
        Command::Gen { kind, n, r, m, seed } => run_gen(common, *kind, *n, *r, *m, *seed),
        Command::Verify { campaign } => run_verify(common, campaign),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.common.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() || e.downcast_ref::<VerifyError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}

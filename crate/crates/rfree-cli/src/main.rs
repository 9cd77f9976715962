//! Batch operator surface over group spec files: ball enumeration,
//! freeness certification, configuration search, boosting, brute-force
//! oracles, and Monte Carlo probability checks. Exit codes are a stable
//! contract: 0 pass/certified, 1 not-certified/witness-found, 2 undecided,
//! 3 budget exceeded, 4 input error.

mod artifact;

use artifact::{
    ball_jsonl, mc_table_csv, search_trace_csv, to_pretty_json, CertificateFile, SearchFile,
    WitnessFile, TOOL_VERSION,
};
use clap::{Parser, Subcommand, ValueEnum};
use rfree::ball::ball;
use rfree::certify::{boost, certify_free_from_set, psi, CoeffSet, FreenessCertificate};
use rfree::interval::Interval;
use rfree::matrix::{parse_rat, GroupSpec};
use rfree::oracle::{brute_force_witness, mc_probability_check, McEvent, McTable};
use rfree::search::{find_candidate, SearchParams};
use rfree::{Error, QMatrix, Result, DEFAULT_PREC};
use std::path::{Path, PathBuf};

/// Hard cap on brute-force enumeration size; budgets whose predicted word
/// count exceeds it are refused instead of silently truncated.
const WORD_CAP: u128 = 100_000_000;

#[derive(Parser)]
#[command(
    name = "rfree",
    version,
    about = "Certificates and search for quantitative freeness in matrix groups"
)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores). Results
    /// are identical for any value.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the word-metric ball of a group spec and report its
    /// growth table.
    Ball {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 1_000_000)]
        ball_cap: usize,
        #[arg(long)]
        precision_bits: Option<u32>,
        /// Write the ball as line-delimited JSON records.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify an element freely independent from the noncentral ball of
    /// the given radius.
    Certify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        radius: u32,
        /// Generator word like "a*b^-1", inline rows like "1,2;0,1", or
        /// @file.json with an "element" key.
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 1_000_000)]
        ball_cap: usize,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized flag-configuration search followed by exact realization.
    Search {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        seed: u64,
        /// Sample budget.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0.5)]
        delta0: f64,
        /// Diagonal profile of the realized element, a rational > 1.
        #[arg(long, default_value = "65536")]
        t: String,
        #[arg(long, default_value_t = 1_000_000)]
        ball_cap: usize,
        #[arg(long)]
        precision_bits: Option<u32>,
        /// Outcome JSON path; a sample trace CSV lands next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conjugate a one-parameter subgroup power into an element with an
    /// inflated contraction parameter and certify the result.
    Boost {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        radius: u32,
        /// The conjugating element gamma.
        #[arg(long)]
        element: String,
        /// Very proximal generator of the one-parameter subgroup.
        #[arg(long)]
        a0: String,
        /// Lower-bound rate parameter in psi >= e^(-kappa r).
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1_000_000)]
        ball_cap: usize,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive mixed-identity witness search against the noncentral
    /// ball.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 6)]
        max_syllables: usize,
        #[arg(long, default_value_t = 3)]
        max_power: i64,
        #[arg(long, default_value_t = 1_000_000)]
        ball_cap: usize,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo check of a geometric smallness probability bound on an
    /// epsilon grid.
    McVerify {
        #[arg(long, value_enum)]
        event: EventKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Comma-separated grid in (0,1); the constant is fitted on the
        /// even positions and validated on the odd ones.
        #[arg(long, default_value = "0.1,0.03,0.01,0.003,0.001")]
        epsilons: String,
        /// Ambient dimension (tubular event).
        #[arg(long)]
        dim: Option<usize>,
        /// Subspace dimension (tubular event, default dim - 1).
        #[arg(long)]
        subspace_dim: Option<usize>,
        /// Fixed matrix h as inline rows or @file (almost-fixed and
        /// flag-pairing events).
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        precision_bits: Option<u32>,
        /// Write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check an emitted certificate from scratch and compare every
    /// reported quantity.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        ball_cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EventKind {
    Tubular,
    AlmostFixed,
    FlagPairing,
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: could not size the thread pool: {e}");
            std::process::exit(4);
        }
    }
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotVeryProximal | Error::PsiTooSmall { .. } => 1,
        Error::Undecided(_)
        | Error::NotDiagonalizable
        | Error::IllConditioned(_)
        | Error::ExactificationDrift { .. } => 2,
        Error::Budget(_) | Error::SearchExhausted => 3,
        _ => 4,
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Ball {
            spec,
            radius,
            ball_cap,
            precision_bits,
            out,
        } => cmd_ball(&spec, radius, ball_cap, prec(precision_bits), out),
        Command::Certify {
            spec,
            radius,
            element,
            ball_cap,
            precision_bits,
            out,
        } => cmd_certify(
            &spec,
            radius,
            &element,
            ball_cap,
            prec(precision_bits),
            out,
        ),
        Command::Search {
            spec,
            radius,
            seed,
            samples,
            delta0,
            t,
            ball_cap,
            precision_bits,
            out,
        } => cmd_search(
            &spec,
            radius,
            seed,
            samples,
            delta0,
            &t,
            ball_cap,
            prec(precision_bits),
            out,
        ),
        Command::Boost {
            spec,
            radius,
            element,
            a0,
            kappa,
            ball_cap,
            precision_bits,
            out,
        } => cmd_boost(
            &spec,
            radius,
            &element,
            &a0,
            kappa,
            ball_cap,
            prec(precision_bits),
            out,
        ),
        Command::Oracle {
            spec,
            radius,
            element,
            max_syllables,
            max_power,
            ball_cap,
            precision_bits,
            out,
        } => cmd_oracle(
            &spec,
            radius,
            &element,
            max_syllables,
            max_power,
            ball_cap,
            prec(precision_bits),
            out,
        ),
        Command::McVerify {
            event,
            seed,
            samples,
            epsilons,
            dim,
            subspace_dim,
            h,
            precision_bits,
            out,
        } => cmd_mc_verify(
            event,
            seed,
            samples,
            &epsilons,
            dim,
            subspace_dim,
            h.as_deref(),
            prec(precision_bits),
            out,
        ),
        Command::Verify {
            certificate,
            spec,
            ball_cap,
        } => cmd_verify(&certificate, &spec, ball_cap),
    }
}

fn prec(precision_bits: Option<u32>) -> u32 {
    precision_bits.unwrap_or(DEFAULT_PREC)
}

/// Render an interval as a short decimal enclosure for terminal output.
fn ivs(iv: &Interval) -> String {
    let (lo, hi) = iv.to_decimal_pair(12);
    format!("[{lo}, {hi}]")
}

fn write_artifact(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Parse an element argument: "@path" reads a JSON file with an "element"
/// or "matrix" key; text containing ';' is inline rows; anything else is a
/// '*'-separated word over the spec's generator labels, each factor a
/// label or label^k.
fn parse_element(expr: &str, spec: Option<&GroupSpec>) -> Result<QMatrix> {
    let expr = expr.trim();
    if let Some(path) = expr.strip_prefix('@') {
        let text = std::fs::read_to_string(path)?;
        let v: serde_json::Value = serde_json::from_str(&text)?;
        let rows = v
            .get("element")
            .or_else(|| v.get("matrix"))
            .ok_or_else(|| {
                Error::Parse(format!("no \"element\" or \"matrix\" key in {path}"))
            })?;
        let rows: Vec<Vec<String>> = serde_json::from_value(rows.clone())?;
        return QMatrix::from_string_rows(&rows);
    }
    if expr.contains(';') {
        let rows: Vec<Vec<String>> = expr
            .split(';')
            .map(|r| r.split(',').map(|s| s.trim().to_string()).collect())
            .collect();
        return QMatrix::from_string_rows(&rows);
    }
    let spec = spec.ok_or_else(|| {
        Error::Parse(format!(
            "{expr:?} is not an inline matrix, and no group spec is available for word lookup"
        ))
    })?;
    let mut acc: Option<QMatrix> = None;
    for token in expr.split('*') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Parse(format!("empty factor in element word {expr:?}")));
        }
        let factor = if token == "e" {
            QMatrix::identity(spec.dim)
        } else if let Some(g) = spec.find_generator(token) {
            g.matrix.clone()
        } else if let Some((base, pow)) = token.rsplit_once('^') {
            let k: i64 = pow
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
            let g = spec
                .find_generator(base)
                .ok_or_else(|| Error::Parse(format!("unknown generator {base:?}")))?;
            g.matrix.pow_i64(k)?
        } else {
            return Err(Error::Parse(format!("unknown generator {token:?}")));
        };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.mul(&factor),
        });
    }
    acc.ok_or_else(|| Error::Parse("empty element expression".into()))
}

fn load_set(spec: &GroupSpec, radius: u32, ball_cap: usize, prec: u32) -> Result<CoeffSet> {
    let b = ball(spec, radius, ball_cap)?;
    let mut set = CoeffSet::from_ball(&b, prec)?;
    set.spec_digest = Some(spec.digest());
    Ok(set)
}

fn cmd_ball(
    spec_path: &Path,
    radius: u32,
    ball_cap: usize,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<i32> {
    let spec = GroupSpec::load(spec_path)?;
    let b = ball(&spec, radius, ball_cap)?;
    println!(
        "ball of radius {radius} in dim {}: {} elements ({} generators after inverse closure)",
        b.dim,
        b.elements.len(),
        spec.generators.len()
    );
    let mut counts = vec![0usize; radius as usize + 1];
    for e in &b.elements {
        counts[e.length as usize] += 1;
    }
    for (l, c) in counts.iter().enumerate() {
        println!("length {l}: {c}");
    }
    if let Some(path) = out {
        write_artifact(&path, &ball_jsonl(&b, &spec.digest(), prec)?)?;
    }
    Ok(0)
}

fn print_certificate(cert: &FreenessCertificate) {
    println!("dim {}, coefficient set: {}", cert.dim, cert.set_description);
    println!(
        "|F| = {} (ball size {}), set digest {}",
        cert.noncentral_size,
        cert.ball_size,
        &cert.set_digest[..16]
    );
    println!("C_g = {}", ivs(&cert.c_g));
    println!(
        "L = {} (blanket bound e^(4 len_max) = {}, len_max = {})",
        ivs(&cert.lip),
        ivs(&cert.lip_exp_bound),
        ivs(&cert.len_max)
    );
    match &cert.d {
        Some(d) => println!("D = {}", ivs(d)),
        None => println!("D = +inf (empty coefficient set; vacuous)"),
    }
    println!("threshold (1+L)/sqrt(C_g) = {}", ivs(&cert.threshold));
    match &cert.margin {
        Some(m) => println!("margin = {}", ivs(m)),
        None => println!("margin = +inf"),
    }
    if let Some(b) = &cert.boost_trace {
        println!(
            "boost: q = {}, exponent 2qr = {}, psi = {}, candidate length {} within budget {}",
            b.q,
            b.exponent,
            ivs(&b.psi),
            ivs(&b.candidate_len),
            ivs(&b.len_budget)
        );
    }
    if cert.element_in_set {
        println!("note: the element lies in its own coefficient set, so D = 0");
    }
    println!(
        "verdict: {}",
        if cert.certified {
            "certified"
        } else {
            "not certified"
        }
    );
}

fn cmd_certify(
    spec_path: &Path,
    radius: u32,
    element: &str,
    ball_cap: usize,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<i32> {
    let spec = GroupSpec::load(spec_path)?;
    let g = parse_element(element, Some(&spec))?;
    let set = load_set(&spec, radius, ball_cap, prec)?;
    let cert = certify_free_from_set(&g, &set, None, prec)?;
    print_certificate(&cert);
    if let Some(path) = out {
        let file = CertificateFile::from_certificate(&cert);
        write_artifact(&path, &to_pretty_json(&file)?)?;
    }
    Ok(if cert.certified { 0 } else { 1 })
}

fn cmd_search(
    spec_path: &Path,
    radius: u32,
    seed: u64,
    samples: u64,
    delta0: f64,
    t: &str,
    ball_cap: usize,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<i32> {
    let spec = GroupSpec::load(spec_path)?;
    let t = parse_rat(t)?;
    let params = SearchParams {
        radius,
        budget: samples,
        delta0,
        t,
        seed,
        ball_cap,
        prec,
    };
    let outcome = find_candidate(&spec, &params)?;
    println!(
        "searched {} configurations (seed {seed}): {} accepted ({:.2}%), {} resamples",
        outcome.samples,
        outcome.accepted_count,
        100.0 * outcome.acceptance_rate,
        outcome.resamples
    );
    if let Some(idx) = outcome.best_index {
        println!("best sample: index {idx}");
    }
    if let Some(score) = &outcome.best_score {
        println!("interval re-score: {}", ivs(score));
    }
    if let Some(r) = &outcome.realization {
        let c_g = r
            .spectral
            .c_g
            .as_ref()
            .map(ivs)
            .unwrap_or_else(|| "-".into());
        println!(
            "realized exact element (t = {}): drift {:.3e}, attractor fidelity {:.3e}, C_g = {c_g}",
            rfree::matrix::rat_to_string(&r.t),
            r.drift,
            r.att_fidelity
        );
    }
    if let Some(d) = &outcome.diagnosis {
        println!("diagnosis: {d}");
    }
    if let Some(path) = &out {
        let file = SearchFile::from_outcome(&outcome, prec);
        write_artifact(path, &to_pretty_json(&file)?)?;
        let trace_path = path.with_extension("trace.csv");
        write_artifact(&trace_path, &search_trace_csv(&outcome))?;
    }
    Ok(if outcome.realization.is_some() { 0 } else { 3 })
}

fn cmd_boost(
    spec_path: &Path,
    radius: u32,
    element: &str,
    a0: &str,
    kappa: f64,
    ball_cap: usize,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<i32> {
    let spec = GroupSpec::load(spec_path)?;
    let gamma = parse_element(element, Some(&spec))?;
    let a0 = parse_element(a0, Some(&spec))?;
    let set = load_set(&spec, radius, ball_cap, prec)?;
    let psi_value = psi(&gamma, &set, &a0, prec)?.ok_or_else(|| {
        Error::Invalid("psi is undefined against an empty coefficient set".into())
    })?;
    println!("psi(gamma) = {}", ivs(&psi_value));
    let (_, cert) = boost(&gamma, &a0, &set, radius, kappa, &psi_value, prec)?;
    print_certificate(&cert);
    if let Some(path) = out {
        let file = CertificateFile::from_certificate(&cert);
        write_artifact(&path, &to_pretty_json(&file)?)?;
    }
    Ok(if cert.certified { 0 } else { 1 })
}

fn cmd_oracle(
    spec_path: &Path,
    radius: u32,
    element: &str,
    max_syllables: usize,
    max_power: i64,
    ball_cap: usize,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<i32> {
    let spec = GroupSpec::load(spec_path)?;
    let gamma = parse_element(element, Some(&spec))?;
    let set = load_set(&spec, radius, ball_cap, prec)?;
    let report = brute_force_witness(&gamma, &set, max_syllables, max_power, WORD_CAP)?;
    println!(
        "budgets: {} syllables, powers up to {}; {} words predicted",
        report.max_syllables, report.max_abs_power, report.predicted_words
    );
    println!(
        "checked {} words in {} ms ({:.0} words/s)",
        report.words_checked, report.elapsed_ms, report.words_per_sec
    );
    match &report.witness {
        Some(w) => println!(
            "witness found: {} ({} syllables)",
            w.to_text(),
            w.syllable_count()
        ),
        None => println!("no witness: every word within budget misses the identity"),
    }
    if let Some(path) = out {
        let file = WitnessFile::from_report(&report, Some(spec.digest()), set.radius, prec);
        write_artifact(&path, &to_pretty_json(&file)?)?;
    }
    Ok(if report.witness.is_some() { 1 } else { 0 })
}

fn parse_epsilons(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let v: f64 = part
            .parse()
            .map_err(|_| Error::Parse(format!("bad epsilon {part:?}")))?;
        out.push(v);
    }
    Ok(out)
}

fn print_mc_table(table: &McTable) {
    println!(
        "{} event, dim {}, {} samples, seed {}",
        table.event, table.dim, table.samples, table.seed
    );
    if let Some(omega) = table.omega {
        println!("omega(h) = {omega:.6}");
    }
    if let Some(n) = table.h_op_norm {
        println!("|h|_op = {n:.6}");
    }
    println!("fitted constant on the even grid rows: {:.6}", table.fitted_c);
    println!("epsilon        p_hat          bound          closed_form    held_out  ok");
    for r in &table.rows {
        let cf = r
            .closed_form
            .map(|v| format!("{v:<14.6e}"))
            .unwrap_or_else(|| format!("{:<14}", "-"));
        println!(
            "{:<14.6e} {:<14.6e} {:<14.6e} {} {:<9} {}",
            r.epsilon, r.p_hat, r.bound, cf, r.held_out, r.within_bound
        );
    }
    println!(
        "validation: {}; closed form: {}",
        if table.validation_ok { "ok" } else { "VIOLATED" },
        if table.closed_form_ok { "ok" } else { "VIOLATED" }
    );
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc_verify(
    event: EventKind,
    seed: u64,
    samples: u64,
    epsilons: &str,
    dim: Option<usize>,
    subspace_dim: Option<usize>,
    h: Option<&str>,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<i32> {
    let eps = parse_epsilons(epsilons)?;
    let event = match event {
        EventKind::Tubular => {
            let dim = dim.ok_or_else(|| {
                Error::Invalid("the tubular event needs --dim".into())
            })?;
            let subspace_dim = subspace_dim.unwrap_or(dim.saturating_sub(1));
            McEvent::Tubular { dim, subspace_dim }
        }
        EventKind::AlmostFixed => {
            let h = h.ok_or_else(|| {
                Error::Invalid("the almost-fixed event needs --h".into())
            })?;
            McEvent::AlmostFixed {
                h: parse_element(h, None)?,
            }
        }
        EventKind::FlagPairing => {
            let h = h.ok_or_else(|| {
                Error::Invalid("the flag-pairing event needs --h".into())
            })?;
            McEvent::FlagPairing {
                h: parse_element(h, None)?,
            }
        }
    };
    let table = mc_probability_check(&event, &eps, samples, seed, prec)?;
    print_mc_table(&table);
    if let Some(path) = out {
        write_artifact(&path, &mc_table_csv(&table, prec))?;
    }
    Ok(if table.validation_ok && table.closed_form_ok {
        0
    } else {
        1
    })
}

fn cmd_verify(certificate: &Path, spec_path: &Path, ball_cap: usize) -> Result<i32> {
    let text = std::fs::read_to_string(certificate)?;
    let file: CertificateFile = serde_json::from_str(&text)?;
    if file.kind != "freeness-certificate" {
        return Err(Error::Invalid(format!(
            "not a certificate file (kind = {:?})",
            file.kind
        )));
    }
    let spec = GroupSpec::load(spec_path)?;
    if let Some(recorded) = &file.spec_digest {
        if *recorded != spec.digest() {
            return Err(Error::Invalid(
                "spec digest mismatch: the certificate was issued for a different group spec"
                    .into(),
            ));
        }
    }
    let radius = file.radius.ok_or_else(|| {
        Error::Invalid(
            "the certificate does not record a ball radius, so its set cannot be rebuilt".into(),
        )
    })?;
    let element = QMatrix::from_string_rows(&file.element)?;
    let set = load_set(&spec, radius, ball_cap, file.precision_bits)?;
    let cert = certify_free_from_set(&element, &set, None, file.precision_bits)?;
    let recomputed = CertificateFile::from_certificate(&cert);
    let mismatches = file.diff_core(&recomputed);
    if file.tool_version != TOOL_VERSION {
        println!(
            "note: certificate from tool {} checked by {}",
            file.tool_version, TOOL_VERSION
        );
    }
    if let Some(b) = &file.boost {
        println!(
            "boost block present (q = {}, exponent = {}); core quantities re-derived from the boosted element",
            b.q, b.exponent
        );
    }
    if mismatches.is_empty() {
        println!(
            "verified: recomputation at {} bits reproduces the certificate ({})",
            file.precision_bits,
            if file.certified {
                "certified"
            } else {
                "not certified"
            }
        );
        Ok(0)
    } else {
        println!("verification FAILED; mismatched fields: {}", mismatches.join(", "));
        Ok(1)
    }
}

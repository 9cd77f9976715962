//! Serialized forms of the library's result types. Every artifact carries
//! the spec digest, seed (where one exists), precision, and tool version,
//! and omits wall-clock fields so identical inputs produce identical bytes.

use rfree::ball::Ball;
use rfree::certify::{BoostTrace, FreenessCertificate};
use rfree::interval::Interval;
use rfree::norms::length;
use rfree::oracle::{McTable, WitnessReport};
use rfree::search::SearchOutcome;
use rfree::Result;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Decimal digits kept when rendering interval endpoints. Lower endpoints
/// round down and upper endpoints round up, so the printed pair still
/// encloses the computed one.
const SIG_DIGITS: u32 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalText {
    pub lo: String,
    pub hi: String,
}

impl IntervalText {
    pub fn from_interval(iv: &Interval) -> IntervalText {
        let (lo, hi) = iv.to_decimal_pair(SIG_DIGITS);
        IntervalText { lo, hi }
    }
}

fn ivtext(iv: &Interval) -> IntervalText {
    IntervalText::from_interval(iv)
}

fn ivtext_opt(iv: &Option<Interval>) -> Option<IntervalText> {
    iv.as_ref().map(ivtext)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub kind: String,
    pub tool_version: String,
    pub precision_bits: u32,
    pub spec_digest: Option<String>,
    pub set_digest: String,
    pub set_description: String,
    pub radius: Option<u32>,
    pub ball_size: usize,
    pub noncentral_size: usize,
    pub dim: usize,
    pub element: Vec<Vec<String>>,
    pub certified: bool,
    pub vacuous: bool,
    pub element_in_set: bool,
    pub c_g: IntervalText,
    /// Lipschitz parameter used in the threshold (sharpened per-set value).
    pub lip: IntervalText,
    /// Blanket bound e^{4 len_max}, reported alongside for comparison.
    pub lip_exp_bound: IntervalText,
    pub len_max: IntervalText,
    pub d: Option<IntervalText>,
    pub threshold: IntervalText,
    pub margin: Option<IntervalText>,
    pub boost: Option<BoostFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoostFile {
    pub a0: Vec<Vec<String>>,
    pub q: u64,
    pub exponent: u64,
    pub radius: u32,
    pub kappa_hat: f64,
    pub log_c_a0: IntervalText,
    pub psi: IntervalText,
    pub candidate_len: IntervalText,
    pub len_budget: IntervalText,
}

impl BoostFile {
    fn from_trace(t: &BoostTrace) -> BoostFile {
        BoostFile {
            a0: t.a0.to_string_rows(),
            q: t.q,
            exponent: t.exponent,
            radius: t.radius,
            kappa_hat: t.kappa_hat,
            log_c_a0: ivtext(&t.log_c_a0),
            psi: ivtext(&t.psi),
            candidate_len: ivtext(&t.candidate_len),
            len_budget: ivtext(&t.len_budget),
        }
    }
}

impl CertificateFile {
    pub fn from_certificate(cert: &FreenessCertificate) -> CertificateFile {
        CertificateFile {
            kind: "freeness-certificate".into(),
            tool_version: TOOL_VERSION.into(),
            precision_bits: cert.prec,
            spec_digest: cert.spec_digest.clone(),
            set_digest: cert.set_digest.clone(),
            set_description: cert.set_description.clone(),
            radius: cert.radius,
            ball_size: cert.ball_size,
            noncentral_size: cert.noncentral_size,
            dim: cert.dim,
            element: cert.element.to_string_rows(),
            certified: cert.certified,
            vacuous: cert.vacuous,
            element_in_set: cert.element_in_set,
            c_g: ivtext(&cert.c_g),
            lip: ivtext(&cert.lip),
            lip_exp_bound: ivtext(&cert.lip_exp_bound),
            len_max: ivtext(&cert.len_max),
            d: ivtext_opt(&cert.d),
            threshold: ivtext(&cert.threshold),
            margin: ivtext_opt(&cert.margin),
            boost: cert.boost_trace.as_ref().map(BoostFile::from_trace),
        }
    }

    /// Field-by-field comparison against a recomputation, ignoring
    /// tool_version and the boost block (a recomputation certifies the
    /// already-boosted element directly). Returns the mismatched fields.
    pub fn diff_core(&self, other: &CertificateFile) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, same: bool| {
            if !same {
                out.push(name.to_string());
            }
        };
        check("precision_bits", self.precision_bits == other.precision_bits);
        check("spec_digest", self.spec_digest == other.spec_digest);
        check("set_digest", self.set_digest == other.set_digest);
        check("radius", self.radius == other.radius);
        check("ball_size", self.ball_size == other.ball_size);
        check(
            "noncentral_size",
            self.noncentral_size == other.noncentral_size,
        );
        check("dim", self.dim == other.dim);
        check("element", self.element == other.element);
        check("certified", self.certified == other.certified);
        check("vacuous", self.vacuous == other.vacuous);
        check("element_in_set", self.element_in_set == other.element_in_set);
        check("c_g", self.c_g == other.c_g);
        check("lip", self.lip == other.lip);
        check("lip_exp_bound", self.lip_exp_bound == other.lip_exp_bound);
        check("len_max", self.len_max == other.len_max);
        check("d", self.d == other.d);
        check("threshold", self.threshold == other.threshold);
        check("margin", self.margin == other.margin);
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessFile {
    pub kind: String,
    pub tool_version: String,
    pub precision_bits: u32,
    pub spec_digest: Option<String>,
    pub set_digest: String,
    pub radius: Option<u32>,
    pub dim: usize,
    pub target: Vec<Vec<String>>,
    pub max_syllables: usize,
    pub max_abs_power: i64,
    pub predicted_words: String,
    pub words_checked: String,
    pub complete: bool,
    pub witness: Option<String>,
    pub witness_syllables: Option<usize>,
}

impl WitnessFile {
    pub fn from_report(
        report: &WitnessReport,
        spec_digest: Option<String>,
        radius: Option<u32>,
        prec: u32,
    ) -> WitnessFile {
        WitnessFile {
            kind: "witness-report".into(),
            tool_version: TOOL_VERSION.into(),
            precision_bits: prec,
            spec_digest,
            set_digest: report.set_digest.clone(),
            radius,
            dim: report.target.dim(),
            target: report.target.to_string_rows(),
            max_syllables: report.max_syllables,
            max_abs_power: report.max_abs_power,
            predicted_words: report.predicted_words.to_string(),
            words_checked: report.words_checked.to_string(),
            complete: report.complete,
            witness: report.witness.as_ref().map(|w| w.to_text()),
            witness_syllables: report.witness.as_ref().map(|w| w.syllable_count()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchFile {
    pub kind: String,
    pub tool_version: String,
    pub precision_bits: u32,
    pub spec_digest: String,
    pub radius: u32,
    pub seed: u64,
    pub samples: u64,
    pub delta0: f64,
    pub t: String,
    pub ball_size: usize,
    pub noncentral_size: usize,
    pub accepted_count: u64,
    pub resamples: u64,
    pub acceptance_rate: f64,
    pub best_index: Option<u64>,
    pub best_score: Option<IntervalText>,
    pub diagnosis: Option<String>,
    pub element: Option<Vec<Vec<String>>>,
    pub realization: Option<RealizationFile>,
    pub milestones: Vec<(u64, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationFile {
    pub t: String,
    pub basis_condition: f64,
    pub conjugator_length: f64,
    pub drift: f64,
    pub pre_fidelity: f64,
    pub att_fidelity: f64,
    pub rep_fidelity: f64,
    pub c_g: Option<IntervalText>,
}

impl SearchFile {
    pub fn from_outcome(outcome: &SearchOutcome, prec: u32) -> SearchFile {
        SearchFile {
            kind: "search-outcome".into(),
            tool_version: TOOL_VERSION.into(),
            precision_bits: prec,
            spec_digest: outcome.spec_digest.clone(),
            radius: outcome.radius,
            seed: outcome.seed,
            samples: outcome.samples,
            delta0: outcome.delta0,
            t: rfree::matrix::rat_to_string(&outcome.t),
            ball_size: outcome.ball_size,
            noncentral_size: outcome.noncentral_size,
            accepted_count: outcome.accepted_count,
            resamples: outcome.resamples,
            acceptance_rate: outcome.acceptance_rate,
            best_index: outcome.best_index,
            best_score: ivtext_opt(&outcome.best_score),
            diagnosis: outcome.diagnosis.clone(),
            element: outcome
                .realization
                .as_ref()
                .map(|r| r.element.to_string_rows()),
            realization: outcome.realization.as_ref().map(|r| RealizationFile {
                t: rfree::matrix::rat_to_string(&r.t),
                basis_condition: r.basis_condition,
                conjugator_length: r.conjugator_length,
                drift: r.drift,
                pre_fidelity: r.pre_fidelity,
                att_fidelity: r.att_fidelity,
                rep_fidelity: r.rep_fidelity,
                c_g: ivtext_opt(&r.spectral.c_g),
            }),
            milestones: outcome.milestones.clone(),
        }
    }
}

/// Sample-by-sample trace as CSV with a commented metadata header.
pub fn search_trace_csv(outcome: &SearchOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# kind: search-trace");
    let _ = writeln!(s, "# tool_version: {TOOL_VERSION}");
    let _ = writeln!(s, "# spec_digest: {}", outcome.spec_digest);
    let _ = writeln!(s, "# radius: {}", outcome.radius);
    let _ = writeln!(s, "# seed: {}", outcome.seed);
    let _ = writeln!(s, "# samples: {}", outcome.samples);
    let _ = writeln!(s, "# delta0: {}", outcome.delta0);
    let _ = writeln!(s, "index,score,accepted");
    for row in &outcome.trace {
        let _ = writeln!(s, "{},{},{}", row.index, row.score, row.accepted);
    }
    s
}

/// Monte Carlo table as CSV with a commented metadata header.
pub fn mc_table_csv(table: &McTable, prec: u32) -> String {
    fn opt(v: &Option<f64>) -> String {
        v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
    }
    let mut s = String::new();
    let _ = writeln!(s, "# kind: mc-table");
    let _ = writeln!(s, "# tool_version: {TOOL_VERSION}");
    let _ = writeln!(s, "# event: {}", table.event);
    let _ = writeln!(s, "# dim: {}", table.dim);
    let _ = writeln!(s, "# samples: {}", table.samples);
    let _ = writeln!(s, "# seed: {}", table.seed);
    let _ = writeln!(s, "# precision_bits: {prec}");
    let _ = writeln!(s, "# fitted_c: {}", table.fitted_c);
    let _ = writeln!(s, "# omega: {}", opt(&table.omega));
    let _ = writeln!(s, "# h_op_norm: {}", opt(&table.h_op_norm));
    let _ = writeln!(s, "# validation_ok: {}", table.validation_ok);
    let _ = writeln!(s, "# closed_form_ok: {}", table.closed_form_ok);
    let _ = writeln!(
        s,
        "epsilon,hits,p_hat,std_err,shape,bound,closed_form,held_out,within_bound"
    );
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.epsilon,
            r.hits,
            r.p_hat,
            r.std_err,
            r.shape,
            r.bound,
            opt(&r.closed_form),
            r.held_out,
            r.within_bound
        );
    }
    s
}

/// Ball export: one JSON object per line, header first, then each element
/// with its shortest word, length, exact matrix, and displacement interval.
pub fn ball_jsonl(ball: &Ball, spec_digest: &str, prec: u32) -> Result<String> {
    #[derive(Serialize)]
    struct Header<'a> {
        kind: &'a str,
        tool_version: &'a str,
        spec_digest: &'a str,
        dim: usize,
        radius: u32,
        count: usize,
        precision_bits: u32,
    }
    #[derive(Serialize)]
    struct Line {
        text: String,
        length: u32,
        matrix: Vec<Vec<String>>,
        displacement: IntervalText,
    }
    let mut s = serde_json::to_string(&Header {
        kind: "ball",
        tool_version: TOOL_VERSION,
        spec_digest,
        dim: ball.dim,
        radius: ball.radius,
        count: ball.elements.len(),
        precision_bits: prec,
    })?;
    s.push('\n');
    for e in &ball.elements {
        let line = Line {
            text: e.text.clone(),
            length: e.length,
            matrix: e.matrix.to_string_rows(),
            displacement: ivtext(&length(&e.matrix, prec)?),
        };
        s.push_str(&serde_json::to_string(&line)?);
        s.push('\n');
    }
    Ok(s)
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

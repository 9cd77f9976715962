//! Randomized search for very proximal candidates: sample flag
//! configurations, score their separation from a ball of coefficients,
//! realize the best configuration as an exact rational matrix with
//! prescribed eigenvalue profile, and verify the realized spectrum.
//!
//! The search layer is deliberately split in rigor: sampling and scoring
//! run in f64 for throughput, while anything a certificate will touch
//! (the realized element, its spectrum, the final score) is recomputed
//! exactly or in outward-rounded intervals.

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::{GroupSpec, Matrix, QMatrix};
use crate::projective::{
    dist_point_hyperplane, dist_points, dot, norm_sq, sample_flag,
};
use crate::proximal::{analyze_spectrum, SpectralData, Verdict};
use crate::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const DEGENERATE_NORMALS_TOL: f64 = 1e-12;
const BASIS_CONDITION_LIMIT: f64 = 1e8;
const EXACTIFICATION_DRIFT_TOL: f64 = 1e-9;

/// Two transverse flags: attracting and repelling points with hyperplanes
/// through the opposite point, and their codimension-2 intersection.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
    /// Unit normal of W_plus, the hyperplane through p_minus.
    pub n_plus: Vec<f64>,
    /// Unit normal of W_minus, the hyperplane through p_plus.
    pub n_minus: Vec<f64>,
    /// Orthonormal basis of span(n_plus, n_minus); distances to the
    /// codimension-2 intersection W0 pair against these two directions.
    pub w0_conormal: [Vec<f64>; 2],
    /// d_P(p_plus, p_minus).
    pub sep_points: f64,
    /// d_P(p_plus, W0).
    pub sep_plus: f64,
    /// d_P(p_minus, W0).
    pub sep_minus: f64,
    /// max(|<p_plus, n_minus>|, |<p_minus, n_plus>|), flag consistency.
    pub incidence_residual: f64,
    /// Degenerate draws discarded before this configuration was produced.
    pub resamples: u64,
}

fn orthonormalize_pair(a: &[f64], b: &[f64]) -> Option<[Vec<f64>; 2]> {
    let na = norm_sq(a).sqrt();
    if na < 1e-9 {
        return None;
    }
    let u1: Vec<f64> = a.iter().map(|x| x / na).collect();
    let c = dot(b, &u1);
    let mut u2: Vec<f64> = b.iter().zip(&u1).map(|(x, u)| x - c * u).collect();
    let nb = norm_sq(&u2).sqrt();
    if nb < DEGENERATE_NORMALS_TOL {
        return None;
    }
    for x in u2.iter_mut() {
        *x /= nb;
    }
    Some([u1, u2])
}

/// Sine of the angle between a unit vector and the codimension-2 subspace
/// cut out by the two conormal directions.
pub fn dist_to_w0(p: &[f64], conormal: &[Vec<f64>; 2]) -> f64 {
    let a = dot(p, &conormal[0]);
    let b = dot(p, &conormal[1]);
    (a * a + b * b).sqrt() / norm_sq(p).sqrt()
}

/// Draws two independent uniform flags and assembles them into a
/// configuration. Draws whose hyperplanes coincide up to tolerance are
/// discarded and counted in `resamples`.
pub fn sample_configuration(dim: usize, rng: &mut ChaCha8Rng) -> Result<Configuration> {
    if dim < 2 {
        return Err(Error::Invalid(
            "configurations need dimension at least 2".into(),
        ));
    }
    let mut resamples = 0u64;
    loop {
        let f1 = sample_flag(rng, dim);
        let f2 = sample_flag(rng, dim);
        let p_plus = f1.point;
        let n_minus = f1.normal;
        let p_minus = f2.point;
        let n_plus = f2.normal;
        let w0_conormal = match orthonormalize_pair(&n_plus, &n_minus) {
            Some(pair) => pair,
            None => {
                resamples += 1;
                continue;
            }
        };
        let sep_points = dist_points(&p_plus, &p_minus);
        let sep_plus = dist_to_w0(&p_plus, &w0_conormal);
        let sep_minus = dist_to_w0(&p_minus, &w0_conormal);
        let incidence_residual = dot(&p_plus, &n_minus)
            .abs()
            .max(dot(&p_minus, &n_plus).abs());
        return Ok(Configuration {
            p_plus,
            p_minus,
            n_plus,
            n_minus,
            w0_conormal,
            sep_points,
            sep_plus,
            sep_minus,
            incidence_residual,
            resamples,
        });
    }
}

/// Score of a configuration against a ball, plus the acceptance decision.
#[derive(Clone, Debug)]
pub struct Score {
    /// Enclosure of the minimum projective distance from the moved points
    /// to the union of the two hyperplanes; `None` encodes the vacuous
    /// minimum over an empty noncentral ball.
    pub value: Option<Interval>,
    pub separations_ok: bool,
    pub accepted: bool,
    pub vacuous: bool,
}

fn vec_to_intervals(v: &[f64], prec: u32) -> Vec<Interval> {
    v.iter().map(|&x| Interval::from_f64(x, prec)).collect()
}

fn score_f64(cfg: &Configuration, movers: &[Matrix<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for h in movers {
        for q in [&cfg.p_plus, &cfg.p_minus] {
            let hq = h.apply_vec(q);
            for n in [&cfg.n_plus, &cfg.n_minus] {
                let d = dist_point_hyperplane(&hq, n);
                if d < best {
                    best = d;
                }
            }
        }
    }
    best
}

/// Interval score: minimum over noncentral ball elements h and both points
/// q of the projective distance from h q to the nearer hyperplane. The
/// point and normal representatives are dyadic-exact, so the enclosure is
/// rigorous for the sampled configuration as stored.
pub fn score_configuration(
    cfg: &Configuration,
    ball: &Ball,
    delta0: f64,
    prec: u32,
) -> Result<Score> {
    if !(0.0..=1.0).contains(&delta0) {
        return Err(Error::Invalid(format!(
            "delta0 must lie in [0, 1], got {delta0}"
        )));
    }
    let separations_ok = cfg.sep_points >= 1.0 - delta0
        && cfg.sep_plus >= 1.0 - delta0
        && cfg.sep_minus >= 1.0 - delta0;
    let movers = ball.noncentral();
    if movers.is_empty() {
        return Ok(Score {
            value: None,
            separations_ok,
            accepted: separations_ok,
            vacuous: true,
        });
    }
    let points = [
        vec_to_intervals(&cfg.p_plus, prec),
        vec_to_intervals(&cfg.p_minus, prec),
    ];
    let normals = [
        vec_to_intervals(&cfg.n_plus, prec),
        vec_to_intervals(&cfg.n_minus, prec),
    ];
    let value = movers
        .par_iter()
        .map(|h| {
            let hm = h.matrix.to_interval(prec);
            let mut acc: Option<Interval> = None;
            for q in &points {
                let hq = crate::projective::apply_point(&hm, q);
                for n in &normals {
                    let d = dist_point_hyperplane(&hq, n);
                    acc = Some(match acc {
                        None => d,
                        Some(a) => a.min_enclosure(&d),
                    });
                }
            }
            acc.unwrap()
        })
        .reduce_with(|a, b| a.min_enclosure(&b))
        .unwrap();
    let accepted = separations_ok && value.definitely_positive();
    Ok(Score {
        value: Some(value),
        separations_ok,
        accepted,
        vacuous: false,
    })
}

/// Exact realization of a configuration as a rational matrix, with the
/// diagnostics needed to audit the float-to-exact hand-off.
#[derive(Clone, Debug)]
pub struct Realization {
    pub element: QMatrix,
    pub t: Q,
    /// Singular-value condition number of the eigenbasis.
    pub basis_condition: f64,
    /// Displacement length of the determinant-normalized eigenbasis, the
    /// cost of conjugating the configuration frame to the standard one.
    pub conjugator_length: f64,
    /// Largest entry difference between the exact element and its float
    /// counterpart.
    pub drift: f64,
    /// d_P(g p_plus, p_plus) for the float matrix, before exactification.
    pub pre_fidelity: f64,
    /// d_P between the exact element's attracting direction and p_plus.
    pub att_fidelity: f64,
    /// Largest incidence residual of p_minus and the W0 basis against the
    /// exact element's repelling hyperplane.
    pub rep_fidelity: f64,
    pub spectral: SpectralData,
}

fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let d = a.len();
    for _ in 0..100 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(a[p][q].abs());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..d).map(|i| a[i][i]).collect()
}

fn basis_from_configuration(cfg: &Configuration) -> Result<Matrix<f64>> {
    let d = cfg.p_plus.len();
    let mut cols: Vec<Vec<f64>> = vec![cfg.p_plus.clone()];
    for j in 0..d {
        if cols.len() == d - 1 {
            break;
        }
        let mut v = vec![0.0; d];
        v[j] = 1.0;
        for u in &cfg.w0_conormal {
            let c = dot(&v, u);
            for (vi, ui) in v.iter_mut().zip(u.iter()) {
                *vi -= c * ui;
            }
        }
        for u in cols.iter().skip(1) {
            let c = dot(&v, u) / norm_sq(u);
            for (vi, ui) in v.iter_mut().zip(u.iter()) {
                *vi -= c * ui;
            }
        }
        let n = norm_sq(&v).sqrt();
        if n > 1e-6 {
            cols.push(v.iter().map(|x| x / n).collect());
        }
    }
    if cols.len() != d - 1 {
        return Err(Error::IllConditioned(
            "could not complete a basis of the invariant subspace".into(),
        ));
    }
    cols.push(cfg.p_minus.clone());
    let entries: Vec<f64> = (0..d)
        .flat_map(|i| cols.iter().map(move |c| c[i]).collect::<Vec<f64>>())
        .collect();
    Ok(Matrix::from_vec(d, entries))
}

fn rationalize_f64(x: f64, max_den: &BigInt) -> Result<Q> {
    if !x.is_finite() {
        return Err(Error::Invalid(format!("cannot rationalize {x}")));
    }
    let exact = crate::dyadic::Dyadic::from_f64(x).to_rat();
    Ok(reduce_denominator(&exact, max_den))
}

/// Best continued-fraction convergent with denominator within the bound.
/// Exact dyadic inputs below the bound come back unchanged.
fn reduce_denominator(x: &Q, max_den: &BigInt) -> Q {
    if x.denom() <= max_den {
        return x.clone();
    }
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut h_prev = BigInt::one();
    let mut k_prev = BigInt::zero();
    let mut h = num.div_floor(&den);
    let mut k = BigInt::one();
    num -= &h * &den;
    std::mem::swap(&mut num, &mut den);
    while !den.is_zero() {
        let a = num.div_floor(&den);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if &k_next > max_den {
            break;
        }
        let rem = &num - &a * &den;
        num = std::mem::replace(&mut den, rem);
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    Q::new(h, k)
}

fn diag_profile(d: usize, t: &Q) -> QMatrix {
    let mut entries = vec![Q::zero(); d * d];
    for i in 0..d {
        entries[i * d + i] = Q::one();
    }
    entries[0] = t.clone();
    entries[d * d - 1] = t.recip();
    QMatrix::from_vec(d, entries)
}

fn normalize_f64(v: &[f64]) -> Vec<f64> {
    let n = norm_sq(v).sqrt();
    v.iter().map(|x| x / n).collect()
}

fn interval_vec_mid(v: &[Interval]) -> Vec<f64> {
    v.iter().map(|x| x.mid_f64()).collect()
}

/// Builds g = B diag(t, 1, ..., 1, 1/t) B^-1 with B the configuration
/// basis (p_plus, a basis of W0, p_minus). The basis is rationalized
/// entrywise by continued fractions at denominator bound 2^64 and the
/// conjugation is then carried out exactly, so det g = 1 holds by
/// construction and the spectrum is exactly {t, 1, 1/t}. The exact
/// element's spectral data is re-derived from scratch and the attracting
/// and repelling loci are checked against the configuration.
pub fn realize_element(cfg: &Configuration, t: &Q, prec: u32) -> Result<Realization> {
    if t <= &Q::one() {
        return Err(Error::Invalid(format!(
            "eigenvalue ratio t must exceed 1, got {t}"
        )));
    }
    let d = cfg.p_plus.len();
    let b_float = basis_from_configuration(cfg)?;
    let gram = {
        let bt = b_float.transpose();
        bt.mul(&b_float)
    };
    let gram_rows: Vec<Vec<f64>> = (0..d).map(|i| gram.row(i)).collect();
    let eigs = symmetric_eigenvalues(gram_rows);
    let sigma_max = eigs.iter().cloned().fold(0.0f64, f64::max).sqrt();
    let sigma_min = eigs.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0).sqrt();
    if !(sigma_min > 0.0) || sigma_max / sigma_min > BASIS_CONDITION_LIMIT {
        return Err(Error::IllConditioned(format!(
            "configuration basis condition {:.3e} too large",
            sigma_max / sigma_min
        )));
    }
    let basis_condition = sigma_max / sigma_min;
    let det_b = b_float.det().abs();
    if det_b < 1e-12 {
        return Err(Error::IllConditioned(
            "configuration basis is numerically singular".into(),
        ));
    }
    let scale = det_b.powf(1.0 / d as f64);
    let conjugator_length: f64 = eigs
        .iter()
        .map(|l| {
            let s = l.max(1e-300).sqrt() / scale;
            s.ln() * s.ln()
        })
        .sum::<f64>()
        .sqrt();

    let max_den = BigInt::one() << 64;
    let b_entries: Result<Vec<Q>> = b_float
        .entries()
        .iter()
        .map(|&x| rationalize_f64(x, &max_den))
        .collect();
    let b_rat = QMatrix::from_vec(d, b_entries?);
    let b_inv = b_rat.inverse().map_err(|_| {
        Error::IllConditioned("rationalized basis is singular".into())
    })?;
    let element = b_rat.mul(&diag_profile(d, t)).mul(&b_inv);
    element.ensure_unimodular()?;

    let g_float = {
        let tf = t.to_f64().unwrap_or(f64::NAN);
        let mut prof = vec![0.0; d * d];
        for i in 0..d {
            prof[i * d + i] = 1.0;
        }
        prof[0] = tf;
        prof[d * d - 1] = 1.0 / tf;
        b_float.mul(&Matrix::from_vec(d, prof)).mul(&b_float.inverse_f64()?)
    };
    let drift = {
        let gf = element.to_f64();
        gf.entries()
            .iter()
            .zip(g_float.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    };
    if drift > EXACTIFICATION_DRIFT_TOL {
        return Err(Error::ExactificationDrift {
            drift: format!("{drift:.3e}"),
            bound: format!("{EXACTIFICATION_DRIFT_TOL:.3e}"),
        });
    }
    let pre_fidelity = {
        let moved = normalize_f64(&g_float.apply_vec(&cfg.p_plus));
        dist_points(&moved, &cfg.p_plus)
    };

    let spectral = analyze_spectrum(&element, prec)?;
    match spectral.very_proximal {
        Verdict::True => {}
        Verdict::False => return Err(Error::NotVeryProximal),
        Verdict::Undecided => {
            return Err(Error::Undecided(
                spectral
                    .note
                    .unwrap_or_else(|| "spectral rounds exhausted".into()),
            ))
        }
    }
    let att = interval_vec_mid(spectral.att.as_ref().unwrap());
    let rep_normal = interval_vec_mid(spectral.rep_normal.as_ref().unwrap());
    let att_fidelity = dist_points(&normalize_f64(&att), &cfg.p_plus);
    let mut rep_fidelity = dist_point_hyperplane(&cfg.p_minus, &rep_normal);
    let b_cols_w0: Vec<Vec<f64>> = (1..d - 1).map(|j| b_float.col(j)).collect();
    for w in &b_cols_w0 {
        rep_fidelity = rep_fidelity.max(dist_point_hyperplane(w, &rep_normal));
    }

    Ok(Realization {
        element,
        t: t.clone(),
        basis_condition,
        conjugator_length,
        drift,
        pre_fidelity,
        att_fidelity,
        rep_fidelity,
        spectral,
    })
}

/// Budgeted search inputs. Seeds are explicit; there is no wall-clock
/// default anywhere in the pipeline.
#[derive(Clone, Debug)]
pub struct SearchParams {
    pub radius: u32,
    pub budget: u64,
    pub delta0: f64,
    pub t: Q,
    pub seed: u64,
    pub ball_cap: usize,
    pub prec: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub index: u64,
    pub score: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub spec_digest: String,
    pub radius: u32,
    pub delta0: f64,
    pub t: Q,
    pub seed: u64,
    pub samples: u64,
    pub accepted_count: u64,
    pub resamples: u64,
    pub acceptance_rate: f64,
    pub ball_size: usize,
    pub noncentral_size: usize,
    /// Sample index of the best accepted configuration.
    pub best_index: Option<u64>,
    pub best_config: Option<Configuration>,
    /// Interval re-score of the winner.
    pub best_score: Option<Interval>,
    pub realization: Option<Realization>,
    pub diagnosis: Option<String>,
    pub trace: Vec<TraceRow>,
    /// Running best f64 score after every thousandth sample.
    pub milestones: Vec<(u64, f64)>,
}

/// End-to-end pipeline: sample `budget` configurations from per-sample
/// deterministic streams, score each against the noncentral ball, keep the
/// best accepted one (ties broken by lowest sample index), then realize it
/// exactly and re-derive its spectrum. The outcome is identical for any
/// worker count because every sample owns stream `seed . index`.
pub fn find_candidate(spec: &GroupSpec, params: &SearchParams) -> Result<SearchOutcome> {
    if params.budget == 0 {
        return Err(Error::Invalid("sample budget must be positive".into()));
    }
    if !(0.0..=1.0).contains(&params.delta0) {
        return Err(Error::Invalid(format!(
            "delta0 must lie in [0, 1], got {}",
            params.delta0
        )));
    }
    if params.t <= Q::one() {
        return Err(Error::Invalid(format!(
            "eigenvalue ratio t must exceed 1, got {}",
            params.t
        )));
    }
    if spec.dim < 2 {
        return Err(Error::Invalid(
            "search needs dimension at least 2".into(),
        ));
    }
    let ball = crate::ball::ball(spec, params.radius, params.ball_cap)?;
    let movers: Vec<Matrix<f64>> = ball
        .noncentral()
        .iter()
        .map(|e| e.matrix.to_f64())
        .collect();
    let dim = spec.dim;
    let seed = params.seed;
    let delta0 = params.delta0;

    struct SampleRow {
        score: f64,
        separations_ok: bool,
        resamples: u64,
    }
    let rows: Vec<SampleRow> = (0..params.budget)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let cfg = sample_configuration(dim, &mut rng).expect("dim checked");
            let separations_ok = cfg.sep_points >= 1.0 - delta0
                && cfg.sep_plus >= 1.0 - delta0
                && cfg.sep_minus >= 1.0 - delta0;
            let score = if movers.is_empty() {
                f64::INFINITY
            } else {
                score_f64(&cfg, &movers)
            };
            SampleRow {
                score,
                separations_ok,
                resamples: cfg.resamples,
            }
        })
        .collect();

    let mut trace = Vec::with_capacity(rows.len());
    let mut milestones = Vec::new();
    let mut best: Option<(f64, u64)> = None;
    let mut accepted_count = 0u64;
    let mut resamples = 0u64;
    for (i, row) in rows.iter().enumerate() {
        let accepted = row.separations_ok && row.score > 0.0;
        if accepted {
            accepted_count += 1;
            let better = match best {
                None => true,
                Some((s, _)) => row.score > s,
            };
            if better {
                best = Some((row.score, i as u64));
            }
        }
        resamples += row.resamples;
        trace.push(TraceRow {
            index: i as u64,
            score: row.score,
            accepted,
        });
        if (i + 1) % 1000 == 0 || i + 1 == rows.len() {
            milestones.push((i as u64 + 1, best.map(|(s, _)| s).unwrap_or(0.0)));
        }
    }

    let mut outcome = SearchOutcome {
        spec_digest: spec.digest(),
        radius: params.radius,
        delta0,
        t: params.t.clone(),
        seed,
        samples: params.budget,
        accepted_count,
        resamples,
        acceptance_rate: accepted_count as f64 / params.budget as f64,
        ball_size: ball.elements.len(),
        noncentral_size: movers.len(),
        best_index: None,
        best_config: None,
        best_score: None,
        realization: None,
        diagnosis: None,
        trace,
        milestones,
    };
    let Some((_, best_index)) = best else {
        outcome.diagnosis = Some(format!(
            "no accepted configuration in {} samples; best score {:.3e}; consider raising delta0 or the budget",
            params.budget,
            outcome
                .trace
                .iter()
                .map(|r| r.score)
                .fold(f64::NEG_INFINITY, f64::max),
        ));
        return Ok(outcome);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(best_index);
    let cfg = sample_configuration(dim, &mut rng)?;
    let score = score_configuration(&cfg, &ball, delta0, params.prec)?;
    if !score.accepted {
        outcome.diagnosis = Some(
            "winner failed the interval re-check; the float score was not robust".into(),
        );
        return Ok(outcome);
    }
    let realization = realize_element(&cfg, &params.t, params.prec)?;
    outcome.best_index = Some(best_index);
    outcome.best_config = Some(cfg);
    outcome.best_score = score.value;
    outcome.realization = Some(realization);
    Ok(outcome)
}

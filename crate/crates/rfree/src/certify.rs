//! The soundness core: the geometric parameter D, the dynamical criterion,
//! freeness certificates, the geometric function ψ, and boosting.
//!
//! Every certificate decision reduces to one interval comparison,
//! `D.lo > threshold.hi`, with all inputs enclosed by outward rounding.
//! False negatives are acceptable; a false positive is a soundness bug.

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::{Matrix, QMatrix};
use crate::norms::{length, lip_bound, lip_bound_from_length};
use crate::projective::{apply_hyperplane_by_inverse, apply_point, dist_point_hyperplane};
use crate::proximal::{analyze_spectrum, att_rep_loci, Loci, Verdict};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

/// A finite noncentral coefficient set, the `F` every certificate is
/// checked against. Built from a word-metric ball (center removed) or an
/// explicit element list.
#[derive(Clone, Debug)]
pub struct CoeffSet {
    pub elements: Vec<SetElement>,
    /// Source population before the noncentral filter (ball size).
    pub total_size: usize,
    pub description: String,
    pub digest: String,
    /// Word-metric radius when the set came from a ball.
    pub radius: Option<u32>,
    pub spec_digest: Option<String>,
    /// Max displacement length |h| over the set; zero when empty.
    pub len_max: Interval,
    /// Max of (‖h‖·‖h⁻¹‖)² over the set; zero when empty.
    pub lip_max: Interval,
    /// The blanket bound e^{4·len_max}, reported for comparison.
    pub lip_exp_bound: Interval,
    pub prec: u32,
}

#[derive(Clone, Debug)]
pub struct SetElement {
    pub text: String,
    pub matrix: QMatrix,
}

impl CoeffSet {
    pub fn from_ball(ball: &Ball, prec: u32) -> Result<CoeffSet> {
        let elements: Vec<SetElement> = ball
            .noncentral()
            .into_iter()
            .map(|e| SetElement {
                text: e.text.clone(),
                matrix: e.matrix.clone(),
            })
            .collect();
        let mut set = CoeffSet::assemble(
            elements,
            ball.elements.len(),
            format!("word-metric ball of radius {}, central elements removed", ball.radius),
            prec,
        )?;
        set.radius = Some(ball.radius);
        Ok(set)
    }

    /// Explicit list. Central or identity members are rejected, not
    /// silently dropped: the caller asked for exactly this set.
    pub fn from_elements(named: Vec<(String, QMatrix)>, prec: u32) -> Result<CoeffSet> {
        for (text, m) in &named {
            m.ensure_unimodular()?;
            if m.is_central() {
                return Err(Error::CentralCoefficient(text.clone()));
            }
        }
        let total = named.len();
        let elements = named
            .into_iter()
            .map(|(text, matrix)| SetElement { text, matrix })
            .collect();
        CoeffSet::assemble(elements, total, "explicit coefficient list".into(), prec)
    }

    fn assemble(
        elements: Vec<SetElement>,
        total_size: usize,
        description: String,
        prec: u32,
    ) -> Result<CoeffSet> {
        let mut digest_input = String::new();
        for e in &elements {
            write!(digest_input, "{}={};", e.text, e.matrix.to_canonical_string()).unwrap();
        }
        let mut hasher = Sha256::new();
        hasher.update(digest_input.as_bytes());
        let mut digest = String::with_capacity(64);
        for b in hasher.finalize() {
            write!(digest, "{b:02x}").unwrap();
        }
        let mut len_max = Interval::from_i64(0).with_prec(prec);
        let mut lip_max = Interval::from_i64(0).with_prec(prec);
        for e in &elements {
            len_max = len_max.max_enclosure(&length(&e.matrix, prec)?);
            lip_max = lip_max.max_enclosure(&lip_bound(&e.matrix, prec)?);
        }
        let lip_exp_bound = lip_bound_from_length(&len_max);
        Ok(CoeffSet {
            elements,
            total_size,
            description,
            digest,
            radius: None,
            spec_digest: None,
            len_max,
            lip_max,
            lip_exp_bound,
            prec,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        self.elements.iter().any(|e| &e.matrix == m)
    }
}

/// Boosting parameters attached to a certificate produced by [`boost`].
#[derive(Clone, Debug)]
pub struct BoostTrace {
    pub a0: QMatrix,
    pub q: u64,
    /// The full exponent 2qr of a₀ inside γ̃ = γ·a₀^{2qr}·γ⁻¹.
    pub exponent: u64,
    pub radius: u32,
    pub kappa_hat: f64,
    pub log_c_a0: Interval,
    pub psi: Interval,
    pub candidate_len: Interval,
    /// The guaranteed bound 2|γ| + 2qr·|a₀|.
    pub len_budget: Interval,
}

/// Machine-checkable record of one dynamical-criterion check:
/// `D ≥ (1 + L)·C^{-1/2}` over a concrete coefficient set.
#[derive(Clone, Debug)]
pub struct FreenessCertificate {
    pub element: QMatrix,
    pub dim: usize,
    pub set_description: String,
    pub set_digest: String,
    pub spec_digest: Option<String>,
    pub radius: Option<u32>,
    pub ball_size: usize,
    pub noncentral_size: usize,
    pub c_g: Interval,
    /// The Lipschitz parameter actually used in the threshold.
    pub lip: Interval,
    pub lip_exp_bound: Interval,
    pub len_max: Interval,
    /// Enclosure of the geometric parameter; `None` encodes the vacuous
    /// minimum over an empty set (+∞).
    pub d: Option<Interval>,
    pub threshold: Interval,
    /// D − threshold; certified iff its lower bound is positive.
    pub margin: Option<Interval>,
    pub certified: bool,
    pub vacuous: bool,
    pub element_in_set: bool,
    pub prec: u32,
    pub boost_trace: Option<BoostTrace>,
}

/// Minimum over the set and both attracting points of the projective
/// distance to the repelling locus (the union of the two repelling
/// hyperplanes): 4·|F| point-hyperplane distances in total.
fn min_distance_to_locus(
    transported: &[Matrix<Interval>],
    points: &[Vec<Interval>],
    normals: &[Vec<Interval>],
) -> Option<Interval> {
    transported
        .par_iter()
        .map(|h| {
            let mut acc: Option<Interval> = None;
            for p in points {
                let moved = apply_point(h, p);
                for n in normals {
                    let d = dist_point_hyperplane(&moved, n);
                    acc = Some(match acc {
                        None => d,
                        Some(a) => a.min_enclosure(&d),
                    });
                }
            }
            acc.expect("two points, two normals")
        })
        .reduce_with(|a, b| a.min_enclosure(&b))
}

/// D_{g,F}: the geometric parameter of `g` over the noncentral set.
/// `None` is the vacuous minimum (+∞) over an empty set.
pub fn geometric_parameter(g: &QMatrix, set: &CoeffSet, prec: u32) -> Result<Option<Interval>> {
    let loci = att_rep_loci(g, prec)?;
    Ok(geometric_parameter_with_loci(&loci, set, prec))
}

fn geometric_parameter_with_loci(
    loci: &Loci,
    set: &CoeffSet,
    prec: u32,
) -> Option<Interval> {
    let transported: Vec<Matrix<Interval>> = set
        .elements
        .iter()
        .map(|e| e.matrix.to_interval(prec))
        .collect();
    let points = [loci.att.clone(), loci.att_inv.clone()];
    let normals = [loci.rep_normal.clone(), loci.rep_inv_normal.clone()];
    min_distance_to_locus(&transported, &points, &normals)
}

/// Certify that `g` violates every mixed identity with coefficients in the
/// set: the dynamical criterion checked with interval-sound comparisons.
pub fn certify_free_from_set(
    g: &QMatrix,
    set: &CoeffSet,
    l_override: Option<Interval>,
    prec: u32,
) -> Result<FreenessCertificate> {
    g.ensure_unimodular()?;
    let data = analyze_spectrum(g, prec)?;
    match data.very_proximal {
        Verdict::True => {}
        Verdict::False => return Err(Error::NotVeryProximal),
        Verdict::Undecided => {
            return Err(Error::Undecided(
                data.note.unwrap_or_else(|| "very-proximal verdict unresolved".into()),
            ))
        }
    }
    let loci = Loci {
        att: data.att.clone().unwrap(),
        att_inv: data.att_inv.clone().unwrap(),
        rep_normal: data.rep_normal.clone().unwrap(),
        rep_inv_normal: data.rep_inv_normal.clone().unwrap(),
        prec: data.prec,
    };
    let c_g = data.c_g.clone().unwrap();
    let lip = l_override.unwrap_or_else(|| set.lip_max.clone());
    let d = geometric_parameter_with_loci(&loci, set, prec);
    let one = Interval::from_i64(1).with_prec(prec);
    let threshold = one.add(&lip).div(&c_g.sqrt());
    let margin = d.as_ref().map(|d| d.sub(&threshold));
    let vacuous = d.is_none();
    let certified = match &margin {
        None => true,
        Some(m) => m.lo().signum() > 0,
    };
    let g_inv = g.inverse()?;
    let element_in_set = set.contains(g) || set.contains(&g_inv);
    if certified && element_in_set {
        return Err(Error::Invalid(
            "soundness check failed: certified element lies in its own coefficient set".into(),
        ));
    }
    Ok(FreenessCertificate {
        element: g.clone(),
        dim: g.dim(),
        set_description: set.description.clone(),
        set_digest: set.digest.clone(),
        spec_digest: set.spec_digest.clone(),
        radius: set.radius,
        ball_size: set.total_size,
        noncentral_size: set.elements.len(),
        c_g,
        lip,
        lip_exp_bound: set.lip_exp_bound.clone(),
        len_max: set.len_max.clone(),
        d,
        threshold,
        margin,
        certified,
        vacuous,
        element_in_set,
        prec,
        boost_trace: None,
    })
}

/// ψ(g) = D_{g·a₀·g⁻¹, F}: the geometric parameter of the conjugate,
/// computed by transporting a₀'s loci through `g` exactly rather than
/// re-analyzing the conjugate.
pub fn psi(g: &QMatrix, set: &CoeffSet, a0: &QMatrix, prec: u32) -> Result<Option<Interval>> {
    let loci = att_rep_loci(a0, prec)?;
    let g_inv = g.inverse()?;
    let g_inv_iv = g_inv.to_interval(prec);
    let normals = [
        apply_hyperplane_by_inverse(&g_inv_iv, &loci.rep_normal),
        apply_hyperplane_by_inverse(&g_inv_iv, &loci.rep_inv_normal),
    ];
    let points = [loci.att.clone(), loci.att_inv.clone()];
    // h·g·Att±(a₀) against g·Rep±(a₀): the products h·g stay exact until
    // the final interval conversion.
    let transported: Vec<Matrix<Interval>> = set
        .elements
        .iter()
        .map(|e| e.matrix.mul(g).to_interval(prec))
        .collect();
    Ok(min_distance_to_locus(&transported, &points, &normals))
}

/// Exponent cap for the boosting construction; γ̃ entries grow like
/// C_{a₀}^{exponent} and must stay within reasonable bigint sizes.
pub const MAX_BOOST_EXPONENT: u64 = 1 << 14;

/// The boosting construction: from γ with ψ(γ) ≥ e^{-κ̂·r}, build
/// γ̃ = γ·a₀^{2qr}·γ⁻¹ with q = ⌈(5+κ̂)/log C_{a₀}⌉ and certify it.
pub fn boost(
    gamma: &QMatrix,
    a0: &QMatrix,
    set: &CoeffSet,
    radius: u32,
    kappa_hat: f64,
    psi_value: &Interval,
    prec: u32,
) -> Result<(QMatrix, FreenessCertificate)> {
    if !(kappa_hat > 0.0 && kappa_hat.is_finite()) {
        return Err(Error::Invalid("kappa_hat must be positive and finite".into()));
    }
    if radius == 0 {
        return Err(Error::Invalid("boost radius must be positive".into()));
    }
    let a0_data = analyze_spectrum(a0, prec)?;
    if a0_data.very_proximal != Verdict::True {
        return Err(Error::NotVeryProximal);
    }
    let c_a0 = a0_data.c_g.clone().unwrap();
    let log_c = c_a0.ln();
    if log_c.lo().signum() <= 0 {
        return Err(Error::Undecided(
            "log C(a0) enclosure does not separate from zero".into(),
        ));
    }
    let r_iv = Interval::from_i64(radius as i64).with_prec(prec);
    let required = Interval::from_f64(kappa_hat, prec).neg().mul(&r_iv).exp();
    if !(psi_value.lo() > required.hi()) {
        return Err(Error::PsiTooSmall {
            psi_lo: psi_value.lo().to_decimal(12, crate::dyadic::Round::Down),
            required: required.hi().to_decimal(12, crate::dyadic::Round::Up),
        });
    }
    let kappa = Interval::from_f64(kappa_hat, prec);
    let q_iv = Interval::from_i64(5).add(&kappa).div(&log_c);
    let q_big = q_iv.ceil_exact().ok_or_else(|| {
        Error::Undecided("ceiling of (5+kappa)/log C(a0) is ambiguous at this precision".into())
    })?;
    let q: u64 = u64::try_from(q_big.clone())
        .map_err(|_| Error::Invalid(format!("boost step count q = {q_big} out of range")))?;
    let exponent = 2u64
        .checked_mul(q)
        .and_then(|v| v.checked_mul(radius as u64))
        .ok_or_else(|| Error::Budget("boost exponent 2qr overflows".into()))?;
    if exponent > MAX_BOOST_EXPONENT {
        return Err(Error::Budget(format!(
            "boost exponent 2qr = {exponent} exceeds the cap {MAX_BOOST_EXPONENT}"
        )));
    }
    let a0_pow = a0.pow_i64(exponent as i64)?;
    let gamma_inv = gamma.inverse()?;
    let candidate = gamma.mul(&a0_pow).mul(&gamma_inv);
    let mut cert = certify_free_from_set(&candidate, set, None, prec)?;
    // C_{γ̃} = C_{a₀}^{2qr} by construction: the computed enclosure must
    // agree with the power of the reference enclosure.
    let c_pow = c_a0.powi(exponent as i64);
    if !cert.c_g.overlaps(&c_pow) {
        return Err(Error::Invalid(
            "contraction parameter of the boosted element disagrees with C(a0)^(2qr)".into(),
        ));
    }
    // D_{γ̃,F} = ψ(γ) by equivariance; both were computed independently.
    if let Some(d) = &cert.d {
        if !d.overlaps(psi_value) {
            return Err(Error::Invalid(
                "geometric parameter of the boosted element disagrees with psi(gamma)".into(),
            ));
        }
    }
    let candidate_len = length(&candidate, prec)?;
    let len_gamma = length(gamma, prec)?;
    let len_a0 = length(a0, prec)?;
    let len_budget = Interval::from_i64(2)
        .mul(&len_gamma)
        .add(&Interval::from_i64(exponent as i64).mul(&len_a0));
    if candidate_len.lo() > len_budget.hi() {
        return Err(Error::Invalid(
            "boosted element exceeds its guaranteed length budget".into(),
        ));
    }
    cert.boost_trace = Some(BoostTrace {
        a0: a0.clone(),
        q,
        exponent,
        radius,
        kappa_hat,
        log_c_a0: log_c,
        psi: psi_value.clone(),
        candidate_len,
        len_budget,
    });
    Ok((candidate, cert))
}

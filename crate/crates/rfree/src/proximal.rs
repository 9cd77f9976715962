//! Spectral analysis of unimodular rational matrices: validated eigenvalue
//! moduli, very-proximal verdicts with attracting and repelling loci, the
//! contraction parameter, and the scalar-deviation quantities.
//!
//! The verdict discipline is one-sided: `True` and `False` are only returned
//! on the strength of validated enclosures or exact algebra, and anything
//! the precision budget cannot resolve comes back `Undecided`. A false
//! `True` would poison every certificate built on top of it.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::QMatrix;
use crate::norms::op_norm;
use crate::poly::{char_poly_with_adjugate, eval_adjugate, min_poly, QPoly, RealRoot};
use crate::projective::{canonical_sign, dist_point_hyperplane, norm_sq};
use crate::scalar::Real;
use crate::Q;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Undecided,
}

/// Everything the spectral pass can say about one group element.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub dim: usize,
    /// Eigenvalue moduli, multiplicity respected, sorted descending.
    /// A conjugate pair contributes its modulus with count two.
    pub moduli: Vec<(Interval, usize)>,
    /// `|λ1| / |λ2|`; absent when the spectrum is unresolved or d < 2.
    pub top_gap: Option<Interval>,
    /// `|λ_{d-1}| / |λ_d|`.
    pub bottom_gap: Option<Interval>,
    pub very_proximal: Verdict,
    /// Human-readable grounds for a False or Undecided verdict.
    pub note: Option<String>,
    /// Contraction parameter, present exactly when very proximal.
    pub c_g: Option<Interval>,
    /// Top eigendirection of M.
    pub att: Option<Vec<Interval>>,
    /// Normal of the invariant hyperplane complementary to `att`.
    pub rep_normal: Option<Vec<Interval>>,
    /// Top eigendirection of M⁻¹ (bottom eigendirection of M).
    pub att_inv: Option<Vec<Interval>>,
    pub rep_inv_normal: Option<Vec<Interval>>,
    /// Max pairwise eigenvalue distance in the complex plane.
    pub theta: Option<Interval>,
    /// `sqrt((‖M‖ + θ) / θ²)`, when θ is provably positive.
    pub omega: Option<Interval>,
    pub diagonalizable: bool,
    /// Working precision of the final (accepted) round.
    pub prec: u32,
}

/// Attracting and repelling loci of a very proximal element.
#[derive(Clone, Debug)]
pub struct Loci {
    pub att: Vec<Interval>,
    pub att_inv: Vec<Interval>,
    pub rep_normal: Vec<Interval>,
    pub rep_inv_normal: Vec<Interval>,
    pub prec: u32,
}

#[derive(Clone)]
struct ComplexPairInfo {
    re: Interval,
    im: Interval,
    modulus_sq: Interval,
    modulus_sq_exact: Option<Q>,
}

#[derive(Clone)]
enum EntryKind {
    Real(RealRoot),
    Pair(ComplexPairInfo),
}

#[derive(Clone)]
struct ModEntry {
    modulus: Interval,
    /// Eigenvalues represented: multiplicity, doubled for a pair.
    count: usize,
    /// Square-free factor the roots came from.
    factor: usize,
    /// The factor is a cubic `x³ + c`, whose roots all share one modulus.
    all_on_one_circle_hint: bool,
    kind: EntryKind,
}

struct Spectrum {
    entries: Vec<ModEntry>,
    /// Square-free factors with an unresolved complex part make the moduli
    /// list incomplete; no verdict or theta can be derived then.
    complete: bool,
}

const MAX_ROUNDS: u32 = 4;

pub fn analyze_spectrum(m: &QMatrix, prec: u32) -> Result<SpectralData> {
    let d = m.dim();
    if d < 2 {
        return Err(Error::Invalid("spectral analysis needs dimension >= 2".into()));
    }
    m.ensure_unimodular()?;
    let (p, bs) = char_poly_with_adjugate(m);
    let diagonalizable = p.is_square_free() || min_poly(m).is_square_free();
    let mut last: Option<SpectralData> = None;
    for round in 0..MAX_ROUNDS {
        let cur = prec << round;
        let spectrum = compute_spectrum(&p, cur)?;
        let mut data = assemble(m, &p, &spectrum, diagonalizable, cur)?;
        if data.very_proximal == Verdict::True {
            match extract_loci(&bs, &spectrum, cur) {
                Some((att, rep_normal, att_inv, rep_inv_normal)) => {
                    let sep = dist_point_hyperplane(&att, &rep_normal);
                    if sep.sign_class() != Some(1) {
                        last = Some(data);
                        continue;
                    }
                    data.att = Some(att);
                    data.rep_normal = Some(rep_normal);
                    data.att_inv = Some(att_inv);
                    data.rep_inv_normal = Some(rep_inv_normal);
                    return Ok(data);
                }
                None => {
                    last = Some(data);
                    continue;
                }
            }
        }
        if data.very_proximal == Verdict::False {
            return Ok(data);
        }
        last = Some(data);
    }
    let mut data = last.expect("at least one analysis round ran");
    data.very_proximal = Verdict::Undecided;
    if data.note.is_none() {
        data.note = Some("precision budget exhausted before the critical gaps resolved".into());
    }
    Ok(data)
}

/// Attracting/repelling loci for a provably very proximal element.
pub fn att_rep_loci(m: &QMatrix, prec: u32) -> Result<Loci> {
    let data = analyze_spectrum(m, prec)?;
    match data.very_proximal {
        Verdict::True => Ok(Loci {
            att: data.att.unwrap(),
            att_inv: data.att_inv.unwrap(),
            rep_normal: data.rep_normal.unwrap(),
            rep_inv_normal: data.rep_inv_normal.unwrap(),
            prec: data.prec,
        }),
        Verdict::False => Err(Error::NotVeryProximal),
        Verdict::Undecided => Err(Error::Undecided(
            data.note.unwrap_or_else(|| "very-proximal verdict unresolved".into()),
        )),
    }
}

/// θ(h) and ω(h) for a diagonalizable non-scalar element.
pub fn scalar_deviation(m: &QMatrix, prec: u32) -> Result<(Interval, Interval)> {
    if m.is_scalar() {
        return Err(Error::ScalarMatrix);
    }
    let (p, _) = char_poly_with_adjugate(m);
    if !(p.is_square_free() || min_poly(m).is_square_free()) {
        return Err(Error::NotDiagonalizable);
    }
    for round in 0..MAX_ROUNDS {
        let cur = prec << round;
        let spectrum = compute_spectrum(&p, cur)?;
        if !spectrum.complete {
            continue;
        }
        let Some(theta) = theta_from_spectrum(&spectrum, cur) else {
            continue;
        };
        if theta.sign_class() != Some(1) {
            continue;
        }
        let norm = op_norm(m, cur)?;
        let omega = norm.add(&theta).div(&theta.square()).sqrt();
        return Ok((theta, omega));
    }
    Err(Error::Undecided(
        "theta enclosure did not separate from zero within the precision budget".into(),
    ))
}

fn assemble(
    m: &QMatrix,
    p: &QPoly,
    spectrum: &Spectrum,
    diagonalizable: bool,
    prec: u32,
) -> Result<SpectralData> {
    let d = m.dim();
    let mut moduli: Vec<(Interval, usize)> = spectrum
        .entries
        .iter()
        .map(|e| (e.modulus.clone(), e.count))
        .collect();
    moduli.sort_by(|a, b| b.0.lo().cmp(a.0.lo()));
    let theta = if spectrum.complete {
        theta_from_spectrum(spectrum, prec)
    } else {
        None
    };
    let omega = match &theta {
        Some(t) if t.sign_class() == Some(1) => {
            let norm = op_norm(m, prec)?;
            Some(norm.add(t).div(&t.square()).sqrt())
        }
        _ => None,
    };
    let mut data = SpectralData {
        dim: d,
        moduli,
        top_gap: None,
        bottom_gap: None,
        very_proximal: Verdict::Undecided,
        note: None,
        c_g: None,
        att: None,
        rep_normal: None,
        att_inv: None,
        rep_inv_normal: None,
        theta,
        omega,
        diagonalizable,
        prec,
    };
    if !spectrum.complete {
        data.note = Some("complex spectrum could not be validated".into());
        return Ok(data);
    }
    let entries = &spectrum.entries;
    if entries.len() == 1 {
        data.very_proximal = Verdict::False;
        data.note = Some("all eigenvalues share one modulus".into());
        return Ok(data);
    }
    // Gap enclosures: the second-largest modulus is enclosed by the max over
    // the non-top entries, which is valid regardless of how the middle of
    // the spectrum is ordered; the bottom end is symmetric.
    let top_idx = argmax_hi(entries);
    let bot_idx = argmin_lo(entries);
    let second = fold_moduli(entries, top_idx, true);
    let second_last = fold_moduli(entries, bot_idx, false);
    data.top_gap = Some(entries[top_idx].modulus.div(&second));
    data.bottom_gap = Some(second_last.div(&entries[bot_idx].modulus));

    match decide_end(p, entries, top_idx, true) {
        EndState::Resolved(false, why) => {
            data.very_proximal = Verdict::False;
            data.note = Some(why);
            return Ok(data);
        }
        EndState::Ambiguous => return Ok(data),
        EndState::Resolved(true, _) => {}
    }
    match decide_end(p, entries, bot_idx, false) {
        EndState::Resolved(false, why) => {
            data.very_proximal = Verdict::False;
            data.note = Some(why);
            return Ok(data);
        }
        EndState::Ambiguous => return Ok(data),
        EndState::Resolved(true, _) => {}
    }
    data.very_proximal = Verdict::True;
    let tg = data.top_gap.clone().unwrap();
    let bg = data.bottom_gap.clone().unwrap();
    data.c_g = Some(tg.max_enclosure(&bg));
    Ok(data)
}

fn argmax_hi(entries: &[ModEntry]) -> usize {
    let mut best = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.modulus.hi() > entries[best].modulus.hi() {
            best = i;
        }
    }
    best
}

fn argmin_lo(entries: &[ModEntry]) -> usize {
    let mut best = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.modulus.lo() < entries[best].modulus.lo() {
            best = i;
        }
    }
    best
}

/// Enclosure of the extreme modulus among all entries except `skip`:
/// the max for the top end, the min for the bottom end.
fn fold_moduli(entries: &[ModEntry], skip: usize, want_max: bool) -> Interval {
    let mut acc: Option<Interval> = None;
    for (i, e) in entries.iter().enumerate() {
        if i == skip {
            continue;
        }
        acc = Some(match acc {
            None => e.modulus.clone(),
            Some(a) => {
                if want_max {
                    a.max_enclosure(&e.modulus)
                } else {
                    a.min_enclosure(&e.modulus)
                }
            }
        });
    }
    acc.expect("at least two modulus entries")
}

enum EndState {
    /// `true`: the end is a separated simple real eigenvalue.
    /// `false`: provably not very proximal, with the reason.
    Resolved(bool, String),
    Ambiguous,
}

fn decide_end(p: &QPoly, entries: &[ModEntry], cand: usize, top: bool) -> EndState {
    let c = &entries[cand];
    let mut separated = true;
    for (i, e) in entries.iter().enumerate() {
        if i == cand {
            continue;
        }
        let apart = if top {
            c.modulus.lo() > e.modulus.hi()
        } else {
            c.modulus.hi() < e.modulus.lo()
        };
        if apart {
            continue;
        }
        separated = false;
        if proven_equal_moduli(p, c, e) {
            let end = if top { "largest" } else { "smallest" };
            return EndState::Resolved(
                false,
                format!("the {end} eigenvalue modulus is shared by two eigenvalues"),
            );
        }
    }
    if !separated {
        return EndState::Ambiguous;
    }
    if c.count != 1 {
        let end = if top { "largest" } else { "smallest" };
        let what = match c.kind {
            EntryKind::Real(_) => "a repeated real eigenvalue",
            EntryKind::Pair(_) => "a complex conjugate pair",
        };
        return EndState::Resolved(false, format!("the {end} modulus belongs to {what}"));
    }
    match &c.kind {
        EntryKind::Real(_) => EndState::Resolved(true, String::new()),
        EntryKind::Pair(_) => unreachable!("a pair always represents two eigenvalues"),
    }
}

/// Exact proofs that two modulus entries coincide. A `false` only means the
/// question stays open at this precision.
fn proven_equal_moduli(p: &QPoly, a: &ModEntry, b: &ModEntry) -> bool {
    match (&a.kind, &b.kind) {
        (EntryKind::Real(ra), EntryKind::Real(rb)) => {
            real_pair_tie(p, ra, rb) || real_pair_tie(p, rb, ra)
        }
        (EntryKind::Real(r), EntryKind::Pair(c)) | (EntryKind::Pair(c), EntryKind::Real(r)) => {
            let Some(s) = &c.modulus_sq_exact else {
                return same_all_equal_cubic(a, b);
            };
            real_root_squares_to(p, r, s)
        }
        (EntryKind::Pair(ca), EntryKind::Pair(cb)) => {
            match (&ca.modulus_sq_exact, &cb.modulus_sq_exact) {
                (Some(sa), Some(sb)) => sa == sb,
                _ => same_all_equal_cubic(a, b),
            }
        }
    }
}

/// Two distinct real roots have equal moduli only as a `±` pair. Proven when
/// the even-symmetric part of `p` has a root in `intersect(-[a], [b])`:
/// that root is then simultaneously `λ_b` and `-λ_a`.
fn real_pair_tie(p: &QPoly, a: &RealRoot, b: &RealRoot) -> bool {
    if let Some(qa) = &a.exact {
        let neg = -qa.clone();
        return p.eval(&neg).is_zero()
            && (b.exact.as_ref() == Some(&neg) || b.value.contains_rat(&neg));
    }
    if b.exact.is_some() {
        return false; // covered by the symmetric call
    }
    let q = p.even_symmetric_part();
    if q.degree().map_or(true, |d| d == 0) {
        return false;
    }
    let nlo = b.value.lo().clone().max(a.value.hi().neg());
    let nhi = b.value.hi().clone().min(a.value.lo().neg());
    if nlo >= nhi {
        return false;
    }
    let chain = q.sturm_chain();
    QPoly::count_roots(&chain, &nlo, &nhi) >= 1
}

/// Does the isolated real root square to the exact rational `s`? Proven via
/// a root of `gcd(p, x² - s)` inside the root's enclosure.
fn real_root_squares_to(p: &QPoly, r: &RealRoot, s: &Q) -> bool {
    if let Some(v) = &r.exact {
        return &(v * v) == s;
    }
    let g = QPoly::gcd(p, &QPoly::from_coeffs(vec![-s.clone(), Q::zero(), Q::from_integer(1.into())]));
    if g.degree().map_or(true, |d| d == 0) {
        return false;
    }
    let chain = g.sturm_chain();
    QPoly::count_roots(&chain, r.value.lo(), r.value.hi()) >= 1
}

/// A cubic `x³ + c` has all three roots on one circle. When both entries
/// come from such a factor their moduli agree exactly.
fn same_all_equal_cubic(a: &ModEntry, b: &ModEntry) -> bool {
    a.factor == b.factor && a.all_on_one_circle_hint && b.all_on_one_circle_hint
}

fn theta_from_spectrum(spectrum: &Spectrum, prec: u32) -> Option<Interval> {
    let mut values: Vec<(Interval, Interval)> = Vec::new();
    let zero = Interval::from_i64(0).with_prec(prec);
    for e in &spectrum.entries {
        match &e.kind {
            EntryKind::Real(r) => values.push((r.value.clone(), zero.clone())),
            EntryKind::Pair(c) => {
                values.push((c.re.clone(), c.im.clone()));
                values.push((c.re.clone(), c.im.neg()));
            }
        }
    }
    if values.len() < 2 {
        return Some(zero);
    }
    let mut theta: Option<Interval> = None;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let dre = values[i].0.sub(&values[j].0);
            let dim = values[i].1.sub(&values[j].1);
            let dist = dre.square().add(&dim.square()).sqrt();
            theta = Some(match theta {
                None => dist,
                Some(t) => t.max_enclosure(&dist),
            });
        }
    }
    theta
}

fn compute_spectrum(p: &QPoly, prec: u32) -> Result<Spectrum> {
    let factors = p.yun();
    let mut entries = Vec::new();
    let mut complete = true;
    for (fi, (f, mult)) in factors.iter().enumerate() {
        let deg = f.degree().expect("nonconstant factor");
        let roots = f.real_roots(prec)?;
        let nreal = roots.len();
        let all_one_circle = deg == 3 && f.coeff(1).is_zero() && f.coeff(2).is_zero();
        for r in &roots {
            entries.push(ModEntry {
                modulus: r.value.abs(),
                count: *mult,
                factor: fi,
                kind: EntryKind::Real(r.clone()),
                all_on_one_circle_hint: all_one_circle,
            });
        }
        let npairs = (deg - nreal) / 2;
        if npairs == 0 {
            continue;
        }
        let pairs = complex_pairs_of_factor(f, &roots, npairs, prec);
        match pairs {
            Some(pairs) => {
                for c in pairs {
                    entries.push(ModEntry {
                        modulus: c.modulus_sq.sqrt_clamped(),
                        count: 2 * mult,
                        factor: fi,
                        kind: EntryKind::Pair(c),
                        all_on_one_circle_hint: all_one_circle,
                    });
                }
            }
            None => complete = false,
        }
    }
    Ok(Spectrum { entries, complete })
}

/// Complex conjugate pairs of a square-free factor. Quadratic and cubic
/// cofactors are solved exactly from the coefficients; higher degrees fall
/// back to float seeds verified by an interval Newton step, or an honest
/// `None`.
fn complex_pairs_of_factor(
    f: &QPoly,
    real_roots: &[RealRoot],
    npairs: usize,
    prec: u32,
) -> Option<Vec<ComplexPairInfo>> {
    let deg = f.degree().unwrap();
    if deg == 2 && npairs == 1 {
        // Monic x² + bx + c: re = -b/2, |z|² = c.
        let b = f.coeff(1);
        let c = f.coeff(0);
        let re = Interval::from_rat(&(-b / Q::from_integer(2.into())), prec);
        let msq = Interval::from_rat(&c, prec);
        let im = msq.sub(&re.square()).sqrt_clamped();
        return Some(vec![ComplexPairInfo {
            re,
            im,
            modulus_sq: msq,
            modulus_sq_exact: Some(c),
        }]);
    }
    if deg == 3 && npairs == 1 {
        let rho = &real_roots[0];
        if f.coeff(0).is_zero() {
            // Zero root: the pair lives in the quadratic cofactor f / x.
            let quad = QPoly::from_coeffs(f.coeffs()[1..].to_vec());
            return complex_pairs_of_factor(&quad, &[], 1, prec);
        }
        // Root product: rho * |z|² = -f0; root sum: rho + 2 re = -f2.
        let f0 = f.coeff(0);
        let f2 = f.coeff(2);
        if let Some(rq) = &rho.exact {
            let msq_exact = -(&f0 / rq);
            let re_exact = (-&f2 - rq) / Q::from_integer(2.into());
            let msq = Interval::from_rat(&msq_exact, prec);
            let re = Interval::from_rat(&re_exact, prec);
            let im = msq.sub(&re.square()).sqrt_clamped();
            return Some(vec![ComplexPairInfo {
                re,
                im,
                modulus_sq: msq,
                modulus_sq_exact: Some(msq_exact),
            }]);
        }
        let msq = Interval::from_rat(&-f0, prec).checked_div(&rho.value)?;
        let re = Interval::from_rat(&-f2, prec)
            .sub(&rho.value)
            .div(&Interval::from_i64(2));
        let im = msq.sub(&re.square()).sqrt_clamped();
        return Some(vec![ComplexPairInfo {
            re,
            im,
            modulus_sq: msq,
            modulus_sq_exact: None,
        }]);
    }
    verified_pairs_by_newton(f, npairs, prec)
}

// ---------------------------------------------------------------------------
// Degree >= 4 complex pairs: float seeds, then rectangle interval Newton.

#[derive(Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> C64 {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn eval_c64(c: &[f64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for v in c.iter().rev() {
        acc = acc.mul(z).add(C64::new(*v, 0.0));
    }
    acc
}

/// Simultaneous-iteration root approximation for a monic float polynomial.
fn durand_kerner(c: &[f64]) -> Vec<C64> {
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max(f64::abs(*v)));
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.35;
            C64::new(radius * ang.cos() * 0.7, radius * ang.sin() * 0.7)
        })
        .collect();
    for _ in 0..600 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            let step = eval_c64(c, z[i]).div(den);
            z[i] = z[i].sub(step);
            moved = moved.max(step.abs());
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

#[derive(Clone)]
struct CBox {
    re: Interval,
    im: Interval,
}

impl CBox {
    fn point(z: C64, prec: u32) -> CBox {
        CBox {
            re: Interval::from_f64(z.re, prec),
            im: Interval::from_f64(z.im, prec),
        }
    }
    fn around(z: C64, delta: f64, prec: u32) -> CBox {
        CBox {
            re: Interval::from_f64(z.re - delta, prec).hull(&Interval::from_f64(z.re + delta, prec)),
            im: Interval::from_f64(z.im - delta, prec).hull(&Interval::from_f64(z.im + delta, prec)),
        }
    }
    fn mid(&self, prec: u32) -> CBox {
        let mre = self.re.lo().add(self.re.hi()).shl2(-1);
        let mim = self.im.lo().add(self.im.hi()).shl2(-1);
        CBox {
            re: Interval::new(mre.clone(), mre, prec),
            im: Interval::new(mim.clone(), mim, prec),
        }
    }
    fn sub(&self, o: &CBox) -> CBox {
        CBox {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
    fn mul(&self, o: &CBox) -> CBox {
        CBox {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn div(&self, o: &CBox) -> Option<CBox> {
        let d = o.re.square().add(&o.im.square());
        let num_re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let num_im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(CBox {
            re: num_re.checked_div(&d)?,
            im: num_im.checked_div(&d)?,
        })
    }
    fn strictly_inside(&self, o: &CBox) -> bool {
        self.re.lo() > o.re.lo()
            && self.re.hi() < o.re.hi()
            && self.im.lo() > o.im.lo()
            && self.im.hi() < o.im.hi()
    }
    fn intersect(&self, o: &CBox) -> Option<CBox> {
        Some(CBox {
            re: self.re.intersect(&o.re)?,
            im: self.im.intersect(&o.im)?,
        })
    }
}

fn eval_cbox(coeffs: &[Interval], z: &CBox, prec: u32) -> CBox {
    let zero = Interval::from_i64(0).with_prec(prec);
    let mut acc = CBox {
        re: zero.clone(),
        im: zero.clone(),
    };
    for c in coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re = acc.re.add(c);
    }
    acc
}

/// Verify one simple complex root inside a box via the interval Newton
/// operator `N(Z) = mid - f(mid) / f'(Z)`: `N(Z) ⊂ int(Z)` proves existence
/// and uniqueness in `Z`, after which `Z ∩ N(Z)` contracts quadratically.
fn newton_verify(fc: &[Interval], fdc: &[Interval], seed: C64, prec: u32) -> Option<CBox> {
    let mut delta = (seed.abs() * 1e-10).max(1e-10);
    for _ in 0..8 {
        let z = CBox::around(seed, delta, prec);
        let mid = CBox::point(seed, prec);
        let fm = eval_cbox(fc, &mid, prec);
        let fdz = eval_cbox(fdc, &z, prec);
        if let Some(step) = fm.div(&fdz) {
            let n = mid.sub(&step);
            if n.strictly_inside(&z) {
                let mut cur = n.intersect(&z)?;
                for _ in 0..64 {
                    let m = cur.mid(prec);
                    let fm = eval_cbox(fc, &m, prec);
                    let fdz = eval_cbox(fdc, &cur, prec);
                    let Some(step) = fm.div(&fdz) else { break };
                    let next = m.sub(&step);
                    let Some(tight) = next.intersect(&cur) else { break };
                    let stalled = tight.re.width() == cur.re.width()
                        && tight.im.width() == cur.im.width();
                    cur = tight;
                    if stalled {
                        break;
                    }
                }
                return Some(cur);
            }
        }
        delta *= 16.0;
    }
    None
}

fn verified_pairs_by_newton(f: &QPoly, npairs: usize, prec: u32) -> Option<Vec<ComplexPairInfo>> {
    let cf: Vec<f64> = f.coeffs().iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
    if cf.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let lead = *cf.last().unwrap();
    let monic: Vec<f64> = cf.iter().map(|v| v / lead).collect();
    let seeds: Vec<C64> = durand_kerner(&monic)
        .into_iter()
        .filter(|z| z.im > 1e-9)
        .collect();
    if seeds.len() != npairs {
        return None;
    }
    let fc: Vec<Interval> = f.coeffs().iter().map(|q| Interval::from_rat(q, prec)).collect();
    let fdc: Vec<Interval> = f
        .derivative()
        .coeffs()
        .iter()
        .map(|q| Interval::from_rat(q, prec))
        .collect();
    let mut boxes = Vec::with_capacity(npairs);
    for s in seeds {
        let b = newton_verify(&fc, &fdc, s, prec)?;
        if b.im.sign_class() != Some(1) {
            return None;
        }
        boxes.push(b);
    }
    // Distinctness: verified boxes must be pairwise disjoint.
    for i in 0..boxes.len() {
        for j in (i + 1)..boxes.len() {
            let re_apart = boxes[i].re.hi() < boxes[j].re.lo() || boxes[j].re.hi() < boxes[i].re.lo();
            let im_apart = boxes[i].im.hi() < boxes[j].im.lo() || boxes[j].im.hi() < boxes[i].im.lo();
            if !(re_apart || im_apart) {
                return None;
            }
        }
    }
    Some(
        boxes
            .into_iter()
            .map(|b| ComplexPairInfo {
                modulus_sq: b.re.square().add(&b.im.square()),
                re: b.re,
                im: b.im,
                modulus_sq_exact: None,
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Eigenvector extraction.

/// Top and bottom eigendirections from the adjugate `adj(λI - M)` evaluated
/// at the corresponding simple real eigenvalue: the matrix has rank one
/// there, its columns spanning the right eigendirection and its rows the
/// left one (the normal of the invariant complementary hyperplane).
fn extract_loci(
    bs: &[QMatrix],
    spectrum: &Spectrum,
    prec: u32,
) -> Option<(Vec<Interval>, Vec<Interval>, Vec<Interval>, Vec<Interval>)> {
    let top = spectrum
        .entries
        .iter()
        .max_by(|a, b| a.modulus.lo().cmp(b.modulus.lo()))?;
    let bot = spectrum
        .entries
        .iter()
        .min_by(|a, b| a.modulus.hi().cmp(b.modulus.hi()))?;
    let EntryKind::Real(top_root) = &top.kind else {
        return None;
    };
    let EntryKind::Real(bot_root) = &bot.kind else {
        return None;
    };
    let (att, rep_normal) = rank_one_directions(bs, &top_root.value, prec)?;
    let (att_inv, rep_inv_normal) = rank_one_directions(bs, &bot_root.value, prec)?;
    Some((att, rep_normal, att_inv, rep_inv_normal))
}

fn rank_one_directions(
    bs: &[QMatrix],
    lam: &Interval,
    prec: u32,
) -> Option<(Vec<Interval>, Vec<Interval>)> {
    let adj = eval_adjugate(bs, lam, prec);
    let d = adj.dim();
    let mut best_col: Option<(f64, Vec<Interval>)> = None;
    let mut best_row: Option<(f64, Vec<Interval>)> = None;
    for i in 0..d {
        let col = adj.col(i);
        let n = norm_sq(&col);
        if n.sign_class() == Some(1) {
            let score = n.lo_f64();
            if best_col.as_ref().map_or(true, |(s, _)| score > *s) {
                best_col = Some((score, col));
            }
        }
        let row = adj.row(i);
        let n = norm_sq(&row);
        if n.sign_class() == Some(1) {
            let score = n.lo_f64();
            if best_row.as_ref().map_or(true, |(s, _)| score > *s) {
                best_row = Some((score, row));
            }
        }
    }
    let (_, mut col) = best_col?;
    let (_, mut row) = best_row?;
    canonical_sign(&mut col);
    canonical_sign(&mut row);
    Some((col, row))
}

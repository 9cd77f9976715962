//! Exact univariate polynomials over the rationals, with the root machinery
//! the spectral layer is built on: Sturm isolation, Yun square-free
//! factorization, directed bracket refinement, and characteristic/minimal
//! polynomials of rational matrices.
//!
//! All root output is validated: a real root is reported either exactly (a
//! rational) or as a dyadic interval that provably contains exactly one root
//! of the square-free factor it came from.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::{Matrix, QMatrix};
use crate::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense rational polynomial; `c[i]` is the coefficient of `x^i`.
/// Trailing zeros are trimmed, so the zero polynomial has an empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    c: Vec<Q>,
}

impl QPoly {
    pub fn from_coeffs(mut c: Vec<Q>) -> QPoly {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect())
    }

    pub fn zero() -> QPoly {
        QPoly { c: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn leading(&self) -> &Q {
        self.c.last().expect("leading coefficient of zero polynomial")
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the value at a dyadic point, computed exactly.
    pub fn sign_at(&self, t: &Dyadic) -> i8 {
        let v = self.eval(&t.to_rat());
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Validated Horner evaluation.
    pub fn eval_interval(&self, x: &Interval, prec: u32) -> Interval {
        let mut acc = Interval::from_i64(0).with_prec(prec);
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(&Interval::from_rat(c, prec));
        }
        acc
    }

    pub fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        QPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            c: self.c.iter().map(|v| -v).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> QPoly {
        if k.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            c: self.c.iter().map(|v| v * k).collect(),
        }
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    /// Substitute `-x` for `x`.
    pub fn compose_neg(&self) -> QPoly {
        QPoly {
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(i, v)| if i % 2 == 1 { -v } else { v.clone() })
                .collect(),
        }
    }

    pub fn derivative(&self) -> QPoly {
        if self.c.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, v)| v * Q::from_integer(BigInt::from(i as i64 + 1)))
                .collect(),
        )
    }

    /// Exact Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        let lead = div.leading().clone();
        let mut rem = self.c.clone();
        if rem.len() < div.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let qdeg = rem.len() - div.c.len();
        let mut quot = vec![Q::zero(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let f = top / &lead;
            for (j, dc) in div.c.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &f * dc;
            }
            quot[k] = f;
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let inv = Q::one() / self.leading();
        self.scale(&inv)
    }

    /// Rescale by a positive rational so all coefficients are coprime
    /// integers. Positivity keeps every pointwise sign unchanged, which is
    /// what the Sturm chain needs.
    pub fn primitive(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut den_lcm = BigInt::one();
        for v in &self.c {
            den_lcm = den_lcm.lcm(v.denom());
        }
        let ints: Vec<BigInt> = self
            .c
            .iter()
            .map(|v| v.numer() * (&den_lcm / v.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        QPoly {
            c: ints.iter().map(|v| Q::from_integer(v / &g)).collect(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, q) = monic(q)`.
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.divrem(&y);
            x = y;
            y = r.primitive();
        }
        x.monic()
    }

    pub fn is_square_free(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            _ => QPoly::gcd(self, &self.derivative()).degree() == Some(0),
        }
    }

    pub fn square_free_part(&self) -> QPoly {
        let g = QPoly::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        self.divrem(&g).0.monic()
    }

    /// Yun square-free factorization: monic pairwise-coprime square-free
    /// factors with their multiplicities, so `self = lc * prod f_i^{m_i}`.
    pub fn yun(&self) -> Vec<(QPoly, usize)> {
        let p = self.monic();
        let deg = p.degree().expect("factorization of zero polynomial");
        if deg == 0 {
            return vec![];
        }
        let dp = p.derivative();
        let g = QPoly::gcd(&p, &dp);
        if g.degree() == Some(0) {
            return vec![(p, 1)];
        }
        let mut out = Vec::new();
        let mut w = p.divrem(&g).0;
        let y = dp.divrem(&g).0;
        let mut z = y.sub(&w.derivative());
        let mut i = 1usize;
        while w.degree().map_or(false, |d| d > 0) {
            let a = QPoly::gcd(&w, &z);
            if a.degree().map_or(false, |d| d > 0) {
                out.push((a.monic(), i));
            }
            w = w.divrem(&a).0;
            let yz = z.divrem(&a).0;
            z = yz.sub(&w.derivative());
            i += 1;
        }
        out
    }

    /// A power of two strictly exceeding every real root modulus
    /// (from the classical coefficient-ratio root bound).
    pub fn root_bound_pow2(&self) -> Dyadic {
        let n = self.degree().expect("root bound of zero polynomial");
        let lead = self.leading();
        let mut bound = Q::one();
        for v in &self.c[..n] {
            let r = Q::one() + (v / lead).abs();
            if r > bound {
                bound = r;
            }
        }
        let mut b = Dyadic::one();
        while b.to_rat() <= bound {
            b = b.shl2(1);
        }
        b
    }

    /// Sturm chain of a square-free polynomial, every entry scaled to
    /// primitive integer coefficients by positive factors.
    pub fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = vec![self.primitive()];
        let d = self.derivative();
        if d.is_zero() {
            return chain;
        }
        chain.push(d.primitive());
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().primitive());
        }
        chain
    }

    fn variations(chain: &[QPoly], t: &Dyadic) -> usize {
        let mut count = 0usize;
        let mut last: i8 = 0;
        for p in chain {
            let s = p.sign_at(t);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`; requires `p(a) != 0` and
    /// `p(b) != 0`, so this equals the count in the open interval.
    pub fn count_roots(chain: &[QPoly], a: &Dyadic, b: &Dyadic) -> usize {
        let va = QPoly::variations(chain, a);
        let vb = QPoly::variations(chain, b);
        va.saturating_sub(vb)
    }

    /// Isolating brackets for every real root of a square-free polynomial of
    /// degree >= 1: disjoint dyadic intervals `(lo, hi)` with nonvanishing
    /// endpoints and exactly one root each, sorted in increasing order.
    pub fn isolate_real_roots(&self) -> Result<Vec<(Dyadic, Dyadic)>> {
        let deg = self
            .degree()
            .ok_or_else(|| Error::Invalid("isolation of zero polynomial".into()))?;
        if deg == 0 {
            return Ok(vec![]);
        }
        let p = self.primitive();
        let chain = p.sturm_chain();
        let b = p.root_bound_pow2();
        let a = b.neg();
        let total = QPoly::count_roots(&chain, &a, &b);
        let mut out = Vec::new();
        let mut stack = vec![(a, b, total)];
        while let Some((lo, hi, count)) = stack.pop() {
            if count == 0 {
                continue;
            }
            if count == 1 {
                out.push((lo, hi));
                continue;
            }
            let m = p.split_point(&lo, &hi, deg)?;
            let cl = QPoly::count_roots(&chain, &lo, &m);
            let cr = count - cl;
            stack.push((lo, m.clone(), cl));
            stack.push((m, hi, cr));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(out)
    }

    /// An interior dyadic point of `(lo, hi)` where the polynomial does not
    /// vanish. Candidates walk the dyadic fractions `1/2, 1/4, 3/4, 1/8, ...`
    /// of the bracket; a degree-`deg` polynomial cannot vanish at more than
    /// `deg` of them.
    fn split_point(&self, lo: &Dyadic, hi: &Dyadic, deg: usize) -> Result<Dyadic> {
        let width = hi.sub(lo);
        let mut tried = 0usize;
        let mut level = 1u32;
        loop {
            let mut odd = 1i64;
            while (odd as u64) < (1u64 << level) {
                let frac = Dyadic::from_i64(odd).shl2(-(level as i64));
                let m = lo.add(&width.mul(&frac));
                if self.sign_at(&m) != 0 {
                    return Ok(m);
                }
                tried += 1;
                if tried > deg + 1 {
                    return Err(Error::Invalid("no nonvanishing split point found".into()));
                }
                odd += 2;
            }
            level += 1;
        }
    }

    /// Shrink an isolating bracket by exact-sign bisection until the
    /// enclosure has relative width at most `2^-(prec-20)`, or the root is
    /// hit exactly. The returned interval always contains the root.
    pub fn refine_bracket(&self, lo: &Dyadic, hi: &Dyadic, prec: u32) -> Interval {
        let p = self.primitive();
        let mut lo = lo.clone();
        let mut hi = hi.clone();
        let sl = p.sign_at(&lo);
        let sh = p.sign_at(&hi);
        assert!(sl != 0 && sh != 0 && sl != sh, "invalid isolating bracket");
        // A root exactly at zero defeats the relative-width gate below
        // (the bracket can never exclude zero), so test for it up front.
        if lo.signum() < 0 && hi.signum() > 0 && p.coeff(0).is_zero() {
            return Interval::new(Dyadic::zero(), Dyadic::zero(), prec);
        }
        let shift = -((prec.max(24) - 20) as i64);
        for _ in 0..20_000 {
            if lo.signum() == hi.signum() {
                let width = hi.sub(&lo);
                let maxabs = lo.abs().max(hi.abs());
                if width <= maxabs.shl2(shift) {
                    return Interval::new(lo, hi, prec);
                }
            }
            let m = lo.add(&hi).shl2(-1);
            let sm = p.sign_at(&m);
            if sm == 0 {
                return Interval::new(m.clone(), m, prec);
            }
            if sm == sl {
                lo = m;
            } else {
                hi = m;
            }
        }
        panic!("bracket refinement stalled");
    }

    /// All real roots of a square-free polynomial, as validated enclosures,
    /// sorted in increasing order. Rational roots of linear factors come out
    /// exact.
    pub fn real_roots(&self, prec: u32) -> Result<Vec<RealRoot>> {
        let deg = self
            .degree()
            .ok_or_else(|| Error::Invalid("roots of zero polynomial".into()))?;
        if deg == 0 {
            return Ok(vec![]);
        }
        if deg == 1 {
            let root = -(self.coeff(0) / self.coeff(1));
            return Ok(vec![RealRoot {
                value: Interval::from_rat(&root, prec),
                exact: Some(root),
            }]);
        }
        let mut out = Vec::new();
        for (lo, hi) in self.isolate_real_roots()? {
            let value = self.refine_bracket(&lo, &hi, prec);
            let exact = if value.lo() == value.hi() {
                Some(value.lo().to_rat())
            } else {
                None
            };
            out.push(RealRoot { value, exact });
        }
        Ok(out)
    }

    /// Real roots of an arbitrary nonzero polynomial with multiplicities,
    /// via the square-free factorization. Sorted in increasing order.
    pub fn real_roots_with_multiplicity(&self, prec: u32) -> Result<Vec<(RealRoot, usize)>> {
        let mut out: Vec<(RealRoot, usize)> = Vec::new();
        for (factor, mult) in self.yun() {
            for root in factor.real_roots(prec)? {
                out.push((root, mult));
            }
        }
        out.sort_by(|a, b| a.0.value.lo().cmp(b.0.value.lo()));
        Ok(out)
    }

    /// Monic common factor of `p(x)` and `p(-x)`; a positive degree means
    /// the roots contain a `±` pair (or zero).
    pub fn even_symmetric_part(&self) -> QPoly {
        QPoly::gcd(self, &self.compose_neg())
    }
}

/// A real algebraic number reported by the root finder: a validated
/// enclosure, plus the exact rational value when one is known.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub value: Interval,
    pub exact: Option<Q>,
}

/// Characteristic polynomial `det(xI - M)` together with the matrix
/// coefficients `B_k` of the adjugate `adj(xI - M) = sum_k B_k x^{d-1-k}`,
/// by the Faddeev-LeVerrier recurrence. Columns of the adjugate evaluated at
/// an eigenvalue are the eigenvectors, which is how the spectral layer
/// extracts them without floating-point eigensolvers.
pub fn char_poly_with_adjugate(m: &QMatrix) -> (QPoly, Vec<QMatrix>) {
    let d = m.dim();
    let mut coeffs = vec![Q::zero(); d + 1];
    coeffs[d] = Q::one();
    let mut bs: Vec<QMatrix> = vec![Matrix::identity(d)];
    let mut bk: QMatrix = Matrix::identity(d);
    for k in 1..=d {
        let ak = m.mul(&bk);
        let c = -(ak.trace() / Q::from_integer(BigInt::from(k as i64)));
        coeffs[d - k] = c.clone();
        let mut data: Vec<Q> = ak.entries().to_vec();
        for i in 0..d {
            data[i * d + i] = &data[i * d + i] + &c;
        }
        bk = Matrix::from_vec(d, data);
        if k < d {
            bs.push(bk.clone());
        }
    }
    debug_assert!(
        bk == Matrix::from_vec(d, vec![Q::zero(); d * d]),
        "adjugate recurrence must close"
    );
    (QPoly::from_coeffs(coeffs), bs)
}

/// Evaluate a matrix polynomial `sum_k B_k x^{d-1-k}` at a validated point.
pub fn eval_adjugate(bs: &[QMatrix], x: &Interval, prec: u32) -> Matrix<Interval> {
    let d = bs[0].dim();
    let mut acc = Matrix::from_vec(d, vec![Interval::from_i64(0).with_prec(prec); d * d]);
    for b in bs {
        let bi = b.to_interval(prec);
        let mut next = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                next.push(acc.get(i, j).mul(x).add(bi.get(i, j)));
            }
        }
        acc = Matrix::from_vec(d, next);
    }
    acc
}

/// Minimal polynomial via exact Krylov elimination on vectorized powers.
pub fn min_poly(m: &QMatrix) -> QPoly {
    let d = m.dim();
    let n = d * d;
    let mut powers: Vec<Vec<Q>> = Vec::new();
    let mut cur: QMatrix = Matrix::identity(d);
    loop {
        let v: Vec<Q> = cur.entries().to_vec();
        if let Some(dep) = express_in_span(&powers, &v, n) {
            let mut coeffs = dep;
            coeffs.push(Q::one());
            return QPoly::from_coeffs(coeffs);
        }
        powers.push(v);
        cur = cur.mul(m);
    }
}

/// If `target` lies in the span of `cols`, return coefficients `x` with
/// `target = sum x_i cols_i`, negated (so they drop into a monic dependency).
fn express_in_span(cols: &[Vec<Q>], target: &[Q], n: usize) -> Option<Vec<Q>> {
    let k = cols.len();
    if k == 0 {
        return if target.iter().all(|v| v.is_zero()) {
            Some(vec![])
        } else {
            None
        };
    }
    // Augmented n x (k+1) system, exact Gaussian elimination.
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r0 = 0usize;
    for c in 0..k {
        let Some(pr) = (r0..n).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(r0, pr);
        let piv = a[r0][c].clone();
        for j in c..=k {
            a[r0][j] = &a[r0][j] / &piv;
        }
        for r in 0..n {
            if r == r0 || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in c..=k {
                let s = &f * &a[r0][j];
                a[r][j] = &a[r][j] - s;
            }
        }
        pivot_rows.push((r0, c));
        r0 += 1;
    }
    // Inconsistent if any zero-row has nonzero rhs.
    for r in r0..n {
        if !a[r][k].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); k];
    for &(r, c) in &pivot_rows {
        x[c] = a[r][k].clone();
    }
    Some(x.into_iter().map(|v| -v).collect())
}

/// True when the matrix is diagonalizable over the complex numbers
/// (square-free minimal polynomial).
pub fn is_diagonalizable(m: &QMatrix) -> bool {
    min_poly(m).is_square_free()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qmat;

    #[test]
    fn eval_derivative_divrem() {
        let p = QPoly::from_i64(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        assert_eq!(p.eval(&Q::from_integer(BigInt::from(2))), Q::zero());
        assert_eq!(p.eval(&Q::from_integer(BigInt::from(4))), Q::from_integer(BigInt::from(6)));
        assert_eq!(p.derivative(), QPoly::from_i64(&[11, -12, 3]));
        let d = QPoly::from_i64(&[-1, 1]);
        let (q, r) = p.divrem(&d);
        assert!(r.is_zero());
        assert_eq!(q, QPoly::from_i64(&[6, -5, 1]));
        assert_eq!(q.mul(&d), p);
    }

    #[test]
    fn gcd_and_square_free() {
        let a = QPoly::from_i64(&[-2, 1]).mul(&QPoly::from_i64(&[1, 1]));
        let b = QPoly::from_i64(&[-2, 1]).mul(&QPoly::from_i64(&[3, 1]));
        assert_eq!(QPoly::gcd(&a, &b), QPoly::from_i64(&[-2, 1]));
        let sq = QPoly::from_i64(&[-1, 1]).mul(&QPoly::from_i64(&[-1, 1]));
        assert!(!sq.is_square_free());
        assert_eq!(sq.square_free_part(), QPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let f1 = QPoly::from_i64(&[-1, 1]); // x - 1
        let f2 = QPoly::from_i64(&[2, 1]); // x + 2
        let p = f1.mul(&f1).mul(&f2).mul(&f2).mul(&f2);
        let factors = p.yun();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0], (f1.clone(), 2));
        assert_eq!(factors[1], (f2.clone(), 3));
        let mut prod = QPoly::from_i64(&[1]);
        for (f, m) in &factors {
            for _ in 0..*m {
                prod = prod.mul(f);
            }
        }
        assert_eq!(prod, p.monic());
    }

    #[test]
    fn sturm_counts_roots() {
        let p = QPoly::from_i64(&[-6, 11, -6, 1]); // roots 1, 2, 3
        let chain = p.sturm_chain();
        let zero = Dyadic::zero();
        let b = Dyadic::from_i64(4);
        assert_eq!(QPoly::count_roots(&chain, &zero, &b), 3);
        let half = Dyadic::from_i64(5).shl2(-1); // 5/2
        assert_eq!(QPoly::count_roots(&chain, &zero, &half), 2);
    }

    #[test]
    fn isolates_and_refines_sqrt2() {
        let p = QPoly::from_i64(&[-2, 0, 1]);
        let roots = p.real_roots(128).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].value.definitely_lt(&roots[1].value));
        for r in &roots {
            assert!(r.exact.is_none());
            let sq = r.value.square();
            assert!(sq.contains_rat(&Q::from_integer(BigInt::from(2))));
            assert!(r.value.rel_width_f64() <= 2f64.powi(-(128 - 20)));
        }
    }

    #[test]
    fn midpoint_root_is_sidestepped() {
        // Roots at -1, 0, 1; zero sits exactly at the first midpoint.
        let p = QPoly::from_i64(&[0, -1, 0, 1]);
        let roots = p.real_roots(96).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[1].value.contains_rat(&Q::zero()));
        assert!(roots[0].value.contains_rat(&-Q::one()) || roots[0].exact == Some(-Q::one()));
    }

    #[test]
    fn multiplicities_of_unipotent_char_poly() {
        let p = QPoly::from_i64(&[1, -2, 1]); // (x-1)^2
        let roots = p.real_roots_with_multiplicity(64).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].1, 2);
        assert_eq!(roots[0].0.exact, Some(Q::one()));
    }

    #[test]
    fn char_poly_and_adjugate_of_sanov_product() {
        let m = qmat(2, &[5, 2, 2, 1]);
        let (p, bs) = char_poly_with_adjugate(&m);
        assert_eq!(p, QPoly::from_i64(&[1, -6, 1]));
        assert_eq!(bs.len(), 2);
        // (xI - M) * adj(xI - M) = p(x) I at a rational sample point.
        let x = Q::from_integer(BigInt::from(7));
        let xi_m = qmat(2, &[7 - 5, -2, -2, 7 - 1]);
        let adj = bs[0].map(|v| v * &x).add_entrywise(&bs[1]);
        let prod = xi_m.mul(&adj);
        let pv = p.eval(&x);
        assert_eq!(*prod.get(0, 0), pv);
        assert_eq!(*prod.get(0, 1), Q::zero());
        assert_eq!(*prod.get(1, 1), pv);
        // Roots are 3 ± 2√2; their product must straddle 1.
        let roots = p.real_roots(128).unwrap();
        assert_eq!(roots.len(), 2);
        let prod = roots[0].value.mul(&roots[1].value);
        assert!(prod.contains_rat(&Q::one()));
    }

    #[test]
    fn min_poly_and_diagonalizability() {
        let id = QMatrix::identity(2);
        assert_eq!(min_poly(&id), QPoly::from_i64(&[-1, 1]));
        assert!(is_diagonalizable(&id));
        let shear = qmat(2, &[1, 1, 0, 1]);
        assert_eq!(min_poly(&shear), QPoly::from_i64(&[1, -2, 1]));
        assert!(!is_diagonalizable(&shear));
        let hyp = qmat(2, &[5, 2, 2, 1]);
        assert!(is_diagonalizable(&hyp));
    }

    #[test]
    fn even_symmetric_part_flags_plus_minus_pairs() {
        let pm = QPoly::from_i64(&[-4, 0, 1]); // roots ±2
        assert_eq!(pm.even_symmetric_part().degree(), Some(2));
        let plain = QPoly::from_i64(&[-6, 11, -6, 1]);
        assert_eq!(plain.even_symmetric_part().degree(), Some(0));
    }

    #[test]
    fn interval_evaluation_brackets_value() {
        let p = QPoly::from_i64(&[-2, 0, 1]);
        let x = Interval::from_i64(3);
        let v = p.eval_interval(&x, 128);
        assert!(v.contains_rat(&Q::from_integer(BigInt::from(7))));
    }
}

//! Validated matrix norms: the spectral operator norm, the symmetric-space
//! displacement length built from singular values, and the Lipschitz bounds
//! for the induced action on projective space.

use crate::error::Result;
use crate::interval::Interval;
use crate::matrix::QMatrix;
use crate::poly::char_poly_with_adjugate;
use crate::Q;

/// The exact Gram matrix `MᵀM`.
pub fn gram(m: &QMatrix) -> QMatrix {
    m.transpose().mul(m)
}

/// Eigenvalues of the Gram matrix with multiplicities, sorted increasing.
/// They are real and, for invertible input, strictly positive.
fn gram_eigenvalues(m: &QMatrix, prec: u32) -> Result<Vec<(Interval, usize)>> {
    let (p, _) = char_poly_with_adjugate(&gram(m));
    let roots = p.real_roots_with_multiplicity(prec)?;
    Ok(roots.into_iter().map(|(r, k)| (r.value, k)).collect())
}

/// Spectral operator norm `sqrt(λ_max(MᵀM))`, as a validated enclosure.
pub fn op_norm(m: &QMatrix, prec: u32) -> Result<Interval> {
    let eigs = gram_eigenvalues(m, prec)?;
    let top = eigs.last().expect("gram matrix has eigenvalues");
    Ok(top.0.sqrt())
}

/// Displacement length `sqrt(sum_i ln^2 σ_i)` over the singular values σ_i,
/// computed as `(1/2) sqrt(sum_i mult_i · ln^2 λ_i)` on the Gram spectrum.
/// Zero exactly for orthogonal matrices, and invariant under inversion.
pub fn length(m: &QMatrix, prec: u32) -> Result<Interval> {
    let eigs = gram_eigenvalues(m, prec)?;
    let mut acc = Interval::from_i64(0).with_prec(prec);
    for (lam, mult) in &eigs {
        let l = lam.ln();
        let sq = l.square();
        let mut term = sq.clone();
        for _ in 1..*mult {
            term = term.add(&sq);
        }
        acc = acc.add(&term);
    }
    let half = Interval::from_rat(&Q::new(1.into(), 2.into()), prec);
    Ok(acc.sqrt().mul(&half))
}

/// Validated bound on the Lipschitz constant of the projective action:
/// `(‖M‖ ‖M⁻¹‖)^2`.
pub fn lip_bound(m: &QMatrix, prec: u32) -> Result<Interval> {
    let inv = m.inverse()?;
    let n = op_norm(m, prec)?;
    let ni = op_norm(&inv, prec)?;
    Ok(n.mul(&ni).square())
}

/// The coarse Lipschitz bound `e^{4 |g|}` from a displacement length.
pub fn lip_bound_from_length(len: &Interval) -> Interval {
    len.mul(&Interval::from_i64(4)).exp()
}

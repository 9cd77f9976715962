//! Projective geometry primitives, written once over the [`Real`] scalar
//! trait. The float instantiation drives Monte Carlo sampling and the
//! randomized search; the interval instantiation produces the validated
//! distances that go into certificates.
//!
//! The metric on projective space is the sine of the angle between lines:
//! `d([u],[v]) = ‖u∧v‖ / (‖u‖‖v‖)`, with values in `[0,1]`. The distance
//! from a point to a hyperplane `ker⟨·,n⟩` is `|⟨v,n⟩| / (‖v‖‖n‖)`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use rand::Rng;
use rand_distr::StandardNormal;

/// A projective point paired with a hyperplane through it.
#[derive(Clone, Debug)]
pub struct Flag<R> {
    pub point: Vec<R>,
    pub normal: Vec<R>,
}

pub fn dot<R: Real>(u: &[R], v: &[R]) -> R {
    assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v.iter())
        .fold(R::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

pub fn norm_sq<R: Real>(v: &[R]) -> R {
    v.iter().fold(R::zero(), |acc, a| acc + a.square())
}

/// `‖u∧v‖²` as an explicit sum of squares, so the interval instantiation
/// gets a nonnegative lower bound for free.
pub fn wedge_norm_sq<R: Real>(u: &[R], v: &[R]) -> R {
    assert_eq!(u.len(), v.len());
    let n = u.len();
    let mut acc = R::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
            acc = acc + m.square();
        }
    }
    acc
}

/// Sine-of-angle distance between projective points.
pub fn dist_points<R: Real>(u: &[R], v: &[R]) -> R {
    let w = wedge_norm_sq(u, v);
    let denom = norm_sq(u) * norm_sq(v);
    (w / denom).sqrt_clamped()
}

/// Distance from a projective point to the hyperplane with normal `n`.
pub fn dist_point_hyperplane<R: Real>(v: &[R], n: &[R]) -> R {
    let num = dot(v, n).square();
    let denom = norm_sq(v) * norm_sq(n);
    (num / denom).sqrt_clamped()
}

/// Distance from a projective point to the codimension-two subspace cut out
/// by two hyperplane normals, via the Gram inverse of the normal pair:
/// `‖P v‖² = (a₁²g₂₂ - 2a₁a₂g₁₂ + a₂²g₁₁) / det G` with `aᵢ = ⟨v,nᵢ⟩`.
/// Errors when the normals fail to be provably independent.
pub fn dist_point_codim2<R: Real>(v: &[R], n1: &[R], n2: &[R]) -> Result<R> {
    let g11 = norm_sq(n1);
    let g22 = norm_sq(n2);
    let g12 = dot(n1, n2);
    // det G = ‖n1∧n2‖², computed as a sum of squares to keep it provably
    // nonnegative; it must be provably positive for the formula to apply.
    let det = wedge_norm_sq(n1, n2);
    if det.sign_class() != Some(1) {
        return Err(Error::IllConditioned(
            "hyperplane normals are not provably independent".into(),
        ));
    }
    let a1 = dot(v, n1);
    let a2 = dot(v, n2);
    let two = R::from_i64(2);
    let num = a1.square() * g22 + a2.square() * g11 - two * a1 * a2 * g12;
    let ratio = num / (det * norm_sq(v));
    Ok(ratio.sqrt_clamped())
}

/// Image of a point under a matrix.
pub fn apply_point<R: Real>(m: &Matrix<R>, v: &[R]) -> Vec<R> {
    m.apply_vec(v)
}

/// Image of a hyperplane under the map with the given inverse: normals
/// transform by the inverse transpose.
pub fn apply_hyperplane_by_inverse<R: Real>(m_inv: &Matrix<R>, n: &[R]) -> Vec<R> {
    m_inv.transpose().apply_vec(n)
}

/// Flip signs so the first coordinate of definite sign is positive; purely
/// cosmetic normalization for reporting.
pub fn canonical_sign<R: Real>(v: &mut [R]) {
    for x in v.iter() {
        match x.sign_class() {
            Some(1) => return,
            Some(-1) => {
                for y in v.iter_mut() {
                    *y = -y.clone();
                }
                return;
            }
            _ => continue,
        }
    }
}

/// Standard Gaussian vector normalized to the unit sphere.
pub fn sample_unit_vector(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm_sq(&v).sqrt();
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Haar-random orthonormal frame by Gram-Schmidt on Gaussian columns.
pub fn sample_frame(rng: &mut impl Rng, d: usize) -> Vec<Vec<f64>> {
    'outer: loop {
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
        for _ in 0..d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            for u in &frame {
                let c = dot(&v, u);
                for (vi, ui) in v.iter_mut().zip(u.iter()) {
                    *vi -= c * ui;
                }
            }
            let n = norm_sq(&v).sqrt();
            if n < 1e-9 {
                continue 'outer;
            }
            frame.push(v.iter().map(|x| x / n).collect());
        }
        return frame;
    }
}

/// Uniform flag: a random point together with a uniform hyperplane through
/// it, read off a Haar-random frame.
pub fn sample_flag(rng: &mut impl Rng, d: usize) -> Flag<f64> {
    let frame = sample_frame(rng, d);
    Flag {
        point: frame[0].clone(),
        normal: frame[d - 1].clone(),
    }
}

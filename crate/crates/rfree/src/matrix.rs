//! Square matrices over a generic entry type, with the exact rational layer
//! used for all group arithmetic.
//!
//! Group elements are `Matrix<BigRational>` with determinant one, enforced at
//! every input boundary (spec files, element files, exactification). Exact
//! entries make equality, hashing and centrality tests canonical: a reduced
//! `BigRational` has a unique representation, so two elements collide exactly
//! when they are equal in the group.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::Q;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Q>;

impl<T> Matrix<T> {
    pub fn from_vec(dim: usize, data: Vec<T>) -> Matrix<T> {
        assert_eq!(data.len(), dim * dim);
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Matrix<T> {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                data.push(self.data[i * d + j].clone());
            }
        }
        Matrix { dim: d, data }
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.dim..(i + 1) * self.dim].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self.data[i * self.dim + j].clone()).collect()
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = T::zero();
                for k in 0..d {
                    acc = acc + self.data[i * d + k].clone() * rhs.data[k * d + j].clone();
                }
                data.push(acc);
            }
        }
        Matrix { dim: d, data }
    }

    pub fn add_entrywise(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    /// Matrix times column vector.
    pub fn apply_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        (0..d)
            .map(|i| {
                let mut acc = T::zero();
                for k in 0..d {
                    acc = acc + self.data[i * d + k].clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One,
{
    pub fn identity(dim: usize) -> Matrix<T> {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        Matrix { dim, data }
    }
}

impl<T> Matrix<T>
where
    T: Clone
        + Zero
        + One
        + PartialEq
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>,
{
    /// Exact determinant by fraction-producing Gaussian elimination. Intended
    /// for field entry types; pivots are the first nonzero candidates.
    pub fn det(&self) -> T {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut det = T::one();
        for c in 0..d {
            let pivot_row = (c..d).find(|&r| a[r * d + c] != T::zero());
            let Some(p) = pivot_row else {
                return T::zero();
            };
            if p != c {
                for j in 0..d {
                    a.swap(p * d + j, c * d + j);
                }
                det = -det;
            }
            let piv = a[c * d + c].clone();
            det = det * piv.clone();
            for r in (c + 1)..d {
                let factor = a[r * d + c].clone() / piv.clone();
                for j in c..d {
                    let sub = factor.clone() * a[c * d + j].clone();
                    a[r * d + j] = a[r * d + j].clone() - sub;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination; errors on singular input.
    pub fn inverse(&self) -> Result<Matrix<T>> {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut inv = Matrix::<T>::identity(d).data;
        for c in 0..d {
            let pivot_row = (c..d).find(|&r| a[r * d + c] != T::zero());
            let Some(p) = pivot_row else {
                return Err(Error::Singular);
            };
            if p != c {
                for j in 0..d {
                    a.swap(p * d + j, c * d + j);
                    inv.swap(p * d + j, c * d + j);
                }
            }
            let piv = a[c * d + c].clone();
            for j in 0..d {
                a[c * d + j] = a[c * d + j].clone() / piv.clone();
                inv[c * d + j] = inv[c * d + j].clone() / piv.clone();
            }
            for r in 0..d {
                if r == c {
                    continue;
                }
                let factor = a[r * d + c].clone();
                if factor == T::zero() {
                    continue;
                }
                for j in 0..d {
                    let s = factor.clone() * a[c * d + j].clone();
                    a[r * d + j] = a[r * d + j].clone() - s;
                    let s = factor.clone() * inv[c * d + j].clone();
                    inv[r * d + j] = inv[r * d + j].clone() - s;
                }
            }
        }
        Ok(Matrix { dim: d, data: inv })
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow_i64(&self, n: i64) -> Result<Matrix<T>> {
        if n == 0 {
            return Ok(Matrix::identity(self.dim));
        }
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc: Option<Matrix<T>> = None;
        let mut sq = base;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(r) => r.mul(&sq),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc.unwrap())
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            acc = acc + self.data[i * self.dim + i].clone();
        }
        acc
    }
}

impl QMatrix {
    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.dim)
    }

    /// A scalar matrix `λI` for some rational `λ`.
    pub fn is_scalar(&self) -> bool {
        let d = self.dim;
        let lam = self.get(0, 0).clone();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { lam.clone() } else { Q::zero() };
                if *self.get(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    /// Central in the unimodular group: a scalar matrix `λI` with `λ^d = 1`.
    /// Over the rationals this means `λ = 1`, or `λ = -1` in even dimension.
    pub fn is_central(&self) -> bool {
        self.is_scalar() && self.get(0, 0).pow(self.dim as i32) == Q::one()
    }

    pub fn ensure_unimodular(&self) -> Result<()> {
        let det = self.det();
        if det != Q::one() {
            return Err(Error::NotUnimodular(rat_to_string(&det)));
        }
        Ok(())
    }

    /// Entrywise conversion into validated intervals at `prec` bits.
    pub fn to_interval(&self, prec: u32) -> Matrix<Interval> {
        self.map(|q| Interval::from_rat(q, prec))
    }

    /// Entrywise f64 approximation for the sampling paths.
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|q| q.to_f64().unwrap_or(f64::NAN))
    }

    /// Canonical text form, e.g. `[[1,2],[0,1]]`, used in digests and files.
    pub fn to_canonical_string(&self) -> String {
        let mut s = String::from("[");
        for i in 0..self.dim {
            if i > 0 {
                s.push(',');
            }
            s.push('[');
            for j in 0..self.dim {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&rat_to_string(self.get(i, j)));
            }
            s.push(']');
        }
        s.push(']');
        s
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| rat_to_string(self.get(i, j))).collect())
            .collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<QMatrix> {
        let d = rows.len();
        if d < 1 {
            return Err(Error::Parse("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::Parse(format!(
                    "ragged matrix: row of length {} in a {}x{} matrix",
                    row.len(),
                    d,
                    d
                )));
            }
            for cell in row {
                data.push(parse_rat(cell)?);
            }
        }
        Ok(Matrix { dim: d, data })
    }

    /// Max-entry distance to another rational matrix, as f64, for drift
    /// diagnostics.
    pub fn max_entry_dist_f64(&self, rhs: &QMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.data.iter().zip(rhs.data.iter()) {
            let d = (a - b).abs().to_f64().unwrap_or(f64::INFINITY);
            worst = worst.max(d);
        }
        worst
    }
}

/// Reduced canonical form: `p/q` with positive denominator, or just `p` when
/// the denominator is one.
pub fn rat_to_string(q: &Q) -> String {
    if q.denom() == &BigInt::one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Q> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(num).map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
    let d = BigInt::from_str(den).map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {t:?}")));
    }
    Ok(Q::new(n, d))
}

/// A labeled generating set for a finitely generated subgroup of the
/// unimodular rational matrices. After loading, the list is closed under
/// inverses (labels `g^-1` are appended for generators whose inverse is not
/// already present).
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub dim: usize,
    pub field: String,
    pub generators: Vec<Generator>,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub matrix: QMatrix,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecFile {
    dim: usize,
    field: String,
    generators: Vec<GeneratorFile>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorFile {
    label: String,
    matrix: Vec<Vec<String>>,
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<GroupSpec> {
        let file: GroupSpecFile = serde_json::from_str(text)?;
        if file.dim < 2 {
            return Err(Error::Invalid(format!("dim must be at least 2, got {}", file.dim)));
        }
        if file.field != "Q" {
            return Err(Error::Invalid(format!(
                "unsupported field {:?}; only \"Q\" is implemented",
                file.field
            )));
        }
        if file.generators.is_empty() {
            return Err(Error::Invalid("no generators".into()));
        }
        let mut gens: Vec<Generator> = Vec::new();
        for g in &file.generators {
            let m = QMatrix::from_string_rows(&g.matrix)?;
            if m.dim() != file.dim {
                return Err(Error::DimMismatch(format!(
                    "generator {:?} is {}x{} but dim = {}",
                    g.label,
                    m.dim(),
                    m.dim(),
                    file.dim
                )));
            }
            m.ensure_unimodular()?;
            if m.is_identity() {
                return Err(Error::Invalid(format!("generator {:?} is the identity", g.label)));
            }
            if g.label.is_empty() || g.label.contains('*') || g.label == "e" {
                return Err(Error::Invalid(format!("bad generator label {:?}", g.label)));
            }
            if gens.iter().any(|h| h.label == g.label) {
                return Err(Error::Invalid(format!("duplicate generator label {:?}", g.label)));
            }
            gens.push(Generator {
                label: g.label.clone(),
                matrix: m,
            });
        }
        // Close under inverses, keeping a deterministic order: each original
        // generator is followed by its inverse when that inverse is new.
        let mut closed: Vec<Generator> = Vec::new();
        for g in gens {
            let inv = g.matrix.inverse()?;
            let g_label = g.label.clone();
            if !closed.iter().any(|h| h.matrix == g.matrix) {
                closed.push(g);
            }
            if !closed.iter().any(|h| h.matrix == inv) {
                closed.push(Generator {
                    label: format!("{g_label}^-1"),
                    matrix: inv,
                });
            }
        }
        Ok(GroupSpec {
            dim: file.dim,
            field: file.field,
            generators: closed,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<GroupSpec> {
        let text = std::fs::read_to_string(path)?;
        GroupSpec::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = GroupSpecFile {
            dim: self.dim,
            field: self.field.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorFile {
                    label: g.label.clone(),
                    matrix: g.matrix.to_string_rows(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("spec serialization")
    }

    /// Digest of the inverse-closed normalized form; identifies the group
    /// spec inside certificates and reports.
    pub fn digest(&self) -> String {
        let mut canon = String::new();
        write!(canon, "dim:{};field:{}", self.dim, self.field).unwrap();
        for g in &self.generators {
            write!(canon, ";{}={}", g.label, g.matrix.to_canonical_string()).unwrap();
        }
        let mut hasher = Sha256::new();
        hasher.update(canon.as_bytes());
        let out = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in out {
            write!(hex, "{b:02x}").unwrap();
        }
        hex
    }

    pub fn find_generator(&self, label: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.label == label)
    }
}

impl Matrix<f64> {
    /// Inverse with partial pivoting, for the float sampling path.
    pub fn inverse_f64(&self) -> Result<Matrix<f64>> {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut inv = Matrix::<f64>::identity(d).data;
        for c in 0..d {
            let (p, mag) = (c..d)
                .map(|r| (r, a[r * d + c].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if mag < 1e-300 {
                return Err(Error::Singular);
            }
            if p != c {
                for j in 0..d {
                    a.swap(p * d + j, c * d + j);
                    inv.swap(p * d + j, c * d + j);
                }
            }
            let piv = a[c * d + c];
            for j in 0..d {
                a[c * d + j] /= piv;
                inv[c * d + j] /= piv;
            }
            for r in 0..d {
                if r == c {
                    continue;
                }
                let f = a[r * d + c];
                if f == 0.0 {
                    continue;
                }
                for j in 0..d {
                    a[r * d + j] -= f * a[c * d + j];
                    inv[r * d + j] -= f * inv[c * d + j];
                }
            }
        }
        Ok(Matrix { dim: d, data: inv })
    }
}

pub fn qmat(dim: usize, entries: &[i64]) -> QMatrix {
    Matrix::from_vec(dim, entries.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect())
}

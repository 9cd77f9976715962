#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rfree::matrix::{qmat, GroupSpec, QMatrix};
use rfree::Q;

pub fn rat(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn sanov_spec() -> GroupSpec {
    GroupSpec::from_json(
        r#"{ "dim": 2, "field": "Q", "generators": [
             {"label": "a", "matrix": [["1","2"],["0","1"]]},
             {"label": "b", "matrix": [["1","0"],["2","1"]]} ] }"#,
    )
    .unwrap()
}

/// The six elementary generators of SL(3, Z) with offset one.
pub fn sl3_spec() -> GroupSpec {
    let mut gens = Vec::new();
    for i in 0..3usize {
        for j in 0..3usize {
            if i == j {
                continue;
            }
            let mut entries = [[0i64; 3]; 3];
            for (k, row) in entries.iter_mut().enumerate() {
                row[k] = 1;
            }
            entries[i][j] = 1;
            let rows: Vec<String> = entries
                .iter()
                .map(|r| format!("[\"{}\",\"{}\",\"{}\"]", r[0], r[1], r[2]))
                .collect();
            gens.push(format!(
                "{{\"label\":\"e{}{}\",\"matrix\":[{}]}}",
                i + 1,
                j + 1,
                rows.join(",")
            ));
        }
    }
    GroupSpec::from_json(&format!(
        "{{\"dim\":3,\"field\":\"Q\",\"generators\":[{}]}}",
        gens.join(",")
    ))
    .unwrap()
}

/// Rational rotation by the 3-4-5 angle in the x-z plane.
pub fn rot13() -> QMatrix {
    QMatrix::from_string_rows(&[
        vec!["3/5".into(), "0".into(), "-4/5".into()],
        vec!["0".into(), "1".into(), "0".into()],
        vec!["4/5".into(), "0".into(), "3/5".into()],
    ])
    .unwrap()
}

pub fn elementary(dim: usize, i: usize, j: usize, off: i64) -> QMatrix {
    let mut e = vec![0i64; dim * dim];
    for k in 0..dim {
        e[k * dim + k] = 1;
    }
    e[i * dim + j] = off;
    qmat(dim, &e)
}

/// Random product of elementary integer matrices: unimodular with
/// moderate entries, exact inverse.
pub fn random_unimodular(dim: usize, steps: usize, max_off: i64, rng: &mut ChaCha8Rng) -> QMatrix {
    let mut m = QMatrix::identity(dim);
    for _ in 0..steps {
        let i = rng.random_range(0..dim);
        let mut j = rng.random_range(0..dim);
        while j == i {
            j = rng.random_range(0..dim);
        }
        let mut off = 0;
        while off == 0 {
            off = rng.random_range(-max_off..=max_off);
        }
        m = m.mul(&elementary(dim, i, j, off));
    }
    m
}

pub fn diag_q(entries: &[Q]) -> QMatrix {
    let d = entries.len();
    let zero = Q::new(BigInt::from(0), BigInt::from(1));
    let mut data = vec![zero; d * d];
    for (k, q) in entries.iter().enumerate() {
        data[k * d + k] = q.clone();
    }
    QMatrix::from_vec(d, data)
}

/// A very proximal element with known spectrum: a random unimodular
/// conjugate of diag(n, 1, ..., 1/n).
pub fn very_proximal(
    dim: usize,
    n: i64,
    steps: usize,
    max_off: i64,
    rng: &mut ChaCha8Rng,
) -> QMatrix {
    let b = random_unimodular(dim, steps, max_off, rng);
    let mut profile = vec![rat(1, 1); dim];
    profile[0] = rat(n, 1);
    profile[dim - 1] = rat(1, n);
    b.mul(&diag_q(&profile)).mul(&b.inverse().unwrap())
}

pub fn random_product(gens: &[QMatrix], max_factors: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let k = rng.random_range(1..=max_factors);
    let mut m = gens[rng.random_range(0..gens.len())].clone();
    for _ in 1..k {
        m = m.mul(&gens[rng.random_range(0..gens.len())]);
    }
    m
}

pub fn normalize_f64(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

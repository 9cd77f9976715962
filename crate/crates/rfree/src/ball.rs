//! Breadth-first enumeration of word-metric balls in a finitely generated
//! matrix group. Exact rational entries make deduplication canonical, so the
//! reported word length is the true distance from the identity and each
//! element carries the lexicographically least shortest word spelling it.

use crate::error::{Error, Result};
use crate::matrix::{GroupSpec, QMatrix};
use rayon::prelude::*;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct BallElement {
    /// Generator indices of the least shortest word, empty for the identity.
    pub word: Vec<u32>,
    /// The same word as display text, `e` for the identity.
    pub text: String,
    /// Word-metric distance from the identity.
    pub length: u32,
    pub matrix: QMatrix,
}

#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: u32,
    pub dim: usize,
    /// Sorted by (length, word): the identity first, then each layer in
    /// lexicographic word order.
    pub elements: Vec<BallElement>,
}

/// Enumerate the closed ball of the given word-metric radius. Products over
/// a frontier layer are computed in parallel; insertion happens in a fixed
/// canonical order, so the result does not depend on the worker count.
pub fn ball(spec: &GroupSpec, radius: u32, cap: usize) -> Result<Ball> {
    let dim = spec.dim;
    let mut elements = vec![BallElement {
        word: vec![],
        text: "e".into(),
        length: 0,
        matrix: QMatrix::identity(dim),
    }];
    let mut seen: HashMap<QMatrix, usize> = HashMap::new();
    seen.insert(elements[0].matrix.clone(), 0);
    let mut frontier: Vec<usize> = vec![0];
    for layer in 1..=radius {
        let products: Vec<(usize, usize, QMatrix)> = frontier
            .par_iter()
            .flat_map_iter(|&ei| {
                let base = &elements[ei];
                spec.generators
                    .iter()
                    .enumerate()
                    .map(move |(gi, g)| (ei, gi, base.matrix.mul(&g.matrix)))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next = Vec::new();
        for (ei, gi, m) in products {
            if seen.contains_key(&m) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::Budget(format!(
                    "ball of radius {radius} exceeds the cap of {cap} elements at layer {layer}"
                )));
            }
            let mut word = elements[ei].word.clone();
            word.push(gi as u32);
            let text = word
                .iter()
                .map(|&i| spec.generators[i as usize].label.as_str())
                .collect::<Vec<_>>()
                .join("*");
            let idx = elements.len();
            seen.insert(m.clone(), idx);
            elements.push(BallElement {
                word,
                text,
                length: layer,
                matrix: m,
            });
            next.push(idx);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Ball {
        radius,
        dim,
        elements,
    })
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The elements that qualify as word coefficients: everything except
    /// central matrices (in particular, except the identity).
    pub fn noncentral(&self) -> Vec<&BallElement> {
        self.elements.iter().filter(|e| !e.matrix.is_central()).collect()
    }

    pub fn find(&self, m: &QMatrix) -> Option<&BallElement> {
        self.elements.iter().find(|e| &e.matrix == m)
    }
}

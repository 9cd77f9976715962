//! Mixed words: alternating products of group coefficients and powers of a
//! distinguished letter `x`. Substituting a group element for `x` evaluates
//! the word; an element is free at a given scale when no nontrivial such
//! word with coefficients from the corresponding ball evaluates to the
//! identity.

use crate::error::{Error, Result};
use crate::matrix::QMatrix;

/// One syllable of a mixed word: a group coefficient (kept with a display
/// label) or a nonzero power of the letter `x`.
#[derive(Clone, Debug)]
pub enum Syllable {
    Coeff { label: String, elem: QMatrix },
    Power(i64),
}

impl PartialEq for Syllable {
    /// Labels are display-only; equality is by content.
    fn eq(&self, other: &Syllable) -> bool {
        match (self, other) {
            (Syllable::Power(a), Syllable::Power(b)) => a == b,
            (Syllable::Coeff { elem: a, .. }, Syllable::Coeff { elem: b, .. }) => a == b,
            _ => false,
        }
    }
}

/// A word in normal form: syllables alternate between coefficients and
/// powers, all powers are nonzero, and no coefficient is the identity.
/// The word is the left-to-right product of its syllables. The empty word
/// is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Word {
        Word { syllables: vec![] }
    }

    /// Build from raw syllables, merging neighbours of the same kind and
    /// dropping trivial ones until the alternating normal form is reached.
    pub fn from_syllables(raw: Vec<Syllable>) -> Word {
        let mut stack: Vec<Syllable> = Vec::with_capacity(raw.len());
        for s in raw {
            push_merged(&mut stack, s);
        }
        Word { syllables: stack }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity_word(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Substitute `gamma` for the letter `x` and multiply out.
    pub fn evaluate(&self, gamma: &QMatrix) -> Result<QMatrix> {
        let mut acc = QMatrix::identity(gamma.dim());
        for s in &self.syllables {
            match s {
                Syllable::Coeff { elem, .. } => {
                    if elem.dim() != gamma.dim() {
                        return Err(Error::DimMismatch(format!(
                            "coefficient is {}x{}, element is {}x{}",
                            elem.dim(),
                            elem.dim(),
                            gamma.dim(),
                            gamma.dim()
                        )));
                    }
                    acc = acc.mul(elem);
                }
                Syllable::Power(k) => {
                    acc = acc.mul(&gamma.pow_i64(*k)?);
                }
            }
        }
        Ok(acc)
    }

    /// Conjugate by a power of `x` chosen so the result starts and ends with
    /// a power syllable, without cancellation at either end. Conjugation
    /// preserves whether the evaluated word is the identity. The identity
    /// word is returned unchanged.
    pub fn boundary_conjugate(&self) -> Word {
        let (Some(first), Some(last)) = (self.syllables.first(), self.syllables.last()) else {
            return self.clone();
        };
        let s: i64 = match (first, last) {
            (Syllable::Power(_), Syllable::Power(_)) => return self.clone(),
            (Syllable::Power(k1), Syllable::Coeff { .. }) => k1.signum(),
            (Syllable::Coeff { .. }, Syllable::Power(kl)) => -kl.signum(),
            (Syllable::Coeff { .. }, Syllable::Coeff { .. }) => -1,
        };
        let mut raw = Vec::with_capacity(self.syllables.len() + 2);
        raw.push(Syllable::Power(s));
        raw.extend(self.syllables.iter().cloned());
        raw.push(Syllable::Power(-s));
        Word::from_syllables(raw)
    }

    pub fn to_text(&self) -> String {
        if self.syllables.is_empty() {
            return "e".into();
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|s| match s {
                Syllable::Coeff { label, .. } => label.clone(),
                Syllable::Power(1) => "x".into(),
                Syllable::Power(k) => format!("x^{k}"),
            })
            .collect();
        parts.join("*")
    }

    /// Parse `a*x^2*b^-1` style text. Coefficient labels are resolved by
    /// the lookup; `x` powers may not be zero. `e` alone is the identity.
    pub fn parse(text: &str, lookup: &dyn Fn(&str) -> Option<QMatrix>) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        if t == "e" {
            return Ok(Word::identity());
        }
        let mut raw = Vec::new();
        for token in t.split('*') {
            let tok = token.trim();
            if tok.is_empty() {
                return Err(Error::Parse(format!("empty syllable in {t:?}")));
            }
            if tok == "x" {
                raw.push(Syllable::Power(1));
            } else if let Some(exp) = tok.strip_prefix("x^") {
                let k: i64 = exp
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad power {tok:?}: {e}")))?;
                if k == 0 {
                    return Err(Error::Parse("zero power syllable".into()));
                }
                raw.push(Syllable::Power(k));
            } else {
                let elem = lookup(tok)
                    .ok_or_else(|| Error::Parse(format!("unknown coefficient label {tok:?}")))?;
                raw.push(Syllable::Coeff {
                    label: tok.into(),
                    elem,
                });
            }
        }
        Ok(Word::from_syllables(raw))
    }
}

fn push_merged(stack: &mut Vec<Syllable>, s: Syllable) {
    match (stack.last_mut(), s) {
        (Some(Syllable::Power(a)), Syllable::Power(b)) => {
            *a += b;
            if *a == 0 {
                stack.pop();
            }
        }
        (
            Some(Syllable::Coeff { label, elem }),
            Syllable::Coeff {
                label: l2,
                elem: e2,
            },
        ) => {
            let merged = elem.mul(&e2);
            if merged.is_identity() {
                stack.pop();
            } else {
                *label = format!("{label}*{l2}");
                *elem = merged;
            }
        }
        (_, Syllable::Power(0)) => {}
        (_, s) => {
            let drop_identity = match &s {
                Syllable::Coeff { elem, .. } => elem.is_identity(),
                Syllable::Power(_) => false,
            };
            if !drop_identity {
                stack.push(s);
            }
        }
    }
}

/// Index-to-power map for enumeration order: `1, -1, 2, -2, ...`.
pub fn power_from_index(i: usize) -> i64 {
    let mag = (i / 2 + 1) as i64;
    if i % 2 == 0 {
        mag
    } else {
        -mag
    }
}

/// Number of alternating words with at most `max_syllables` syllables over
/// `m` coefficients and powers `x^k`, `0 < |k| <= max_power`. Both starting
/// kinds are counted.
pub fn count_words(m: usize, max_syllables: usize, max_power: i64) -> u128 {
    let m = m as u128;
    let p = 2 * max_power as u128;
    let mut total = 0u128;
    for l in 1..=max_syllables {
        let hi = l.div_ceil(2) as u32;
        let lo = (l / 2) as u32;
        total += m.pow(hi) * p.pow(lo) + p.pow(hi) * m.pow(lo);
    }
    total
}

/// Deterministic stream of every normal-form nontrivial word with at most
/// `max_syllables` syllables, coefficients drawn from `coeffs` by index,
/// and exponents with `0 < |k| <= max_abs_power`. Order: syllable count,
/// coefficient-leading words before power-leading ones, then
/// lexicographic per-syllable index with powers ordered `1, -1, 2, -2, ...`.
pub fn enumerate_words(
    coeffs: &[(String, QMatrix)],
    max_syllables: usize,
    max_abs_power: i64,
) -> Result<WordEnumerator> {
    if coeffs.is_empty() {
        return Err(Error::EmptyCoefficients);
    }
    if max_syllables == 0 || max_abs_power <= 0 {
        return Err(Error::Invalid("word enumeration budgets must be positive".into()));
    }
    for (label, m) in coeffs {
        if m.is_identity() {
            return Err(Error::CentralCoefficient(label.clone()));
        }
    }
    Ok(WordEnumerator {
        coeffs: coeffs.to_vec(),
        max_syllables,
        power_choices: 2 * max_abs_power as usize,
        length: 1,
        pattern: 0,
        idx: vec![0],
        fresh: true,
        done: false,
    })
}

pub struct WordEnumerator {
    coeffs: Vec<(String, QMatrix)>,
    max_syllables: usize,
    power_choices: usize,
    length: usize,
    /// 0 while coefficient-leading, 1 while power-leading.
    pattern: u8,
    idx: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl WordEnumerator {
    fn is_coeff_position(&self, pos: usize) -> bool {
        (pos % 2 == 0) == (self.pattern == 0)
    }

    fn choices_at(&self, pos: usize) -> usize {
        if self.is_coeff_position(pos) {
            self.coeffs.len()
        } else {
            self.power_choices
        }
    }

    fn build(&self) -> Word {
        let syllables = self
            .idx
            .iter()
            .enumerate()
            .map(|(pos, &i)| {
                if self.is_coeff_position(pos) {
                    let (label, elem) = &self.coeffs[i];
                    Syllable::Coeff {
                        label: label.clone(),
                        elem: elem.clone(),
                    }
                } else {
                    Syllable::Power(power_from_index(i))
                }
            })
            .collect();
        Word::from_syllables(syllables)
    }

    fn advance(&mut self) -> bool {
        for pos in (0..self.idx.len()).rev() {
            self.idx[pos] += 1;
            if self.idx[pos] < self.choices_at(pos) {
                return true;
            }
            self.idx[pos] = 0;
        }
        if self.pattern == 0 {
            self.pattern = 1;
        } else {
            self.pattern = 0;
            self.length += 1;
            if self.length > self.max_syllables {
                self.done = true;
                return false;
            }
            self.idx = vec![0; self.length];
        }
        true
    }
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(self.build());
        }
        if self.advance() {
            Some(self.build())
        } else {
            None
        }
    }
}

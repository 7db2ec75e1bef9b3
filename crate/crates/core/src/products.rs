//! Tensor, shuffle, half shuffle and area products, and the Lie bracket.
//!
//! All products are bilinear. On words:
//!
//! * `u ⊗ v = uv`
//! * `u ⧢ v` is the sum over order preserving interleavings
//! * `a·u' ≺ v = a·(u' ⧢ v)`, `e ≺ v = 0`
//! * `area(f, g) = f ≺ g − g ≺ f`
//!
//! With these rules `f ≺ e = f − ⟨f, e⟩e` and
//! `f ⧢ g = f ≺ g + g ≺ f + ⟨f, e⟩⟨g, e⟩e` hold on all of the algebra.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::packed;
use crate::words::{FreeElement, Letters, Rational, Word};

/// Interleavings of two words with multiplicities.
///
/// Dynamic program over prefixes: the cell `(i, j)` holds `u[..i] ⧢ v[..j]`
/// with repeated words merged, so repeated letters keep the table small.
pub fn shuffle_words(u: &Word, v: &Word) -> Vec<(Word, u64)> {
    if u.is_empty() {
        return vec![(v.clone(), 1)];
    }
    if v.is_empty() {
        return vec![(u.clone(), 1)];
    }
    let (m, n) = (u.len(), v.len());
    // row[j] = u[..i] ⧢ v[..j]
    let mut row: Vec<HashMap<Letters, u64>> = Vec::with_capacity(n + 1);
    let mut prefix = Letters::new();
    row.push(HashMap::from([(prefix.clone(), 1)]));
    for j in 0..n {
        prefix.push(v.0[j]);
        row.push(HashMap::from([(prefix.clone(), 1)]));
    }
    for i in 0..m {
        let a = u.0[i];
        let mut next: Vec<HashMap<Letters, u64>> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut cell: HashMap<Letters, u64> = HashMap::with_capacity(row[j].len() * 2);
            for (w, c) in &row[j] {
                let mut w = w.clone();
                w.push(a);
                *cell.entry(w).or_insert(0) += c;
            }
            if j > 0 {
                let b = v.0[j - 1];
                for (w, c) in &next[j - 1] {
                    let mut w = w.clone();
                    w.push(b);
                    *cell.entry(w).or_insert(0) += c;
                }
            }
            next.push(cell);
        }
        row = next;
    }
    let mut out: Vec<(Word, u64)> = row
        .pop()
        .unwrap_or_default()
        .into_iter()
        .map(|(w, c)| (Word(w), c))
        .collect();
    out.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Accumulates `Σ coeff · word` and canonicalizes.
#[derive(Default)]
struct Accumulator {
    map: HashMap<Word, Rational>,
}

impl Accumulator {
    fn add(&mut self, w: Word, c: Rational) {
        match self.map.get_mut(&w) {
            Some(x) => *x += c,
            None => {
                self.map.insert(w, c);
            }
        }
    }

    fn add_scaled(&mut self, w: Word, base: &Rational, mult: u64) {
        if mult == 1 {
            self.add(w, base.clone());
        } else {
            self.add(w, base * Rational::from_integer(BigInt::from(mult)));
        }
    }

    fn finish(self) -> FreeElement {
        FreeElement::from_map(self.map)
    }
}

pub fn tensor(f: &FreeElement, g: &FreeElement) -> FreeElement {
    let mut acc = Accumulator::default();
    for (u, cu) in f.terms() {
        for (v, cv) in g.terms() {
            acc.add(u.concat(v), cu * cv);
        }
    }
    acc.finish()
}

/// `[f, g] = f ⊗ g − g ⊗ f`.
pub fn lie_bracket(f: &FreeElement, g: &FreeElement) -> FreeElement {
    &tensor(f, g) - &tensor(g, f)
}

/// Shuffle product computed directly from interleavings of words.
pub fn shuffle(f: &FreeElement, g: &FreeElement) -> FreeElement {
    if f.len() == 1 && f.empty_coeff().is_one() {
        return g.clone();
    }
    if g.len() == 1 && g.empty_coeff().is_one() {
        return f.clone();
    }
    packed::product(f, g, packed::Mode::Shuffle).unwrap_or_else(|| shuffle_general(f, g))
}

/// [`shuffle`] without the packed fast path; works for any letters, lengths
/// and coefficients.
pub fn shuffle_general(f: &FreeElement, g: &FreeElement) -> FreeElement {
    let mut acc = Accumulator::default();
    for (u, cu) in f.terms() {
        for (v, cv) in g.terms() {
            let base = cu * cv;
            for (w, m) in shuffle_words(u, v) {
                acc.add_scaled(w, &base, m);
            }
        }
    }
    acc.finish()
}

/// Left half shuffle `f ≺ g`.
pub fn half_shuffle(f: &FreeElement, g: &FreeElement) -> FreeElement {
    packed::product(f, g, packed::Mode::Half).unwrap_or_else(|| half_shuffle_general(f, g))
}

/// [`half_shuffle`] without the packed fast path.
pub fn half_shuffle_general(f: &FreeElement, g: &FreeElement) -> FreeElement {
    let mut acc = Accumulator::default();
    for (u, cu) in f.terms() {
        let Some((a, rest)) = u.split_first() else {
            continue;
        };
        for (v, cv) in g.terms() {
            let base = cu * cv;
            for (w, m) in shuffle_words(&rest, v) {
                acc.add_scaled(w.prepend(a), &base, m);
            }
        }
    }
    acc.finish()
}

/// `area(f, g) = f ≺ g − g ≺ f`.
pub fn area(f: &FreeElement, g: &FreeElement) -> FreeElement {
    packed::product(f, g, packed::Mode::Area)
        .unwrap_or_else(|| &half_shuffle_general(f, g) - &half_shuffle_general(g, f))
}

/// Shuffle assembled from the half shuffle:
/// `f ≺ g + g ≺ f + ⟨f, e⟩⟨g, e⟩e`.
pub fn shuffle_via_half(f: &FreeElement, g: &FreeElement) -> FreeElement {
    let mut out = &half_shuffle(f, g) + &half_shuffle(g, f);
    out.add_term(Word::empty(), f.empty_coeff() * g.empty_coeff());
    out
}

/// `f ⧢ … ⧢ f` (`k` factors); `f^{⧢0} = e`.
pub fn shuffle_power(f: &FreeElement, k: usize) -> FreeElement {
    let mut out = FreeElement::unit();
    for _ in 0..k {
        out = shuffle(&out, f);
    }
    out
}

/// `f_1 ⧢ … ⧢ f_n`, `e` for no factors.
pub fn shuffle_all<'a, I: IntoIterator<Item = &'a FreeElement>>(factors: I) -> FreeElement {
    factors.into_iter().fold(FreeElement::unit(), |acc, f| shuffle(&acc, f))
}

/// `f_1 ⊗ … ⊗ f_n`, `e` for no factors.
pub fn tensor_all<'a, I: IntoIterator<Item = &'a FreeElement>>(factors: I) -> FreeElement {
    factors.into_iter().fold(FreeElement::unit(), |acc, f| tensor(&acc, f))
}

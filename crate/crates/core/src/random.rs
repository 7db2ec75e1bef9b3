//! Seeded generators for test elements and paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::words::{int, FreeElement, Letter, Word};

pub struct Generator {
    rng: ChaCha8Rng,
    alphabet: usize,
}

impl Generator {
    pub fn new(seed: u64, alphabet: usize) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            alphabet,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A word of uniform length in `min_len..=max_len` with uniform letters.
    pub fn word(&mut self, min_len: usize, max_len: usize) -> Word {
        let len = self.rng.gen_range(min_len..=max_len);
        Word::from_letters((0..len).map(|_| Letter::of(self.rng.gen_range(1..=self.alphabet))))
    }

    /// Up to `max_terms` words of length `≤ max_len` with coefficients in
    /// `−3..=3`; `positive` excludes the empty word. Never returns zero.
    pub fn element(&mut self, max_len: usize, max_terms: usize, positive: bool) -> FreeElement {
        let min_len = usize::from(positive);
        loop {
            let terms = self.rng.gen_range(1..=max_terms);
            let mut f = FreeElement::zero();
            for _ in 0..terms {
                let w = self.word(min_len, max_len);
                f.add_term(w, int(self.rng.gen_range(-3..=3)));
            }
            if !f.is_zero() {
                return f;
            }
        }
    }

    /// `n` points in `dim` dimensions starting at the origin, with
    /// increments uniform in `[-1, 1]` per coordinate.
    pub fn path_points(&mut self, segments: usize, dim: usize) -> Vec<Vec<f64>> {
        let mut points = vec![vec![0.0; dim]];
        for _ in 0..segments {
            let last = points.last().expect("non-empty");
            let next = last.iter().map(|x| x + self.rng.gen_range(-1.0..=1.0)).collect();
            points.push(next);
        }
        points
    }
}

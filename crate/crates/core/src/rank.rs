//! Exact rank and left null space over the rationals.

use num_traits::{One, Zero};

use crate::words::Rational;

/// Rank of a dense matrix given by rows, and a basis of the left null space
/// (coefficient vectors `y` with `y·A = 0`), by Gaussian elimination on
/// `[A | I]`.
pub fn rank_and_relations(rows: &[Vec<Rational>]) -> (usize, Vec<Vec<Rational>>) {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut work: Vec<(Vec<Rational>, Vec<Rational>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut history = vec![Rational::zero(); m];
            history[i] = Rational::one();
            (r.clone(), history)
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..m).find(|&i| !work[i].0[col].is_zero()) else {
            continue;
        };
        work.swap(rank, pivot);
        let inv = Rational::one() / &work[rank].0[col];
        let (head, tail) = work.split_at_mut(rank + 1);
        let (prow, phist) = &mut head[rank];
        prow.iter_mut().for_each(|x| *x *= &inv);
        phist.iter_mut().for_each(|x| *x *= &inv);
        for (row, hist) in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(prow.iter()).skip(col) {
                *x -= &factor * p;
            }
            for (x, p) in hist.iter_mut().zip(phist.iter()) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    let relations = work.into_iter().skip(rank).map(|(_, h)| h).collect();
    (rank, relations)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rank_and_relations(rows).0
}

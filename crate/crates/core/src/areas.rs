//! Shuffle polynomials in iterated areas.
//!
//! An [`AreaMonomial`] is a multiset of trees `{t_1, …, t_n}` standing for
//! `𝔄(t_1) ⧢ ⋯ ⧢ 𝔄(t_n)`; the empty monomial is `e`. The rewriter turns
//! `area(𝔄(A), 𝔄(A_1) ⧢ ⋯ ⧢ 𝔄(A_n))` back into such a polynomial, with
//! leading term `β_n · A ⧢ A_1 ⧢ ⋯ ⧢ A_n`, using only the shuffle-pullout
//! and area-Jacobi identities. Nothing is expanded into words on the way.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::hall::HallSet;
use crate::magma::{Evaluator, Tree};
use crate::products::{shuffle, shuffle_power};
use crate::rank::rank_and_relations;
use crate::words::{rational, FreeElement, Letter, Rational, Word};
use crate::{Error, Result};

/// `β_k = −(k−1)/(k+1)`.
pub fn beta(k: usize) -> Rational {
    let k = k as i64;
    rational(-(k - 1), k + 1)
}

/// `β_k` from `β_1 = 0` and `β_k = (β_{k−1} − 1)/(β_{k−1} + 3)`.
pub fn beta_recursive(k: usize) -> Rational {
    assert!(k >= 1, "the recursion starts at k = 1");
    let mut b = Rational::zero();
    for _ in 1..k {
        b = (&b - Rational::one()) / (&b + Rational::from_integer(3.into()));
    }
    b
}

/// Multiset of trees, kept sorted by degree, foliage and shape.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AreaMonomial {
    factors: Vec<Tree>,
}

impl AreaMonomial {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut factors: Vec<Tree>) -> Self {
        factors.sort();
        AreaMonomial { factors }
    }

    pub fn single(t: Tree) -> Self {
        AreaMonomial { factors: vec![t] }
    }

    pub fn letters(letters: &[Letter]) -> Self {
        Self::new(letters.iter().map(|&a| Tree::leaf(a)).collect())
    }

    pub fn factors(&self) -> &[Tree] {
        &self.factors
    }

    pub fn shuffle_degree(&self) -> usize {
        self.factors.len()
    }

    /// Total degree as a function on paths.
    pub fn degree(&self) -> usize {
        self.factors.iter().map(Tree::degree).sum()
    }

    pub fn with(&self, t: Tree) -> Self {
        let pos = self.factors.partition_point(|x| x <= &t);
        let mut factors = self.factors.clone();
        factors.insert(pos, t);
        AreaMonomial { factors }
    }

    /// Splits off the first factor.
    fn split_first(&self) -> Option<(Tree, AreaMonomial)> {
        let (first, rest) = self.factors.split_first()?;
        Some((first.clone(), AreaMonomial { factors: rest.to_vec() }))
    }
}

impl Ord for AreaMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.factors
            .len()
            .cmp(&other.factors.len())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for AreaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AreaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("e");
        }
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⧢ ")?;
            }
            write!(f, "A{t}")?;
        }
        Ok(())
    }
}

/// Finite linear combination of area monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AreaPoly {
    terms: BTreeMap<AreaMonomial, Rational>,
}

impl AreaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: AreaMonomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn tree(t: Tree) -> Self {
        Self::monomial(AreaMonomial::single(t), Rational::one())
    }

    pub fn add_term(&mut self, m: AreaMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &AreaPoly, c: &Rational) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> AreaPoly {
        let mut out = AreaPoly::zero();
        out.add_scaled(self, c);
        out
    }

    /// Multiplies every monomial by `𝔄(t)`.
    pub fn shuffle_tree(&self, t: &Tree) -> AreaPoly {
        AreaPoly {
            terms: self.terms.iter().map(|(m, c)| (m.with(t.clone()), c.clone())).collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AreaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &AreaMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest shuffle degree among the monomials; `None` for zero.
    pub fn shuffle_degree(&self) -> Option<usize> {
        self.terms.keys().map(AreaMonomial::shuffle_degree).max()
    }
}

impl fmt::Display for AreaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})·{m}")?;
        }
        Ok(())
    }
}

/// Evaluates area polynomials, caching the iterated area of every tree.
#[derive(Default)]
pub struct AreaEvaluator {
    trees: Evaluator,
}

impl AreaEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(&mut self, m: &AreaMonomial) -> FreeElement {
        let mut out = FreeElement::unit();
        for t in m.factors() {
            let a = self.trees.area(t);
            out = shuffle(&out, &a);
        }
        out
    }

    pub fn eval(&mut self, p: &AreaPoly) -> FreeElement {
        let mut out = FreeElement::zero();
        for (m, c) in p.terms() {
            out += &self.monomial(m).scale(c);
        }
        out
    }
}

pub fn eval_area_poly(p: &AreaPoly) -> FreeElement {
    AreaEvaluator::new().eval(p)
}

/// Memoized symbolic rewriting.
#[derive(Default)]
pub struct AreaRewriter {
    memo: HashMap<(Tree, AreaMonomial), AreaPoly>,
    words: HashMap<Word, AreaPoly>,
}

impl AreaRewriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// `area(𝔄(A), 𝔄(A_1) ⧢ ⋯ ⧢ 𝔄(A_n))` for `n ≥ 1`.
    pub fn rewrite(&mut self, a: &Tree, m: &AreaMonomial) -> Result<AreaPoly> {
        if m.shuffle_degree() == 0 {
            return Err(Error::InvalidArgument(
                "the monomial must have at least one factor".into(),
            ));
        }
        Ok(self.r(a, m))
    }

    /// `area(𝔄(A), p)`.
    pub fn area_with_poly(&mut self, a: &Tree, p: &AreaPoly) -> AreaPoly {
        let mut out = AreaPoly::zero();
        for (m, c) in p.terms() {
            let r = self.r(a, m);
            out.add_scaled(&r, c);
        }
        out
    }

    fn r(&mut self, a: &Tree, m: &AreaMonomial) -> AreaPoly {
        match m.shuffle_degree() {
            // area(A, e) = A since 𝔄(A) has no constant term
            0 => return AreaPoly::tree(a.clone()),
            1 => return AreaPoly::tree(Tree::node(a.clone(), m.factors()[0].clone())),
            _ => {}
        }
        let key = (a.clone(), m.clone());
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let value = if m.shuffle_degree() == 2 {
            self.r_two(a, m)
        } else {
            self.r_many(a, m)
        };
        self.memo.insert(key, value.clone());
        value
    }

    /// Shuffle-pullout with `f, g` the two factors:
    /// `3 area(A, A_1 ⧢ A_2) = A_1 ⧢ (A,A_2) + A_2 ⧢ (A,A_1) − A ⧢ A_1 ⧢ A_2
    ///  + ((A,A_2),A_1) + ((A,A_1),A_2)`.
    fn r_two(&mut self, a: &Tree, m: &AreaMonomial) -> AreaPoly {
        let (a1, a2) = (&m.factors()[0], &m.factors()[1]);
        let third = rational(1, 3);
        let mut out = AreaPoly::zero();
        let aa1 = Tree::node(a.clone(), a1.clone());
        let aa2 = Tree::node(a.clone(), a2.clone());
        out.add_term(AreaMonomial::new(vec![a1.clone(), aa2.clone()]), third.clone());
        out.add_term(AreaMonomial::new(vec![a2.clone(), aa1.clone()]), third.clone());
        out.add_term(m.with(a.clone()), -third.clone());
        out.add_term(AreaMonomial::single(Tree::node(aa2, a1.clone())), third.clone());
        out.add_term(AreaMonomial::single(Tree::node(aa1, a2.clone())), third);
        out
    }

    /// Shuffle-pullout on `A_1 ⧢ G` with `G` the remaining factors; the term
    /// `area(area(A, G), A_1)` is rotated by area-Jacobi, after which the two
    /// copies of `A_1 ⧢ area(A, G)` cancel and the only surviving
    /// occurrence of the unknown is `c_self · area(A, M)` inside
    /// `area(A, area(A_1, G))`. Solving gives division by `3 + c_self`.
    fn r_many(&mut self, a: &Tree, m: &AreaMonomial) -> AreaPoly {
        let (a1, rest) = m.split_first().expect("at least three factors");
        let aa1 = Tree::node(a.clone(), a1.clone());
        let a1a = Tree::node(a1.clone(), a.clone());

        let mut out = AreaPoly::zero();
        out.add_term(rest.with(aa1.clone()), Rational::one());
        out.add_term(m.with(a.clone()), -Rational::one());
        out.add_term(rest.with(a1a.clone()), -Rational::one());
        let r_aa1 = self.r(&aa1, &rest);
        out.add_scaled(&r_aa1, &Rational::one());
        let r_a1a = self.r(&a1a, &rest);
        out.add_scaled(&r_a1a, &-Rational::one());

        // P_1 = area(A_1, G)
        let p1 = self.r(&a1, &rest);
        out.add_scaled(&p1.shuffle_tree(a), &Rational::one());
        let mut c_self = Rational::zero();
        for (mono, c) in p1.terms() {
            if mono == m {
                c_self = c.clone();
                continue;
            }
            let r = self.r(a, mono);
            out.add_scaled(&r, &-c);
        }
        let denom = c_self + Rational::from_integer(3.into());
        out.scale(&(Rational::one() / denom))
    }

    /// An area polynomial of shuffle degree `|w|` evaluating to `w`, from
    /// `a·v = ½ (area(a, v) + a ⧢ v)`.
    pub fn word(&mut self, w: &Word) -> AreaPoly {
        if let Some(p) = self.words.get(w) {
            return p.clone();
        }
        let value = match w.split_first() {
            None => AreaPoly::monomial(AreaMonomial::empty(), Rational::one()),
            Some((a, v)) if v.is_empty() => AreaPoly::tree(Tree::leaf(a)),
            Some((a, v)) => {
                let pv = self.word(&v);
                let leaf = Tree::leaf(a);
                let mut out = self.area_with_poly(&leaf, &pv);
                out.add_scaled(&pv.shuffle_tree(&leaf), &Rational::one());
                out.scale(&rational(1, 2))
            }
        };
        self.words.insert(w.clone(), value.clone());
        value
    }

    /// Rewrites every word of a free element.
    pub fn element(&mut self, f: &FreeElement) -> AreaPoly {
        let mut out = AreaPoly::zero();
        for (w, c) in f.terms() {
            let p = self.word(w);
            out.add_scaled(&p, c);
        }
        out
    }
}

pub fn rewrite_area_of_monomial(a: &Tree, m: &AreaMonomial) -> Result<AreaPoly> {
    AreaRewriter::new().rewrite(a, m)
}

pub fn word_to_area_poly(w: &Word) -> AreaPoly {
    AreaRewriter::new().word(w)
}

/// Rank of the Hall-area monomials of one degree against the word basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRank {
    pub degree: usize,
    pub dimension: usize,
    pub rank: usize,
    /// Each relation lists `(ω, coefficient)` with `Σ coefficient · 𝔄_ω = 0`.
    pub relations: Vec<Vec<(Word, Rational)>>,
}

impl DegreeRank {
    pub fn full_rank(&self) -> bool {
        self.rank == self.dimension
    }
}

#[derive(Clone, Debug)]
pub struct HallAreaReport {
    pub alphabet: usize,
    pub order: String,
    pub degrees: Vec<DegreeRank>,
}

impl HallAreaReport {
    pub fn full_rank(&self) -> bool {
        self.degrees.iter().all(DegreeRank::full_rank)
    }
}

/// `𝔄(h_1)^{⧢k_1} ⧢ ⋯ ⧢ 𝔄(h_n)^{⧢k_n}` for the Hall factorization of `w`.
pub fn hall_area_monomial(w: &Word, hall: &HallSet, eval: &mut Evaluator) -> Result<FreeElement> {
    let mut out = FreeElement::unit();
    for (t, k) in hall.factorize(w)? {
        let a = eval.area(&t);
        out = shuffle(&out, &shuffle_power(&a, k));
    }
    Ok(out)
}

/// Exact rank of the Hall-area monomials of each degree `1..=n`.
pub fn hall_area_rank_report(n: usize, hall: &HallSet) -> Result<HallAreaReport> {
    if n > hall.max_degree() {
        return Err(Error::DegreeBoundExceeded {
            word: format!("<all words of length {n}>"),
            needed: n,
            bound: hall.max_degree(),
        });
    }
    let d = hall.alphabet();
    let mut eval = Evaluator::new();
    let mut degrees = Vec::new();
    for m in 1..=n {
        let words = Word::all_of_length(d, m);
        let column: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = Vec::with_capacity(words.len());
        for w in &words {
            let value = hall_area_monomial(w, hall, &mut eval)?;
            let mut row = vec![Rational::zero(); words.len()];
            for (u, c) in value.terms() {
                row[column[u]] = c.clone();
            }
            rows.push(row);
        }
        let (rank, null) = rank_and_relations(&rows);
        let relations = null
            .into_iter()
            .map(|y| {
                words
                    .iter()
                    .zip(y)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(w, c)| (w.clone(), c))
                    .collect()
            })
            .collect();
        degrees.push(DegreeRank {
            degree: m,
            dimension: words.len(),
            rank,
            relations,
        });
    }
    Ok(HallAreaReport {
        alphabet: d,
        order: hall.order().name().to_string(),
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall::{generate_hall, HallOrder};
    use crate::products::area;
    use crate::words::int;

    fn el(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn leaf(i: usize) -> Tree {
        Tree::leaf(Letter::of(i))
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(1), int(0));
        assert_eq!(beta(2), rational(-1, 3));
        assert_eq!(beta(3), rational(-1, 2));
        for k in 1..=50 {
            assert_eq!(beta(k), beta_recursive(k), "k = {k}");
        }
    }

    #[test]
    fn eval_examples() {
        let mut p = AreaPoly::tree(t("(1,2)")).scale(&rational(1, 2));
        p.add_term(AreaMonomial::new(vec![leaf(1), leaf(2)]), rational(1, 2));
        assert_eq!(eval_area_poly(&p), el("12"));
        let unit = AreaPoly::monomial(AreaMonomial::empty(), int(1));
        assert_eq!(eval_area_poly(&unit), el("e"));
        assert_eq!(eval_area_poly(&AreaPoly::tree(t("(1,2)"))), el("12 - 21"));
    }

    #[test]
    fn rewrite_single_factor() {
        let p = rewrite_area_of_monomial(&leaf(1), &AreaMonomial::single(leaf(2))).unwrap();
        assert_eq!(p, AreaPoly::tree(t("(1,2)")));
        assert!(rewrite_area_of_monomial(&leaf(1), &AreaMonomial::empty()).is_err());
    }

    #[test]
    fn rewrite_two_letters() {
        let (a, b, c) = (leaf(1), leaf(2), leaf(3));
        let m = AreaMonomial::new(vec![a.clone(), b.clone()]);
        let p = rewrite_area_of_monomial(&c, &m).unwrap();
        let third = rational(1, 3);
        let mut expected = AreaPoly::monomial(m.with(c.clone()), -third.clone());
        expected.add_term(AreaMonomial::new(vec![a.clone(), t("(3,2)")]), third.clone());
        expected.add_term(AreaMonomial::new(vec![b.clone(), t("(3,1)")]), third.clone());
        expected.add_term(AreaMonomial::single(t("((3,2),1)")), third.clone());
        expected.add_term(AreaMonomial::single(t("((3,1),2)")), third);
        assert_eq!(p, expected);
    }

    #[test]
    fn rewrite_is_sound_with_beta_leading_term() {
        let mut rw = AreaRewriter::new();
        let mut ev = AreaEvaluator::new();
        for n in 1..=4 {
            for a in 1..=2 {
                for ones in 0..=n {
                    let mut letters = vec![leaf(1); ones];
                    letters.extend(vec![leaf(2); n - ones]);
                    let m = AreaMonomial::new(letters);
                    let p = rw.rewrite(&leaf(a), &m).unwrap();
                    let lhs = area(&ev.trees.area(&leaf(a)), &ev.monomial(&m));
                    assert_eq!(ev.eval(&p), lhs, "A = {a}, M = {m}");
                    let top = m.with(leaf(a));
                    assert_eq!(p.coeff(&top), beta(n), "A = {a}, M = {m}");
                    assert!(p.terms().all(|(x, _)| x == &top || x.shuffle_degree() <= n));
                }
            }
        }
    }

    #[test]
    fn words_to_area_polynomials() {
        let mut rw = AreaRewriter::new();
        let mut ev = AreaEvaluator::new();
        let p = rw.word(&"12".parse().unwrap());
        let mut expected = AreaPoly::tree(t("(1,2)")).scale(&rational(1, 2));
        expected.add_term(AreaMonomial::new(vec![leaf(1), leaf(2)]), rational(1, 2));
        assert_eq!(p, expected);
        assert_eq!(rw.word(&"1".parse().unwrap()), AreaPoly::tree(leaf(1)));
        for w in Word::all_up_to(2, 4) {
            let p = rw.word(&w);
            assert_eq!(ev.eval(&p), FreeElement::word(w.clone()), "{w}");
            assert_eq!(p.shuffle_degree(), Some(w.len()), "{w}");
        }
    }

    #[test]
    fn hall_area_ranks() {
        let h = generate_hall(2, HallOrder::Lyndon, 3).unwrap();
        let report = hall_area_rank_report(3, &h).unwrap();
        assert_eq!(report.degrees.len(), 3);
        assert_eq!(report.degrees[0].rank, 2);
        assert!(report.full_rank());
        assert!(hall_area_rank_report(4, &h).is_err());
    }

    #[test]
    fn monomial_order_is_canonical() {
        let m = AreaMonomial::new(vec![t("(1,2)"), leaf(2), leaf(1)]);
        assert_eq!(m.factors(), [leaf(1), leaf(2), t("(1,2)")]);
        assert_eq!(m.to_string(), "A1 ⧢ A2 ⧢ A(1,2)");
    }
}

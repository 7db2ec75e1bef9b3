//! Elimination of the greatest letter `c`.
//!
//! The derived alphabet `X` consists of the left combs `(a c^n)`, `a ≠ c`,
//! `n ≥ 0`. Words not beginning with `c` span the half shuffle subalgebra
//! `Z`, and every element decomposes uniquely as `Σ_k c^{⧢k} ⧢ z_k` with
//! `z_k ∈ Z ⊕ ℚe`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::hall::HallSet;
use crate::magma::{eval_tree, Product, Tree};
use crate::products::{half_shuffle, shuffle, shuffle_power};
use crate::words::{rational, FreeElement, Letter, Rational, Word};
use crate::{Error, Result};

/// The derived letter `(a c^n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct XLetter {
    pub base: Letter,
    pub height: usize,
}

impl XLetter {
    pub fn new(base: Letter, height: usize) -> Self {
        XLetter { base, height }
    }

    pub fn degree(self) -> usize {
        self.height + 1
    }

    pub fn tree(self, c: Letter) -> Tree {
        Tree::left_comb(Tree::leaf(self.base), &Tree::leaf(c), self.height)
    }
}

impl fmt::Display for XLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.base, self.height)
    }
}

/// `base:height`, e.g. `1:2` for `((1,c),c)`.
impl FromStr for XLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, n) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected base:height, got {s:?}")))?;
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad letter in {s:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad height in {s:?}")))?;
        Ok(XLetter::new(Letter::new(a)?, n))
    }
}

/// Parses a comma or space separated list of [`XLetter`]s.
pub fn parse_x_word(s: &str) -> Result<Vec<XLetter>> {
    s.split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect()
}

fn check_base(a: Letter, c: Letter) -> Result<()> {
    if a == c {
        return Err(Error::InvalidArgument(format!(
            "the base letter must differ from c = {c}"
        )));
    }
    Ok(())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn word_with_a_at(a: Letter, c: Letter, len: usize, pos: usize) -> Word {
    Word::from_letters((0..len).map(|i| if i == pos { a } else { c }))
}

/// Closed forms of the Lie bracket, Hall integral and iterated area of
/// `(a c^n)`, written out on words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForms {
    pub lie: FreeElement,
    pub integral: FreeElement,
    pub area: FreeElement,
}

pub fn closed_forms(a: Letter, n: usize, c: Letter) -> Result<ClosedForms> {
    check_base(a, c)?;
    let len = n + 1;
    let mut lie = FreeElement::zero();
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let coeff = BigInt::from(sign) * binomial(BigInt::from(n), BigInt::from(k));
        lie.add_term(word_with_a_at(a, c, len, k), Rational::from_integer(coeff));
    }
    let nf = Rational::from_integer(factorial(n));
    let integral = FreeElement::term(word_with_a_at(a, c, len, 0), nf.clone());
    let area = if n == 0 {
        integral.clone()
    } else {
        let mut area = integral.clone();
        area.add_term(word_with_a_at(a, c, len, 1), -nf);
        area
    };
    Ok(ClosedForms { lie, integral, area })
}

/// Residuals of the two relations between the Hall integral and iterated
/// areas of `(a c^n)`:
///
/// * `≺(ac^n) = 1/(n+1) 𝔄(ac^n) + n/(n+1) c ⧢ ≺(ac^{n−1})`
/// * `≺(ac^n) = 1/(n+1) Σ_{k=0}^{n} c^{⧢k} ⧢ 𝔄(ac^{n−k})`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcnResiduals {
    pub step: FreeElement,
    pub sum: FreeElement,
}

impl AcnResiduals {
    pub fn is_zero(&self) -> bool {
        self.step.is_zero() && self.sum.is_zero()
    }
}

pub fn acn_relation_check(a: Letter, n: usize, c: Letter) -> Result<AcnResiduals> {
    check_base(a, c)?;
    if n == 0 {
        return Err(Error::InvalidArgument("the relations need n ≥ 1".into()));
    }
    let comb = |k: usize| XLetter::new(a, k).tree(c);
    let integral = eval_tree(&comb(n), Product::HalfShuffle);
    let c_el = FreeElement::letter(c);
    let inv = rational(1, n as i64 + 1);

    let mut step = integral.clone();
    step -= &eval_tree(&comb(n), Product::Area).scale(&inv);
    let prev = eval_tree(&comb(n - 1), Product::HalfShuffle);
    step -= &shuffle(&c_el, &prev).scale(&rational(n as i64, n as i64 + 1));

    let mut sum = integral;
    for k in 0..=n {
        let term = shuffle(&shuffle_power(&c_el, k), &eval_tree(&comb(n - k), Product::Area));
        sum -= &term.scale(&inv);
    }
    Ok(AcnResiduals { step, sum })
}

/// Whether `f` lies in `Z`: no constant term and no word starting with `c`.
pub fn is_in_z(f: &FreeElement, c: Letter) -> bool {
    f.support().all(|w| w.first().is_some_and(|a| a != c))
}

/// `f = Σ_k c^{⧢k} ⧢ (z_k + s_k e)` with `z_k ∈ Z` and scalars `s_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesInC {
    pub c: Letter,
    pub coefficients: Vec<FreeElement>,
    pub scalar_slots: Vec<Rational>,
}

impl SeriesInC {
    pub fn reconstruct(&self) -> FreeElement {
        let c_el = FreeElement::letter(self.c);
        let mut out = FreeElement::zero();
        for (k, (z, s)) in self.coefficients.iter().zip(&self.scalar_slots).enumerate() {
            let mut coeff = z.clone();
            coeff.add_term(Word::empty(), s.clone());
            if coeff.is_zero() {
                continue;
            }
            out += &shuffle(&shuffle_power(&c_el, k), &coeff);
        }
        out
    }

    pub fn all_in_z(&self) -> bool {
        self.coefficients.iter().all(|z| is_in_z(z, self.c))
    }
}

fn c_prefix(w: &Word, c: Letter) -> usize {
    w.letters().iter().take_while(|&&x| x == c).count()
}

/// Peels the word with the longest run of leading `c`s: `c^n v` occurs in
/// `c^{⧢n} ⧢ v` with coefficient `n!` and every other word there has fewer
/// leading `c`s, so the loop terminates and the result is unique.
pub fn decompose_series(f: &FreeElement, c: Letter) -> SeriesInC {
    let top = f.support().map(|w| c_prefix(w, c)).max().unwrap_or(0);
    let mut coefficients = vec![FreeElement::zero(); top + 1];
    let mut scalar_slots = vec![Rational::zero(); top + 1];
    let c_el = FreeElement::letter(c);
    let mut rest = f.clone();
    while let Some((w, coef)) = rest
        .terms()
        .max_by(|x, y| c_prefix(x.0, c).cmp(&c_prefix(y.0, c)).then_with(|| y.0.cmp(x.0)))
        .map(|(w, x)| (w.clone(), x.clone()))
    {
        let n = c_prefix(&w, c);
        let v = w.slice(n, w.len());
        let share = coef / Rational::from_integer(factorial(n));
        if v.is_empty() {
            scalar_slots[n] += &share;
        } else {
            coefficients[n].add_term(v.clone(), share.clone());
        }
        let peeled = shuffle(&shuffle_power(&c_el, n), &FreeElement::word(v));
        rest -= &peeled.scale(&share);
    }
    while coefficients.len() > 1
        && coefficients.last().is_some_and(FreeElement::is_zero)
        && scalar_slots.last().is_some_and(Zero::is_zero)
    {
        coefficients.pop();
        scalar_slots.pop();
    }
    SeriesInC {
        c,
        coefficients,
        scalar_slots,
    }
}

/// Image of one derived letter: `(1/n) ≺(ac^n)` for `n > 0`, and `a` itself
/// for `n = 0`.
pub fn j_c_letter(x: XLetter, c: Letter) -> Result<FreeElement> {
    check_base(x.base, c)?;
    let integral = eval_tree(&x.tree(c), Product::HalfShuffle);
    Ok(if x.height == 0 {
        integral
    } else {
        integral.scale(&rational(1, x.height as i64))
    })
}

/// The half shuffle homomorphism on an `X`-word: `J(x u) = J(x) ≺ J(u)`,
/// `J(e) = e`.
pub fn j_c(word: &[XLetter], c: Letter) -> Result<FreeElement> {
    let Some((last, init)) = word.split_last() else {
        return Ok(FreeElement::unit());
    };
    let mut acc = j_c_letter(*last, c)?;
    for x in init.iter().rev() {
        acc = half_shuffle(&j_c_letter(*x, c)?, &acc);
    }
    Ok(acc)
}

/// A tree over the derived alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum XTree {
    Letter(XLetter),
    Node(Box<XTree>, Box<XTree>),
}

impl XTree {
    /// The magma map back into trees over the original alphabet.
    pub fn to_tree(&self, c: Letter) -> Tree {
        match self {
            XTree::Letter(x) => x.tree(c),
            XTree::Node(l, r) => Tree::node(l.to_tree(c), r.to_tree(c)),
        }
    }
}

impl fmt::Display for XTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XTree::Letter(x) => write!(f, "<{x}>"),
            XTree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// Reads `t` as a tree over `X`: every `c` must extend a left comb rooted
/// at another letter. `None` if some `c` is not attached that way.
pub fn parse_x_tree(t: &Tree, c: Letter) -> Option<XTree> {
    match t.children() {
        None => {
            let a = t.as_leaf()?;
            (a != c).then_some(XTree::Letter(XLetter::new(a, 0)))
        }
        Some((l, r)) => {
            let left = parse_x_tree(l, c)?;
            if r.as_leaf() == Some(c) {
                match left {
                    XTree::Letter(x) => Some(XTree::Letter(XLetter::new(x.base, x.height + 1))),
                    XTree::Node(..) => None,
                }
            } else {
                Some(XTree::Node(Box::new(left), Box::new(parse_x_tree(r, c)?)))
            }
        }
    }
}

/// Hall trees other than the leaf `c` that fail to read as trees over `X`,
/// plus the leaf `c` itself if it is not the greatest Hall tree. `c` is the
/// greatest letter.
pub fn elimination_violations(hall: &HallSet) -> Vec<Tree> {
    let c = Letter::of(hall.alphabet());
    let c_tree = Tree::leaf(c);
    let mut bad: Vec<Tree> = hall
        .trees()
        .filter(|t| **t != c_tree)
        .filter(|t| match parse_x_tree(t, c) {
            Some(x) => x.to_tree(c) != **t,
            None => true,
        })
        .cloned()
        .collect();
    if hall.trees().any(|t| hall.compare(t, &c_tree).is_gt()) {
        bad.push(c_tree);
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall::{generate_hall, HallOrder};

    fn el(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    fn l(i: usize) -> Letter {
        Letter::of(i)
    }

    #[test]
    fn closed_form_examples() {
        let f = closed_forms(l(1), 0, l(3)).unwrap();
        assert_eq!((f.lie.clone(), f.integral.clone()), (el("1"), el("1")));
        assert_eq!(f.area, el("1"));
        let f = closed_forms(l(1), 2, l(3)).unwrap();
        assert_eq!(f.lie, el("133 - 2*313 + 331"));
        assert_eq!(f.integral, el("2*133"));
        assert_eq!(f.area, el("2*133 - 2*313"));
        let f = closed_forms(l(1), 1, l(3)).unwrap();
        assert_eq!(f.lie, el("13 - 31"));
        assert_eq!(f.area, el("13 - 31"));
        assert!(closed_forms(l(3), 1, l(3)).is_err());
    }

    #[test]
    fn closed_forms_match_tree_evaluation() {
        for (a, c) in [(1, 2), (2, 3), (3, 1)] {
            for n in 0..=6 {
                let f = closed_forms(l(a), n, l(c)).unwrap();
                let t = XLetter::new(l(a), n).tree(l(c));
                assert_eq!(f.lie, eval_tree(&t, Product::Lie), "{t}");
                assert_eq!(f.integral, eval_tree(&t, Product::HalfShuffle), "{t}");
                assert_eq!(f.area, eval_tree(&t, Product::Area), "{t}");
            }
        }
    }

    #[test]
    fn acn_relations() {
        for n in 1..=6 {
            assert!(acn_relation_check(l(1), n, l(2)).unwrap().is_zero(), "n = {n}");
        }
        assert!(acn_relation_check(l(1), 0, l(2)).is_err());
    }

    #[test]
    fn z_membership() {
        assert!(is_in_z(&el("12"), l(2)));
        assert!(!is_in_z(&el("21"), l(2)));
        assert!(!is_in_z(&el("12 + 21"), l(2)));
        assert!(!is_in_z(&el("12 + e"), l(2)));
    }

    #[test]
    fn decomposition_examples() {
        let s = decompose_series(&el("21"), l(2));
        assert_eq!(s.coefficients, [el("-12"), el("1")]);
        let s = decompose_series(&el("12"), l(2));
        assert_eq!(s.coefficients, [el("12")]);
        let s = decompose_series(&el("22"), l(2));
        assert_eq!(s.coefficients, [el("0"), el("0"), el("0")]);
        assert_eq!(s.scalar_slots, [rational(0, 1), rational(0, 1), rational(1, 2)]);
        let s = decompose_series(&el("3*e"), l(2));
        assert_eq!(s.scalar_slots, [rational(3, 1)]);
    }

    #[test]
    fn decomposition_reconstructs_words() {
        for d in [2, 3] {
            let c = l(d);
            for w in Word::all_up_to(d, 5) {
                let f = FreeElement::word(w.clone());
                let s = decompose_series(&f, c);
                assert!(s.all_in_z(), "{w}");
                assert_eq!(s.reconstruct(), f, "{w}");
            }
        }
    }

    #[test]
    fn j_c_examples() {
        let c = l(3);
        assert_eq!(j_c(&[XLetter::new(l(1), 2)], c).unwrap(), el("133"));
        assert_eq!(j_c(&[XLetter::new(l(1), 0)], c).unwrap(), el("1"));
        let word = [XLetter::new(l(1), 1), XLetter::new(l(2), 0)];
        assert_eq!(j_c(&word, c).unwrap(), half_shuffle(&el("13"), &el("2")));
        assert_eq!(j_c(&word, c).unwrap(), el("132 + 123"));
        assert!(is_in_z(&j_c(&word, c).unwrap(), c));
        assert_eq!(j_c(&[], c).unwrap(), el("e"));
    }

    #[test]
    fn x_letter_text() {
        let x: XLetter = "1:2".parse().unwrap();
        assert_eq!(x, XLetter::new(l(1), 2));
        assert_eq!(x.to_string(), "1:2");
        assert_eq!(parse_x_word("1:1, 2:0").unwrap().len(), 2);
        assert!("1".parse::<XLetter>().is_err());
    }

    #[test]
    fn hall_trees_read_over_x() {
        for d in [2, 3] {
            let h = generate_hall(d, HallOrder::Lyndon, 5).unwrap();
            assert!(elimination_violations(&h).is_empty());
        }
        let t: Tree = "((1,3),(2,3))".parse().unwrap();
        let x = parse_x_tree(&t, l(3)).unwrap();
        assert_eq!(x.to_string(), "(<1:1>,<2:1>)");
        assert!(parse_x_tree(&"(1,(2,3))".parse().unwrap(), l(2)).is_none());
    }
}

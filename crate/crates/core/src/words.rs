//! Letters, words, exact rational coefficients and finitely supported linear
//! combinations of words.

use std::cmp::Ordering;
use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::{Error, Result};

/// Exact arbitrary precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `p/q`, including `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A letter of the alphabet `{1, ..., d}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u8);

impl Letter {
    pub fn new(index: usize) -> Result<Self> {
        if (1..=255).contains(&index) {
            Ok(Letter(index as u8))
        } else {
            Err(Error::InvalidLetter(index))
        }
    }

    /// Panics on indices outside `1..=255`.
    pub fn of(index: usize) -> Self {
        Self::new(index).expect("letter index")
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// All letters of an alphabet of size `d`.
    pub fn alphabet(d: usize) -> impl Iterator<Item = Letter> + Clone {
        (1..=d.min(255)).map(Letter::of)
    }

    pub fn check(self, d: usize) -> Result<Self> {
        if self.index() <= d {
            Ok(self)
        } else {
            Err(Error::LetterOutsideAlphabet {
                letter: self.index(),
                alphabet: d,
            })
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) type Letters = SmallVec<[Letter; 16]>;

/// A word; the empty word is `e`.
///
/// Words are ordered by length first, then lexicographically by letter.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub(crate) Letters);

impl Word {
    pub fn empty() -> Self {
        Word(Letters::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn letter(a: Letter) -> Self {
        Word(smallvec::smallvec![a])
    }

    /// Builds a word from letter indices; panics on an invalid index.
    pub fn from_indices(indices: &[usize]) -> Self {
        Word(indices.iter().map(|&i| Letter::of(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    /// Splits `a·v` into the first letter and the rest.
    pub fn split_first(&self) -> Option<(Letter, Word)> {
        self.0
            .split_first()
            .map(|(a, rest)| (*a, Word(rest.iter().copied().collect())))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn prepend(&self, a: Letter) -> Word {
        let mut letters = Letters::with_capacity(self.len() + 1);
        letters.push(a);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].iter().copied().collect())
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }

    /// Alphabetical comparison (a proper prefix is smaller), as opposed to the
    /// length-first [`Ord`] used for canonical term ordering.
    pub fn cmp_lex(&self, other: &Word) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// All words over `d` letters of exactly length `n`, in canonical order.
    pub fn all_of_length(d: usize, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|w| {
                    Letter::alphabet(d).map(move |a| {
                        let mut w = w.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// All words over `d` letters of length `0..=n`.
    pub fn all_up_to(d: usize, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| Word::all_of_length(d, k)).collect()
    }
}

/// The juxtaposition `uv`.
pub fn concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Index<usize> for Word {
    type Output = Letter;
    fn index(&self, i: usize) -> &Letter {
        &self.0[i]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        if self.0.iter().all(|a| a.index() <= 9) {
            for a in &self.0 {
                write!(f, "{a}")?;
            }
        } else {
            for (i, a) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// `e` is the empty word; otherwise digits (`12321`) or comma separated
    /// indices (`1,12,3`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        let bad = || Error::Parse(format!("invalid word {s:?}"));
        if s.contains(',') {
            s.split(',')
                .map(|p| {
                    let i: usize = p.trim().parse().map_err(|_| bad())?;
                    Letter::new(i)
                })
                .collect::<Result<Letters>>()
                .map(Word)
        } else {
            s.chars()
                .map(|c| {
                    let i = c.to_digit(10).ok_or_else(bad)? as usize;
                    Letter::new(i)
                })
                .collect::<Result<Letters>>()
                .map(Word)
        }
    }
}

/// A finite linear combination of words with rational coefficients.
///
/// The representation is canonical: no stored coefficient is zero, so two
/// elements are equal exactly when their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeElement {
    terms: BTreeMap<Word, Rational>,
}

impl FreeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word `e`.
    pub fn unit() -> Self {
        Self::word(Word::empty())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn letter(a: Letter) -> Self {
        Self::word(Word::letter(a))
    }

    pub fn term(w: Word, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    /// Builds from terms with distinct words.
    pub(crate) fn from_map<I: IntoIterator<Item = (Word, Rational)>>(map: I) -> Self {
        FreeElement {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Builds from terms already sorted in word order with distinct words
    /// and nonzero coefficients.
    pub(crate) fn from_sorted<I: IntoIterator<Item = (Word, Rational)>>(terms: I) -> Self {
        FreeElement {
            terms: terms.into_iter().collect(),
        }
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of words in the support.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// `⟨f, e⟩`.
    pub fn empty_coeff(&self) -> Rational {
        self.coeff(&Word::empty())
    }

    /// Largest word length in the support, `None` for zero.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FreeElement {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// `Σ_w f_w g_w`; symmetric and bilinear.
    pub fn pairing(&self, other: &FreeElement) -> Rational {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .terms
            .iter()
            .filter_map(|(w, c)| large.terms.get(w).map(|d| c * d))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// `f − ⟨f, e⟩e`.
    pub fn project_positive(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Word::empty());
        out
    }

    pub fn is_positive(&self) -> bool {
        !self.terms.contains_key(&Word::empty())
    }

    /// Drops every term on a word longer than `n`.
    pub fn truncate(&self, n: usize) -> Self {
        FreeElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous component of degree `n`.
    pub fn component(&self, n: usize) -> Self {
        FreeElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a map to every word, keeping coefficients.
    pub fn map_words<F: FnMut(&Word) -> Word>(&self, mut f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.terms.keys().filter_map(Word::max_letter).max()
    }
}

/// See [`FreeElement::pairing`].
pub fn pairing(f: &FreeElement, g: &FreeElement) -> Rational {
    f.pairing(g)
}

/// See [`FreeElement::project_positive`].
pub fn project_positive(f: &FreeElement) -> FreeElement {
    f.project_positive()
}

/// See [`FreeElement::truncate`].
pub fn truncate(f: &FreeElement, n: usize) -> FreeElement {
    f.truncate(n)
}

impl From<Word> for FreeElement {
    fn from(w: Word) -> Self {
        FreeElement::word(w)
    }
}

impl From<Letter> for FreeElement {
    fn from(a: Letter) -> Self {
        FreeElement::letter(a)
    }
}

impl AddAssign<&FreeElement> for FreeElement {
    fn add_assign(&mut self, rhs: &FreeElement) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&FreeElement> for FreeElement {
    fn sub_assign(&mut self, rhs: &FreeElement) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl Add<&FreeElement> for &FreeElement {
    type Output = FreeElement;
    fn add(self, rhs: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for FreeElement {
    type Output = FreeElement;
    fn add(mut self, rhs: FreeElement) -> FreeElement {
        self += &rhs;
        self
    }
}

impl Sub<&FreeElement> for &FreeElement {
    type Output = FreeElement;
    fn sub(self, rhs: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for FreeElement {
    type Output = FreeElement;
    fn sub(mut self, rhs: FreeElement) -> FreeElement {
        self -= &rhs;
        self
    }
}

impl Neg for &FreeElement {
    type Output = FreeElement;
    fn neg(self) -> FreeElement {
        FreeElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Neg for FreeElement {
    type Output = FreeElement;
    fn neg(self) -> FreeElement {
        -&self
    }
}

impl Mul<&Rational> for &FreeElement {
    type Output = FreeElement;
    fn mul(self, c: &Rational) -> FreeElement {
        self.scale(c)
    }
}

impl Mul<Rational> for FreeElement {
    type Output = FreeElement;
    fn mul(self, c: Rational) -> FreeElement {
        self.scale(&c)
    }
}

impl fmt::Display for FreeElement {
    /// `12 - 2*21 + 3/2*e`; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                if a.is_integer() {
                    write!(f, "{}*", a.numer())?;
                } else {
                    write!(f, "{}/{}*", a.numer(), a.denom())?;
                }
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeElement({self})")
    }
}

impl FromStr for FreeElement {
    type Err = Error;

    /// Parses sums like `12 - 2*21 + 3/2*e`, `-1,10`, or `0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(FreeElement::zero());
        }
        let mut out = FreeElement::zero();
        let mut sign = 1i64;
        let mut rest = s;
        loop {
            rest = rest.trim_start();
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
                continue;
            }
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
                continue;
            }
            let end = rest
                .char_indices()
                .skip(1)
                .find(|&(_, ch)| ch == '+' || ch == '-')
                .map_or(rest.len(), |(i, _)| i);
            let token = rest[..end].trim();
            if token.is_empty() {
                return Err(Error::Parse(format!("invalid element {s:?}")));
            }
            let (coeff, word) = match token.split_once('*') {
                Some((c, w)) => (parse_rational(c)?, w.parse::<Word>()?),
                None => (Rational::one(), token.parse::<Word>()?),
            };
            out.add_term(word, coeff * int(sign));
            sign = 1;
            rest = &rest[end..];
            if rest.trim().is_empty() {
                break;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn concat_examples() {
        assert_eq!(concat(&w("1"), &w("2")), w("12"));
        assert_eq!(concat(&w("e"), &w("12")), w("12"));
        assert_eq!(concat(&w("12"), &w("21")), w("1221"));
        assert_eq!(w("1221").len(), 4);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&el("12 + 2*21"), &el("21")), int(2));
        assert_eq!(pairing(&el("e"), &el("e")), int(1));
        assert_eq!(pairing(&el("12 - 21"), &el("12 + 21")), int(0));
    }

    #[test]
    fn project_positive_examples() {
        assert_eq!(project_positive(&el("3*e + 12")), el("12"));
        assert_eq!(project_positive(&el("12")), el("12"));
        assert!(project_positive(&el("5*e")).is_zero());
    }

    #[test]
    fn truncate_examples() {
        assert_eq!(truncate(&el("e + 1 + 12"), 1), el("e + 1"));
        assert_eq!(truncate(&el("12"), 2), el("12"));
        assert!(truncate(&el("121"), 2).is_zero());
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let f = &el("12 + 21") - &el("21");
        assert_eq!(f, el("12"));
        assert_eq!(f.len(), 1);
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn word_order_is_length_first() {
        assert!(w("2") < w("11"));
        assert!(w("12") < w("21"));
        assert!(w("e") < w("1"));
        assert_eq!(w("2").cmp_lex(&w("11")), Ordering::Greater);
        assert_eq!(w("1").cmp_lex(&w("12")), Ordering::Less);
    }

    #[test]
    fn word_text_format() {
        assert_eq!(w("12321").to_string(), "12321");
        assert_eq!(w("1,12,3").to_string(), "1,12,3");
        assert_eq!(w("1,12,3").len(), 3);
        assert_eq!(w("e").to_string(), "e");
        assert!("1a".parse::<Word>().is_err());
        assert!("0".parse::<Word>().is_err());
    }

    #[test]
    fn element_text_roundtrip() {
        for s in ["12 - 2*21 + 3/2*e", "-1", "0", "e + 1,10"] {
            let f = el(s);
            assert_eq!(el(&f.to_string()), f, "{s}");
        }
        assert_eq!(el("3/2*e - 1").to_string(), "3/2*e - 1");
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(Word::all_of_length(2, 3).len(), 8);
        assert_eq!(Word::all_up_to(2, 3).len(), 15);
        let ws = Word::all_up_to(3, 2);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("3/6").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(format_rational(&int(2)), "2/1");
        assert!(parse_rational("1/0").is_err());
    }
}

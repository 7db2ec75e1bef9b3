//! Hall sets under a choice of ancestral order, Hall word recognition,
//! decreasing factorization of words, Lazard decompositions and Witt
//! dimensions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::magma::Tree;
use crate::words::{Letter, Rational, Word};
use crate::{Error, Result};

/// Ancestral orders shipped with the crate: every composite tree
/// `t = (t', t'')` of the Hall set satisfies `t < t''`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum HallOrder {
    /// Foliages compared alphabetically; the Hall trees are the standard
    /// bracketings of Lyndon words.
    #[default]
    Lyndon,
    /// Larger degree first, then letters by index and composite trees
    /// lexicographically on `(left, right)`.
    DegreeLex,
}

impl HallOrder {
    pub fn compare(self, a: &Tree, b: &Tree) -> Ordering {
        match self {
            HallOrder::Lyndon => a.foliage().cmp_lex(&b.foliage()),
            HallOrder::DegreeLex => degree_lex(a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HallOrder::Lyndon => "lyndon",
            HallOrder::DegreeLex => "degree-lex",
        }
    }
}

fn degree_lex(a: &Tree, b: &Tree) -> Ordering {
    b.degree().cmp(&a.degree()).then_with(|| match (a, b) {
        (Tree::Leaf(x), Tree::Leaf(y)) => x.cmp(y),
        _ => {
            let (a1, a2) = a.children().expect("same degree > 1");
            let (b1, b2) = b.children().expect("same degree > 1");
            degree_lex(a1, b1).then_with(|| degree_lex(a2, b2))
        }
    })
}

impl FromStr for HallOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lyndon" => Ok(HallOrder::Lyndon),
            "degree-lex" | "esig" => Ok(HallOrder::DegreeLex),
            other => Err(Error::Parse(format!("unknown Hall order {other:?}"))),
        }
    }
}

impl fmt::Display for HallOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All Hall trees up to a degree bound, with recognition indexes.
#[derive(Clone, Debug)]
pub struct HallSet {
    order: HallOrder,
    alphabet: usize,
    max_degree: usize,
    by_degree: Vec<Vec<Tree>>,
    word_index: HashMap<Word, Tree>,
    position: HashMap<Tree, usize>,
}

impl HallSet {
    pub fn generate(alphabet: usize, order: HallOrder, max_degree: usize) -> Result<Self> {
        if alphabet == 0 || alphabet > 255 {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must be in 1..=255, got {alphabet}"
            )));
        }
        if max_degree == 0 {
            return Err(Error::InvalidArgument("max degree must be at least 1".into()));
        }
        let mut by_degree: Vec<Vec<Tree>> = vec![Vec::new()];
        by_degree.push(Letter::alphabet(alphabet).map(Tree::Leaf).collect());
        for n in 2..=max_degree {
            let mut level = Vec::new();
            for p in 1..n {
                for h1 in &by_degree[p] {
                    for h2 in &by_degree[n - p] {
                        if is_hall_pair(order, h1, h2) {
                            level.push(Tree::node(h1.clone(), h2.clone()));
                        }
                    }
                }
            }
            level.sort_by(|a, b| order.compare(a, b));
            by_degree.push(level);
        }
        let mut all: Vec<&Tree> = by_degree.iter().flatten().collect();
        all.sort_by(|a, b| order.compare(a, b));
        let position = all.iter().enumerate().map(|(i, t)| ((*t).clone(), i)).collect();
        let word_index = by_degree.iter().flatten().map(|t| (t.foliage(), t.clone())).collect();
        Ok(HallSet {
            order,
            alphabet,
            max_degree,
            by_degree,
            word_index,
            position,
        })
    }

    pub fn order(&self) -> HallOrder {
        self.order
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Hall trees of degree `n`, increasing in the Hall order.
    pub fn of_degree(&self, n: usize) -> &[Tree] {
        self.by_degree.get(n).map_or(&[], Vec::as_slice)
    }

    /// All Hall trees by increasing degree, each degree in Hall order.
    pub fn trees(&self) -> impl Iterator<Item = &Tree> {
        self.by_degree.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }

    pub fn contains(&self, t: &Tree) -> bool {
        self.position.contains_key(t)
    }

    /// Index of `t` in the Hall order over the whole set.
    pub fn position(&self, t: &Tree) -> Option<usize> {
        self.position.get(t).copied()
    }

    pub fn compare(&self, a: &Tree, b: &Tree) -> Ordering {
        match (self.position(a), self.position(b)) {
            (Some(x), Some(y)) => x.cmp(&y),
            _ => self.order.compare(a, b),
        }
    }

    pub fn is_hall_word(&self, w: &Word) -> bool {
        self.word_index.contains_key(w)
    }

    /// The unique Hall tree with foliage `w`.
    pub fn tree_of_word(&self, w: &Word) -> Result<Tree> {
        self.word_index
            .get(w)
            .cloned()
            .ok_or_else(|| Error::NotHallWord(w.to_string()))
    }

    /// Unique decreasing factorization of `w` into Hall words, grouped into
    /// `(tree, multiplicity)` runs; the trees strictly decrease.
    pub fn factorize(&self, w: &Word) -> Result<Vec<(Tree, usize)>> {
        if w.is_empty() {
            return Ok(Vec::new());
        }
        let flat = match self.order {
            HallOrder::Lyndon => {
                let mut flat = Vec::new();
                for (factor, k) in lyndon_factorize(w)? {
                    if factor.len() > self.max_degree {
                        return Err(Error::DegreeBoundExceeded {
                            word: w.to_string(),
                            needed: factor.len(),
                            bound: self.max_degree,
                        });
                    }
                    let t = self.tree_of_word(&factor)?;
                    flat.extend(std::iter::repeat_n(t, k));
                }
                flat
            }
            HallOrder::DegreeLex => {
                self.search_factorizations(w, 1)
                    .pop()
                    .ok_or_else(|| Error::DegreeBoundExceeded {
                        word: w.to_string(),
                        needed: self.max_degree + 1,
                        bound: self.max_degree,
                    })?
            }
        };
        Ok(group_runs(flat))
    }

    /// Every factorization of `w` into a non-increasing sequence of Hall
    /// words of this set, stopping after `limit` results.
    pub fn search_factorizations(&self, w: &Word, limit: usize) -> Vec<Vec<Tree>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.search(w, 0, &mut current, &mut out, limit);
        out
    }

    fn search(&self, w: &Word, start: usize, current: &mut Vec<Tree>, out: &mut Vec<Vec<Tree>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if start == w.len() {
            out.push(current.clone());
            return;
        }
        let longest = self.max_degree.min(w.len() - start);
        for len in 1..=longest {
            let Some(t) = self.word_index.get(&w.slice(start, start + len)) else {
                continue;
            };
            if let Some(prev) = current.last() {
                if self.compare(t, prev) == Ordering::Greater {
                    continue;
                }
            }
            current.push(t.clone());
            self.search(w, start + len, current, out, limit);
            current.pop();
        }
    }

    /// Composite trees `h = (h', h'')` for which, writing `f(h) = a·v`, the
    /// smallest factor of `v` is not `h''`. Empty for a genuine Hall set.
    pub fn last_factor_violations(&self) -> Vec<Tree> {
        self.trees()
            .filter(|h| {
                let Some((_, right)) = h.children() else {
                    return false;
                };
                let (_, v) = h.foliage().split_first().expect("non-empty foliage");
                match self.factorize(&v) {
                    Ok(factors) => factors.last().map(|(t, _)| t) != Some(right),
                    Err(_) => true,
                }
            })
            .cloned()
            .collect()
    }

    /// Tab separated listing: `degree<TAB>foliage<TAB>tree`, one per line,
    /// by increasing degree.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for t in self.trees() {
            out.push_str(&format!("{}\t{}\t{}\n", t.degree(), t.foliage(), t));
        }
        out
    }
}

fn is_hall_pair(order: HallOrder, h1: &Tree, h2: &Tree) -> bool {
    if order.compare(h1, h2) != Ordering::Less {
        return false;
    }
    match h1.right() {
        None => true,
        Some(h1r) => order.compare(h2, h1r) != Ordering::Greater,
    }
}

fn group_runs(flat: Vec<Tree>) -> Vec<(Tree, usize)> {
    let mut out: Vec<(Tree, usize)> = Vec::new();
    for t in flat {
        match out.last_mut() {
            Some((last, k)) if *last == t => *k += 1,
            _ => out.push((t, 1)),
        }
    }
    out
}

/// All Hall trees of degree at most `max_degree`.
pub fn generate_hall(alphabet: usize, order: HallOrder, max_degree: usize) -> Result<HallSet> {
    HallSet::generate(alphabet, order, max_degree)
}

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of Hall trees of degree `n` over `d` letters:
/// `(1/n) Σ_{k | n} μ(k) d^{n/k}`.
pub fn witt_dimension(d: u64, n: u64) -> u128 {
    assert!(n >= 1, "degree must be positive");
    let sum: i128 = (1..=n)
        .filter(|k| n.is_multiple_of(*k))
        .map(|k| mobius(k) as i128 * (d as i128).pow((n / k) as u32))
        .sum();
    (sum / n as i128) as u128
}

/// Chen–Fox–Lyndon factorization by Duval's algorithm: Lyndon words
/// `l_1 > l_2 > …` (alphabetically) with multiplicities.
pub fn lyndon_factorize(w: &Word) -> Result<Vec<(Word, usize)>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = w.letters();
    let n = s.len();
    let mut out: Vec<(Word, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let (mut j, mut k) = (i + 1, i);
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        let period = j - k;
        while i <= k {
            let factor = w.slice(i, i + period);
            match out.last_mut() {
                Some((last, m)) if *last == factor => *m += 1,
                _ => out.push((factor, 1)),
            }
            i += period;
        }
    }
    Ok(out)
}

/// Decreasing Hall factorization with respect to `h`.
pub fn hall_factorize(w: &Word, h: &HallSet) -> Result<Vec<(Tree, usize)>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    h.factorize(w)
}

pub fn tree_of_hall_word(w: &Word, h: &HallSet) -> Result<Tree> {
    h.tree_of_word(w)
}

/// The Lazard decomposition `h = (…((h1, h2), h2)…, h2)` (`k` copies of
/// `h2`) with `h1` a letter or `h1'' ≠ h2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lazard {
    pub h1: Tree,
    pub h2: Tree,
    pub k: usize,
    /// Lazard depth `1/k`.
    pub alpha: Rational,
    /// Accumulated depth: product of Lazard depths down the tree.
    pub accumulated: Rational,
}

/// Lazard decomposition of a composite tree; checks membership in `h`.
pub fn lazard(t: &Tree, h: &HallSet) -> Result<Lazard> {
    if !h.contains(t) {
        return Err(Error::NotHallTree(t.to_string()));
    }
    let (h1, h2, k) = lazard_parts(t).ok_or(Error::LetterHasNoLazard)?;
    Ok(Lazard {
        h1,
        h2,
        k,
        alpha: Rational::new(1.into(), (k as i64).into()),
        accumulated: accumulated_depth(t),
    })
}

fn lazard_parts(t: &Tree) -> Option<(Tree, Tree, usize)> {
    let (mut left, h2) = t.children()?;
    let mut k = 1;
    while let Some((l, r)) = left.children() {
        if r != h2 {
            break;
        }
        left = l;
        k += 1;
    }
    Some((left.clone(), h2.clone(), k))
}

/// `1/k` for a composite tree, `1` for a letter.
pub fn lazard_depth(t: &Tree) -> Rational {
    match lazard_parts(t) {
        Some((_, _, k)) => Rational::new(1.into(), (k as i64).into()),
        None => Rational::one(),
    }
}

/// Accumulated Lazard depth: `1` on letters and
/// `α_t · depth(t') · depth(t'')` on `t = (t', t'')`.
pub fn accumulated_depth(t: &Tree) -> Rational {
    match t.children() {
        None => Rational::one(),
        Some((l, r)) => lazard_depth(t) * accumulated_depth(l) * accumulated_depth(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::rational;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn foliages(h: &HallSet) -> Vec<String> {
        h.trees().map(|t| t.foliage().to_string()).collect()
    }

    #[test]
    fn lyndon_hall_set_examples() {
        let h = generate_hall(2, HallOrder::Lyndon, 3).unwrap();
        let mut f = foliages(&h);
        f.sort();
        assert_eq!(f, ["1", "112", "12", "122", "2"]);
        assert_eq!((1..=3).map(|n| h.of_degree(n).len()).collect::<Vec<_>>(), [2, 1, 2]);
        let h1 = generate_hall(2, HallOrder::Lyndon, 1).unwrap();
        assert_eq!(foliages(&h1), ["1", "2"]);
        let h3 = generate_hall(3, HallOrder::Lyndon, 2).unwrap();
        let deg2: Vec<String> = h3.of_degree(2).iter().map(|t| t.foliage().to_string()).collect();
        assert_eq!(deg2, ["12", "13", "23"]);
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_dimension(2, 1), 2);
        assert_eq!(witt_dimension(2, 6), 9);
        assert_eq!(witt_dimension(3, 2), 3);
        assert_eq!(witt_dimension(2, 10), 99);
    }

    #[test]
    fn lyndon_factorize_examples() {
        let got = lyndon_factorize(&w("233212222111")).unwrap();
        let got: Vec<(String, usize)> = got.iter().map(|(x, k)| (x.to_string(), *k)).collect();
        assert_eq!(
            got,
            [("233".into(), 1), ("2".into(), 1), ("12222".into(), 1), ("1".into(), 3)]
        );
        assert_eq!(lyndon_factorize(&w("12")).unwrap(), [(w("12"), 1)]);
        assert_eq!(lyndon_factorize(&w("21")).unwrap(), [(w("2"), 1), (w("1"), 1)]);
        assert_eq!(lyndon_factorize(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn hall_factorize_examples() {
        let ly = generate_hall(2, HallOrder::Lyndon, 4).unwrap();
        let dl = generate_hall(2, HallOrder::DegreeLex, 4).unwrap();
        assert_eq!(hall_factorize(&w("12"), &ly).unwrap(), [(t("(1,2)"), 1)]);
        assert_eq!(hall_factorize(&w("11"), &ly).unwrap(), [(t("1"), 2)]);
        assert_eq!(hall_factorize(&w("11"), &dl).unwrap(), [(t("1"), 2)]);
        assert_eq!(hall_factorize(&w("21"), &dl).unwrap(), [(t("2"), 1), (t("1"), 1)]);
        assert_eq!(dl.search_factorizations(&w("21"), 10).len(), 1);
        let small = generate_hall(2, HallOrder::Lyndon, 2).unwrap();
        assert!(matches!(
            hall_factorize(&w("122"), &small),
            Err(Error::DegreeBoundExceeded { needed: 3, .. })
        ));
    }

    #[test]
    fn tree_of_hall_word_examples() {
        let h = generate_hall(2, HallOrder::Lyndon, 5).unwrap();
        assert_eq!(tree_of_hall_word(&w("122"), &h).unwrap(), t("((1,2),2)"));
        assert_eq!(tree_of_hall_word(&w("12222"), &h).unwrap(), t("((((1,2),2),2),2)"));
        assert_eq!(tree_of_hall_word(&w("1"), &h).unwrap(), t("1"));
        assert!(matches!(tree_of_hall_word(&w("21"), &h), Err(Error::NotHallWord(_))));
    }

    #[test]
    fn lazard_examples() {
        let h2 = generate_hall(2, HallOrder::Lyndon, 5).unwrap();
        let lz = lazard(&t("(1,2)"), &h2).unwrap();
        assert_eq!((lz.h1, lz.h2, lz.k), (t("1"), t("2"), 1));
        assert_eq!((lz.alpha, lz.accumulated), (rational(1, 1), rational(1, 1)));

        let lz = lazard(&t("((((1,2),2),2),2)"), &h2).unwrap();
        assert_eq!((lz.h1, lz.h2, lz.k), (t("1"), t("2"), 4));
        assert_eq!((lz.alpha, lz.accumulated), (rational(1, 4), rational(1, 24)));

        let h3 = generate_hall(3, HallOrder::Lyndon, 3).unwrap();
        let lz = lazard(&t("((2,3),3)"), &h3).unwrap();
        assert_eq!((lz.h1, lz.h2, lz.k), (t("2"), t("3"), 2));
        assert_eq!((lz.alpha, lz.accumulated), (rational(1, 2), rational(1, 2)));

        assert_eq!(lazard(&t("1"), &h2), Err(Error::LetterHasNoLazard));
        assert_eq!(accumulated_depth(&t("1")), rational(1, 1));
        assert!(matches!(lazard(&t("(2,1)"), &h2), Err(Error::NotHallTree(_))));
    }

    #[test]
    fn left_comb_depth_is_inverse_factorial() {
        let mut fact = 1i64;
        for n in 1..=7 {
            fact *= n;
            let comb = Tree::left_comb(t("1"), &t("2"), n as usize);
            assert_eq!(accumulated_depth(&comb), rational(1, fact));
        }
    }

    #[test]
    fn lyndon_hall_words_are_lyndon() {
        let h = generate_hall(3, HallOrder::Lyndon, 5).unwrap();
        for tree in h.trees() {
            let f = tree.foliage();
            assert_eq!(lyndon_factorize(&f).unwrap(), [(f.clone(), 1)], "{tree}");
        }
    }

    #[test]
    fn degree_lex_order_is_ancestral() {
        let h = generate_hall(3, HallOrder::DegreeLex, 5).unwrap();
        for tree in h.trees() {
            if let Some((_, r)) = tree.children() {
                assert_eq!(h.compare(tree, r), Ordering::Less);
            }
        }
    }

    #[test]
    fn listing_format() {
        let h = generate_hall(2, HallOrder::Lyndon, 3).unwrap();
        let listing = h.listing();
        assert_eq!(listing.lines().count(), 5);
        assert!(listing.contains("3\t122\t((1,2),2)\n"));
    }

    #[test]
    fn smallest_factor_of_tail_is_right_child() {
        for order in [HallOrder::Lyndon, HallOrder::DegreeLex] {
            let h = generate_hall(3, order, 5).unwrap();
            assert!(h.last_factor_violations().is_empty(), "{order}");
        }
    }
}

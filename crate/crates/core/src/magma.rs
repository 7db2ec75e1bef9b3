//! Binary planar rooted trees with letter-labelled leaves (the free magma),
//! the foliage map and evaluation of trees under a bilinear product.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::products::{area, half_shuffle, lie_bracket};
use crate::words::{FreeElement, Letter, Word};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf(Letter),
    Node(Arc<(Tree, Tree)>),
}

impl Tree {
    pub fn leaf(a: Letter) -> Self {
        Tree::Leaf(a)
    }

    pub fn node(left: Tree, right: Tree) -> Self {
        Tree::Node(Arc::new((left, right)))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<Letter> {
        match self {
            Tree::Leaf(a) => Some(*a),
            Tree::Node(_) => None,
        }
    }

    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        match self {
            Tree::Leaf(_) => None,
            Tree::Node(n) => Some((&n.0, &n.1)),
        }
    }

    pub fn left(&self) -> Option<&Tree> {
        self.children().map(|c| c.0)
    }

    pub fn right(&self) -> Option<&Tree> {
        self.children().map(|c| c.1)
    }

    pub fn degree(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(n) => n.0.degree() + n.1.degree(),
        }
    }

    /// Leaf labels read left to right.
    pub fn foliage(&self) -> Word {
        let mut w = Word::empty();
        self.push_foliage(&mut w);
        w
    }

    fn push_foliage(&self, w: &mut Word) {
        match self {
            Tree::Leaf(a) => w.push(*a),
            Tree::Node(n) => {
                n.0.push_foliage(w);
                n.1.push_foliage(w);
            }
        }
    }

    /// The left comb `(…((t, s), s)…, s)` with `k` copies of `s`.
    pub fn left_comb(t: Tree, s: &Tree, k: usize) -> Tree {
        (0..k).fold(t, |acc, _| Tree::node(acc, s.clone()))
    }

    fn cmp_shape(&self, other: &Tree) -> Ordering {
        match (self, other) {
            (Tree::Leaf(a), Tree::Leaf(b)) => a.cmp(b),
            (Tree::Leaf(_), Tree::Node(_)) => Ordering::Less,
            (Tree::Node(_), Tree::Leaf(_)) => Ordering::Greater,
            (Tree::Node(x), Tree::Node(y)) => {
                x.0.degree()
                    .cmp(&y.0.degree())
                    .then_with(|| x.0.cmp_shape(&y.0))
                    .then_with(|| x.1.cmp_shape(&y.1))
            }
        }
    }
}

/// `foliage(t)`.
pub fn foliage(t: &Tree) -> Word {
    t.foliage()
}

/// Canonical order: degree, then foliage, then shape.
impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.foliage().cmp(&other.foliage()))
            .then_with(|| self.cmp_shape(other))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(a) => write!(f, "{a}"),
            Tree::Node(n) => write!(f, "({},{})", n.0, n.1),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree{self}")
    }
}

impl FromStr for Tree {
    type Err = Error;

    /// `(((1,2),2),2)`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_tree(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        Ok(tree)
    }
}

fn parse_tree(chars: &[char], pos: &mut usize) -> Result<Tree> {
    let err = |msg: &str, at: usize| Error::Parse(format!("{msg} at offset {at}"));
    match chars.get(*pos) {
        Some('(') => {
            *pos += 1;
            let left = parse_tree(chars, pos)?;
            if chars.get(*pos) != Some(&',') {
                return Err(err("expected ','", *pos));
            }
            *pos += 1;
            let right = parse_tree(chars, pos)?;
            if chars.get(*pos) != Some(&')') {
                return Err(err("expected ')'", *pos));
            }
            *pos += 1;
            Ok(Tree::node(left, right))
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let digits: String = chars[start..*pos].iter().collect();
            let index: usize = digits.parse().map_err(|_| err("bad letter", start))?;
            Ok(Tree::Leaf(Letter::new(index)?))
        }
        _ => Err(err("expected '(' or a letter", *pos)),
    }
}

impl Serialize for Tree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        match self {
            Tree::Leaf(a) => map.serialize_entry("leaf", &a.index())?,
            Tree::Node(n) => map.serialize_entry("node", &[&n.0, &n.1])?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(rename_all = "lowercase", deny_unknown_fields)]
        enum Repr {
            Leaf(usize),
            Node(Box<(Tree, Tree)>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Leaf(k) => Letter::new(k).map(Tree::Leaf).map_err(de::Error::custom),
            Repr::Node(b) => Ok(Tree::node(b.0, b.1)),
        }
    }
}

/// The bilinear products a tree can be evaluated under.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Product {
    /// Lie bracket `[t]`.
    Lie,
    /// Half shuffle `≺(t)`; the Hall integral of a Hall tree.
    HalfShuffle,
    /// Area; the iterated area `𝔄(t)`.
    Area,
}

impl Product {
    pub fn apply(self, f: &FreeElement, g: &FreeElement) -> FreeElement {
        match self {
            Product::Lie => lie_bracket(f, g),
            Product::HalfShuffle => half_shuffle(f, g),
            Product::Area => area(f, g),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Product::Lie => "lie",
            Product::HalfShuffle => "half-shuffle",
            Product::Area => "area",
        }
    }
}

impl FromStr for Product {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lie" | "bracket" | "tensor-bracket" => Ok(Product::Lie),
            "half-shuffle" | "halfshuffle" | "integral" => Ok(Product::HalfShuffle),
            "area" => Ok(Product::Area),
            other => Err(Error::UnknownProduct(other.to_string())),
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluates `t` with `product` at every internal node and letters at leaves.
pub fn eval_tree(t: &Tree, product: Product) -> FreeElement {
    match t {
        Tree::Leaf(a) => FreeElement::letter(*a),
        Tree::Node(n) => product.apply(&eval_tree(&n.0, product), &eval_tree(&n.1, product)),
    }
}

/// Memoizing tree evaluator. Each instance owns its cache; create one per task.
#[derive(Default)]
pub struct Evaluator {
    cache: HashMap<(Tree, Product), FreeElement>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eval(&mut self, t: &Tree, product: Product) -> FreeElement {
        if let Tree::Leaf(a) = t {
            return FreeElement::letter(*a);
        }
        let key = (t.clone(), product);
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let (l, r) = t.children().expect("node");
        let value = product.apply(&self.eval(l, product), &self.eval(r, product));
        self.cache.insert(key, value.clone());
        value
    }

    pub fn lie(&mut self, t: &Tree) -> FreeElement {
        self.eval(t, Product::Lie)
    }

    pub fn integral(&mut self, t: &Tree) -> FreeElement {
        self.eval(t, Product::HalfShuffle)
    }

    pub fn area(&mut self, t: &Tree) -> FreeElement {
        self.eval(t, Product::Area)
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }
}

/// Every tree of degree `n` over `d` letters.
pub fn all_trees(d: usize, n: usize) -> Vec<Tree> {
    let mut by_degree: Vec<Vec<Tree>> = vec![Vec::new(), Letter::alphabet(d).map(Tree::Leaf).collect()];
    for k in 2..=n {
        let mut level = Vec::new();
        for p in 1..k {
            for l in &by_degree[p] {
                for r in &by_degree[k - p] {
                    level.push(Tree::node(l.clone(), r.clone()));
                }
            }
        }
        by_degree.push(level);
    }
    if n == 0 {
        return Vec::new();
    }
    by_degree.swap_remove(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::shuffle;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn el(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    #[test]
    fn foliage_examples() {
        assert_eq!(foliage(&t("1")).to_string(), "1");
        assert_eq!(foliage(&t("((1,2),2)")).to_string(), "122");
        assert_eq!(foliage(&t("((((1,2),2),2),2)")).to_string(), "12222");
        assert_eq!(t("((((1,2),2),2),2)").degree(), 5);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_tree(&t("(1,2)"), Product::Lie), el("12 - 21"));
        assert_eq!(eval_tree(&t("(1,2)"), Product::HalfShuffle), el("12"));
        assert_eq!(eval_tree(&t("((1,2),2)"), Product::HalfShuffle), el("2*122"));
        // area(12 - 21, 2) expanded by hand: (12-21)≺2 - 2≺(12-21)
        //   = 122+122 - (212+221) - (212 - 221) = 2*122 - 2*212
        assert_eq!(eval_tree(&t("((1,2),2)"), Product::Area), el("2*122 - 2*212"));
    }

    #[test]
    fn evaluator_matches_direct() {
        let mut ev = Evaluator::new();
        for tree in all_trees(2, 4) {
            for p in [Product::Lie, Product::HalfShuffle, Product::Area] {
                assert_eq!(ev.eval(&tree, p), eval_tree(&tree, p));
            }
        }
        assert!(ev.cached() > 0);
    }

    #[test]
    fn product_names() {
        assert_eq!("area".parse::<Product>().unwrap(), Product::Area);
        assert!(matches!("cup".parse::<Product>(), Err(Error::UnknownProduct(_))));
    }

    #[test]
    fn tree_text_and_json() {
        let tree = t(" ((1, 12), 3) ");
        assert_eq!(tree.to_string(), "((1,12),3)");
        let js = serde_json::to_string(&tree).unwrap();
        assert_eq!(js, r#"{"node":[{"node":[{"leaf":1},{"leaf":12}]},{"leaf":3}]}"#);
        let back: Tree = serde_json::from_str(&js).unwrap();
        assert_eq!(back, tree);
        assert!("(1,2".parse::<Tree>().is_err());
        assert!("(1,2))".parse::<Tree>().is_err());
    }

    #[test]
    fn foliage_is_a_morphism_and_evaluations_are_homogeneous() {
        let mut ev = Evaluator::new();
        for n in 1..=4 {
            for tree in all_trees(2, n) {
                if let Some((l, r)) = tree.children() {
                    assert_eq!(tree.foliage(), l.foliage().concat(&r.foliage()));
                }
                for p in [Product::Lie, Product::HalfShuffle, Product::Area] {
                    assert!(ev.eval(&tree, p).support().all(|w| w.len() == n));
                }
            }
        }
    }

    #[test]
    fn lie_evaluations_annihilate_shuffles() {
        let pieces = [el("1"), el("2 - 1"), el("12"), el("21 + 3*2")];
        for n in 2..=4 {
            for tree in all_trees(2, n) {
                let lie = eval_tree(&tree, Product::Lie);
                for f in &pieces {
                    for g in &pieces {
                        assert!(num_traits::Zero::is_zero(&shuffle(f, g).pairing(&lie)), "{tree}");
                    }
                }
            }
        }
    }

    #[test]
    fn tree_order_is_total_and_consistent() {
        let mut trees: Vec<Tree> = (1..=4).flat_map(|n| all_trees(2, n)).collect();
        trees.sort();
        for w in trees.windows(2) {
            assert_eq!(w[0].cmp(&w[1]), Ordering::Less);
        }
    }
}

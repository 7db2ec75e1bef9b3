//! PBW basis elements and their dual basis.
//!
//! For a word `ω = f(h_1)^{k_1} ⋯ f(h_n)^{k_n}` (decreasing Hall factorization)
//! the PBW element is `P_ω = [h_1]^{⊗k_1} ⊗ ⋯ ⊗ [h_n]^{⊗k_n}` and the dual
//! element is
//!
//! ```text
//! S_ω = 1/(k_1!⋯k_n!) · S_{f(h_1)}^{⧢k_1} ⧢ ⋯ ⧢ S_{f(h_n)}^{⧢k_n},   S_e = e.
//! ```
//!
//! The dual of a single Hall word can be built three ways, all exposed by
//! [`DualStrategy`] and expected to agree exactly:
//!
//! * `S_{a v} = a ⊗ S_v` (recursion on the word),
//! * `S_{f(h)} = α_h · (S_{f(h')} ≺ S_{f(h'')})` (recursion on the tree),
//! * `S_{f(h)} = 𝒜_h · ≺(h)` (accumulated Lazard depth times the Hall integral).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::hall::{accumulated_depth, lazard_depth, HallSet};
use crate::magma::{Evaluator, Tree};
use crate::products::{half_shuffle, shuffle, shuffle_power, tensor};
use crate::words::{FreeElement, Rational, Word};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DualStrategy {
    RecursiveTensor,
    HalfShuffleRecursion,
    Direct,
}

impl DualStrategy {
    pub const ALL: [DualStrategy; 3] = [
        DualStrategy::RecursiveTensor,
        DualStrategy::HalfShuffleRecursion,
        DualStrategy::Direct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DualStrategy::RecursiveTensor => "recursive-tensor",
            DualStrategy::HalfShuffleRecursion => "halfshuffle-recursion",
            DualStrategy::Direct => "direct",
        }
    }
}

impl FromStr for DualStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DualStrategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown dual strategy {s:?}")))
    }
}

/// A decreasing product of Hall trees with positive multiplicities.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct HallMonomial {
    factors: Vec<(Tree, usize)>,
}

impl HallMonomial {
    /// The monomial of a Hall factorization; `factors` must already be
    /// strictly decreasing in the Hall order.
    pub fn new(factors: Vec<(Tree, usize)>) -> Self {
        HallMonomial { factors }
    }

    pub fn checked(factors: Vec<(Tree, usize)>, hall: &HallSet) -> Result<Self> {
        for (t, k) in &factors {
            if !hall.contains(t) {
                return Err(Error::NotHallTree(t.to_string()));
            }
            if *k == 0 {
                return Err(Error::InvalidArgument("multiplicities must be positive".into()));
            }
        }
        if factors
            .windows(2)
            .any(|p| hall.compare(&p[0].0, &p[1].0) != Ordering::Greater)
        {
            return Err(Error::InvalidArgument(
                "monomial factors must strictly decrease in the Hall order".into(),
            ));
        }
        Ok(HallMonomial { factors })
    }

    pub fn factors(&self) -> &[(Tree, usize)] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(t, k)| t.degree() * k).sum()
    }

    /// The indexing word `f(h_1)^{k_1} ⋯ f(h_n)^{k_n}`.
    pub fn word(&self) -> Word {
        let mut w = Word::empty();
        for (t, k) in &self.factors {
            let f = t.foliage();
            for _ in 0..*k {
                w = w.concat(&f);
            }
        }
        w
    }

    fn sort_key(&self) -> (usize, Vec<(Word, usize)>) {
        (
            self.degree(),
            self.factors.iter().map(|(t, k)| (t.foliage(), *k)).collect(),
        )
    }
}

impl Ord for HallMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for HallMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HallMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("e");
        }
        for (i, (t, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⧢ ")?;
            }
            write!(f, "≺{t}")?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// Linear combination of dual basis elements `S_ω`, each indexed by the
/// Hall monomial of `ω`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HallPoly {
    terms: BTreeMap<HallMonomial, Rational>,
}

impl HallPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: HallMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HallMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &HallMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The same element as an honest polynomial in Hall integrals: each
    /// `c · S_ω` becomes `c · 𝒜-normalizer · ≺(h_1)^{⧢k_1} ⧢ ⋯`.
    pub fn integral_coefficients(&self) -> Vec<(HallMonomial, Rational)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c * integral_normalizer(m)))
            .collect()
    }
}

impl fmt::Display for HallPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})·S[{}]", m.word())?;
        }
        Ok(())
    }
}

fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

/// `𝒜_{h_1}^{k_1} ⋯ 𝒜_{h_n}^{k_n} / (k_1! ⋯ k_n!)`.
pub fn integral_normalizer(m: &HallMonomial) -> Rational {
    m.factors
        .iter()
        .map(|(t, k)| {
            let depth = accumulated_depth(t);
            (0..*k).fold(Rational::one(), |acc, _| acc * &depth) / factorial(*k)
        })
        .fold(Rational::one(), |acc, x| acc * x)
}

/// Caching front end for PBW and dual basis computations over one Hall set.
pub struct Pbw<'h> {
    hall: &'h HallSet,
    eval: Evaluator,
    pbw: HashMap<Word, FreeElement>,
    dual: HashMap<Word, FreeElement>,
    hall_duals: HashMap<(Tree, DualStrategy), FreeElement>,
}

/// Outcome of [`Pbw::dual_basis_via_integrals`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralForm {
    pub coefficient: Rational,
    pub monomial: HallMonomial,
    pub value: FreeElement,
}

impl<'h> Pbw<'h> {
    pub fn new(hall: &'h HallSet) -> Self {
        Pbw {
            hall,
            eval: Evaluator::new(),
            pbw: HashMap::new(),
            dual: HashMap::new(),
            hall_duals: HashMap::new(),
        }
    }

    pub fn hall(&self) -> &'h HallSet {
        self.hall
    }

    fn check_letters(&self, w: &Word) -> Result<()> {
        for a in w.letters() {
            a.check(self.hall.alphabet())?;
        }
        Ok(())
    }

    pub fn monomial(&self, w: &Word) -> Result<HallMonomial> {
        self.check_letters(w)?;
        Ok(HallMonomial::new(self.hall.factorize(w)?))
    }

    /// `P_ω`.
    pub fn pbw_element(&mut self, w: &Word) -> Result<FreeElement> {
        if let Some(p) = self.pbw.get(w) {
            return Ok(p.clone());
        }
        let monomial = self.monomial(w)?;
        let mut out = FreeElement::unit();
        for (t, k) in monomial.factors() {
            let bracket = self.eval.lie(t);
            for _ in 0..*k {
                out = tensor(&out, &bracket);
            }
        }
        self.pbw.insert(w.clone(), out.clone());
        Ok(out)
    }

    /// `S_{f(h)}` for a Hall tree by the requested construction.
    pub fn dual_of_hall_tree(&mut self, h: &Tree, strategy: DualStrategy) -> Result<FreeElement> {
        if !self.hall.contains(h) {
            return Err(Error::NotHallTree(h.to_string()));
        }
        self.hall_dual(h, strategy)
    }

    fn hall_dual(&mut self, h: &Tree, strategy: DualStrategy) -> Result<FreeElement> {
        let Some((left, right)) = h.children() else {
            return Ok(FreeElement::letter(h.as_leaf().expect("leaf")));
        };
        let key = (h.clone(), strategy);
        if let Some(s) = self.hall_duals.get(&key) {
            return Ok(s.clone());
        }
        let value = match strategy {
            DualStrategy::RecursiveTensor => {
                let (a, v) = h.foliage().split_first().expect("non-empty foliage");
                self.dual_by_words(&v)?.map_words(|w| w.prepend(a))
            }
            DualStrategy::HalfShuffleRecursion => {
                let l = self.hall_dual(left, strategy)?;
                let r = self.hall_dual(right, strategy)?;
                half_shuffle(&l, &r).scale(&lazard_depth(h))
            }
            DualStrategy::Direct => self.eval.integral(h).scale(&accumulated_depth(h)),
        };
        self.hall_duals.insert(key, value.clone());
        Ok(value)
    }

    /// `S_ω` assembled from the factorization, with each Hall factor built
    /// by the word recursion `S_{av} = a ⊗ S_v`.
    fn dual_by_words(&mut self, w: &Word) -> Result<FreeElement> {
        if let Some(s) = self.dual.get(w) {
            return Ok(s.clone());
        }
        let monomial = self.monomial(w)?;
        let mut out = FreeElement::unit();
        for (t, k) in monomial.factors() {
            let s = self.hall_dual(t, DualStrategy::RecursiveTensor)?;
            out = shuffle(&out, &shuffle_power(&s, *k).scale(&(Rational::one() / factorial(*k))));
        }
        self.dual.insert(w.clone(), out.clone());
        Ok(out)
    }

    /// `S_ω`; `S_e = e`.
    pub fn dual_basis_element(&mut self, w: &Word) -> Result<FreeElement> {
        self.dual_by_words(w)
    }

    /// `S_ω` written as `coefficient · ≺(h_1)^{⧢k_1} ⧢ ⋯ ⧢ ≺(h_n)^{⧢k_n}`.
    pub fn dual_basis_via_integrals(&mut self, w: &Word) -> Result<IntegralForm> {
        let monomial = self.monomial(w)?;
        let coefficient = integral_normalizer(&monomial);
        let value = self.monomial_value(&monomial).scale(&coefficient);
        Ok(IntegralForm {
            coefficient,
            monomial,
            value,
        })
    }

    /// `≺(h_1)^{⧢k_1} ⧢ ⋯` without normalization.
    pub fn monomial_value(&mut self, m: &HallMonomial) -> FreeElement {
        let mut out = FreeElement::unit();
        for (t, k) in m.factors() {
            let integral = self.eval.integral(t);
            out = shuffle(&out, &shuffle_power(&integral, *k));
        }
        out
    }

    /// Coefficients `⟨f, P_ω⟩` over every word `ω` whose length occurs in `f`.
    pub fn expand(&mut self, f: &FreeElement) -> Result<HallPoly> {
        if let Some(a) = f.max_letter() {
            a.check(self.hall.alphabet())?;
        }
        let mut lengths: Vec<usize> = f.support().map(Word::len).collect();
        lengths.dedup();
        let mut out = HallPoly::zero();
        for n in lengths {
            for w in Word::all_of_length(self.hall.alphabet(), n) {
                let c = f.pairing(&self.pbw_element(&w)?);
                if !c.is_zero() {
                    out.add_term(self.monomial(&w)?, c);
                }
            }
        }
        Ok(out)
    }

    /// `Σ c · S_ω` using the Hall integral form of each `S_ω`.
    pub fn evaluate(&mut self, p: &HallPoly) -> FreeElement {
        let mut out = FreeElement::zero();
        for (m, c) in p.terms() {
            let value = self.monomial_value(m).scale(&(c * integral_normalizer(m)));
            out += &value;
        }
        out
    }

    /// Checks `⟨S_u, P_v⟩ = δ_{u,v}` for all words of length `≤ n`.
    pub fn verify_duality(&mut self, n: usize) -> Result<DualityReport> {
        if n > self.hall.max_degree() {
            return Err(Error::DegreeBoundExceeded {
                word: format!("<all words of length {n}>"),
                needed: n,
                bound: self.hall.max_degree(),
            });
        }
        let words = Word::all_up_to(self.hall.alphabet(), n);
        let duals = words
            .iter()
            .map(|w| self.dual_basis_element(w))
            .collect::<Result<Vec<_>>>()?;
        let pbws = words.iter().map(|w| self.pbw_element(w)).collect::<Result<Vec<_>>>()?;
        let mut report = DualityReport {
            alphabet: self.hall.alphabet(),
            order: self.hall.order().name().to_string(),
            max_length: n,
            words: words.len(),
            pairs: 0,
            failures: Vec::new(),
            triangularity_warnings: Vec::new(),
        };
        for (u, s) in words.iter().zip(&duals) {
            if s.coeff(u) != Rational::one() {
                report.triangularity_warnings.push(u.clone());
            }
            for (v, p) in words.iter().zip(&pbws) {
                report.pairs += 1;
                let value = s.pairing(p);
                let expected = if u == v { Rational::one() } else { Rational::zero() };
                if value != expected {
                    report.failures.push((u.clone(), v.clone(), value));
                }
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub alphabet: usize,
    pub order: String,
    pub max_length: usize,
    pub words: usize,
    pub pairs: usize,
    /// `(u, v, ⟨S_u, P_v⟩)` for every pair off the identity.
    pub failures: Vec<(Word, Word, Rational)>,
    /// Words whose dual element does not have coefficient 1 on the word itself.
    pub triangularity_warnings: Vec<Word>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn pbw_element(w: &Word, hall: &HallSet) -> Result<FreeElement> {
    Pbw::new(hall).pbw_element(w)
}

pub fn dual_of_hall_word(h: &Tree, strategy: DualStrategy, hall: &HallSet) -> Result<FreeElement> {
    Pbw::new(hall).dual_of_hall_tree(h, strategy)
}

pub fn dual_basis_element(w: &Word, hall: &HallSet) -> Result<FreeElement> {
    Pbw::new(hall).dual_basis_element(w)
}

pub fn dual_basis_via_integrals(w: &Word, hall: &HallSet) -> Result<IntegralForm> {
    Pbw::new(hall).dual_basis_via_integrals(w)
}

pub fn verify_duality(hall: &HallSet, n: usize) -> Result<DualityReport> {
    Pbw::new(hall).verify_duality(n)
}

pub fn expand_in_dual_basis(f: &FreeElement, hall: &HallSet) -> Result<HallPoly> {
    Pbw::new(hall).expand(f)
}

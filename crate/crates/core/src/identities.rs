//! Named identities between `≺`, `⧢` and `area`, checked by residual.

use std::fmt;
use std::str::FromStr;

use crate::packed::IntElement;
use crate::products::{area, half_shuffle, shuffle};
use crate::random::Generator;
use crate::words::{int, FreeElement, Letter, Rational, Word};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum IdentityName {
    /// `f ≺ (g ⧢ h) = (f ≺ g) ≺ h`
    ChainRule,
    /// `(f ≺ g) ≺ h = f ≺ (g ≺ h) + f ≺ (h ≺ g) + ⟨g,e⟩⟨h,e⟩ f ≺ e`
    ModifiedZinbiel,
    /// `(f ≺ g) ≺ h = f ≺ (g ≺ h) + f ≺ (h ≺ g)` on positive elements
    ZinbielPositive,
    /// `f ⧢ g = f ≺ g + g ≺ f + ⟨f,e⟩⟨g,e⟩ e`
    IntegrationByParts,
    /// `3 area(h, f ⧢ g) = f ⧢ area(h,g) + g ⧢ area(h,f) − f ⧢ g ⧢ h
    ///  + ⟨f,e⟩⟨g,e⟩⟨h,e⟩ e + area(area(h,g),f) + area(area(h,f),g)`
    ShufflePullout,
    /// `area(area(f,g),h) + area(area(g,h),f) + area(area(h,f),g)
    ///  = −f ⧢ area(g,h) − g ⧢ area(h,f) − h ⧢ area(f,g)`
    AreaJacobi,
    /// `area(area(f,g), area(f,h)) = area(f, vol(f,g,h))` on positive elements
    Tortkara1,
    /// `area(area(f,g),area(i,h)) + area(area(h,g),area(i,f))
    ///  = area(f, vol(g,h,i)) + area(h, vol(g,f,i))` on positive elements
    Tortkara2,
    /// `f_1 ⧢ ⋯ ⧢ f_n = Σ_σ f_σ(1) ≺ (f_σ(2) ≺ (⋯ ≺ f_σ(n)))` on positive
    /// elements. Nesting to the left instead gives `(n−1)!` times the
    /// shuffle, see [`left_nested_permutation_sum`].
    PermutationShuffle,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(k) => write!(f, "{k}"),
            Arity::AtLeast(k) => write!(f, "at least {k}"),
        }
    }
}

impl IdentityName {
    pub const ALL: [IdentityName; 9] = [
        IdentityName::ChainRule,
        IdentityName::ModifiedZinbiel,
        IdentityName::ZinbielPositive,
        IdentityName::IntegrationByParts,
        IdentityName::ShufflePullout,
        IdentityName::AreaJacobi,
        IdentityName::Tortkara1,
        IdentityName::Tortkara2,
        IdentityName::PermutationShuffle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityName::ChainRule => "chain-rule",
            IdentityName::ModifiedZinbiel => "modified-zinbiel",
            IdentityName::ZinbielPositive => "zinbiel-positive",
            IdentityName::IntegrationByParts => "integration-by-parts",
            IdentityName::ShufflePullout => "shuffle-pullout",
            IdentityName::AreaJacobi => "area-jacobi",
            IdentityName::Tortkara1 => "tortkara-1",
            IdentityName::Tortkara2 => "tortkara-2",
            IdentityName::PermutationShuffle => "permutation-shuffle",
        }
    }

    pub fn arity(self) -> Arity {
        match self {
            IdentityName::IntegrationByParts => Arity::Exactly(2),
            IdentityName::Tortkara2 => Arity::Exactly(4),
            IdentityName::PermutationShuffle => Arity::AtLeast(2),
            _ => Arity::Exactly(3),
        }
    }

    /// Whether the identity only holds on elements without constant term.
    pub fn requires_positive(self) -> bool {
        matches!(
            self,
            IdentityName::ZinbielPositive
                | IdentityName::Tortkara1
                | IdentityName::Tortkara2
                | IdentityName::PermutationShuffle
        )
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityName::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Operations the identities are written in. Results are `None` when a
/// representation cannot hold them.
trait Algebra: Sized + Clone {
    type Scalar: Clone;
    fn zero() -> Self;
    fn constant(c: Self::Scalar) -> Self;
    fn empty_coeff(&self) -> Self::Scalar;
    fn times(a: Self::Scalar, b: Self::Scalar) -> Self::Scalar;
    fn half(&self, g: &Self) -> Option<Self>;
    fn shuf(&self, g: &Self) -> Option<Self>;
    fn plus(&self, g: &Self) -> Option<Self>;
    fn minus(&self, g: &Self) -> Option<Self>;
    fn times_int(&self, k: i64) -> Option<Self>;

    fn area(&self, g: &Self) -> Option<Self> {
        self.half(g)?.minus(&g.half(self)?)
    }
}

impl Algebra for FreeElement {
    type Scalar = Rational;
    fn zero() -> Self {
        FreeElement::zero()
    }
    fn constant(c: Rational) -> Self {
        FreeElement::term(Word::empty(), c)
    }
    fn empty_coeff(&self) -> Rational {
        FreeElement::empty_coeff(self)
    }
    fn times(a: Rational, b: Rational) -> Rational {
        a * b
    }
    fn half(&self, g: &Self) -> Option<Self> {
        Some(half_shuffle(self, g))
    }
    fn shuf(&self, g: &Self) -> Option<Self> {
        Some(shuffle(self, g))
    }
    fn plus(&self, g: &Self) -> Option<Self> {
        Some(self + g)
    }
    fn minus(&self, g: &Self) -> Option<Self> {
        Some(self - g)
    }
    fn times_int(&self, k: i64) -> Option<Self> {
        Some(self.scale(&int(k)))
    }
    fn area(&self, g: &Self) -> Option<Self> {
        Some(area(self, g))
    }
}

impl Algebra for IntElement {
    type Scalar = Option<i64>;
    fn zero() -> Self {
        IntElement::default()
    }
    fn constant(c: Option<i64>) -> Self {
        IntElement::constant(c.unwrap_or(0))
    }
    fn empty_coeff(&self) -> Option<i64> {
        Some(IntElement::empty_coeff(self))
    }
    fn times(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        a?.checked_mul(b?)
    }
    fn half(&self, g: &Self) -> Option<Self> {
        self.half_shuffle(g)
    }
    fn shuf(&self, g: &Self) -> Option<Self> {
        self.shuffle(g)
    }
    fn plus(&self, g: &Self) -> Option<Self> {
        self.add(g)
    }
    fn minus(&self, g: &Self) -> Option<Self> {
        self.sub(g)
    }
    fn times_int(&self, k: i64) -> Option<Self> {
        self.scale(k)
    }
    fn area(&self, g: &Self) -> Option<Self> {
        IntElement::area(self, g)
    }
}

fn vol_in<A: Algebra>(f: &A, g: &A, h: &A) -> Option<A> {
    f.area(g)?
        .area(h)?
        .plus(&g.area(h)?.area(f)?)?
        .plus(&h.area(f)?.area(g)?)
}

/// `area(area(f,g),h) + area(area(g,h),f) + area(area(h,f),g)`.
pub fn vol(f: &FreeElement, g: &FreeElement, h: &FreeElement) -> FreeElement {
    vol_in(f, g, h).expect("rational arithmetic is total")
}

fn check_args(name: IdentityName, args: &[FreeElement]) -> Result<()> {
    if !name.arity().accepts(args.len()) {
        return Err(Error::Arity {
            identity: name.to_string(),
            expected: name.arity().to_string(),
            got: args.len(),
        });
    }
    if name.requires_positive() {
        if let Some(i) = args.iter().position(|f| !f.is_positive()) {
            return Err(Error::NotPositive(format!(
                "{name} needs arguments without constant term; argument {} is {}",
                i + 1,
                args[i]
            )));
        }
    }
    Ok(())
}

fn sides_in<A: Algebra>(name: IdentityName, args: &[A]) -> Option<(A, A)> {
    let constant_product = |xs: &[&A]| {
        xs.iter()
            .map(|x| x.empty_coeff())
            .reduce(A::times)
            .map(A::constant)
            .expect("non-empty")
    };
    let out = match name {
        IdentityName::ChainRule => {
            let [f, g, h] = [&args[0], &args[1], &args[2]];
            (f.half(&g.shuf(h)?)?, f.half(g)?.half(h)?)
        }
        IdentityName::ModifiedZinbiel | IdentityName::ZinbielPositive => {
            let [f, g, h] = [&args[0], &args[1], &args[2]];
            let lhs = f.half(g)?.half(h)?;
            let mut rhs = f.half(&g.half(h)?)?.plus(&f.half(&h.half(g)?)?)?;
            if name == IdentityName::ModifiedZinbiel {
                rhs = rhs.plus(&f.half(&constant_product(&[g, h]))?)?;
            }
            (lhs, rhs)
        }
        IdentityName::IntegrationByParts => {
            let [f, g] = [&args[0], &args[1]];
            let rhs = f.half(g)?.plus(&g.half(f)?)?.plus(&constant_product(&[f, g]))?;
            (f.shuf(g)?, rhs)
        }
        IdentityName::ShufflePullout => {
            let [f, g, h] = [&args[0], &args[1], &args[2]];
            let fg = f.shuf(g)?;
            let lhs = h.area(&fg)?.times_int(3)?;
            let (hg, hf) = (h.area(g)?, h.area(f)?);
            let rhs = f
                .shuf(&hg)?
                .plus(&g.shuf(&hf)?)?
                .minus(&fg.shuf(h)?)?
                .plus(&constant_product(&[f, g, h]))?
                .plus(&hg.area(f)?)?
                .plus(&hf.area(g)?)?;
            (lhs, rhs)
        }
        IdentityName::AreaJacobi => {
            let [f, g, h] = [&args[0], &args[1], &args[2]];
            let lhs = vol_in(f, g, h)?;
            let rhs = A::zero()
                .minus(&f.shuf(&g.area(h)?)?)?
                .minus(&g.shuf(&h.area(f)?)?)?
                .minus(&h.shuf(&f.area(g)?)?)?;
            (lhs, rhs)
        }
        IdentityName::Tortkara1 => {
            let [f, g, h] = [&args[0], &args[1], &args[2]];
            (f.area(g)?.area(&f.area(h)?)?, f.area(&vol_in(f, g, h)?)?)
        }
        IdentityName::Tortkara2 => {
            let [f, g, h, i] = [&args[0], &args[1], &args[2], &args[3]];
            let lhs = f.area(g)?.area(&i.area(h)?)?.plus(&h.area(g)?.area(&i.area(f)?)?)?;
            let rhs = f.area(&vol_in(g, h, i)?)?.plus(&h.area(&vol_in(g, f, i)?)?)?;
            (lhs, rhs)
        }
        IdentityName::PermutationShuffle => {
            let mut lhs = args[0].clone();
            for f in &args[1..] {
                lhs = lhs.shuf(f)?;
            }
            (lhs, permutation_sum_in(args)?)
        }
    };
    Some(out)
}

fn as_integers(args: &[FreeElement]) -> Option<Vec<IntElement>> {
    args.iter().map(IntElement::from_free).collect()
}

/// Both sides of the identity.
pub fn sides(name: IdentityName, args: &[FreeElement]) -> Result<(FreeElement, FreeElement)> {
    check_args(name, args)?;
    if let Some((lhs, rhs)) = as_integers(args).and_then(|a| sides_in(name, &a)) {
        return Ok((lhs.to_free(), rhs.to_free()));
    }
    Ok(sides_in(name, args).expect("rational arithmetic is total"))
}

/// `LHS − RHS`; zero when the identity holds for these arguments.
pub fn verify(name: IdentityName, args: &[FreeElement]) -> Result<FreeElement> {
    check_args(name, args)?;
    let fast = as_integers(args)
        .and_then(|a| sides_in(name, &a))
        .and_then(|(lhs, rhs)| lhs.minus(&rhs));
    if let Some(residual) = fast {
        return Ok(residual.to_free());
    }
    let (lhs, rhs) = sides_in(name, args).expect("rational arithmetic is total");
    Ok(&lhs - &rhs)
}

fn permutation_sum_in<A: Algebra>(args: &[A]) -> Option<A> {
    let n = args.len();
    if n == 0 {
        return Some(A::zero());
    }
    let mut sums: Vec<A> = vec![A::zero(); 1 << n];
    for mask in 1usize..1 << n {
        if mask.count_ones() == 1 {
            sums[mask] = args[mask.trailing_zeros() as usize].clone();
            continue;
        }
        let mut acc = A::zero();
        for (i, f) in args.iter().enumerate() {
            if mask & 1 << i != 0 {
                acc = acc.plus(&f.half(&sums[mask & !(1 << i)])?)?;
            }
        }
        sums[mask] = acc;
    }
    sums.pop()
}

/// `Σ_σ f_σ(1) ≺ (f_σ(2) ≺ (⋯ ≺ f_σ(n)))`, computed over subsets: the sum
/// over orderings of a set `S` is `Σ_{i∈S} f_i ≺ (sum over orderings of
/// S∖{i})`, which needs `n·2^(n−1)` products instead of `n!·(n−1)`.
pub fn right_nested_permutation_sum(args: &[FreeElement]) -> FreeElement {
    permutation_sum_in(args).expect("rational arithmetic is total")
}

/// `Σ_σ (⋯(f_σ(1) ≺ f_σ(2)) ≺ ⋯) ≺ f_σ(n)`. By the chain rule each term is
/// `f_σ(1) ≺ (⧢ of the rest)`, so on positive elements this is
/// `(n−1)! · f_1 ⧢ ⋯ ⧢ f_n`.
pub fn left_nested_permutation_sum(args: &[FreeElement]) -> FreeElement {
    let mut out = FreeElement::zero();
    for perm in permutations(args.len()) {
        let mut acc = args[perm[0]].clone();
        for &j in &perm[1..] {
            acc = half_shuffle(&acc, &args[j]);
        }
        out += &acc;
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == used.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                current.push(i);
                go(current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Outcome of checking one identity over many argument tuples.
#[derive(Clone, Debug)]
pub struct BatchReport {
    pub identity: IdentityName,
    pub cases: usize,
    pub passed: usize,
    /// First failing tuple with its residual.
    pub counterexample: Option<(Vec<FreeElement>, FreeElement)>,
}

impl BatchReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.cases
    }
}

fn run_batch<I>(name: IdentityName, tuples: I) -> Result<BatchReport>
where
    I: IntoIterator<Item = Vec<FreeElement>>,
{
    let mut report = BatchReport {
        identity: name,
        cases: 0,
        passed: 0,
        counterexample: None,
    };
    for args in tuples {
        report.cases += 1;
        let residual = verify(name, &args)?;
        if residual.is_zero() {
            report.passed += 1;
        } else if report.counterexample.is_none() {
            report.counterexample = Some((args, residual));
        }
    }
    Ok(report)
}

/// Tuple sizes exercised for an identity, capped at `max_arity` for the
/// variadic one.
fn arities(name: IdentityName, max_arity: usize) -> Vec<usize> {
    match name.arity() {
        Arity::Exactly(k) => vec![k],
        Arity::AtLeast(k) => (k..=max_arity.max(k)).collect(),
    }
}

/// Every tuple of letters over `d` letters.
pub fn check_letters(name: IdentityName, d: usize, max_arity: usize) -> Result<BatchReport> {
    let mut tuples = Vec::new();
    for n in arities(name, max_arity) {
        let mut idx = vec![0usize; n];
        loop {
            tuples.push(idx.iter().map(|&i| FreeElement::letter(Letter::of(i + 1))).collect());
            let Some(pos) = (0..n).rev().find(|&p| idx[p] + 1 < d) else {
                break;
            };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    run_batch(name, tuples)
}

/// Parameters for random tuples.
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub alphabet: usize,
    pub cases: usize,
    pub max_len: usize,
    pub max_terms: usize,
    pub max_arity: usize,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            alphabet: 3,
            cases: 200,
            max_len: 4,
            max_terms: 3,
            max_arity: 4,
            seed: 42,
        }
    }
}

/// Seeded random tuples; elements have constant terms unless the identity
/// needs positive arguments.
pub fn check_random(name: IdentityName, spec: RandomSpec) -> Result<BatchReport> {
    let mut gen = Generator::new(spec.seed, spec.alphabet);
    let sizes = arities(name, spec.max_arity);
    let positive = name.requires_positive();
    let tuples: Vec<Vec<FreeElement>> = (0..spec.cases)
        .map(|i| {
            let n = sizes[i % sizes.len()];
            (0..n)
                .map(|_| gen.element(spec.max_len, spec.max_terms, positive))
                .collect()
        })
        .collect();
    run_batch(name, tuples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    fn args(s: &[&str]) -> Vec<FreeElement> {
        s.iter().map(|x| el(x)).collect()
    }

    #[test]
    fn area_jacobi_letters() {
        let a = args(&["1", "2", "3"]);
        let (lhs, _) = sides(IdentityName::AreaJacobi, &a).unwrap();
        assert_eq!(lhs, el("-123 + 132 + 213 - 231 - 312 + 321"));
        assert!(verify(IdentityName::AreaJacobi, &a).unwrap().is_zero());
    }

    #[test]
    fn shuffle_pullout_letters() {
        let a = args(&["1", "2", "3"]);
        let (lhs, _) = sides(IdentityName::ShufflePullout, &a).unwrap();
        assert_eq!(lhs, el("-3*123 - 3*132 - 3*213 - 3*231 + 3*312 + 3*321"));
        assert!(verify(IdentityName::ShufflePullout, &a).unwrap().is_zero());
    }

    #[test]
    fn chain_rule_with_units() {
        for f in ["12 - 3*e", "e", "2*121 + 1"] {
            let a = args(&[f, "e", "e"]);
            assert!(verify(IdentityName::ChainRule, &a).unwrap().is_zero(), "{f}");
        }
    }

    #[test]
    fn permutation_shuffle_example() {
        let a = args(&["1", "2", "12"]);
        assert!(verify(IdentityName::PermutationShuffle, &a).unwrap().is_zero());
    }

    #[test]
    fn argument_checks() {
        assert!(matches!(
            verify(IdentityName::AreaJacobi, &args(&["1", "2"])),
            Err(Error::Arity { .. })
        ));
        assert!(matches!(
            verify(IdentityName::ZinbielPositive, &args(&["1", "2", "e"])),
            Err(Error::NotPositive(_))
        ));
        assert!(matches!(
            verify(IdentityName::PermutationShuffle, &args(&["1"])),
            Err(Error::Arity { .. })
        ));
        assert!("jacobi".parse::<IdentityName>().is_err());
        for name in IdentityName::ALL {
            assert_eq!(name.name().parse::<IdentityName>().unwrap(), name);
        }
    }

    #[test]
    fn zinbiel_needs_the_correction_on_constants() {
        let a = args(&["1", "2 + e", "3 - 2*e"]);
        assert!(verify(IdentityName::ModifiedZinbiel, &a).unwrap().is_zero());
        let (lhs, rhs) = sides(IdentityName::ModifiedZinbiel, &a).unwrap();
        let plain = &rhs - &half_shuffle(&a[0], &FreeElement::unit()).scale(&crate::words::int(-2));
        assert_ne!(lhs, plain);
    }

    #[test]
    fn all_identities_hold_on_letters() {
        for name in IdentityName::ALL {
            let report = check_letters(name, 3, 4).unwrap();
            assert!(report.all_passed(), "{name}: {:?}", report.counterexample);
        }
    }

    #[test]
    fn all_identities_hold_on_small_random_tuples() {
        let spec = RandomSpec {
            cases: 10,
            max_len: 3,
            ..RandomSpec::default()
        };
        for name in IdentityName::ALL {
            let report = check_random(name, spec).unwrap();
            assert!(report.all_passed(), "{name}: {:?}", report.counterexample);
        }
    }

    #[test]
    fn left_nesting_overcounts_by_factorial() {
        let a = args(&["1", "2", "12", "21 + 2*2"]);
        for n in 2..=4 {
            let factorial: i64 = (1..n as i64).product();
            let expected = crate::products::shuffle_all(&a[..n]).scale(&crate::words::int(factorial));
            assert_eq!(left_nested_permutation_sum(&a[..n]), expected, "n = {n}");
        }
    }

    #[test]
    fn subset_recursion_matches_explicit_orderings() {
        let a = args(&["1", "2 - 3*12", "12", "2*21 + 3"]);
        let mut explicit = FreeElement::zero();
        for perm in permutations(4) {
            let (last, init) = perm.split_last().unwrap();
            let mut acc = a[*last].clone();
            for &j in init.iter().rev() {
                acc = half_shuffle(&a[j], &acc);
            }
            explicit += &acc;
        }
        assert_eq!(right_nested_permutation_sum(&a), explicit);
    }

    #[test]
    fn integer_and_rational_evaluation_agree() {
        let mut gen = Generator::new(3, 3);
        for name in IdentityName::ALL {
            let n = match name.arity() {
                Arity::Exactly(k) | Arity::AtLeast(k) => k + usize::from(name == IdentityName::PermutationShuffle),
            };
            let a: Vec<FreeElement> = (0..n).map(|_| gen.element(2, 2, name.requires_positive())).collect();
            let fast = sides_in(name, &as_integers(&a).unwrap()).unwrap();
            let exact = sides_in(name, &a).unwrap();
            assert_eq!((fast.0.to_free(), fast.1.to_free()), exact, "{name}");
        }
    }

    #[test]
    fn fractional_arguments_use_exact_arithmetic() {
        let a = args(&["1/2*1 + 2", "1/3*12", "3/4*e + 21"]);
        assert!(as_integers(&a).is_none());
        assert!(verify(IdentityName::ShufflePullout, &a).unwrap().is_zero());
        assert!(verify(IdentityName::AreaJacobi, &a).unwrap().is_zero());
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(1), vec![vec![0]]);
    }
}

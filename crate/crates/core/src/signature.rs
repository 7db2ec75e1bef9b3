//! Floating point signatures of piecewise linear paths, used to check the
//! algebra against genuine iterated integrals.
//!
//! Word `a_1 ⋯ a_k` indexes `∫_{t_1<⋯<t_k} dX^{a_1}_{t_1} ⋯ dX^{a_k}_{t_k}`,
//! so the first letter is the earliest increment. A path with `m + 1`
//! points is parametrized on `[0, 1]`, each segment taking time `1/m`.

use std::io::Read;

use num_traits::ToPrimitive;

use crate::hall::{HallOrder, HallSet};
use crate::magma::Evaluator;
use crate::pbw::Pbw;
use crate::products::{half_shuffle, shuffle};
use crate::random::Generator;
use crate::words::{rational, FreeElement, Rational, Word};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PiecewisePath {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::PathTooShort);
        }
        let dim = points[0].len();
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                got: p.len(),
            });
        }
        Ok(PiecewisePath { dim, points })
    }

    /// One point per row, one column per coordinate. A first row that does
    /// not parse as numbers is taken as a header.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut points = Vec::new();
        for (row, record) in csv.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(format!("csv: {e}")))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(p) => points.push(p),
                Err(_) if row == 0 => continue,
                Err(e) => return Err(Error::Parse(format!("csv row {}: {e}", row + 1))),
            }
        }
        PiecewisePath::new(points)
    }

    /// A seeded random walk starting at the origin with increments uniform
    /// in `[-1, 1]` per coordinate.
    pub fn random(seed: u64, segments: usize, dim: usize) -> Self {
        let points = Generator::new(seed, dim).path_points(segments.max(1), dim);
        PiecewisePath::new(points).expect("at least two points")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn increments(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.points
            .windows(2)
            .map(|p| p[1].iter().zip(&p[0]).map(|(b, a)| b - a).collect())
    }

    /// `self` followed by `other` translated to start at the end of `self`.
    pub fn concat(&self, other: &PiecewisePath) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: self.dim,
                got: other.dim,
            });
        }
        let end = self.points.last().expect("non-empty");
        let start = &other.points[0];
        let mut points = self.points.clone();
        points.extend(
            other.points[1..]
                .iter()
                .map(|p| p.iter().zip(end).zip(start).map(|((x, e), s)| x - s + e).collect()),
        );
        PiecewisePath::new(points)
    }

    /// The same trace with segment `i` split at its midpoint.
    pub fn refine_segment(&self, i: usize) -> Result<Self> {
        if i >= self.segments() {
            return Err(Error::InvalidArgument(format!(
                "segment {i} does not exist, the path has {}",
                self.segments()
            )));
        }
        let mid = self.points[i]
            .iter()
            .zip(&self.points[i + 1])
            .map(|(a, b)| (a + b) / 2.0)
            .collect();
        let mut points = self.points.clone();
        points.insert(i + 1, mid);
        PiecewisePath::new(points)
    }

    /// Increments over `[s, t] ⊆ [0, 1]`, one per linear piece.
    fn pieces(&self, s: f64, t: f64) -> Vec<Vec<f64>> {
        let m = self.segments() as f64;
        let mut out = Vec::new();
        let mut a = s;
        while a < t {
            let seg = ((a * m).floor() as usize).min(self.segments() - 1);
            let b = t.min((seg + 1) as f64 / m);
            let fraction = (b - a) * m;
            out.push(
                self.points[seg + 1]
                    .iter()
                    .zip(&self.points[seg])
                    .map(|(y, x)| (y - x) * fraction)
                    .collect(),
            );
            if b <= a {
                break;
            }
            a = b;
        }
        out
    }
}

/// Truncated tensor series with dense levels: level `k` holds `dim^k`
/// coefficients, word `a_1⋯a_k` at `Σ (a_i − 1)·dim^(k−i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTensor {
    dim: usize,
    levels: Vec<Vec<f64>>,
}

impl NumericTensor {
    /// The unit `e`, truncated at `level`.
    pub fn unit(dim: usize, level: usize) -> Self {
        let mut levels: Vec<Vec<f64>> = (0..=level).map(|k| vec![0.0; dim.pow(k as u32)]).collect();
        levels[0][0] = 1.0;
        NumericTensor { dim, levels }
    }

    /// `exp(v)` truncated at `level`: level `k` is `v^{⊗k}/k!`.
    pub fn segment_exp(v: &[f64], level: usize) -> Self {
        let mut levels = vec![vec![1.0]];
        for k in 1..=level {
            let prev = &levels[k - 1];
            let next: Vec<f64> = prev
                .iter()
                .flat_map(|x| v.iter().map(move |y| x * y / k as f64))
                .collect();
            levels.push(next);
        }
        NumericTensor { dim: v.len(), levels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    fn index(&self, w: &Word) -> Result<usize> {
        if w.len() > self.level() {
            return Err(Error::TruncationTooLow {
                needed: w.len(),
                level: self.level(),
            });
        }
        w.letters().iter().try_fold(0usize, |acc, a| {
            a.check(self.dim)?;
            Ok(acc * self.dim + a.index() - 1)
        })
    }

    pub fn coeff(&self, w: &Word) -> Result<f64> {
        let i = self.index(w)?;
        Ok(self.levels[w.len()][i])
    }

    /// Truncated tensor product, at the lower of the two levels.
    pub fn chen(&self, other: &NumericTensor) -> NumericTensor {
        assert_eq!(self.dim, other.dim, "tensor dimensions differ");
        let n = self.level().min(other.level());
        let levels = (0..=n)
            .map(|k| {
                let mut out = vec![0.0; self.dim.pow(k as u32)];
                for i in 0..=k {
                    let (a, b) = (&self.levels[i], &other.levels[k - i]);
                    for (ia, x) in a.iter().enumerate() {
                        if *x == 0.0 {
                            continue;
                        }
                        let base = ia * b.len();
                        for (ib, y) in b.iter().enumerate() {
                            out[base + ib] += x * y;
                        }
                    }
                }
                out
            })
            .collect();
        NumericTensor { dim: self.dim, levels }
    }

    /// Largest absolute coefficient difference.
    pub fn max_difference(&self, other: &NumericTensor) -> f64 {
        self.levels
            .iter()
            .flatten()
            .zip(other.levels.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn product_of_pieces(pieces: &[Vec<f64>], dim: usize, level: usize) -> NumericTensor {
    pieces.iter().fold(NumericTensor::unit(dim, level), |acc, v| {
        acc.chen(&NumericTensor::segment_exp(v, level))
    })
}

/// Signature truncated at level `n`, as the Chen product of the segment
/// exponentials.
pub fn signature(path: &PiecewisePath, n: usize) -> NumericTensor {
    let pieces: Vec<Vec<f64>> = path.increments().collect();
    product_of_pieces(&pieces, path.dim, n)
}

/// Coefficient of one word in the signature without materializing any
/// level: `c_j` is the coefficient of the first `j` letters of `w` and one
/// segment with increment `v` updates it to
/// `Σ_{i ≤ j} c_i · v_{w_i} ⋯ v_{w_{j−1}} / (j − i)!`.
pub fn word_coefficient(path: &PiecewisePath, w: &Word) -> Result<f64> {
    let letters: Vec<usize> = w
        .letters()
        .iter()
        .map(|a| a.check(path.dim).map(|_| a.index() - 1))
        .collect::<Result<_>>()?;
    let mut c = vec![0.0; letters.len() + 1];
    c[0] = 1.0;
    for v in path.increments() {
        for j in (1..c.len()).rev() {
            let mut prod = 1.0;
            let mut acc = c[j];
            for i in (0..j).rev() {
                prod *= v[letters[i]] / (j - i) as f64;
                acc += c[i] * prod;
            }
            c[j] = acc;
        }
    }
    Ok(c[letters.len()])
}

fn to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// `⟨f, s⟩` with the exact coefficients of `f` rounded to doubles.
pub fn pair_numeric(f: &FreeElement, s: &NumericTensor) -> Result<f64> {
    f.terms().map(|(w, c)| Ok(to_f64(c) * s.coeff(w)?)).sum()
}

/// `⟨f, S(path)⟩` word by word, with no truncation level.
pub fn pair_path(f: &FreeElement, path: &PiecewisePath) -> Result<f64> {
    f.terms().map(|(w, c)| Ok(to_f64(c) * word_coefficient(path, w)?)).sum()
}

fn needed_level(fs: &[&FreeElement]) -> usize {
    fs.iter().map(|f| f.max_degree().unwrap_or(0)).sum()
}

/// `|⟨f ⧢ g, S⟩ − ⟨f, S⟩⟨g, S⟩|` for the signature truncated at `n`.
pub fn check_shuffle_identity(f: &FreeElement, g: &FreeElement, path: &PiecewisePath, n: usize) -> Result<f64> {
    let needed = needed_level(&[f, g]);
    if needed > n {
        return Err(Error::TruncationTooLow { needed, level: n });
    }
    let s = signature(path, n);
    Ok((pair_numeric(&shuffle(f, g), &s)? - pair_numeric(f, &s)? * pair_numeric(g, &s)?).abs())
}

/// Riemann–Stieltjes check of `⟨f ≺ g, S⟩` on a uniform partition of
/// `[0, 1]` into `partition` pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationCheck {
    pub partition: usize,
    /// `⟨f ≺ g, S_{0,1}⟩`.
    pub exact: f64,
    /// `Σ G(r_k)(F(r_{k+1}) − F(r_k))` with `F(r) = ⟨f, S_{1−r,1}⟩` and
    /// `G(r) = ⟨g, S_{1−r,1}⟩`: the path read from its end, the left
    /// argument of `≺` as integrator.
    pub backward: f64,
    /// The same sum with `F(s) = ⟨f, S_{0,s}⟩`, `G(s) = ⟨g, S_{0,s}⟩`.
    pub forward: f64,
    pub error: f64,
    pub forward_error: f64,
}

/// Convention under which `⟨f ≺ g, S⟩` is an integral; the one validated by
/// [`check_halfshuffle_integration`].
pub const INTEGRATION_CONVENTION: &str =
    "<f < g, S_{0,1}> = int_0^1 G dF with F(r) = <f, S_{1-r,1}>, G(r) = <g, S_{1-r,1}>: the left argument is the integrator and the path is read backward from its end";

pub fn check_halfshuffle_integration(
    f: &FreeElement,
    g: &FreeElement,
    path: &PiecewisePath,
    n: usize,
    partition: usize,
) -> Result<IntegrationCheck> {
    if partition == 0 {
        return Err(Error::InvalidArgument("partition must be at least 1".into()));
    }
    let needed = needed_level(&[f, g]);
    if needed > n {
        return Err(Error::TruncationTooLow { needed, level: n });
    }
    let (d, step) = (path.dim, 1.0 / partition as f64);
    let grid = |k: usize| if k == partition { 1.0 } else { k as f64 * step };
    // Signatures over [t_k, t_{k+1}] for the grid t_k = k/partition.
    let local: Vec<NumericTensor> = (0..partition)
        .map(|k| product_of_pieces(&path.pieces(grid(k), grid(k + 1)), d, n))
        .collect();
    let mut prefix = vec![NumericTensor::unit(d, n)];
    for s in &local {
        let next = prefix.last().expect("non-empty").chen(s);
        prefix.push(next);
    }
    let mut suffix = vec![NumericTensor::unit(d, n)];
    for s in local.iter().rev() {
        let next = s.chen(suffix.last().expect("non-empty"));
        suffix.push(next);
    }
    // suffix[k] = S_{1−k/partition, 1}, prefix[k] = S_{0, k/partition}.
    let values = |tensors: &[NumericTensor], h: &FreeElement| -> Result<Vec<f64>> {
        tensors.iter().map(|s| pair_numeric(h, s)).collect()
    };
    let stieltjes =
        |big_f: &[f64], big_g: &[f64]| -> f64 { (0..partition).map(|k| big_g[k] * (big_f[k + 1] - big_f[k])).sum() };
    let backward = stieltjes(&values(&suffix, f)?, &values(&suffix, g)?);
    let forward = stieltjes(&values(&prefix, f)?, &values(&prefix, g)?);
    let exact = pair_numeric(&half_shuffle(f, g), &prefix[partition])?;
    Ok(IntegrationCheck {
        partition,
        exact,
        backward,
        forward,
        error: (backward - exact).abs(),
        forward_error: (forward - exact).abs(),
    })
}

/// The factorized dual basis element of one long word evaluated on a path
/// in two ways.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkedExample {
    pub word: Word,
    pub seed: Option<u64>,
    pub segments: usize,
    /// Hall factors `(h, k)` of the word, as foliages.
    pub factors: Vec<(Word, usize)>,
    /// `c` in `S_ω = c · ≺(h_1)^{⧢k_1} ⧢ ⋯` with `≺(h)` the Hall integrals.
    pub coefficient: Rational,
    /// The same constant against the plain iterated integrals `⟨h, S⟩` of
    /// the Hall words instead of the Hall integrals.
    pub raw_coefficient: Rational,
    /// The often quoted value `1/48`, which drops the `1/3!` of the cubed
    /// factor; reported for comparison.
    pub printed_coefficient: Rational,
    /// `α_h = ⟨≺(h), S⟩` per factor.
    pub alphas: Vec<(Word, f64)>,
    /// Number of words in `S_ω`.
    pub support: usize,
    /// `⟨S_ω, S⟩` summed word by word.
    pub direct: f64,
    /// `c · Π α_h^{k}`.
    pub product: f64,
    pub relative_error: f64,
    pub tolerance: f64,
}

impl WorkedExample {
    pub fn passed(&self) -> bool {
        self.relative_error <= self.tolerance
    }
}

/// The word `233212222111` over three letters in the Lyndon Hall set.
pub const WORKED_EXAMPLE_WORD: &str = "233212222111";

/// [`worked_example_on`] with a seeded random 10-segment path.
pub fn worked_example(seed: u64) -> Result<WorkedExample> {
    let mut report = worked_example_on(&PiecewisePath::random(seed, 10, 3))?;
    report.seed = Some(seed);
    Ok(report)
}

pub fn worked_example_on(path: &PiecewisePath) -> Result<WorkedExample> {
    let word: Word = WORKED_EXAMPLE_WORD.parse()?;
    let hall = HallSet::generate(3, HallOrder::Lyndon, word.len())?;
    let mut pbw = Pbw::new(&hall);
    let form = pbw.dual_basis_via_integrals(&word)?;
    let mut eval = Evaluator::new();
    let mut alphas = Vec::new();
    let mut raw_coefficient = form.coefficient.clone();
    let mut product = to_f64(&form.coefficient);
    for (t, k) in form.monomial.factors() {
        let integral = eval.integral(t);
        // Hall integrals are multiples of the single word h.
        let scale = integral.coeff(&t.foliage());
        let power = i32::try_from(*k).expect("small power");
        raw_coefficient *= (0..*k).fold(Rational::from_integer(1.into()), |acc, _| acc * &scale);
        let alpha = pair_path(&integral, path)?;
        product *= alpha.powi(power);
        alphas.push((t.foliage(), alpha));
    }
    let direct = pair_path(&form.value, path)?;
    let scale = direct.abs().max(product.abs());
    let relative_error = if scale < 1e-300 {
        0.0
    } else {
        (direct - product).abs() / scale
    };
    Ok(WorkedExample {
        word,
        seed: None,
        segments: path.segments(),
        factors: form.monomial.factors().iter().map(|(t, k)| (t.foliage(), *k)).collect(),
        coefficient: form.coefficient,
        raw_coefficient,
        printed_coefficient: rational(1, 48),
        alphas,
        support: form.value.len(),
        direct,
        product,
        relative_error,
        tolerance: 1e-6,
    })
}

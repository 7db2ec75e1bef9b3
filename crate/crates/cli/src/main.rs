//! `halfshuffle`: every part of the library as a subcommand, with text or
//! JSON output. Exit status 0 on success, 1 when a verification fails and 2
//! on usage or input errors.

use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use halfshuffle::areas::{
    beta, beta_recursive, eval_area_poly, hall_area_rank_report, AreaMonomial, AreaPoly, AreaRewriter,
};
use halfshuffle::elimination::{acn_relation_check, closed_forms, decompose_series, XLetter};
use halfshuffle::hall::{witt_dimension, HallOrder, HallSet};
use halfshuffle::identities::{check_letters, check_random, verify, BatchReport, IdentityName, RandomSpec};
use halfshuffle::json;
use halfshuffle::magma::{eval_tree, Product, Tree};
use halfshuffle::pbw::{DualStrategy, Pbw};
use halfshuffle::products::area;
use halfshuffle::random::Generator;
use halfshuffle::signature::{
    check_halfshuffle_integration, check_shuffle_identity, pair_path, signature, worked_example_on, PiecewisePath,
    INTEGRATION_CONVENTION,
};
use halfshuffle::words::{format_rational, int, FreeElement, Letter, Word};
use halfshuffle::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "halfshuffle",
    version,
    about = "Exact computer algebra for the free half shuffle algebra"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Alphabet size; inferred from the input when omitted (at least 2).
    #[arg(long, global = true)]
    alphabet: Option<usize>,
    /// Hall order: lyndon or degree-lex.
    #[arg(long, global = true, default_value = "lyndon")]
    order: HallOrder,
    /// Degree bound for Hall sets; defaults to what the input needs.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the Hall set, or check it against the Witt dimensions.
    Hall {
        /// Check Witt counts and the last factor property instead of listing.
        #[arg(long)]
        check: bool,
    },
    /// Decreasing factorization of a word into Hall words.
    Factorize { word: Word },
    /// PBW basis element of a word.
    Pbw { word: Word },
    /// Dual basis element of a word, or a check of duality and strategies.
    Dual {
        word: Option<Word>,
        /// Dual construction used for Hall words.
        #[arg(long, default_value = "halfshuffle-recursion")]
        strategy: DualStrategy,
        /// Show the element as a constant times a shuffle of Hall integrals.
        #[arg(long)]
        integrals: bool,
        /// Check duality and strategy agreement for all words up to this length.
        #[arg(long, value_name = "N")]
        check: Option<usize>,
    },
    /// Expansion of an element in the dual basis.
    Expand {
        element: Option<FreeElement>,
        /// Expand and evaluate this many random elements instead.
        #[arg(long, value_name = "COUNT")]
        round_trips: Option<usize>,
    },
    /// Rewrite a word or element as a polynomial in iterated areas.
    RewriteAreas {
        element: Option<FreeElement>,
        /// Check every word and letter monomial up to this degree.
        #[arg(long, value_name = "N")]
        check: Option<usize>,
    },
    /// Verify an identity on letters, given elements or random tuples.
    Verify {
        /// Identity name, or `all`.
        #[arg(long)]
        identity: String,
        /// Arguments as letter indices.
        #[arg(long, num_args = 1.., conflicts_with = "elements")]
        letters: Vec<usize>,
        /// Arguments as elements, e.g. "12 - 2*21".
        #[arg(long, num_args = 1..)]
        elements: Vec<FreeElement>,
        /// Number of random tuples when no arguments are given.
        #[arg(long, default_value_t = 200)]
        random: usize,
    },
    /// Eliminate the greatest letter: series in c with coefficients in Z.
    Eliminate {
        element: Option<FreeElement>,
        /// Letter to eliminate; defaults to the greatest letter.
        #[arg(long)]
        c: Option<usize>,
        /// Check closed forms, relations and decompositions up to this degree.
        #[arg(long, value_name = "N")]
        check: Option<usize>,
    },
    /// Signatures of piecewise linear paths.
    Sig(SigArgs),
    /// Rank of the Hall-area monomials per degree.
    RankReport {
        /// Exit with status 1 if some degree is rank deficient.
        #[arg(long)]
        expect_full_rank: bool,
    },
    /// The long worked example: one dual basis element on a path, two ways.
    WorkedExample {
        /// CSV path; defaults to a seeded random 10-segment path.
        #[arg(long)]
        path: Option<String>,
    },
}

#[derive(Args)]
struct SigArgs {
    /// CSV file, one point per row; defaults to a seeded random path.
    #[arg(long)]
    path: Option<String>,
    /// Segments of the random path.
    #[arg(long, default_value_t = 10)]
    segments: usize,
    /// Truncation level.
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Pair the signature with this element.
    #[arg(long, conflicts_with_all = ["shuffle", "integrate", "check"])]
    element: Option<FreeElement>,
    /// Check ⟨f ⧢ g, S⟩ = ⟨f, S⟩⟨g, S⟩ for two elements.
    #[arg(long, num_args = 2, value_names = ["F", "G"])]
    shuffle: Vec<FreeElement>,
    /// Compare ⟨f ≺ g, S⟩ with a Riemann–Stieltjes sum (fails above 1e-3).
    #[arg(long, num_args = 2, value_names = ["F", "G"], conflicts_with = "shuffle")]
    integrate: Vec<FreeElement>,
    /// Partition size for --integrate.
    #[arg(long, default_value_t = 1000)]
    partition: usize,
    /// Run the numeric suite on seeded random cases.
    #[arg(long)]
    check: bool,
}

/// Text, JSON and the verification verdict of one command.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            ok: true,
        }
    }

    fn verdict(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = if cli.global.json {
                serde_json::to_string_pretty(&report.json).expect("serializable")
            } else {
                report.text
            };
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // A closed pipe (e.g. `| head`) is not an error of the command.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn alphabet_for<'a>(g: &Global, inputs: impl IntoIterator<Item = &'a FreeElement>) -> usize {
    g.alphabet.unwrap_or_else(|| {
        inputs
            .into_iter()
            .filter_map(FreeElement::max_letter)
            .map(Letter::index)
            .max()
            .unwrap_or(2)
            .max(2)
    })
}

fn hall_set(g: &Global, d: usize, needed: usize) -> Result<HallSet> {
    HallSet::generate(d, g.order, g.max_degree.unwrap_or(needed).max(1))
}

fn degree_of(f: &FreeElement) -> usize {
    f.max_degree().unwrap_or(0)
}

fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Hall { check } => hall(g, *check),
        Command::Factorize { word } => factorize(g, word),
        Command::Pbw { word } => {
            let f = FreeElement::word(word.clone());
            let hall = hall_set(g, alphabet_for(g, [&f]), word.len())?;
            let p = Pbw::new(&hall).pbw_element(word)?;
            Ok(Report::new(format!("P[{word}] = {p}"), json::free_element(&p)))
        }
        Command::Dual {
            word,
            strategy,
            integrals,
            check,
        } => match (word, check) {
            (_, Some(n)) => dual_check(g, *n),
            (Some(w), None) => dual(g, w, *strategy, *integrals),
            (None, None) => Err(Error::InvalidArgument("give a word or --check N".into())),
        },
        Command::Expand { element, round_trips } => match (element, round_trips) {
            (_, Some(count)) => expand_round_trips(g, *count),
            (Some(f), None) => {
                let hall = hall_set(g, alphabet_for(g, [f]), degree_of(f))?;
                let p = Pbw::new(&hall).expand(f)?;
                Ok(Report::new(p.to_string(), json::hall_poly(&p)))
            }
            (None, None) => Err(Error::InvalidArgument("give an element or --round-trips COUNT".into())),
        },
        Command::RewriteAreas { element, check } => match (element, check) {
            (_, Some(n)) => rewrite_check(g, *n),
            (Some(f), None) => {
                let p = AreaRewriter::new().element(f);
                let sound = eval_area_poly(&p) == *f;
                Ok(Report::new(p.to_string(), json::area_poly(&p)).verdict(sound))
            }
            (None, None) => Err(Error::InvalidArgument("give an element or --check N".into())),
        },
        Command::Verify {
            identity,
            letters,
            elements,
            random,
        } => verify_command(g, identity, letters, elements, *random),
        Command::Eliminate { element, c, check } => match (element, check) {
            (_, Some(n)) => eliminate_check(*n),
            (Some(f), None) => {
                let d = alphabet_for(g, [f]);
                let c = Letter::new(c.unwrap_or(d))?;
                let s = decompose_series(f, c);
                let ok = s.reconstruct() == *f && s.all_in_z();
                let mut text = String::new();
                for (k, (z, q)) in s.coefficients.iter().zip(&s.scalar_slots).enumerate() {
                    let mut coeff = z.clone();
                    coeff.add_term(Word::empty(), q.clone());
                    if !coeff.is_zero() {
                        text += &format!("{c}^{k}: {coeff}\n");
                    }
                }
                Ok(Report::new(text, json::series_in_c(&s)).verdict(ok))
            }
            (None, None) => Err(Error::InvalidArgument("give an element or --check N".into())),
        },
        Command::Sig(args) => sig(g, args),
        Command::RankReport { expect_full_rank } => {
            let n = g.max_degree.unwrap_or(5);
            let hall = HallSet::generate(g.alphabet.unwrap_or(2), g.order, n)?;
            let r = hall_area_rank_report(n, &hall)?;
            let mut text = String::new();
            for dr in &r.degrees {
                text += &format!(
                    "degree {}: rank {} of {}{}\n",
                    dr.degree,
                    dr.rank,
                    dr.dimension,
                    if dr.full_rank() { "" } else { " (deficient)" }
                );
            }
            let ok = !expect_full_rank || r.full_rank();
            Ok(Report::new(text, json::hall_area_report(&r)).verdict(ok))
        }
        Command::WorkedExample { path } => {
            let r = match path {
                Some(p) => worked_example_on(&read_path(p)?)?,
                None => halfshuffle::signature::worked_example(g.seed)?,
            };
            let factors: Vec<String> = r.factors.iter().map(|(h, k)| format!("{h}^{k}")).collect();
            let alphas: Vec<String> = r.alphas.iter().map(|(h, a)| format!("α[{h}] = {a:.12e}")).collect();
            let text = format!(
                "word: {}\nfactors: {}\nconstant: {} (against plain iterated integrals of the Hall words: {}; the often quoted {} drops the 1/3! of the cubed factor)\n{}\nsupport: {} words\ndirect: {:.15e}\nproduct: {:.15e}\nrelative error: {:.3e} (tolerance {:.0e})\n",
                r.word,
                factors.join(" "),
                r.coefficient,
                r.raw_coefficient,
                r.printed_coefficient,
                alphas.join("\n"),
                r.support,
                r.direct,
                r.product,
                r.relative_error,
                r.tolerance
            );
            let ok = r.passed();
            Ok(Report::new(text, json::worked_example(&r)).verdict(ok))
        }
    }
}

fn hall(g: &Global, check: bool) -> Result<Report> {
    let d = g.alphabet.unwrap_or(2);
    if !check {
        let hall = HallSet::generate(d, g.order, g.max_degree.unwrap_or(5))?;
        let trees: Vec<Value> = hall
            .trees()
            .map(|t| json!({"degree": t.degree(), "word": t.foliage().to_string(), "tree": t.to_string()}))
            .collect();
        return Ok(Report::new(hall.listing(), Value::Array(trees)));
    }
    let max = g.max_degree.unwrap_or(7);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for order in [HallOrder::Lyndon, HallOrder::DegreeLex] {
        let hall = HallSet::generate(d, order, max)?;
        let violations = hall.last_factor_violations().len();
        ok &= violations == 0;
        for n in 1..=max {
            let (got, want) = (hall.of_degree(n).len() as u128, witt_dimension(d as u64, n as u64));
            ok &= got == want;
            text += &format!("{order} degree {n}: {got} Hall words, Witt {want}\n");
            rows.push(json!({"order": order.name(), "degree": n, "count": got as u64, "witt": want as u64}));
        }
        text += &format!("{order}: last factor violations {violations}\n");
    }
    Ok(Report::new(text, json!({"alphabet": d, "counts": rows, "passed": ok})).verdict(ok))
}

fn factorize(g: &Global, word: &Word) -> Result<Report> {
    let f = FreeElement::word(word.clone());
    let hall = hall_set(g, alphabet_for(g, [&f]), word.len())?;
    let factors = hall.factorize(word)?;
    let text: Vec<String> = factors
        .iter()
        .map(|(t, k)| format!("{}^{k}  {t}", t.foliage()))
        .collect();
    let value: Vec<Value> = factors
        .iter()
        .map(|(t, k)| json!({"word": t.foliage().to_string(), "tree": t.to_string(), "power": k}))
        .collect();
    Ok(Report::new(text.join("\n"), Value::Array(value)))
}

fn dual(g: &Global, w: &Word, strategy: DualStrategy, integrals: bool) -> Result<Report> {
    let f = FreeElement::word(w.clone());
    let hall = hall_set(g, alphabet_for(g, [&f]), w.len())?;
    let mut pbw = Pbw::new(&hall);
    if integrals {
        let form = pbw.dual_basis_via_integrals(w)?;
        let text = format!("S[{w}] = ({}) {}\n= {}", form.coefficient, form.monomial, form.value);
        let value = json!({
            "coefficient": format_rational(&form.coefficient),
            "factors": form.monomial.factors().iter().map(|(t, k)| json!({"tree": t.to_string(), "power": k})).collect::<Vec<_>>(),
            "value": json::free_element(&form.value),
        });
        return Ok(Report::new(text, value));
    }
    let s = if hall.is_hall_word(w) {
        pbw.dual_of_hall_tree(&hall.tree_of_word(w)?, strategy)?
    } else {
        pbw.dual_basis_element(w)?
    };
    Ok(Report::new(format!("S[{w}] = {s}"), json::free_element(&s)))
}

fn dual_check(g: &Global, n: usize) -> Result<Report> {
    let d = g.alphabet.unwrap_or(2);
    let hall = HallSet::generate(d, g.order, n.max(1))?;
    let mut pbw = Pbw::new(&hall);
    let report = pbw.verify_duality(n)?;
    let mut disagreements = Vec::new();
    for t in hall.trees() {
        let values = DualStrategy::ALL
            .iter()
            .map(|&s| pbw.dual_of_hall_tree(t, s))
            .collect::<Result<Vec<_>>>()?;
        if values.windows(2).any(|v| v[0] != v[1]) {
            disagreements.push(t.to_string());
        }
    }
    let ok = report.passed() && disagreements.is_empty();
    let text = format!(
        "duality over {} pairs of words of length ≤ {n}: {} failures\nstrategies agree on {} of {} Hall words\n",
        report.pairs,
        report.failures.len(),
        hall.len() - disagreements.len(),
        hall.len()
    );
    let mut value = json::duality_report(&report);
    value["strategy_disagreements"] = json!(disagreements);
    Ok(Report::new(text, value).verdict(ok))
}

fn expand_round_trips(g: &Global, count: usize) -> Result<Report> {
    let d = g.alphabet.unwrap_or(3);
    let n = g.max_degree.unwrap_or(5);
    let hall = HallSet::generate(d, g.order, n)?;
    let mut pbw = Pbw::new(&hall);
    let mut generator = Generator::new(g.seed, d);
    let mut failures = Vec::new();
    for _ in 0..count {
        let f = generator.element(n, 4, false);
        let p = pbw.expand(&f)?;
        if pbw.evaluate(&p) != f {
            failures.push(json::free_element(&f));
        }
    }
    let text = format!(
        "{} of {count} random elements of degree ≤ {n} round trip",
        count - failures.len()
    );
    let ok = failures.is_empty();
    Ok(Report::new(text, json!({"cases": count, "max_degree": n, "failures": failures})).verdict(ok))
}

fn rewrite_check(g: &Global, n: usize) -> Result<Report> {
    let d = g.alphabet.unwrap_or(2);
    let beta_bad: Vec<usize> = (1..=50).filter(|&k| beta(k) != beta_recursive(k)).collect();
    let mut rw = AreaRewriter::new();
    let mut bad_words = Vec::new();
    let words: Vec<Word> = Word::all_up_to(d, n).into_iter().filter(|w| !w.is_empty()).collect();
    for w in &words {
        if eval_area_poly(&rw.word(w)) != FreeElement::word(w.clone()) {
            bad_words.push(w.to_string());
        }
    }
    let mut bad_monomials = Vec::new();
    let mut instances = 0;
    for k in 1..n {
        for letters in multisets(d, k) {
            for a in 1..=d {
                instances += 1;
                let leaf = |i: usize| Tree::leaf(Letter::of(i));
                let m = AreaMonomial::new(letters.iter().map(|&i| leaf(i)).collect());
                let p = rw.rewrite(&leaf(a), &m)?;
                let value = eval_area_poly(&AreaPoly::monomial(m.clone(), int(1)));
                let top = m.with(leaf(a));
                let ok = eval_area_poly(&p) == area(&FreeElement::letter(Letter::of(a)), &value)
                    && p.coeff(&top) == beta(k)
                    && p.terms().all(|(x, _)| x == &top || x.shuffle_degree() <= k);
                if !ok {
                    bad_monomials.push(format!("area({a}, {m})"));
                }
            }
        }
    }
    let ok = beta_bad.is_empty() && bad_words.is_empty() && bad_monomials.is_empty();
    let text = format!(
        "beta closed form vs recursion, k ≤ 50: {} mismatches\nwords of length ≤ {n}: {} of {} rewrite exactly\nmonomial rewrites with up to {} letter areas: {} of {instances} sound with leading coefficient beta\n",
        beta_bad.len(),
        words.len() - bad_words.len(),
        words.len(),
        n.saturating_sub(1),
        instances - bad_monomials.len()
    );
    let value = json!({"beta_mismatches": beta_bad, "words": words.len(), "word_failures": bad_words,
        "monomials": instances, "monomial_failures": bad_monomials, "passed": ok});
    Ok(Report::new(text, value).verdict(ok))
}

fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    multisets(d, k - 1)
        .into_iter()
        .flat_map(|m| {
            let from = m.last().copied().unwrap_or(1);
            (from..=d).map(move |a| [m.clone(), vec![a]].concat())
        })
        .collect()
}

fn eliminate_check(n: usize) -> Result<Report> {
    let mut failures = Vec::new();
    for (a, c) in [(1, 2), (1, 3), (2, 3)] {
        let (a, c) = (Letter::of(a), Letter::of(c));
        for k in 0..=n {
            let t = XLetter::new(a, k).tree(c);
            let f = closed_forms(a, k, c)?;
            if f.lie != eval_tree(&t, Product::Lie)
                || f.integral != eval_tree(&t, Product::HalfShuffle)
                || f.area != eval_tree(&t, Product::Area)
            {
                failures.push(format!("closed forms {t}"));
            }
            if k >= 1 && !acn_relation_check(a, k, c)?.is_zero() {
                failures.push(format!("relations {t}"));
            }
        }
    }
    let mut cases = 0;
    for d in [2, 3] {
        for w in Word::all_up_to(d, n.min(5)) {
            for c in Letter::alphabet(d) {
                cases += 1;
                let f = FreeElement::word(w.clone());
                let s = decompose_series(&f, c);
                if s.reconstruct() != f || !s.all_in_z() {
                    failures.push(format!("series {w} in {c}"));
                }
            }
        }
    }
    let ok = failures.is_empty();
    let text = format!(
        "closed forms and relations for n ≤ {n}, {cases} series decompositions: {} failures\n",
        failures.len()
    );
    Ok(Report::new(
        text,
        json!({"decompositions": cases, "failures": failures, "passed": ok}),
    )
    .verdict(ok))
}

fn verify_command(
    g: &Global,
    identity: &str,
    letters: &[usize],
    elements: &[FreeElement],
    random: usize,
) -> Result<Report> {
    let names: Vec<IdentityName> = if identity == "all" {
        IdentityName::ALL.to_vec()
    } else {
        vec![identity.parse()?]
    };
    let args: Vec<FreeElement> = if letters.is_empty() {
        elements.to_vec()
    } else {
        letters
            .iter()
            .map(|&i| Letter::new(i).map(FreeElement::letter))
            .collect::<Result<_>>()?
    };
    if !args.is_empty() {
        let d = alphabet_for(g, &args);
        for a in args.iter().filter_map(FreeElement::max_letter) {
            a.check(d)?;
        }
        let mut text = String::new();
        let mut rows = Vec::new();
        let mut ok = true;
        for name in names {
            let residual = verify(name, &args)?;
            ok &= residual.is_zero();
            text += &if identity == "all" {
                format!("{name}: residual: {residual}\n")
            } else {
                format!("residual: {residual}\n")
            };
            rows.push(json!({"identity": name.name(), "residual": json::free_element(&residual)}));
        }
        return Ok(Report::new(text, Value::Array(rows)).verdict(ok));
    }
    let d = g.alphabet.unwrap_or(3);
    let spec = RandomSpec {
        alphabet: d,
        cases: random,
        seed: g.seed,
        max_len: g.max_degree.unwrap_or(4),
        ..RandomSpec::default()
    };
    let mut reports: Vec<BatchReport> = Vec::new();
    for name in names {
        reports.push(check_letters(name, d, spec.max_arity)?);
        reports.push(check_random(name, spec)?);
    }
    let ok = reports.iter().all(BatchReport::all_passed);
    let mut text = String::new();
    for (i, r) in reports.iter().enumerate() {
        let kind = if i % 2 == 0 { "letter tuples" } else { "random tuples" };
        text += &format!("{}: {} of {} {kind} with residual 0\n", r.identity, r.passed, r.cases);
    }
    Ok(Report::new(text, Value::Array(reports.iter().map(json::batch_report).collect())).verdict(ok))
}

const INTEGRATION_TOLERANCE: f64 = 1e-3;

fn read_path(p: &str) -> Result<PiecewisePath> {
    let file = File::open(p).map_err(|e| Error::InvalidArgument(format!("{p}: {e}")))?;
    PiecewisePath::from_csv(file)
}

fn sig(g: &Global, args: &SigArgs) -> Result<Report> {
    if args.check {
        return sig_check(g);
    }
    let path = match &args.path {
        Some(p) => read_path(p)?,
        None => PiecewisePath::random(g.seed, args.segments, g.alphabet.unwrap_or(2)),
    };
    if let Some(f) = &args.element {
        let value = pair_path(f, &path)?;
        return Ok(Report::new(
            format!("{value:.15e}"),
            json!({"element": json::free_element(f), "value": value}),
        ));
    }
    if let [f, h] = args.shuffle.as_slice() {
        let n = args.level.max(degree_of(f) + degree_of(h));
        let error = check_shuffle_identity(f, h, &path, n)?;
        let ok = error <= 1e-9;
        return Ok(Report::new(
            format!("shuffle identity error: {error:.3e} (tolerance 1e-9)"),
            json!({"level": n, "error": error, "tolerance": 1e-9, "passed": ok}),
        )
        .verdict(ok));
    }
    if let [f, h] = args.integrate.as_slice() {
        let n = args.level.max(degree_of(f) + degree_of(h));
        let c = check_halfshuffle_integration(f, h, &path, n, args.partition)?;
        let text = format!(
            "exact: {:.12e}\nbackward sum: {:.12e} (error {:.3e})\nforward sum: {:.12e} (error {:.3e})\nconvention: {}\n",
            c.exact, c.backward, c.error, c.forward, c.forward_error, INTEGRATION_CONVENTION
        );
        let ok = c.error <= INTEGRATION_TOLERANCE;
        let text = format!("{text}tolerance: {INTEGRATION_TOLERANCE:.0e}\n");
        let mut value = json::integration_check(&c);
        value["convention"] = json!(INTEGRATION_CONVENTION);
        value["tolerance"] = json!(INTEGRATION_TOLERANCE);
        value["passed"] = json!(ok);
        return Ok(Report::new(text, value).verdict(ok));
    }
    let s = signature(&path, args.level);
    let mut text = String::new();
    let mut rows = Vec::new();
    for w in Word::all_up_to(path.dim(), args.level) {
        let c = s.coeff(&w)?;
        text += &format!("{w}\t{c:.15e}\n");
        rows.push(json!({"word": w.to_string(), "value": c}));
    }
    Ok(Report::new(
        text,
        json!({"dim": path.dim(), "level": args.level, "coefficients": rows}),
    ))
}

fn sig_check(g: &Global) -> Result<Report> {
    let d = g.alphabet.unwrap_or(3);
    let mut generator = Generator::new(g.seed, d);
    let mut shuffle_error: f64 = 0.0;
    for case in 0..100 {
        let f = generator.element(3, 3, false);
        let h = generator.element(3, 3, false);
        let path = PiecewisePath::random(g.seed.wrapping_add(1000 + case), 5, d);
        shuffle_error = shuffle_error.max(check_shuffle_identity(&f, &h, &path, 6)?);
    }
    let mut chen_error: f64 = 0.0;
    for case in 0..20 {
        let p = PiecewisePath::random(g.seed.wrapping_add(2000 + case), 4, d);
        let q = PiecewisePath::random(g.seed.wrapping_add(3000 + case), 3, d);
        let joined = signature(&p.concat(&q)?, 6);
        chen_error = chen_error.max(joined.max_difference(&signature(&p, 6).chen(&signature(&q, 6))));
    }
    let path = PiecewisePath::random(g.seed, 5, 2);
    let (f, h): (FreeElement, FreeElement) = ("1 + 21".parse()?, "2 - 12".parse()?);
    let errors = [10, 100, 1000]
        .iter()
        .map(|&n| check_halfshuffle_integration(&f, &h, &path, 4, n).map(|c| c.error))
        .collect::<Result<Vec<_>>>()?;
    let ok =
        shuffle_error <= 1e-9 && chen_error <= 1e-10 && errors.windows(2).all(|e| e[1] < e[0]) && errors[2] <= 1e-3;
    let text = format!(
        "shuffle identity, 100 cases: max error {shuffle_error:.3e} (tolerance 1e-9)\nChen multiplicativity, 20 cases: max error {chen_error:.3e} (tolerance 1e-10)\nintegration error at partitions 10, 100, 1000: {:.3e}, {:.3e}, {:.3e} (tolerance 1e-3 at 1000)\n",
        errors[0], errors[1], errors[2]
    );
    let value = json!({"shuffle_error": shuffle_error, "chen_error": chen_error,
        "integration_errors": errors, "passed": ok});
    Ok(Report::new(text, value).verdict(ok))
}

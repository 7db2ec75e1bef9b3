//! WebAssembly bindings for the demo page in `www/`. Every export takes and
//! returns plain text; errors come back as text starting with `error:`.

use halfshuffle::hall::{HallOrder, HallSet};
use halfshuffle::identities::{verify, IdentityName};
use halfshuffle::pbw::Pbw;
use halfshuffle::products::{area, half_shuffle, lie_bracket, shuffle, tensor};
use halfshuffle::{FreeElement, Result, Word};
use wasm_bindgen::prelude::wasm_bindgen;

fn text(result: Result<String>) -> String {
    result.unwrap_or_else(|e| format!("error: {e}"))
}

fn product_text(op: &str, f: &str, g: &str) -> Result<String> {
    let (f, g): (FreeElement, FreeElement) = (f.parse()?, g.parse()?);
    let value = match op {
        "shuffle" => shuffle(&f, &g),
        "half-shuffle" => half_shuffle(&f, &g),
        "area" => area(&f, &g),
        "concatenation" => tensor(&f, &g),
        "bracket" => lie_bracket(&f, &g),
        other => return Err(halfshuffle::Error::UnknownProduct(other.to_string())),
    };
    Ok(value.to_string())
}

fn dual_text(word: &str, order: &str) -> Result<String> {
    let w: Word = word.trim().parse()?;
    let d = w.max_letter().map_or(2, |a| a.index().max(2));
    let order: HallOrder = order.parse()?;
    let hall = HallSet::generate(d, order, w.len().max(1))?;
    let factors: Vec<String> = hall
        .factorize(&w)?
        .iter()
        .map(|(t, k)| format!("{}^{k} = {t}", t.foliage()))
        .collect();
    let form = Pbw::new(&hall).dual_basis_via_integrals(&w)?;
    Ok(format!(
        "Hall factors:\n  {}\n\nS[{w}] = ({}) {}\n\n{} words in the support",
        factors.join("\n  "),
        form.coefficient,
        form.monomial,
        form.value.len()
    ))
}

fn identity_text(name: &str, args: &str) -> Result<String> {
    let name: IdentityName = name.parse()?;
    let args = args
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<FreeElement>>>()?;
    Ok(format!("residual: {}", verify(name, &args)?))
}

/// `op` is one of `shuffle`, `half-shuffle`, `area`, `concatenation`, `bracket`.
#[wasm_bindgen]
pub fn product(op: &str, f: &str, g: &str) -> String {
    text(product_text(op, f, g))
}

/// Hall factorization of a word and its dual basis element written with
/// Hall integrals. `order` is `lyndon` or `degree-lex`.
#[wasm_bindgen]
pub fn dual(word: &str, order: &str) -> String {
    text(dual_text(word, order))
}

/// Residual of a named identity on arguments separated by `;`.
#[wasm_bindgen]
pub fn identity(name: &str, args: &str) -> String {
    text(identity_text(name, args))
}

/// Identity names accepted by [`identity`], one per line.
#[wasm_bindgen]
pub fn identities() -> String {
    IdentityName::ALL.map(|n| n.name()).join("\n")
}

//! Browser bindings: resolve an ideal, build a substituted ideal, and compare
//! the two constructions of a path ideal. Every export takes and returns JSON
//! text; failures come back as `{"error": message}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use gmpres::complex::{minimal_resolution, BettiTable};
use gmpres::document::{IdealDocument, InstanceDocument};
use gmpres::families::{path_ideal_direct, path_ideal_instance};
use gmpres::gmpi::{gmpi_projdim, resolve};
use gmpres::monomial::MonomialIdeal;
use gmpres::verify::{verify_instance, VerifyOptions};

/// Largest ideal the page will resolve through its Taylor complex.
const PAGE_TAYLOR_CAP: usize = 12;

fn gens(ideal: &MonomialIdeal) -> Vec<String> {
    ideal.gens().iter().map(|g| ideal.context().format_monomial(g)).collect()
}

fn table_json(t: &BettiTable) -> Value {
    json!({
        "triangle": t.format_triangle(),
        "regularity": t.regularity(true),
        "projective_dimension": t.projective_dimension(),
    })
}

pub fn resolve_ideal(doc: &str) -> Result<Value, String> {
    let ideal = IdealDocument::from_json(doc)
        .and_then(|d| d.to_ideal())
        .map_err(|e| e.to_string())?;
    let res = minimal_resolution(&ideal, PAGE_TAYLOR_CAP).map_err(|e| e.to_string())?;
    let table = BettiTable::from_complex(&res).map_err(|e| e.to_string())?;
    Ok(json!({
        "ideal": gens(&ideal),
        "ranks": res.ranks(),
        "betti": table_json(&table),
    }))
}

pub fn substitute(doc: &str, check: bool) -> Result<Value, String> {
    let inst = InstanceDocument::from_json(doc)
        .and_then(|d| d.to_instance())
        .map_err(|e| e.to_string())?;
    let res = resolve(&inst).map_err(|e| e.to_string())?;
    let table = res.betti().map_err(|e| e.to_string())?;
    let pd = gmpi_projdim(&res).map_err(|e| e.to_string())?;
    let checks = if check {
        let opts = VerifyOptions {
            max_taylor: PAGE_TAYLOR_CAP,
            ..VerifyOptions::default()
        };
        let report = verify_instance(&inst, &opts).map_err(|e| e.to_string())?;
        report.checks.iter().map(ToString::to_string).collect()
    } else {
        Vec::new()
    };
    Ok(json!({
        "inducing": gens(inst.inducing()),
        "ideal": gens(inst.ideal()),
        "ranks": res.total().ranks(),
        "betti": table_json(&table),
        "projective_dimension_formula": pd.formula,
        "hypothesis": res.hypothesis_holds(),
        "checks": checks,
    }))
}

pub fn path_ideal(parts: &str, t: usize) -> Result<Value, String> {
    let parts: Vec<usize> = parts
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad part size {p:?}")))
        .collect::<Result<_, _>>()?;
    let direct = path_ideal_direct(&parts, t).map_err(|e| e.to_string())?;
    let inst = path_ideal_instance(&parts, t).map_err(|e| e.to_string())?;
    Ok(json!({
        "generators": gens(&direct),
        "inducing": gens(inst.inducing()),
        "agrees": inst.ideal() == &direct,
        "instance": InstanceDocument::from_instance(&inst),
    }))
}

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

#[wasm_bindgen(js_name = resolveIdeal)]
pub fn resolve_ideal_js(doc: &str) -> String {
    respond(resolve_ideal(doc))
}

#[wasm_bindgen(js_name = substitute)]
pub fn substitute_js(doc: &str, check: bool) -> String {
    respond(substitute(doc, check))
}

#[wasm_bindgen(js_name = pathIdeal)]
pub fn path_ideal_js(parts: &str, t: usize) -> String {
    respond(path_ideal(parts, t))
}

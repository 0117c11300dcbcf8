//! Independent oracles and the checks run against a construction.
//!
//! The oracles resolve `L` directly, either by minimalizing its Taylor complex
//! or from the reduced homology of the upper Koszul simplicial complexes
//! `K^b(L) = {F ⊆ supp b : x^(b - F) ∈ L}`, and share nothing with the
//! construction beyond ideal arithmetic and the generic complex engine.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{
    lcm_closure, minimal_resolution, minimalize_complex, strand, taylor_complex_ordered, BettiTable,
    FreeComplex, DEFAULT_TAYLOR_CAP,
};
use crate::error::{Error, Result};
use crate::families::{random_instance, RandomBounds};
use crate::gmpi::{
    build_star_complex, gmpi_linearity, gmpi_projdim, gmpi_regularity, resolve, star_acyclicity, DoubleComplex,
    GmpiInstance, GmpiResolution, StarComplex,
};
use crate::linalg::{QMatrix, Scalar};
use crate::monomial::{ExponentVector, MonomialIdeal};

/// Largest lcm lattice the Koszul oracle walks.
const KOSZUL_CLOSURE_CAP: usize = 1 << 16;
/// Largest support of a multidegree whose Koszul complex is built.
const KOSZUL_MAX_SUPPORT: usize = 16;

/// The pinned seeds of the acceptance suite.
pub const SUITE_SEEDS: [u64; 20] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Status {
    Pass,
    Fail,
    HypothesisUnmet,
    Vacuous,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::HypothesisUnmet => "HYPOTHESIS-UNMET",
            Status::Vacuous => "VACUOUS",
            Status::Skipped => "SKIPPED",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub detail: String,
    pub values: Value,
}

impl CheckReport {
    pub fn new(check: &str, status: Status, detail: impl Into<String>, values: Value) -> Self {
        Self {
            check: check.to_string(),
            status,
            detail: detail.into(),
            values,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.status, self.check, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Taylor,
    Koszul,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Oracle {
    pub method: OracleMethod,
    pub table: BettiTable,
}

/// Betti table of `S/L` from the minimalized Taylor complex.
pub fn oracle_betti(ideal: &MonomialIdeal, max_taylor: usize) -> Result<BettiTable> {
    BettiTable::from_complex(&minimal_resolution(ideal, max_taylor)?)
}

/// Betti table of `S/L` from the upper Koszul simplicial complexes:
/// `β_{i,b}(L) = dim H̃_{i-1}(K^b(L))`, nonzero only on the lcm lattice.
pub fn koszul_betti(ideal: &MonomialIdeal) -> Result<BettiTable> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let n = ideal.context().num_vars();
    let closure = lcm_closure(n, ideal.gens(), KOSZUL_CLOSURE_CAP)?;
    let mut ranks = BTreeMap::new();
    ranks.insert((0, ExponentVector::zero(n)), 1);
    for b in closure.iter().filter(|b| !b.is_zero()) {
        for (i, h) in upper_koszul_homology(ideal, b)?.into_iter().enumerate() {
            if h > 0 {
                ranks.insert((i + 1, b.clone()), h);
            }
        }
    }
    Ok(BettiTable::from_multigraded(ranks))
}

/// `dim H̃_{i-1}(K^b)` for `i = 0, ..., |supp b|`.
fn upper_koszul_homology(ideal: &MonomialIdeal, b: &ExponentVector) -> Result<Vec<usize>> {
    let supp: Vec<usize> = (0..b.len()).filter(|&v| b.as_slice()[v] > 0).collect();
    let s = supp.len();
    if s > KOSZUL_MAX_SUPPORT {
        return Err(Error::TooLarge(format!("Koszul complex on {s} vertices")));
    }
    let mut faces: Vec<Vec<u32>> = vec![Vec::new(); s + 1];
    for mask in 0u32..(1 << s) {
        let mut e = b.clone().into_vec();
        for (t, &v) in supp.iter().enumerate() {
            if mask & (1 << t) != 0 {
                e[v] -= 1;
            }
        }
        if ideal.contains(&ExponentVector::new(e)) {
            faces[mask.count_ones() as usize].push(mask);
        }
    }
    let index: Vec<HashMap<u32, usize>> = faces
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, &m)| (m, i)).collect())
        .collect();
    // boundary_ranks[k] = rank of the map from faces of size k to size k - 1
    let mut boundary_ranks = vec![0usize; s + 2];
    for k in 1..=s {
        if faces[k].is_empty() || faces[k - 1].is_empty() {
            continue;
        }
        let mut m = QMatrix::zeros(faces[k - 1].len(), faces[k].len());
        for (c, &mask) in faces[k].iter().enumerate() {
            let mut sign = Scalar::one();
            for t in 0..s {
                if mask & (1 << t) == 0 {
                    continue;
                }
                if let Some(&r) = index[k - 1].get(&(mask & !(1 << t))) {
                    m.set(r, c, sign.clone());
                }
                sign = -sign;
            }
        }
        boundary_ranks[k] = m.rank();
    }
    Ok((0..=s)
        .map(|k| faces[k].len() - boundary_ranks[k] - boundary_ranks[k + 1])
        .collect())
}

/// The Taylor oracle when `|G(L)| <= max_taylor`, the Koszul oracle otherwise.
/// `None` when neither fits.
pub fn independent_oracle(ideal: &MonomialIdeal, max_taylor: usize) -> Result<Option<Oracle>> {
    if ideal.len() <= max_taylor {
        return Ok(Some(Oracle {
            method: OracleMethod::Taylor,
            table: oracle_betti(ideal, max_taylor)?,
        }));
    }
    match koszul_betti(ideal) {
        Ok(table) => Ok(Some(Oracle {
            method: OracleMethod::Koszul,
            table,
        })),
        Err(Error::TooLarge(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn oracle_json(oracle: Option<&Oracle>) -> Value {
    oracle.map_or(Value::Null, |o| json!(o.method))
}

/// `reg I = reg L`, with `reg L` read off `Tot(D)` and off the oracle.
pub fn check_theorem_regularity(res: &GmpiResolution, oracle: Option<&Oracle>) -> Result<CheckReport> {
    let name = "regularity";
    let report = match gmpi_regularity(res) {
        Ok(r) => r,
        Err(e) => return Ok(failed_construction(name, res, &e)),
    };
    let reg_oracle = oracle.and_then(|o| o.table.regularity(true));
    let values = json!({
        "reg_inducing": report.reg_inducing,
        "reg_total": report.reg_total,
        "reg_oracle": reg_oracle,
        "oracle": oracle_json(oracle),
        "hypothesis": report.hypothesis,
    });
    let oracle_text = reg_oracle.map_or_else(|| "not computed".to_string(), |r| r.to_string());
    let detail = format!(
        "reg I = {}, reg L = {} (Tot), {} (oracle)",
        report.reg_inducing, report.reg_total, oracle_text
    );
    let agree = report.agrees() && reg_oracle.map_or(true, |r| r == report.reg_total);
    let status = if !report.hypothesis {
        Status::HypothesisUnmet
    } else {
        Status::of(agree)
    };
    Ok(CheckReport::new(name, status, detail, values))
}

/// The projective dimension formula against `Tot(D)` and the oracle.
pub fn check_pd_formula(res: &GmpiResolution, oracle: Option<&Oracle>) -> Result<CheckReport> {
    let name = "projective-dimension";
    let report = match gmpi_projdim(res) {
        Ok(r) => r,
        Err(e) => return Ok(failed_construction(name, res, &e)),
    };
    let pd_oracle = oracle.map(|o| o.table.projective_dimension());
    let hypothesis = res.hypothesis_holds();
    let values = json!({
        "formula": report.formula,
        "pd_total": report.total,
        "pd_oracle": pd_oracle,
        "oracle": oracle_json(oracle),
        "hypothesis": hypothesis,
    });
    let oracle_text = pd_oracle.map_or_else(|| "not computed".to_string(), |p| p.to_string());
    let detail = format!(
        "formula {}, pd(T/L) = {} (Tot), {} (oracle)",
        report.formula, report.total, oracle_text
    );
    let agree = report.agrees() && pd_oracle.map_or(true, |p| p == report.total);
    let status = if !hypothesis {
        Status::HypothesisUnmet
    } else {
        Status::of(agree)
    };
    Ok(CheckReport::new(name, status, detail, values))
}

/// Exact equality of the Betti tables of `Tot(D)` and the oracle, including
/// the multigraded refinement.
pub fn check_betti_equivalence(res: &GmpiResolution, oracle: Option<&Oracle>) -> Result<CheckReport> {
    let name = "betti-equivalence";
    let Some(oracle) = oracle else {
        return Ok(CheckReport::new(
            name,
            Status::Skipped,
            format!("no oracle for {} generators", res.instance().ideal().len()),
            Value::Null,
        ));
    };
    let table = match res.betti() {
        Ok(t) => t,
        Err(e) => return Ok(failed_construction(name, res, &e)),
    };
    let mismatch = first_mismatch(&table, &oracle.table);
    let values = json!({
        "oracle": oracle.method,
        "total_ranks": res.total().ranks(),
        "entries": table.multigraded().len(),
        "mismatch": mismatch,
    });
    let (status, detail) = match &mismatch {
        None => (
            Status::Pass,
            format!("{} multigraded entries agree ({:?} oracle)", table.multigraded().len(), oracle.method),
        ),
        Some(m) => (
            if res.hypothesis_holds() {
                Status::Fail
            } else {
                Status::HypothesisUnmet
            },
            m.clone(),
        ),
    };
    Ok(CheckReport::new(name, status, detail, values))
}

fn first_mismatch(a: &BettiTable, b: &BettiTable) -> Option<String> {
    let keys: std::collections::BTreeSet<_> = a.multigraded().keys().chain(b.multigraded().keys()).collect();
    keys.into_iter().find_map(|key| {
        let x = a.multigraded().get(key).copied().unwrap_or(0);
        let y = b.multigraded().get(key).copied().unwrap_or(0);
        (x != y).then(|| format!("position {} shift {}: Tot {x}, oracle {y}", key.0, key.1))
    })
}

fn failed_construction(name: &str, res: &GmpiResolution, e: &Error) -> CheckReport {
    let status = if res.hypothesis_holds() {
        Status::Fail
    } else {
        Status::HypothesisUnmet
    };
    CheckReport::new(name, status, e.to_string(), Value::Null)
}

/// `I` has a linear resolution iff `L` does.
pub fn check_linearity(res: &GmpiResolution) -> Result<CheckReport> {
    let name = "linearity";
    let report = match gmpi_linearity(res) {
        Ok(r) => r,
        Err(e) => return Ok(failed_construction(name, res, &e)),
    };
    let detail = format!("I linear: {}, L linear: {}", report.inducing, report.substituted);
    let status = if !report.hypothesis {
        Status::HypothesisUnmet
    } else {
        Status::of(report.inducing == report.substituted)
    };
    Ok(CheckReport::new(name, status, detail, json!(report)))
}

/// First position where `0 → K^{β_p} → ... → K^{β_1} → K → 0` has homology,
/// with its dimension (negative when `λλ != 0`).
pub fn scalar_exactness_failure(lambdas: &[QMatrix]) -> Option<(usize, i64)> {
    let Some(first) = lambdas.first() else {
        return None;
    };
    if let Some(i) = (1..lambdas.len()).find(|&i| {
        lambdas[i - 1].cols() != lambdas[i].rows() || !lambdas[i - 1].mul(&lambdas[i]).is_zero()
    }) {
        return Some((i, -1));
    }
    let ranks: Vec<usize> = lambdas.iter().map(QMatrix::rank).collect();
    let betas: Vec<usize> = std::iter::once(first.rows())
        .chain(lambdas.iter().map(QMatrix::cols))
        .collect();
    betas.iter().enumerate().find_map(|(i, &beta)| {
        let out = if i >= 1 { ranks[i - 1] } else { 0 };
        let inc = ranks.get(i).copied().unwrap_or(0);
        let h = beta as i64 - out as i64 - inc as i64;
        (h != 0).then_some((i, h))
    })
}

pub fn check_scalar_exactness(lambdas: &[QMatrix]) -> CheckReport {
    let name = "scalar-exactness";
    let dims: Vec<usize> = lambdas.iter().map(QMatrix::cols).collect();
    match scalar_exactness_failure(lambdas) {
        None => CheckReport::new(name, Status::Pass, format!("exact with ranks {dims:?}"), json!({ "ranks": dims })),
        Some((i, h)) => CheckReport::new(
            name,
            Status::Fail,
            if h < 0 {
                format!("λ^({i}) λ^({}) != 0", i + 1)
            } else {
                format!("homology of dimension {h} at position {i}")
            },
            json!({ "position": i, "homology": h }),
        ),
    }
}

/// First `(i, j)`, `i >= 2`, whose shift differs from the lcm of the shifts
/// `a_{i-1,k}` with `λ^(i)_kj != 0`.
pub fn lcm_shift_failure(shifts: &[Vec<ExponentVector>], lambdas: &[QMatrix]) -> Option<(usize, usize)> {
    for i in 2..shifts.len() {
        let lambda = lambdas.get(i - 1)?;
        for (j, a) in shifts[i].iter().enumerate() {
            let lcm = (0..shifts[i - 1].len())
                .filter(|&k| !lambda.get(k, j).is_zero())
                .fold(ExponentVector::zero(a.len()), |acc, k| acc.lcm(&shifts[i - 1][k]));
            if &lcm != a {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn check_lcm_shifts(shifts: &[Vec<ExponentVector>], lambdas: &[QMatrix]) -> CheckReport {
    let name = "lcm-shifts";
    if shifts.len() <= 2 {
        return CheckReport::new(name, Status::Vacuous, "no position beyond the generators", Value::Null);
    }
    match lcm_shift_failure(shifts, lambdas) {
        None => CheckReport::new(name, Status::Pass, "every shift is the lcm of its faces", Value::Null),
        Some((i, j)) => CheckReport::new(
            name,
            Status::Fail,
            format!("shift {} at position {i}, index {j} is not the lcm of its faces", shifts[i][j]),
            json!({ "position": i, "index": j }),
        ),
    }
}

/// First `(i, j, l)` with no generator `a_k` of `I` such that
/// `a_ij(l) = a_k(l)`.
pub fn block_degree_failure(shifts: &[Vec<ExponentVector>]) -> Option<(usize, usize, usize)> {
    let gens = shifts.get(1)?;
    for (i, row) in shifts.iter().enumerate().skip(1) {
        for (j, a) in row.iter().enumerate() {
            for l in 0..a.len() {
                if !gens.iter().any(|g| g.as_slice()[l] == a.as_slice()[l]) {
                    return Some((i, j, l));
                }
            }
        }
    }
    None
}

pub fn check_block_degrees(shifts: &[Vec<ExponentVector>]) -> CheckReport {
    let name = "block-degree-realization";
    match block_degree_failure(shifts) {
        None => CheckReport::new(name, Status::Pass, "every block degree is a generator's", Value::Null),
        Some((i, j, l)) => CheckReport::new(
            name,
            Status::Fail,
            format!(
                "block {l} of shift {} at position {i}, index {j} matches no generator",
                shifts[i][j]
            ),
            json!({ "position": i, "index": j, "block": l }),
        ),
    }
}

/// First `(i, j)` where `L_ij` differs from `Π_l L_{l, a_ij(l)}`.
pub fn product_intersection_failure(inst: &GmpiInstance, star: &StarComplex) -> Result<Option<(usize, usize)>> {
    let shifts = inst.inducing_resolution().all_shifts();
    for i in 1..star.len().min(shifts.len()) {
        for (j, a) in shifts[i].iter().enumerate() {
            let product = inst.family().substitute(a.as_slice())?;
            if &product != star.ideal(i, j) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn check_product_intersection(inst: &GmpiInstance, star: &StarComplex) -> Result<CheckReport> {
    let name = "product-equals-intersection";
    Ok(match product_intersection_failure(inst, star)? {
        None => CheckReport::new(name, Status::Pass, "every L_ij is a product of substitution ideals", Value::Null),
        Some((i, j)) => CheckReport::new(
            name,
            Status::Fail,
            format!(
                "L_({i},{j}) = {} but the product is {}",
                star.ideal(i, j).format(),
                inst.family().substitute(inst.inducing_resolution().shifts(i)[j].as_slice())?.format()
            ),
            json!({ "position": i, "index": j }),
        ),
    })
}

pub fn check_star_acyclicity(inst: &GmpiInstance, star: &StarComplex) -> Result<CheckReport> {
    let name = "star-acyclicity";
    Ok(match star_acyclicity(inst, star)? {
        crate::complex::Exactness::Exact { strands_checked } => CheckReport::new(
            name,
            Status::Pass,
            format!("{strands_checked} strands exact"),
            json!({ "strands": strands_checked }),
        ),
        crate::complex::Exactness::Fails(w) => CheckReport::new(
            name,
            Status::Fail,
            format!(
                "homology of dimension {} (expected {}) at position {}, degree {}",
                w.homology, w.expected, w.position, w.degree
            ),
            json!(w),
        ),
    })
}

pub fn check_sigma_minimality(double: &DoubleComplex) -> CheckReport {
    let name = "sigma-minimality";
    match double.sigma_unit_entry() {
        None => CheckReport::new(name, Status::Pass, "every σ entry lies in the maximal ideal", Value::Null),
        Some((i, r, row, col)) => CheckReport::new(
            name,
            Status::Fail,
            format!("σ_{i} has a unit entry at ({row}, {col}) in row {r}"),
            json!({ "column": i, "row": r, "entry": [row, col] }),
        ),
    }
}

pub fn check_sigma_squared(double: &DoubleComplex) -> CheckReport {
    let name = "sigma-squared";
    match double.sigma_squared_failure() {
        None => CheckReport::new(name, Status::Pass, "σσ = 0", Value::Null),
        Some((i, r)) => CheckReport::new(
            name,
            Status::Fail,
            format!("σ_{} σ_{i} != 0 in row {r}", i - 1),
            json!({ "column": i, "row": r }),
        ),
    }
}

pub fn check_sigma_chain(double: &DoubleComplex) -> CheckReport {
    let name = "sigma-chain-map";
    match double.sigma_chain_failure() {
        None => CheckReport::new(name, Status::Pass, "σ commutes with the vertical maps", Value::Null),
        Some((i, r)) => CheckReport::new(
            name,
            Status::Fail,
            format!("σ_{i} does not commute with the vertical map in row {r}"),
            json!({ "column": i, "row": r }),
        ),
    }
}

pub fn check_augmentation(double: &DoubleComplex) -> CheckReport {
    let name = "sigma-covers-star";
    match double.augmentation_failure() {
        None => CheckReport::new(name, Status::Pass, "row 0 of σ lifts the maps of F*", Value::Null),
        Some((i, k, j)) => CheckReport::new(
            name,
            Status::Fail,
            format!("σ_{i} does not lift λ^({i}) at ({k}, {j})"),
            json!({ "column": i, "k": k, "j": j }),
        ),
    }
}

/// The lemmas that only need `I`, the substitutions and `F*`.
pub fn star_lemmas(inst: &GmpiInstance, star: &StarComplex) -> Result<Vec<CheckReport>> {
    let shifts = inst.inducing_resolution().all_shifts();
    Ok(vec![
        check_scalar_exactness(inst.lambdas()),
        check_lcm_shifts(shifts, inst.lambdas()),
        check_block_degrees(shifts),
        check_product_intersection(inst, star)?,
        check_star_acyclicity(inst, star)?,
    ])
}

pub fn double_lemmas(double: &DoubleComplex) -> Vec<CheckReport> {
    vec![
        check_sigma_minimality(double),
        check_sigma_squared(double),
        check_sigma_chain(double),
        check_augmentation(double),
    ]
}

pub fn check_structure_lemmas(res: &GmpiResolution) -> Result<Vec<CheckReport>> {
    let mut out = star_lemmas(res.instance(), res.star())?;
    out.extend(double_lemmas(res.double()));
    Ok(out)
}

/// `d ∘ d = 0` for each named complex.
pub fn check_d_squared(complexes: &[(&str, &FreeComplex)]) -> CheckReport {
    let name = "d-squared";
    match complexes
        .iter()
        .find_map(|(label, c)| c.d_squared_failure().map(|i| (label, i)))
    {
        None => CheckReport::new(
            name,
            Status::Pass,
            format!("{} complexes", complexes.len()),
            json!({ "complexes": complexes.iter().map(|(l, _)| *l).collect::<Vec<_>>() }),
        ),
        Some((label, i)) => CheckReport::new(
            name,
            Status::Fail,
            format!("d_{} d_{i} != 0 in {label}", i - 1),
            json!({ "complex": label, "position": i }),
        ),
    }
}

/// Minimalized Taylor complexes of `count` seeded generator orders give the
/// same Betti table.
pub fn check_taylor_permutations(
    ideal: &MonomialIdeal,
    count: usize,
    seed: u64,
    max_taylor: usize,
) -> Result<CheckReport> {
    let name = "taylor-permutations";
    if ideal.len() > max_taylor {
        return Ok(CheckReport::new(
            name,
            Status::Skipped,
            format!("{} generators exceed the Taylor cap {max_taylor}", ideal.len()),
            Value::Null,
        ));
    }
    let reference = oracle_betti(ideal, max_taylor)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = ideal.gens().to_vec();
    for t in 0..count {
        gens.shuffle(&mut rng);
        let m = minimalize_complex(&taylor_complex_ordered(ideal.context(), &gens, max_taylor)?);
        if BettiTable::from_complex(&m)? != reference {
            let order: Vec<String> = gens.iter().map(ToString::to_string).collect();
            return Ok(CheckReport::new(
                name,
                Status::Fail,
                format!("permutation {t} changes the table"),
                json!({ "order": order }),
            ));
        }
    }
    Ok(CheckReport::new(name, Status::Pass, format!("{count} permutations agree"), Value::Null))
}

/// First multidegree `b` at which the alternating sum of strand dimensions of
/// a resolution of `S/J` differs from `[x^b ∉ J]`.
pub fn euler_failure(
    complex: &FreeComplex,
    expect_h0: &MonomialIdeal,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Option<ExponentVector> {
    let n = complex.context().num_vars();
    let bound = complex
        .all_shifts()
        .iter()
        .flatten()
        .fold(ExponentVector::zero(n), |acc, s| acc.lcm(s));
    (0..count).find_map(|_| {
        let b = ExponentVector::new(bound.as_slice().iter().map(|&e| rng.gen_range(0..=e + 1)).collect());
        let chi = strand(complex, &b).euler_characteristic();
        (chi != i64::from(!expect_h0.contains(&b))).then_some(b)
    })
}

pub fn check_euler(complexes: &[(&str, &FreeComplex)], expect_h0: &MonomialIdeal, count: usize, seed: u64) -> CheckReport {
    let name = "euler-strands";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (label, c) in complexes {
        if let Some(b) = euler_failure(c, expect_h0, count, &mut rng) {
            return CheckReport::new(
                name,
                Status::Fail,
                format!("{label}: Euler characteristic wrong at {b}"),
                json!({ "complex": label, "degree": b }),
            );
        }
    }
    CheckReport::new(
        name,
        Status::Pass,
        format!("{count} random multidegrees per complex"),
        Value::Null,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub max_taylor: usize,
    pub seed: u64,
    pub permutations: usize,
    pub euler_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_taylor: DEFAULT_TAYLOR_CAP,
            seed: 0,
            permutations: 5,
            euler_samples: 100,
        }
    }
}

/// Everything checked on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub seed: Option<u64>,
    pub generators: usize,
    pub betti: Option<BettiTable>,
    pub checks: Vec<CheckReport>,
}

impl InstanceReport {
    /// No check failed.
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(CheckReport::failed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check == name)
    }
}

/// Resolves `inst` and runs every check against the independent oracle.
/// Construction errors are reported as failed checks.
pub fn verify_instance(inst: &GmpiInstance, opts: &VerifyOptions) -> Result<InstanceReport> {
    let mut checks = Vec::new();
    let res = match resolve(inst) {
        Ok(r) => r,
        Err(e) => {
            let star = build_star_complex(inst)?;
            checks.extend(star_lemmas(inst, &star)?);
            checks.push(CheckReport::new("construction", Status::Fail, e.to_string(), Value::Null));
            return Ok(InstanceReport {
                seed: None,
                generators: inst.ideal().len(),
                betti: None,
                checks,
            });
        }
    };
    let oracle = independent_oracle(inst.ideal(), opts.max_taylor)?;
    let exact = res.exactness()?;
    checks.push(CheckReport::new(
        "total-exactness",
        Status::of(exact.is_exact()),
        match exact.witness() {
            None => "Tot(D) resolves T/L".to_string(),
            Some(w) => format!("homology {} at position {}, degree {}", w.homology, w.position, w.degree),
        },
        json!(exact),
    ));
    checks.push(check_betti_equivalence(&res, oracle.as_ref())?);
    checks.push(check_theorem_regularity(&res, oracle.as_ref())?);
    checks.push(check_pd_formula(&res, oracle.as_ref())?);
    checks.push(check_linearity(&res)?);
    checks.extend(check_structure_lemmas(&res)?);
    checks.extend(engine_checks(&res, opts)?);
    Ok(InstanceReport {
        seed: None,
        generators: inst.ideal().len(),
        betti: res.betti().ok(),
        checks,
    })
}

/// `d² = 0` on every complex built, Taylor permutation invariance for `L`,
/// and the Euler identity on `Tot(D)` and the resolution of `S/I`.
pub fn engine_checks(res: &GmpiResolution, opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let inst = res.instance();
    let mut named: Vec<(String, &FreeComplex)> = vec![
        ("Tot(D)".into(), res.total()),
        ("resolution of S/I".into(), inst.inducing_resolution()),
    ];
    for i in 0..res.double().num_columns() {
        named.push((format!("column {i}"), res.double().column(i)));
    }
    for l in 0..inst.num_blocks() {
        for (d, b) in res.blocks().block(l) {
            named.push((format!("block {l} degree {d}"), &b.resolution));
        }
    }
    let refs: Vec<(&str, &FreeComplex)> = named.iter().map(|(s, c)| (s.as_str(), *c)).collect();
    let mut out = vec![check_d_squared(&refs)];
    out.push(check_taylor_permutations(inst.ideal(), opts.permutations, opts.seed, opts.max_taylor)?);
    let total_check = check_euler(&[("Tot(D)", res.total())], inst.ideal(), opts.euler_samples, opts.seed);
    let inducing_check = check_euler(
        &[("resolution of S/I", inst.inducing_resolution())],
        inst.inducing(),
        opts.euler_samples,
        opts.seed,
    );
    out.push(if total_check.failed() { total_check } else { inducing_check });
    Ok(out)
}

/// Runs the seeded random instances, in seed order.
pub fn run_suite(seeds: &[u64], bounds: &RandomBounds, opts: &VerifyOptions) -> Result<Vec<InstanceReport>> {
    let results: Vec<Result<InstanceReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| {
                scope.spawn(move || {
                    let inst = random_instance(seed, bounds)?;
                    let opts = VerifyOptions { seed, ..opts.clone() };
                    let mut report = verify_instance(&inst, &opts)?;
                    report.seed = Some(seed);
                    Ok(report)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Invariant("suite worker panicked".into()))))
            .collect()
    });
    results.into_iter().collect()
}

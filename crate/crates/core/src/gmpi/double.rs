use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use super::instance::GmpiInstance;
use super::star::{build_star_complex, StarComplex};
use super::tensor::{tensor_chain_map, tensor_product, TensorComplex};
use crate::complex::{
    exactness_check, lift_chain_map, minimal_resolution, BettiTable, ChainMap, Exactness, FreeComplex,
    MonomialMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Scalar};
use crate::monomial::VariableContext;

/// Minimal resolution `H^(l,d)` of `L_{l,d}` over the block-`l` variables,
/// with position 0 spanned by the generators. Degree 0 is the ring itself.
#[derive(Clone, Debug)]
pub struct BlockResolution {
    pub degree: u32,
    pub resolution: FreeComplex,
    /// `L_{l,d}` has a `d`-linear resolution.
    pub linear: bool,
}

#[derive(Clone, Debug)]
pub struct BlockResolutions {
    blocks: Vec<BTreeMap<u32, BlockResolution>>,
}

impl BlockResolutions {
    pub fn get(&self, block: usize, degree: u32) -> Option<&BlockResolution> {
        self.blocks.get(block)?.get(&degree)
    }

    pub fn block(&self, block: usize) -> &BTreeMap<u32, BlockResolution> {
        &self.blocks[block]
    }

    /// `projdim L_{l,d}`, the length of `H^(l,d)`.
    pub fn projdim(&self, block: usize, degree: u32) -> Option<usize> {
        self.get(block, degree).map(|b| b.resolution.length())
    }

    /// Every substitution ideal in use has a linear resolution.
    pub fn all_linear(&self) -> bool {
        self.blocks.iter().flat_map(BTreeMap::values).all(|b| b.linear)
    }

    /// `(block, degree)` of the substitution ideals without a linear resolution.
    pub fn non_linear(&self) -> Vec<(usize, u32)> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(l, m)| m.values().filter(|b| !b.linear).map(move |b| (l, b.degree)))
            .collect()
    }
}

/// One resolution per rung of each extended ladder, shared by every `(i, j)`
/// with that block degree.
pub fn block_resolutions(inst: &GmpiInstance) -> Result<BlockResolutions> {
    let ctx = inst.context();
    let mut blocks = Vec::with_capacity(ctx.num_blocks());
    for l in 0..ctx.num_blocks() {
        let bctx = ctx.block_context(l);
        let mut by_degree = BTreeMap::new();
        for d in inst.ladder(l).extended() {
            let entry = if d == 0 {
                BlockResolution {
                    degree: 0,
                    resolution: FreeComplex::ring(&bctx),
                    linear: true,
                }
            } else {
                let ideal = inst.family().ideal(l, d)?;
                let quotient = minimal_resolution(&ideal, inst.taylor_cap())?;
                let linear = BettiTable::from_complex(&quotient)?.is_linear_resolution(d);
                BlockResolution {
                    degree: d,
                    resolution: quotient.truncate_front(),
                    linear,
                }
            };
            by_degree.insert(d, entry);
        }
        blocks.push(by_degree);
    }
    Ok(BlockResolutions { blocks })
}

/// The comparison maps `ρ^(l,d_k) : H^(l,d_k) → H^(l,d_{k-1})` between
/// consecutive rungs, and all their composites `τ`.
#[derive(Clone, Debug)]
pub struct ComparisonMaps {
    rho: Vec<BTreeMap<u32, ChainMap>>,
    tau: Vec<BTreeMap<(u32, u32), ChainMap>>,
}

/// `rho[l][d_k]` lifts `L_{l,d_k} ⊆ L_{l,d_{k-1}}` along the extended ladder.
pub fn rho_maps(inst: &GmpiInstance, blocks: &BlockResolutions) -> Result<Vec<BTreeMap<u32, ChainMap>>> {
    (0..inst.num_blocks())
        .map(|l| {
            let ext = inst.ladder(l).extended();
            ext.windows(2)
                .map(|w| {
                    let src = &blocks.get(l, w[1]).expect("rung resolved").resolution;
                    let tgt = &blocks.get(l, w[0]).expect("rung resolved").resolution;
                    Ok((w[1], lift_chain_map(src, tgt)?))
                })
                .collect()
        })
        .collect()
}

impl ComparisonMaps {
    pub fn new(inst: &GmpiInstance, blocks: &BlockResolutions) -> Result<Self> {
        let rho = rho_maps(inst, blocks)?;
        let mut tau = Vec::with_capacity(rho.len());
        for (l, rho_l) in rho.iter().enumerate() {
            let ext = inst.ladder(l).extended();
            let mut by_pair = BTreeMap::new();
            for (hi, &high) in ext.iter().enumerate() {
                let mut current = ChainMap::identity(&blocks.get(l, high).expect("rung resolved").resolution);
                by_pair.insert((high, high), current.clone());
                for lo in (0..hi).rev() {
                    current = rho_l[&ext[lo + 1]].after(&current)?;
                    by_pair.insert((high, ext[lo]), current.clone());
                }
            }
            tau.push(by_pair);
        }
        Ok(Self { rho, tau })
    }

    pub fn rho(&self, block: usize, degree: u32) -> Option<&ChainMap> {
        self.rho.get(block)?.get(&degree)
    }

    /// The composite of consecutive `ρ`s from rung `high` down to rung `low`;
    /// the identity when they agree.
    pub fn between(&self, block: usize, high: u32, low: u32) -> Result<&ChainMap> {
        self.tau
            .get(block)
            .and_then(|m| m.get(&(high, low)))
            .ok_or_else(|| {
                Error::Invariant(format!(
                    "no comparison map from degree {high} to degree {low} in block {block}"
                ))
            })
    }

    /// `τ_i^(l,kj)`: `None` stands for the zero map (`λ^(i)_kj = 0`).
    pub fn tau(&self, inst: &GmpiInstance, i: usize, l: usize, k: usize, j: usize) -> Result<Option<&ChainMap>> {
        let res = inst.inducing_resolution();
        if i == 0 || i >= res.len() || j >= res.rank(i) || k >= res.rank(i - 1) {
            return Err(Error::Invariant(format!("no component ({i}, {k}, {j})")));
        }
        if inst.lambdas()[i - 1].get(k, j).is_zero() {
            return Ok(None);
        }
        let high = res.shifts(i)[j].as_slice()[l];
        let low = res.shifts(i - 1)[k].as_slice()[l];
        self.between(l, high, low).map(Some)
    }
}

/// The double complex with column `i` equal to `⊕_j G^(ij)`, where
/// `G^(ij) = ⊗_l H^(l, a_ij(l))`; column 0 is `T`. Horizontal maps go from
/// column `i` to column `i - 1` within a fixed row.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    ctx: VariableContext,
    degrees: Vec<Vec<Vec<u32>>>,
    columns: Vec<FreeComplex>,
    offsets: Vec<Vec<Vec<usize>>>,
    sigma: Vec<Vec<MonomialMatrix>>,
    lambdas: Vec<QMatrix>,
}

impl DoubleComplex {
    pub fn context(&self) -> &VariableContext {
        &self.ctx
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, i: usize) -> &FreeComplex {
        &self.columns[i]
    }

    /// Block degrees `a_ij(l)` of the summand `G^(ij)`.
    pub fn block_degrees(&self, i: usize, j: usize) -> &[u32] {
        &self.degrees[i][j]
    }

    /// Start of `G^(ij)_r` inside row `r` of column `i`.
    pub fn offset(&self, i: usize, r: usize, j: usize) -> usize {
        self.offsets[i][r][j]
    }

    /// `σ_i` in row `r`, `i >= 1`.
    pub fn sigma(&self, i: usize, r: usize) -> Option<&MonomialMatrix> {
        self.sigma.get(i.checked_sub(1)?)?.get(r)
    }

    pub fn replace_sigma(&mut self, i: usize, r: usize, m: MonomialMatrix) -> Result<()> {
        let slot = self
            .sigma
            .get_mut(i.wrapping_sub(1))
            .and_then(|s| s.get_mut(r))
            .ok_or_else(|| Error::Invariant(format!("no σ_{i} in row {r}")))?;
        if slot.row_shifts() != m.row_shifts() || slot.col_shifts() != m.col_shifts() {
            return Err(Error::MalformedComplex("replacement σ has the wrong shape".into()));
        }
        *slot = m;
        Ok(())
    }

    fn rows(&self, i: usize) -> usize {
        self.sigma.get(i - 1).map_or(0, Vec::len)
    }

    /// First `(i, r)` with `σ_{i-1} ∘ σ_i != 0` in row `r`.
    pub fn sigma_squared_failure(&self) -> Option<(usize, usize)> {
        for i in 2..self.columns.len() {
            for r in 0..self.rows(i) {
                let (Some(a), Some(b)) = (self.sigma(i - 1, r), self.sigma(i, r)) else {
                    continue;
                };
                if !a.compose(b).map_or(false, |m| m.is_zero()) {
                    return Some((i, r));
                }
            }
        }
        None
    }

    /// First `(i, r)` where `σ_i` fails to commute with the vertical maps.
    pub fn sigma_chain_failure(&self) -> Option<(usize, usize)> {
        for i in 1..self.columns.len() {
            for r in 1..self.rows(i) {
                let source = &self.columns[i];
                let target = &self.columns[i - 1];
                let lower = self.sigma(i, r - 1).expect("row exists");
                let rhs = lower.compose(source.diff(r));
                let lhs = if r < target.len() {
                    target.diff(r).compose(self.sigma(i, r).expect("row exists"))
                } else {
                    Ok(MonomialMatrix::zeros(
                        target.shifts(r - 1).to_vec(),
                        source.shifts(r).to_vec(),
                    ))
                };
                match (lhs, rhs) {
                    (Ok(l), Ok(rr)) if l == rr => {}
                    _ => return Some((i, r)),
                }
            }
        }
        None
    }

    /// First `(i, r, row, col)` where `σ_i` has a unit entry.
    pub fn sigma_unit_entry(&self) -> Option<(usize, usize, usize, usize)> {
        self.sigma.iter().enumerate().find_map(|(i, rows)| {
            rows.iter()
                .enumerate()
                .find_map(|(r, m)| m.unit_entries().next().map(|(a, b)| (i + 1, r, a, b)))
        })
    }

    /// Row 0 of `σ` must cover `∂*`: composing with the augmentations
    /// `G^(ij)_0 → L_ij`, the image of every generator of `L_ij` in
    /// `L_{i-1,k}` carries total coefficient `λ^(i)_kj`. Returns the first
    /// offending `(i, k, j)`.
    pub fn augmentation_failure(&self) -> Option<(usize, usize, usize)> {
        for i in 1..self.columns.len() {
            let Some(s) = self.sigma(i, 0) else { continue };
            let lambda = &self.lambdas[i - 1];
            for j in 0..self.degrees[i].len() {
                let start = self.offsets[i][0][j];
                let end = self.offsets[i][0].get(j + 1).copied().unwrap_or(s.ncols());
                for c in start..end {
                    let mut sums = vec![Scalar::zero(); self.degrees[i - 1].len()];
                    for (row, q) in s.column(c) {
                        let k = owner(&self.offsets[i - 1][0], row);
                        sums[k] += q;
                    }
                    for (k, sum) in sums.iter().enumerate() {
                        if sum != lambda.get(k, j) {
                            return Some((i, k, j));
                        }
                    }
                }
            }
        }
        None
    }
}

fn owner(offsets: &[usize], index: usize) -> usize {
    offsets.partition_point(|&o| o <= index) - 1
}

fn direct_sum(ctx: &VariableContext, parts: &[&FreeComplex]) -> Result<(FreeComplex, Vec<Vec<usize>>)> {
    let len = parts.iter().map(|c| c.len()).max().unwrap_or(1);
    let mut offsets = vec![Vec::with_capacity(parts.len()); len];
    let mut shifts = vec![Vec::new(); len];
    for part in parts {
        for r in 0..len {
            offsets[r].push(shifts[r].len());
            shifts[r].extend(part.shifts(r).iter().cloned());
        }
    }
    let mut diffs = Vec::with_capacity(len.saturating_sub(1));
    for r in 1..len {
        let mut d = MonomialMatrix::zeros(shifts[r - 1].clone(), shifts[r].clone());
        for (j, part) in parts.iter().enumerate() {
            if r < part.len() {
                for (a, b, q) in part.diff(r).entries() {
                    d.set(offsets[r - 1][j] + a, offsets[r][j] + b, q.clone())?;
                }
            }
        }
        diffs.push(d);
    }
    Ok((FreeComplex::from_parts(ctx.clone(), shifts, diffs)?, offsets))
}

/// Builds every `G^(ij)` and `σ_i`, with `σ^(kj) = λ^(i)_kj · (τ ⊗ ... ⊗ τ)`.
pub fn build_double_complex(
    inst: &GmpiInstance,
    blocks: &BlockResolutions,
    comparisons: &ComparisonMaps,
) -> Result<DoubleComplex> {
    let ctx = inst.context();
    let res = inst.inducing_resolution();
    let n = inst.num_blocks();
    let degrees: Vec<Vec<Vec<u32>>> = res
        .all_shifts()
        .iter()
        .map(|s| s.iter().map(|a| a.as_slice().to_vec()).collect())
        .collect();

    let mut tensors: HashMap<Vec<u32>, TensorComplex> = HashMap::new();
    for deg in degrees.iter().flatten() {
        if tensors.contains_key(deg) {
            continue;
        }
        let factors = (0..n)
            .map(|l| {
                blocks.get(l, deg[l]).map(|b| b.resolution.clone()).ok_or_else(|| {
                    Error::Invariant(format!(
                        "block degree {} in block {l} is not a rung of the ladder",
                        deg[l]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        tensors.insert(deg.clone(), tensor_product(ctx, &factors)?);
    }

    let mut columns = Vec::with_capacity(degrees.len());
    let mut offsets = Vec::with_capacity(degrees.len());
    for col in &degrees {
        let parts: Vec<&FreeComplex> = col.iter().map(|d| tensors[d].complex()).collect();
        let (c, o) = direct_sum(ctx, &parts)?;
        columns.push(c);
        offsets.push(o);
    }

    let mut maps: HashMap<(Vec<u32>, Vec<u32>), Vec<MonomialMatrix>> = HashMap::new();
    let mut sigma = Vec::with_capacity(degrees.len().saturating_sub(1));
    for i in 1..degrees.len() {
        let lambda = &inst.lambdas()[i - 1];
        let rows = columns[i].len();
        let mut per_row: Vec<MonomialMatrix> = (0..rows)
            .map(|r| {
                MonomialMatrix::zeros(
                    columns[i - 1].shifts(r).to_vec(),
                    columns[i].shifts(r).to_vec(),
                )
            })
            .collect();
        for (j, high) in degrees[i].iter().enumerate() {
            for (k, low) in degrees[i - 1].iter().enumerate() {
                let coeff = lambda.get(k, j);
                if coeff.is_zero() {
                    continue;
                }
                let key = (high.clone(), low.clone());
                if !maps.contains_key(&key) {
                    let taus = (0..n)
                        .map(|l| comparisons.between(l, high[l], low[l]))
                        .collect::<Result<Vec<_>>>()?;
                    let m = tensor_chain_map(&taus, &tensors[high], &tensors[low])?;
                    maps.insert(key.clone(), m);
                }
                for (r, m) in maps[&key].iter().enumerate().take(rows) {
                    if m.is_zero() {
                        continue;
                    }
                    let (ro, co) = (offsets[i - 1][r][k], offsets[i][r][j]);
                    for (a, b, q) in m.entries() {
                        per_row[r].set(ro + a, co + b, coeff * q)?;
                    }
                }
            }
        }
        sigma.push(per_row);
    }

    Ok(DoubleComplex {
        ctx: ctx.clone(),
        degrees,
        columns,
        offsets,
        sigma,
        lambdas: inst.lambdas().to_vec(),
    })
}

/// `Tot(D)_k = ⊕_{i + r = k}` (column `i`, row `r`), with differential
/// `vertical + (-1)^r σ`.
pub fn total_complex(d: &DoubleComplex) -> Result<FreeComplex> {
    let top = (0..d.columns.len())
        .map(|i| i + d.columns[i].len() - 1)
        .max()
        .unwrap_or(0);
    let mut shifts = vec![Vec::new(); top + 1];
    // offsets[k][i]: start of column i inside position k
    let mut offsets = vec![vec![usize::MAX; d.columns.len()]; top + 1];
    for (k, (sh, off)) in shifts.iter_mut().zip(offsets.iter_mut()).enumerate() {
        for (i, col) in d.columns.iter().enumerate().take(k + 1) {
            let r = k - i;
            if r < col.len() {
                off[i] = sh.len();
                sh.extend(col.shifts(r).iter().cloned());
            }
        }
    }
    let mut diffs = Vec::with_capacity(top);
    for k in 1..=top {
        let mut m = MonomialMatrix::zeros(shifts[k - 1].clone(), shifts[k].clone());
        for (i, col) in d.columns.iter().enumerate().take(k + 1) {
            let r = k - i;
            if r >= col.len() {
                continue;
            }
            let co = offsets[k][i];
            if r >= 1 {
                let ro = offsets[k - 1][i];
                for (a, b, q) in col.diff(r).entries() {
                    m.set(ro + a, co + b, q.clone())?;
                }
            }
            if i >= 1 {
                if let Some(s) = d.sigma(i, r) {
                    let ro = offsets[k - 1][i - 1];
                    let sign = if r % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                    for (a, b, q) in s.entries() {
                        m.set(ro + a, co + b, &sign * q)?;
                    }
                }
            }
        }
        diffs.push(m);
    }
    let tot = FreeComplex::from_parts(d.ctx.clone(), shifts, diffs)?;
    if let Some(i) = tot.d_squared_failure() {
        return Err(Error::Invariant(format!("Tot(D) has d_{} ∘ d_{i} != 0", i - 1)));
    }
    Ok(tot)
}

/// Everything built for one instance.
#[derive(Clone, Debug)]
pub struct GmpiResolution {
    instance: GmpiInstance,
    star: StarComplex,
    blocks: BlockResolutions,
    comparisons: ComparisonMaps,
    double: DoubleComplex,
    total: FreeComplex,
}

/// Runs the whole construction: `F*`, the block resolutions, the comparison
/// maps, the double complex and its total complex.
pub fn resolve(inst: &GmpiInstance) -> Result<GmpiResolution> {
    let star = build_star_complex(inst)?;
    let blocks = block_resolutions(inst)?;
    let comparisons = ComparisonMaps::new(inst, &blocks)?;
    let double = build_double_complex(inst, &blocks, &comparisons)?;
    let total = total_complex(&double)?;
    Ok(GmpiResolution {
        instance: inst.clone(),
        star,
        blocks,
        comparisons,
        double,
        total,
    })
}

impl GmpiResolution {
    pub fn instance(&self) -> &GmpiInstance {
        &self.instance
    }

    pub fn star(&self) -> &StarComplex {
        &self.star
    }

    pub fn blocks(&self) -> &BlockResolutions {
        &self.blocks
    }

    pub fn comparisons(&self) -> &ComparisonMaps {
        &self.comparisons
    }

    pub fn double(&self) -> &DoubleComplex {
        &self.double
    }

    /// `Tot(D)`, a resolution of `T/L` with position 0 equal to `T`.
    pub fn total(&self) -> &FreeComplex {
        &self.total
    }

    /// Betti table of `T/L` read off `Tot(D)`; fails if it is not minimal.
    pub fn betti(&self) -> Result<BettiTable> {
        BettiTable::from_complex(&self.total)
    }

    /// All substitution ideals in use have linear resolutions.
    pub fn hypothesis_holds(&self) -> bool {
        self.blocks.all_linear()
    }

    pub fn exactness(&self) -> Result<Exactness> {
        exactness_check(&self.total, self.instance.ideal())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub reg_inducing: i64,
    pub reg_total: i64,
    pub hypothesis: bool,
}

impl RegularityReport {
    pub fn agrees(&self) -> bool {
        self.reg_inducing == self.reg_total
    }
}

/// `reg I` from the resolution of `S/I` and `reg L` from `Tot(D)`.
pub fn gmpi_regularity(res: &GmpiResolution) -> Result<RegularityReport> {
    let reg = |t: &BettiTable| {
        t.regularity(true)
            .ok_or_else(|| Error::Invariant("no generators".into()))
    };
    Ok(RegularityReport {
        reg_inducing: reg(&BettiTable::from_complex(res.instance.inducing_resolution())?)?,
        reg_total: reg(&res.betti()?)?,
        hypothesis: res.hypothesis_holds(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjdimReport {
    pub formula: usize,
    pub total: usize,
}

impl ProjdimReport {
    pub fn agrees(&self) -> bool {
        self.formula == self.total
    }
}

/// `max_{i >= 1, j} (i + Σ_l projdim L_{l,a_ij(l)})` against the length of `Tot(D)`.
pub fn gmpi_projdim(res: &GmpiResolution) -> Result<ProjdimReport> {
    let f = res.instance.inducing_resolution();
    let mut formula = 0;
    for i in 1..f.len() {
        for a in f.shifts(i) {
            let mut sum = i;
            for (l, &d) in a.as_slice().iter().enumerate() {
                sum += res.blocks.projdim(l, d).ok_or_else(|| {
                    Error::Invariant(format!("block degree {d} in block {l} is not a rung"))
                })?;
            }
            formula = formula.max(sum);
        }
    }
    Ok(ProjdimReport {
        formula,
        total: res.betti()?.projective_dimension(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearityReport {
    pub inducing: bool,
    pub substituted: bool,
    pub hypothesis: bool,
}

pub fn gmpi_linearity(res: &GmpiResolution) -> Result<LinearityReport> {
    Ok(LinearityReport {
        inducing: BettiTable::from_complex(res.instance.inducing_resolution())?.is_linear(),
        substituted: res.betti()?.is_linear(),
        hypothesis: res.hypothesis_holds(),
    })
}

use std::collections::BTreeMap;

use crate::complex::{minimal_resolution, scalar_matrices, FreeComplex, DEFAULT_TAYLOR_CAP};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::monomial::{Block, MonomialIdeal, VariableContext};

/// The ideals `L_{l,d}` substituted for `x_l^d`, each living in the variables
/// of block `l`. Degree 0 always means the unit ideal and is never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionFamily {
    ctx: VariableContext,
    ideals: Vec<BTreeMap<u32, MonomialIdeal>>,
}

impl SubstitutionFamily {
    pub fn new(ctx: &VariableContext) -> Self {
        Self {
            ctx: ctx.clone(),
            ideals: vec![BTreeMap::new(); ctx.num_blocks()],
        }
    }

    /// Stores `L_{block,degree}`. The ideal must have as many variables as the
    /// block; it is moved into the block's own context.
    pub fn insert(&mut self, block: usize, degree: u32, ideal: MonomialIdeal) -> Result<()> {
        if block >= self.ctx.num_blocks() {
            return Err(Error::ContextMismatch(format!(
                "block index {block} out of range for {} blocks",
                self.ctx.num_blocks()
            )));
        }
        let name = self.ctx.block_name(block).to_string();
        if degree == 0 {
            return Err(Error::InvalidSubstitution {
                block: name,
                degree,
                reason: "degree 0 is always the unit ideal".into(),
            });
        }
        let local = ideal.with_context(&self.ctx.block_context(block))?;
        self.ideals[block].insert(degree, local);
        Ok(())
    }

    pub fn with(mut self, block: usize, degree: u32, ideal: MonomialIdeal) -> Result<Self> {
        self.insert(block, degree, ideal)?;
        Ok(self)
    }

    pub fn context(&self) -> &VariableContext {
        &self.ctx
    }

    pub fn degrees(&self, block: usize) -> Vec<u32> {
        self.ideals[block].keys().copied().collect()
    }

    pub fn get(&self, block: usize, degree: u32) -> Option<&MonomialIdeal> {
        self.ideals.get(block)?.get(&degree)
    }

    /// `L_{block,degree}` in block variables, with `L_{block,0}` the unit ideal.
    pub fn ideal(&self, block: usize, degree: u32) -> Result<MonomialIdeal> {
        if degree == 0 {
            return Ok(MonomialIdeal::unit(&self.ctx.block_context(block)));
        }
        self.get(block, degree)
            .cloned()
            .ok_or_else(|| Error::MissingSubstitution {
                block: self.ctx.block_name(block).to_string(),
                degree,
            })
    }

    /// `Π_l L_{l,a(l)}` embedded in the full context.
    pub fn substitute(&self, a: &[u32]) -> Result<MonomialIdeal> {
        let mut acc = MonomialIdeal::unit(&self.ctx);
        for (l, &d) in a.iter().enumerate() {
            let local = self.ideal(l, d)?;
            acc = acc.product(&embed_ideal(&self.ctx, l, &local)?)?;
        }
        Ok(acc)
    }

    /// Each stored ideal is non-zero, proper and generated in its own degree.
    pub fn check_ideals(&self) -> Result<()> {
        for (l, by_degree) in self.ideals.iter().enumerate() {
            let name = || self.ctx.block_name(l).to_string();
            let bctx = self.ctx.block_context(l);
            for (&d, ideal) in by_degree {
                if ideal.is_zero() || ideal.is_unit() {
                    return Err(Error::InvalidSubstitution {
                        block: name(),
                        degree: d,
                        reason: if ideal.is_zero() { "zero ideal" } else { "unit ideal" }.into(),
                    });
                }
                if let Some(g) = ideal.gens().iter().find(|g| g.total_degree() != d) {
                    return Err(Error::WrongDegree {
                        block: name(),
                        degree: d,
                        witness: bctx.format_monomial(g),
                    });
                }
            }
        }
        Ok(())
    }

    /// `L_{l,d} ⊆ L_{l,d'}` for all `d > d'` among `degrees`.
    pub fn check_nesting(&self, block: usize, degrees: &[u32]) -> Result<()> {
        let bctx = self.ctx.block_context(block);
        for &high in degrees {
            for &low in degrees.iter().filter(|&&d| d < high && d > 0) {
                let (hi, lo) = (self.ideal(block, high)?, self.ideal(block, low)?);
                if let Some(g) = hi.gens().iter().find(|g| !lo.contains(g)) {
                    return Err(Error::NestingViolation {
                        block: self.ctx.block_name(block).to_string(),
                        high,
                        low,
                        witness: bctx.format_monomial(g),
                    });
                }
            }
        }
        Ok(())
    }
}

/// An ideal of block `block` seen in the full context.
pub fn embed_ideal(ctx: &VariableContext, block: usize, local: &MonomialIdeal) -> Result<MonomialIdeal> {
    MonomialIdeal::new(ctx, local.gens().iter().map(|g| ctx.embed(block, g)))
}

/// Sorted distinct block degrees `d_{l1} < ... < d_{lr}` among the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLadder {
    degrees: Vec<u32>,
}

impl DegreeLadder {
    pub fn new(degrees: impl IntoIterator<Item = u32>) -> Self {
        let mut degrees: Vec<u32> = degrees.into_iter().collect();
        degrees.sort_unstable();
        degrees.dedup();
        Self { degrees }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn contains(&self, d: u32) -> bool {
        self.degrees.binary_search(&d).is_ok()
    }

    /// The ladder with 0 prepended, if it is not already a rung.
    pub fn extended(&self) -> Vec<u32> {
        let mut out = self.degrees.clone();
        if out.first() != Some(&0) {
            out.insert(0, 0);
        }
        out
    }

    /// Degrees of the ladder strictly between `low` and `high`, plus `high`.
    pub fn steps(&self, high: u32, low: u32) -> Option<Vec<u32>> {
        let ext = self.extended();
        let hi = ext.binary_search(&high).ok()?;
        let lo = ext.binary_search(&low).ok()?;
        (lo <= hi).then(|| ext[lo + 1..=hi].to_vec())
    }
}

/// An inducing ideal `I ⊂ S = K[x_1, ..., x_n]` together with substitution
/// ideals, and everything derived from them that does not involve resolving
/// in the big ring: `L_j`, `L` and the minimal resolution of `S/I`.
#[derive(Clone, Debug)]
pub struct GmpiInstance {
    inducing: MonomialIdeal,
    family: SubstitutionFamily,
    ladders: Vec<DegreeLadder>,
    taylor_cap: usize,
    resolution: FreeComplex,
    lambdas: Vec<QMatrix>,
    products: Vec<MonomialIdeal>,
    ideal: MonomialIdeal,
}

impl GmpiInstance {
    pub fn new(inducing: &MonomialIdeal, family: SubstitutionFamily) -> Result<Self> {
        Self::with_cap(inducing, family, DEFAULT_TAYLOR_CAP)
    }

    pub fn with_cap(inducing: &MonomialIdeal, family: SubstitutionFamily, cap: usize) -> Result<Self> {
        let inst = Self::build(inducing, family, cap)?;
        inst.family.check_ideals()?;
        for (l, ladder) in inst.ladders.iter().enumerate() {
            inst.family.check_nesting(l, ladder.degrees())?;
        }
        Ok(inst)
    }

    /// Skips the degree and nesting checks. Only for constructing
    /// counterexamples; everything downstream may then fail.
    pub fn new_unchecked(inducing: &MonomialIdeal, family: SubstitutionFamily) -> Result<Self> {
        Self::build(inducing, family, DEFAULT_TAYLOR_CAP)
    }

    fn build(inducing: &MonomialIdeal, family: SubstitutionFamily, cap: usize) -> Result<Self> {
        let ctx = family.context().clone();
        let n = ctx.num_blocks();
        if inducing.context().num_vars() != n {
            return Err(Error::ContextMismatch(format!(
                "inducing ideal has {} variables but there are {n} blocks",
                inducing.context().num_vars()
            )));
        }
        if inducing.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        if inducing.is_unit() {
            return Err(Error::UnitIdeal);
        }
        let inducing = inducing.with_context(&inducing_context(&ctx))?;
        let ladders: Vec<DegreeLadder> = (0..n)
            .map(|l| DegreeLadder::new(inducing.gens().iter().map(|g| g.as_slice()[l])))
            .collect();
        for (l, ladder) in ladders.iter().enumerate() {
            for &d in ladder.degrees() {
                family.ideal(l, d)?;
            }
        }
        let products = inducing
            .gens()
            .iter()
            .map(|g| family.substitute(g.as_slice()))
            .collect::<Result<Vec<_>>>()?;
        let ideal = MonomialIdeal::new(&ctx, products.iter().flat_map(|p| p.gens().iter().cloned()))?;
        let resolution = minimal_resolution(&inducing, cap)?;
        let lambdas = scalar_matrices(&resolution)?;
        Ok(Self {
            inducing,
            family,
            ladders,
            taylor_cap: cap,
            resolution,
            lambdas,
            products,
            ideal,
        })
    }

    pub fn inducing(&self) -> &MonomialIdeal {
        &self.inducing
    }

    pub fn family(&self) -> &SubstitutionFamily {
        &self.family
    }

    /// The context `T` of `L`.
    pub fn context(&self) -> &VariableContext {
        self.family.context()
    }

    pub fn num_blocks(&self) -> usize {
        self.ladders.len()
    }

    pub fn ladder(&self, block: usize) -> &DegreeLadder {
        &self.ladders[block]
    }

    pub fn ladders(&self) -> &[DegreeLadder] {
        &self.ladders
    }

    pub fn taylor_cap(&self) -> usize {
        self.taylor_cap
    }

    /// Minimal resolution of `S/I`, normalized so that `λ^(1) = (1, ..., 1)`.
    pub fn inducing_resolution(&self) -> &FreeComplex {
        &self.resolution
    }

    /// `lambdas()[i - 1]` is `λ^(i)`.
    pub fn lambdas(&self) -> &[QMatrix] {
        &self.lambdas
    }

    /// `L_j`, indexed like `G(I)`.
    pub fn products(&self) -> &[MonomialIdeal] {
        &self.products
    }

    /// `L = Σ_j L_j`.
    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }
}

/// One variable per block, named after the block.
pub fn inducing_context(ctx: &VariableContext) -> VariableContext {
    let blocks = ctx
        .blocks()
        .iter()
        .map(|b| Block {
            name: b.name.clone(),
            size: 1,
        })
        .collect();
    VariableContext::new(blocks).expect("a context has at least one block")
}

use std::collections::BTreeMap;

use num_traits::Zero;

use super::instance::GmpiInstance;
use crate::complex::{lcm_closure, Exactness, ExactnessWitness};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::monomial::{ExponentVector, MonomialIdeal};

/// Largest block-local lcm lattice enumerated by [`star_acyclicity`].
const BLOCK_CLOSURE_CAP: usize = 1 << 16;

/// The complex `F*`: position `i >= 1` is `⊕_j L_ij`, position 0 is `T`, and
/// the maps are the scalar matrices of the resolution of `S/I`.
#[derive(Clone, Debug)]
pub struct StarComplex {
    ideals: Vec<Vec<MonomialIdeal>>,
    lambdas: Vec<QMatrix>,
}

impl StarComplex {
    /// Assembles a star complex from given data without checks.
    pub fn from_parts(ideals: Vec<Vec<MonomialIdeal>>, lambdas: Vec<QMatrix>) -> Self {
        Self { ideals, lambdas }
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// `ideals(0)` is `[T]`.
    pub fn ideals(&self, i: usize) -> &[MonomialIdeal] {
        &self.ideals[i]
    }

    pub fn ideal(&self, i: usize, j: usize) -> &MonomialIdeal {
        &self.ideals[i][j]
    }

    /// `λ^(i)`, `i >= 1`.
    pub fn lambda(&self, i: usize) -> &QMatrix {
        &self.lambdas[i - 1]
    }

    /// First `i` with `λ^(i-1) λ^(i) != 0`.
    pub fn chain_failure(&self) -> Option<usize> {
        (2..self.ideals.len()).find(|&i| !self.lambda(i - 1).mul(self.lambda(i)).is_zero())
    }

    /// First `(i, k, j)` with `λ^(i)_kj != 0` and `L_ij ⊄ L_{i-1,k}`.
    pub fn well_definedness_failure(&self) -> Option<(usize, usize, usize)> {
        for i in 1..self.ideals.len() {
            for (j, lij) in self.ideals[i].iter().enumerate() {
                for (k, lower) in self.ideals[i - 1].iter().enumerate() {
                    if !self.lambda(i).get(k, j).is_zero() && !lij.is_subset(lower) {
                        return Some((i, k, j));
                    }
                }
            }
        }
        None
    }

    /// `Σ_j L_1j`, the ideal with `H_0(F*) = T/L`.
    pub fn augmentation_ideal(&self) -> Result<MonomialIdeal> {
        let first = self.ideals.get(1).ok_or(Error::ZeroIdeal)?;
        let ctx = first.first().ok_or(Error::ZeroIdeal)?.context().clone();
        MonomialIdeal::new(&ctx, first.iter().flat_map(|l| l.gens().iter().cloned()))
    }
}

/// `L_1j = L_j` and `L_ij = ∩ L_{i-1,k}` over the rows `k` with `λ^(i)_kj != 0`.
pub fn build_star_complex(inst: &GmpiInstance) -> Result<StarComplex> {
    let res = inst.inducing_resolution();
    let ctx = inst.context();
    let mut ideals = vec![vec![MonomialIdeal::unit(ctx)]];
    if res.len() > 1 {
        let by_shift: BTreeMap<&ExponentVector, &MonomialIdeal> =
            inst.inducing().gens().iter().zip(inst.products()).collect();
        let first = res
            .shifts(1)
            .iter()
            .map(|s| {
                by_shift.get(s).map(|l| (*l).clone()).ok_or_else(|| {
                    Error::Invariant(format!("position 1 shift {s} is not a generator of I"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ideals.push(first);
    }
    for i in 2..res.len() {
        let lambda = &inst.lambdas()[i - 1];
        let mut row = Vec::with_capacity(res.rank(i));
        for j in 0..res.rank(i) {
            let above: Vec<&MonomialIdeal> = (0..lambda.rows())
                .filter(|&k| !lambda.get(k, j).is_zero())
                .map(|k| &ideals[i - 1][k])
                .collect();
            row.push(MonomialIdeal::intersect_all(above)?);
        }
        ideals.push(row);
    }
    let star = StarComplex {
        ideals,
        lambdas: inst.lambdas().to_vec(),
    };
    if star.len() > 1 && &star.augmentation_ideal()? != inst.ideal() {
        return Err(Error::Invariant("Σ L_1j differs from L".into()));
    }
    Ok(star)
}

/// Checks that `F*` resolves `T/L`, one strand at a time.
///
/// Every `L_ij` is built from the `L_{l,d}` by products over disjoint blocks
/// and intersections, so whether `x^b ∈ L_ij` depends only on which `L_{l,d}`
/// contain each block part of `b`. One representative per combination of
/// these membership profiles is enough; representatives come from the
/// block-local lcm lattices of the substitution generators.
pub fn star_acyclicity(inst: &GmpiInstance, star: &StarComplex) -> Result<Exactness> {
    let ctx = inst.context();
    let mut per_block: Vec<Vec<ExponentVector>> = Vec::with_capacity(ctx.num_blocks());
    for l in 0..ctx.num_blocks() {
        let degrees = inst.ladder(l).degrees();
        let ideals: Vec<MonomialIdeal> = degrees
            .iter()
            .filter(|&&d| d > 0)
            .map(|&d| inst.family().ideal(l, d))
            .collect::<Result<_>>()?;
        let closure = lcm_closure(
            ctx.block_size(l),
            ideals.iter().flat_map(|i| i.gens()),
            BLOCK_CLOSURE_CAP,
        )?;
        let mut reps: BTreeMap<Vec<bool>, ExponentVector> = BTreeMap::new();
        for b in closure {
            let profile: Vec<bool> = ideals.iter().map(|i| i.contains(&b)).collect();
            reps.entry(profile).or_insert(b);
        }
        per_block.push(reps.into_values().map(|b| ctx.embed(l, &b)).collect());
    }
    let l_ideal = star.augmentation_ideal().unwrap_or_else(|_| MonomialIdeal::zero(ctx));
    let mut choice = vec![0usize; per_block.len()];
    let mut checked = 0usize;
    loop {
        let b = choice
            .iter()
            .enumerate()
            .fold(ExponentVector::zero(ctx.num_vars()), |acc, (l, &c)| acc.mul(&per_block[l][c]));
        if let Some(w) = star_strand_failure(star, &l_ideal, &b) {
            return Ok(Exactness::Fails(w));
        }
        checked += 1;
        let mut l = 0;
        loop {
            if l == choice.len() {
                return Ok(Exactness::Exact {
                    strands_checked: checked,
                });
            }
            if choice[l] + 1 < per_block[l].len() {
                choice[l] += 1;
                break;
            }
            choice[l] = 0;
            l += 1;
        }
    }
}

fn star_strand_failure(star: &StarComplex, l_ideal: &MonomialIdeal, b: &ExponentVector) -> Option<ExactnessWitness> {
    let bases: Vec<Vec<usize>> = (0..star.len())
        .map(|i| {
            (0..star.ideals(i).len())
                .filter(|&j| star.ideal(i, j).contains(b))
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = (1..star.len())
        .map(|i| {
            let lam = star.lambda(i);
            let mut m = QMatrix::zeros(bases[i - 1].len(), bases[i].len());
            for (r, &k) in bases[i - 1].iter().enumerate() {
                for (c, &j) in bases[i].iter().enumerate() {
                    m.set(r, c, lam.get(k, j).clone());
                }
            }
            m.rank()
        })
        .collect();
    let expected0 = usize::from(!l_ideal.contains(b));
    bases.iter().enumerate().find_map(|(i, basis)| {
        let out = if i >= 1 { ranks[i - 1] } else { 0 };
        let inc = ranks.get(i).copied().unwrap_or(0);
        // negative when λλ != 0
        let h = basis.len() as i64 - out as i64 - inc as i64;
        let expected = if i == 0 { expected0 } else { 0 };
        (h != expected as i64).then(|| ExactnessWitness {
            degree: b.clone(),
            position: i,
            homology: h.max(0) as usize,
            expected,
        })
    })
}

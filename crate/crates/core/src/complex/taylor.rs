use std::collections::HashMap;

use num_traits::One;

use super::{FreeComplex, MonomialMatrix};
use crate::error::{Error, Result};
use crate::linalg::Scalar;
use crate::monomial::{ExponentVector, MonomialIdeal, VariableContext};

/// Largest generator count for which the Taylor complex (2^m basis elements) is built.
pub const DEFAULT_TAYLOR_CAP: usize = 14;

/// The Taylor resolution of `S/I`: position `k` is spanned by the `k`-subsets
/// of `G(I)`, each shifted by the lcm of its elements.
pub fn taylor_complex(ideal: &MonomialIdeal, cap: usize) -> Result<FreeComplex> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    taylor_complex_ordered(ideal.context(), ideal.gens(), cap)
}

/// The Taylor complex on generators in the given order. The list must be a
/// minimal generating set of a proper non-zero ideal.
pub fn taylor_complex_ordered(ctx: &VariableContext, gens: &[ExponentVector], cap: usize) -> Result<FreeComplex> {
    if gens.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    if gens.iter().any(ExponentVector::is_zero) {
        return Err(Error::UnitIdeal);
    }
    if gens.iter().any(|g| g.len() != ctx.num_vars()) {
        return Err(Error::ContextMismatch("generator does not fit the context".into()));
    }
    let m = gens.len();
    if m > cap || m >= u64::BITS as usize {
        return Err(Error::TaylorTooLarge { gens: m, cap });
    }

    // subsets as bitmasks, grouped by size; within a size, ordered by the sorted index list
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); m + 1];
    for mask in 0u64..(1u64 << m) {
        by_size[mask.count_ones() as usize].push(mask);
    }
    for level in &mut by_size {
        level.sort_by_key(|&mask| subset_indices(mask));
    }
    let lcm_of = |mask: u64| -> ExponentVector {
        subset_indices(mask)
            .into_iter()
            .fold(ExponentVector::zero(ctx.num_vars()), |acc, i| acc.lcm(&gens[i]))
    };
    let shifts: Vec<Vec<ExponentVector>> = by_size
        .iter()
        .map(|level| level.iter().map(|&mask| lcm_of(mask)).collect())
        .collect();
    let index: Vec<HashMap<u64, usize>> = by_size
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, &mask)| (mask, i)).collect())
        .collect();

    let mut diffs = Vec::with_capacity(m);
    for k in 1..=m {
        let mut d = MonomialMatrix::zeros(shifts[k - 1].clone(), shifts[k].clone());
        for (c, &mask) in by_size[k].iter().enumerate() {
            for (pos, i) in subset_indices(mask).into_iter().enumerate() {
                let face = mask & !(1u64 << i);
                let r = index[k - 1][&face];
                let sign = if pos % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                d.set(r, c, sign)?;
            }
        }
        diffs.push(d);
    }
    FreeComplex::from_parts(ctx.clone(), shifts, diffs)
}

fn subset_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

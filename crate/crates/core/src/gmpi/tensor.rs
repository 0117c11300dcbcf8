//! Tensor products over `K` of complexes in disjoint blocks of variables.
//!
//! A basis element of the product is a tuple of basis elements of the factors,
//! keyed by the positions of the factors and the indices inside them. Position
//! `r` lists keys ordered by position tuple, then by index tuple.

use std::collections::HashMap;

use num_traits::One;

use crate::complex::{ChainMap, FreeComplex, MonomialMatrix};
use crate::error::{Error, Result};
use crate::linalg::Scalar;
use crate::monomial::{ExponentVector, VariableContext};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorKey {
    pub positions: Vec<usize>,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TensorComplex {
    complex: FreeComplex,
    keys: Vec<Vec<TensorKey>>,
    lookup: Vec<HashMap<TensorKey, usize>>,
}

impl TensorComplex {
    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn keys(&self, r: usize) -> &[TensorKey] {
        self.keys.get(r).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, key: &TensorKey) -> Option<usize> {
        let r = key.positions.iter().sum::<usize>();
        self.lookup.get(r)?.get(key).copied()
    }
}

/// `factors[l]` lives in the variables of block `l` of `ctx`. The differential
/// carries the Koszul sign `(-1)^(r_1 + ... + r_{l-1})` on the `l`-th factor.
pub fn tensor_product(ctx: &VariableContext, factors: &[FreeComplex]) -> Result<TensorComplex> {
    if factors.len() != ctx.num_blocks() {
        return Err(Error::ContextMismatch(format!(
            "{} factors for {} blocks",
            factors.len(),
            ctx.num_blocks()
        )));
    }
    for (l, f) in factors.iter().enumerate() {
        if f.context().num_vars() != ctx.block_size(l) {
            return Err(Error::ContextMismatch(format!("factor {l} does not match its block")));
        }
    }
    let mut all: Vec<TensorKey> = Vec::new();
    let mut positions = vec![0usize; factors.len()];
    loop {
        push_keys(factors, &positions, &mut all);
        let mut l = 0;
        loop {
            if l == factors.len() {
                return assemble(ctx, factors, all);
            }
            if positions[l] + 1 < factors[l].len() {
                positions[l] += 1;
                break;
            }
            positions[l] = 0;
            l += 1;
        }
    }
}

fn push_keys(factors: &[FreeComplex], positions: &[usize], out: &mut Vec<TensorKey>) {
    let ranks: Vec<usize> = factors.iter().zip(positions).map(|(f, &p)| f.rank(p)).collect();
    if ranks.contains(&0) {
        return;
    }
    let mut indices = vec![0usize; factors.len()];
    loop {
        out.push(TensorKey {
            positions: positions.to_vec(),
            indices: indices.clone(),
        });
        let mut l = factors.len();
        loop {
            if l == 0 {
                return;
            }
            l -= 1;
            if indices[l] + 1 < ranks[l] {
                indices[l] += 1;
                break;
            }
            indices[l] = 0;
        }
    }
}

fn assemble(ctx: &VariableContext, factors: &[FreeComplex], mut all: Vec<TensorKey>) -> Result<TensorComplex> {
    all.sort_by(|a, b| {
        let ra: usize = a.positions.iter().sum();
        let rb: usize = b.positions.iter().sum();
        ra.cmp(&rb).then_with(|| a.cmp(b))
    });
    let top = all.last().map_or(0, |k| k.positions.iter().sum());
    let mut keys: Vec<Vec<TensorKey>> = vec![Vec::new(); top + 1];
    for k in all {
        let r: usize = k.positions.iter().sum();
        keys[r].push(k);
    }
    let lookup: Vec<HashMap<TensorKey, usize>> = keys
        .iter()
        .map(|ks| ks.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect())
        .collect();
    let shift = |k: &TensorKey| -> ExponentVector {
        let parts: Vec<&ExponentVector> = factors
            .iter()
            .zip(&k.positions)
            .zip(&k.indices)
            .map(|((f, &p), &i)| &f.shifts(p)[i])
            .collect();
        ExponentVector::concat(&parts)
    };
    let shifts: Vec<Vec<ExponentVector>> = keys.iter().map(|ks| ks.iter().map(shift).collect()).collect();
    let mut diffs = Vec::with_capacity(top);
    for r in 1..=top {
        let mut d = MonomialMatrix::zeros(shifts[r - 1].clone(), shifts[r].clone());
        for (c, key) in keys[r].iter().enumerate() {
            let mut before = 0usize;
            for (l, f) in factors.iter().enumerate() {
                let p = key.positions[l];
                if p >= 1 {
                    let sign = if before % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                    for (row, q) in f.diff(p).column(key.indices[l]) {
                        let mut target = key.clone();
                        target.positions[l] -= 1;
                        target.indices[l] = row;
                        d.set(lookup[r - 1][&target], c, &sign * q)?;
                    }
                }
                before += p;
            }
        }
        diffs.push(d);
    }
    Ok(TensorComplex {
        complex: FreeComplex::from_parts(ctx.clone(), shifts, diffs)?,
        keys,
        lookup,
    })
}

/// `φ_1 ⊗ ... ⊗ φ_n` between two tensor products, position by position. Chain
/// maps of degree 0 tensor without signs.
pub fn tensor_chain_map(
    maps: &[&ChainMap],
    source: &TensorComplex,
    target: &TensorComplex,
) -> Result<Vec<MonomialMatrix>> {
    let mut out = Vec::with_capacity(source.complex.len());
    for r in 0..source.complex.len() {
        let mut m = MonomialMatrix::zeros(
            target.complex.shifts(r).to_vec(),
            source.complex.shifts(r).to_vec(),
        );
        for (c, key) in source.keys(r).iter().enumerate() {
            // partial products over the factors handled so far
            let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
            for (l, phi) in maps.iter().enumerate() {
                let Some(block) = phi.map(key.positions[l]) else {
                    partial.clear();
                    break;
                };
                let col: Vec<(usize, &Scalar)> = block.column(key.indices[l]).collect();
                partial = partial
                    .iter()
                    .flat_map(|(idx, q)| {
                        col.iter().map(move |(row, q2)| {
                            let mut next = idx.clone();
                            next.push(*row);
                            (next, q * *q2)
                        })
                    })
                    .collect();
                if partial.is_empty() {
                    break;
                }
            }
            for (indices, q) in partial {
                let tkey = TensorKey {
                    positions: key.positions.clone(),
                    indices,
                };
                let row = target.index_of(&tkey).ok_or_else(|| {
                    Error::Invariant("tensor map lands outside the target basis".into())
                })?;
                m.set(row, c, q)?;
            }
        }
        out.push(m);
    }
    Ok(out)
}

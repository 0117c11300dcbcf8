//! Gaussian elimination of unit entries.
//!
//! If `d_k` has a unit entry `u` at `(r, c)`, the complex splits off the
//! trivial piece `e_c → e_r`. What remains has `d_k` replaced by
//! `δ - γ u^{-1} β` on the other rows and columns, `d_{k+1}` with row `c`
//! deleted and `d_{k-1}` with column `r` deleted.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::taylor::taylor_complex;
use super::{FreeComplex, MonomialMatrix};
use crate::error::{Error, Result};
use crate::linalg::Scalar;
use crate::monomial::{ExponentVector, MonomialIdeal};

/// Mutable sparse copy of one differential with row and column indices.
struct WorkMatrix {
    cols: Vec<BTreeMap<usize, Scalar>>,
    rows: Vec<BTreeSet<usize>>,
}

impl WorkMatrix {
    fn from(m: &MonomialMatrix) -> Self {
        let mut cols = vec![BTreeMap::new(); m.ncols()];
        let mut rows = vec![BTreeSet::new(); m.nrows()];
        for (r, c, q) in m.entries() {
            cols[c].insert(r, q.clone());
            rows[r].insert(c);
        }
        Self { cols, rows }
    }

    fn add(&mut self, r: usize, c: usize, delta: Scalar) {
        let entry = self.cols[c].entry(r).or_insert_with(Scalar::zero);
        *entry += delta;
        if entry.is_zero() {
            self.cols[c].remove(&r);
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c);
        }
    }

    fn delete_row(&mut self, r: usize) {
        for c in std::mem::take(&mut self.rows[r]) {
            self.cols[c].remove(&r);
        }
    }

    fn delete_col(&mut self, c: usize) {
        for r in std::mem::take(&mut self.cols[c]).into_keys() {
            self.rows[r].remove(&c);
        }
    }
}

/// Cancels unit entries until none remain. Positions are processed from the
/// bottom up; inside a differential the lexicographically smallest `(row, col)`
/// unit is cancelled first.
pub fn minimalize_complex(complex: &FreeComplex) -> FreeComplex {
    let p = complex.length();
    let shifts = complex.all_shifts();
    let mut work: Vec<WorkMatrix> = complex.diffs().iter().map(WorkMatrix::from).collect();
    let mut alive: Vec<Vec<bool>> = shifts.iter().map(|s| vec![true; s.len()]).collect();

    for k in 1..=p {
        let (row_shifts, col_shifts) = (&shifts[k - 1], &shifts[k]);
        let mut dirty: BTreeSet<usize> = (0..row_shifts.len()).filter(|&r| alive[k - 1][r]).collect();
        while let Some(r) = dirty.pop_first() {
            let d = &work[k - 1];
            let Some(c) = d.rows[r]
                .iter()
                .copied()
                .find(|&c| col_shifts[c] == row_shifts[r])
            else {
                continue;
            };
            let unit = d.cols[c][&r].clone();
            let column: Vec<(usize, Scalar)> = d.cols[c]
                .iter()
                .filter(|(&r2, _)| r2 != r)
                .map(|(&r2, q)| (r2, q.clone()))
                .collect();
            let row: Vec<(usize, Scalar)> = d.rows[r]
                .iter()
                .filter(|&&c2| c2 != c)
                .map(|&c2| (c2, d.cols[c2][&r].clone()))
                .collect();
            let inv = unit.recip();
            let d = &mut work[k - 1];
            for (r2, gamma) in &column {
                let g = gamma * &inv;
                for (c2, beta) in &row {
                    d.add(*r2, *c2, -(&g * beta));
                }
                dirty.insert(*r2);
            }
            d.delete_row(r);
            d.delete_col(c);
            if k < p {
                work[k].delete_row(c);
            }
            if k >= 2 {
                work[k - 2].delete_col(r);
            }
            alive[k - 1][r] = false;
            alive[k][c] = false;
        }
    }

    let keep: Vec<Vec<usize>> = alive
        .iter()
        .map(|a| (0..a.len()).filter(|&i| a[i]).collect())
        .collect();
    let new_shifts: Vec<Vec<ExponentVector>> = keep
        .iter()
        .zip(shifts)
        .map(|(k, s)| k.iter().map(|&i| s[i].clone()).collect())
        .collect();
    let mut diffs = Vec::with_capacity(p);
    for k in 1..=p {
        let mut row_pos = vec![usize::MAX; shifts[k - 1].len()];
        for (i, &r) in keep[k - 1].iter().enumerate() {
            row_pos[r] = i;
        }
        let cols: Vec<BTreeMap<usize, Scalar>> = keep[k]
            .iter()
            .map(|&c| {
                work[k - 1].cols[c]
                    .iter()
                    .map(|(&r, q)| {
                        debug_assert!(row_pos[r] != usize::MAX, "entry in a cancelled row");
                        (row_pos[r], q.clone())
                    })
                    .collect()
            })
            .collect();
        diffs.push(
            MonomialMatrix::from_columns(new_shifts[k - 1].clone(), new_shifts[k].clone(), cols)
                .expect("elimination preserves homogeneity"),
        );
    }
    FreeComplex::from_parts(complex.context().clone(), new_shifts, diffs)
        .expect("elimination preserves the complex structure")
}

/// Rescales position 1 so that `d_1` maps every basis element to its shift
/// monomial with coefficient one. Requires position 0 to be `S`.
pub fn normalize_augmentation(complex: &mut FreeComplex) -> Result<()> {
    if complex.rank(0) != 1 || !complex.shifts(0)[0].is_zero() {
        return Err(Error::MalformedComplex(
            "position 0 must be the ring itself".into(),
        ));
    }
    if complex.len() < 2 {
        return Ok(());
    }
    for c in 0..complex.rank(1) {
        let coeff = complex
            .diff(1)
            .get(0, c)
            .cloned()
            .ok_or_else(|| Error::MalformedComplex(format!("d_1 vanishes on basis element {c}")))?;
        complex.rescale_basis(1, c, &coeff);
    }
    Ok(())
}

/// Minimal multigraded resolution of `S/I` from the Taylor complex.
pub fn minimal_resolution(ideal: &MonomialIdeal, cap: usize) -> Result<FreeComplex> {
    let mut res = minimalize_complex(&taylor_complex(ideal, cap)?);
    normalize_augmentation(&mut res)?;
    Ok(res)
}

/// Minimal resolution of the ideal itself: position 0 is spanned by `G(I)`.
/// The unit ideal is resolved by `S` in position 0.
pub fn ideal_resolution(ideal: &MonomialIdeal, cap: usize) -> Result<FreeComplex> {
    if ideal.is_unit() {
        return Ok(FreeComplex::ring(ideal.context()));
    }
    Ok(minimal_resolution(ideal, cap)?.truncate_front())
}

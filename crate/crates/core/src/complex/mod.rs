//! Multigraded free complexes over a polynomial ring with rational coefficients.
//!
//! Every map between multigraded free modules that this crate handles is
//! homogeneous: the entry in row `r`, column `c` is `λ · x^(col_shift - row_shift)`.
//! A [`MonomialMatrix`] therefore stores only the scalars `λ` together with the
//! row and column shifts, and refuses entries whose monomial factor would not
//! lie in `N^N`.

mod betti;
mod lift;
mod minimal;
mod scalar;
mod strand;
mod taylor;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Scalar};
use crate::monomial::{ExponentVector, VariableContext};

pub use betti::BettiTable;
pub use lift::{lift_chain_map, ChainMap};
pub use minimal::{ideal_resolution, minimal_resolution, minimalize_complex, normalize_augmentation};
pub use scalar::{scalar_complex_exactness, scalar_matrices};
pub use strand::{
    exactness_check, exactness_check_box, lcm_closure, strand, Exactness, ExactnessWitness, Strand,
};
pub use taylor::{taylor_complex, taylor_complex_ordered, DEFAULT_TAYLOR_CAP};

/// Sparse homogeneous matrix between two multigraded free modules.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMatrix {
    row_shifts: Vec<ExponentVector>,
    col_shifts: Vec<ExponentVector>,
    cols: Vec<BTreeMap<usize, Scalar>>,
}

impl MonomialMatrix {
    pub fn zeros(row_shifts: Vec<ExponentVector>, col_shifts: Vec<ExponentVector>) -> Self {
        let cols = vec![BTreeMap::new(); col_shifts.len()];
        Self {
            row_shifts,
            col_shifts,
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.row_shifts.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_shifts.len()
    }

    pub fn row_shifts(&self) -> &[ExponentVector] {
        &self.row_shifts
    }

    pub fn col_shifts(&self) -> &[ExponentVector] {
        &self.col_shifts
    }

    /// Sets entry `(r, c)` to `value`; zero clears it.
    pub fn set(&mut self, r: usize, c: usize, value: Scalar) -> Result<()> {
        if value.is_zero() {
            self.cols[c].remove(&r);
            return Ok(());
        }
        self.check_homogeneous(r, c)?;
        self.cols[c].insert(r, value);
        Ok(())
    }

    pub fn add_to(&mut self, r: usize, c: usize, value: &Scalar) -> Result<()> {
        if value.is_zero() {
            return Ok(());
        }
        self.check_homogeneous(r, c)?;
        let entry = self.cols[c].entry(r).or_insert_with(Scalar::zero);
        *entry += value;
        if entry.is_zero() {
            self.cols[c].remove(&r);
        }
        Ok(())
    }

    fn check_homogeneous(&self, r: usize, c: usize) -> Result<()> {
        if self.row_shifts[r].divides(&self.col_shifts[c]) {
            Ok(())
        } else {
            Err(Error::MalformedComplex(format!(
                "entry ({r}, {c}) would need monomial factor {} - {}",
                self.col_shifts[c], self.row_shifts[r]
            )))
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Scalar> {
        self.cols[c].get(&r)
    }

    /// The monomial factor of a stored entry.
    pub fn monomial(&self, r: usize, c: usize) -> Option<ExponentVector> {
        self.get(r, c)?;
        self.col_shifts[c].checked_div(&self.row_shifts[r])
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.cols[c].iter().map(|(&r, q)| (r, q))
    }

    /// All stored entries, column by column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, q)| (r, c, q)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// Entries whose monomial factor is 1, i.e. units of the ring.
    pub fn unit_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries()
            .filter(|&(r, c, _)| self.row_shifts[r] == self.col_shifts[c])
            .map(|(r, c, _)| (r, c))
    }

    /// True when every entry lies in the graded maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.unit_entries().next().is_none()
    }

    /// `self ∘ rhs`, computed term by term with monomial factors tracked.
    pub fn compose(&self, rhs: &MonomialMatrix) -> Result<MonomialMatrix> {
        if rhs.row_shifts != self.col_shifts {
            return Err(Error::MalformedComplex(
                "composition of matrices with incompatible shifts".into(),
            ));
        }
        let mut out = MonomialMatrix::zeros(self.row_shifts.clone(), rhs.col_shifts.clone());
        for (c, col) in rhs.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (&k, q1) in col {
                let inner = rhs.col_shifts[c]
                    .checked_div(&rhs.row_shifts[k])
                    .expect("stored entries are homogeneous");
                for (&r, q2) in &self.cols[k] {
                    let outer = self.col_shifts[k]
                        .checked_div(&self.row_shifts[r])
                        .expect("stored entries are homogeneous");
                    debug_assert_eq!(
                        Some(inner.mul(&outer)),
                        rhs.col_shifts[c].checked_div(&self.row_shifts[r])
                    );
                    *acc.entry(r).or_insert_with(Scalar::zero) += q2 * q1;
                }
            }
            for (r, q) in acc {
                out.set(r, c, q)?;
            }
        }
        Ok(out)
    }

    /// The scalars `λ` as a dense matrix.
    pub fn scalar_matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.nrows(), self.ncols());
        for (r, c, q) in self.entries() {
            m.set(r, c, q.clone());
        }
        m
    }

    pub fn scale(&mut self, factor: &Scalar) {
        assert!(!factor.is_zero(), "scaling by zero");
        for col in &mut self.cols {
            for q in col.values_mut() {
                *q *= factor;
            }
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, factor: &Scalar) {
        for col in &mut self.cols {
            if let Some(q) = col.get_mut(&r) {
                *q *= factor;
            }
        }
    }

    pub(crate) fn scale_col(&mut self, c: usize, factor: &Scalar) {
        for q in self.cols[c].values_mut() {
            *q *= factor;
        }
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> MonomialMatrix {
        let mut row_pos = vec![usize::MAX; self.nrows()];
        for (i, &r) in rows.iter().enumerate() {
            row_pos[r] = i;
        }
        let mut out = MonomialMatrix::zeros(
            rows.iter().map(|&r| self.row_shifts[r].clone()).collect(),
            cols.iter().map(|&c| self.col_shifts[c].clone()).collect(),
        );
        for (j, &c) in cols.iter().enumerate() {
            for (&r, q) in &self.cols[c] {
                if row_pos[r] != usize::MAX {
                    out.cols[j].insert(row_pos[r], q.clone());
                }
            }
        }
        out
    }

    /// Horizontal concatenation: `[self | rhs]`.
    pub fn hconcat(&self, rhs: &MonomialMatrix) -> Result<MonomialMatrix> {
        if self.row_shifts != rhs.row_shifts {
            return Err(Error::MalformedComplex("hconcat with different rows".into()));
        }
        let mut out = self.clone();
        out.col_shifts.extend(rhs.col_shifts.iter().cloned());
        out.cols.extend(rhs.cols.iter().cloned());
        Ok(out)
    }

    pub(crate) fn from_columns(
        row_shifts: Vec<ExponentVector>,
        col_shifts: Vec<ExponentVector>,
        cols: Vec<BTreeMap<usize, Scalar>>,
    ) -> Result<Self> {
        let m = Self {
            row_shifts,
            col_shifts,
            cols,
        };
        for (r, c, q) in m.entries() {
            if q.is_zero() {
                return Err(Error::MalformedComplex(format!("stored zero at ({r}, {c})")));
            }
            m.check_homogeneous(r, c)?;
        }
        Ok(m)
    }
}

/// A finite complex `0 → F_p → ... → F_1 → F_0` of multigraded free modules.
///
/// Position `i` is the free module with basis shifts `shifts[i]`; `diff(i)` maps
/// position `i` to position `i - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeComplex {
    ctx: VariableContext,
    shifts: Vec<Vec<ExponentVector>>,
    diffs: Vec<MonomialMatrix>,
}

impl FreeComplex {
    pub fn from_parts(
        ctx: VariableContext,
        shifts: Vec<Vec<ExponentVector>>,
        diffs: Vec<MonomialMatrix>,
    ) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::MalformedComplex("a complex needs position 0".into()));
        }
        if diffs.len() + 1 != shifts.len() {
            return Err(Error::MalformedComplex(format!(
                "{} positions but {} differentials",
                shifts.len(),
                diffs.len()
            )));
        }
        for s in shifts.iter().flatten() {
            if s.len() != ctx.num_vars() {
                return Err(Error::ContextMismatch(format!("shift {s} does not fit the context")));
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.row_shifts != shifts[i] || d.col_shifts != shifts[i + 1] {
                return Err(Error::MalformedComplex(format!(
                    "d_{} does not match the shifts of positions {} and {}",
                    i + 1,
                    i + 1,
                    i
                )));
            }
        }
        let mut c = Self { ctx, shifts, diffs };
        c.trim();
        Ok(c)
    }

    /// The free module `S(0)` concentrated in position 0.
    pub fn ring(ctx: &VariableContext) -> Self {
        Self {
            ctx: ctx.clone(),
            shifts: vec![vec![ExponentVector::zero(ctx.num_vars())]],
            diffs: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.shifts.len() > 1 && self.shifts.last().is_some_and(Vec::is_empty) {
            self.shifts.pop();
            self.diffs.pop();
        }
    }

    pub fn context(&self) -> &VariableContext {
        &self.ctx
    }

    /// Number of positions, `p + 1`.
    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.iter().all(Vec::is_empty)
    }

    /// Index of the last non-zero position.
    pub fn length(&self) -> usize {
        self.shifts.len() - 1
    }

    pub fn rank(&self, i: usize) -> usize {
        self.shifts.get(i).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.shifts.iter().map(Vec::len).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.shifts.iter().map(Vec::len).sum()
    }

    pub fn shifts(&self, i: usize) -> &[ExponentVector] {
        self.shifts.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn all_shifts(&self) -> &[Vec<ExponentVector>] {
        &self.shifts
    }

    /// `d_i : F_i → F_{i-1}` for `1 <= i <= length()`.
    pub fn diff(&self, i: usize) -> &MonomialMatrix {
        assert!(i >= 1 && i < self.shifts.len(), "no differential d_{i}");
        &self.diffs[i - 1]
    }

    pub fn diffs(&self) -> &[MonomialMatrix] {
        &self.diffs
    }

    pub(crate) fn diff_mut(&mut self, i: usize) -> &mut MonomialMatrix {
        &mut self.diffs[i - 1]
    }

    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(MonomialMatrix::is_minimal)
    }

    pub fn first_unit_entry(&self) -> Option<(usize, usize, usize)> {
        self.diffs
            .iter()
            .enumerate()
            .find_map(|(i, d)| d.unit_entries().next().map(|(r, c)| (i + 1, r, c)))
    }

    pub fn require_minimal(&self) -> Result<()> {
        match self.first_unit_entry() {
            None => Ok(()),
            Some((position, row, col)) => Err(Error::NotMinimal { position, row, col }),
        }
    }

    /// First `i` with `d_{i-1} ∘ d_i != 0`, if any.
    pub fn d_squared_failure(&self) -> Option<usize> {
        (2..self.shifts.len()).find(|&i| {
            let composite = self
                .diff(i - 1)
                .compose(self.diff(i))
                .expect("consecutive differentials share shifts");
            !composite.is_zero()
        })
    }

    /// True when position 0 is `S` and `d_1` maps each basis element to its
    /// shift monomial with coefficient one.
    pub fn is_augmented_by_ones(&self) -> bool {
        self.shifts[0].len() == 1
            && self.shifts[0][0].is_zero()
            && (self.len() < 2
                || (0..self.rank(1)).all(|c| {
                    let col: Vec<_> = self.diff(1).column(c).collect();
                    col.len() == 1 && col[0].1.is_one()
                }))
    }

    /// Drops position 0, turning a resolution of `S/I` into one of `I`.
    pub fn truncate_front(&self) -> FreeComplex {
        let mut c = FreeComplex {
            ctx: self.ctx.clone(),
            shifts: self.shifts[1..].to_vec(),
            diffs: self.diffs.get(1..).map_or_else(Vec::new, <[_]>::to_vec),
        };
        if c.shifts.is_empty() {
            c.shifts.push(Vec::new());
        }
        c.trim();
        c
    }

    /// Prepends `S` in position 0 with `d_1` sending each basis element of the
    /// old position 0 to its shift monomial.
    pub fn augment(&self) -> FreeComplex {
        let zero = ExponentVector::zero(self.ctx.num_vars());
        let mut d1 = MonomialMatrix::zeros(vec![zero.clone()], self.shifts[0].clone());
        for c in 0..self.shifts[0].len() {
            d1.set(0, c, Scalar::one()).expect("every shift is divisible by 1");
        }
        let mut shifts = vec![vec![zero]];
        shifts.extend(self.shifts.iter().cloned());
        let mut diffs = vec![d1];
        diffs.extend(self.diffs.iter().cloned());
        FreeComplex {
            ctx: self.ctx.clone(),
            shifts,
            diffs,
        }
    }

    /// Applies a permutation-free rescaling of basis element `idx` at position `i`
    /// by `factor` (new basis element = old / factor).
    pub(crate) fn rescale_basis(&mut self, i: usize, idx: usize, factor: &Scalar) {
        if i >= 1 {
            self.diff_mut(i).scale_col(idx, &factor.recip());
        }
        if i + 1 < self.shifts.len() {
            self.diff_mut(i + 1).scale_row(idx, factor);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn rejects_inhomogeneous_entries() {
        let mut m = MonomialMatrix::zeros(vec![ev(&[1, 0])], vec![ev(&[0, 1])]);
        assert!(m.set(0, 0, scalar(1)).is_err());
        let mut ok = MonomialMatrix::zeros(vec![ev(&[1, 0])], vec![ev(&[1, 1])]);
        ok.set(0, 0, scalar(2)).unwrap();
        assert_eq!(ok.monomial(0, 0), Some(ev(&[0, 1])));
        assert!(ok.is_minimal());
    }

    #[test]
    fn koszul_composite_vanishes() {
        let ctx = VariableContext::flat(2).unwrap();
        let zero = ev(&[0, 0]);
        let gens = vec![ev(&[1, 0]), ev(&[0, 1])];
        let top = vec![ev(&[1, 1])];
        let mut d1 = MonomialMatrix::zeros(vec![zero.clone()], gens.clone());
        d1.set(0, 0, scalar(1)).unwrap();
        d1.set(0, 1, scalar(1)).unwrap();
        let mut d2 = MonomialMatrix::zeros(gens.clone(), top.clone());
        d2.set(0, 0, scalar(-1)).unwrap();
        d2.set(1, 0, scalar(1)).unwrap();
        let c = FreeComplex::from_parts(ctx, vec![vec![zero], gens, top], vec![d1, d2]).unwrap();
        assert_eq!(c.d_squared_failure(), None);
        assert!(c.is_minimal());
        assert!(c.is_augmented_by_ones());
        let ideal = c.truncate_front();
        assert_eq!(ideal.ranks(), vec![2, 1]);
        assert_eq!(ideal.augment(), c);
    }
}

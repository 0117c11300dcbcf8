use num_traits::{One, Zero};

use super::{FreeComplex, MonomialMatrix};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Scalar};

/// Degree-0 homogeneous map of complexes; `map(i)` goes from position `i` of
/// the source to position `i` of the target.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    maps: Vec<MonomialMatrix>,
}

impl ChainMap {
    pub fn new(maps: Vec<MonomialMatrix>) -> Self {
        Self { maps }
    }

    pub fn identity(complex: &FreeComplex) -> Self {
        let maps = complex
            .all_shifts()
            .iter()
            .map(|s| {
                let mut m = MonomialMatrix::zeros(s.clone(), s.clone());
                for i in 0..s.len() {
                    m.set(i, i, Scalar::one()).expect("diagonal is homogeneous");
                }
                m
            })
            .collect();
        Self { maps }
    }

    pub fn maps(&self) -> &[MonomialMatrix] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> Option<&MonomialMatrix> {
        self.maps.get(i)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> Result<ChainMap> {
        let maps = first
            .maps
            .iter()
            .enumerate()
            .map(|(i, f)| match self.maps.get(i) {
                Some(g) => g.compose(f),
                None => Ok(MonomialMatrix::zeros(Vec::new(), f.col_shifts().to_vec())),
            })
            .collect::<Result<_>>()?;
        Ok(ChainMap { maps })
    }

    /// Checks `d_target ∘ φ_i = φ_{i-1} ∘ d_source` for every `i >= 1`.
    pub fn commutes(&self, source: &FreeComplex, target: &FreeComplex) -> Result<bool> {
        for i in 1..source.len() {
            let rhs = self.maps[i - 1].compose(source.diff(i))?;
            let lhs = if i < target.len() && i < self.maps.len() {
                target.diff(i).compose(&self.maps[i])?
            } else {
                MonomialMatrix::zeros(target.shifts(i - 1).to_vec(), source.shifts(i).to_vec())
            };
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lifts the inclusion `J ⊆ L` to a chain map between minimal resolutions of
/// the ideals (position 0 spanned by the generators, coefficient one under the
/// augmentation).
///
/// Each generator of `J` goes to the first generator of `L` (canonical order)
/// dividing it. Higher positions solve the strand system `d_target x = φ(d e)`
/// in the degree of `e`, pivoting in column order with free variables zero.
pub fn lift_chain_map(source: &FreeComplex, target: &FreeComplex) -> Result<ChainMap> {
    let mut maps: Vec<MonomialMatrix> = Vec::with_capacity(source.len());

    let mut phi0 = MonomialMatrix::zeros(target.shifts(0).to_vec(), source.shifts(0).to_vec());
    for (c, s) in source.shifts(0).iter().enumerate() {
        let t = target
            .shifts(0)
            .iter()
            .position(|g| g.divides(s))
            .ok_or_else(|| {
                Error::Invariant(format!("source generator {s} is not in the target ideal"))
            })?;
        phi0.set(t, c, Scalar::one())?;
    }
    maps.push(phi0);

    for i in 1..source.len() {
        let image = maps[i - 1].compose(source.diff(i))?;
        let mut phi = MonomialMatrix::zeros(target.shifts(i).to_vec(), source.shifts(i).to_vec());
        for (c, s) in source.shifts(i).iter().enumerate() {
            let y: Vec<(usize, Scalar)> = image.column(c).map(|(r, q)| (r, q.clone())).collect();
            if y.is_empty() {
                continue;
            }
            if i >= target.len() {
                return Err(Error::Invariant(format!(
                    "lift needs position {i} of a target of length {}",
                    target.length()
                )));
            }
            let cols: Vec<usize> = (0..target.rank(i))
                .filter(|&k| target.shifts(i)[k].divides(s))
                .collect();
            let rows: Vec<usize> = (0..target.rank(i - 1))
                .filter(|&k| target.shifts(i - 1)[k].divides(s))
                .collect();
            let mut row_pos = vec![usize::MAX; target.rank(i - 1)];
            for (k, &r) in rows.iter().enumerate() {
                row_pos[r] = k;
            }
            let d = target.diff(i);
            let mut system = QMatrix::zeros(rows.len(), cols.len());
            for (k, &col) in cols.iter().enumerate() {
                for (r, q) in d.column(col) {
                    system.set(row_pos[r], k, q.clone());
                }
            }
            let mut rhs = vec![Scalar::zero(); rows.len()];
            for (r, q) in y {
                if row_pos[r] == usize::MAX {
                    return Err(Error::Invariant(format!(
                        "image of a degree-{s} element has a component outside the strand"
                    )));
                }
                rhs[row_pos[r]] = q;
            }
            let x = system.solve(&rhs).ok_or_else(|| {
                Error::Invariant(format!(
                    "strand system in degree {s} at position {i} has no solution"
                ))
            })?;
            for (k, q) in x.into_iter().enumerate() {
                phi.set(cols[k], c, q)?;
            }
        }
        maps.push(phi);
    }
    Ok(ChainMap { maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{ideal_resolution, DEFAULT_TAYLOR_CAP};
    use crate::linalg::scalar;
    use crate::monomial::{ExponentVector, MonomialIdeal, VariableContext};

    fn res(n: usize, rows: &[&[u32]]) -> FreeComplex {
        let i = MonomialIdeal::from_exponents(&VariableContext::flat(n).unwrap(), rows).unwrap();
        ideal_resolution(&i, DEFAULT_TAYLOR_CAP).unwrap()
    }

    #[test]
    fn square_into_maximal_ideal() {
        let m2 = res(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        let m = res(2, &[&[1, 0], &[0, 1]]);
        let phi = lift_chain_map(&m2, &m).unwrap();
        let p0 = phi.map(0).unwrap();
        // target order: x, y
        assert_eq!(p0.get(0, 0), Some(&scalar(1)));
        assert_eq!(p0.monomial(0, 0), Some(ExponentVector::from([1, 0])));
        assert_eq!(p0.get(0, 1), Some(&scalar(1)));
        assert_eq!(p0.monomial(0, 1), Some(ExponentVector::from([0, 1])));
        assert_eq!(p0.get(1, 2), Some(&scalar(1)));
        assert_eq!(p0.nnz(), 3);
        assert!(phi.commutes(&m2, &m).unwrap());
    }

    #[test]
    fn lift_of_identity_inclusion() {
        let r = res(2, &[&[2, 0], &[1, 1], &[0, 3]]);
        let phi = lift_chain_map(&r, &r).unwrap();
        assert_eq!(phi.map(0), ChainMap::identity(&r).map(0));
        assert!(phi.commutes(&r, &r).unwrap());
    }

    #[test]
    fn into_the_ring() {
        let src = res(2, &[&[1, 0], &[0, 1]]);
        let ctx = VariableContext::flat(2).unwrap();
        let ring = FreeComplex::ring(&ctx);
        let phi = lift_chain_map(&src, &ring).unwrap();
        assert_eq!(phi.map(0).unwrap().nnz(), 2);
        assert!(phi.map(1).unwrap().is_zero());
        assert!(phi.commutes(&src, &ring).unwrap());
    }

    #[test]
    fn non_containment_is_an_error() {
        let src = res(2, &[&[1, 0]]);
        let tgt = res(2, &[&[0, 1]]);
        assert!(lift_chain_map(&src, &tgt).is_err());
    }
}

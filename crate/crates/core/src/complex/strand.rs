//! Degree-`b` strands of a multigraded free complex.
//!
//! The strand of a free module at multidegree `b` has one basis vector per
//! basis element whose shift divides `x^b`; the differential acts on it by the
//! scalars `λ`. A complex resolves `S/J` iff every strand is exact in positive
//! positions with `H_0` of dimension `[x^b ∉ J]`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::FreeComplex;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::monomial::{ExponentVector, MonomialIdeal};

/// Largest lcm lattice the exactness scan will enumerate.
const CLOSURE_CAP: usize = 1 << 18;

#[derive(Clone, Debug)]
pub struct Strand {
    pub degree: ExponentVector,
    /// Indices of the contributing basis elements, per position.
    pub bases: Vec<Vec<usize>>,
    /// `maps[i - 1]` is the strand of `d_i`.
    pub maps: Vec<QMatrix>,
}

impl Strand {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.maps.iter().map(QMatrix::rank).collect();
        self.bases
            .iter()
            .enumerate()
            .map(|(i, basis)| {
                let out = if i >= 1 { ranks[i - 1] } else { 0 };
                let inc = ranks.get(i).copied().unwrap_or(0);
                basis.len() - out - inc
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(i, b)| if i % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }
}

pub fn strand(complex: &FreeComplex, degree: &ExponentVector) -> Strand {
    let bases: Vec<Vec<usize>> = complex
        .all_shifts()
        .iter()
        .map(|shifts| {
            shifts
                .iter()
                .enumerate()
                .filter(|(_, s)| s.divides(degree))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let maps = (1..complex.len())
        .map(|i| {
            let d = complex.diff(i);
            let mut row_pos = vec![usize::MAX; d.nrows()];
            for (k, &r) in bases[i - 1].iter().enumerate() {
                row_pos[r] = k;
            }
            let mut m = QMatrix::zeros(bases[i - 1].len(), bases[i].len());
            for (k, &c) in bases[i].iter().enumerate() {
                for (r, q) in d.column(c) {
                    // homogeneity: shift(r) | shift(c) | b
                    m.set(row_pos[r], k, q.clone());
                }
            }
            m
        })
        .collect();
    Strand {
        degree: degree.clone(),
        bases,
        maps,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessWitness {
    pub degree: ExponentVector,
    pub position: usize,
    pub homology: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Exactness {
    Exact { strands_checked: usize },
    Fails(ExactnessWitness),
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact { .. })
    }

    pub fn witness(&self) -> Option<&ExactnessWitness> {
        match self {
            Exactness::Exact { .. } => None,
            Exactness::Fails(w) => Some(w),
        }
    }
}

/// All lcms of non-empty subsets of `points`, plus the zero vector.
pub fn lcm_closure<'a>(
    n: usize,
    points: impl IntoIterator<Item = &'a ExponentVector>,
    cap: usize,
) -> Result<BTreeSet<ExponentVector>> {
    let mut closure: BTreeSet<ExponentVector> = BTreeSet::new();
    closure.insert(ExponentVector::zero(n));
    let distinct: BTreeSet<&ExponentVector> = points.into_iter().collect();
    for p in distinct {
        if closure.contains(p) {
            continue;
        }
        let new: Vec<ExponentVector> = closure.iter().map(|c| c.lcm(p)).collect();
        closure.extend(new);
        if closure.len() > cap {
            return Err(Error::TooLarge(format!(
                "lcm lattice exceeds {cap} elements"
            )));
        }
    }
    Ok(closure)
}

fn check_degree(complex: &FreeComplex, expect_h0: &MonomialIdeal, b: &ExponentVector) -> Option<ExactnessWitness> {
    let h = strand(complex, b).homology_dims();
    let expected0 = usize::from(!expect_h0.contains(b));
    h.iter().enumerate().find_map(|(i, &dim)| {
        let expected = if i == 0 { expected0 } else { 0 };
        (dim != expected).then(|| ExactnessWitness {
            degree: b.clone(),
            position: i,
            homology: dim,
            expected,
        })
    })
}

/// Checks that `complex` resolves `S/expect_h0`.
///
/// Every strand in the box `[0, B]` (and beyond, where strands stop changing)
/// is isomorphic to the strand at the lcm of the shifts dividing its degree,
/// so scanning the lcm closure of the shifts and of `G(expect_h0)` is exhaustive.
pub fn exactness_check(complex: &FreeComplex, expect_h0: &MonomialIdeal) -> Result<Exactness> {
    let n = complex.context().num_vars();
    let closure = lcm_closure(
        n,
        complex.all_shifts().iter().flatten().chain(expect_h0.gens()),
        CLOSURE_CAP,
    )?;
    for b in &closure {
        if let Some(w) = check_degree(complex, expect_h0, b) {
            return Ok(Exactness::Fails(w));
        }
    }
    Ok(Exactness::Exact {
        strands_checked: closure.len(),
    })
}

/// Literal scan of every multidegree in the box `[0, B]`, `B` the
/// componentwise maximum of all shifts. Exponential in the number of variables.
pub fn exactness_check_box(complex: &FreeComplex, expect_h0: &MonomialIdeal) -> Exactness {
    let n = complex.context().num_vars();
    let bound = complex
        .all_shifts()
        .iter()
        .flatten()
        .chain(expect_h0.gens())
        .fold(ExponentVector::zero(n), |acc, s| acc.lcm(s));
    let bound = bound.as_slice().to_vec();
    let mut current = vec![0u32; n];
    let mut count = 0;
    loop {
        let b = ExponentVector::new(current.clone());
        if let Some(w) = check_degree(complex, expect_h0, &b) {
            return Exactness::Fails(w);
        }
        count += 1;
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Exactness::Exact { strands_checked: count };
            }
            if current[i] < bound[i] {
                current[i] += 1;
                break;
            }
            current[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{minimal_resolution, taylor_complex, MonomialMatrix, DEFAULT_TAYLOR_CAP};
    use crate::linalg::scalar;
    use crate::monomial::VariableContext;

    fn ideal(n: usize, rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(&VariableContext::flat(n).unwrap(), rows).unwrap()
    }

    #[test]
    fn strand_at_zero_is_the_field() {
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]);
        let res = minimal_resolution(&i, DEFAULT_TAYLOR_CAP).unwrap();
        let s = strand(&res, &ExponentVector::zero(2));
        assert_eq!(s.dims(), vec![1, 0, 0]);
        let top = strand(&res, &ExponentVector::from([2, 3]));
        assert_eq!(top.dims(), res.ranks());
    }

    #[test]
    fn koszul_and_taylor_are_exact() {
        let xy = ideal(2, &[&[1, 0], &[0, 1]]);
        let k = taylor_complex(&xy, DEFAULT_TAYLOR_CAP).unwrap();
        assert!(exactness_check(&k, &xy).unwrap().is_exact());
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]);
        let t = taylor_complex(&i, DEFAULT_TAYLOR_CAP).unwrap();
        assert!(exactness_check(&t, &i).unwrap().is_exact());
        assert_eq!(
            exactness_check_box(&t, &i),
            Exactness::Exact { strands_checked: 12 }
        );
    }

    #[test]
    fn corrupted_differential_is_caught() {
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]);
        let res = minimal_resolution(&i, DEFAULT_TAYLOR_CAP).unwrap();
        let mut shifts = res.all_shifts().to_vec();
        let mut diffs: Vec<MonomialMatrix> = res.diffs().to_vec();
        // kill one column of d_2
        let col = 0;
        let rows: Vec<usize> = diffs[1].column(col).map(|(r, _)| r).collect();
        for r in rows {
            diffs[1].set(r, col, scalar(0)).unwrap();
        }
        shifts.truncate(3);
        let broken = FreeComplex::from_parts(res.context().clone(), shifts, diffs).unwrap();
        let verdict = exactness_check(&broken, &i).unwrap();
        let w = verdict.witness().expect("must fail");
        assert!(w.position >= 1);
        assert_eq!(exactness_check_box(&broken, &i).is_exact(), false);
    }

    #[test]
    fn wrong_expected_ideal_is_caught() {
        let i = ideal(2, &[&[1, 0], &[0, 1]]);
        let k = taylor_complex(&i, DEFAULT_TAYLOR_CAP).unwrap();
        let other = ideal(2, &[&[1, 0]]);
        let w = exactness_check(&k, &other).unwrap();
        assert_eq!(w.witness().unwrap().position, 0);
    }
}

use super::FreeComplex;
use crate::error::Result;
use crate::linalg::QMatrix;

/// The coefficient matrices `λ^(1), ..., λ^(p)` of a minimal complex, with
/// the monomial factors stripped.
pub fn scalar_matrices(complex: &FreeComplex) -> Result<Vec<QMatrix>> {
    complex.require_minimal()?;
    Ok(complex.diffs().iter().map(|d| d.scalar_matrix()).collect())
}

/// Exactness of `0 → K^{β_p} → ... → K^{β_1} → K → 0`: consecutive products
/// vanish and `rank λ^(i) + rank λ^(i+1) = β_i` at every position.
pub fn scalar_complex_exactness(lambdas: &[QMatrix]) -> bool {
    for w in lambdas.windows(2) {
        if w[0].cols() != w[1].rows() || !w[0].mul(&w[1]).is_zero() {
            return false;
        }
    }
    let ranks: Vec<usize> = lambdas.iter().map(QMatrix::rank).collect();
    let betas: Vec<usize> = match lambdas.first() {
        None => return true,
        Some(first) => std::iter::once(first.rows())
            .chain(lambdas.iter().map(QMatrix::cols))
            .collect(),
    };
    betas.iter().enumerate().all(|(i, &beta)| {
        let out = if i >= 1 { ranks[i - 1] } else { 0 };
        let inc = ranks.get(i).copied().unwrap_or(0);
        out + inc == beta
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{minimal_resolution, DEFAULT_TAYLOR_CAP};
    use crate::monomial::{MonomialIdeal, VariableContext};

    fn lambdas(n: usize, rows: &[&[u32]]) -> Vec<QMatrix> {
        let i = MonomialIdeal::from_exponents(&VariableContext::flat(n).unwrap(), rows).unwrap();
        scalar_matrices(&minimal_resolution(&i, DEFAULT_TAYLOR_CAP).unwrap()).unwrap()
    }

    #[test]
    fn koszul_signs() {
        let l = lambdas(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(l[0], QMatrix::from_rows(&[vec![1, 1]]));
        let a = l[1].get(0, 0).clone();
        assert_eq!(l[1].get(1, 0), &-a.clone());
        assert!(a == crate::linalg::scalar(1) || a == crate::linalg::scalar(-1));
        assert!(scalar_complex_exactness(&l));
    }

    #[test]
    fn first_matrix_is_all_ones() {
        let l = lambdas(3, &[&[2, 1, 0], &[0, 1, 1], &[1, 0, 2], &[0, 0, 3]]);
        assert!((0..l[0].cols()).all(|c| l[0].get(0, c) == &crate::linalg::scalar(1)));
        assert!(scalar_complex_exactness(&l));
    }

    #[test]
    fn three_generator_resolution_is_exact() {
        assert!(scalar_complex_exactness(&lambdas(2, &[&[2, 0], &[1, 1], &[0, 3]])));
    }

    #[test]
    fn corrupted_matrix_fails() {
        let mut l = lambdas(2, &[&[1, 0], &[0, 1]]);
        l[1] = QMatrix::from_rows(&[vec![1], vec![1]]);
        assert!(!scalar_complex_exactness(&l));
    }
}

//! Frobenius functionals with normalized separability elements.

use crate::algebra::{FiniteAlgebra, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Accum, LinearMap, SparseVec};
use crate::scalar::Scalar;

/// A functional `ψ` on `R` together with `e = Σ e¹ ⊗ e²` such that
/// `Σ e¹ ψ(e² x) = x = Σ ψ(x e¹) e²` and `Σ e¹ e² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frobenius {
    pub psi: Vec<Scalar>,
    /// `(a, b, c)` meaning `c · e_a ⊗ e_b`.
    pub element: Vec<(usize, usize, Scalar)>,
}

pub fn apply_functional(f: &[Scalar], v: &[(usize, Scalar)]) -> Scalar {
    v.iter().map(|(i, c)| c * &f[*i]).sum()
}

impl Frobenius {
    /// Dual-basis element of `ψ`; fails when `ψ` is degenerate or the
    /// element does not multiply to the unit.
    pub fn from_functional(r: &FiniteAlgebra, psi: Vec<Scalar>) -> Result<Frobenius> {
        let n = r.dim();
        let gram: Vec<Vec<Scalar>> =
            (0..n).map(|a| (0..n).map(|b| apply_functional(&psi, r.basis_product(a, b))).collect()).collect();
        let inv = LinearMap::from_rows(&gram)?.inverse().map_err(|_| Error::Singular("degenerate Frobenius functional".into()))?;
        let rows = inv.to_rows();
        let mut element = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !rows[a][b].is_zero() {
                    element.push((a, b, rows[a][b].clone()));
                }
            }
        }
        let f = Frobenius { psi, element };
        if &f.multiplied(r) != r.unit() {
            return Err(Error::Singular("separability element does not multiply to 1".into()));
        }
        Ok(f)
    }

    /// Normalized form for a separable algebra in an arbitrary basis:
    /// the regular trace rescaled by the central element `Σ e¹e²` of its
    /// dual basis.
    pub fn normalized(r: &FiniteAlgebra) -> Result<Frobenius> {
        let n = r.dim();
        let trace: Vec<Scalar> = (0..n).map(|x| (0..n).map(|y| linalg::coeff(r.basis_product(x, y), y)).sum()).collect();
        let gram: Vec<Vec<Scalar>> =
            (0..n).map(|a| (0..n).map(|b| apply_functional(&trace, r.basis_product(a, b))).collect()).collect();
        let inv = LinearMap::from_rows(&gram)?.inverse().map_err(|_| Error::Singular("algebra is not separable".into()))?;
        let rows = inv.to_rows();
        let mut u = Accum::new();
        for (a, row) in rows.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                u.add_scaled(c, r.basis_product(a, b));
            }
        }
        let u = u.finish();
        let psi = (0..n).map(|x| apply_functional(&trace, &r.mul(&u, &linalg::unit(x)))).collect();
        Frobenius::from_functional(r, psi)
    }

    /// `ψ = ⊕ d_α tr_α` on a multi-matrix algebra.
    pub fn standard(m: &MultiMatrixAlgebra) -> Frobenius {
        let mut psi = vec![Scalar::zero(); m.dim()];
        let mut element = Vec::new();
        for (alpha, &d) in m.blocks().iter().enumerate() {
            let inv_d = Scalar::ratio(1, d as i64);
            for i in 0..d {
                psi[m.index(alpha, i, i)] = Scalar::from_int(d as i64);
                for j in 0..d {
                    element.push((m.index(alpha, i, j), m.index(alpha, j, i), inv_d.clone()));
                }
            }
        }
        Frobenius { psi, element }
    }

    pub fn eval(&self, v: &[(usize, Scalar)]) -> Scalar {
        apply_functional(&self.psi, v)
    }

    pub fn multiplied(&self, r: &FiniteAlgebra) -> SparseVec {
        let mut acc = Accum::new();
        for (a, b, c) in &self.element {
            acc.add_scaled(c, r.basis_product(*a, *b));
        }
        acc.finish()
    }

    /// Checks both dual-basis identities and normalization.
    pub fn is_valid(&self, r: &FiniteAlgebra) -> bool {
        if &self.multiplied(r) != r.unit() {
            return false;
        }
        (0..r.dim()).all(|x| {
            let ex = linalg::unit(x);
            let mut left = Accum::new();
            let mut right = Accum::new();
            for (a, b, c) in &self.element {
                left.add_scaled(&(c * &self.eval(r.basis_product(*b, x))), &linalg::unit(*a));
                right.add_scaled(&(c * &self.eval(r.basis_product(x, *a))), &linalg::unit(*b));
            }
            left.finish() == ex && right.finish() == ex
        })
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn normalized_matches_standard_on_matrix_units() {
        for blocks in [vec![2, 1], vec![3], vec![1, 1, 1]] {
            let m = crate::algebra::make_multimatrix(&blocks).unwrap();
            assert_eq!(super::Frobenius::normalized(m.algebra()).unwrap().psi, super::Frobenius::standard(&m).psi);
        }
    }

    use super::*;
    use crate::algebra::make_multimatrix;

    #[test]
    fn standard_forms_are_valid() {
        for blocks in [vec![1, 1], vec![2, 1], vec![3]] {
            let m = make_multimatrix(&blocks).unwrap();
            let f = Frobenius::standard(&m);
            assert!(f.is_valid(m.algebra()), "{blocks:?}");
            let g = Frobenius::from_functional(m.algebra(), f.psi.clone()).unwrap();
            assert_eq!(g.multiplied(m.algebra()), f.multiplied(m.algebra()));
            assert!(g.is_valid(m.algebra()));
        }
    }

    #[test]
    fn plain_trace_on_m2_is_not_normalized() {
        let m = make_multimatrix(&[2]).unwrap();
        let mut psi = vec![Scalar::zero(); 4];
        psi[0] = Scalar::one();
        psi[3] = Scalar::one();
        assert!(Frobenius::from_functional(m.algebra(), psi).is_err());
    }
}

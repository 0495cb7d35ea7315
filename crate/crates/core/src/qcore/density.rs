// Copyright 2026 The qpass Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use alloc::vec::Vec;

use super::state::apply_on_raw;
use super::{c, check_targets, qubit_count, scatter_index, Matrix, QError, StateVector, STATE_TOL};

/// Density operator on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: Matrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity (eigenvalues no
    /// smaller than `-STATE_TOL`).
    pub fn new(m: Matrix) -> Result<Self, QError> {
        if !m.is_square() {
            return Err(QError::InvalidDensity("not square"));
        }
        qubit_count(m.rows())?;
        if !m.is_hermitian(STATE_TOL) {
            return Err(QError::InvalidDensity("not hermitian"));
        }
        if (m.trace() - c(1.0, 0.0)).norm() > STATE_TOL {
            return Err(QError::InvalidDensity("trace is not one"));
        }
        let shifted = &m + &Matrix::identity(m.rows()).scale(c(STATE_TOL, 0.0));
        if !shifted.cholesky_succeeds() {
            return Err(QError::InvalidDensity("negative eigenvalue"));
        }
        Ok(DensityMatrix { m })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        DensityMatrix { m: Matrix::outer(psi.amplitudes(), psi.amplitudes()) }
    }

    /// I / 2^n.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1 << qubits;
        DensityMatrix { m: Matrix::identity(dim).scale(c(1.0 / dim as f64, 0.0)) }
    }

    /// Convex mixture `Σ w_i |ψ_i⟩⟨ψ_i|`; weights must sum to one.
    pub fn mixture(terms: &[(f64, StateVector)]) -> Result<Self, QError> {
        let first = terms.first().ok_or(QError::InvalidDensity("empty mixture"))?;
        let mut m = Matrix::zeros(first.1.dim(), first.1.dim());
        for (w, psi) in terms {
            if psi.dim() != first.1.dim() {
                return Err(QError::DimensionMismatch { expected: first.1.dim(), got: psi.dim() });
            }
            m = &m + &Matrix::outer(psi.amplitudes(), psi.amplitudes()).scale(c(*w, 0.0));
        }
        DensityMatrix::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ.
        self.m.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { m: self.m.kron(&other.m) }
    }

    /// `U ρ U†` for a full-width unitary.
    pub fn evolve(&self, u: &Matrix) -> Result<DensityMatrix, QError> {
        let left = u.checked_mul(&self.m)?;
        Ok(DensityMatrix { m: left.checked_mul(&u.adjoint())? })
    }

    /// `U ρ U†` with `U` acting on `targets`.
    pub fn evolve_on(&self, u: &Matrix, targets: &[usize]) -> Result<DensityMatrix, QError> {
        let dim = self.dim();
        // Apply U to every column, then U* to every row.
        let mut cols = Matrix::zeros(dim, dim);
        for j in 0..dim {
            let col: Vec<_> = (0..dim).map(|i| self.m[(i, j)]).collect();
            let out = apply_on_raw(&col, u, targets)?;
            for i in 0..dim {
                cols[(i, j)] = out[i];
            }
        }
        let mut out = Matrix::zeros(dim, dim);
        for i in 0..dim {
            let row: Vec<_> = (0..dim).map(|j| cols[(i, j)].conj()).collect();
            let r = apply_on_raw(&row, u, targets)?;
            for j in 0..dim {
                out[(i, j)] = r[j].conj();
            }
        }
        Ok(DensityMatrix { m: out })
    }

    /// Tr(ρ A) for a full-width operator; real part only.
    pub fn expectation(&self, op: &Matrix) -> Result<f64, QError> {
        Ok(self.m.checked_mul(op)?.trace().re)
    }

    /// ⟨ψ|ρ|ψ⟩.
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64, QError> {
        let v = self.m.apply(psi.amplitudes())?;
        Ok(psi.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<super::C64>().re)
    }

    /// Reduced state on the qubits in `keep`, listed in ascending order.
    /// `keep` must be a non-empty proper subset.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QError> {
        let n = self.qubits();
        check_targets(keep, n)?;
        if keep.len() == n {
            return Err(QError::InvalidSubset);
        }
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let kd = 1 << keep.len();
        let td = 1 << traced.len();
        let mut out = Matrix::zeros(kd, kd);
        for i in 0..kd {
            let bi = scatter_index(0, i, &keep, n);
            for j in 0..kd {
                let bj = scatter_index(0, j, &keep, n);
                let mut s = c(0.0, 0.0);
                for e in 0..td {
                    let off = scatter_index(0, e, &traced, n);
                    s += self.m[(bi | off, bj | off)];
                }
                out[(i, j)] = s;
            }
        }
        Ok(DensityMatrix { m: out })
    }

    /// Reorders qubits: qubit `j` of the result is qubit `order[j]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix, QError> {
        let n = self.qubits();
        if order.len() != n {
            return Err(QError::InvalidSubset);
        }
        check_targets(order, n)?;
        let dim = self.dim();
        let map: Vec<usize> = (0..dim).map(|i| super::permuted_index(i, order)).collect();
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = self.m[(map[i], map[j])];
            }
        }
        Ok(DensityMatrix { m })
    }

    /// Largest entrywise difference between the two operators.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.m.max_abs_diff(&other.m)
    }

    /// Re-checks the density-matrix invariants.
    pub fn validate(&self) -> Result<(), QError> {
        DensityMatrix::new(self.m.clone()).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_plus() -> StateVector {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(alloc::vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn trace_out_b_of_bell_is_half_identity() {
        let r = bell_plus().to_density().partial_trace(&[0]).unwrap();
        assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(1)) < 1e-15);
        let r = bell_plus().to_density().partial_trace(&[1]).unwrap();
        assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(1)) < 1e-15);
    }

    #[test]
    fn trace_of_product_keeps_factor() {
        let rho = StateVector::zero().tensor(&StateVector::one()).to_density();
        let r = rho.partial_trace(&[0]).unwrap();
        assert!(r.max_abs_diff(&StateVector::zero().to_density()) < 1e-15);
    }

    #[test]
    fn invalid_subsets() {
        let rho = bell_plus().to_density();
        assert_eq!(rho.partial_trace(&[]), Err(QError::InvalidSubset));
        assert_eq!(rho.partial_trace(&[0, 1]), Err(QError::InvalidSubset));
        assert_eq!(rho.partial_trace(&[2]), Err(QError::InvalidSubset));
        assert_eq!(rho.partial_trace(&[0, 0]), Err(QError::InvalidSubset));
    }

    #[test]
    fn permute_matches_pure_permute() {
        let psi = StateVector::normalized((0..8).map(|i| c(i as f64, 1.0 - i as f64)).collect()).unwrap();
        let order = [1, 2, 0];
        let a = psi.to_density().permute(&order).unwrap();
        let b = psi.permute(&order).unwrap().to_density();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn purity_values() {
        assert!((bell_plus().to_density().purity() - 1.0).abs() < 1e-15);
        assert!((DensityMatrix::maximally_mixed(1).purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_operators() {
        let not_herm =
            Matrix::from_row_major(2, 2, alloc::vec![c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(DensityMatrix::new(not_herm).is_err());
        let neg = Matrix::diagonal(&[c(1.2, 0.0), c(-0.2, 0.0)]);
        assert!(DensityMatrix::new(neg).is_err());
        let trace2 = Matrix::identity(2);
        assert!(DensityMatrix::new(trace2).is_err());
    }

    #[test]
    fn evolve_on_matches_full_evolution() {
        let h = Matrix::from_row_major(2, 2, alloc::vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
            .unwrap()
            .scale(c(core::f64::consts::FRAC_1_SQRT_2, 0.0));
        let rho = StateVector::normalized(alloc::vec![c(1.0, 0.2), c(0.3, 0.0), c(0.0, -0.5), c(0.1, 0.1)])
            .unwrap()
            .to_density();
        let a = rho.evolve_on(&h, &[1]).unwrap();
        let b = rho.evolve(&Matrix::identity(2).kron(&h)).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }
}

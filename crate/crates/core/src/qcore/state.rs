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

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{c, check_targets, qubit_count, scatter_index, DensityMatrix, Matrix, QError, C64, STATE_TOL};

/// Normalized pure state of `n` qubits, stored as `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps `amps`, requiring a power-of-two length and unit norm within
    /// [`STATE_TOL`].
    pub fn new(amps: Vec<C64>) -> Result<Self, QError> {
        qubit_count(amps.len())?;
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (n2 - 1.0).abs() > STATE_TOL {
            return Err(QError::NotNormalized(n2));
        }
        Ok(StateVector { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self, QError> {
        qubit_count(amps.len())?;
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if n2.is_nan() || n2 <= 0.0 || n2.is_infinite() {
            return Err(QError::NotNormalized(n2));
        }
        let s = 1.0 / libm::sqrt(n2);
        Ok(StateVector { amps: amps.into_iter().map(|a| a * s).collect() })
    }

    /// Computational basis state |index⟩ on `qubits` qubits.
    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![C64::zero(); 1 << qubits];
        amps[index] = c(1.0, 0.0);
        StateVector { amps }
    }

    pub fn zero() -> Self {
        Self::basis(1, 0)
    }

    pub fn one() -> Self {
        Self::basis(1, 1)
    }

    /// |+⟩ on one qubit, (|0⟩ + |1⟩)/√2.
    pub fn plus_x() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        StateVector { amps: vec![c(s, 0.0), c(s, 0.0)] }
    }

    /// (|0⟩ − |1⟩)/√2.
    pub fn minus_x() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        StateVector { amps: vec![c(s, 0.0), c(-s, 0.0)] }
    }

    pub fn qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64, QError> {
        if self.dim() != other.dim() {
            return Err(QError::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// |⟨self|other⟩|, or 0 when the dimensions differ.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).map(|z| z.norm()).unwrap_or(0.0)
    }

    /// Largest amplitude difference, phase included.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Phase-blind equality: `1 − |⟨self|other⟩| ≤ tol`.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && 1.0 - self.overlap(other) <= tol
    }

    /// Kronecker product, `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }

    /// `op · |ψ⟩` for a full-width unitary.
    pub fn evolve(&self, op: &Matrix) -> Result<StateVector, QError> {
        if !op.is_square() {
            return Err(QError::DimensionMismatch { expected: op.rows(), got: op.cols() });
        }
        Ok(StateVector { amps: op.apply(&self.amps)? })
    }

    /// Applies a `2^k`-dimensional operator to the qubits listed in
    /// `targets`, in that order.
    pub fn evolve_on(&self, op: &Matrix, targets: &[usize]) -> Result<StateVector, QError> {
        Ok(StateVector { amps: apply_on_raw(&self.amps, op, targets)? })
    }

    /// Reorders qubits: qubit `j` of the result is qubit `order[j]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector, QError> {
        let n = self.qubits();
        if order.len() != n {
            return Err(QError::InvalidSubset);
        }
        check_targets(order, n)?;
        let amps = (0..self.dim()).map(|i| self.amps[super::permuted_index(i, order)]).collect();
        Ok(StateVector { amps })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Contracts the qubits in `targets` against the known factor `factor`,
    /// returning the state of the remaining qubits (renormalized). Used after
    /// a rank-one measurement has left `targets` in `factor`.
    pub fn split_off(&self, targets: &[usize], factor: &StateVector) -> Result<StateVector, QError> {
        let n = self.qubits();
        check_targets(targets, n)?;
        if factor.qubits() != targets.len() {
            return Err(QError::DimensionMismatch { expected: 1 << targets.len(), got: factor.dim() });
        }
        if targets.len() == n {
            return Err(QError::InvalidSubset);
        }
        let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
        let mut out = vec![C64::zero(); 1 << rest.len()];
        for (r, slot) in out.iter_mut().enumerate() {
            let base = scatter_index(0, r, &rest, n);
            for (t, f) in factor.amps.iter().enumerate() {
                *slot += f.conj() * self.amps[scatter_index(base, t, targets, n)];
            }
        }
        StateVector::normalized(out)
    }
}

impl TryFrom<Vec<C64>> for StateVector {
    type Error = QError;

    fn try_from(amps: Vec<C64>) -> Result<Self, QError> {
        StateVector::new(amps)
    }
}

impl From<StateVector> for Vec<C64> {
    fn from(s: StateVector) -> Vec<C64> {
        s.amps
    }
}

/// Kronecker product of two states, `a` on the leading qubits.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

pub(crate) fn apply_on_raw(amps: &[C64], op: &Matrix, targets: &[usize]) -> Result<Vec<C64>, QError> {
    let n = qubit_count(amps.len())?;
    check_targets(targets, n)?;
    let k = targets.len();
    let sub_dim = 1 << k;
    if op.rows() != sub_dim || op.cols() != sub_dim {
        return Err(QError::DimensionMismatch { expected: sub_dim, got: op.rows() });
    }
    let mask: usize = targets.iter().map(|&t| super::bit_of(t, n)).sum();
    let mut out = amps.to_vec();
    let mut idx = vec![0usize; sub_dim];
    let mut sub = vec![C64::zero(); sub_dim];
    for base in (0..amps.len()).filter(|b| b & mask == 0) {
        for (s, slot) in idx.iter_mut().enumerate() {
            *slot = scatter_index(base, s, targets, n);
        }
        for (s, &i) in idx.iter().enumerate() {
            sub[s] = amps[i];
        }
        for (r, &i) in idx.iter().enumerate() {
            out[i] = op.row(r).iter().zip(&sub).map(|(a, b)| a * b).sum();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn zero_tensor_zero() {
        let s = StateVector::zero().tensor(&StateVector::zero());
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn zero_tensor_bell_plus() {
        let bell =
            StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), C64::zero(), C64::zero(), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let s = StateVector::zero().tensor(&bell);
        let expect = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2, 0.0, 0.0, 0.0, 0.0];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_lengths_and_norms() {
        assert_eq!(StateVector::new(vec![c(1.0, 0.0); 3]), Err(QError::NotPowerOfTwo(3)));
        assert!(matches!(StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]), Err(QError::NotNormalized(_))));
        assert!(StateVector::normalized(vec![C64::zero(); 2]).is_err());
    }

    #[test]
    fn evolve_on_matches_full_kron() {
        // X on qubit 1 of 3 equals I ⊗ X ⊗ I.
        let x = Matrix::from_row_major(2, 2, vec![C64::zero(), c(1.0, 0.0), c(1.0, 0.0), C64::zero()]).unwrap();
        let full = Matrix::identity(2).kron(&x).kron(&Matrix::identity(2));
        let psi = StateVector::normalized((0..8).map(|i| c(i as f64 + 1.0, -(i as f64))).collect()).unwrap();
        let a = psi.evolve_on(&x, &[1]).unwrap();
        let b = psi.evolve(&full).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn evolve_on_respects_target_order() {
        // CNOT with control 2, target 0 on |001⟩ gives |101⟩.
        let mut cnot = Matrix::zeros(4, 4);
        cnot[(0, 0)] = c(1.0, 0.0);
        cnot[(1, 1)] = c(1.0, 0.0);
        cnot[(2, 3)] = c(1.0, 0.0);
        cnot[(3, 2)] = c(1.0, 0.0);
        let out = StateVector::basis(3, 0b001).evolve_on(&cnot, &[2, 0]).unwrap();
        assert!(out.max_abs_diff(&StateVector::basis(3, 0b101)) < 1e-15);
    }

    #[test]
    fn split_off_recovers_factor() {
        let a = StateVector::normalized(vec![c(0.3, 0.1), c(-0.2, 0.9)]).unwrap();
        let b = StateVector::plus_x().tensor(&StateVector::one());
        let joint = b.tensor(&a);
        let rest = joint.split_off(&[0, 1], &b).unwrap();
        assert!(rest.max_abs_diff(&a) < 1e-15);
        let joint2 = a.tensor(&b);
        let rest2 = joint2.split_off(&[1, 2], &b).unwrap();
        assert!(rest2.max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn permute_swaps_qubits() {
        let s = StateVector::basis(3, 0b110).permute(&[2, 0, 1]).unwrap();
        assert!(s.max_abs_diff(&StateVector::basis(3, 0b011)).abs() < 1e-15);
        let a = StateVector::normalized(vec![c(0.3, 0.1), c(-0.2, 0.9)]).unwrap();
        let b = StateVector::plus_x();
        let ab = a.tensor(&b).permute(&[1, 0]).unwrap();
        assert!(ab.max_abs_diff(&b.tensor(&a)) < 1e-15);
        assert!(a.permute(&[0, 0]).is_err());
    }

    #[test]
    fn serde_rejects_unnormalized() {
        let v: Vec<C64> = vec![c(2.0, 0.0), C64::zero()];
        assert!(StateVector::try_from(v).is_err());
    }
}

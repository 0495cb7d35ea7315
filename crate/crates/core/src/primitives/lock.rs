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

//! The lock unitary `U` on (password qubit ⊗ key pair).
//!
//! `U` is the identity on |0⟩|+⟩ and on every |b⟩|B_±⟩. On the three
//! dimensional sector spanned by |1⟩|+⟩, |0⟩|−⟩, |1⟩|−⟩ it is a 3×3 unitary
//! `M` whose first row is fixed,
//!
//! ```text
//!   M[0] = (βξ/d, −iαη/d, −iβη/d),
//! ```
//!
//! and whose two remaining rows are the free entries `u_ij = M[i][j−1]`.
//! Any orthonormal completion of the first row gives an admissible `U`.

use alloc::vec::Vec;

use num_traits::Zero;

use super::states::{alpha_ket, c_ket, make_bell, xi_ket, BellKind};
use super::ProtocolParams;
use crate::qcore::{c, DensityMatrix, Matrix, QError, StateVector, C64};

/// Residual below which a Gram–Schmidt candidate is considered dependent.
const DEPENDENT_RESIDUAL: f64 = 1e-8;

/// Rows 2 and 3 of the sector block: `rows[i-1][j-1] = u_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Completion {
    rows: [[C64; 3]; 2],
}

impl Completion {
    /// Gram–Schmidt on e₁, e₂, e₃ (in that order) against the fixed first
    /// row, skipping candidates with residual norm below 1e-8.
    pub fn gram_schmidt(p: &ProtocolParams) -> Self {
        let v = fixed_row(p);
        let mut basis: Vec<[C64; 3]> = Vec::with_capacity(3);
        basis.push(v);
        for e in 0..3 {
            if basis.len() == 3 {
                break;
            }
            let mut w = [C64::zero(); 3];
            w[e] = c(1.0, 0.0);
            for b in &basis {
                // w -= ⟨b|w⟩ b, rows treated as vectors.
                let proj: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for k in 0..3 {
                    w[k] -= proj * b[k];
                }
            }
            let norm = libm::sqrt(w.iter().map(|z| z.norm_sqr()).sum::<f64>());
            if norm < DEPENDENT_RESIDUAL {
                continue;
            }
            for z in &mut w {
                *z /= norm;
            }
            basis.push(w);
        }
        Completion { rows: [basis[1], basis[2]] }
    }

    /// Explicit `u_ij` entries: `rows[0] = (u11, u12, u13)`,
    /// `rows[1] = (u21, u22, u23)`.
    pub fn from_rows(rows: [[C64; 3]; 2]) -> Self {
        Completion { rows }
    }

    /// Another admissible completion: the two free rows recombined by the
    /// 2×2 unitary `w` (row-major).
    pub fn remix(&self, w: [[C64; 2]; 2]) -> Self {
        let mut rows = [[C64::zero(); 3]; 2];
        for (row, wi) in rows.iter_mut().zip(&w) {
            for (j, z) in row.iter_mut().enumerate() {
                *z = wi[0] * self.rows[0][j] + wi[1] * self.rows[1][j];
            }
        }
        Completion { rows }
    }

    /// `u_ij` with `i ∈ {1, 2}`, `j ∈ {1, 2, 3}`.
    pub fn u(&self, i: usize, j: usize) -> C64 {
        self.rows[i - 1][j - 1]
    }

    pub fn rows(&self) -> [[C64; 3]; 2] {
        self.rows
    }
}

fn fixed_row(p: &ProtocolParams) -> [C64; 3] {
    let (a, b, xi, eta, d) = (p.alpha(), p.beta(), p.xi(), p.eta(), p.d());
    [c(b * xi / d, 0.0), c(0.0, -a * eta / d), c(0.0, -b * eta / d)]
}

/// Orthonormal sector basis of the 8-dimensional block, in the order
/// |0+⟩, |1+⟩, |0−⟩, |1−⟩, |0B+⟩, |1B+⟩, |0B−⟩, |1B−⟩.
pub fn sector_basis() -> [StateVector; 8] {
    let k = [StateVector::zero(), StateVector::one()];
    let pair = |b: usize, kind| k[b].tensor(&make_bell(kind));
    [
        pair(0, BellKind::Plus),
        pair(1, BellKind::Plus),
        pair(0, BellKind::Minus),
        pair(1, BellKind::Minus),
        pair(0, BellKind::BPlus),
        pair(1, BellKind::BPlus),
        pair(0, BellKind::BMinus),
        pair(1, BellKind::BMinus),
    ]
}

/// The 8×8 lock unitary together with the parameters and completion that
/// produced it. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct LockUnitary {
    matrix: Matrix,
    inverse: Matrix,
    params: ProtocolParams,
    completion: Completion,
}

/// Largest residual of each defining property of `U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockCheck {
    pub unitarity: f64,
    /// The three norm and three cross relations of the `u_ij`.
    pub u_relations: [f64; 6],
    /// `U|0⟩|+⟩ = |0⟩|+⟩` and the fixed |+⟩-sector rows.
    pub plus_sector: f64,
    /// `U|b⟩|B_±⟩ = |b⟩|B_±⟩`.
    pub identity_sector: f64,
    /// `U|α⟩|ξ⟩ = |c⟩|+⟩`, phase-exact.
    pub honest_unlock: f64,
    /// `U⁻¹|0⟩|+⟩` and `U⁻¹|1⟩|+⟩` displays.
    pub inverse_relations: f64,
}

impl LockCheck {
    pub fn max_residual(&self) -> f64 {
        self.u_relations.iter().copied().fold(
            self.unitarity
                .max(self.plus_sector)
                .max(self.identity_sector)
                .max(self.honest_unlock)
                .max(self.inverse_relations),
            f64::max,
        )
    }
}

/// Default construction: Gram–Schmidt completion.
pub fn build_lock_unitary(p: &ProtocolParams) -> LockUnitary {
    LockUnitary::with_completion(p, Completion::gram_schmidt(p)).expect("Gram–Schmidt completion is unitary")
}

impl LockUnitary {
    /// Assembles `U` from an explicit completion; fails unless the sector
    /// block is unitary within 1e-10.
    pub fn with_completion(p: &ProtocolParams, completion: Completion) -> Result<Self, QError> {
        let v = fixed_row(p);
        let mut block = Matrix::identity(8);
        for j in 0..3 {
            block[(1, 1 + j)] = v[j];
            block[(2, 1 + j)] = completion.rows[0][j];
            block[(3, 1 + j)] = completion.rows[1][j];
        }
        if !block.is_unitary(1e-10) {
            return Err(QError::NotUnitary);
        }
        let basis = sector_basis();
        let mut w = Matrix::zeros(8, 8);
        for (col, s) in basis.iter().enumerate() {
            for (row, a) in s.amplitudes().iter().enumerate() {
                w[(row, col)] = *a;
            }
        }
        let matrix = &(&w * &block) * &w.adjoint();
        let inverse = matrix.adjoint();
        Ok(LockUnitary { matrix, inverse, params: *p, completion })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `U⁻¹ = U†`.
    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn completion(&self) -> &Completion {
        &self.completion
    }

    /// Evaluates every defining relation.
    pub fn check(&self) -> LockCheck {
        let p = &self.params;
        let (a, b, xi, eta, d) = (p.alpha(), p.beta(), p.xi(), p.eta(), p.d());
        let d2 = d * d;
        let u = |i, j| self.completion.u(i, j);
        let norm2 = |z: C64| z.norm_sqr();
        let u_relations = [
            (norm2(u(1, 1)) + norm2(u(2, 1)) - (1.0 - b * b * xi * xi / d2)).abs(),
            (norm2(u(1, 2)) + norm2(u(2, 2)) - (1.0 - a * a * eta * eta / d2)).abs(),
            (norm2(u(1, 3)) + norm2(u(2, 3)) - (1.0 - b * b * eta * eta / d2)).abs(),
            (u(1, 1) * u(1, 3).conj() + u(2, 1) * u(2, 3).conj() - c(0.0, -b * b * xi * eta / d2)).norm(),
            (u(1, 2) * u(1, 3).conj() + u(2, 2) * u(2, 3).conj() - c(-a * b * eta * eta / d2, 0.0)).norm(),
            (u(1, 1) * u(1, 2).conj() + u(2, 1) * u(2, 2).conj() - c(0.0, -a * b * xi * eta / d2)).norm(),
        ];

        let s = sector_basis();
        let lin = |terms: &[(C64, usize)]| -> StateVector {
            let mut amps = alloc::vec![C64::zero(); 8];
            for (coef, idx) in terms {
                for (o, x) in amps.iter_mut().zip(s[*idx].amplitudes()) {
                    *o += coef * x;
                }
            }
            StateVector::normalized(amps).expect("nonzero combination")
        };
        let apply = |m: &Matrix, v: &StateVector| v.evolve(m).expect("8-dimensional");

        // Columns of the |+⟩ sector as displayed.
        let col1 = lin(&[(c(b * xi / d, 0.0), 1), (u(1, 1), 2), (u(2, 1), 3)]);
        let col2 = lin(&[(c(0.0, -a * eta / d), 1), (u(1, 2), 2), (u(2, 2), 3)]);
        let col3 = lin(&[(c(0.0, -b * eta / d), 1), (u(1, 3), 2), (u(2, 3), 3)]);
        let plus_sector = [
            apply(&self.matrix, &s[0]).max_abs_diff(&s[0]),
            apply(&self.matrix, &s[1]).max_abs_diff(&col1),
            apply(&self.matrix, &s[2]).max_abs_diff(&col2),
            apply(&self.matrix, &s[3]).max_abs_diff(&col3),
        ]
        .into_iter()
        .fold(0.0, f64::max);

        let identity_sector = s[4..].iter().map(|v| apply(&self.matrix, v).max_abs_diff(v)).fold(0.0, f64::max);

        let honest_in = alpha_ket(p).tensor(&xi_ket(p));
        let honest_out = c_ket(p).tensor(&make_bell(BellKind::Plus));
        let honest_unlock = apply(&self.matrix, &honest_in)
            .max_abs_diff(&honest_out)
            .max(apply(&self.inverse, &honest_out).max_abs_diff(&honest_in));

        let inv1 = lin(&[(c(b * xi / d, 0.0), 1), (c(0.0, a * eta / d), 2), (c(0.0, b * eta / d), 3)]);
        let inverse_relations =
            apply(&self.inverse, &s[0]).max_abs_diff(&s[0]).max(apply(&self.inverse, &s[1]).max_abs_diff(&inv1));

        let unitarity = (&self.matrix * &self.matrix.adjoint()).max_abs_diff(&Matrix::identity(8));

        LockCheck { unitarity, u_relations, plus_sector, identity_sector, honest_unlock, inverse_relations }
    }
}

/// Anything `U` can act on: a pure or mixed (Q_K, Q_A, Q_B) block.
pub trait LockBlock: Sized {
    fn conjugate_by(&self, m: &Matrix) -> Result<Self, QError>;
}

impl LockBlock for StateVector {
    fn conjugate_by(&self, m: &Matrix) -> Result<Self, QError> {
        if self.dim() != 8 {
            return Err(QError::DimensionMismatch { expected: 8, got: self.dim() });
        }
        self.evolve(m)
    }
}

impl LockBlock for DensityMatrix {
    fn conjugate_by(&self, m: &Matrix) -> Result<Self, QError> {
        if self.dim() != 8 {
            return Err(QError::DimensionMismatch { expected: 8, got: self.dim() });
        }
        self.evolve(m)
    }
}

/// The verifier's unlock device: applies `U`.
pub fn apply_unlock<B: LockBlock>(u: &LockUnitary, block: &B) -> Result<B, QError> {
    block.conjugate_by(&u.matrix)
}

/// The verifier's lock device: applies `U⁻¹`.
pub fn apply_lock<B: LockBlock>(u: &LockUnitary, block: &B) -> Result<B, QError> {
    block.conjugate_by(&u.inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::states::make_bell;

    #[test]
    fn typical_unitary_passes_every_relation() {
        let u = build_lock_unitary(&ProtocolParams::typical());
        let chk = u.check();
        assert!(chk.max_residual() < 1e-12, "{chk:?}");
    }

    #[test]
    fn honest_blocks() {
        let p = ProtocolParams::typical();
        let u = build_lock_unitary(&p);
        let zero_block = StateVector::zero().tensor(&make_bell(BellKind::Plus));
        assert!(apply_unlock(&u, &zero_block).unwrap().max_abs_diff(&zero_block) < 1e-12);
        let one_block = alpha_ket(&p).tensor(&xi_ket(&p));
        let out = apply_unlock(&u, &one_block).unwrap();
        assert!(out.max_abs_diff(&c_ket(&p).tensor(&make_bell(BellKind::Plus))) < 1e-12);
        let c_norm = (p.alpha() * p.xi()).powi(2) + p.d().powi(2);
        assert!((c_norm - 1.0).abs() < 1e-15);
        assert!(apply_lock(&u, &out).unwrap().max_abs_diff(&one_block) < 1e-12);
    }

    #[test]
    fn inverse_on_one_plus() {
        let p = ProtocolParams::typical();
        let u = build_lock_unitary(&p);
        let one_plus = StateVector::one().tensor(&make_bell(BellKind::Plus));
        let got = apply_lock(&u, &one_plus).unwrap();
        let (a, b, xi, eta, d) = (p.alpha(), p.beta(), p.xi(), p.eta(), p.d());
        let zm = StateVector::zero().tensor(&make_bell(BellKind::Minus));
        let om = StateVector::one().tensor(&make_bell(BellKind::Minus));
        let expect: Vec<C64> = (0..8)
            .map(|i| {
                one_plus.amplitude(i) * (b * xi / d)
                    + zm.amplitude(i) * c(0.0, a * eta / d)
                    + om.amplitude(i) * c(0.0, b * eta / d)
            })
            .collect();
        assert!(got.max_abs_diff(&StateVector::new(expect).unwrap()) < 1e-12);
    }

    #[test]
    fn remixed_completion_is_admissible() {
        let p = ProtocolParams::from_alpha_xi(0.3, 0.8).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let w = [[c(s, 0.0), c(0.0, s)], [c(0.0, s), c(s, 0.0)]];
        let alt = Completion::gram_schmidt(&p).remix(w);
        let u = LockUnitary::with_completion(&p, alt).unwrap();
        assert!(u.check().max_residual() < 1e-12);
        assert!(u.matrix().max_abs_diff(build_lock_unitary(&p).matrix()) > 1e-3);
    }

    #[test]
    fn non_unitary_completion_is_rejected() {
        let p = ProtocolParams::typical();
        let bad = Completion::from_rows([[c(1.0, 0.0), C64::zero(), C64::zero()]; 2]);
        assert!(LockUnitary::with_completion(&p, bad).is_err());
    }

    #[test]
    fn wrong_block_width() {
        let u = build_lock_unitary(&ProtocolParams::typical());
        assert!(apply_unlock(&u, &StateVector::zero()).is_err());
        assert!(apply_lock(&u, &DensityMatrix::maximally_mixed(2)).is_err());
    }
}

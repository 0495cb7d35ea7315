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
use super::{qubit_count, Matrix, QError, RngStream, StateVector, STATE_TOL};

/// Complete set of orthogonal projectors with an outcome label each.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveBasis<L> {
    projectors: Vec<Matrix>,
    labels: Vec<L>,
}

impl<L: Clone> ProjectiveBasis<L> {
    /// Checks `Σ P_i = I` and `P_i P_j = δ_ij P_i` within [`STATE_TOL`].
    pub fn new(projectors: Vec<Matrix>, labels: Vec<L>) -> Result<Self, QError> {
        if projectors.is_empty() || projectors.len() != labels.len() {
            return Err(QError::IncompleteBasis);
        }
        let dim = projectors[0].rows();
        qubit_count(dim)?;
        let mut sum = Matrix::zeros(dim, dim);
        for (i, p) in projectors.iter().enumerate() {
            if p.rows() != dim || !p.is_square() {
                return Err(QError::DimensionMismatch { expected: dim, got: p.rows() });
            }
            if !p.is_projector(STATE_TOL) {
                return Err(QError::NotProjector);
            }
            for q in &projectors[..i] {
                if (p * q).max_abs_diff(&Matrix::zeros(dim, dim)) > STATE_TOL {
                    return Err(QError::IncompleteBasis);
                }
            }
            sum = &sum + p;
        }
        if sum.max_abs_diff(&Matrix::identity(dim)) > STATE_TOL {
            return Err(QError::IncompleteBasis);
        }
        Ok(ProjectiveBasis { projectors, labels })
    }

    /// Rank-one projectors onto an orthonormal list of states.
    pub fn from_states(states: &[StateVector], labels: Vec<L>) -> Result<Self, QError> {
        let projectors = states.iter().map(|s| Matrix::outer(s.amplitudes(), s.amplitudes())).collect();
        Self::new(projectors, labels)
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn projectors(&self) -> &[Matrix] {
        &self.projectors
    }

    pub fn projector(&self, i: usize) -> &Matrix {
        &self.projectors[i]
    }
}

impl ProjectiveBasis<u8> {
    /// Single-qubit computational basis with outcome labels 0 and 1.
    pub fn computational() -> Self {
        Self::from_states(&[StateVector::zero(), StateVector::one()], alloc::vec![0, 1])
            .expect("computational basis is complete")
    }

    /// Single-qubit basis {cos θ|0⟩ + sin θ|1⟩, −sin θ|0⟩ + cos θ|1⟩};
    /// outcomes 0 and 1 respectively.
    pub fn real_rotated(theta: f64) -> Self {
        let (s, co) = (libm::sin(theta), libm::cos(theta));
        let e0 = StateVector::normalized(alloc::vec![super::c(co, 0.0), super::c(s, 0.0)]).expect("unit vector");
        let e1 = StateVector::normalized(alloc::vec![super::c(-s, 0.0), super::c(co, 0.0)]).expect("unit vector");
        Self::from_states(&[e0, e1], alloc::vec![0, 1]).expect("rotated basis is complete")
    }
}

fn sample(probs: &[f64], rng: &mut RngStream) -> Result<usize, QError> {
    let total: f64 = probs.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(QError::ZeroProbability);
    }
    let u = rng.uniform() * total;
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    // u landed on the rounding gap at the top; take the likeliest outcome.
    Ok(probs.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0))
}

/// Projective measurement of the full state. Returns the sampled label and
/// the normalized post-measurement state `P_i|ψ⟩ / ‖P_i|ψ⟩‖`.
pub fn measure<L: Clone>(
    state: &StateVector,
    basis: &ProjectiveBasis<L>,
    rng: &mut RngStream,
) -> Result<(L, StateVector), QError> {
    if basis.dim() != state.dim() {
        return Err(QError::DimensionMismatch { expected: basis.dim(), got: state.dim() });
    }
    let branches: Vec<Vec<_>> =
        basis.projectors.iter().map(|p| p.apply(state.amplitudes())).collect::<Result<_, _>>()?;
    pick(branches, basis, rng)
}

/// Measures the qubits in `targets` (in that order) with a basis on
/// `2^targets.len()` dimensions, leaving the rest untouched.
pub fn measure_on<L: Clone>(
    state: &StateVector,
    basis: &ProjectiveBasis<L>,
    targets: &[usize],
    rng: &mut RngStream,
) -> Result<(L, StateVector), QError> {
    let (i, post) = measure_on_indexed(state, basis, targets, rng)?;
    Ok((basis.labels[i].clone(), post))
}

/// Like [`measure_on`] but returns the index of the realized projector.
pub(crate) fn measure_on_indexed<L>(
    state: &StateVector,
    basis: &ProjectiveBasis<L>,
    targets: &[usize],
    rng: &mut RngStream,
) -> Result<(usize, StateVector), QError> {
    let branches: Vec<Vec<_>> =
        basis.projectors.iter().map(|p| apply_on_raw(state.amplitudes(), p, targets)).collect::<Result<_, _>>()?;
    pick_index(branches, rng)
}

fn pick<L: Clone>(
    branches: Vec<Vec<super::C64>>,
    basis: &ProjectiveBasis<L>,
    rng: &mut RngStream,
) -> Result<(L, StateVector), QError> {
    let (i, post) = pick_index(branches, rng)?;
    Ok((basis.labels[i].clone(), post))
}

fn pick_index(branches: Vec<Vec<super::C64>>, rng: &mut RngStream) -> Result<(usize, StateVector), QError> {
    let probs: Vec<f64> = branches.iter().map(|b| b.iter().map(|a| a.norm_sqr()).sum()).collect();
    let i = sample(&probs, rng)?;
    let post = StateVector::normalized(branches.into_iter().nth(i).expect("index in range"))?;
    Ok((i, post))
}

/// ⟨ψ|P|ψ⟩ for an orthogonal projector `P`.
pub fn born_probability(state: &StateVector, projector: &Matrix) -> Result<f64, QError> {
    if projector.rows() != state.dim() || !projector.is_square() {
        return Err(QError::DimensionMismatch { expected: state.dim(), got: projector.rows() });
    }
    if !projector.is_projector(1e-10) {
        return Err(QError::NotProjector);
    }
    let v = projector.apply(state.amplitudes())?;
    let p: super::C64 = state.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    Ok(p.re.clamp(0.0, 1.0))
}

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

//! Exact small-dimension quantum linear algebra.
//!
//! Qubits are ordered big-endian: in an `n`-qubit register, qubit 0 is the
//! most significant bit of the basis index. A (Q_K, Q_A, Q_B) block therefore
//! has basis index `4·b_K + 2·b_A + b_B`.

use num_complex::Complex;
use thiserror::Error;

mod density;
mod matrix;
mod measure;
mod rng;
mod state;

pub use density::DensityMatrix;
pub use matrix::Matrix;
pub(crate) use measure::measure_on_indexed;
pub use measure::{born_probability, measure, measure_on, ProjectiveBasis};
pub use rng::RngStream;
pub use state::{tensor, StateVector};

/// Double-precision complex amplitude.
pub type C64 = Complex<f64>;

/// Tolerance for normalization, hermiticity and projector checks.
pub const STATE_TOL: f64 = 1e-12;

/// Errors from the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid qubit subset")]
    InvalidSubset,
    #[error("matrix is not an orthogonal projector")]
    NotProjector,
    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),
    #[error("projectors do not form a complete orthogonal decomposition")]
    IncompleteBasis,
    #[error("operator is not unitary")]
    NotUnitary,
    #[error("measurement outcome has zero probability")]
    ZeroProbability,
}

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub(crate) fn qubit_count(dim: usize) -> Result<usize, QError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Checks that `targets` are distinct indices below `n`.
pub(crate) fn check_targets(targets: &[usize], n: usize) -> Result<(), QError> {
    if targets.is_empty() || targets.len() > n {
        return Err(QError::InvalidSubset);
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n || targets[..i].contains(&t) {
            return Err(QError::InvalidSubset);
        }
    }
    Ok(())
}

/// Bit mask of qubit `q` in an `n`-qubit big-endian register.
#[inline]
pub(crate) fn bit_of(q: usize, n: usize) -> usize {
    1 << (n - 1 - q)
}

/// Index in the original register of basis state `new_idx` of the
/// register whose qubit `j` is the original qubit `order[j]`.
pub(crate) fn permuted_index(new_idx: usize, order: &[usize]) -> usize {
    let n = order.len();
    let mut old = 0;
    for (j, &o) in order.iter().enumerate() {
        if new_idx & bit_of(j, n) != 0 {
            old |= bit_of(o, n);
        }
    }
    old
}

/// Basis indices obtained by writing every `sub` in `0..2^k` onto `targets`
/// (most significant bit of `sub` goes to `targets[0]`) on top of `base`.
pub(crate) fn scatter_index(base: usize, sub: usize, targets: &[usize], n: usize) -> usize {
    let k = targets.len();
    let mut idx = base;
    for (j, &t) in targets.iter().enumerate() {
        if sub & (1 << (k - 1 - j)) != 0 {
            idx |= bit_of(t, n);
        }
    }
    idx
}

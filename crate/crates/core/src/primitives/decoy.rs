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

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::qcore::{measure, ProjectiveBasis, QError, RngStream, StateVector};

/// One decoy value: 2 ↔ |0⟩, 3 ↔ |1⟩, 4 ↔ |0×⟩, 5 ↔ |1×⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct DecoySymbol(u8);

/// Basis a decoy is prepared and checked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecoyBasis {
    /// {|0⟩, |1⟩}
    Z,
    /// {|0×⟩, |1×⟩}
    X,
}

impl DecoySymbol {
    pub const ALL: [DecoySymbol; 4] = [DecoySymbol(2), DecoySymbol(3), DecoySymbol(4), DecoySymbol(5)];

    pub fn new(value: u8) -> Option<Self> {
        (2..=5).contains(&value).then_some(DecoySymbol(value))
    }

    /// Uniform symbol.
    pub fn random(rng: &mut RngStream) -> Self {
        DecoySymbol(2 + rng.below(4) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn basis(self) -> DecoyBasis {
        if self.0 <= 3 {
            DecoyBasis::Z
        } else {
            DecoyBasis::X
        }
    }

    /// Bit carried within its basis: 2, 4 → 0 and 3, 5 → 1.
    pub fn bit(self) -> u8 {
        (self.0 - 2) % 2
    }
}

impl TryFrom<u8> for DecoySymbol {
    type Error = QError;

    fn try_from(v: u8) -> Result<Self, QError> {
        DecoySymbol::new(v).ok_or(QError::InvalidSubset)
    }
}

impl From<DecoySymbol> for u8 {
    fn from(s: DecoySymbol) -> u8 {
        s.0
    }
}

impl fmt::Display for DecoySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn decoy_encode(symbol: DecoySymbol) -> StateVector {
    match symbol.0 {
        2 => StateVector::zero(),
        3 => StateVector::one(),
        4 => StateVector::plus_x(),
        _ => StateVector::minus_x(),
    }
}

pub fn decoy_basis(basis: DecoyBasis) -> ProjectiveBasis<u8> {
    match basis {
        DecoyBasis::Z => ProjectiveBasis::computational(),
        DecoyBasis::X => {
            ProjectiveBasis::from_states(&[StateVector::plus_x(), StateVector::minus_x()], alloc::vec![0, 1])
                .expect("X basis is complete")
        }
    }
}

/// Measures a single decoy qubit in `basis`; returns the bit and the
/// post-measurement state.
pub fn decoy_measure(q: &StateVector, basis: DecoyBasis, rng: &mut RngStream) -> Result<(u8, StateVector), QError> {
    if q.qubits() != 1 {
        return Err(QError::DimensionMismatch { expected: 2, got: q.dim() });
    }
    measure(q, &decoy_basis(basis), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::c;

    #[test]
    fn symbol_map_is_bijective() {
        let states: alloc::vec::Vec<_> = DecoySymbol::ALL.iter().map(|&s| decoy_encode(s)).collect();
        for i in 0..4 {
            for j in 0..4 {
                let same = states[i].max_abs_diff(&states[j]) < 1e-15;
                assert_eq!(same, i == j);
            }
        }
        assert!(DecoySymbol::new(1).is_none() && DecoySymbol::new(6).is_none());
    }

    #[test]
    fn encode_four_is_plus_x() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let q = decoy_encode(DecoySymbol::new(4).unwrap());
        assert!(q.max_abs_diff(&StateVector::new(alloc::vec![c(s, 0.0), c(s, 0.0)]).unwrap()) < 1e-15);
    }

    #[test]
    fn matched_basis_reproduces_symbol() {
        let mut rng = RngStream::new(9, 1);
        for sym in DecoySymbol::ALL {
            for _ in 0..200 {
                let (bit, _) = decoy_measure(&decoy_encode(sym), sym.basis(), &mut rng).unwrap();
                assert_eq!(bit, sym.bit());
            }
        }
    }

    #[test]
    fn serde_roundtrip_and_rejection() {
        assert_eq!(DecoySymbol::try_from(5u8).unwrap().value(), 5);
        assert!(DecoySymbol::try_from(7u8).is_err());
    }
}

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
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::ProtocolParams;
use crate::qcore::{c, measure, DensityMatrix, Matrix, ProjectiveBasis, QError, RngStream, StateVector, C64};

/// The four Bell states. The first qubit is the card's, the second the
/// verifier's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    /// (|00⟩ + |11⟩)/√2
    #[serde(rename = "+")]
    Plus,
    /// (|00⟩ − |11⟩)/√2
    #[serde(rename = "-")]
    Minus,
    /// (|01⟩ + |10⟩)/√2
    #[serde(rename = "B+")]
    BPlus,
    /// (|01⟩ − |10⟩)/√2
    #[serde(rename = "B-")]
    BMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [BellKind::Plus, BellKind::Minus, BellKind::BPlus, BellKind::BMinus];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::Plus => "+",
            BellKind::Minus => "-",
            BellKind::BPlus => "B+",
            BellKind::BMinus => "B-",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn make_bell(kind: BellKind) -> StateVector {
    let s = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let amps = match kind {
        BellKind::Plus => vec![c(s, 0.0), z, z, c(s, 0.0)],
        BellKind::Minus => vec![c(s, 0.0), z, z, c(-s, 0.0)],
        BellKind::BPlus => vec![z, c(s, 0.0), c(s, 0.0), z],
        BellKind::BMinus => vec![z, c(s, 0.0), c(-s, 0.0), z],
    };
    StateVector::new(amps).expect("Bell states are normalized")
}

/// |α⟩ = α|0⟩ + β|1⟩.
pub fn alpha_ket(p: &ProtocolParams) -> StateVector {
    StateVector::normalized(vec![c(p.alpha(), 0.0), c(p.beta(), 0.0)]).expect("nonzero")
}

/// Password qubit for one bit: 0 → |0⟩, 1 → |α⟩.
pub fn password_ket(bit: bool, p: &ProtocolParams) -> StateVector {
    if bit {
        alpha_ket(p)
    } else {
        StateVector::zero()
    }
}

/// |ξ⟩ = ξ|+⟩ + iη|−⟩, the locked key pair.
pub fn xi_ket(p: &ProtocolParams) -> StateVector {
    let plus = make_bell(BellKind::Plus);
    let minus = make_bell(BellKind::Minus);
    let amps: Vec<C64> =
        plus.amplitudes().iter().zip(minus.amplitudes()).map(|(a, b)| a * p.xi() + b * c(0.0, p.eta())).collect();
    StateVector::normalized(amps).expect("nonzero")
}

/// |c⟩ = αξ|0⟩ + d|1⟩, the password qubit left behind by an honest unlock.
pub fn c_ket(p: &ProtocolParams) -> StateVector {
    StateVector::normalized(vec![c(p.alpha() * p.xi(), 0.0), c(p.d(), 0.0)]).expect("nonzero")
}

/// R = diag(e^{iδ}, e^{−iδ}) with e^{iδ} = ξ + iη.
pub fn rotation(p: &ProtocolParams) -> Matrix {
    Matrix::diagonal(&[c(p.xi(), p.eta()), c(p.xi(), -p.eta())])
}

pub fn rotation_inverse(p: &ProtocolParams) -> Matrix {
    rotation(p).adjoint()
}

/// Full Bell-basis measurement, outcomes in [`BellKind::ALL`] order.
pub fn bell_basis() -> ProjectiveBasis<BellKind> {
    let states: Vec<StateVector> = BellKind::ALL.iter().map(|&k| make_bell(k)).collect();
    ProjectiveBasis::from_states(&states, BellKind::ALL.to_vec()).expect("Bell basis is complete")
}

/// Measures a pure pair in the Bell basis; accepted iff the outcome is |+⟩.
pub fn bell_verify(pair: &StateVector, rng: &mut RngStream) -> Result<(bool, BellKind), QError> {
    if pair.qubits() != 2 {
        return Err(QError::DimensionMismatch { expected: 4, got: pair.dim() });
    }
    let (kind, _) = measure(pair, &bell_basis(), rng)?;
    Ok((kind == BellKind::Plus, kind))
}

/// Bell-basis measurement of a mixed pair.
pub fn bell_verify_mixed(pair: &DensityMatrix, rng: &mut RngStream) -> Result<(bool, BellKind), QError> {
    if pair.qubits() != 2 {
        return Err(QError::DimensionMismatch { expected: 4, got: pair.dim() });
    }
    let probs: Vec<f64> = BellKind::ALL.iter().map(|&k| pair.fidelity_with(&make_bell(k))).collect::<Result<_, _>>()?;
    let total: f64 = probs.iter().sum();
    let u = rng.uniform() * total;
    let mut acc = 0.0;
    let mut kind = BellKind::BMinus;
    for (k, p) in BellKind::ALL.iter().zip(&probs) {
        acc += p;
        if u < acc {
            kind = *k;
            break;
        }
    }
    Ok((kind == BellKind::Plus, kind))
}

/// ⟨+|ρ|+⟩.
pub fn bell_acceptance_probability(pair: &DensityMatrix) -> Result<f64, QError> {
    pair.fidelity_with(&make_bell(BellKind::Plus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_states_match_definitions() {
        let s = FRAC_1_SQRT_2;
        let plus = make_bell(BellKind::Plus);
        assert!(
            plus.max_abs_diff(&StateVector::new(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()) < 1e-15
        );
        let bm = make_bell(BellKind::BMinus);
        assert!(
            bm.max_abs_diff(&StateVector::new(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]).unwrap()) < 1e-15
        );
        for (i, a) in BellKind::ALL.iter().enumerate() {
            for b in &BellKind::ALL[i + 1..] {
                assert!(make_bell(*a).inner(&make_bell(*b)).unwrap().norm() < 1e-15);
            }
        }
    }

    #[test]
    fn alpha_ket_at_one_half() {
        let p = ProtocolParams::from_alpha_xi(0.5, 0.5).unwrap();
        let a = alpha_ket(&p);
        assert!((a.amplitude(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((a.amplitude(1) - c(3f64.sqrt() / 2.0, 0.0)).norm() < 1e-15);
        let overlap = StateVector::zero().inner(&a).unwrap().norm_sqr();
        assert!((overlap - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rotation_on_card_qubit_gives_xi() {
        let p = ProtocolParams::from_alpha_xi(0.3, 0.7).unwrap();
        let r = rotation(&p);
        assert!(r.is_unitary(1e-15));
        let locked = make_bell(BellKind::Plus).evolve_on(&r, &[0]).unwrap();
        assert!(locked.max_abs_diff(&xi_ket(&p)) < 1e-15);
        let unlocked = xi_ket(&p).evolve_on(&rotation_inverse(&p), &[0]).unwrap();
        assert!(unlocked.max_abs_diff(&make_bell(BellKind::Plus)) < 1e-15);
    }

    #[test]
    fn xi_is_a_bell_state() {
        let p = ProtocolParams::typical();
        let rho = xi_ket(&p).to_density();
        let half = DensityMatrix::maximally_mixed(1);
        assert!(rho.partial_trace(&[0]).unwrap().max_abs_diff(&half) < 1e-12);
        assert!(rho.partial_trace(&[1]).unwrap().max_abs_diff(&half) < 1e-12);
        let ov = make_bell(BellKind::Plus).overlap(&xi_ket(&p));
        assert!((ov - p.xi()).abs() < 1e-15);
    }

    #[test]
    fn bell_acceptance_of_xi_is_xi_squared() {
        let p = ProtocolParams::typical();
        let prob = bell_acceptance_probability(&xi_ket(&p).to_density()).unwrap();
        assert!((prob - 0.25).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((bell_acceptance_probability(&mixed).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bell_verify_rejects_wrong_width() {
        let mut rng = RngStream::new(0, 0);
        assert!(bell_verify(&StateVector::zero(), &mut rng).is_err());
        assert!(bell_verify_mixed(&DensityMatrix::maximally_mixed(3), &mut rng).is_err());
    }

    #[test]
    fn plus_is_always_accepted() {
        let mut rng = RngStream::new(3, 0);
        for _ in 0..1000 {
            assert_eq!(bell_verify(&make_bell(BellKind::Plus), &mut rng).unwrap(), (true, BellKind::Plus));
        }
    }

    #[test]
    fn bell_labels_serialize() {
        assert_eq!(BellKind::BMinus.label(), "B-");
        assert_eq!(alloc::format!("{}", BellKind::Plus), "+");
    }
}

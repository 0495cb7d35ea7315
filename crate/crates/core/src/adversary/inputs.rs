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

//! What an adversary feeds into the protocol.

use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::primitives::ProtocolParams;
use crate::protocol::{AccessSite, PolicyError, SecurityPolicy};
use crate::qcore::{c, DensityMatrix, RngStream, StateVector, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error("forged amplitudes have norm² {0}, expected 1")]
    NotNormalized(f64),
    #[error("r = {0} outside [0, 1]")]
    Population(f64),
    #[error("x² + y² = {got} but r(1 − r) = {expected}")]
    Coherence { expected: f64, got: f64 },
}

/// A forged (Q_K, Q_A) block `Ψ00|00⟩ + Ψ01|01⟩ + Ψ10|10⟩ + Ψ11|11⟩`,
/// first qubit the password.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[C64; 4]", into = "[C64; 4]")]
pub struct ForgedInput {
    psi: [C64; 4],
}

impl ForgedInput {
    pub fn new(psi: [C64; 4]) -> Result<Self, InputError> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (n - 1.0).abs() > 1e-12 {
            return Err(InputError::NotNormalized(n));
        }
        Ok(ForgedInput { psi })
    }

    /// Rescales to unit norm. Panics on the zero vector.
    pub fn normalized(psi: [C64; 4]) -> Self {
        let n = libm::sqrt(psi.iter().map(|z| z.norm_sqr()).sum::<f64>());
        assert!(n > 0.0, "zero forged vector");
        ForgedInput { psi: psi.map(|z| z / n) }
    }

    /// `|k a⟩` for a single basis index `2k + a`.
    pub fn basis(index: usize) -> Self {
        let mut psi = [c(0.0, 0.0); 4];
        psi[index] = c(1.0, 0.0);
        ForgedInput { psi }
    }

    /// Uniformly distributed on the unit sphere of C⁴.
    pub fn random(rng: &mut RngStream) -> Self {
        let mut psi = [c(0.0, 0.0); 4];
        for z in psi.iter_mut() {
            *z = c(rng.normal(), rng.normal());
        }
        Self::normalized(psi)
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.psi
    }

    /// `Ψ_{k a}`.
    pub fn amp(&self, k: usize, a: usize) -> C64 {
        self.psi[2 * k + a]
    }

    pub fn state(&self) -> StateVector {
        StateVector::normalized(self.psi.to_vec()).expect("unit vector")
    }
}

impl TryFrom<[C64; 4]> for ForgedInput {
    type Error = InputError;

    fn try_from(psi: [C64; 4]) -> Result<Self, InputError> {
        Self::new(psi)
    }
}

impl From<ForgedInput> for [C64; 4] {
    fn from(f: ForgedInput) -> Self {
        f.psi
    }
}

/// Forged single-qubit password `ρ_E = r|0⟩⟨0| + (1−r)|1⟩⟨1| + (x+iy)|0⟩⟨1| + (x−iy)|1⟩⟨0|`
/// with `x² + y² = r(1 − r)`, so `ρ_E` is always pure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPassword", into = "RawPassword")]
pub struct CardStealPassword {
    r: f64,
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPassword {
    r: f64,
    x: f64,
    y: f64,
}

impl CardStealPassword {
    pub fn new(r: f64, x: f64, y: f64) -> Result<Self, InputError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(InputError::Population(r));
        }
        let (expected, got) = (r * (1.0 - r), x * x + y * y);
        if (expected - got).abs() > 1e-9 {
            return Err(InputError::Coherence { expected, got });
        }
        Ok(CardStealPassword { r, x, y })
    }

    /// Pure state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        let r = 0.5 * (1.0 + libm::cos(theta));
        let s = 0.5 * libm::sin(theta);
        CardStealPassword { r, x: s * libm::cos(phi), y: -s * libm::sin(phi) }
    }

    /// Bloch vector along (β, 0, α), the minimizer of the detection rate.
    pub fn optimal(p: &ProtocolParams) -> Self {
        Self::from_bloch(libm::atan2(p.beta(), p.alpha()), 0.0)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn ket(&self) -> StateVector {
        let a = libm::sqrt(self.r);
        let amps = if a > 1e-300 { [c(a, 0.0), c(self.x, -self.y) / a] } else { [c(0.0, 0.0), c(1.0, 0.0)] };
        StateVector::normalized(amps.to_vec()).expect("nonzero")
    }

    pub fn density(&self) -> DensityMatrix {
        self.ket().to_density()
    }
}

impl TryFrom<RawPassword> for CardStealPassword {
    type Error = InputError;

    fn try_from(raw: RawPassword) -> Result<Self, InputError> {
        Self::new(raw.r, raw.x, raw.y)
    }
}

impl From<CardStealPassword> for RawPassword {
    fn from(p: CardStealPassword) -> Self {
        RawPassword { r: p.r, x: p.x, y: p.y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    NoCardForgery,
    CardSteal,
    ManInTheMiddle,
    InterceptResendDecoys,
    AccumulateDiscarded,
}

impl AttackKind {
    pub const ALL: [AttackKind; 5] = [
        AttackKind::NoCardForgery,
        AttackKind::CardSteal,
        AttackKind::ManInTheMiddle,
        AttackKind::InterceptResendDecoys,
        AttackKind::AccumulateDiscarded,
    ];

    /// The one place each strategy acts.
    pub fn site(self) -> AccessSite {
        match self {
            AttackKind::NoCardForgery | AttackKind::ManInTheMiddle | AttackKind::InterceptResendDecoys => {
                AccessSite::QuantumChannel
            }
            AttackKind::CardSteal => AccessSite::StolenCard,
            AttackKind::AccumulateDiscarded => AccessSite::DiscardedPasswords,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::NoCardForgery => "no-card-forgery",
            AttackKind::CardSteal => "card-steal",
            AttackKind::ManInTheMiddle => "man-in-the-middle",
            AttackKind::InterceptResendDecoys => "intercept-resend-decoys",
            AttackKind::AccumulateDiscarded => "accumulate-discarded",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).or(match s {
            "no-card" => Some(AttackKind::NoCardForgery),
            "mitm" => Some(AttackKind::ManInTheMiddle),
            "intercept-resend" => Some(AttackKind::InterceptResendDecoys),
            "accumulate" => Some(AttackKind::AccumulateDiscarded),
            _ => None,
        })
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rejects a strategy that wants more than its own site plus read-only
/// classical access.
pub fn authorize(kind: AttackKind, extra: &[AccessSite]) -> Result<(), PolicyError> {
    SecurityPolicy::check(&[kind.site()])?;
    SecurityPolicy::check(extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forged_input_normalization() {
        assert!(ForgedInput::new([c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        let mut rng = RngStream::new(1, 2);
        for _ in 0..20 {
            let f = ForgedInput::random(&mut rng);
            assert!((f.state().norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn card_steal_density_matches_parameters() {
        for (t, ph) in [(0.3, 1.1), (2.0, -0.4), (0.0, 0.0), (core::f64::consts::PI, 0.7)] {
            let pw = CardStealPassword::from_bloch(t, ph);
            let pw = CardStealPassword::new(pw.r(), pw.x(), pw.y()).unwrap();
            let rho = pw.density();
            rho.validate().unwrap();
            let m = rho.matrix();
            assert!((m[(0, 0)].re - pw.r()).abs() < 1e-12);
            assert!((m[(0, 1)] - c(pw.x(), pw.y())).norm() < 1e-12);
            assert!((m[(1, 0)] - c(pw.x(), -pw.y())).norm() < 1e-12);
        }
        assert!(CardStealPassword::new(0.5, 0.5, 0.1).is_err());
        assert!(CardStealPassword::new(1.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn every_kind_is_permitted_and_forbidden_extras_fail() {
        for k in AttackKind::ALL {
            assert!(authorize(k, &[]).is_ok());
            assert_eq!(AttackKind::parse(k.name()), Some(k));
        }
        assert!(authorize(AttackKind::ManInTheMiddle, &[AccessSite::ProverRegion]).is_err());
        assert!(authorize(AttackKind::AccumulateDiscarded, &[AccessSite::VerifierQuantumStorage]).is_err());
    }
}

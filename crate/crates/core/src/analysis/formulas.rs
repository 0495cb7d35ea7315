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

//! Closed forms for the adversary success and detection probabilities,
//! each paired with an independent route through explicit matrix algebra.
//!
//! The `*_direct` functions never call the closed forms: they build the
//! block state, apply the lock unitary, trace out the password qubit and
//! read off the `|+⟩` population.

use thiserror::Error;

use crate::adversary::{CardStealPassword, ForgedInput};
use crate::primitives::{build_lock_unitary, make_bell, xi_ket, BellKind, LockUnitary, ProtocolParams};
use crate::qcore::{c, DensityMatrix, QError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("block count must be at least 1")]
    NoBlocks,
}

/// Per-block pass probability of a forged block without the card.
pub fn ps_closed_form(f: &ForgedInput, p: &ProtocolParams) -> f64 {
    let a = p.beta() / p.d();
    let b = p.alpha() * p.eta() / p.d();
    let e_minus = c(p.xi(), -p.eta());
    let e_plus = c(p.xi(), p.eta());
    let i = c(0.0, 1.0);
    let t3 = e_minus * a * f.amp(1, 0) - i * b * f.amp(0, 0);
    let t4 = e_plus * a * f.amp(1, 1) + i * b * f.amp(0, 1);
    0.25 * (f.amp(0, 0).norm_sqr() + f.amp(0, 1).norm_sqr() + t3.norm_sqr() + t4.norm_sqr())
}

/// `⟨+| Tr_K[U (|Ψ⟩⟨Ψ| ⊗ I/2) U†] |+⟩`.
pub fn ps_direct(f: &ForgedInput, p: &ProtocolParams) -> f64 {
    ps_direct_with(f, &build_lock_unitary(p)).expect("dimensions fixed")
}

/// As [`ps_direct`], with an explicit unitary (any completion).
pub fn ps_direct_with(f: &ForgedInput, u: &LockUnitary) -> Result<f64, QError> {
    let rho = DensityMatrix::from_pure(&f.state()).tensor(&DensityMatrix::maximally_mixed(1));
    plus_population(&rho, u)
}

fn plus_population(block: &DensityMatrix, u: &LockUnitary) -> Result<f64, QError> {
    let out = block.evolve(u.matrix())?;
    let pair = out.partial_trace(&[1, 2])?;
    pair.fidelity_with(&make_bell(BellKind::Plus))
}

/// Per-block detection probability with the stolen card, averaged over
/// the key bit.
pub fn delta_e_closed_form(pw: &CardStealPassword, p: &ProtocolParams) -> f64 {
    let (a, b, xi) = (p.alpha(), p.beta(), p.xi());
    0.5 * (1.0 - xi * xi) / (1.0 - a * a * xi * xi) * (1.0 + a * a - 2.0 * a * a * pw.r() - 2.0 * a * b * pw.x())
}

/// `½ Tr[U(ρ_E ⊗ |+⟩⟨+|)U†(I − P₊)] + ½ Tr[U(ρ_E ⊗ |ξ⟩⟨ξ|)U†(I − P₊)]`.
pub fn delta_e_direct(pw: &CardStealPassword, p: &ProtocolParams) -> f64 {
    delta_e_direct_with(pw, &build_lock_unitary(p)).expect("dimensions fixed")
}

pub fn delta_e_direct_with(pw: &CardStealPassword, u: &LockUnitary) -> Result<f64, QError> {
    let rho = pw.density();
    let plus = DensityMatrix::from_pure(&make_bell(BellKind::Plus));
    let xi = DensityMatrix::from_pure(&xi_ket(u.params()));
    let p0 = 1.0 - plus_population(&rho.tensor(&plus), u)?;
    let p1 = 1.0 - plus_population(&rho.tensor(&xi), u)?;
    Ok(0.5 * p0 + 0.5 * p1)
}

pub fn pn_closed_form(p: &ProtocolParams) -> f64 {
    let (a, xi) = (p.alpha(), p.xi());
    0.5 * (1.0 - xi * xi) / (1.0 - a * a * xi * xi) * (1.0 - a)
}

/// Result of the Bloch-sphere search for the least detectable password.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PnSearch {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub evaluations: usize,
}

impl PnSearch {
    pub fn password(&self) -> CardStealPassword {
        CardStealPassword::from_bloch(self.theta, self.phi)
    }
}

/// Minimizes [`delta_e_direct`] over pure passwords: a coarse (θ, φ) grid
/// followed by repeated local grids, each a quarter of the previous span.
pub fn pn_minimize_direct(p: &ProtocolParams) -> PnSearch {
    use core::f64::consts::PI;
    let u = build_lock_unitary(p);
    let mut evals = 0;
    let mut eval = |t: f64, ph: f64| {
        evals += 1;
        delta_e_direct_with(&CardStealPassword::from_bloch(t, ph), &u).expect("dimensions fixed")
    };
    let (nt, np) = (36, 36);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=nt {
        let t = PI * i as f64 / nt as f64;
        for j in 0..np {
            let ph = 2.0 * PI * j as f64 / np as f64;
            let v = eval(t, ph);
            if v < best.0 {
                best = (v, t, ph);
            }
        }
    }
    let (mut dt, mut dp) = (PI / nt as f64, 2.0 * PI / np as f64);
    for _ in 0..14 {
        let (_, t0, p0) = best;
        for i in -3..=3 {
            for j in -3..=3 {
                let t = (t0 + dt * i as f64 / 3.0).clamp(0.0, PI);
                let ph = p0 + dp * j as f64 / 3.0;
                let v = eval(t, ph);
                if v < best.0 {
                    best = (v, t, ph);
                }
            }
        }
        dt *= 0.25;
        dp *= 0.25;
    }
    PnSearch { value: best.0, theta: best.1, phi: best.2, evaluations: evals }
}

/// `1 − (1 − p)^N`.
pub fn total_detection(p: f64, n: u32) -> Result<f64, DomainError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DomainError::Probability(p));
    }
    if n == 0 {
        return Err(DomainError::NoBlocks);
    }
    Ok(1.0 - libm::pow(1.0 - p, n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::Completion;
    use crate::qcore::RngStream;

    fn typical() -> ProtocolParams {
        ProtocolParams::typical()
    }

    #[test]
    fn ps_reference_points() {
        let p = typical();
        assert!((ps_closed_form(&ForgedInput::basis(0), &p) - 0.3).abs() < 1e-12);
        assert!((ps_closed_form(&ForgedInput::basis(2), &p) - 0.2).abs() < 1e-12);
        assert!((ps_direct(&ForgedInput::basis(0), &p) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn ps_routes_agree_and_ignore_completion() {
        let p = ProtocolParams::from_alpha_xi(0.3, 0.7).unwrap();
        let g = Completion::gram_schmidt(&p);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let w = [[c(s, 0.0), c(0.0, s)], [c(0.0, s), c(s, 0.0)]];
        let other = LockUnitary::with_completion(&p, g.remix(w)).unwrap();
        let mut rng = RngStream::new(11, 0);
        for _ in 0..30 {
            let f = ForgedInput::random(&mut rng);
            let closed = ps_closed_form(&f, &p);
            assert!((ps_direct(&f, &p) - closed).abs() < 1e-10);
            assert!((ps_direct_with(&f, &other).unwrap() - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn delta_e_reference_points() {
        let p = typical();
        let zero = CardStealPassword::new(1.0, 0.0, 0.0).unwrap();
        assert!((delta_e_closed_form(&zero, &p) - 0.3).abs() < 1e-12);
        assert!((delta_e_direct(&zero, &p) - 0.3).abs() < 1e-12);
        let opt = CardStealPassword::optimal(&p);
        assert!((delta_e_closed_form(&opt, &p) - 0.2).abs() < 1e-12);
        assert!((delta_e_direct(&opt, &p) - 0.2).abs() < 1e-12);
        assert!((pn_closed_form(&p) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn alpha_password_matches_substitution() {
        let p = ProtocolParams::from_alpha_xi(0.6, 0.4).unwrap();
        let (a, b) = (p.alpha(), p.beta());
        let pw = CardStealPassword::new(a * a, a * b, 0.0).unwrap();
        assert!((delta_e_direct(&pw, &p) - delta_e_closed_form(&pw, &p)).abs() < 1e-12);
    }

    #[test]
    fn grid_search_finds_pn() {
        let p = typical();
        let s = pn_minimize_direct(&p);
        assert!((s.value - 0.2).abs() < 1e-6, "{}", s.value);
    }

    #[test]
    fn total_detection_arithmetic() {
        assert!((total_detection(0.2, 10).unwrap() - (1.0 - libm::pow(0.8, 10.0))).abs() < 1e-15);
        assert_eq!(total_detection(0.0, 7).unwrap(), 0.0);
        assert!(total_detection(1.5, 1).is_err());
        assert!(total_detection(0.5, 0).is_err());
    }
}

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

//! Adversary behaviours plugged into the session runner: a prover
//! impersonating A, and channel or discard taps.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{CardStealPassword, ForgedInput};
use crate::primitives::{decoy_basis, decoy_encode, DecoyBasis};
use crate::protocol::{
    interleave, AbortReason, AccessSite, DecoySchedule, Eavesdropper, Mode, Prover, QuantumWorld, QubitId,
    SessionContext, Transmission, WorldError,
};
use crate::qcore::{c, ProjectiveBasis, RngStream, StateVector};

/// What E sends in A's place.
#[derive(Debug, Clone)]
pub enum Forgery {
    /// No card: every block is a forged `(Q_K, Q_A)` pair.
    NoCard(ForgedInput),
    /// A's genuine card plus forged password qubits `ρ_E`.
    StolenCard { card: Vec<QubitId>, password: CardStealPassword },
}

/// E posing as A. In extended mode E also prepares and announces its own
/// decoys, so the decoy check alone never exposes it.
#[derive(Debug, Clone)]
pub struct Impersonator {
    forgery: Forgery,
    card: Vec<QubitId>,
    passwords: Vec<QubitId>,
    decoys: Vec<QubitId>,
    schedule: Option<DecoySchedule>,
    /// Qubits B handed back.
    pub returned: Vec<QubitId>,
}

impl Impersonator {
    pub fn new(forgery: Forgery) -> Self {
        let card = match &forgery {
            Forgery::StolenCard { card, .. } => card.clone(),
            Forgery::NoCard(_) => Vec::new(),
        };
        Impersonator { forgery, card, passwords: Vec::new(), decoys: Vec::new(), schedule: None, returned: Vec::new() }
    }
}

impl Prover for Impersonator {
    fn card(&self) -> &[QubitId] {
        &self.card
    }

    fn prepare(
        &mut self,
        step: u8,
        world: &mut QuantumWorld,
        ctx: &SessionContext<'_>,
        rng: &mut RngStream,
    ) -> Result<(), AbortReason> {
        let n = ctx.config.blocks;
        match (ctx.mode, step) {
            (Mode::Basic, 3) | (Mode::Extended, 5) => match &self.forgery {
                Forgery::NoCard(f) => {
                    for _ in 0..n {
                        let q = world.prepare(f.state());
                        self.passwords.push(q[0]);
                        self.card.push(q[1]);
                    }
                }
                Forgery::StolenCard { password, .. } => {
                    self.passwords = (0..n).map(|_| world.prepare_one(password.ket())).collect();
                }
            },
            (Mode::Extended, 6) => {
                let schedule = DecoySchedule::draw(n, ctx.config.decoys, rng);
                self.decoys = schedule.symbols.iter().map(|&s| world.prepare_one(decoy_encode(s))).collect();
                self.schedule = Some(schedule);
            }
            _ => {}
        }
        Ok(())
    }

    fn transmit(
        &mut self,
        _world: &mut QuantumWorld,
        _ctx: &SessionContext<'_>,
        _rng: &mut RngStream,
    ) -> Result<Transmission, AbortReason> {
        let passwords = core::mem::take(&mut self.passwords);
        let stream = match &self.schedule {
            None => passwords,
            Some(s) => interleave(passwords, core::mem::take(&mut self.decoys), &s.positions),
        };
        Ok(Transmission { card: core::mem::take(&mut self.card), stream })
    }

    fn disclose_decoys(&mut self) -> Option<DecoySchedule> {
        self.schedule.clone()
    }

    fn receive_card(&mut self, _w: &mut QuantumWorld, card: Vec<QubitId>, _c: &SessionContext<'_>, _r: &mut RngStream) {
        self.returned = card;
    }
}

/// How an intercepting E picks a measurement basis per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum InterceptPolicy {
    /// Leave the stream alone.
    Off,
    /// Z or X, uniformly at random.
    RandomZx,
    Fixed {
        basis: DecoyBasis,
    },
    /// `{cos θ|0⟩ + sin θ|1⟩, −sin θ|0⟩ + cos θ|1⟩}`; θ = π/8 is the
    /// Breidbart basis between Z and X.
    Angle {
        theta: f64,
    },
}

impl InterceptPolicy {
    fn basis(&self, rng: &mut RngStream) -> Option<ProjectiveBasis<u8>> {
        match *self {
            InterceptPolicy::Off => None,
            InterceptPolicy::RandomZx => Some(decoy_basis(if rng.bit() { DecoyBasis::X } else { DecoyBasis::Z })),
            InterceptPolicy::Fixed { basis } => Some(decoy_basis(basis)),
            InterceptPolicy::Angle { theta } => Some(ProjectiveBasis::real_rotated(theta)),
        }
    }
}

/// Measures every stream qubit in flight and lets the collapsed qubit go on.
#[derive(Debug, Clone)]
pub struct InterceptResend {
    pub policy: InterceptPolicy,
    pub measured: u64,
}

impl InterceptResend {
    pub fn new(policy: InterceptPolicy) -> Self {
        InterceptResend { policy, measured: 0 }
    }

    fn tap(&mut self, world: &mut QuantumWorld, qs: &[QubitId], rng: &mut RngStream) -> Result<(), WorldError> {
        for &q in qs {
            if let Some(b) = self.policy.basis(rng) {
                world.measure(&[q], &b, rng)?;
                self.measured += 1;
            }
        }
        Ok(())
    }
}

impl Eavesdropper for InterceptResend {
    fn access(&self) -> &[AccessSite] {
        &[AccessSite::QuantumChannel]
    }

    fn on_quantum_transit(
        &mut self,
        world: &mut QuantumWorld,
        tx: &mut Transmission,
        rng: &mut RngStream,
    ) -> Result<(), WorldError> {
        let stream = tx.stream.clone();
        self.tap(world, &stream, rng)
    }
}

/// What a man in the middle forwards after absorbing A's qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "forward", rename_all = "kebab-case")]
pub enum MitmForward {
    Nothing,
    Forged { psi: ForgedInput },
}

/// Absorbs A's transmission and forwards substitutes.
///
/// Basic mode: card and password qubits are all replaced by forged pairs.
/// Extended mode: E cannot tell password slots from decoys, so the card is
/// replaced by forged halves and every stream qubit is intercepted in a
/// random Z/X basis and resent.
#[derive(Debug, Clone)]
pub struct ManInTheMiddle {
    pub forward: MitmForward,
    /// Genuine qubits E now holds for later use.
    pub held: Vec<QubitId>,
    intercept: InterceptResend,
}

impl ManInTheMiddle {
    pub fn new(forward: MitmForward) -> Self {
        ManInTheMiddle { forward, held: Vec::new(), intercept: InterceptResend::new(InterceptPolicy::RandomZx) }
    }
}

impl Eavesdropper for ManInTheMiddle {
    fn access(&self) -> &[AccessSite] {
        &[AccessSite::QuantumChannel]
    }

    fn on_quantum_transit(
        &mut self,
        world: &mut QuantumWorld,
        tx: &mut Transmission,
        rng: &mut RngStream,
    ) -> Result<(), WorldError> {
        let n = tx.card.len();
        let extended = tx.stream.len() > n;
        match self.forward {
            MitmForward::Nothing => {
                self.held.append(&mut tx.card);
                self.held.append(&mut tx.stream);
            }
            MitmForward::Forged { psi } => {
                self.held.append(&mut tx.card);
                let mut keys = Vec::with_capacity(n);
                for _ in 0..n {
                    let q = world.prepare(psi.state());
                    keys.push(q[0]);
                    tx.card.push(q[1]);
                }
                if extended {
                    let stream = tx.stream.clone();
                    self.intercept.tap(world, &stream, rng)?;
                    self.held.extend(keys);
                } else {
                    self.held.append(&mut tx.stream);
                    tx.stream = keys;
                }
            }
        }
        Ok(())
    }
}

/// Measurement E applies to each discarded password qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "measurement", rename_all = "kebab-case")]
pub enum DiscardPolicy {
    /// Optimal discrimination of `|0⟩` from `|α⟩`, found numerically.
    Helstrom,
    /// Real rotated basis; outcome 1 votes for bit 1.
    Angle { theta: f64 },
}

/// Optimal single-qubit projective measurement for `|0⟩` vs `|α⟩` with
/// equal priors, found by brute force over the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Helstrom {
    pub theta: f64,
    pub phi: f64,
    pub success: f64,
}

impl Helstrom {
    /// Outcome 0 projects on `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` and votes
    /// for bit 0.
    pub fn basis(&self) -> ProjectiveBasis<u8> {
        let (h, e) = (self.theta / 2.0, c(libm::cos(self.phi), libm::sin(self.phi)));
        let n0 = StateVector::normalized(alloc::vec![c(libm::cos(h), 0.0), e * libm::sin(h)]).expect("unit");
        let n1 = StateVector::normalized(alloc::vec![c(-libm::sin(h), 0.0), e * libm::cos(h)]).expect("unit");
        ProjectiveBasis::from_states(&[n0, n1], alloc::vec![0, 1]).expect("orthonormal pair")
    }
}

fn discrimination_success(theta: f64, phi: f64, alpha: f64, beta: f64) -> f64 {
    // P(0 | |0⟩) = cos²(θ/2); P(1 | |α⟩) = |−sin(θ/2) α + e^{−iφ} cos(θ/2) β|².
    let (s, co) = (libm::sin(theta / 2.0), libm::cos(theta / 2.0));
    let re = -s * alpha + libm::cos(phi) * co * beta;
    let im = -libm::sin(phi) * co * beta;
    0.5 * co * co + 0.5 * (re * re + im * im)
}

pub fn helstrom_measurement(p: &crate::primitives::ProtocolParams) -> Helstrom {
    use core::f64::consts::PI;
    let (a, b) = (p.alpha(), p.beta());
    let (nt, np) = (90, 90);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=nt {
        for j in 0..np {
            let (t, ph) = (PI * i as f64 / nt as f64, 2.0 * PI * j as f64 / np as f64);
            let v = discrimination_success(t, ph, a, b);
            if v > best.0 {
                best = (v, t, ph);
            }
        }
    }
    let (mut dt, mut dp) = (PI / nt as f64, 2.0 * PI / np as f64);
    for _ in 0..20 {
        let (_, t0, p0) = best;
        for i in -4..=4 {
            for j in -4..=4 {
                let t = (t0 + dt * i as f64 / 4.0).clamp(0.0, PI);
                let ph = p0 + dp * j as f64 / 4.0;
                let v = discrimination_success(t, ph, a, b);
                if v > best.0 {
                    best = (v, t, ph);
                }
            }
        }
        dt *= 0.3;
        dp *= 0.3;
    }
    Helstrom { theta: best.1, phi: best.2, success: best.0 }
}

/// Reads each discarded password qubit and keeps a running vote per block.
#[derive(Debug, Clone)]
pub struct DiscardReader {
    basis: ProjectiveBasis<u8>,
    votes: Vec<i64>,
    pub reads: u64,
}

impl DiscardReader {
    pub fn new(policy: DiscardPolicy, p: &crate::primitives::ProtocolParams, blocks: usize) -> Self {
        let basis = match policy {
            DiscardPolicy::Helstrom => helstrom_measurement(p).basis(),
            DiscardPolicy::Angle { theta } => ProjectiveBasis::real_rotated(theta),
        };
        DiscardReader { basis, votes: alloc::vec![0; blocks], reads: 0 }
    }

    /// Majority guess per block; ties guess 0.
    pub fn guesses(&self) -> Vec<bool> {
        self.votes.iter().map(|&v| v > 0).collect()
    }
}

impl Eavesdropper for DiscardReader {
    fn access(&self) -> &[AccessSite] {
        &[AccessSite::DiscardedPasswords]
    }

    fn on_discard(
        &mut self,
        world: &mut QuantumWorld,
        block: usize,
        qubit: QubitId,
        rng: &mut RngStream,
    ) -> Result<(), WorldError> {
        let bit = world.measure(&[qubit], &self.basis, rng)?;
        if let Some(v) = self.votes.get_mut(block) {
            *v += if bit == 1 { 1 } else { -1 };
        }
        self.reads += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::ProtocolParams;

    #[test]
    fn helstrom_sweep_reaches_the_bound() {
        for (a, xi) in [(0.5, 0.5), (0.2, 0.3), (0.8, 0.6)] {
            let p = ProtocolParams::from_alpha_xi(a, xi).unwrap();
            let h = helstrom_measurement(&p);
            assert!((h.success - 0.5 * (1.0 + p.beta())).abs() < 1e-9, "{a}: {}", h.success);
            let b = h.basis();
            let p0 = crate::qcore::born_probability(&StateVector::zero(), b.projector(0)).unwrap();
            let p1 = crate::qcore::born_probability(&crate::primitives::alpha_ket(&p), b.projector(1)).unwrap();
            assert!((0.5 * (p0 + p1) - h.success).abs() < 1e-12);
        }
    }
}

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

//! Enrollment: A and B share N Bell pairs and A locks the card with K.

use alloc::vec::Vec;

use super::{
    run_session, ClassicalPassword, ConfigError, HonestProver, Mode, ProtocolConfig, QuantumWorld, QubitId,
    SessionContext, SessionHooks, SessionTranscript, SmartCard, VerifierStore,
};
use crate::primitives::{build_lock_unitary, make_bell, rotation, BellKind, LockUnitary};
use crate::qcore::{RngStream, StateVector};

/// Everything alive after enrollment: the shared world, both halves of the
/// pairs, and A's secret.
#[derive(Debug, Clone)]
pub struct Enrollment {
    pub(crate) world: QuantumWorld,
    pub(crate) card: SmartCard,
    pub(crate) store: VerifierStore,
    pub(crate) password: ClassicalPassword,
    pub(crate) config: ProtocolConfig,
    pub(crate) unitary: LockUnitary,
    pub(crate) last_pad_round: Option<u64>,
}

/// Enrolls with a uniformly drawn password.
pub fn enroll(config: &ProtocolConfig, rng: &mut RngStream) -> Result<Enrollment, ConfigError> {
    config.validate()?;
    let password = ClassicalPassword::random(config.blocks, rng);
    enroll_with_password(config, password)
}

pub fn enroll_with_password(config: &ProtocolConfig, password: ClassicalPassword) -> Result<Enrollment, ConfigError> {
    config.validate()?;
    if password.len() != config.blocks {
        return Err(ConfigError::PasswordLength { expected: config.blocks, got: password.len() });
    }
    let mut world = QuantumWorld::new();
    let r = rotation(&config.params);
    let mut card = Vec::with_capacity(config.blocks);
    let mut store = Vec::with_capacity(config.blocks);
    for &bit in password.bits() {
        let pair = world.prepare(make_bell(BellKind::Plus));
        if bit {
            world.apply(&r, &pair[..1]).expect("fresh qubit");
        }
        card.push(pair[0]);
        store.push(pair[1]);
    }
    Ok(Enrollment {
        world,
        card: SmartCard::new(card, true),
        store: VerifierStore::new(store),
        password,
        unitary: build_lock_unitary(&config.params),
        config: config.clone(),
        last_pad_round: None,
    })
}

impl Enrollment {
    /// Rebuilds an enrollment from stored per-block pair states.
    pub fn restore(
        config: &ProtocolConfig,
        password: ClassicalPassword,
        pairs: Vec<StateVector>,
        last_pad_round: Option<u64>,
    ) -> Result<Enrollment, ConfigError> {
        config.validate()?;
        if password.len() != config.blocks || pairs.len() != config.blocks || pairs.iter().any(|p| p.qubits() != 2) {
            return Err(ConfigError::PasswordLength { expected: config.blocks, got: pairs.len().min(password.len()) });
        }
        let mut world = QuantumWorld::new();
        let (card, store): (Vec<_>, Vec<_>) = pairs
            .into_iter()
            .map(|s| {
                let q = world.prepare(s);
                (q[0], q[1])
            })
            .unzip();
        Ok(Enrollment {
            world,
            card: SmartCard::new(card, true),
            store: VerifierStore::new(store),
            password,
            unitary: build_lock_unitary(&config.params),
            config: config.clone(),
            last_pad_round,
        })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn password(&self) -> &ClassicalPassword {
        &self.password
    }

    pub fn card(&self) -> &SmartCard {
        &self.card
    }

    pub fn store(&self) -> &VerifierStore {
        &self.store
    }

    pub fn world(&self) -> &QuantumWorld {
        &self.world
    }

    pub fn unitary(&self) -> &LockUnitary {
        &self.unitary
    }

    pub fn last_pad_round(&self) -> Option<u64> {
        self.last_pad_round
    }

    /// Mutable access for attack scenarios that act outside any session.
    pub fn parts_mut(&mut self) -> (&mut QuantumWorld, &mut SmartCard, &VerifierStore) {
        (&mut self.world, &mut self.card, &self.store)
    }

    /// Joint state of block `i`'s card and store qubits, if they form a
    /// pure two-qubit system.
    pub fn pair_state(&self, i: usize) -> Option<StateVector> {
        let c = *self.card.qubits.get(i)?;
        let s = *self.store.qubits.get(i)?;
        self.world.pure_state(&[c, s])
    }

    /// The state block `i` holds right after enrollment.
    pub fn expected_pair_state(&self, i: usize) -> StateVector {
        let plus = make_bell(BellKind::Plus);
        if self.password.bit(i) {
            plus.evolve_on(&rotation(&self.config.params), &[0]).expect("two-qubit state")
        } else {
            plus
        }
    }

    /// Largest phase-blind deviation of any block from its enrolled state;
    /// infinite when a block is missing or entangled with something else.
    pub fn restoration_error(&self) -> f64 {
        (0..self.config.blocks)
            .map(|i| match self.pair_state(i) {
                Some(s) => phase_blind_distance(&s, &self.expected_pair_state(i)),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    /// Runs one honest session in `mode`.
    pub fn run_session(
        &mut self,
        mode: Mode,
        round: u64,
        hooks: SessionHooks<'_>,
        rng: &mut RngStream,
    ) -> SessionTranscript {
        let ctx = SessionContext { config: &self.config, unitary: &self.unitary, round, mode };
        let mut prover = HonestProver::new(&self.password, &mut self.card, &mut self.last_pad_round);
        run_session(&mut self.world, &self.store, &mut prover, ctx, hooks, rng)
    }

    /// Changes the per-session settings. Blocks and lock parameters are
    /// fixed at enrollment and stay as they are.
    pub fn configure_sessions(&mut self, decoys: usize, decoy_error_budget: usize) {
        self.config.decoys = decoys;
        self.config.decoy_error_budget = decoy_error_budget;
    }

    pub fn card_qubits(&self) -> &[QubitId] {
        &self.card.qubits
    }

    pub fn store_qubits(&self) -> &[QubitId] {
        &self.store.qubits
    }

    /// Qubits alive anywhere in the world.
    pub fn live_qubits(&self) -> usize {
        self.world.live_qubits()
    }
}

/// Largest amplitude difference after aligning the global phase of `a` to `b`.
pub(crate) fn phase_blind_distance(a: &StateVector, b: &StateVector) -> f64 {
    let Ok(z) = a.inner(b) else { return f64::INFINITY };
    if z.norm() == 0.0 {
        return f64::INFINITY;
    }
    let phase = z / z.norm();
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

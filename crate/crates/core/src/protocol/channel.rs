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

//! Channels between A and B, and the places an adversary may reach.
//!
//! The classical channel is a broadcast: every message is delivered
//! unmodified and any registered tap may read it. The quantum channel from A
//! to B passes every transmission through an optional tap, which may
//! measure, replace or absorb qubits.
//!
//! A's region is out of reach. In B's region an adversary may read classical
//! records only, with one deliberate exception: the discarded password
//! qubits, which model the read-out loophole of the basic protocol.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DecoySchedule, QuantumWorld, QubitId, WorldError};
use crate::primitives::BellKind;
use crate::qcore::RngStream;

/// Qubits handed to the quantum channel in one session.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transmission {
    /// Card qubits, one per block.
    pub card: Vec<QubitId>,
    /// Password qubits, interleaved with decoys in extended mode.
    pub stream: Vec<QubitId>,
}

impl Transmission {
    pub fn is_empty(&self) -> bool {
        self.card.is_empty() && self.stream.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassicalMessage {
    /// A announces that a session starts.
    Start { round: u64, blocks: usize },
    /// A discloses decoy slots and values once B holds the qubits.
    DecoyDisclosure { schedule: DecoySchedule },
    /// B's final decision.
    Verdict { accepted: bool },
}

/// Classical data produced inside B's region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifierRecord {
    BellOutcome { block: usize, outcome: BellKind },
    DecoyResult { position: usize, consistent: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccessSite {
    /// Qubits travelling from A to B.
    QuantumChannel,
    /// Reading the public classical channel.
    ClassicalChannel,
    /// Altering or blocking classical messages.
    ClassicalTamper,
    /// Classical measurement records in B's region.
    VerifierRecords,
    /// The password qubits B discards after a session.
    DiscardedPasswords,
    /// Holding A's stolen card outside A's region.
    StolenCard,
    /// Anything inside A's region.
    ProverRegion,
    /// Quantum media inside B's region (the key store).
    VerifierQuantumStorage,
}

impl fmt::Display for AccessSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AccessSite::QuantumChannel => "quantum-channel",
            AccessSite::ClassicalChannel => "classical-channel",
            AccessSite::ClassicalTamper => "classical-tamper",
            AccessSite::VerifierRecords => "verifier-records",
            AccessSite::DiscardedPasswords => "discarded-passwords",
            AccessSite::StolenCard => "stolen-card",
            AccessSite::ProverRegion => "prover-region",
            AccessSite::VerifierQuantumStorage => "verifier-quantum-storage",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("access to {0} is forbidden by the security environment")]
    Forbidden(AccessSite),
}

/// The security environment adversaries are held to.
#[derive(Debug, Clone, Copy, Default)]
pub struct SecurityPolicy;

impl SecurityPolicy {
    pub fn permits(site: AccessSite) -> bool {
        !matches!(site, AccessSite::ProverRegion | AccessSite::VerifierQuantumStorage | AccessSite::ClassicalTamper)
    }

    pub fn check(sites: &[AccessSite]) -> Result<(), PolicyError> {
        match sites.iter().find(|s| !Self::permits(**s)) {
            Some(s) => Err(PolicyError::Forbidden(*s)),
            None => Ok(()),
        }
    }
}

/// Adversary hooks. A hook is only invoked when [`Eavesdropper::access`]
/// lists the matching site.
pub trait Eavesdropper {
    fn access(&self) -> &[AccessSite];

    /// [`AccessSite::QuantumChannel`]: the transmission is in flight.
    fn on_quantum_transit(
        &mut self,
        _world: &mut QuantumWorld,
        _tx: &mut Transmission,
        _rng: &mut RngStream,
    ) -> Result<(), WorldError> {
        Ok(())
    }

    /// [`AccessSite::ClassicalChannel`]: a message was broadcast at `step`.
    fn on_classical(&mut self, _step: u8, _msg: &ClassicalMessage) {}

    /// [`AccessSite::VerifierRecords`]: B wrote a measurement record.
    fn on_verifier_record(&mut self, _record: &VerifierRecord) {}

    /// [`AccessSite::DiscardedPasswords`]: `qubit` is about to be destroyed.
    fn on_discard(
        &mut self,
        _world: &mut QuantumWorld,
        _block: usize,
        _qubit: QubitId,
        _rng: &mut RngStream,
    ) -> Result<(), WorldError> {
        Ok(())
    }
}

pub(crate) fn grants(e: &dyn Eavesdropper, site: AccessSite) -> bool {
    e.access().contains(&site)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forbidden_sites() {
        assert!(SecurityPolicy::check(&[AccessSite::QuantumChannel, AccessSite::ClassicalChannel]).is_ok());
        assert_eq!(
            SecurityPolicy::check(&[AccessSite::QuantumChannel, AccessSite::ProverRegion]),
            Err(PolicyError::Forbidden(AccessSite::ProverRegion))
        );
        assert!(SecurityPolicy::check(&[AccessSite::VerifierQuantumStorage]).is_err());
        assert!(SecurityPolicy::check(&[AccessSite::ClassicalTamper]).is_err());
    }
}

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

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{ClassicalMessage, Mode};
use crate::primitives::{BellKind, DecoySymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Accepted,
    RejectedAtDecoy,
    RejectedAtBell,
    Aborted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbortReason {
    /// Configuration and enrolled state disagree.
    ConfigMismatch,
    /// An adversary asked for access the environment forbids.
    PolicyViolation,
    /// Nothing arrived on the quantum channel.
    NothingReceived,
    /// Received qubit counts do not match the block count.
    CountMismatch,
    /// Decoy disclosure missing or malformed.
    MalformedDisclosure,
    /// The prover tried to reuse a one-time pad round.
    PadReuse,
    /// The simulation itself failed.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseMarker {
    pub step: u8,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedMessage {
    pub step: u8,
    pub message: ClassicalMessage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyCheck {
    pub position: usize,
    pub symbol: DecoySymbol,
    pub measured: u8,
    pub consistent: bool,
}

/// Everything observable about one session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionTranscript {
    pub round_id: u64,
    pub mode: Mode,
    pub phases: Vec<PhaseMarker>,
    pub messages: Vec<LoggedMessage>,
    pub bell_outcomes: Vec<BellKind>,
    pub decoy_results: Vec<DecoyCheck>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<AbortReason>,
}

impl SessionTranscript {
    pub(crate) fn new(round_id: u64, mode: Mode) -> Self {
        SessionTranscript {
            round_id,
            mode,
            phases: Vec::new(),
            messages: Vec::new(),
            bell_outcomes: Vec::new(),
            decoy_results: Vec::new(),
            verdict: Verdict::Aborted,
            abort_reason: None,
        }
    }

    /// Appends a phase marker; steps never go backwards.
    pub(crate) fn enter(&mut self, step: u8, label: &str) {
        debug_assert!(self.phases.last().is_none_or(|p| p.step < step), "phase {step} out of order");
        self.phases.push(PhaseMarker { step, label: String::from(label) });
    }

    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    pub fn decoy_mismatches(&self) -> usize {
        self.decoy_results.iter().filter(|d| !d.consistent).count()
    }

    pub fn bell_failures(&self) -> usize {
        self.bell_outcomes.iter().filter(|o| **o != BellKind::Plus).count()
    }

    /// Verdict is consistent with the recorded evidence.
    pub fn is_consistent(&self) -> bool {
        match self.verdict {
            Verdict::Accepted => self.decoy_mismatches() == 0 && self.bell_failures() == 0,
            Verdict::RejectedAtDecoy => self.decoy_mismatches() >= 1,
            Verdict::RejectedAtBell => self.bell_failures() >= 1,
            Verdict::Aborted => self.abort_reason.is_some(),
        }
    }
}

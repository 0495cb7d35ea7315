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
use core::fmt;

use rand::seq::index;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::QubitId;
use crate::primitives::{DecoySymbol, ProtocolParams};
use crate::qcore::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Basic,
    Extended,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Basic => "basic",
            Mode::Extended => "extended",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("block count must be at least 1")]
    NoBlocks,
    #[error("extended mode needs at least one decoy")]
    NoDecoys,
    #[error("password has {got} bits but the configuration asks for {expected}")]
    PasswordLength { expected: usize, got: usize },
}

/// Block count `N`, decoy count `N_D`, protocol parameters, seed and mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub blocks: usize,
    pub decoys: usize,
    pub params: ProtocolParams,
    pub seed: u64,
    pub mode: Mode,
    /// Decoy mismatches tolerated before aborting. Zero for ideal channels.
    #[serde(default)]
    pub decoy_error_budget: usize,
}

impl ProtocolConfig {
    pub fn basic(blocks: usize, params: ProtocolParams, seed: u64) -> Self {
        ProtocolConfig { blocks, decoys: 0, params, seed, mode: Mode::Basic, decoy_error_budget: 0 }
    }

    pub fn extended(blocks: usize, decoys: usize, params: ProtocolParams, seed: u64) -> Self {
        ProtocolConfig { blocks, decoys, params, seed, mode: Mode::Extended, decoy_error_budget: 0 }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.blocks == 0 {
            return Err(ConfigError::NoBlocks);
        }
        if self.mode == Mode::Extended && self.decoys == 0 {
            return Err(ConfigError::NoDecoys);
        }
        Ok(())
    }
}

/// A's persistent password `K`. Serialized as a string of `0`/`1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ClassicalPassword {
    bits: Vec<bool>,
}

impl ClassicalPassword {
    pub fn new(bits: Vec<bool>) -> Self {
        ClassicalPassword { bits }
    }

    pub fn random(len: usize, rng: &mut RngStream) -> Self {
        ClassicalPassword { bits: (0..len).map(|_| rng.bit()).collect() }
    }

    /// Parses `"0101"`-style strings.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|ch| match ch {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|bits| ClassicalPassword { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for ClassicalPassword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl TryFrom<String> for ClassicalPassword {
    type Error = &'static str;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        ClassicalPassword::parse(&s).ok_or("password must be a string of 0s and 1s")
    }
}

impl From<ClassicalPassword> for String {
    fn from(p: ClassicalPassword) -> String {
        alloc::format!("{p}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("one-time pad for round {round} would reuse a pad (last round {last})")]
pub struct PadError {
    pub round: u64,
    pub last: u64,
}

/// The one-time pad `K̃` drawn for a single transfer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneTimePad {
    bits: Vec<bool>,
    round: u64,
}

impl OneTimePad {
    /// Fresh uniform pad. Round ids must strictly increase across draws.
    pub fn draw(len: usize, round: u64, last_round: Option<u64>, rng: &mut RngStream) -> Result<Self, PadError> {
        if let Some(last) = last_round {
            if round <= last {
                return Err(PadError { round, last });
            }
        }
        Ok(OneTimePad { bits: (0..len).map(|_| rng.bit()).collect(), round })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn round(&self) -> u64 {
        self.round
    }
}

/// Decoy values `K_D` and their slots in the transmitted stream of
/// `N + N_D` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoySchedule {
    pub symbols: Vec<DecoySymbol>,
    pub positions: Vec<usize>,
}

impl DecoySchedule {
    /// Uniform symbols at a uniformly random set of `decoys` slots.
    pub fn draw(blocks: usize, decoys: usize, rng: &mut RngStream) -> Self {
        let symbols = (0..decoys).map(|_| DecoySymbol::random(rng)).collect();
        let mut positions = index::sample(rng, blocks + decoys, decoys).into_vec();
        positions.sort_unstable();
        DecoySchedule { symbols, positions }
    }

    /// Strictly increasing positions inside `0..stream_len`, one symbol each.
    pub fn is_well_formed(&self, stream_len: usize) -> bool {
        self.symbols.len() == self.positions.len()
            && self.positions.windows(2).all(|w| w[0] < w[1])
            && self.positions.last().is_none_or(|&p| p < stream_len)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// A's half of the key pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmartCard {
    pub(crate) qubits: Vec<QubitId>,
    pub(crate) locked: bool,
}

impl SmartCard {
    pub fn new(qubits: Vec<QubitId>, locked: bool) -> Self {
        SmartCard { qubits, locked }
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn is_locked(&self) -> bool {
        self.locked
    }
}

/// B's half of the key pairs. The only thing B keeps between sessions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierStore {
    pub(crate) qubits: Vec<QubitId>,
}

impl VerifierStore {
    pub fn new(qubits: Vec<QubitId>) -> Self {
        VerifierStore { qubits }
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn password_text_roundtrip() {
        let k = ClassicalPassword::parse("0101").unwrap();
        assert_eq!(k.bits(), &[false, true, false, true]);
        assert_eq!(alloc::format!("{k}"), "0101");
        assert!(ClassicalPassword::parse("01x").is_none());
    }

    #[test]
    fn pad_rounds_must_increase() {
        let mut rng = RngStream::new(0, 0);
        assert!(OneTimePad::draw(4, 1, None, &mut rng).is_ok());
        assert!(OneTimePad::draw(4, 2, Some(1), &mut rng).is_ok());
        assert_eq!(OneTimePad::draw(4, 1, Some(1), &mut rng), Err(PadError { round: 1, last: 1 }));
    }

    #[test]
    fn schedule_is_sorted_and_in_range() {
        let mut rng = RngStream::new(4, 4);
        for _ in 0..50 {
            let s = DecoySchedule::draw(8, 32, &mut rng);
            assert!(s.is_well_formed(40));
            assert_eq!(s.len(), 32);
        }
        let bad = DecoySchedule { symbols: alloc::vec![DecoySymbol::ALL[0]; 2], positions: alloc::vec![3, 3] };
        assert!(!bad.is_well_formed(10));
    }

    #[test]
    fn config_validation() {
        let p = ProtocolParams::typical();
        assert_eq!(ProtocolConfig::basic(0, p, 0).validate(), Err(ConfigError::NoBlocks));
        assert_eq!(ProtocolConfig::extended(4, 0, p, 0).validate(), Err(ConfigError::NoDecoys));
        assert!(ProtocolConfig::extended(4, 1, p, 0).validate().is_ok());
    }
}

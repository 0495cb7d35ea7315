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

//! Persisted enrollments.
//!
//! A fixture stores every block's two-qubit state as row-major `[re, im]`
//! pairs together with K in the clear. It is a simulation artifact for
//! replaying sessions and offers no protection whatsoever for K.

use std::path::Path;

use qpass_core::protocol::{ClassicalPassword, Enrollment, ProtocolConfig};
use qpass_core::qcore::StateVector;
use qpass_core::C64;
use serde::{Deserialize, Serialize};

use crate::config::SCHEMA_VERSION;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub schema_version: u32,
    pub config: ProtocolConfig,
    pub password: ClassicalPassword,
    #[serde(default)]
    pub last_pad_round: Option<u64>,
    /// Per block, the (card, store) state over |00⟩, |01⟩, |10⟩, |11⟩.
    pub blocks: Vec<Vec<[f64; 2]>>,
}

impl Fixture {
    /// Fails when a block is entangled with anything outside its pair.
    pub fn from_enrollment(e: &Enrollment) -> Option<Fixture> {
        let blocks = (0..e.config().blocks)
            .map(|i| e.pair_state(i).map(|s| s.amplitudes().iter().map(|z| [z.re, z.im]).collect()))
            .collect::<Option<Vec<_>>>()?;
        Some(Fixture {
            schema_version: SCHEMA_VERSION,
            config: e.config().clone(),
            password: e.password().clone(),
            last_pad_round: e.last_pad_round(),
            blocks,
        })
    }

    pub fn into_enrollment(self) -> Result<Enrollment, String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("schema_version {} is not supported", self.schema_version));
        }
        let pairs = self
            .blocks
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                let amps: Vec<C64> = b.into_iter().map(|[re, im]| C64::new(re, im)).collect();
                StateVector::new(amps).map_err(|e| format!("block {i}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Enrollment::restore(&self.config, self.password, pairs, self.last_pad_round).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Fixture, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::MissingFixture { path: path.into(), reason: e.to_string() })?;
        serde_json::from_str(&text).map_err(|e| CliError::BadFixture { path: path.into(), reason: e.to_string() })
    }

    pub fn load_enrollment(path: &Path) -> Result<Enrollment, CliError> {
        Self::load(path)?.into_enrollment().map_err(|reason| CliError::BadFixture { path: path.into(), reason })
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        crate::output::write_json(path, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpass_core::primitives::ProtocolParams;
    use qpass_core::protocol::{enroll, run_extended_session};
    use qpass_core::qcore::RngStream;

    #[test]
    fn roundtrip_preserves_blocks_and_sessions_continue() {
        let cfg = ProtocolConfig::extended(5, 3, ProtocolParams::typical(), 4);
        let mut rng = RngStream::new(4, 0);
        let mut e = enroll(&cfg, &mut rng).unwrap();
        assert!(run_extended_session(&mut e, 1, &mut rng).accepted());
        let f = Fixture::from_enrollment(&e).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: Fixture = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let mut e2 = back.into_enrollment().unwrap();
        assert_eq!(e2.password(), e.password());
        assert!(e2.restoration_error() < 1e-12);
        assert!(run_extended_session(&mut e2, 2, &mut rng).accepted());
        // The stored pad round still guards against reuse.
        assert!(!run_extended_session(&mut e2, 2, &mut rng).accepted());
    }

    #[test]
    fn bad_blocks_are_rejected() {
        let cfg = ProtocolConfig::basic(1, ProtocolParams::typical(), 0);
        let f = Fixture {
            schema_version: SCHEMA_VERSION,
            config: cfg,
            password: ClassicalPassword::parse("1").unwrap(),
            last_pad_round: None,
            blocks: vec![vec![[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]],
        };
        assert!(f.into_enrollment().is_err());
    }
}

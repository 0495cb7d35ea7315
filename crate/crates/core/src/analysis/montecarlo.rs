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

//! Seeded Monte Carlo over whole sessions.
//!
//! Trial `i` of a run seeded with `s` draws everything from
//! [`trial_stream`]`(s, i)`, so trials can be evaluated in any order or in
//! parallel and summed into the same [`Tally`].

use alloc::string::String;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ps_maximize, DetectionStats, OptimizerBudget};
use crate::adversary::{
    trial_card_steal, trial_honest, trial_intercept, trial_mitm, trial_no_card, CardStealPassword, ForgedInput,
    InterceptPolicy, MitmForward,
};
use crate::protocol::{ProtocolConfig, SessionTranscript, Verdict};
use crate::qcore::RngStream;

/// What one session contributes to the statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub verdict: Verdict,
    pub blocks_measured: u64,
    pub block_failures: u64,
    pub decoys: u64,
    pub decoy_flags: u64,
    /// Phase-blind distance of the final blocks from enrollment (honest runs).
    pub restoration_error: f64,
}

impl TrialOutcome {
    pub fn from_transcript(t: &SessionTranscript) -> Self {
        TrialOutcome {
            verdict: t.verdict,
            blocks_measured: t.bell_outcomes.len() as u64,
            block_failures: t.bell_failures() as u64,
            decoys: t.decoy_results.len() as u64,
            decoy_flags: t.decoy_mismatches() as u64,
            restoration_error: 0.0,
        }
    }
}

/// Additive summary of many trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub trials: u64,
    pub accepted: u64,
    pub rejected_at_decoy: u64,
    pub rejected_at_bell: u64,
    pub aborted: u64,
    pub blocks: u64,
    pub block_failures: u64,
    pub decoys: u64,
    pub decoy_flags: u64,
    pub max_restoration_error: f64,
}

impl Tally {
    pub fn add(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        match o.verdict {
            Verdict::Accepted => self.accepted += 1,
            Verdict::RejectedAtDecoy => self.rejected_at_decoy += 1,
            Verdict::RejectedAtBell => self.rejected_at_bell += 1,
            Verdict::Aborted => self.aborted += 1,
        }
        self.blocks += o.blocks_measured;
        self.block_failures += o.block_failures;
        self.decoys += o.decoys;
        self.decoy_flags += o.decoy_flags;
        self.max_restoration_error = self.max_restoration_error.max(o.restoration_error);
    }

    /// Order-independent combination.
    pub fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.accepted += other.accepted;
        self.rejected_at_decoy += other.rejected_at_decoy;
        self.rejected_at_bell += other.rejected_at_bell;
        self.aborted += other.aborted;
        self.blocks += other.blocks;
        self.block_failures += other.block_failures;
        self.decoys += other.decoys;
        self.decoy_flags += other.decoy_flags;
        self.max_restoration_error = self.max_restoration_error.max(other.max_restoration_error);
        self
    }

    pub fn stats(&self) -> AttackStats {
        AttackStats {
            session: DetectionStats::from_counts(self.trials, self.trials - self.accepted),
            decoy_session: DetectionStats::from_counts(self.trials, self.rejected_at_decoy),
            block: DetectionStats::from_counts(self.blocks, self.block_failures),
            decoy: DetectionStats::from_counts(self.decoys, self.decoy_flags),
            aborted: self.aborted,
            max_restoration_error: self.max_restoration_error,
        }
    }
}

/// Detection statistics at the granularities an attack is judged on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackStats {
    /// Sessions B did not accept.
    pub session: DetectionStats,
    /// Sessions stopped by the decoy check.
    pub decoy_session: DetectionStats,
    /// Bell outcomes other than `+`, over every measured block.
    pub block: DetectionStats,
    /// Inconsistent decoys, over every checked decoy.
    pub decoy: DetectionStats,
    pub aborted: u64,
    pub max_restoration_error: f64,
}

impl AttackStats {
    /// Per-block probability of passing the Bell check.
    pub fn block_pass_rate(&self) -> f64 {
        1.0 - self.block.estimate
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown scenario `{0}`")]
pub struct UnknownScenario(pub String);

/// A protocol run plus the adversary, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    Honest { config: ProtocolConfig },
    NoCard { config: ProtocolConfig, forged: ForgedInput },
    CardSteal { config: ProtocolConfig, password: CardStealPassword },
    ManInTheMiddle { config: ProtocolConfig, forward: MitmForward },
    InterceptResend { config: ProtocolConfig, policy: InterceptPolicy },
}

impl Scenario {
    pub const NAMES: [&'static str; 5] = ["honest", "no-card", "card-steal", "man-in-the-middle", "intercept-resend"];

    /// Scenario with its strongest implemented strategy for `config`.
    pub fn from_name(name: &str, config: ProtocolConfig) -> Result<Scenario, UnknownScenario> {
        let p = config.params;
        Ok(match name {
            "honest" => Scenario::Honest { config },
            "no-card" | "no-card-forgery" => {
                Scenario::NoCard { forged: ps_maximize(&p, OptimizerBudget::default()).psi, config }
            }
            "card-steal" => Scenario::CardSteal { password: CardStealPassword::optimal(&p), config },
            "man-in-the-middle" | "mitm" => Scenario::ManInTheMiddle {
                forward: MitmForward::Forged { psi: ps_maximize(&p, OptimizerBudget::default()).psi },
                config,
            },
            "intercept-resend" | "intercept-resend-decoys" => {
                Scenario::InterceptResend { policy: InterceptPolicy::RandomZx, config }
            }
            other => return Err(UnknownScenario(String::from(other))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Honest { .. } => "honest",
            Scenario::NoCard { .. } => "no-card",
            Scenario::CardSteal { .. } => "card-steal",
            Scenario::ManInTheMiddle { .. } => "man-in-the-middle",
            Scenario::InterceptResend { .. } => "intercept-resend",
        }
    }

    pub fn config(&self) -> &ProtocolConfig {
        match self {
            Scenario::Honest { config }
            | Scenario::NoCard { config, .. }
            | Scenario::CardSteal { config, .. }
            | Scenario::ManInTheMiddle { config, .. }
            | Scenario::InterceptResend { config, .. } => config,
        }
    }

    /// One independent session drawn from `rng`.
    pub fn trial(&self, rng: &mut RngStream) -> TrialOutcome {
        match self {
            Scenario::Honest { config } => trial_honest(config, rng),
            Scenario::NoCard { config, forged } => trial_no_card(forged, config, rng),
            Scenario::CardSteal { config, password } => trial_card_steal(password, config, rng),
            Scenario::ManInTheMiddle { config, forward } => trial_mitm(*forward, config, rng),
            Scenario::InterceptResend { config, policy } => trial_intercept(*policy, config, rng),
        }
    }
}

/// The stream trial `index` of a run seeded with `seed` draws from.
pub fn trial_stream(seed: u64, index: u64) -> RngStream {
    RngStream::new(seed, 0).fork(index)
}

/// Sequential reference run.
pub fn monte_carlo(scenario: &Scenario, trials: u64, seed: u64) -> AttackStats {
    monte_carlo_tally(scenario, trials, seed).stats()
}

pub fn monte_carlo_tally(scenario: &Scenario, trials: u64, seed: u64) -> Tally {
    let mut t = Tally::default();
    for i in 0..trials {
        t.add(&scenario.trial(&mut trial_stream(seed, i)));
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::ProtocolParams;

    #[test]
    fn same_seed_same_stats() {
        let cfg = ProtocolConfig::basic(2, ProtocolParams::typical(), 0);
        let s = Scenario::from_name("card-steal", cfg).unwrap();
        assert_eq!(monte_carlo(&s, 200, 9), monte_carlo(&s, 200, 9));
        assert!(Scenario::from_name("nope", s.config().clone()).is_err());
    }

    #[test]
    fn merge_is_order_independent() {
        let cfg = ProtocolConfig::extended(2, 4, ProtocolParams::typical(), 0);
        let s = Scenario::InterceptResend { config: cfg, policy: InterceptPolicy::RandomZx };
        let a = monte_carlo_tally(&s, 30, 1);
        let mut parts = [Tally::default(), Tally::default()];
        for i in (0..30).rev() {
            parts[(i % 2) as usize].add(&s.trial(&mut trial_stream(1, i)));
        }
        assert_eq!(parts[1].merge(parts[0]), a);
    }

    #[test]
    fn honest_runs_never_detected() {
        for cfg in [
            ProtocolConfig::basic(3, ProtocolParams::typical(), 0),
            ProtocolConfig::extended(3, 5, ProtocolParams::typical(), 0),
        ] {
            let st = monte_carlo(&Scenario::Honest { config: cfg }, 300, 4);
            assert_eq!(st.session.detections, 0);
            assert!(st.max_restoration_error < 1e-12);
        }
    }
}

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

//! Resolving an attack section into something runnable, and the rows the
//! `attack` command writes.

use qpass_core::adversary::{
    AccumulationReport, AttackKind, CardStealPassword, DiscardPolicy, InterceptPolicy, MitmForward,
};
use qpass_core::analysis::{
    delta_e_closed_form, ps_closed_form, ps_maximize, AttackStats, DetectionStats, OptimizerBudget, Scenario,
};
use qpass_core::protocol::{Mode, ProtocolConfig};
use serde::Serialize;

use crate::config::AttackParams;
use crate::parallel::{par_accumulation, par_monte_carlo};

/// Checkpoints used when an accumulation run names none.
pub const DEFAULT_ROUNDS: [usize; 6] = [10, 50, 100, 200, 500, 1000];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "run", rename_all = "kebab-case")]
pub enum AttackPlan {
    Sessions { scenario: Scenario },
    Accumulation { config: ProtocolConfig, policy: DiscardPolicy, rounds: Vec<usize> },
}

impl AttackPlan {
    /// Explicit parameters win; otherwise the strongest implemented strategy.
    pub fn resolve(kind: AttackKind, params: &AttackParams, config: ProtocolConfig) -> AttackPlan {
        let p = config.params;
        let scenario = match kind {
            AttackKind::NoCardForgery => Scenario::NoCard {
                forged: params.forged.unwrap_or_else(|| ps_maximize(&p, OptimizerBudget::default()).psi),
                config,
            },
            AttackKind::CardSteal => Scenario::CardSteal {
                password: params.password.unwrap_or_else(|| CardStealPassword::optimal(&p)),
                config,
            },
            AttackKind::ManInTheMiddle => Scenario::ManInTheMiddle {
                forward: params
                    .forward
                    .unwrap_or_else(|| MitmForward::Forged { psi: ps_maximize(&p, OptimizerBudget::default()).psi }),
                config,
            },
            AttackKind::InterceptResendDecoys => {
                Scenario::InterceptResend { policy: params.intercept.unwrap_or(InterceptPolicy::RandomZx), config }
            }
            AttackKind::AccumulateDiscarded => {
                return AttackPlan::Accumulation {
                    config,
                    policy: params.discard.unwrap_or(DiscardPolicy::Helstrom),
                    rounds: params.rounds.clone().unwrap_or_else(|| DEFAULT_ROUNDS.to_vec()),
                }
            }
        };
        AttackPlan::Sessions { scenario }
    }

    pub fn execute(&self, trials: u64, seed: u64) -> AttackResult {
        match self {
            AttackPlan::Sessions { scenario } => {
                let stats = par_monte_carlo(scenario, trials, seed);
                AttackResult::Sessions { stats: Box::new(stats), predicted: predict(scenario) }
            }
            AttackPlan::Accumulation { config, policy, rounds } => {
                AttackResult::Accumulation(par_accumulation(rounds, *policy, config, trials, seed))
            }
        }
    }
}

/// Closed-form expectations, where the model has them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Prediction {
    /// Per-block probability that the Bell check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_failure: Option<f64>,
    /// Per-decoy probability of an inconsistent result.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoy_flag: Option<f64>,
    /// Probability the session is not accepted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub session_detection: Option<f64>,
    /// Probability the decoy check alone stops the session.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoy_session: Option<f64>,
}

pub fn predict(scenario: &Scenario) -> Prediction {
    let c = scenario.config();
    let n = c.blocks as i32;
    let per_block = |fail: f64| Prediction {
        block_failure: Some(fail),
        session_detection: Some(1.0 - (1.0 - fail).powi(n)),
        ..Prediction::default()
    };
    match scenario {
        Scenario::Honest { .. } => Prediction {
            block_failure: Some(0.0),
            decoy_flag: (c.mode == Mode::Extended).then_some(0.0),
            session_detection: Some(0.0),
            decoy_session: (c.mode == Mode::Extended).then_some(0.0),
        },
        Scenario::NoCard { forged, .. } if c.mode == Mode::Basic => per_block(1.0 - ps_closed_form(forged, &c.params)),
        Scenario::CardSteal { password, .. } if c.mode == Mode::Basic => {
            per_block(delta_e_closed_form(password, &c.params))
        }
        Scenario::InterceptResend { policy: InterceptPolicy::RandomZx, .. } => Prediction {
            decoy_flag: Some(0.25),
            decoy_session: Some(1.0 - 0.75f64.powi(c.decoys as i32)),
            ..Prediction::default()
        },
        _ => Prediction::default(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AttackResult {
    Sessions { stats: Box<AttackStats>, predicted: Prediction },
    Accumulation(AccumulationReport),
}

/// One CSV line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatRow {
    pub metric: String,
    pub trials: u64,
    pub detections: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub predicted: Option<f64>,
}

impl StatRow {
    pub fn new(metric: impl Into<String>, s: &DetectionStats, predicted: Option<f64>) -> Self {
        StatRow {
            metric: metric.into(),
            trials: s.trials,
            detections: s.detections,
            estimate: s.estimate,
            std_error: s.std_error,
            ci95_low: s.ci95.0,
            ci95_high: s.ci95.1,
            predicted,
        }
    }
}

impl AttackResult {
    pub fn rows(&self) -> Vec<StatRow> {
        match self {
            AttackResult::Sessions { stats, predicted } => {
                let mut v = vec![
                    StatRow::new("session-detection", &stats.session, predicted.session_detection),
                    StatRow::new("block-failure", &stats.block, predicted.block_failure),
                ];
                if stats.decoy.trials > 0 {
                    v.push(StatRow::new("decoy-flag", &stats.decoy, predicted.decoy_flag));
                    v.push(StatRow::new("decoy-session-rejection", &stats.decoy_session, predicted.decoy_session));
                }
                v
            }
            AttackResult::Accumulation(r) => r
                .points
                .iter()
                .map(|pt| StatRow::new(format!("bit-accuracy@{}", pt.rounds), &pt.accuracy, None))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpass_core::primitives::ProtocolParams;

    #[test]
    fn defaults_pick_strongest_strategy() {
        let c = ProtocolConfig::basic(2, ProtocolParams::typical(), 0);
        let plan = AttackPlan::resolve(AttackKind::CardSteal, &AttackParams::default(), c);
        match &plan {
            AttackPlan::Sessions { scenario } => {
                let pr = predict(scenario);
                assert!((pr.block_failure.unwrap() - 0.2).abs() < 1e-12);
                assert!((pr.session_detection.unwrap() - 0.36).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn accumulation_rows_follow_checkpoints() {
        let c = ProtocolConfig::basic(2, ProtocolParams::typical(), 0);
        let params = AttackParams { rounds: Some(vec![1, 3]), ..Default::default() };
        let r = AttackPlan::resolve(AttackKind::AccumulateDiscarded, &params, c).execute(4, 9);
        let rows = r.rows();
        assert_eq!(rows.iter().map(|r| r.metric.as_str()).collect::<Vec<_>>(), ["bit-accuracy@1", "bit-accuracy@3"]);
        assert!(rows.iter().all(|r| r.trials == 8));
    }
}

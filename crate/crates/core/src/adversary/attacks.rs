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

//! Whole-session attack trials and their sequential drivers.
//!
//! Every trial enrolls afresh (uniform K), runs one session with the
//! adversary in place and reports what B saw.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    CardStealPassword, DiscardPolicy, DiscardReader, ForgedInput, Forgery, Impersonator, InterceptPolicy,
    InterceptResend, ManInTheMiddle, MitmForward,
};
use crate::analysis::{AttackStats, DetectionStats, Tally, TrialOutcome};
use crate::protocol::{
    enroll, run_session, Eavesdropper, Enrollment, Mode, ProtocolConfig, Prover, SessionContext, SessionHooks, Verdict,
};
use crate::qcore::RngStream;

fn aborted() -> TrialOutcome {
    TrialOutcome {
        verdict: Verdict::Aborted,
        blocks_measured: 0,
        block_failures: 0,
        decoys: 0,
        decoy_flags: 0,
        restoration_error: f64::INFINITY,
    }
}

fn against(
    e: &mut Enrollment,
    prover: &mut dyn Prover,
    eve: Option<&mut dyn Eavesdropper>,
    rng: &mut RngStream,
) -> TrialOutcome {
    let ctx = SessionContext { config: &e.config, unitary: &e.unitary, round: 1, mode: e.config.mode };
    let hooks = SessionHooks { eve, observer: None };
    let t = run_session(&mut e.world, &e.store, prover, ctx, hooks, rng);
    TrialOutcome::from_transcript(&t)
}

pub fn trial_honest(config: &ProtocolConfig, rng: &mut RngStream) -> TrialOutcome {
    let Ok(mut e) = enroll(config, rng) else { return aborted() };
    let t = e.run_session(config.mode, 1, SessionHooks::default(), rng);
    let mut o = TrialOutcome::from_transcript(&t);
    o.restoration_error = e.restoration_error();
    o
}

pub fn trial_no_card(forged: &ForgedInput, config: &ProtocolConfig, rng: &mut RngStream) -> TrialOutcome {
    let Ok(mut e) = enroll(config, rng) else { return aborted() };
    let mut eve = Impersonator::new(Forgery::NoCard(*forged));
    against(&mut e, &mut eve, None, rng)
}

pub fn trial_card_steal(password: &CardStealPassword, config: &ProtocolConfig, rng: &mut RngStream) -> TrialOutcome {
    let Ok(mut e) = enroll(config, rng) else { return aborted() };
    let card = e.card.qubits.clone();
    let mut eve = Impersonator::new(Forgery::StolenCard { card, password: *password });
    against(&mut e, &mut eve, None, rng)
}

fn with_tap(config: &ProtocolConfig, eve: &mut dyn Eavesdropper, rng: &mut RngStream) -> TrialOutcome {
    let Ok(mut e) = enroll(config, rng) else { return aborted() };
    let t = e.run_session(config.mode, 1, SessionHooks::with_eve(eve), rng);
    TrialOutcome::from_transcript(&t)
}

pub fn trial_mitm(forward: MitmForward, config: &ProtocolConfig, rng: &mut RngStream) -> TrialOutcome {
    with_tap(config, &mut ManInTheMiddle::new(forward), rng)
}

pub fn trial_intercept(policy: InterceptPolicy, config: &ProtocolConfig, rng: &mut RngStream) -> TrialOutcome {
    with_tap(config, &mut InterceptResend::new(policy), rng)
}

fn drive(trials: u64, rng: &RngStream, mut f: impl FnMut(&mut RngStream) -> TrialOutcome) -> AttackStats {
    let mut t = Tally::default();
    for i in 0..trials {
        t.add(&f(&mut rng.fork(i)));
    }
    t.stats()
}

/// E replaces A with forged `(Q_K, Q_A)` blocks.
pub fn attack_no_card(forged: &ForgedInput, config: &ProtocolConfig, trials: u64, rng: &mut RngStream) -> AttackStats {
    drive(trials, rng, |r| trial_no_card(forged, config, r))
}

/// E holds A's card and forges password qubits.
pub fn attack_with_stolen_card(
    password: &CardStealPassword,
    config: &ProtocolConfig,
    trials: u64,
    rng: &mut RngStream,
) -> AttackStats {
    drive(trials, rng, |r| trial_card_steal(password, config, r))
}

pub fn attack_mitm(forward: MitmForward, config: &ProtocolConfig, trials: u64, rng: &mut RngStream) -> AttackStats {
    drive(trials, rng, |r| trial_mitm(forward, config, r))
}

pub fn attack_intercept_resend(
    policy: InterceptPolicy,
    config: &ProtocolConfig,
    trials: u64,
    rng: &mut RngStream,
) -> AttackStats {
    drive(trials, rng, |r| trial_intercept(policy, config, r))
}

/// K-bit guessing accuracy after a number of observed rounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyPoint {
    pub rounds: usize,
    /// `detections` counts correctly guessed bits.
    pub accuracy: DetectionStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccumulationReport {
    pub mode: Mode,
    pub policy: DiscardPolicy,
    pub points: Vec<AccuracyPoint>,
}

/// One enrollment watched for `max(checkpoints)` rounds. Returns the
/// number of correctly guessed K bits at each checkpoint.
pub fn accumulation_trial(
    policy: DiscardPolicy,
    config: &ProtocolConfig,
    checkpoints: &[usize],
    rng: &mut RngStream,
) -> Vec<u64> {
    let Ok(mut e) = enroll(config, rng) else { return alloc::vec![0; checkpoints.len()] };
    let mut reader = DiscardReader::new(policy, &config.params, config.blocks);
    let last = checkpoints.iter().copied().max().unwrap_or(0);
    let mut correct = alloc::vec![0; checkpoints.len()];
    for round in 1..=last {
        e.run_session(config.mode, round as u64, SessionHooks::with_eve(&mut reader), rng);
        for (slot, _) in checkpoints.iter().enumerate().filter(|(_, &c)| c == round) {
            let guesses = reader.guesses();
            correct[slot] = guesses.iter().zip(e.password.bits()).filter(|(g, k)| g == k).count() as u64;
        }
    }
    correct
}

/// E reads every discarded password qubit and majority-votes each K bit.
pub fn attack_accumulate_discarded(
    checkpoints: &[usize],
    policy: DiscardPolicy,
    config: &ProtocolConfig,
    trials: u64,
    rng: &mut RngStream,
) -> AccumulationReport {
    let mut totals = alloc::vec![0u64; checkpoints.len()];
    for i in 0..trials {
        for (t, c) in totals.iter_mut().zip(accumulation_trial(policy, config, checkpoints, &mut rng.fork(i))) {
            *t += c;
        }
    }
    accumulation_report(checkpoints, policy, config, trials, &totals)
}

pub fn accumulation_report(
    checkpoints: &[usize],
    policy: DiscardPolicy,
    config: &ProtocolConfig,
    trials: u64,
    correct: &[u64],
) -> AccumulationReport {
    let bits = trials * config.blocks as u64;
    let points = checkpoints
        .iter()
        .zip(correct)
        .map(|(&rounds, &c)| AccuracyPoint { rounds, accuracy: DetectionStats::from_counts(bits, c) })
        .collect();
    AccumulationReport { mode: config.mode, policy, points }
}

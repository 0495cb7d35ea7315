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

//! The adversary E: forged inputs, the strategies that use them, and
//! whole-session attack drivers.
//!
//! E is held to the security environment: it may act on the quantum
//! channel, read the classical channel, hold a stolen card, and (as the
//! basic protocol's loophole) read discarded password qubits. Anything
//! inside A's region or B's quantum storage is refused.

mod attacks;
mod inputs;
mod strategies;

pub use attacks::{
    accumulation_report, accumulation_trial, attack_accumulate_discarded, attack_intercept_resend, attack_mitm,
    attack_no_card, attack_with_stolen_card, trial_card_steal, trial_honest, trial_intercept, trial_mitm,
    trial_no_card, AccumulationReport, AccuracyPoint,
};
pub use inputs::{authorize, AttackKind, CardStealPassword, ForgedInput, InputError};
pub use strategies::{
    helstrom_measurement, DiscardPolicy, DiscardReader, Forgery, Helstrom, Impersonator, InterceptPolicy,
    InterceptResend, ManInTheMiddle, MitmForward,
};

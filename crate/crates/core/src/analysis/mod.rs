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

//! Closed forms, independent oracles, optimizers and Monte Carlo
//! statistics.

mod formulas;
mod montecarlo;
mod optimize;
mod stats;

pub use formulas::{
    delta_e_closed_form, delta_e_direct, delta_e_direct_with, pn_closed_form, pn_minimize_direct, ps_closed_form,
    ps_direct, ps_direct_with, total_detection, DomainError, PnSearch,
};
pub use montecarlo::{
    monte_carlo, monte_carlo_tally, trial_stream, AttackStats, Scenario, Tally, TrialOutcome, UnknownScenario,
};
pub use optimize::{ps_maximize, OptimizerBudget, PsOptimum};
pub use stats::{BoundCheckReport, DetectionStats, Z95};

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

//! Rayon drivers. Trial `i` always draws from `trial_stream(seed, i)` and
//! tallies are summed, so results match the sequential drivers exactly.

use qpass_core::adversary::{accumulation_report, accumulation_trial, AccumulationReport, DiscardPolicy};
use qpass_core::analysis::{trial_stream, AttackStats, Scenario, Tally};
use qpass_core::protocol::ProtocolConfig;
use rayon::prelude::*;

pub fn par_tally(scenario: &Scenario, trials: u64, seed: u64) -> Tally {
    (0..trials)
        .into_par_iter()
        .fold(Tally::default, |mut t, i| {
            t.add(&scenario.trial(&mut trial_stream(seed, i)));
            t
        })
        .reduce(Tally::default, Tally::merge)
}

pub fn par_monte_carlo(scenario: &Scenario, trials: u64, seed: u64) -> AttackStats {
    par_tally(scenario, trials, seed).stats()
}

pub fn par_accumulation(
    checkpoints: &[usize],
    policy: DiscardPolicy,
    config: &ProtocolConfig,
    trials: u64,
    seed: u64,
) -> AccumulationReport {
    let zero = || vec![0u64; checkpoints.len()];
    let totals = (0..trials)
        .into_par_iter()
        .fold(zero, |mut acc, i| {
            let c = accumulation_trial(policy, config, checkpoints, &mut trial_stream(seed, i));
            acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
            acc
        })
        .reduce(zero, |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        });
    accumulation_report(checkpoints, policy, config, trials, &totals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpass_core::adversary::attack_accumulate_discarded;
    use qpass_core::analysis::monte_carlo;
    use qpass_core::primitives::ProtocolParams;
    use qpass_core::qcore::RngStream;

    #[test]
    fn parallel_matches_sequential() {
        let cfg = ProtocolConfig::extended(3, 6, ProtocolParams::typical(), 0);
        for name in ["honest", "card-steal", "intercept-resend"] {
            let s = Scenario::from_name(name, cfg.clone()).unwrap();
            assert_eq!(par_monte_carlo(&s, 257, 11), monte_carlo(&s, 257, 11), "{name}");
        }
        let b = ProtocolConfig::basic(4, ProtocolParams::typical(), 0);
        let seq = attack_accumulate_discarded(&[1, 3], DiscardPolicy::Helstrom, &b, 40, &mut RngStream::new(5, 0));
        assert_eq!(par_accumulation(&[1, 3], DiscardPolicy::Helstrom, &b, 40, 5), seq);
    }
}

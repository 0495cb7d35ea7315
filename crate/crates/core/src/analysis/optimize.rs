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

//! Multi-start coordinate search for the best no-card forgery.

use serde::{Deserialize, Serialize};

use super::{ps_closed_form, ps_direct};
use crate::adversary::ForgedInput;
use crate::primitives::ProtocolParams;
use crate::qcore::{c, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizerBudget {
    pub starts: usize,
    /// Objective evaluations allowed per start, the start itself included.
    pub evaluations_per_start: usize,
    pub seed: u64,
}

impl Default for OptimizerBudget {
    fn default() -> Self {
        OptimizerBudget { starts: 64, evaluations_per_start: 20_000, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsOptimum {
    pub psi: ForgedInput,
    /// [`ps_direct`] at `psi`.
    pub value: f64,
    /// [`ps_closed_form`] at `psi`, the objective that was climbed.
    pub closed_value: f64,
    pub evaluations: usize,
    /// The winning start stopped on its step-size criterion, not the budget.
    pub converged: bool,
}

const STEP0: f64 = 0.5;
const STEP_MIN: f64 = 1e-10;
const MIN_GAIN: f64 = 1e-12;

/// Seven reals: `Ψ00 ≥ 0` real, then real and imaginary parts of `Ψ01`,
/// `Ψ10`, `Ψ11`.
fn decode(x: &[f64; 7]) -> Option<ForgedInput> {
    let psi = [c(x[0].abs(), 0.0), c(x[1], x[2]), c(x[3], x[4]), c(x[5], x[6])];
    let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    (n > 1e-300).then(|| ForgedInput::normalized(psi))
}

/// Maximizes the no-card pass probability over normalized forgeries.
pub fn ps_maximize(p: &ProtocolParams, budget: OptimizerBudget) -> PsOptimum {
    assert!(budget.starts >= 1 && budget.evaluations_per_start >= 1, "empty optimizer budget");
    let mut rng = RngStream::new(budget.seed, 0);
    let objective = |x: &[f64; 7]| decode(x).map_or(f64::NEG_INFINITY, |f| ps_closed_form(&f, p));
    let mut total = 0;
    let mut best: Option<([f64; 7], f64, bool)> = None;
    for _ in 0..budget.starts {
        let mut x = [0.0; 7];
        for v in x.iter_mut() {
            *v = rng.normal();
        }
        let (x, fx, evals, converged) = climb(x, &objective, budget.evaluations_per_start);
        total += evals;
        if best.as_ref().is_none_or(|b| fx > b.1) {
            best = Some((x, fx, converged));
        }
    }
    let (x, closed_value, converged) = best.expect("at least one start");
    let psi = decode(&x).unwrap_or(ForgedInput::basis(0));
    PsOptimum { psi, value: ps_direct(&psi, p), closed_value, evaluations: total, converged }
}

fn climb(mut x: [f64; 7], f: &impl Fn(&[f64; 7]) -> f64, budget: usize) -> ([f64; 7], f64, usize, bool) {
    let mut fx = f(&x);
    let mut evals = 1;
    let mut h = STEP0;
    loop {
        if h < STEP_MIN {
            return (x, fx, evals, true);
        }
        let start = fx;
        for i in 0..7 {
            for dir in [1.0, -1.0] {
                if evals >= budget {
                    return (x, fx, evals, false);
                }
                let mut y = x;
                y[i] += dir * h;
                let fy = f(&y);
                evals += 1;
                if fy > fx {
                    x = y;
                    fx = fy;
                    break;
                }
            }
        }
        if fx - start < MIN_GAIN {
            h *= 0.5;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_evaluation_budget_returns_start() {
        let p = ProtocolParams::typical();
        let b = OptimizerBudget { starts: 1, evaluations_per_start: 1, seed: 3 };
        let o = ps_maximize(&p, b);
        assert!(!o.converged);
        assert_eq!(o.evaluations, 1);
        let mut rng = RngStream::new(3, 0);
        let mut x = [0.0; 7];
        for v in x.iter_mut() {
            *v = rng.normal();
        }
        let start = decode(&x).unwrap();
        assert!((o.closed_value - ps_closed_form(&start, &p)).abs() < 1e-15);
    }

    #[test]
    fn reported_value_is_the_direct_trace() {
        let p = ProtocolParams::from_alpha_xi(0.4, 0.8).unwrap();
        let o = ps_maximize(&p, OptimizerBudget { starts: 8, ..Default::default() });
        assert!(o.converged);
        assert_eq!(o.value, ps_direct(&o.psi, &p));
        assert!((o.value - o.closed_value).abs() < 1e-10);
        assert!(o.value <= 0.5 + 1e-9);
    }
}

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

//! The closed-form versus oracle versus optimizer grid behind
//! `verify-bounds`.

use qpass_core::adversary::{CardStealPassword, ForgedInput};
use qpass_core::analysis::{
    delta_e_closed_form, delta_e_direct_with, pn_closed_form, pn_minimize_direct, ps_closed_form, ps_direct_with,
    ps_maximize, BoundCheckReport, OptimizerBudget,
};
use qpass_core::primitives::{build_lock_unitary, ProtocolParams};
use qpass_core::qcore::RngStream;
use rayon::prelude::*;

pub const LOCK_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 1e-10;
pub const GRID_TOL: f64 = 1e-6;
pub const PS_BOUND: f64 = 0.5;
pub const PS_BOUND_TOL: f64 = 1e-9;
/// Expected closeness of the optimizer to the upper bound.
pub const PS_ATTAIN: f64 = 0.499;

#[derive(Debug, Clone)]
pub struct BoundsOptions {
    /// `(α, ξ)` points.
    pub points: Vec<(f64, f64)>,
    pub forgeries: usize,
    pub budget: OptimizerBudget,
    pub seed: u64,
}

/// α, ξ ∈ {0.1, …, 0.9}.
pub fn standard_grid() -> Vec<(f64, f64)> {
    let v: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    v.iter().flat_map(|&a| v.iter().map(move |&x| (a, x))).collect()
}

impl Default for BoundsOptions {
    fn default() -> Self {
        BoundsOptions { points: standard_grid(), forgeries: 100, budget: OptimizerBudget::default(), seed: 0 }
    }
}

fn is_typical(a: f64, x: f64) -> bool {
    (a - 0.5).abs() < 1e-12 && (x - 0.5).abs() < 1e-12
}

/// (r, x, y) samples on the pure-state constraint: five populations times
/// fifteen coherence phases.
pub fn password_grid() -> Vec<CardStealPassword> {
    let mut out = Vec::new();
    for i in 0..5 {
        let r = i as f64 / 4.0;
        let s = (r * (1.0 - r)).sqrt();
        for k in 0..15 {
            let ph = std::f64::consts::TAU * k as f64 / 15.0;
            out.push(CardStealPassword::new(r, s * ph.cos(), s * ph.sin()).expect("on the constraint"));
        }
    }
    out
}

/// All checks at one point, in a fixed order.
pub fn check_point(alpha: f64, xi: f64, opts: &BoundsOptions) -> Vec<BoundCheckReport> {
    let p = match ProtocolParams::from_alpha_xi(alpha, xi) {
        Ok(p) => p,
        Err(e) => {
            let mut r = BoundCheckReport::agreement("params", alpha, xi, 0.0, f64::NAN, 0.0);
            r.quantity = format!("params ({e})");
            r.pass = false;
            return vec![r];
        }
    };
    let u = build_lock_unitary(&p);
    let lc = u.check();
    let mut out = Vec::new();
    let lock = |name: &str, residual: f64| BoundCheckReport::agreement(name, alpha, xi, 0.0, residual, LOCK_TOL);
    out.push(lock("lock-unitarity", lc.unitarity));
    out.push(lock("lock-u-relations", lc.u_relations.iter().copied().fold(0.0, f64::max)));
    out.push(lock("lock-plus-sector", lc.plus_sector));
    out.push(lock("lock-identity-sector", lc.identity_sector));
    out.push(lock("lock-honest-unlock", lc.honest_unlock));
    out.push(lock("lock-inverse", lc.inverse_relations));

    // Random forgeries, seeded per point so the grid can run in any order.
    let mut rng = RngStream::new(opts.seed, ((alpha * 1e6) as u64) << 32 | (xi * 1e6) as u64);
    let mut worst = BoundCheckReport::agreement("ps-oracle", alpha, xi, 0.0, 0.0, ORACLE_TOL);
    for _ in 0..opts.forgeries {
        let f = ForgedInput::random(&mut rng);
        let r = BoundCheckReport::agreement(
            "ps-oracle",
            alpha,
            xi,
            ps_closed_form(&f, &p),
            ps_direct_with(&f, &u).expect("fixed dimensions"),
            ORACLE_TOL,
        );
        if r.discrepancy >= worst.discrepancy {
            worst = r;
        }
    }
    out.push(worst);

    let opt = ps_maximize(&p, opts.budget);
    out.push(BoundCheckReport::upper_bound("ps-max-upper", alpha, xi, PS_BOUND, opt.value, PS_BOUND_TOL));
    if is_typical(alpha, xi) {
        out.push(BoundCheckReport::lower_bound("ps-max-attains", alpha, xi, PS_ATTAIN, opt.value, 0.0));
    }

    let mut worst = BoundCheckReport::agreement("delta-e-oracle", alpha, xi, 0.0, 0.0, ORACLE_TOL);
    let mut y_spread: f64 = 0.0;
    for pw in password_grid() {
        let direct = delta_e_direct_with(&pw, &u).expect("fixed dimensions");
        let r =
            BoundCheckReport::agreement("delta-e-oracle", alpha, xi, delta_e_closed_form(&pw, &p), direct, ORACLE_TOL);
        if r.discrepancy >= worst.discrepancy {
            worst = r;
        }
        let mirror = CardStealPassword::new(pw.r(), pw.x(), -pw.y()).expect("same constraint");
        y_spread = y_spread.max((direct - delta_e_direct_with(&mirror, &u).expect("fixed dimensions")).abs());
    }
    out.push(worst);
    out.push(BoundCheckReport::agreement("delta-e-y-invariance", alpha, xi, 0.0, y_spread, ORACLE_TOL));

    let pn = pn_closed_form(&p);
    out.push(BoundCheckReport::optimum("pn-grid", alpha, xi, pn, pn_minimize_direct(&p).value, GRID_TOL));
    if is_typical(alpha, xi) {
        out.push(BoundCheckReport::optimum("pn-headline", alpha, xi, 0.2, pn, 1e-12));
    }
    out
}

/// Every point, results ordered by grid index regardless of scheduling.
pub fn verify_bounds(opts: &BoundsOptions) -> Vec<BoundCheckReport> {
    opts.points.par_iter().map(|&(a, x)| check_point(a, x, opts)).collect::<Vec<_>>().into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typical_point_rows() {
        let opts = BoundsOptions { points: vec![(0.5, 0.5)], forgeries: 10, ..Default::default() };
        let rows = verify_bounds(&opts);
        let get = |q: &str| rows.iter().find(|r| r.quantity == q).unwrap();
        for q in ["lock-unitarity", "lock-honest-unlock", "ps-oracle", "ps-max-upper", "delta-e-oracle", "pn-grid"] {
            assert!(get(q).pass, "{q}: {:?}", get(q));
        }
        assert!((get("pn-headline").optimizer.unwrap() - 0.2).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.discrepancy.is_finite()));
    }

    #[test]
    fn off_grid_point_has_no_attainment_row() {
        let opts = BoundsOptions { points: vec![(0.3, 0.7)], forgeries: 5, ..Default::default() };
        assert!(verify_bounds(&opts).iter().all(|r| r.quantity != "ps-max-attains"));
    }
}

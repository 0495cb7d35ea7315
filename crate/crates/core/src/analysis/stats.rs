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

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Binomial detection counts with a point estimate and 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionStats {
    pub trials: u64,
    pub detections: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
}

impl DetectionStats {
    /// Normal-approximation interval, or Wilson's when the count sits at
    /// either end (the normal interval collapses to a point there).
    pub fn from_counts(trials: u64, detections: u64) -> Self {
        assert!(detections <= trials, "more detections than trials");
        if trials == 0 {
            return DetectionStats { trials, detections, estimate: 0.0, std_error: 0.0, ci95: (0.0, 1.0) };
        }
        let n = trials as f64;
        let p = detections as f64 / n;
        let se = libm::sqrt(p * (1.0 - p) / n);
        let ci95 = if detections == 0 || detections == trials {
            wilson(p, n)
        } else {
            ((p - Z95 * se).max(0.0), (p + Z95 * se).min(1.0))
        };
        DetectionStats { trials, detections, estimate: p, std_error: se, ci95 }
    }

    /// Standard error used when judging agreement with `target`: the larger
    /// of the empirical error and the error the target itself implies.
    pub fn sigma_against(&self, target: f64) -> f64 {
        if self.trials == 0 {
            return f64::INFINITY;
        }
        let t = target.clamp(0.0, 1.0);
        self.std_error.max(libm::sqrt(t * (1.0 - t) / self.trials as f64))
    }

    /// Signed distance to `target` in units of [`Self::sigma_against`].
    pub fn z_score(&self, target: f64) -> f64 {
        let s = self.sigma_against(target);
        if s == 0.0 {
            return if self.estimate == target { 0.0 } else { f64::INFINITY.copysign(self.estimate - target) };
        }
        (self.estimate - target) / s
    }

    pub fn within(&self, target: f64, k_sigma: f64) -> bool {
        self.z_score(target).abs() <= k_sigma
    }

    /// Complementary counts (passes instead of detections).
    pub fn complement(&self) -> Self {
        Self::from_counts(self.trials, self.trials - self.detections)
    }
}

fn wilson(p: f64, n: f64) -> (f64, f64) {
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// One checked quantity: a closed form against an independent route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub quantity: String,
    pub alpha: f64,
    pub xi: f64,
    pub closed_form: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<f64>,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl BoundCheckReport {
    /// `|closed − oracle| ≤ tol`.
    pub fn agreement(quantity: &str, alpha: f64, xi: f64, closed: f64, oracle: f64, tol: f64) -> Self {
        let d = (closed - oracle).abs();
        BoundCheckReport {
            quantity: String::from(quantity),
            alpha,
            xi,
            closed_form: closed,
            oracle: Some(oracle),
            optimizer: None,
            discrepancy: d,
            tolerance: tol,
            pass: d <= tol,
        }
    }

    /// Optimized value against a closed-form target, `|target − found| ≤ tol`.
    pub fn optimum(quantity: &str, alpha: f64, xi: f64, target: f64, found: f64, tol: f64) -> Self {
        let d = (target - found).abs();
        BoundCheckReport {
            quantity: String::from(quantity),
            alpha,
            xi,
            closed_form: target,
            oracle: None,
            optimizer: Some(found),
            discrepancy: d,
            tolerance: tol,
            pass: d <= tol,
        }
    }

    /// `found ≤ bound + tol`; the discrepancy is the excess over the bound.
    pub fn upper_bound(quantity: &str, alpha: f64, xi: f64, bound: f64, found: f64, tol: f64) -> Self {
        let d = (found - bound).max(0.0);
        BoundCheckReport {
            quantity: String::from(quantity),
            alpha,
            xi,
            closed_form: bound,
            oracle: None,
            optimizer: Some(found),
            discrepancy: d,
            tolerance: tol,
            pass: d <= tol,
        }
    }

    /// `found ≥ bound − tol`; the discrepancy is the shortfall.
    pub fn lower_bound(quantity: &str, alpha: f64, xi: f64, bound: f64, found: f64, tol: f64) -> Self {
        let d = (bound - found).max(0.0);
        BoundCheckReport {
            quantity: String::from(quantity),
            alpha,
            xi,
            closed_form: bound,
            oracle: None,
            optimizer: Some(found),
            discrepancy: d,
            tolerance: tol,
            pass: d <= tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_contains_estimate() {
        for (n, k) in [(10, 0), (10, 10), (100, 37), (1, 1), (1000, 1)] {
            let s = DetectionStats::from_counts(n, k);
            assert!(s.ci95.0 <= s.estimate && s.estimate <= s.ci95.1, "{s:?}");
            assert_eq!(s.estimate, k as f64 / n as f64);
        }
        let w = DetectionStats::from_counts(100, 0);
        assert!(w.ci95.1 > 0.0 && w.ci95.1 < 0.05);
    }

    #[test]
    fn sigma_uses_target_when_empirical_is_zero() {
        let s = DetectionStats::from_counts(400, 400);
        assert_eq!(s.std_error, 0.0);
        assert!((s.sigma_against(0.99) - libm::sqrt(0.99 * 0.01 / 400.0)).abs() < 1e-15);
        assert!(s.within(0.999, 4.0));
        assert!(!s.within(0.5, 4.0));
    }

    #[test]
    fn report_verdicts() {
        assert!(BoundCheckReport::agreement("q", 0.5, 0.5, 1.0, 1.0 + 1e-11, 1e-10).pass);
        assert!(!BoundCheckReport::agreement("q", 0.5, 0.5, 1.0, 1.1, 1e-10).pass);
        assert!(BoundCheckReport::upper_bound("q", 0.5, 0.5, 0.5, 0.36, 1e-9).pass);
        assert!(!BoundCheckReport::lower_bound("q", 0.5, 0.5, 0.499, 0.36, 0.0).pass);
    }
}

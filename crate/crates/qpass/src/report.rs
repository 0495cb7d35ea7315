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

//! Headline numbers and detection-versus-N curves, plus a roll-up of any
//! earlier `verify-bounds` and `attack` outputs found in the same directory.

use std::path::Path;

use qpass_core::adversary::CardStealPassword;
use qpass_core::analysis::{
    pn_closed_form, pn_minimize_direct, ps_maximize, total_detection, DetectionStats, OptimizerBudget, Scenario,
};
use qpass_core::protocol::{Mode, ProtocolConfig};
use serde::Serialize;
use serde_json::Value;

use crate::parallel::par_monte_carlo;

pub const CURVE_BLOCKS: [usize; 6] = [1, 2, 4, 8, 16, 32];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Headline {
    pub alpha: f64,
    pub xi: f64,
    pub pn_closed_form: f64,
    pub pn_grid: f64,
    /// Card-steal per-block Bell failure rate, basic mode.
    pub pn_monte_carlo: DetectionStats,
    pub ps_optimum: f64,
    pub ps_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub blocks: usize,
    pub card_steal_predicted: f64,
    pub card_steal_monte_carlo: DetectionStats,
    /// `1 − (1/2)^N`.
    pub no_card_floor: f64,
    /// `1 − p_s^N` at the optimizer's best forgery.
    pub no_card_best_forgery: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsRollup {
    pub total: usize,
    pub failed: usize,
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackRollup {
    pub file: String,
    pub kind: Option<String>,
    pub session_detection: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub headline: Headline,
    pub curve: Vec<CurvePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsRollup>,
    pub attacks: Vec<AttackRollup>,
}

/// `quantity,value` pairs for the CSV twin of the summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub quantity: String,
    pub value: f64,
}

pub fn build(config: &ProtocolConfig, trials: u64, seed: u64, out_dir: &Path) -> Summary {
    let p = config.params;
    let pn = pn_closed_form(&p);
    let ps = ps_maximize(&p, OptimizerBudget::default()).value;
    let steal = |blocks: usize| Scenario::CardSteal {
        config: ProtocolConfig { blocks, mode: Mode::Basic, ..*config },
        password: CardStealPassword::optimal(&p),
    };
    let base = par_monte_carlo(&steal(config.blocks), trials, seed);
    let headline = Headline {
        alpha: p.alpha(),
        xi: p.xi(),
        pn_closed_form: pn,
        pn_grid: pn_minimize_direct(&p).value,
        pn_monte_carlo: base.block,
        ps_optimum: ps,
        ps_bound: 0.5,
    };
    let curve = CURVE_BLOCKS
        .iter()
        .map(|&n| CurvePoint {
            blocks: n,
            card_steal_predicted: total_detection(pn, n as u32).unwrap_or(f64::NAN),
            card_steal_monte_carlo: par_monte_carlo(&steal(n), trials, seed.wrapping_add(n as u64)).session,
            no_card_floor: 1.0 - 0.5f64.powi(n as i32),
            no_card_best_forgery: 1.0 - ps.powi(n as i32),
        })
        .collect();
    Summary { headline, curve, bounds: read_bounds(out_dir), attacks: read_attacks(out_dir) }
}

fn read_json(path: &Path) -> Option<Value> {
    serde_json::from_str(&std::fs::read_to_string(path).ok()?).ok()
}

fn read_bounds(dir: &Path) -> Option<BoundsRollup> {
    let v = read_json(&dir.join("bounds.json"))?;
    let rows = v.get("rows")?.as_array()?;
    let failing: Vec<String> = rows
        .iter()
        .filter(|r| r.get("pass").and_then(Value::as_bool) == Some(false))
        .map(|r| {
            format!(
                "{} at alpha={} xi={}",
                r.get("quantity").and_then(Value::as_str).unwrap_or("?"),
                r.get("alpha").unwrap_or(&Value::Null),
                r.get("xi").unwrap_or(&Value::Null)
            )
        })
        .collect();
    Some(BoundsRollup { total: rows.len(), failed: failing.len(), failing })
}

fn read_attacks(dir: &Path) -> Vec<AttackRollup> {
    let Ok(entries) = std::fs::read_dir(dir) else { return Vec::new() };
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.starts_with("attack_") && n.ends_with(".json"))
        .collect();
    names.sort();
    names
        .into_iter()
        .filter_map(|file| {
            let v = read_json(&dir.join(&file))?;
            Some(AttackRollup {
                kind: v.pointer("/config/attack/kind").and_then(Value::as_str).map(String::from),
                session_detection: v.pointer("/result/stats/session/estimate").and_then(Value::as_f64),
                file,
            })
        })
        .collect()
}

impl Summary {
    pub fn rows(&self) -> Vec<SummaryRow> {
        let h = &self.headline;
        let mut v = vec![
            SummaryRow { quantity: "alpha".into(), value: h.alpha },
            SummaryRow { quantity: "xi".into(), value: h.xi },
            SummaryRow { quantity: "pn_closed_form".into(), value: h.pn_closed_form },
            SummaryRow { quantity: "pn_grid".into(), value: h.pn_grid },
            SummaryRow { quantity: "pn_monte_carlo".into(), value: h.pn_monte_carlo.estimate },
            SummaryRow { quantity: "ps_optimum".into(), value: h.ps_optimum },
            SummaryRow { quantity: "ps_bound".into(), value: h.ps_bound },
        ];
        for c in &self.curve {
            let n = c.blocks;
            v.push(SummaryRow { quantity: format!("card_steal_predicted@N={n}"), value: c.card_steal_predicted });
            v.push(SummaryRow {
                quantity: format!("card_steal_monte_carlo@N={n}"),
                value: c.card_steal_monte_carlo.estimate,
            });
            v.push(SummaryRow { quantity: format!("no_card_floor@N={n}"), value: c.no_card_floor });
            v.push(SummaryRow { quantity: format!("no_card_best_forgery@N={n}"), value: c.no_card_best_forgery });
        }
        if let Some(b) = &self.bounds {
            v.push(SummaryRow { quantity: "bounds_failed".into(), value: b.failed as f64 });
            v.push(SummaryRow { quantity: "bounds_total".into(), value: b.total as f64 });
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpass_core::primitives::ProtocolParams;

    #[test]
    fn typical_headline() {
        let dir = tempfile::tempdir().unwrap();
        let c = ProtocolConfig::basic(4, ProtocolParams::typical(), 0);
        let s = build(&c, 200, 1, dir.path());
        assert!((s.headline.pn_closed_form - 0.2).abs() < 1e-12);
        assert!(s.headline.ps_optimum <= 0.5 + 1e-9);
        assert!(s.bounds.is_none() && s.attacks.is_empty());
        assert_eq!(s.curve.len(), CURVE_BLOCKS.len());
        assert!((s.curve[1].card_steal_predicted - 0.36).abs() < 1e-12);
    }
}

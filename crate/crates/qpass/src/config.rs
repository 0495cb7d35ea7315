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

//! Versioned JSON run configuration, flag overrides and aggregated
//! validation.

use std::path::{Path, PathBuf};

use qpass_core::adversary::{AttackKind, CardStealPassword, DiscardPolicy, ForgedInput, InterceptPolicy, MitmForward};
use qpass_core::primitives::ProtocolParams;
use qpass_core::protocol::{Mode, ProtocolConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn default_alpha() -> f64 {
    0.5
}

fn default_delta() -> f64 {
    // ξ = cos δ = 1/2.
    std::f64::consts::FRAC_PI_3
}

fn default_blocks() -> usize {
    8
}

fn default_trials() -> u64 {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    #[serde(default)]
    pub decoys: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Radians.
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub decoy_error_budget: usize,
}

fn default_mode() -> Mode {
    Mode::Basic
}

impl Default for ProtocolSection {
    fn default() -> Self {
        ProtocolSection {
            blocks: default_blocks(),
            decoys: 0,
            alpha: default_alpha(),
            delta: default_delta(),
            mode: Mode::Basic,
            decoy_error_budget: 0,
        }
    }
}

/// Strategy parameters; which ones matter depends on the attack kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forged: Option<ForgedInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub password: Option<CardStealPassword>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept: Option<InterceptPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward: Option<MitmForward>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discard: Option<DiscardPolicy>,
    /// Round counts at which the accumulation attack is scored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSection {
    pub kind: AttackKind,
    #[serde(default)]
    pub params: AttackParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    #[serde(default)]
    pub protocol: ProtocolSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Sessions per `run` invocation.
    #[serde(default = "one")]
    pub sessions: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn one() -> u64 {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            protocol: ProtocolSection::default(),
            seed: None,
            trials: default_trials(),
            sessions: 1,
            attack: None,
            output_dir: None,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub blocks: Option<usize>,
    pub decoys: Option<usize>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub xi: Option<f64>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub sessions: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub attack: Option<AttackKind>,
    pub intercept: Option<InterceptPolicy>,
    pub forward: Option<MitmForward>,
    pub rounds: Option<Vec<usize>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Config(vec![format!("{}: {e}", path.display())]))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(mut v) => {
                v.iter_mut().for_each(|m| *m = format!("{}: {m}", path.display()));
                CliError::Config(v)
            }
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(vec![e.to_string()]))
    }

    pub fn apply(&mut self, o: &Overrides) {
        let p = &mut self.protocol;
        if let Some(v) = o.blocks {
            p.blocks = v;
        }
        if let Some(v) = o.decoys {
            p.decoys = v;
        }
        if let Some(v) = o.alpha {
            p.alpha = v;
        }
        if let Some(v) = o.delta {
            p.delta = v;
        }
        if let Some(xi) = o.xi {
            p.delta = xi.acos();
        }
        if let Some(v) = o.mode {
            p.mode = v;
        }
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if let Some(v) = o.trials {
            self.trials = v;
        }
        if let Some(v) = o.sessions {
            self.sessions = v;
        }
        if o.output_dir.is_some() {
            self.output_dir.clone_from(&o.output_dir);
        }
        if let Some(kind) = o.attack {
            if self.attack.as_ref().is_none_or(|a| a.kind != kind) {
                self.attack = Some(AttackSection { kind, params: AttackParams::default() });
            }
        }
        if let Some(a) = self.attack.as_mut() {
            if o.intercept.is_some() {
                a.params.intercept = o.intercept;
            }
            if o.forward.is_some() {
                a.params.forward = o.forward;
            }
            if o.rounds.is_some() {
                a.params.rounds.clone_from(&o.rounds);
            }
        }
    }

    /// Every problem at once, or the ready-to-use protocol configuration.
    pub fn validate(&self) -> Result<ProtocolConfig, CliError> {
        let mut errs = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            errs.push(format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", self.schema_version));
        }
        let p = &self.protocol;
        let params = ProtocolParams::new(p.alpha, p.delta);
        if let Err(e) = &params {
            errs.push(e.to_string());
        }
        if p.blocks == 0 {
            errs.push("protocol.blocks must be at least 1".into());
        }
        if p.mode == Mode::Extended && p.decoys == 0 {
            errs.push("extended mode needs protocol.decoys >= 1".into());
        }
        if self.trials == 0 {
            errs.push("trials must be at least 1".into());
        }
        if self.sessions == 0 {
            errs.push("sessions must be at least 1".into());
        }
        if let Some(a) = &self.attack {
            if a.kind == AttackKind::InterceptResendDecoys && p.mode != Mode::Extended {
                errs.push("intercept-resend-decoys needs extended mode".into());
            }
            if let Some(r) = &a.params.rounds {
                if r.is_empty() || r.contains(&0) {
                    errs.push("attack.params.rounds must be non-empty and positive".into());
                }
            }
            if let Some(InterceptPolicy::Angle { theta }) = a.params.intercept {
                if !theta.is_finite() {
                    errs.push("intercept angle must be finite".into());
                }
            }
        }
        match (errs.is_empty(), params) {
            (true, Ok(params)) => Ok(ProtocolConfig {
                blocks: p.blocks,
                decoys: p.decoys,
                params,
                seed: self.seed.unwrap_or(0),
                mode: p.mode,
                decoy_error_budget: p.decoy_error_budget,
            }),
            _ => Err(CliError::Config(errs)),
        }
    }

    /// The seed, or a configuration error naming the command that needs it.
    pub fn require_seed(&self, command: &str) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Config(vec![format!("`{command}` needs --seed (or `seed` in the config)")]))
    }
}

/// Parses `random-zx`, `z`, `x`, `off` or `angle:<radians>`.
pub fn parse_intercept(s: &str) -> Result<InterceptPolicy, String> {
    use qpass_core::primitives::DecoyBasis;
    match s {
        "off" => Ok(InterceptPolicy::Off),
        "random-zx" | "random" => Ok(InterceptPolicy::RandomZx),
        "z" => Ok(InterceptPolicy::Fixed { basis: DecoyBasis::Z }),
        "x" => Ok(InterceptPolicy::Fixed { basis: DecoyBasis::X }),
        "breidbart" => Ok(InterceptPolicy::Angle { theta: std::f64::consts::FRAC_PI_8 }),
        _ => s
            .strip_prefix("angle:")
            .and_then(|t| t.parse::<f64>().ok())
            .map(|theta| InterceptPolicy::Angle { theta })
            .ok_or_else(|| format!("unknown intercept policy `{s}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = RunConfig { seed: Some(1), ..Default::default() };
        let p = c.validate().unwrap();
        assert!((p.params.alpha() - 0.5).abs() < 1e-15);
        assert!((p.params.xi() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn errors_are_aggregated() {
        let c = RunConfig::from_json(
            r#"{"schema_version": 7, "protocol": {"blocks": 0, "alpha": 1.5, "mode": "extended"}, "trials": 0}"#,
        )
        .unwrap();
        match c.validate() {
            Err(CliError::Config(v)) => assert_eq!(v.len(), 5, "{v:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RunConfig::from_json(r#"{"protocol": {"blocks": 2, "colour": 1}}"#).is_err());
    }

    #[test]
    fn xi_flag_sets_delta() {
        let mut c = RunConfig::default();
        c.apply(&Overrides { xi: Some(0.3), ..Default::default() });
        assert!((c.protocol.delta.cos() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn intercept_policies_parse() {
        assert_eq!(parse_intercept("random-zx"), Ok(InterceptPolicy::RandomZx));
        assert_eq!(parse_intercept("angle:0.5"), Ok(InterceptPolicy::Angle { theta: 0.5 }));
        assert!(parse_intercept("sideways").is_err());
    }
}

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

use core::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("alpha must lie strictly inside (0, 1), got {0}")]
    Alpha(f64),
    #[error("delta must lie strictly inside (0, pi/2), got {0}")]
    Delta(f64),
    #[error("xi must lie strictly inside (0, 1), got {0}")]
    Xi(f64),
}

/// Password overlap `α` and rotation angle `δ`, with the derived
/// `β = √(1−α²)`, `ξ = cos δ`, `η = sin δ` and `d = √(1−α²ξ²)`.
///
/// `ξ` is always derived from `δ`, so `e^{iδ} = ξ + iη` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ProtocolParams {
    alpha: f64,
    delta: f64,
    beta: f64,
    xi: f64,
    eta: f64,
    d: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    delta: f64,
}

impl TryFrom<RawParams> for ProtocolParams {
    type Error = ParamError;

    fn try_from(r: RawParams) -> Result<Self, ParamError> {
        ProtocolParams::new(r.alpha, r.delta)
    }
}

impl From<ProtocolParams> for RawParams {
    fn from(p: ProtocolParams) -> Self {
        RawParams { alpha: p.alpha, delta: p.delta }
    }
}

impl ProtocolParams {
    pub fn new(alpha: f64, delta: f64) -> Result<Self, ParamError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ParamError::Alpha(alpha));
        }
        if !(delta > 0.0 && delta < FRAC_PI_2) {
            return Err(ParamError::Delta(delta));
        }
        let xi = libm::cos(delta);
        let eta = libm::sin(delta);
        Ok(ProtocolParams {
            alpha,
            delta,
            beta: libm::sqrt(1.0 - alpha * alpha),
            xi,
            eta,
            d: libm::sqrt(1.0 - alpha * alpha * xi * xi),
        })
    }

    /// Takes `ξ` instead of `δ`; `δ = arccos ξ`.
    pub fn from_alpha_xi(alpha: f64, xi: f64) -> Result<Self, ParamError> {
        if !(xi > 0.0 && xi < 1.0) {
            return Err(ParamError::Xi(xi));
        }
        Self::new(alpha, libm::acos(xi))
    }

    /// α = ξ = 1/2.
    pub fn typical() -> Self {
        Self::from_alpha_xi(0.5, 0.5).expect("typical parameters are valid")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

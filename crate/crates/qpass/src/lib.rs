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

//! Command-line harness for the quantum password simulator: config and
//! fixture files, the rayon Monte Carlo drivers, the bounds grid and the
//! summary report.

pub mod attack;
pub mod bounds;
pub mod config;
pub mod error;
pub mod fixture;
pub mod output;
pub mod parallel;
pub mod report;

pub use error::CliError;

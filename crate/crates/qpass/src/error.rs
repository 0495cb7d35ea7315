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

use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),
    #[error("fixture {path} not found: {reason}")]
    MissingFixture { path: PathBuf, reason: String },
    #[error("fixture {path} is malformed: {reason}")]
    BadFixture { path: PathBuf, reason: String },
    #[error("cannot write {path}: {reason}")]
    Write { path: PathBuf, reason: String },
    #[error("{failed} of {total} bound checks failed")]
    BoundsFailed { failed: usize, total: usize },
}

impl CliError {
    /// sysexits-style codes: 1 for failed checks, 64 usage, 65 bad input
    /// data, 66 missing input, 73 cannot create output.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BoundsFailed { .. } => 1,
            CliError::Config(_) => 64,
            CliError::BadFixture { .. } => 65,
            CliError::MissingFixture { .. } => 66,
            CliError::Write { .. } => 73,
        }
    }

    pub fn write(path: impl Into<PathBuf>, e: impl std::fmt::Display) -> Self {
        CliError::Write { path: path.into(), reason: e.to_string() }
    }
}

impl From<&CliError> for ExitCode {
    fn from(e: &CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}

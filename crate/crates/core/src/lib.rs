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

//! Simulation core for Bell-pair quantum password authentication.
//!
//! A prover A keeps half of a set of Bell pairs on a quantum smart card and
//! locks them with a classical password `K` by rotating the card qubits whose
//! password bit is 1. To authenticate, A encodes `K` into the non-orthogonal
//! states |0⟩ and |α⟩ and sends it with the card qubits; the verifier B
//! applies the lock unitary `U`, checks every pair against the Bell state
//! |+⟩, re-locks with `U⁻¹` and throws the password qubits away. The extended
//! protocol adds a one-time pad and BB84-style decoy qubits.
//!
//! The crate is `no_std` (it needs `alloc`). Modules:
//!
//! * [`qcore`]: dense complex linear algebra for a handful of qubits,
//!   projective measurement and seeded random streams.
//! * [`primitives`]: Bell states, the password states, the rotation `R`,
//!   the lock unitary `U` and decoy encoding.
//! * [`protocol`]: enrollment, the basic and extended session runners,
//!   channels with adversary taps, and session transcripts.
//! * [`adversary`]: impersonation, eavesdropping and accumulation attacks.
//! * [`analysis`]: closed forms, trace-based oracles, optimizers and
//!   Monte Carlo statistics.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod analysis;
pub mod primitives;
pub mod protocol;
pub mod qcore;

pub use qcore::{QError, C64};

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

//! Parties, channels and full protocol runs.
//!
//! The basic protocol has nine steps: enrollment (1–2), password encoding and
//! transmission (3–4), unlock, Bell check and re-lock by the verifier (5–7),
//! disposal of the password qubits (8) and return of the card (9). The
//! extended protocol inserts a one-time pad and decoy qubits, for fourteen
//! steps in total.
//!
//! Each block (password qubit, card qubit, store qubit) is simulated as its
//! own small system in a [`QuantumWorld`]; the protocol never entangles
//! different blocks.

mod channel;
mod enroll;
mod session;
mod transcript;
mod types;
mod world;

pub use channel::{
    AccessSite, ClassicalMessage, Eavesdropper, PolicyError, SecurityPolicy, Transmission, VerifierRecord,
};
pub use enroll::{enroll, enroll_with_password, Enrollment};
pub(crate) use session::interleave;
pub use session::{
    run_basic_session, run_extended_session, run_session, HonestProver, PhaseView, Prover, SessionContext, SessionHooks,
};
pub use transcript::{AbortReason, DecoyCheck, LoggedMessage, PhaseMarker, SessionTranscript, Verdict};
pub use types::{
    ClassicalPassword, ConfigError, DecoySchedule, Mode, OneTimePad, PadError, ProtocolConfig, SmartCard, VerifierStore,
};
pub use world::{QuantumWorld, QubitId, WorldError};

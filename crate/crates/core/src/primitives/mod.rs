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

//! Protocol-specific quantum objects.

mod decoy;
mod lock;
mod params;
mod states;

pub use decoy::{decoy_basis, decoy_encode, decoy_measure, DecoyBasis, DecoySymbol};
pub use lock::{
    apply_lock, apply_unlock, build_lock_unitary, sector_basis, Completion, LockBlock, LockCheck, LockUnitary,
};
pub use params::{ParamError, ProtocolParams};
pub use states::{
    alpha_ket, bell_acceptance_probability, bell_basis, bell_verify, bell_verify_mixed, c_ket, make_bell, password_ket,
    rotation, rotation_inverse, xi_ket, BellKind,
};

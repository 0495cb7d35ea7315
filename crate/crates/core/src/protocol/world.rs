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

//! Qubit bookkeeping for a running simulation.
//!
//! Every live qubit belongs to exactly one *system*: a set of qubits in a
//! joint pure state. Operations merge systems on demand and rank-one
//! measurements split the measured qubits back out, so protocol blocks stay
//! at three or four qubits.
//!
//! Throwing a qubit away is simulated by measuring it in the computational
//! basis and forgetting the result. The reduced state of everything else is
//! the same as after a partial trace, so every statistic seen by the
//! remaining parties is exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{measure_on_indexed, DensityMatrix, Matrix, ProjectiveBasis, QError, RngStream, StateVector};

/// Handle to a simulated qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitId(u32);

impl QubitId {
    pub fn raw(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("qubit {0:?} does not exist")]
    UnknownQubit(QubitId),
    #[error("qubit {0:?} listed twice")]
    DuplicateQubit(QubitId),
    #[error(transparent)]
    Linear(#[from] QError),
}

#[derive(Debug, Clone)]
struct System {
    qubits: Vec<QubitId>,
    state: StateVector,
}

/// All qubits alive in one simulation.
#[derive(Debug, Clone, Default)]
pub struct QuantumWorld {
    systems: BTreeMap<u32, System>,
    location: BTreeMap<QubitId, u32>,
    next_qubit: u32,
    next_system: u32,
}

impl QuantumWorld {
    pub fn new() -> Self {
        Self::default()
    }

    /// Brings a fresh system into existence; returns its qubits in order.
    pub fn prepare(&mut self, state: StateVector) -> Vec<QubitId> {
        let qubits: Vec<QubitId> = (0..state.qubits())
            .map(|_| {
                let q = QubitId(self.next_qubit);
                self.next_qubit += 1;
                q
            })
            .collect();
        let sid = self.next_system;
        self.next_system += 1;
        for &q in &qubits {
            self.location.insert(q, sid);
        }
        self.systems.insert(sid, System { qubits: qubits.clone(), state });
        qubits
    }

    pub fn prepare_one(&mut self, state: StateVector) -> QubitId {
        debug_assert_eq!(state.qubits(), 1);
        self.prepare(state)[0]
    }

    pub fn contains(&self, q: QubitId) -> bool {
        self.location.contains_key(&q)
    }

    pub fn live_qubits(&self) -> usize {
        self.location.len()
    }

    /// Number of qubits sharing a joint state with `q`.
    pub fn system_size(&self, q: QubitId) -> Result<usize, WorldError> {
        let sid = self.sid(q)?;
        Ok(self.systems[&sid].qubits.len())
    }

    fn sid(&self, q: QubitId) -> Result<u32, WorldError> {
        self.location.get(&q).copied().ok_or(WorldError::UnknownQubit(q))
    }

    fn check_distinct(qs: &[QubitId]) -> Result<(), WorldError> {
        for (i, q) in qs.iter().enumerate() {
            if qs[..i].contains(q) {
                return Err(WorldError::DuplicateQubit(*q));
            }
        }
        Ok(())
    }

    /// Merges the systems holding `qs` into one; returns its id.
    fn merge(&mut self, qs: &[QubitId]) -> Result<u32, WorldError> {
        let mut sids: Vec<u32> = Vec::new();
        for &q in qs {
            let s = self.sid(q)?;
            if !sids.contains(&s) {
                sids.push(s);
            }
        }
        let target = sids[0];
        for &s in &sids[1..] {
            let other = self.systems.remove(&s).expect("system exists");
            for &q in &other.qubits {
                self.location.insert(q, target);
            }
            let sys = self.systems.get_mut(&target).expect("system exists");
            sys.state = sys.state.tensor(&other.state);
            sys.qubits.extend(other.qubits);
        }
        Ok(target)
    }

    fn positions(&self, sid: u32, qs: &[QubitId]) -> Vec<usize> {
        let sys = &self.systems[&sid];
        qs.iter().map(|q| sys.qubits.iter().position(|x| x == q).expect("qubit in system")).collect()
    }

    /// Applies `op` (dimension `2^qs.len()`) to `qs` in the listed order.
    pub fn apply(&mut self, op: &Matrix, qs: &[QubitId]) -> Result<(), WorldError> {
        Self::check_distinct(qs)?;
        let sid = self.merge(qs)?;
        let pos = self.positions(sid, qs);
        let sys = self.systems.get_mut(&sid).expect("system exists");
        sys.state = sys.state.evolve_on(op, &pos)?;
        Ok(())
    }

    /// Projective measurement of `qs`. When the realized projector has rank
    /// one the measured qubits are split off into their own system.
    pub fn measure<L: Clone>(
        &mut self,
        qs: &[QubitId],
        basis: &ProjectiveBasis<L>,
        rng: &mut RngStream,
    ) -> Result<L, WorldError> {
        Self::check_distinct(qs)?;
        let sid = self.merge(qs)?;
        let pos = self.positions(sid, qs);
        let (realized, post) = measure_on_indexed(&self.systems[&sid].state, basis, &pos, rng)?;
        self.systems.get_mut(&sid).expect("system exists").state = post;
        if let Some(factor) = rank_one_vector(basis.projector(realized)) {
            self.split(sid, qs, &pos, factor)?;
        }
        let label = basis.labels()[realized].clone();
        Ok(label)
    }

    fn split(&mut self, sid: u32, qs: &[QubitId], pos: &[usize], factor: StateVector) -> Result<(), WorldError> {
        let sys = self.systems.get(&sid).expect("system exists");
        if qs.len() == sys.qubits.len() {
            // Reorder so the system lists qubits as measured.
            let state = sys.state.permute(pos)?;
            let sys = self.systems.get_mut(&sid).expect("system exists");
            sys.state = state;
            sys.qubits = qs.to_vec();
            return Ok(());
        }
        let rest_state = sys.state.split_off(pos, &factor)?;
        let rest_qubits: Vec<QubitId> = sys.qubits.iter().filter(|q| !qs.contains(q)).copied().collect();
        let sys = self.systems.get_mut(&sid).expect("system exists");
        sys.qubits = rest_qubits;
        sys.state = rest_state;
        let new_sid = self.next_system;
        self.next_system += 1;
        for &q in qs {
            self.location.insert(q, new_sid);
        }
        self.systems.insert(new_sid, System { qubits: qs.to_vec(), state: factor });
        Ok(())
    }

    /// Destroys `q`, unravelling any entanglement it carries.
    pub fn discard(&mut self, q: QubitId, rng: &mut RngStream) -> Result<(), WorldError> {
        let sid = self.sid(q)?;
        if self.systems[&sid].qubits.len() > 1 {
            self.measure(&[q], &ProjectiveBasis::computational(), rng)?;
        }
        let sid = self.sid(q)?;
        self.systems.remove(&sid);
        self.location.remove(&q);
        Ok(())
    }

    /// Reduced density matrix of `qs`, qubits in the listed order.
    pub fn reduced(&self, qs: &[QubitId]) -> Result<DensityMatrix, WorldError> {
        Self::check_distinct(qs)?;
        if qs.is_empty() {
            return Err(WorldError::Linear(QError::InvalidSubset));
        }
        let mut groups: Vec<(u32, Vec<QubitId>)> = Vec::new();
        for &q in qs {
            let s = self.sid(q)?;
            match groups.iter_mut().find(|(g, _)| *g == s) {
                Some((_, v)) => v.push(q),
                None => groups.push((s, alloc::vec![q])),
            }
        }
        let mut concat: Vec<QubitId> = Vec::new();
        let mut rho: Option<DensityMatrix> = None;
        for (sid, members) in &groups {
            let sys = &self.systems[sid];
            let full = sys.state.to_density();
            // Kept qubits come out in ascending system position.
            let mut kept: Vec<(usize, QubitId)> =
                members.iter().map(|q| (self.positions(*sid, &[*q])[0], *q)).collect();
            kept.sort_unstable();
            let part = if members.len() == sys.qubits.len() {
                full
            } else {
                let pos: Vec<usize> = kept.iter().map(|(p, _)| *p).collect();
                full.partial_trace(&pos)?
            };
            concat.extend(kept.iter().map(|(_, q)| *q));
            rho = Some(match rho {
                None => part,
                Some(r) => r.tensor(&part),
            });
        }
        let rho = rho.expect("at least one group");
        let order: Vec<usize> = qs.iter().map(|q| concat.iter().position(|c| c == q).expect("present")).collect();
        Ok(rho.permute(&order)?)
    }

    /// The joint pure state of `qs` when they form exactly one system.
    pub fn pure_state(&self, qs: &[QubitId]) -> Option<StateVector> {
        let sid = self.sid(*qs.first()?).ok()?;
        let sys = &self.systems[&sid];
        if sys.qubits.len() != qs.len() || qs.iter().any(|q| self.location.get(q) != Some(&sid)) {
            return None;
        }
        let pos = self.positions(sid, qs);
        sys.state.permute(&pos).ok()
    }
}

/// The unit vector spanning a rank-one projector, or `None` for higher rank.
fn rank_one_vector(p: &Matrix) -> Option<StateVector> {
    let tr = p.trace().re;
    if (tr - 1.0).abs() > 1e-9 {
        return None;
    }
    let col = (0..p.cols()).max_by(|&a, &b| p[(a, a)].re.total_cmp(&p[(b, b)].re)).expect("non-empty");
    let v: Vec<_> = (0..p.rows()).map(|i| p[(i, col)]).collect();
    StateVector::normalized(v).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::{bell_basis, make_bell, BellKind};
    use crate::qcore::c;

    #[test]
    fn apply_merges_and_measure_splits() {
        let mut w = QuantumWorld::new();
        let a = w.prepare_one(StateVector::zero());
        let b = w.prepare_one(StateVector::zero());
        let h = Matrix::from_row_major(2, 2, alloc::vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
            .unwrap()
            .scale(c(core::f64::consts::FRAC_1_SQRT_2, 0.0));
        let mut cnot = Matrix::identity(4);
        cnot[(2, 2)] = c(0.0, 0.0);
        cnot[(3, 3)] = c(0.0, 0.0);
        cnot[(2, 3)] = c(1.0, 0.0);
        cnot[(3, 2)] = c(1.0, 0.0);
        w.apply(&h, &[a]).unwrap();
        w.apply(&cnot, &[a, b]).unwrap();
        assert_eq!(w.system_size(a).unwrap(), 2);
        assert!(w.pure_state(&[a, b]).unwrap().same_ray(&make_bell(BellKind::Plus), 1e-12));
        let mut rng = RngStream::new(0, 0);
        let out = w.measure(&[a, b], &bell_basis(), &mut rng).unwrap();
        assert_eq!(out, BellKind::Plus);
    }

    #[test]
    fn reduced_state_orders_and_products() {
        let mut w = QuantumWorld::new();
        let pair = w.prepare(StateVector::zero().tensor(&StateVector::plus_x()));
        let lone = w.prepare_one(StateVector::one());
        let r = w.reduced(&[lone, pair[1], pair[0]]).unwrap();
        let expect = StateVector::one().tensor(&StateVector::plus_x()).tensor(&StateVector::zero()).to_density();
        assert!(r.max_abs_diff(&expect) < 1e-15);
        let r1 = w.reduced(&[pair[1]]).unwrap();
        assert!(r1.max_abs_diff(&StateVector::plus_x().to_density()) < 1e-15);
    }

    #[test]
    fn reduced_subset_keeps_requested_order() {
        let mut w = QuantumWorld::new();
        let psi = StateVector::normalized((0..8).map(|i| c(1.0 + i as f64, 0.5 * i as f64)).collect()).unwrap();
        let qs = w.prepare(psi.clone());
        let got = w.reduced(&[qs[2], qs[0]]).unwrap();
        let expect = psi.to_density().partial_trace(&[0, 2]).unwrap().permute(&[1, 0]).unwrap();
        assert!(got.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn discard_keeps_partner_marginal() {
        let mut w = QuantumWorld::new();
        let qs = w.prepare(make_bell(BellKind::Plus));
        let mut rng = RngStream::new(1, 0);
        w.discard(qs[0], &mut rng).unwrap();
        assert!(!w.contains(qs[0]));
        assert_eq!(w.system_size(qs[1]).unwrap(), 1);
        assert!(w.discard(qs[0], &mut rng).is_err());
    }

    #[test]
    fn duplicate_targets_rejected() {
        let mut w = QuantumWorld::new();
        let q = w.prepare_one(StateVector::zero());
        assert_eq!(w.apply(&Matrix::identity(4), &[q, q]), Err(WorldError::DuplicateQubit(q)));
    }
}

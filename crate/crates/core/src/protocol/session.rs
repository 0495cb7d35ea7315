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

//! Session runner.
//!
//! One call runs one authentication attempt end to end. Prover-side steps
//! are delegated to a [`Prover`]; the verifier is played by the runner
//! itself. Every failure ends in a transcript, never in a panic or an error
//! escaping the runner.
//!
//! Basic steps: 3 encode, 4 send, 5 unlock, 6 verify, 7 lock, 8 discard,
//! 9 return. Extended steps: 3 unlock card, 4 pad lock, 5 encode, 6 decoys,
//! 7 send, 8 decoy check, 9 unlock, 10 verify, 11 lock, 12 discard,
//! 13 return, 14 restore lock.

use alloc::vec::Vec;

use rand::RngCore;

use super::channel::grants;
use super::transcript::LoggedMessage;
use super::{
    AbortReason, AccessSite, ClassicalMessage, ClassicalPassword, DecoyCheck, DecoySchedule, Eavesdropper, Mode,
    OneTimePad, ProtocolConfig, QuantumWorld, QubitId, SecurityPolicy, SessionTranscript, SmartCard, Transmission,
    Verdict, VerifierRecord, VerifierStore, WorldError,
};
use crate::primitives::{
    bell_basis, decoy_basis, decoy_encode, password_ket, rotation, rotation_inverse, BellKind, LockUnitary,
};
use crate::qcore::RngStream;

/// Read-only facts shared by both parties.
#[derive(Debug, Clone, Copy)]
pub struct SessionContext<'a> {
    pub config: &'a ProtocolConfig,
    pub unitary: &'a LockUnitary,
    pub round: u64,
    pub mode: Mode,
}

impl SessionContext<'_> {
    fn send_step(&self) -> u8 {
        match self.mode {
            Mode::Basic => 4,
            Mode::Extended => 7,
        }
    }

    /// Prover-side steps before sending.
    fn prover_steps(&self) -> &'static [u8] {
        match self.mode {
            Mode::Basic => &[3],
            Mode::Extended => &[3, 4, 5, 6],
        }
    }

    /// Step offset of B's unlock relative to the basic protocol.
    fn shift(&self) -> u8 {
        match self.mode {
            Mode::Basic => 0,
            Mode::Extended => 4,
        }
    }
}

fn label(mode: Mode, step: u8) -> &'static str {
    match (mode, step) {
        (Mode::Basic, 3) | (Mode::Extended, 5) => "encode-password",
        (Mode::Basic, 4) | (Mode::Extended, 7) => "send",
        (Mode::Basic, 5) | (Mode::Extended, 9) => "unlock",
        (Mode::Basic, 6) | (Mode::Extended, 10) => "bell-verify",
        (Mode::Basic, 7) | (Mode::Extended, 11) => "lock",
        (Mode::Basic, 8) | (Mode::Extended, 12) => "discard-password",
        (Mode::Basic, 9) | (Mode::Extended, 13) => "return-card",
        (Mode::Extended, 3) => "unlock-card",
        (Mode::Extended, 4) => "pad-lock",
        (Mode::Extended, 6) => "prepare-decoys",
        (Mode::Extended, 8) => "decoy-check",
        (Mode::Extended, 14) => "restore-lock",
        _ => "unknown",
    }
}

/// The party claiming to be A.
pub trait Prover {
    /// Qubits currently held as the card.
    fn card(&self) -> &[QubitId];

    /// A prover-side step before sending.
    fn prepare(
        &mut self,
        step: u8,
        world: &mut QuantumWorld,
        ctx: &SessionContext<'_>,
        rng: &mut RngStream,
    ) -> Result<(), AbortReason>;

    /// Hands qubits to the quantum channel.
    fn transmit(
        &mut self,
        world: &mut QuantumWorld,
        ctx: &SessionContext<'_>,
        rng: &mut RngStream,
    ) -> Result<Transmission, AbortReason>;

    /// The decoy announcement, made once B holds the qubits.
    fn disclose_decoys(&mut self) -> Option<DecoySchedule> {
        None
    }

    /// B hands the card back.
    fn receive_card(
        &mut self,
        world: &mut QuantumWorld,
        card: Vec<QubitId>,
        ctx: &SessionContext<'_>,
        rng: &mut RngStream,
    );

    /// Steps after the card is back.
    fn finish(&mut self, _world: &mut QuantumWorld, _ctx: &SessionContext<'_>, _rng: &mut RngStream) {}
}

/// What an observer sees at a phase boundary.
pub struct PhaseView<'a> {
    pub step: u8,
    pub world: &'a QuantumWorld,
    pub card: &'a [QubitId],
    pub store: &'a [QubitId],
}

/// Optional instrumentation for a session.
#[derive(Default)]
pub struct SessionHooks<'a> {
    pub eve: Option<&'a mut dyn Eavesdropper>,
    /// Called after each phase completes.
    pub observer: Option<&'a mut dyn FnMut(&PhaseView<'_>)>,
}

impl<'a> SessionHooks<'a> {
    pub fn with_eve(eve: &'a mut dyn Eavesdropper) -> Self {
        SessionHooks { eve: Some(eve), observer: None }
    }

    fn grants(&self, site: AccessSite) -> bool {
        self.eve.as_deref().is_some_and(|e| grants(e, site))
    }
}

/// A honest prover holding K and the card.
pub struct HonestProver<'a> {
    password: &'a ClassicalPassword,
    card: &'a mut SmartCard,
    last_pad_round: &'a mut Option<u64>,
    pad: Option<OneTimePad>,
    password_qubits: Vec<QubitId>,
    decoy_qubits: Vec<QubitId>,
    schedule: Option<DecoySchedule>,
}

impl<'a> HonestProver<'a> {
    pub fn new(password: &'a ClassicalPassword, card: &'a mut SmartCard, last_pad_round: &'a mut Option<u64>) -> Self {
        HonestProver {
            password,
            card,
            last_pad_round,
            pad: None,
            password_qubits: Vec::new(),
            decoy_qubits: Vec::new(),
            schedule: None,
        }
    }

    /// The pad drawn this session, if any.
    pub fn pad(&self) -> Option<&OneTimePad> {
        self.pad.as_ref()
    }

    /// Bits encoded into the transmitted password qubits.
    fn transfer_bits(&self) -> &[bool] {
        match &self.pad {
            Some(p) => p.bits(),
            None => self.password.bits(),
        }
    }

    fn rotate_where(
        world: &mut QuantumWorld,
        card: &[QubitId],
        bits: &[bool],
        op: &crate::qcore::Matrix,
    ) -> Result<(), WorldError> {
        for (q, _) in card.iter().zip(bits).filter(|(_, b)| **b) {
            world.apply(op, &[*q])?;
        }
        Ok(())
    }
}

impl Prover for HonestProver<'_> {
    fn card(&self) -> &[QubitId] {
        &self.card.qubits
    }

    fn prepare(
        &mut self,
        step: u8,
        world: &mut QuantumWorld,
        ctx: &SessionContext<'_>,
        rng: &mut RngStream,
    ) -> Result<(), AbortReason> {
        let p = ctx.config.params;
        let n = ctx.config.blocks;
        let internal = |_| AbortReason::Internal;
        match (ctx.mode, step) {
            (Mode::Basic, 3) | (Mode::Extended, 5) => {
                let bits = self.transfer_bits().to_vec();
                self.password_qubits = bits.iter().map(|&b| world.prepare_one(password_ket(b, &p))).collect();
            }
            (Mode::Extended, 3) => {
                Self::rotate_where(world, &self.card.qubits, self.password.bits(), &rotation_inverse(&p))
                    .map_err(internal)?;
                self.card.locked = false;
            }
            (Mode::Extended, 4) => {
                let pad =
                    OneTimePad::draw(n, ctx.round, *self.last_pad_round, rng).map_err(|_| AbortReason::PadReuse)?;
                Self::rotate_where(world, &self.card.qubits, pad.bits(), &rotation(&p)).map_err(internal)?;
                self.card.locked = true;
                *self.last_pad_round = Some(ctx.round);
                self.pad = Some(pad);
            }
            (Mode::Extended, 6) => {
                let schedule = DecoySchedule::draw(n, ctx.config.decoys, rng);
                self.decoy_qubits = schedule.symbols.iter().map(|&s| world.prepare_one(decoy_encode(s))).collect();
                self.schedule = Some(schedule);
            }
            _ => {}
        }
        Ok(())
    }

    fn transmit(
        &mut self,
        _world: &mut QuantumWorld,
        _ctx: &SessionContext<'_>,
        _rng: &mut RngStream,
    ) -> Result<Transmission, AbortReason> {
        let card = core::mem::take(&mut self.card.qubits);
        let passwords = core::mem::take(&mut self.password_qubits).into_iter();
        let stream = match &self.schedule {
            None => passwords.collect(),
            Some(s) => interleave(passwords, core::mem::take(&mut self.decoy_qubits), &s.positions),
        };
        Ok(Transmission { card, stream })
    }

    fn disclose_decoys(&mut self) -> Option<DecoySchedule> {
        self.schedule.clone()
    }

    fn receive_card(
        &mut self,
        _world: &mut QuantumWorld,
        card: Vec<QubitId>,
        _ctx: &SessionContext<'_>,
        _rng: &mut RngStream,
    ) {
        self.card.qubits = card;
    }

    fn finish(&mut self, world: &mut QuantumWorld, ctx: &SessionContext<'_>, _rng: &mut RngStream) {
        let Some(pad) = &self.pad else { return };
        if self.card.qubits.len() != ctx.config.blocks {
            return;
        }
        let p = ctx.config.params;
        // Undo the pad, then lock with K again.
        let ok = Self::rotate_where(world, &self.card.qubits, pad.bits(), &rotation_inverse(&p))
            .and_then(|_| Self::rotate_where(world, &self.card.qubits, self.password.bits(), &rotation(&p)));
        debug_assert!(ok.is_ok());
        self.card.locked = true;
    }
}

/// Places `decoys` at the sorted `positions` of the combined stream and
/// fills the remaining slots with `passwords` in order.
pub(crate) fn interleave(
    passwords: impl IntoIterator<Item = QubitId>,
    decoys: Vec<QubitId>,
    positions: &[usize],
) -> Vec<QubitId> {
    let mut passwords = passwords.into_iter();
    let mut decoys = decoys.into_iter();
    let mut out = Vec::new();
    let mut next = positions.iter().peekable();
    loop {
        let slot = out.len();
        let q = if next.peek() == Some(&&slot) {
            next.next();
            decoys.next()
        } else {
            passwords.next()
        };
        match q {
            Some(q) => out.push(q),
            None => break,
        }
    }
    out
}

struct Runner<'a, 'h> {
    ctx: SessionContext<'a>,
    hooks: SessionHooks<'h>,
    t: SessionTranscript,
}

enum Stop {
    Abort(AbortReason),
}

impl From<WorldError> for Stop {
    fn from(_: WorldError) -> Self {
        Stop::Abort(AbortReason::Internal)
    }
}

impl Runner<'_, '_> {
    fn enter(&mut self, step: u8, world: &QuantumWorld, card: &[QubitId], store: &[QubitId]) {
        self.t.enter(step, label(self.ctx.mode, step));
        if let Some(obs) = self.hooks.observer.as_mut() {
            obs(&PhaseView { step, world, card, store });
        }
    }

    fn broadcast(&mut self, step: u8, message: ClassicalMessage) {
        if self.hooks.grants(AccessSite::ClassicalChannel) {
            if let Some(e) = self.hooks.eve.as_deref_mut() {
                e.on_classical(step, &message);
            }
        }
        self.t.messages.push(LoggedMessage { step, message });
    }

    fn record(&mut self, r: VerifierRecord) {
        if self.hooks.grants(AccessSite::VerifierRecords) {
            if let Some(e) = self.hooks.eve.as_deref_mut() {
                e.on_verifier_record(&r);
            }
        }
    }
}

/// Runs one session between `prover` and the verifier holding `store`.
///
/// `rng` is advanced once; all randomness of the session descends from
/// that draw.
pub fn run_session(
    world: &mut QuantumWorld,
    store: &VerifierStore,
    prover: &mut dyn Prover,
    ctx: SessionContext<'_>,
    hooks: SessionHooks<'_>,
    rng: &mut RngStream,
) -> SessionTranscript {
    let tag = rng.next_u64();
    let session = rng.fork(tag);
    let mut rngs = [session.fork(1), session.fork(2), session.fork(3), session.fork(4)];
    let mut runner = Runner { ctx, hooks, t: SessionTranscript::new(ctx.round, ctx.mode) };
    let outcome = drive(&mut runner, world, store, prover, &mut rngs);
    let mut t = runner.t;
    match outcome {
        Ok(v) => t.verdict = v,
        Err(Stop::Abort(reason)) => {
            t.verdict = Verdict::Aborted;
            t.abort_reason = Some(reason);
        }
    }
    t
}

fn drive(
    r: &mut Runner<'_, '_>,
    world: &mut QuantumWorld,
    store: &VerifierStore,
    prover: &mut dyn Prover,
    rngs: &mut [RngStream; 4],
) -> Result<Verdict, Stop> {
    let [prng, vrng, erng, nrng] = rngs;
    let ctx = r.ctx;
    let n = ctx.config.blocks;
    let store_q = store.qubits();
    if let Some(e) = r.hooks.eve.as_deref() {
        SecurityPolicy::check(e.access()).map_err(|_| Stop::Abort(AbortReason::PolicyViolation))?;
    }
    let mode_ok = ctx.config.validate().is_ok() && (ctx.mode == Mode::Basic || ctx.config.decoys > 0);
    if !mode_ok || store_q.len() != n {
        return Err(Stop::Abort(AbortReason::ConfigMismatch));
    }

    r.broadcast(3, ClassicalMessage::Start { round: ctx.round, blocks: n });
    for &step in ctx.prover_steps() {
        prover.prepare(step, world, &ctx, prng).map_err(Stop::Abort)?;
        r.enter(step, world, prover.card(), store_q);
    }

    let send = ctx.send_step();
    let mut tx = prover.transmit(world, &ctx, prng).map_err(Stop::Abort)?;
    if r.hooks.grants(AccessSite::QuantumChannel) {
        if let Some(e) = r.hooks.eve.as_deref_mut() {
            e.on_quantum_transit(world, &mut tx, erng)?;
        }
    }
    r.enter(send, world, &tx.card, store_q);
    if tx.is_empty() {
        return Err(Stop::Abort(AbortReason::NothingReceived));
    }

    let result = verify(r, world, store_q, prover, &mut tx, vrng, nrng);
    let verdict = match result {
        Ok(v) => v,
        Err(stop) => {
            // B keeps nothing but its store, whatever went wrong.
            for q in tx.stream.drain(..) {
                if world.contains(q) {
                    world.discard(q, nrng)?;
                }
            }
            prover.receive_card(world, core::mem::take(&mut tx.card), &ctx, prng);
            return Err(stop);
        }
    };

    let ret = 9 + ctx.shift();
    prover.receive_card(world, core::mem::take(&mut tx.card), &ctx, prng);
    r.enter(ret, world, prover.card(), store_q);
    if ctx.mode == Mode::Extended {
        prover.finish(world, &ctx, prng);
        r.enter(14, world, prover.card(), store_q);
    }
    Ok(verdict)
}

/// B's side from reception to discarding the password qubits. On success
/// `tx.stream` is empty and `tx.card` holds the qubits to return.
fn verify(
    r: &mut Runner<'_, '_>,
    world: &mut QuantumWorld,
    store_q: &[QubitId],
    prover: &mut dyn Prover,
    tx: &mut Transmission,
    vrng: &mut RngStream,
    nrng: &mut RngStream,
) -> Result<Verdict, Stop> {
    let ctx = r.ctx;
    let n = ctx.config.blocks;
    let shift = ctx.shift();

    let mut passwords: Vec<QubitId> = tx.stream.clone();
    let mut decoy_failed = false;
    if ctx.mode == Mode::Extended {
        let Some(schedule) = prover.disclose_decoys() else {
            return Err(Stop::Abort(AbortReason::MalformedDisclosure));
        };
        r.broadcast(8, ClassicalMessage::DecoyDisclosure { schedule: schedule.clone() });
        if !schedule.is_well_formed(tx.stream.len()) {
            return Err(Stop::Abort(AbortReason::MalformedDisclosure));
        }
        if tx.card.len() != n || tx.stream.len() != n + schedule.len() {
            return Err(Stop::Abort(AbortReason::CountMismatch));
        }
        passwords.clear();
        let mut next = 0;
        for (slot, &q) in tx.stream.iter().enumerate() {
            if schedule.positions.get(next) == Some(&slot) {
                let symbol = schedule.symbols[next];
                let measured = world.measure(&[q], &decoy_basis(symbol.basis()), vrng)?;
                let consistent = measured == symbol.bit();
                r.t.decoy_results.push(DecoyCheck { position: slot, symbol, measured, consistent });
                r.record(VerifierRecord::DecoyResult { position: slot, consistent });
                world.discard(q, nrng)?;
                next += 1;
            } else {
                passwords.push(q);
            }
        }
        tx.stream.retain(|q| world.contains(*q));
        r.enter(8, world, &tx.card, store_q);
        decoy_failed = r.t.decoy_mismatches() > ctx.config.decoy_error_budget;
    } else if tx.card.len() != n || tx.stream.len() != n {
        return Err(Stop::Abort(AbortReason::CountMismatch));
    }

    let verdict = if decoy_failed {
        r.broadcast(8, ClassicalMessage::Verdict { accepted: false });
        Verdict::RejectedAtDecoy
    } else {
        let u = ctx.unitary;
        for i in 0..n {
            world.apply(u.matrix(), &[passwords[i], tx.card[i], store_q[i]])?;
        }
        r.enter(5 + shift, world, &tx.card, store_q);

        let basis = bell_basis();
        for (i, (&a, &b)) in tx.card.iter().zip(store_q).enumerate() {
            let outcome = world.measure(&[a, b], &basis, vrng)?;
            r.t.bell_outcomes.push(outcome);
            r.record(VerifierRecord::BellOutcome { block: i, outcome });
        }
        let accepted = r.t.bell_outcomes.iter().all(|o| *o == BellKind::Plus);
        r.broadcast(6 + shift, ClassicalMessage::Verdict { accepted });
        r.enter(6 + shift, world, &tx.card, store_q);

        if accepted {
            for i in 0..n {
                world.apply(u.inverse(), &[passwords[i], tx.card[i], store_q[i]])?;
            }
            r.enter(7 + shift, world, &tx.card, store_q);
            Verdict::Accepted
        } else {
            Verdict::RejectedAtBell
        }
    };

    for (i, &q) in passwords.iter().enumerate() {
        if r.hooks.grants(AccessSite::DiscardedPasswords) {
            if let Some(e) = r.hooks.eve.as_deref_mut() {
                e.on_discard(world, i, q, nrng)?;
            }
        }
        if world.contains(q) {
            world.discard(q, nrng)?;
        }
    }
    tx.stream.clear();
    if verdict != Verdict::RejectedAtDecoy {
        r.enter(8 + shift, world, &tx.card, store_q);
    }
    Ok(verdict)
}

/// Honest basic session on an enrollment.
pub fn run_basic_session(enrollment: &mut super::Enrollment, round: u64, rng: &mut RngStream) -> SessionTranscript {
    enrollment.run_session(Mode::Basic, round, SessionHooks::default(), rng)
}

/// Honest extended session on an enrollment.
pub fn run_extended_session(enrollment: &mut super::Enrollment, round: u64, rng: &mut RngStream) -> SessionTranscript {
    enrollment.run_session(Mode::Extended, round, SessionHooks::default(), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::ProtocolParams;
    use crate::protocol::enroll_with_password;
    use crate::qcore::DensityMatrix;

    fn enrolled(mode: Mode, k: &str) -> super::super::Enrollment {
        let p = ProtocolParams::typical();
        let k = ClassicalPassword::parse(k).unwrap();
        let cfg = match mode {
            Mode::Basic => ProtocolConfig::basic(k.len(), p, 1),
            Mode::Extended => ProtocolConfig::extended(k.len(), 6, p, 1),
        };
        enroll_with_password(&cfg, k).unwrap()
    }

    #[test]
    fn worked_example_accepts() {
        let mut e = enrolled(Mode::Basic, "0101");
        let mut rng = RngStream::new(3, 0);
        let t = run_basic_session(&mut e, 1, &mut rng);
        assert_eq!(t.verdict, Verdict::Accepted);
        assert_eq!(t.bell_outcomes, alloc::vec![BellKind::Plus; 4]);
        assert!(t.is_consistent());
        assert!(e.restoration_error() < 1e-12);
        let steps: Vec<u8> = t.phases.iter().map(|p| p.step).collect();
        assert_eq!(steps, alloc::vec![3, 4, 5, 6, 7, 8, 9]);
        // Only the card and store survive.
        assert_eq!(e.live_qubits(), 8);
    }

    #[test]
    fn extended_restores_and_checks_decoys() {
        let mut e = enrolled(Mode::Extended, "110100");
        let mut rng = RngStream::new(5, 0);
        for round in 1..=5 {
            let t = run_extended_session(&mut e, round, &mut rng);
            assert_eq!(t.verdict, Verdict::Accepted, "round {round}");
            assert_eq!(t.decoy_results.len(), 6);
            assert!(t.decoy_results.iter().all(|d| d.consistent));
            assert!(e.restoration_error() < 1e-12);
            assert_eq!(t.phases.len(), 12);
            assert_eq!(e.live_qubits(), 12);
        }
    }

    #[test]
    fn reused_pad_round_aborts() {
        let mut e = enrolled(Mode::Extended, "10");
        let mut rng = RngStream::new(0, 0);
        assert!(run_extended_session(&mut e, 4, &mut rng).accepted());
        let t = run_extended_session(&mut e, 4, &mut rng);
        assert_eq!(t.verdict, Verdict::Aborted);
        assert_eq!(t.abort_reason, Some(AbortReason::PadReuse));
    }

    struct Snoop(Vec<AccessSite>);
    impl Eavesdropper for Snoop {
        fn access(&self) -> &[AccessSite] {
            &self.0
        }
    }

    #[test]
    fn forbidden_access_aborts() {
        let mut e = enrolled(Mode::Basic, "01");
        let mut rng = RngStream::new(0, 0);
        let mut eve = Snoop(alloc::vec![AccessSite::VerifierQuantumStorage]);
        let t = e.run_session(Mode::Basic, 1, SessionHooks::with_eve(&mut eve), &mut rng);
        assert_eq!(t.abort_reason, Some(AbortReason::PolicyViolation));
    }

    struct Blackhole;
    impl Eavesdropper for Blackhole {
        fn access(&self) -> &[AccessSite] {
            &[AccessSite::QuantumChannel]
        }
        fn on_quantum_transit(
            &mut self,
            _w: &mut QuantumWorld,
            tx: &mut Transmission,
            _r: &mut RngStream,
        ) -> Result<(), WorldError> {
            tx.card.clear();
            tx.stream.clear();
            Ok(())
        }
    }

    #[test]
    fn absorbed_transmission_aborts() {
        let mut e = enrolled(Mode::Basic, "011");
        let mut rng = RngStream::new(0, 0);
        let t = e.run_session(Mode::Basic, 1, SessionHooks::with_eve(&mut Blackhole), &mut rng);
        assert_eq!(t.verdict, Verdict::Aborted);
        assert_eq!(t.abort_reason, Some(AbortReason::NothingReceived));
    }

    struct ZReader(usize);
    impl Eavesdropper for ZReader {
        fn access(&self) -> &[AccessSite] {
            &[AccessSite::QuantumChannel]
        }
        fn on_quantum_transit(
            &mut self,
            w: &mut QuantumWorld,
            tx: &mut Transmission,
            r: &mut RngStream,
        ) -> Result<(), WorldError> {
            let x = crate::primitives::decoy_basis(crate::primitives::DecoyBasis::X);
            for &q in &tx.stream {
                w.measure(&[q], &x, r)?;
                self.0 += 1;
            }
            Ok(())
        }
    }

    #[test]
    fn tapped_stream_trips_decoys() {
        let mut e = enrolled(Mode::Extended, "0110");
        let mut rng = RngStream::new(9, 0);
        let mut flagged = 0;
        for round in 1..=20 {
            let mut eve = ZReader(0);
            let t = e.run_session(Mode::Extended, round, SessionHooks::with_eve(&mut eve), &mut rng);
            assert_eq!(eve.0, 10);
            assert!(t.is_consistent());
            if t.verdict == Verdict::RejectedAtDecoy {
                flagged += 1;
            }
            e = enrolled(Mode::Extended, "0110");
        }
        assert!(flagged > 5);
    }

    #[test]
    fn observer_sees_maximal_entropy() {
        let mut e = enrolled(Mode::Extended, "1011");
        let mut rng = RngStream::new(2, 0);
        let half = DensityMatrix::maximally_mixed(1);
        let mut worst: f64 = 0.0;
        let mut seen = 0;
        let mut obs = |v: &PhaseView<'_>| {
            for &q in v.card.iter().chain(v.store) {
                worst = worst.max(v.world.reduced(&[q]).unwrap().max_abs_diff(&half));
            }
            seen += 1;
        };
        let hooks = SessionHooks { eve: None, observer: Some(&mut obs) };
        assert!(e.run_session(Mode::Extended, 1, hooks, &mut rng).accepted());
        assert_eq!(seen, 12);
        assert!(worst < 1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let run = || {
            let mut e = enrolled(Mode::Extended, "0101");
            let mut rng = RngStream::new(7, 0);
            run_extended_session(&mut e, 1, &mut rng)
        };
        assert_eq!(run(), run());
    }
}

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

//! Property tests over random parameters, states and passwords.

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use qpass_core::adversary::{CardStealPassword, ForgedInput};
use qpass_core::analysis::{delta_e_closed_form, delta_e_direct, ps_closed_form, ps_direct, total_detection};
use qpass_core::primitives::{
    alpha_ket, apply_lock, apply_unlock, build_lock_unitary, c_ket, make_bell, xi_ket, BellKind, ProtocolParams,
};
use qpass_core::protocol::{enroll_with_password, ClassicalPassword, Mode, ProtocolConfig, Verdict};
use qpass_core::qcore::{DensityMatrix, RngStream, StateVector};
use qpass_core::C64;

fn params() -> impl Strategy<Value = ProtocolParams> {
    (0.01f64..0.99, 0.01f64..0.99).prop_map(|(a, x)| ProtocolParams::from_alpha_xi(a, x).unwrap())
}

fn amps(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn password(max: usize) -> impl Strategy<Value = ClassicalPassword> {
    prop::collection::vec(any::<bool>(), 1..=max).prop_map(ClassicalPassword::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lock_is_unitary_and_maps_honest_blocks(p in params()) {
        let u = build_lock_unitary(&p);
        prop_assert!(u.matrix().is_unitary(1e-12));
        let one = alpha_ket(&p).tensor(&xi_ket(&p));
        let out = one.evolve(u.matrix()).unwrap();
        let want = c_ket(&p).tensor(&make_bell(BellKind::Plus));
        prop_assert!(out.max_abs_diff(&want) < 1e-12);
        prop_assert!(u.check().max_residual() < 1e-12);
    }

    #[test]
    fn lock_undoes_unlock(p in params(), v in amps(8)) {
        let u = build_lock_unitary(&p);
        let psi = StateVector::normalized(v).unwrap();
        let back = apply_lock(&u, &apply_unlock(&u, &psi).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&psi) < 1e-12);
    }

    #[test]
    fn ps_routes_agree(p in params(), v in amps(4)) {
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let f = ForgedInput::normalized([v[0] / n, v[1] / n, v[2] / n, v[3] / n]);
        let closed = ps_closed_form(&f, &p);
        prop_assert!((ps_direct(&f, &p) - closed).abs() < 1e-10);
        prop_assert!(closed <= 0.5 + 1e-12);
    }

    #[test]
    fn delta_e_routes_agree(p in params(), t in 0.0f64..std::f64::consts::PI, ph in -3.2f64..3.2) {
        let pw = CardStealPassword::from_bloch(t, ph);
        prop_assert!((delta_e_direct(&pw, &p) - delta_e_closed_form(&pw, &p)).abs() < 1e-10);
    }

    #[test]
    fn total_detection_increases(p in 0.01f64..0.99, n in 1u32..200) {
        // Beyond this the result rounds to 1.0 in f64.
        prop_assume!((1.0 - p - 0.005).powi(n as i32 + 1) > 1e-12);
        let a = total_detection(p, n).unwrap();
        prop_assert!(total_detection(p, n + 1).unwrap() > a);
        prop_assert!(total_detection((p + 0.005).min(1.0), n).unwrap() > a);
    }

    #[test]
    fn card_and_store_carry_no_password(k in password(10)) {
        let cfg = ProtocolConfig::basic(k.len(), ProtocolParams::typical(), 0);
        let e = enroll_with_password(&cfg, k).unwrap();
        let half = DensityMatrix::maximally_mixed(1);
        for &q in e.card_qubits().iter().chain(e.store_qubits()) {
            prop_assert!(e.world().reduced(&[q]).unwrap().max_abs_diff(&half) < 1e-12);
        }
    }

    #[test]
    fn honest_sessions_accept_and_restore(k in password(6), seed in any::<u64>(), extended in any::<bool>()) {
        let p = ProtocolParams::typical();
        let cfg = if extended {
            ProtocolConfig::extended(k.len(), 5, p, seed)
        } else {
            ProtocolConfig::basic(k.len(), p, seed)
        };
        let mut e = enroll_with_password(&cfg, k).unwrap();
        let mut rng = RngStream::new(seed, 1);
        for round in 1..=3 {
            let mode = if extended { Mode::Extended } else { Mode::Basic };
            let t = e.run_session(mode, round, Default::default(), &mut rng);
            prop_assert_eq!(t.verdict, Verdict::Accepted);
            prop_assert!(t.is_consistent());
            prop_assert!(e.restoration_error() < 1e-12);
            // B keeps only its store, A only its card.
            prop_assert_eq!(e.live_qubits(), 2 * e.config().blocks);
        }
    }
}

#[test]
fn key_states_are_maximally_mixed_halves() {
    let p = ProtocolParams::typical();
    let half = DensityMatrix::maximally_mixed(1);
    for s in [make_bell(BellKind::Plus), xi_ket(&p)] {
        let rho = s.to_density();
        assert!(rho.partial_trace(&[0]).unwrap().max_abs_diff(&half) < 1e-12);
        assert!(rho.partial_trace(&[1]).unwrap().max_abs_diff(&half) < 1e-12);
    }
    assert_abs_diff_eq!(make_bell(BellKind::Plus).overlap(&xi_ket(&p)), p.xi(), epsilon = 1e-12);
}

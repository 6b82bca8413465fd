use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tripod_core::medium::{AtomicParams, RabiTriple};
use tripod_core::steadystate::master::{probe_response, relax_to_steady_state, ProbeField};
use tripod_core::steadystate::steady_state;
use tripod_core::Component;

fn random_rabi(rng: &mut ChaCha8Rng) -> RabiTriple {
    let mut g = || Complex64::from_polar(rng.random_range(0.1..5.0), rng.random_range(-3.1..3.1));
    RabiTriple { g0: g(), g1: g(), g2: g() }
}

fn random_params(rng: &mut ChaCha8Rng) -> AtomicParams {
    let d = rng.random_range(-2.0..2.0);
    AtomicParams { delta_control: d, delta_probe: d, delta_zeeman: rng.random_range(-2.0..2.0), ..Default::default() }
}

#[test]
fn zeroth_order_matches_time_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let r = random_rabi(&mut rng);
        let sol = steady_state(&p, &r).unwrap();
        sol.check_invariants(1e-10).unwrap();
        let rho = relax_to_steady_state(&p, &r, &ProbeField::default(), 1e-12, 1e7).unwrap();
        let err = (sol.x0 - rho.to_vector()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{p:?} {r:?}: {err:e}");
    }
}

#[test]
fn equal_rabi_configuration_matches_oracle() {
    let p = AtomicParams { delta_zeeman: 0.0, gamma_coll: 1e-4, ..Default::default() };
    let one = Complex64::new(1.0, 0.0);
    let r = RabiTriple { g0: one, g1: one, g2: one };
    let sol = steady_state(&p, &r).unwrap();
    let rho = relax_to_steady_state(&p, &r, &ProbeField::default(), 1e-12, 1e8).unwrap();
    let err = (sol.x0 - rho.to_vector()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err:e}");
}

#[test]
fn first_order_matches_probe_on_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        let r = random_rabi(&mut rng);
        let sol = steady_state(&p, &r).unwrap();
        for c in Component::BOTH {
            let oracle = probe_response(&p, &r, c, 1e-4, 1e-12, 1e7).unwrap();
            let ours = sol.coherence(c);
            let rel = (ours - oracle).norm() / ours.norm().max(1e-12);
            assert!(rel < 1e-3, "{c:?}: {ours} vs {oracle} ({rel:e})");
        }
    }
}

#[test]
fn response_converges_linearly_in_probe_amplitude() {
    let p = AtomicParams { delta_zeeman: 0.3, ..Default::default() };
    let g = Complex64::new(0.8, 0.0);
    let r = RabiTriple { g0: g, g1: g, g2: g };
    let exact = steady_state(&p, &r).unwrap().coherence_plus();
    let err = |eps: f64| (probe_response(&p, &r, Component::Plus, eps, 1e-12, 1e7).unwrap() - exact).norm();
    let (e1, e2) = (err(4e-2), err(2e-2));
    assert!(e1 > 0.0 && e2 < e1, "{e1:e} {e2:e}");
    assert!(e2 < 1e-3 * exact.norm());
}

#[test]
fn probe_gain_is_reproduced_by_time_evolution() {
    let p = AtomicParams::default();
    let r = tripod_core::medium::rabi_from_envelope(Complex64::new(0.1, 0.0), std::f64::consts::PI / 10.0, &p);
    let sol = steady_state(&p, &r).unwrap();
    for c in Component::BOTH {
        let ours = sol.coherence(c);
        assert!(ours.im < 0.0, "{c:?}: {ours}");
        let oracle = probe_response(&p, &r, c, 1e-4, 1e-12, 1e9).unwrap();
        assert!((ours - oracle).norm() < 1e-3 * ours.norm(), "{ours} vs {oracle}");
    }
}

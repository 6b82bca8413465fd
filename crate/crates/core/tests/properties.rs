use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use tripod_core::beams::{envelope, BeamSpec};
use tripod_core::medium::{rabi_from_envelope, zeeman_splitting, AtomicParams, RabiTriple};
use tripod_core::response::susceptibility_at;
use tripod_core::steadystate::steady_state;

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn rabi() -> impl Strategy<Value = RabiTriple> {
    (0.1..5.0f64, -PI..PI, 0.1..5.0f64, -PI..PI, 0.1..5.0f64, -PI..PI).prop_map(|(a, pa, b, pb, c, pc)| RabiTriple {
        g0: Complex64::from_polar(a, pa),
        g1: Complex64::from_polar(b, pb),
        g2: Complex64::from_polar(c, pc),
    })
}

fn params() -> impl Strategy<Value = AtomicParams> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, 0.0..0.2f64).prop_map(|(dp, dc, dz, gc)| AtomicParams {
        delta_probe: dp,
        delta_control: dc,
        delta_zeeman: dz,
        gamma_coll: gc,
        ..Default::default()
    })
}

proptest! {
    #[test]
    fn rabi_projection_is_homogeneous(e in complex(), k in complex(), theta in 0.0..FRAC_PI_2) {
        let p = AtomicParams::default();
        let a = rabi_from_envelope(e * k, theta, &p);
        let b = rabi_from_envelope(e, theta, &p);
        prop_assert!((a.g0 - b.g0 * k).norm() < 1e-12);
        prop_assert!((a.g1 - b.g1 * k).norm() < 1e-12);
        prop_assert_eq!(a.g1, a.g2);
    }

    #[test]
    fn rabi_projection_splits_intensity(e in complex(), theta in 0.0..FRAC_PI_2, peak in 0.1..5.0f64) {
        let p = AtomicParams { rabi_peak: peak, ..Default::default() };
        let r = rabi_from_envelope(e, theta, &p);
        let lhs = 2.0 * r.g1.norm_sqr() + r.g0.norm_sqr();
        let rhs = peak * peak * e.norm_sqr();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn zeeman_is_linear(b in -10.0..10.0f64, g in -2.0..2.0f64, m in -3i32..=3) {
        let base = zeeman_splitting(b, g, m);
        prop_assert!((zeeman_splitting(2.0 * b, g, m) - 2.0 * base).abs() <= 1e-9 * base.abs().max(1.0));
        prop_assert_eq!(zeeman_splitting(b, g, -m), -base);
    }

    #[test]
    fn envelope_magnitude_is_even_in_y(x in -0.05..0.05f64, y in 0.0..0.05f64, z in 0.0..2.0f64, theta in 0.0..1.5f64) {
        for beam in [BeamSpec::gaussian(0.02, theta), BeamSpec::laguerre_gauss(3, 0.012, theta)] {
            let a = envelope(x, y, z, &beam).norm();
            let b = envelope(x, -y, z, &beam).norm();
            prop_assert!((a - b).abs() <= 1e-14 * a.max(1e-300));
        }
    }

    #[test]
    fn lg_magnitude_decays_away_from_waist_near_axis(frac in 0.0..1.0f64, z1 in 0.0..10.0f64, dz in 0.0..10.0f64) {
        let m = 3;
        let beam = BeamSpec::laguerre_gauss(m, 0.012, 0.0);
        let r = frac * 0.012 * ((m as f64 + 1.0) / 2.0).sqrt();
        let a = envelope(r, 0.0, z1, &beam).norm();
        let b = envelope(r, 0.0, z1 + dz, &beam).norm();
        prop_assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn steady_states_are_hermitian(p in params(), r in rabi()) {
        let sol = steady_state(&p, &r).unwrap();
        prop_assert!(sol.check_invariants(1e-10).is_ok(), "{:?}", sol.check_invariants(1e-10));
    }

    #[test]
    fn zeeman_reversal_swaps_components(p in params(), g0 in complex(), g in complex()) {
        prop_assume!(g0.norm() > 0.1 && g.norm() > 0.1);
        let r = RabiTriple { g0, g1: g, g2: g };
        let q = AtomicParams { delta_zeeman: -p.delta_zeeman, ..p.clone() };
        let a = steady_state(&p, &r).unwrap();
        let b = steady_state(&q, &r).unwrap();
        prop_assert!((a.coherence_plus() - b.coherence_minus()).norm() < 1e-10);
    }

    #[test]
    fn susceptibility_is_continuous_in_x(x in -0.2..0.2f64, z in 0.0..1.5f64) {
        let p = AtomicParams::default();
        let beam = BeamSpec::gaussian(0.1414, PI / 6.0);
        let c0 = susceptibility_at(x, 0.0, z, &beam, &p).unwrap();
        let d1 = (susceptibility_at(x + 1e-4, 0.0, z, &beam, &p).unwrap().chi_plus - c0.chi_plus).norm();
        let d2 = (susceptibility_at(x + 1e-6, 0.0, z, &beam, &p).unwrap().chi_plus - c0.chi_plus).norm();
        prop_assert!(d2 <= d1 * 0.05 + 1e-13);
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-13 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

#[test]
fn lg3_ring_radius() {
    let beam = BeamSpec::laguerre_gauss(3, 0.012, 0.0);
    for z in [0.0, 2.0, 7.5] {
        let wz = 0.012 * (1.0 + (z / beam.rayleigh_length()).powi(2)).sqrt();
        let r = golden_max(|x| envelope(x, 0.0, z, &beam).norm(), 0.0, 4.0 * wz);
        let expected = wz * 1.5f64.sqrt();
        assert!((r - expected).abs() / expected < 1e-6, "z={z}: {r} vs {expected}");
    }
}

#[test]
fn vortex_phase_winds_m_times() {
    let beam = BeamSpec::laguerre_gauss(3, 0.012, 0.0);
    let r = 0.01;
    let n = 720;
    let mut winding = 0.0;
    let mut prev = envelope(r, 0.0, 0.0, &beam).arg();
    for k in 1..=n {
        let a = 2.0 * PI * k as f64 / n as f64;
        let cur = envelope(r * a.cos(), r * a.sin(), 0.0, &beam).arg();
        let mut d = cur - prev;
        if d > PI {
            d -= 2.0 * PI;
        } else if d < -PI {
            d += 2.0 * PI;
        }
        winding += d;
        prev = cur;
    }
    assert!((winding / (2.0 * PI) - 3.0).abs() < 1e-9);
}

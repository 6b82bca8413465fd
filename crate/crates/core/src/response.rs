//! Probe susceptibilities and refractive indices.

use std::f64::consts::{PI, SQRT_2};

use dashmap::DashMap;
use num_complex::Complex64;

use crate::beams::{envelope, BeamSpec};
use crate::error::{Error, Result};
use crate::medium::{rabi_from_envelope, AtomicParams, RabiTriple};
use crate::propagation::IndexField;
use crate::steadystate::{steady_state, SteadyStateSolution};
use crate::Component;

/// Below this Rabi magnitude the control is treated as absent.
pub const VANISHING_FIELD: f64 = 1e-8;

/// Fields weaker than this that still produce a singular system also fall back
/// to the bare response.
pub const WEAK_FIELD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilitySample {
    pub chi_plus: Complex64,
    pub chi_minus: Complex64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
}

impl SusceptibilitySample {
    pub fn from_chi(chi_plus: Complex64, chi_minus: Complex64) -> Self {
        Self {
            chi_plus,
            chi_minus,
            n_plus: 1.0 + 2.0 * PI * chi_plus.re,
            n_minus: 1.0 + 2.0 * PI * chi_minus.re,
            kappa_plus: chi_plus.im,
            kappa_minus: chi_minus.im,
        }
    }

    pub fn chi(&self, c: Component) -> Complex64 {
        match c {
            Component::Plus => self.chi_plus,
            Component::Minus => self.chi_minus,
        }
    }

    pub fn n(&self, c: Component) -> f64 {
        match c {
            Component::Plus => self.n_plus,
            Component::Minus => self.n_minus,
        }
    }

    pub fn kappa(&self, c: Component) -> f64 {
        match c {
            Component::Plus => self.kappa_plus,
            Component::Minus => self.kappa_minus,
        }
    }
}

/// 3Nc³γ/(2ω_p³) with ρ′ measured in units of 1/γ, i.e. (3/2)·N·(λ/2π)³.
pub fn chi_prefactor(params: &AtomicParams) -> f64 {
    params.chi_prefactor.unwrap_or_else(|| {
        let r = params.wavelength / (2.0 * PI);
        1.5 * params.number_density * r * r * r
    })
}

pub fn susceptibility(solution: &SteadyStateSolution, params: &AtomicParams) -> SusceptibilitySample {
    let pref = chi_prefactor(params);
    SusceptibilitySample::from_chi(solution.coherence_plus() * pref, solution.coherence_minus() * pref)
}

/// Undriven vapor with 1/3 of the atoms in each ground state: one Lorentzian
/// per probe transition.
pub fn bare_vapor_susceptibility(params: &AtomicParams) -> SusceptibilitySample {
    let pref = chi_prefactor(params);
    let g = params.optical_dephasing();
    let w = Complex64::new(0.0, 1.0 / (3.0 * SQRT_2));
    let dp = params.delta_probe;
    let dz = params.delta_zeeman;
    let plus = w / Complex64::new(g, -(dp + dz));
    let minus = w / Complex64::new(g, -(dp - dz));
    SusceptibilitySample::from_chi(plus * pref, minus * pref)
}

/// Susceptibility for a given Rabi triple, with the bare-vapor response where
/// the control vanishes.
pub fn susceptibility_for_rabi(rabi: &RabiTriple, params: &AtomicParams) -> Result<SusceptibilitySample> {
    solve_or_fallback(rabi, params, None)
}

fn solve_or_fallback(rabi: &RabiTriple, params: &AtomicParams, verify: Option<f64>) -> Result<SusceptibilitySample> {
    let g = rabi.max_abs();
    if g < VANISHING_FIELD {
        return Ok(bare_vapor_susceptibility(params));
    }
    match steady_state(params, rabi) {
        Ok(sol) => {
            if let Some(tol) = verify {
                sol.check_invariants(tol)?;
            }
            Ok(susceptibility(&sol, params))
        }
        Err(Error::SingularSystem { .. }) if g < WEAK_FIELD => Ok(bare_vapor_susceptibility(params)),
        Err(e) => Err(e),
    }
}

/// Envelope → Rabi triple → steady state → χ± at a lab-frame point.
pub fn susceptibility_at(
    x: f64,
    y: f64,
    z: f64,
    beam: &BeamSpec,
    params: &AtomicParams,
) -> Result<SusceptibilitySample> {
    let rabi = rabi_from_envelope(envelope(x, y, z, beam), beam.theta_c, params);
    susceptibility_for_rabi(&rabi, params)
}

/// The vapor cell as a spatial index field for the ray tracer.
pub struct VaporCell {
    beam: BeamSpec,
    params: AtomicParams,
    cache: Option<DashMap<[u64; 6], SusceptibilitySample>>,
    verify: Option<f64>,
}

impl VaporCell {
    pub fn new(beam: BeamSpec, params: AtomicParams) -> Self {
        Self { beam, params, cache: None, verify: None }
    }

    /// Memoizes solves by exact Rabi triple.
    pub fn with_cache(mut self) -> Self {
        self.cache = Some(DashMap::new());
        self
    }

    /// Checks steady-state invariants to `tol` on every solve.
    pub fn with_invariant_checks(mut self, tol: f64) -> Self {
        self.verify = Some(tol);
        self
    }

    pub fn beam(&self) -> &BeamSpec {
        &self.beam
    }

    pub fn params(&self) -> &AtomicParams {
        &self.params
    }

    pub fn rabi_at(&self, x: f64, y: f64, z: f64) -> RabiTriple {
        rabi_from_envelope(envelope(x, y, z, &self.beam), self.beam.theta_c, &self.params)
    }

    pub fn cached_solves(&self) -> usize {
        self.cache.as_ref().map_or(0, DashMap::len)
    }
}

fn key(r: &RabiTriple) -> [u64; 6] {
    [r.g0.re.to_bits(), r.g0.im.to_bits(), r.g1.re.to_bits(), r.g1.im.to_bits(), r.g2.re.to_bits(), r.g2.im.to_bits()]
}

impl IndexField for VaporCell {
    fn sample(&self, x: f64, y: f64, z: f64) -> Result<SusceptibilitySample> {
        let rabi = self.rabi_at(x, y, z);
        let Some(cache) = &self.cache else {
            return solve_or_fallback(&rabi, &self.params, self.verify);
        };
        let k = key(&rabi);
        if let Some(s) = cache.get(&k) {
            return Ok(*s);
        }
        let s = solve_or_fallback(&rabi, &self.params, self.verify)?;
        cache.insert(k, s);
        Ok(s)
    }

    fn probe_wavenumber(&self) -> f64 {
        2.0 * PI / self.params.wavelength
    }
}

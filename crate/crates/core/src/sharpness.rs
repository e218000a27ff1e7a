//! Auxiliary functions of the extremal arguments and the witness search
//! just above each sharp radius.
//!
//! Throughout, `s = r^{m0}` and `ρ = rᵏ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functionals::{evaluate, FunctionalKind, FunctionalValue, MapPair, Mode};
use crate::radii::{solve_radius, RadiusProblem, DEFAULT_TOLERANCE};
use crate::schwarz::{negated_monomial, SchwarzMap};
use crate::series::BoundedFunction;

/// Truncation order used for witness evaluations.
pub const WITNESS_TRUNCATION: usize = 256;
pub const DEFAULT_PROBE_OFFSET: f64 = 0.01;
pub const DEFAULT_A_STEP: f64 = 1e-4;

/// `M(a, r) = −(1 − arᵏ) + (1 + a)rᵏ`.
pub fn aux_m(a: f64, r: f64, k: u32) -> f64 {
    let rho = r.powi(k as i32);
    -(1.0 - a * rho) + (1.0 + a) * rho
}

fn envelope(a: f64, s: f64) -> f64 {
    (s + a) / (1.0 + a * s)
}

/// `Φ(a) = 1 − ((s + a)/(1 + as))ᵖ − (1 − a²) r^{kN}/(1 − rᵏ)`.
pub fn aux_phi(p: f64, m0: u32, k: u32, n: u32, a: f64, r: f64) -> f64 {
    let rho = r.powi(k as i32);
    let s = r.powi(m0 as i32);
    1.0 - envelope(a, s).powf(p) - (1.0 - a * a) * rho.powi(n as i32) / (1.0 - rho)
}

/// `dΦ/da`.
pub fn aux_phi_prime(p: f64, m0: u32, k: u32, n: u32, a: f64, r: f64) -> f64 {
    let rho = r.powi(k as i32);
    let s = r.powi(m0 as i32);
    2.0 * a * rho.powi(n as i32) / (1.0 - rho) - p * (1.0 - s * s) * (s + a).powf(p - 1.0) / (1.0 + a * s).powf(p + 1.0)
}

/// `Ψ(r) = (1 + s)² (s + a)^{p−1} / (1 + as)^{p+1}`.
pub fn aux_psi(p: f64, m0: u32, a: f64, r: f64) -> f64 {
    let s = r.powi(m0 as i32);
    (1.0 + s).powi(2) * (s + a).powf(p - 1.0) / (1.0 + a * s).powf(p + 1.0)
}

/// `H(r) = (1 − a)(s(1 − a + p(1 + a)) + a(p + 1) + p − 1)`.
pub fn aux_h(p: f64, m0: u32, a: f64, r: f64) -> f64 {
    let s = r.powi(m0 as i32);
    (1.0 - a) * (s * (1.0 - a + p * (1.0 + a)) + a * (p + 1.0) + p - 1.0)
}

/// `dΨ/dr = m0 r^{m0−1} (1 + s)(s + a)^{p−2}/(1 + as)^{p+2} · H(r)`.
pub fn aux_psi_prime(p: f64, m0: u32, a: f64, r: f64) -> f64 {
    let s = r.powi(m0 as i32);
    let chain = m0 as f64 * r.powi(m0 as i32 - 1);
    chain * (1.0 + s) * (s + a).powf(p - 2.0) / (1.0 + a * s).powf(p + 2.0) * aux_h(p, m0, a, r)
}

/// `Q(a, r) = (1 − aρ)(1 + as)ᵖ [(1 + a)/(1 − aρ) a^{N−1} ρᴺ − (1 − uᵖ)/(1 − a)]`
/// with `u = (s + a)/(1 + as)`; at `a = 1` the limit is returned.
pub fn aux_q(p: f64, m0: u32, k: u32, n: u32, a: f64, r: f64) -> f64 {
    if a >= 1.0 {
        return aux_q_limit(p, m0, k, n, r);
    }
    let rho = r.powi(k as i32);
    let s = r.powi(m0 as i32);
    let scale = (1.0 - a * rho) * (1.0 + a * s).powf(p);
    let linear = (1.0 + a) / (1.0 - a * rho) * a.powi(n as i32 - 1) * rho.powi(n as i32);
    scale * (linear - (1.0 - envelope(a, s).powf(p)) / (1.0 - a))
}

/// `lim_{a→1⁻} Q = (1 + s)^{p−1} (2ρᴺ(1 + s) − p(1 − s)(1 − ρ))`.
pub fn aux_q_limit(p: f64, m0: u32, k: u32, n: u32, r: f64) -> f64 {
    let rho = r.powi(k as i32);
    let s = r.powi(m0 as i32);
    (1.0 + s).powf(p - 1.0) * (2.0 * rho.powi(n as i32) * (1.0 + s) - p * (1.0 - s) * (1.0 - rho))
}

/// `G = Q + (1 − aρ)(1 + as)ᵖ ((1 + a)(1 − a^{2t}) sgn(t) ρᴺ/(1 − ρ)
/// + (1 − a²) a^{2t} ρ^{2(t+1)}/((1 − aρ)(1 − ρ)))`, `t = ⌊(N − 1)/2⌋`.
pub fn aux_g(p: f64, m0: u32, k: u32, n: u32, a: f64, r: f64) -> f64 {
    if a >= 1.0 {
        return aux_g_limit(p, m0, k, n, r);
    }
    let t = ((n - 1) / 2) as i32;
    let rho = r.powi(k as i32);
    let s = r.powi(m0 as i32);
    let scale = (1.0 - a * rho) * (1.0 + a * s).powf(p);
    let a2t = a.powi(2 * t);
    let sgn = if t > 0 { (1.0 + a) * (1.0 - a2t) * rho.powi(n as i32) / (1.0 - rho) } else { 0.0 };
    let last = (1.0 - a * a) * a2t * rho.powi(2 * (t + 1)) / ((1.0 - a * rho) * (1.0 - rho));
    aux_q(p, m0, k, n, a, r) + scale * (sgn + last)
}

/// `lim_{a→1⁻} G = (1 − ρ)(1 + s)ᵖ (2ρᴺ/(1 − ρ) − p(1 − s)/(1 + s))`.
pub fn aux_g_limit(p: f64, m0: u32, k: u32, n: u32, r: f64) -> f64 {
    let rho = r.powi(k as i32);
    let s = r.powi(m0 as i32);
    (1.0 - rho) * (1.0 + s).powf(p) * (2.0 * rho.powi(n as i32) / (1.0 - rho) - p * (1.0 - s) / (1.0 + s))
}

/// `F_k(a, r) = −1 + arᵏ + (1 − a²) r^{2k}/(1 − rᵏ)`.
pub fn aux_f(a: f64, r: f64, k: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange { r });
    }
    let rho = r.powi(k as i32);
    Ok(-1.0 + a * rho + (1.0 - a * a) * rho * rho / (1.0 - rho))
}

/// Maximiser `a = (1 − rᵏ)/(2rᵏ)` of `F_k(·, r)` and the maximum
/// `(1 + rᵏ)(5rᵏ − 3)/(4(1 − rᵏ))`.
pub fn aux_f_max(r: f64, k: u32) -> Result<(f64, f64)> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange { r });
    }
    let rho = r.powi(k as i32);
    Ok(((1.0 - rho) / (2.0 * rho), (1.0 + rho) * (5.0 * rho - 3.0) / (4.0 * (1.0 - rho))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub functional: FunctionalKind,
    pub problem: RadiusProblem,
    pub radius: f64,
    pub probe_r: f64,
    pub witness_a: f64,
    pub functional_value: f64,
    pub exceeded: bool,
}

/// Schwarz-map orders implied by a radius problem.
fn orders(problem: &RadiusProblem) -> (u32, u32) {
    use crate::radii::ClosedFormRadius::*;
    match *problem {
        RadiusProblem::YEquation { k, m0, .. } => (k, m0),
        RadiusProblem::ClosedForm { radius: BohrThird { k } | Bombieri { k } | RefinedThreeFifths { k } } => (k, 1),
        _ => (1, 1),
    }
}

/// Value of `functional` on the extremal family member with parameter `a`
/// at `|z| = r`, with `ω_k(z) = zᵏ` and `ω_{m0}(z) = −z^{m0}`.
///
/// The zero-omitted and `L` sums use `z·f_a`; all others use `f_a`. Kinds
/// that evaluate `f` at `z` directly are probed at `z = −r`.
pub fn extremal_value(functional: FunctionalKind, k: u32, m0: u32, a: f64, r: f64) -> Result<FunctionalValue> {
    let (f, z) = match functional {
        FunctionalKind::ZeroOmittedSum | FunctionalKind::RefinedL => (BoundedFunction::extremal_fa_star(a)?, r),
        FunctionalKind::RogosinskiSum { .. }
        | FunctionalKind::RefinedA { .. }
        | FunctionalKind::PartialSum { .. }
        | FunctionalKind::PowerMajorant { .. } => (BoundedFunction::extremal_fa(a)?, -r),
        _ => (BoundedFunction::extremal_fa(a)?, r),
    };
    let maps = MapPair { w_m0: negated_monomial(m0)?, w_k: SchwarzMap::power(k)? };
    evaluate(functional, &f, &maps, Complex64::new(z, 0.0), WITNESS_TRUNCATION, Mode::Pointwise)
}

/// Scans `a = 1 − step, 1 − 2·step, …` at `r = radius + probe_offset` and
/// reports the largest value found. Fails with `NoWitness` when no `a`
/// pushes the functional above `1 + EPS_FLOAT`.
pub fn witness_search(
    functional: FunctionalKind,
    params: &RadiusProblem,
    probe_offset: f64,
    a_grid_step: f64,
) -> Result<SharpnessReport> {
    functional.validate()?;
    if !(a_grid_step > 0.0 && a_grid_step <= 0.01) {
        return Err(invalid(format!("a-grid step {a_grid_step} outside (0, 0.01]")));
    }
    if !probe_offset.is_finite() {
        return Err(invalid("probe offset must be finite"));
    }
    let radius = solve_radius(params, DEFAULT_TOLERANCE)?.root;
    let probe_r = radius + probe_offset;
    if !(probe_r > 0.0 && probe_r < 1.0) {
        return Err(Error::RadiusOutOfRange { r: probe_r });
    }
    let (k, m0) = orders(params);

    let mut best = (f64::NEG_INFINITY, f64::NAN);
    let mut j = 1u64;
    loop {
        let a = 1.0 - j as f64 * a_grid_step;
        if a <= 0.0 {
            break;
        }
        let value = extremal_value(functional, k, m0, a, probe_r)?.value;
        if value > best.0 {
            best = (value, a);
        }
        j += 1;
    }
    let (functional_value, witness_a) = best;
    let exceeded = functional_value > 1.0 + crate::EPS_FLOAT;
    if !exceeded {
        return Err(Error::NoWitness { probe_r, best_value: functional_value });
    }
    Ok(SharpnessReport { functional, problem: *params, radius, probe_r, witness_a, functional_value, exceeded })
}

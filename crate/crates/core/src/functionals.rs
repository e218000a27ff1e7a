//! Bohr-type functionals evaluated as certified enclosures.
//!
//! Every functional is a sum of nonnegative terms. The retained part is
//! summed exactly (`value`); everything past the truncation order is bounded
//! through `|a_n| ≤ 1 − |a₀|²` (`tail`). So `value` is a lower bound for the
//! true functional and `total_upper` an upper bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::schwarz::SchwarzMap;
use crate::series::{exp, squared_tail, BohrSubject};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FunctionalKind {
    /// `Σ_{n≥0} |a_n| |ω_k(z)|ⁿ`.
    Majorant,
    /// `Σ_{n≥1} |a_n| |ω_k(z)|ⁿ`.
    ZeroOmittedSum,
    /// `|f(z)| + Σ_{n≥N} |a_n| |z|ⁿ`.
    RogosinskiSum { n: u32 },
    /// `|f(ω_{m0}(z))|ᵖ + Σ_{n≥N} |a_n| |ω_k(z)|ⁿ`.
    BohrRogosinskiI { p: f64, n: u32 },
    /// The Bohr–Rogosinski sum with the two quadratic refinement sums.
    RefinedJ { p: f64, n: u32 },
    /// Refined sum for functions vanishing at the origin.
    RefinedL,
    /// `RefinedJ` with both Schwarz maps equal to the identity.
    RefinedA { p: f64, n: u32 },
    /// `|a₀|ᵖ + Σ_{n≥1} |a_n| |z|ⁿ`.
    PowerMajorant { p: f64 },
    /// `|S_N(z)| = |Σ_{n<N} a_n zⁿ|`.
    PartialSum { n: u32 },
}

impl FunctionalKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FunctionalKind::BohrRogosinskiI { p, n }
            | FunctionalKind::RefinedJ { p, n }
            | FunctionalKind::RefinedA { p, n } => {
                check_p(p)?;
                check_n(n)
            }
            FunctionalKind::RogosinskiSum { n } | FunctionalKind::PartialSum { n } => check_n(n),
            FunctionalKind::PowerMajorant { p } => check_p(p),
            FunctionalKind::Majorant | FunctionalKind::ZeroOmittedSum | FunctionalKind::RefinedL => Ok(()),
        }
    }

    /// Whether the functional is only defined for `f(0) = 0`.
    pub fn needs_zero_constant(&self) -> bool {
        matches!(self, FunctionalKind::RefinedL)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Evaluate the actual `f`, `ω_{m0}`, `ω_k` at `z`.
    Pointwise,
    /// Replace `|f(ω_{m0}(z))|` by the Schwarz–Pick envelope and `|ω_k(z)|`
    /// by `rᵏ`, `r = |z|`.
    Envelope,
}

/// Partial sum plus a certified bound on the truncated remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub tail: f64,
    pub total_upper: f64,
}

impl FunctionalValue {
    pub fn new(value: f64, tail: f64) -> Self {
        debug_assert!(tail >= 0.0, "negative tail {tail}");
        FunctionalValue { value, tail, total_upper: value + tail }
    }

    fn plus(self, other: FunctionalValue) -> Self {
        FunctionalValue::new(self.value + other.value, self.tail + other.tail)
    }

    fn scaled(self, factor: f64) -> Self {
        FunctionalValue::new(self.value * factor, self.tail * factor)
    }

    /// True when even the upper bound stays within `1 + EPS_FLOAT`.
    pub fn certified_at_most_one(&self) -> bool {
        self.total_upper <= 1.0 + crate::EPS_FLOAT
    }

    /// True when the lower bound already exceeds `1 + EPS_FLOAT`.
    pub fn certified_above_one(&self) -> bool {
        self.value > 1.0 + crate::EPS_FLOAT
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(invalid(format!("p = {p} outside (0, 2]")));
    }
    Ok(())
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    Ok(())
}

fn check_z(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk { z });
    }
    Ok(())
}

/// Coefficient moduli `|a_0|..|a_T|` of the subject.
struct Moduli {
    abs: Vec<f64>,
    exact: bool,
}

impl Moduli {
    fn of<F: BohrSubject + ?Sized>(f: &F, order: usize) -> Self {
        let exact = f.polynomial_degree().is_some_and(|d| d <= order);
        let mut abs: Vec<f64> = f.expansion(order).coeffs().iter().map(|c| c.norm()).collect();
        if exact {
            abs.resize(order + 1, 0.0);
        }
        Moduli { abs, exact }
    }

    fn order(&self) -> usize {
        self.abs.len() - 1
    }

    fn a0(&self) -> f64 {
        self.abs[0].min(1.0)
    }

    /// Bound on `|a_n|` for every `n ≥ 1`.
    fn coefficient_bound(&self) -> f64 {
        if self.exact {
            return 0.0;
        }
        1.0 - self.a0() * self.a0()
    }

    /// `Σ_{n≥from} |a_n| ρⁿ`.
    fn linear_sum(&self, rho: f64, from: usize) -> FunctionalValue {
        let value = (from..=self.order()).map(|n| self.abs[n] * rho.powi(exp(n))).sum();
        let start = from.max(self.order() + 1).max(1);
        let tail = self.coefficient_bound() * rho.powi(exp(start)) / (1.0 - rho);
        FunctionalValue::new(value, tail)
    }

    /// `sgn(t) Σ_{n=1}^{t} |a_n|² ρᴺ/(1−ρ) + (1/(1+|a₀|) + ρ/(1−ρ)) Σ_{n≥t+1} |a_n|² ρ²ⁿ`.
    fn refinement(&self, rho: f64, n: u32) -> FunctionalValue {
        let t = ((n - 1) / 2) as usize;
        let order = self.order();
        let bound = self.coefficient_bound();
        let geometric = rho.powi(n as i32) / (1.0 - rho);

        let first = if t == 0 {
            FunctionalValue::new(0.0, 0.0)
        } else {
            let known = t.min(order);
            let sum: f64 = (1..=known).map(|m| self.abs[m] * self.abs[m]).sum();
            let missing = (t - known) as f64 * bound * bound;
            FunctionalValue::new(sum * geometric, missing * geometric)
        };

        let factor = 1.0 / (1.0 + self.a0()) + rho / (1.0 - rho);
        let sum: f64 = (t + 1..=order).map(|m| self.abs[m] * self.abs[m] * rho.powi(exp(2 * m))).sum();
        let tail = squared_tail(bound, rho, (t + 1).max(order + 1));
        first.plus(FunctionalValue::new(sum, tail).scaled(factor))
    }
}

/// `|f(w)|ᵖ` with the truncation uncertainty of `|f(w)|` moved into the tail.
fn powered_modulus<F: BohrSubject + ?Sized>(f: &F, w: Complex64, p: f64) -> Result<FunctionalValue> {
    let (m, err) = f.modulus_enclosure(w)?;
    let upper = m.max((m + err).min(1.0));
    let value = m.powf(p);
    Ok(FunctionalValue::new(value, upper.powf(p) - value))
}

/// `((s + a)/(1 + a s))ᵖ`, the Schwarz–Pick envelope of `|f|ᵖ` on `|z| = s`.
pub fn schwarz_pick_envelope(a: f64, s: f64, p: f64) -> f64 {
    ((s + a) / (1.0 + a * s)).powf(p)
}

fn rho_of(w: &SchwarzMap, z: Complex64, mode: Mode) -> Result<f64> {
    match mode {
        Mode::Pointwise => Ok(w.eval(z)?.norm()),
        Mode::Envelope => {
            check_z(z)?;
            Ok(z.norm().powi(w.order() as i32))
        }
    }
}

/// `Σ_{n=0}^{T} |a_n| |ω(z)|ⁿ` plus the Schwarz–Pick tail.
pub fn majorant<F: BohrSubject + ?Sized>(f: &F, w: &SchwarzMap, z: Complex64, order: usize) -> Result<FunctionalValue> {
    let rho = w.eval(z)?.norm();
    Ok(Moduli::of(f, order).linear_sum(rho, 0))
}

/// The majorant without its `n = 0` term.
pub fn zero_omitted_sum<F: BohrSubject + ?Sized>(
    f: &F,
    w: &SchwarzMap,
    z: Complex64,
    order: usize,
) -> Result<FunctionalValue> {
    let rho = w.eval(z)?.norm();
    Ok(Moduli::of(f, order).linear_sum(rho, 1))
}

/// `|f(ω_{m0}(z))|ᵖ + Σ_{n≥N} |a_n| |ω_k(z)|ⁿ`.
#[allow(clippy::too_many_arguments)]
pub fn bohr_rogosinski_i<F: BohrSubject + ?Sized>(
    f: &F,
    w_m0: &SchwarzMap,
    w_k: &SchwarzMap,
    z: Complex64,
    p: f64,
    n: u32,
    order: usize,
    mode: Mode,
) -> Result<FunctionalValue> {
    check_p(p)?;
    check_n(n)?;
    check_z(z)?;
    let moduli = Moduli::of(f, order);
    let head = head_term(f, &moduli, w_m0, z, p, mode)?;
    let rho = rho_of(w_k, z, mode)?;
    Ok(head.plus(moduli.linear_sum(rho, n as usize)))
}

/// [`bohr_rogosinski_i`] plus the quadratic refinement sums.
#[allow(clippy::too_many_arguments)]
pub fn refined_j<F: BohrSubject + ?Sized>(
    f: &F,
    w_m0: &SchwarzMap,
    w_k: &SchwarzMap,
    z: Complex64,
    p: f64,
    n: u32,
    order: usize,
    mode: Mode,
) -> Result<FunctionalValue> {
    check_p(p)?;
    check_n(n)?;
    check_z(z)?;
    let moduli = Moduli::of(f, order);
    let head = head_term(f, &moduli, w_m0, z, p, mode)?;
    let rho = rho_of(w_k, z, mode)?;
    Ok(head.plus(moduli.linear_sum(rho, n as usize)).plus(moduli.refinement(rho, n)))
}

fn head_term<F: BohrSubject + ?Sized>(
    f: &F,
    moduli: &Moduli,
    w_m0: &SchwarzMap,
    z: Complex64,
    p: f64,
    mode: Mode,
) -> Result<FunctionalValue> {
    match mode {
        Mode::Pointwise => powered_modulus(f, w_m0.eval(z)?, p),
        Mode::Envelope => {
            let s = z.norm().powi(w_m0.order() as i32);
            Ok(FunctionalValue::new(schwarz_pick_envelope(moduli.a0(), s, p), 0.0))
        }
    }
}

/// `Σ_{n≥1} |a_n| ρⁿ + (1/(1+|a₁|) + ρ/(1−ρ)) Σ_{n≥2} |a_n|² ρ^{2n−1}`,
/// `ρ = |ω_k(z)|`, for `f(0) = 0`.
pub fn refined_l<F: BohrSubject + ?Sized>(f: &F, w_k: &SchwarzMap, z: Complex64, order: usize) -> Result<FunctionalValue> {
    let rho = w_k.eval(z)?.norm();
    let moduli = Moduli::of(f, order.max(1));
    if moduli.abs[0] > 1e-12 {
        return Err(Error::NonZeroConstant { modulus: moduli.abs[0] });
    }
    let order = moduli.order();
    if order < 1 {
        return Err(invalid("refined L needs at least the coefficient a1"));
    }
    let a1 = moduli.abs[1].min(1.0);
    // f = z·h with h ∈ ℬ and h(0) = a1, so |a_n| ≤ 1 − |a1|² for n ≥ 2.
    let bound = if moduli.exact { 0.0 } else { 1.0 - a1 * a1 };

    let linear_value: f64 = (1..=order).map(|m| moduli.abs[m] * rho.powi(exp(m))).sum();
    let start = (order + 1).max(2);
    let linear = FunctionalValue::new(linear_value, bound * rho.powi(exp(start)) / (1.0 - rho));

    let factor = 1.0 / (1.0 + a1) + rho / (1.0 - rho);
    let quad_value: f64 = (2..=order).map(|m| moduli.abs[m] * moduli.abs[m] * rho.powi(exp(2 * m - 1))).sum();
    let quad_tail = bound * bound * rho.powi(exp(2 * start - 1)) / (1.0 - rho * rho);
    Ok(linear.plus(FunctionalValue::new(quad_value, quad_tail).scaled(factor)))
}

/// `|f(z)|ᵖ + Σ_{n≥N} |a_n| rⁿ + sgn(t) Σ_{n=1}^{t} |a_n|² rᴺ/(1−r)
/// + (1/(1+|a₀|) + r/(1−r)) Σ_{n≥t+1} |a_n|² r²ⁿ`, `r = |z|`.
pub fn refined_a<F: BohrSubject + ?Sized>(f: &F, z: Complex64, p: f64, n: u32, order: usize) -> Result<FunctionalValue> {
    check_p(p)?;
    check_n(n)?;
    check_z(z)?;
    let moduli = Moduli::of(f, order);
    let r = z.norm();
    let head = powered_modulus(f, z, p)?;
    Ok(head.plus(moduli.linear_sum(r, n as usize)).plus(moduli.refinement(r, n)))
}

/// `|f(z)| + Σ_{n≥N} |a_n| |z|ⁿ`.
pub fn rogosinski_sum<F: BohrSubject + ?Sized>(f: &F, z: Complex64, n: u32, order: usize) -> Result<FunctionalValue> {
    check_n(n)?;
    check_z(z)?;
    let moduli = Moduli::of(f, order);
    Ok(powered_modulus(f, z, 1.0)?.plus(moduli.linear_sum(z.norm(), n as usize)))
}

/// `|a₀|ᵖ + Σ_{n≥1} |a_n| |z|ⁿ`.
pub fn power_majorant<F: BohrSubject + ?Sized>(f: &F, z: Complex64, p: f64, order: usize) -> Result<FunctionalValue> {
    check_p(p)?;
    check_z(z)?;
    let moduli = Moduli::of(f, order);
    let head = FunctionalValue::new(moduli.a0().powf(p), 0.0);
    Ok(head.plus(moduli.linear_sum(z.norm(), 1)))
}

/// `|Σ_{n<N} a_n zⁿ|`; exact when `N − 1` does not exceed the known order.
pub fn partial_sum<F: BohrSubject + ?Sized>(f: &F, z: Complex64, n: u32) -> Result<FunctionalValue> {
    check_n(n)?;
    check_z(z)?;
    let series = f.expansion(n as usize - 1);
    let value = series.horner(z).norm();
    // Unknown coefficients between the known order and N − 1.
    let a0 = series.coeff(0).norm().min(1.0);
    let known = f.polynomial_degree().map_or(series.truncation_order(), |d| d.max(n as usize));
    let missing = (known + 1..n as usize).map(|m| (1.0 - a0 * a0) * z.norm().powi(exp(m))).sum();
    Ok(FunctionalValue::new(value, missing))
}

/// The Schwarz maps a functional is evaluated with.
#[derive(Clone, Debug)]
pub struct MapPair {
    pub w_m0: SchwarzMap,
    pub w_k: SchwarzMap,
}

impl MapPair {
    pub fn identity() -> Self {
        MapPair { w_m0: SchwarzMap::identity(), w_k: SchwarzMap::identity() }
    }
}

/// Evaluates any functional kind. Maps that a kind does not use are ignored;
/// kinds without a mode are always pointwise.
pub fn evaluate<F: BohrSubject + ?Sized>(
    kind: FunctionalKind,
    f: &F,
    maps: &MapPair,
    z: Complex64,
    order: usize,
    mode: Mode,
) -> Result<FunctionalValue> {
    match kind {
        FunctionalKind::Majorant => majorant(f, &maps.w_k, z, order),
        FunctionalKind::ZeroOmittedSum => zero_omitted_sum(f, &maps.w_k, z, order),
        FunctionalKind::RogosinskiSum { n } => rogosinski_sum(f, z, n, order),
        FunctionalKind::BohrRogosinskiI { p, n } => bohr_rogosinski_i(f, &maps.w_m0, &maps.w_k, z, p, n, order, mode),
        FunctionalKind::RefinedJ { p, n } => refined_j(f, &maps.w_m0, &maps.w_k, z, p, n, order, mode),
        FunctionalKind::RefinedL => refined_l(f, &maps.w_k, z, order),
        FunctionalKind::RefinedA { p, n } => refined_a(f, z, p, n, order),
        FunctionalKind::PowerMajorant { p } => power_majorant(f, z, p, order),
        FunctionalKind::PartialSum { n } => partial_sum(f, z, n),
    }
}

//! One-variable truncated power series and certified members of the class
//! `ℬ = { f analytic in 𝔻 : sup |f| ≤ 1 }`.
//!
//! A [`BoundedFunction`] is never built from raw coefficients: each
//! representation bounds the sup-norm by construction, so the Schwarz–Pick
//! estimate `|a_n| ≤ 1 − |a₀|²` can be used to bound truncation tails.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default number of retained coefficients minus one.
pub const DEFAULT_TRUNCATION: usize = 64;

const UNIT_TOL: f64 = 1e-12;

/// Coefficients `c₀..c_T` of a truncated power series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for PowerSeries {
    type Error = Error;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self> {
        PowerSeries::new(coeffs)
    }
}

impl From<PowerSeries> for Vec<Complex64> {
    fn from(s: PowerSeries) -> Self {
        s.coeffs
    }
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("a power series needs at least one coefficient"));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid(format!("non-finite coefficient {c}")));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        PowerSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Index of the last retained coefficient.
    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `c_n`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Keeps at most `order + 1` coefficients.
    pub fn truncated(&self, order: usize) -> PowerSeries {
        let len = self.coeffs.len().min(order + 1);
        PowerSeries::from_vec_unchecked(self.coeffs[..len].to_vec())
    }

    /// Horner evaluation of the retained polynomial inside the unit disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk { z });
        }
        Ok(self.horner(z))
    }

    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// The series of `s(zᵏ)`, keeping the same truncation order.
    pub fn substitute_power(&self, k: usize) -> PowerSeries {
        assert!(k >= 1, "power substitution needs k >= 1");
        let order = self.truncation_order();
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (n, &c) in self.coeffs.iter().enumerate() {
            match n.checked_mul(k) {
                Some(idx) if idx <= order => out[idx] = c,
                _ => break,
            }
        }
        PowerSeries::from_vec_unchecked(out)
    }

    /// Coefficient-wise sum; the result has the longer truncation order.
    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let len = self.coeffs.len().max(other.coeffs.len());
        PowerSeries::from_vec_unchecked((0..len).map(|n| self.coeff(n) + other.coeff(n)).collect())
    }
}

/// Upper bound for `Σ_{n≥N} |a_n| rⁿ` over all `f ∈ ℬ` with `|a₀| = a0_mod`.
pub fn tail_bound(a0_mod: f64, r: f64, n: usize) -> Result<f64> {
    let a0 = checked_a0(a0_mod)?;
    check_radius(r)?;
    if n == 0 {
        return Err(invalid("tail start index must be at least 1"));
    }
    Ok((1.0 - a0 * a0) * r.powi(exp(n)) / (1.0 - r))
}

/// Upper bound for `Σ_{n≥N} |a_n|² r²ⁿ` given `|a_n| ≤ bound` for `n ≥ N`.
pub(crate) fn squared_tail(bound: f64, r: f64, n: usize) -> f64 {
    bound * bound * r.powi(exp(2 * n)) / (1.0 - r * r)
}

pub(crate) fn exp(n: usize) -> i32 {
    i32::try_from(n).unwrap_or(i32::MAX)
}

fn checked_a0(a0_mod: f64) -> Result<f64> {
    if !(0.0..=1.0 + UNIT_TOL).contains(&a0_mod) {
        return Err(invalid(format!("|a0| = {a0_mod} outside [0, 1]")));
    }
    Ok(a0_mod.min(1.0))
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange { r });
    }
    Ok(())
}

/// Concrete representations whose sup-norm on 𝔻 is at most one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Representation {
    /// `f_a(z) = (a − z)/(1 − az)`.
    ExtremalFa { a: f64 },
    /// `f*_a(z) = z (a − z)/(1 − az)`.
    ExtremalFaStar { a: f64 },
    /// `rotation · Π (z − w)/(1 − w̄z)`.
    FiniteBlaschke { zeros: Vec<Complex64>, rotation: Complex64 },
    /// Function with the given Schur parameters, terminated by the constant
    /// last parameter.
    SchurSequence { params: Vec<Complex64> },
    /// `scale · z^degree` with `|scale| ≤ 1`.
    Monomial { degree: u32, scale: Complex64 },
}

/// A member of `ℬ` whose bound is guaranteed by its representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Representation", into = "Representation")]
pub struct BoundedFunction {
    repr: Representation,
}

impl TryFrom<Representation> for BoundedFunction {
    type Error = Error;

    fn try_from(repr: Representation) -> Result<Self> {
        match repr {
            Representation::ExtremalFa { a } => Self::extremal_fa(a),
            Representation::ExtremalFaStar { a } => Self::extremal_fa_star(a),
            Representation::FiniteBlaschke { zeros, rotation } => Self::finite_blaschke(zeros, rotation),
            Representation::SchurSequence { params } => Self::schur_sequence(params),
            Representation::Monomial { degree, scale } => Self::monomial(degree, scale),
        }
    }
}

impl From<BoundedFunction> for Representation {
    fn from(f: BoundedFunction) -> Self {
        f.repr
    }
}

impl BoundedFunction {
    pub fn extremal_fa(a: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&a) {
            return Err(invalid(format!("f_a needs a in [0, 1), got {a}")));
        }
        Ok(BoundedFunction { repr: Representation::ExtremalFa { a } })
    }

    pub fn extremal_fa_star(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(invalid(format!("f*_a needs a in (0, 1), got {a}")));
        }
        Ok(BoundedFunction { repr: Representation::ExtremalFaStar { a } })
    }

    pub fn finite_blaschke(zeros: Vec<Complex64>, rotation: Complex64) -> Result<Self> {
        if let Some(w) = zeros.iter().find(|w| !(w.norm() < 1.0)) {
            return Err(invalid(format!("Blaschke zero {w} not inside the disk")));
        }
        if (rotation.norm() - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!("rotation {rotation} is not unimodular")));
        }
        Ok(BoundedFunction { repr: Representation::FiniteBlaschke { zeros, rotation } })
    }

    pub fn schur_sequence(params: Vec<Complex64>) -> Result<Self> {
        if params.is_empty() {
            return Err(invalid("Schur sequence needs at least one parameter"));
        }
        if let Some(g) = params.iter().find(|g| !(g.norm() <= 1.0 + UNIT_TOL)) {
            return Err(invalid(format!("Schur parameter {g} outside the closed disk")));
        }
        Ok(BoundedFunction { repr: Representation::SchurSequence { params } })
    }

    pub fn monomial(degree: u32, scale: Complex64) -> Result<Self> {
        if !(scale.norm() <= 1.0 + UNIT_TOL) {
            return Err(invalid(format!("monomial scale {scale} exceeds 1 in modulus")));
        }
        Ok(BoundedFunction { repr: Representation::Monomial { degree, scale } })
    }

    /// The constant function `c`.
    pub fn constant(c: Complex64) -> Result<Self> {
        Self::monomial(0, c)
    }

    /// Random Schur function: each parameter uniform in the closed unit disk.
    pub fn random_schur<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        let params = (0..len.max(1)).map(|_| random_disk_point(rng, 1.0)).collect();
        BoundedFunction { repr: Representation::SchurSequence { params } }
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// Value at `z` from the closed form of the representation.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk { z });
        }
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match &self.repr {
            Representation::ExtremalFa { a } => (*a - z) / (one - *a * z),
            Representation::ExtremalFaStar { a } => z * (*a - z) / (one - *a * z),
            Representation::FiniteBlaschke { zeros, rotation } => zeros
                .iter()
                .fold(*rotation, |acc, w| acc * (z - w) / (one - w.conj() * z)),
            Representation::SchurSequence { params } => {
                let (last, rest) = params.split_last().expect("nonempty");
                rest.iter().rev().fold(*last, |inner, g| {
                    let u = z * inner;
                    (*g + u) / (one + g.conj() * u)
                })
            }
            Representation::Monomial { degree, scale } => *scale * z.powu(*degree),
        }
    }

    /// First `order + 1` Taylor coefficients at the origin.
    pub fn taylor(&self, order: usize) -> PowerSeries {
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = match &self.repr {
            Representation::ExtremalFa { a } => {
                let a = *a;
                let mut c = Vec::with_capacity(order + 1);
                c.push(Complex64::new(a, 0.0));
                let mut pow = 1.0;
                for _ in 1..=order {
                    c.push(Complex64::new(-(1.0 - a * a) * pow, 0.0));
                    pow *= a;
                }
                c
            }
            Representation::ExtremalFaStar { a } => {
                let a = *a;
                let mut c = vec![zero];
                if order >= 1 {
                    c.push(Complex64::new(a, 0.0));
                }
                let mut pow = 1.0;
                for _ in 2..=order {
                    c.push(Complex64::new(-(1.0 - a * a) * pow, 0.0));
                    pow *= a;
                }
                c
            }
            Representation::FiniteBlaschke { zeros, rotation } => {
                let mut num = vec![*rotation];
                let mut den = vec![Complex64::new(1.0, 0.0)];
                for w in zeros {
                    num = poly_mul(&num, &[-*w, Complex64::new(1.0, 0.0)]);
                    den = poly_mul(&den, &[Complex64::new(1.0, 0.0), -w.conj()]);
                }
                rational_expansion(&num, &den, order)
            }
            Representation::SchurSequence { params } => {
                let (num, den) = schur_rational(params);
                rational_expansion(&num, &den, order)
            }
            Representation::Monomial { degree, scale } => {
                let mut c = vec![zero; order + 1];
                if let Some(slot) = c.get_mut(*degree as usize) {
                    *slot = *scale;
                }
                c
            }
        };
        PowerSeries::from_vec_unchecked(coeffs)
    }

    /// `|f(0)|`.
    pub fn constant_modulus(&self) -> f64 {
        self.eval_unchecked(Complex64::new(0.0, 0.0)).norm()
    }
}

/// Uniform point of the closed disk of the given radius.
pub fn random_disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let rho = radius * rng.gen::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    Complex64::from_polar(rho, theta)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Numerator and denominator of the Schur continued fraction
/// `f_j = (γ_j + z f_{j+1})/(1 + γ̄_j z f_{j+1})`, with `f_last = γ_last`.
fn schur_rational(params: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let (last, rest) = params.split_last().expect("nonempty");
    let mut num = vec![*last];
    let mut den = vec![Complex64::new(1.0, 0.0)];
    for g in rest.iter().rev() {
        // z·P shifted by one degree.
        let len = den.len().max(num.len() + 1);
        let mut new_num = vec![Complex64::new(0.0, 0.0); len];
        let mut new_den = vec![Complex64::new(0.0, 0.0); len];
        for (i, q) in den.iter().enumerate() {
            new_num[i] += g * q;
            new_den[i] += q;
        }
        for (i, p) in num.iter().enumerate() {
            new_num[i + 1] += p;
            new_den[i + 1] += g.conj() * p;
        }
        num = new_num;
        den = new_den;
    }
    (num, den)
}

/// Taylor coefficients of `num/den` up to `order`; `den[0]` must be nonzero.
fn rational_expansion(num: &[Complex64], den: &[Complex64], order: usize) -> Vec<Complex64> {
    let d0 = den[0];
    let mut c: Vec<Complex64> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = num.get(n).copied().unwrap_or_default();
        for i in 1..den.len().min(n + 1) {
            acc -= den[i] * c[n - i];
        }
        c.push(acc / d0);
    }
    c
}

/// The leading coefficients of some (unspecified) member of `ℬ`.
///
/// Only the retained coefficients are known; every bound on what lies past
/// them comes from the Schwarz–Pick estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedSeries {
    series: PowerSeries,
    polynomial: bool,
}

impl CertifiedSeries {
    /// The caller asserts that `series` is a section of a function in `ℬ`.
    pub fn assume_bounded(series: PowerSeries) -> Self {
        CertifiedSeries { series, polynomial: false }
    }

    /// The caller asserts that `series` is itself a function in `ℬ`, with
    /// every later coefficient zero.
    pub fn polynomial(series: PowerSeries) -> Self {
        CertifiedSeries { series, polynomial: true }
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }
}

/// Something a functional can be evaluated on: a source of Taylor
/// coefficients plus an enclosure of `|f(z)|`.
pub trait BohrSubject {
    /// Up to `order + 1` coefficients; fewer when no more are known.
    fn expansion(&self, order: usize) -> PowerSeries;

    /// `(|f(z)|, err)` with the true modulus within `err` of the estimate.
    fn modulus_enclosure(&self, z: Complex64) -> Result<(f64, f64)>;

    /// Degree when the subject is known to be a polynomial.
    fn polynomial_degree(&self) -> Option<usize> {
        None
    }
}

impl BohrSubject for BoundedFunction {
    fn expansion(&self, order: usize) -> PowerSeries {
        self.taylor(order)
    }

    fn modulus_enclosure(&self, z: Complex64) -> Result<(f64, f64)> {
        Ok((self.eval(z)?.norm(), 0.0))
    }

    fn polynomial_degree(&self) -> Option<usize> {
        match &self.repr {
            Representation::Monomial { degree, .. } => Some(*degree as usize),
            Representation::FiniteBlaschke { zeros, .. } if zeros.is_empty() => Some(0),
            Representation::SchurSequence { params } if params[0].norm() >= 1.0 => Some(0),
            _ => None,
        }
    }
}

impl BohrSubject for CertifiedSeries {
    fn expansion(&self, order: usize) -> PowerSeries {
        self.series.truncated(order)
    }

    fn modulus_enclosure(&self, z: Complex64) -> Result<(f64, f64)> {
        let value = self.series.eval(z)?;
        if self.polynomial {
            return Ok((value.norm(), 0.0));
        }
        let a0 = self.series.coeff(0).norm().min(1.0);
        let err = tail_bound(a0, z.norm(), self.series.truncation_order() + 1)?;
        Ok((value.norm(), err))
    }

    fn polynomial_degree(&self) -> Option<usize> {
        self.polynomial.then(|| self.series.truncation_order())
    }
}

//! Functions of several variables through their homogeneous expansions and
//! complex-line sections.
//!
//! Along a line `{b h : |h| < 1}` inside the domain, `f(bh) = Σ P_n(b) hⁿ`
//! is a one-variable member of `ℬ`, so every inequality is checked by
//! applying the one-variable functional to the section.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functionals::{evaluate, FunctionalKind, MapPair, Mode};
use crate::radii::{radius_problem_for, solve_radius, DEFAULT_TOLERANCE};
use crate::schwarz::SchwarzMap;
use crate::series::{BohrSubject, BoundedFunction, CertifiedSeries, PowerSeries};

pub const MAX_DIMS: usize = 3;
pub const MAX_DEGREE: u32 = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExpansion", into = "RawExpansion")]
pub struct HomogeneousExpansion {
    dims: usize,
    max_degree: u32,
    terms: BTreeMap<Vec<u32>, Complex64>,
    polynomial: bool,
}

#[derive(Serialize, Deserialize)]
struct RawExpansion {
    dims: usize,
    max_degree: u32,
    terms: Vec<(Vec<u32>, Complex64)>,
    #[serde(default)]
    polynomial: bool,
}

impl TryFrom<RawExpansion> for HomogeneousExpansion {
    type Error = Error;

    fn try_from(raw: RawExpansion) -> Result<Self> {
        let mut e = HomogeneousExpansion::new(raw.dims, raw.max_degree)?;
        for (alpha, c) in raw.terms {
            e.insert(alpha, c)?;
        }
        e.polynomial = raw.polynomial;
        Ok(e)
    }
}

impl From<HomogeneousExpansion> for RawExpansion {
    fn from(e: HomogeneousExpansion) -> Self {
        RawExpansion {
            dims: e.dims,
            max_degree: e.max_degree,
            terms: e.terms.into_iter().collect(),
            polynomial: e.polynomial,
        }
    }
}

fn degree(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

fn monomial(alpha: &[u32], z: &[Complex64]) -> Complex64 {
    alpha.iter().zip(z).map(|(&e, &zj)| zj.powu(e)).product()
}

impl HomogeneousExpansion {
    pub fn new(dims: usize, max_degree: u32) -> Result<Self> {
        if dims == 0 || dims > MAX_DIMS {
            return Err(invalid(format!("dimension {dims} outside 1..={MAX_DIMS}")));
        }
        if max_degree > MAX_DEGREE {
            return Err(invalid(format!("degree {max_degree} exceeds {MAX_DEGREE}")));
        }
        Ok(HomogeneousExpansion { dims, max_degree, terms: BTreeMap::new(), polynomial: false })
    }

    pub fn constant(dims: usize, c: Complex64) -> Result<Self> {
        let mut e = Self::new(dims, 0)?;
        e.insert(vec![0; dims], c)?;
        e.polynomial = true;
        Ok(e)
    }

    /// Declares that no terms exist beyond `max_degree`.
    pub fn mark_polynomial(mut self) -> Self {
        self.polynomial = true;
        self
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// Adds `c z^α` to the expansion.
    pub fn insert(&mut self, alpha: Vec<u32>, c: Complex64) -> Result<()> {
        if alpha.len() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: alpha.len() });
        }
        if degree(&alpha) > self.max_degree {
            return Err(invalid(format!("|α| = {} exceeds max degree {}", degree(&alpha), self.max_degree)));
        }
        if !c.is_finite() {
            return Err(invalid("coefficients must be finite"));
        }
        *self.terms.entry(alpha).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &[u32]) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&vec![0; self.dims])
    }

    /// Coefficient-wise sum, truncated at the larger degree.
    pub fn add(&self, other: &HomogeneousExpansion) -> Result<HomogeneousExpansion> {
        if other.dims != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: other.dims });
        }
        let mut out = Self::new(self.dims, self.max_degree.max(other.max_degree))?;
        for (alpha, &c) in self.terms.iter().chain(&other.terms) {
            out.insert(alpha.clone(), c)?;
        }
        out.polynomial = self.polynomial && other.polynomial;
        Ok(out)
    }

    /// `P_n(z) = Σ_{|α|=n} A_α z^α`.
    pub fn homogeneous_part(&self, n: u32, z: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.terms.iter().filter(|(alpha, _)| degree(alpha) == n).map(|(alpha, &c)| c * monomial(alpha, z)).sum())
    }

    /// The truncated expansion evaluated at `z`.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.terms.iter().map(|(alpha, &c)| c * monomial(alpha, z)).sum())
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: z.len() });
        }
        Ok(())
    }

    /// Product truncated at `max_degree`.
    fn mul_truncated(&self, other: &HomogeneousExpansion) -> HomogeneousExpansion {
        let mut out =
            HomogeneousExpansion { dims: self.dims, max_degree: self.max_degree, terms: BTreeMap::new(), polynomial: false };
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let alpha: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if degree(&alpha) <= self.max_degree {
                    *out.terms.entry(alpha).or_default() += ca * cb;
                }
            }
        }
        out
    }
}

/// Domains whose lines are sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Domain {
    /// The unit polydisk `{max |z_j| < 1}`.
    Polydisk { dims: usize },
    /// `R_b = {|b₁z₁ + … + b_n z_n| < 1}`.
    HalfSpace { b: Vec<Complex64> },
}

impl Domain {
    pub fn dims(&self) -> usize {
        match self {
            Domain::Polydisk { dims } => *dims,
            Domain::HalfSpace { b } => b.len(),
        }
    }

    /// Gauge of `d`: the line `{d h}` lies in the domain exactly when
    /// `|h| · gauge(d) < 1`.
    pub fn gauge(&self, d: &[Complex64]) -> f64 {
        match self {
            Domain::Polydisk { .. } => d.iter().map(|c| c.norm()).fold(0.0, f64::max),
            Domain::HalfSpace { b } => b.iter().zip(d).map(|(&bj, &dj)| bj * dj).sum::<Complex64>().norm(),
        }
    }
}

/// Direction `b` of the complex line `{b h : h ∈ 𝔻}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineDirection {
    pub b: Vec<Complex64>,
}

impl LineDirection {
    /// An arbitrary direction, used as given.
    pub fn new(b: Vec<Complex64>) -> Result<Self> {
        if b.is_empty() || b.len() > MAX_DIMS || b.iter().any(|c| !c.is_finite()) {
            return Err(invalid("direction must have 1..=3 finite components"));
        }
        Ok(LineDirection { b })
    }

    /// `d` rescaled so that its gauge for `domain` equals 1.
    pub fn normalized(domain: &Domain, d: Vec<Complex64>) -> Result<Self> {
        if d.len() != domain.dims() {
            return Err(Error::DimensionMismatch { expected: domain.dims(), found: d.len() });
        }
        let gauge = domain.gauge(&d);
        if !(gauge > 0.0 && gauge.is_finite()) {
            return Err(invalid("direction is not scalable onto the domain boundary"));
        }
        Self::new(d.into_iter().map(|c| c / gauge).collect())
    }

    pub fn dims(&self) -> usize {
        self.b.len()
    }

    pub fn is_normalized_for(&self, domain: &Domain) -> bool {
        self.dims() == domain.dims() && (domain.gauge(&self.b) - 1.0).abs() <= crate::EPS_FLOAT
    }

    /// Random polydisk direction: uniform phases, one component of modulus 1.
    pub fn random_polydisk<R: Rng + ?Sized>(rng: &mut R, dims: usize) -> Result<Self> {
        let d = (0..dims).map(|_| crate::series::random_disk_point(rng, 1.0)).collect();
        Self::normalized(&Domain::Polydisk { dims }, d)
    }
}

/// The one-variable series `h ↦ f(bh) = Σ P_n(b) hⁿ` up to `max_degree`.
pub fn section(e: &HomogeneousExpansion, b: &LineDirection) -> Result<PowerSeries> {
    if b.dims() != e.dims {
        return Err(Error::DimensionMismatch { expected: e.dims, found: b.dims() });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); e.max_degree as usize + 1];
    for (alpha, &c) in &e.terms {
        coeffs[degree(alpha) as usize] += c * monomial(alpha, &b.b);
    }
    PowerSeries::new(coeffs)
}

/// Expansion of `f(b₁z₁ᵏ + … + b_n z_nᵏ)` up to total degree `max_degree`.
/// Requires `Σ|b_j| ≤ 1`, which keeps the function in the unit ball on the polydisk.
pub fn compose_line(f: &BoundedFunction, b: &LineDirection, k: u32, max_degree: u32) -> Result<HomogeneousExpansion> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let l1: f64 = b.b.iter().map(|c| c.norm()).sum();
    if l1 > 1.0 + crate::EPS_FLOAT {
        return Err(invalid(format!("Σ|b_j| = {l1} exceeds 1")));
    }
    let dims = b.dims();
    let mut g = HomogeneousExpansion::new(dims, max_degree)?;
    if k <= max_degree {
        for (j, &bj) in b.b.iter().enumerate() {
            let mut alpha = vec![0; dims];
            alpha[j] = k;
            g.insert(alpha, bj)?;
        }
    }
    let taylor = f.taylor((max_degree / k) as usize);
    let mut power = HomogeneousExpansion::new(dims, max_degree)?;
    power.insert(vec![0; dims], Complex64::new(1.0, 0.0))?;
    let mut out = HomogeneousExpansion::new(dims, max_degree)?;
    for (m, &c) in taylor.coeffs().iter().enumerate() {
        if m > 0 {
            power = power.mul_truncated(&g);
        }
        for (alpha, &pc) in &power.terms {
            out.insert(alpha.clone(), c * pc)?;
        }
    }
    out.polynomial = f.polynomial_degree().is_some_and(|d| d as u64 * k as u64 <= max_degree as u64);
    Ok(out)
}

/// Seeded test function `f(b₁z₁ + … + b_n z_n)`: `f` is a random Schur
/// function or an extremal `f_a` (`f*_a` when `zero_constant`), and `b` has
/// random phases with `Σ|b_j| = 1`.
pub fn random_line_function(dims: usize, zero_constant: bool, seed: u64) -> Result<(BoundedFunction, HomogeneousExpansion)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = if rng.gen::<bool>() {
        let len = rng.gen_range(1..=8);
        let mut params = match BoundedFunction::random_schur(&mut rng, len).representation() {
            crate::series::Representation::SchurSequence { params } => params.clone(),
            _ => unreachable!("random_schur builds a Schur sequence"),
        };
        if zero_constant {
            params.insert(0, Complex64::new(0.0, 0.0));
        }
        BoundedFunction::schur_sequence(params)?
    } else if zero_constant {
        BoundedFunction::extremal_fa_star(rng.gen_range(1e-3..1.0))?
    } else {
        BoundedFunction::extremal_fa(rng.gen_range(0.0..1.0))?
    };
    let raw: Vec<Complex64> = (0..dims).map(|_| crate::series::random_disk_point(&mut rng, 1.0)).collect();
    let l1: f64 = raw.iter().map(|c| c.norm()).sum();
    if !(l1 > 0.0) {
        return Err(invalid("degenerate random direction"));
    }
    let b = LineDirection::new(raw.into_iter().map(|c| c / l1).collect())?;
    let e = compose_line(&f, &b, 1, MAX_DEGREE)?;
    Ok((f, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "theorem")]
pub enum Theorem {
    /// Majorant on `(1/∛3)Q`-type homotheties, radius `3^{−1/k}`.
    T2_1,
    /// Zero-omitted sum, radius `2^{−1/(2k)}`.
    T2_2,
    /// Bohr–Rogosinski sum, radius from the `Y` equation.
    T2_3 { p: f64, n: u32, m0: u32 },
    /// Refined Bohr–Rogosinski sum, radius from the `Y` equation.
    T2_4 { p: f64, n: u32, m0: u32 },
    /// Refined sum for vanishing constant term, radius `(3/5)^{1/k}`.
    T2_5,
}

impl Theorem {
    pub fn functional(&self) -> FunctionalKind {
        match *self {
            Theorem::T2_1 => FunctionalKind::Majorant,
            Theorem::T2_2 => FunctionalKind::ZeroOmittedSum,
            Theorem::T2_3 { p, n, .. } => FunctionalKind::BohrRogosinskiI { p, n },
            Theorem::T2_4 { p, n, .. } => FunctionalKind::RefinedJ { p, n },
            Theorem::T2_5 => FunctionalKind::RefinedL,
        }
    }

    pub fn m0(&self) -> u32 {
        match *self {
            Theorem::T2_3 { m0, .. } | Theorem::T2_4 { m0, .. } => m0,
            _ => 1,
        }
    }

    pub fn needs_zero_constant(&self) -> bool {
        matches!(self, Theorem::T2_2 | Theorem::T2_5)
    }

    /// Homothety radius for order `k`.
    pub fn radius(&self, k: u32) -> Result<f64> {
        Ok(solve_radius(&radius_problem_for(&self.functional(), k, self.m0()), DEFAULT_TOLERANCE)?.root)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub theorem: Theorem,
    pub k: u32,
    pub lines: usize,
    pub seed: u64,
    /// Lines are probed at `|h| = radius − margin`; negative margins probe above the radius.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSample {
    pub line: usize,
    pub direction: LineDirection,
    pub h: Complex64,
    pub rotation: Complex64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultidimReport {
    pub theorem: Theorem,
    pub k: u32,
    pub radius: f64,
    pub probe_modulus: f64,
    pub lines_run: usize,
    pub max_value: f64,
    pub argmax: Option<LineSample>,
    pub violations: Vec<LineSample>,
    pub seed: u64,
}

/// Upper bound for the theorem's functional along one line, at the point
/// `h` with `ω_k(h) = hᵏ` and `ω_{m0}(h) = rotation · h^{m0}`.
pub fn line_value(
    e: &HomogeneousExpansion,
    theorem: Theorem,
    k: u32,
    direction: &LineDirection,
    h: Complex64,
    rotation: Complex64,
) -> Result<f64> {
    let section = section(e, direction)?;
    let series =
        if e.polynomial { CertifiedSeries::polynomial(section) } else { CertifiedSeries::assume_bounded(section) };
    let maps = MapPair { w_m0: SchwarzMap::scaled_power(theorem.m0(), rotation)?, w_k: SchwarzMap::power(k)? };
    let order = series.series().truncation_order();
    Ok(evaluate(theorem.functional(), &series, &maps, h, order, Mode::Pointwise)?.total_upper)
}

/// Checks the theorem along `check.lines` seeded random polydisk lines.
pub fn verify_theorem(e: &HomogeneousExpansion, check: &TheoremCheck) -> Result<MultidimReport> {
    let directions = (0..check.lines)
        .map(|line| LineDirection::random_polydisk(&mut line_rng(check.seed, line), e.dims))
        .collect::<Result<Vec<_>>>()?;
    verify_theorem_on_lines(e, check, &directions)
}

fn line_rng(seed: u64, line: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(line as u64);
    rng
}

/// Checks the theorem along the given lines; `check.lines` is ignored.
pub fn verify_theorem_on_lines(
    e: &HomogeneousExpansion,
    check: &TheoremCheck,
    directions: &[LineDirection],
) -> Result<MultidimReport> {
    check.theorem.functional().validate()?;
    if check.k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if check.theorem.needs_zero_constant() && e.constant_term().norm() > 1e-12 {
        return Err(Error::NonZeroConstant { modulus: e.constant_term().norm() });
    }
    let radius = check.theorem.radius(check.k)?;
    let probe = radius - check.margin;
    if !(0.0..1.0).contains(&probe) {
        return Err(Error::RadiusOutOfRange { r: probe });
    }

    let mut report = MultidimReport {
        theorem: check.theorem,
        k: check.k,
        radius,
        probe_modulus: probe,
        lines_run: 0,
        max_value: f64::NEG_INFINITY,
        argmax: None,
        violations: Vec::new(),
        seed: check.seed,
    };
    for (line, direction) in directions.iter().enumerate() {
        // Draw the direction's stream first so the phases match `verify_theorem`.
        let mut rng = line_rng(check.seed, line);
        for _ in 0..e.dims {
            crate::series::random_disk_point(&mut rng, 1.0);
        }
        let h = Complex64::from_polar(probe, rng.gen_range(0.0..std::f64::consts::TAU));
        let rotation = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let value = line_value(e, check.theorem, check.k, direction, h, rotation)?;
        let sample = LineSample { line, direction: direction.clone(), h, rotation, value };
        if value > report.max_value {
            report.max_value = value;
            report.argmax = Some(sample.clone());
        }
        if value > 1.0 + crate::EPS_FLOAT {
            report.violations.push(sample);
        }
        report.lines_run += 1;
    }
    Ok(report)
}

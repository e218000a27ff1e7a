//! Schwarz maps of order `k`: `ω(z) = zᵏ g(z)` with `g ∈ ℬ`.
//!
//! Storing the factored form keeps membership in `ℬ_k` structural, so
//! `|ω(z)| ≤ |z|ᵏ` never depends on floating-point checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::series::BoundedFunction;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchwarz", into = "RawSchwarz")]
pub struct SchwarzMap {
    order: u32,
    inner: BoundedFunction,
}

#[derive(Serialize, Deserialize)]
struct RawSchwarz {
    order: u32,
    inner: BoundedFunction,
}

impl TryFrom<RawSchwarz> for SchwarzMap {
    type Error = Error;

    fn try_from(raw: RawSchwarz) -> Result<Self> {
        SchwarzMap::new(raw.order, raw.inner)
    }
}

impl From<SchwarzMap> for RawSchwarz {
    fn from(w: SchwarzMap) -> Self {
        RawSchwarz { order: w.order, inner: w.inner }
    }
}

impl SchwarzMap {
    pub fn new(order: u32, inner: BoundedFunction) -> Result<Self> {
        if order == 0 {
            return Err(invalid("Schwarz map order must be at least 1"));
        }
        Ok(SchwarzMap { order, inner })
    }

    /// `ω(z) = zᵏ`.
    pub fn power(k: u32) -> Result<Self> {
        Self::new(k, BoundedFunction::constant(Complex64::new(1.0, 0.0))?)
    }

    pub fn identity() -> Self {
        Self::power(1).expect("order 1 is valid")
    }

    /// `ω(z) = c·zᵏ` with `|c| ≤ 1`.
    pub fn scaled_power(k: u32, c: Complex64) -> Result<Self> {
        Self::new(k, BoundedFunction::constant(c)?)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn inner(&self) -> &BoundedFunction {
        &self.inner
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(z.powu(self.order) * self.inner.eval(z)?)
    }
}

/// `ω(z) = zᵏ g(z)`; rejects `|z| ≥ 1`.
pub fn eval_schwarz(w: &SchwarzMap, z: Complex64) -> Result<Complex64> {
    w.eval(z)
}

/// The map `z ↦ −z^{m0}`, which takes the value `−r^{m0}` at `z = r`.
pub fn negated_monomial(m0: u32) -> Result<SchwarzMap> {
    SchwarzMap::scaled_power(m0, Complex64::new(-1.0, 0.0))
}

/// Deterministic random member of `ℬ_k` whose inner factor is a Schur
/// function with `inner_degree + 1` parameters.
pub fn random_schwarz(k: u32, inner_degree: usize, seed: u64) -> Result<SchwarzMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_schwarz_with(&mut rng, k, inner_degree)
}

pub fn random_schwarz_with<R: Rng + ?Sized>(rng: &mut R, k: u32, inner_degree: usize) -> Result<SchwarzMap> {
    SchwarzMap::new(k, BoundedFunction::random_schur(rng, inner_degree + 1))
}

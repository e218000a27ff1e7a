//! Radius equations, closed-form radii and the bracketed root solver.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functionals::FunctionalKind;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_GRID_CELLS: usize = 4096;
const MAX_BISECTIONS: usize = 200;
/// Smallest `p` accepted for the `Y` equation; the root tends to 0 as `p → 0⁺`.
pub const MIN_P: f64 = 1e-6;
/// Right end of the scan; every equation is evaluated strictly inside the disk.
const LAST_GRID_POINT: f64 = 1.0 - 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "which")]
pub enum ClosedFormRadius {
    /// `3^{−1/k}`.
    BohrThird { k: u32 },
    /// `2^{−1/(2k)}`.
    Bombieri { k: u32 },
    /// `(3/5)^{1/k}`.
    RefinedThreeFifths { k: u32 },
    /// `1/2`.
    Rogosinski,
    /// `p/(p+2)`.
    PowerP { p: f64 },
}

impl ClosedFormRadius {
    pub fn value(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            ClosedFormRadius::BohrThird { k } => 3f64.powf(-1.0 / k as f64),
            ClosedFormRadius::Bombieri { k } => 2f64.powf(-1.0 / (2.0 * k as f64)),
            ClosedFormRadius::RefinedThreeFifths { k } => 0.6f64.powf(1.0 / k as f64),
            ClosedFormRadius::Rogosinski => 0.5,
            ClosedFormRadius::PowerP { p } => p / (p + 2.0),
        })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ClosedFormRadius::BohrThird { k }
            | ClosedFormRadius::Bombieri { k }
            | ClosedFormRadius::RefinedThreeFifths { k } => check_positive("k", k),
            ClosedFormRadius::Rogosinski => Ok(()),
            ClosedFormRadius::PowerP { p } => {
                if p > 0.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(invalid(format!("p = {p} must be positive")))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum RadiusProblem {
    /// `2r^{kN}(1 + r^{m0}) − p(1 − r^{m0})(1 − r^k) = 0`.
    YEquation { p: f64, k: u32, n: u32, m0: u32 },
    /// `2(1 + r)r^N − (1 − r)² = 0`.
    RnEquation { n: u32 },
    /// `(1 + r)r^N − (1 − r)² = 0`.
    RnPrimeEquation { n: u32 },
    /// `[1 − (2 − a²)r](1 + ar)^p − (1 − r)(r + a)^p = 0`.
    RapEquation { a: f64, p: f64 },
    ClosedForm { radius: ClosedFormRadius },
}

impl RadiusProblem {
    pub fn y(p: f64, k: u32, n: u32, m0: u32) -> Self {
        RadiusProblem::YEquation { p, k, n, m0 }
    }

    pub fn closed(radius: ClosedFormRadius) -> Self {
        RadiusProblem::ClosedForm { radius }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RadiusProblem::YEquation { p, k, n, m0 } => {
                if !(MIN_P..=2.0).contains(&p) {
                    return Err(invalid(format!("p = {p} outside [{MIN_P}, 2]")));
                }
                check_positive("k", k)?;
                check_positive("N", n)?;
                check_positive("m0", m0)
            }
            RadiusProblem::RnEquation { n } | RadiusProblem::RnPrimeEquation { n } => check_positive("N", n),
            RadiusProblem::RapEquation { a, p } => {
                if !(0.0..1.0).contains(&a) {
                    return Err(invalid(format!("a = {a} outside [0, 1)")));
                }
                if !(p > 0.0 && p.is_finite()) {
                    return Err(invalid(format!("p = {p} must be positive")));
                }
                Ok(())
            }
            RadiusProblem::ClosedForm { radius } => radius.validate(),
        }
    }
}

impl fmt::Display for RadiusProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusProblem::YEquation { p, k, n, m0 } => write!(f, "k={k} m0={m0} N={n} p={p}"),
            RadiusProblem::RnEquation { n } => write!(f, "R_N N={n}"),
            RadiusProblem::RnPrimeEquation { n } => write!(f, "R'_N N={n}"),
            RadiusProblem::RapEquation { a, p } => write!(f, "r_ap a={a} p={p}"),
            RadiusProblem::ClosedForm { radius } => write!(f, "{radius:?}"),
        }
    }
}

fn check_positive(name: &str, v: u32) -> Result<()> {
    if v == 0 {
        return Err(invalid(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// The sharp radius of a functional with Schwarz-map orders `k` and `m0`.
/// Kinds that evaluate `f` at `z` itself ignore `k` and `m0`.
pub fn radius_problem_for(kind: &FunctionalKind, k: u32, m0: u32) -> RadiusProblem {
    match *kind {
        FunctionalKind::Majorant => RadiusProblem::closed(ClosedFormRadius::BohrThird { k }),
        FunctionalKind::ZeroOmittedSum => RadiusProblem::closed(ClosedFormRadius::Bombieri { k }),
        FunctionalKind::RogosinskiSum { n } => RadiusProblem::RnEquation { n },
        FunctionalKind::BohrRogosinskiI { p, n } | FunctionalKind::RefinedJ { p, n } => RadiusProblem::y(p, k, n, m0),
        FunctionalKind::RefinedL => RadiusProblem::closed(ClosedFormRadius::RefinedThreeFifths { k }),
        FunctionalKind::RefinedA { p, n } => RadiusProblem::y(p, 1, n, 1),
        FunctionalKind::PowerMajorant { p } => RadiusProblem::closed(ClosedFormRadius::PowerP { p }),
        FunctionalKind::PartialSum { .. } => RadiusProblem::closed(ClosedFormRadius::Rogosinski),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub bracket_width: f64,
    pub unique_on_grid: bool,
}

/// Left-hand side of the radius equation at `r`.
pub fn eval_equation(prob: &RadiusProblem, r: f64) -> Result<f64> {
    prob.validate()?;
    if matches!(prob, RadiusProblem::ClosedForm { .. }) {
        return Err(invalid("closed-form radii have no equation"));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange { r });
    }
    Ok(eval_unchecked(prob, r))
}

fn eval_unchecked(prob: &RadiusProblem, r: f64) -> f64 {
    match *prob {
        RadiusProblem::YEquation { p, k, n, m0 } => {
            let rk = r.powi(k as i32);
            let rm = r.powi(m0 as i32);
            2.0 * rk.powi(n as i32) * (1.0 + rm) - p * (1.0 - rm) * (1.0 - rk)
        }
        RadiusProblem::RnEquation { n } => 2.0 * (1.0 + r) * r.powi(n as i32) - (1.0 - r).powi(2),
        RadiusProblem::RnPrimeEquation { n } => (1.0 + r) * r.powi(n as i32) - (1.0 - r).powi(2),
        RadiusProblem::RapEquation { a, p } => {
            (1.0 - (2.0 - a * a) * r) * (1.0 + a * r).powf(p) - (1.0 - r) * (r + a).powf(p)
        }
        RadiusProblem::ClosedForm { .. } => unreachable!("closed forms have no equation"),
    }
}

pub fn solve_radius(prob: &RadiusProblem, tol: f64) -> Result<RootResult> {
    solve_radius_with_grid(prob, tol, DEFAULT_GRID_CELLS)
}

/// Smallest sign change of the equation on a uniform grid, refined by bisection.
pub fn solve_radius_with_grid(prob: &RadiusProblem, tol: f64, cells: usize) -> Result<RootResult> {
    prob.validate()?;
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance {tol} must be positive")));
    }
    if cells < 2 {
        return Err(invalid("grid needs at least 2 cells"));
    }
    if let RadiusProblem::ClosedForm { radius } = prob {
        let root = radius.value()?;
        return Ok(RootResult { root, residual: 0.0, bracket_width: 0.0, unique_on_grid: true });
    }

    let point = |i: usize| if i == cells { LAST_GRID_POINT } else { i as f64 / cells as f64 };
    let mut first = None;
    let mut changes = 0usize;
    let mut prev = eval_unchecked(prob, 0.0) > 0.0;
    for i in 1..=cells {
        let cur = eval_unchecked(prob, point(i)) > 0.0;
        if cur != prev {
            changes += 1;
            first.get_or_insert(i - 1);
        }
        prev = cur;
    }
    let Some(cell) = first else {
        return Err(Error::NoRootFound { cells });
    };

    let (mut lo, mut hi) = (point(cell), point(cell + 1));
    let lo_positive = eval_unchecked(prob, lo) > 0.0;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (eval_unchecked(prob, mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    Ok(RootResult {
        root,
        residual: eval_unchecked(prob, root),
        bracket_width: hi - lo,
        unique_on_grid: changes == 1,
    })
}

/// Parameter sets `(k, m0, N, p)` of the reference table.
///
/// The third set reads `k = 3, N = 2` in print; only the transposed
/// `k = 2, N = 3` reproduces the tabulated root 0.54271.
pub const TABLE1_PARAMS: [(u32, u32, u32, f64); 8] = [
    (2, 2, 2, 0.12),
    (2, 4, 1, 0.6),
    (2, 3, 3, 0.1),
    (3, 4, 1, 1.2),
    (3, 5, 2, 1.6),
    (7, 3, 1, 2.0),
    (4, 5, 7, 0.19),
    (5, 7, 10, 1.7),
];

/// Roots as printed, to six significant digits.
pub const TABLE1_ROOTS: [f64; 8] = [0.428676, 0.463452, 0.54271, 0.661436, 0.781955, 0.811851, 0.861239, 0.940732];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub k: u32,
    pub m0: u32,
    pub n: u32,
    pub p: f64,
    pub root: f64,
}

impl Table1Row {
    pub fn problem(&self) -> RadiusProblem {
        RadiusProblem::y(self.p, self.k, self.n, self.m0)
    }
}

pub fn table1_problems() -> Vec<RadiusProblem> {
    TABLE1_PARAMS.iter().map(|&(k, m0, n, p)| RadiusProblem::y(p, k, n, m0)).collect()
}

pub fn table1() -> Result<Vec<Table1Row>> {
    table1_with_tolerance(DEFAULT_TOLERANCE)
}

pub fn table1_with_tolerance(tol: f64) -> Result<Vec<Table1Row>> {
    TABLE1_PARAMS
        .iter()
        .map(|&(k, m0, n, p)| {
            let root = solve_radius(&RadiusProblem::y(p, k, n, m0), tol)?.root;
            Ok(Table1Row { k, m0, n, p, root })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub label: String,
    pub r: f64,
    pub y: f64,
}

/// Each equation sampled at `r = i/grid`, `i = 0..grid`.
pub fn figure1_data(probs: &[RadiusProblem], grid: usize) -> Result<Vec<CurvePoint>> {
    if grid < 2 {
        return Err(invalid("grid must be at least 2"));
    }
    let mut out = Vec::with_capacity(probs.len() * grid);
    for prob in probs {
        let label = prob.to_string();
        for i in 0..grid {
            let r = i as f64 / grid as f64;
            out.push(CurvePoint { label: label.clone(), r, y: eval_equation(prob, r)? });
        }
    }
    Ok(out)
}

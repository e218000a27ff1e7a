//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bohr_core::functionals::FunctionalKind;
use bohr_core::multidim::{
    compose_line, verify_theorem, verify_theorem_on_lines, Domain, LineDirection, Theorem, TheoremCheck,
};
use bohr_core::radii::{solve_radius, table1, ClosedFormRadius, RadiusProblem, TABLE1_PARAMS, TABLE1_ROOTS};
use bohr_core::series::{random_disk_point, BoundedFunction, Representation};
use bohr_core::sharpness::{aux_f, aux_f_max, aux_phi, aux_q, aux_q_limit, extremal_value, witness_search};
use bohr_core::verify::{run_trials, run_trials_with, VerificationConfig};
use bohr_core::{Complex64, Error};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1_table() -> Outcome {
    let start = Instant::now();
    let rows = table1().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(rows.len() == 8, || format!("{} rows", rows.len()))?;
    let mut worst = 0f64;
    for (row, expected) in rows.iter().zip(TABLE1_ROOTS) {
        let err = (row.root - expected).abs();
        worst = worst.max(err);
        check(err <= 1e-5, || format!("k={} m0={} N={} p={}: {} vs {expected}", row.k, row.m0, row.n, row.p, row.root))?;
    }
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("8 roots, max error {worst:.2e}, {elapsed:?}"))
}

fn criterion_2_closed_forms() -> Outcome {
    let solve = |p: RadiusProblem| solve_radius(&p, 1e-12).map(|r| r.root).map_err(|e| e.to_string());
    for k in 1..=10u32 {
        let kf = k as f64;
        let cases = [
            (ClosedFormRadius::BohrThird { k }, 3f64.powf(-1.0 / kf)),
            (ClosedFormRadius::Bombieri { k }, 2f64.powf(-1.0 / (2.0 * kf))),
            (ClosedFormRadius::RefinedThreeFifths { k }, 0.6f64.powf(1.0 / kf)),
        ];
        for (c, expected) in cases {
            let got = solve(RadiusProblem::closed(c))?;
            check((got - expected).abs() <= 1e-12, || format!("{c:?}: {got} vs {expected}"))?;
        }
        // Independent identities: r^k = 1/3, r^{2k} = 1/2, r^k = 3/5.
        let third = solve(RadiusProblem::closed(ClosedFormRadius::BohrThird { k }))?;
        check((third.powi(k as i32) - 1.0 / 3.0).abs() <= 1e-12, || format!("3^(-1/{k})"))?;
        let bomb = solve(RadiusProblem::closed(ClosedFormRadius::Bombieri { k }))?;
        check((bomb.powi(2 * k as i32) - 0.5).abs() <= 1e-12, || format!("2^(-1/(2·{k}))"))?;
        let fifths = solve(RadiusProblem::closed(ClosedFormRadius::RefinedThreeFifths { k }))?;
        check((fifths.powi(k as i32) - 0.6).abs() <= 1e-12, || format!("(3/5)^(1/{k})"))?;
    }
    let y = solve(RadiusProblem::y(1.0, 1, 1, 1))?;
    check((y - (5f64.sqrt() - 2.0)).abs() <= 1e-9, || format!("Y root {y}"))?;
    let rnp = solve(RadiusProblem::RnPrimeEquation { n: 1 })?;
    check((rnp - 1.0 / 3.0).abs() <= 1e-9, || format!("R'_1 root {rnp}"))?;
    Ok("k = 1..10 closed forms, sqrt5 - 2, 1/3".into())
}

/// `Y(r)` in plain floating point, written independently of the library.
fn oracle_y(p: f64, k: u32, n: u32, m0: u32, r: f64) -> f64 {
    let a = r.powi((k * n) as i32);
    let s = r.powi(m0 as i32);
    let b = r.powi(k as i32);
    2.0 * a + 2.0 * a * s - p * (1.0 - s - b + s * b)
}

/// Exact sign of `Y(m/q)` with `p` taken as the exact rational value of the f64.
fn exact_sign_y(p: &BigRational, k: u32, n: u32, m0: u32, m: &BigInt, q: &BigInt) -> Sign {
    let kn = k * n;
    let d = (kn + m0).max(k + m0);
    let term = |e: u32| m.pow(e) * q.pow(d - e);
    let positive = (term(kn) + term(kn + m0)) * BigInt::from(2) * p.denom();
    let bracket = term(0) - term(m0) - term(k) + term(k + m0);
    (positive - p.numer() * bracket).sign()
}

/// Smallest sign change on a 10⁶-point grid, then 200 exact bisection steps.
fn oracle_root(p: f64, k: u32, n: u32, m0: u32) -> Result<f64, String> {
    const GRID: u64 = 1_000_000;
    let first = (1..GRID)
        .find(|&i| oracle_y(p, k, n, m0, i as f64 / GRID as f64) > 0.0)
        .ok_or_else(|| format!("oracle found no root for p={p} k={k} N={n} m0={m0}"))?;
    let pr = BigRational::from_float(p).ok_or("p not finite")?;
    let mut q = BigInt::from(GRID);
    let mut lo = BigInt::from(first - 1);
    let mut hi = BigInt::from(first);
    if exact_sign_y(&pr, k, n, m0, &lo, &q) == Sign::Plus || exact_sign_y(&pr, k, n, m0, &hi, &q) != Sign::Plus {
        return Err(format!("oracle bracket lost under exact arithmetic for p={p} k={k} N={n} m0={m0}"));
    }
    let two = BigInt::from(2);
    for _ in 0..200 {
        lo *= &two;
        hi *= &two;
        q *= &two;
        let mid = (&lo + &hi) / &two;
        if exact_sign_y(&pr, k, n, m0, &mid, &q) == Sign::Plus {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = BigRational::new(lo + hi, q * two);
    num_traits::ToPrimitive::to_f64(&root).ok_or_else(|| "root not representable".into())
}

fn criterion_3_oracle() -> Outcome {
    let mut sets: Vec<(f64, u32, u32, u32)> = TABLE1_PARAMS.iter().map(|&(k, m0, n, p)| (p, k, n, m0)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let p = 2.0 - rng.gen_range(0.0..2.0);
        sets.push((p, rng.gen_range(1..=8), rng.gen_range(1..=8), rng.gen_range(1..=8)));
    }
    let mut worst = 0f64;
    for &(p, k, n, m0) in &sets {
        let ours = solve_radius(&RadiusProblem::y(p, k, n, m0), 1e-12).map_err(|e| e.to_string())?.root;
        let oracle = oracle_root(p, k, n, m0)?;
        let err = (ours - oracle).abs();
        worst = worst.max(err);
        check(err <= 1e-6, || format!("p={p} k={k} N={n} m0={m0}: {ours} vs oracle {oracle}"))?;
    }
    Ok(format!("{} parameter sets, max deviation {worst:.2e}", sets.len()))
}

fn suite_kinds() -> Vec<(FunctionalKind, u32, u32)> {
    let mut kinds = Vec::new();
    for k in 1..=3 {
        kinds.push((FunctionalKind::Majorant, k, 1));
        kinds.push((FunctionalKind::ZeroOmittedSum, k, 1));
        kinds.push((FunctionalKind::RefinedL, k, 1));
    }
    for p in [0.5, 1.0, 2.0] {
        for n in 1..=3u32 {
            let (k, m0) = (n, 4 - n);
            kinds.push((FunctionalKind::BohrRogosinskiI { p, n }, k, m0));
            kinds.push((FunctionalKind::RefinedJ { p, n }, k, m0));
        }
    }
    for p in [1.0, 2.0] {
        for n in [1, 3] {
            kinds.push((FunctionalKind::RefinedA { p, n }, 1, 1));
        }
    }
    kinds
}

fn criterion_4_inequalities() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut closest = 0f64;
    let kinds = suite_kinds();
    for (i, &(kind, k, m0)) in kinds.iter().enumerate() {
        let cfg = VerificationConfig::new(kind, k, m0, 10_000, 1000 + i as u64);
        let start = Instant::now();
        let report = run_trials(&cfg).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        closest = closest.max(report.max_value);
        check(report.trials_run == 10_000, || format!("{kind:?}: {} trials", report.trials_run))?;
        check(report.violation_count == 0, || {
            format!("{kind:?} k={k} m0={m0}: {} violations, max {}", report.violation_count, report.max_value)
        })?;
        check(elapsed < Duration::from_secs(60), || format!("{kind:?}: {elapsed:?}"))?;
    }
    Ok(format!("{} suites x 10^4 trials, max value {closest:.9}, slowest {slowest:?}", kinds.len()))
}

fn sharpness_cases() -> Vec<(FunctionalKind, RadiusProblem)> {
    let mut cases = Vec::new();
    for &(k, m0, n, p) in &TABLE1_PARAMS {
        cases.push((FunctionalKind::RefinedJ { p, n }, RadiusProblem::y(p, k, n, m0)));
        cases.push((FunctionalKind::BohrRogosinskiI { p, n }, RadiusProblem::y(p, k, n, m0)));
    }
    for k in 1..=3 {
        cases.push((FunctionalKind::Majorant, RadiusProblem::closed(ClosedFormRadius::BohrThird { k })));
        cases.push((FunctionalKind::ZeroOmittedSum, RadiusProblem::closed(ClosedFormRadius::Bombieri { k })));
        cases.push((FunctionalKind::RefinedL, RadiusProblem::closed(ClosedFormRadius::RefinedThreeFifths { k })));
    }
    cases.push((FunctionalKind::PartialSum { n: 2 }, RadiusProblem::closed(ClosedFormRadius::Rogosinski)));
    for p in [0.5, 1.0, 2.0] {
        cases.push((FunctionalKind::PowerMajorant { p }, RadiusProblem::closed(ClosedFormRadius::PowerP { p })));
    }
    cases
}

fn criterion_5_sharpness() -> Outcome {
    let cases = sharpness_cases();
    for (kind, prob) in &cases {
        let above = witness_search(*kind, prob, 0.01, 1e-4).map_err(|e| format!("{kind:?} {prob}: {e}"))?;
        check(above.exceeded && above.functional_value > 1.0 + bohr_core::EPS_FLOAT, || {
            format!("{kind:?} {prob}: value {}", above.functional_value)
        })?;
        match witness_search(*kind, prob, -0.01, 1e-4) {
            Err(Error::NoWitness { .. }) => {}
            other => return Err(format!("{kind:?} {prob}: below the radius got {other:?}")),
        }
    }
    let eq = extremal_value(FunctionalKind::RefinedL, 1, 1, 1.0 / 3.0, 0.6).map_err(|e| e.to_string())?;
    check((eq.value - 1.0).abs() <= 1e-9 && (eq.total_upper - 1.0).abs() <= 1e-9, || {
        format!("equality case {}", eq.value)
    })?;
    Ok(format!("{} radii witnessed above and clean below; equality case {:.12}", cases.len(), eq.value))
}

fn criterion_6_auxiliary() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for _ in 0..100 {
        let (p, k, n, m0) = (rng.gen_range(0.01..=2.0), rng.gen_range(1..=8), rng.gen_range(1..=8), rng.gen_range(1..=8));
        let r = rng.gen_range(0.0..0.99);
        let phi = aux_phi(p, m0, k, n, 1.0, r);
        check(phi.abs() <= 1e-14, || format!("Phi(1) = {phi}"))?;
    }
    let mut agree = 0;
    for _ in 0..100 {
        let (p, k, n, m0) = (rng.gen_range(0.01..=2.0), rng.gen_range(1..=8), rng.gen_range(1..=8), rng.gen_range(1..=8));
        let r = rng.gen_range(0.01..0.99);
        let y = oracle_y(p, k, n, m0, r);
        let limit = aux_q_limit(p, m0, k, n, r);
        let displayed = (1.0 + r.powi(m0 as i32)).powf(p - 1.0) * y;
        check((limit - displayed).abs() <= 1e-12 * (1.0 + displayed.abs()), || format!("limit {limit} vs {displayed}"))?;
        let near = aux_q(p, m0, k, n, 1.0 - 1e-6, r);
        check((near > 0.0) == (y > 0.0), || format!("sign of Q {near} vs Y {y} at p={p} k={k} N={n} m0={m0} r={r}"))?;
        agree += 1;
    }
    let mut points = 0;
    for i in 1..1000 {
        let r = i as f64 / 1000.0;
        for k in 1..=4 {
            let (a_star, max) = aux_f_max(r, k).map_err(|e| e.to_string())?;
            let rho = r.powi(k as i32);
            let closed = (1.0 + rho) * (5.0 * rho - 3.0) / (4.0 * (1.0 - rho));
            let at = aux_f(a_star, r, k).map_err(|e| e.to_string())?;
            check((at - closed).abs() <= 1e-9 && (max - closed).abs() <= 1e-12, || format!("F max at r={r} k={k}"))?;
            // Concave in a: no grid value exceeds the vertex.
            for j in 0..=200 {
                let a = a_star + (j as f64 - 100.0) * 1e-3;
                check(aux_f(a, r, k).map_err(|e| e.to_string())? <= closed + 1e-12, || format!("F above max at a={a}"))?;
            }
            points += 1;
        }
    }
    Ok(format!("Phi(1) = 0 on 100 sets; Q sign agrees on {agree}/100; F maximum on {points} grid points"))
}

fn random_composed(rng: &mut ChaCha8Rng, dims: usize, zero_constant: bool) -> Result<bohr_core::multidim::HomogeneousExpansion, String> {
    let f = if rng.gen::<bool>() {
        let len = rng.gen_range(1..=8);
        let f = BoundedFunction::random_schur(rng, len);
        match (zero_constant, f.representation()) {
            (true, Representation::SchurSequence { params }) => {
                let mut params = params.clone();
                params.insert(0, Complex64::new(0.0, 0.0));
                BoundedFunction::schur_sequence(params).map_err(|e| e.to_string())?
            }
            _ => f,
        }
    } else {
        let a = rng.gen_range(0.0..1.0);
        if zero_constant {
            BoundedFunction::extremal_fa_star(a).map_err(|e| e.to_string())?
        } else {
            BoundedFunction::extremal_fa(a).map_err(|e| e.to_string())?
        }
    };
    let raw: Vec<Complex64> = (0..dims).map(|_| random_disk_point(rng, 1.0)).collect();
    let l1: f64 = raw.iter().map(|c| c.norm()).sum();
    let b = LineDirection::new(raw.into_iter().map(|c| c / l1).collect()).map_err(|e| e.to_string())?;
    compose_line(&f, &b, 1, 32).map_err(|e| e.to_string())
}

fn theorems() -> [Theorem; 6] {
    [
        Theorem::T2_1,
        Theorem::T2_2,
        Theorem::T2_3 { p: 1.0, n: 2, m0: 1 },
        Theorem::T2_4 { p: 0.5, n: 3, m0: 2 },
        Theorem::T2_4 { p: 2.0, n: 1, m0: 1 },
        Theorem::T2_5,
    ]
}

fn criterion_7_multidim() -> Outcome {
    let mut lines = 0;
    let mut max = 0f64;
    for dims in [2usize, 3] {
        for (t, theorem) in theorems().into_iter().enumerate() {
            for k in 1..=2 {
                let mut rng = ChaCha8Rng::seed_from_u64(700 + 10 * dims as u64 + t as u64 + 100 * k as u64);
                for f_index in 0..20 {
                    let e = random_composed(&mut rng, dims, theorem.needs_zero_constant())?;
                    let check_cfg = TheoremCheck { theorem, k, lines: 50, seed: f_index, margin: 1e-3 };
                    let report = verify_theorem(&e, &check_cfg).map_err(|e| e.to_string())?;
                    lines += report.lines_run;
                    max = max.max(report.max_value);
                    check(report.violations.is_empty(), || {
                        format!("n={dims} {theorem:?} k={k}: {} violations, max {}", report.violations.len(), report.max_value)
                    })?;
                }
            }
        }
        let f = BoundedFunction::extremal_fa(0.99).map_err(|e| e.to_string())?;
        let b = LineDirection::new(vec![Complex64::new(1.0 / dims as f64, 0.0); dims]).map_err(|e| e.to_string())?;
        let e = compose_line(&f, &b, 1, 32).map_err(|e| e.to_string())?;
        let diagonal = LineDirection::normalized(&Domain::Polydisk { dims }, vec![Complex64::new(1.0, 0.0); dims])
            .map_err(|e| e.to_string())?;
        for k in 1..=3 {
            let above = TheoremCheck { theorem: Theorem::T2_1, k, lines: 1, seed: 0, margin: -0.01 };
            let report = verify_theorem_on_lines(&e, &above, std::slice::from_ref(&diagonal)).map_err(|e| e.to_string())?;
            check(!report.violations.is_empty(), || format!("n={dims} k={k}: extremal max {}", report.max_value))?;
        }
    }
    check(lines >= 2 * 6 * 2 * 1000, || format!("{lines} lines"))?;
    Ok(format!("{lines} lines clean (max {max:.9}); a = 0.99 extremal violates above the homothety"))
}

fn criterion_8_determinism() -> Outcome {
    let mut cfg = VerificationConfig::new(FunctionalKind::RefinedJ { p: 1.0, n: 3 }, 2, 2, 2000, 8);
    let a = serde_json::to_string(&run_trials_with(&cfg, true).map_err(|e| e.to_string())?).unwrap();
    let b = serde_json::to_string(&run_trials_with(&cfg, false).map_err(|e| e.to_string())?).unwrap();
    let c = serde_json::to_string(&run_trials_with(&cfg, true).map_err(|e| e.to_string())?).unwrap();
    check(a == b && b == c, || "verify reports differ".into())?;
    cfg.radius_override = Some(0.5);
    cfg.functional = FunctionalKind::Majorant;
    cfg.k = 1;
    let a = serde_json::to_string(&run_trials_with(&cfg, true).map_err(|e| e.to_string())?).unwrap();
    let b = serde_json::to_string(&run_trials_with(&cfg, false).map_err(|e| e.to_string())?).unwrap();
    check(a == b, || "verify reports with violations differ".into())?;

    let prob = RadiusProblem::y(1.2, 3, 1, 4);
    let kind = FunctionalKind::RefinedJ { p: 1.2, n: 1 };
    let s1 = serde_json::to_string(&witness_search(kind, &prob, 0.01, 1e-4).map_err(|e| e.to_string())?).unwrap();
    let s2 = serde_json::to_string(&witness_search(kind, &prob, 0.01, 1e-4).map_err(|e| e.to_string())?).unwrap();
    check(s1 == s2, || "sharpness reports differ".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = random_composed(&mut rng, 3, false)?;
    let check_cfg = TheoremCheck { theorem: Theorem::T2_3 { p: 1.0, n: 1, m0: 2 }, k: 1, lines: 300, seed: 77, margin: 1e-3 };
    let m1 = serde_json::to_string(&verify_theorem(&e, &check_cfg).map_err(|e| e.to_string())?).unwrap();
    let m2 = serde_json::to_string(&verify_theorem(&e, &check_cfg).map_err(|e| e.to_string())?).unwrap();
    check(m1 == m2, || "multidim reports differ".into())?;
    Ok("verify (parallel, serial), sharpness and multidim reports byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 table reproduction", criterion_1_table),
        ("2 closed-form radii", criterion_2_closed_forms),
        ("3 oracle equivalence", criterion_3_oracle),
        ("4 inequality suites", criterion_4_inequalities),
        ("5 sharpness", criterion_5_sharpness),
        ("6 auxiliary functions", criterion_6_auxiliary),
        ("7 several variables", criterion_7_multidim),
        ("8 determinism", criterion_8_determinism),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}

//! Pass/fail experiment batteries with pinned tolerances.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{dirichlet_limit, family_phase_diff, validate_asymptotic, PhaseSpec};
use crate::kernels::oracle::{airy_oracle, bessel_oracle, coulomb_oracle, legendre_cd, weber_oracle};
use crate::kernels::{diag_switch, series_kernel, Anchor, Cutoff, Family, Kernel, KernelSpec};
use crate::quadrature::QuadratureConfig;
use crate::specfun::{legendre_upto, spherical_harmonics_upto};

use super::catalog::lookup;
use super::convergence::{classical_mass, default_config, run_convergence, run_series_convergence, weber_scale};
use super::rl::{riemann_lebesgue_check, RlPhase, RlWave};
use super::{ConvergenceRecord, HarnessError};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub id: String,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Relative perturbation applied to the closed-form Airy kernel before it
    /// is compared with its oracle; zero for a faithful run.
    pub airy_perturbation: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 20_240_601, airy_perturbation: 0.0 }
    }
}

pub const CRITERIA: [&str; 11] = [
    "oracle equivalence",
    "bessel convergence",
    "airy convergence",
    "coulomb convergence",
    "weber ratio stabilization",
    "series kernels",
    "addition theorem",
    "asymptotic exponents",
    "classical sequences",
    "riemann-lebesgue decay",
    "dirichlet half limits",
];

fn outcome(id: String, title: &'static str, started: Instant, body: Result<(bool, String), HarnessError>) -> SuiteOutcome {
    let (pass, detail) = body.unwrap_or_else(|e| (false, format!("error: {e}")));
    SuiteOutcome { id, title, pass, detail, seconds: started.elapsed().as_secs_f64() }
}

/// Runs one numbered acceptance criterion.
pub fn run_criterion(id: usize, opts: &SuiteOptions) -> SuiteOutcome {
    let started = Instant::now();
    let title = CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown");
    let body = match id {
        1 => oracle_equivalence(20, opts),
        2 => bessel_convergence(),
        3 => airy_convergence(),
        4 => coulomb_convergence(),
        5 => weber_ratio(),
        6 => series_suite(&[0, 5, 20], 40),
        7 => addition_theorem(100, opts),
        8 => asymptotic_exponents(),
        9 => classical_sequences(),
        10 => riemann_lebesgue(),
        11 => dirichlet_limits(),
        _ => Err(HarnessError::Domain(format!("no criterion {id}"))),
    };
    outcome(format!("criterion {id}"), title, started, body)
}

/// All acceptance experiments, in order.
pub fn full_suite(opts: &SuiteOptions) -> Vec<SuiteOutcome> {
    (1..=CRITERIA.len()).map(|i| run_criterion(i, opts)).collect()
}

/// Invariant checks and oracle equivalence on small grids.
pub fn fast_suite(opts: &SuiteOptions) -> Vec<SuiteOutcome> {
    let jobs: [(&str, &'static str, fn(&SuiteOptions) -> Result<(bool, String), HarnessError>); 5] = [
        ("oracle", "oracle equivalence (small grid)", |o| oracle_equivalence(4, o)),
        ("series", "series kernels (n <= 5)", |_| series_suite(&[0, 5], 10)),
        ("addition", "addition theorem (20 pairs)", |o| addition_theorem(20, o)),
        ("diagonal", "diagonal branch continuity", |_| diagonal_continuity()),
        ("half-sum", "half-sum target at a jump", |_| half_sum_smoke()),
    ];
    jobs.iter()
        .map(|(id, title, job)| {
            let started = Instant::now();
            outcome(id.to_string(), title, started, job(opts))
        })
        .collect()
}

fn fmt_errors(records: &[ConvergenceRecord]) -> String {
    records
        .iter()
        .map(|r| match &r.failure {
            None => format!("{}:{:.3e}", r.cutoff, r.abs_error),
            Some(f) => format!("{}:failed({f})", r.cutoff),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// First-to-last decrease, every rung converged, last error within `tol`.
fn ladder_ok(records: &[ConvergenceRecord], tol: f64, need_decrease: bool) -> bool {
    let all_ok = records.iter().all(|r| r.failure.is_none());
    let (first, last) = (records[0].abs_error, records[records.len() - 1].abs_error);
    all_ok && last <= tol && (!need_decrease || last < first)
}

fn oracle_equivalence(points: usize, opts: &SuiteOptions) -> Result<(bool, String), HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let closed = |family: Family, a: f64, r: f64, x: f64| -> Result<f64, HarnessError> {
        let spec = KernelSpec::new(family, Cutoff::R(r), Anchor::Point(a));
        Ok(Kernel::new(spec)?.eval(x)?.value)
    };
    let mut worst = [0.0f64; 4];
    for _ in 0..points {
        let nu = [0.0, 0.5, 2.0][rng.gen_range(0..3)];
        let (a, x, r) = (rng.gen_range(0.5..=2.0), rng.gen_range(0.2..=3.0), rng.gen_range(5.0..=20.0));
        let d = closed(Family::BesselHankel { nu }, a, r, x)? - bessel_oracle(nu, a, r, x)?;
        worst[0] = worst[0].max(d.abs());

        let (a, x, r) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0), rng.gen_range(5.0..=20.0));
        let perturbed = closed(Family::Airy, a, r, x)? * (1.0 + opts.airy_perturbation);
        worst[1] = worst[1].max((perturbed - airy_oracle(a, r, x)?).abs());

        let l = rng.gen_range(0..=2u32);
        let (a, x, r) = (rng.gen_range(0.5..=3.0), rng.gen_range(0.5..=3.0), rng.gen_range(5.0..=20.0));
        let d = closed(Family::Coulomb { l }, a, r, x)? - coulomb_oracle(l, a, r, x)?;
        worst[2] = worst[2].max(d.abs());

        let (a, b, r) = (rng.gen_range(-1.5..=1.5), rng.gen_range(-1.5..=1.5), rng.gen_range(5.0..=15.0));
        let d = closed(Family::Weber, a, r, b)? - weber_oracle(a, b, r)?;
        worst[3] = worst[3].max(d.abs());
    }
    let tol = [1e-8, 1e-8, 1e-5, 1e-5];
    let names = ["bessel", "airy", "coulomb", "weber"];
    let mut detail = format!("{points} points/family; max |closed - oracle|:");
    for i in 0..4 {
        write!(detail, " {}={:.2e} (tol {:.0e})", names[i], worst[i], tol[i]).ok();
    }
    Ok((worst.iter().zip(tol).all(|(w, t)| *w <= t), detail))
}

fn bessel_convergence() -> Result<(bool, String), HarnessError> {
    let fam = Family::BesselHankel { nu: 0.0 };
    let ladder = [25.0, 50.0, 100.0, 200.0];
    let smooth = run_convergence(fam, lookup("exp_decay").expect("catalog"), 1.0, &ladder, &default_config())?;
    let step = run_convergence(fam, lookup("step_decay").expect("catalog"), 1.0, &ladder, &default_config())?;
    let pass = ladder_ok(&smooth, 0.02, true) && ladder_ok(&step, 0.03, false);
    let detail = format!("exp_decay [{}]; step_decay [{}]", fmt_errors(&smooth), fmt_errors(&step));
    Ok((pass, detail))
}

fn airy_convergence() -> Result<(bool, String), HarnessError> {
    let rec = run_convergence(Family::Airy, lookup("gauss").expect("catalog"), 0.0, &[25.0, 50.0, 100.0], &default_config())?;
    Ok((ladder_ok(&rec, 0.02, false), format!("gauss [{}]", fmt_errors(&rec))))
}

fn coulomb_convergence() -> Result<(bool, String), HarnessError> {
    let rec = run_convergence(
        Family::Coulomb { l: 0 },
        lookup("exp_decay").expect("catalog"),
        1.0,
        &[30.0, 60.0, 120.0],
        &default_config(),
    )?;
    Ok((ladder_ok(&rec, 0.05, true), format!("exp_decay [{}]", fmt_errors(&rec))))
}

fn weber_ratio() -> Result<(bool, String), HarnessError> {
    let tf = lookup("narrow_gauss").expect("catalog");
    let rec = run_convergence(Family::Weber, tf, 0.0, &[10.0, 20.0, 40.0], &default_config())?;
    if let Some(bad) = rec.iter().find(|r| r.failure.is_some()) {
        return Ok((false, format!("R={} failed: {}", bad.cutoff, bad.failure.as_deref().unwrap_or(""))));
    }
    let phi0 = tf.half_sum(0.0);
    let ratios: Vec<f64> = rec.iter().map(|r| r.computed * weber_scale(0.0) / phi0).collect();
    let n = ratios.len();
    let drift = ((ratios[n - 1] - ratios[n - 2]) / ratios[n - 2]).abs();
    let candidate = PI * SQRT_2;
    let detail = format!(
        "integral/phi(0) at R=10,20,40: {:.4} {:.4} {:.4}; drift {:.2}%; candidates pi*sqrt2 = 2*sqrt2*(pi/2) = {:.4}; \
         measured/candidate = {:.4}; against phi(0-)+phi(0+) the ratio is {:.4}; normalized value {:.4} (target 1)",
        ratios[0],
        ratios[1],
        ratios[2],
        100.0 * drift,
        candidate,
        ratios[n - 1] / candidate,
        ratios[n - 1] / 2.0,
        rec[n - 1].computed / phi0,
    );
    Ok((drift <= 0.10, detail))
}

fn series_suite(orders: &[usize], cd_max: usize) -> Result<(bool, String), HarnessError> {
    let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-12).subdivisions(100_000);
    let families = [
        (Family::LegendreSeries, 0.3),
        (Family::HermiteSeries, 0.7),
        (Family::LaguerreSeries { alpha: 0.5 }, 1.5),
    ];
    let one = lookup("constant").expect("catalog");
    let mut mass_dev = 0.0f64;
    let mut poly_dev = 0.0f64;
    for (fam, x) in families {
        for r in run_series_convergence(fam, one, x, orders, &cfg)? {
            mass_dev = mass_dev.max(if r.failure.is_some() { f64::INFINITY } else { r.abs_error });
        }
        for (id, degree) in [("square", 2), ("cubic", 3)] {
            let ns: Vec<usize> = orders.iter().copied().filter(|n| *n >= degree).collect();
            if ns.is_empty() {
                continue;
            }
            for r in run_series_convergence(fam, lookup(id).expect("catalog"), x, &ns, &cfg)? {
                poly_dev = poly_dev.max(if r.failure.is_some() { f64::INFINITY } else { r.abs_error });
            }
        }
    }
    let mut cd_dev = 0.0f64;
    let mut n = 0;
    while n <= cd_max {
        for (t, x) in [(-0.93, 0.41), (0.2, 0.2), (0.77, -0.05), (0.5, 0.52), (-0.999, 0.999)] {
            let spec = KernelSpec::new(Family::LegendreSeries, Cutoff::N(n), Anchor::Point(x));
            let d = series_kernel(&spec, t, x)? - legendre_cd(n, t, x)?;
            cd_dev = cd_dev.max(d.abs());
        }
        n = if n < 5 { n + 1 } else { n + 5 };
    }
    let pass = mass_dev <= 1e-9 && poly_dev <= 1e-9 && cd_dev <= 1e-10;
    let detail = format!(
        "orders {orders:?}: unit mass dev {mass_dev:.2e}, polynomial dev {poly_dev:.2e}; Christoffel-Darboux dev {cd_dev:.2e} (n <= {cd_max})"
    );
    Ok((pass, detail))
}

fn addition_theorem(pairs: usize, opts: &SuiteOptions) -> Result<(bool, String), HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let kmax = 10;
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let (t1, p1) = (rng.gen_range(0.0..=PI), rng.gen_range(-PI..=PI));
        let (t2, p2) = (rng.gen_range(0.0..=PI), rng.gen_range(-PI..=PI));
        let y1 = spherical_harmonics_upto(kmax, t1, p1).map_err(crate::kernels::KernelError::from)?;
        let y2 = spherical_harmonics_upto(kmax, t2, p2).map_err(crate::kernels::KernelError::from)?;
        let cg = (t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos()).clamp(-1.0, 1.0);
        let p = legendre_upto(kmax, cg).map_err(crate::kernels::KernelError::from)?;
        for k in 0..=kmax {
            let range = k * k..(k + 1) * (k + 1);
            let sum: Complex64 = y1[range.clone()].iter().zip(&y2[range]).map(|(a, b)| a * b.conj()).sum();
            let rhs = (2 * k + 1) as f64 / (4.0 * PI) * p[k];
            worst = worst.max((sum - rhs).norm());
        }
    }
    Ok((worst <= 1e-12, format!("{pairs} angle pairs, k <= {kmax}: max deviation {worst:.2e}")))
}

fn asymptotic_exponents() -> Result<(bool, String), HarnessError> {
    let runs = [
        (PhaseSpec::Bessel { nu: 0.0 }, 1.0, 20.0, 200.0),
        (PhaseSpec::Coulomb { l: 0 }, 1.0, 20.0, 200.0),
        (PhaseSpec::Airy, 0.0, 5.0, 50.0),
        (PhaseSpec::Weber, 0.5, 5.0, 50.0),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (spec, p, lo, hi) in runs {
        let rep = validate_asymptotic(spec, p, lo, hi)?;
        pass &= rep.pass;
        parts.push(format!(
            "{} fitted {:.3} vs {} ({})",
            spec.name(),
            rep.fitted_exponent,
            rep.expected_exponent,
            if rep.pass { "ok" } else { "FAIL" }
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn classical_sequences() -> Result<(bool, String), HarnessError> {
    const NOISE_FLOOR: f64 = 1e-12;
    let tf = lookup("gauss").expect("catalog");
    let ladder = [1e2, 1e3, 1e4];
    let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-12).subdivisions(400_000);
    let mut pass = true;
    let mut parts = Vec::new();
    for fam in [Family::ClassicalGaussian, Family::ClassicalCauchy, Family::ClassicalSinc] {
        let rec = run_convergence(fam, tf, 0.5, &ladder, &cfg)?;
        let monotone = rec.iter().all(|r| r.failure.is_none())
            && rec
                .windows(2)
                .all(|w| w[1].abs_error < w[0].abs_error || w[1].abs_error.max(w[0].abs_error) <= NOISE_FLOOR);
        pass &= monotone;
        parts.push(format!("{} [{}]", fam.name(), fmt_errors(&rec)));
    }
    let mut mass_dev = 0.0f64;
    for n in ladder {
        let m = classical_mass(Family::ClassicalCauchy, n, 0.5)?;
        mass_dev = mass_dev.max((m.value - 1.0).abs());
    }
    pass &= mass_dev <= 1e-10;
    parts.push(format!("cauchy mass dev {mass_dev:.2e}"));
    Ok((pass, parts.join("; ")))
}

fn riemann_lebesgue() -> Result<(bool, String), HarnessError> {
    let wide = [25.0, 50.0, 100.0, 200.0];
    let line = (f64::NEG_INFINITY, f64::INFINITY);
    let cases: [(&str, RlWave, RlPhase, (f64, f64), &[f64]); 5] = [
        ("unit_box", RlWave::Sin, RlPhase::Family(PhaseSpec::Coulomb { l: 0 }), (1.0, 2.0), &wide),
        ("ramp", RlWave::Sin, RlPhase::Linear, (0.0, 1.0), &wide),
        ("gauss", RlWave::Cos, RlPhase::Linear, line, &[2.5, 5.0, 10.0]),
        ("exp_decay", RlWave::Cos, RlPhase::Family(PhaseSpec::Bessel { nu: 0.0 }), (0.0, f64::INFINITY), &wide),
        ("gauss", RlWave::Sin, RlPhase::Family(PhaseSpec::Airy), line, &[25.0, 50.0, 100.0]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (id, wave, ph, interval, rs) in cases {
        let rows = riemann_lebesgue_check(wave, ph, lookup(id).expect("catalog"), interval, rs)?;
        let (first, last) = (rows[0].value.abs(), rows[rows.len() - 1].value.abs());
        let ok = last <= 0.2 * first;
        pass &= ok;
        parts.push(format!("{id}: |I| {first:.3e} -> {last:.3e}{}", if ok { "" } else { " FAIL" }));
    }
    Ok((pass, parts.join("; ")))
}

fn dirichlet_limits() -> Result<(bool, String), HarnessError> {
    let runs: [(PhaseSpec, f64, f64, &[f64]); 3] = [
        (PhaseSpec::Bessel { nu: 0.0 }, 1.0, 0.5, &[25.0, 50.0, 100.0, 200.0]),
        (PhaseSpec::Coulomb { l: 0 }, 1.0, 0.2, &[50.0, 100.0, 200.0]),
        (PhaseSpec::Airy, 0.0, 0.5, &[25.0, 50.0, 100.0]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (spec, a, eta, ladder) in runs {
        let sides = dirichlet_limit(family_phase_diff(spec, a), a, eta, ladder)?;
        let last = sides[sides.len() - 1];
        let ok = (last.left - 0.5).abs() <= 0.05 && (last.right - 0.5).abs() <= 0.05;
        pass &= ok;
        parts.push(format!(
            "{} R={}: left {:.4}, right {:.4}{}",
            spec.name(),
            last.cutoff,
            last.left,
            last.right,
            if ok { "" } else { " FAIL" }
        ));
    }
    Ok((pass, parts.join("; ")))
}

/// Off-diagonal formula just outside the switch window against the diagonal
/// branch just inside it.
fn diagonal_continuity() -> Result<(bool, String), HarnessError> {
    let cases = [
        (Family::BesselHankel { nu: 0.5 }, 1.3, 12.0),
        (Family::Coulomb { l: 1 }, 0.8, 10.0),
        (Family::Airy, -0.4, 15.0),
        (Family::Weber, 0.3, 8.0),
    ];
    let mut worst = 0.0f64;
    for (fam, a, r) in cases {
        let k = Kernel::new(KernelSpec::new(fam, Cutoff::R(r), Anchor::Point(a)))?;
        let h = diag_switch(a);
        let inside = k.eval(a + 0.999 * h)?;
        let outside = k.eval(a + 1.001 * h)?;
        if !inside.near_diagonal || outside.near_diagonal {
            return Ok((false, format!("{fam}: diagonal branch selection is wrong")));
        }
        let rel = (inside.value - outside.value).abs() / outside.value.abs().max(1.0);
        worst = worst.max(rel);
    }
    Ok((worst <= 1e-6, format!("max relative jump across the switch {worst:.2e}")))
}

fn half_sum_smoke() -> Result<(bool, String), HarnessError> {
    let tf = lookup("step_decay").expect("catalog");
    let rec = run_convergence(Family::BesselHankel { nu: 0.0 }, tf, 1.0, &[50.0], &default_config())?;
    let r = &rec[0];
    Ok((
        r.failure.is_none() && r.abs_error <= 0.05,
        format!("bessel step_decay R=50: computed {:.4}, target {:.4}", r.computed, r.target),
    ))
}

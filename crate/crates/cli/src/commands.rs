use delta_kernels::asymptotics::{validate_asymptotic, AsymptoticError, PhaseSpec};
use delta_kernels::config::{parse_config, ConfigAnchor, ExperimentConfig, OutputFormat};
use delta_kernels::harness::suites::{fast_suite, run_criterion, SuiteOptions, SuiteOutcome, CRITERIA};
use delta_kernels::harness::{
    default_config, lookup, lookup_spherical, riemann_lebesgue_check, run_convergence, run_series_convergence,
    run_spherical_convergence, ConvergenceRecord, HarnessError, RlPhase, RlWave,
};
use delta_kernels::kernels::{Anchor, Cutoff, Family, Kernel, KernelError, KernelSpec, KernelValue};
use rayon::prelude::*;

use crate::output;
use crate::{
    AsymptoticFamily, AsymptoticsArgs, ConvergeArgs, Failure, KernelEvalArgs, Level, PhaseName, RlArgs,
    SelftestArgs, Wave,
};

fn kernel_failure(e: KernelError) -> Failure {
    match e {
        KernelError::Domain(m) => Failure::Usage(m),
        other => Failure::Numerical(other.to_string()),
    }
}

fn harness_failure(e: HarnessError) -> Failure {
    match e {
        HarnessError::Hypothesis(_) | HarnessError::Domain(_) => Failure::Usage(e.to_string()),
        HarnessError::Kernel(k) => kernel_failure(k),
        HarnessError::Asymptotic(a) => asymptotic_failure(a),
    }
}

fn asymptotic_failure(e: AsymptoticError) -> Failure {
    match e {
        AsymptoticError::Domain(m) => Failure::Usage(m),
        other => Failure::Numerical(other.to_string()),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &Family) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{} needs --{flag}", family.name())))
}

fn need_points(v: &[f64], flag: &str, family: &Family) -> Result<Vec<f64>, Failure> {
    if v.is_empty() {
        return Err(Failure::Usage(format!("{} needs at least one --{flag}", family.name())));
    }
    Ok(v.to_vec())
}

fn order(n: f64, family: &Family) -> Result<usize, Failure> {
    if n >= 0.0 && n.fract() == 0.0 && n <= 1e6 {
        Ok(n as usize)
    } else {
        Err(Failure::Usage(format!("{} needs a non-negative integer --n, got {n}", family.name())))
    }
}

pub fn kernel_eval(args: &KernelEvalArgs) -> Result<(), Failure> {
    let family = Family::parse(&args.family, args.nu, args.l, args.alpha).map_err(kernel_failure)?;
    // (spec, label of the evaluation point, evaluator input)
    let (spec, points): (KernelSpec, Vec<(String, f64, f64)>) = match family {
        Family::SphericalSeries => {
            let n = order(need(args.n, "n", &family)?, &family)?;
            let anchor = Anchor::Angles {
                theta: need(args.theta1, "theta1", &family)?,
                phi: need(args.phi1, "phi1", &family)?,
            };
            let (t2, p2) = (need(args.theta2, "theta2", &family)?, need(args.phi2, "phi2", &family)?);
            (KernelSpec::new(family, Cutoff::N(n), anchor), vec![(format!("{t2};{p2}"), t2, p2)])
        }
        f if f.is_series() => {
            let n = order(need(args.n, "n", &family)?, &family)?;
            let xs = need_points(&args.x, "x", &family)?;
            if xs.len() != 1 {
                return Err(Failure::Usage("series kernels take exactly one --x (the anchor)".into()));
            }
            let ts = need_points(&args.t, "t", &family)?;
            let spec = KernelSpec::new(family, Cutoff::N(n), Anchor::Point(xs[0]));
            (spec, ts.into_iter().map(|t| (t.to_string(), t, 0.0)).collect())
        }
        _ => {
            let a = need(args.a, "a", &family)?;
            let cutoff = if family.is_integral() {
                need(args.r, "R", &family)?
            } else {
                need(args.n, "n", &family)?
            };
            let xs = need_points(&args.x, "x", &family)?;
            let spec = KernelSpec::new(family, Cutoff::R(cutoff), Anchor::Point(a));
            (spec, xs.into_iter().map(|x| (x.to_string(), x, 0.0)).collect())
        }
    };
    let kernel = Kernel::new(spec).map_err(kernel_failure)?;
    let mut rows = Vec::with_capacity(points.len());
    for (label, p, q) in points {
        let v: KernelValue = if family == Family::SphericalSeries {
            kernel.eval_angles(p, q)
        } else {
            kernel.eval(p)
        }
        .map_err(kernel_failure)?;
        rows.push((label, v));
    }
    println!("family\tparams\tcutoff\tpoint\tvalue\tnear_diagonal\tabs_error_estimate");
    for (label, v) in rows {
        println!(
            "{}\t{}\t{}\t{label}\t{}\t{}\t{:.3e}",
            family.name(),
            family.params(),
            spec.cutoff,
            v.value,
            v.near_diagonal,
            v.abs_error_estimate
        );
    }
    Ok(())
}

fn run_one(cfg: &ExperimentConfig, cutoff: f64) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    let mut q = default_config();
    if let Some(t) = cfg.abs_tol {
        q.abs_tol = t;
    }
    if let Some(t) = cfg.rel_tol {
        q.rel_tol = t;
    }
    if let Some(n) = cfg.max_subdivisions {
        q.max_subdivisions = n;
    }
    let id = cfg.test_function.as_str();
    let unknown = || HarnessError::Domain(format!("unknown test function '{id}'"));
    match (cfg.family, cfg.anchor) {
        (Family::SphericalSeries, ConfigAnchor::Angles { theta, phi }) => {
            let sf = lookup_spherical(id).ok_or_else(unknown)?;
            run_spherical_convergence(sf, theta, phi, &[cutoff as usize], &q)
        }
        (f, ConfigAnchor::Point(a)) if f.is_series() => {
            run_series_convergence(f, lookup(id).ok_or_else(unknown)?, a, &[cutoff as usize], &q)
        }
        (f, ConfigAnchor::Point(a)) => run_convergence(f, lookup(id).ok_or_else(unknown)?, a, &[cutoff], &q),
        _ => Err(HarnessError::Domain("anchor kind does not match the family".into())),
    }
}

pub fn converge(args: &ConvergeArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;
    // Rungs are independent; results come back in config order.
    let rungs: Vec<Result<Vec<ConvergenceRecord>, HarnessError>> =
        cfg.cutoffs.par_iter().map(|&c| run_one(&cfg, c)).collect();
    let mut records = Vec::with_capacity(cfg.cutoffs.len());
    for r in rungs {
        records.extend(r.map_err(harness_failure)?);
    }
    let text = match cfg.output {
        OutputFormat::Json => output::json(&records, cfg.timing).map_err(|e| Failure::Numerical(e.to_string()))?,
        OutputFormat::Csv => {
            output::csv(&records, cfg.timing, &mut std::io::stderr()).map_err(|e| Failure::Numerical(e.to_string()))?
        }
    };
    println!("{}", text.trim_end());
    if records.iter().any(|r| r.failure.is_none()) {
        Ok(())
    } else {
        Err(Failure::Numerical("no cutoff produced a result".into()))
    }
}

pub fn validate_asymptotics(args: &AsymptoticsArgs) -> Result<(), Failure> {
    let spec = match args.family {
        AsymptoticFamily::Bessel => PhaseSpec::Bessel { nu: args.nu },
        AsymptoticFamily::Coulomb => PhaseSpec::Coulomb { l: args.l },
        AsymptoticFamily::Airy => PhaseSpec::Airy,
        AsymptoticFamily::Weber => PhaseSpec::Weber,
    };
    let report = validate_asymptotic(spec, args.param, args.t_lo, args.t_hi).map_err(asymptotic_failure)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Tests)
    }
}

pub fn rl_check(args: &RlArgs) -> Result<(), Failure> {
    let psi = lookup(&args.psi).ok_or_else(|| Failure::Usage(format!("unknown test function '{}'", args.psi)))?;
    let wave = match args.wave {
        Wave::Sin => RlWave::Sin,
        Wave::Cos => RlWave::Cos,
    };
    let phase = match args.phase {
        PhaseName::Linear => RlPhase::Linear,
        PhaseName::Bessel => RlPhase::Family(PhaseSpec::Bessel { nu: args.nu }),
        PhaseName::Coulomb => RlPhase::Family(PhaseSpec::Coulomb { l: args.l }),
        PhaseName::Airy => RlPhase::Family(PhaseSpec::Airy),
        PhaseName::Weber => RlPhase::Family(PhaseSpec::Weber),
    };
    let rows = riemann_lebesgue_check(wave, phase, psi, (args.lo, args.hi), &args.r).map_err(harness_failure)?;
    println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
    Ok(())
}

fn print_outcome(o: &SuiteOutcome) {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    println!("{verdict}  {} [{}] ({:.1} s): {}", o.id, o.title, o.seconds, o.detail);
}

pub fn selftest(args: &SelftestArgs) -> Result<(), Failure> {
    let opts = SuiteOptions {
        seed: args.seed,
        airy_perturbation: if args.perturb_airy { 1e-3 } else { 0.0 },
    };
    let outcomes = match args.level {
        Level::Fast => fast_suite(&opts),
        Level::Full => (1..=CRITERIA.len())
            .into_par_iter()
            .map(|i| run_criterion(i, &opts))
            .collect(),
    };
    for o in &outcomes {
        print_outcome(o);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("{} of {} suites passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Tests)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_parsing() {
        let f = Family::LegendreSeries;
        assert_eq!(order(4.0, &f).unwrap(), 4);
        assert!(order(2.5, &f).is_err());
        assert!(order(-1.0, &f).is_err());
    }
}

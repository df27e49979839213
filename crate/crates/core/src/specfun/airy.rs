use std::f64::consts::PI;

use super::{EvalResult, Method, SpecfunError};

const EPS: f64 = f64::EPSILON;
const C1: f64 = 0.355_028_053_887_817_239;
const C2: f64 = 0.258_819_403_792_806_798;

// Maclaurin series is used on [SERIES_LO, SERIES_HI]; asymptotic expansions
// for |z| >= ASYMPTOTIC. In between, values are continued from the nearer
// asymptotic anchor by Taylor stepping of Ai'' = z Ai.
const SERIES_LO: f64 = -5.0;
const SERIES_HI: f64 = 2.0;
const ASYMPTOTIC: f64 = 9.0;

pub fn airy_ai(z: f64) -> Result<EvalResult, SpecfunError> {
    Ok(airy_pair(z)?.0)
}

pub fn airy_ai_prime(z: f64) -> Result<EvalResult, SpecfunError> {
    Ok(airy_pair(z)?.1)
}

/// Ai(z) and Ai'(z).
pub fn airy_pair(z: f64) -> Result<(EvalResult, EvalResult), SpecfunError> {
    if !z.is_finite() {
        return Err(SpecfunError::Domain(format!("airy argument {z}")));
    }
    let (ai, aip, err, method) = if (SERIES_LO..=SERIES_HI).contains(&z) {
        let (a, b, e) = maclaurin(z);
        (a, b, e, Method::Series)
    } else if z.abs() >= ASYMPTOTIC {
        let (a, b, e) = asymptotic(z);
        (a, b, e, Method::Asymptotic)
    } else {
        let anchor = ASYMPTOTIC.copysign(z);
        let (a0, b0, _) = asymptotic(anchor);
        let (a, b) = taylor_continue(anchor, a0, b0, z);
        let e = 32.0 * EPS * (a.abs() + b.abs());
        (a, b, e, Method::Ode)
    };
    Ok((
        EvalResult::new(ai, err, method),
        EvalResult::new(aip, err * z.abs().sqrt().max(1.0), method),
    ))
}

fn maclaurin(z: f64) -> (f64, f64, f64) {
    let z3 = z * z * z;
    let mut f = 1.0;
    let mut g = z;
    let mut fp = 0.0;
    let mut gp = 1.0;
    let (mut ft, mut gt) = (1.0_f64, z);
    let (mut fpt, mut gpt) = (0.5 * z * z, 1.0_f64);
    let mut peak = C1 + C2 * z.abs();
    let mut peak_p = C2;
    for k in 1..200 {
        let kf = k as f64;
        ft *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        gt *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        if k >= 2 {
            fpt *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
        }
        gpt *= z3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        f += ft;
        g += gt;
        fp += fpt;
        gp += gpt;
        peak = peak.max(C1 * ft.abs() + C2 * gt.abs());
        peak_p = peak_p.max(C1 * fpt.abs() + C2 * gpt.abs());
        let small = ft.abs() + gt.abs() + fpt.abs() + gpt.abs();
        if small <= 0.01 * EPS * (f.abs() + g.abs() + fp.abs() + gp.abs()) || small == 0.0 {
            break;
        }
    }
    let ai = C1 * f - C2 * g;
    let aip = C1 * fp - C2 * gp;
    (ai, aip, 4.0 * EPS * peak.max(peak_p))
}

fn asymptotic(z: f64) -> (f64, f64, f64) {
    let t = z.abs();
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let quarter = t.powf(0.25);
    let mut u = 1.0_f64;
    let mut terms_u: Vec<f64> = vec![1.0];
    let mut terms_v: Vec<f64> = vec![1.0];
    for k in 1..100 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf)
            / zeta;
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let prev = terms_u.last().unwrap().abs().max(terms_v.last().unwrap().abs());
        if u.abs().max(v.abs()) > prev {
            break;
        }
        terms_u.push(u);
        terms_v.push(v);
        if u.abs().max(v.abs()) < 0.01 * EPS {
            break;
        }
    }
    let last = terms_u.last().unwrap().abs().max(terms_v.last().unwrap().abs());
    if z > 0.0 {
        if zeta > 740.0 {
            return (0.0, 0.0, 0.0);
        }
        let alt = |terms: &[f64]| {
            terms
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, c)| acc + if k % 2 == 0 { *c } else { -*c })
        };
        let e = (-zeta).exp() / (2.0 * PI.sqrt());
        let ai = e / quarter * alt(&terms_u);
        let aip = -e * quarter * alt(&terms_v);
        (ai, aip, (ai.abs() + EPS * e) * (4.0 * EPS + last))
    } else {
        let split = |terms: &[f64]| {
            let mut even = 0.0;
            let mut odd = 0.0;
            for (k, c) in terms.iter().enumerate().rev() {
                let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                if k % 2 == 0 {
                    even += sign * c;
                } else {
                    odd += sign * c;
                }
            }
            (even, odd)
        };
        let theta = zeta + 0.25 * PI;
        let (s, c) = theta.sin_cos();
        let (ue, uo) = split(&terms_u);
        let (ve, vo) = split(&terms_v);
        let amp = 1.0 / PI.sqrt();
        let ai = amp / quarter * (s * ue - c * uo);
        let aip = -amp * quarter * (c * ve + s * vo);
        // Phase rounding grows with zeta.
        let err = amp / quarter * (4.0 * EPS + last + EPS * zeta);
        (ai, aip, err)
    }
}

/// Continues (y, y') of y'' = z y from z0 to z with unit-or-smaller steps.
fn taylor_continue(z0: f64, y0: f64, yp0: f64, z: f64) -> (f64, f64) {
    let steps = (z - z0).abs().ceil().max(1.0) as usize;
    let h = (z - z0) / steps as f64;
    let (mut y, mut yp) = (y0, yp0);
    let mut zc = z0;
    for _ in 0..steps {
        let mut a_prev2 = 0.0; // a_{n-1}
        let mut a_n = y; // a_n
        let mut a_n1 = yp; // a_{n+1}
        let mut sum_y = y + yp * h;
        let mut sum_yp = yp;
        let mut hp = h; // h^(n+1)
        let scale = y.abs() + yp.abs();
        let mut quiet = 0;
        for n in 0..200 {
            let nf = n as f64;
            let a_n2 = (zc * a_n + a_prev2) / ((nf + 2.0) * (nf + 1.0));
            let term_yp = (nf + 2.0) * a_n2 * hp;
            hp *= h;
            let term_y = a_n2 * hp;
            sum_y += term_y;
            sum_yp += term_yp;
            if term_y.abs() + term_yp.abs() <= 1e-3 * EPS * scale {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            a_prev2 = a_n;
            a_n = a_n1;
            a_n1 = a_n2;
        }
        y = sum_y;
        yp = sum_yp;
        zc += h;
    }
    (y, yp)
}

use crate::specfun::{self, CoulombWave};

use super::{diag_switch, AnchorData, Family, Kernel, KernelError, KernelSpec, KernelValue};

const EPS: f64 = f64::EPSILON;

fn expect(spec: &KernelSpec, want: fn(&Family) -> bool, name: &str) -> Result<Kernel, KernelError> {
    if !want(&spec.family) {
        return Err(KernelError::Domain(format!("expected a {name} spec, got {}", spec.family)));
    }
    Kernel::new(*spec)
}

/// x * int_0^R J_nu(xt) J_nu(at) t dt in closed form.
pub fn bessel_kernel_closed(spec: &KernelSpec, x: f64) -> Result<KernelValue, KernelError> {
    expect(spec, |f| matches!(f, Family::BesselHankel { .. }), "bessel")?.eval(x)
}

/// int_0^R s(x,l;r) s(a,l;r) dr in closed form.
pub fn coulomb_kernel_closed(spec: &KernelSpec, x: f64) -> Result<KernelValue, KernelError> {
    expect(spec, |f| matches!(f, Family::Coulomb { .. }), "coulomb")?.eval(x)
}

/// int_{-R}^inf Ai(t-x) Ai(t-a) dt in closed form.
pub fn airy_kernel_closed(spec: &KernelSpec, x: f64) -> Result<KernelValue, KernelError> {
    expect(spec, |f| matches!(f, Family::Airy), "airy")?.eval(x)
}

/// int_{-R}^R W(a,x) W(b,x) dx in closed form, as a function of b.
pub fn weber_kernel_closed(spec: &KernelSpec, b: f64) -> Result<KernelValue, KernelError> {
    expect(spec, |f| matches!(f, Family::Weber), "weber")?.eval(b)
}

/// N(a + d) / d for a numerator with N(a) = 0, from samples at a +- h and
/// a +- h/2. The first derivative is extrapolated to O(h^4) unless `slope`
/// supplies it exactly; the second and third derivatives carry the value
/// across the window.
fn near_diagonal<F>(
    mut num: F,
    a: f64,
    d: f64,
    h: f64,
    slope: Option<f64>,
) -> Result<(f64, f64), KernelError>
where
    F: FnMut(f64) -> Result<f64, KernelError>,
{
    let (p1, m1) = (num(a + h)?, num(a - h)?);
    let (p2, m2) = (num(a + 0.5 * h)?, num(a - 0.5 * h)?);
    let (o1, o2) = (0.5 * (p1 - m1), 0.5 * (p2 - m2));
    let (e1, e2) = (0.5 * (p1 + m1), 0.5 * (p2 + m2));
    let d1_fd = (8.0 * o2 - o1) / (3.0 * h);
    let d2 = (16.0 * e2 - e1) / (1.5 * h * h);
    let d3 = 8.0 * (o1 - 2.0 * o2) / (h * h * h);
    let d1 = slope.unwrap_or(d1_fd);
    let value = d1 + 0.5 * d2 * d + d3 * d * d / 6.0;
    let fd_err = match slope {
        Some(s) => 1e-3 * (s - d1_fd).abs(),
        None => 0.1 * (d1_fd - 2.0 * o2 / h).abs(),
    };
    let round = EPS * (p1.abs() + m1.abs() + p2.abs() + m2.abs()) / h;
    Ok((value, fd_err + round + 4.0 * EPS * value.abs()))
}

fn diag_step(a: f64, floor: Option<f64>) -> f64 {
    let h = 10.0 * diag_switch(a);
    match floor {
        Some(limit) => h.min(0.5 * limit),
        None => h,
    }
}

pub(super) fn bessel_eval(data: &AnchorData, x: f64) -> Result<KernelValue, KernelError> {
    let AnchorData::Bessel { nu, a, r, ja, jpa, ja_err, diag } = *data else {
        unreachable!("dispatch")
    };
    if !(x >= 0.0) || !x.is_finite() {
        return Err(KernelError::Domain(format!("bessel kernel needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(KernelValue::plain(0.0, 0.0));
    }
    let num = |y: f64| -> Result<(f64, f64), KernelError> {
        let (j, jp) = specfun::bessel_j_pair(nu, y * r)?;
        let t1 = a * r * j.value * jpa;
        let t2 = y * r * ja * jp.value;
        let err = a * r * (j.abs_error_estimate * jpa.abs() + j.value.abs() * ja_err)
            + y * r * (jp.abs_error_estimate * ja.abs() + jp.value.abs() * ja_err)
            + EPS * (t1.abs() + t2.abs());
        Ok((t1 - t2, err))
    };
    let d = x - a;
    if d.abs() < diag_switch(a) {
        let h = diag_step(a, Some(a));
        let (g, err) = near_diagonal(|y| Ok(num(y)?.0), a, d, h, Some(2.0 * diag))?;
        let f = x / (x + a);
        return Ok(KernelValue {
            value: f * g,
            near_diagonal: true,
            abs_error_estimate: f * err,
        });
    }
    let (n, err) = num(x)?;
    let f = x / ((x + a) * d);
    Ok(KernelValue::plain(f * n, f * err))
}

fn coulomb_at(x: f64, l: u32, r: f64) -> Result<(f64, f64), KernelError> {
    Ok(CoulombWave::new(x, l, r)?.eval(r)?)
}

pub(super) fn coulomb_eval(data: &AnchorData, x: f64) -> Result<KernelValue, KernelError> {
    let AnchorData::Coulomb { l, a, r, sa, spa } = *data else {
        unreachable!("dispatch")
    };
    if !(x > 0.0) || !x.is_finite() {
        return Err(KernelError::Domain(format!("coulomb kernel needs x > 0, got {x}")));
    }
    // Normalization is good to ~1e-10 relative; that dominates rounding.
    let num = |y: f64| -> Result<(f64, f64), KernelError> {
        let (s, sp) = coulomb_at(y, l, r)?;
        let (t1, t2) = (s * spa, sp * sa);
        Ok((t1 - t2, 2e-10 * (t1.abs() + t2.abs())))
    };
    let d = x - a;
    if d.abs() < diag_switch(a) {
        let h = diag_step(a, Some(a));
        let (g, err) = near_diagonal(|y| Ok(num(y)?.0), a, d, h, None)?;
        return Ok(KernelValue {
            value: g,
            near_diagonal: true,
            abs_error_estimate: err + 2e-10 * g.abs(),
        });
    }
    let (n, err) = num(x)?;
    Ok(KernelValue::plain(n / d, err / d.abs()))
}

pub(super) fn airy_eval(data: &AnchorData, x: f64) -> Result<KernelValue, KernelError> {
    let AnchorData::Airy { a, r, ai, aip, err: anchor_err } = *data else {
        unreachable!("dispatch")
    };
    if !x.is_finite() {
        return Err(KernelError::Domain(format!("airy kernel argument {x}")));
    }
    let num = |y: f64| -> Result<(f64, f64), KernelError> {
        let (u, up) = specfun::airy_pair(-r - y)?;
        let t1 = up.value * ai;
        let t2 = u.value * aip;
        let err = up.abs_error_estimate * ai.abs()
            + u.abs_error_estimate * aip.abs()
            + anchor_err * (u.value.abs() + up.value.abs())
            + EPS * (t1.abs() + t2.abs());
        Ok((t1 - t2, err))
    };
    let d = x - a;
    if d.abs() < diag_switch(a) {
        // int_{z0}^inf Ai^2 = Ai'(z0)^2 - z0 Ai(z0)^2.
        let z0 = -r - a;
        let exact = aip * aip - z0 * ai * ai;
        let h = diag_step(a, None);
        let (g, err) = near_diagonal(|y| Ok(num(y)?.0), a, d, h, Some(exact))?;
        return Ok(KernelValue {
            value: g,
            near_diagonal: true,
            abs_error_estimate: err,
        });
    }
    let (n, err) = num(x)?;
    Ok(KernelValue::plain(n / d, err / d.abs()))
}

pub(super) fn weber_eval(data: &AnchorData, b: f64) -> Result<KernelValue, KernelError> {
    let AnchorData::Weber { a, r, right, left, err: anchor_err } = *data else {
        unreachable!("dispatch")
    };
    if !(b.abs() <= specfun::WEBER_A_MAX) {
        return Err(KernelError::Domain(format!(
            "weber kernel needs |b| <= {}, got {b}",
            specfun::WEBER_A_MAX
        )));
    }
    let num = |c: f64| -> Result<(f64, f64), KernelError> {
        let (w, wp) = specfun::weber_pair(c, r)?;
        let (wl, wpl) = specfun::weber_pair(c, -r)?;
        let t = [
            right.0 * wp.value,
            right.1 * w.value,
            left.0 * wpl.value,
            left.1 * wl.value,
        ];
        let own = w.abs_error_estimate
            + wp.abs_error_estimate
            + wl.abs_error_estimate
            + wpl.abs_error_estimate;
        let scale_a = right.0.abs() + right.1.abs() + left.0.abs() + left.1.abs();
        let scale_b = w.value.abs() + wp.value.abs() + wl.value.abs() + wpl.value.abs();
        let err = own * scale_a + anchor_err * scale_b + EPS * t.iter().map(|v| v.abs()).sum::<f64>();
        Ok(((t[0] - t[1]) - (t[2] - t[3]), err))
    };
    let d = b - a;
    if d.abs() < diag_switch(a) {
        let h = diag_step(a, None);
        let (g, err) = near_diagonal(|c| Ok(num(c)?.0), a, d, h, None)?;
        return Ok(KernelValue {
            value: g,
            near_diagonal: true,
            abs_error_estimate: err,
        });
    }
    let (n, err) = num(b)?;
    Ok(KernelValue::plain(n / d, err / d.abs()))
}

#[cfg(test)]
mod tests {
    use super::super::{Anchor, Cutoff};
    use super::*;

    fn spec(family: Family, a: f64, r: f64) -> KernelSpec {
        KernelSpec::new(family, Cutoff::R(r), Anchor::Point(a))
    }

    #[test]
    fn bessel_vanishes_for_tiny_cutoff() {
        let s = spec(Family::BesselHankel { nu: 0.0 }, 1.0, 1e-3);
        assert!(bessel_kernel_closed(&s, 2.0).unwrap().value.abs() <= 1e-5);
    }

    #[test]
    fn bessel_symmetry() {
        let k1 = Kernel::new(spec(Family::BesselHankel { nu: 0.5 }, 1.3, 12.0)).unwrap();
        let k2 = Kernel::new(spec(Family::BesselHankel { nu: 0.5 }, 2.1, 12.0)).unwrap();
        let v1 = k1.eval(2.1).unwrap().value / 2.1;
        let v2 = k2.eval(1.3).unwrap().value / 1.3;
        assert!((v1 - v2).abs() <= 1e-10 * v1.abs());
    }

    #[test]
    fn diagonal_branch_is_continuous() {
        let cases = [
            spec(Family::BesselHankel { nu: 0.0 }, 1.0, 10.0),
            spec(Family::BesselHankel { nu: 2.0 }, 1.7, 40.0),
            spec(Family::Airy, 0.0, 20.0),
            spec(Family::Airy, -1.5, 50.0),
            spec(Family::Coulomb { l: 0 }, 1.0, 30.0),
            spec(Family::Weber, 0.0, 15.0),
        ];
        for s in cases {
            let k = Kernel::new(s).unwrap();
            let a = s.point().unwrap();
            let w = diag_switch(a);
            for sign in [-1.0, 1.0] {
                let inside = k.eval(a + sign * w * (1.0 - 1e-9)).unwrap();
                let outside = k.eval(a + sign * w * (1.0 + 1e-9)).unwrap();
                assert!(inside.near_diagonal && !outside.near_diagonal);
                let rel = (inside.value - outside.value).abs() / outside.value.abs();
                assert!(rel <= 1e-6, "{}: {rel:e}", s.family);
            }
            assert!(k.eval(a).unwrap().near_diagonal);
        }
    }

    #[test]
    fn bessel_diagonal_matches_lommel() {
        let s = spec(Family::BesselHankel { nu: 0.0 }, 1.0, 10.0);
        let k = Kernel::new(s).unwrap();
        let (j, jp) = specfun::bessel_j_pair(0.0, 10.0).unwrap();
        let lommel = 50.0 * (jp.value * jp.value + j.value * j.value);
        assert!((k.eval(1.0).unwrap().value - lommel).abs() < 1e-13 * lommel);
    }

    #[test]
    fn swap_symmetry_of_symmetric_families() {
        let pairs: [(Family, f64, f64, f64); 3] = [
            (Family::Airy, 0.0, 1.0, 20.0),
            (Family::Coulomb { l: 1 }, 0.7, 2.4, 25.0),
            (Family::Weber, -0.5, 1.2, 12.0),
        ];
        for (f, a, x, r) in pairs {
            let v1 = Kernel::new(spec(f, a, r)).unwrap().eval(x).unwrap().value;
            let v2 = Kernel::new(spec(f, x, r)).unwrap().eval(a).unwrap().value;
            assert!((v1 - v2).abs() <= 1e-10 * v1.abs(), "{f}: {v1} vs {v2}");
        }
    }

    #[test]
    fn wrong_family_is_rejected() {
        let s = spec(Family::Airy, 0.0, 20.0);
        assert!(bessel_kernel_closed(&s, 1.0).is_err());
        let bad = spec(Family::BesselHankel { nu: -1.5 }, 1.0, 10.0);
        assert!(Kernel::new(bad).is_err());
    }
}

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Brent's method: inverse quadratic / secant steps guarded by bisection.
///
/// Requires `f(lo) * f(hi) <= 0`. An endpoint where `f` vanishes is returned
/// as is. The result always lies inside `[lo, hi]` and the final bracket
/// around it is no wider than about `2 * tol`.
pub fn refine_root<T, F>(mut f: F, lo: T, hi: T, tol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !(tol > T::zero()) {
        return Err(Error::InvalidConfig("root tolerance must be positive".into()));
    }
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::InvalidBracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }

    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..200 {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1 * xm.signum()
        };
        fb = f(b);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn linear_root() {
        let x = refine_root(|x: f64| x - 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn cosine_root() {
        let x = refine_root(f64::cos, 1.0, 2.0, 1e-13).unwrap();
        assert!((x - FRAC_PI_2).abs() <= 1e-12);
    }

    #[test]
    fn tangency_and_invalid_brackets() {
        assert!(matches!(
            refine_root(|x: f64| x * x, -1.0, 1.0, 1e-12),
            Err(Error::InvalidBracket { .. })
        ));
        assert_eq!(refine_root(|x: f64| x * x, 0.0, 1.0, 1e-12).unwrap(), 0.0);
        assert_eq!(refine_root(|x: f64| x - 1.0, 0.0, 1.0, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn stays_inside_bracket_for_steep_functions() {
        for &(lo, hi) in &[(-1.0, 3.0), (-0.02, 1e-3), (-50.0, 0.1)] {
            let x = refine_root(|x: f64| (x + 0.01).powi(3) * 1e6, lo, hi, 1e-14).unwrap();
            assert!(x >= lo && x <= hi);
            assert!((x + 0.01).abs() < 1e-4);
        }
    }

    #[test]
    fn reversed_bracket_is_accepted() {
        let x = refine_root(|x: f64| x - 0.25, 1.0, 0.0, 1e-12).unwrap();
        assert!((x - 0.25).abs() <= 1e-12);
    }
}

//! Scalar root finding: Brent's method plus a monotone-inversion helper.

use crate::error::Error;
use crate::Result;

/// Root of f on [a, b] by Brent's method.  Requires a sign change.
pub fn brent<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::EvaluationFailure(format!(
            "no sign change on [{a}, {b}]: f(a)={fa:.3e}, f(b)={fb:.3e}"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt inverse quadratic interpolation / secant.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
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
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::EvaluationFailure(
        "root iteration did not converge".into(),
    ))
}

/// x with f(x) = y for a (not necessarily strictly) increasing f on
/// [lo, hi], resolved to full f64 precision by bisection on the bit
/// pattern after a Brent warm start.
pub fn invert_increasing<F: Fn(f64) -> f64>(f: &F, y: f64, lo: f64, hi: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if y < flo || y > fhi {
        return Err(Error::OutOfRange(format!(
            "target {y:.6e} outside [f({lo:.3e}), f({hi:.3e})] = [{flo:.6e}, {fhi:.6e}]"
        )));
    }
    if flo == y {
        return Ok(lo);
    }
    if fhi == y {
        return Ok(hi);
    }
    let g = |x: f64| f(x) - y;
    let x0 = brent(&g, lo, hi, 0.0)?;
    // Polish: bisect until the bracket is two adjacent floats.
    let mut a = x0;
    let mut b = x0;
    while g(a) > 0.0 && a > lo {
        a = (a - a.abs().max(1e-300) * 1e-12).max(lo);
    }
    while g(b) < 0.0 && b < hi {
        b = (b + b.abs().max(1e-300) * 1e-12).min(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if g(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

//! One-dimensional quadrature: Gauss-Kronrod 21 with adaptive bisection,
//! a semi-infinite substitution wrapper, tanh-sinh for endpoint
//! singularities, and Gauss-Laguerre rules built by Golub-Welsch.

use crate::error::Error;
use crate::Result;

/// Value and error estimate returned by the integrators.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub abs_error: f64,
    pub evals: usize,
}

// 21-point Kronrod abscissae (positive half, descending).
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

// 21-point Kronrod weights, matching XGK.
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Embedded 10-point Gauss weights (nodes are XGK[1], XGK[3], ..., XGK[9]).
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One Gauss-Kronrod 21 panel on [a, b]: returns (integral, error estimate).
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    let mut f1v = [0.0f64; 10];
    let mut f2v = [0.0f64; 10];
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        f1v[j] = f1;
        f2v[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    // Error model in the QUADPACK style: compare against the Gauss result,
    // damped by the variation resasc.
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((f1v[j] - mean).abs() + (f2v[j] - mean).abs());
    }
    let value = kronrod * h;
    let raw = ((kronrod - gauss) * h).abs();
    resasc *= h.abs();
    let err = if resasc != 0.0 && raw != 0.0 {
        resasc * (200.0 * raw / resasc).powf(1.5).min(1.0)
    } else {
        raw
    };
    let rounding = 50.0 * f64::EPSILON * resabs * h.abs();
    (value, err.max(rounding))
}

/// Adaptive bisection on [a, b] driven by per-panel GK21 error estimates.
/// Stops when the summed error meets `abs_tol` or `rel_tol * |I|`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quad> {
    const MAX_PANELS: usize = 4096;
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v, e) = gk21(f, a, b);
    if !v.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    let mut panels = vec![Panel {
        a,
        b,
        value: v,
        err: e,
    }];
    let mut evals = 21usize;
    loop {
        let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
        let total = crate::util::pairwise_sum(&values);
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let goal = abs_tol.max(rel_tol * total.abs());
        if err <= goal {
            return Ok(Quad {
                value: total,
                abs_error: err,
                evals,
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailure(format!(
                "error {err:.3e} above goal {goal:.3e} after {} panels on [{a}, {b}]",
                panels.len()
            )));
        }
        // Split the worst panel.
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .unwrap();
        let Panel { a: pa, b: pb, .. } = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(Error::QuadratureFailure(format!(
                "interval [{pa}, {pb}] cannot be split further"
            )));
        }
        for (lo, hi) in [(pa, mid), (mid, pb)] {
            let (v, e) = gk21(f, lo, hi);
            if !v.is_finite() {
                return Err(Error::QuadratureFailure(format!(
                    "non-finite integrand on [{lo}, {hi}]"
                )));
            }
            evals += 21;
            panels.push(Panel {
                a: lo,
                b: hi,
                value: v,
                err: e,
            });
        }
    }
}

/// Integral of f over [0, inf) via the substitution x = u/(1-u).
///
/// The integrand is evaluated first and the Jacobian applied only when it
/// is nonzero, so decaying integrands cannot produce 0 * inf near u = 1.
pub fn integrate_0_inf<F: Fn(f64) -> f64>(f: &F, abs_tol: f64, rel_tol: f64) -> Result<Quad> {
    let g = |u: f64| {
        let om = 1.0 - u;
        let x = u / om;
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx / (om * om)
        }
    };
    adaptive(&g, 0.0, 1.0, abs_tol, rel_tol)
}

/// Integral of f over [a, inf).
pub fn integrate_a_inf<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quad> {
    integrate_0_inf(&|x| f(a + x), abs_tol, rel_tol)
}

/// Tanh-sinh quadrature on [a, b], robust to integrable endpoint
/// singularities.  Halves the step until two successive levels agree.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Quad> {
    use std::f64::consts::FRAC_PI_2;
    let r = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    // phi(t) = tanh(pi/2 sinh t).  The node is carried as the offset
    // 1 - phi = 2 / (e^{pi sinh t} + 1) from the nearest endpoint, formed
    // from the exponential directly: c +- r phi would cancel once phi
    // rounds to 1, and f may be singular exactly there.
    let eval = |t: f64| -> (f64, f64) {
        let s = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * s).exp();
        let omx = 2.0 * e / (1.0 + e);
        let sech = 2.0 * (-s).exp() / (1.0 + e);
        let w = FRAC_PI_2 * t.cosh() * sech * sech;
        (omx, w)
    };
    // An integrand with an x^{-0.9} endpoint singularity still decays like
    // e^{-0.1 pi sinh t} after the transform; the window must run until
    // that is dead in f64, or the boundary node jitters the estimate as h
    // halves. Nodes whose weight has underflowed are skipped either way.
    let t_max = 6.5;
    let mut h = 1.0;
    let mut evals = 0usize;
    // `weighted` is the plain sum of w(t_k) f(x_k) over the current grid;
    // the integral estimate is weighted * h * r.
    let mut weighted = {
        let (_, w0) = eval(0.0);
        let mut s = w0 * f(c);
        evals += 1;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            let (omx, w) = eval(t);
            let off = r * omx;
            if w.abs() >= 1e-300 && off > 0.0 {
                s += w * (f(b - off) + f(a + off));
                evals += 2;
            }
            k += 1;
        }
        s
    };
    let mut prev = f64::INFINITY;
    for _level in 1..=12 {
        h *= 0.5;
        // New points are the odd multiples of the refined step.
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            let (omx, w) = eval(t);
            let off = r * omx;
            if w.abs() >= 1e-300 && off > 0.0 {
                weighted += w * (f(b - off) + f(a + off));
                evals += 2;
            }
            k += 2;
        }
        let value = weighted * h * r;
        if (value - prev).abs() <= tol * (1.0 + value.abs()) {
            return Ok(Quad {
                value,
                abs_error: (value - prev).abs(),
                evals,
            });
        }
        prev = value;
    }
    Err(Error::QuadratureFailure(format!(
        "tanh-sinh did not converge on [{a}, {b}]"
    )))
}

/// Nodes and weights of the n-point Gauss-Laguerre rule for
/// integral(0,inf) f(x) e^{-x} dx ~ sum w_i f(x_i).
///
/// Built by the Golub-Welsch method: the Jacobi matrix for Laguerre
/// polynomials has diagonal 2k+1 and off-diagonal k, the nodes are its
/// eigenvalues and the weights are the squared first components of the
/// normalized eigenvectors (beta_0 = 1).
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut d: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let mut e: Vec<f64> = (0..n).map(|k| k as f64).collect(); // e[k] = T[k-1, k]
    let mut z = vec![0.0f64; n];
    z[0] = 1.0; // track first row of the accumulated rotation
    tqli_first_row(&mut d, &mut e, &mut z);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let nodes: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let weights: Vec<f64> = idx.iter().map(|&i| z[i] * z[i]).collect();
    (nodes, weights)
}

/// QL with implicit shifts for a symmetric tridiagonal matrix, updating only
/// the first row `z` of the eigenvector matrix (enough for quadrature
/// weights).  `d` holds the diagonal (overwritten with eigenvalues); on
/// entry `e[k]` is the coupling between rows k-1 and k.
fn tqli_first_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    if n == 1 {
        return;
    }
    // Re-index so e[k] couples rows k and k+1.
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut broke_early = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    broke_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if broke_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Oscillatory integral of f(x) cos(omega x) over [0, inf) for f that
/// eventually decays monotonically.
///
/// Integrates half-period segments [k pi/omega, (k+1) pi/omega] with GK21 and
/// accelerates the resulting alternating series by repeated averaging of the
/// partial sums (Euler transform), which converges even for slowly decaying
/// envelopes like 1/x^2.
pub fn fourier_cos<F: Fn(f64) -> f64>(f: &F, omega: f64, tol: f64) -> Result<Quad> {
    let omega = omega.abs();
    if omega < 1e-9 {
        return integrate_0_inf(f, tol, tol);
    }
    let h = std::f64::consts::PI / omega;
    let seg_tol = (tol / 64.0).max(1e-16);
    const MAX_SEG: usize = 512;
    const TAIL: usize = 48;
    let mut evals = 0;
    let mut partial = Vec::with_capacity(MAX_SEG);
    let mut sum = 0.0;
    let mut last_mag = f64::INFINITY;
    let mut shrinking = 0usize;
    for k in 0..MAX_SEG {
        let a = k as f64 * h;
        let q = adaptive(&|x| f(x) * (omega * x).cos(), a, a + h, seg_tol, 0.0)?;
        evals += q.evals;
        sum += q.value;
        partial.push(sum);
        let mag = q.value.abs();
        // Direct termination once segments are negligible outright.
        if k >= 8 && mag < 0.25 * tol && last_mag < 0.25 * tol {
            return Ok(Quad {
                value: sum,
                abs_error: mag + tol * 0.5,
                evals,
            });
        }
        if mag <= last_mag {
            shrinking += 1;
        } else {
            shrinking = 0;
        }
        last_mag = mag;
        // Enough monotonically shrinking alternating terms: accelerate.
        if partial.len() >= TAIL && shrinking >= TAIL / 2 {
            break;
        }
    }
    let n = partial.len();
    let mut s: Vec<f64> = partial[n - TAIL..].to_vec();
    let mut prev = s[s.len() - 1];
    let mut err = f64::INFINITY;
    while s.len() > 1 {
        for i in 0..s.len() - 1 {
            s[i] = 0.5 * (s[i] + s[i + 1]);
        }
        s.pop();
        let cur = s[s.len() - 1];
        err = (cur - prev).abs();
        prev = cur;
    }
    Ok(Quad {
        value: s[0],
        abs_error: err,
        evals,
    })
}

/// Hankel transform of order zero: integral of f(u) J0(omega u) u du over
/// [0, inf) for f that eventually decays monotonically.
///
/// Same scheme as `fourier_cos`: J0(omega u) keeps a single sign between
/// consecutive zeros, which sit near u = (3/4 + k) pi / omega, so segment
/// integrals form an alternating series the Euler transform accelerates.
pub fn hankel0<F: Fn(f64) -> f64>(f: &F, omega: f64, tol: f64) -> Result<Quad> {
    use crate::special::bessel_j0;
    let omega = omega.abs();
    if omega < 1e-9 {
        return integrate_0_inf(&|u| f(u) * u, tol, tol);
    }
    let h = std::f64::consts::PI / omega;
    let seg_tol = (tol / 64.0).max(1e-16);
    const MAX_SEG: usize = 2048;
    const TAIL: usize = 48;
    let g = |u: f64| f(u) * bessel_j0(omega * u) * u;
    let mut evals = 0;
    let mut partial = Vec::with_capacity(64);
    let mut sum = 0.0;
    let mut last_mag = f64::INFINITY;
    let mut shrinking = 0usize;
    // Segment boundaries at the asymptotic zeros (3/4 + k) h.
    let mut a = 0.0;
    let mut b = 0.75 * h;
    for k in 0..MAX_SEG {
        let q = adaptive(&g, a, b, seg_tol, 0.0)?;
        evals += q.evals;
        sum += q.value;
        partial.push(sum);
        let mag = q.value.abs();
        if k >= 8 && mag < 0.25 * tol && last_mag < 0.25 * tol {
            return Ok(Quad {
                value: sum,
                abs_error: mag + tol * 0.5,
                evals,
            });
        }
        if mag <= last_mag {
            shrinking += 1;
        } else {
            shrinking = 0;
        }
        last_mag = mag;
        if partial.len() >= TAIL && shrinking >= TAIL / 2 {
            break;
        }
        a = b;
        b += h;
    }
    let n = partial.len();
    if n < TAIL {
        return Err(Error::QuadratureFailure(format!(
            "hankel0 segments never settled (omega = {omega})"
        )));
    }
    let mut s: Vec<f64> = partial[n - TAIL..].to_vec();
    let mut prev = s[s.len() - 1];
    let mut err = f64::INFINITY;
    while s.len() > 1 {
        for i in 0..s.len() - 1 {
            s[i] = 0.5 * (s[i] + s[i + 1]);
        }
        s.pop();
        let cur = s[s.len() - 1];
        err = (cur - prev).abs();
        prev = cur;
    }
    Ok(Quad {
        value: s[0],
        abs_error: err,
        evals,
    })
}

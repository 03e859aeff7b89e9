//! Small numeric helpers shared across modules.

/// Pairwise (cascade) summation.  Deterministic for a fixed input order and
/// carries an O(log n) error constant instead of O(n).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `n` points spaced uniformly on [a, b], endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + step * i as f64).collect()
}

/// `n` points spaced geometrically on [a, b] (a, b > 0), endpoints included.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > 0.0 && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    let mut out: Vec<f64> = linspace(la, lb, n).into_iter().map(f64::exp).collect();
    // pin the endpoints: exp(ln x) can land an ulp past x
    out[0] = a;
    out[n - 1] = b;
    out
}

/// ln cosh x without overflow for large |x|.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    if a > 30.0 {
        // cosh x = e^a (1 + e^{-2a}) / 2
        a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
    } else {
        a.cosh().ln()
    }
}

/// ln sinh x for x > 0 without overflow.
pub fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x > 30.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// arccosh x = ln(x + sqrt(x^2 - 1)) for x >= 1, stable near 1.
pub fn acosh_stable(x: f64) -> f64 {
    debug_assert!(x >= 1.0);
    let d = x - 1.0;
    // For x near 1 use ln(1 + d + sqrt(d (2 + d))).
    (d + (d * (2.0 + d)).sqrt()).ln_1p()
}

/// Least-squares slope of y against x.
pub fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    sxy / sxx
}

/// Volume of the n-dimensional Euclidean unit ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    std::f64::consts::PI.powf(half) / crate::special::gamma(half + 1.0)
}

/// Surface area of the (n-1)-sphere in R^n.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

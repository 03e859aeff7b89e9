//! Transition densities p_t: grid inversion of the characteristic function
//! by FFT, far-field radial transforms, and the on-diagonal value p_t(0)
//! through direct quadrature and through the ball-volume representation.
//!
//! Conventions: the characteristic function of X_t is e^{-t psi(xi)} and
//!
//!   p_t(x) = (2 pi)^{-n} Integral e^{-i x.xi} e^{-t psi(xi)} dxi.
//!
//! Sampling the spectrum with step dxi periodizes the density with period
//! 2 pi / dxi (Poisson summation); that is the only spatial error source,
//! so the grid builder sizes the internal period until the wrap-around
//! error falls below a requested bound, and records the bound it achieved.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::bernstein::{stable_half_subordinator_density, BernsteinFn};
use crate::exponents::{radius_bounds, CharExponent, ExponentKind};
use crate::geometry::{ball_volume, doubling_check, ln_level_set_volume};
use crate::parallel::{maybe_par_chunks_mut, maybe_par_map};
use crate::quad;
use crate::report::{DiagonalResult, DoublingVerdict};
use crate::table::TableRow;
use crate::util::{pairwise_sum, unit_sphere_area};
use crate::{Error, Result};

/// e^{-t psi} must fall below this at the Nyquist frequency pi/h before a
/// grid inversion is attempted; spectral folding is negligible past it.
const WINDOW_DECAY: f64 = 1e-14;

/// When suggesting a finer step, aim for t psi(pi/h) = 35, a margin past
/// -ln(WINDOW_DECAY) ~ 32.2.
const SUGGESTED_LN_DECAY: f64 = 35.0;

/// High-frequency growth class of an exponent. Decides whether e^{-t psi}
/// is integrable (so a bounded density exists) and which tail model sizes
/// the FFT period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    /// psi(xi) grows like a positive power |xi|^kappa.
    Power(f64),
    /// psi(xi) ~ coeff * ln|xi|; integrable only when t * coeff > dim.
    Log(f64),
    /// Unbounded but below every multiple of ln|xi|; never integrable.
    SubLog,
    /// Bounded; e^{-t psi} never vanishes at infinity.
    Bounded,
    /// No certified class (tabulated compositions).
    Unknown,
}

pub fn growth_class(exp: &CharExponent) -> Growth {
    match &exp.kind {
        ExponentKind::Gaussian => Growth::Power(2.0),
        ExponentKind::Cauchy => Growth::Power(1.0),
        ExponentKind::Stable { alpha } => Growth::Power(*alpha),
        ExponentKind::Meixner => Growth::Power(1.0),
        ExponentKind::Relativistic { .. } => Growth::Power(1.0),
        ExponentKind::LogCauchy => Growth::Log(2.0),
        ExponentKind::TruncatedGauss => Growth::Bounded,
        ExponentKind::SumAnisotropic { alpha, beta, .. } => Growth::Power(alpha.min(*beta)),
        ExponentKind::Composite { f, inner } => bf_growth(f, growth_class(inner)),
        ExponentKind::TableRow(row) => match row {
            TableRow::Normal => Growth::Power(2.0),
            // charfn (1 + (xi/t)^2)^{-t} has power decay, like LogCauchy
            TableRow::Laplace => Growth::Log(2.0),
            _ => Growth::Power(1.0),
        },
    }
}

/// Growth of f(g) from the growth of g, for a Bernstein function f.
fn bf_growth(f: &BernsteinFn, inner: Growth) -> Growth {
    use Growth::*;
    match (f, inner) {
        (_, Bounded) | (BernsteinFn::OneMinusExp, _) => Bounded,
        (BernsteinFn::Linear, g) => g,
        (BernsteinFn::Tabulated { .. }, _) | (_, Unknown) => Unknown,
        // s^a and (1+s)^a - 1 both look like s^a far out
        (
            BernsteinFn::Power { alpha } | BernsteinFn::CompositePower { alpha },
            Power(k),
        ) => Power(alpha * k),
        (BernsteinFn::Power { alpha } | BernsteinFn::CompositePower { alpha }, Log(c)) => {
            if (*alpha - 1.0).abs() < 1e-12 {
                Log(c)
            } else {
                SubLog
            }
        }
        (BernsteinFn::Power { .. } | BernsteinFn::CompositePower { .. }, SubLog) => SubLog,
        (BernsteinFn::Log1p, Power(_) | Log(_) | SubLog) => match inner {
            Power(k) => Log(k),
            _ => SubLog,
        },
    }
}

/// Check that e^{-t psi} is integrable on R^dim, so that X_t has a bounded
/// continuous density.
pub fn require_integrable(exp: &CharExponent, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::ParamOutOfRange(format!(
            "t must be positive and finite, got {t}"
        )));
    }
    exp.validate()?;
    let dim = exp.dim as f64;
    match growth_class(exp) {
        Growth::Power(k) if k > 0.0 => Ok(()),
        Growth::Power(k) => Err(Error::NonIntegrable(format!(
            "exponent growth power {k} is not positive"
        ))),
        Growth::Log(c) => {
            if t * c > dim {
                Ok(())
            } else {
                Err(Error::NonIntegrable(format!(
                    "e^(-t psi) decays like |xi|^-{:.3}, not integrable in dimension {}; need t > {}",
                    t * c,
                    exp.dim,
                    dim / c
                )))
            }
        }
        Growth::SubLog => Err(Error::NonIntegrable(
            "exponent grows slower than every multiple of ln|xi|".into(),
        )),
        Growth::Bounded => Err(Error::NonIntegrable(
            "bounded exponent: e^(-t psi) does not vanish at infinity".into(),
        )),
        Growth::Unknown => Err(Error::InsufficientRange(
            "tabulated composition carries no certified growth class".into(),
        )),
    }
}

/// Largest spatial step whose Nyquist frequency pi/h reaches
/// t psi = 35. Bounded exponents never reach it and report NonIntegrable.
pub fn nyquist_h(exp: &CharExponent, t: f64) -> Result<f64> {
    require_integrable(exp, t)?;
    let level = SUGGESTED_LN_DECAY / t;
    let xi_star = if exp.is_radial() {
        exp.radial_inverse(level)?.sqrt()
    } else {
        // worst direction: largest Euclidean extent of {psi < level}
        radius_bounds(exp, level.sqrt())?.big_m
    };
    Ok(PI / xi_star)
}

/// Requested shape of a density grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Spatial step; the spectrum is sampled out to pi/h.
    pub h: f64,
    /// Half-width of the returned window: samples cover |x| <= l.
    pub l: f64,
    /// Target bound on the wrap-around error per sample.
    pub alias_target: f64,
    /// Cap on log2 of the transform length.
    pub max_log2_n: u32,
}

impl GridSpec {
    pub fn new(h: f64, l: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::ParamOutOfRange(format!(
                "grid step must be positive and finite, got {h}"
            )));
        }
        if !(l >= h) || !l.is_finite() {
            return Err(Error::ParamOutOfRange(format!(
                "window half-width must be at least the step {h}, got {l}"
            )));
        }
        Ok(GridSpec {
            h,
            l,
            alias_target: 1e-9,
            max_log2_n: 24,
        })
    }

    pub fn with_alias_target(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::ParamOutOfRange(format!(
                "alias target must lie in (0, 1), got {eps}"
            )));
        }
        self.alias_target = eps;
        Ok(self)
    }
}

/// One-dimensional density on a uniform half-grid (the density is even, so
/// only x >= 0 is stored).
#[derive(Debug, Clone)]
pub struct GridDensity {
    pub t: f64,
    pub h: f64,
    /// Abscissas 0, h, 2h, ... out to the requested window edge.
    pub xs: Vec<f64>,
    /// Density samples at `xs`. Small negative lobes at the level of the
    /// aliasing bound are kept as computed.
    pub values: Vec<f64>,
    /// Internal torus period used by the inversion.
    pub period: f64,
    /// h times the sample sum over the full period; equals the
    /// characteristic function at 0 (that is, 1) up to roundoff, so it
    /// guards the output scaling.
    pub mass_over_period: f64,
    /// Bound on periodization plus spectral-fold error, per sample.
    pub aliasing_bound: f64,
    /// Transform length.
    pub n_fft: usize,
}

/// Lagrange weights for a cubic through nodes 0,1,2,3 evaluated at v.
fn cubic_weights(v: f64) -> [f64; 4] {
    let a = v - 1.0;
    let b = v - 2.0;
    let c = v - 3.0;
    [
        -a * b * c / 6.0,
        v * b * c / 2.0,
        -v * a * c / 2.0,
        v * a * b / 6.0,
    ]
}

/// Cubic stencil (start index and weights) for |coordinate| = ax on a
/// uniform grid of n nodes with step h starting at 0.
fn cubic_stencil(ax: f64, h: f64, n: usize) -> Result<(usize, [f64; 4])> {
    if n < 4 {
        return Err(Error::DomainExceeded(
            "grid too short for cubic interpolation".into(),
        ));
    }
    let top = (n - 1) as f64 * h;
    if !(ax <= top * (1.0 + 1e-12) + 1e-300) {
        return Err(Error::DomainExceeded(format!(
            "|coordinate| = {ax} beyond grid edge {top}"
        )));
    }
    let fx = (ax / h).min((n - 1) as f64);
    let i0 = (fx.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    Ok((i0, cubic_weights(fx - i0 as f64)))
}

impl GridDensity {
    /// Density at x by cubic interpolation; even in x by construction.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (i0, w) = cubic_stencil(x.abs(), self.h, self.xs.len())?;
        Ok((0..4).map(|j| w[j] * self.values[i0 + j]).sum())
    }
}

/// Smallest exponent k with 2^k >= x, capped.
fn next_pow2_log(x: f64, max_log2: u32) -> Result<u32> {
    let mut k = 3u32;
    while ((1u64 << k) as f64) < x {
        k += 1;
        if k > max_log2 {
            return Err(Error::InsufficientRange(format!(
                "transform needs about {x:.3e} points, above the 2^{max_log2} cap"
            )));
        }
    }
    Ok(k)
}

/// e^{-t psi} at k * dxi for k = 0..=half, chunked for parallelism.
fn spectrum_half(exp: &CharExponent, t: f64, dxi: f64, half: usize) -> Result<Vec<f64>> {
    const CHUNK: usize = 1 << 14;
    let ranges: Vec<(usize, usize)> = (0..=half)
        .step_by(CHUNK)
        .map(|a| (a, (a + CHUNK).min(half + 1)))
        .collect();
    let parts = maybe_par_map(&ranges, |&(a, b)| {
        (a..b)
            .map(|k| {
                let xi = k as f64 * dxi;
                exp.radial_profile(xi * xi).map(|ps| (-t * ps).exp())
            })
            .collect::<Result<Vec<f64>>>()
    });
    let mut vals = Vec::with_capacity(half + 1);
    for part in parts {
        vals.extend(part?);
    }
    Ok(vals)
}

/// Density over one full period: p_j at x = j h for j = 0..n-1 (indices
/// past n/2 wrap to the negative side). Returns the samples and the mass
/// identity value.
fn transform_1d(exp: &CharExponent, t: f64, h: f64, n: usize) -> Result<(Vec<f64>, f64)> {
    let dxi = 2.0 * PI / (n as f64 * h);
    let spec = spectrum_half(exp, t, dxi, n / 2)?;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(spec[k.min(n - k)], 0.0))
        .collect();
    drop(spec);
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / (n as f64 * h);
    let vals: Vec<f64> = buf.iter().map(|c| c.re * scale).collect();
    drop(buf);
    let mass = h * pairwise_sum(&vals);
    Ok((vals, mass))
}

/// Invert the characteristic function of a one-dimensional exponent on a
/// uniform grid.
///
/// Heavy-tailed cases (exponent with origin power below 2) size the period
/// from the power-tail model K / |x|^{1+a}; all others start from a fixed
/// generous period and double it until the periodized far field drops
/// below the alias target.
pub fn invert_fourier(exp: &CharExponent, t: f64, spec: &GridSpec) -> Result<GridDensity> {
    if exp.dim != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: exp.dim,
        });
    }
    require_integrable(exp, t)?;
    let (h, l) = (spec.h, spec.l);
    let xi_max = PI / h;
    let ln_decay = t * exp.radial_profile(xi_max * xi_max)?;
    if (-ln_decay).exp() >= WINDOW_DECAY {
        return Err(Error::WindowTooSmall {
            xi_max,
            suggested_h: nyquist_h(exp, t)?,
        });
    }
    // Spectral folding: everything beyond pi/h lands back on the grid.
    let fold = (-ln_decay).exp() / h;
    let min_n = 2.0 * l / h + 1.0;

    let finish = |vals: Vec<f64>, mass: f64, n: usize, spatial: f64| -> GridDensity {
        let jl = (l / h + 1e-9).floor() as usize;
        GridDensity {
            t,
            h,
            xs: (0..=jl).map(|j| j as f64 * h).collect(),
            values: vals[..=jl].to_vec(),
            period: n as f64 * h,
            mass_over_period: mass,
            aliasing_bound: spatial + fold,
            n_fft: n,
        }
    };

    match exp.density_tail_power() {
        Some(a) => {
            let k_tail = 3.0 * t.max(1.0);
            let p_req = l + (2.0 * k_tail / spec.alias_target).powf(1.0 / (1.0 + a));
            let n = 1usize << next_pow2_log((p_req / h).max(min_n), spec.max_log2_n)?;
            let (vals, mass) = transform_1d(exp, t, h, n)?;
            let spatial = 2.0 * k_tail / (n as f64 * h - l).powf(1.0 + a);
            Ok(finish(vals, mass, n, spatial))
        }
        None => {
            let mut p_goal = (4.0 * l).max(2.0 * l + 64.0 * (1.0 + t));
            for _ in 0..=6 {
                let n = 1usize << next_pow2_log((p_goal / h).max(min_n), spec.max_log2_n)?;
                let (vals, mass) = transform_1d(exp, t, h, n)?;
                let j0 = (0.45 * n as f64) as usize;
                let edge = vals[j0..=n / 2]
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                if 4.0 * edge <= spec.alias_target {
                    return Ok(finish(vals, mass, n, 4.0 * edge));
                }
                p_goal = 2.0 * n as f64 * h;
            }
            Err(Error::InsufficientRange(
                "periodized far field stayed above the alias target after repeated period doubling"
                    .into(),
            ))
        }
    }
}

/// Two-dimensional density on the product of two half-grids.
#[derive(Debug, Clone)]
pub struct Grid2d {
    pub t: f64,
    pub hx: f64,
    pub hy: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major quadrant: values[iy * xs.len() + ix] = p(xs[ix], ys[iy]).
    pub values: Vec<f64>,
    pub mass_over_period: f64,
    pub aliasing_bound: f64,
    /// Transform lengths per axis.
    pub n_fft: (usize, usize),
}

impl Grid2d {
    pub fn value_at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }

    /// Density at (x, y) by bicubic interpolation; even in each coordinate.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let (ix0, wx) = cubic_stencil(x.abs(), self.hx, self.xs.len())?;
        let (iy0, wy) = cubic_stencil(y.abs(), self.hy, self.ys.len())?;
        let mut acc = 0.0;
        for (jy, vy) in wy.iter().enumerate() {
            let mut row = 0.0;
            for (jx, vx) in wx.iter().enumerate() {
                row += vx * self.value_at(ix0 + jx, iy0 + jy);
            }
            acc += vy * row;
        }
        Ok(acc)
    }
}

/// Invert a two-dimensional exponent: blockwise product for the
/// two-block anisotropic sum, full planar FFT for radial exponents.
pub fn invert_fourier_2d(exp: &CharExponent, t: f64, spec: &GridSpec) -> Result<Grid2d> {
    if exp.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: exp.dim,
        });
    }
    require_integrable(exp, t)?;
    match &exp.kind {
        ExponentKind::SumAnisotropic {
            alpha,
            beta,
            m: 1,
            n: 1,
        } => {
            let gx = invert_fourier(&CharExponent::stable(*alpha, 1)?, t, spec)?;
            let gy = invert_fourier(&CharExponent::stable(*beta, 1)?, t, spec)?;
            let mut values = Vec::with_capacity(gx.xs.len() * gy.xs.len());
            for py in &gy.values {
                for px in &gx.values {
                    values.push(px * py);
                }
            }
            // |(p+e)(q+f) - pq| <= e max q + f max p to first order
            let alias = gx.aliasing_bound * gy.values[0] + gy.aliasing_bound * gx.values[0];
            Ok(Grid2d {
                t,
                hx: gx.h,
                hy: gy.h,
                n_fft: (gx.n_fft, gy.n_fft),
                mass_over_period: gx.mass_over_period * gy.mass_over_period,
                aliasing_bound: alias,
                xs: gx.xs,
                ys: gy.xs,
                values,
            })
        }
        _ if exp.is_radial() => radial_2d(exp, t, spec),
        _ => Err(Error::EvaluationFailure(
            "planar inversion needs a radial exponent or a two-block anisotropic sum".into(),
        )),
    }
}

/// Full n x n spectral grid, FFT along both axes, mass identity value.
fn transform_2d(exp: &CharExponent, t: f64, h: f64, n: usize) -> Result<(Vec<f64>, f64)> {
    let dxi = 2.0 * PI / (n as f64 * h);
    let half = n / 2;
    // Quarter spectrum: radial psi only needs |(fx, fy)|.
    let rows_idx: Vec<usize> = (0..=half).collect();
    let quarter = maybe_par_map(&rows_idx, |&iy| {
        let fy2 = (iy as f64 * dxi).powi(2);
        (0..=half)
            .map(|ix| {
                let fx = ix as f64 * dxi;
                exp.radial_profile(fx * fx + fy2).map(|ps| (-t * ps).exp())
            })
            .collect::<Result<Vec<f64>>>()
    });
    let quarter = quarter.into_iter().collect::<Result<Vec<Vec<f64>>>>()?;

    let mut buf = vec![Complex64::default(); n * n];
    for iy in 0..n {
        let row = &quarter[iy.min(n - iy)];
        let dst = &mut buf[iy * n..(iy + 1) * n];
        for (ix, slot) in dst.iter_mut().enumerate() {
            *slot = Complex64::new(row[ix.min(n - ix)], 0.0);
        }
    }
    drop(quarter);

    let fft: Arc<dyn Fft<f64>> = FftPlanner::<f64>::new().plan_fft_forward(n);
    maybe_par_chunks_mut(&mut buf, n, |row| fft.process(row));
    // In-place square transpose; the spectrum is symmetric under k <-> l,
    // so transposing the final result is harmless.
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
    maybe_par_chunks_mut(&mut buf, n, |row| fft.process(row));

    let scale = (n as f64 * h).recip().powi(2);
    let vals: Vec<f64> = buf.iter().map(|c| c.re * scale).collect();
    drop(buf);
    let mass = h * h * pairwise_sum(&vals);
    Ok((vals, mass))
}

fn radial_2d(exp: &CharExponent, t: f64, spec: &GridSpec) -> Result<Grid2d> {
    let (h, l) = (spec.h, spec.l);
    let xi_max = PI / h;
    // folding happens per axis at pi/h, exactly as in one dimension
    let ln_decay = t * exp.radial_profile(xi_max * xi_max)?;
    if (-ln_decay).exp() >= WINDOW_DECAY {
        return Err(Error::WindowTooSmall {
            xi_max,
            suggested_h: nyquist_h(exp, t)?,
        });
    }
    let fold = (-ln_decay).exp() / h;
    let min_n = 2.0 * l / h + 1.0;
    // 2^12 per side keeps the planar buffer within memory
    let cap = spec.max_log2_n.min(12);

    let quadrant = |vals: &[f64], n: usize, mass: f64, alias: f64| -> Grid2d {
        let jl = (l / h + 1e-9).floor() as usize;
        let xs: Vec<f64> = (0..=jl).map(|j| j as f64 * h).collect();
        let mut values = Vec::with_capacity((jl + 1) * (jl + 1));
        for iy in 0..=jl {
            values.extend_from_slice(&vals[iy * n..iy * n + jl + 1]);
        }
        Grid2d {
            t,
            hx: h,
            hy: h,
            ys: xs.clone(),
            xs,
            values,
            mass_over_period: mass,
            aliasing_bound: alias + fold,
            n_fft: (n, n),
        }
    };

    match exp.density_tail_power() {
        Some(a) => {
            // planar radial tail: p ~ K / |x|^{2+a}; eight nearest images
            let k_tail = 3.0 * t.max(1.0);
            let p_req = l + (8.0 * k_tail / spec.alias_target).powf(1.0 / (2.0 + a));
            let n = 1usize << next_pow2_log((p_req / h).max(min_n), cap)?;
            let (vals, mass) = transform_2d(exp, t, h, n)?;
            let spatial = 8.0 * k_tail / (n as f64 * h - l).powf(2.0 + a);
            Ok(quadrant(&vals, n, mass, spatial))
        }
        None => {
            let mut p_goal = (4.0 * l).max(2.0 * l + 64.0 * (1.0 + t));
            for _ in 0..=3 {
                let n = 1usize << next_pow2_log((p_goal / h).max(min_n), cap)?;
                let (vals, mass) = transform_2d(exp, t, h, n)?;
                let j0 = (0.45 * n as f64) as usize;
                // far frame of the torus: either coordinate near half-period
                let mut edge = 0.0f64;
                for iy in 0..=n / 2 {
                    let row = &vals[iy * n..iy * n + n / 2 + 1];
                    if iy >= j0 {
                        for v in row {
                            edge = edge.max(v.abs());
                        }
                    } else {
                        for v in &row[j0..] {
                            edge = edge.max(v.abs());
                        }
                    }
                }
                if 8.0 * edge <= spec.alias_target {
                    return Ok(quadrant(&vals, n, mass, 8.0 * edge));
                }
                p_goal = 2.0 * n as f64 * h;
            }
            Err(Error::InsufficientRange(
                "periodized far field stayed above the alias target after repeated period doubling"
                    .into(),
            ))
        }
    }
}

/// Far-field radial density in the plane:
/// p_t(rho) = (2 pi)^{-1} Integral_0^inf J_0(rho u) e^{-t psi(u)} u du.
/// Complements the grid, whose window cannot chase power tails.
pub fn radial_density_hankel(exp: &CharExponent, t: f64, rho: f64) -> Result<f64> {
    if exp.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: exp.dim,
        });
    }
    if !exp.is_radial() {
        return Err(Error::EvaluationFailure(
            "radial transform needs a radial exponent".into(),
        ));
    }
    require_integrable(exp, t)?;
    let f = |u: f64| {
        exp.radial_profile(u * u)
            .map_or(f64::NAN, |ps| (-t * ps).exp())
    };
    Ok(quad::hankel0(&f, rho.abs(), 1e-12)?.value / (2.0 * PI))
}

/// One radial block of the spectral integral:
/// (2 pi)^{-d} A_d Integral_0^inf e^{-t rho^alpha} rho^{d-1} drho.
fn stable_block_diagonal(alpha: f64, d: usize, t: f64) -> Result<f64> {
    let integrand = |rho: f64| {
        if rho <= 0.0 {
            return 0.0;
        }
        (-t * rho.powf(alpha)).exp() * rho.powi(d as i32 - 1)
    };
    let q = quad::integrate_0_inf(&integrand, 1e-13, 1e-12)?;
    Ok(unit_sphere_area(d) * q.value / (2.0 * PI).powi(d as i32))
}

/// p_t(0) by direct reduction of the spectral integral. Radial exponents
/// reduce to one radial quadrature, the anisotropic sum to a product of
/// per-block reductions.
pub fn diagonal_direct(exp: &CharExponent, t: f64) -> Result<f64> {
    require_integrable(exp, t)?;
    match &exp.kind {
        ExponentKind::SumAnisotropic { alpha, beta, m, n } => {
            Ok(stable_block_diagonal(*alpha, *m, t)? * stable_block_diagonal(*beta, *n, t)?)
        }
        _ if exp.is_radial() => {
            let d = exp.dim;
            let integrand = |rho: f64| {
                if rho <= 0.0 {
                    return 0.0;
                }
                let ps = exp.radial_profile(rho * rho).unwrap_or(f64::NAN);
                (-t * ps).exp() * rho.powi(d as i32 - 1)
            };
            // Fold the half line at rho = 1. Slowly decaying profiles (a
            // power tail just past the integrability edge) turn into an
            // algebraic singularity at v = 0 under rho = 1/v, which the
            // tanh-sinh rule absorbs; a single rational map to [0, 1]
            // would leave the same singularity at the far endpoint where
            // panel bisection stalls. The far integrand is assembled in
            // the log domain: 1/v^2 and v^{-(d+1)} overflow separately at
            // the rule's deepest nodes while their combination is tame.
            let near = quad::tanh_sinh(&integrand, 0.0, 1.0, 1e-13)?;
            let far = quad::tanh_sinh(
                &|v: f64| {
                    if v <= 0.0 {
                        return 0.0;
                    }
                    let u = 1.0 / (v * v);
                    if !u.is_finite() {
                        return 0.0;
                    }
                    let ps = exp.radial_profile(u).unwrap_or(f64::NAN);
                    let lv = -t * ps + 0.5 * (d as f64 + 1.0) * u.ln();
                    if lv < -745.0 {
                        0.0
                    } else {
                        lv.exp()
                    }
                },
                0.0,
                1.0,
                1e-13,
            )?;
            Ok(unit_sphere_area(d) * (near.value + far.value) / (2.0 * PI).powi(d as i32))
        }
        _ => Err(Error::EvaluationFailure(
            "diagonal reduction needs a radial or blockwise exponent".into(),
        )),
    }
}

/// One Gauss-Laguerre term of the ball-volume representation, computed in
/// the log domain: level-set volumes can overflow f64 long before the
/// damped product does.
fn laguerre_term(exp: &CharExponent, t: f64, r: f64, w: f64) -> Result<f64> {
    if w <= 0.0 || r <= 0.0 {
        return Ok(0.0);
    }
    let ln_term = w.ln() + ln_level_set_volume(exp, r / t)?;
    Ok(if ln_term < -745.0 { 0.0 } else { ln_term.exp() })
}

/// p_t(0) through the layer-cake identity
///
///   Integral e^{-t psi} dxi = Integral_0^inf vol{psi < r/t} e^{-r} dr,
///
/// by Gauss-Laguerre doubling, falling back to adaptive quadrature when the
/// level-set volume has a fractional power at 0 that defeats the rule.
pub fn diagonal_volume_formula(exp: &CharExponent, t: f64) -> Result<f64> {
    require_integrable(exp, t)?;
    let scale = (2.0 * PI).powi(exp.dim as i32);
    let mut prev = f64::NAN;
    let mut n = 64;
    while n <= 512 {
        let (nodes, weights) = quad::gauss_laguerre(n);
        let mut terms = Vec::with_capacity(n);
        for (r, w) in nodes.iter().zip(&weights) {
            terms.push(laguerre_term(exp, t, *r, *w)?);
        }
        let cur = pairwise_sum(&terms);
        if prev.is_finite() && (cur - prev).abs() <= 1e-9 * cur.abs().max(1e-300) {
            return Ok(cur / scale);
        }
        prev = cur;
        n *= 2;
    }
    let g = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        match ln_level_set_volume(exp, r / t) {
            Ok(lv) => {
                let lt = lv - r;
                if lt < -745.0 {
                    0.0
                } else {
                    lt.exp()
                }
            }
            Err(_) => f64::NAN,
        }
    };
    // V has a fractional power at r = 0 (~ r^{d/alpha}); tanh-sinh on the
    // mapped half-line absorbs the endpoint kink that defeats plain panels.
    let q = quad::tanh_sinh(
        &|u: f64| {
            let om = 1.0 - u;
            if om <= 0.0 {
                return 0.0;
            }
            g(u / om) / (om * om)
        },
        0.0,
        1.0,
        1e-12,
    )?;
    Ok(q.value / scale)
}

/// Diagonal values against metric-ball volumes over a set of times.
#[derive(Debug, Clone)]
pub struct ComparabilityReport {
    pub results: Vec<DiagonalResult>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Whether the metric exponent failed the volume-doubling scan over
    /// the radius range [0.5 / sqrt(t_max), 2 / sqrt(t_min)].
    pub non_doubling: bool,
}

/// Evaluate p_t(0) both ways and compare with the volume of the metric
/// ball of radius 1/sqrt(t). The metric defaults to the density's own
/// exponent; pass one explicitly to compare against another geometry.
pub fn diagonal_comparability(
    exp: &CharExponent,
    metric: Option<&CharExponent>,
    ts: &[f64],
) -> Result<ComparabilityReport> {
    if ts.is_empty() {
        return Err(Error::ParamOutOfRange("need at least one time".into()));
    }
    let metric_exp = metric.unwrap_or(exp);
    if metric_exp.dim != exp.dim {
        return Err(Error::DimensionMismatch {
            expected: exp.dim,
            got: metric_exp.dim,
        });
    }
    let mut results = Vec::with_capacity(ts.len());
    for &t in ts {
        let direct = diagonal_direct(exp, t)?;
        let volf = diagonal_volume_formula(exp, t)?;
        let ball = ball_volume(metric_exp, t.sqrt().recip())?.value;
        results.push(DiagonalResult::new(t, direct, volf, ball));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in &results {
        lo = lo.min(r.ratio);
        hi = hi.max(r.ratio);
    }
    let t_min = ts.iter().fold(f64::INFINITY, |m, &t| m.min(t));
    let t_max = ts.iter().fold(0.0f64, |m, &t| m.max(t));
    let report = doubling_check(metric_exp, 0.5 / t_max.sqrt(), 2.0 / t_min.sqrt())?;
    Ok(ComparabilityReport {
        results,
        min_ratio: lo,
        max_ratio: hi,
        non_doubling: matches!(report.verdict, DoublingVerdict::Fails),
    })
}

/// Diagonal of the process time-changed by the one-half stable
/// subordinator: Integral_0^inf p_s(0) eta_t(s) ds with eta_t the
/// subordinator density. Only f(s) = s^{1/2} has that closed subordinator,
/// so only it is accepted.
pub fn subordinate_diagonal(exp: &CharExponent, f: &BernsteinFn, t: f64) -> Result<f64> {
    match f {
        BernsteinFn::Power { alpha } if (alpha - 0.5).abs() <= 1e-12 => {}
        _ => {
            return Err(Error::EvaluationFailure(
                "subordinate diagonal supports only the square-root function".into(),
            ))
        }
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::ParamOutOfRange(format!(
            "t must be positive and finite, got {t}"
        )));
    }
    // p_s(0) must exist for every s > 0, which power growth guarantees.
    match growth_class(exp) {
        Growth::Power(k) if k > 0.0 => {}
        _ => {
            return Err(Error::NonIntegrable(
                "subordinate diagonal needs power-type growth of the base exponent".into(),
            ))
        }
    }
    let g = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let eta = match stable_half_subordinator_density(t, s) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        if eta == 0.0 {
            return 0.0;
        }
        match diagonal_direct(exp, s) {
            Ok(p) => p * eta,
            Err(_) => f64::NAN,
        }
    };
    Ok(quad::integrate_0_inf(&g, 1e-12, 1e-9)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::compose;

    const GAMMA_5_3: f64 = 0.902_745_292_950_933_6; // Gamma(5/3)
    const K1_AT_1: f64 = 0.601_907_230_197_234_6; // K_1(1)
    const K1_AT_2: f64 = 0.139_865_881_816_522_4; // K_1(2)

    fn cauchy_density(t: f64, x: f64) -> f64 {
        t / (PI * (t * t + x * x))
    }

    #[test]
    fn growth_class_rules() {
        assert_eq!(growth_class(&CharExponent::gaussian(3)), Growth::Power(2.0));
        assert_eq!(
            growth_class(&CharExponent::stable(0.7, 1).unwrap()),
            Growth::Power(0.7)
        );
        assert_eq!(growth_class(&CharExponent::meixner()), Growth::Power(1.0));
        assert_eq!(growth_class(&CharExponent::log_cauchy(2)), Growth::Log(2.0));
        assert_eq!(
            growth_class(&CharExponent::truncated_gauss(1)),
            Growth::Bounded
        );
        assert_eq!(
            growth_class(&CharExponent::sum_anisotropic(1.0, 1.5, 1, 1).unwrap()),
            Growth::Power(1.0)
        );
        // composition chains
        let lc = CharExponent::log_cauchy(1);
        let sqrt_lc = compose(BernsteinFn::power(0.5).unwrap(), lc.clone()).unwrap();
        assert_eq!(growth_class(&sqrt_lc), Growth::SubLog);
        let log_stable = compose(BernsteinFn::Log1p, CharExponent::stable(2.0, 1).unwrap()).unwrap();
        assert_eq!(growth_class(&log_stable), Growth::Log(2.0));
        let damped = compose(BernsteinFn::OneMinusExp, CharExponent::cauchy(1)).unwrap();
        assert_eq!(growth_class(&damped), Growth::Bounded);
        let ident = compose(BernsteinFn::Linear, CharExponent::meixner()).unwrap();
        assert_eq!(growth_class(&ident), Growth::Power(1.0));
        let tab = BernsteinFn::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 0.5, 0.8]).unwrap();
        let tabbed = compose(tab, CharExponent::cauchy(1)).unwrap();
        assert_eq!(growth_class(&tabbed), Growth::Unknown);
        assert!(matches!(
            require_integrable(&tabbed, 1.0),
            Err(Error::InsufficientRange(_))
        ));
    }

    #[test]
    fn integrability_thresholds() {
        let tg = CharExponent::truncated_gauss(1);
        assert!(matches!(
            require_integrable(&tg, 100.0),
            Err(Error::NonIntegrable(_))
        ));
        let lc = CharExponent::log_cauchy(1);
        assert!(matches!(
            require_integrable(&lc, 0.5),
            Err(Error::NonIntegrable(_))
        ));
        assert!(require_integrable(&lc, 0.51).is_ok());
        let lc2 = CharExponent::log_cauchy(2);
        assert!(matches!(
            require_integrable(&lc2, 1.0),
            Err(Error::NonIntegrable(_))
        ));
        assert!(require_integrable(&lc2, 1.01).is_ok());
        let sub = compose(BernsteinFn::power(0.5).unwrap(), lc).unwrap();
        assert!(matches!(
            require_integrable(&sub, 1e6),
            Err(Error::NonIntegrable(_))
        ));
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(0.0, 1.0).is_err());
        assert!(GridSpec::new(0.1, 0.05).is_err());
        assert!(GridSpec::new(0.1, 1.0).unwrap().with_alias_target(0.0).is_err());
    }

    #[test]
    fn nyquist_step_suggestions() {
        // |xi| reaches 35 at xi = 35
        let h = nyquist_h(&CharExponent::cauchy(1), 1.0).unwrap();
        assert!((h - PI / 35.0).abs() < 1e-12);
        // |xi|^2/2 reaches 35 at xi = sqrt(70)
        let h = nyquist_h(&CharExponent::gaussian(1), 1.0).unwrap();
        assert!((h - PI / 70.0f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            nyquist_h(&CharExponent::truncated_gauss(1), 1.0),
            Err(Error::NonIntegrable(_))
        ));
    }

    #[test]
    fn window_rule_rejects_coarse_grid() {
        let spec = GridSpec::new(40.0, 40.0).unwrap();
        match invert_fourier(&CharExponent::cauchy(1), 1.0, &spec) {
            Err(Error::WindowTooSmall { xi_max, suggested_h }) => {
                assert!(xi_max < 0.1);
                assert!(suggested_h > 0.08 && suggested_h < 0.1);
            }
            other => panic!("expected WindowTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn cauchy_grid_matches_closed_form() {
        let spec = GridSpec::new(0.05, 20.0).unwrap();
        let g = invert_fourier(&CharExponent::cauchy(1), 1.0, &spec).unwrap();
        assert!((g.mass_over_period - 1.0).abs() < 1e-12);
        assert!(g.aliasing_bound < 5e-9);
        for (x, v) in g.xs.iter().zip(&g.values) {
            assert!(
                (v - cauchy_density(1.0, *x)).abs() < 1e-8,
                "x = {x}: {v} vs {}",
                cauchy_density(1.0, *x)
            );
        }
        // off-grid interpolation and evenness
        let p = g.eval(1.2345).unwrap();
        assert!((p - cauchy_density(1.0, 1.2345)).abs() < 5e-6);
        assert_eq!(g.eval(-1.0).unwrap(), g.eval(1.0).unwrap());
        assert!(matches!(g.eval(20.2), Err(Error::DomainExceeded(_))));
    }

    #[test]
    fn gaussian_grid_matches_heat_kernel() {
        // |xi|^2 gives variance 2t
        let exp = CharExponent::stable(2.0, 1).unwrap();
        let spec = GridSpec::new(0.05, 8.0).unwrap();
        let g = invert_fourier(&exp, 1.0, &spec).unwrap();
        assert!(g.n_fft <= 1 << 13, "exponential tails should stay small");
        assert!((g.mass_over_period - 1.0).abs() < 1e-12);
        for (x, v) in g.xs.iter().zip(&g.values) {
            let truth = (-x * x / 4.0).exp() / (4.0 * PI).sqrt();
            assert!((v - truth).abs() < 1e-10, "x = {x}");
        }
        let p = g.eval(1.2345).unwrap();
        let truth = (-1.2345f64.powi(2) / 4.0).exp() / (4.0 * PI).sqrt();
        assert!((p - truth).abs() < 1e-6);
    }

    #[test]
    fn meixner_grid_matches_closed_form() {
        let spec = GridSpec::new(0.05, 10.0).unwrap();
        let g = invert_fourier(&CharExponent::meixner(), 1.0, &spec).unwrap();
        let row = TableRow::Meixner;
        for &x in &[0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let truth = row.density(1.0, x).unwrap();
            assert!(
                (g.eval(x).unwrap() - truth).abs() < 1e-8,
                "x = {x}: {} vs {truth}",
                g.eval(x).unwrap()
            );
        }
    }

    #[test]
    fn log_growth_grid_is_refused_honestly() {
        // integrable at t = 1, but the spectrum decays like a power, so the
        // window rule wants an absurd step and the length cap trips
        let lc = CharExponent::log_cauchy(1);
        let spec = GridSpec::new(0.05, 10.0).unwrap();
        let suggested = match invert_fourier(&lc, 1.0, &spec) {
            Err(Error::WindowTooSmall { suggested_h, .. }) => {
                assert!(suggested_h < 1e-6);
                suggested_h
            }
            other => panic!("expected WindowTooSmall, got {other:?}"),
        };
        let fine = GridSpec::new(suggested, 10.0).unwrap();
        assert!(matches!(
            invert_fourier(&lc, 1.0, &fine),
            Err(Error::InsufficientRange(_))
        ));
    }

    #[test]
    fn diagonal_matches_frozen_constants() {
        for &t in &[0.5, 1.0, 2.0] {
            let d = diagonal_direct(&CharExponent::gaussian(1), t).unwrap();
            assert!((d - 1.0 / (2.0 * PI * t).sqrt()).abs() < 1e-11, "t = {t}");
            let d = diagonal_direct(&CharExponent::cauchy(1), t).unwrap();
            assert!((d - 1.0 / (PI * t)).abs() < 1e-11, "t = {t}");
        }
        let d = diagonal_direct(&CharExponent::stable(1.5, 1).unwrap(), 1.0).unwrap();
        assert!((d - GAMMA_5_3 / PI).abs() < 1e-10);
        let d = diagonal_direct(&CharExponent::stable(1.5, 1).unwrap(), 2.0).unwrap();
        assert!((d - GAMMA_5_3 / (PI * 2.0f64.powf(2.0 / 3.0))).abs() < 1e-10);
        let d = diagonal_direct(&CharExponent::stable(0.5, 1).unwrap(), 1.0).unwrap();
        assert!((d - 2.0 / PI).abs() < 1e-10);
        // ln(1 + xi^2): (1/pi) Integral (1+u^2)^-t du, exact at t = 1, 2
        let d = diagonal_direct(&CharExponent::log_cauchy(1), 1.0).unwrap();
        assert!((d - 0.5).abs() < 1e-11);
        let d = diagonal_direct(&CharExponent::log_cauchy(1), 2.0).unwrap();
        assert!((d - 0.25).abs() < 1e-11);
        // ln cosh: (1/pi) Integral sech du = 1/2
        let d = diagonal_direct(&CharExponent::meixner(), 1.0).unwrap();
        assert!((d - 0.5).abs() < 1e-11);
        // sqrt(1+xi^2)-1: substituting xi = sinh gives (e^t/pi) K_1(t)
        let rel = CharExponent::relativistic(1.0, 1).unwrap();
        let d = diagonal_direct(&rel, 1.0).unwrap();
        assert!((d - 1.0f64.exp() * K1_AT_1 / PI).abs() < 1e-9);
        let d = diagonal_direct(&rel, 2.0).unwrap();
        assert!((d - 2.0f64.exp() * K1_AT_2 / PI).abs() < 1e-9);
    }

    #[test]
    fn anisotropic_diagonal_is_a_product_of_gamma_factors() {
        let exp = CharExponent::sum_anisotropic(1.0, 1.5, 1, 1).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            let d = diagonal_direct(&exp, t).unwrap();
            let truth = GAMMA_5_3 / (PI * PI * t.powf(5.0 / 3.0));
            assert!((d - truth).abs() < 1e-9 * truth, "t = {t}");
        }
    }

    #[test]
    fn volume_formula_agrees_with_direct() {
        let cases: Vec<(CharExponent, Vec<f64>)> = vec![
            (CharExponent::gaussian(1), vec![0.5, 1.0, 2.0]),
            (CharExponent::cauchy(1), vec![0.5, 1.0, 2.0]),
            (CharExponent::cauchy(2), vec![1.0]),
            (CharExponent::stable(1.5, 1).unwrap(), vec![1.0]),
            (CharExponent::meixner(), vec![1.0]),
            (CharExponent::relativistic(1.0, 1).unwrap(), vec![1.0]),
            (CharExponent::log_cauchy(1), vec![0.6, 1.0, 2.0]),
            (
                CharExponent::sum_anisotropic(1.0, 1.5, 1, 1).unwrap(),
                vec![1.0],
            ),
        ];
        for (exp, ts) in &cases {
            for &t in ts {
                let direct = diagonal_direct(exp, t).unwrap();
                let volf = diagonal_volume_formula(exp, t).unwrap();
                assert!(
                    (direct - volf).abs() <= 1e-8 * (1.0 + direct.abs()),
                    "{exp:?} at t = {t}: {direct} vs {volf}"
                );
            }
        }
        // both representations refuse the same non-integrable case
        let lc = CharExponent::log_cauchy(1);
        assert!(matches!(
            diagonal_direct(&lc, 0.5),
            Err(Error::NonIntegrable(_))
        ));
        assert!(matches!(
            diagonal_volume_formula(&lc, 0.5),
            Err(Error::NonIntegrable(_))
        ));
    }

    #[test]
    fn comparability_constant_for_matching_scalings() {
        // heat semigroup against the |xi|^2 metric: p_t(0) = 1/sqrt(2 pi t)
        // and vol B(0, 1/sqrt(t)) = 2/sqrt(t), so the ratio is 1/sqrt(8 pi)
        let heat = CharExponent::gaussian(1);
        let metric = CharExponent::stable(2.0, 1).unwrap();
        let rep = diagonal_comparability(&heat, Some(&metric), &[0.25, 1.0, 4.0]).unwrap();
        let truth = 1.0 / (8.0 * PI).sqrt();
        for r in &rep.results {
            assert!((r.ratio - truth).abs() < 1e-10, "t = {}", r.t);
            assert!(r.rel_gap() < 1e-8);
        }
        assert!((rep.max_ratio - rep.min_ratio).abs() < 1e-10);
        assert!(!rep.non_doubling);

        // self-comparison for a stable exponent: ratio Gamma(5/3) / (2 pi)
        let exp = CharExponent::stable(1.5, 1).unwrap();
        let rep = diagonal_comparability(&exp, None, &[0.5, 1.0, 2.0, 4.0]).unwrap();
        let truth = GAMMA_5_3 / (2.0 * PI);
        for r in &rep.results {
            assert!((r.ratio - truth).abs() < 1e-9, "t = {}", r.t);
        }
        assert!(!rep.non_doubling);
    }

    #[test]
    fn comparability_rejects_bad_input() {
        let exp = CharExponent::cauchy(1);
        assert!(diagonal_comparability(&exp, None, &[]).is_err());
        let metric = CharExponent::cauchy(2);
        assert!(matches!(
            diagonal_comparability(&exp, Some(&metric), &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subordinate_square_root_matches_known_diagonals() {
        // sqrt of |xi|^2 is |xi|: Cauchy diagonal 1/(pi t)
        let exp = CharExponent::stable(2.0, 1).unwrap();
        let f = BernsteinFn::power(0.5).unwrap();
        let d = subordinate_diagonal(&exp, &f, 1.0).unwrap();
        assert!((d - 1.0 / PI).abs() < 1e-7);
        let d = subordinate_diagonal(&exp, &f, 2.0).unwrap();
        assert!((d - 0.5 / PI).abs() < 1e-7);
        // sqrt of |xi| has diagonal Gamma(3)/pi = 2/pi at t = 1
        let d = subordinate_diagonal(&CharExponent::cauchy(1), &f, 1.0).unwrap();
        assert!((d - 2.0 / PI).abs() < 1e-6);
        // agreement with the composite exponent evaluated directly
        let composite = compose(f.clone(), CharExponent::stable(2.0, 1).unwrap()).unwrap();
        let direct = diagonal_direct(&composite, 1.0).unwrap();
        assert!((direct - 1.0 / PI).abs() < 1e-10);
        // only the square root is supported
        assert!(matches!(
            subordinate_diagonal(&exp, &BernsteinFn::Log1p, 1.0),
            Err(Error::EvaluationFailure(_))
        ));
    }

    #[test]
    fn planar_radial_grid_matches_poisson_kernel() {
        let exp = CharExponent::cauchy(2);
        let spec = GridSpec::new(PI / 36.0, 10.0)
            .unwrap()
            .with_alias_target(1e-6)
            .unwrap();
        let g = invert_fourier_2d(&exp, 1.0, &spec).unwrap();
        assert!((g.mass_over_period - 1.0).abs() < 1e-9);
        assert!(g.aliasing_bound < 1e-5);
        let truth = |x: f64, y: f64| 0.5 / PI / (1.0 + x * x + y * y).powf(1.5);
        // stored samples carry only transform and aliasing error
        for &(ix, iy) in &[(0, 0), (12, 0), (36, 24), (57, 80), (110, 110)] {
            let v = g.value_at(ix, iy);
            let want = truth(g.xs[ix], g.ys[iy]);
            assert!((v - want).abs() < 1e-6, "node ({ix}, {iy}): {v} vs {want}");
        }
        // off-node evaluation adds bicubic interpolation error, O(h^4)
        for &(x, y) in &[(1.0, 0.0), (0.5, 0.25), (3.0, 4.0), (7.0, 7.0)] {
            let v = g.eval(x, y).unwrap();
            assert!(
                (v - truth(x, y)).abs() < 5e-6,
                "({x}, {y}): {v} vs {}",
                truth(x, y)
            );
        }
        assert_eq!(g.eval(1.0, 2.0).unwrap(), g.eval(-1.0, 2.0).unwrap());
    }

    #[test]
    fn hankel_far_field_matches_poisson_kernel() {
        let exp = CharExponent::cauchy(2);
        let truth = |rho: f64| 0.5 / PI / (1.0 + rho * rho).powf(1.5);
        for &rho in &[0.0, 1.0, 5.0] {
            let v = radial_density_hankel(&exp, 1.0, rho).unwrap();
            assert!((v - truth(rho)).abs() < 1e-9, "rho = {rho}");
        }
        let rho = 300.0;
        let v = radial_density_hankel(&exp, 1.0, rho).unwrap();
        assert!((v - truth(rho)).abs() < 1e-4 * truth(rho));
    }

    #[test]
    fn separable_grid_matches_product_of_factors() {
        let exp = CharExponent::sum_anisotropic(1.0, 1.5, 1, 1).unwrap();
        let spec = GridSpec::new(0.05, 10.0).unwrap();
        let g = invert_fourier_2d(&exp, 1.0, &spec).unwrap();
        assert!((g.mass_over_period - 1.0).abs() < 1e-10);
        // along the first axis the second factor contributes its diagonal
        let p15_0 = GAMMA_5_3 / PI;
        for &x in &[0.0, 0.5, 1.0, 3.0, 7.5] {
            let truth = cauchy_density(1.0, x) * p15_0;
            let v = g.eval(x, 0.0).unwrap();
            assert!((v - truth).abs() < 1e-7, "x = {x}: {v} vs {truth}");
        }
        assert_eq!(g.eval(1.0, 2.0).unwrap(), g.eval(-1.0, -2.0).unwrap());
    }

    #[test]
    fn planar_inversion_rejects_unsupported_shapes() {
        assert!(matches!(
            invert_fourier_2d(&CharExponent::cauchy(1), 1.0, &GridSpec::new(0.1, 5.0).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
        let aniso3 = CharExponent::sum_anisotropic(1.0, 1.5, 2, 1).unwrap();
        assert!(matches!(
            invert_fourier_2d(&aniso3, 1.0, &GridSpec::new(0.1, 5.0).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

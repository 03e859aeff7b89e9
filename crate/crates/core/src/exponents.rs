//! Catalog of characteristic exponents psi of symmetric Levy processes,
//! their evaluation, and the structural checks: subadditivity of sqrt(psi),
//! metric generation, and Euclidean radius bounds for metric balls.
//!
//! All catalog exponents are real, symmetric, and vanish at the origin.
//! Evaluation goes through squared coordinates, so psi(xi) == psi(-xi)
//! bit-exactly by construction.

use crate::bernstein::{bf_inverse, eval_bf, BernsteinFn};
use crate::report::{PropertyReport, Verdict};
use crate::roots::invert_increasing;
use crate::sampling::{rng, uniform_box};
use crate::table::TableRow;
use crate::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};

/// Exponent families. Radial kinds are functions of the squared Euclidean
/// radius s = |xi|^2; `SumAnisotropic` acts blockwise; `Composite` is a
/// Bernstein function of another exponent; `TableRow` borrows the exponent
/// column of the closed-form distribution catalog (one-dimensional).
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentKind {
    /// |xi|^2 / 2.
    Gaussian,
    /// |xi|.
    Cauchy,
    /// |xi|^alpha, 0 < alpha <= 2.
    Stable { alpha: f64 },
    /// ln cosh xi (one-dimensional).
    Meixner,
    /// sqrt(mass^2 + |xi|^2) - mass.
    Relativistic { mass: f64 },
    /// ln(1 + |xi|^2).
    LogCauchy,
    /// 1 - e^{-|xi|^2}; bounded, so large metric balls are unbounded sets.
    TruncatedGauss,
    /// |xi_A|^alpha + |xi_B|^beta on R^m x R^n.
    SumAnisotropic {
        alpha: f64,
        beta: f64,
        m: usize,
        n: usize,
    },
    /// f(psi(xi)) for a Bernstein function f with f(0) = 0.
    Composite {
        f: BernsteinFn,
        inner: Box<CharExponent>,
    },
    /// Exponent column of a distribution-catalog row.
    TableRow(TableRow),
}

/// A characteristic exponent together with its ambient dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CharExponent {
    pub kind: ExponentKind,
    pub dim: usize,
}

impl CharExponent {
    pub fn new(kind: ExponentKind, dim: usize) -> Result<Self> {
        let e = CharExponent { kind, dim };
        e.validate()?;
        Ok(e)
    }

    pub fn gaussian(dim: usize) -> Self {
        CharExponent {
            kind: ExponentKind::Gaussian,
            dim,
        }
    }

    pub fn cauchy(dim: usize) -> Self {
        CharExponent {
            kind: ExponentKind::Cauchy,
            dim,
        }
    }

    pub fn stable(alpha: f64, dim: usize) -> Result<Self> {
        CharExponent::new(ExponentKind::Stable { alpha }, dim)
    }

    pub fn meixner() -> Self {
        CharExponent {
            kind: ExponentKind::Meixner,
            dim: 1,
        }
    }

    pub fn relativistic(mass: f64, dim: usize) -> Result<Self> {
        CharExponent::new(ExponentKind::Relativistic { mass }, dim)
    }

    pub fn log_cauchy(dim: usize) -> Self {
        CharExponent {
            kind: ExponentKind::LogCauchy,
            dim,
        }
    }

    pub fn truncated_gauss(dim: usize) -> Self {
        CharExponent {
            kind: ExponentKind::TruncatedGauss,
            dim,
        }
    }

    pub fn sum_anisotropic(alpha: f64, beta: f64, m: usize, n: usize) -> Result<Self> {
        CharExponent::new(ExponentKind::SumAnisotropic { alpha, beta, m, n }, m + n)
    }

    pub fn table_row(row: TableRow) -> Result<Self> {
        CharExponent::new(ExponentKind::TableRow(row), 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::ParamOutOfRange("dimension must be positive".into()));
        }
        match &self.kind {
            ExponentKind::Stable { alpha } => {
                if !(*alpha > 0.0 && *alpha <= 2.0) {
                    return Err(Error::ParamOutOfRange(format!(
                        "stable index must lie in (0,2], got {alpha}"
                    )));
                }
            }
            ExponentKind::Meixner => {
                if self.dim != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: self.dim,
                    });
                }
            }
            ExponentKind::Relativistic { mass } => {
                if !(*mass > 0.0) {
                    return Err(Error::ParamOutOfRange(format!(
                        "relativistic mass must be positive, got {mass}"
                    )));
                }
            }
            ExponentKind::SumAnisotropic { alpha, beta, m, n } => {
                for a in [alpha, beta] {
                    if !(*a > 0.0 && *a <= 2.0) {
                        return Err(Error::ParamOutOfRange(format!(
                            "anisotropic block index must lie in (0,2], got {a}"
                        )));
                    }
                }
                if *m == 0 || *n == 0 || m + n != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: m + n,
                        got: self.dim,
                    });
                }
            }
            ExponentKind::Composite { f, inner } => {
                f.validate()?;
                inner.validate()?;
                if inner.dim != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: inner.dim,
                        got: self.dim,
                    });
                }
                let at0 = eval_bf(f, 0.0)
                    .map_err(|e| Error::NonzeroAtOrigin(format!("f undefined at 0: {e}")))?;
                if at0 != 0.0 {
                    return Err(Error::NonzeroAtOrigin(format!("f(0) = {at0}")));
                }
            }
            ExponentKind::TableRow(row) => {
                row.validate()?;
                if self.dim != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: self.dim,
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// True when psi is a function of |xi|^2 alone.
    pub fn is_radial(&self) -> bool {
        match &self.kind {
            ExponentKind::SumAnisotropic { .. } => false,
            ExponentKind::Composite { inner, .. } => inner.is_radial(),
            _ => true,
        }
    }

    /// Radial profile f with psi(xi) = f(|xi|^2), for radial kinds.
    pub fn radial_profile(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::NegativeArgument(format!("squared radius {s}")));
        }
        match &self.kind {
            ExponentKind::Gaussian => Ok(0.5 * s),
            ExponentKind::Cauchy => Ok(s.sqrt()),
            ExponentKind::Stable { alpha } => Ok(s.powf(0.5 * alpha)),
            ExponentKind::Meixner => Ok(crate::util::ln_cosh(s.sqrt())),
            ExponentKind::Relativistic { mass } => {
                // sqrt(m^2+s) - m without cancellation.
                Ok(s / ((mass * mass + s).sqrt() + mass))
            }
            ExponentKind::LogCauchy => Ok(s.ln_1p()),
            ExponentKind::TruncatedGauss => Ok(-(-s).exp_m1()),
            ExponentKind::SumAnisotropic { .. } => Err(Error::EvaluationFailure(
                "anisotropic exponent has no radial profile".into(),
            )),
            ExponentKind::Composite { f, inner } => {
                let v = inner.radial_profile(s)?;
                eval_bf(f, v)
            }
            ExponentKind::TableRow(row) => row.psi(row.verify_t(), s.sqrt()),
        }
    }

    /// Inverse of the radial profile: the squared radius s with f(s) = y.
    /// Closed forms throughout the catalog; table rows fall back to
    /// monotone bracketing at relative tolerance 1e-12.
    pub fn radial_inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::NegativeArgument(format!("level {y}")));
        }
        match &self.kind {
            ExponentKind::Gaussian => Ok(2.0 * y),
            ExponentKind::Cauchy => Ok(y * y),
            ExponentKind::Stable { alpha } => Ok(y.powf(2.0 / alpha)),
            ExponentKind::Meixner => {
                // f(s) = ln cosh sqrt(s) => sqrt(s) = acosh(e^y), evaluated
                // as y + ln(1 + sqrt(1 - e^{-2y})) to survive large y.
                let root = y + (1.0 - (-2.0 * y).exp()).sqrt().ln_1p();
                Ok(root * root)
            }
            ExponentKind::Relativistic { mass } => Ok(y * (y + 2.0 * mass)),
            ExponentKind::LogCauchy => Ok(y.exp_m1()),
            ExponentKind::TruncatedGauss => {
                if y >= 1.0 {
                    return Err(Error::RadiusTooLarge(format!(
                        "level {y} >= sup psi = 1; the level set is unbounded"
                    )));
                }
                Ok(-(-y).ln_1p())
            }
            ExponentKind::SumAnisotropic { .. } => Err(Error::EvaluationFailure(
                "anisotropic exponent has no radial profile".into(),
            )),
            ExponentKind::Composite { f, inner } => {
                let mid = bf_inverse(f, y).map_err(|e| match e {
                    Error::OutOfRange(msg) => Error::RadiusTooLarge(msg),
                    other => other,
                })?;
                inner.radial_inverse(mid)
            }
            ExponentKind::TableRow(_) => {
                if y == 0.0 {
                    return Ok(0.0);
                }
                let f = |s: f64| self.radial_profile(s).unwrap_or(f64::NAN);
                // Expand the bracket until the level is enclosed.
                let mut hi = 1.0;
                let mut iter = 0;
                while f(hi) < y {
                    hi *= 4.0;
                    iter += 1;
                    if iter > 600 || !hi.is_finite() {
                        return Err(Error::RadiusTooLarge(format!(
                            "level {y} not reached by the exponent within f64 range"
                        )));
                    }
                }
                invert_increasing(&f, y, 0.0, hi)
            }
        }
    }

    /// Exponent kappa with psi ~ c |xi|^kappa near the origin. Governs the
    /// spatial tail p_t(x) ~ |x|^{-(dim+kappa)} when kappa < 2; smooth
    /// exponents (kappa = 2) yield (sub)exponential spatial tails.
    pub fn origin_exponent(&self) -> f64 {
        match &self.kind {
            ExponentKind::Cauchy => 1.0,
            ExponentKind::Stable { alpha } => *alpha,
            ExponentKind::SumAnisotropic { alpha, beta, .. } => alpha.min(*beta),
            ExponentKind::Composite { f, inner } => {
                let f_pow = match f {
                    BernsteinFn::Power { alpha } => *alpha,
                    // All other catalog kinds are asymptotically linear at 0.
                    _ => 1.0,
                };
                (f_pow * inner.origin_exponent()).min(2.0)
            }
            ExponentKind::TableRow(TableRow::Cauchy) => 1.0,
            _ => 2.0,
        }
    }

    /// Spatial tail power a with p_t(x) ~ |x|^{-(dim+a)}, when polynomial.
    pub fn density_tail_power(&self) -> Option<f64> {
        let k = self.origin_exponent();
        if k < 2.0 {
            Some(k)
        } else {
            None
        }
    }
}

/// Evaluate psi(xi). Goes through squared (or absolute) coordinates, so the
/// result for -xi is bit-identical to the result for xi.
pub fn eval_psi(exp: &CharExponent, xi: &[f64]) -> Result<f64> {
    exp.validate()?;
    if xi.len() != exp.dim {
        return Err(Error::DimensionMismatch {
            expected: exp.dim,
            got: xi.len(),
        });
    }
    if xi.iter().any(|v| !v.is_finite()) {
        return Err(Error::EvaluationFailure(format!(
            "non-finite frequency argument {xi:?}"
        )));
    }
    match &exp.kind {
        ExponentKind::SumAnisotropic { alpha, beta, m, .. } => {
            let s1: f64 = xi[..*m].iter().map(|v| v * v).sum();
            let s2: f64 = xi[*m..].iter().map(|v| v * v).sum();
            Ok(s1.powf(0.5 * alpha) + s2.powf(0.5 * beta))
        }
        ExponentKind::Composite { f, inner } => {
            let v = eval_psi(inner, xi)?;
            eval_bf(f, v)
        }
        _ => {
            let s: f64 = xi.iter().map(|v| v * v).sum();
            exp.radial_profile(s)
        }
    }
}

/// How the radius bounds were obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RadiusMethod {
    /// Radial level set: the bounds coincide and are exact up to the
    /// profile-inversion tolerance.
    ExactRadial,
    /// Directional sampling: m is an upper estimate of the true inner
    /// radius, M a lower estimate of the outer one.
    RaySampled { rays: usize },
}

/// Euclidean inner and outer radii of the metric ball {psi < r^2}.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusBounds {
    pub r: f64,
    pub m: f64,
    pub big_m: f64,
    pub method: RadiusMethod,
}

/// Inner radius m(r) and outer radius M(r) of the level set {psi < r^2}.
///
/// Radial kinds invert the profile exactly; the anisotropic kind samples
/// rays (both block axes always included) and reports estimates.
pub fn radius_bounds(exp: &CharExponent, r: f64) -> Result<RadiusBounds> {
    exp.validate()?;
    if !(r > 0.0) {
        return Err(Error::ParamOutOfRange(format!(
            "metric radius must be positive, got {r}"
        )));
    }
    let y = r * r;
    if exp.is_radial() {
        let s = exp.radial_inverse(y)?;
        let rho = s.sqrt();
        return Ok(RadiusBounds {
            r,
            m: rho,
            big_m: rho,
            method: RadiusMethod::ExactRadial,
        });
    }
    let rays = if exp.dim <= 2 { 64 } else { 256 };
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(rays);
    // Axis directions carry the blockwise extremes.
    for i in 0..exp.dim {
        let mut u = vec![0.0; exp.dim];
        u[i] = 1.0;
        dirs.push(u);
    }
    let mut r128 = rng(0x5261_7953);
    while dirs.len() < rays {
        let batch = uniform_box(&mut r128, exp.dim, 1.0, 1);
        let v = &batch[0];
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            dirs.push(v.iter().map(|x| x / norm).collect());
        }
    }
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for u in &dirs {
        let along = |rho: f64| -> f64 {
            let xi: Vec<f64> = u.iter().map(|c| c * rho).collect();
            eval_psi(exp, &xi).unwrap_or(f64::NAN)
        };
        let mut bracket = 1.0;
        let mut iter = 0;
        while along(bracket) < y {
            bracket *= 4.0;
            iter += 1;
            if iter > 600 || !bracket.is_finite() {
                return Err(Error::RadiusTooLarge(format!(
                    "level {y} unreachable along a sampled ray"
                )));
            }
        }
        let rho = invert_increasing(&along, y, 0.0, bracket)?;
        lo = lo.min(rho);
        hi = hi.max(rho);
    }
    Ok(RadiusBounds {
        r,
        m: lo,
        big_m: hi,
        method: RadiusMethod::RaySampled { rays: dirs.len() },
    })
}

/// Seeded sampler configuration for pairwise property checks.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PointSampler {
    pub seed: u64,
    pub count: usize,
    pub extent: f64,
}

impl Default for PointSampler {
    fn default() -> Self {
        PointSampler {
            seed: 7,
            count: 10_000,
            extent: 50.0,
        }
    }
}

/// Check sqrt(psi(xi+eta)) <= sqrt(psi(xi)) + sqrt(psi(eta)) on sampled
/// pairs; the tolerance 1e-12 (1 + scale) absorbs rounding at the scale of
/// the square roots involved.
pub fn check_subadditivity(exp: &CharExponent, sampler: &PointSampler) -> Result<PropertyReport> {
    exp.validate()?;
    let dim = exp.dim;
    check_subadditivity_fn(|xi| eval_psi(exp, xi), dim, sampler)
}

/// Closure-based core of `check_subadditivity`, usable with synthetic
/// non-catalog exponents in tests.
pub fn check_subadditivity_fn<F: Fn(&[f64]) -> Result<f64>>(
    psi: F,
    dim: usize,
    sampler: &PointSampler,
) -> Result<PropertyReport> {
    let mut r = rng(sampler.seed);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_witness: Vec<f64> = Vec::new();
    let mut worst_tol = 0.0;
    let mut violated = false;
    for _ in 0..sampler.count {
        let pair = uniform_box(&mut r, dim, sampler.extent, 2);
        let xi = &pair[0];
        let eta = &pair[1];
        let sum: Vec<f64> = xi.iter().zip(eta).map(|(a, b)| a + b).collect();
        let sa = psi(&sum)?.max(0.0).sqrt();
        let sb = psi(xi)?.max(0.0).sqrt();
        let sc = psi(eta)?.max(0.0).sqrt();
        let v = sa - sb - sc;
        let tol = 1e-12 * (1.0 + sa.max(sb).max(sc));
        if v > worst {
            worst = v;
            worst_witness = xi.iter().chain(eta.iter()).cloned().collect();
            worst_tol = tol;
        }
        if v > tol {
            violated = true;
        }
    }
    Ok(PropertyReport {
        verdict: if violated { Verdict::Fail } else { Verdict::Pass },
        worst_violation: worst,
        witness: worst_witness,
        tolerance_used: worst_tol,
    })
}

/// Radial probe schedule for `is_metric_generating`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialProbe {
    /// Increasing radii R_1 < ... < R_K.
    pub radii: Vec<f64>,
    /// Directions sampled per radius for non-radial exponents.
    pub directions: usize,
    pub seed: u64,
}

impl RadialProbe {
    pub fn up_to(r_max: f64) -> Self {
        RadialProbe {
            radii: crate::util::logspace(1.0, r_max, 13),
            directions: 64,
            seed: 11,
        }
    }
}

/// Three-valued outcome of the metric-generation probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MetricGenVerdict {
    /// inf |xi| >= R of psi stayed above a positive floor on every probed
    /// radius; says nothing beyond the probed range.
    ConfirmedOnRange,
    Inconclusive,
    /// A sampled point with arbitrarily large |xi| had psi ~ 0.
    Rejected,
}

impl std::fmt::Display for MetricGenVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MetricGenVerdict::ConfirmedOnRange => "CONFIRMED_ON_RANGE",
            MetricGenVerdict::Inconclusive => "INCONCLUSIVE",
            MetricGenVerdict::Rejected => "REJECTED",
        };
        f.write_str(s)
    }
}

/// Metric-generation probe report: the estimated floors inf psi on
/// {|xi| >= R} per probed radius.
#[derive(Debug, Clone, Serialize)]
pub struct MetricGenReport {
    pub verdict: MetricGenVerdict,
    pub floors: Vec<(f64, f64)>,
}

/// Estimate inf_{|xi| >= R} psi over the probe radii. The verdict is
/// range-qualified: a finite probe can never certify the liminf at infinity.
pub fn is_metric_generating(exp: &CharExponent, probe: &RadialProbe) -> Result<MetricGenReport> {
    exp.validate()?;
    if exp.is_radial() {
        // Profiles are nondecreasing; the infimum sits at the inner edge.
        let mut floors = Vec::with_capacity(probe.radii.len());
        for &r in &probe.radii {
            floors.push((r, exp.radial_profile(r * r)?));
        }
        let verdict = if floors.iter().all(|&(_, f)| f > 1e-10) {
            MetricGenVerdict::ConfirmedOnRange
        } else {
            MetricGenVerdict::Rejected
        };
        return Ok(MetricGenReport { verdict, floors });
    }
    let dim = exp.dim;
    is_metric_generating_fn(|xi| eval_psi(exp, xi), dim, probe)
}

/// Closure-based core of `is_metric_generating`: samples directions and
/// radii in [R, 2R] per probed R and takes the minimum.
pub fn is_metric_generating_fn<F: Fn(&[f64]) -> Result<f64>>(
    psi: F,
    dim: usize,
    probe: &RadialProbe,
) -> Result<MetricGenReport> {
    let mut r128 = rng(probe.seed);
    let mut floors = Vec::with_capacity(probe.radii.len());
    for &radius in &probe.radii {
        let mut floor = f64::INFINITY;
        let mut best: Option<(Vec<f64>, f64)> = None;
        for _ in 0..probe.directions {
            let batch = uniform_box(&mut r128, dim, 1.0, 1);
            let v = &batch[0];
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            let unit: Vec<f64> = v.iter().map(|c| c / norm).collect();
            for k in 0..4 {
                let rho = radius * (1.0 + k as f64 / 3.0);
                let xi: Vec<f64> = unit.iter().map(|c| c * rho).collect();
                let val = psi(&xi)?;
                if val < floor {
                    floor = val;
                    best = Some((unit.clone(), rho));
                }
            }
        }
        // Sharpen along the worst ray: zeros of psi far out sit at local
        // minima that coarse sampling only grazes (a periodic exponent
        // vanishes on a measure-zero set no sample will hit exactly).
        if let Some((unit, rho0)) = best {
            let g = |rho: f64| -> Result<f64> {
                let xi: Vec<f64> = unit.iter().map(|c| c * rho).collect();
                psi(&xi)
            };
            // Bracket of one coarse spacing either side, golden-section.
            let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
            let mut lo = (rho0 - radius / 3.0).max(0.5 * radius);
            let mut hi = rho0 + radius / 3.0;
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let mut f1 = g(x1)?;
            let mut f2 = g(x2)?;
            for _ in 0..60 {
                if f1 <= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = g(x1)?;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = g(x2)?;
                }
            }
            floor = floor.min(f1).min(f2);
        }
        floors.push((radius, floor));
    }
    let min_floor = floors.iter().map(|&(_, f)| f).fold(f64::INFINITY, f64::min);
    let verdict = if min_floor <= 1e-10 {
        MetricGenVerdict::Rejected
    } else if min_floor > 1e-6 {
        MetricGenVerdict::ConfirmedOnRange
    } else {
        MetricGenVerdict::Inconclusive
    };
    Ok(MetricGenReport { verdict, floors })
}

/// Compose a Bernstein function with an exponent; requires f(0) = 0 so the
/// result is again a valid exponent.
pub fn compose(f: BernsteinFn, exp: CharExponent) -> Result<CharExponent> {
    let dim = exp.dim;
    CharExponent::new(
        ExponentKind::Composite {
            f,
            inner: Box::new(exp),
        },
        dim,
    )
}

// ---------------------------------------------------------------------------
// JSON model schema
//
// Flat objects with a "kind" discriminator:
//   {"kind":"stable","alpha":1.5,"dim":1}
//   {"kind":"sum_anisotropic","alpha":1.0,"beta":1.5,"m":1,"n":1}
//   {"kind":"composite","bf":{"kind":"power","alpha":0.5},"inner":{...}}
//   {"kind":"table_row","row":{"row":"meixner"},"dim":1}
// Unknown fields are rejected, as are fields that do not belong to the kind.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    kind: String,
    dim: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    mass: Option<f64>,
    m: Option<usize>,
    n: Option<usize>,
    bf: Option<BernsteinFn>,
    inner: Option<serde_json::Value>,
    row: Option<serde_json::Value>,
}

fn field_err(kind: &str, field: &str) -> Error {
    Error::ParamOutOfRange(format!("field \"{field}\" does not apply to kind \"{kind}\""))
}

fn require<T>(v: Option<T>, kind: &str, field: &str) -> Result<T> {
    v.ok_or_else(|| Error::ParamOutOfRange(format!("kind \"{kind}\" requires field \"{field}\"")))
}

impl CharExponent {
    /// Parse the JSON model schema; see the module docs for the shape.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let mj: ModelJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::ParamOutOfRange(format!("model JSON: {e}")))?;
        let kind = mj.kind.as_str();
        // Reject stray fields not used by this kind.
        let allow = |name: &str| -> bool {
            matches!(
                (kind, name),
                (_, "dim")
                    | ("stable", "alpha")
                    | ("relativistic", "mass")
                    | ("sum_anisotropic", "alpha" | "beta" | "m" | "n")
                    | ("composite", "bf" | "inner")
                    | ("table_row", "row")
            )
        };
        for (name, present) in [
            ("alpha", mj.alpha.is_some()),
            ("beta", mj.beta.is_some()),
            ("mass", mj.mass.is_some()),
            ("m", mj.m.is_some()),
            ("n", mj.n.is_some()),
            ("bf", mj.bf.is_some()),
            ("inner", mj.inner.is_some()),
            ("row", mj.row.is_some()),
        ] {
            if present && !allow(name) {
                return Err(field_err(kind, name));
            }
        }
        let dim = mj.dim.unwrap_or(1);
        match kind {
            "gaussian" => CharExponent::new(ExponentKind::Gaussian, dim),
            "cauchy" => CharExponent::new(ExponentKind::Cauchy, dim),
            "stable" => {
                let alpha = require(mj.alpha, kind, "alpha")?;
                CharExponent::stable(alpha, dim)
            }
            "meixner" => CharExponent::new(ExponentKind::Meixner, dim),
            "relativistic" => {
                let mass = require(mj.mass, kind, "mass")?;
                CharExponent::relativistic(mass, dim)
            }
            "log_cauchy" => CharExponent::new(ExponentKind::LogCauchy, dim),
            "truncated_gauss" => CharExponent::new(ExponentKind::TruncatedGauss, dim),
            "sum_anisotropic" => {
                let alpha = require(mj.alpha, kind, "alpha")?;
                let beta = require(mj.beta, kind, "beta")?;
                let m = require(mj.m, kind, "m")?;
                let n = require(mj.n, kind, "n")?;
                if let Some(d) = mj.dim {
                    if d != m + n {
                        return Err(Error::DimensionMismatch {
                            expected: m + n,
                            got: d,
                        });
                    }
                }
                CharExponent::sum_anisotropic(alpha, beta, m, n)
            }
            "composite" => {
                let f = require(mj.bf, kind, "bf")?;
                let inner_v = require(mj.inner, kind, "inner")?;
                let inner = CharExponent::from_json(&inner_v)?;
                if let Some(d) = mj.dim {
                    if d != inner.dim {
                        return Err(Error::DimensionMismatch {
                            expected: inner.dim,
                            got: d,
                        });
                    }
                }
                compose(f, inner)
            }
            "table_row" => {
                let row_v = require(mj.row, kind, "row")?;
                let row: TableRow = if let Some(name) = row_v.as_str() {
                    TableRow::from_name(name).ok_or_else(|| {
                        Error::ParamOutOfRange(format!("unknown table row \"{name}\""))
                    })?
                } else {
                    serde_json::from_value(row_v)
                        .map_err(|e| Error::ParamOutOfRange(format!("table row: {e}")))?
                };
                CharExponent::table_row(row)
            }
            other => Err(Error::ParamOutOfRange(format!(
                "unknown exponent kind \"{other}\""
            ))),
        }
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::ParamOutOfRange(format!("model JSON: {e}")))?;
        CharExponent::from_json(&v)
    }

    /// Serialize to the same flat schema `from_json` accepts.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match &self.kind {
            ExponentKind::Gaussian => json!({"kind": "gaussian", "dim": self.dim}),
            ExponentKind::Cauchy => json!({"kind": "cauchy", "dim": self.dim}),
            ExponentKind::Stable { alpha } => {
                json!({"kind": "stable", "alpha": alpha, "dim": self.dim})
            }
            ExponentKind::Meixner => json!({"kind": "meixner", "dim": 1}),
            ExponentKind::Relativistic { mass } => {
                json!({"kind": "relativistic", "mass": mass, "dim": self.dim})
            }
            ExponentKind::LogCauchy => json!({"kind": "log_cauchy", "dim": self.dim}),
            ExponentKind::TruncatedGauss => {
                json!({"kind": "truncated_gauss", "dim": self.dim})
            }
            ExponentKind::SumAnisotropic { alpha, beta, m, n } => {
                json!({"kind": "sum_anisotropic", "alpha": alpha, "beta": beta, "m": m, "n": n})
            }
            ExponentKind::Composite { f, inner } => {
                json!({"kind": "composite", "bf": f, "inner": inner.to_json()})
            }
            ExponentKind::TableRow(row) => {
                json!({"kind": "table_row", "row": row, "dim": 1})
            }
        }
    }
}

impl Serialize for CharExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        CharExponent::from_json(&v).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn catalog_values() {
        assert_eq!(eval_psi(&CharExponent::cauchy(1), &[2.0]).unwrap(), 2.0);
        assert_eq!(eval_psi(&CharExponent::meixner(), &[0.0]).unwrap(), 0.0);
        assert_relative_eq!(
            eval_psi(&CharExponent::relativistic(1.0, 1).unwrap(), &[1.0]).unwrap(),
            std::f64::consts::SQRT_2 - 1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            eval_psi(&CharExponent::gaussian(2), &[1.0, 1.0]).unwrap(),
            1.0
        );
        let sa = CharExponent::sum_anisotropic(1.0, 1.5, 1, 1).unwrap();
        assert_relative_eq!(
            eval_psi(&sa, &[2.0, 4.0]).unwrap(),
            2.0 + 4.0f64.powf(1.5),
            max_relative = 1e-14
        );
    }

    #[test]
    fn evenness_is_bit_exact() {
        let exps = [
            CharExponent::gaussian(2),
            CharExponent::cauchy(2),
            CharExponent::stable(1.5, 2).unwrap(),
            CharExponent::log_cauchy(2),
            CharExponent::truncated_gauss(2),
            CharExponent::sum_anisotropic(1.0, 1.5, 1, 1).unwrap(),
        ];
        let mut r = rng(3);
        for exp in &exps {
            for xi in uniform_box(&mut r, 2, 30.0, 100) {
                let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
                let a = eval_psi(exp, &xi).unwrap();
                let b = eval_psi(exp, &neg).unwrap();
                assert_eq!(a.to_bits(), b.to_bits(), "{exp:?} at {xi:?}");
            }
        }
        let mx = CharExponent::meixner();
        for x in [0.3, 1.7, 9.4] {
            assert_eq!(
                eval_psi(&mx, &[x]).unwrap().to_bits(),
                eval_psi(&mx, &[-x]).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn zero_at_origin() {
        let exps = [
            CharExponent::gaussian(1),
            CharExponent::cauchy(1),
            CharExponent::stable(0.7, 1).unwrap(),
            CharExponent::meixner(),
            CharExponent::relativistic(2.0, 1).unwrap(),
            CharExponent::log_cauchy(1),
            CharExponent::truncated_gauss(1),
        ];
        for exp in exps {
            assert_eq!(eval_psi(&exp, &[0.0]).unwrap(), 0.0, "{exp:?}");
        }
        let sa = CharExponent::sum_anisotropic(0.8, 1.2, 1, 2).unwrap();
        assert_eq!(eval_psi(&sa, &[0.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn subadditivity_of_catalog() {
        let sampler = PointSampler {
            seed: 5,
            count: 10_000,
            extent: 50.0,
        };
        for exp in [
            CharExponent::cauchy(1),
            CharExponent::gaussian(1),
            CharExponent::meixner(),
            CharExponent::log_cauchy(2),
        ] {
            let rep = check_subadditivity(&exp, &sampler).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "{exp:?}: {rep:?}");
        }
    }

    #[test]
    fn quartic_hook_fails_subadditivity() {
        // psi(xi) = xi^4 is not negative definite; at xi = eta = 1 the
        // sum side is sqrt(16) = 4 > 2.
        let rep = check_subadditivity_fn(
            |xi| Ok(xi[0].powi(4)),
            1,
            &PointSampler {
                seed: 1,
                count: 4000,
                extent: 5.0,
            },
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.worst_violation > 1.0, "{rep:?}");
    }

    #[test]
    fn radius_bounds_examples() {
        let b = radius_bounds(&CharExponent::cauchy(1), 3.0).unwrap();
        assert_relative_eq!(b.m, 9.0, max_relative = 1e-12);
        assert_relative_eq!(b.big_m, 9.0, max_relative = 1e-12);
        assert_eq!(b.method, RadiusMethod::ExactRadial);

        let b = radius_bounds(&CharExponent::stable(2.0, 1).unwrap(), 2.0).unwrap();
        assert_relative_eq!(b.m, 2.0, max_relative = 1e-12);

        let b = radius_bounds(&CharExponent::log_cauchy(1), 1.0).unwrap();
        assert_relative_eq!(
            b.m,
            (std::f64::consts::E - 1.0).sqrt(),
            max_relative = 1e-9
        );
        assert_relative_eq!(b.m, 1.310_832_4f64, max_relative = 1e-6);
    }

    #[test]
    fn truncated_gauss_radius_cap() {
        let e = CharExponent::truncated_gauss(1);
        assert!(radius_bounds(&e, 0.9).is_ok());
        assert!(matches!(
            radius_bounds(&e, 1.0),
            Err(Error::RadiusTooLarge(_))
        ));
    }

    #[test]
    fn anisotropic_ray_bounds_bracket_axes() {
        let e = CharExponent::sum_anisotropic(1.0, 1.5, 1, 1).unwrap();
        let b = radius_bounds(&e, 2.0).unwrap();
        // Axis solutions: rho_1 = (r^2)^{1/1} = 4, rho_2 = 4^{2/3}.
        let ax1 = 4.0f64;
        let ax2 = 4.0f64.powf(2.0 / 3.0);
        assert!(b.big_m >= ax1.max(ax2) - 1e-9, "{b:?}");
        assert!(b.m <= ax1.min(ax2) + 1e-9, "{b:?}");
        assert!(b.m > 0.0 && b.m <= b.big_m);
        assert!(matches!(b.method, RadiusMethod::RaySampled { rays: 64 }));
    }

    #[test]
    fn radius_bounds_monotone_in_r() {
        for exp in [
            CharExponent::meixner(),
            CharExponent::relativistic(0.5, 1).unwrap(),
            CharExponent::sum_anisotropic(0.8, 1.7, 1, 1).unwrap(),
        ] {
            let mut prev = (0.0, 0.0);
            for &r in &[0.5, 1.0, 2.0, 4.0] {
                let b = radius_bounds(&exp, r).unwrap();
                assert!(b.m >= prev.0 - 1e-12 && b.big_m >= prev.1 - 1e-12, "{exp:?} r={r}");
                prev = (b.m, b.big_m);
            }
        }
    }

    #[test]
    fn sandwich_property_radial() {
        let mut r = rng(17);
        for exp in [
            CharExponent::cauchy(2),
            CharExponent::stable(1.3, 2).unwrap(),
            CharExponent::log_cauchy(2),
        ] {
            let b = radius_bounds(&exp, 1.7).unwrap();
            for xi in uniform_box(&mut r, 2, 1.0, 50) {
                let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm < 1e-6 {
                    continue;
                }
                let inside: Vec<f64> = xi.iter().map(|v| v / norm * b.m * 0.999).collect();
                let outside: Vec<f64> = xi.iter().map(|v| v / norm * b.big_m * 1.001).collect();
                assert!(eval_psi(&exp, &inside).unwrap() < 1.7 * 1.7);
                assert!(eval_psi(&exp, &outside).unwrap() > 1.7 * 1.7);
            }
        }
    }

    #[test]
    fn metric_generation_verdicts() {
        let probe = RadialProbe::up_to(1e3);
        let rep = is_metric_generating(&CharExponent::cauchy(1), &probe).unwrap();
        assert_eq!(rep.verdict, MetricGenVerdict::ConfirmedOnRange);

        let rep = is_metric_generating(&CharExponent::truncated_gauss(1), &probe).unwrap();
        assert_eq!(rep.verdict, MetricGenVerdict::ConfirmedOnRange);
        let last_floor = rep.floors.last().unwrap().1;
        assert_relative_eq!(last_floor, 1.0, max_relative = 1e-9);

        // Periodic hook: psi(2 pi k) = 0 arbitrarily far out.
        let rep = is_metric_generating_fn(|xi| Ok(1.0 - xi[0].cos()), 1, &probe).unwrap();
        assert_ne!(rep.verdict, MetricGenVerdict::ConfirmedOnRange, "{rep:?}");
    }

    #[test]
    fn composition_rules() {
        let sq = compose(
            BernsteinFn::power(0.5).unwrap(),
            CharExponent::stable(2.0, 1).unwrap(),
        )
        .unwrap();
        for &x in &[0.3, 1.0, 4.0] {
            assert_relative_eq!(
                eval_psi(&sq, &[x]).unwrap(),
                x.abs(),
                max_relative = 1e-12
            );
        }
        let lc = compose(BernsteinFn::Log1p, CharExponent::stable(2.0, 1).unwrap()).unwrap();
        for &x in &[0.5, 2.0] {
            assert_relative_eq!(
                eval_psi(&lc, &[x]).unwrap(),
                eval_psi(&CharExponent::log_cauchy(1), &[x]).unwrap(),
                max_relative = 1e-12
            );
        }
        let idem = compose(BernsteinFn::Linear, CharExponent::meixner()).unwrap();
        for &x in &[0.1, 0.9, 3.3, 8.0] {
            assert_eq!(
                eval_psi(&idem, &[x]).unwrap(),
                eval_psi(&CharExponent::meixner(), &[x]).unwrap()
            );
        }
        // f(0) != 0 rejected.
        let shifted = BernsteinFn::tabulated(vec![0.0, 1.0], vec![0.5, 1.0]).unwrap();
        assert!(matches!(
            compose(shifted, CharExponent::gaussian(1)),
            Err(Error::NonzeroAtOrigin(_))
        ));
    }

    #[test]
    fn json_schema_round_trip() {
        let e = CharExponent::parse_json(r#"{"kind":"stable","alpha":1.5,"dim":1}"#).unwrap();
        assert_eq!(e, CharExponent::stable(1.5, 1).unwrap());
        let back = CharExponent::from_json(&e.to_json()).unwrap();
        assert_eq!(back, e);

        let c = CharExponent::parse_json(
            r#"{"kind":"composite","bf":{"kind":"power","alpha":0.5},"inner":{"kind":"gaussian","dim":2}}"#,
        )
        .unwrap();
        assert_eq!(c.dim, 2);
        assert_eq!(CharExponent::from_json(&c.to_json()).unwrap(), c);

        let t = CharExponent::parse_json(r#"{"kind":"table_row","row":"meixner"}"#).unwrap();
        assert_eq!(t.kind, ExponentKind::TableRow(TableRow::Meixner));

        // Unknown top-level and stray per-kind fields rejected.
        assert!(CharExponent::parse_json(r#"{"kind":"stable","alpha":1.5,"zeta":3}"#).is_err());
        assert!(CharExponent::parse_json(r#"{"kind":"cauchy","alpha":1.5}"#).is_err());
        assert!(CharExponent::parse_json(r#"{"kind":"stable","alpha":2.5}"#).is_err());
    }

    #[test]
    fn origin_exponent_hints() {
        assert_eq!(CharExponent::cauchy(1).density_tail_power(), Some(1.0));
        assert_eq!(
            CharExponent::stable(0.6, 1).unwrap().density_tail_power(),
            Some(0.6)
        );
        assert_eq!(CharExponent::gaussian(1).density_tail_power(), None);
        assert_eq!(CharExponent::meixner().density_tail_power(), None);
        let sq = compose(
            BernsteinFn::power(0.5).unwrap(),
            CharExponent::gaussian(1),
        )
        .unwrap();
        assert_eq!(sq.density_tail_power(), Some(1.0));
    }
}

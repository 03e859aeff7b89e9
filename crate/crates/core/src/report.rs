//! Structured results for the property-check routines.
//!
//! Checks never panic on a negative outcome: they return one of these
//! reports so callers (tests, the CLI) can render or assert as needed.

use serde::{Deserialize, Serialize};

/// Three-way outcome of a numeric property check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// Outcome of a generic inequality check over sampled points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReport {
    pub verdict: Verdict,
    /// Most negative slack observed (0 when the property held everywhere).
    pub worst_violation: f64,
    /// Sample point realizing the worst slack.
    pub witness: Vec<f64>,
    /// Tolerance the verdict was decided against.
    pub tolerance_used: f64,
}

impl PropertyReport {
    pub fn pass(tolerance: f64) -> Self {
        PropertyReport {
            verdict: Verdict::Pass,
            worst_violation: 0.0,
            witness: Vec::new(),
            tolerance_used: tolerance,
        }
    }
}

/// Outcome of a sign-pattern (complete monotonicity / Bernstein) check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub verdict: Verdict,
    /// Highest divided-difference order that was examined.
    pub order: usize,
    /// Evaluation grid the difference windows were taken on.
    pub grid: Vec<f64>,
    /// Worst net sign violation over all windows, noise budget already
    /// subtracted: positive iff some window definitely breaks the expected
    /// sign pattern.
    pub worst_sign_violation: f64,
    /// (order, window start, signed value) of the first definite violation.
    pub first_violation: Option<(usize, f64, f64)>,
}

/// Outcome of a volume-doubling scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoublingReport {
    /// Largest observed v(2r)/v(r) over the scanned range.
    pub c2_estimate: f64,
    /// Radius range the scan covered.
    pub range: (f64, f64),
    pub verdict: DoublingVerdict,
    /// Radius attaining the extreme ratio.
    pub witness: f64,
    /// One-line justification of the verdict.
    pub rationale: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DoublingVerdict {
    /// Ratio bounded over the whole scanned range.
    DoublingOnRange,
    /// Ratio grows without bound as r increases.
    Fails,
    /// Meaningful only on an initial sub-range: the scan stopped where
    /// doubled balls acquire infinite volume.
    LocalOnly,
}

impl std::fmt::Display for DoublingVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DoublingVerdict::DoublingOnRange => write!(f, "DOUBLING_ON_RANGE"),
            DoublingVerdict::Fails => write!(f, "FAILS"),
            DoublingVerdict::LocalOnly => write!(f, "LOCAL_ONLY"),
        }
    }
}

/// Outcome of the negative-definiteness (Gram matrix) test for a
/// candidate metric form.  A refutation is a certificate (witness stored);
/// consistency is only "no counterexample found".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CndfVerdict {
    /// True when every sampled Gram matrix was positive semidefinite.
    pub consistent: bool,
    /// Scale parameters s the kernel exp(-s d2) was tested at.
    pub s_values: Vec<f64>,
    /// Random point sets examined per scale (0 when the test did not run).
    pub sets_per_scale: usize,
    /// Points in each set.
    pub points_per_set: usize,
    /// Half-widths of the sampling boxes the sets were drawn from.
    pub extents: Vec<f64>,
    /// Most negative eigenvalue observed, normalized by matrix trace.
    pub min_eigenvalue: f64,
    /// Scale parameter s at which it occurred.
    pub witness_s: f64,
    /// Point set realizing the violation (flattened; empty when consistent).
    pub witness_points: Vec<f64>,
}

impl CndfVerdict {
    /// Placeholder for a test that could not run; carries no evidence.
    pub fn not_run() -> Self {
        CndfVerdict {
            consistent: true,
            s_values: Vec::new(),
            sets_per_scale: 0,
            points_per_set: 0,
            extents: Vec::new(),
            min_eigenvalue: 0.0,
            witness_s: 0.0,
            witness_points: Vec::new(),
        }
    }
}

/// Asymptotic behaviour of -ln P(|X| > r) / (r ln r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TailTrend {
    Diverging,
    Bounded,
    Vanishing,
}

impl std::fmt::Display for TailTrend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailTrend::Diverging => write!(f, "DIVERGING"),
            TailTrend::Bounded => write!(f, "BOUNDED"),
            TailTrend::Vanishing => write!(f, "VANISHING"),
        }
    }
}

/// Pair of independent evaluations of the on-diagonal density, plus the
/// comparison against the metric-ball volume at radius 1/sqrt(t).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagonalResult {
    pub t: f64,
    /// Direct evaluation of p_t(0) by frequency-side quadrature.
    pub direct: f64,
    /// Evaluation through the ball-volume integral representation.
    pub volume_formula: f64,
    /// Volume of the metric ball of radius 1/sqrt(t).
    pub ball_volume_at_inv_sqrt_t: f64,
    /// direct / ball_volume_at_inv_sqrt_t (constant in t under doubling).
    pub ratio: f64,
}

impl DiagonalResult {
    pub fn new(t: f64, direct: f64, volume_formula: f64, ball_volume_at_inv_sqrt_t: f64) -> Self {
        DiagonalResult {
            t,
            direct,
            volume_formula,
            ball_volume_at_inv_sqrt_t,
            ratio: direct / ball_volume_at_inv_sqrt_t,
        }
    }

    /// |direct - volume_formula| relative to the larger magnitude.
    pub fn rel_gap(&self) -> f64 {
        let scale = self.direct.abs().max(self.volume_formula.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.direct - self.volume_formula).abs() / scale
        }
    }
}

/// Verdict bundle produced by the class-membership classifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub verdict: ClassNVerdict,
    /// Human-readable grounds for the verdict.
    pub reason: String,
    pub triangle: PropertyReport,
    pub gram: CndfVerdict,
    /// Tail trend of the normalized frequency-side density (None when the
    /// scan could not run).
    pub dual_tail: Option<TailTrend>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassNVerdict {
    ClassNConsistent,
    NotClassN,
    Inconclusive,
}

impl std::fmt::Display for ClassNVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassNVerdict::ClassNConsistent => write!(f, "CLASS_N_CONSISTENT"),
            ClassNVerdict::NotClassN => write!(f, "NOT_CLASS_N"),
            ClassNVerdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// Trend of -ln P(|X| > r) / (r ln r) over an r-grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailReport {
    pub radii: Vec<f64>,
    /// -ln P(|X| > r) / (r ln r) per radius.
    pub ratios: Vec<f64>,
    pub trend: TailTrend,
}

//! Closed-form catalog of one-dimensional symmetric distributions: density,
//! characteristic function, characteristic exponent, and the squared metric
//! -ln(p_t(x)/p_t(0)) for each row, plus a self-consistency harness that
//! cross-checks the three formulas of a row against each other by quadrature.
//!
//! Some rows are genuine convolution semigroups evaluable at every t > 0;
//! others are printed only at a single t (the hyperbolic and both sinh rows)
//! or are t-indexed families rather than semigroups (Laplace).

use crate::quad::{fourier_cos, integrate_0_inf};
use crate::special::{ln_bessel_k, ln_gamma, ln_gamma_complex};
use crate::util::{ln_cosh, ln_sinh};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One row of the distribution catalog. Parameterized rows carry their own
/// parameters; `default_rows` supplies the reference parameter choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "row", rename_all = "snake_case", deny_unknown_fields)]
pub enum TableRow {
    Normal,
    Cauchy,
    Laplace,
    /// Generalized hyperbolic with index lambda and scale pair (eta, kappa).
    Gh { lambda: f64, kappa: f64, eta: f64 },
    Hyperbolic { alpha: f64, delta: f64 },
    Relativistic { alpha: f64 },
    Meixner,
    Sinh1,
    Sinh2,
}

impl TableRow {
    // The single-field arm could fold into a match guard, but the arms are
    // kept structurally parallel on purpose.
    #[allow(clippy::collapsible_match)]
    pub fn validate(&self) -> Result<()> {
        match self {
            TableRow::Gh { kappa, eta, .. } => {
                if !(*kappa > 0.0 && *eta > 0.0) {
                    return Err(Error::ParamOutOfRange(format!(
                        "gh row needs kappa > 0 and eta > 0, got kappa={kappa}, eta={eta}"
                    )));
                }
            }
            TableRow::Hyperbolic { alpha, delta } => {
                if !(*alpha > 0.0 && *delta > 0.0) {
                    return Err(Error::ParamOutOfRange(format!(
                        "hyperbolic row needs alpha > 0 and delta > 0, got alpha={alpha}, delta={delta}"
                    )));
                }
            }
            TableRow::Relativistic { alpha } => {
                if !(*alpha > 0.0) {
                    return Err(Error::ParamOutOfRange(format!(
                        "relativistic row needs alpha > 0, got {alpha}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            TableRow::Normal => "normal",
            TableRow::Cauchy => "cauchy",
            TableRow::Laplace => "laplace",
            TableRow::Gh { .. } => "gh",
            TableRow::Hyperbolic { .. } => "hyperbolic",
            TableRow::Relativistic { .. } => "relativistic",
            TableRow::Meixner => "meixner",
            TableRow::Sinh1 => "sinh1",
            TableRow::Sinh2 => "sinh2",
        }
    }

    /// Row by name, with reference parameters for the parameterized rows.
    pub fn from_name(name: &str) -> Option<TableRow> {
        default_rows().into_iter().find(|r| r.name() == name)
    }

    /// The single t the row's formulas are valid at, or None when any t > 0
    /// is admissible.
    pub fn supported_t(&self) -> Option<f64> {
        match self {
            TableRow::Gh { .. } | TableRow::Hyperbolic { .. } | TableRow::Sinh1 => Some(1.0),
            TableRow::Sinh2 => Some(2.0),
            _ => None,
        }
    }

    /// The t used by the verification harness.
    pub fn verify_t(&self) -> f64 {
        self.supported_t().unwrap_or(1.0)
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(t > 0.0) {
            return Err(Error::ParamOutOfRange(format!("t must be positive, got {t}")));
        }
        if let Some(t0) = self.supported_t() {
            if (t - t0).abs() > 1e-12 {
                return Err(Error::UnsupportedT {
                    t,
                    reason: format!("row {} has a closed form only at t = {t0}", self.name()),
                });
            }
        }
        Ok(())
    }

    /// Density p_t(x).
    pub fn density(&self, t: f64, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_t(t)?;
        let x = x.abs();
        Ok(match self {
            TableRow::Normal => {
                (-(x * x) / (2.0 * t)).exp() / (2.0 * std::f64::consts::PI * t).sqrt()
            }
            TableRow::Cauchy => t / (std::f64::consts::PI * (x * x + t * t)),
            TableRow::Laplace => 0.5 * t * (-t * x).exp(),
            TableRow::Gh { lambda, kappa, eta } => {
                let g = (eta * eta + x * x).sqrt();
                let ln_p = lambda * (kappa / eta).ln()
                    - 0.5 * (2.0 * std::f64::consts::PI).ln()
                    - ln_bessel_k(*lambda, eta * kappa)?
                    + ln_bessel_k(lambda - 0.5, kappa * g)?
                    - (0.5 - lambda) * (g / kappa).ln();
                ln_p.exp()
            }
            TableRow::Hyperbolic { alpha, delta } => {
                let g = (delta * delta + x * x).sqrt();
                (-alpha * g - ln_bessel_k(1.0, alpha * delta)?).exp() / (2.0 * delta)
            }
            TableRow::Relativistic { alpha } => {
                let g = (t * t + x * x).sqrt();
                let ln_p = (alpha * t / std::f64::consts::PI).ln() + alpha * t
                    + ln_bessel_k(1.0, alpha * g)?
                    - g.ln();
                ln_p.exp()
            }
            TableRow::Meixner => {
                let lg = ln_gamma_complex(Complex64::new(0.5 * t, 0.5 * x))?;
                ((t - 2.0) * std::f64::consts::LN_2 - std::f64::consts::PI.ln() - ln_gamma(t)
                    + 2.0 * lg.re)
                    .exp()
            }
            TableRow::Sinh1 => {
                (std::f64::consts::PI.ln()
                    - 2.0 * std::f64::consts::LN_2
                    - 2.0 * ln_cosh(std::f64::consts::FRAC_PI_2 * x))
                .exp()
            }
            TableRow::Sinh2 => {
                std::f64::consts::FRAC_PI_2 * sinh2_core(std::f64::consts::FRAC_PI_2 * x)
            }
        })
    }

    /// Characteristic function E e^{i xi X_t} (real and positive: all rows
    /// are symmetric).
    pub fn charfn(&self, t: f64, xi: f64) -> Result<f64> {
        self.validate()?;
        self.check_t(t)?;
        let xi = xi.abs();
        Ok(match self {
            TableRow::Normal => (-0.5 * t * xi * xi).exp(),
            TableRow::Cauchy => (-t * xi).exp(),
            TableRow::Laplace => t * t / (xi * xi + t * t),
            TableRow::Gh { lambda, kappa, eta } => {
                let s = (kappa * kappa + xi * xi).sqrt();
                let ln_cf = 0.5 * lambda * (kappa * kappa / (s * s)).ln()
                    + ln_bessel_k(*lambda, eta * s)?
                    - ln_bessel_k(*lambda, eta * kappa)?;
                ln_cf.exp()
            }
            TableRow::Hyperbolic { alpha, delta } => {
                let s = (alpha * alpha + xi * xi).sqrt();
                let ln_cf =
                    (alpha / s).ln() + ln_bessel_k(1.0, delta * s)? - ln_bessel_k(1.0, delta * alpha)?;
                ln_cf.exp()
            }
            TableRow::Relativistic { alpha } => {
                (-t * relativistic_exponent(*alpha, xi)).exp()
            }
            TableRow::Meixner => (-t * ln_cosh(xi)).exp(),
            TableRow::Sinh1 => (-ln_sinh_ratio(xi)).exp(),
            TableRow::Sinh2 => (-2.0 * ln_sinh_ratio(xi)).exp(),
        })
    }

    /// Characteristic exponent: the psi with charfn = e^{-t psi} for the
    /// semigroup rows. The Laplace, gh, and hyperbolic rows are t-level
    /// families, so their psi is -ln(charfn) at the given t, applied once.
    pub fn psi(&self, t: f64, xi: f64) -> Result<f64> {
        self.validate()?;
        let xi = xi.abs();
        Ok(match self {
            TableRow::Normal => 0.5 * xi * xi,
            TableRow::Cauchy => xi,
            TableRow::Laplace => {
                if !(t > 0.0) {
                    return Err(Error::ParamOutOfRange(format!("t must be positive, got {t}")));
                }
                ((xi / t) * (xi / t)).ln_1p()
            }
            TableRow::Gh { .. } | TableRow::Hyperbolic { .. } => -self.charfn(t, xi)?.ln(),
            TableRow::Relativistic { alpha } => relativistic_exponent(*alpha, xi),
            TableRow::Meixner => ln_cosh(xi),
            TableRow::Sinh1 | TableRow::Sinh2 => ln_sinh_ratio(xi),
        })
    }

    /// Squared metric delta_t^2(x, 0) = -ln(p_t(x)/p_t(0)).
    pub fn delta_sq(&self, t: f64, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_t(t)?;
        let x = x.abs();
        Ok(match self {
            TableRow::Normal => x * x / (2.0 * t),
            TableRow::Cauchy => ((x / t) * (x / t)).ln_1p(),
            TableRow::Laplace => t * x,
            TableRow::Gh { lambda, kappa, eta } => {
                let g = (eta * eta + x * x).sqrt();
                (0.5 - lambda) * (g / eta).ln() + ln_bessel_k(lambda - 0.5, kappa * eta)?
                    - ln_bessel_k(lambda - 0.5, kappa * g)?
            }
            TableRow::Hyperbolic { alpha, delta } => {
                alpha * ((delta * delta + x * x).sqrt() - delta)
            }
            TableRow::Relativistic { alpha } => {
                let g = (t * t + x * x).sqrt();
                (g / t).ln() + ln_bessel_k(1.0, alpha * t)? - ln_bessel_k(1.0, alpha * g)?
            }
            TableRow::Meixner => {
                let lg = ln_gamma_complex(Complex64::new(0.5 * t, 0.5 * x))?;
                2.0 * (ln_gamma(0.5 * t) - lg.re)
            }
            TableRow::Sinh1 => 2.0 * ln_cosh(std::f64::consts::FRAC_PI_2 * x),
            TableRow::Sinh2 => {
                -(3.0 * sinh2_core(std::f64::consts::FRAC_PI_2 * x)).ln()
            }
        })
    }
}

/// sqrt(alpha^2 + xi^2) - alpha without cancellation for small xi.
fn relativistic_exponent(alpha: f64, xi: f64) -> f64 {
    let s = xi.hypot(alpha);
    // s - alpha = xi^2 / (s + alpha)
    xi * xi / (s + alpha)
}

/// ln(sinh(xi)/xi) for xi >= 0, with the series branch near zero.
fn ln_sinh_ratio(xi: f64) -> f64 {
    if xi == 0.0 {
        0.0
    } else if xi < 1e-2 {
        let q = xi * xi;
        (q / 6.0 + q * q / 120.0 + q * q * q / 5040.0).ln_1p()
    } else {
        ln_sinh(xi) - xi.ln()
    }
}

/// (u coth u - 1)/sinh^2(u) for u >= 0, continuous through u = 0 with
/// value 1/3 there. Written with e^{-2u} so large u cannot overflow.
fn sinh2_core(u: f64) -> f64 {
    let u = u.abs();
    if u < 1e-2 {
        let q = u * u;
        let num = 1.0 / 3.0 - q / 45.0 + 2.0 * q * q / 945.0;
        let den = 1.0 + q / 3.0 + 2.0 * q * q / 45.0 + q * q * q / 315.0;
        num / den
    } else {
        let em = (-2.0 * u).exp();
        let omem = -(-2.0f64 * u).exp_m1(); // 1 - e^{-2u}
        let ucoth_m1 = (u - 1.0) + 2.0 * u * em / omem;
        ucoth_m1 * 4.0 * em / (omem * omem)
    }
}

/// The nine catalog rows with reference parameters.
pub fn default_rows() -> Vec<TableRow> {
    vec![
        TableRow::Normal,
        TableRow::Cauchy,
        TableRow::Laplace,
        TableRow::Gh {
            lambda: 0.75,
            kappa: 2.0,
            eta: 1.0,
        },
        TableRow::Hyperbolic {
            alpha: 1.5,
            delta: 1.0,
        },
        TableRow::Relativistic { alpha: 1.0 },
        TableRow::Meixner,
        TableRow::Sinh1,
        TableRow::Sinh2,
    ]
}

/// Outcome of the row self-consistency harness.
#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub row: String,
    pub t: f64,
    /// |2 integral_0^inf p - 1|.
    pub mass_err: f64,
    /// max over the xi grid of |forward transform of the density - charfn|.
    pub density_cf_max_err: f64,
    /// max over the x grid of |(-ln p(x)/p(0)) - delta_sq|.
    pub delta_sq_max_err: f64,
}

/// Cross-check a row's three formulas against each other: the density must
/// integrate to one, its forward Fourier transform must reproduce the
/// characteristic function, and -ln(p(x)/p(0)) must reproduce the metric
/// cell.
pub fn verify_row(row: &TableRow, t: f64, xs: &[f64], xis: &[f64]) -> Result<RowCheck> {
    row.validate()?;
    row.check_t(t)?;
    let mass = 2.0
        * integrate_0_inf(&|x| row.density(t, x).unwrap_or(0.0), 1e-11, 1e-11)?.value;
    let mass_err = (mass - 1.0).abs();

    let mut cf_err: f64 = 0.0;
    for &xi in xis {
        let forward =
            2.0 * fourier_cos(&|x| row.density(t, x).unwrap_or(0.0), xi, 1e-10)?.value;
        cf_err = cf_err.max((forward - row.charfn(t, xi)?).abs());
    }

    let p0 = row.density(t, 0.0)?;
    let mut dsq_err: f64 = 0.0;
    for &x in xs {
        let from_density = -(row.density(t, x)? / p0).ln();
        dsq_err = dsq_err.max((from_density - row.delta_sq(t, x)?).abs());
    }
    Ok(RowCheck {
        row: row.name().to_string(),
        t,
        mass_err,
        density_cf_max_err: cf_err,
        delta_sq_max_err: dsq_err,
    })
}

/// Default evaluation abscissas for `verify_row`, spanning |x|, |xi| <= 10.
pub fn default_abscissas() -> Vec<f64> {
    vec![0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normal_row() {
        let r = TableRow::Normal;
        assert_relative_eq!(
            r.density(1.0, 0.0).unwrap(),
            (2.0 * std::f64::consts::PI).sqrt().recip(),
            max_relative = 1e-14
        );
        assert_relative_eq!(r.charfn(1.0, 1.0).unwrap(), (-0.5f64).exp());
        assert_relative_eq!(r.delta_sq(1.0, 2.0).unwrap(), 2.0);
        assert_relative_eq!(r.psi(1.0, 3.0).unwrap(), 4.5);
    }

    #[test]
    fn cauchy_row() {
        let r = TableRow::Cauchy;
        assert_relative_eq!(
            r.density(1.0, 1.0).unwrap(),
            1.0 / (2.0 * std::f64::consts::PI),
            max_relative = 1e-14
        );
        assert_relative_eq!(r.delta_sq(1.0, 1.0).unwrap(), std::f64::consts::LN_2);
        assert_relative_eq!(r.charfn(2.0, 3.0).unwrap(), (-6.0f64).exp());
    }

    #[test]
    fn laplace_row() {
        let r = TableRow::Laplace;
        assert_relative_eq!(r.density(2.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(r.charfn(2.0, 1.0).unwrap(), 0.8);
        assert_relative_eq!(r.delta_sq(2.0, 3.0).unwrap(), 6.0);
        // charfn = exp(-psi_t), the exponent applied once.
        assert_relative_eq!(
            r.charfn(2.0, 1.0).unwrap(),
            (-r.psi(2.0, 1.0).unwrap()).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn meixner_row_values() {
        let r = TableRow::Meixner;
        assert_relative_eq!(r.density(1.0, 0.0).unwrap(), 0.5, max_relative = 1e-12);
        for &x in &[0.7, 2.0] {
            let exact = 0.5 / (std::f64::consts::FRAC_PI_2 * x).cosh();
            assert_relative_eq!(r.density(1.0, x).unwrap(), exact, max_relative = 1e-12);
            let exact2 = 0.5 * x / (std::f64::consts::FRAC_PI_2 * x).sinh();
            assert_relative_eq!(r.density(2.0, x).unwrap(), exact2, max_relative = 1e-12);
        }
        assert_relative_eq!(
            r.delta_sq(1.0, 1.0).unwrap(),
            ln_cosh(std::f64::consts::FRAC_PI_2),
            max_relative = 1e-12
        );
        assert_relative_eq!(r.psi(1.0, 1.0).unwrap(), 1.0f64.cosh().ln());
    }

    #[test]
    fn relativistic_row_equals_gh_limit() {
        // The relativistic semigroup at time t is the gh family with
        // lambda = -1/2, eta = t, kappa = alpha.
        let alpha = 1.0;
        let t = 1.0;
        let rel = TableRow::Relativistic { alpha };
        let gh = TableRow::Gh {
            lambda: -0.5,
            kappa: alpha,
            eta: t,
        };
        for &x in &[0.0, 0.5, 2.0, 7.0] {
            assert_relative_eq!(
                rel.density(t, x).unwrap(),
                gh.density(1.0, x).unwrap(),
                max_relative = 1e-11
            );
        }
        for &xi in &[0.5, 1.0, 4.0] {
            assert_relative_eq!(
                rel.charfn(t, xi).unwrap(),
                gh.charfn(1.0, xi).unwrap(),
                max_relative = 1e-11
            );
        }
        assert_relative_eq!(
            rel.psi(1.0, 1.0).unwrap(),
            std::f64::consts::SQRT_2 - 1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn hyperbolic_row_equals_gh_lambda_one() {
        let (alpha, delta) = (1.5, 1.0);
        let hy = TableRow::Hyperbolic { alpha, delta };
        let gh = TableRow::Gh {
            lambda: 1.0,
            kappa: alpha,
            eta: delta,
        };
        for &x in &[0.0, 1.0, 4.0] {
            assert_relative_eq!(
                hy.density(1.0, x).unwrap(),
                gh.density(1.0, x).unwrap(),
                max_relative = 1e-11
            );
        }
        for &xi in &[0.5, 2.0] {
            assert_relative_eq!(
                hy.charfn(1.0, xi).unwrap(),
                gh.charfn(1.0, xi).unwrap(),
                max_relative = 1e-11
            );
        }
        // delta_sq is the density ratio by construction.
        let p0 = hy.density(1.0, 0.0).unwrap();
        let p2 = hy.density(1.0, 2.0).unwrap();
        assert_relative_eq!(
            hy.delta_sq(1.0, 2.0).unwrap(),
            -(p2 / p0).ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn sinh_rows() {
        let s1 = TableRow::Sinh1;
        assert_relative_eq!(
            s1.density(1.0, 0.0).unwrap(),
            std::f64::consts::FRAC_PI_4,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            s1.charfn(1.0, 1.0).unwrap(),
            1.0 / 1.0f64.sinh(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            s1.delta_sq(1.0, 1.0).unwrap(),
            2.0 * ln_cosh(std::f64::consts::FRAC_PI_2),
            max_relative = 1e-13
        );

        let s2 = TableRow::Sinh2;
        assert_relative_eq!(
            s2.density(2.0, 0.0).unwrap(),
            std::f64::consts::PI / 6.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            s2.charfn(2.0, 1.0).unwrap(),
            (1.0 / 1.0f64.sinh()).powi(2),
            max_relative = 1e-13
        );
        assert!(s2.delta_sq(2.0, 0.0).unwrap().abs() < 1e-13);
        // Continuity of the series/exact crossover in the stable core.
        let ua = 0.0099;
        let ub = 0.0101;
        let (ca, cb) = (sinh2_core(ua), sinh2_core(ub));
        assert!(((ca - cb) / ca).abs() < 1e-4);
        assert_relative_eq!(sinh2_core(30.0), (30.0 - 1.0) * 4.0 * (-60.0f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn t_gating() {
        assert!(matches!(
            TableRow::Sinh1.density(2.0, 0.0),
            Err(Error::UnsupportedT { .. })
        ));
        assert!(matches!(
            TableRow::Gh {
                lambda: 0.5,
                kappa: 1.0,
                eta: 1.0
            }
            .density(0.5, 0.0),
            Err(Error::UnsupportedT { .. })
        ));
        assert!(TableRow::Meixner.density(0.3, 0.0).is_ok());
        assert!(TableRow::Normal.density(-1.0, 0.0).is_err());
    }

    #[test]
    fn row_self_consistency_cauchy() {
        let xs = [0.5, 1.0, 5.0];
        let check = verify_row(&TableRow::Cauchy, 1.0, &xs, &xs).unwrap();
        assert!(check.mass_err < 1e-9, "{check:?}");
        assert!(check.density_cf_max_err < 1e-8, "{check:?}");
        assert!(check.delta_sq_max_err < 1e-12, "{check:?}");
    }

    #[test]
    fn serde_round_trip() {
        let row: TableRow = serde_json::from_str(r#"{"row":"meixner"}"#).unwrap();
        assert_eq!(row, TableRow::Meixner);
        let gh: TableRow =
            serde_json::from_str(r#"{"row":"gh","lambda":0.75,"kappa":2.0,"eta":1.0}"#).unwrap();
        assert_eq!(gh, default_rows()[3]);
        assert!(TableRow::from_name("sinh2").is_some());
        assert!(TableRow::from_name("nope").is_none());
    }
}

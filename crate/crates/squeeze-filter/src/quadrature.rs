//! Commutant quadrature selection and transfer coefficients.
//!
//! With a balanced representation fixed, the measured quadrature is
//! `Z = B + B*` and the auxiliary quadrature of the commutant mode is
//! `Z' = e^{i lambda} B' + e^{-i lambda} B'*`. The cross variation per unit
//! time is `2 (cos lambda (v + Re u) - sin lambda Im u)`; the phase is chosen
//! to make it vanish so that `Z` and `Z'` are statistically independent on
//! the joint vacuum.
//!
//! The transfer coefficients `(alpha, beta, gamma, delta)` express the noise
//! increments acting on the vacuum through the quadrature increments:
//! `dB Psi = alpha dZ Psi + beta dZ' Psi` and
//! `dB* Psi = gamma dZ Psi + delta dZ' Psi`. For balanced representations
//! `alpha + gamma = 1` and `beta + delta = 0` for every phase.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::bogoliubov::BalancedCoeffs;
use crate::gaussian::SqueezingParams;
use crate::{Error, Result};

/// Transfer coefficients together with the quadrature data they refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCoeffs {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
    /// Commutant quadrature phase the coefficients were computed at.
    pub lambda: f64,
    /// Variance per unit time of the measured quadrature, `2n+1+2 Re m`.
    pub var_z: f64,
    /// Variance per unit time of the commutant quadrature,
    /// `2n+1+2 Re(e^{2i lambda} m)`.
    pub var_zp: f64,
    /// Determinant of the inverted increment matrix.
    pub det: C64,
}

/// Residuals of the moment-reconstruction identities.
#[derive(Debug, Clone, Copy)]
pub struct TransferIdentityResiduals {
    /// `| |alpha|^2 varZ + |beta|^2 varZ' - n |`
    pub number: f64,
    /// `| |gamma|^2 varZ + |delta|^2 varZ' - (n+1) |`
    pub number_plus_one: f64,
    /// `| gamma* alpha varZ + delta* beta varZ' - m |`
    pub squeezing: f64,
}

impl TransferIdentityResiduals {
    pub fn max(&self) -> f64 {
        self.number.max(self.number_plus_one).max(self.squeezing)
    }
}

/// Which closed-form expression for `(alpha, gamma)` agrees with the
/// coefficient-level transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormVerdict {
    /// Only the printed form `(n + Re m / 2 + i Im m) / (2n+1+Re m)` matches.
    Printed,
    /// Only the first-principles-variance form
    /// `(n + Re m + i Im m) / (2n+1+2 Re m)` matches.
    VarianceCorrected,
    /// Both match (they coincide when `Re m = 0`).
    Both,
    Neither,
}

/// Closed-form `(alpha, gamma)` evaluation with its consistency verdict.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormAlphaGamma {
    /// The printed closed forms.
    pub alpha: C64,
    pub gamma: C64,
    pub verdict: ClosedFormVerdict,
    /// `|alpha_printed - alpha_transfer|`
    pub printed_discrepancy: f64,
    /// `|alpha_corrected - alpha_transfer|`
    pub corrected_discrepancy: f64,
}

/// Tolerance used when comparing closed forms against the transfer matrix.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Phase that makes the cross variation vanish:
/// `lambda = atan2(v + Re u, Im u)` reduced to `(-pi/2, pi/2]`.
///
/// Fails when both arguments vanish (every phase works then and the caller
/// must pick one explicitly; the vacuum is the prime example).
pub fn independent_phase(u: C64, v: f64) -> Result<f64> {
    let num = v + u.re;
    let den = u.im;
    let scale = 1.0 + u.norm() + v.abs();
    if num.abs() <= 1e-13 * scale && den.abs() <= 1e-13 * scale {
        return Err(Error::DegeneratePhase);
    }
    let mut lambda = num.atan2(den);
    if lambda > FRAC_PI_2 {
        lambda -= PI;
    } else if lambda <= -FRAC_PI_2 {
        lambda += PI;
    }
    Ok(lambda)
}

/// Cross variation per unit time between `Z` and the phase-`lambda`
/// commutant quadrature, `2 (cos lambda (v + Re u) - sin lambda Im u)`.
pub fn cross_variation(b: &BalancedCoeffs, lambda: f64) -> f64 {
    let corr = b.correlations();
    2.0 * (lambda.cos() * (corr.v.re + corr.u.re) - lambda.sin() * corr.u.im)
}

/// Transfer coefficients of a balanced representation at phase `lambda`.
///
/// Computes `[[alpha, beta], [gamma, delta]] = [[y, w], [x*, z*]] M^{-1}`
/// with
///
/// ```text
/// M = [ x* + y                      z* + w                  ]
///     [ e^{i la} w + e^{-i la} z*   e^{i la} y + e^{-i la} x* ]
/// ```
///
/// Fails when `|det M|` falls below the scale-aware threshold
/// `1e-12 (1 + |x| + |y| + |z| + |w|)^2`.
pub fn transfer_matrix(b: &BalancedCoeffs, lambda: f64) -> Result<TransferCoeffs> {
    let eip = C64::from_polar(1.0, lambda);
    let eim = C64::from_polar(1.0, -lambda);
    let m11 = b.x.conj() + b.y;
    let m12 = b.z.conj() + b.w;
    let m21 = eip * b.w + eim * b.z.conj();
    let m22 = eip * b.y + eim * b.x.conj();
    let det = m11 * m22 - m12 * m21;
    let scale = 1.0 + b.x.norm() + b.y.norm() + b.z.norm() + b.w.norm();
    let threshold = 1e-12 * scale * scale;
    if det.norm() < threshold {
        return Err(Error::SingularTransfer { det_abs: det.norm(), threshold });
    }
    let alpha = (b.y * m22 - b.w * m21) / det;
    let beta = (b.w * m11 - b.y * m12) / det;
    let gamma = (b.x.conj() * m22 - b.z.conj() * m21) / det;
    let delta = (b.z.conj() * m11 - b.x.conj() * m12) / det;
    let marg = b.marginal();
    let params = SqueezingParams::new(marg.n, marg.m)?;
    Ok(TransferCoeffs {
        alpha,
        beta,
        gamma,
        delta,
        lambda,
        var_z: params.quadrature_variance(0.0),
        var_zp: params.quadrature_variance(lambda),
        det,
    })
}

/// Transfer coefficients at the independent phase of `b`.
///
/// On phase degeneracy (vacuum-like representations, where any phase is
/// independent) falls back to `lambda = 0`. The residual `lambda` vs
/// `lambda + pi` ambiguity flips only `(beta, delta)`; the representative
/// with `Re det >= 0` is returned so trajectories are reproducible.
pub fn independent_transfer(b: &BalancedCoeffs) -> Result<TransferCoeffs> {
    let corr = b.correlations();
    let lambda = match independent_phase(corr.u, corr.v.re) {
        Ok(l) => l,
        Err(Error::DegeneratePhase) => 0.0,
        Err(e) => return Err(e),
    };
    let t = transfer_matrix(b, lambda)?;
    if t.det.re < 0.0 {
        transfer_matrix(b, lambda + PI)
    } else {
        Ok(t)
    }
}

/// Residuals of the identities reconstructing `(n, n+1, m)` from the
/// transfer coefficients with the first-principles quadrature variances
/// `varZ = 2n+1+2 Re m`, `varZ' = 2n+1+2 Re(e^{2i lambda} m)`.
///
/// Valid when `t` was computed at the independent phase.
pub fn verify_transfer_identities(
    t: &TransferCoeffs,
    p: &SqueezingParams,
) -> TransferIdentityResiduals {
    residuals_with_variances(t, p, p.quadrature_variance(0.0), p.quadrature_variance(t.lambda))
}

/// Same reconstruction with the factors `(2n+1+Re m)` and
/// `(2n+1+Re(e^{2i lambda} m))` as printed in the source proposition;
/// kept for the arbitration record.
pub fn identity_residuals_printed_factors(
    t: &TransferCoeffs,
    p: &SqueezingParams,
) -> TransferIdentityResiduals {
    let rotated = C64::from_polar(1.0, 2.0 * t.lambda) * p.m();
    let var_z = 2.0 * p.n() + 1.0 + p.m().re;
    let var_zp = 2.0 * p.n() + 1.0 + rotated.re;
    residuals_with_variances(t, p, var_z, var_zp)
}

fn residuals_with_variances(
    t: &TransferCoeffs,
    p: &SqueezingParams,
    var_z: f64,
    var_zp: f64,
) -> TransferIdentityResiduals {
    let number = t.alpha.norm_sqr() * var_z + t.beta.norm_sqr() * var_zp - p.n();
    let number_plus_one =
        t.gamma.norm_sqr() * var_z + t.delta.norm_sqr() * var_zp - (p.n() + 1.0);
    let squeezing =
        t.gamma.conj() * t.alpha * var_z + t.delta.conj() * t.beta * var_zp - p.m();
    TransferIdentityResiduals {
        number: number.abs(),
        number_plus_one: number_plus_one.abs(),
        squeezing: squeezing.norm(),
    }
}

/// The printed closed forms for `(alpha, gamma)` together with a verdict on
/// whether they, or the first-principles-variance alternative, match the
/// coefficient-level transfer matrix (which is authoritative).
pub fn closed_form_alpha_gamma(p: &SqueezingParams) -> Result<ClosedFormAlphaGamma> {
    let n = p.n();
    let m = p.m();
    let printed_denom = 2.0 * n + 1.0 + m.re;
    let alpha_printed = C64::new(n + 0.5 * m.re, m.im) / printed_denom;
    let gamma_printed = C64::new(n + 1.0 + 0.5 * m.re, -m.im) / printed_denom;

    let corrected_denom = 2.0 * n + 1.0 + 2.0 * m.re;
    let alpha_corrected = C64::new(n + m.re, m.im) / corrected_denom;

    let rep = crate::bogoliubov::balanced_from_hkkr(n, m)?;
    let t = independent_transfer(&rep)?;
    let printed_discrepancy = (alpha_printed - t.alpha).norm();
    let corrected_discrepancy = (alpha_corrected - t.alpha).norm();
    let verdict = match (
        printed_discrepancy <= CLOSED_FORM_TOL,
        corrected_discrepancy <= CLOSED_FORM_TOL,
    ) {
        (true, true) => ClosedFormVerdict::Both,
        (true, false) => ClosedFormVerdict::Printed,
        (false, true) => ClosedFormVerdict::VarianceCorrected,
        (false, false) => ClosedFormVerdict::Neither,
    };
    Ok(ClosedFormAlphaGamma {
        alpha: alpha_printed,
        gamma: gamma_printed,
        verdict,
        printed_discrepancy,
        corrected_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::{balanced_from_bv, balanced_from_hkkr, BalancedCoeffs};
    use approx::assert_abs_diff_eq;

    #[test]
    fn thermal_phase_is_half_pi() {
        let u = C64::new(2f64.sqrt(), 0.0);
        let lambda = independent_phase(u, 0.0).unwrap();
        assert_abs_diff_eq!(lambda, FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn imaginary_u_phase_is_zero() {
        let lambda = independent_phase(C64::new(0.0, 1.3), 0.0).unwrap();
        assert_abs_diff_eq!(lambda, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_phase_rejected() {
        assert!(matches!(
            independent_phase(C64::ZERO, 0.0),
            Err(Error::DegeneratePhase)
        ));
    }

    #[test]
    fn bv_phase_kills_cross_variation() {
        let b = balanced_from_bv(1.0, 0.8, 1.2);
        let corr = b.correlations();
        let lambda = independent_phase(corr.u, corr.v.re).unwrap();
        assert!(cross_variation(&b, lambda).abs() <= 1e-12);
    }

    #[test]
    fn cross_variation_values() {
        let vac = BalancedCoeffs::vacuum();
        for k in 0..8 {
            assert_eq!(cross_variation(&vac, k as f64 * 0.7), 0.0);
        }
        let th = balanced_from_hkkr(1.0, C64::ZERO).unwrap();
        assert!(cross_variation(&th, FRAC_PI_2).abs() <= 1e-14);
        assert_abs_diff_eq!(cross_variation(&th, 0.0), 2.0 * 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn vacuum_transfer_for_any_phase() {
        let vac = BalancedCoeffs::vacuum();
        for k in 0..8 {
            let t = transfer_matrix(&vac, k as f64 * 0.5).unwrap();
            assert!(t.alpha.norm() <= 1e-15);
            assert!(t.beta.norm() <= 1e-15);
            assert!((t.gamma - C64::ONE).norm() <= 1e-15);
            assert!(t.delta.norm() <= 1e-15);
            assert_abs_diff_eq!(t.var_z, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn thermal_transfer_coefficients() {
        for n in [0.5, 1.0, 5.0] {
            let b = balanced_from_hkkr(n, C64::ZERO).unwrap();
            let t = independent_transfer(&b).unwrap();
            assert_abs_diff_eq!(t.lambda, FRAC_PI_2, epsilon = 1e-12);
            assert!((t.alpha - C64::new(n / (2.0 * n + 1.0), 0.0)).norm() <= 1e-12);
            assert!((t.gamma - C64::new((n + 1.0) / (2.0 * n + 1.0), 0.0)).norm() <= 1e-12);
            // beta = (w x* - y z*)/D = i sqrt(n(n+1))/(2n+1), delta = -beta.
            let expect_beta = C64::new(0.0, (n * (n + 1.0)).sqrt() / (2.0 * n + 1.0));
            assert!((t.beta - expect_beta).norm() <= 1e-12);
            assert!((t.delta + expect_beta).norm() <= 1e-12);
        }
    }

    #[test]
    fn row_sums_hold_for_arbitrary_phase() {
        let b = balanced_from_bv(1.3, 0.4, 2.2);
        for k in 0..16 {
            let lambda = -1.5 + k as f64 * 0.2;
            let t = transfer_matrix(&b, lambda).unwrap();
            assert!((t.alpha + t.gamma - C64::ONE).norm() <= 1e-12);
            assert!((t.beta + t.delta).norm() <= 1e-12);
            // beta = (w x* - y z*) / D.
            let expect = (b.w * b.x.conj() - b.y * b.z.conj()) / t.det;
            assert!((t.beta - expect).norm() <= 1e-12);
        }
    }

    #[test]
    fn identities_hold_with_first_principles_variances() {
        let b = balanced_from_bv(1.0, 0.8, 1.2);
        let t = independent_transfer(&b).unwrap();
        let p = b.marginal().params().unwrap();
        let res = verify_transfer_identities(&t, &p);
        assert!(res.max() <= 1e-10, "residuals {res:?}");
    }

    #[test]
    fn printed_factors_fail_off_thermal() {
        // The printed (2n+1+Re m) factors are inconsistent with the
        // quadrature variance once Re m != 0.
        let b = balanced_from_hkkr(1.0, C64::new(0.5, 0.2)).unwrap();
        let t = independent_transfer(&b).unwrap();
        let p = b.marginal().params().unwrap();
        assert!(verify_transfer_identities(&t, &p).max() <= 1e-10);
        assert!(identity_residuals_printed_factors(&t, &p).max() > 1e-3);
    }

    #[test]
    fn closed_form_verdict_thermal_and_squeezed() {
        // Thermal: both forms coincide with the transfer matrix.
        let p = SqueezingParams::thermal(1.0).unwrap();
        let cf = closed_form_alpha_gamma(&p).unwrap();
        assert_eq!(cf.verdict, ClosedFormVerdict::Both);
        assert!((cf.alpha - C64::new(1.0 / 3.0, 0.0)).norm() <= 1e-12);

        // Re m != 0: only the variance-corrected form survives.
        let p = SqueezingParams::new(1.0, C64::new(0.5, 0.0)).unwrap();
        let cf = closed_form_alpha_gamma(&p).unwrap();
        assert_eq!(cf.verdict, ClosedFormVerdict::VarianceCorrected);

        // Vacuum: alpha = 0, gamma = 1, consistent.
        let p = SqueezingParams::vacuum();
        let cf = closed_form_alpha_gamma(&p).unwrap();
        assert!(cf.alpha.norm() <= 1e-15);
        assert!((cf.gamma - C64::ONE).norm() <= 1e-15);
        assert_eq!(cf.verdict, ClosedFormVerdict::Both);
    }

    #[test]
    fn transfer_is_representation_independent() {
        // alpha and gamma depend only on (n, m), not on which balanced
        // representation or independent phase realizes the state.
        let p = SqueezingParams::new(1.4, C64::new(0.3, 0.9)).unwrap();
        let h = balanced_from_hkkr(p.n(), p.m()).unwrap();
        let bv = crate::bogoliubov::balanced_for_params_bv(&p);
        let th = independent_transfer(&h).unwrap();
        let tb = independent_transfer(&bv).unwrap();
        assert!((th.alpha - tb.alpha).norm() <= 1e-10);
        assert!((th.gamma - tb.gamma).norm() <= 1e-10);
    }

    #[test]
    fn moment_reconstruction_round_trip() {
        let b = balanced_from_hkkr(2.0, C64::new(-0.7, 1.1)).unwrap();
        let t = independent_transfer(&b).unwrap();
        let marg = b.marginal();
        let n_rec = t.alpha.norm_sqr() * t.var_z + t.beta.norm_sqr() * t.var_zp;
        let np_rec = t.gamma.norm_sqr() * t.var_z + t.delta.norm_sqr() * t.var_zp;
        let m_rec = t.gamma.conj() * t.alpha * t.var_z + t.delta.conj() * t.beta * t.var_zp;
        assert_abs_diff_eq!(n_rec, marg.n, epsilon = 1e-10);
        assert_abs_diff_eq!(np_rec, marg.n + 1.0, epsilon = 1e-10);
        assert!((m_rec - marg.m).norm() <= 1e-10);
    }
}

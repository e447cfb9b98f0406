//! Single-mode quasi-free (Gaussian) state parameters and covariance algebra.
//!
//! A mean-zero Gaussian state of one boson mode is fixed by its second
//! moments: the mean photon number `n = <a* a>` and the complex squeezing
//! `m = <a a>`, assembled into the covariance matrix
//!
//! ```text
//! C = [ n+1   m  ]
//!     [ m*    n  ]
//! ```
//!
//! Positivity of `C` requires the deficit `delta = n(n+1) - |m|^2` to be
//! non-negative; `delta = 0` means maximal squeezing and `m = 0` a thermal
//! (gauge-invariant) state.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{CMatrix, Error, Result};

/// Relative tolerance on `delta / (n(n+1)+1)` used to separate maximal and
/// invalid states from sub-maximal ones. Classification must stay stable
/// under round-off in parametrization round trips.
pub const CLASSIFY_REL_TOL: f64 = 1e-9;

/// Bath state parameters `(n, m)` of a single squeezed channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingParams {
    n: f64,
    m: C64,
}

/// Classification of a parameter pair `(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// `m = 0`.
    Thermal,
    /// `0 < |m|^2 < n(n+1)`.
    SubMaximal,
    /// `|m|^2 = n(n+1)` within tolerance.
    Maximal,
    /// `delta < 0` beyond tolerance.
    Invalid,
}

/// Classify a raw parameter pair without constructing a validated value.
pub fn classify(n: f64, m: C64) -> Classification {
    if !n.is_finite() || !m.re.is_finite() || !m.im.is_finite() || n < 0.0 {
        return Classification::Invalid;
    }
    if m == C64::ZERO {
        return Classification::Thermal;
    }
    let scale = n * (n + 1.0) + 1.0;
    let delta = n * (n + 1.0) - m.norm_sqr();
    if delta / scale < -CLASSIFY_REL_TOL {
        Classification::Invalid
    } else if delta / scale <= CLASSIFY_REL_TOL {
        Classification::Maximal
    } else {
        Classification::SubMaximal
    }
}

impl SqueezingParams {
    /// Validate and wrap a parameter pair.
    ///
    /// Rejects `n < 0` and `delta < 0` (each error names the violated
    /// inequality).
    pub fn new(n: f64, m: C64) -> Result<Self> {
        if !(n >= 0.0) {
            return Err(Error::NegativePhotonNumber { n });
        }
        let delta = n * (n + 1.0) - m.norm_sqr();
        let scale = n * (n + 1.0) + 1.0;
        if delta / scale < -CLASSIFY_REL_TOL {
            return Err(Error::CovarianceNotPositive { delta });
        }
        Ok(Self { n, m })
    }

    /// The vacuum state, `n = 0`, `m = 0`.
    pub fn vacuum() -> Self {
        Self { n: 0.0, m: C64::ZERO }
    }

    /// A thermal state with mean photon number `n`.
    pub fn thermal(n: f64) -> Result<Self> {
        Self::new(n, C64::ZERO)
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m(&self) -> C64 {
        self.m
    }

    /// Deficit `delta = n(n+1) - |m|^2`; zero exactly at maximal squeezing.
    pub fn delta(&self) -> f64 {
        self.n * (self.n + 1.0) - self.m.norm_sqr()
    }

    pub fn classify(&self) -> Classification {
        classify(self.n, self.m)
    }

    /// The 2x2 covariance matrix `[[n+1, m], [m*, n]]`.
    pub fn covariance_matrix(&self) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(self.n + 1.0, 0.0),
                self.m,
                self.m.conj(),
                C64::new(self.n, 0.0),
            ],
        )
    }

    /// Eigenvalues of the covariance matrix,
    /// `lambda_pm = (2n+1)/2 +- sqrt(|m|^2 + 1/4)`, returned as
    /// `(lambda_plus, lambda_minus)`.
    ///
    /// They satisfy `lambda_+ + lambda_- = 2n+1` and
    /// `lambda_+ lambda_- = delta`.
    pub fn covariance_eigenvalues(&self) -> (f64, f64) {
        let half_trace = self.n + 0.5;
        let split = (self.m.norm_sqr() + 0.25).sqrt();
        (half_trace + split, half_trace - split)
    }

    /// Value of the characteristic function at `u`:
    /// `exp{ -(2n+1)|u|^2 / 2 - Re(m (u*)^2) }`.
    ///
    /// The exponent `-m (u*)^2 / 2 - m* u^2 / 2` collapses to
    /// `-Re(m (u*)^2)` by conjugate symmetry, which avoids a spurious
    /// imaginary residue.
    pub fn characteristic_value(&self, u: C64) -> f64 {
        let exponent =
            -0.5 * (2.0 * self.n + 1.0) * u.norm_sqr() - (self.m * u.conj() * u.conj()).re;
        exponent.exp()
    }

    /// Variance per unit time of the phase-`lambda` quadrature,
    /// `2n + 1 + 2 Re(e^{2i lambda} m)`.
    pub fn quadrature_variance(&self, lambda: f64) -> f64 {
        let rotated = C64::from_polar(1.0, 2.0 * lambda) * self.m;
        2.0 * self.n + 1.0 + 2.0 * rotated.re
    }
}

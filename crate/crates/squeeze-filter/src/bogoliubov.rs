//! Two-mode Bogoliubov transformations and their balanced subclass.
//!
//! A two-mode Bogoliubov transformation mixes a pair of commuting boson
//! modes `a_1, a_2` into new modes
//!
//! ```text
//! b_1 = x_1 a_1 + y_1 a_1* + z_1 a_2 + w_1 a_2*
//! b_2 = x_2 a_1 + y_2 a_1* + z_2 a_2 + w_2 a_2*
//! ```
//!
//! subject to coefficient identities guaranteeing that `b_1, b_2` are again
//! commuting boson modes. A transformation is *balanced* when the second row
//! is the coefficient-swapped first row (`x_2 = z_1`, `y_2 = w_1`,
//! `z_2 = x_1`, `w_2 = y_1`); both output modes then carry identical
//! marginal Gaussian states, which is what the filtering construction needs.
//!
//! On the joint vacuum, the marginals are `n_i = |y_i|^2 + |w_i|^2`,
//! `m_i = x_i y_i + z_i w_i`, and the inter-mode correlations are
//! `v = x_1 x_2* + z_1 z_2*`, `u = x_1 y_2 + z_1 w_2`.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64 as C64;

use crate::gaussian::{classify, Classification, SqueezingParams};
use crate::{Error, Result};

/// Default residual tolerance below which a coefficient set is accepted as a
/// genuine Bogoliubov transformation.
pub const BOGOLIUBOV_TOL: f64 = 1e-9;

/// One row of a two-mode transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRow {
    pub x: C64,
    pub y: C64,
    pub z: C64,
    pub w: C64,
}

impl ModeRow {
    pub fn new(x: C64, y: C64, z: C64, w: C64) -> Self {
        Self { x, y, z, w }
    }
}

/// Coefficients of a general two-mode transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCoeffs {
    pub rows: [ModeRow; 2],
}

/// Maximum absolute violation of each defining identity.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovResiduals {
    /// `|x_1|^2 + |z_1|^2 - |y_1|^2 - |w_1|^2 - 1`
    pub number_11: f64,
    /// `|x_2|^2 + |z_2|^2 - |y_2|^2 - |w_2|^2 - 1`
    pub number_22: f64,
    /// `|x_1 x_2* + z_1 z_2* - y_1 y_2* - w_1 w_2*|`
    pub cross_12: f64,
    /// `|x_1 y_2 - y_1 x_2 + z_1 w_2 - w_1 z_2|`
    pub commutator: f64,
}

impl BogoliubovResiduals {
    pub fn max(&self) -> f64 {
        self.number_11
            .max(self.number_22)
            .max(self.cross_12)
            .max(self.commutator)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Marginal Gaussian state of one output mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marginal {
    pub n: f64,
    pub m: C64,
}

impl Marginal {
    pub fn params(&self) -> Result<SqueezingParams> {
        SqueezingParams::new(self.n, self.m)
    }
}

/// Inter-mode correlation pair `u = <b_1 b_2>`, `v = <b_1 b_2*>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlations {
    pub u: C64,
    pub v: C64,
}

impl TwoModeCoeffs {
    pub fn new(row1: ModeRow, row2: ModeRow) -> Self {
        Self { rows: [row1, row2] }
    }

    /// The identity transformation, `b_i = a_i`.
    pub fn identity() -> Self {
        let one = C64::ONE;
        let zero = C64::ZERO;
        Self::new(
            ModeRow::new(one, zero, zero, zero),
            ModeRow::new(zero, zero, one, zero),
        )
    }

    /// The Araki-Woods rows for a thermal state with number parameter `n`:
    /// `b_1 = sqrt(n+1) a_1 + sqrt(n) a_2*`, `b_2 = sqrt(n) a_1* + sqrt(n+1) a_2`.
    pub fn araki_woods(n: f64) -> Self {
        let sp = C64::new((n + 1.0).sqrt(), 0.0);
        let sm = C64::new(n.sqrt(), 0.0);
        let zero = C64::ZERO;
        Self::new(ModeRow::new(sp, zero, zero, sm), ModeRow::new(zero, sm, sp, zero))
    }

    /// Two independent single-mode squeezers, one per input mode:
    /// `b_1 = e^{i th1/2}(sqrt(n1+1) a_1 + sqrt(n1) a_1*)` and likewise for
    /// `b_2` on `a_2`. The joint state factorizes and each marginal is
    /// maximally squeezed with `m_i = e^{i th_i} sqrt(n_i(n_i+1))`.
    pub fn factorized_maximal(n1: f64, theta1: f64, n2: f64, theta2: f64) -> Self {
        let zero = C64::ZERO;
        let p1 = C64::from_polar(1.0, theta1 / 2.0);
        let p2 = C64::from_polar(1.0, theta2 / 2.0);
        Self::new(
            ModeRow::new(p1 * (n1 + 1.0).sqrt(), p1 * n1.sqrt(), zero, zero),
            ModeRow::new(zero, zero, p2 * (n2 + 1.0).sqrt(), p2 * n2.sqrt()),
        )
    }

    /// Residuals of the defining identities; the transformation is genuine
    /// iff all of them vanish within tolerance.
    pub fn verify(&self) -> BogoliubovResiduals {
        let [r1, r2] = &self.rows;
        let number = |r: &ModeRow| {
            r.x.norm_sqr() + r.z.norm_sqr() - r.y.norm_sqr() - r.w.norm_sqr() - 1.0
        };
        let cross = r1.x * r2.x.conj() + r1.z * r2.z.conj()
            - r1.y * r2.y.conj()
            - r1.w * r2.w.conj();
        let comm = r1.x * r2.y - r1.y * r2.x + r1.z * r2.w - r1.w * r2.z;
        BogoliubovResiduals {
            number_11: number(r1).abs(),
            number_22: number(r2).abs(),
            cross_12: cross.norm(),
            commutator: comm.norm(),
        }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.verify();
        if report.passes(BOGOLIUBOV_TOL) {
            Ok(())
        } else {
            Err(Error::NotBogoliubov { report })
        }
    }

    /// Marginal state parameters of both output modes.
    pub fn marginals(&self) -> Result<(Marginal, Marginal)> {
        self.require_valid()?;
        let marginal = |r: &ModeRow| Marginal {
            n: r.y.norm_sqr() + r.w.norm_sqr(),
            m: r.x * r.y + r.z * r.w,
        };
        Ok((marginal(&self.rows[0]), marginal(&self.rows[1])))
    }

    /// Inter-mode correlations on the joint vacuum.
    pub fn correlations(&self) -> Result<Correlations> {
        self.require_valid()?;
        let [r1, r2] = &self.rows;
        Ok(Correlations {
            u: r1.x * r2.y + r1.z * r2.w,
            v: r1.x * r2.x.conj() + r1.z * r2.z.conj(),
        })
    }

    /// Inverse transformation, expressing `a_1, a_2` through `b_1, b_2`:
    /// `a_1 = x_1* b_1 + x_2* b_2 - y_1 b_1* - y_2 b_2*` and
    /// `a_2 = z_1* b_1 + z_2* b_2 - w_1 b_1* - w_2 b_2*`.
    pub fn invert(&self) -> Result<TwoModeCoeffs> {
        self.require_valid()?;
        let [r1, r2] = &self.rows;
        Ok(TwoModeCoeffs::new(
            ModeRow::new(r1.x.conj(), -r1.y, r2.x.conj(), -r2.y),
            ModeRow::new(r1.z.conj(), -r1.w, r2.z.conj(), -r2.w),
        ))
    }

    /// Doubled 4x4 matrix acting on `(a_1, a_2, a_1*, a_2*)`.
    pub fn doubled_matrix(&self) -> Matrix4<C64> {
        let [r1, r2] = &self.rows;
        Matrix4::new(
            r1.x, r1.z, r1.y, r1.w,
            r2.x, r2.z, r2.y, r2.w,
            r1.y.conj(), r1.w.conj(), r1.x.conj(), r1.z.conj(),
            r2.y.conj(), r2.w.conj(), r2.x.conj(), r2.z.conj(),
        )
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &TwoModeCoeffs) -> TwoModeCoeffs {
        let m = self.doubled_matrix() * inner.doubled_matrix();
        TwoModeCoeffs::new(
            ModeRow::new(m[(0, 0)], m[(0, 2)], m[(0, 1)], m[(0, 3)]),
            ModeRow::new(m[(1, 0)], m[(1, 2)], m[(1, 1)], m[(1, 3)]),
        )
    }

    /// Max-norm distance of the doubled matrix from the identity.
    pub fn identity_residual(&self) -> f64 {
        let m = self.doubled_matrix() - Matrix4::identity();
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Linear and conjugate-linear 2x2 blocks `(S_minus, S_plus)` of the
    /// transformation.
    pub fn blocks(&self) -> (Matrix2<C64>, Matrix2<C64>) {
        let [r1, r2] = &self.rows;
        (
            Matrix2::new(r1.x, r1.z, r2.x, r2.z),
            Matrix2::new(r1.y, r1.w, r2.y, r2.w),
        )
    }
}

/// Coefficients `(x, y, z, w)` of a balanced transformation.
///
/// They satisfy `|x|^2 + |z|^2 - |y|^2 - |w|^2 = 1` and
/// `x z* + z x* - y w* - w y* = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedCoeffs {
    pub x: C64,
    pub y: C64,
    pub z: C64,
    pub w: C64,
}

impl BalancedCoeffs {
    /// Validate the balanced identities and wrap the coefficients.
    pub fn new(x: C64, y: C64, z: C64, w: C64) -> Result<Self> {
        let c = Self { x, y, z, w };
        let (number, exchange) = c.identity_residuals();
        if number > BOGOLIUBOV_TOL || exchange > BOGOLIUBOV_TOL {
            return Err(Error::NotBalanced { number, exchange });
        }
        Ok(c)
    }

    /// Wrap without validation; for constructors that are correct by
    /// construction and for tests.
    pub fn new_unchecked(x: C64, y: C64, z: C64, w: C64) -> Self {
        Self { x, y, z, w }
    }

    /// The vacuum representation `(1, 0, 0, 0)`.
    pub fn vacuum() -> Self {
        Self::new_unchecked(C64::ONE, C64::ZERO, C64::ZERO, C64::ZERO)
    }

    /// Residuals of the two balanced identities
    /// (`number`, `exchange`) in that order.
    pub fn identity_residuals(&self) -> (f64, f64) {
        let number = self.x.norm_sqr() + self.z.norm_sqr()
            - self.y.norm_sqr()
            - self.w.norm_sqr()
            - 1.0;
        let exchange = self.x * self.z.conj() + self.z * self.x.conj()
            - self.y * self.w.conj()
            - self.w * self.y.conj();
        (number.abs(), exchange.norm())
    }

    /// Marginal state parameters, identical for both lifted modes:
    /// `n = |y|^2 + |w|^2`, `m = x y + z w`.
    pub fn marginal(&self) -> Marginal {
        Marginal {
            n: self.y.norm_sqr() + self.w.norm_sqr(),
            m: self.x * self.y + self.z * self.w,
        }
    }

    /// Correlation pair `u = x w + z y`, `v = 2 Re(x* z)` of the lifted
    /// two-mode transformation.
    pub fn correlations(&self) -> Correlations {
        Correlations {
            u: self.x * self.w + self.z * self.y,
            v: C64::new(2.0 * (self.x.conj() * self.z).re, 0.0),
        }
    }

    /// Coefficient-swap replacement `(x, y, z, w) -> (x*, -y, z*, -w)`,
    /// which preserves the balanced identities.
    pub fn conjugate_flip(&self) -> Self {
        Self::new_unchecked(self.x.conj(), -self.y, self.z.conj(), -self.w)
    }

    /// Lift to a two-mode transformation with the swapped second row
    /// `x_2 = z, y_2 = w, z_2 = x, w_2 = y`.
    pub fn lift(&self) -> Result<TwoModeCoeffs> {
        let (number, exchange) = self.identity_residuals();
        if number > BOGOLIUBOV_TOL || exchange > BOGOLIUBOV_TOL {
            return Err(Error::NotBalanced { number, exchange });
        }
        Ok(self.lift_unchecked())
    }

    pub fn lift_unchecked(&self) -> TwoModeCoeffs {
        TwoModeCoeffs::new(
            ModeRow::new(self.x, self.y, self.z, self.w),
            ModeRow::new(self.z, self.w, self.x, self.y),
        )
    }

    /// Inverse of the balanced transformation, again in row form:
    /// `a_1 = x* b_1 + z* b_2 - y b_1* - w b_2*` and the swapped second row.
    pub fn invert(&self) -> TwoModeCoeffs {
        TwoModeCoeffs::new(
            ModeRow::new(self.x.conj(), -self.y, self.z.conj(), -self.w),
            ModeRow::new(self.z.conj(), -self.w, self.x.conj(), -self.y),
        )
    }
}

/// Hyperbolic parameters of the Bishop-Vourdas family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvParameters {
    pub r: f64,
    pub rho: f64,
    pub theta: f64,
}

/// Balanced transformation from two-mode plus single-mode squeezing unitaries:
///
/// ```text
/// x = e^{i theta/2} cosh(r/2) cosh(rho/2)    y = e^{i theta/2} cosh(r/2) sinh(rho/2)
/// z = e^{i theta/2} sinh(r/2) sinh(rho/2)    w = e^{i theta/2} sinh(r/2) cosh(rho/2)
/// ```
///
/// The marginals are `n = c_r^2 s_rho^2 + s_r^2 c_rho^2`,
/// `m = e^{i theta} (c_r^2 + s_r^2) c_rho s_rho`, with deficit
/// `delta = sinh^2(r) / 4`.
pub fn balanced_from_bv(r: f64, rho: f64, theta: f64) -> BalancedCoeffs {
    let phase = C64::from_polar(1.0, theta / 2.0);
    let cr = (r / 2.0).cosh();
    let sr = (r / 2.0).sinh();
    let crho = (rho / 2.0).cosh();
    let srho = (rho / 2.0).sinh();
    BalancedCoeffs::new_unchecked(
        phase * (cr * crho),
        phase * (cr * srho),
        phase * (sr * srho),
        phase * (sr * crho),
    )
}

/// Invert the Bishop-Vourdas closed forms: parameters whose balanced
/// transformation has marginal `(n, m)`.
///
/// `sinh r = 2 sqrt(delta)`, `sinh rho = 2|m| / sqrt(1 + 4 delta)`,
/// `theta = arg m`. At `m = 0` this reduces to the Araki-Woods rows.
pub fn bv_parameters(p: &SqueezingParams) -> BvParameters {
    let delta = p.delta().max(0.0);
    let r = (2.0 * delta.sqrt()).asinh();
    let rho = (2.0 * p.m().norm() / (1.0 + 4.0 * delta).sqrt()).asinh();
    let theta = if p.m() == C64::ZERO { 0.0 } else { p.m().arg() };
    BvParameters { r, rho, theta }
}

/// Balanced representation of `(n, m)` through the Bishop-Vourdas family.
pub fn balanced_for_params_bv(p: &SqueezingParams) -> BalancedCoeffs {
    let bv = bv_parameters(p);
    balanced_from_bv(bv.r, bv.rho, bv.theta)
}

/// Evaluate the quotient-form coefficient table for a squeezing moment with
/// vanishing real part (where it satisfies the balanced identities):
///
/// ```text
/// x = kappa_+ (rho/2 + m/2 + 1/4)    y = kappa_+ (rho/2 + m/2 - 1/4)
/// z = kappa_- (rho/2 - m/2 - 1/4)    w = kappa_- (rho/2 - m/2 + 1/4)
/// ```
///
/// with `rho = sqrt(|m|^2 + 1/4)` and
/// `kappa_pm = sqrt((n + 1/2 +- rho) / (rho (rho +- Re m)))`.
fn hkkr_table(n: f64, m: C64) -> Result<BalancedCoeffs> {
    let rho = (m.norm_sqr() + 0.25).sqrt();
    let denom_plus = rho * (rho + m.re);
    let denom_minus = rho * (rho - m.re);
    if denom_minus <= 0.0 || denom_plus <= 0.0 {
        return Err(Error::SingularParametrization { value: rho - m.re });
    }
    // n + 1/2 -+ rho are the covariance eigenvalues; both are non-negative
    // for a valid sub-maximal or thermal state.
    let kappa_plus = ((n + 0.5 + rho) / denom_plus).sqrt();
    let kappa_minus = (((n + 0.5 - rho) / denom_minus).max(0.0)).sqrt();
    let half_m = 0.5 * m;
    let sum = C64::new(0.5 * rho, 0.0) + half_m;
    let diff = C64::new(0.5 * rho, 0.0) - half_m;
    let quarter = C64::new(0.25, 0.0);
    Ok(BalancedCoeffs::new_unchecked(
        kappa_plus * (sum + quarter),
        kappa_plus * (sum - quarter),
        kappa_minus * (diff - quarter),
        kappa_minus * (diff + quarter),
    ))
}

/// Balanced representation of `(n, m)` in the quotient (HKKR) form.
///
/// The printed coefficient table satisfies the second balanced identity only
/// when `Re m = 0` (its residual is `-kappa_+ kappa_- Re m`), so the general
/// case is reduced to the imaginary axis: the table is evaluated at
/// `i |m|` and both modes are rotated by the half phase
/// `psi = (arg m - pi/2) / 2`, which carries the marginal squeezing to `m`
/// while leaving `n` and all identities intact. On the axis (`m = i mu`,
/// `mu >= 0`) the table is used verbatim; at `m = 0` it reduces exactly to
/// the Araki-Woods coefficients `(sqrt(n+1), 0, 0, sqrt(n))`.
///
/// Rejects maximal and invalid `(n, m)`.
pub fn balanced_from_hkkr(n: f64, m: C64) -> Result<BalancedCoeffs> {
    match classify(n, m) {
        Classification::Maximal | Classification::Invalid => {
            return Err(Error::UnsupportedSqueezing { n, m, class: classify(n, m) })
        }
        Classification::Thermal | Classification::SubMaximal => {}
    }
    if m == C64::ZERO {
        return hkkr_table(n, m);
    }
    let mu = m.norm();
    if m.re == 0.0 && m.im > 0.0 {
        return hkkr_table(n, m);
    }
    let base = hkkr_table(n, C64::new(0.0, mu))?;
    let psi = (m.arg() - std::f64::consts::FRAC_PI_2) / 2.0;
    let phase = C64::from_polar(1.0, psi);
    Ok(BalancedCoeffs::new_unchecked(
        phase * base.x,
        phase * base.y,
        phase * base.z,
        phase * base.w,
    ))
}

/// How the antiunitary conjugation entering `#` and transpose is realized.
#[derive(Debug, Clone)]
pub enum Conjugation {
    /// Entrywise complex conjugation in the computational basis.
    Standard,
    /// `j(psi) = U conj(psi)` for a fixed unitary `U`.
    Twisted(Matrix2<C64>),
}

impl Conjugation {
    fn sharp(&self, s: &Matrix2<C64>) -> Matrix2<C64> {
        match self {
            Conjugation::Standard => s.map(|c| c.conj()),
            Conjugation::Twisted(u) => u * s.map(|c| c.conj()) * u.map(|c| c.conj()),
        }
    }

    fn transpose(&self, s: &Matrix2<C64>) -> Matrix2<C64> {
        match self {
            Conjugation::Standard => s.transpose(),
            Conjugation::Twisted(u) => u * s.transpose() * u.map(|c| c.conj()),
        }
    }
}

/// Residual of the doubled-matrix inversion formula: builds
/// `S = [[S_-, S_+], [S_+^#, S_-^#]]` and the claimed inverse
/// `[[S_-^*, -S_+^T], [-S_+^*, S_-^T]]`, and returns the max-norm deviation
/// of both products from the identity. Vanishes exactly when `(S_-, S_+)`
/// come from a symplectomorphism.
pub fn doubled_matrix_inverse_check(
    s_minus: &Matrix2<C64>,
    s_plus: &Matrix2<C64>,
    conj: &Conjugation,
) -> f64 {
    let mut doubled = Matrix4::<C64>::zeros();
    let mut inverse = Matrix4::<C64>::zeros();
    let sharp_minus = conj.sharp(s_minus);
    let sharp_plus = conj.sharp(s_plus);
    let adj_minus = s_minus.adjoint();
    let adj_plus = s_plus.adjoint();
    let tr_minus = conj.transpose(s_minus);
    let tr_plus = conj.transpose(s_plus);
    for i in 0..2 {
        for j in 0..2 {
            doubled[(i, j)] = s_minus[(i, j)];
            doubled[(i, j + 2)] = s_plus[(i, j)];
            doubled[(i + 2, j)] = sharp_plus[(i, j)];
            doubled[(i + 2, j + 2)] = sharp_minus[(i, j)];
            inverse[(i, j)] = adj_minus[(i, j)];
            inverse[(i, j + 2)] = -tr_plus[(i, j)];
            inverse[(i + 2, j)] = -adj_plus[(i, j)];
            inverse[(i + 2, j + 2)] = tr_minus[(i, j)];
        }
    }
    let left = doubled * inverse - Matrix4::identity();
    let right = inverse * doubled - Matrix4::identity();
    left.iter()
        .chain(right.iter())
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Promote a general matrix to `DMatrix` form (helper for tests and FFI).
pub fn to_dmatrix(m: &Matrix4<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

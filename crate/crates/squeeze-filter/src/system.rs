//! Finite-dimensional system operators and the squeezed Lindblad generator.
//!
//! The system couples to the squeezed channel through a single operator `L`
//! and evolves under a Hamiltonian `H`. The drift of the unitary cocycle is
//!
//! ```text
//! K = -(n+1)/2 L*L - n/2 LL* - m/2 L*^2 - m*/2 L^2 - iH
//! ```
//!
//! and the Heisenberg generator carries four dissipator blocks weighted by
//! `n+1`, `n`, `m` and `m*`. The Schroedinger-picture adjoint is derived by
//! cyclic trace rearrangement so it stays exact for every dimension; a
//! classical RK4 integrator for the master equation serves as the
//! deterministic oracle the stochastic filters are tested against.

use num_complex::Complex64 as C64;

use crate::gaussian::SqueezingParams;
use crate::{CMatrix, Error, Result};

/// System dimension, operators, and bath parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    dim: usize,
    hamiltonian: CMatrix,
    coupling: CMatrix,
    bath: SqueezingParams,
}

/// Max-norm deviation of a square matrix from Hermiticity.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Symmetrize to the Hermitian part, `(m + m*)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|c| c * 0.5)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `e^{-i H t}` for Hermitian `H`, through its eigendecomposition.
pub fn unitary_exp(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let d = h.nrows();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d {
        let phase = C64::from_polar(1.0, -eig.eigenvalues[k] * t);
        let col = eig.eigenvectors.column(k);
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += phase * col[i] * col[j].conj();
            }
        }
    }
    out
}

impl SystemModel {
    /// Validate shapes, Hermiticity of `H` (within `1e-12`), and the bath
    /// parameters.
    pub fn new(hamiltonian: CMatrix, coupling: CMatrix, bath: SqueezingParams) -> Result<Self> {
        let dim = hamiltonian.nrows();
        if hamiltonian.ncols() != dim {
            return Err(Error::ShapeMismatch {
                expected: dim,
                rows: hamiltonian.nrows(),
                cols: hamiltonian.ncols(),
            });
        }
        if coupling.nrows() != dim || coupling.ncols() != dim {
            return Err(Error::ShapeMismatch {
                expected: dim,
                rows: coupling.nrows(),
                cols: coupling.ncols(),
            });
        }
        let residual = hermiticity_residual(&hamiltonian);
        if residual > 1e-12 {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self { dim, hamiltonian, coupling, bath })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn coupling(&self) -> &CMatrix {
        &self.coupling
    }

    pub fn bath(&self) -> &SqueezingParams {
        &self.bath
    }

    /// Ito drift `K` of the unitary cocycle.
    pub fn ito_drift(&self) -> CMatrix {
        let l = &self.coupling;
        let ld = l.adjoint();
        let n = self.bath.n();
        let m = self.bath.m();
        let mut k = (&ld * l).map(|c| c * C64::new(-0.5 * (n + 1.0), 0.0));
        k += (l * &ld).map(|c| c * C64::new(-0.5 * n, 0.0));
        k += (&ld * &ld).map(|c| c * (-0.5 * m));
        k += (l * l).map(|c| c * (-0.5 * m.conj()));
        k += self.hamiltonian.map(|c| c * C64::new(0.0, -1.0));
        k
    }

    /// Heisenberg-picture generator applied to an observable `X`.
    ///
    /// All four dissipator blocks plus `-i[X, H]`; maps the identity to zero
    /// and Hermitian observables to Hermitian images.
    pub fn lindblad_heisenberg(&self, x: &CMatrix) -> Result<CMatrix> {
        self.check_shape(x)?;
        let l = &self.coupling;
        let ld = l.adjoint();
        let n = self.bath.n();
        let m = self.bath.m();
        let half = C64::new(0.5, 0.0);

        let block = |a: &CMatrix, b: &CMatrix| -> CMatrix {
            // [a, X] b + a [X, b], halved
            (commutator(a, x) * b + a * commutator(x, b)).map(|c| c * half)
        };

        let mut out = block(&ld, l).map(|c| c * C64::new(n + 1.0, 0.0));
        out += block(l, &ld).map(|c| c * C64::new(n, 0.0));
        out += block(&ld, &ld).map(|c| c * m);
        out += block(l, l).map(|c| c * m.conj());
        out += commutator(x, &self.hamiltonian).map(|c| c * C64::new(0.0, -1.0));
        Ok(out)
    }

    /// Schroedinger-picture adjoint, the unique map with
    /// `tr((L X) rho) = tr(X L*(rho))`: trace-free and Hermiticity
    /// preserving.
    pub fn lindblad_schrodinger(&self, rho: &CMatrix) -> Result<CMatrix> {
        self.check_shape(rho)?;
        let l = &self.coupling;
        let ld = l.adjoint();
        let n = self.bath.n();
        let m = self.bath.m();
        let half = C64::new(0.5, 0.0);

        let dissipator = |a: &CMatrix, b: &CMatrix| -> CMatrix {
            // a rho b - {b a, rho}/2  (for the pairing tr(b X a rho))
            a * rho * b - anticommutator(&(b * a), rho).map(|c| c * half)
        };

        let mut out = dissipator(l, &ld).map(|c| c * C64::new(n + 1.0, 0.0));
        out += dissipator(&ld, l).map(|c| c * C64::new(n, 0.0));
        out += dissipator(&ld, &ld).map(|c| c * m);
        out += dissipator(l, l).map(|c| c * m.conj());
        out += commutator(&self.hamiltonian, rho).map(|c| c * C64::new(0.0, -1.0));
        Ok(out)
    }

    /// Matrix of the Schroedinger generator in the column-stacked basis;
    /// used for the stationary-state oracle.
    pub fn schrodinger_superoperator(&self) -> Result<CMatrix> {
        let d = self.dim;
        let mut sup = CMatrix::zeros(d * d, d * d);
        for j in 0..d {
            for i in 0..d {
                let mut basis = CMatrix::zeros(d, d);
                basis[(i, j)] = C64::ONE;
                let image = self.lindblad_schrodinger(&basis)?;
                let col = j * d + i;
                for jj in 0..d {
                    for ii in 0..d {
                        sup[(jj * d + ii, col)] = image[(ii, jj)];
                    }
                }
            }
        }
        Ok(sup)
    }

    /// Stationary state from the null space of the superoperator matrix.
    pub fn stationary_state(&self) -> Result<CMatrix> {
        let d = self.dim;
        let sup = self.schrodinger_superoperator()?;
        let svd = sup.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("requested V^T");
        // Row of V^T for the smallest singular value.
        let mut min_idx = 0;
        for (k, s) in svd.singular_values.iter().enumerate() {
            if *s < svd.singular_values[min_idx] {
                min_idx = k;
            }
        }
        let mut rho = CMatrix::zeros(d, d);
        for j in 0..d {
            for i in 0..d {
                rho[(i, j)] = v_t[(min_idx, j * d + i)].conj();
            }
        }
        let rho = hermitize(&rho);
        let tr = trace(&rho);
        if tr.norm() < 1e-10 {
            return Err(Error::InvalidState {
                reason: "stationary null vector is traceless".into(),
            });
        }
        Ok(rho.map(|c| c / tr))
    }

    /// Integrate `d rho/dt = L*(rho)` with classical RK4 up to `t_final`.
    ///
    /// The step count is `ceil(t_final/dt)` with the last step shortened.
    pub fn evolve_master(&self, rho0: &CMatrix, t_final: f64, dt: f64) -> Result<CMatrix> {
        self.check_state(rho0)?;
        if !(dt > 0.0) || !(t_final >= 0.0) {
            return Err(Error::InvalidState { reason: "need dt > 0 and T >= 0".into() });
        }
        let mut rho = rho0.clone();
        let mut t = 0.0;
        while t < t_final - 1e-15 {
            let step = dt.min(t_final - t);
            rho = self.rk4_step(&rho, step)?;
            t += step;
        }
        Ok(hermitize(&rho))
    }

    /// One RK4 step of the master equation.
    pub fn rk4_step(&self, rho: &CMatrix, dt: f64) -> Result<CMatrix> {
        let h = C64::new(dt, 0.0);
        let k1 = self.lindblad_schrodinger(rho)?;
        let k2 = self.lindblad_schrodinger(&(rho + k1.map(|c| c * h * 0.5)))?;
        let k3 = self.lindblad_schrodinger(&(rho + k2.map(|c| c * h * 0.5)))?;
        let k4 = self.lindblad_schrodinger(&(rho + k3.map(|c| c * h)))?;
        let incr = (k1 + k2.map(|c| c * 2.0) + k3.map(|c| c * 2.0) + k4).map(|c| c * h / 6.0);
        Ok(rho + incr)
    }

    fn check_shape(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok(())
    }

    fn check_state(&self, rho: &CMatrix) -> Result<()> {
        self.check_shape(rho)?;
        let herm = hermiticity_residual(rho);
        if herm > 1e-10 {
            return Err(Error::InvalidState {
                reason: format!("density matrix not Hermitian (residual {herm:.3e})"),
            });
        }
        let tr = trace(rho);
        if (tr - C64::ONE).norm() > 1e-8 {
            return Err(Error::InvalidState { reason: format!("trace {tr} != 1") });
        }
        let min_eig = hermitize(rho)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -1e-8 {
            return Err(Error::InvalidState {
                reason: format!("negative eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(())
    }
}

/// Pauli matrices and friends for the qubit demo model.
pub mod qubit {
    use super::*;

    pub fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ONE, C64::ONE, C64::ZERO])
    }

    pub fn sigma_y() -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[C64::ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::ZERO],
        )
    }

    pub fn sigma_z() -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[C64::ONE, C64::ZERO, C64::ZERO, C64::new(-1.0, 0.0)],
        )
    }

    /// Lowering operator `|0><1|`.
    pub fn sigma_minus() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ONE, C64::ZERO, C64::ZERO])
    }

    pub fn sigma_plus() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ZERO, C64::ONE, C64::ZERO])
    }

    pub fn excited() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ZERO, C64::ZERO, C64::ONE])
    }

    pub fn ground() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::ONE, C64::ZERO, C64::ZERO, C64::ZERO])
    }
}

#[cfg(test)]
mod tests {
    use super::qubit::*;
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
        CMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_state(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
        let a = random_matrix(rng, d);
        let rho = &a * a.adjoint();
        let tr = trace(&rho);
        rho.map(|c| c / tr)
    }

    fn demo_model(n: f64, m: C64) -> SystemModel {
        let h = sigma_z().map(|c| c * 0.5);
        SystemModel::new(h, sigma_minus(), SqueezingParams::new(n, m).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_drift() {
        let mdl = demo_model(0.0, C64::ZERO);
        let expect =
            (sigma_plus() * sigma_minus()).map(|c| c * -0.5) + sigma_z().map(|c| c * C64::new(0.0, -0.25));
        let k = mdl.ito_drift();
        assert!((k - expect).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-14);
    }

    #[test]
    fn zero_coupling_drift_is_hamiltonian() {
        let h = sigma_x().map(|c| c * 0.7);
        let mdl = SystemModel::new(h.clone(), CMatrix::zeros(2, 2), SqueezingParams::vacuum())
            .unwrap();
        let expect = h.map(|c| c * C64::new(0.0, -1.0));
        assert!((mdl.ito_drift() - expect).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-15);
    }

    #[test]
    fn drift_isometry_identity() {
        // K + K* + (n+1)L*L + n LL* + m L*^2 + m* L^2 = 0.
        let mdl = demo_model(1.0, C64::new(0.5, 0.0));
        let l = mdl.coupling().clone();
        let ld = l.adjoint();
        let k = mdl.ito_drift();
        let mut total = &k + k.adjoint();
        total += (&ld * &l).map(|c| c * 2.0);
        total += (&l * &ld).map(|c| c * 1.0);
        total += (&ld * &ld).map(|c| c * C64::new(0.5, 0.0));
        total += (&l * &l).map(|c| c * C64::new(0.5, 0.0));
        assert!(total.iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-12);
    }

    #[test]
    fn generator_annihilates_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = rng.random_range(0.0..3.0);
            let mag = rng.random_range(0.0..0.9) * (n * (n + 1.0)).sqrt();
            let m = C64::from_polar(mag, rng.random_range(0.0..6.28));
            let mdl = demo_model(n, m);
            let id = CMatrix::identity(2, 2);
            let img = mdl.lindblad_heisenberg(&id).unwrap();
            assert!(img.iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-12);
        }
    }

    #[test]
    fn vacuum_generator_standard_form() {
        let mdl = SystemModel::new(CMatrix::zeros(2, 2), sigma_minus(), SqueezingParams::vacuum())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = hermitize(&random_matrix(&mut rng, 2));
        let l = sigma_minus();
        let ld = l.adjoint();
        let expect = (commutator(&ld, &x) * &l + &ld * commutator(&x, &l)).map(|c| c * 0.5);
        let got = mdl.lindblad_heisenberg(&x).unwrap();
        assert!((got - expect).iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-13);
    }

    #[test]
    fn heisenberg_and_schrodinger_are_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let mdl = demo_model(1.0, C64::new(0.5, 0.3));
            let x = random_matrix(&mut rng, 2);
            let rho = random_matrix(&mut rng, 2);
            let lhs = trace(&(mdl.lindblad_heisenberg(&x).unwrap() * &rho));
            let rhs = trace(&(x * mdl.lindblad_schrodinger(&rho).unwrap()));
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    #[test]
    fn schrodinger_trace_free_and_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mdl = demo_model(0.7, C64::new(0.2, -0.4));
        for _ in 0..10 {
            let rho = random_state(&mut rng, 2);
            let img = mdl.lindblad_schrodinger(&rho).unwrap();
            assert!(trace(&img).norm() <= 1e-12);
            assert!(hermiticity_residual(&img) <= 1e-12);
        }
    }

    #[test]
    fn vacuum_decay_generator_on_excited_state() {
        let mdl = SystemModel::new(CMatrix::zeros(2, 2), sigma_minus(), SqueezingParams::vacuum())
            .unwrap();
        let img = mdl.lindblad_schrodinger(&excited()).unwrap();
        let expect = ground() - excited();
        assert!((img - expect).iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-14);
    }

    #[test]
    fn normal_coupling_fixes_maximally_mixed() {
        // L normal, H = 0, m = 0: the maximally mixed state is stationary.
        let l = sigma_z().map(|c| c * 0.6);
        let mdl = SystemModel::new(
            CMatrix::zeros(2, 2),
            l,
            SqueezingParams::thermal(0.8).unwrap(),
        )
        .unwrap();
        let rho = CMatrix::identity(2, 2).map(|c| c * 0.5);
        let img = mdl.lindblad_schrodinger(&rho).unwrap();
        assert!(img.iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-13);
    }

    #[test]
    fn free_evolution_matches_matrix_exponential() {
        let h = sigma_z().map(|c| c * 0.5) + sigma_x().map(|c| c * 0.3);
        let mdl = SystemModel::new(h.clone(), CMatrix::zeros(2, 2), SqueezingParams::vacuum())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho0 = random_state(&mut rng, 2);
        let t = 1.3;
        let evolved = mdl.evolve_master(&rho0, t, 1e-3).unwrap();
        let u = unitary_exp(&h, t);
        let expect = &u * &rho0 * u.adjoint();
        assert!((evolved - expect).iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-9);
    }

    #[test]
    fn vacuum_decay_population() {
        let mdl = SystemModel::new(CMatrix::zeros(2, 2), sigma_minus(), SqueezingParams::vacuum())
            .unwrap();
        let rho = mdl.evolve_master(&excited(), 1.0, 1e-3).unwrap();
        assert_abs_diff_eq!(rho[(1, 1)].re, (-1.0f64).exp(), epsilon = 1e-9);
        assert_abs_diff_eq!(trace(&rho).re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn integrator_reaches_stationary_state() {
        let mdl = demo_model(1.0, C64::new(0.8, 0.0));
        let stationary = mdl.stationary_state().unwrap();
        let residual = mdl.lindblad_schrodinger(&stationary).unwrap();
        assert!(residual.iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-10);
        let evolved = mdl.evolve_master(&excited(), 50.0, 1e-3).unwrap();
        let dev = (&evolved - &stationary)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-8, "deviation {dev:.3e}");
    }

    #[test]
    fn step_halving_converges() {
        let mdl = demo_model(1.0, C64::new(0.5, 0.5));
        let coarse = mdl.evolve_master(&excited(), 1.0, 2e-3).unwrap();
        let fine = mdl.evolve_master(&excited(), 1.0, 1e-3).unwrap();
        let dev = (coarse - fine).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(dev <= 1e-10, "RK4 halving deviation {dev:.3e}");
    }

    #[test]
    fn trace_preserved_along_evolution() {
        let mdl = demo_model(1.0, C64::new(0.4, 0.2));
        let mut rho = excited();
        for _ in 0..100 {
            rho = mdl.rk4_step(&rho, 1e-2).unwrap();
        }
        assert!((trace(&rho) - C64::ONE).norm() <= 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        let non_hermitian = CMatrix::from_row_slice(
            2,
            2,
            &[C64::ZERO, C64::ONE, C64::ZERO, C64::ZERO],
        );
        assert!(matches!(
            SystemModel::new(non_hermitian, sigma_minus(), SqueezingParams::vacuum()),
            Err(Error::NotHermitian { .. })
        ));
        let mdl = demo_model(0.0, C64::ZERO);
        assert!(matches!(
            mdl.lindblad_heisenberg(&CMatrix::zeros(3, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
        let not_state = CMatrix::identity(2, 2);
        assert!(mdl.evolve_master(&not_state, 1.0, 1e-3).is_err());
    }
}

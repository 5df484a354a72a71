use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::tau::{tau_functions, tau_values, TauFunctions};
use crate::error::{Error, Result};
use crate::exact::{GaussianMatrix, GaussianRational};
use crate::hodge::{
    check_p1, connection_matrix, f_matrix_exact, transversality_check, ConnectionOptions, HodgeFrame, PeriodMatrix, PeriodPath,
    TransversalityReport,
};
use crate::numeric::CMatrix;
use crate::rational::rat;

/// Entrywise tolerance for finite-difference comparisons with the closed-form connection.
pub const DISPLAYED_CONNECTION_TOLERANCE: f64 = 1e-6;

/// Rows `(τ0,1,0,0), (1,0,0,0), (τ1,τ3,1,0), (τ2, τ1-τ0τ3, -τ0, 1)`.
pub fn tau_matrix(t: &[Complex64; 4]) -> CMatrix {
    let [t0, t1, t2, t3] = *t;
    let (o, z) = (Complex64::one(), Complex64::zero());
    CMatrix::from_row_slice(4, 4, &[t0, o, z, z, o, z, z, z, t1, t3, o, z, t2, t1 - t0 * t3, -t0, o])
}

/// [`tau_matrix`] over the Gaussian rationals.
pub fn tau_matrix_exact(t: &[GaussianRational; 4]) -> GaussianMatrix {
    let [t0, t1, t2, t3] = t.clone();
    let (o, z) = (GaussianRational::one(), GaussianRational::zero());
    let mixed = t1.clone() - t0.clone() * t3.clone();
    GaussianMatrix::from_rows(vec![
        vec![t0.clone(), o.clone(), z.clone(), z.clone()],
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![t1, t3, o.clone(), z.clone()],
        vec![t2, mixed, -t0, o],
    ])
}

/// The closed form of `dτᵀ·τ⁻ᵀ` along `dt = (dτ0, dτ1, dτ2, dτ3)`.
pub fn displayed_connection(t: &[Complex64; 4], dt: &[Complex64; 4]) -> CMatrix {
    let [t0, t1, _, t3] = *t;
    let [d0, d1, d2, d3] = *dt;
    let z = Complex64::zero();
    let a = -t3 * d0 + d1;
    CMatrix::from_row_slice(
        4,
        4,
        &[z, d0, a, -t1 * d0 + t0 * d1 + d2, z, z, d3, a, z, z, z, -d0, z, z, z, z],
    )
}

/// `(τ0, τ1, τ2, τ3) ↦ τ`, the four-parameter family.
pub struct TauMatrixPath {
    frame: HodgeFrame,
}

impl TauMatrixPath {
    pub fn new() -> Self {
        TauMatrixPath { frame: HodgeFrame::mirror_quintic() }
    }
}

impl Default for TauMatrixPath {
    fn default() -> Self {
        Self::new()
    }
}

impl PeriodPath for TauMatrixPath {
    fn frame(&self) -> &HodgeFrame {
        &self.frame
    }

    fn parameters(&self) -> usize {
        4
    }

    fn period(&self, t: &[Complex64]) -> Result<CMatrix> {
        let t: [Complex64; 4] = t.try_into().map_err(|_| Error::DimensionMismatch { expected: 4, found: t.len() })?;
        Ok(tau_matrix(&t))
    }
}

/// `τ0 ↦ τ(τ0, τ1(τ0), τ2(τ0), τ3(τ0) + ε)` with the truncated series.
pub struct TauCurvePath {
    frame: HodgeFrame,
    functions: TauFunctions,
    perturbation: Complex64,
}

impl TauCurvePath {
    pub fn new(truncation: usize) -> Result<Self> {
        Ok(TauCurvePath { frame: HodgeFrame::mirror_quintic(), functions: tau_functions(truncation)?, perturbation: Complex64::zero() })
    }

    /// Adds `ε` to `τ3`, which moves the curve off the transversality distribution.
    pub fn perturbed(mut self, epsilon: Complex64) -> Self {
        self.perturbation = epsilon;
        self
    }

    pub fn values(&self, tau0: Complex64) -> Result<[Complex64; 4]> {
        let [t1, t2, t3] = tau_values(&self.functions, tau0)?;
        Ok([tau0, t1, t2, t3 + self.perturbation])
    }
}

impl PeriodPath for TauCurvePath {
    fn frame(&self) -> &HodgeFrame {
        &self.frame
    }

    fn parameters(&self) -> usize {
        1
    }

    fn period(&self, t: &[Complex64]) -> Result<CMatrix> {
        match t {
            [tau0] => Ok(tau_matrix(&self.values(*tau0)?)),
            _ => Err(Error::DimensionMismatch { expected: 1, found: t.len() }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TauMatrixReport {
    pub pass: bool,
    pub seed: u64,
    pub trials: usize,
    /// `τᵀΨ0⁻ᵀτ = Φ0` exactly at `τ0 = i, τ1 = τ2 = τ3 = 0`.
    pub polarization_base_point: bool,
    /// Number of random rational tuples where the identity holds exactly.
    pub polarization_exact: usize,
    /// Largest entrywise gap between the finite-difference and closed-form connection.
    pub connection_error: f64,
    /// Largest `(1,3), (1,4), (2,4)` entry along Griffiths tangents.
    pub griffiths_violation: f64,
    pub tolerance: f64,
}

fn random_rational<R: Rng>(rng: &mut R) -> GaussianRational {
    let part = |rng: &mut R| rat(rng.gen_range(-30..=30), rng.gen_range(1..=12));
    Complex::new(part(rng), part(rng))
}

fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

fn polarization_holds(frame: &HodgeFrame, t: &[GaussianRational; 4]) -> Result<bool> {
    let f = f_matrix_exact(frame, &tau_matrix_exact(t))?;
    let phi0 = frame.phi0();
    Ok((0..4).all(|i| {
        (0..4).all(|j| {
            let e = f.get(i, j);
            let p = phi0[(i, j)];
            e.im.is_zero() && e.re == rat(p.re as i64, 1) && p.im == 0.0
        })
    }))
}

/// Checks the polarization identity exactly and the connection form numerically.
pub fn verify_tau_matrix(seed: u64, trials: usize) -> Result<TauMatrixReport> {
    let frame = HodgeFrame::mirror_quintic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = Complex::new(rat(0, 1), rat(1, 1));
    let zero = GaussianRational::zero();
    let polarization_base_point = polarization_holds(&frame, &[i, zero.clone(), zero.clone(), zero])?;
    let mut polarization_exact = 0;
    for _ in 0..trials {
        let t = [random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng)];
        if polarization_holds(&frame, &t)? {
            polarization_exact += 1;
        }
    }

    let path = TauMatrixPath::new();
    let opts = ConnectionOptions::default();
    let mut connection_error = 0.0f64;
    let mut griffiths_violation = 0.0f64;
    for _ in 0..trials {
        let t = [random_complex(&mut rng, 2.0), random_complex(&mut rng, 2.0), random_complex(&mut rng, 2.0), random_complex(&mut rng, 2.0)];
        let v = [random_complex(&mut rng, 1.0), random_complex(&mut rng, 1.0), random_complex(&mut rng, 1.0), random_complex(&mut rng, 1.0)];
        let a = connection_matrix(&path, &t, &v, opts)?;
        let gap = (a - displayed_connection(&t, &v)).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        connection_error = connection_error.max(gap);

        let [t0, t1, _, t3] = t;
        let g = [Complex64::one(), t3, t1 - t0 * t3, random_complex(&mut rng, 1.0)];
        let report = transversality_check(&path, &t, &g, opts)?;
        griffiths_violation = griffiths_violation.max(report.max_violation);
    }
    let tolerance = DISPLAYED_CONNECTION_TOLERANCE;
    Ok(TauMatrixReport {
        pass: polarization_base_point
            && polarization_exact == trials
            && connection_error < tolerance
            && griffiths_violation < tolerance,
        seed,
        trials,
        polarization_base_point,
        polarization_exact,
        connection_error,
        griffiths_violation,
        tolerance,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TauCurveReport {
    pub pass: bool,
    pub tau0: Complex64,
    pub values: [Complex64; 4],
    pub p1_residual: f64,
    pub transversality: TransversalityReport,
}

/// Evaluates the series at `τ0`, checks P1 on the resulting point and
/// transversality of the curve.
pub fn verify_tau_curve(truncation: usize, tau0: Complex64) -> Result<TauCurveReport> {
    let path = TauCurvePath::new(truncation)?;
    let values = path.values(tau0)?;
    let per = PeriodMatrix::new(path.frame().clone(), tau_matrix(&values))?;
    let p1 = check_p1(&per.lattice_point()?);
    let transversality = transversality_check(&path, &[tau0], &[Complex64::one()], ConnectionOptions::default())?;
    Ok(TauCurveReport { pass: p1.pass && transversality.pass, tau0, values, p1_residual: p1.residual, transversality })
}

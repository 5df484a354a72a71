use num_complex::Complex64;
use serde::Serialize;

use super::{HodgeFrame, SINGULAR_RCOND};
use crate::error::{Error, Result};
use crate::numeric::{checked_inverse, conj, default_step, max_abs, richardson_derivative, CMatrix};

/// Tolerance for the transversality entries.
pub const TRANSVERSALITY_TOLERANCE: f64 = 1e-6;

/// A holomorphic family of period matrices over an open set of `C^n`.
///
/// Implementations must be re-entrant; the finite-difference stencils call
/// [`PeriodPath::period`] repeatedly.
pub trait PeriodPath {
    fn frame(&self) -> &HodgeFrame;
    fn parameters(&self) -> usize;
    fn period(&self, t: &[Complex64]) -> Result<CMatrix>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ConnectionOptions {
    /// Finite-difference step; defaults to `1e-5 (1 + |t|)`.
    pub step: Option<f64>,
}

impl ConnectionOptions {
    fn step_at(&self, t: &[Complex64]) -> f64 {
        self.step.unwrap_or_else(|| default_step(t.iter().fold(0.0, |a, z| a.max(z.norm()))))
    }
}

fn displaced(t: &[Complex64], v: &[Complex64], s: f64) -> Vec<Complex64> {
    t.iter().zip(v).map(|(a, b)| a + b * s).collect()
}

fn check_shape(path: &dyn PeriodPath, t: &[Complex64], v: &[Complex64]) -> Result<()> {
    let n = path.parameters();
    if t.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: t.len() });
    }
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    Ok(())
}

fn period_checked(path: &dyn PeriodPath, t: &[Complex64]) -> Result<CMatrix> {
    let per = path.period(t)?;
    let h = path.frame().dim();
    if per.nrows() != h || per.ncols() != h {
        return Err(Error::DimensionMismatch { expected: h, found: per.nrows().max(per.ncols()) });
    }
    Ok(per)
}

/// Directional derivative of `per` at `t` along `v`.
pub fn period_derivative(
    path: &dyn PeriodPath,
    t: &[Complex64],
    v: &[Complex64],
    opts: ConnectionOptions,
) -> Result<CMatrix> {
    check_shape(path, t, v)?;
    richardson_derivative(|s| period_checked(path, &displaced(t, v, s)), opts.step_at(t))
}

/// `A(v) = d_v(perᵀ) · per^{-ᵀ}` at `t`.
pub fn connection_matrix(
    path: &dyn PeriodPath,
    t: &[Complex64],
    v: &[Complex64],
    opts: ConnectionOptions,
) -> Result<CMatrix> {
    let per = period_checked(path, t)?;
    let inv = checked_inverse(&per, SINGULAR_RCOND).ok_or(Error::SingularPeriod)?;
    let d = period_derivative(path, t, v, opts)?;
    Ok(d.transpose() * inv.transpose())
}

/// 1-based `(i, j)` entries of `A` forced to vanish by Griffiths transversality.
pub fn transversality_pattern(frame: &HodgeFrame) -> Vec<(usize, usize)> {
    let m = frame.weight();
    let h = frame.dim();
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    for x in 0..=m - 2 {
        let rows = frame.filtration_dim(m - x);
        let cols_from = frame.filtration_dim(m - x - 1);
        for i in 1..=rows {
            for j in cols_from + 1..=h {
                if !out.contains(&(i, j)) {
                    out.push((i, j));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalityReport {
    pub pass: bool,
    pub max_violation: f64,
    pub tolerance: f64,
    /// 1-based entries exceeding the tolerance, with their moduli.
    pub offending: Vec<(usize, usize, f64)>,
}

/// Evaluates `A(v)` and checks the entries of [`transversality_pattern`].
pub fn transversality_check(
    path: &dyn PeriodPath,
    t: &[Complex64],
    v: &[Complex64],
    opts: ConnectionOptions,
) -> Result<TransversalityReport> {
    let a = connection_matrix(path, t, v, opts)?;
    let mut max_violation: f64 = 0.0;
    let mut offending = Vec::new();
    for (i, j) in transversality_pattern(path.frame()) {
        let val = a[(i - 1, j - 1)].norm();
        max_violation = max_violation.max(val);
        if val > TRANSVERSALITY_TOLERANCE {
            offending.push((i, j, val));
        }
    }
    Ok(TransversalityReport {
        pass: offending.is_empty(),
        max_violation,
        tolerance: TRANSVERSALITY_TOLERANCE,
        offending,
    })
}

fn f_of(path: &dyn PeriodPath, t: &[Complex64]) -> Result<CMatrix> {
    let per = period_checked(path, t)?;
    Ok(per.transpose() * path.frame().psi0_inv_t() * per)
}

fn g_of(path: &dyn PeriodPath, t: &[Complex64]) -> Result<CMatrix> {
    let per = period_checked(path, t)?;
    Ok(per.transpose() * path.frame().psi0_inv_t() * conj(&per))
}

/// `max |d_v F - (A F + F Aᵀ)|` relative to `max(1, |F|)`.
///
/// Directions are taken along real displacements `t + s v`.
pub fn f_ode_residual(path: &dyn PeriodPath, t: &[Complex64], v: &[Complex64], opts: ConnectionOptions) -> Result<f64> {
    check_shape(path, t, v)?;
    let a = connection_matrix(path, t, v, opts)?;
    let f = f_of(path, t)?;
    let df = richardson_derivative(|s| f_of(path, &displaced(t, v, s)), opts.step_at(t))?;
    let rhs = &a * &f + &f * a.transpose();
    Ok(max_abs(&(df - rhs)) / max_abs(&f).max(1.0))
}

/// `max |d_v G - (A G + G conj(A)ᵀ)|` relative to `max(1, |G|)`.
pub fn g_ode_residual(path: &dyn PeriodPath, t: &[Complex64], v: &[Complex64], opts: ConnectionOptions) -> Result<f64> {
    check_shape(path, t, v)?;
    let a = connection_matrix(path, t, v, opts)?;
    let g = g_of(path, t)?;
    let dg = richardson_derivative(|s| g_of(path, &displaced(t, v, s)), opts.step_at(t))?;
    let rhs = &a * &g + &g * a.adjoint();
    Ok(max_abs(&(dg - rhs)) / max_abs(&g).max(1.0))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct UResidual {
    /// `max |d_v F|`.
    pub df: f64,
    /// `max |A Φ0 + Φ0 Aᵀ|`.
    pub a_phi: f64,
    /// `max |F - Φ0|`.
    pub f_phi: f64,
}

impl UResidual {
    pub fn max(&self) -> f64 {
        self.df.max(self.a_phi).max(self.f_phi)
    }
}

/// Residuals of the constancy relations `F = Φ0`, `dF = 0` and `A Φ0 = -Φ0 Aᵀ`.
pub fn u_residual(path: &dyn PeriodPath, t: &[Complex64], v: &[Complex64], opts: ConnectionOptions) -> Result<UResidual> {
    check_shape(path, t, v)?;
    let phi = path.frame().phi0();
    let a = connection_matrix(path, t, v, opts)?;
    let df = richardson_derivative(|s| f_of(path, &displaced(t, v, s)), opts.step_at(t))?;
    Ok(UResidual {
        df: max_abs(&df),
        a_phi: max_abs(&(&a * phi + phi * a.transpose())),
        f_phi: max_abs(&(f_of(path, t)? - phi)),
    })
}

/// `max |∂_u A(v) - ∂_v A(u) - [A(u), A(v)]|`, the defect of `dA = A ∧ A`.
pub fn integrability_residual(
    path: &dyn PeriodPath,
    t: &[Complex64],
    u: &[Complex64],
    v: &[Complex64],
    opts: ConnectionOptions,
) -> Result<f64> {
    check_shape(path, t, u)?;
    check_shape(path, t, v)?;
    // nested differences lose digits, so the outer stencil is wider
    let outer = 1e-3 * (1.0 + t.iter().fold(0.0f64, |a, z| a.max(z.norm())));
    let a_along = |dir: &[Complex64], at: Vec<Complex64>| connection_matrix(path, &at, dir, opts);
    let du_av = richardson_derivative(|s| a_along(v, displaced(t, u, s)), outer)?;
    let dv_au = richardson_derivative(|s| a_along(u, displaced(t, v, s)), outer)?;
    let au = connection_matrix(path, t, u, opts)?;
    let av = connection_matrix(path, t, v, opts)?;
    let bracket = &au * &av - &av * &au;
    Ok(max_abs(&(du_av - dv_au - bracket)))
}

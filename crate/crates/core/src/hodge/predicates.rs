use nalgebra::SVD;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{HodgeFrame, LatticePoint, PeriodMatrix, SINGULAR_RCOND};
use crate::error::{Error, Result};
use crate::exact::GaussianMatrix;
use crate::numeric::{checked_inverse, conj, max_abs, CMatrix};

/// Relative singular-value cutoff for ranks and intersections.
pub const RANK_CUTOFF: f64 = 1e-9;
/// Tolerance for the orthogonality relations `F = Φ0`.
pub const P1_TOLERANCE: f64 = 1e-9;
/// Tolerance for realness and positivity of the Hodge–Riemann form.
pub const P3_TOLERANCE: f64 = 1e-9;

/// Matrix `M` of the antilinear conjugation `v ↦ M conj(v)` fixing the lattice.
///
/// For the lattice basis `δ = p ω` this is `M = pᵀ conj(p)^{-ᵀ}`.
pub fn conjugation(x: &LatticePoint) -> Result<CMatrix> {
    let p = x.basis();
    let inv = checked_inverse(&conj(p), SINGULAR_RCOND).ok_or(Error::SingularLattice(x.rcond()))?;
    Ok(p.transpose() * inv.transpose())
}

/// `F = perᵀ Ψ0^{-ᵀ} per`.
pub fn f_matrix(per: &PeriodMatrix) -> Result<CMatrix> {
    let m = per.matrix();
    checked_inverse(m, SINGULAR_RCOND).ok_or(Error::SingularPeriod)?;
    Ok(m.transpose() * per.frame().psi0_inv_t() * m)
}

/// `F` in exact Gaussian-rational arithmetic.
pub fn f_matrix_exact(frame: &HodgeFrame, per: &GaussianMatrix) -> Result<GaussianMatrix> {
    let psi_inv_t = frame.psi0().to_gaussian().transpose().inverse().ok_or(Error::SingularPeriod)?;
    if per.inverse().is_none() {
        return Err(Error::SingularPeriod);
    }
    per.transpose().mul(&psi_inv_t)?.mul(per)
}

/// `G = perᵀ Ψ0^{-ᵀ} conj(per)`.
pub fn g_matrix(x: &LatticePoint) -> Result<CMatrix> {
    let per = x.period_matrix();
    let m = per.matrix();
    checked_inverse(m, SINGULAR_RCOND).ok_or(Error::SingularPeriod)?;
    Ok(m.transpose() * x.frame().psi0_inv_t() * conj(m))
}

/// Orthonormal basis of the column span, with the relative rank cutoff.
fn orthonormal_span(m: &CMatrix) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| smax > 0.0 && svd.singular_values[k] > RANK_CUTOFF * smax)
        .collect();
    CMatrix::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Orthonormal basis of `span(U) ∩ span(W)` for orthonormal `U`, `W`.
fn intersect(u: &CMatrix, w: &CMatrix) -> CMatrix {
    let h = u.nrows();
    let (a, b) = (u.ncols(), w.ncols());
    if a == 0 || b == 0 {
        return CMatrix::zeros(h, 0);
    }
    // null space of [U | -W], padded to square so the SVD returns a full V
    let n = a + b;
    let rows = h.max(n);
    let mut k = CMatrix::zeros(rows, n);
    for r in 0..h {
        for c in 0..a {
            k[(r, c)] = u[(r, c)];
        }
        for c in 0..b {
            k[(r, a + c)] = -w[(r, c)];
        }
    }
    let svd = SVD::new(k, false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut vecs = Vec::new();
    for (idx, s) in svd.singular_values.iter().enumerate() {
        if *s <= RANK_CUTOFF * smax.max(1.0) {
            // right singular vector = conjugate of the row of Vᴴ
            let x: Vec<Complex64> = (0..a).map(|c| v_t[(idx, c)].conj()).collect();
            let vec = CMatrix::from_fn(h, 1, |r, _| (0..a).map(|c| u[(r, c)] * x[c]).sum());
            vecs.push(vec);
        }
    }
    if vecs.is_empty() {
        return CMatrix::zeros(h, 0);
    }
    let stacked = CMatrix::from_fn(h, vecs.len(), |r, c| vecs[c][(r, 0)]);
    orthonormal_span(&stacked)
}

fn coordinate_span(h: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(h, k, |r, c| if r == c { Complex64::one() } else { Complex64::zero() })
}

/// Orthonormal basis of the conjugate of `F^i` with respect to `x`.
fn conjugate_filtration(m: &CMatrix, k: usize) -> CMatrix {
    let h = m.nrows();
    // conj(e_j) = e_j, so the image is spanned by the first k columns of M
    orthonormal_span(&m.columns(0, k).into_owned().resize(h, k, Complex64::zero()))
}

/// Projector distance `‖Q1 Q1ᴴ - Q2 Q2ᴴ‖` between subspaces with orthonormal bases.
pub fn subspace_distance(q1: &CMatrix, q2: &CMatrix) -> f64 {
    let p1 = q1 * q1.adjoint();
    let p2 = q2 * q2.adjoint();
    (p1 - p2).norm()
}

#[derive(Clone, Debug)]
pub struct HodgeComponent {
    /// `i` in `H^{i, m-i}`.
    pub index: usize,
    /// Orthonormal columns spanning the component.
    pub basis: CMatrix,
    pub expected_dim: usize,
}

impl HodgeComponent {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// `H^{i, m-i}(x) = F^i ∩ conj_x(F^{m-i})` for `i = 0..=m`.
pub fn hodge_components(x: &LatticePoint) -> Result<Vec<HodgeComponent>> {
    let frame = x.frame();
    let m = frame.weight();
    let h = frame.dim();
    let conj_op = conjugation(x)?;
    Ok((0..=m)
        .map(|i| {
            let f = coordinate_span(h, frame.filtration_dim(i));
            let cf = conjugate_filtration(&conj_op, frame.filtration_dim(m - i));
            HodgeComponent { index: i, basis: intersect(&f, &cf), expected_dim: frame.hodge_numbers()[i] }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Report {
    pub pass: bool,
    /// `max |ψ_C(x)(ω_i, ω_j) - Φ0_ij|`.
    pub residual: f64,
    pub tolerance: f64,
}

/// P1: the polarization in the ω basis equals `Φ0`.
pub fn check_p1(x: &LatticePoint) -> P1Report {
    let residual = max_abs(&(x.polarization() - x.frame().phi0()));
    let tolerance = P1_TOLERANCE * max_abs(x.frame().phi0()).max(1.0);
    P1Report { pass: residual <= tolerance, residual, tolerance }
}

#[derive(Clone, Debug, Serialize)]
pub struct P2Report {
    pub pass: bool,
    pub dimensions: Vec<usize>,
    pub expected: Vec<usize>,
    /// Largest `dim(F^i ∩ conj F^j)` over `i + j > m`.
    pub max_bad_intersection: usize,
}

/// P2: `V0 = ⊕ H^{i, m-i}(x)`, via dimensions and `F^i ∩ conj F^j = 0` for `i + j > m`.
pub fn check_p2(x: &LatticePoint) -> Result<P2Report> {
    let frame = x.frame();
    let m = frame.weight();
    let h = frame.dim();
    let comps = hodge_components(x)?;
    let conj_op = conjugation(x)?;
    let mut worst = 0;
    for i in 0..=m {
        for j in 0..=m {
            if i + j <= m {
                continue;
            }
            let f = coordinate_span(h, frame.filtration_dim(i));
            let cf = conjugate_filtration(&conj_op, frame.filtration_dim(j));
            worst = worst.max(intersect(&f, &cf).ncols());
        }
    }
    let dimensions: Vec<usize> = comps.iter().map(HodgeComponent::dim).collect();
    let expected = frame.hodge_numbers().to_vec();
    let pass = worst == 0 && dimensions.iter().sum::<usize>() == h && dimensions == expected;
    Ok(P2Report { pass, dimensions, expected, max_bad_intersection: worst })
}

#[derive(Clone, Debug, Serialize)]
pub struct P3Component {
    pub index: usize,
    pub dim: usize,
    /// `max |S - Sᴴ|` of the sign-corrected form.
    pub imaginary_residual: f64,
    pub min_eigenvalue: f64,
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct P3Report {
    pub pass: bool,
    pub components: Vec<P3Component>,
    pub tolerance: f64,
}

/// Sign `(-1)^{m(m-1)/2 + i} (√-1)^{-m}`.
fn hodge_riemann_sign(m: usize, i: usize) -> Complex64 {
    let s = if (m * (m.saturating_sub(1)) / 2 + i).is_multiple_of(2) { 1.0 } else { -1.0 };
    let i_pow = match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    i_pow * s
}

/// P3: on each component, `c_i ψ(ω, conj_x ω)` is real and positive.
pub fn check_p3(x: &LatticePoint) -> Result<P3Report> {
    let m = x.frame().weight();
    let g = g_matrix(x)?;
    let comps = hodge_components(x)?;
    let mut components = Vec::new();
    let mut pass = true;
    for c in &comps {
        let v = &c.basis;
        if c.dim() == 0 {
            if c.expected_dim > 0 {
                pass = false;
            }
            components.push(P3Component {
                index: c.index,
                dim: 0,
                imaginary_residual: 0.0,
                min_eigenvalue: f64::NAN,
                eigenvalues: vec![],
            });
            continue;
        }
        // ψ(Va, conj_x(Va)) = aᵀ (Vᵀ G conj V) conj(a) = aᴴ S a with S = (Vᵀ G conj V)ᵀ
        let s = (v.transpose() * &g * conj(v)).transpose() * hodge_riemann_sign(m, c.index);
        let scale = max_abs(&s).max(1.0);
        let imaginary_residual = max_abs(&(&s - s.adjoint())) / scale;
        let herm = (&s + s.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = herm.symmetric_eigenvalues();
        let eigenvalues: Vec<f64> = eig.iter().map(|e| e / scale).collect();
        let min_eigenvalue = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if imaginary_residual > P3_TOLERANCE || !(min_eigenvalue > P3_TOLERANCE) {
            pass = false;
        }
        components.push(P3Component { index: c.index, dim: c.dim(), imaginary_residual, min_eigenvalue, eigenvalues });
    }
    Ok(P3Report { pass, components, tolerance: P3_TOLERANCE })
}

//! Polarized lattices in a fixed filtered vector space `V0 = C^h`, the
//! Hodge decomposition they induce, and period matrices.
//!
//! Conventions used throughout:
//! - the filtration `F^i` is spanned by the first `h^i` coordinates, where
//!   `h^i = Σ_{j ≥ i} h^{j, m-j}`;
//! - a lattice point stores the basis `δ = p ω` as the rows of `p`, and the
//!   intersection form in that basis is `Ψ0`;
//! - its period matrix is `per = Ψ0ᵀ p^{-ᵀ}`, so that `Ψ0ᵀ = per · pᵀ`.
//! - the group `Γ_Z` acts by `p ↦ A p` (equivalently `per ↦ A per`) and
//!   `G0` acts on the right by `per ↦ per g` (equivalently `p ↦ p g^{-ᵀ}`).

mod connection;
mod duality;
mod json;
mod predicates;

pub use connection::{
    connection_matrix, f_ode_residual, period_derivative, g_ode_residual, integrability_residual, transversality_check,
    transversality_pattern, u_residual, ConnectionOptions, TRANSVERSALITY_TOLERANCE, PeriodPath, TransversalityReport, UResidual,
};
pub use duality::{dual_polarization, poincare_dual, poincare_dual_matrix};
pub use json::{ComplexEntry, FrameJson, MatrixJson};
pub use predicates::{
    check_p1, check_p2, check_p3, conjugation, f_matrix, f_matrix_exact, g_matrix, hodge_components,
    subspace_distance, HodgeComponent, P1Report, P2Report, P3Report,
};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::numeric::{checked_inverse, conj, rcond, CMatrix};

/// Lattice bases with reciprocal condition below this are rejected.
pub const SINGULAR_RCOND: f64 = 1e-10;

/// Weight, Hodge numbers, integral polarization `Ψ0` and the polarization
/// `Φ0` of the filtration-compatible basis.
#[derive(Clone, Debug)]
pub struct HodgeFrame {
    weight: usize,
    hodge_numbers: Vec<usize>,
    psi0: IntMatrix,
    psi0_c: CMatrix,
    phi0: CMatrix,
}

impl HodgeFrame {
    /// Validates and builds a frame. `hodge_numbers[i] = h^{i, m-i}`.
    pub fn new(weight: usize, hodge_numbers: Vec<usize>, psi0: IntMatrix, phi0: CMatrix) -> Result<Self> {
        if hodge_numbers.len() != weight + 1 {
            return Err(Error::InvalidFrame(format!(
                "weight {weight} needs {} Hodge numbers, got {}",
                weight + 1,
                hodge_numbers.len()
            )));
        }
        let h: usize = hodge_numbers.iter().sum();
        if h == 0 {
            return Err(Error::InvalidFrame("total dimension is zero".into()));
        }
        if psi0.nrows() != h || psi0.ncols() != h {
            return Err(Error::DimensionMismatch { expected: h, found: psi0.nrows().max(psi0.ncols()) });
        }
        if phi0.nrows() != h || phi0.ncols() != h {
            return Err(Error::DimensionMismatch { expected: h, found: phi0.nrows().max(phi0.ncols()) });
        }
        if weight.is_multiple_of(2) && !psi0.is_symmetric() {
            return Err(Error::InvalidFrame("psi0 must be symmetric for even weight".into()));
        }
        if weight % 2 == 1 && !psi0.is_antisymmetric() {
            return Err(Error::InvalidFrame("psi0 must be antisymmetric for odd weight".into()));
        }
        if psi0.to_rational().determinant().is_zero() {
            return Err(Error::InvalidFrame("psi0 is degenerate".into()));
        }
        let frame = HodgeFrame { weight, hodge_numbers, psi0_c: psi0.to_complex(), psi0, phi0 };
        let scale = frame.phi0.iter().fold(1.0f64, |a, z| a.max(z.norm()));
        for i in 0..=weight {
            for j in 0..=weight {
                if i + j <= weight {
                    continue;
                }
                for r in 0..frame.filtration_dim(i) {
                    for s in 0..frame.filtration_dim(j) {
                        if frame.phi0[(r, s)].norm() > 1e-12 * scale {
                            return Err(Error::InvalidFrame(format!(
                                "phi0[{}][{}] must vanish (psi0(F^{i}, F^{j}) = 0)",
                                r + 1,
                                s + 1
                            )));
                        }
                    }
                }
            }
        }
        if rcond(&frame.phi0) < 1e-12 {
            return Err(Error::InvalidFrame("phi0 is degenerate".into()));
        }
        Ok(frame)
    }

    /// Weight-one frame of genus `g`: `Ψ0 = Φ0 = [[0, -I], [I, 0]]`.
    pub fn weight_one(g: usize) -> Self {
        let psi0 = IntMatrix::standard_symplectic(g);
        let phi0 = psi0.to_complex();
        Self::new(1, vec![g, g], psi0, phi0).expect("standard frame is valid")
    }

    /// The elliptic frame `m = 1`, `h^{1,0} = h^{0,1} = 1`.
    pub fn elliptic() -> Self {
        Self::weight_one(1)
    }

    /// Weight three with Hodge numbers (1, 1, 1, 1) and the mirror-quintic
    /// forms `Ψ0 = [[0, I], [-I, 0]]`, `Φ0` anti-diagonal `(1, 1, -1, -1)`.
    pub fn mirror_quintic() -> Self {
        let psi0 = IntMatrix::standard_symplectic(2).neg();
        let phi0 = crate::numeric::real_matrix(
            4,
            4,
            &[0., 0., 0., 1., 0., 0., 1., 0., 0., -1., 0., 0., -1., 0., 0., 0.],
        );
        Self::new(3, vec![1, 1, 1, 1], psi0, phi0).expect("mirror quintic frame is valid")
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn hodge_numbers(&self) -> &[usize] {
        &self.hodge_numbers
    }

    pub fn dim(&self) -> usize {
        self.psi0.nrows()
    }

    /// `h^i = dim F^i`; zero for `i > m`.
    pub fn filtration_dim(&self, i: usize) -> usize {
        self.hodge_numbers.iter().skip(i).sum()
    }

    pub fn psi0(&self) -> &IntMatrix {
        &self.psi0
    }

    pub fn psi0_complex(&self) -> &CMatrix {
        &self.psi0_c
    }

    pub fn phi0(&self) -> &CMatrix {
        &self.phi0
    }

    /// `Ψ0^{-ᵀ}` in floating point.
    pub fn psi0_inv_t(&self) -> CMatrix {
        self.psi0_c.transpose().try_inverse().expect("psi0 is nondegenerate")
    }
}

/// A polarized lattice given by a basis `δ = p ω`.
#[derive(Clone, Debug)]
pub struct LatticePoint {
    frame: HodgeFrame,
    p: CMatrix,
    p_inv: CMatrix,
    rcond: f64,
}

impl LatticePoint {
    pub fn new(frame: HodgeFrame, p: CMatrix) -> Result<Self> {
        let h = frame.dim();
        if p.nrows() != h || p.ncols() != h {
            return Err(Error::DimensionMismatch { expected: h, found: p.nrows().max(p.ncols()) });
        }
        let rc = rcond(&p);
        let p_inv = checked_inverse(&p, SINGULAR_RCOND).ok_or(Error::SingularLattice(rc))?;
        Ok(LatticePoint { frame, p, p_inv, rcond: rc })
    }

    pub fn frame(&self) -> &HodgeFrame {
        &self.frame
    }

    pub fn basis(&self) -> &CMatrix {
        &self.p
    }

    pub fn basis_inverse(&self) -> &CMatrix {
        &self.p_inv
    }

    /// Reciprocal condition number of the basis matrix.
    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    /// `per = Ψ0ᵀ p^{-ᵀ}`.
    pub fn period_matrix(&self) -> PeriodMatrix {
        let per = self.frame.psi0_c.transpose() * self.p_inv.transpose();
        PeriodMatrix { frame: self.frame.clone(), per }
    }

    /// Polarization in the ω basis, `p^{-1} Ψ0 p^{-ᵀ}`.
    pub fn polarization(&self) -> CMatrix {
        &self.p_inv * &self.frame.psi0_c * self.p_inv.transpose()
    }

    /// The lattice `A·x` for an integral change of basis.
    pub fn act_gamma(&self, a: &IntMatrix) -> Result<Self> {
        Self::new(self.frame.clone(), a.to_complex() * &self.p)
    }

    /// The point `x g`, i.e. the lattice `g^{-1}(V_Z(x))` written as `p g^{-ᵀ}`.
    pub fn act_g0(&self, g: &CMatrix) -> Result<Self> {
        let g_inv = g.clone().try_inverse().ok_or(Error::SingularPeriod)?;
        Self::new(self.frame.clone(), &self.p * g_inv.transpose())
    }
}

/// `per = [∫_{δ_i} ω_j]`.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    frame: HodgeFrame,
    per: CMatrix,
}

impl PeriodMatrix {
    pub fn new(frame: HodgeFrame, per: CMatrix) -> Result<Self> {
        let h = frame.dim();
        if per.nrows() != h || per.ncols() != h {
            return Err(Error::DimensionMismatch { expected: h, found: per.nrows().max(per.ncols()) });
        }
        Ok(PeriodMatrix { frame, per })
    }

    pub fn frame(&self) -> &HodgeFrame {
        &self.frame
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.per
    }

    /// Dual presentation `q` with `Ψ0ᵀ = per · qᵀ`.
    pub fn dual_matrix(&self) -> Result<CMatrix> {
        let inv = checked_inverse(&self.per, SINGULAR_RCOND).ok_or(Error::SingularPeriod)?;
        Ok((inv * self.frame.psi0_c.transpose()).transpose())
    }

    /// The lattice point whose basis is the dual presentation.
    pub fn lattice_point(&self) -> Result<LatticePoint> {
        LatticePoint::new(self.frame.clone(), self.dual_matrix()?)
    }

    /// For weight one, genus one: `Im(x1 · conj(x3)) > 0`.
    pub fn elliptic_orientation(&self) -> Option<f64> {
        (self.per.nrows() == 2).then(|| (self.per[(0, 0)] * self.per[(1, 0)].conj()).im)
    }

    pub fn conj(&self) -> CMatrix {
        conj(&self.per)
    }
}

/// The period matrix `[[τ, -1], [1, 0]]` of the lattice `Z + τZ`.
pub fn elliptic_point(tau: Complex64) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[tau, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::zero()],
    )
}

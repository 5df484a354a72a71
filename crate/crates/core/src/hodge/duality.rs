use super::HodgeFrame;
use crate::exact::RationalMatrix;
use crate::rational::Rational;

/// Coordinates of `δ_i^pd` in the δ basis (`index` is 1-based).
///
/// The defining relation `δ_i(ω) = ψ(ω, δ_i^pd)` for all lattice `ω` makes
/// the matrix of `δ ↦ δ^pd` equal to `Ψ0^{-ᵀ}`; row `i` is `δ_i^pd`.
///
/// # Panics
/// If `index` is outside `1..=h`.
pub fn poincare_dual(frame: &HodgeFrame, index: usize) -> Vec<Rational> {
    assert!((1..=frame.dim()).contains(&index), "index out of range");
    poincare_dual_matrix(frame).row(index - 1).to_vec()
}

/// `Ψ0^{-ᵀ}`, whose rows are the Poincaré duals of the dual basis.
pub fn poincare_dual_matrix(frame: &HodgeFrame) -> RationalMatrix {
    frame.psi0().to_rational().transpose().inverse().expect("psi0 is nondegenerate")
}

/// `ψ^∨(δ_i, δ_j) = ψ(δ_i^pd, δ_j^pd)`, which equals `Ψ0^{-ᵀ}`.
pub fn dual_polarization(frame: &HodgeFrame) -> RationalMatrix {
    let d = poincare_dual_matrix(frame);
    d.mul(&frame.psi0().to_rational()).and_then(|x| x.mul(&d.transpose())).expect("square matrices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;
    use crate::rational::int;

    #[test]
    fn elliptic_duals() {
        let f = HodgeFrame::elliptic();
        assert_eq!(poincare_dual(&f, 1), vec![int(0), int(-1)]);
        assert_eq!(poincare_dual(&f, 2), vec![int(1), int(0)]);
    }

    #[test]
    fn dual_polarization_is_inverse_transpose() {
        for f in [HodgeFrame::elliptic(), HodgeFrame::mirror_quintic(), HodgeFrame::weight_one(3)] {
            let dual = dual_polarization(&f);
            assert_eq!(dual, f.psi0().to_rational().transpose().inverse().unwrap());
            assert!(dual.to_integer().is_some());
        }
    }

    #[test]
    fn equivariance_under_integral_isometry() {
        // (A^∨ δ)^pd = A^{-1} δ^pd, i.e. Aᵀ Ψ0^{-ᵀ} = Ψ0^{-ᵀ} A^{-1} in row coordinates
        let f = HodgeFrame::elliptic();
        let a = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]).to_rational();
        let d = poincare_dual_matrix(&f);
        let lhs = a.transpose().mul(&d).unwrap();
        let rhs = d.mul(&a.inverse().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

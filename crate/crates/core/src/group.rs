//! The discrete group `Γ_Z`, the filtration-preserving group `G0`, their
//! actions on period matrices, and the elliptic parameter action.

use nalgebra::SVD;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Num, One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::hodge::{HodgeFrame, PeriodMatrix};
use crate::numeric::{max_abs, CMatrix};

/// Relative tolerance for `gᵀ Φ0 g = Φ0` and the triangular pattern.
pub const G0_TOLERANCE: f64 = 1e-12;

fn check_square(frame: &HodgeFrame, rows: usize, cols: usize) -> Result<()> {
    let h = frame.dim();
    if rows != h || cols != h {
        return Err(Error::DimensionMismatch { expected: h, found: if rows != h { rows } else { cols } });
    }
    Ok(())
}

/// `A Ψ0 Aᵀ = Ψ0` and `det A = ±1`, exactly.
pub fn gamma_membership(frame: &HodgeFrame, a: &IntMatrix) -> Result<bool> {
    check_square(frame, a.nrows(), a.ncols())?;
    let psi = frame.psi0();
    let lhs = a.mul(psi)?.mul(&a.transpose())?;
    if lhs != *psi {
        return Ok(false);
    }
    let det = a.to_rational().determinant();
    Ok(det.abs().is_one())
}

/// Hodge block of each coordinate: the largest `i` with `r < h^i`.
fn coordinate_blocks(frame: &HodgeFrame) -> Vec<usize> {
    (0..frame.dim())
        .map(|r| (0..=frame.weight()).rev().find(|&i| r < frame.filtration_dim(i)).unwrap_or(0))
        .collect()
}

/// Positions `(r, c)` that may be nonzero in a matrix preserving every `F^i`.
fn allowed_positions(frame: &HodgeFrame) -> Vec<(usize, usize)> {
    let b = coordinate_blocks(frame);
    let h = frame.dim();
    (0..h).flat_map(|r| (0..h).map(move |c| (r, c))).filter(|&(r, c)| b[r] >= b[c]).collect()
}

/// `gᵀ Φ0 g = Φ0` and `g(F^i) ⊂ F^i`, within [`G0_TOLERANCE`].
pub fn g0_membership(frame: &HodgeFrame, g: &CMatrix) -> Result<bool> {
    check_square(frame, g.nrows(), g.ncols())?;
    let scale = max_abs(g).max(1.0);
    let allowed = allowed_positions(frame);
    for r in 0..g.nrows() {
        for c in 0..g.ncols() {
            if !allowed.contains(&(r, c)) && g[(r, c)].norm() > G0_TOLERANCE * scale {
                return Ok(false);
            }
        }
    }
    let phi = frame.phi0();
    let residual = max_abs(&(g.transpose() * phi * g - phi));
    Ok(residual <= G0_TOLERANCE * scale * scale * max_abs(phi).max(1.0))
}

/// An element of `Γ_Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralIsometry(IntMatrix);

impl IntegralIsometry {
    pub fn new(frame: &HodgeFrame, a: IntMatrix) -> Result<Self> {
        if gamma_membership(frame, &a)? {
            Ok(IntegralIsometry(a))
        } else {
            Err(Error::NotAMember("Γ_Z"))
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        IntegralIsometry(self.0.mul(&other.0).expect("same size"))
    }

    /// Exact inverse; integral because `det = ±1`.
    pub fn inverse(&self) -> Self {
        let inv = self.0.to_rational().inverse().expect("unimodular");
        IntegralIsometry(inv.to_integer().expect("unimodular inverse is integral"))
    }
}

/// An element of `G0`.
#[derive(Clone, Debug)]
pub struct FiltrationIsometry(CMatrix);

impl FiltrationIsometry {
    pub fn new(frame: &HodgeFrame, g: CMatrix) -> Result<Self> {
        if g0_membership(frame, &g)? {
            Ok(FiltrationIsometry(g))
        } else {
            Err(Error::NotAMember("G0"))
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
}

/// `A · per`.
pub fn act_left(a: &IntegralIsometry, per: &PeriodMatrix) -> Result<PeriodMatrix> {
    if !gamma_membership(per.frame(), a.matrix())? {
        return Err(Error::NotAMember("Γ_Z"));
    }
    PeriodMatrix::new(per.frame().clone(), a.matrix().to_complex() * per.matrix())
}

/// `per · g`.
pub fn act_right(per: &PeriodMatrix, g: &FiltrationIsometry) -> Result<PeriodMatrix> {
    if !g0_membership(per.frame(), g.matrix())? {
        return Err(Error::NotAMember("G0"));
    }
    PeriodMatrix::new(per.frame().clone(), per.matrix() * g.matrix())
}

/// `t • g = (t1 k^-2 + k' k^-1, t2 k^-4, t3 k^-6)` for `g = [[k, k'], [0, k^-1]]`.
pub fn elliptic_parameter_action<T: Clone + Num>(t: &[T; 3], k: &T, k_prime: &T) -> Result<[T; 3]> {
    if k.is_zero() {
        return Err(Error::ZeroScaling);
    }
    let k2 = k.clone() * k.clone();
    let k4 = k2.clone() * k2.clone();
    let k6 = k4.clone() * k2.clone();
    Ok([
        t[0].clone() / k2 + k_prime.clone() / k.clone(),
        t[1].clone() / k4,
        t[2].clone() / k6,
    ])
}

/// Product of elliptic `G0` elements `(k, k')·(l, l') = (kl, kl' + k'/l)`.
pub fn elliptic_g0_compose<T: Clone + Num>(g: &(T, T), h: &(T, T)) -> (T, T) {
    (g.0.clone() * h.0.clone(), g.0.clone() * h.1.clone() + g.1.clone() / h.0.clone())
}

/// `[[k, k'], [0, 1/k]]` as a complex matrix.
pub fn elliptic_g0_matrix(k: Complex64, k_prime: Complex64) -> Result<CMatrix> {
    if k == Complex64::zero() {
        return Err(Error::ZeroScaling);
    }
    Ok(CMatrix::from_row_slice(2, 2, &[k, k_prime, Complex64::zero(), k.inv()]))
}

/// `27 t3² - t2³`.
pub fn discriminant<T: Clone + Num>(t: &[T; 3]) -> T {
    let t3sq = t[2].clone() * t[2].clone();
    let t2cube = t[1].clone() * t[1].clone() * t[1].clone();
    let mut twenty_seven = T::zero();
    for _ in 0..27 {
        twenty_seven = twenty_seven + T::one();
    }
    twenty_seven * t3sq - t2cube
}

/// `1728 t2³ / (t2³ - 27 t3²)`; `None` on the discriminant locus.
pub fn j_invariant<T: Clone + Num>(t: &[T; 3]) -> Option<T> {
    let d = discriminant(t);
    if d.is_zero() {
        return None;
    }
    let mut c = T::zero();
    for _ in 0..1728 {
        c = c + T::one();
    }
    let t2cube = t[1].clone() * t[1].clone() * t[1].clone();
    Some(c * t2cube / (T::zero() - d))
}

fn standard_genus(frame: &HodgeFrame) -> Result<usize> {
    let h = frame.dim();
    let g = h / 2;
    let j = IntMatrix::standard_symplectic(g);
    if h.is_multiple_of(2) && (*frame.psi0() == j || *frame.psi0() == j.neg()) {
        Ok(g)
    } else {
        Err(Error::InvalidFrame("random Γ_Z elements need a standard symplectic psi0".into()))
    }
}

/// One random generator of `Sp(2g, Z)`: `J`, `[[I, S], [0, I]]` or `[[U, 0], [0, U^-ᵀ]]`.
pub fn random_symplectic_generator<R: Rng + ?Sized>(g: usize, rng: &mut R) -> IntMatrix {
    let one = IntMatrix::identity(g);
    let zero = IntMatrix::zeros(g, g);
    match rng.gen_range(0..3) {
        0 => IntMatrix::standard_symplectic(g),
        1 => {
            let mut s = IntMatrix::zeros(g, g);
            for r in 0..g {
                for c in r..g {
                    let v = BigInt::from(rng.gen_range(-2i64..=2));
                    s.set(r, c, v.clone());
                    s.set(c, r, v);
                }
            }
            let block = IntMatrix::from_blocks(&one, &s, &zero, &one);
            if rng.gen_bool(0.5) {
                block
            } else {
                block.transpose()
            }
        }
        _ => {
            let mut u = IntMatrix::identity(g);
            if g > 1 {
                let r = rng.gen_range(0..g);
                let c = (r + rng.gen_range(1..g)) % g;
                u.set(r, c, BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 }));
            } else if rng.gen_bool(0.5) {
                u.set(0, 0, -BigInt::one());
            }
            let u_inv_t = u.to_rational().inverse().expect("unimodular").to_integer().expect("integral").transpose();
            IntMatrix::from_blocks(&u, &zero, &zero, &u_inv_t)
        }
    }
}

/// A random word of the given length in the symplectic generators.
pub fn random_gamma<R: Rng + ?Sized>(frame: &HodgeFrame, word_length: usize, rng: &mut R) -> Result<IntegralIsometry> {
    let g = standard_genus(frame)?;
    let mut a = IntMatrix::identity(2 * g);
    for _ in 0..word_length {
        a = a.mul(&random_symplectic_generator(g, rng))?;
    }
    IntegralIsometry::new(frame, a)
}

/// Basis of the Lie algebra of `G0`: block-upper-triangular `X` with `Xᵀ Φ0 + Φ0 X = 0`.
pub fn g0_lie_algebra(frame: &HodgeFrame) -> Vec<CMatrix> {
    let h = frame.dim();
    let pos = allowed_positions(frame);
    let n = pos.len();
    let phi = frame.phi0();
    let rows = (h * h).max(n);
    let mut k = CMatrix::zeros(rows, n);
    for (col, &(r, c)) in pos.iter().enumerate() {
        let mut x = CMatrix::zeros(h, h);
        x[(r, c)] = Complex64::one();
        let image = x.transpose() * phi + phi * &x;
        for (idx, z) in image.iter().enumerate() {
            k[(idx, col)] = *z;
        }
    }
    let svd = SVD::new(k, false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= 1e-10 * smax)
        .map(|(idx, _)| {
            let mut x = CMatrix::zeros(h, h);
            for (col, &(r, c)) in pos.iter().enumerate() {
                x[(r, c)] = v_t[(idx, col)].conj();
            }
            x.map(|z| Complex64::new(clean(z.re), clean(z.im)))
        })
        .collect()
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-14 {
        0.0
    } else {
        x
    }
}

/// `exp(X)` for a random complex combination of the Lie algebra basis with
/// coefficients of modulus at most `scale`.
pub fn random_g0<R: Rng + ?Sized>(frame: &HodgeFrame, scale: f64, rng: &mut R) -> FiltrationIsometry {
    let basis = g0_lie_algebra(frame);
    let h = frame.dim();
    let mut x = CMatrix::zeros(h, h);
    for b in &basis {
        let c = Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale));
        x += b * c;
    }
    FiltrationIsometry(x.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::{check_p1, check_p2, check_p3, elliptic_point, hodge_components, subspace_distance};
    use crate::rational::{int, rat, Rational};
    use proptest::prelude::{prop_assert_eq, proptest, Strategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_member_of_both() {
        for f in [HodgeFrame::elliptic(), HodgeFrame::mirror_quintic(), HodgeFrame::weight_one(3)] {
            assert!(gamma_membership(&f, &IntMatrix::identity(f.dim())).unwrap());
            assert!(g0_membership(&f, &CMatrix::identity(f.dim(), f.dim())).unwrap());
        }
    }

    #[test]
    fn elliptic_examples() {
        let f = HodgeFrame::elliptic();
        assert!(gamma_membership(&f, &IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]])).unwrap());
        assert!(!gamma_membership(&f, &IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 1]])).unwrap());
        let g = elliptic_g0_matrix(Complex64::new(2.0, 1.0), Complex64::new(-0.5, 3.0)).unwrap();
        assert!(g0_membership(&f, &g).unwrap());
        let lower = CMatrix::from_row_slice(2, 2, &[1.0.into(), 0.0.into(), 1.0.into(), 1.0.into()]);
        assert!(!g0_membership(&f, &lower).unwrap());
        assert!(matches!(gamma_membership(&f, &IntMatrix::identity(3)), Err(Error::DimensionMismatch { .. })));
        assert_eq!(elliptic_g0_matrix(Complex64::zero(), Complex64::one()), Err(Error::ZeroScaling));
    }

    #[test]
    fn parameter_action_examples() {
        let t = [int(0), int(1), int(1)];
        assert_eq!(elliptic_parameter_action(&t, &int(2), &int(0)).unwrap(), [int(0), rat(1, 16), rat(1, 64)]);
        assert_eq!(elliptic_parameter_action(&t, &int(1), &int(0)).unwrap(), t);
        assert_eq!(elliptic_parameter_action(&t, &int(0), &int(1)), Err(Error::ZeroScaling));
    }

    #[test]
    fn g0_lie_algebra_dimensions() {
        // Borel subalgebras: dimension 2 in sl2 and 6 in sp4
        assert_eq!(g0_lie_algebra(&HodgeFrame::elliptic()).len(), 2);
        assert_eq!(g0_lie_algebra(&HodgeFrame::mirror_quintic()).len(), 6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in [HodgeFrame::elliptic(), HodgeFrame::mirror_quintic(), HodgeFrame::weight_one(2)] {
            for _ in 0..10 {
                let g = random_g0(&f, 0.7, &mut rng);
                assert!(g0_membership(&f, g.matrix()).unwrap());
            }
        }
    }

    #[test]
    fn random_gamma_closed_under_product_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [HodgeFrame::elliptic(), HodgeFrame::weight_one(2), HodgeFrame::mirror_quintic()] {
            for _ in 0..20 {
                let a = random_gamma(&f, 6, &mut rng).unwrap();
                let b = random_gamma(&f, 6, &mut rng).unwrap();
                assert!(gamma_membership(&f, a.compose(&b).matrix()).unwrap());
                let inv = a.inverse();
                assert!(gamma_membership(&f, inv.matrix()).unwrap());
                assert_eq!(*a.compose(&inv).matrix(), IntMatrix::identity(f.dim()));
            }
        }
    }

    #[test]
    fn actions_preserve_p_and_associate() {
        let f = HodgeFrame::elliptic();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let tau = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..3.0));
            let per = PeriodMatrix::new(f.clone(), elliptic_point(tau)).unwrap();
            let a = random_gamma(&f, 5, &mut rng).unwrap();
            let g = random_g0(&f, 0.5, &mut rng);
            let left = act_right(&act_left(&a, &per).unwrap(), &g).unwrap();
            let right = act_left(&a, &act_right(&per, &g).unwrap()).unwrap();
            assert!(max_abs(&(left.matrix() - right.matrix())) < 1e-12 * max_abs(left.matrix()).max(1.0));
            assert!(left.elliptic_orientation().unwrap() > 0.0);
            let x = left.lattice_point().unwrap();
            assert!(check_p1(&x).pass && check_p2(&x).unwrap().pass && check_p3(&x).unwrap().pass);
        }
    }

    #[test]
    fn components_transform_by_inverse() {
        let f = HodgeFrame::weight_one(2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // a point of the Siegel space: per = [[X, -I], [I, 0]] with Im X > 0
        let x_block = [Complex64::new(0.3, 1.5), Complex64::new(0.1, 0.2), Complex64::new(0.1, 0.2), Complex64::new(-0.4, 0.9)];
        let per = CMatrix::from_fn(4, 4, |r, c| match (r < 2, c < 2) {
            (true, true) => x_block[r * 2 + c],
            (true, false) => if r == c - 2 { -Complex64::one() } else { Complex64::zero() },
            (false, true) => if r - 2 == c { Complex64::one() } else { Complex64::zero() },
            _ => Complex64::zero(),
        });
        let x = PeriodMatrix::new(f.clone(), per).unwrap().lattice_point().unwrap();
        assert!(check_p3(&x).unwrap().pass);
        for _ in 0..10 {
            let g = random_g0(&f, 0.5, &mut rng);
            let xg = x.act_g0(g.matrix()).unwrap();
            let g_inv = g.matrix().clone().try_inverse().unwrap();
            let before = hodge_components(&x).unwrap();
            let after = hodge_components(&xg).unwrap();
            for (b, a) in before.iter().zip(&after) {
                let moved = &g_inv * &b.basis;
                let q = moved.clone().qr().q();
                assert!(subspace_distance(&q, &a.basis) < 1e-8);
            }
            assert!(check_p1(&xg).pass && check_p2(&xg).unwrap().pass && check_p3(&xg).unwrap().pass);
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        small_rational().prop_filter("nonzero", |r| !r.is_zero())
    }

    proptest! {
        #[test]
        fn action_group_law_and_invariants(
            t in [small_rational(), small_rational(), small_rational()],
            g in (nonzero_rational(), small_rational()),
            h in (nonzero_rational(), small_rational()),
        ) {
            let tg = elliptic_parameter_action(&t, &g.0, &g.1).unwrap();
            let tgh = elliptic_parameter_action(&tg, &h.0, &h.1).unwrap();
            let gh = elliptic_g0_compose(&g, &h);
            prop_assert_eq!(&tgh, &elliptic_parameter_action(&t, &gh.0, &gh.1).unwrap());
            let k12 = num_traits::pow(g.0.clone(), 12);
            prop_assert_eq!(discriminant(&tg) * k12, discriminant(&t));
            prop_assert_eq!(j_invariant(&tg), j_invariant(&t));
        }
    }
}

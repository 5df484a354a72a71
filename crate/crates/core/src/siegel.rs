//! Weight one, genus `g`: Riemann relations and the Siegel upper half-space.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::hodge::MatrixJson;
use crate::group::random_symplectic_generator;
use crate::numeric::{checked_inverse, conj, max_abs, rcond, CMatrix};

/// Tolerance for the bilinear Riemann relations.
pub const RELATION_TOLERANCE: f64 = 1e-10;
/// Tolerance for symmetry of `x1 x3^{-1}`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;
const INVERTIBLE_RCOND: f64 = 1e-12;

/// Row blocks `[[x1, x2], [x3, x4]]` of a `2g × 2g` period matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelBlocks {
    pub x1: CMatrix,
    pub x2: CMatrix,
    pub x3: CMatrix,
    pub x4: CMatrix,
}

impl SiegelBlocks {
    pub fn from_period_matrix(per: &CMatrix) -> Result<Self> {
        let n = per.nrows();
        if per.ncols() != n || !n.is_multiple_of(2) || n == 0 {
            return Err(Error::DimensionMismatch { expected: 2 * (n / 2).max(1), found: per.ncols() });
        }
        let g = n / 2;
        let block = |r: usize, c: usize| per.view((r * g, c * g), (g, g)).into_owned();
        Ok(SiegelBlocks { x1: block(0, 0), x2: block(0, 1), x3: block(1, 0), x4: block(1, 1) })
    }

    /// `[[X, -I], [I, 0]]`.
    pub fn standard(x: &CMatrix) -> Self {
        let g = x.nrows();
        SiegelBlocks {
            x1: x.clone(),
            x2: -CMatrix::identity(g, g),
            x3: CMatrix::identity(g, g),
            x4: CMatrix::zeros(g, g),
        }
    }

    pub fn genus(&self) -> usize {
        self.x1.nrows()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let g = self.genus();
        let mut m = CMatrix::zeros(2 * g, 2 * g);
        m.view_mut((0, 0), (g, g)).copy_from(&self.x1);
        m.view_mut((0, g), (g, g)).copy_from(&self.x2);
        m.view_mut((g, 0), (g, g)).copy_from(&self.x3);
        m.view_mut((g, g), (g, g)).copy_from(&self.x4);
        m
    }

    /// `A · per` for an integral `2g × 2g` matrix.
    pub fn act_left(&self, a: &IntMatrix) -> Result<Self> {
        if a.nrows() != 2 * self.genus() || a.ncols() != 2 * self.genus() {
            return Err(Error::DimensionMismatch { expected: 2 * self.genus(), found: a.nrows() });
        }
        Self::from_period_matrix(&(a.to_complex() * self.to_matrix()))
    }

    /// `per · g`.
    pub fn act_right(&self, g: &CMatrix) -> Result<Self> {
        if g.nrows() != 2 * self.genus() || g.ncols() != 2 * self.genus() {
            return Err(Error::DimensionMismatch { expected: 2 * self.genus(), found: g.nrows() });
        }
        Self::from_period_matrix(&(self.to_matrix() * g))
    }
}

/// `{"x1": matrix, "x2": matrix, "x3": matrix, "x4": matrix}` in the matrix JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiegelBlocksJson {
    pub x1: MatrixJson,
    pub x2: MatrixJson,
    pub x3: MatrixJson,
    pub x4: MatrixJson,
}

impl SiegelBlocksJson {
    pub fn from_blocks(b: &SiegelBlocks) -> Self {
        SiegelBlocksJson {
            x1: MatrixJson::from_matrix(&b.x1),
            x2: MatrixJson::from_matrix(&b.x2),
            x3: MatrixJson::from_matrix(&b.x3),
            x4: MatrixJson::from_matrix(&b.x4),
        }
    }

    /// All four blocks must be square of the same size.
    pub fn to_blocks(&self) -> Result<SiegelBlocks> {
        let blocks = [&self.x1, &self.x2, &self.x3, &self.x4].map(|m| m.to_matrix());
        let [x1, x2, x3, x4] = blocks;
        let (x1, x2, x3, x4) = (x1?, x2?, x3?, x4?);
        let g = x1.nrows();
        for m in [&x1, &x2, &x3, &x4] {
            if m.nrows() != g || m.ncols() != g {
                return Err(Error::DimensionMismatch { expected: g, found: m.nrows().max(m.ncols()) });
            }
        }
        if g == 0 {
            return Err(Error::Parse("empty blocks".into()));
        }
        Ok(SiegelBlocks { x1, x2, x3, x4 })
    }

    pub fn parse(text: &str) -> Result<SiegelBlocks> {
        let j: SiegelBlocksJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        j.to_blocks()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RiemannReport {
    pub pass: bool,
    /// `max |x3ᵀ x1 - x1ᵀ x3|`.
    pub symmetry_residual: f64,
    /// `max |x3ᵀ x2 - x1ᵀ x4 + I|`.
    pub unimodular_residual: f64,
    /// Eigenvalues of `√-1 (x3ᵀ conj(x1) - x1ᵀ conj(x3))`.
    pub positivity_eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub x1_rcond: f64,
    pub x2_rcond: f64,
    pub tolerance: f64,
}

impl RiemannReport {
    pub fn max_residual(&self) -> f64 {
        self.symmetry_residual.max(self.unimodular_residual)
    }
}

/// The Riemann relations, positivity and invertibility of `x1`, `x2`.
pub fn riemann_check(b: &SiegelBlocks) -> RiemannReport {
    let g = b.genus();
    let scale = max_abs(&b.to_matrix()).max(1.0).powi(2);
    let symmetry_residual = max_abs(&(b.x3.transpose() * &b.x1 - b.x1.transpose() * &b.x3)) / scale;
    let unimodular_residual =
        max_abs(&(b.x3.transpose() * &b.x2 - b.x1.transpose() * &b.x4 + CMatrix::identity(g, g))) / scale;
    let p = (b.x3.transpose() * conj(&b.x1) - b.x1.transpose() * conj(&b.x3)) * Complex64::i();
    let herm = (&p + p.adjoint()) * Complex64::new(0.5, 0.0);
    let mut eig: Vec<f64> = herm.symmetric_eigenvalues().iter().cloned().collect();
    eig.sort_by(f64::total_cmp);
    let min_eigenvalue = eig.first().cloned().unwrap_or(f64::NAN);
    let hermitian_defect = max_abs(&(&p - p.adjoint())) / scale;
    let x1_rcond = rcond(&b.x1);
    let x2_rcond = rcond(&b.x2);
    let pass = symmetry_residual <= RELATION_TOLERANCE
        && unimodular_residual <= RELATION_TOLERANCE
        && hermitian_defect <= RELATION_TOLERANCE
        && min_eigenvalue > RELATION_TOLERANCE * scale
        && x1_rcond > INVERTIBLE_RCOND
        && x2_rcond > INVERTIBLE_RCOND;
    RiemannReport {
        pass,
        symmetry_residual,
        unimodular_residual,
        positivity_eigenvalues: eig,
        min_eigenvalue,
        x1_rcond,
        x2_rcond,
        tolerance: RELATION_TOLERANCE,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SiegelPointReport {
    pub symmetry_residual: f64,
    pub min_imaginary_eigenvalue: f64,
    pub pass: bool,
}

/// Symmetry and positive-definite imaginary part of a point of the Siegel space.
pub fn siegel_point_check(x: &CMatrix) -> SiegelPointReport {
    let scale = max_abs(x).max(1.0);
    let symmetry_residual = max_abs(&(x - x.transpose())) / scale;
    let im = x.map(|z| Complex64::new(z.im, 0.0));
    let im_sym = (&im + im.transpose()) * Complex64::new(0.5, 0.0);
    let min_imaginary_eigenvalue = im_sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    SiegelPointReport {
        symmetry_residual,
        min_imaginary_eigenvalue,
        pass: symmetry_residual <= SYMMETRY_TOLERANCE && min_imaginary_eigenvalue > SYMMETRY_TOLERANCE * scale,
    }
}

/// `x = x1 x3^{-1}`.
pub fn to_siegel(b: &SiegelBlocks) -> Result<CMatrix> {
    let inv = checked_inverse(&b.x3, INVERTIBLE_RCOND).ok_or(Error::SingularBlock)?;
    Ok(&b.x1 * inv)
}

/// `(a x + b)(c x + d)^{-1}` for `A = [[a, b], [c, d]]`.
pub fn fractional_linear(a: &IntMatrix, x: &CMatrix) -> Result<CMatrix> {
    let g = x.nrows();
    if a.nrows() != 2 * g || a.ncols() != 2 * g || x.ncols() != g {
        return Err(Error::DimensionMismatch { expected: 2 * g, found: a.nrows() });
    }
    let ac = a.to_complex();
    let blk = |r: usize, c: usize| ac.view((r * g, c * g), (g, g)).into_owned();
    let num = blk(0, 0) * x + blk(0, 1);
    let den = blk(1, 0) * x + blk(1, 1);
    let inv = checked_inverse(&den, INVERTIBLE_RCOND).ok_or(Error::SingularBlock)?;
    Ok(num * inv)
}

/// `ab^ᵀ = ba^ᵀ`, `cd^ᵀ = dc^ᵀ`, `ad^ᵀ - bc^ᵀ = I`, exactly.
pub fn sp_membership(a: &IntMatrix) -> Result<bool> {
    let n = a.nrows();
    if a.ncols() != n || !n.is_multiple_of(2) || n == 0 {
        return Err(Error::DimensionMismatch { expected: n.max(2) + n % 2, found: a.ncols() });
    }
    let g = n / 2;
    let (aa, bb, cc, dd) = (a.block(0, 0, g, g), a.block(0, g, g, g), a.block(g, 0, g, g), a.block(g, g, g, g));
    let ab = aa.mul(&bb.transpose())?;
    let cd = cc.mul(&dd.transpose())?;
    let unit = aa.mul(&dd.transpose())?.sub(&bb.mul(&cc.transpose())?)?;
    Ok(ab == ab.transpose() && cd == cd.transpose() && unit == IntMatrix::identity(g))
}

/// A random word in the generators of `Sp(2g, Z)`.
pub fn random_sp<R: Rng + ?Sized>(g: usize, word_length: usize, rng: &mut R) -> IntMatrix {
    let mut a = IntMatrix::identity(2 * g);
    for _ in 0..word_length {
        a = a.mul(&random_symplectic_generator(g, rng)).expect("same size");
    }
    a
}

/// A random symmetric `X` with `Im X` positive definite.
pub fn random_siegel_point<R: Rng + ?Sized>(g: usize, rng: &mut R) -> CMatrix {
    let b = CMatrix::from_fn(g, g, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
    let y = &b * b.transpose() + CMatrix::identity(g, g) * Complex64::new(0.5, 0.0);
    let re = CMatrix::from_fn(g, g, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
    let re = (&re + re.transpose()) * Complex64::new(0.5, 0.0);
    re + y * Complex64::i()
}

/// `[[k, kM], [0, k^{-ᵀ}]]` with `k` random invertible and `M` random symmetric.
pub fn random_g0_blocks<R: Rng + ?Sized>(g: usize, rng: &mut R) -> CMatrix {
    let mut rnd = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let k = CMatrix::identity(g, g) * Complex64::new(1.5, 0.0) + CMatrix::from_fn(g, g, |_, _| rnd() * 0.5);
    let m = CMatrix::from_fn(g, g, |_, _| rnd());
    let m = (&m + m.transpose()) * Complex64::new(0.5, 0.0);
    let k_inv_t = k.clone().try_inverse().expect("diagonally dominant").transpose();
    let mut out = CMatrix::zeros(2 * g, 2 * g);
    out.view_mut((0, 0), (g, g)).copy_from(&k);
    out.view_mut((0, g), (g, g)).copy_from(&(&k * m));
    out.view_mut((g, g), (g, g)).copy_from(&k_inv_t);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::g0_membership;
    use crate::hodge::HodgeFrame;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tau_blocks(tau: Complex64) -> SiegelBlocks {
        SiegelBlocks::standard(&CMatrix::from_element(1, 1, tau))
    }

    #[test]
    fn blocks_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = SiegelBlocks::standard(&random_siegel_point(2, &mut rng));
        let text = serde_json::to_string(&SiegelBlocksJson::from_blocks(&b)).unwrap();
        assert_eq!(SiegelBlocksJson::parse(&text).unwrap(), b);
        let one = r#"{"rows":1,"cols":1,"entries":[1]}"#;
        let two = r#"{"rows":2,"cols":2,"entries":[1,0,0,1]}"#;
        let mixed = format!(r#"{{"x1":{one},"x2":{two},"x3":{one},"x4":{one}}}"#);
        assert!(matches!(SiegelBlocksJson::parse(&mixed), Err(Error::DimensionMismatch { .. })));
        assert!(SiegelBlocksJson::parse(r#"{"x1":1}"#).is_err());
    }

    #[test]
    fn genus_one_examples() {
        let tau = Complex64::new(0.3, 1.7);
        let b = tau_blocks(tau);
        assert!(riemann_check(&b).pass);
        assert!((to_siegel(&b).unwrap()[(0, 0)] - tau).norm() < 1e-15);
        let lower = riemann_check(&tau_blocks(tau.conj()));
        assert!(!lower.pass && lower.min_eigenvalue < 0.0);
    }

    #[test]
    fn block_diagonal_embedding() {
        let mut x = CMatrix::zeros(2, 2);
        x[(0, 0)] = Complex64::new(0.1, 1.0);
        x[(1, 1)] = Complex64::new(-0.4, 2.0);
        assert!(riemann_check(&SiegelBlocks::standard(&x)).pass);
    }

    #[test]
    fn membership_examples() {
        for g in 1..=3 {
            assert!(sp_membership(&IntMatrix::identity(2 * g)).unwrap());
            assert!(sp_membership(&IntMatrix::standard_symplectic(g)).unwrap());
        }
        let i = IntMatrix::identity(2);
        let z = IntMatrix::zeros(2, 2);
        let sym = IntMatrix::from_i64_rows(&[vec![1, 2], vec![2, -3]]);
        let nonsym = IntMatrix::from_i64_rows(&[vec![1, 2], vec![0, -3]]);
        assert!(sp_membership(&IntMatrix::from_blocks(&i, &sym, &z, &i)).unwrap());
        assert!(!sp_membership(&IntMatrix::from_blocks(&i, &nonsym, &z, &i)).unwrap());
        assert!(sp_membership(&IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn singular_x3_is_reported() {
        let b = SiegelBlocks {
            x1: CMatrix::identity(2, 2),
            x2: CMatrix::identity(2, 2),
            x3: CMatrix::zeros(2, 2),
            x4: CMatrix::identity(2, 2),
        };
        assert_eq!(to_siegel(&b), Err(Error::SingularBlock));
    }

    #[test]
    fn actions_and_quotient_routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in 1..=3 {
            let frame = HodgeFrame::weight_one(g);
            for _ in 0..15 {
                let x = random_siegel_point(g, &mut rng);
                let base = SiegelBlocks::standard(&x);
                let k = random_g0_blocks(g, &mut rng);
                assert!(g0_membership(&frame, &k).unwrap());
                let moved = base.act_right(&k).unwrap();
                assert!(riemann_check(&moved).pass);
                assert!(max_abs(&(to_siegel(&moved).unwrap() - &x)) < 1e-9);
                let a = random_sp(g, 4, &mut rng);
                assert!(sp_membership(&a).unwrap());
                let left = moved.act_left(&a).unwrap();
                assert!(riemann_check(&left).pass, "{:?}", riemann_check(&left));
                let via_blocks = to_siegel(&left).unwrap();
                let via_formula = fractional_linear(&a, &x).unwrap();
                assert!(max_abs(&(&via_blocks - via_formula)) < 1e-8 * max_abs(&via_blocks).max(1.0));
                assert!(siegel_point_check(&via_blocks).pass);
            }
        }
    }
}

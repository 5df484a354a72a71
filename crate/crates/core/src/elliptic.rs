//! Periods of the Weierstrass family `y² = 4(x - t1)³ - t2 (x - t1) - t3`.
//!
//! Cycle integrals are computed on straight segments between branch points.
//! On the segment from `e_i` to `e_j` the substitution
//! `X = e_i + (e_j - e_i)(1 - cos φ)/2` turns `dX/y` into
//! `dφ / (2i √(X - e_k))`, a smooth periodic integrand, so the trapezoid
//! rule converges geometrically.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::eisenstein::{evaluate_e246, j_numeric};
use crate::error::{Error, Result};
use crate::hodge::{HodgeFrame, PeriodMatrix};
use crate::numeric::CMatrix;

/// Relative tolerance of the Legendre relation `det = 1`.
pub const LEGENDRE_GATE: f64 = 1e-9;

const MAX_NEWTON: usize = 60;
const MIN_NODES: usize = 16;
const MAX_NODES: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipticParameters {
    pub t1: Complex64,
    pub t2: Complex64,
    pub t3: Complex64,
}

impl EllipticParameters {
    pub fn new(t1: Complex64, t2: Complex64, t3: Complex64) -> Self {
        EllipticParameters { t1, t2, t3 }
    }

    pub fn as_array(&self) -> [Complex64; 3] {
        [self.t1, self.t2, self.t3]
    }

    /// `27 t3² - t2³`.
    pub fn discriminant(&self) -> Complex64 {
        self.t3 * self.t3 * 27.0 - self.t2 * self.t2 * self.t2
    }

    fn check_discriminant(&self) -> Result<()> {
        let scale = (self.t2.norm().powi(3)).max(27.0 * self.t3.norm_sqr());
        let d = self.discriminant().norm();
        if scale == 0.0 || d <= 1e-14 * scale || !d.is_finite() {
            return Err(Error::DiscriminantZero);
        }
        Ok(())
    }
}

/// `1728 t2³ / (t2³ - 27 t3²)`.
pub fn j_from_parameters(t: &EllipticParameters) -> Result<Complex64> {
    t.check_discriminant()?;
    let c = t.t2 * t.t2 * t.t2;
    Ok(c * 1728.0 / (-t.discriminant()))
}

/// Roots of `4X³ - t2 X - t3`, by Cardano's formula followed by Newton polishing.
pub fn cubic_roots(t2: Complex64, t3: Complex64) -> Result<[Complex64; 3]> {
    // X³ + pX + q with p = -t2/4, q = -t3/4
    let p = -t2 / 4.0;
    let q = -t3 / 4.0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if u3.norm() < (-q / 2.0 - disc).norm() {
        u3 = -q / 2.0 - disc;
    }
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    if u3.norm() == 0.0 {
        // p = q = 0 is excluded by the discriminant check
        return Err(Error::RootFindingFailure("degenerate cubic".into()));
    }
    let u = u3.cbrt();
    let mut uk = u;
    for r in &mut roots {
        *r = uk - p / (uk * 3.0);
        uk *= omega;
    }
    let scale = t2.norm().sqrt().max(t3.norm().cbrt()).max(1e-300);
    let f = |x: Complex64| x * x * x * 4.0 - t2 * x - t3;
    let df = |x: Complex64| x * x * 12.0 - t2;
    for r in &mut roots {
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let d = df(*r);
            if d.norm() == 0.0 {
                break;
            }
            let step = f(*r) / d;
            *r -= step;
            if !r.re.is_finite() || !r.im.is_finite() {
                break;
            }
            if step.norm() <= 4.0 * f64::EPSILON * scale.max(r.norm()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::RootFindingFailure(format!("Newton refinement stalled near {r}")));
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if (roots[i] - roots[j]).norm() <= 1e-12 * scale {
                return Err(Error::RootFindingFailure("roots collapsed during refinement".into()));
            }
        }
    }
    Ok(roots)
}

/// Integrals of `dX/y` and `X dX/y` over the cycle around the segment `[a, b]`,
/// with `c` the remaining root.
fn cycle_integrals(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let base = (a - c).sqrt();
    let r = (b - a) / (a - c);
    let eval = |n: usize| -> (Complex64, Complex64) {
        // trapezoid on [0, 2π) of an even periodic integrand = midpoint-free sum over φ_k
        let mut s0 = Complex64::new(0.0, 0.0);
        let mut s1 = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let phi = 2.0 * PI * k as f64 / n as f64;
            let u = (1.0 - phi.cos()) / 2.0;
            let root = base * (Complex64::new(1.0, 0.0) + r * u).sqrt();
            let x = a + (b - a) * u;
            s0 += root.inv();
            s1 += x / root;
        }
        // ∫_0^π = (1/2) ∫_0^{2π}; cycle = 2 ∫ segment; factor 1/(2i)
        let w = Complex64::new(0.0, -1.0) * (PI / n as f64);
        (s0 * w, s1 * w)
    };
    let mut n = MIN_NODES;
    let mut prev = eval(n);
    while n < MAX_NODES {
        n *= 2;
        let next = eval(n);
        let err = (next.0 - prev.0).norm().max((next.1 - prev.1).norm());
        let size = next.0.norm().max(next.1.norm()).max(f64::MIN_POSITIVE);
        prev = next;
        if err <= 1e-15 * size {
            break;
        }
    }
    prev
}

/// Period data of `E_t` before normalization.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodDiagnostics {
    pub roots: [(f64, f64); 3],
    /// `|det - 1|` of the normalized matrix.
    pub legendre_residual: f64,
    /// Whether the second row was negated to orient the basis.
    pub reoriented: bool,
}

/// The normalized period matrix `(1/√(-2πi)) [[∫dx/y, ∫x dx/y], ...]`.
pub fn periods(t: &EllipticParameters) -> Result<PeriodMatrix> {
    periods_with_diagnostics(t).map(|(p, _)| p)
}

pub fn periods_with_diagnostics(t: &EllipticParameters) -> Result<(PeriodMatrix, PeriodDiagnostics)> {
    if t.as_array().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("non-finite parameter".into()));
    }
    t.check_discriminant()?;
    let e = cubic_roots(t.t2, t.t3)?;
    // the two shortest triangle edges share a vertex and give a cycle basis
    let mut edges = [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)];
    edges.sort_by(|x, y| (e[x.0] - e[x.1]).norm().total_cmp(&(e[y.0] - e[y.1]).norm()));
    let rows: Vec<(Complex64, Complex64)> = edges[..2]
        .iter()
        .map(|&(i, j, k)| {
            let (w, eta) = cycle_integrals(e[i], e[j], e[k]);
            (w, eta + t.t1 * w)
        })
        .collect();
    let (mut r1, mut r2) = (rows[0], rows[1]);
    if r2.0.norm() == 0.0 || r1.0.norm() == 0.0 {
        return Err(Error::RootFindingFailure("vanishing period".into()));
    }
    let reoriented = (r1.0 / r2.0).im < 0.0;
    if reoriented {
        r2 = (-r2.0, -r2.1);
    }
    let norm = Complex64::new(0.0, -2.0 * PI).sqrt().inv();
    r1 = (r1.0 * norm, r1.1 * norm);
    r2 = (r2.0 * norm, r2.1 * norm);
    let det = r1.0 * r2.1 - r1.1 * r2.0;
    let legendre_residual = (det - 1.0).norm();
    if !(legendre_residual < LEGENDRE_GATE) {
        return Err(Error::LegendreGate(legendre_residual));
    }
    let per = CMatrix::from_row_slice(2, 2, &[r1.0, r1.1, r2.0, r2.1]);
    let diagnostics = PeriodDiagnostics {
        roots: [(e[0].re, e[0].im), (e[1].re, e[1].im), (e[2].re, e[2].im)],
        legendre_residual,
        reoriented,
    };
    Ok((PeriodMatrix::new(HodgeFrame::elliptic(), per)?, diagnostics))
}

/// Reduces `τ` to the standard fundamental domain of `SL(2, Z)`.
///
/// Returns the reduced point and `[[a, b], [c, d]]` with `τ' = (aτ + b)/(cτ + d)`.
pub fn reduce_to_fundamental_domain(tau: Complex64) -> Result<(Complex64, [[i64; 2]; 2])> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::Domain(format!("{tau} is not in the upper half-plane")));
    }
    let mut z = tau;
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..10_000 {
        let n = z.re.round();
        if n != 0.0 {
            let n_i = n as i64;
            z -= n;
            m = [[m[0][0] - n_i * m[1][0], m[0][1] - n_i * m[1][1]], m[1]];
        }
        if z.norm_sqr() < 1.0 - 1e-15 {
            z = -z.inv();
            m = [[-m[1][0], -m[1][1]], m[0]];
        } else {
            return Ok((z, m));
        }
    }
    Err(Error::Domain(format!("reduction of {tau} did not terminate")))
}

/// The graded Eisenstein values `(g1, g2, g3)(τ) = ((2πi)/12 E2, (2πi)²/12 E4, (2πi)³/216 E6)`.
pub fn eisenstein_parameters(tau: Complex64, n: usize) -> Result<(EllipticParameters, f64)> {
    let ([e2, e4, e6], tail) = evaluate_e246(tau, n)?;
    let tpi = Complex64::new(0.0, 2.0 * PI);
    Ok((
        EllipticParameters::new(tpi * e2 / 12.0, tpi * tpi * e4 / 12.0, tpi * tpi * tpi * e6 / 216.0),
        tail,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub tau: (f64, f64),
    pub reduced_tau: (f64, f64),
    pub ratio: (f64, f64),
    pub reduced_ratio: (f64, f64),
    pub j_tau: (f64, f64),
    pub j_ratio: (f64, f64),
    /// `|j(ratio) - j(τ)| / max(1, |j(τ)|)`.
    pub j_relative_error: f64,
    pub reduced_distance: f64,
    pub eisenstein_tail: f64,
    pub legendre_residual: f64,
}

/// `τ ↦ t(τ) ↦ per(t) ↦ x1/x3`, compared with `τ` through `j` and the fundamental domain.
pub fn inverse_roundtrip(tau: Complex64, n: usize) -> Result<RoundtripReport> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(Error::Domain(format!("{tau} is not in the upper half-plane")));
    }
    // q only sees τ mod 1
    let tau_mod = Complex64::new(tau.re - tau.re.round(), tau.im);
    let (t, tail) = eisenstein_parameters(tau_mod, n)?;
    let (per, diag) = periods_with_diagnostics(&t)?;
    let m = per.matrix();
    let ratio = m[(0, 0)] / m[(1, 0)];
    let (reduced_tau, _) = reduce_to_fundamental_domain(tau_mod)?;
    let (reduced_ratio, _) = reduce_to_fundamental_domain(ratio)?;
    let j_tau = j_numeric(reduced_tau, n)?;
    let j_ratio = j_numeric(reduced_ratio, n)?;
    let pair = |z: Complex64| (z.re, z.im);
    Ok(RoundtripReport {
        tau: pair(tau),
        reduced_tau: pair(reduced_tau),
        ratio: pair(ratio),
        reduced_ratio: pair(reduced_ratio),
        j_tau: pair(j_tau),
        j_ratio: pair(j_ratio),
        j_relative_error: (j_ratio - j_tau).norm() / j_tau.norm().max(1.0),
        reduced_distance: fundamental_domain_distance(reduced_tau, reduced_ratio),
        eisenstein_tail: tail,
        legendre_residual: diag.legendre_residual,
    })
}

/// Distance between reduced points, identifying the boundary pairs of the domain.
fn fundamental_domain_distance(a: Complex64, b: Complex64) -> f64 {
    let mut best = (a - b).norm();
    for shift in [-1.0, 1.0] {
        best = best.min((a - (b + shift)).norm());
    }
    best.min((a + b.conj()).norm().min((a - (-b.inv())).norm()))
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    /// `periods(t•g) · (periods(t) · g)^{-1}`, rounded.
    pub gamma: [[i64; 2]; 2],
    /// Distance of the transition matrix from the rounded integral matrix.
    pub integrality_residual: f64,
    pub j_difference: f64,
}

/// Compares `periods(t•g)` with `periods(t)·g` up to the left action of `Γ_Z`.
pub fn g0_equivariance(t: &EllipticParameters, k: Complex64, k_prime: Complex64) -> Result<EquivarianceReport> {
    let tg = crate::group::elliptic_parameter_action(&t.as_array(), &k, &k_prime)?;
    let tg = EllipticParameters::new(tg[0], tg[1], tg[2]);
    let g = crate::group::elliptic_g0_matrix(k, k_prime)?;
    let lhs = periods(&tg)?;
    let rhs = periods(t)?.matrix() * g;
    let inv = rhs.try_inverse().ok_or(Error::SingularPeriod)?;
    let a = lhs.matrix() * inv;
    let mut gamma = [[0i64; 2]; 2];
    let mut residual: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let z = a[(r, c)];
            let n = z.re.round();
            gamma[r][c] = n as i64;
            residual = residual.max((z - n).norm());
        }
    }
    let j_difference = (j_from_parameters(&tg)? - j_from_parameters(t)?).norm();
    Ok(EquivarianceReport { gamma, integrality_residual: residual, j_difference })
}

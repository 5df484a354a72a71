//! The mirror quintic: Frobenius periods at the maximally unipotent point,
//! the mirror map, the Yukawa coupling and the instanton numbers.

mod matrix;
mod tau;

pub use matrix::{
    displayed_connection, tau_matrix, tau_matrix_exact, verify_tau_curve, verify_tau_matrix, TauCurvePath, TauCurveReport,
    TauMatrixPath, TauMatrixReport, DISPLAYED_CONNECTION_TOLERANCE,
};
pub use tau::{
    tau1_series, tau_functions, tau_values, verify_transversality_odes, Tau1, TauFunctions, TauSeries, TransversalityOdeReport,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::series::QSeries;

/// `5^5`, the conifold point is `z = 1/3125`.
pub const CONIFOLD: i64 = 3125;

/// Truncated power series in `ε` modulo `ε^4`.
#[derive(Clone, Debug, PartialEq)]
struct Eps([Rational; 4]);

impl Eps {
    fn constant(c: Rational) -> Self {
        Eps([c, Rational::zero(), Rational::zero(), Rational::zero()])
    }

    /// `a + b ε`.
    fn linear(a: Rational, b: Rational) -> Self {
        Eps([a, b, Rational::zero(), Rational::zero()])
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out: [Rational; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 - i {
                out[i + j] += &self.0[i] * &o.0[j];
            }
        }
        Eps(out)
    }

    fn inverse(&self) -> Self {
        let inv0 = self.0[0].recip();
        let mut out: [Rational; 4] = Default::default();
        out[0] = inv0.clone();
        for k in 1..4 {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.0[j] * &out[k - j];
            }
            out[k] = -acc * &inv0;
        }
        Eps(out)
    }
}

/// Pure power-series parts `f_0, .., f_3` of the Frobenius solutions.
///
/// The solutions of the Picard–Fuchs equation are
/// `y_k = Σ_{j ≤ k} (log z)^j / j! · f_{k-j}(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusBasis {
    parts: [QSeries; 4],
}

impl FrobeniusBasis {
    pub fn truncation(&self) -> usize {
        self.parts[0].truncation()
    }

    /// `y0 = Σ (5n)!/(n!)^5 z^n`.
    pub fn y0(&self) -> &QSeries {
        &self.parts[0]
    }

    /// `f_k` for `k = 0..=3`.
    pub fn part(&self, k: usize) -> &QSeries {
        &self.parts[k]
    }

    /// Coefficients of `z^n` in the operator `θ⁴ - 5z(5θ+1)(5θ+2)(5θ+3)(5θ+4)`
    /// applied to `y_k`, as a polynomial in `log z` (index `j` multiplies
    /// `(log z)^j / j!`).
    pub fn picard_fuchs_residual(&self, k: usize) -> Vec<Vec<Rational>> {
        let n = self.truncation();
        let mut comps: Vec<Vec<Rational>> =
            (0..=k).map(|j| self.parts[k - j].coefficients().to_vec()).collect();
        comps.resize(4, vec![Rational::zero(); n + 1]);
        let theta = |v: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
            (0..4)
                .map(|j| {
                    (0..=n)
                        .map(|m| {
                            let mut c = &v[j][m] * BigInt::from(m);
                            if j + 1 < 4 {
                                c += &v[j + 1][m];
                            }
                            c
                        })
                        .collect()
                })
                .collect()
        };
        let mut lhs = comps.clone();
        for _ in 0..4 {
            lhs = theta(&lhs);
        }
        // 5z Π (5θ + j)
        let mut rhs = comps;
        for j in 1..=4 {
            let th = theta(&rhs);
            rhs = (0..4)
                .map(|l| (0..=n).map(|m| &th[l][m] * BigInt::from(5) + &rhs[l][m] * BigInt::from(j)).collect())
                .collect();
        }
        (0..4)
            .map(|l| {
                (0..=n)
                    .map(|m| {
                        let shifted = if m == 0 { Rational::zero() } else { &rhs[l][m - 1] * BigInt::from(5) };
                        &lhs[l][m] - shifted
                    })
                    .collect()
            })
            .collect()
    }
}

/// Frobenius solutions from `(n+ε)^4 a_n = 5 Π_{j=1}^4 (5(n-1+ε)+j) a_{n-1}`.
pub fn picard_fuchs_solve(n: usize) -> FrobeniusBasis {
    let mut a = Eps::constant(Rational::one());
    let mut parts: [Vec<Rational>; 4] = Default::default();
    for (r, p) in parts.iter_mut().enumerate() {
        p.push(a.0[r].clone());
    }
    for m in 1..=n {
        let mut num = Eps::constant(int(5));
        for j in 1..=4i64 {
            num = num.mul(&Eps::linear(int(5 * (m as i64 - 1) + j), int(5)));
        }
        let nm = Eps::linear(int(m as i64), Rational::one());
        let den = nm.mul(&nm).mul(&nm).mul(&nm);
        a = a.mul(&num).mul(&den.inverse());
        for (r, p) in parts.iter_mut().enumerate() {
            p.push(a.0[r].clone());
        }
    }
    FrobeniusBasis { parts: parts.map(|c| QSeries::new(0, c)) }
}

/// `q(z) = z exp(f1/f0)` and its inverse `z(q)`.
pub fn mirror_map(fb: &FrobeniusBasis) -> Result<(QSeries, QSeries)> {
    let n = fb.truncation();
    let ratio = fb.part(1) * &fb.y0().invert()?;
    let q_of_z = ratio.exp()?.shift_up().truncate(n);
    let z_of_q = q_of_z.revert()?;
    Ok((q_of_z, z_of_q))
}

/// `Y(q) = 5 / ((1 - 5^5 z) y0²) · ((q/z) dz/dq)³` in the mirror coordinate, through `q^n`.
pub fn yukawa(n: usize) -> Result<QSeries> {
    // one extra order is consumed by the division by z
    let fb = picard_fuchs_solve(n + 1);
    let (_, z_of_q) = mirror_map(&fb)?;
    let y0 = fb.y0();
    let mut one_minus: Vec<Rational> = vec![Rational::zero(); n + 2];
    one_minus[0] = Rational::one();
    one_minus[1] = int(-CONIFOLD);
    let denom = &QSeries::new(0, one_minus) * &(y0 * y0);
    let y_of_z = denom.invert()?.scale(&int(5));
    let y_of_q = y_of_z.compose(&z_of_q)?;
    let dz = z_of_q.theta_derivative().with_grade(0).shift_down()?;
    let z_over_q = z_of_q.shift_down()?;
    let factor = &dz * &z_over_q.invert()?;
    let cube = &(&factor * &factor) * &factor;
    Ok((&y_of_q * &cube).truncate(n))
}

/// Peels `Y = 5 + Σ_d n_d d³ q^d / (1 - q^d)` into `n_1, .., n_D`.
pub fn instanton_numbers(y: &QSeries, degree: usize) -> Result<Vec<BigInt>> {
    if degree > y.truncation() {
        return Err(Error::NonAdmissible(format!(
            "degree {degree} exceeds the truncation {} of the Yukawa series",
            y.truncation()
        )));
    }
    if y.grade() != 0 {
        return Err(Error::NonAdmissible("the Yukawa series has grade 0".into()));
    }
    let mut out: Vec<BigInt> = Vec::with_capacity(degree);
    for m in 1..=degree {
        let mut rest = y.coefficients()[m].clone();
        for d in 1..m {
            if m % d == 0 {
                rest -= Rational::from_integer(&out[d - 1] * BigInt::from(d).pow(3));
            }
        }
        let value = rest / Rational::from_integer(BigInt::from(m).pow(3));
        if !value.is_integer() {
            return Err(Error::NonIntegralInstanton { degree: m, value: value.to_string() });
        }
        out.push(value.to_integer());
    }
    Ok(out)
}

/// `Σ_{d | n} n_d d³` for `n = 1..=len`.
pub fn lambert_coefficients(instantons: &[BigInt]) -> Vec<BigInt> {
    let len = instantons.len();
    (1..=len)
        .map(|n| {
            (1..=n)
                .filter(|d| n % *d == 0)
                .map(|d| &instantons[d - 1] * BigInt::from(d).pow(3))
                .sum()
        })
        .collect()
}

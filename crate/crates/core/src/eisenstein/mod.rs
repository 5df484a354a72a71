//! Level-one Eisenstein series, the ring of quasi-modular polynomials in
//! `E2, E4, E6` with its Ramanujan derivation, and the `j` expansion.
//!
//! Normalization: `E_{2k} = 1 + b_k Σ σ_{2k-1}(n) q^n` with
//! `(b_1, b_2, b_3) = (-24, 240, -504)`, and the graded series
//! `g_k = a_k E_{2k}` with `a = ((2πi)/12, 12((2πi)/12)^2, 8((2πi)/12)^3)`.

mod parse;
mod poly;

pub use parse::{parse_poly, MAX_INPUT as MAX_POLY_INPUT, MAX_LITERAL_DIGITS};
pub use poly::{Generator, QmPoly};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};
use crate::series::QSeries;

/// `b_k` for `k = 1, 2, 3`.
pub const B: [i64; 3] = [-24, 240, -504];

/// `σ_k(n) = Σ_{d | n} d^k`.
///
/// # Panics
/// If `n == 0`.
pub fn divisor_sum(n: u64, k: u32) -> BigInt {
    assert!(n >= 1, "divisor_sum needs n >= 1");
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    total
}

/// `σ_k(1..=n)` by a divisor sieve; index 0 is unused and zero.
pub fn divisor_sums_upto(n: usize, k: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    for d in 1..=n {
        let dk = BigInt::from(d).pow(k);
        for m in (d..=n).step_by(d) {
            out[m] += &dk;
        }
    }
    out
}

fn check_index(k: u32) -> Result<usize> {
    match k {
        1..=3 => Ok(k as usize - 1),
        _ => Err(Error::Domain(format!("Eisenstein index k must be 1, 2 or 3, got {k}"))),
    }
}

/// Ungraded `E_{2k}` through `q^n`, for `k ∈ {1, 2, 3}`.
pub fn eisenstein_e(k: u32, n: usize) -> Result<QSeries> {
    let idx = check_index(k)?;
    let sigma = divisor_sums_upto(n, 2 * k - 1);
    let b = BigInt::from(B[idx]);
    let coeffs = (0..=n)
        .map(|i| if i == 0 { Rational::one() } else { Rational::from_integer(&b * &sigma[i]) })
        .collect();
    Ok(QSeries::new(0, coeffs))
}

/// Rational part of `a_k`; the full scalar is `a_k_rational · (2πi)^k`.
pub fn a_k_rational(k: u32) -> Result<Rational> {
    check_index(k)?;
    // 12^{k-1} · ... : a_1 = 1/12, a_2 = 12/144, a_3 = 8/1728
    Ok(match k {
        1 => rat(1, 12),
        2 => rat(12, 144),
        _ => rat(8, 1728),
    })
}

/// The graded series `g_k = a_k E_{2k}` (grade `k`).
pub fn eisenstein(k: u32, n: usize) -> Result<QSeries> {
    Ok(eisenstein_e(k, n)?.scale(&a_k_rational(k)?).with_grade(k as i32))
}

/// All six series at a common truncation.
#[derive(Clone, Debug)]
pub struct EisensteinBasis {
    pub e2: QSeries,
    pub e4: QSeries,
    pub e6: QSeries,
    pub g1: QSeries,
    pub g2: QSeries,
    pub g3: QSeries,
}

impl EisensteinBasis {
    pub fn new(n: usize) -> Self {
        let e = |k| eisenstein_e(k, n).expect("k in range");
        let g = |k| eisenstein(k, n).expect("k in range");
        EisensteinBasis { e2: e(1), e4: e(2), e6: e(3), g1: g(1), g2: g(2), g3: g(3) }
    }

    pub fn truncation(&self) -> usize {
        self.e2.truncation()
    }

    pub fn generator(&self, g: Generator) -> &QSeries {
        match g {
            Generator::E2 => &self.e2,
            Generator::E4 => &self.e4,
            Generator::E6 => &self.e6,
        }
    }
}

/// A Laurent series `q^valuation · series`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedSeries {
    pub valuation: i32,
    pub series: QSeries,
}

impl ShiftedSeries {
    /// Coefficient of `q^m` in the Laurent series.
    pub fn laurent_coeff(&self, m: i64) -> Option<&Rational> {
        let idx = m - self.valuation as i64;
        if idx < 0 {
            return None;
        }
        self.series.coeff(idx as usize)
    }
}

/// `j = 1728 E4^3 / (E4^3 - E6^2) = 1/q + 744 + 196884 q + ...`, returned
/// as `q · j` through `q^n` with valuation `-1`.
pub fn j_series(n: usize) -> ShiftedSeries {
    let e4 = eisenstein_e(2, n + 1).expect("k in range");
    let e6 = eisenstein_e(3, n + 1).expect("k in range");
    let e4_cubed = &(&e4 * &e4) * &e4;
    let disc = e4_cubed.sub(&(&e6 * &e6)).expect("same grade");
    // disc = 1728 q (1 - 24 q + ...)
    let disc_over_q = disc.shift_down().expect("zero constant term");
    let inv = disc_over_q.invert().expect("leading coefficient 1728");
    let series = (&e4_cubed.truncate(n) * &inv).scale(&int(1728));
    ShiftedSeries { valuation: -1, series }
}

/// Numeric values of `E2, E4, E6` at `tau`, plus the largest tail bound.
pub fn evaluate_e246(tau: Complex64, n: usize) -> Result<([Complex64; 3], f64)> {
    let mut out = [Complex64::zero(); 3];
    let mut tail: f64 = 0.0;
    for k in 1..=3u32 {
        let ev = eisenstein_e(k, n)?.evaluate(tau)?;
        out[k as usize - 1] = ev.value;
        tail = tail.max(ev.tail_bound);
    }
    Ok((out, tail))
}

/// Numeric `j(τ)` from the Eisenstein expansions.
pub fn j_numeric(tau: Complex64, n: usize) -> Result<Complex64> {
    let ([_, e4, e6], _) = evaluate_e246(tau, n)?;
    let c = e4 * e4 * e4;
    let d = c - e6 * e6;
    if d.norm() == 0.0 {
        return Err(Error::Domain("E4^3 - E6^2 vanished numerically".into()));
    }
    Ok(c * 1728.0 / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn brute_sigma(n: u64, k: u32) -> BigInt {
        (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(k)).sum()
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_sum(4, 1), BigInt::from(7));
        assert_eq!(divisor_sum(6, 3), BigInt::from(252));
        for k in 0..6 {
            assert_eq!(divisor_sum(1, k), BigInt::one());
        }
        let sieve = divisor_sums_upto(60, 5);
        for n in 1..=60u64 {
            assert_eq!(divisor_sum(n, 5), brute_sigma(n, 5));
            assert_eq!(sieve[n as usize], brute_sigma(n, 5));
        }
    }

    #[test]
    fn eisenstein_coefficients() {
        assert_eq!(eisenstein_e(1, 3).unwrap().coeff(1), Some(&int(-24)));
        assert_eq!(eisenstein_e(2, 3).unwrap().coeff(2), Some(&int(2160)));
        assert_eq!(eisenstein_e(3, 3).unwrap().coeff(1), Some(&int(-504)));
        let g1 = eisenstein(1, 3).unwrap();
        assert_eq!(g1.grade(), 1);
        assert_eq!(g1.coeff(0), Some(&rat(1, 12)));
        assert_eq!(eisenstein(2, 0).unwrap().coeff(0), Some(&rat(1, 12)));
        assert_eq!(eisenstein(3, 0).unwrap().coeff(0), Some(&rat(1, 216)));
        assert!(eisenstein(4, 3).is_err());
    }

    #[test]
    fn discriminant_leading_terms() {
        let b = EisensteinBasis::new(6);
        let e4c = &(&b.e4 * &b.e4) * &b.e4;
        let d = e4c.sub(&(&b.e6 * &b.e6)).unwrap();
        assert!(d.coeff(0).unwrap().is_zero());
        assert_eq!(d.coeff(1), Some(&int(1728)));
        // 1728 τ(2) with Ramanujan τ(2) = -24
        assert_eq!(d.coeff(2), Some(&int(-24 * 1728)));
    }

    #[test]
    fn j_expansion() {
        let j = j_series(4);
        assert_eq!(j.laurent_coeff(-1), Some(&int(1)));
        assert_eq!(j.laurent_coeff(0), Some(&int(744)));
        assert_eq!(j.laurent_coeff(1), Some(&int(196884)));
        assert_eq!(j.laurent_coeff(2), Some(&int(21493760)));
        assert_eq!(j.laurent_coeff(-2), None);
    }

    #[test]
    fn numeric_modularity() {
        let tau = Complex64::new(0.0, 2.0);
        let s = -tau.inv();
        let ([e2, e4, e6], _) = evaluate_e246(tau, 60).unwrap();
        let ([e2s, e4s, e6s], _) = evaluate_e246(s, 60).unwrap();
        assert!((e4s - tau.powi(4) * e4).norm() < 1e-8);
        assert!((e6s - tau.powi(6) * e6).norm() < 1e-8);
        let anomaly = 12.0 * tau / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        assert!((e2s - tau * tau * e2 - anomaly).norm() < 1e-8);
        // j(i) = 1728
        assert!((j_numeric(Complex64::new(0.0, 1.0), 40).unwrap() - 1728.0).norm() < 1e-6);
    }
}

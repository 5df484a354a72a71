use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{instanton_numbers, lambert_coefficients, yukawa};
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, rat, Rational};
use crate::series::QSeries;

/// A polynomial in `τ0` whose coefficients are graded q-series,
/// `Σ τ0^a (2πi)^e Σ_n c_{a,e,n} q^n`, all truncated at the same order.
#[derive(Clone, Debug)]
pub struct TauSeries {
    truncation: usize,
    terms: BTreeMap<(u32, i32), Vec<Rational>>,
}

impl PartialEq for TauSeries {
    fn eq(&self, other: &Self) -> bool {
        self.truncation == other.truncation && self.normalized().terms == other.normalized().terms
    }
}

impl TauSeries {
    pub fn zero(truncation: usize) -> Self {
        TauSeries { truncation, terms: BTreeMap::new() }
    }

    /// `c · τ0^power`.
    pub fn monomial(c: Rational, power: u32, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        s.add_term(power, 0, QSeries::constant(c, truncation, 0).coefficients());
        s
    }

    /// `τ0^power · series`.
    pub fn from_series(series: &QSeries, power: u32) -> Self {
        let mut s = Self::zero(series.truncation());
        s.add_term(power, series.grade(), series.coefficients());
        s
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn add_term(&mut self, power: u32, grade: i32, coeffs: &[Rational]) {
        let entry = self.terms.entry((power, grade)).or_insert_with(|| vec![Rational::zero(); self.truncation + 1]);
        for (e, c) in entry.iter_mut().zip(coeffs) {
            *e += c;
        }
    }

    fn normalized(&self) -> Self {
        let terms = self.terms.iter().filter(|(_, v)| v.iter().any(|c| !c.is_zero())).map(|(k, v)| (*k, v.clone())).collect();
        TauSeries { truncation: self.truncation, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.normalized().terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::DimensionMismatch { expected: self.truncation, found: other.truncation });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((a, e), v) in &other.terms {
            out.add_term(*a, *e, v);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (*k, v.iter().map(|x| x * c).collect())).collect();
        TauSeries { truncation: self.truncation, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.truncation);
        for ((a, e), v) in &self.terms {
            for ((b, f), w) in &other.terms {
                let prod = &QSeries::new(0, v.clone()) * &QSeries::new(0, w.clone());
                out.add_term(a + b, e + f, prod.coefficients());
            }
        }
        Ok(out)
    }

    /// `d/dτ0`, using `d q^n / dτ0 = 2πi n q^n`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.truncation);
        for ((a, e), v) in &self.terms {
            if *a > 0 {
                let scaled: Vec<Rational> = v.iter().map(|c| c * BigInt::from(*a)).collect();
                out.add_term(a - 1, *e, &scaled);
            }
            let theta = QSeries::new(*e, v.clone()).theta_derivative();
            out.add_term(*a, e + 1, theta.coefficients());
        }
        out
    }

    /// The antiderivative in `τ0` with zero constant of integration.
    ///
    /// Uses `∫ τ0^a q^n = τ0^a q^n / (2πi n) - a/(2πi n) ∫ τ0^{a-1} q^n` for `n ≥ 1`.
    pub fn integrate(&self) -> Self {
        let mut out = Self::zero(self.truncation);
        for ((a, e), v) in &self.terms {
            let mut constant = vec![Rational::zero(); self.truncation + 1];
            constant[0] = &v[0] / BigInt::from(a + 1);
            out.add_term(a + 1, *e, &constant);
            for (n, c) in v.iter().enumerate().skip(1) {
                if c.is_zero() {
                    continue;
                }
                // τ0^k with coefficient (-1)^{a-k} a!/k! / n^{a-k+1} at grade e - (a - k + 1)
                let mut coef = c / BigInt::from(n);
                let mut k = *a;
                let mut depth = 1;
                loop {
                    let mut single = vec![Rational::zero(); self.truncation + 1];
                    single[n] = coef.clone();
                    out.add_term(k, e - depth, &single);
                    if k == 0 {
                        break;
                    }
                    coef = -coef * BigInt::from(k) / BigInt::from(n);
                    k -= 1;
                    depth += 1;
                }
            }
        }
        out
    }

    /// `Σ τ0^a (2πi)^e Σ c_n e^{2πi τ0 n}`, with Neumaier summation.
    pub fn evaluate(&self, tau0: Complex64) -> Result<Complex64> {
        let mut sum = crate::numeric::NeumaierSum::default();
        for ((a, e), v) in &self.terms {
            let s = QSeries::new(*e, v.clone()).evaluate(tau0)?;
            sum.add(s.value * tau0.powu(*a));
        }
        Ok(sum.total())
    }

    /// Coefficient of `τ0^a (2πi)^e q^n`.
    pub fn coefficient(&self, power: u32, grade: i32, n: usize) -> Rational {
        self.terms.get(&(power, grade)).and_then(|v| v.get(n).cloned()).unwrap_or_else(Rational::zero)
    }

    /// Terms as `(power, grade, coefficients)`, skipping zero series.
    pub fn terms(&self) -> Vec<(u32, i32, Vec<Rational>)> {
        self.normalized().terms.into_iter().map(|((a, e), v)| (a, e, v)).collect()
    }
}

impl fmt::Display for TauSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(a, e, v)| {
                let tau = match a {
                    0 => String::new(),
                    1 => "τ0·".into(),
                    _ => format!("τ0^{a}·"),
                };
                let grade = if *e == 0 { String::new() } else { format!("(2πi)^{e}·") };
                format!("{tau}{grade}({})", QSeries::new(0, v.clone()))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `τ1 = -25/12 + (5/2) τ0 (τ0 + 1) + (2πi)^{-2} Σ (Σ_{d|n} n_d d³) q^n / n²`.
#[derive(Clone, Debug)]
pub struct Tau1 {
    pub instantons: Vec<BigInt>,
    /// The grade −2 q-part.
    pub q_part: QSeries,
    /// `(c0, c1, c2)` of `c0 + c1 τ0 + c2 τ0²`.
    pub polynomial: [Rational; 3],
}

impl Tau1 {
    pub fn as_tau_series(&self) -> TauSeries {
        let n = self.q_part.truncation();
        let mut s = TauSeries::from_series(&self.q_part, 0);
        for (a, c) in self.polynomial.iter().enumerate() {
            s = s.add(&TauSeries::monomial(c.clone(), a as u32, n)).expect("same truncation");
        }
        s
    }

    pub fn polynomial_string(&self) -> String {
        format!(
            "{} + {}*tau0 + {}*tau0^2",
            format_rational(&self.polynomial[0]),
            format_rational(&self.polynomial[1]),
            format_rational(&self.polynomial[2])
        )
    }
}

/// `τ1` through `q^n` from the instanton numbers.
pub fn tau1_series(instantons: &[BigInt], n: usize) -> Result<Tau1> {
    if instantons.len() < n {
        return Err(Error::NonAdmissible(format!("need {n} instanton numbers, got {}", instantons.len())));
    }
    let lam = lambert_coefficients(&instantons[..n]);
    let mut coeffs = vec![Rational::zero(); n + 1];
    for m in 1..=n {
        coeffs[m] = Rational::new(lam[m - 1].clone(), BigInt::from(m).pow(2));
    }
    Ok(Tau1 {
        instantons: instantons[..n].to_vec(),
        q_part: QSeries::new(-2, coeffs),
        polynomial: [rat(-25, 12), rat(5, 2), rat(5, 2)],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalityOdeReport {
    pub pass: bool,
    pub truncation: usize,
    /// `∂²τ1/∂τ0² = Y` term by term.
    pub yukawa_matches: bool,
    /// `∂τ2/∂τ0 = τ1 - τ0 ∂τ1/∂τ0` term by term.
    pub tau2_matches: bool,
    /// Constant and first coefficients of `∂²τ1/∂τ0²`.
    pub second_derivative_head: Vec<String>,
    pub tau3: String,
    pub tau2: String,
}

/// The series `τ1, τ2, τ3` along the period map, through `q^n`.
pub struct TauFunctions {
    pub tau1: TauSeries,
    pub tau2: TauSeries,
    pub tau3: TauSeries,
    pub yukawa: QSeries,
}

/// Builds `τ1` from the pipeline, `τ3 = ∂τ1`, and `τ2 = ∫(τ1 - τ0 τ3)`.
pub fn tau_functions(n: usize) -> Result<TauFunctions> {
    let y = yukawa(n)?;
    let inst = instanton_numbers(&y, n)?;
    let tau1 = tau1_series(&inst, n)?.as_tau_series();
    let tau3 = tau1.derivative();
    let tau0 = TauSeries::monomial(Rational::one(), 1, n);
    let tau2 = tau1.sub(&tau0.mul(&tau3)?)?.integrate();
    Ok(TauFunctions { tau1, tau2, tau3, yukawa: y })
}

/// Checks the transversality ODEs and the Yukawa identity exactly.
pub fn verify_transversality_odes(n: usize) -> Result<TransversalityOdeReport> {
    let f = tau_functions(n)?;
    let second = f.tau3.derivative();
    let yukawa_matches = second == TauSeries::from_series(&f.yukawa, 0);
    let tau0 = TauSeries::monomial(Rational::one(), 1, n);
    let rhs = f.tau1.sub(&tau0.mul(&f.tau3)?)?;
    let tau2_matches = f.tau2.derivative() == rhs;
    let head = (0..=n.min(3)).map(|m| format_rational(&second.coefficient(0, 0, m))).collect();
    Ok(TransversalityOdeReport {
        pass: yukawa_matches && tau2_matches,
        truncation: n,
        yukawa_matches,
        tau2_matches,
        second_derivative_head: head,
        tau3: f.tau3.to_string(),
        tau2: f.tau2.to_string(),
    })
}

/// Numeric `(τ1, τ2, τ3)` at `τ0`.
pub fn tau_values(f: &TauFunctions, tau0: Complex64) -> Result<[Complex64; 3]> {
    Ok([f.tau1.evaluate(tau0)?, f.tau2.evaluate(tau0)?, f.tau3.evaluate(tau0)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau1_examples() {
        let t = tau1_series(&[BigInt::from(2875), BigInt::from(609250)], 2).unwrap();
        assert_eq!(t.polynomial[0], rat(-25, 12));
        assert_eq!(t.q_part.grade(), -2);
        assert_eq!(t.q_part.coefficients()[1], int(2875));
        assert_eq!(t.q_part.coefficients()[2], rat(4876875, 4));
        let s = t.as_tau_series();
        assert_eq!(s.derivative().derivative().coefficient(0, 0, 0), int(5));
    }

    #[test]
    fn polynomial_part_alone_has_constant_yukawa() {
        let t = tau1_series(&vec![BigInt::zero(); 4], 4).unwrap().as_tau_series();
        let second = t.derivative().derivative();
        assert_eq!(second, TauSeries::monomial(int(5), 0, 4));
    }

    #[test]
    fn integration_inverts_derivative() {
        let n = 5;
        let q = QSeries::new(-1, vec![int(0), int(3), rat(1, 2), int(0), int(7), int(-2)]);
        let s = TauSeries::from_series(&q, 2)
            .add(&TauSeries::monomial(rat(3, 4), 1, n))
            .unwrap()
            .add(&TauSeries::from_series(&q.theta_derivative(), 0))
            .unwrap();
        assert_eq!(s.integrate().derivative(), s);
    }

    #[test]
    fn closed_form_of_tau2() {
        let n = 6;
        let f = tau_functions(n).unwrap();
        let lam: Vec<Rational> = std::iter::once(Rational::zero())
            .chain((1..=n).map(|m| f.yukawa.coefficients()[m].clone()))
            .collect();
        let s = |k: u32| {
            let c = lam.iter().enumerate().map(|(m, c)| if m == 0 { Rational::zero() } else { c / BigInt::from(m).pow(k) }).collect();
            QSeries::new(-(k as i32), c)
        };
        let expected = TauSeries::monomial(rat(-25, 12), 1, n)
            .add(&TauSeries::monomial(rat(-5, 6), 3, n))
            .unwrap()
            .add(&TauSeries::from_series(&s(3), 0).scale(&int(2)))
            .unwrap()
            .sub(&TauSeries::from_series(&s(2), 1))
            .unwrap();
        assert_eq!(f.tau2, expected);
        let tau3 = TauSeries::monomial(int(5), 1, n)
            .add(&TauSeries::monomial(rat(5, 2), 0, n))
            .unwrap()
            .add(&TauSeries::from_series(&s(1), 0))
            .unwrap();
        assert_eq!(f.tau3, tau3);
    }

    #[test]
    fn ode_report() {
        let r = verify_transversality_odes(10).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.second_derivative_head[..2], ["5".to_string(), "2875".to_string()]);
    }
}

//! Truncated power series in one variable `q` with exact rational
//! coefficients and a tracked integer power of `2πi`.
//!
//! A [`QSeries`] with grade `e` and coefficients `c_0..c_N` stands for
//! `(2πi)^e · Σ c_n q^n + O(q^{N+1})`. The transcendental factor is never
//! expanded in the formal layer; only [`QSeries::evaluate`] realizes it.
//! Binary operations return the smaller truncation of their operands.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

/// Complex double used as the numeric evaluation target.
pub type ComplexValue = Complex64;

/// Operand length above which multiplication switches to Karatsuba.
pub const DIVIDE_AND_CONQUER_THRESHOLD: usize = 512;

const KARATSUBA_BASE: usize = 32;

#[derive(Clone, Debug)]
pub struct QSeries {
    grade: i32,
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from `c_0..c_N`; the truncation is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(grade: i32, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        QSeries { grade, coeffs }
    }

    pub fn from_ints(grade: i32, coeffs: &[i64]) -> Self {
        Self::new(grade, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(truncation: usize, grade: i32) -> Self {
        QSeries { grade, coeffs: vec![Rational::zero(); truncation + 1] }
    }

    pub fn constant(value: Rational, truncation: usize, grade: i32) -> Self {
        let mut s = Self::zero(truncation, grade);
        s.coeffs[0] = value;
        s
    }

    pub fn one(truncation: usize) -> Self {
        Self::constant(Rational::one(), truncation, 0)
    }

    /// The series `q` (grade 0).
    pub fn q(truncation: usize) -> Self {
        let mut s = Self::zero(truncation, 0);
        if truncation >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn grade(&self) -> i32 {
        self.grade
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^n`, or `None` beyond the truncation.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Same coefficients, different power of `2πi`.
    pub fn with_grade(mut self, grade: i32) -> Self {
        self.grade = grade;
        self
    }

    /// Drops coefficients above `q^n` (no-op if already coarser).
    pub fn truncate(mut self, n: usize) -> Self {
        self.coeffs.truncate(n + 1);
        self
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { grade: self.grade, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Sum; grades must agree unless one side is zero.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let grade = self.aligned_grade(other)?;
        let n = self.truncation().min(other.truncation());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(QSeries { grade, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&-other)
    }

    fn aligned_grade(&self, other: &Self) -> Result<i32> {
        if self.grade == other.grade || other.is_zero() {
            Ok(self.grade)
        } else if self.is_zero() {
            Ok(other.grade)
        } else {
            Err(Error::MixedGrade(self.grade, other.grade))
        }
    }

    /// `(2πi) q d/dq`: coefficients `n c_n`, grade raised by one.
    pub fn theta_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * BigInt::from(n))
            .collect();
        QSeries { grade: self.grade + 1, coeffs }
    }

    /// Multiplication by `q`; the result is known one order further.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries { grade: self.grade, coeffs }
    }

    /// Division by `q`; requires zero constant term and truncation ≥ 1.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonAdmissible("division by q needs a zero constant term".into()));
        }
        if self.truncation() == 0 {
            return Err(Error::NonAdmissible("division by q of a series known only mod q".into()));
        }
        Ok(QSeries { grade: self.grade, coeffs: self.coeffs[1..].to_vec() })
    }

    /// Multiplicative inverse; needs `c_0 ≠ 0`. The grade is negated.
    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NonUnit("constant term is zero".into()));
        }
        let inv0 = a0.recip();
        let n = self.truncation();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(QSeries { grade: -self.grade, coeffs: out })
    }

    /// Formal exponential; needs grade 0 and `c_0 = 0`.
    pub fn exp(&self) -> Result<Self> {
        if self.grade != 0 {
            return Err(Error::NonAdmissible(format!("exp of a grade-{} series", self.grade)));
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonAdmissible("exp needs a zero constant term".into()));
        }
        let n = self.truncation();
        let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
        b.push(Rational::one());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &b[k - j] * BigInt::from(j);
                }
            }
            b.push(acc / BigInt::from(k));
        }
        Ok(QSeries { grade: 0, coeffs: b })
    }

    /// Formal logarithm; needs grade 0 and `c_0 = 1`.
    pub fn log(&self) -> Result<Self> {
        if self.grade != 0 {
            return Err(Error::NonAdmissible(format!("log of a grade-{} series", self.grade)));
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::NonAdmissible("log needs constant term 1".into()));
        }
        let n = self.truncation();
        let mut l: Vec<Rational> = Vec::with_capacity(n + 1);
        l.push(Rational::zero());
        for k in 1..=n {
            // from a' = a l': k l_k = k a_k - Σ_{j<k} j l_j a_{k-j}
            let mut acc = &self.coeffs[k] * BigInt::from(k);
            for j in 1..k {
                if !self.coeffs[k - j].is_zero() {
                    acc -= &l[j] * &self.coeffs[k - j] * BigInt::from(j);
                }
            }
            l.push(acc / BigInt::from(k));
        }
        Ok(QSeries { grade: 0, coeffs: l })
    }

    /// Composition `self(inner(q))`; `inner` must have grade 0 and `c_0 = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.grade != 0 || !inner.coeffs[0].is_zero() {
            return Err(Error::NonAdmissible(
                "inner series of a composition needs grade 0 and zero constant term".into(),
            ));
        }
        let n = self.truncation().min(inner.truncation());
        let inner = inner.clone().truncate(n);
        let mut acc = QSeries::constant(self.coeffs[n].clone(), n, 0);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc.with_grade(self.grade))
    }

    /// Compositional inverse: the series `b` with `self(b(q)) = q`.
    /// Needs grade 0, `c_0 = 0` and `c_1 ≠ 0`.
    pub fn revert(&self) -> Result<Self> {
        if self.grade != 0 {
            return Err(Error::NonAdmissible(format!("reversion of a grade-{} series", self.grade)));
        }
        let n = self.truncation();
        if n == 0 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::NonAdmissible("reversion needs c_0 = 0 and c_1 ≠ 0".into()));
        }
        // Lagrange inversion: [q^k] b = (1/k) [w^{k-1}] (w / a(w))^k.
        let phi = self.shift_down()?.invert()?;
        let mut out = vec![Rational::zero(); n + 1];
        let mut power = phi.clone();
        for k in 1..=n {
            if k > 1 {
                power = &power * &phi;
            }
            out[k] = &power.coeffs[k - 1] / BigInt::from(k);
        }
        Ok(QSeries { grade: 0, coeffs: out })
    }

    /// Numerically evaluates at `q = e^{2πiτ}`, including the `(2πi)^e` factor.
    pub fn evaluate(&self, tau: ComplexValue) -> Result<Evaluation> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::Domain(format!("evaluation needs Im(tau) > 0, got {tau}")));
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let mut sum = NeumaierSum::default();
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let qn = (two_pi_i * tau * n as f64).exp();
            sum.add(qn * to_f64(c));
        }
        let factor = two_pi_i.powi(self.grade);
        let value = sum.total() * factor;
        let abs_q = (-2.0 * std::f64::consts::PI * tau.im).exp();
        let n = self.truncation();
        let tail_bound = to_f64(&self.coeffs[n].abs()) * abs_q.powi(n as i32 + 1) / (1.0 - abs_q)
            * factor.norm();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::Domain(format!("evaluation at {tau} overflowed")));
        }
        Ok(Evaluation { value, tail_bound })
    }

    pub fn to_json(&self) -> QSeriesJson {
        QSeriesJson {
            variable: "q".into(),
            two_pi_i_power: self.grade,
            truncation: self.truncation(),
            coefficients: self.coeffs.iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(j: &QSeriesJson) -> Result<Self> {
        if j.variable != "q" {
            return Err(Error::Parse(format!("unsupported variable {:?}", j.variable)));
        }
        if j.coefficients.len() != j.truncation.saturating_add(1) {
            return Err(Error::Parse(format!(
                "truncation {} needs {} coefficients, found {}",
                j.truncation,
                j.truncation.saturating_add(1),
                j.coefficients.len()
            )));
        }
        let coeffs = j.coefficients.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(QSeries { grade: j.two_pi_i_power, coeffs })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let j: QSeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.grade == other.grade && self.coeffs == other.coeffs
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { grade: self.grade, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let n = self.truncation().min(rhs.truncation());
        let coeffs = multiply_truncated(&self.coeffs[..=n], &rhs.coeffs[..=n], DIVIDE_AND_CONQUER_THRESHOLD);
        QSeries { grade: self.grade + rhs.grade, coeffs }
    }
}

impl Mul for QSeries {
    type Output = QSeries;
    fn mul(self, rhs: QSeries) -> QSeries {
        &self * &rhs
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.grade != 0 {
            write!(f, "(2πi)^{} · (", self.grade)?;
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match n {
                0 => write!(f, "{}", format_rational(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", format_rational(&a))?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation() + 1)?;
        if self.grade != 0 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Result of [`QSeries::evaluate`].
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: ComplexValue,
    /// Crude tail estimate `|c_N| |q|^{N+1} / (1 - |q|)`, scaled by `|2π|^e`.
    pub tail_bound: f64,
}

/// Wire form: `{"variable":"q","two_pi_i_power":e,"truncation":N,"coefficients":["n/d",...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QSeriesJson {
    pub variable: String,
    pub two_pi_i_power: i32,
    pub truncation: usize,
    pub coefficients: Vec<String>,
}

/// Truncated Cauchy product of two equal-length coefficient slices.
///
/// Both operands are brought to a common denominator so the convolution runs
/// over integers; above `dc_threshold` the integer kernel is Karatsuba.
pub fn multiply_truncated(a: &[Rational], b: &[Rational], dc_threshold: usize) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    let len = a.len();
    let (an, ad) = integer_form(a);
    let (bn, bd) = integer_form(b);
    let prod = if len > dc_threshold {
        let mut p = karatsuba(&an, &bn);
        p.truncate(len);
        p
    } else {
        schoolbook_truncated(&an, &bn, len)
    };
    let denom = ad * bd;
    prod.into_iter().map(|c| Rational::new(c, denom.clone())).collect()
}

fn integer_form(a: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let lcm = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = a.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    (nums, lcm)
}

fn schoolbook_truncated(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn schoolbook_full(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Full (untruncated) product of integer polynomials by Karatsuba.
pub fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len().min(b.len()) <= KARATSUBA_BASE {
        return schoolbook_full(a, b);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sa = add_polys(a0, a1);
    let sb = add_polys(b0, b1);
    let mut z1 = karatsuba(&sa, &sb);
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + half < out.len() {
            out[i + half] += c;
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * half] += c;
    }
    out
}

fn add_polys(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

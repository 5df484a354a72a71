use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::EisensteinBasis;
use crate::rational::{format_rational, rat, Rational};
use crate::series::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    E2,
    E4,
    E6,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::E2, Generator::E4, Generator::E6];

    pub fn weight(self) -> u32 {
        match self {
            Generator::E2 => 2,
            Generator::E4 => 4,
            Generator::E6 => 6,
        }
    }

    fn index(self) -> usize {
        match self {
            Generator::E2 => 0,
            Generator::E4 => 1,
            Generator::E6 => 2,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.weight())
    }
}

/// Exponent vector `(a, b, c)` of the monomial `E2^a E4^b E6^c`.
pub type Monomial = [u32; 3];

/// Polynomial in `E2, E4, E6` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QmPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl QmPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term([0, 0, 0], c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn generator(g: Generator) -> Self {
        let mut m = [0; 3];
        m[g.index()] = 1;
        let mut p = Self::zero();
        p.add_term(m, Rational::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]];
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Total degree of the largest monomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    /// Weight if every monomial has the same weight (zero is homogeneous of weight 0).
    pub fn weight(&self) -> Option<u32> {
        let mut weights = self.terms.keys().map(monomial_weight);
        let first = weights.next().unwrap_or(0);
        weights.all(|w| w == first).then_some(first)
    }

    /// Largest power of `E2`.
    pub fn depth(&self) -> u32 {
        self.terms.keys().map(|m| m[0]).max().unwrap_or(0)
    }

    /// Image under the Ramanujan rules of `D = q d/dq`:
    /// `D E2 = (E2^2 - E4)/12`, `D E4 = (E2 E4 - E6)/3`, `D E6 = (E2 E6 - E4^2)/2`.
    pub fn ramanujan_derive(&self) -> Self {
        let images = Generator::ALL.map(ramanujan_image);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for g in Generator::ALL {
                let i = g.index();
                if m[i] == 0 {
                    continue;
                }
                let mut rest = *m;
                rest[i] -= 1;
                let mut mono = Self::zero();
                mono.add_term(rest, c * Rational::from_integer(m[i].into()));
                out = out.add(&mono.mul(&images[i]));
            }
        }
        out
    }

    /// Substitutes the q-expansions of the generators.
    pub fn expand(&self, basis: &EisensteinBasis) -> QSeries {
        let n = basis.truncation();
        let mut powers: [Vec<QSeries>; 3] = Default::default();
        for g in Generator::ALL {
            let i = g.index();
            let top = self.terms.keys().map(|m| m[i]).max().unwrap_or(0);
            let mut p = vec![QSeries::one(n)];
            for k in 1..=top as usize {
                let next = &p[k - 1] * basis.generator(g);
                p.push(next);
            }
            powers[i] = p;
        }
        let mut acc = QSeries::zero(n, 0);
        for (m, c) in &self.terms {
            let t = &(&powers[0][m[0] as usize] * &powers[1][m[1] as usize]) * &powers[2][m[2] as usize];
            acc = acc.add(&t.scale(c)).expect("grade 0");
        }
        acc
    }
}

fn monomial_weight(m: &Monomial) -> u32 {
    2 * m[0] + 4 * m[1] + 6 * m[2]
}

fn ramanujan_image(g: Generator) -> QmPoly {
    use Generator::*;
    let e = QmPoly::generator;
    match g {
        E2 => e(E2).mul(&e(E2)).sub(&e(E4)).scale(&rat(1, 12)),
        E4 => e(E2).mul(&e(E4)).sub(&e(E6)).scale(&rat(1, 3)),
        E6 => e(E2).mul(&e(E6)).sub(&e(E4).mul(&e(E4))).scale(&rat(1, 2)),
    }
}

impl fmt::Display for QmPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest weight first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| monomial_weight(b.0).cmp(&monomial_weight(a.0)).then(b.0.cmp(a.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let a = c.abs();
            let factors: Vec<String> = Generator::ALL
                .iter()
                .filter(|g| m[g.index()] > 0)
                .map(|g| match m[g.index()] {
                    1 => g.to_string(),
                    k => format!("{g}^{k}"),
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

//! Named period paths for the connection and ODE checks, and the complex
//! list syntax used to address points on them.

use num_complex::Complex64;

use crate::elliptic::{periods, EllipticParameters};
use crate::error::{Error, Result};
use crate::hodge::{elliptic_point, HodgeFrame, PeriodPath};
use crate::mirror::{TauCurvePath, TauMatrixPath};
use crate::numeric::CMatrix;
use crate::siegel::SiegelBlocks;

/// Truncation used by the `tau-curve` path.
pub const TAU_CURVE_TERMS: usize = 10;

/// Names accepted by [`builtin_path`].
pub const BUILTIN_PATHS: [&str; 5] = ["elliptic", "weierstrass", "tau", "tau-curve", "siegel2"];

/// `τ ↦ [[τ, -1], [1, 0]]`.
pub struct EllipticPath {
    frame: HodgeFrame,
}

impl PeriodPath for EllipticPath {
    fn frame(&self) -> &HodgeFrame {
        &self.frame
    }

    fn parameters(&self) -> usize {
        1
    }

    fn period(&self, t: &[Complex64]) -> Result<CMatrix> {
        match t {
            [tau] if tau.im > 0.0 => Ok(elliptic_point(*tau)),
            [tau] => Err(Error::Domain(format!("Im τ must be positive, got {tau}"))),
            _ => Err(Error::DimensionMismatch { expected: 1, found: t.len() }),
        }
    }
}

/// `(t1, t2, t3) ↦` normalized periods of `y² = 4(x - t1)³ - t2 (x - t1) - t3`.
pub struct WeierstrassPath {
    frame: HodgeFrame,
}

impl PeriodPath for WeierstrassPath {
    fn frame(&self) -> &HodgeFrame {
        &self.frame
    }

    fn parameters(&self) -> usize {
        3
    }

    fn period(&self, t: &[Complex64]) -> Result<CMatrix> {
        match t {
            [t1, t2, t3] => Ok(periods(&EllipticParameters::new(*t1, *t2, *t3))?.matrix().clone()),
            _ => Err(Error::DimensionMismatch { expected: 3, found: t.len() }),
        }
    }
}

/// Genus two: `(a, b, c) ↦ [[X, -I], [I, 0]]` with `X = i·I + [[a, b], [b, c]]`.
pub struct SiegelPath {
    frame: HodgeFrame,
}

impl PeriodPath for SiegelPath {
    fn frame(&self) -> &HodgeFrame {
        &self.frame
    }

    fn parameters(&self) -> usize {
        3
    }

    fn period(&self, t: &[Complex64]) -> Result<CMatrix> {
        match t {
            [a, b, c] => {
                let i = Complex64::i();
                let x = CMatrix::from_row_slice(2, 2, &[i + a, *b, *b, i + c]);
                Ok(SiegelBlocks::standard(&x).to_matrix())
            }
            _ => Err(Error::DimensionMismatch { expected: 3, found: t.len() }),
        }
    }
}

/// Looks up a path by name; a leading `builtin:` is ignored.
pub fn builtin_path(name: &str) -> Result<Box<dyn PeriodPath>> {
    let name = name.strip_prefix("builtin:").unwrap_or(name);
    Ok(match name {
        "elliptic" => Box::new(EllipticPath { frame: HodgeFrame::elliptic() }),
        "weierstrass" => Box::new(WeierstrassPath { frame: HodgeFrame::elliptic() }),
        "tau" => Box::new(TauMatrixPath::new()),
        "tau-curve" => Box::new(TauCurvePath::new(TAU_CURVE_TERMS)?),
        "siegel2" => Box::new(SiegelPath { frame: HodgeFrame::weight_one(2) }),
        _ => {
            return Err(Error::Parse(format!("unknown path {name:?}; expected one of {}", BUILTIN_PATHS.join(", "))));
        }
    })
}

fn parse_float(s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::Parse(format!("invalid number {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("non-finite number {s:?}")))
    }
}

/// Parses one complex literal: `2`, `-1.5e-3`, `i`, `-2.5i`, `0.1+2i`, `3-i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_float(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_float(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_float(other)?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated [`parse_complex`] literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty complex list".into()));
    }
    s.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::{connection_matrix, f_ode_residual, g_ode_residual, ConnectionOptions};

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), c(0.0, -2.5));
        assert_eq!(parse_complex("0.1+2i").unwrap(), c(0.1, 2.0));
        assert_eq!(parse_complex("3-i").unwrap(), c(3.0, -1.0));
        assert_eq!(parse_complex("1e-3+1e+2i").unwrap(), c(1e-3, 100.0));
        assert_eq!(parse_complex_list("1, 2i").unwrap(), vec![c(1.0, 0.0), c(0.0, 2.0)]);
        for bad in ["", "x", "1+", "ii", "nan", "inf", "1,,2"] {
            assert!(parse_complex_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn every_builtin_resolves() {
        for name in BUILTIN_PATHS {
            let p = builtin_path(&format!("builtin:{name}")).unwrap();
            let t = vec![Complex64::new(0.1, 1.5 + p.parameters() as f64); p.parameters()];
            assert!(p.period(&t).is_ok(), "{name}");
        }
        assert!(builtin_path("nope").is_err());
    }

    #[test]
    fn odes_on_builtins() {
        let opts = ConnectionOptions::default();
        let cases: [(&str, Vec<Complex64>); 4] = [
            ("elliptic", vec![Complex64::new(0.2, 1.1)]),
            ("weierstrass", vec![Complex64::new(0.3, 0.1), Complex64::new(2.0, -1.0), Complex64::new(1.0, 0.5)]),
            ("tau-curve", vec![Complex64::new(0.1, 2.0)]),
            ("siegel2", vec![Complex64::new(0.1, 0.2), Complex64::new(0.05, 0.0), Complex64::new(-0.3, 0.4)]),
        ];
        for (name, t) in cases {
            let p = builtin_path(name).unwrap();
            let v = vec![Complex64::new(0.7, -0.2); t.len()];
            assert!(connection_matrix(p.as_ref(), &t, &v, opts).is_ok());
            assert!(f_ode_residual(p.as_ref(), &t, &v, opts).unwrap() < 1e-5, "{name}");
            assert!(g_ode_residual(p.as_ref(), &t, &v, opts).unwrap() < 1e-5, "{name}");
        }
    }
}

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HodgeFrame;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::numeric::CMatrix;

/// Largest accepted matrix side for JSON input.
pub const MAX_JSON_DIM: usize = 256;

/// A matrix entry: either a real number or an `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexEntry {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexEntry::Real(x) => Complex64::new(x, 0.0),
            ComplexEntry::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// `{"rows": r, "cols": c, "entries": [[re, im], ...]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ComplexEntry>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| ComplexEntry::Pair([m[(r, c)].re, m[(r, c)].im]))
            .collect();
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.rows > MAX_JSON_DIM || self.cols > MAX_JSON_DIM {
            return Err(Error::Parse(format!("matrix larger than {MAX_JSON_DIM}x{MAX_JSON_DIM}")));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "expected {} entries for a {}x{} matrix, found {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        let m = CMatrix::from_row_iterator(self.rows, self.cols, self.entries.iter().map(|e| e.value()));
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        Ok(m)
    }

    pub fn parse(text: &str) -> Result<CMatrix> {
        let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        j.to_matrix()
    }

    /// Like [`MatrixJson::parse`], but every entry must be a real integer of magnitude below `2^53`.
    pub fn parse_integer(text: &str) -> Result<IntMatrix> {
        let m = Self::parse(text)?;
        let mut out = IntMatrix::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                if z.im != 0.0 || z.re.fract() != 0.0 || z.re.abs() >= 9.007_199_254_740_992e15 {
                    return Err(Error::Parse(format!("entry ({r}, {c}) = {z} is not an integer")));
                }
                out.set(r, c, BigInt::from(z.re as i64));
            }
        }
        Ok(out)
    }

    pub fn to_json(m: &CMatrix) -> String {
        serde_json::to_string(&Self::from_matrix(m)).expect("matrix serializes")
    }
}

/// `{"m": .., "hodge_numbers": [..], "psi0": [[..]], "phi0": [[..]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameJson {
    pub m: usize,
    pub hodge_numbers: Vec<usize>,
    pub psi0: Vec<Vec<i64>>,
    pub phi0: Vec<Vec<ComplexEntry>>,
}

impl FrameJson {
    pub fn from_frame(f: &HodgeFrame) -> Self {
        let h = f.dim();
        let psi0 = (0..h)
            .map(|r| {
                f.psi0()
                    .row(r)
                    .iter()
                    .map(|x| i64::try_from(x.clone()).expect("frame entries fit in i64"))
                    .collect()
            })
            .collect();
        let phi0 = (0..h)
            .map(|r| {
                (0..h)
                    .map(|c| {
                        let z = f.phi0()[(r, c)];
                        if z.im == 0.0 {
                            ComplexEntry::Real(z.re)
                        } else {
                            ComplexEntry::Pair([z.re, z.im])
                        }
                    })
                    .collect()
            })
            .collect();
        FrameJson { m: f.weight(), hodge_numbers: f.hodge_numbers().to_vec(), psi0, phi0 }
    }

    pub fn to_frame(&self) -> Result<HodgeFrame> {
        let h = self.psi0.len();
        if h > MAX_JSON_DIM {
            return Err(Error::Parse(format!("frame larger than {MAX_JSON_DIM}")));
        }
        if self.m > MAX_JSON_DIM || self.hodge_numbers.iter().any(|&n| n > MAX_JSON_DIM) {
            return Err(Error::Parse("frame weight or Hodge number too large".into()));
        }
        if self.psi0.iter().any(|r| r.len() != h) {
            return Err(Error::Parse("psi0 must be square".into()));
        }
        if self.phi0.len() != h || self.phi0.iter().any(|r| r.len() != h) {
            return Err(Error::Parse("phi0 must be square of the same size as psi0".into()));
        }
        let psi0 = IntMatrix::from_fn(h, h, |r, c| BigInt::from(self.psi0[r][c]));
        let phi0 = CMatrix::from_fn(h, h, |r, c| self.phi0[r][c].value());
        if phi0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parse("non-finite phi0 entry".into()));
        }
        HodgeFrame::new(self.m, self.hodge_numbers.clone(), psi0, phi0)
    }

    pub fn parse(text: &str) -> Result<HodgeFrame> {
        let j: FrameJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        j.to_frame()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matrix_round_trip() {
        let m = CMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, 1.0), (-1.0).into(), 1.0.into(), 0.0.into()]);
        let text = MatrixJson::to_json(&m);
        assert_eq!(MatrixJson::parse(&text).unwrap(), m);
        let mixed = MatrixJson::parse(r#"{"rows":1,"cols":2,"entries":[1.5,[0,2]]}"#).unwrap();
        assert_eq!(mixed[(0, 1)], Complex64::new(0.0, 2.0));
        assert!(MatrixJson::parse(r#"{"rows":2,"cols":2,"entries":[1]}"#).is_err());
        assert!(MatrixJson::parse(r#"{"rows":1,"cols":1,"entries":[1],"x":0}"#).is_err());
    }

    #[test]
    fn frame_round_trip() {
        for f in [HodgeFrame::elliptic(), HodgeFrame::mirror_quintic()] {
            let j = FrameJson::from_frame(&f);
            let text = serde_json::to_string(&j).unwrap();
            let back = FrameJson::parse(&text).unwrap();
            assert_eq!(back.psi0(), f.psi0());
            assert_eq!(back.phi0(), f.phi0());
            assert_eq!(back.hodge_numbers(), f.hodge_numbers());
        }
        let bad = r#"{"m":1,"hodge_numbers":[1,1],"psi0":[[1,0],[0,1]],"phi0":[[0,-1],[1,0]]}"#;
        assert!(matches!(FrameJson::parse(bad), Err(Error::InvalidFrame(_))));
    }

    proptest! {
        #[test]
        fn matrix_parser_never_panics(s in ".{0,200}") {
            let _ = MatrixJson::parse(&s);
            let _ = FrameJson::parse(&s);
        }
    }
}

//! Small numeric helpers shared by the floating-point modules.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Neumaier (improved Kahan) compensated sum over complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier_step((sum, comp): (f64, f64), x: f64) -> (f64, f64) {
    let t = sum + x;
    let comp = if sum.abs() >= x.abs() {
        comp + ((sum - t) + x)
    } else {
        comp + ((x - t) + sum)
    };
    (t, comp)
}

impl NeumaierSum {
    pub fn add(&mut self, z: Complex64) {
        self.re = neumaier_step(self.re, z.re);
        self.im = neumaier_step(self.im, z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Finite-difference step `1e-5 · (1 + scale)`.
pub fn default_step(scale: f64) -> f64 {
    1e-5 * (1.0 + scale)
}

/// Central difference with one Richardson level:
/// `(4 D(h/2) - D(h)) / 3` where `D(h) = (f(h) - f(-h)) / 2h`.
pub fn richardson_derivative<F>(f: F, h: f64) -> Result<CMatrix, crate::Error>
where
    F: Fn(f64) -> Result<CMatrix, crate::Error>,
{
    let central = |h: f64| -> Result<CMatrix, crate::Error> {
        Ok((f(h)? - f(-h)?) / Complex64::new(2.0 * h, 0.0))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((fine * Complex64::new(4.0, 0.0) - coarse) / Complex64::new(3.0, 0.0))
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)))
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

/// Inverse with a reciprocal-condition gate on the singular values.
pub fn checked_inverse(m: &CMatrix, rcond_min: f64) -> Option<CMatrix> {
    if rcond(m) < rcond_min {
        return None;
    }
    m.clone().try_inverse()
}

/// Ratio of smallest to largest singular value (0 for the zero matrix).
pub fn rcond(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}

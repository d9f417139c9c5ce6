//! Dense univariate polynomials over the complex numbers.
//!
//! Coefficients are stored ascending (`coeffs[k]` multiplies `z^k`). The zero
//! polynomial is canonically the empty coefficient vector; every constructor
//! trims trailing coefficients whose modulus is below `TRIM_REL` times the
//! largest coefficient modulus, so `degree()` is meaningful after floating
//! point arithmetic.
//!
//! JSON form: `{"coeffs": [[re, im], ...]}`.

mod big;
pub mod roots;

pub use roots::{poly_roots, poly_roots_with, Precision, RootCluster, RootOptions};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative threshold for trailing-coefficient trimming.
pub const TRIM_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Build a polynomial from ascending coefficients, trimming trailing
    /// near-zeros (relative to the largest coefficient modulus).
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = ComplexPoly { coeffs };
        p.trim();
        p
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// Real coefficients, ascending. Convenience for tests and examples.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Monic product of `(z - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = ComplexPoly {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        };
        for &r in roots {
            // multiply by (z - r) in place
            p.coeffs.push(Complex64::new(0.0, 0.0));
            for k in (1..p.coeffs.len()).rev() {
                let lower = p.coeffs[k - 1];
                p.coeffs[k] = lower - r * p.coeffs[k];
            }
            p.coeffs[0] = -r * p.coeffs[0];
        }
        // monic by construction; no trimming so the degree is preserved
        p
    }

    fn trim(&mut self) {
        let max = self.max_coeff_modulus();
        if max == 0.0 || !max.is_finite() {
            if !max.is_finite() {
                // keep non-finite polys intact; validation happens at use sites
                return;
            }
            self.coeffs.clear();
            return;
        }
        let floor = TRIM_REL * max;
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= floor {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Degree after trimming; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation of the polynomial and its derivative in one pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() <= 1 {
            return ComplexPoly::zero();
        }
        ComplexPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    pub fn add(&self, other: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(k) + other.coeff(k);
        }
        ComplexPoly::new(out)
    }

    pub fn sub(&self, other: &ComplexPoly) -> ComplexPoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Convolution product.
    pub fn mul(&self, other: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || other.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }

    /// Composition `self(q(z))` by Horner's scheme on polynomials.
    pub fn compose(&self, q: &ComplexPoly) -> ComplexPoly {
        let mut acc = ComplexPoly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&ComplexPoly::constant(c));
        }
        acc
    }

    /// Coefficient reversal to formal degree `d`: returns `z^d * p(1/z)`
    /// padded/truncated to degree `d`. Used for the `w = 1/z` chart.
    pub(crate) fn reversed(&self, d: usize) -> ComplexPoly {
        let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
        for k in 0..=d {
            out[k] = self.coeff(d - k);
        }
        ComplexPoly::new(out)
    }

    /// Count the order of vanishing at 0: leading ascending coefficients
    /// with modulus at most `TRIM_REL` times the largest coefficient.
    pub fn vanishing_order_at_zero(&self) -> usize {
        let max = self.max_coeff_modulus();
        if max == 0.0 {
            return 0;
        }
        let floor = TRIM_REL * max;
        self.coeffs.iter().take_while(|c| c.norm() <= floor).count()
    }
}

/// Resultant of `p` and `q` as the determinant of the Sylvester matrix with
/// `p`'s coefficient rows first, by complex LU with partial pivoting.
///
/// Conventions: `Res(p, q) = lc(p)^deg(q) * prod q(alpha_i)` over the roots
/// `alpha_i` of `p`. Returns 0 if either polynomial is zero; 1 if both are
/// (nonzero) constants.
pub fn poly_resultant(p: &ComplexPoly, q: &ComplexPoly) -> Complex64 {
    let (m, n) = match (p.degree(), q.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return Complex64::new(0.0, 0.0),
    };
    let size = m + n;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Row i < n holds p's coefficients (descending) shifted right by i;
    // row n + j holds q's shifted by j.
    let mut mat = vec![Complex64::new(0.0, 0.0); size * size];
    for i in 0..n {
        for k in 0..=m {
            mat[i * size + i + k] = p.coeff(m - k);
        }
    }
    for j in 0..m {
        for k in 0..=n {
            mat[(n + j) * size + j + k] = q.coeff(n - k);
        }
    }
    lu_determinant(&mut mat, size)
}

/// Scale-invariant resultant magnitude: `|Res(p, q)|` divided by
/// `max(1, |p|_inf)^deg(q) * max(1, |q|_inf)^deg(p)`. Suitable for "is the
/// resultant essentially zero" thresholds independent of coefficient scale.
pub fn resultant_scaled_magnitude(p: &ComplexPoly, q: &ComplexPoly) -> f64 {
    let (m, n) = match (p.degree(), q.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return 0.0,
    };
    let res = poly_resultant(p, q).norm();
    let sp = p.max_coeff_modulus().max(1.0);
    let sq = q.max_coeff_modulus().max(1.0);
    res / (sp.powi(n as i32) * sq.powi(m as i32))
}

fn lu_determinant(mat: &mut [Complex64], n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        let mut best = mat[col * n + col].norm();
        for row in (col + 1)..n {
            let v = mat[row * n + col].norm();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                mat.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let diag = mat[col * n + col];
        det *= diag;
        for row in (col + 1)..n {
            let factor = mat[row * n + col] / diag;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let sub = factor * mat[col * n + k];
                mat[row * n + k] -= sub;
            }
        }
    }
    det
}

impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            coeffs: Vec<[f64; 2]>,
            #[serde(skip)]
            _marker: std::marker::PhantomData<&'a ()>,
        }
        Wire {
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            _marker: std::marker::PhantomData,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            coeffs: Vec<[f64; 2]>,
        }
        let wire = Wire::deserialize(deserializer)?;
        for pair in &wire.coeffs {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(D::Error::custom("non-finite coefficient"));
            }
        }
        Ok(ComplexPoly::new(
            wire.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }
}

/// Reject polynomials with NaN/inf coefficients.
pub fn require_finite(p: &ComplexPoly, what: &str) -> Result<()> {
    if p.all_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} has a NaN/inf coefficient")))
    }
}

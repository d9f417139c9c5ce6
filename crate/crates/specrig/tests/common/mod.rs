//! Shared generators for the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use specrig::{ComplexPoly, MobiusTransform, RationalMap};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform draw from the closed unit disk.
pub fn disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let re = rng.gen_range(-1.0..1.0);
        let im = rng.gen_range(-1.0..1.0);
        if re * re + im * im <= 1.0 {
            return c(re, im);
        }
    }
}

/// Random rational map of exact degree d with unit-disk coefficients;
/// redraws until the pair is nondegenerate.
pub fn random_map(rng: &mut ChaCha8Rng, d: usize) -> RationalMap {
    loop {
        let num = ComplexPoly::new((0..=d).map(|_| disk(rng)).collect());
        let den = ComplexPoly::new((0..=d).map(|_| disk(rng)).collect());
        match RationalMap::new(num, den) {
            Ok(f) if f.degree() == d => return f,
            _ => continue,
        }
    }
}

/// Random polynomial map (denominator 1) of exact degree d.
pub fn random_poly_map(rng: &mut ChaCha8Rng, d: usize) -> RationalMap {
    loop {
        let mut coeffs: Vec<Complex64> = (0..=d).map(|_| disk(rng)).collect();
        // Keep the leading coefficient well away from zero so the formal
        // degree is stable under iteration.
        coeffs[d] += c(1.0, 0.0);
        match RationalMap::from_polynomial(ComplexPoly::new(coeffs)) {
            Ok(f) if f.degree() == d => return f,
            _ => continue,
        }
    }
}

/// Random Möbius transformation bounded away from degeneracy.
pub fn random_mobius(rng: &mut ChaCha8Rng) -> MobiusTransform {
    loop {
        if let Ok(m) = MobiusTransform::new(
            disk(rng) + c(1.0, 0.0),
            disk(rng),
            disk(rng),
            disk(rng) + c(1.0, 0.0),
        ) {
            return m;
        }
    }
}

/// The quadratic polynomial z^2 + c0.
pub fn quadratic(c0: Complex64) -> RationalMap {
    RationalMap::from_polynomial(ComplexPoly::new(vec![c0, c(0.0, 0.0), c(1.0, 0.0)])).unwrap()
}

pub fn map_json(f: &RationalMap) -> String {
    serde_json::to_string(f).unwrap()
}

//! The escape-rate (Green) potential of a marked point: the value at t of
//! g(t) = lim d^{−n} log‖F̂_t^n(Â(t))‖, iterated through the homogeneous
//! lift with per-step sup-norm renormalization.
//!
//! The lift matters: Â(t) = (a_num(t), a_den(t)) is taken exactly as the
//! marked point defines it, and F̂_t uses the family's coefficients as
//! specialized — no extra rescaling. With that convention the functional
//! equation g(t, f_t(a)) = d·g(t, a) holds exactly (homogeneity), which is
//! what the bifurcation-grid cross-checks rely on. Bounded orbits give 0 in
//! the limit; the partial sum converges geometrically (each increment
//! carries a factor d^{−k}), so the last increment is an honest error
//! estimate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{degenerate, family_eval, FamilySpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GreenValue {
    pub value: f64,
    /// Magnitude of the last accumulated increment d^{−n} log s_n.
    pub error_estimate: f64,
}

fn eval_homog(c: &[Complex64], x: Complex64, y: Complex64) -> Complex64 {
    let n = c.len() - 1;
    let mut xs = Vec::with_capacity(n + 1);
    let mut xp = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        xs.push(xp);
        xp *= x;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut yp = Complex64::new(1.0, 0.0);
    for k in (0..=n).rev() {
        acc += c[k] * xs[k] * yp;
        yp *= y;
    }
    acc
}

fn padded(p: &crate::cpoly::ComplexPoly, formal: usize) -> Vec<Complex64> {
    let mut c = p.coeffs().to_vec();
    c.resize(formal + 1, Complex64::new(0.0, 0.0));
    c
}

/// Green value of the named marked point at parameter t, as the partial
/// sum after `n_iter` lift iterations.
pub fn green_value(
    family: &FamilySpec,
    marked: &str,
    t: Complex64,
    n_iter: usize,
) -> Result<GreenValue> {
    let f = family_eval(family, t)?;
    let a = family.marked_point(marked)?;
    let ax = a.num.eval(t);
    let ay = a.den.eval(t);
    if !ax.is_finite() || !ay.is_finite() {
        return Err(Error::NonFinite("marked point lift".into()));
    }
    let s0 = ax.norm().max(ay.norm());
    if s0 == 0.0 {
        return Err(degenerate(t, "marked point lift is (0, 0)".into()));
    }

    let d = family.degree;
    let num_c = padded(f.num(), d);
    let den_c = padded(f.den(), d);

    // g(Â) = log‖Â‖ + g(Â/‖Â‖) by homogeneity; starting from the unit
    // vector keeps every intermediate in f64 range.
    let mut x = ax / s0;
    let mut y = ay / s0;
    let mut value = s0.ln();
    let mut last = 0.0;
    let mut weight = 1.0;
    for _ in 0..n_iter {
        let nx = eval_homog(&num_c, x, y);
        let ny = eval_homog(&den_c, x, y);
        let s = nx.norm().max(ny.norm());
        if !(s > 0.0) || !s.is_finite() {
            return Err(degenerate(
                t,
                "homogeneous lift collapsed during green iteration".into(),
            ));
        }
        weight /= d as f64;
        last = weight * s.ln();
        value += last;
        x = nx / s;
        y = ny / s;
    }
    Ok(GreenValue {
        value,
        error_estimate: last.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::famdyn::MarkedPoint;
    use crate::cpoly::ComplexPoly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// z^2 + t with both the critical point and the critical value marked.
    fn quad_family() -> FamilySpec {
        let mut fam = FamilySpec::unicritical(2);
        fam.marked.insert(
            "critval".into(),
            MarkedPoint {
                num: ComplexPoly::from_real(&[0.0, 1.0]), // a(t) = t
                den: ComplexPoly::from_real(&[1.0]),
            },
        );
        fam
    }

    #[test]
    fn bounded_orbits_have_zero_green_value() {
        let fam = quad_family();
        for t in [c(0.0, 0.0), c(-1.0, 0.0), c(-2.0, 0.0), c(-0.12, 0.74)] {
            let g = green_value(&fam, "crit", t, 80).unwrap();
            assert!(
                g.value.abs() < 1e-6,
                "green at bounded {t}: {}",
                g.value
            );
        }
    }

    #[test]
    fn far_parameters_match_the_asymptotic() {
        let fam = quad_family();
        let g = green_value(&fam, "crit", c(100.0, 0.0), 40).unwrap();
        let expected = 0.5 * 100.0_f64.ln();
        assert!(
            (g.value - expected).abs() < 0.05,
            "green(100) = {}, asymptotic {}",
            g.value,
            expected
        );
        assert!(g.error_estimate < 1e-9);

        // The asymptotic g(t) − (1/2)log|t| → 0 tightens with |t|.
        let g4 = green_value(&fam, "crit", c(1e4, 0.0), 40).unwrap();
        assert!((g4.value - 0.5 * 1e4_f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn functional_equation_on_escaping_samples() {
        let fam = quad_family();
        for t in [c(3.0, 0.5), c(-2.8, 1.1), c(0.4, 2.2), c(5.0, -3.0)] {
            let ga = green_value(&fam, "crit", t, 60).unwrap().value;
            let gfa = green_value(&fam, "critval", t, 60).unwrap().value;
            assert!(
                (gfa - 2.0 * ga).abs() < 1e-6,
                "functional equation at {t}: g(f(a)) = {gfa}, 2 g(a) = {ga}"
            );
            assert!(ga > 0.0, "escaping sample should have positive green value");
        }
    }

    #[test]
    fn green_signs_sample_sweep() {
        // Inside parameters (bounded critical orbit) give 0, far outside
        // give strictly positive values, across a deterministic sweep.
        let fam = quad_family();
        for k in 0..100 {
            let angle = std::f64::consts::TAU * (k as f64) / 100.0;
            let t = Complex64::from_polar(3.0, angle);
            let g = green_value(&fam, "crit", t, 60).unwrap();
            assert!(g.value > 0.0, "|t| = 3 is outside: green {}", g.value);
        }
        for k in 0..100 {
            let angle = std::f64::consts::TAU * (k as f64) / 100.0;
            let t = Complex64::from_polar(0.24, angle);
            let g = green_value(&fam, "crit", t, 120).unwrap();
            assert!(
                g.value.abs() < 1e-6,
                "|t| = 0.24 is inside the main cardioid: green {}",
                g.value
            );
        }
    }

    #[test]
    fn degenerate_parameter_propagates() {
        // (t z^2 + 1)/z degenerates at t = 0.
        let fam = FamilySpec {
            degree: 2,
            num_coeffs: vec![
                ComplexPoly::from_real(&[1.0]),
                ComplexPoly::zero(),
                ComplexPoly::from_real(&[0.0, 1.0]),
            ],
            den_coeffs: vec![ComplexPoly::zero(), ComplexPoly::from_real(&[1.0])],
            marked: [(
                "one".to_string(),
                MarkedPoint::constant(Complex64::new(1.0, 0.0)),
            )]
            .into_iter()
            .collect(),
        };
        assert!(matches!(
            green_value(&fam, "one", c(0.0, 0.0), 10),
            Err(Error::DegenerateParameter { .. })
        ));
    }

    #[test]
    fn pcf_centers_have_zero_critical_green_value() {
        // Centers of period <= 4 for z^2 + t (representatives).
        let fam = quad_family();
        for t in [
            c(0.0, 0.0),
            c(-1.0, 0.0),
            c(-1.7548776662466928, 0.0),
            c(-0.15652016683375508, 1.0322471089228318),
        ] {
            let g = green_value(&fam, "crit", t, 100).unwrap();
            assert!(g.value.abs() < 1e-6, "center {t}: green {}", g.value);
        }
    }
}

//! One-parameter algebraic families f_t and their marked points: orbits,
//! PCF detection, Green/bifurcation measures, PCF-parameter solving, and
//! the expansion/similarity diagnostics built on top of them.
//!
//! A [`FamilySpec`] stores the z-coefficients of f_t as polynomials in the
//! parameter t, so specialization at any t is exact polynomial evaluation
//! followed by the usual rational-map validation. Everything downstream
//! works pointwise through the specialized map — no formal iteration in t.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cpoly::ComplexPoly;
use crate::error::{Error, Result};
use crate::ratmap::{ProjPoint, RationalMap};

mod diagnostics;
mod green;
mod grid;
mod orbit;
mod pcfparams;
mod similarity;

pub use diagnostics::{
    ce_exponent_estimate, dynamically_related_probe, recurrence_exponent_estimate,
    separation_statistics, RelationVerdict, SeparationStats,
};
pub use green::{green_value, GreenValue};
pub use grid::{bifurcation_grid, equidistribution_discrepancy, GridMeasure, Window};
pub use orbit::{classify_orbit, is_hyperbolic_disjoint, is_pcf, OrbitClassification, OrbitStatus};
pub use pcfparams::{pcf_parameters_unicritical, PcfKind};
pub use similarity::{similarity_frames, SimilarityFrame, SimilarityReport};

/// A marked point a(t) = num(t)/den(t) following the family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub num: ComplexPoly,
    pub den: ComplexPoly,
}

impl MarkedPoint {
    /// The constant marked point a(t) ≡ z.
    pub fn constant(z: Complex64) -> MarkedPoint {
        MarkedPoint {
            num: ComplexPoly::new(vec![z]),
            den: ComplexPoly::from_real(&[1.0]),
        }
    }

    /// Value at t; `Infinity` where den(t) = 0 with num(t) ≠ 0.
    pub fn value(&self, t: Complex64) -> Result<ProjPoint> {
        let n = self.num.eval(t);
        let d = self.den.eval(t);
        if !n.is_finite() || !d.is_finite() {
            return Err(Error::NonFinite("marked point evaluation".into()));
        }
        if d.norm() == 0.0 {
            if n.norm() == 0.0 {
                return Err(degenerate(t, "marked point evaluates to 0/0".into()));
            }
            return Ok(ProjPoint::Infinity);
        }
        Ok(ProjPoint::Finite(n / d))
    }
}

/// A one-parameter family of degree-d rational maps: coefficient k of the
/// z-numerator (and z-denominator) is a polynomial in the parameter t.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySpec {
    pub degree: usize,
    pub num_coeffs: Vec<ComplexPoly>,
    pub den_coeffs: Vec<ComplexPoly>,
    /// Named marked points; a BTreeMap so iteration order is stable.
    #[serde(default)]
    pub marked: BTreeMap<String, MarkedPoint>,
}

impl FamilySpec {
    /// The unicritical family z^d + t with the critical point marked as
    /// "crit" (a ≡ 0).
    pub fn unicritical(d: usize) -> FamilySpec {
        let mut num_coeffs = vec![ComplexPoly::zero(); d + 1];
        num_coeffs[0] = ComplexPoly::from_real(&[0.0, 1.0]); // the t term
        num_coeffs[d] = ComplexPoly::from_real(&[1.0]);
        let mut marked = BTreeMap::new();
        marked.insert(
            "crit".to_string(),
            MarkedPoint::constant(Complex64::new(0.0, 0.0)),
        );
        FamilySpec {
            degree: d,
            num_coeffs,
            den_coeffs: vec![ComplexPoly::from_real(&[1.0])],
            marked,
        }
    }

    pub fn marked_point(&self, name: &str) -> Result<&MarkedPoint> {
        self.marked
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown marked point {name:?}")))
    }

    /// Shape checks plus a generic-degree probe: the family must evaluate
    /// to a degree-d map at at least one of a few fixed sample parameters.
    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::InvalidInput("family degree must be >= 1".into()));
        }
        if self.num_coeffs.len() > self.degree + 1 || self.den_coeffs.len() > self.degree + 1 {
            return Err(Error::InvalidInput(format!(
                "coefficient lists longer than degree {} allows",
                self.degree
            )));
        }
        if self.num_coeffs.is_empty() && self.den_coeffs.is_empty() {
            return Err(Error::InvalidInput("family has no coefficients".into()));
        }
        let probes = [
            Complex64::new(0.83, 0.29),
            Complex64::new(-0.41, 1.07),
            Complex64::new(1.63, -0.57),
        ];
        if probes.iter().any(|&t| family_eval(self, t).is_ok()) {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "family is degenerate at every probe parameter".into(),
            ))
        }
    }
}

pub(crate) fn degenerate(t: Complex64, reason: String) -> Error {
    Error::DegenerateParameter {
        re: t.re,
        im: t.im,
        reason,
    }
}

/// Specializes the family at t: exact coefficient evaluation, then the
/// usual validation. Any failure (shared roots, degree drop) is reported
/// as `DegenerateParameter` at this t.
pub fn family_eval(family: &FamilySpec, t: Complex64) -> Result<RationalMap> {
    if !t.is_finite() {
        return Err(Error::NonFinite("family parameter t".into()));
    }
    let num = ComplexPoly::new(family.num_coeffs.iter().map(|p| p.eval(t)).collect());
    let den = ComplexPoly::new(family.den_coeffs.iter().map(|p| p.eval(t)).collect());
    let f = RationalMap::new(num, den).map_err(|e| degenerate(t, e.to_string()))?;
    if f.degree() != family.degree {
        return Err(degenerate(
            t,
            format!("degree dropped from {} to {}", family.degree, f.degree()),
        ));
    }
    Ok(f)
}

/// The marked orbit ξ_{a,n}: [a(t), f_t(a(t)), …, f_t^n(a(t))], computed by
/// pointwise application of the specialized map (never formal iteration).
pub fn marked_orbit(
    family: &FamilySpec,
    marked: &str,
    t: Complex64,
    n: usize,
) -> Result<Vec<ProjPoint>> {
    let f = family_eval(family, t)?;
    let a = family.marked_point(marked)?.value(t)?;
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(a);
    let mut cur = a;
    for _ in 0..n {
        cur = f.apply(cur);
        orbit.push(cur);
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmap::chordal_distance;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_orbit(orbit: &[ProjPoint], want: &[Complex64]) {
        assert_eq!(orbit.len(), want.len());
        for (i, (&got, &w)) in orbit.iter().zip(want).enumerate() {
            assert!(
                chordal_distance(got, ProjPoint::Finite(w)) < 1e-12,
                "orbit[{i}] = {got}, wanted {w}"
            );
        }
    }

    #[test]
    fn unicritical_specializes_to_squares() {
        let fam = FamilySpec::unicritical(2);
        fam.validate().unwrap();
        let f = family_eval(&fam, c(0.0, 0.0)).unwrap();
        assert_eq!(f.degree(), 2);
        // z^2 at 3 = 9
        assert!(
            chordal_distance(f.apply(ProjPoint::finite(3.0, 0.0)), ProjPoint::finite(9.0, 0.0))
                < 1e-12
        );
        let f = family_eval(&fam, c(-1.0, 0.0)).unwrap();
        // z^2 - 1 at 2 = 3
        assert!(
            chordal_distance(f.apply(ProjPoint::finite(2.0, 0.0)), ProjPoint::finite(3.0, 0.0))
                < 1e-12
        );
    }

    #[test]
    fn degree_drop_is_degenerate() {
        // (t z^2 + 1) / z: degree 2 generically, degree 1 at t = 0.
        let fam = FamilySpec {
            degree: 2,
            num_coeffs: vec![
                ComplexPoly::from_real(&[1.0]),
                ComplexPoly::zero(),
                ComplexPoly::from_real(&[0.0, 1.0]),
            ],
            den_coeffs: vec![ComplexPoly::zero(), ComplexPoly::from_real(&[1.0])],
            marked: BTreeMap::new(),
        };
        fam.validate().unwrap();
        assert!(family_eval(&fam, c(1.0, 0.0)).is_ok());
        match family_eval(&fam, c(0.0, 0.0)) {
            Err(Error::DegenerateParameter { re, im, .. }) => {
                assert_eq!((re, im), (0.0, 0.0));
            }
            other => panic!("wanted DegenerateParameter, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_parameter_is_rejected() {
        let fam = FamilySpec::unicritical(2);
        assert!(matches!(
            family_eval(&fam, c(f64::NAN, 0.0)),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn basilica_and_chebyshev_orbits() {
        let fam = FamilySpec::unicritical(2);
        let orbit = marked_orbit(&fam, "crit", c(-1.0, 0.0), 4).unwrap();
        assert_orbit(
            &orbit,
            &[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        );
        let orbit = marked_orbit(&fam, "crit", c(-2.0, 0.0), 4).unwrap();
        assert_orbit(
            &orbit,
            &[c(0.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)],
        );
    }

    #[test]
    fn orbit_at_i_matches_hand_arithmetic() {
        let fam = FamilySpec::unicritical(2);
        let orbit = marked_orbit(&fam, "crit", c(0.0, 1.0), 5).unwrap();
        assert_orbit(
            &orbit,
            &[
                c(0.0, 0.0),
                c(0.0, 1.0),
                c(-1.0, 1.0),
                c(0.0, -1.0),
                c(-1.0, 1.0),
                c(0.0, -1.0),
            ],
        );
    }

    #[test]
    fn unknown_marked_point_is_invalid_input() {
        let fam = FamilySpec::unicritical(2);
        assert!(matches!(
            marked_orbit(&fam, "nope", c(0.0, 0.0), 3),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn family_spec_json_round_trip() {
        let fam = FamilySpec::unicritical(3);
        let s = serde_json::to_string(&fam).unwrap();
        let back: FamilySpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back.degree, 3);
        assert_eq!(back.marked.len(), 1);
        let f1 = family_eval(&fam, c(0.5, 0.25)).unwrap();
        let f2 = family_eval(&back, c(0.5, 0.25)).unwrap();
        for k in 0..=3 {
            assert_eq!(f1.num().coeff(k), f2.num().coeff(k));
        }
    }

    #[test]
    fn marked_point_through_a_pole_is_infinity() {
        // a(t) = 1/t is a legitimate marked point that passes through
        // infinity at t = 0.
        let a = MarkedPoint {
            num: ComplexPoly::from_real(&[1.0]),
            den: ComplexPoly::from_real(&[0.0, 1.0]),
        };
        assert!(a.value(c(0.0, 0.0)).unwrap().is_infinity());
        let v = a.value(c(2.0, 0.0)).unwrap();
        assert!(chordal_distance(v, ProjPoint::finite(0.5, 0.0)) < 1e-15);
    }
}

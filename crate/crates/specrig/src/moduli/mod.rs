//! Operations on the moduli space of rational maps: conjugacy testing,
//! Milnor coordinates for quadratics, exceptional families (power and
//! Chebyshev maps, flexible Lattès maps), and elementary transformations.
//!
//! Conjugacy here always means conjugacy by a Möbius transformation acting
//! on the sphere. The numerical certificate produced by [`conjugacy_test`]
//! is an explicit Möbius map together with the worst sampled deviation of
//! φ∘f∘φ⁻¹ from g in the chordal metric.

mod semiconj;

pub use semiconj::semiconjugacy_search;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cpoly::ComplexPoly;
use crate::error::{Error, Result};
use crate::ratmap::{chordal_distance, MobiusTransform, ProjPoint, RationalMap};
use crate::spectrum::{fixed_points, multiplier_spectrum, spectrum_coordinates, tau};

/// Markers closer than this (chordally) are treated as the same point when
/// building conjugacy triples.
const MARKER_MERGE_TOL: f64 = 1e-6;

/// Acceptance threshold for a conjugacy certificate.
const CONJUGACY_TOL: f64 = 1e-7;

/// A numerical certificate that two maps are Möbius conjugate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugacyWitness {
    /// The conjugating transformation: φ∘f∘φ⁻¹ ≈ g.
    pub mobius: MobiusTransform,
    /// Worst chordal deviation of φ∘f∘φ⁻¹ from g over the sample set.
    pub residual: f64,
}

/// Milnor's coordinates on the moduli space of quadratic rational maps,
/// together with the dependent symmetric function kept for validation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MilnorCoordinates {
    /// σ₁ = λ₁ + λ₂ + λ₃ over the three fixed points.
    #[serde(with = "crate::jsonc::cpair")]
    pub sigma1: Complex64,
    /// σ₂ = λ₁λ₂ + λ₁λ₃ + λ₂λ₃.
    #[serde(with = "crate::jsonc::cpair")]
    pub sigma2: Complex64,
    /// σ₃ = λ₁λ₂λ₃; always equals σ₁ − 2 for an honest quadratic.
    #[serde(with = "crate::jsonc::cpair")]
    pub sigma3: Complex64,
}

/// The two families of exceptional (non-Lattès) maps with special spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExceptionalKind {
    /// z ↦ z^d.
    Power,
    /// Monic Chebyshev map T_d with T_d(z + 1/z) = z^d + 1/z^d.
    Chebyshev,
}

/// Parameters (a, b) of the elliptic curve y² = x³ + ax + b underlying a
/// flexible Lattès map.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LattesParams {
    #[serde(with = "crate::jsonc::cpair")]
    pub a: Complex64,
    #[serde(with = "crate::jsonc::cpair")]
    pub b: Complex64,
}

/// Periodic-point markers of period ≤ 2 used to pin down a conjugacy.
#[derive(Debug, Clone)]
struct MarkerSet {
    /// Distinct fixed points.
    period1: Vec<ProjPoint>,
    /// Distinct points of exact period 2 (not chordally near a fixed point).
    period2: Vec<ProjPoint>,
}

fn dedup_points(points: &[(ProjPoint, usize)]) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::new();
    for (p, _) in points {
        if !out.iter().any(|q| chordal_distance(*q, *p) < MARKER_MERGE_TOL) {
            out.push(*p);
        }
    }
    out
}

fn collect_markers(f: &RationalMap) -> Result<MarkerSet> {
    let fix1 = fixed_points(f, 1)?;
    let fix2 = fixed_points(f, 2)?;
    let period1 = dedup_points(&fix1.points);
    let mut period2 = Vec::new();
    for p in dedup_points(&fix2.points) {
        if !period1
            .iter()
            .any(|q| chordal_distance(*q, p) < MARKER_MERGE_TOL)
        {
            period2.push(p);
        }
    }
    Ok(MarkerSet { period1, period2 })
}

/// First triple of distinct markers in (period, canonical order), with the
/// period pattern attached. Returns `None` if fewer than three markers exist.
fn pick_marker_triple(markers: &MarkerSet) -> Option<([ProjPoint; 3], [u8; 3])> {
    let mut flat: Vec<(ProjPoint, u8)> = Vec::new();
    flat.extend(markers.period1.iter().map(|p| (*p, 1u8)));
    flat.extend(markers.period2.iter().map(|p| (*p, 2u8)));
    if flat.len() < 3 {
        return None;
    }
    Some((
        [flat[0].0, flat[1].0, flat[2].0],
        [flat[0].1, flat[1].1, flat[2].1],
    ))
}

/// Deterministic sample set for measuring how far φ∘f∘φ⁻¹ is from g:
/// two rings well inside and outside the unit circle.
fn conjugacy_samples() -> Vec<Complex64> {
    let mut samples = Vec::with_capacity(20);
    for j in 0..10 {
        let t = 2.0 * std::f64::consts::PI * (j as f64) / 10.0;
        samples.push(Complex64::from_polar(0.8, t + 0.15));
        samples.push(Complex64::from_polar(1.6, t + 0.45));
    }
    samples
}

fn conjugacy_residual(h: &RationalMap, g: &RationalMap, samples: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for &z in samples {
        let p = ProjPoint::Finite(z);
        worst = worst.max(chordal_distance(h.apply(p), g.apply(p)));
    }
    worst
}

/// Searches for a Möbius transformation φ with φ∘f∘φ⁻¹ = g.
///
/// Markers (periodic points of period ≤ 2) of `f` are matched against
/// same-period markers of `g`; each matching pins a candidate φ through
/// three points, which is then scored by sampling. The first candidate
/// (in a fixed deterministic order) whose worst chordal deviation is
/// below 1e-7 is returned; `Ok(None)` means no candidate passed.
pub fn conjugacy_test(f: &RationalMap, g: &RationalMap) -> Result<Option<ConjugacyWitness>> {
    if f.degree() != g.degree() {
        return Err(Error::ShapeMismatch(format!(
            "conjugacy requires equal degrees, got {} and {}",
            f.degree(),
            g.degree()
        )));
    }
    if f.degree() < 2 {
        return Err(Error::InvalidInput(
            "conjugacy test requires degree >= 2".into(),
        ));
    }

    let f_markers = collect_markers(f)?;
    let (f_triple, pattern) = pick_marker_triple(&f_markers).ok_or(Error::InsufficientMarkers)?;
    let g_markers = collect_markers(g)?;

    let pool = |period: u8| -> &[ProjPoint] {
        if period == 1 {
            &g_markers.period1
        } else {
            &g_markers.period2
        }
    };

    let samples = conjugacy_samples();
    let m_f = match MobiusTransform::map_points(f_triple[0], f_triple[1], f_triple[2]) {
        Ok(m) => m,
        Err(_) => return Err(Error::InsufficientMarkers),
    };

    for &t0 in pool(pattern[0]) {
        for &t1 in pool(pattern[1]) {
            if chordal_distance(t0, t1) < MARKER_MERGE_TOL {
                continue;
            }
            for &t2 in pool(pattern[2]) {
                if chordal_distance(t0, t2) < MARKER_MERGE_TOL
                    || chordal_distance(t1, t2) < MARKER_MERGE_TOL
                {
                    continue;
                }
                let m_g = match MobiusTransform::map_points(t0, t1, t2) {
                    Ok(m) => m,
                    Err(_) => continue,
                };
                // φ sends the f-triple to (t0, t1, t2).
                let phi = m_g.inverse().compose(&m_f);
                let h = match f.conjugate(&phi) {
                    Ok(h) => h,
                    Err(_) => continue,
                };
                let residual = conjugacy_residual(&h, g, &samples);
                if residual < CONJUGACY_TOL {
                    return Ok(Some(ConjugacyWitness {
                        mobius: phi,
                        residual,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Milnor coordinates (σ₁, σ₂) of a quadratic rational map, computed from
/// the three fixed-point multipliers. σ₃ is dependent (σ₃ = σ₁ − 2) and is
/// validated here before returning.
pub fn milnor_coordinates(f: &RationalMap) -> Result<MilnorCoordinates> {
    if f.degree() != 2 {
        return Err(Error::InvalidInput(format!(
            "Milnor coordinates are defined for degree 2, got {}",
            f.degree()
        )));
    }
    let lambdas = multiplier_spectrum(f, 1)?;
    let sigma = spectrum_coordinates(&lambdas);
    debug_assert_eq!(sigma.len(), 3);
    let (s1, s2, s3) = (sigma[0], sigma[1], sigma[2]);
    let drift = (s3 - (s1 - 2.0)).norm();
    if drift > 1e-8 * (1.0 + s1.norm()) {
        return Err(Error::NonConvergence(format!(
            "fixed-point multipliers violate the quadratic relation by {drift:.3e}"
        )));
    }
    Ok(MilnorCoordinates {
        sigma1: s1,
        sigma2: s2,
        sigma3: s3,
    })
}

/// Monic Chebyshev polynomial T_d with T_d(z + 1/z) = z^d + 1/z^d,
/// via T₁ = z, T₂ = z² − 2, T_{k+1} = z·T_k − T_{k−1}.
fn chebyshev_poly(d: usize) -> ComplexPoly {
    let one = Complex64::new(1.0, 0.0);
    // T₀ = 2.
    let mut prev = ComplexPoly::new(vec![Complex64::new(2.0, 0.0)]);
    let mut curr = ComplexPoly::new(vec![Complex64::new(0.0, 0.0), one]);
    if d == 0 {
        return prev;
    }
    let z = ComplexPoly::new(vec![Complex64::new(0.0, 0.0), one]);
    for _ in 1..d {
        let next = z.mul(&curr).sub(&prev);
        prev = curr;
        curr = next;
    }
    curr
}

/// The degree-d power map z^d or monic Chebyshev map T_d.
pub fn exceptional_map(kind: ExceptionalKind, d: usize) -> Result<RationalMap> {
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "exceptional maps need degree >= 2, got {d}"
        )));
    }
    let poly = match kind {
        ExceptionalKind::Power => {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
            coeffs[d] = Complex64::new(1.0, 0.0);
            ComplexPoly::new(coeffs)
        }
        ExceptionalKind::Chebyshev => chebyshev_poly(d),
    };
    RationalMap::from_polynomial(poly)
}

/// The flexible Lattès map of degree 4 induced by duplication on the
/// elliptic curve y² = x³ + ax + b:
///
///   x(2P) = (x⁴ − 2ax² − 8bx + a²) / (4(x³ + ax + b)).
///
/// Errors with `SingularCurve` when the discriminant 4a³ + 27b² is zero
/// relative to the coefficient scale.
pub fn flexible_lattes(params: LattesParams) -> Result<RationalMap> {
    let LattesParams { a, b } = params;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput("Lattès parameters must be finite".into()));
    }
    let disc = 4.0 * a * a * a + 27.0 * b * b;
    let scale = 1.0 + a.norm().powi(3) + b.norm().powi(2);
    let scaled = disc.norm() / scale;
    if scaled <= 1e-10 {
        return Err(Error::SingularCurve(scaled));
    }
    let zero = Complex64::new(0.0, 0.0);
    let num = ComplexPoly::new(vec![
        a * a,
        -8.0 * b,
        -2.0 * a,
        zero,
        Complex64::new(1.0, 0.0),
    ]);
    let den = ComplexPoly::new(vec![4.0 * b, 4.0 * a, zero, Complex64::new(4.0, 0.0)]);
    RationalMap::new(num, den)
}

/// The elementary transformation (h₁, h₂) ↦ (h₁∘h₂, h₂∘h₁). Both outputs
/// have the same multiplier spectra at every period; the degree product
/// must be at least 2.
pub fn elementary_transform(
    h1: &RationalMap,
    h2: &RationalMap,
) -> Result<(RationalMap, RationalMap)> {
    let product = h1
        .degree()
        .checked_mul(h2.degree())
        .ok_or(Error::InvalidInput("degree product overflow".into()))?;
    if product < 2 {
        return Err(Error::InvalidInput(
            "elementary transform needs degree product >= 2".into(),
        ));
    }
    let f = h1.compose(h2)?;
    let g = h2.compose(h1)?;
    Ok((f, g))
}

/// Convenience check used in tests and the CLI: do the two halves of an
/// elementary transformation have identical truncated spectra?
pub fn elementary_spectra_agree(f: &RationalMap, g: &RationalMap, n_max: usize) -> Result<bool> {
    let tf = tau(f, n_max)?;
    let tg = tau(g, n_max)?;
    crate::spectrum::compare_spectra(&tf, &tg).map(|(_, equal)| equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpoly::ComplexPoly;
    use crate::spectrum::{compare_spectra, length_spectrum, multiplier_spectrum};
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_map(coeffs: &[f64]) -> RationalMap {
        let cs: Vec<Complex64> = coeffs.iter().map(|&x| c(x, 0.0)).collect();
        RationalMap::from_polynomial(ComplexPoly::new(cs)).unwrap()
    }

    #[test]
    fn translated_square_is_conjugate() {
        // g(z) = z² - 2z + 2 = φ(φ⁻¹(z)² ) with φ(z) = z + 1.
        let f = poly_map(&[0.0, 0.0, 1.0]);
        let g = poly_map(&[2.0, -2.0, 1.0]);
        let witness = conjugacy_test(&f, &g).unwrap().expect("conjugate pair");
        assert!(witness.residual < 1e-9, "residual {}", witness.residual);
        // The witness should act like z ↦ z + 1.
        for z in [c(0.3, 0.2), c(-1.0, 0.5), c(2.0, -0.7)] {
            let img = witness.mobius.apply(ProjPoint::Finite(z));
            let expect = ProjPoint::Finite(z + 1.0);
            assert!(chordal_distance(img, expect) < 1e-6);
        }
    }

    #[test]
    fn square_vs_basilica_not_conjugate() {
        let f = poly_map(&[0.0, 0.0, 1.0]);
        let g = poly_map(&[-1.0, 0.0, 1.0]);
        assert!(conjugacy_test(&f, &g).unwrap().is_none());
    }

    #[test]
    fn self_conjugacy_is_found() {
        let f = poly_map(&[-0.3, 0.1, 1.0]);
        let witness = conjugacy_test(&f, &f).unwrap().expect("self conjugate");
        assert!(witness.residual < 1e-9);
    }

    #[test]
    fn random_conjugations_are_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c0a_11ed);
        for trial in 0..8 {
            let d = 2 + (trial % 2);
            let mut coeffs: Vec<Complex64> = (0..=d)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            coeffs[d] += c(1.5, 0.0);
            let f = RationalMap::from_polynomial(ComplexPoly::new(coeffs)).unwrap();
            let phi = MobiusTransform::new(
                c(rng.gen_range(0.5..1.5), rng.gen_range(-0.3..0.3)),
                c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)),
                c(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
                c(1.0, 0.0),
            )
            .unwrap();
            let g = f.conjugate(&phi).unwrap();
            let witness = conjugacy_test(&f, &g)
                .unwrap()
                .unwrap_or_else(|| panic!("trial {trial}: conjugates not detected"));
            assert!(
                witness.residual < CONJUGACY_TOL,
                "trial {trial}: residual {}",
                witness.residual
            );
        }
    }

    #[test]
    fn degree_mismatch_is_shape_error() {
        let f = poly_map(&[0.0, 0.0, 1.0]);
        let g = poly_map(&[0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            conjugacy_test(&f, &g),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn marker_triple_needs_three_distinct_points() {
        let two = MarkerSet {
            period1: vec![ProjPoint::Infinity, ProjPoint::Finite(c(0.5, 0.0))],
            period2: vec![],
        };
        assert!(pick_marker_triple(&two).is_none());
        let three = MarkerSet {
            period1: vec![ProjPoint::Infinity],
            period2: vec![ProjPoint::Finite(c(0.0, 0.7)), ProjPoint::Finite(c(0.0, -0.7))],
        };
        let (triple, pattern) = pick_marker_triple(&three).unwrap();
        assert_eq!(pattern, [1, 2, 2]);
        assert!(triple[0].is_infinity());
    }

    #[test]
    fn parabolic_map_still_has_enough_markers() {
        // z + 1/z has one (triple) fixed point at ∞ and a genuine 2-cycle,
        // so conjugacy against itself must still find a witness.
        let f = RationalMap::new(
            ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            ComplexPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        )
        .unwrap();
        let witness = conjugacy_test(&f, &f).unwrap().expect("self conjugacy");
        assert!(witness.residual < 1e-8);
    }

    #[test]
    fn milnor_coordinates_examples() {
        let m = milnor_coordinates(&poly_map(&[0.0, 0.0, 1.0])).unwrap();
        assert!((m.sigma1 - 2.0).norm() < 1e-9);
        assert!(m.sigma2.norm() < 1e-9);
        assert!(m.sigma3.norm() < 1e-9);

        let m = milnor_coordinates(&poly_map(&[-1.0, 0.0, 1.0])).unwrap();
        assert!((m.sigma1 - 2.0).norm() < 1e-9);
        assert!((m.sigma2 + 4.0).norm() < 1e-8);

        // Parabolic: all three multipliers equal 1.
        let f = RationalMap::new(
            ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            ComplexPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        )
        .unwrap();
        let m = milnor_coordinates(&f).unwrap();
        assert!((m.sigma1 - 3.0).norm() < 1e-8);
        assert!((m.sigma2 - 3.0).norm() < 1e-8);
        assert!((m.sigma3 - 1.0).norm() < 1e-8);
    }

    #[test]
    fn milnor_relation_holds_for_random_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x2316 ^ 0x5eed);
        for _ in 0..30 {
            let num = ComplexPoly::new(vec![
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(0.6..1.4), rng.gen_range(-0.5..0.5)),
            ]);
            let den = ComplexPoly::new(vec![
                c(rng.gen_range(0.6..1.4), rng.gen_range(-0.5..0.5)),
                c(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)),
            ]);
            let Ok(f) = RationalMap::new(num, den) else {
                continue;
            };
            if f.degree() != 2 {
                continue;
            }
            let m = milnor_coordinates(&f).unwrap();
            assert!((m.sigma3 - (m.sigma1 - 2.0)).norm() < 1e-8 * (1.0 + m.sigma1.norm()));
        }
    }

    #[test]
    fn milnor_requires_degree_two() {
        assert!(matches!(
            milnor_coordinates(&poly_map(&[0.0, 0.0, 0.0, 1.0])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn chebyshev_small_degrees() {
        let t2 = exceptional_map(ExceptionalKind::Chebyshev, 2).unwrap();
        assert_eq!(t2.num().coeffs(), &[c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let t3 = exceptional_map(ExceptionalKind::Chebyshev, 3).unwrap();
        assert_eq!(
            t3.num().coeffs(),
            &[c(0.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
        );
        let p3 = exceptional_map(ExceptionalKind::Power, 3).unwrap();
        assert_eq!(p3.degree(), 3);
        let img = p3.apply(ProjPoint::Finite(c(0.0, 2.0)));
        assert!(chordal_distance(img, ProjPoint::Finite(c(0.0, -8.0))) < 1e-12);
    }

    #[test]
    fn chebyshev_semiconjugacy_identity() {
        // T_d(z + 1/z) = z^d + 1/z^d on a ring of sample points.
        for d in 2..=5 {
            let td = exceptional_map(ExceptionalKind::Chebyshev, d).unwrap();
            for j in 0..12 {
                let z = Complex64::from_polar(1.2, 0.31 + j as f64);
                let w = z + 1.0 / z;
                let lhs = td.apply(ProjPoint::Finite(w)).as_finite().unwrap();
                let rhs = z.powu(d as u32) + z.powu(d as u32).inv();
                assert!((lhs - rhs).norm() < 1e-10, "d={d} j={j}");
            }
        }
    }

    #[test]
    fn exceptional_degree_guard() {
        assert!(exceptional_map(ExceptionalKind::Power, 1).is_err());
        assert!(exceptional_map(ExceptionalKind::Chebyshev, 0).is_err());
    }

    #[test]
    fn lattes_matches_duplication_law() {
        let params = LattesParams {
            a: c(1.0, 0.0),
            b: c(1.0, 0.0),
        };
        let f = flexible_lattes(params).unwrap();
        assert_eq!(f.degree(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(0x1a77e5);
        for _ in 0..20 {
            let x = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let y2 = x * x * x + params.a * x + params.b;
            if y2.norm() < 1e-3 {
                continue; // too close to 2-torsion for the slope formula
            }
            let y = y2.sqrt();
            // Group law: x(2P) = λ² − 2x with λ = (3x² + a)/(2y).
            let lambda = (3.0 * x * x + params.a) / (2.0 * y);
            let expected = lambda * lambda - 2.0 * x;
            let got = f.apply(ProjPoint::Finite(x)).as_finite().unwrap();
            assert!(
                (got - expected).norm() < 1e-9 * (1.0 + expected.norm()),
                "x={x} got={got} expected={expected}"
            );
        }
    }

    #[test]
    fn lattes_fixed_spectrum_is_pinned() {
        // Duplication fixes x(O) = ∞ with multiplier 4 and the four
        // 3-torsion x-coordinates with multiplier −2.
        let f = flexible_lattes(LattesParams {
            a: c(1.0, 0.0),
            b: c(1.0, 0.0),
        })
        .unwrap();
        let s = multiplier_spectrum(&f, 1).unwrap();
        assert_eq!(s.len(), 5);
        for lambda in &s[..4] {
            assert!((lambda + 2.0).norm() < 1e-7, "{lambda}");
        }
        assert!((s[4] - 4.0).norm() < 1e-7);
        let lengths = length_spectrum(&f, 1).unwrap();
        assert!((lengths[4] - 4.0).abs() < 1e-7);
    }

    #[test]
    fn lattes_spectra_constant_in_family() {
        let cases = [
            (c(1.0, 0.0), c(1.0, 0.0)),
            (c(2.0, 0.0), c(3.0, 0.0)),
            (c(0.0, 0.0), c(1.0, 0.0)),
            (c(-1.3, 0.4), c(0.8, -0.2)),
        ];
        let tables: Vec<_> = cases
            .iter()
            .map(|&(a, b)| tau(&flexible_lattes(LattesParams { a, b }).unwrap(), 2).unwrap())
            .collect();
        for t in &tables[1..] {
            let (distance, equal) = compare_spectra(&tables[0], t).unwrap();
            assert!(equal, "Lattès spectra drifted: distance {distance}");
        }
    }

    #[test]
    fn singular_curve_is_rejected() {
        let err = flexible_lattes(LattesParams {
            a: c(0.0, 0.0),
            b: c(0.0, 0.0),
        })
        .unwrap_err();
        assert!(matches!(err, Error::SingularCurve(_)));
        // 4a³ + 27b² = 0 with a = −3, b = 2.
        let err = flexible_lattes(LattesParams {
            a: c(-3.0, 0.0),
            b: c(2.0, 0.0),
        })
        .unwrap_err();
        assert!(matches!(err, Error::SingularCurve(_)));
    }

    #[test]
    fn elementary_transform_cube_shift() {
        let h1 = poly_map(&[0.0, 0.0, 0.0, 1.0]); // z³
        let h2 = poly_map(&[1.0, 1.0]); // z + 1
        let (f, g) = elementary_transform(&h1, &h2).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(g.degree(), 3);
        // f = (z+1)³, g = z³ + 1.
        let z = c(0.4, -0.9);
        let fz = f.apply(ProjPoint::Finite(z)).as_finite().unwrap();
        assert!((fz - (z + 1.0).powu(3)).norm() < 1e-12);
        let gz = g.apply(ProjPoint::Finite(z)).as_finite().unwrap();
        assert!((gz - (z * z * z + 1.0)).norm() < 1e-12);
        assert!(elementary_spectra_agree(&f, &g, 3).unwrap());
    }

    #[test]
    fn elementary_transform_square_square() {
        let h = poly_map(&[0.0, 0.0, 1.0]);
        let (f, g) = elementary_transform(&h, &h).unwrap();
        assert_eq!(f.degree(), 4);
        let (_, equal) = compare_spectra(&tau(&f, 2).unwrap(), &tau(&g, 2).unwrap()).unwrap();
        assert!(equal);
    }

    #[test]
    fn elementary_transform_random_pairs_share_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xe1e4);
        let mut done = 0;
        while done < 5 {
            let h1 = ComplexPoly::new(vec![
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(0.7..1.3), 0.0),
            ]);
            let h2 = ComplexPoly::new(vec![
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(0.7..1.3), 0.0),
            ]);
            let (Ok(h1), Ok(h2)) = (
                RationalMap::from_polynomial(h1),
                RationalMap::from_polynomial(h2),
            ) else {
                continue;
            };
            let Ok((f, g)) = elementary_transform(&h1, &h2) else {
                continue;
            };
            assert!(
                elementary_spectra_agree(&f, &g, 2).unwrap(),
                "spectra diverged on trial {done}"
            );
            done += 1;
        }
    }

    #[test]
    fn elementary_transform_degree_guard() {
        let h = poly_map(&[1.0, 1.0]);
        assert!(matches!(
            elementary_transform(&h, &h),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn witness_json_shape() {
        let f = poly_map(&[0.0, 0.0, 1.0]);
        let w = conjugacy_test(&f, &f).unwrap().unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert!(json.get("mobius").is_some());
        assert!(json.get("residual").unwrap().as_f64().unwrap() < 1e-7);
        let back: ConjugacyWitness = serde_json::from_value(json).unwrap();
        assert!(back.residual < 1e-7);
    }
}

//! Periodic points, multipliers, and the spectrum machinery: the multiplier
//! spectrum S_n, the length spectrum L_n, elementary-symmetric coordinates,
//! the truncated spectrum map tau (S_1..S_n per map), and spectrum
//! comparison.
//!
//! Fixed points of f^n are the roots of Phi(z) = num(f^n) − z·den(f^n)
//! together with Infinity. The w = 1/z chart polynomial is exactly the
//! degree-(d^n+1) reversal of Phi (up to sign), so the multiplicity at
//! Infinity equals d^n + 1 − deg(Phi) — the degree drop of Phi — and the
//! total always comes out to N_n = d^n + 1.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cpoly::{poly_roots_with, ComplexPoly, RootOptions};
use crate::error::{Error, Result};
use crate::ratmap::{chordal_distance, ProjPoint, RationalMap, DEFAULT_DEGREE_CAP};

/// Cap on the number of roots a single solve may request.
pub const DEFAULT_ROOT_CAP: usize = 4096;

/// Caps and root-finder options threaded through spectrum computations.
#[derive(Debug, Clone)]
pub struct SpectrumOptions {
    /// Formal degree cap for iterates (d^n).
    pub degree_cap: usize,
    /// Cap on d^n + 1, the number of periodic points solved for.
    pub root_cap: usize,
    pub roots: RootOptions,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            degree_cap: DEFAULT_DEGREE_CAP,
            root_cap: DEFAULT_ROOT_CAP,
            roots: RootOptions::default(),
        }
    }
}

/// Fix(f^n) with multiplicities; the total is always d^n + 1.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicPointSet {
    pub period: usize,
    /// Finite points sorted by (re, im); Infinity, if fixed, comes last.
    pub points: Vec<(ProjPoint, usize)>,
    pub total: usize,
}

/// One period's slice of a spectrum table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodRow {
    pub n: usize,
    /// S_n with multiplicity, sorted by (re, im).
    #[serde(with = "crate::jsonc::cvec")]
    pub multipliers: Vec<Complex64>,
    /// Scaled elementary symmetric values: sigma[k-1] = e_k(S_n) / scale^k.
    #[serde(with = "crate::jsonc::cvec")]
    pub sigma: Vec<Complex64>,
    /// Per-period scaling radius r = max(1, max |lambda|).
    pub scale: f64,
}

/// The truncated multiplier-spectrum data (S_1, ..., S_{n_max}) of one map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub degree: usize,
    pub n_max: usize,
    pub periods: Vec<PeriodRow>,
}

/// Length spectra L_n = moduli of S_n, derived from a SpectrumTable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LengthTable {
    pub degree: usize,
    pub n_max: usize,
    /// Row n holds (n, sorted moduli).
    pub periods: Vec<(usize, Vec<f64>)>,
}

/// All fixed points of f^n, counted with multiplicity (default caps).
pub fn fixed_points(f: &RationalMap, n: usize) -> Result<PeriodicPointSet> {
    fixed_points_with(f, n, &SpectrumOptions::default())
}

pub fn fixed_points_with(
    f: &RationalMap,
    n: usize,
    opts: &SpectrumOptions,
) -> Result<PeriodicPointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("period must be >= 1".into()));
    }
    let g = f.iterate_capped(n, opts.degree_cap)?;
    let total = g.degree() + 1;
    if total > opts.root_cap {
        return Err(Error::DegreeCapExceeded {
            needed: total,
            cap: opts.root_cap,
        });
    }
    // Phi(z) = num_g(z) - z * den_g(z)
    let z_den = ComplexPoly::new(
        std::iter::once(Complex64::new(0.0, 0.0))
            .chain(g.den().coeffs().iter().copied())
            .collect(),
    );
    let phi = g.num().sub(&z_den);
    let phi_degree = match phi.degree() {
        Some(d) => d,
        None => {
            return Err(Error::DegenerateMap(
                "fixed-point polynomial vanished identically".into(),
            ))
        }
    };
    let mut points: Vec<(ProjPoint, usize)> = Vec::new();
    if phi_degree >= 1 {
        let clusters = poly_roots_with(&phi, &opts.roots)?;
        // Expanding f^n loses ~eps of relative coefficient accuracy to the
        // per-step rescale, which caps the root accuracy of Phi at
        // cond·eps regardless of how precisely Phi itself is solved. The
        // map evaluated pointwise has no such loss, so each point gets a
        // final Newton polish on G(z) = f^n(z) − z in its own chart.
        for (i, cl) in clusters.iter().enumerate() {
            let nearest = clusters
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, o)| {
                    chordal_distance(ProjPoint::Finite(cl.value), ProjPoint::Finite(o.value))
                })
                .fold(f64::MAX, f64::min);
            let guard = (0.45 * nearest).min(1e-2);
            let value = polish_periodic_point(f, n, cl.value, guard);
            points.push((ProjPoint::Finite(value), cl.multiplicity));
        }
        points.sort_by(|a, b| {
            let za = a.0.as_finite().unwrap();
            let zb = b.0.as_finite().unwrap();
            (za.re, za.im)
                .partial_cmp(&(zb.re, zb.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
    }
    // The 1/z-chart fixed-point polynomial is -(reversal of Phi at degree
    // d^n+1), so ord_0 of it — the multiplicity at Infinity — is exactly the
    // degree drop of Phi.
    let at_infinity = total - phi_degree;
    if at_infinity > 0 {
        points.push((ProjPoint::Infinity, at_infinity));
    }
    debug_assert_eq!(points.iter().map(|(_, m)| m).sum::<usize>(), total);
    Ok(PeriodicPointSet {
        period: n,
        points,
        total,
    })
}

/// Newton on the pointwise-iterated orbit: G(s) = (f^n(z) − z) expressed in
/// the chart of the starting point, with G' = multiplier − 1 from the chain
/// rule. Keeps the original value when the point is (near-)parabolic, when
/// the step leaves the guard radius (chordal), or when |G| fails to improve.
fn polish_periodic_point(f: &RationalMap, n: usize, z0: Complex64, guard: f64) -> Complex64 {
    let in_w = z0.norm() > 1.0;
    let to_coord = |z: Complex64| if in_w { z.inv() } else { z };
    let from_coord = |s: Complex64| if in_w { s.inv() } else { s };
    let g_of = |s: Complex64| -> Option<Complex64> {
        let z = from_coord(s);
        if !z.is_finite() {
            return None;
        }
        let ys = match f.apply_iterated(ProjPoint::Finite(z), n) {
            ProjPoint::Infinity if in_w => Complex64::new(0.0, 0.0),
            ProjPoint::Infinity => return None,
            ProjPoint::Finite(v) => to_coord(v),
        };
        if !ys.is_finite() {
            return None;
        }
        Some(ys - s)
    };

    let mut s = to_coord(z0);
    let Some(g0) = g_of(s) else { return z0 };
    let mut g = g0;
    for _ in 0..6 {
        let z = from_coord(s);
        if !z.is_finite() {
            return z0;
        }
        let lambda = multiplier_unchecked(f, ProjPoint::Finite(z), n);
        let denom = lambda - 1.0;
        if !lambda.is_finite() || denom.norm() < 1e-6 {
            break;
        }
        let step = g / denom;
        if !step.is_finite() {
            break;
        }
        let s_next = s - step;
        let Some(g_next) = g_of(s_next) else { break };
        s = s_next;
        g = g_next;
        if step.norm() < 1e-15 * (1.0 + s.norm()) {
            break;
        }
    }
    let z_new = from_coord(s);
    if z_new.is_finite()
        && g.norm() <= g0.norm()
        && chordal_distance(ProjPoint::Finite(z_new), ProjPoint::Finite(z0)) <= guard
    {
        z_new
    } else {
        z0
    }
}

/// The multiplier d(f^n)(x): chain-rule product of chart-local derivative
/// factors along the orbit. Validates that x is numerically periodic
/// (chordal distance of f^n(x) to x below 1e-6).
pub fn multiplier(f: &RationalMap, x: ProjPoint, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidInput("period must be >= 1".into()));
    }
    let back = f.apply_iterated(x, n);
    let dist = chordal_distance(back, x);
    if dist >= 1e-6 {
        return Err(Error::NotPeriodic(dist));
    }
    Ok(multiplier_unchecked(f, x, n))
}

/// The chain rule without the periodicity check (used on freshly computed
/// periodic points). Each step differentiates chart_out ∘ f ∘ chart_in⁻¹,
/// with charts picked by modulus (w = 1/z beyond the unit circle), so every
/// factor is finite; the product over a cycle is chart-independent.
pub(crate) fn multiplier_unchecked(f: &RationalMap, x: ProjPoint, n: usize) -> Complex64 {
    let num = f.num().clone();
    let den = f.den().clone();
    let num_rev = f.num_rev();
    let den_rev = f.den_rev();
    let num_d = num.derivative();
    let den_d = den.derivative();
    let num_rev_d = num_rev.derivative();
    let den_rev_d = den_rev.derivative();

    let chart_w = |p: ProjPoint| match p {
        ProjPoint::Infinity => true,
        ProjPoint::Finite(z) => z.norm() > 1.0,
    };
    let first_chart_w = chart_w(x);
    let mut acc = Complex64::new(1.0, 0.0);
    let mut cur = x;
    for step in 0..n {
        let next = f.apply(cur);
        let (src_w, s) = match cur {
            ProjPoint::Infinity => (true, Complex64::new(0.0, 0.0)),
            ProjPoint::Finite(z) if z.norm() > 1.0 => (true, z.inv()),
            ProjPoint::Finite(z) => (false, z),
        };
        // The factors only telescope to the cycle multiplier if the chart
        // closing the loop matches the chart the loop opened in; rounding at
        // |z| = 1 could otherwise leave a spurious chart-transition factor.
        let tgt_w = if step + 1 == n {
            first_chart_w
        } else {
            chart_w(next)
        };
        let (pn, pd, pnd, pdd) = if src_w {
            (&num_rev, &den_rev, &num_rev_d, &den_rev_d)
        } else {
            (&num, &den, &num_d, &den_d)
        };
        let nv = pn.eval(s);
        let dv = pd.eval(s);
        let wr = pnd.eval(s) * dv - nv * pdd.eval(s);
        let factor = if tgt_w {
            // d(1/f)/ds = -W/num²; num(s) ≠ 0 since f(s) leaves the unit disk
            -wr / (nv * nv)
        } else {
            wr / (dv * dv)
        };
        acc *= factor;
        cur = next;
    }
    acc
}

/// S_n: one multiplier per point of Fix(f^n), multiplicity respected,
/// sorted by (re, im).
pub fn multiplier_spectrum(f: &RationalMap, n: usize) -> Result<Vec<Complex64>> {
    multiplier_spectrum_with(f, n, &SpectrumOptions::default())
}

pub fn multiplier_spectrum_with(
    f: &RationalMap,
    n: usize,
    opts: &SpectrumOptions,
) -> Result<Vec<Complex64>> {
    let fix = fixed_points_with(f, n, opts)?;
    let mut out = Vec::with_capacity(fix.total);
    for (pt, mult) in &fix.points {
        let lambda = multiplier_unchecked(f, *pt, n);
        if !lambda.is_finite() {
            return Err(Error::NonFinite(format!(
                "multiplier at {pt} for period {n}"
            )));
        }
        for _ in 0..*mult {
            out.push(lambda);
        }
    }
    sort_complex(&mut out);
    Ok(out)
}

/// L_n: moduli of S_n, ascending.
pub fn length_spectrum(f: &RationalMap, n: usize) -> Result<Vec<f64>> {
    let mut l: Vec<f64> = multiplier_spectrum(f, n)?.iter().map(|z| z.norm()).collect();
    l.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(l)
}

/// Elementary symmetric values (e_1, ..., e_N) of a multiset, by incremental
/// expansion of prod (X - lambda). Permutation-invariant by construction.
/// Note: unscaled; for large multipliers prefer the scaled form stored in
/// SpectrumTable rows.
pub fn spectrum_coordinates(s: &[Complex64]) -> Vec<Complex64> {
    scaled_coordinates(s, 1.0)
}

/// e_k(S) / r^k computed without overflow as e_k applied to S/r.
fn scaled_coordinates(s: &[Complex64], r: f64) -> Vec<Complex64> {
    let n = s.len();
    let scaled: Vec<Complex64> = s.iter().map(|&z| z / r).collect();
    let poly = ComplexPoly::from_roots(&scaled);
    // monic expansion: coeff of X^{n-k} is (-1)^k e_k
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        out.push(poly.coeff(n - k) * sign);
    }
    out
}

/// The truncated spectrum morphism: S_n and scaled sigma coordinates for
/// 1 <= n <= n_max. Periods are computed in parallel.
pub fn tau(f: &RationalMap, n_max: usize) -> Result<SpectrumTable> {
    tau_with(f, n_max, &SpectrumOptions::default())
}

pub fn tau_with(f: &RationalMap, n_max: usize, opts: &SpectrumOptions) -> Result<SpectrumTable> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be >= 1".into()));
    }
    let rows: Result<Vec<PeriodRow>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let multipliers = multiplier_spectrum_with(f, n, opts)?;
            let scale = multipliers
                .iter()
                .map(|z| z.norm())
                .fold(1.0f64, f64::max);
            let sigma = scaled_coordinates(&multipliers, scale);
            Ok(PeriodRow {
                n,
                multipliers,
                sigma,
                scale,
            })
        })
        .collect();
    Ok(SpectrumTable {
        degree: f.degree(),
        n_max,
        periods: rows?,
    })
}

impl SpectrumTable {
    pub fn lengths(&self) -> LengthTable {
        LengthTable {
            degree: self.degree,
            n_max: self.n_max,
            periods: self
                .periods
                .iter()
                .map(|row| {
                    let mut l: Vec<f64> = row.multipliers.iter().map(|z| z.norm()).collect();
                    l.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
                    (row.n, l)
                })
                .collect(),
        }
    }
}

/// Compare two spectrum tables in sigma coordinates. Rows are first brought
/// to a common scale r = max(r_A, r_B); the distance is
/// max_{n,k} |sigma_k^A - sigma_k^B| / (1 + |sigma_k^A| + |sigma_k^B|),
/// and equality means distance < 1e-6.
pub fn compare_spectra(a: &SpectrumTable, b: &SpectrumTable) -> Result<(f64, bool)> {
    compare_spectra_with_tol(a, b, 1e-6)
}

pub fn compare_spectra_with_tol(
    a: &SpectrumTable,
    b: &SpectrumTable,
    tol: f64,
) -> Result<(f64, bool)> {
    if a.degree != b.degree || a.n_max != b.n_max {
        return Err(Error::ShapeMismatch(format!(
            "cannot compare (degree {}, n_max {}) against (degree {}, n_max {})",
            a.degree, a.n_max, b.degree, b.n_max
        )));
    }
    let mut distance = 0.0f64;
    for (ra, rb) in a.periods.iter().zip(b.periods.iter()) {
        if ra.sigma.len() != rb.sigma.len() {
            return Err(Error::ShapeMismatch(format!(
                "period {} rows have {} vs {} coordinates",
                ra.n,
                ra.sigma.len(),
                rb.sigma.len()
            )));
        }
        let r = ra.scale.max(rb.scale);
        let (fa, fb) = (ra.scale / r, rb.scale / r);
        let mut pow_a = 1.0f64;
        let mut pow_b = 1.0f64;
        for k in 0..ra.sigma.len() {
            pow_a *= fa;
            pow_b *= fb;
            let sa = ra.sigma[k] * pow_a;
            let sb = rb.sigma[k] * pow_b;
            let d = (sa - sb).norm() / (1.0 + sa.norm() + sb.norm());
            distance = distance.max(d);
        }
    }
    Ok((distance, distance < tol))
}

/// Holomorphic fixed-point index identity: sum over Fix(f) of 1/(1-lambda)
/// equals 1 for any rational map with no multiplier at 1. Returns the sum;
/// errs with NearParabolic if some |lambda - 1| < 1e-3 (the identity's
/// terms blow up there and the check is meaningless).
pub fn index_sum_check(f: &RationalMap) -> Result<Complex64> {
    let fix = fixed_points(f, 1)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (pt, mult) in &fix.points {
        let lambda = multiplier_unchecked(f, *pt, 1);
        let gap = (lambda - Complex64::new(1.0, 0.0)).norm();
        if gap < 1e-3 {
            return Err(Error::NearParabolic(gap));
        }
        sum += Complex64::new(*mult as f64, 0.0) / (Complex64::new(1.0, 0.0) - lambda);
    }
    Ok(sum)
}

pub(crate) fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmap::MobiusTransform;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_map(coeffs: &[f64]) -> RationalMap {
        RationalMap::from_polynomial(ComplexPoly::from_real(coeffs)).unwrap()
    }

    fn z_squared() -> RationalMap {
        poly_map(&[0.0, 0.0, 1.0])
    }

    fn contains_point(set: &PeriodicPointSet, p: ProjPoint, tol: f64) -> bool {
        set.points.iter().any(|(q, _)| chordal_distance(p, *q) < tol)
    }

    #[test]
    fn fixed_points_of_power_map() {
        let f = z_squared();
        let fix1 = fixed_points(&f, 1).unwrap();
        assert_eq!(fix1.total, 3);
        for p in [
            ProjPoint::finite(0.0, 0.0),
            ProjPoint::finite(1.0, 0.0),
            ProjPoint::Infinity,
        ] {
            assert!(contains_point(&fix1, p, 1e-10));
        }

        let fix2 = fixed_points(&f, 2).unwrap();
        assert_eq!(fix2.total, 5);
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        for p in [
            ProjPoint::finite(0.0, 0.0),
            ProjPoint::finite(1.0, 0.0),
            ProjPoint::Finite(omega),
            ProjPoint::Finite(omega * omega),
            ProjPoint::Infinity,
        ] {
            assert!(contains_point(&fix2, p, 1e-10));
        }
    }

    #[test]
    fn fixed_points_of_basilica_period_two() {
        // z^2 - 1: z^4 - 2z^2 - z = z(z+1)(z^2 - z - 1)
        let f = poly_map(&[-1.0, 0.0, 1.0]);
        let fix = fixed_points(&f, 2).unwrap();
        assert_eq!(fix.total, 5);
        let s5 = 5f64.sqrt();
        for p in [
            ProjPoint::finite(0.0, 0.0),
            ProjPoint::finite(-1.0, 0.0),
            ProjPoint::finite((1.0 + s5) / 2.0, 0.0),
            ProjPoint::finite((1.0 - s5) / 2.0, 0.0),
            ProjPoint::Infinity,
        ] {
            assert!(contains_point(&fix, p, 1e-9));
        }
    }

    #[test]
    fn parabolic_infinity_has_multiplicity_three() {
        // z + 1/z fixes only Infinity, with multiplicity 3
        let f = RationalMap::new(
            ComplexPoly::from_real(&[1.0, 0.0, 1.0]),
            ComplexPoly::from_real(&[0.0, 1.0]),
        )
        .unwrap();
        let fix = fixed_points(&f, 1).unwrap();
        assert_eq!(fix.total, 3);
        assert_eq!(fix.points.len(), 1);
        assert!(fix.points[0].0.is_infinity());
        assert_eq!(fix.points[0].1, 3);
        // and its multiplier is 1 (parabolic)
        let lambda = multiplier(&f, ProjPoint::Infinity, 1).unwrap();
        assert!((lambda - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn multiplier_examples() {
        let f = z_squared();
        let l1 = multiplier(&f, ProjPoint::finite(1.0, 0.0), 1).unwrap();
        assert!((l1 - c(2.0, 0.0)).norm() < 1e-12);
        let linf = multiplier(&f, ProjPoint::Infinity, 1).unwrap();
        assert!(linf.norm() < 1e-12);

        // superattracting 2-cycle {0, -1} of z^2 - 1
        let g = poly_map(&[-1.0, 0.0, 1.0]);
        let l = multiplier(&g, ProjPoint::finite(0.0, 0.0), 2).unwrap();
        assert!(l.norm() < 1e-12);

        // not periodic
        let err = multiplier(&f, ProjPoint::finite(0.5, 0.0), 1);
        assert!(matches!(err, Err(Error::NotPeriodic(_))));
    }

    #[test]
    fn multiplier_chain_rule_matches_formal_iterate() {
        let g = RationalMap::new(
            ComplexPoly::new(vec![c(0.2, 0.1), c(0.0, 0.0), c(1.0, 0.0)]),
            ComplexPoly::new(vec![c(1.0, 0.0), c(-0.3, 0.2)]),
        )
        .unwrap();
        for n in [1usize, 2, 3] {
            let fix = fixed_points(&g, n).unwrap();
            let gn = g.iterate(n).unwrap();
            for (pt, _) in &fix.points {
                let a = multiplier_unchecked(&g, *pt, n);
                let b = multiplier_unchecked(&gn, *pt, 1);
                assert!(
                    (a - b).norm() <= 1e-8 * (1.0 + a.norm().max(b.norm())),
                    "n={n} pt={pt}: chain {a} vs direct {b}"
                );
            }
        }
    }

    #[test]
    fn power_map_spectrum_closed_form() {
        for d in [2usize, 3] {
            let mut coeffs = vec![0.0; d + 1];
            coeffs[d] = 1.0;
            let f = poly_map(&coeffs);
            for n in 1..=3usize {
                let s = multiplier_spectrum(&f, n).unwrap();
                let dn = (d as f64).powi(n as i32);
                let expected_count = d.pow(n as u32) + 1;
                assert_eq!(s.len(), expected_count);
                let zeros = s.iter().filter(|z| z.norm() < 1e-8).count();
                assert_eq!(zeros, 2, "0 and infinity are superattracting");
                for z in s.iter().filter(|z| z.norm() >= 1e-8) {
                    assert!(
                        (z - c(dn, 0.0)).norm() < 1e-8 * dn,
                        "expected {dn}, got {z}"
                    );
                }
            }
        }
    }

    #[test]
    fn basilica_and_airplane_spectra() {
        // S_1(z^2 - 1) = {1 + sqrt5, 1 - sqrt5, 0}
        let f = poly_map(&[-1.0, 0.0, 1.0]);
        let s = multiplier_spectrum(&f, 1).unwrap();
        let s5 = 5f64.sqrt();
        let mut expected = vec![c(1.0 + s5, 0.0), c(1.0 - s5, 0.0), c(0.0, 0.0)];
        sort_complex(&mut expected);
        assert_eq!(s.len(), 3);
        for (a, b) in s.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }

        let l = length_spectrum(&f, 1).unwrap();
        let mut lengths_expected = [0.0, s5 - 1.0, s5 + 1.0];
        lengths_expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in l.iter().zip(lengths_expected.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_coordinate_examples() {
        let e = spectrum_coordinates(&[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        assert!((e[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!(e[1].norm() < 1e-12);
        assert!(e[2].norm() < 1e-12);

        let e = spectrum_coordinates(&[c(1.0, 0.0); 3]);
        assert!((e[0] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((e[1] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((e[2] - c(1.0, 0.0)).norm() < 1e-12);

        let s5 = 5f64.sqrt();
        let e = spectrum_coordinates(&[c(1.0 + s5, 0.0), c(1.0 - s5, 0.0), c(0.0, 0.0)]);
        assert!((e[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((e[1] - c(-4.0, 0.0)).norm() < 1e-12);
        assert!(e[2].norm() < 1e-12);
    }

    #[test]
    fn tau_tables_and_sigma_consistency() {
        let f = z_squared();
        let t = tau(&f, 2).unwrap();
        assert_eq!(t.degree, 2);
        assert_eq!(t.periods.len(), 2);
        let s1 = &t.periods[0];
        assert_eq!(s1.multipliers.len(), 3);
        // S_2 = {0, 0, 4, 4, 4}
        let s2 = &t.periods[1];
        assert_eq!(s2.multipliers.len(), 5);
        let fours = s2
            .multipliers
            .iter()
            .filter(|z| (*z - c(4.0, 0.0)).norm() < 1e-8)
            .count();
        assert_eq!(fours, 3);

        // sigma recomputable from S_n at the stored scale
        for row in &t.periods {
            let again = super::scaled_coordinates(&row.multipliers, row.scale);
            for (a, b) in row.sigma.iter().zip(again.iter()) {
                assert!((a - b).norm() <= 1e-8 * (1.0 + a.norm()));
            }
        }

        // S_1(z^2 - 2) = {4, -2, 0}
        let g = poly_map(&[-2.0, 0.0, 1.0]);
        let t = tau(&g, 1).unwrap();
        let mut expected = vec![c(4.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)];
        sort_complex(&mut expected);
        for (a, b) in t.periods[0].multipliers.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn compare_spectra_examples() {
        let f = z_squared();
        let ta = tau(&f, 2).unwrap();
        let (d, eq) = compare_spectra(&ta, &ta).unwrap();
        assert_eq!(d, 0.0);
        assert!(eq);

        let g = poly_map(&[-1.0, 0.0, 1.0]);
        let tb = tau(&g, 1).unwrap();
        let ta1 = tau(&f, 1).unwrap();
        let (d, eq) = compare_spectra(&ta1, &tb).unwrap();
        assert!(d > 1e-2, "distance {d}");
        assert!(!eq);

        // shape mismatch
        assert!(matches!(
            compare_spectra(&ta, &tb),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn tau_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let disk = |rng: &mut ChaCha8Rng| loop {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            if re * re + im * im <= 1.0 {
                return c(re, im);
            }
        };
        let mut tested = 0;
        while tested < 8 {
            let d = 2 + (tested % 2);
            let num = ComplexPoly::new((0..=d).map(|_| disk(&mut rng)).collect());
            let den = ComplexPoly::new((0..=d).map(|_| disk(&mut rng)).collect());
            let f = match RationalMap::new(num, den) {
                Ok(f) if f.degree() == d => f,
                _ => continue,
            };
            let phi = match MobiusTransform::new(
                disk(&mut rng) + c(1.0, 0.0),
                disk(&mut rng),
                disk(&mut rng),
                disk(&mut rng) + c(1.0, 0.0),
            ) {
                Ok(m) => m,
                Err(_) => continue,
            };
            let g = match f.conjugate(&phi) {
                Ok(g) => g,
                Err(_) => continue,
            };
            let ta = tau(&f, 2).unwrap();
            let tb = tau(&g, 2).unwrap();
            let (dist, eq) = compare_spectra(&ta, &tb).unwrap();
            assert!(eq, "conjugation changed tau by {dist:.3e}");
            tested += 1;
        }
    }

    #[test]
    fn index_sum_examples() {
        let f = z_squared();
        let s = index_sum_check(&f).unwrap();
        assert!((s - c(1.0, 0.0)).norm() < 1e-10);

        let g = poly_map(&[-1.0, 0.0, 1.0]);
        let s = index_sum_check(&g).unwrap();
        assert!((s - c(1.0, 0.0)).norm() < 1e-10);

        // parabolic: z + 1/z has multiplier exactly 1 at infinity
        let p = RationalMap::new(
            ComplexPoly::from_real(&[1.0, 0.0, 1.0]),
            ComplexPoly::from_real(&[0.0, 1.0]),
        )
        .unwrap();
        assert!(matches!(index_sum_check(&p), Err(Error::NearParabolic(_))));
    }

    #[test]
    fn index_sum_for_random_cubics() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let disk = |rng: &mut ChaCha8Rng| loop {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            if re * re + im * im <= 1.0 {
                return c(re, im);
            }
        };
        let mut tested = 0;
        while tested < 10 {
            let num = ComplexPoly::new((0..=3).map(|_| disk(&mut rng)).collect());
            let den = ComplexPoly::new((0..=3).map(|_| disk(&mut rng)).collect());
            let f = match RationalMap::new(num, den) {
                Ok(f) if f.degree() == 3 => f,
                _ => continue,
            };
            match index_sum_check(&f) {
                Ok(s) => {
                    assert!(
                        (s - c(1.0, 0.0)).norm() < 1e-6,
                        "index sum {s} for map {}",
                        serde_json::to_string(&f).unwrap()
                    );
                    tested += 1;
                }
                Err(Error::NearParabolic(_)) => continue,
                Err(e) => panic!("unexpected: {e}"),
            }
        }
    }

    #[test]
    fn counts_for_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let disk = |rng: &mut ChaCha8Rng| loop {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            if re * re + im * im <= 1.0 {
                return c(re, im);
            }
        };
        for d in [2usize, 3] {
            let mut tested = 0;
            while tested < 3 {
                let num = ComplexPoly::new((0..=d).map(|_| disk(&mut rng)).collect());
                let den = ComplexPoly::new((0..=d).map(|_| disk(&mut rng)).collect());
                let f = match RationalMap::new(num, den) {
                    Ok(f) if f.degree() == d => f,
                    _ => continue,
                };
                for n in 1..=4usize {
                    let fix = match fixed_points(&f, n) {
                        Ok(fix) => fix,
                        Err(Error::NonConvergence(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    assert_eq!(fix.total, d.pow(n as u32) + 1);
                    assert_eq!(
                        fix.points.iter().map(|(_, m)| m).sum::<usize>(),
                        fix.total
                    );
                }
                tested += 1;
            }
        }
    }

    #[test]
    fn periodic_nesting() {
        // Fix(f) ⊆ Fix(f^2) ⊆ Fix(f^4) as multisets (within clustering tol)
        let g = RationalMap::new(
            ComplexPoly::new(vec![c(0.3, -0.2), c(0.1, 0.0), c(1.0, 0.0)]),
            ComplexPoly::new(vec![c(1.0, 0.0), c(0.4, 0.1)]),
        )
        .unwrap();
        let f1 = fixed_points(&g, 1).unwrap();
        let f2 = fixed_points(&g, 2).unwrap();
        let f4 = fixed_points(&g, 4).unwrap();
        for (small, large) in [(&f1, &f2), (&f2, &f4), (&f1, &f4)] {
            for (p, _) in &small.points {
                assert!(
                    large
                        .points
                        .iter()
                        .any(|(q, _)| chordal_distance(*p, *q) < 1e-6),
                    "{p} missing from Fix(f^{})",
                    large.period
                );
            }
        }
    }

    #[test]
    fn degree_cap_propagates() {
        let f = z_squared();
        let opts = SpectrumOptions {
            degree_cap: 16,
            ..SpectrumOptions::default()
        };
        assert!(matches!(
            fixed_points_with(&f, 5, &opts),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn spectrum_table_json_round_trip() {
        let t = tau(&z_squared(), 2).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains(r#""degree":2"#));
        assert!(s.contains(r#""scale":"#));
        let back: SpectrumTable = serde_json::from_str(&s).unwrap();
        let (d, eq) = compare_spectra(&t, &back).unwrap();
        assert!(eq, "round trip distance {d}");
        let lengths = t.lengths();
        assert_eq!(lengths.periods[0].1.len(), 3);
        assert_eq!(lengths.periods[1].1.len(), 5);
    }
}

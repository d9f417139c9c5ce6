//! Similarity frames: rescaled snapshots of a marked orbit around a base
//! parameter. For each period n the orbit value xi_n(t) is sampled on a
//! square tau-grid through t = t0 + rho_n * window_radius * tau with
//! rho_n = 1/|d xi_n / dt (t0)|, so consecutive frames land on comparable
//! scales; near Misiurewicz parameters they converge to a limit shape.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{family_eval, marked_orbit, FamilySpec};
use crate::error::{Error, Result};
use crate::jsonc;
use crate::ratmap::{chordal_distance, ProjPoint};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimilarityFrame {
    pub n: usize,
    /// Rescaling factor 1/|d xi_n/dt| at the base parameter.
    pub rho: f64,
    /// samples x samples grid, row-major over the tau square [-1,1]^2.
    pub values: Vec<ProjPoint>,
    /// Sup chordal distance of the frame from its center value.
    pub spread: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimilarityReport {
    #[serde(with = "jsonc::cpair")]
    pub t0: Complex64,
    pub window_radius: f64,
    pub samples: usize,
    pub frames: Vec<SimilarityFrame>,
    /// Periods that produced no frame, with the reason.
    pub skipped: Vec<(usize, String)>,
}

fn xi(family: &FamilySpec, marked: &str, t: Complex64, n: usize) -> Result<ProjPoint> {
    Ok(*marked_orbit(family, marked, t, n)?.last().unwrap())
}

/// d(chart . xi_n)/dt at t0 by Richardson-extrapolated central differences
/// over a ladder of steps, keeping the pair that agrees best. The chart is
/// the affine coordinate, or 1/z when the base value sits near infinity
/// (the rescaling only needs a magnitude in some coordinate).
fn xi_derivative(
    family: &FamilySpec,
    marked: &str,
    t0: Complex64,
    n: usize,
) -> Result<Complex64> {
    let base = xi(family, marked, t0, n)?;
    let inverted = match base {
        ProjPoint::Infinity => true,
        ProjPoint::Finite(z) => z.norm() > 1e6,
    };
    let chart = |p: ProjPoint| -> Option<Complex64> {
        match (inverted, p) {
            (false, ProjPoint::Finite(z)) => Some(z),
            (false, ProjPoint::Infinity) => None,
            (true, ProjPoint::Infinity) => Some(Complex64::new(0.0, 0.0)),
            (true, ProjPoint::Finite(z)) => {
                if z.norm() > 0.0 {
                    Some(z.inv())
                } else {
                    None
                }
            }
        }
    };
    let central = |h: f64| -> Option<Complex64> {
        let hi = chart(xi(family, marked, t0 + h, n).ok()?)?;
        let lo = chart(xi(family, marked, t0 - h, n).ok()?)?;
        Some((hi - lo) / (2.0 * h))
    };

    let scale = 1.0 + t0.norm();
    let mut best: Option<(f64, Complex64)> = None;
    for h0 in [1e-5, 1e-6, 1e-7, 1e-8, 1e-9] {
        let h = h0 * scale;
        let (Some(d1), Some(d2)) = (central(h), central(0.5 * h)) else {
            continue;
        };
        let err = (d1 - d2).norm();
        let extrap = (4.0 * d2 - d1) / 3.0;
        if best.as_ref().map_or(true, |(e, _)| err < *e) {
            best = Some((err, extrap));
        }
    }
    best.map(|(_, d)| d).ok_or_else(|| {
        Error::InvalidInput(format!(
            "derivative stencil of the marked orbit failed near t0 for period {n}"
        ))
    })
}

/// Rescaled frames of the marked orbit for each requested period. Frames
/// whose rescaling is unavailable (tiny derivative, degenerate parameters
/// inside the window) are skipped and reported, not fatal.
pub fn similarity_frames(
    family: &FamilySpec,
    marked: &str,
    t0: Complex64,
    periods: &[usize],
    window_radius: f64,
    samples: usize,
) -> Result<SimilarityReport> {
    if !(window_radius > 0.0) || !window_radius.is_finite() {
        return Err(Error::InvalidInput("window radius must be positive".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidInput(
            "similarity frames need at least a 2x2 grid".into(),
        ));
    }
    if periods.iter().any(|&n| n == 0) {
        return Err(Error::InvalidInput("frame periods must be >= 1".into()));
    }
    family_eval(family, t0)?;
    family.marked_point(marked)?;

    let mut frames = Vec::new();
    let mut skipped = Vec::new();
    'per_n: for &n in periods {
        let deriv = match xi_derivative(family, marked, t0, n) {
            Ok(d) => d,
            Err(e) => {
                skipped.push((n, e.to_string()));
                continue;
            }
        };
        let floor = 1e-12 * 1.05_f64.powi(n as i32);
        let magnitude = deriv.norm();
        if magnitude < floor {
            let e = Error::DerivativeTooSmall {
                period: n,
                magnitude,
                floor,
            };
            skipped.push((n, e.to_string()));
            continue;
        }
        let rho = 1.0 / magnitude;

        let center = match xi(family, marked, t0, n) {
            Ok(p) => p,
            Err(e) => {
                skipped.push((n, e.to_string()));
                continue;
            }
        };
        let mut values = Vec::with_capacity(samples * samples);
        let mut spread = 0.0_f64;
        for j in 0..samples {
            let v = -1.0 + 2.0 * j as f64 / (samples - 1) as f64;
            for i in 0..samples {
                let u = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
                let t = t0 + rho * window_radius * Complex64::new(u, v);
                match xi(family, marked, t, n) {
                    Ok(p) => {
                        spread = spread.max(chordal_distance(p, center));
                        values.push(p);
                    }
                    Err(e) => {
                        skipped.push((n, format!("grid point failed: {e}")));
                        continue 'per_n;
                    }
                }
            }
        }
        frames.push(SimilarityFrame {
            n,
            rho,
            values,
            spread,
        });
    }
    Ok(SimilarityReport {
        t0,
        window_radius,
        samples,
        frames,
        skipped,
    })
}

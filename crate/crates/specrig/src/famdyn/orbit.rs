//! Orbit classification and the critical-orbit predicates built on it:
//! postcritical finiteness and disjoint superattracting cycles.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ratmap::{chordal_distance, ProjPoint, RationalMap};
use crate::spectrum;

/// Escape certification: modulus exceeding this bound at the end of at
/// least [`ESCAPE_GROWTH_STEPS`] consecutive strictly-growing steps. The
/// growth requirement keeps one-step excursions past a pole from being
/// mistaken for escape.
const ESCAPE_BOUND: f64 = 1e8;
const ESCAPE_GROWTH_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum OrbitStatus {
    Periodic { preperiod: usize, period: usize },
    Escaping,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitClassification {
    pub status: OrbitStatus,
    /// Orbit indices certifying the verdict: `[m, m + p]` for a periodic
    /// orbit, the growth window for an escaping one, empty for undecided.
    pub witness: Vec<usize>,
}

impl OrbitClassification {
    pub fn is_periodic(&self) -> bool {
        matches!(self.status, OrbitStatus::Periodic { .. })
    }
}

fn modulus(p: ProjPoint) -> f64 {
    match p {
        ProjPoint::Infinity => f64::INFINITY,
        ProjPoint::Finite(z) => z.norm(),
    }
}

/// Classifies a finite orbit segment.
///
/// Escape is checked first (an orbit that overflows to the point at
/// infinity would otherwise read as "periodic at ∞"): the verdict is
/// `Escaping` at the first index whose modulus exceeds 1e8 after three
/// consecutive strictly-growing steps. Otherwise the lexicographically
/// minimal (preperiod m, period p) with chordal recurrence
/// d(orbit[m+p], orbit[m]) < tol wins, and orbits certifying neither way
/// are `Undecided`.
pub fn classify_orbit(orbit: &[ProjPoint], tol: f64) -> OrbitClassification {
    assert!(!orbit.is_empty(), "classify_orbit needs a nonempty orbit");

    let mut growth_run = 0usize;
    for j in 1..orbit.len() {
        let prev = modulus(orbit[j - 1]);
        let cur = modulus(orbit[j]);
        if cur > prev {
            growth_run += 1;
        } else {
            growth_run = 0;
        }
        if cur > ESCAPE_BOUND && growth_run >= ESCAPE_GROWTH_STEPS {
            return OrbitClassification {
                status: OrbitStatus::Escaping,
                witness: (j - ESCAPE_GROWTH_STEPS..=j).collect(),
            };
        }
    }

    for m in 0..orbit.len() {
        for p in 1..orbit.len() - m {
            if chordal_distance(orbit[m + p], orbit[m]) < tol {
                return OrbitClassification {
                    status: OrbitStatus::Periodic {
                        preperiod: m,
                        period: p,
                    },
                    witness: vec![m, m + p],
                };
            }
        }
    }

    OrbitClassification {
        status: OrbitStatus::Undecided,
        witness: Vec::new(),
    }
}

pub(crate) fn orbit_of(f: &RationalMap, start: ProjPoint, n: usize) -> Vec<ProjPoint> {
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(start);
    let mut cur = start;
    for _ in 0..n {
        cur = f.apply(cur);
        orbit.push(cur);
    }
    orbit
}

/// Is every critical orbit finite? Returns the verdict plus the per-
/// critical-point classifications (one entry per distinct critical point).
/// Undecided orbits make the verdict false — never true by default.
pub fn is_pcf(
    f: &RationalMap,
    max_iters: usize,
    tol: f64,
) -> Result<(bool, Vec<(ProjPoint, OrbitClassification)>)> {
    let crits = f.critical_points()?;
    let mut report = Vec::with_capacity(crits.len());
    let mut all_finite = true;
    for (c, _mult) in crits {
        let class = classify_orbit(&orbit_of(f, c, max_iters), tol);
        all_finite &= class.is_periodic();
        report.push((c, class));
    }
    Ok((all_finite, report))
}

/// Does f have 2d−2 distinct superattracting cycles? True iff the critical
/// points are all simple, each is itself periodic (so its cycle is
/// superattracting), and no two share a cycle.
pub fn is_hyperbolic_disjoint(f: &RationalMap, max_iters: usize) -> Result<bool> {
    const TOL: f64 = 1e-9;
    let d = f.degree();
    if d < 2 {
        return Ok(false);
    }
    let crits = f.critical_points()?;
    if crits.iter().any(|&(_, mult)| mult > 1) {
        return Ok(false);
    }
    if crits.len() != 2 * d - 2 {
        return Ok(false);
    }

    let mut cycles: Vec<Vec<ProjPoint>> = Vec::with_capacity(crits.len());
    for &(c, _) in &crits {
        let orbit = orbit_of(f, c, max_iters);
        let class = classify_orbit(&orbit, TOL);
        let period = match class.status {
            OrbitStatus::Periodic {
                preperiod: 0,
                period,
            } => period,
            _ => return Ok(false),
        };
        // Superattracting: the multiplier along the cycle vanishes, since
        // the critical point sits on it. Checked rather than assumed.
        let lambda = spectrum::multiplier(f, c, period)?;
        if lambda.norm() > 1e-3 {
            return Ok(false);
        }
        cycles.push(orbit[..period].to_vec());
    }

    for i in 0..cycles.len() {
        for j in (i + 1)..cycles.len() {
            let overlap = cycles[i].iter().any(|&p| {
                cycles[j]
                    .iter()
                    .any(|&q| chordal_distance(p, q) < 1e-6)
            });
            if overlap {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

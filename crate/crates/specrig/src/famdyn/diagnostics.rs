//! Orbit diagnostics behind the rigidity-side estimates: Collet-Eckmann
//! expansion along a postcritical orbit, polynomial recurrence of the
//! critical orbit, separation statistics of a pair of orbits, and a
//! sufficient-conditions probe for a pair being dynamically related.

use serde::{Deserialize, Serialize};

use super::orbit::orbit_of;
use crate::error::{Error, Result};
use crate::ratmap::{chordal_distance, ProjPoint, RationalMap};

/// Least-squares slope of log|df^n(f^N(c))| against n over the window
/// n in [n_max/2, n_max], using the spherical derivative along the orbit.
/// The slope estimates log(lambda) in the Collet-Eckmann lower bound.
pub fn ce_exponent_estimate(
    f: &RationalMap,
    c: ProjPoint,
    n_skip: usize,
    n_max: usize,
) -> Result<f64> {
    if n_max < 2 {
        return Err(Error::InvalidInput("ce estimate needs n_max >= 2".into()));
    }
    let orbit = orbit_of(f, c, n_skip + n_max);
    // Cumulative log-derivatives L_n = sum_{j<n} log f#(orbit[N+j]).
    let mut cumulative = Vec::with_capacity(n_max + 1);
    cumulative.push(0.0);
    let mut acc = 0.0;
    for j in 0..n_max {
        let fs = f.spherical_derivative(orbit[n_skip + j]);
        if !(fs > 1e-300) {
            return Err(Error::DerivativeVanishes(n_skip + j));
        }
        acc += fs.ln();
        cumulative.push(acc);
    }
    let lo = (n_max / 2).max(1);
    let ns: Vec<f64> = (lo..=n_max).map(|n| n as f64).collect();
    let mean_n = ns.iter().sum::<f64>() / ns.len() as f64;
    let mean_l = (lo..=n_max).map(|n| cumulative[n]).sum::<f64>() / ns.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for n in lo..=n_max {
        let dn = n as f64 - mean_n;
        num += dn * (cumulative[n] - mean_l);
        den += dn * dn;
    }
    if den == 0.0 {
        return Err(Error::InvalidInput(
            "ce estimate window has a single point".into(),
        ));
    }
    Ok(num / den)
}

/// Smallest s with d(f^k(c), Crit(f)) >= k^{-s} over k in [2, n_max],
/// i.e. max of (-log d_k)/(log k), chordal metric. An exact collision with
/// a critical point returns the +infinity sentinel.
pub fn recurrence_exponent_estimate(
    f: &RationalMap,
    c: ProjPoint,
    n_max: usize,
) -> Result<f64> {
    if n_max < 2 {
        return Err(Error::InvalidInput(
            "recurrence estimate needs n_max >= 2".into(),
        ));
    }
    let crits = f.critical_points()?;
    let orbit = orbit_of(f, c, n_max);
    let mut s = f64::NEG_INFINITY;
    for (k, x) in orbit.iter().enumerate().skip(1) {
        let dk = crits
            .iter()
            .map(|(cr, _)| chordal_distance(*x, *cr))
            .fold(f64::INFINITY, f64::min);
        if dk < 1e-15 {
            return Ok(f64::INFINITY);
        }
        if k >= 2 {
            s = s.max(-dk.ln() / (k as f64).ln());
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SeparationStats {
    /// Fraction of steps k < n with chordal d(f^k(a), f^k(b)) >= delta.
    pub fs_frequency: f64,
    /// Mean of max(-log d_k, 0); +infinity if the orbits ever coincide.
    pub as_average: f64,
}

pub fn separation_statistics(
    f: &RationalMap,
    a: ProjPoint,
    b: ProjPoint,
    n: usize,
    delta: f64,
) -> Result<SeparationStats> {
    if n == 0 {
        return Err(Error::InvalidInput("separation needs n >= 1".into()));
    }
    let oa = orbit_of(f, a, n - 1);
    let ob = orbit_of(f, b, n - 1);
    let mut hits = 0usize;
    let mut log_sum = 0.0;
    for k in 0..n {
        let dk = chordal_distance(oa[k], ob[k]);
        if dk >= delta {
            hits += 1;
        }
        log_sum += (-dk.ln()).max(0.0);
    }
    Ok(SeparationStats {
        fs_frequency: hits as f64 / n as f64,
        as_average: log_sum / n as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum RelationReason {
    /// f^m(a) = f^n(b) within tolerance.
    Collision { m: usize, n: usize },
    BothPreperiodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum RelationVerdict {
    Related { reason: RelationReason },
    Unknown,
}

/// Certified landing: the orbit reaches a (numerically) exact cycle in one
/// step rather than converging into it. Demanding a cliff — a near-zero
/// return distance preceded by an O(1) one — keeps points that merely sit
/// in an attracting basin from being certified preperiodic.
fn lands_exactly(orbit: &[ProjPoint], tol: f64) -> bool {
    let len = orbit.len();
    for m in 0..len {
        for p in 1..len - m {
            if chordal_distance(orbit[m + p], orbit[m]) < tol {
                if m == 0 || chordal_distance(orbit[m + p - 1], orbit[m - 1]) > 1e-3 {
                    return true;
                }
            }
        }
    }
    false
}

/// Checks the two certifiable sufficient reasons for a and b to be
/// dynamically related: an orbit collision f^m(a) = f^n(b) with
/// m, n <= bound, or both orbits landing exactly on cycles. Never claims
/// "not related".
pub fn dynamically_related_probe(
    f: &RationalMap,
    a: ProjPoint,
    b: ProjPoint,
    bound: usize,
) -> Result<RelationVerdict> {
    const TOL: f64 = 1e-9;
    let oa = orbit_of(f, a, bound);
    let ob = orbit_of(f, b, bound);
    for m in 0..=bound {
        for n in 0..=bound {
            if chordal_distance(oa[m], ob[n]) < TOL {
                // Same cliff rule as for landings: a genuine merge has
                // far-apart predecessors, orbits drifting into a shared
                // attractor do not.
                if m == 0 || n == 0 || chordal_distance(oa[m - 1], ob[n - 1]) > 1e-3 {
                    return Ok(RelationVerdict::Related {
                        reason: RelationReason::Collision { m, n },
                    });
                }
            }
        }
    }
    if lands_exactly(&oa, TOL) && lands_exactly(&ob, TOL) {
        return Ok(RelationVerdict::Related {
            reason: RelationReason::BothPreperiodic,
        });
    }
    Ok(RelationVerdict::Unknown)
}

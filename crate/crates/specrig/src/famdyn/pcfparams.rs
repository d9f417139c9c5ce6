//! Postcritically finite parameters of the unicritical family z^d + t:
//! centers (the critical orbit is periodic) and Misiurewicz parameters
//! (strictly preperiodic critical orbit).
//!
//! The defining polynomials P_n(t) (P_1 = t, P_{k+1} = P_k^d + t) have
//! degree d^{n-1} and coefficients far beyond f64 range well before the
//! degree cap bites, so they are never expanded. Instead the Aberth engine
//! runs against the orbit recursion directly: each evaluation walks the
//! recurrence carrying the value, its t-derivative, and a running noise
//! scale that turns |P_n(t)| into a relative backward error. Lower-order
//! solutions (shorter periods, shorter preperiods) are solved the same way
//! and subtracted.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_ROOT_CAP;
use crate::cpoly::roots::{system_roots, AberthSystem, SystemEval};
use crate::cpoly::RootOptions;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PcfKind {
    /// f^period(0) = 0 with this exact period.
    Center { period: usize },
    /// f^{preperiod+period}(0) = f^preperiod(0), preperiod >= 1 exact.
    Misiurewicz { preperiod: usize, period: usize },
}

struct OrbitSystem {
    d: usize,
    /// 0 for centers.
    preperiod: usize,
    total: usize,
    degree: usize,
    /// |P_k| beyond this and the orbit is declared escaping for the solver;
    /// chosen so one further step cannot overflow the noise recurrence.
    escape_cap: f64,
}

impl OrbitSystem {
    fn new(d: usize, preperiod: usize, period: usize) -> Result<Self> {
        let total = preperiod + period;
        let degree = d
            .checked_pow((total - 1) as u32)
            .ok_or(Error::DegreeCapExceeded {
                needed: usize::MAX,
                cap: DEFAULT_ROOT_CAP,
            })?;
        if degree > DEFAULT_ROOT_CAP {
            return Err(Error::DegreeCapExceeded {
                needed: degree,
                cap: DEFAULT_ROOT_CAP,
            });
        }
        let escape_cap = 10f64.powf((150.0 / d as f64).min(30.0));
        Ok(OrbitSystem {
            d,
            preperiod,
            total,
            degree,
            escape_cap,
        })
    }
}

impl AberthSystem for OrbitSystem {
    fn degree(&self) -> usize {
        self.degree
    }

    fn initial_radius(&self) -> f64 {
        2.5
    }

    fn eval(&self, t: Complex64) -> SystemEval {
        let d = self.d;
        let mut p = t; // P_1
        let mut dp = Complex64::new(1.0, 0.0);
        let mut noise = t.norm() + 1.0;
        // Correct for preperiod == 1 as initialized; later preperiods
        // overwrite it inside the loop.
        let mut checkpoint = (p, dp, noise);
        let mut have = 1usize;
        while have < self.total {
            if p.norm() > self.escape_cap {
                // Escaping parameter: report a telescoped Newton step for
                // P_total (|P_total| ~ |P_have|^{d^rem}) and an unacceptable
                // residual so the point keeps moving.
                let rem = (self.total - have) as i32;
                let step = (p / dp) / (d as f64).powi(rem);
                let newton = if step.is_finite() {
                    step
                } else {
                    Complex64::new(f64::NAN, f64::NAN)
                };
                return SystemEval {
                    newton,
                    residual: f64::MAX,
                    scale: 1.0,
                };
            }
            let mut pd1 = Complex64::new(1.0, 0.0);
            for _ in 0..d - 1 {
                pd1 *= p;
            }
            let a = pd1.norm();
            noise = d as f64 * a * noise + (a * p.norm() + t.norm() + 1.0);
            dp = d as f64 * pd1 * dp + Complex64::new(1.0, 0.0);
            p = pd1 * p + t;
            have += 1;
            if have == self.preperiod {
                checkpoint = (p, dp, noise);
            }
        }
        let (val, dval, nval) = if self.preperiod == 0 {
            (p, dp, noise)
        } else {
            let (cp, cdp, cnoise) = checkpoint;
            (p - cp, dp - cdp, noise + cnoise)
        };
        let newton = if dval.norm() > 0.0 && (val / dval).is_finite() {
            val / dval
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        };
        SystemEval {
            newton,
            residual: val.norm(),
            scale: nval.max(1e-300),
        }
    }
}

/// A few plain Newton iterations against the orbit recursion. Multiple
/// roots of the raw equations (always lower-order points) converge only
/// linearly in Aberth and freeze at the residual shell, so the subtraction
/// step needs this extra push toward the centroid.
fn newton_polish(sys: &OrbitSystem, mut z: Complex64) -> Complex64 {
    for _ in 0..60 {
        let e = sys.eval(z);
        if !e.newton.is_finite() || e.residual == f64::MAX {
            break;
        }
        z -= e.newton;
        if e.newton.norm() <= 1e-13 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// All solutions of the raw order-(preperiod, period) equation, with
/// multiplicity, polished.
fn raw_parameters(d: usize, preperiod: usize, period: usize) -> Result<Vec<Complex64>> {
    let sys = OrbitSystem::new(d, preperiod, period)?;
    let clusters = system_roots(&sys, &RootOptions::default())?;
    let mut out = Vec::with_capacity(sys.degree);
    for c in clusters {
        let z = newton_polish(&sys, c.value);
        for _ in 0..c.multiplicity {
            out.push(z);
        }
    }
    Ok(out)
}

fn remove_near(points: Vec<Complex64>, lower: &[Complex64], tol: f64) -> Vec<Complex64> {
    points
        .into_iter()
        .filter(|z| lower.iter().all(|w| (z - w).norm() >= tol))
        .collect()
}

/// Parameters t where the critical orbit of z^d + t is exactly of the
/// requested combinatorial type, sorted by (re, im).
pub fn pcf_parameters_unicritical(d: usize, kind: PcfKind) -> Result<Vec<Complex64>> {
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "unicritical family needs degree >= 2, got {d}"
        )));
    }
    let mut params = match kind {
        PcfKind::Center { period } => {
            if period == 0 {
                return Err(Error::InvalidInput("center period must be >= 1".into()));
            }
            let raw = raw_parameters(d, 0, period)?;
            // Subtract centers of every proper divisor period.
            let mut lower = Vec::new();
            for m in 1..period {
                if period % m == 0 {
                    lower.extend(raw_parameters(d, 0, m)?);
                }
            }
            remove_near(raw, &lower, 1e-6)
        }
        PcfKind::Misiurewicz { preperiod, period } => {
            if preperiod == 0 {
                return Err(Error::InvalidInput(
                    "misiurewicz preperiod must be >= 1 (use a center otherwise)".into(),
                ));
            }
            if period == 0 {
                return Err(Error::InvalidInput("misiurewicz period must be >= 1".into()));
            }
            let raw = raw_parameters(d, preperiod, period)?;
            // Subtract every strictly lower combinatorial type: shorter or
            // equal preperiods (0 = centers) with periods dividing ours.
            let mut lower = Vec::new();
            for m2 in 0..=preperiod {
                for p2 in 1..=period {
                    if period % p2 != 0 || (m2, p2) == (preperiod, period) {
                        continue;
                    }
                    lower.extend(raw_parameters(d, m2, p2)?);
                }
            }
            // Multiple raw roots sit exactly on lower points; their
            // centroids are only O(1e-4) accurate, hence the loose cut.
            remove_near(raw, &lower, 1e-3)
        }
    };
    params.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(params)
}

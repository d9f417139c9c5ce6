//! Simultaneous root finding: Aberth–Ehrlich iteration plus residual-aware
//! cluster detection for multiple roots.
//!
//! The iteration starts from a perturbed circle of scaled roots of unity
//! (perturbation is drawn from a seeded RNG, so runs are reproducible),
//! updates points Gauss–Seidel style, and freezes a point once its relative
//! backward residual drops below the target. Multiplicities are recovered
//! afterwards by union-find clustering: two raw roots merge when they are
//! closer than `max(1e-6, 1e-4 * rms nearest-neighbor spacing)` or closer
//! than a few times their own Newton-correction uncertainty — the latter is
//! what lets an exact triple root (raw roots scattered ~1e-5 by evaluation
//! noise) collapse into a single multiplicity-3 cluster.
//!
//! Residuals are reported *relative to the evaluation scale*
//! `sum_k |a_k| max(1,|z|)^k`, i.e. as backward errors: a residual of 1e-12
//! means the point is a root of a polynomial whose coefficients differ
//! relatively by ~1e-12. This is the only scaling that stays meaningful for
//! roots of large modulus.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::big::{bigfloat_to_f64, BigC, BigCtx};
use super::ComplexPoly;
use crate::error::{Error, Result};

/// Working precision for the root finder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Standard f64 arithmetic.
    Double,
    /// Arbitrary-precision floats with the given mantissa bit count
    /// (64..=4096). Roots are still reported as f64.
    Big(u32),
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Double
    }
}

#[derive(Debug, Clone)]
pub struct RootOptions {
    /// Relative backward-residual target for accepting a root.
    pub tol: f64,
    /// Aberth sweep cap before reporting `NonConvergence`.
    pub max_sweeps: usize,
    /// Seed for the deterministic start-point jitter.
    pub seed: u64,
    pub precision: Precision,
    /// Absolute floor of the cluster-merge radius.
    pub cluster_floor: f64,
    /// Relative factor applied to the rms nearest-neighbor spacing.
    pub cluster_rel: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-11,
            max_sweeps: 600,
            seed: 0x5eed_0001,
            precision: Precision::Double,
            cluster_floor: 1e-6,
            cluster_rel: 1e-4,
        }
    }
}

/// A group of raw roots identified as one root with multiplicity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootCluster {
    /// Centroid of the cluster's raw roots.
    #[serde(with = "crate::jsonc::cpair")]
    pub value: Complex64,
    pub multiplicity: usize,
    /// Max relative backward residual over the cluster's raw roots.
    pub residual: f64,
}

/// What the Aberth engine needs to know about the function it is solving.
/// Implemented by explicit coefficient polynomials here and by implicit
/// orbit-recursion systems (postcritically finite parameter loci) elsewhere.
pub(crate) trait AberthSystem: Sync {
    fn degree(&self) -> usize;
    /// Radius of the initial circle of guesses.
    fn initial_radius(&self) -> f64;
    fn eval(&self, z: Complex64) -> SystemEval;
}

pub(crate) struct SystemEval {
    /// Newton correction p(z)/p'(z); NaN signals a vanishing derivative.
    pub newton: Complex64,
    /// |p(z)| (or a faithful surrogate for implicit systems).
    pub residual: f64,
    /// Evaluation scale so `residual / scale` is a relative backward error.
    pub scale: f64,
}

impl SystemEval {
    fn rel(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            f64::INFINITY
        }
    }
}

struct PolySystem<'a> {
    p: &'a ComplexPoly,
    abs_coeffs: Vec<f64>,
}

impl<'a> PolySystem<'a> {
    fn new(p: &'a ComplexPoly) -> Self {
        PolySystem {
            p,
            abs_coeffs: p.coeffs().iter().map(|c| c.norm()).collect(),
        }
    }
}

impl AberthSystem for PolySystem<'_> {
    fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }

    fn initial_radius(&self) -> f64 {
        // Fujiwara-style bound: 2 * max_k |a_{n-k}/a_n|^(1/k)
        let n = self.degree();
        let lead = self.abs_coeffs[n];
        let mut r: f64 = 0.0;
        for k in 1..=n {
            let a = self.abs_coeffs[n - k];
            if a > 0.0 {
                r = r.max((a / lead).powf(1.0 / k as f64));
            }
        }
        (2.0 * r).max(1e-3)
    }

    fn eval(&self, z: Complex64) -> SystemEval {
        let (v, dv) = self.p.eval_with_derivative(z);
        let az = z.norm().max(1.0);
        let mut scale = 0.0;
        for &a in self.abs_coeffs.iter().rev() {
            scale = scale * az + a;
        }
        let newton = if dv.norm() > 0.0 && v.is_finite() && dv.is_finite() {
            v / dv
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        };
        SystemEval {
            newton,
            residual: v.norm(),
            scale,
        }
    }
}

/// Find all roots of `p` with the default options (residual target `tol`).
pub fn poly_roots(p: &ComplexPoly, tol: f64) -> Result<Vec<RootCluster>> {
    poly_roots_with(
        p,
        &RootOptions {
            tol,
            ..RootOptions::default()
        },
    )
}

pub fn poly_roots_with(p: &ComplexPoly, opts: &RootOptions) -> Result<Vec<RootCluster>> {
    super::require_finite(p, "polynomial")?;
    let n = match p.degree() {
        None | Some(0) => {
            return Err(Error::InvalidInput(
                "root finding needs degree >= 1".into(),
            ))
        }
        Some(n) => n,
    };
    if n == 1 {
        let root = -p.coeff(0) / p.coeff(1);
        return Ok(vec![RootCluster {
            value: root,
            multiplicity: 1,
            residual: 0.0,
        }]);
    }
    let sys = PolySystem::new(p);
    match opts.precision {
        Precision::Double => {
            let clusters = match aberth_f64(&sys, opts) {
                Ok(raw) => {
                    let clusters = cluster_roots(&raw, opts);
                    if double_pass_is_suspect(&raw, &clusters) {
                        return escalate_to_big(p, &sys, opts);
                    }
                    clusters
                }
                // The double pass stalling is itself a conditioning signal.
                Err(Error::NonConvergence(_)) => return escalate_to_big(p, &sys, opts),
                Err(e) => return Err(e),
            };
            let mut clusters = clusters;
            polish_clusters(p, &mut clusters);
            // polish can nudge values, so restore the documented ordering
            sort_clusters(&mut clusters);
            Ok(clusters)
        }
        Precision::Big(bits) => {
            if !(64..=4096).contains(&bits) {
                return Err(Error::InvalidInput(format!(
                    "big precision must be 64..=4096 bits, got {bits}"
                )));
            }
            let raw = aberth_big(p, &sys, bits, opts)?;
            Ok(cluster_roots(&raw, opts))
        }
    }
}

/// Precision used when the double pass cannot be trusted.
const ESCALATION_BITS: u32 = 256;

/// Decide whether f64 results are trustworthy. Polynomials with a wide
/// coefficient dynamic range (composed/iterated polynomials are the usual
/// culprits) push the backward-residual floor tol·scale(z) above the true
/// root separations: every iterate then freezes somewhere on a large
/// |p| ≈ 0 plateau and whole groups of distinct roots collapse into one
/// fat cluster. Large final Newton corrections and multiplicity > 1 are
/// exactly the symptoms, so either one triggers a high-precision redo.
/// Genuine multiple roots also trigger it; the big pass reproduces them
/// (its iterates land within ~1e-30 of the root, far below the cluster
/// floor) while resolving fake ones.
fn double_pass_is_suspect(raw: &[RawRoot], clusters: &[RootCluster]) -> bool {
    clusters.iter().any(|c| c.multiplicity > 1)
        || raw
            .iter()
            .any(|r| r.uncertainty > 1e-7 * (1.0 + r.z.norm()))
}

fn escalate_to_big(
    p: &ComplexPoly,
    sys: &PolySystem,
    opts: &RootOptions,
) -> Result<Vec<RootCluster>> {
    let raw = aberth_big(p, sys, ESCALATION_BITS, opts)?;
    Ok(cluster_roots(&raw, opts))
}

/// Final polish of cluster values with Newton steps at 192-bit precision.
///
/// f64 Aberth stalls at the evaluation-noise floor |p(z)| ~ 2n*eps*scale(z),
/// which for roots of modulus > 1 can sit many digits above what the f64
/// value itself could express. A multiplicity-m cluster is also only located
/// to (tol*scale)^(1/m) by the residual test — but it is a *simple* root of
/// the (m-1)-th derivative, so the polish runs there instead. A polished
/// value is kept only if it stays inside the cluster's neighborhood and does
/// not increase |p| (measured in big arithmetic).
fn polish_clusters(p: &ComplexPoly, clusters: &mut [RootCluster]) {
    let ctx = BigCtx::new(192);
    let pc: Vec<BigC> = p.coeffs().iter().map(|&c| BigC::from_c64(c, ctx)).collect();
    let eval_big = |coeffs: &[BigC], z: &BigC| -> (BigC, BigC) {
        let mut v = BigC::zero(ctx);
        let mut dv = BigC::zero(ctx);
        for c in coeffs.iter().rev() {
            dv = dv.mul(z, ctx).add(&v, ctx);
            v = v.mul(z, ctx).add(c, ctx);
        }
        (v, dv)
    };
    let guard_radius = |i: usize, clusters: &[RootCluster]| -> f64 {
        let v = clusters[i].value;
        let mut r = 1e-2 * (1.0 + v.norm());
        for (j, other) in clusters.iter().enumerate() {
            if j != i {
                r = r.min(0.5 * (other.value - v).norm());
            }
        }
        r
    };
    for i in 0..clusters.len() {
        let m = clusters[i].multiplicity;
        let qc: Vec<BigC>;
        let target: &[BigC] = if m == 1 {
            &pc
        } else {
            let mut q = p.clone();
            for _ in 0..(m - 1) {
                q = q.derivative();
            }
            if q.degree().map_or(true, |d| d == 0) {
                continue;
            }
            qc = q.coeffs().iter().map(|&c| BigC::from_c64(c, ctx)).collect();
            &qc
        };
        let radius = guard_radius(i, clusters);
        let start = clusters[i].value;
        let mut z = BigC::from_c64(start, ctx);
        for _ in 0..12 {
            let (v, dv) = eval_big(target, &z);
            let step = v.div(&dv, ctx);
            if !step.is_finite() {
                break;
            }
            z = z.sub(&step, ctx);
            let zc = z.to_c64();
            if !zc.is_finite() || (zc - start).norm() > radius {
                break;
            }
            if bigfloat_to_f64(&step.abs(ctx)) < 1e-30 * (1.0 + zc.norm()) {
                break;
            }
        }
        let zc = z.to_c64();
        if zc.is_finite() && (zc - start).norm() <= radius {
            let new_res = eval_big(&pc, &BigC::from_c64(zc, ctx)).0.abs(ctx);
            let old_res = eval_big(&pc, &BigC::from_c64(start, ctx)).0.abs(ctx);
            if bigfloat_to_f64(&new_res) <= bigfloat_to_f64(&old_res) {
                clusters[i].value = zc;
            }
        }
    }
}

/// Run the Aberth engine for any system (implicit systems included) and
/// cluster the result. Double precision only.
pub(crate) fn system_roots(
    sys: &dyn AberthSystem,
    opts: &RootOptions,
) -> Result<Vec<RootCluster>> {
    let raw = aberth_f64(sys, opts)?;
    Ok(cluster_roots(&raw, opts))
}

struct RawRoot {
    z: Complex64,
    rel_residual: f64,
    /// |p/p'| at acceptance: the scale below which the root's position is
    /// not determined by the data.
    uncertainty: f64,
}

fn initial_points(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    for j in 0..n {
        let jitter_r: f64 = rng.gen_range(-0.05..0.05);
        let jitter_a: f64 = rng.gen_range(-0.2..0.2);
        let angle = std::f64::consts::TAU * (j as f64 + 0.37 + jitter_a) / n as f64 + 0.29;
        let r = radius * (1.0 + jitter_r);
        pts.push(Complex64::from_polar(r, angle));
    }
    pts
}

fn aberth_f64(sys: &dyn AberthSystem, opts: &RootOptions) -> Result<Vec<RawRoot>> {
    let n = sys.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
    let mut z = initial_points(n, sys.initial_radius(), opts.seed);
    let mut frozen = vec![false; n];
    let mut rel = vec![f64::INFINITY; n];
    let mut unc = vec![0.0f64; n];

    for _sweep in 0..opts.max_sweeps {
        let mut all_done = true;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let e = sys.eval(z[i]);
            if e.rel() <= opts.tol {
                frozen[i] = true;
                rel[i] = e.rel();
                unc[i] = if e.newton.is_finite() {
                    e.newton.norm()
                } else {
                    0.0
                };
                continue;
            }
            all_done = false;
            if !e.newton.is_finite() {
                // landed on a critical point of p: nudge and retry next sweep
                let kick = (1.0 + z[i].norm()) * 1e-6;
                z[i] += Complex64::from_polar(kick, rng.gen_range(0.0..std::f64::consts::TAU));
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            let mut collision = false;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d = z[i] - z[j];
                if d.norm() == 0.0 {
                    collision = true;
                    break;
                }
                s += d.inv();
            }
            if collision {
                let kick = (1.0 + z[i].norm()) * 1e-9;
                z[i] += Complex64::from_polar(kick, rng.gen_range(0.0..std::f64::consts::TAU));
                continue;
            }
            let denom = Complex64::new(1.0, 0.0) - e.newton * s;
            let mut w = if denom.norm() > 1e-290 {
                e.newton / denom
            } else {
                e.newton
            };
            if !w.is_finite() {
                w = e.newton;
            }
            if !w.is_finite() {
                let kick = (1.0 + z[i].norm()) * 1e-6;
                w = Complex64::from_polar(kick, rng.gen_range(0.0..std::f64::consts::TAU));
            }
            // cap wild steps so one bad denominator cannot eject the point
            let cap = 0.5 * (1.0 + z[i].norm()) + sys.initial_radius();
            if w.norm() > cap {
                w *= cap / w.norm();
            }
            z[i] -= w;
            if !z[i].is_finite() {
                z[i] = Complex64::from_polar(
                    sys.initial_radius(),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
            }
        }
        if all_done {
            break;
        }
    }

    // final audit: every point must meet the residual target
    let mut worst = 0.0f64;
    for i in 0..n {
        if !frozen[i] {
            let e = sys.eval(z[i]);
            rel[i] = e.rel();
            unc[i] = if e.newton.is_finite() {
                e.newton.norm()
            } else {
                0.0
            };
        }
        worst = worst.max(rel[i]);
    }
    if worst > opts.tol {
        return Err(Error::NonConvergence(format!(
            "Aberth iteration: worst relative residual {worst:.3e} above target {:.1e} after {} sweeps",
            opts.tol, opts.max_sweeps
        )));
    }
    Ok((0..n)
        .map(|i| RawRoot {
            z: z[i],
            rel_residual: rel[i],
            uncertainty: unc[i],
        })
        .collect())
}

/// Big-float Aberth sweep over the explicit coefficients of `p`. Same
/// structure as the f64 path; thresholds and reporting stay in f64.
fn aberth_big(
    p: &ComplexPoly,
    sys: &PolySystem,
    bits: u32,
    opts: &RootOptions,
) -> Result<Vec<RawRoot>> {
    let ctx = BigCtx::new(bits);
    let n = sys.degree();
    let coeffs: Vec<BigC> = p.coeffs().iter().map(|&c| BigC::from_c64(c, ctx)).collect();
    let abs_coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.norm()).collect();
    let eval_scale = |az: f64| -> f64 {
        let az = az.max(1.0);
        let mut s = 0.0;
        for &a in abs_coeffs.iter().rev() {
            s = s * az + a;
        }
        s
    };
    // big-precision acceptance: as far below the f64 floor as the mantissa allows
    let tol = opts.tol.min(2f64.powi(-(bits as i32) + 8).max(1e-300));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
    let mut z: Vec<BigC> = initial_points(n, sys.initial_radius(), opts.seed)
        .into_iter()
        .map(|c| BigC::from_c64(c, ctx))
        .collect();
    let mut frozen = vec![false; n];
    let mut rel = vec![f64::INFINITY; n];
    let mut unc = vec![0.0f64; n];

    let horner = |w: &BigC| -> (BigC, BigC) {
        let mut v = BigC::zero(ctx);
        let mut dv = BigC::zero(ctx);
        for c in coeffs.iter().rev() {
            dv = dv.mul(w, ctx).add(&v, ctx);
            v = v.mul(w, ctx).add(c, ctx);
        }
        (v, dv)
    };

    for _sweep in 0..opts.max_sweeps {
        let mut all_done = true;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (v, dv) = horner(&z[i]);
            let vn = bigfloat_to_f64(&v.abs(ctx));
            let scale = eval_scale(bigfloat_to_f64(&z[i].abs(ctx)));
            if vn <= tol * scale {
                frozen[i] = true;
                rel[i] = vn / scale;
                let nw = v.div(&dv, ctx);
                unc[i] = if nw.is_finite() {
                    bigfloat_to_f64(&nw.abs(ctx))
                } else {
                    0.0
                };
                continue;
            }
            all_done = false;
            let dvn = bigfloat_to_f64(&dv.abs(ctx));
            if dvn == 0.0 {
                let kick = (1.0 + bigfloat_to_f64(&z[i].abs(ctx))) * 1e-6;
                let kc = Complex64::from_polar(kick, rng.gen_range(0.0..std::f64::consts::TAU));
                z[i] = z[i].add(&BigC::from_c64(kc, ctx), ctx);
                continue;
            }
            let newton = v.div(&dv, ctx);
            let mut s = BigC::zero(ctx);
            let one = BigC::from_c64(Complex64::new(1.0, 0.0), ctx);
            let mut collision = false;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d = z[i].sub(&z[j], ctx);
                if bigfloat_to_f64(&d.abs(ctx)) == 0.0 {
                    collision = true;
                    break;
                }
                s = s.add(&one.div(&d, ctx), ctx);
            }
            if collision {
                let kick = (1.0 + bigfloat_to_f64(&z[i].abs(ctx))) * 1e-9;
                let kc = Complex64::from_polar(kick, rng.gen_range(0.0..std::f64::consts::TAU));
                z[i] = z[i].add(&BigC::from_c64(kc, ctx), ctx);
                continue;
            }
            let denom = one.sub(&newton.mul(&s, ctx), ctx);
            let w = if bigfloat_to_f64(&denom.abs(ctx)) > 1e-290 {
                newton.div(&denom, ctx)
            } else {
                newton
            };
            if !w.is_finite() {
                continue;
            }
            z[i] = z[i].sub(&w, ctx);
        }
        if all_done {
            break;
        }
    }

    let mut worst = 0.0f64;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if !frozen[i] {
            let (v, dv) = horner(&z[i]);
            let vn = bigfloat_to_f64(&v.abs(ctx));
            let scale = eval_scale(bigfloat_to_f64(&z[i].abs(ctx)));
            rel[i] = vn / scale;
            let nw = v.div(&dv, ctx);
            unc[i] = if nw.is_finite() {
                bigfloat_to_f64(&nw.abs(ctx))
            } else {
                0.0
            };
        }
        worst = worst.max(rel[i]);
        out.push(RawRoot {
            z: z[i].to_c64(),
            rel_residual: rel[i],
            uncertainty: unc[i],
        });
    }
    if worst > tol {
        return Err(Error::NonConvergence(format!(
            "big-float Aberth: worst relative residual {worst:.3e} above target {tol:.1e}"
        )));
    }
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }
    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.0[ri] = rj;
        }
    }
}

fn cluster_roots(raw: &[RawRoot], opts: &RootOptions) -> Vec<RootCluster> {
    let n = raw.len();
    if n == 0 {
        return Vec::new();
    }
    // rms nearest-neighbor spacing of the raw roots
    let mut sum_sq = 0.0;
    for i in 0..n {
        let mut nearest = f64::INFINITY;
        for j in 0..n {
            if i != j {
                nearest = nearest.min((raw[i].z - raw[j].z).norm());
            }
        }
        if nearest.is_finite() {
            sum_sq += nearest * nearest;
        }
    }
    let rms = if n > 1 { (sum_sq / n as f64).sqrt() } else { 0.0 };
    let base_radius = opts.cluster_floor.max(opts.cluster_rel * rms);

    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let merge_radius =
                base_radius.max(4.0 * (raw[i].uncertainty + raw[j].uncertainty));
            if (raw[i].z - raw[j].z).norm() <= merge_radius {
                uf.union(i, j);
            }
        }
    }

    let mut groups: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for i in 0..n {
        let root = uf.find(i);
        groups.entry(root).or_default().push(i);
    }
    let mut clusters: Vec<RootCluster> = groups
        .values()
        .map(|members| {
            let mut centroid = Complex64::new(0.0, 0.0);
            let mut residual = 0.0f64;
            for &m in members {
                centroid += raw[m].z;
                residual = residual.max(raw[m].rel_residual);
            }
            centroid /= members.len() as f64;
            RootCluster {
                value: centroid,
                multiplicity: members.len(),
                residual,
            }
        })
        .collect();
    sort_clusters(&mut clusters);
    clusters
}

fn sort_clusters(clusters: &mut [RootCluster]) {
    clusters.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle: Cardano's formula for a monic real cubic
    /// z^3 + a z^2 + b z + c, returning the real root and the conjugate pair.
    fn cardano_real_cubic(a: f64, b: f64, cc: f64) -> (f64, Complex64, Complex64) {
        let p = b - a * a / 3.0;
        let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
        let disc = q * q / 4.0 + p * p * p / 27.0;
        assert!(disc > 0.0, "oracle expects one real root");
        let sd = disc.sqrt();
        let u = (-q / 2.0 + sd).cbrt();
        let v = (-q / 2.0 - sd).cbrt();
        let t_real = u + v;
        let real_root = t_real - a / 3.0;
        // conjugate pair: t = -(u+v)/2 +- i sqrt(3)(u-v)/2
        let re = -(u + v) / 2.0 - a / 3.0;
        let im = (3.0f64).sqrt() * (u - v) / 2.0;
        (real_root, c(re, im), c(re, -im))
    }

    /// p ∘ q by Horner over polynomial arithmetic.
    fn compose_polys(p: &ComplexPoly, q: &ComplexPoly) -> ComplexPoly {
        let coeffs = p.coeffs();
        let mut acc = ComplexPoly::new(vec![*coeffs.last().unwrap()]);
        for k in (0..coeffs.len() - 1).rev() {
            acc = acc.mul(q).add(&ComplexPoly::new(vec![coeffs[k]]));
        }
        acc
    }

    #[test]
    fn composed_polynomials_escalate_to_distinct_roots() {
        // Triple self-composition of (z+1)³ minus z: 27 simple roots whose
        // separations sit below the f64 backward-residual floor (coefficient
        // range ~5e7 at |z| ≈ 2). The sparse conjugate z³+1 is perfectly
        // conditioned, and its root set shifted by −1 is the ground truth.
        let dense = ComplexPoly::from_real(&[1.0, 3.0, 3.0, 1.0]);
        let sparse = ComplexPoly::from_real(&[1.0, 0.0, 0.0, 1.0]);
        let shift_z = ComplexPoly::from_real(&[0.0, 1.0]);
        let phi_dense =
            compose_polys(&dense, &compose_polys(&dense, &dense)).sub(&shift_z);
        let phi_sparse =
            compose_polys(&sparse, &compose_polys(&sparse, &sparse)).sub(&shift_z);

        let dense_roots = poly_roots(&phi_dense, 1e-11).unwrap();
        let sparse_roots = poly_roots(&phi_sparse, 1e-11).unwrap();
        assert_eq!(dense_roots.len(), 27, "merged genuinely distinct roots");
        assert!(dense_roots.iter().all(|cl| cl.multiplicity == 1));
        assert_eq!(sparse_roots.len(), 27);

        for cl in &dense_roots {
            let nearest = sparse_roots
                .iter()
                .map(|t| (cl.value - (t.value - 1.0)).norm())
                .fold(f64::MAX, f64::min);
            assert!(
                nearest < 1e-8,
                "root {} is {nearest:.2e} from the conjugate truth",
                cl.value
            );
        }
    }

    #[test]
    fn cubic_matches_cardano_oracle() {
        // z^3 + 2z^2 + z + 1
        let p = ComplexPoly::from_real(&[1.0, 1.0, 2.0, 1.0]);
        let clusters = poly_roots(&p, 1e-10).unwrap();
        assert_eq!(clusters.len(), 3);
        assert!(clusters.iter().all(|cl| cl.multiplicity == 1));

        let (r, z1, z2) = cardano_real_cubic(2.0, 1.0, 1.0);
        // sanity-pin the oracle itself against the known approximations
        assert!((r - (-1.7548776662466928)).abs() < 1e-12);
        assert!((z1.re - (-0.12256116687665356)).abs() < 1e-12);
        assert!((z1.im.abs() - 0.74486176661974424).abs() < 1e-12);

        for expected in [c(r, 0.0), z1, z2] {
            let found = clusters
                .iter()
                .map(|cl| (cl.value - expected).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(found < 1e-9, "missing root near {expected}");
        }
        for cl in &clusters {
            assert!(cl.residual < 1e-11, "residual {:.3e}", cl.residual);
        }
    }

    #[test]
    fn quartic_roots_of_unity() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
        let clusters = poly_roots(&p, 1e-10).unwrap();
        assert_eq!(clusters.len(), 4);
        for expected in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
            let nearest = clusters
                .iter()
                .map(|cl| (cl.value - expected).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-10);
        }
    }

    #[test]
    fn triple_root_clusters_with_multiplicity() {
        // (z - 2)^3 = z^3 - 6z^2 + 12z - 8
        let p = ComplexPoly::from_real(&[-8.0, 12.0, -6.0, 1.0]);
        let clusters = poly_roots(&p, 1e-10).unwrap();
        let total: usize = clusters.iter().map(|cl| cl.multiplicity).sum();
        assert_eq!(total, 3);
        assert_eq!(clusters.len(), 1, "triple root must merge: {clusters:?}");
        assert_eq!(clusters[0].multiplicity, 3);
        assert!((clusters[0].value - c(2.0, 0.0)).norm() < 1e-4);
    }

    #[test]
    fn degree_one_is_exact() {
        let p = ComplexPoly::new(vec![c(1.0, -2.0), c(2.0, 0.0)]);
        let clusters = poly_roots(&p, 1e-12).unwrap();
        assert_eq!(clusters.len(), 1);
        assert!((clusters[0].value - c(-0.5, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_rejected() {
        let p = ComplexPoly::from_real(&[3.0]);
        assert!(matches!(
            poly_roots(&p, 1e-10),
            Err(Error::InvalidInput(_))
        ));
        assert!(poly_roots(&ComplexPoly::zero(), 1e-10).is_err());
    }

    #[test]
    fn non_convergence_reported() {
        let p = ComplexPoly::from_real(&[1.0, 1.0, 2.0, 1.0, 0.5, -3.0, 1.0]);
        let opts = RootOptions {
            max_sweeps: 1,
            tol: 1e-14,
            ..RootOptions::default()
        };
        assert!(matches!(
            poly_roots_with(&p, &opts),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn random_polys_account_for_all_roots() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..100 {
            let deg = rng.gen_range(2..=30);
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| {
                    // uniform in the unit disk by rejection
                    loop {
                        let re = rng.gen_range(-1.0..1.0);
                        let im = rng.gen_range(-1.0..1.0);
                        if re * re + im * im <= 1.0 {
                            return c(re, im);
                        }
                    }
                })
                .collect();
            let p = ComplexPoly::new(coeffs);
            let deg = match p.degree() {
                Some(d) if d >= 1 => d,
                _ => continue,
            };
            let clusters = poly_roots(&p, 1e-11)
                .unwrap_or_else(|e| panic!("trial {trial} failed: {e}"));
            let total: usize = clusters.iter().map(|cl| cl.multiplicity).sum();
            assert_eq!(total, deg, "trial {trial}: multiplicities must sum to degree");
            // Residuals are measured in 256-bit arithmetic: f64 Horner
            // bottoms out at its own noise floor ~2*deg*eps*sum|a_k||z|^k,
            // which says nothing about root quality. Two bounds:
            //  - backward form |p(v)| / sum|a_k||v|^k < 1e-8 for every root
            //    (rounding the exact root to f64 already costs ~deg*eps, so
            //    this is the strongest f64-representable statement), and
            //  - the absolute form |p(v)|/(1+max|coeff|) < 1e-8 for roots in
            //    the unit-ish disk, where the two scalings agree.
            let ctx = BigCtx::new(256);
            let big_coeffs: Vec<BigC> = p
                .coeffs()
                .iter()
                .map(|&cf| BigC::from_c64(cf, ctx))
                .collect();
            let abs_scale = 1.0 + p.max_coeff_modulus();
            for cl in &clusters {
                let mut v = BigC::zero(ctx);
                let z = BigC::from_c64(cl.value, ctx);
                for cf in big_coeffs.iter().rev() {
                    v = v.mul(&z, ctx).add(cf, ctx);
                }
                let abs_res = bigfloat_to_f64(&v.abs(ctx));
                let az = cl.value.norm().max(1.0);
                let mut bw_scale = 0.0;
                for cf in p.coeffs().iter().rev() {
                    bw_scale = bw_scale * az + cf.norm();
                }
                assert!(
                    abs_res / bw_scale < 1e-8,
                    "trial {trial} deg {deg}: backward residual {:.3e}",
                    abs_res / bw_scale
                );
                if cl.value.norm() <= 1.2 {
                    assert!(
                        abs_res / abs_scale < 1e-8,
                        "trial {trial} deg {deg}: |p(value)|/(1+max|coeff|) = {:.3e}",
                        abs_res / abs_scale
                    );
                }
            }
        }
    }

    #[test]
    fn big_precision_matches_double_on_cubic() {
        let p = ComplexPoly::from_real(&[1.0, 1.0, 2.0, 1.0]);
        let double = poly_roots(&p, 1e-10).unwrap();
        let big = poly_roots_with(
            &p,
            &RootOptions {
                precision: Precision::Big(128),
                ..RootOptions::default()
            },
        )
        .unwrap();
        assert_eq!(big.len(), 3);
        for d in &double {
            let nearest = big
                .iter()
                .map(|b| (b.value - d.value).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-12);
        }
        for b in &big {
            assert!(b.residual < 1e-15, "big residual {:.3e}", b.residual);
        }
    }

    #[test]
    fn big_precision_validates_bits() {
        let p = ComplexPoly::from_real(&[1.0, 1.0, 2.0, 1.0]);
        let opts = RootOptions {
            precision: Precision::Big(32),
            ..RootOptions::default()
        };
        assert!(matches!(
            poly_roots_with(&p, &opts),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn clusters_are_sorted_deterministically() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
        let a = poly_roots(&p, 1e-10).unwrap();
        let b = poly_roots(&p, 1e-10).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.value, y.value);
        }
        let mut sorted = a.clone();
        sorted.sort_by(|u, v| {
            (u.value.re, u.value.im)
                .partial_cmp(&(v.value.re, v.value.im))
                .unwrap()
        });
        for (x, y) in a.iter().zip(sorted.iter()) {
            assert_eq!(x.value, y.value);
        }
    }
}

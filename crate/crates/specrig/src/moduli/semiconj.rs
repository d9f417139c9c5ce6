//! Numerical search for semiconjugacies: rational h with f∘h = h∘g.
//!
//! The coefficients of h = num/den (both of degree ≤ deg_h) are fit by a
//! damped Gauss–Newton (Levenberg–Marquardt) iteration. The residual at a
//! sample point z is the cross product of the homogeneous lifts of f(h(z))
//! and h(g(z)), normalized to sup-norm one — a smooth quantity comparable
//! to the chordal distance between the two image points. Starts come from
//! interpolating h through matched periodic points of g and f (see
//! [`marker_starts`]) before falling back to generic ones. A candidate is
//! accepted only after an independent chordal check on the sample set.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::collect_markers;
use crate::cpoly::ComplexPoly;
use crate::error::{Error, Result};
use crate::ratmap::{chordal_distance, ProjPoint, RationalMap};

const ACCEPT_TOL: f64 = 1e-7;
const MAX_DEG_H: usize = 4;
const N_RING: usize = 32;
const N_STARTS: usize = 24;
const MAX_ITERS: usize = 150;
const SEED: u64 = 0x5e31_c0de;

/// Value used for a residual whose lift collapsed (degenerate h at the
/// sample); large and flat so the optimizer is pushed away.
const COLLAPSE_PENALTY: f64 = 1e3;

/// Weight and knee of the anti-degeneracy residual. A constant h ≡ c with
/// f(c) = c zeroes every cross product, so plain least squares is drawn to
/// the (huge) manifold of constant maps; this term makes that manifold
/// expensive while adding only ~PEN_W·PEN_S0/spread at genuine solutions.
const PEN_W: f64 = 10.0;
const PEN_S0: f64 = 1e-4;

/// Two rings of sample points, inside and outside the unit circle.
fn sample_points() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(2 * N_RING);
    for j in 0..N_RING {
        let t = 2.0 * std::f64::consts::PI * (j as f64) / (N_RING as f64);
        pts.push(Complex64::from_polar(0.7, t + 0.37));
        pts.push(Complex64::from_polar(1.3, t + 0.11));
    }
    pts
}

/// Coefficients of p padded with zeros up to the formal degree.
fn homog_coeffs(p: &ComplexPoly, formal: usize) -> Vec<Complex64> {
    let mut c = p.coeffs().to_vec();
    c.resize(formal + 1, Complex64::new(0.0, 0.0));
    c
}

/// Σ c_k X^k Y^{n−k} for the padded coefficient slice c of length n+1.
fn eval_homog(c: &[Complex64], x: Complex64, y: Complex64) -> Complex64 {
    let n = c.len() - 1;
    let mut xp = Complex64::new(1.0, 0.0);
    let mut xs = Vec::with_capacity(n + 1);
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

fn sup_normalize(p: Complex64, q: Complex64) -> Option<(Complex64, Complex64)> {
    let s = p.norm().max(q.norm());
    if !(s > 1e-140) || !s.is_finite() {
        return None;
    }
    Some((p / s, q / s))
}

/// Everything fixed about one search problem: the two maps' padded
/// homogeneous coefficients and the precomputed (normalized) lifts of the
/// sample points and of g(sample).
struct Problem {
    deg_h: usize,
    f_num: Vec<Complex64>,
    f_den: Vec<Complex64>,
    samples: Vec<Complex64>,
    /// Normalized lifts of g(z) for every sample z.
    g_lifts: Vec<(Complex64, Complex64)>,
}

impl Problem {
    fn new(f: &RationalMap, g: &RationalMap, deg_h: usize) -> Problem {
        let d = f.degree();
        let samples = sample_points();
        let g_num = homog_coeffs(g.num(), g.degree());
        let g_den = homog_coeffs(g.den(), g.degree());
        let one = Complex64::new(1.0, 0.0);
        let g_lifts = samples
            .iter()
            .map(|&z| {
                let p = eval_homog(&g_num, z, one);
                let q = eval_homog(&g_den, z, one);
                // g is validated, so its lift never collapses at finite z
                sup_normalize(p, q).expect("nondegenerate map has nonzero lift")
            })
            .collect();
        Problem {
            deg_h,
            f_num: homog_coeffs(f.num(), d),
            f_den: homog_coeffs(f.den(), d),
            samples,
            g_lifts,
        }
    }

    fn n_params(&self) -> usize {
        4 * (self.deg_h + 1)
    }

    /// Split the real parameter vector into h's coefficient vectors.
    fn coeff_vectors(&self, p: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let m = self.deg_h + 1;
        let num = (0..m)
            .map(|k| Complex64::new(p[2 * k], p[2 * k + 1]))
            .collect();
        let den = (0..m)
            .map(|k| Complex64::new(p[2 * (m + k)], p[2 * (m + k) + 1]))
            .collect();
        (num, den)
    }

    /// Residual vector: one complex cross product per sample (as two real
    /// entries) plus a gauge-fixing term pinning the parameter norm.
    fn residuals(&self, p: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let (hn_c, hd_c) = self.coeff_vectors(p);
        let one = Complex64::new(1.0, 0.0);
        let mut h_lifts: Vec<Option<(Complex64, Complex64)>> =
            Vec::with_capacity(self.samples.len());
        for (i, &z) in self.samples.iter().enumerate() {
            let hp = eval_homog(&hn_c, z, one);
            let hq = eval_homog(&hd_c, z, one);
            let Some((hp, hq)) = sup_normalize(hp, hq) else {
                h_lifts.push(None);
                out.push(COLLAPSE_PENALTY);
                out.push(COLLAPSE_PENALTY);
                continue;
            };
            h_lifts.push(Some((hp, hq)));
            // u = f(h(z)) as a lift.
            let u = sup_normalize(eval_homog(&self.f_num, hp, hq), eval_homog(&self.f_den, hp, hq));
            // v = h(g(z)) as a lift.
            let (gp, gq) = self.g_lifts[i];
            let v = sup_normalize(eval_homog(&hn_c, gp, gq), eval_homog(&hd_c, gp, gq));
            match (u, v) {
                (Some(u), Some(v)) => {
                    let cross = u.0 * v.1 - u.1 * v.0;
                    out.push(cross.re);
                    out.push(cross.im);
                }
                _ => {
                    out.push(COLLAPSE_PENALTY);
                    out.push(COLLAPSE_PENALTY);
                }
            }
        }
        let norm2: f64 = p.iter().map(|x| x * x).sum();
        out.push(0.5 * (norm2 - 2.0));
        // How much h spreads consecutive samples apart; ~0 for constants.
        let mut spread = 0.0;
        for w in h_lifts.windows(2) {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                spread += (a.0 * b.1 - a.1 * b.0).norm_sqr();
            }
        }
        out.push(PEN_W * PEN_S0 / (PEN_S0 + spread));
    }
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// A is small (≤ 20×20), dense, row-major.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in (col + 1)..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let diag = a[col * n + col];
        for r in (col + 1)..n {
            let factor = a[r * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= factor * a[col * n + c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in (row + 1)..n {
            s -= a[row * n + c] * x[c];
        }
        x[row] = s / a[row * n + row];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

fn cost_of(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Levenberg–Marquardt with forward-difference Jacobian. Returns the best
/// parameter vector found from the given start.
fn lm_fit(problem: &Problem, start: &[f64]) -> Vec<f64> {
    let n = problem.n_params();
    let mut p = start.to_vec();
    let mut r = Vec::new();
    problem.residuals(&p, &mut r);
    let m = r.len();
    let mut cost = cost_of(&r);
    let mut mu = 1e-3;
    let mut r_try = Vec::new();
    let mut jac = vec![0.0; m * n];
    let mut r_pert = Vec::new();

    for _ in 0..MAX_ITERS {
        // Forward-difference Jacobian, column per parameter.
        for k in 0..n {
            let eps = 1e-7 * (1.0 + p[k].abs());
            let saved = p[k];
            p[k] = saved + eps;
            problem.residuals(&p, &mut r_pert);
            p[k] = saved;
            for i in 0..m {
                jac[i * n + k] = (r_pert[i] - r[i]) / eps;
            }
        }
        // Normal equations: grad = Jᵀr, A = JᵀJ.
        let mut grad = vec![0.0; n];
        let mut a = vec![0.0; n * n];
        for i in 0..m {
            let ri = r[i];
            for k in 0..n {
                let jik = jac[i * n + k];
                grad[k] += jik * ri;
                for l in k..n {
                    a[k * n + l] += jik * jac[i * n + l];
                }
            }
        }
        for k in 0..n {
            for l in 0..k {
                a[k * n + l] = a[l * n + k];
            }
        }
        if grad.iter().map(|g| g.abs()).fold(0.0, f64::max) < 1e-14 {
            break;
        }

        let mut improved = false;
        for _ in 0..10 {
            let mut damped = a.clone();
            for k in 0..n {
                damped[k * n + k] += mu * a[k * n + k].max(1e-12);
            }
            let mut rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
            let Some(delta) = solve_dense(&mut damped, &mut rhs, n) else {
                mu *= 4.0;
                continue;
            };
            let p_try: Vec<f64> = p.iter().zip(&delta).map(|(a, d)| a + d).collect();
            problem.residuals(&p_try, &mut r_try);
            let cost_try = cost_of(&r_try);
            if cost_try.is_finite() && cost_try < cost {
                let step: f64 = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
                p = p_try;
                std::mem::swap(&mut r, &mut r_try);
                cost = cost_try;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                if step < 1e-14 {
                    return p;
                }
                break;
            }
            mu *= 4.0;
            if mu > 1e12 {
                return p;
            }
        }
        if !improved || cost < 1e-24 {
            break;
        }
    }
    p
}

/// Build a validated rational map from fitted coefficients, snapping
/// numerically dead coefficients to zero first.
fn build_candidate(problem: &Problem, p: &[f64]) -> Option<RationalMap> {
    let (mut num, mut den) = problem.coeff_vectors(p);
    let scale = num
        .iter()
        .chain(den.iter())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if scale <= 0.0 {
        return None;
    }
    let floor = 1e-9 * scale;
    for c in num.iter_mut().chain(den.iter_mut()) {
        if c.norm() < floor {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    RationalMap::new(ComplexPoly::new(num), ComplexPoly::new(den)).ok()
}

/// Worst chordal deviation of f∘h from h∘g over the sample set.
fn verify_candidate(f: &RationalMap, g: &RationalMap, h: &RationalMap, samples: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for &z in samples {
        let p = ProjPoint::Finite(z);
        let lhs = f.apply(h.apply(p));
        let rhs = h.apply(g.apply(p));
        worst = worst.max(chordal_distance(lhs, rhs));
    }
    worst
}

/// Basis of the right nullspace of a small dense complex matrix, by
/// Gauss–Jordan elimination with partial pivoting: one vector per free
/// column, with that column's entry set to one.
fn nullspace(mut a: Vec<Complex64>, rows: usize, cols: usize) -> Vec<Vec<Complex64>> {
    let scale = a.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale <= 0.0 {
        return Vec::new();
    }
    let tol = 1e-9 * scale;
    let zero = Complex64::new(0.0, 0.0);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let mut bi = r;
        let mut bv = a[r * cols + c].norm();
        for i in (r + 1)..rows {
            let v = a[i * cols + c].norm();
            if v > bv {
                bv = v;
                bi = i;
            }
        }
        if bv <= tol {
            continue;
        }
        if bi != r {
            for k in 0..cols {
                a.swap(r * cols + k, bi * cols + k);
            }
        }
        let piv = a[r * cols + c];
        for k in c..cols {
            a[r * cols + k] /= piv;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if factor == zero {
                continue;
            }
            for k in c..cols {
                let t = a[r * cols + k];
                a[i * cols + k] -= factor * t;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &(_, c) in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|fc| {
            let mut v = vec![zero; cols];
            v[fc] = Complex64::new(1.0, 0.0);
            for &(pr, pc) in &pivots {
                v[pc] = -a[pr * cols + fc];
            }
            v
        })
        .collect()
}

/// The condition h(w) = x on homogeneous lifts, num(w)·x_den − den(w)·x_num
/// = 0, written as one row over h's stacked (num, den) coefficients. Lifts
/// make w = ∞ and x = ∞ ordinary cases.
fn interpolation_row(w: ProjPoint, x: ProjPoint, deg_h: usize, row: &mut [Complex64]) {
    let (wn, wd) = w.homogeneous();
    let (xn, xd) = x.homogeneous();
    let m = deg_h + 1;
    let one = Complex64::new(1.0, 0.0);
    let mut npow = vec![one; m];
    let mut dpow = vec![one; m];
    for k in 1..m {
        npow[k] = npow[k - 1] * wn;
        dpow[k] = dpow[k - 1] * wd;
    }
    for k in 0..m {
        let basis = npow[k] * dpow[deg_h - k];
        row[k] = basis * xd;
        row[m + k] = -(basis * xn);
    }
}

/// Caps for the marker-interpolation stage: how many target assignments are
/// enumerated and how many of the resulting starts (cheapest first) are
/// actually polished.
const MAX_ASSIGNMENTS: usize = 2048;
const MARKER_KEEP: usize = 12;

/// One interpolation condition in the making: the target for w is either a
/// free choice from a pool of f-periodic points, or forced to f(previous
/// target) because w closes a 2-cycle of g and h must respect the dynamics.
enum Slot {
    Free { w: ProjPoint, pool: usize },
    Chained { w: ProjPoint },
}

/// Candidate starts interpolated through matched periodic points.
///
/// A semiconjugacy satisfies h(Fix(gⁿ)) ⊆ Fix(fⁿ), and each matching
/// h(w) = x is linear in h's coefficients, so enumerating assignments of
/// g's period ≤ 2 points to f's and taking nullspaces of the little linear
/// systems lands essentially on top of any true solution. Random starts
/// alone tend to drift onto the (huge) manifold of constant maps instead.
fn marker_starts(f: &RationalMap, g: &RationalMap, deg_h: usize) -> Vec<Vec<f64>> {
    let (Ok(gm), Ok(fm)) = (collect_markers(g), collect_markers(f)) else {
        return Vec::new();
    };
    let pool1 = fm.period1.clone();
    let mut pool2 = fm.period1.clone();
    pool2.extend(fm.period2.iter().copied());
    if pool1.is_empty() {
        return Vec::new();
    }

    // Pair g's exact period-2 points into cycles (w, g(w)); the partner in
    // the marker list is consumed so each cycle contributes once.
    let mut cycles = Vec::new();
    let mut used = vec![false; gm.period2.len()];
    for i in 0..gm.period2.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let w = gm.period2[i];
        let w2 = g.apply(w);
        for (j, q) in gm.period2.iter().enumerate() {
            if !used[j] && chordal_distance(*q, w2) < 1e-6 {
                used[j] = true;
                break;
            }
        }
        cycles.push((w, w2));
    }

    // 2(deg_h + 1) complex coefficients, minus one for scale: this many
    // conditions pin h (a cycle contributes two at once).
    let needed = 2 * deg_h + 1;
    let mut slots = Vec::new();
    for &w in &gm.period1 {
        if slots.len() >= needed {
            break;
        }
        slots.push(Slot::Free { w, pool: 0 });
    }
    for &(w, w2) in &cycles {
        if slots.len() >= needed {
            break;
        }
        slots.push(Slot::Free { w, pool: 1 });
        slots.push(Slot::Chained { w: w2 });
    }
    if slots.is_empty() {
        return Vec::new();
    }

    let pools = [&pool1, &pool2];
    let radices: Vec<usize> = slots
        .iter()
        .filter_map(|s| match s {
            Slot::Free { pool, .. } => Some(pools[*pool].len()),
            Slot::Chained { .. } => None,
        })
        .collect();
    let total = radices
        .iter()
        .fold(1usize, |acc, &r| acc.saturating_mul(r))
        .min(MAX_ASSIGNMENTS);

    let m = deg_h + 1;
    let cols = 2 * m;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let digits: Vec<usize> = radices
            .iter()
            .map(|&rad| {
                let d = rem % rad;
                rem /= rad;
                d
            })
            .collect();
        let mut targets: Vec<ProjPoint> = Vec::with_capacity(slots.len());
        let mut di = 0;
        for slot in &slots {
            match slot {
                Slot::Free { pool, .. } => {
                    targets.push(pools[*pool][digits[di]]);
                    di += 1;
                }
                Slot::Chained { .. } => {
                    let prev = *targets.last().expect("chained slot follows a free one");
                    targets.push(f.apply(prev));
                }
            }
        }
        // All targets equal would interpolate a constant map; skip.
        if targets
            .iter()
            .all(|&t| chordal_distance(t, targets[0]) < 1e-9)
        {
            continue;
        }
        let mut a = vec![Complex64::new(0.0, 0.0); slots.len() * cols];
        for (row, (slot, &x)) in slots.iter().zip(&targets).enumerate() {
            let w = match slot {
                Slot::Free { w, .. } | Slot::Chained { w } => *w,
            };
            interpolation_row(w, x, deg_h, &mut a[row * cols..(row + 1) * cols]);
        }
        for v in nullspace(a, slots.len(), cols) {
            let mut p = vec![0.0; 4 * m];
            for k in 0..cols {
                p[2 * k] = v[k].re;
                p[2 * k + 1] = v[k].im;
            }
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            let gauge = 2.0f64.sqrt() / norm;
            for x in &mut p {
                *x *= gauge;
            }
            out.push(p);
        }
    }
    out
}

fn starts(problem: &Problem) -> Vec<Vec<f64>> {
    let n = problem.n_params();
    let m = problem.deg_h + 1;
    let mut out = Vec::with_capacity(N_STARTS);

    // h = z.
    let mut s = vec![0.0; n];
    s[2] = 1.0; // num coefficient of z
    s[2 * m] = 1.0; // den constant term
    out.push(s);

    // h = z^deg_h.
    let mut s = vec![0.0; n];
    s[2 * (m - 1)] = 1.0;
    s[2 * m] = 1.0;
    out.push(s);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    while out.len() < N_STARTS {
        let mut s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        let target = 2.0_f64.sqrt();
        for x in &mut s {
            *x *= target / norm;
        }
        out.push(s);
    }
    out
}

/// Searches for a rational map h of degree ≤ deg_h with f∘h = h∘g.
///
/// Both maps must have the same degree; `deg_h` is capped at 4. The search
/// is a deterministic multi-start least-squares fit; the first start whose
/// candidate passes an independent chordal verification below 1e-7 wins.
/// `Ok(None)` simply means no semiconjugacy was found at this degree — for
/// many pairs none exists.
pub fn semiconjugacy_search(
    f: &RationalMap,
    g: &RationalMap,
    deg_h: usize,
) -> Result<Option<RationalMap>> {
    if f.degree() != g.degree() {
        return Err(Error::ShapeMismatch(format!(
            "semiconjugacy requires equal degrees, got {} and {}",
            f.degree(),
            g.degree()
        )));
    }
    if deg_h == 0 || deg_h > MAX_DEG_H {
        return Err(Error::InvalidInput(format!(
            "deg_h must be between 1 and {MAX_DEG_H}, got {deg_h}"
        )));
    }

    let problem = Problem::new(f, g, deg_h);

    // Marker-interpolated starts first, cheapest by initial cost (the sort
    // is stable, so ties keep enumeration order and the search stays
    // deterministic), then the generic exploratory ones.
    let mut scored: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut r = Vec::new();
    for s in marker_starts(f, g, deg_h) {
        problem.residuals(&s, &mut r);
        let cost = cost_of(&r);
        if cost.is_finite() {
            scored.push((cost, s));
        }
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    scored.truncate(MARKER_KEEP);
    let mut candidates: Vec<Vec<f64>> = scored.into_iter().map(|(_, s)| s).collect();
    candidates.extend(starts(&problem));

    for start in candidates {
        let fitted = lm_fit(&problem, &start);
        let Some(h) = build_candidate(&problem, &fitted) else {
            continue;
        };
        let residual = verify_candidate(f, g, &h, &problem.samples);
        if residual < ACCEPT_TOL {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

//! Degree-d rational maps on the projective line: construction and
//! validation, chart-aware evaluation, formal iteration, Möbius conjugation,
//! and critical points.
//!
//! A map is stored as a pair of polynomials (num, den) with formal degree
//! d = max(deg num, deg den); validity means the scaled resultant stays away
//! from zero, so the degree is exact and num, den never vanish together.
//! Evaluation switches to the w = 1/z chart once |z| > 1, which keeps both
//! charts conditioned on the unit circle and lets escaping orbits pass
//! through Infinity without overflow.

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cpoly::{poly_roots, resultant_scaled_magnitude, ComplexPoly};
use crate::error::{Error, Result};

/// Formal degree bound for iteration (d^n); see `RationalMap::iterate_capped`
/// to override.
pub const DEFAULT_DEGREE_CAP: usize = 1024;

const RESULTANT_FLOOR: f64 = 1e-10;
const MOBIUS_DET_FLOOR: f64 = 1e-12;

/// A point of the projective line. Finite values of any modulus stay
/// `Finite`; `Infinity` is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjPoint {
    Finite(Complex64),
    Infinity,
}

impl ProjPoint {
    pub fn finite(re: f64, im: f64) -> Self {
        ProjPoint::Finite(Complex64::new(re, im))
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ProjPoint::Finite(z) => Some(*z),
            ProjPoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    /// Homogeneous coordinates (z : w), sup-normalized.
    pub(crate) fn homogeneous(&self) -> (Complex64, Complex64) {
        match *self {
            ProjPoint::Infinity => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            ProjPoint::Finite(z) => {
                if z.norm() <= 1.0 {
                    (z, Complex64::new(1.0, 0.0))
                } else {
                    (Complex64::new(1.0, 0.0), z.inv())
                }
            }
        }
    }
}

impl From<Complex64> for ProjPoint {
    fn from(z: Complex64) -> Self {
        ProjPoint::Finite(z)
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjPoint::Infinity => write!(f, "inf"),
            ProjPoint::Finite(z) => write!(f, "{z}"),
        }
    }
}

/// Chordal metric |x−y| / (sqrt(1+|x|²)·sqrt(1+|y|²)), extended to Infinity
/// by its limit 1/sqrt(1+|y|²). Bounded by 1; comparable to the spherical
/// (Fubini–Study) distance.
pub fn chordal_distance(x: ProjPoint, y: ProjPoint) -> f64 {
    match (x, y) {
        (ProjPoint::Infinity, ProjPoint::Infinity) => 0.0,
        (ProjPoint::Infinity, ProjPoint::Finite(z)) | (ProjPoint::Finite(z), ProjPoint::Infinity) => {
            // limit of the finite formula as the other argument grows;
            // computed via 1/|z| to stay stable for huge z
            if z.norm() > 1.0 {
                let w = z.inv().norm();
                w / (1.0 + z.inv().norm_sqr()).sqrt()
            } else {
                1.0 / (1.0 + z.norm_sqr()).sqrt()
            }
        }
        (ProjPoint::Finite(a), ProjPoint::Finite(b)) => {
            let (na, nb) = (a.norm(), b.norm());
            if na <= 1.0 && nb <= 1.0 {
                (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            } else if na > 1.0 && nb > 1.0 {
                // both outside: work in the 1/z chart, where the chordal
                // metric takes the same form
                let (ia, ib) = (a.inv(), b.inv());
                (ia - ib).norm() / ((1.0 + ia.norm_sqr()).sqrt() * (1.0 + ib.norm_sqr()).sqrt())
            } else {
                // mixed: the larger one could still overflow |a-b|; route
                // through the exact identity d(a,b) = d(1/a,1/b)
                let big = if na > nb { a } else { b };
                let small = if na > nb { b } else { a };
                if big.norm() > 1e100 {
                    let ib = big.inv();
                    let is = small;
                    // d(small, big) = d(1/small, 1/big) needs 1/small which
                    // may itself be huge if small ~ 0; use the direct mixed
                    // formula with 1/big instead:
                    // |a−b|/(√(1+|a|²)√(1+|b|²)) = |1 − a/b| / (√(1+|a|²)·√(1/|b|²+1))
                    let num = (Complex64::new(1.0, 0.0) - is * ib).norm();
                    num / ((1.0 + is.norm_sqr()).sqrt() * (1.0 + ib.norm_sqr()).sqrt())
                } else {
                    (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RationalMap {
    num: ComplexPoly,
    den: ComplexPoly,
    degree: usize,
}

impl RationalMap {
    /// Validated constructor: checks finiteness, exact degree (scaled
    /// resultant above 1e-10) and normalizes so the denominator's leading
    /// coefficient (or the numerator's, for constant denominators) has
    /// modulus 1.
    pub fn new(num: ComplexPoly, den: ComplexPoly) -> Result<Self> {
        crate::cpoly::require_finite(&num, "numerator")?;
        crate::cpoly::require_finite(&den, "denominator")?;
        let dn = num.degree();
        let dd = den.degree();
        let degree = match (dn, dd) {
            (None, None) => {
                return Err(Error::InvalidInput("both num and den are zero".into()))
            }
            (a, b) => a.unwrap_or(0).max(b.unwrap_or(0)),
        };
        if degree == 0 {
            return Err(Error::InvalidInput(
                "constant maps are not dynamical systems; degree must be >= 1".into(),
            ));
        }
        if den.is_zero() {
            return Err(Error::DegenerateMap(
                "denominator is identically zero".into(),
            ));
        }
        let res = resultant_scaled_magnitude(&num, &den);
        if res <= RESULTANT_FLOOR {
            return Err(Error::DegenerateMap(format!(
                "scaled resultant {res:.3e} <= {RESULTANT_FLOOR:.0e}: common factor / degree drop"
            )));
        }
        Ok(Self::normalized(num, den, degree))
    }

    /// Constructor for internally produced pairs whose exact degree is known
    /// (e.g. formal iterates), where a Sylvester determinant would be
    /// prohibitively large.
    pub(crate) fn new_unchecked(num: ComplexPoly, den: ComplexPoly, degree: usize) -> Self {
        Self::normalized(num, den, degree)
    }

    fn normalized(num: ComplexPoly, den: ComplexPoly, degree: usize) -> Self {
        // den's leading coefficient sets the scale; constant denominators
        // defer to num's leading instead
        let lead = match den.degree() {
            Some(d) if d >= 1 => den.leading().map_or(0.0, |c| c.norm()),
            _ => num.leading().map_or(0.0, |c| c.norm()),
        };
        let s = if lead > 0.0 && lead.is_finite() {
            1.0 / lead
        } else {
            1.0
        };
        let sc = Complex64::new(s, 0.0);
        RationalMap {
            num: num.scale(sc),
            den: den.scale(sc),
            degree,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num(&self) -> &ComplexPoly {
        &self.num
    }

    pub fn den(&self) -> &ComplexPoly {
        &self.den
    }

    /// Convenience: polynomial map num(z) with denominator 1.
    pub fn from_polynomial(num: ComplexPoly) -> Result<Self> {
        Self::new(num, ComplexPoly::constant(Complex64::new(1.0, 0.0)))
    }

    /// num reversed into the w = 1/z chart at the formal degree:
    /// z^d·num(1/z).
    pub(crate) fn num_rev(&self) -> ComplexPoly {
        self.num.reversed(self.degree)
    }

    pub(crate) fn den_rev(&self) -> ComplexPoly {
        self.den.reversed(self.degree)
    }

    /// Evaluate f at a point, choosing the chart by |z|: the pair
    /// (num(z) : den(z)) for |z| <= 1, (num_rev(w) : den_rev(w)) with
    /// w = 1/z otherwise. The resultant bound guarantees num and den never
    /// vanish simultaneously.
    pub fn apply(&self, x: ProjPoint) -> ProjPoint {
        let (p, q) = match x {
            ProjPoint::Finite(z) if z.norm() <= 1.0 => (self.num.eval(z), self.den.eval(z)),
            ProjPoint::Finite(z) => {
                let w = z.inv();
                (self.num_rev().eval(w), self.den_rev().eval(w))
            }
            ProjPoint::Infinity => (self.num_rev().eval(Complex64::new(0.0, 0.0)),
                                    self.den_rev().eval(Complex64::new(0.0, 0.0))),
        };
        if q.norm() == 0.0 {
            return ProjPoint::Infinity;
        }
        let v = p / q;
        if v.is_finite() {
            ProjPoint::Finite(v)
        } else {
            ProjPoint::Infinity
        }
    }

    /// n-fold pointwise application (no formal composition).
    pub fn apply_iterated(&self, x: ProjPoint, n: usize) -> ProjPoint {
        let mut y = x;
        for _ in 0..n {
            y = self.apply(y);
        }
        y
    }

    /// Formal n-th iterate as a degree-d^n rational map, via repeated
    /// homogeneous composition with joint sup-norm rescaling per step (the
    /// final constructor restores the leading-coefficient normalization).
    pub fn iterate(&self, n: usize) -> Result<RationalMap> {
        self.iterate_capped(n, DEFAULT_DEGREE_CAP)
    }

    pub fn iterate_capped(&self, n: usize, cap: usize) -> Result<RationalMap> {
        if n == 0 {
            return Err(Error::InvalidInput("iterate needs n >= 1".into()));
        }
        // compute d^n with overflow care
        let mut needed: usize = 1;
        for _ in 0..n {
            needed = needed
                .checked_mul(self.degree)
                .filter(|&v| v <= cap)
                .ok_or(Error::DegreeCapExceeded {
                    needed: 0, // patched below when representable
                    cap,
                })
                .map_err(|_| Error::DegreeCapExceeded {
                    needed: self.degree.checked_pow(n as u32).unwrap_or(usize::MAX),
                    cap,
                })?;
        }
        let mut p = self.num.clone();
        let mut q = self.den.clone();
        for _ in 1..n {
            let (np, nq) = self.compose_homogeneous(&p, &q);
            p = np;
            q = nq;
            let s = p.max_coeff_modulus().max(q.max_coeff_modulus());
            if s > 0.0 {
                let inv = Complex64::new(1.0 / s, 0.0);
                p = p.scale(inv);
                q = q.scale(inv);
            }
        }
        Ok(RationalMap::new_unchecked(p, q, needed))
    }

    /// (num_h(P,Q), den_h(P,Q)) where num_h, den_h are the degree-d
    /// homogenizations of this map.
    fn compose_homogeneous(&self, p: &ComplexPoly, q: &ComplexPoly) -> (ComplexPoly, ComplexPoly) {
        let d = self.degree;
        // powers of p and q up to d
        let one = ComplexPoly::constant(Complex64::new(1.0, 0.0));
        let mut p_pow = Vec::with_capacity(d + 1);
        let mut q_pow = Vec::with_capacity(d + 1);
        p_pow.push(one.clone());
        q_pow.push(one);
        for k in 1..=d {
            p_pow.push(p_pow[k - 1].mul(p));
            q_pow.push(q_pow[k - 1].mul(q));
        }
        let build = |poly: &ComplexPoly| -> ComplexPoly {
            let mut acc = ComplexPoly::zero();
            for k in 0..=d {
                let c = poly.coeff(k);
                if c.norm() == 0.0 {
                    continue;
                }
                acc = acc.add(&p_pow[k].mul(&q_pow[d - k]).scale(c));
            }
            acc
        };
        (build(&self.num), build(&self.den))
    }

    /// self ∘ inner as a validated map of degree deg(self)·deg(inner).
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        let expected = self
            .degree
            .checked_mul(inner.degree)
            .ok_or(Error::DegreeCapExceeded {
                needed: usize::MAX,
                cap: DEFAULT_DEGREE_CAP,
            })?;
        let (p, q) = self.compose_homogeneous(inner.num(), inner.den());
        let f = RationalMap::new(p, q)?;
        if f.degree() != expected {
            return Err(Error::DegenerateMap(format!(
                "composition degree {} dropped below {}",
                f.degree(),
                expected
            )));
        }
        Ok(f)
    }

    /// φ ∘ f ∘ φ⁻¹ as a validated degree-d map.
    pub fn conjugate(&self, phi: &MobiusTransform) -> Result<RationalMap> {
        let inv = phi.inverse();
        // f ∘ φ⁻¹ via homogeneous substitution of the degree-1 pair
        let p1 = ComplexPoly::new(vec![inv.b, inv.a]); // a z + b
        let q1 = ComplexPoly::new(vec![inv.d, inv.c]); // c z + d
        let (u, v) = self.compose_homogeneous(&p1, &q1);
        // φ ∘ (u : v) = (a u + b v : c u + d v)
        let num = u.scale(phi.a).add(&v.scale(phi.b));
        let den = u.scale(phi.c).add(&v.scale(phi.d));
        RationalMap::new(num, den).map_err(|e| match e {
            Error::DegenerateMap(msg) => Error::DegenerateMap(format!(
                "conjugation lost the degree numerically ({msg}); escalate precision"
            )),
            other => other,
        })
    }

    /// Norm of the derivative at x in the chordal (spherical) metric: the
    /// local expansion factor lim d(f(x), f(y)) / d(x, y) as y → x.
    /// Chart-independent; exactly 0 at critical points, and the product
    /// along a cycle is the cycle multiplier's modulus.
    pub fn spherical_derivative(&self, x: ProjPoint) -> f64 {
        let (src_w, s) = match x {
            ProjPoint::Infinity => (true, Complex64::new(0.0, 0.0)),
            ProjPoint::Finite(z) if z.norm() > 1.0 => (true, z.inv()),
            ProjPoint::Finite(z) => (false, z),
        };
        let image = self.apply(x);
        let (tgt_w, u) = match image {
            ProjPoint::Infinity => (true, Complex64::new(0.0, 0.0)),
            ProjPoint::Finite(z) if z.norm() > 1.0 => (true, z.inv()),
            ProjPoint::Finite(z) => (false, z),
        };
        let (nv, ndv, dv, ddv) = if src_w {
            let (nv, ndv) = self.num_rev().eval_with_derivative(s);
            let (dv, ddv) = self.den_rev().eval_with_derivative(s);
            (nv, ndv, dv, ddv)
        } else {
            let (nv, ndv) = self.num.eval_with_derivative(s);
            let (dv, ddv) = self.den.eval_with_derivative(s);
            (nv, ndv, dv, ddv)
        };
        let wr = ndv * dv - nv * ddv;
        // The target chart is where the image actually landed, so the
        // matching denominator cannot vanish for a validated map.
        let duds = if tgt_w { -wr / (nv * nv) } else { wr / (dv * dv) };
        duds.norm() * (1.0 + s.norm_sqr()) / (1.0 + u.norm_sqr())
    }

    /// Wronskian num'·den − num·den', whose finite roots are the finite
    /// critical points.
    pub fn wronskian(&self) -> ComplexPoly {
        self.num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()))
    }

    /// Critical points with multiplicity; the count at Infinity is the
    /// Wronskian's degree drop below 2d−2 (its vanishing order at 0 in the
    /// 1/z chart). Total = 2d − 2. Degree-1 maps have none.
    pub fn critical_points(&self) -> Result<Vec<(ProjPoint, usize)>> {
        let d = self.degree;
        if d < 2 {
            return Ok(Vec::new());
        }
        let w = self.wronskian();
        let expected = 2 * d - 2;
        let wd = match w.degree() {
            Some(wd) => wd,
            None => {
                return Err(Error::DegenerateMap(
                    "Wronskian vanished identically".into(),
                ))
            }
        };
        let mut out: Vec<(ProjPoint, usize)> = Vec::new();
        if wd > 0 {
            let clusters = poly_roots(&w, 1e-11)?;
            for cl in clusters {
                out.push((ProjPoint::Finite(cl.value), cl.multiplicity));
            }
        }
        let at_infinity = expected.saturating_sub(wd);
        if at_infinity > 0 {
            out.push((ProjPoint::Infinity, at_infinity));
        }
        Ok(out)
    }
}

impl Serialize for RationalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalMap", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RationalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            degree: usize,
            num: ComplexPoly,
            den: ComplexPoly,
        }
        let w = Wire::deserialize(d)?;
        let map = RationalMap::new(w.num, w.den).map_err(DeError::custom)?;
        if map.degree != w.degree {
            return Err(DeError::custom(format!(
                "stored degree {} does not match max(deg num, deg den) = {}",
                w.degree, map.degree
            )));
        }
        Ok(map)
    }
}

/// An automorphism of P¹ stored as a 2x2 matrix with Frobenius norm 1.
#[derive(Debug, Clone, Copy)]
pub struct MobiusTransform {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusTransform {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        for (v, name) in [(a, "a"), (b, "b"), (c, "c"), (d, "d")] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("Möbius entry {name}")));
            }
        }
        let frob = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr()).sqrt();
        if frob == 0.0 {
            return Err(Error::InvalidInput("zero Möbius matrix".into()));
        }
        let s = 1.0 / frob;
        let m = MobiusTransform {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        };
        // determinant of the normalized matrix: scale-free nondegeneracy test
        if m.det().norm() <= MOBIUS_DET_FLOOR {
            return Err(Error::InvalidInput(format!(
                "Möbius matrix is singular (scaled |det| = {:.3e})",
                m.det().norm()
            )));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MobiusTransform::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
        .expect("identity is nonsingular")
    }

    /// z ↦ a z + b (affine convenience constructor).
    pub fn affine(a: Complex64, b: Complex64) -> Result<Self> {
        MobiusTransform::new(a, b, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, x: ProjPoint) -> ProjPoint {
        let (z, w) = x.homogeneous();
        let p = self.a * z + self.b * w;
        let q = self.c * z + self.d * w;
        if q.norm() == 0.0 {
            return ProjPoint::Infinity;
        }
        let v = p / q;
        if v.is_finite() {
            ProjPoint::Finite(v)
        } else {
            ProjPoint::Infinity
        }
    }

    pub fn inverse(&self) -> MobiusTransform {
        // adjugate; renormalization happens in new(), and the determinant
        // bound guarantees it succeeds
        MobiusTransform::new(self.d, -self.b, -self.c, self.a)
            .expect("inverse of a nonsingular matrix")
    }

    /// self ∘ other (matrix product).
    pub fn compose(&self, other: &MobiusTransform) -> MobiusTransform {
        MobiusTransform::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
        .expect("product of nonsingular matrices")
    }

    /// The unique Möbius transform sending (p1, p2, p3) to (0, 1, ∞).
    /// Fails with `InvalidInput` when the points are not pairwise distinct
    /// (chordal separation below ~1e-12).
    pub fn map_points(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint) -> Result<MobiusTransform> {
        let sep = chordal_distance(p1, p2)
            .min(chordal_distance(p2, p3))
            .min(chordal_distance(p1, p3));
        if sep < 1e-12 {
            return Err(Error::InvalidInput(
                "map_points needs three distinct points".into(),
            ));
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match (p1, p2, p3) {
            (ProjPoint::Finite(z1), ProjPoint::Finite(z2), ProjPoint::Finite(z3)) => {
                MobiusTransform::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
            }
            (ProjPoint::Infinity, ProjPoint::Finite(z2), ProjPoint::Finite(z3)) => {
                MobiusTransform::new(zero, z2 - z3, one, -z3)
            }
            (ProjPoint::Finite(z1), ProjPoint::Infinity, ProjPoint::Finite(z3)) => {
                MobiusTransform::new(one, -z1, one, -z3)
            }
            (ProjPoint::Finite(z1), ProjPoint::Finite(z2), ProjPoint::Infinity) => {
                MobiusTransform::new(one, -z1, zero, z2 - z1)
            }
            _ => unreachable!("at most one of three distinct points is Infinity"),
        }
    }
}

impl Serialize for MobiusTransform {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MobiusTransform", 1)?;
        let m = [
            [[self.a.re, self.a.im], [self.b.re, self.b.im]],
            [[self.c.re, self.c.im], [self.d.re, self.d.im]],
        ];
        st.serialize_field("m", &m)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for MobiusTransform {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            m: [[[f64; 2]; 2]; 2],
        }
        let w = Wire::deserialize(d)?;
        let g = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        MobiusTransform::new(g(w.m[0][0]), g(w.m[0][1]), g(w.m[1][0]), g(w.m[1][1]))
            .map_err(DeError::custom)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProjPoint::Infinity => s.serialize_str("inf"),
            ProjPoint::Finite(z) => {
                use serde::ser::SerializeTuple;
                let mut t = s.serialize_tuple(2)?;
                t.serialize_element(&z.re)?;
                t.serialize_element(&z.im)?;
                t.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Inf(String),
            Pair([f64; 2]),
        }
        match Wire::deserialize(d)? {
            Wire::Inf(s) if s == "inf" => Ok(ProjPoint::Infinity),
            Wire::Inf(s) => Err(DeError::custom(format!("unknown point tag {s:?}"))),
            Wire::Pair([re, im]) => {
                if !re.is_finite() || !im.is_finite() {
                    Err(DeError::custom("point components must be finite"))
                } else {
                    Ok(ProjPoint::finite(re, im))
                }
            }
        }
    }
}

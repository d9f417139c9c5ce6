//! Minimal arbitrary-precision complex arithmetic for the root finder's
//! big-float mode, backed by `astro_float::BigFloat`.
//!
//! Only what Aberth iteration needs: ring operations, division, modulus,
//! and conversions to/from `f64`. Precision (mantissa bits) rides along in
//! a small context struct; rounding is to even throughout.

use astro_float::{BigFloat, RoundingMode, Sign};
use num_complex::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Copy)]
pub(crate) struct BigCtx {
    pub prec: usize,
}

impl BigCtx {
    pub fn new(bits: u32) -> Self {
        BigCtx { prec: bits as usize }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct BigC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigC {
    pub fn from_c64(z: Complex64, ctx: BigCtx) -> Self {
        BigC {
            re: f64_to_big(z.re, ctx),
            im: f64_to_big(z.im, ctx),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(bigfloat_to_f64(&self.re), bigfloat_to_f64(&self.im))
    }

    pub fn zero(ctx: BigCtx) -> Self {
        Self::from_c64(Complex64::new(0.0, 0.0), ctx)
    }

    pub fn add(&self, rhs: &BigC, ctx: BigCtx) -> BigC {
        BigC {
            re: self.re.add(&rhs.re, ctx.prec, RM),
            im: self.im.add(&rhs.im, ctx.prec, RM),
        }
    }

    pub fn sub(&self, rhs: &BigC, ctx: BigCtx) -> BigC {
        BigC {
            re: self.re.sub(&rhs.re, ctx.prec, RM),
            im: self.im.sub(&rhs.im, ctx.prec, RM),
        }
    }

    pub fn mul(&self, rhs: &BigC, ctx: BigCtx) -> BigC {
        let p = ctx.prec;
        let ac = self.re.mul(&rhs.re, p, RM);
        let bd = self.im.mul(&rhs.im, p, RM);
        let ad = self.re.mul(&rhs.im, p, RM);
        let bc = self.im.mul(&rhs.re, p, RM);
        BigC {
            re: ac.sub(&bd, p, RM),
            im: ad.add(&bc, p, RM),
        }
    }

    pub fn div(&self, rhs: &BigC, ctx: BigCtx) -> BigC {
        let p = ctx.prec;
        let denom = rhs.norm_sqr(ctx);
        let ac = self.re.mul(&rhs.re, p, RM);
        let bd = self.im.mul(&rhs.im, p, RM);
        let bc = self.im.mul(&rhs.re, p, RM);
        let ad = self.re.mul(&rhs.im, p, RM);
        BigC {
            re: ac.add(&bd, p, RM).div(&denom, p, RM),
            im: bc.sub(&ad, p, RM).div(&denom, p, RM),
        }
    }

    pub fn norm_sqr(&self, ctx: BigCtx) -> BigFloat {
        let p = ctx.prec;
        let rr = self.re.mul(&self.re, p, RM);
        let ii = self.im.mul(&self.im, p, RM);
        rr.add(&ii, p, RM)
    }

    pub fn abs(&self, ctx: BigCtx) -> BigFloat {
        self.norm_sqr(ctx).sqrt(ctx.prec, RM)
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.re.is_inf() || self.im.is_nan() || self.im.is_inf())
    }
}

/// `BigFloat::from_f64` drops one exponent step on subnormal inputs (probe:
/// `from_f64(2^-1074) * 2^1074 == 0.5`), so subnormals are lifted into the
/// normal range first and scaled back down with exact powers of two.
pub(crate) fn f64_to_big(x: f64, ctx: BigCtx) -> BigFloat {
    if x != 0.0 && x.is_finite() && x.abs() < f64::MIN_POSITIVE {
        // lift in two steps: 2^1074 itself overflows f64
        let lifted = BigFloat::from_f64((x * 2f64.powi(537)) * 2f64.powi(537), ctx.prec);
        let half_scale = BigFloat::from_f64(2f64.powi(-537), ctx.prec);
        lifted
            .mul(&half_scale, ctx.prec, RM)
            .mul(&half_scale, ctx.prec, RM)
    } else {
        BigFloat::from_f64(x, ctx.prec)
    }
}

/// Round-toward-zero conversion using the top 128 mantissa bits. astro-float
/// does not expose `to_f64`, so this reconstructs the value from raw parts:
/// the number is `sign * 0.m * 2^e` with the mantissa normalized to a leading
/// 1 bit in the most significant word.
pub(crate) fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _len, sign, exp, _inexact)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if words.is_empty() || words.iter().all(|&w| w == 0) {
        return 0.0;
    }
    // words are little-endian; the most significant word carries the top bit
    let hi = words[words.len() - 1] as f64;
    let lo = if words.len() >= 2 {
        words[words.len() - 2] as f64
    } else {
        0.0
    };
    let frac = hi * 2f64.powi(-64) + lo * 2f64.powi(-128);
    let mag = ldexp(frac, exp);
    match sign {
        Sign::Pos => mag,
        Sign::Neg => -mag,
    }
}

/// `x * 2^e` scaled in chunks: a single `powi` call overflows on the way to
/// subnormal results (2^-1073 would be computed as 1/2^1073 = 1/inf).
fn ldexp(mut x: f64, mut e: i32) -> f64 {
    const STEP: i32 = 1000;
    while e > STEP {
        x *= 2f64.powi(STEP);
        e -= STEP;
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP);
        e += STEP;
    }
    x * 2f64.powi(e)
}

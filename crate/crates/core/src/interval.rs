//! Outward-rounded interval arithmetic on arbitrary precision binary floats.
//!
//! Lower endpoints live in `FBig<Down>` (rounded toward −∞), upper endpoints
//! in `FBig<Up>` (rounded toward +∞), so every arithmetic step keeps the true
//! value enclosed. Transcendental results are additionally widened by a few
//! units in the last place, which keeps the enclosure valid even when the
//! underlying `exp`/`ln` are not correctly rounded.

use std::cmp::Ordering;

use dashu::base::Sign;
use dashu::float::round::mode::{Down, Up};
use dashu::float::FBig;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;

use crate::error::{Error, Result};

pub type Lower = FBig<Down>;
pub type Upper = FBig<Up>;

/// Decimal digits to binary precision, with a small guard.
pub fn digits_to_bits(digits: u32) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug)]
pub struct Interval {
    lo: Lower,
    hi: Upper,
    bits: usize,
}

fn down_to_up(x: &Lower) -> Upper {
    x.clone().with_rounding::<Up>()
}

fn up_to_down(x: &Upper) -> Lower {
    x.clone().with_rounding::<Down>()
}

fn ulp_scale(bits: usize) -> isize {
    -(bits as isize - 6)
}

fn widen_down(x: Lower, bits: usize) -> Lower {
    if x == Lower::ZERO {
        return x;
    }
    let mag = if x.sign() == Sign::Negative { -x.clone() } else { x.clone() };
    let eps = Lower::from_parts(IBig::ONE, ulp_scale(bits));
    (x - mag * eps).with_precision(bits).value()
}

fn widen_up(x: Upper, bits: usize) -> Upper {
    if x == Upper::ZERO {
        return x;
    }
    let mag = if x.sign() == Sign::Negative { -x.clone() } else { x.clone() };
    let eps = Upper::from_parts(IBig::ONE, ulp_scale(bits));
    (x + mag * eps).with_precision(bits).value()
}

/// Largest f64 not above `x`.
pub fn lower_to_f64(x: &Lower) -> f64 {
    let mut v = x.to_f64().value();
    if v.is_finite() {
        if let Ok(back) = Lower::try_from(v) {
            if back > *x {
                v = v.next_down();
            }
        }
    }
    v
}

/// Smallest f64 not below `x`.
pub fn upper_to_f64(x: &Upper) -> f64 {
    let mut v = x.to_f64().value();
    if v.is_finite() {
        if let Ok(back) = Upper::try_from(v) {
            if back < *x {
                v = v.next_up();
            }
        }
    }
    v
}

impl Interval {
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn lo(&self) -> &Lower {
        &self.lo
    }

    pub fn hi(&self) -> &Upper {
        &self.hi
    }

    /// The exact value `x`, rounded outward to `bits`.
    pub fn point(x: &Lower, bits: usize) -> Self {
        let lo = x.clone().with_precision(bits).value();
        let hi = down_to_up(x).with_precision(bits).value();
        Interval { lo, hi, bits }
    }

    pub fn from_ibig(n: &IBig, bits: usize) -> Self {
        let lo = Lower::from(n.clone()).with_precision(bits).value();
        let hi = Upper::from(n.clone()).with_precision(bits).value();
        Interval { lo, hi, bits }
    }

    pub fn from_ubig(n: &UBig, bits: usize) -> Self {
        Self::from_ibig(&IBig::from(n.clone()), bits)
    }

    pub fn from_i64(n: i64, bits: usize) -> Self {
        Self::from_ibig(&IBig::from(n), bits)
    }

    /// Exact enclosure of a finite f64 (every f64 is a dyadic rational).
    pub fn from_f64(x: f64, bits: usize) -> Result<Self> {
        let lo = Lower::try_from(x)
            .map_err(|_| Error::Domain(format!("non-finite value {x}")))?;
        Ok(Self::point(&lo, bits))
    }

    pub fn from_rational(r: &RBig, bits: usize) -> Result<Self> {
        Self::from_ibig(r.numerator(), bits).div(&Self::from_ubig(r.denominator(), bits))
    }

    pub fn add(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        Interval {
            lo: (&self.lo + &other.lo).with_precision(bits).value(),
            hi: (&self.hi + &other.hi).with_precision(bits).value(),
            bits,
        }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -up_to_down(&self.hi), hi: -down_to_up(&self.lo), bits: self.bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        let a = [self.lo.clone(), up_to_down(&self.hi)];
        let b = [other.lo.clone(), up_to_down(&other.hi)];
        let mut lo: Option<Lower> = None;
        let mut hi: Option<Upper> = None;
        for x in &a {
            for y in &b {
                let pl = (x * y).with_precision(bits).value();
                let pu = (down_to_up(x) * down_to_up(y)).with_precision(bits).value();
                lo = Some(match lo {
                    Some(l) if l <= pl => l,
                    _ => pl,
                });
                hi = Some(match hi {
                    Some(h) if h >= pu => h,
                    _ => pu,
                });
            }
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap(), bits }
    }

    /// Division; the divisor must not contain zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if !(other.certainly_positive() || other.certainly_negative()) {
            return Err(Error::Domain("interval division by an enclosure of zero".into()));
        }
        let bits = self.bits.max(other.bits);
        let a = [self.lo.clone(), up_to_down(&self.hi)];
        let b = [other.lo.clone(), up_to_down(&other.hi)];
        let mut lo: Option<Lower> = None;
        let mut hi: Option<Upper> = None;
        for x in &a {
            for y in &b {
                let x = x.clone().with_precision(bits).value();
                let y = y.clone().with_precision(bits).value();
                let ql = &x / &y;
                let qu = down_to_up(&x) / down_to_up(&y);
                lo = Some(match lo {
                    Some(l) if l <= ql => l,
                    _ => ql,
                });
                hi = Some(match hi {
                    Some(h) if h >= qu => h,
                    _ => qu,
                });
            }
        }
        Ok(Interval { lo: lo.unwrap(), hi: hi.unwrap(), bits })
    }

    pub fn exp(&self) -> Self {
        let bits = self.bits;
        let lo = widen_down(self.lo.clone().with_precision(bits).value().exp(), bits);
        let hi = widen_up(self.hi.clone().with_precision(bits).value().exp(), bits);
        // exp is positive; widening must not cross zero
        let lo = if lo.sign() == Sign::Negative { Lower::ZERO } else { lo };
        Interval { lo, hi, bits }
    }

    /// Natural logarithm; the argument must be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        if !self.certainly_positive() {
            return Err(Error::Domain("logarithm of a non-positive enclosure".into()));
        }
        let bits = self.bits;
        let lo = widen_down(self.lo.clone().with_precision(bits).value().ln(), bits);
        let hi = widen_up(self.hi.clone().with_precision(bits).value().ln(), bits);
        Ok(Interval { lo, hi, bits })
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > Lower::ZERO
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi < Upper::ZERO
    }

    /// `self < other` for every pair of enclosed values.
    pub fn certainly_less(&self, other: &Self) -> bool {
        up_to_down(&self.hi) < other.lo
    }

    /// `floor` of the enclosed value when both endpoints agree on it.
    pub fn certified_floor(&self) -> Option<IBig> {
        let fl = self.lo.floor().to_int().value();
        let fh = self.hi.floor().to_int().value();
        (fl == fh).then_some(fl)
    }

    /// Position of the enclosure relative to an integer.
    pub fn compare_int(&self, n: &IBig) -> Option<Ordering> {
        let p = Interval::from_ibig(n, self.bits);
        if self.certainly_less(&p) {
            Some(Ordering::Less)
        } else if p.certainly_less(self) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn lo_f64(&self) -> f64 {
        lower_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        upper_to_f64(&self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64().value() + self.hi.to_f64().value())
    }

    pub fn width_f64(&self) -> f64 {
        let w = down_to_up(&self.lo);
        upper_to_f64(&(&self.hi - &w))
    }

    /// Largest absolute value in the enclosure, rounded up.
    pub fn magnitude_f64(&self) -> f64 {
        self.lo_f64().abs().max(self.hi_f64().abs())
    }
}

/// The decimal number a double prints as, e.g. `0.01` rather than the
/// binary value just above it.
pub fn decimal_rational(x: f64) -> Result<RBig> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite value {x}")));
    }
    let text = format!("{x:e}");
    let (mantissa, exp) = text.split_once('e').expect("exponent form");
    let exp: i64 = exp.parse().expect("integer exponent");
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: IBig = format!("{int_part}{frac_part}").parse().expect("decimal digits");
    let shift = exp - frac_part.len() as i64;
    let ten = UBig::from(10u8);
    Ok(if shift >= 0 {
        RBig::from(digits * IBig::from(ten.pow(shift as usize)))
    } else {
        RBig::from_parts(digits, ten.pow((-shift) as usize))
    })
}

/// Rigorous root enclosure of a strictly decreasing function on an interval.
#[derive(Clone, Debug)]
pub struct Enclosure {
    pub lo: Lower,
    pub hi: Lower,
    /// True when bisection stopped because the sign could no longer be
    /// certified at the working precision.
    pub stalled: bool,
    pub iterations: u32,
}

impl Enclosure {
    pub fn width(&self) -> Lower {
        &self.hi - &self.lo
    }

    pub fn lo_f64(&self) -> f64 {
        lower_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        upper_to_f64(&down_to_up(&self.hi))
    }

    pub fn mid(&self) -> Lower {
        (&self.lo + &self.hi) / Lower::from(2)
    }
}

/// Bisection for a strictly decreasing `f` on `[lo, hi]` where `f(lo) > 0`
/// and `f(hi) < 0` are certified by the caller. Each step keeps the sign
/// certificate, so the root always lies in the returned enclosure.
/// Endpoints are carried at `bits` of precision.
pub fn bisect_decreasing<F>(
    f: F,
    lo: Lower,
    hi: Lower,
    tolerance: &Lower,
    max_iter: u32,
    bits: usize,
) -> Result<Enclosure>
where
    F: Fn(&Lower) -> Result<Interval>,
{
    // rounding lo down and hi up keeps both sign certificates
    let mut lo = lo.with_precision(bits).value();
    let mut hi = up_to_down(&down_to_up(&hi).with_precision(bits).value());
    let mut iterations = 0;
    let mut stalled = false;
    while &(&hi - &lo) > tolerance && iterations < max_iter {
        let mid = (&lo + &hi) / Lower::from(2);
        if mid <= lo || mid >= hi {
            stalled = true;
            break;
        }
        let v = f(&mid)?;
        iterations += 1;
        if v.certainly_positive() {
            lo = mid;
        } else if v.certainly_negative() {
            hi = mid;
        } else {
            stalled = true;
            break;
        }
    }
    Ok(Enclosure { lo, hi, stalled, iterations })
}

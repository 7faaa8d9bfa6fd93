//! Power-sum generating functions `Σ z^n`, optionally with a geometric tail
//! `z^N / (1 − z)`, and rigorous enclosures of their root `G(α) = 1`.
//!
//! Everything is parametrised by `s = −ln z ∈ (0, ∞)`: the term `z^n` is
//! `exp(−s·n)`, which stays well conditioned for exponents in the millions,
//! and `G(e^{−s}) − 1` is strictly decreasing in `s`.

use dashu::integer::{IBig, UBig};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{bisect_decreasing, digits_to_bits, Enclosure, Interval, Lower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffKind {
    /// `Σ_{n ≤ N} z^n + z^N / (1 − z)`.
    UpperWithTail,
    /// `Σ_{m ≤ N} z^m`.
    Lower,
}

/// A truncated generating function over a set of positive integer exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct CutoffGF {
    kind: CutoffKind,
    exponents: Vec<UBig>,
    cutoff: UBig,
}

impl CutoffGF {
    /// Keeps the exponents `<= cutoff`, sorted ascending.
    pub fn new(kind: CutoffKind, exponents: &[UBig], cutoff: UBig) -> Result<Self> {
        if cutoff == UBig::ZERO {
            return Err(Error::Domain("cutoff N must be positive".into()));
        }
        if exponents.iter().any(|e| *e == UBig::ZERO) {
            return Err(Error::Domain("exponents must be positive".into()));
        }
        let mut exponents: Vec<UBig> = exponents.iter().filter(|e| **e <= cutoff).cloned().collect();
        exponents.sort();
        Ok(CutoffGF { kind, exponents, cutoff })
    }

    /// Plain `Σ z^t` over all of `exponents`.
    pub fn power_sum(exponents: &[UBig]) -> Result<Self> {
        let max = exponents.iter().max().cloned().unwrap_or(UBig::ONE);
        Self::new(CutoffKind::Lower, exponents, max)
    }

    pub fn kind(&self) -> CutoffKind {
        self.kind
    }

    pub fn exponents(&self) -> &[UBig] {
        &self.exponents
    }

    pub fn cutoff(&self) -> &UBig {
        &self.cutoff
    }

    /// Enclosure of `G(e^{−s}) − 1` at an exact point `s > 0`.
    pub fn shifted_value(&self, s: &Lower, bits: usize) -> Result<Interval> {
        let s_iv = Interval::point(s, bits);
        let mut acc = Interval::from_i64(-1, bits);
        for n in &self.exponents {
            let x = s_iv.mul(&Interval::from_ubig(n, bits));
            acc = acc.add(&x.neg().exp());
        }
        if self.kind == CutoffKind::UpperWithTail {
            let head = s_iv.mul(&Interval::from_ubig(&self.cutoff, bits)).neg().exp();
            let one_minus_z = Interval::from_i64(1, bits).sub(&s_iv.neg().exp());
            acc = acc.add(&head.div(&one_minus_z)?);
        }
        Ok(acc)
    }

    /// `G(e^{−s})` in double precision.
    pub fn value_f64(&self, s: f64) -> f64 {
        let mut v: f64 = self.exponents.iter().map(|n| (-s * n.to_f64().value()).exp()).sum();
        if self.kind == CutoffKind::UpperWithTail {
            let n = self.cutoff.to_f64().value();
            v += (-s * n).exp() / -(-s).exp_m1();
        }
        v
    }

    /// `G'(z)` at `z = e^{−s}`, in double precision.
    pub fn derivative_f64(&self, s: f64) -> f64 {
        let mut v: f64 = self
            .exponents
            .iter()
            .map(|n| {
                let n = n.to_f64().value();
                n * (-s * (n - 1.0)).exp()
            })
            .sum();
        if self.kind == CutoffKind::UpperWithTail {
            let n = self.cutoff.to_f64().value();
            let one_minus_z = -(-s).exp_m1();
            v += n * (-s * (n - 1.0)).exp() / one_minus_z + (-s * n).exp() / (one_minus_z * one_minus_z);
        }
        v
    }
}

/// Working precision and stopping rule for root solves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootOptions {
    /// Binary working precision.
    pub bits: usize,
    /// Target width of the enclosure of `s = −ln α`. The enclosure of `α`
    /// itself is never wider.
    pub tolerance: f64,
}

impl RootOptions {
    pub fn with_digits(digits: u32, tolerance: f64) -> Self {
        RootOptions { bits: digits_to_bits(digits), tolerance }
    }
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions::with_digits(60, 1e-30)
    }
}

/// Rigorous enclosure of the root `α ∈ (0, 1)` of `G(α) = 1`.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    /// Enclosure of `s = −ln α = ln β`.
    pub log_beta: Enclosure,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Upper bound on the width of the `α` enclosure, below f64 resolution
    /// when the working precision allows.
    pub alpha_width: f64,
    /// `G'(α)` at the midpoint.
    pub derivative: f64,
    /// Upper bound on `|G(α_mid) − 1|`.
    pub residual: f64,
    pub bits: usize,
}

impl RootEnclosure {
    pub fn alpha(&self) -> f64 {
        (-self.log_beta.mid().to_f64().value()).exp()
    }

    pub fn log_beta_mid(&self) -> f64 {
        self.log_beta.mid().to_f64().value()
    }

    /// `[u·s_lo, u·s_hi]`, rounded outward.
    pub fn scaled_log_beta(&self, u: &UBig) -> (f64, f64) {
        let bits = self.bits;
        let uv = Interval::from_ubig(u, bits);
        let lo = Interval::point(&self.log_beta.lo, bits).mul(&uv);
        let hi = Interval::point(&self.log_beta.hi, bits).mul(&uv);
        (lo.lo_f64(), hi.hi_f64())
    }
}

fn pow2(e: isize) -> Lower {
    Lower::from_parts(IBig::ONE, e)
}

/// Solves `G(α) = 1` on `(0, 1)` by outward-rounded bisection in `s`.
pub fn cutoff_root(g: &CutoffGF, opts: &RootOptions) -> Result<RootEnclosure> {
    let bits = opts.bits;
    if g.kind == CutoffKind::Lower && g.exponents.len() < 2 {
        return Err(Error::NoRoot(format!(
            "power sum with {} term(s) never reaches 1 on (0, 1)",
            g.exponents.len()
        )));
    }
    if !(opts.tolerance > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let largest = g.exponents.last().cloned().unwrap_or(UBig::ONE).max(g.cutoff.clone());
    let smallest = g.exponents.first().cloned().unwrap_or(g.cutoff.clone());

    // s_lo: every term is close to 1, so G > 1
    let mut lo = pow2(-(largest.bit_len_isize() + 2));
    let mut tries = 0;
    while !g.shifted_value(&lo, bits)?.certainly_positive() {
        lo = &lo / Lower::from(2);
        tries += 1;
        if tries > 4 * bits {
            return Err(Error::NoRoot("could not certify G > 1 near z = 1".into()));
        }
    }
    // s_hi: every term is tiny, so G < 1
    let mut hi = pow2(-(smallest.bit_len_isize() - 1));
    tries = 0;
    while !g.shifted_value(&hi, bits)?.certainly_negative() {
        hi = &hi * Lower::from(2);
        tries += 1;
        if tries > 4 * bits {
            return Err(Error::NoRoot("could not certify G < 1 near z = 0".into()));
        }
    }

    let tol = Lower::try_from(opts.tolerance).map_err(|_| Error::Domain("bad tolerance".into()))?;
    let enc = bisect_decreasing(|s| g.shifted_value(s, bits), lo, hi, &tol, 8 * bits as u32, bits)?;
    let width = enc.width();
    if width > tol {
        return Err(Error::PrecisionUnreachable {
            target: opts.tolerance,
            reached: width.to_f64().value(),
            bits: bits as u32,
        });
    }

    let s_lo = Interval::point(&enc.lo, bits);
    let s_hi = Interval::point(&enc.hi, bits);
    let z_hi = s_lo.neg().exp();
    let z_lo = s_hi.neg().exp();
    let alpha_hi = z_hi.hi_f64();
    let alpha_lo = z_lo.lo_f64();
    let alpha_width = z_hi.sub(&z_lo).hi_f64();
    let mid = enc.mid();
    let residual = g.shifted_value(&mid, bits)?.magnitude_f64();
    let derivative = g.derivative_f64(mid.to_f64().value());
    Ok(RootEnclosure { log_beta: enc, alpha_lo, alpha_hi, alpha_width, derivative, residual, bits })
}

trait BitLen {
    fn bit_len_isize(&self) -> isize;
}

impl BitLen for UBig {
    fn bit_len_isize(&self) -> isize {
        use dashu::base::BitTest;
        self.bit_len() as isize
    }
}

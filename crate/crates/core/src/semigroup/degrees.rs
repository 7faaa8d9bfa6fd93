use std::collections::HashMap;

use dashu::integer::UBig;

use crate::error::{Error, Result};
use crate::height::ln_ubig;
use crate::interval::Interval;

const CHECK_BITS: usize = 128;

/// Outcome of a uniform log-discreteness check.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDiscreteness {
    pub holds: bool,
    /// Smallest gap `|log d − log d'|` over distinct pairs.
    pub min_gap: f64,
    /// A pair whose log gap is not above `delta`.
    pub witness: Option<(UBig, UBig)>,
}

/// Whether all pairwise gaps `|log d − log d'|` exceed `delta`.
pub fn is_uniformly_log_discrete(degrees: &[UBig], delta: f64) -> LogDiscreteness {
    let mut sorted = degrees.to_vec();
    sorted.sort();
    let mut min_gap = f64::INFINITY;
    let mut witness = None;
    let mut worst = f64::INFINITY;
    for w in sorted.windows(2) {
        let gap = ln_ubig(&w[1]) - ln_ubig(&w[0]);
        min_gap = min_gap.min(gap);
        if gap <= delta && gap < worst {
            worst = gap;
            witness = Some((w[0].clone(), w[1].clone()));
        }
    }
    LogDiscreteness { holds: witness.is_none(), min_gap, witness }
}

/// Known Mersenne prime degrees and a lower bound for any further one.
#[derive(Clone, Debug, PartialEq)]
pub struct MersenneTable {
    pub primes: Vec<UBig>,
    pub tail_bound: UBig,
}

impl MersenneTable {
    /// Appends further Mersenne primes; the caller supplies the new tail bound.
    pub fn extended(mut self, extra: &[UBig], tail_bound: UBig) -> Result<Self> {
        let last = self.primes.last().cloned().unwrap_or(UBig::ZERO);
        let mut prev = last;
        for q in extra {
            if *q <= prev {
                return Err(Error::Domain(format!("extension {q} is not increasing")));
            }
            prev = q.clone();
        }
        if tail_bound <= prev {
            return Err(Error::Domain("tail bound must exceed every listed prime".into()));
        }
        self.primes.extend_from_slice(extra);
        self.tail_bound = tail_bound;
        Ok(self)
    }
}

/// The first nine Mersenne primes; the tenth has 27 digits, so every further
/// one is at least 10^26.
pub fn mersenne_degrees() -> MersenneTable {
    let exps = [2u32, 3, 5, 7, 13, 17, 19, 31, 61];
    let primes = exps.iter().map(|&e| (UBig::ONE << e as usize) - UBig::ONE).collect();
    MersenneTable { primes, tail_bound: UBig::from(10u8).pow(26) }
}

/// `ln q > ln prev + delta`, certified with interval logs.
fn log_gap_exceeds(prev: u64, q: u64, delta: &Interval) -> Result<bool> {
    let lp = Interval::from_ubig(&UBig::from(prev), CHECK_BITS).ln()?;
    let lq = Interval::from_ubig(&UBig::from(q), CHECK_BITS).ln()?;
    let threshold = lp.add(delta);
    if threshold.certainly_less(&lq) {
        Ok(true)
    } else if lq.certainly_less(&threshold) {
        Ok(false)
    } else {
        Err(Error::PrecisionUnreachable { target: 0.0, reached: lq.width_f64(), bits: CHECK_BITS as u32 })
    }
}

/// `q_0` followed by `q_{n+1} = min{q prime : log q > log q_n + delta}`.
pub fn delta_spaced_primes(q0: u64, delta: f64, count: usize) -> Result<Vec<u64>> {
    if !primal::is_prime(q0) {
        return Err(Error::Domain(format!("{q0} is not prime")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let delta_iv = Interval::from_f64(delta, CHECK_BITS)?;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    out.push(q0);
    while out.len() < count {
        let prev = *out.last().unwrap();
        let guess = (prev as f64) * delta.exp();
        if !guess.is_finite() || guess >= u64::MAX as f64 / 2.0 {
            return Err(Error::ResourceLimit(format!("next prime after {prev} exceeds u64")));
        }
        let mut q = (guess.floor() as u64).saturating_sub(2).max(prev + 1);
        loop {
            if primal::is_prime(q) && log_gap_exceeds(prev, q, &delta_iv)? {
                break;
            }
            q = q.checked_add(1).ok_or_else(|| Error::ResourceLimit("prime search overflow".into()))?;
        }
        out.push(q);
    }
    Ok(out)
}

/// `(a + b, a^2 + b, …)`, `count` terms.
pub fn power_plus_b_degrees(a: u64, b: u64, count: usize) -> Result<Vec<UBig>> {
    if a < 2 {
        return Err(Error::Domain(format!("base {a} < 2")));
    }
    if a + b < 2 {
        return Err(Error::Domain("first degree a + b must be at least 2".into()));
    }
    let a = UBig::from(a);
    let b = UBig::from(b);
    let mut p = UBig::ONE;
    Ok((0..count)
        .map(|_| {
            p *= &a;
            &p + &b
        })
        .collect())
}

/// Number of words (identity included) over generators of the given
/// degrees whose degree product is at most `limit`.
pub fn count_words_with_degree_at_most(degrees: &[UBig], limit: f64) -> UBig {
    if !(limit >= 1.0) {
        return UBig::ZERO;
    }
    let cap = limit.floor();
    let cap = if cap >= u64::MAX as f64 { u64::MAX } else { cap as u64 };
    let small: Vec<u64> = degrees.iter().filter_map(|d| u64::try_from(d).ok()).filter(|&d| d <= cap).collect();
    let mut memo = HashMap::new();
    count_products(cap, &small, &mut memo)
}

fn count_products(x: u64, degrees: &[u64], memo: &mut HashMap<u64, UBig>) -> UBig {
    if let Some(v) = memo.get(&x) {
        return v.clone();
    }
    let mut total = UBig::ONE;
    for &d in degrees {
        if d <= x {
            total += count_products(x / d, degrees, memo);
        }
    }
    memo.insert(x, total.clone());
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ub(v: &[u64]) -> Vec<UBig> {
        v.iter().map(|&x| UBig::from(x)).collect()
    }

    #[test]
    fn mersenne_table() {
        let m = mersenne_degrees();
        assert_eq!(m.primes.len(), 9);
        assert_eq!(m.primes[0], UBig::from(3u8));
        assert_eq!(m.primes[8], UBig::from(2_305_843_009_213_693_951u64));
        assert_eq!(m.tail_bound, UBig::from(10u8).pow(26));
        let expect = [3u64, 7, 31, 127, 8191, 131071, 524287, 2147483647, 2305843009213693951];
        assert_eq!(m.primes, ub(&expect));
        for q in &expect {
            assert!(primal::is_prime(*q));
        }
    }

    #[test]
    fn mersenne_extension_needs_tail() {
        let m = mersenne_degrees();
        let p89 = (UBig::ONE << 89) - UBig::ONE;
        assert!(m.clone().extended(&[p89.clone()], UBig::from(10u8).pow(26)).is_err());
        let e = m.extended(&[p89], UBig::from(10u8).pow(33)).unwrap();
        assert_eq!(e.primes.len(), 10);
    }

    #[test]
    fn mersenne_is_log_discrete_at_log_three_halves() {
        let r = is_uniformly_log_discrete(&mersenne_degrees().primes, 1.5f64.ln());
        assert!(r.holds);
        assert!(r.witness.is_none());
    }

    #[test]
    fn two_three_gap() {
        let r = is_uniformly_log_discrete(&ub(&[2, 3]), 0.4);
        assert!(r.holds);
        assert!((r.min_gap - 1.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn six_seven_fails_with_witness() {
        let r = is_uniformly_log_discrete(&ub(&[7, 6]), 0.2);
        assert!(!r.holds);
        assert_eq!(r.witness, Some((UBig::from(6u8), UBig::from(7u8))));
    }

    #[test]
    fn spaced_primes_half() {
        assert_eq!(delta_spaced_primes(2, 0.5, 4).unwrap(), vec![2, 5, 11, 19]);
    }

    #[test]
    fn spaced_primes_large_delta() {
        // brute force: smallest prime q with ln q > ln 3 + 10
        let r = delta_spaced_primes(3, 10.0, 2).unwrap();
        let threshold = 3.0 * 10f64.exp();
        let mut q = threshold.ceil() as u64;
        while !primal::is_prime(q) {
            q += 1;
        }
        assert_eq!(r, vec![3, q]);
        assert_eq!(q, 66083);
    }

    #[test]
    fn spaced_primes_singleton_and_errors() {
        assert_eq!(delta_spaced_primes(13, 0.3, 1).unwrap(), vec![13]);
        assert!(delta_spaced_primes(12, 0.3, 3).is_err());
        assert!(delta_spaced_primes(13, 0.0, 3).is_err());
    }

    #[test]
    fn spaced_primes_are_log_discrete() {
        for (q0, delta) in [(2u64, 0.1), (3, 0.25), (101, 0.05), (7, 1.0)] {
            let ps = delta_spaced_primes(q0, delta, 12).unwrap();
            let r = is_uniformly_log_discrete(&ub(&ps), delta);
            assert!(r.holds, "{ps:?}");
        }
    }

    #[test]
    fn power_plus_b() {
        assert_eq!(power_plus_b_degrees(2, 1, 3).unwrap(), ub(&[3, 5, 9]));
        assert_eq!(power_plus_b_degrees(3, 0, 3).unwrap(), ub(&[3, 9, 27]));
        assert_eq!(power_plus_b_degrees(2, 0, 4).unwrap(), ub(&[2, 4, 8, 16]));
        assert!(power_plus_b_degrees(1, 5, 3).is_err());
    }

    #[test]
    fn word_degree_counts() {
        // products of 2s and 3s up to 12, as ordered words:
        // 1 | 2 3 | 4 6 6 9 | 8 12 12 12
        assert_eq!(count_words_with_degree_at_most(&ub(&[2, 3]), 12.5), UBig::from(11u8));
        assert_eq!(count_words_with_degree_at_most(&ub(&[2, 3]), 1.0), UBig::ONE);
        assert_eq!(count_words_with_degree_at_most(&ub(&[2, 3]), 0.5), UBig::ZERO);
    }
}

//! Restricted compositions: ordered sequences of parts drawn from a finite set.

use dashu::integer::UBig;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{cutoff_root, CutoffGF, RootOptions};

/// Largest `n` for which exact counts are tabulated.
pub const MAX_EXACT_N: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartSet {
    parts: Vec<u64>,
    gcd: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartSet {
    /// Sorts the parts; zero, duplicates and the empty set are rejected.
    pub fn new(parts: &[u64]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain("part set is empty".into()));
        }
        let mut parts = parts.to_vec();
        parts.sort_unstable();
        if parts[0] == 0 {
            return Err(Error::Domain("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate part in {parts:?}")));
        }
        let g = parts.iter().fold(0, |g, &t| gcd(g, t));
        Ok(PartSet { parts, gcd: g })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    fn require_aperiodic(&self) -> Result<()> {
        if self.gcd != 1 {
            return Err(Error::Aperiodic { parts: self.parts.clone(), gcd: self.gcd });
        }
        Ok(())
    }
}

/// `a_0, …, a_{n_max}` for the recurrence `a_n = Σ_{t ≤ n} a_{n−t}`.
pub fn count_table(set: &PartSet, n_max: u64) -> Result<Vec<UBig>> {
    if n_max > MAX_EXACT_N {
        return Err(Error::ResourceLimit(format!("n = {n_max} exceeds {MAX_EXACT_N}")));
    }
    let n_max = n_max as usize;
    let mut a = Vec::with_capacity(n_max + 1);
    a.push(UBig::ONE);
    for n in 1..=n_max {
        let mut v = UBig::ZERO;
        for &t in &set.parts {
            let t = t as usize;
            if t > n {
                break;
            }
            v += &a[n - t];
        }
        a.push(v);
    }
    Ok(a)
}

pub fn count_exact(set: &PartSet, n: u64) -> Result<UBig> {
    Ok(count_table(set, n)?.pop().expect("table is non-empty"))
}

/// Number of compositions of total at most `floor(r)`, the empty one included.
pub fn count_cumulative(set: &PartSet, r: f64) -> Result<UBig> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("R must be non-negative, got {r}")));
    }
    if r > MAX_EXACT_N as f64 {
        return Err(Error::ResourceLimit(format!("R = {r} exceeds {MAX_EXACT_N}")));
    }
    Ok(count_table(set, r.floor() as u64)?.iter().sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominantRoot {
    pub alpha: f64,
    pub beta: f64,
    pub derivative_at_alpha: f64,
    pub enclosure_width: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Upper bound on `|G_T(α) − 1|` at the reported `alpha`.
    pub residual: f64,
}

pub fn default_root_options() -> RootOptions {
    RootOptions::with_digits(30, 1e-18)
}

/// The root in `(0, 1)` of `Σ_{t∈T} z^t = 1`.
pub fn dominant_root(set: &PartSet) -> Result<DominantRoot> {
    dominant_root_with(set, &default_root_options())
}

pub fn dominant_root_with(set: &PartSet, opts: &RootOptions) -> Result<DominantRoot> {
    if set.len() < 2 {
        return Err(Error::Precondition(format!("need at least two parts, got {:?}", set.parts)));
    }
    let exps: Vec<UBig> = set.parts.iter().map(|&t| UBig::from(t)).collect();
    let g = CutoffGF::power_sum(&exps)?;
    let r = cutoff_root(&g, opts)?;
    let s = r.log_beta_mid();
    Ok(DominantRoot {
        alpha: r.alpha(),
        beta: s.exp(),
        derivative_at_alpha: r.derivative,
        enclosure_width: r.alpha_width,
        alpha_lo: r.alpha_lo,
        alpha_hi: r.alpha_hi,
        residual: r.residual,
    })
}

/// `α^{−n} / (α G_T'(α))`.
pub fn count_asymptotic(set: &PartSet, n: u64) -> Result<f64> {
    set.require_aperiodic()?;
    let root = dominant_root(set)?;
    Ok(asymptotic_from_root(&root, n as f64))
}

fn asymptotic_from_root(root: &DominantRoot, n: f64) -> f64 {
    (n * root.beta.ln()).exp() / (root.alpha * root.derivative_at_alpha)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CumulativeBounds {
    pub beta: f64,
    pub epsilon: f64,
    pub r: f64,
    /// `(1−ε) β / ((β−1) G'(1/β)) · β^R`.
    pub lower: f64,
    /// `(1+ε) β³ / ((β−1) G'(1/β)) · β^R`.
    pub upper: f64,
    #[serde(with = "crate::bigserde::ubig_str")]
    pub exact: UBig,
    pub contained: bool,
    /// Smallest integer `R0 <= calibration_limit` such that containment holds
    /// for every integer in `[R0, calibration_limit]`.
    pub validity_threshold: Option<u64>,
    pub calibration_limit: u64,
    /// Largest additive shortfall seen below the threshold, an empirical
    /// stand-in for the `O_ε(1)` terms.
    pub slack: f64,
}

const MIN_CALIBRATION: u64 = 64;

pub fn cumulative_bounds(set: &PartSet, r: f64, epsilon: f64) -> Result<CumulativeBounds> {
    set.require_aperiodic()?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("R must be non-negative, got {r}")));
    }
    let root = dominant_root(set)?;
    let beta = root.beta;
    let base = beta / ((beta - 1.0) * root.derivative_at_alpha);
    let lower_at = |x: f64| (1.0 - epsilon) * base * (x * beta.ln()).exp();
    let upper_at = |x: f64| (1.0 + epsilon) * base * beta * beta * (x * beta.ln()).exp();

    let limit = (r.ceil() as u64).max(MIN_CALIBRATION);
    let table = count_table(set, limit)?;
    let mut cumulative = Vec::with_capacity(table.len());
    let mut acc = UBig::ZERO;
    for a in &table {
        acc += a;
        cumulative.push(acc.to_f64().value());
    }
    let holds = |k: u64| {
        let c = cumulative[k as usize];
        lower_at(k as f64) <= c && c <= upper_at(k as f64)
    };
    let mut threshold = None;
    let mut k = limit + 1;
    while k > 0 && holds(k - 1) {
        k -= 1;
        threshold = Some(k);
    }
    let below = threshold.unwrap_or(limit + 1);
    let slack = (0..below.min(limit + 1))
        .map(|j| {
            let c = cumulative[j as usize];
            (lower_at(j as f64) - c).max(c - upper_at(j as f64)).max(0.0)
        })
        .fold(0.0f64, f64::max);

    let exact = count_cumulative(set, r)?;
    let exact_f = exact.to_f64().value();
    let (lower, upper) = (lower_at(r), upper_at(r));
    Ok(CumulativeBounds {
        beta,
        epsilon,
        r,
        lower,
        upper,
        contained: lower <= exact_f && exact_f <= upper,
        exact,
        validity_threshold: threshold,
        calibration_limit: limit,
        slack,
    })
}

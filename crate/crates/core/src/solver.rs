//! Two-sided bounds on the orbit growth exponent from truncated generating
//! functions over the sandwich exponents, plus diagnostic constants.

use dashu::integer::UBig;
use serde::Serialize;

use crate::approx::{approximate, ApproximationRequest, ExponentSet, PositiveReal};
use crate::error::{Error, Result};
pub use crate::gf::{cutoff_root, CutoffGF, CutoffKind, RootEnclosure, RootOptions};
use crate::height::ln_ubig;
use crate::interval::{digits_to_bits, Interval};

pub const DEFAULT_DIGITS: u32 = 60;
pub const DEFAULT_PRECISION: f64 = 1e-12;
pub const DEFAULT_EPS_PRIME: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Decimal working digits.
    pub digits: u32,
    /// Target width of each `b` endpoint's enclosure.
    pub precision: f64,
    /// Overrides the default common denominator.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_str")]
    pub denominator: Option<UBig>,
}

fn opt_str<S: serde::Serializer>(v: &Option<UBig>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(u) => s.collect_str(u),
        None => s.serialize_none(),
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { digits: DEFAULT_DIGITS, precision: DEFAULT_PRECISION, denominator: None }
    }
}

/// One side of the bracket.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSummary {
    pub kind: CutoffKind,
    pub exponent_count: usize,
    pub alpha: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Enclosure of `ln β = −ln α`.
    pub log_beta_lo: f64,
    pub log_beta_hi: f64,
    /// `G'(α)`.
    pub derivative: f64,
    pub residual: f64,
    pub iterations: u32,
}

impl RootSummary {
    fn from_enclosure(g: &CutoffGF, r: &RootEnclosure) -> Self {
        RootSummary {
            kind: g.kind(),
            exponent_count: g.exponents().len(),
            alpha: r.alpha(),
            alpha_lo: r.alpha_lo,
            alpha_hi: r.alpha_hi,
            log_beta_lo: r.log_beta.lo_f64(),
            log_beta_hi: r.log_beta.hi_f64(),
            derivative: r.derivative,
            residual: r.residual,
            iterations: r.log_beta.iterations,
        }
    }

    pub fn log_beta(&self) -> f64 {
        0.5 * (self.log_beta_lo + self.log_beta_hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentBracket {
    /// `u·ln β` of the lower cutoff, rounded down.
    pub b_lower: f64,
    /// `u·ln β` of the upper cutoff, rounded up.
    pub b_upper: f64,
    #[serde(serialize_with = "crate::bigserde::ubig_str::serialize")]
    pub u: UBig,
    pub delta: f64,
    #[serde(rename = "N", serialize_with = "crate::bigserde::ubig_str::serialize")]
    pub cutoff: UBig,
    pub tail: bool,
    pub lower_root: RootSummary,
    pub upper_root: RootSummary,
    pub exponents: ExponentSet,
    /// Tail-free root of `Σ d^{−b} = 1`.
    pub oracle: Option<f64>,
}

impl ExponentBracket {
    pub fn width(&self) -> f64 {
        self.b_upper - self.b_lower
    }

    pub fn contains(&self, b: f64) -> bool {
        self.b_lower <= b && b <= self.b_upper
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub const CSV_HEADER: &'static str = "label,degrees,delta,u,N,tail,b_lower,b_upper,width,oracle,deformed";

    pub fn csv_row(&self, label: &str, degree_count: usize) -> String {
        format!(
            "{label},{degree_count},{:e},{},{},{},{:.12},{:.12},{:e},{},{}",
            self.delta,
            self.u,
            self.cutoff,
            self.tail,
            self.b_lower,
            self.b_upper,
            self.width(),
            self.oracle.map(|b| format!("{b:.12}")).unwrap_or_default(),
            self.exponents.deformed()
        )
    }
}

fn check_degrees(degrees: &[UBig]) -> Result<()> {
    if degrees.len() < 2 {
        return Err(Error::Domain(format!("need at least two degrees, got {}", degrees.len())));
    }
    let two = UBig::from(2u8);
    if let Some(d) = degrees.iter().find(|d| **d < two) {
        return Err(Error::Domain(format!("degree {d} is below 2")));
    }
    let mut s = degrees.to_vec();
    s.sort();
    if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Domain(format!("degree {} is repeated", w[0])));
    }
    Ok(())
}

/// `floor(u · ln tail_bound)`.
fn tail_cutoff(u: &UBig, tail_bound: &UBig, digits: u32) -> Result<UBig> {
    use dashu::base::BitTest;
    let mut bits = digits_to_bits(digits) + u.bit_len();
    for _ in 0..6 {
        let x = Interval::from_ubig(tail_bound, bits).ln()?.mul(&Interval::from_ubig(u, bits));
        if let Some(fl) = x.certified_floor() {
            return UBig::try_from(fl).map_err(|_| Error::Domain("tail bound must exceed 1".into()));
        }
        bits *= 2;
    }
    Err(Error::PrecisionUnreachable { target: 1.0, reached: 1.0, bits: bits as u32 })
}

/// Brackets the exponent `b` with `(ln B)^b` orbit growth.
pub fn exponent_bounds(
    degrees: &[UBig],
    tail_bound: Option<&UBig>,
    delta: f64,
    opts: &SolverOptions,
) -> Result<ExponentBracket> {
    check_degrees(degrees)?;
    if let Some(t) = tail_bound {
        if let Some(d) = degrees.iter().find(|d| *d >= t) {
            return Err(Error::Domain(format!("degree {d} is not below the tail bound {t}")));
        }
    }
    if !(opts.precision > 0.0) {
        return Err(Error::Domain("precision must be positive".into()));
    }
    let mut req = ApproximationRequest::logs_of(degrees, delta).with_digits(opts.digits);
    req.denominator = opts.denominator.clone();
    let exps = approximate(&req)?;
    if !exps.injective {
        return Err(Error::Precondition(format!(
            "delta = {delta} is too coarse: the sandwich exponents collide"
        )));
    }
    let u = exps.u.clone();
    let cutoff = match tail_bound {
        Some(t) => tail_cutoff(&u, t, opts.digits)?,
        None => exps.upper.iter().max().expect("non-empty") + UBig::ONE,
    };
    let upper_kind = if tail_bound.is_some() { CutoffKind::UpperWithTail } else { CutoffKind::Lower };
    let g_upper = CutoffGF::new(upper_kind, &exps.lower, cutoff.clone())?;
    let g_lower = CutoffGF::new(CutoffKind::Lower, &exps.upper, cutoff.clone())?;

    let u_f = u.to_f64().value();
    let root_opts = RootOptions { bits: digits_to_bits(opts.digits), tolerance: opts.precision / u_f };
    let (upper, lower) = std::thread::scope(|scope| {
        let h = scope.spawn(|| cutoff_root(&g_upper, &root_opts));
        let lower = cutoff_root(&g_lower, &root_opts);
        (h.join().expect("solver thread panicked"), lower)
    });
    let (upper, lower) = (upper?, lower?);

    let (b_lower, _) = lower.scaled_log_beta(&u);
    let (_, b_upper) = upper.scaled_log_beta(&u);
    // the upper cutoff dominates the lower one, so its root is smaller
    if !(upper.alpha_lo <= lower.alpha_hi) || b_lower > b_upper {
        return Err(Error::Invariant(format!(
            "root ordering violated: upper-cutoff alpha {} vs lower-cutoff alpha {}",
            upper.alpha(),
            lower.alpha()
        )));
    }
    let oracle = direct_exponent_oracle(degrees, None).ok().map(|o| o.b);
    Ok(ExponentBracket {
        b_lower,
        b_upper,
        u,
        delta,
        cutoff,
        tail: tail_bound.is_some(),
        lower_root: RootSummary::from_enclosure(&g_lower, &lower),
        upper_root: RootSummary::from_enclosure(&g_upper, &upper),
        exponents: exps,
        oracle,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleValue {
    /// Root of `Σ d^{−b} = 1` over the listed degrees.
    pub b: f64,
    pub residual: f64,
    /// `[b, b']` where `b'` also counts unknown degrees at or above the tail
    /// bound, spaced in log scale at least as widely as the listed ones.
    pub tail_interval: Option<(f64, f64)>,
}

fn bisect_f64(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f decreasing, f(lo) > 0 > f(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    0.5 * (lo + hi)
}

/// Solves `Σ_d d^{−b} = 1` by bisection in `b`.
pub fn direct_exponent_oracle(degrees: &[UBig], tail_bound: Option<&UBig>) -> Result<OracleValue> {
    check_degrees(degrees)?;
    let logs: Vec<f64> = degrees.iter().map(ln_ubig).collect();
    let sum = |b: f64| logs.iter().map(|l| (-b * l).exp()).sum::<f64>();
    let hi = (degrees.len() as f64).log2() + 1.0;
    let b = bisect_f64(|b| sum(b) - 1.0, 0.0, hi);
    let residual = (sum(b) - 1.0).abs();
    let tail_interval = match tail_bound {
        None => None,
        Some(t) => {
            let lt = ln_ubig(t);
            let mut sorted = logs.clone();
            sorted.sort_by(f64::total_cmp);
            let gap = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            // Σ_{k ≥ 0} T^{−b} e^{−b k gap}
            let tail = |b: f64| (-b * lt).exp() / -(-b * gap).exp_m1();
            let lo = bisect_f64(|x| sum(x) + tail(x) - 1.0, b, hi.max(b) + 1.0);
            Some((b, lo))
        }
    };
    Ok(OracleValue { b, residual, tail_interval })
}

/// Smallest consecutive gap of the sorted reals, shrunk by a relative 1e-12
/// so that it is a strict lower bound.
pub fn discreteness_constant(reals: &[f64]) -> Result<f64> {
    if reals.len() < 2 {
        return Err(Error::Domain("need at least two reals".into()));
    }
    let mut s = reals.to_vec();
    s.sort_by(f64::total_cmp);
    let gap = s.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if !(gap > 0.0) {
        return Err(Error::Domain("reals are not distinct".into()));
    }
    Ok(gap * (1.0 - 1e-12))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticConstants {
    pub t1: f64,
    pub delta_t: f64,
    pub e_t: f64,
    pub c_t: f64,
    /// `|g_T(c_T) − 1/2|`.
    pub residual: f64,
}

/// Solves `z + z/(1 − z^{e_T}) = 1/2` with `e_T = δ_T / min(T)`.
pub fn c_t_bound(reals: &[f64], delta_t: f64) -> Result<DiagnosticConstants> {
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(Error::Domain(format!("delta_T must be positive, got {delta_t}")));
    }
    let t1 = reals.iter().copied().fold(f64::INFINITY, f64::min);
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(Error::Domain("reals must be positive".into()));
    }
    let e_t = delta_t / t1;
    let g = |z: f64| z + z / -(e_t * z.ln()).exp_m1();
    let c_t = bisect_f64(|z| 0.5 - g(z), 0.0, 1.0);
    Ok(DiagnosticConstants { t1, delta_t, e_t, c_t, residual: (g(c_t) - 0.5).abs() })
}

/// `(1/(c t1)) · (1 − c^{2δ/(t1−δ)}) / c^{(t1+δ)/(t1−δ)}`, an upper bound on
/// the untruncated bracket width.
pub fn gap_bound(delta: f64, diag: &DiagnosticConstants) -> Result<f64> {
    let t1 = diag.t1;
    if !(delta > 0.0 && delta < diag.delta_t.min(t1)) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, min(delta_T, t1))")));
    }
    let lc = diag.c_t.ln();
    let num = -(2.0 * delta / (t1 - delta) * lc).exp_m1();
    let den = ((t1 + delta) / (t1 - delta) * lc).exp();
    Ok(num / (diag.c_t * t1 * den))
}

/// Largest `δ` whose gap bound is at most `target_width`.
pub fn suggest_delta(diag: &DiagnosticConstants, target_width: f64) -> Result<f64> {
    if !(target_width > 0.0) {
        return Err(Error::Domain("target width must be positive".into()));
    }
    let top = diag.delta_t.min(diag.t1);
    let (mut lo, mut hi) = (0.0f64, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap_bound(mid, diag)? <= target_width {
            lo = mid
        } else {
            hi = mid
        }
    }
    if lo == 0.0 {
        return Err(Error::Domain(format!("no delta reaches width {target_width}")));
    }
    Ok(lo)
}

/// `α^{n_{t1}} >= c_T` for the upper-cutoff root, where `t1` is the smallest real.
pub fn root_lower_bound_holds(reals: &[PositiveReal], bracket: &ExponentBracket, diag: &DiagnosticConstants) -> bool {
    let i1 = (0..reals.len())
        .min_by(|&a, &b| reals[a].approx().total_cmp(&reals[b].approx()))
        .expect("non-empty");
    let n = bracket.exponents.lower[i1].to_f64().value();
    // α^n with α rounded down
    (n * bracket.upper_root.alpha_lo.ln()).exp() >= diag.c_t
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplicitConstants {
    pub eps_prime: f64,
    pub c_lower: f64,
    pub c_upper: f64,
}

/// Multiplicative constants of the two-sided `(ln B)^b` estimate.
pub fn explicit_constants(h_p: f64, b_s: f64, eps_prime: f64, bracket: &ExponentBracket) -> Result<ExplicitConstants> {
    if !(h_p > b_s) {
        return Err(Error::Domain(format!("h(P) = {h_p} must exceed b_S = {b_s}")));
    }
    if !(0.0..1.0).contains(&eps_prime) {
        return Err(Error::Domain(format!("eps' must lie in [0, 1), got {eps_prime}")));
    }
    let u = bracket.u.to_f64().value();
    let side = |r: &RootSummary| {
        let s = r.log_beta();
        (s.exp(), s.exp_m1(), r.derivative, u * s)
    };
    let (beta2, beta2_m1, d2, b2) = side(&bracket.lower_root);
    let (beta1, beta1_m1, d1, b1) = side(&bracket.upper_root);
    let c_lower = (1.0 - eps_prime) * beta2 / (beta2_m1 * d2 * (h_p + b_s).powf(b2));
    let c_upper = (1.0 + eps_prime) * beta1.powi(3) / (beta1_m1 * d1 * (h_p - b_s).powf(b1));
    Ok(ExplicitConstants { eps_prime, c_lower, c_upper })
}

/// Exponents as a `CutoffGF` of the given kind, for callers working directly
/// with truncated generating functions.
pub fn cutoff_from_integers(kind: CutoffKind, exponents: &[u64], cutoff: u64) -> Result<CutoffGF> {
    let e: Vec<UBig> = exponents.iter().map(|&x| UBig::from(x)).collect();
    CutoffGF::new(kind, &e, UBig::from(cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ub(v: &[u64]) -> Vec<UBig> {
        v.iter().map(|&x| UBig::from(x)).collect()
    }

    // Independent root of Σ d^{−b} = 1 by plain bisection on powf.
    fn oracle(ds: &[f64]) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 10.0f64);
        while hi - lo > 1e-15 {
            let m = 0.5 * (lo + hi);
            let v: f64 = ds.iter().map(|d| d.powf(-m)).sum();
            if v > 1.0 {
                lo = m
            } else {
                hi = m
            }
        }
        lo
    }

    #[test]
    fn oracle_values() {
        let o = direct_exponent_oracle(&ub(&[2, 3]), None).unwrap();
        assert!((o.b - 0.7878849110).abs() < 1e-9);
        assert!((o.b - oracle(&[2.0, 3.0])).abs() < 1e-12);
        let o = direct_exponent_oracle(&ub(&[2, 4]), None).unwrap();
        let expect = -((5f64.sqrt() - 1.0) / 2.0).log2();
        assert!((o.b - expect).abs() < 1e-12);
        let o = direct_exponent_oracle(&ub(&[3, 7]), None).unwrap();
        assert!((o.b - 0.4681782289).abs() < 1e-9);
        assert!(o.residual < 1e-12);
        assert!(direct_exponent_oracle(&ub(&[2, 2]), None).is_err());
        assert!(direct_exponent_oracle(&ub(&[5]), None).is_err());
    }

    #[test]
    fn brackets_contain_oracle() {
        for ds in [&[2u64, 3][..], &[3, 7], &[2, 4], &[3, 5, 17]] {
            let d = ub(ds);
            let fl: Vec<f64> = ds.iter().map(|&x| x as f64).collect();
            let b = exponent_bounds(&d, None, 1e-3, &SolverOptions::default()).unwrap();
            let o = oracle(&fl);
            assert!(b.contains(o), "{ds:?}: {} not in [{}, {}]", o, b.b_lower, b.b_upper);
            assert_eq!(b.oracle.map(|x| (x - o).abs() < 1e-12), Some(true));
        }
    }

    #[test]
    fn bracket_narrows_with_delta() {
        let d = ub(&[2, 3]);
        let mut prev = f64::INFINITY;
        for delta in [1e-1, 1e-2, 1e-3, 1e-4] {
            let b = exponent_bounds(&d, None, delta, &SolverOptions::default()).unwrap();
            assert!(b.width() <= prev, "width grew at delta {delta}");
            prev = b.width();
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn mersenne_tail_bracket() {
        let m = crate::semigroup::mersenne_degrees();
        let b = exponent_bounds(&m.primes, Some(&m.tail_bound), 1e-3, &SolverOptions::default()).unwrap();
        assert!(b.tail);
        assert!(b.b_lower < 0.60848 && 0.60848 < b.b_upper, "{} {}", b.b_lower, b.b_upper);
        // N = floor(2001 · ln 10^26)
        assert_eq!(b.cutoff, UBig::from(119_794u32));
    }

    #[test]
    fn reproduces_coarse_denominator() {
        let m = crate::semigroup::mersenne_degrees();
        let opts = SolverOptions { denominator: Some(UBig::from(1000u16)), ..Default::default() };
        let b = exponent_bounds(&m.primes, Some(&m.tail_bound), 0.002, &opts).unwrap();
        assert_eq!(b.exponents.lower, ub(&[1098, 1945, 3433, 4844, 9010, 11783, 13169, 21487, 42281]));
        assert!((b.b_lower - 0.608390).abs() < 5e-6, "{}", b.b_lower);
        assert!((b.b_upper - 0.608712).abs() < 5e-6, "{}", b.b_upper);
    }

    #[test]
    fn coarse_delta_is_refused() {
        // log 6 and log 7 collide at u = 3
        let e = exponent_bounds(&ub(&[2, 3, 6, 7]), None, 0.9, &SolverOptions::default());
        assert!(matches!(e, Err(Error::Precondition(_))), "{e:?}");
    }

    #[test]
    fn diagnostics() {
        let t = [3f64.ln(), 7f64.ln()];
        let d = c_t_bound(&t, 0.5).unwrap();
        assert!((d.e_t - 0.4551196133).abs() < 1e-9);
        assert!((d.c_t - 0.1765464692).abs() < 1e-9);
        assert!(d.residual < 1e-12);
        let bigger = c_t_bound(&t, 0.7).unwrap();
        assert!(bigger.c_t > d.c_t);
        assert!(c_t_bound(&t, 0.0).is_err());
    }

    #[test]
    fn gap_bound_behaviour() {
        let t = [3f64.ln(), 7f64.ln()];
        let d = c_t_bound(&t, discreteness_constant(&t).unwrap()).unwrap();
        let mut prev = 0.0;
        for k in 1..50 {
            let delta = k as f64 * t[0] / 100.0;
            if delta >= d.delta_t {
                break;
            }
            let g = gap_bound(delta, &d).unwrap();
            assert!(g >= prev);
            prev = g;
        }
        assert!(gap_bound(1e-12, &d).unwrap() < 1e-9);
        assert!(gap_bound(0.0, &d).is_err());
        let b = exponent_bounds(&ub(&[3, 7]), None, 1e-3, &SolverOptions::default()).unwrap();
        assert!(gap_bound(1e-3, &d).unwrap() >= b.width());
        let reals = vec![PositiveReal::log_of(3u8), PositiveReal::log_of(7u8)];
        assert!(root_lower_bound_holds(&reals, &b, &d));
    }

    #[test]
    fn suggested_delta_meets_target() {
        let t = [2f64.ln(), 3f64.ln()];
        let d = c_t_bound(&t, discreteness_constant(&t).unwrap()).unwrap();
        let delta = suggest_delta(&d, 1e-3).unwrap();
        assert!(gap_bound(delta, &d).unwrap() <= 1e-3);
        assert!(gap_bound(delta * 1.01, &d).unwrap() > 1e-3);
    }

    #[test]
    fn constants_are_positive() {
        let b = exponent_bounds(&ub(&[2, 3]), None, 1e-2, &SolverOptions::default()).unwrap();
        let c = explicit_constants(5f64.ln(), 2f64.ln() / 1.0, 0.5, &b).unwrap();
        assert!(c.c_lower > 0.0 && c.c_upper > 0.0);
        let z = explicit_constants(5f64.ln(), 0.1, 0.0, &b).unwrap();
        let h = explicit_constants(5f64.ln(), 0.1, 0.5, &b).unwrap();
        assert!((h.c_lower / z.c_lower - 0.5).abs() < 1e-12);
        assert!((h.c_upper / z.c_upper - 1.5).abs() < 1e-12);
        assert!(explicit_constants(0.1, 0.2, 0.5, &b).is_err());
    }

    #[test]
    fn tail_interval_sits_above_plain_root() {
        let m = crate::semigroup::mersenne_degrees();
        let o = direct_exponent_oracle(&m.primes, Some(&m.tail_bound)).unwrap();
        assert!((o.b - 0.6084777452).abs() < 1e-9);
        let (lo, hi) = o.tail_interval.unwrap();
        assert_eq!(lo, o.b);
        assert!(hi >= lo && hi - lo < 1e-9);
    }

    #[test]
    fn json_report() {
        let b = exponent_bounds(&ub(&[2, 3]), None, 1e-2, &SolverOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&b.to_json().unwrap()).unwrap();
        assert_eq!(v["u"], "201");
        assert!(v["b_lower"].as_f64().unwrap() <= v["b_upper"].as_f64().unwrap());
        assert_eq!(b.csv_row("x", 2).split(',').count(), ExponentBracket::CSV_HEADER.split(',').count());
    }
}

//! Common-denominator rational sandwiches `n_t/u < t < m_t/u` for a finite
//! set of positive reals, with a gcd repair step.

use std::fmt;

use dashu::base::{BitTest, Gcd};
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{decimal_rational, digits_to_bits, Interval};

pub const DEFAULT_DIGITS: u32 = 60;

/// Extra precision rounds tried before a floor is declared uncertifiable.
const ESCALATIONS: u32 = 6;

/// A positive real known exactly enough to enclose to any precision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositiveReal {
    /// `ln q` for an integer `q >= 2`.
    LogOf(#[serde(with = "crate::bigserde::ubig_str")] UBig),
    /// A finite positive double, taken as the exact dyadic rational it is.
    Value(f64),
}

impl PositiveReal {
    pub fn log_of(q: impl Into<UBig>) -> Self {
        PositiveReal::LogOf(q.into())
    }

    pub fn enclose(&self, bits: usize) -> Result<Interval> {
        match self {
            PositiveReal::LogOf(q) => Interval::from_ubig(q, bits).ln(),
            PositiveReal::Value(x) => Interval::from_f64(*x, bits),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            PositiveReal::LogOf(q) => crate::height::ln_ubig(q),
            PositiveReal::Value(x) => *x,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PositiveReal::LogOf(q) if *q < UBig::from(2u8) => {
                Err(Error::Domain(format!("log {q} is not positive")))
            }
            PositiveReal::Value(x) if !(x.is_finite() && *x > 0.0) => {
                Err(Error::Domain(format!("{x} is not a positive real")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PositiveReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositiveReal::LogOf(q) => write!(f, "log {q}"),
            PositiveReal::Value(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationRequest {
    pub reals: Vec<PositiveReal>,
    /// Read as the decimal it prints as.
    pub delta: f64,
    /// Decimal guard digits for the enclosures.
    pub digits: u32,
    /// Replaces the default denominator (smallest integer above `2/δ`).
    /// Must satisfy `u·δ > 1`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_ubig")]
    pub denominator: Option<UBig>,
}

mod opt_ubig {
    use std::str::FromStr;

    use dashu::integer::UBig;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<UBig>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(u) => s.collect_str(u),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<UBig>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| UBig::from_str(&s).map_err(D::Error::custom))
            .transpose()
    }
}

impl ApproximationRequest {
    pub fn new(reals: Vec<PositiveReal>, delta: f64) -> Self {
        ApproximationRequest { reals, delta, digits: DEFAULT_DIGITS, denominator: None }
    }

    pub fn logs_of(degrees: &[UBig], delta: f64) -> Self {
        Self::new(degrees.iter().cloned().map(PositiveReal::LogOf).collect(), delta)
    }

    pub fn with_denominator(mut self, u: UBig) -> Self {
        self.denominator = Some(u);
        self
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Deformation {
    /// Both gcds were already 1.
    Skipped,
    Applied {
        power: u32,
        #[serde(with = "crate::bigserde::ubig_str")]
        multiplier: UBig,
        /// Indices of the two smallest reals.
        anchors: (usize, usize),
    },
}

/// Numerators over a common denominator, parallel to the request's reals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSet {
    #[serde(with = "crate::bigserde::ubig_str")]
    pub u: UBig,
    #[serde(with = "crate::bigserde::ubig_str_list")]
    pub lower: Vec<UBig>,
    #[serde(with = "crate::bigserde::ubig_str_list")]
    pub upper: Vec<UBig>,
    pub deformation: Deformation,
    pub injective: bool,
}

impl ExponentSet {
    pub fn deformed(&self) -> bool {
        matches!(self.deformation, Deformation::Applied { .. })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn gcd_all(v: &[UBig]) -> UBig {
    // dashu refuses gcd(0, 0)
    v.iter().fold(UBig::ZERO, |g, x| if g == UBig::ZERO { x.clone() } else { (&g).gcd(x) })
}

fn all_distinct(v: &[UBig]) -> bool {
    let mut s = v.to_vec();
    s.sort();
    s.windows(2).all(|w| w[0] != w[1])
}

fn validate(req: &ApproximationRequest) -> Result<()> {
    if !(req.delta > 0.0 && req.delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be positive, got {}", req.delta)));
    }
    if req.reals.is_empty() {
        return Err(Error::Domain("no reals to approximate".into()));
    }
    for t in &req.reals {
        t.validate()?;
    }
    let bits = digits_to_bits(req.digits);
    let encl: Vec<Interval> = req.reals.iter().map(|t| t.enclose(bits)).collect::<Result<_>>()?;
    for i in 0..req.reals.len() {
        for j in i + 1..req.reals.len() {
            let (a, b) = (&req.reals[i], &req.reals[j]);
            let same = match (a, b) {
                (PositiveReal::LogOf(p), PositiveReal::LogOf(q)) => p == q,
                (PositiveReal::Value(x), PositiveReal::Value(y)) => x == y,
                _ => !(encl[i].certainly_less(&encl[j]) || encl[j].certainly_less(&encl[i])),
            };
            if same {
                return Err(Error::Domain(format!("{a} and {b} are not distinct")));
            }
        }
    }
    Ok(())
}

/// `(floor(x), exact)`; `exact` is true when `x` is certified to be an integer.
fn certified_floor_of(t: &PositiveReal, scale: &UBig, base_bits: usize) -> Result<(IBig, bool)> {
    let mut bits = base_bits + scale.bit_len();
    for _ in 0..=ESCALATIONS {
        let x = t.enclose(bits)?.mul(&Interval::from_ubig(scale, bits));
        if let Some(fl) = x.certified_floor() {
            let exact = x.compare_int(&fl).is_none() && x.width_f64() == 0.0;
            return Ok((fl, exact));
        }
        if x.width_f64() == 0.0 {
            // a point enclosure sitting on an integer
            return Ok((x.lo().floor().to_int().value(), true));
        }
        bits *= 2;
    }
    Err(Error::PrecisionUnreachable { target: 0.0, reached: 1.0, bits: bits as u32 })
}

fn to_ubig(x: IBig) -> Result<UBig> {
    UBig::try_from(x).map_err(|_| Error::Invariant("negative numerator".into()))
}

/// Builds the sandwich and, when a gcd condition fails, deforms it.
pub fn approximate(req: &ApproximationRequest) -> Result<ExponentSet> {
    validate(req)?;
    let base_bits = digits_to_bits(req.digits);
    let delta = decimal_rational(req.delta)?;
    let u = match &req.denominator {
        Some(u) => {
            if RBig::from(IBig::from(u.clone())) * &delta <= RBig::ONE {
                return Err(Error::Precondition(format!("denominator {u} does not exceed 1/delta")));
            }
            u.clone()
        }
        // smallest integer strictly above 2/δ
        None => to_ubig((RBig::from(2u8) / &delta).floor() + IBig::ONE)?,
    };

    let mut lower = Vec::with_capacity(req.reals.len());
    let mut upper = Vec::with_capacity(req.reals.len());
    for t in &req.reals {
        let (fl, exact) = certified_floor_of(t, &u, base_bits)?;
        // an exact multiple of 1/u cannot sit strictly between n/u and m/u
        let n = if exact { fl.clone() - IBig::ONE } else { fl.clone() };
        lower.push(to_ubig(n)?);
        upper.push(to_ubig(fl + IBig::ONE)?);
    }

    let deformation = if gcd_all(&lower) == UBig::ONE && gcd_all(&upper) == UBig::ONE {
        Deformation::Skipped
    } else {
        deform(req, &u, &mut lower, &mut upper, base_bits)?
    };
    let u = match &deformation {
        Deformation::Applied { multiplier, .. } => &u * multiplier,
        Deformation::Skipped => u,
    };
    let injective = all_distinct(&lower) && all_distinct(&upper);
    Ok(ExponentSet { u, lower, upper, deformation, injective })
}

const MAX_DEFORMATION_POWER: u32 = 64;

fn deform(
    req: &ApproximationRequest,
    u: &UBig,
    lower: &mut [UBig],
    upper: &mut [UBig],
    base_bits: usize,
) -> Result<Deformation> {
    if req.reals.len() < 2 {
        return Err(Error::Precondition("gcd repair needs at least two reals".into()));
    }
    let mut order: Vec<usize> = (0..req.reals.len()).collect();
    order.sort_by(|&a, &b| req.reals[a].approx().total_cmp(&req.reals[b].approx()));
    let (i1, i2) = (order[0], order[1]);

    let bits = base_bits + u.bit_len();
    let t1 = req.reals[i1].enclose(bits)?;
    let uu = Interval::from_ubig(u, bits);
    // slacks u·t1 − n_{t1} and u·(t1 + δ) − m_{t1}, both positive
    let slack_lo = t1.mul(&uu).sub(&Interval::from_ubig(&lower[i1], bits));
    let slack_hi = t1
        .add(&Interval::from_rational(&decimal_rational(req.delta)?, bits)?)
        .mul(&uu)
        .sub(&Interval::from_ubig(&upper[i1], bits));

    let step = &lower[i2] * &upper[i2];
    let mut v = UBig::ONE;
    for power in 1..=MAX_DEFORMATION_POWER {
        v *= &step;
        let vb = Interval::from_ubig(&v, bits + v.bit_len());
        let one = Interval::from_i64(1, bits);
        if one.certainly_less(&slack_lo.mul(&vb)) && one.certainly_less(&slack_hi.mul(&vb)) {
            for (k, (n, m)) in lower.iter_mut().zip(upper.iter_mut()).enumerate() {
                *n *= &v;
                *m *= &v;
                if k == i1 {
                    *n += UBig::ONE;
                    *m += UBig::ONE;
                }
            }
            return Ok(Deformation::Applied { power, multiplier: v, anchors: (i1, i2) });
        }
    }
    Err(Error::ResourceLimit(format!("no deformation power up to {MAX_DEFORMATION_POWER} keeps the sandwich")))
}

/// The inequality that failed, for element `index` where applicable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `t − δ < n_t/u` fails.
    LowerTooSmall { index: usize },
    /// `n_t/u < t` fails.
    LowerNotBelow { index: usize },
    /// `t < m_t/u` fails.
    UpperNotAbove { index: usize },
    /// `m_t/u < t + δ` fails.
    UpperTooLarge { index: usize },
    LowerGcd { gcd: String },
    UpperGcd { gcd: String },
    ShapeMismatch,
    /// Could not be decided even at raised precision.
    Undecided { index: usize },
}

impl Violation {
    pub fn inequality(&self) -> &'static str {
        match self {
            Violation::LowerTooSmall { .. } => "t - delta < n_t/u",
            Violation::LowerNotBelow { .. } => "n_t/u < t",
            Violation::UpperNotAbove { .. } => "t < m_t/u",
            Violation::UpperTooLarge { .. } => "m_t/u < t + delta",
            Violation::LowerGcd { .. } => "gcd(n_t) = 1",
            Violation::UpperGcd { .. } => "gcd(m_t) = 1",
            Violation::ShapeMismatch => "one numerator pair per real",
            Violation::Undecided { .. } => "certified comparison",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    pub violation: Option<Violation>,
}

/// Re-checks both sandwich conditions from scratch with interval arithmetic.
pub fn verify_approximation(reals: &[PositiveReal], delta: f64, set: &ExponentSet) -> Result<Verification> {
    let fail = |v: Violation| Ok(Verification { ok: false, violation: Some(v) });
    if set.lower.len() != reals.len() || set.upper.len() != reals.len() {
        return fail(Violation::ShapeMismatch);
    }
    let delta_exact = decimal_rational(delta)?;
    for (index, t) in reals.iter().enumerate() {
        let (n, m) = (&set.lower[index], &set.upper[index]);
        let mut bits = digits_to_bits(DEFAULT_DIGITS) + set.u.bit_len();
        let mut decided = false;
        for _ in 0..=ESCALATIONS {
            let tv = t.enclose(bits)?;
            let d = Interval::from_rational(&delta_exact, bits)?;
            let u = Interval::from_ubig(&set.u, bits);
            let ut = tv.mul(&u);
            let nv = Interval::from_ubig(n, bits);
            let mv = Interval::from_ubig(m, bits);
            // u(t − δ) < n < u t < m < u(t + δ)
            let checks = [
                (tv.sub(&d).mul(&u), nv.clone(), Violation::LowerTooSmall { index }),
                (nv, ut.clone(), Violation::LowerNotBelow { index }),
                (ut, mv.clone(), Violation::UpperNotAbove { index }),
                (mv, tv.add(&d).mul(&u), Violation::UpperTooLarge { index }),
            ];
            let mut undecided = false;
            for (a, b, v) in checks {
                if a.certainly_less(&b) {
                    continue;
                }
                if b.certainly_less(&a) || (a.width_f64() == 0.0 && b.width_f64() == 0.0) {
                    return fail(v);
                }
                undecided = true;
            }
            if !undecided {
                decided = true;
                break;
            }
            bits *= 2;
        }
        if !decided {
            return fail(Violation::Undecided { index });
        }
    }
    let g = gcd_all(&set.lower);
    if g != UBig::ONE {
        return fail(Violation::LowerGcd { gcd: g.to_string() });
    }
    let g = gcd_all(&set.upper);
    if g != UBig::ONE {
        return fail(Violation::UpperGcd { gcd: g.to_string() });
    }
    Ok(Verification { ok: true, violation: None })
}

//! Exact rationals and Weil heights over ℚ.

use std::fmt;
use std::str::FromStr;

use dashu::base::BitTest;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;

use crate::error::{Error, Result};

/// A point of ℙ¹(ℚ). Finite points are stored as reduced rationals with a
/// positive denominator; `Infinity` is the point `[1:0]`, which every orbit
/// operation rejects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPoint {
    Finite(RBig),
    Infinity,
}

/// The Weil height of a finite rational point.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightValue {
    /// `ln(exact_max)`.
    pub log_height: f64,
    /// `max(|numerator|, denominator)`.
    pub exact_max: UBig,
}

/// Natural log of a positive big integer from its bit length and top 64 bits.
pub fn ln_ubig(n: &UBig) -> f64 {
    let bits = n.bit_len();
    if bits <= 64 {
        let v: u64 = n.try_into().expect("fits in u64");
        return (v as f64).ln();
    }
    let shift = bits - 64;
    let top: u64 = (n >> shift).try_into().expect("top 64 bits");
    (top as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

impl RationalPoint {
    pub fn integer(n: impl Into<IBig>) -> Self {
        RationalPoint::Finite(RBig::from(n.into()))
    }

    /// `num/den`, reduced. A zero denominator gives the point at infinity.
    pub fn from_parts(num: IBig, den: IBig) -> Self {
        if den == IBig::ZERO {
            return RationalPoint::Infinity;
        }
        let (sign, den) = den.into_parts();
        let num = if sign == dashu::base::Sign::Negative { -num } else { num };
        RationalPoint::Finite(RBig::from_parts(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RationalPoint::Finite(_))
    }

    pub fn as_rational(&self) -> Result<&RBig> {
        match self {
            RationalPoint::Finite(r) => Ok(r),
            RationalPoint::Infinity => Err(Error::Domain("point at infinity".into())),
        }
    }

    pub fn numerator(&self) -> Option<&IBig> {
        match self {
            RationalPoint::Finite(r) => Some(r.numerator()),
            RationalPoint::Infinity => None,
        }
    }

    pub fn denominator(&self) -> Option<&UBig> {
        match self {
            RationalPoint::Finite(r) => Some(r.denominator()),
            RationalPoint::Infinity => None,
        }
    }

    /// `max(|num|, den)`; the point at infinity `[1:0]` has height 1.
    pub fn height_max(&self) -> UBig {
        match self {
            RationalPoint::Finite(r) => {
                let num = r.numerator().clone().into_parts().1;
                let den = r.denominator();
                if &num >= den {
                    num
                } else {
                    den.clone()
                }
            }
            RationalPoint::Infinity => UBig::ONE,
        }
    }

    pub fn weil_height(&self) -> Result<HeightValue> {
        if !self.is_finite() {
            return Err(Error::Domain("weil height of the point at infinity".into()));
        }
        let exact_max = self.height_max();
        Ok(HeightValue { log_height: ln_ubig(&exact_max), exact_max })
    }

    /// `H(self) <= bound`, decided exactly.
    pub fn multiplicative_height_leq(&self, bound: &UBig) -> bool {
        &self.height_max() <= bound
    }

    /// `H(self) > 4`, decided exactly.
    pub fn height_exceeds_threshold(&self) -> bool {
        self.height_max() > UBig::from(4u8)
    }
}

impl From<RBig> for RationalPoint {
    fn from(r: RBig) -> Self {
        RationalPoint::Finite(r)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Finite(r) if r.denominator() == &UBig::ONE => {
                write!(f, "{}", r.numerator())
            }
            RationalPoint::Finite(r) => write!(f, "{}/{}", r.numerator(), r.denominator()),
            RationalPoint::Infinity => f.write_str("1/0"),
        }
    }
}

impl FromStr for RationalPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            IBig::from_str(t.trim()).map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
        };
        match s.split_once('/') {
            None => Ok(RationalPoint::integer(parse(s)?)),
            Some((n, d)) => {
                let num = parse(n)?;
                let den = parse(d)?;
                if den == IBig::ZERO && num == IBig::ZERO {
                    return Err(Error::Parse("0/0 is not a point".into()));
                }
                Ok(RationalPoint::from_parts(num, den))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> RationalPoint {
        s.parse().unwrap()
    }

    #[test]
    fn integer_height() {
        let h = q("5").weil_height().unwrap();
        assert_eq!(h.exact_max, UBig::from(5u8));
        assert!((h.log_height - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn numerator_or_denominator_dominates() {
        assert_eq!(q("3/2").weil_height().unwrap().exact_max, UBig::from(3u8));
        assert_eq!(q("-7/10").weil_height().unwrap().exact_max, UBig::from(10u8));
    }

    #[test]
    fn infinity_is_rejected() {
        assert!(matches!(q("1/0").weil_height(), Err(Error::Domain(_))));
        assert!(matches!(RationalPoint::Infinity.as_rational(), Err(Error::Domain(_))));
    }

    #[test]
    fn bounded_height_is_inclusive() {
        assert!(q("126").multiplicative_height_leq(&UBig::from(126u8)));
        assert!(!q("126").multiplicative_height_leq(&UBig::from(125u8)));
        assert!(!q("3/2").multiplicative_height_leq(&UBig::from(2u8)));
    }

    #[test]
    fn threshold_four() {
        assert!(q("5").height_exceeds_threshold());
        assert!(!q("2").height_exceeds_threshold());
        assert!(q("9/2").height_exceeds_threshold());
        assert!(!q("-4/3").height_exceeds_threshold());
    }

    #[test]
    fn parse_reduces_and_normalises_sign() {
        assert_eq!(q("6/-4").to_string(), "-3/2");
        assert_eq!(q("10/5").to_string(), "2");
        assert_eq!(q(" -7 / 10 ").to_string(), "-7/10");
        assert!("abc".parse::<RationalPoint>().is_err());
        assert!("0/0".parse::<RationalPoint>().is_err());
    }

    #[test]
    fn log_of_huge_integer_is_accurate() {
        let n = UBig::from(10u8).pow(500);
        let expect = 500.0 * 10f64.ln();
        assert!((ln_ubig(&n) - expect).abs() / expect < 1e-14);
    }

    proptest! {
        #[test]
        fn sign_flip_keeps_height(p in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let a = RationalPoint::from_parts(IBig::from(p), IBig::from(d));
            let b = RationalPoint::from_parts(IBig::from(-p), IBig::from(d));
            prop_assert_eq!(a.weil_height().unwrap(), b.weil_height().unwrap());
        }

        #[test]
        fn power_scales_height(x in 2i64..10_000, n in 1usize..=20) {
            let p = RationalPoint::integer(x);
            let pn = RationalPoint::integer(IBig::from(x).pow(n));
            let h = p.weil_height().unwrap();
            let hn = pn.weil_height().unwrap();
            prop_assert_eq!(&hn.exact_max, &h.exact_max.pow(n));
            prop_assert!((hn.log_height - n as f64 * h.log_height).abs() <= 1e-12 * hn.log_height);
        }

        #[test]
        fn exact_threshold_agrees_with_logs(num in 1u64..u64::MAX / 2, den in 1u64..1_000_000, b in 1u64..u64::MAX / 2) {
            let p = RationalPoint::from_parts(IBig::from(num), IBig::from(den));
            let exact = p.multiplicative_height_leq(&UBig::from(b));
            let lh = p.weil_height().unwrap().log_height;
            let lb = (b as f64).ln();
            if (lh - lb).abs() > 1e-9 {
                prop_assert_eq!(exact, lh <= lb + 1e-9);
            }
        }

        #[test]
        fn display_parse_roundtrip(p in any::<i64>(), d in 1i64..i64::MAX) {
            let a = RationalPoint::from_parts(IBig::from(p), IBig::from(d));
            let back: RationalPoint = a.to_string().parse().unwrap();
            prop_assert_eq!(a, back);
        }
    }
}

//! Unicritical generator families `z^d + c`, free-semigroup words and orbit
//! evaluation.
//!
//! Words are stored outermost-first: the word `[i, j, k]` is the map
//! `θ_i ∘ θ_j ∘ θ_k`, so evaluation applies `θ_k` first.

mod compose;
mod degrees;

pub use compose::{compose_symbolic, find_composition_collision, Polynomial, DEFAULT_DEGREE_CAP};
pub use degrees::{
    count_words_with_degree_at_most, delta_spaced_primes, is_uniformly_log_discrete, mersenne_degrees,
    power_plus_b_degrees, LogDiscreteness, MersenneTable,
};

use std::str::FromStr;

use dashu::base::BitTest;
use dashu::integer::UBig;
use dashu::rational::RBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::height::{ln_ubig, RationalPoint};

/// Largest result, in bits, that [`Generator::apply`] will materialise.
pub const MAX_EVALUATION_BITS: usize = 1 << 28;

/// `z^d + c`, or `−(z^d + c)` in the non-free diagnostic mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    degree: UBig,
    constant: RBig,
    negated: bool,
}

impl Generator {
    pub fn new(degree: UBig, constant: RBig) -> Result<Self> {
        if degree < UBig::from(2u8) {
            return Err(Error::Domain(format!("generator degree {degree} < 2")));
        }
        if constant == RBig::ZERO {
            return Err(Error::Domain("generator constant must be nonzero".into()));
        }
        Ok(Generator { degree, constant, negated: false })
    }

    /// `−(z^d + c)`. Only meant for collision diagnostics: sets containing
    /// such maps need not generate a free semigroup.
    pub fn negated(degree: UBig, constant: RBig) -> Result<Self> {
        let mut g = Self::new(degree, constant)?;
        g.negated = true;
        Ok(g)
    }

    pub fn degree(&self) -> &UBig {
        &self.degree
    }

    pub fn constant(&self) -> &RBig {
        &self.constant
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// `h(c) + log 2`, the one-step height error of this map.
    pub fn height_error(&self) -> f64 {
        let c = RationalPoint::Finite(self.constant.clone());
        ln_ubig(&c.height_max()) + std::f64::consts::LN_2
    }

    /// Exact image of `x`.
    pub fn apply(&self, x: &RBig) -> Result<RBig> {
        let d: usize = (&self.degree)
            .try_into()
            .map_err(|_| Error::ResourceLimit(format!("degree {} too large to evaluate", self.degree)))?;
        let size = x.numerator().clone().into_parts().1.bit_len().max(x.denominator().bit_len());
        if size.saturating_mul(d) > MAX_EVALUATION_BITS {
            return Err(Error::ResourceLimit(format!(
                "evaluating degree {d} on a {size}-bit point exceeds {MAX_EVALUATION_BITS} bits"
            )));
        }
        let y = x.pow(d) + &self.constant;
        Ok(if self.negated { -y } else { y })
    }
}

/// A finite ordered list of generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    generators: Vec<Generator>,
    shared_constant: Option<RBig>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Domain("generator set is empty".into()));
        }
        let first = generators[0].constant.clone();
        let shared = generators.iter().all(|g| g.constant == first).then_some(first);
        Ok(GeneratorSet { generators, shared_constant: shared })
    }

    /// `{z^d + c : d ∈ degrees}` with distinct degrees, the form every
    /// counting pipeline uses.
    pub fn with_shared_constant(degrees: &[UBig], constant: RBig) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for d in degrees {
            if !seen.insert(d.clone()) {
                return Err(Error::Domain(format!("degree {d} repeated")));
            }
        }
        let generators = degrees
            .iter()
            .map(|d| Generator::new(d.clone(), constant.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(generators)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn shared_constant(&self) -> Option<&RBig> {
        self.shared_constant.as_ref()
    }

    pub fn degrees(&self) -> Vec<UBig> {
        self.generators.iter().map(|g| g.degree.clone()).collect()
    }

    /// `T = {log d}`.
    pub fn log_degree_set(&self) -> Vec<f64> {
        self.generators.iter().map(|g| ln_ubig(&g.degree)).collect()
    }

    pub fn has_distinct_degrees(&self) -> bool {
        let mut d = self.degrees();
        d.sort();
        d.windows(2).all(|w| w[0] != w[1])
    }

    /// Telescoping constants `d_S`, `C_S` and `b_S = C_S / (d_S − 1)`.
    pub fn telescoping_constants(&self) -> TelescopingConstants {
        let d_s = self
            .generators
            .iter()
            .map(|g| g.degree.to_f64().value())
            .fold(f64::INFINITY, f64::min);
        let c_s = self.generators.iter().map(Generator::height_error).fold(0.0, f64::max);
        TelescopingConstants { d_s, c_s, b_s: c_s / (d_s - 1.0) }
    }

    fn letter(&self, i: usize) -> Result<&Generator> {
        self.generators
            .get(i)
            .ok_or_else(|| Error::Domain(format!("generator index {i} out of range")))
    }
}

/// Height controlling constants of a generator set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TelescopingConstants {
    pub d_s: f64,
    pub c_s: f64,
    pub b_s: f64,
}

/// An element of the free semigroup, outermost letter first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    indices: Vec<usize>,
    degree: UBig,
}

impl Word {
    pub fn identity() -> Self {
        Word { indices: Vec::new(), degree: UBig::ONE }
    }

    pub fn new(indices: Vec<usize>, set: &GeneratorSet) -> Result<Self> {
        let mut degree = UBig::ONE;
        for &i in &indices {
            degree *= set.letter(i)?.degree();
        }
        Ok(Word { indices, degree })
    }

    /// `θ_i ∘ self`.
    pub fn precompose(&self, i: usize, set: &GeneratorSet) -> Result<Self> {
        let mut indices = Vec::with_capacity(self.indices.len() + 1);
        indices.push(i);
        indices.extend_from_slice(&self.indices);
        Ok(Word { indices, degree: &self.degree * set.letter(i)?.degree() })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn degree(&self) -> &UBig {
        &self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// BFS order: by degree, then lexicographically by letters.
    pub fn order_key(&self) -> (&UBig, &[usize]) {
        (&self.degree, &self.indices)
    }
}

/// Exact `f(P)` for the word `f`.
pub fn evaluate(word: &Word, set: &GeneratorSet, point: &RationalPoint) -> Result<RationalPoint> {
    let mut x = point.as_rational()?.clone();
    for &i in word.indices.iter().rev() {
        x = set.letter(i)?.apply(&x)?;
    }
    Ok(RationalPoint::Finite(x))
}

/// `[deg f (h(P) − b_S), deg f (h(P) + b_S)]`, which contains `h(f(P))`.
pub fn telescoping_interval(word: &Word, set: &GeneratorSet, point: &RationalPoint) -> Result<(f64, f64)> {
    let h = point.weil_height()?.log_height;
    let b = set.telescoping_constants().b_s;
    if h <= b {
        return Err(Error::Precondition(format!("h(P) = {h} does not exceed b_S = {b}")));
    }
    let deg = word.degree().to_f64().value();
    Ok((deg * (h - b), deg * (h + b)))
}

/// JSON description of a generator set with a shared constant:
/// `{"constant": "1", "degrees": [3, 7, 31], "tail_bound": "1000…"}`.
/// Degrees may be JSON numbers or decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSetSpec {
    pub constant: String,
    #[serde(with = "crate::bigserde::ubig_list")]
    pub degrees: Vec<UBig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<String>,
}

impl GeneratorSetSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn constant(&self) -> Result<RBig> {
        RationalPoint::from_str(&self.constant)?
            .as_rational()
            .cloned()
    }

    pub fn tail_bound(&self) -> Result<Option<UBig>> {
        self.tail_bound
            .as_deref()
            .map(|s| UBig::from_str(s).map_err(|e| Error::Parse(format!("tail bound {s:?}: {e}"))))
            .transpose()
    }

    pub fn build(&self) -> Result<GeneratorSet> {
        GeneratorSet::with_shared_constant(&self.degrees, self.constant()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dashu::integer::IBig;

    fn set(degrees: &[u64]) -> GeneratorSet {
        let d: Vec<UBig> = degrees.iter().map(|&x| UBig::from(x)).collect();
        GeneratorSet::with_shared_constant(&d, RBig::ONE).unwrap()
    }

    fn int(n: i64) -> RationalPoint {
        RationalPoint::integer(n)
    }

    #[test]
    fn generator_validation() {
        assert!(Generator::new(UBig::ONE, RBig::ONE).is_err());
        assert!(Generator::new(UBig::from(3u8), RBig::ZERO).is_err());
        let dup = [UBig::from(3u8), UBig::from(3u8)];
        assert!(GeneratorSet::with_shared_constant(&dup, RBig::ONE).is_err());
    }

    #[test]
    fn evaluate_single_letter() {
        let s = set(&[3]);
        let w = Word::new(vec![0], &s).unwrap();
        assert_eq!(evaluate(&w, &s, &int(5)).unwrap(), int(126));
    }

    #[test]
    fn evaluate_applies_right_to_left() {
        let s = set(&[3, 7]);
        // (z^3 + 1) ∘ (z^7 + 1) at 1: inner 2, outer 9
        let w = Word::new(vec![0, 1], &s).unwrap();
        assert_eq!(evaluate(&w, &s, &int(1)).unwrap(), int(9));
        let w = Word::new(vec![1, 0], &s).unwrap();
        assert_eq!(evaluate(&w, &s, &int(1)).unwrap(), int(129));
        assert_eq!(w.degree(), &UBig::from(21u8));
    }

    #[test]
    fn identity_word() {
        let s = set(&[3]);
        assert_eq!(evaluate(&Word::identity(), &s, &int(5)).unwrap(), int(5));
        assert_eq!(Word::identity().degree(), &UBig::ONE);
        assert!(evaluate(&Word::identity(), &s, &RationalPoint::Infinity).is_err());
    }

    #[test]
    fn evaluate_rational_point() {
        let s = set(&[2]);
        let p: RationalPoint = "3/2".parse().unwrap();
        let w = Word::new(vec![0], &s).unwrap();
        assert_eq!(evaluate(&w, &s, &p).unwrap().to_string(), "13/4");
    }

    #[test]
    fn telescoping_constants_shared_constant() {
        let s = set(&[3, 7]);
        let t = s.telescoping_constants();
        assert!((t.d_s - 3.0).abs() < 1e-12);
        assert!((t.c_s - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((t.b_s - std::f64::consts::LN_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn telescoping_interval_single_step() {
        let s = set(&[3]);
        let w = Word::new(vec![0], &s).unwrap();
        let (lo, hi) = telescoping_interval(&w, &s, &int(5)).unwrap();
        let b = std::f64::consts::LN_2 / 2.0;
        assert!((lo - 3.0 * (5f64.ln() - b)).abs() < 1e-12);
        assert!((hi - 3.0 * (5f64.ln() + b)).abs() < 1e-12);
        let h = 126f64.ln();
        assert!(lo <= h && h <= hi);
    }

    #[test]
    fn telescoping_interval_identity_and_depth_two() {
        let s = set(&[3]);
        let h5 = 5f64.ln();
        let (lo, hi) = telescoping_interval(&Word::identity(), &s, &int(5)).unwrap();
        assert!(lo <= h5 && h5 <= hi);
        let w = Word::new(vec![0, 0], &s).unwrap();
        let v = evaluate(&w, &s, &int(5)).unwrap();
        assert_eq!(v, RationalPoint::integer(IBig::from(2_000_377)));
        let h = v.weil_height().unwrap().log_height;
        let (lo, hi) = telescoping_interval(&w, &s, &int(5)).unwrap();
        assert!(lo <= h && h <= hi, "{lo} <= {h} <= {hi}");
    }

    #[test]
    fn telescoping_requires_height_above_b() {
        let s = set(&[2]);
        // b_S = log 2 / 1 and h(2) = log 2
        assert!(matches!(
            telescoping_interval(&Word::identity(), &s, &int(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn negated_generator_diagnostic() {
        let g = Generator::negated(UBig::from(2u8), RBig::ONE).unwrap();
        assert!(g.is_negated());
        assert_eq!(g.apply(&RBig::from(5)).unwrap(), RBig::from(-26));
    }

    #[test]
    fn huge_degree_refuses_evaluation() {
        let g = Generator::new(UBig::from(2_305_843_009_213_693_951u64), RBig::ONE).unwrap();
        assert!(matches!(g.apply(&RBig::from(5)), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn spec_file_roundtrip() {
        let json = r#"{"constant": "1", "degrees": [3, 7, "2305843009213693951"], "tail_bound": "100000000000000000000000000"}"#;
        let spec = GeneratorSetSpec::from_json(json).unwrap();
        assert_eq!(spec.degrees[2], UBig::from(2_305_843_009_213_693_951u64));
        assert_eq!(spec.tail_bound().unwrap(), Some(UBig::from(10u8).pow(26)));
        let s = spec.build().unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.shared_constant(), Some(&RBig::ONE));
        let back = GeneratorSetSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}

//! Exact enumeration of an orbit up to a height bound.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::io::{BufRead, Write};

use dashu::integer::UBig;
use dashu::rational::RBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::height::{ln_ubig, RationalPoint};
use crate::semigroup::{evaluate, GeneratorSet, Word};

pub const DEFAULT_MAX_ENTRIES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusOptions {
    /// Cap on distinct points kept.
    pub max_entries: usize,
    /// Return what was found when the cap is hit instead of failing.
    pub allow_partial: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { max_entries: DEFAULT_MAX_ENTRIES, allow_partial: false }
    }
}

/// How branches are cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruningMode {
    /// Every constant is 1 and `H(P) > 4`: heights strictly increase along
    /// every word, so a branch stops at the first point above the bound.
    Monotone,
    /// `h(P) > b_S`: words are cut once `deg(f)(h(P) − b_S)` exceeds `log B`.
    Telescoping,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusEntry {
    pub point: RationalPoint,
    pub exact_max: UBig,
    pub log_height: f64,
    /// Number of distinct words reaching the point.
    pub multiplicity: u64,
    /// First word reaching the point in (degree, letters) order.
    pub shortest_word: Word,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    pub base_point: RationalPoint,
    pub bound: UBig,
    pub mode: PruningMode,
    /// In discovery order.
    pub entries: Vec<CensusEntry>,
    pub function_count: UBig,
    pub point_count: UBig,
    pub partial: bool,
    pub words_evaluated: u64,
}

struct Node {
    word: Word,
    value: RBig,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.word.order_key() == other.word.order_key()
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.order_key().cmp(&other.word.order_key())
    }
}

fn all_constants_one(set: &GeneratorSet) -> bool {
    set.generators().iter().all(|g| *g.constant() == RBig::ONE)
}

/// Chooses the pruning rule, or explains why neither applies.
pub fn pruning_mode(set: &GeneratorSet, point: &RationalPoint) -> Result<PruningMode> {
    let h = point.weil_height()?.log_height;
    if all_constants_one(set) && point.height_exceeds_threshold() {
        return Ok(PruningMode::Monotone);
    }
    let b_s = set.telescoping_constants().b_s;
    if h > b_s {
        return Ok(PruningMode::Telescoping);
    }
    Err(Error::Precondition(format!(
        "need all constants 1 with H(P) > 4, or h(P) > b_S; got h(P) = {h}, b_S = {b_s}"
    )))
}

pub fn enumerate(set: &GeneratorSet, point: &RationalPoint, bound: &UBig) -> Result<Census> {
    enumerate_with(set, point, bound, &CensusOptions::default())
}

/// Every word `f` with `H(f(P)) <= bound`, deduplicated by image.
pub fn enumerate_with(set: &GeneratorSet, point: &RationalPoint, bound: &UBig, opts: &CensusOptions) -> Result<Census> {
    if *bound == UBig::ZERO {
        return Err(Error::Domain("height bound must be positive".into()));
    }
    let mode = pruning_mode(set, point)?;
    let h_p = point.weil_height()?.log_height;
    let tele = set.telescoping_constants();
    let ln_b = ln_ubig(bound);
    let tol = 1e-9 * ln_b.max(1.0);
    // no word of larger degree can come back under the bound
    let max_degree = (ln_b / (h_p - tele.b_s)) * (1.0 + 1e-12) + 1e-9;
    let errors: Vec<f64> = set.generators().iter().map(|g| g.height_error()).collect();
    let degrees: Vec<f64> = set.generators().iter().map(|g| g.degree().to_f64().value()).collect();

    let mut census = Census {
        base_point: point.clone(),
        bound: bound.clone(),
        mode,
        entries: Vec::new(),
        function_count: UBig::ZERO,
        point_count: UBig::ZERO,
        partial: false,
        words_evaluated: 0,
    };
    let mut index: HashMap<RationalPoint, usize> = HashMap::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Node { word: Word::identity(), value: point.as_rational()?.clone() }));
    let word_cap = (opts.max_entries as u64).saturating_mul(16);

    while let Some(Reverse(node)) = heap.pop() {
        census.words_evaluated += 1;
        let q = RationalPoint::Finite(node.value.clone());
        let q_max = q.height_max();
        let inside = q_max <= *bound;
        if inside {
            match index.get(&q) {
                Some(&k) => census.entries[k].multiplicity += 1,
                None => {
                    if census.entries.len() >= opts.max_entries {
                        return cap_hit(census, opts, "distinct points");
                    }
                    index.insert(q.clone(), census.entries.len());
                    census.entries.push(CensusEntry {
                        point: q,
                        log_height: ln_ubig(&q_max),
                        exact_max: q_max.clone(),
                        multiplicity: 1,
                        shortest_word: node.word.clone(),
                    });
                }
            }
            census.function_count += UBig::ONE;
        } else if mode == PruningMode::Monotone {
            continue;
        }
        if census.words_evaluated >= word_cap {
            return cap_hit(census, opts, "evaluated words");
        }
        let h_q = ln_ubig(&q_max);
        let deg = node.word.degree().to_f64().value();
        for (i, g) in set.generators().iter().enumerate() {
            let child_deg = deg * degrees[i];
            if child_deg > max_degree {
                continue;
            }
            // one-step lower bound on the child's height
            if degrees[i] * h_q - errors[i] > ln_b + tol {
                if mode == PruningMode::Monotone || child_deg * tele.d_s > max_degree {
                    continue;
                }
            }
            let value = g.apply(&node.value)?;
            if mode == PruningMode::Monotone {
                let child_max = RationalPoint::Finite(value.clone()).height_max();
                if child_max <= q_max {
                    return Err(Error::Invariant(format!("height did not increase from {}", node.value)));
                }
            }
            heap.push(Reverse(Node { word: node.word.precompose(i, set)?, value }));
        }
    }
    census.point_count = UBig::from(census.entries.len());
    Ok(census)
}

fn cap_hit(mut census: Census, opts: &CensusOptions, what: &str) -> Result<Census> {
    if !opts.allow_partial {
        return Err(Error::ResourceLimit(format!(
            "census cap of {} {what} reached; rerun with a smaller bound or allow a partial result",
            opts.max_entries
        )));
    }
    census.partial = true;
    census.point_count = UBig::from(census.entries.len());
    Ok(census)
}

/// Number of words, the identity included, with `H(f(P)) <= bound`.
pub fn function_count_bounded(set: &GeneratorSet, point: &RationalPoint, bound: &UBig) -> Result<UBig> {
    Ok(enumerate(set, point, bound)?.function_count)
}

impl Census {
    pub fn max_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).max().unwrap_or(0)
    }

    /// The census for a smaller bound, read off this one.
    pub fn restrict(&self, bound: &UBig) -> Result<Census> {
        if *bound > self.bound {
            return Err(Error::Domain(format!("{bound} exceeds the census bound {}", self.bound)));
        }
        let entries: Vec<CensusEntry> = self.entries.iter().filter(|e| e.exact_max <= *bound).cloned().collect();
        let function_count = entries.iter().map(|e| UBig::from(e.multiplicity)).sum();
        Ok(Census {
            base_point: self.base_point.clone(),
            bound: bound.clone(),
            mode: self.mode,
            point_count: UBig::from(entries.len()),
            entries,
            function_count,
            partial: self.partial,
            words_evaluated: self.words_evaluated,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionReport {
    pub max_multiplicity: u64,
    /// multiplicity → number of points.
    pub histogram: BTreeMap<u64, u64>,
}

pub fn collision_report(census: &Census) -> CollisionReport {
    let mut histogram = BTreeMap::new();
    for e in &census.entries {
        *histogram.entry(e.multiplicity).or_insert(0) += 1;
    }
    CollisionReport { max_multiplicity: census.max_multiplicity(), histogram }
}

/// Outcome of re-checking the per-step and telescoped height estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightCheck {
    pub checked: usize,
    pub telescoping_violations: Vec<String>,
    pub ingram_violations: Vec<String>,
    /// Largest `|h(f(P))/deg f − h(P)| / b_S`.
    pub worst_telescoping_ratio: f64,
    /// Largest `|h(φ(Q)) − d h(Q)| − (h(c) + log 2)`.
    pub worst_step_excess: f64,
}

impl HeightCheck {
    pub fn ok(&self) -> bool {
        self.telescoping_violations.is_empty() && self.ingram_violations.is_empty()
    }
}

/// For every entry `Q = f(P)`: `|h(Q) − deg(f) h(P)| <= deg(f) b_S`, and for the
/// last step `Q = φ(Q')`, `|h(Q) − d_φ h(Q')| <= h(c_φ) + log 2`.
pub fn check_height_invariants(census: &Census, set: &GeneratorSet, slack: f64) -> Result<HeightCheck> {
    let h_p = census.base_point.weil_height()?.log_height;
    let b_s = set.telescoping_constants().b_s;
    let mut out = HeightCheck {
        checked: 0,
        telescoping_violations: Vec::new(),
        ingram_violations: Vec::new(),
        worst_telescoping_ratio: 0.0,
        worst_step_excess: f64::NEG_INFINITY,
    };
    for e in &census.entries {
        out.checked += 1;
        let deg = e.shortest_word.degree().to_f64().value();
        let dev = (e.log_height / deg - h_p).abs();
        if b_s > 0.0 {
            out.worst_telescoping_ratio = out.worst_telescoping_ratio.max(dev / b_s);
        }
        if dev > b_s + slack {
            out.telescoping_violations.push(e.point.to_string());
        }
        let letters = e.shortest_word.indices();
        if let Some((&first, rest)) = letters.split_first() {
            let parent = evaluate(&Word::new(rest.to_vec(), set)?, set, &census.base_point)?;
            let g = &set.generators()[first];
            let h_parent = parent.weil_height()?.log_height;
            let step = (e.log_height - g.degree().to_f64().value() * h_parent).abs();
            let excess = step - g.height_error();
            out.worst_step_excess = out.worst_step_excess.max(excess);
            if excess > slack {
                out.ingram_violations.push(e.point.to_string());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSample {
    #[serde(with = "crate::bigserde::ubig_str")]
    pub bound: UBig,
    pub log_log_bound: f64,
    #[serde(with = "crate::bigserde::ubig_str")]
    pub point_count: UBig,
    pub log_count: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    /// Least-squares slope of `log #points` against `log log B`.
    pub slope: f64,
    pub intercept: f64,
    pub samples: Vec<GrowthSample>,
}

pub fn growth_fit(censuses: &[Census]) -> Result<GrowthFit> {
    if censuses.len() < 4 {
        return Err(Error::Domain(format!("growth fit needs at least 4 censuses, got {}", censuses.len())));
    }
    let mut samples = Vec::with_capacity(censuses.len());
    for c in censuses {
        if c.point_count == UBig::ZERO {
            return Err(Error::Domain(format!("census at B = {} is empty", c.bound)));
        }
        let lb = ln_ubig(&c.bound);
        if !(lb > 0.0) {
            return Err(Error::Domain("bounds must exceed 1".into()));
        }
        samples.push(GrowthSample {
            bound: c.bound.clone(),
            log_log_bound: lb.ln(),
            point_count: c.point_count.clone(),
            log_count: ln_ubig(&c.point_count),
        });
    }
    if samples.windows(2).any(|w| w[0].bound >= w[1].bound) {
        return Err(Error::Domain("bounds must be strictly increasing".into()));
    }
    let n = samples.len() as f64;
    let mx = samples.iter().map(|s| s.log_log_bound).sum::<f64>() / n;
    let my = samples.iter().map(|s| s.log_count).sum::<f64>() / n;
    let sxy: f64 = samples.iter().map(|s| (s.log_log_bound - mx) * (s.log_count - my)).sum();
    let sxx: f64 = samples.iter().map(|s| (s.log_log_bound - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(GrowthFit { slope, intercept: my - slope * mx, samples })
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    census: u32,
    base_point: String,
    bound: String,
    mode: PruningMode,
    degrees: Vec<String>,
    function_count: String,
    point_count: String,
    partial: bool,
    words_evaluated: u64,
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    point: String,
    exact_max: String,
    multiplicity: u64,
    shortest_word: Vec<usize>,
}

const CACHE_VERSION: u32 = 1;

impl Census {
    /// One header line, then one line per entry in discovery order.
    pub fn write_jsonl<W: Write>(&self, set: &GeneratorSet, mut w: W) -> Result<()> {
        let header = CacheHeader {
            census: CACHE_VERSION,
            base_point: self.base_point.to_string(),
            bound: self.bound.to_string(),
            mode: self.mode,
            degrees: set.degrees().iter().map(|d| d.to_string()).collect(),
            function_count: self.function_count.to_string(),
            point_count: self.point_count.to_string(),
            partial: self.partial,
            words_evaluated: self.words_evaluated,
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for e in &self.entries {
            let line = CacheLine {
                point: e.point.to_string(),
                exact_max: e.exact_max.to_string(),
                multiplicity: e.multiplicity,
                shortest_word: e.shortest_word.indices().to_vec(),
            };
            writeln!(w, "{}", serde_json::to_string(&line)?)?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(set: &GeneratorSet, r: R) -> Result<Census> {
        let mut lines = r.lines();
        let first = lines.next().ok_or_else(|| Error::Parse("empty census cache".into()))??;
        let header: CacheHeader = serde_json::from_str(&first)?;
        if header.census != CACHE_VERSION {
            return Err(Error::Parse(format!("unsupported census cache version {}", header.census)));
        }
        let degrees: Vec<String> = set.degrees().iter().map(|d| d.to_string()).collect();
        if degrees != header.degrees {
            return Err(Error::InvalidConfig(format!(
                "cache was built for degrees {:?}, not {:?}",
                header.degrees, degrees
            )));
        }
        let big = |s: &str| s.parse::<UBig>().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")));
        let mut entries = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let c: CacheLine = serde_json::from_str(&line)?;
            let point: RationalPoint = c.point.parse()?;
            let exact_max = big(&c.exact_max)?;
            if point.height_max() != exact_max {
                return Err(Error::Parse(format!("height of {} does not match the cache", c.point)));
            }
            entries.push(CensusEntry {
                point,
                log_height: ln_ubig(&exact_max),
                exact_max,
                multiplicity: c.multiplicity,
                shortest_word: Word::new(c.shortest_word, set)?,
            });
        }
        let census = Census {
            base_point: header.base_point.parse()?,
            bound: big(&header.bound)?,
            mode: header.mode,
            function_count: big(&header.function_count)?,
            point_count: big(&header.point_count)?,
            partial: header.partial,
            words_evaluated: header.words_evaluated,
            entries,
        };
        if census.point_count != UBig::from(census.entries.len()) {
            return Err(Error::Parse("entry count does not match the cache header".into()));
        }
        Ok(census)
    }
}

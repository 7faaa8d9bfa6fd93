//! C ABI over the orbitex library.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `_free` function. Every fallible call returns an
//! [`OrbitexStatus`]; on failure the message is kept per thread and can be
//! fetched with [`orbitex_last_error`]. Strings handed out by this library
//! must be released with [`orbitex_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbitex::census::{self, Census, CensusOptions};
use orbitex::cli::parse_big;
use orbitex::compositions::{self, PartSet};
use orbitex::semigroup::{GeneratorSet, GeneratorSetSpec};
use orbitex::solver::{self, ExponentBracket, SolverOptions};
use orbitex::{Error, RationalPoint};

use dashu::integer::UBig;
use dashu::rational::RBig;

/// Result of every fallible call. The numeric values match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitexStatus {
    Ok = 0,
    /// Null pointer or malformed UTF-8.
    InvalidArgument = 1,
    InvalidConfig = 2,
    PrecisionUnreachable = 3,
    ResourceLimit = 4,
    Domain = 5,
    Io = 6,
    Internal = 70,
    Panic = 99,
}

/// Unicritical generator set.
pub struct OrbitexGeneratorSet {
    set: GeneratorSet,
    degrees: Vec<UBig>,
    tail: Option<UBig>,
}

pub struct OrbitexCensus {
    census: Census,
}

pub struct OrbitexBracket {
    bracket: ExponentBracket,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OrbitexStatus {
    match e.exit_code() {
        2 => OrbitexStatus::InvalidConfig,
        3 => OrbitexStatus::PrecisionUnreachable,
        4 => OrbitexStatus::ResourceLimit,
        5 => OrbitexStatus::Domain,
        6 => OrbitexStatus::Io,
        _ => OrbitexStatus::Internal,
    }
}

struct Failure(OrbitexStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn bad_arg(msg: &str) -> Failure {
    Failure(OrbitexStatus::InvalidArgument, msg.to_string())
}

/// Runs `f`, records any error and converts panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OrbitexStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OrbitexStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside orbitex".into());
            OrbitexStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(bad_arg(&format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| bad_arg(&format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| bad_arg(&format!("{name} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(bad_arg("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(bad_arg("output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| Failure(OrbitexStatus::Internal, "string holds a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn parse_point(s: &str) -> Result<RationalPoint, Failure> {
    s.parse::<RationalPoint>().map_err(Failure::from)
}

fn parse_constant(s: &str) -> Result<RBig, Failure> {
    Ok(parse_point(s)?.as_rational()?.clone())
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn orbitex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The caller owns
/// the returned string.
#[no_mangle]
pub extern "C" fn orbitex_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(ptr::null_mut(), CString::into_raw))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn orbitex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the maps z^d + c for `len` degrees sharing the constant `constant`
/// (a decimal or `p/q` string).
///
/// # Safety
/// `degrees` must point at `len` values and `constant` must be a valid C string.
#[no_mangle]
pub unsafe extern "C" fn orbitex_generator_set_new(
    degrees: *const u64,
    len: usize,
    constant: *const c_char,
    out: *mut *mut OrbitexGeneratorSet,
) -> OrbitexStatus {
    guard(|| {
        if degrees.is_null() || len == 0 {
            return Err(bad_arg("degrees must be a non-empty array"));
        }
        let degrees: Vec<UBig> = std::slice::from_raw_parts(degrees, len).iter().map(|&d| UBig::from(d)).collect();
        let c = parse_constant(str_arg(constant, "constant")?)?;
        let set = GeneratorSet::with_shared_constant(&degrees, c)?;
        put(out, OrbitexGeneratorSet { set, degrees, tail: None })
    })
}

/// Builds a generator set from its JSON description, which may carry
/// arbitrarily large degrees and a tail bound.
///
/// # Safety
/// `json` must be a valid C string.
#[no_mangle]
pub unsafe extern "C" fn orbitex_generator_set_from_json(json: *const c_char, out: *mut *mut OrbitexGeneratorSet) -> OrbitexStatus {
    guard(|| {
        let spec = GeneratorSetSpec::from_json(str_arg(json, "json")?)?;
        let set = spec.build()?;
        put(out, OrbitexGeneratorSet { set, degrees: spec.degrees.clone(), tail: spec.tail_bound()? })
    })
}

/// # Safety
/// `set` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn orbitex_generator_set_free(set: *mut OrbitexGeneratorSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbitex_generator_set_len(set: *const OrbitexGeneratorSet) -> usize {
    set.as_ref().map_or(0, |s| s.set.len())
}

/// Brackets the orbit growth exponent. A tail bound from the JSON
/// description is honoured. `digits` is the working precision, `tolerance`
/// the target width of each endpoint.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orbitex_exponent_bounds(
    set: *const OrbitexGeneratorSet,
    delta: f64,
    digits: u32,
    tolerance: f64,
    out: *mut *mut OrbitexBracket,
) -> OrbitexStatus {
    guard(|| {
        let s = ref_arg(set, "set")?;
        let opts = SolverOptions { digits, precision: tolerance, denominator: None };
        let bracket = solver::exponent_bounds(&s.degrees, s.tail.as_ref(), delta, &opts)?;
        put(out, OrbitexBracket { bracket })
    })
}

/// # Safety
/// `b` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbitex_bracket_lower(b: *const OrbitexBracket) -> f64 {
    b.as_ref().map_or(f64::NAN, |b| b.bracket.b_lower)
}

/// # Safety
/// `b` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbitex_bracket_upper(b: *const OrbitexBracket) -> f64 {
    b.as_ref().map_or(f64::NAN, |b| b.bracket.b_upper)
}

/// # Safety
/// `b` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orbitex_bracket_to_json(b: *const OrbitexBracket, out: *mut *mut c_char) -> OrbitexStatus {
    guard(|| {
        let b = ref_arg(b, "bracket")?;
        put_string(out, b.bracket.to_json()?)
    })
}

/// # Safety
/// `b` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn orbitex_bracket_free(b: *mut OrbitexBracket) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Enumerates the orbit of `point` up to multiplicative height `bound`
/// (decimal or `1e30` style). `max_entries` of zero means the default cap.
///
/// # Safety
/// `set` must be a live handle, strings valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orbitex_census_new(
    set: *const OrbitexGeneratorSet,
    point: *const c_char,
    bound: *const c_char,
    max_entries: usize,
    allow_partial: bool,
    out: *mut *mut OrbitexCensus,
) -> OrbitexStatus {
    guard(|| {
        let s = ref_arg(set, "set")?;
        let p = parse_point(str_arg(point, "point")?)?;
        let b = parse_big(str_arg(bound, "bound")?)?;
        let opts = CensusOptions {
            max_entries: if max_entries == 0 { census::DEFAULT_MAX_ENTRIES } else { max_entries },
            allow_partial,
        };
        let census = census::enumerate_with(&s.set, &p, &b, &opts)?;
        put(out, OrbitexCensus { census })
    })
}

/// Number of distinct orbit points, saturating at `UINT64_MAX`.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbitex_census_point_count(c: *const OrbitexCensus) -> u64 {
    c.as_ref().map_or(0, |c| u64::try_from(&c.census.point_count).unwrap_or(u64::MAX))
}

/// Largest number of words reaching a single point.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbitex_census_max_multiplicity(c: *const OrbitexCensus) -> u64 {
    c.as_ref().map_or(0, |c| c.census.max_multiplicity())
}

/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbitex_census_is_partial(c: *const OrbitexCensus) -> bool {
    c.as_ref().is_some_and(|c| c.census.partial)
}

/// Serialises the census as JSON lines.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orbitex_census_to_jsonl(
    set: *const OrbitexGeneratorSet,
    c: *const OrbitexCensus,
    out: *mut *mut c_char,
) -> OrbitexStatus {
    guard(|| {
        let s = ref_arg(set, "set")?;
        let c = ref_arg(c, "census")?;
        let mut buf = Vec::new();
        c.census.write_jsonl(&s.set, &mut buf)?;
        put_string(out, String::from_utf8(buf).map_err(|_| Failure(OrbitexStatus::Internal, "non UTF-8 output".into()))?)
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn orbitex_census_free(c: *mut OrbitexCensus) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of compositions of `n` with parts in `parts`, as a decimal string.
///
/// # Safety
/// `parts` must point at `len` values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn orbitex_composition_count(parts: *const u64, len: usize, n: u64, out: *mut *mut c_char) -> OrbitexStatus {
    guard(|| {
        if parts.is_null() || len == 0 {
            return Err(bad_arg("parts must be a non-empty array"));
        }
        let set = PartSet::new(std::slice::from_raw_parts(parts, len))?;
        put_string(out, compositions::count_exact(&set, n)?.to_string())
    })
}

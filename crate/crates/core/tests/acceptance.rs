//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! before asserting, so `cargo test --test acceptance -- --nocapture` gives
//! a readable summary.

use std::time::Instant;

use dashu::integer::UBig;
use dashu::rational::RBig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitex::approx::{approximate, verify_approximation, ApproximationRequest, PositiveReal};
use orbitex::census::{self, check_height_invariants};
use orbitex::compositions::{count_asymptotic, count_exact, PartSet};
use orbitex::height::ln_ubig;
use orbitex::semigroup::{
    count_words_with_degree_at_most, find_composition_collision, mersenne_degrees, Generator, GeneratorSet,
    DEFAULT_DEGREE_CAP,
};
use orbitex::solver::{self, exponent_bounds, SolverOptions};
use orbitex::RationalPoint;

fn verdict(id: u32, name: &str, ok: bool, detail: &str) {
    println!("criterion {id} [{name}]: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn big(n: u64) -> UBig {
    UBig::from(n)
}

fn pow10(k: usize) -> UBig {
    UBig::from(10u8).pow(k)
}

fn opts(digits: u32) -> SolverOptions {
    SolverOptions { digits, precision: 1e-12, denominator: None }
}

/// Root of sum d^{-b} = 1 by plain bisection, no tail.
fn exponent_by_bisection(degrees: &[u64]) -> f64 {
    let f = |b: f64| degrees.iter().map(|&d| (d as f64).powf(-b)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0f64, 64.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    0.5 * (lo + hi)
}

fn brute_force_compositions(parts: &[u64], n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    parts.iter().filter(|&&p| p <= n).map(|&p| brute_force_compositions(parts, n - p)).sum()
}

fn random_primes(rng: &mut ChaCha8Rng, count: usize, max: u64) -> Vec<u64> {
    let mut pool: Vec<u64> = primal::Primes::all().take_while(|&p| p as u64 <= max).map(|p| p as u64).collect();
    pool.shuffle(rng);
    let mut v = pool[..count].to_vec();
    v.sort_unstable();
    v
}

#[test]
fn criterion_1_mersenne_exponent() {
    let m = mersenne_degrees();
    let t0 = Instant::now();
    let b = exponent_bounds(&m.primes, Some(&m.tail_bound), 1e-5, &opts(60)).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let lower_ok = (b.b_lower - 0.60839).abs() <= 5e-5;
    let upper_ok = (b.b_upper - 0.60872).abs() <= 5e-5;
    let ok = lower_ok && upper_ok && b.b_lower <= b.b_upper && secs < 60.0;
    let oracle = solver::direct_exponent_oracle(&m.primes, Some(&m.tail_bound)).unwrap().b;
    verdict(
        1,
        "mersenne bracket",
        ok,
        &format!(
            "b_lower={:.10} (target 0.60839 ± 5e-5), b_upper={:.10} (target 0.60872 ± 5e-5), u={}, N={}, oracle={oracle:.10}, {secs:.2}s",
            b.b_lower, b.b_upper, b.u, b.cutoff
        ),
    );
    // A rigorous bracket must contain the true exponent whatever the targets say.
    assert!(b.contains(oracle));
    assert!(ok, "bracket [{}, {}] misses the published endpoints", b.b_lower, b.b_upper);
}

#[test]
fn criterion_2_composition_oracle() {
    let t0 = Instant::now();
    let mut subsets = Vec::new();
    for mask in 1u32..64 {
        let parts: Vec<u64> = (1..=6).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        if (2..=3).contains(&parts.len()) {
            subsets.push(parts);
        }
    }
    let mut mismatches = Vec::new();
    for parts in &subsets {
        let set = PartSet::new(parts).unwrap();
        for n in 0..=20 {
            let fast = count_exact(&set, n).unwrap();
            let slow = brute_force_compositions(parts, n);
            if fast != big(slow) {
                mismatches.push((parts.clone(), n, fast.to_string(), slow));
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let ok = mismatches.is_empty() && secs < 10.0;
    verdict(2, "composition oracle", ok, &format!("{} sets x 21 sizes, {} mismatches, {secs:.2}s", subsets.len(), mismatches.len()));
    assert_eq!(subsets.len(), 35);
    assert!(ok, "{mismatches:?}");
}

#[test]
fn criterion_3_asymptotic_accuracy() {
    let fib = count_asymptotic(&PartSet::new(&[1, 2]).unwrap(), 10).unwrap();
    let mut ok = (fib - 89.0).abs() < 0.1;
    let mut detail = format!("a(10) ~ {fib:.4};");
    for parts in [&[1u64, 2][..], &[2, 3], &[1, 2, 3]] {
        let set = PartSet::new(parts).unwrap();
        let exact = count_exact(&set, 30).unwrap().to_f64().value();
        let rel = (count_asymptotic(&set, 30).unwrap() - exact).abs() / exact;
        ok &= rel < 0.01;
        detail.push_str(&format!(" {parts:?}: {rel:.2e}"));
    }
    verdict(3, "asymptotic accuracy", ok, &detail);

    // Informational: the other aperiodic subsets of {1..6} are not all this close at n = 30.
    let mut slow = Vec::new();
    for mask in 1u32..64 {
        let parts: Vec<u64> = (1..=6).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let Ok(set) = PartSet::new(&parts) else { continue };
        if !(2..=3).contains(&parts.len()) || set.gcd() != 1 {
            continue;
        }
        let exact = count_exact(&set, 30).unwrap().to_f64().value();
        let rel = (count_asymptotic(&set, 30).unwrap() - exact).abs() / exact;
        if rel >= 0.01 {
            slow.push(format!("{parts:?}={rel:.3}"));
        }
    }
    println!("  slower-converging subsets at n = 30: {}", slow.join(" "));
    assert!(ok);
}

#[test]
fn criterion_4_bracketing() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4b4);
    let mut failures = Vec::new();
    let mut worst_growth = f64::NEG_INFINITY;
    for _ in 0..20 {
        let count = rng.gen_range(2..=5);
        let primes = random_primes(&mut rng, count, 10_000);
        let degrees: Vec<UBig> = primes.iter().map(|&p| big(p)).collect();
        let coarse = exponent_bounds(&degrees, None, 1e-4, &opts(40)).unwrap();
        let fine = exponent_bounds(&degrees, None, 5e-5, &opts(40)).unwrap();
        let library_oracle = solver::direct_exponent_oracle(&degrees, None).unwrap().b;
        let oracle = exponent_by_bisection(&primes);
        assert!((oracle - library_oracle).abs() < 1e-12, "{primes:?}: {oracle} vs {library_oracle}");
        if !(coarse.b_lower <= oracle && oracle <= coarse.b_upper) {
            failures.push(format!("{primes:?} misses {oracle}"));
        }
        let growth = fine.width() - coarse.width();
        worst_growth = worst_growth.max(growth);
        if growth > 1e-12 {
            failures.push(format!("{primes:?} widened by {growth:e}"));
        }
    }
    let ok = failures.is_empty();
    verdict(4, "bracketing", ok, &format!("20 random prime sets, worst width change on halving {worst_growth:.3e}"));
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_5_sandwich_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a5);
    let mut failures = Vec::new();
    let mut injective_checked = 0;
    for i in 0..50 {
        let delta = [0.1, 0.01, 0.001][i % 3];
        let count = rng.gen_range(2..=6);
        let primes = random_primes(&mut rng, count, 100_000);
        let reals: Vec<PositiveReal> = primes.iter().map(|&p| PositiveReal::log_of(p)).collect();
        let set = approximate(&ApproximationRequest::new(reals.clone(), delta)).unwrap();
        let v = verify_approximation(&reals, delta, &set).unwrap();
        if !v.ok {
            failures.push(format!("{primes:?} δ={delta}: {:?}", v.violation));
        }
        // Independent float check away from the boundaries.
        let u = set.u.to_f64().value();
        for (k, &p) in primes.iter().enumerate() {
            let t = (p as f64).ln();
            let (n, m) = (set.lower[k].to_f64().value() / u, set.upper[k].to_f64().value() / u);
            if !(n < t + 1e-9 && t < m + 1e-9 && m < t + delta + 1e-9 && n > t - delta - 1e-9) {
                failures.push(format!("{primes:?} δ={delta}: {n} {t} {m}"));
            }
        }
        let logs: Vec<f64> = primes.iter().map(|&p| (p as f64).ln()).collect();
        let min_gap = logs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if delta < min_gap / 2.0 {
            injective_checked += 1;
            let mut lower = set.lower.clone();
            lower.sort();
            lower.dedup();
            if lower.len() != primes.len() || !set.injective {
                failures.push(format!("{primes:?} δ={delta}: not injective"));
            }
        }
    }
    let ok = failures.is_empty();
    verdict(5, "sandwich conditions", ok, &format!("50 inputs, injectivity checked on {injective_checked}"));
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_6_height_invariants() {
    let set = GeneratorSet::with_shared_constant(&[big(3), big(7)], RBig::ONE).unwrap();
    let point = RationalPoint::integer(5);
    let c = census::enumerate(&set, &point, &pow10(200)).unwrap();
    let check = check_height_invariants(&c, &set, 1e-9).unwrap();

    // Recompute the telescoping inequality from the exact heights.
    let b_s = set.telescoping_constants().b_s;
    let h_p = 5f64.ln();
    let independent = c.entries.iter().all(|e| {
        let h = ln_ubig(&e.point.height_max());
        let d = e.shortest_word.degree().to_f64().value();
        (h / d - h_p).abs() <= b_s + 1e-9
    });
    let ok = check.ok() && independent && !c.partial && check.checked == c.entries.len();
    verdict(
        6,
        "height invariants",
        ok,
        &format!(
            "{} points, worst telescoping ratio {:.4}, worst step excess {:.3e}",
            check.checked, check.worst_telescoping_ratio, check.worst_step_excess
        ),
    );
    assert!(ok, "{check:?}");
}

#[test]
fn criterion_7_freeness() {
    let free = GeneratorSet::with_shared_constant(&[big(2), big(3), big(5)], RBig::ONE).unwrap();
    let r = find_composition_collision(&free, 3, DEFAULT_DEGREE_CAP).unwrap();
    let pair = GeneratorSet::new(vec![Generator::new(big(2), RBig::ONE).unwrap(), Generator::negated(big(2), RBig::ONE).unwrap()]).unwrap();
    let bad = find_composition_collision(&pair, 2, DEFAULT_DEGREE_CAP).unwrap();
    let collision_len = bad.collision.as_ref().map(|(a, b)| a.len().max(b.len()));
    let ok = r.collision.is_none() && r.words_checked == 1 + 3 + 9 + 27 && collision_len == Some(2);
    verdict(
        7,
        "freeness",
        ok,
        &format!("{} words (identity included) distinct; non-free pair collides as {:?}", r.words_checked, bad.collision.as_ref().map(|(a, b)| (a.indices().to_vec(), b.indices().to_vec()))),
    );
    assert!(ok);
}

#[test]
fn criterion_8_sandwich_consistency() {
    let degrees = [big(3), big(5)];
    let set = GeneratorSet::with_shared_constant(&degrees, RBig::ONE).unwrap();
    let point = RationalPoint::integer(5);
    let b_s = set.telescoping_constants().b_s;
    let h_p = 5f64.ln();
    let full = census::enumerate(&set, &point, &pow10(200)).unwrap();
    let mut ok = !full.partial;
    let mut detail = String::new();
    for k in [20usize, 50, 100, 200] {
        let c = full.restrict(&pow10(k)).unwrap();
        let lb = ln_ubig(&pow10(k));
        let lo = count_words_with_degree_at_most(&degrees, lb / (h_p + b_s));
        let hi = count_words_with_degree_at_most(&degrees, lb / (h_p - b_s));
        let here = lo <= c.function_count && c.function_count <= hi && c.point_count == c.function_count;
        ok &= here;
        detail.push_str(&format!(" 1e{k}: {lo} <= {} <= {hi}, points {};", c.function_count, c.point_count));
    }
    verdict(8, "sandwich consistency", ok, &detail);
    assert!(ok);
}

#[test]
fn criterion_9_diagnostics() {
    let corpus: Vec<Vec<UBig>> = vec![
        mersenne_degrees().primes,
        vec![big(2), big(3)],
        vec![big(3), big(7)],
        vec![big(2), big(3), big(5), big(7)],
    ];
    let mut ok = true;
    let mut detail = String::new();
    for degrees in &corpus {
        let logs: Vec<f64> = degrees.iter().map(ln_ubig).collect();
        let reals: Vec<PositiveReal> = degrees.iter().cloned().map(PositiveReal::LogOf).collect();
        let diag = solver::c_t_bound(&logs, solver::discreteness_constant(&logs).unwrap()).unwrap();
        ok &= diag.residual < 1e-12;
        let mut previous = f64::INFINITY;
        for delta in [1e-2, 1e-3, 1e-4] {
            let b = exponent_bounds(degrees, None, delta, &opts(40)).unwrap();
            let gap = solver::gap_bound(delta, &diag).unwrap();
            let here = solver::root_lower_bound_holds(&reals, &b, &diag) && gap >= b.width() && gap < previous;
            ok &= here;
            previous = gap;
        }
        // Roughly linear in delta, so it goes to zero.
        let g2 = solver::gap_bound(1e-2, &diag).unwrap();
        let g4 = solver::gap_bound(1e-4, &diag).unwrap();
        ok &= g4 < g2 / 50.0;
        detail.push_str(&format!(" {} degrees: c_T={:.6} residual={:.1e} gap(1e-4)={g4:.2e};", degrees.len(), diag.c_t, diag.residual));
    }
    verdict(9, "diagnostics", ok, &detail);
    assert!(ok);
}

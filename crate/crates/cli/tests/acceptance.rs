//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{Gen, Sample};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use ppcount::fpcount::{fp_point_count, naive_point_count};
use ppcount::oracle::{brute_count, brute_fp_roots, brute_multiplicity, roots_mod_power};
use ppcount::{
    count_points, tree_audit, CountConfig, FpPoly, PrimePowerCtx, RootFinder, RootMethod,
    SeparatedCurve,
};
use rand::Rng;

const CORPUS_PER_PRIME: usize = 512;
const PRIMES: [u64; 4] = [2, 3, 5, 7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    let mut detail = summary;
    if !failures.is_empty() {
        detail.push_str(&format!("; {} failures, first: {}", failures.len(), failures[0]));
    }
    Outcome {
        pass: failures.is_empty(),
        detail,
    }
}

/// Corpus curves for one prime; generated at `k = 4` so coefficients range
/// over `[-p^4, p^4]` and are reduced to each smaller precision.
fn corpus(p: u64) -> Vec<Sample> {
    Gen::new(0xC0FFEE ^ p).corpus(p, 4, CORPUS_PER_PRIME, 5)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cfg = CountConfig::default();
    let mut failures = Vec::new();
    let mut checked = 0usize;
    let mut branches = BTreeSet::new();
    for p in PRIMES {
        for sample in corpus(p) {
            for k in 1..=4 {
                let curve = sample.at(k);
                let oracle = brute_count(&curve, u64::MAX).unwrap();
                checked += 1;
                match count_points(&curve, &cfg, 7) {
                    Ok(r) => {
                        for n in r.tree.nodes() {
                            branches.insert(format!("{:?}", n.branch));
                        }
                        if r.n != oracle || r.tree.fold() != r.n {
                            failures.push(format!(
                                "{curve} p={p} k={k}: counted {} fold {} oracle {oracle}",
                                r.n,
                                r.tree.fold()
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("{curve} p={p} k={k}: {e}")),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("took {elapsed:?}, limit 5 min"));
    }
    let branches: Vec<_> = branches.into_iter().collect();
    outcome(
        &failures,
        format!(
            "{checked} (curve, p, k) cases over {} curves/prime, branches seen {branches:?}, {elapsed:.1?}",
            CORPUS_PER_PRIME
        ),
    )
}

fn hensel_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut bases = 0usize;
    for p in PRIMES {
        for sample in corpus(p) {
            let curve = sample.at(3);
            if curve.g_tilde().is_zero() && curve.h_tilde().is_zero() {
                continue;
            }
            let roots3 = roots_mod_power(&curve, 3).unwrap();
            for (a, b) in roots_mod_power(&curve, 1).unwrap() {
                if curve.multiplicity_at(a, b) != Ok(1) {
                    continue;
                }
                bases += 1;
                let mut level: Vec<(BigUint, BigUint)> = vec![(a.into(), b.into())];
                for j in 1..3 {
                    let mut next = Vec::new();
                    for (x, y) in &level {
                        let lifts = match curve.hensel_lifts((x, y), j) {
                            Ok(l) => l,
                            Err(e) => {
                                failures.push(format!("{curve} ({x},{y}) j={j}: {e}"));
                                continue;
                            }
                        };
                        if lifts.lifts.len() as u64 != p {
                            failures.push(format!("{curve} ({x},{y}) j={j}: {} lifts", lifts.lifts.len()));
                        }
                        let m = curve.ctx().pow(j + 1);
                        let mj = curve.ctx().pow(j);
                        for (u, v) in &lifts.lifts {
                            let value = (curve.g().eval_mod(u, &m) + curve.h().eval_mod(v, &m)) % &m;
                            if !value.is_zero() || &(u % &mj) != x || &(v % &mj) != y {
                                failures.push(format!("{curve}: bad lift ({u},{v}) of ({x},{y})"));
                            }
                        }
                        next.extend(lifts.lifts);
                    }
                    level = next;
                }
                let distinct: BTreeSet<_> = level.iter().cloned().collect();
                let above = roots3
                    .iter()
                    .filter(|&&(x, y)| x % p == a && y % p == b)
                    .count();
                if distinct.len() as u64 != p * p || above as u64 != p * p {
                    failures.push(format!(
                        "{curve} base ({a},{b}): {} lifted, {above} brute roots mod p^3, expected {}",
                        distinct.len(),
                        p * p
                    ));
                }
            }
        }
    }
    outcome(&failures, format!("{bases} smooth base points lifted to k=3"))
}

fn nmul_range() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for p in PRIMES {
        for sample in corpus(p) {
            let curve = sample.at(2);
            let precise = sample.at(12);
            if curve.g_tilde().is_zero() && curve.h_tilde().is_zero() {
                continue;
            }
            let lifted: BTreeSet<(u64, u64)> = roots_mod_power(&curve, 2)
                .unwrap()
                .into_iter()
                .map(|(x, y)| (x % p, y % p))
                .collect();
            for &(a, b) in &lifted {
                let m = curve.multiplicity_at(a, b).unwrap();
                if m < 2 {
                    continue;
                }
                checked += 1;
                let s = precise.point_valuation(a, b, 12);
                if s < 2 || s > m {
                    failures.push(format!("{curve} at ({a},{b}): s = {s}, m = {m}"));
                }
            }
        }
    }
    outcome(&failures, format!("{checked} singular points with a lift mod p^2"))
}

/// Random curves at a larger prime with planted singular points or lines.
fn large_instance(gen: &mut Gen, p: u64) -> (Sample, u32) {
    let rng = gen.rng();
    let k = rng.random_range(2..=16u32);
    let d = rng.random_range(2..=8usize);
    let pb = BigInt::from(p);
    let small = |deg: usize, rng: &mut rand_chacha::ChaCha8Rng| -> Vec<BigInt> {
        (0..=deg).map(|_| BigInt::from(rng.random_range(-50i64..=50))).collect()
    };
    let power = |a: i64, m: usize| -> Vec<BigInt> {
        let mut acc = vec![BigInt::from(1)];
        for _ in 0..m {
            let mut next = vec![BigInt::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * a;
            }
            acc = next;
        }
        acc
    };
    let add = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
        let n = x.len().max(y.len());
        (0..n)
            .map(|i| x.get(i).cloned().unwrap_or_default() + y.get(i).cloned().unwrap_or_default())
            .collect()
    };
    let scaled = |v: Vec<BigInt>, e: u32| -> Vec<BigInt> {
        let f = pb.pow(e);
        v.into_iter().map(|c| c * &f).collect()
    };
    let a = rng.random_range(0..p as i64);
    let b = rng.random_range(0..p as i64);
    let m1 = rng.random_range(2..=d.min(6));
    let m2 = rng.random_range(2..=d.min(6));
    let e1 = rng.random_range(1..=k);
    let e2 = rng.random_range(1..=k);
    let noise_g = small(rng.random_range(0..=d), rng);
    let noise_h = small(rng.random_range(0..=d), rng);
    let kind = rng.random_range(0..3);
    let (g, h, name) = match kind {
        0 => (
            add(&power(a, m1), &scaled(noise_g, e1)),
            add(&power(b, m2), &scaled(noise_h, e2)),
            "large-point",
        ),
        1 => (
            add(&power(a, m1), &scaled(noise_g, e1 + 1)),
            scaled(noise_h, e2),
            "large-line-x1",
        ),
        _ => (
            scaled(noise_g, e1),
            add(&power(b, m2), &scaled(noise_h, e2 + 1)),
            "large-line-x2",
        ),
    };
    (
        Sample {
            p,
            g,
            h,
            kind: name,
        },
        k,
    )
}

fn structural_bounds() -> Outcome {
    let cfg = CountConfig::default();
    let mut failures = Vec::new();
    let mut audited = 0usize;
    let mut exempt = 0usize;
    let mut audit = |sample: &Sample, k: u32, failures: &mut Vec<String>| {
        let curve = sample.at(k);
        let tree = count_points(&curve, &cfg, 1).unwrap().tree;
        let report = tree_audit(&tree, sample.degree());
        if report.exempt {
            exempt += 1;
            return;
        }
        audited += 1;
        if !report.passed() {
            failures.push(format!(
                "[{}] {curve} p={} k={k}: {}",
                sample.kind,
                sample.p,
                report.violations.join("; ")
            ));
        }
    };
    for p in PRIMES {
        for sample in corpus(p) {
            for k in 1..=4 {
                audit(&sample, k, &mut failures);
            }
        }
    }
    let mut gen = Gen::new(9973);
    for _ in 0..100 {
        let (sample, k) = large_instance(&mut gen, 9973);
        audit(&sample, k, &mut failures);
    }
    let off_line = failures.iter().filter(|f| !f.contains("(Line")).count();
    outcome(
        &failures,
        format!(
            "{audited} trees audited ({exempt} degenerate-fallback trees exempt), incl. 100 at p=9973; \
             {off_line} failing trees without a line-branch violation"
        ),
    )
}

fn multiplicity_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for p in PRIMES {
        for sample in corpus(p) {
            let curve = sample.at(1);
            if curve.g_tilde().is_zero() && curve.h_tilde().is_zero() {
                continue;
            }
            for (a, b) in roots_mod_power(&curve, 1).unwrap() {
                checked += 1;
                let fast = curve.multiplicity_at(a, b);
                let slow = brute_multiplicity(&curve, a, b);
                if fast != slow {
                    failures.push(format!("{curve} at ({a},{b}): {fast:?} vs {slow:?}"));
                }
            }
        }
    }
    outcome(&failures, format!("{checked} curve points compared"))
}

fn base_case_cross_check() -> Outcome {
    let mut failures = Vec::new();
    let mut curves = 0usize;
    let mut gen = Gen::new(101);
    let extra: Vec<Sample> = [11u64, 13, 31, 53, 101]
        .iter()
        .flat_map(|&p| gen.corpus(p, 1, 100, 5))
        .collect();
    let all = PRIMES.iter().flat_map(|&p| corpus(p)).chain(extra);
    for sample in all {
        let curve = sample.at(1);
        if curve.g_tilde().is_zero() && curve.h_tilde().is_zero() {
            continue;
        }
        curves += 1;
        let fast = fp_point_count(&curve).unwrap();
        let naive = naive_point_count(&curve);
        if fast != naive {
            failures.push(format!("{curve} p={}: histogram {fast}, naive {naive}", sample.p));
        }
    }
    let primes: Vec<u64> = (2..10_000u64).filter(|&n| ppcount::modarith::is_prime(n)).collect();
    let rng = gen.rng();
    let mut polys = 0usize;
    while polys < 200 {
        let p = primes[rng.random_range(0..primes.len())];
        let deg = rng.random_range(1..=12usize);
        // plant some roots so splitting actually happens
        let mut f = FpPoly::constant(rng.random_range(1..p), p);
        let planted = rng.random_range(0..=deg);
        for _ in 0..planted {
            f = f.mul(&FpPoly::linear(rng.random_range(0..p), p));
        }
        let rest: Vec<u64> = (0..=deg - planted).map(|_| rng.random_range(0..p)).collect();
        let f = f.mul(&FpPoly::new(rest, p));
        if f.is_zero() {
            continue;
        }
        polys += 1;
        let expected = brute_fp_roots(&f).unwrap();
        for seed in 0..5u64 {
            let got = RootFinder::new(RootMethod::CantorZassenhaus, seed).roots(&f).unwrap();
            if got != expected {
                failures.push(format!("{f:?} seed {seed}: cz {got:?}, brute {expected:?}"));
            }
        }
    }
    outcome(
        &failures,
        format!("{curves} curves with p <= 101 vs naive scan; {polys} polys x 5 seeds CZ vs brute"),
    )
}

fn smooth_closed_form() -> Outcome {
    let cfg = CountConfig::default();
    let mut failures = Vec::new();
    let mut used = 0usize;
    let mut rf = RootFinder::new(RootMethod::Brute, 0);
    'outer: for p in PRIMES {
        for sample in corpus(p) {
            if used >= 50 {
                break 'outer;
            }
            let base = sample.at(1);
            if base.content_valuation(1) > 0 {
                continue;
            }
            match base.singular_locus(&mut rf) {
                Ok(locus) if locus.is_empty() => {}
                _ => continue,
            }
            let n1 = fp_point_count(&base).unwrap();
            if n1 == 0 {
                continue;
            }
            used += 1;
            for k in 1..=8 {
                let n = count_points(&sample.at(k), &cfg, 0).unwrap().n;
                let expected = BigUint::from(p).pow(k - 1) * n1;
                if n != expected {
                    failures.push(format!("{} p={p} k={k}: {n} vs {expected}", sample.at(k)));
                }
            }
        }
    }
    if used < 50 {
        failures.push(format!("only {used} smooth curves in corpus"));
    }
    outcome(&failures, format!("{used} smooth curves, k = 1..8"))
}

fn median_time(curve: &SeparatedCurve, reps: usize) -> Duration {
    let cfg = CountConfig::default();
    let mut times: Vec<Duration> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            count_points(curve, &cfg, 0).unwrap();
            t.elapsed()
        })
        .collect();
    times.sort();
    times[reps / 2]
}

fn scaling_smoke() -> Outcome {
    let mut failures = Vec::new();
    let p = 1_000_003;
    let ctx = PrimePowerCtx::new(p, 8).unwrap();
    let elliptic = SeparatedCurve::from_i64(&[-1, -1, 0, -1], &[0, 0, 1], &ctx);
    let t = Instant::now();
    let n = count_points(&elliptic, &CountConfig::default(), 0).unwrap().n;
    let big = t.elapsed();
    if big > Duration::from_secs(60) {
        failures.push(format!("p=1000003 k=8 took {big:?}"));
    }

    let cusp = |k| {
        SeparatedCurve::from_i64(&[0, 0, 0, 0, 0, 0, -1], &[0, 0, 1], &PrimePowerCtx::new(9973, k).unwrap())
    };
    let t4 = median_time(&cusp(4), 15);
    let t32 = median_time(&cusp(32), 15);
    let ratio = t32.as_secs_f64() / t4.as_secs_f64();
    if ratio >= 100.0 {
        failures.push(format!("time(k=32)/time(k=4) = {ratio:.1}"));
    }
    outcome(
        &failures,
        format!(
            "p=1000003 k=8: N={n} in {big:.2?}; p=9973 x2^2-x1^6: k=4 {t4:.2?}, k=32 {t32:.2?}, ratio {ratio:.1}"
        ),
    )
}

fn determinism() -> Outcome {
    let mut failures = Vec::new();
    let cases = [
        ("count", "x2^2 - x1^3 - x1 - 1", "9973", "6"),
        ("tree", "x2^2 - x1^6", "9973", "20"),
        ("tree", "x1^4 + 3*x2^2 - 9*x2^3", "3", "9"),
        ("tree", "x1^2 + x2^2", "2", "8"),
        ("count", "x1^5 - 25*x1 + x2^4 - 7*x2^2", "5", "10"),
    ];
    for (cmd, poly, p, k) in cases {
        let run = |threads: &str| {
            ppcount_cli::run([
                "ppcount", cmd, "--poly", poly, "--p", p, "--k", k, "--seed", "42", "--threads", threads,
            ])
        };
        let one = run("1");
        let eight = run("8");
        if one.code != 0 || one.stdout != eight.stdout {
            failures.push(format!("{cmd} {poly} p={p} k={k}: outputs differ (exit {})", one.code));
        }
    }
    outcome(&failures, format!("{} invocations, --threads 1 vs 8", cases.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("hensel suite", hensel_suite),
        ("valuation range at singular points", nmul_range),
        ("structural bounds", structural_bounds),
        ("multiplicity equivalence", multiplicity_equivalence),
        ("base-case cross-check", base_case_cross_check),
        ("smooth closed form", smooth_closed_form),
        ("scaling smoke", scaling_smoke),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! End-to-end acceptance checks. Run with `cargo test -p subsum-core --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use subsum_core::classify::{
    bigeometric_lambda, classify_spec, digit_coverage_test, digit_form, pseries_thresholds, Bound,
    CantorCertificate, Comparison, Strength, VerdictKind,
};
use subsum_core::cn::{build_cn, ifs_maps, DEFAULT_CAP};
use subsum_core::greedy::{fill, FillStatus};
use subsum_core::oracle::{oracle_cn, subset_sums, union_diff};
use subsum_core::rational::{int, pow, rat, Rational};
use subsum_core::render::{
    cell_center, nonincreasing_feasible, sweep, sweep_csv, sweep_svg, Region, SweepConfig,
};
use subsum_core::sequence::nonincreasing_reorder;
use subsum_core::spec_format::preset;
use subsum_core::{classify, ClosedInterval, IntervalUnion, SequenceSpec, TailEnclosure};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn union(pairs: &[(Rational, Rational)]) -> IntervalUnion {
    IntervalUnion::normalize(pairs.iter().map(|(l, r)| ClosedInterval::new(l.clone(), r.clone()).unwrap()).collect())
}

fn named(name: &str) -> SequenceSpec {
    preset(name).unwrap().as_single().unwrap().clone()
}

fn thirds() -> Check {
    let spec = named("thirds");
    let kind = classify_spec(&spec).map_err(|e| e.to_string())?.kind;
    ensure!(kind == VerdictKind::CantorSet { certificate: CantorCertificate::AllExceed }, "verdict {kind:?}");
    let c2 = build_cn(&spec, 2, DEFAULT_CAP).unwrap().fattened;
    let expected = union(&[
        (int(0), rat(1, 18)),
        (rat(1, 9), rat(1, 6)),
        (rat(1, 3), rat(7, 18)),
        (rat(4, 9), rat(1, 2)),
    ]);
    ensure!(c2 == expected, "C_2 = {c2}");
    for n in 0..=14 {
        let c = build_cn(&spec, n, DEFAULT_CAP).unwrap().fattened.components();
        ensure!(c == 1 << n, "components(C_{n}) = {c}");
    }
    Ok(())
}

fn halves() -> Check {
    let spec = named("halves");
    let unit = union(&[(int(0), int(1))]);
    for n in 0..=14 {
        let c = build_cn(&spec, n, DEFAULT_CAP).unwrap().fattened;
        ensure!(c == unit, "C_{n} = {c}");
    }
    let v = classify_spec(&spec).unwrap();
    ensure!(v.kind.name() == "FiniteUnion" && v.component_count() == Some(1), "verdict {:?}", v.kind);
    Ok(())
}

fn two_then_halves() -> Check {
    let spec = named("two-then-halves");
    let expected = union(&[(int(0), int(1)), (int(2), int(3))]);
    for n in 1..=14 {
        let c = build_cn(&spec, n, DEFAULT_CAP).unwrap().fattened;
        ensure!(c == expected, "C_{n} = {c}");
    }
    let v = classify_spec(&spec).unwrap();
    ensure!(v.kind.name() == "FiniteUnion" && v.component_count() == Some(2), "verdict {:?}", v.kind);
    ensure!(v.hull == [Bound::Exact(int(0)), Bound::Exact(int(3))], "hull {:?}", v.hull);
    Ok(())
}

fn bigeometric_cantor() -> Check {
    let spec = named("ratios-2-5-3-5");
    let maps = ifs_maps(&spec).unwrap();
    ensure!(maps.iter().all(|m| m.scale == rat(6, 25)), "IFS scale {}", maps[0].scale);
    ensure!(bigeometric_lambda(&rat(2, 5), &rat(3, 5)) == rat(6, 25), "lambda");
    let kind = classify_spec(&spec).unwrap().kind;
    ensure!(
        matches!(kind, VerdictKind::CantorSet { certificate: CantorCertificate::LambdaBelowQuarter { .. } }),
        "verdict {kind:?}"
    );
    let c6 = build_cn(&spec, 6, DEFAULT_CAP).unwrap().fattened;
    ensure!(c6.components() == 23, "components(C_6) = {}", c6.components());
    ensure!(oracle_cn(&spec, 6).unwrap() == c6, "oracle disagrees at depth 6");
    Ok(())
}

fn guthrie_nymann() -> Check {
    let spec = named("gn");
    ensure!(spec.tail(2) == TailEnclosure::exact(rat(5, 12)), "X_2 = {}", spec.tail(2));
    ensure!(spec.tail(1) == TailEnclosure::exact(rat(11, 12)), "X_1 = {}", spec.tail(1));
    let profile = classify_spec(&spec).unwrap();
    for n in 1..=20usize {
        // x_{2k} = 2/4^k, X_{2k} = 5/(3·4^k)
        let k = (n / 2) as u64;
        let independent = n % 2 == 0 && rat(2, 1) / pow(&int(4), k) > rat(5, 3) / pow(&int(4), k);
        let exceeds = spec.term_exceeds_tail(n).unwrap();
        ensure!(exceeds == independent, "comparison at n = {n}");
        if n % 2 == 0 {
            ensure!(exceeds, "x_{n} does not exceed X_{n}");
        }
    }
    ensure!(profile.profile.as_ref().unwrap().comparisons[1] == Comparison::TermExceedsTail, "profile");
    let form = digit_form(&spec).unwrap();
    let cert = digit_coverage_test(form.base, &form.numerators).unwrap();
    ensure!(form.base == 4 && cert.is_some(), "digit coverage mod {}", form.base);
    ensure!(matches!(profile.kind, VerdictKind::SymmetricCantorval { .. }), "verdict {:?}", profile.kind);
    let block = union(&[(rat(3, 4), int(1))]);
    for n in 0..=16 {
        let c = build_cn(&spec, n, DEFAULT_CAP).unwrap().fattened;
        ensure!(block.is_subset(&c), "[3/4, 1] not inside C_{n}");
    }
    Ok(())
}

fn kenyon() -> Check {
    let spec = named("kenyon");
    let order = nonincreasing_reorder(&spec).unwrap().first_terms(7);
    let listed = [rat(6, 4), rat(6, 16), rat(1, 4), rat(6, 64), rat(1, 16), rat(6, 256), rat(1, 64)];
    ensure!(order == listed, "order {order:?}");
    let form = digit_form(&spec).unwrap();
    let cert = digit_coverage_test(form.base, &form.numerators).unwrap().ok_or("no coverage")?;
    ensure!(cert.base == 4 && cert.digit_set == vec![0, 1, 6, 7], "digit set {:?}", cert.digit_set);
    ensure!(bigeometric_lambda(&rat(9, 14), &rat(3, 10)) == rat(1, 4), "lambda");
    let kind = classify_spec(&spec).unwrap().kind;
    ensure!(!matches!(kind, VerdictKind::CantorSet { .. }), "Cantor certificate fired");
    ensure!(matches!(kind, VerdictKind::SymmetricCantorval { strength: Strength::Proven, .. }), "verdict {kind:?}");
    Ok(())
}

fn basel() -> Check {
    let spec = named("basel");
    let x1 = spec.tail(1);
    let (lo, hi) = (x1.lo().ok_or("divergent")?, x1.hi().ok_or("divergent")?);
    ensure!(lo >= &rat(1, 2) && hi <= &int(1), "X_1 enclosure {x1}");
    for p in 2..=8u32 {
        // Direct inequality evaluation: least k >= 1 with (p-1)(k+1)^(p-1) <= k^p.
        let n = (1u64..).find(|&k| (p as i128 - 1) * (k as i128 + 1).pow(p - 1) <= (k as i128).pow(p)).unwrap();
        ensure!(pseries_thresholds(p) == ((p - 1) as u64, n), "thresholds for p = {p}");
    }
    ensure!(pseries_thresholds(2) == (1, 2), "K, N for p = 2");
    let kind = classify_spec(&spec).unwrap().kind;
    match kind {
        VerdictKind::FiniteUnion { component_lower, component_upper, .. } => {
            ensure!(component_lower == 2u32.into() && component_upper == 4u32.into(), "bounds");
        }
        other => return Err(format!("verdict {other:?}")),
    }
    Ok(())
}

fn oracle_equivalence() -> Check {
    for (i, spec) in common::random_specs(0x5eed, 100).iter().enumerate() {
        for n in 0..=12 {
            let built = build_cn(spec, n, DEFAULT_CAP).unwrap().fattened;
            let brute = oracle_cn(spec, n).unwrap();
            let diff = union_diff(&brute, &built);
            ensure!(diff.is_empty(), "spec {i} depth {n} DIFF\n{}", diff.join("\n"));
        }
    }
    Ok(())
}

fn reflection() -> Check {
    let mut specs: Vec<SequenceSpec> =
        ["thirds", "halves", "two-then-halves", "ratios-2-5-3-5", "gn", "kenyon"].iter().map(|n| named(n)).collect();
    specs.extend(common::random_specs(7, 20));
    for spec in &specs {
        let x0 = spec.total().value().cloned().ok_or("inexact total")?;
        for n in 0..=12 {
            let c = build_cn(spec, n, DEFAULT_CAP).unwrap().fattened;
            ensure!(c.reflect(&x0) == c, "reflection fails at depth {n} for {spec:?}");
        }
    }
    Ok(())
}

fn greedy() -> Check {
    let harmonic = named("harmonic");
    let r = int(1);
    let f = fill(&harmonic, &r, &rat(1, 1_000_000), 10_000).map_err(|e| e.to_string())?;
    ensure!(f.status != FillStatus::RoundLimit, "round limit");
    let mut prev = r.clone();
    for (k, g) in f.gaps.iter().enumerate() {
        ensure!(g * int(2) <= prev, "gap {k} does not halve");
        prev = g.clone();
    }
    let included: Rational = f.included().map(|k| rat(1, k as i64)).sum();
    ensure!(included == f.achieved && &f.achieved + f.final_gap() == r, "achieved + gap != 1");

    // A target needing several rounds.
    let r = rat(2, 7);
    let f = fill(&harmonic, &r, &rat(1, 1_000_000), 10_000).map_err(|e| e.to_string())?;
    let mut prev = r.clone();
    for g in &f.gaps {
        ensure!(g * int(2) <= prev, "gap does not halve for 2/7");
        prev = g.clone();
    }
    let included: Rational = f.included().map(|k| rat(1, k as i64)).sum();
    ensure!(&included + f.final_gap() == r && f.final_gap() < rat(1, 1_000_000), "2/7 residual");

    let f = fill(&harmonic, &rat(5, 6), &rat(1, 1_000_000), 100).unwrap();
    ensure!(f.runs == vec![(2, 3)] && f.final_gap().is_zero(), "runs {:?}", f.runs);
    Ok(())
}

fn signed() -> Check {
    let spec = preset("alternating-halves").unwrap();
    let v = classify(&spec).unwrap();
    ensure!(v.kind.name() == "FiniteUnion", "verdict {:?}", v.kind);
    ensure!(v.hull == [Bound::Exact(rat(-2, 3)), Bound::Exact(rat(1, 3))], "hull {:?}", v.hull);

    // (-1)^k / 2^k in natural order.
    let terms: Vec<Rational> = (1..=10).map(|k| rat(if k % 2 == 0 { 1 } else { -1 }, 1 << k)).collect();
    let mut merged = spec.first_terms(10);
    merged.sort();
    let mut natural = terms.clone();
    natural.sort();
    ensure!(merged == natural, "first ten terms differ");
    let abs: Vec<Rational> = terms.iter().map(Signed::abs).collect();
    let shift: Rational = terms.iter().filter(|t| t.is_negative()).sum();
    let signed_sums = subset_sums(terms.as_slice(), 10).unwrap().sums;
    let shifted: Vec<Rational> = subset_sums(abs.as_slice(), 10).unwrap().sums.iter().map(|s| s + &shift).collect();
    ensure!(signed_sums == shifted, "translation fails at n = 10");
    Ok(())
}

fn sweep_regions() -> Check {
    let config = SweepConfig::default();
    let grid = sweep(&config).map_err(|e| e.to_string())?;
    let n = config.resolution;
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    for j in 0..n {
        for i in 0..n {
            let (a, b) = (cell_center(i, n), cell_center(j, n));
            let cell = grid.cell(i, j);
            let lambda = (Rational::one() - &a) * (Rational::one() - &b);
            let feasible = nonincreasing_feasible(&a, &b);
            ensure!(cell.feasible == feasible, "feasibility at ({a}, {b})");
            if a <= half && b <= half {
                let v = classify_spec(&SequenceSpec::bigeometric(a.clone(), b.clone(), int(1)).unwrap()).unwrap();
                ensure!(
                    cell.region == Region::Interval && v.hull == [Bound::Exact(int(0)), Bound::Exact(int(1))],
                    "({a}, {b}) is {}",
                    cell.verdict
                );
            } else if feasible && lambda < quarter {
                ensure!(cell.region == Region::Cantor, "({a}, {b}) is {}", cell.verdict);
            } else if feasible {
                let certified = cell.region == Region::Cantorval && cell.certificate == "digit_coverage";
                ensure!(cell.region == Region::Undetermined || certified, "({a}, {b}) is {}", cell.verdict);
            }
            // Outside the feasible region the terms are sorted first, which can give an interval.
            if feasible && cell.region == Region::Interval {
                ensure!(a <= half && b <= half, "({a}, {b}) colored as an interval");
            }
            let mirror = grid.cell(j, i);
            ensure!(!feasible || mirror.region == cell.region, "({a}, {b}) and its mirror differ");
        }
    }
    let marker = grid.markers.iter().find(|m| m.alpha == "9/20" && m.beta == "6/11").ok_or("no marker")?;
    ensure!(marker.region == Region::Cantorval, "(9/20, 6/11) is {}", marker.verdict);
    let again = sweep(&config).unwrap();
    ensure!(sweep_csv(&grid).unwrap() == sweep_csv(&again).unwrap(), "CSV not deterministic");
    ensure!(sweep_svg(&grid) == sweep_svg(&again), "SVG not deterministic");
    let golden = include_str!("golden/sweep21.csv");
    ensure!(sweep_csv(&grid).unwrap() == golden, "CSV differs from the golden file");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 12] = [
        ("powers of 1/3", thirds, 5),
        ("powers of 1/2", halves, 5),
        ("prefix 2 + powers of 1/2", two_then_halves, 5),
        ("bi-geometric 2/5, 3/5", bigeometric_cantor, 10),
        ("Guthrie-Nymann", guthrie_nymann, 30),
        ("Kenyon", kenyon, 10),
        ("p-series p = 2", basel, 10),
        ("oracle equivalence", oracle_equivalence, 60),
        ("reflection symmetry", reflection, 10),
        ("greedy filler", greedy, 5),
        ("signed reduction", signed, 5),
        ("parameter sweep", sweep_regions, 120),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(()) if elapsed > Duration::from_secs(*budget) => Err(format!("took longer than {budget} s")),
            other => other,
        };
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({:.2} s)", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({:.2} s): {msg}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

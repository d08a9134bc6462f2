//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines come out in order; exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use blockmap::oracle::{bivariate_census, census, Family};
use blockmap::sampler::{
    decorate_blocks, replicate_rng, scaling_experiment, scheme_law, ConditionedSampler, DegreeLaw, DegreeSequence,
    ScalingFit, ScalingOptions, Strategy,
};
use blockmap::schemes::{
    all_schemes, base_series, extract_block_series, load_scheme, map_polynomial, solve_weighted_bivariate,
};
use blockmap::series::Series;
use blockmap::transition::{exponent_estimate, singular_point, DEFAULT_EXPONENT_ORDER, DEFAULT_ORDER};
use rug::Rational;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Critical weights as printed.
fn u_c(scheme: u8) -> Rational {
    match scheme {
        1 => q(81, 17),
        2 => q(9, 5),
        3 => q(135, 7),
        4 => q(36, 11),
        5 => q(52, 27),
        6 => q(68, 3),
        7 => q(16, 7),
        _ => q(64, 37),
    }
}

/// Printed `(rho, M(rho, u), E)` for `u <= u_C`.
fn printed(scheme: u8, u: f64) -> (f64, f64, f64) {
    match scheme {
        1 => (
            27.0 / (8.0 * (5.0 * u + 27.0)),
            5.0 * u / 27.0,
            32.0 * u / (3.0 * (5.0 * u + 27.0)),
        ),
        2 => (
            4.0 / (3.0 * (u * u + 6.0 * u + 9.0)),
            u / 3.0,
            8.0 * u / (3.0 * (u + 3.0)),
        ),
        3 => (
            128.0 / (27.0 * (5.0 * u + 27.0)),
            (25.0 * u * u + 135.0 * u + 128.0) / (27.0 * (5.0 * u + 27.0)),
            32.0 * u / (5.0 * (5.0 * u + 27.0)),
        ),
        4 => (5.0 / (8.0 * (u + 4.0)), u / 4.0, 20.0 * u / (9.0 * (u + 4.0))),
        5 => (
            25.0 / (8.0 * (u * u + 8.0 * u + 16.0)),
            u / 4.0,
            40.0 * u / (13.0 * (u + 4.0)),
        ),
        6 => (125.0 / (128.0 * (u + 4.0)), u / 4.0, 20.0 * u / (17.0 * (u + 4.0))),
        7 => (
            54.0 / (u * u * u + 24.0 * u * u + 192.0 * u + 512.0),
            u / 8.0,
            9.0 * u / (2.0 * (u + 8.0)),
        ),
        _ => (
            25.0 / 6912.0 * u * u - 5.0 / 108.0 * u + 4.0 / 27.0,
            5.0 * u / (32.0 - 5.0 * u),
            27.0 * u / (2.0 * (32.0 - 5.0 * u)),
        ),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut where_ = String::new();
    for scheme in 1..=8u8 {
        let uc = u_c(scheme);
        for frac in [q(1, 2), q(3, 4), q(1, 1)] {
            let u = Rational::from(&uc * &frac);
            let p = singular_point(scheme, &u, DEFAULT_ORDER).unwrap();
            let (rho, y, e) = printed(scheme, u.to_f64());
            // The printed scheme-3 value includes the single loop at weight one.
            let y_ours = if scheme == 3 {
                p.y.to_f64() + p.rho.to_f64()
            } else {
                p.y.to_f64()
            };
            for (got, want) in [(p.rho.to_f64(), rho), (y_ours, y), (p.mean.to_f64(), e)] {
                let err = rel(got, want);
                if err > worst {
                    worst = err;
                    where_ = format!("scheme {scheme}, u = {u}");
                }
            }
        }
    }
    let anchor = |scheme: u8| singular_point(scheme, &q(1, 1), DEFAULT_ORDER).unwrap();
    let (a2, a4, a8) = (anchor(2), anchor(4), anchor(8));
    let anchors_ok = rel(a2.rho.to_f64(), 1.0 / 12.0) <= 1e-6
        && rel(a2.y.to_f64(), 1.0 / 3.0) <= 1e-6
        && rel(a2.mean.to_f64(), 2.0 / 3.0) <= 1e-6
        && rel(a4.rho.to_f64(), 1.0 / 8.0) <= 1e-6
        && rel(a4.y.to_f64(), 1.0 / 4.0) <= 1e-6
        && rel(1.0 - a4.mean.to_f64(), 5.0 / 9.0) <= 1e-6
        && rel(a8.rho.to_f64(), 27.0 / 256.0) <= 1e-6
        && rel(a8.mean.to_f64(), 0.5) <= 1e-6;
    outcome(
        worst <= 1e-6 && anchors_ok,
        format!(
            "max relative error {worst:.2e} ({where_}), anchors {}",
            if anchors_ok { "ok" } else { "off" }
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut worst_rel: f64 = 0.0;
    let mut worst_mean: f64 = 0.0;
    for scheme in 1..=8u8 {
        let out = Command::new(env!("CARGO_BIN_EXE_blockmap"))
            .args(["critical", "--scheme", &scheme.to_string()])
            .output()
            .expect("run the binary");
        if !out.status.success() {
            return outcome(false, format!("critical --scheme {scheme} exited with {}", out.status));
        }
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let got = v["u_c"].as_f64().unwrap();
        worst_rel = worst_rel.max(rel(got, u_c(scheme).to_f64()));
        let p = singular_point(scheme, &u_c(scheme), DEFAULT_ORDER).unwrap();
        worst_mean = worst_mean.max((p.mean.to_f64() - 1.0).abs());
    }
    outcome(
        worst_rel <= 1e-6 && worst_mean <= 1e-8,
        format!("max relative error of u_C {worst_rel:.2e}, max |E(u_C) - 1| {worst_mean:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut passing = Vec::new();
    let mut lines = Vec::new();
    for scheme in 1..=8u8 {
        let uc = u_c(scheme);
        let targets = [
            (q(1, 1), 2.5, 0.1),
            (Rational::from(&uc * 2u32), 1.5, 0.1),
            (uc, 5.0 / 3.0, 0.15),
        ];
        let mut ok = true;
        let mut alphas = Vec::new();
        for (u, alpha, tol) in targets {
            let fit = exponent_estimate(scheme, &u, DEFAULT_EXPONENT_ORDER).unwrap();
            ok &= (fit.alpha - alpha).abs() <= tol;
            alphas.push(format!("{:.3}", fit.alpha));
        }
        if ok {
            passing.push(scheme);
        }
        lines.push(format!("{scheme}:{}", alphas.join("/")));
    }
    let others = passing.iter().filter(|&&s| s != 2).count();
    outcome(
        passing.contains(&2) && others >= 2,
        format!(
            "N = {DEFAULT_EXPONENT_ORDER}, schemes within tolerance {passing:?}; alpha at 1/2u_C/u_C {}",
            lines.join(" ")
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for family in Family::ALL {
        let counts = census(family, 4).unwrap();
        let series = base_series(family, 4).unwrap();
        if (1..=4).any(|n| *series.coeff(n) != counts[n - 1]) {
            bad.push(family.to_string());
        }
    }
    let cen = bivariate_census(4).unwrap();
    let m = solve_weighted_bivariate(load_scheme(2).unwrap(), 4).unwrap();
    let mut bivariate_ok = true;
    for n in 1..=4 {
        for k in 0..=n + 1 {
            bivariate_ok &= m.coeff(n).coeff(k) == *cen.get(&(n, k)).unwrap_or(&0);
        }
    }
    let z2: Vec<String> = m.coeff(2).coeffs().iter().map(|c| c.to_string()).collect();
    outcome(
        bad.is_empty() && bivariate_ok,
        format!(
            "{} families checked to n = 4, mismatches {bad:?}; bivariate {}; [z^2]M in powers of u: {}",
            Family::ALL.len(),
            if bivariate_ok { "exact" } else { "differs" },
            z2.join(" ")
        ),
    )
}

fn criterion_5() -> Outcome {
    let order = 128;
    let mut details = Vec::new();
    let mut ok = true;
    for (from, to, shift_z, divide_z) in [(2u8, 3u8, true, false), (5, 6, false, false), (7, 8, true, true)] {
        let extra = usize::from(divide_z);
        let blocks = extract_block_series(load_scheme(from).unwrap(), order + extra).unwrap();
        let mut c = blocks.into_coeffs();
        if shift_z {
            c[1] -= 1;
        }
        if divide_z {
            c.remove(0);
        }
        let adjusted = Series::from_coeffs(c).truncate(order);
        let algebraic = map_polynomial(to)
            .unwrap()
            .series_root(&Rational::new(), order)
            .unwrap();
        let integral = all_schemes()
            .iter()
            .filter(|s| s.id == from || s.id == to)
            .all(|s| extract_block_series(s, order).unwrap().is_nonnegative_integral());
        let same = adjusted == algebraic;
        ok &= same && integral;
        details.push(format!(
            "{from}->{to} {}",
            if same && integral { "equal" } else { "differs" }
        ));
    }
    outcome(ok, format!("order {order}: {}", details.join(", ")))
}

fn criterion_6() -> Outcome {
    let r = scaling_experiment(2, &q(1, 1), &[2000], 200, SEED, &ScalingOptions::default()).unwrap();
    let s = &r.summaries[0];
    let (l1, l2) = (s.stats[0].median / 2000.0, s.stats[1].median / 2000.0);
    outcome(
        (l1 - 1.0 / 3.0).abs() <= 0.017 && l2 <= 0.05,
        format!("median L1/n = {l1:.4} (target 1/3 +- 0.017), median L2/n = {l2:.4} (limit 0.05)"),
    )
}

fn criterion_7() -> Outcome {
    let r = scaling_experiment(2, &q(9, 5), &[1000, 4000], 100, SEED, &ScalingOptions::default()).unwrap();
    let scaled: Vec<f64> = r
        .summaries
        .iter()
        .map(|s| s.stats[0].median / (s.map_size as f64).powf(2.0 / 3.0))
        .collect();
    let ratio = scaled[1] / scaled[0];
    outcome(
        (0.8..=1.25).contains(&ratio),
        format!(
            "median L1/n^(2/3) = {:.4}, {:.4}; ratio {ratio:.3} (window [0.8, 1.25])",
            scaled[0], scaled[1]
        ),
    )
}

fn criterion_8() -> Outcome {
    let sizes = [1_000, 10_000, 100_000];
    let r = scaling_experiment(2, &q(5, 1), &sizes, 100, SEED, &ScalingOptions::default()).unwrap();
    let medians: Vec<f64> = r.summaries.iter().map(|s| s.stats[0].median).collect();
    let ScalingFit::Supercritical {
        increments,
        l1_over_n01,
        slope,
        ..
    } = &r.fit
    else {
        return outcome(false, "not classified as supercritical");
    };
    let increasing = medians.windows(2).all(|w| w[1] > w[0]);
    let (lo, hi) = increments
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    let log_growth = lo > 0.0 && (hi - lo) <= 0.3 * hi;
    let decreasing = l1_over_n01.windows(2).all(|w| w[1] < w[0]);
    outcome(
        increasing && log_growth && decreasing,
        format!(
            "medians {medians:?}; increments per e-fold {:?}; L1/n^0.1 {:?}; slope {:.3}; increasing {increasing}, log growth {log_growth}, L1/n^0.1 decreasing {decreasing}",
            increments.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>(),
            l1_over_n01.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>(),
            slope.unwrap_or(f64::NAN)
        ),
    )
}

/// Conditioned shape probabilities by enumeration of degree sequences.
fn exact_shapes(law: &DegreeLaw, n: usize) -> HashMap<Vec<usize>, f64> {
    fn go(law: &DegreeLaw, n: usize, prefix: &mut Vec<usize>, open: i64, w: f64, out: &mut HashMap<Vec<usize>, f64>) {
        if prefix.len() == n {
            if open == 0 {
                out.insert(prefix.clone(), w);
            }
            return;
        }
        if open <= 0 {
            return;
        }
        for k in 0..n {
            let p = law.prob(k);
            if p > 0.0 {
                prefix.push(law.stride * k);
                go(law, n, prefix, open - 1 + (law.stride * k) as i64, w * p, out);
                prefix.pop();
            }
        }
    }
    let mut out = HashMap::new();
    go(law, n, &mut Vec::new(), 1, 1.0, &mut out);
    let total: f64 = out.values().sum();
    out.values_mut().for_each(|w| *w /= total);
    out
}

fn criterion_9() -> Outcome {
    let samples = 100_000u64;
    let mut worst_p: f64 = 1.0;
    let mut failures = Vec::new();
    let mut checked = 0usize;
    let mut invariant_breaks = 0usize;
    let mut invariant_samples = 0usize;
    for spec in all_schemes() {
        let uc = u_c(spec.id);
        for (label, u) in [
            ("u_C/2", Rational::from(&uc / 2u32)),
            ("u_C", uc.clone()),
            ("2u_C", Rational::from(&uc * 2u32)),
        ] {
            let law = scheme_law(spec.id, &u, 64).unwrap();
            let n = (1..=7).rev().find(|&n| (n - 1) % law.stride == 0).unwrap();
            let expected = exact_shapes(&law, n);
            let sampler = ConditionedSampler::new(&law, n, Strategy::Auto).unwrap();
            let mut rng = replicate_rng(SEED, (spec.id as u64) << 8 | checked as u64);
            let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
            for _ in 0..samples {
                let tree = sampler.sample(&mut rng).unwrap();
                invariant_samples += 1;
                let records = decorate_blocks(spec, &law, &tree, &mut rng).unwrap();
                let mass: usize = records.iter().flat_map(|r| &r.block_sizes).sum();
                if !tree.is_valid() || tree.valid_rotations() != 1 || mass != (n - 1) / law.stride {
                    invariant_breaks += 1;
                }
                *counts.entry(tree.degrees).or_default() += 1;
            }
            checked += 1;
            if expected.len() < 2 {
                continue;
            }
            let mut stat = 0.0;
            for (shape, p) in &expected {
                let e = p * samples as f64;
                let o = *counts.get(shape).unwrap_or(&0) as f64;
                stat += (o - e) * (o - e) / e;
            }
            let stray = counts.keys().any(|k| !expected.contains_key(k));
            let p = 1.0 - ChiSquared::new((expected.len() - 1) as f64).unwrap().cdf(stat);
            worst_p = worst_p.min(p);
            if p < 0.01 || stray {
                failures.push(format!("scheme {} at {label} (p = {p:.4})", spec.id));
            }
        }
        // Invariants at a larger size.
        let law = scheme_law(spec.id, &q(1, 1), 500).unwrap();
        let sampler = ConditionedSampler::new(&law, spec.tree_vertices(500), Strategy::Auto).unwrap();
        let mut rng = replicate_rng(SEED, 1 << 40 | spec.id as u64);
        for _ in 0..200 {
            let tree = sampler.sample(&mut rng).unwrap();
            invariant_samples += 1;
            let mass: usize = decorate_blocks(spec, &law, &tree, &mut rng)
                .unwrap()
                .iter()
                .flat_map(|r| &r.block_sizes)
                .sum();
            if !tree.is_valid() || tree.valid_rotations() != 1 || mass != 500 {
                invariant_breaks += 1;
            }
        }
    }
    outcome(
        failures.is_empty() && invariant_breaks == 0,
        format!(
            "{checked} laws at n <= 7, {samples} samples each, smallest chi-square p-value {worst_p:.4}, failures {failures:?}; invariants broken in {invariant_breaks} of {invariant_samples} samples"
        ),
    )
}

/// Compositions of `k` into parts with positive weight, with their weights.
fn compositions(tau: &[f64], k: usize, prefix: &mut Vec<usize>, w: f64, out: &mut HashMap<Vec<usize>, f64>) {
    if k == 0 {
        out.insert(prefix.clone(), w);
        return;
    }
    for first in 1..=k {
        if tau[first] > 0.0 {
            prefix.push(first);
            compositions(tau, k - first, prefix, w * tau[first], out);
            prefix.pop();
        }
    }
}

fn criterion_10() -> Outcome {
    let spec = load_scheme(8).unwrap();
    let samples = 100_000;
    let mut worst_tv: f64 = 0.0;
    let mut ok = true;
    for u in [q(1, 1), u_c(8)] {
        let law = scheme_law(8, &u, 64).unwrap();
        let point = singular_point(8, &u, DEFAULT_ORDER).unwrap();
        let t = point.t.to_f64();
        let blocks = extract_block_series(spec, 12).unwrap();
        let uf = u.to_f64();
        let tau: Vec<f64> = (0..=12)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    uf * blocks.coeff(k).to_f64() * t.powi(k as i32)
                }
            })
            .collect();
        let mut rng = replicate_rng(SEED, 1 << 41);
        for k in 1..=12usize {
            let mut exact = HashMap::new();
            compositions(&tau, k, &mut Vec::new(), 1.0, &mut exact);
            let q_k: f64 = exact.values().sum();
            let tree =
                DegreeSequence::new(std::iter::once(2 * k).chain(std::iter::repeat_n(0, 2 * k)).collect()).unwrap();
            let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
            for _ in 0..samples {
                let records = decorate_blocks(spec, &law, &tree, &mut rng).unwrap();
                *counts.entry(records[0].block_sizes.clone()).or_default() += 1;
            }
            let mut tv = 0.0;
            for (seq, w) in &exact {
                tv += (w / q_k - *counts.get(seq).unwrap_or(&0) as f64 / samples as f64).abs();
            }
            tv += counts
                .iter()
                .filter(|(s, _)| !exact.contains_key(*s))
                .map(|(_, c)| *c as f64 / samples as f64)
                .sum::<f64>();
            tv /= 2.0;
            worst_tv = worst_tv.max(tv);
            ok &= tv <= 0.01;
        }
    }
    let r = scaling_experiment(8, &q(1, 1), &[2000], 30, SEED, &ScalingOptions::default()).unwrap();
    let diag = &r.summaries[0].condensation;
    let gaps: Vec<usize> = diag.iter().map(|c| c.total - c.largest).collect();
    let emitted = !diag.is_empty();
    let preview: Vec<String> = diag
        .iter()
        .take(5)
        .map(|c| format!("{}:{}", c.total, c.largest))
        .collect();
    outcome(
        ok && emitted,
        format!(
            "k <= 12 at u = 1 and u_C, {samples} samples each, max TV {worst_tv:.4} (limit 0.01); condensation diagnostic {} points (total:largest {}), max total - largest {}",
            diag.len(),
            preview.join(" "),
            gaps.iter().max().copied().unwrap_or(0)
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed forms", criterion_1),
        ("critical weights", criterion_2),
        ("singular exponents", criterion_3),
        ("oracle agreement", criterion_4),
        ("chain consistency", criterion_5),
        ("subcritical largest block", criterion_6),
        ("critical scaling", criterion_7),
        ("supercritical scaling", criterion_8),
        ("sampler exactness", criterion_9),
        ("sequence decoration", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.passed);
        println!(
            "criterion {:>2} {:<26} {} [{:.1}s] {}",
            i + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

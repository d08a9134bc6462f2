use std::collections::HashMap;

use blockmap::oracle::bivariate_census;
use blockmap::sampler::{
    condensation_diagnostic, decorate_blocks, largest_blocks, replicate_rng, sample_conditioned, sample_free_tree,
    sample_free_tree_capped, scaling_experiment, scheme_law, BlockRecord, ConditionedSampler, DegreeLaw,
    DegreeSequence, ScalingOptions, Strategy,
};
use blockmap::schemes::{extract_block_series, load_scheme};
use blockmap::transition::{singular_point, DEFAULT_ORDER};
use proptest::prelude::*;
use rug::Rational;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn critical_binary() -> DegreeLaw {
    DegreeLaw::new(1, vec![0.5, 0.0, 0.5]).unwrap()
}

/// Every plane tree with `n` vertices and degrees in `stride * N`, weighted by
/// the product of its offspring probabilities.
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
            if p == 0.0 {
                continue;
            }
            prefix.push(law.stride * k);
            go(law, n, prefix, open - 1 + (law.stride * k) as i64, w * p, out);
            prefix.pop();
        }
    }
    let mut out = HashMap::new();
    go(law, n, &mut Vec::new(), 1, 1.0, &mut out);
    let total: f64 = out.values().sum();
    out.values_mut().for_each(|w| *w /= total);
    out
}

/// Pearson statistic and its upper-tail p-value.
fn chi_square(expected: &HashMap<Vec<usize>, f64>, counts: &HashMap<Vec<usize>, u64>, samples: u64) -> f64 {
    let mut stat = 0.0;
    for (shape, p) in expected {
        let e = p * samples as f64;
        let o = *counts.get(shape).unwrap_or(&0) as f64;
        stat += (o - e) * (o - e) / e;
    }
    assert!(
        counts.keys().all(|k| expected.contains_key(k)),
        "sampled a shape of probability zero"
    );
    let dof = (expected.len() - 1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

#[test]
fn single_vertex_tree() {
    let law = scheme_law(2, &Rational::from(1), 16).unwrap();
    let mut rng = replicate_rng(1, 0);
    assert_eq!(sample_conditioned(&law, 1, &mut rng).unwrap().degrees, vec![0]);
    let leaf = DegreeLaw::new(1, vec![1.0]).unwrap();
    assert_eq!(sample_free_tree(&leaf, &mut rng).unwrap().degrees, vec![0]);
}

#[test]
fn critical_binary_free_tree_is_a_leaf_half_the_time() {
    let law = critical_binary();
    let mut rng = replicate_rng(3, 0);
    let samples = 100_000;
    // Runaway trees hit the cap and are counted as non-leaves.
    let leaves = (0..samples)
        .filter(|_| matches!(sample_free_tree_capped(&law, 10_000, &mut rng), Ok(t) if t.n() == 1))
        .count();
    assert!((leaves as f64 / samples as f64 - 0.5).abs() < 0.01);
}

#[test]
fn critical_binary_shapes_are_uniform() {
    let law = critical_binary();
    let sampler = ConditionedSampler::new(&law, 5, Strategy::Auto).unwrap();
    let mut rng = replicate_rng(5, 0);
    let samples = 10_000;
    let mut counts = HashMap::new();
    for _ in 0..samples {
        *counts.entry(sampler.sample(&mut rng).unwrap().degrees).or_insert(0u64) += 1;
    }
    let expected = exact_shapes(&law, 5);
    assert_eq!(expected.len(), 2);
    assert!(expected.values().all(|p| (p - 0.5).abs() < 1e-12));
    assert!(chi_square(&expected, &counts, samples) > 0.01);
}

#[test]
fn exact_and_rejection_agree_on_small_trees() {
    let law = DegreeLaw::new(1, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
    let expected = exact_shapes(&law, 6);
    for strategy in [Strategy::Exact, Strategy::Rejection] {
        let sampler = ConditionedSampler::new(&law, 6, strategy).unwrap();
        let mut rng = replicate_rng(7, strategy as u64);
        let samples = 40_000;
        let mut counts = HashMap::new();
        for _ in 0..samples {
            *counts.entry(sampler.sample(&mut rng).unwrap().degrees).or_insert(0u64) += 1;
        }
        assert!(chi_square(&expected, &counts, samples) > 0.01, "{strategy:?}");
    }
}

#[test]
fn incompatible_sizes_and_strategies_are_rejected() {
    let law = scheme_law(2, &Rational::from(1), 64).unwrap();
    assert!(ConditionedSampler::new(&law, 40, Strategy::Auto).is_err());
    assert!(ConditionedSampler::new(&law, 0, Strategy::Auto).is_err());
    assert!(ConditionedSampler::new(&law, 41, Strategy::Rejection).is_err());
    let super_law = scheme_law(2, &Rational::from(5), 64).unwrap();
    assert!(ConditionedSampler::new(&super_law, 41, Strategy::Exact).is_err());
    let explosive = DegreeLaw::new(1, vec![0.2, 0.2, 0.6]).unwrap();
    assert!(sample_free_tree(&explosive, &mut replicate_rng(0, 0)).is_err());
}

#[test]
fn stride_decoration() {
    let spec = load_scheme(2).unwrap();
    let law = scheme_law(2, &Rational::from(1), 16).unwrap();
    let tree = DegreeSequence::new(vec![6, 0, 0, 0, 0, 0, 0]).unwrap();
    let records = decorate_blocks(spec, &law, &tree, &mut replicate_rng(0, 0)).unwrap();
    assert_eq!(records[0].block_sizes, vec![3]);
    assert!(records[1..].iter().all(|r| r.block_sizes.is_empty()));
    let odd = DegreeSequence::new(vec![3, 0, 0, 0]).unwrap();
    assert!(decorate_blocks(spec, &law, &odd, &mut replicate_rng(0, 0)).is_err());
}

#[test]
fn sequence_decoration_of_a_leaf_is_empty() {
    let spec = load_scheme(8).unwrap();
    let law = scheme_law(8, &Rational::from(1), 16).unwrap();
    let leaf = DegreeSequence::new(vec![0]).unwrap();
    let records = decorate_blocks(spec, &law, &leaf, &mut replicate_rng(0, 0)).unwrap();
    assert_eq!(
        records,
        vec![BlockRecord {
            node: 0,
            block_sizes: vec![]
        }]
    );
}

#[test]
fn sequence_singleton_probability() {
    let u = Rational::from(1);
    let spec = load_scheme(8).unwrap();
    let law = scheme_law(8, &u, 16).unwrap();
    // q_k from the exact block coefficients, independently of the law tables.
    let t = singular_point(8, &u, DEFAULT_ORDER).unwrap().t.to_f64();
    let blocks = extract_block_series(spec, 12).unwrap();
    let tau: Vec<f64> = (0..=12)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                blocks.coeff(k).to_f64() * t.powi(k as i32)
            }
        })
        .collect();
    let mut q = vec![1.0];
    for k in 1..=12 {
        q.push((1..=k).map(|i| tau[i] * q[k - i]).sum());
    }
    let mut rng = replicate_rng(11, 0);
    let samples = 20_000;
    for k in [3usize, 5, 7] {
        assert!(tau[k] > 0.0);
        let tree = DegreeSequence::new(std::iter::once(2 * k).chain(std::iter::repeat_n(0, 2 * k)).collect()).unwrap();
        let mut hits = 0;
        for _ in 0..samples {
            let records = decorate_blocks(spec, &law, &tree, &mut rng).unwrap();
            assert_eq!(records[0].block_sizes.iter().sum::<usize>(), k);
            if records[0].block_sizes == [k] {
                hits += 1;
            }
        }
        let p = tau[k] / q[k];
        let sd = (p * (1.0 - p) / samples as f64).sqrt();
        assert!(
            (hits as f64 / samples as f64 - p).abs() < 5.0 * sd,
            "k = {k}: {hits} vs {p}"
        );
    }
}

#[test]
fn largest_blocks_examples() {
    let one = [BlockRecord {
        node: 0,
        block_sizes: vec![5],
    }];
    assert_eq!(largest_blocks(&one, 2), vec![5, 0]);
    let three = [
        BlockRecord {
            node: 0,
            block_sizes: vec![3, 1],
        },
        BlockRecord {
            node: 1,
            block_sizes: vec![],
        },
        BlockRecord {
            node: 2,
            block_sizes: vec![3],
        },
    ];
    assert_eq!(largest_blocks(&three, 3), vec![3, 3, 1]);
}

#[test]
fn sequence_replicate_maxima_match_a_scan() {
    let spec = load_scheme(8).unwrap();
    let law = scheme_law(8, &Rational::from(1), 400).unwrap();
    let mut rng = replicate_rng(13, 0);
    for _ in 0..20 {
        let tree = sample_conditioned(&law, 801, &mut rng).unwrap();
        let records = decorate_blocks(spec, &law, &tree, &mut rng).unwrap();
        let mut all: Vec<usize> = records.iter().flat_map(|r| r.block_sizes.clone()).collect();
        all.sort_unstable();
        all.reverse();
        all.resize(4, 0);
        assert_eq!(largest_blocks(&records, 4), all[..4].to_vec());
        let diag = condensation_diagnostic(&records);
        assert!(!diag.is_empty() && diag.iter().all(|c| c.largest <= c.total));
    }
}

#[test]
fn blocks_per_map_match_the_bivariate_census() {
    // Scheme 2 at u = 1 samples maps uniformly; compare the mean block count.
    let census = bivariate_census(4).unwrap();
    let spec = load_scheme(2).unwrap();
    let law = scheme_law(2, &Rational::from(1), 16).unwrap();
    let mut rng = replicate_rng(17, 0);
    let samples = 40_000;
    for m in 1..=4usize {
        let row: Vec<(usize, u64)> = census
            .iter()
            .filter(|((n, _), _)| *n == m)
            .map(|((_, k), c)| (*k, *c))
            .collect();
        let total: u64 = row.iter().map(|(_, c)| c).sum();
        let mean = row.iter().map(|(k, c)| (*k * *c as usize) as f64).sum::<f64>() / total as f64;
        let second = row.iter().map(|(k, c)| (*k * *k * *c as usize) as f64).sum::<f64>() / total as f64;
        let sd = ((second - mean * mean) / samples as f64).sqrt();
        let sampler = ConditionedSampler::new(&law, spec.tree_vertices(m), Strategy::Auto).unwrap();
        let mut acc = 0usize;
        for _ in 0..samples {
            let tree = sampler.sample(&mut rng).unwrap();
            acc += decorate_blocks(spec, &law, &tree, &mut rng)
                .unwrap()
                .iter()
                .map(|r| r.block_sizes.len())
                .sum::<usize>();
        }
        let got = acc as f64 / samples as f64;
        assert!((got - mean).abs() < 5.0 * sd.max(1e-3), "m = {m}: {got} vs {mean}");
    }
}

#[test]
fn scaling_is_independent_of_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                scaling_experiment(8, &Rational::from(1), &[50, 200], 30, 42, &ScalingOptions::default()).unwrap()
            })
    };
    let (a, b) = (run(1), run(4));
    let key = |r: &blockmap::sampler::ScalingReport| {
        r.rows
            .iter()
            .map(|x| (x.map_size, x.rep, x.largest.clone(), x.blocks_total))
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
}

#[test]
fn too_few_replicates_are_refused() {
    assert!(scaling_experiment(2, &Rational::from(1), &[100], 29, 0, &ScalingOptions::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cycle_lemma_has_exactly_one_valid_rotation(raw in proptest::collection::vec(0usize..4, 1..40)) {
        // Pad with leaves until sum(d - 1) = -1.
        let excess: i64 = raw.iter().map(|&d| d as i64 - 1).sum();
        let mut degrees = raw;
        degrees.resize(degrees.len() + (excess + 1).max(0) as usize, 0);
        let total: i64 = degrees.iter().map(|&d| d as i64 - 1).sum();
        prop_assume!(total == -1);
        let tree = DegreeSequence::from_cycle(degrees).unwrap();
        prop_assert!(tree.is_valid());
        prop_assert_eq!(tree.valid_rotations(), 1);
    }

    #[test]
    fn largest_blocks_are_sorted_and_padded(sizes in proptest::collection::vec(proptest::collection::vec(1usize..50, 0..4), 0..20), j in 1usize..8) {
        let records: Vec<BlockRecord> = sizes.into_iter().enumerate().map(|(node, block_sizes)| BlockRecord { node, block_sizes }).collect();
        let l = largest_blocks(&records, j);
        prop_assert_eq!(l.len(), j);
        prop_assert!(l.windows(2).all(|w| w[0] >= w[1]));
        let max = records.iter().flat_map(|r| r.block_sizes.iter().copied()).max().unwrap_or(0);
        prop_assert_eq!(l[0], max);
    }

    #[test]
    fn sampled_trees_conserve_mass(scheme in 1u8..=8, m in 1usize..60, seed in any::<u64>()) {
        let spec = load_scheme(scheme).unwrap();
        let law = scheme_law(scheme, &Rational::from(1), 64).unwrap();
        let mut rng = replicate_rng(seed, 0);
        let tree = sample_conditioned(&law, spec.tree_vertices(m), &mut rng).unwrap();
        prop_assert!(tree.is_valid());
        let records = decorate_blocks(spec, &law, &tree, &mut rng).unwrap();
        prop_assert_eq!(records.iter().flat_map(|r| &r.block_sizes).sum::<usize>(), m);
    }
}

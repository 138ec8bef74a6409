//! Seeded statistical checks on generator output and estimators.

use std::sync::Arc;

use bigraphgen::linkgen::{mdc, mppl, positive_arity_nodes, MdcParams, Mixing, MpplParams};
use bigraphgen::metrics::{
    degree_distribution, endpoint_arity_correlation, fit_binomial, fit_geometric, fit_poisson,
    positive_arity_count, sample_moments,
};
use bigraphgen::placegen::{generate_place_graph, PlaceGenParams};
use bigraphgen::rng::rng_from_seed;
use bigraphgen::{Control, LinkGraph, Place, PlaceGraph, Signature};
use rand_distr::{Binomial, Distribution, Geometric, Poisson};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn uniform_controls(count: usize) -> Arc<Signature> {
    Arc::new(
        Signature::new(
            (0..count)
                .map(|i| Control::new(format!("K{i}"), i % 4))
                .collect(),
        )
        .unwrap(),
    )
}

fn chi_square_p(observed: &[usize], expected: f64) -> f64 {
    let stat: f64 = observed
        .iter()
        .map(|o| (*o as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((observed.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

#[test]
fn control_selection_is_uniform() {
    let k = 26;
    let sig = uniform_controls(k);
    let mut counts = vec![0usize; k];
    for seed in 0..1000 {
        let g = generate_place_graph(&PlaceGenParams::new(1, 101, sig.clone(), seed)).unwrap();
        for c in g.control_indices() {
            counts[*c] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    let p = 1.0 / k as f64;
    let se = (p * (1.0 - p) / total as f64).sqrt();
    for c in &counts {
        let share = *c as f64 / total as f64;
        assert!(
            (share - p).abs() < 4.0 * se,
            "share {share} vs {p} (se {se})"
        );
    }
}

#[test]
fn degree_distribution_has_long_tail() {
    let sig = uniform_controls(4);
    let runs = 100;
    let mut long = 0;
    for seed in 0..runs {
        let g = generate_place_graph(&PlaceGenParams::new(1, 1000, sig.clone(), seed)).unwrap();
        let h = degree_distribution(&g);
        // Node degrees only: skip the root.
        let max_node = g.place_degrees()[1..].iter().copied().max().unwrap();
        if max_node as f64 > 10.0 * h.average_degree() {
            long += 1;
        }
    }
    assert!(
        long * 10 >= runs * 9,
        "{long} of {runs} runs had a long tail"
    );
}

#[test]
fn positive_arity_counts_small_graphs() {
    // One positive control out of ten, so p = 0.1 exactly.
    let sig = Arc::new(Signature::with_positive_fraction(10, 0.1));
    let samples: Vec<f64> = (0..10_000)
        .map(|seed| {
            let g = generate_place_graph(&PlaceGenParams::new(1, 11, sig.clone(), seed)).unwrap();
            positive_arity_count(&g) as f64
        })
        .collect();
    let m = sample_moments(&samples).unwrap();
    let se = (0.9f64 / 1e4).sqrt();
    assert!((m.mean - 1.0).abs() < 4.0 * se, "{m:?}");
    assert!((m.variance - 0.9).abs() < 0.05, "{m:?}");
}

#[test]
fn positive_arity_half_fraction() {
    let sig = Arc::new(Signature::with_positive_fraction(26, 0.5));
    let samples: Vec<u64> = (0..2000)
        .map(|seed| {
            let g = generate_place_graph(&PlaceGenParams::new(1, 1001, sig.clone(), seed)).unwrap();
            positive_arity_count(&g) as u64
        })
        .collect();
    let fit = fit_binomial(&samples, 1000).unwrap();
    assert!((fit.estimate - 0.5).abs() < 4.0 * fit.standard_error);
}

#[test]
fn binomial_moments_match_theory() {
    let mut rng = rng_from_seed(11);
    let dist = Binomial::new(1000, 0.5).unwrap();
    let samples: Vec<f64> = (0..10_000).map(|_| dist.sample(&mut rng) as f64).collect();
    let m = sample_moments(&samples).unwrap();
    assert!(m.skewness.abs() < 0.05, "{m:?}");
    assert!(m.kurtosis.abs() < 0.1, "{m:?}");
}

#[test]
fn estimators_recover_parameters() {
    let mut rng = rng_from_seed(5);
    let n = 100_000;

    let bin = Binomial::new(100, 0.3).unwrap();
    let samples: Vec<u64> = (0..n).map(|_| bin.sample(&mut rng)).collect();
    let fit = fit_binomial(&samples, 100).unwrap();
    assert!((fit.estimate - 0.3).abs() < 0.005);
    assert!((fit.estimate - 0.3).abs() < 4.0 * fit.standard_error);

    let poi = Poisson::new(7.0).unwrap();
    let samples: Vec<u64> = (0..n).map(|_| poi.sample(&mut rng) as u64).collect();
    let fit = fit_poisson(&samples).unwrap();
    assert!((fit.estimate - 7.0).abs() < 0.03);

    // rand_distr's geometric counts failures before the first success.
    let geo = Geometric::new(0.2).unwrap();
    let samples: Vec<u64> = (0..n).map(|_| geo.sample(&mut rng)).collect();
    let fit = fit_geometric(&samples).unwrap();
    assert!((fit.estimate - 0.2).abs() < 0.003);
}

fn flat(arities: &[usize]) -> LinkGraph {
    let mut sorted = arities.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let sig = Arc::new(
        Signature::new(
            sorted
                .iter()
                .map(|a| Control::new(format!("A{a}"), *a))
                .collect(),
        )
        .unwrap(),
    );
    let controls = arities
        .iter()
        .map(|a| sorted.iter().position(|x| x == a).unwrap())
        .collect();
    let n = arities.len();
    LinkGraph::over(&PlaceGraph::from_parts(
        sig,
        1,
        controls,
        vec![Place::Root(0); n],
    ))
}

#[test]
fn mppl_linked_proportion() {
    // 20 places: 1 root, 9 zero-arity nodes, 10 positive-arity nodes.
    let mut arities = vec![0; 9];
    arities.extend([1, 2, 3, 1, 2, 3, 1, 2, 3, 4]);
    let lg = flat(&arities);
    let pool = positive_arity_nodes(&lg);
    assert_eq!(pool.len(), 10);
    for seed in 0..100 {
        let out = mppl(
            &lg,
            &pool,
            &MpplParams {
                p: 0.6,
                p_o: 1.0,
                p_e: 1.0,
                seed,
            },
        )
        .unwrap();
        let linked = out
            .node_ids()
            .filter(|v| out.connected_port_count(*v).unwrap() > 0)
            .count();
        assert_eq!(out.edge_count() + out.outer_names().len(), 3);
        assert_eq!(linked as f64 / 20.0, 0.3);
    }
}

#[test]
fn mppl_selection_is_uniform() {
    let lg = flat(&[1; 10]);
    let pool = positive_arity_nodes(&lg);
    let mut counts = vec![0usize; 10];
    let seeds = 10_000;
    for seed in 0..seeds {
        let out = mppl(
            &lg,
            &pool,
            &MpplParams {
                p: 0.4,
                p_o: 0.0,
                p_e: 1.0,
                seed,
            },
        )
        .unwrap();
        for v in out.node_ids() {
            if out.connected_port_count(v).unwrap() > 0 {
                counts[v.0] += 1;
            }
        }
    }
    // Four of ten nodes are linked per run.
    let expected = seeds as f64 * 4.0 / 10.0;
    let p = chi_square_p(&counts, expected);
    assert!(p > 0.01, "chi-square p-value {p}, counts {counts:?}");
}

#[test]
fn assortative_wiring_correlates_endpoints() {
    let sig = Arc::new(Signature::arity_range(1, 40));
    for seed in 0..5 {
        let g = generate_place_graph(&PlaceGenParams::new(1, 1001, sig.clone(), seed)).unwrap();
        let lg = LinkGraph::over(&g);
        let pool = positive_arity_nodes(&lg);
        let corr = |mode| {
            let out = mdc(&lg, &pool, &MdcParams { mode, seed }).unwrap();
            endpoint_arity_correlation(&out.graph).unwrap().unwrap()
        };
        let assort = corr(Mixing::Assortative);
        let dis = corr(Mixing::Disassortative);
        assert!(assort > dis, "seed {seed}: {assort} <= {dis}");
        assert!(assort > 0.0);
    }
}

#[test]
fn mdc_saturates_large_pools() {
    let sig = Arc::new(Signature::arity_range(1, 40));
    for seed in 0..20 {
        let g = generate_place_graph(&PlaceGenParams::new(1, 1001, sig.clone(), seed)).unwrap();
        let lg = LinkGraph::over(&g);
        let pool = positive_arity_nodes(&lg);
        for mode in [Mixing::Assortative, Mixing::Disassortative] {
            let out = mdc(&lg, &pool, &MdcParams { mode, seed }).unwrap();
            let s = out.graph.saturation();
            assert!(s >= 0.95, "seed {seed} {mode}: saturation {s}");
        }
    }
}

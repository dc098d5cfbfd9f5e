//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).

use rand::Rng;
use rand_distr::StandardNormal;
use sigclust::criteria::{cluster_index, weighted_cluster_index};
use sigclust::data::{DataMatrix, Partition};
use sigclust::experiments::{default_g_grid, run_power_analysis, run_wishbone};
use sigclust::kmeans::{exhaustive_minimum, two_means, KMeansConfig};
use sigclust::linalg::{lemma1_check, pairwise_sq_distances, pca, squared_dists_to_mean, EigenvalueMethod};
use sigclust::rng::RngStream;
use sigclust::scan::{minimize_wci, ordering_by_score, scan_pc_fast, scan_pc_reference};
use sigclust::synth::{gen_gaussian, gen_hotdog_plus_outliers, gen_round_clusters, HotdogParams, RoundClustersParams};
use sigclust::testing::{
    empirical_p, test_confirmatory, test_exploratory, z_score, NullDistribution, Optimizer,
    TestConfig,
};

fn verdict(name: &str, pass: bool) {
    println!("criterion {name}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {name} failed");
}

fn random_data(rng: &mut impl Rng, n: usize, d: usize) -> DataMatrix {
    let values: Vec<f64> = (0..n * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    DataMatrix::new(values, n, d).unwrap()
}

fn random_partition(rng: &mut impl Rng, n: usize) -> Partition {
    loop {
        let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
        if let Ok(p) = Partition::from_labels(labels) {
            return p;
        }
    }
}

/// Criterion 1: the incremental scan matches direct per-split evaluation.
#[test]
fn criterion_01_fast_scan_matches_reference() {
    let start = std::time::Instant::now();
    let mut rng = RngStream::new(101).rng();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(10..=500);
        let d = rng.gen_range(1..=50);
        let data = random_data(&mut rng, n, d);
        let scores = pca(&data, 1).unwrap();
        let ordering = ordering_by_score(&scores, 0);
        let dist = pairwise_sq_distances(&data);
        let r = squared_dists_to_mean(&data);
        for g in [0.0, 0.25, 0.5, 1.0] {
            let fast = scan_pc_fast(&dist, &r, &ordering, g).unwrap();
            let reference = scan_pc_reference(&data, &scores, 0, g).unwrap();
            assert_eq!(fast.len(), reference.len());
            for (a, b) in fast.iter().zip(&reference) {
                let rel = (a.value - b.value).abs() / b.value.abs().max(1e-300);
                worst = worst.max(rel);
            }
        }
    }
    let elapsed = start.elapsed();
    println!("  worst relative split error {worst:.2e}, elapsed {elapsed:.2?}");
    verdict("1 (fast scan == reference)", worst < 1e-10 && elapsed.as_secs() < 60);
}

/// Criterion 2: hyperplane-scan and 2-means vs exhaustive brute force.
#[test]
fn criterion_02_exhaustive_search_check() {
    let mut rng = RngStream::new(202).rng();
    let mut km_matches = 0usize;
    for _ in 0..30 {
        let n = rng.gen_range(5..=12);
        let d = rng.gen_range(1..=4);
        let data = random_data(&mut rng, n, d);
        for g in [0.0, 0.5, 1.0] {
            let scan = minimize_wci(&data, g, d, true).unwrap();
            let (_, global) =
                exhaustive_minimum(n, |p| weighted_cluster_index(&data, p, g).map(|v| v.value))
                    .unwrap();
            assert!(
                scan.best_wci.value >= global - 1e-12,
                "scan found {} below the global minimum {global}",
                scan.best_wci.value
            );
        }
        let (_, global_ci) =
            exhaustive_minimum(n, |p| cluster_index(&data, p).map(|v| v.value)).unwrap();
        let config = KMeansConfig { restarts: 50, ..KMeansConfig::default() };
        let km = two_means(&data, config, RngStream::new(rng.gen())).unwrap();
        if (km.ci.value - global_ci).abs() <= 1e-10 * global_ci.max(1e-300) {
            km_matches += 1;
        }
    }
    println!("  2-means matched the exhaustive CI minimum in {km_matches}/30 cases");
    verdict("2 (exhaustive-search check)", km_matches as f64 / 30.0 >= 0.99);
}

/// Criterion 3: exact 0 / exact 1 endpoints and strict interior values.
#[test]
fn criterion_03_ci_property() {
    // Piled on centroids: every point sits exactly on its cluster mean.
    let piled = DataMatrix::from_rows(&[
        vec![0.0, 0.0],
        vec![0.0, 0.0],
        vec![0.0, 0.0],
        vec![5.0, 2.0],
        vec![5.0, 2.0],
    ])
    .unwrap();
    let piled_part = Partition::from_labels(vec![0, 0, 0, 1, 1]).unwrap();
    // Collided centroids: both cluster means equal the grand mean.
    let collided = DataMatrix::from_rows(&[
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.0, 1.0],
        vec![0.0, -1.0],
    ])
    .unwrap();
    let collided_part = Partition::from_labels(vec![0, 0, 1, 1]).unwrap();

    let mut pass = cluster_index(&piled, &piled_part).unwrap().value == 0.0;
    pass &= cluster_index(&collided, &collided_part).unwrap().value == 1.0;
    for g in [0.25, 0.5, 1.0] {
        pass &= weighted_cluster_index(&piled, &piled_part, g).unwrap().value == 0.0;
        pass &= weighted_cluster_index(&collided, &collided_part, g).unwrap().value == 1.0;
    }
    let mut rng = RngStream::new(303).rng();
    for _ in 0..50 {
        let n = rng.gen_range(4..=40);
        let d = rng.gen_range(1..=5);
        let data = random_data(&mut rng, n, d);
        let part = random_partition(&mut rng, n);
        for g in [0.0, 0.25, 0.5, 1.0] {
            let v = weighted_cluster_index(&data, &part, g).unwrap().value;
            pass &= v > 0.0 && v < 1.0;
        }
    }
    verdict("3 (CI-property endpoints)", pass);
}

/// Criterion 4: direct within-SS equals the pairwise-distance identity.
#[test]
fn criterion_04_pairwise_identity() {
    let mut rng = RngStream::new(404).rng();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.gen_range(5..=80);
        let d = rng.gen_range(1..=10);
        let data = random_data(&mut rng, n, d);
        for _ in 0..10 {
            let size = rng.gen_range(1..=n);
            let mut indices: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                indices.swap(i, j);
            }
            indices.truncate(size);
            let (direct, pairwise) = lemma1_check(&data, &indices).unwrap();
            worst = worst.max((direct - pairwise).abs() / direct.abs().max(1e-300));
        }
    }
    println!("  worst relative error {worst:.2e}");
    verdict("4 (pairwise within-SS identity)", worst < 1e-10);
}

/// Criterion 5: the weighted criterion reduces to the plain one at g=0 and
/// for equal cluster sizes.
#[test]
fn criterion_05_weighted_reductions() {
    let mut rng = RngStream::new(505).rng();
    let mut worst_g0: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(4..=60);
        let d = rng.gen_range(1..=6);
        let data = random_data(&mut rng, n, d);
        let part = random_partition(&mut rng, n);
        let ci = cluster_index(&data, &part).unwrap().value;
        let wci = weighted_cluster_index(&data, &part, 0.0).unwrap().value;
        worst_g0 = worst_g0.max((ci - wci).abs() / ci.abs().max(1e-300));
    }
    let mut worst_eq: f64 = 0.0;
    for _ in 0..100 {
        let half = rng.gen_range(2..=30);
        let d = rng.gen_range(1..=6);
        let data = random_data(&mut rng, 2 * half, d);
        let mut labels = vec![0u8; half];
        labels.extend(vec![1u8; half]);
        // Shuffle so the equal halves are not contiguous.
        for i in (1..labels.len()).rev() {
            labels.swap(i, rng.gen_range(0..=i));
        }
        let part = Partition::from_labels(labels).unwrap();
        let ci = cluster_index(&data, &part).unwrap().value;
        let g = rng.gen_range(0.0..1.5);
        let wci = weighted_cluster_index(&data, &part, g).unwrap().value;
        worst_eq = worst_eq.max((ci - wci).abs() / ci.abs().max(1e-300));
    }
    println!("  worst g=0 error {worst_g0:.2e}, worst equal-size error {worst_eq:.2e}");
    verdict("5 (weighted reductions)", worst_g0 < 1e-12 && worst_eq < 1e-12);
}

/// Criterion 6: elongated-cluster-plus-outliers behavior over 50 seeds —
/// 2-means prefers splitting the bulk, the g=1 PC1 scan isolates the
/// outliers, and the conventional vs weighted confirmatory verdicts split.
#[test]
fn criterion_06_elongated_outlier_reproduction() {
    let start = std::time::Instant::now();
    let n_sims = 500;
    let mut two_means_wins = 0usize;
    let mut isolations = 0usize;
    let mut conventional_ok = 0usize;
    let mut weighted_ok = 0usize;
    for seed in 0..50u64 {
        let ds = gen_hotdog_plus_outliers(RngStream::new(seed), HotdogParams::default());
        let true_ci = cluster_index(&ds.data, &ds.true_labels).unwrap();
        let km =
            two_means(&ds.data, KMeansConfig::default(), RngStream::new(seed).substream(1))
                .unwrap();
        if km.ci.value < true_ci.value {
            two_means_wins += 1;
        }

        let scan = minimize_wci(&ds.data, 1.0, 1, true).unwrap();
        let small = if scan.best_partition.size1() <= scan.best_partition.size2() {
            scan.best_partition.cluster(0)
        } else {
            scan.best_partition.cluster(1)
        };
        if small == [ds.data.n() - 2, ds.data.n() - 1] {
            isolations += 1;
        }

        let conventional = TestConfig {
            optimizer: Optimizer::TwoMeans(KMeansConfig::default()),
            n_sims,
            stream: RngStream::new(seed).substream(2),
            ..TestConfig::new(seed)
        };
        let res = test_confirmatory(&ds.data, &ds.true_labels, 0.0, &conventional).unwrap();
        if res.z_score > -2.0 {
            conventional_ok += 1;
        }

        let weighted = TestConfig {
            n_sims,
            stream: RngStream::new(seed).substream(3),
            ..TestConfig::new(seed)
        };
        let res = test_confirmatory(&ds.data, &ds.true_labels, 0.5, &weighted).unwrap();
        if res.z_score < -3.0 {
            weighted_ok += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "  2-means wins {two_means_wins}/50, isolations {isolations}/50, \
         conventional non-rejections {conventional_ok}/50, weighted rejections {weighted_ok}/50, \
         elapsed {elapsed:.2?}"
    );
    verdict(
        "6 (elongated-outlier reproduction)",
        two_means_wins >= 48
            && isolations >= 48
            && conventional_ok >= 45
            && weighted_ok >= 45
            && elapsed.as_secs() < 600,
    );
}

/// Criterion 7: well-separated round clusters reject overwhelmingly at both
/// g=0 and g=0.5 (exploratory).
#[test]
fn criterion_07_round_clusters_reproduction() {
    let n_sims = 200;
    let mut ok = 0usize;
    for seed in 0..50u64 {
        let ds = gen_round_clusters(RngStream::new(seed), RoundClustersParams::default());
        let mut seed_ok = true;
        for (i, g) in [0.0, 0.5].into_iter().enumerate() {
            let config = TestConfig {
                n_sims,
                stream: RngStream::new(seed).substream(10 + i as u64),
                ..TestConfig::new(seed)
            };
            let res = test_exploratory(&ds.data, g, &config).unwrap();
            let below_all =
                res.null.values.iter().all(|&v| res.statistic.value < v);
            seed_ok &= res.z_score < -3.0 && below_all;
        }
        if seed_ok {
            ok += 1;
        }
    }
    println!("  both-g rejections with statistic below all null values: {ok}/50 seeds");
    verdict("7 (round-clusters reproduction)", ok >= 48);
}

/// Criterion 8: cluster-size sweep over g on isotropic Gaussian draws.
#[test]
fn criterion_08_size_sweep() {
    let grid = default_g_grid();
    let run4 = run_wishbone(4, 100, &grid, 150, 3, RngStream::new(808)).unwrap();
    let g0 = grid.iter().position(|&g| g == 0.0).unwrap();
    let g1 = grid.iter().position(|&g| g == 1.0).unwrap();
    let sizes0 = run4.sizes_for_g(g0);
    let sizes1 = run4.sizes_for_g(g1);
    let balanced =
        sizes0.iter().filter(|&&s| (25..=75).contains(&s)).count() as f64 / sizes0.len() as f64;
    let extreme =
        sizes1.iter().filter(|&&s| s.min(100 - s) <= 10).count() as f64 / sizes1.len() as f64;

    let argmax_iqr = |run: &sigclust::experiments::WishboneRun| {
        let iqr = run.iqr_by_g();
        let mut best = 0usize;
        for (i, v) in iqr.iter().enumerate() {
            if *v > iqr[best] {
                best = i;
            }
        }
        grid[best]
    };
    let run1 = run_wishbone(1, 100, &grid, 150, 3, RngStream::new(809)).unwrap();
    let run32 = run_wishbone(32, 100, &grid, 150, 3, RngStream::new(810)).unwrap();
    let (fork1, fork32) = (argmax_iqr(&run1), argmax_iqr(&run32));
    println!(
        "  g=0 balanced fraction {balanced:.3}, g=1 extreme fraction {extreme:.3}, \
         widest-IQR g: d=1 -> {fork1}, d=32 -> {fork32}"
    );
    verdict("8 (size sweep)", balanced >= 0.9 && extreme >= 0.9 && fork32 < fork1);
}

/// Criterion 9: power pattern across the g grid on one fixed seed, using the
/// noise-floored (hard) eigenvalue estimator for the null.
#[test]
fn criterion_09_power_pattern() {
    let ds = gen_hotdog_plus_outliers(RngStream::new(3), HotdogParams::default());
    let grid: Vec<f64> = (0..8).map(|i| i as f64 * 0.1).collect();
    let config = TestConfig {
        n_sims: 500,
        eigen_method: EigenvalueMethod::Hard,
        ..TestConfig::new(909)
    };
    let run = run_power_analysis(&ds.data, &ds.true_labels, &grid, &config).unwrap();

    let mut z_ok = true;
    for (i, &g) in grid.iter().enumerate() {
        let z = run.results[i].z_score;
        println!("  g={g:.1}: z={z:+.2}");
        if g >= 0.3 {
            z_ok &= z < -2.0;
        }
    }
    let n = ds.data.n();
    let band = |sizes: &[usize], f: &dyn Fn(usize) -> bool| {
        sizes.iter().filter(|&&s| f(s)).count() as f64 / sizes.len() as f64
    };
    let balanced = band(&run.reference_sizes[0], &|s| {
        3 * s >= n && 3 * s <= 2 * n
    });
    let mut extreme_ok = true;
    for (i, &g) in grid.iter().enumerate() {
        if g >= 0.6 {
            let frac = band(&run.reference_sizes[i], &|s| 10 * s.min(n - s) <= n);
            println!("  g={g:.1}: extreme-size fraction {frac:.3}");
            extreme_ok &= frac >= 0.8;
        }
    }
    println!("  g=0 balanced-size fraction {balanced:.3}");
    verdict("9 (power pattern)", z_ok && balanced >= 0.8 && extreme_ok);
}

/// Criterion 10: p and z arithmetic on a fixed null vector.
#[test]
fn criterion_10_test_arithmetic() {
    let values: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let null = NullDistribution {
        values: values.clone(),
        g: 0.0,
        eigenvalues: vec![1.0],
        n: 10,
        seed: 0,
        cluster_sizes: vec![5; 10],
    };
    // statistic 0.25: two null values (0.1, 0.2) at or below it.
    let p = empirical_p(&values, 0.25);
    let (z, degenerate) = z_score(&null, 0.25);
    let mean = 0.55;
    let sd = (0.825f64 / 9.0).sqrt();
    let mut pass = (p - 3.0 / 11.0).abs() < 1e-15;
    pass &= !degenerate && (z - (0.25 - mean) / sd).abs() < 1e-12;
    // Minimum attainable p with 100 simulations.
    let hundred: Vec<f64> = (1..=100).map(|i| i as f64).collect();
    pass &= (empirical_p(&hundred, 0.5) - 1.0 / 101.0).abs() < 1e-15;
    verdict("10 (test arithmetic)", pass);
}

/// Criterion 11: level of the exploratory weighted test on null data.
#[test]
fn criterion_11_statistical_level() {
    let mut rejections = 0usize;
    for trial in 0..200u64 {
        let ds = gen_gaussian(60, &[1.0, 1.0], RngStream::new(trial).substream(11)).unwrap();
        let config = TestConfig {
            n_sims: 200,
            stream: RngStream::new(trial).substream(12),
            ..TestConfig::new(trial)
        };
        let res = test_exploratory(&ds.data, 0.5, &config).unwrap();
        if res.rejects_at(0.05) {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / 200.0;
    println!("  rejection rate {rate:.3}");
    verdict("11 (statistical level)", (0.01..=0.12).contains(&rate));
}

/// Criterion 12: runtime budgets for the fast scan and a full test.
#[test]
fn criterion_12_performance() {
    let mut rng = RngStream::new(1212).rng();
    let data = random_data(&mut rng, 5000, 2);
    let scores = pca(&data, 1).unwrap();
    let ordering = ordering_by_score(&scores, 0);
    let dist = pairwise_sq_distances(&data);
    let r = squared_dists_to_mean(&data);
    let start = std::time::Instant::now();
    let values = scan_pc_fast(&dist, &r, &ordering, 0.5).unwrap();
    let scan_elapsed = start.elapsed();
    assert_eq!(values.len(), 4999);

    let data = random_data(&mut rng, 200, 50);
    let config = TestConfig { n_sims: 1000, ..TestConfig::new(77) };
    let start = std::time::Instant::now();
    let res = test_exploratory(&data, 0.5, &config).unwrap();
    let test_elapsed = start.elapsed();
    println!(
        "  n=5000 single-PC scan {scan_elapsed:.2?}; n=200 d=50 exploratory test \
         ({} sims) {test_elapsed:.2?}, z={:+.2}",
        res.null.values.len(),
        res.z_score
    );
    verdict(
        "12 (performance)",
        scan_elapsed.as_millis() < 1000 && test_elapsed.as_secs() < 120,
    );
}

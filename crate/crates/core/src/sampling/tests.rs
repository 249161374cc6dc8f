use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::*;
use crate::oracle;

/// p-value of the chi-square test of `counts` against equal cell masses
/// over `cells` outcomes; unseen outcomes count as zero.
fn uniform_p_value(counts: &HashMap<String, u64>, cells: usize) -> f64 {
    assert!(counts.len() <= cells, "{} outcomes seen, {cells} expected", counts.len());
    let total: u64 = counts.values().sum();
    let expected = total as f64 / cells as f64;
    let seen: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let unseen = (cells - counts.len()) as f64 * expected;
    let stat = seen + unseen;
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}

fn tally(draws: usize, seed: u64, mut f: impl FnMut(&mut ChaCha8Rng) -> String) -> HashMap<String, u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = HashMap::new();
    for _ in 0..draws {
        *counts.entry(f(&mut rng)).or_insert(0) += 1;
    }
    counts
}

#[test]
fn labeled_exact_uniform_at_four() {
    let s = LabeledSampler::with_weights(LabeledWeights::exact(4));
    let counts = tally(100_000, 1, |r| s.sample(4, false, r).canonical_key());
    let all: Vec<String> = oracle::labeled_canonical_cotrees(4).iter().map(|t| t.canonical_key()).collect();
    assert!(counts.keys().all(|k| all.contains(k)));
    assert!(uniform_p_value(&counts, 52) > 1e-3);
}

#[test]
fn labeled_float_uniform_at_four() {
    let s = LabeledSampler::with_weights(LabeledWeights::float(4));
    let counts = tally(100_000, 2, |r| s.sample(4, false, r).canonical_key());
    assert!(uniform_p_value(&counts, 52) > 1e-3);
}

#[test]
fn unlabeled_uniform_at_four() {
    for (seed, s) in [
        (3, UnlabeledSampler::with_weights(UnlabeledWeights::exact(4))),
        (4, UnlabeledSampler::with_weights(UnlabeledWeights::float(4))),
    ] {
        let counts = tally(100_000, seed, |r| s.sample(4, false, r).unlabeled_key());
        assert!(uniform_p_value(&counts, 10) > 1e-3);
    }
}

#[test]
fn unlabeled_uniform_at_six() {
    let cells = oracle::unlabeled_canonical_cotrees(6).len();
    assert_eq!(cells, 66);
    let s = UnlabeledSampler::new(6);
    let counts = tally(100_000, 5, |r| s.sample(6, false, r).unlabeled_key());
    assert!(uniform_p_value(&counts, cells) > 1e-3);
}

#[test]
fn boltzmann_conditioned_on_size_is_uniform() {
    let b = BoltzmannSampler::at_criticality();
    let counts = tally(50_000, 6, |r| b.sample_in_window(4, 0.1, 1_000_000, r).unwrap().canonical_key());
    assert!(uniform_p_value(&counts, 52) > 1e-3);
}

#[test]
fn binary_plane_trees_uniform() {
    let counts = tally(100_000, 7, |r| sample_binary_decorated(3, 0.5, r).plane_key());
    assert!(uniform_p_value(&counts, 48) > 1e-3);
    let counts = tally(100_000, 8, |r| sample_binary_decorated(3, 0.5, r).to_cotree().canonical_key());
    assert!(uniform_p_value(&counts, 12) > 1e-3);
}

#[test]
fn small_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert_eq!(LabeledSampler::new(1).sample(1, false, &mut rng).to_string(), "1");
    assert_eq!(UnlabeledSampler::new(1).sample(1, false, &mut rng).to_string(), "*");
    assert_eq!(sample_binary_decorated(1, 0.5, &mut rng).to_cotree().to_string(), "1");
    let t = sample_binary_decorated(2, 1.0, &mut rng).to_cotree();
    assert_eq!(t.decoration(t.root()), Some(Decoration::Zero));
}

#[test]
fn connected_forces_root_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = LabeledSampler::new(30);
    for _ in 0..50 {
        let t = s.sample(30, true, &mut rng);
        assert!(t.cograph().is_connected());
    }
}

#[test]
fn large_samples_are_canonical() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let t = LabeledSampler::new(3000).sample(3000, false, &mut rng);
    assert!(t.is_canonical() && t.leaf_count() == 3000);
    let mut labels: Vec<u32> = t.leaves().map(|l| t.label(l).unwrap()).collect();
    labels.sort();
    assert!(labels.iter().enumerate().all(|(i, &l)| l as usize == i + 1));
    let u = UnlabeledSampler::new(3000).sample(3000, false, &mut rng);
    assert!(u.is_canonical() && u.leaf_count() == 3000);
}

#[test]
fn configs_are_deterministic() {
    for kind in [SamplerKind::LabeledExact, SamplerKind::UnlabeledExact, SamplerKind::LabeledBoltzmann, SamplerKind::BinaryDecorated] {
        let c = SampleConfig::new(40, 99, kind);
        assert_eq!(sample(&c).unwrap().to_string(), sample(&c).unwrap().to_string());
    }
    let mut bad = SampleConfig::new(0, 1, SamplerKind::LabeledExact);
    assert_eq!(sample(&bad).unwrap_err(), SampleError::EmptySize);
    bad.n = 3;
    bad.epsilon = 1.5;
    assert_eq!(sample(&bad).unwrap_err(), SampleError::InvalidWindow(1.5));
}

#[test]
fn config_serde_round_trip() {
    let c = SampleConfig::new(10, 3, SamplerKind::BinaryDecorated);
    let json = serde_json::to_string(&c).unwrap();
    assert!(json.contains("binary-decorated"));
    let back: SampleConfig = serde_json::from_str(&json).unwrap();
    assert_eq!(back, c);
    let minimal: SampleConfig = serde_json::from_str(r#"{"n":5,"seed":1,"kind":"labeled-exact"}"#).unwrap();
    assert_eq!(minimal.epsilon, 0.1);
}

//! Statistics of cographs and empirical laws.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::cotree::{Cotree, Decoration, NodeId};
use crate::enumeration::LimitLaw;
use crate::graph::{Cograph, GraphError};
use crate::montecarlo::fold_trials;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("the cograph is disconnected")]
    DisconnectedInput,
    #[error("empty distribution")]
    Empty,
    #[error("exact density needs k ≤ {max_k} and n ≤ {max_n}, got k = {k}, n = {n}")]
    TooLarge { k: usize, n: usize, max_k: usize, max_n: usize },
    #[error("cannot mark {k} distinct leaves in a tree with {n}")]
    TooFewLeaves { k: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Vertex connectivity of a connected cograph: `n` minus the largest leaf
/// count among the root's children in the canonical cotree. On complete
/// graphs, where every root child is a leaf, this gives `n − 1`, the usual
/// convention (and 0 for a single vertex).
pub fn vertex_connectivity(t: &Cotree) -> Result<usize, StatsError> {
    let canonical;
    let t = if t.is_canonical() {
        t
    } else {
        canonical = t.canonicalize();
        &canonical
    };
    let n = t.leaf_count();
    if n == 1 {
        return Ok(0);
    }
    if t.decoration(t.root()) != Some(Decoration::One) {
        return Err(StatsError::DisconnectedInput);
    }
    let largest = t.root_child_sizes().into_iter().max().unwrap_or(1);
    Ok(n - largest)
}

/// Real samples or counts keyed by an encoding.
#[derive(Clone, Debug, PartialEq)]
pub enum EmpiricalDistribution {
    /// Sorted values, each with mass `1/len`.
    Real(Vec<f64>),
    Keyed { counts: BTreeMap<String, u64>, total: u64 },
}

impl EmpiricalDistribution {
    pub fn from_reals(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        EmpiricalDistribution::Real(values)
    }

    pub fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        let total = counts.values().sum();
        EmpiricalDistribution::Keyed { counts, total }
    }

    pub fn total(&self) -> u64 {
        match self {
            EmpiricalDistribution::Real(v) => v.len() as u64,
            EmpiricalDistribution::Keyed { total, .. } => *total,
        }
    }

    pub fn mean(&self) -> Option<f64> {
        match self {
            EmpiricalDistribution::Real(v) if !v.is_empty() => Some(v.iter().sum::<f64>() / v.len() as f64),
            _ => None,
        }
    }

    /// Probabilities of a keyed law.
    pub fn probabilities(&self) -> BTreeMap<String, f64> {
        match self {
            EmpiricalDistribution::Keyed { counts, total } => {
                counts.iter().map(|(k, &c)| (k.clone(), c as f64 / *total as f64)).collect()
            }
            EmpiricalDistribution::Real(_) => BTreeMap::new(),
        }
    }

    pub fn probability(&self, key: &str) -> f64 {
        match self {
            EmpiricalDistribution::Keyed { counts, total } if *total > 0 => {
                counts.get(key).copied().unwrap_or(0) as f64 / *total as f64
            }
            _ => 0.0,
        }
    }

    /// Binomial standard error of [`Self::probability`].
    pub fn stderr(&self, key: &str) -> f64 {
        binomial_stderr(self.probability(key), self.total())
    }

    /// Union of two samples of the same kind.
    pub fn merge(self, other: Self) -> Self {
        match (self, other) {
            (EmpiricalDistribution::Real(mut a), EmpiricalDistribution::Real(b)) => {
                a.extend(b);
                Self::from_reals(a)
            }
            (EmpiricalDistribution::Keyed { mut counts, total }, EmpiricalDistribution::Keyed { counts: c2, total: t2 }) => {
                for (k, c) in c2 {
                    *counts.entry(k).or_insert(0) += c;
                }
                EmpiricalDistribution::Keyed { counts, total: total + t2 }
            }
            _ => panic!("cannot merge real and keyed distributions"),
        }
    }

    /// `key,count,probability,stderr` rows for keyed laws, `value` rows
    /// for real samples.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            EmpiricalDistribution::Real(v) => {
                out.push_str("value\n");
                for x in v {
                    writeln!(out, "{x}").unwrap();
                }
            }
            EmpiricalDistribution::Keyed { counts, .. } => {
                out.push_str("key,count,probability,stderr\n");
                for (k, &c) in counts {
                    let key = if k.contains(',') || k.contains('"') { format!("\"{}\"", k.replace('"', "\"\"")) } else { k.clone() };
                    writeln!(out, "{key},{c},{},{}", self.probability(k), self.stderr(k)).unwrap();
                }
            }
        }
        out
    }
}

pub fn binomial_stderr(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Rescaled degrees `deg(v)/n`, one point per vertex.
pub fn degree_distribution(t: &Cotree) -> EmpiricalDistribution {
    let n = t.leaf_count() as f64;
    EmpiricalDistribution::from_reals(t.degree_vector().into_iter().map(|d| d as f64 / n).collect())
}

/// Cotree induced by `k` distinct leaves drawn uniformly in order.
pub fn random_induced_cotree<R: Rng + ?Sized>(t: &Cotree, k: usize, rng: &mut R) -> Result<Cotree, StatsError> {
    let leaves: Vec<NodeId> = t.leaves().collect();
    if k == 0 || k > leaves.len() {
        return Err(StatsError::TooFewLeaves { k, n: leaves.len() });
    }
    let picks: Vec<NodeId> = sample_indices(rng, leaves.len(), k).into_iter().map(|i| leaves[i]).collect();
    Ok(t.induced_cotree(&picks).expect("distinct leaves"))
}

/// Law of the cotree induced by `k` uniform distinct leaves of a random
/// tree from `sampler`, keyed by labeled canonical encoding.
pub fn empirical_induced_distribution<F>(sampler: F, k: usize, trials: usize, seed: u64) -> EmpiricalDistribution
where
    F: Fn(&mut ChaCha8Rng) -> Cotree + Sync,
{
    let counts = fold_trials(
        trials,
        seed,
        BTreeMap::new,
        |acc: &mut BTreeMap<String, u64>, rng| {
            let t = sampler(rng);
            let induced = random_induced_cotree(&t, k, rng).expect("k within tree size");
            *acc.entry(induced.canonical_key()).or_insert(0) += 1;
        },
        |mut a, b| {
            for (key, c) in b {
                *a.entry(key).or_insert(0) += c;
            }
            a
        },
    );
    EmpiricalDistribution::from_counts(counts)
}

pub const EXACT_DENSITY_MAX_K: usize = 4;
pub const EXACT_DENSITY_MAX_N: usize = 2000;

/// Exact law of the isomorphism class of the graph induced by `k` i.i.d.
/// uniform vertices (repeated vertices give non-adjacent copies), keyed by
/// canonical form. Scans all `n^k` tuples.
pub fn subgraph_class_densities(g: &Cograph, k: usize) -> Result<BTreeMap<Vec<u8>, f64>, StatsError> {
    let n = g.n();
    if k > EXACT_DENSITY_MAX_K || n > EXACT_DENSITY_MAX_N {
        return Err(StatsError::TooLarge { k, n, max_k: EXACT_DENSITY_MAX_K, max_n: EXACT_DENSITY_MAX_N });
    }
    if n == 0 {
        return Err(StatsError::Empty);
    }
    // the class of a k-vertex graph depends only on its edge bits
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let mut by_bits: Vec<u64> = vec![0; 1 << pairs.len()];
    let mut tuple = vec![0usize; k];
    let total = (n as u64).pow(k as u32);
    for _ in 0..total {
        let mut bits = 0usize;
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if tuple[a] != tuple[b] && g.has_edge(tuple[a], tuple[b]) {
                bits |= 1 << i;
            }
        }
        by_bits[bits] += 1;
        // odometer increment
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    let mut out = BTreeMap::new();
    for (bits, &count) in by_bits.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let small = Cograph::from_fn(k, |a, b| {
            let i = pairs.iter().position(|&p| p == (a, b)).unwrap();
            bits >> i & 1 == 1
        });
        *out.entry(small.canonical_form_small()?).or_insert(0.0) += count as f64 / total as f64;
    }
    Ok(out)
}

/// How a subgraph density is computed.
#[derive(Clone, Copy, Debug)]
pub enum DensityMode {
    Exact,
    MonteCarlo { trials: usize, seed: u64 },
}

/// Density estimate with its standard error (zero in exact mode).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Probability that `k = |pattern|` i.i.d. uniform vertices of `g` induce
/// a graph isomorphic to `pattern`.
pub fn subgraph_density(pattern: &Cograph, g: &Cograph, mode: DensityMode) -> Result<Estimate, StatsError> {
    let k = pattern.n();
    let key = pattern.canonical_form_small()?;
    match mode {
        DensityMode::Exact => {
            let table = subgraph_class_densities(g, k)?;
            Ok(Estimate { value: table.get(&key).copied().unwrap_or(0.0), stderr: 0.0 })
        }
        DensityMode::MonteCarlo { trials, seed } => {
            if g.n() == 0 {
                return Err(StatsError::Empty);
            }
            let hits = fold_trials(
                trials,
                seed,
                || 0u64,
                |acc, rng| {
                    let tuple: Vec<usize> = (0..k).map(|_| rng.gen_range(0..g.n())).collect();
                    let sub = g.induced_subgraph(&tuple).expect("in range");
                    if sub.canonical_form_small().expect("small") == key {
                        *acc += 1;
                    }
                },
                |a, b| a + b,
            );
            let p = hits as f64 / trials as f64;
            Ok(Estimate { value: p, stderr: binomial_stderr(p, trials as u64) })
        }
    }
}

/// `∫_a^b |c − x| dx`.
fn abs_gap_integral(c: f64, a: f64, b: f64) -> f64 {
    let prim = |x: f64| {
        let d = x - c;
        0.5 * d * d.abs()
    };
    // antiderivative of |x − c| is (x − c)|x − c|/2
    prim(b) - prim(a)
}

/// Wasserstein-1 distance between the empirical law of the samples and
/// the uniform law on `[0, 1]`: `∫_0^1 |F(x) − x| dx`, integrated exactly
/// on each step of the empirical distribution function.
pub fn wasserstein1_vs_uniform(d: &EmpiricalDistribution) -> Result<f64, StatsError> {
    let EmpiricalDistribution::Real(v) = d else { return Err(StatsError::Empty) };
    if v.is_empty() {
        return Err(StatsError::Empty);
    }
    let m = v.len() as f64;
    let mut total = 0.0;
    let mut prev = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let x = x.clamp(0.0, 1.0);
        total += abs_gap_integral(i as f64 / m, prev, x);
        prev = x;
    }
    total += abs_gap_integral(1.0, prev, 1.0);
    Ok(total)
}

/// `½ Σ |p − q|` over the union of keys.
pub fn total_variation(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &p) in a {
        sum += (p - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &q) in b {
        if !a.contains_key(k) {
            sum += q;
        }
    }
    0.5 * sum
}

/// Key under which a value `j` is compared with a limit law on
/// `1..=jmax`: its decimal form, or `tail` beyond `jmax`.
pub fn law_key(j: usize, jmax: usize) -> String {
    if j >= 1 && j <= jmax {
        j.to_string()
    } else {
        "tail".to_string()
    }
}

impl LimitLaw {
    /// Masses keyed like [`law_key`], tail included.
    pub fn probability_map(&self) -> BTreeMap<String, f64> {
        let mut m: BTreeMap<String, f64> =
            self.probabilities.iter().enumerate().map(|(i, &p)| ((i + 1).to_string(), p)).collect();
        m.insert("tail".into(), self.tail);
        m
    }
}

/// Chi-square goodness-of-fit p-value of `observed` counts against
/// `expected` probabilities (which must sum to 1).
pub fn chi_square_p_value(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    let total: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    1.0 - ChiSquared::new((observed.len() - 1) as f64).unwrap().cdf(stat)
}

/// Chi-square p-value against equal masses on `cells` outcomes, where
/// outcomes missing from `counts` were never observed.
pub fn chi_square_uniform_p_value(counts: &[u64], cells: usize) -> f64 {
    assert!(counts.len() <= cells);
    let mut all = counts.to_vec();
    all.resize(cells, 0);
    chi_square_p_value(&all, &vec![1.0 / cells as f64; cells])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::SeedableRng;

    fn t(s: &str) -> Cotree {
        s.parse().unwrap()
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(vertex_connectivity(&Cotree::star(Decoration::One, 6)).unwrap(), 5);
        assert_eq!(vertex_connectivity(&t("(1 1 (0 2 3))")).unwrap(), 1);
        assert_eq!(vertex_connectivity(&t("1")).unwrap(), 0);
        assert_eq!(vertex_connectivity(&t("(0 1 2)")), Err(StatsError::DisconnectedInput));
        // children of sizes 2, 2, 1 and a largest one of size 4
        let fig = t("(1 (0 1 2) (0 3 4) 5 (0 6 7 (1 8 9)))");
        assert_eq!(vertex_connectivity(&fig).unwrap(), 5);
    }

    #[test]
    fn connectivity_matches_brute_force() {
        for n in 1..=6 {
            for tr in oracle::labeled_canonical_cotrees(n) {
                let g = tr.cograph();
                if g.is_connected() {
                    assert_eq!(vertex_connectivity(&tr).unwrap(), oracle::vertex_connectivity_brute(&g));
                }
            }
        }
    }

    #[test]
    fn degree_distribution_examples() {
        let d = degree_distribution(&Cotree::star(Decoration::One, 4));
        assert_eq!(d, EmpiricalDistribution::Real(vec![0.75; 4]));
        let d = degree_distribution(&t("(1 1 (0 2 3))"));
        assert_eq!(d, EmpiricalDistribution::Real(vec![1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0]));
        let tr = t("(1 (0 1 2 3) (1 4 5))");
        let g = tr.cograph();
        let mean = degree_distribution(&tr).mean().unwrap();
        assert!((mean - 2.0 * g.edge_count() as f64 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn wasserstein_examples() {
        let point = EmpiricalDistribution::from_reals(vec![0.0]);
        assert!((wasserstein1_vs_uniform(&point).unwrap() - 0.5).abs() < 1e-12);
        for m in [1usize, 4, 10] {
            let v = (1..=m).map(|i| (2 * i - 1) as f64 / (2 * m) as f64).collect();
            let w = wasserstein1_vs_uniform(&EmpiricalDistribution::from_reals(v)).unwrap();
            assert!((w - 1.0 / (4 * m) as f64).abs() < 1e-12);
        }
        assert_eq!(wasserstein1_vs_uniform(&EmpiricalDistribution::Real(vec![])), Err(StatsError::Empty));
    }

    #[test]
    fn wasserstein_of_uniform_draws_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v: Vec<f64> = (0..10_000).map(|_| rng.gen()).collect();
        let w = wasserstein1_vs_uniform(&EmpiricalDistribution::from_reals(v)).unwrap();
        assert!(w < 0.02, "{w}");
    }

    #[test]
    fn total_variation_examples() {
        let a: BTreeMap<String, f64> = [("x".to_string(), 0.5), ("y".to_string(), 0.5)].into();
        let b: BTreeMap<String, f64> = [("z".to_string(), 1.0)].into();
        assert_eq!(total_variation(&a, &a), 0.0);
        assert_eq!(total_variation(&a, &b), 1.0);
    }

    #[test]
    fn exact_densities() {
        let k2 = Cograph::complete(2);
        let kn = Cograph::complete(7);
        let d = subgraph_density(&k2, &kn, DensityMode::Exact).unwrap();
        assert!((d.value - 6.0 / 7.0).abs() < 1e-12);
        let d = subgraph_density(&k2, &Cograph::path(3), DensityMode::Exact).unwrap();
        assert!((d.value - 4.0 / 9.0).abs() < 1e-12);
        let table = subgraph_class_densities(&Cograph::path(5), 3).unwrap();
        assert!((table.values().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(subgraph_class_densities(&Cograph::path(5), 5).is_err());
    }

    #[test]
    fn monte_carlo_density_agrees() {
        let g = t("(1 (0 1 2 3) (0 4 (1 5 6)) 7)").cograph();
        let p3 = Cograph::path(3);
        let exact = subgraph_density(&p3, &g, DensityMode::Exact).unwrap().value;
        let mc = subgraph_density(&p3, &g, DensityMode::MonteCarlo { trials: 40_000, seed: 1 }).unwrap();
        assert!((mc.value - exact).abs() < 4.0 * mc.stderr, "{} vs {exact}", mc.value);
    }

    #[test]
    fn induced_law_on_small_trees_matches_enumeration() {
        // uniform tree of size 4 from the oracle list, then 2 marked leaves
        let all = oracle::labeled_canonical_cotrees(4);
        let d = empirical_induced_distribution(|r| all[r.gen_range(0..all.len())].clone(), 2, 40_000, 3);
        assert_eq!(d.total(), 40_000);
        let probs = d.probabilities();
        assert!((probs.values().sum::<f64>() - 1.0).abs() < 1e-12);
        // exact: count (tree, ordered pair) with fca decorated 1
        let one = oracle::count_marked_inducing(&t("(1 1 2)"), 4) as f64 / (all.len() * 12) as f64;
        let key = t("(1 1 2)").canonical_key();
        assert!((d.probability(&key) - one).abs() < 4.0 * d.stderr(&key));
    }

    #[test]
    fn csv_output() {
        let d = EmpiricalDistribution::from_counts([("(1 1 2)".to_string(), 3), ("a,b".to_string(), 1)].into());
        let csv = d.to_csv();
        assert!(csv.starts_with("key,count,probability,stderr\n"));
        assert!(csv.contains("\"a,b\",1,0.25,"));
    }

    #[test]
    fn chi_square_sanity() {
        assert!(chi_square_uniform_p_value(&[100, 100, 100], 3) > 0.99);
        assert!(chi_square_uniform_p_value(&[300], 3) < 1e-10);
    }
}

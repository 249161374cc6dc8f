//! Named verification suites. Each suite returns one result per metric,
//! including its own wall-clock time against a budget.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cotree::{Cotree, Decoration};
use crate::enumeration::{
    labeled_cograph_counts, labeled_counts, pi_distribution, pi_u_distribution, rho_labeled, rho_unlabeled,
    series_d, series_l, series_m, series_marked_labeled, series_mt0, series_u, series_u_marked, series_v,
    series_vt0, unlabeled_cograph_counts, unlabeled_counts, LimitLaw,
};
use crate::montecarlo::{fold_trials, map_trials};
use crate::oracle;
use crate::render::{parse_pgm, render_pgm, BLACK, WHITE};
use crate::sampling::{
    enumerate_plane_binary_trees, sample_binary_decorated, BoltzmannSampler, LabeledSampler, LabeledWeights,
    UnlabeledSampler, UnlabeledWeights,
};
use crate::series::TruncatedSeries;
use crate::stats::{
    chi_square_p_value, chi_square_uniform_p_value, law_key, random_induced_cotree, total_variation,
    vertex_connectivity, wasserstein1_vs_uniform, EmpiricalDistribution,
};

/// Suite names in run order.
pub const SUITES: [&str; 12] = [
    "exact-counts",
    "series-identities",
    "marked-series",
    "radii",
    "uniformity-small-n",
    "binary-degree-law",
    "degree-limit",
    "induced-subtrees",
    "connectivity-law",
    "connectivity-probability",
    "connectivity-oracle",
    "render",
];

#[derive(Debug, Error, PartialEq)]
pub enum CheckError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
}

/// Sizes, trial counts and tolerances of every suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckSettings {
    pub seed: u64,
    pub series_order: usize,
    pub marked_max_n: usize,
    pub rho_order: usize,
    pub rho_u_target: f64,
    pub rho_u_tolerance: f64,
    pub uniformity_draws: usize,
    pub significance: f64,
    pub degree_leaves: usize,
    pub degree_draws: usize,
    pub w1_n: usize,
    pub w1_samples: usize,
    pub w1_tolerance: f64,
    pub induced_n: usize,
    pub induced_trials: usize,
    pub induced_bucket_tolerance: f64,
    pub induced_nonbinary_tolerance: f64,
    pub kappa_n: usize,
    pub kappa_trials: usize,
    pub kappa_jmax: usize,
    pub kappa_tv_tolerance: f64,
    pub kappa_partial_sum_min: f64,
    pub root_n: usize,
    pub root_draws: usize,
    pub root_sigmas: f64,
    pub oracle_max_n: usize,
    pub render_n: usize,
    pub render_epsilon: f64,
    /// Multiplies every wall-clock budget.
    pub time_factor: f64,
}

impl Default for CheckSettings {
    fn default() -> Self {
        CheckSettings {
            seed: 20_240_601,
            series_order: 200,
            marked_max_n: 6,
            rho_order: 400,
            rho_u_target: 0.2808,
            rho_u_tolerance: 1e-3,
            uniformity_draws: 1_000_000,
            significance: 1e-3,
            degree_leaves: 200,
            degree_draws: 1_000_000,
            w1_n: 10_000,
            w1_samples: 1000,
            w1_tolerance: 0.05,
            induced_n: 2000,
            induced_trials: 100_000,
            induced_bucket_tolerance: 0.01,
            induced_nonbinary_tolerance: 0.05,
            kappa_n: 2000,
            kappa_trials: 100_000,
            kappa_jmax: 60,
            kappa_tv_tolerance: 0.02,
            kappa_partial_sum_min: 0.99,
            root_n: 10,
            root_draws: 1_000_000,
            root_sigmas: 4.0,
            oracle_max_n: 7,
            render_n: 4482,
            render_epsilon: 0.1,
            time_factor: 1.0,
        }
    }
}

impl CheckSettings {
    /// Every Monte Carlo count divided by `divisor` (at least one trial),
    /// with tolerances unchanged. Time budgets are not rescaled.
    pub fn scaled_down(&self, divisor: usize) -> Self {
        let d = |x: usize| (x / divisor.max(1)).max(1);
        CheckSettings {
            uniformity_draws: d(self.uniformity_draws),
            degree_draws: d(self.degree_draws),
            w1_samples: d(self.w1_samples),
            induced_trials: d(self.induced_trials),
            kappa_trials: d(self.kappa_trials),
            root_draws: d(self.root_draws),
            ..self.clone()
        }
    }

    /// Replaces the named tolerance fields.
    pub fn apply_tolerances(&mut self, overrides: &BTreeMap<String, f64>) -> Result<(), CheckError> {
        for (name, &v) in overrides {
            let slot = match name.as_str() {
                "rho_u_tolerance" => &mut self.rho_u_tolerance,
                "significance" => &mut self.significance,
                "w1_tolerance" => &mut self.w1_tolerance,
                "induced_bucket_tolerance" => &mut self.induced_bucket_tolerance,
                "induced_nonbinary_tolerance" => &mut self.induced_nonbinary_tolerance,
                "kappa_tv_tolerance" => &mut self.kappa_tv_tolerance,
                "kappa_partial_sum_min" => &mut self.kappa_partial_sum_min,
                "root_sigmas" => &mut self.root_sigmas,
                "time_factor" => &mut self.time_factor,
                _ => return Err(CheckError::UnknownTolerance(name.clone())),
            };
            *slot = v;
        }
        Ok(())
    }
}

/// Whether a metric must stay below, above or equal to its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    AtMost,
    AtLeast,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub config: Value,
    pub metric: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl CheckResult {
    fn new(suite: &str, config: Value, metric: impl Into<String>, value: f64, tolerance: f64, bound: Bound) -> Self {
        let pass = match bound {
            Bound::AtMost => value <= tolerance,
            Bound::AtLeast => value >= tolerance,
            Bound::Equal => value == tolerance,
        };
        CheckResult { suite: suite.into(), config, metric: metric.into(), value, tolerance, bound, pass }
    }

    /// `PASS`/`FAIL` line for terminal output.
    pub fn line(&self) -> String {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
            Bound::Equal => "==",
        };
        format!(
            "{} {} {}: {} {op} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.metric,
            self.value,
            self.tolerance
        )
    }
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

/// Runs one suite by name.
pub fn run_suite(name: &str, s: &CheckSettings) -> Result<Vec<CheckResult>, CheckError> {
    let start = Instant::now();
    let (mut out, budget) = match name {
        "exact-counts" => (exact_counts(s), 1.0),
        "series-identities" => (series_identities(s), 10.0),
        "marked-series" => (marked_series(s), 120.0),
        "radii" => (radii(s), 30.0),
        "uniformity-small-n" => (uniformity_small_n(s), 300.0),
        "binary-degree-law" => (binary_degree_law(s), 300.0),
        "degree-limit" => (degree_limit(s), 600.0),
        "induced-subtrees" => (induced_subtrees(s), 600.0),
        "connectivity-law" => (connectivity_law(s), 900.0),
        "connectivity-probability" => (connectivity_probability(s), 60.0),
        "connectivity-oracle" => (connectivity_oracle(s), 120.0),
        "render" => (render(s), 60.0),
        _ => return Err(CheckError::UnknownSuite(name.to_string())),
    };
    let elapsed = start.elapsed().as_secs_f64();
    out.push(CheckResult::new(name, json!({}), "runtime_seconds", elapsed, budget * s.time_factor, Bound::AtMost));
    Ok(out)
}

/// Runs `names`, or every suite when `names` is empty.
pub fn run_suites(names: &[String], s: &CheckSettings) -> Result<Vec<CheckResult>, CheckError> {
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
        return Err(CheckError::UnknownSuite(bad.clone()));
    }
    let chosen: Vec<&str> = if names.is_empty() { SUITES.to_vec() } else { names.iter().map(String::as_str).collect() };
    let mut out = Vec::new();
    for name in chosen {
        out.extend(run_suite(name, s)?);
    }
    Ok(out)
}

fn mismatches<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    (a.len().abs_diff(b.len()) + a.iter().zip(b).filter(|(x, y)| x != y).count()) as f64
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn exact_counts(_: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "exact-counts";
    let l = labeled_counts(6);
    let m = labeled_cograph_counts(4);
    let v = unlabeled_cograph_counts(4);
    let u = unlabeled_counts(7);
    let brute: Vec<BigInt> = (1..=7).map(|n| BigInt::from(oracle::unlabeled_tree_count(n))).collect();
    vec![
        CheckResult::new(S, json!({"n": "1..=6"}), "labeled_tree_mismatches", mismatches(&l[1..], &ints(&[1, 1, 4, 26, 236, 2752])), 0.0, Bound::Equal),
        CheckResult::new(S, json!({"n": 4}), "labeled_cographs", m[4].to_f64().unwrap_or(f64::NAN), 52.0, Bound::Equal),
        CheckResult::new(S, json!({"n": 4}), "unlabeled_cographs", v[4].to_f64().unwrap_or(f64::NAN), 10.0, Bound::Equal),
        CheckResult::new(S, json!({"n": "1..=7"}), "unlabeled_vs_brute_force_mismatches", mismatches(&u[1..], &brute), 0.0, Bound::Equal),
    ]
}

fn series_identities(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "series-identities";
    let n = s.series_order;
    let one = TruncatedSeries::one(n);
    let z = TruncatedSeries::z(n);
    let two = |a: &TruncatedSeries| a.scale(&num_rational::BigRational::from_integer(2.into()));
    let mut failed = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failed.push(name.to_string());
        }
    };

    let l = series_l(n);
    let el = l.exp();
    let elm1 = &el - &one;
    check("L = z + exp(L) - 1 - L", l == &(&z + &elm1) - &l);
    check("M = 2L - z = exp(L) - 1", series_m(n) == elm1 && elm1 == &two(&l) - &z);
    let ml = series_marked_labeled(n);
    check("L' from the closed form", ml.derivative.truncate(n - 1) == l.derivative().truncate(n - 1));
    check("L^even = 1 + (e^L - 1) L^odd", ml.even == &one + &(&elm1 * &ml.odd));
    check("L^odd = (e^L - 1) L^even", ml.odd == &elm1 * &ml.even);
    check("L' = L^even + L^odd", ml.derivative == &ml.even + &ml.odd);
    check("L' (2 - e^L) = 1", &ml.derivative * &(&two(&one) - &el) == one);

    let u = series_u(n);
    let d = series_d(n);
    let eu = u.exp();
    let mut polya = TruncatedSeries::zero(n);
    for r in 2..=n {
        polya = &polya + &u.compose_power(r).scale(&num_rational::BigRational::new(1.into(), (r as i64).into()));
    }
    check("D = exp(sum_{r>=2} U(z^r)/r) - 1", d == &polya.exp() - &one);
    check("2U = z + exp(U)(1 + D) - 1", two(&u) == &(&z + &(&eu * &(&one + &d))) - &one);
    check("V = 2U - z", series_v(n) == &two(&u) - &z);
    let mu = series_u_marked(n);
    let q = &(&eu - &one) + &(&d * &eu);
    check("Q = 2U - z", q == &two(&u) - &z);
    check("U* = 1 + U* Q", mu.star == &one + &(&mu.star * &q));
    check("U^even = 1 + U^odd Q", mu.even == &one + &(&mu.odd * &q));
    check("U^odd = U^even Q", mu.odd == &mu.even * &q);
    check("U* = U^even + U^odd", mu.star == &mu.even + &mu.odd);
    vec![CheckResult::new(S, json!({"order": n, "failed": failed}), "failed_identities", failed.len() as f64, 0.0, Bound::Equal)]
}

fn marked_series(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "marked-series";
    let mut out = Vec::new();
    for src in ["(0 1 2)", "(1 1 2)"] {
        let t0: Cotree = src.parse().expect("valid tree");
        let m = series_mt0(&t0, s.marked_max_n).expect("order covers t0");
        let v = series_vt0(&t0, s.marked_max_n).expect("order covers t0");
        let (mut bad_m, mut bad_v) = (0, 0);
        for n in 2..=s.marked_max_n {
            if m.egf_count(n) != BigInt::from(oracle::count_marked_inducing(&t0, n)) {
                bad_m += 1;
            }
            if v.egf_count(n) != BigInt::from(oracle::count_marked_inducing_with_automorphism(&t0, n)) {
                bad_v += 1;
            }
        }
        let config = json!({"t0": src, "n": format!("2..={}", s.marked_max_n)});
        out.push(CheckResult::new(S, config.clone(), "labeled_mismatches", bad_m as f64, 0.0, Bound::Equal));
        out.push(CheckResult::new(S, config, "unlabeled_mismatches", bad_v as f64, 0.0, Bound::Equal));
    }
    out
}

fn radii(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "radii";
    let exact = 2.0 * std::f64::consts::LN_2 - 1.0;
    let rho_u = rho_unlabeled(s.rho_order, 1e-12).unwrap_or(f64::NAN);
    vec![
        CheckResult::new(S, json!({}), "rho_minus_2ln2_plus_1", (rho_labeled() - exact).abs(), 0.0, Bound::Equal),
        CheckResult::new(
            S,
            json!({"order": s.rho_order, "rho_u": rho_u, "target": s.rho_u_target}),
            "rho_u_error",
            (rho_u - s.rho_u_target).abs(),
            s.rho_u_tolerance,
            Bound::AtMost,
        ),
    ]
}

fn tally<F>(draws: usize, seed: u64, f: F) -> BTreeMap<String, u64>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> String + Sync,
{
    fold_trials(
        draws,
        seed,
        BTreeMap::new,
        |acc: &mut BTreeMap<String, u64>, rng| *acc.entry(f(rng)).or_insert(0) += 1,
        |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        },
    )
}

/// Chi-square p-value against uniformity on `support`; any outcome outside
/// it forces a p-value of zero.
fn uniform_over(counts: &BTreeMap<String, u64>, support: &[String]) -> f64 {
    if counts.keys().any(|k| !support.contains(k)) {
        return 0.0;
    }
    let c: Vec<u64> = counts.values().copied().collect();
    chi_square_uniform_p_value(&c, support.len())
}

fn uniformity_small_n(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "uniformity-small-n";
    let draws = s.uniformity_draws;
    let labeled: Vec<String> = oracle::labeled_canonical_cotrees(4).iter().map(Cotree::canonical_key).collect();
    let unlabeled: Vec<String> = oracle::unlabeled_canonical_cotrees(4).iter().map(Cotree::unlabeled_key).collect();
    let mut out = Vec::new();
    let mut push = |name: &str, cells: usize, p: f64| {
        out.push(CheckResult::new(S, json!({"draws": draws, "outcomes": cells}), format!("{name}_p_value"), p, s.significance, Bound::AtLeast));
    };

    let exact = LabeledSampler::with_weights(LabeledWeights::exact(4));
    let float = LabeledSampler::with_weights(LabeledWeights::float(4));
    push("labeled_exact", labeled.len(), uniform_over(&tally(draws, s.seed, |r| exact.sample(4, false, r).canonical_key()), &labeled));
    push("labeled_float", labeled.len(), uniform_over(&tally(draws, s.seed + 1, |r| float.sample(4, false, r).canonical_key()), &labeled));

    let exact = UnlabeledSampler::with_weights(UnlabeledWeights::exact(4));
    let float = UnlabeledSampler::with_weights(UnlabeledWeights::float(4));
    push("unlabeled_exact", unlabeled.len(), uniform_over(&tally(draws, s.seed + 2, |r| exact.sample(4, false, r).unlabeled_key()), &unlabeled));
    push("unlabeled_float", unlabeled.len(), uniform_over(&tally(draws, s.seed + 3, |r| float.sample(4, false, r).unlabeled_key()), &unlabeled));

    let b = BoltzmannSampler::at_criticality();
    let counts = tally(draws, s.seed + 4, |r| b.sample_in_window(4, 0.1, u64::MAX, r).expect("no attempt cap").canonical_key());
    push("boltzmann", labeled.len(), uniform_over(&counts, &labeled));

    // plane decorated binary trees, and the non-plane cotrees they map to
    for k in [3usize, 4] {
        let plane: Vec<String> = enumerate_plane_binary_trees(k).iter().map(|t| t.plane_key()).collect();
        push(&format!("binary_plane_k{k}"), plane.len(), uniform_over(&tally(draws, s.seed + 4 + k as u64, |r| sample_binary_decorated(k, 0.5, r).plane_key()), &plane));
        let mut cotrees: Vec<String> = enumerate_plane_binary_trees(k).iter().map(|t| t.to_cotree().canonical_key()).collect();
        cotrees.sort();
        cotrees.dedup();
        let counts = tally(draws, s.seed + 10 + k as u64, |r| sample_binary_decorated(k, 0.5, r).to_cotree().canonical_key());
        push(&format!("binary_cotree_k{k}"), cotrees.len(), uniform_over(&counts, &cotrees));
    }
    out
}

fn binary_degree_law(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "binary-degree-law";
    // exhaustive: the degree of each fixed leaf over all 48 trees
    let trees = enumerate_plane_binary_trees(3);
    let mut off = 0usize;
    for label in 1..=3u32 {
        let mut hist = [0usize; 3];
        for t in &trees {
            let c = t.to_cotree();
            let leaf = c.leaves().find(|&l| c.label(l) == Some(label)).expect("leaf present");
            hist[c.leaf_degree(leaf)] += 1;
        }
        off += hist.iter().map(|&h| h.abs_diff(trees.len() / 3)).sum::<usize>();
    }
    let k = s.degree_leaves;
    let degrees = tally(s.degree_draws, s.seed + 20, |r| {
        let t = sample_binary_decorated(k, 0.5, r).to_cotree();
        let leaf = t.leaves().nth(r.gen_range(0..k)).expect("k leaves");
        t.leaf_degree(leaf).to_string()
    });
    let counts: Vec<u64> = (0..k).map(|d| degrees.get(&d.to_string()).copied().unwrap_or(0)).collect();
    let p = chi_square_p_value(&counts, &vec![1.0 / k as f64; k]);
    vec![
        CheckResult::new(S, json!({"k": 3, "trees": trees.len()}), "exhaustive_deviation_from_uniform", off as f64, 0.0, Bound::Equal),
        CheckResult::new(S, json!({"k": k, "draws": s.degree_draws}), "degree_chi_square_p_value", p, s.significance, Bound::AtLeast),
    ]
}

fn degree_limit(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "degree-limit";
    let n = s.w1_n;
    let labeled = LabeledSampler::new(n);
    let unlabeled = UnlabeledSampler::new(n);
    let one_vertex = |t: Cotree, r: &mut rand_chacha::ChaCha8Rng| {
        let deg = t.degree_vector();
        deg[r.gen_range(0..deg.len())] as f64 / n as f64
    };
    let l = map_trials(s.w1_samples, s.seed + 30, |r| one_vertex(labeled.sample(n, false, r), r));
    let u = map_trials(s.w1_samples, s.seed + 31, |r| one_vertex(unlabeled.sample(n, false, r), r));
    let config = json!({"n": n, "samples": s.w1_samples});
    [("labeled", l), ("unlabeled", u)]
        .into_iter()
        .map(|(name, v)| {
            let w = wasserstein1_vs_uniform(&EmpiricalDistribution::from_reals(v)).unwrap_or(f64::NAN);
            CheckResult::new(S, config.clone(), format!("{name}_w1_to_uniform"), w, s.w1_tolerance, Bound::AtMost)
        })
        .collect()
}

/// Keys of the twelve binary cotrees on leaves 1, 2, 3 with arbitrary
/// decorations.
fn binary_three_leaf_keys() -> Vec<String> {
    let mut keys = Vec::new();
    for (a, b, c) in [(1, 2, 3), (1, 3, 2), (2, 3, 1)] {
        for top in 0..2 {
            for low in 0..2 {
                let t: Cotree = format!("({top} ({low} {a} {b}) {c})").parse().expect("valid tree");
                keys.push(t.canonical_key());
            }
        }
    }
    keys
}

fn induced_subtrees(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "induced-subtrees";
    let n = s.induced_n;
    let binary = binary_three_leaf_keys();
    let labeled = LabeledSampler::new(n);
    let unlabeled = UnlabeledSampler::new(n);
    let mut out = Vec::new();
    for (class, seed) in [("labeled", s.seed + 40), ("unlabeled", s.seed + 41)] {
        let counts = tally(s.induced_trials, seed, |r| {
            let t = if class == "labeled" { labeled.sample(n, false, r) } else { unlabeled.sample(n, false, r) };
            random_induced_cotree(&t, 3, r).expect("n ≥ 3").canonical_key()
        });
        let d = EmpiricalDistribution::from_counts(counts);
        let worst = binary.iter().map(|k| (d.probability(k) - 1.0 / 12.0).abs()).fold(0.0, f64::max);
        let nonbinary = 1.0 - binary.iter().map(|k| d.probability(k)).sum::<f64>();
        let config = json!({"class": class, "n": n, "k": 3, "trials": s.induced_trials});
        out.push(CheckResult::new(S, config.clone(), format!("{class}_max_bucket_deviation"), worst, s.induced_bucket_tolerance, Bound::AtMost));
        out.push(CheckResult::new(S, config, format!("{class}_nonbinary_mass"), nonbinary, s.induced_nonbinary_tolerance, Bound::AtMost));
    }
    out
}

fn kappa_law(counts: &BTreeMap<String, u64>, law: &LimitLaw) -> f64 {
    let d = EmpiricalDistribution::from_counts(counts.clone());
    total_variation(&d.probabilities(), &law.probability_map())
}

fn connectivity_law(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "connectivity-law";
    let n = s.kappa_n;
    let jmax = s.kappa_jmax;
    let labeled = LabeledSampler::new(n);
    let unlabeled = UnlabeledSampler::new(n);
    let kappa = |t: Cotree| law_key(vertex_connectivity(&t).expect("connected by construction"), jmax);
    let lc = tally(s.kappa_trials, s.seed + 50, |r| kappa(labeled.sample(n, true, r)));
    let uc = tally(s.kappa_trials, s.seed + 51, |r| kappa(unlabeled.sample(n, true, r)));
    let pi = pi_distribution(jmax);
    let pi_u = pi_u_distribution(jmax);
    let config = json!({"n": n, "trials": s.kappa_trials, "jmax": jmax});
    vec![
        CheckResult::new(S, config.clone(), "labeled_tv_to_limit", kappa_law(&lc, &pi), s.kappa_tv_tolerance, Bound::AtMost),
        CheckResult::new(S, config.clone(), "unlabeled_tv_to_limit", kappa_law(&uc, &pi_u), s.kappa_tv_tolerance, Bound::AtMost),
        CheckResult::new(S, json!({"jmax": jmax}), "labeled_limit_partial_sum", pi.partial_sum(), s.kappa_partial_sum_min, Bound::AtLeast),
        CheckResult::new(S, json!({"jmax": jmax}), "unlabeled_limit_partial_sum", pi_u.partial_sum(), s.kappa_partial_sum_min, Bound::AtLeast),
    ]
}

fn connectivity_probability(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "connectivity-probability";
    let n = s.root_n;
    let labeled = LabeledSampler::new(n);
    let unlabeled = UnlabeledSampler::new(n);
    let one = |t: &Cotree| u64::from(t.decoration(t.root()) == Some(Decoration::One));
    let lc = fold_trials(s.root_draws, s.seed + 60, || 0u64, |a, r| *a += one(&labeled.sample(n, false, r)), |a, b| a + b);
    let uc = fold_trials(s.root_draws, s.seed + 61, || 0u64, |a, r| *a += one(&unlabeled.sample(n, false, r)), |a, b| a + b);
    let sigma = (0.25 / s.root_draws as f64).sqrt();
    [("labeled", lc), ("unlabeled", uc)]
        .into_iter()
        .map(|(class, c)| {
            let p = c as f64 / s.root_draws as f64;
            let config = json!({"n": n, "draws": s.root_draws, "frequency": p});
            CheckResult::new(S, config, format!("{class}_sigmas_from_half"), (p - 0.5).abs() / sigma, s.root_sigmas, Bound::AtMost)
        })
        .collect()
}

fn connectivity_oracle(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "connectivity-oracle";
    let mut checked = 0usize;
    let mut bad = 0usize;
    for n in 1..=s.oracle_max_n {
        for t in oracle::labeled_canonical_cotrees(n) {
            if t.decoration(t.root()) == Some(Decoration::Zero) {
                continue;
            }
            checked += 1;
            if vertex_connectivity(&t).ok() != Some(oracle::vertex_connectivity_brute(&t.cograph())) {
                bad += 1;
            }
        }
    }
    vec![CheckResult::new(S, json!({"max_n": s.oracle_max_n, "graphs": checked}), "mismatches", bad as f64, 0.0, Bound::Equal)]
}

fn render(s: &CheckSettings) -> Vec<CheckResult> {
    const S: &str = "render";
    let mut rng = crate::montecarlo::stream_rng(s.seed + 70, 0);
    let b = BoltzmannSampler::at_criticality();
    let t = b.sample_in_window(s.render_n, s.render_epsilon, u64::MAX, &mut rng).expect("no attempt cap");
    let n = t.leaf_count();
    let lo = (s.render_n as f64 * (1.0 - s.render_epsilon)).ceil() as usize;
    let hi = (s.render_n as f64 * (1.0 + s.render_epsilon)).floor() as usize;
    let defects = match render_pgm(&t).map(|bytes| parse_pgm(&bytes)) {
        Ok(Ok(img)) => {
            let black = img.pixels.iter().filter(|&&p| p == BLACK).count();
            let mut d = 0;
            d += usize::from(img.width != n || img.height != n);
            d += usize::from(!img.is_symmetric());
            d += usize::from((0..n.min(img.width)).any(|i| img.pixel(i, i) != WHITE));
            d += usize::from(black != 2 * t.cograph().edge_count());
            d += usize::from(img.pixels.iter().any(|&p| p != BLACK && p != WHITE));
            d
        }
        _ => 1,
    };
    let config = json!({"target": s.render_n, "size": n, "epsilon": s.render_epsilon});
    vec![
        CheckResult::new(S, config.clone(), "size_outside_window", usize::from(!(lo..=hi).contains(&n)) as f64, 0.0, Bound::Equal),
        CheckResult::new(S, config, "image_defects", defects as f64, 0.0, Bound::Equal),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> CheckSettings {
        CheckSettings {
            w1_n: 500,
            w1_samples: 400,
            induced_n: 300,
            kappa_n: 300,
            render_n: 300,
            degree_leaves: 50,
            time_factor: 100.0,
            ..CheckSettings::default().scaled_down(100)
        }
    }

    #[test]
    fn exact_suites_pass() {
        let s = CheckSettings { series_order: 40, marked_max_n: 5, oracle_max_n: 6, time_factor: 100.0, ..Default::default() };
        for name in ["exact-counts", "series-identities", "marked-series", "connectivity-oracle"] {
            let r = run_suite(name, &s).unwrap();
            assert!(all_pass(&r), "{r:?}");
        }
    }

    #[test]
    fn statistical_suites_at_reduced_scale() {
        let s = quick();
        for name in ["uniformity-small-n", "binary-degree-law", "connectivity-probability", "render"] {
            let r = run_suite(name, &s).unwrap();
            assert!(all_pass(&r), "{r:?}");
        }
        // a few hundred samples only bound the distance loosely
        let r = run_suite("degree-limit", &s).unwrap();
        assert!(r.iter().filter(|r| r.metric.ends_with("w1_to_uniform")).all(|r| r.value < 0.15), "{r:?}");
    }

    #[test]
    fn twelve_binary_buckets() {
        let keys = binary_three_leaf_keys();
        let mut dedup = keys.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 12);
    }

    #[test]
    fn unknown_names() {
        assert_eq!(run_suites(&["nope".into()], &quick()).unwrap_err(), CheckError::UnknownSuite("nope".into()));
        let mut s = quick();
        assert!(s.apply_tolerances(&[("w1_tolerance".to_string(), 0.1)].into()).is_ok());
        assert_eq!(s.w1_tolerance, 0.1);
        assert!(s.apply_tolerances(&[("bogus".to_string(), 0.1)].into()).is_err());
    }

    #[test]
    fn settings_round_trip() {
        let s = CheckSettings::default();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<CheckSettings>(&json).unwrap(), s);
        let partial: CheckSettings = serde_json::from_str(r#"{"seed": 5}"#).unwrap();
        assert_eq!(partial.seed, 5);
        assert_eq!(partial.series_order, 200);
    }
}

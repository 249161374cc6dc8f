use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::Rng;

use super::{boustrophedon_pick, random_labels, root_decoration, RawTree, EXACT_LIMIT};
use crate::cotree::Cotree;
use crate::enumeration::{labeled_counts, rho_labeled};

/// Weights of the recursive method for labeled trees with no unary node.
///
/// A tree of size `m ≥ 2` is a set of at least two subtrees. Its subtrees
/// are drawn one at a time, each time the one holding the smallest label
/// not yet placed: with `r` labels left, that subtree has size `s` with
/// weight `C(r−1, s−1)·ℓ_s·f(r − s)`, where `f` counts sets of at least
/// one tree (`f(r) = m_r`) for the first draw at a node and sets of any
/// number of trees (`f(0) = 1`) afterwards.
#[derive(Clone, Debug)]
pub enum LabeledWeights {
    Exact {
        /// `ℓ_s`.
        trees: Vec<BigUint>,
        /// Sets of trees on `r` labels: `m_r`, with 1 at `r = 0`.
        forests: Vec<BigUint>,
    },
    /// The same quantities divided by `s!` and times `ρ^s`.
    Float { trees: Vec<f64>, forests: Vec<f64> },
}

impl LabeledWeights {
    pub fn exact(max_n: usize) -> Self {
        let l: Vec<BigUint> = labeled_counts(max_n.max(1)).into_iter().map(|x| x.to_biguint().unwrap()).collect();
        let mut forests: Vec<BigUint> =
            l.iter().enumerate().map(|(n, x)| if n >= 2 { x * 2u32 } else { x.clone() }).collect();
        forests[0] = BigUint::one();
        LabeledWeights::Exact { trees: l, forests }
    }

    pub fn float(max_n: usize) -> Self {
        let n = max_n.max(1);
        let rho = rho_labeled();
        let mut a = vec![0.0; n + 1];
        let mut e = vec![0.0; n + 1];
        e[0] = 1.0;
        for m in 1..=n {
            let s: f64 = (1..m).map(|k| k as f64 * a[k] * e[m - k]).sum::<f64>() / m as f64;
            a[m] = if m == 1 { rho } else { s };
            e[m] = s + a[m];
        }
        LabeledWeights::Float { trees: a, forests: e }
    }

    pub fn max_n(&self) -> usize {
        match self {
            LabeledWeights::Exact { trees, .. } => trees.len() - 1,
            LabeledWeights::Float { trees, .. } => trees.len() - 1,
        }
    }

    /// Size of the next subtree when `r` labels are left; `first` marks the
    /// first subtree at a node, which must leave at least one label over.
    fn draw<R: Rng + ?Sized>(&self, r: usize, first: bool, rng: &mut R) -> usize {
        let hi = if first { r - 1 } else { r };
        match self {
            LabeledWeights::Exact { trees, forests } => {
                let total = if first { &trees[r] } else { &forests[r] };
                let mut u = rng.gen_biguint_below(total);
                let mut binom = BigUint::one(); // C(r−1, s−1)
                for s in 1..=hi {
                    if s > 1 {
                        binom = binom * (r - s + 1) / (s - 1);
                    }
                    let w = &binom * &trees[s] * &forests[r - s];
                    if u < w {
                        return s;
                    }
                    u -= w;
                }
                unreachable!("weights sum to the total")
            }
            LabeledWeights::Float { trees, forests } => {
                let total = if first { trees[r] } else { forests[r] };
                let rf = r as f64;
                boustrophedon_pick(1, hi, total, rng, |s| s as f64 / rf * trees[s] * forests[r - s])
            }
        }
    }
}

/// Uniform labeled canonical cotrees.
#[derive(Clone, Debug)]
pub struct LabeledSampler {
    weights: LabeledWeights,
}

impl LabeledSampler {
    /// Exact weights up to [`EXACT_LIMIT`], floating point beyond.
    pub fn new(max_n: usize) -> Self {
        if max_n <= EXACT_LIMIT {
            Self::with_weights(LabeledWeights::exact(max_n))
        } else {
            Self::with_weights(LabeledWeights::float(max_n))
        }
    }

    pub fn with_weights(weights: LabeledWeights) -> Self {
        LabeledSampler { weights }
    }

    /// Undecorated, unlabeled shape of a uniform tree of size `n`.
    pub(crate) fn sample_shape<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> RawTree {
        assert!(n >= 1 && n <= self.weights.max_n(), "size {n} outside the weight table");
        let mut t = RawTree::with_root();
        let mut pending = vec![(0usize, n)];
        while let Some((v, m)) = pending.pop() {
            if m == 1 {
                continue;
            }
            let mut left = m;
            let mut first = true;
            while left > 0 {
                let s = self.weights.draw(left, first, rng);
                first = false;
                left -= s;
                let c = t.add_child(v);
                pending.push((c, s));
            }
        }
        t
    }

    /// Uniform labeled canonical cotree of size `n`; with `connected`, the
    /// root is decorated 1, which is exactly conditioning on connectivity.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, connected: bool, rng: &mut R) -> Cotree {
        let shape = self.sample_shape(n, rng);
        let root = root_decoration(n, connected, rng);
        let labels = random_labels(n, rng);
        shape.to_cotree(root, Some(&labels))
    }
}

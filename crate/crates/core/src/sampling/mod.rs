//! Random generation of cotrees.
//!
//! The exact samplers build the undecorated shape first, with children in
//! no particular order, then fix decorations by alternation from the root
//! and (for labeled trees) spread a uniform random permutation of the
//! labels over the leaves.

mod binary;
mod boltzmann;
mod labeled;
mod unlabeled;

pub use binary::{enumerate_plane_binary_trees, sample_binary_decorated, PlaneBinaryTree};
pub use boltzmann::BoltzmannSampler;
pub use labeled::{LabeledSampler, LabeledWeights};
pub use unlabeled::{UnlabeledSampler, UnlabeledWeights};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cotree::{Cotree, CotreeBuilder, Decoration, NodeId};

/// Sizes up to this use exact big-integer weights; larger sizes use
/// normalized floating-point weights.
pub const EXACT_LIMIT: usize = 128;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("size must be at least 1")]
    EmptySize,
    #[error("Boltzmann parameter {x} outside (0, {rho}]")]
    ParameterOutOfRange { x: f64, rho: f64 },
    #[error("window tolerance {0} outside [0, 1)")]
    InvalidWindow(f64),
    #[error("decoration bias {0} outside [0, 1]")]
    InvalidBias(f64),
    #[error("no sample landed in the size window after {attempts} attempts")]
    AttemptsExceeded { attempts: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    LabeledExact,
    UnlabeledExact,
    LabeledBoltzmann,
    BinaryDecorated,
}

impl std::str::FromStr for SamplerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "labeled-exact" | "labeled" => Ok(SamplerKind::LabeledExact),
            "unlabeled-exact" | "unlabeled" => Ok(SamplerKind::UnlabeledExact),
            "labeled-boltzmann" | "boltzmann" => Ok(SamplerKind::LabeledBoltzmann),
            "binary-decorated" | "binary" => Ok(SamplerKind::BinaryDecorated),
            other => Err(format!("unknown sampler kind `{other}`")),
        }
    }
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_p() -> f64 {
    0.5
}

fn default_max_attempts() -> u64 {
    1_000_000
}

/// Everything needed to reproduce one sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub n: usize,
    pub seed: u64,
    pub kind: SamplerKind,
    /// Relative half-width of the Boltzmann size window.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Probability of decoration 0 for binary decorated trees.
    #[serde(default = "default_p")]
    pub p: f64,
    /// Force root decoration 1, i.e. condition on a connected cograph.
    #[serde(default)]
    pub connected: bool,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u64,
}

impl SampleConfig {
    pub fn new(n: usize, seed: u64, kind: SamplerKind) -> Self {
        SampleConfig {
            n,
            seed,
            kind,
            epsilon: default_epsilon(),
            p: default_p(),
            connected: false,
            max_attempts: default_max_attempts(),
        }
    }

    pub fn validate(&self) -> Result<(), SampleError> {
        if self.n == 0 {
            return Err(SampleError::EmptySize);
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(SampleError::InvalidWindow(self.epsilon));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(SampleError::InvalidBias(self.p));
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Sampler for one configuration, with its tables built once.
#[derive(Clone, Debug)]
pub enum Sampler {
    Labeled(LabeledSampler),
    Unlabeled(UnlabeledSampler),
    Boltzmann(BoltzmannSampler),
    Binary,
}

impl Sampler {
    pub fn new(config: &SampleConfig) -> Result<Self, SampleError> {
        config.validate()?;
        let n = config.n;
        Ok(match config.kind {
            SamplerKind::LabeledExact => Sampler::Labeled(LabeledSampler::new(n)),
            SamplerKind::UnlabeledExact => Sampler::Unlabeled(UnlabeledSampler::new(n)),
            SamplerKind::LabeledBoltzmann => Sampler::Boltzmann(BoltzmannSampler::at_criticality()),
            SamplerKind::BinaryDecorated => Sampler::Binary,
        })
    }

    /// One draw for `config`, which must be the configuration the sampler
    /// was built from (its seed is ignored in favour of `rng`).
    pub fn draw<R: Rng + ?Sized>(&self, config: &SampleConfig, rng: &mut R) -> Result<Cotree, SampleError> {
        let n = config.n;
        Ok(match self {
            Sampler::Labeled(s) => s.sample(n, config.connected, rng),
            Sampler::Unlabeled(s) => s.sample(n, config.connected, rng),
            Sampler::Boltzmann(s) => {
                let t = s.sample_in_window(n, config.epsilon, config.max_attempts, rng)?;
                if config.connected {
                    t.with_alternating_decorations(Decoration::One)
                } else {
                    t
                }
            }
            Sampler::Binary => sample_binary_decorated(n, config.p, rng).to_cotree(),
        })
    }
}

/// Draws one cotree as described by `config`; identical configs give
/// identical trees.
pub fn sample(config: &SampleConfig) -> Result<Cotree, SampleError> {
    Sampler::new(config)?.draw(config, &mut config.rng())
}

/// Undecorated tree under construction; node 0 is the root and a node
/// without children is a leaf.
#[derive(Clone, Debug, Default)]
pub(crate) struct RawTree {
    pub children: Vec<Vec<u32>>,
}

impl RawTree {
    pub fn with_root() -> Self {
        RawTree { children: vec![Vec::new()] }
    }

    pub fn add_child(&mut self, parent: usize) -> usize {
        let id = self.children.len();
        self.children.push(Vec::new());
        self.children[parent].push(id as u32);
        id
    }

    /// Appends a copy of the subtree at `src` as a new child of `parent`.
    pub fn copy_subtree(&mut self, src: usize, parent: usize) {
        let mut stack = vec![(src, parent)];
        while let Some((s, p)) = stack.pop() {
            let id = self.add_child(p);
            for i in 0..self.children[s].len() {
                stack.push((self.children[s][i] as usize, id));
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.children.iter().filter(|c| c.is_empty()).count()
    }

    /// Decorations alternate from `root`; leaf labels follow `labels` in
    /// order of creation when given.
    pub fn to_cotree(&self, root: Decoration, labels: Option<&[u32]>) -> Cotree {
        let mut b = CotreeBuilder::with_capacity(self.leaf_count());
        let mut id: Vec<NodeId> = vec![usize::MAX; self.children.len()];
        let mut leaf_rank = vec![u32::MAX; self.children.len()];
        let mut next_leaf = 0;
        for (v, c) in self.children.iter().enumerate() {
            if c.is_empty() {
                leaf_rank[v] = next_leaf;
                next_leaf += 1;
            }
        }
        // (node, depth, children already emitted)
        let mut stack = vec![(0usize, 0usize, false)];
        while let Some((v, depth, done)) = stack.pop() {
            let kids = &self.children[v];
            if kids.is_empty() {
                id[v] = match labels {
                    Some(l) => b.labeled_leaf(l[leaf_rank[v] as usize]),
                    None => b.leaf(),
                };
            } else if done {
                let ids: Vec<NodeId> = kids.iter().map(|&c| id[c as usize]).collect();
                let d = if depth % 2 == 0 { root } else { root.flip() };
                id[v] = b.internal(d, &ids);
            } else {
                stack.push((v, depth, true));
                for &c in kids.iter().rev() {
                    stack.push((c as usize, depth + 1, false));
                }
            }
        }
        b.finish_unchecked()
    }
}

pub(crate) fn root_decoration<R: Rng + ?Sized>(n: usize, connected: bool, rng: &mut R) -> Decoration {
    if connected {
        Decoration::One
    } else if n == 1 {
        Decoration::Zero
    } else {
        Decoration::from_bit(rng.gen::<bool>())
    }
}

pub(crate) fn random_labels<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut labels: Vec<u32> = (1..=n as u32).collect();
    labels.shuffle(rng);
    labels
}

/// Inverse-transform draw from the weights visited in the order
/// `1, m, 2, m − 1, ...` over `lo..=hi`; heavy mass sits at both ends.
pub(crate) fn boustrophedon_pick<R: Rng + ?Sized>(
    lo: usize,
    hi: usize,
    total: f64,
    rng: &mut R,
    mut weight: impl FnMut(usize) -> f64,
) -> usize {
    let mut u = rng.gen::<f64>() * total;
    let (mut a, mut b) = (lo, hi);
    let mut best = (lo, f64::MIN);
    let mut from_low = true;
    while a <= b {
        let s = if from_low { a } else { b };
        let w = weight(s);
        if w > best.1 {
            best = (s, w);
        }
        if u < w {
            return s;
        }
        u -= w;
        if from_low {
            a += 1;
        } else {
            if b == 0 {
                break;
            }
            b -= 1;
        }
        from_low = !from_low;
    }
    // rounding left a sliver of mass unclaimed
    best.0
}

#[cfg(test)]
mod tests;

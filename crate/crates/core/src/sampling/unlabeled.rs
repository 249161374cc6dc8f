use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use super::{boustrophedon_pick, root_decoration, RawTree, EXACT_LIMIT};
use crate::cotree::Cotree;
use crate::enumeration::{rho_unlabeled_precise, unlabeled_counts};

/// Tables for drawing uniform multisets of unlabeled trees.
///
/// With `c_k = Σ_{d|k} d·u_d` and `h_r` the number of multisets of total
/// size `r`, a multiset of size `r` is drawn by picking `k` with weight
/// `c_k h_{r−k}`, then `d | k` with weight `d·u_d`, adding `k/d` copies of
/// one uniform tree of size `d`, and continuing with size `r − k`. A tree
/// of size `m ≥ 2` is a multiset with at least two elements: the single
/// cell giving one tree of size `m` is removed from its first draw.
#[derive(Clone, Debug)]
pub enum UnlabeledWeights {
    Exact { u: Vec<BigUint>, c: Vec<BigUint>, h: Vec<BigUint> },
    /// `u_d x^d`, `c_k x^k`, `h_r x^r` at `x = ρ_u`.
    Float { x: f64, u: Vec<f64>, c: Vec<f64>, h: Vec<f64> },
}

fn divisors(k: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            small.push(d);
            if d * d != k {
                large.push(k / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl UnlabeledWeights {
    pub fn exact(max_n: usize) -> Self {
        let n = max_n.max(1);
        let u: Vec<BigUint> = unlabeled_counts(n).into_iter().map(|x| x.to_biguint().unwrap()).collect();
        let mut c = vec![BigUint::zero(); n + 1];
        for k in 1..=n {
            for d in divisors(k) {
                c[k] += &u[d] * d;
            }
        }
        let mut h = vec![BigUint::zero(); n + 1];
        h[0] = BigUint::from(1u32);
        for r in 1..=n {
            let s: BigUint = (1..=r).map(|k| &c[k] * &h[r - k]).sum();
            h[r] = s / r;
        }
        UnlabeledWeights::Exact { u, c, h }
    }

    pub fn float(max_n: usize) -> Self {
        let n = max_n.max(1);
        let x = rho_unlabeled_precise();
        let mut u = vec![0.0; n + 1];
        let mut c = vec![0.0; n + 1];
        let mut h = vec![0.0; n + 1];
        h[0] = 1.0;
        for m in 1..=n {
            let part: f64 =
                divisors(m).into_iter().filter(|&d| d < m).map(|d| d as f64 * u[d] * x.powi((m - d) as i32)).sum();
            let s = part + (1..m).map(|k| c[k] * h[m - k]).sum::<f64>();
            u[m] = if m == 1 { x } else { s / m as f64 };
            c[m] = part + m as f64 * u[m];
            h[m] = u[m] + s / m as f64;
        }
        UnlabeledWeights::Float { x, u, c, h }
    }

    pub fn max_n(&self) -> usize {
        match self {
            UnlabeledWeights::Exact { u, .. } => u.len() - 1,
            UnlabeledWeights::Float { u, .. } => u.len() - 1,
        }
    }

    /// One cell `(copies, size)` for a multiset of size `r`; with `first`,
    /// the cell `(1, m)` for `m = r` is excluded.
    fn draw<R: Rng + ?Sized>(&self, r: usize, first: bool, rng: &mut R) -> (usize, usize) {
        match self {
            UnlabeledWeights::Exact { u, c, h } => {
                let excluded = if first { &u[r] * r } else { BigUint::zero() };
                let total = &h[r] * r - &excluded;
                let mut v = rng.gen_biguint_below(&total);
                let mut k_pick = 0;
                for k in 1..=r {
                    let mut w = &c[k] * &h[r - k];
                    if k == r {
                        w -= &excluded;
                    }
                    if v < w {
                        k_pick = k;
                        break;
                    }
                    v -= w;
                }
                assert!(k_pick > 0);
                let k = k_pick;
                let mut ds = divisors(k);
                if first && k == r {
                    ds.retain(|&d| d < r);
                }
                let total: BigUint = ds.iter().map(|&d| &u[d] * d).sum();
                let mut v = rng.gen_biguint_below(&total);
                for &d in &ds {
                    let w = &u[d] * d;
                    if v < w {
                        return (k / d, d);
                    }
                    v -= w;
                }
                unreachable!("divisor weights sum to the total")
            }
            UnlabeledWeights::Float { x, u, c, h } => {
                let excluded = if first { r as f64 * u[r] } else { 0.0 };
                let total = r as f64 * h[r] - excluded;
                let k = boustrophedon_pick(1, r, total, rng, |k| {
                    let w = c[k] * h[r - k];
                    if k == r {
                        w - excluded
                    } else {
                        w
                    }
                });
                let mut ds = divisors(k);
                if first && k == r {
                    ds.retain(|&d| d < r);
                }
                let weight = |d: usize| d as f64 * u[d] * x.powi((k - d) as i32);
                let total: f64 = ds.iter().map(|&d| weight(d)).sum();
                let mut v = rng.gen::<f64>() * total;
                for &d in &ds {
                    let w = weight(d);
                    if v < w {
                        return (k / d, d);
                    }
                    v -= w;
                }
                let d = *ds.last().unwrap();
                (k / d, d)
            }
        }
    }
}

/// Uniform unlabeled canonical cotrees.
#[derive(Clone, Debug)]
pub struct UnlabeledSampler {
    weights: UnlabeledWeights,
}

impl UnlabeledSampler {
    pub fn new(max_n: usize) -> Self {
        if max_n <= EXACT_LIMIT {
            Self::with_weights(UnlabeledWeights::exact(max_n))
        } else {
            Self::with_weights(UnlabeledWeights::float(max_n))
        }
    }

    pub fn with_weights(weights: UnlabeledWeights) -> Self {
        UnlabeledSampler { weights }
    }

    /// Fills node `v` with a uniform tree of size `m`.
    fn grow<R: Rng + ?Sized>(&self, t: &mut RawTree, v: usize, m: usize, rng: &mut R) {
        if m == 1 {
            return;
        }
        let mut left = m;
        let mut first = true;
        while left > 0 {
            let (copies, d) = self.weights.draw(left, first, rng);
            first = false;
            left -= copies * d;
            let c = t.add_child(v);
            self.grow(t, c, d, rng);
            for _ in 1..copies {
                t.copy_subtree(c, v);
            }
        }
    }

    pub(crate) fn sample_shape<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> RawTree {
        assert!(n >= 1 && n <= self.weights.max_n(), "size {n} outside the weight table");
        let mut t = RawTree::with_root();
        self.grow(&mut t, 0, n, rng);
        t
    }

    /// Uniform unlabeled canonical cotree of size `n` (leaves unlabeled).
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, connected: bool, rng: &mut R) -> Cotree {
        let shape = self.sample_shape(n, rng);
        let root = root_decoration(n, connected, rng);
        shape.to_cotree(root, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn multiset_counts() {
        if let UnlabeledWeights::Exact { h, u, .. } = UnlabeledWeights::exact(10) {
            for n in 2..=10 {
                assert_eq!(h[n], &u[n] * 2u32);
            }
        }
    }

    #[test]
    fn float_tables_track_exact() {
        let x = rho_unlabeled_precise();
        let UnlabeledWeights::Float { u, .. } = UnlabeledWeights::float(60) else { panic!() };
        let exact = unlabeled_counts(60);
        for n in 1..=60 {
            let e = exact[n].to_f64().unwrap() * x.powi(n as i32);
            assert!((u[n] / e - 1.0).abs() < 1e-10, "n = {n}");
        }
    }
}

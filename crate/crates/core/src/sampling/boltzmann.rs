use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{random_labels, root_decoration, RawTree, SampleError};
use crate::cotree::Cotree;
use crate::enumeration::rho_labeled;

/// Free Boltzmann sampler for `L = z + SET_{≥2}(L)` at parameter `x`.
///
/// A node is a leaf with probability `x/L(x)`; otherwise it gets a
/// Poisson(`L(x)`) number of children, redrawn until at least two.
#[derive(Clone, Debug)]
pub struct BoltzmannSampler {
    x: f64,
    lx: f64,
    poisson: Poisson<f64>,
}

/// `L(x)` from `2L − e^L + 1 = x`, the defining equation rearranged; the
/// left side increases on `[0, ln 2]` from 0 to `ρ`.
fn l_at(x: f64) -> f64 {
    let f = |l: f64| 2.0 * l - l.exp() + 1.0 - x;
    let (mut lo, mut hi) = (0.0, std::f64::consts::LN_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl BoltzmannSampler {
    pub fn new(x: f64) -> Result<Self, SampleError> {
        let rho = rho_labeled();
        if !(x > 0.0 && x <= rho) {
            return Err(SampleError::ParameterOutOfRange { x, rho });
        }
        let lx = if x == rho { std::f64::consts::LN_2 } else { l_at(x) };
        Ok(BoltzmannSampler { x, lx, poisson: Poisson::new(lx).expect("L(x) is positive") })
    }

    /// Sampler at `x = ρ`, where `L(ρ) = ln 2`.
    pub fn at_criticality() -> Self {
        Self::new(rho_labeled()).expect("ρ is in range")
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn l_value(&self) -> f64 {
        self.lx
    }

    /// One free draw, abandoned once it is sure to exceed `max_size` leaves.
    pub(crate) fn shape_bounded<R: Rng + ?Sized>(&self, max_size: usize, rng: &mut R) -> Option<RawTree> {
        let leaf_p = self.x / self.lx;
        let mut t = RawTree::with_root();
        let mut pending = vec![0usize];
        let mut leaves = 0usize;
        while let Some(v) = pending.pop() {
            if rng.gen::<f64>() < leaf_p {
                leaves += 1;
            } else {
                let k = loop {
                    let k = self.poisson.sample(rng) as usize;
                    if k >= 2 {
                        break k;
                    }
                };
                for _ in 0..k {
                    pending.push(t.add_child(v));
                }
            }
            // every pending node will hold at least one leaf
            if leaves + pending.len() > max_size {
                return None;
            }
        }
        Some(t)
    }

    /// Free draws until the size falls in `[n(1−ε), n(1+ε)]`. Conditioned
    /// on its size, the output is uniform among labeled canonical cotrees.
    pub fn sample_in_window<R: Rng + ?Sized>(
        &self,
        n: usize,
        epsilon: f64,
        max_attempts: u64,
        rng: &mut R,
    ) -> Result<Cotree, SampleError> {
        if n == 0 {
            return Err(SampleError::EmptySize);
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(SampleError::InvalidWindow(epsilon));
        }
        let lo = (n as f64 * (1.0 - epsilon)).ceil() as usize;
        let hi = (n as f64 * (1.0 + epsilon)).floor() as usize;
        for _ in 0..max_attempts {
            if let Some(t) = self.shape_bounded(hi, rng) {
                let size = t.leaf_count();
                if size >= lo {
                    let root = root_decoration(size, false, rng);
                    let labels = random_labels(size, rng);
                    return Ok(t.to_cotree(root, Some(&labels)));
                }
            }
        }
        Err(SampleError::AttemptsExceeded { attempts: max_attempts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn l_inversion() {
        let l = l_at(0.2);
        assert!((2.0 * l - l.exp() + 1.0 - 0.2).abs() < 1e-12);
        // double root at the singularity: only half the digits survive
        assert!((l_at(rho_labeled()) - std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn domain_is_checked() {
        assert!(BoltzmannSampler::new(0.39).is_err());
        assert!(BoltzmannSampler::new(0.0).is_err());
        assert!(BoltzmannSampler::new(0.3).is_ok());
    }

    #[test]
    fn window_is_respected() {
        let s = BoltzmannSampler::at_criticality();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let t = s.sample_in_window(50, 0.1, 100_000, &mut rng).unwrap();
            assert!((45..=55).contains(&t.leaf_count()));
            assert!(t.is_canonical());
        }
    }

    #[test]
    fn cap_is_reported() {
        let s = BoltzmannSampler::new(0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = s.sample_in_window(500, 0.0, 10, &mut rng).unwrap_err();
        assert_eq!(err, SampleError::AttemptsExceeded { attempts: 10 });
    }
}

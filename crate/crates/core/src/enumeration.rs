//! Generating functions of labeled and unlabeled cographs.
//!
//! Labeled side: `L = z + exp(L) − 1 − L` counts labeled canonical cotrees
//! with a fixed root decoration, and `M = exp(L) − 1 = 2L − z` counts
//! labeled cographs. Unlabeled side: `U` counts pairs (labeled tree,
//! automorphism), equivalently unlabeled trees, and `V = 2U − z` counts
//! unlabeled cographs. Marked variants carry a blossom (an unlabeled marked
//! leaf that does not count in the size) or labeled marked leaves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cotree::{Cotree, CotreeError};
use crate::series::{ln_abs, TruncatedSeries};

/// Largest series order served to callers such as the command line.
pub const MAX_ORDER: usize = 5000;

#[derive(Debug, Error, PartialEq)]
pub enum EnumerationError {
    #[error("truncated series of order {order} does not change sign on the search interval")]
    InsufficientOrder { order: usize },
    #[error("order {order} is below the size {needed} of the induced tree")]
    OrderTooSmall { order: usize, needed: usize },
    #[error("order {order} exceeds the cap {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error(transparent)]
    InvalidTree(#[from] CotreeError),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `ℓ_0..ℓ_N` (with `ℓ_0 = 0`): labeled trees with no unary node, from the
/// coefficient recurrence of `L = z + exp(L) − 1 − L` in `n!`-scaled
/// integers. With `e_n = n![z^n]exp(L)` and
/// `s_n = Σ_{k<n} C(n−1, k−1) ℓ_k e_{n−k}`, we get `ℓ_n = [n=1] + s_n` and
/// `e_n = s_n + ℓ_n`.
pub fn labeled_counts(order: usize) -> Vec<BigInt> {
    let mut l = vec![BigInt::zero(); order + 1];
    let mut e = vec![BigInt::zero(); order + 1];
    e[0] = BigInt::one();
    let mut binom_row = vec![BigInt::one()]; // C(n−1, ·)
    for n in 1..=order {
        if n >= 2 {
            let mut next = vec![BigInt::one(); n];
            for j in 1..n - 1 {
                next[j] = &binom_row[j - 1] + &binom_row[j];
            }
            binom_row = next;
        }
        let mut s = BigInt::zero();
        for k in 1..n {
            s += &binom_row[k - 1] * &l[k] * &e[n - k];
        }
        l[n] = if n == 1 { BigInt::one() } else { s.clone() };
        e[n] = s + &l[n];
    }
    l
}

/// `m_0..m_N`: labeled cographs, `m_1 = 1` and `m_n = 2ℓ_n` otherwise.
pub fn labeled_cograph_counts(order: usize) -> Vec<BigInt> {
    labeled_counts(order)
        .into_iter()
        .enumerate()
        .map(|(n, l)| if n >= 2 { l * 2 } else { l })
        .collect()
}

/// `u_0..u_N`: unlabeled trees with no unary node, by the integer form of
/// the multiset (Euler) transform. With `c_k = Σ_{d|k} d·u_d` and `h` the
/// multiset series (`h_0 = 1`), `n·h_n = Σ_{k=1}^n c_k h_{n−k}`, and the
/// equation `U = z + h − 1 − U` gives `u_n = [n=1] + (h_n − u_n)`.
pub fn unlabeled_counts(order: usize) -> Vec<BigInt> {
    let mut u = vec![BigInt::zero(); order + 1];
    let mut c = vec![BigInt::zero(); order + 1];
    let mut h = vec![BigInt::zero(); order + 1];
    h[0] = BigInt::one();
    for n in 1..=order {
        // everything in n·h_n except the n·u_n term
        let mut part = BigInt::zero();
        for d in 1..n {
            if n % d == 0 {
                part += &u[d] * d;
            }
        }
        let mut s = part.clone();
        for k in 1..n {
            s += &c[k] * &h[n - k];
        }
        // n·h_n = s + n·u_n·h_0 and u_n = [n=1] + h_n − u_n, so u_n = [n=1] + s/n
        let (q, r) = s.div_rem(&BigInt::from(n));
        debug_assert!(r.is_zero());
        u[n] = if n == 1 { BigInt::one() } else { q.clone() };
        c[n] = part + &u[n] * n;
        h[n] = q + &u[n];
    }
    u
}

/// `v_0..v_N`: unlabeled cographs, `v_1 = 1` and `v_n = 2u_n` otherwise.
pub fn unlabeled_cograph_counts(order: usize) -> Vec<BigInt> {
    unlabeled_counts(order)
        .into_iter()
        .enumerate()
        .map(|(n, u)| if n >= 2 { u * 2 } else { u })
        .collect()
}

/// `L` as an exact series.
pub fn series_l(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_egf_counts(order, &labeled_counts(order))
}

/// `M = 2L − z`, checked against `exp(L) − 1`.
pub fn series_m(order: usize) -> TruncatedSeries {
    let l = series_l(order);
    let z = TruncatedSeries::z(order);
    let two_l_minus_z = &l.scale(&rat(2)) - &z;
    let exp_minus_one = &l.exp() - &TruncatedSeries::one(order);
    assert_eq!(two_l_minus_z, exp_minus_one, "the two forms of M disagree");
    two_l_minus_z
}

/// Labeled trees with one blossom, by blossom position.
#[derive(Clone, Debug)]
pub struct MarkedLabeled {
    /// `L′`: a blossom anywhere.
    pub derivative: TruncatedSeries,
    /// `L^• = zL′`: a marked labeled leaf.
    pub pointed: TruncatedSeries,
    /// Blossom at even distance from the root.
    pub even: TruncatedSeries,
    /// Blossom at odd distance from the root.
    pub odd: TruncatedSeries,
}

/// Closed forms `L′ = 1/(2 − e^L)`, `L^even = 1/(e^L(2 − e^L))`,
/// `L^odd = (e^L − 1)/(e^L(2 − e^L))`.
pub fn series_marked_labeled(order: usize) -> MarkedLabeled {
    let l = series_l(order);
    let one = TruncatedSeries::one(order);
    let el = l.exp();
    let two_minus = &one.scale(&rat(2)) - &el;
    let derivative = two_minus.inverse();
    let even = (&el * &two_minus).inverse();
    let odd = &(&el - &one) * &even;
    MarkedLabeled { pointed: derivative.times_z(), derivative, even, odd }
}

/// Shape statistics of a tree `t0` entering the marked-leaf formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InducedShape {
    pub leaves: usize,
    pub internal: usize,
    pub equal_edges: usize,
    pub unequal_edges: usize,
}

impl InducedShape {
    pub fn of(t0: &Cotree) -> Result<Self, CotreeError> {
        t0.validate()?;
        let c = t0.shape_counts();
        Ok(InducedShape {
            leaves: t0.leaf_count(),
            internal: c.internal,
            equal_edges: c.equal_edges,
            unequal_edges: c.unequal_edges,
        })
    }
}

fn check_order(order: usize, shape: &InducedShape) -> Result<(), EnumerationError> {
    if order < shape.leaves {
        return Err(EnumerationError::OrderTooSmall { order, needed: shape.leaves });
    }
    Ok(())
}

/// Series whose `n![z^n]` counts pairs (labeled canonical cotree of size
/// `n`, tuple of distinct leaves inducing `t0`).
///
/// For `k ≥ 2` this is `L′·(e^L)^{n_v}·(L^•)^k·(L^odd)^{n_=}·(L^even)^{n_≠}`.
/// A single marked leaf always induces the one-leaf tree, so for `k = 1`
/// the count is that of cographs with one marked vertex, `zM′`.
pub fn series_mt0(t0: &Cotree, order: usize) -> Result<TruncatedSeries, EnumerationError> {
    let shape = InducedShape::of(t0)?;
    check_order(order, &shape)?;
    if shape.leaves == 1 {
        return Ok(series_m(order).derivative().times_z());
    }
    let marked = series_marked_labeled(order);
    let el = series_l(order).exp();
    Ok(product_form(&marked.derivative, &el, &marked.pointed, &marked.odd, &marked.even, &shape))
}

fn product_form(
    root: &TruncatedSeries,
    per_node: &TruncatedSeries,
    per_leaf: &TruncatedSeries,
    per_equal: &TruncatedSeries,
    per_unequal: &TruncatedSeries,
    shape: &InducedShape,
) -> TruncatedSeries {
    let mut out = root * &per_node.pow(shape.internal as u32);
    out = &out * &per_leaf.pow(shape.leaves as u32);
    out = &out * &per_equal.pow(shape.equal_edges as u32);
    &out * &per_unequal.pow(shape.unequal_edges as u32)
}

/// Independent route to `U` and `D`, order by order: `D` only needs `U` at
/// half the order, and with `W = exp(U)` the equation
/// `2U = z + W(1 + D) − 1` resolves `u_n` from lower coefficients once the
/// `u_n` term inside `W_n` is moved across.
#[cfg(test)]
fn series_u_and_d(order: usize) -> (TruncatedSeries, TruncatedSeries) {
    let n_max = order;
    let mut u = vec![BigRational::zero(); n_max + 1];
    let mut w = vec![BigRational::zero(); n_max + 1];
    let mut p = vec![BigRational::zero(); n_max + 1]; // Σ_{r≥2} U(z^r)/r
    let mut ep = vec![BigRational::zero(); n_max + 1]; // exp(p)
    w[0] = rat(1);
    ep[0] = rat(1);
    for n in 1..=n_max {
        // P_n = Σ_{r≥2, r|n} u_{n/r}/r, known since n/r < n
        let mut pn = BigRational::zero();
        for r in 2..=n {
            if n % r == 0 {
                pn += &u[n / r] / rat(r as i64);
            }
        }
        p[n] = pn;
        let mut s = BigRational::zero();
        for k in 1..=n {
            if !p[k].is_zero() {
                s += &p[k] * rat(k as i64) * &ep[n - k];
            }
        }
        ep[n] = s / rat(n as i64);
        // rest of W_n once the u_n·W_0 term is set aside
        let mut rest = BigRational::zero();
        for k in 1..n {
            if !u[k].is_zero() {
                rest += &u[k] * rat(k as i64) * &w[n - k];
            }
        }
        rest /= rat(n as i64);
        let mut dw = BigRational::zero();
        for j in 1..=n {
            if !ep[j].is_zero() {
                dw += &ep[j] * &w[n - j];
            }
        }
        let base = if n == 1 { rat(1) } else { BigRational::zero() };
        u[n] = base + &rest + dw;
        w[n] = &u[n] + rest;
    }
    let mut d = ep;
    d[0] = BigRational::zero();
    (TruncatedSeries::from_coeffs(order, u), TruncatedSeries::from_coeffs(order, d))
}

/// `U` as an ordinary series with the integer counts `u_n`.
pub fn series_u(order: usize) -> TruncatedSeries {
    let coeffs = unlabeled_counts(order).into_iter().map(BigRational::from_integer).collect();
    TruncatedSeries::from_coeffs(order, coeffs)
}

/// `Σ_{r≥2} U(z^r)/r`.
fn polya_tail(u: &TruncatedSeries) -> TruncatedSeries {
    let order = u.order();
    let mut p = TruncatedSeries::zero(order);
    for r in 2..=order {
        p = &p + &u.compose_power(r).scale(&BigRational::new(BigInt::one(), BigInt::from(r)));
    }
    p
}

fn d_from_u(u: &TruncatedSeries) -> TruncatedSeries {
    &polya_tail(u).exp() - &TruncatedSeries::one(u.order())
}

/// `D = exp(Σ_{r≥2} U(z^r)/r) − 1`.
pub fn series_d(order: usize) -> TruncatedSeries {
    d_from_u(&series_u(order))
}

/// `V = 2U − z`.
pub fn series_v(order: usize) -> TruncatedSeries {
    &series_u(order).scale(&rat(2)) - &TruncatedSeries::z(order)
}

/// Pairs (tree, automorphism) with one blossom or marked leaf.
#[derive(Clone, Debug)]
pub struct MarkedUnlabeled {
    /// `U′`: a blossom anywhere. Its top coefficient is lost to truncation.
    pub derivative: TruncatedSeries,
    /// `U^• = zU′`.
    pub pointed: TruncatedSeries,
    /// `U★`: a blossom fixed by the automorphism.
    pub star: TruncatedSeries,
    pub even: TruncatedSeries,
    pub odd: TruncatedSeries,
}

/// Solutions of `U★ = 1 + U★Q`, `U^even = 1 + U^odd Q`, `U^odd = U^even Q`
/// with `Q = exp_{≥1}(U) + D·exp(U)`, which equals `2U − z`.
pub fn series_u_marked(order: usize) -> MarkedUnlabeled {
    let u = series_u(order);
    let d = d_from_u(&u);
    let one = TruncatedSeries::one(order);
    let eu = u.exp();
    let q = &(&eu - &one) + &(&d * &eu);
    let star = (&one - &q).inverse();
    let even = (&one - &(&q * &q)).inverse();
    let odd = &q * &even;
    let derivative = u.derivative();
    MarkedUnlabeled { pointed: derivative.times_z(), derivative, star, even, odd }
}

/// Series whose `n![z^n]` counts tuples (labeled canonical cotree of size
/// `n`, root-preserving automorphism, distinct marked leaves inducing `t0`)
/// where the automorphism fixes the first common ancestors of the marked
/// leaves and their children leading to a marked leaf.
///
/// For `k ≥ 2` this is `U★·(2U + 1 − z)^{n_v}·(U^•)^k·(U^odd)^{n_=}·(U^even)^{n_≠}`;
/// for `k = 1` there is no constraint and the count is `zV′`.
pub fn series_vt0(t0: &Cotree, order: usize) -> Result<TruncatedSeries, EnumerationError> {
    let shape = InducedShape::of(t0)?;
    check_order(order, &shape)?;
    if shape.leaves == 1 {
        return Ok(series_v(order).derivative().times_z());
    }
    let marked = series_u_marked(order);
    let u = series_u(order);
    let green = &(&u.scale(&rat(2)) + &TruncatedSeries::one(order)) - &TruncatedSeries::z(order);
    Ok(product_form(&marked.star, &green, &marked.pointed, &marked.odd, &marked.even, &shape))
}

/// `ρ = 2 ln 2 − 1`, the radius of convergence of `L` and `M`.
pub fn rho_labeled() -> f64 {
    2.0 * std::f64::consts::LN_2 - 1.0
}

/// `Σ_n a_n x^n` for nonnegative integer coefficients, in log space.
pub fn eval_integer_series(coeffs: &[BigInt], x: f64) -> f64 {
    let lx = x.ln();
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| if n == 0 { c.to_f64().unwrap() } else { (ln_abs(c) + n as f64 * lx).exp() })
        .sum()
}

/// Root of `2U(z) − z − 1` on `(0, 0.35)` for the series truncated at
/// `order`, by bisection down to width `tol`.
///
/// Truncation underestimates `U`, so the root is approached from above as
/// the order grows.
pub fn rho_unlabeled(order: usize, tol: f64) -> Result<f64, EnumerationError> {
    let u = unlabeled_counts(order);
    let f = |x: f64| 2.0 * eval_integer_series(&u, x) - x - 1.0;
    let (mut lo, mut hi) = (0.0_f64, 0.35_f64);
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(EnumerationError::InsufficientOrder { order });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ρ_u` to near machine precision.
///
/// At the singularity `U(ρ_u) = (1 + ρ_u)/2`, and the defining equation
/// becomes `U(ρ_u) + Σ_{r≥2} U(ρ_u^r)/r = ln 2`. The terms with `r ≥ 2`
/// only evaluate `U` well inside its disc, where a few hundred
/// coefficients are plenty.
pub fn rho_unlabeled_precise() -> f64 {
    const ORDER: usize = 400;
    let u = unlabeled_counts(ORDER);
    let g = |x: f64| {
        let mut s = 0.5 * (1.0 + x);
        let mut r = 2;
        loop {
            let xr = x.powi(r);
            if xr < 1e-300 {
                break;
            }
            let term = eval_integer_series(&u, xr) / r as f64;
            s += term;
            if term < 1e-18 {
                break;
            }
            r += 1;
        }
        s - std::f64::consts::LN_2
    };
    let (mut lo, mut hi) = (0.2_f64, 0.35_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Law on `{1, ..., jmax}` with the remaining mass kept as a tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub rho: f64,
    /// `probabilities[j − 1]` is the mass of `j`.
    pub probabilities: Vec<f64>,
    pub tail: f64,
}

impl LimitLaw {
    fn from_terms(rho: f64, probabilities: Vec<f64>) -> Self {
        let tail = (1.0 - probabilities.iter().sum::<f64>()).max(0.0);
        LimitLaw { rho, probabilities, tail }
    }

    pub fn jmax(&self) -> usize {
        self.probabilities.len()
    }

    pub fn partial_sum(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Limit law of the vertex connectivity of a uniform connected labeled
/// cograph: `π_j = ρ^j [z^j]M`.
pub fn pi_distribution(jmax: usize) -> LimitLaw {
    let rho = rho_labeled();
    let m = labeled_cograph_counts(jmax);
    let mut ln_fact = 0.0;
    let mut probs = Vec::with_capacity(jmax);
    for (j, mj) in m.iter().enumerate().skip(1) {
        ln_fact += (j as f64).ln();
        probs.push((ln_abs(mj) - ln_fact + j as f64 * rho.ln()).exp());
    }
    LimitLaw::from_terms(rho, probs)
}

/// Unlabeled analogue: `π^u_j = ρ_u^j [z^j]V`.
pub fn pi_u_distribution(jmax: usize) -> LimitLaw {
    let rho = rho_unlabeled_precise();
    let v = unlabeled_cograph_counts(jmax);
    let probs = v.iter().enumerate().skip(1).map(|(j, vj)| (ln_abs(vj) + j as f64 * rho.ln()).exp()).collect();
    LimitLaw::from_terms(rho, probs)
}

/// The limiting probability `(k−1)!/(2k−2)!` that `k` uniform leaves
/// induce a given binary cotree.
pub fn binary_limit_probability(k: usize) -> f64 {
    let num: f64 = (1..k).map(|i| i as f64).product();
    let den: f64 = (1..=2 * k - 2).map(|i| i as f64).product();
    num / den
}

/// `[z^n]T / ((n)_k [z^n]S)` as a float, for exact series `T`, `S`.
pub fn falling_ratio(t: &TruncatedSeries, s: &TruncatedSeries, n: usize, k: usize) -> f64 {
    let mut falling = BigInt::one();
    for i in 0..k {
        falling *= n - i;
    }
    let r = t.coeff(n) / (s.coeff(n) * BigRational::from_integer(falling));
    (ln_abs(r.numer()) - ln_abs(r.denom())).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn schroeder_counts() {
        assert_eq!(labeled_counts(7), ints(&[0, 1, 1, 4, 26, 236, 2752, 39208]));
        let m = labeled_cograph_counts(4);
        assert_eq!(m[1], BigInt::from(1));
        assert_eq!(m[4], BigInt::from(52));
    }

    #[test]
    fn unlabeled_counts_agree_with_d_route() {
        assert_eq!(unlabeled_counts(8), ints(&[0, 1, 1, 2, 5, 12, 33, 90, 261]));
        let (u, d) = series_u_and_d(60);
        let fast = unlabeled_counts(60);
        for n in 0..=60 {
            assert_eq!(u.integer_coeff(n), fast[n]);
        }
        assert_eq!(d, series_d(60));
        assert_eq!(unlabeled_cograph_counts(4)[4], BigInt::from(10));
    }

    #[test]
    fn l_coefficients_satisfy_equation() {
        let n = 30;
        let l = series_l(n);
        let rhs = &(&(&TruncatedSeries::z(n) + &l.exp()) - &TruncatedSeries::one(n)) - &l;
        assert_eq!(l, rhs);
    }

    #[test]
    fn marked_labeled_identities() {
        let n = 25;
        let m = series_marked_labeled(n);
        let el = series_l(n).exp();
        let one = TruncatedSeries::one(n);
        let elm1 = &el - &one;
        assert_eq!(m.even, &one + &(&elm1 * &m.odd));
        assert_eq!(m.odd, &elm1 * &m.even);
        assert_eq!(&m.even + &m.odd, m.derivative);
        assert_eq!(m.derivative.truncate(n - 1), series_l(n).derivative().truncate(n - 1));
    }

    #[test]
    fn marked_labeled_against_blossom_oracle() {
        let m = series_marked_labeled(6);
        for n in 1..=5 {
            let (all, even, odd) = oracle::blossom_counts(n);
            assert_eq!(m.derivative.egf_count(n), BigInt::from(all));
            assert_eq!(m.even.egf_count(n), BigInt::from(even));
            assert_eq!(m.odd.egf_count(n), BigInt::from(odd));
        }
    }

    #[test]
    fn d_small_coefficients() {
        let d = series_d(10);
        assert!(d.coeff(1).is_zero());
        // one pair: the cherry with its two leaves swapped
        assert_eq!(d.egf_count(2), BigInt::one());
        for n in 2..=6 {
            assert_eq!(d.egf_count(n), BigInt::from(oracle::no_fixed_root_child_count(n)), "D at {n}");
        }
    }

    #[test]
    fn unlabeled_marked_against_oracle() {
        let m = series_u_marked(6);
        for n in 0..=4 {
            let (all, even, odd) = if n == 0 { (1, 1, 0) } else { oracle::fixed_blossom_automorphism_counts(n) };
            assert_eq!(m.star.egf_count(n), BigInt::from(all), "U★ at {n}");
            assert_eq!(m.even.egf_count(n), BigInt::from(even));
            assert_eq!(m.odd.egf_count(n), BigInt::from(odd));
        }
    }

    #[test]
    fn rho_values() {
        assert!((rho_labeled() - 0.386_294_361_1).abs() < 1e-10);
        let r = rho_unlabeled_precise();
        assert!((r - 0.280_832_666_984).abs() < 1e-9, "{r}");
        let l = series_l(400);
        let at_rho = l.eval(rho_labeled());
        eprintln!("L_400(rho) = {at_rho}");
        assert!(at_rho < std::f64::consts::LN_2 && at_rho > std::f64::consts::LN_2 - 0.02);
    }

    #[test]
    fn limit_law_first_terms() {
        let pi = pi_distribution(60);
        assert!((pi.probabilities[0] - 0.386_294).abs() < 1e-6);
        assert!((pi.probabilities[1] - 0.149_224).abs() < 1e-6);
        let json = serde_json::to_string(&pi).unwrap();
        let back: LimitLaw = serde_json::from_str(&json).unwrap();
        assert_eq!(back.probabilities.len(), 60);
    }

    #[test]
    fn marked_series_against_oracles() {
        for src in ["1", "(0 1 2)", "(1 1 2)", "(1 (0 1 2) 3)", "(0 (0 1 3) 2)", "(1 1 2 3)"] {
            let t0: Cotree = src.parse().unwrap();
            let mt0 = series_mt0(&t0, 5).unwrap();
            let vt0 = series_vt0(&t0, 5).unwrap();
            for n in t0.leaf_count()..=5 {
                assert_eq!(mt0.egf_count(n), BigInt::from(oracle::count_marked_inducing(&t0, n)), "M {src} n={n}");
                assert_eq!(
                    vt0.egf_count(n),
                    BigInt::from(oracle::count_marked_inducing_with_automorphism(&t0, n)),
                    "V {src} n={n}"
                );
            }
        }
    }

    #[test]
    fn marked_objects_are_a_subset() {
        let t0: Cotree = "(1 (0 1 2) 3)".parse().unwrap();
        let order = 30;
        let mt0 = series_mt0(&t0, order).unwrap();
        let m = series_m(order);
        for n in 3..=order {
            let falling: BigInt = (0..3).map(|i| BigInt::from(n - i)).product();
            assert!(mt0.egf_count(n) <= falling * m.egf_count(n));
        }
    }

    #[test]
    fn order_checks() {
        let t0: Cotree = "(1 1 2 3)".parse().unwrap();
        assert_eq!(series_mt0(&t0, 2).unwrap_err(), EnumerationError::OrderTooSmall { order: 2, needed: 3 });
        assert!(matches!(rho_unlabeled(3, 1e-6), Err(EnumerationError::InsufficientOrder { .. })));
    }

    #[test]
    fn binary_limit() {
        assert_eq!(binary_limit_probability(2), 0.5);
        assert!((binary_limit_probability(3) - 1.0 / 12.0).abs() < 1e-15);
    }
}

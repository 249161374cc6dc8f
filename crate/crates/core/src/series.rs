//! Power series truncated at a fixed order, with exact rational coefficients.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Series `Σ_{k ≤ N} c_k z^k`; every operation truncates at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Natural log of |x| for a nonzero big integer, accurate to f64 precision.
pub(crate) fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().abs().ln();
    }
    let shift = bits - 60;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Pascal's triangle up to row `n`.
fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![BigInt::one(); m + 1];
        for k in 1..m {
            row[k] = &rows[m - 1][k - 1] + &rows[m - 1][k];
        }
        rows.push(row);
    }
    rows
}

impl TruncatedSeries {
    /// `k!·c_k` for every `k` when all of them are integers. Counting
    /// series are of this form, and their products, exponentials and
    /// inverses can then be computed with integer binomial convolutions
    /// instead of normalizing a rational at every step.
    fn egf_integers(&self) -> Option<Vec<BigInt>> {
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 1 {
                fact *= k;
            }
            if c.is_zero() {
                out.push(BigInt::zero());
                continue;
            }
            let scaled = c.numer() * &fact;
            if !(&scaled % c.denom()).is_zero() {
                return None;
            }
            out.push(scaled / c.denom());
        }
        Some(out)
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, rat(1))
    }

    pub fn constant(order: usize, c: BigRational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = rat(1);
        }
        s
    }

    /// Builds from coefficients, padding with zeros or truncating to `order`.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<BigRational>) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    /// Coefficients `c_k / k!` for integer counts `c_k` (an exponential
    /// generating function).
    pub fn from_egf_counts(order: usize, counts: &[BigInt]) -> Self {
        let mut fact = BigInt::one();
        let mut coeffs = Vec::with_capacity(order + 1);
        for k in 0..=order {
            if k > 0 {
                fact *= k;
            }
            let c = counts.get(k).cloned().unwrap_or_default();
            coeffs.push(BigRational::new(c, fact.clone()));
        }
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `k!·[z^k]`, which must be an integer for counting series.
    pub fn egf_count(&self, k: usize) -> BigInt {
        let mut fact = BigInt::one();
        for i in 2..=k {
            fact *= i;
        }
        let c = &self.coeffs[k] * BigRational::from_integer(fact);
        assert!(c.is_integer(), "coefficient {k} times k! is not an integer");
        c.to_integer()
    }

    /// `[z^k]` as an integer; panics if it is not one.
    pub fn integer_coeff(&self, k: usize) -> BigInt {
        assert!(self.coeffs[k].is_integer(), "coefficient {k} is not an integer");
        self.coeffs[k].to_integer()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `z·f`.
    pub fn times_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// `f′`; the top coefficient of the result is lost to truncation and
    /// set to zero.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut coeffs: Vec<BigRational> = (1..=n).map(|k| &self.coeffs[k] * rat(k as i64)).collect();
        coeffs.push(BigRational::zero());
        TruncatedSeries { coeffs }
    }

    /// `f(z^r)` for `r ≥ 1`: coefficient `m` moves to index `r·m`.
    pub fn compose_power(&self, r: usize) -> Self {
        assert!(r >= 1);
        let n = self.order();
        let mut out = Self::zero(n);
        for m in 0..=n / r {
            out.coeffs[r * m] = self.coeffs[m].clone();
        }
        out
    }

    /// `exp(f)` for `f(0) = 0`, via `F′ = f′F`: `n F_n = Σ_k k f_k F_{n−k}`.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs a zero constant term");
        let n = self.order();
        if let Some(a) = self.egf_integers() {
            // exponential formula: the block holding the first atom has size k
            let binom = binomials(n);
            let mut e = vec![BigInt::one(); n + 1];
            for m in 1..=n {
                let mut s = BigInt::zero();
                for k in 1..=m {
                    if !a[k].is_zero() {
                        s += &binom[m - 1][k - 1] * &a[k] * &e[m - k];
                    }
                }
                e[m] = s;
            }
            return TruncatedSeries::from_egf_counts(n, &e);
        }
        self.exp_rational()
    }

    fn exp_rational(&self) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = rat(1);
        let kf: Vec<BigRational> = (0..=n).map(|k| &self.coeffs[k] * rat(k as i64)).collect();
        for m in 1..=n {
            let mut s = BigRational::zero();
            for k in 1..=m {
                if !kf[k].is_zero() {
                    s += &kf[k] * &out[m - k];
                }
            }
            out[m] = s / rat(m as i64);
        }
        TruncatedSeries { coeffs: out }
    }

    /// `exp(f) − Σ_{j<j0} f^j/j!`: the exponential with its first `j0`
    /// power terms removed (`exp_{≥ j0}`).
    pub fn exp_at_least(&self, j0: usize) -> Self {
        let mut out = self.exp();
        let mut power = Self::one(self.order());
        let mut fact = rat(1);
        for j in 0..j0 {
            if j > 0 {
                power = &power * self;
                fact *= rat(j as i64);
            }
            out = &out - &power.scale(&(rat(1) / &fact));
        }
        out
    }

    /// `1/f` for `f(0) ≠ 0`.
    pub fn inverse(&self) -> Self {
        let c0 = &self.coeffs[0];
        assert!(!c0.is_zero(), "inverse needs a nonzero constant term");
        let n = self.order();
        if c0.is_integer() && c0.numer().abs().is_one() {
            if let Some(b) = self.egf_integers() {
                let binom = binomials(n);
                let mut c = vec![b[0].clone(); n + 1];
                for m in 1..=n {
                    let mut s = BigInt::zero();
                    for k in 1..=m {
                        if !b[k].is_zero() {
                            s += &binom[m][k] * &b[k] * &c[m - k];
                        }
                    }
                    c[m] = -s * &b[0];
                }
                return TruncatedSeries::from_egf_counts(n, &c);
            }
        }
        self.inverse_rational()
    }

    fn inverse_rational(&self) -> Self {
        let n = self.order();
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = inv0.clone();
        for m in 1..=n {
            let mut s = BigRational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s += &self.coeffs[k] * &out[m - k];
                }
            }
            out[m] = -s * &inv0;
        }
        TruncatedSeries { coeffs: out }
    }

    fn mul_rational(&self, rhs: &Self) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates the truncated sum at `x ≥ 0`. Terms are formed in log
    /// space, so huge coefficients with tiny powers of `x` stay finite.
    pub fn eval(&self, x: f64) -> f64 {
        let lx = x.ln();
        let mut total = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k == 0 {
                total += c.to_f64().unwrap();
                continue;
            }
            let mag = (ln_abs(c.numer()) - ln_abs(c.denom()) + k as f64 * lx).exp();
            total += if c.is_negative() { -mag } else { mag };
        }
        total
    }

    /// CSV rows `n,numerator,denominator`, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,numerator,denominator\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{k},{},{}", c.numer(), c.denom()).unwrap();
        }
        out
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), rhs.order());
        TruncatedSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), rhs.order());
        TruncatedSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), rhs.order());
        let n = self.order();
        if let (Some(a), Some(b)) = (self.egf_integers(), rhs.egf_integers()) {
            let binom = binomials(n);
            let out: Vec<BigInt> = (0..=n)
                .map(|m| {
                    let mut s = BigInt::zero();
                    for k in 0..=m {
                        if !a[k].is_zero() && !b[m - k].is_zero() {
                            s += &binom[m][k] * &a[k] * &b[m - k];
                        }
                    }
                    s
                })
                .collect();
            return TruncatedSeries::from_egf_counts(n, &out);
        }
        self.mul_rational(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(order: usize, c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(order, c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn exp_of_z_is_factorial_series() {
        let e = TruncatedSeries::z(6).exp();
        let counts: Vec<BigInt> = (0..=6).map(|k| e.egf_count(k)).collect();
        assert!(counts.iter().all(|c| c.is_one()));
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_z = series(5, &[1, -1]);
        let g = one_minus_z.inverse();
        assert!(g.coeffs().iter().all(|c| c.is_one()));
    }

    #[test]
    fn derivative_and_times_z() {
        let f = series(4, &[1, 2, 3, 4, 5]);
        assert_eq!(f.derivative(), series(4, &[2, 6, 12, 20, 0]));
        assert_eq!(f.times_z(), series(4, &[0, 1, 2, 3, 4]));
        assert_eq!(f.compose_power(2), series(4, &[1, 0, 2, 0, 3]));
    }

    #[test]
    fn exp_at_least_two() {
        let e = TruncatedSeries::z(5).exp_at_least(2);
        assert!(e.coeff(0).is_zero() && e.coeff(1).is_zero());
        assert_eq!(e.egf_count(2), BigInt::one());
    }

    #[test]
    fn eval_handles_huge_coefficients() {
        let mut c = vec![BigRational::zero(); 3001];
        c[3000] = BigRational::from_integer(BigInt::from(4).pow(3000));
        let s = TruncatedSeries::from_coeffs(3000, c);
        assert!((s.eval(0.25) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_dump() {
        let s = TruncatedSeries::from_coeffs(1, vec![rat(1) / rat(2), rat(3)]);
        assert_eq!(s.to_csv(), "n,numerator,denominator\n0,1,2\n1,3,1\n");
    }

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-20i64..20, 8).prop_map(|c| series(7, &c))
    }

    proptest! {
        #[test]
        fn exp_is_a_homomorphism(a in arb_series(), b in arb_series()) {
            let a = &a - &TruncatedSeries::constant(7, a.coeff(0).clone());
            let b = &b - &TruncatedSeries::constant(7, b.coeff(0).clone());
            prop_assert_eq!((&a + &b).exp(), &a.exp() * &b.exp());
        }

        #[test]
        fn inverse_is_inverse(a in arb_series()) {
            let a = &a + &TruncatedSeries::constant(7, rat(100));
            prop_assert_eq!(&a * &a.inverse(), TruncatedSeries::one(7));
        }

        #[test]
        fn integer_paths_match_rational_ones(a in arb_series(), b in arb_series()) {
            let a = &a - &TruncatedSeries::constant(7, a.coeff(0).clone());
            prop_assert!(a.egf_integers().is_some());
            prop_assert_eq!(&a * &b, a.mul_rational(&b));
            prop_assert_eq!(a.exp(), a.exp_rational());
            let unit = &a + &TruncatedSeries::one(7);
            prop_assert_eq!(unit.inverse(), unit.inverse_rational());
            let halves = a.scale(&BigRational::new(1.into(), 2.into()));
            prop_assert_eq!(halves.exp(), halves.exp_rational());
        }

        #[test]
        fn product_rule(a in arb_series(), b in arb_series()) {
            let lhs = (&a * &b).derivative().truncate(6);
            let rhs = (&(&a.derivative() * &b) + &(&a * &b.derivative())).truncate(6);
            prop_assert_eq!(lhs, rhs);
        }
    }
}

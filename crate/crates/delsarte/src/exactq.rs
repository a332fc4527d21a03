//! Exact rational arithmetic and the q-analog kernel.
//!
//! Everything downstream (scheme tables, simplex pivots, certificates)
//! computes in [`Rat`]. The base of a q-analog is itself a `Rat` and may be
//! negative (`b = -q` for Hermitian schemes) or non-integral (`c = 1/q` for
//! alternating forms with even `m`), so all q-functions here are defined over
//! arbitrary rational bases.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Serializes as `num/den` (`den` omitted when 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactqError {
    /// `q = 1` passed to a q-number; the limit is never taken.
    #[error("undefined base: q = 1")]
    UndefinedBase,
    /// A q-binomial denominator factor vanished (base 0 or a root of unity).
    #[error("degenerate base: zero denominator factor for q = {0}")]
    DegenerateBase(String),
    /// `0^e` with `e < 0`.
    #[error("zero to a negative power")]
    ZeroToNegativePower,
}

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    /// `num/den` reduced. Panics on `den = 0`.
    pub fn new<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Self {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Exact integer power; see [`power`] for the checked form.
    pub fn pow(&self, e: i64) -> Self {
        power(self, e).expect("zero base with negative exponent")
    }

    /// Approximate value for display only; exact arithmetic never uses this.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rat {
    type Err = num_rational::ParseRatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Rat(BigRational::from_str(s)?))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rat> for Rat {
    fn div_assign(&mut self, rhs: &Rat) {
        self.0 /= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

/// Exact integer power `x^e`, including negative exponents.
pub fn power(x: &Rat, e: i64) -> Result<Rat, ExactqError> {
    if x.is_zero() {
        return match e {
            0 => Ok(Rat::one()),
            e if e > 0 => Ok(Rat::zero()),
            _ => Err(ExactqError::ZeroToNegativePower),
        };
    }
    let mag = x.0.pow(i32::try_from(e.abs()).expect("exponent out of range"));
    Ok(if e < 0 { Rat(mag.recip()) } else { Rat(mag) })
}

/// The q-number `[n]_q = (q^n - 1)/(q - 1)`.
pub fn q_int(n: u64, q: &Rat) -> Result<Rat, ExactqError> {
    if q.is_one() {
        return Err(ExactqError::UndefinedBase);
    }
    let num = power(q, n as i64)? - Rat::one();
    Ok(num / (q - &Rat::one()))
}

/// The q-Pochhammer symbol `(a; q)_k = prod_{i=0}^{k-1} (1 - a q^i)`.
pub fn q_pochhammer(a: &Rat, k: u64, q: &Rat) -> Rat {
    let mut acc = Rat::one();
    let mut aq = a.clone();
    for _ in 0..k {
        acc *= &(Rat::one() - &aq);
        aq *= q;
    }
    acc
}

/// The q-binomial coefficient by its defining product
/// `prod_{j=1}^{k} (q^{n-j+1} - 1)/(q^j - 1)`; 0 when `k < 0` or `k > n`.
///
/// Computed by the product rather than via Pochhammer quotients so that
/// negative bases never produce a spurious 0/0.
pub fn q_binomial(n: i64, k: i64, q: &Rat) -> Result<Rat, ExactqError> {
    if k < 0 || k > n {
        return Ok(Rat::zero());
    }
    let mut acc = Rat::one();
    for j in 1..=k {
        let num = power(q, n - j + 1)? - Rat::one();
        let den = power(q, j)? - Rat::one();
        if den.is_zero() {
            return Err(ExactqError::DegenerateBase(q.to_string()));
        }
        acc *= &(num / den);
    }
    Ok(acc)
}

/// Ordinary binomial coefficient as an exact rational; 0 when `k < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> Rat {
    if k < 0 || k > n {
        return Rat::zero();
    }
    let mut acc = Rat::one();
    for j in 1..=k {
        acc *= &Rat::new(n - j + 1, j);
    }
    acc
}

/// `x(x-1)/2` for any integer `x` (the exponent `binom(x, 2)` in q-identities).
pub fn binom2(x: i64) -> i64 {
    x * (x - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn q_int_examples() {
        assert_eq!(q_int(0, &r(5, 1)).unwrap(), Rat::zero());
        assert_eq!(q_int(3, &r(2, 1)).unwrap(), Rat::from_int(7));
        assert_eq!(q_int(2, &r(-2, 1)).unwrap(), Rat::from_int(-1));
        assert_eq!(q_int(4, &Rat::one()), Err(ExactqError::UndefinedBase));
    }

    #[test]
    fn pochhammer_examples() {
        let q = r(2, 1);
        assert_eq!(q_pochhammer(&r(7, 3), 0, &q), Rat::one());
        assert_eq!(q_pochhammer(&Rat::one(), 3, &q), Rat::zero());
        assert_eq!(q_pochhammer(&r(2, 1), 2, &q), Rat::from_int(3));
    }

    #[test]
    fn q_binomial_examples() {
        assert_eq!(q_binomial(5, 0, &r(3, 1)).unwrap(), Rat::one());
        assert_eq!(q_binomial(4, 2, &r(2, 1)).unwrap(), Rat::from_int(35));
        assert_eq!(q_binomial(2, 1, &r(-2, 1)).unwrap(), Rat::from_int(-1));
        assert_eq!(q_binomial(3, -1, &r(2, 1)).unwrap(), Rat::zero());
        assert_eq!(q_binomial(3, 4, &r(2, 1)).unwrap(), Rat::zero());
        assert!(matches!(
            q_binomial(3, 2, &Rat::one()),
            Err(ExactqError::DegenerateBase(_))
        ));
        assert!(matches!(
            q_binomial(4, 2, &r(-1, 1)),
            Err(ExactqError::DegenerateBase(_))
        ));
    }

    #[test]
    fn power_examples() {
        assert_eq!(power(&r(7, 2), 0).unwrap(), Rat::one());
        assert_eq!(power(&r(-2, 1), -2).unwrap(), r(1, 4));
        assert_eq!(power(&r(3, 2), 3).unwrap(), r(27, 8));
        assert_eq!(
            power(&Rat::zero(), -1),
            Err(ExactqError::ZeroToNegativePower)
        );
    }

    fn test_bases() -> Vec<Rat> {
        vec![r(2, 1), r(3, 1), r(-2, 1), r(-3, 1), r(4, 1), r(1, 2)]
    }

    #[test]
    fn q_binomial_inversion() {
        // sum_{j=i}^{k} (-1)^{j-i} q^{C(j-i,2)} [j,i][k,j] = delta_{ik}, both
        // orientations of the sign/exponent.
        for q in test_bases() {
            for k in 0..=6i64 {
                for i in 0..=k {
                    let mut s1 = Rat::zero();
                    let mut s2 = Rat::zero();
                    for j in i..=k {
                        let t = q_binomial(j, i, &q).unwrap() * q_binomial(k, j, &q).unwrap();
                        s1 += &(Rat::from_int(if (j - i) % 2 == 0 { 1 } else { -1 })
                            * q.pow(binom2(j - i))
                            * &t);
                        s2 += &(Rat::from_int(if (k - j) % 2 == 0 { 1 } else { -1 })
                            * q.pow(binom2(k - j))
                            * t);
                    }
                    let expect = if i == k { Rat::one() } else { Rat::zero() };
                    assert_eq!(s1, expect, "inversion (j-i) failed q={q} i={i} k={k}");
                    assert_eq!(s2, expect, "inversion (k-j) failed q={q} i={i} k={k}");
                }
            }
        }
    }

    #[test]
    fn pochhammer_index_sum_and_difference() {
        let grid: Vec<Rat> = vec![r(2, 1), r(-2, 1), r(3, 2), r(-1, 3), r(5, 1)];
        for a in &grid {
            for q in test_bases() {
                for n in 0..=6u64 {
                    for k in 0..=6u64 {
                        // (a;q)_{n+k} = (a;q)_n (a q^n; q)_k
                        let lhs = q_pochhammer(a, n + k, &q);
                        let rhs =
                            q_pochhammer(a, n, &q) * q_pochhammer(&(a * &q.pow(n as i64)), k, &q);
                        assert_eq!(lhs, rhs, "index-sum failed a={a} q={q} n={n} k={k}");

                        // (a;q)_{n-k} = (a;q)_n / (a^{-1} q^{1-n}; q)_k
                        //              * (-a)^{-k} q^{C(k,2)-nk+k}   for a != 0, k <= n
                        if k <= n && !a.is_zero() {
                            let den = q_pochhammer(
                                &(a.recip() * q.pow(1 - n as i64)),
                                k,
                                &q,
                            );
                            if den.is_zero() {
                                continue;
                            }
                            let ni = n as i64;
                            let ki = k as i64;
                            let rhs = q_pochhammer(a, n, &q) / den
                                * (-a).pow(-ki)
                                * q.pow(binom2(ki) - ni * ki + ki);
                            assert_eq!(
                                q_pochhammer(a, n - k, &q),
                                rhs,
                                "index-diff failed a={a} q={q} n={n} k={k}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn q_chu_vandermonde() {
        // sum_i q^{i(y-z+i)} [x,i][y,z-i] = [x+y, z]
        for q in test_bases() {
            for x in 0..=5i64 {
                for y in 0..=5i64 {
                    for z in 0..=5i64 {
                        let mut s = Rat::zero();
                        for i in 0..=x {
                            s += &(q.pow(i * (y - z + i))
                                * q_binomial(x, i, &q).unwrap()
                                * q_binomial(y, z - i, &q).unwrap());
                        }
                        assert_eq!(s, q_binomial(x + y, z, &q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn q_binomial_pochhammer_connection() {
        // [n,k]_q = (q^{-n};q)_k / (q;q)_k * (-1)^k q^{kn - C(k,2)}
        for q in test_bases() {
            for n in 0..=6i64 {
                for k in 0..=n {
                    let num = q_pochhammer(&q.pow(-n), k as u64, &q);
                    let den = q_pochhammer(&q, k as u64, &q);
                    let sign = Rat::from_int(if k % 2 == 0 { 1 } else { -1 });
                    let rhs = num / den * sign * q.pow(k * n - binom2(k));
                    assert_eq!(q_binomial(n, k, &q).unwrap(), rhs);
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        for s in ["3", "-3", "1/2", "-7/12", "0"] {
            let v: Rat = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(json, format!("\"{s}\""));
            let back: Rat = serde_json::from_str(&json).unwrap();
            assert_eq!(back, v);
        }
    }

    proptest! {
        #[test]
        fn prop_pochhammer_splits(num in -20i64..20, den in 1i64..8, n in 0u64..8, k in 0u64..8) {
            let a = r(num, den);
            let q = r(-3, 2);
            let lhs = q_pochhammer(&a, n + k, &q);
            let rhs = q_pochhammer(&a, n, &q) * q_pochhammer(&(&a * &q.pow(n as i64)), k, &q);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn prop_power_is_multiplicative(num in -9i64..9, den in 1i64..5, e1 in -6i64..6, e2 in -6i64..6) {
            prop_assume!(num != 0);
            let x = r(num, den);
            prop_assert_eq!(x.pow(e1) * x.pow(e2), x.pow(e1 + e2));
        }
    }
}

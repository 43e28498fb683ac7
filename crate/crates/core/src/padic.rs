//! Exact arithmetic in the additive group `Z[1/p]`.
//!
//! Every value is stored as `num / p^k` in normalized form (`k == 0` or
//! `p` does not divide `num`), so structural equality is value equality.
//! The subgroups `p^n Z` are the amalgamated subgroups of the dense
//! instance; membership is decided through the valuation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime number, checked by trial division at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as an arbitrary-precision integer.
    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }

    /// Largest `v` with `p^v | n`, for `n != 0`.
    pub fn int_valuation(self, n: &BigInt) -> u32 {
        debug_assert!(!n.is_zero());
        let p = self.big();
        let mut n = n.clone();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// p-adic valuation; zero has valuation `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_at_least(self, n: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= n,
            Valuation::Infinity => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// An element `num / p^den_exp` of `Z[1/p]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicRational {
    num: BigInt,
    den_exp: u32,
    p: Prime,
}

impl PAdicRational {
    pub fn new(p: Prime, num: BigInt, den_exp: u32) -> Self {
        let mut x = PAdicRational { num, den_exp, p };
        x.normalize();
        x
    }

    pub fn zero(p: Prime) -> Self {
        PAdicRational {
            num: BigInt::zero(),
            den_exp: 0,
            p,
        }
    }

    pub fn from_int(p: Prime, n: impl Into<BigInt>) -> Self {
        PAdicRational {
            num: n.into(),
            den_exp: 0,
            p,
        }
    }

    /// `num / p^den_exp` from machine integers.
    pub fn from_parts(p: Prime, num: i64, den_exp: u32) -> Self {
        Self::new(p, BigInt::from(num), den_exp)
    }

    /// `p^e` for any integer `e`.
    pub fn prime_power(p: Prime, e: i64) -> Self {
        if e >= 0 {
            Self::from_int(p, p.pow(e as u32))
        } else {
            Self::new(p, BigInt::one(), (-e) as u32)
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den_exp = 0;
            return;
        }
        let pb = self.p.big();
        while self.den_exp > 0 {
            let (q, r) = self.num.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            self.num = q;
            self.den_exp -= 1;
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den_exp == 0
    }

    pub fn valuation(&self) -> Valuation {
        if self.num.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.p.int_valuation(&self.num) as i64 - self.den_exp as i64)
        }
    }

    /// Membership in `p^n Z`.
    pub fn in_power_subgroup(&self, n: u32) -> bool {
        self.valuation().is_at_least(n as i64)
    }

    /// Splits `self = rep + b` with `b` in `p^n Z` and `rep` in `[0, p^n)`.
    pub fn coset_rep(&self, n: u32) -> (PAdicRational, PAdicRational) {
        let modulus = self.p.pow(n + self.den_exp);
        let rep_num = self.num.mod_floor(&modulus);
        let rep = PAdicRational::new(self.p, rep_num, self.den_exp);
        let b = self - &rep;
        (rep, b)
    }

    /// Parses `m` or `m/d` where `d` must be a power of `p`.
    pub fn parse(p: Prime, src: &str) -> Result<Self> {
        let s = src.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: BigInt = num_s
            .parse()
            .map_err(|_| Error::literal(src, "numerator is not an integer"))?;
        let den_exp = match den_s {
            None => 0,
            Some(d) => {
                let den: BigInt = d
                    .parse()
                    .map_err(|_| Error::literal(src, "denominator is not an integer"))?;
                if !den.is_positive() {
                    return Err(Error::literal(src, "denominator must be positive"));
                }
                let e = if den.is_one() {
                    0
                } else {
                    p.int_valuation(&den)
                };
                if p.pow(e) != den {
                    return Err(Error::literal(
                        src,
                        format!("denominator is not a power of {p}"),
                    ));
                }
                e
            }
        };
        Ok(Self::new(p, num, den_exp))
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing values over different primes");
    }

    /// Aligns both values to the common denominator exponent.
    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        self.check_prime(other);
        let k = self.den_exp.max(other.den_exp);
        let a = &self.num * self.p.pow(k - self.den_exp);
        let b = &other.num * self.p.pow(k - other.den_exp);
        (a, b, k)
    }
}

impl fmt::Display for PAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.p.pow(self.den_exp))
        }
    }
}

impl PartialOrd for PAdicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Real ordering of the underlying rationals.
impl Ord for PAdicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Add for &PAdicRational {
    type Output = PAdicRational;

    fn add(self, rhs: &PAdicRational) -> PAdicRational {
        let (a, b, k) = self.aligned(rhs);
        PAdicRational::new(self.p, a + b, k)
    }
}

impl Sub for &PAdicRational {
    type Output = PAdicRational;

    fn sub(self, rhs: &PAdicRational) -> PAdicRational {
        let (a, b, k) = self.aligned(rhs);
        PAdicRational::new(self.p, a - b, k)
    }
}

impl Mul for &PAdicRational {
    type Output = PAdicRational;

    fn mul(self, rhs: &PAdicRational) -> PAdicRational {
        self.check_prime(rhs);
        PAdicRational::new(self.p, &self.num * &rhs.num, self.den_exp + rhs.den_exp)
    }
}

impl Neg for &PAdicRational {
    type Output = PAdicRational;

    fn neg(self) -> PAdicRational {
        PAdicRational {
            num: -&self.num,
            den_exp: self.den_exp,
            p: self.p,
        }
    }
}

impl Add for PAdicRational {
    type Output = PAdicRational;

    fn add(self, rhs: PAdicRational) -> PAdicRational {
        &self + &rhs
    }
}

impl Sub for PAdicRational {
    type Output = PAdicRational;

    fn sub(self, rhs: PAdicRational) -> PAdicRational {
        &self - &rhs
    }
}

impl Neg for PAdicRational {
    type Output = PAdicRational;

    fn neg(self) -> PAdicRational {
        -&self
    }
}

/// A 2x2 matrix over `Z[1/p]`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: PAdicRational,
    pub b: PAdicRational,
    pub c: PAdicRational,
    pub d: PAdicRational,
}

impl Mat2 {
    pub fn identity(p: Prime) -> Self {
        Mat2 {
            a: PAdicRational::from_int(p, 1),
            b: PAdicRational::zero(p),
            c: PAdicRational::zero(p),
            d: PAdicRational::from_int(p, 1),
        }
    }

    /// The matrix `[[1, z], [0, 1]]`.
    pub fn unipotent(z: &PAdicRational) -> Self {
        let p = z.prime();
        Mat2 {
            a: PAdicRational::from_int(p, 1),
            b: z.clone(),
            c: PAdicRational::zero(p),
            d: PAdicRational::from_int(p, 1),
        }
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }

    pub fn det(&self) -> PAdicRational {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn is_unipotent_upper(&self) -> bool {
        let one = PAdicRational::from_int(self.a.prime(), 1);
        self.a == one && self.d == one && self.c.is_zero()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn q(num: i64, den_exp: u32) -> PAdicRational {
        PAdicRational::from_parts(p5(), num, den_exp)
    }

    #[test]
    fn prime_check() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(91), Err(Error::NotPrime(91)));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(&q(2, 1) + &q(3, 1), q(1, 0));
        assert_eq!(&q(7, 1) + &PAdicRational::zero(p5()), q(7, 1));
        assert_eq!(&q(7, 2) + &q(3, 1), q(22, 2));
        assert_eq!((&q(2, 1) + &q(3, 1)).den_exp(), 0);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(q(25, 0).valuation(), Valuation::Finite(2));
        assert_eq!(q(1, 1).valuation(), Valuation::Finite(-1));
        assert_eq!(q(0, 0).valuation(), Valuation::Infinity);
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinity);
    }

    #[test]
    fn coset_rep_examples() {
        assert_eq!(q(7, 1).coset_rep(0), (q(2, 1), q(1, 0)));
        assert_eq!(q(7, 1).coset_rep(1), (q(7, 1), q(0, 0)));
        assert_eq!(q(-1, 0).coset_rep(1), (q(4, 0), q(-5, 0)));
    }

    #[test]
    fn matrix_examples() {
        let id = Mat2::identity(p5());
        assert_eq!(Mat2::unipotent(&q(0, 0)), id);
        assert_eq!(
            Mat2::unipotent(&q(1, 1)).mul(&Mat2::unipotent(&q(2, 1))),
            Mat2::unipotent(&q(3, 1))
        );
        let a = Mat2 {
            a: q(1, 1),
            b: q(-3, 0),
            c: q(7, 2),
            d: q(2, 0),
        };
        assert_eq!(id.mul(&a), a);
        assert_eq!(a.mul(&id), a);
        assert_eq!(a.det(), &q(2, 1) + &q(21, 2));
        assert_eq!(Mat2::unipotent(&q(4, 3)).det(), q(1, 0));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(PAdicRational::parse(p5(), "7/25").unwrap(), q(7, 2));
        assert_eq!(PAdicRational::parse(p5(), " -3 ").unwrap(), q(-3, 0));
        assert_eq!(PAdicRational::parse(p5(), "10/25").unwrap(), q(2, 1));
        assert_eq!(PAdicRational::parse(p5(), "4/1").unwrap(), q(4, 0));
        assert!(matches!(
            PAdicRational::parse(p5(), "1/3"),
            Err(Error::Literal { .. })
        ));
        assert!(PAdicRational::parse(p5(), "1/0").is_err());
        assert!(PAdicRational::parse(p5(), "x").is_err());
        assert_eq!(q(7, 2).to_string(), "7/25");
        assert_eq!(q(-10, 0).to_string(), "-10");
    }

    fn arb(p: Prime) -> impl Strategy<Value = PAdicRational> {
        (-10_000i64..10_000, 0u32..5).prop_map(move |(n, k)| PAdicRational::from_parts(p, n, k))
    }

    fn arb_any() -> impl Strategy<Value = (PAdicRational, PAdicRational, PAdicRational)> {
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7)].prop_flat_map(|p| {
            let p = Prime::new(p).unwrap();
            (arb(p), arb(p), arb(p))
        })
    }

    proptest! {
        #[test]
        fn group_axioms((x, y, z) in arb_any()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert!((&x + &(-&x)).is_zero());
        }

        #[test]
        fn coset_rep_is_idempotent((x, _, _) in arb_any(), n in 0u32..4) {
            let (rep, b) = x.coset_rep(n);
            prop_assert_eq!(&rep + &b, x.clone());
            prop_assert!(b.in_power_subgroup(n) && b.is_integer());
            let p = x.prime();
            prop_assert!(rep >= PAdicRational::zero(p));
            prop_assert!(rep < PAdicRational::from_int(p, p.pow(n)));
            prop_assert_eq!(rep.coset_rep(n).0, rep.clone());
        }

        #[test]
        fn valuation_is_ultrametric((x, y, _) in arb_any()) {
            let (vx, vy, vs) = (x.valuation(), y.valuation(), (&x + &y).valuation());
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn unipotent_is_injective_hom((z, w, _) in arb_any()) {
            let prod = Mat2::unipotent(&z).mul(&Mat2::unipotent(&w));
            prop_assert_eq!(prod.clone(), Mat2::unipotent(&(&z + &w)));
            prop_assert!(prod.is_unipotent_upper());
            prop_assert_eq!(Mat2::unipotent(&z) == Mat2::unipotent(&w), z == w);
        }

        #[test]
        fn display_parse_roundtrip((x, _, _) in arb_any()) {
            prop_assert_eq!(PAdicRational::parse(x.prime(), &x.to_string()).unwrap(), x);
        }
    }
}

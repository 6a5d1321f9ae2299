//! Dyadic rationals `m * 2^e`, the dense set every name approximates with.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;

/// `mantissa * 2^exponent`, kept canonical: the mantissa is odd, or zero with
/// exponent 0. Canonical form makes structural equality value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn shl(m: &BigInt, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    m << k as usize
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz as usize,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigInt::from(n), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiplies by `2^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(shl(&self.mantissa, self.exponent))
        } else {
            // an odd mantissa over a power of two is already in lowest terms
            Rational::new_raw(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    /// Nearest multiple of `2^-p` to `self * q`, without reducing fractions.
    pub fn mul_rational_round(&self, q: &Rational, p: i64) -> Self {
        let mut num = &self.mantissa * q.numer();
        let mut den = q.denom().clone();
        let e = self.exponent + p;
        if e >= 0 {
            num = shl(&num, e);
        } else {
            den = shl(&den, -e);
        }
        let two = BigInt::from(2);
        Self::new((&two * &num + &den).div_floor(&(&two * &den)), -p)
    }

    /// An exponent `e` with `|self| < 2^e`, or `None` for zero.
    pub fn magnitude_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mantissa.bits() as i64 + self.exponent)
        }
    }

    /// Nearest multiple of `2^-p` (ties away from zero); error at most `2^-(p+1)`.
    pub fn round_to(&self, p: i64) -> Self {
        let shift = -p - self.exponent;
        if shift <= 0 {
            return self.clone();
        }
        let half = BigInt::one() << (shift - 1) as usize;
        let q = (self.mantissa.abs() + half) >> shift as usize;
        let q = if self.mantissa.is_negative() { -q } else { q };
        Self::new(q, -p)
    }

    /// Largest multiple of `2^-p` not above `self`.
    pub fn floor_to(&self, p: i64) -> Self {
        let shift = -p - self.exponent;
        if shift <= 0 {
            return self.clone();
        }
        let q = self.mantissa.div_floor(&(BigInt::one() << shift as usize));
        Self::new(q, -p)
    }

    /// Smallest multiple of `2^-p` not below `self`.
    pub fn ceil_to(&self, p: i64) -> Self {
        -(-self).floor_to(p)
    }

    /// Nearest multiple of `2^-p` to the rational `q`.
    pub fn from_rational_round(q: &Rational, p: i64) -> Self {
        let (mut num, mut den) = (q.numer().clone(), q.denom().clone());
        if p >= 0 {
            num = shl(&num, p);
        } else {
            den = shl(&den, -p);
        }
        // round(num/den) = floor((2 num + den) / (2 den))
        let two = BigInt::from(2);
        let k = (&two * &num + &den).div_floor(&(&two * &den));
        Self::new(k, -p)
    }

    /// Largest multiple of `2^-p` not above the rational `q`.
    pub fn from_rational_floor(q: &Rational, p: i64) -> Self {
        let (mut num, mut den) = (q.numer().clone(), q.denom().clone());
        if p >= 0 {
            num = shl(&num, p);
        } else {
            den = shl(&den, -p);
        }
        Self::new(num.div_floor(&den), -p)
    }

    /// `floor(sqrt(self) * 2^p) * 2^-p` for `self >= 0`.
    pub fn sqrt_floor(&self, p: i64) -> Self {
        assert!(!self.is_negative(), "sqrt_floor of a negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let e = self.exponent + 2 * p;
        let scaled = if e >= 0 {
            shl(&self.mantissa, e)
        } else {
            self.mantissa.div_floor(&(BigInt::one() << (-e) as usize))
        };
        Self::new(scaled.sqrt(), -p)
    }

    /// `self / other` rounded to the nearest multiple of `2^-p`.
    pub fn div_round(&self, other: &Dyadic, p: i64) -> Self {
        assert!(!other.is_zero(), "division by a zero dyadic");
        Self::from_rational_round(&(self.to_rational() / other.to_rational()), p)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Decimal rendering rounded to `digits` fractional digits (rounding error
    /// at most `10^-digits / 2`).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = Rational::from_integer(BigInt::from(10).pow(digits as u32));
        let scaled = self.to_rational() * scale;
        let two = BigInt::from(2);
        let k = (&two * scaled.numer() + scaled.denom()).div_floor(&(&two * scaled.denom()));
        let neg = k.is_negative();
        let digits_str = k.abs().to_string();
        let s = if digits == 0 {
            digits_str
        } else {
            let padded = format!("{:0>width$}", digits_str, width = digits + 1);
            let (int, frac) = padded.split_at(padded.len() - digits);
            format!("{int}.{frac}")
        };
        if neg && s.chars().any(|c| c != '0' && c != '.') {
            format!("-{s}")
        } else {
            s
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let a = shl(&self.mantissa, self.exponent - e);
        let b = shl(&other.mantissa, other.exponent - e);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        Dyadic::new(
            shl(&self.mantissa, self.exponent - e) + shl(&other.mantissa, other.exponent - e),
            e,
        )
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, other: &Dyadic) -> Dyadic {
        self + &(-other)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self.exponent + other.exponent,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, other: Dyadic) -> Dyadic {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `m*2^e` or a bare integer `m`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid dyadic `{s}`"));
        let (m, e) = match s.split_once('*') {
            Some((m, rest)) => {
                let e = rest.trim().strip_prefix("2^").ok_or_else(bad)?;
                (m.trim(), e.trim().parse::<i64>().map_err(|_| bad())?)
            }
            None => (s, 0),
        };
        let m: BigInt = m.parse().map_err(|_| bad())?;
        Ok(Dyadic::new(m, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow2, rat};
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        let z = Dyadic::new(BigInt::zero(), 17);
        assert_eq!(z.exponent(), 0);
        assert_eq!(Dyadic::new(BigInt::from(-8), -3), Dyadic::from_int(-1));
    }

    #[test]
    fn text_form_round_trips() {
        let d: Dyadic = "5*2^-4".parse().unwrap();
        assert_eq!(d.to_rational(), rat(5, 16));
        assert_eq!(d.to_string(), "5*2^-4");
        assert_eq!("6".parse::<Dyadic>().unwrap().to_string(), "3*2^1");
        assert!("5*3^2".parse::<Dyadic>().is_err());
    }

    #[test]
    fn rounding_modes() {
        let third = rat(1, 3);
        let d = Dyadic::from_rational_round(&third, 4);
        assert_eq!(d.to_rational(), rat(5, 16));
        let x = Dyadic::from_rational_round(&rat(-11, 16), 10);
        assert_eq!(x.floor_to(2).to_rational(), rat(-3, 4));
        assert_eq!(x.ceil_to(2).to_rational(), rat(-1, 2));
        assert_eq!(x.round_to(2).to_rational(), rat(-3, 4));
    }

    #[test]
    fn sqrt_floor_matches_integer_sqrt() {
        let two = Dyadic::from_int(2);
        let s = two.sqrt_floor(40);
        let sq = s.to_rational() * s.to_rational();
        assert!(sq <= int(2));
        let next = s.to_rational() + pow2(-40);
        assert!(&next * &next > int(2));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Dyadic::from_rational_round(&rat(2, 3), 40).to_decimal(6), "0.666667");
        assert_eq!(Dyadic::from_int(-3).to_decimal(2), "-3.00");
        assert_eq!(Dyadic::from_rational_round(&rat(-1, 1000), 30).to_decimal(2), "0.00");
    }

    proptest! {
        #[test]
        fn arithmetic_matches_rationals(a in -10_000i64..10_000, ea in -40i64..40, b in -10_000i64..10_000, eb in -40i64..40) {
            let x = Dyadic::new(BigInt::from(a), ea);
            let y = Dyadic::new(BigInt::from(b), eb);
            prop_assert_eq!((&x + &y).to_rational(), x.to_rational() + y.to_rational());
            prop_assert_eq!((&x - &y).to_rational(), x.to_rational() - y.to_rational());
            prop_assert_eq!((&x * &y).to_rational(), x.to_rational() * y.to_rational());
            prop_assert_eq!(x.cmp(&y), x.to_rational().cmp(&y.to_rational()));
        }

        #[test]
        fn round_error_is_half_ulp(a in -1_000_000i64..1_000_000, e in -60i64..0, p in 0i64..30) {
            let x = Dyadic::new(BigInt::from(a), e);
            let r = x.round_to(p);
            let err = (r.to_rational() - x.to_rational()).abs();
            prop_assert!(err <= pow2(-p - 1));
        }

        #[test]
        fn scaled_rounding_matches_rationals(a in -1_000_000i64..1_000_000, e in -60i64..20, n in -50i64..50, d in 1i64..50, p in -5i64..40) {
            let x = Dyadic::new(BigInt::from(a), e);
            let q = rat(n, d);
            prop_assert_eq!(x.mul_rational_round(&q, p), Dyadic::from_rational_round(&(x.to_rational() * &q), p));
        }
    }
}

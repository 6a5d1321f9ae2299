//! Helpers for exact rationals: parsing, binary logarithm bounds and
//! rational square-root enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid numerator in rational `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("invalid denominator in rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in rational `{s}`")));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn bits(n: &BigInt) -> i64 {
    n.bits() as i64
}

/// Smallest integer `e` with `q <= 2^e`. Requires `q > 0`.
pub fn ceil_log2(q: &Rational) -> i64 {
    assert!(q.is_positive(), "ceil_log2 of a nonpositive rational");
    let mut e = bits(q.numer()) - bits(q.denom());
    while !le_pow2(q, e) {
        e += 1;
    }
    while le_pow2(q, e - 1) {
        e -= 1;
    }
    e
}

/// Largest integer `e` with `2^e <= q`. Requires `q > 0`.
pub fn floor_log2(q: &Rational) -> i64 {
    assert!(q.is_positive(), "floor_log2 of a nonpositive rational");
    let mut e = bits(q.numer()) - bits(q.denom());
    while !ge_pow2(q, e) {
        e -= 1;
    }
    while ge_pow2(q, e + 1) {
        e += 1;
    }
    e
}

pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn le_pow2(q: &Rational, e: i64) -> bool {
    *q <= pow2(e)
}

fn ge_pow2(q: &Rational, e: i64) -> bool {
    *q >= pow2(e)
}

/// `max(0, ceil_log2(q))`, or 0 for `q <= 0`: the number of extra guard bits a
/// factor bounded by `q` costs.
pub fn guard_bits(q: &Rational) -> u32 {
    if q.is_positive() {
        ceil_log2(q).max(0) as u32
    } else {
        0
    }
}

fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Rational `s >= sqrt(q)`, exact when `q` is the square of a rational,
/// otherwise within `2^-40` relative slack.
pub fn sqrt_upper(q: &Rational) -> Rational {
    sqrt_bound(q, true)
}

/// Rational `0 <= s <= sqrt(q)`, exact when `q` is a rational square.
pub fn sqrt_lower(q: &Rational) -> Rational {
    sqrt_bound(q, false)
}

fn sqrt_bound(q: &Rational, upper: bool) -> Rational {
    assert!(!q.is_negative(), "square root of a negative rational");
    if q.is_zero() {
        return Rational::zero();
    }
    if let (Some(n), Some(d)) = (exact_sqrt_int(q.numer()), exact_sqrt_int(q.denom())) {
        return Rational::new(n, d);
    }
    // Scale so the integer square root carries about 40 significant bits.
    let k = (40 - ceil_log2(q) / 2).max(0) as usize;
    let scaled = q * Rational::from_integer(BigInt::one() << (2 * k));
    let s = if upper {
        let c = scaled.ceil().to_integer();
        let s = c.sqrt();
        if &s * &s < c {
            s + 1
        } else {
            s
        }
    } else {
        scaled.floor().to_integer().sqrt()
    };
    Rational::new(s, BigInt::one() << k)
}

/// `ceil(q)` as a nonnegative machine integer; panics on absurdly large values.
pub fn ceil_usize(q: &Rational) -> usize {
    let c = q.ceil().to_integer();
    if c.is_negative() {
        return 0;
    }
    let (_, digits) = c.to_u64_digits();
    digits.first().copied().unwrap_or(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }

    #[test]
    fn log2_bounds() {
        assert_eq!(ceil_log2(&int(1)), 0);
        assert_eq!(ceil_log2(&int(3)), 2);
        assert_eq!(ceil_log2(&int(4)), 2);
        assert_eq!(ceil_log2(&rat(1, 3)), -1);
        assert_eq!(floor_log2(&rat(1, 3)), -2);
        assert_eq!(floor_log2(&int(4)), 2);
        assert_eq!(floor_log2(&int(5)), 2);
    }

    #[test]
    fn sqrt_enclosures() {
        assert_eq!(sqrt_upper(&int(4)), int(2));
        assert_eq!(sqrt_lower(&rat(9, 16)), rat(3, 4));
        let two = int(2);
        let up = sqrt_upper(&two);
        let lo = sqrt_lower(&two);
        assert!(&up * &up >= two && &lo * &lo <= two);
        assert!(&up - &lo < pow2(-30));
        let ten = int(10);
        let up = sqrt_upper(&ten);
        let lo = sqrt_lower(&ten);
        assert!(&up * &up >= ten && &lo * &lo <= ten && &up - &lo < pow2(-30));
    }
}

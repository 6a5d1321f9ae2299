//! Decimal output with explicit error annotations.

use certframe::rational::{ceil_log2, format_rational};
use certframe::{Rational, RealName, VectorName};
use num_traits::{Signed, Zero};

/// Fractional digits that resolve `2^-(p+1)`: `ceil((p+1) log10 2)`, with
/// `log10 2` rounded up.
pub fn digits(p: u32) -> usize {
    ((p as usize + 1) * 30103).div_ceil(100_000)
}

/// The decimal rounding of `approx(p+1)` is within `2^-p` of `x`.
pub fn decimal(x: &RealName, p: u32) -> String {
    x.approx(p + 1).to_decimal(digits(p))
}

pub fn real(x: &RealName, p: u32) -> String {
    format!("{} ± 2^-{p}", decimal(x, p))
}

/// `(x_0, ..., x_{n-1}) ± 2^-p`, each coordinate within `2^-p`.
pub fn coords(v: &VectorName, n: usize, p: u32) -> String {
    let parts: Vec<String> = (0..n).map(|i| decimal(&v.coeff(i), p)).collect();
    format!("({}) ± 2^-{p}", parts.join(", "))
}

/// `0` or the least power of two above a nonnegative rational.
pub fn pow2_upper(r: &Rational) -> String {
    if r.is_zero() {
        "0".into()
    } else {
        format!("2^{}", ceil_log2(r))
    }
}

/// Upper bound for `q` with six decimals.
pub fn decimal_up(q: &Rational) -> String {
    let scaled = (q * Rational::from_integer(1_000_000.into())).ceil().to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let digits = format!("{:07}", scaled.abs());
    let (int, frac) = digits.split_at(digits.len() - 6);
    format!("{sign}{int}.{frac}")
}

/// Short rationals as they are, long ones as a decimal upper bound.
pub fn upper_bound(q: &Rational) -> String {
    let exact = format_rational(q);
    if exact.len() <= 16 {
        exact
    } else {
        format!("<= {}", decimal_up(q))
    }
}

pub fn rational(q: &Rational) -> String {
    format_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use certframe::rational::rat;

    #[test]
    fn digit_counts() {
        assert_eq!(digits(0), 1);
        assert_eq!(digits(20), 7);
        assert_eq!(digits(30), 10);
        assert_eq!(digits(40), 13);
    }

    #[test]
    fn upward_decimals() {
        assert_eq!(decimal_up(&rat(1, 3)), "0.333334");
        assert_eq!(decimal_up(&rat(2, 1)), "2.000000");
        assert_eq!(decimal_up(&rat(-1, 3)), "-0.333333");
        assert_eq!(upper_bound(&rat(4, 3)), "4/3");
    }

    #[test]
    fn annotated_reals() {
        let third = RealName::from_rational(rat(1, 3));
        let shown = real(&third, 20);
        let (x, note) = shown.split_once(' ').unwrap();
        assert_eq!(note, "± 2^-20");
        let x = certframe::rational::parse_rational(&x.replace("0.", "")).unwrap() / rat(10_000_000, 1);
        assert!((x - rat(1, 3)).abs() <= certframe::rational::pow2(-20));
        assert_eq!(pow2_upper(&rat(3, 1024)), "2^-8");
    }
}

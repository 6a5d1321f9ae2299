//! Names of real numbers: oracles `n -> q` with `|q - x| <= 2^-n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::rational::{ceil_log2, guard_bits, sqrt_upper, Rational};

type Oracle = dyn Fn(u32) -> Dyadic + Send + Sync;

enum Kind {
    Exact(Dyadic),
    Rational(Rational),
    Oracle(Box<Oracle>),
}

struct Inner {
    kind: Kind,
    mag: Rational,
    memo: Mutex<HashMap<u32, Dyadic>>,
}

/// A Cauchy name of a real `x` together with a rational bound `|x| <= mag`.
///
/// Queries are memoized per precision. Oracles are pure, so a value computed
/// concurrently by two threads is the same; the first one stored wins.
#[derive(Clone)]
pub struct RealName {
    inner: Arc<Inner>,
}

/// Binary operations liftable to names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl RealName {
    fn with_kind(kind: Kind, mag: Rational) -> Self {
        RealName {
            inner: Arc::new(Inner {
                kind,
                mag,
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Wraps an oracle. The caller guarantees `|oracle(n) - x| <= 2^-n` and
    /// `|x| <= mag`.
    pub fn from_oracle(mag: Rational, oracle: impl Fn(u32) -> Dyadic + Send + Sync + 'static) -> Self {
        Self::with_kind(Kind::Oracle(Box::new(oracle)), mag)
    }

    pub fn from_dyadic(d: Dyadic) -> Self {
        let mag = d.abs().to_rational();
        Self::with_kind(Kind::Exact(d), mag)
    }

    pub fn from_rational(q: Rational) -> Self {
        if q.denom().is_one_power_of_two() {
            let p = q.denom().bits() as i64 - 1;
            return Self::from_dyadic(Dyadic::from_rational_round(&q, p));
        }
        let mag = q.abs();
        Self::with_kind(Kind::Rational(q), mag)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_dyadic(Dyadic::from_int(n))
    }

    pub fn zero() -> Self {
        Self::from_dyadic(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn mag(&self) -> &Rational {
        &self.inner.mag
    }

    /// The exact value when this name was built from a dyadic constant or
    /// exact arithmetic on such constants.
    pub fn exact(&self) -> Option<&Dyadic> {
        match &self.inner.kind {
            Kind::Exact(d) => Some(d),
            _ => None,
        }
    }

    /// A dyadic within `2^-n` of the represented real. Deterministic.
    pub fn approx(&self, n: u32) -> Dyadic {
        match &self.inner.kind {
            Kind::Exact(d) => d.clone(),
            Kind::Rational(q) => Dyadic::from_rational_round(q, n as i64),
            Kind::Oracle(f) => {
                if let Some(d) = self.inner.memo.lock().unwrap().get(&n) {
                    return d.clone();
                }
                let d = f(n);
                self.inner
                    .memo
                    .lock()
                    .unwrap()
                    .entry(n)
                    .or_insert(d)
                    .clone()
            }
        }
    }

    /// `[approx(n) - 2^-n, approx(n) + 2^-n]`.
    pub fn enclosure(&self, n: u32) -> (Dyadic, Dyadic) {
        let a = self.approx(n);
        let e = Dyadic::pow2(-(n as i64));
        (&a - &e, &a + &e)
    }

    /// Rational upper bound on the represented real, tight to `2^-n`.
    pub fn upper_bound(&self, n: u32) -> Rational {
        self.enclosure(n).1.to_rational()
    }

    pub fn lift_arith(op: ArithOp, x: &RealName, y: &RealName) -> RealName {
        match op {
            ArithOp::Add => x.add(y),
            ArithOp::Sub => x.sub(y),
            ArithOp::Mul => x.mul(y),
        }
    }

    pub fn add(&self, other: &RealName) -> RealName {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return RealName::from_dyadic(a + b);
        }
        let (x, y) = (self.clone(), other.clone());
        let mag = self.mag() + other.mag();
        RealName::from_oracle(mag, move |n| {
            let p = n as i64 + 2;
            (&x.approx(n + 2) + &y.approx(n + 2)).round_to(p)
        })
    }

    pub fn neg(&self) -> RealName {
        if let Some(a) = self.exact() {
            return RealName::from_dyadic(-a);
        }
        let x = self.clone();
        RealName::from_oracle(self.mag().clone(), move |n| -x.approx(n))
    }

    pub fn sub(&self, other: &RealName) -> RealName {
        self.add(&other.neg())
    }

    /// Product. Operands are queried with `ceil(log2(mag_x + mag_y + 2)) + 1`
    /// guard bits, which keeps the product error under `2^-(n+1)`.
    pub fn mul(&self, other: &RealName) -> RealName {
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return RealName::from_dyadic(a * b);
        }
        let (x, y) = (self.clone(), other.clone());
        let guard = guard_bits(&(self.mag() + other.mag() + Rational::from_integer(2.into()))) + 1;
        let mag = self.mag() * other.mag();
        RealName::from_oracle(mag, move |n| {
            let m = n + guard;
            (&x.approx(m) * &y.approx(m)).round_to(n as i64 + 2)
        })
    }

    pub fn square(&self) -> RealName {
        self.mul(self)
    }

    pub fn scale(&self, c: &Rational) -> RealName {
        self.mul(&RealName::from_rational(c.clone()))
    }

    /// `1/x`, given a certificate `|x| >= lower_witness > 0`.
    pub fn recip(&self, lower_witness: &Rational) -> Result<RealName> {
        if !lower_witness.is_positive() {
            return Err(Error::NonPositiveWitness(lower_witness.clone()));
        }
        let w = lower_witness.clone();
        let l = ceil_log2(&(Rational::from_integer(1.into()) / &w)).max(0) as u32;
        let half_w = Dyadic::from_rational_floor(&(&w / Rational::from_integer(2.into())), 64 + 2 * l as i64);
        let x = self.clone();
        let mag = Rational::from_integer(1.into()) / &w;
        Ok(RealName::from_oracle(mag, move |n| {
            let m = (n + 2 + 2 * l).max(1 + l);
            let mut a = x.approx(m);
            // Only reachable when the witness is wrong; keeps the oracle total.
            if a.abs() < half_w {
                a = if a.is_negative() { -half_w.clone() } else { half_w.clone() };
            }
            Dyadic::one().div_round(&a, n as i64 + 1)
        }))
    }

    /// `sqrt(x)` for `x >= 0`. Approximants below zero are clamped to zero,
    /// and `|sqrt(a) - sqrt(b)| <= sqrt(|a - b|)` fixes the query precision.
    pub fn sqrt(&self) -> RealName {
        let mag = sqrt_upper(self.mag());
        let x = self.clone();
        if let Some(d) = self.exact() {
            let d = d.clone().max(Dyadic::zero());
            return RealName::from_oracle(mag, move |n| d.sqrt_floor(n as i64 + 1));
        }
        RealName::from_oracle(mag, move |n| {
            let a = x.approx(2 * n + 2).max(Dyadic::zero());
            a.sqrt_floor(n as i64 + 1)
        })
    }

    /// Limit of a fast Cauchy sequence: the caller guarantees
    /// `|seq(k) - L| <= 2^-k` for every `k`. `mag` bounds `|L|`.
    pub fn limit_fast(mag: Rational, seq: impl Fn(u32) -> RealName + Send + Sync + 'static) -> RealName {
        RealName::from_oracle(mag, move |n| seq(n + 1).approx(n + 1).round_to(n as i64 + 1))
    }
}

trait PowerOfTwo {
    fn is_one_power_of_two(&self) -> bool;
}

impl PowerOfTwo for num_bigint::BigInt {
    fn is_one_power_of_two(&self) -> bool {
        self.is_positive() && self.trailing_zeros() == Some(self.bits() - 1)
    }
}

impl fmt::Debug for RealName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.kind {
            Kind::Exact(d) => write!(f, "RealName({d})"),
            Kind::Rational(q) => write!(f, "RealName({q})"),
            Kind::Oracle(_) => write!(f, "RealName(~{} ±2^-32)", self.approx(32)),
        }
    }
}

impl Default for RealName {
    fn default() -> Self {
        RealName::zero()
    }
}

impl Zero for RealName {
    fn zero() -> Self {
        RealName::zero()
    }

    fn is_zero(&self) -> bool {
        self.exact().is_some_and(Dyadic::is_zero)
    }
}

impl std::ops::Add for RealName {
    type Output = RealName;
    fn add(self, other: RealName) -> RealName {
        RealName::add(&self, &other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow2, rat};

    fn within(d: &Dyadic, x: &Rational, n: u32) -> bool {
        (d.to_rational() - x).abs() <= pow2(-(n as i64))
    }

    #[test]
    fn third_at_precision_four() {
        let x = RealName::from_rational(rat(1, 3));
        assert!(within(&x.approx(4), &rat(1, 3), 4));
        assert_eq!(RealName::zero().approx(9), Dyadic::zero());
    }

    #[test]
    fn geometric_limit_is_four_thirds() {
        // partial sums of sum_i 4^-i; the tail after index k is (1/3) 4^-k <= 2^-k.
        let x = RealName::limit_fast(int(2), |k| {
            let s: Rational = (0..=k as i64).map(|i| pow2(-2 * i)).sum();
            RealName::from_rational(s)
        });
        assert!(within(&x.approx(10), &rat(4, 3), 10));
    }

    #[test]
    fn arithmetic_examples() {
        let half = RealName::from_rational(rat(1, 2));
        assert_eq!(half.add(&half).approx(3).to_rational(), int(1));
        let three = RealName::from_int(3);
        let third = RealName::from_rational(rat(1, 3));
        for n in [0, 5, 30, 64] {
            assert!(within(&three.mul(&third).approx(n), &int(1), n));
        }
        let x = RealName::from_rational(rat(3, 2));
        assert!(within(&x.mul(&x).approx(20), &rat(9, 4), 20));
        assert_eq!(x.mul(&x).mag(), &rat(9, 4));
    }

    #[test]
    fn reciprocal() {
        let two = RealName::from_int(2);
        assert!(within(&two.recip(&int(1)).unwrap().approx(10), &rat(1, 2), 10));
        assert_eq!(RealName::one().recip(&rat(1, 2)).unwrap().approx(7).to_rational(), int(1));
        let third = RealName::from_int(3).recip(&int(2)).unwrap();
        assert!(within(&third.approx(30), &rat(1, 3), 30));
        assert_eq!(third.mag(), &rat(1, 2));
        assert!(RealName::one().recip(&int(0)).is_err());
        assert!(RealName::one().recip(&int(-1)).is_err());
    }

    #[test]
    fn square_roots() {
        for n in [0, 10, 40] {
            assert!(RealName::zero().sqrt().approx(n).is_zero());
        }
        assert!(within(&RealName::from_int(4).sqrt().approx(10), &int(2), 10));
        // Oracle: floor(sqrt(2 * 4^44)) / 2^44 brackets sqrt(2) to 2^-44.
        let s = RealName::from_int(2).sqrt().approx(40).to_rational();
        let lo = Dyadic::from_int(2).sqrt_floor(44).to_rational();
        assert!((s - lo).abs() <= pow2(-40) - pow2(-44));
        // sqrt of a non-exact name at zero still honours the contract
        let tiny = RealName::from_int(1).sub(&RealName::from_rational(rat(1, 3)).mul(&RealName::from_int(3)));
        assert!(tiny.sqrt().approx(20).to_rational() <= pow2(-20));
    }

    #[test]
    fn limit_of_factorial_series() {
        // s(k) = sum_{i=1}^{k+2} 1/i!, tail <= 2/(k+3)! <= 2^-k.
        fn partial(m: u32) -> Rational {
            let mut term = int(1);
            let mut sum = int(0);
            for i in 1..=m {
                term /= int(i as i64);
                sum += &term;
            }
            sum
        }
        let e_minus_one = RealName::limit_fast(int(2), |k| RealName::from_rational(partial(k + 2)));
        let reference = partial(60); // within 1e-80 of e - 1
        for n in [5, 30, 60] {
            assert!((e_minus_one.approx(n).to_rational() - &reference).abs() <= pow2(-(n as i64)) + pow2(-200));
        }
    }

    #[test]
    fn deterministic_and_shareable() {
        let x = RealName::from_int(2).sqrt().mul(&RealName::from_rational(rat(1, 3)));
        let first = x.approx(50);
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let x = x.clone();
                std::thread::spawn(move || x.approx(50))
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), first);
        }
    }
}

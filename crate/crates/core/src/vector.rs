//! Points of l2 in the Fourier representation: coefficients plus a name of
//! the norm.
//!
//! Every [`VectorName`] also answers [`VectorName::approx_vec`]: a finitely
//! supported dyadic vector within `2^-p` in norm. Finite data, coefficient
//! oracles with a norm name, and Cauchy sequences of vectors all reduce to
//! that query, which is what the operator and frame layers consume.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::rational::{ceil_log2, format_rational, guard_bits, parse_rational, pow2, sqrt_upper, Rational};
use crate::real::{ArithOp, RealName};

/// `ceil(log2(len) / 2)`: the extra bits needed so that `len` entry errors of
/// `2^-q` sum in l2 to at most `2^-(q - extra)`.
pub(crate) fn half_log_len(len: usize) -> u32 {
    let ceil_log = usize::BITS - len.max(1).saturating_sub(1).leading_zeros();
    ceil_log.div_ceil(2)
}

/// A finitely supported vector of dyadics, stored densely from index 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DyadicVector {
    entries: Vec<Dyadic>,
}

impl DyadicVector {
    pub fn new(mut entries: Vec<Dyadic>) -> Self {
        while entries.last().is_some_and(Dyadic::is_zero) {
            entries.pop();
        }
        DyadicVector { entries }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// One past the last nonzero index.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Dyadic] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Dyadic {
        self.entries.get(i).cloned().unwrap_or_default()
    }

    pub fn norm_sq(&self) -> Dyadic {
        self.entries.iter().fold(Dyadic::zero(), |acc, x| &acc + &x.square())
    }

    pub fn dot(&self, other: &DyadicVector) -> Dyadic {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Dyadic::zero(), |acc, (x, y)| &acc + &(x * y))
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: &Dyadic, x: &DyadicVector) {
        if a.is_zero() {
            return;
        }
        if self.entries.len() < x.entries.len() {
            self.entries.resize(x.entries.len(), Dyadic::zero());
        }
        for (s, xi) in self.entries.iter_mut().zip(&x.entries) {
            *s = &*s + &(a * xi);
        }
        let trimmed = std::mem::take(&mut self.entries);
        *self = DyadicVector::new(trimmed);
    }

    pub fn sub(&self, other: &DyadicVector) -> DyadicVector {
        let mut out = self.clone();
        out.axpy(&Dyadic::from_int(-1), other);
        out
    }

    /// The first `n` entries.
    pub fn truncated(&self, n: usize) -> DyadicVector {
        DyadicVector::new(self.entries.iter().take(n).cloned().collect())
    }

    /// Rounds every entry; the result is within `2^-(p+1)` in norm.
    pub fn round(&self, p: i64) -> DyadicVector {
        let q = p + half_log_len(self.len()) as i64;
        DyadicVector::new(self.entries.iter().map(|x| x.round_to(q)).collect())
    }

    /// A rational upper bound on the norm.
    pub fn norm_upper(&self) -> Rational {
        sqrt_upper(&self.norm_sq().to_rational())
    }

    pub fn to_finite(&self) -> FiniteVector {
        FiniteVector::new(
            self.entries
                .iter()
                .enumerate()
                .map(|(i, x)| (i, x.to_rational()))
                .collect(),
        )
    }
}

/// An exact, finitely supported vector with rational entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteVector {
    entries: Vec<(usize, Rational)>,
}

impl FiniteVector {
    /// Sorts by index, adds up repeated indices and drops zeros.
    pub fn new(mut entries: Vec<(usize, Rational)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (i, q) in entries {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += q,
                _ => merged.push((i, q)),
            }
        }
        merged.retain(|(_, q)| !q.is_zero());
        FiniteVector { entries: merged }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        Self::new(values.iter().cloned().enumerate().collect())
    }

    pub fn basis(i: usize) -> Self {
        Self::new(vec![(i, Rational::from_integer(1.into()))])
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Rational {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .map(|k| self.entries[k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// One past the largest index in the support.
    pub fn support_len(&self) -> usize {
        self.entries.last().map_or(0, |(i, _)| i + 1)
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len.max(self.support_len())];
        for (i, q) in &self.entries {
            out[*i] = q.clone();
        }
        out
    }

    pub fn norm_sq(&self) -> Rational {
        self.entries.iter().map(|(_, q)| q * q).sum()
    }

    pub fn l1(&self) -> Rational {
        self.entries.iter().map(|(_, q)| q.abs()).sum()
    }

    pub fn dot(&self, other: &FiniteVector) -> Rational {
        self.entries.iter().map(|(i, q)| q * other.get(*i)).sum()
    }

    pub fn scale(&self, c: &Rational) -> FiniteVector {
        FiniteVector::new(self.entries.iter().map(|(i, q)| (*i, q * c)).collect())
    }

    pub fn add(&self, other: &FiniteVector) -> FiniteVector {
        FiniteVector::new(self.entries.iter().chain(&other.entries).cloned().collect())
    }

    pub fn sub(&self, other: &FiniteVector) -> FiniteVector {
        self.add(&other.scale(&Rational::from_integer((-1).into())))
    }
}

impl FromStr for FiniteVector {
    type Err = Error;

    /// Parses `i:p/q` pairs separated by whitespace or commas.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut last: Option<usize> = None;
        for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let (i, q) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `index:rational`, got `{tok}`")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid index in `{tok}`")))?;
            if last.is_some_and(|l| l >= i) {
                return Err(Error::Parse(format!("indices must be strictly ascending at `{tok}`")));
            }
            last = Some(i);
            entries.push((i, parse_rational(q)?));
        }
        Ok(FiniteVector::new(entries))
    }
}

impl fmt::Display for FiniteVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(i, q)| format!("{i}:{}", format_rational(q)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub(crate) type CoeffFn = dyn Fn(usize) -> RealName + Send + Sync;
type ApproxFn = dyn Fn(u32) -> DyadicVector + Send + Sync;

enum Source {
    Finite(Vec<Rational>),
    Reals(Vec<RealName>),
    Fourier { coeff: Arc<CoeffFn>, norm: RealName },
    Cauchy { approx: Box<ApproxFn>, coeff: Option<Arc<CoeffFn>> },
}

struct Inner {
    source: Source,
    mag: Rational,
    approx_memo: Mutex<HashMap<u32, Arc<DyadicVector>>>,
    coeff_memo: Mutex<HashMap<usize, RealName>>,
}

/// A name of a point `x` of l2: its coefficients `<x, e_i>` and its norm.
#[derive(Clone)]
pub struct VectorName {
    inner: Arc<Inner>,
}

impl VectorName {
    fn with_source(source: Source, mag: Rational) -> Self {
        VectorName {
            inner: Arc::new(Inner {
                source,
                mag,
                approx_memo: Mutex::new(HashMap::new()),
                coeff_memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn zero() -> Self {
        Self::from_rationals(Vec::new())
    }

    /// The standard basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        Self::from_finite(&FiniteVector::basis(i))
    }

    pub fn from_finite(v: &FiniteVector) -> Self {
        Self::from_rationals(v.to_dense(0))
    }

    /// The vector with the given leading entries and zeros after them.
    pub fn from_rationals(mut values: Vec<Rational>) -> Self {
        while values.last().is_some_and(Zero::is_zero) {
            values.pop();
        }
        let norm_sq: Rational = values.iter().map(|q| q * q).sum();
        Self::with_source(Source::Finite(values), sqrt_upper(&norm_sq))
    }

    /// Finitely many named entries, zeros after them.
    pub fn from_reals(values: Vec<RealName>) -> Self {
        let sq: Rational = values.iter().map(|x| x.mag() * x.mag()).sum();
        Self::with_source(Source::Reals(values), sqrt_upper(&sq))
    }

    /// The Fourier name proper. The caller guarantees that `norm` names the
    /// l2 norm of the coefficient sequence.
    pub fn from_fourier(coeff: impl Fn(usize) -> RealName + Send + Sync + 'static, norm: RealName) -> Self {
        Self::from_fourier_arc(Arc::new(coeff), norm)
    }

    pub(crate) fn from_fourier_arc(coeff: Arc<CoeffFn>, norm: RealName) -> Self {
        let mag = norm.mag().clone();
        Self::with_source(Source::Fourier { coeff, norm }, mag)
    }

    /// A Cauchy name: `approx(p)` is within `2^-p` of `x` in norm and
    /// `||x|| <= mag`.
    pub fn from_cauchy(mag: Rational, approx: impl Fn(u32) -> DyadicVector + Send + Sync + 'static) -> Self {
        Self::with_source(
            Source::Cauchy {
                approx: Box::new(approx),
                coeff: None,
            },
            mag,
        )
    }

    /// A Cauchy name that also knows its coefficients directly.
    pub fn from_cauchy_with_coeffs(
        mag: Rational,
        approx: impl Fn(u32) -> DyadicVector + Send + Sync + 'static,
        coeff: impl Fn(usize) -> RealName + Send + Sync + 'static,
    ) -> Self {
        Self::with_source(
            Source::Cauchy {
                approx: Box::new(approx),
                coeff: Some(Arc::new(coeff)),
            },
            mag,
        )
    }

    /// Upper bound on the norm.
    pub fn mag(&self) -> &Rational {
        &self.inner.mag
    }

    /// The exact entries when the vector was built from finite rational data.
    pub fn exact_entries(&self) -> Option<&[Rational]> {
        match &self.inner.source {
            Source::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn coeff(&self, i: usize) -> RealName {
        match &self.inner.source {
            Source::Finite(v) => v.get(i).cloned().map_or_else(RealName::zero, RealName::from_rational),
            Source::Reals(v) => v.get(i).cloned().unwrap_or_default(),
            Source::Fourier { coeff, .. } | Source::Cauchy { coeff: Some(coeff), .. } => {
                if let Some(c) = self.inner.coeff_memo.lock().unwrap().get(&i) {
                    return c.clone();
                }
                let c = coeff(i);
                self.inner.coeff_memo.lock().unwrap().entry(i).or_insert(c).clone()
            }
            Source::Cauchy { coeff: None, .. } => {
                let x = self.clone();
                RealName::from_oracle(self.mag().clone(), move |n| x.approx_vec(n).get(i))
            }
        }
    }

    pub fn norm(&self) -> RealName {
        match &self.inner.source {
            Source::Finite(v) => {
                let sq: Rational = v.iter().map(|q| q * q).sum();
                RealName::from_rational(sq).sqrt()
            }
            Source::Fourier { norm, .. } => norm.clone(),
            _ => {
                let x = self.clone();
                RealName::from_oracle(self.mag().clone(), move |n| {
                    x.approx_vec(n + 1).norm_sq().sqrt_floor(n as i64 + 2)
                })
            }
        }
    }

    /// A finitely supported dyadic vector within `2^-p` of `x` in norm.
    /// Deterministic for each `p`.
    pub fn approx_vec(&self, p: u32) -> Arc<DyadicVector> {
        let key = p.div_ceil(4) * 4;
        if let Some(v) = self.inner.approx_memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = Arc::new(self.compute_approx(key));
        self.inner
            .approx_memo
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(v)
            .clone()
    }

    fn compute_approx(&self, p: u32) -> DyadicVector {
        match &self.inner.source {
            Source::Finite(v) => {
                let q = p as i64 + 1 + half_log_len(v.len()) as i64;
                DyadicVector::new(v.iter().map(|x| Dyadic::from_rational_round(x, q)).collect())
            }
            Source::Reals(v) => {
                let q = p + 1 + half_log_len(v.len());
                DyadicVector::new(v.iter().map(|x| x.approx(q)).collect())
            }
            Source::Fourier { norm, .. } => self.fourier_approx(norm, p),
            Source::Cauchy { approx, .. } => approx(p),
        }
    }

    /// Searches for a cut `N` whose certified tail is at most `2^-(p+1)`:
    /// with all values read at precision `m`, `U = (|n| + 2^-m)^2` bounds
    /// `||x||^2` from above and `L_N = sum_{i<N} (|c_i| - 2^-m)_+^2` bounds
    /// the head energy from below, so `U - L_N` bounds the squared tail.
    fn fourier_approx(&self, norm: &RealName, p: u32) -> DyadicVector {
        let target = Dyadic::pow2(-2 * (p as i64 + 1));
        let mag_bits = guard_bits(&(self.mag() + Rational::from_integer(1.into())));
        for round in 0u32.. {
            let cap = 64usize << round.min(24);
            let m = 2 * p + 6 + mag_bits + half_log_len(cap) + 2 * round;
            let err = Dyadic::pow2(-(m as i64));
            let upper = (&norm.approx(m).max(Dyadic::zero()) + &err).square();
            let mut head = Dyadic::zero();
            let mut entries = Vec::new();
            for i in 0..cap {
                if &upper - &head <= target {
                    // error: tail 2^-(p+1), entries sqrt(i) 2^-m, rounding 2^-(p+3)
                    return DyadicVector::new(entries).round(p as i64 + 2);
                }
                let c = self.coeff(i).approx(m);
                let low = &c.abs() - &err;
                if !low.is_negative() {
                    head = &head + &low.square();
                }
                entries.push(c);
            }
            if &upper - &head <= target {
                return DyadicVector::new(entries).round(p as i64 + 2);
            }
        }
        unreachable!("tails of an l2 sequence vanish")
    }

    /// A rational upper bound on `||self - other||`, tight to about `2^-(p-1)`.
    pub fn distance_upper(&self, other: &VectorName, p: u32) -> Rational {
        let d = self.approx_vec(p).sub(&other.approx_vec(p));
        d.norm_upper() + pow2(1 - p as i64)
    }

    /// Forgets the norm, keeping the coefficients and an upper bound.
    pub fn weaken(&self) -> WeakVectorName {
        let x = self.clone();
        WeakVectorName::new(move |i| x.coeff(i), self.mag().clone())
    }

    pub fn scale(&self, c: &RealName) -> VectorName {
        linear_combo(vec![(c.clone(), self.clone())])
    }

    pub fn add(&self, other: &VectorName) -> VectorName {
        linear_combo(vec![(RealName::one(), self.clone()), (RealName::one(), other.clone())])
    }

    pub fn sub(&self, other: &VectorName) -> VectorName {
        linear_combo(vec![(RealName::one(), self.clone()), (RealName::from_int(-1), other.clone())])
    }
}

impl fmt::Debug for VectorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.source {
            Source::Finite(v) => {
                let parts: Vec<String> = v.iter().map(format_rational).collect();
                write!(f, "VectorName([{}])", parts.join(", "))
            }
            _ => write!(f, "VectorName(~{:?} ±2^-32)", self.approx_vec(32).to_finite().to_string()),
        }
    }
}

/// Coefficients of a point of l2 together with only an upper bound on its
/// norm. Tails are not computable from this data, so it cannot stand in for
/// a [`VectorName`].
#[derive(Clone)]
pub struct WeakVectorName {
    coeff: Arc<CoeffFn>,
    memo: Arc<Mutex<HashMap<usize, RealName>>>,
    norm_upper: Rational,
}

impl WeakVectorName {
    pub fn new(coeff: impl Fn(usize) -> RealName + Send + Sync + 'static, norm_upper: Rational) -> Self {
        WeakVectorName {
            coeff: Arc::new(coeff),
            memo: Arc::new(Mutex::new(HashMap::new())),
            norm_upper,
        }
    }

    pub fn coeff(&self, i: usize) -> RealName {
        if let Some(c) = self.memo.lock().unwrap().get(&i) {
            return c.clone();
        }
        let c = (self.coeff)(i);
        self.memo.lock().unwrap().entry(i).or_insert(c).clone()
    }

    pub fn norm_upper(&self) -> &Rational {
        &self.norm_upper
    }
}

impl fmt::Debug for WeakVectorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeakVectorName(norm <= {})", self.norm_upper)
    }
}

/// `||x - P_N x||`, the norm of the coefficients from index `N` on.
pub fn tail_norm(x: &VectorName, n_cut: usize) -> RealName {
    let x = x.clone();
    let mag = x.mag().clone();
    RealName::from_oracle(mag, move |n| {
        let v = x.approx_vec(n + 1);
        let tail = DyadicVector::new(v.entries().iter().skip(n_cut).cloned().collect());
        tail.norm_sq().sqrt_floor(n as i64 + 2)
    })
}

/// An exact finite vector `v` with `||x - v|| <= eps`, and the cut `N` it is
/// supported below.
pub fn truncate(x: &VectorName, eps: &Rational) -> Result<(FiniteVector, usize)> {
    if !eps.is_positive() {
        return Err(Error::NonPositive {
            what: "truncation tolerance",
            value: eps.clone(),
        });
    }
    let p = (-ceil_log2(eps)).max(0) as u32;
    let v = x.approx_vec(p);
    Ok((v.to_finite(), v.len()))
}

/// The inner product. Both vectors are approximated to `eps` with
/// `eps (||x|| + ||y|| + eps) <= 2^-(n+1)`, then the exact dot product is
/// rounded.
pub fn inner(x: &VectorName, y: &VectorName) -> RealName {
    if let (Some(a), Some(b)) = (x.exact_entries(), y.exact_entries()) {
        return RealName::from_rational(a.iter().zip(b).map(|(s, t)| s * t).sum());
    }
    if let Some(a) = x.exact_entries().or_else(|| y.exact_entries()) {
        let other = if x.exact_entries().is_some() { y } else { x };
        if a.iter().filter(|q| !q.is_zero()).count() <= FINITE_INNER_MAX {
            return finite_inner(a, other);
        }
    }
    let mag = x.mag() * y.mag();
    let g = guard_bits(&(x.mag() + y.mag() + Rational::from_integer(1.into())));
    let (x, y) = (x.clone(), y.clone());
    RealName::from_oracle(mag, move |n| {
        let q = n + 1 + g;
        x.approx_vec(q).dot(&y.approx_vec(q)).round_to(n as i64 + 2)
    })
}

const FINITE_INNER_MAX: usize = 256;

/// `sum_j a_j y_j` over the support of `a`, read off the coefficients of `y`.
fn finite_inner(a: &[Rational], y: &VectorName) -> RealName {
    let terms: Vec<(Rational, RealName)> = a
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(j, q)| (q.clone(), y.coeff(j)))
        .collect();
    let one = Rational::from_integer(1.into());
    match terms.as_slice() {
        [] => return RealName::zero(),
        [(q, c)] if *q == one => return c.clone(),
        _ => {}
    }
    let l1: Rational = terms.iter().map(|(q, _)| q.abs()).sum();
    let mag = &l1 * y.mag();
    let g = guard_bits(&l1);
    RealName::from_oracle(mag, move |n| {
        let sum: Rational = terms.iter().map(|(q, c)| q * c.approx(n + 1 + g).to_rational()).sum();
        Dyadic::from_rational_round(&sum, n as i64 + 1)
    })
}

/// `sum_k c_k x_k` for finitely many terms.
pub fn linear_combo(terms: Vec<(RealName, VectorName)>) -> VectorName {
    if terms.is_empty() {
        return VectorName::zero();
    }
    if terms.iter().all(|(c, x)| c.exact().is_some() && x.exact_entries().is_some()) {
        let mut acc: Vec<Rational> = Vec::new();
        for (c, x) in &terms {
            let c = c.exact().unwrap().to_rational();
            let v = x.exact_entries().unwrap();
            if acc.len() < v.len() {
                acc.resize(v.len(), Rational::zero());
            }
            for (a, q) in acc.iter_mut().zip(v) {
                *a += &c * q;
            }
        }
        return VectorName::from_rationals(acc);
    }
    let mag: Rational = terms.iter().map(|(c, x)| c.mag() * x.mag()).sum();
    let one = Rational::from_integer(1.into());
    let g = guard_bits(&Rational::from_integer(terms.len().into()));
    let terms = Arc::new(terms);
    let for_coeff = terms.clone();
    let bits: Vec<(u32, u32)> = terms
        .iter()
        .map(|(c, x)| (guard_bits(&(x.mag() + &one)), guard_bits(&(c.mag() + &one))))
        .collect();
    VectorName::from_cauchy_with_coeffs(
        mag,
        move |p| {
            // each term within 2^-(p+1+g), rounding adds 2^-(p+2)
            let mut acc = DyadicVector::zero();
            for ((c, x), (cb, xb)) in terms.iter().zip(&bits) {
                let base = p + 2 + g;
                acc.axpy(&c.approx(base + cb), &x.approx_vec(base + xb));
            }
            acc.round(p as i64 + 1)
        },
        move |i| {
            for_coeff
                .iter()
                .map(|(c, x)| RealName::lift_arith(ArithOp::Mul, c, &x.coeff(i)))
                .reduce(|a, b| RealName::lift_arith(ArithOp::Add, &a, &b))
                .unwrap_or_default()
        },
    )
}

/// The limit of `s(k)` given `||s(k) - L|| <= 2^-k`; `mag` bounds `||L||`.
pub fn limit_vectors(mag: Rational, s: impl Fn(u32) -> VectorName + Send + Sync + 'static) -> VectorName {
    VectorName::from_cauchy(mag, move |p| (*s(p + 1).approx_vec(p + 1)).clone())
}

/// Pairs weak coefficient data with a norm certificate. Only a cheap sanity
/// check on the magnitudes is possible.
pub fn strengthen(w: &WeakVectorName, norm: RealName) -> Result<VectorName> {
    let limit = w.norm_upper() + Rational::from_integer(1.into());
    if *norm.mag() > limit {
        return Err(Error::NormCertificateTooLarge {
            mag: norm.mag().clone(),
            upper: w.norm_upper().clone(),
        });
    }
    let w = w.clone();
    Ok(VectorName::from_fourier(move |i| w.coeff(i), norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, sqrt_lower};

    fn close(x: &RealName, v: &Rational, n: u32) -> bool {
        (x.approx(n).to_rational() - v).abs() <= pow2(-(n as i64))
    }

    /// `x_i = 2^-(i+1)` with norm `sqrt(1/3)`.
    fn geometric() -> VectorName {
        VectorName::from_fourier(
            |i| RealName::from_dyadic(Dyadic::pow2(-(i as i64) - 1)),
            RealName::from_rational(rat(1, 3)).sqrt(),
        )
    }

    #[test]
    fn finite_vector_text_round_trip() {
        let v: FiniteVector = "0:1/2 3:-2, 7:0".parse().unwrap();
        assert_eq!(v.entries().len(), 2);
        assert_eq!(v.to_string(), "0:1/2 3:-2");
        assert_eq!(v.support_len(), 4);
        assert!("2:1 1:1".parse::<FiniteVector>().is_err());
        assert!("x".parse::<FiniteVector>().is_err());
        assert!("0:1/0".parse::<FiniteVector>().is_err());
    }

    #[test]
    fn tail_norm_examples() {
        assert!(close(&tail_norm(&VectorName::basis(0), 1), &int(0), 30));
        assert!(close(&tail_norm(&VectorName::basis(5), 1), &int(1), 30));
        // oracle: 1/3 - 1/4 - 1/16 = 1/48, enclosed by rational square roots
        let t = tail_norm(&geometric(), 2).approx(30).to_rational();
        let exact_lo = sqrt_lower(&rat(1, 48));
        let exact_hi = sqrt_upper(&rat(1, 48));
        assert!(t >= exact_lo - pow2(-30) && t <= exact_hi + pow2(-30));
    }

    #[test]
    fn truncate_examples() {
        let (v, n) = truncate(&VectorName::basis(3), &rat(1, 4)).unwrap();
        assert!(n >= 4);
        assert!((v.get(3) - int(1)).abs() <= rat(1, 8));
        let (v, _) = truncate(&VectorName::zero(), &int(1)).unwrap();
        assert!(v.is_zero());
        let eps = pow2(-10);
        let (v, n) = truncate(&geometric(), &eps).unwrap();
        assert!(n <= 13);
        // exact residual: head errors plus the tail 4^-n / 3
        let head: Rational = (0..n).map(|i| (v.get(i) - pow2(-(i as i64) - 1)).pow(2)).sum();
        let tail = pow2(-2 * n as i64) / int(3);
        assert!(head + tail <= &eps * &eps);
        assert!(truncate(&geometric(), &int(0)).is_err());
    }

    #[test]
    fn inner_examples() {
        assert!(close(&inner(&VectorName::basis(2), &VectorName::basis(2)), &int(1), 30));
        assert!(close(&inner(&VectorName::basis(1), &VectorName::basis(2)), &int(0), 30));
        let s = RealName::from_int(2).sqrt().recip(&int(1)).unwrap();
        let x = VectorName::from_reals(vec![s.clone(), s]);
        let y = VectorName::from_rationals(vec![int(1), int(-1)]);
        assert!(close(&inner(&x, &y), &int(0), 30));
        assert!(close(&inner(&geometric(), &geometric()), &rat(1, 3), 40));
    }

    #[test]
    fn linear_combo_examples() {
        let e0 = VectorName::basis(0);
        let e1 = VectorName::basis(1);
        let v = linear_combo(vec![(RealName::one(), e0.clone()), (RealName::one(), e1.clone())]);
        let n = v.norm().approx(20).to_rational();
        assert!((&n * &n - int(2)).abs() <= pow2(-18));
        assert!(linear_combo(vec![(RealName::zero(), geometric())]).approx_vec(20).is_empty());
        let w = linear_combo(vec![
            (RealName::from_int(2), e0),
            (RealName::from_int(-3), e1.clone()),
            (RealName::one(), e1),
        ]);
        assert_eq!(w.exact_entries().unwrap(), &[int(2), int(-2)]);
        let root8 = RealName::from_int(8).sqrt();
        assert!((w.norm().approx(30).to_rational() - root8.approx(40).to_rational()).abs() <= pow2(-29));
        // non-exact path
        let g = linear_combo(vec![(RealName::from_rational(rat(1, 3)), geometric()), (RealName::one(), VectorName::basis(0))]);
        assert!(close(&g.coeff(0), &(rat(1, 6) + int(1)), 30));
        assert!(close(&g.coeff(4), &rat(1, 96), 30));
    }

    #[test]
    fn limit_vector_examples() {
        let c = limit_vectors(int(1), |_| VectorName::basis(0));
        assert!(c.distance_upper(&VectorName::basis(0), 40) <= pow2(-38));
        let g = limit_vectors(int(1), |k| {
            VectorName::from_rationals((0..=k as i64).map(|i| pow2(-i - 1)).collect())
        });
        assert!(g.distance_upper(&geometric(), 40) <= pow2(-38));
        assert!(close(&g.norm(), &sqrt_lower(&rat(1, 3)), 30));
        let e7 = limit_vectors(int(1), |k| {
            VectorName::basis(7).scale(&RealName::from_rational(int(1) - pow2(-(k as i64))))
        });
        assert!(e7.distance_upper(&VectorName::basis(7), 40) <= pow2(-38));
    }

    #[test]
    fn strengthen_examples() {
        let w = VectorName::basis(0).weaken();
        let w = WeakVectorName::new(move |i| w.coeff(i), int(2));
        let e0 = strengthen(&w, RealName::one()).unwrap();
        assert!(e0.distance_upper(&VectorName::basis(0), 40) <= pow2(-38));
        let z = strengthen(&WeakVectorName::new(|_| RealName::zero(), int(0)), RealName::zero()).unwrap();
        assert!(z.approx_vec(30).is_empty());
        let row = WeakVectorName::new(|i| RealName::from_dyadic(Dyadic::pow2(-(i as i64))), int(2));
        let full = strengthen(&row, RealName::from_rational(rat(4, 3)).sqrt()).unwrap();
        assert!(close(&tail_norm(&full, 1), &sqrt_lower(&rat(1, 3)), 30));
        assert!(strengthen(&row, RealName::from_int(5)).is_err());
    }

    #[test]
    fn fourier_approx_is_within_precision() {
        let g = geometric();
        for p in [0, 7, 20, 45] {
            let v = g.approx_vec(p);
            let head: Rational = (0..v.len()).map(|i| (v.get(i).to_rational() - pow2(-(i as i64) - 1)).pow(2)).sum();
            let tail = pow2(-2 * v.len() as i64) / int(3);
            assert!(head + tail <= pow2(-2 * p as i64));
        }
    }
}

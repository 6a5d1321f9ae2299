//! Bounded operators on l2 given by their columns `U e_k` and a norm bound.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::rational::{guard_bits, sqrt_upper, Rational};
use crate::real::RealName;
use crate::vector::{linear_combo, DyadicVector, VectorName};

type ColFn = dyn Fn(usize) -> VectorName + Send + Sync;

/// Exact rational columns, followed either by zeros or by the identity.
#[derive(Clone)]
struct ExactColumns {
    cols: Arc<Vec<Vec<Rational>>>,
    identity_tail: bool,
}

impl ExactColumns {
    fn column(&self, k: usize) -> Vec<Rational> {
        match self.cols.get(k) {
            Some(c) => c.clone(),
            None if self.identity_tail => {
                let mut e = vec![Rational::zero(); k + 1];
                e[k] = Rational::from_integer(1.into());
                e
            }
            None => Vec::new(),
        }
    }

    fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            let c = self.column(k);
            if out.len() < c.len() {
                out.resize(c.len(), Rational::zero());
            }
            for (o, ck) in out.iter_mut().zip(&c) {
                *o += xk * ck;
            }
        }
        out
    }
}

#[derive(Clone)]
enum Kind {
    Identity,
    Exact(ExactColumns),
    Columns(Arc<ColFn>),
}

/// A name of a bounded operator `U`: the columns `U e_k` as vector names and
/// a rational `norm_bound >= ||U||`.
#[derive(Clone)]
pub struct OperatorName {
    kind: Kind,
    memo: Arc<Mutex<HashMap<usize, VectorName>>>,
    norm_bound: Rational,
    domain_dim: Option<usize>,
    codomain_dim: Option<usize>,
}

impl OperatorName {
    fn with_kind(kind: Kind, norm_bound: Rational) -> Self {
        OperatorName {
            kind,
            memo: Arc::new(Mutex::new(HashMap::new())),
            norm_bound,
            domain_dim: None,
            codomain_dim: None,
        }
    }

    /// The operator with the given columns. The caller guarantees
    /// `||U|| <= norm_bound`.
    pub fn from_columns(norm_bound: Rational, col: impl Fn(usize) -> VectorName + Send + Sync + 'static) -> Self {
        Self::with_kind(Kind::Columns(Arc::new(col)), norm_bound)
    }

    pub fn identity() -> Self {
        Self::with_kind(Kind::Identity, Rational::from_integer(1.into()))
    }

    pub fn zero() -> Self {
        Self::with_kind(
            Kind::Exact(ExactColumns {
                cols: Arc::new(Vec::new()),
                identity_tail: false,
            }),
            Rational::zero(),
        )
    }

    /// A rational `r x c` matrix (row-major) acting on the first `c`
    /// coordinates; the bound is the Frobenius norm.
    pub fn from_finite_matrix(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = transpose(rows)?;
        let frob: Rational = rows.iter().flatten().map(|q| q * q).sum();
        let mut op = Self::with_kind(
            Kind::Exact(ExactColumns {
                cols: Arc::new(cols),
                identity_tail: false,
            }),
            sqrt_upper(&frob),
        );
        op.domain_dim = Some(rows[0].len());
        op.codomain_dim = Some(rows.len());
        Ok(op)
    }

    /// `M ⊕ I` for a square rational matrix `M`. The bound is the smaller of
    /// the Frobenius and Schur bounds on `M`, and at least 1.
    pub fn block_plus_identity(m: &[Vec<Rational>]) -> Result<Self> {
        let cols = transpose(m)?;
        if cols.len() != m.len() {
            return Err(Error::Dimension(format!("block must be square, got {}x{}", m.len(), cols.len())));
        }
        let frob: Rational = m.iter().flatten().map(|q| q * q).sum();
        let max_row = m.iter().map(|r| r.iter().map(|q| q.abs()).sum::<Rational>()).max().unwrap();
        let max_col = cols.iter().map(|c| c.iter().map(|q| q.abs()).sum::<Rational>()).max().unwrap();
        let one = Rational::from_integer(1.into());
        let bound = sqrt_upper(&frob).min(sqrt_upper(&(max_row * max_col))).max(one);
        Ok(Self::with_kind(
            Kind::Exact(ExactColumns {
                cols: Arc::new(cols),
                identity_tail: true,
            }),
            bound,
        ))
    }

    /// The adjoint `U*` supplied through its columns `U* e_n`, i.e. the rows
    /// of `U` as full l2 names.
    pub fn banded_adjoint(rows: impl Fn(usize) -> VectorName + Send + Sync + 'static, norm_bound: Rational) -> Self {
        Self::from_columns(norm_bound, rows)
    }

    pub fn with_norm_bound(mut self, norm_bound: Rational) -> Self {
        self.norm_bound = norm_bound;
        self
    }

    pub fn with_dims(mut self, domain: Option<usize>, codomain: Option<usize>) -> Self {
        self.domain_dim = domain;
        self.codomain_dim = codomain;
        self
    }

    pub fn norm_bound(&self) -> &Rational {
        &self.norm_bound
    }

    pub fn domain_dim(&self) -> Option<usize> {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> Option<usize> {
        self.codomain_dim
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, Kind::Identity)
    }

    /// `U e_k`.
    pub fn col(&self, k: usize) -> VectorName {
        match &self.kind {
            Kind::Identity => VectorName::basis(k),
            Kind::Exact(e) => VectorName::from_rationals(e.column(k)),
            Kind::Columns(f) => {
                if let Some(c) = self.memo.lock().unwrap().get(&k) {
                    return c.clone();
                }
                let c = f(k);
                self.memo.lock().unwrap().entry(k).or_insert(c).clone()
            }
        }
    }

    /// The matrix entry `<e_l, U e_k>`.
    pub fn entry(&self, l: usize, k: usize) -> RealName {
        self.col(k).coeff(l)
    }

    /// `U v` for a finitely supported dyadic `v`, within `2^-p`. Columns are
    /// read to `2^-(p+1) / ||v||_1` and the sum is rounded.
    pub fn apply_finite(&self, v: &DyadicVector, p: u32) -> DyadicVector {
        if self.is_identity() {
            return v.clone();
        }
        let l1 = v.entries().iter().fold(Dyadic::zero(), |acc, x| &acc + &x.abs()).to_rational();
        if l1.is_zero() {
            return DyadicVector::zero();
        }
        let q = p + 1 + guard_bits(&l1);
        let cols: Vec<(&Dyadic, Arc<DyadicVector>)> = v
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, vk)| !vk.is_zero())
            .map(|(k, vk)| (vk, self.col(k).approx_vec(q)))
            .collect();
        // exact accumulation on the finest grid that occurs
        let low = cols
            .iter()
            .flat_map(|(vk, c)| c.entries().iter().filter(|x| !x.is_zero()).map(move |x| vk.exponent() + x.exponent()))
            .min();
        let Some(low) = low else {
            return DyadicVector::zero();
        };
        let len = cols.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
        let mut acc = vec![BigInt::zero(); len];
        for (vk, c) in &cols {
            for (a, x) in acc.iter_mut().zip(c.entries()) {
                if !x.is_zero() {
                    *a += (vk.mantissa() * x.mantissa()) << (vk.exponent() + x.exponent() - low) as usize;
                }
            }
        }
        DyadicVector::new(acc.into_iter().map(|m| Dyadic::new(m, low)).collect()).round(p as i64 + 1)
    }

    /// The exact image of exact finite data, when the columns are exact.
    fn apply_exact(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        match &self.kind {
            Kind::Identity => Some(x.to_vec()),
            Kind::Exact(e) => Some(e.apply(x)),
            Kind::Columns(_) => None,
        }
    }
}

fn transpose(rows: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let c = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || c == 0 {
        return Err(Error::EmptyMatrix);
    }
    if rows.iter().any(|r| r.len() != c) {
        return Err(Error::RaggedMatrix);
    }
    Ok((0..c).map(|k| rows.iter().map(|r| r[k].clone()).collect()).collect())
}

/// `U x`. The input is truncated so that the norm bound absorbs its tail
/// (half the budget), and the finite part is pushed through the columns
/// (the other half).
pub fn apply(u: &OperatorName, x: &VectorName) -> VectorName {
    if u.is_identity() {
        return x.clone();
    }
    if let Some(v) = x.exact_entries().and_then(|v| u.apply_exact(v)) {
        return VectorName::from_rationals(v);
    }
    let mag = u.norm_bound() * x.mag();
    let g = guard_bits(u.norm_bound());
    let (u, x) = (u.clone(), x.clone());
    VectorName::from_cauchy(mag, move |p| {
        let head = x.approx_vec(p + 1 + g);
        u.apply_finite(&head, p + 1)
    })
}

/// `U V`; the bound is the product of the bounds.
pub fn compose(u: &OperatorName, v: &OperatorName) -> OperatorName {
    if u.is_identity() {
        return v.clone();
    }
    if v.is_identity() {
        return u.clone();
    }
    let nb = u.norm_bound() * v.norm_bound();
    let dims = (v.domain_dim, u.codomain_dim);
    if let (Kind::Exact(a), Kind::Exact(b)) = (&u.kind, &v.kind) {
        if !a.identity_tail && !b.identity_tail {
            let cols = b.cols.iter().map(|c| a.apply(c)).collect();
            return OperatorName::with_kind(
                Kind::Exact(ExactColumns {
                    cols: Arc::new(cols),
                    identity_tail: false,
                }),
                nb,
            )
            .with_dims(dims.0, dims.1);
        }
    }
    let (a, b) = (u.clone(), v.clone());
    OperatorName::from_columns(nb, move |k| apply(&a, &b.col(k))).with_dims(dims.0, dims.1)
}

/// `sum_i c_i U_i` with rational weights.
pub fn linear_combination(terms: &[(Rational, OperatorName)]) -> OperatorName {
    let nb: Rational = terms.iter().map(|(c, u)| c.abs() * u.norm_bound()).sum();
    let terms: Vec<(RealName, OperatorName)> = terms
        .iter()
        .map(|(c, u)| (RealName::from_rational(c.clone()), u.clone()))
        .collect();
    OperatorName::from_columns(nb, move |k| {
        linear_combo(terms.iter().map(|(c, u)| (c.clone(), u.col(k))).collect())
    })
}

impl fmt::Debug for OperatorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            Kind::Identity => "identity",
            Kind::Exact(_) => "exact",
            Kind::Columns(_) => "columns",
        };
        write!(f, "OperatorName({kind}, ||U|| <= {})", self.norm_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::rational::{int, pow2, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn identity_and_zero() {
        let g = VectorName::from_fourier(
            |i| RealName::from_dyadic(Dyadic::pow2(-(i as i64) - 1)),
            RealName::from_rational(rat(1, 3)).sqrt(),
        );
        assert!(apply(&OperatorName::identity(), &g).distance_upper(&g, 40) <= pow2(-38));
        assert!(apply(&OperatorName::zero(), &g).approx_vec(30).is_empty());
        let zero_matrix = OperatorName::from_finite_matrix(&m(&[&[0]])).unwrap();
        assert!(apply(&zero_matrix, &VectorName::basis(0)).approx_vec(10).is_empty());
    }

    #[test]
    fn finite_matrices() {
        let i2 = OperatorName::from_finite_matrix(&m(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(apply(&i2, &VectorName::basis(1)).exact_entries().unwrap(), &[int(0), int(1)]);
        assert!(apply(&i2, &VectorName::basis(2)).approx_vec(8).is_empty());
        let s = OperatorName::from_finite_matrix(&m(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(s.col(0).exact_entries().unwrap(), &[int(2), int(1)]);
        let b = s.norm_bound();
        assert!(b * b >= int(10) && b * b - int(10) < pow2(-30));
        assert_eq!(OperatorName::from_finite_matrix(&[]).unwrap_err(), Error::EmptyMatrix);
        assert_eq!(
            OperatorName::from_finite_matrix(&[vec![int(1)], vec![]]).unwrap_err(),
            Error::RaggedMatrix
        );
    }

    #[test]
    fn block_plus_identity_bound() {
        let d = OperatorName::block_plus_identity(&m(&[&[2]])).unwrap();
        assert_eq!(d.norm_bound(), &int(2));
        assert_eq!(d.col(5).exact_entries().unwrap().len(), 6);
        assert!(OperatorName::block_plus_identity(&m(&[&[1, 2]])).is_err());
    }

    #[test]
    fn compose_matches_product() {
        let a = OperatorName::from_finite_matrix(&m(&[&[1, 2], &[3, 4]])).unwrap();
        let b = OperatorName::from_finite_matrix(&m(&[&[0, 1], &[1, 1]])).unwrap();
        let ab = compose(&a, &b);
        assert_eq!(ab.col(0).exact_entries().unwrap(), &[int(2), int(4)]);
        assert_eq!(ab.col(1).exact_entries().unwrap(), &[int(3), int(7)]);
        assert!(compose(&a, &OperatorName::zero()).col(1).approx_vec(9).is_empty());
        let i_a = compose(&OperatorName::identity(), &a);
        assert_eq!(i_a.col(1).exact_entries(), a.col(1).exact_entries());
    }

    #[test]
    fn apply_through_lazy_columns() {
        // columns given lazily: U e_0 = e_0, U e_i = 2^-i e_0 + e_i
        let u = OperatorName::from_columns(int(3), |k| {
            if k == 0 {
                VectorName::basis(0)
            } else {
                let mut v = vec![Rational::zero(); k + 1];
                v[0] = pow2(-(k as i64));
                v[k] = int(1);
                VectorName::from_rationals(v)
            }
        });
        let y = apply(&u, &VectorName::basis(1));
        assert!(y.distance_upper(&VectorName::from_rationals(vec![rat(1, 2), int(1)]), 40) <= pow2(-38));
        let n = y.norm().approx(30).to_rational();
        assert!((&n * &n - rat(5, 4)).abs() <= pow2(-28));
        let third = VectorName::basis(1).scale(&RealName::from_rational(rat(1, 3)));
        let z = apply(&u, &third);
        assert!((z.coeff(0).approx(30).to_rational() - rat(1, 6)).abs() <= pow2(-30));
    }
}

//! Exact rational ground truth for finite frames in `Q^d`.
//!
//! Everything here is computed with exact rationals: the frame operator, its
//! inverse by Gauss-Jordan elimination, canonical duals, Gram-type matrices,
//! and enclosures of the optimal frame bounds obtained by Sturm-sequence
//! bisection on the characteristic polynomial of `S`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frame::{CertifiedFrame, Frame};
use crate::operator::OperatorName;
use crate::rational::{ceil_log2, pow2, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// Finitely many vectors of `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactFrame {
    vectors: Vec<Vec<Rational>>,
    d: usize,
}

impl ExactFrame {
    pub fn new(vectors: Vec<Vec<Rational>>, d: usize) -> Result<Self> {
        if vectors.is_empty() || d == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::Dimension(format!("expected vectors of length {d}, got {}", v.len())));
        }
        Ok(ExactFrame { vectors, d })
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The `d x m` matrix with the vectors as columns.
    pub fn synthesis_matrix(&self) -> Matrix {
        transpose(&self.vectors)
    }
}

/// Rational enclosures `A in [a_lo, a_hi]`, `B in [b_lo, b_hi]` of the optimal
/// frame bounds (the extreme eigenvalues of `S`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsEnclosure {
    pub a_lo: Rational,
    pub a_hi: Rational,
    pub b_lo: Rational,
    pub b_hi: Rational,
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub s: Matrix,
    pub s_inv: Matrix,
    /// `S^-1 f_k`, one row per frame vector.
    pub duals: Matrix,
    /// `M_{nk} = <f_n, S^-1 f_k>`, the matrix of the projection onto the
    /// range of `T*`.
    pub projection: Matrix,
    pub bounds: BoundsEnclosure,
}

pub fn transpose(m: &[Vec<Rational>]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let bt = transpose(b);
    a.iter()
        .map(|r| bt.iter().map(|c| dot(r, c)).collect())
        .collect()
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|r| dot(r, x)).collect()
}

pub fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Gauss-Jordan inverse; `None` for singular input.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..a.len() {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[rank][col];
                let pivot_row = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Polynomials as coefficient vectors, lowest degree first, without trailing
/// zeros.
type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// `det(x I - m)` by the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk: Matrix = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let amk = mat_mul(m, &mk);
        let tr: Rational = (0..n).map(|i| amk[i][i].clone()).sum();
        coeffs[n - k] = -tr / Rational::from_integer((k as i64).into());
    }
    coeffs
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rational]) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
            .collect(),
    )
}

/// Quotient and remainder of polynomial division.
fn div_rem(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Sturm chain of the square-free part of `p`.
fn sturm_chain(p: &[Rational]) -> Vec<Poly> {
    let g = gcd(p, &derivative(p));
    let (q, _) = div_rem(p, &g);
    let mut chain = vec![q.clone(), derivative(&q)];
    while chain.last().is_some_and(|c| !c.is_empty()) {
        let n = chain.len();
        let (_, r) = div_rem(&chain[n - 2], &chain[n - 1]);
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain.pop();
    chain
}

fn sign_changes(chain: &[Poly], x: &Rational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct roots of `p` in `(lo, hi]`.
pub fn roots_in(p: &[Rational], lo: &Rational, hi: &Rational) -> usize {
    let chain = sturm_chain(p);
    sign_changes(&chain, lo) - sign_changes(&chain, hi)
}

/// Encloses the smallest and the largest root of `p` inside `(0, top]` to
/// width at most `2^-bits`. A midpoint that is itself a root collapses the
/// enclosure to a point.
fn extreme_roots(p: &[Rational], top: &Rational, bits: i64) -> (Rational, Rational, Rational, Rational) {
    let chain = sturm_chain(p);
    let count = |a: &Rational, b: &Rational| sign_changes(&chain, a) - sign_changes(&chain, b);
    let width = pow2(-bits);
    let two = Rational::from_integer(2.into());
    // smallest root: no root in (0, lo], at least one in (0, hi]
    let (mut lo, mut hi) = (Rational::zero(), top.clone());
    while &hi - &lo > width || lo.is_zero() {
        let mid = (&lo + &hi) / &two;
        if eval(p, &mid).is_zero() && count(&Rational::zero(), &mid) == 1 {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if count(&Rational::zero(), &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (a_lo, a_hi) = (lo, hi);
    // largest root: no root in (hi, top], at least one in (lo, top]
    let (mut lo, mut hi) = (Rational::zero(), top.clone());
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        if eval(p, &mid).is_zero() && count(&mid, top) == 0 {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if count(&mid, top) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (a_lo, a_hi, lo, hi)
}

/// Solves a finite frame exactly. Bounds are enclosed to width `2^-24`.
pub fn exact_frame_solve(f: &ExactFrame) -> Result<ExactSolution> {
    let d = f.dim();
    let r = rank(f.vectors());
    if r < d {
        return Err(Error::NotSpanning { rank: r, dim: d });
    }
    let t = f.synthesis_matrix();
    let s = mat_mul(&t, &f.vectors);
    let s_inv = inverse(&s).ok_or(Error::NotSpanning { rank: r, dim: d })?;
    let duals: Matrix = f.vectors.iter().map(|v| mat_vec(&s_inv, v)).collect();
    let projection: Matrix = f
        .vectors
        .iter()
        .map(|fn_| duals.iter().map(|g| dot(fn_, g)).collect())
        .collect();
    let p = char_poly(&s);
    let trace: Rational = (0..d).map(|i| s[i][i].clone()).sum();
    // a power of two above the spectrum keeps bisection points dyadic, so
    // integer eigenvalues are hit exactly
    let top = pow2(ceil_log2(&(trace + Rational::one())));
    let (a_lo, a_hi, b_lo, b_hi) = extreme_roots(&p, &top, 24);
    Ok(ExactSolution {
        s,
        s_inv,
        duals,
        projection,
        bounds: BoundsEnclosure { a_lo, a_hi, b_lo, b_hi },
    })
}

/// Enclosures of the optimal frame bounds of width at most `2^-bits`.
pub fn frame_bounds(f: &ExactFrame, bits: u32) -> Result<BoundsEnclosure> {
    let d = f.dim();
    let r = rank(f.vectors());
    if r < d {
        return Err(Error::NotSpanning { rank: r, dim: d });
    }
    let s = mat_mul(&f.synthesis_matrix(), &f.vectors);
    let trace: Rational = (0..d).map(|i| s[i][i].clone()).sum();
    let top = pow2(ceil_log2(&(trace + Rational::one())));
    let (a_lo, a_hi, b_lo, b_hi) = extreme_roots(&char_poly(&s), &top, bits as i64);
    Ok(BoundsEnclosure { a_lo, a_hi, b_lo, b_hi })
}

/// `U_{lk} = <phi_l, S_f^-1 f_k>` for two finite frames of the same space.
pub fn cross_gram(f: &ExactFrame, phi: &ExactFrame) -> Result<Matrix> {
    if f.dim() != phi.dim() {
        return Err(Error::Dimension(format!("{} vs {}", f.dim(), phi.dim())));
    }
    let sol = exact_frame_solve(f)?;
    Ok(phi
        .vectors()
        .iter()
        .map(|p| sol.duals.iter().map(|g| dot(p, g)).collect())
        .collect())
}

/// The frame as a certified frame of `H_d` inside l2, with the outer ends of
/// the bound enclosures as frame bounds.
pub fn embed(f: &ExactFrame) -> Result<CertifiedFrame> {
    let sol = exact_frame_solve(f)?;
    let t = OperatorName::from_finite_matrix(&f.synthesis_matrix())?;
    let tstar = OperatorName::from_finite_matrix(f.vectors())?;
    let frame = Frame::new(t, sol.bounds.a_lo, sol.bounds.b_hi)?;
    Ok(CertifiedFrame::new(frame, tstar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn frame(rows: &[&[i64]]) -> ExactFrame {
        let v: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let d = v[0].len();
        ExactFrame::new(v, d).unwrap()
    }

    fn inside(x: &Rational, lo: &Rational, hi: &Rational) -> bool {
        lo <= x && x <= hi
    }

    #[test]
    fn onb_of_q2() {
        let sol = exact_frame_solve(&frame(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(sol.s, identity(2));
        assert_eq!(sol.duals, identity(2));
        let b = &sol.bounds;
        assert!(inside(&int(1), &b.a_lo, &b.a_hi) && inside(&int(1), &b.b_lo, &b.b_hi));
    }

    #[test]
    fn mercedes_by_hand() {
        let sol = exact_frame_solve(&frame(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(sol.s, vec![vec![int(2), int(1)], vec![int(1), int(2)]]);
        assert_eq!(sol.s_inv, vec![vec![rat(2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(2, 3)]]);
        assert_eq!(
            sol.duals,
            vec![vec![rat(2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(2, 3)], vec![rat(1, 3), rat(1, 3)]]
        );
        let b = &sol.bounds;
        assert!(inside(&int(1), &b.a_lo, &b.a_hi) && inside(&int(3), &b.b_lo, &b.b_hi));
        assert_eq!((&b.a_lo, &b.b_hi), (&int(1), &int(3)));
        assert!(&b.a_hi - &b.a_lo <= pow2(-20) && &b.b_hi - &b.b_lo <= pow2(-20));
        // projection is idempotent with diagonal 2/3
        assert_eq!(mat_mul(&sol.projection, &sol.projection), sol.projection);
        assert_eq!(sol.projection[2][2], rat(2, 3));
    }

    #[test]
    fn doubled_onb() {
        let sol = exact_frame_solve(&frame(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1]])).unwrap();
        assert_eq!(sol.s, vec![vec![int(2), int(0)], vec![int(0), int(2)]]);
        let b = &sol.bounds;
        assert!(inside(&int(2), &b.a_lo, &b.a_hi) && inside(&int(2), &b.b_lo, &b.b_hi));
    }

    #[test]
    fn irrational_bounds_are_enclosed() {
        // S = [[2,1],[1,1]] has eigenvalues (3 -+ sqrt 5)/2
        let sol = exact_frame_solve(&frame(&[&[1, 0], &[1, 1]])).unwrap();
        let p = char_poly(&sol.s);
        let b = &sol.bounds;
        assert_eq!(roots_in(&p, &b.a_lo, &b.a_hi), 1);
        assert_eq!(roots_in(&p, &b.b_lo, &b.b_hi), 1);
        assert!(eval(&p, &b.a_lo) * eval(&p, &b.a_hi) < Rational::zero());
    }

    #[test]
    fn rejects_non_spanning() {
        let err = exact_frame_solve(&frame(&[&[1, 1], &[2, 2]])).unwrap_err();
        assert_eq!(err, Error::NotSpanning { rank: 1, dim: 2 });
    }

    #[test]
    fn char_poly_of_small_matrix() {
        // det(xI - [[2,1],[1,2]]) = x^2 - 4x + 3
        let p = char_poly(&[vec![int(2), int(1)], vec![int(1), int(2)]]);
        assert_eq!(p, vec![int(3), int(-4), int(1)]);
    }
}

//! Riesz bases `x_n = T e_n` for a bounded isomorphism `T`, and the
//! equivalent norm `|||x||| = ||T x||`.

use num_traits::{One, Zero};

use crate::duality::builtin_test_vectors;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::frame::{CertifiedFrame, Frame};
use crate::operator::{apply, OperatorName};
use crate::rational::{pow2, Rational};
use crate::real::RealName;
use crate::vector::{VectorName, WeakVectorName};

/// `T`, `T^-1` and their adjoints. The adjoint columns are the rows of the
/// operator itself.
#[derive(Clone, Debug)]
pub struct RieszBasisName {
    t: OperatorName,
    t_inv: OperatorName,
    t_adjoint: OperatorName,
    t_inv_adjoint: OperatorName,
}

impl RieszBasisName {
    /// Checks `T^-1 T = I` and `T T^-1 = I` to `2^-30` on the built-in test
    /// vectors.
    pub fn new(
        t: OperatorName,
        t_inv: OperatorName,
        t_adjoint: OperatorName,
        t_inv_adjoint: OperatorName,
    ) -> Result<Self> {
        let tol = pow2(-30);
        for v in builtin_test_vectors(None) {
            let v = VectorName::from_finite(&v);
            for (a, b) in [(&t, &t_inv), (&t_inv, &t)] {
                if apply(a, &apply(b, &v)).distance_upper(&v, 34) > tol {
                    return Err(Error::NotInverse);
                }
            }
        }
        Ok(RieszBasisName {
            t,
            t_inv,
            t_adjoint,
            t_inv_adjoint,
        })
    }

    /// `T = M ⊕ I` and `T^-1 = M_inv ⊕ I`; `M M_inv = I` is checked exactly.
    pub fn from_finite_block(m: &[Vec<Rational>], m_inv: &[Vec<Rational>]) -> Result<Self> {
        let n = m.len();
        if m_inv.len() != n || m.iter().chain(m_inv).any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("blocks must be square of equal size, got {n} and {}", m_inv.len())));
        }
        for i in 0..n {
            for j in 0..n {
                let s: Rational = (0..n).map(|k| &m[i][k] * &m_inv[k][j]).sum();
                let expected = if i == j { Rational::one() } else { Rational::zero() };
                if s != expected {
                    return Err(Error::NotInverse);
                }
            }
        }
        let tr = |a: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
            (0..n).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
        };
        Ok(RieszBasisName {
            t: OperatorName::block_plus_identity(m)?,
            t_inv: OperatorName::block_plus_identity(m_inv)?,
            t_adjoint: OperatorName::block_plus_identity(&tr(m))?,
            t_inv_adjoint: OperatorName::block_plus_identity(&tr(m_inv))?,
        })
    }

    /// `x_n = T e_n`.
    pub fn elem(&self, n: usize) -> VectorName {
        self.t.col(n)
    }

    pub fn t(&self) -> &OperatorName {
        &self.t
    }

    pub fn t_inv(&self) -> &OperatorName {
        &self.t_inv
    }

    pub fn t_adjoint(&self) -> &OperatorName {
        &self.t_adjoint
    }

    pub fn t_inv_adjoint(&self) -> &OperatorName {
        &self.t_inv_adjoint
    }
}

/// The Riesz basis as a frame with bounds `1/||T^-1||^2` and `||T||^2`,
/// rounded outward to multiples of `2^-20`.
pub fn riesz_as_frame(r: &RieszBasisName) -> CertifiedFrame {
    let one = Rational::one();
    let inv = r.t_inv.norm_bound();
    let lower = Dyadic::from_rational_floor(&(&one / (inv * inv)), 20).to_rational();
    let upper = -Dyadic::from_rational_floor(&-(r.t.norm_bound() * r.t.norm_bound()), 20).to_rational();
    let frame = Frame::new(r.t.clone(), lower, upper).expect("bounds of an isomorphism");
    CertifiedFrame::new(frame, r.t_adjoint.clone())
}

/// A point of the renormed space: its coordinates and the image `T x`,
/// whose norm is `|||x|||`.
#[derive(Clone, Debug)]
pub struct RenormedName {
    coords: WeakVectorName,
    image: VectorName,
}

impl RenormedName {
    pub fn coeff(&self, i: usize) -> RealName {
        self.coords.coeff(i)
    }

    pub fn coords(&self) -> &WeakVectorName {
        &self.coords
    }

    /// `T x`.
    pub fn image(&self) -> &VectorName {
        &self.image
    }

    /// `|||x||| = ||T x||`.
    pub fn triple_norm(&self) -> RealName {
        self.image.norm()
    }
}

pub fn renorm_to(r: &RieszBasisName, x: &VectorName) -> RenormedName {
    RenormedName {
        coords: x.weaken(),
        image: apply(&r.t, x),
    }
}

/// Recovers the full name of `x` as `T^-1 (T x)`.
pub fn renorm_from(r: &RieszBasisName, y: &RenormedName) -> VectorName {
    apply(&r.t_inv, &y.image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::vector::FiniteVector;

    fn shear() -> RieszBasisName {
        RieszBasisName::from_finite_block(&[vec![int(1), int(1)], vec![int(0), int(1)]], &[vec![int(1), int(-1)], vec![int(0), int(1)]])
            .unwrap()
    }

    #[test]
    fn diagonal_bounds_and_norm() {
        let r = RieszBasisName::from_finite_block(&[vec![int(2)]], &[vec![rat(1, 2)]]).unwrap();
        let f = riesz_as_frame(&r);
        assert_eq!((f.lower(), f.upper()), (&int(1), &int(4)));
        let y = renorm_to(&r, &VectorName::basis(0));
        let (lo, hi) = y.triple_norm().enclosure(40);
        assert!(lo.to_rational() <= int(2) && int(2) <= hi.to_rational());
    }

    #[test]
    fn shear_round_trip() {
        let r = shear();
        let x = VectorName::from_finite(&"0:3/7 1:-2 4:1/3".parse::<FiniteVector>().unwrap());
        let back = renorm_from(&r, &renorm_to(&r, &x));
        assert!(back.distance_upper(&x, 34) <= pow2(-30));
        assert_eq!(r.elem(1).exact_entries().unwrap(), &[int(1), int(1)]);
    }

    #[test]
    fn rejects_non_inverse() {
        let bad = RieszBasisName::from_finite_block(&[vec![int(2)]], &[vec![int(2)]]);
        assert_eq!(bad.unwrap_err(), Error::NotInverse);
        let r = shear();
        let bad = RieszBasisName::new(r.t().clone(), r.t().clone(), r.t_adjoint().clone(), r.t_adjoint().clone());
        assert_eq!(bad.unwrap_err(), Error::NotInverse);
    }
}

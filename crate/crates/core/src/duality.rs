//! Dual frames: the canonical dual, duals from left inverses of `T*` and from
//! Bessel sequences, duality checks, cross-Gram operators and biorthogonal
//! duals of Riesz bases.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::frame::{analysis, synthesis, CertifiedFrame, Frame};
use crate::operator::{apply, OperatorName};
use crate::rational::{ceil_log2, pow2, sqrt_upper, Rational};
use crate::real::RealName;
use crate::riesz::RieszBasisName;
use crate::vector::{inner, linear_combo, FiniteVector, VectorName};

/// A sequence `(h_k)` with `sum_k |<f, h_k>|^2 <= D ||f||^2`.
#[derive(Clone, Debug)]
pub struct BesselSequence {
    synthesis: OperatorName,
    bound: Rational,
    len: Option<usize>,
}

impl BesselSequence {
    /// The caller certifies the Bessel bound `D`.
    pub fn new(
        elem: impl Fn(usize) -> VectorName + Send + Sync + 'static,
        bound: Rational,
        len: Option<usize>,
    ) -> Result<Self> {
        if bound.is_negative() {
            return Err(Error::NonPositive {
                what: "Bessel bound",
                value: bound,
            });
        }
        let nb = sqrt_upper(&bound);
        let op = OperatorName::from_columns(nb, move |k| match len {
            Some(m) if k >= m => VectorName::zero(),
            _ => elem(k),
        });
        Ok(BesselSequence {
            synthesis: op,
            bound,
            len,
        })
    }

    /// Finitely many rational vectors. Without an explicit bound,
    /// `D = sum_k ||h_k||^2` is used.
    pub fn from_finite(vectors: Vec<Vec<Rational>>, bound: Option<Rational>) -> Result<Self> {
        let bound = bound.unwrap_or_else(|| vectors.iter().flatten().map(|q| q * q).sum());
        let len = vectors.len();
        let vectors = std::sync::Arc::new(vectors);
        Self::new(move |k| VectorName::from_rationals(vectors[k].clone()), bound, Some(len))
    }

    pub fn zero() -> Self {
        Self::new(|_| VectorName::zero(), Rational::zero(), Some(0)).expect("zero bound")
    }

    pub fn elem(&self, k: usize) -> VectorName {
        self.synthesis.col(k)
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    /// `W c = sum_k c_k h_k`, with norm bound `sqrt(D)`.
    pub fn synthesis_operator(&self) -> &OperatorName {
        &self.synthesis
    }
}

/// A certified frame `(f_k)` and a dual frame `(g_k)`.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub primal: CertifiedFrame,
    pub dual: Frame,
    pub dual_analysis: Option<OperatorName>,
}

/// Which reconstruction identity a duality check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityForm {
    /// `f = sum <f, g_k> f_k`.
    DualCoefficients,
    /// `f = sum <f, f_k> g_k`.
    PrimalCoefficients,
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub form: DualityForm,
    /// Upper bounds on `||f - reconstruction||`, one per test vector.
    pub residuals: Vec<Rational>,
    pub worst: Rational,
    pub tol: Rational,
    pub passed: bool,
}

/// The canonical dual `(S^-1 f_k)` with bounds `(1/B, 1/A)` and analysis
/// operator `T* S^-1`.
pub fn canonical_dual(cf: &CertifiedFrame) -> Result<CertifiedFrame> {
    let one = Rational::from_integer(1.into());
    let (lower, upper) = (&one / cf.upper(), &one / cf.lower());
    let primal = cf.clone();
    let synth = OperatorName::from_columns(Rational::zero(), move |k| primal.dual_elem(k))
        .with_dims(cf.frame().len(), cf.frame().dim());
    let frame = Frame::new(synth, lower, upper)?;
    let primal = cf.clone();
    let dim = cf.frame().dim();
    let analysis_op = OperatorName::from_columns(Rational::zero(), move |n| match dim {
        Some(d) if n >= d => VectorName::zero(),
        _ => analysis(&primal, &crate::frame::frame_algorithm(&primal, &VectorName::basis(n), 0).expect("valid")),
    });
    Ok(CertifiedFrame::new(frame, analysis_op))
}

/// The canonical pair `((f_k), (S^-1 f_k))`.
pub fn canonical_pair(cf: &CertifiedFrame) -> Result<DualPair> {
    let dual = canonical_dual(cf)?;
    Ok(DualPair {
        primal: cf.clone(),
        dual: dual.frame().clone(),
        dual_analysis: Some(dual.analysis_operator().clone()),
    })
}

/// Test vectors: the first basis vectors and a few mixed combinations.
pub fn builtin_test_vectors(dim: Option<usize>) -> Vec<FiniteVector> {
    let d = dim.unwrap_or(8);
    let mut out: Vec<FiniteVector> = (0..d).map(FiniteVector::basis).collect();
    let q = |n: i64, m: i64| Rational::new(n.into(), m.into());
    out.push(FiniteVector::new((0..d).map(|i| (i, q(1, i as i64 + 1))).collect()));
    out.push(FiniteVector::new(
        (0..d).map(|i| (i, q(if i % 2 == 0 { 3 } else { -2 }, 5))).collect(),
    ));
    out
}

/// The dual `(V e_k)` of a left inverse `V` of `T*`. `V T* = I` is checked on
/// the built-in test vectors to `2^-30`.
pub fn dual_from_left_inverse(cf: &CertifiedFrame, v: &OperatorName) -> Result<DualPair> {
    let tol = pow2(-30);
    for f in builtin_test_vectors(cf.frame().dim()) {
        let f = VectorName::from_finite(&f);
        let back = apply(v, &analysis(cf, &f));
        let residual = back.distance_upper(&f, 34);
        if residual > tol {
            return Err(Error::LeftInverseCheckFailed {
                residual: residual.to_string(),
                tol,
            });
        }
    }
    let one = Rational::from_integer(1.into());
    let upper = v.norm_bound() * v.norm_bound();
    let lower = &one / cf.upper();
    let upper = if upper < lower { lower.clone() } else { upper };
    let dual = Frame::new(
        v.clone().with_dims(cf.frame().len(), cf.frame().dim()),
        lower,
        upper,
    )?;
    Ok(DualPair {
        primal: cf.clone(),
        dual,
        dual_analysis: None,
    })
}

/// `g_k = S^-1 f_k + h_k - sum_j <S^-1 f_k, f_j> h_j`. The inner sum is the
/// synthesis over `h` of `T* S^-1 f_k`. Bounds are `1/B` and
/// `(1/sqrt(A) + sqrt(D))^2`.
pub fn dual_from_bessel(cf: &CertifiedFrame, h: &BesselSequence) -> Result<DualPair> {
    let one = Rational::from_integer(1.into());
    let lower = &one / cf.upper();
    let s = sqrt_upper(&(&one / cf.lower())) + sqrt_upper(h.bound());
    let upper = &s * &s;
    let (primal, h2) = (cf.clone(), h.clone());
    let elem = move |k: usize| {
        let dual = primal.dual_elem(k);
        let row = analysis(&primal, &dual);
        let correction = apply(h2.synthesis_operator(), &row);
        linear_combo(vec![
            (RealName::one(), dual),
            (RealName::one(), h2.elem(k)),
            (RealName::from_int(-1), correction),
        ])
    };
    let dual = Frame::from_elements(elem, lower, upper, cf.frame().dim(), cf.frame().len())?;
    Ok(DualPair {
        primal: cf.clone(),
        dual,
        dual_analysis: None,
    })
}

fn dual_coefficients(pair: &DualPair, f: &VectorName) -> Option<VectorName> {
    if let Some(op) = &pair.dual_analysis {
        return Some(apply(op, f));
    }
    pair.dual
        .len()
        .map(|m| VectorName::from_reals((0..m).map(|k| inner(f, &pair.dual.elem(k))).collect()))
}

/// `sum_k <f, g_k> f_k` when the dual coefficients form a full l2 name
/// (finitely many duals or a dual analysis operator), otherwise
/// `sum_k <f, f_k> g_k`.
pub fn reconstruct_with(pair: &DualPair, f: &VectorName, form: DualityForm) -> Option<VectorName> {
    match form {
        DualityForm::DualCoefficients => {
            dual_coefficients(pair, f).map(|c| synthesis(pair.primal.frame(), &c))
        }
        DualityForm::PrimalCoefficients => Some(synthesis(&pair.dual, &analysis(&pair.primal, f))),
    }
}

fn default_form(pair: &DualPair) -> DualityForm {
    if pair.dual_analysis.is_some() || pair.dual.len().is_some() {
        DualityForm::DualCoefficients
    } else {
        DualityForm::PrimalCoefficients
    }
}

/// Checks `f = sum <f, g_k> f_k` on each test vector, falling back to the
/// equivalent `f = sum <f, f_k> g_k` when the dual coefficients of an
/// infinite dual have no norm certificate.
pub fn verify_duality(pair: &DualPair, tests: &[FiniteVector], tol: &Rational) -> DualityReport {
    verify_duality_with(pair, tests, tol, default_form(pair))
}

/// [`verify_duality`] with an explicit form. Falls back to the primal
/// coefficient form when the requested one is unavailable.
pub fn verify_duality_with(pair: &DualPair, tests: &[FiniteVector], tol: &Rational, form: DualityForm) -> DualityReport {
    let form = if form == DualityForm::DualCoefficients && dual_coefficients(pair, &VectorName::zero()).is_none() {
        DualityForm::PrimalCoefficients
    } else {
        form
    };
    let p = (4 - ceil_log2(tol)).max(4) as u32;
    let residuals: Vec<Rational> = tests
        .iter()
        .map(|t| {
            let f = VectorName::from_finite(t);
            let r = reconstruct_with(pair, &f, form).expect("form available");
            r.distance_upper(&f, p)
        })
        .collect();
    let worst = residuals.iter().max().cloned().unwrap_or_else(Rational::zero);
    DualityReport {
        form,
        passed: worst <= *tol,
        residuals,
        worst,
        tol: tol.clone(),
    }
}

/// `U_phi` with entries `u_{lk} = <phi_l, S^-1 f_k>`; `s` bounds its norm.
pub fn cross_gram_operator(f: &CertifiedFrame, phi: &CertifiedFrame, s: &Rational) -> Result<OperatorName> {
    if !s.is_positive() {
        return Err(Error::NonPositive {
            what: "cross-Gram norm bound",
            value: s.clone(),
        });
    }
    let len = f.frame().len();
    let (f, phi2) = (f.clone(), phi.clone());
    Ok(OperatorName::from_columns(s.clone(), move |k| match len {
        Some(m) if k >= m => VectorName::zero(),
        _ => analysis(&phi2, &f.dual_elem(k)),
    })
    .with_dims(len, phi.frame().len()))
}

/// The frame `phi_n = sum_k u_{nk} f_k` from the rows `(u_{nk})_k` of a
/// coefficient operator. The caller certifies the frame bounds.
pub fn frame_from_coeff_operator(
    f: &CertifiedFrame,
    rows: impl Fn(usize) -> VectorName + Send + Sync + 'static,
    lower: Rational,
    upper: Rational,
    len: Option<usize>,
) -> Result<Frame> {
    let base = f.frame().clone();
    Frame::from_elements(move |n| synthesis(&base, &rows(n)), lower, upper, f.frame().dim(), len)
}

/// The biorthogonal sequence `g_k = (T^-1)* e_k` of the Riesz basis
/// `x_n = T e_n`, returned as the columns of `(T^-1)*`.
pub fn biorthogonal_dual_riesz(r: &RieszBasisName) -> OperatorName {
    r.t_inv_adjoint().clone()
}

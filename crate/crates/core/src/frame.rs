//! Frames, certified frames and the operators attached to them.
//!
//! A [`Frame`] is its synthesis operator `T` (columns `f_k`) together with
//! frame bounds `0 < A <= B`. A [`CertifiedFrame`] additionally carries a name
//! of the analysis operator `T*`; without it only coefficientwise analysis
//! data is available.
//!
//! Frames built from finite matrices live in `H_d = span(e_0, ..., e_{d-1})`.
//! Their frame operator is inverted on `H_d`, so inputs are projected there.
//!
//! # Frame algorithm
//!
//! `S^-1 f` is computed by the Richardson iteration
//! `g_{j+1} = g_j + lambda (f - S g_j)`, `g_0 = 0`, with `lambda = 2/(A+B)`
//! and contraction `r = (B-A)/(B+A)`. For target precision `t`:
//!
//! * `f` is read to `A 2^-(t+2)`, costing at most `2^-(t+2)` after `S^-1`;
//! * `J` is the least count with `r^J ||f||/A <= 2^-(t+2)` (one step when `r = 0`);
//! * each step applies `S` with error `sigma` and rounds the update with error
//!   `rho`, where `lambda sigma` and `rho` are both at most `(1-r) 2^-(t+2)`,
//!   so the accumulated perturbation `(lambda sigma + rho)/(1-r)` stays under
//!   `2^-(t+1)`.
//!
//! The three contributions add up to at most `2^-t`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::operator::{apply, compose, OperatorName};
use crate::rational::{guard_bits, sqrt_upper, Rational};
use crate::real::RealName;
use crate::vector::{half_log_len, inner, strengthen, DyadicVector, VectorName, WeakVectorName};

/// A frame `(f_k)` with bounds `A ||f||^2 <= sum |<f, f_k>|^2 <= B ||f||^2`.
#[derive(Clone)]
pub struct Frame {
    synthesis: OperatorName,
    lower: Rational,
    upper: Rational,
    dim: Option<usize>,
    len: Option<usize>,
}

impl Frame {
    /// A frame given by its synthesis operator. Finite dimensions are read
    /// off the operator: its codomain is `H_d`, its domain the index range.
    pub fn new(synthesis: OperatorName, lower: Rational, upper: Rational) -> Result<Self> {
        if !lower.is_positive() || upper < lower {
            return Err(Error::InvalidFrameBounds { lower, upper });
        }
        let nb = sqrt_upper(&upper);
        let dim = synthesis.codomain_dim();
        let len = synthesis.domain_dim();
        Ok(Frame {
            synthesis: synthesis.with_norm_bound(nb),
            lower,
            upper,
            dim,
            len,
        })
    }

    /// A frame given element by element.
    pub fn from_elements(
        elem: impl Fn(usize) -> VectorName + Send + Sync + 'static,
        lower: Rational,
        upper: Rational,
        dim: Option<usize>,
        len: Option<usize>,
    ) -> Result<Self> {
        let op = OperatorName::from_columns(Rational::zero(), move |k| match len {
            Some(m) if k >= m => VectorName::zero(),
            _ => elem(k),
        });
        Frame::new(op.with_dims(len, dim), lower, upper)
    }

    /// `f_i`.
    pub fn elem(&self, i: usize) -> VectorName {
        self.synthesis.col(i)
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    /// The dimension `d` of `H_d` for finite frames.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    /// The number of elements, when finite.
    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    /// The synthesis operator `T`, with norm bound `sqrt(B)`.
    pub fn synthesis_operator(&self) -> &OperatorName {
        &self.synthesis
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Frame(A = {}, B = {}, dim = {:?}, len = {:?})",
            self.lower, self.upper, self.dim, self.len
        )
    }
}

struct CertifiedInner {
    frame: Frame,
    analysis: OperatorName,
    duals: Mutex<HashMap<usize, VectorName>>,
}

/// A frame together with a name of its analysis operator
/// `T* f = (<f, f_i>)_i`.
#[derive(Clone)]
pub struct CertifiedFrame {
    inner: Arc<CertifiedInner>,
}

impl CertifiedFrame {
    /// The caller certifies that `analysis` is `T*` for `frame`.
    pub fn new(frame: Frame, analysis: OperatorName) -> Self {
        let nb = sqrt_upper(frame.upper());
        let (len, dim) = (frame.len, frame.dim);
        CertifiedFrame {
            inner: Arc::new(CertifiedInner {
                frame,
                analysis: analysis.with_norm_bound(nb).with_dims(dim, len),
                duals: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.inner.frame
    }

    pub fn analysis_operator(&self) -> &OperatorName {
        &self.inner.analysis
    }

    pub fn elem(&self, i: usize) -> VectorName {
        self.frame().elem(i)
    }

    pub fn lower(&self) -> &Rational {
        self.frame().lower()
    }

    pub fn upper(&self) -> &Rational {
        self.frame().upper()
    }

    /// The canonical dual element `S^-1 f_k`, cached.
    pub fn dual_elem(&self, k: usize) -> VectorName {
        if let Some(v) = self.inner.duals.lock().unwrap().get(&k) {
            return v.clone();
        }
        let v = inverse_frame_operator_apply(self, &self.elem(k));
        self.inner.duals.lock().unwrap().entry(k).or_insert(v).clone()
    }
}

impl fmt::Debug for CertifiedFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certified{:?}", self.frame())
    }
}

/// Result of [`frame_from_operator`]: certified exactly when an adjoint was
/// supplied.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Constructed {
    Plain(Frame),
    Certified(CertifiedFrame),
}

impl Constructed {
    pub fn frame(&self) -> &Frame {
        match self {
            Constructed::Plain(f) => f,
            Constructed::Certified(cf) => cf.frame(),
        }
    }

    pub fn certified(self) -> Option<CertifiedFrame> {
        match self {
            Constructed::Plain(_) => None,
            Constructed::Certified(cf) => Some(cf),
        }
    }
}

/// The standard orthonormal basis as a frame with `A = B = 1`.
pub fn frame_from_onb() -> CertifiedFrame {
    let one = Rational::from_integer(1.into());
    let frame = Frame::new(OperatorName::identity(), one.clone(), one).expect("valid bounds");
    CertifiedFrame::new(frame, OperatorName::identity())
}

/// The frame `(U e_k)` of a bounded surjection `U`, where `C > 0` certifies
/// `||U* f|| >= C ||f||`. Bounds are `A = C^2`, `B = norm_bound(U)^2`. A
/// supplied adjoint `U*` is the analysis operator.
pub fn frame_from_operator(u: &OperatorName, c: &Rational, adjoint: Option<OperatorName>) -> Result<Constructed> {
    if !c.is_positive() {
        return Err(Error::NonPositive {
            what: "surjectivity constant C",
            value: c.clone(),
        });
    }
    let lower = c * c;
    let upper = u.norm_bound() * u.norm_bound();
    let frame = Frame::new(u.clone(), lower, upper)?;
    Ok(match adjoint {
        Some(adj) => Constructed::Certified(CertifiedFrame::new(frame, adj)),
        None => Constructed::Plain(frame),
    })
}

/// `T c = sum_k c_k f_k`.
pub fn synthesis(frame: &Frame, c: &VectorName) -> VectorName {
    apply(frame.synthesis_operator(), c)
}

/// The coefficients `<f, f_i>` one at a time, with `||T* f|| <= sqrt(B) ||f||`
/// as the only norm information.
pub fn analysis_coeffs(frame: &Frame, f: &VectorName) -> WeakVectorName {
    let norm_upper = sqrt_upper(frame.upper()) * f.mag();
    let (frame, f) = (frame.clone(), f.clone());
    WeakVectorName::new(move |i| inner(&f, &frame.elem(i)), norm_upper)
}

/// `T* f` as a full l2 name.
pub fn analysis(cf: &CertifiedFrame, f: &VectorName) -> VectorName {
    apply(cf.analysis_operator(), f)
}

/// `S = T T*`, with norm bound `B`.
pub fn frame_operator(cf: &CertifiedFrame) -> OperatorName {
    compose(cf.frame().synthesis_operator(), cf.analysis_operator()).with_norm_bound(cf.upper().clone())
}

/// One certified approximation of `S^-1 f` and the number of iterations used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameAlgorithmRun {
    pub approx: DyadicVector,
    pub iterations: usize,
}

fn project(v: &DyadicVector, dim: Option<usize>) -> DyadicVector {
    match dim {
        Some(d) => v.truncated(d),
        None => v.clone(),
    }
}

/// Rounds `lambda u` entrywise; within `2^-(q+1)` of the exact product.
fn scale_round(u: &DyadicVector, lambda: &Rational, q: u32) -> DyadicVector {
    let e = q as i64 + half_log_len(u.len()) as i64;
    DyadicVector::new(
        u.entries()
            .iter()
            .map(|x| x.mul_rational_round(lambda, e))
            .collect(),
    )
}

/// A dyadic vector within `2^-target` of `S^-1 f` (see the module docs for
/// the error budget).
pub fn frame_algorithm_run(cf: &CertifiedFrame, f: &VectorName, target: i64) -> Result<FrameAlgorithmRun> {
    if target < 0 {
        return Err(Error::NegativePrecision(target));
    }
    let t = target as u32;
    let one = Rational::from_integer(1.into());
    let (a, b) = (cf.lower(), cf.upper());
    let fhat = project(&f.approx_vec(t + 2 + guard_bits(&(&one / a))), cf.frame().dim());
    if fhat.is_empty() {
        return Ok(FrameAlgorithmRun {
            approx: DyadicVector::zero(),
            iterations: 0,
        });
    }
    let r = (b - a) / (b + a);
    let lambda = Rational::from_integer(2.into()) / (a + b);
    let goal = crate::rational::pow2(-(t as i64) - 2);
    let m = fhat.norm_upper() / a;
    // r and r^J are rounded up on a grid well below the goal, so the count
    // stays conservative without the exact powers growing
    let grid = t as i64 + 66 + (guard_bits(&m) + guard_bits(&(&one / (&one - &r)))) as i64;
    let r_up = Dyadic::from_rational_floor(&-&r, grid).abs();
    let m_up = Dyadic::from_rational_floor(&-m, grid).abs();
    let goal = Dyadic::from_rational_floor(&goal, grid);
    let mut iterations = 1;
    let mut rj = r_up.clone();
    while &rj * &m_up > goal {
        iterations += 1;
        rj = (&rj * &r_up).ceil_to(grid);
    }
    let bits_r = guard_bits(&(&one / (&one - &r)));
    let q_g = t + 2 + bits_r;
    let q_s = q_g + guard_bits(&lambda);
    let t_op = cf.frame().synthesis_operator();
    let tstar = cf.analysis_operator();
    let inner_bits = q_s + 1 + guard_bits(t_op.norm_bound());
    let mut g = DyadicVector::zero();
    for _ in 0..iterations {
        let sg = if g.is_empty() {
            DyadicVector::zero()
        } else {
            project(&t_op.apply_finite(&tstar.apply_finite(&g, inner_bits), q_s + 1), cf.frame().dim())
        };
        let step = scale_round(&fhat.sub(&sg), &lambda, q_g);
        g.axpy(&Dyadic::one(), &step);
    }
    Ok(FrameAlgorithmRun { approx: g, iterations })
}

/// `S^-1 f` as a vector name; every query is answered at least to
/// `2^-target`.
pub fn frame_algorithm(cf: &CertifiedFrame, f: &VectorName, target: i64) -> Result<VectorName> {
    if target < 0 {
        return Err(Error::NegativePrecision(target));
    }
    let mag = f.mag() / cf.lower();
    let (cf, f) = (cf.clone(), f.clone());
    Ok(VectorName::from_cauchy(mag, move |p| {
        frame_algorithm_run(&cf, &f, target.max(p as i64))
            .expect("nonnegative precision")
            .approx
    }))
}

fn inverse_frame_operator_apply(cf: &CertifiedFrame, f: &VectorName) -> VectorName {
    frame_algorithm(cf, f, 0).expect("nonnegative precision")
}

/// `S^-1` as an operator, with norm bound `1/A`.
pub fn inverse_frame_operator(cf: &CertifiedFrame) -> OperatorName {
    let nb = Rational::from_integer(1.into()) / cf.lower();
    let dim = cf.frame().dim();
    let cf = cf.clone();
    OperatorName::from_columns(nb, move |k| match dim {
        Some(d) if k >= d => VectorName::zero(),
        _ => inverse_frame_operator_apply(&cf, &VectorName::basis(k)),
    })
    .with_dims(dim, dim)
}

/// Frame coefficients `(<f, S^-1 f_k>)_k` with their energy
/// `sum_k |<f, S^-1 f_k>|^2`.
#[derive(Clone, Debug)]
pub struct FrameCoeffName {
    l2: VectorName,
}

impl FrameCoeffName {
    /// Wraps an l2 name of the coefficient sequence.
    pub fn from_l2(l2: VectorName) -> Self {
        FrameCoeffName { l2 }
    }

    /// Coefficient oracle plus a name of the energy.
    pub fn from_parts(coeff: impl Fn(usize) -> RealName + Send + Sync + 'static, energy: RealName) -> Self {
        FrameCoeffName {
            l2: VectorName::from_fourier(coeff, energy.sqrt()),
        }
    }

    pub fn coeff(&self, k: usize) -> RealName {
        self.l2.coeff(k)
    }

    pub fn energy(&self) -> RealName {
        self.l2.norm().square()
    }

    pub fn as_l2(&self) -> &VectorName {
        &self.l2
    }
}

/// `T^+ f = (<f, S^-1 f_k>)_k`, computed as `T* S^-1 f`.
pub fn pseudo_inverse(cf: &CertifiedFrame, f: &VectorName) -> FrameCoeffName {
    FrameCoeffName::from_l2(analysis(cf, &inverse_frame_operator_apply(cf, f)))
}

/// The frame representation of `f`.
pub fn frame_name_of(cf: &CertifiedFrame, f: &VectorName) -> FrameCoeffName {
    pseudo_inverse(cf, f)
}

/// Decodes a frame representation: `sum_k c_k f_k`.
pub fn reconstruct(cf: &CertifiedFrame, c: &FrameCoeffName) -> VectorName {
    synthesis(cf.frame(), c.as_l2())
}

/// Recovers the frame from its analysis operator: coefficient `n` of `f_i`
/// is coefficient `i` of `T* e_n`, and `norms(i)` names `||f_i||`.
///
/// # Panics
///
/// Element queries panic when a norm certificate exceeds `sqrt(B) + 1`,
/// which no genuine frame element can.
pub fn frame_from_analysis(
    tstar: &OperatorName,
    norms: impl Fn(usize) -> RealName + Send + Sync + 'static,
    lower: Rational,
    upper: Rational,
    dim: Option<usize>,
    len: Option<usize>,
) -> Result<CertifiedFrame> {
    let bound = sqrt_upper(&upper);
    let rows = tstar.clone();
    let elem = move |i: usize| {
        let t = rows.clone();
        let row = WeakVectorName::new(
            move |n| match dim {
                Some(d) if n >= d => RealName::zero(),
                _ => t.col(n).coeff(i),
            },
            bound.clone(),
        );
        strengthen(&row, norms(i)).unwrap_or_else(|e| panic!("element {i}: {e}"))
    };
    let frame = Frame::from_elements(elem, lower, upper, dim, len)?;
    Ok(CertifiedFrame::new(frame, tstar.clone()))
}

/// `sum_k |<f_n, S^-1 f_k>|^2` from the diagonal entry `p = row(n)` alone:
/// `(1 - p^2 - (1 - p)^2)/2 + p^2`.
pub fn complete_dual_gram_row(row: impl Fn(usize) -> RealName, n: usize) -> RealName {
    let p = row(n);
    let one = RealName::one();
    let p2 = p.square();
    let q2 = one.sub(&p).square();
    let half = RealName::from_rational(Rational::new(1.into(), 2.into()));
    one.sub(&p2).sub(&q2).mul(&half).add(&p2)
}

/// The orthogonal projection of l2 onto the range of `T*`:
/// `P e_k = T* S^-1 f_k = (<S^-1 f_k, f_j>)_j`.
pub fn range_projection(cf: &CertifiedFrame) -> OperatorName {
    let len = cf.frame().len();
    let cf = cf.clone();
    OperatorName::from_columns(Rational::from_integer(1.into()), move |k| match len {
        Some(m) if k >= m => VectorName::zero(),
        _ => analysis(&cf, &cf.dual_elem(k)),
    })
    .with_dims(len, len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow2, rat};

    fn mercedes() -> CertifiedFrame {
        let t = OperatorName::from_finite_matrix(&[vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]]).unwrap();
        let ts = OperatorName::from_finite_matrix(&[vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]])
            .unwrap();
        CertifiedFrame::new(Frame::new(t, int(1), int(3)).unwrap(), ts)
    }

    fn near(x: &VectorName, v: &[Rational], p: u32) -> bool {
        x.distance_upper(&VectorName::from_rationals(v.to_vec()), p + 2) <= pow2(-(p as i64))
    }

    #[test]
    fn onb_behaviour() {
        let onb = frame_from_onb();
        let e3 = VectorName::basis(3);
        assert!(analysis(&onb, &e3).distance_upper(&e3, 40) <= pow2(-38));
        assert!(synthesis(onb.frame(), &e3).distance_upper(&e3, 40) <= pow2(-38));
        let run = frame_algorithm_run(&onb, &e3, 40).unwrap();
        assert_eq!(run.iterations, 1);
        assert_eq!(run.approx, *e3.approx_vec(42));
    }

    #[test]
    fn high_targets_terminate() {
        let m = mercedes();
        let run = frame_algorithm_run(&m, &VectorName::basis(0), 120).unwrap();
        assert!(run.iterations > 100);
        let g = VectorName::from_finite(&run.approx.to_finite());
        assert!(near(&g, &[rat(2, 3), rat(-1, 3)], 120));
    }

    #[test]
    fn mercedes_inverse_and_coefficients() {
        let m = mercedes();
        let e0 = VectorName::basis(0);
        let g = frame_algorithm(&m, &e0, 40).unwrap();
        assert!(near(&g, &[rat(2, 3), rat(-1, 3)], 40));
        let c = pseudo_inverse(&m, &e0);
        assert!(near(c.as_l2(), &[rat(2, 3), rat(-1, 3), rat(1, 3)], 40));
        assert!((c.energy().approx(40).to_rational() - rat(2, 3)).abs() <= pow2(-39));
        let back = reconstruct(&m, &c);
        assert!(near(&back, &[int(1)], 40));
        let sum = synthesis(m.frame(), &VectorName::from_rationals(vec![int(1), int(1), int(1)]));
        assert!(near(&sum, &[int(2), int(2)], 40));
        assert!(frame_algorithm(&m, &e0, -1).is_err());
    }

    #[test]
    fn frame_operator_of_mercedes() {
        let s = frame_operator(&mercedes());
        assert_eq!(s.col(0).exact_entries().unwrap(), &[int(2), int(1)]);
        assert_eq!(s.col(1).exact_entries().unwrap(), &[int(1), int(2)]);
        assert_eq!(s.norm_bound(), &int(3));
    }

    #[test]
    fn analysis_with_and_without_certificate() {
        let m = mercedes();
        let f = VectorName::from_rationals(vec![int(1), int(1)]);
        let w = analysis_coeffs(m.frame(), &f);
        for (i, v) in [1, 1, 2].into_iter().enumerate() {
            assert!((w.coeff(i).approx(30).to_rational() - int(v)).abs() <= pow2(-30));
        }
        let full = analysis(&m, &f);
        let n = full.norm().approx(30).to_rational();
        assert!((&n * &n - int(6)).abs() <= pow2(-27));
    }

    #[test]
    fn gram_row_completion() {
        let p = RealName::from_rational(rat(2, 3));
        let e = complete_dual_gram_row(move |_| p.clone(), 2);
        assert!((e.approx(40).to_rational() - rat(2, 3)).abs() <= pow2(-40));
        let e = complete_dual_gram_row(|_| RealName::one(), 0);
        assert!((e.approx(40).to_rational() - int(1)).abs() <= pow2(-40));
    }

    #[test]
    fn projection_of_mercedes_is_idempotent() {
        let p = range_projection(&mercedes());
        // exact P = T* S^-1 T = (1/3) [[2,-1,1],[-1,2,1],[1,1,2]]
        let exact = [[2, -1, 1], [-1, 2, 1], [1, 1, 2]];
        for k in 0..3 {
            let col: Vec<Rational> = (0..3).map(|l| rat(exact[l][k], 3)).collect();
            assert!(near(&p.col(k), &col, 35));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Frame::new(OperatorName::identity(), int(0), int(1)).is_err());
        assert!(Frame::new(OperatorName::identity(), int(2), int(1)).is_err());
        assert!(frame_from_operator(&OperatorName::identity(), &int(0), None).is_err());
        let c = frame_from_operator(&OperatorName::identity(), &int(1), None).unwrap();
        assert!(c.certified().is_none());
    }
}

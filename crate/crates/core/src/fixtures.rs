//! Reference frames with known answers, shared by tests and the CLI.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::frame::{frame_from_onb, CertifiedFrame, Frame};
use crate::gallery::{benign_sequence, benign_toeplitz, upper_row_frame};
use crate::operator::OperatorName;
use crate::oracle::{embed, exact_frame_solve, ExactFrame, ExactSolution};
use crate::rational::{int, rat, sqrt_upper, Rational};
use crate::riesz::{riesz_as_frame, RieszBasisName};
use crate::vector::VectorName;

type GramFn = dyn Fn(usize, usize) -> Rational + Send + Sync;

/// A certified frame together with exact reference data.
#[derive(Clone)]
pub struct Fixture {
    pub name: String,
    pub frame: CertifiedFrame,
    /// The exact frame and its solution, for finite fixtures.
    pub exact: Option<(ExactFrame, ExactSolution)>,
    gram: Arc<GramFn>,
}

impl Fixture {
    fn finite(name: &str, f: ExactFrame) -> Result<Self> {
        let sol = exact_frame_solve(&f)?;
        let m = sol.projection.clone();
        Ok(Fixture {
            name: name.to_string(),
            frame: embed(&f)?,
            exact: Some((f, sol)),
            gram: Arc::new(move |n, k| m.get(n).and_then(|r| r.get(k)).cloned().unwrap_or_else(|| int(0))),
        })
    }

    fn infinite(name: &str, frame: CertifiedFrame, gram: impl Fn(usize, usize) -> Rational + Send + Sync + 'static) -> Self {
        Fixture {
            name: name.to_string(),
            frame,
            exact: None,
            gram: Arc::new(gram),
        }
    }

    /// `M_{nk} = <f_n, S^-1 f_k>` in closed form.
    pub fn gram(&self, n: usize, k: usize) -> Rational {
        (self.gram)(n, k)
    }

    /// Indices worth probing: all of them for finite frames, else the first 10.
    pub fn probe_len(&self) -> usize {
        self.frame.frame().len().unwrap_or(10)
    }

    /// The dimension test vectors are drawn from.
    pub fn test_dim(&self) -> usize {
        self.frame.frame().dim().unwrap_or(6)
    }
}

fn delta(n: usize, k: usize) -> Rational {
    int((n == k) as i64)
}

fn exact(rows: &[&[i64]]) -> ExactFrame {
    let v: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let d = v[0].len();
    ExactFrame::new(v, d).expect("static fixture")
}

/// `{(1,0), (0,1), (1,1)}` in `Q^2`, with `S = [[2,1],[1,2]]`.
pub fn mercedes_exact() -> ExactFrame {
    exact(&[&[1, 0], &[0, 1], &[1, 1]])
}

pub fn mercedes() -> CertifiedFrame {
    embed(&mercedes_exact()).expect("spanning")
}

/// The standard basis of `Q^3`.
pub fn finite_onb_exact() -> ExactFrame {
    exact(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
}

/// The standard basis of `Q^2`, each vector listed twice.
pub fn finite_doubled_exact() -> ExactFrame {
    exact(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1]])
}

/// Each basis vector of l2 listed `r` times: `f_{rn+j} = e_n`, `S = rI`.
pub fn repeated_onb(r: usize) -> CertifiedFrame {
    assert!(r >= 1, "repetition count must be positive");
    let bound = int(r as i64);
    let t = OperatorName::from_columns(sqrt_upper(&bound), move |k| VectorName::basis(k / r));
    let tstar = OperatorName::from_columns(sqrt_upper(&bound), move |n| {
        let mut v = vec![int(0); r * n + r];
        for x in &mut v[r * n..] {
            *x = int(1);
        }
        VectorName::from_rationals(v)
    });
    CertifiedFrame::new(Frame::new(t, bound.clone(), bound).expect("valid"), tstar)
}

/// `f_{2n} = f_{2n+1} = e_n` in l2, with `S = 2I`.
pub fn doubled_onb() -> CertifiedFrame {
    repeated_onb(2)
}

/// `T = diag(2, 1, 1, ...)`.
pub fn riesz_diagonal() -> RieszBasisName {
    RieszBasisName::from_finite_block(&[vec![int(2)]], &[vec![rat(1, 2)]]).expect("inverse pair")
}

/// `T = [[1,1],[0,1]] ⊕ I`.
pub fn riesz_shear() -> RieszBasisName {
    RieszBasisName::from_finite_block(
        &[vec![int(1), int(1)], vec![int(0), int(1)]],
        &[vec![int(1), int(-1)], vec![int(0), int(1)]],
    )
    .expect("inverse pair")
}

/// A random spanning frame of `Q^d` with `2 <= d <= 6`, `d <= m <= 10`
/// vectors, small rational entries and bound ratio `B/A <= 16`.
pub fn random_exact_frame(seed: u64) -> ExactFrame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let d = rng.gen_range(2..=6);
        let m = rng.gen_range(d..=10);
        let vectors: Vec<Vec<Rational>> = (0..m)
            .map(|_| (0..d).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
            .collect();
        let f = ExactFrame::new(vectors, d).expect("nonempty");
        if let Ok(sol) = exact_frame_solve(&f) {
            if sol.bounds.b_hi <= int(16) * &sol.bounds.a_lo {
                return f;
            }
        }
    }
}

/// A random rational vector of `Q^d` with entries `p/q`, `|p| <= 8`, `q <= 5`.
pub fn random_vector(rng: &mut impl Rng, d: usize) -> Vec<Rational> {
    (0..d).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=5))).collect()
}

/// Every named fixture: finite ones with exact solutions and infinite ones
/// whose `M` is known in closed form.
pub fn all() -> Vec<Fixture> {
    let finite = |name: &str, f: ExactFrame| Fixture::finite(name, f).expect("static fixture");
    vec![
        finite("mercedes", mercedes_exact()),
        finite("onb3", finite_onb_exact()),
        finite("doubled2", finite_doubled_exact()),
        finite("random7", random_exact_frame(7)),
        Fixture::infinite("onb", frame_from_onb(), delta),
        Fixture::infinite("doubled-onb", doubled_onb(), |n, k| {
            if n / 2 == k / 2 {
                rat(1, 2)
            } else {
                int(0)
            }
        }),
        Fixture::infinite("riesz-diagonal", riesz_as_frame(&riesz_diagonal()), delta),
        Fixture::infinite("riesz-shear", riesz_as_frame(&riesz_shear()), delta),
        Fixture::infinite(
            "upper-row",
            upper_row_frame(&benign_sequence()).certified().expect("benign"),
            delta,
        ),
        Fixture::infinite("toeplitz", benign_toeplitz().1.primal, delta),
    ]
}

//! Property suites run by `certframe verify`.

use std::fmt::Write as _;

use certframe::duality::{builtin_test_vectors, canonical_pair, verify_duality_with, DualPair, DualityForm};
use certframe::frame::{analysis, complete_dual_gram_row, frame_algorithm_run, range_projection};
use certframe::operator::apply;
use certframe::oracle::mat_vec;
use certframe::rational::{pow2, Rational};
use certframe::vector::inner;
use certframe::{CertifiedFrame, FiniteVector, VectorName};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::render::pow2_upper;
use crate::spec::{Failure, Loaded};

/// Every suite checks its residuals against `2^-30`.
pub const TOL_BITS: i64 = 30;
const SEED: u64 = 0x5eed;
/// Dimension of random test vectors for frames of l2.
const INFINITE_TEST_DIM: usize = 6;
/// Rows probed by the Gram suite.
const GRAM_ROWS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Duality,
    Projection,
    Gram,
    Rate,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Duality, Suite::Projection, Suite::Gram, Suite::Rate];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Projection => "projection",
            Suite::Gram => "gram",
            Suite::Rate => "rate",
        }
    }
}

pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

fn tol() -> Rational {
    pow2(-TOL_BITS)
}

fn check(out: &mut String, passed: &mut bool, label: &str, worst: &Rational) {
    let ok = *worst <= tol();
    *passed &= ok;
    let verdict = if ok { "pass" } else { "FAIL" };
    writeln!(out, "  {label}: worst residual <= {} (tol 2^-{TOL_BITS}) {verdict}", pow2_upper(worst)).unwrap();
}

fn test_dim(cf: &CertifiedFrame) -> usize {
    cf.frame().dim().unwrap_or(INFINITE_TEST_DIM)
}

fn random_vectors(rng: &mut ChaCha8Rng, count: usize, len: usize) -> Vec<FiniteVector> {
    (0..count)
        .map(|_| {
            let v: Vec<Rational> = (0..len)
                .map(|_| Rational::new(rng.gen_range(-8i64..=8).into(), rng.gen_range(1i64..=5).into()))
                .collect();
            FiniteVector::from_dense(&v)
        })
        .collect()
}

fn test_vectors(cf: &CertifiedFrame) -> Vec<FiniteVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut v = builtin_test_vectors(Some(test_dim(cf)));
    v.extend(random_vectors(&mut rng, 3, test_dim(cf)));
    v
}

pub fn run(loaded: &Loaded, suite: Suite) -> Result<Outcome, Failure> {
    let cf = loaded.certified()?;
    let mut out = String::new();
    let mut passed = true;
    writeln!(out, "suite {}", suite.name()).unwrap();
    match suite {
        Suite::Duality => duality(loaded, cf, &mut out, &mut passed)?,
        Suite::Projection => projection(loaded, cf, &mut out, &mut passed),
        Suite::Gram => gram(loaded, cf, &mut out, &mut passed),
        Suite::Rate => rate(cf, &mut out, &mut passed)?,
    }
    writeln!(out, "  result: {}", if passed { "pass" } else { "FAIL" }).unwrap();
    Ok(Outcome { report: out, passed })
}

fn duality(loaded: &Loaded, cf: &CertifiedFrame, out: &mut String, passed: &mut bool) -> Result<(), Failure> {
    let tests = test_vectors(cf);
    let (pair, forms): (DualPair, &[DualityForm]) = match &loaded.dual {
        Some(g) => (
            DualPair {
                primal: cf.clone(),
                dual: g.clone(),
                dual_analysis: None,
            },
            &[DualityForm::DualCoefficients],
        ),
        None => (
            canonical_pair(cf)?,
            &[DualityForm::DualCoefficients, DualityForm::PrimalCoefficients],
        ),
    };
    for &form in forms {
        let r = verify_duality_with(&pair, &tests, &tol(), form);
        let label = match r.form {
            DualityForm::DualCoefficients => "f = sum <f, g_k> f_k",
            DualityForm::PrimalCoefficients => "f = sum <f, f_k> g_k",
        };
        check(out, passed, label, &r.worst);
        if !r.passed {
            let (i, worst) = r.residuals.iter().enumerate().max_by(|a, b| a.1.cmp(b.1)).unwrap();
            writeln!(out, "  counterexample: f = {} with residual <= {}", tests[i], pow2_upper(worst)).unwrap();
        }
    }
    if let (Some((_, sol)), None) = (&loaded.exact, &loaded.dual) {
        let mut worst = Rational::zero();
        for (k, row) in sol.duals.iter().enumerate() {
            let d = pair.dual.elem(k).distance_upper(&VectorName::from_rationals(row.clone()), 34);
            worst = worst.max(d);
        }
        check(out, passed, "dual elements vs exact S^-1 f_k", &worst);
    }
    Ok(())
}

fn projection(loaded: &Loaded, cf: &CertifiedFrame, out: &mut String, passed: &mut bool) {
    let p = range_projection(cf);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let len = cf.frame().len().unwrap_or(8);
    let cs = random_vectors(&mut rng, 4, len);
    let ds = random_vectors(&mut rng, 4, len);
    let (mut idem, mut adj) = (Rational::zero(), Rational::zero());
    for (c, d) in cs.iter().zip(&ds) {
        let cv = VectorName::from_finite(c);
        let pc = apply(&p, &cv);
        idem = idem.max(apply(&p, &pc).distance_upper(&pc, 34));
        match &loaded.exact {
            Some((_, sol)) => {
                let mt = certframe::oracle::transpose(&sol.projection);
                let exact = VectorName::from_rationals(mat_vec(&mt, &c.to_dense(len)));
                adj = adj.max(pc.distance_upper(&exact, 34));
            }
            None => {
                let dv = VectorName::from_finite(d);
                let lhs = inner(&pc, &dv).sub(&inner(&cv, &apply(&p, &dv)));
                adj = adj.max(lhs.approx(34).to_rational().abs() + pow2(-34));
            }
        }
    }
    check(out, passed, "P^2 c = P c", &idem);
    let label = if loaded.exact.is_some() { "P c = P* c (exact transpose)" } else { "<P c, d> = <c, P d>" };
    check(out, passed, label, &adj);
    let mut fixes = Rational::zero();
    for f in test_vectors(cf).iter().take(4) {
        let a = analysis(cf, &VectorName::from_finite(f));
        fixes = fixes.max(apply(&p, &a).distance_upper(&a, 34));
    }
    check(out, passed, "P T* f = T* f", &fixes);
}

fn gram(loaded: &Loaded, cf: &CertifiedFrame, out: &mut String, passed: &mut bool) {
    let rows = cf.frame().len().unwrap_or(GRAM_ROWS).min(GRAM_ROWS);
    let (mut vs_sum, mut vs_diag) = (Rational::zero(), Rational::zero());
    for n in 0..rows {
        let fnn = cf.elem(n);
        let (cf2, f2) = (cf.clone(), fnn.clone());
        let completed = complete_dual_gram_row(move |k| inner(&f2, &cf2.dual_elem(k)), n);
        let (sum, diag) = match &loaded.exact {
            Some((_, sol)) => {
                let m = &sol.projection;
                let s: Rational = m[n].iter().map(|x| x * x).sum();
                (certframe::RealName::from_rational(s), certframe::RealName::from_rational(m[n][n].clone()))
            }
            None => {
                let row = analysis(cf, &cf.dual_elem(n));
                (row.norm().square(), inner(&fnn, &cf.dual_elem(n)))
            }
        };
        let err = |x: &certframe::RealName| completed.sub(x).approx(34).to_rational().abs() + pow2(-34);
        vs_sum = vs_sum.max(err(&sum));
        vs_diag = vs_diag.max(err(&diag));
    }
    let source = if loaded.exact.is_some() { "exact" } else { "kernel" };
    check(out, passed, &format!("completion = sum_k M_nk^2 ({source}, n < {rows})"), &vs_sum);
    check(out, passed, &format!("completion = M_nn ({source}, n < {rows})"), &vs_diag);
}

/// `ceil((p + log2(||f||/A) + 4) / log2((B+A)/(B-A)))`.
pub fn rate_bound(p: i64, norm: f64, a: f64, b: f64) -> usize {
    ((p as f64 + (norm / a).log2() + 4.0) / ((b + a) / (b - a)).log2()).ceil().max(0.0) as usize
}

fn rate(cf: &CertifiedFrame, out: &mut String, passed: &mut bool) -> Result<(), Failure> {
    let (a, b) = (cf.lower().to_f64().unwrap(), cf.upper().to_f64().unwrap());
    for p in [20i64, 40, 60] {
        let mut ok = true;
        let mut most = 0;
        let mut allowed = 0;
        for f in test_vectors(cf).iter().skip(test_dim(cf)) {
            let run = frame_algorithm_run(cf, &VectorName::from_finite(f), p)?;
            let bound = if cf.lower() == cf.upper() {
                1
            } else {
                rate_bound(p, f.norm_sq().to_f64().unwrap().sqrt(), a, b)
            };
            if cf.lower() == cf.upper() {
                ok &= run.iterations == 1;
            } else {
                ok &= run.iterations <= bound;
            }
            most = most.max(run.iterations);
            allowed = allowed.max(bound);
        }
        *passed &= ok;
        let rel = if cf.lower() == cf.upper() { "=" } else { "<=" };
        let verdict = if ok { "pass" } else { "FAIL" };
        writeln!(out, "  p = {p}: iterations {most} {rel} {allowed} {verdict}").unwrap();
    }
    Ok(())
}

use certframe::duality::{canonical_dual, canonical_pair, builtin_test_vectors, verify_duality_with, DualityForm};
use certframe::fixtures::{self, Fixture};
use certframe::frame::{analysis, frame_algorithm_run, frame_name_of, range_projection, reconstruct, complete_dual_gram_row, synthesis, FrameCoeffName};
use certframe::operator::apply;
use certframe::rational::{pow2, Rational};
use certframe::vector::inner;
use certframe::{FiniteVector, RealName, VectorName};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL_BITS: i64 = 30;

fn tol() -> Rational {
    pow2(-TOL_BITS)
}

fn vectors(fx: &Fixture, count: usize, seed: u64) -> Vec<FiniteVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| FiniteVector::from_dense(&fixtures::random_vector(&mut rng, fx.test_dim())))
        .collect()
}

fn coeff_vectors(fx: &Fixture, count: usize, seed: u64) -> Vec<FiniteVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = fx.frame.frame().len().unwrap_or(8);
    (0..count)
        .map(|_| FiniteVector::from_dense(&fixtures::random_vector(&mut rng, len)))
        .collect()
}

fn real_close(x: &RealName, q: &Rational) -> bool {
    (x.approx(34).to_rational() - q).abs() <= tol()
}

#[test]
fn frame_decomposition_both_orderings() {
    for fx in fixtures::all() {
        let dual = canonical_dual(&fx.frame).unwrap();
        for v in vectors(&fx, 3, 11) {
            let f = VectorName::from_finite(&v);
            let a = reconstruct(&fx.frame, &frame_name_of(&fx.frame, &f));
            let b = synthesis(dual.frame(), &analysis(&fx.frame, &f));
            assert!(a.distance_upper(&f, 34) <= tol(), "{}: dual coefficients", fx.name);
            assert!(b.distance_upper(&f, 34) <= tol(), "{}: primal coefficients", fx.name);
        }
    }
}

#[test]
fn canonical_pair_verifies_in_both_forms() {
    for fx in fixtures::all() {
        let pair = canonical_pair(&fx.frame).unwrap();
        let tests = builtin_test_vectors(fx.frame.frame().dim().or(Some(4)));
        for form in [DualityForm::DualCoefficients, DualityForm::PrimalCoefficients] {
            let r = verify_duality_with(&pair, &tests, &tol(), form);
            assert!(r.passed, "{} {form:?}: {}", fx.name, r.worst);
        }
    }
}

#[test]
fn converters_round_trip() {
    for fx in fixtures::all() {
        for v in vectors(&fx, 2, 5) {
            let f = VectorName::from_finite(&v);
            let c = frame_name_of(&fx.frame, &f);
            let c2 = frame_name_of(&fx.frame, &reconstruct(&fx.frame, &c));
            assert!(c2.as_l2().distance_upper(c.as_l2(), 34) <= tol(), "{}", fx.name);
            let e = c.energy().sub(&c2.energy());
            assert!(real_close(&e, &Rational::zero()), "{}: energy", fx.name);
        }
    }
}

#[test]
fn projection_is_an_orthogonal_projection() {
    for fx in fixtures::all() {
        let p = range_projection(&fx.frame);
        for c in coeff_vectors(&fx, 3, 21) {
            let cv = VectorName::from_finite(&c);
            let pc = apply(&p, &cv);
            assert!(apply(&p, &pc).distance_upper(&pc, 34) <= tol(), "{}: idempotent", fx.name);
            let top = c.entries().last().map_or(0, |e| e.0) + 4;
            let kmax = fx.frame.frame().len().unwrap_or(top);
            let adj: Vec<Rational> = (0..kmax)
                .map(|k| c.entries().iter().map(|(j, q)| fx.gram(*j, k) * q).sum())
                .collect();
            let adj = VectorName::from_rationals(adj);
            assert!(pc.distance_upper(&adj, 34) <= tol(), "{}: self-adjoint", fx.name);
        }
        for v in vectors(&fx, 2, 3) {
            let a = analysis(&fx.frame, &VectorName::from_finite(&v));
            assert!(apply(&p, &a).distance_upper(&a, 34) <= tol(), "{}: fixes the range", fx.name);
        }
    }
}

#[test]
fn gram_row_completion() {
    for fx in fixtures::all() {
        for n in 0..fx.probe_len().min(10) {
            let fnn = fx.frame.elem(n);
            let cf = fx.frame.clone();
            let fn2 = fnn.clone();
            let completed = complete_dual_gram_row(move |k| inner(&fn2, &cf.dual_elem(k)), n);
            let kmax = fx.frame.frame().len().unwrap_or(n + 4);
            let sq: Rational = (0..kmax).map(|k| fx.gram(n, k) * fx.gram(n, k)).sum();
            assert!(real_close(&completed, &sq), "{} n={n}", fx.name);
            assert!(real_close(&completed, &fx.gram(n, n)), "{} n={n}", fx.name);
        }
    }
}

fn rate_bound(p: i64, norm: f64, a: f64, b: f64) -> usize {
    ((p as f64 + (norm / a).log2() + 4.0) / ((b + a) / (b - a)).log2()).ceil().max(0.0) as usize
}

#[test]
fn frame_algorithm_rate() {
    for fx in fixtures::all() {
        let a = fx.frame.lower().to_f64().unwrap();
        let b = fx.frame.upper().to_f64().unwrap();
        for v in vectors(&fx, 2, 9) {
            let f = VectorName::from_finite(&v);
            let norm = v.norm_sq().to_f64().unwrap().sqrt();
            for p in [20, 40, 60] {
                let run = frame_algorithm_run(&fx.frame, &f, p).unwrap();
                if fx.frame.lower() == fx.frame.upper() {
                    assert_eq!(run.iterations, 1, "{}", fx.name);
                } else {
                    assert!(run.iterations <= rate_bound(p, norm, a, b), "{} p={p}: {}", fx.name, run.iterations);
                }
            }
        }
    }
}

#[test]
fn frame_coefficient_names_of_zero() {
    let fx = &fixtures::all()[0];
    let c: FrameCoeffName = frame_name_of(&fx.frame, &VectorName::zero());
    assert!(real_close(&c.energy(), &Rational::zero()));
}

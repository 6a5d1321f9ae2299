use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use certframe::duality::{builtin_test_vectors, canonical_pair, dual_from_bessel, verify_duality};
use certframe::dyadic::Dyadic;
use certframe::frame::{analysis, analysis_coeffs, frame_name_of, reconstruct, Constructed};
use certframe::gallery::{Example, SequenceSpec};
use certframe::operator::apply;
use certframe::oracle::frame_bounds;
use certframe::rational::{pow2, Rational};
use certframe::{FiniteVector, VectorName};
use clap::{Parser, Subcommand};

use crate::render;
use crate::spec::{self, Failure, Loaded};
use crate::suites::{self, Suite};

#[derive(Debug, Parser)]
#[command(name = "certframe", version, about = "Certified frame computations on l2")]
pub struct Cli {
    /// Absolute output precision in binary digits.
    #[arg(short, long, global = true, default_value_t = 30)]
    pub precision: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame-bound enclosures (finite frames) or declared bounds.
    Bounds { spec: PathBuf },
    /// Reconstruct a vector from its canonical frame coefficients.
    Reconstruct {
        spec: PathBuf,
        /// Finitely supported vector, e.g. "0:1,2:-1/3".
        #[arg(long)]
        vector: String,
    },
    /// Analysis coefficients <f, f_i>.
    Analyze {
        spec: PathBuf,
        #[arg(long)]
        vector: String,
    },
    /// Dual frame elements: canonical, or built from a Bessel sequence.
    Dual {
        spec: PathBuf,
        #[arg(long)]
        bessel: Option<PathBuf>,
    },
    /// Run property suites; all of them when no suite is named.
    Verify {
        spec: PathBuf,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
    /// Describe a gallery example.
    Gallery {
        /// ex3.7, ex3.14, ex3.20 or ex3.27.
        name: String,
        /// benign or specker:<enumerator>.
        #[arg(long, default_value = "benign")]
        params: String,
    },
}

/// Runs a command. Returns everything written to standard output and the
/// failure, if any.
pub fn run(cli: &Cli) -> (String, Option<Failure>) {
    let mut out = String::new();
    let result = match &cli.command {
        Command::Bounds { spec } => bounds(&mut out, spec, cli.precision),
        Command::Reconstruct { spec, vector } => reconstruct_cmd(&mut out, spec, vector, cli.precision),
        Command::Analyze { spec, vector } => analyze(&mut out, spec, vector, cli.precision),
        Command::Dual { spec, bessel } => dual(&mut out, spec, bessel.as_deref(), cli.precision),
        Command::Verify { spec, suite } => verify(&mut out, spec, *suite),
        Command::Gallery { name, params } => gallery(&mut out, name, params, cli.precision),
    };
    (out, result.err())
}

fn parse_vector(s: &str) -> Result<FiniteVector, Failure> {
    s.parse().map_err(|e: certframe::Error| Failure::Parse(format!("--vector: {e}")))
}

/// Coordinates worth printing: all of `H_d`, or `max(support) + 4`.
fn shown(loaded: &Loaded, v: &FiniteVector) -> usize {
    let top = v.entries().last().map_or(0, |e| e.0);
    let dim = loaded.frame.as_ref().and_then(|f| f.frame().dim());
    dim.unwrap_or(top + 4)
}

fn check_in_space(loaded: &Loaded, v: &FiniteVector) -> Result<(), Failure> {
    let dim = loaded.frame.as_ref().and_then(|f| f.frame().dim());
    match (dim, v.entries().last()) {
        (Some(d), Some((i, _))) if *i >= d => Err(Failure::Parse(format!(
            "--vector: index {i} is outside H_{d}, the span of e_0, ..., e_{}",
            d - 1
        ))),
        _ => Ok(()),
    }
}

fn mid_decimal(lo: &Rational, hi: &Rational, p: u32) -> String {
    let mid = (lo + hi) / Rational::from_integer(2.into());
    Dyadic::from_rational_round(&mid, p as i64 + 2).to_decimal(render::digits(p))
}

fn bounds(out: &mut String, path: &Path, p: u32) -> Result<(), Failure> {
    let loaded = spec::load(path)?;
    if let Some((f, _)) = &loaded.exact {
        let enc = frame_bounds(f, p + 1)?;
        writeln!(out, "kind: {} ({} vectors in Q^{})", loaded.kind, f.len(), f.dim()).unwrap();
        writeln!(out, "optimal A = {} ± 2^-{p}", mid_decimal(&enc.a_lo, &enc.a_hi, p)).unwrap();
        writeln!(out, "optimal B = {} ± 2^-{p}", mid_decimal(&enc.b_lo, &enc.b_hi, p)).unwrap();
    } else {
        writeln!(out, "kind: {}", loaded.kind).unwrap();
    }
    match &loaded.frame {
        Some(c) => {
            let fr = c.frame();
            let tag = if loaded.declared { "declared" } else { "certified" };
            if fr.lower() == fr.upper() {
                writeln!(out, "A = B = {} ({tag})", render::rational(fr.lower())).unwrap();
            } else {
                writeln!(out, "A = {}, B = {} ({tag})", render::rational(fr.lower()), render::rational(fr.upper())).unwrap();
            }
            if let Some(m) = &loaded.missing {
                writeln!(out, "note: {m}").unwrap();
            }
            Ok(())
        }
        None => Err(Failure::MissingCertificate(loaded.missing.clone().unwrap_or_default())),
    }
}

fn reconstruct_cmd(out: &mut String, path: &Path, vector: &str, p: u32) -> Result<(), Failure> {
    let loaded = spec::load(path)?;
    let v = parse_vector(vector)?;
    let cf = loaded.certified()?;
    check_in_space(&loaded, &v)?;
    let f = VectorName::from_finite(&v);
    let c = frame_name_of(cf, &f);
    let rec = reconstruct(cf, &c);
    writeln!(out, "f = {}", render::coords(&rec, shown(&loaded, &v), p)).unwrap();
    writeln!(out, "energy = {}", render::real(&c.energy(), p)).unwrap();
    writeln!(out, "residual ||f - sum <f, S^-1 f_k> f_k|| <= {}", render::pow2_upper(&rec.distance_upper(&f, p + 2))).unwrap();
    Ok(())
}

fn analyze(out: &mut String, path: &Path, vector: &str, p: u32) -> Result<(), Failure> {
    let loaded = spec::load(path)?;
    let v = parse_vector(vector)?;
    check_in_space(&loaded, &v)?;
    let f = VectorName::from_finite(&v);
    let len = loaded.frame.as_ref().and_then(|c| c.frame().len());
    let n = len.unwrap_or(shown(&loaded, &v) * 2);
    let full = match (&loaded.frame, &loaded.analysis) {
        (Some(Constructed::Certified(cf)), _) => Some(analysis(cf, &f)),
        (_, Some(op)) => Some(apply(op, &f)),
        _ => None,
    };
    match full {
        Some(a) => {
            writeln!(out, "T* f = {}", render::coords(&a, n, p)).unwrap();
            writeln!(out, "||T* f|| = {}", render::real(&a.norm(), p)).unwrap();
        }
        None => {
            let frame = loaded
                .frame
                .as_ref()
                .ok_or_else(|| Failure::MissingCertificate(loaded.missing.clone().unwrap_or_default()))?
                .frame();
            let w = analysis_coeffs(frame, &f);
            let parts: Vec<String> = (0..n).map(|i| render::decimal(&w.coeff(i), p)).collect();
            writeln!(out, "<f, f_i> = ({}, ...) ± 2^-{p}", parts.join(", ")).unwrap();
            writeln!(out, "||T* f||: no certificate; coefficients only, sum of squares <= {}", render::decimal_up(&(w.norm_upper() * w.norm_upper()))).unwrap();
        }
    }
    Ok(())
}

fn dual(out: &mut String, path: &Path, bessel: Option<&Path>, p: u32) -> Result<(), Failure> {
    let loaded = spec::load(path)?;
    let cf = loaded.certified()?;
    let pair = match bessel {
        Some(b) => dual_from_bessel(cf, &spec::load_bessel(b)?)?,
        None => canonical_pair(cf)?,
    };
    let count = cf.frame().len().unwrap_or(4);
    let label = if bessel.is_some() { "alternate" } else { "canonical" };
    writeln!(out, "{label} dual, bounds [{}, {}]", render::rational(pair.dual.lower()), render::upper_bound(pair.dual.upper())).unwrap();
    for k in 0..count {
        let n = cf.frame().dim().unwrap_or(count + 4);
        writeln!(out, "g_{k} = {}", render::coords(&pair.dual.elem(k), n, p)).unwrap();
    }
    let tests = builtin_test_vectors(Some(cf.frame().dim().unwrap_or(4)));
    let report = verify_duality(&pair, &tests, &pow2(-suites::TOL_BITS));
    let verdict = if report.passed { "pass" } else { "FAIL" };
    writeln!(out, "duality residual <= {} on {} test vectors {verdict}", render::pow2_upper(&report.worst), tests.len()).unwrap();
    Ok(())
}

fn verify(out: &mut String, path: &Path, suite: Option<Suite>) -> Result<(), Failure> {
    let loaded = spec::load(path)?;
    let chosen: Vec<Suite> = suite.map_or_else(|| Suite::ALL.to_vec(), |s| vec![s]);
    let mut failed = Vec::new();
    for s in chosen {
        let outcome = suites::run(&loaded, s)?;
        out.push_str(&outcome.report);
        if !outcome.passed {
            failed.push(s.name());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Suite(format!("failed suites: {}", failed.join(", "))))
    }
}

fn gallery(out: &mut String, name: &str, params: &str, p: u32) -> Result<(), Failure> {
    let example = Example::parse(name)?;
    let gen = SequenceSpec::parse(params)?.build()?;
    writeln!(out, "{} with {params}", example.name()).unwrap();
    let parts: Vec<String> = (0..8).map(|i| render::decimal(&gen.a(i), p)).collect();
    writeln!(out, "a = ({}, ...) ± 2^-{p}", parts.join(", ")).unwrap();
    writeln!(out, "sum a_i^2 <= {}", render::rational(gen.sq_sum_upper())).unwrap();
    match gen.norm() {
        Some(n) => writeln!(out, "||a|| = {}", render::real(n, p)).unwrap(),
        None => writeln!(out, "||a||: no name").unwrap(),
    }
    let built = example.build(&gen);
    let frame = match &built {
        Ok(Constructed::Certified(_)) => "certified frame",
        Ok(Constructed::Plain(_)) => "frame without analysis certificate",
        Err(_) => "no names for the frame elements",
    };
    writeln!(out, "construction: {frame}").unwrap();
    Ok(())
}

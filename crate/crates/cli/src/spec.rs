//! Frame spec files and their translation into kernel objects.

use std::path::Path;

use certframe::frame::{frame_from_operator, Constructed, Frame};
use certframe::gallery::{self, Example, SequenceGen, SequenceSpec};
use certframe::oracle::{self, exact_frame_solve, frame_bounds, ExactFrame, ExactSolution};
use certframe::rational::{format_rational, parse_rational};
use certframe::riesz::{riesz_as_frame, RieszBasisName};
use certframe::{fixtures, CertifiedFrame, Error, OperatorName, Rational};
use serde::Deserialize;

/// Why a command could not run, with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Suite(String),
    Parse(String),
    InvalidFrame(String),
    MissingCertificate(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Suite(_) => 1,
            Failure::Parse(_) => 2,
            Failure::InvalidFrame(_) => 3,
            Failure::MissingCertificate(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Suite(m) | Failure::Parse(m) | Failure::InvalidFrame(m) | Failure::MissingCertificate(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Parse(m),
            Error::MissingNorm(what) => Failure::MissingCertificate(missing_message(what)),
            other => Failure::InvalidFrame(other.to_string()),
        }
    }
}

pub fn missing_message(what: &str) -> String {
    format!(
        "no analysis certificate: {what} has no name. The coefficients <f, f_i> are still \
         computable one by one, but without a norm for the coefficient sequence the analysis \
         operator cannot produce l2 names, so this command is unavailable"
    )
}

type RawMatrix = Vec<Vec<String>>;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpecFile {
    Onb {
        #[serde(default)]
        repeat: Option<usize>,
    },
    Finite {
        vectors: RawMatrix,
        #[serde(default)]
        bounds: Option<[String; 2]>,
        #[serde(default)]
        dual: Option<RawMatrix>,
    },
    Operator {
        matrix: RawMatrix,
        #[serde(rename = "C")]
        c: String,
        #[serde(default)]
        adjoint_rows: Option<RawMatrix>,
    },
    Gallery { gallery: GallerySpec },
    Riesz {
        #[serde(rename = "T")]
        t: RawMatrix,
        #[serde(rename = "T_inv")]
        t_inv: RawMatrix,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GallerySpec {
    pub name: String,
    pub params: String,
}

/// A Bessel sequence file: finitely many vectors and an optional bound.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesselFile {
    pub vectors: RawMatrix,
    #[serde(default)]
    pub bound: Option<String>,
}

/// A loaded spec.
pub struct Loaded {
    pub kind: &'static str,
    /// The frame, when it can be constructed at all.
    pub frame: Option<Constructed>,
    /// Why a certificate is missing, if it is.
    pub missing: Option<String>,
    /// An analysis operator available even without a frame.
    pub analysis: Option<OperatorName>,
    /// The exact frame and its solution, for finite specs.
    pub exact: Option<(ExactFrame, ExactSolution)>,
    /// Declared bounds, for kinds without an oracle.
    pub declared: bool,
    /// An explicitly supplied dual frame.
    pub dual: Option<Frame>,
    pub dual_exact: Option<ExactFrame>,
    pub gallery: Option<(Example, SequenceGen)>,
}

impl Loaded {
    pub fn certified(&self) -> Result<&CertifiedFrame, Failure> {
        match &self.frame {
            Some(Constructed::Certified(cf)) => Ok(cf),
            _ => Err(Failure::MissingCertificate(
                self.missing.clone().unwrap_or_else(|| missing_message("the analysis operator")),
            )),
        }
    }
}

fn json_error(path: &str, e: serde_path_to_error::Error<serde_json::Error>) -> Failure {
    let inner = e.inner();
    let at = if inner.line() == 0 { String::new() } else { format!(":{}:{}", inner.line(), inner.column()) };
    Failure::Parse(format!("{path}{at}: at `{}`: {inner}", e.path()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{name}: {e}")))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| json_error(&name, e))
}

fn matrix(field: &str, rows: &RawMatrix) -> Result<Vec<Vec<Rational>>, Failure> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| parse_rational(s).map_err(|e| Failure::Parse(format!("{field}[{i}][{j}]: {e}"))))
                .collect()
        })
        .collect()
}

fn rational(field: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::Parse(format!("{field}: {e}")))
}

fn exact(field: &str, vectors: Vec<Vec<Rational>>) -> Result<ExactFrame, Failure> {
    let d = vectors.first().map_or(0, Vec::len);
    ExactFrame::new(vectors, d).map_err(|e| Failure::InvalidFrame(format!("{field}: {e}")))
}

impl Loaded {
    fn empty(kind: &'static str) -> Self {
        Loaded {
            kind,
            frame: None,
            missing: None,
            analysis: None,
            exact: None,
            declared: false,
            dual: None,
            dual_exact: None,
            gallery: None,
        }
    }
}

pub fn load(path: &Path) -> Result<Loaded, Failure> {
    let spec: SpecFile = read_json(path)?;
    build(spec)
}

pub fn build(spec: SpecFile) -> Result<Loaded, Failure> {
    match spec {
        SpecFile::Onb { repeat } => {
            let r = repeat.unwrap_or(1);
            if r == 0 {
                return Err(Failure::Parse("repeat: must be at least 1".into()));
            }
            let cf = fixtures::repeated_onb(r);
            Ok(Loaded {
                analysis: Some(cf.analysis_operator().clone()),
                frame: Some(Constructed::Certified(cf)),
                declared: true,
                ..Loaded::empty("onb")
            })
        }
        SpecFile::Finite { vectors, bounds, dual } => {
            let declared = bounds.is_some();
            let f = exact("vectors", matrix("vectors", &vectors)?)?;
            let sol = exact_frame_solve(&f)?;
            let cf = match bounds {
                None => oracle::embed(&f)?,
                Some([a, b]) => {
                    let (a, b) = (rational("bounds[0]", &a)?, rational("bounds[1]", &b)?);
                    let enc = frame_bounds(&f, 40)?;
                    if a > enc.a_lo || b < enc.b_hi {
                        return Err(Failure::InvalidFrame(format!(
                            "declared bounds [{}, {}] are not certified: the optimal bounds lie in [{}, {}] and [{}, {}]",
                            format_rational(&a),
                            format_rational(&b),
                            format_rational(&enc.a_lo),
                            format_rational(&enc.a_hi),
                            format_rational(&enc.b_lo),
                            format_rational(&enc.b_hi)
                        )));
                    }
                    let t = OperatorName::from_finite_matrix(&f.synthesis_matrix())?;
                    let tstar = OperatorName::from_finite_matrix(f.vectors())?;
                    CertifiedFrame::new(Frame::new(t, a, b)?, tstar)
                }
            };
            let (dual, dual_exact) = match dual {
                None => (None, None),
                Some(rows) => {
                    let g = exact("dual", matrix("dual", &rows)?)?;
                    if g.len() != f.len() || g.dim() != f.dim() {
                        return Err(Failure::InvalidFrame(format!(
                            "dual has {} vectors of length {}, expected {} of length {}",
                            g.len(),
                            g.dim(),
                            f.len(),
                            f.dim()
                        )));
                    }
                    let frame = oracle::embed(&g).map_err(|e| Failure::InvalidFrame(format!("dual: {e}")))?;
                    (Some(frame.frame().clone()), Some(g))
                }
            };
            Ok(Loaded {
                analysis: Some(cf.analysis_operator().clone()),
                frame: Some(Constructed::Certified(cf)),
                exact: Some((f, sol)),
                dual,
                dual_exact,
                declared,
                ..Loaded::empty("finite")
            })
        }
        SpecFile::Operator { matrix: rows, c, adjoint_rows } => {
            let m = matrix("matrix", &rows)?;
            let c = rational("C", &c)?;
            let u = OperatorName::from_finite_matrix(&m)?;
            let f = exact("matrix", oracle::transpose(&m))?;
            let sol = exact_frame_solve(&f)?;
            if c.clone() * c.clone() > sol.bounds.a_lo {
                return Err(Failure::InvalidFrame(format!(
                    "surjectivity constant C = {} is not certified: C^2 exceeds the lower bound {}",
                    format_rational(&c),
                    format_rational(&sol.bounds.a_lo)
                )));
            }
            let adjoint = match adjoint_rows {
                None => None,
                Some(a) => {
                    let a = matrix("adjoint_rows", &a)?;
                    if a != oracle::transpose(&m) {
                        return Err(Failure::InvalidFrame("adjoint_rows is not the transpose of matrix".into()));
                    }
                    Some(OperatorName::from_finite_matrix(&a)?)
                }
            };
            let has_adjoint = adjoint.is_some();
            let constructed = frame_from_operator(&u, &c, adjoint.clone())?;
            Ok(Loaded {
                frame: Some(constructed),
                missing: (!has_adjoint).then(|| missing_message("the adjoint U*")),
                analysis: adjoint,
                exact: Some((f, sol)),
                ..Loaded::empty("operator")
            })
        }
        SpecFile::Gallery { gallery: g } => {
            let example = Example::parse(&g.name)?;
            let gen = SequenceSpec::parse(&g.params)?.build()?;
            let analysis = match example {
                Example::UpperRow => gallery::upper_row_adjoint(&gen).ok(),
                Example::LowerColumn => Some(gallery::lower_column_analysis(&gen)),
                Example::Rows => Some(gallery::row_shape_analysis(&gen)),
                Example::Toeplitz => Some(gallery::Toeplitz::new(&gen).adjoint()),
            };
            let (frame, missing) = match example.build(&gen) {
                Ok(c @ Constructed::Certified(_)) => (Some(c), None),
                Ok(c @ Constructed::Plain(_)) => (Some(c), Some(missing_message("the l2 norm of (a_i)"))),
                Err(Error::MissingNorm(what)) => (None, Some(missing_message(what))),
                Err(e) => return Err(e.into()),
            };
            Ok(Loaded {
                frame,
                missing,
                analysis,
                declared: true,
                gallery: Some((example, gen)),
                ..Loaded::empty("gallery")
            })
        }
        SpecFile::Riesz { t, t_inv } => {
            let r = RieszBasisName::from_finite_block(&matrix("T", &t)?, &matrix("T_inv", &t_inv)?)?;
            let cf = riesz_as_frame(&r);
            Ok(Loaded {
                analysis: Some(cf.analysis_operator().clone()),
                frame: Some(Constructed::Certified(cf)),
                declared: true,
                ..Loaded::empty("riesz")
            })
        }
    }
}

pub fn load_bessel(path: &Path) -> Result<certframe::duality::BesselSequence, Failure> {
    let file: BesselFile = read_json(path)?;
    let vectors = matrix("vectors", &file.vectors)?;
    let bound = file.bound.as_deref().map(|b| rational("bound", b)).transpose()?;
    Ok(certframe::duality::BesselSequence::from_finite(vectors, bound)?)
}

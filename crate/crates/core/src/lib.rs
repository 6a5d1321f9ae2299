//! Certified-precision frame theory on the sequence space l2.
//!
//! Every point the kernel hands out is a *name*: an oracle that, asked for
//! precision `n`, answers with a dyadic approximation whose error is at most
//! `2^-n`. Reals are [`RealName`]s, vectors of l2 are [`VectorName`]s (their
//! coefficients together with a name of their norm), and bounded operators are
//! [`OperatorName`]s given column by column. Frames, their analysis/synthesis
//! operators, the frame operator and its inverse, and dual frames are built on
//! top of these, so every result carries its own error certificate.
//!
//! Hypotheses that are true but undecidable (frame bounds, surjectivity
//! constants, adjoint data, norms) enter as caller-supplied certificates. The
//! [`oracle`] module provides exact rational ground truth for
//! finite-dimensional frames.

#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod duality;
pub mod dyadic;
pub mod error;
pub mod fixtures;
pub mod frame;
pub mod gallery;
pub mod operator;
pub mod oracle;
pub mod rational;
pub mod real;
pub mod riesz;
pub mod vector;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use frame::{CertifiedFrame, Frame, FrameCoeffName};
pub use operator::OperatorName;
pub use rational::Rational;
pub use real::RealName;
pub use vector::{DyadicVector, FiniteVector, VectorName, WeakVectorName};

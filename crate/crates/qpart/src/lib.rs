//! Exact symbolic engine for quiver mutation sequences.
//!
//! The crate executes mutation sequences on framed quivers while tracking
//! c-vectors, mutation signs and the linear forms satisfied by the attached
//! state variables; computes the partition function of a sequence — a graded
//! noncommutative series whose coefficients are products of q-binomial
//! mutation weights — and machine-checks the identities that express such
//! partition functions as ratios of quantum dilogarithm products.
//!
//! All arithmetic is exact: coefficients live in the field of fractions of
//! integer Laurent polynomials in `v = q^(1/2)`, with arbitrary-precision
//! integer coefficients. There is no floating point anywhere.
//!
//! Module layout:
//! - [`qcoeff`]: Laurent polynomials in `v`, their fraction field,
//!   q-Pochhammer symbols and q-binomial coefficients (valid for negative
//!   upper argument).
//! - [`quiver`]: quivers as skew-symmetric integer matrices, mutation,
//!   framed/ice quivers, c-vectors, green/red signs, sequence
//!   classification and frozen isomorphism search.
//! - [`torus`]: the truncated quantum torus — graded noncommutative series,
//!   monomial commutation, inverses and quantum dilogarithm series.
//! - [`trace`]: execution of a mutation sequence with symbolic s/k/k∨
//!   bookkeeping, mutation weights and the partition function.
//! - [`verify`]: machine checks of the dilogarithm-ratio and
//!   sequence-invariance identities, plus rendering of the resulting
//!   q-binomial multisum identities.

pub mod qcoeff;
pub mod quiver;
pub mod torus;
pub mod trace;
pub mod verify;

pub use qcoeff::{qbinom, qpochhammer, ArithError, LaurentPoly, RationalV, Sign};
pub use quiver::{
    classify_sequence, frozen_isomorphism, CVector, IceQuiver, MutationSequence, Quiver,
    QuiverError, SequenceClassification,
};
pub use torus::{Monomial, Series, SeriesRepr, SkewForm, TorusError};
pub use trace::{
    coefficient, mutation_weight, partition_function, run_trace, LinForm, MutationTrace,
    TraceError, TraceReport,
};
pub use verify::{
    render_identity, stanley_check, stanley_suite, theorem1_check, theorem2_check, RenderedIdentity,
    Status, VerificationReport, VerifyError,
};

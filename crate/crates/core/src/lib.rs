//! Exact rational engine for finite-type commutative differential graded
//! algebras, with constructors for the rational models of framed bundles,
//! Stiefel manifolds and the mapping spaces that describe components of
//! `Imm(M, R^{m+k})`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command-line front end live in the `ratimm` companion crate.
//!
//! Layers, bottom up:
//!
//! * [`gca`] and [`parse`]: free graded-commutative algebras over the
//!   rationals, Koszul signs, monomial bases and the expression grammar.
//! * [`linalg`]: fraction-free sparse elimination (plus a dense rational
//!   eliminator kept as an independent cross-check).
//! * [`finite`], [`cdga`], [`cohomology`], [`morphism`], [`tensor`]: the
//!   CDGA engine proper.
//! * [`bundle`]: classifying-space algebras, the Borel associated-bundle
//!   model, framed-bundle and Stiefel models, rational triviality.
//! * [`mapping`], [`series`], [`immersion`]: mapping-space factors,
//!   Poincaré series and the assembled immersion-space description.
#![no_std]

extern crate alloc;

pub mod bundle;
pub mod cdga;
pub mod cohomology;
pub mod error;
pub mod finite;
pub mod gca;
pub mod immersion;
pub mod linalg;
pub mod mapping;
pub mod morphism;
pub mod parse;
pub mod series;
pub mod tensor;

pub use cdga::{Cdga, CdgaElement, FreeCdga, RelativeModel, Term, Violation};
pub use cohomology::{cohomology, cohomology_dense, cohomology_with_representatives, BettiTable};
pub use error::{AlgebraError, ParseError};
pub use finite::{FiniteCdga, FiniteCdgaBuilder};
pub use gca::{Element, Generator, GeneratorSet, Monomial};
pub use morphism::{is_quasi_iso, CdgaMorphism, QuasiIsoReport};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;

/// Sparse rational vector: strictly increasing indices, no zero entries.
pub type SparseVec = alloc::vec::Vec<(usize, Rational)>;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(n))
}

pub(crate) fn sign_rat(negative: bool) -> Rational {
    if negative {
        rat(-1)
    } else {
        rat(1)
    }
}

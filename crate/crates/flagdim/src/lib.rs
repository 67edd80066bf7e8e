//! Canonical p-dimension bookkeeping for flag varieties of central simple
//! algebras.
//!
//! Everything here is exact combinatorics over factored integers. The
//! library answers two kinds of question about the flag varieties
//! `X_{d_1,...,d_k}(A)` of a central division algebra A:
//!
//! * **what is cdim_p?** — [`cdim::cdim`] reduces any flag to a product of
//!   generalized Severi-Brauer varieties of primary algebras and matches it
//!   against a database of known exact values, returning an exact value or
//!   a provenance-tagged interval, never an invented bound;
//! * **why is X_e 2-incompressible?** — for ind A = 2e a power of 2,
//!   [`parity::certify_incompressible`] replays the double-coset
//!   enumeration of the cut-at-e parabolic ([`weyl`]), the motivic
//!   decomposition of X_e x X_e it induces ([`motive`]), and an
//!   index-arithmetic parity certificate per Chow summand ([`parity`]),
//!   each certificate re-checkable by an independent verifier walk.
//!
//! Reductions carry traces, the rank bookkeeping is verified against exact
//! Gaussian-multinomial identities, and equivalence of variety expressions
//! is decidable by enumerating finite field states ([`arith::FieldState`]).

pub mod arith;
pub mod cdim;
pub mod error;
pub mod flags;
pub mod motive;
pub mod output;
pub mod parity;
pub mod weyl;

pub use arith::{factor, AlgebraClass, FactoredIndex, FieldState, PrimaryFactor};
pub use cdim::{cdim, explain, CdimQuery, CdimResult};
pub use error::{Error, Result};
pub use flags::{
    decompose_primary_variety, equivalent, reduce_flag, upper_bound_cdim, FlagSpec,
    ReductionTrace, VarietyExpr,
};
pub use motive::{
    decompose_square, middle_chow_decomposition, poincare_polynomial, verify_rank_identity,
    ChowSummand, IntegerPolynomial, MotiveDecomposition, MotiveSummand,
};
pub use parity::{
    certify_incompressible, even_degree_ch0, flag_summand_parity, verify_certificates,
    IncompressibilityVerdict, ParityCertificate, ParityStep, Verdict,
};
pub use weyl::{
    associated_subset, brute_force_double_cosets, coset_representative, enumerate_double_cosets,
    simple_reflection, CosetSummand, Permutation, RootSubset,
};

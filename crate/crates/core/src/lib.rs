//! Exact PBW checking for quotients H_{q,κ} of the skew group algebra T(V) # G
//! by the relations v_i v_j − q_ij v_j v_i − κ(v_i, v_j).
//!
//! All arithmetic is exact over a cyclotomic field Q(ζ_N). The crate is
//! `no_std` and only needs `alloc`; file formats and the command line live in
//! the `orbifold` crate.
#![no_std]

extern crate alloc;

pub mod field;
pub mod group;
pub mod kappa;
pub mod pbw;
pub mod rewrite;

pub use field::{root_of_unity, CycField, CycScalar, FieldError, Rational};
pub use group::{
    check_q_compatibility, lemma21_diagnostics, CompatibilityViolation, GroupData, GroupElement,
    GroupError, LemmaViolation, Matrix, QMatrix, QMatrixError,
};
pub use kappa::{KappaEntry, KappaMap, KappaViolation};
pub use pbw::{
    check_condition1, check_condition2, check_condition3, check_condition4, check_pbw_oracle,
    check_pbw_theorem, cross_check, normal_form_basis_count, Condition, CrossCheck, PbwReport,
    Provenance, Residual, Verdict, Violation, Witness,
};
pub use rewrite::{
    order_compare, FreeElement, Letter, NormalMonomial, ReductionSystem, Resolution, Strategy,
    SystemError, Word, WordOrdering,
};

//! Problem files, the expression language and the `orbifold` command line
//! built on [`orbifold_core`].

pub mod commands;
pub mod expr;
pub mod problem;
pub mod report;

/// Process exit codes. They depend only on the verdict, never on how many
/// violations were found.
pub mod exit {
    pub const PBW: u8 = 0;
    pub const NOT_PBW: u8 = 1;
    pub const INVALID: u8 = 2;
    /// The group does not act by automorphisms of S_q(V).
    pub const PRECONDITION: u8 = 3;
    /// Theorem and oracle disagree.
    pub const MISMATCH: u8 = 4;
}

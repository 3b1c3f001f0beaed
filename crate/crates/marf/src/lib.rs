//! Classification machinery for m-Arf functions on hyperbolic 2-orbifolds.
//!
//! The crate has an exact half and a numeric half.  The exact half
//! ([`signature`], [`arf`], [`mcg`], [`moduli`]) decides liftability of a
//! Fuchsian group into the degree-`m` connected cover of PSL(2,R), enumerates
//! m-Arf functions through their values on a standard generating system, acts
//! on them by generalized Dehn twists, and reports the connected components of
//! the corresponding moduli space.  The numeric half ([`moebius`],
//! [`covering`], [`fuchsian`]) constructs explicit matrix generators, lifts
//! them to covers realized as boundary-circle lifts, and verifies the level
//! identities that the exact half takes as axioms.

// Comparisons written as `!(x < tol)` are deliberate throughout the numeric
// half: a NaN must count as a failure, which the suggested `x >= tol` would
// silently pass.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arf;
pub mod covering;
pub mod fuchsian;
pub mod mcg;
pub mod moduli;
pub mod moebius;
pub mod signature;

pub use arf::{enumerate_all, ArfError, ArfFunction};
pub use covering::{canonical_lift, central, CoveringError, LevelValue, LiftedElement};
pub use fuchsian::{
    canonical_lift_product_check, is_sequential, lift_with_cone_levels, lift_with_levels,
    make_genus1, make_signature, make_triple, verify_arf_axioms, AxiomReport, FuchsianError,
    LiftedSequentialSet, SequentialCheck, SequentialSet, RELATION_TOLERANCE,
};
pub use mcg::{
    apply_twist, available_moves, classify_orbits, normal_form, orbit, McgError, OrbitClass,
    TwistKind, TwistMove, DEFAULT_BUDGET,
};
pub use moduli::{components, Component, ComponentReport, ModuliError};
pub use moebius::{
    axes_intersect, hyperbolic_with_axis, rotation_about, Boundary, ElementClass, MoebiusError,
    MoebiusTransformation,
};
pub use signature::{elliptic_level, ArfType, Liftability, Residue, Signature, SignatureError};

// Compile and run the guide's code samples as doctests, so the book in
// `book/` cannot drift from the API it documents.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(signatures, "../../../book/src/signatures.md");
    chapter!(arf_functions, "../../../book/src/arf-functions.md");
    chapter!(twist_moves, "../../../book/src/twist-moves.md");
    chapter!(geometry, "../../../book/src/geometry.md");
    chapter!(covers, "../../../book/src/covering.md");
    chapter!(components, "../../../book/src/components.md");
    chapter!(cli, "../../../book/src/cli.md");
    chapter!(readme, "../../../README.md");
}

//! Randomized exactness checks for the cover-level arithmetic.
//!
//! See [`common`] for the samplers and the laws themselves.

mod common;

#[test]
fn conjugation_preserves_level() {
    common::check_conjugation(500, 0);
}

#[test]
fn inversion_negates_level() {
    common::check_inversion(500, 0);
}

#[test]
fn crossing_axes_add_levels() {
    common::check_crossing_additivity(200, 0);
}

//! Shared samplers and exactness runners for the randomized level checks.
//!
//! The level of a cover element is an integer, and the laws checked here must
//! hold exactly: any mismatch, and any refusal of the rounding guard, is a
//! bug.  The samplers keep matrix entries moderate on purpose — that is the
//! regime the library itself works in, and it keeps every rounding decision
//! far away from the guard threshold.

use marf::{
    axes_intersect, canonical_lift, central, hyperbolic_with_axis, rotation_about, Boundary,
    LevelValue, LiftedElement, MoebiusTransformation,
};
use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn level(x: &LiftedElement) -> i64 {
    match x.level().expect("level must be measurable") {
        LevelValue::Int(k) => k,
        LevelValue::Mod(r) => i64::from(r.value()),
    }
}

/// Two circle angles whose circular distance is at least `gap`, so the axis
/// through them is well separated from degeneracy.
fn separated_angles(rng: &mut ChaCha8Rng, gap: f64) -> (f64, f64) {
    loop {
        let a = rng.gen_range(0.0..TAU);
        let b = rng.gen_range(0.0..TAU);
        let d = (a - b).abs();
        if d.min(TAU - d) >= gap {
            return (a, b);
        }
    }
}

pub fn random_hyperbolic(rng: &mut ChaCha8Rng) -> MoebiusTransformation {
    let (a, r) = separated_angles(rng, 0.9);
    hyperbolic_with_axis(
        Boundary::from_angle(a),
        Boundary::from_angle(r),
        rng.gen_range(0.4..1.5),
    )
    .expect("distinct feet give a hyperbolic element")
}

/// An elliptic element of finite order between 3 and 12 about a point at
/// moderate height.
pub fn random_elliptic(rng: &mut ChaCha8Rng) -> MoebiusTransformation {
    let p: u32 = rng.gen_range(3..=12);
    let mut k = rng.gen_range(1..p);
    while k.gcd(&p) != 1 {
        k = rng.gen_range(1..p);
    }
    let center = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(0.5..2.0));
    rotation_about(center, TAU * f64::from(k) / f64::from(p))
        .expect("interior point gives a rotation")
}

/// A random cover element: a shifted canonical lift of a hyperbolic or
/// elliptic element, or a central element.
pub fn random_lifted(rng: &mut ChaCha8Rng) -> LiftedElement {
    let shift = rng.gen_range(-3..=3);
    match rng.gen_range(0..5) {
        0 => central(shift, 0),
        1 | 2 => canonical_lift(&random_elliptic(rng), 0)
            .expect("canonical lift of a rotation")
            .shift_level(shift),
        _ => canonical_lift(&random_hyperbolic(rng), 0)
            .expect("canonical lift of a hyperbolic element")
            .shift_level(shift),
    }
}

/// A non-central random cover element whose base is not of order two, so its
/// inverse has a well-defined level negation.
pub fn random_invertible(rng: &mut ChaCha8Rng) -> LiftedElement {
    let shift = rng.gen_range(-3..=3);
    if rng.gen_bool(0.4) {
        canonical_lift(&random_elliptic(rng), 0)
            .expect("canonical lift of a rotation")
            .shift_level(shift)
    } else {
        canonical_lift(&random_hyperbolic(rng), 0)
            .expect("canonical lift of a hyperbolic element")
            .shift_level(shift)
    }
}

/// Two hyperbolic elements whose axes cross: feet interleave around the
/// circle, so the geodesics between them must intersect.
pub fn crossing_pair(rng: &mut ChaCha8Rng) -> (MoebiusTransformation, MoebiusTransformation) {
    loop {
        let mut t = [0.0f64; 4];
        for v in &mut t {
            *v = rng.gen_range(0.0..TAU);
        }
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ok = true;
        for i in 0..4 {
            let d = (t[(i + 1) % 4] - t[i]).rem_euclid(TAU);
            ok &= d.min(TAU - d) >= 0.5;
        }
        if !ok {
            continue;
        }
        let a = hyperbolic_with_axis(
            Boundary::from_angle(t[0]),
            Boundary::from_angle(t[2]),
            rng.gen_range(0.4..1.5),
        )
        .unwrap();
        let b = hyperbolic_with_axis(
            Boundary::from_angle(t[1]),
            Boundary::from_angle(t[3]),
            rng.gen_range(0.4..1.5),
        )
        .unwrap();
        assert!(
            axes_intersect(&a, &b).unwrap(),
            "interleaved feet must give crossing axes"
        );
        return (a, b);
    }
}

/// `lev(g x g^-1) == lev(x)` for `rounds` random pairs.
pub fn check_conjugation(rounds: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..rounds {
        let x = random_lifted(&mut rng);
        let g = random_invertible(&mut rng);
        let conj = g
            .multiply(&x)
            .and_then(|gx| gx.multiply(&g.invert()?))
            .unwrap_or_else(|e| panic!("round {round}: conjugation failed: {e}"));
        assert_eq!(
            level(&conj),
            level(&x),
            "round {round}: conjugation changed the level"
        );
    }
}

/// `lev(x^-1) == -lev(x)` for `rounds` random elements not of order two.
pub fn check_inversion(rounds: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..rounds {
        let x = random_invertible(&mut rng);
        let inv = x
            .invert()
            .unwrap_or_else(|e| panic!("round {round}: inversion failed: {e}"));
        assert_eq!(
            level(&inv),
            -level(&x),
            "round {round}: inverse level is not the negation"
        );
    }
}

/// `lev(AB) == lev(A) + lev(B)` for `rounds` random pairs of lifted
/// hyperbolic elements with crossing axes.
pub fn check_crossing_additivity(rounds: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..rounds {
        let (a, b) = crossing_pair(&mut rng);
        let la = canonical_lift(&a, 0)
            .unwrap()
            .shift_level(rng.gen_range(-3..=3));
        let lb = canonical_lift(&b, 0)
            .unwrap()
            .shift_level(rng.gen_range(-3..=3));
        let product = la
            .multiply(&lb)
            .unwrap_or_else(|e| panic!("round {round}: product failed: {e}"));
        assert_eq!(
            level(&product),
            level(&la) + level(&lb),
            "round {round}: crossing-axes product level is not additive"
        );
    }
}

//! The universal cover of `PSL(2,R)` and its finite quotients, realized as
//! lifts of the boundary-circle action.
//!
//! An element of the cover is a pair `(base, anchor)`: the base isometry plus
//! the value at `0` of an increasing lift of its circle action (circle angles
//! come from the Cayley transform onto the disk).  One real number picks the
//! sheet, products and inverses stay exact up to floating-point error, and
//! the integer level falls out of fixed-point displacements.
//!
//! Anchors are stored unreduced even for finite modulus `m`; equality and
//! levels reduce modulo `2*pi*m` at the point of comparison.  Reducing the
//! anchor in storage would make multi-step products ambiguous (an elliptic
//! level needs the exact winding of a `p`-fold product, which a stored
//! residue cannot supply).

use crate::moebius::{ElementClass, MoebiusTransformation};
use crate::signature::Residue;
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;
use thiserror::Error;

/// Residual (as a fraction of a full turn) above which level extraction
/// refuses to round.
const LEVEL_RESIDUAL_LIMIT: f64 = 0.1;
/// Largest elliptic order the rotation-angle recognizer will consider.
const MAX_ELLIPTIC_ORDER: u32 = 512;
/// Largest matrix entry for which the boundary-lift formula still resolves
/// branches in double precision.
///
/// An element with entries of size `E` squeezes its boundary action into a
/// region of width about `1/E^2`; once relative entry noise reaches that
/// width the argument in [`LiftedElement::evaluate`] can flip sign, which is
/// a silent error of a full turn — invisible to the rounding guard.  At
/// `E = 1e5` the flip margin is still four orders above the noise floor, so
/// branch-sensitive operations refuse anything larger rather than guess.
const CONDITIONING_LIMIT: f64 = 1e5;

/// Errors from cover arithmetic and level extraction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoveringError {
    /// Two elements live in different covers.
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    /// A quantity that must be an integer (of turns) was too far from one.
    #[error("{what}: residual {residual:.3e} of a turn exceeds the rounding guard")]
    NumericallyAmbiguous { what: String, residual: f64 },
    /// An elliptic base whose rotation angle matches no order up to the
    /// recognizer bound.
    #[error("elliptic rotation angle {angle} matches no order up to {MAX_ELLIPTIC_ORDER}")]
    UnknownEllipticOrder { angle: f64 },
}

/// Level of a cover element: a plain integer in the universal cover, a
/// residue in a finite cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelValue {
    Int(i64),
    Mod(Residue),
}

impl LevelValue {
    /// The level as an integer; for a finite cover, the canonical residue
    /// representative in `0..m`.
    pub fn integer(&self) -> i64 {
        match self {
            LevelValue::Int(k) => *k,
            LevelValue::Mod(r) => i64::from(r.value()),
        }
    }

    /// `true` when the level is zero (in the respective group).
    pub fn is_zero(&self) -> bool {
        self.integer() == 0
    }

    /// Negation in the respective group.
    pub fn neg(&self) -> LevelValue {
        match self {
            LevelValue::Int(k) => LevelValue::Int(-k),
            LevelValue::Mod(r) => LevelValue::Mod(-*r),
        }
    }
}

impl fmt::Display for LevelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelValue::Int(k) => write!(f, "{k}"),
            LevelValue::Mod(r) => write!(f, "{r}"),
        }
    }
}

/// An element of the universal cover (`modulus == 0`) or of the connected
/// `m`-fold cover of `PSL(2,R)` (`modulus == m >= 1`).
#[derive(Debug, Clone, Copy)]
pub struct LiftedElement {
    base: MoebiusTransformation,
    anchor: f64,
    modulus: u32,
}

/// The central element `u^k`: the lift of the identity ending a path of `k`
/// full rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentralElement {
    pub exponent: i64,
}

impl CentralElement {
    pub fn lifted(&self, modulus: u32) -> LiftedElement {
        central(self.exponent, modulus)
    }
}

/// `u^k` as a cover element.
pub fn central(k: i64, modulus: u32) -> LiftedElement {
    LiftedElement {
        base: MoebiusTransformation::identity(),
        anchor: TAU * k as f64,
        modulus,
    }
}

impl LiftedElement {
    pub fn base(&self) -> &MoebiusTransformation {
        &self.base
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The increasing lift of the boundary-circle action, evaluated at any
    /// real angle.
    ///
    /// With disk coefficients `(A, B)` the circle action is
    /// `phi(theta) = 2 arg A + theta + 2 Arg(1 + (B/A) e^{-i theta})` up to a
    /// constant in `2*pi*Z`; since `|B/A| < 1` the last term stays in
    /// `(-pi/2, pi/2)` and the whole expression is continuous, so a single
    /// anchor pins the branch globally.
    pub fn evaluate(&self, theta: f64) -> f64 {
        self.anchor + theta + 2.0 * (self.wobble(theta) - self.wobble(0.0))
    }

    fn wobble(&self, theta: f64) -> f64 {
        let (a, b) = self.base.disk_coefficients();
        let q = b / a;
        (Complex64::new(1.0, 0.0) + q * Complex64::from_polar(1.0, -theta)).arg()
    }

    /// Refuse elements too degenerate for reliable branch selection.
    fn conditioned(&self, what: &str) -> Result<(), CoveringError> {
        let worst = self
            .base
            .a()
            .abs()
            .max(self.base.b().abs())
            .max(self.base.c().abs())
            .max(self.base.d().abs());
        if worst > CONDITIONING_LIMIT {
            return Err(CoveringError::NumericallyAmbiguous {
                what: format!("{what} of an element with entries of size {worst:.1e}"),
                residual: worst * worst * f64::EPSILON,
            });
        }
        Ok(())
    }

    /// Group product; as circle maps, `self` is applied after `other`.
    pub fn multiply(&self, other: &LiftedElement) -> Result<LiftedElement, CoveringError> {
        if self.modulus != other.modulus {
            return Err(CoveringError::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        self.conditioned("product anchor")?;
        Ok(LiftedElement {
            base: self.base.compose(&other.base),
            anchor: self.evaluate(other.anchor),
            modulus: self.modulus,
        })
    }

    /// Group inverse: the functional inverse of the lift.
    pub fn invert(&self) -> Result<LiftedElement, CoveringError> {
        self.conditioned("inverse branch")?;
        let rough = LiftedElement {
            base: self.base.inverse(),
            anchor: 0.0,
            modulus: self.modulus,
        };
        let candidate = rough.raw_anchor();
        // Some branch of the inverse lift composes with ours to a whole
        // number of turns; subtracting it lands on the true inverse.
        let turns = self.evaluate(candidate) / TAU;
        let k = turns.round();
        if (turns - k).abs() > LEVEL_RESIDUAL_LIMIT {
            return Err(CoveringError::NumericallyAmbiguous {
                what: "inverse branch".into(),
                residual: (turns - k).abs(),
            });
        }
        Ok(LiftedElement {
            base: self.base.inverse(),
            anchor: candidate - TAU * k,
            modulus: self.modulus,
        })
    }

    fn raw_anchor(&self) -> f64 {
        let (a, _) = self.base.disk_coefficients();
        2.0 * a.arg() + 2.0 * self.wobble(0.0)
    }

    /// Integer power.
    pub fn pow(&self, n: i64) -> Result<LiftedElement, CoveringError> {
        if n == 0 {
            return Ok(central(0, self.modulus));
        }
        let base = if n < 0 { self.invert()? } else { *self };
        let mut acc = base;
        for _ in 1..n.abs() {
            acc = acc.multiply(&base)?;
        }
        Ok(acc)
    }

    /// Compose with `u^k`: raises the level by `k`.
    pub fn shift_level(&self, k: i64) -> LiftedElement {
        LiftedElement {
            base: self.base,
            anchor: self.anchor + TAU * k as f64,
            modulus: self.modulus,
        }
    }

    /// Which sheet of the cover this element lies on.
    ///
    /// Non-elliptic bases displace their boundary fixed point by a whole
    /// number of turns; elliptic bases of order `p` are placed by the lifted
    /// rotation angle `tau`, with `tau = pi` belonging to the sheet below
    /// (half-open intervals, closed on the right).
    pub fn level(&self) -> Result<LevelValue, CoveringError> {
        self.conditioned("level")?;
        let k = match self.base.classify() {
            ElementClass::Identity => self.rounded_turns(self.anchor, "central level")?,
            ElementClass::Hyperbolic { attracting, .. } => {
                let theta = attracting.angle();
                self.rounded_turns(self.evaluate(theta) - theta, "hyperbolic level")?
            }
            ElementClass::Parabolic { fixed, .. } => {
                let theta = fixed.angle();
                self.rounded_turns(self.evaluate(theta) - theta, "parabolic level")?
            }
            ElementClass::Elliptic { angle, .. } => {
                let p = recognize_order(&self.base, angle)?;
                let mut x = 0.0;
                for _ in 0..p {
                    x = self.evaluate(x);
                }
                // x is a whole number of turns; tau = x/p is the lifted
                // rotation angle, and the level interval test
                // -pi + 2 pi k < tau <= pi + 2 pi k becomes exact integer
                // arithmetic: k = ceil((2w - p) / (2p)).
                let w = self.rounded_turns(x, "elliptic winding")?;
                num_integer::Integer::div_ceil(&(2 * w - i64::from(p)), &i64::from(2 * p))
            }
        };
        Ok(match self.modulus {
            0 => LevelValue::Int(k),
            m => LevelValue::Mod(Residue::new(k, m)),
        })
    }

    fn rounded_turns(&self, displacement: f64, what: &str) -> Result<i64, CoveringError> {
        let turns = displacement / TAU;
        let k = turns.round();
        if (turns - k).abs() > LEVEL_RESIDUAL_LIMIT {
            return Err(CoveringError::NumericallyAmbiguous {
                what: what.into(),
                residual: (turns - k).abs(),
            });
        }
        Ok(k as i64)
    }

    /// Equality in the respective cover: same projection and same sheet
    /// (anchors compared modulo `2*pi*m` for finite modulus).
    pub fn approx_eq(&self, other: &LiftedElement) -> bool {
        if self.modulus != other.modulus || !self.base.approx_eq(&other.base) {
            return false;
        }
        let diff = self.anchor - other.anchor;
        let period = match self.modulus {
            0 => return diff.abs() < 1e-6,
            m => TAU * f64::from(m),
        };
        let r = diff.rem_euclid(period);
        r < 1e-6 || period - r < 1e-6
    }

    /// `true` when this is the unit of its cover.
    pub fn is_unit(&self) -> bool {
        self.approx_eq(&central(0, self.modulus))
    }
}

impl fmt::Display for LiftedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} @ {:.6} turns (mod {})",
            self.base,
            self.anchor / TAU,
            self.modulus
        )
    }
}

/// The preimage of `base` on sheet zero.
///
/// Non-elliptic: the lift fixing a boundary fixed-point angle.  Elliptic:
/// the lift whose rotation angle lies in `(-pi, pi]` (order 2 lands exactly
/// on the closed endpoint `pi`).
pub fn canonical_lift(
    base: &MoebiusTransformation,
    modulus: u32,
) -> Result<LiftedElement, CoveringError> {
    let raw = LiftedElement {
        base: *base,
        anchor: 0.0,
        modulus: 0,
    };
    let raw = LiftedElement {
        anchor: raw.raw_anchor(),
        ..raw
    };
    let k = match raw.level()? {
        LevelValue::Int(k) => k,
        LevelValue::Mod(_) => unreachable!("raw lift is built in the universal cover"),
    };
    Ok(LiftedElement {
        anchor: raw.anchor - TAU * k as f64,
        modulus,
        ..raw
    })
}

/// Smallest `p` with `base^p = 1` in `PSL(2,R)`, found from the rotation
/// angle and confirmed on the matrix.
fn recognize_order(base: &MoebiusTransformation, angle: f64) -> Result<u32, CoveringError> {
    let turns = angle / TAU;
    for p in 2..=MAX_ELLIPTIC_ORDER {
        let q = (turns * f64::from(p)).round();
        if (turns * f64::from(p) - q).abs() < 1e-6 * f64::from(p)
            && base.pow(p as i32).approx_eq(&MoebiusTransformation::identity())
        {
            return Ok(p);
        }
    }
    Err(CoveringError::UnknownEllipticOrder { angle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::moebius::{hyperbolic_with_axis, rotation_about, Boundary};

    fn rot(x: Complex64, phi: f64) -> MoebiusTransformation {
        rotation_about(x, phi).unwrap()
    }

    fn hyp(att: f64, rep: f64, shift: f64) -> MoebiusTransformation {
        hyperbolic_with_axis(Boundary::Finite(att), Boundary::Finite(rep), shift).unwrap()
    }

    #[test]
    fn canonical_lift_examples() {
        let id = canonical_lift(&MoebiusTransformation::identity(), 0).unwrap();
        assert!(id.anchor().abs() < 1e-9);
        assert_eq!(id.level().unwrap(), LevelValue::Int(0));

        let fifth = canonical_lift(&rot(Complex64::i(), TAU / 5.0), 0).unwrap();
        assert_eq!(fifth.level().unwrap(), LevelValue::Int(0));

        let parabolic = canonical_lift(
            &MoebiusTransformation::new(1.0, 1.0, 0.0, 1.0).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(parabolic.level().unwrap(), LevelValue::Int(0));

        let deep = canonical_lift(&hyp(2.0, -2.0, 1.5), 0).unwrap();
        assert_eq!(deep.level().unwrap(), LevelValue::Int(0));
    }

    #[test]
    fn lift_evaluation_is_periodic_and_increasing() {
        let e = canonical_lift(&hyp(1.0, -1.0, 0.7), 0).unwrap();
        let mut prev = e.evaluate(-TAU);
        for i in 1..=200 {
            let theta = -TAU + TAU * 2.0 * f64::from(i) / 200.0;
            let val = e.evaluate(theta);
            assert!(val > prev, "lift must increase");
            prev = val;
        }
        for theta in [-1.0, 0.0, 0.4, 2.0] {
            let diff = e.evaluate(theta + TAU) - e.evaluate(theta);
            assert!((diff - TAU).abs() < 1e-9, "one period up, one turn up");
        }
    }

    #[test]
    fn central_elements_translate() {
        let u3 = central(3, 0);
        assert_eq!(u3.level().unwrap(), LevelValue::Int(3));
        let u2 = central(2, 0);
        assert!(u3.multiply(&u2).unwrap().approx_eq(&central(5, 0)));
        assert!(u3.invert().unwrap().approx_eq(&central(-3, 0)));
        assert_eq!(CentralElement { exponent: 3 }.lifted(0).level().unwrap(), LevelValue::Int(3));
    }

    #[test]
    fn half_turn_squared_is_the_full_rotation() {
        let half = canonical_lift(&rot(Complex64::i(), PI), 0).unwrap();
        assert_eq!(half.level().unwrap(), LevelValue::Int(0));
        let squared = half.multiply(&half).unwrap();
        assert!(squared.approx_eq(&central(1, 0)));

        // Same through pow, and off-center.
        let half_off = canonical_lift(&rot(Complex64::new(0.7, 2.0), PI), 0).unwrap();
        assert!(half_off.pow(2).unwrap().approx_eq(&central(1, 0)));
    }

    #[test]
    fn rotation_power_reaches_the_center() {
        for p in [3i64, 5, 7] {
            let r = canonical_lift(&rot(Complex64::i(), TAU / p as f64), 0).unwrap();
            assert!(r.pow(p).unwrap().approx_eq(&central(1, 0)), "p = {p}");
        }
        // With a level shift n the p-th power becomes u^{n p + 1}.
        let r = canonical_lift(&rot(Complex64::i(), TAU / 5.0), 0).unwrap();
        let shifted = r.shift_level(3);
        assert!(shifted.pow(5).unwrap().approx_eq(&central(16, 0)));
    }

    #[test]
    fn inverse_undoes_multiplication() {
        let elements = [
            canonical_lift(&hyp(1.0, -1.0, 0.9), 0).unwrap().shift_level(2),
            canonical_lift(&rot(Complex64::new(0.3, 1.2), TAU / 7.0), 0)
                .unwrap()
                .shift_level(-1),
            canonical_lift(&MoebiusTransformation::new(1.0, -2.0, 0.0, 1.0).unwrap(), 0).unwrap(),
        ];
        for e in &elements {
            let inv = e.invert().unwrap();
            assert!(e.multiply(&inv).unwrap().is_unit());
            assert!(inv.multiply(e).unwrap().is_unit());
        }
    }

    #[test]
    fn level_laws_spot_checks() {
        let a = canonical_lift(&hyp(3.0, -0.5, 1.1), 0).unwrap().shift_level(2);
        let b = canonical_lift(&rot(Complex64::new(-1.0, 0.8), TAU / 3.0), 0)
            .unwrap()
            .shift_level(-1);

        // Conjugation preserves the level.
        let conj = b.multiply(&a).unwrap().multiply(&b.invert().unwrap()).unwrap();
        assert_eq!(conj.level().unwrap(), a.level().unwrap());

        // Inversion negates it (base not of order 2).
        assert_eq!(a.invert().unwrap().level().unwrap(), LevelValue::Int(-2));
        assert_eq!(b.invert().unwrap().level().unwrap(), LevelValue::Int(1));

        // Crossing axes: levels add.
        let h1 = canonical_lift(&hyp(1.0, -1.0, 0.8), 0).unwrap();
        let h2 = canonical_lift(&hyp(5.0, 0.0, 1.3), 0).unwrap();
        assert_eq!(h1.multiply(&h2).unwrap().level().unwrap(), LevelValue::Int(0));
        let j = h1.shift_level(4);
        let k = h2.shift_level(-2);
        assert_eq!(j.multiply(&k).unwrap().level().unwrap(), LevelValue::Int(2));
    }

    #[test]
    fn finite_modulus_wraps() {
        let m = 4;
        let e = canonical_lift(&hyp(2.0, -2.0, 1.0), m).unwrap();
        assert!(e.shift_level(m as i64).approx_eq(&e));
        assert!(!e.shift_level(1).approx_eq(&e));
        assert_eq!(
            e.shift_level(7).level().unwrap(),
            LevelValue::Mod(Residue::new(3, m))
        );
        assert!(central(m as i64, m).is_unit());
    }

    #[test]
    fn modulus_mismatch_is_rejected() {
        let a = central(1, 2);
        let b = central(1, 3);
        assert!(matches!(
            a.multiply(&b),
            Err(CoveringError::ModulusMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn levels_are_invariant_under_reframing() {
        // Changing the boundary parametrization amounts to conjugating every
        // element by a fixed isometry; levels must not move.
        let frame = MoebiusTransformation::new(1.3, 0.4, 0.2, 1.0).unwrap();
        let framed = canonical_lift(&frame, 0).unwrap();
        let samples = [
            canonical_lift(&hyp(0.0, 4.0, 0.6), 0).unwrap().shift_level(1),
            canonical_lift(&rot(Complex64::new(2.0, 0.5), 3.0 * TAU / 7.0), 0)
                .unwrap()
                .shift_level(-2),
            canonical_lift(&MoebiusTransformation::new(1.0, 0.0, -2.5, 1.0).unwrap(), 0)
                .unwrap(),
        ];
        for e in &samples {
            let reframed = framed
                .multiply(e)
                .unwrap()
                .multiply(&framed.invert().unwrap())
                .unwrap();
            assert_eq!(reframed.level().unwrap(), e.level().unwrap());
        }
    }

    #[test]
    fn order_two_lands_on_the_closed_endpoint() {
        // Rotation by pi has lifted angle exactly pi: sheet zero, and its
        // inverse is itself times u^{-1} (the exceptional case of the
        // inversion law).
        let half = canonical_lift(&rot(Complex64::new(1.0, 1.0), PI), 0).unwrap();
        assert_eq!(half.level().unwrap(), LevelValue::Int(0));
        let inv = half.invert().unwrap();
        assert_eq!(inv.level().unwrap(), LevelValue::Int(-1));
    }
}

//! Isometries of the hyperbolic plane: real Moebius transformations, their
//! trace classification, rotations, axis tests, and positivity conventions.
//!
//! Matrices are kept in `SL(2,R)` with a canonical sign, so every value
//! represents an element of `PSL(2,R)` unambiguously.  Classification is a
//! sharp three-way trace test with a fixed tolerance band; callers that
//! construct transformations inside the band get the band's answer.

use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;
use thiserror::Error;

/// Trace band half-width separating parabolic from elliptic/hyperbolic.
pub const CLASS_EPSILON: f64 = 1e-9;
/// Entrywise tolerance for matrix equality after sign canonicalization.
pub const ENTRY_TOLERANCE: f64 = 1e-7;

/// Errors from construction and classification of isometries.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoebiusError {
    /// Determinant not positive (or numerically zero); not an orientation
    /// preserving isometry.
    #[error("matrix with determinant {det:.3e} is not in GL+(2,R)")]
    Degenerate { det: f64 },
    /// An operation needing hyperbolic (or parabolic) input got something else.
    #[error("element is {found}, expected {expected}")]
    WrongClass {
        expected: &'static str,
        found: &'static str,
    },
    /// Two hyperbolic elements share their axis, so the crossing test is
    /// undefined.
    #[error("the two axes coincide")]
    SharedAxis,
    /// A fixed point sits at infinity where a finite comparison is required;
    /// conjugate to finite position first.
    #[error("fixed point at infinity; conjugate to finite position first")]
    Infinite,
    /// Rotation center not strictly inside the upper half-plane.
    #[error("rotation center {0} is not in the open upper half-plane")]
    NotInterior(Complex64),
}

/// A point of the boundary circle of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Finite(f64),
    Infinity,
}

impl Boundary {
    /// Angle of this point on the unit circle under the Cayley transform
    /// `z -> (z - i)/(z + i)`, in `[0, 2*pi)`.  Infinity maps to angle `0`.
    pub fn angle(&self) -> f64 {
        match *self {
            Boundary::Infinity => 0.0,
            Boundary::Finite(x) => {
                let w = (Complex64::new(x, -1.0)) / (Complex64::new(x, 1.0));
                w.arg().rem_euclid(TAU)
            }
        }
    }

    /// Inverse of [`Boundary::angle`].
    pub fn from_angle(theta: f64) -> Boundary {
        let w = Complex64::from_polar(1.0, theta);
        let denom = Complex64::new(1.0, 0.0) - w;
        if denom.norm() < 1e-12 {
            return Boundary::Infinity;
        }
        let z = Complex64::i() * (Complex64::new(1.0, 0.0) + w) / denom;
        Boundary::Finite(z.re)
    }

    /// Compare two boundary points within `tol` (projectively: two points are
    /// close when their circle angles are).
    pub fn approx_eq(&self, other: &Boundary, tol: f64) -> bool {
        let d = (self.angle() - other.angle()).rem_euclid(TAU);
        d < tol || TAU - d < tol
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Infinity => write!(f, "inf"),
            Boundary::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// Conjugacy class data of an isometry.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementClass {
    Identity,
    /// Axis oriented from the repelling to the attracting fixed point;
    /// `shift` is the hyperbolic translation length `2*arccosh(|tr|/2)`.
    Hyperbolic {
        attracting: Boundary,
        repelling: Boundary,
        shift: f64,
    },
    /// `positive` means boundary points move counterclockwise (for the fixed
    /// point at infinity: `x -> x + t` with `t > 0`).
    Parabolic { fixed: Boundary, positive: bool },
    /// Counterclockwise rotation by `angle` in `(0, 2*pi)` about `fixed`.
    Elliptic { fixed: Complex64, angle: f64 },
}

impl ElementClass {
    /// Short class name for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            ElementClass::Identity => "identity",
            ElementClass::Hyperbolic { .. } => "hyperbolic",
            ElementClass::Parabolic { .. } => "parabolic",
            ElementClass::Elliptic { .. } => "elliptic",
        }
    }
}

/// An element of `PSL(2,R)`: a real matrix with `ad - bc = 1` and the first
/// nonzero entry of `(a, b, c)` positive.
#[derive(Debug, Clone, Copy)]
pub struct MoebiusTransformation {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MoebiusTransformation {
    /// Normalize a positive-determinant matrix into the canonical form.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, MoebiusError> {
        let det = a * d - b * c;
        if !(det.is_finite() && det > 1e-12) {
            return Err(MoebiusError::Degenerate { det });
        }
        let s = det.sqrt();
        Ok(Self::canonicalized(a / s, b / s, c / s, d / s))
    }

    fn canonicalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        let lead = [a, b, c]
            .into_iter()
            .find(|x| x.abs() > 1e-9)
            .unwrap_or(d);
        if lead < 0.0 {
            MoebiusTransformation {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            MoebiusTransformation { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        MoebiusTransformation {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Trace of the canonical representative.
    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Matrix product; as maps, `self` is applied after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::canonicalized(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::canonicalized(self.d, -self.b, -self.c, self.a)
    }

    /// Conjugate `self` by `g`, i.e. `g * self * g^-1`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.compose(self).compose(&g.inverse())
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, n: i32) -> Self {
        let (mut base, mut n) = if n < 0 {
            (self.inverse(), -i64::from(n))
        } else {
            (*self, i64::from(n))
        };
        let mut acc = Self::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            n >>= 1;
        }
        acc
    }

    /// Action on the upper half-plane.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Action on the boundary circle.
    pub fn apply_boundary(&self, x: Boundary) -> Boundary {
        match x {
            Boundary::Infinity => {
                if self.c.abs() < 1e-12 {
                    Boundary::Infinity
                } else {
                    Boundary::Finite(self.a / self.c)
                }
            }
            Boundary::Finite(x) => {
                let denom = self.c * x + self.d;
                if denom.abs() < 1e-12 {
                    Boundary::Infinity
                } else {
                    Boundary::Finite((self.a * x + self.b) / denom)
                }
            }
        }
    }

    /// Entrywise agreement within [`ENTRY_TOLERANCE`] (representatives are
    /// already sign-canonical).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.distance(other) < ENTRY_TOLERANCE
    }

    /// Largest entrywise deviation from `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .into_iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Coefficients `(A, B)` of the conjugated disk-model matrix
    /// `[[A, B], [conj B, conj A]]` in `SU(1,1)`, satisfying
    /// `|A|^2 - |B|^2 = 1`.
    pub(crate) fn disk_coefficients(&self) -> (Complex64, Complex64) {
        let a = Complex64::new((self.a + self.d) / 2.0, (self.b - self.c) / 2.0);
        let b = Complex64::new((self.a - self.d) / 2.0, -(self.b + self.c) / 2.0);
        (a, b)
    }

    /// Conjugacy class with fixed-point and displacement data.
    pub fn classify(&self) -> ElementClass {
        let t = self.trace();
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if t.abs() > 2.0 + CLASS_EPSILON {
            let shift = 2.0 * (t.abs() / 2.0).acosh();
            let (fix1, fix2) = if c.abs() < 1e-12 {
                (Boundary::Infinity, Boundary::Finite(b / (d - a)))
            } else {
                let s = (t * t - 4.0).sqrt();
                (
                    Boundary::Finite((a - d + s) / (2.0 * c)),
                    Boundary::Finite((a - d - s) / (2.0 * c)),
                )
            };
            // The attracting fixed point is the one where |derivative| < 1.
            let attracting_first = match fix1 {
                Boundary::Infinity => a.abs() > d.abs(),
                Boundary::Finite(x) => (c * x + d).abs() > 1.0,
            };
            let (attracting, repelling) = if attracting_first {
                (fix1, fix2)
            } else {
                (fix2, fix1)
            };
            ElementClass::Hyperbolic {
                attracting,
                repelling,
                shift,
            }
        } else if t.abs() < 2.0 - CLASS_EPSILON {
            // c = 0 forces |a + 1/a| >= 2, so elliptic implies c != 0; the
            // fixed points are a conjugate pair and we take the upper one.
            let s = (4.0 - t * t).sqrt();
            let fixed = Complex64::new((a - d) / (2.0 * c), (s / (2.0 * c)).abs());
            let mu = Complex64::new(c, 0.0) * fixed + d;
            // Derivative at the fixed point is 1/mu^2 = e^{i * angle}.
            let angle = (-2.0 * mu.arg()).rem_euclid(TAU);
            ElementClass::Elliptic { fixed, angle }
        } else if b.abs() < 1e-9 && c.abs() < 1e-9 && (a - d).abs() < 1e-9 {
            ElementClass::Identity
        } else {
            let fixed = if c.abs() < 1e-12 {
                Boundary::Infinity
            } else {
                Boundary::Finite((a - d) / (2.0 * c))
            };
            let positive = if c.abs() < 1e-12 {
                // z -> z + b*d with a = d = +-1.
                b * d > 0.0
            } else {
                // Near the finite fixed point the displacement has the sign
                // of -c * trace.
                c * t < 0.0
            };
            ElementClass::Parabolic { fixed, positive }
        }
    }

    /// `true` for a positive hyperbolic (attracting < repelling, both finite)
    /// or positive parabolic element.
    pub fn is_positive(&self) -> Result<bool, MoebiusError> {
        match self.classify() {
            ElementClass::Hyperbolic {
                attracting,
                repelling,
                ..
            } => match (attracting, repelling) {
                (Boundary::Finite(at), Boundary::Finite(rep)) => Ok(at < rep),
                _ => Err(MoebiusError::Infinite),
            },
            ElementClass::Parabolic { positive, .. } => Ok(positive),
            other => Err(MoebiusError::WrongClass {
                expected: "hyperbolic or parabolic",
                found: other.name(),
            }),
        }
    }
}

impl fmt::Display for MoebiusTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            self.a, self.b, self.c, self.d
        )
    }
}

/// Counterclockwise rotation by `phi` about the interior point `x`.
pub fn rotation_about(x: Complex64, phi: f64) -> Result<MoebiusTransformation, MoebiusError> {
    if !(x.im > 0.0) {
        return Err(MoebiusError::NotInterior(x));
    }
    let (s, c) = (phi / 2.0).sin_cos();
    let rot = MoebiusTransformation::canonicalized(c, s, -s, c);
    let root = x.im.sqrt();
    let to_x = MoebiusTransformation::canonicalized(root, x.re / root, 0.0, 1.0 / root);
    Ok(rot.conjugate_by(&to_x))
}

/// Hyperbolic element translating by `shift > 0` along the axis oriented from
/// `repelling` to `attracting`.
pub fn hyperbolic_with_axis(
    attracting: Boundary,
    repelling: Boundary,
    shift: f64,
) -> Result<MoebiusTransformation, MoebiusError> {
    assert!(shift > 0.0, "translation length must be positive");
    let lambda = (shift / 2.0).exp();
    let diag = MoebiusTransformation::canonicalized(lambda, 0.0, 0.0, 1.0 / lambda);
    // Send (0, infinity) to (repelling, attracting).
    let frame = match (attracting, repelling) {
        (Boundary::Finite(at), Boundary::Finite(rep)) => {
            if at > rep {
                MoebiusTransformation::new(at, rep, 1.0, 1.0)?
            } else {
                MoebiusTransformation::new(at, -rep, 1.0, -1.0)?
            }
        }
        (Boundary::Infinity, Boundary::Finite(rep)) => {
            MoebiusTransformation::new(1.0, rep, 0.0, 1.0)?
        }
        (Boundary::Finite(at), Boundary::Infinity) => {
            MoebiusTransformation::new(at, -1.0, 1.0, 0.0)?
        }
        (Boundary::Infinity, Boundary::Infinity) => return Err(MoebiusError::SharedAxis),
    };
    Ok(diag.conjugate_by(&frame))
}

/// Whether the axes of two hyperbolic elements cross in the open half-plane
/// (strict interleaving of the four boundary fixed points).
pub fn axes_intersect(
    m1: &MoebiusTransformation,
    m2: &MoebiusTransformation,
) -> Result<bool, MoebiusError> {
    let ends = |m: &MoebiusTransformation| match m.classify() {
        ElementClass::Hyperbolic {
            attracting,
            repelling,
            ..
        } => Ok((attracting.angle(), repelling.angle())),
        other => Err(MoebiusError::WrongClass {
            expected: "hyperbolic",
            found: other.name(),
        }),
    };
    let (a1, r1) = ends(m1)?;
    let (a2, r2) = ends(m2)?;
    let close = |x: f64, y: f64| {
        let d = (x - y).rem_euclid(TAU);
        d < 1e-7 || TAU - d < 1e-7
    };
    let same = (close(a1, a2) && close(r1, r2)) || (close(a1, r2) && close(r1, a2));
    if same {
        return Err(MoebiusError::SharedAxis);
    }
    // Interleaved iff exactly one endpoint of the second axis lies on the
    // counterclockwise arc from a1 to r1.
    let arc = (r1 - a1).rem_euclid(TAU);
    let inside = |x: f64| (x - a1).rem_euclid(TAU) < arc;
    Ok(inside(a2) != inside(r2))
}

/// A rotation conjugator moving every listed boundary point to a finite
/// position (the midpoint of the largest angular gap is sent to infinity).
pub fn conjugator_to_finite(points: &[Boundary]) -> MoebiusTransformation {
    if points.is_empty() {
        return MoebiusTransformation::identity();
    }
    let mut angles: Vec<f64> = points.iter().map(|p| p.angle()).collect();
    angles.sort_by(f64::total_cmp);
    let mut best_gap = TAU - angles[angles.len() - 1] + angles[0];
    let mut best_mid = (angles[angles.len() - 1] + TAU + angles[0]) / 2.0;
    for w in angles.windows(2) {
        let gap = w[1] - w[0];
        if gap > best_gap {
            best_gap = gap;
            best_mid = (w[0] + w[1]) / 2.0;
        }
    }
    // The rotation about i shifts every circle angle by its own angle
    // parameter; move the gap midpoint onto the angle of infinity (0).
    rotation_about(Complex64::i(), (-best_mid).rem_euclid(TAU))
        .expect("i is interior")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hyp(att: f64, rep: f64) -> MoebiusTransformation {
        hyperbolic_with_axis(Boundary::Finite(att), Boundary::Finite(rep), 1.0).unwrap()
    }

    #[test]
    fn classify_examples() {
        let m = MoebiusTransformation::new(2.0, 0.0, 0.0, 0.5).unwrap();
        match m.classify() {
            ElementClass::Hyperbolic {
                attracting,
                repelling,
                shift,
            } => {
                assert_eq!(attracting, Boundary::Infinity);
                assert!(repelling.approx_eq(&Boundary::Finite(0.0), 1e-9));
                assert!((shift - 2.0 * f64::ln(2.0)).abs() < 1e-9, "shift {shift}");
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }

        let p = MoebiusTransformation::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            p.classify(),
            ElementClass::Parabolic {
                fixed: Boundary::Infinity,
                positive: true
            }
        );

        let e = MoebiusTransformation::new(0.0, 1.0, -1.0, 0.0).unwrap();
        match e.classify() {
            ElementClass::Elliptic { fixed, angle } => {
                assert!((fixed - Complex64::i()).norm() < 1e-9);
                assert!((angle - PI).abs() < 1e-9);
            }
            other => panic!("expected elliptic, got {other:?}"),
        }

        assert_eq!(
            MoebiusTransformation::identity().classify(),
            ElementClass::Identity
        );
    }

    #[test]
    fn degenerate_matrices_are_rejected() {
        assert!(matches!(
            MoebiusTransformation::new(1.0, 2.0, 2.0, 4.0),
            Err(MoebiusError::Degenerate { .. })
        ));
        assert!(matches!(
            MoebiusTransformation::new(0.0, 1.0, 1.0, 0.0),
            Err(MoebiusError::Degenerate { .. })
        ));
    }

    #[test]
    fn sign_canonicalization() {
        let m = MoebiusTransformation::new(-2.0, 0.0, 0.0, -0.5).unwrap();
        assert!(m.a() > 0.0);
        let n = MoebiusTransformation::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(n.b() > 0.0, "leading entry of (a,b,c) must be positive");
    }

    #[test]
    fn rotation_examples() {
        let r = rotation_about(Complex64::i(), PI).unwrap();
        assert!(r.approx_eq(&MoebiusTransformation::new(0.0, 1.0, -1.0, 0.0).unwrap()));

        // Angle additivity and full turn.
        let x = Complex64::new(0.3, 2.0);
        let small = rotation_about(x, 0.4).unwrap();
        let rest = rotation_about(x, TAU - 0.4).unwrap();
        assert!(rest.compose(&small).approx_eq(&MoebiusTransformation::identity()));

        let fifth = rotation_about(Complex64::i(), TAU / 5.0).unwrap();
        assert!(fifth.pow(5).approx_eq(&MoebiusTransformation::identity()));

        let a = rotation_about(x, 1.1).unwrap();
        let b = rotation_about(x, 2.2).unwrap();
        assert!(a.compose(&b).approx_eq(&rotation_about(x, 3.3).unwrap()));

        assert!(matches!(
            rotation_about(Complex64::new(1.0, -2.0), PI),
            Err(MoebiusError::NotInterior(_))
        ));
    }

    #[test]
    fn rotation_classifies_with_its_own_data() {
        for (x, phi) in [
            (Complex64::new(0.0, 1.0), 0.7),
            (Complex64::new(-1.5, 0.4), 2.0 * PI / 5.0),
            (Complex64::new(2.0, 3.0), 5.5),
        ] {
            match rotation_about(x, phi).unwrap().classify() {
                ElementClass::Elliptic { fixed, angle } => {
                    assert!((fixed - x).norm() < 1e-7, "{x} {phi}");
                    assert!((angle - phi).abs() < 1e-7, "{x} {phi} got {angle}");
                }
                other => panic!("expected elliptic, got {other:?}"),
            }
        }
    }

    #[test]
    fn hyperbolic_axis_construction_round_trips() {
        for (att, rep) in [(1.0, -1.0), (-3.0, 0.5), (0.0, 2.0)] {
            let m = hyperbolic_with_axis(Boundary::Finite(att), Boundary::Finite(rep), 0.8)
                .unwrap();
            match m.classify() {
                ElementClass::Hyperbolic {
                    attracting,
                    repelling,
                    shift,
                } => {
                    assert!(attracting.approx_eq(&Boundary::Finite(att), 1e-7));
                    assert!(repelling.approx_eq(&Boundary::Finite(rep), 1e-7));
                    assert!((shift - 0.8).abs() < 1e-9);
                }
                other => panic!("axis ({att},{rep}): got {other:?}"),
            }
        }
        let up = hyperbolic_with_axis(Boundary::Infinity, Boundary::Finite(0.0), 2.0 * f64::ln(2.0))
            .unwrap();
        assert!(up.approx_eq(&MoebiusTransformation::new(2.0, 0.0, 0.0, 0.5).unwrap()));
    }

    #[test]
    fn axes_intersection_examples() {
        let vertical = MoebiusTransformation::new(2.0, 0.0, 0.0, 0.5).unwrap(); // axis (0, inf)
        assert!(axes_intersect(&vertical, &hyp(-1.0, 1.0)).unwrap());
        assert!(!axes_intersect(&hyp(0.0, 1.0), &hyp(2.0, 3.0)).unwrap());
        assert!(axes_intersect(&hyp(0.0, 2.0), &hyp(1.0, 3.0)).unwrap());

        assert!(matches!(
            axes_intersect(&hyp(0.0, 1.0), &hyp(1.0, 0.0)),
            Err(MoebiusError::SharedAxis)
        ));
        let elliptic = rotation_about(Complex64::i(), 1.0).unwrap();
        assert!(matches!(
            axes_intersect(&vertical, &elliptic),
            Err(MoebiusError::WrongClass { .. })
        ));
    }

    #[test]
    fn positivity_conventions() {
        assert!(hyp(0.0, 1.0).is_positive().unwrap());
        assert!(!hyp(1.0, 0.0).is_positive().unwrap());
        let translation = MoebiusTransformation::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(translation.is_positive().unwrap());
        let back = MoebiusTransformation::new(1.0, -1.0, 0.0, 1.0).unwrap();
        assert!(!back.is_positive().unwrap());

        // Conjugation preserves parabolic positivity.
        let s = MoebiusTransformation::new(0.0, 1.0, -1.0, 0.0).unwrap();
        assert!(translation.conjugate_by(&s).is_positive().unwrap());

        let vertical = MoebiusTransformation::new(2.0, 0.0, 0.0, 0.5).unwrap();
        assert!(matches!(vertical.is_positive(), Err(MoebiusError::Infinite)));
        assert!(matches!(
            rotation_about(Complex64::i(), 1.0).unwrap().is_positive(),
            Err(MoebiusError::WrongClass { .. })
        ));
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let samples = [
            hyp(-2.0, 3.0),
            MoebiusTransformation::new(1.0, 1.0, 0.0, 1.0).unwrap(),
            rotation_about(Complex64::new(0.5, 1.5), 2.0 * PI / 7.0).unwrap(),
        ];
        let conjugators = [
            MoebiusTransformation::new(3.0, 1.0, 0.0, 1.0 / 3.0).unwrap(),
            MoebiusTransformation::new(0.2, 1.0, -1.0, 0.4).unwrap(),
            hyp(5.0, -5.0),
        ];
        for m in &samples {
            for g in &conjugators {
                let before = m.classify();
                let after = m.conjugate_by(g).classify();
                assert_eq!(before.name(), after.name());
                match (before, after) {
                    (
                        ElementClass::Hyperbolic { shift: s1, .. },
                        ElementClass::Hyperbolic { shift: s2, .. },
                    ) => assert!((s1 - s2).abs() < 1e-6),
                    (
                        ElementClass::Elliptic { angle: a1, .. },
                        ElementClass::Elliptic { angle: a2, .. },
                    ) => assert!((a1 - a2).abs() < 1e-6),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn hyperbolic_moves_axis_midpoint_by_shift() {
        let m = hyp(-1.0, 1.0);
        // The axis is the unit semicircle; its midpoint is i.
        let z = Complex64::i();
        let w = m.apply(z);
        let displacement = 2.0
            * (((w - z).norm() / (2.0 * (z.im * w.im).sqrt())).asinh());
        assert!((displacement - 1.0).abs() < 1e-6, "moved by {displacement}");
    }

    #[test]
    fn boundary_angle_round_trip() {
        for x in [-10.0, -1.0, 0.0, 0.3, 2.0, 50.0] {
            let p = Boundary::Finite(x);
            assert!(p.approx_eq(&Boundary::from_angle(p.angle()), 1e-9));
        }
        assert!(Boundary::Infinity
            .approx_eq(&Boundary::from_angle(Boundary::Infinity.angle()), 1e-9));
        // Real order matches counterclockwise circle order.
        let a: Vec<f64> = [-5.0, -1.0, 0.0, 1.0, 4.0]
            .iter()
            .map(|&x| Boundary::Finite(x).angle())
            .collect();
        assert!(a.windows(2).all(|w| w[0] < w[1]), "{a:?}");
    }

    #[test]
    fn conjugator_moves_points_off_infinity() {
        let pts = [
            Boundary::Infinity,
            Boundary::Finite(0.0),
            Boundary::Finite(-3.0),
        ];
        let g = conjugator_to_finite(&pts);
        for p in pts {
            match g.apply_boundary(p) {
                Boundary::Finite(x) => assert!(x.abs() < 1e6),
                Boundary::Infinity => panic!("{p} still at infinity"),
            }
        }
    }
}

//! Numeric generating sets for cocompact hyperbolic orbifold groups, arranged
//! in the standard ("sequential") configuration, and their lifts into finite
//! covers of `PSL(2,R)`.
//!
//! A sequential set is a generator tuple — handle pairs `(A_i, B_i)` plus cone
//! rotations `C_j` — whose defining product is the identity and whose axes and
//! rotation centers sit in a left-to-right pattern after a suitable change of
//! chart.  The pattern is what makes the level bookkeeping work: canonical
//! lifts of the reduction tuple multiply to the central element `u^{n-2}`, so
//! lifting the group into the `m`-fold cover reduces to integer arithmetic on
//! levels.  Constructors here build such sets for concrete signatures,
//! `is_sequential` re-checks the arrangement from scratch, and the lift
//! routines verify the relation both as matrices and as levels.
//!
//! Constructions are one-parameter searches with a verification gate, not
//! general solves: a triangle-side bisection for three cones, a two-triangle
//! polygon split for four cones (the genus-one set is derived from the
//! `(2,2p,2,2)` polygon by a half-turn identity), and a mirrored axis chain
//! for higher genus without cones.

use crate::covering::{canonical_lift, central, CoveringError, LevelValue, LiftedElement};
use crate::moebius::{
    axes_intersect, hyperbolic_with_axis, rotation_about, Boundary, ElementClass, MoebiusError,
    MoebiusTransformation,
};
use crate::signature::{elliptic_level, Residue, Signature, SignatureError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Largest allowed deviation of a defining-relation product from the
/// identity, entrywise on canonical matrices.
pub const RELATION_TOLERANCE: f64 = 1e-6;
/// Allowed deviation of a cone generator's rotation angle from `2*pi/p`.
const CONE_ANGLE_TOLERANCE: f64 = 1e-6;
/// Bisection stops when the trace (or diagonal-length) mismatch drops below
/// this.
const SEARCH_TOLERANCE: f64 = 1e-10;
/// Fallback chart-cut count for the ordering predicate, on top of the cuts
/// derived from occupied boundary angles.
const FALLBACK_CUTS: usize = 240;

/// Errors from sequential-set construction and lifting.
#[derive(Debug, Error)]
pub enum FuchsianError {
    /// The signature has non-negative orbifold Euler characteristic.
    #[error("signature {signature} is not hyperbolic")]
    NotHyperbolic { signature: String },
    /// No constructor is implemented for this signature; never a wrong set.
    #[error("no sequential-set construction implemented for signature {signature}")]
    Unsupported { signature: String },
    /// A parameter search exhausted its bracket or grid.
    #[error("construction search failed: {what}")]
    SearchFailed { what: String },
    /// The signature admits no lift for this modulus.
    #[error("signature {signature} admits no lift for m = {m}")]
    NotLiftable { signature: String, m: u32 },
    /// A lifted relation check failed; `residual` is the offending deviation
    /// (entrywise for matrices, in turns for levels).
    #[error("lifted relation check `{check}` failed with residual {residual:.3e}")]
    RelationFailed { check: &'static str, residual: f64 },
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// A generator tuple for a cocompact signature: `genus` handle pairs and one
/// elliptic generator per cone order.
///
/// Holding a value of this type does *not* certify the arrangement; the
/// constructors verify their output, and [`is_sequential`] can re-check any
/// candidate.
#[derive(Debug, Clone)]
pub struct SequentialSet {
    signature: Signature,
    handles: Vec<(MoebiusTransformation, MoebiusTransformation)>,
    cones: Vec<MoebiusTransformation>,
}

impl SequentialSet {
    /// Bundle generators with their signature.  Only arities are checked
    /// here; run [`is_sequential`] for the geometric test.
    pub fn new(
        signature: Signature,
        handles: Vec<(MoebiusTransformation, MoebiusTransformation)>,
        cones: Vec<MoebiusTransformation>,
    ) -> Result<Self, FuchsianError> {
        if handles.len() != signature.genus() as usize || cones.len() != signature.cone_count() {
            return Err(FuchsianError::SearchFailed {
                what: format!(
                    "generator arity ({} handles, {} cones) does not match {}",
                    handles.len(),
                    cones.len(),
                    signature
                ),
            });
        }
        Ok(SequentialSet {
            signature,
            handles,
            cones,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Handle pairs `(A_i, B_i)`.
    pub fn handles(&self) -> &[(MoebiusTransformation, MoebiusTransformation)] {
        &self.handles
    }

    /// Cone generators `C_j`, in signature order.
    pub fn cones(&self) -> &[MoebiusTransformation] {
        &self.cones
    }

    /// The genus-zero reduction tuple
    /// `(A_1, B_1 A_1^-1 B_1^-1, ..., A_g, B_g A_g^-1 B_g^-1, C_1, ...)`.
    ///
    /// Its product telescopes to the defining relation, and the ordering
    /// predicate as well as all level bookkeeping run on this tuple.
    pub fn reduction_tuple(&self) -> Vec<MoebiusTransformation> {
        let mut out = Vec::with_capacity(2 * self.handles.len() + self.cones.len());
        for (a, b) in &self.handles {
            out.push(*a);
            out.push(b.compose(&a.inverse()).compose(&b.inverse()));
        }
        out.extend_from_slice(&self.cones);
        out
    }

    /// Entrywise deviation of the defining-relation product from the
    /// identity.
    pub fn relation_residual(&self) -> f64 {
        let product = self
            .reduction_tuple()
            .iter()
            .fold(MoebiusTransformation::identity(), |acc, m| acc.compose(m));
        product.distance(&MoebiusTransformation::identity())
    }
}

/// Outcome of the sequential-arrangement test: a verdict plus a diagnostic
/// naming the first failed stage (empty on success).
#[derive(Debug, Clone)]
pub struct SequentialCheck {
    pub sequential: bool,
    pub diagnostic: String,
}

impl SequentialCheck {
    fn pass() -> Self {
        SequentialCheck {
            sequential: true,
            diagnostic: String::new(),
        }
    }

    fn fail(diagnostic: String) -> Self {
        SequentialCheck {
            sequential: false,
            diagnostic,
        }
    }
}

/// Test whether a generator tuple is arranged sequentially.
///
/// Three stages, in order: the defining product must be the identity within
/// [`RELATION_TOLERANCE`]; every cone generator must be elliptic with
/// counterclockwise angle `2*pi/p_j` and every handle generator hyperbolic;
/// and each middle member of the reduction tuple must admit a chart in which
/// (prefix product, member, suffix product) are all positive with their
/// ordering keys strictly monotone.  The key of a hyperbolic member is its
/// repelling endpoint, the key of an elliptic member the real part of its
/// center; monotonicity in either direction is accepted because a cone pair
/// of half-turns sits *on* the axis of its partner product, where the
/// left-to-right reading depends on which side the chart cut falls.
pub fn is_sequential(set: &SequentialSet) -> SequentialCheck {
    let residual = set.relation_residual();
    if !(residual < RELATION_TOLERANCE) {
        return SequentialCheck::fail(format!(
            "product of the reduction tuple deviates from the identity by {residual:.3e}"
        ));
    }

    let orders = set.signature().orders();
    for (j, cone) in set.cones().iter().enumerate() {
        let want = TAU / f64::from(orders[j]);
        match cone.classify() {
            ElementClass::Elliptic { angle, .. } if (angle - want).abs() <= CONE_ANGLE_TOLERANCE => {
            }
            other => {
                return SequentialCheck::fail(format!(
                    "cone generator {} is {} (expected a counterclockwise rotation by {:.6})",
                    j + 1,
                    other.name(),
                    want
                ));
            }
        }
    }
    for (i, (a, b)) in set.handles().iter().enumerate() {
        for (m, name) in [(a, "A"), (b, "B")] {
            if !matches!(m.classify(), ElementClass::Hyperbolic { .. }) {
                return SequentialCheck::fail(format!(
                    "handle generator {name}{} is {}, expected hyperbolic",
                    i + 1,
                    m.classify().name()
                ));
            }
        }
    }

    let tuple = set.reduction_tuple();
    let n = tuple.len();
    for i in 1..n.saturating_sub(1) {
        let prefix = tuple[..i]
            .iter()
            .fold(MoebiusTransformation::identity(), |acc, m| acc.compose(m));
        let suffix = tuple[i + 1..]
            .iter()
            .fold(MoebiusTransformation::identity(), |acc, m| acc.compose(m));
        if !ordered_chart_exists(&[prefix, tuple[i], suffix]) {
            return SequentialCheck::fail(format!(
                "no chart orders the reduction triple at position {}",
                i + 1
            ));
        }
    }
    SequentialCheck::pass()
}

/// Ordering key of one member in the current chart, or `None` when the chart
/// is inadmissible for it (infinite feet, negative direction, or a class
/// with no place in the pattern).
fn ordering_key(member: &MoebiusTransformation) -> Option<f64> {
    match member.classify() {
        ElementClass::Hyperbolic {
            attracting: Boundary::Finite(att),
            repelling: Boundary::Finite(rep),
            ..
        } if att < rep => Some(rep),
        ElementClass::Parabolic {
            fixed: Boundary::Finite(x),
            positive: true,
        } => Some(x),
        ElementClass::Elliptic { fixed, .. } => Some(fixed.re),
        _ => None,
    }
}

/// Search for a boundary cut whose chart makes all three members positive
/// with strictly monotone ordering keys.
///
/// Candidate cuts are the midpoints of the gaps between occupied boundary
/// angles (hyperbolic feet) plus a fixed ring; each cut is rotated to the
/// angle of infinity so the triple is read on the real line.
fn ordered_chart_exists(members: &[MoebiusTransformation; 3]) -> bool {
    let mut occupied: Vec<f64> = Vec::new();
    for m in members {
        match m.classify() {
            ElementClass::Hyperbolic {
                attracting,
                repelling,
                ..
            } => {
                occupied.push(attracting.angle());
                occupied.push(repelling.angle());
            }
            ElementClass::Elliptic { .. } => {}
            ElementClass::Parabolic { fixed, .. } => occupied.push(fixed.angle()),
            ElementClass::Identity => return false,
        }
    }
    occupied.sort_by(f64::total_cmp);

    let mut cuts: Vec<f64> = Vec::with_capacity(occupied.len() + FALLBACK_CUTS);
    for (k, &a) in occupied.iter().enumerate() {
        let b = if k + 1 == occupied.len() {
            occupied[0] + TAU
        } else {
            occupied[k + 1]
        };
        if b - a > 1e-9 {
            cuts.push(((a + b) / 2.0).rem_euclid(TAU));
        }
    }
    // The offset keeps the ring clear of the axis-feet angles of the
    // integer-coordinate constructions.
    cuts.extend((0..FALLBACK_CUTS).map(|k| (TAU * k as f64 / FALLBACK_CUTS as f64 + 0.00137) % TAU));

    for phi in cuts {
        let g = match rotation_about(Complex64::i(), (-phi).rem_euclid(TAU)) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let keys: Option<Vec<f64>> = members
            .iter()
            .map(|m| ordering_key(&m.conjugate_by(&g)))
            .collect();
        if let Some(keys) = keys {
            let ascending = keys.windows(2).all(|w| w[0] < w[1]);
            let descending = keys.windows(2).all(|w| w[0] > w[1]);
            if ascending || descending {
                return true;
            }
        }
    }
    false
}

/// Hyperbolic distance between the vertices carrying angles `a` and `b` in
/// the triangle with angles `(a, b, c)`.
fn side_between(a: f64, b: f64, c: f64) -> f64 {
    let argument = (a.cos() * b.cos() + c.cos()) / (a.sin() * b.sin());
    argument.max(1.0).acosh()
}

/// The point at hyperbolic distance `s` from `i`, launched in direction
/// `theta` (counterclockwise from east; `pi/2` walks up the imaginary axis).
fn point_at(theta: f64, s: f64) -> Complex64 {
    let turn = rotation_about(Complex64::i(), (theta - PI / 2.0).rem_euclid(TAU))
        .expect("i is interior");
    turn.apply(Complex64::new(0.0, s.exp()))
}

/// Vertices of the hyperbolic quadrilateral with interior angles
/// `angles[0..4]`, labeled counterclockwise from `i`.
///
/// The diagonal from vertex 1 to vertex 3 splits the quadrilateral into two
/// triangles; the split ratio of the angles at those vertices is the one
/// search parameter, fixed by bisection so both triangles agree on the
/// diagonal's length.
fn quad_vertices(angles: [f64; 4]) -> Result<[Complex64; 4], FuchsianError> {
    let [a1, a2, a3, a4] = angles;
    let mismatch = |rho: f64| {
        side_between(rho * a1, rho * a3, a2)
            - side_between((1.0 - rho) * a1, (1.0 - rho) * a3, a4)
    };
    // Each split triangle needs angle sum below pi; the windows always
    // overlap for a hyperbolic signature.
    let margin = 1e-7;
    let lo0 = (1.0 - (PI - a4) / (a1 + a3) + margin).max(margin);
    let hi0 = ((PI - a2) / (a1 + a3) - margin).min(1.0 - margin);
    let (mut lo, mut hi) = (lo0, hi0);
    if !(lo < hi) || !(mismatch(lo) > 0.0) || !(mismatch(hi) < 0.0) {
        return Err(FuchsianError::SearchFailed {
            what: format!(
                "diagonal-length bracket for quadrilateral angles {angles:?}: \
                 f({lo0:.6}) = {:.3e}, f({hi0:.6}) = {:.3e}",
                mismatch(lo0),
                mismatch(hi0)
            ),
        });
    }
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if mismatch(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let rho = (lo + hi) / 2.0;
    let (b1, b3) = (rho * a1, rho * a3);
    let v1 = Complex64::i();
    let v3 = Complex64::new(0.0, side_between(b1, b3, a2).exp());
    let v2 = point_at(PI / 2.0 - b1, side_between(b1, a2, b3));
    let v4 = point_at(
        PI / 2.0 + (a1 - b1),
        side_between(a1 - b1, a4, a3 - b3),
    );
    Ok([v1, v2, v3, v4])
}

/// Cone rotations about polygon vertices, oriented so the product telescopes
/// to the identity and every angle is the counterclockwise `2*pi/p`.
fn polygon_rotations(
    vertices: &[Complex64],
    orders: &[u32],
) -> Result<Vec<MoebiusTransformation>, FuchsianError> {
    for sign in [1.0f64, -1.0] {
        let members: Result<Vec<_>, _> = vertices
            .iter()
            .zip(orders)
            .map(|(&v, &p)| rotation_about(v, (sign * TAU / f64::from(p)).rem_euclid(TAU)))
            .collect();
        let members = members?;
        let product = members
            .iter()
            .fold(MoebiusTransformation::identity(), |acc, m| acc.compose(m));
        if product.distance(&MoebiusTransformation::identity()) > 1e-9 {
            continue;
        }
        let angles_match = members.iter().zip(orders).all(|(m, &p)| {
            matches!(m.classify(), ElementClass::Elliptic { angle, .. }
                if (angle - TAU / f64::from(p)).abs() < 1e-9)
        });
        if angles_match {
            return Ok(members);
        }
    }
    Err(FuchsianError::SearchFailed {
        what: format!("neither orientation of the vertex rotations for orders {orders:?} closes up"),
    })
}

fn hyperbolic_guard(signature: &Signature) -> Result<(), FuchsianError> {
    if signature.is_hyperbolic() {
        Ok(())
    } else {
        Err(FuchsianError::NotHyperbolic {
            signature: signature.to_string(),
        })
    }
}

/// Gate shared by every constructor: the finished set must pass its own
/// arrangement test, and canonical lifts of its reduction tuple must multiply
/// to `u^(n-2)` exactly.
fn verify_construction(set: &SequentialSet) -> Result<(), FuchsianError> {
    let check = is_sequential(set);
    if !check.sequential {
        return Err(FuchsianError::SearchFailed {
            what: format!("constructed set fails its arrangement test: {}", check.diagnostic),
        });
    }
    let n = set.reduction_tuple().len() as i64;
    let level = reduction_product_level(set)?;
    if level != n - 2 {
        return Err(FuchsianError::SearchFailed {
            what: format!("canonical product level {level}, expected {}", n - 2),
        });
    }
    Ok(())
}

/// A sequential triple of cone rotations with orders `(p, q, s)`.
///
/// The first two rotations sit on a common geodesic; their distance is the
/// one search parameter.  The trace of their product decreases strictly in
/// the distance, so bisection pins it to `-2 cos(pi/s)` — the branch where
/// the inverse of the product is a counterclockwise rotation by `2*pi/s`.
pub fn make_triple(p: u32, q: u32, s: u32) -> Result<SequentialSet, FuchsianError> {
    let signature = Signature::new(0, vec![p, q, s])?;
    hyperbolic_guard(&signature)?;

    let (ap, aq, as_) = (PI / f64::from(p), PI / f64::from(q), PI / f64::from(s));
    // SL(2) trace of the product of rotations by 2*pi/p and 2*pi/q about
    // points at hyperbolic distance d on a common geodesic.
    let trace_at = |d: f64| 2.0 * (ap.cos() * aq.cos() - ap.sin() * aq.sin() * d.cosh());
    let target = -2.0 * as_.cos();

    let mut lo = 0.0;
    let mut hi = 1.0;
    while trace_at(hi) > target {
        hi *= 2.0;
        if hi > 64.0 {
            return Err(FuchsianError::SearchFailed {
                what: format!(
                    "trace bracket for ({p},{q},{s}): f({lo}) = {:.6}, f({hi}) = {:.6}, target {target:.6}",
                    trace_at(lo),
                    trace_at(hi)
                ),
            });
        }
    }
    let mut d = (lo + hi) / 2.0;
    while (trace_at(d) - target).abs() > SEARCH_TOLERANCE {
        if trace_at(d) > target {
            lo = d;
        } else {
            hi = d;
        }
        if hi - lo < 1e-15 {
            break;
        }
        d = (lo + hi) / 2.0;
    }

    let c1 = rotation_about(Complex64::i(), TAU / f64::from(p))?;
    let c2 = rotation_about(Complex64::new(0.0, d.exp()), TAU / f64::from(q))?;
    let c3 = c1.compose(&c2).inverse();
    let set = SequentialSet::new(signature, Vec::new(), vec![c1, c2, c3])?;
    verify_construction(&set)?;
    Ok(set)
}

/// A sequential set of four cone rotations: the vertex rotations of the
/// quadrilateral with interior angles `pi/p_j`.
fn make_quadrilateral(orders: [u32; 4]) -> Result<SequentialSet, FuchsianError> {
    let signature = Signature::new(0, orders.to_vec())?;
    hyperbolic_guard(&signature)?;
    let angles = orders.map(|p| PI / f64::from(p));
    let vertices = quad_vertices(angles)?;
    let members = polygon_rotations(&vertices, &orders)?;
    let set = SequentialSet::new(signature, Vec::new(), members)?;
    verify_construction(&set)?;
    Ok(set)
}

/// A sequential set for signature `(1: p)`: one handle pair with crossing
/// axes and equal traces, one cone of order `p`.
///
/// Derived from the quadrilateral set `(E_1, E_2, E_3, E_4)` of orders
/// `(2, 2, 2, 2p)` — a cyclic rotation of the `(2, 2p, 2, 2)` vertex set —
/// through the half-turn identity `(E_1 E_2 E_3)^2 = E_4^{-2}`: with
/// `A = E_1 E_2` and `B = E_3 E_2`, the commutator `[A, B]` equals
/// `E_4^{-2}`, so `C = E_4^2` closes the relation and rotates by `2*pi/p`.
/// The axes of `A` and `B` run along two polygon sides meeting at a vertex,
/// which gives the crossing; opposite sides of the polygon have equal length,
/// which gives the equal traces.
pub fn make_genus1(p: u32) -> Result<SequentialSet, FuchsianError> {
    let signature = Signature::new(1, vec![p])?;
    hyperbolic_guard(&signature)?;
    let quad = make_quadrilateral([2, 2 * p, 2, 2])?;
    let f = quad.cones();
    let (e1, e2, e3, e4) = (f[2], f[3], f[0], f[1]);
    let a = e1.compose(&e2);
    let b = e3.compose(&e2);
    let c = e4.compose(&e4);
    let set = SequentialSet::new(signature, vec![(a, b)], vec![c])?;
    verify_construction(&set)?;
    Ok(set)
}

/// Split a hyperbolic `target` with the same translation length as `a` into
/// the form `b * a^-1 * b^-1`, i.e. find `b` carrying the axis of `a^-1`
/// onto the axis of `target`.
///
/// The carrier is determined up to translation along the target axis; the
/// parameter grid picks one that is itself hyperbolic with its axis crossing
/// the axis of `a`.
fn solve_handle_partner(
    a: &MoebiusTransformation,
    target: &MoebiusTransformation,
) -> Result<MoebiusTransformation, FuchsianError> {
    let feet = |m: &MoebiusTransformation| match m.classify() {
        ElementClass::Hyperbolic {
            attracting: Boundary::Finite(att),
            repelling: Boundary::Finite(rep),
            ..
        } => Ok((att, rep)),
        other => Err(FuchsianError::SearchFailed {
            what: format!("handle-partner input is {}, expected hyperbolic", other.name()),
        }),
    };
    // Maps (infinity, 0) to (att, rep).
    let frame = |att: f64, rep: f64| {
        if att > rep {
            MoebiusTransformation::new(att, rep, 1.0, 1.0)
        } else {
            MoebiusTransformation::new(att, -rep, 1.0, -1.0)
        }
    };
    let (a_att, a_rep) = feet(a)?;
    let (t_att, t_rep) = feet(target)?;
    let from_inverse_axis = frame(a_rep, a_att)?;
    let to_target_axis = frame(t_att, t_rep)?;
    for tau in [0.0f64, 0.4, -0.4, 0.8, -0.8, 1.2, -1.2, 1.6, -1.6, 2.0, -2.0] {
        let lambda = (tau / 2.0).exp();
        let slide = MoebiusTransformation::new(lambda, 0.0, 0.0, 1.0 / lambda)?;
        let b = to_target_axis
            .compose(&slide)
            .compose(&from_inverse_axis.inverse());
        let residual = b
            .compose(&a.inverse())
            .compose(&b.inverse())
            .distance(target);
        if residual < 1e-9
            && matches!(b.classify(), ElementClass::Hyperbolic { .. })
            && axes_intersect(a, &b).unwrap_or(false)
        {
            return Ok(b);
        }
    }
    Err(FuchsianError::SearchFailed {
        what: "no slide parameter yields a hyperbolic crossing handle partner".into(),
    })
}

/// A sequential set for signature `(g: -)`, `g >= 2`: a chain of `g`
/// disjoint-axis hyperbolics and its image under a half-turn about a point
/// on the axis of their product.
///
/// The half-turn reverses that axis, so the mirrored chain multiplies to the
/// inverse of the original product and the combined tuple closes up exactly.
/// The half-turn center runs along the axis (parameter `t`); the first
/// position where the arrangement test and the canonical product level both
/// pass is kept, then each consecutive pair of tuple members is converted
/// into a handle pair.
fn make_chain(g: u32) -> Result<SequentialSet, FuchsianError> {
    let signature = Signature::new(g, Vec::new())?;
    hyperbolic_guard(&signature)?;
    for shift in [1.2, 1.8, 2.5] {
        let chain: Vec<MoebiusTransformation> = (0..g)
            .map(|k| {
                hyperbolic_with_axis(
                    Boundary::Finite(4.0 * k as f64),
                    Boundary::Finite(4.0 * k as f64 + 2.0),
                    shift,
                )
            })
            .collect::<Result<_, _>>()?;
        let product = chain
            .iter()
            .fold(MoebiusTransformation::identity(), |acc, m| acc.compose(m));
        let (att, rep) = match product.classify() {
            ElementClass::Hyperbolic {
                attracting: Boundary::Finite(att),
                repelling: Boundary::Finite(rep),
                ..
            } => (att, rep),
            _ => continue,
        };
        let center = (att + rep) / 2.0;
        let radius = (att - rep).abs() / 2.0;
        for step in 0..19 {
            let t = 0.05 + 0.05 * step as f64;
            let on_axis = Complex64::new(
                center + radius * (PI * t).cos(),
                radius * (PI * t).sin(),
            );
            let mirror = rotation_about(on_axis, PI)?;
            let mut tuple = chain.clone();
            tuple.extend(chain.iter().map(|d| d.conjugate_by(&mirror)));

            let mut handles = Vec::with_capacity(g as usize);
            let mut ok = true;
            for pair in tuple.chunks(2) {
                match solve_handle_partner(&pair[0], &pair[1]) {
                    Ok(b) => handles.push((pair[0], b)),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let set = SequentialSet::new(signature.clone(), handles, Vec::new())?;
            if verify_construction(&set).is_ok() {
                return Ok(set);
            }
        }
    }
    Err(FuchsianError::SearchFailed {
        what: format!("no mirror position yields a sequential chain for genus {g}"),
    })
}

/// Build a sequential set for any signature in the supported family:
/// three-cone spheres, four-cone spheres, `(1: p)`, and `(g: -)` for
/// `g >= 2`.  Everything else is reported as unsupported rather than
/// guessed.
pub fn make_signature(signature: &Signature) -> Result<SequentialSet, FuchsianError> {
    hyperbolic_guard(signature)?;
    let orders = signature.orders();
    match (signature.genus(), orders.len()) {
        (0, 3) => make_triple(orders[0], orders[1], orders[2]),
        (0, 4) => make_quadrilateral([orders[0], orders[1], orders[2], orders[3]]),
        (1, 1) => make_genus1(orders[0]),
        (g, 0) if g >= 2 => make_chain(g),
        _ => Err(FuchsianError::Unsupported {
            signature: signature.to_string(),
        }),
    }
}

/// Multiply canonical lifts of the reduction tuple in the universal cover
/// and return the level of the product, enforcing that its matrix part is
/// the identity within [`RELATION_TOLERANCE`].
fn reduction_product_level(set: &SequentialSet) -> Result<i64, FuchsianError> {
    let mut product = central(0, 0);
    for member in set.reduction_tuple() {
        product = product.multiply(&canonical_lift(&member, 0)?)?;
    }
    let residual = product
        .base()
        .distance(&MoebiusTransformation::identity());
    if !(residual < RELATION_TOLERANCE) {
        return Err(FuchsianError::RelationFailed {
            check: "canonical product matrix",
            residual,
        });
    }
    rounded_turns(product.anchor(), "canonical product level").map_err(FuchsianError::from)
}

fn rounded_turns(anchor: f64, what: &str) -> Result<i64, CoveringError> {
    let turns = anchor / TAU;
    let k = turns.round();
    if (turns - k).abs() > 0.1 {
        return Err(CoveringError::NumericallyAmbiguous {
            what: what.into(),
            residual: (turns - k).abs(),
        });
    }
    Ok(k as i64)
}

/// Level of the product of canonical lifts of a genus-zero sequential set.
///
/// For an honest sequential set of `n` cone generators this is `n - 2`: the
/// canonical lifts multiply to the central element `u^(n-2)`.
///
/// # Panics
/// If the set has positive genus; the statement is about cone tuples.
pub fn canonical_lift_product_check(set: &SequentialSet) -> Result<i64, FuchsianError> {
    assert_eq!(
        set.signature().genus(),
        0,
        "canonical-lift product check takes a genus-zero set"
    );
    reduction_product_level(set)
}

/// A sequential set lifted into the `m`-fold cover: one lift per generator,
/// with the level assignment that produced them.
#[derive(Debug, Clone)]
pub struct LiftedSequentialSet {
    base: SequentialSet,
    modulus: u32,
    handle_lifts: Vec<(LiftedElement, LiftedElement)>,
    cone_lifts: Vec<LiftedElement>,
    handle_levels: Vec<(i64, i64)>,
    cone_levels: Vec<Residue>,
}

impl LiftedSequentialSet {
    pub fn base(&self) -> &SequentialSet {
        &self.base
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn handle_lifts(&self) -> &[(LiftedElement, LiftedElement)] {
        &self.handle_lifts
    }

    pub fn cone_lifts(&self) -> &[LiftedElement] {
        &self.cone_lifts
    }

    /// Handle levels `(lev A_i, lev B_i)` as assigned.
    pub fn handle_levels(&self) -> &[(i64, i64)] {
        &self.handle_levels
    }

    /// Cone levels; for a valid lift these are the forced values
    /// `elliptic_level(p_j, m)`.
    pub fn cone_levels(&self) -> &[Residue] {
        &self.cone_levels
    }

    /// The lifted reduction tuple, mirroring
    /// [`SequentialSet::reduction_tuple`].
    pub fn lifted_reduction(&self) -> Result<Vec<LiftedElement>, CoveringError> {
        let mut out = Vec::with_capacity(2 * self.handle_lifts.len() + self.cone_lifts.len());
        for (a, b) in &self.handle_lifts {
            out.push(*a);
            out.push(b.multiply(&a.invert()?)?.multiply(&b.invert()?)?);
        }
        out.extend_from_slice(&self.cone_lifts);
        Ok(out)
    }

    /// Product of the lifted reduction tuple — the defining relation inside
    /// the cover.
    pub fn relation_product(&self) -> Result<LiftedElement, CoveringError> {
        let mut product = central(0, self.modulus);
        for lift in self.lifted_reduction()? {
            product = product.multiply(&lift)?;
        }
        Ok(product)
    }

    /// Entrywise deviation of the relation product's matrix part from the
    /// identity.
    pub fn relation_residual(&self) -> Result<f64, CoveringError> {
        Ok(self
            .relation_product()?
            .base()
            .distance(&MoebiusTransformation::identity()))
    }
}

/// Lift a sequential set into the `m`-fold cover with the given handle
/// levels; cone levels are forced to `elliptic_level(p_j, m)`.
///
/// Verifies the lifted defining relation — matrix part within
/// [`RELATION_TOLERANCE`] of the identity *and* level zero — and that each
/// lifted cone generator satisfies its torsion relation `C_j^{p_j} = e` in
/// the cover.  Every choice of handle levels yields a valid lift (there are
/// `m^(2g)` of them); any other cone level breaks the relation.
pub fn lift_with_levels(
    set: &SequentialSet,
    m: u32,
    lev_a: &[i64],
    lev_b: &[i64],
) -> Result<LiftedSequentialSet, FuchsianError> {
    if m == 0 || !set.signature().liftable(m)? {
        return Err(FuchsianError::NotLiftable {
            signature: set.signature().to_string(),
            m,
        });
    }
    let forced: Vec<i64> = set
        .signature()
        .orders()
        .iter()
        .map(|&p| elliptic_level(p, m).map(|r| i64::from(r.value())))
        .collect::<Result<_, _>>()?;
    lift_with_cone_levels(set, m, lev_a, lev_b, &forced)
}

/// Lift with an explicit cone-level assignment.
///
/// This is the tampering entry point behind [`lift_with_levels`]: passing
/// anything but the forced cone levels makes the relation (or a cone's
/// torsion power) fail, which is exactly what the level obstruction
/// predicts.
pub fn lift_with_cone_levels(
    set: &SequentialSet,
    m: u32,
    lev_a: &[i64],
    lev_b: &[i64],
    lev_c: &[i64],
) -> Result<LiftedSequentialSet, FuchsianError> {
    let signature = set.signature();
    if m == 0 || !signature.liftable(m)? {
        return Err(FuchsianError::NotLiftable {
            signature: signature.to_string(),
            m,
        });
    }
    let g = signature.genus() as usize;
    if lev_a.len() != g || lev_b.len() != g || lev_c.len() != set.cones().len() {
        return Err(FuchsianError::SearchFailed {
            what: format!(
                "level-assignment arity ({}, {}, {}) does not match {}",
                lev_a.len(),
                lev_b.len(),
                lev_c.len(),
                signature
            ),
        });
    }

    let mut handle_lifts = Vec::with_capacity(g);
    for (i, (a, b)) in set.handles().iter().enumerate() {
        handle_lifts.push((
            canonical_lift(a, m)?.shift_level(lev_a[i]),
            canonical_lift(b, m)?.shift_level(lev_b[i]),
        ));
    }
    let mut cone_lifts = Vec::with_capacity(set.cones().len());
    for (j, c) in set.cones().iter().enumerate() {
        let canonical = canonical_lift(c, m)?;
        let current = match canonical.level()? {
            LevelValue::Mod(r) => i64::from(r.value()),
            LevelValue::Int(k) => k,
        };
        cone_lifts.push(canonical.shift_level(lev_c[j] - current));
    }

    let lifted = LiftedSequentialSet {
        base: set.clone(),
        modulus: m,
        handle_lifts,
        cone_lifts,
        handle_levels: lev_a.iter().copied().zip(lev_b.iter().copied()).collect(),
        cone_levels: lev_c.iter().map(|&k| Residue::new(k, m)).collect(),
    };

    let relation = lifted.relation_product()?;
    let residual = relation
        .base()
        .distance(&MoebiusTransformation::identity());
    if !(residual < RELATION_TOLERANCE) {
        return Err(FuchsianError::RelationFailed {
            check: "lifted relation matrix",
            residual,
        });
    }
    let level = rounded_turns(relation.anchor(), "lifted relation level")?;
    let excess = level.rem_euclid(i64::from(m));
    if excess != 0 {
        return Err(FuchsianError::RelationFailed {
            check: "lifted relation level",
            residual: excess as f64,
        });
    }
    for (j, (lift, &p)) in cone_lifts_with_orders(&lifted).enumerate() {
        let power = lift.pow(i64::from(p))?;
        if !power.is_unit() {
            let turns = power.anchor() / TAU;
            let wrapped = turns.rem_euclid(f64::from(m));
            return Err(FuchsianError::RelationFailed {
                check: "cone torsion power",
                residual: wrapped.min(f64::from(m) - wrapped).max(
                    power
                        .base()
                        .distance(&MoebiusTransformation::identity()),
                ),
            });
        }
        let _ = j;
    }
    Ok(lifted)
}

fn cone_lifts_with_orders(
    lifted: &LiftedSequentialSet,
) -> impl Iterator<Item = (&LiftedElement, &u32)> {
    lifted
        .cone_lifts
        .iter()
        .zip(lifted.base.signature().orders())
}

/// One rule's outcome in an [`AxiomReport`].
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleCheck {
    pub rule: u8,
    pub passed: bool,
    pub samples: usize,
}

/// Level assignment carried by an [`AxiomReport`].
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportLevels {
    pub handles: Vec<(i64, i64)>,
    pub cones: Vec<u32>,
}

/// Outcome of the five-rule check on sampled contour classes.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomReport {
    pub relation_residual: f64,
    pub levels: ReportLevels,
    pub checks: Vec<RuleCheck>,
}

impl AxiomReport {
    /// `true` when every rule passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Check the five level-function rules on words sampled from a lifted set.
///
/// Samples are classes that are simple contours by construction: conjugated
/// generators (rules 1 and 2), products of two handle generators whose axes
/// cross (rule 3; no such pair exists on a genus-zero set, which leaves the
/// rule vacuously true with zero samples), and inverted adjacent pairs from
/// the reduction tuple, which have zero crossing number (rule 4).  Rule 5 is
/// the torsion constraint `p * level(C_j) + 1 = 0 mod m`, checked once per
/// cone.  Words whose level the numerics cannot measure (order-2 bases for
/// rule 2, ambiguous displacements) are skipped, not counted.
pub fn verify_arf_axioms(lifted: &LiftedSequentialSet, samples: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = lifted.modulus();

    let mut generators: Vec<LiftedElement> = Vec::new();
    for (a, b) in lifted.handle_lifts() {
        generators.push(*a);
        generators.push(*b);
    }
    generators.extend_from_slice(lifted.cone_lifts());

    let word = |rng: &mut ChaCha8Rng, len: usize| -> Option<LiftedElement> {
        let mut acc = central(0, m);
        for _ in 0..len {
            let pick = generators[rng.gen_range(0..generators.len())];
            let factor = if rng.gen_bool(0.5) {
                pick
            } else {
                pick.invert().ok()?
            };
            acc = acc.multiply(&factor).ok()?;
        }
        Some(acc)
    };
    let level_of = |x: &LiftedElement| -> Option<Residue> {
        match x.level() {
            Ok(LevelValue::Mod(r)) => Some(r),
            _ => None,
        }
    };
    let is_order_two = |x: &MoebiusTransformation| {
        matches!(x.classify(), ElementClass::Elliptic { angle, .. } if (angle - PI).abs() < 1e-9)
    };

    let mut checks = Vec::with_capacity(5);
    let budget = 50 * samples.max(1);

    // Rule 1: levels are conjugation invariants.
    {
        let (mut done, mut passed, mut attempts) = (0usize, true, 0usize);
        while done < samples && attempts < budget {
            attempts += 1;
            let len = rng.gen_range(1..=3);
            let Some(g) = word(&mut rng, len) else {
                continue;
            };
            let a = generators[rng.gen_range(0..generators.len())];
            let Ok(conjugated) = g.multiply(&a).and_then(|x| {
                g.invert().and_then(|gi| x.multiply(&gi))
            }) else {
                continue;
            };
            let (Some(la), Some(lc)) = (level_of(&a), level_of(&conjugated)) else {
                continue;
            };
            done += 1;
            passed &= la == lc;
        }
        checks.push(RuleCheck {
            rule: 1,
            passed,
            samples: done,
        });
    }

    // Rule 2: inversion negates the level, except at order 2.
    {
        let (mut done, mut passed, mut attempts) = (0usize, true, 0usize);
        while done < samples && attempts < budget {
            attempts += 1;
            let len = rng.gen_range(0..=2);
            let Some(g) = word(&mut rng, len) else {
                continue;
            };
            let a = generators[rng.gen_range(0..generators.len())];
            let Ok(x) = g.multiply(&a).and_then(|y| {
                g.invert().and_then(|gi| y.multiply(&gi))
            }) else {
                continue;
            };
            if is_order_two(x.base()) {
                continue;
            }
            let (Ok(xi), Some(lx)) = (x.invert(), level_of(&x)) else {
                continue;
            };
            let Some(li) = level_of(&xi) else {
                continue;
            };
            done += 1;
            passed &= li == -lx;
        }
        checks.push(RuleCheck {
            rule: 2,
            passed,
            samples: done,
        });
    }

    // Rule 3: additive on a pair crossing at one point.  Handle pairs are
    // the by-construction instances; their random conjugates keep both the
    // crossing and the levels.
    {
        let crossing: Vec<(LiftedElement, LiftedElement)> = lifted
            .handle_lifts()
            .iter()
            .filter(|(a, b)| axes_intersect(a.base(), b.base()).unwrap_or(false))
            .copied()
            .collect();
        let (mut done, mut passed, mut attempts) = (0usize, true, 0usize);
        while !crossing.is_empty() && done < samples && attempts < budget {
            attempts += 1;
            let (a, b) = crossing[rng.gen_range(0..crossing.len())];
            let len = rng.gen_range(0..=3);
            let Some(g) = word(&mut rng, len) else {
                continue;
            };
            let Ok(gi) = g.invert() else { continue };
            let conj = |x: &LiftedElement| {
                g.multiply(x).and_then(|y| y.multiply(&gi))
            };
            let (Ok(x), Ok(y)) = (conj(&a), conj(&b)) else {
                continue;
            };
            let Ok(xy) = x.multiply(&y) else { continue };
            let (Some(lx), Some(ly), Some(lxy)) = (level_of(&x), level_of(&y), level_of(&xy))
            else {
                continue;
            };
            done += 1;
            passed &= lxy == lx + ly;
        }
        checks.push(RuleCheck {
            rule: 3,
            passed,
            samples: done,
        });
    }

    // Rule 4: on a disjoint pair the level of the product drops by one.
    // Inverting a prefix/member pair of the reduction tuple produces such a
    // pair: the tuple ordering makes (prefix, member) a positive pair, and
    // inversion turns the `+1` into a `-1`.
    {
        let instances: Vec<(LiftedElement, LiftedElement)> = (|| {
            let tuple = lifted.lifted_reduction().ok()?;
            let mut out = Vec::new();
            let mut prefix = central(0, m);
            for (i, t) in tuple.iter().enumerate() {
                if i > 0 && i + 1 < tuple.len() {
                    if let (Ok(ti), Ok(pi)) = (t.invert(), prefix.invert()) {
                        out.push((ti, pi));
                    }
                }
                prefix = prefix.multiply(t).ok()?;
            }
            Some(out)
        })()
        .unwrap_or_default();
        let usable: Vec<_> = instances
            .into_iter()
            .filter(|(x, y)| {
                !is_order_two(x.base())
                    && !is_order_two(y.base())
                    && x.multiply(y)
                        .map(|p| !is_order_two(p.base()))
                        .unwrap_or(false)
            })
            .collect();
        let (mut done, mut passed, mut attempts) = (0usize, true, 0usize);
        while !usable.is_empty() && done < samples && attempts < budget {
            attempts += 1;
            let (x0, y0) = usable[rng.gen_range(0..usable.len())];
            let len = rng.gen_range(0..=3);
            let Some(g) = word(&mut rng, len) else {
                continue;
            };
            let Ok(gi) = g.invert() else { continue };
            let conj = |z: &LiftedElement| {
                g.multiply(z).and_then(|y| y.multiply(&gi))
            };
            let (Ok(x), Ok(y)) = (conj(&x0), conj(&y0)) else {
                continue;
            };
            let Ok(xy) = x.multiply(&y) else { continue };
            let (Some(lx), Some(ly), Some(lxy)) = (level_of(&x), level_of(&y), level_of(&xy))
            else {
                continue;
            };
            done += 1;
            passed &= lxy == lx + ly - Residue::new(1, m);
        }
        checks.push(RuleCheck {
            rule: 4,
            passed,
            samples: done,
        });
    }

    // Rule 5: each cone satisfies p * level + 1 = 0 mod m.
    {
        let mut passed = true;
        let mut done = 0usize;
        for (lift, &p) in cone_lifts_with_orders(lifted) {
            let Some(level) = level_of(lift) else {
                passed = false;
                continue;
            };
            done += 1;
            passed &=
                (i64::from(p) * i64::from(level.value()) + 1).rem_euclid(i64::from(m)) == 0;
        }
        checks.push(RuleCheck {
            rule: 5,
            passed,
            samples: done,
        });
    }

    AxiomReport {
        relation_residual: lifted.relation_residual().unwrap_or(f64::INFINITY),
        levels: ReportLevels {
            handles: lifted.handle_levels().to_vec(),
            cones: lifted.cone_levels().iter().map(|r| r.value()).collect(),
        },
        checks,
    }
}

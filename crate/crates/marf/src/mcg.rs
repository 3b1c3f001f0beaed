//! Generalized Dehn twists acting on m-Arf value tuples, orbit enumeration,
//! and normal forms.
//!
//! Because an m-Arf function is determined by its `2g` free handle values,
//! the mapping-class-group action reduces to a handful of affine maps on
//! `(Z/mZ)^(2g)`.  Orbits are computed by breadth-first search with explicit
//! inverse moves rather than by appealing to the group structure, which keeps
//! the closure argument elementary and yields certified witness words.

use crate::arf::{enumerate_all, ArfError, ArfFunction};
use crate::signature::{Residue, Signature, SignatureError};
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// Default ceiling on visited states for orbit searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Errors from the twist action and orbit machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McgError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Arf(#[from] ArfError),
    /// The move is not defined on this signature.
    #[error("move {mv} is not applicable: {reason}")]
    NotApplicable { mv: String, reason: String },
    /// The search visited more states than allowed.
    #[error("state budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    /// An orbit disagreed with the type classification; this signals a bug,
    /// it is never expected on valid input.
    #[error("orbit/type classification mismatch: {0}")]
    ClassificationMismatch(String),
    /// The expected normal form was not found in the orbit; same severity as
    /// a classification mismatch.
    #[error("normal form {target:?} not reachable from {start:?}")]
    NormalFormUnreachable { start: Vec<u32>, target: Vec<u32> },
}

/// The generator families of the twist action.
///
/// Indices follow the standard generating system `a_1, b_1, ..., a_g, b_g,
/// c_{g+1}, ..., c_n` with `n = g + r`: `T4(k)` needs a handle index
/// `1 <= k <= g-1` and `T5(k)` a cone position `g+1 <= k <= n-1`.
///
/// `T1` and `T1b` are the twists about the two core curves of the first
/// handle; both follow from the crossing rule for values on transversal
/// curves.  Without `T1b` the action is too small on cone-free signatures:
/// no remaining move merges the handle coordinates there, and orbits split
/// strictly finer than the invariant classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistKind {
    /// `alpha_1 += beta_1`.
    T1,
    /// `beta_1 += alpha_1`, the twist about the other curve of the first
    /// handle.
    T1b,
    /// `beta_1 -= alpha_1 + alpha_2 + 1` and `beta_2 -= alpha_1 + alpha_2 + 1`.
    T2,
    /// `(alpha_g, beta_g) = (-beta_g, alpha_g - gamma_1 - 1)`.
    T3,
    /// Swap handle pairs `k` and `k+1`.
    T4(usize),
    /// Swap cone generators at positions `k` and `k+1` (equal orders only);
    /// a no-op on stored values since equal orders force equal cone values.
    T5(usize),
}

/// A twist move: a generator family, possibly formally inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistMove {
    pub kind: TwistKind,
    pub inverse: bool,
}

impl TwistMove {
    pub fn new(kind: TwistKind) -> Self {
        TwistMove {
            kind,
            inverse: false,
        }
    }

    /// The move undoing this one.  `T4` and `T5` are involutions, so they are
    /// their own inverses.
    pub fn inverted(&self) -> Self {
        match self.kind {
            TwistKind::T4(_) | TwistKind::T5(_) => *self,
            _ => TwistMove {
                kind: self.kind,
                inverse: !self.inverse,
            },
        }
    }
}

impl fmt::Display for TwistMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TwistKind::T1 => write!(f, "T1")?,
            TwistKind::T1b => write!(f, "T1b")?,
            TwistKind::T2 => write!(f, "T2")?,
            TwistKind::T3 => write!(f, "T3")?,
            TwistKind::T4(k) => write!(f, "T4({k})")?,
            TwistKind::T5(k) => write!(f, "T5({k})")?,
        }
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl Serialize for TwistMove {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn applicability(sig: &Signature, kind: TwistKind) -> Result<(), String> {
    let g = sig.genus() as usize;
    let r = sig.cone_count();
    let n = g + r;
    match kind {
        TwistKind::T1 | TwistKind::T1b => {
            if g >= 1 {
                Ok(())
            } else {
                Err("requires genus >= 1".into())
            }
        }
        TwistKind::T2 => {
            if g >= 2 {
                Ok(())
            } else {
                Err("requires genus >= 2".into())
            }
        }
        TwistKind::T3 => {
            if g >= 1 && r >= 1 {
                Ok(())
            } else {
                Err("requires genus >= 1 and at least one cone point".into())
            }
        }
        TwistKind::T4(k) => {
            if g >= 2 && (1..g).contains(&k) {
                Ok(())
            } else {
                Err(format!("requires genus >= 2 and 1 <= k <= {}", g.max(1) - 1))
            }
        }
        TwistKind::T5(k) => {
            if !(g + 1..n).contains(&k) {
                return Err(format!("requires {} <= k <= {}", g + 1, n.max(1) - 1));
            }
            let j = k - g; // 1-based cone index
            if sig.orders()[j - 1] == sig.orders()[j] {
                Ok(())
            } else {
                Err(format!(
                    "cone orders at positions {k} and {} differ",
                    k + 1
                ))
            }
        }
    }
}

/// Every move applicable to `sig`, inverses included, in a fixed order.
pub fn available_moves(sig: &Signature) -> Vec<TwistMove> {
    let g = sig.genus() as usize;
    let r = sig.cone_count();
    let mut moves = Vec::new();
    let mut push_with_inverse = |kind| {
        moves.push(TwistMove::new(kind));
        moves.push(TwistMove::new(kind).inverted());
    };
    if g >= 1 {
        push_with_inverse(TwistKind::T1);
        push_with_inverse(TwistKind::T1b);
    }
    if g >= 2 {
        push_with_inverse(TwistKind::T2);
    }
    if g >= 1 && r >= 1 {
        push_with_inverse(TwistKind::T3);
    }
    for k in 1..g {
        moves.push(TwistMove::new(TwistKind::T4(k)));
    }
    for k in g + 1..g + r {
        if sig.orders()[k - g - 1] == sig.orders()[k - g] {
            moves.push(TwistMove::new(TwistKind::T5(k)));
        }
    }
    moves
}

/// Apply one twist move to an m-Arf function.
pub fn apply_twist(f: &ArfFunction, mv: &TwistMove) -> Result<ArfFunction, McgError> {
    let sig = f.signature();
    applicability(sig, mv.kind).map_err(|reason| McgError::NotApplicable {
        mv: mv.to_string(),
        reason,
    })?;
    let g = sig.genus() as usize;
    let m = f.m();
    let one = Residue::new(1, m);
    let mut alpha: Vec<Residue> = f.alpha().to_vec();
    let mut beta: Vec<Residue> = f.beta().to_vec();
    match (mv.kind, mv.inverse) {
        (TwistKind::T1, false) => alpha[0] = alpha[0] + beta[0],
        (TwistKind::T1, true) => alpha[0] = alpha[0] - beta[0],
        (TwistKind::T1b, false) => beta[0] = beta[0] + alpha[0],
        (TwistKind::T1b, true) => beta[0] = beta[0] - alpha[0],
        (TwistKind::T2, false) => {
            let shift = alpha[0] + alpha[1] + one;
            beta[0] = beta[0] - shift;
            beta[1] = beta[1] - shift;
        }
        (TwistKind::T2, true) => {
            let shift = alpha[0] + alpha[1] + one;
            beta[0] = beta[0] + shift;
            beta[1] = beta[1] + shift;
        }
        (TwistKind::T3, false) => {
            let gamma = f.gamma()[0];
            let (a, b) = (alpha[g - 1], beta[g - 1]);
            alpha[g - 1] = -b;
            beta[g - 1] = a - gamma - one;
        }
        (TwistKind::T3, true) => {
            let gamma = f.gamma()[0];
            let (a, b) = (alpha[g - 1], beta[g - 1]);
            alpha[g - 1] = b + gamma + one;
            beta[g - 1] = -a;
        }
        (TwistKind::T4(k), _) => {
            alpha.swap(k - 1, k);
            beta.swap(k - 1, k);
        }
        (TwistKind::T5(_), _) => {
            // Equal orders force equal cone values, so the stored tuple is
            // untouched.
        }
    }
    Ok(ArfFunction::from_residues(sig.clone(), m, alpha, beta))
}

fn state_of(f: &ArfFunction) -> Vec<u32> {
    f.state()
}

fn function_from_state(sig: &Signature, m: u32, state: &[u32]) -> ArfFunction {
    let g = sig.genus() as usize;
    let alpha = state[..g]
        .iter()
        .map(|&v| Residue::new(i64::from(v), m))
        .collect();
    let beta = state[g..]
        .iter()
        .map(|&v| Residue::new(i64::from(v), m))
        .collect();
    ArfFunction::from_residues(sig.clone(), m, alpha, beta)
}

/// The full twist orbit of `f`, as a lexicographically sorted list.
pub fn orbit(f: &ArfFunction, budget: u64) -> Result<Vec<ArfFunction>, McgError> {
    let moves = available_moves(f.signature());
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: VecDeque<ArfFunction> = VecDeque::new();
    seen.insert(state_of(f));
    queue.push_back(f.clone());
    while let Some(current) = queue.pop_front() {
        for mv in &moves {
            let next = apply_twist(&current, mv)?;
            let key = state_of(&next);
            if !seen.contains(&key) {
                if seen.len() as u64 >= budget {
                    return Err(McgError::BudgetExceeded { budget });
                }
                seen.insert(key);
                queue.push_back(next);
            }
        }
    }
    let mut states: Vec<Vec<u32>> = seen.into_iter().collect();
    states.sort();
    Ok(states
        .iter()
        .map(|s| function_from_state(f.signature(), f.m(), s))
        .collect())
}

/// One twist orbit: its constant Arf invariant, its size, and its
/// lexicographically smallest member.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitClass {
    pub delta: u32,
    pub size: u64,
    pub representative: ArfFunction,
}

/// Partition all m-Arf functions on `sig` into twist orbits and check the
/// partition against the admissible-type list.
///
/// Returns one entry per orbit, sorted by representative.  An orbit with a
/// non-constant invariant, or an orbit count different from the number of
/// admissible types, is reported as [`McgError::ClassificationMismatch`].
pub fn classify_orbits(sig: &Signature, m: u32, budget: u64) -> Result<Vec<OrbitClass>, McgError> {
    let mut classes: Vec<OrbitClass> = Vec::new();
    let mut assigned: HashMap<Vec<u32>, usize> = HashMap::new();
    for f in enumerate_all(sig, m)? {
        let key = state_of(&f);
        if assigned.contains_key(&key) {
            continue;
        }
        // `f` is the lexicographically smallest unassigned state, and every
        // state below it already belongs to an earlier orbit, so `f` is the
        // smallest member of its own orbit: use it as representative.
        let members = orbit(&f, budget.saturating_sub(assigned.len() as u64))?;
        let delta = f.arf_invariant();
        for member in &members {
            if member.arf_invariant() != delta {
                return Err(McgError::ClassificationMismatch(format!(
                    "orbit of {f} contains {member} with delta {} != {delta}",
                    member.arf_invariant()
                )));
            }
            assigned.insert(state_of(member), classes.len());
        }
        classes.push(OrbitClass {
            delta,
            size: members.len() as u64,
            representative: f,
        });
    }
    let mut orbit_deltas: Vec<u32> = classes.iter().map(|c| c.delta).collect();
    orbit_deltas.sort_unstable();
    let admissible: Vec<u32> = sig
        .admissible_types(m)?
        .into_iter()
        .map(|t| t.delta)
        .collect();
    if orbit_deltas != admissible {
        return Err(McgError::ClassificationMismatch(format!(
            "orbit invariants {orbit_deltas:?} != admissible {admissible:?} for {sig} at m={m}"
        )));
    }
    Ok(classes)
}

/// The normal-form tuple for the orbit of invariant `delta` on `(sig, m)`.
///
/// Genus 1: `(delta, 0)`.  Genus >= 2: `(0, xi, 1, ..., 1)` interleaved as
/// `(alpha_1, beta_1, alpha_2, beta_2, ...)`, where `xi = 1 - delta` for even
/// `m` and `xi = 1` for odd `m`.
fn normal_state(sig: &Signature, m: u32, delta: u32) -> Option<Vec<u32>> {
    let g = sig.genus() as usize;
    let reduce = |v: i64| Residue::new(v, m).value();
    match g {
        0 => None,
        1 => Some(vec![reduce(i64::from(delta)), 0]),
        _ => {
            let xi = if m.is_multiple_of(2) {
                1 - i64::from(delta)
            } else {
                1
            };
            let mut alpha = vec![reduce(1); g];
            let mut beta = vec![reduce(1); g];
            alpha[0] = 0;
            beta[0] = reduce(xi);
            alpha.extend(beta);
            Some(alpha)
        }
    }
}

/// Find the normal-form representative of `f`'s orbit together with a witness
/// word of moves carrying `f` to it.
pub fn normal_form(f: &ArfFunction, budget: u64) -> Result<(ArfFunction, Vec<TwistMove>), McgError> {
    let sig = f.signature().clone();
    let m = f.m();
    let delta = f.arf_invariant();
    let target = normal_state(&sig, m, delta).ok_or_else(|| McgError::NotApplicable {
        mv: "normal_form".into(),
        reason: "genus-0 signatures have a single empty tuple".into(),
    })?;
    let moves = available_moves(&sig);
    let start = state_of(f);
    // BFS with parent pointers; the parent map doubles as the visited set.
    let mut parents: HashMap<Vec<u32>, Option<(Vec<u32>, usize)>> = HashMap::new();
    parents.insert(start.clone(), None);
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    queue.push_back(start.clone());
    let mut found = start == target;
    while let Some(state) = queue.pop_front() {
        if found {
            break;
        }
        let current = function_from_state(&sig, m, &state);
        for (idx, mv) in moves.iter().enumerate() {
            let next = state_of(&apply_twist(&current, mv)?);
            if parents.contains_key(&next) {
                continue;
            }
            if parents.len() as u64 >= budget {
                return Err(McgError::BudgetExceeded { budget });
            }
            parents.insert(next.clone(), Some((state.clone(), idx)));
            if next == target {
                found = true;
                break;
            }
            queue.push_back(next);
        }
    }
    if !found {
        return Err(McgError::NormalFormUnreachable {
            start,
            target,
        });
    }
    let mut word_rev: Vec<TwistMove> = Vec::new();
    let mut cursor = target.clone();
    while let Some(Some((prev, idx))) = parents.get(&cursor) {
        word_rev.push(moves[*idx]);
        cursor = prev.clone();
    }
    word_rev.reverse();
    // Replay the witness word; a mismatch here would be a bug.
    let mut replay = f.clone();
    for mv in &word_rev {
        replay = apply_twist(&replay, mv)?;
    }
    assert_eq!(
        state_of(&replay),
        target,
        "witness word does not reproduce the normal form"
    );
    Ok((function_from_state(&sig, m, &target), word_rev))
}

//! Connected components of the space of higher spin structures on a
//! hyperbolic orbifold, reported per signature and degree.
//!
//! The component picture is discrete: liftability decides whether any
//! structure exists, the Arf invariant `delta` separates components, and
//! every component has the same dimension `6g - 6 + 2r` as the Teichmüller
//! space underneath.  This module assembles that picture from the exact
//! machinery — admissible invariants from [`crate::signature`], optional
//! orbit sizes from the twist action in [`crate::mcg`] — into one
//! serializable report.

use crate::arf::{ArfError, ArfFunction};
use crate::mcg::{classify_orbits, McgError};
use crate::signature::{Signature, SignatureError};
use serde::Serialize;
use thiserror::Error;

/// Errors from component reporting.
#[derive(Debug, Error)]
pub enum ModuliError {
    /// The signature has non-negative orbifold Euler characteristic, so
    /// there is no hyperbolic structure to put a spin structure on.
    #[error("signature {signature} is not hyperbolic")]
    NotHyperbolic { signature: String },
    /// The small candidate pool missed an admissible invariant; this
    /// signals a bug, it is never expected on valid input.
    #[error("no candidate representative realizes delta {delta} for {signature} at m = {m}")]
    RepresentativeNotFound {
        signature: String,
        m: u32,
        delta: u32,
    },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Arf(#[from] ArfError),
    #[error(transparent)]
    Mcg(#[from] McgError),
}

/// Handle values `(alpha_i, beta_i)` of one member of a component.
#[derive(Debug, Clone, Serialize)]
pub struct Representative {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

/// One connected component: its Arf invariant, its dimension, a member,
/// and — when the twist orbits were enumerated — its orbit size.
#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub delta: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_size: Option<u64>,
    pub teich_dimension: u64,
    pub representative: Representative,
}

/// The component decomposition for one `(signature, m)` pair.
///
/// `components` is empty exactly when the signature is not liftable at
/// degree `m`, and is sorted by `delta`.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub m: u32,
    pub signature: Signature,
    pub components: Vec<Component>,
}

/// A member of the component with invariant `delta`, from a fixed small
/// candidate pool.
///
/// Genus 0 has no free values; for genus 1 the pair `(delta, 0)` realizes
/// each divisor `delta`; for higher genus the all-zero assignment and the
/// single-pair assignment `(1, 1)` realize the two parities.
fn representative_with_delta(
    signature: &Signature,
    m: u32,
    delta: u32,
) -> Result<ArfFunction, ModuliError> {
    let g = signature.genus() as usize;
    let candidates: Vec<(Vec<i64>, Vec<i64>)> = match g {
        0 => vec![(Vec::new(), Vec::new())],
        1 => vec![(vec![i64::from(delta)], vec![0])],
        _ => {
            let zero = vec![0i64; g];
            let mut one_pair = zero.clone();
            one_pair[0] = 1;
            vec![
                (zero.clone(), zero.clone()),
                (one_pair.clone(), one_pair),
            ]
        }
    };
    for (alphas, betas) in candidates {
        let f = ArfFunction::new_arf(signature.clone(), m, &alphas, &betas)?;
        if f.arf_invariant() == delta {
            return Ok(f);
        }
    }
    Err(ModuliError::RepresentativeNotFound {
        signature: signature.to_string(),
        m,
        delta,
    })
}

/// Report the connected components for `signature` at degree `m`.
///
/// Always returns one component per admissible Arf invariant (so an empty
/// list exactly when `(signature, m)` is not liftable).  With `brute_force`
/// set, the twist orbits are enumerated within `budget` states and their
/// sizes attached; the orbit partition is checked against the component
/// list, and the sizes must add up to the `m^(2g)` functions enumerated.
pub fn components(
    signature: &Signature,
    m: u32,
    brute_force: bool,
    budget: u64,
) -> Result<ComponentReport, ModuliError> {
    if !signature.is_hyperbolic() {
        return Err(ModuliError::NotHyperbolic {
            signature: signature.to_string(),
        });
    }
    let admissible = signature.admissible_types(m)?;
    let dimension = signature.teich_dimension()?;

    let sizes: Option<Vec<(u32, u64)>> = if brute_force && !admissible.is_empty() {
        let orbits = classify_orbits(signature, m, budget)?;
        let mut sizes: Vec<(u32, u64)> = orbits.iter().map(|o| (o.delta, o.size)).collect();
        sizes.sort_unstable();
        let mut deltas: Vec<u32> = sizes.iter().map(|&(d, _)| d).collect();
        deltas.dedup();
        assert_eq!(
            deltas,
            admissible.iter().map(|t| t.delta).collect::<Vec<_>>(),
            "orbit partition disagrees with the admissible invariants for {signature} at m = {m}"
        );
        let total: u64 = sizes.iter().map(|&(_, s)| s).sum();
        assert_eq!(
            u128::from(total),
            u128::from(m).pow(2 * signature.genus()),
            "orbit sizes do not add up to the number of functions for {signature} at m = {m}"
        );
        Some(sizes)
    } else {
        None
    };

    let mut list = Vec::with_capacity(admissible.len());
    for arf_type in &admissible {
        let member = representative_with_delta(signature, m, arf_type.delta)?;
        let orbit_size = sizes.as_ref().map(|s| {
            s.iter()
                .filter(|&&(d, _)| d == arf_type.delta)
                .map(|&(_, size)| size)
                .sum()
        });
        list.push(Component {
            delta: arf_type.delta,
            orbit_size,
            teich_dimension: dimension,
            representative: Representative {
                alpha: member.alpha().iter().map(|r| r.value()).collect(),
                beta: member.beta().iter().map(|r| r.value()).collect(),
            },
        });
    }
    Ok(ComponentReport {
        m,
        signature: signature.clone(),
        components: list,
    })
}

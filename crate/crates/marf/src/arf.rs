//! m-Arf functions stored by their values on a standard generating system.
//!
//! An m-Arf function on a liftable signature is determined by the `2g` free
//! residues it takes on the handle generators `a_1, b_1, ..., a_g, b_g`; its
//! values on the cone generators are forced by the torsion rule
//! `p_j * gamma_j + 1 = 0 (mod m)`.  This module constructs, enumerates, and
//! computes the Arf invariant of such value tuples; the geometric content
//! behind them is verified numerically in [`crate::fuchsian`].

use crate::signature::{elliptic_level, ArfType, Residue, Signature, SignatureError};
use num_integer::Integer;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Errors from constructing or enumerating m-Arf functions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArfError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    /// The signature admits no m-Arf functions at this degree.
    #[error("signature {signature} does not lift to the degree-{m} cover")]
    NotLiftable { signature: String, m: u32 },
    /// A value list does not match the genus of the signature.
    #[error("expected {expected} {what} values, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
}

/// An m-Arf function, recorded by its values on a standard generating system:
/// `alpha_i`, `beta_i` on the `g` handle pairs (free) and `gamma_j` on the `r`
/// cone generators (forced by the signature and `m`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ArfFunction {
    signature: Signature,
    m: u32,
    alpha: Vec<Residue>,
    beta: Vec<Residue>,
    gamma: Vec<Residue>,
}

impl ArfFunction {
    /// Build the m-Arf function with the given free handle values.
    ///
    /// Cone values are computed, not taken: `gamma_j = elliptic_level(p_j, m)`.
    pub fn new_arf(
        signature: Signature,
        m: u32,
        alphas: &[i64],
        betas: &[i64],
    ) -> Result<Self, ArfError> {
        let g = signature.genus() as usize;
        if !signature.liftable(m)? {
            return Err(ArfError::NotLiftable {
                signature: signature.to_string(),
                m,
            });
        }
        if alphas.len() != g {
            return Err(ArfError::LengthMismatch {
                what: "alpha",
                expected: g,
                got: alphas.len(),
            });
        }
        if betas.len() != g {
            return Err(ArfError::LengthMismatch {
                what: "beta",
                expected: g,
                got: betas.len(),
            });
        }
        let alpha = alphas.iter().map(|&v| Residue::new(v, m)).collect();
        let beta = betas.iter().map(|&v| Residue::new(v, m)).collect();
        Ok(Self::from_residues(signature, m, alpha, beta))
    }

    /// Internal constructor for values that are already residues mod `m`.
    /// The caller is responsible for having checked liftability.
    pub(crate) fn from_residues(
        signature: Signature,
        m: u32,
        alpha: Vec<Residue>,
        beta: Vec<Residue>,
    ) -> Self {
        let gamma: Vec<Residue> = signature
            .orders()
            .iter()
            .map(|&p| elliptic_level(p, m).expect("liftability implies coprime orders"))
            .collect();
        // Liftability makes the forced cone values consistent with the
        // degree congruence; keep that fact loudly checked.
        let sum: i64 = gamma.iter().map(Residue::lift).sum();
        let target = (2 - 2 * i64::from(signature.genus())) - signature.cone_count() as i64;
        assert_eq!(
            (sum - target).rem_euclid(i64::from(m)),
            0,
            "forced cone values violate the degree congruence"
        );
        ArfFunction {
            signature,
            m,
            alpha,
            beta,
            gamma,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Values on the handle generators `a_1, ..., a_g`.
    pub fn alpha(&self) -> &[Residue] {
        &self.alpha
    }

    /// Values on the handle generators `b_1, ..., b_g`.
    pub fn beta(&self) -> &[Residue] {
        &self.beta
    }

    /// Forced values on the cone generators `c_1, ..., c_r`.
    pub fn gamma(&self) -> &[Residue] {
        &self.gamma
    }

    /// The free values as one flat canonical-representative tuple
    /// `(alpha_1, ..., alpha_g, beta_1, ..., beta_g)`.
    pub fn state(&self) -> Vec<u32> {
        self.alpha
            .iter()
            .chain(self.beta.iter())
            .map(Residue::value)
            .collect()
    }

    /// The Arf invariant `delta` of this function.
    ///
    /// For genus 0 it is 0.  For genus 1 it is
    /// `gcd(m, p_1 - 1, ..., p_r - 1, alpha_1, beta_1)` over canonical
    /// representatives (so `delta = m` when everything vanishes).  For genus
    /// at least 2 it is 0 when `m` is odd, and the parity
    /// `sum (1 - alpha_i)(1 - beta_i) mod 2` when `m` is even; that parity
    /// does not depend on the choice of standard generating system, which is
    /// what lets us read it off the stored basis directly.
    pub fn arf_invariant(&self) -> u32 {
        let g = self.signature.genus();
        match g {
            0 => 0,
            1 => {
                let base = self.signature.genus_one_gcd(self.m);
                let d = i64::from(base)
                    .gcd(&self.alpha[0].lift())
                    .gcd(&self.beta[0].lift());
                d as u32
            }
            _ => {
                if !self.m.is_multiple_of(2) {
                    0
                } else {
                    let sum: i64 = self
                        .alpha
                        .iter()
                        .zip(&self.beta)
                        .map(|(a, b)| (1 - a.lift()) * (1 - b.lift()))
                        .sum();
                    sum.rem_euclid(2) as u32
                }
            }
        }
    }

    /// The topological type `(signature, delta)` of this function.
    pub fn type_of(&self) -> ArfType {
        ArfType {
            signature: self.signature.clone(),
            delta: self.arf_invariant(),
        }
    }
}

impl fmt::Display for ArfFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self
            .alpha
            .iter()
            .zip(&self.beta)
            .flat_map(|(a, b)| [a.value().to_string(), b.value().to_string()])
            .collect();
        write!(
            f,
            "{} m={} (alpha,beta)=({})",
            self.signature,
            self.m,
            vals.join(",")
        )
    }
}

/// Lazily yields every m-Arf function on a signature, ordered
/// lexicographically by the `(alpha, beta)` representative tuple.
pub struct ArfEnumeration {
    signature: Signature,
    m: u32,
    // Odometer over 2g digits in base m; None once exhausted.
    digits: Option<Vec<u32>>,
}

impl Iterator for ArfEnumeration {
    type Item = ArfFunction;

    fn next(&mut self) -> Option<ArfFunction> {
        let digits = self.digits.as_mut()?;
        let g = self.signature.genus() as usize;
        let alpha = digits[..g]
            .iter()
            .map(|&v| Residue::new(i64::from(v), self.m))
            .collect();
        let beta = digits[g..]
            .iter()
            .map(|&v| Residue::new(i64::from(v), self.m))
            .collect();
        let f = ArfFunction::from_residues(self.signature.clone(), self.m, alpha, beta);
        // Advance the least significant digit; lexicographic order over the
        // flat tuple means the last position moves fastest.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                self.digits = None;
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < self.m {
                break;
            }
            digits[pos] = 0;
        }
        Some(f)
    }
}

/// Enumerate all `m^(2g)` m-Arf functions on `signature` in lexicographic
/// order of their `(alpha, beta)` tuples.
pub fn enumerate_all(signature: &Signature, m: u32) -> Result<ArfEnumeration, ArfError> {
    if !signature.liftable(m)? {
        return Err(ArfError::NotLiftable {
            signature: signature.to_string(),
            m,
        });
    }
    let digits = vec![0u32; 2 * signature.genus() as usize];
    Ok(ArfEnumeration {
        signature: signature.clone(),
        m,
        digits: Some(digits),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(genus: u32, orders: &[u32]) -> Signature {
        Signature::new(genus, orders.to_vec()).unwrap()
    }

    #[test]
    fn cone_values_are_forced() {
        let f = ArfFunction::new_arf(sig(1, &[5]), 4, &[0], &[0]).unwrap();
        assert_eq!(f.gamma().iter().map(Residue::value).collect::<Vec<_>>(), [3]);

        let f = ArfFunction::new_arf(sig(0, &[5, 5, 5]), 2, &[], &[]).unwrap();
        assert_eq!(
            f.gamma().iter().map(Residue::value).collect::<Vec<_>>(),
            [1, 1, 1]
        );
    }

    #[test]
    fn non_liftable_signatures_are_rejected() {
        let err = ArfFunction::new_arf(sig(0, &[2, 3, 7]), 2, &[], &[]).unwrap_err();
        assert!(matches!(err, ArfError::NotLiftable { m: 2, .. }));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let err = ArfFunction::new_arf(sig(1, &[5]), 4, &[0, 1], &[0]).unwrap_err();
        assert!(matches!(
            err,
            ArfError::LengthMismatch {
                what: "alpha",
                expected: 1,
                got: 2
            }
        ));
    }

    #[test]
    fn arf_invariant_examples() {
        let inv = |s: &Signature, m: u32, a: &[i64], b: &[i64]| {
            ArfFunction::new_arf(s.clone(), m, a, b)
                .unwrap()
                .arf_invariant()
        };
        let g2 = sig(2, &[]);
        assert_eq!(inv(&g2, 2, &[0, 0], &[0, 0]), 0);
        assert_eq!(inv(&g2, 2, &[0, 1], &[0, 1]), 1);
        assert_eq!(inv(&g2, 2, &[0, 1], &[1, 1]), 0);

        let torus = sig(1, &[5]);
        assert_eq!(inv(&torus, 4, &[0], &[0]), 4);
        assert_eq!(inv(&torus, 4, &[1], &[2]), 1);
        assert_eq!(inv(&torus, 4, &[2], &[0]), 2);

        // Odd m in higher genus and all of genus 0 give delta = 0.
        assert_eq!(inv(&sig(2, &[5, 5]), 3, &[1, 2], &[0, 1]), 0);
        assert_eq!(inv(&sig(0, &[5, 5, 5]), 2, &[], &[]), 0);
    }

    #[test]
    fn type_of_carries_signature_and_delta() {
        let f = ArfFunction::new_arf(sig(1, &[5]), 4, &[2], &[0]).unwrap();
        let t = f.type_of();
        assert_eq!(t.signature, *f.signature());
        assert_eq!(t.delta, 2);
    }

    #[test]
    fn enumeration_counts_match_closed_form() {
        for (s, m) in [
            (sig(2, &[]), 2),
            (sig(1, &[5]), 2),
            (sig(1, &[5]), 4),
            (sig(0, &[5, 5, 5]), 2),
            (sig(2, &[5, 5]), 3),
            (sig(4, &[]), 3),
        ] {
            let n = enumerate_all(&s, m).unwrap().count();
            assert_eq!(
                num_bigint::BigUint::from(n),
                s.count_arf_functions(m).unwrap(),
                "{s} m={m}"
            );
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_duplicate_free() {
        let states: Vec<Vec<u32>> = enumerate_all(&sig(1, &[5]), 4)
            .unwrap()
            .map(|f| f.state())
            .collect();
        assert_eq!(states.len(), 16);
        assert_eq!(states[0], [0, 0]);
        assert_eq!(states[1], [0, 1]);
        assert_eq!(states[4], [1, 0]);
        let mut sorted = states.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(states, sorted, "already sorted and duplicate-free");
    }

    #[test]
    fn enumerated_types_are_admissible() {
        for (s, m) in [(sig(2, &[]), 2u32), (sig(1, &[5]), 4), (sig(2, &[5, 5]), 3)] {
            let admissible: Vec<u32> = s
                .admissible_types(m)
                .unwrap()
                .into_iter()
                .map(|t| t.delta)
                .collect();
            for f in enumerate_all(&s, m).unwrap() {
                assert!(
                    admissible.contains(&f.arf_invariant()),
                    "delta {} not admissible for {s} m={m}",
                    f.arf_invariant()
                );
            }
        }
    }

    #[test]
    fn differences_form_an_affine_structure() {
        // Subtracting two functions componentwise on (alpha, beta) and adding
        // a third always lands on another valid function.
        let s = sig(1, &[5]);
        let all: Vec<ArfFunction> = enumerate_all(&s, 4).unwrap().collect();
        for f1 in &all {
            for f2 in &all {
                for f3 in &all {
                    let a: Vec<i64> = (0..1)
                        .map(|i| f1.alpha()[i].lift() - f2.alpha()[i].lift() + f3.alpha()[i].lift())
                        .collect();
                    let b: Vec<i64> = (0..1)
                        .map(|i| f1.beta()[i].lift() - f2.beta()[i].lift() + f3.beta()[i].lift())
                        .collect();
                    let combined = ArfFunction::new_arf(s.clone(), 4, &a, &b).unwrap();
                    assert!(all.contains(&combined));
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let f = ArfFunction::new_arf(sig(1, &[5]), 4, &[1], &[2]).unwrap();
        assert_eq!(
            serde_json::to_value(&f).unwrap(),
            serde_json::json!({
                "signature": {"genus": 1, "orders": [5]},
                "m": 4,
                "alpha": [1],
                "beta": [2],
                "gamma": [3],
            })
        );
    }
}

//! Orbifold signatures and the exact arithmetic behind liftability.
//!
//! A signature `(g: p1, ..., pr)` records the genus of a closed orientable
//! hyperbolic 2-orbifold together with the orders of its cone points.  Every
//! question answered here — hyperbolicity, whether the uniformizing group
//! lifts to the degree-`m` cover of PSL(2,R), which Arf invariants can occur —
//! is number-theoretic, so this module works entirely in exact integer and
//! rational arithmetic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Errors from the exact (integer/rational) layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    /// Cone orders must be at least 2.
    #[error("invalid cone order {0}: orders must be >= 2")]
    InvalidOrder(u32),
    /// The cover degree must be at least 1.
    #[error("invalid cover degree 0: m must be >= 1")]
    InvalidModulus,
    /// The requested quantity only makes sense for hyperbolic signatures.
    #[error("signature {0} is not hyperbolic (orbifold Euler characteristic {1})")]
    NotHyperbolic(String, String),
    /// No residue `n` with `p*n + 1 = 0 (mod m)` exists unless gcd(p, m) = 1.
    #[error("cone order {p} is not coprime to the cover degree {m}")]
    NotCoprime { p: u32, m: u32 },
}

/// A residue class modulo `m >= 1`, stored by its canonical representative in `[0, m)`.
///
/// All arithmetic is exact; mixing residues with different moduli panics, since
/// that is always a programming error in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    modulus: u32,
}

impl Residue {
    /// Reduce `value` into `[0, m)`.  Panics if `m == 0`.
    pub fn new(value: i64, m: u32) -> Self {
        assert!(m >= 1, "residue modulus must be >= 1");
        Residue {
            value: value.rem_euclid(i64::from(m)) as u32,
            modulus: m,
        }
    }

    /// The canonical representative in `[0, m)`.
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The canonical representative as a signed integer (convenient for sums).
    pub fn lift(&self) -> i64 {
        i64::from(self.value)
    }

    fn expect_same_modulus(&self, other: &Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue moduli differ: {} vs {}",
            self.modulus, other.modulus
        );
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.expect_same_modulus(&rhs);
        Residue::new(self.lift() + rhs.lift(), self.modulus)
    }
}

impl std::ops::Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.expect_same_modulus(&rhs);
        Residue::new(self.lift() - rhs.lift(), self.modulus)
    }
}

impl std::ops::Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue::new(-self.lift(), self.modulus)
    }
}

impl std::ops::Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.expect_same_modulus(&rhs);
        Residue::new(self.lift() * rhs.lift(), self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Serialize for Residue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

/// The unique residue `n` modulo `m` with `p*n + 1 = 0 (mod m)`.
///
/// This is the level that a counterclockwise rotation by `2*pi/p` must carry in
/// the degree-`m` cover so that its `p`-th power is the central full turn; it
/// exists exactly when `gcd(p, m) = 1`.
pub fn elliptic_level(p: u32, m: u32) -> Result<Residue, SignatureError> {
    if m == 0 {
        return Err(SignatureError::InvalidModulus);
    }
    if p.gcd(&m) != 1 {
        return Err(SignatureError::NotCoprime { p, m });
    }
    // n = -p^{-1} mod m, via the extended Euclidean algorithm.
    let e = i64::from(p).extended_gcd(&i64::from(m));
    debug_assert_eq!(e.gcd, 1);
    Ok(Residue::new(-e.x, m))
}

/// Whether (and why not) a signature admits lifts to the degree-`m` cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Liftability {
    /// Lifts exist; there are exactly `m^(2g)` of them.
    Liftable,
    /// Cone order `p` shares a factor with `m`, so its cyclic group does not lift.
    OrderNotCoprime { p: u32 },
    /// All orders are coprime to `m` but the degree congruence fails.
    CongruenceFails,
}

/// The signature `(g: p1, ..., pr)` of a closed orientable 2-orbifold:
/// genus `g` together with the orders `p_i >= 2` of its cone points.
///
/// The order list is kept in the user-given sequence because the standard
/// generating system it labels is ordered; use [`Signature::sorted_orders`]
/// when an order-insensitive form is needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    genus: u32,
    orders: Vec<u32>,
}

impl Signature {
    pub fn new(genus: u32, orders: Vec<u32>) -> Result<Self, SignatureError> {
        if let Some(&p) = orders.iter().find(|&&p| p < 2) {
            return Err(SignatureError::InvalidOrder(p));
        }
        Ok(Signature { genus, orders })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Number of cone points, written `r`.
    pub fn cone_count(&self) -> usize {
        self.orders.len()
    }

    /// The cone orders in ascending order, for hashing and de-duplication.
    pub fn sorted_orders(&self) -> Vec<u32> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v
    }

    /// Orbifold Euler characteristic `2 - 2g - sum(1 - 1/p_i)`, exactly.
    pub fn euler_characteristic(&self) -> BigRational {
        let mut chi = BigRational::from_integer((2 - 2 * i64::from(self.genus)).into());
        for &p in &self.orders {
            let one_over_p = BigRational::new(1.into(), i64::from(p).into());
            chi -= BigRational::from_integer(1.into()) - one_over_p;
        }
        chi
    }

    /// A signature belongs to a hyperbolic orbifold iff its Euler characteristic
    /// is negative.
    pub fn is_hyperbolic(&self) -> bool {
        self.euler_characteristic().is_negative()
    }

    fn require_hyperbolic(&self) -> Result<(), SignatureError> {
        if self.is_hyperbolic() {
            Ok(())
        } else {
            Err(SignatureError::NotHyperbolic(
                self.to_string(),
                self.euler_characteristic().to_string(),
            ))
        }
    }

    /// Real dimension `6g - 6 + 2r` of the space of marked Fuchsian groups with
    /// this signature.
    pub fn teich_dimension(&self) -> Result<u64, SignatureError> {
        self.require_hyperbolic()?;
        let dim = 6 * i64::from(self.genus) - 6 + 2 * self.orders.len() as i64;
        debug_assert!(dim >= 0, "hyperbolic signatures have nonnegative dimension");
        Ok(dim as u64)
    }

    /// Full liftability test for the degree-`m` cover, with the failure reason.
    ///
    /// Lifts exist iff every cone order is coprime to `m` and
    /// `(p1*...*pr) * (sum 1/p_i - (2g - 2) - r)` — always an integer — is
    /// divisible by `m`.
    pub fn liftability(&self, m: u32) -> Result<Liftability, SignatureError> {
        if m == 0 {
            return Err(SignatureError::InvalidModulus);
        }
        self.require_hyperbolic()?;
        Ok(self.liftability_unchecked(m))
    }

    fn liftability_unchecked(&self, m: u32) -> Liftability {
        for &p in &self.orders {
            if p.gcd(&m) != 1 {
                return Liftability::OrderNotCoprime { p };
            }
        }
        let g = i64::from(self.genus);
        let r = self.orders.len() as i64;
        let mut sum = BigRational::from_integer((-(2 * g - 2) - r).into());
        for &p in &self.orders {
            sum += BigRational::new(1.into(), i64::from(p).into());
        }
        let mut product = BigRational::from_integer(1.into());
        for &p in &self.orders {
            product *= BigRational::from_integer(i64::from(p).into());
        }
        let n = sum * product;
        assert!(
            n.is_integer(),
            "the liftability expression is an integer by construction"
        );
        if (n.to_integer() % num_bigint::BigInt::from(m)).is_zero() {
            Liftability::Liftable
        } else {
            Liftability::CongruenceFails
        }
    }

    /// True iff the uniformizing Fuchsian group lifts to the degree-`m` cover.
    pub fn liftable(&self, m: u32) -> Result<bool, SignatureError> {
        Ok(matches!(self.liftability(m)?, Liftability::Liftable))
    }

    /// `gcd(m, p1 - 1, ..., pr - 1)`; by convention the empty gcd is `m`.
    /// This is the modulus governing genus-1 Arf invariants.
    pub(crate) fn genus_one_gcd(&self, m: u32) -> u32 {
        self.orders.iter().fold(m, |acc, &p| acc.gcd(&(p - 1)))
    }

    /// Number of m-Arf functions on this signature: `m^(2g)` when liftable,
    /// zero otherwise.
    pub fn count_arf_functions(&self, m: u32) -> Result<BigUint, SignatureError> {
        if self.liftable(m)? {
            Ok(BigUint::from(m).pow(2 * self.genus))
        } else {
            Ok(BigUint::zero())
        }
    }

    /// The Arf invariants that occur for this signature at degree `m`, as
    /// types, in ascending order of `delta`.  Empty exactly when not liftable.
    pub fn admissible_types(&self, m: u32) -> Result<Vec<ArfType>, SignatureError> {
        if !self.liftable(m)? {
            return Ok(Vec::new());
        }
        let deltas: Vec<u32> = match self.genus {
            0 => vec![0],
            1 => {
                let d = self.genus_one_gcd(m);
                let mut divs: Vec<u32> = (1..=d).filter(|&k| d.is_multiple_of(k)).collect();
                divs.sort_unstable();
                divs
            }
            _ => {
                if m.is_multiple_of(2) {
                    vec![0, 1]
                } else {
                    vec![0]
                }
            }
        };
        Ok(deltas
            .into_iter()
            .map(|delta| ArfType {
                signature: self.clone(),
                delta,
            })
            .collect())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}: ", self.genus)?;
        if self.orders.is_empty() {
            write!(f, "-")?;
        } else {
            for (i, p) in self.orders.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
        }
        write!(f, ")")
    }
}

/// A topological type: a signature together with the Arf invariant `delta` of
/// an m-Arf function on it.  Types label the connected components of the
/// moduli space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ArfType {
    #[serde(flatten)]
    pub signature: Signature,
    pub delta: u32,
}

impl fmt::Display for ArfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} delta={}", self.signature, self.delta)
    }
}

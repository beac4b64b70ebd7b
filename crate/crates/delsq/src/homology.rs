//! Closed-form (co)homology tables for a lens space L = L(p, q), its square
//! X = L x L, its deleted square X_0 = X minus the diagonal, and the
//! universal cover of the deleted square, together with the inclusion map on
//! H_3 and the deck-transformation action on the cover's second cohomology.
//!
//! Everything here is parameterized by p rather than hard-coded per prime,
//! since survey mode ranges over many moduli. Degrees outside the stated
//! range return the trivial group.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

/// A finitely generated abelian group as an ordered list of cyclic factors;
/// order 0 stands for an infinite cyclic factor, so `[0, 0, p]` encodes
/// `Z + Z + Z/p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbGroup {
    orders: Vec<u64>,
}

impl AbGroup {
    pub fn trivial() -> Self {
        AbGroup { orders: Vec::new() }
    }

    /// Factors in the given order; each order must be 0 or at least 2.
    pub fn from_orders(orders: impl Into<Vec<u64>>) -> Self {
        let orders = orders.into();
        assert!(
            orders.iter().all(|&n| n == 0 || n >= 2),
            "cyclic factor orders must be 0 (infinite) or >= 2"
        );
        AbGroup { orders }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|&&n| n == 0).count()
    }

    pub fn torsion(&self) -> Vec<u64> {
        self.orders.iter().copied().filter(|&n| n != 0).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }
}

impl std::fmt::Display for AbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .orders
            .iter()
            .map(|&n| {
                if n == 0 {
                    "Z".to_string()
                } else {
                    format!("Z/{n}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for AbGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AbGroup", 2)?;
        s.serialize_field("free_rank", &self.free_rank())?;
        s.serialize_field("torsion", &self.torsion())?;
        s.end()
    }
}

/// H_k of the lens space L(p, q); the chain complex is
/// `0 -> Z -0-> Z -p-> Z -0-> Z -> 0`.
pub fn homology_lens(p: u64, k: u32) -> AbGroup {
    match k {
        0 => AbGroup::from_orders([0]),
        1 => AbGroup::from_orders([p]),
        2 => AbGroup::trivial(),
        3 => AbGroup::from_orders([0]),
        _ => AbGroup::trivial(),
    }
}

/// H_k of the square X = L x L.
pub fn homology_square(p: u64, k: u32) -> AbGroup {
    match k {
        0 => AbGroup::from_orders([0]),
        1 => AbGroup::from_orders([p, p]),
        2 => AbGroup::from_orders([p]),
        3 => AbGroup::from_orders([0, 0, p]),
        4 => AbGroup::from_orders([p, p]),
        5 => AbGroup::trivial(),
        6 => AbGroup::from_orders([0]),
        _ => AbGroup::trivial(),
    }
}

/// H_k of the deleted square X_0.
pub fn homology_delsq(p: u64, k: u32) -> AbGroup {
    match k {
        0 => AbGroup::from_orders([0]),
        1 => AbGroup::from_orders([p, p]),
        2 => AbGroup::from_orders([p]),
        3 => AbGroup::from_orders([0, p]),
        4 => AbGroup::from_orders([p]),
        _ => AbGroup::trivial(),
    }
}

/// H^k of the deleted square X_0.
pub fn cohomology_delsq(p: u64, k: u32) -> AbGroup {
    match k {
        0 => AbGroup::from_orders([0]),
        1 => AbGroup::trivial(),
        2 => AbGroup::from_orders([p, p]),
        3 => AbGroup::from_orders([0, p]),
        4 => AbGroup::from_orders([p]),
        5 => AbGroup::from_orders([p]),
        _ => AbGroup::trivial(),
    }
}

/// H^k of the universal cover of the deleted square: free of rank p - 1 in
/// degrees 2 and 5, infinite cyclic in degrees 0 and 3, trivial elsewhere.
pub fn cohomology_cover(p: u64, k: u32) -> AbGroup {
    match k {
        0 => AbGroup::from_orders([0]),
        2 => AbGroup::from_orders(vec![0; (p - 1) as usize]),
        3 => AbGroup::from_orders([0]),
        5 => AbGroup::from_orders(vec![0; (p - 1) as usize]),
        _ => AbGroup::trivial(),
    }
}

/// The inclusion-induced map `H_3(X_0) = Z + Z/p -> H_3(X) = Z + Z + Z/p`
/// with respect to the canonical generators: `(1, 0) -> (1, 1, 0)` and
/// `(0, 1) -> (0, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionH3 {
    p: u64,
}

/// Structured description of the inclusion on H_3, for report rendering.
pub fn i_star_h3(p: u64) -> InclusionH3 {
    InclusionH3 { p }
}

impl InclusionH3 {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn image_of_free(&self) -> (i64, i64, u64) {
        (1, 1, 0)
    }

    pub fn image_of_torsion(&self) -> (i64, i64, u64) {
        (0, 0, 1)
    }

    /// Image of `free * (1, 0) + torsion * (0, 1)`.
    pub fn apply(&self, free: i64, torsion: i64) -> (i64, i64, u64) {
        (free, free, torsion.rem_euclid(self.p as i64) as u64)
    }
}

impl Serialize for InclusionH3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("InclusionH3", 3)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("free_image", &[1u64, 1, 0])?;
        s.serialize_field("torsion_image", &[0u64, 0, 1])?;
        s.end()
    }
}

/// Action of the deck transformation `(m, n)` on the generator index `k` of
/// the cover's second cohomology: `k -> k + m - n (mod p)`. The diagonal
/// acts trivially, so the action factors through the antidiagonal quotient.
pub fn deck_action(m: u64, n: u64, k: u64, p: u64) -> u64 {
    (k % p + m % p + (p - n % p) % p) % p
}

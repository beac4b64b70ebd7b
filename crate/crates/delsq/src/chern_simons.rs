//! The SU(2) character variety of the square / deleted square of a lens
//! space and the Cheeger-Simons character values on the generators of H_3.
//!
//! Every representation of the fundamental group `Z/p + Z/p` conjugates into
//! the maximal torus, so a conjugacy class is a pair `(k, l)` of residues
//! identified with `(p - k, p - l)`. The values of the character on the
//! standard H_3 generators have closed forms with denominator p:
//!
//! * on the two free generators of the square: `-k^2 r / p` and `-l^2 r / p`
//!   where `q r = -1 (mod p)`;
//! * on the torsion generator: `2 k l / p` up to a global sign;
//! * on the deleted square these combine to `-r (k^2 + l^2) / p` on the free
//!   generator and `2 k l / p` on the torsion generator.
//!
//! The global sign on the torsion value comes from an orientation choice on
//! the 3-manifold realizing the torsion class. The plus convention is stored
//! here; the obstruction system enumerates both signs where required, so no
//! information is lost.
//!
//! Only odd primes are exposed. For even p the character variety has
//! `(p^2 + 4) / 2` points instead, but nothing downstream applies there.

use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::modp::{self, inv_mod, is_odd_prime};
use crate::Error;

/// Conjugacy class of a representation `Z/p + Z/p -> SU(2)`, stored as the
/// canonical pair: `(k, l)` no greater than `(p-k, p-l)` lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Rep {
    p: u64,
    k: u64,
    l: u64,
}

impl Rep {
    pub fn new(p: u64, k: u64, l: u64) -> Self {
        let (k, l) = (k % p, l % p);
        let neg = ((p - k) % p, (p - l) % p);
        if (k, l) <= neg {
            Rep { p, k, l }
        } else {
            Rep {
                p,
                k: neg.0,
                l: neg.1,
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0 && self.l == 0
    }
}

/// One canonical representative per conjugacy class; `(p^2 + 1) / 2` classes
/// for odd p.
pub fn character_variety(p: u64) -> Vec<Rep> {
    assert!(is_odd_prime(p), "character_variety requires an odd prime");
    let mut out = Vec::with_capacity((p * p).div_ceil(2) as usize);
    for k in 0..p {
        for l in 0..p {
            if (k, l) <= ((p - k) % p, (p - l) % p) {
                out.push(Rep { p, k, l });
            }
        }
    }
    out
}

/// Element of `(1/p) Z / Z`, stored as its numerator mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QZp {
    p: u64,
    num: u64,
}

impl QZp {
    pub fn new(p: u64, num: i64) -> Self {
        QZp {
            p,
            num: num.rem_euclid(p as i64) as u64,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl Add for QZp {
    type Output = QZp;

    fn add(self, other: QZp) -> QZp {
        assert_eq!(self.p, other.p, "QZp values over different denominators");
        QZp {
            p: self.p,
            num: (self.num + other.num) % self.p,
        }
    }
}

impl fmt::Display for QZp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.p)
    }
}

impl Serialize for QZp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Character values on the three H_3 generators of the square L x L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SquareValues {
    /// On the factor `e_0 x L`.
    pub on_e0_x_l: QZp,
    /// On the factor `L x e_0`.
    pub on_l_x_e0: QZp,
    /// On the torsion generator, with the plus sign convention.
    pub on_torsion: QZp,
}

/// Character values on the two H_3 generators of the deleted square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeletedSquareValues {
    pub on_free: QZp,
    /// Plus sign convention, as on the square.
    pub on_torsion: QZp,
}

fn validate(p: u64, q: u64, rep: &Rep) -> Result<u64, Error> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if modp::gcd(p, q % p) != 1 {
        return Err(Error::NotCoprime { p, q: q % p });
    }
    if rep.p != p {
        return Err(Error::ModulusMismatch(p, rep.p));
    }
    // r with q r = -1 (mod p); recomputed on every call so the value
    // formulas stay self-contained
    Ok((p - inv_mod(q, p)?) % p)
}

fn free_value(p: u64, r: u64, k: u64) -> u64 {
    // -k^2 r mod p
    (p - (k * k % p) * r % p) % p
}

fn torsion_value(p: u64, k: u64, l: u64) -> u64 {
    2 * k % p * l % p
}

/// Character values on H_3 of the square, for the class of `rep`.
pub fn cs_on_square(p: u64, q: u64, rep: &Rep) -> Result<SquareValues, Error> {
    let r = validate(p, q, rep)?;
    Ok(SquareValues {
        on_e0_x_l: QZp::new(p, free_value(p, r, rep.k) as i64),
        on_l_x_e0: QZp::new(p, free_value(p, r, rep.l) as i64),
        on_torsion: QZp::new(p, torsion_value(p, rep.k, rep.l) as i64),
    })
}

/// Character values on H_3 of the deleted square; the free value is the sum
/// of the two free values on the square.
pub fn cs_on_deleted_square(p: u64, q: u64, rep: &Rep) -> Result<DeletedSquareValues, Error> {
    let r = validate(p, q, rep)?;
    let free = (free_value(p, r, rep.k) + free_value(p, r, rep.l)) % p;
    Ok(DeletedSquareValues {
        on_free: QZp::new(p, free as i64),
        on_torsion: QZp::new(p, torsion_value(p, rep.k, rep.l) as i64),
    })
}

//! Exact arithmetic in Z/p for odd primes p, and the normalized lens-space
//! pair that every other module takes as input.
//!
//! Residues are kept in the canonical range `0..p`; all public entry points
//! reduce their arguments first, so the signed expressions appearing in the
//! value formulas elsewhere in the crate never leak sign-convention bugs.

use crate::Error;

/// Deterministic trial division. All moduli in this crate are small (a few
/// hundred at the very most), so nothing fancier is warranted.
pub fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Multiplicative inverse of `x` mod `p`, in `1..p`.
///
/// Extended Euclid rather than Fermat, so the function stays correct for any
/// modulus as long as `gcd(x, p) = 1`.
pub fn inv_mod(x: u64, p: u64) -> Result<u64, Error> {
    let x = x % p;
    if x == 0 {
        return Err(Error::NotInvertible(p));
    }
    let (mut r0, mut r1) = (p as i64, x as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { p, q: x });
    }
    Ok(s0.rem_euclid(p as i64) as u64)
}

/// All residues whose square is `y` mod `p`, in ascending order.
///
/// The set is empty or `{a, p-a}` for `y != 0`, and `{0}` for `y = 0`. A
/// direct scan is exact and instantaneous at the moduli this crate handles.
pub fn square_roots(y: u64, p: u64) -> Vec<u64> {
    let y = y % p;
    (0..p).filter(|a| (a * a) % p == y).collect()
}

/// A validated and normalized pair of lens spaces L(p, q) and L(p, q').
///
/// L(p, q) and L(p, p-q) are the same manifold with opposite canonical
/// conventions, so each slot is reflected into the range `0 < q < p/2` and a
/// flag records whether the reflection happened. The normalized values drive
/// every downstream pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LensPair {
    p: u64,
    q: u64,
    q_prime: u64,
    q_norm: u64,
    q_prime_norm: u64,
    q_reflected: bool,
    q_prime_reflected: bool,
}

impl LensPair {
    /// Validates `(p, q, q')` and normalizes both `q` slots.
    ///
    /// Rejects `p` that is not an odd prime and `q` values not coprime to
    /// `p`. Inputs are reduced mod `p` before validation.
    pub fn new(p: u64, q: u64, q_prime: u64) -> Result<Self, Error> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let q = q % p;
        let q_prime = q_prime % p;
        if gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        if gcd(p, q_prime) != 1 {
            return Err(Error::NotCoprime { p, q: q_prime });
        }
        let (q_norm, q_reflected) = if 2 * q < p { (q, false) } else { (p - q, true) };
        let (q_prime_norm, q_prime_reflected) = if 2 * q_prime < p {
            (q_prime, false)
        } else {
            (p - q_prime, true)
        };
        Ok(LensPair {
            p,
            q,
            q_prime,
            q_norm,
            q_prime_norm,
            q_reflected,
            q_prime_reflected,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_prime(&self) -> u64 {
        self.q_prime
    }

    /// Representative of `q` in `(0, p/2)`.
    pub fn q_norm(&self) -> u64 {
        self.q_norm
    }

    /// Representative of `q'` in `(0, p/2)`.
    pub fn q_prime_norm(&self) -> u64 {
        self.q_prime_norm
    }

    /// Whether normalization replaced `q` by `p - q`.
    pub fn q_reflected(&self) -> bool {
        self.q_reflected
    }

    /// Whether normalization replaced `q'` by `p - q'`.
    pub fn q_prime_reflected(&self) -> bool {
        self.q_prime_reflected
    }
}

impl std::fmt::Display for LensPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L({}, {}) vs L({}, {})", self.p, self.q, self.p, self.q_prime)
    }
}

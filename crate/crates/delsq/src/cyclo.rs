//! Exact arithmetic in the cyclotomic ring `R_p = F2[t] / (1 + t + ... + t^(p-1))`.
//!
//! `R_p` carries the second cohomology of the universal cover of a deleted
//! square, with `t` acting as the residual deck transformation. Elements are
//! stored bit-packed in the canonical basis `{1, t, ..., t^(p-2)}`: bit `i`
//! of the vector is the coefficient of `t^i`, and the degree is always kept
//! strictly below `p - 1`. Equality is therefore a plain bit-vector
//! comparison and solution counting is unambiguous.
//!
//! Multiplication is carryless polynomial multiplication followed by a
//! two-stage reduction: exponents `>= p` are folded down by `p` (using
//! `t^p = 1`), then a single substitution `t^(p-1) = 1 + t + ... + t^(p-2)`
//! restores the canonical degree bound. One machine word covers every prime
//! this crate searches, but the representation is a limb vector so larger
//! `p` degrades gracefully rather than overflowing.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::Error;

/// Element of `R_p` in canonical bit-packed form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloPoly {
    p: u64,
    bits: Vec<u64>,
}

fn limbs_for(p: u64) -> usize {
    (p as usize - 1).div_ceil(64)
}

impl CycloPoly {
    pub fn zero(p: u64) -> Self {
        debug_assert!(p >= 3 && p % 2 == 1);
        CycloPoly {
            p,
            bits: vec![0; limbs_for(p)],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::monomial(p, 0)
    }

    /// Canonical representative of `t^n` (exponent reduced mod `p`).
    ///
    /// For `n = p - 1` this is the long form `1 + t + ... + t^(p-2)`, forced
    /// by the defining relation of the ring.
    pub fn monomial(p: u64, n: u64) -> Self {
        let n = n % p;
        let mut out = Self::zero(p);
        if n == p - 1 {
            for i in 0..p - 1 {
                out.set_bit(i);
            }
        } else {
            out.set_bit(n);
        }
        out
    }

    /// XOR of `t^n` over the given exponents (each reduced mod `p`).
    pub fn from_exponents(p: u64, exps: impl IntoIterator<Item = u64>) -> Self {
        let mut out = Self::zero(p);
        for e in exps {
            out = out.try_add(&Self::monomial(p, e)).expect("same p");
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn coeff(&self, i: u64) -> bool {
        if i >= self.p - 1 {
            return false;
        }
        (self.bits[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    fn set_bit(&mut self, i: u64) {
        self.bits[(i / 64) as usize] |= 1u64 << (i % 64);
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (li, &w) in self.bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(li as u64 * 64 + w.trailing_zeros() as u64);
                w &= w - 1;
            }
        }
        out
    }

    /// Coefficient-wise addition (XOR in characteristic 2).
    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(CycloPoly { p: self.p, bits })
    }

    /// Product in `R_p`, in canonical form.
    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        let p = self.p;
        // Carryless product; both factors have degree <= p - 2, so the raw
        // product has degree <= 2p - 4.
        let mut prod = vec![0u64; 2 * self.bits.len() + 1];
        for e in self.support() {
            f2::xor_shifted(&mut prod, &other.bits, e as usize);
        }
        // Fold t^(p + e) down to t^e; targets stay below p so one pass is
        // enough.
        for e in p..=2 * p - 4 {
            let (li, bi) = ((e / 64) as usize, e % 64);
            if (prod[li] >> bi) & 1 == 1 {
                prod[li] ^= 1u64 << bi;
                let d = e - p;
                prod[(d / 64) as usize] ^= 1u64 << (d % 64);
            }
        }
        Ok(Self::canonicalize_p_window(p, prod))
    }

    /// Canonicalizes a bit vector whose support lies within `0..=p-1` by
    /// substituting `t^(p-1) = 1 + ... + t^(p-2)` once.
    fn canonicalize_p_window(p: u64, mut bits: Vec<u64>) -> Self {
        let top = p - 1;
        let (li, bi) = ((top / 64) as usize, top % 64);
        if (bits[li] >> bi) & 1 == 1 {
            bits[li] ^= 1u64 << bi;
            for i in 0..top {
                bits[(i / 64) as usize] ^= 1u64 << (i % 64);
            }
        }
        bits.truncate(limbs_for(p));
        bits.resize(limbs_for(p), 0);
        CycloPoly { p, bits }
    }

    /// `t^n * self`, equal to `try_mul(self, monomial(p, n))` but cheap; this
    /// is the hot loop of the naturality search.
    pub fn mul_t_pow(&self, n: u64) -> Self {
        let p = self.p;
        let n = n % p;
        if n == 0 || self.is_zero() {
            return self.clone();
        }
        let mut shifted = vec![0u64; (p as usize).div_ceil(64)];
        for e in self.support() {
            let d = (e + n) % p;
            shifted[(d / 64) as usize] ^= 1u64 << (d % 64);
        }
        Self::canonicalize_p_window(p, shifted)
    }

    /// Whether `self` is invertible, i.e. whether any lift is coprime to
    /// `N = 1 + t + ... + t^(p-1)` in `F2[t]`.
    pub fn is_unit(&self) -> bool {
        let (g, _) = self.euclid_against_relation();
        f2::degree(&g) == Some(0)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// `F2[t]`. Fails on non-units, naming the nontrivial common factor.
    pub fn inverse(&self) -> Result<Self, Error> {
        let (g, s) = self.euclid_against_relation();
        if f2::degree(&g) != Some(0) {
            return Err(Error::NotAUnit {
                p: self.p,
                factor: f2::format(&g),
            });
        }
        // deg(s) < deg(N) = p - 1, so s is already a canonical representative.
        let mut bits = s;
        bits.resize(limbs_for(self.p), 0);
        Ok(CycloPoly { p: self.p, bits })
    }

    /// Runs extended Euclid on (N, lift of self); returns (gcd, cofactor s)
    /// with `s * self = gcd (mod N)`.
    fn euclid_against_relation(&self) -> (Vec<u64>, Vec<u64>) {
        let p = self.p as usize;
        let n_limbs = p.div_ceil(64);
        let mut r0 = vec![0u64; n_limbs];
        for i in 0..p {
            r0[i / 64] |= 1u64 << (i % 64);
        }
        let mut r1 = self.bits.clone();
        r1.resize(n_limbs, 0);
        let mut s0: Vec<u64> = vec![0];
        let mut s1: Vec<u64> = vec![1];
        while f2::degree(&r1).is_some() {
            let q = f2::div_assign_rem(&mut r0, &r1);
            std::mem::swap(&mut r0, &mut r1);
            let mut s_next = f2::mul(&q, &s1);
            f2::xor_into(&mut s_next, &s0);
            s0 = std::mem::replace(&mut s1, s_next);
        }
        (r0, s0)
    }

    /// Parses the textual grammar: terms separated by `+`, each term `0`,
    /// `1`, `t` or `t^<int>`, whitespace ignored. Exponents of `p - 1` and
    /// above are reduced through the ring relation.
    pub fn parse(p: u64, text: &str) -> Result<Self, Error> {
        let exps = parse_exponents(text)?;
        Ok(Self::from_exponents(p, exps))
    }

    /// Like [`CycloPoly::parse`] but rejects exponents outside the canonical
    /// basis range `0..p-1`.
    pub fn parse_strict(p: u64, text: &str) -> Result<Self, Error> {
        let exps = parse_exponents(text)?;
        for &e in &exps {
            if e >= p - 1 {
                return Err(Error::ExponentOutOfRange { p, exponent: e });
            }
        }
        Ok(Self::from_exponents(p, exps))
    }

    /// Hexadecimal form of the bit-vector (bit `i` = coefficient of `t^i`),
    /// prefixed `0x`; used in JSON reports.
    pub fn to_hex(&self) -> String {
        let mut limbs: &[u64] = &self.bits;
        while limbs.len() > 1 && *limbs.last().unwrap() == 0 {
            limbs = &limbs[..limbs.len() - 1];
        }
        let mut s = format!("0x{:x}", limbs.last().unwrap());
        for w in limbs[..limbs.len() - 1].iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    /// Parses the `0x` form produced by [`CycloPoly::to_hex`]. Rejects
    /// vectors with bits at or above `p - 1` (non-canonical).
    pub fn from_hex(p: u64, text: &str) -> Result<Self, Error> {
        let body = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .ok_or_else(|| Error::Parse(format!("hex form must start with 0x: {text:?}")))?;
        if body.is_empty() {
            return Err(Error::Parse("empty hex form".into()));
        }
        let mut bits = vec![0u64; limbs_for(p)];
        for (i, ch) in body.chars().rev().enumerate() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {ch:?}")))? as u64;
            if v == 0 {
                continue;
            }
            let bit = 4 * i as u64;
            for b in 0..4 {
                if (v >> b) & 1 == 1 {
                    let e = bit + b;
                    if e >= p - 1 {
                        return Err(Error::ExponentOutOfRange { p, exponent: e });
                    }
                    bits[(e / 64) as usize] |= 1u64 << (e % 64);
                }
            }
        }
        Ok(CycloPoly { p, bits })
    }

    /// Low word of the bit-vector; valid whenever `p <= 64`, which covers
    /// every searchable modulus.
    pub(crate) fn to_mask(&self) -> u64 {
        debug_assert!(self.p <= 64);
        self.bits[0]
    }

    pub(crate) fn from_mask(p: u64, mask: u64) -> Self {
        debug_assert!(p <= 64);
        debug_assert!(p == 64 || mask < (1u64 << (p - 1)));
        let mut bits = vec![0u64; limbs_for(p)];
        bits[0] = mask;
        CycloPoly { p, bits }
    }
}

fn parse_exponents(text: &str) -> Result<Vec<u64>, Error> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut exps = Vec::new();
    for term in cleaned.split('+') {
        match term {
            "" => return Err(Error::Parse("empty term".into())),
            "0" => {}
            "1" => exps.push(0),
            "t" => exps.push(1),
            _ => {
                let e = term
                    .strip_prefix("t^")
                    .ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?;
                let e: u64 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
                exps.push(e);
            }
        }
    }
    Ok(exps)
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let supp = self.support();
        if supp.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = supp
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Ord for CycloPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then_with(|| self.bits.iter().rev().cmp(other.bits.iter().rev()))
    }
}

impl PartialOrd for CycloPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for CycloPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// Plain polynomials over F2 as little-endian bit vectors (bit `i` is the
/// coefficient of `t^i`), used for the Euclidean algorithm behind unit
/// testing and inversion.
pub(crate) mod f2 {
    pub fn degree(a: &[u64]) -> Option<usize> {
        for i in (0..a.len()).rev() {
            if a[i] != 0 {
                return Some(i * 64 + 63 - a[i].leading_zeros() as usize);
            }
        }
        None
    }

    /// `dst ^= src << shift`, growing `dst` as needed.
    pub fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
        let (word, bit) = (shift / 64, shift % 64);
        let needed = src.len() + word + 1;
        if dst.len() < needed {
            dst.resize(needed, 0);
        }
        for (i, &w) in src.iter().enumerate() {
            if w == 0 {
                continue;
            }
            dst[i + word] ^= w << bit;
            if bit != 0 {
                dst[i + word + 1] ^= w >> (64 - bit);
            }
        }
    }

    pub fn xor_into(dst: &mut Vec<u64>, src: &[u64]) {
        if dst.len() < src.len() {
            dst.resize(src.len(), 0);
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    }

    /// Reduces `a` modulo `b` in place and returns the quotient.
    pub fn div_assign_rem(a: &mut Vec<u64>, b: &[u64]) -> Vec<u64> {
        let db = degree(b).expect("division by zero polynomial");
        let mut q: Vec<u64> = vec![0];
        while let Some(da) = degree(a) {
            if da < db {
                break;
            }
            let s = da - db;
            xor_shifted(a, b, s);
            if q.len() <= s / 64 {
                q.resize(s / 64 + 1, 0);
            }
            q[s / 64] ^= 1u64 << (s % 64);
        }
        q
    }

    pub fn mul(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() + 1];
        for (i, &w) in a.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let e = i * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                xor_shifted(&mut out, b, e);
            }
        }
        out
    }

    pub fn format(a: &[u64]) -> String {
        let mut terms = Vec::new();
        for (i, &w) in a.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let e = i * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                terms.push(match e {
                    0 => "1".to_string(),
                    1 => "t".to_string(),
                    _ => format!("t^{e}"),
                });
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

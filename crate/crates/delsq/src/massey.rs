//! Triple Massey products on the second cohomology of the universal cover
//! of a deleted square, computed through the cyclotomic ring `R_p`.
//!
//! All cup products on that cohomology vanish, so every triple
//! `<x, y, z>` of degree-2 classes carries a Massey product, well defined
//! only modulo the ideal generated by the outer arguments `x` and `z`. Over
//! `Z/2` coefficients and for `0 < q < p/2` the monomial products are given
//! by interval combinatorics on the circle `R / pZ`:
//!
//! * `k` is an *interloper* of `j` when either
//!   `j q` lies on the arc `(0, q)` and `k` is in `[j, p]`, or `-j q` lies
//!   on that arc and `k` is in `[0, j]`;
//! * `<1, 1, t^j>` is `t + ... + t^j`, `t^j + ... + t^(p-1)`, or `0`
//!   according to which arc condition holds;
//! * `<t^k, 1, t^j>` is `t^k + t^j`, `t^k`, `t^j`, or `0` according to the
//!   interloper relation in both directions;
//! * every other monomial triple reduces to these through translation
//!   (`<t^(k+n), t^(l+n), t^(j+n)> = t^n <t^k, t^l, t^j>`) and the symmetry
//!   `<t^k, t^l, t^j> = <t^j, t^l, t^k>`.
//!
//! The fully diagonal triple `<1, 1, 1>` has no stated value; it is taken
//! to be `0`, the unique choice consistent with q = 1 where every product
//! vanishes, and a legal representative since the indeterminacy of
//! `<1, 1, 1>` contains both candidates. Trilinear expansions count how
//! often that convention fired so downstream reports can audit sensitivity
//! to it.
//!
//! Representatives are stored pre-quotient; the quotient by the
//! indeterminacy only ever enters through [`MasseyValue::contains`].

use crate::cyclo::CycloPoly;
use crate::modp::{self, is_odd_prime};
use crate::Error;

/// The Massey product structure of the universal cover for one lens space
/// L(p, q), valid for `0 < q < p/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MasseyStructure {
    p: u64,
    q: u64,
}

/// A Massey product representative together with the outer arguments that
/// span its indeterminacy `{a x + b z : a, b in Z/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyValue {
    pub repr: CycloPoly,
    pub indet_x: CycloPoly,
    pub indet_z: CycloPoly,
    /// How many monomial triples hit the `<1,1,1> = 0` convention while
    /// expanding this value.
    pub diagonal_terms: u64,
}

impl MasseyValue {
    /// Membership in the coset: `v` is in the value iff `v - repr` lies in
    /// the span of the two outer arguments.
    pub fn contains(&self, v: &CycloPoly) -> bool {
        let d = v.try_add(&self.repr).expect("same p");
        if d.is_zero() || d == self.indet_x || d == self.indet_z {
            return true;
        }
        match self.indet_x.try_add(&self.indet_z) {
            Ok(xz) => d == xz,
            Err(_) => false,
        }
    }
}

impl MasseyStructure {
    /// Requires p an odd prime, `gcd(p, q) = 1` and `0 < q < p/2`. Inputs
    /// with `q > p/2` are rejected rather than silently reflected; normalize
    /// through [`crate::modp::LensPair`] first.
    pub fn new(p: u64, q: u64) -> Result<Self, Error> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let q = q % p;
        if modp::gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        if 2 * q > p {
            return Err(Error::QOutOfRange { p, q });
        }
        Ok(MasseyStructure { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Whether the residue of `x` lies on the open arc `(0, q)` of the
    /// circle `R / pZ`, i.e. in `{1, ..., q-1}`.
    pub fn in_arc(&self, x: u64) -> bool {
        let x = x % self.p;
        x >= 1 && x < self.q
    }

    /// The interloper relation `k < j`. The interval `[j, p]` wraps through
    /// `p = 0`, so it contains `{j, ..., p-1}` and `0`; `[0, j]` is
    /// `{0, ..., j}`.
    pub fn is_interloper(&self, k: u64, j: u64) -> bool {
        let p = self.p;
        let (k, j) = (k % p, j % p);
        let jq = j * self.q % p;
        (self.in_arc(jq) && (k >= j || k == 0)) || (self.in_arc((p - jq) % p) && k <= j)
    }

    /// `<1, 1, t^j>` for `j != 0`.
    pub fn product_1_1(&self, j: u64) -> Result<CycloPoly, Error> {
        let p = self.p;
        let j = j % p;
        if j == 0 {
            return Err(Error::DiagonalMonomial);
        }
        let jq = j * self.q % p;
        let value = if self.in_arc((p - jq) % p) {
            CycloPoly::from_exponents(p, 1..=j)
        } else if self.in_arc(jq) {
            CycloPoly::from_exponents(p, j..=p - 1)
        } else {
            CycloPoly::zero(p)
        };
        Ok(value)
    }

    /// `<t^k, 1, t^j>`; zero arguments route through [`Self::product_1_1`]
    /// by the symmetry rule, and the fully diagonal case is an error.
    pub fn product_k_1(&self, k: u64, j: u64) -> Result<CycloPoly, Error> {
        let p = self.p;
        let (k, j) = (k % p, j % p);
        match (k == 0, j == 0) {
            (true, true) => Err(Error::DiagonalMonomial),
            (true, false) => self.product_1_1(j),
            (false, true) => self.product_1_1(k),
            (false, false) => {
                let kj = self.is_interloper(k, j);
                let jk = self.is_interloper(j, k);
                Ok(match (kj, jk) {
                    (true, true) => {
                        CycloPoly::monomial(p, k).try_add(&CycloPoly::monomial(p, j)).unwrap()
                    }
                    (true, false) => CycloPoly::monomial(p, k),
                    (false, true) => CycloPoly::monomial(p, j),
                    (false, false) => CycloPoly::zero(p),
                })
            }
        }
    }

    /// `<t^a, t^b, t^c>` for arbitrary exponents, through translation by
    /// `t^b`; total, with the diagonal convention `<1,1,1> = 0`.
    pub fn monomial_product(&self, a: u64, b: u64, c: u64) -> CycloPoly {
        self.monomial_product_flagged(a, b, c).0
    }

    /// As [`Self::monomial_product`], also reporting whether the diagonal
    /// convention supplied the value.
    pub(crate) fn monomial_product_flagged(&self, a: u64, b: u64, c: u64) -> (CycloPoly, bool) {
        let p = self.p;
        let (a, b, c) = (a % p, b % p, c % p);
        let u = (a + p - b) % p;
        let v = (c + p - b) % p;
        if u == 0 && v == 0 {
            return (CycloPoly::zero(p), true);
        }
        let base = self.product_k_1(u, v).expect("non-diagonal by construction");
        (base.mul_t_pow(b), false)
    }

    /// Trilinear extension over the canonical monomial supports of the three
    /// arguments, with the outer arguments recorded as the indeterminacy.
    pub fn trilinear(&self, x: &CycloPoly, y: &CycloPoly, z: &CycloPoly) -> MasseyValue {
        assert!(
            x.p() == self.p && y.p() == self.p && z.p() == self.p,
            "arguments must live in R_{}",
            self.p
        );
        let mut repr = CycloPoly::zero(self.p);
        let mut diagonal_terms = 0;
        for a in x.support() {
            for b in y.support() {
                for c in z.support() {
                    let (v, diag) = self.monomial_product_flagged(a, b, c);
                    if diag {
                        diagonal_terms += 1;
                    }
                    repr = repr.try_add(&v).unwrap();
                }
            }
        }
        MasseyValue {
            repr,
            indet_x: x.clone(),
            indet_z: z.clone(),
            diagonal_terms,
        }
    }

    /// Whether every monomial product vanishes up to indeterminacy: each
    /// representative is 0 or lies in the span of `t^a` and `t^c`.
    pub fn all_products_vanish(&self) -> bool {
        let p = self.p;
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    let v = self.monomial_product(a, b, c);
                    if v.is_zero() {
                        continue;
                    }
                    let x = CycloPoly::monomial(p, a);
                    let z = CycloPoly::monomial(p, c);
                    if v != x && v != z && v != x.try_add(&z).unwrap() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

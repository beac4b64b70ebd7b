//! The character-level compatibility system for a hypothetical homotopy
//! equivalence `f: X'_0 -> X_0` between deleted squares of L(p, q') and
//! L(p, q).
//!
//! Such an `f` induces an invertible matrix on fundamental groups and a
//! triangular matrix `(eps 0 / a b)` on H_3, and naturality of the
//! Cheeger-Simons character forces two congruences to hold for every choice
//! of character coordinates `(k, l)`:
//!
//! ```text
//!   -eps r (k^2 + l^2) +- 2 a k l = -r' (k'^2 + l'^2)   (mod p)
//!   +- 2 b k l = 2 k' l'                                 (mod p)
//! ```
//!
//! where `(k', l')` is the transformed character and `q r = q' r' = -1`.
//! [`verify_constraints`] checks the full quantifier literally over all p^2
//! pairs, [`enumerate_solutions`] brute-forces the whole candidate space,
//! and [`classify`] produces the closed-form answer: only scalar matrices
//! survive, and the scalar must satisfy `eps q' = q alpha^2 (mod p)`.
//!
//! The two `+-` signs are enumerated as explicit unknowns `s1`, `s2` (they
//! originate in independent torsion-generator sign choices on the two
//! spaces and nothing here assumes they are correlated).

use serde::{Serialize, Serializer};

use crate::modp::{inv_mod, LensPair};
use crate::Error;

/// Largest modulus the brute-force enumerator will attempt.
pub const MAX_ENUM_P: u64 = 31;

/// A sign used as a multiplicative unit mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// `x` or `-x`, reduced mod p.
    pub fn apply(self, x: u64, p: u64) -> u64 {
        match self {
            Sign::Plus => x % p,
            Sign::Minus => (p - x % p) % p,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:+}", self.as_i64())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.as_i64())
    }
}

/// Candidate matrix of the induced map on fundamental groups, an element of
/// GL(2, Z/p). A character `(k, l)` pulls back through the transpose:
/// `k' = a11 k + a21 l`, `l' = a12 k + a22 l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiMatrix {
    pub a11: u64,
    pub a12: u64,
    pub a21: u64,
    pub a22: u64,
}

impl PiMatrix {
    pub fn diagonal(alpha: u64, delta: u64) -> Self {
        PiMatrix {
            a11: alpha,
            a12: 0,
            a21: 0,
            a22: delta,
        }
    }

    pub fn antidiagonal(top: u64, bottom: u64) -> Self {
        PiMatrix {
            a11: 0,
            a12: top,
            a21: bottom,
            a22: 0,
        }
    }

    pub fn det(&self, p: u64) -> u64 {
        (self.a11 * self.a22 % p + p - self.a12 * self.a21 % p) % p
    }

    pub fn is_invertible(&self, p: u64) -> bool {
        self.det(p) != 0
    }

    /// The transformed character coordinates `(k', l')`.
    pub fn pullback_character(&self, k: u64, l: u64, p: u64) -> (u64, u64) {
        (
            (self.a11 * k + self.a21 * l) % p,
            (self.a12 * k + self.a22 * l) % p,
        )
    }

    pub fn is_diagonal(&self) -> bool {
        self.a12 == 0 && self.a21 == 0
    }

    pub fn is_antidiagonal(&self) -> bool {
        self.a11 == 0 && self.a22 == 0
    }
}

/// Candidate matrix `(eps 0 / a b)` of the induced map on H_3; `b` must be a
/// unit mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct H3Matrix {
    pub eps: Sign,
    pub a: u64,
    pub b: u64,
}

/// A full candidate passing [`verify_constraints`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeqSolution {
    pub matrix: PiMatrix,
    pub h3: H3Matrix,
    pub s1: Sign,
    pub s2: Sign,
}

/// A scalar `alpha` with `eps q' = q alpha^2 (mod p)`, the only shape of
/// fundamental-group data a homotopy equivalence of deleted squares can
/// induce; `beta` is the inverse of `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdmissibleAlpha {
    pub alpha: u64,
    pub eps: Sign,
    pub beta: u64,
}

struct System {
    p: u64,
    /// q r = -1 (mod p) for the target space.
    r: u64,
    /// q' r' = -1 (mod p) for the source space.
    r_prime: u64,
}

impl System {
    fn new(pair: &LensPair) -> Self {
        let p = pair.p();
        System {
            p,
            r: (p - inv_mod(pair.q_norm(), p).expect("q_norm is a unit")) % p,
            r_prime: (p - inv_mod(pair.q_prime_norm(), p).expect("q_prime_norm is a unit")) % p,
        }
    }

    /// First congruence at one point `(k, l)`.
    fn eone_at(&self, m: &PiMatrix, eps: Sign, s1: Sign, a: u64, k: u64, l: u64) -> bool {
        let p = self.p;
        let (kp, lp) = m.pullback_character(k, l, p);
        let sum = (k * k + l * l) % p;
        let lhs = ((p - eps.apply(self.r, p) * sum % p) % p
            + s1.apply(2 * a % p * k % p * l % p, p))
            % p;
        let sum_p = (kp * kp + lp * lp) % p;
        let rhs = (p - self.r_prime * sum_p % p) % p;
        lhs == rhs
    }

    /// Second congruence at one point `(k, l)`.
    fn etwo_at(&self, m: &PiMatrix, s2: Sign, b: u64, k: u64, l: u64) -> bool {
        let p = self.p;
        let (kp, lp) = m.pullback_character(k, l, p);
        let lhs = s2.apply(2 * b % p * k % p * l % p, p);
        let rhs = 2 * kp % p * lp % p;
        lhs == rhs
    }

    fn holds_everywhere(&self, sol: &HeqSolution) -> bool {
        for k in 0..self.p {
            for l in 0..self.p {
                if !self.eone_at(&sol.matrix, sol.h3.eps, sol.s1, sol.h3.a, k, l)
                    || !self.etwo_at(&sol.matrix, sol.s2, sol.h3.b, k, l)
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Whether the candidate satisfies both congruences for every pair `(k, l)`
/// mod p. The quantifier is checked literally rather than by comparing
/// quadratic-form coefficients, which keeps small moduli honest.
pub fn verify_constraints(pair: &LensPair, candidate: &HeqSolution) -> bool {
    if !candidate.matrix.is_invertible(pair.p()) || candidate.h3.b.is_multiple_of(pair.p()) {
        return false;
    }
    System::new(pair).holds_everywhere(candidate)
}

/// Brute-force enumeration of every `(matrix, h3, signs)` candidate passing
/// [`verify_constraints`], sorted lexicographically.
///
/// Candidates are pruned with the substitutions `(k, l) = (1, 0)`, `(0, 1)`
/// and `(1, 1)` before the full p^2 check; these three points eliminate
/// almost the whole space.
pub fn enumerate_solutions(pair: &LensPair) -> Result<Vec<HeqSolution>, Error> {
    let p = pair.p();
    if p > MAX_ENUM_P {
        return Err(Error::SearchBoundExceeded {
            p,
            max_p: MAX_ENUM_P,
            candidates: format!("8 * {p}^6"),
        });
    }
    let sys = System::new(pair);
    let mut out = Vec::new();
    for a11 in 0..p {
        for a12 in 0..p {
            // (1, 0) in the second congruence forces a11 a12 = 0
            if a11 * a12 % p != 0 {
                continue;
            }
            for a21 in 0..p {
                for a22 in 0..p {
                    // (0, 1) likewise forces a21 a22 = 0
                    if a21 * a22 % p != 0 {
                        continue;
                    }
                    let m = PiMatrix { a11, a12, a21, a22 };
                    if !m.is_invertible(p) {
                        continue;
                    }
                    for eps in Sign::BOTH {
                        // at (1, 0) and (0, 1) the first congruence is
                        // independent of a, s1
                        if !sys.eone_at(&m, eps, Sign::Plus, 0, 1, 0)
                            || !sys.eone_at(&m, eps, Sign::Plus, 0, 0, 1)
                        {
                            continue;
                        }
                        for s1 in Sign::BOTH {
                            for a in 0..p {
                                if !sys.eone_at(&m, eps, s1, a, 1, 1) {
                                    continue;
                                }
                                for s2 in Sign::BOTH {
                                    for b in 1..p {
                                        if !sys.etwo_at(&m, s2, b, 1, 1) {
                                            continue;
                                        }
                                        let sol = HeqSolution {
                                            matrix: m,
                                            h3: H3Matrix { eps, a, b },
                                            s1,
                                            s2,
                                        };
                                        if sys.holds_everywhere(&sol) {
                                            out.push(sol);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All scalars `alpha` with `eps q' = q alpha^2 (mod p)` for some sign
/// `eps`, together with `beta = alpha^{-1}`; computed from the normalized
/// `q` values. Ascending in `alpha`.
pub fn classify(pair: &LensPair) -> Vec<AdmissibleAlpha> {
    let p = pair.p();
    let (q, qp) = (pair.q_norm(), pair.q_prime_norm());
    let mut out = Vec::new();
    for alpha in 1..p {
        let qa2 = q * (alpha * alpha % p) % p;
        let eps = if qa2 == qp {
            Sign::Plus
        } else if qa2 == (p - qp) % p {
            Sign::Minus
        } else {
            continue;
        };
        out.push(AdmissibleAlpha {
            alpha,
            eps,
            beta: inv_mod(alpha, p).expect("alpha is a unit"),
        });
    }
    out
}

/// The classical homotopy-equivalence criterion for the lens spaces
/// themselves: some `alpha` with `+-q' = q alpha^2 (mod p)` exists.
pub fn lens_homotopy_equivalent(pair: &LensPair) -> bool {
    !classify(pair).is_empty()
}

/// The classical homeomorphism criterion: `q' = +-q^{+-1} (mod p)`.
pub fn lens_spaces_homeomorphic(pair: &LensPair) -> bool {
    let p = pair.p();
    let (q, qp) = (pair.q_norm(), pair.q_prime_norm());
    let qinv = inv_mod(q, p).expect("q_norm is a unit");
    qp == q || qp == (p - q) || qp == qinv || qp == (p - qinv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: u64, q: u64, qp: u64) -> LensPair {
        LensPair::new(p, q, qp).unwrap()
    }

    #[test]
    fn identity_candidate_verifies() {
        let sol = HeqSolution {
            matrix: PiMatrix::diagonal(1, 1),
            h3: H3Matrix {
                eps: Sign::Plus,
                a: 0,
                b: 1,
            },
            s1: Sign::Plus,
            s2: Sign::Plus,
        };
        for &(p, q) in &[(5u64, 2u64), (7, 3), (11, 2)] {
            assert!(verify_constraints(&pair(p, q, q), &sol));
        }
    }

    #[test]
    fn paper_style_candidate_verifies() {
        // (11, 2, 3): diag(2, 2), eps = -1, a = 0, b = 4, both signs plus
        let sol = HeqSolution {
            matrix: PiMatrix::diagonal(2, 2),
            h3: H3Matrix {
                eps: Sign::Minus,
                a: 0,
                b: 4,
            },
            s1: Sign::Plus,
            s2: Sign::Plus,
        };
        assert!(verify_constraints(&pair(11, 2, 3), &sol));
    }

    #[test]
    fn nonzero_a_never_verifies() {
        let p = 7;
        let lp = pair(p, 1, 2);
        for alpha in 1..p {
            for a in 1..p {
                for eps in Sign::BOTH {
                    for s1 in Sign::BOTH {
                        for s2 in Sign::BOTH {
                            for b in 1..p {
                                let sol = HeqSolution {
                                    matrix: PiMatrix::diagonal(alpha, alpha),
                                    h3: H3Matrix { eps, a, b },
                                    s1,
                                    s2,
                                };
                                assert!(!verify_constraints(&lp, &sol), "a = {a} slipped through");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_is_empty_without_admissible_scalar() {
        // squares mod 5 are {0, 1, 4}: neither 2 nor -2 is a square
        assert!(enumerate_solutions(&pair(5, 1, 2)).unwrap().is_empty());
        assert!(classify(&pair(5, 1, 2)).is_empty());
        assert!(!lens_homotopy_equivalent(&pair(5, 1, 2)));
    }

    #[test]
    fn enumeration_matches_closed_form_at_7_1_2() {
        let lp = pair(7, 1, 2);
        let sols = enumerate_solutions(&lp).unwrap();
        assert!(!sols.is_empty());
        for sol in &sols {
            assert_eq!(sol.h3.a, 0);
            let alpha = if sol.matrix.is_diagonal() {
                assert!(sol.matrix.a22 == sol.matrix.a11 || sol.matrix.a22 == 7 - sol.matrix.a11);
                sol.matrix.a11
            } else {
                assert!(sol.matrix.is_antidiagonal());
                assert!(sol.matrix.a21 == sol.matrix.a12 || sol.matrix.a21 == 7 - sol.matrix.a12);
                sol.matrix.a12
            };
            assert!(alpha == 3 || alpha == 4);
            let asq = alpha * alpha % 7;
            assert!(sol.h3.b == asq || sol.h3.b == 7 - asq);
        }
    }

    #[test]
    fn identity_pair_contains_identity_solution() {
        for &(p, q) in &[(5u64, 1u64), (7, 2), (11, 3)] {
            let sols = enumerate_solutions(&pair(p, q, q)).unwrap();
            assert!(sols.iter().any(|s| {
                s.matrix == PiMatrix::diagonal(1, 1)
                    && s.h3.eps == Sign::Plus
                    && s.h3.a == 0
                    && s.h3.b == 1
            }));
        }
    }

    #[test]
    fn classify_examples() {
        let take = |v: Vec<AdmissibleAlpha>| -> Vec<(u64, i64)> {
            v.into_iter().map(|a| (a.alpha, a.eps.as_i64())).collect()
        };
        assert_eq!(take(classify(&pair(11, 2, 3))), vec![(2, -1), (9, -1)]);
        assert_eq!(take(classify(&pair(7, 1, 2))), vec![(3, 1), (4, 1)]);
        // both signs occur here: 5 * 9 = 45 = 6 and 5 * 4 = 20 = -6 (mod 13)
        assert_eq!(
            take(classify(&pair(13, 5, 6))),
            vec![(2, -1), (3, 1), (10, 1), (11, -1)]
        );
    }

    #[test]
    fn classify_attaches_true_inverses() {
        for &p in &[5u64, 7, 11, 13] {
            for q in 1..p {
                for qp in 1..p {
                    for adm in classify(&pair(p, q, qp)) {
                        assert_eq!(adm.alpha * adm.beta % p, 1);
                        let lp = pair(p, q, qp);
                        let lhs = adm.eps.apply(lp.q_prime_norm(), p);
                        assert_eq!(lhs, lp.q_norm() * (adm.alpha * adm.alpha % p) % p);
                    }
                }
            }
        }
    }

    #[test]
    fn classify_is_symmetric_in_the_pair() {
        for &p in &[3u64, 5, 7, 11, 13] {
            for q in 1..p {
                for qp in 1..p {
                    assert_eq!(
                        classify(&pair(p, q, qp)).is_empty(),
                        classify(&pair(p, qp, q)).is_empty(),
                        "p = {p}, q = {q}, q' = {qp}"
                    );
                }
            }
        }
    }

    #[test]
    fn homotopy_equivalence_examples() {
        assert!(lens_homotopy_equivalent(&pair(7, 1, 2)));
        assert!(!lens_homotopy_equivalent(&pair(5, 1, 2)));
        assert!(lens_homotopy_equivalent(&pair(11, 4, 4)));
    }

    #[test]
    fn homeomorphism_criterion() {
        assert!(lens_spaces_homeomorphic(&pair(11, 3, 4))); // 3 * 4 = 1 mod 11
        assert!(lens_spaces_homeomorphic(&pair(7, 2, 3))); // 2 * 3 = -1 mod 7
        assert!(!lens_spaces_homeomorphic(&pair(11, 2, 3)));
        assert!(lens_spaces_homeomorphic(&pair(7, 2, 2)));
    }

    #[test]
    fn enumeration_rejects_oversized_moduli() {
        let lp = pair(37, 1, 1);
        assert!(matches!(
            enumerate_solutions(&lp).unwrap_err(),
            Error::SearchBoundExceeded { p: 37, .. }
        ));
    }

    /// The constraint system is exactly the commutativity of the character
    /// diagram: evaluating both routes through the Cheeger-Simons values
    /// must agree with [`verify_constraints`] on every candidate.
    #[test]
    fn constraint_system_matches_character_diagram() {
        use crate::chern_simons::{cs_on_deleted_square, QZp, Rep};

        let diagram_commutes = |lp: &LensPair, sol: &HeqSolution| -> bool {
            let p = lp.p();
            if !sol.matrix.is_invertible(p) || sol.h3.b.is_multiple_of(p) {
                return false;
            }
            let (q, qp) = (lp.q_norm(), lp.q_prime_norm());
            let scale = |c: u64, v: QZp| QZp::new(p, (c % p * v.num()) as i64);
            let signed = |s: Sign, v: QZp| QZp::new(p, s.as_i64() * v.num() as i64);
            for k in 0..p {
                for l in 0..p {
                    let (kp, lp2) = sol.matrix.pullback_character(k, l, p);
                    let source = cs_on_deleted_square(p, qp, &Rep::new(p, kp, lp2)).unwrap();
                    let target = cs_on_deleted_square(p, q, &Rep::new(p, k, l)).unwrap();
                    // image of the free generator is (eps, a)
                    let free_route = signed(sol.h3.eps, target.on_free)
                        + signed(sol.s1, scale(sol.h3.a, target.on_torsion));
                    if source.on_free != free_route {
                        return false;
                    }
                    // image of the torsion generator is (0, b)
                    let torsion_route = signed(sol.s2, scale(sol.h3.b, target.on_torsion));
                    if source.on_torsion != torsion_route {
                        return false;
                    }
                }
            }
            true
        };

        let mut rng = crate::testutil::XorShift(0x7311_c281_2425_cfa3);
        for &(p, q, qp) in &[(7u64, 1u64, 2u64), (7, 2, 2), (11, 2, 3), (11, 3, 4)] {
            let lp = pair(p, q, qp);
            // all enumerated solutions commute
            for sol in enumerate_solutions(&lp).unwrap() {
                assert!(diagram_commutes(&lp, &sol), "{sol:?}");
            }
            // random candidates agree in both directions
            for _ in 0..300 {
                let sol = HeqSolution {
                    matrix: PiMatrix {
                        a11: rng.next() % p,
                        a12: rng.next() % p,
                        a21: rng.next() % p,
                        a22: rng.next() % p,
                    },
                    h3: H3Matrix {
                        eps: if rng.next().is_multiple_of(2) { Sign::Plus } else { Sign::Minus },
                        a: rng.next() % p,
                        b: 1 + rng.next() % (p - 1),
                    },
                    s1: if rng.next().is_multiple_of(2) { Sign::Plus } else { Sign::Minus },
                    s2: if rng.next().is_multiple_of(2) { Sign::Plus } else { Sign::Minus },
                };
                assert_eq!(
                    verify_constraints(&lp, &sol),
                    diagram_commutes(&lp, &sol),
                    "routes disagree at ({p}, {q}, {qp}): {sol:?}"
                );
            }
        }
    }
}

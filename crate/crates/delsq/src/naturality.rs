//! The obstruction search: which pullback polynomials are compatible with
//! the Massey products of the two universal covers?
//!
//! A homotopy equivalence `f: X'_0 -> X_0` of deleted squares lifts to the
//! universal covers, and the lifted pullback on second cohomology is an
//! additive isomorphism determined by a single ring element
//! `F = pullback of 1` together with the twisted equivariance
//! `pullback(t x) = t^beta pullback(x)`, where `beta` inverts the admissible
//! scalar `alpha`. Naturality of Massey products then pins `F` down to the
//! solutions of the system, for all `(k, l) != (0, 0)` mod p:
//!
//! ```text
//!   mu'(t^(beta k) F,  F,  t^(beta l) F)
//!     = pullback( mu(t^k, 1, t^l) ) + (a t^(beta k) + b t^(beta l)) F,
//!   for some a, b in Z/2,
//! ```
//!
//! with `mu` the Massey structure of the target and `mu'` that of the
//! source. [`search`] enumerates every nonzero `F` in `R_p` against this
//! system; an empty solution set for every admissible `alpha` means the
//! deleted squares cannot be homotopy equivalent.
//!
//! The default candidate filter is `F != 0`. The stricter `require_unit`
//! option additionally demands that `u -> u F` be a bijection, the condition
//! for the pullback to be an isomorphism of groups.
//!
//! The constraint `(k, l) = (0, 0)` is excluded from the system: its source
//! side is the triple `<1, 1, 1>`, which has no stated representative.
//! Constraints whose evaluation used the `<1,1,1> = 0` convention inside
//! `mu'` are counted over the reported solutions (a deterministic quantity,
//! unlike counts over rejected candidates under adaptive ordering), so
//! results sensitive to the convention are auditable.
//!
//! Candidate masks are partitioned into contiguous chunks processed by
//! independent worker threads over read-only tables; partial results are
//! merged and sorted, so reports are identical for any thread count.

use std::time::Instant;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::cyclo::CycloPoly;
use crate::heq::{self, AdmissibleAlpha};
use crate::massey::MasseyStructure;
use crate::modp::LensPair;
use crate::Error;

/// Default bound on the searchable modulus: `2^30` candidates at `p = 31`.
pub const DEFAULT_MAX_SEARCH_P: u64 = 31;

/// The pullback on the cover's second cohomology, determined by the image
/// of 1 and the twist exponent `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackMap {
    image_of_one: CycloPoly,
    beta: u64,
}

impl PullbackMap {
    /// `image_of_one` must be nonzero and `beta` a nonzero residue.
    pub fn new(image_of_one: CycloPoly, beta: u64) -> Result<Self, Error> {
        let p = image_of_one.p();
        if image_of_one.is_zero() {
            return Err(Error::NotInvertible(p));
        }
        let beta = beta % p;
        if beta == 0 {
            return Err(Error::NotInvertible(p));
        }
        Ok(PullbackMap { image_of_one, beta })
    }

    pub fn image_of_one(&self) -> &CycloPoly {
        &self.image_of_one
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// `sum over monomials t^m of x of t^(beta m) * F`.
    pub fn apply(&self, x: &CycloPoly) -> CycloPoly {
        let p = self.image_of_one.p();
        assert_eq!(p, x.p(), "pullback applied across moduli");
        let mut acc = CycloPoly::zero(p);
        for m in x.support() {
            acc = acc
                .try_add(&self.image_of_one.mul_t_pow(self.beta * m % p))
                .unwrap();
        }
        acc
    }
}

/// Pullback of a cohomology class through the map; see [`PullbackMap::apply`].
pub fn apply_pullback(map: &PullbackMap, x: &CycloPoly) -> CycloPoly {
    map.apply(x)
}

/// One naturality constraint: whether the difference between the two sides
/// of the system lies in the indeterminacy span of `t^(beta k) F` and
/// `t^(beta l) F`. The pair `(0, 0)` is excluded.
pub fn check_constraint(
    map: &PullbackMap,
    k: u64,
    l: u64,
    mu: &MasseyStructure,
    mu_prime: &MasseyStructure,
) -> Result<bool, Error> {
    let p = mu.p();
    assert_eq!(p, mu_prime.p(), "Massey structures over different moduli");
    let (k, l) = (k % p, l % p);
    if k == 0 && l == 0 {
        return Err(Error::DiagonalConstraint);
    }
    let f = map.image_of_one();
    let x = f.mul_t_pow(map.beta() * k % p);
    let z = f.mul_t_pow(map.beta() * l % p);
    let lhs = mu_prime.trilinear(&x, f, &z);
    let rhs = map.apply(&mu.monomial_product(k, 0, l));
    Ok(lhs.contains(&rhs))
}

/// Conjunction of [`check_constraint`] over all `(k, l)` mod p except
/// `(0, 0)`.
pub fn is_solution(map: &PullbackMap, mu: &MasseyStructure, mu_prime: &MasseyStructure) -> bool {
    let p = mu.p();
    for k in 0..p {
        for l in 0..p {
            if k == 0 && l == 0 {
                continue;
            }
            if !check_constraint(map, k, l, mu, mu_prime).unwrap() {
                return false;
            }
        }
    }
    true
}

/// Options for [`search`] and [`compare_deleted_squares`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Keep only unit candidates (pullback an isomorphism). Off by default:
    /// a nonzero pullback of 1 is the weakest sensible requirement.
    pub require_unit: bool,
    /// Report one lexicographically-least representative per orbit
    /// `{t^n F}` instead of every solution.
    pub dedupe_orbits: bool,
    /// Worker threads over the candidate space.
    pub threads: usize,
    /// Largest modulus to search; `2^(p-1)` candidates per admissible
    /// scalar.
    pub max_p: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            require_unit: false,
            dedupe_orbits: false,
            threads: 1,
            max_p: DEFAULT_MAX_SEARCH_P,
        }
    }
}

/// Search outcome for one admissible scalar.
#[derive(Debug, Clone)]
pub struct AlphaResult {
    pub alpha: AdmissibleAlpha,
    /// Solutions in ascending bit-vector order; orbit representatives only
    /// when `dedupe_orbits` was set.
    pub solutions: Vec<CycloPoly>,
    /// Number of distinct orbits `{t^n F}` among the solutions found.
    pub orbit_count: u64,
    /// Orbit sizes aligned with `solutions` when `dedupe_orbits` was set.
    pub orbit_sizes: Vec<u64>,
    /// Diagonal-convention hits across all constraints of all reported
    /// solutions.
    pub diagonal_terms: u64,
    /// Candidates that reached the constraint system.
    pub candidates_tested: u64,
}

/// Outcome of comparing the deleted squares of a pair of lens spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The lens spaces themselves are not homotopy equivalent, so neither
    /// are any of their configuration spaces.
    LensSpacesNotHomotopyEquivalent,
    /// Every admissible scalar has an empty solution set: the deleted
    /// squares are not homotopy equivalent.
    DeletedSquaresObstructed,
    /// Some pullback polynomial satisfies the system. This does not prove
    /// the deleted squares homotopy equivalent; it only fails to obstruct.
    InconclusiveSolutionsExist,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::LensSpacesNotHomotopyEquivalent => "LENS_SPACES_NOT_HOMOTOPY_EQUIVALENT",
            Verdict::DeletedSquaresObstructed => "DELETED_SQUARES_OBSTRUCTED",
            Verdict::InconclusiveSolutionsExist => "INCONCLUSIVE_SOLUTIONS_EXIST",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Full report for one pair: per-scalar solution sets, verdict and search
/// statistics.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub pair: LensPair,
    pub per_alpha: Vec<AlphaResult>,
    pub verdict: Verdict,
    pub candidates_tested: u64,
    pub elapsed_ms: u64,
}

impl Serialize for SearchReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct AlphaJson {
            alpha: u64,
            eps: i64,
            beta: u64,
            solutions: Vec<String>,
            orbit_count: u64,
            diagonal_terms: u64,
        }
        let mut s = serializer.serialize_struct("SearchReport", 7)?;
        s.serialize_field("p", &self.pair.p())?;
        s.serialize_field("q", &self.pair.q_norm())?;
        s.serialize_field("q_prime", &self.pair.q_prime_norm())?;
        let admissible: Vec<AlphaJson> = self
            .per_alpha
            .iter()
            .map(|a| AlphaJson {
                alpha: a.alpha.alpha,
                eps: a.alpha.eps.as_i64(),
                beta: a.alpha.beta,
                solutions: a.solutions.iter().map(|f| f.to_hex()).collect(),
                orbit_count: a.orbit_count,
                diagonal_terms: a.diagonal_terms,
            })
            .collect();
        s.serialize_field("admissible", &admissible)?;
        s.serialize_field("verdict", self.verdict.as_str())?;
        s.serialize_field("candidates_tested", &self.candidates_tested)?;
        s.serialize_field("elapsed_ms", &self.elapsed_ms)?;
        s.end()
    }
}

/// Bit-mask engine over one machine word; the whole constraint system is
/// compiled to table lookups and XORs. Agrees with the generic
/// [`check_constraint`] path (cross-checked in the tests).
struct Engine {
    p: usize,
    beta: usize,
    /// `source[u * p + v]` = representative of `<t^u, 1, t^v>` in the source
    /// structure; entry `(0, 0)` is the diagonal convention 0.
    source: Vec<u64>,
    /// `target[k * p + l]` = representative of `<t^k, 1, t^l>` in the target
    /// structure; entry `(0, 0)` unused.
    target: Vec<u64>,
    /// Every source product vanishes (q' = 1), so the left side is always 0.
    source_is_zero: bool,
}

/// `t^n * x` on canonical masks: rotate within the p-bit window, then
/// substitute the top power (which is a complement of the window).
#[inline]
fn rot_mask(x: u64, n: usize, p: usize) -> u64 {
    if n == 0 {
        return x;
    }
    let full = (1u64 << p) - 1;
    let mut y = ((x << n) | (x >> (p - n))) & full;
    if y >> (p - 1) & 1 == 1 {
        y ^= full;
    }
    y
}

impl Engine {
    fn new(pair: &LensPair, alpha: &AdmissibleAlpha) -> Result<Engine, Error> {
        let p = pair.p();
        if p > 61 {
            return Err(Error::SearchBoundExceeded {
                p,
                max_p: 61,
                candidates: format!("2^{}", p - 1),
            });
        }
        let mu = MasseyStructure::new(p, pair.q_norm()).expect("normalized target q");
        let mu_prime = MasseyStructure::new(p, pair.q_prime_norm()).expect("normalized source q");
        let pu = p as usize;
        let mut source = vec![0u64; pu * pu];
        let mut target = vec![0u64; pu * pu];
        for u in 0..pu {
            for v in 0..pu {
                source[u * pu + v] = mu_prime.monomial_product(u as u64, 0, v as u64).to_mask();
                target[u * pu + v] = mu.monomial_product(u as u64, 0, v as u64).to_mask();
            }
        }
        let source_is_zero = source.iter().all(|&m| m == 0);
        Ok(Engine {
            p: pu,
            beta: alpha.beta as usize,
            source,
            target,
            source_is_zero,
        })
    }

    fn shifts_of(&self, f: u64) -> Vec<u64> {
        (0..self.p).map(|n| rot_mask(f, n, self.p)).collect()
    }

    /// Evaluates one constraint.
    fn constraint_holds(&self, f: u64, shifts: &[u64], k: usize, l: usize) -> bool {
        let p = self.p;
        let x = shifts[self.beta * k % p];
        let z = shifts[self.beta * l % p];
        let mut lhs = 0u64;
        if !self.source_is_zero {
            let mut fb = f;
            while fb != 0 {
                let b = fb.trailing_zeros() as usize;
                fb &= fb - 1;
                let mut inner = 0u64;
                let mut xa = x;
                while xa != 0 {
                    let a = xa.trailing_zeros() as usize;
                    xa &= xa - 1;
                    let row = &self.source[(a + p - b) % p * p..];
                    let mut zc = z;
                    while zc != 0 {
                        let c = zc.trailing_zeros() as usize;
                        zc &= zc - 1;
                        inner ^= row[(c + p - b) % p];
                    }
                }
                lhs ^= rot_mask(inner, b, p);
            }
        }
        let mut rhs = 0u64;
        let mut tm = self.target[k * p + l];
        while tm != 0 {
            let m = tm.trailing_zeros() as usize;
            tm &= tm - 1;
            rhs ^= shifts[self.beta * m % p];
        }
        let d = lhs ^ rhs;
        d == 0 || d == x || d == z || d == (x ^ z)
    }

    /// All constraints, in the adaptive order `order` (failing constraints
    /// move to the front, since most candidates die on the same few).
    fn is_solution(&self, f: u64, order: &mut [(usize, usize)]) -> bool {
        let shifts = self.shifts_of(f);
        for i in 0..order.len() {
            let (k, l) = order[i];
            if !self.constraint_holds(f, &shifts, k, l) {
                order[..=i].rotate_right(1);
                return false;
            }
        }
        true
    }

    /// Diagonal-convention hits over the whole constraint system: a triple
    /// `(a, b, c)` in the expansion is diagonal exactly when `a = b = c`, so
    /// per constraint the count is the weight of `F & t^(bk)F & t^(bl)F`.
    fn diagonal_hits(&self, f: u64) -> u64 {
        let p = self.p;
        let shifts = self.shifts_of(f);
        let mut total = 0u64;
        for k in 0..p {
            for l in 0..p {
                if k == 0 && l == 0 {
                    continue;
                }
                let x = shifts[self.beta * k % p];
                let z = shifts[self.beta * l % p];
                total += (f & x & z).count_ones() as u64;
            }
        }
        total
    }

    fn constraint_order(&self) -> Vec<(usize, usize)> {
        let mut order = Vec::with_capacity(self.p * self.p - 1);
        for k in 0..self.p {
            for l in 0..self.p {
                if k != 0 || l != 0 {
                    order.push((k, l));
                }
            }
        }
        order
    }
}

fn orbit_min(f: u64, p: usize) -> u64 {
    (0..p).map(|n| rot_mask(f, n, p)).min().unwrap()
}

/// All nonzero `F` (units only, under `require_unit`) satisfying the
/// naturality system for the given admissible scalar, in ascending
/// bit-vector order.
pub fn search(
    pair: &LensPair,
    alpha: &AdmissibleAlpha,
    options: &SearchOptions,
) -> Result<AlphaResult, Error> {
    let p = pair.p();
    if p > options.max_p {
        return Err(Error::SearchBoundExceeded {
            p,
            max_p: options.max_p,
            candidates: format!("2^{}", p - 1),
        });
    }
    let engine = Engine::new(pair, alpha)?;
    let total: u64 = 1u64 << (p - 1);
    let threads = options.threads.clamp(1, 64);
    let chunk = total.div_ceil(threads as u64).max(1);

    let mut found: Vec<u64> = Vec::new();
    let mut tested: u64 = 0;
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = (1 + t as u64 * chunk).min(total);
            let hi = (1 + (t as u64 + 1) * chunk).min(total);
            let engine = &engine;
            let require_unit = options.require_unit;
            handles.push(scope.spawn(move || {
                let mut order = engine.constraint_order();
                let mut local_found = Vec::new();
                let mut local_tested = 0u64;
                for f in lo..hi {
                    if require_unit && !CycloPoly::from_mask(p, f).is_unit() {
                        continue;
                    }
                    local_tested += 1;
                    if engine.is_solution(f, &mut order) {
                        local_found.push(f);
                    }
                }
                (local_found, local_tested)
            }));
        }
        for h in handles {
            let (lf, lt) = h.join().expect("search worker panicked");
            found.extend(lf);
            tested += lt;
        }
    });
    found.sort_unstable();

    let pu = p as usize;
    let mut orbit_reps: Vec<u64> = found.iter().map(|&f| orbit_min(f, pu)).collect();
    orbit_reps.sort_unstable();
    orbit_reps.dedup();
    let orbit_count = orbit_reps.len() as u64;

    let (solutions_masks, orbit_sizes): (Vec<u64>, Vec<u64>) = if options.dedupe_orbits {
        let sizes = orbit_reps
            .iter()
            .map(|&rep| found.iter().filter(|&&f| orbit_min(f, pu) == rep).count() as u64)
            .collect();
        (orbit_reps, sizes)
    } else {
        (found, Vec::new())
    };

    let diagonal_terms = solutions_masks.iter().map(|&f| engine.diagonal_hits(f)).sum();
    let solutions = solutions_masks
        .into_iter()
        .map(|f| CycloPoly::from_mask(p, f))
        .collect();

    Ok(AlphaResult {
        alpha: *alpha,
        solutions,
        orbit_count,
        orbit_sizes,
        diagonal_terms,
        candidates_tested: tested,
    })
}

/// Runs [`search`] for every admissible scalar of the pair and aggregates
/// the verdict.
pub fn compare_deleted_squares(
    pair: &LensPair,
    options: &SearchOptions,
) -> Result<SearchReport, Error> {
    let start = Instant::now();
    let alphas = heq::classify(pair);
    let mut per_alpha = Vec::with_capacity(alphas.len());
    let mut candidates_tested = 0;
    let verdict = if alphas.is_empty() {
        Verdict::LensSpacesNotHomotopyEquivalent
    } else {
        let mut any_solution = false;
        for alpha in &alphas {
            let result = search(pair, alpha, options)?;
            candidates_tested += result.candidates_tested;
            any_solution |= !result.solutions.is_empty();
            per_alpha.push(result);
        }
        if any_solution {
            Verdict::InconclusiveSolutionsExist
        } else {
            Verdict::DeletedSquaresObstructed
        }
    };
    Ok(SearchReport {
        pair: *pair,
        per_alpha,
        verdict,
        candidates_tested,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

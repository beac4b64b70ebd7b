//! Deterministic randomness for the test suites.

use crate::cyclo::CycloPoly;

pub(crate) struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

pub(crate) fn random_poly(p: u64, rng: &mut XorShift) -> CycloPoly {
    let mut exps = Vec::new();
    let mut word = rng.next();
    let mut left = 64;
    for e in 0..p - 1 {
        if left == 0 {
            word = rng.next();
            left = 64;
        }
        if word & 1 == 1 {
            exps.push(e);
        }
        word >>= 1;
        left -= 1;
    }
    CycloPoly::from_exponents(p, exps)
}

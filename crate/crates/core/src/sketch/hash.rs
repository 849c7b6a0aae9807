//! Seeded hashing: a 64-bit mixer for keyed choices and 4-wise independent
//! polynomial hashes for sign variables.

use super::field;

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Keyed 64-bit hash of `x` under `seed`.
#[inline]
pub fn keyed(seed: u64, x: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ x.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

#[inline]
pub fn keyed2(seed: u64, a: u64, b: u64) -> u64 {
    keyed(keyed(seed, a), b)
}

/// Sub-seed for an independent component identified by `tag`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    keyed(seed ^ 0xA076_1D64_78BD_642F, tag)
}

/// Uniform value in `[0, m)` from a hash, by multiply-high.
#[inline]
pub fn bounded(h: u64, m: u64) -> u64 {
    ((h as u128 * m as u128) >> 64) as u64
}

/// Uniform nonzero field element drawn from `seed`.
pub fn field_point(seed: u64) -> u64 {
    let mut s = seed;
    loop {
        let z = field::reduce(splitmix64(s) >> 3);
        if z > 1 {
            return z;
        }
        s = s.wrapping_add(1);
    }
}

/// Degree-3 polynomial over the field: a 4-wise independent hash family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FourWise {
    c: [u64; 4],
}

impl FourWise {
    pub fn new(seed: u64) -> Self {
        let mut c = [0u64; 4];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = field::reduce(keyed(seed, i as u64) >> 3);
        }
        FourWise { c }
    }

    /// Evaluates at a point given its precomputed powers `(x, x^2, x^3)`.
    #[inline]
    pub fn eval_powers(&self, x: u64, x2: u64, x3: u64) -> u64 {
        let s = field::add(self.c[0], field::mul(self.c[1], x));
        let s = field::add(s, field::mul(self.c[2], x2));
        field::add(s, field::mul(self.c[3], x3))
    }

    pub fn eval(&self, x: u64) -> u64 {
        let (x, x2, x3) = powers(x);
        self.eval_powers(x, x2, x3)
    }

    #[inline]
    pub fn sign_powers(&self, x: u64, x2: u64, x3: u64) -> i64 {
        if self.eval_powers(x, x2, x3) & 1 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn sign(&self, x: u64) -> i64 {
        let (x, x2, x3) = powers(x);
        self.sign_powers(x, x2, x3)
    }
}

#[inline]
pub fn powers(x: u64) -> (u64, u64, u64) {
    let x = field::reduce(x);
    let x2 = field::mul(x, x);
    (x, x2, field::mul(x2, x))
}

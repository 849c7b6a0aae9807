//! Arithmetic modulo the Mersenne prime `2^61 - 1`.

pub const P: u64 = (1u64 << 61) - 1;

#[inline]
pub fn reduce128(x: u128) -> u64 {
    let p = P as u128;
    let x = (x & p) + (x >> 61);
    let x = (x & p) + (x >> 61);
    let s = x as u64;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn reduce(x: u64) -> u64 {
    let s = (x & P) + (x >> 61);
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

pub fn pow(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    base = reduce(base);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse; `a` must be nonzero mod `P`.
pub fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

/// Maps a signed integer to its residue.
#[inline]
pub fn from_i64(x: i64) -> u64 {
    if x >= 0 {
        reduce(x as u64)
    } else {
        let m = reduce(x.unsigned_abs());
        if m == 0 {
            0
        } else {
            P - m
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_identities() {
        assert_eq!(mul(P - 1, P - 1), 1);
        assert_eq!(add(P - 1, 1), 0);
        assert_eq!(sub(0, 1), P - 1);
        assert_eq!(from_i64(-1), P - 1);
        assert_eq!(from_i64(i64::MIN), P - reduce(1u64 << 63));
        for a in [1u64, 2, 12345, P - 2, 1 << 60] {
            assert_eq!(mul(a, inv(a)), 1);
        }
        assert_eq!(pow(3, 0), 1);
        assert_eq!(pow(2, 61), 1);
    }

    #[test]
    fn reduce_matches_u128_remainder() {
        let mut x = 0x1234_5678_9abc_def0u64;
        for _ in 0..1000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let y = x.rotate_left(17);
            let expect = ((x as u128 * y as u128) % P as u128) as u64;
            assert_eq!(reduce128(x as u128 * y as u128), expect);
            assert_eq!(reduce(x), x % P);
        }
    }
}

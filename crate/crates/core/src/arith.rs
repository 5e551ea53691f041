//! Small integer helpers shared by the group and character code.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Splits `n` as `(n_p, n_p')` with `n_p` the largest power of `p` dividing `n`.
pub fn p_split(mut n: u64, p: u64) -> (u64, u64) {
    let mut pp = 1;
    while n % p == 0 {
        n /= p;
        pp *= p;
    }
    (pp, n)
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `q`. `a` must be nonzero mod `q`.
pub fn mod_inv(a: u64, q: u64) -> u64 {
    mod_pow(a % q, q - 2, q)
}

/// Inverse of `a` modulo `m` for coprime `a`, `m` (extended Euclid).
pub fn mod_inv_general(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

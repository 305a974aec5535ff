//! Small integer number theory used throughout the crate.
//!
//! Everything here works on `u64` and is meant for the modest sizes that
//! appear in configuration tables (moduli up to a few million).

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, m)` with `q = p^m` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, m)] => Some((*p, *m)),
        _ => None,
    }
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Exact square root, if `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % modulus as u128) as u64;
        }
        base = (base as u128 * base as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// True when `g` generates the multiplicative group of `Z_p` (`p` prime).
pub fn is_primitive_root(g: u64, p: u64) -> bool {
    if g % p == 0 {
        return false;
    }
    if p == 2 {
        return true;
    }
    factorize(p - 1).iter().all(|&(r, _)| pow_mod(g, (p - 1) / r, p) != 1)
}

/// Smallest primitive root modulo the prime `p`.
pub fn smallest_primitive_root(p: u64) -> u64 {
    (1..p).find(|&g| is_primitive_root(g, p)).unwrap_or(1)
}

/// Whether `n` is a sum of two integer squares: no prime `≡ 3 (mod 4)` divides
/// it to an odd power.
pub fn is_sum_of_two_squares(n: u64) -> bool {
    factorize(n).iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Modular inverse of `a` modulo `m`, when it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Prime powers in `[lo, hi]`, ascending.
pub fn prime_powers_in(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(2)..=hi).filter(|&q| is_prime_power(q))
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(2)..=hi).filter(|&p| is_prime(p))
}

//! Rational integer helpers: Miller-Rabin, trial division and Pollard-Brent.

const TRIAL_LIMIT: u64 = 1_000_000;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's cycle variant; returns a nontrivial factor of the odd composite n.
fn pollard_brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard_brent exhausted its parameter space")
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization of `n > 0`, sorted by prime.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor(0) is undefined");
    let mut primes = Vec::new();
    let push = |p: u64, n: &mut u64, primes: &mut Vec<u64>| {
        while *n % p == 0 {
            *n /= p;
            primes.push(p);
        }
    };
    push(2, &mut n, &mut primes);
    push(3, &mut n, &mut primes);
    let mut p = 5u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        push(p, &mut n, &mut primes);
        push(p + 2, &mut n, &mut primes);
        p += 6;
    }
    if n > 1 {
        split_into(n, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// A square root of `-1` modulo a prime `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    debug_assert!(p % 4 == 1);
    for x in 2.. {
        let t = pow_mod(x, (p - 1) / 4, p);
        if mul_mod(t, t, p) == p - 1 {
            return t;
        }
    }
    unreachable!()
}

/// A primitive cube root of unity modulo a prime `p ≡ 1 (mod 3)`.
pub fn cube_root_of_unity(p: u64) -> u64 {
    debug_assert!(p % 3 == 1);
    for x in 2.. {
        let t = pow_mod(x, (p - 1) / 3, p);
        if t != 1 {
            return t;
        }
    }
    unreachable!()
}

/// Extended Euclid on signed integers: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

//! Small integer helpers shared by the exact-arithmetic modules.

use num_integer::Integer;

/// Canonical residue of `x` in `[0, k)`; identity when `k == 0`.
pub fn reduce(x: i64, k: u32) -> i64 {
    if k == 0 {
        x
    } else {
        x.rem_euclid(k as i64)
    }
}

/// Inverse of `a` modulo `k`, if it exists.
pub fn mod_inverse(a: i64, k: u32) -> Option<i64> {
    if k == 0 {
        return match a {
            1 => Some(1),
            -1 => Some(-1),
            _ => None,
        };
    }
    let m = k as i64;
    let e = a.rem_euclid(m).extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}

/// gcd of a slice (0 for the empty slice or all zeros).
pub fn gcd_all(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Coefficients `c` with `sum(c[i] * xs[i]) == gcd(xs)`, together with the gcd.
pub fn bezout(xs: &[i64]) -> (i64, Vec<i64>) {
    let mut coeffs = vec![0i64; xs.len()];
    let mut g = 0i64;
    for (i, &x) in xs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if g == 0 {
            g = x.abs();
            coeffs[i] = x.signum();
            continue;
        }
        let e = g.extended_gcd(&x);
        // new gcd = e.x * g + e.y * x
        for c in coeffs.iter_mut().take(i) {
            *c *= e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
        if g < 0 {
            g = -g;
            for c in coeffs.iter_mut() {
                *c = -*c;
            }
        }
    }
    (g, coeffs)
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && prime_factors(n as u64) == vec![n as u64]
}

/// Nearest-integer quotient, ties toward zero.
pub fn round_div(a: i64, b: i64) -> i64 {
    debug_assert!(b != 0);
    let (q, r) = (a.div_euclid(b), a.rem_euclid(b));
    if 2 * r > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

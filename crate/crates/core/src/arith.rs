//! Machine-integer number theory: sieves, factorization, quadratic residue
//! symbols and fundamental discriminants.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Floor of the square root of `n`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // correct the float guess in both directions
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn isqrt_i(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative number");
    isqrt(n as u128) as i128
}

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u128);
    r * r == n as u128
}

/// `x < sqrt(n)` for a non-square `n > 0`, decided exactly.
pub fn lt_sqrt(x: i128, n: i128) -> bool {
    x < 0 || x * x < n
}

/// `x > sqrt(n)` for a non-square `n > 0`, decided exactly.
pub fn gt_sqrt(x: i128, n: i128) -> bool {
    x > 0 && x * x > n
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// Trial-division factorization, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `n >= 1` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Smallest prime `p` with `p^2 | n`, if any.
pub fn square_factor(n: i64) -> Option<u64> {
    factorize(n.unsigned_abs())
        .into_iter()
        .find(|&(_, e)| e >= 2)
        .map(|(p, _)| p)
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && square_factor(n).is_none()
}

/// Kronecker symbol `(a | n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n;
    let mut result = 1i32;
    let mut a = a as i128;
    // factor out powers of two from n
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        n >>= twos;
    }
    // Jacobi symbol (a | n), n odd
    let mut n = n as i128;
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if it exists.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Möbius function values `mu[0..=n]` (`mu[0]` unused and set to 0).
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    if n == 0 {
        mu[0] = 0;
        return mu;
    }
    mu[0] = 0;
    let mut is_composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !is_composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            is_composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// Primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

/// Smallest-prime-factor table, used to take squarefree kernels quickly.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Squarefree kernel (the squarefree `m` with `n = m k^2`), sign kept.
    pub fn squarefree_part(&self, n: i64) -> i64 {
        let sign = n.signum();
        let mut m = n.unsigned_abs();
        if m > self.limit() {
            return sign * squarefree_part_slow(m) as i64;
        }
        let mut out = 1u64;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                out *= p;
            }
        }
        sign * out as i64
    }

    /// Fundamental discriminant of `Q(sqrt(n))` for a non-square `n`.
    pub fn field_discriminant(&self, n: i64) -> i64 {
        fundamental_from_squarefree(self.squarefree_part(n))
    }
}

fn squarefree_part_slow(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product()
}

/// `d` if `d = 1 mod 4`, else `4d`.
pub fn fundamental_from_squarefree(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Whether `disc` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => is_squarefree(disc),
        0 => {
            let d = disc / 4;
            let r = d.rem_euclid(4);
            (r == 2 || r == 3) && is_squarefree(d)
        }
        _ => false,
    }
}

/// Squarefree `d` with `Q(sqrt d)` of discriminant `disc`.
pub fn squarefree_of_discriminant(disc: i64) -> Result<i64> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    Ok(if disc.rem_euclid(4) == 1 { disc } else { disc / 4 })
}

/// All quadratic field discriminants with `|disc| <= bound`, ordered by
/// absolute value and then negative before positive.
pub fn fundamental_discriminants(bound: u64) -> Vec<i64> {
    let limit = bound as usize;
    // squarefree flags for 1..=bound
    let mut sqfree = vec![true; limit + 1];
    let mut k = 2usize;
    while k * k <= limit {
        let mut j = k * k;
        while j <= limit {
            sqfree[j] = false;
            j += k * k;
        }
        k += 1;
    }
    let mut out = Vec::new();
    for m in 3..=limit as i64 {
        for disc in [-m, m] {
            let ok = match disc.rem_euclid(4) {
                1 => sqfree[m as usize],
                0 => {
                    let d = disc / 4;
                    let r = d.rem_euclid(4);
                    (r == 2 || r == 3) && sqfree[(m / 4) as usize]
                }
                _ => false,
            };
            if ok {
                out.push(disc);
            }
        }
    }
    out
}

/// Extended gcd on i128: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Number of integers `u` in `[lo, hi]` with `u = r mod m`.
pub fn count_in_progression(lo: i128, hi: i128, r: i128, m: i128) -> i128 {
    if hi < lo {
        return 0;
    }
    let f = |x: i128| Integer::div_floor(&(x - r), &m);
    f(hi) - f(lo - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_edges() {
        for n in 0u128..2000 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        let big = (1u128 << 100) + 12345;
        let r = isqrt(big);
        assert!(r * r <= big && (r + 1) * (r + 1) > big);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for a in -50i64..50 {
                let e = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expect = if a.rem_euclid(p as i64) == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), expect, "({a}|{p})");
            }
        }
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn tonelli_roots_square_correctly() {
        for p in primes_up_to(500).into_iter().filter(|&p| p > 2) {
            for a in 0..p {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(r * r % p, a);
                } else {
                    assert_eq!(kronecker(a as i64, p), -1);
                }
            }
        }
    }

    #[test]
    fn mobius_small_values() {
        let mu = mobius_table(12);
        assert_eq!(&mu[1..], &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn fundamental_discriminant_listing() {
        assert_eq!(fundamental_discriminants(4), vec![-3, -4]);
        assert_eq!(fundamental_discriminants(8), vec![-3, -4, 5, -7, -8, 8]);
        assert!(is_fundamental_discriminant(-20));
        assert!(!is_fundamental_discriminant(-16));
        assert!(!is_fundamental_discriminant(12 * 4));
    }

    #[test]
    fn squarefree_kernels() {
        let s = SpfSieve::new(1000);
        assert_eq!(s.squarefree_part(-4 * 9 * 5), -5);
        assert_eq!(s.field_discriminant(-4), -4);
        assert_eq!(s.field_discriminant(8), 8);
        assert_eq!(s.field_discriminant(45), 5);
        assert_eq!(s.field_discriminant(12), 12);
        assert_eq!(s.squarefree_part(2 * 1_000_003), 2_000_006);
    }

    #[test]
    fn progression_counts() {
        assert_eq!(count_in_progression(-5, 5, 1, 3), 4); // -5,-2,1,4
        assert_eq!(count_in_progression(0, 0, 0, 7), 1);
        assert_eq!(count_in_progression(3, 2, 0, 1), 0);
    }

    #[test]
    fn primality() {
        let small = primes_up_to(1000);
        for n in 0..1000u64 {
            assert_eq!(is_prime(n), small.binary_search(&n).is_ok());
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }
}

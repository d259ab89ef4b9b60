//! Exact integer arithmetic shared by every module: a linear sieve carrying
//! Λ, μ, φ and smallest prime factors, modular inverses, and primitive
//! roots of the cyclic unit groups.

use crate::error::{Error, Result};

/// Default cap on sieve size; anything above is a resource error unless the
/// caller raises the budget explicitly.
pub const DEFAULT_SIEVE_BUDGET: usize = 100_000_000;

/// Multiplicative-function tables for 1 ≤ n ≤ limit.
///
/// Arrays are indexed directly by n (index 0 unused) so the code reads like
/// the formulas do. Λ is stored as natural-log f64 values; μ, φ and the
/// smallest prime factor are exact.
#[derive(Debug, Clone)]
pub struct SieveTable {
    pub limit: usize,
    pub lambda: Vec<f64>,
    pub mobius: Vec<i8>,
    pub phi: Vec<u64>,
    pub smallest_prime_factor: Vec<u32>,
    pub primes: Vec<u32>,
}

/// Linear (Euler) sieve. O(limit) time and memory.
pub fn build_sieve(limit: usize) -> Result<SieveTable> {
    build_sieve_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

pub fn build_sieve_with_budget(limit: usize, budget: usize) -> Result<SieveTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > budget {
        return Err(Error::Resource(format!(
            "sieve limit {limit} exceeds memory budget {budget}"
        )));
    }
    let n = limit + 1;
    let mut spf = vec![0u32; n];
    let mut phi = vec![0u64; n];
    let mut mobius = vec![0i8; n];
    let mut primes: Vec<u32> = Vec::with_capacity(n / 10 + 16);
    phi[1] = 1;
    mobius[1] = 1;
    for i in 2..n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            phi[i] = (i - 1) as u64;
            mobius[i] = -1;
            primes.push(i as u32);
        }
        for &p in primes.iter() {
            let p = p as usize;
            let ip = i * p;
            if p > spf[i] as usize || ip > limit {
                break;
            }
            spf[ip] = p as u32;
            if i % p == 0 {
                phi[ip] = phi[i] * p as u64;
                mobius[ip] = 0;
                break;
            } else {
                phi[ip] = phi[i] * (p - 1) as u64;
                mobius[ip] = -mobius[i];
            }
        }
    }
    // Λ(n) = log p exactly when n is a power of the prime p
    let mut lambda = vec![0.0f64; n];
    for i in 2..n {
        let p = spf[i] as usize;
        // strip p's from i; prime power iff nothing remains
        let mut m = i;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            lambda[i] = (p as f64).ln();
        }
    }
    Ok(SieveTable {
        limit,
        lambda,
        mobius,
        phi,
        smallest_prime_factor: spf,
        primes,
    })
}

impl SieveTable {
    /// Distinct prime factorization of n ≤ limit via the spf table.
    pub fn factorize(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.smallest_prime_factor[n] as usize;
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    /// Divisors of n ≤ limit, ascending.
    pub fn divisors(&self, n: usize) -> Vec<u64> {
        let f = self.factorize(n);
        let mut divs = vec![1u64];
        for (p, e) in f {
            let base = divs.clone();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                divs.extend(base.iter().map(|d| d * pk));
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// b with a·b ≡ 1 (mod m), 0 ≤ b < m.
pub fn mod_inverse(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let m_i = m as i64;
    let a_red = a.rem_euclid(m_i);
    let (mut r0, mut r1) = (m_i, a_red);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::Domain(format!(
            "gcd({a}, {m}) = {r0} > 1, no inverse"
        )));
    }
    Ok(t0.rem_euclid(m_i) as u64)
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut b: u128 = (base % m) as u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Trial-division factorization for standalone use (no sieve required).
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
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

pub fn euler_phi_u64(n: u64) -> u64 {
    factorize_u64(n)
        .into_iter()
        .fold(1u64, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Generator of (Z/q)* for q an odd prime power, or q ∈ {2, 4}.
///
/// The caller must use the {-1, 5} two-generator structure for 2^k, k ≥ 3;
/// asking for a single generator there is a domain error.
pub fn primitive_root(q: u64) -> Result<u64> {
    if q == 1 || q == 2 {
        return Ok(1);
    }
    if q == 4 {
        return Ok(3);
    }
    let f = factorize_u64(q);
    if f.len() != 1 {
        return Err(Error::Domain(format!("{q} is not a prime power")));
    }
    let (p, _k) = f[0];
    if p == 2 {
        return Err(Error::Domain(format!(
            "(Z/{q})* is not cyclic; use the {{-1, 5}} generators"
        )));
    }
    let phi = euler_phi_u64(q);
    let phi_primes: Vec<u64> = factorize_u64(phi).into_iter().map(|(p, _)| p).collect();
    for g in 2..q {
        if gcd(g, q) != 1 {
            continue;
        }
        if phi_primes.iter().all(|&r| pow_mod(g, phi / r, q) != 1) {
            return Ok(g);
        }
    }
    Err(Error::Numeric(format!("no primitive root found mod {q}")))
}

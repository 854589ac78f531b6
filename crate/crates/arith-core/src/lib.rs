//! Exact integer and multiplicative-function arithmetic.
//!
//! Everything downstream — character sums, Laurent-coefficient formulas,
//! Euler products — reduces to a handful of classical arithmetic
//! functions evaluated exactly on 64-bit integers:
//!
//! * prime factorization (trial division with a 2·3·5 wheel; scan inputs
//!   stay far below 10⁷, so nothing fancier is warranted),
//! * the k-fold divisor function τ_k(n) = ∏ C(e+k−1, k−1) over prime
//!   exponents e, counting ordered k-tuples with product n,
//! * Möbius μ, Euler φ, gcd, and modular inverses.
//!
//! All arithmetic is checked: overflow panics rather than wrapping, since
//! a silently wrapped intermediate would corrupt verification results.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    /// `mod_inverse(a, c)` requires gcd(a, c) = 1.
    #[error("{a} is not invertible modulo {c} (gcd = {g})")]
    NotInvertible { a: u64, c: u64, g: u64 },
}

/// Canonical prime factorization of a positive integer.
///
/// Invariants: primes strictly increasing, every exponent ≥ 1, the
/// product of pᵉ equals `n`, and the list is empty iff n = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent) pairs in increasing prime order.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct prime factors ω(n).
    #[must_use]
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// True iff no exponent exceeds 1.
    #[must_use]
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// All positive divisors of n, in increasing order.
    #[must_use]
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let prev = divs.clone();
            let mut pe = 1u64;
            for _ in 0..e {
                pe = pe.checked_mul(p).expect("divisor overflow");
                divs.extend(prev.iter().map(|&d| d * pe));
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Increments that step through integers coprime to 2, 3, 5 after 7.
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Prime factorization by wheel trial division.
///
/// # Panics
/// If `n == 0`.
#[must_use]
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut m = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0u32;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    push(5, &mut m);
    let mut p = 7u64;
    let mut wheel = WHEEL.iter().cycle();
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        p += wheel.next().unwrap();
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Factorization { n, factors }
}

/// Deterministic primality test (via trial division).
#[must_use]
pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).factors == [(n, 1)]
}

/// All primes ≤ `limit`, by a plain sieve of Eratosthenes.
#[must_use]
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = usize::try_from(limit).expect("sieve limit fits usize");
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= limit {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Binomial coefficient C(n, k) with overflow checking.
#[must_use]
pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1u64;
    for i in 0..k {
        // Multiply before dividing; the running product of i+1 consecutive
        // binomial ratios is always an integer.
        acc = acc
            .checked_mul(n - i)
            .expect("binomial overflow")
            / (i + 1);
    }
    acc
}

/// k-fold divisor function: the number of ordered k-tuples of positive
/// integers with product n, computed as ∏ C(e+k−1, k−1) over the prime
/// exponents e of n.
#[must_use]
pub fn tau_k(n: u64, k: u32) -> u64 {
    assert!(k >= 2, "tau_k requires k >= 2");
    factorize(n)
        .factors
        .iter()
        .map(|&(_, e)| binomial(u64::from(e) + u64::from(k) - 1, u64::from(k) - 1))
        .fold(1u64, |acc, c| acc.checked_mul(c).expect("tau_k overflow"))
}

/// Möbius function: (−1)^ω(n) on squarefree n, 0 otherwise.
#[must_use]
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if !f.is_squarefree() {
        return 0;
    }
    if f.omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient φ(n) = n ∏ (1 − 1/p).
#[must_use]
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for &(p, _) in &factorize(n).factors {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Greatest common divisor (Euclid); gcd(0, 0) = 0.
#[must_use]
pub const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// a·b mod m without overflow.
#[must_use]
pub const fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// b^e mod m by binary exponentiation; 0^0 ≡ 1.
#[must_use]
pub const fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// The unique residue ā ∈ [0, c) with a·ā ≡ 1 (mod c), by the extended
/// Euclidean algorithm.
pub fn mod_inverse(a: u64, c: u64) -> Result<u64, ArithError> {
    assert!(c >= 1, "mod_inverse requires modulus >= 1");
    let g = gcd(a % c.max(1), c);
    if c == 1 {
        return Ok(0);
    }
    if g != 1 {
        return Err(ArithError::NotInvertible { a, c, g });
    }
    // Invariants: r = old_a·a + (…)·c, tracked coefficient of a only.
    let (mut r0, mut r1) = (i128::from(c), i128::from(a % c));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(t0.rem_euclid(i128::from(c)) as u64)
}

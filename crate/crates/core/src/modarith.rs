//! Modular arithmetic and the prime-dependent constants of the group families.
//!
//! Everything here works by exhaustive scan over residues. The primes of
//! interest are at most a few hundred, so a scan is both fast enough and
//! easy to trust.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `base^exp mod m`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Reduces a signed integer to its least nonnegative residue.
#[inline]
pub fn reduce(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

/// Inverse of `x` modulo `m`.
pub fn inv_mod(x: u64, m: u64) -> Result<u64> {
    let g = num_integer::Integer::extended_gcd(&((x % m) as i64), &(m as i64));
    if g.gcd != 1 {
        return Err(Error::NotInvertible {
            value: x,
            modulus: m,
        });
    }
    Ok(reduce(g.x, m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a modulus of the form `p` or `p²` into its prime.
fn prime_of_modulus(m: u64) -> Option<u64> {
    if is_prime(m) {
        return Some(m);
    }
    let r = (m as f64).sqrt().round() as u64;
    (r * r == m && is_prime(r)).then_some(r)
}

/// All `x` with `x⁵ ≡ 1 (mod m)` and `x ≢ 1 (mod p)`, ascending, where `m` is
/// `p` or `p²`.
pub fn primitive_fifth_roots(m: u64) -> Vec<u64> {
    let Some(p) = prime_of_modulus(m) else {
        return Vec::new();
    };
    (0..m)
        .filter(|&x| x % p != 1 % p && pow_mod(x, 5, m) == 1)
        .collect()
}

/// Roots of `y² + y − 1 ≡ 0 (mod p)`, ascending.
pub fn golden_roots(p: u64) -> Option<(u64, u64)> {
    let roots: Vec<u64> = (0..p)
        .filter(|&y| (mul_mod(y, y, p) + y + p - 1).is_multiple_of(p))
        .collect();
    match roots[..] {
        [t1, t2] => Some((t1, t2)),
        _ => None,
    }
}

/// Arithmetic constants attached to a prime `p ≥ 7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeParams {
    pub p: u64,
    /// `p mod 5`.
    pub residue: u64,
    /// Primitive fifth root of unity mod `p²` lifting `s`.
    pub k: Option<u64>,
    /// Smallest primitive fifth root of unity mod `p`.
    pub s: Option<u64>,
    pub t1: Option<u64>,
    pub t2: Option<u64>,
    /// Inverse of 2 mod `p`.
    pub delta: u64,
    /// Inverse of 2 mod `p²`.
    pub delta_sq: Option<u64>,
}

impl PrimeParams {
    pub fn p_squared(&self) -> u64 {
        self.p * self.p
    }

    pub fn s(&self) -> Result<u64> {
        self.s.ok_or(Error::MissingConstant {
            name: "s",
            p: self.p,
        })
    }

    pub fn k(&self) -> Result<u64> {
        self.k.ok_or(Error::MissingConstant {
            name: "k",
            p: self.p,
        })
    }

    pub fn golden(&self) -> Result<(u64, u64)> {
        match (self.t1, self.t2) {
            (Some(t1), Some(t2)) => Ok((t1, t2)),
            _ => Err(Error::MissingConstant {
                name: "t1/t2",
                p: self.p,
            }),
        }
    }
}

pub fn derive_params(p: u64) -> Result<PrimeParams> {
    if p < 7 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let residue = p % 5;
    let p2 = p * p;
    let (s, k, delta_sq) = if residue == 1 {
        let s = primitive_fifth_roots(p)[0];
        let k = primitive_fifth_roots(p2)
            .into_iter()
            .find(|x| x % p == s)
            .expect("Hensel lift of a simple root exists");
        (Some(s), Some(k), Some(inv_mod(2, p2)?))
    } else {
        (None, None, None)
    };
    let (t1, t2) = match golden_roots(p) {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    Ok(PrimeParams {
        p,
        residue,
        k,
        s,
        t1,
        t2,
        delta: inv_mod(2, p)?,
        delta_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(1, 11).unwrap(), 1);
        assert_eq!(inv_mod(2, 11).unwrap(), 6);
        assert_eq!(inv_mod(2, 121).unwrap(), 61);
        assert!(matches!(inv_mod(11, 121), Err(Error::NotInvertible { .. })));
        assert!(inv_mod(0, 7).is_err());
    }

    #[test]
    fn fifth_roots() {
        assert_eq!(primitive_fifth_roots(11), vec![3, 4, 5, 9]);
        assert!(primitive_fifth_roots(121).contains(&3));
        assert_eq!(primitive_fifth_roots(121).len(), 4);
        assert!(primitive_fifth_roots(19).is_empty());
        assert!(primitive_fifth_roots(13).is_empty());
        assert!(primitive_fifth_roots(12).is_empty());
    }

    #[test]
    fn golden() {
        assert_eq!(golden_roots(19), Some((4, 14)));
        assert_eq!(golden_roots(11), Some((3, 7)));
        assert_eq!(golden_roots(13), None);
        assert_eq!(golden_roots(17), None);
    }

    #[test]
    fn params() {
        let q = derive_params(11).unwrap();
        assert_eq!(q.residue, 1);
        assert_eq!(q.s, Some(3));
        assert_eq!(q.k, Some(3));
        assert_eq!((q.t1, q.t2), (Some(3), Some(7)));
        assert_eq!(q.delta, 6);
        assert_eq!(q.delta_sq, Some(61));

        let q = derive_params(19).unwrap();
        assert_eq!(q.residue, 4);
        assert_eq!((q.s, q.k, q.delta_sq), (None, None, None));
        assert_eq!((q.t1, q.t2), (Some(4), Some(14)));
        assert_eq!(q.delta, 10);

        let q = derive_params(13).unwrap();
        assert_eq!(q.residue, 3);
        assert_eq!((q.s, q.k, q.t1, q.t2), (None, None, None, None));

        assert!(matches!(derive_params(5), Err(Error::InvalidPrime(5))));
        assert!(matches!(derive_params(21), Err(Error::InvalidPrime(21))));
    }

    #[test]
    fn params_invariants_over_small_primes() {
        for p in (7..400).filter(|&n| is_prime(n)) {
            let q = derive_params(p).unwrap();
            let p2 = p * p;
            if let (Some(k), Some(s)) = (q.k, q.s) {
                assert_eq!(pow_mod(k, 5, p2), 1);
                assert_ne!(k % p, 1);
                assert_eq!(pow_mod(s, 5, p), 1);
                assert_ne!(s, 1);
                assert_eq!(k % p, s);
            }
            assert_eq!(q.golden().is_ok(), matches!(q.residue, 1 | 4), "p={p}");
            if let Ok((t1, t2)) = q.golden() {
                assert!(t1 < t2);
                assert_eq!(mul_mod(t1, t2, p), p - 1);
                assert_eq!((t1 + t2) % p, p - 1);
            }
            assert_eq!((2 * q.delta) % p, 1);
        }
    }

    #[test]
    fn fifth_roots_closed_under_squaring() {
        for p in (7..400).filter(|&n| is_prime(n) && n % 5 == 1) {
            let roots = primitive_fifth_roots(p);
            assert_eq!(roots.len(), 4);
            for &x in &roots {
                assert!(roots.contains(&mul_mod(x, x, p)));
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(x in 1u64..10_000, pi in 0usize..6) {
            let m = [11u64, 121, 19, 361, 31, 961][pi];
            prop_assume!(x % [11u64, 11, 19, 19, 31, 31][pi] != 0);
            let y = inv_mod(x, m).unwrap();
            prop_assert_eq!(mul_mod(x, y, m), 1);
        }
    }
}

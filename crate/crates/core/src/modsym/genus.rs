//! Closed-form invariants of Γ₀(N): index, elliptic points, cusps, genus.

use num_integer::Integer;

/// Prime factorization by trial division, as `(p, e)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Primes in increasing order up to and including `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Index μ of Γ₀(N) in SL₂(ℤ): `N · ∏_{p | N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

/// Number of elliptic points of order 2.
pub fn elliptic_points_2(n: u64) -> u64 {
    if n % 4 == 0 {
        return 0;
    }
    factorize(n)
        .iter()
        .map(|&(p, _)| match p {
            2 => 1,
            _ if p % 4 == 1 => 2,
            _ => 0,
        })
        .product()
}

/// Number of elliptic points of order 3.
pub fn elliptic_points_3(n: u64) -> u64 {
    if n % 9 == 0 {
        return 0;
    }
    factorize(n)
        .iter()
        .map(|&(p, _)| match p {
            3 => 1,
            _ if p % 3 == 1 => 2,
            _ => 0,
        })
        .product()
}

/// Number of cusps: `Σ_{d | N} φ(gcd(d, N/d))`.
pub fn cusp_count(n: u64) -> u64 {
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| euler_phi(d.gcd(&(n / d))))
        .sum()
}

/// Genus of X₀(N) from `g = 1 + μ/12 − ν₂/4 − ν₃/3 − ν∞/2`.
pub fn genus_formula(n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    let twelve_g = 12 + gamma0_index(n) as i64
        - 3 * elliptic_points_2(n) as i64
        - 4 * elliptic_points_3(n) as i64
        - 6 * cusp_count(n) as i64;
    debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    (twelve_g / 12) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_examples() {
        assert_eq!(genus_formula(1), 0);
        assert_eq!(genus_formula(11), 1);
        assert_eq!(genus_formula(23), 2);
        assert_eq!(genus_formula(39), 3);
        assert_eq!(genus_formula(64), 3);
        assert_eq!(genus_formula(389), 32);
        assert_eq!(genus_formula(13), 0);
    }

    #[test]
    fn genus_at_most_one_below_22() {
        for n in 1..22 {
            assert!(genus_formula(n) <= 1, "N = {n}");
        }
        assert_eq!(genus_formula(22), 2);
    }

    #[test]
    fn index_examples() {
        assert_eq!(gamma0_index(11), 12);
        assert_eq!(gamma0_index(36), 72);
        assert_eq!(gamma0_index(1), 1);
    }

    #[test]
    fn cusp_counts() {
        assert_eq!(cusp_count(1), 1);
        assert_eq!(cusp_count(11), 2);
        assert_eq!(cusp_count(64), 12);
        assert_eq!(cusp_count(300), 36);
    }
}

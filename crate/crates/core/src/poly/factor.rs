//! Factorization over ℚ: squarefree decomposition, Berlekamp modulo a small
//! prime, linear Hensel lifting, and Zassenhaus recombination under a
//! Mignotte-style coefficient bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::modp::{berlekamp, FpPoly};
use super::IntPolynomial;
use crate::{Error, Result};

/// How many good primes are tried before settling on the one giving the fewest modular factors.
const PRIME_CANDIDATES: usize = 5;

/// Factors `f` into irreducible primitive polynomials with multiplicities.
///
/// The product of `factor^multiplicity` equals `f` up to a rational unit.
/// Factors are sorted by degree, then by coefficient sequence.
pub fn factor_over_rationals(f: &IntPolynomial) -> Result<Vec<(IntPolynomial, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (i, part) in f.squarefree_decomposition()?.into_iter().enumerate() {
        if part.degree().unwrap_or(0) == 0 {
            continue;
        }
        for g in factor_squarefree(&part) {
            out.push((g, i + 1));
        }
    }
    out.sort();
    debug_assert!({
        let prod = out
            .iter()
            .fold(IntPolynomial::one(), |acc, (g, e)| acc.mul(&g.pow(*e)));
        prod == f.primitive_part()
    });
    Ok(out)
}

/// Irreducible factors of a primitive squarefree polynomial with positive leading coefficient.
fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let n = f.degree().expect("nonzero");
    if n <= 1 {
        return vec![f.clone()];
    }
    // Pull out x first; it never needs the modular machinery.
    if f.coeffs()[0].is_zero() {
        let rest = f.div_exact(&IntPolynomial::x()).expect("x divides");
        let mut out = vec![IntPolynomial::x()];
        out.extend(factor_squarefree(&rest));
        out.sort();
        return out;
    }

    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }

    let lc = f.leading().expect("nonzero").clone();
    let bound = factor_coefficient_bound(f) * lc.abs() * 2u32;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(f, &modular, p, k);
    let mut out = recombine(f, lifted, &modulus);
    out.sort();
    out
}

/// Picks among the first few primes not dividing the leading coefficient and
/// keeping `f` squarefree the one with fewest modular factors (smallest prime on ties).
fn choose_prime(f: &IntPolynomial) -> (u64, Vec<FpPoly>) {
    let lc = f.leading().expect("nonzero");
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in primes_from(2) {
        if lc.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        let fp = FpPoly::from_int(f, p);
        if fp.degree() != f.degree() || !fp.is_squarefree() {
            continue;
        }
        let factors = berlekamp(&fp.monic());
        if factors.len() == 1 {
            return (p, factors);
        }
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == PRIME_CANDIDATES {
            break;
        }
    }
    best.expect("some good prime exists")
}

fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Bound on the absolute value of any coefficient of any factor of `f`:
/// `2^n · ‖f‖₂`, rounded up.
fn factor_coefficient_bound(f: &IntPolynomial) -> BigInt {
    let n = f.degree().expect("nonzero");
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    (norm2.sqrt() + 1u32) << n
}

fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2u32 > *m {
        r - m
    } else {
        r
    }
}

fn reduce(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    IntPolynomial::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn fp_to_int(f: &FpPoly) -> IntPolynomial {
    IntPolynomial::new(f.c.iter().map(|&x| BigInt::from(x)).collect())
}

/// Lifts `f ≡ lc(f)·∏ gᵢ (mod p)` to a factorization modulo `p^k` with monic lifted factors.
fn hensel_lift(f: &IntPolynomial, factors: &[FpPoly], p: u64, k: u32) -> Vec<IntPolynomial> {
    let pk = BigInt::from(p).pow(k);
    let mut target = reduce(f, &pk);
    let mut out = Vec::with_capacity(factors.len());
    for i in 0..factors.len() - 1 {
        let g = factors[i].clone();
        let lc_mod_p = FpPoly::new(p, vec![FpPoly::from_int(&target, p).lead()]);
        let h = factors[i + 1..]
            .iter()
            .fold(lc_mod_p, |acc, x| acc.mul(x));
        let (big_g, big_h) = lift_pair(&target, &g, &h, p, k);
        out.push(big_g);
        target = big_h;
    }
    // The last factor carries the leading coefficient; make it monic.
    let lc = target.leading().expect("nonzero").clone();
    let inv = lc
        .extended_gcd(&pk)
        .x
        .mod_floor(&pk);
    out.push(reduce(&target.scale(&inv), &pk));
    out
}

/// Linear Hensel lifting of `f ≡ g·h (mod p)`, `g` monic, to modulus `p^k`.
fn lift_pair(
    f: &IntPolynomial,
    g: &FpPoly,
    h: &FpPoly,
    p: u64,
    k: u32,
) -> (IntPolynomial, IntPolynomial) {
    let pb = BigInt::from(p);
    let pk = pb.pow(k);
    let (s, t) = g.bezout(h);
    let mut big_g = fp_to_int(g);
    let mut big_h = fp_to_int(h);
    let mut m = pb.clone();
    for _ in 1..k {
        let diff = reduce(&f.sub(&big_g.mul(&big_h)), &pk);
        let e_int = IntPolynomial::new(diff.coeffs().iter().map(|c| c / &m).collect());
        let e = FpPoly::from_int(&e_int, p);
        if !e.is_zero() {
            // e = (e·s)·g + (e·t)·h; move the part of e·t above deg g into h's correction.
            let et = e.mul(&t);
            let (quo, dg) = et.divrem(g);
            let dh = e.mul(&s).add_mul(&quo, h);
            big_g = reduce(&big_g.add(&fp_to_int(&dg).scale(&m)), &pk);
            big_h = reduce(&big_h.add(&fp_to_int(&dh).scale(&m)), &pk);
        }
        m *= &pb;
    }
    (big_g, big_h)
}

impl FpPoly {
    fn add_mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let prod = a.mul(b);
        let p = self.p;
        let n = self.c.len().max(prod.c.len());
        FpPoly::new(
            p,
            (0..n)
                .map(|i| {
                    (self.c.get(i).copied().unwrap_or(0) + prod.c.get(i).copied().unwrap_or(0)) % p
                })
                .collect(),
        )
    }
}

/// Zassenhaus recombination of monic factors lifted modulo `modulus`.
fn recombine(f: &IntPolynomial, lifted: Vec<IntPolynomial>, modulus: &BigInt) -> Vec<IntPolynomial> {
    let mut remaining: Vec<IntPolynomial> = lifted;
    let mut current = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in Combinations::new(remaining.len(), size) {
            let lc = current.leading().expect("nonzero").clone();
            let mut g = IntPolynomial::constant(lc.clone());
            // Constant-term screen before forming the full product.
            let mut c0 = lc.clone();
            for &i in &subset {
                c0 = (c0 * remaining[i].coeff(0)).mod_floor(modulus);
            }
            let c0 = symmetric_mod(&c0, modulus);
            let target0 = current.coeff(0) * &lc;
            if c0.is_zero() || !target0.is_multiple_of(&c0) {
                continue;
            }
            for &i in &subset {
                g = reduce(&g.mul(&remaining[i]), modulus);
            }
            let g = IntPolynomial::new(g.coeffs().iter().map(|c| symmetric_mod(c, modulus)).collect())
                .primitive_part();
            if let Some(q) = current.div_exact(&g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                current = q;
                for &i in subset.iter().rev() {
                    remaining.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if current.degree().unwrap_or(0) > 0 {
        found.push(current.primitive_part());
    }
    found
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn splits_difference_of_squares() {
        let fs = factor_over_rationals(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(fs, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn golden_ratio_polynomial_is_irreducible() {
        let fs = factor_over_rationals(&p(&[-1, 1, 1])).unwrap();
        assert_eq!(fs, vec![(p(&[-1, 1, 1]), 1)]);
    }

    #[test]
    fn x4_plus_1_is_irreducible() {
        // Splits modulo every prime, so this exercises recombination.
        let fs = factor_over_rationals(&p(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fs, vec![(p(&[1, 0, 0, 0, 1]), 1)]);
    }

    #[test]
    fn non_monic_with_multiplicities() {
        // 6 (2x+1)^2 (3x^2-2) x
        let f = p(&[6])
            .mul(&p(&[1, 2]).pow(2))
            .mul(&p(&[-2, 0, 3]))
            .mul(&p(&[0, 1]));
        let fs = factor_over_rationals(&f).unwrap();
        assert_eq!(
            fs,
            vec![(p(&[0, 1]), 1), (p(&[1, 2]), 2), (p(&[-2, 0, 3]), 1)]
        );
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(
            factor_over_rationals(&IntPolynomial::zero()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn swinnerton_dyer_like_product() {
        // (x^2-2)(x^2-3)(x^2-5): many modular factors, three true quadratics.
        let f = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1])).mul(&p(&[-5, 0, 1]));
        let fs = factor_over_rationals(&f).unwrap();
        assert_eq!(
            fs,
            vec![(p(&[-5, 0, 1]), 1), (p(&[-3, 0, 1]), 1), (p(&[-2, 0, 1]), 1)]
        );
    }

    #[test]
    fn combinations_enumerate_all() {
        assert_eq!(Combinations::new(4, 2).count(), 6);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }
}

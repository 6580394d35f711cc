//! Dense polynomials over a small prime field and Berlekamp factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntPolynomial;

/// Polynomial over 𝔽ₚ, ascending coefficients in `0..p`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i64, p as i64);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p as i64) as u64
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        let pb = BigInt::from(p);
        let c = f
            .coeffs()
            .iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("reduced"))
            .collect();
        Self::new(p, c)
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        Self::new(self.p, self.c.iter().map(|&x| x * inv % self.p).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let p = self.p;
        Self::new(
            p,
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).copied().unwrap_or(0);
                    let b = other.c.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.p, Vec::new());
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_mod(d.lead(), p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(p, Vec::new()), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = r[k + dd] * inv % p;
            q[k] = t;
            if t == 0 {
                continue;
            }
            for (i, &x) in d.c.iter().enumerate() {
                r[k + i] = (r[k + i] + p - t * x % p) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &x)| (i as u64 % p) * x % p)
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Returns `(s, t)` with `s·self + t·other = 1`; requires coprime inputs.
    pub fn bezout(&self, other: &Self) -> (Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::new(p, Vec::new()));
        let (mut t0, mut t1) = (Self::new(p, Vec::new()), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        assert_eq!(r0.degree(), Some(0), "bezout requires coprime polynomials");
        let inv = Self::new(p, vec![inv_mod(r0.lead(), p)]);
        (s0.mul(&inv), t0.mul(&inv))
    }
}

/// Factors a monic squarefree polynomial over 𝔽ₚ into monic irreducibles by
/// Berlekamp's algorithm. Deterministic; output sorted by (degree, coefficients).
pub(crate) fn berlekamp(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let n = f.degree().expect("nonzero");
    if n <= 1 {
        return vec![f.clone()];
    }
    // Row i holds x^(i·p) mod f.
    let xp = powmod_x(p, f);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = FpPoly::one(p);
    for _ in 0..n {
        let mut row = cur.c.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = cur.mul(&xp).rem(f);
    }
    // Kernel of (Q - I)ᵀ: vectors v with v·(Q - I) = 0.
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    let basis = left_kernel_mod_p(&rows, n, p);
    let k = basis.len();

    let mut factors = vec![f.clone()];
    for v in basis.iter().skip(1) {
        if factors.len() == k {
            break;
        }
        let v = FpPoly::new(p, v.clone());
        let mut next = Vec::new();
        for g in factors {
            if g.degree() == Some(1) {
                next.push(g);
                continue;
            }
            let mut rest = g;
            for s in 0..p {
                if rest.degree() == Some(0) {
                    break;
                }
                let shifted = v.sub(&FpPoly::new(p, vec![s]));
                let h = rest.gcd(&shifted);
                if let Some(d) = h.degree() {
                    if d > 0 && Some(d) != rest.degree() {
                        rest = rest.divrem(&h).0.monic();
                        next.push(h);
                    }
                }
            }
            if rest.degree().is_some_and(|d| d > 0) {
                next.push(rest);
            }
        }
        factors = next;
    }
    factors.sort_by(|a, b| a.c.len().cmp(&b.c.len()).then_with(|| a.c.cmp(&b.c)));
    debug_assert_eq!(factors.len(), k);
    factors
}

fn powmod_x(p: u64, f: &FpPoly) -> FpPoly {
    let mut result = FpPoly::one(p);
    let mut base = FpPoly::new(p, vec![0, 1]).rem(f);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base).rem(f);
        }
        base = base.mul(&base).rem(f);
        e >>= 1;
    }
    result
}

/// Basis of `{v : v·M = 0}` for an `n×n` matrix over 𝔽ₚ. The first basis vector
/// is always the constant polynomial 1 for Berlekamp matrices.
fn left_kernel_mod_p(rows: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    // Transpose, then compute the right kernel.
    let mut a: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| rows[i][j]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(pr, r);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[row][free]) % p;
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    #[test]
    fn berlekamp_splits_x4_plus_1_mod_3() {
        // x^4 + 1 = (x^2 + x + 2)(x^2 + 2x + 2) over F_3
        let f = fp(3, &[1, 0, 0, 0, 1]);
        let fs = berlekamp(&f);
        assert_eq!(fs, vec![fp(3, &[2, 1, 1]), fp(3, &[2, 2, 1])]);
    }

    #[test]
    fn berlekamp_product_reproduces_input() {
        let p = 7;
        // (x+1)(x+2)(x^2+1)(x^3+x+1) over F_7
        let f = fp(p, &[1, 1])
            .mul(&fp(p, &[2, 1]))
            .mul(&fp(p, &[1, 0, 1]))
            .mul(&fp(p, &[1, 1, 0, 1]));
        assert!(f.is_squarefree());
        let fs = berlekamp(&f);
        let prod = fs.iter().fold(FpPoly::one(p), |a, g| a.mul(g));
        assert_eq!(prod, f);
        assert!(fs.len() >= 4);
    }

    #[test]
    fn bezout_identity() {
        let p = 5;
        let a = fp(p, &[1, 0, 1]);
        let b = fp(p, &[1, 1]);
        let (s, t) = a.bezout(&b);
        assert_eq!(s.mul(&a).sub(&t.mul(&b).mul(&fp(p, &[p - 1]))), FpPoly::one(p));
    }
}

//! Dense exact linear algebra over ℚ.
//!
//! Operators act on column vectors: the `j`-th column of a matrix is the image
//! of the `j`-th basis vector. Subspaces are stored as a basis of row vectors in
//! reduced row-echelon form, so two subspaces are equal exactly when their
//! bases compare equal.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::poly::QPoly;
use crate::{Error, Result, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| Q::from_integer(x.into()))
            })
            .collect();
        RationalMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [Q] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols))
            .map(|i| &self.data[i * self.cols + i])
            .sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = out.row_mut(i);
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(RationalMatrix { data, ..*self })
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(RationalMatrix { data, ..*self })
    }

    pub fn scale(&self, c: &Q) -> RationalMatrix {
        let data = self.data.iter().map(|a| a * c).collect();
        RationalMatrix { data, ..*self }
    }

    fn check_same_shape(&self, other: &RationalMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Stacks `self` on top of `other`.
    pub fn stack(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Evaluates `f(self)` by Horner's rule.
    pub fn eval_poly(&self, f: &QPoly) -> Result<RationalMatrix> {
        let n = self.require_square()?;
        let coeffs = f.coeffs();
        let Some((lead, rest)) = coeffs.split_last() else {
            return Ok(Self::zeros(n, n));
        };
        let mut acc = Self::identity(n).scale(lead);
        for c in rest.iter().rev() {
            acc = acc.mul(self)?;
            if !c.is_zero() {
                for i in 0..n {
                    acc.data[i * n + i] += c;
                }
            }
        }
        Ok(acc)
    }
}

/// Result of a reduced row-echelon computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub echelon: RationalMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form by Gauss–Jordan elimination.
pub fn rref(m: &RationalMatrix) -> Echelon {
    let (rows, cols) = (m.rows, m.cols);
    // Scaling rows by positive integers leaves the reduced form unchanged, so
    // eliminate fraction-free over ℤ: after each pivot step every entry is a
    // minor of the scaled input and each division by the previous pivot is exact.
    let mut a: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = m.row(i);
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.extend(row.iter().map(|x| x.numer() * (&l / x.denom())));
    }
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let pivot = a[r * cols + c].clone();
        let pivot_row: Vec<BigInt> = a[r * cols..(r + 1) * cols].to_vec();
        for i in (0..rows).filter(|&i| i != r) {
            let f = a[i * cols + c].clone();
            if f.is_zero() && pivot == prev {
                continue;
            }
            for (x, pr) in a[i * cols..(i + 1) * cols].iter_mut().zip(&pivot_row) {
                let mut y = &pivot * &*x;
                if !pr.is_zero() && !f.is_zero() {
                    y -= &f * pr;
                }
                debug_assert!((&y % &prev).is_zero());
                *x = y / &prev;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    let data = a
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            if k / cols.max(1) < rank {
                Q::new(x, prev.clone())
            } else {
                debug_assert!(x.is_zero());
                Q::zero()
            }
        })
        .collect();
    Echelon {
        echelon: RationalMatrix { rows, cols, data },
        pivots,
        rank,
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).rank
}

/// Right kernel `{v : m·v = 0}`.
pub fn kernel(m: &RationalMatrix) -> Subspace {
    let cols = m.cols;
    let Echelon {
        echelon, pivots, ..
    } = rref(m);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -echelon.get(row, free).clone();
        }
        basis.push(v);
    }
    Subspace::from_spanning(basis, cols)
}

/// Below this size the direct rational computation is cheaper than the modular one.
const MULTIMODULAR_MIN_DIM: usize = 8;

/// Characteristic polynomial `det(x·I − a)`.
///
/// Small matrices are reduced to upper Hessenberg form over ℚ. Larger ones are
/// scaled to integer matrices and reduced modulo enough word-sized primes to
/// pin down every coefficient by a Hadamard-type bound, then lifted by CRT.
pub fn charpoly(a: &RationalMatrix) -> Result<QPoly> {
    let n = a.require_square()?;
    if n >= MULTIMODULAR_MIN_DIM {
        if let Some(f) = charpoly_multimodular(a, n) {
            return Ok(f);
        }
    }
    charpoly_hessenberg(a)
}

fn charpoly_hessenberg(a: &RationalMatrix) -> Result<QPoly> {
    let n = a.require_square()?;
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                h.data.swap(i * n + j, m * n + j);
            }
            for j in 0..n {
                h.data.swap(j * n + i, j * n + m);
            }
        }
        let t = h.get(m, m - 1).recip();
        for i in (m + 1)..n {
            let u = h.get(i, m - 1) * &t;
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let x = h.get(m, j);
                if !x.is_zero() {
                    let d = &u * x;
                    h.data[i * n + j] -= d;
                }
            }
            for j in 0..n {
                let x = h.get(j, i);
                if !x.is_zero() {
                    let d = &u * x;
                    h.data[j * n + m] += d;
                }
            }
        }
    }

    // p[k] = charpoly of the leading k×k block of h.
    let mut p: Vec<QPoly> = vec![QPoly::one()];
    for k in 1..=n {
        let hk = k - 1;
        let mut next = p[k - 1].mul(&QPoly::new(vec![-h.get(hk, hk).clone(), Q::one()]));
        let mut prod = Q::one();
        for i in (1..k).rev() {
            prod *= h.get(i, i - 1);
            if prod.is_zero() {
                break;
            }
            let coeff = &prod * h.get(i - 1, hk);
            if !coeff.is_zero() {
                next = next.sub(&p[i - 1].scale(&coeff));
            }
        }
        p.push(next);
    }
    Ok(p.pop().expect("nonempty"))
}

/// Primes just below 2³¹, largest first; products of two residues fit in a `u64`.
fn word_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let is_prime = |n: u64| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        ((1u64 << 30)..(1u64 << 31))
            .rev()
            .filter(|&n| n % 2 == 1 && is_prime(n))
            .take(WORD_PRIME_COUNT)
            .collect()
    })
}

const WORD_PRIME_COUNT: usize = 128;

fn charpoly_multimodular(a: &RationalMatrix, n: usize) -> Option<QPoly> {
    let den = a.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = a.data.iter().map(|x| x.numer() * (&den / x.denom())).collect();

    // |c_{n−k}| ≤ C(n, k)·∏ (column norms) ≤ 2ⁿ·∏_j max(1, ‖col_j‖₂).
    let half_log_n = (n as f64).log2() / 2.0;
    let mut log2_bound = n as f64;
    for j in 0..n {
        let bits = (0..n).map(|i| ints[i * n + j].bits()).max().unwrap_or(0);
        if bits > 0 {
            log2_bound += bits as f64 + half_log_n;
        }
    }
    let needed_bits = log2_bound.ceil() as u64 + 2;

    let mut modulus = BigInt::one();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let mut used = 0;
    for &p in word_primes() {
        if modulus.bits() > needed_bits {
            break;
        }
        let pb = BigInt::from(p);
        let reduced: Vec<u64> = ints
            .iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("residue below p"))
            .collect();
        let residues = charpoly_mod_p(reduced, n, p);
        // Garner step: lift each coefficient from mod M to mod M·p.
        let m_inv = pow_mod(modulus.mod_floor(&pb).to_u64().expect("residue"), p - 2, p);
        for (c, r) in coeffs.iter_mut().zip(residues) {
            let c_mod = c.mod_floor(&pb).to_u64().expect("residue");
            let t = (r + p - c_mod) % p * m_inv % p;
            *c += &modulus * t;
        }
        modulus *= pb;
        used += 1;
    }
    if modulus.bits() <= needed_bits {
        return None;
    }
    debug_assert!(used > 0);
    let half = &modulus >> 1;
    let mut scale = BigInt::one();
    let mut out = vec![Q::zero(); n + 1];
    for i in (0..=n).rev() {
        let mut c = std::mem::take(&mut coeffs[i]);
        if c > half {
            c -= &modulus;
        }
        // charpoly(a)(x) = den^{−n}·charpoly(den·a)(den·x).
        out[i] = Q::new(c, scale.clone());
        scale *= &den;
    }
    Some(QPoly::new(out))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Coefficients (ascending, monic) of the characteristic polynomial modulo `p`.
fn charpoly_mod_p(mut h: Vec<u64>, n: usize, p: u64) -> Vec<u64> {
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i * n + m - 1] != 0) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                h.swap(i * n + j, m * n + j);
            }
            for j in 0..n {
                h.swap(j * n + i, j * n + m);
            }
        }
        let t = pow_mod(h[m * n + m - 1], p - 2, p);
        for i in (m + 1)..n {
            let u = h[i * n + m - 1] * t % p;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let x = h[m * n + j];
                if x != 0 {
                    h[i * n + j] = (h[i * n + j] + p - u * x % p) % p;
                }
            }
            for j in 0..n {
                let x = h[j * n + i];
                if x != 0 {
                    h[j * n + m] = (h[j * n + m] + u * x) % p;
                }
            }
        }
    }

    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let hk = k - 1;
        let prev = &polys[k - 1];
        // (x − h[hk][hk])·p_{k−1}
        let mut next = vec![0u64; k + 1];
        let diag = h[hk * n + hk];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - c * diag % p) % p;
        }
        let mut prod = 1u64;
        for i in (1..k).rev() {
            prod = prod * h[i * n + i - 1] % p;
            if prod == 0 {
                break;
            }
            let coeff = prod * h[(i - 1) * n + hk] % p;
            if coeff != 0 {
                for (j, &c) in polys[i - 1].iter().enumerate() {
                    next[j] = (next[j] + p - coeff * c % p) % p;
                }
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

/// Matrix of `a` restricted to the invariant subspace `s`, in the coordinates of `s`'s basis.
///
/// Fails with [`Error::NotInvariant`] if `a` does not map `s` into itself.
pub fn restrict(a: &RationalMatrix, s: &Subspace) -> Result<RationalMatrix> {
    let n = a.require_square()?;
    if n != s.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator on dimension {n}, subspace in dimension {}",
            s.ambient_dim()
        )));
    }
    if let Some(r) = restrict_small_integral(a, s) {
        return r;
    }
    let mut columns = Vec::with_capacity(s.dim());
    for i in 0..s.dim() {
        let image = a.mul_vec(s.basis.row(i));
        let coords = s.coordinates(&image).ok_or(Error::NotInvariant)?;
        columns.push(coords);
    }
    Ok(RationalMatrix::from_columns(&columns, s.dim()))
}

/// [`restrict`] in machine integers for an integral operator and a basis whose
/// scaled rows fit; `None` when some quantity does not fit, so the caller falls
/// back to exact rationals.
fn restrict_small_integral(a: &RationalMatrix, s: &Subspace) -> Option<Result<RationalMatrix>> {
    let n = a.cols;
    let small = |x: &Q| -> Option<i128> {
        x.is_integer().then(|| x.numer().to_i64()).flatten().map(i128::from)
    };
    let a_int: Vec<i128> = a.data.iter().map(small).collect::<Option<_>>()?;

    // Row i of the basis is rows[i] / scales[i].
    let mut scales = Vec::with_capacity(s.dim());
    let mut rows = Vec::with_capacity(s.dim());
    for i in 0..s.dim() {
        let row = s.basis.row(i);
        let e = row
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()))
            .to_i64()?;
        let scaled: Vec<i128> = row
            .iter()
            .map(|x| (x.numer() * (e / x.denom())).to_i64().map(i128::from))
            .collect::<Option<_>>()?;
        scales.push(i128::from(e));
        rows.push(scaled);
    }
    let l = scales.iter().try_fold(1i128, |acc, &e| {
        let g = acc.gcd(&e);
        (acc / g).checked_mul(e)
    })?;

    let mut columns = Vec::with_capacity(s.dim());
    for (row, &e) in rows.iter().zip(&scales) {
        // w = A · row, so the image of the basis vector is w / e.
        let mut w = vec![0i128; n];
        for (i, wi) in w.iter_mut().enumerate() {
            let arow = &a_int[i * n..(i + 1) * n];
            let mut acc = 0i128;
            for (x, y) in arow.iter().zip(row) {
                if *x != 0 && *y != 0 {
                    acc = acc.checked_add(x.checked_mul(*y)?)?;
                }
            }
            *wi = acc;
        }
        // l·w − Σ_j w[p_j]·(l / e_j)·rows[j] vanishes iff w / e lies in the span.
        let mut residual: Vec<i128> = w
            .iter()
            .map(|x| x.checked_mul(l))
            .collect::<Option<_>>()?;
        for ((r, &ej), &pj) in rows.iter().zip(&scales).zip(&s.pivots) {
            let c = w[pj].checked_mul(l / ej)?;
            if c == 0 {
                continue;
            }
            for (res, x) in residual.iter_mut().zip(r) {
                if *x != 0 {
                    *res = res.checked_sub(c.checked_mul(*x)?)?;
                }
            }
        }
        if residual.iter().any(|x| *x != 0) {
            return Some(Err(Error::NotInvariant));
        }
        columns.push(
            s.pivots
                .iter()
                .map(|&pj| Q::new(w[pj].into(), e.into()))
                .collect::<Vec<_>>(),
        );
    }
    Some(Ok(RationalMatrix::from_columns(&columns, s.dim())))
}

/// A subspace of ℚⁿ, stored as a reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: RationalMatrix::zeros(0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: RationalMatrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of the given vectors (which need not be independent).
    pub fn from_spanning(vectors: Vec<Vec<Q>>, n: usize) -> Self {
        let m = RationalMatrix::from_rows(vectors, n).expect("vectors of ambient length");
        let Echelon {
            echelon,
            pivots,
            rank,
        } = rref(&m);
        let mut data = echelon.data;
        data.truncate(rank * n);
        Subspace {
            ambient_dim: n,
            basis: RationalMatrix {
                rows: rank,
                cols: n,
                data,
            },
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Q>> {
        self.basis.to_rows()
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.ambient_dim);
        let coords: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, b) in residual.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *r -= c * b;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Maps a subspace given in the coordinates of `self` back to the ambient space.
    pub fn lift(&self, inner: &Subspace) -> Subspace {
        assert_eq!(inner.ambient_dim, self.dim());
        let vectors = (0..inner.dim())
            .map(|i| self.lift_vector(inner.basis.row(i)))
            .collect();
        Subspace::from_spanning(vectors, self.ambient_dim)
    }

    /// The ambient vector with the given coordinates.
    pub fn lift_vector(&self, coords: &[Q]) -> Vec<Q> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec![Q::zero(); self.ambient_dim];
        for (c, i) in coords.iter().zip(0..) {
            if c.is_zero() {
                continue;
            }
            for (x, b) in v.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x += c * b;
                }
            }
        }
        v
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // v ∈ self ∩ other  ⇔  v is orthogonal to both annihilators.
        let a = self.annihilator();
        let b = other.annihilator();
        kernel(&a.stack(&b).expect("same ambient"))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Subspace::from_spanning(vectors, self.ambient_dim)
    }

    /// Matrix whose right kernel is exactly this subspace.
    fn annihilator(&self) -> RationalMatrix {
        let k = kernel(&self.basis);
        k.basis
    }
}

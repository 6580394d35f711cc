//! Univariate polynomials over ℤ and ℚ.
//!
//! [`IntPolynomial`] is the workhorse: factorization over ℚ, Sturm counting and
//! the totally-real/CM classification of Hecke fields all operate on primitive
//! integer polynomials. [`QPoly`] only carries characteristic polynomials out of
//! the linear algebra.

mod factor;
pub(crate) mod modp;
mod roots;
mod sturm;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result, Q};

pub use factor::factor_over_rationals;
pub use roots::approximate_roots;
pub use sturm::{classify_hecke_field, count_real_roots, sturm_sequence, FieldClass};

/// Polynomial with integer coefficients, stored in ascending degree order
/// without trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl From<Vec<BigInt>> for IntPolynomial {
    fn from(coeffs: Vec<BigInt>) -> Self {
        IntPolynomial::new(coeffs)
    }
}

impl From<IntPolynomial> for Vec<BigInt> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + Q::from_integer(c.clone()))
    }

    /// Exact division over ℤ; `None` when `divisor` does not divide `self` in ℤ[x].
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        // Cheap rejection on the constant terms.
        let c0 = &divisor.coeffs[0];
        if !c0.is_zero() && !self.coeffs[0].is_multiple_of(c0) {
            return None;
        }
        let lead = divisor.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * d;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }

    /// Remainder of `self` modulo `d` up to a positive constant factor:
    /// each elimination step scales by `|lc(d)|`, so signs match the
    /// remainder over ℚ. Used both for gcds and for Sturm sequences.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-division by zero");
        let lead = d.leading().expect("nonzero").clone();
        let (abs_lead, negative) = (lead.abs(), lead.is_negative());
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            let mut top = r.leading().expect("nonzero").clone();
            if negative {
                top = -top;
            }
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &abs_lead).collect();
            for (i, c) in d.coeffs.iter().enumerate() {
                coeffs[i + shift] -= &top * c;
            }
            r = Self::new(coeffs);
        }
        r
    }

    /// Greatest common divisor in ℤ[x], primitive with positive leading coefficient
    /// times the gcd of the contents.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part().scale(&content)
    }

    fn normalize_sign(&self) -> Self {
        if self.leading().is_some_and(|l| l.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Squarefree decomposition of the primitive part by Yun's algorithm:
    /// returns `[a₁, a₂, …]` with `primitive_part(self) = ∏ aᵢ^i`, the `aᵢ`
    /// pairwise coprime and squarefree.
    pub fn squarefree_decomposition(&self) -> Result<Vec<Self>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.primitive_part();
        if f.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let a = f.gcd(&df).primitive_part();
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = df.div_exact(&a).expect("gcd divides derivative");
        let mut out = Vec::new();
        loop {
            let d = c.sub(&b.derivative());
            if d.is_zero() {
                out.push(b.primitive_part());
                break;
            }
            let g = b.gcd(&d).primitive_part();
            out.push(g.clone());
            b = b.div_exact(&g).expect("gcd divides");
            c = d.div_exact(&g).expect("gcd divides");
            if b.degree() == Some(0) {
                break;
            }
        }
        debug_assert!({
            let mut prod = Self::one();
            for (i, g) in out.iter().enumerate() {
                prod = prod.mul(&g.pow(i + 1));
            }
            prod == f
        });
        while out.last().is_some_and(|g| g.degree() == Some(0)) {
            out.pop();
        }
        Ok(out)
    }

    /// Product of the distinct irreducible factors, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> Result<Self> {
        let parts = self.squarefree_decomposition()?;
        Ok(parts
            .iter()
            .fold(Self::one(), |acc, g| acc.mul(g))
            .primitive_part())
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| Q::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Trace of a root, i.e. minus the second coefficient over the leading one,
    /// when that is an integer (always the case for monic input).
    pub fn root_sum(&self) -> Option<BigInt> {
        let n = self.degree()?;
        if n == 0 {
            return Some(BigInt::zero());
        }
        let (q, r) = (-self.coeff(n - 1)).div_rem(self.leading()?);
        r.is_zero().then_some(q)
    }
}

impl Ord for IntPolynomial {
    /// Degree first, then coefficients from the constant term upward.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for IntPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Polynomial with rational coefficients in ascending degree order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Q::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Clears denominators and returns the primitive integer multiple with positive leading coefficient.
    pub fn to_int_primitive(&self) -> IntPolynomial {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }

    /// The integer polynomial with the same coefficients, if all coefficients are integers.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .all(|c| c.is_integer())
            .then(|| IntPolynomial::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
    }
}

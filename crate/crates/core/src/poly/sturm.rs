//! Sturm sequences and the totally-real / CM dichotomy for Hecke eigenvalue fields.

use num_traits::{Signed, Zero};

use super::{factor_over_rationals, IntPolynomial};
use crate::{Error, Result};

/// Signature class of a Hecke eigenvalue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldClass {
    TotallyReal,
    /// CM field; `real_subfield_degree` is the degree of its maximal totally real subfield.
    Cm { real_subfield_degree: usize },
}

impl FieldClass {
    pub fn is_cm(&self) -> bool {
        matches!(self, FieldClass::Cm { .. })
    }
}

/// Sturm sequence `f, f', -rem(f, f'), …`, each term scaled by a positive constant.
pub fn sturm_sequence(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut seq = vec![f.clone()];
    let df = f.derivative();
    if df.is_zero() {
        return seq;
    }
    seq.push(df.primitive_part_keep_sign());
    loop {
        let n = seq.len();
        let r = seq[n - 2].pseudo_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg().primitive_part_keep_sign());
    }
    seq
}

impl IntPolynomial {
    /// Divides by the (positive) content without touching the sign.
    fn primitive_part_keep_sign(&self) -> IntPolynomial {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        IntPolynomial::new(self.coeffs().iter().map(|a| a / &c).collect())
    }
}

fn sign_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn lead_sign(p: &IntPolynomial) -> i8 {
    match p.leading() {
        Some(l) if l.is_negative() => -1,
        Some(_) => 1,
        None => 0,
    }
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(f: &IntPolynomial) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let seq = sturm_sequence(f);
    let at_pos_inf = sign_variations(seq.iter().map(lead_sign));
    let at_neg_inf = sign_variations(seq.iter().map(|p| {
        let s = lead_sign(p);
        if p.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg_inf - at_pos_inf)
}

/// Classifies the number field cut out by an irreducible polynomial.
///
/// All roots real gives [`FieldClass::TotallyReal`]; no real roots gives a CM
/// field of half the degree, relying on the fact that a weight-2 Hecke
/// eigenvalue field is either totally real or CM. Any other signature is
/// rejected with [`Error::MixedSignature`].
pub fn classify_hecke_field(f: &IntPolynomial) -> Result<FieldClass> {
    let degree = f.degree().ok_or(Error::ZeroPolynomial)?;
    if degree == 0 {
        return Err(Error::NotIrreducible);
    }
    let factors = factor_over_rationals(f)?;
    if factors.len() != 1 || factors[0].1 != 1 {
        return Err(Error::NotIrreducible);
    }
    let real = count_real_roots(f)?;
    if real == degree {
        Ok(FieldClass::TotallyReal)
    } else if real == 0 {
        debug_assert!(degree % 2 == 0);
        Ok(FieldClass::Cm {
            real_subfield_degree: degree / 2,
        })
    } else {
        Err(Error::MixedSignature { real, degree })
    }
}

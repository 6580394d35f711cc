//! Isogeny decomposition of J₀(N) from Hecke eigenvalue systems.
//!
//! The plus-cuspidal space is split by characteristic polynomials of `T_p` for
//! primes `p ∤ N` up to the Sturm bound. Each final piece is the isotypic
//! component of one Galois orbit of eigenforms; old forms show up as a
//! component whose dimension is a multiple of the field degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::linalg::{charpoly, kernel, restrict, RationalMatrix, Subspace};
use crate::modsym::{gamma0_index, is_prime, ModularSymbolSpace};
use crate::poly::{classify_hecke_field, factor_over_rationals, FieldClass, IntPolynomial, QPoly};
use crate::{Error, Result, Q};

/// Number of leading separating primes whose traces enter the factor labels' sort key.
const LABEL_TRACE_PRIMES: usize = 6;

/// Extra primes beyond the separating set used to confirm that the Hecke
/// field of each component has been fully generated.
const FIELD_CHECK_PRIMES: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyFactor {
    pub degree: usize,
    pub field_class: FieldClass,
    pub multiplicity: usize,
    pub field_poly: Option<IntPolynomial>,
    pub label: String,
}

impl IsogenyFactor {
    pub fn new(
        degree: usize,
        field_class: FieldClass,
        multiplicity: usize,
        field_poly: Option<IntPolynomial>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let f = IsogenyFactor {
            degree,
            field_class,
            multiplicity,
            field_poly,
            label: label.into(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDecomposition(msg));
        if self.degree == 0 {
            return bad(format!("factor {}: degree must be positive", self.label));
        }
        if self.multiplicity == 0 {
            return bad(format!("factor {}: multiplicity must be positive", self.label));
        }
        if let Some(f) = &self.field_poly {
            if f.degree() != Some(self.degree) {
                return bad(format!(
                    "factor {}: degree {} but field polynomial {f} has degree {}",
                    self.label,
                    self.degree,
                    f.degree().map_or("-∞".to_string(), |d| d.to_string())
                ));
            }
        }
        match self.field_class {
            FieldClass::TotallyReal => {}
            FieldClass::Cm {
                real_subfield_degree,
            } => {
                if self.degree % 2 != 0 {
                    return bad(format!(
                        "factor {}: CM field of odd degree {}",
                        self.label, self.degree
                    ));
                }
                if 2 * real_subfield_degree != self.degree {
                    return bad(format!(
                        "factor {}: CM field of degree {} with real subfield of degree {}",
                        self.label, self.degree, real_subfield_degree
                    ));
                }
            }
        }
        Ok(())
    }

    /// Contribution `degree × multiplicity` to the dimension of J.
    pub fn dimension(&self) -> u64 {
        (self.degree * self.multiplicity) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionSource {
    Computed { level: u64 },
    Ingested { label: String },
}

impl DecompositionSource {
    /// Short human-readable name, `X0(N)` for computed levels.
    pub fn name(&self) -> String {
        match self {
            DecompositionSource::Computed { level } => format!("X0({level})"),
            DecompositionSource::Ingested { label } => label.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    source: DecompositionSource,
    factors: Vec<IsogenyFactor>,
    genus: u64,
}

impl Decomposition {
    /// Validates every factor and the identity `Σ degree × multiplicity = genus`.
    pub fn new(source: DecompositionSource, factors: Vec<IsogenyFactor>, genus: u64) -> Result<Self> {
        for f in &factors {
            f.validate()?;
        }
        let total: u64 = factors.iter().map(IsogenyFactor::dimension).sum();
        if total != genus {
            return Err(Error::InvalidDecomposition(format!(
                "factor dimensions sum to {total} but genus is {genus}"
            )));
        }
        Ok(Decomposition {
            source,
            factors,
            genus,
        })
    }

    /// Builds a decomposition whose genus is the sum of its factor dimensions.
    pub fn from_factors(source: DecompositionSource, factors: Vec<IsogenyFactor>) -> Result<Self> {
        let genus = factors.iter().map(IsogenyFactor::dimension).sum();
        Self::new(source, factors, genus)
    }

    pub fn source(&self) -> &DecompositionSource {
        &self.source
    }

    pub fn factors(&self) -> &[IsogenyFactor] {
        &self.factors
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// Whether every factor occurs with multiplicity one.
    pub fn multiplicity_free(&self) -> bool {
        self.factors.iter().all(|f| f.multiplicity == 1)
    }
}

/// `⌈μ/6⌉` with `μ = [SL₂(ℤ) : Γ₀(N)]`.
pub fn sturm_bound(level: u64) -> u64 {
    gamma0_index(level).div_ceil(6)
}

/// Primes `p ∤ N` with `p ≤ sturm_bound(N)`, or the smallest such prime if none qualify.
pub fn separating_primes(level: u64) -> Vec<u64> {
    let bound = sturm_bound(level);
    let primes: Vec<u64> = (2..=bound)
        .filter(|&p| is_prime(p) && level % p != 0)
        .collect();
    if primes.is_empty() {
        vec![next_good_prime(level, 1)]
    } else {
        primes
    }
}

fn next_good_prime(level: u64, after: u64) -> u64 {
    (after + 1..)
        .find(|&p| is_prime(p) && level % p != 0)
        .expect("infinitely many primes")
}

/// One Hecke-isotypic piece of the plus-cuspidal space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicComponent {
    /// The component, in ambient modular-symbol coordinates.
    pub subspace: Subspace,
    /// Minimal polynomial of a generator of the Hecke eigenvalue field.
    pub field_poly: IntPolynomial,
    pub multiplicity: usize,
    /// `(p, tr a_p)` for the leading separating primes, traced from the field to ℚ.
    pub traces: Vec<(u64, BigInt)>,
}

impl IsotypicComponent {
    pub fn degree(&self) -> usize {
        self.field_poly.degree().expect("nonzero field polynomial")
    }
}

/// Restricted Hecke matrices on the plus-cuspidal space, computed on demand.
struct PlusHecke<'a> {
    space: &'a ModularSymbolSpace,
    cache: BTreeMap<u64, RationalMatrix>,
}

impl<'a> PlusHecke<'a> {
    fn new(space: &'a ModularSymbolSpace) -> Self {
        PlusHecke {
            space,
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, p: u64) -> Result<&RationalMatrix> {
        if !self.cache.contains_key(&p) {
            let m = self.space.hecke_operator(p, self.space.plus_subspace())?.matrix;
            self.cache.insert(p, m);
        }
        Ok(&self.cache[&p])
    }
}

/// Isotypic decomposition using the default separating primes in increasing order.
pub fn isotypic_decomposition(space: &ModularSymbolSpace) -> Result<Vec<IsotypicComponent>> {
    isotypic_decomposition_with_primes(space, &separating_primes(space.level()))
}

/// Isotypic decomposition refining by the given primes in the given order.
///
/// The result is sorted by (degree, traces, field polynomial, subspace) and
/// does not depend on the order of `primes`.
pub fn isotypic_decomposition_with_primes(
    space: &ModularSymbolSpace,
    primes: &[u64],
) -> Result<Vec<IsotypicComponent>> {
    let level = space.level();
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if level % p == 0 {
            return Err(Error::InvalidDecomposition(format!(
                "separating prime {p} divides the level {level}"
            )));
        }
    }
    let plus = space.plus_subspace();
    let g = plus.dim();
    if g == 0 {
        return Ok(Vec::new());
    }
    let mut hecke = PlusHecke::new(space);

    // Components in plus-space coordinates; `true` marks a component on which
    // some T_p already acts irreducibly, so it cannot split further.
    let mut parts: Vec<(Subspace, bool)> = vec![(Subspace::full(g), false)];
    for &p in primes {
        if parts.iter().all(|(_, done)| *done) {
            break;
        }
        let t = hecke.get(p)?.clone();
        let mut next = Vec::with_capacity(parts.len());
        for (u, done) in parts {
            if done {
                next.push((u, true));
                continue;
            }
            let a = restrict(&t, &u)?;
            let f = integral_charpoly(&a, level, p)?;
            let factors = factor_over_rationals(&f)?;
            if factors.len() == 1 {
                let irreducible = factors[0].1 == 1;
                next.push((u, irreducible));
                continue;
            }
            for (h, e) in factors {
                let k = primary_kernel(&a, &h, e)?;
                let piece = u.lift(&k);
                next.push((piece, e == 1));
            }
        }
        parts = next;
    }

    let total: usize = parts.iter().map(|(u, _)| u.dim()).sum();
    if total != g {
        return Err(Error::Invariant(format!(
            "components of dimensions summing to {total} in a space of dimension {g}"
        )));
    }

    // The components are already canonical; describing them with the primes in
    // sorted order makes the chosen field generator canonical too.
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let trace_primes = &sorted[..sorted.len().min(LABEL_TRACE_PRIMES)];
    let mut out = Vec::with_capacity(parts.len());
    for (u, _) in parts {
        out.push(describe_component(space, &mut hecke, plus, &u, &sorted, trace_primes)?);
    }
    out.sort_by(compare_components);
    Ok(out)
}

fn compare_components(a: &IsotypicComponent, b: &IsotypicComponent) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| {
            let ta = a.traces.iter().map(|(_, t)| t);
            let tb = b.traces.iter().map(|(_, t)| t);
            ta.cmp(tb)
        })
        .then_with(|| a.field_poly.cmp(&b.field_poly))
        .then_with(|| a.subspace.basis().to_rows().cmp(&b.subspace.basis().to_rows()))
}

fn integral_charpoly(a: &RationalMatrix, level: u64, p: u64) -> Result<IntPolynomial> {
    charpoly(a)?.to_integer().ok_or_else(|| {
        Error::Invariant(format!(
            "T_{p} at level {level} has a non-integral characteristic polynomial"
        ))
    })
}

/// `ker h(A)^e`, using `ker h(A)` when `A` is semisimple on that part.
fn primary_kernel(a: &RationalMatrix, h: &IntPolynomial, e: usize) -> Result<Subspace> {
    let d = h.degree().expect("nonzero factor");
    let ha = a.eval_poly(&h.to_qpoly())?;
    let k = kernel(&ha);
    if k.dim() == d * e {
        return Ok(k);
    }
    let k = kernel(&a.eval_poly(&h.pow(e).to_qpoly())?);
    if k.dim() != d * e {
        return Err(Error::Invariant(format!(
            "generalised eigenspace of {h} has dimension {} instead of {}",
            k.dim(),
            d * e
        )));
    }
    Ok(k)
}

/// Field degree, field polynomial, multiplicity and traces of a final component
/// `u`, given in plus-space coordinates.
///
/// A generator `T` of the Hecke field is found by taking the cyclic space
/// `ℚ[T]·v` for one vector `v ∈ u` and checking `A_p·v ∈ ℚ[T]·v` for every
/// prime in use; since the operators commute this shows `ℚ[T]·v` is stable
/// under all of them, so its dimension is the field degree.
fn describe_component(
    space: &ModularSymbolSpace,
    hecke: &mut PlusHecke<'_>,
    plus: &Subspace,
    u: &Subspace,
    primes: &[u64],
    trace_primes: &[u64],
) -> Result<IsotypicComponent> {
    let level = space.level();
    let k = u.dim();
    let start = u.basis().row(0).to_vec();

    let mut check: Vec<u64> = primes.to_vec();
    let mut last = primes.iter().copied().max().unwrap_or(1);
    for _ in 0..FIELD_CHECK_PRIMES {
        last = next_good_prime(level, last);
        check.push(last);
    }
    for &p in &check {
        hecke.get(p)?;
    }
    let ops: Vec<&RationalMatrix> = check.iter().map(|p| &hecke.cache[p]).collect();
    let images: Vec<Vec<Q>> = ops.iter().map(|a| a.mul_vec(&start)).collect();

    let mut found = None;
    for t in generator_candidates(&ops[..primes.len()]) {
        let (span, minpoly) = cyclic_space(&t, &start);
        let d = span.dim();
        if k % d == 0 && images.iter().all(|w| span.contains(w)) {
            found = Some((t, minpoly));
            break;
        }
    }
    let Some((t, minpoly)) = found else {
        return Err(Error::Invariant(format!(
            "no Hecke operator generates the eigenvalue field of a component at level {level}"
        )));
    };
    let field_poly = minpoly.to_integer().ok_or_else(|| {
        Error::Invariant(format!("non-integral Hecke eigenvalue at level {level}"))
    })?;
    let degree = field_poly.degree().expect("nonzero minimal polynomial");
    let multiplicity = k / degree;
    if factor_over_rationals(&field_poly)? != vec![(field_poly.clone(), 1)] {
        return Err(Error::Invariant(format!(
            "component at level {level} carries more than one eigenvalue system"
        )));
    }
    let on_u = restrict(&t, u)?;
    if charpoly(&on_u)? != field_poly.pow(multiplicity).to_qpoly() {
        return Err(Error::Invariant(format!(
            "component at level {level} is not isotypic for {field_poly}"
        )));
    }

    let m = Q::from_integer(BigInt::from(multiplicity));
    let mut traces = Vec::with_capacity(trace_primes.len());
    for &p in trace_primes {
        let t = restrict(hecke.get(p)?, u)?.trace() / &m;
        if !t.is_integer() {
            return Err(Error::Invariant(format!(
                "trace of a_{p} over a component at level {level} is not an integer"
            )));
        }
        traces.push((p, t.to_integer()));
    }

    Ok(IsotypicComponent {
        subspace: plus.lift(u),
        field_poly,
        multiplicity,
        traces,
    })
}

/// Each operator on its own, then `A + c·B` for pairs and `c ∈ {1, 2, 3}`.
fn generator_candidates<'m>(
    ops: &'m [&'m RationalMatrix],
) -> impl Iterator<Item = RationalMatrix> + 'm {
    let singles = ops.iter().map(|a| (*a).clone());
    let pairs = ops.iter().enumerate().flat_map(move |(i, a)| {
        ops[i + 1..].iter().flat_map(move |b| {
            (1..=3i64).map(move |c| {
                a.add(&b.scale(&Q::from_integer(c.into())))
                    .expect("operators of equal size")
            })
        })
    });
    singles.chain(pairs)
}

/// The cyclic subspace `ℚ[T]·v` and the monic minimal polynomial of `T` on `v`.
fn cyclic_space(t: &RationalMatrix, v: &[Q]) -> (Subspace, QPoly) {
    let n = v.len();
    let mut powers = vec![v.to_vec()];
    let mut span = Subspace::from_spanning(powers.clone(), n);
    loop {
        let w = t.mul_vec(powers.last().expect("nonempty"));
        if span.contains(&w) {
            powers.push(w);
            break;
        }
        powers.push(w);
        span = Subspace::from_spanning(powers.clone(), n);
    }
    // The single relation among v, Tv, …, T^d v, normalised at T^d v.
    let relation = kernel(&RationalMatrix::from_columns(&powers, n));
    let r = relation.basis().row(0);
    let lead = r.last().expect("nonempty").clone();
    let coeffs = r.iter().map(|c| c / &lead).collect();
    (span, QPoly::new(coeffs))
}

/// Computes the isogeny decomposition of J₀(N).
pub fn jacobian_factors(level: u64) -> Result<Decomposition> {
    let space = ModularSymbolSpace::build(level)?;
    jacobian_factors_of(&space)
}

/// As [`jacobian_factors`], reusing an already built space.
pub fn jacobian_factors_of(space: &ModularSymbolSpace) -> Result<Decomposition> {
    let level = space.level();
    let genus = space.genus()?;
    if genus == 0 {
        return Err(Error::InvalidDecomposition(format!("X0({level}) has genus 0")));
    }
    let components = isotypic_decomposition(space)?;
    let mut factors = Vec::with_capacity(components.len());
    for (i, c) in components.into_iter().enumerate() {
        let degree = c.degree();
        let field_class = classify_hecke_field(&c.field_poly)?;
        factors.push(IsogenyFactor {
            degree,
            field_class,
            multiplicity: c.multiplicity,
            field_poly: Some(c.field_poly),
            label: format!("{level}.{}", i + 1),
        });
    }
    Decomposition::new(DecompositionSource::Computed { level }, factors, genus)
        .map_err(|e| Error::Invariant(format!("level {level}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: u64) -> Vec<(usize, usize)> {
        let d = jacobian_factors(n).unwrap();
        let mut v: Vec<_> = d.factors().iter().map(|f| (f.degree, f.multiplicity)).collect();
        v.sort();
        v
    }

    #[test]
    fn sturm_bounds() {
        assert_eq!(sturm_bound(11), 2);
        assert_eq!(sturm_bound(23), 4);
        assert_eq!(sturm_bound(36), 12);
    }

    #[test]
    fn separating_primes_fallback() {
        assert_eq!(separating_primes(11), vec![2]);
        assert_eq!(separating_primes(2), vec![3]);
        assert_eq!(separating_primes(23), vec![2, 3]);
    }

    #[test]
    fn small_level_shapes() {
        assert_eq!(shape(11), vec![(1, 1)]);
        assert_eq!(shape(22), vec![(1, 2)]);
        assert_eq!(shape(23), vec![(2, 1)]);
        assert_eq!(shape(37), vec![(1, 1), (1, 1)]);
        assert_eq!(shape(67), vec![(1, 1), (2, 1), (2, 1)]);
    }

    #[test]
    fn level_23_field_and_labels() {
        let d = jacobian_factors(23).unwrap();
        assert_eq!(d.genus(), 2);
        let f = &d.factors()[0];
        assert_eq!(f.field_poly, Some(IntPolynomial::from_i64(&[-1, 1, 1])));
        assert_eq!(f.field_class, FieldClass::TotallyReal);
        assert_eq!(f.label, "23.1");
    }

    #[test]
    fn level_37_separated_by_a2() {
        let s = ModularSymbolSpace::build(37).unwrap();
        let comps = isotypic_decomposition(&s).unwrap();
        let a2: Vec<BigInt> = comps.iter().map(|c| c.traces[0].1.clone()).collect();
        assert_eq!(a2, vec![BigInt::from(-2), BigInt::from(0)]);
    }

    #[test]
    fn genus_zero_level_is_empty() {
        let s = ModularSymbolSpace::build(13).unwrap();
        assert!(isotypic_decomposition(&s).unwrap().is_empty());
    }

    #[test]
    fn validation_rejects_bad_factors() {
        assert!(IsogenyFactor::new(3, FieldClass::Cm { real_subfield_degree: 1 }, 1, None, "x").is_err());
        assert!(IsogenyFactor::new(2, FieldClass::TotallyReal, 0, None, "x").is_err());
        assert!(IsogenyFactor::new(
            1,
            FieldClass::TotallyReal,
            1,
            Some(IntPolynomial::from_i64(&[-1, 1, 1])),
            "x"
        )
        .is_err());
        let f = IsogenyFactor::new(2, FieldClass::TotallyReal, 1, None, "x").unwrap();
        let src = DecompositionSource::Ingested { label: "t".into() };
        assert!(Decomposition::new(src.clone(), vec![f.clone()], 3).is_err());
        assert_eq!(Decomposition::from_factors(src, vec![f]).unwrap().genus(), 2);
    }
}

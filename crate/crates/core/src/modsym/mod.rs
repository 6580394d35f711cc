//! Weight-2 modular symbols for Γ₀(N) over ℚ.
//!
//! The ambient space is presented as the free ℚ-space on Manin symbols
//! `(c:d) ∈ ℙ¹(ℤ/N)` modulo the relations
//!
//! * `x + x·σ = 0` with `σ = [[0,−1],[1,0]]`, i.e. `(c:d) + (d:−c) = 0`;
//! * `x + x·τ + x·τ² = 0` with `τ = [[0,−1],[1,−1]]`, i.e.
//!   `(c:d) + (d:−c−d) + (−c−d:c) = 0`.
//!
//! Matrices act on the right of symbols, `(c:d)·[[a,b],[e,f]] = (ca+de : cb+df)`,
//! and operators on the ambient space are returned in the column convention
//! of [`crate::linalg`].

mod cusps;
pub mod genus;
pub mod heilbronn;
mod p1;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::{kernel, restrict, RationalMatrix, Subspace};
use crate::{Error, Result, Q};

pub use cusps::{cusp_class_key, lift_to_sl2, CuspKey};
pub use genus::{gamma0_index, genus_formula, is_prime, primes_up_to};
pub use p1::ManinBasis;

/// Sparse vector in ambient coordinates, sorted by index.
type Sparse = Vec<(usize, Q)>;

#[derive(Debug)]
pub struct ModularSymbolSpace {
    level: u64,
    manin: ManinBasis,
    /// Manin-symbol index of each ambient basis vector.
    basis_symbols: Vec<usize>,
    /// Image of each Manin symbol in ambient coordinates.
    coords: Vec<Sparse>,
    /// The same images when every coefficient is a machine integer.
    coords_small: Option<Vec<Vec<(usize, i64)>>>,
    cusp_keys: Vec<CuspKey>,
    boundary: RationalMatrix,
    cuspidal: OnceLock<Subspace>,
    plus: OnceLock<Subspace>,
}

/// Matrix of a Hecke operator on a stated subspace (the ambient space when `on` is full).
#[derive(Clone, Debug)]
pub struct HeckeOperator {
    pub prime: u64,
    pub matrix: RationalMatrix,
}

impl ModularSymbolSpace {
    pub fn build(level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        let manin = ManinBasis::new(level);
        let n = manin.len();
        let sigma = |i: usize| {
            let (c, d) = manin.symbol(i);
            manin.index_of(d as i64, -(c as i64)).expect("σ permutes ℙ¹")
        };
        let tau = |i: usize| {
            let (c, d) = manin.symbol(i);
            manin
                .index_of(d as i64, -(c as i64) - d as i64)
                .expect("τ permutes ℙ¹")
        };

        // Two-term relations: each symbol is zero or ± a free generator.
        let mut two_term: Vec<Option<(i8, usize)>> = vec![None; n];
        let mut gens = Vec::new();
        let mut gen_of: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let j = sigma(i);
            if i == j {
                continue;
            }
            if i < j {
                gen_of.insert(i, gens.len());
                gens.push(i);
                two_term[i] = Some((1, gen_of[&i]));
            } else {
                two_term[i] = Some((-1, gen_of[&j]));
            }
        }

        // Three-term relations over the free generators.
        let mut reducer = SparseReducer::new();
        let mut seen = vec![false; n];
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let j = tau(i);
            let k = tau(j);
            seen[i] = true;
            seen[j] = true;
            seen[k] = true;
            let mut row: BTreeMap<usize, Q> = BTreeMap::new();
            for s in [i, j, k] {
                if let Some((sign, g)) = two_term[s] {
                    *row.entry(g).or_insert_with(Q::zero) += Q::from_integer(sign.into());
                }
            }
            row.retain(|_, v| !v.is_zero());
            reducer.insert(row);
        }
        let pivots = reducer.finish();

        let free: Vec<usize> = (0..gens.len()).filter(|g| !pivots.contains_key(g)).collect();
        let position: HashMap<usize, usize> =
            free.iter().enumerate().map(|(pos, &g)| (g, pos)).collect();
        let gen_coords: Vec<Sparse> = (0..gens.len())
            .map(|g| match pivots.get(&g) {
                Some(row) => row
                    .iter()
                    .filter(|(&c, _)| c != g)
                    .map(|(c, v)| (position[c], -v.clone()))
                    .collect(),
                None => vec![(position[&g], Q::one())],
            })
            .collect();
        let coords: Vec<Sparse> = two_term
            .iter()
            .map(|t| match t {
                None => Vec::new(),
                Some((1, g)) => gen_coords[*g].clone(),
                Some((_, g)) => gen_coords[*g].iter().map(|(i, v)| (*i, -v.clone())).collect(),
            })
            .collect();
        let basis_symbols: Vec<usize> = free.iter().map(|&g| gens[g]).collect();
        let coords_small = coords
            .iter()
            .map(|v| {
                v.iter()
                    .map(|(i, x)| x.is_integer().then(|| x.numer().to_i64()).flatten().map(|x| (*i, x)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>();

        // Boundary map to the space of cusp classes.
        let cusp_keys = cusps::all_cusp_classes(level as i64);
        let cusp_index: HashMap<CuspKey, usize> =
            cusp_keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut boundary = RationalMatrix::zeros(cusp_keys.len(), basis_symbols.len());
        for (j, &s) in basis_symbols.iter().enumerate() {
            let (c, d) = manin.symbol(s);
            let [a, b, c1, d1] = lift_to_sl2(c as i64, d as i64, level as i64);
            for (num, den, sign) in [(a, c1, 1), (b, d1, -1)] {
                let key = cusp_class_key(num, den, level as i64);
                let i = *cusp_index
                    .get(&key)
                    .ok_or_else(|| Error::Invariant(format!("unknown cusp class {key:?}")))?;
                let v = boundary.get(i, j) + Q::from_integer(sign.into());
                boundary.set(i, j, v);
            }
        }

        Ok(ModularSymbolSpace {
            level,
            manin,
            basis_symbols,
            coords,
            coords_small,
            cusp_keys,
            boundary,
            cuspidal: OnceLock::new(),
            plus: OnceLock::new(),
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis_symbols.len()
    }

    pub fn manin_basis(&self) -> &ManinBasis {
        &self.manin
    }

    /// Manin symbols `(c, d)` chosen as the ambient basis, in order.
    pub fn basis_symbols(&self) -> Vec<(u64, u64)> {
        self.basis_symbols.iter().map(|&i| self.manin.symbol(i)).collect()
    }

    /// All cusp classes of Γ₀(N), ordered by invariant; rows of the boundary map.
    pub fn cusp_classes(&self) -> &[CuspKey] {
        &self.cusp_keys
    }

    /// Dense matrix from the free space on Manin symbols onto the ambient space
    /// (column `i` is the image of the `i`-th Manin symbol).
    pub fn quotient_map(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.ambient_dim(), self.manin.len());
        for (j, v) in self.coords.iter().enumerate() {
            for (i, x) in v {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    /// Ambient coordinates of the Manin symbol `(c:d)`; zero if `(c:d)` is not in ℙ¹(ℤ/N).
    pub fn manin_symbol_coords(&self, c: i64, d: i64) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.ambient_dim()];
        if let Some(i) = self.manin.index_of(c, d) {
            for (k, x) in &self.coords[i] {
                v[*k] += x;
            }
        }
        v
    }

    /// Boundary map from the ambient space to ℚ[cusp classes].
    pub fn boundary_map(&self) -> &RationalMatrix {
        &self.boundary
    }

    pub fn cuspidal_subspace(&self) -> &Subspace {
        self.cuspidal.get_or_init(|| kernel(&self.boundary))
    }

    /// Star involution `(c:d) ↦ −(−c:d)`.
    pub fn star_involution(&self) -> RationalMatrix {
        self.operator_from_matrices(&[[-1, 0, 0, 1]], &(-Q::one()))
    }

    /// Cuspidal symbols fixed by the star involution; dimension equals the genus.
    pub fn plus_subspace(&self) -> &Subspace {
        self.plus.get_or_init(|| {
            let star = self.star_involution();
            let shifted = star
                .sub(&RationalMatrix::identity(self.ambient_dim()))
                .expect("square");
            kernel(&self.boundary.stack(&shifted).expect("same width"))
        })
    }

    /// Plus-cuspidal subspace expressed in its own coordinates is where eigenforms live;
    /// the genus is half the cuspidal dimension.
    pub fn genus(&self) -> Result<u64> {
        let dim = self.cuspidal_subspace().dim();
        if dim % 2 != 0 {
            return Err(Error::Invariant(format!(
                "odd cuspidal dimension {dim} at level {}",
                self.level
            )));
        }
        Ok((dim / 2) as u64)
    }

    /// Matrix of `Σ_h x·h` scaled by `scalar`, over the given integer matrices.
    fn operator_from_matrices(&self, mats: &[[i64; 4]], scalar: &Q) -> RationalMatrix {
        let d = self.ambient_dim();
        let columns: Vec<Vec<Q>> = self
            .basis_symbols
            .iter()
            .map(|&s| {
                let (u, v) = self.manin.symbol(s);
                let (u, v) = (u as i64, v as i64);
                let mut col = vec![Q::zero(); d];
                let mut counts: HashMap<usize, i64> = HashMap::new();
                for &[a, b, c, dd] in mats {
                    if let Some(i) = self.manin.index_of(u * a + v * c, u * b + v * dd) {
                        *counts.entry(i).or_insert(0) += 1;
                    }
                }
                match &self.coords_small {
                    Some(small) => {
                        let mut acc = vec![0i128; d];
                        for (i, k) in counts {
                            for (pos, x) in &small[i] {
                                acc[*pos] += i128::from(k) * i128::from(*x);
                            }
                        }
                        for (c, a) in col.iter_mut().zip(acc) {
                            *c = Q::from_integer(a.into());
                        }
                    }
                    None => {
                        for (i, k) in counts {
                            let k = Q::from_integer(k.into());
                            for (pos, x) in &self.coords[i] {
                                col[*pos] += &k * x;
                            }
                        }
                    }
                }
                if !scalar.is_one() {
                    for x in col.iter_mut() {
                        *x *= scalar;
                    }
                }
                col
            })
            .collect();
        RationalMatrix::from_columns(&columns, d)
    }

    /// Matrix of `T_p` on the full ambient space.
    pub fn ambient_hecke_matrix(&self, p: u64) -> Result<RationalMatrix> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mats = if self.level % p == 0 {
            heilbronn::merel(p)
        } else {
            heilbronn::cremona(p)
        };
        Ok(self.operator_from_matrices(&mats, &Q::one()))
    }

    /// `T_p` computed with Merel's family regardless of `p`; an independent route
    /// to the same operator used for cross-checks.
    pub fn ambient_hecke_matrix_merel(&self, p: u64) -> Result<RationalMatrix> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(self.operator_from_matrices(&heilbronn::merel(p), &Q::one()))
    }

    /// `T_p` restricted to a Hecke-stable subspace of the ambient space.
    pub fn hecke_operator(&self, p: u64, on: &Subspace) -> Result<HeckeOperator> {
        let full = self.ambient_hecke_matrix(p)?;
        let matrix = restrict(&full, on)?;
        Ok(HeckeOperator { prime: p, matrix })
    }
}

/// Incremental sparse row reduction over ℚ.
struct SparseReducer {
    /// Pivot column → row normalized to 1 at the pivot, which is its smallest column.
    rows: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl SparseReducer {
    fn new() -> Self {
        SparseReducer {
            rows: BTreeMap::new(),
        }
    }

    fn insert(&mut self, mut row: BTreeMap<usize, Q>) {
        let mut cursor = 0;
        loop {
            let next = row
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, factor)) = next else { break };
            for (c, v) in &self.rows[&col] {
                let entry = row.entry(*c).or_insert_with(Q::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    row.remove(c);
                }
            }
            cursor = col + 1;
        }
        let Some((&pivot, lead)) = row.iter().next() else {
            return;
        };
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        self.rows.insert(pivot, row);
    }

    /// Back-substitutes so each pivot row mentions no other pivot column.
    fn finish(mut self) -> BTreeMap<usize, BTreeMap<usize, Q>> {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for &p in &pivots {
            let mut row = self.rows.remove(&p).expect("pivot row");
            let hits: Vec<(usize, Q)> = row
                .iter()
                .filter(|(c, _)| **c != p && self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()))
                .collect();
            for (col, factor) in hits {
                for (c, v) in &self.rows[&col] {
                    let entry = row.entry(*c).or_insert_with(Q::zero);
                    *entry -= &factor * v;
                    if entry.is_zero() {
                        row.remove(c);
                    }
                }
            }
            self.rows.insert(p, row);
        }
        self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::charpoly;
    use crate::poly::QPoly;

    #[test]
    fn dimensions_small_levels() {
        assert_eq!(ModularSymbolSpace::build(1).unwrap().ambient_dim(), 0);
        let s11 = ModularSymbolSpace::build(11).unwrap();
        assert_eq!(s11.manin_basis().len(), 12);
        assert_eq!(s11.ambient_dim(), 3);
        assert_eq!(s11.cuspidal_subspace().dim(), 2);
        assert_eq!(s11.plus_subspace().dim(), 1);
        assert_eq!(ModularSymbolSpace::build(13).unwrap().cuspidal_subspace().dim(), 0);
        assert_eq!(ModularSymbolSpace::build(23).unwrap().cuspidal_subspace().dim(), 4);
        assert!(matches!(ModularSymbolSpace::build(0), Err(Error::ZeroLevel)));
    }

    #[test]
    fn quotient_map_has_full_row_rank() {
        for n in [1, 11, 12, 36, 37] {
            let s = ModularSymbolSpace::build(n).unwrap();
            assert_eq!(crate::linalg::rank(&s.quotient_map()), s.ambient_dim());
        }
    }

    #[test]
    fn ambient_dimension_formula() {
        for n in 1..80 {
            let s = ModularSymbolSpace::build(n).unwrap();
            let g = genus_formula(n) as usize;
            let c = genus::cusp_count(n) as usize;
            assert_eq!(s.ambient_dim(), 2 * g + c - 1, "N = {n}");
            assert_eq!(s.cusp_classes().len(), c, "N = {n}");
        }
    }

    #[test]
    fn hecke_charpolys_on_plus_space() {
        let s = ModularSymbolSpace::build(11).unwrap();
        let t2 = s.hecke_operator(2, s.plus_subspace()).unwrap();
        assert_eq!(charpoly(&t2.matrix).unwrap(), QPoly::from_i64(&[2, 1]));

        let s = ModularSymbolSpace::build(37).unwrap();
        let t2 = s.hecke_operator(2, s.plus_subspace()).unwrap();
        assert_eq!(charpoly(&t2.matrix).unwrap(), QPoly::from_i64(&[0, 2, 1]));

        let s = ModularSymbolSpace::build(23).unwrap();
        let t2 = s.hecke_operator(2, s.plus_subspace()).unwrap();
        assert_eq!(charpoly(&t2.matrix).unwrap(), QPoly::from_i64(&[-1, 1, 1]));
    }

    #[test]
    fn star_is_an_involution_commuting_with_t2() {
        let s = ModularSymbolSpace::build(23).unwrap();
        let star = s.star_involution();
        let id = RationalMatrix::identity(s.ambient_dim());
        assert_eq!(star.mul(&star).unwrap(), id);
        let t2 = s.ambient_hecke_matrix(2).unwrap();
        assert_eq!(star.mul(&t2).unwrap(), t2.mul(&star).unwrap());
    }

    #[test]
    fn eisenstein_eigenvalue_on_ambient() {
        // On the Eisenstein part T_p acts by p + 1, so it divides the ambient charpoly.
        let s = ModularSymbolSpace::build(11).unwrap();
        let f = charpoly(&s.ambient_hecke_matrix(3).unwrap()).unwrap();
        let four = Q::from_integer(4.into());
        let at4 = f
            .coeffs()
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * &four + c);
        assert!(at4.is_zero());
    }

    #[test]
    fn cremona_and_merel_agree_on_cuspidal_space() {
        for n in [11u64, 23, 30, 37] {
            let s = ModularSymbolSpace::build(n).unwrap();
            for p in [2u64, 3, 5, 7] {
                if n % p == 0 {
                    continue;
                }
                let a = restrict(&s.ambient_hecke_matrix(p).unwrap(), s.cuspidal_subspace()).unwrap();
                let b = restrict(&s.ambient_hecke_matrix_merel(p).unwrap(), s.cuspidal_subspace())
                    .unwrap();
                assert_eq!(a, b, "N = {n}, p = {p}");
            }
        }
    }
}

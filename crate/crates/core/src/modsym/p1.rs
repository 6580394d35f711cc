use num_integer::Integer;

/// The projective line over ℤ/N, indexing the Manin symbols of Γ₀(N).
///
/// Each point `(c:d)` is represented by the lexicographically smallest pair
/// `(c, d)` with `0 ≤ c, d < N` in its orbit under scaling by units mod N.
#[derive(Clone, Debug)]
pub struct ManinBasis {
    level: u64,
    symbols: Vec<(u64, u64)>,
    table: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl ManinBasis {
    pub fn new(level: u64) -> Self {
        assert!(level >= 1, "level must be positive");
        let n = level;
        let units: Vec<u64> = (1..=n).filter(|&u| u.gcd(&n) == 1).map(|u| u % n).collect();
        let mut table = vec![ABSENT; (n * n) as usize];
        let mut symbols = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if c.gcd(&d).gcd(&n) != 1 {
                    continue;
                }
                let slot = (c * n + d) as usize;
                if table[slot] != ABSENT {
                    continue;
                }
                let idx = symbols.len() as u32;
                symbols.push((c, d));
                for &u in &units {
                    table[((u * c % n) * n + u * d % n) as usize] = idx;
                }
            }
        }
        ManinBasis {
            level,
            symbols,
            table,
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> (u64, u64) {
        self.symbols[i]
    }

    pub fn symbols(&self) -> &[(u64, u64)] {
        &self.symbols
    }

    /// Index of the canonical representative of `(c:d)`, or `None` if
    /// `gcd(c, d, N) ≠ 1` so the pair is not a point of ℙ¹(ℤ/N).
    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.level as i64;
        let (c, d) = (c.rem_euclid(n) as u64, d.rem_euclid(n) as u64);
        let v = self.table[(c * self.level + d) as usize];
        (v != ABSENT).then_some(v as usize)
    }
}

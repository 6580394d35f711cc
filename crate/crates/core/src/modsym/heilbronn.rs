//! Heilbronn matrices: finite families of integer matrices of determinant `n`
//! whose right action on Manin symbols realises the Hecke operator `T_n`.
//!
//! Two standard families are provided. Cremona's family (built from a
//! nearest-integer continued fraction expansion of `p/r`) is short and valid
//! for primes `p ∤ N`; Merel's family (all `[[a,b],[c,d]]` with `ad − bc = n`,
//! `a > b ≥ 0`, `d > c ≥ 0`) is valid for every `n` and is used for `p | N`.

/// `[a, b, c, d]` for the matrix `[[a, b], [c, d]]`.
pub type Heilbronn = [i64; 4];

pub fn cremona(p: u64) -> Vec<Heilbronn> {
    let p = p as i64;
    let mut out = vec![[1, 0, 0, p]];
    if p == 2 {
        out.extend([[2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]]);
        return out;
    }
    let half = p / 2;
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            // Nearest integer, halves rounded away from zero.
            let q = (a as f64 / b as f64).round() as i64;
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

pub fn merel(n: u64) -> Vec<Heilbronn> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        let q = n / a;
        if q * a == n {
            let d = q;
            for b in 0..a {
                out.push([a, b, 0, d]);
            }
            for c in 1..d {
                out.push([a, 0, c, d]);
            }
        }
        for d in (q + 1)..=n {
            let bc = a * d - n;
            for c in (bc / a + 1)..d {
                if bc % c == 0 {
                    out.push([a, bc / c, c, d]);
                }
            }
        }
    }
    out
}

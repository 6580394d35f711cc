use num_integer::Integer;

/// Complete invariant of a cusp of Γ₀(N): for `a/c` in lowest terms,
/// `(gcd(c, N), a·(c/gcd(c, N)) mod gcd(g, N/g))` with `g = gcd(c, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspKey {
    pub denominator_class: i64,
    pub numerator_class: i64,
}

/// Γ₀(N)-class of the cusp `num/den` (with `den = 0` meaning ∞).
pub fn cusp_class_key(num: i64, den: i64, level: i64) -> CuspKey {
    let g0 = num.gcd(&den);
    let (a, c) = if g0 == 0 { (1, 0) } else { (num / g0, den / g0) };
    let d = c.gcd(&level);
    let m = d.gcd(&(level / d));
    let x = (a * (c / d)).rem_euclid(m);
    CuspKey {
        denominator_class: d,
        numerator_class: x,
    }
}

/// Every cusp class of Γ₀(N): one for each `d | N` and unit `x` modulo `gcd(d, N/d)`.
pub fn all_cusp_classes(level: i64) -> Vec<CuspKey> {
    let mut out = Vec::new();
    for d in (1..=level).filter(|d| level % d == 0) {
        let m = d.gcd(&(level / d));
        for x in (0..m).filter(|x| x.gcd(&m) == 1) {
            out.push(CuspKey {
                denominator_class: d,
                numerator_class: x,
            });
        }
    }
    out
}

/// Lifts `(c, d)` with `gcd(c, d, N) = 1` to `[a, b, c', d']` in SL₂(ℤ) with
/// `c' ≡ c` and `d' ≡ d (mod N)`.
pub fn lift_to_sl2(c: i64, d: i64, level: i64) -> [i64; 4] {
    let c1 = if c.rem_euclid(level) == 0 { level } else { c };
    let mut d1 = d;
    while c1.gcd(&d1) != 1 {
        d1 += level;
    }
    // x·c' + y·d' = 1, so y·d' − (−x)·c' = 1.
    let e = c1.extended_gcd(&d1);
    let (x, y) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
    [y, -x, c1, d1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_is_in_sl2() {
        for n in [1i64, 2, 11, 12, 36] {
            for c in 0..n {
                for d in 0..n {
                    if c.gcd(&d).gcd(&n) != 1 {
                        continue;
                    }
                    let [a, b, c1, d1] = lift_to_sl2(c, d, n);
                    assert_eq!(a * d1 - b * c1, 1);
                    assert_eq!((c1 - c).rem_euclid(n), 0);
                    assert_eq!((d1 - d).rem_euclid(n), 0);
                }
            }
        }
    }

    #[test]
    fn zero_and_infinity_distinct_for_n_gt_1() {
        assert_ne!(cusp_class_key(0, 1, 11), cusp_class_key(1, 0, 11));
        assert_eq!(cusp_class_key(0, 1, 1), cusp_class_key(1, 0, 1));
        // 1/N ~ ∞ for Γ₀(N).
        assert_eq!(cusp_class_key(1, 11, 11), cusp_class_key(1, 0, 11));
        assert_eq!(cusp_class_key(-3, -6, 12), cusp_class_key(1, 2, 12));
    }
}

//! Classical and quadratic Chabauty finiteness conditions for a decomposed Jacobian.
//!
//! For `J ~ ∏ Aᵢ^{mᵢ}` with `Aᵢ` attached to a field `Fᵢ` of degree `dᵢ`, the
//! Rosati-invariant part of `End(J) ⊗ ℚ` contains the maximal totally real
//! subfield of each `Fᵢ`, giving
//!
//! ```text
//! rNS = Σ mᵢ·dᵢ (Fᵢ totally real) + Σ mᵢ·dᵢ/2 (Fᵢ CM)  ≤  rank NS(J).
//! ```
//!
//! The classical condition is `rank J(ℚ) < g`; the quadratic one is
//! `rank J(ℚ) < g − 1 + rNS`, which expands to
//! `−1 + 2·Σ_real mᵢdᵢ + (3/2)·Σ_CM mᵢdᵢ`.

use std::fmt;

use crate::decomposition::Decomposition;
use crate::{Error, Result};

/// What is known about `rank J(ℚ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankInput {
    Exact(u64),
    /// `lo ≤ rank ≤ hi`.
    Interval { lo: u64, hi: u64 },
    Unknown,
}

impl RankInput {
    pub fn interval(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyRankInterval { lo, hi });
        }
        Ok(RankInput::Interval { lo, hi })
    }

    /// Three-valued `rank < bound`.
    pub fn less_than(&self, bound: u64) -> Verdict {
        match *self {
            RankInput::Exact(r) if r < bound => Verdict::Holds,
            RankInput::Exact(_) => Verdict::Fails,
            RankInput::Interval { hi, .. } if hi < bound => Verdict::Holds,
            RankInput::Interval { lo, .. } if lo >= bound => Verdict::Fails,
            RankInput::Interval { .. } | RankInput::Unknown => Verdict::Unknown,
        }
    }
}

impl fmt::Display for RankInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankInput::Exact(r) => write!(f, "{r}"),
            RankInput::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
            RankInput::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "holds" => Some(Verdict::Holds),
            "fails" => Some(Verdict::Fails),
            "unknown" => Some(Verdict::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// Genus together with the classical and quadratic rank bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub genus: u64,
    pub classical: u64,
    pub quadratic: u64,
}

/// `(Σ_real mᵢdᵢ, Σ_CM mᵢdᵢ)`.
fn split_dimensions(d: &Decomposition) -> (u64, u64) {
    d.factors().iter().fold((0, 0), |(real, cm), f| {
        if f.field_class.is_cm() {
            (real, cm + f.dimension())
        } else {
            (real + f.dimension(), cm)
        }
    })
}

/// Lower bound for the Néron–Severi rank of J, counting every factor with multiplicity.
pub fn ns_rank_lower_bound(d: &Decomposition) -> u64 {
    let (real, cm) = split_dimensions(d);
    debug_assert!(cm % 2 == 0, "CM degrees are even");
    real + cm / 2
}

/// Twice the quadratic bound in the closed form `−1 + 2·Σ_real + (3/2)·Σ_CM`,
/// doubled so the half-integer coefficient stays exact.
pub fn quadratic_bound_closed_form_doubled(d: &Decomposition) -> i64 {
    let (real, cm) = split_dimensions(d);
    -2 + 4 * real as i64 + 3 * cm as i64
}

/// The quadratic bound as `g − 1 + rNS` (zero for the degenerate genus-zero case).
fn quadratic_bound_from_ns(d: &Decomposition) -> i64 {
    d.genus() as i64 - 1 + ns_rank_lower_bound(d) as i64
}

pub fn bounds(d: &Decomposition) -> Bounds {
    let g = d.genus();
    let quadratic = quadratic_bound_from_ns(d);
    assert_eq!(
        quadratic_bound_closed_form_doubled(d),
        2 * quadratic,
        "closed-form and g − 1 + rNS quadratic bounds disagree"
    );
    Bounds {
        genus: g,
        classical: g,
        quadratic: quadratic.max(0) as u64,
    }
}

pub const CONCLUSION_SCOPE: &str = "A quadratic verdict of 'holds' means the set X(Q_l)_2 is finite \
for every prime l of good reduction; it says nothing about which points it contains.";

const SHARP_NOTE: &str = "Every factor has multiplicity 1: rNS equals rank NS(J) provided the \
factors are pairwise non-isogenous, which is not checked.";

const LOWER_BOUND_NOTE: &str = "Some factor has multiplicity greater than 1: rNS is a lower \
bound only, and rank NS(J) may be larger.";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub decomposition: Decomposition,
    pub genus: u64,
    pub ns_lower_bound: u64,
    pub classical_bound: u64,
    pub quadratic_bound: u64,
    pub rank: RankInput,
    pub classical_verdict: Verdict,
    pub quadratic_verdict: Verdict,
    pub conclusion_scope: String,
    pub sharpness_note: String,
}

pub fn evaluate(d: &Decomposition, rank: RankInput) -> CriterionReport {
    let b = bounds(d);
    let sharpness_note = if d.multiplicity_free() {
        SHARP_NOTE
    } else {
        LOWER_BOUND_NOTE
    };
    CriterionReport {
        decomposition: d.clone(),
        genus: b.genus,
        ns_lower_bound: ns_rank_lower_bound(d),
        classical_bound: b.classical,
        quadratic_bound: b.quadratic,
        rank,
        classical_verdict: rank.less_than(b.classical),
        quadratic_verdict: rank.less_than(b.quadratic),
        conclusion_scope: CONCLUSION_SCOPE.to_string(),
        sharpness_note: sharpness_note.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{DecompositionSource, IsogenyFactor};
    use crate::poly::FieldClass;

    fn decomp(factors: &[(usize, bool, usize)]) -> Decomposition {
        let fs = factors
            .iter()
            .enumerate()
            .map(|(i, &(degree, cm, mult))| {
                let class = if cm {
                    FieldClass::Cm {
                        real_subfield_degree: degree / 2,
                    }
                } else {
                    FieldClass::TotallyReal
                };
                IsogenyFactor::new(degree, class, mult, None, format!("t.{}", i + 1)).unwrap()
            })
            .collect();
        let src = DecompositionSource::Ingested { label: "t".into() };
        Decomposition::from_factors(src, fs).unwrap()
    }

    #[test]
    fn ns_bound_examples() {
        assert_eq!(ns_rank_lower_bound(&decomp(&[(2, false, 1)])), 2);
        assert_eq!(ns_rank_lower_bound(&decomp(&[(2, true, 1)])), 1);
        assert_eq!(ns_rank_lower_bound(&decomp(&[(1, false, 2)])), 2);
    }

    #[test]
    fn bound_examples() {
        let b = |f: &[(usize, bool, usize)]| {
            let b = bounds(&decomp(f));
            (b.genus, b.classical, b.quadratic)
        };
        assert_eq!(b(&[(2, false, 1)]), (2, 2, 3));
        assert_eq!(b(&[(2, true, 1)]), (2, 2, 2));
        assert_eq!(b(&[(1, false, 1), (2, true, 1)]), (3, 3, 4));
    }

    #[test]
    fn verdict_examples() {
        let d = decomp(&[(2, false, 1)]);
        let r = evaluate(&d, RankInput::Exact(2));
        assert_eq!((r.classical_verdict, r.quadratic_verdict), (Verdict::Fails, Verdict::Holds));
        let r = evaluate(&d, RankInput::Exact(0));
        assert_eq!((r.classical_verdict, r.quadratic_verdict), (Verdict::Holds, Verdict::Holds));
        let r = evaluate(&d, RankInput::interval(2, 4).unwrap());
        assert_eq!((r.classical_verdict, r.quadratic_verdict), (Verdict::Fails, Verdict::Unknown));
        let r = evaluate(&d, RankInput::Unknown);
        assert_eq!((r.classical_verdict, r.quadratic_verdict), (Verdict::Unknown, Verdict::Unknown));
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(RankInput::interval(3, 2).is_err());
    }

    #[test]
    fn sharpness_note_tracks_multiplicity() {
        assert_eq!(evaluate(&decomp(&[(2, false, 1)]), RankInput::Unknown).sharpness_note, SHARP_NOTE);
        assert_eq!(
            evaluate(&decomp(&[(1, false, 2)]), RankInput::Unknown).sharpness_note,
            LOWER_BOUND_NOTE
        );
    }
}

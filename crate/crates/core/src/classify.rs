//! Cokernel sheaf classification from the graded pattern alone.
//!
//! For split `G` with `det q != 0` the section map on twists is injective
//! and `H^1` of split bundles on P^2 vanishes, so
//! `h^0(C(t)) = h^0(G^v(delta + t)) - h^0(G(t))` is pure bookkeeping:
//! `h^0(O(n)) = binom(n+2, 2)` truncated at zero. The twist normalization
//! splits on the parity of delta: even delta lands in the half-period
//! family, odd delta in the theta-characteristic family.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedSymMatrix, SmoothVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CokernelKind {
    TrivialTwist,
    HalfPeriod,
    EvenTheta,
    OddTheta,
    Undetermined,
}

impl std::fmt::Display for CokernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CokernelKind::TrivialTwist => "trivial_twist",
            CokernelKind::HalfPeriod => "half_period",
            CokernelKind::EvenTheta => "even_theta",
            CokernelKind::OddTheta => "odd_theta",
            CokernelKind::Undetermined => "undetermined",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CokernelProfile {
    /// Discriminant degree.
    pub c: i64,
    /// Twist delta of the resolution.
    pub delta: i64,
    pub kind: CokernelKind,
    /// h^0 of the normalized cokernel at absolute twists around t*.
    pub h0_table: BTreeMap<i64, i64>,
    /// The twist t* applied before classification.
    pub normalization: i64,
    /// Diagnostic when the kind is Undetermined.
    pub diagnostic: Option<String>,
}

fn h0_line_bundle(n: i64) -> i64 {
    if n < 0 {
        0
    } else {
        (n + 2) * (n + 1) / 2
    }
}

/// `h^0(C(t))` from the degree pattern.
pub fn h0_twist<F: Field>(q: &GradedSymMatrix<F>, t: i64) -> i64 {
    let dual: i64 = q
        .degrees
        .iter()
        .map(|&a| h0_line_bundle(-a + q.twist + t))
        .sum();
    let plain: i64 = q.degrees.iter().map(|&a| h0_line_bundle(a + t)).sum();
    dual - plain
}

/// Classify the cokernel sheaf. `smooth` is the verdict for the
/// discriminant curve; anything except `Proven` flags the profile.
pub fn classify<F: Field, E>(
    q: &GradedSymMatrix<F>,
    smooth: &SmoothVerdict<E>,
) -> Result<CokernelProfile> {
    if q.chart {
        return Ok(CokernelProfile {
            c: 0,
            delta: q.twist,
            kind: CokernelKind::Undetermined,
            h0_table: BTreeMap::new(),
            normalization: 0,
            diagnostic: Some(
                "chart-level model: the pattern h^0 formula needs a split resolution".into(),
            ),
        });
    }
    let c = q.expected_disc_degree();
    let delta = q.twist;
    let mut diagnostic = None;
    let (kind, t_star) = if delta.rem_euclid(2) == 0 {
        // eta = C(-(c+delta)/2), the half-period family
        let t = -(c + delta) / 2;
        let h = h0_twist(q, t);
        let k = match h {
            0 => CokernelKind::HalfPeriod,
            1 => CokernelKind::TrivialTwist,
            _ => {
                diagnostic = Some(format!(
                    "h^0(eta) = {h} > 1: special curve, genericity criterion inapplicable"
                ));
                CokernelKind::Undetermined
            }
        };
        (k, t)
    } else {
        // theta = C(-(delta+3)/2) with 2 theta = K_C = O_C(c - 3)
        if (delta + 3) % 2 != 0 {
            return Err(Error::Unsupported(
                "half-integer theta normalization".into(),
            ));
        }
        let t = -(delta + 3) / 2;
        let h = h0_twist(q, t);
        let k = if h % 2 == 0 {
            CokernelKind::EvenTheta
        } else {
            CokernelKind::OddTheta
        };
        (k, t)
    };
    let kind = match smooth {
        SmoothVerdict::Proven => kind,
        SmoothVerdict::RefutedAt(_) => {
            diagnostic = Some("discriminant is singular: classification flagged".into());
            CokernelKind::Undetermined
        }
        SmoothVerdict::Unknown(msg) => {
            diagnostic = Some(format!("smoothness unknown: {msg}"));
            CokernelKind::Undetermined
        }
    };
    let mut h0_table = BTreeMap::new();
    for t in (t_star - 2)..=(t_star + 2) {
        h0_table.insert(t, h0_twist(q, t));
    }
    Ok(CokernelProfile {
        c,
        delta,
        kind,
        h0_table,
        normalization: t_star,
        diagnostic,
    })
}

/// Equality of profiles: same kind, same discriminant degree, matching
/// h^0 tables on the overlapping absolute-twist window.
pub fn profiles_equal(a: &CokernelProfile, b: &CokernelProfile) -> bool {
    if a.kind != b.kind || a.c != b.c {
        return false;
    }
    for (t, h) in &a.h0_table {
        if let Some(h2) = b.h0_table.get(t) {
            if h != h2 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::gallery;
    use crate::graded::SmoothVerdict;

    #[test]
    fn h0_examples_from_the_three_patterns() {
        let fp = PrimeField::new(32003).unwrap();
        let hp = gallery::halfperiod_pattern(&fp, 3, 0, 1).unwrap();
        assert_eq!(h0_twist(&hp, -3), 0);
        let even = gallery::even_theta_pattern(&fp, 3, 0, 1).unwrap();
        assert_eq!(h0_twist(&even, -1), 0);
        let odd = gallery::odd_theta_pattern(&fp, 3, 0, 1).unwrap();
        assert_eq!(h0_twist(&odd, -1), 1);
    }

    #[test]
    fn classification_of_generic_patterns() {
        let fp = PrimeField::new(32003).unwrap();
        let hp = gallery::halfperiod_pattern(&fp, 3, 0, 5).unwrap();
        let p = classify(&hp, &SmoothVerdict::<u64>::Proven).unwrap();
        assert_eq!(p.kind, CokernelKind::HalfPeriod);
        assert_eq!(p.c, 6);
        assert_eq!(p.normalization, -3);

        let even = gallery::even_theta_pattern(&fp, 3, 0, 5).unwrap();
        let p = classify(&even, &SmoothVerdict::<u64>::Proven).unwrap();
        assert_eq!(p.kind, CokernelKind::EvenTheta);

        let odd = gallery::odd_theta_pattern(&fp, 3, 0, 5).unwrap();
        let p = classify(&odd, &SmoothVerdict::<u64>::Proven).unwrap();
        assert_eq!(p.kind, CokernelKind::OddTheta);
        assert_eq!(p.h0_table.get(&-1), Some(&1));
    }

    #[test]
    fn even_vs_odd_profiles_differ() {
        let fp = PrimeField::new(32003).unwrap();
        let even = gallery::even_theta_pattern(&fp, 3, 0, 5).unwrap();
        let odd = gallery::odd_theta_pattern(&fp, 3, 0, 5).unwrap();
        let pe = classify(&even, &SmoothVerdict::<u64>::Proven).unwrap();
        let po = classify(&odd, &SmoothVerdict::<u64>::Proven).unwrap();
        assert!(profiles_equal(&pe, &pe));
        assert!(!profiles_equal(&pe, &po));
    }
}

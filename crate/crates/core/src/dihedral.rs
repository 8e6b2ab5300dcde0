//! Divisibility in a rank-one Mordell–Weil group, existence of dihedral
//! covers for the two arrangement types, and class equality in NS through
//! intersection profiles.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, QMatrix, Rational};
use crate::group::AbelianGroup;
use crate::mwgroup::{abel_jacobi_image, MWPoint};
use crate::nslattice::{FormalClass, IntersectionTable, Symbol};
use crate::scenario::{bundled_table, ArrangementType, E_MINUS, E_PLUS, GENERATOR};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityVerdict {
    pub divisible: bool,
    /// `X` with `n·X = Q`.
    pub witness: Option<MWPoint>,
}

/// Solves `n·X = q` in `Z ⊕ T`, one cyclic factor at a time.
pub fn is_divisible(q: &MWPoint, n: i64, torsion: &AbelianGroup) -> DivisibilityVerdict {
    assert!(n >= 2, "n must be at least 2");
    let no = DivisibilityVerdict {
        divisible: false,
        witness: None,
    };
    let nb = BigInt::from(n);
    if !q.free_coeff.is_multiple_of(&nb) {
        return no;
    }
    let mut coords = Vec::with_capacity(torsion.rank());
    for (&t, &m) in q.torsion.0.iter().zip(torsion.invariant_factors()) {
        let g = n.gcd(&m);
        if t % g != 0 {
            return no;
        }
        let m_g = m / g;
        let x = if m_g == 1 {
            0
        } else {
            let inv = mod_inverse((n / g).mod_floor(&m_g), m_g);
            ((t / g) * inv).mod_floor(&m_g)
        };
        coords.push(x);
    }
    DivisibilityVerdict {
        divisible: true,
        witness: Some(MWPoint {
            free_coeff: &q.free_coeff / nb,
            torsion_section: None,
            torsion: torsion.element(coords),
        }),
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.mod_floor(&m)
}

/// `n·X` in `Z ⊕ T`.
pub fn mul_point(x: &MWPoint, n: i64, torsion: &AbelianGroup) -> MWPoint {
    MWPoint {
        free_coeff: &x.free_coeff * n,
        torsion_section: None,
        torsion: torsion.scale(n, &x.torsion),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverDecision {
    pub arrangement: ArrangementType,
    pub n: i64,
    pub exists: bool,
    pub trace: Vec<String>,
}

/// Whether a `D_{2n}`-cover branched along the arrangement exists, decided
/// from the images of `E+` and `E-` on the bundled surface.
pub fn d2n_cover_exists(ty: ArrangementType, n: i64) -> Result<CoverDecision> {
    if n < 3 {
        return Err(Error::Parse(format!("n = {n}; covers need n ≥ 3")));
    }
    cover_decision(&bundled_table(ty)?, ty, n)
}

/// [`d2n_cover_exists`] on a given table carrying `E+`, `E-` and `s_o`.
pub fn cover_decision(
    table: &IntersectionTable,
    ty: ArrangementType,
    n: i64,
) -> Result<CoverDecision> {
    if n < 3 {
        return Err(Error::Parse(format!("n = {n}; covers need n ≥ 3")));
    }
    let plus = abel_jacobi_image(table, E_PLUS, GENERATOR)?;
    let minus = abel_jacobi_image(table, E_MINUS, GENERATOR)?;
    let torsion = crate::mwgroup::TorsionGroup::from_table(table)?.group;
    let mut trace = vec![
        format!("P(E+) = {}", plus.point),
        format!("P(E-) = {}", minus.point),
    ];
    let exists = match ty {
        ArrangementType::TypeI => {
            if !plus.point.is_zero() {
                return Err(Error::Inconsistent(format!(
                    "Type I surface gives P(E+) = {}",
                    plus.point
                )));
            }
            trace.push("P(E+) = O, so E+ ~ E- and every n works".into());
            true
        }
        ArrangementType::TypeII => {
            let diff = MWPoint {
                free_coeff: &plus.point.free_coeff - &minus.point.free_coeff,
                torsion_section: None,
                torsion: torsion.sub(&plus.point.torsion, &minus.point.torsion),
            };
            trace.push(format!("P(E+) - P(E-) = {}", diff));
            if n % 2 == 1 {
                let p = smallest_prime_factor(n);
                let free = &plus.point.free_coeff;
                let ok = free.is_multiple_of(&BigInt::from(p));
                trace.push(format!(
                    "n odd: s(E+) must be {p}-divisible, its free coefficient is {free}: {}",
                    if ok { "divisible" } else { "contradiction" }
                ));
                ok
            } else {
                let v = is_divisible(&diff, n, &torsion);
                match &v.witness {
                    Some(w) => trace.push(format!("n even: {n}·({w}) = P(E+) - P(E-)")),
                    None => trace.push(format!("n even: P(E+) - P(E-) is not {n}-divisible")),
                }
                v.divisible
            }
        }
    };
    Ok(CoverDecision {
        arrangement: ty,
        n,
        exists,
        trace,
    })
}

fn smallest_prime_factor(n: i64) -> i64 {
    (2..)
        .take_while(|p| p * p <= n)
        .find(|p| n % p == 0)
        .unwrap_or(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NsVerdict {
    Equivalent,
    /// First spanning generator (or the square) on which the two sides differ.
    NotEquivalent {
        against: String,
        lhs: Rational,
        rhs: Rational,
    },
    /// The spanning set does not have full rank, so agreement proves nothing.
    Inconclusive {
        gram_rank: usize,
        ns_rank: usize,
    },
}

impl NsVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, NsVerdict::Equivalent)
    }
}

impl std::fmt::Display for NsVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NsVerdict::Equivalent => write!(f, "equivalent"),
            NsVerdict::NotEquivalent { against, lhs, rhs } => write!(
                f,
                "not equivalent: ·{against} gives {} vs {}",
                format_rational(lhs),
                format_rational(rhs)
            ),
            NsVerdict::Inconclusive { gram_rank, ns_rank } => write!(
                f,
                "inconclusive: spanning set has rank {gram_rank} < {ns_rank}"
            ),
        }
    }
}

/// Tests `lhs ~ rhs` by comparing intersections with every generator of the
/// table's spanning set, and the two self-intersections.
pub fn verify_ns_relation(
    table: &IntersectionTable,
    lhs: &FormalClass,
    rhs: &FormalClass,
) -> Result<NsVerdict> {
    let span = table.spanning_set();
    let cfg = table.config();
    let ns_rank = cfg.ns_rank.unwrap_or_else(|| cfg.shioda_tate_rank());
    let mut gram = QMatrix::zeros(span.len(), span.len());
    for (i, a) in span.iter().enumerate() {
        for (j, b) in span.iter().enumerate() {
            gram[(i, j)] = table.pair(a, b)?;
        }
    }
    let gram_rank = gram.rank();
    if gram_rank < ns_rank {
        return Ok(NsVerdict::Inconclusive { gram_rank, ns_rank });
    }
    for g in &span {
        let gc = FormalClass::symbol(g.clone());
        let l = table.intersect(lhs, &gc)?;
        let r = table.intersect(rhs, &gc)?;
        if l != r {
            return Ok(NsVerdict::NotEquivalent {
                against: symbol_label(g),
                lhs: l,
                rhs: r,
            });
        }
    }
    let l = table.intersect(lhs, lhs)?;
    let r = table.intersect(rhs, rhs)?;
    if l != r {
        return Ok(NsVerdict::NotEquivalent {
            against: "itself".into(),
            lhs: l,
            rhs: r,
        });
    }
    Ok(NsVerdict::Equivalent)
}

fn symbol_label(s: &Symbol) -> String {
    FormalClass::symbol(s.clone()).to_string()
}

/// [`cover_decision`] for every `n` in `lo..=hi`.
pub fn cover_sweep(
    table: &IntersectionTable,
    ty: ArrangementType,
    lo: i64,
    hi: i64,
) -> Result<Vec<CoverDecision>> {
    (lo..=hi).map(|n| cover_decision(table, ty, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{type_i_rhs, type_ii_lhs, type_ii_rhs};

    fn klein() -> AbelianGroup {
        AbelianGroup::new([2, 2])
    }

    #[test]
    fn divisibility_examples() {
        let t = klein();
        let q = MWPoint::new(4, t.zero());
        let v = is_divisible(&q, 4, &t);
        assert!(v.divisible);
        assert_eq!(v.witness.unwrap(), MWPoint::new(1, t.zero()));
        assert!(!is_divisible(&q, 6, &t).divisible);
        let z = MWPoint::new(0, t.zero());
        assert!(is_divisible(&z, 7, &t).divisible);
        // a 2-torsion point is not 2-divisible in (Z/2)^2 but is 3-divisible
        let tau = MWPoint::new(0, t.element([1, 0]));
        assert!(!is_divisible(&tau, 2, &t).divisible);
        let w = is_divisible(&tau, 3, &t).witness.unwrap();
        assert_eq!(mul_point(&w, 3, &t), tau);
    }

    #[test]
    fn divisibility_in_cyclic_factors() {
        let t = AbelianGroup::new([12]);
        let q = MWPoint::new(6, t.element([9]));
        let w = is_divisible(&q, 3, &t).witness.unwrap();
        assert_eq!(mul_point(&w, 3, &t), q);
        assert!(!is_divisible(&MWPoint::new(6, t.element([2])), 3, &t).divisible);
    }

    #[test]
    fn cover_table() {
        for n in [3, 7, 9] {
            assert!(d2n_cover_exists(ArrangementType::TypeI, n).unwrap().exists);
        }
        assert!(d2n_cover_exists(ArrangementType::TypeII, 4).unwrap().exists);
        for n in [3, 5, 6, 8, 12] {
            assert!(
                !d2n_cover_exists(ArrangementType::TypeII, n).unwrap().exists,
                "n = {n}"
            );
        }
        assert!(matches!(
            d2n_cover_exists(ArrangementType::TypeII, 2),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn cover_trace_mentions_difference() {
        let d = d2n_cover_exists(ArrangementType::TypeII, 4).unwrap();
        assert!(d
            .trace
            .iter()
            .any(|l| l.contains("P(E+) - P(E-) = 4·P_o + 0")));
    }

    #[test]
    fn relations() {
        let t1 = bundled_table(ArrangementType::TypeI).unwrap();
        let e = FormalClass::symbol(Symbol::curve(E_PLUS));
        assert_eq!(
            verify_ns_relation(&t1, &e, &type_i_rhs()).unwrap(),
            NsVerdict::Equivalent
        );
        assert_eq!(
            verify_ns_relation(&t1, &e, &e).unwrap(),
            NsVerdict::Equivalent
        );
        let t2 = bundled_table(ArrangementType::TypeII).unwrap();
        assert!(verify_ns_relation(&t2, &type_ii_lhs(), &type_ii_rhs())
            .unwrap()
            .is_equivalent());
        assert!(matches!(
            verify_ns_relation(&t2, &e, &type_i_rhs()).unwrap(),
            NsVerdict::NotEquivalent { .. }
        ));
    }

    #[test]
    fn inconclusive_without_generator() {
        let mut doc = crate::scenario::bundled(ArrangementType::TypeI);
        doc.surface.sections.clear();
        for d in &mut doc.divisors {
            d.dot_sections.clear();
        }
        let t = doc.table().unwrap();
        let e = FormalClass::symbol(Symbol::curve(E_PLUS));
        assert_eq!(
            verify_ns_relation(&t, &e, &type_i_rhs()).unwrap(),
            NsVerdict::Inconclusive {
                gram_rank: 9,
                ns_rank: 10
            }
        );
    }
}

//! The bundled surface `S_{Q,z_o}`: fibers `I0*` at infinity and `I2` at
//! 1, 2, 3, free generator `s_o`, torsion `(Z/2)^2`, and the two curves
//! `E+`, `E-` for each arrangement type.

use serde::{Deserialize, Serialize};

use crate::config::ConfigDocument;
use crate::error::Result;
use crate::nslattice::{FormalClass, IntersectionTable, Symbol};

pub const GENERATOR: &str = "s_o";
pub const E_PLUS: &str = "E+";
pub const E_MINUS: &str = "E-";
pub const TYPE_I_JSON: &str = include_str!("../data/sqz_type1.json");
pub const TYPE_II_JSON: &str = include_str!("../data/sqz_type2.json");

/// Whether the three tangency points are collinear (I) or not (II).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArrangementType {
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "II")]
    TypeII,
}

impl std::fmt::Display for ArrangementType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ArrangementType::TypeI => "Type I",
            ArrangementType::TypeII => "Type II",
        })
    }
}

impl std::str::FromStr for ArrangementType {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s
            .trim()
            .to_ascii_uppercase()
            .trim_start_matches("TYPE")
            .trim()
        {
            "I" | "1" => Ok(ArrangementType::TypeI),
            "II" | "2" => Ok(ArrangementType::TypeII),
            _ => Err(crate::Error::Parse(format!("arrangement type `{s}`"))),
        }
    }
}

pub fn bundled(ty: ArrangementType) -> ConfigDocument {
    let text = match ty {
        ArrangementType::TypeI => TYPE_I_JSON,
        ArrangementType::TypeII => TYPE_II_JSON,
    };
    ConfigDocument::parse(text).expect("bundled config parses")
}

pub fn bundled_table(ty: ArrangementType) -> Result<IntersectionTable> {
    bundled(ty).table()
}

fn theta(fiber: &str, i: usize) -> FormalClass {
    FormalClass::symbol(Symbol::theta(fiber, i))
}

fn sum(parts: &[FormalClass]) -> FormalClass {
    parts.iter().fold(FormalClass::zero(), |acc, p| acc.plus(p))
}

/// `3O + 3F - 2Θ_{∞,1} - 2Θ_{∞,2} - 2Θ_{∞,3} - 3Θ_{∞,4}`, the class of `E+`
/// for a Type I arrangement.
pub fn type_i_rhs() -> FormalClass {
    use crate::exactalg::rat;
    let mut c = FormalClass::term(rat(3), Symbol::O);
    c.add_term(rat(3), Symbol::F);
    for i in 1..=3 {
        c.add_term(rat(-2), Symbol::theta("inf", i));
    }
    c.add_term(rat(-3), Symbol::theta("inf", 4));
    c
}

/// `E+ + 2(Θ_{∞,2} + Θ_{∞,3} + Θ_{1,1}) - E-`.
pub fn type_ii_lhs() -> FormalClass {
    use crate::exactalg::rat;
    FormalClass::symbol(Symbol::curve(E_PLUS))
        .plus(&sum(&[theta("inf", 2), theta("inf", 3), theta("1", 1)]).scaled(&rat(2)))
        .minus(&FormalClass::symbol(Symbol::curve(E_MINUS)))
}

/// `4(s_o - O - F + Θ_{∞,1} + Θ_{∞,2} + Θ_{∞,3} + Θ_{∞,4} + Θ_{1,1})`.
pub fn type_ii_rhs() -> FormalClass {
    use crate::exactalg::rat;
    let mut inner = FormalClass::symbol(Symbol::curve(GENERATOR));
    inner.add_term(rat(-1), Symbol::O);
    inner.add_term(rat(-1), Symbol::F);
    let inner = inner.plus(&sum(&[
        theta("inf", 1),
        theta("inf", 2),
        theta("inf", 3),
        theta("inf", 4),
        theta("1", 1),
    ]));
    inner.scaled(&rat(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn bundled_configs_build() {
        for ty in [ArrangementType::TypeI, ArrangementType::TypeII] {
            let t = bundled_table(ty).unwrap();
            assert_eq!(t.fibers().len(), 4);
            assert_eq!(t.height(GENERATOR).unwrap(), crate::exactalg::frac(1, 2));
        }
    }

    #[test]
    fn type_ii_relation_pairings() {
        let t = bundled_table(ArrangementType::TypeII).unwrap();
        let (l, r) = (type_ii_lhs(), type_ii_rhs());
        for g in t.spanning_set() {
            let g = FormalClass::symbol(g);
            assert_eq!(t.intersect(&l, &g).unwrap(), t.intersect(&r, &g).unwrap());
        }
        assert_eq!(t.intersect(&l, &l).unwrap(), t.intersect(&r, &r).unwrap());
    }

    #[test]
    fn type_i_rhs_square() {
        let t = bundled_table(ArrangementType::TypeI).unwrap();
        let r = type_i_rhs();
        assert_eq!(t.intersect(&r, &r).unwrap(), rat(3));
    }

    #[test]
    fn parse_type() {
        assert_eq!(
            "II".parse::<ArrangementType>().unwrap(),
            ArrangementType::TypeII
        );
        assert_eq!(
            "type i".parse::<ArrangementType>().unwrap(),
            ArrangementType::TypeI
        );
        assert!("III".parse::<ArrangementType>().is_err());
    }
}

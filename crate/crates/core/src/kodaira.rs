//! Catalog of reducible Kodaira fibers.
//!
//! Component labels: `Θ₀` always meets the zero section.
//!
//! * `I_n`: the cycle `Θ₀, Θ₁, …, Θ_{n-1}` in order.
//! * `I*_n`: `Θ₁, Θ₂, Θ₃` are the non-identity simple components and
//!   `Θ₄, …, Θ_{4+n}` the multiplicity-2 chain; `Θ₀, Θ₁` hang off `Θ₄` and
//!   `Θ₂, Θ₃` off `Θ_{4+n}`. For `I*₀` this makes `Θ₄` the central component.
//! * `III`: two components meeting with multiplicity 2.
//! * `IV`: three components pairwise meeting once.
//! * `IV*`: centre `Θ₆` (mult. 3) with arms `Θ₀–Θ₃`, `Θ₁–Θ₄`, `Θ₂–Θ₅`.
//! * `III*`: chain `Θ₀, Θ₂, Θ₃, Θ₄, Θ₅, Θ₆, Θ₁` with `Θ₇` attached to `Θ₄`.
//! * `II*`: chain `Θ₀, Θ₁, …, Θ₇` with `Θ₈` attached to `Θ₅`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, smith_normal_form, QMatrix, Rational};
use crate::group::{AbelianGroup, GroupElement};

/// `(i, j, Θᵢ·Θⱼ)`.
type Edge = (usize, usize, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberKind {
    /// `I_n`, `n ≥ 2`.
    I(u32),
    /// `I*_n`, `n ≥ 0`.
    IStar(u32),
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl FiberKind {
    pub fn i(n: u32) -> Result<Self> {
        if n < 2 {
            Err(Error::Irreducible(format!("I{n}")))
        } else {
            Ok(FiberKind::I(n))
        }
    }

    pub fn euler_number(self) -> u32 {
        match self {
            FiberKind::I(n) => n,
            FiberKind::IStar(n) => n + 6,
            FiberKind::III => 3,
            FiberKind::IV => 4,
            FiberKind::IVStar => 8,
            FiberKind::IIIStar => 9,
            FiberKind::IIStar => 10,
        }
    }

    /// Number of irreducible components `m_v`.
    pub fn component_count(self) -> usize {
        match self {
            FiberKind::I(n) => n as usize,
            FiberKind::IStar(n) => n as usize + 5,
            FiberKind::III => 2,
            FiberKind::IV => 3,
            FiberKind::IVStar => 7,
            FiberKind::IIIStar => 8,
            FiberKind::IIStar => 9,
        }
    }

    /// Multiplicities and intersecting pairs `(i, j, Θᵢ·Θⱼ)` for `i ≠ j`.
    fn dual_graph(self) -> Result<(Vec<u32>, Vec<Edge>)> {
        Ok(match self {
            FiberKind::I(n) if n < 2 => return Err(Error::Irreducible(self.to_string())),
            FiberKind::I(2) => (vec![1, 1], vec![(0, 1, 2)]),
            FiberKind::I(n) => {
                let n = n as usize;
                (vec![1; n], (0..n).map(|i| (i, (i + 1) % n, 1)).collect())
            }
            FiberKind::IStar(n) => {
                let n = n as usize;
                let mut mult = vec![1, 1, 1, 1];
                mult.extend(std::iter::repeat_n(2, n + 1));
                let first = 4;
                let last = 4 + n;
                let mut edges = vec![(0, first, 1), (1, first, 1), (2, last, 1), (3, last, 1)];
                edges.extend((first..last).map(|i| (i, i + 1, 1)));
                (mult, edges)
            }
            FiberKind::III => (vec![1, 1], vec![(0, 1, 2)]),
            FiberKind::IV => (vec![1, 1, 1], vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)]),
            FiberKind::IVStar => (
                vec![1, 1, 1, 2, 2, 2, 3],
                vec![
                    (0, 3, 1),
                    (1, 4, 1),
                    (2, 5, 1),
                    (3, 6, 1),
                    (4, 6, 1),
                    (5, 6, 1),
                ],
            ),
            FiberKind::IIIStar => (
                vec![1, 1, 2, 3, 4, 3, 2, 2],
                vec![
                    (0, 2, 1),
                    (2, 3, 1),
                    (3, 4, 1),
                    (4, 5, 1),
                    (5, 6, 1),
                    (6, 1, 1),
                    (4, 7, 1),
                ],
            ),
            FiberKind::IIStar => (
                vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
                vec![
                    (0, 1, 1),
                    (1, 2, 1),
                    (2, 3, 1),
                    (3, 4, 1),
                    (4, 5, 1),
                    (5, 6, 1),
                    (6, 7, 1),
                    (5, 8, 1),
                ],
            ),
        })
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::I(n) => write!(f, "I{n}"),
            FiberKind::IStar(n) => write!(f, "I{n}*"),
            FiberKind::III => write!(f, "III"),
            FiberKind::IV => write!(f, "IV"),
            FiberKind::IVStar => write!(f, "IV*"),
            FiberKind::IIIStar => write!(f, "III*"),
            FiberKind::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for FiberKind {
    type Err = Error;

    /// Accepts `I2`, `I_2`, `I0*`, `I*0`, `I_0^*`, `III`, `IV`, `IV*`, `III*`,
    /// `II*`, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '_' | '^' | ' '))
            .collect::<String>()
            .to_ascii_uppercase();
        match t.as_str() {
            "III" => return Ok(FiberKind::III),
            "IV" => return Ok(FiberKind::IV),
            "IV*" => return Ok(FiberKind::IVStar),
            "III*" => return Ok(FiberKind::IIIStar),
            "II*" => return Ok(FiberKind::IIStar),
            "II" | "I" | "I*" => return Err(Error::Irreducible(s.trim().to_string())),
            _ => {}
        }
        let rest = t
            .strip_prefix('I')
            .ok_or_else(|| Error::UnknownKind(s.to_string()))?;
        let (digits, star) = if let Some(d) = rest.strip_prefix('*') {
            (d, true)
        } else if let Some(d) = rest.strip_suffix('*') {
            (d, true)
        } else {
            (rest, false)
        };
        let n: u32 = digits
            .parse()
            .map_err(|_| Error::UnknownKind(s.to_string()))?;
        if star {
            Ok(FiberKind::IStar(n))
        } else {
            FiberKind::i(n)
        }
    }
}

impl Serialize for FiberKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FiberKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Intersection data and component group of one reducible fiber type.
#[derive(Clone, Debug)]
pub struct ReducibleFiberData {
    pub kind: FiberKind,
    /// Multiplicity `a_{v,i}` of each component, `i = 0..m_v`.
    pub multiplicities: Vec<u32>,
    /// `(Θᵢ·Θⱼ)` over all components including `Θ₀`.
    pub full_matrix: QMatrix,
    /// `A_v`: the intersection matrix of `Θ₁ … Θ_{m_v-1}`.
    pub a: QMatrix,
    pub a_inv: QMatrix,
    /// Indices `i ≥ 1` with `a_{v,i} = 1`.
    pub simple_components: Vec<usize>,
    pub component_group: AbelianGroup,
    /// Class of `-A_v⁻¹ eᵢ` for each component (index 0 is the zero class).
    pub dual_class_map: Vec<GroupElement>,
    pub euler_number: u32,
    // Rows of the Smith left transform of -A_v that land on nontrivial factors.
    coker_rows: Vec<Vec<BigInt>>,
}

impl ReducibleFiberData {
    pub fn component_count(&self) -> usize {
        self.multiplicities.len()
    }

    /// Rank of the root lattice, `m_v - 1`.
    pub fn lattice_rank(&self) -> usize {
        self.multiplicities.len() - 1
    }

    pub fn is_simple(&self, index: usize) -> bool {
        self.multiplicities.get(index) == Some(&1)
    }

    /// Class of an integer vector `w` in `Z^r / (-A_v) Z^r`.
    pub fn coker_class(&self, w: &[BigInt]) -> GroupElement {
        let coords = self.coker_rows.iter().map(|row| {
            let x: BigInt = row.iter().zip(w).map(|(a, b)| a * b).sum();
            x.to_i64().expect("small group coordinate")
        });
        self.component_group.element(coords)
    }

    /// Class of a vector of the dual lattice `R_v^∨ ⊂ R_v ⊗ Q`, written in the
    /// basis `Θ₁ … Θ_{m_v-1}`.
    pub fn reduce_dual_vector(&self, x: &[Rational]) -> Result<GroupElement> {
        if x.len() != self.lattice_rank() {
            return Err(Error::Dimension(format!(
                "dual vector of length {} for fiber {} (expected {})",
                x.len(),
                self.kind,
                self.lattice_rank()
            )));
        }
        // x ∈ R^∨ iff x·Θⱼ ∈ Z for all j, i.e. A x integral; the map
        // x ↦ -A x identifies R^∨/R with coker(-A).
        let w = self.a.neg().mul_vec(x)?;
        if !w.iter().all(|r| r.is_integer()) {
            let shown: Vec<String> = x.iter().map(format_rational).collect();
            return Err(Error::NotInDualLattice(format!("({})", shown.join(", "))));
        }
        let w: Vec<BigInt> = w.into_iter().map(|r| r.to_integer()).collect();
        Ok(self.coker_class(&w))
    }

    pub fn dual_class(&self, index: usize) -> Result<GroupElement> {
        self.dual_class_map
            .get(index)
            .cloned()
            .ok_or_else(|| Error::ComponentOutOfRange {
                kind: self.kind.to_string(),
                index,
                count: self.component_count(),
            })
    }

    /// The simple component whose dual class is `class`, if any.
    pub fn simple_component_of_class(&self, class: &GroupElement) -> Option<usize> {
        (0..self.component_count()).find(|&i| self.is_simple(i) && self.dual_class_map[i] == *class)
    }
}

pub fn fiber_data(kind: FiberKind) -> Result<ReducibleFiberData> {
    let (multiplicities, edges) = kind.dual_graph()?;
    let m = multiplicities.len();
    let mut full = vec![vec![0i64; m]; m];
    for (i, row) in full.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(i, j, w) in &edges {
        full[i][j] += w;
        full[j][i] += w;
    }
    let full_matrix = QMatrix::from_i64_rows(&full);
    let idx: Vec<usize> = (1..m).collect();
    let a = full_matrix.submatrix(&idx, &idx);
    let a_inv = a.inverse()?;

    let gram = a.neg().to_int().expect("integral intersection matrix");
    let snf = smith_normal_form(&gram);
    let mut factors = Vec::new();
    let mut coker_rows = Vec::new();
    for (i, d) in snf.invariant_factors.iter().enumerate() {
        let d = d.to_i64().expect("small invariant factor");
        if d > 1 {
            factors.push(d);
            coker_rows.push((0..snf.u.cols()).map(|j| snf.u[(i, j)].clone()).collect());
        }
    }
    let component_group = AbelianGroup::new(factors);

    let r = m - 1;
    let mut data = ReducibleFiberData {
        kind,
        simple_components: (1..m).filter(|&i| multiplicities[i] == 1).collect(),
        multiplicities,
        full_matrix,
        a,
        a_inv,
        component_group,
        dual_class_map: Vec::new(),
        euler_number: kind.euler_number(),
        coker_rows,
    };
    let mut classes = vec![data.component_group.zero()];
    for i in 1..m {
        let e: Vec<BigInt> = (0..r)
            .map(|j| BigInt::from(i64::from(j + 1 == i)))
            .collect();
        classes.push(data.coker_class(&e));
    }
    data.dual_class_map = classes;
    Ok(data)
}

pub fn component_group(kind: FiberKind) -> Result<AbelianGroup> {
    Ok(fiber_data(kind)?.component_group)
}

pub fn dual_class(kind: FiberKind, component_index: usize) -> Result<GroupElement> {
    fiber_data(kind)?.dual_class(component_index)
}

pub fn reduce_dual_vector(kind: FiberKind, x: &[Rational]) -> Result<GroupElement> {
    fiber_data(kind)?.reduce_dual_vector(x)
}

/// `|det A_v|`, the order of the discriminant group.
pub fn discriminant(kind: FiberKind) -> Result<i64> {
    let d = fiber_data(kind)?.a.det()?;
    Ok(d.to_integer().abs().to_i64().expect("small"))
}

/// Every catalog entry up to the given index bound, for exhaustive checks.
pub fn catalog(max_n: u32) -> Vec<FiberKind> {
    let mut out: Vec<FiberKind> = (2..=max_n).map(FiberKind::I).collect();
    out.extend((0..=max_n).map(FiberKind::IStar));
    out.extend([
        FiberKind::III,
        FiberKind::IV,
        FiberKind::IVStar,
        FiberKind::IIIStar,
        FiberKind::IIStar,
    ]);
    out
}

/// `Σ_j a_j (Θᵢ·Θⱼ)` for every component `i`; all zero for a valid fiber.
pub fn fiber_relation_defect(data: &ReducibleFiberData) -> Vec<Rational> {
    let m = data.component_count();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    &data.full_matrix[(i, j)]
                        * Rational::from_integer(data.multiplicities[j].into())
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{frac, rat};
    use num_traits::Zero;

    #[test]
    fn parse_kinds() {
        assert_eq!("I0*".parse::<FiberKind>().unwrap(), FiberKind::IStar(0));
        assert_eq!("I_0^*".parse::<FiberKind>().unwrap(), FiberKind::IStar(0));
        assert_eq!("i*3".parse::<FiberKind>().unwrap(), FiberKind::IStar(3));
        assert_eq!("I2".parse::<FiberKind>().unwrap(), FiberKind::I(2));
        assert_eq!("II*".parse::<FiberKind>().unwrap(), FiberKind::IIStar);
        assert_eq!("IV".parse::<FiberKind>().unwrap(), FiberKind::IV);
        assert!(matches!(
            "I1".parse::<FiberKind>(),
            Err(Error::Irreducible(_))
        ));
        assert!(matches!(
            "I0".parse::<FiberKind>(),
            Err(Error::Irreducible(_))
        ));
        assert!(matches!(
            "II".parse::<FiberKind>(),
            Err(Error::Irreducible(_))
        ));
        assert!(matches!(
            "V".parse::<FiberKind>(),
            Err(Error::UnknownKind(_))
        ));
        for k in catalog(6) {
            assert_eq!(k.to_string().parse::<FiberKind>().unwrap(), k);
        }
    }

    #[test]
    fn i2_data() {
        let d = fiber_data(FiberKind::I(2)).unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.a, QMatrix::from_i64_rows(&[vec![-2]]));
        assert_eq!(d.a_inv[(0, 0)], frac(-1, 2));
        assert_eq!(d.component_group, AbelianGroup::new([2]));
        assert_eq!(d.dual_class(1).unwrap(), d.component_group.element([1]));
        let shifted = d.reduce_dual_vector(&[frac(3, 2)]).unwrap();
        assert_eq!(shifted, d.component_group.element([1]));
    }

    #[test]
    fn i3_inverse() {
        let d = fiber_data(FiberKind::I(3)).unwrap();
        assert_eq!(d.a, QMatrix::from_i64_rows(&[vec![-2, 1], vec![1, -2]]));
        let expected = QMatrix::from_rows(vec![
            vec![frac(-2, 3), frac(-1, 3)],
            vec![frac(-1, 3), frac(-2, 3)],
        ])
        .unwrap();
        assert_eq!(d.a_inv, expected);
    }

    #[test]
    fn identity_component_is_zero_and_range_checked() {
        let d = fiber_data(FiberKind::IStar(0)).unwrap();
        assert!(d.dual_class(0).unwrap().is_zero());
        assert!(matches!(
            d.dual_class(5),
            Err(Error::ComponentOutOfRange { .. })
        ));
        assert_eq!(d.simple_components, vec![1, 2, 3]);
    }

    #[test]
    fn not_in_dual_lattice() {
        let d = fiber_data(FiberKind::IStar(0)).unwrap();
        let x = vec![frac(1, 3), rat(0), rat(0), rat(0)];
        assert!(matches!(
            d.reduce_dual_vector(&x),
            Err(Error::NotInDualLattice(_))
        ));
        assert!(d.reduce_dual_vector(&[rat(0)]).is_err());
    }

    #[test]
    fn fiber_relation_holds_for_catalog() {
        for k in catalog(9) {
            let d = fiber_data(k).unwrap();
            assert!(
                fiber_relation_defect(&d).iter().all(Zero::is_zero),
                "fiber relation fails for {k}"
            );
            assert!(d.a.is_negative_definite(), "{k}");
            assert_eq!(d.multiplicities[0], 1);
        }
    }

    #[test]
    fn euler_numbers_and_groups() {
        assert_eq!(
            component_group(FiberKind::IIStar).unwrap(),
            AbelianGroup::trivial()
        );
        assert_eq!(
            component_group(FiberKind::IIIStar).unwrap(),
            AbelianGroup::new([2])
        );
        assert_eq!(
            component_group(FiberKind::IVStar).unwrap(),
            AbelianGroup::new([3])
        );
        assert_eq!(
            component_group(FiberKind::IV).unwrap(),
            AbelianGroup::new([3])
        );
        assert_eq!(
            component_group(FiberKind::III).unwrap(),
            AbelianGroup::new([2])
        );
        assert_eq!(
            component_group(FiberKind::IStar(1)).unwrap(),
            AbelianGroup::new([4])
        );
        assert_eq!(
            component_group(FiberKind::IStar(2)).unwrap(),
            AbelianGroup::new([2, 2])
        );
        assert_eq!(
            component_group(FiberKind::I(7)).unwrap(),
            AbelianGroup::new([7])
        );
        assert_eq!(FiberKind::IStar(0).euler_number(), 6);
        assert_eq!(FiberKind::IIStar.euler_number(), 10);
    }

    #[test]
    fn simple_components_have_distinct_classes() {
        for k in catalog(8) {
            let d = fiber_data(k).unwrap();
            let simple: Vec<usize> = std::iter::once(0)
                .chain(d.simple_components.iter().copied())
                .collect();
            assert_eq!(simple.len() as i64, d.component_group.order(), "{k}");
            for (x, &i) in simple.iter().enumerate() {
                for &j in &simple[x + 1..] {
                    assert_ne!(d.dual_class_map[i], d.dual_class_map[j], "{k}: {i} vs {j}");
                }
                assert_eq!(d.simple_component_of_class(&d.dual_class_map[i]), Some(i));
            }
        }
    }
}

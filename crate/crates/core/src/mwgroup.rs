//! Torsion resolution and the full image `P_D = n·P_o + P_τ` of a divisor.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rat, smith_normal_form, IntMatrix, QVector, Rational};
use crate::group::{AbelianGroup, GroupElement};
use crate::nslattice::{FreeCoefficient, IntersectionTable, SurfaceConfig};

/// One element of each reducible fiber's component group, in table order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DualClassTuple(pub Vec<GroupElement>);

impl DualClassTuple {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GroupElement::is_zero)
    }
}

impl fmt::Display for DualClassTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Component groups of every reducible fiber, with tuple arithmetic.
#[derive(Clone, Debug)]
pub struct FiberGroups(Vec<AbelianGroup>);

impl FiberGroups {
    pub fn of(table: &IntersectionTable) -> Self {
        FiberGroups(
            table
                .fibers()
                .iter()
                .map(|f| f.data.component_group.clone())
                .collect(),
        )
    }

    pub fn groups(&self) -> &[AbelianGroup] {
        &self.0
    }

    pub fn zero(&self) -> DualClassTuple {
        DualClassTuple(self.0.iter().map(AbelianGroup::zero).collect())
    }

    pub fn add(&self, a: &DualClassTuple, b: &DualClassTuple) -> DualClassTuple {
        DualClassTuple(
            self.0
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(g, (x, y))| g.add(x, y))
                .collect(),
        )
    }

    pub fn scale(&self, k: i64, a: &DualClassTuple) -> DualClassTuple {
        DualClassTuple(
            self.0
                .iter()
                .zip(&a.0)
                .map(|(g, x)| g.scale(k, x))
                .collect(),
        )
    }

    pub fn sub(&self, a: &DualClassTuple, b: &DualClassTuple) -> DualClassTuple {
        self.add(a, &self.scale(-1, b))
    }

    pub fn ambient(&self) -> AbelianGroup {
        AbelianGroup::direct_sum(&self.0)
    }

    fn flatten(&self, t: &DualClassTuple) -> Vec<i64> {
        t.0.iter().flat_map(|e| e.0.iter().copied()).collect()
    }
}

/// `γ_NS(D) = (-A_v⁻¹ c(v, D))_v`.
pub fn gamma_ns(table: &IntersectionTable, name: &str) -> Result<Vec<QVector>> {
    let cs = table.c_vectors(name)?;
    table
        .fibers()
        .iter()
        .zip(&cs)
        .map(|(f, c)| Ok(f.data.a_inv.mul_vec(c)?.into_iter().map(|x| -x).collect()))
        .collect()
}

/// `γ̄_NS(D)`: [`gamma_ns`] reduced into each `R_v^∨/R_v`.
pub fn gamma_bar(table: &IntersectionTable, name: &str) -> Result<DualClassTuple> {
    let vs = gamma_ns(table, name)?;
    table
        .fibers()
        .iter()
        .zip(&vs)
        .map(|(f, v)| f.data.reduce_dual_vector(v))
        .collect::<Result<Vec<_>>>()
        .map(DualClassTuple)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberConstraint {
    pub fiber: String,
    /// `A_v⁻¹ c(v, D)` is integral, so `s(D)` meets the identity component.
    pub identity_component_forced: bool,
}

pub fn integrality_constraint(
    table: &IntersectionTable,
    name: &str,
) -> Result<Vec<FiberConstraint>> {
    let vs = gamma_ns(table, name)?;
    Ok(table
        .fibers()
        .iter()
        .zip(vs)
        .map(|(f, v)| FiberConstraint {
            fiber: f.id.clone(),
            identity_component_forced: v.iter().all(Rational::is_integer),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionEntry {
    pub name: String,
    pub class: DualClassTuple,
    pub coords: GroupElement,
}

/// The torsion subgroup of Mordell–Weil, embedded in `⊕ R_v^∨/R_v` through the
/// classes of the listed torsion sections.
#[derive(Clone, Debug)]
pub struct TorsionGroup {
    pub group: AbelianGroup,
    pub entries: Vec<TorsionEntry>,
    fiber_groups: FiberGroups,
}

impl TorsionGroup {
    pub fn from_table(table: &IntersectionTable) -> Result<Self> {
        let fg = FiberGroups::of(table);
        let mut classes: Vec<(String, DualClassTuple)> = Vec::new();
        for s in &table.config().torsion_table {
            let class = gamma_bar(table, &s.name)?;
            if class.is_zero() {
                return Err(Error::Inconsistent(format!(
                    "torsion section `{}` has the class of O",
                    s.name
                )));
            }
            if let Some((other, _)) = classes.iter().find(|(_, c)| *c == class) {
                return Err(Error::Inconsistent(format!(
                    "torsion sections `{other}` and `{}` share a class",
                    s.name
                )));
            }
            classes.push((s.name.clone(), class));
        }
        for (i, (a, ca)) in classes.iter().enumerate() {
            for (b, cb) in &classes[i..] {
                let sum = fg.add(ca, cb);
                if !sum.is_zero() && !classes.iter().any(|(_, c)| *c == sum) {
                    return Err(Error::Inconsistent(format!(
                        "torsion table not closed: class of {a} + {b} is missing"
                    )));
                }
            }
        }
        let (group, coords) = subgroup_structure(
            &fg,
            &classes.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>(),
        );
        if group.order() != classes.len() as i64 + 1 {
            return Err(Error::Inconsistent("torsion group order mismatch".into()));
        }
        let entries = classes
            .into_iter()
            .zip(coords)
            .map(|((name, class), coords)| TorsionEntry {
                name,
                class,
                coords,
            })
            .collect();
        Ok(Self {
            group,
            entries,
            fiber_groups: fg,
        })
    }

    pub fn lookup(&self, class: &DualClassTuple) -> Option<&TorsionEntry> {
        self.entries.iter().find(|e| e.class == *class)
    }

    pub fn entry(&self, name: &str) -> Option<&TorsionEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn fiber_groups(&self) -> &FiberGroups {
        &self.fiber_groups
    }
}

/// Abstract structure of the subgroup of the ambient component group
/// generated by `gens`, and the coordinates of each generator in it.
fn subgroup_structure(
    fg: &FiberGroups,
    gens: &[DualClassTuple],
) -> (AbelianGroup, Vec<GroupElement>) {
    let moduli: Vec<i64> = fg
        .groups()
        .iter()
        .flat_map(|g| g.invariant_factors().iter().copied())
        .collect();
    let k = gens.len();
    let r = moduli.len();
    if k == 0 {
        return (AbelianGroup::trivial(), Vec::new());
    }
    // Relations among generators: kernel of [g₁ … g_k | diag(moduli)].
    let mut m = IntMatrix::zeros(r.max(1), k + r);
    for (j, g) in gens.iter().enumerate() {
        for (i, x) in fg.flatten(g).into_iter().enumerate() {
            m[(i, j)] = BigInt::from(x);
        }
    }
    for (i, &d) in moduli.iter().enumerate() {
        m[(i, k + i)] = BigInt::from(d);
    }
    let snf = smith_normal_form(&m);
    let rank = snf.rank();
    let kernel_cols: Vec<usize> = (rank..k + r).collect();
    let mut rel = IntMatrix::zeros(k, kernel_cols.len().max(1));
    for (c, &j) in kernel_cols.iter().enumerate() {
        for i in 0..k {
            rel[(i, c)] = snf.v[(i, j)].clone();
        }
    }
    let snf2 = smith_normal_form(&rel);
    let mut factors = Vec::new();
    let mut rows = Vec::new();
    for (i, d) in snf2.invariant_factors.iter().enumerate() {
        let d = d.abs().to_i64().expect("small factor");
        assert!(d != 0, "torsion subgroup must be finite");
        if d > 1 {
            factors.push(d);
            rows.push(i);
        }
    }
    let group = AbelianGroup::new(factors);
    let coords = (0..k)
        .map(|j| {
            group.element(
                rows.iter()
                    .map(|&i| snf2.u[(i, j)].to_i64().expect("small")),
            )
        })
        .collect();
    (group, coords)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionResolution {
    /// `γ̄(D) - n·γ̄(P_o)`.
    pub class: DualClassTuple,
    /// `None` for the zero torsion point.
    pub section: Option<String>,
    pub coords: GroupElement,
}

/// The torsion section `s_τ` with `γ̄(s_τ) = γ̄(D) - n·γ̄(P_o)`.
pub fn resolve_torsion(
    table: &IntersectionTable,
    name: &str,
    n: &BigInt,
    generator: &str,
) -> Result<TorsionResolution> {
    let torsion = TorsionGroup::from_table(table)?;
    resolve_with(table, &torsion, name, n, generator)
}

fn resolve_with(
    table: &IntersectionTable,
    torsion: &TorsionGroup,
    name: &str,
    n: &BigInt,
    generator: &str,
) -> Result<TorsionResolution> {
    let fg = torsion.fiber_groups();
    let exp = fg.ambient().exponent().max(1);
    let n_red = (n % BigInt::from(exp)).to_i64().expect("reduced");
    let class = fg.sub(
        &gamma_bar(table, name)?,
        &fg.scale(n_red, &gamma_bar(table, generator)?),
    );
    if class.is_zero() {
        return Ok(TorsionResolution {
            class,
            section: None,
            coords: torsion.group.zero(),
        });
    }
    match torsion.lookup(&class) {
        Some(e) => Ok(TorsionResolution {
            class,
            section: Some(e.name.clone()),
            coords: e.coords.clone(),
        }),
        None => Err(Error::Inconsistent(format!(
            "no torsion section realizes the class {class}"
        ))),
    }
}

/// `n·P_o + P_τ` in a rank-one Mordell–Weil group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MWPoint {
    pub free_coeff: BigInt,
    /// Name of the torsion section, `None` for zero torsion.
    pub torsion_section: Option<String>,
    /// Coordinates in the torsion group.
    pub torsion: GroupElement,
}

impl MWPoint {
    pub fn new(free_coeff: i64, torsion: GroupElement) -> Self {
        Self {
            free_coeff: BigInt::from(free_coeff),
            torsion_section: None,
            torsion,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_coeff.is_zero() && self.torsion.is_zero()
    }
}

impl fmt::Display for MWPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O");
        }
        let tors = match (&self.torsion_section, self.torsion.is_zero()) {
            (_, true) => "0".to_string(),
            (Some(name), false) => name.clone(),
            (None, false) => format!("τ{}", self.torsion),
        };
        write!(f, "{}·P_o + {}", self.free_coeff, tors)
    }
}

/// The relation `D ≈ s(D) + (d-1)O + n'F + Σ b_{v,i} Θ_{v,i}` recovered from
/// the computed image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionRelation {
    pub o_coeff: i64,
    /// `n' = (d-1)χ + O·D - s(D)·O`.
    pub f_coeff: BigInt,
    /// `s(D)·O`, from the height of `P_D`.
    pub section_dot_o: BigInt,
    /// Component of each fiber met by `s(D)`.
    pub section_components: Vec<(String, usize)>,
    /// `A_v⁻¹ (c(v, D) - c(v, s(D)))`, integral.
    pub b: Vec<(String, Vec<BigInt>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelJacobiImage {
    pub divisor: String,
    pub generator: String,
    pub free: FreeCoefficient,
    pub gamma_bar_divisor: DualClassTuple,
    pub gamma_bar_generator: DualClassTuple,
    pub torsion: TorsionResolution,
    pub point: MWPoint,
    pub relation: SectionRelation,
    /// Set when `n` was only known up to sign and both signs give the same
    /// torsion part.
    pub sign_note: Option<String>,
}

/// `P_D = n·P_o + P_τ`: `n` from the intersection formulas, then `P_τ` from
/// the component-group classes.
pub fn abel_jacobi_image(
    table: &IntersectionTable,
    name: &str,
    generator: &str,
) -> Result<AbelJacobiImage> {
    let free = table.n_of(name, generator)?;
    let torsion = TorsionGroup::from_table(table)?;
    let res = resolve_with(table, &torsion, name, &free.n, generator)?;
    let mut sign_note = None;
    if !free.sign_determined && !free.n.is_zero() {
        let other = resolve_with(table, &torsion, name, &-&free.n, generator)?;
        if other.class != res.class {
            return Err(Error::Unsupported(format!(
                "sign of n undetermined (record {name}·{generator}) and the torsion part depends on it"
            )));
        }
        sign_note = Some(format!(
            "n known up to sign; ±{} give the same torsion part",
            free.n
        ));
    }
    let gamma_bar_divisor = gamma_bar(table, name)?;
    let gamma_bar_generator = gamma_bar(table, generator)?;
    let point = MWPoint {
        free_coeff: free.n.clone(),
        torsion_section: res.section.clone(),
        torsion: res.coords.clone(),
    };
    let relation = section_relation(table, name, &free, &gamma_bar_divisor)?;
    Ok(AbelJacobiImage {
        divisor: name.to_string(),
        generator: generator.to_string(),
        free,
        gamma_bar_divisor,
        gamma_bar_generator,
        torsion: res,
        point,
        relation,
        sign_note,
    })
}

fn section_relation(
    table: &IntersectionTable,
    name: &str,
    free: &FreeCoefficient,
    class: &DualClassTuple,
) -> Result<SectionRelation> {
    let chi = table.chi();
    let d = table.degree(name)?;
    let cs = table.c_vectors(name)?;
    let mut components = Vec::new();
    let mut b = Vec::new();
    let mut correction = Rational::zero();
    for ((f, c), cls) in table.fibers().iter().zip(&cs).zip(&class.0) {
        // γ̄(D) = γ̄(s(D)), and a section's class names the simple component it meets.
        let idx = f.data.simple_component_of_class(cls).ok_or_else(|| {
            Error::Inconsistent(format!(
                "class {cls} at fiber {} is not a simple component",
                f.id
            ))
        })?;
        let mut cs_vec: QVector = vec![Rational::zero(); f.data.lattice_rank()];
        if idx > 0 {
            cs_vec[idx - 1] = rat(1);
        }
        correction += f.data.a_inv.bilinear(&cs_vec, &cs_vec)?;
        let diff: QVector = c.iter().zip(&cs_vec).map(|(x, y)| x - y).collect();
        let bv = f.data.a_inv.mul_vec(&diff)?;
        if !bv.iter().all(Rational::is_integer) {
            return Err(Error::Inconsistent(format!(
                "fiber {}: A⁻¹(c(v,D) - c(v,s(D))) is not integral",
                f.id
            )));
        }
        components.push((f.id.clone(), idx));
        b.push((
            f.id.clone(),
            bv.into_iter().map(|x| x.to_integer()).collect(),
        ));
    }
    // ⟨P_D, P_D⟩ = n²⟨P_o,P_o⟩ = 2χ + 2 s(D)·O + Σ c(s(D))ᵗ A⁻¹ c(s(D))
    let height = &free.n_squared * &free.height;
    let twice = height - rat(2 * chi) - correction;
    let sdo = &twice / rat(2);
    if !sdo.is_integer() {
        return Err(Error::Inconsistent(format!(
            "s(D)·O = {} is not an integer",
            format_rational(&sdo)
        )));
    }
    let sdo = sdo.to_integer();
    let is_zero_section = free.n.is_zero() && class.is_zero();
    if is_zero_section && sdo != BigInt::from(-chi) {
        return Err(Error::Inconsistent("s(D) = O but O² ≠ -χ".into()));
    }
    if !is_zero_section && sdo.is_negative() {
        return Err(Error::Inconsistent(format!(
            "s(D)·O = {sdo} < 0 for s(D) ≠ O"
        )));
    }
    let f_coeff = BigInt::from((d - 1) * chi + table.dot_o(name)?) - &sdo;
    Ok(SectionRelation {
        o_coeff: d - 1,
        f_coeff,
        section_dot_o: sdo,
        section_components: components,
        b,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiodaTateReport {
    pub trivial_rank: usize,
    pub free_rank: usize,
    pub expected: usize,
    pub declared: usize,
    pub pass: bool,
}

/// Checks `ρ = 2 + Σ (m_v - 1) + rank MW`.
pub fn shioda_tate_check(cfg: &SurfaceConfig, ns_rank: usize) -> ShiodaTateReport {
    let expected = cfg.shioda_tate_rank();
    ShiodaTateReport {
        trivial_rank: expected - cfg.mw_free_rank,
        free_rank: cfg.mw_free_rank,
        expected,
        declared: ns_rank,
        pass: expected == ns_rank,
    }
}

//! Formal Néron–Severi classes over a table of intersection numbers.
//!
//! A surface is described only through its fibers, `χ(O_S)`, and the
//! intersection profiles of a few named curves. The projection `φ₀` onto the
//! orthogonal complement of the trivial lattice, the height pairing, and the
//! free coefficient `n` of the image of a divisor are all computed from that
//! data, exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{exact_sqrt, format_rational, rat, serde_str, QVector, Rational};
use crate::kodaira::{fiber_data, FiberKind, ReducibleFiberData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    pub id: String,
    pub kind: FiberKind,
}

/// A section known by `s·O` and the component it meets in each reducible
/// fiber (fibers not listed: the identity component).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionProfile {
    pub name: String,
    #[serde(rename = "s_dot_O")]
    pub s_dot_o: i64,
    #[serde(default)]
    pub components: BTreeMap<String, usize>,
    /// Intersections with other named sections.
    #[serde(
        default,
        rename = "s_dot_section",
        skip_serializing_if = "BTreeMap::is_empty"
    )]
    pub dot_sections: BTreeMap<String, i64>,
}

impl SectionProfile {
    pub fn new(name: &str, s_dot_o: i64, components: &[(&str, usize)]) -> Self {
        Self {
            name: name.to_string(),
            s_dot_o,
            components: components
                .iter()
                .map(|&(f, i)| (f.to_string(), i))
                .collect(),
            dot_sections: BTreeMap::new(),
        }
    }

    pub fn component(&self, fiber: &str) -> usize {
        self.components.get(fiber).copied().unwrap_or(0)
    }
}

/// A divisor known only by its intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorProfile {
    pub name: String,
    /// `D·F`.
    pub d: i64,
    #[serde(rename = "D_squared", with = "serde_str")]
    pub self_intersection: Rational,
    #[serde(rename = "D_dot_O")]
    pub dot_o: i64,
    /// `c(v, D) = (D·Θ_{v,1}, …, D·Θ_{v,m_v-1})`; omitted fibers are zero.
    #[serde(default)]
    pub c: BTreeMap<String, Vec<i64>>,
    #[serde(
        default,
        rename = "D_dot_section",
        skip_serializing_if = "BTreeMap::is_empty"
    )]
    pub dot_sections: BTreeMap<String, i64>,
    #[serde(
        default,
        rename = "D_dot_divisor",
        skip_serializing_if = "BTreeMap::is_empty"
    )]
    pub dot_divisors: BTreeMap<String, i64>,
}

impl DivisorProfile {
    pub fn new(name: &str, d: i64, self_intersection: Rational, dot_o: i64) -> Self {
        Self {
            name: name.to_string(),
            d,
            self_intersection,
            dot_o,
            c: BTreeMap::new(),
            dot_sections: BTreeMap::new(),
            dot_divisors: BTreeMap::new(),
        }
    }

    pub fn with_c(mut self, fiber: &str, c: &[i64]) -> Self {
        self.c.insert(fiber.to_string(), c.to_vec());
        self
    }

    pub fn with_section(mut self, section: &str, value: i64) -> Self {
        self.dot_sections.insert(section.to_string(), value);
        self
    }

    pub fn with_divisor(mut self, divisor: &str, value: i64) -> Self {
        self.dot_divisors.insert(divisor.to_string(), value);
        self
    }

    /// The profile of a section viewed as a divisor, on a surface with the
    /// given `χ` and fibers.
    pub fn of_section(s: &SectionProfile, chi: i64, fibers: &[FiberSpec]) -> Result<Self> {
        let mut p = DivisorProfile::new(&s.name, 1, rat(-chi), s.s_dot_o);
        for f in fibers {
            let m = f.kind.component_count();
            let idx = s.component(&f.id);
            if idx >= m {
                return Err(Error::ComponentOutOfRange {
                    kind: f.kind.to_string(),
                    index: idx,
                    count: m,
                });
            }
            let mut c = vec![0; m - 1];
            if idx > 0 {
                c[idx - 1] = 1;
            }
            p.c.insert(f.id.clone(), c);
        }
        p.dot_sections = s.dot_sections.clone();
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    /// `χ(O_S)`.
    pub chi: i64,
    pub fibers: Vec<FiberSpec>,
    /// Sections of the free part (for rank one, the generator).
    #[serde(default)]
    pub sections: Vec<SectionProfile>,
    /// Every nonzero torsion section.
    #[serde(default)]
    pub torsion_table: Vec<SectionProfile>,
    pub mw_free_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns_rank: Option<usize>,
}

impl SurfaceConfig {
    pub fn section(&self, name: &str) -> Option<&SectionProfile> {
        self.sections
            .iter()
            .chain(&self.torsion_table)
            .find(|s| s.name == name)
    }

    /// `2 + Σ (m_v - 1) + free rank`.
    pub fn shioda_tate_rank(&self) -> usize {
        2 + self
            .fibers
            .iter()
            .map(|f| f.kind.component_count() - 1)
            .sum::<usize>()
            + self.mw_free_rank
    }
}

/// Generators of formal classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    O,
    F,
    Theta {
        fiber: String,
        index: usize,
    },
    /// A named section or divisor.
    Curve(String),
}

impl Symbol {
    pub fn theta(fiber: &str, index: usize) -> Self {
        Symbol::Theta {
            fiber: fiber.to_string(),
            index,
        }
    }

    pub fn curve(name: &str) -> Self {
        Symbol::Curve(name.to_string())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::O => write!(f, "O"),
            Symbol::F => write!(f, "F"),
            Symbol::Theta { fiber, index } => write!(f, "Θ[{fiber},{index}]"),
            Symbol::Curve(n) => write!(f, "{n}"),
        }
    }
}

/// A rational linear combination of generator symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalClass {
    coeffs: BTreeMap<Symbol, Rational>,
}

impl FormalClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::term(rat(1), s)
    }

    pub fn term(k: Rational, s: Symbol) -> Self {
        let mut c = Self::zero();
        c.add_term(k, s);
        c
    }

    pub fn add_term(&mut self, k: Rational, s: Symbol) {
        let e = self.coeffs.entry(s).or_insert_with(Rational::zero);
        *e += k;
        if e.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn plus(mut self, other: &FormalClass) -> Self {
        for (s, k) in &other.coeffs {
            self.add_term(k.clone(), s.clone());
        }
        self
    }

    pub fn minus(self, other: &FormalClass) -> Self {
        self.plus(&other.scaled(&rat(-1)))
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (s, v) in &self.coeffs {
            out.add_term(v * k, s.clone());
        }
        out
    }

    pub fn coefficient(&self, s: &Symbol) -> Rational {
        self.coeffs.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, k)) in self.coeffs.iter().enumerate() {
            let neg = k < &Rational::zero();
            let mag = if neg { -k } else { k.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}·", format_rational(&mag))?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Intersection data of one named curve.
#[derive(Clone, Debug)]
struct CurveRow {
    d: i64,
    self_intersection: Rational,
    dot_o: i64,
    /// Per fiber (table order), length `m_v - 1`.
    c: Vec<Vec<i64>>,
    dot_curves: BTreeMap<String, Rational>,
    is_section: bool,
}

#[derive(Clone, Debug)]
pub struct Fiber {
    pub id: String,
    pub data: ReducibleFiberData,
}

/// Symmetric intersection pairing on `O`, `F`, fiber components, and named
/// curves, assembled from a [`SurfaceConfig`] and divisor profiles.
#[derive(Clone, Debug)]
pub struct IntersectionTable {
    config: SurfaceConfig,
    fibers: Vec<Fiber>,
    curves: BTreeMap<String, CurveRow>,
}

pub fn build_table(cfg: &SurfaceConfig, divisors: &[DivisorProfile]) -> Result<IntersectionTable> {
    IntersectionTable::new(cfg, divisors)
}

impl IntersectionTable {
    pub fn new(cfg: &SurfaceConfig, divisors: &[DivisorProfile]) -> Result<Self> {
        if cfg.chi < 1 {
            return Err(Error::InvalidProfile(format!(
                "chi must be positive, got {}",
                cfg.chi
            )));
        }
        if cfg.fibers.is_empty() {
            return Err(Error::InvalidProfile(
                "at least one reducible fiber is required".into(),
            ));
        }
        let mut fibers: Vec<Fiber> = Vec::new();
        for f in &cfg.fibers {
            if fibers.iter().any(|g| g.id == f.id) {
                return Err(Error::InvalidProfile(format!(
                    "duplicate fiber id `{}`",
                    f.id
                )));
            }
            fibers.push(Fiber {
                id: f.id.clone(),
                data: fiber_data(f.kind)?,
            });
        }

        let mut curves: BTreeMap<String, CurveRow> = BTreeMap::new();
        let mut insert = |name: &str, row: CurveRow| -> Result<()> {
            if name == "O" || name == "F" || name.is_empty() {
                return Err(Error::InvalidProfile(format!(
                    "reserved curve name `{name}`"
                )));
            }
            if curves.insert(name.to_string(), row).is_some() {
                return Err(Error::InvalidProfile(format!(
                    "duplicate curve name `{name}`"
                )));
            }
            Ok(())
        };

        for s in cfg.sections.iter().chain(&cfg.torsion_table) {
            for (fid, &idx) in &s.components {
                let fiber = fibers.iter().find(|f| &f.id == fid).ok_or_else(|| {
                    Error::InvalidProfile(format!(
                        "section `{}` names unknown fiber `{fid}`",
                        s.name
                    ))
                })?;
                if idx >= fiber.data.component_count() {
                    return Err(Error::ComponentOutOfRange {
                        kind: fiber.data.kind.to_string(),
                        index: idx,
                        count: fiber.data.component_count(),
                    });
                }
                if !fiber.data.is_simple(idx) {
                    return Err(Error::InvalidProfile(format!(
                        "section `{}` meets component {idx} of fiber `{fid}`, which has multiplicity {}",
                        s.name, fiber.data.multiplicities[idx]
                    )));
                }
            }
            let c = fibers
                .iter()
                .map(|f| {
                    let mut v = vec![0; f.data.lattice_rank()];
                    let idx = s.component(&f.id);
                    if idx > 0 {
                        v[idx - 1] = 1;
                    }
                    v
                })
                .collect();
            insert(
                &s.name,
                CurveRow {
                    d: 1,
                    self_intersection: rat(-cfg.chi),
                    dot_o: s.s_dot_o,
                    c,
                    dot_curves: s
                        .dot_sections
                        .iter()
                        .map(|(k, v)| (k.clone(), rat(*v)))
                        .collect(),
                    is_section: true,
                },
            )?;
        }

        for dv in divisors {
            if dv.d < 0 {
                return Err(Error::InvalidProfile(format!(
                    "divisor `{}` has negative fiber degree {}",
                    dv.name, dv.d
                )));
            }
            for fid in dv.c.keys() {
                if !fibers.iter().any(|f| &f.id == fid) {
                    return Err(Error::InvalidProfile(format!(
                        "divisor `{}` names unknown fiber `{fid}`",
                        dv.name
                    )));
                }
            }
            let mut c = Vec::with_capacity(fibers.len());
            for f in &fibers {
                let r = f.data.lattice_rank();
                match dv.c.get(&f.id) {
                    Some(v) if v.len() != r => {
                        return Err(Error::Dimension(format!(
                            "c({}, {}) has length {}, fiber {} needs {r}",
                            f.id,
                            dv.name,
                            v.len(),
                            f.data.kind
                        )))
                    }
                    Some(v) => c.push(v.clone()),
                    None => c.push(vec![0; r]),
                }
            }
            let dot_curves = dv
                .dot_sections
                .iter()
                .chain(&dv.dot_divisors)
                .map(|(k, v)| (k.clone(), rat(*v)))
                .collect();
            insert(
                &dv.name,
                CurveRow {
                    d: dv.d,
                    self_intersection: dv.self_intersection.clone(),
                    dot_o: dv.dot_o,
                    c,
                    dot_curves,
                    is_section: false,
                },
            )?;
        }

        for (name, row) in &curves {
            for (other, v) in &row.dot_curves {
                let Some(orow) = curves.get(other) else {
                    return Err(Error::InvalidProfile(format!(
                        "`{name}` records an intersection with unknown curve `{other}`"
                    )));
                };
                if other == name && v != &row.self_intersection {
                    return Err(Error::Inconsistent(format!("two values for {name}²")));
                }
                if let Some(w) = orow.dot_curves.get(name) {
                    if w != v {
                        return Err(Error::Inconsistent(format!(
                            "{name}·{other} recorded as both {} and {}",
                            format_rational(v),
                            format_rational(w)
                        )));
                    }
                }
            }
        }

        Ok(Self {
            config: cfg.clone(),
            fibers,
            curves,
        })
    }

    pub fn config(&self) -> &SurfaceConfig {
        &self.config
    }

    pub fn chi(&self) -> i64 {
        self.config.chi
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn fiber(&self, id: &str) -> Result<&Fiber> {
        self.fibers
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::UnknownSymbol(format!("fiber `{id}`")))
    }

    pub fn has_curve(&self, name: &str) -> bool {
        self.curves.contains_key(name)
    }

    pub fn is_section(&self, name: &str) -> bool {
        self.curves.get(name).is_some_and(|r| r.is_section)
    }

    fn row(&self, name: &str) -> Result<&CurveRow> {
        self.curves
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// `D·F`.
    pub fn degree(&self, name: &str) -> Result<i64> {
        Ok(self.row(name)?.d)
    }

    pub fn dot_o(&self, name: &str) -> Result<i64> {
        Ok(self.row(name)?.dot_o)
    }

    pub fn self_intersection(&self, name: &str) -> Result<Rational> {
        Ok(self.row(name)?.self_intersection.clone())
    }

    /// `c(v, D)` for every fiber, in table order.
    pub fn c_vectors(&self, name: &str) -> Result<Vec<QVector>> {
        Ok(self
            .row(name)?
            .c
            .iter()
            .map(|v| v.iter().map(|&x| rat(x)).collect())
            .collect())
    }

    /// The recorded value of `a·b` for two named curves, if any.
    pub fn curve_pair(&self, a: &str, b: &str) -> Result<Option<Rational>> {
        let ra = self.row(a)?;
        let rb = self.row(b)?;
        if a == b {
            return Ok(Some(ra.self_intersection.clone()));
        }
        Ok(ra
            .dot_curves
            .get(b)
            .or_else(|| rb.dot_curves.get(a))
            .cloned())
    }

    fn theta_pair_with(&self, fiber: &str, index: usize, other: &Symbol) -> Result<Rational> {
        let (fi, f) = self
            .fibers
            .iter()
            .enumerate()
            .find(|(_, f)| f.id == fiber)
            .ok_or_else(|| Error::UnknownSymbol(format!("fiber `{fiber}`")))?;
        let m = f.data.component_count();
        if index >= m {
            return Err(Error::ComponentOutOfRange {
                kind: f.data.kind.to_string(),
                index,
                count: m,
            });
        }
        if index == 0 {
            // Θ₀ = F - Σ a_i Θ_i
            let mut acc = self.pair(&Symbol::F, other)?;
            for i in 1..m {
                let a = Rational::from_integer(BigInt::from(f.data.multiplicities[i]));
                acc -= a * self.theta_pair_with(fiber, i, other)?;
            }
            return Ok(acc);
        }
        Ok(match other {
            Symbol::O | Symbol::F => Rational::zero(),
            Symbol::Theta { fiber: g, index: j } => {
                if g != fiber {
                    self.fiber(g)?;
                    Rational::zero()
                } else if *j == 0 {
                    self.theta_pair_with(g, 0, &Symbol::theta(fiber, index))?
                } else {
                    f.data.full_matrix[(index, *j)].clone()
                }
            }
            Symbol::Curve(n) => rat(self.row(n)?.c[fi][index - 1]),
        })
    }

    /// The pairing on generator symbols.
    pub fn pair(&self, a: &Symbol, b: &Symbol) -> Result<Rational> {
        use Symbol::*;
        Ok(match (a, b) {
            (O, O) => rat(-self.config.chi),
            (O, F) | (F, O) => rat(1),
            (F, F) => rat(0),
            (Theta { fiber, index }, other) | (other, Theta { fiber, index }) => {
                self.theta_pair_with(fiber, *index, other)?
            }
            (O, Curve(n)) | (Curve(n), O) => rat(self.row(n)?.dot_o),
            (F, Curve(n)) | (Curve(n), F) => rat(self.row(n)?.d),
            (Curve(x), Curve(y)) => self
                .curve_pair(x, y)?
                .ok_or_else(|| Error::MissingIntersection(x.clone(), y.clone()))?,
        })
    }

    /// Bilinear extension of [`pair`](Self::pair).
    pub fn intersect(&self, a: &FormalClass, b: &FormalClass) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (s, x) in a.terms() {
            for (t, y) in b.terms() {
                acc += x * y * self.pair(s, t)?;
            }
        }
        Ok(acc)
    }

    /// Generators of the trivial lattice: `O`, `F`, and `Θ_{v,i}` for `i ≥ 1`.
    pub fn trivial_generators(&self) -> Vec<Symbol> {
        let mut out = vec![Symbol::O, Symbol::F];
        for f in &self.fibers {
            out.extend((1..f.data.component_count()).map(|i| Symbol::theta(&f.id, i)));
        }
        out
    }

    /// Trivial lattice generators followed by the free-part sections.
    pub fn spanning_set(&self) -> Vec<Symbol> {
        let mut out = self.trivial_generators();
        out.extend(self.config.sections.iter().map(|s| Symbol::curve(&s.name)));
        out
    }

    /// `Σ_v F_v A_v⁻¹ c(v, D)` as the per-fiber coefficient vectors `A_v⁻¹ c`.
    fn a_inv_c(&self, name: &str) -> Result<Vec<QVector>> {
        let cs = self.c_vectors(name)?;
        self.fibers
            .iter()
            .zip(&cs)
            .map(|(f, c)| f.data.a_inv.mul_vec(c))
            .collect()
    }

    /// `φ₀(D) = D - dO - (dχ + O·D)F - Σ_v F_v A_v⁻¹ c(v, D)`.
    pub fn phi0(&self, name: &str) -> Result<FormalClass> {
        let row = self.row(name)?;
        let chi = self.config.chi;
        let mut out = FormalClass::symbol(Symbol::curve(name));
        out.add_term(rat(-row.d), Symbol::O);
        out.add_term(rat(-(row.d * chi + row.dot_o)), Symbol::F);
        for (f, x) in self.fibers.iter().zip(self.a_inv_c(name)?) {
            for (i, xi) in x.into_iter().enumerate() {
                out.add_term(-xi, Symbol::theta(&f.id, i + 1));
            }
        }
        Ok(out)
    }

    /// `Σ_v c(v, a)ᵗ A_v⁻¹ c(v, b)`.
    fn fiber_correction(&self, a: &str, b: &str) -> Result<Rational> {
        let ca = self.c_vectors(a)?;
        let cb = self.c_vectors(b)?;
        let mut acc = Rational::zero();
        for ((f, x), y) in self.fibers.iter().zip(&ca).zip(&cb) {
            acc += f.data.a_inv.bilinear(x, y)?;
        }
        Ok(acc)
    }

    /// `φ₀(D)·φ₀(D) = D² - 2d D·O - d²χ - Σ c(v,D)ᵗ A_v⁻¹ c(v,D)`.
    pub fn phi0_self(&self, name: &str) -> Result<Rational> {
        let row = self.row(name)?;
        let (d, chi) = (row.d, self.config.chi);
        Ok(&row.self_intersection
            - rat(2 * d * row.dot_o)
            - rat(d * d * chi)
            - self.fiber_correction(name, name)?)
    }

    /// `φ₀(D)·φ(P) = (D - dO)·s - dχ - O·D - Σ c(v,s)ᵗ A_v⁻¹ c(v,D)` for the
    /// section `s` of `P`.
    pub fn phi0_cross(&self, name: &str, section: &str) -> Result<Rational> {
        if !self.is_section(section) {
            return Err(Error::InvalidProfile(format!(
                "`{section}` is not a section"
            )));
        }
        let row = self.row(name)?;
        let srow = self.row(section)?;
        let d_dot_s = self
            .curve_pair(name, section)?
            .ok_or_else(|| Error::MissingIntersection(name.to_string(), section.to_string()))?;
        let chi = self.config.chi;
        Ok(d_dot_s
            - rat(row.d * srow.dot_o)
            - rat(row.d * chi)
            - rat(row.dot_o)
            - self.fiber_correction(section, name)?)
    }

    /// `⟨P₁, P₂⟩ = -φ(P₁)·φ(P₂)`.
    pub fn height_pairing(&self, s1: &str, s2: &str) -> Result<Rational> {
        if !self.is_section(s1) {
            return Err(Error::InvalidProfile(format!("`{s1}` is not a section")));
        }
        Ok(-self.phi0_cross(s1, s2)?)
    }

    /// `2χ + 2 s·O + Σ c(v,s)ᵗ A_v⁻¹ c(v,s)`.
    pub fn height(&self, section: &str) -> Result<Rational> {
        if !self.is_section(section) {
            return Err(Error::InvalidProfile(format!(
                "`{section}` is not a section"
            )));
        }
        let row = self.row(section)?;
        Ok(rat(2 * self.config.chi + 2 * row.dot_o) + self.fiber_correction(section, section)?)
    }

    /// Free coefficient of `P_D` against the generator `P_o` of a rank-one
    /// Mordell–Weil group.
    pub fn n_of(&self, name: &str, generator: &str) -> Result<FreeCoefficient> {
        if self.config.mw_free_rank != 1 {
            return Err(Error::Unsupported(format!(
                "free rank {} (only rank one is handled)",
                self.config.mw_free_rank
            )));
        }
        let height = self.height(generator)?;
        if height.is_zero() {
            return Err(Error::Inconsistent(format!(
                "generator `{generator}` has height zero"
            )));
        }
        let phi0_self = self.phi0_self(name)?;
        let n_squared = -&phi0_self / &height;
        let magnitude = exact_sqrt(&n_squared).ok_or_else(|| {
            Error::Inconsistent(format!(
                "n² = {} is not a perfect square (-φ₀(D)² = {}, ⟨P_o,P_o⟩ = {})",
                format_rational(&n_squared),
                format_rational(&-&phi0_self),
                format_rational(&height)
            ))
        })?;
        let cross = match self.phi0_cross(name, generator) {
            Ok(v) => Some(v),
            Err(Error::MissingIntersection(..)) => None,
            Err(e) => return Err(e),
        };
        let (n, sign_determined) = match &cross {
            Some(cross) => {
                let lin = -cross / &height;
                if !lin.is_integer() {
                    return Err(Error::Inconsistent(format!(
                        "n = -φ₀(D)·φ(P_o)/⟨P_o,P_o⟩ = {} is not an integer",
                        format_rational(&lin)
                    )));
                }
                if &lin * &lin != n_squared {
                    return Err(Error::Inconsistent(format!(
                        "linear formula gives n = {} but quadratic formula gives n² = {}",
                        format_rational(&lin),
                        format_rational(&n_squared)
                    )));
                }
                (lin.to_integer(), true)
            }
            None => (magnitude, false),
        };
        Ok(FreeCoefficient {
            n,
            n_squared,
            sign_determined,
            height,
            phi0_self,
            phi0_cross: cross,
        })
    }
}

/// Output of [`IntersectionTable::n_of`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCoefficient {
    /// Signed when `sign_determined`, otherwise `|n|`.
    pub n: BigInt,
    pub n_squared: Rational,
    pub sign_determined: bool,
    /// `⟨P_o, P_o⟩`.
    pub height: Rational,
    pub phi0_self: Rational,
    pub phi0_cross: Option<Rational>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::frac;

    fn surface() -> SurfaceConfig {
        SurfaceConfig {
            chi: 1,
            fibers: vec![
                FiberSpec {
                    id: "inf".into(),
                    kind: FiberKind::IStar(0),
                },
                FiberSpec {
                    id: "1".into(),
                    kind: FiberKind::I(2),
                },
                FiberSpec {
                    id: "2".into(),
                    kind: FiberKind::I(2),
                },
                FiberSpec {
                    id: "3".into(),
                    kind: FiberKind::I(2),
                },
            ],
            sections: vec![SectionProfile::new("s_o", 0, &[("inf", 1), ("1", 1)])],
            torsion_table: vec![],
            mw_free_rank: 1,
            ns_rank: Some(10),
        }
    }

    fn e_plus(sq: i64) -> DivisorProfile {
        DivisorProfile::new("E+", 3, rat(sq), 0).with_c("inf", &[1, 1, 1, 0])
    }

    #[test]
    fn basic_pairings() {
        let t = build_table(&surface(), &[]).unwrap();
        assert_eq!(t.pair(&Symbol::O, &Symbol::O).unwrap(), rat(-1));
        assert_eq!(t.pair(&Symbol::O, &Symbol::F).unwrap(), rat(1));
        assert_eq!(
            t.pair(&Symbol::theta("inf", 1), &Symbol::theta("inf", 1))
                .unwrap(),
            rat(-2)
        );
        assert_eq!(
            t.pair(&Symbol::theta("inf", 1), &Symbol::theta("1", 1))
                .unwrap(),
            rat(0)
        );
        let so = Symbol::curve("s_o");
        assert_eq!(t.pair(&so, &Symbol::theta("inf", 1)).unwrap(), rat(1));
        assert_eq!(t.pair(&so, &Symbol::theta("inf", 2)).unwrap(), rat(0));
        assert_eq!(t.pair(&so, &Symbol::theta("inf", 0)).unwrap(), rat(0));
        assert_eq!(t.pair(&so, &Symbol::theta("2", 0)).unwrap(), rat(1));
        assert_eq!(t.pair(&so, &so).unwrap(), rat(-1));
        assert_eq!(
            t.pair(&Symbol::O, &Symbol::theta("inf", 0)).unwrap(),
            rat(1)
        );
        assert_eq!(
            t.pair(&Symbol::theta("inf", 0), &Symbol::theta("inf", 0))
                .unwrap(),
            rat(-2)
        );
        assert_eq!(
            t.pair(&Symbol::theta("inf", 0), &Symbol::theta("inf", 4))
                .unwrap(),
            rat(1)
        );
        assert_eq!(
            t.pair(&Symbol::theta("1", 0), &Symbol::theta("1", 1))
                .unwrap(),
            rat(2)
        );
    }

    #[test]
    fn phi0_kills_trivial_curves() {
        let o_like = DivisorProfile::new("Oc", 1, rat(-1), -1);
        let f_like = DivisorProfile::new("Fc", 0, rat(0), 1);
        let t = build_table(&surface(), &[o_like, f_like]).unwrap();
        // φ₀ of a curve with O's profile is that curve minus O: orthogonal to T.
        let p = t.phi0("Oc").unwrap();
        assert_eq!(
            p,
            FormalClass::symbol(Symbol::curve("Oc")).minus(&FormalClass::symbol(Symbol::O))
        );
        assert_eq!(t.phi0_self("Oc").unwrap(), rat(0));
        let q = t.phi0("Fc").unwrap();
        assert_eq!(
            q,
            FormalClass::symbol(Symbol::curve("Fc")).minus(&FormalClass::symbol(Symbol::F))
        );
        assert_eq!(t.phi0_self("Fc").unwrap(), rat(0));
    }

    #[test]
    fn phi0_of_e_plus() {
        let t = build_table(&surface(), &[e_plus(3)]).unwrap();
        let p = t.phi0("E+").unwrap();
        let mut expected = FormalClass::symbol(Symbol::curve("E+"));
        expected.add_term(rat(-3), Symbol::O);
        expected.add_term(rat(-3), Symbol::F);
        for i in 1..=3 {
            expected.add_term(rat(2), Symbol::theta("inf", i));
        }
        expected.add_term(rat(3), Symbol::theta("inf", 4));
        assert_eq!(p, expected);
    }

    #[test]
    fn phi0_self_values() {
        let t = build_table(&surface(), &[e_plus(3)]).unwrap();
        assert_eq!(t.phi0_self("E+").unwrap(), rat(0));
        let t = build_table(&surface(), &[e_plus(1)]).unwrap();
        assert_eq!(t.phi0_self("E+").unwrap(), rat(-2));
    }

    #[test]
    fn heights() {
        let t = build_table(&surface(), &[]).unwrap();
        assert_eq!(t.height("s_o").unwrap(), frac(1, 2));
        assert_eq!(t.height_pairing("s_o", "s_o").unwrap(), frac(1, 2));
        let mut cfg = surface();
        cfg.sections.push(SectionProfile::new("s", 0, &[]));
        let t = build_table(&cfg, &[]).unwrap();
        assert_eq!(t.height("s").unwrap(), rat(2));
    }

    #[test]
    fn cross_term() {
        let t = build_table(&surface(), &[e_plus(1).with_section("s_o", 0)]).unwrap();
        assert_eq!(t.phi0_cross("E+", "s_o").unwrap(), rat(-1));
        let n = t.n_of("E+", "s_o").unwrap();
        assert_eq!(n.n, BigInt::from(2));
        assert!(n.sign_determined);
        assert_eq!(n.n_squared, rat(4));
    }

    #[test]
    fn unsigned_n_without_cross_data() {
        let t = build_table(&surface(), &[e_plus(1)]).unwrap();
        let n = t.n_of("E+", "s_o").unwrap();
        assert_eq!(n.n, BigInt::from(2));
        assert!(!n.sign_determined);
        assert!(matches!(
            t.phi0_cross("E+", "s_o"),
            Err(Error::MissingIntersection(..))
        ));
    }

    #[test]
    fn not_a_square() {
        let t = build_table(&surface(), &[e_plus(2)]).unwrap();
        let err = t.n_of("E+", "s_o").unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
        assert!(
            err.to_string().contains("n² = 2 is not a perfect square"),
            "{err}"
        );
    }

    #[test]
    fn inconsistent_linear_formula() {
        let t = build_table(&surface(), &[e_plus(1).with_section("s_o", 3)]).unwrap();
        assert!(matches!(t.n_of("E+", "s_o"), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn rank_must_be_one() {
        let mut cfg = surface();
        cfg.mw_free_rank = 2;
        let t = build_table(&cfg, &[e_plus(1)]).unwrap();
        assert!(matches!(t.n_of("E+", "s_o"), Err(Error::Unsupported(_))));
    }

    #[test]
    fn build_rejections() {
        let mut cfg = surface();
        cfg.sections[0].components.insert("inf".into(), 4);
        assert!(matches!(
            build_table(&cfg, &[]),
            Err(Error::InvalidProfile(_))
        ));

        let mut cfg = surface();
        cfg.sections[0].components.insert("nope".into(), 1);
        assert!(build_table(&cfg, &[]).is_err());

        let bad = DivisorProfile::new("D", 1, rat(0), 0).with_c("inf", &[1, 1]);
        assert!(matches!(
            build_table(&surface(), &[bad]),
            Err(Error::Dimension(_))
        ));

        let neg = DivisorProfile::new("D", -1, rat(0), 0);
        assert!(build_table(&surface(), &[neg]).is_err());

        let dup = DivisorProfile::new("s_o", 1, rat(0), 0);
        assert!(build_table(&surface(), &[dup]).is_err());

        let dangling = DivisorProfile::new("D", 1, rat(0), 0).with_section("ghost", 1);
        assert!(build_table(&surface(), &[dangling]).is_err());

        let a = DivisorProfile::new("A", 1, rat(0), 0).with_divisor("B", 1);
        let b = DivisorProfile::new("B", 1, rat(0), 0).with_divisor("A", 2);
        assert!(matches!(
            build_table(&surface(), &[a, b]),
            Err(Error::Inconsistent(_))
        ));

        let mut cfg = surface();
        cfg.fibers.clear();
        assert!(build_table(&cfg, &[]).is_err());
    }

    #[test]
    fn section_as_divisor() {
        let cfg = surface();
        let p = DivisorProfile::of_section(&cfg.sections[0], cfg.chi, &cfg.fibers).unwrap();
        assert_eq!(p.d, 1);
        assert_eq!(p.self_intersection, rat(-1));
        assert_eq!(p.c["inf"], vec![1, 0, 0, 0]);
        assert_eq!(p.c["1"], vec![1]);
        assert_eq!(p.c["2"], vec![0]);
    }

    #[test]
    fn formal_class_display() {
        let mut c = FormalClass::symbol(Symbol::curve("E+"));
        c.add_term(rat(-3), Symbol::O);
        c.add_term(frac(1, 2), Symbol::theta("inf", 1));
        assert_eq!(c.to_string(), "-3·O + 1/2·Θ[inf,1] + E+");
        assert_eq!(FormalClass::zero().to_string(), "0");
    }
}

//! A nodal cubic and four lines, built in exact rational coordinates.
//!
//! The cubic is `zy² = x³ + x²z` with its node at `(0:0:1)`. The line of slope
//! `t` through the node meets it again at `(t²-1 : t(t²-1) : 1)`, and `t = ∞`
//! gives the flex `(0:1:0)`. On the smooth part `u = (t-1)/(t+1)` is a group
//! coordinate: three points are collinear exactly when their `u`'s multiply
//! to 1, and the tangent at `u` meets the cubic again at `u⁻²`.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, frac, rat, QMatrix, Rational};
use crate::mwgroup::{abel_jacobi_image, AbelJacobiImage};
use crate::nslattice::{build_table, DivisorProfile};
use crate::scenario::{bundled, ArrangementType, E_PLUS, GENERATOR};

/// `(x : y : z)`, scaled so the last nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint([Rational; 3]);

/// `ax + by + cz = 0`, scaled like [`ProjPoint`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line([Rational; 3]);

fn normalize(mut v: [Rational; 3]) -> Option<[Rational; 3]> {
    let k = v.iter().rev().find(|x| !x.is_zero())?.clone();
    for x in &mut v {
        *x = &*x / &k;
    }
    Some(v)
}

fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn det3(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    let m = QMatrix::from_rows(vec![a.to_vec(), b.to_vec(), c.to_vec()]).expect("3x3");
    m.det().expect("square")
}

impl ProjPoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        normalize([x, y, z])
            .map(ProjPoint)
            .ok_or_else(|| Error::Degenerate("point with all coordinates zero".into()))
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Result<Self> {
        Self::new(rat(x), rat(y), rat(z))
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.0
    }

    pub fn on_cubic(&self) -> bool {
        let [x, y, z] = &self.0;
        z * y * y == x * x * x + x * x * z
    }

    pub fn is_node(&self) -> bool {
        self.0[0].is_zero() && self.0[1].is_zero()
    }
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        normalize([a, b, c])
            .map(Line)
            .ok_or_else(|| Error::Degenerate("line with all coefficients zero".into()))
    }

    pub fn coeffs(&self) -> &[Rational; 3] {
        &self.0
    }

    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self> {
        normalize(cross(&p.0, &q.0))
            .map(Line)
            .ok_or_else(|| Error::Degenerate("line through a point and itself".into()))
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.0
            .iter()
            .zip(&p.0)
            .map(|(a, x)| a * x)
            .sum::<Rational>()
            .is_zero()
    }

    pub fn meet(&self, other: &Line) -> Result<ProjPoint> {
        normalize(cross(&self.0, &other.0))
            .map(ProjPoint)
            .ok_or_else(|| Error::Degenerate("intersection of a line with itself".into()))
    }

    /// Coefficients `[c₀, c₁, c₂, c₃]` of the line evaluated on the
    /// parametrization: `b t³ + a t² - b t + (c - a)`.
    pub fn restrict(&self) -> [Rational; 4] {
        let [a, b, c] = &self.0;
        [c - a, -b.clone(), a.clone(), b.clone()]
    }
}

pub fn collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    det3(&a.0, &b.0, &c.0).is_zero()
}

pub fn concurrent(a: &Line, b: &Line, c: &Line) -> bool {
    det3(&a.0, &b.0, &c.0).is_zero()
}

/// A parameter on the cubic: slope of the line through the node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CubicParam {
    Finite(Rational),
    Infinity,
}

impl CubicParam {
    fn check(&self) -> Result<()> {
        match self {
            CubicParam::Finite(t) if t.is_one() || *t == -Rational::one() => {
                Err(Error::Degenerate(format!(
                    "parameter {} lands on the node",
                    format_rational(t)
                )))
            }
            _ => Ok(()),
        }
    }

    /// `u = (t-1)/(t+1)`, with `u(∞) = 1`.
    pub fn group_coordinate(&self) -> Result<Rational> {
        self.check()?;
        Ok(match self {
            CubicParam::Finite(t) => (t - rat(1)) / (t + rat(1)),
            CubicParam::Infinity => rat(1),
        })
    }

    /// Inverse of [`group_coordinate`](Self::group_coordinate).
    pub fn from_group_coordinate(u: &Rational) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::Degenerate("group coordinate 0 is the node".into()));
        }
        if u.is_one() {
            return Ok(CubicParam::Infinity);
        }
        Ok(CubicParam::Finite((rat(1) + u) / (rat(1) - u)))
    }
}

impl From<Rational> for CubicParam {
    fn from(t: Rational) -> Self {
        CubicParam::Finite(t)
    }
}

impl fmt::Display for CubicParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubicParam::Finite(t) => f.write_str(&format_rational(t)),
            CubicParam::Infinity => f.write_str("inf"),
        }
    }
}

pub fn param_point(t: &CubicParam) -> Result<ProjPoint> {
    t.check()?;
    match t {
        CubicParam::Finite(t) => {
            let s = t * t - rat(1);
            ProjPoint::new(s.clone(), t * &s, rat(1))
        }
        CubicParam::Infinity => ProjPoint::from_i64(0, 1, 0),
    }
}

/// Tangent to the cubic at `param_point(t)`, from the gradient of
/// `zy² - x³ - x²z`.
pub fn tangent_line_at(t: &CubicParam) -> Result<Line> {
    let p = param_point(t)?;
    let [x, y, z] = p.coords();
    Line::new(
        -(rat(3) * x * x + rat(2) * x * z),
        rat(2) * y * z,
        y * y - x * x,
    )
}

fn point_at_u(u: &Rational) -> Result<ProjPoint> {
    param_point(&CubicParam::from_group_coordinate(u)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub s1: Rational,
    pub s2: Rational,
    pub sign: i8,
    /// Group coordinates of `q₁, q₂, q₃`.
    pub q_u: [Rational; 3],
    pub q: [ProjPoint; 3],
    pub p: [ProjPoint; 3],
    /// `L₀` through the `pᵢ`, then the tangents `L₁, L₂, L₃`.
    pub lines: [Line; 4],
    /// `L₁∩L₂, L₁∩L₃, L₂∩L₃`.
    pub p_ij: [ProjPoint; 3],
    pub type_tag: ArrangementType,
}

/// Tangency points at `u₁ = u(s1)`, `u₂ = u(s2)`, `u₃ = sign/(u₁u₂)`. The
/// points are collinear exactly for `sign = +1`.
pub fn generate_arrangement(s1: &Rational, s2: &Rational, sign: i8) -> Result<Arrangement> {
    if sign != 1 && sign != -1 {
        return Err(Error::Parse(format!("sign {sign} (expected ±1)")));
    }
    let u1 = CubicParam::Finite(s1.clone()).group_coordinate()?;
    let u2 = CubicParam::Finite(s2.clone()).group_coordinate()?;
    let u3 = rat(sign as i64) / (&u1 * &u2);
    let q_u = [u1, u2, u3];
    let p_u: Vec<Rational> = q_u.iter().map(|u| rat(1) / (u * u)).collect();

    for (i, u) in q_u.iter().enumerate() {
        if u.is_one() {
            return Err(Error::Degenerate(format!(
                "q{} is the flex, so it coincides with p{}",
                i + 1,
                i + 1
            )));
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if q_u[i] == q_u[j] {
                return Err(Error::Degenerate(format!("q{} = q{}", i + 1, j + 1)));
            }
            if p_u[i] == p_u[j] {
                return Err(Error::Degenerate(format!(
                    "p{} = p{}, so L0 is not transversal",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let q: [ProjPoint; 3] = try_array(|i| point_at_u(&q_u[i]))?;
    let p: [ProjPoint; 3] = try_array(|i| point_at_u(&p_u[i]))?;
    let tangents: [Line; 3] =
        try_array(|i| tangent_line_at(&CubicParam::from_group_coordinate(&q_u[i])?))?;
    let l0 = Line::through(&p[0], &p[1])?;
    if !l0.contains(&p[2]) {
        return Err(Error::Inconsistent("p1, p2, p3 are not collinear".into()));
    }
    if concurrent(&tangents[0], &tangents[1], &tangents[2]) {
        return Err(Error::Degenerate("L1, L2, L3 are concurrent".into()));
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let p_ij: [ProjPoint; 3] = try_array(|k| {
        let (i, j) = pairs[k];
        tangents[i].meet(&tangents[j])
    })?;
    for (k, x) in p_ij.iter().enumerate() {
        let (i, j) = pairs[k];
        if x.on_cubic() {
            return Err(Error::Degenerate(format!(
                "L{} and L{} meet on the cubic",
                i + 1,
                j + 1
            )));
        }
        if l0.contains(x) {
            return Err(Error::Degenerate(format!("p{}{} lies on L0", i + 1, j + 1)));
        }
    }
    let [l1, l2, l3] = tangents;
    let type_tag = if sign == 1 {
        ArrangementType::TypeI
    } else {
        ArrangementType::TypeII
    };
    let arr = Arrangement {
        s1: s1.clone(),
        s2: s2.clone(),
        sign,
        q_u,
        q,
        p,
        lines: [l0, l1, l2, l3],
        p_ij,
        type_tag,
    };
    if classify_type(&arr) != type_tag {
        return Err(Error::Inconsistent(format!(
            "sign {sign} but the tangency points classify as {}",
            classify_type(&arr)
        )));
    }
    Ok(arr)
}

fn try_array<T, F: FnMut(usize) -> Result<T>>(mut f: F) -> Result<[T; 3]> {
    Ok([f(0)?, f(1)?, f(2)?])
}

pub fn classify_type(arr: &Arrangement) -> ArrangementType {
    if collinear(&arr.q[0], &arr.q[1], &arr.q[2]) {
        ArrangementType::TypeI
    } else {
        ArrangementType::TypeII
    }
}

/// Profile of `E+` on the bundled surface. `(E+)² = 6 - E+·E-` with
/// `E+·E- = 3` for Type I and 5 for Type II.
pub fn divisor_profile_for(ty: ArrangementType) -> DivisorProfile {
    let (sq, dot_s) = match ty {
        ArrangementType::TypeI => (3, 1),
        ArrangementType::TypeII => (1, 0),
    };
    DivisorProfile::new(E_PLUS, 3, rat(sq), 0)
        .with_c("inf", &[1, 1, 1, 0])
        .with_section(GENERATOR, dot_s)
}

/// For a smooth cubic `E+·E- = 3`, so `(E+)² = 3`.
pub fn divisor_profile_smooth() -> DivisorProfile {
    divisor_profile_for(ArrangementType::TypeI)
}

/// Classify, build the `E+` profile, and compute its image against `s_o`.
pub fn pipeline_image(arr: &Arrangement) -> Result<AbelJacobiImage> {
    let ty = classify_type(arr);
    let surface = bundled(ty).surface;
    let table = build_table(&surface, &[divisor_profile_for(ty)])?;
    abel_jacobi_image(&table, E_PLUS, GENERATOR)
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-40..=40), rng.gen_range(1..=12))
}

/// Random valid parameters, deterministic in `rng`.
pub fn random_arrangement<R: Rng>(rng: &mut R, sign: i8) -> Arrangement {
    loop {
        let (s1, s2) = (random_rational(rng), random_rational(rng));
        if let Ok(arr) = generate_arrangement(&s1, &s2, sign) {
            return arr;
        }
    }
}

pub fn seeded_arrangement(seed: u64, sign: i8) -> Arrangement {
    random_arrangement(&mut ChaCha8Rng::seed_from_u64(seed), sign)
}

/// A random parameter off the node, as a rational with small height.
pub fn random_param<R: Rng>(rng: &mut R) -> CubicParam {
    loop {
        let t = random_rational(rng);
        if !t.is_one() && t != -Rational::one() {
            return CubicParam::Finite(t);
        }
    }
}

struct Strs<'a>(&'a [Rational; 3]);

impl Serialize for Strs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        for x in self.0 {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Strs(&self.0).serialize(s)
    }
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Strs(&self.0).serialize(s)
    }
}

impl Serialize for Arrangement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        let mut st = s.serialize_struct("Arrangement", 10)?;
        st.serialize_field("cubic", "z*y^2 = x^3 + x^2*z")?;
        st.serialize_field("s1", &format_rational(&self.s1))?;
        st.serialize_field("s2", &format_rational(&self.s2))?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("q_group_coords", &strs(&self.q_u))?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("lines", &self.lines)?;
        st.serialize_field("p_ij", &self.p_ij)?;
        st.serialize_field("type", &self.type_tag)?;
        st.end()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.0;
        write!(
            f,
            "({} : {} : {})",
            format_rational(x),
            format_rational(y),
            format_rational(z)
        )
    }
}

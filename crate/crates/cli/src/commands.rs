use std::fmt::Write as _;
use std::path::Path;

use ellsurf::arrangement::{generate_arrangement, pipeline_image, seeded_arrangement, Arrangement};
use ellsurf::config::ConfigDocument;
use ellsurf::dihedral::{cover_sweep, CoverDecision};
use ellsurf::exactalg::{format_rational, parse_rational};
use ellsurf::kodaira::fiber_data;
use ellsurf::mwgroup::{abel_jacobi_image, AbelJacobiImage};
use ellsurf::scenario::{bundled, ArrangementType};
use ellsurf::{Error, FiberKind, Result};
use serde_json::{json, Value};

use crate::report::{matrix, q, Report};

pub fn fiber(kind: &str) -> Result<Report> {
    let kind: FiberKind = kind.parse()?;
    let d = fiber_data(kind)?;
    let classes: Vec<String> = d.dual_class_map.iter().map(ToString::to_string).collect();
    let json = json!({
        "kind": kind.to_string(),
        "components": d.component_count(),
        "euler_number": d.euler_number,
        "multiplicities": d.multiplicities,
        "simple_components": d.simple_components,
        "A": matrix(&d.a),
        "A_inv": matrix(&d.a_inv),
        "component_group": d.component_group.to_string(),
        "invariant_factors": d.component_group.invariant_factors(),
        "dual_classes": classes,
    });
    let mut text = String::new();
    writeln!(
        text,
        "fiber {kind}: {} components, euler number {}",
        d.component_count(),
        d.euler_number
    )
    .unwrap();
    writeln!(text, "multiplicities {:?}", d.multiplicities).unwrap();
    writeln!(text, "A =\n{}", d.a).unwrap();
    writeln!(text, "A^-1 =\n{}", d.a_inv).unwrap();
    writeln!(text, "component group {}", d.component_group).unwrap();
    for (i, class) in classes.iter().enumerate().skip(1) {
        let tag = if d.is_simple(i) { " simple" } else { "" };
        writeln!(text, "  Θ{i}: class {class}{tag}").unwrap();
    }
    Ok(Report::new(json, text))
}

pub enum Source<'a> {
    Path(&'a Path),
    Bundled(ArrangementType),
}

pub fn load(src: Source) -> Result<ConfigDocument> {
    match src {
        Source::Path(p) => ConfigDocument::load(p),
        Source::Bundled(ty) => Ok(bundled(ty)),
    }
}

pub fn image_json(img: &AbelJacobiImage) -> Value {
    let r = &img.relation;
    json!({
        "divisor": img.divisor,
        "generator": img.generator,
        "height": q(&img.free.height),
        "phi0_self": q(&img.free.phi0_self),
        "phi0_cross": img.free.phi0_cross.as_ref().map(q),
        "n_squared": q(&img.free.n_squared),
        "n": img.free.n.to_string(),
        "sign_determined": img.free.sign_determined,
        "gamma_bar_divisor": img.gamma_bar_divisor,
        "gamma_bar_generator": img.gamma_bar_generator,
        "torsion_class": img.torsion.class,
        "torsion_section": img.torsion.section,
        "torsion_coords": img.torsion.coords,
        "point": img.point.to_string(),
        "relation": {
            "O": r.o_coeff,
            "F": r.f_coeff.to_string(),
            "section_dot_O": r.section_dot_o.to_string(),
            "section_components": r.section_components.iter().map(|(f, i)| (f.clone(), *i)).collect::<std::collections::BTreeMap<_, _>>(),
            "b": r.b.iter().map(|(f, v)| (f.clone(), v.iter().map(ToString::to_string).collect::<Vec<_>>())).collect::<std::collections::BTreeMap<_, _>>(),
        },
        "sign_note": img.sign_note,
    })
}

pub fn image_text(img: &AbelJacobiImage) -> String {
    let f = &img.free;
    let mut t = String::new();
    writeln!(
        t,
        "divisor {} against generator {}",
        img.divisor, img.generator
    )
    .unwrap();
    writeln!(t, "  <P_o,P_o> = {}", format_rational(&f.height)).unwrap();
    writeln!(t, "  phi0(D)^2 = {}", format_rational(&f.phi0_self)).unwrap();
    writeln!(
        t,
        "  n^2 = -phi0(D)^2 / <P_o,P_o> = {}",
        format_rational(&f.n_squared)
    )
    .unwrap();
    match &f.phi0_cross {
        Some(c) => writeln!(
            t,
            "  n = -phi0(D).phi(P_o) / <P_o,P_o> = {} (phi0(D).phi(P_o) = {})",
            f.n,
            format_rational(c)
        ),
        None => writeln!(t, "  n = ±{} (D.{} not recorded)", f.n, img.generator),
    }
    .unwrap();
    if let Some(note) = &img.sign_note {
        writeln!(t, "  {note}").unwrap();
    }
    writeln!(t, "  gamma_bar(D)   = {}", img.gamma_bar_divisor).unwrap();
    writeln!(t, "  gamma_bar(P_o) = {}", img.gamma_bar_generator).unwrap();
    let tors = img.torsion.section.as_deref().unwrap_or("0");
    writeln!(
        t,
        "  gamma_bar(D) - n gamma_bar(P_o) = {} -> torsion {tors}",
        img.torsion.class
    )
    .unwrap();
    let r = &img.relation;
    writeln!(
        t,
        "  D ~ s(D) + {}O + {}F + sum b Θ, s(D).O = {}",
        r.o_coeff, r.f_coeff, r.section_dot_o
    )
    .unwrap();
    writeln!(t, "P_D = {}", img.point).unwrap();
    t
}

pub fn image(src: Source, divisor: &str, generator: &str) -> Result<Report> {
    let doc = load(src)?;
    let table = doc.table()?;
    let img = abel_jacobi_image(&table, divisor, generator)?;
    Ok(Report::new(image_json(&img), image_text(&img)))
}

fn decision_json(d: &CoverDecision) -> Value {
    json!({ "n": d.n, "exists": d.exists, "trace": d.trace })
}

pub fn cover(src: Option<Source>, ty: ArrangementType, lo: i64, hi: i64) -> Result<Report> {
    if lo < 3 {
        return Err(Error::Parse(format!("n = {lo}; covers need n ≥ 3")));
    }
    if hi < lo {
        return Err(Error::Parse(format!("empty range {lo}..{hi}")));
    }
    let doc = load(src.unwrap_or(Source::Bundled(ty)))?;
    let table = doc.table()?;
    let decisions = cover_sweep(&table, ty, lo, hi)?;
    let mut text = String::new();
    if lo == hi {
        let d = &decisions[0];
        writeln!(
            text,
            "{ty}, n = {}: D_{} cover {}",
            d.n,
            2 * d.n,
            if d.exists { "exists" } else { "does not exist" }
        )
        .unwrap();
        for line in &d.trace {
            writeln!(text, "  {line}").unwrap();
        }
    } else {
        writeln!(text, "{ty}, n = {lo}..{hi}").unwrap();
        for d in &decisions {
            writeln!(
                text,
                "  n = {:>3}: {}",
                d.n,
                if d.exists { "exists" } else { "-" }
            )
            .unwrap();
        }
        let hits: Vec<String> = decisions
            .iter()
            .filter(|d| d.exists)
            .map(|d| d.n.to_string())
            .collect();
        writeln!(text, "exists for n in {{{}}}", hits.join(", ")).unwrap();
    }
    let json = json!({
        "type": ty,
        "decisions": decisions.iter().map(decision_json).collect::<Vec<_>>(),
    });
    Ok(Report::new(json, text))
}

pub fn parse_sign(s: &str) -> Result<i8> {
    match s.trim() {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(Error::Parse(format!("sign `{s}` (expected + or -)"))),
    }
}

pub fn parse_sweep(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("sweep `{s}` (expected a..b)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.trim_start_matches('=');
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

pub enum ArrangementInput<'a> {
    Params { s1: &'a str, s2: &'a str },
    Random(u64),
}

pub fn arrangement(input: ArrangementInput, sign: i8) -> Result<Report> {
    let arr: Arrangement = match input {
        ArrangementInput::Params { s1, s2 } => {
            generate_arrangement(&parse_rational(s1)?, &parse_rational(s2)?, sign)?
        }
        ArrangementInput::Random(seed) => seeded_arrangement(seed, sign),
    };
    let img = pipeline_image(&arr)?;
    let mut text = String::new();
    writeln!(
        text,
        "nodal cubic z*y^2 = x^3 + x^2*z, s1 = {}, s2 = {}, sign {:+}",
        format_rational(&arr.s1),
        format_rational(&arr.s2),
        arr.sign
    )
    .unwrap();
    for i in 0..3 {
        writeln!(
            text,
            "  q{} = {}   p{} = {}",
            i + 1,
            arr.q[i],
            i + 1,
            arr.p[i]
        )
        .unwrap();
    }
    writeln!(text, "{}", arr.type_tag).unwrap();
    writeln!(text, "P(E+) = {}", img.point).unwrap();
    let json = json!({
        "arrangement": serde_json::to_value(&arr).expect("arrangement serializes"),
        "type": arr.type_tag,
        "image": image_json(&img),
    });
    Ok(Report::new(json, text))
}

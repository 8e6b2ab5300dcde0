use std::fmt::Write as _;

use ellsurf::config::ConfigDocument;
use ellsurf::dihedral::{cover_sweep, verify_ns_relation};
use ellsurf::exactalg::{frac, rat, QMatrix};
use ellsurf::kodaira::fiber_data;
use ellsurf::mwgroup::{abel_jacobi_image, shioda_tate_check, TorsionGroup};
use ellsurf::nslattice::{FormalClass, Symbol};
use ellsurf::scenario::{
    type_i_rhs, type_ii_lhs, type_ii_rhs, ArrangementType, E_MINUS, E_PLUS, GENERATOR,
};
use ellsurf::{FiberKind, Result};
use serde_json::json;

use crate::report::Report;

struct Check {
    name: &'static str,
    expected: String,
    got: std::result::Result<String, String>,
}

impl Check {
    fn pass(&self) -> bool {
        self.got.as_ref() == Ok(&self.expected)
    }
}

fn run<F: FnOnce() -> Result<String>>(name: &'static str, expected: &str, f: F) -> Check {
    Check {
        name,
        expected: expected.to_string(),
        got: f().map_err(|e| e.to_string()),
    }
}

fn golden_i0star() -> (QMatrix, QMatrix) {
    let a = QMatrix::from_i64_rows(&[
        vec![-2, 0, 0, 1],
        vec![0, -2, 0, 1],
        vec![0, 0, -2, 1],
        vec![1, 1, 1, -2],
    ]);
    let h = frac(-1, 2);
    let m = rat(-1);
    let a_inv = QMatrix::from_rows(vec![
        vec![m.clone(), h.clone(), h.clone(), m.clone()],
        vec![h.clone(), m.clone(), h.clone(), m.clone()],
        vec![h.clone(), h.clone(), m.clone(), m.clone()],
        vec![m.clone(), m.clone(), m.clone(), rat(-2)],
    ])
    .expect("4x4");
    (a, a_inv)
}

pub fn demo(type1: &ConfigDocument, type2: &ConfigDocument) -> Report {
    let mut checks = Vec::new();
    checks.push(run("I0* matrix A and inverse", "match", || {
        let d = fiber_data(FiberKind::IStar(0))?;
        let (a, a_inv) = golden_i0star();
        Ok(if d.a == a && d.a_inv == a_inv {
            "match"
        } else {
            "differ"
        }
        .into())
    }));
    checks.push(run("I0* component group", "(Z/2)^2", || {
        Ok(fiber_data(FiberKind::IStar(0))?.component_group.to_string())
    }));
    checks.push(run("<P_o,P_o>", "1/2", || {
        Ok(ellsurf::exactalg::format_rational(
            &type2.table()?.height(GENERATOR)?,
        ))
    }));
    checks.push(run("Shioda-Tate rank", "10 = 2 + 7 + 1", || {
        let r = shioda_tate_check(&type2.surface, type2.surface.ns_rank.unwrap_or(0));
        if !r.pass {
            return Ok(format!(
                "declared {} but expected {}",
                r.declared, r.expected
            ));
        }
        Ok(format!(
            "{} = 2 + {} + {}",
            r.expected,
            r.trivial_rank - 2,
            r.free_rank
        ))
    }));
    checks.push(run("torsion group", "(Z/2)^2", || {
        Ok(TorsionGroup::from_table(&type2.table()?)?.group.to_string())
    }));
    checks.push(run("Type II: n^2 for E+", "4", || {
        let img = abel_jacobi_image(&type2.table()?, E_PLUS, GENERATOR)?;
        Ok(ellsurf::exactalg::format_rational(&img.free.n_squared))
    }));
    checks.push(run("Type II: P(E+)", "2·P_o + 0", || {
        Ok(abel_jacobi_image(&type2.table()?, E_PLUS, GENERATOR)?
            .point
            .to_string())
    }));
    checks.push(run("Type II: P(E-)", "-2·P_o + 0", || {
        Ok(abel_jacobi_image(&type2.table()?, E_MINUS, GENERATOR)?
            .point
            .to_string())
    }));
    checks.push(run("Type I: P(E+)", "O", || {
        Ok(abel_jacobi_image(&type1.table()?, E_PLUS, GENERATOR)?
            .point
            .to_string())
    }));
    checks.push(run(
        "Type I: E+ ~ 3O + 3F - 2Θ1 - 2Θ2 - 2Θ3 - 3Θ4",
        "equivalent",
        || {
            let e = FormalClass::symbol(Symbol::curve(E_PLUS));
            Ok(verify_ns_relation(&type1.table()?, &e, &type_i_rhs())?.to_string())
        },
    ));
    checks.push(run(
        "Type II: E+ + 2(Θ∞2 + Θ∞3 + Θ11) - E- ~ 4(...)",
        "equivalent",
        || Ok(verify_ns_relation(&type2.table()?, &type_ii_lhs(), &type_ii_rhs())?.to_string()),
    ));
    checks.push(run("Type I covers, n = 3..50", "all", || {
        let d = cover_sweep(&type1.table()?, ArrangementType::TypeI, 3, 50)?;
        Ok(if d.iter().all(|x| x.exists) {
            "all".into()
        } else {
            exists_list(&d)
        })
    }));
    checks.push(run("Type II covers, n = 3..50", "4", || {
        Ok(exists_list(&cover_sweep(
            &type2.table()?,
            ArrangementType::TypeII,
            3,
            50,
        )?))
    }));

    let mut text = String::new();
    let mut rows = Vec::new();
    for c in &checks {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        let got = match &c.got {
            Ok(v) => v.clone(),
            Err(e) => format!("error: {e}"),
        };
        writeln!(text, "{status}  {}: {got}", c.name).unwrap();
        if !c.pass() {
            writeln!(text, "      expected {}", c.expected).unwrap();
        }
        rows.push(json!({ "check": c.name, "expected": c.expected, "got": got, "pass": c.pass() }));
    }
    let failures = checks.iter().filter(|c| !c.pass()).count();
    writeln!(
        text,
        "{} passed, {failures} failed",
        checks.len() - failures
    )
    .unwrap();
    let mut report = Report::new(json!({ "checks": rows, "failures": failures }), text);
    report.failed = failures > 0;
    report
}

fn exists_list(d: &[ellsurf::dihedral::CoverDecision]) -> String {
    let v: Vec<String> = d
        .iter()
        .filter(|x| x.exists)
        .map(|x| x.n.to_string())
        .collect();
    v.join(",")
}

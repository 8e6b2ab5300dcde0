use std::process::ExitCode;

use ellsurf::arrangement::{
    collinear, generate_arrangement, param_point, pipeline_image, random_arrangement, random_param,
};
use ellsurf::dihedral::{d2n_cover_exists, verify_ns_relation};
use ellsurf::exactalg::{frac, rat, QMatrix, Rational};
use ellsurf::kodaira::{catalog, component_group, fiber_data, FiberKind};
use ellsurf::mwgroup::{abel_jacobi_image, gamma_bar, shioda_tate_check, FiberGroups};
use ellsurf::nslattice::{build_table, DivisorProfile, FormalClass, Symbol};
use ellsurf::scenario::{
    bundled, bundled_table, type_i_rhs, type_ii_lhs, type_ii_rhs, ArrangementType, E_PLUS,
    GENERATOR,
};
use ellsurf::{AbelianGroup, Error};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Named = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn q(rows: &[&[(i64, i64)]]) -> QMatrix {
    QMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| frac(n, d)).collect())
            .collect(),
    )
    .unwrap()
}

fn fiber_catalog() -> Check {
    let data = fiber_data(FiberKind::IStar(0)).map_err(|e| e.to_string())?;
    let a = QMatrix::from_i64_rows(&[
        vec![-2, 0, 0, 1],
        vec![0, -2, 0, 1],
        vec![0, 0, -2, 1],
        vec![1, 1, 1, -2],
    ]);
    let a_inv = q(&[
        &[(-1, 1), (-1, 2), (-1, 2), (-1, 1)],
        &[(-1, 2), (-1, 1), (-1, 2), (-1, 1)],
        &[(-1, 2), (-1, 2), (-1, 1), (-1, 1)],
        &[(-1, 1), (-1, 1), (-1, 1), (-2, 1)],
    ]);
    ensure(data.a == a, format!("A =\n{}", data.a))?;
    ensure(data.a_inv == a_inv, format!("A⁻¹ =\n{}", data.a_inv))
}

fn component_groups() -> Check {
    let data = fiber_data(FiberKind::IStar(0)).map_err(|e| e.to_string())?;
    let g = &data.component_group;
    ensure(*g == AbelianGroup::new([2, 2]), format!("group {g}"))?;
    let e: Vec<_> = (1..=3).map(|i| data.dual_class(i).unwrap()).collect();
    ensure(
        e.iter().all(|x| !x.is_zero()),
        "a simple component has the zero class",
    )?;
    ensure(
        data.dual_class(4).unwrap().is_zero(),
        "Θ4 has a nonzero class",
    )?;
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        ensure(
            g.add(&e[i], &e[j]) == e[k],
            format!("e{} + e{} ≠ e{}", i + 1, j + 1, k + 1),
        )?;
    }
    for kind in catalog(12) {
        let d = fiber_data(kind).map_err(|e| e.to_string())?;
        let det = d.a.det().map_err(|e| e.to_string())?;
        let order = BigInt::from(d.component_group.order());
        ensure(
            det.to_integer().magnitude() == order.magnitude(),
            format!("{kind}: |det A| ≠ |G|"),
        )?;
        let expected = match kind {
            FiberKind::I(n) => AbelianGroup::new([n as i64]),
            FiberKind::IStar(n) if n % 2 == 0 => AbelianGroup::new([2, 2]),
            FiberKind::IStar(_) => AbelianGroup::new([4]),
            FiberKind::III | FiberKind::IIIStar => AbelianGroup::new([2]),
            FiberKind::IV | FiberKind::IVStar => AbelianGroup::new([3]),
            FiberKind::IIStar => AbelianGroup::trivial(),
        };
        ensure(
            component_group(kind).unwrap() == expected,
            format!("{kind}: group {}", d.component_group),
        )?;
        let mut simple: Vec<_> = (0..d.component_count())
            .filter(|&i| d.is_simple(i))
            .map(|i| d.dual_class(i).unwrap())
            .collect();
        simple.sort();
        let mut all = d.component_group.elements();
        all.sort();
        ensure(
            simple == all,
            format!("{kind}: simple components do not biject onto G"),
        )?;
    }
    Ok(())
}

fn section4() -> Check {
    for (sq, n, zero) in [(1, 2, false), (3, 0, true)] {
        let mut cfg = bundled(ArrangementType::TypeII);
        let e = cfg.divisor_mut(E_PLUS).unwrap();
        e.self_intersection = rat(sq);
        e.dot_sections
            .insert(GENERATOR.into(), if sq == 1 { 0 } else { 1 });
        cfg.divisors.retain(|d| d.name == E_PLUS);
        let t = cfg.table().map_err(|e| e.to_string())?;
        let img = abel_jacobi_image(&t, E_PLUS, GENERATOR).map_err(|e| e.to_string())?;
        ensure(
            img.free.n_squared == rat(n * n),
            format!("(E+)² = {sq}: n² = {}", img.free.n_squared),
        )?;
        ensure(
            img.point.free_coeff == BigInt::from(n),
            format!("(E+)² = {sq}: n = {}", img.point.free_coeff),
        )?;
        ensure(
            img.point.torsion.is_zero(),
            format!("(E+)² = {sq}: torsion {}", img.point.torsion),
        )?;
        ensure(
            img.point.is_zero() == zero,
            format!("(E+)² = {sq}: P = {}", img.point),
        )?;
    }
    Ok(())
}

fn height() -> Check {
    let t = bundled_table(ArrangementType::TypeII).map_err(|e| e.to_string())?;
    let h = t.height(GENERATOR).map_err(|e| e.to_string())?;
    ensure(h == frac(1, 2), format!("⟨P_o,P_o⟩ = {h}"))?;
    let h2 = t
        .height_pairing(GENERATOR, GENERATOR)
        .map_err(|e| e.to_string())?;
    ensure(h2 == frac(1, 2), format!("-φ(P_o)² = {h2}"))
}

fn ns_relations() -> Check {
    let t1 = bundled_table(ArrangementType::TypeI).map_err(|e| e.to_string())?;
    let e = FormalClass::symbol(Symbol::curve(E_PLUS));
    let rhs = type_i_rhs();
    let v = verify_ns_relation(&t1, &e, &rhs).map_err(|e| e.to_string())?;
    ensure(v.is_equivalent(), format!("Type I: {v}"))?;
    let sq_l = t1.intersect(&e, &e).unwrap();
    let sq_r = t1.intersect(&rhs, &rhs).unwrap();
    ensure(
        sq_l == rat(3) && sq_r == rat(3),
        format!("squares {sq_l}, {sq_r}"),
    )?;
    let th = FormalClass::symbol(Symbol::theta("inf", 1));
    ensure(
        t1.intersect(&e, &th).unwrap() == rat(1) && t1.intersect(&rhs, &th).unwrap() == rat(1),
        "·Θ∞,1 ≠ 1",
    )?;
    let t2 = bundled_table(ArrangementType::TypeII).map_err(|e| e.to_string())?;
    let v = verify_ns_relation(&t2, &type_ii_lhs(), &type_ii_rhs()).map_err(|e| e.to_string())?;
    ensure(v.is_equivalent(), format!("Type II: {v}"))
}

fn cover_table() -> Check {
    for n in 3..=50 {
        let i = d2n_cover_exists(ArrangementType::TypeI, n).map_err(|e| e.to_string())?;
        ensure(i.exists, format!("Type I, n = {n}: no cover"))?;
        let ii = d2n_cover_exists(ArrangementType::TypeII, n).map_err(|e| e.to_string())?;
        ensure(
            ii.exists == (n == 4),
            format!("Type II, n = {n}: exists = {}", ii.exists),
        )?;
    }
    Ok(())
}

fn arrangements() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11);
    for _ in 0..100 {
        for sign in [1, -1] {
            let arr = random_arrangement(&mut rng, sign);
            let col = collinear(&arr.q[0], &arr.q[1], &arr.q[2]);
            ensure(
                col == (sign == 1),
                format!("s = ({}, {}), sign {sign}: collinear {col}", arr.s1, arr.s2),
            )?;
            let img = pipeline_image(&arr).map_err(|e| e.to_string())?;
            let want = if sign == 1 { "O" } else { "2·P_o + 0" };
            ensure(
                img.point.to_string() == want,
                format!("sign {sign}: P = {}", img.point),
            )?;
        }
    }
    let mut positives = 0;
    for k in 0..500 {
        let t1 = random_param(&mut rng);
        let t2 = random_param(&mut rng);
        let u1 = t1.group_coordinate().unwrap();
        let u2 = t2.group_coordinate().unwrap();
        let t3 = if k % 2 == 0 {
            match ellsurf::CubicParam::from_group_coordinate(&(rat(1) / (&u1 * &u2))) {
                Ok(t) => t,
                Err(_) => random_param(&mut rng),
            }
        } else {
            random_param(&mut rng)
        };
        let u3 = t3.group_coordinate().unwrap();
        let pts: Vec<_> = [&t1, &t2, &t3]
            .iter()
            .map(|t| param_point(t).unwrap())
            .collect();
        if pts[0] == pts[1] || pts[1] == pts[2] || pts[0] == pts[2] {
            continue;
        }
        let by_u = &u1 * &u2 * &u3 == rat(1);
        positives += by_u as usize;
        ensure(
            by_u == collinear(&pts[0], &pts[1], &pts[2]),
            format!("t = ({t1}, {t2}, {t3}): u-criterion {by_u}"),
        )?;
    }
    ensure(
        positives > 100,
        format!("only {positives} collinear samples"),
    )?;
    let a = generate_arrangement(&rat(2), &rat(3), 1).map_err(|e| e.to_string())?;
    ensure(
        collinear(&a.q[0], &a.q[1], &a.q[2]),
        "(2, 3, +1) not collinear",
    )
}

fn random_profile(rng: &mut ChaCha8Rng, name: &str) -> DivisorProfile {
    let d = rng.gen_range(0..6);
    let sq = rng.gen_range(-8..12);
    let mut p = DivisorProfile::new(name, d, rat(sq), rng.gen_range(-2..4));
    p = p.with_c(
        "inf",
        &(0..4).map(|_| rng.gen_range(-2..3)).collect::<Vec<_>>(),
    );
    for f in ["1", "2", "3"] {
        p = p.with_c(f, &[rng.gen_range(-2..3)]);
    }
    p
}

fn structure() -> Check {
    let surface = bundled(ArrangementType::TypeI).surface;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let a = random_profile(&mut rng, "A");
        let b = random_profile(&mut rng, "B");
        let mut s = DivisorProfile::new("S", a.d + b.d, rat(0), a.dot_o + b.dot_o);
        for (f, ca) in &a.c {
            let cb = &b.c[f];
            s = s.with_c(
                f,
                &ca.iter().zip(cb).map(|(x, y)| x + y).collect::<Vec<_>>(),
            );
        }
        let t = build_table(&surface, &[a, b, s]).map_err(|e| e.to_string())?;
        let phi = t.phi0("A").unwrap();
        for g in t.trivial_generators() {
            let x = t.intersect(&phi, &FormalClass::symbol(g.clone())).unwrap();
            ensure(
                x == Rational::from_integer(0.into()),
                format!("φ₀(A)·{g:?} = {x}"),
            )?;
        }
        ensure(
            t.intersect(&phi, &phi).unwrap() == t.phi0_self("A").unwrap(),
            "phi0_self disagrees with the formal square",
        )?;
        let fg = FiberGroups::of(&t);
        let sum = fg.add(&gamma_bar(&t, "A").unwrap(), &gamma_bar(&t, "B").unwrap());
        ensure(gamma_bar(&t, "S").unwrap() == sum, "γ̄ not additive")?;
    }
    let r = shioda_tate_check(&surface, 10);
    ensure(
        r.pass && r.trivial_rank == 9 && r.free_rank == 1,
        format!("{r:?}"),
    )?;
    ensure(
        surface
            .fibers
            .iter()
            .map(|f| f.kind.component_count() - 1)
            .sum::<usize>()
            == 7,
        "fiber contribution ≠ 7",
    )
}

fn inconsistency() -> Check {
    let mut cfg = bundled(ArrangementType::TypeII);
    cfg.divisor_mut(E_PLUS).unwrap().self_intersection = rat(2);
    let t = cfg.table().map_err(|e| e.to_string())?;
    match abel_jacobi_image(&t, E_PLUS, GENERATOR) {
        Err(e @ Error::Inconsistent(_)) => {
            let msg = e.to_string();
            ensure(
                msg.contains("n² = 2 is not a perfect square")
                    && msg.contains("inconsistent intersection data"),
                msg,
            )
        }
        other => Err(format!("expected rejection, got {other:?}")),
    }
}

fn main() -> ExitCode {
    let checks: [Named; 9] = [
        ("I0* intersection matrix and inverse", fiber_catalog),
        ("component groups and dual classes", component_groups),
        ("image of E+ for (E+)² = 1 and 3", section4),
        ("height of P_o", height),
        ("NS relations through intersection profiles", ns_relations),
        ("dihedral cover table for n = 3..50", cover_table),
        ("random arrangements through the pipeline", arrangements),
        ("projection, additivity and Shioda–Tate", structure),
        ("non-square n² rejected", inconsistency),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {} {name}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Expected values are computed here independently of the library wherever
//! they are derived rather than quoted.

use std::process::ExitCode;

use num_traits::{One, Zero};
use phaseprint::classify::ClassificationLabel::{self, *};
use phaseprint::flow::export::{orientation_csv, orientation_pgm, portrait_csv, portrait_svg};
use phaseprint::flow::{
    find_singularities, flow_samples, orbit_period, orientation_field, phase_portrait, DomainU, FinderConfig,
    IntegrationSettings, OrientationConfig,
};
use phaseprint::index::{
    connexion_check, delta_feasibility, enclosed_index_sum, winding_index, ConnexionEntry, ContourSpec,
};
use phaseprint::normalform::{
    assemble_field, hermite_solve, template, whorl_problem, ConstraintFile, TemplateId,
};
use phaseprint::polyfield::{int, rational};
use phaseprint::report::{classify_field, ClassifyConfig, FieldReport};
use phaseprint::{BivariatePolynomial, Parallelism, PlanarVectorField, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(id: TemplateId) -> FieldReport {
    let (field, spec) = template(id);
    classify_field(&field, &spec.domain, &ClassifyConfig::default()).expect("template classifies")
}

/// Central-difference Jacobian at a point, independent of the exact one.
fn numeric_jacobian(f: &PlanarVectorField, x: f64, y: f64) -> [[f64; 2]; 2] {
    let h = 1e-5;
    let (px, qx) = f.evaluate(x + h, y);
    let (mx, nx) = f.evaluate(x - h, y);
    let (py, qy) = f.evaluate(x, y + h);
    let (my, ny) = f.evaluate(x, y - h);
    [
        [(px - mx) / (2.0 * h), (py - my) / (2.0 * h)],
        [(qx - nx) / (2.0 * h), (qy - ny) / (2.0 * h)],
    ]
}

fn parse_r(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

type Expected = (TemplateId, &'static [([i64; 2], ClassificationLabel)]);

fn criterion_1() -> Outcome {
    let expected: [Expected; 7] = [
        (TemplateId::Whorl, &[([-1, 0], Cusp), ([0, 0], Center), ([1, 0], Cusp)]),
        (TemplateId::Spiral, &[([-1, 0], Cusp), ([0, 0], UnstableFocus), ([1, 0], Cusp)]),
        (TemplateId::Twist, &[([0, 0], ImproperNodeUnstable), ([1, 0], Cusp)]),
        (TemplateId::TentedArch, &[([0, 0], Cusp)]),
        (TemplateId::ObliqueStria, &[([0, 0], Cusp)]),
        (TemplateId::PlainArch, &[]),
        (TemplateId::DegenerateSpiral, &[([-1, 0], Cusp), ([0, 0], FocusOrCenter), ([1, 0], Cusp)]),
    ];
    for (id, want) in expected {
        let r = report(id);
        let got: Vec<([String; 2], ClassificationLabel)> = r
            .points
            .iter()
            .map(|p| (p.exact.clone().unwrap_or_else(|| ["?".into(), "?".into()]), p.label))
            .collect();
        let want: Vec<([String; 2], ClassificationLabel)> =
            want.iter().map(|(a, l)| ([a[0].to_string(), a[1].to_string()], *l)).collect();
        ensure(got == want, || format!("{id}: got {got:?}, want {want:?}"))?;
    }

    let whorl = report(TemplateId::Whorl);
    ensure(whorl.points[1].certificate.is_some(), || "whorl centre has no certificate".into())?;
    for cusp in [&whorl.points[0], &whorl.points[2]] {
        let n = cusp.nilpotent.as_ref().ok_or("whorl cusp lacks nilpotent data")?;
        ensure(n.k == 2 && n.b_n.is_zero(), || format!("whorl cusp data {n:?}"))?;
    }

    // tau and delta against a finite-difference Jacobian
    let check_jac = |id: TemplateId, k: usize, tau: f64, delta: f64| -> Result<(), String> {
        let r = report(id);
        let p = &r.points[k];
        let j = numeric_jacobian(&id.field(), p.location[0], p.location[1]);
        let (nt, nd) = (j[0][0] + j[1][1], j[0][0] * j[1][1] - j[0][1] * j[1][0]);
        ensure((nt - tau).abs() < 1e-6 && (nd - delta).abs() < 1e-6, || {
            format!("{id}: finite differences give tau {nt}, delta {nd}")
        })?;
        ensure(parse_r(&p.tau) == tau && parse_r(&p.delta) == delta, || {
            format!("{id}: reported tau {} delta {}", p.tau, p.delta)
        })
    };
    check_jac(TemplateId::Spiral, 1, 1.0, 0.5)?;
    check_jac(TemplateId::Twist, 0, 2.0, 1.0)?;
    let twist = report(TemplateId::Twist);
    ensure(twist.points[0].discriminant == "0", || "twist discriminant is not 0".into())?;

    let ds = report(TemplateId::DegenerateSpiral);
    let n = ds.points[1].nilpotent.as_ref().ok_or("degenerate spiral lacks nilpotent data")?;
    ensure(n.k == 5 && n.m == 2 && n.n == Some(5), || format!("degenerate spiral data {n:?}"))?;
    Ok("seven templates, exact labels".into())
}

fn criterion_2() -> Outcome {
    let cases = [
        ("x ; -y", Saddle, -1),
        ("x ; y", UnstableNode, 1),
        ("x - y ; x + y", UnstableFocus, 1),
        ("y ; -x", Center, 1),
        ("y ; x^2", Cusp, 0),
        ("y ; x^4 + x*y", SaddleNode, 0),
    ];
    let dom = DomainU::square(1.0).unwrap();
    let cfg = ClassifyConfig {
        compute_sectors: false,
        ..Default::default()
    };
    for (src, label, index) in cases {
        let f: PlanarVectorField = src.parse().unwrap();
        let r = classify_field(&f, &dom, &cfg).map_err(|e| e.to_string())?;
        ensure(r.points.len() == 1 && r.points[0].label == label, || {
            format!("{src}: labels {:?}", r.points.iter().map(|p| p.label).collect::<Vec<_>>())
        })?;
        let w = winding_index(&f, &ContourSpec::circle([0.0, 0.0], 0.1)).map_err(|e| e.to_string())?;
        ensure(w.residual.is_some_and(|r| r < 1e-6), || format!("{src}: residual {:?}", w.residual))?;
        ensure(w.as_integer() == Some(index), || format!("{src}: winding {w}"))?;
        ensure(label.table_index() == Some(index), || format!("{src}: table {:?}", label.table_index()))?;
    }
    Ok("six canonical points, winding equals table".into())
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for id in TemplateId::ALL {
        for p in report(id).points {
            let s = p.sectors.as_ref().ok_or_else(|| format!("{id} {:?}: no sector profile", p.location))?;
            ensure(s.parity_ok(), || format!("{id} {:?}: e={} h={}", p.location, s.e, s.h))?;
            // independent evaluation of 1 + (e - h)/2
            let bendixson = Rational::one() + rational(s.e as i64 - s.h as i64, 2);
            let w = p.winding_index.as_ref().ok_or("missing winding index")?;
            ensure(bendixson.is_integer() && w.value == bendixson, || {
                format!("{id} {:?}: bendixson {bendixson} winding {w}", p.location)
            })?;
            let b = p.bendixson_index.as_ref().ok_or("missing Bendixson index")?;
            ensure(b.value == bendixson, || format!("{id}: reported bendixson {b}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} template points"))
}

fn criterion_4() -> Outcome {
    let three = delta_feasibility(3, true);
    ensure(!three.feasible && three.bendixson == Some(rational(-1, 2)), || format!("{three:?}"))?;
    let four = delta_feasibility(4, true);
    ensure(four.feasible && four.bendixson == Some(int(-1)), || format!("{four:?}"))?;
    Ok("three hyperbolic sectors infeasible (-1/2), four feasible".into())
}

fn criterion_5() -> Outcome {
    let whorl = hermite_solve(&whorl_problem()).map_err(|e| e.to_string())?;
    // -x (x^2 - 1)^2 = -x^5 + 2x^3 - x
    let want = BivariatePolynomial::from_x_coeffs(&[int(0), int(-1), int(0), int(2), int(0), int(-1)]);
    ensure(whorl.poly == want, || format!("whorl profile {}", whorl.poly))?;

    let file = ConstraintFile::pendulum();
    let pi = phaseprint::polyfield::parse_rational(&file.constants["pi"]).map_err(|e| e.to_string())?;
    let parsed = file.parse().map_err(|e| e.to_string())?;
    let got = hermite_solve(&parsed.problem).map_err(|e| e.to_string())?.poly;
    // c x (x^2 - pi^2) with f'(0) = -c pi^2 = -1
    let c = Rational::one() / (&pi * &pi);
    let pendulum = BivariatePolynomial::from_x_coeffs(&[int(0), -(&c * &pi * &pi), int(0), c.clone()]);
    ensure(got == pendulum, || format!("pendulum profile {got}"))?;
    let d = got.derivative_x(1);
    ensure(d.eval_x(&int(0)) == int(-1), || "f'(0) != -1".into())?;
    ensure(d.eval_x(&pi) == int(2) && d.eval_x(&-pi.clone()) == int(2), || "f'(+-pi) != 2".into())?;
    // the sign-flipped profile has slope +1 at the origin
    let flipped = pendulum.scale(&int(-1));
    ensure(flipped.derivative_x(1).eval_x(&int(0)) == int(1), || "flipped slope".into())?;
    Ok(format!(
        "whorl -x(x^2-1)^2; pendulum x(x^2-pi^2)/pi^2 with pi = {} (the negated form has f'(0) = +1)",
        file.constants["pi"]
    ))
}

fn energy(x: f64, y: f64) -> f64 {
    y * y / 2.0 + x * x / 2.0 - x.powi(4) / 2.0 + x.powi(6) / 6.0
}

fn criterion_6() -> Outcome {
    let f = TemplateId::Whorl.field();
    let settings = IntegrationSettings::default();
    let seed = [0.5, 0.0];
    let period = orbit_period(&f, seed, 100.0, &settings).ok_or("no period found")?;
    let samples = flow_samples(&f, seed, 5.0 * period, &settings);
    let e0 = energy(seed[0], seed[1]);
    let drift = samples
        .iter()
        .map(|(_, z)| (energy(z[0], z[1]) - e0).abs() / e0)
        .fold(0.0, f64::max);
    let (t_end, z_end) = samples.last().copied().ok_or("no samples")?;
    ensure((t_end - 5.0 * period).abs() < 1e-9, || format!("stopped at t = {t_end}"))?;
    ensure(drift < 1e-6, || format!("max |dE|/E0 = {drift:e}"))?;
    ensure((z_end[0] - seed[0]).hypot(z_end[1] - seed[1]) < 1e-5, || format!("end point {z_end:?}"))?;
    Ok(format!("period {period:.6}, max |dE|/E0 = {drift:.2e} over 5 periods"))
}

fn criterion_7() -> Outcome {
    let finder = FinderConfig::default();
    let whorl = TemplateId::Whorl.field();
    let sq = DomainU::square(2.0).unwrap();
    let pts: Vec<[f64; 2]> = find_singularities(&whorl, &sq, &finder).map_err(|e| e.to_string())?.iter().map(|p| p.approx).collect();
    let r = enclosed_index_sum(&whorl, &ContourSpec::rectangle(-2.0, 2.0, -2.0, 2.0), &pts, 0.1)
        .map_err(|e| e.to_string())?;
    ensure(r.boundary == 1 && r.sum == 1 && r.consistent, || format!("whorl {r:?}"))?;

    let parsed = ConstraintFile::pendulum().parse().map_err(|e| e.to_string())?;
    let pendulum = assemble_field(&hermite_solve(&parsed.problem).map_err(|e| e.to_string())?.poly, None);
    let sq4 = DomainU::square(4.0).unwrap();
    let pts: Vec<[f64; 2]> = find_singularities(&pendulum, &sq4, &finder).map_err(|e| e.to_string())?.iter().map(|p| p.approx).collect();
    ensure(pts.len() == 3, || format!("pendulum zeros {pts:?}"))?;
    let r = enclosed_index_sum(&pendulum, &ContourSpec::rectangle(-4.0, 4.0, -4.0, 4.0), &pts, 0.1)
        .map_err(|e| e.to_string())?;
    ensure(r.boundary == -1 && r.sum == -1 && r.consistent, || format!("pendulum {r:?}"))?;
    Ok("whorl +1 = 0 + 1 + 0; pendulum -1 = -1 + 1 - 1".into())
}

fn criterion_8() -> Outcome {
    // index table and sphere identity evaluated here
    let index_of = |l: &str| match l {
        "saddle" => -1,
        "node" | "focus" | "center" => 1,
        "cusp" | "saddle-node" => 0,
        _ => unreachable!(),
    };
    let sets: [&[&str]; 6] = [
        &["center", "cusp", "cusp"],
        &["node", "node", "focus", "saddle"],
        &["node", "node"],
        &["saddle", "node"],
        &["focus", "focus", "focus", "saddle"],
        &["saddle", "saddle", "node", "node", "node", "node"],
    ];
    let mut verdicts = Vec::new();
    for set in sets {
        let entries: Vec<ConnexionEntry> = set.iter().map(|s| s.parse().unwrap()).collect();
        let c = connexion_check(&entries, 0).map_err(|e| e.to_string())?;
        let sum: i64 = set.iter().map(|s| index_of(s)).sum();
        let feasible = sum == 2;
        ensure(c.total_index == int(sum) && c.feasible == feasible, || {
            format!("{set:?}: total {} feasible {}", c.total_index, c.feasible)
        })?;
        if set.iter().all(|s| matches!(*s, "node" | "focus" | "saddle")) {
            let id = c.hyperbolic_identity.as_ref().ok_or("missing n+f-s identity")?;
            ensure(id.holds == feasible && id.lhs == sum, || format!("{set:?}: identity {id:?}"))?;
        }
        verdicts.push(format!("{}:{}", set.join("+"), if feasible { "ok" } else { "no" }));
    }
    let whorl = connexion_check(&["center".parse().unwrap(), "cusp".parse().unwrap(), "cusp".parse().unwrap()], 0)
        .map_err(|e| e.to_string())?;
    ensure(!whorl.feasible && whorl.total_index == int(1), || "whorl set".into())?;
    Ok(verdicts.join(", "))
}

fn criterion_9() -> Outcome {
    let run = |par: Parallelism| -> Result<Vec<Vec<u8>>, String> {
        let mut out = Vec::new();
        for id in [TemplateId::Whorl, TemplateId::Twist, TemplateId::TentedArch] {
            let (field, spec) = template(id);
            let cfg = ClassifyConfig::default().with_parallelism(par);
            out.push(
                classify_field(&field, &spec.domain, &cfg)
                    .map_err(|e| e.to_string())?
                    .to_json()
                    .into_bytes(),
            );
            let p = phase_portrait(&field, &spec, par).map_err(|e| e.to_string())?;
            out.push(portrait_csv(&p).into_bytes());
            out.push(portrait_svg(&p).into_bytes());
            let known: Vec<[f64; 2]> = p.singular_points.iter().map(|s| s.approx).collect();
            let ocfg = OrientationConfig {
                parallelism: par,
                doubled: true,
                ..Default::default()
            };
            let o = orientation_field(&field, &spec.domain, &known, &ocfg);
            out.push(orientation_csv(&o).into_bytes());
            out.push(orientation_pgm(&o));
        }
        Ok(out)
    };
    let a = run(Parallelism::Parallel)?;
    let b = run(Parallelism::Parallel)?;
    let c = run(Parallelism::Sequential)?;
    ensure(a == b, || "repeated runs differ".into())?;
    ensure(a == c, || "sequential and parallel runs differ".into())?;
    let bytes: usize = a.iter().map(Vec::len).sum();
    Ok(format!("{} artifacts, {bytes} bytes identical across three runs", a.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("template classification", criterion_1),
        ("index suite", criterion_2),
        ("Bendixson cross-check", criterion_3),
        ("delta impossibility", criterion_4),
        ("Hermite reproduction", criterion_5),
        ("conservation", criterion_6),
        ("enclosed index consistency", criterion_7),
        ("connexion checks", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): pass - {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Behaviour of the capped sequence on the Scherk quadrilaterals.

use soliton_core::analysis::{
    boundary_normal_trace, classify_convergence, flux_report, VertexClass, DEFAULT_GROWTH_THRESHOLD,
};
use soliton_core::domain::{scherk_quadrilateral, EdgeKind, ScherkParams, ValidDomain};
use soliton_core::solver::{
    cap_boundary_values, comparison_check, solve_dirichlet, solve_dirichlet_with, solve_jenkins_serrin, CapSchedule,
    JsRun, SolverSettings,
};
use soliton_core::{MetricModel, Point};

fn r3() -> MetricModel {
    MetricModel::euclidean_r3(1.0)
}

fn domain(m: &MetricModel, p: ScherkParams) -> ValidDomain {
    ValidDomain::new(m, scherk_quadrilateral(m, &p).unwrap()).unwrap()
}

fn quad(m: &MetricModel, r: f64) -> ValidDomain {
    domain(m, ScherkParams::new(0.0, 2f64.ln(), r, -r))
}

fn caps() -> CapSchedule {
    CapSchedule::new(vec![2.0, 4.0, 8.0, 16.0]).unwrap()
}

fn run(m: &MetricModel, d: &ValidDomain, h: f64) -> JsRun {
    let run = solve_jenkins_serrin(m, d, &caps(), h).unwrap();
    assert!(run.is_complete());
    run
}

fn centre() -> Point {
    Point::new(0.0, 0.5 * 2f64.ln())
}

fn centroid_values(run: &JsRun) -> Vec<f64> {
    run.fields.iter().map(|f| f.value_at(centre()).unwrap()).collect()
}

#[test]
fn narrow_quadrilateral_converges() {
    let m = r3();
    let d = quad(&m, 0.3);
    let coarse = run(&m, &d, 0.04);
    let fine = run(&m, &d, 0.02);

    for r in [&coarse, &fine] {
        let v = centroid_values(r);
        let inc: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(inc.iter().all(|&x| x > 0.0), "{v:?}");
        assert!(inc.windows(2).all(|w| w[1] < w[0]), "{inc:?}");

        let div = classify_convergence(&m, &d, &r.fields, DEFAULT_GROWTH_THRESHOLD).unwrap();
        assert!(div.divergence_set_is_empty());
        assert_eq!(div.count(VertexClass::Divergent), 0);
    }

    let uc = coarse.fields[3].value_at(centre()).unwrap();
    let uf = fine.fields[3].value_at(centre()).unwrap();
    assert!((uc - uf).abs() <= 1e-2, "{uc} vs {uf}");
}

#[test]
fn infinite_edges_saturate_and_fluxes_balance() {
    let m = r3();
    let d = quad(&m, 0.3);
    let h = 0.04;
    let run = run(&m, &d, h);
    let top = &run.fields[3];
    for (i, e) in d.edges().iter().enumerate() {
        let samples = boundary_normal_trace(&m, top, &d, i).unwrap();
        let worst = samples.iter().map(|s| s.value.abs()).fold(0.0, f64::max);
        assert!(worst <= 1.0 + 5.0 * h, "edge {i}: {worst}");
        if e.kind == EdgeKind::A {
            let mut v: Vec<f64> = samples.iter().map(|s| s.value).collect();
            v.sort_by(f64::total_cmp);
            let median = v[v.len() / 2];
            assert!(median >= 0.9, "edge {i}: median trace {median}");
        }
    }
    for f in &run.fields {
        let rep = flux_report(&m, f, &d).unwrap();
        assert!(rep.max_excess() <= 1e-6, "{}", rep.to_key_value());
        assert!(rep.balance_ratio() <= 0.05, "{}", rep.to_key_value());
        for e in &rep.edges {
            assert!(e.flux.abs() <= e.length_f * (1.0 + 1e-6));
        }
    }
}

#[test]
fn constant_data_converges_everywhere() {
    let m = r3();
    let d = domain(
        &m,
        ScherkParams::new(0.0, 2f64.ln(), 0.3, -0.3).with_kinds([EdgeKind::C; 4]).with_data([1.5; 4]),
    );
    let run = run(&m, &d, 0.05);
    for f in &run.fields {
        assert!(f.u.iter().all(|&u| (u - 1.5).abs() < 1e-9));
    }
    let div = classify_convergence(&m, &d, &run.fields, DEFAULT_GROWTH_THRESHOLD).unwrap();
    assert_eq!(div.count(VertexClass::Divergent), 0);
    assert!(div.count(VertexClass::Convergent) > 0);
}

#[test]
fn wide_quadrilateral_diverges() {
    let m = r3();
    let d = quad(&m, 0.45);
    let run = run(&m, &d, 0.04);
    let v = centroid_values(&run);
    assert!(v[3] - v[2] >= 1.0, "{v:?}");
    let div = classify_convergence(&m, &d, &run.fields, DEFAULT_GROWTH_THRESHOLD).unwrap();
    assert!(!div.divergence_set_is_empty());
    assert!(div.count(VertexClass::Divergent) > 0);
}

#[test]
fn capped_problem_has_one_solution() {
    let m = r3();
    let d = quad(&m, 0.3);
    let run = run(&m, &d, 0.04);
    let bc = cap_boundary_values(&d, &run.mesh, 4.0);
    let cold = solve_dirichlet(&m, &run.mesh, &bc, None).unwrap();
    let warm = solve_dirichlet_with(&m, &run.mesh, &bc, None, Some(&run.fields[3].u), &SolverSettings::default()).unwrap();
    let diff = cold.u.iter().zip(&warm.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff <= 1e-6, "{diff}");
    let c = comparison_check(&cold, &warm).unwrap();
    assert!(c.max_abs_difference <= 1e-6);
}

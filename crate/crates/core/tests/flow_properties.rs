use std::collections::HashMap;

use phaseprint::flow::{
    find_singularities, integrate, phase_portrait, Direction, DomainU, FinderConfig, IntegrationSettings,
    TerminationReason,
};
use phaseprint::index::{enclosed_index_sum, ContourSpec};
use phaseprint::normalform::{template, TemplateId};
use phaseprint::polyfield::{int, rational};
use phaseprint::Parallelism;

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Distance from `p` to the polyline `b`, using segments.
fn point_to_polyline(p: [f64; 2], b: &[[f64; 2]]) -> f64 {
    if b.len() == 1 {
        return dist(p, b[0]);
    }
    b.windows(2)
        .map(|w| {
            let (u, v) = (w[0], w[1]);
            let d = [v[0] - u[0], v[1] - u[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((p[0] - u[0]) * d[0] + (p[1] - u[1]) * d[1]) / len2).clamp(0.0, 1.0)
            };
            dist(p, [u[0] + t * d[0], u[1] + t * d[1]])
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn forward_then_backward_returns_to_seed() {
    let big = DomainU::square(50.0).unwrap();
    let cases = [
        (TemplateId::Whorl, [0.5, 0.0]),
        (TemplateId::Whorl, [0.0, 0.9]),
        (TemplateId::Spiral, [0.2, 0.1]),
        (TemplateId::Twist, [-0.5, 0.3]),
        (TemplateId::TentedArch, [0.4, 0.7]),
        (TemplateId::PlainArch, [0.0, 0.0]),
    ];
    for (id, seed) in cases {
        let field = id.field();
        for l in [1.0, 4.0, 10.0] {
            let settings = IntegrationSettings {
                max_arclength: l,
                closure_tol: 0.0,
                ..Default::default()
            };
            let fwd = integrate(&field, seed, Direction::Forward, &big, &[], &settings).unwrap();
            assert_eq!(fwd.termination, TerminationReason::ArclengthBudget, "{id} {l}");
            let end = *fwd.vertices.last().unwrap();
            let back = IntegrationSettings {
                max_arclength: fwd.arclength,
                ..settings.clone()
            };
            let bwd = integrate(&field, end, Direction::Backward, &big, &[], &back).unwrap();
            let home = *bwd.vertices.last().unwrap();
            assert!(dist(home, seed) < 1e-5, "{id} L={l}: returned to {home:?}");
        }
    }
}

#[test]
fn plain_arch_runs_straight_to_the_boundary() {
    let (field, spec) = template(TemplateId::PlainArch);
    let p = integrate(&field, [0.0, 0.0], Direction::Forward, &spec.domain, &[], &Default::default()).unwrap();
    assert_eq!(p.termination, TerminationReason::ExitedDomain);
    assert!(p.vertices.iter().all(|v| v[1] == 0.0));
    let last = *p.vertices.last().unwrap();
    assert!((last[0] - spec.domain.x_max()).abs() <= 1e-10);
}

type Segment = ([f64; 2], [f64; 2]);

/// Segments of a set of polylines bucketed on a square grid.
struct SegmentGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<Segment>>,
}

impl SegmentGrid {
    fn new<'a>(lines: impl IntoIterator<Item = &'a [[f64; 2]]>, cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<_>> = HashMap::new();
        for line in lines {
            for w in line.windows(2) {
                let key = |v: f64| (v / cell).floor() as i64;
                let (x0, x1) = (key(w[0][0].min(w[1][0])), key(w[0][0].max(w[1][0])));
                let (y0, y1) = (key(w[0][1].min(w[1][1])), key(w[0][1].max(w[1][1])));
                for i in x0..=x1 {
                    for j in y0..=y1 {
                        buckets.entry((i, j)).or_default().push((w[0], w[1]));
                    }
                }
            }
        }
        SegmentGrid { cell, buckets }
    }

    /// Distance to the nearest segment, or infinity beyond one cell.
    fn distance(&self, p: [f64; 2]) -> f64 {
        let (ci, cj) = ((p[0] / self.cell).floor() as i64, (p[1] / self.cell).floor() as i64);
        let mut best = f64::INFINITY;
        for i in ci - 1..=ci + 1 {
            for j in cj - 1..=cj + 1 {
                for (u, v) in self.buckets.get(&(i, j)).into_iter().flatten() {
                    best = best.min(point_to_polyline(p, &[*u, *v]));
                }
            }
        }
        best
    }
}

#[test]
fn whorl_portrait_is_mirror_symmetric() {
    let (field, mut spec) = template(TemplateId::Whorl);
    // fine steps keep the chord error of the polylines below the tolerance
    spec.settings.max_step = 1e-3;
    let portrait = phase_portrait(&field, &spec, Parallelism::default()).unwrap();
    let grid = SegmentGrid::new(portrait.trajectories.iter().map(|t| t.polyline.vertices.as_slice()), 0.01);
    let mut worst: f64 = 0.0;
    for t in &portrait.trajectories {
        for v in &t.polyline.vertices {
            worst = worst.max(grid.distance([v[0], -v[1]]));
        }
    }
    assert!(worst < 1e-5, "mirror distance {worst}");
}

#[test]
fn whorl_orbits_do_not_cross() {
    let (field, spec) = template(TemplateId::Whorl);
    let portrait = phase_portrait(&field, &spec, Parallelism::default()).unwrap();
    // closed orbits seeded on the positive x-axis are nested level curves
    let closed: Vec<_> = portrait
        .trajectories
        .iter()
        .filter(|t| t.polyline.termination == TerminationReason::ClosedOrbit && t.start[1] == 0.0)
        .collect();
    assert_eq!(closed.len(), 12);
    for (i, a) in closed.iter().enumerate() {
        for b in &closed[i + 1..] {
            let d = a
                .polyline
                .vertices
                .iter()
                .step_by(4)
                .map(|v| point_to_polyline(*v, &b.polyline.vertices))
                .fold(f64::INFINITY, f64::min);
            assert!(d > 1e-3, "orbits from {:?} and {:?} come within {d}", a.start, b.start);
        }
    }
}

#[test]
fn pendulum_and_whorl_zero_sets() {
    use phaseprint::normalform::{assemble_field, hermite_solve, ConstraintFile};
    let finder = FinderConfig::default();
    let w = find_singularities(&TemplateId::Whorl.field(), &DomainU::square(2.0).unwrap(), &finder).unwrap();
    let got: Vec<_> = w.iter().map(|p| p.exact.clone().unwrap()).collect();
    assert_eq!(got, vec![(int(-1), int(0)), (int(0), int(0)), (int(1), int(0))]);

    let parsed = ConstraintFile::pendulum().parse().unwrap();
    let field = assemble_field(&hermite_solve(&parsed.problem).unwrap().poly, None);
    let p = find_singularities(&field, &DomainU::square(4.0).unwrap(), &finder).unwrap();
    let pi = rational(355, 113);
    let got: Vec<_> = p.iter().map(|p| p.exact.clone().unwrap()).collect();
    assert_eq!(got, vec![(-pi.clone(), int(0)), (int(0), int(0)), (pi, int(0))]);
}

#[test]
fn template_indices_sum_consistently() {
    let finder = FinderConfig::default();
    for id in TemplateId::ALL {
        let (field, spec) = template(id);
        let d = spec.domain;
        let pts: Vec<[f64; 2]> = find_singularities(&field, &d, &finder)
            .unwrap()
            .iter()
            .map(|p| p.approx)
            .collect();
        let contour = ContourSpec::rectangle(d.x_min(), d.x_max(), d.y_min(), d.y_max());
        let r = enclosed_index_sum(&field, &contour, &pts, 0.1).unwrap();
        assert!(r.consistent, "{id}: {r:?}");
    }
}

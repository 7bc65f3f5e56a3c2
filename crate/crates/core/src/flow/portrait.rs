use serde::{Deserialize, Serialize};

use super::{
    find_singularities, integrate, Direction, DomainU, FinderConfig, FlowError, IntegrationSettings, Polyline,
    SingularPoint,
};
use crate::classify::{characteristic_directions, sector_profile, SectorConfig};
use crate::parallel::{map_slice, Parallelism};
use crate::polyfield::PlanarVectorField;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedPoint {
    Point([f64; 2]),
    /// One seed per separatrix of the singular point nearest `center`, placed
    /// where the sector boundaries cross a ring of the given radius.
    Separatrices { center: [f64; 2], radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub at: SeedPoint,
    pub direction: Direction,
    #[serde(default = "yes")]
    pub include: bool,
}

fn yes() -> bool {
    true
}

impl Seed {
    pub fn point(x: f64, y: f64, direction: Direction) -> Self {
        Seed {
            at: SeedPoint::Point([x, y]),
            direction,
            include: true,
        }
    }

    pub fn separatrices(center: [f64; 2], radius: f64) -> Self {
        Seed {
            at: SeedPoint::Separatrices { center, radius },
            direction: Direction::Both,
            include: true,
        }
    }

    pub fn excluded(mut self) -> Self {
        self.include = false;
        self
    }
}

/// Seeds, domain and integration settings of a seed-relative phase portrait.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitSpec {
    pub domain: DomainU,
    pub seeds: Vec<Seed>,
    #[serde(default)]
    pub settings: IntegrationSettings,
}

impl PortraitSpec {
    pub fn validate(&self) -> Result<(), FlowError> {
        for (index, s) in self.seeds.iter().enumerate() {
            let at = match &s.at {
                SeedPoint::Point(p) => *p,
                SeedPoint::Separatrices { center, .. } => *center,
            };
            if !self.domain.contains(at) {
                return Err(FlowError::SeedOutsideDomain { index });
            }
        }
        if !self.seeds.iter().any(|s| s.include) {
            return Err(FlowError::NoIncludedSeed);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    /// Index of the generating seed in the spec.
    pub seed: usize,
    pub start: [f64; 2],
    pub direction: Direction,
    #[serde(flatten)]
    pub polyline: Polyline,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Portrait {
    pub domain: DomainU,
    pub singular_points: Vec<SingularPoint>,
    pub trajectories: Vec<Trajectory>,
}

/// Starting points on the separatrices of the point nearest `center`.
pub fn separatrix_seeds(
    field: &PlanarVectorField,
    point: &SingularPoint,
    radius: f64,
    par: Parallelism,
) -> Vec<[f64; 2]> {
    let cfg = SectorConfig {
        parallelism: par,
        ..Default::default()
    };
    if let Ok(profile) = sector_profile(field, point, radius, &cfg) {
        if !profile.boundary_points.is_empty() {
            return profile.boundary_points;
        }
        if profile.trivial {
            return Vec::new();
        }
    }
    characteristic_directions(field, point, &cfg)
        .angles
        .iter()
        .map(|a| [point.approx[0] + radius * a.cos(), point.approx[1] + radius * a.sin()])
        .collect()
}

/// Union of the trajectories through the included seeds, ordered by seed.
pub fn phase_portrait(
    field: &PlanarVectorField,
    spec: &PortraitSpec,
    par: Parallelism,
) -> Result<Portrait, FlowError> {
    spec.validate()?;
    let finder = FinderConfig {
        parallelism: par,
        ..Default::default()
    };
    let singular_points = find_singularities(field, &spec.domain, &finder)?;
    let known: Vec<[f64; 2]> = singular_points.iter().map(|p| p.approx).collect();

    let mut jobs: Vec<(usize, [f64; 2], Direction)> = Vec::new();
    for (index, seed) in spec.seeds.iter().enumerate() {
        if !seed.include {
            continue;
        }
        match &seed.at {
            SeedPoint::Point(p) => jobs.push((index, *p, seed.direction)),
            SeedPoint::Separatrices { center, radius } => {
                let nearest = singular_points.iter().min_by(|a, b| {
                    dist(a.approx, *center).total_cmp(&dist(b.approx, *center))
                });
                let Some(point) = nearest else { continue };
                for z in separatrix_seeds(field, point, *radius, par) {
                    if spec.domain.contains(z) {
                        jobs.push((index, z, seed.direction));
                    }
                }
            }
        }
    }

    let results = map_slice(&jobs, par, |&(_, start, direction)| {
        integrate(field, start, direction, &spec.domain, &known, &spec.settings)
    });
    let mut trajectories = Vec::with_capacity(jobs.len());
    for ((seed, start, direction), r) in jobs.into_iter().zip(results) {
        trajectories.push(Trajectory {
            seed,
            start,
            direction,
            polyline: r.map_err(|_| FlowError::SeedOutsideDomain { index: seed })?,
        });
    }
    Ok(Portrait {
        domain: spec.domain,
        singular_points,
        trajectories,
    })
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::TerminationReason;

    fn tented() -> PlanarVectorField {
        "y ; -x^2".parse().unwrap()
    }

    #[test]
    fn validation() {
        let d = DomainU::square(1.0).unwrap();
        let spec = PortraitSpec {
            domain: d,
            seeds: vec![Seed::point(0.0, 0.5, Direction::Both).excluded()],
            settings: Default::default(),
        };
        assert_eq!(spec.validate(), Err(FlowError::NoIncludedSeed));
        let spec = PortraitSpec {
            domain: d,
            seeds: vec![Seed::point(2.0, 0.5, Direction::Both)],
            settings: Default::default(),
        };
        assert_eq!(spec.validate(), Err(FlowError::SeedOutsideDomain { index: 0 }));
    }

    #[test]
    fn cusp_separatrices_are_seeded() {
        let d = DomainU::square(1.0).unwrap();
        let spec = PortraitSpec {
            domain: d,
            seeds: vec![
                Seed::point(0.0, 0.5, Direction::Both),
                Seed::separatrices([0.0, 0.0], 1e-3),
            ],
            settings: Default::default(),
        };
        let p = phase_portrait(&tented(), &spec, Parallelism::Sequential).unwrap();
        assert_eq!(p.singular_points.len(), 1);
        let sep: Vec<_> = p.trajectories.iter().filter(|t| t.seed == 1).collect();
        assert_eq!(sep.len(), 2);
        for t in sep {
            // the cusp separatrix is the level set 3 y^2 + 2 x^3 = 0 in x <= 0
            for v in &t.polyline.vertices {
                assert!(v[0] <= 1e-6);
                assert!((3.0 * v[1] * v[1] + 2.0 * v[0].powi(3)).abs() < 1e-5, "{v:?}");
            }
            let ends = [Some(t.polyline.termination), t.polyline.start_termination];
            assert!(ends.contains(&Some(TerminationReason::ReachedSingularity)));
            assert!(ends.contains(&Some(TerminationReason::ExitedDomain)));
        }
        let par = phase_portrait(&tented(), &spec, Parallelism::Parallel).unwrap();
        assert_eq!(p, par);
    }
}

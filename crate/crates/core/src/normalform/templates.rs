use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{assemble_field, NormalFormError};
use crate::flow::{Direction, DomainU, PortraitSpec, Seed};
use crate::polyfield::{parse_polynomial, PlanarVectorField};

/// Built-in fingerprint normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemplateId {
    PlainArch,
    TentedArch,
    ObliqueStria,
    Whorl,
    Spiral,
    DegenerateSpiral,
    Twist,
}

impl TemplateId {
    pub const ALL: [TemplateId; 7] = [
        TemplateId::PlainArch,
        TemplateId::TentedArch,
        TemplateId::ObliqueStria,
        TemplateId::Whorl,
        TemplateId::Spiral,
        TemplateId::DegenerateSpiral,
        TemplateId::Twist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TemplateId::PlainArch => "plain-arch",
            TemplateId::TentedArch => "tented-arch",
            TemplateId::ObliqueStria => "oblique-stria",
            TemplateId::Whorl => "whorl",
            TemplateId::Spiral => "spiral",
            TemplateId::DegenerateSpiral => "degenerate-spiral",
            TemplateId::Twist => "twist",
        }
    }

    /// `x'` and `y'` of the built-in field.
    pub fn source(self) -> (&'static str, &'static str) {
        match self {
            TemplateId::PlainArch => ("1", "0"),
            TemplateId::TentedArch | TemplateId::ObliqueStria => ("y", "-x^2"),
            TemplateId::Whorl => ("y", "-x*(x^2-1)^2"),
            TemplateId::Spiral => ("y", "(y - x/2)*(x^2-1)^2"),
            TemplateId::DegenerateSpiral => ("y", "-x^5*(x^2-1)^2*(1+y*(1+x)^3)"),
            TemplateId::Twist => ("y", "(2*y - x)*(x-1)^2"),
        }
    }

    pub fn field(self) -> PlanarVectorField {
        let (p, q) = self.source();
        PlanarVectorField::new(
            parse_polynomial(p).expect("template text parses"),
            parse_polynomial(q).expect("template text parses"),
        )
        .expect("template field is valid")
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TemplateId {
    type Err = NormalFormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        TemplateId::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| NormalFormError::UnknownTemplate(s.to_string()))
    }
}

fn domain(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> DomainU {
    DomainU::new(x_min, x_max, y_min, y_max).expect("template domain is valid")
}

fn both(points: &[[f64; 2]]) -> Vec<Seed> {
    points.iter().map(|p| Seed::point(p[0], p[1], Direction::Both)).collect()
}

fn on_x_axis(xs: impl IntoIterator<Item = f64>) -> Vec<[f64; 2]> {
    xs.into_iter().map(|x| [x, 0.0]).collect()
}

/// Default seed set of each template: fixed data, so portraits are reproducible.
pub fn default_spec(id: TemplateId) -> PortraitSpec {
    let sep = |x: f64| Seed::separatrices([x, 0.0], 1e-3);
    let (d, seeds) = match id {
        TemplateId::PlainArch => {
            let seeds = (0..10)
                .map(|k| Seed::point(-2.0, -0.9 + 0.2 * k as f64, Direction::Forward))
                .collect();
            (domain(-2.0, 2.0, -1.0, 1.0), seeds)
        }
        TemplateId::TentedArch | TemplateId::ObliqueStria => {
            let mut seeds = both(&[0.25, 0.5, 0.75, 1.0, 1.5, -0.25, -0.5, -0.75, -1.0, -1.5].map(|y| [0.0, y]));
            let s = sep(0.0);
            seeds.push(if id == TemplateId::ObliqueStria { s.excluded() } else { s });
            (domain(-2.0, 2.0, -2.0, 2.0), seeds)
        }
        TemplateId::Whorl => {
            let mut seeds = both(&on_x_axis((1..=12).map(|k| 0.075 * k as f64)));
            seeds.extend(both(&[[0.0, 0.7], [0.0, 0.9], [0.0, -0.7], [0.0, -0.9]]));
            seeds.extend([sep(-1.0), sep(1.0)]);
            (domain(-2.0, 2.0, -1.0, 1.0), seeds)
        }
        TemplateId::Spiral | TemplateId::DegenerateSpiral => {
            let mut seeds = both(&on_x_axis((1..=6).map(|k| 0.15 * k as f64)));
            seeds.extend(both(&[[0.0, 0.7], [0.0, -0.7], [-1.5, 0.5], [1.5, -0.5]]));
            seeds.extend([sep(-1.0), sep(1.0)]);
            (domain(-2.0, 2.0, -1.0, 1.0), seeds)
        }
        TemplateId::Twist => {
            let mut seeds = both(&on_x_axis([-0.9, -0.6, -0.3, 0.3, 0.6]));
            seeds.extend(both(&[[0.0, 0.5], [0.0, -0.5], [1.5, 0.5], [1.5, -0.5]]));
            seeds.push(sep(1.0));
            (domain(-2.0, 2.0, -1.0, 1.0), seeds)
        }
    };
    PortraitSpec {
        domain: d,
        seeds,
        settings: Default::default(),
    }
}

/// Built-in field and default portrait spec.
pub fn template(id: TemplateId) -> (PlanarVectorField, PortraitSpec) {
    (id.field(), default_spec(id))
}

/// The Whorl, Spiral and Twist fields rebuilt from their `x`-profiles.
pub fn assembled(id: TemplateId) -> Option<PlanarVectorField> {
    let p = |s: &str| parse_polynomial(s).expect("profile parses");
    match id {
        TemplateId::Whorl => Some(assemble_field(&p("-x*(x^2-1)^2"), None)),
        TemplateId::Spiral => Some(assemble_field(&p("(x^2-1)^2"), Some(&p("y - x/2")))),
        TemplateId::Twist => Some(assemble_field(&p("(x-1)^2"), Some(&p("2*y - x")))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::int;

    #[test]
    fn names_round_trip() {
        for t in TemplateId::ALL {
            assert_eq!(t.name().parse::<TemplateId>().unwrap(), t);
            default_spec(t).validate().unwrap();
        }
        assert!("loop".parse::<TemplateId>().is_err());
    }

    #[test]
    fn fields() {
        let w = TemplateId::Whorl.field();
        assert_eq!(w.evaluate(1.0, 0.0), (0.0, 0.0));
        assert_eq!(w.evaluate(0.0, 1.0), (1.0, 0.0));
        assert_eq!(TemplateId::PlainArch.field().evaluate(3.7, -2.0), (1.0, 0.0));
        assert_eq!(w.q().to_string(), "-x^5+2*x^3-x");
        assert!(w.is_singular_at(&int(-1), &int(0)));
        for t in [TemplateId::Whorl, TemplateId::Spiral, TemplateId::Twist] {
            assert_eq!(assembled(t).unwrap(), t.field());
        }
    }

    #[test]
    fn oblique_stria_drops_the_separatrix() {
        let t = default_spec(TemplateId::TentedArch);
        let o = default_spec(TemplateId::ObliqueStria);
        assert_eq!(t.seeds.len(), o.seeds.len());
        let differing: Vec<_> = t.seeds.iter().zip(&o.seeds).filter(|(a, b)| a != b).collect();
        assert_eq!(differing.len(), 1);
        assert!(!differing[0].1.include);
    }
}

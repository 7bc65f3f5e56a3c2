use std::path::PathBuf;
use std::process::ExitCode;

use phaseprint::flow::export::{orientation_csv, orientation_pgm, portrait_csv, portrait_svg};
use phaseprint::flow::{
    find_singularities, orientation_field, phase_portrait, Direction, DomainU, PortraitSpec, Seed,
};
use phaseprint::index::{connexion_check, enclosed_index_sum, winding_index, ConnexionEntry, ContourSpec};
use phaseprint::normalform::{assemble_field, hermite_solve, template, verify_conditions, ConstraintFile, TemplateId};
use phaseprint::report::classify_field;
use phaseprint::PlanarVectorField;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::CliError;
use crate::output::{emit, json, resolve};
use crate::settings::Settings;
use crate::{FieldSource, Format, OutputArgs};

struct Loaded {
    field: PlanarVectorField,
    template: Option<TemplateId>,
}

fn load(source: &FieldSource) -> Result<Loaded, CliError> {
    match (&source.template, &source.field) {
        (Some(name), None) => {
            let id: TemplateId = name.parse()?;
            Ok(Loaded {
                field: id.field(),
                template: Some(id),
            })
        }
        (None, Some(text)) => Ok(Loaded {
            field: text.parse()?,
            template: None,
        }),
        _ => Err(CliError::input("give exactly one of --template and --field")),
    }
}

fn domain_for(loaded: &Loaded, domain: Option<String>) -> Result<DomainU, CliError> {
    match domain {
        Some(d) => Ok(d.parse()?),
        None => Ok(match loaded.template {
            Some(id) => template(id).1.domain,
            None => DomainU::square(2.0)?,
        }),
    }
}

pub fn classify(
    settings: &Settings,
    source: &FieldSource,
    domain: Option<String>,
    out: &OutputArgs,
) -> Result<ExitCode, CliError> {
    resolve(out, &[Format::Json], "classify")?;
    let loaded = load(source)?;
    let domain = domain_for(&loaded, domain)?;
    let report = classify_field(&loaded.field, &domain, &settings.classify)?;
    emit(out.out.as_deref(), report.to_json().as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn parse_contour(text: &str, samples: usize) -> Result<ContourSpec, CliError> {
    let bad = || CliError::input(format!("contour '{text}' is not circle:x,y,r or rect:xmin,xmax,ymin,ymax"));
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let v: Vec<f64> = rest
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let mut spec = match (kind.trim(), v.as_slice()) {
        ("circle", [x, y, r]) => ContourSpec::circle([*x, *y], *r),
        ("rect", [a, b, c, d]) => ContourSpec::rectangle(*a, *b, *c, *d),
        _ => return Err(bad()),
    };
    spec.samples = samples;
    Ok(spec)
}

pub fn index(
    settings: &Settings,
    source: &FieldSource,
    domain: Option<String>,
    contour: Option<String>,
    out: &OutputArgs,
) -> Result<ExitCode, CliError> {
    resolve(out, &[Format::Json], "index")?;
    let loaded = load(source)?;
    if let Some(c) = contour {
        let spec = parse_contour(&c, settings.index.samples)?;
        let value = winding_index(&loaded.field, &spec)?;
        let doc = json!({ "field": loaded.field, "contour": spec, "index": value });
        emit(out.out.as_deref(), &json(&doc))?;
        return Ok(ExitCode::SUCCESS);
    }
    let domain = domain_for(&loaded, domain)?;
    let points: Vec<[f64; 2]> = find_singularities(&loaded.field, &domain, &settings.classify.finder)?
        .iter()
        .map(|p| p.approx)
        .collect();
    let mut boundary = ContourSpec::rectangle(domain.x_min(), domain.x_max(), domain.y_min(), domain.y_max());
    boundary.samples = settings.index.samples;
    let report = enclosed_index_sum(&loaded.field, &boundary, &points, settings.index.small_radius)?;
    let doc = json!({ "field": loaded.field, "domain": domain, "enclosed": report });
    emit(out.out.as_deref(), &json(&doc))?;
    if report.consistent {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError {
            status: crate::error::Status::Numerical,
            message: format!(
                "boundary winding {} differs from the sum {} over enclosed points",
                report.boundary, report.sum
            ),
        })
    }
}

pub fn connexion(
    points: Vec<String>,
    points_file: Option<PathBuf>,
    genus: u32,
    out: &OutputArgs,
) -> Result<ExitCode, CliError> {
    resolve(out, &[Format::Json], "connexion")?;
    let raw: Vec<String> = match points_file {
        Some(p) => std::fs::read_to_string(&p)
            .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
            .filter(|l| !l.is_empty())
            .collect(),
        None => points,
    };
    let entries = raw
        .iter()
        .map(|s| s.parse::<ConnexionEntry>())
        .collect::<Result<Vec<_>, _>>()?;
    let check = connexion_check(&entries, genus)?;
    emit(out.out.as_deref(), &json(&check))?;
    if check.feasible {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::infeasible(format!(
            "infeasible: index sum {} differs from the Euler characteristic {}",
            check.total_index, check.euler
        )))
    }
}

pub fn synth(
    settings: &Settings,
    constraints: Option<PathBuf>,
    builtin: Option<String>,
    dump: bool,
    out: &OutputArgs,
) -> Result<ExitCode, CliError> {
    let file = match (constraints, builtin.as_deref()) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            ConstraintFile::from_toml(&text)?
        }
        (None, Some("whorl")) => ConstraintFile::whorl(),
        (None, Some("pendulum")) => ConstraintFile::pendulum(),
        (None, Some(other)) => {
            return Err(CliError::input(format!(
                "unknown built-in constraint set '{other}' (whorl, pendulum)"
            )))
        }
        (None, None) => return Err(CliError::input("give --constraints or --builtin")),
    };
    if dump {
        resolve(out, &[Format::Text], "synth --dump-constraints")?;
        emit(out.out.as_deref(), file.to_toml().as_bytes())?;
        return Ok(ExitCode::SUCCESS);
    }
    let format = resolve(out, &[Format::Text, Format::Json], "synth")?;
    let parsed = file.parse()?;
    let solution = hermite_solve(&parsed.problem)?;
    let field = assemble_field(&solution.poly, parsed.y_factor.as_ref());
    let verification = parsed
        .conditions
        .as_ref()
        .map(|spec| verify_conditions(&field, spec, &settings.classify.finder))
        .transpose()?;
    let bytes = match format {
        Format::Json => json(&json!({
            "field": field,
            "profile": solution.poly.to_string(),
            "inequalities": solution.inequalities,
            "verification": verification,
        })),
        _ => format!("{field}\n").into_bytes(),
    };
    emit(out.out.as_deref(), &bytes)?;
    match verification {
        Some(v) if !v.passed => {
            let failed: Vec<String> = v
                .failures()
                .map(|c| format!("{} ({})", c.condition, c.evidence))
                .collect();
            Err(CliError::infeasible(format!("verification failed: {}", failed.join("; "))))
        }
        _ => Ok(ExitCode::SUCCESS),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedsFile {
    seeds: Vec<Seed>,
}

/// A 5 x 5 grid of two-sided seeds inside the domain.
fn grid_seeds(d: &DomainU) -> Vec<Seed> {
    let mut seeds = Vec::with_capacity(25);
    for j in 0..5 {
        for i in 0..5 {
            let x = d.x_min() + (i as f64 + 0.5) * d.width() / 5.0;
            let y = d.y_min() + (j as f64 + 0.5) * d.height() / 5.0;
            seeds.push(Seed::point(x, y, Direction::Both));
        }
    }
    seeds
}

pub fn portrait(
    settings: &Settings,
    source: &FieldSource,
    domain: Option<String>,
    seeds: Option<PathBuf>,
    out: &OutputArgs,
) -> Result<ExitCode, CliError> {
    let format = resolve(out, &[Format::Svg, Format::Csv, Format::Json], "portrait")?;
    let loaded = load(source)?;
    let domain = domain_for(&loaded, domain)?;
    let seeds = match (seeds, loaded.template) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            toml::from_str::<SeedsFile>(&text)
                .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?
                .seeds
        }
        (None, Some(id)) => template(id).1.seeds,
        (None, None) => grid_seeds(&domain),
    };
    let spec = PortraitSpec {
        domain,
        seeds,
        settings: settings.integration.clone(),
    };
    let p = phase_portrait(&loaded.field, &spec, settings.classify.finder.parallelism)?;
    let bytes = match format {
        Format::Csv => portrait_csv(&p).into_bytes(),
        Format::Json => json(&p),
        _ => portrait_svg(&p).into_bytes(),
    };
    emit(out.out.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::input(format!("grid '{text}' is not NXxNY"));
    let (a, b) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let nx = a.trim().parse::<usize>().map_err(|_| bad())?;
    let ny = b.trim().parse::<usize>().map_err(|_| bad())?;
    if nx == 0 || ny == 0 {
        return Err(bad());
    }
    Ok((nx, ny))
}

pub fn orient(
    settings: &Settings,
    source: &FieldSource,
    domain: Option<String>,
    grid: Option<String>,
    doubled: bool,
    out: &OutputArgs,
) -> Result<ExitCode, CliError> {
    let format = resolve(out, &[Format::Csv, Format::Pgm, Format::Json], "orient")?;
    let loaded = load(source)?;
    let domain = domain_for(&loaded, domain)?;
    let mut cfg = settings.orientation.clone();
    if let Some(g) = grid {
        (cfg.nx, cfg.ny) = parse_grid(&g)?;
    }
    cfg.doubled |= doubled;
    let known: Vec<[f64; 2]> = find_singularities(&loaded.field, &domain, &settings.classify.finder)?
        .iter()
        .map(|p| p.approx)
        .collect();
    let o = orientation_field(&loaded.field, &domain, &known, &cfg);
    let bytes = match format {
        Format::Pgm => orientation_pgm(&o),
        Format::Json => json(&o),
        _ => orientation_csv(&o).into_bytes(),
    };
    emit(out.out.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

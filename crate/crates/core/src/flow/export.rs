//! Text and raster writers for portraits and orientation fields.
//!
//! Every float is written with at most nine significant digits so repeated
//! runs produce byte-identical files.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{OrientationField, Portrait};

/// `v` rounded to nine significant digits, in plain decimal notation.
pub fn fmt_sig(v: f64) -> String {
    if !v.is_finite() {
        return String::new();
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    format!("{rounded}")
}

pub fn portrait_csv(p: &Portrait) -> String {
    let mut out = String::from("trajectory_id,vertex_index,x,y\n");
    for (t, traj) in p.trajectories.iter().enumerate() {
        for (k, v) in traj.polyline.vertices.iter().enumerate() {
            let _ = writeln!(out, "{t},{k},{},{}", fmt_sig(v[0]), fmt_sig(v[1]));
        }
    }
    out
}

/// One `<path>` per trajectory; the viewBox is the domain with `y` pointing up.
pub fn portrait_svg(p: &Portrait) -> String {
    let d = &p.domain;
    let stroke = fmt_sig(d.width().max(d.height()) / 600.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        fmt_sig(d.x_min()),
        fmt_sig(-d.y_max()),
        fmt_sig(d.width()),
        fmt_sig(d.height()),
        fmt_sig((800.0 * d.height() / d.width()).round()),
    );
    let _ = writeln!(
        out,
        r#"<g fill="none" stroke="black" stroke-width="{stroke}" stroke-linejoin="round">"#
    );
    for (t, traj) in p.trajectories.iter().enumerate() {
        let mut path = String::new();
        for (k, v) in traj.polyline.vertices.iter().enumerate() {
            let _ = write!(
                path,
                "{}{} {}",
                if k == 0 { "M" } else { " L" },
                fmt_sig(v[0]),
                fmt_sig(-v[1])
            );
        }
        let _ = writeln!(out, r#"<path id="t{t}" d="{path}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let r = fmt_sig(d.width().max(d.height()) / 150.0);
    for s in &p.singular_points {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{r}" fill="red"/>"#,
            fmt_sig(s.approx[0]),
            fmt_sig(-s.approx[1])
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn orientation_csv(o: &OrientationField) -> String {
    let mut out = String::from("i,j,x,y,theta,masked\n");
    for j in 0..o.ny {
        for i in 0..o.nx {
            let z = o.cell_center(i, j);
            let k = j * o.nx + i;
            let _ = writeln!(
                out,
                "{i},{j},{},{},{},{}",
                fmt_sig(z[0]),
                fmt_sig(z[1]),
                fmt_sig(o.theta[k]),
                u8::from(o.mask[k])
            );
        }
    }
    out
}

/// Grey level of an angle in `[0, pi)`: `floor(theta / pi * 255)`, so 255 is
/// left for masked cells.
pub fn grey_level(theta: f64) -> u8 {
    ((theta / PI * 255.0).floor() as i64).clamp(0, 254) as u8
}

/// Binary 8-bit PGM, top row first.
pub fn orientation_pgm(o: &OrientationField) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", o.nx, o.ny).into_bytes();
    for j in (0..o.ny).rev() {
        for i in 0..o.nx {
            out.push(match o.at(i, j) {
                Some(t) => grey_level(t),
                None => 255,
            });
        }
    }
    out
}

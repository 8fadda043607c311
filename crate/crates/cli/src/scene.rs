//! Line-oriented scene files.
//!
//! ```text
//! surface sphere radius=1 center=0,0,0
//! interval 0 2*pi
//! x = cos(t)
//! y = sin(t)
//! z = 0
//! mass = 1
//! ```
//!
//! `trajectory <name> p1,p2,...` may replace the three coordinate lines.
//! Numeric fields accept constant expressions such as `2*pi`.

use std::fmt;
use std::path::Path;

use topokin_core::curve::{make_catalog_trajectory, Surface, Trajectory};
use topokin_core::expr::{eval_scalar_jet, parse_expression, Expr};
use topokin_core::{Error as CoreError, Vec3};

#[derive(Clone, Debug)]
pub struct Scene {
    pub surface: Surface,
    pub trajectory: Trajectory,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SceneError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for SceneError {}

fn at(line: usize, message: impl Into<String>) -> SceneError {
    SceneError {
        line: Some(line),
        message: message.into(),
    }
}

pub fn load_scene(path: &Path) -> Result<Scene, SceneError> {
    let text = std::fs::read_to_string(path).map_err(|e| SceneError {
        line: None,
        message: format!("cannot read scene {}: {e}", path.display()),
    })?;
    parse_scene(&text)
}

#[derive(Default)]
struct Pending {
    surface: Option<Surface>,
    interval: Option<(usize, f64, f64)>,
    coords: [Option<Expr>; 3],
    catalog: Option<(usize, String, Vec<f64>)>,
    mass: Option<f64>,
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let mut p = Pending::default();
    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let line = content.trim();
        if line.is_empty() {
            continue;
        }
        let key_len = line
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(line.len());
        let (key, rest) = line.split_at(key_len);
        let rest = rest.trim_start();
        match key {
            "x" | "y" | "z" | "mass" => {
                let Some(body) = rest.strip_prefix('=') else {
                    return Err(at(n, format!("expected `=` after `{key}`")));
                };
                let column = raw.len() - raw.trim_start().len() + line.len() - body.len() + 1;
                let expr = parse_at(body, n, column, key)?;
                if key == "mass" {
                    set_once(&mut p.mass, constant_value(&expr, n, key)?, n, key)?;
                    if !(p.mass.unwrap() > 0.0) {
                        return Err(at(n, "mass must be positive"));
                    }
                } else {
                    let i = (key.as_bytes()[0] - b'x') as usize;
                    set_once(&mut p.coords[i], expr, n, key)?;
                }
            }
            "surface" => {
                let s = parse_surface(rest, n)?;
                set_once(&mut p.surface, s, n, key)?;
            }
            "interval" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(at(n, "`interval` takes exactly two values: interval <a> <b>"));
                }
                let a = constant(parts[0], n, "interval start")?;
                let b = constant(parts[1], n, "interval end")?;
                if !(a < b) {
                    return Err(at(n, CoreError::InvalidInterval { a, b }.to_string()));
                }
                set_once(&mut p.interval, (n, a, b), n, key)?;
            }
            "trajectory" => {
                let mut parts = rest.split_whitespace();
                let Some(name) = parts.next() else {
                    return Err(at(n, "`trajectory` needs a catalog name"));
                };
                let params = match parts.next() {
                    None => Vec::new(),
                    Some(list) => list
                        .split(',')
                        .map(|s| constant(s, n, "trajectory parameter"))
                        .collect::<Result<_, _>>()?,
                };
                if parts.next().is_some() {
                    return Err(at(n, "trajectory parameters must be a single comma-separated list"));
                }
                set_once(&mut p.catalog, (n, name.to_string(), params), n, key)?;
            }
            "" => return Err(at(n, format!("expected a directive, found `{line}`"))),
            other => return Err(at(n, format!("unknown directive `{other}`"))),
        }
    }
    finish(p)
}

fn finish(p: Pending) -> Result<Scene, SceneError> {
    let missing = |what: &str| SceneError {
        line: None,
        message: format!("missing `{what}` directive"),
    };
    let surface = p.surface.ok_or_else(|| missing("surface"))?;
    let (_, a, b) = p.interval.ok_or_else(|| missing("interval"))?;
    let any_coord = p.coords.iter().any(Option::is_some);
    let trajectory = match (p.catalog, any_coord) {
        (Some((n, _, _)), true) => {
            return Err(at(n, "`trajectory` cannot be combined with `x`/`y`/`z` lines"));
        }
        (Some((n, name, params)), false) => {
            make_catalog_trajectory(&name, &params, a, b).map_err(|e| at(n, e.to_string()))?
        }
        (None, _) => {
            let [x, y, z] = p.coords;
            let x = x.ok_or_else(|| missing("x"))?;
            let y = y.ok_or_else(|| missing("y"))?;
            let z = z.ok_or_else(|| missing("z"))?;
            Trajectory::from_exprs([x, y, z], a, b).map_err(|e| SceneError {
                line: None,
                message: format!("trajectory cannot be evaluated on [{a}, {b}]: {e}"),
            })?
        }
    };
    Ok(Scene {
        surface,
        trajectory,
        mass: p.mass.unwrap_or(1.0),
    })
}

fn set_once<T>(slot: &mut Option<T>, value: T, n: usize, key: &str) -> Result<(), SceneError> {
    if slot.is_some() {
        return Err(at(n, format!("duplicate `{key}` directive")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_at(src: &str, n: usize, column: usize, what: &str) -> Result<Expr, SceneError> {
    parse_expression(src).map_err(|e| {
        at(
            n,
            format!("bad expression for {what} at column {}: {e}", column + e.offset),
        )
    })
}

fn constant_value(expr: &Expr, n: usize, what: &str) -> Result<f64, SceneError> {
    if !expr.is_constant() {
        return Err(at(n, format!("{what} must be a constant expression")));
    }
    eval_scalar_jet(expr, 0.0)
        .map(|j| j.c0)
        .map_err(|e| at(n, format!("{what}: {e}")))
}

fn constant(src: &str, n: usize, what: &str) -> Result<f64, SceneError> {
    let expr = parse_expression(src).map_err(|e| at(n, format!("bad {what} `{src}`: {e}")))?;
    constant_value(&expr, n, what)
}

fn parse_surface(args: &str, n: usize) -> Result<Surface, SceneError> {
    let mut parts = args.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| at(n, "`surface` needs a kind: sphere, cylinder, torus, plane or none"))?;
    let mut fields: Vec<(&str, &str)> = Vec::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| at(n, format!("expected key=value, found `{p}`")))?;
        if fields.iter().any(|(seen, _)| *seen == k) {
            return Err(at(n, format!("duplicate surface parameter `{k}`")));
        }
        fields.push((k, v));
    }
    let allowed: &[&str] = match kind {
        "sphere" => &["radius", "center"],
        "cylinder" => &["radius"],
        "torus" => &["major", "minor"],
        "plane" => &["z"],
        "none" => &[],
        other => return Err(at(n, format!("unknown surface kind `{other}`"))),
    };
    if let Some((k, _)) = fields.iter().find(|(k, _)| !allowed.contains(k)) {
        return Err(at(n, format!("{kind} does not take parameter `{k}`")));
    }
    let get = |k: &str| fields.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
    let need = |k: &str| -> Result<f64, SceneError> {
        let v = get(k).ok_or_else(|| at(n, format!("{kind} needs `{k}=`")))?;
        constant(v, n, k)
    };
    let built = match kind {
        "sphere" => {
            let center = match get("center") {
                None => Vec3::ZERO,
                Some(v) => {
                    let c: Vec<f64> = v
                        .split(',')
                        .map(|s| constant(s, n, "center coordinate"))
                        .collect::<Result<_, _>>()?;
                    if c.len() != 3 {
                        return Err(at(n, "center takes three comma-separated coordinates"));
                    }
                    Vec3::new(c[0], c[1], c[2])
                }
            };
            Surface::sphere(need("radius")?, center)
        }
        "cylinder" => Surface::cylinder(need("radius")?),
        "torus" => Surface::torus(need("major")?, need("minor")?),
        "plane" => Surface::plane(need("z")?),
        _ => Ok(Surface::None),
    };
    built.map_err(|e| at(n, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = "\
surface sphere radius=1 center=0,0,0
interval 0 6.283185307179586
x = cos(t)
y = sin(t)
z = 0
mass = 1
";

    #[test]
    fn circle_on_sphere() {
        let s = parse_scene(CIRCLE).unwrap();
        assert_eq!(s.surface, Surface::sphere(1.0, Vec3::ZERO).unwrap());
        assert_eq!(s.trajectory.b(), std::f64::consts::TAU);
        assert_eq!(s.mass, 1.0);
        assert!((s.trajectory.position(0.0).unwrap().x() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn comments_blank_lines_and_constants() {
        let src = "# header\n\nsurface none   # free space\ninterval -pi 2*pi\ntrajectory helix 1,0.5\n";
        let s = parse_scene(src).unwrap();
        assert_eq!(s.surface, Surface::None);
        assert_eq!(s.trajectory.a(), -std::f64::consts::PI);
        assert_eq!(s.mass, 1.0);
    }

    #[test]
    fn missing_interval_is_named() {
        let src = CIRCLE.replace("interval 0 6.283185307179586\n", "");
        let e = parse_scene(&src).unwrap_err();
        assert!(e.message.contains("`interval`"), "{e}");
    }

    #[test]
    fn reversed_interval() {
        let src = CIRCLE.replace("interval 0 6.283185307179586", "interval 2 1");
        let e = parse_scene(&src).unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.message.contains("interval requires a < b"), "{e}");
    }

    #[test]
    fn expression_errors_carry_line_and_column() {
        let src = CIRCLE.replace("y = sin(t)", "y = sin(t +)");
        let e = parse_scene(&src).unwrap_err();
        assert_eq!(e.line, Some(4));
        assert!(e.message.contains("column 12"), "{e}");
    }

    #[test]
    fn rejects_unknown_and_duplicate_directives() {
        assert!(parse_scene(&format!("{CIRCLE}velocity = 3\n"))
            .unwrap_err()
            .message
            .contains("unknown directive `velocity`"));
        assert_eq!(parse_scene(&format!("{CIRCLE}z = 1\n")).unwrap_err().line, Some(7));
        assert!(parse_scene(&format!("{CIRCLE}trajectory circle 1\n")).is_err());
        assert!(parse_scene(&CIRCLE.replace("mass = 1", "mass = t")).is_err());
        assert!(parse_scene(&CIRCLE.replace("mass = 1", "mass = -2")).is_err());
        assert!(parse_scene(&CIRCLE.replace("radius=1", "radius=0")).is_err());
        assert!(parse_scene(&CIRCLE.replace("radius=1", "height=1")).is_err());
    }

    #[test]
    fn catalog_errors() {
        let base = "surface none\ninterval 0 1\n";
        assert!(parse_scene(&format!("{base}trajectory spiral 1\n"))
            .unwrap_err()
            .message
            .contains("unknown catalog"));
        assert!(parse_scene(&format!("{base}trajectory helix 1\n")).is_err());
        assert!(parse_scene(&format!("{base}trajectory cubic_line\n")).is_ok());
    }
}

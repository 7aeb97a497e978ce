//! JSON views of solver results and configuration demos, and a writer that
//! prints every float with 17 significant digits.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::baskets::{
    construct_typical_quadrilateral, double_five, is_basket_pair, reconstruct_tetrahedron,
    reye_incidence, standard_double_four,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::spheres::{DegenerateClass, DegenerateReport, SolveResult, Sphere, TangentSolution};
use crate::symqr::ProjQuadric;

pub const DEMOS: [&str; 4] = ["reye", "double5", "basket-pair", "quadrilateral"];

/// One problem instance: four spheres with optional seed and tolerance.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub spheres: Vec<Sphere>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

impl Instance {
    pub fn spheres(&self) -> Result<[Sphere; 4]> {
        let s: [Sphere; 4] = self.spheres.clone().try_into().map_err(|v: Vec<Sphere>| {
            Error::InvalidInput(format!("expected 4 spheres, got {}", v.len()))
        })?;
        for x in &s {
            x.validate()?;
        }
        Ok(s)
    }
}

/// Parses one instance or a list of instances.
pub fn parse_instances(text: &str) -> Result<Vec<Instance>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(Instance),
        Many(Vec<Instance>),
    }
    let parsed: OneOrMany =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(match parsed {
        OneOrMany::One(i) => vec![i],
        OneOrMany::Many(v) => v,
    })
}

fn parts(v: impl Iterator<Item = C64>) -> (Vec<f64>, Vec<f64>) {
    v.map(|z| (z.re, z.im)).unzip()
}

pub fn tangent_json(t: &TangentSolution) -> Value {
    let (pr, pi) = parts(t.line.p.iter().copied());
    let mut vs: Vec<C64> = t.line.v.iter().copied().collect();
    crate::linalg::canonicalize(&mut vs);
    let (vr, vi) = parts(vs.into_iter());
    let mut m = Map::new();
    m.insert("p".into(), json!(pr));
    m.insert("v".into(), json!(vr));
    if !t.is_real {
        m.insert("p_im".into(), json!(pi));
        m.insert("v_im".into(), json!(vi));
    }
    m.insert("real".into(), json!(t.is_real));
    m.insert("multiplicity".into(), json!(t.multiplicity));
    m.insert("residual".into(), json!(t.max_residual()));
    Value::Object(m)
}

fn class_json(c: &DegenerateClass) -> Value {
    let meridian = |m: &crate::spheres::Meridian| json!({"A": m.a, "B": m.b, "C": m.c});
    let mut v = json!({ "class": c.name() });
    let obj = v.as_object_mut().unwrap();
    match c {
        DegenerateClass::CommonCircle { center_x, rho } => {
            obj.insert("center_x".into(), json!(center_x));
            obj.insert("rho".into(), json!(rho));
        }
        DegenerateClass::CommonPoint { x } => {
            obj.insert("x".into(), json!(x));
        }
        DegenerateClass::Cylinder(m)
        | DegenerateClass::Cone(m)
        | DegenerateClass::Hyperboloid(m)
        | DegenerateClass::ComplexOnly(m) => {
            obj.insert("meridian".into(), meridian(m));
        }
        DegenerateClass::None => {}
    }
    v
}

pub fn degenerate_json(r: &DegenerateReport) -> Value {
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            let mut v = class_json(&c.class);
            let lines: Vec<Value> = c
                .lines
                .iter()
                .map(|l| json!({"p": l.p, "v": l.v, "residual": l.residual}))
                .collect();
            v.as_object_mut()
                .unwrap()
                .insert("sample_tangents".into(), Value::Array(lines));
            v
        })
        .collect();
    json!({
        "axis": {"origin": r.axis.origin, "direction": r.axis.direction},
        "classes": classes,
    })
}

pub fn solve_json(r: &SolveResult, tol: &Tolerances) -> Value {
    let mut m = Map::new();
    m.insert("regime".into(), json!(r.regime.name()));
    m.insert("complex_count".into(), json!(r.tangents.complex_count()));
    m.insert("real_count".into(), json!(r.tangents.real_count()));
    m.insert("bezout_total".into(), json!(r.tangents.bezout_total));
    m.insert("null_direction".into(), json!(r.tangents.null_direction));
    m.insert(
        "tangents".into(),
        Value::Array(r.tangents.tangents.iter().map(tangent_json).collect()),
    );
    if let Some(d) = &r.degenerate {
        m.insert("degenerate".into(), degenerate_json(d));
    }
    m.insert("warnings".into(), json!(r.warnings));
    m.insert("seed".into(), json!(r.options.seed));
    m.insert("tol".into(), json!(tol.rank));
    m.insert("tol_cluster".into(), json!(r.options.cluster));
    Value::Object(m)
}

fn quadric_rows(q: &ProjQuadric) -> Value {
    let m = q.matrix();
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| m[(i, j)].re).collect())
        .collect();
    json!(rows)
}

/// The construction and verification report of a named demo.
pub fn demo_json(name: &str, tol: &Tolerances) -> Result<Value> {
    match name {
        "reye" => {
            let r = standard_double_four()?;
            let inc = reye_incidence(&r, 1e-8);
            let witnesses = r.basket_witnesses(tol)?;
            let present = witnesses.iter().filter(|w| w.is_some()).count();
            let max_res = witnesses
                .iter()
                .flatten()
                .map(|w| w.residual)
                .fold(0.0, f64::max);
            let rank_two = r
                .points
                .iter()
                .filter(|p| p.numeric_rank(tol.rank).rank == 2)
                .count();
            Ok(json!({
                "demo": "reye",
                "points": r.points.len(),
                "lines": r.lines.len(),
                "ok": inc.ok,
                "point_degrees": inc.point_degrees,
                "line_degrees": inc.line_degrees,
                "points_rank_two": rank_two,
                "basket_witnesses": present,
                "max_witness_residual": max_res,
                "q": r.q.iter().map(quadric_rows).collect::<Vec<_>>(),
                "b": r.b.iter().map(quadric_rows).collect::<Vec<_>>(),
            }))
        }
        "double5" => {
            let d = double_five(tol)?;
            let pencils: Vec<Value> = d
                .pencils
                .iter()
                .map(|p| json!({"i": p.i, "j": p.j, "rank_one": p.location.is_some(), "residual": p.residual}))
                .collect();
            Ok(json!({
                "demo": "double5",
                "pencils_with_rank_one": d.pencils_with_rank_one,
                "pencils": d.pencils.len(),
                "max_residual": d.max_residual,
                "detail": pencils,
            }))
        }
        "basket-pair" => {
            let b = ProjQuadric::diag([1.0, 1.0, -1.0, -1.0])?;
            let q = ProjQuadric::diag([1.0, 1.0, 1.0, -1.0])?;
            let w = is_basket_pair(&b, &q, tol)?.ok_or(Error::NoSolution)?;
            Ok(json!({
                "demo": "basket-pair",
                "basket": quadric_rows(&b),
                "quadric": quadric_rows(&q),
                "double_plane": quadric_rows(&w.d),
                "residual": w.residual,
            }))
        }
        "quadrilateral" => {
            let square = |i: usize| {
                let mut e = [0.0; 4];
                e[i] = 1.0;
                ProjQuadric::diag(e)
            };
            let d = [square(0)?, square(1)?, square(2)?, square(3)?];
            let plane = [
                ProjQuadric::diag([1.0, 2.0, -1.0, 0.5])?,
                ProjQuadric::diag([0.3, -1.0, 1.0, 2.0])?,
                ProjQuadric::diag([-0.4, 1.1, 0.7, 1.3])?,
            ];
            let cq = construct_typical_quadrilateral(&d, &plane, tol)?;
            let back = reconstruct_tetrahedron(&cq, tol)?;
            let err = back
                .iter()
                .zip(&d)
                .map(|(a, b)| a.dist(b))
                .fold(0.0, f64::max);
            Ok(json!({
                "demo": "quadrilateral",
                "classification": format!("{:?}", cq.classification),
                "vertices": cq.vertices.len(),
                "vertex_ranks": cq.vertices.iter().map(|v| v.profile.rank).collect::<Vec<_>>(),
                "incidence_ok": cq.incidence_ok(1e-8),
                "reconstruction_error": err,
            }))
        }
        other => Err(Error::InvalidInput(format!(
            "unknown demo '{other}'; available: {}",
            DEMOS.join(", ")
        ))),
    }
}

fn write_number(n: &serde_json::Number, out: &mut String) {
    if let Some(i) = n.as_i64() {
        out.push_str(&i.to_string());
    } else if let Some(u) = n.as_u64() {
        out.push_str(&u.to_string());
    } else {
        out.push_str(&format!("{:.16e}", n.as_f64().unwrap_or(0.0)));
    }
}

fn write_value(v: &Value, depth: usize, out: &mut String) -> Result<()> {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Null => return Err(Error::InvalidInput("non-finite number in output".into())),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(n, out),
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(a) => {
            if a.iter().all(|x| x.is_number()) {
                out.push('[');
                for (k, x) in a.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(x, depth, out)?;
                }
                out.push(']');
            } else if a.is_empty() {
                out.push_str("[]");
            } else {
                out.push_str("[\n");
                for (k, x) in a.iter().enumerate() {
                    out.push_str(&pad(depth + 1));
                    write_value(x, depth + 1, out)?;
                    out.push_str(if k + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(depth));
                out.push(']');
            }
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return Ok(());
            }
            out.push_str("{\n");
            for (k, (key, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(key).unwrap());
                out.push_str(": ");
                write_value(x, depth + 1, out)?;
                out.push_str(if k + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
    Ok(())
}

/// Pretty JSON with floats at 17 significant digits. Fails on null, which
/// is what serde_json produces for a non-finite float.
pub fn format_json(v: &Value) -> Result<String> {
    let mut out = String::new();
    write_value(v, 0, &mut out)?;
    out.push('\n');
    Ok(out)
}

/// Leaves of a JSON value as (dotted path, text) pairs in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(v: &Value, path: String, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if path.is_empty() {
                        k.clone()
                    } else {
                        format!("{path}.{k}")
                    };
                    go(x, p, out);
                }
            }
            Value::Array(a) => {
                for (k, x) in a.iter().enumerate() {
                    go(x, format!("{path}.{k}"), out);
                }
            }
            Value::Number(n) => {
                let mut s = String::new();
                write_number(n, &mut s);
                out.push((path, s));
            }
            Value::String(s) => out.push((path, s.clone())),
            Value::Bool(b) => out.push((path, b.to_string())),
            Value::Null => out.push((path, String::new())),
        }
    }
    let mut out = Vec::new();
    go(v, String::new(), &mut out);
    out
}

//! JSON file formats for spaces, metrics and point maps.
//!
//! Every number is a string holding an exact rational (`"3"`, `"1/2"`) or
//! `"inf"`. A levels entry lists `[right endpoint, value]` pieces, a ddf
//! entry lists `[jump point, value from there on]` jumps:
//!
//! ```json
//! {
//!   "form": "levels",
//!   "tnorm": "product",
//!   "separated": true,
//!   "points": ["a", "b"],
//!   "dist": {
//!     "a|b": [["1/2", "5"], ["1", "2"]]
//!   }
//! }
//! ```
//!
//! Pair keys may name the two points in either order but only once. Output
//! always uses carrier order and the layout above, so serializing a parsed
//! file is canonical.

use std::fmt::Write as _;

use probmet::bridge::MetricSpace;
use probmet::{
    DdfSpace, Distance, DistanceDistribution, ExtReal, LevelFunction, LevelSpace, PointId, PointMap, Space,
    TNorm, UnitVal,
};
use serde_json::{Map, Value};
use thiserror::Error;

/// A schema or value error at a JSON field path such as `dist."a|b"[1][0]`.
#[derive(Debug, Error)]
#[error("{path}: {message}")]
pub struct FormatError {
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError {
        path: path.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceFile {
    Levels(LevelSpace),
    Ddf(DdfSpace),
}

impl SpaceFile {
    pub fn points(&self) -> &[PointId] {
        match self {
            SpaceFile::Levels(s) => s.points(),
            SpaceFile::Ddf(s) => s.points(),
        }
    }

    pub fn into_levels(self) -> LevelSpace {
        match self {
            SpaceFile::Levels(s) => s,
            SpaceFile::Ddf(s) => probmet::delta(&s),
        }
    }
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| {
        err(
            format!("line {} column {}", e.line(), e.column()),
            "malformed JSON",
        )
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, FormatError> {
    obj.get(key).ok_or_else(|| err(key, "missing field"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, FormatError> {
    match v {
        Value::String(s) => Ok(s),
        Value::Number(_) => Err(err(
            path,
            "rationals only: write numbers as strings such as \"1/2\"",
        )),
        _ => Err(err(path, "expected a string")),
    }
}

fn ext(v: &Value, path: &str) -> Result<ExtReal, FormatError> {
    string(v, path)?.parse().map_err(|e| err(path, e))
}

fn unit(v: &Value, path: &str) -> Result<UnitVal, FormatError> {
    string(v, path)?.parse().map_err(|e| err(path, e))
}

fn points(obj: &Map<String, Value>) -> Result<Vec<PointId>, FormatError> {
    let list = field(obj, "points")?
        .as_array()
        .ok_or_else(|| err("points", "expected an array of ids"))?;
    let mut out: Vec<PointId> = Vec::with_capacity(list.len());
    for (i, v) in list.iter().enumerate() {
        let path = format!("points[{i}]");
        let id = string(v, &path)?;
        if id.is_empty() || id.contains('|') {
            return Err(err(path, "ids must be nonempty and must not contain `|`"));
        }
        if out.iter().any(|p| p == id) {
            return Err(err(path, format!("duplicate point id `{id}`")));
        }
        out.push(id.to_string());
    }
    Ok(out)
}

fn pair_key(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

/// Collects one entry per unordered pair, in carrier order.
fn pair_entries<'a>(
    obj: &'a Map<String, Value>,
    points: &[PointId],
) -> Result<Vec<(&'a Value, String)>, FormatError> {
    let dist = object(field(obj, "dist")?, "dist")?;
    for key in dist.keys() {
        let path = format!("dist.\"{key}\"");
        let Some((a, b)) = key.split_once('|') else {
            return Err(err(path, "pair keys look like \"x|y\""));
        };
        for id in [a, b] {
            if !points.iter().any(|p| p == id) {
                return Err(err(path.clone(), format!("unknown point `{id}`")));
            }
        }
        if a == b {
            return Err(err(path, "the diagonal is implicit"));
        }
    }
    let mut out = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let (fwd, rev) = (pair_key(a, b), pair_key(b, a));
            let entry = match (dist.get(&fwd), dist.get(&rev)) {
                (Some(v), None) => (v, format!("dist.\"{fwd}\"")),
                (None, Some(v)) => (v, format!("dist.\"{rev}\"")),
                (Some(_), Some(_)) => {
                    return Err(err(format!("dist.\"{rev}\""), format!("pair given twice, also as \"{fwd}\"")))
                }
                (None, None) => return Err(err("dist", format!("missing pair \"{fwd}\""))),
            };
            out.push(entry);
        }
    }
    Ok(out)
}

fn steps<'a>(v: &'a Value, path: &str) -> Result<Vec<(&'a Value, &'a Value, String)>, FormatError> {
    let list = v.as_array().ok_or_else(|| err(path, "expected a list of [x, y] pairs"))?;
    list.iter()
        .enumerate()
        .map(|(k, p)| {
            let here = format!("{path}[{k}]");
            match p.as_array().map(Vec::as_slice) {
                Some([x, y]) => Ok((x, y, here)),
                _ => Err(err(here, "expected a two-element list")),
            }
        })
        .collect()
}

fn level_function(v: &Value, path: &str) -> Result<LevelFunction, FormatError> {
    let pieces = steps(v, path)?
        .into_iter()
        .map(|(b, w, here)| Ok((unit(b, &format!("{here}[0]"))?, ext(w, &format!("{here}[1]"))?)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    LevelFunction::new(pieces).map_err(|e| err(path, e))
}

fn distribution(v: &Value, path: &str) -> Result<DistanceDistribution, FormatError> {
    let jumps = steps(v, path)?
        .into_iter()
        .map(|(p, a, here)| Ok((ext(p, &format!("{here}[0]"))?, unit(a, &format!("{here}[1]"))?)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    DistanceDistribution::new(jumps).map_err(|e| err(path, e))
}

pub fn parse_space(text: &str) -> Result<SpaceFile, FormatError> {
    space_from_value(&parse_json(text)?)
}

/// A space given as an already parsed JSON object, e.g. inline in a map or
/// lift file.
pub fn space_from_value(root: &Value) -> Result<SpaceFile, FormatError> {
    let obj = object(root, "$")?;
    let form = string(field(obj, "form")?, "form")?;
    match form {
        "levels" | "ddf" => {}
        "metric" => return Err(err("form", "this is a metric file; a space file is expected")),
        other => {
            return Err(err(
                "form",
                format!("unknown form `{other}`, expected \"levels\" or \"ddf\""),
            ))
        }
    }
    let tnorm: TNorm = string(field(obj, "tnorm")?, "tnorm")?
        .parse()
        .map_err(|e| err("tnorm", e))?;
    let separated = field(obj, "separated")?
        .as_bool()
        .ok_or_else(|| err("separated", "expected true or false"))?;
    let points = points(obj)?;
    let entries = pair_entries(obj, &points)?;
    let build = |e: probmet::Error| err("$", e);
    match form {
        "levels" => {
            let table = entries
                .iter()
                .map(|(v, path)| level_function(v, path))
                .collect::<Result<_, _>>()?;
            Ok(SpaceFile::Levels(Space::new(points, tnorm, separated, table).map_err(build)?))
        }
        "ddf" => {
            let table = entries
                .iter()
                .map(|(v, path)| distribution(v, path))
                .collect::<Result<_, _>>()?;
            Ok(SpaceFile::Ddf(Space::new(points, tnorm, separated, table).map_err(build)?))
        }
        _ => unreachable!("form checked above"),
    }
}

fn quoted(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

fn write_space<F: Distance>(form: &str, s: &Space<F>, entry: impl Fn(&F) -> String) -> String {
    let ids: Vec<String> = s.points().iter().map(|p| quoted(p)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"form\": \"{form}\",");
    let _ = writeln!(out, "  \"tnorm\": \"{}\",", s.tnorm());
    let _ = writeln!(out, "  \"separated\": {},", s.separated());
    let _ = writeln!(out, "  \"points\": [{}],", ids.join(", "));
    write_dist(&mut out, s.pairs().map(|(i, j, d)| (i, j, entry(d))), s.points());
    out
}

fn write_dist(out: &mut String, entries: impl Iterator<Item = (usize, usize, String)>, points: &[PointId]) {
    let lines: Vec<String> = entries
        .map(|(i, j, v)| format!("    {}: {v}", quoted(&pair_key(&points[i], &points[j]))))
        .collect();
    if lines.is_empty() {
        out.push_str("  \"dist\": {}\n}\n");
    } else {
        let _ = write!(out, "  \"dist\": {{\n{}\n  }}\n}}\n", lines.join(",\n"));
    }
}

fn pairs_list(items: impl Iterator<Item = (String, String)>) -> String {
    let parts: Vec<String> = items.map(|(a, b)| format!("[{}, {}]", quoted(&a), quoted(&b))).collect();
    format!("[{}]", parts.join(", "))
}

pub fn serialize_space(s: &SpaceFile) -> String {
    match s {
        SpaceFile::Levels(s) => serialize_levels(s),
        SpaceFile::Ddf(s) => write_space("ddf", s, |a| {
            pairs_list(a.jumps().iter().map(|(p, v)| (p.to_string(), v.to_string())))
        }),
    }
}

pub fn serialize_levels(s: &LevelSpace) -> String {
    write_space("levels", s, |d| {
        pairs_list(d.pieces().iter().map(|(b, w)| (b.to_string(), w.to_string())))
    })
}

/// Metric files carry an optional `separated` flag (default `true`); the
/// triangle inequality and separation are checked on parse.
pub fn parse_metric(text: &str) -> Result<MetricSpace, FormatError> {
    let root = parse_json(text)?;
    let obj = object(&root, "$")?;
    let form = string(field(obj, "form")?, "form")?;
    if form != "metric" {
        return Err(err("form", format!("expected \"metric\", found `{form}`")));
    }
    let separated = match obj.get("separated") {
        None => true,
        Some(v) => v.as_bool().ok_or_else(|| err("separated", "expected true or false"))?,
    };
    let points = points(obj)?;
    let table = pair_entries(obj, &points)?
        .iter()
        .map(|(v, path)| ext(v, path))
        .collect::<Result<_, _>>()?;
    let m = MetricSpace::new(points, table, separated).map_err(|e| err("$", e))?;
    m.validate().map_err(|e| err("dist", e))?;
    Ok(m)
}

pub fn serialize_metric(m: &MetricSpace) -> String {
    let ids: Vec<String> = m.points().iter().map(|p| quoted(p)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"form\": \"metric\",");
    let _ = writeln!(out, "  \"separated\": {},", m.separated());
    let _ = writeln!(out, "  \"points\": [{}],", ids.join(", "));
    let n = m.len();
    let entries = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, quoted(&m.dist(i, j).to_string())));
    write_dist(&mut out, entries, m.points());
    out
}

/// `{"map": {"a": "x", ...}}` with every source id exactly once.
pub fn parse_map(text: &str, source: &[PointId], target: &[PointId]) -> Result<PointMap, FormatError> {
    let root = parse_json(text)?;
    map_from_value(&root, source, target)
}

pub fn map_from_value(root: &Value, source: &[PointId], target: &[PointId]) -> Result<PointMap, FormatError> {
    let obj = object(root, "$")?;
    let map = object(field(obj, "map")?, "map")?;
    let mut pairs = Vec::with_capacity(map.len());
    for (k, v) in map {
        let path = format!("map.\"{k}\"");
        if !source.contains(k) {
            return Err(err(path, format!("unknown source point `{k}`")));
        }
        let t = string(v, &path)?;
        if !target.iter().any(|p| p == t) {
            return Err(err(path, format!("unknown target point `{t}`")));
        }
        pairs.push((k.as_str(), t));
    }
    PointMap::from_ids(source, target, pairs).map_err(|e| err("map", e))
}

pub fn serialize_map(f: &PointMap) -> String {
    let lines: Vec<String> = f
        .source()
        .iter()
        .enumerate()
        .map(|(i, p)| format!("    {}: {}", quoted(p), quoted(&f.target()[f.apply(i)])))
        .collect();
    if lines.is_empty() {
        "{\n  \"map\": {}\n}\n".to_string()
    } else {
        format!("{{\n  \"map\": {{\n{}\n  }}\n}}\n", lines.join(",\n"))
    }
}

/// A comma-separated id list such as `a,b,c`; the empty string is the empty
/// set.
pub fn parse_point_set(list: &str, points: &[PointId]) -> Result<probmet::PointSet, FormatError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|id| {
            points
                .iter()
                .position(|p| p == id)
                .ok_or_else(|| err("--set", format!("unknown point `{id}`")))
        })
        .collect()
}

pub fn render_point_set(set: &probmet::PointSet, points: &[PointId]) -> String {
    let ids: Vec<&str> = set.iter().map(|&i| points[i].as_str()).collect();
    ids.join(",")
}

//! The verbs of the `probmet` binary. Each returns the report text and
//! whether the checked property holds; all decisions are made by the
//! library.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use probmet::{
    classify_morphism, closure, coreflect, cospan_witness, initial_lift, is_nonexpansive, phi,
    product, reflect, t0_quotient, validate_ddf_space, validate_level_space, LevelSpace, PointMap,
    StructuredSource,
};
use serde_json::Value;
use thiserror::Error;

use crate::format::{self, FormatError, SpaceFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{file}: {source}")]
    Format { file: PathBuf, source: FormatError },
    #[error("{file}: {message}")]
    Input { file: PathBuf, message: String },
    #[error(transparent)]
    Library(#[from] probmet::Error),
}

impl CliError {
    fn input(file: &Path, message: impl ToString) -> Self {
        CliError::Input {
            file: file.to_path_buf(),
            message: message.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "probmet", version)]
#[command(about = "Verify, convert and construct finite probabilistic metric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Levels,
    Ddf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every axiom of a space file and print witnesses for failures
    Verify { file: PathBuf },
    /// Rewrite a valid space file in the levels or ddf presentation
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Form,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closure of a point set in the strong topology
    Closure {
        file: PathBuf,
        /// Comma-separated point ids
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Non-expansiveness, epi, mono and regular-mono flags of a map
    /// `SOURCE TARGET` may be omitted when the map file names them in
    /// `"source"` and `"target"` fields
    Classify {
        #[arg(requires = "target")]
        source: Option<PathBuf>,
        target: Option<PathBuf>,
        #[arg(long)]
        map: PathBuf,
    },
    /// Two maps agreeing on the closure of a set that separate a point
    Witness {
        file: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        point: String,
        /// Directory receiving Z.json, u.json and v.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Initial structure on a set with maps into spaces
    Lift {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of space files
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Supremum metric of a space
    Coreflect {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separated path metric of the top level of a space
    Reflect {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identify points at distance identically zero
    Quotient {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Report text plus files to write. `holds = false` maps to exit status 1.
#[derive(Debug, Default)]
pub struct Outcome {
    pub holds: bool,
    pub text: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Outcome {
    fn done(text: String) -> Self {
        Outcome {
            holds: true,
            text,
            files: Vec::new(),
        }
    }

    /// Sends `content` to `out` if given, otherwise into the report.
    fn emit(out: &Option<PathBuf>, content: String) -> Self {
        match out {
            Some(path) => Outcome {
                holds: true,
                text: String::new(),
                files: vec![(path.clone(), content)],
            },
            None => Outcome::done(content),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds {
            0
        } else {
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    format::parse_json(&read(path)?).map_err(|source| CliError::Format {
        file: path.to_path_buf(),
        source,
    })
}

fn load_space(path: &Path) -> Result<SpaceFile, CliError> {
    format::parse_space(&read(path)?).map_err(|source| CliError::Format {
        file: path.to_path_buf(),
        source,
    })
}

/// Levels form of a space that passes every axiom; anything else is an
/// input error for the constructions.
fn valid_levels(file: SpaceFile, path: &Path) -> Result<LevelSpace, CliError> {
    let s = file.into_levels();
    let report = validate_level_space(&s);
    match report.witnesses.first() {
        None => Ok(s),
        Some(w) => Err(CliError::input(
            path,
            format!("space fails the axioms: {}", w.render(s.points())),
        )),
    }
}

fn load_valid(path: &Path) -> Result<LevelSpace, CliError> {
    valid_levels(load_space(path)?, path)
}

/// A space either inline or as a path relative to the referring file.
fn space_ref(v: &Value, referrer: &Path, field: &str) -> Result<LevelSpace, CliError> {
    match v {
        Value::String(rel) => {
            let base = referrer.parent().unwrap_or(Path::new(""));
            load_valid(&base.join(rel))
        }
        Value::Object(_) => {
            let s = format::space_from_value(v).map_err(|e| CliError::Format {
                file: referrer.to_path_buf(),
                source: FormatError {
                    path: format!("{field}.{}", e.path),
                    message: e.message,
                },
            })?;
            valid_levels(s, referrer)
        }
        _ => Err(CliError::input(referrer, format!("{field}: expected a path or an inline space"))),
    }
}

fn map_ref(v: &Value, file: &Path, field: &str, source: &LevelSpace, target: &LevelSpace) -> Result<PointMap, CliError> {
    format::map_from_value(v, source.points(), target.points()).map_err(|e| CliError::Format {
        file: file.to_path_buf(),
        source: FormatError {
            path: if field.is_empty() { e.path } else { format!("{field}.{}", e.path) },
            message: e.message,
        },
    })
}

fn point_set(list: &str, s: &LevelSpace) -> Result<probmet::PointSet, CliError> {
    format::parse_point_set(list, s.points()).map_err(|source| CliError::Format {
        file: PathBuf::from("<arguments>"),
        source,
    })
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Verify { file } => verify(file),
        Command::Convert { file, to, out } => convert(file, *to, out),
        Command::Closure { file, set } => {
            let s = load_valid(file)?;
            let a = point_set(set, &s)?;
            let cl = closure(&s, &a)?;
            Ok(Outcome::done(format!("closure: {}\n", format::render_point_set(&cl, s.points()))))
        }
        Command::Classify { source, target, map } => classify(source.as_deref(), target.as_deref(), map),
        Command::Witness { file, set, point, out } => witness(file, set, point, out),
        Command::Lift { file, out } => lift(file, out),
        Command::Product { files, out } => {
            let spaces = files.iter().map(|f| load_valid(f)).collect::<Result<Vec<_>, _>>()?;
            let (p, _) = product(&spaces)?;
            Ok(Outcome::emit(out, format::serialize_levels(&p)))
        }
        Command::Coreflect { file, out } => {
            let (m, _) = coreflect(&load_valid(file)?)?;
            Ok(Outcome::emit(out, format::serialize_metric(&m)))
        }
        Command::Reflect { file, out } => {
            let (m, _) = reflect(&load_valid(file)?)?;
            Ok(Outcome::emit(out, format::serialize_metric(&m)))
        }
        Command::Quotient { file, out } => {
            let (q, _) = t0_quotient(&load_valid(file)?)?;
            Ok(Outcome::emit(out, format::serialize_levels(&q)))
        }
    }
}

fn verify(file: &Path) -> Result<Outcome, CliError> {
    let text = match load_space(file)? {
        SpaceFile::Levels(s) => validate_level_space(&s).render(s.points()),
        SpaceFile::Ddf(s) => validate_ddf_space(&s).render(s.points()),
    };
    Ok(Outcome {
        holds: text.starts_with("verdict: pass"),
        text,
        files: Vec::new(),
    })
}

fn convert(file: &Path, to: Form, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let input = load_space(file)?;
    let report = match &input {
        SpaceFile::Levels(s) => validate_level_space(s).render(s.points()),
        SpaceFile::Ddf(s) => validate_ddf_space(s).render(s.points()),
    };
    if !report.starts_with("verdict: pass") {
        return Ok(Outcome {
            holds: false,
            text: report,
            files: Vec::new(),
        });
    }
    let levels = input.into_levels();
    let output = match to {
        Form::Levels => SpaceFile::Levels(levels),
        Form::Ddf => SpaceFile::Ddf(phi(&levels)),
    };
    Ok(Outcome::emit(out, format::serialize_space(&output)))
}

fn classify(source: Option<&Path>, target: Option<&Path>, map: &Path) -> Result<Outcome, CliError> {
    let root = read_json(map)?;
    let end = |given: Option<&Path>, field: &str| match (given, root.get(field)) {
        (Some(path), _) => load_valid(path),
        (None, Some(v)) => space_ref(v, map, field),
        (None, None) => Err(CliError::input(map, format!("{field}: missing field and no file given"))),
    };
    let x = end(source, "source")?;
    let y = end(target, "target")?;
    let f = map_ref(&root, map, "", &x, &y)?;
    let report = is_nonexpansive(&f, &x, &y)?;
    if !report.passed() {
        return Ok(Outcome {
            holds: false,
            text: report.render(x.points()),
            files: Vec::new(),
        });
    }
    let c = classify_morphism(&f, &x, &y)?;
    Ok(Outcome::done(format!("{}{}", report.render(x.points()), c.render())))
}

fn witness(file: &Path, set: &str, point: &str, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let s = load_valid(file)?;
    let a = point_set(set, &s)?;
    let y = s
        .index_of(point)
        .map_err(|e| CliError::input(Path::new("<arguments>"), format!("--point: {e}")))?;
    let cl = closure(&s, &a)?;
    if cl.contains(&y) {
        return Ok(Outcome {
            holds: false,
            text: format!(
                "verdict: fail\npoint {point} lies in the closure {{{}}}; every agreeing pair agrees at it\n",
                format::render_point_set(&cl, s.points())
            ),
            files: Vec::new(),
        });
    }
    let c = cospan_witness(&s, &a, y)?;
    let z = format::serialize_levels(&c.target);
    let u = format::serialize_map(&c.u);
    let v = format::serialize_map(&c.v);
    let verdict = format!(
        "verdict: pass (u({point}) = {}, v({point}) = {})\n",
        c.target.id(c.u.apply(y)),
        c.target.id(c.v.apply(y))
    );
    Ok(match out {
        Some(dir) => Outcome {
            holds: true,
            text: verdict,
            files: vec![(dir.join("Z.json"), z), (dir.join("u.json"), u), (dir.join("v.json"), v)],
        },
        None => Outcome::done(format!("{verdict}--- Z.json\n{z}--- u.json\n{u}--- v.json\n{v}")),
    })
}

/// `{"points": [...], "legs": [{"space": <path or inline>, "map": {...}}]}`.
fn lift(file: &Path, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let root = read_json(file)?;
    let bad = |m: &str| CliError::input(file, m);
    let obj = root.as_object().ok_or_else(|| bad("expected an object"))?;
    let points: Vec<String> = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("points: expected an array of ids"))?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("points[{i}]: expected a string")))
        })
        .collect::<Result<_, _>>()?;
    let legs_json = obj
        .get("legs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("legs: expected an array"))?;
    // a placeholder domain so map parsing can check source ids
    let domain = LevelSpace::from_fn(points.clone(), probmet::TNorm::Minimum, false, |_, _| {
        probmet::LevelFunction::zero()
    })
    .map_err(|e| bad(&format!("points: {e}")))?;
    let mut legs = Vec::with_capacity(legs_json.len());
    for (k, leg) in legs_json.iter().enumerate() {
        let field = format!("legs[{k}]");
        let space = leg
            .get("space")
            .ok_or_else(|| bad(&format!("{field}.space: missing field")))?;
        let target = space_ref(space, file, &format!("{field}.space"))?;
        let f = map_ref(leg, file, &field, &domain, &target)?;
        legs.push((f, target));
    }
    let src = StructuredSource::new(points, legs)?;
    Ok(Outcome::emit(out, format::serialize_levels(&initial_lift(&src)?)))
}

/// Writes the outcome's files and returns the process exit status.
pub fn finish(outcome: &Outcome) -> Result<i32, CliError> {
    for (path, content) in &outcome.files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        fs::write(path, content).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(outcome.exit_code())
}

//! The batch front end: argument parsing, the per-command pipelines, and the
//! JSON reports they print. Exit codes: 0 when every check passes, 1 on a
//! mathematical violation, 2 on malformed input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Field, Scalar};
use crate::check::Check;
use crate::connection::{
    apply_gauge, connection_from_delta, is_flat, log_holonomy_components, normalize_fock_schwinger, Blocks,
    EquivariantConnection,
};
use crate::doc::{laurent_entries, sha256_hex, BlockDoc, ConnectionDoc, Document, MhsDoc, PathDoc};
use crate::error::{Error, Result};
use crate::fixtures::{corpus, counterexamples, kummer_delta};
use crate::freelie::{abelian_coefficient, beta_coefficient, coefficient_comparison, lie_tables, MAX_TRUNCATION};
use crate::hodgecoh::{absolute_cohomology, euler_characteristic, hom_from_unit, real_absolute_cohomology};
use crate::holonomy::{axes_trivial, connection_holonomy, triangle_delta, PolygonalPath};
use crate::mhs::{ComplexMHS, RealMHS};
use crate::rees::{line_types, rees_patching, rees_w_line_type, w_line_transition};
use crate::splitting::{delta_operator, delta_to_mhs, log_delta_components, splitting_contracts, DeltaObject};

pub const VERSION: &str = concat!("hodge-gauge ", env!("CARGO_PKG_VERSION"));

/// Truncation used by `lie` and `suite` when nothing else determines it.
pub const DEFAULT_TRUNCATION: u32 = 6;

#[derive(Debug, Parser)]
#[command(name = "hodge-gauge", version, about = "Exact mixed Hodge structures and equivariant connections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Require every input document to be defined over this field (Q or Qi).
    #[arg(long, global = true)]
    pub field: Option<Field>,
    /// Truncation N of the free Lie algebra tables (2..=12).
    #[arg(long, global = true)]
    pub truncation: Option<u32>,
    /// Also run the check pinning the transport sign and triangle orientation.
    #[arg(long, global = true)]
    pub orientation_selftest: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check opposedness and report Hodge numbers.
    Validate { inputs: Vec<PathBuf> },
    /// Deligne splittings, δ and the components of log δ.
    Split { inputs: Vec<PathBuf> },
    /// Fock-Schwinger connection of a structure, or normalization of a connection.
    Connect { inputs: Vec<PathBuf> },
    /// Triangle holonomy, or holonomy along an explicit path.
    Holonomy {
        inputs: Vec<PathBuf>,
        /// A path document, or inline points such as `0,0;-1,0;0,-1;0,0`.
        #[arg(long)]
        path: Option<String>,
    },
    /// MHS to δ to connection to triangle holonomy and back, with every equality checked.
    Roundtrip { inputs: Vec<PathBuf> },
    /// Rees patching, restriction to lines and splitting types.
    Rees {
        inputs: Vec<PathBuf>,
        /// A point t = `t1,t2` of a line λ_T; repeatable. Defaults to a fixed set.
        #[arg(long = "line")]
        lines: Vec<String>,
    },
    /// Absolute Hodge cohomology (complex, and real for real documents).
    Ext { inputs: Vec<PathBuf> },
    /// Generator-change tables z ↔ α and the leading-coefficient comparison.
    Lie { inputs: Vec<PathBuf> },
    /// Write the fixture corpus.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
    /// Every applicable command over files and directories of documents.
    Suite {
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    Malformed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Malformed => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub version: String,
    pub status: Status,
    /// First failing check or the error that stopped the pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub checks: Vec<Check>,
    pub result: Value,
}

/// Everything one invocation prints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    pub command: String,
    pub version: String,
    pub status: Status,
    pub reports: Vec<Report>,
}

impl Batch {
    fn new(command: &str, reports: Vec<Report>) -> Self {
        let status = reports.iter().map(|r| r.status).max().unwrap_or(Status::Pass);
        Batch {
            command: command.into(),
            version: VERSION.into(),
            status,
            reports,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// A raw input: a label for the report and the bytes read (or the read error).
#[derive(Clone, Debug)]
pub struct Input {
    pub label: String,
    pub bytes: std::result::Result<Vec<u8>, String>,
}

impl Input {
    pub fn read(path: &Path) -> Self {
        let label = path
            .file_name()
            .map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
        Input {
            label,
            bytes: std::fs::read(path).map_err(|e| format!("{}: {e}", path.display())),
        }
    }

    pub fn from_text(label: &str, text: &str) -> Self {
        Input {
            label: label.into(),
            bytes: Ok(text.as_bytes().to_vec()),
        }
    }

    fn digest(&self) -> Option<String> {
        self.bytes.as_ref().ok().map(|b| sha256_hex(b))
    }

    fn document(&self, field: Option<Field>) -> Result<Document> {
        let bytes = self.bytes.as_ref().map_err(|e| Error::Parse(e.clone()))?;
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        let doc = Document::parse(text)?;
        if let (Some(want), Some(have)) = (field, doc.field()) {
            if want == Field::Q && have == Field::Qi {
                return Err(Error::Parse("document is over Qi but --field Q was requested".into()));
            }
        }
        Ok(doc)
    }
}

/// Flags shared by the pipelines.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub field: Option<Field>,
    pub truncation: Option<u32>,
    pub path: Option<PolygonalPath>,
    pub lines: Vec<[Scalar; 2]>,
}

type Outcome = Result<(Value, Vec<Check>)>;

fn finish(command: &str, input: Option<&Input>, outcome: Outcome) -> Report {
    let (status, witness, checks, result) = match outcome {
        Ok((result, checks)) => match checks.iter().find(|c| !c.pass) {
            Some(c) => (Status::Violation, Some(c.name.clone()), checks, result),
            None => (Status::Pass, None, checks, result),
        },
        Err(e) => {
            let status = if e.is_input_error() { Status::Malformed } else { Status::Violation };
            (status, Some(e.to_string()), Vec::new(), Value::Null)
        }
    };
    Report {
        command: command.into(),
        input: input.map(|i| i.label.clone()),
        input_digest: input.and_then(Input::digest),
        version: VERSION.into(),
        status,
        witness,
        checks,
        result,
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("payload serializes")
}

fn blocks_value(b: &Blocks) -> Value {
    let v: Vec<BlockDoc> = b
        .iter()
        .map(|(&(p, q), m)| BlockDoc {
            p,
            q,
            matrix: m.row_vecs(),
        })
        .collect();
    to_value(&v)
}

/// A document resolved into library types.
enum Structure {
    Complex(ComplexMHS),
    Real(RealMHS),
    Delta(DeltaObject),
    Connection(EquivariantConnection),
    Path(PolygonalPath),
}

fn resolve(doc: &Document) -> Result<Structure> {
    Ok(match doc {
        Document::Mhs(d) => Structure::Complex(d.to_mhs()?),
        Document::RealMhs(d) => Structure::Real(d.to_real()?),
        Document::Delta(d) => Structure::Delta(d.to_delta()?),
        Document::Connection(d) => Structure::Connection(d.to_connection()?),
        Document::Path(d) => Structure::Path(d.to_path()?),
    })
}

fn wrong_kind(command: &str, s: &Structure) -> Error {
    let kind = match s {
        Structure::Complex(_) => "mhs",
        Structure::Real(_) => "real_mhs",
        Structure::Delta(_) => "delta",
        Structure::Connection(_) => "connection",
        Structure::Path(_) => "path",
    };
    Error::Parse(format!("`{command}` does not accept a {kind} document"))
}

/// The complex MHS behind a structure document, with its δ.
fn mhs_and_delta(command: &str, s: &Structure) -> Result<(ComplexMHS, DeltaObject)> {
    match s {
        Structure::Complex(v) => Ok((v.clone(), delta_operator(v)?)),
        Structure::Real(v) => {
            let vc = v.realize()?;
            let d = delta_operator(&vc)?;
            Ok((vc, d))
        }
        Structure::Delta(d) => Ok((delta_to_mhs(d)?, d.clone())),
        other => Err(wrong_kind(command, other)),
    }
}

fn validate(s: &Structure) -> Outcome {
    match s {
        Structure::Complex(v) => {
            let h = v.validate()?;
            Ok((json!({ "hodge": h }), vec![Check::new("opposedness", true)]))
        }
        Structure::Real(v) => {
            let h = v.realize()?.validate()?;
            Ok((
                json!({ "hodge": h }),
                vec![
                    Check::new("opposedness of (W, F, conj F)", true),
                    Check::new("Hodge numbers are symmetric", h == h.transpose()),
                ],
            ))
        }
        Structure::Delta(d) => {
            let h = delta_to_mhs(d)?.validate()?;
            Ok((
                json!({ "hodge": h }),
                vec![Check::new("split model has the given Hodge numbers", &h == d.hodge())],
            ))
        }
        Structure::Connection(c) => Ok((
            json!({ "hodge": c.hodge(), "flat": is_flat(c), "fock_schwinger": c.is_fock_schwinger() }),
            vec![Check::new("pullback to both axes vanishes", axes_trivial(c))],
        )),
        Structure::Path(p) => {
            let pts = p.points();
            let closed = pts.first() == pts.last();
            Ok((json!({ "points": pts.len(), "closed": closed }), Vec::new()))
        }
    }
}

fn split(s: &Structure) -> Outcome {
    let (v, d) = mhs_and_delta("split", s)?;
    let mut checks = splitting_contracts(&v)?;
    checks.push(Check::new(
        "split model of delta has the same Hodge numbers",
        &delta_to_mhs(&d)?.validate()? == d.hodge(),
    ));
    let result = json!({
        "hodge": d.hodge(),
        "labels": d.labels(),
        "delta": d.delta(),
        "log_components": blocks_value(&log_delta_components(&d)),
        "split": d.is_split(),
    });
    Ok((result, checks))
}

fn connect(s: &Structure) -> Outcome {
    if let Structure::Connection(c) = s {
        let (n, g) = normalize_fock_schwinger(c)?;
        let (again, _) = normalize_fock_schwinger(&n)?;
        let tri = PolygonalPath::triangle();
        let checks = vec![
            Check::new("result is in the Fock-Schwinger gauge", n.is_fock_schwinger()),
            Check::new("normalization is idempotent", again == n),
            Check::new("the returned gauge reaches the result", apply_gauge(c, &g)? == n),
            Check::new(
                "triangle holonomy is gauge invariant",
                connection_holonomy(c, &tri)? == connection_holonomy(&n, &tri)?,
            ),
        ];
        let result = json!({
            "connection": ConnectionDoc::from_connection(None, &n),
            "gauge": blocks_value(g.blocks()),
        });
        return Ok((result, checks));
    }
    let (_, d) = mhs_and_delta("connect", s)?;
    let c = connection_from_delta(&d)?;
    let checks = vec![
        Check::new("result is in the Fock-Schwinger gauge", c.is_fock_schwinger()),
        Check::new("pullback to both axes vanishes", axes_trivial(&c)),
        Check::new("flat exactly when delta = 1", is_flat(&c) == d.is_split()),
    ];
    Ok((json!({ "connection": ConnectionDoc::from_connection(None, &c) }), checks))
}

fn holonomy(s: &Structure, opts: &Options) -> Outcome {
    let (c, d) = match s {
        Structure::Connection(c) => (c.clone(), None),
        other => {
            let (_, d) = mhs_and_delta("holonomy", other)?;
            (connection_from_delta(&d)?, Some(d))
        }
    };
    if let Some(path) = &opts.path {
        let h = connection_holonomy(&c, path)?;
        let back = connection_holonomy(&c, &path.reversed())?;
        let checks = vec![Check::new("reversed path gives the inverse", (&h * &back).is_identity())];
        let result = json!({ "path": PathDoc::from_path(None, path).points, "holonomy": h });
        return Ok((result, checks));
    }
    let t = triangle_delta(&c)?;
    let mut checks = vec![Check::new("pullback to both axes vanishes", axes_trivial(&c))];
    if let Some(d) = &d {
        checks.push(Check::new("triangle holonomy equals delta", &t == d));
    }
    Ok((json!({ "delta": t.delta(), "labels": t.labels() }), checks))
}

fn roundtrip(s: &Structure) -> Outcome {
    let (v, d) = mhs_and_delta("roundtrip", s)?;
    let h = v.validate()?;
    let c = connection_from_delta(&d)?;
    let t = triangle_delta(&c)?;
    let back = delta_to_mhs(&t)?;
    let hb = back.validate()?;
    let d_back = delta_operator(&back)?;
    let checks = vec![
        Check::new("connection is in the Fock-Schwinger gauge", c.is_fock_schwinger()),
        Check::new("triangle holonomy equals delta", t == d),
        Check::new(
            "log holonomy components equal log delta components",
            log_holonomy_components(&c)? == log_delta_components(&d),
        ),
        Check::new("reconstructed structure has the same Hodge numbers", hb == h),
        Check::new("delta of the reconstructed structure equals delta", d_back == d),
        Check::new("flat exactly when delta = 1", is_flat(&c) == d.is_split()),
    ];
    let result = json!({
        "delta": d.delta(),
        "connection": ConnectionDoc::from_connection(None, &c),
        "holonomy": t.delta(),
        "reconstructed": MhsDoc::from_mhs(None, &back),
    });
    Ok((result, checks))
}

/// Points of the lines λ_T checked when none are given.
pub fn default_lines() -> Vec<[Scalar; 2]> {
    [("1", "0"), ("0", "1"), ("1", "1"), ("1", "-1"), ("2", "3"), ("1", "i"), ("-1/2", "2-i")]
        .iter()
        .map(|(a, b)| [a.parse().unwrap(), b.parse().unwrap()])
        .collect()
}

fn rees(s: &Structure, opts: &Options) -> Outcome {
    let v = match s {
        Structure::Complex(v) => v.clone(),
        other => mhs_and_delta("rees", other)?.0,
    };
    let w_type = rees_w_line_type(&v)?;
    let w_transition = w_line_transition(&v)?;
    let mut checks = vec![Check::new("splitting type on P1_W is zero", w_type.iter().all(|&a| a == 0))];
    let mut result = json!({
        "w_line": { "transition": laurent_entries(w_transition.matrix()), "splitting_type": w_type },
    });
    match v.validate() {
        Ok(_) => {
            let d = delta_operator(&v)?;
            let lines = if opts.lines.is_empty() { default_lines() } else { opts.lines.clone() };
            let types = line_types(&d, &lines)?;
            for lt in &types {
                checks.push(Check::new(
                    format!("splitting type on the line through ({}, {}) is zero", lt.point[0], lt.point[1]),
                    lt.splitting_type.iter().all(|&a| a == 0),
                ));
            }
            result["patching"] = to_value(&laurent_entries(&rees_patching(&d)));
            result["lines"] = to_value(&types);
        }
        Err(e) => checks.push(Check::new(format!("opposedness ({e})"), false)),
    }
    Ok((result, checks))
}

fn ext(s: &Structure) -> Outcome {
    if let Structure::Real(v) = s {
        let vc = v.realize()?;
        let real = real_absolute_cohomology(v)?;
        let cx = absolute_cohomology(&vc)?;
        let chi = euler_characteristic(&vc)?;
        let checks = vec![
            Check::new(
                "real dimensions match the complexification",
                (real.ext0, real.ext1) == (cx.ext0, cx.ext1),
            ),
            Check::new("Ext0 - Ext1 equals the Euler characteristic", real.ext0 as i64 - real.ext1 as i64 == chi),
        ];
        return Ok((json!({ "real": real, "complex": cx, "euler": chi }), checks));
    }
    let (v, _) = mhs_and_delta("ext", s)?;
    let e = absolute_cohomology(&v)?;
    let chi = euler_characteristic(&v)?;
    let checks = vec![
        Check::new("Ext0 - Ext1 equals the Euler characteristic", e.ext0 as i64 - e.ext1 as i64 == chi),
        Check::new("Ext0 equals dim Hom(1, V)", e.ext0 == hom_from_unit(&v)?),
    ];
    Ok((json!({ "complex": e, "euler": chi }), checks))
}

fn check_truncation(n: u32) -> Result<u32> {
    if (2..=MAX_TRUNCATION).contains(&n) {
        Ok(n)
    } else {
        Err(Error::Parse(format!("truncation must lie in 2..={MAX_TRUNCATION}, got {n}")))
    }
}

fn lie(n: u32, delta: Option<&DeltaObject>) -> Outcome {
    let n = check_truncation(n)?;
    let t = lie_tables(n)?;
    let mut lead_ok = true;
    let mut integral_ok = true;
    for w in 2..=n {
        for p in 1..w {
            lead_ok &= !num_traits::Zero::is_zero(&t.leading(p, w - p));
            integral_ok &= t.leading(p, w - p) == abelian_coefficient(p, w - p)
                && abelian_coefficient(p, w - p) == beta_coefficient(p, w - p);
        }
    }
    let mut checks = vec![
        Check::new("z/alpha generator change roundtrips", t.roundtrip_holds()),
        Check::new("leading coefficients are nonzero", lead_ok),
        Check::new("leading coefficients equal the hypotenuse integral", integral_ok),
    ];
    if let Some(d) = delta {
        if d.hodge().weight_spread() as u32 <= n {
            let c = connection_from_delta(d)?;
            checks.push(Check::new(
                "z evaluated at the connection blocks gives log delta",
                t.log_components(d.dim(), c.a()) == log_delta_components(d),
            ));
        }
    }
    let tables: Vec<String> = t.to_text().lines().map(str::to_owned).collect();
    let result = json!({
        "truncation": n,
        "tables": tables,
        "coefficient_comparison": coefficient_comparison(n),
    });
    Ok((result, checks))
}

/// Pins the transport sign and triangle orientation: on K(1) the triangle
/// holonomy of the connection built from δ must be δ, and the reversed loop δ⁻¹.
pub fn orientation_selftest() -> Report {
    let outcome = (|| -> Outcome {
        let d = kummer_delta(&Scalar::from_int(1));
        let c = connection_from_delta(&d)?;
        let forward = triangle_delta(&c)?;
        let reversed = connection_holonomy(&c, &PolygonalPath::triangle().reversed())?;
        let inv = d.delta().try_inverse()?;
        let checks = vec![
            Check::new("triangle holonomy on K(1) equals delta", forward == d),
            Check::new("reversed triangle gives the inverse", reversed == inv),
            Check::new("the two orientations differ", &reversed != d.delta()),
        ];
        let result = json!({
            "triangle": PathDoc::from_path(None, &PolygonalPath::triangle()).points,
            "transport": "ds + omega s = 0",
            "delta": d.delta(),
        });
        Ok((result, checks))
    })();
    finish("orientation-selftest", None, outcome)
}

/// One command on one input document.
fn run_one(command: &str, input: &Input, opts: &Options) -> Report {
    let outcome = input.document(opts.field).and_then(|doc| {
        let s = resolve(&doc)?;
        match command {
            "validate" => validate(&s),
            "split" => split(&s),
            "connect" => connect(&s),
            "holonomy" => holonomy(&s, opts),
            "roundtrip" => roundtrip(&s),
            "rees" => rees(&s, opts),
            "ext" => ext(&s),
            "lie" => {
                let d = mhs_and_delta("lie", &s)?.1;
                let n = opts.truncation.unwrap_or(d.hodge().weight_spread().max(2) as u32);
                lie(n, Some(&d))
            }
            other => Err(Error::Parse(format!("unknown command `{other}`"))),
        }
    });
    finish(command, Some(input), outcome)
}

fn suite_commands(doc: &Document) -> &'static [&'static str] {
    match doc {
        Document::Mhs(_) | Document::RealMhs(_) | Document::Delta(_) => {
            &["validate", "split", "connect", "holonomy", "roundtrip", "rees", "ext"]
        }
        Document::Connection(_) => &["validate", "connect", "holonomy"],
        Document::Path(_) => &["validate"],
    }
}

fn suite_one(input: &Input, opts: &Options) -> Vec<Report> {
    match input.document(opts.field) {
        Ok(doc) => suite_commands(&doc).iter().map(|c| run_one(c, input, opts)).collect(),
        Err(e) => vec![finish("parse", Some(input), Err(e))],
    }
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// The suite over already-read inputs; reports keep input order whatever `jobs` is.
pub fn run_suite(inputs: &[Input], opts: &Options, jobs: usize) -> Batch {
    let per_input: Vec<Vec<Report>> = if jobs <= 1 {
        inputs.iter().map(|i| suite_one(i, opts)).collect()
    } else {
        in_pool(jobs, || inputs.par_iter().map(|i| suite_one(i, opts)).collect())
    };
    let mut reports = vec![orientation_selftest()];
    let n = opts.truncation.unwrap_or(DEFAULT_TRUNCATION);
    reports.push(finish("lie", None, lie(n, None)));
    reports.extend(per_input.into_iter().flatten());
    Batch::new("suite", reports)
}

/// `dir/*.json` in name order for directories, the path itself otherwise.
pub fn expand_inputs(paths: &[PathBuf]) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for p in paths {
        match std::fs::read_dir(p) {
            Ok(entries) => {
                let mut files: Vec<PathBuf> = entries
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|f| f.is_file() && f.extension().is_some_and(|x| x == "json"))
                    .collect();
                files.sort();
                out.extend(files);
            }
            Err(_) => out.push(p.clone()),
        }
    }
    out
}

fn parse_point(s: &str) -> Result<[Scalar; 2]> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("point `{s}` is not of the form x,y")))?;
    Ok([a.parse()?, b.parse()?])
}

/// A path document file, or inline `x,y;x,y;…`.
pub fn parse_path_arg(s: &str) -> Result<PolygonalPath> {
    let p = Path::new(s);
    if p.is_file() {
        let text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        return match Document::parse(&text)? {
            Document::Path(d) => d.to_path(),
            other => Err(Error::Parse(format!("{s} is a {} document, not a path", other.kind()))),
        };
    }
    PolygonalPath::new(s.split(';').map(parse_point).collect::<Result<_>>()?)
}

fn write_corpus(out: &Path) -> Outcome {
    let io = |e: std::io::Error| Error::Parse(format!("{}: {e}", out.display()));
    let extra = out.join("extra");
    std::fs::create_dir_all(&extra).map_err(io)?;
    let mut names = Vec::new();
    for (dir, docs) in [(out, corpus()?), (extra.as_path(), counterexamples()?)] {
        for d in docs {
            let name = format!("{}.json", d.name().unwrap_or("unnamed"));
            std::fs::write(dir.join(&name), d.to_json()).map_err(io)?;
            names.push(name);
        }
    }
    Ok((json!({ "written": names }), Vec::new()))
}

/// Runs a parsed command line and returns what to print.
pub fn run(cli: &Cli) -> Batch {
    let mut opts = Options {
        field: cli.field,
        truncation: cli.truncation,
        ..Options::default()
    };
    let read = |paths: &[PathBuf]| -> Vec<Input> { expand_inputs(paths).iter().map(|p| Input::read(p)).collect() };
    let (name, mut reports) = match &cli.command {
        // the suite always includes the orientation self-test
        Command::Suite { inputs, jobs } => return run_suite(&read(inputs), &opts, *jobs),
        Command::Fixtures { out } => ("fixtures", vec![finish("fixtures", None, write_corpus(out))]),
        Command::Lie { inputs } if inputs.is_empty() => {
            let n = cli.truncation.unwrap_or(DEFAULT_TRUNCATION);
            ("lie", vec![finish("lie", None, lie(n, None))])
        }
        cmd => {
            let (name, inputs) = match cmd {
                Command::Validate { inputs } => ("validate", inputs),
                Command::Split { inputs } => ("split", inputs),
                Command::Connect { inputs } => ("connect", inputs),
                Command::Holonomy { inputs, path } => {
                    if let Some(p) = path {
                        match parse_path_arg(p) {
                            Ok(p) => opts.path = Some(p),
                            Err(e) => return Batch::new("holonomy", vec![finish("holonomy", None, Err(e))]),
                        }
                    }
                    ("holonomy", inputs)
                }
                Command::Roundtrip { inputs } => ("roundtrip", inputs),
                Command::Rees { inputs, lines } => {
                    match lines.iter().map(|l| parse_point(l)).collect::<Result<Vec<_>>>() {
                        Ok(pts) => opts.lines = pts,
                        Err(e) => return Batch::new("rees", vec![finish("rees", None, Err(e))]),
                    }
                    ("rees", inputs)
                }
                Command::Ext { inputs } => ("ext", inputs),
                Command::Lie { inputs } => ("lie", inputs),
                Command::Fixtures { .. } | Command::Suite { .. } => unreachable!("handled above"),
            };
            if inputs.is_empty() {
                let e = Error::Parse(format!("`{name}` needs at least one input document"));
                return Batch::new(name, vec![finish(name, None, Err(e))]);
            }
            let reports = read(inputs).iter().map(|i| run_one(name, i, &opts)).collect();
            (name, reports)
        }
    };
    if cli.orientation_selftest {
        reports.insert(0, orientation_selftest());
    }
    Batch::new(name, reports)
}

/// Runs one command on in-memory document text; used by the C interface.
pub fn run_text(command: &str, text: &str, opts: &Options) -> Report {
    run_one(command, &Input::from_text("input", text), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Matrix;
    use crate::doc::DeltaDoc;

    fn doc_text(d: &Document) -> Input {
        Input::from_text(d.name().unwrap_or("doc"), &d.to_json())
    }

    #[test]
    fn corpus_passes_every_command() {
        let inputs: Vec<Input> = corpus().unwrap().iter().map(doc_text).collect();
        let b = run_suite(&inputs, &Options::default(), 1);
        for r in &b.reports {
            assert_eq!(r.status, Status::Pass, "{} on {:?}: {:?}", r.command, r.input, r.witness);
        }
    }

    #[test]
    fn counterexamples_are_flagged() {
        let docs = counterexamples().unwrap();
        let v = run_one("validate", &doc_text(&docs[0]), &Options::default());
        assert_eq!(v.status, Status::Violation);
        let r = run_one("rees", &doc_text(&docs[0]), &Options::default());
        assert_eq!(r.status, Status::Violation);
        assert_ne!(r.result["w_line"]["splitting_type"], json!([0, 0]));
        let bad = run_one("validate", &Input::from_text("x", "{\"kind\":\"mhs\"}"), &Options::default());
        assert_eq!(bad.status, Status::Malformed);
    }

    #[test]
    fn kummer_roundtrip_echoes_delta() {
        let d = Document::Mhs(MhsDoc::from_mhs(None, &crate::fixtures::kummer_mhs(&"2+i".parse().unwrap())));
        let r = run_one("roundtrip", &doc_text(&d), &Options::default());
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.result["delta"][0][1], json!("-2/1-1/1*i"));
    }

    #[test]
    fn lie_table_mentions_the_first_entries() {
        let (v, checks) = lie(5, None).unwrap();
        assert!(checks.iter().all(|c| c.pass));
        let lines: Vec<String> = serde_json::from_value(v["tables"].clone()).unwrap();
        assert!(lines.iter().any(|l| l.starts_with("z[1,1] = ")));
        assert!(lines.iter().any(|l| l.starts_with("z[2,1] = ")));
        assert!(lie(13, None).unwrap_err().is_input_error());
    }

    #[test]
    fn delta_document_over_the_wrong_field_is_malformed() {
        let d = Document::Delta(DeltaDoc::from_delta(None, &kummer_delta(&Scalar::i())));
        let opts = Options {
            field: Some(Field::Q),
            ..Options::default()
        };
        assert_eq!(run_one("split", &doc_text(&d), &opts).status, Status::Malformed);
    }

    #[test]
    fn explicit_path_holonomy() {
        let d = Document::Delta(DeltaDoc::from_delta(None, &kummer_delta(&Scalar::from_int(1))));
        let opts = Options {
            path: Some(parse_path_arg("0,0;-1,0;-1,-1;0,-1;0,0").unwrap()),
            ..Options::default()
        };
        let r = run_one("holonomy", &doc_text(&d), &opts);
        assert_eq!(r.status, Status::Pass, "{:?}", r.witness);
        let _: Matrix = serde_json::from_value(r.result["holonomy"].clone()).unwrap();
    }
}

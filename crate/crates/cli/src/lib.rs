//! Command implementations behind the `tsgray` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use tsgray::big::{build_kbig, export_dot};
use tsgray::design::{check_params, ColoringMode, Triple};
use tsgray::honeycomb::step1a_graph;
use tsgray::infinity::UnionDigraph;
use tsgray::verify::{verify_design, verify_gray_code, VerificationReport};
use tsgray::{
    assemble, component_census, ArcColoring, Block, BlockOrigin, Color, Error, GrayCode, Point,
    TripleSystem,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tsgray",
    version,
    about = "Triple systems with cyclic 2-intersecting Gray codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build TS(2n+2, lambda) and a Gray code of its blocks.
    Generate(GenerateArgs),
    /// Check a design file: pair coverage, simplicity and the Gray code.
    Verify { file: PathBuf },
    /// Print a graph of a design file in DOT format.
    Dot {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DotKind::Big2)]
        kind: DotKind,
    },
    /// Generate and verify every cell of an (n, lambda) grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(short = 'n')]
    pub n: u32,
    #[arg(long)]
    pub lambda: u32,
    /// `default` or `seed=<u64>`.
    #[arg(long, default_value = "default")]
    pub coloring: String,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "5,7,11,13,17,19")]
    pub n_list: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10,12,14,16")]
    pub lambda_list: Vec<String>,
    /// Seeded colorings per cell, on top of the default one.
    #[arg(long, default_value_t = 0)]
    pub colorings: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotKind {
    #[value(name = "2big")]
    Big2,
    Honeycomb,
    Digraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringSpec {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginRecord {
    pub step: String,
    pub g: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<u8>,
}

impl OriginRecord {
    fn from_origin(o: &BlockOrigin) -> OriginRecord {
        let mut r = OriginRecord {
            step: o.step().to_string(),
            g: o.class(),
            base: None,
            mask: None,
            arc: None,
            color: None,
            variant: None,
        };
        match *o {
            BlockOrigin::Step1a { base, .. } => r.base = Some(base),
            BlockOrigin::Step1b { base, mask, .. } => {
                r.base = Some(base);
                r.mask = Some(format!("{mask:03b}"));
            }
            BlockOrigin::Step1c { arc, variant, .. } => {
                r.arc = Some([arc.tail, arc.head]);
                r.variant = Some(variant);
            }
            BlockOrigin::Step2 {
                arc,
                color,
                variant,
                ..
            } => {
                r.arc = Some([arc.tail, arc.head]);
                r.color = Some(match color {
                    Color::Red => "red".into(),
                    Color::Blue => "blue".into(),
                });
                r.variant = Some(variant);
            }
            BlockOrigin::Step3 { variant, .. } => r.variant = Some(variant),
        }
        r
    }
}

/// On-disk form of a design and its Gray code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub schema_version: u32,
    pub n: u32,
    pub v: u32,
    pub lambda: u32,
    pub coloring: ColoringSpec,
    pub points: String,
    pub blocks: Vec<[String; 3]>,
    #[serde(default)]
    pub origins: Vec<OriginRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gray_code: Option<Vec<usize>>,
}

const POINTS_NOTE: &str = "inf0, inf1, or <residue>.<bit> with residue in 0..n and bit in {0,1}";

impl DesignFile {
    pub fn from_code(code: &GrayCode, coloring: &ArcColoring) -> DesignFile {
        let ts = &code.design;
        let coloring = match coloring.mode() {
            ColoringMode::Default => ColoringSpec {
                mode: "default".into(),
                seed: None,
            },
            ColoringMode::Seeded(s) => ColoringSpec {
                mode: "seeded".into(),
                seed: Some(*s),
            },
        };
        DesignFile {
            schema_version: SCHEMA_VERSION,
            n: ts.n,
            v: ts.v,
            lambda: ts.lambda,
            coloring,
            points: POINTS_NOTE.into(),
            blocks: ts
                .blocks
                .iter()
                .map(|b| b.points.map(|p| p.to_string()))
                .collect(),
            origins: ts
                .blocks
                .iter()
                .map(|b| OriginRecord::from_origin(&b.origin))
                .collect(),
            gray_code: Some(code.order.clone()),
        }
    }

    /// Blocks as written, without reordering their points.
    pub fn raw_blocks(&self) -> Result<Vec<Triple>, Error> {
        self.blocks
            .iter()
            .map(|b| {
                let pts: Vec<Point> = b.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
                Ok([pts[0], pts[1], pts[2]])
            })
            .collect()
    }

    pub fn coloring(&self) -> Result<ArcColoring, Error> {
        let t = (self.lambda / 2).max(1);
        match (self.coloring.mode.as_str(), self.coloring.seed) {
            ("default", _) => ArcColoring::default_rule(self.n, t),
            ("seeded", Some(s)) => ArcColoring::seeded(self.n, t, s),
            (m, _) => Err(Error::InvalidParams(format!("unknown coloring mode {m:?}"))),
        }
    }
}

pub fn parse_coloring(spec: &str, n: u32, lambda: u32) -> Result<ArcColoring, Error> {
    let t = lambda / 2;
    if spec == "default" {
        return ArcColoring::default_rule(n, t);
    }
    if let Some(s) = spec.strip_prefix("seed=") {
        let seed = s
            .parse::<u64>()
            .map_err(|_| Error::InvalidParams(format!("bad seed {s:?}")))?;
        return ArcColoring::seeded(n, t, seed);
    }
    Err(Error::InvalidParams(format!(
        "coloring must be `default` or `seed=<u64>`, got {spec:?}"
    )))
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) => EXIT_USAGE,
        _ => EXIT_CONSTRUCTION,
    }
}

/// Build the design and Gray code for one parameter set.
pub fn build(n: u32, lambda: u32, coloring: &str) -> Result<(GrayCode, ArcColoring), Error> {
    check_params(n, lambda)?;
    let c = parse_coloring(coloring, n, lambda)?;
    let code = assemble(n, lambda, &c)?;
    Ok((code, c))
}

pub fn render_json(file: &DesignFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("design file serializes");
    s.push('\n');
    s
}

pub fn render_text(code: &GrayCode) -> String {
    let ts = &code.design;
    let census = component_census(code);
    let mut s = String::new();
    writeln!(s, "TS({}, {}) with n = {}", ts.v, ts.lambda, ts.n).unwrap();
    writeln!(
        s,
        "{} blocks: 1a+1b {}, 1c {}, 2 {}, 3 {}",
        census.total(),
        census.step1ab,
        census.step1c,
        census.step2,
        census.step3
    )
    .unwrap();
    for (k, b) in code.blocks().enumerate() {
        writeln!(
            s,
            "{k:>6}  {b}  [{}, g={}]",
            b.origin.step(),
            b.origin.class()
        )
        .unwrap();
    }
    s
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (code, coloring) = match build(args.n, args.lambda, &args.coloring) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_for(&e);
        }
    };
    let text = match args.format {
        Format::Json => render_json(&DesignFile::from_code(&code, &coloring)),
        Format::Text => render_text(&code),
    };
    let written = match &args.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    EXIT_OK
}

/// Read a design file; a message describes why it cannot be used.
pub fn load(path: &std::path::Path) -> Result<DesignFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: DesignFile =
        serde_json::from_str(&text).map_err(|e| format!("malformed design file: {e}"))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "unsupported schema_version {}",
            file.schema_version
        ));
    }
    Ok(file)
}

/// Run every check on a parsed file.
pub fn verify_file(file: &DesignFile) -> Result<VerificationReport, String> {
    let raw = file.raw_blocks().map_err(|e| e.to_string())?;
    let blocks: Vec<Block> = raw
        .iter()
        .map(|pts| Block {
            points: *pts,
            // origins are informational and not trusted
            origin: BlockOrigin::Step3 { g: 0, variant: 0 },
        })
        .collect();
    let ts = TripleSystem {
        n: file.n,
        v: file.v,
        lambda: file.lambda,
        blocks,
    };
    let mut report = verify_design(&ts);
    let canonical = raw.iter().all(|b| b[0] < b[1] && b[1] < b[2]);
    let mut extra = VerificationReport::default();
    extra.checks.push(tsgray::verify::Check {
        name: "canonical blocks".into(),
        passed: canonical,
        detail: if canonical {
            "points listed in increasing order".into()
        } else {
            "some block lists its points out of order".into()
        },
    });
    report = report.merge(extra);
    match &file.gray_code {
        Some(code) => report = report.merge(verify_gray_code(&ts, code)),
        None => {
            let mut r = VerificationReport::default();
            r.checks.push(tsgray::verify::Check {
                name: "gray code present".into(),
                passed: false,
                detail: "file has no gray_code".into(),
            });
            report = report.merge(r);
        }
    }
    Ok(report)
}

pub fn cmd_verify(path: &std::path::Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let file = match load(path) {
        Ok(f) => f,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    match verify_file(&file) {
        Ok(report) => {
            let _ = writeln!(out, "{report}");
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

pub fn dot_for(file: &DesignFile, kind: DotKind) -> Result<String, Error> {
    match kind {
        DotKind::Big2 => {
            let g = build_kbig(&file.raw_blocks()?, 2)?;
            Ok(export_dot(&g))
        }
        DotKind::Honeycomb => {
            let classes: Vec<u32> = (0..file.lambda / 2).collect();
            Ok(step1a_graph(file.n, &classes)?.to_dot())
        }
        DotKind::Digraph => {
            let t = file.lambda / 2;
            let c = file.coloring()?;
            Ok(UnionDigraph::new(file.n, t)?.to_dot(Some(&c)))
        }
    }
}

pub fn cmd_dot(
    path: &std::path::Path,
    kind: DotKind,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let file = match load(path) {
        Ok(f) => f,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    match dot_for(&file, kind) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}

fn parse_list(items: &[String], what: &str) -> Result<Vec<u32>, String> {
    items
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>()
                .map_err(|_| format!("bad {what} value {s:?}"))
        })
        .collect()
}

/// One line of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub lambda: u32,
    pub coloring: String,
    pub blocks: usize,
    pub passed: bool,
    pub seconds: f64,
    pub note: String,
}

/// Generate, serialize, re-read and verify one cell.
pub fn run_cell(n: u32, lambda: u32, coloring: &str) -> SweepRow {
    let t0 = Instant::now();
    let (passed, blocks, note) = match build(n, lambda, coloring) {
        Err(e) => (false, 0, e.to_string()),
        Ok((code, c)) => {
            let json = render_json(&DesignFile::from_code(&code, &c));
            let file: DesignFile = serde_json::from_str(&json).expect("round trip");
            match verify_file(&file) {
                Ok(r) if r.passed() => (true, code.len(), String::new()),
                Ok(r) => (false, code.len(), r.to_string()),
                Err(m) => (false, code.len(), m),
            }
        }
    };
    SweepRow {
        n,
        lambda,
        coloring: coloring.to_string(),
        blocks,
        passed,
        seconds: t0.elapsed().as_secs_f64(),
        note,
    }
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (ns, ls) = match (
        parse_list(&args.n_list, "n"),
        parse_list(&args.lambda_list, "lambda"),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(m), _) | (_, Err(m)) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_USAGE;
        }
    };
    if ns.is_empty() || ls.is_empty() {
        let _ = writeln!(err, "error: empty n or lambda list");
        return EXIT_USAGE;
    }
    let _ = writeln!(
        out,
        "{:>4} {:>6} {:<12} {:>7} {:>6} {:>9}",
        "n", "lambda", "coloring", "blocks", "result", "seconds"
    );
    let mut all = true;
    for &n in &ns {
        for &lambda in &ls {
            if lambda > 2 * n {
                continue;
            }
            let mut specs = vec!["default".to_string()];
            specs.extend((0..args.colorings).map(|s| format!("seed={s}")));
            for spec in specs {
                let row = run_cell(n, lambda, &spec);
                all &= row.passed;
                let _ = writeln!(
                    out,
                    "{:>4} {:>6} {:<12} {:>7} {:>6} {:>9.3}{}",
                    row.n,
                    row.lambda,
                    row.coloring,
                    row.blocks,
                    if row.passed { "pass" } else { "FAIL" },
                    row.seconds,
                    if row.note.is_empty() {
                        String::new()
                    } else {
                        format!("  {}", row.note.replace('\n', "; "))
                    }
                );
            }
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a, out, err),
        Command::Verify { file } => cmd_verify(&file, out, err),
        Command::Dot { file, kind } => cmd_dot(&file, kind, out, err),
        Command::Sweep(a) => cmd_sweep(&a, out, err),
    }
}

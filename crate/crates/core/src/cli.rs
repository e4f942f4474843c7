//! Command-line driver. Every command renders its output as text so runs are byte-reproducible.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::coloring::{stoichiometry, ColoringError};
use crate::config::{ColoringOutcome, ConfigError, ExportFormat, ExportSpec, JobConfig, Session};
use crate::crystal::{self, CrystalError, CrystalModel, Preset, Region};
use crate::isometry::{check_presentation, dihedral_angle_check, parse_word_list, Realization, WordParseError};
use crate::orbits::{decompose, stabilizer};
use crate::quotient::{index, QuotientError, TorusGroup, TorusSubgroup, DEFAULT_CERTIFICATE_RADIUS};

#[derive(Debug, Parser)]
#[command(name = "cubicolor", version, about = "Exact vertex-colorings of the cubic honeycomb")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Torus modulus N (even, at least 2); overrides the config.
    #[arg(long, global = true)]
    pub modulus: Option<u32>,
    /// Word radius for translation certificates.
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    /// Recompute indices at 2N and require agreement.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub cross_check: Option<bool>,
    /// Directory for written files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Coxeter presentation and the dihedral angles of the generators.
    Check {
        /// Use a deliberately wrong P, for testing failure reporting.
        #[arg(long, hide = true)]
        perturb: bool,
    },
    /// Order, index and translation certificate of a subgroup.
    Subgroup {
        /// Generator words, e.g. `Q R S PQP`.
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Vertex orbits and stabilizer orders of a subgroup.
    Orbits {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Build every coloring of a config and verify it.
    Color {
        #[arg(long)]
        config: PathBuf,
    },
    /// Export crystal models from a config or a preset.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// rock-salt, NbO, ReO3 or perovskite.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum, default_value = "xyz")]
    pub format: FormatArg,
    /// Box size in unit cells, e.g. `2,2,2`.
    #[arg(long, value_parser = triple::<u32>, default_value = "2,2,2")]
    pub region: [u32; 3],
    /// Lattice vertex at the low corner of the box; use `--origin=-2,0,0` for negative values.
    #[arg(long, value_parser = triple::<i64>, default_value = "0,0,0")]
    pub origin: [i64; 3],
    /// Draw a cube per site in `off` output.
    #[arg(long)]
    pub cubes: bool,
    /// Output file inside the output directory; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn triple<T: std::str::FromStr>(s: &str) -> Result<[T; 3], String> {
    let parts: Vec<T> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("invalid number {p:?}")))
        .collect::<Result<_, _>>()?;
    <[T; 3]>::try_from(parts).map_err(|_| "expected three comma-separated numbers".to_string())
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum FormatArg {
    Xyz,
    Off,
    Report,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Xyz => ExportFormat::Xyz,
            FormatArg::Off => ExportFormat::Off,
            FormatArg::Report => ExportFormat::Report,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed")]
    Verification,
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Verification => 4,
            CliError::Io { .. } => 5,
        }
    }
}

impl From<WordParseError> for CliError {
    fn from(e: WordParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        let advice = match e {
            QuotientError::CertificateNotFound { .. } => {
                "; the subgroup may have infinite index, or try a larger --radius"
            }
            _ => "",
        };
        CliError::Precondition(format!("{e}{advice}"))
    }
}

impl From<ColoringError> for CliError {
    fn from(e: ColoringError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Json(_)
            | ConfigError::Word { .. }
            | ConfigError::UnknownSubgroup(_)
            | ConfigError::UnknownColoring(_) => CliError::Parse(e.to_string()),
            ConfigError::Quotient { .. }
            | ConfigError::Modulus(_)
            | ConfigError::Coloring { .. }
            | ConfigError::Anchor { .. } => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<CrystalError> for CliError {
    fn from(e: CrystalError) -> Self {
        match e {
            CrystalError::Config(c) => c.into(),
            CrystalError::UnknownPreset(_) | CrystalError::Xyz { .. } | CrystalError::InvalidSymbol(_) => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

/// Text written to standard output, plus whether every verification passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub verified: bool,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Check { perturb } => Ok(cmd_check(*perturb)),
        Command::Subgroup { words } => cmd_subgroup(
            &words.join(" "),
            g.modulus.unwrap_or(2),
            g.radius.unwrap_or(DEFAULT_CERTIFICATE_RADIUS),
            g.cross_check.unwrap_or(true),
        ),
        Command::Orbits { words } => cmd_orbits(
            &words.join(" "),
            g.modulus.unwrap_or(2),
            g.radius.unwrap_or(DEFAULT_CERTIFICATE_RADIUS),
        ),
        Command::Color { config } => {
            let session = load_session(config, g)?;
            cmd_color(&session, &g.out_dir)
        }
        Command::Export(args) => cmd_export(args, g),
    }
}

/// Runs and maps the result to an exit status, printing to the standard streams.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.verified {
                0
            } else {
                eprintln!("{}", CliError::Verification);
                CliError::Verification.exit_code()
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(dir: &Path, name: &Path, text: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let io = |source| CliError::Io {
        path: path.clone(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(&path, text).map_err(io)?;
    Ok(path)
}

fn load_session(path: &Path, g: &GlobalArgs) -> Result<Session, CliError> {
    let mut config = JobConfig::from_json(&read(path)?)?;
    if let Some(n) = g.modulus {
        config.modulus = n;
    }
    if let Some(r) = g.radius {
        config.radius = r;
    }
    if let Some(c) = g.cross_check {
        config.cross_check = c;
    }
    Ok(Session::new(config)?)
}

pub fn cmd_check(perturb: bool) -> Output {
    let realization = if perturb {
        Realization::perturbed()
    } else {
        Realization::standard()
    };
    let mut out = String::new();
    let presentation = check_presentation(&realization);
    let _ = writeln!(out, "presentation");
    for r in &presentation.relators {
        let order = r.base_order.map_or("infinite".to_string(), |o| o.to_string());
        let _ = writeln!(
            out,
            "  {:<8} {}  base order {order}",
            r.relator,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    let angles = dihedral_angle_check(&realization);
    let _ = writeln!(out, "dihedral angles");
    for a in &angles.angles {
        let _ = writeln!(out, "  {}{}  {}", a.mirrors.0, a.mirrors.1, a.angle);
    }
    let _ = writeln!(
        out,
        "  expected pi/4 pi/3 pi/4 pi/2 pi/2 pi/2  {}",
        if angles.matches_expected { "PASS" } else { "FAIL" }
    );
    Output {
        stdout: out,
        verified: presentation.all_passed() && angles.matches_expected,
    }
}

fn certified(words: &str, modulus: u32, radius: usize) -> Result<(TorusGroup, TorusSubgroup), CliError> {
    let words = parse_word_list(words)?;
    let group = TorusGroup::build(modulus)?;
    let sub = group.subgroup(&words).certify_translations(radius)?;
    Ok((group, sub))
}

pub fn cmd_subgroup(words: &str, modulus: u32, radius: usize, cross_check: bool) -> Result<Output, CliError> {
    let (group, sub) = certified(words, modulus, radius)?;
    let mut out = String::new();
    let _ = writeln!(out, "subgroup <{}>", sub.describe());
    let _ = writeln!(out, "modulus {modulus}");
    let _ = writeln!(out, "order {} of {}", sub.order(), group.order());
    let _ = writeln!(out, "index {}", index(&group, &sub));
    let cert = sub.certificate().expect("certified");
    let _ = writeln!(out, "certificate radius {} verified {}", cert.radius, cert.verify());
    for (w, t) in cert.witnesses.iter().zip(cert.targets()) {
        let _ = writeln!(out, "  translation {t:?} = {w}");
    }
    let mut verified = cert.verify();
    if cross_check {
        let (wide_group, wide) = certified(words, modulus * 2, radius)?;
        let wide_index = index(&wide_group, &wide).value;
        let agree = wide_index == index(&group, &sub).value;
        let _ = writeln!(
            out,
            "index at modulus {} is {wide_index}: {}",
            modulus * 2,
            if agree { "agrees" } else { "DISAGREES" }
        );
        verified &= agree;
    }
    Ok(Output { stdout: out, verified })
}

pub fn cmd_orbits(words: &str, modulus: u32, radius: usize) -> Result<Output, CliError> {
    let (_, sub) = certified(words, modulus, radius)?;
    let d = decompose(&sub);
    let mut out = String::new();
    let _ = writeln!(out, "subgroup <{}> order {}", sub.describe(), sub.order());
    let _ = writeln!(out, "{} orbits on {} vertices", d.len(), (modulus as usize).pow(3));
    for (i, orbit) in d.orbits().iter().enumerate() {
        let stab = stabilizer(&sub, orbit[0]);
        let _ = writeln!(
            out,
            "orbit {i} representative {} size {} stabilizer order {}",
            orbit[0],
            orbit.len(),
            stab.order()
        );
        let members: Vec<String> = orbit.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  {}", members.join(" "));
    }
    Ok(Output {
        stdout: out,
        verified: true,
    })
}

fn outcome_summary(o: &ColoringOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "coloring {}", o.name);
    let _ = writeln!(out, "H = <{}>, [G : H] = {}", o.group_words.join(", "), o.subgroup_index);
    let sizes: Vec<String> = o.orbit_sizes.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "orbit sizes {}", sizes.join(" "));
    let _ = writeln!(out, "colors {}", o.coloring.num_colors());
    let _ = writeln!(out, "provenance {}", o.coloring.provenance());
    let _ = writeln!(
        out,
        "color group order {} of {} ({})",
        o.color_group.order(),
        o.group_order,
        if o.color_group.is_perfect() { "perfect" } else { "not perfect" }
    );
    let _ = writeln!(out, "stoichiometry {}", o.stoichiometry);
    let _ = writeln!(out, "all colors {}", stoichiometry(&o.coloring, true));
    for t in &o.theorem {
        let _ = write!(out, "{t}");
    }
    out
}

pub fn cmd_color(session: &Session, out_dir: &Path) -> Result<Output, CliError> {
    let mut out = String::new();
    let mut verified = true;
    if session.config.cross_check {
        for c in session.cross_check()? {
            let _ = writeln!(
                out,
                "subgroup {} index {} at N={}, {} at N={}: {}",
                c.name,
                c.index,
                session.config.modulus,
                c.index_doubled,
                session.config.modulus * 2,
                if c.agrees() { "agrees" } else { "DISAGREES" }
            );
            verified &= c.agrees();
        }
    }
    for outcome in session.run_all()? {
        let summary = outcome_summary(&outcome);
        write(out_dir, Path::new(&format!("{}.coloring", outcome.name)), &outcome.coloring.to_text())?;
        write(out_dir, Path::new(&format!("{}.theorem.txt", outcome.name)), &summary)?;
        verified &= outcome.theorem_holds();
        out.push_str(&summary);
    }
    Ok(Output { stdout: out, verified })
}

fn region_of(spec: &ExportSpec) -> Region {
    Region::at(spec.origin, spec.region)
}

fn export_spec(session: &Session, spec: &ExportSpec) -> Result<String, CliError> {
    let model = match (&spec.preset, &spec.coloring) {
        (Some(p), _) => crystal::preset_at(p.parse::<Preset>()?, session.config.modulus)?,
        (None, Some(name)) => CrystalModel::new(session.run_coloring(session.coloring_spec(name)?)?)?,
        (None, None) => return Err(CliError::Parse("export needs a coloring or a preset".into())),
    };
    Ok(crystal::export(&model, spec.format, region_of(spec), spec.cubes))
}

pub fn cmd_export(args: &ExportArgs, g: &GlobalArgs) -> Result<Output, CliError> {
    let mut out = String::new();
    if let Some(path) = &args.config {
        let session = load_session(path, g)?;
        for spec in &session.config.exports {
            let text = export_spec(&session, spec)?;
            let written = write(&g.out_dir, Path::new(&spec.path), &text)?;
            let _ = writeln!(out, "wrote {}", written.display());
        }
        return Ok(Output {
            stdout: out,
            verified: true,
        });
    }
    let name = args.preset.as_deref().expect("clap requires config or preset");
    let model = crystal::preset_at(name.parse()?, g.modulus.unwrap_or(2))?;
    let region = Region::at(args.origin, args.region);
    let text = crystal::export(&model, args.format.into(), region, args.cubes);
    match &args.out {
        Some(file) => {
            let written = write(&g.out_dir, file, &text)?;
            let _ = writeln!(out, "wrote {}", written.display());
        }
        None => out = text,
    }
    Ok(Output {
        stdout: out,
        verified: true,
    })
}

//! Chemical interpretation of colorings: presets, formulas, substitution and export.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::coloring::{gcd, ColorId};
use crate::config::{ColoringOutcome, ConfigError, ExportFormat, Session};
use crate::isometry::Vertex;
use crate::orbits::TorusVertex;

#[derive(Debug, Error)]
pub enum CrystalError {
    #[error("unknown preset {0:?} (expected rock-salt, NbO, ReO3 or perovskite)")]
    UnknownPreset(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("config has no coloring")]
    NoColoring,
    #[error("color {0:?} has no element")]
    MissingElement(String),
    #[error("color {0:?} is not an atom color")]
    ExtraElement(String),
    #[error("color {0:?} is assigned twice")]
    RepeatedElement(String),
    #[error("invalid element symbol {0:?}")]
    InvalidSymbol(String),
    #[error("xyz line {line}: {reason}")]
    Xyz { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Preset {
    RockSalt,
    NbO,
    ReO3,
    Perovskite,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::RockSalt, Preset::NbO, Preset::ReO3, Preset::Perovskite];

    pub fn name(self) -> &'static str {
        match self {
            Preset::RockSalt => "rock-salt",
            Preset::NbO => "NbO",
            Preset::ReO3 => "ReO3",
            Preset::Perovskite => "perovskite",
        }
    }

    /// The bundled JSON config that builds this preset.
    pub fn config_json(self) -> &'static str {
        match self {
            Preset::RockSalt => include_str!("../presets/rock-salt.json"),
            Preset::NbO => include_str!("../presets/NbO.json"),
            Preset::ReO3 => include_str!("../presets/ReO3.json"),
            Preset::Perovskite => include_str!("../presets/perovskite.json"),
        }
    }

    pub fn session(self, modulus: u32) -> Result<Session, CrystalError> {
        let mut config = crate::config::JobConfig::from_json(self.config_json())?;
        config.modulus = modulus;
        Ok(Session::new(config)?)
    }
}

impl FromStr for Preset {
    type Err = CrystalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CrystalError::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A reduced chemical formula; elements keep their declared order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub terms: Vec<(String, u64)>,
}

impl Formula {
    /// Merges repeated symbols and divides by the common factor.
    pub fn from_counts(counts: &[(String, u64)]) -> Self {
        let mut terms: Vec<(String, u64)> = Vec::new();
        for (symbol, n) in counts {
            match terms.iter_mut().find(|(s, _)| s == symbol) {
                Some(term) => term.1 += n,
                None => terms.push((symbol.clone(), *n)),
            }
        }
        terms.retain(|(_, n)| *n > 0);
        let g = terms.iter().map(|(_, n)| *n).fold(0, gcd).max(1);
        for term in &mut terms {
            term.1 /= g;
        }
        Self { terms }
    }

    pub fn subscripts(&self) -> Vec<u64> {
        self.terms.iter().map(|(_, n)| *n).collect()
    }

    pub fn ratio_text(&self) -> String {
        self.subscripts().iter().map(u64::to_string).collect::<Vec<_>>().join(":")
    }

    /// With Unicode subscript digits, e.g. `CaTiO₃`.
    pub fn unicode(&self) -> String {
        const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
        let mut out = String::new();
        for (symbol, n) in &self.terms {
            out.push_str(symbol);
            if *n != 1 {
                out.extend(n.to_string().chars().map(|d| DIGITS[d.to_digit(10).unwrap() as usize]));
            }
        }
        out
    }
}

/// ASCII form, e.g. `CaTiO3`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (symbol, n) in &self.terms {
            f.write_str(symbol)?;
            if *n != 1 {
                write!(f, "{n}")?;
            }
        }
        Ok(())
    }
}

/// A coloring whose non-background colors stand for atoms.
#[derive(Debug, Clone)]
pub struct CrystalModel {
    pub outcome: ColoringOutcome,
    /// `(color label, element symbol)` in formula order; background colors are vacancies.
    pub elements: Vec<(String, String)>,
    pub formula: Formula,
    pub family: String,
}

fn valid_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_lowercase())
}

impl CrystalModel {
    pub fn new(outcome: ColoringOutcome) -> Result<Self, CrystalError> {
        let elements = outcome.elements.clone();
        let family = outcome.family.clone();
        Self::with_elements(outcome, elements, family)
    }

    fn with_elements(
        mut outcome: ColoringOutcome,
        elements: Vec<(String, String)>,
        family: String,
    ) -> Result<Self, CrystalError> {
        let coloring = &outcome.coloring;
        let mut seen = BTreeMap::new();
        for (label, symbol) in &elements {
            if !valid_symbol(symbol) {
                return Err(CrystalError::InvalidSymbol(symbol.clone()));
            }
            match coloring.color_by_label(label) {
                Some(id) if !coloring.color(id).background => {}
                _ => return Err(CrystalError::ExtraElement(label.clone())),
            }
            if seen.insert(label.clone(), ()).is_some() {
                return Err(CrystalError::RepeatedElement(label.clone()));
            }
        }
        if let Some(missing) = coloring
            .colors()
            .iter()
            .find(|c| !c.background && !seen.contains_key(&c.label))
        {
            return Err(CrystalError::MissingElement(missing.label.clone()));
        }
        outcome.coloring = outcome
            .coloring
            .with_elements(&elements)
            .map_err(|e| CrystalError::Config(ConfigError::Coloring {
                name: outcome.name.clone(),
                source: e,
            }))?;
        outcome.elements = elements.clone();
        let counts: Vec<(String, u64)> = elements
            .iter()
            .map(|(label, symbol)| {
                let id = outcome.coloring.color_by_label(label).expect("checked above");
                (symbol.clone(), outcome.coloring.class(id).len() as u64)
            })
            .collect();
        Ok(Self {
            formula: Formula::from_counts(&counts),
            outcome,
            elements,
            family,
        })
    }

    /// The first coloring of a config.
    pub fn from_session(session: &Session) -> Result<Self, CrystalError> {
        let spec = session.config.colorings.first().ok_or(CrystalError::NoColoring)?;
        Self::new(session.run_coloring(spec)?)
    }

    pub fn symbol_of(&self, c: ColorId) -> Option<&str> {
        self.outcome.coloring.color(c).element.as_deref()
    }

    /// Element symbol at a lattice vertex; `None` for a vacancy.
    pub fn site(&self, v: Vertex) -> Option<&str> {
        let coloring = &self.outcome.coloring;
        self.symbol_of(coloring.color_of(TorusVertex::reduce(v, coloring.modulus())))
    }

    /// Atom counts per element over one `N³` period, in formula order.
    pub fn period_counts(&self) -> Vec<(String, usize)> {
        let mut counts: Vec<(String, usize)> = Vec::new();
        for (label, symbol) in &self.elements {
            let id = self.outcome.coloring.color_by_label(label).expect("validated");
            let n = self.outcome.coloring.class(id).len();
            match counts.iter_mut().find(|(s, _)| s == symbol) {
                Some(c) => c.1 += n,
                None => counts.push((symbol.clone(), n)),
            }
        }
        counts
    }
}

/// Same coloring with new element symbols; the keys must be exactly the atom colors.
///
/// The order of `new_elements` becomes the formula order.
pub fn substitute(model: &CrystalModel, new_elements: &[(&str, &str)]) -> Result<CrystalModel, CrystalError> {
    let elements = new_elements
        .iter()
        .map(|(l, s)| (l.to_string(), s.to_string()))
        .collect();
    CrystalModel::with_elements(model.outcome.clone(), elements, model.family.clone())
}

pub fn preset(p: Preset) -> Result<CrystalModel, CrystalError> {
    preset_at(p, 2)
}

/// A preset built on the `modulus`-torus instead of the default 2.
pub fn preset_at(p: Preset, modulus: u32) -> Result<CrystalModel, CrystalError> {
    CrystalModel::from_session(&p.session(modulus)?)
}

/// A box of lattice vertices `origin + [0, extent)` along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub origin: [i64; 3],
    pub extent: [u32; 3],
}

impl Region {
    pub fn new(extent: [u32; 3]) -> Self {
        Self { origin: [0; 3], extent }
    }

    pub fn at(origin: [i64; 3], extent: [u32; 3]) -> Self {
        Self { origin, extent }
    }

    pub fn len(&self) -> usize {
        self.extent.iter().map(|&e| e as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let [ox, oy, oz] = self.origin;
        let [ex, ey, ez] = self.extent.map(i64::from);
        (0..ex).flat_map(move |x| {
            (0..ey).flat_map(move |y| (0..ez).map(move |z| Vertex::new(ox + x, oy + y, oz + z)))
        })
    }
}

/// RGB for a color label; unnamed labels take a fallback by color index.
pub fn palette(label: &str, index: usize) -> [u8; 3] {
    const NAMED: [(&str, [u8; 3]); 9] = [
        ("light-blue", [135, 206, 250]),
        ("white", [255, 255, 255]),
        ("dark-blue", [0, 0, 139]),
        ("green", [0, 128, 0]),
        ("red", [220, 20, 60]),
        ("orange", [255, 140, 0]),
        ("black", [0, 0, 0]),
        ("yellow", [255, 215, 0]),
        ("brown", [139, 69, 19]),
    ];
    const FALLBACK: [[u8; 3]; 6] = [
        [128, 0, 128],
        [0, 128, 128],
        [128, 128, 0],
        [255, 105, 180],
        [112, 128, 144],
        [0, 255, 127],
    ];
    NAMED
        .iter()
        .find(|(name, _)| *name == label)
        .map(|(_, rgb)| *rgb)
        .unwrap_or(FALLBACK[index % FALLBACK.len()])
}

/// Half the edge of the cube drawn around each site in `off` output.
const CUBE_HALF: f64 = 0.2;

pub fn export(model: &CrystalModel, format: ExportFormat, region: Region, cubes: bool) -> String {
    match format {
        ExportFormat::Xyz => export_xyz(model, region),
        ExportFormat::Off => export_off(model, region, cubes),
        ExportFormat::Report => report(model, region),
    }
}

fn provenance_line(model: &CrystalModel) -> String {
    let o = &model.outcome;
    format!(
        "{} {} N={} H=<{}>",
        model.formula,
        model.family,
        o.coloring.modulus(),
        o.group_words.join(",")
    )
}

pub fn export_xyz(model: &CrystalModel, region: Region) -> String {
    let mut body = String::new();
    let mut count = 0usize;
    for v in region.vertices() {
        if let Some(symbol) = model.site(v) {
            let [x, y, z] = v.coords();
            let _ = writeln!(body, "{symbol} {x} {y} {z}");
            count += 1;
        }
    }
    let [ex, ey, ez] = region.extent;
    let [ox, oy, oz] = region.origin;
    format!(
        "{count}\n{} region={ex}x{ey}x{ez} origin={ox},{oy},{oz}\n{body}",
        provenance_line(model)
    )
}

fn rgb_text(rgb: [u8; 3]) -> String {
    rgb.map(|c| format!("{:.3}", f64::from(c) / 255.0)).join(" ")
}

/// Every site including vacancies; colored points, or colored cubes when `cubes` is set.
pub fn export_off(model: &CrystalModel, region: Region, cubes: bool) -> String {
    let coloring = &model.outcome.coloring;
    let n = coloring.modulus();
    let sites: Vec<(Vertex, [u8; 3])> = region
        .vertices()
        .map(|v| {
            let c = coloring.color_of(TorusVertex::reduce(v, n));
            (v, palette(&coloring.color(c).label, c.0))
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "# {}", provenance_line(model));
    for (i, info) in coloring.colors().iter().enumerate() {
        let role = info.element.as_deref().unwrap_or("vacancy");
        let _ = writeln!(out, "# color {} {} {}", info.label, role, rgb_text(palette(&info.label, i)));
    }
    if !cubes {
        out.insert_str(0, "COFF\n");
        let _ = writeln!(out, "{} 0 0", sites.len());
        for (v, rgb) in &sites {
            let [x, y, z] = v.coords();
            let _ = writeln!(out, "{x} {y} {z} {} 1.000", rgb_text(*rgb));
        }
        return out;
    }
    out.insert_str(0, "OFF\n");
    let _ = writeln!(out, "{} {} 0", sites.len() * 8, sites.len() * 6);
    for (v, _) in &sites {
        let [x, y, z] = v.coords().map(|c| c as f64);
        for k in 0..8 {
            let d = |bit: usize| if k >> bit & 1 == 1 { CUBE_HALF } else { -CUBE_HALF };
            let _ = writeln!(out, "{:.1} {:.1} {:.1}", x + d(2), y + d(1), z + d(0));
        }
    }
    const FACES: [[usize; 4]; 6] = [
        [0, 1, 3, 2],
        [4, 6, 7, 5],
        [0, 4, 5, 1],
        [2, 3, 7, 6],
        [0, 2, 6, 4],
        [1, 5, 7, 3],
    ];
    for (i, (_, rgb)) in sites.iter().enumerate() {
        for face in FACES {
            let [a, b, c, d] = face.map(|k| i * 8 + k);
            let _ = writeln!(out, "4 {a} {b} {c} {d} {} 1.000", rgb_text(*rgb));
        }
    }
    out
}

pub fn report(model: &CrystalModel, region: Region) -> String {
    let o = &model.outcome;
    let coloring = &o.coloring;
    let mut out = String::new();
    let _ = writeln!(out, "model {} ({})", model.family, model.formula.unicode());
    let _ = writeln!(out, "formula {}", model.formula);
    let _ = writeln!(out, "modulus {}", coloring.modulus());
    let _ = writeln!(out, "group order {}", o.group_order);
    let _ = writeln!(out, "H = <{}>", o.group_words.join(", "));
    let _ = writeln!(out, "|H| = {}, [G : H] = {}", o.subgroup_order, o.subgroup_index);
    let sizes: Vec<String> = o.orbit_sizes.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "orbit sizes {}", sizes.join(" "));
    for p in &o.orbits {
        let _ = writeln!(
            out,
            "orbit {} at {} J = {} [H : J] = {} colors {}",
            p.orbit,
            p.anchor,
            p.subgroup_name,
            p.index,
            p.labels.join(" ")
        );
    }
    let _ = writeln!(out, "colors {}", coloring.num_colors());
    for (i, info) in coloring.colors().iter().enumerate() {
        let n = coloring.class(ColorId(i)).len();
        let role = info.element.as_deref().unwrap_or("vacancy");
        let _ = writeln!(out, "  {} {} {}", info.label, role, n);
    }
    let _ = writeln!(
        out,
        "color group order {} ({})",
        o.color_group.order(),
        if o.color_group.is_perfect() { "perfect" } else { "not perfect" }
    );
    let _ = writeln!(out, "ratio {} = {}", symbols(model).join(":"), model.formula.ratio_text());
    let _ = writeln!(out, "theorem {}", if o.theorem_holds() { "holds" } else { "fails" });
    let atoms = export_xyz(model, region).lines().next().unwrap_or("0").to_string();
    let [ex, ey, ez] = region.extent;
    let _ = writeln!(out, "atoms in {ex}x{ey}x{ez} region {atoms}");
    out
}

fn symbols(model: &CrystalModel) -> Vec<String> {
    model.formula.terms.iter().map(|(s, _)| s.clone()).collect()
}

/// A parsed xyz document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XyzDocument {
    pub comment: String,
    pub atoms: Vec<(String, [i64; 3])>,
}

impl XyzDocument {
    /// Atom count per symbol, in first-appearance order.
    pub fn counts(&self) -> Vec<(String, usize)> {
        let mut counts: Vec<(String, usize)> = Vec::new();
        for (symbol, _) in &self.atoms {
            match counts.iter_mut().find(|(s, _)| s == symbol) {
                Some(c) => c.1 += 1,
                None => counts.push((symbol.clone(), 1)),
            }
        }
        counts
    }
}

pub fn parse_xyz(text: &str) -> Result<XyzDocument, CrystalError> {
    let err = |line: usize, reason: &str| CrystalError::Xyz {
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines();
    let count: usize = lines
        .next()
        .and_then(|l| l.trim().parse().ok())
        .ok_or_else(|| err(1, "expected atom count"))?;
    let comment = lines.next().ok_or_else(|| err(2, "missing comment line"))?.to_string();
    let mut atoms = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [symbol, x, y, z] = fields[..] else {
            return Err(err(i + 3, "expected symbol and three coordinates"));
        };
        let coord = |s: &str| s.parse::<i64>().map_err(|_| err(i + 3, "invalid coordinate"));
        atoms.push((symbol.to_string(), [coord(x)?, coord(y)?, coord(z)?]));
    }
    if atoms.len() != count {
        return Err(err(1, "atom count does not match"));
    }
    Ok(XyzDocument { comment, atoms })
}

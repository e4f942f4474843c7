//! JSON job configuration and the pipeline that runs it.
//!
//! ```json
//! {
//!   "modulus": 2,
//!   "subgroups": { "G": ["P", "Q", "R", "S"], "J": ["Q", "R", "S", "PQP"] },
//!   "colorings": [{
//!     "name": "nacl",
//!     "group": "G",
//!     "orbits": [{ "orbit": 0, "subgroup": "J", "labels": ["light-blue", "white"] }],
//!     "elements": [["light-blue", "Na"], ["white", "Cl"]]
//!   }],
//!   "exports": [{ "coloring": "nacl", "format": "xyz", "region": [2, 2, 2], "path": "nacl.xyz" }]
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{
    build_coloring, color_group, stoichiometry, ColorGroup, ColoringError, ColoringPlan, OrbitPlan, Stoichiometry,
    TheoremReport, VertexColoring,
};
use crate::isometry::{GeneratorWord, WordParseError};
use crate::orbits::{decompose, TorusVertex};
use crate::quotient::{index, QuotientError, TorusGroup, TorusSubgroup, DEFAULT_CERTIFICATE_RADIUS};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("subgroup {name:?}: {source}")]
    Word { name: String, source: WordParseError },
    #[error("unknown subgroup {0:?}")]
    UnknownSubgroup(String),
    #[error("unknown coloring {0:?}")]
    UnknownColoring(String),
    #[error("subgroup {name:?}: {source}")]
    Quotient { name: String, source: QuotientError },
    #[error(transparent)]
    Modulus(QuotientError),
    #[error("coloring {name:?}: {source}")]
    Coloring { name: String, source: ColoringError },
    #[error("coloring {name:?}: anchor {anchor:?} is outside the torus")]
    Anchor { name: String, anchor: [u32; 3] },
}

fn default_modulus() -> u32 {
    2
}

fn default_true() -> bool {
    true
}

fn default_radius() -> usize {
    DEFAULT_CERTIFICATE_RADIUS
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default = "default_modulus")]
    pub modulus: u32,
    /// Recompute every subgroup index at twice the modulus and require agreement.
    #[serde(default = "default_true")]
    pub cross_check: bool,
    /// Word radius for translation certificates.
    #[serde(default = "default_radius")]
    pub radius: usize,
    /// Subgroup name → generator words.
    #[serde(default)]
    pub subgroups: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub colorings: Vec<ColoringSpec>,
    #[serde(default)]
    pub exports: Vec<ExportSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringSpec {
    pub name: String,
    /// Crystal family name used in exports; defaults to `name`.
    #[serde(default)]
    pub family: Option<String>,
    /// Subgroup whose elements permute the colors.
    pub group: String,
    pub orbits: Vec<OrbitSpec>,
    #[serde(default)]
    pub merges: Vec<[String; 2]>,
    #[serde(default)]
    pub unplanned: Option<String>,
    #[serde(default)]
    pub background: Vec<String>,
    /// Ordered `[label, element symbol]` pairs; the order is the formula order.
    #[serde(default)]
    pub elements: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub orbit: usize,
    pub subgroup: String,
    pub labels: Vec<String>,
    #[serde(default)]
    pub anchor: Option<[u32; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Xyz,
    Off,
    Report,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportSpec {
    /// Name of a coloring in this config, or a preset name when `preset` is set.
    #[serde(default)]
    pub coloring: Option<String>,
    #[serde(default)]
    pub preset: Option<String>,
    pub format: ExportFormat,
    /// Box size in unit cells.
    pub region: [u32; 3],
    #[serde(default)]
    pub origin: [i64; 3],
    /// Emit a small cube per site in `off` output.
    #[serde(default)]
    pub cubes: bool,
    pub path: String,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Index of a named subgroup at the configured modulus and at twice that modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub name: String,
    pub index: usize,
    pub index_doubled: usize,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.index == self.index_doubled
    }
}

/// Everything computed for one coloring of a config.
#[derive(Debug, Clone)]
pub struct ColoringOutcome {
    pub name: String,
    pub family: String,
    pub group_name: String,
    pub group_words: Vec<String>,
    pub coloring: VertexColoring,
    pub color_group: ColorGroup,
    /// Orders and indices of the acting subgroup `H`.
    pub group_order: usize,
    pub subgroup_order: usize,
    pub subgroup_index: usize,
    pub orbit_sizes: Vec<usize>,
    pub orbits: Vec<PlannedOrbit>,
    pub theorem: Vec<TheoremReport>,
    pub stoichiometry: Stoichiometry,
    /// Element symbols in formula order.
    pub elements: Vec<(String, String)>,
}

impl ColoringOutcome {
    pub fn theorem_holds(&self) -> bool {
        self.theorem.iter().all(TheoremReport::all_passed)
    }

    /// The color group equals the image of `H` element-wise.
    pub fn color_group_is_h(&self, h: &TorusSubgroup) -> bool {
        self.color_group.subgroup.elements() == h.elements()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedOrbit {
    pub orbit: usize,
    pub anchor: TorusVertex,
    pub subgroup_name: String,
    pub index: usize,
    pub labels: Vec<String>,
}

/// A parsed config with its group and certified subgroups built.
#[derive(Debug, Clone)]
pub struct Session {
    pub config: JobConfig,
    pub group: TorusGroup,
    pub subgroups: BTreeMap<String, TorusSubgroup>,
    words: BTreeMap<String, Vec<GeneratorWord>>,
}

impl Session {
    pub fn new(config: JobConfig) -> Result<Self, ConfigError> {
        let group = TorusGroup::build(config.modulus).map_err(ConfigError::Modulus)?;
        let mut words = BTreeMap::new();
        for (name, list) in &config.subgroups {
            let parsed: Vec<GeneratorWord> = list
                .iter()
                .map(|w| w.parse())
                .collect::<Result<_, _>>()
                .map_err(|source| ConfigError::Word {
                    name: name.clone(),
                    source,
                })?;
            if parsed.is_empty() {
                return Err(ConfigError::Word {
                    name: name.clone(),
                    source: WordParseError::Empty,
                });
            }
            words.insert(name.clone(), parsed);
        }
        let mut subgroups = BTreeMap::new();
        for (name, list) in &words {
            let sub = group
                .subgroup(list)
                .certify_translations(config.radius)
                .map_err(|source| ConfigError::Quotient {
                    name: name.clone(),
                    source,
                })?;
            subgroups.insert(name.clone(), sub);
        }
        let session = Self {
            config,
            group,
            subgroups,
            words,
        };
        session.check_references()?;
        Ok(session)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Self::new(JobConfig::from_json(text)?)
    }

    fn check_references(&self) -> Result<(), ConfigError> {
        for c in &self.config.colorings {
            self.subgroup(&c.group)?;
            for o in &c.orbits {
                self.subgroup(&o.subgroup)?;
            }
        }
        for e in &self.config.exports {
            if let (Some(name), None) = (&e.coloring, &e.preset) {
                self.coloring_spec(name)?;
            }
        }
        Ok(())
    }

    pub fn subgroup(&self, name: &str) -> Result<&TorusSubgroup, ConfigError> {
        self.subgroups
            .get(name)
            .ok_or_else(|| ConfigError::UnknownSubgroup(name.to_string()))
    }

    pub fn coloring_spec(&self, name: &str) -> Result<&ColoringSpec, ConfigError> {
        self.config
            .colorings
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| ConfigError::UnknownColoring(name.to_string()))
    }

    /// Indices of all named subgroups at `N` and `2N`.
    pub fn cross_check(&self) -> Result<Vec<CrossCheck>, ConfigError> {
        let doubled = TorusGroup::build(self.config.modulus * 2).map_err(ConfigError::Modulus)?;
        self.words
            .iter()
            .map(|(name, list)| {
                let wide = doubled
                    .subgroup(list)
                    .certify_translations(self.config.radius)
                    .map_err(|source| ConfigError::Quotient {
                        name: name.clone(),
                        source,
                    })?;
                Ok(CrossCheck {
                    name: name.clone(),
                    index: index(&self.group, &self.subgroups[name]).value,
                    index_doubled: index(&doubled, &wide).value,
                })
            })
            .collect()
    }

    pub fn run_all(&self) -> Result<Vec<ColoringOutcome>, ConfigError> {
        self.config.colorings.iter().map(|c| self.run_coloring(c)).collect()
    }

    pub fn run_coloring(&self, spec: &ColoringSpec) -> Result<ColoringOutcome, ConfigError> {
        let coloring_err = |source| ConfigError::Coloring {
            name: spec.name.clone(),
            source,
        };
        let h = self.subgroup(&spec.group)?;
        let n = self.config.modulus;
        let mut plan = ColoringPlan::new(h.clone());
        for o in &spec.orbits {
            let anchor = match o.anchor {
                Some(a) if a.iter().all(|&c| c < n) => Some(TorusVertex::new(a[0], a[1], a[2], n)),
                Some(anchor) => {
                    return Err(ConfigError::Anchor {
                        name: spec.name.clone(),
                        anchor,
                    })
                }
                None => None,
            };
            plan.orbits.push(OrbitPlan {
                orbit: o.orbit,
                subgroup: self.subgroup(&o.subgroup)?.clone(),
                labels: o.labels.clone(),
                anchor,
            });
        }
        plan.merges = spec.merges.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        plan.unplanned = spec.unplanned.clone();
        plan.background = spec.background.clone();
        plan.elements = spec.elements.iter().map(|[l, e]| (l.clone(), e.clone())).collect();

        let coloring = build_coloring(&plan).map_err(coloring_err)?;
        let decomposition = decompose(h);
        let orbits: Vec<PlannedOrbit> = spec
            .orbits
            .iter()
            .zip(&plan.orbits)
            .map(|(o, p)| PlannedOrbit {
                orbit: o.orbit,
                anchor: p.anchor.unwrap_or_else(|| decomposition.representative(o.orbit)),
                subgroup_name: o.subgroup.clone(),
                index: h.order() / p.subgroup.order(),
                labels: o.labels.clone(),
            })
            .collect();
        let theorem = plan
            .orbits
            .iter()
            .zip(&orbits)
            .map(|(p, o)| crate::coloring::verify_theorem(h, &p.subgroup, o.anchor, &coloring))
            .collect::<Result<Vec<_>, _>>()
            .map_err(coloring_err)?;

        Ok(ColoringOutcome {
            name: spec.name.clone(),
            family: spec.family.clone().unwrap_or_else(|| spec.name.clone()),
            group_name: spec.group.clone(),
            group_words: self.config.subgroups[&spec.group].clone(),
            color_group: color_group(&coloring, &self.group),
            stoichiometry: stoichiometry(&coloring, false),
            group_order: self.group.order(),
            subgroup_order: h.order(),
            subgroup_index: index(&self.group, h).value,
            orbit_sizes: decomposition.sizes(),
            orbits,
            theorem,
            elements: plan.elements.clone(),
            coloring,
        })
    }
}

//! Vertex-colorings built from a color group `H` and per-orbit subgroups `J ≤ H`.
//!
//! For an `H`-orbit `Hx` and a subgroup `J` with `Stab_H(x) ≤ J`, the sets `hJx`
//! partition the orbit into `[H : J]` classes, one color each. Orbits colored this
//! way are combined into one coloring; two orbits may share a color when the
//! subgroups involved contain both representatives' stabilizers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::orbits::{decompose, stabilizer, stabilizer_escape, OrbitDecomposition, TorusVertex};
use crate::quotient::{left_cosets, CosetTable, TorusElement, TorusGroup, TorusSubgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorId(pub usize);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorInfo {
    pub label: String,
    pub element: Option<String>,
    /// Vacancy color: counted as a color but excluded from stoichiometry.
    pub background: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("subgroup <{0}> has no translation certificate")]
    Uncertified(String),
    #[error("subgroup <{sub}> is not contained in the color group <{group}>")]
    NotContained { sub: String, group: String },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("orbit {orbit} does not exist (there are {count} orbits)")]
    OrbitOutOfRange { orbit: usize, count: usize },
    #[error("orbit {0} is planned more than once")]
    OrbitPlannedTwice(usize),
    #[error("anchor {anchor} is not in orbit {orbit}")]
    AnchorNotInOrbit { anchor: TorusVertex, orbit: usize },
    #[error("orbit {orbit}: stabilizer of {vertex} contains {element}, which is not in <{subgroup}>")]
    StabilizerNotContained { orbit: usize, vertex: TorusVertex, element: TorusElement, subgroup: String },
    #[error("orbit {orbit}: [H : J] = {expected} colors needed, {found} labels given")]
    LabelCount { orbit: usize, expected: usize, found: usize },
    #[error("label {0:?} is used more than once without a merge")]
    DuplicateLabel(String),
    #[error("invalid label {0:?}: labels must be nonempty and contain no whitespace")]
    InvalidLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("merge of {0:?} would join two colors on the same orbit")]
    MergeWithinOrbit(String),
    #[error("cannot merge {first:?} and {second:?}: stabilizer element {element} escapes the orbit subgroup")]
    MergeCondition { first: String, second: String, element: TorusElement },
    #[error("{0} does not permute the colors")]
    NotPermuted(TorusElement),
    #[error("orbit {0} has no plan and no background label")]
    UnplannedOrbit(usize),
    #[error("malformed coloring text at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// How to color one `H`-orbit.
#[derive(Debug, Clone)]
pub struct OrbitPlan {
    /// Index into the orbit decomposition of `H` (orbits ordered by smallest vertex).
    pub orbit: usize,
    pub subgroup: TorusSubgroup,
    /// One label per left coset of `J` in `H`; the first one colors `Jx`.
    pub labels: Vec<String>,
    /// Base vertex `x`; defaults to the orbit's smallest vertex.
    pub anchor: Option<TorusVertex>,
}

#[derive(Debug, Clone)]
pub struct ColoringPlan {
    pub group: TorusSubgroup,
    pub orbits: Vec<OrbitPlan>,
    /// Pairs of labels naming one shared color; `(a, a)` allows `a` on several orbits.
    pub merges: Vec<(String, String)>,
    /// Single background color for every orbit without a plan.
    pub unplanned: Option<String>,
    pub background: Vec<String>,
    pub elements: Vec<(String, String)>,
}

impl ColoringPlan {
    pub fn new(group: TorusSubgroup) -> Self {
        Self {
            group,
            orbits: Vec::new(),
            merges: Vec::new(),
            unplanned: None,
            background: Vec::new(),
            elements: Vec::new(),
        }
    }

    pub fn orbit(mut self, orbit: usize, subgroup: TorusSubgroup, labels: &[&str]) -> Self {
        self.orbits.push(OrbitPlan {
            orbit,
            subgroup,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            anchor: None,
        });
        self
    }

    pub fn anchored(mut self, anchor: TorusVertex) -> Self {
        if let Some(last) = self.orbits.last_mut() {
            last.anchor = Some(anchor);
        }
        self
    }

    pub fn merge(mut self, a: &str, b: &str) -> Self {
        self.merges.push((a.to_string(), b.to_string()));
        self
    }

    pub fn unplanned(mut self, label: &str) -> Self {
        self.unplanned = Some(label.to_string());
        self
    }

    pub fn background(mut self, label: &str) -> Self {
        self.background.push(label.to_string());
        self
    }

    pub fn element(mut self, label: &str, symbol: &str) -> Self {
        self.elements.push((label.to_string(), symbol.to_string()));
        self
    }
}

/// The recipe a coloring was built from, as text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub group: String,
    pub orbits: Vec<OrbitProvenance>,
    pub merges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitProvenance {
    pub orbit: usize,
    pub anchor: TorusVertex,
    pub subgroup: String,
    pub labels: Vec<String>,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H=<{}>", self.group)?;
        for o in &self.orbits {
            write!(f, "; orbit {} at {}: J=<{}> -> {}", o.orbit, o.anchor, o.subgroup, o.labels.join("/"))?;
        }
        for (a, b) in &self.merges {
            write!(f, "; merge {a}={b}")?;
        }
        Ok(())
    }
}

/// A surjective assignment of colors to the torus vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexColoring {
    modulus: u32,
    assignment: Vec<ColorId>,
    colors: Vec<ColorInfo>,
    provenance: Provenance,
}

impl VertexColoring {
    /// Builds a coloring from an explicit assignment in lexicographic vertex order.
    ///
    /// Fails unless every color is used.
    pub fn from_assignment(modulus: u32, assignment: Vec<ColorId>, colors: Vec<ColorInfo>) -> Result<Self, ColoringError> {
        let count = (modulus as usize).pow(3);
        let mut used = vec![false; colors.len()];
        if assignment.len() != count {
            return Err(ColoringError::Parse {
                line: 0,
                reason: format!("expected {count} vertices, found {}", assignment.len()),
            });
        }
        for c in &assignment {
            match used.get_mut(c.0) {
                Some(slot) => *slot = true,
                None => return Err(ColoringError::UnknownLabel(c.to_string())),
            }
        }
        if let Some(unused) = used.iter().position(|u| !u) {
            return Err(ColoringError::UnknownLabel(colors[unused].label.clone()));
        }
        Ok(Self {
            modulus,
            assignment,
            colors,
            provenance: Provenance::default(),
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn num_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[ColorInfo] {
        &self.colors
    }

    pub fn color(&self, c: ColorId) -> &ColorInfo {
        &self.colors[c.0]
    }

    pub fn color_of(&self, v: TorusVertex) -> ColorId {
        self.assignment[v.linear_index()]
    }

    pub fn color_by_label(&self, label: &str) -> Option<ColorId> {
        self.colors.iter().position(|c| c.label == label).map(ColorId)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Vertices of color `c`, in lexicographic order.
    pub fn class(&self, c: ColorId) -> Vec<TorusVertex> {
        TorusVertex::all(self.modulus).filter(|&v| self.color_of(v) == c).collect()
    }

    /// The color classes, indexed by color id.
    pub fn partition(&self) -> Vec<Vec<TorusVertex>> {
        let mut classes = vec![Vec::new(); self.colors.len()];
        for v in TorusVertex::all(self.modulus) {
            classes[self.color_of(v).0].push(v);
        }
        classes
    }

    /// Replaces the element symbols; `None` for every color not listed.
    pub fn with_elements(mut self, elements: &[(String, String)]) -> Result<Self, ColoringError> {
        for c in &mut self.colors {
            c.element = None;
        }
        for (label, symbol) in elements {
            let id = self
                .color_by_label(label)
                .ok_or_else(|| ColoringError::UnknownLabel(label.clone()))?;
            self.colors[id.0].element = Some(symbol.clone());
        }
        Ok(self)
    }

    /// Text form: `modulus N`, one `color <label> [element <symbol>] [background]` line per
    /// color, then `x y z <label>` per vertex in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("modulus {}\n", self.modulus);
        for c in &self.colors {
            out.push_str("color ");
            out.push_str(&c.label);
            if let Some(e) = &c.element {
                out.push_str(" element ");
                out.push_str(e);
            }
            if c.background {
                out.push_str(" background");
            }
            out.push('\n');
        }
        for v in TorusVertex::all(self.modulus) {
            let [x, y, z] = v.coords();
            out.push_str(&format!("{x} {y} {z} {}\n", self.color(self.color_of(v)).label));
        }
        out
    }
}

impl FromStr for VertexColoring {
    type Err = ColoringError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, reason: &str| ColoringError::Parse {
            line: line + 1,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (i, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
        let modulus: u32 = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["modulus", n] => n.parse().map_err(|_| err(i, "bad modulus"))?,
            _ => return Err(err(i, "expected `modulus N`")),
        };
        if modulus == 0 {
            return Err(err(i, "modulus must be positive"));
        }
        let mut colors: Vec<ColorInfo> = Vec::new();
        let mut by_label: HashMap<String, ColorId> = HashMap::new();
        let mut assignment = vec![None; (modulus as usize).pow(3)];
        for (i, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "color" {
                let label = *fields.get(1).ok_or_else(|| err(i, "missing label"))?;
                let mut info = ColorInfo {
                    label: label.to_string(),
                    element: None,
                    background: false,
                };
                let mut rest = fields[2..].iter();
                while let Some(&f) = rest.next() {
                    match f {
                        "element" => info.element = Some(rest.next().ok_or_else(|| err(i, "missing element"))?.to_string()),
                        "background" => info.background = true,
                        _ => return Err(err(i, "unexpected color attribute")),
                    }
                }
                if by_label.insert(label.to_string(), ColorId(colors.len())).is_some() {
                    return Err(err(i, "duplicate color label"));
                }
                colors.push(info);
                continue;
            }
            let [x, y, z, label] = fields[..] else {
                return Err(err(i, "expected `x y z label`"));
            };
            let coord = |s: &str| s.parse::<u32>().ok().filter(|&c| c < modulus).ok_or_else(|| err(i, "bad coordinate"));
            let v = TorusVertex::new(coord(x)?, coord(y)?, coord(z)?, modulus);
            let c = *by_label.get(label).ok_or_else(|| err(i, "undeclared label"))?;
            if assignment[v.linear_index()].replace(c).is_some() {
                return Err(err(i, "vertex listed twice"));
            }
        }
        let assignment: Vec<ColorId> = assignment
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| err(0, "not every vertex is colored"))?;
        VertexColoring::from_assignment(modulus, assignment, colors)
    }
}

/// One color before merging: a coset class on one orbit.
struct RawColor {
    label: String,
    orbit: usize,
    anchor: TorusVertex,
    subgroup: TorusSubgroup,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Builds a coloring following the orbit-by-orbit coset procedure.
pub fn build_coloring(plan: &ColoringPlan) -> Result<VertexColoring, ColoringError> {
    let h = &plan.group;
    let modulus = h.modulus();
    if !h.is_certified() {
        return Err(ColoringError::Uncertified(h.describe()));
    }
    for p in &plan.orbits {
        let j = &p.subgroup;
        if j.modulus() != modulus {
            return Err(ColoringError::ModulusMismatch(modulus, j.modulus()));
        }
        if !j.is_certified() {
            return Err(ColoringError::Uncertified(j.describe()));
        }
        if !j.is_subgroup_of(h) {
            return Err(ColoringError::NotContained {
                sub: j.describe(),
                group: h.describe(),
            });
        }
    }

    let decomposition = decompose(h);
    let mut planned: Vec<Option<usize>> = vec![None; decomposition.len()];
    for (k, p) in plan.orbits.iter().enumerate() {
        let slot = planned.get_mut(p.orbit).ok_or(ColoringError::OrbitOutOfRange {
            orbit: p.orbit,
            count: decomposition.len(),
        })?;
        if slot.replace(k).is_some() {
            return Err(ColoringError::OrbitPlannedTwice(p.orbit));
        }
    }

    let count = (modulus as usize).pow(3);
    let mut raw_of_vertex = vec![usize::MAX; count];
    let mut raw: Vec<RawColor> = Vec::new();

    for (orbit, slot) in planned.iter().enumerate() {
        match slot {
            Some(k) => color_orbit(&plan.orbits[*k], h, &decomposition, &mut raw, &mut raw_of_vertex)?,
            None => {
                let label = plan.unplanned.clone().ok_or(ColoringError::UnplannedOrbit(orbit))?;
                let id = raw.len();
                raw.push(RawColor {
                    label,
                    orbit,
                    anchor: decomposition.representative(orbit),
                    subgroup: h.clone(),
                });
                for v in decomposition.orbit(orbit) {
                    raw_of_vertex[v.linear_index()] = id;
                }
            }
        }
    }

    for r in &raw {
        if r.label.is_empty() || r.label.chars().any(char::is_whitespace) {
            return Err(ColoringError::InvalidLabel(r.label.clone()));
        }
    }

    // Merge raw colors.
    let mut parent: Vec<usize> = (0..raw.len()).collect();
    let labels_of = |label: &str| -> Vec<usize> { (0..raw.len()).filter(|&i| raw[i].label == label).collect() };
    // The unplanned background color is shared by every orbit without a plan.
    let unplanned = plan.unplanned.as_ref().filter(|u| raw.iter().any(|r| &r.label == *u));
    let implicit = unplanned.map(|u| (u.clone(), u.clone()));
    let merges: Vec<(String, String)> = plan.merges.iter().cloned().chain(implicit).collect();
    for (a, b) in &merges {
        let (ia, ib) = (labels_of(a), labels_of(b));
        if ia.is_empty() {
            return Err(ColoringError::UnknownLabel(a.clone()));
        }
        if ib.is_empty() {
            return Err(ColoringError::UnknownLabel(b.clone()));
        }
        for &i in ia.iter().chain(&ib) {
            let (ri, r0) = (find(&mut parent, i), find(&mut parent, ia[0]));
            parent[ri] = r0;
        }
    }
    let merged_labels: Vec<&String> = merges.iter().flat_map(|(a, b)| [a, b]).collect();
    let mut seen_labels: HashMap<&str, usize> = HashMap::new();
    for r in &raw {
        *seen_labels.entry(&r.label).or_default() += 1;
    }
    for (label, n) in &seen_labels {
        if *n > 1 && !merged_labels.iter().any(|m| m == label) {
            return Err(ColoringError::DuplicateLabel(label.to_string()));
        }
    }
    for a in 0..raw.len() {
        for b in a + 1..raw.len() {
            if find(&mut parent, a) != find(&mut parent, b) {
                continue;
            }
            if raw[a].orbit == raw[b].orbit {
                return Err(ColoringError::MergeWithinOrbit(raw[b].label.clone()));
            }
            // Both orbit subgroups must contain both representatives' stabilizers.
            for (x, y) in [(a, b), (b, a)] {
                if let Some(element) = stabilizer_escape(h, raw[y].anchor, &raw[x].subgroup) {
                    return Err(ColoringError::MergeCondition {
                        first: raw[a].label.clone(),
                        second: raw[b].label.clone(),
                        element,
                    });
                }
            }
        }
    }

    // Dense color ids in order of first appearance.
    let mut id_of_root: HashMap<usize, ColorId> = HashMap::new();
    let mut colors: Vec<ColorInfo> = Vec::new();
    let mut raw_id = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        let root = find(&mut parent, i);
        let id = *id_of_root.entry(root).or_insert_with(|| {
            colors.push(ColorInfo {
                label: r.label.clone(),
                element: None,
                background: false,
            });
            ColorId(colors.len() - 1)
        });
        raw_id.push(id);
    }
    let find_color = |label: &str| -> Result<ColorId, ColoringError> {
        raw.iter()
            .position(|r| r.label == label)
            .map(|i| raw_id[i])
            .ok_or_else(|| ColoringError::UnknownLabel(label.to_string()))
    };
    for label in plan.background.iter().chain(unplanned) {
        let id = find_color(label)?;
        colors[id.0].background = true;
    }
    for (label, symbol) in &plan.elements {
        let id = find_color(label)?;
        colors[id.0].element = Some(symbol.clone());
    }

    let assignment: Vec<ColorId> = raw_of_vertex.iter().map(|&r| raw_id[r]).collect();
    let provenance = Provenance {
        group: h.describe(),
        orbits: plan
            .orbits
            .iter()
            .map(|p| OrbitProvenance {
                orbit: p.orbit,
                anchor: p.anchor.unwrap_or_else(|| decomposition.representative(p.orbit)),
                subgroup: p.subgroup.describe(),
                labels: p.labels.clone(),
            })
            .collect(),
        merges: plan.merges.clone(),
    };
    let coloring = VertexColoring {
        modulus,
        assignment,
        colors,
        provenance,
    };
    for g in h.generators() {
        if color_action(&coloring, g).is_none() {
            return Err(ColoringError::NotPermuted(*g));
        }
    }
    Ok(coloring)
}

fn color_orbit(
    p: &OrbitPlan,
    h: &TorusSubgroup,
    decomposition: &OrbitDecomposition,
    raw: &mut Vec<RawColor>,
    raw_of_vertex: &mut [usize],
) -> Result<(), ColoringError> {
    let j = &p.subgroup;
    let anchor = p.anchor.unwrap_or_else(|| decomposition.representative(p.orbit));
    if anchor.modulus() != h.modulus() || decomposition.orbit_of(anchor) != p.orbit {
        return Err(ColoringError::AnchorNotInOrbit { anchor, orbit: p.orbit });
    }
    if let Some(element) = stabilizer_escape(h, anchor, j) {
        return Err(ColoringError::StabilizerNotContained {
            orbit: p.orbit,
            vertex: anchor,
            element,
            subgroup: j.describe(),
        });
    }
    let cosets = left_cosets(h, j).expect("containment checked");
    if p.labels.len() != cosets.len() {
        return Err(ColoringError::LabelCount {
            orbit: p.orbit,
            expected: cosets.len(),
            found: p.labels.len(),
        });
    }
    let order = coset_label_order(&cosets);
    let base = raw.len();
    for (slot, _) in order.iter().enumerate() {
        raw.push(RawColor {
            label: p.labels[slot].clone(),
            orbit: p.orbit,
            anchor,
            subgroup: j.clone(),
        });
    }
    let mut slot_of_coset = vec![0; cosets.len()];
    for (slot, &c) in order.iter().enumerate() {
        slot_of_coset[c] = slot;
    }
    let to_anchor = decomposition.witness(anchor).inverse();
    for &v in decomposition.orbit(p.orbit) {
        // h·anchor = v
        let g = decomposition.witness(v).compose(&to_anchor);
        let coset = cosets.coset_of(&g).expect("witness lies in H");
        raw_of_vertex[v.linear_index()] = base + slot_of_coset[coset];
    }
    Ok(())
}

/// Coset ids in label order: `J` itself first, then the rest in canonical order.
pub fn coset_label_order(cosets: &CosetTable) -> Vec<usize> {
    let first = cosets.identity_coset();
    std::iter::once(first).chain((0..cosets.len()).filter(|&c| c != first)).collect()
}

/// The permutation of colors induced by a group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorPermutation {
    pub element: TorusElement,
    pub mapping: Vec<ColorId>,
}

impl ColorPermutation {
    pub fn apply(&self, c: ColorId) -> ColorId {
        self.mapping[c.0]
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, c)| c.0 == i)
    }

    /// `self ∘ other` on colors.
    pub fn compose_mapping(&self, other: &ColorPermutation) -> Vec<ColorId> {
        other.mapping.iter().map(|&c| self.apply(c)).collect()
    }

    /// Cycle notation over labels, fixed points omitted; `()` for the identity.
    pub fn cycles(&self, coloring: &VertexColoring) -> String {
        let mut done = vec![false; self.mapping.len()];
        let mut out = String::new();
        for start in 0..self.mapping.len() {
            if done[start] || self.mapping[start].0 == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut c = start;
            while !done[c] {
                done[c] = true;
                cycle.push(coloring.colors[c].label.as_str());
                c = self.mapping[c].0;
            }
            out.push_str(&format!("({})", cycle.join(" ")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// The permutation `g` induces on the colors, or `None` if `g` splits some color class.
pub fn color_action(coloring: &VertexColoring, g: &TorusElement) -> Option<ColorPermutation> {
    let mut mapping: Vec<Option<ColorId>> = vec![None; coloring.num_colors()];
    for v in TorusVertex::all(coloring.modulus) {
        let (c, d) = (coloring.color_of(v), coloring.color_of(g.apply(v)));
        match mapping[c.0] {
            None => mapping[c.0] = Some(d),
            Some(e) if e != d => return None,
            Some(_) => {}
        }
    }
    let mapping: Vec<ColorId> = mapping.into_iter().collect::<Option<_>>()?;
    let mut hit = vec![false; mapping.len()];
    for c in &mapping {
        if std::mem::replace(&mut hit[c.0], true) {
            return None;
        }
    }
    Some(ColorPermutation { element: *g, mapping })
}

/// All symmetries of the uncolored honeycomb (modulo `N`) that permute the colors, with `σ`.
#[derive(Debug, Clone)]
pub struct ColorGroup {
    pub subgroup: TorusSubgroup,
    pub sigma: BTreeMap<TorusElement, ColorPermutation>,
}

impl ColorGroup {
    pub fn order(&self) -> usize {
        self.subgroup.order()
    }

    /// Every symmetry of the honeycomb permutes the colors.
    pub fn is_perfect(&self) -> bool {
        self.subgroup.order() == self.subgroup.group_order()
    }

    pub fn sigma(&self, g: &TorusElement) -> Option<&ColorPermutation> {
        self.sigma.get(g)
    }
}

pub fn color_group(coloring: &VertexColoring, group: &TorusGroup) -> ColorGroup {
    let sigma: BTreeMap<TorusElement, ColorPermutation> = group
        .elements()
        .iter()
        .filter_map(|g| color_action(coloring, g).map(|p| (*g, p)))
        .collect();
    ColorGroup {
        subgroup: TorusSubgroup::from_elements(group.modulus(), group.order(), sigma.keys().copied().collect()),
        sigma,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremPart {
    pub part: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub vertex: TorusVertex,
    pub parts: Vec<TheoremPart>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.parts.iter().all(|p| p.passed)
    }

    pub fn part(&self, name: &str) -> Option<&TheoremPart> {
        self.parts.iter().find(|p| p.part == name)
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem check at {}", self.vertex)?;
        for p in &self.parts {
            writeln!(f, "  part {:<2} {}  {}", p.part, if p.passed { "PASS" } else { "FAIL" }, p.detail)?;
        }
        Ok(())
    }
}

/// Checks the four statements relating colors on `Hx` to the cosets of `J` in `H`.
pub fn verify_theorem(
    h: &TorusSubgroup,
    j: &TorusSubgroup,
    x: TorusVertex,
    coloring: &VertexColoring,
) -> Result<TheoremReport, ColoringError> {
    let cosets = left_cosets(h, j).map_err(|_| ColoringError::NotContained {
        sub: j.describe(),
        group: h.describe(),
    })?;
    let decomposition = decompose(h);
    let orbit = decomposition.orbit(decomposition.orbit_of(x));
    let mut parts = Vec::new();

    // Part 1: coset hJ ↦ color of hJx is a well-defined bijection intertwining the actions.
    let color_of_coset: Vec<ColorId> = cosets
        .representatives()
        .iter()
        .map(|r| coloring.color_of(r.apply(x)))
        .collect();
    let mut failure = None;
    for g in h.elements() {
        let coset = cosets.coset_of(g).expect("element of H");
        if coloring.color_of(g.apply(x)) != color_of_coset[coset] {
            failure = Some(format!("{g} sends x to a color different from its coset's color"));
            break;
        }
    }
    let mut distinct = color_of_coset.clone();
    distinct.sort();
    distinct.dedup();
    if failure.is_none() && distinct.len() != cosets.len() {
        failure = Some("two cosets share a color".to_string());
    }
    if failure.is_none() {
        'outer: for g in h.elements() {
            let Some(sigma) = color_action(coloring, g) else {
                failure = Some(format!("{g} does not permute the colors"));
                break;
            };
            for (c, r) in cosets.representatives().iter().enumerate() {
                let moved = cosets.coset_of(&g.compose(r)).expect("H is closed");
                if sigma.apply(color_of_coset[c]) != color_of_coset[moved] {
                    failure = Some(format!("{g}: color of g·(coset {c}) differs from sigma(g)"));
                    break 'outer;
                }
            }
        }
    }
    parts.push(TheoremPart {
        part: "1",
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| format!("{} cosets <-> {} colors, actions agree", cosets.len(), distinct.len())),
    });

    // Part 2: number of colors on Hx equals [H:J].
    let mut on_orbit: Vec<ColorId> = orbit.iter().map(|&v| coloring.color_of(v)).collect();
    on_orbit.sort();
    on_orbit.dedup();
    let index = h.order() / j.order();
    parts.push(TheoremPart {
        part: "2",
        passed: on_orbit.len() == index,
        detail: format!("{} colors on the orbit, [H:J] = {}", on_orbit.len(), index),
    });

    // Part 3: H-orbits of colors are no more than H-orbits of vertices.
    let mut parent: Vec<usize> = (0..coloring.num_colors()).collect();
    let mut all_permute = true;
    for g in h.generators() {
        match color_action(coloring, g) {
            Some(sigma) => {
                for c in 0..coloring.num_colors() {
                    let (a, b) = (find(&mut parent, c), find(&mut parent, sigma.mapping[c].0));
                    parent[a] = b;
                }
            }
            None => all_permute = false,
        }
    }
    let color_orbits = (0..coloring.num_colors()).filter(|&c| find(&mut parent, c) == c).count();
    parts.push(TheoremPart {
        part: "3",
        passed: all_permute && color_orbits <= decomposition.len(),
        detail: format!("{} color orbits, {} vertex orbits", color_orbits, decomposition.len()),
    });

    // Part 4a: Stab_H(x) ≤ J.
    let stab = stabilizer(h, x);
    let escape = stab.elements.iter().find(|g| !j.contains(g));
    parts.push(TheoremPart {
        part: "4a",
        passed: escape.is_none(),
        detail: match escape {
            Some(g) => format!("{g} fixes x but is not in J"),
            None => format!("|Stab_H(x)| = {} inside |J| = {}", stab.order(), j.order()),
        },
    });

    // Part 4b: |Hx| = [H:J]·[J:Stab_H(x)], per N-period.
    let j_index = j.order() / stab.order().max(1);
    parts.push(TheoremPart {
        part: "4b",
        passed: escape.is_none() && j.order().is_multiple_of(stab.order()) && orbit.len() == index * j_index,
        detail: format!("|Hx| = {} = {} * {}", orbit.len(), index, j_index),
    });

    Ok(TheoremReport { vertex: x, parts })
}

/// Vertex counts per color in one `N³` box, with the ratio in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stoichiometry {
    pub counts: Vec<(String, usize)>,
    pub ratio: Vec<u64>,
}

impl Stoichiometry {
    pub fn ratio_text(&self) -> String {
        self.ratio.iter().map(u64::to_string).collect::<Vec<_>>().join(":")
    }

    pub fn count(&self, label: &str) -> Option<usize> {
        self.counts.iter().find(|(l, _)| l == label).map(|(_, n)| *n)
    }
}

impl fmt::Display for Stoichiometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.counts.iter().map(|(l, _)| l.as_str()).collect();
        write!(f, "{} = {}", labels.join(" : "), self.ratio_text())
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn reduce_ratio(counts: &[u64]) -> Vec<u64> {
    let g = counts.iter().copied().fold(0, gcd).max(1);
    counts.iter().map(|c| c / g).collect()
}

/// Color counts in color-id order; background colors are skipped unless requested.
pub fn stoichiometry(coloring: &VertexColoring, include_background: bool) -> Stoichiometry {
    let classes = coloring.partition();
    let counts: Vec<(String, usize)> = coloring
        .colors
        .iter()
        .zip(&classes)
        .filter(|(info, _)| include_background || !info.background)
        .map(|(info, class)| (info.label.clone(), class.len()))
        .collect();
    let ratio = reduce_ratio(&counts.iter().map(|(_, n)| *n as u64).collect::<Vec<_>>());
    Stoichiometry { counts, ratio }
}

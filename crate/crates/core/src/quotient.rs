//! The honeycomb group reduced modulo the translations `N·Z³`.
//!
//! Every subgroup that contains `N·Z³` is determined by its image in the finite
//! quotient, so membership, indices and cosets computed there are exact for such
//! subgroups. A [`TranslationCertificate`] is the proof that a subgroup contains
//! `N·Z³`: three generator words that evaluate, as exact isometries, to the
//! translations by `N` along each axis.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::isometry::{eval_word, GeneratorWord, Isometry, Letter, SignedPermutation};
use crate::orbits::TorusVertex;

/// Word-length radius used by [`TorusSubgroup::certify_translations`] when none is given.
pub const DEFAULT_CERTIFICATE_RADIUS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("modulus must be an even integer >= 2, got {0}")]
    InvalidModulus(u32),
    #[error("subgroup <{sub}> is not contained in <{sup}>")]
    NotContained { sub: String, sup: String },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("no translation certificate for <{subgroup}> at modulus {modulus} within word radius {radius}")]
    CertificateNotFound { subgroup: String, modulus: u32, radius: usize },
}

/// An element of the quotient group: signed permutation plus translation reduced into `[0, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusElement {
    pub linear: SignedPermutation,
    pub translation: [u32; 3],
    pub modulus: u32,
}

impl TorusElement {
    pub fn identity(modulus: u32) -> Self {
        Self {
            linear: SignedPermutation::IDENTITY,
            translation: [0; 3],
            modulus,
        }
    }

    /// The projection `Isometry → TorusElement`.
    pub fn project(g: &Isometry, modulus: u32) -> Self {
        let n = modulus as i64;
        Self {
            linear: g.linear,
            translation: g.translation.map(|t| t.rem_euclid(n) as u32),
            modulus,
        }
    }

    /// The lift with translation in `[0, N)`.
    pub fn lift(&self) -> Isometry {
        Isometry::new(self.linear, self.translation.map(i64::from))
    }

    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        Self::project(&self.lift().compose(&other.lift()), self.modulus)
    }

    pub fn inverse(&self) -> Self {
        Self::project(&self.lift().inverse(), self.modulus)
    }

    pub fn apply(&self, v: TorusVertex) -> TorusVertex {
        debug_assert_eq!(self.modulus, v.modulus());
        TorusVertex::reduce(self.lift().apply(v.lift()), self.modulus)
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation == [0; 3]
    }
}

impl PartialOrd for TorusElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: flattened linear part, then translation.
impl Ord for TorusElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.linear, self.translation, self.modulus).cmp(&(other.linear, other.translation, other.modulus))
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.lift(), self.modulus)
    }
}

/// Breadth-first closure of `generators` under right multiplication, sorted canonically.
fn closure(generators: &[TorusElement], modulus: u32) -> Vec<TorusElement> {
    let identity = TorusElement::identity(modulus);
    let mut seen: HashSet<TorusElement> = HashSet::from([identity]);
    let mut queue = VecDeque::from([identity]);
    while let Some(a) = queue.pop_front() {
        for g in generators {
            let b = a.compose(g);
            if seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    let mut elements: Vec<TorusElement> = seen.into_iter().collect();
    elements.sort();
    elements
}

fn describe(words: &[GeneratorWord]) -> String {
    words.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// The full honeycomb group modulo `N·Z³`, of order `48·N³`.
#[derive(Debug, Clone)]
pub struct TorusGroup {
    modulus: u32,
    elements: Vec<TorusElement>,
    generator_words: Vec<GeneratorWord>,
}

impl TorusGroup {
    pub fn build(modulus: u32) -> Result<Self, QuotientError> {
        if modulus < 2 || !modulus.is_multiple_of(2) {
            return Err(QuotientError::InvalidModulus(modulus));
        }
        let generator_words: Vec<GeneratorWord> = Letter::ALL.iter().map(|&l| GeneratorWord::from(l)).collect();
        let gens: Vec<TorusElement> = generator_words
            .iter()
            .map(|w| TorusElement::project(&eval_word(w), modulus))
            .collect();
        Ok(Self {
            modulus,
            elements: closure(&gens, modulus),
            generator_words,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[TorusElement] {
        &self.elements
    }

    pub fn generator_words(&self) -> &[GeneratorWord] {
        &self.generator_words
    }

    pub fn project(&self, g: &Isometry) -> TorusElement {
        TorusElement::project(g, self.modulus)
    }

    /// The subgroup generated by the images of `words`.
    pub fn subgroup(&self, words: &[GeneratorWord]) -> TorusSubgroup {
        let generators: Vec<TorusElement> = words.iter().map(|w| self.project(&eval_word(w))).collect();
        let elements = closure(&generators, self.modulus);
        TorusSubgroup {
            modulus: self.modulus,
            group_order: self.order(),
            members: elements.iter().copied().collect(),
            elements,
            generator_words: words.to_vec(),
            generators,
            certificate: None,
        }
    }

    /// The whole group as a subgroup of itself, generated by `P, Q, R, S`.
    pub fn as_subgroup(&self) -> TorusSubgroup {
        self.subgroup(&self.generator_words)
    }
}

/// Witness words proving `N·Z³` lies in a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationCertificate {
    pub modulus: u32,
    /// Words evaluating exactly to translations by `(N,0,0)`, `(0,N,0)`, `(0,0,N)`.
    pub witnesses: [GeneratorWord; 3],
    /// Word radius (in subgroup generators) at which the search succeeded.
    pub radius: usize,
}

impl TranslationCertificate {
    pub fn targets(&self) -> [[i64; 3]; 3] {
        let n = self.modulus as i64;
        [[n, 0, 0], [0, n, 0], [0, 0, n]]
    }

    /// Re-evaluates every witness with exact isometry arithmetic.
    pub fn verify(&self) -> bool {
        self.witnesses
            .iter()
            .zip(self.targets())
            .all(|(w, t)| eval_word(w).as_translation() == Some(t))
    }
}

/// A subgroup of the quotient group.
#[derive(Debug, Clone)]
pub struct TorusSubgroup {
    modulus: u32,
    group_order: usize,
    elements: Vec<TorusElement>,
    members: HashSet<TorusElement>,
    generator_words: Vec<GeneratorWord>,
    generators: Vec<TorusElement>,
    certificate: Option<TranslationCertificate>,
}

impl PartialEq for TorusSubgroup {
    /// Subgroups are equal when they have the same elements.
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.elements == other.elements
    }
}

impl Eq for TorusSubgroup {}

impl TorusSubgroup {
    /// A subgroup given by its element set, e.g. a computed color group. Elements need not be sorted.
    ///
    /// The caller guarantees closure; the set itself serves as generating set.
    pub fn from_elements(modulus: u32, group_order: usize, mut elements: Vec<TorusElement>) -> Self {
        elements.sort();
        elements.dedup();
        Self {
            modulus,
            group_order,
            members: elements.iter().copied().collect(),
            generators: elements.clone(),
            elements,
            generator_words: Vec::new(),
            certificate: None,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Order of the ambient quotient group.
    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn elements(&self) -> &[TorusElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[TorusElement] {
        &self.generators
    }

    pub fn generator_words(&self) -> &[GeneratorWord] {
        &self.generator_words
    }

    pub fn certificate(&self) -> Option<&TranslationCertificate> {
        self.certificate.as_ref()
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.is_some()
    }

    pub fn contains(&self, g: &TorusElement) -> bool {
        self.members.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &TorusSubgroup) -> bool {
        self.modulus == other.modulus && self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_closed(&self) -> bool {
        self.contains(&TorusElement::identity(self.modulus))
            && self
                .elements
                .iter()
                .all(|a| self.contains(&a.inverse()) && self.generators.iter().all(|g| self.contains(&a.compose(g))))
    }

    /// Human-readable generator list, e.g. `Q, R, S, PQP`.
    pub fn describe(&self) -> String {
        if self.generator_words.is_empty() {
            format!("{} elements", self.order())
        } else {
            describe(&self.generator_words)
        }
    }

    /// Searches products of at most `radius` generator words (as exact isometries) for enough
    /// pure translations to generate `N·Z³`.
    pub fn certify_translations(&self, radius: usize) -> Result<TorusSubgroup, QuotientError> {
        let not_found = || QuotientError::CertificateNotFound {
            subgroup: self.describe(),
            modulus: self.modulus,
            radius,
        };
        if self.generator_words.is_empty() {
            return Err(not_found());
        }
        let n = self.modulus as i64;
        let targets = [[n, 0, 0], [0, n, 0], [0, 0, n]];
        let gens: Vec<Isometry> = self.generator_words.iter().map(eval_word).collect();

        let mut lattice = LatticeBuilder::default();
        let mut translation_words: Vec<GeneratorWord> = Vec::new();
        let mut seen: HashSet<Isometry> = HashSet::from([Isometry::IDENTITY]);
        let mut layer: Vec<(Isometry, GeneratorWord)> = vec![(Isometry::IDENTITY, GeneratorWord::identity())];

        for depth in 1..=radius {
            let mut next = Vec::new();
            for (element, word) in &layer {
                for (g, gw) in gens.iter().zip(&self.generator_words) {
                    let product = element.compose(g);
                    if !seen.insert(product) {
                        continue;
                    }
                    let product_word = word.concat(gw);
                    if let Some(t) = product.as_translation() {
                        translation_words.push(product_word.clone());
                        lattice.insert(t, translation_words.len() - 1);
                    }
                    next.push((product, product_word));
                }
            }
            layer = next;

            let combos: Option<Vec<BTreeMap<usize, i64>>> = targets.iter().map(|t| lattice.express(*t)).collect();
            if let Some(combos) = combos {
                let witnesses: Vec<GeneratorWord> = combos
                    .iter()
                    .map(|combo| combination_word(combo, &translation_words))
                    .collect();
                let certificate = TranslationCertificate {
                    modulus: self.modulus,
                    witnesses: [witnesses[0].clone(), witnesses[1].clone(), witnesses[2].clone()],
                    radius: depth,
                };
                assert!(certificate.verify(), "translation witness failed exact re-evaluation");
                let mut out = self.clone();
                out.certificate = Some(certificate);
                return Ok(out);
            }
            if layer.is_empty() {
                break;
            }
        }
        Err(not_found())
    }
}

/// Concatenates translation words according to integer coefficients. Translations commute,
/// and a negative coefficient uses the reversed (inverse) word.
fn combination_word(combo: &BTreeMap<usize, i64>, words: &[GeneratorWord]) -> GeneratorWord {
    combo.iter().fold(GeneratorWord::identity(), |acc, (&idx, &c)| {
        let w = if c < 0 { words[idx].reversed() } else { words[idx].clone() };
        acc.concat(&w.pow(c.unsigned_abs() as usize))
    })
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A lattice vector with its coefficients over the inserted vectors.
type TrackedRow = ([i64; 3], BTreeMap<usize, i64>);

/// Integer row-echelon basis of a lattice in Z³, tracking each row as a combination of inserted vectors.
#[derive(Debug, Default)]
struct LatticeBuilder {
    /// Indexed by pivot column.
    rows: [Option<TrackedRow>; 3],
}

fn axpy(a: i64, x: &BTreeMap<usize, i64>, b: i64, y: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
    let mut out: BTreeMap<usize, i64> = BTreeMap::new();
    for (&k, &v) in x {
        *out.entry(k).or_default() += a * v;
    }
    for (&k, &v) in y {
        *out.entry(k).or_default() += b * v;
    }
    out.retain(|_, v| *v != 0);
    out
}

impl LatticeBuilder {
    fn insert(&mut self, vector: [i64; 3], source: usize) {
        let mut v = vector;
        let mut combo = BTreeMap::from([(source, 1)]);
        for col in 0..3 {
            if v[col] == 0 {
                continue;
            }
            match self.rows[col].take() {
                None => {
                    self.rows[col] = Some((v, combo));
                    return;
                }
                Some((row, row_combo)) => {
                    let (g, a, b) = extended_gcd(row[col], v[col]);
                    let (ra, vb) = (row[col] / g, v[col] / g);
                    let new_row = [0, 1, 2].map(|i| a * row[i] + b * v[i]);
                    let new_row_combo = axpy(a, &row_combo, b, &combo);
                    let rest = [0, 1, 2].map(|i| vb * row[i] - ra * v[i]);
                    combo = axpy(vb, &row_combo, -ra, &combo);
                    v = rest;
                    self.rows[col] = Some((new_row, new_row_combo));
                }
            }
        }
    }

    /// Integer coefficients expressing `target`, if it lies in the lattice.
    fn express(&self, target: [i64; 3]) -> Option<BTreeMap<usize, i64>> {
        let mut t = target;
        let mut combo = BTreeMap::new();
        for col in 0..3 {
            if t[col] == 0 {
                continue;
            }
            let (row, row_combo) = self.rows[col].as_ref()?;
            if t[col] % row[col] != 0 {
                return None;
            }
            let k = t[col] / row[col];
            t = [0, 1, 2].map(|i| t[i] - k * row[i]);
            combo = axpy(1, &combo, k, row_combo);
        }
        Some(combo)
    }
}

/// An index, flagged exact only when the subgroup carries a translation certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Index {
    pub value: usize,
    pub exact: bool,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} (image index, lower bound)", self.value)
        }
    }
}

/// `[G_N : S]`.
pub fn index(group: &TorusGroup, sub: &TorusSubgroup) -> Index {
    Index {
        value: group.order() / sub.order(),
        exact: sub.is_certified(),
    }
}

/// `[H : J]` for `J ≤ H`.
pub fn relative_index(sup: &TorusSubgroup, sub: &TorusSubgroup) -> Result<Index, QuotientError> {
    if !sub.is_subgroup_of(sup) {
        return Err(QuotientError::NotContained {
            sub: sub.describe(),
            sup: sup.describe(),
        });
    }
    Ok(Index {
        value: sup.order() / sub.order(),
        exact: sup.is_certified() && sub.is_certified(),
    })
}

/// Membership answer; `ImageOnly` when the subgroup is uncertified and the answer only
/// concerns its image modulo `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Exact(bool),
    ImageOnly(bool),
}

impl Membership {
    pub fn value(self) -> bool {
        match self {
            Membership::Exact(b) | Membership::ImageOnly(b) => b,
        }
    }
}

pub fn member(sub: &TorusSubgroup, g: &Isometry) -> Membership {
    let inside = sub.contains(&TorusElement::project(g, sub.modulus));
    if sub.is_certified() {
        Membership::Exact(inside)
    } else {
        Membership::ImageOnly(inside)
    }
}

/// Partition of `H` into left cosets `hJ`.
///
/// Coset ids follow the canonical order of each coset's smallest element.
#[derive(Debug, Clone)]
pub struct CosetTable {
    coset_of: HashMap<TorusElement, usize>,
    representatives: Vec<TorusElement>,
    cosets: Vec<Vec<TorusElement>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn coset_of(&self, h: &TorusElement) -> Option<usize> {
        self.coset_of.get(h).copied()
    }

    /// Smallest element of each coset.
    pub fn representatives(&self) -> &[TorusElement] {
        &self.representatives
    }

    pub fn coset(&self, id: usize) -> &[TorusElement] {
        &self.cosets[id]
    }

    /// Id of `J` itself (the coset of the identity).
    pub fn identity_coset(&self) -> usize {
        let modulus = self.representatives[0].modulus;
        self.coset_of[&TorusElement::identity(modulus)]
    }
}

pub fn left_cosets(sup: &TorusSubgroup, sub: &TorusSubgroup) -> Result<CosetTable, QuotientError> {
    if sup.modulus != sub.modulus {
        return Err(QuotientError::ModulusMismatch(sup.modulus, sub.modulus));
    }
    if !sub.is_subgroup_of(sup) {
        return Err(QuotientError::NotContained {
            sub: sub.describe(),
            sup: sup.describe(),
        });
    }
    let mut coset_of = HashMap::with_capacity(sup.order());
    let mut representatives = Vec::new();
    let mut cosets = Vec::new();
    for h in &sup.elements {
        if coset_of.contains_key(h) {
            continue;
        }
        let id = representatives.len();
        let mut coset: Vec<TorusElement> = sub.elements.iter().map(|j| h.compose(j)).collect();
        coset.sort();
        for g in &coset {
            coset_of.insert(*g, id);
        }
        representatives.push(*h);
        cosets.push(coset);
    }
    Ok(CosetTable {
        coset_of,
        representatives,
        cosets,
    })
}

//! Vertex orbits and stabilizers on the `N`-torus of honeycomb vertices.

use std::collections::VecDeque;
use std::fmt;

use crate::isometry::{GeneratorWord, Vertex};
use crate::quotient::{TorusElement, TorusSubgroup};

/// A vertex of the honeycomb reduced modulo `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusVertex {
    x: u32,
    y: u32,
    z: u32,
    modulus: u32,
}

impl TorusVertex {
    /// Panics if a coordinate is outside `[0, modulus)`.
    pub fn new(x: u32, y: u32, z: u32, modulus: u32) -> Self {
        assert!(x < modulus && y < modulus && z < modulus, "coordinate out of range");
        Self { x, y, z, modulus }
    }

    pub fn reduce(v: Vertex, modulus: u32) -> Self {
        let n = modulus as i64;
        let [x, y, z] = v.coords().map(|c| c.rem_euclid(n) as u32);
        Self { x, y, z, modulus }
    }

    pub fn lift(&self) -> Vertex {
        Vertex::new(self.x.into(), self.y.into(), self.z.into())
    }

    pub fn coords(&self) -> [u32; 3] {
        [self.x, self.y, self.z]
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Position in the lexicographic enumeration of the torus.
    pub fn linear_index(&self) -> usize {
        let n = self.modulus as usize;
        (self.x as usize * n + self.y as usize) * n + self.z as usize
    }

    pub fn from_linear_index(index: usize, modulus: u32) -> Self {
        let n = modulus as usize;
        Self::new((index / (n * n)) as u32, (index / n % n) as u32, (index % n) as u32, modulus)
    }

    /// All `N³` vertices in lexicographic order.
    pub fn all(modulus: u32) -> impl Iterator<Item = TorusVertex> {
        let n = modulus as usize;
        (0..n * n * n).map(move |i| Self::from_linear_index(i, modulus))
    }
}

impl fmt::Display for TorusVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// The orbits of a subgroup on the torus vertices.
#[derive(Debug, Clone)]
pub struct OrbitDecomposition {
    modulus: u32,
    orbits: Vec<Vec<TorusVertex>>,
    orbit_of: Vec<usize>,
    witness: Vec<TorusElement>,
    witness_word: Vec<GeneratorWord>,
    exact: bool,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Orbits in order of their representatives; each orbit sorted lexicographically.
    pub fn orbits(&self) -> &[Vec<TorusVertex>] {
        &self.orbits
    }

    pub fn orbit(&self, i: usize) -> &[TorusVertex] {
        &self.orbits[i]
    }

    /// The lexicographically smallest vertex of orbit `i`.
    pub fn representative(&self, i: usize) -> TorusVertex {
        self.orbits[i][0]
    }

    pub fn representatives(&self) -> Vec<TorusVertex> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn orbit_of(&self, v: TorusVertex) -> usize {
        self.orbit_of[v.linear_index()]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    /// An element of the subgroup sending the representative of `v`'s orbit to `v`.
    pub fn witness(&self, v: TorusVertex) -> TorusElement {
        self.witness[v.linear_index()]
    }

    /// A word over the subgroup's generator words evaluating to [`Self::witness`] modulo `N`.
    pub fn witness_word(&self, v: TorusVertex) -> &GeneratorWord {
        &self.witness_word[v.linear_index()]
    }

    /// Whether the acting subgroup was certified to contain `N·Z³`.
    pub fn is_exact(&self) -> bool {
        self.exact
    }
}

/// Breadth-first orbit expansion from each unvisited vertex, using only the subgroup generators.
pub fn decompose(sub: &TorusSubgroup) -> OrbitDecomposition {
    let modulus = sub.modulus();
    let count = (modulus as usize).pow(3);
    let identity = TorusElement::identity(modulus);
    let mut orbit_of = vec![usize::MAX; count];
    let mut witness = vec![identity; count];
    let mut witness_word = vec![GeneratorWord::identity(); count];
    let mut orbits = Vec::new();
    // Generator words are only meaningful when the generators came from words.
    let words = sub.generator_words();
    let has_words = words.len() == sub.generators().len();

    for start in TorusVertex::all(modulus) {
        if orbit_of[start.linear_index()] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![start];
        orbit_of[start.linear_index()] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for (k, g) in sub.generators().iter().enumerate() {
                let v = g.apply(u);
                let slot = v.linear_index();
                if orbit_of[slot] != usize::MAX {
                    continue;
                }
                orbit_of[slot] = id;
                witness[slot] = g.compose(&witness[u.linear_index()]);
                if has_words {
                    witness_word[slot] = words[k].concat(&witness_word[u.linear_index()]);
                }
                members.push(v);
                queue.push_back(v);
            }
        }
        members.sort();
        orbits.push(members);
    }
    OrbitDecomposition {
        modulus,
        orbits,
        orbit_of,
        witness,
        witness_word,
        exact: sub.is_certified(),
    }
}

/// The elements of a subgroup fixing a torus vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    pub vertex: TorusVertex,
    pub elements: Vec<TorusElement>,
}

impl Stabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &TorusElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

pub fn stabilizer(sub: &TorusSubgroup, v: TorusVertex) -> Stabilizer {
    Stabilizer {
        vertex: v,
        elements: sub.elements().iter().filter(|g| g.apply(v) == v).copied().collect(),
    }
}

/// First stabilizer element of `v` in `sub` that lies outside `j`, if any.
pub fn stabilizer_escape(sub: &TorusSubgroup, v: TorusVertex, j: &TorusSubgroup) -> Option<TorusElement> {
    sub.elements().iter().find(|g| g.apply(v) == v && !j.contains(g)).copied()
}

/// `Stab_S(v) ≤ J`.
pub fn stabilizer_contained(sub: &TorusSubgroup, v: TorusVertex, j: &TorusSubgroup) -> bool {
    stabilizer_escape(sub, v, j).is_none()
}

//! Exact integer isometries of the cubic honeycomb {4,3,4}.
//!
//! Honeycomb vertices are the integer points of 3-space. Every symmetry of the
//! honeycomb is an affine map `v ↦ L·v + t` with `L` a signed permutation
//! matrix and `t` an integer vector, so all arithmetic here is exact.
//!
//! The four generating reflections are realized on the unit cube `[0,1]³`:
//!
//! | letter | mirror   | map                       |
//! |--------|----------|---------------------------|
//! | `P`    | `z = ½`  | `(x, y, z) ↦ (x, y, 1−z)` |
//! | `Q`    | `z = x`  | `(x, y, z) ↦ (z, y, x)`   |
//! | `R`    | `x = y`  | `(x, y, z) ↦ (y, x, z)`   |
//! | `S`    | `y = 0`  | `(x, y, z) ↦ (x, −y, z)`  |
//!
//! Words compose like functions: the rightmost letter acts first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A honeycomb vertex (integer lattice point).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex::new(0, 0, 0);

    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Self { x, y, z }
    }

    pub const fn from_coords(c: [i64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub const fn coords(&self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A 3×3 signed permutation matrix.
///
/// Row `i` has its single nonzero entry `sign[i]` in column `perm[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: [u8; 3],
    sign: [i8; 3],
}

impl SignedPermutation {
    pub const IDENTITY: SignedPermutation = SignedPermutation {
        perm: [0, 1, 2],
        sign: [1, 1, 1],
    };

    /// Returns `None` unless `perm` is a permutation of `0..3` and every sign is ±1.
    pub fn new(perm: [u8; 3], sign: [i8; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p as usize] {
                return None;
            }
            seen[p as usize] = true;
        }
        if sign.iter().any(|s| s.abs() != 1) {
            return None;
        }
        Some(Self { perm, sign })
    }

    /// Recovers a signed permutation from a dense integer matrix, if it is one.
    pub fn from_matrix(m: &[[i64; 3]; 3]) -> Option<Self> {
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for (i, row) in m.iter().enumerate() {
            let nonzero: Vec<usize> = (0..3).filter(|&j| row[j] != 0).collect();
            if nonzero.len() != 1 {
                return None;
            }
            let j = nonzero[0];
            if row[j].abs() != 1 {
                return None;
            }
            perm[i] = j as u8;
            sign[i] = row[j] as i8;
        }
        Self::new(perm, sign)
    }

    /// All 48 signed permutations (the full octahedral group O_h), in canonical order.
    pub fn all() -> Vec<Self> {
        const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for bits in 0..8u8 {
                let sign = [0, 1, 2].map(|i| if bits >> i & 1 == 1 { -1 } else { 1 });
                out.push(Self { perm, sign });
            }
        }
        out.sort();
        out
    }

    pub fn matrix(&self) -> [[i8; 3]; 3] {
        let mut m = [[0i8; 3]; 3];
        for i in 0..3 {
            m[i][self.perm[i] as usize] = self.sign[i];
        }
        m
    }

    /// Row-major flattening; the canonical sort key.
    pub fn flattened(&self) -> [i8; 9] {
        let m = self.matrix();
        let mut out = [0i8; 9];
        for i in 0..3 {
            out[3 * i..3 * i + 3].copy_from_slice(&m[i]);
        }
        out
    }

    pub fn apply(&self, v: [i64; 3]) -> [i64; 3] {
        [0, 1, 2].map(|i| self.sign[i] as i64 * v[self.perm[i] as usize])
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for i in 0..3 {
            let k = self.perm[i] as usize;
            perm[i] = other.perm[k];
            sign[i] = self.sign[i] * other.sign[k];
        }
        Self { perm, sign }
    }

    /// Transpose, which is the inverse for orthogonal matrices.
    pub fn inverse(&self) -> Self {
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for i in 0..3 {
            let j = self.perm[i] as usize;
            perm[j] = i as u8;
            sign[j] = self.sign[i];
        }
        Self { perm, sign }
    }

    pub fn determinant(&self) -> i8 {
        let parity = match self.perm {
            [0, 1, 2] | [1, 2, 0] | [2, 0, 1] => 1,
            _ => -1,
        };
        parity * self.sign.iter().product::<i8>()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

impl PartialOrd for SignedPermutation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedPermutation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.flattened().cmp(&other.flattened())
    }
}

/// An exact affine isometry `v ↦ linear·v + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    pub linear: SignedPermutation,
    pub translation: [i64; 3],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        linear: SignedPermutation::IDENTITY,
        translation: [0, 0, 0],
    };

    pub const fn new(linear: SignedPermutation, translation: [i64; 3]) -> Self {
        Self { linear, translation }
    }

    pub fn translation_by(t: [i64; 3]) -> Self {
        Self::new(SignedPermutation::IDENTITY, t)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let moved = self.linear.apply(other.translation);
        Self {
            linear: self.linear.compose(&other.linear),
            translation: [0, 1, 2].map(|i| moved[i] + self.translation[i]),
        }
    }

    pub fn inverse(&self) -> Self {
        let linear = self.linear.inverse();
        let back = linear.apply(self.translation);
        Self {
            linear,
            translation: back.map(|c| -c),
        }
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        let moved = self.linear.apply(v.coords());
        Vertex::from_coords([0, 1, 2].map(|i| moved[i] + self.translation[i]))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// The translation vector, if this is a pure translation.
    pub fn as_translation(&self) -> Option<[i64; 3]> {
        self.linear.is_identity().then_some(self.translation)
    }

    /// Order of the element, or `None` if it exceeds `bound` (e.g. translations have infinite order).
    pub fn order(&self, bound: u32) -> Option<u32> {
        let mut power = *self;
        for k in 1..=bound {
            if power.is_identity() {
                return Some(k);
            }
            power = self.compose(&power);
        }
        None
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const AXES: [char; 3] = ['x', 'y', 'z'];
        let m = self.linear.matrix();
        let parts: Vec<String> = (0..3)
            .map(|i| {
                let j = self.linear.perm[i] as usize;
                let var = if m[i][j] < 0 { format!("-{}", AXES[j]) } else { AXES[j].to_string() };
                match self.translation[i] {
                    0 => var,
                    t if m[i][j] < 0 => format!("{t}{var}"),
                    t if t > 0 => format!("{var}+{t}"),
                    t => format!("{var}{t}"),
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// One of the four generating reflections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    P,
    Q,
    R,
    S,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::P, Letter::Q, Letter::R, Letter::S];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'P' => Some(Letter::P),
            'Q' => Some(Letter::Q),
            'R' => Some(Letter::R),
            'S' => Some(Letter::S),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::P => 'P',
            Letter::Q => 'Q',
            Letter::R => 'R',
            Letter::S => 'S',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A product of generators, written left to right; the rightmost letter acts first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorWord(Vec<Letter>);

impl GeneratorWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The reversed word. Every generator is an involution, so this names the inverse element.
    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    pub fn pow(&self, exponent: usize) -> Self {
        Self(self.0.repeat(exponent))
    }
}

impl From<Letter> for GeneratorWord {
    fn from(l: Letter) -> Self {
        Self(vec![l])
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        self.0.iter().try_for_each(|l| write!(f, "{l}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("empty word")]
    Empty,
    #[error("unexpected character {found:?} at position {position} in {input:?}")]
    UnexpectedChar { input: String, position: usize, found: char },
    #[error("unexpected end of input in {input:?}")]
    UnexpectedEnd { input: String },
    #[error("missing exponent after ')' at position {position} in {input:?}")]
    MissingExponent { input: String, position: usize },
    #[error("exponent too large in {input:?}")]
    ExponentOverflow { input: String },
}

/// Recursive-descent parser for `word := term+ ; term := letter | "(" word ")" "^" integer`.
struct WordParser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

const MAX_EXPONENT: usize = 1 << 16;

impl<'a> WordParser<'a> {
    fn new(input: &'a str) -> Self {
        Self {
            input,
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn unexpected(&self) -> WordParseError {
        match self.chars.get(self.pos) {
            Some(&found) => WordParseError::UnexpectedChar {
                input: self.input.to_string(),
                position: self.pos,
                found,
            },
            None => WordParseError::UnexpectedEnd {
                input: self.input.to_string(),
            },
        }
    }

    fn word(&mut self) -> Result<Vec<Letter>, WordParseError> {
        let mut letters = Vec::new();
        let mut terms = 0;
        while let Some(&c) = self.chars.get(self.pos) {
            if let Some(l) = Letter::from_char(c) {
                self.pos += 1;
                letters.push(l);
            } else if c == '(' {
                self.pos += 1;
                let inner = self.word()?;
                if self.chars.get(self.pos) != Some(&')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                if self.chars.get(self.pos) != Some(&'^') {
                    return Err(WordParseError::MissingExponent {
                        input: self.input.to_string(),
                        position: self.pos,
                    });
                }
                self.pos += 1;
                let exponent = self.integer()?;
                if inner.len().saturating_mul(exponent) > MAX_EXPONENT {
                    return Err(WordParseError::ExponentOverflow {
                        input: self.input.to_string(),
                    });
                }
                letters.extend(inner.repeat(exponent));
            } else {
                break;
            }
            terms += 1;
        }
        if terms == 0 {
            return Err(self.unexpected());
        }
        Ok(letters)
    }

    fn integer(&mut self) -> Result<usize, WordParseError> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse::<usize>()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| WordParseError::ExponentOverflow {
                input: self.input.to_string(),
            })
    }
}

impl FromStr for GeneratorWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(WordParseError::Empty);
        }
        let mut parser = WordParser::new(s);
        let letters = parser.word()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.unexpected());
        }
        Ok(Self(letters))
    }
}

/// Parses a whitespace-separated list of words, e.g. `"Q R S (SRQPQR)^2"`.
pub fn parse_word_list(s: &str) -> Result<Vec<GeneratorWord>, WordParseError> {
    let words: Vec<&str> = s.split_whitespace().collect();
    if words.is_empty() {
        return Err(WordParseError::Empty);
    }
    words.into_iter().map(str::parse).collect()
}

/// A concrete choice of the four generating isometries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    generators: [Isometry; 4],
}

impl Realization {
    /// The fixed realization on the unit cube described in the module docs.
    pub fn standard() -> Self {
        let p = Isometry::new(SignedPermutation::new([0, 1, 2], [1, 1, -1]).unwrap(), [0, 0, 1]);
        let q = Isometry::new(SignedPermutation::new([2, 1, 0], [1, 1, 1]).unwrap(), [0, 0, 0]);
        let r = Isometry::new(SignedPermutation::new([1, 0, 2], [1, 1, 1]).unwrap(), [0, 0, 0]);
        let s = Isometry::new(SignedPermutation::new([0, 1, 2], [1, -1, 1]).unwrap(), [0, 0, 0]);
        Self {
            generators: [p, q, r, s],
        }
    }

    /// Fault-injection realization: `P` becomes the reflection in `y + z = 1`.
    ///
    /// Its mirror meets `m_Q` at π/3, so `(PQ)⁴` is no longer the identity.
    pub fn perturbed() -> Self {
        let mut out = Self::standard();
        out.generators[0] = Isometry::new(SignedPermutation::new([0, 2, 1], [1, -1, -1]).unwrap(), [0, 1, 1]);
        out
    }

    pub fn generator(&self, letter: Letter) -> Isometry {
        self.generators[letter as usize]
    }

    pub fn eval(&self, word: &GeneratorWord) -> Isometry {
        word.letters()
            .iter()
            .fold(Isometry::IDENTITY, |acc, &l| acc.compose(&self.generator(l)))
    }
}

impl Default for Realization {
    fn default() -> Self {
        Self::standard()
    }
}

/// The generator for `letter` in the standard realization.
pub fn generator(letter: Letter) -> Isometry {
    Realization::standard().generator(letter)
}

/// Evaluates a word in the standard realization.
pub fn eval_word(word: &GeneratorWord) -> Isometry {
    Realization::standard().eval(word)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorCheck {
    pub relator: String,
    pub word: GeneratorWord,
    /// Exponent `m` in the relator `(ab)^m`.
    pub exponent: u32,
    pub passed: bool,
    /// Exact order of the base product `ab`, when finite and small.
    pub base_order: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationReport {
    pub relators: Vec<RelatorCheck>,
}

impl PresentationReport {
    pub fn all_passed(&self) -> bool {
        self.relators.iter().all(|r| r.passed)
    }
}

/// The ten relators of the Coxeter presentation of the honeycomb group.
pub fn relators() -> Vec<(String, GeneratorWord, u32)> {
    use Letter::*;
    let pair = |a: Letter, b: Letter, m: u32| {
        let base = GeneratorWord::new(vec![a, b]);
        let name = if a == b { format!("{a}^2") } else { format!("({a}{b})^{m}") };
        (name, if a == b { base } else { base.pow(m as usize) }, m)
    };
    vec![
        pair(P, P, 2),
        pair(Q, Q, 2),
        pair(R, R, 2),
        pair(S, S, 2),
        pair(P, Q, 4),
        pair(Q, R, 3),
        pair(R, S, 4),
        pair(P, R, 2),
        pair(P, S, 2),
        pair(Q, S, 2),
    ]
}

pub fn check_presentation(realization: &Realization) -> PresentationReport {
    let relators = relators()
        .into_iter()
        .map(|(relator, word, exponent)| {
            let passed = realization.eval(&word).is_identity();
            let letters = word.letters();
            let base = if letters[0] == letters[1] {
                GeneratorWord::from(letters[0])
            } else {
                GeneratorWord::new(letters[..2].to_vec())
            };
            RelatorCheck {
                relator,
                base_order: realization.eval(&base).order(24),
                word,
                exponent,
                passed,
            }
        })
        .collect();
    PresentationReport { relators }
}

/// A dihedral angle between two mirrors, identified exactly from the squared cosine of their normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Angle {
    /// π / k
    PiOver(u32),
    /// Squared cosine `num/den` that is not one of the recognized values.
    Other { cos_sq_num: i64, cos_sq_den: i64 },
    /// One of the generators is not a reflection.
    Undefined,
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::PiOver(k) => write!(f, "pi/{k}"),
            Angle::Other { cos_sq_num, cos_sq_den } => write!(f, "acos(sqrt({cos_sq_num}/{cos_sq_den}))"),
            Angle::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DihedralAngle {
    pub mirrors: (Letter, Letter),
    pub angle: Angle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DihedralReport {
    pub angles: Vec<DihedralAngle>,
    pub matches_expected: bool,
}

/// Expected multiset of fundamental-tetrahedron dihedral angles.
pub const EXPECTED_DIHEDRAL: [Angle; 6] = [
    Angle::PiOver(4),
    Angle::PiOver(3),
    Angle::PiOver(4),
    Angle::PiOver(2),
    Angle::PiOver(2),
    Angle::PiOver(2),
];

/// Integer mirror normal of a reflection: any nonzero row of `I − L`.
///
/// Returns `None` if the isometry is not a reflection in a plane.
pub fn mirror_normal(reflection: &Isometry) -> Option<[i64; 3]> {
    if reflection.linear.determinant() != -1 || !reflection.compose(reflection).is_identity() {
        return None;
    }
    let m = reflection.linear.matrix();
    let rows: Vec<[i64; 3]> = (0..3)
        .map(|i| [0, 1, 2].map(|j| i64::from(i == j) - m[i][j] as i64))
        .filter(|r| r.iter().any(|&c| c != 0))
        .collect();
    // A point reflection or rotoreflection has rank(I − L) > 1.
    let first = *rows.first()?;
    let parallel = |r: &[i64; 3]| {
        let cross = [
            first[1] * r[2] - first[2] * r[1],
            first[2] * r[0] - first[0] * r[2],
            first[0] * r[1] - first[1] * r[0],
        ];
        cross == [0, 0, 0]
    };
    rows.iter().all(parallel).then_some(first)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn angle_between(n1: [i64; 3], n2: [i64; 3]) -> Angle {
    let dot: i64 = (0..3).map(|i| n1[i] * n2[i]).sum();
    let num = dot * dot;
    let den = n1.iter().map(|c| c * c).sum::<i64>() * n2.iter().map(|c| c * c).sum::<i64>();
    let g = gcd(num, den).max(1);
    match (num / g, den / g) {
        (0, _) => Angle::PiOver(2),
        (1, 4) => Angle::PiOver(3),
        (1, 2) => Angle::PiOver(4),
        (3, 4) => Angle::PiOver(6),
        (cos_sq_num, cos_sq_den) => Angle::Other { cos_sq_num, cos_sq_den },
    }
}

pub fn dihedral_angle_check(realization: &Realization) -> DihedralReport {
    use Letter::*;
    let pairs = [(P, Q), (Q, R), (R, S), (P, R), (P, S), (Q, S)];
    let angles: Vec<DihedralAngle> = pairs
        .iter()
        .map(|&(a, b)| {
            let angle = match (
                mirror_normal(&realization.generator(a)),
                mirror_normal(&realization.generator(b)),
            ) {
                (Some(n1), Some(n2)) => angle_between(n1, n2),
                _ => Angle::Undefined,
            };
            DihedralAngle { mirrors: (a, b), angle }
        })
        .collect();
    let mut found: Vec<Angle> = angles.iter().map(|a| a.angle).collect();
    let mut expected = EXPECTED_DIHEDRAL.to_vec();
    found.sort();
    expected.sort();
    DihedralReport {
        matches_expected: found == expected,
        angles,
    }
}

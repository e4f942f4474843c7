//! Brute-force reference computations on the N-torus, written without the library's group code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// `v ↦ m·v + t (mod n)` with `m` a signed permutation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Op {
    pub m: [[i64; 3]; 3],
    pub t: [i64; 3],
}

impl Op {
    pub fn apply(&self, v: [i64; 3], n: i64) -> [i64; 3] {
        let mut out = [0; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2] + self.t[i]).rem_euclid(n);
        }
        out
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Op, n: i64) -> Op {
        let mut m = [[0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        let moved = self.apply(other.t, n);
        Op { m, t: moved }
    }
}

/// Every signed permutation matrix combined with every translation mod `n`.
pub fn all_ops(n: i64) -> Vec<Op> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut ops = Vec::new();
    for p in perms {
        for signs in 0..8 {
            let mut m = [[0; 3]; 3];
            for i in 0..3 {
                m[i][p[i]] = if signs >> i & 1 == 1 { -1 } else { 1 };
            }
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        ops.push(Op { m, t: [x, y, z] });
                    }
                }
            }
        }
    }
    ops
}

/// The four mirror reflections, read off their coordinate formulas.
pub fn letter(c: char) -> Op {
    match c {
        // (x, y, 1 - z)
        'P' => Op { m: [[1, 0, 0], [0, 1, 0], [0, 0, -1]], t: [0, 0, 1] },
        // (z, y, x)
        'Q' => Op { m: [[0, 0, 1], [0, 1, 0], [1, 0, 0]], t: [0, 0, 0] },
        // (y, x, z)
        'R' => Op { m: [[0, 1, 0], [1, 0, 0], [0, 0, 1]], t: [0, 0, 0] },
        // (x, -y, z)
        'S' => Op { m: [[1, 0, 0], [0, -1, 0], [0, 0, 1]], t: [0, 0, 0] },
        _ => panic!("bad letter {c}"),
    }
}

pub const IDENTITY: Op = Op { m: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], t: [0, 0, 0] };

/// Letters of a word, with `(...)^k` groups expanded. Rightmost letter acts first.
pub fn expand(word: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = word.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '(' {
            let close = i + chars[i..].iter().position(|&c| c == ')').unwrap();
            let inner = expand(&chars[i + 1..close].iter().collect::<String>());
            let mut j = close + 2;
            let start = j;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let k: usize = chars[start..j].iter().collect::<String>().parse().unwrap();
            out.push_str(&inner.repeat(k));
            i = j;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

pub fn word(w: &str, n: i64) -> Op {
    expand(w).chars().fold(IDENTITY, |acc, c| acc.after(&letter(c), n))
}

/// Closure of a generating set under composition.
pub fn closure(gens: &[Op], n: i64) -> BTreeSet<Op> {
    let mut set = BTreeSet::from([IDENTITY]);
    let mut frontier = vec![IDENTITY];
    while let Some(a) = frontier.pop() {
        for g in gens {
            let b = g.after(&a, n);
            if set.insert(b) {
                frontier.push(b);
            }
        }
    }
    set
}

pub fn subgroup(words: &str, n: i64) -> BTreeSet<Op> {
    let gens: Vec<Op> = words.split_whitespace().map(|w| word(w, n)).collect();
    closure(&gens, n)
}

pub fn vertices(n: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Orbits as sorted vertex sets, ordered by their smallest vertex.
pub fn orbits(group: &BTreeSet<Op>, n: i64) -> Vec<BTreeSet<[i64; 3]>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in vertices(n) {
        if seen.contains(&v) {
            continue;
        }
        let orbit: BTreeSet<[i64; 3]> = group.iter().map(|g| g.apply(v, n)).collect();
        seen.extend(orbit.iter().copied());
        out.push(orbit);
    }
    out
}

pub fn stabilizer(group: &BTreeSet<Op>, v: [i64; 3], n: i64) -> BTreeSet<Op> {
    group.iter().filter(|g| g.apply(v, n) == v).copied().collect()
}

/// Left cosets `hJ` as sets, keyed by their smallest element.
pub fn left_cosets(h: &BTreeSet<Op>, j: &BTreeSet<Op>, n: i64) -> BTreeMap<Op, BTreeSet<Op>> {
    let mut out = BTreeMap::new();
    let mut covered = BTreeSet::new();
    for a in h {
        if covered.contains(a) {
            continue;
        }
        let coset: BTreeSet<Op> = j.iter().map(|b| a.after(b, n)).collect();
        covered.extend(coset.iter().copied());
        out.insert(*coset.iter().next().unwrap(), coset);
    }
    out
}

/// Converts a library quotient element for comparison.
pub fn from_element(g: &cubic_coloring::TorusElement) -> Op {
    let m = g.linear.matrix().map(|row| row.map(i64::from));
    Op { m, t: g.translation.map(i64::from) }
}

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, …, degree − 1}`.
///
/// Products compose left to right: `p.then(q)` applies `p` first, so that the
/// map from words to permutations is a homomorphism for right actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidGroup(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation with 1-based points, e.g. `(1 2)(3 4)` or `(1,2,3)`;
    /// `()`, `e` and `id` denote the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "e" || trimmed == "id" {
            return Ok(Permutation(images));
        }
        let mut rest = trimmed;
        let mut used = vec![false; degree];
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let points: Vec<usize> = open[..close]
                .split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad point {s:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!(
                        "point {p} outside 1..={degree} in {text:?}"
                    )));
                }
                if used[p - 1] {
                    return Err(Error::Parse(format!(
                        "point {p} repeated in {text:?}; write disjoint cycles"
                    )));
                }
                used[p - 1] = true;
            }
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = points[(k + 1) % points.len()] - 1;
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut i = self.0[start];
            while i != start {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.0[i];
            }
            let body: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Multiplication table of a finite group: `mult[g][h] = g·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
}

/// Associativity is checked on all triples up to this order.
const ASSOCIATIVITY_CHECK_ORDER: usize = 24;

impl FiniteGroupTable {
    pub fn from_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let order = mult.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if mult
            .iter()
            .any(|row| row.len() != order || row.iter().any(|&x| x >= order))
        {
            return Err(Error::InvalidGroup(
                "table is not square over 0..order".into(),
            ));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mult[e][g] == g && mult[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; order];
        for g in 0..order {
            inverse[g] = (0..order)
                .find(|&h| mult[g][h] == identity && mult[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
        }
        if order <= ASSOCIATIVITY_CHECK_ORDER {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails on ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            order,
            mult,
            inverse,
            identity,
        })
    }

    /// Parses whitespace-separated rows of 0-based indices; `#` starts a comment.
    pub fn parse_table(text: &str) -> Result<Self> {
        let rows: Vec<Vec<usize>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(|ch: char| ch == ',' || ch.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad table entry {s:?}: {e}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::from_table(rows)
    }

    /// The permutation group generated by `generators`, elements listed in
    /// breadth-first order from the identity.
    pub fn from_permutations(generators: &[Permutation]) -> Result<Self> {
        let degree = generators.first().map_or(1, Permutation::degree);
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidGroup(
                "generators of different degrees".into(),
            ));
        }
        let elements = closure(degree, generators);
        let index: HashMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mult = elements
            .iter()
            .map(|g| elements.iter().map(|h| index[&g.then(h)]).collect())
            .collect();
        Self::from_table(mult)
    }

    pub fn cyclic(n: usize) -> Self {
        let mult = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_table(mult).expect("cyclic table is a group")
    }

    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return Self::cyclic(1);
        }
        let transposition = Permutation::parse_cycles("(1 2)", n).expect("valid");
        let mut cycle: Vec<usize> = (1..n).collect();
        cycle.push(0);
        let long = Permutation(cycle);
        Self::from_permutations(&[transposition, long]).expect("symmetric group")
    }

    pub fn dihedral(n: usize) -> Self {
        let rotation = Permutation((0..n).map(|i| (i + 1) % n).collect());
        let reflection = Permutation((0..n).map(|i| (n - i) % n).collect());
        Self::from_permutations(&[rotation, reflection]).expect("dihedral group")
    }

    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let order = a.order * b.order;
        let mult = (0..order)
            .map(|x| {
                (0..order)
                    .map(|y| {
                        let (xa, xb) = (x / b.order, x % b.order);
                        let (ya, yb) = (y / b.order, y % b.order);
                        a.mult[xa][ya] * b.order + b.mult[xb][yb]
                    })
                    .collect()
            })
            .collect();
        Self::from_table(mult).expect("product of groups is a group")
    }

    /// Built-in groups by name: `trivial`, `Z<n>`, `S<n>`, `D<n>`, `Z2xZ2`/`V4`.
    pub fn named(name: &str) -> Result<Self> {
        let key = name
            .trim()
            .to_ascii_lowercase()
            .replace(['/', ' ', '_'], "");
        let number = |prefix: &str| -> Option<usize> { key.strip_prefix(prefix)?.parse().ok() };
        match key.as_str() {
            "trivial" | "1" => return Ok(Self::cyclic(1)),
            "z2xz2" | "v4" | "klein" => {
                let z2 = Self::cyclic(2);
                return Ok(Self::direct_product(&z2, &z2));
            }
            _ => {}
        }
        if let Some(n) = number("z").or_else(|| number("c")) {
            if n >= 1 {
                return Ok(Self::cyclic(n));
            }
        }
        if let Some(n) = number("s") {
            if (1..=5).contains(&n) {
                return Ok(Self::symmetric(n));
            }
        }
        if let Some(n) = number("d") {
            if n >= 3 {
                return Ok(Self::dihedral(n));
            }
        }
        Err(Error::InvalidGroup(format!("unknown group name {name:?}")))
    }

    /// Elements of the subgroup generated by `elements`.
    pub fn generated_subgroup(&self, elements: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut found = vec![self.identity];
        let mut queue = VecDeque::from([self.identity]);
        while let Some(g) = queue.pop_front() {
            for &s in elements {
                let h = self.mult[g][s];
                if !inside[h] {
                    inside[h] = true;
                    found.push(h);
                    queue.push_back(h);
                }
            }
        }
        found
    }

    pub fn generates(&self, elements: &[usize]) -> bool {
        self.generated_subgroup(elements).len() == self.order
    }

    /// A smallest generating set, the lexicographically first among those.
    pub fn minimal_generating_set(&self) -> Vec<usize> {
        if self.order == 1 {
            return Vec::new();
        }
        let candidates: Vec<usize> = (0..self.order).filter(|&g| g != self.identity).collect();
        for size in 1..=candidates.len() {
            let mut chosen = (0..size).collect::<Vec<usize>>();
            loop {
                let set: Vec<usize> = chosen.iter().map(|&i| candidates[i]).collect();
                if self.generates(&set) {
                    return set;
                }
                // next combination in lexicographic order
                let mut i = size;
                while i > 0 && chosen[i - 1] == candidates.len() - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                chosen[i - 1] += 1;
                for j in i..size {
                    chosen[j] = chosen[j - 1] + 1;
                }
            }
        }
        candidates
    }
}

fn closure(degree: usize, generators: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut seen: HashMap<Permutation, usize> = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = p.then(g);
            if !seen.contains_key(&q) {
                seen.insert(q.clone(), elements.len());
                elements.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    elements
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_roundtrip() {
        let p = Permutation::parse_cycles("(1 3 2)(4 5)", 5).unwrap();
        assert_eq!(p.images(), &[2, 0, 1, 4, 3]);
        assert_eq!(p.to_string(), "(1 3 2)(4 5)");
        assert!(p.then(&p.inverse()).is_identity());
        assert!(Permutation::parse_cycles("()", 3).unwrap().is_identity());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
    }

    #[test]
    fn built_in_orders() {
        assert_eq!(FiniteGroupTable::symmetric(3).order, 6);
        assert_eq!(FiniteGroupTable::symmetric(4).order, 24);
        assert_eq!(FiniteGroupTable::dihedral(4).order, 8);
        assert_eq!(FiniteGroupTable::named("Z2xZ2").unwrap().order, 4);
        assert_eq!(FiniteGroupTable::named("Z/3").unwrap().order, 3);
        assert!(FiniteGroupTable::named("Q8").is_err());
    }

    #[test]
    fn minimal_generating_sets() {
        assert_eq!(
            FiniteGroupTable::cyclic(4).minimal_generating_set().len(),
            1
        );
        assert_eq!(
            FiniteGroupTable::named("V4")
                .unwrap()
                .minimal_generating_set()
                .len(),
            2
        );
        assert_eq!(
            FiniteGroupTable::symmetric(3)
                .minimal_generating_set()
                .len(),
            2
        );
        assert!(FiniteGroupTable::cyclic(1)
            .minimal_generating_set()
            .is_empty());
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroupTable::from_table(bad).is_err());
        let z3 = FiniteGroupTable::parse_table("0 1 2\n1 2 0 # row\n2 0 1\n").unwrap();
        assert_eq!(z3, FiniteGroupTable::cyclic(3));
        // a non-associative loop of order 5 with identity and inverses
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroupTable::from_table(loop5).unwrap_err();
        assert!(err.to_string().contains("associativity"));
    }
}

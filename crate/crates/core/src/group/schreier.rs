use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

use super::table::Permutation;

/// Vertex cap for the image group enumerated by [`schreier_rank`].
const MAX_INDEX: usize = 1 << 16;

/// A freely reduced word; letter `+k` is generator `k − 1`, `−k` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    /// Generator `index` (zero based).
    pub fn generator(index: usize) -> Self {
        FreeWord(vec![index as i32 + 1])
    }

    pub fn from_letters(letters: &[i32]) -> Self {
        assert!(
            letters.iter().all(|&l| l != 0),
            "letter 0 is not a generator"
        );
        let mut w = FreeWord::identity();
        for &l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, letter: i32) {
        if self.0.last() == Some(&-letter) {
            self.0.pop();
        } else {
            self.0.push(letter);
        }
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, k: u32) -> FreeWord {
        (0..k).fold(FreeWord::identity(), |acc, _| acc.mul(self))
    }

    /// Image under generator images, products composing left to right.
    pub fn evaluate(&self, images: &[Permutation], degree: usize) -> Permutation {
        self.0
            .iter()
            .fold(Permutation::identity(degree), |acc, &l| {
                let g = &images[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    acc.then(g)
                } else {
                    acc.then(&g.inverse())
                }
            })
    }

    /// Renders with the given generator names, collecting powers: `u^2 v^-1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let idx = l.unsigned_abs() as usize - 1;
            let name = names
                .get(idx)
                .cloned()
                .unwrap_or_else(|| format!("x{}", idx + 1));
            let exp = run as i64 * l.signum() as i64;
            parts.push(if exp == 1 {
                name
            } else {
                format!("{name}^{exp}")
            });
            i += run;
        }
        parts.join(" ")
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Default names: `u, v` in rank two, otherwise `x1, …, xn`.
pub fn default_names(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["u".into(), "v".into()]
    } else {
        (1..=n).map(|k| format!("x{k}")).collect()
    }
}

/// Schreier coset graph of `ker φ` for `φ: 𝔽_n → G`. Cosets are identified
/// with elements of the image `φ(𝔽_n)`; the edge for generator `i` at coset
/// `g` goes to `g·φ(x_i)`.
#[derive(Debug, Clone)]
pub struct SchreierGraph {
    pub n: usize,
    pub names: Vec<String>,
    pub cosets: Vec<Permutation>,
    /// `edges[v][i]` is the target of generator `i` at coset `v`.
    pub edges: Vec<Vec<usize>>,
    /// Breadth-first Schreier transversal; `transversal[0]` is the empty word.
    pub transversal: Vec<FreeWord>,
    pub tree_edges: Vec<(usize, usize)>,
    /// Free basis of the kernel, one word per non-tree edge.
    pub subgroup_generators: Vec<FreeWord>,
    images: Vec<Permutation>,
}

impl SchreierGraph {
    pub fn index(&self) -> usize {
        self.cosets.len()
    }

    /// Nielsen–Schreier rank `1 + index·(n − 1)`.
    pub fn rank(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        1 + self.index() * (self.n - 1)
    }

    pub fn non_tree_edges(&self) -> usize {
        self.index() * self.n - self.tree_edges.len()
    }

    pub fn degree(&self) -> usize {
        self.cosets.first().map_or(0, Permutation::degree)
    }

    pub fn image_of(&self, word: &FreeWord) -> Permutation {
        word.evaluate(&self.images, self.degree())
    }

    pub fn in_kernel(&self, word: &FreeWord) -> bool {
        self.image_of(word).is_identity()
    }

    /// Every generator column of the edge table is a bijection of the cosets.
    pub fn is_permutation_action(&self) -> bool {
        (0..self.n).all(|i| {
            let mut hit = vec![false; self.index()];
            self.edges
                .iter()
                .all(|row| !std::mem::replace(&mut hit[row[i]], true))
        })
    }

    pub fn is_connected(&self) -> bool {
        self.tree_edges.len() + 1 == self.index()
    }

    pub fn kernel_verified(&self) -> bool {
        self.subgroup_generators.iter().all(|w| self.in_kernel(w))
    }

    pub fn rendered_generators(&self) -> Vec<String> {
        self.subgroup_generators
            .iter()
            .map(|w| w.render(&self.names))
            .collect()
    }
}

#[derive(Serialize)]
struct SchreierSummary {
    n: usize,
    index: usize,
    rank: usize,
    non_tree_edges: usize,
    transversal: Vec<String>,
    subgroup_generators: Vec<String>,
    connected: bool,
    permutation_action: bool,
    kernel_verified: bool,
}

impl Serialize for SchreierGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SchreierSummary {
            n: self.n,
            index: self.index(),
            rank: self.rank(),
            non_tree_edges: self.non_tree_edges(),
            transversal: self
                .transversal
                .iter()
                .map(|w| w.render(&self.names))
                .collect(),
            subgroup_generators: self.rendered_generators(),
            connected: self.is_connected(),
            permutation_action: self.is_permutation_action(),
            kernel_verified: self.kernel_verified(),
        }
        .serialize(s)
    }
}

/// Schreier graph, transversal and free generators of `ker φ`, where `φ`
/// sends generator `i` of `𝔽_n` to `images[i]`.
pub fn schreier_rank(n: usize, images: &[Permutation]) -> Result<SchreierGraph> {
    if images.len() != n {
        return Err(Error::InvalidGroup(format!(
            "{} images for a free group of rank {n}",
            images.len()
        )));
    }
    let degree = images.first().map_or(1, Permutation::degree);
    if images.iter().any(|p| p.degree() != degree) {
        return Err(Error::InvalidGroup("images of different degrees".into()));
    }

    let mut cosets = vec![Permutation::identity(degree)];
    let mut lookup: HashMap<Permutation, usize> = HashMap::from([(cosets[0].clone(), 0)]);
    let mut transversal = vec![FreeWord::identity()];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut tree_edges = Vec::new();
    let mut v = 0;
    while v < cosets.len() {
        let mut row = Vec::with_capacity(n);
        for (i, g) in images.iter().enumerate() {
            let target = cosets[v].then(g);
            let w = match lookup.get(&target) {
                Some(&w) => w,
                None => {
                    if cosets.len() >= MAX_INDEX {
                        return Err(Error::TooLarge {
                            order: cosets.len() + 1,
                            cap: MAX_INDEX,
                        });
                    }
                    let w = cosets.len();
                    lookup.insert(target.clone(), w);
                    cosets.push(target);
                    transversal.push(transversal[v].mul(&FreeWord::generator(i)));
                    tree_edges.push((v, i));
                    w
                }
            };
            row.push(w);
        }
        edges.push(row);
        v += 1;
    }

    let mut subgroup_generators = Vec::new();
    for (v, row) in edges.iter().enumerate() {
        for (i, &w) in row.iter().enumerate() {
            if tree_edges.contains(&(v, i)) {
                continue;
            }
            let word = transversal[v]
                .mul(&FreeWord::generator(i))
                .mul(&transversal[w].inverse());
            subgroup_generators.push(word);
        }
    }

    Ok(SchreierGraph {
        n,
        names: default_names(n),
        cosets,
        edges,
        transversal,
        tree_edges,
        subgroup_generators,
        images: images.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: usize) -> Permutation {
        Permutation::from_images((0..m).map(|i| (i + 1) % m).collect()).unwrap()
    }

    #[test]
    fn free_reduction() {
        let w = FreeWord::from_letters(&[1, 2, -2, -1, 1]);
        assert_eq!(w.letters(), &[1]);
        let u = FreeWord::generator(0);
        assert!(u.mul(&u.inverse()).is_empty());
        assert_eq!(
            FreeWord::from_letters(&[1, 1, -2]).render(&default_names(2)),
            "u^2 v^-1"
        );
        assert_eq!(FreeWord::identity().to_string(), "1");
        assert_eq!(u.pow(3).to_string(), "x1^3");
    }

    #[test]
    fn parity_kernel_in_rank_two() {
        let g = schreier_rank(2, &[z(2), z(2)]).unwrap();
        assert_eq!(g.index(), 2);
        assert_eq!(g.rank(), 3);
        assert_eq!(g.non_tree_edges(), 3);
        assert_eq!(g.rendered_generators(), vec!["v u^-1", "u^2", "u v"]);
        assert!(g.kernel_verified() && g.is_connected() && g.is_permutation_action());
    }

    #[test]
    fn trivial_and_cyclic_images() {
        let id = Permutation::identity(1);
        let g = schreier_rank(2, &[id.clone(), id]).unwrap();
        assert_eq!((g.index(), g.rank()), (1, 2));
        assert_eq!(g.rendered_generators(), vec!["u", "v"]);

        let g = schreier_rank(2, &[z(3), z(3)]).unwrap();
        assert_eq!((g.index(), g.rank(), g.non_tree_edges()), (3, 4, 4));
        assert!(g.kernel_verified());
    }

    #[test]
    fn mismatched_input() {
        assert!(schreier_rank(2, &[z(2)]).is_err());
        assert!(schreier_rank(2, &[z(2), z(3)]).is_err());
    }
}

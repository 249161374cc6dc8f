//! Simple undirected graphs stored as symmetric bit matrices.
//!
//! Dense operations (complement, join, densities) are O(n²/64). The matrix
//! costs n²/8 bytes, so ~5·10⁴ vertices is the practical ceiling; statistics
//! on larger cographs go through cotrees and never build a matrix.

use std::fmt::Write as _;

use thiserror::Error;

/// Largest graph accepted by [`Cograph::canonical_form_small`].
pub const CANONICAL_FORM_LIMIT: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph on {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on vertices `0..n`.
///
/// Despite the name nothing forces the graph to be P4-free; the type is the
/// plain graph the cograph operations act on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cograph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for Cograph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cograph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Cograph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Cograph { n, words, bits: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.set_edge(i, j);
            }
        }
        g
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.set_edge(i - 1, i);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if i != j {
                g.set_edge(i, j);
            }
        }
        Ok(g)
    }

    /// Builds a graph from a pairwise predicate evaluated on `i < j`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j);
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.neighbors(i).filter(move |&j| j > i).map(move |j| (i, j)))
    }

    /// `self` on vertices `0..n1`, `other` shifted to `n1..n1+n2`, no cross edges.
    pub fn disjoint_union(&self, other: &Cograph) -> Cograph {
        let n1 = self.n;
        let mut g = Cograph::empty(n1 + other.n);
        for (i, j) in self.edges() {
            g.set_edge(i, j);
        }
        for (i, j) in other.edges() {
            g.set_edge(n1 + i, n1 + j);
        }
        g
    }

    /// Disjoint union plus every edge between the two blocks.
    pub fn join(&self, other: &Cograph) -> Cograph {
        let n1 = self.n;
        let mut g = self.disjoint_union(other);
        for i in 0..n1 {
            for j in 0..other.n {
                g.set_edge(i, n1 + j);
            }
        }
        g
    }

    pub fn complement(&self) -> Cograph {
        let mut g = self.clone();
        for i in 0..self.n {
            let row = &mut g.bits[i * g.words..(i + 1) * g.words];
            for w in row.iter_mut() {
                *w = !*w;
            }
            // clear the diagonal and the padding past n
            row[i / 64] &= !(1 << (i % 64));
            if !self.n.is_multiple_of(64) {
                let last = self.words - 1;
                row[last] &= (1u64 << (self.n % 64)) - 1;
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut part = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        part.push(w);
                        stack.push(w);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Subgraph induced by a tuple of vertices. Repeated vertices become
    /// separate, mutually non-adjacent copies.
    pub fn induced_subgraph(&self, tuple: &[usize]) -> Result<Cograph, GraphError> {
        if let Some(&v) = tuple.iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(Cograph::from_fn(tuple.len(), |a, b| {
            tuple[a] != tuple[b] && self.has_edge(tuple[a], tuple[b])
        }))
    }

    /// Upper-triangle adjacency bits for `i < j` in row-major order, first
    /// pair in the most significant position. Only meaningful for `n ≤ 11`.
    pub(crate) fn upper_bits_permuted(&self, perm: &[usize]) -> u64 {
        let mut code = 0u64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                code = code << 1 | self.has_edge(perm[i], perm[j]) as u64;
            }
        }
        code
    }

    /// Isomorphism-invariant encoding: vertex count followed by the
    /// lexicographically smallest upper-triangle adjacency string over all
    /// vertex orderings.
    pub fn canonical_form_small(&self) -> Result<Vec<u8>, GraphError> {
        if self.n > CANONICAL_FORM_LIMIT {
            return Err(GraphError::TooLarge { n: self.n, limit: CANONICAL_FORM_LIMIT });
        }
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = self.upper_bits_permuted(&perm);
        // Heap's algorithm
        let mut c = vec![0usize; self.n];
        let mut i = 0;
        while i < self.n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                best = best.min(self.upper_bits_permuted(&perm));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        let mut out = vec![self.n as u8];
        out.extend_from_slice(&best.to_be_bytes());
        Ok(out)
    }

    pub fn is_isomorphic_small(&self, other: &Cograph) -> Result<bool, GraphError> {
        Ok(self.n == other.n && self.canonical_form_small()? == other.canonical_form_small()?)
    }

    /// Edge-list text: first line `n`, then `i j` per edge with `i < j`.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (i, j) in self.edges() {
            writeln!(s, "{i} {j}").unwrap();
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Cograph, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "missing vertex count".into() })?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|e| GraphError::Parse { line: 1, msg: format!("bad vertex count: {e}") })?;
        let mut g = Cograph::empty(n);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(GraphError::Parse { line: line_no, msg: "expected `i j`".into() });
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| GraphError::Parse { line: line_no, msg: e.to_string() })
            };
            let (i, j) = (parse(parts[0])?, parse(parts[1])?);
            if i >= j {
                return Err(GraphError::Parse { line: line_no, msg: format!("need i < j, got {i} {j}") });
            }
            if j >= n {
                return Err(GraphError::VertexOutOfRange { vertex: j, n });
            }
            g.set_edge(i, j);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(n: usize, seed: u64) -> Cograph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Cograph::from_fn(n, |_, _| rng.gen_bool(0.5))
    }

    #[test]
    fn union_of_singletons() {
        let k1 = Cograph::empty(1);
        let g = k1.disjoint_union(&k1);
        assert_eq!((g.n(), g.edge_count()), (2, 0));
        let g = Cograph::complete(2).disjoint_union(&k1);
        assert_eq!((g.n(), g.edge_count()), (3, 1));
    }

    #[test]
    fn union_of_two_paths() {
        let p3 = Cograph::path(3);
        let g = p3.disjoint_union(&p3);
        assert_eq!(g.n(), 6);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.connected_components().len(), 2);
    }

    #[test]
    fn joins() {
        let k1 = Cograph::empty(1);
        assert_eq!(k1.join(&k1), Cograph::complete(2));
        let star = k1.join(&k1.disjoint_union(&k1));
        assert!(star.is_isomorphic_small(&Cograph::path(3)).unwrap());
        assert_eq!(Cograph::complete(2).join(&Cograph::complete(2)), Cograph::complete(4));
    }

    #[test]
    fn complements() {
        assert_eq!(Cograph::complete(5).complement(), Cograph::empty(5));
        let p4 = Cograph::path(4);
        assert!(p4.complement().is_isomorphic_small(&p4).unwrap());
        // padding bits stay clear across word boundaries
        let g = Cograph::empty(70).complement();
        assert_eq!(g.edge_count(), 70 * 69 / 2);
        assert!(g.degrees().iter().all(|&d| d == 69));
    }

    #[test]
    fn components() {
        let k1 = Cograph::empty(1);
        let g = k1.disjoint_union(&k1).disjoint_union(&Cograph::complete(2));
        let mut sizes: Vec<usize> = g.connected_components().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2]);
        assert_eq!(Cograph::complete(6).connected_components(), vec![(0..6).collect::<Vec<_>>()]);
        let g = Cograph::path(3).disjoint_union(&Cograph::complete(2));
        let sizes: Vec<usize> = g.connected_components().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 2]);
    }

    #[test]
    fn induced_with_repetition() {
        let g = Cograph::complete(3);
        let h = g.induced_subgraph(&[1, 1]).unwrap();
        assert_eq!((h.n(), h.edge_count()), (2, 0));
        assert_eq!(g.induced_subgraph(&[0, 1, 2]).unwrap(), g);
        let p3 = Cograph::path(3);
        assert_eq!(p3.induced_subgraph(&[0, 2]).unwrap().edge_count(), 0);
        assert_eq!(
            p3.induced_subgraph(&[0, 3]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn canonical_forms_of_four_vertex_graphs() {
        // all 64 labeled graphs on 4 vertices fall into 11 classes
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        let mut classes = std::collections::HashSet::new();
        for mask in 0u32..64 {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            classes.insert(Cograph::from_edges(4, &edges).unwrap().canonical_form_small().unwrap());
        }
        assert_eq!(classes.len(), 11);
        let claw = Cograph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_ne!(claw.canonical_form_small(), Cograph::path(4).canonical_form_small());
        assert!(matches!(Cograph::empty(11).canonical_form_small(), Err(GraphError::TooLarge { .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = random_graph(9, 3);
        let text = g.to_edge_list();
        assert_eq!(Cograph::parse_edge_list(&text).unwrap(), g);
        assert!(Cograph::parse_edge_list("3\n2 1\n").is_err());
        assert!(Cograph::parse_edge_list("3\n1 3\n").is_err());
        assert_eq!(Cograph::parse_edge_list("2\n").unwrap(), Cograph::empty(2));
    }

    proptest! {
        #[test]
        fn complement_is_involution(n in 0usize..80, seed: u64) {
            let g = random_graph(n, seed);
            prop_assert_eq!(g.complement().complement(), g);
        }

        #[test]
        fn join_is_complemented_union(n1 in 0usize..20, n2 in 0usize..20, seed: u64) {
            let g1 = random_graph(n1, seed);
            let g2 = random_graph(n2, seed.wrapping_add(1));
            let via_union = g1.complement().disjoint_union(&g2.complement()).complement();
            prop_assert_eq!(g1.join(&g2), via_union);
            prop_assert_eq!(g1.join(&g2).edge_count(), g1.edge_count() + g2.edge_count() + n1 * n2);
        }

        #[test]
        fn canonical_form_ignores_relabeling(n in 1usize..8, seed: u64) {
            let g = random_graph(n, seed);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0xabc));
            let h = Cograph::from_fn(n, |i, j| g.has_edge(perm[i], perm[j]));
            prop_assert_eq!(g.canonical_form_small().unwrap(), h.canonical_form_small().unwrap());
            let identity: Vec<usize> = (0..n).collect();
            prop_assert!(g.induced_subgraph(&identity).unwrap().is_isomorphic_small(&g).unwrap());
        }
    }
}

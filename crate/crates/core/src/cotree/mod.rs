//! Cotrees: rooted non-plane trees whose internal nodes carry a 0/1
//! decoration and have at least two children. The leaves are the vertices of
//! the encoded cograph; two vertices are adjacent iff their first common
//! ancestor is decorated 1.
//!
//! Trees are stored in an arena in post-order (children before parents, the
//! root last) with cached parent links, depths, leaf counts and preorder
//! positions, so ancestor walks and subtree-size queries are cheap.

mod format;
mod recognize;

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Cograph;

pub use format::ParseError;

pub type NodeId = usize;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoration {
    /// Disjoint union.
    Zero,
    /// Join.
    One,
}

impl Decoration {
    pub fn flip(self) -> Self {
        match self {
            Decoration::Zero => Decoration::One,
            Decoration::One => Decoration::Zero,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Decoration::One
        } else {
            Decoration::Zero
        }
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CotreeError {
    #[error("internal node {0} has fewer than two children")]
    UnaryNode(NodeId),
    #[error("leaf labels are not a bijection onto 1..={0}")]
    BadLabels(usize),
    #[error("graph is not a cograph: vertices {vertices:?} induce a prime subgraph")]
    NotACograph { vertices: Vec<usize> },
    #[error("node {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("leaf {0} appears more than once")]
    RepeatedLeaf(NodeId),
    #[error("node {0} does not exist")]
    NoSuchNode(NodeId),
}

#[derive(Clone, Debug)]
struct Node {
    /// `None` for leaves.
    decoration: Option<Decoration>,
    parent: u32,
    first_child: u32,
    child_count: u32,
    leaves: u32,
    depth: u32,
    /// Preorder position and number of nodes in the subtree.
    pre: u32,
    span: u32,
    /// 1-based label, 0 when unlabeled or internal.
    label: u32,
}

/// Post-order construction: children must be created before their parent,
/// and the last node created is the root.
#[derive(Default, Debug)]
pub struct CotreeBuilder {
    nodes: Vec<Node>,
    children: Vec<u32>,
}

impl CotreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(leaves: usize) -> Self {
        CotreeBuilder {
            nodes: Vec::with_capacity(2 * leaves),
            children: Vec::with_capacity(2 * leaves),
        }
    }

    fn push(&mut self, decoration: Option<Decoration>, kids: &[NodeId], label: u32) -> NodeId {
        let id = self.nodes.len();
        let first_child = self.children.len() as u32;
        let mut leaves = 0;
        for &c in kids {
            debug_assert!(c < id);
            self.children.push(c as u32);
            leaves += self.nodes[c].leaves;
        }
        self.nodes.push(Node {
            decoration,
            parent: NONE,
            first_child,
            child_count: kids.len() as u32,
            leaves: if decoration.is_none() { 1 } else { leaves },
            depth: 0,
            pre: 0,
            span: 0,
            label,
        });
        id
    }

    /// Unlabeled leaf.
    pub fn leaf(&mut self) -> NodeId {
        self.push(None, &[], 0)
    }

    /// Leaf with a 1-based label.
    pub fn labeled_leaf(&mut self, label: u32) -> NodeId {
        self.push(None, &[], label)
    }

    pub fn internal(&mut self, decoration: Decoration, children: &[NodeId]) -> NodeId {
        self.push(Some(decoration), children, 0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Finalizes the tree rooted at the last created node and checks arity
    /// and labels.
    pub fn finish(self) -> Result<Cotree, CotreeError> {
        let t = self.finish_unchecked();
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn finish_unchecked(self) -> Cotree {
        assert!(!self.nodes.is_empty(), "empty cotree");
        let root = self.nodes.len() - 1;
        let mut t = Cotree { nodes: self.nodes, children: self.children, root };
        t.fill_caches();
        t
    }
}

/// A cotree, labeled (leaves carry 1..=n) or unlabeled.
#[derive(Clone)]
pub struct Cotree {
    nodes: Vec<Node>,
    children: Vec<u32>,
    root: NodeId,
}

impl fmt::Debug for Cotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cotree({self})")
    }
}

impl Cotree {
    pub fn single_leaf(label: Option<u32>) -> Cotree {
        let mut b = CotreeBuilder::new();
        match label {
            Some(l) => b.labeled_leaf(l),
            None => b.leaf(),
        };
        b.finish_unchecked()
    }

    /// Root decorated `decoration` with `n` labeled leaves.
    pub fn star(decoration: Decoration, n: usize) -> Cotree {
        let mut b = CotreeBuilder::with_capacity(n);
        let leaves: Vec<NodeId> = (1..=n as u32).map(|l| b.labeled_leaf(l)).collect();
        if n > 1 {
            b.internal(decoration, &leaves);
        }
        b.finish_unchecked()
    }

    fn fill_caches(&mut self) {
        let count = self.nodes.len();
        for p in 0..count {
            let (first, len) = (self.nodes[p].first_child as usize, self.nodes[p].child_count as usize);
            for i in first..first + len {
                let c = self.children[i] as usize;
                self.nodes[c].parent = p as u32;
            }
        }
        // depth and preorder, iteratively from the root
        let mut stack = vec![self.root];
        let mut next_pre = 0u32;
        self.nodes[self.root].depth = 0;
        while let Some(v) = stack.pop() {
            self.nodes[v].pre = next_pre;
            next_pre += 1;
            let d = self.nodes[v].depth + 1;
            let (first, len) = (self.nodes[v].first_child as usize, self.nodes[v].child_count as usize);
            for i in (first..first + len).rev() {
                let c = self.children[i] as usize;
                self.nodes[c].depth = d;
                stack.push(c);
            }
        }
        // subtree node counts; post-order arena means children come first
        for v in 0..count {
            let mut span = 1;
            for &c in self.children_of(v) {
                span += self.nodes[c as usize].span;
            }
            self.nodes[v].span = span;
        }
    }

    fn children_of(&self, v: NodeId) -> &[u32] {
        let node = &self.nodes[v];
        &self.children[node.first_child as usize..(node.first_child + node.child_count) as usize]
    }

    /// Checks arity and that labels, if any, are a bijection onto `1..=n`.
    pub fn validate(&self) -> Result<(), CotreeError> {
        for (id, node) in self.nodes.iter().enumerate() {
            if node.decoration.is_some() && node.child_count < 2 {
                return Err(CotreeError::UnaryNode(id));
            }
        }
        let n = self.leaf_count();
        let labeled: Vec<u32> = self.leaves().map(|l| self.nodes[l].label).collect();
        if labeled.iter().any(|&l| l != 0) {
            let mut seen = vec![false; n + 1];
            for &l in &labeled {
                if l == 0 || l as usize > n || seen[l as usize] {
                    return Err(CotreeError::BadLabels(n));
                }
                seen[l as usize] = true;
            }
        }
        Ok(())
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Number of arena nodes, including nodes unreachable from the root.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of leaves below the root, i.e. the size of the cograph.
    pub fn leaf_count(&self) -> usize {
        self.nodes[self.root].leaves as usize
    }

    pub fn children(&self, v: NodeId) -> impl ExactSizeIterator<Item = NodeId> + DoubleEndedIterator + '_ {
        self.children_of(v).iter().map(|&c| c as usize)
    }

    pub fn child_count(&self, v: NodeId) -> usize {
        self.nodes[v].child_count as usize
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.nodes[v].parent;
        (p != NONE).then_some(p as usize)
    }

    pub fn decoration(&self, v: NodeId) -> Option<Decoration> {
        self.nodes[v].decoration
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.nodes[v].decoration.is_none()
    }

    pub fn subtree_leaf_count(&self, v: NodeId) -> usize {
        self.nodes[v].leaves as usize
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.nodes[v].depth as usize
    }

    pub fn label(&self, v: NodeId) -> Option<u32> {
        let l = self.nodes[v].label;
        (l != 0).then_some(l)
    }

    pub fn is_labeled(&self) -> bool {
        self.leaves().next().is_some_and(|l| self.nodes[l].label != 0)
    }

    /// Leaves reachable from the root, in preorder.
    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.preorder().filter(move |&v| self.is_leaf(v))
    }

    pub fn preorder(&self) -> impl Iterator<Item = NodeId> + '_ {
        let mut stack = vec![self.root];
        std::iter::from_fn(move || {
            let v = stack.pop()?;
            stack.extend(self.children(v).rev());
            Some(v)
        })
    }

    /// Internal nodes reachable from the root.
    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.preorder().filter(move |&v| !self.is_leaf(v))
    }

    /// Whether `a` is an ancestor of `v` (or `v` itself).
    pub fn is_ancestor(&self, a: NodeId, v: NodeId) -> bool {
        let (na, nv) = (&self.nodes[a], &self.nodes[v]);
        na.pre <= nv.pre && nv.pre < na.pre + na.span
    }

    /// Deepest node lying on both root paths.
    pub fn first_common_ancestor(&self, mut u: NodeId, mut v: NodeId) -> NodeId {
        while self.nodes[u].depth > self.nodes[v].depth {
            u = self.nodes[u].parent as usize;
        }
        while self.nodes[v].depth > self.nodes[u].depth {
            v = self.nodes[v].parent as usize;
        }
        while u != v {
            u = self.nodes[u].parent as usize;
            v = self.nodes[v].parent as usize;
        }
        u
    }

    /// Every child of a 0-node is a 1-node or a leaf and vice versa.
    pub fn is_canonical(&self) -> bool {
        self.internal_nodes().all(|v| {
            let d = self.decoration(v);
            self.children(v).all(|c| self.decoration(c) != d)
        })
    }

    /// Vertex index of each leaf: `label - 1` when labeled, otherwise the
    /// leaf's position in preorder. Indexed by node id; internal nodes map to
    /// `usize::MAX`.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.nodes.len()];
        if self.is_labeled() {
            for l in self.leaves() {
                idx[l] = self.nodes[l].label as usize - 1;
            }
        } else {
            for (i, l) in self.leaves().enumerate() {
                idx[l] = i;
            }
        }
        idx
    }

    /// Leaf node for each vertex index (inverse of [`Self::vertex_indices`]).
    pub fn leaf_of_vertex(&self) -> Vec<NodeId> {
        let idx = self.vertex_indices();
        let mut out = vec![0; self.leaf_count()];
        for l in self.leaves() {
            out[idx[l]] = l;
        }
        out
    }

    /// The cograph encoded by this tree.
    pub fn cograph(&self) -> Cograph {
        let n = self.leaf_count();
        let idx = self.vertex_indices();
        // leaves of each subtree occupy a contiguous range of the preorder leaf list
        let order: Vec<NodeId> = self.leaves().collect();
        let mut first_leaf = vec![0usize; self.nodes.len()];
        let mut pos = 0;
        for v in self.preorder() {
            first_leaf[v] = pos;
            if self.is_leaf(v) {
                pos += 1;
            }
        }
        let mut g = Cograph::empty(n);
        for v in self.internal_nodes() {
            if self.decoration(v) != Some(Decoration::One) {
                continue;
            }
            let kids: Vec<NodeId> = self.children(v).collect();
            for (a, &ca) in kids.iter().enumerate() {
                for &cb in &kids[a + 1..] {
                    let ra = first_leaf[ca]..first_leaf[ca] + self.subtree_leaf_count(ca);
                    let rb = first_leaf[cb]..first_leaf[cb] + self.subtree_leaf_count(cb);
                    for i in ra {
                        for j in rb.clone() {
                            g.set_edge(idx[order[i]], idx[order[j]]);
                        }
                    }
                }
            }
        }
        g
    }

    /// Degree of every vertex of the cograph, indexed like
    /// [`Self::vertex_indices`]. One top-down pass: a leaf gains
    /// `leaves(a) - leaves(child towards the leaf)` at every 1-decorated
    /// ancestor `a`.
    pub fn degree_vector(&self) -> Vec<usize> {
        let mut acc = vec![0usize; self.nodes.len()];
        let idx = self.vertex_indices();
        let mut deg = vec![0; self.leaf_count()];
        for v in self.preorder() {
            if let Some(p) = self.parent(v) {
                acc[v] = acc[p];
                if self.decoration(p) == Some(Decoration::One) {
                    acc[v] += self.subtree_leaf_count(p) - self.subtree_leaf_count(v);
                }
            }
            if self.is_leaf(v) {
                deg[idx[v]] = acc[v];
            }
        }
        deg
    }

    /// Degree of a single leaf by walking its ancestors.
    pub fn leaf_degree(&self, leaf: NodeId) -> usize {
        let mut deg = 0;
        let mut v = leaf;
        while let Some(p) = self.parent(v) {
            if self.decoration(p) == Some(Decoration::One) {
                deg += self.subtree_leaf_count(p) - self.subtree_leaf_count(v);
            }
            v = p;
        }
        deg
    }

    /// Contracts every edge whose child carries its parent's decoration.
    /// The encoded labeled graph is unchanged.
    pub fn canonicalize(&self) -> Cotree {
        let mut b = CotreeBuilder::with_capacity(self.leaf_count());
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        // post-order over reachable nodes
        let post: Vec<NodeId> = {
            let mut pre: Vec<NodeId> = self.preorder().collect();
            pre.reverse();
            pre
        };
        // merged child lists, built bottom-up
        let mut merged: Vec<Vec<NodeId>> = vec![Vec::new(); self.nodes.len()];
        for &v in &post {
            match self.decoration(v) {
                None => new_id[v] = b.labeled_leaf(self.nodes[v].label),
                Some(d) => {
                    let mut kids = Vec::new();
                    for c in self.children(v) {
                        if self.decoration(c) == Some(d) {
                            kids.append(&mut merged[c]);
                        } else {
                            kids.push(c);
                        }
                    }
                    let is_root = v == self.root;
                    let absorbed = self.parent(v).is_some_and(|p| self.decoration(p) == Some(d));
                    if absorbed && !is_root {
                        merged[v] = kids;
                    } else {
                        let ids: Vec<NodeId> = kids.iter().map(|&c| new_id[c]).collect();
                        new_id[v] = b.internal(d, &ids);
                    }
                }
            }
        }
        b.finish_unchecked()
    }

    /// The labeled cotree induced by a tuple of distinct leaves: its internal
    /// nodes are the first common ancestors of marked leaves, decorations are
    /// inherited and the leaf for `leaves[i]` gets label `i + 1`.
    pub fn induced_cotree(&self, leaves: &[NodeId]) -> Result<Cotree, CotreeError> {
        let mut marked = vec![0u32; self.nodes.len()];
        for (i, &l) in leaves.iter().enumerate() {
            if l >= self.nodes.len() {
                return Err(CotreeError::NoSuchNode(l));
            }
            if !self.is_leaf(l) {
                return Err(CotreeError::NotALeaf(l));
            }
            if marked[l] != 0 {
                return Err(CotreeError::RepeatedLeaf(l));
            }
            marked[l] = i as u32 + 1;
        }
        if leaves.is_empty() {
            return Err(CotreeError::NoSuchNode(usize::MAX));
        }
        let mut sorted = leaves.to_vec();
        sorted.sort_by_key(|&l| self.nodes[l].pre);
        let mut kept = sorted.clone();
        for w in sorted.windows(2) {
            kept.push(self.first_common_ancestor(w[0], w[1]));
        }
        kept.sort_by_key(|&v| self.nodes[v].pre);
        kept.dedup();
        // parent in the induced tree = nearest kept proper ancestor
        let mut parent_pos = vec![usize::MAX; kept.len()];
        let mut stack: Vec<usize> = Vec::new();
        for (i, &v) in kept.iter().enumerate() {
            while let Some(&top) = stack.last() {
                if self.is_ancestor(kept[top], v) {
                    break;
                }
                stack.pop();
            }
            if let Some(&top) = stack.last() {
                parent_pos[i] = top;
            }
            stack.push(i);
        }
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); kept.len()];
        for (i, &p) in parent_pos.iter().enumerate() {
            if p != usize::MAX {
                kids[p].push(i);
            }
        }
        let mut b = CotreeBuilder::with_capacity(leaves.len());
        let mut new_id = vec![usize::MAX; kept.len()];
        // reverse preorder visits children before parents
        for i in (0..kept.len()).rev() {
            let v = kept[i];
            new_id[i] = match self.decoration(v) {
                None => b.labeled_leaf(marked[v]),
                Some(d) => {
                    let ids: Vec<NodeId> = kids[i].iter().map(|&c| new_id[c]).collect();
                    b.internal(d, &ids)
                }
            };
        }
        // the root of the induced tree is kept[0] and was created last
        Ok(b.finish_unchecked())
    }

    /// Leaves in depth-first order. Children are visited by increasing
    /// smallest label in their subtree (smallest leaf id when unlabeled);
    /// with a seed, child order is shuffled instead.
    pub fn leaf_dfs_order(&self, seed: Option<u64>) -> Vec<NodeId> {
        let mut key = vec![u64::MAX; self.nodes.len()];
        for v in 0..self.nodes.len() {
            key[v] = if self.is_leaf(v) {
                if self.nodes[v].label != 0 {
                    self.nodes[v].label as u64
                } else {
                    v as u64
                }
            } else {
                self.children(v).map(|c| key[c]).min().unwrap_or(u64::MAX)
            };
        }
        let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
        let mut out = Vec::with_capacity(self.leaf_count());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if self.is_leaf(v) {
                out.push(v);
                continue;
            }
            let mut kids: Vec<NodeId> = self.children(v).collect();
            match rng.as_mut() {
                Some(r) => kids.shuffle(r),
                None => kids.sort_by_key(|&c| key[c]),
            }
            stack.extend(kids.into_iter().rev());
        }
        out
    }

    /// Encoding that identifies non-plane trees: each internal node is
    /// written as its decoration followed by the sorted encodings of its
    /// children. Leaves are written as their label, or `*` when unlabeled.
    pub fn canonical_key(&self) -> String {
        let mut enc: Vec<String> = vec![String::new(); self.nodes.len()];
        let mut post: Vec<NodeId> = self.preorder().collect();
        post.reverse();
        for v in post {
            enc[v] = match self.decoration(v) {
                None => match self.label(v) {
                    Some(l) => l.to_string(),
                    None => "*".to_string(),
                },
                Some(d) => {
                    let mut parts: Vec<String> = self.children(v).map(|c| std::mem::take(&mut enc[c])).collect();
                    parts.sort();
                    format!("({d} {})", parts.join(" "))
                }
            };
        }
        std::mem::take(&mut enc[self.root])
    }

    /// Same encoding with labels dropped: identifies unlabeled trees.
    pub fn unlabeled_key(&self) -> String {
        self.forget_labels().canonical_key()
    }

    pub fn forget_labels(&self) -> Cotree {
        let mut t = self.clone();
        for node in &mut t.nodes {
            node.label = 0;
        }
        t
    }

    /// Copy with leaf labels replaced: `labels[i]` goes to the i-th leaf in
    /// preorder.
    pub fn with_preorder_labels(&self, labels: &[u32]) -> Result<Cotree, CotreeError> {
        let mut t = self.clone();
        let leaves: Vec<NodeId> = self.leaves().collect();
        if labels.len() != leaves.len() {
            return Err(CotreeError::BadLabels(leaves.len()));
        }
        for (&l, &lab) in leaves.iter().zip(labels) {
            t.nodes[l].label = lab;
        }
        t.validate()?;
        Ok(t)
    }

    /// Copy whose root carries `decoration`; other decorations alternate
    /// downwards. Only meaningful for trees built as undecorated shapes.
    pub fn with_alternating_decorations(&self, root: Decoration) -> Cotree {
        let mut t = self.clone();
        for v in self.preorder().collect::<Vec<_>>() {
            if t.nodes[v].decoration.is_some() {
                let d = if t.nodes[v].depth.is_multiple_of(2) { root } else { root.flip() };
                t.nodes[v].decoration = Some(d);
            }
        }
        t
    }

    /// Number of internal nodes, and of internal edges joining equal and
    /// different decorations.
    pub fn shape_counts(&self) -> ShapeCounts {
        let mut c = ShapeCounts::default();
        for v in self.internal_nodes() {
            c.internal += 1;
            if let Some(p) = self.parent(v) {
                if self.decoration(p) == self.decoration(v) {
                    c.equal_edges += 1;
                } else {
                    c.unequal_edges += 1;
                }
            }
        }
        c
    }

    /// Every internal node has exactly two children.
    pub fn is_binary(&self) -> bool {
        self.internal_nodes().all(|v| self.child_count(v) == 2)
    }

    /// Leaf counts of the root's children.
    pub fn root_child_sizes(&self) -> Vec<usize> {
        self.children(self.root).map(|c| self.subtree_leaf_count(c)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShapeCounts {
    pub internal: usize,
    pub equal_edges: usize,
    pub unequal_edges: usize,
}

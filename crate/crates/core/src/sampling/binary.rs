use rand::Rng;

use crate::cotree::{Cotree, CotreeBuilder, Decoration, NodeId};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
struct PlaneNode {
    parent: u32,
    left: u32,
    right: u32,
    /// Leaf label, 0 for internal nodes.
    label: u32,
    decoration: Decoration,
}

/// Plane binary tree with labeled leaves and decorated internal nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneBinaryTree {
    nodes: Vec<PlaneNode>,
    root: u32,
}

impl PlaneBinaryTree {
    pub fn single_leaf() -> Self {
        PlaneBinaryTree {
            nodes: vec![PlaneNode { parent: NONE, left: NONE, right: NONE, label: 1, decoration: Decoration::Zero }],
            root: 0,
        }
    }

    /// Leaf-insertion step: the next label is attached next to node `at`,
    /// on its left when `left` holds. Every plane labeled tree with `k`
    /// leaves arises from exactly one sequence of `k − 1` such steps.
    fn insert_leaf(&mut self, at: usize, left: bool) {
        let label = self.leaf_count() as u32 + 1;
        let leaf = self.nodes.len() as u32;
        let joint = leaf + 1;
        let parent = self.nodes[at].parent;
        self.nodes.push(PlaneNode { parent: joint, left: NONE, right: NONE, label, decoration: Decoration::Zero });
        let (l, r) = if left { (leaf, at as u32) } else { (at as u32, leaf) };
        self.nodes.push(PlaneNode { parent, left: l, right: r, label: 0, decoration: Decoration::Zero });
        self.nodes[at].parent = joint;
        if parent == NONE {
            self.root = joint;
        } else {
            let p = &mut self.nodes[parent as usize];
            if p.left == at as u32 {
                p.left = joint;
            } else {
                p.right = joint;
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.len().div_ceil(2)
    }

    pub fn root(&self) -> usize {
        self.root as usize
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.nodes[v].left == NONE
    }

    pub fn label(&self, v: usize) -> Option<u32> {
        self.is_leaf(v).then_some(self.nodes[v].label)
    }

    pub fn decoration(&self, v: usize) -> Option<Decoration> {
        (!self.is_leaf(v)).then_some(self.nodes[v].decoration)
    }

    pub fn set_decoration(&mut self, v: usize, d: Decoration) {
        assert!(!self.is_leaf(v));
        self.nodes[v].decoration = d;
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| !self.is_leaf(v))
    }

    /// Node holding label `label`.
    pub fn leaf_with_label(&self, label: u32) -> Option<usize> {
        (0..self.nodes.len()).find(|&v| self.is_leaf(v) && self.nodes[v].label == label)
    }

    /// Leaves in left-to-right order, visiting the right child first at
    /// nodes where `swap` holds.
    fn leaf_order(&self, swap: impl Fn(&PlaneNode) -> bool) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaf_count());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            let node = &self.nodes[v as usize];
            if node.left == NONE {
                out.push(v as usize);
            } else if swap(node) {
                stack.push(node.left);
                stack.push(node.right);
            } else {
                stack.push(node.right);
                stack.push(node.left);
            }
        }
        out
    }

    pub fn left_to_right(&self) -> Vec<usize> {
        self.leaf_order(|_| false)
    }

    /// Leaves from smallest to largest in the order where, at their first
    /// common ancestor, the left side is smaller under decoration 0 and
    /// larger under decoration 1.
    pub fn rank_order(&self) -> Vec<usize> {
        self.leaf_order(|n| n.decoration == Decoration::One)
    }

    /// 1-based position of `leaf` in [`Self::rank_order`], found by walking
    /// up from the leaf.
    pub fn rank(&self, leaf: usize) -> usize {
        let sizes = self.leaf_counts();
        let mut below = 0;
        let mut v = leaf as u32;
        while self.nodes[v as usize].parent != NONE {
            let p = &self.nodes[self.nodes[v as usize].parent as usize];
            let from_left = p.left == v;
            let sibling = if from_left { p.right } else { p.left };
            // the sibling's leaves come first when ours are visited last
            if from_left == (p.decoration == Decoration::One) {
                below += sizes[sibling as usize] as usize;
            }
            v = self.nodes[v as usize].parent;
        }
        below + 1
    }

    /// Leaf count of every subtree.
    fn leaf_counts(&self) -> Vec<u32> {
        let mut sizes = vec![0u32; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            let n = &self.nodes[v as usize];
            if n.left == NONE {
                sizes[v as usize] = 1;
            } else if done {
                sizes[v as usize] = sizes[n.left as usize] + sizes[n.right as usize];
            } else {
                stack.push((v, true));
                stack.push((n.left, false));
                stack.push((n.right, false));
            }
        }
        sizes
    }

    /// Flips the decoration of every ancestor of `leaf` that has `leaf` in
    /// its right subtree. An involution that keeps shape and labels.
    pub fn flip_involution(&self, leaf: usize) -> PlaneBinaryTree {
        assert!(self.is_leaf(leaf), "node {leaf} is not a leaf");
        let mut out = self.clone();
        let mut v = leaf as u32;
        while self.nodes[v as usize].parent != NONE {
            let p = self.nodes[v as usize].parent;
            if self.nodes[p as usize].right == v {
                let d = &mut out.nodes[p as usize].decoration;
                *d = d.flip();
            }
            v = p;
        }
        out
    }

    /// The binary cotree with the same labels and decorations, forgetting
    /// the plane order.
    pub fn to_cotree(&self) -> Cotree {
        let mut b = CotreeBuilder::with_capacity(self.leaf_count());
        let mut id: Vec<NodeId> = vec![usize::MAX; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            let n = &self.nodes[v as usize];
            if n.left == NONE {
                id[v as usize] = b.labeled_leaf(n.label);
            } else if done {
                id[v as usize] = b.internal(n.decoration, &[id[n.left as usize], id[n.right as usize]]);
            } else {
                stack.push((v, true));
                stack.push((n.right, false));
                stack.push((n.left, false));
            }
        }
        b.finish_unchecked()
    }

    /// Encoding that tells plane trees apart: `(d left right)`.
    pub fn plane_key(&self) -> String {
        fn go(t: &PlaneBinaryTree, v: u32, out: &mut String) {
            let n = &t.nodes[v as usize];
            if n.left == NONE {
                out.push_str(&n.label.to_string());
            } else {
                out.push('(');
                out.push_str(&n.decoration.to_string());
                out.push(' ');
                go(t, n.left, out);
                out.push(' ');
                go(t, n.right, out);
                out.push(')');
            }
        }
        let mut s = String::new();
        go(self, self.root, &mut s);
        s
    }
}

/// Uniform plane labeled binary tree with `k` leaves, by leaf insertion,
/// each internal node decorated 0 with probability `p` independently.
pub fn sample_binary_decorated<R: Rng + ?Sized>(k: usize, p: f64, rng: &mut R) -> PlaneBinaryTree {
    assert!(k >= 1, "at least one leaf");
    let mut t = PlaneBinaryTree::single_leaf();
    for _ in 1..k {
        let at = rng.gen_range(0..t.node_count());
        let left = rng.gen::<bool>();
        t.insert_leaf(at, left);
    }
    for v in 0..t.nodes.len() {
        if t.nodes[v].left != NONE {
            t.nodes[v].decoration = if rng.gen::<f64>() < p { Decoration::Zero } else { Decoration::One };
        }
    }
    t
}

/// All `(2k−2)!/(k−1)!·2^{k−1}` decorated plane labeled binary trees with
/// `k` leaves.
pub fn enumerate_plane_binary_trees(k: usize) -> Vec<PlaneBinaryTree> {
    assert!(k >= 1);
    let mut shapes = vec![PlaneBinaryTree::single_leaf()];
    for _ in 1..k {
        let mut next = Vec::new();
        for t in &shapes {
            for at in 0..t.node_count() {
                for left in [true, false] {
                    let mut u = t.clone();
                    u.insert_leaf(at, left);
                    next.push(u);
                }
            }
        }
        shapes = next;
    }
    let mut out = Vec::new();
    for t in shapes {
        let internal: Vec<usize> = t.internal_nodes().collect();
        for mask in 0u32..1 << internal.len() {
            let mut u = t.clone();
            for (i, &v) in internal.iter().enumerate() {
                u.nodes[v].decoration = Decoration::from_bit(mask >> i & 1 == 1);
            }
            out.push(u);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_plane_binary_trees(1).len(), 1);
        assert_eq!(enumerate_plane_binary_trees(2).len(), 4);
        let all = enumerate_plane_binary_trees(3);
        assert_eq!(all.len(), 48);
        let keys: HashSet<String> = all.iter().map(|t| t.plane_key()).collect();
        assert_eq!(keys.len(), 48);
        let cotrees: HashSet<String> = all.iter().map(|t| t.to_cotree().canonical_key()).collect();
        assert_eq!(cotrees.len(), 12);
    }

    #[test]
    fn rank_order_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut t = sample_binary_decorated(6, 1.0, &mut rng);
        assert_eq!(t.rank_order(), t.left_to_right());
        for v in t.internal_nodes().collect::<Vec<_>>() {
            t.set_decoration(v, Decoration::One);
        }
        let mut rev = t.left_to_right();
        rev.reverse();
        assert_eq!(t.rank_order(), rev);
    }

    #[test]
    fn flip_of_two_leaves() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = sample_binary_decorated(2, 0.5, &mut rng);
        let order = t.left_to_right();
        let root = t.root();
        assert_eq!(t.flip_involution(order[0]), t);
        assert_eq!(t.flip_involution(order[1]).decoration(root), t.decoration(root).map(Decoration::flip));
    }

    #[test]
    fn degree_is_rank_after_flip_exhaustive() {
        for t in enumerate_plane_binary_trees(4).iter().step_by(3) {
            let g = t.to_cotree().cograph();
            for leaf in t.left_to_right() {
                let vertex = t.label(leaf).unwrap() as usize - 1;
                assert_eq!(g.degree(vertex), t.flip_involution(leaf).rank(leaf) - 1);
            }
        }
    }

    proptest! {
        #[test]
        fn flip_is_an_involution(seed in any::<u64>(), k in 1usize..30) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = sample_binary_decorated(k, 0.5, &mut rng);
            for leaf in t.left_to_right() {
                prop_assert_eq!(t.flip_involution(leaf).flip_involution(leaf), t.clone());
            }
        }

        #[test]
        fn rank_matches_rank_order(seed in any::<u64>(), k in 1usize..30) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = sample_binary_decorated(k, 0.5, &mut rng);
            for (i, leaf) in t.rank_order().into_iter().enumerate() {
                prop_assert_eq!(t.rank(leaf), i + 1);
            }
        }

        #[test]
        fn degree_equals_rank_minus_one(seed in any::<u64>(), k in 1usize..40) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = sample_binary_decorated(k, 0.5, &mut rng);
            let deg = t.to_cotree().degree_vector();
            let cot = t.to_cotree();
            let verts = cot.vertex_indices();
            for leaf in cot.leaves() {
                let b_leaf = t.leaf_with_label(cot.label(leaf).unwrap()).unwrap();
                prop_assert_eq!(deg[verts[leaf]], t.flip_involution(b_leaf).rank(b_leaf) - 1);
            }
        }
    }
}

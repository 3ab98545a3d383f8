//! Rooted decomposition trees whose leaves are graph vertices.
//!
//! Two interchangeable text forms are supported: nested parentheses such as
//! `((0,1),2)` and JSON where a node is a leaf id or an array of children,
//! e.g. `[[0,1],2]`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;

use crate::error::{HcError, Result};

pub type NodeId = usize;

/// Owned nested representation, convenient for construction and I/O.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nested {
    Leaf(usize),
    Node(Vec<Nested>),
}

impl Nested {
    pub fn pair(a: Nested, b: Nested) -> Nested {
        Nested::Node(vec![a, b])
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Node {
    children: Vec<NodeId>,
    vertex: Option<usize>,
    parent: Option<NodeId>,
    size: usize,
    depth: usize,
}

/// Immutable rooted tree with one leaf per vertex and internal nodes of degree >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterTree {
    nodes: Vec<Node>,
    root: NodeId,
    leaf_of: Vec<NodeId>,
}

/// Arena builder used by the top-down algorithms. Nodes may be created before
/// their children are known.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    kids: Vec<Vec<NodeId>>,
    vertex: Vec<Option<usize>>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, v: usize) -> NodeId {
        self.kids.push(Vec::new());
        self.vertex.push(Some(v));
        self.kids.len() - 1
    }

    pub fn internal(&mut self) -> NodeId {
        self.kids.push(Vec::new());
        self.vertex.push(None);
        self.kids.len() - 1
    }

    pub fn push_child(&mut self, parent: NodeId, child: NodeId) {
        self.kids[parent].push(child);
    }

    pub fn finish(self, root: NodeId) -> Result<ClusterTree> {
        ClusterTree::from_arena(self.kids, self.vertex, root)
    }
}

impl ClusterTree {
    fn from_arena(kids: Vec<Vec<NodeId>>, vertex: Vec<Option<usize>>, root: NodeId) -> Result<Self> {
        let bad = |m: String| Err(HcError::InvalidTree(m));
        let count = kids.len();
        if root >= count {
            return bad("root out of range".into());
        }
        let mut nodes: Vec<Node> = (0..count)
            .map(|i| Node { children: kids[i].clone(), vertex: vertex[i], parent: None, size: 0, depth: 0 })
            .collect();
        // Pre-order walk from the root; detects sharing and cycles via parent marks.
        let mut order = Vec::with_capacity(count);
        let mut visited = vec![false; count];
        let mut stack = vec![root];
        visited[root] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            let node = &nodes[x];
            match node.vertex {
                Some(_) if !node.children.is_empty() => return bad("leaf with children".into()),
                None if node.children.len() < 2 => {
                    return bad("internal node with fewer than two children".into())
                }
                _ => {}
            }
            let children = node.children.clone();
            let depth = node.depth;
            for &c in children.iter().rev() {
                if c >= count || visited[c] {
                    return bad("node reachable twice".into());
                }
                visited[c] = true;
                nodes[c].parent = Some(x);
                nodes[c].depth = depth + 1;
                stack.push(c);
            }
        }
        if order.len() != count {
            return bad("unreachable nodes in arena".into());
        }
        for &x in order.iter().rev() {
            nodes[x].size = match nodes[x].vertex {
                Some(_) => 1,
                None => nodes[x].children.iter().map(|&c| nodes[c].size).sum(),
            };
        }
        let max_label = nodes.iter().filter_map(|n| n.vertex).max().unwrap_or(0);
        let mut leaf_of = vec![usize::MAX; max_label + 1];
        for (i, node) in nodes.iter().enumerate() {
            if let Some(v) = node.vertex {
                if leaf_of[v] != usize::MAX {
                    return bad(format!("vertex {v} appears twice"));
                }
                leaf_of[v] = i;
            }
        }
        Ok(ClusterTree { nodes, root, leaf_of })
    }

    pub fn leaf(v: usize) -> Self {
        let mut b = TreeBuilder::new();
        let r = b.leaf(v);
        b.finish(r).expect("single leaf is valid")
    }

    pub fn from_nested(nested: &Nested) -> Result<Self> {
        let mut b = TreeBuilder::new();
        fn walk(b: &mut TreeBuilder, n: &Nested) -> NodeId {
            match n {
                Nested::Leaf(v) => b.leaf(*v),
                Nested::Node(children) => {
                    let id = b.internal();
                    for c in children {
                        let cid = walk(b, c);
                        b.push_child(id, cid);
                    }
                    id
                }
            }
        }
        let root = walk(&mut b, nested);
        b.finish(root)
    }

    pub fn to_nested(&self) -> Nested {
        self.nested_at(self.root)
    }

    fn nested_at(&self, id: NodeId) -> Nested {
        match self.nodes[id].vertex {
            Some(v) => Nested::Leaf(v),
            None => Nested::Node(self.nodes[id].children.iter().map(|&c| self.nested_at(c)).collect()),
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn num_leaves(&self) -> usize {
        self.nodes[self.root].size
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    /// Number of leaves below `id`.
    pub fn size(&self, id: NodeId) -> usize {
        self.nodes[id].size
    }

    pub fn vertex(&self, id: NodeId) -> Option<usize> {
        self.nodes[id].vertex
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].vertex.is_some()
    }

    pub fn leaf_node(&self, v: usize) -> Option<NodeId> {
        self.leaf_of.get(v).copied().filter(|&x| x != usize::MAX)
    }

    /// Leaves below `id`, in left-to-right order.
    pub fn leaves(&self, id: NodeId) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes[id].size);
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            match self.nodes[x].vertex {
                Some(v) => out.push(v),
                None => stack.extend(self.nodes[x].children.iter().rev()),
            }
        }
        out
    }

    /// All node ids in pre-order (parents before children, children left to right).
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.nodes[x].children.iter().rev());
        }
        out
    }

    pub fn internal_nodes(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|&x| !self.is_leaf(x)).collect()
    }

    /// Lowest common ancestor of the leaves of `u` and `v`.
    ///
    /// Panics if either vertex is not a leaf; call [`ClusterTree::check_leaves`] first.
    pub fn lca(&self, u: usize, v: usize) -> NodeId {
        let mut a = self.leaf_node(u).expect("vertex not in tree");
        let mut b = self.leaf_node(v).expect("vertex not in tree");
        while self.nodes[a].depth > self.nodes[b].depth {
            a = self.nodes[a].parent.unwrap();
        }
        while self.nodes[b].depth > self.nodes[a].depth {
            b = self.nodes[b].parent.unwrap();
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
        }
        a
    }

    /// Verify the leaf set is exactly `0..n`.
    pub fn check_leaves(&self, n: usize) -> Result<()> {
        if self.num_leaves() != n {
            return Err(HcError::LeafMismatch(format!(
                "tree has {} leaves, graph has {n} vertices",
                self.num_leaves()
            )));
        }
        if let Some(v) = (0..n).find(|&v| self.leaf_node(v).is_none()) {
            return Err(HcError::LeafMismatch(format!("vertex {v} is not a leaf of the tree")));
        }
        Ok(())
    }

    /// Replace every k-ary split by a left-leaning chain of binary splits.
    pub fn binarize(&self) -> ClusterTree {
        fn walk(n: Nested) -> Nested {
            match n {
                Nested::Leaf(v) => Nested::Leaf(v),
                Nested::Node(children) => {
                    let mut it = children.into_iter().map(walk);
                    let first = it.next().expect("internal node has children");
                    it.fold(first, Nested::pair)
                }
            }
        }
        ClusterTree::from_nested(&walk(self.to_nested())).expect("binarized tree is valid")
    }

    pub fn is_binary(&self) -> bool {
        self.nodes.iter().all(|n| n.vertex.is_some() || n.children.len() == 2)
    }

    pub fn to_json(&self) -> String {
        fn walk(n: &Nested) -> Value {
            match n {
                Nested::Leaf(v) => Value::from(*v),
                Nested::Node(c) => Value::Array(c.iter().map(walk).collect()),
            }
        }
        walk(&self.to_nested()).to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| HcError::InvalidTree(format!("json: {e}")))?;
        fn walk(v: &Value) -> Result<Nested> {
            match v {
                Value::Number(x) => x
                    .as_u64()
                    .map(|x| Nested::Leaf(x as usize))
                    .ok_or_else(|| HcError::InvalidTree(format!("bad leaf id {x}"))),
                Value::Array(items) => Ok(Nested::Node(items.iter().map(walk).collect::<Result<_>>()?)),
                other => Err(HcError::InvalidTree(format!("unexpected json value {other}"))),
            }
        }
        ClusterTree::from_nested(&walk(&value)?)
    }

    pub fn parse_parens(text: &str) -> Result<Self> {
        let mut p = ParenParser { s: text.as_bytes(), pos: 0 };
        let nested = p.node()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing characters"));
        }
        ClusterTree::from_nested(&nested)
    }

    /// Parse either text form, choosing JSON when the input starts with `[`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('[') {
            Self::from_json(text)
        } else {
            Self::parse_parens(text)
        }
    }
}

impl fmt::Display for ClusterTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(t: &ClusterTree, id: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t.vertex(id) {
                Some(v) => write!(f, "{v}"),
                None => {
                    f.write_str("(")?;
                    for (i, &c) in t.children(id).iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        walk(t, c, f)?;
                    }
                    f.write_str(")")
                }
            }
        }
        walk(self, self.root, f)
    }
}

struct ParenParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ParenParser<'_> {
    fn err(&self, msg: &str) -> HcError {
        HcError::InvalidTree(format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn node(&mut self) -> Result<Nested> {
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let mut children = vec![self.node()?];
                loop {
                    self.skip_ws();
                    match self.s.get(self.pos) {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.node()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Nested::Node(children));
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                digits.parse().map(Nested::Leaf).map_err(|_| self.err("leaf id too large"))
            }
            _ => Err(self.err("expected '(' or vertex id")),
        }
    }
}

/// Uniformly shuffled random tree on `0..n`: each cluster of size >= 2 is cut
/// into between 2 and `max_arity` nonempty parts at random positions.
pub fn random_tree<R: Rng + ?Sized>(n: usize, max_arity: usize, rng: &mut R) -> ClusterTree {
    assert!(n >= 1 && max_arity >= 2);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut b = TreeBuilder::new();
    fn build<R: Rng + ?Sized>(b: &mut TreeBuilder, items: &[usize], max_arity: usize, rng: &mut R) -> NodeId {
        if items.len() == 1 {
            return b.leaf(items[0]);
        }
        let k = rng.random_range(2..=max_arity.min(items.len()));
        let mut cuts: Vec<usize> = (1..items.len()).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts[..k - 1].to_vec();
        cuts.sort_unstable();
        let id = b.internal();
        let mut start = 0;
        for end in cuts.into_iter().chain(std::iter::once(items.len())) {
            let c = build(b, &items[start..end], max_arity, rng);
            b.push_child(id, c);
            start = end;
        }
        id
    }
    let root = build(&mut b, &perm, max_arity, rng);
    b.finish(root).expect("random tree is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_both_forms() {
        let t = ClusterTree::parse_parens(" ( (0, 1) ,2 )").unwrap();
        assert_eq!(t.to_string(), "((0,1),2)");
        assert_eq!(t.to_json(), "[[0,1],2]");
        assert_eq!(ClusterTree::from_json("[[0,1],2]").unwrap(), t);
        assert_eq!(ClusterTree::parse("[[0,1],2]").unwrap(), t);
        assert_eq!(ClusterTree::parse("0").unwrap().num_leaves(), 1);
    }

    #[test]
    fn rejects_malformed() {
        assert!(ClusterTree::parse_parens("(0)").is_err());
        assert!(ClusterTree::parse_parens("(0,0)").is_err());
        assert!(ClusterTree::parse_parens("(0,1").is_err());
        assert!(ClusterTree::parse_parens("(0,1))").is_err());
        assert!(ClusterTree::parse_parens("(0,-1)").is_err());
        assert!(ClusterTree::from_json("[0,[1]]").is_err());
        assert!(ClusterTree::from_json("{\"a\":1}").is_err());
    }

    #[test]
    fn sizes_and_lca() {
        let t = ClusterTree::parse("((0,1),(2,3,4))").unwrap();
        assert_eq!(t.size(t.root()), 5);
        assert_eq!(t.size(t.lca(0, 1)), 2);
        assert_eq!(t.size(t.lca(2, 4)), 3);
        assert_eq!(t.lca(0, 4), t.root());
        assert_eq!(t.lca(3, 3), t.leaf_node(3).unwrap());
        for id in t.internal_nodes() {
            let sum: usize = t.children(id).iter().map(|&c| t.size(c)).sum();
            assert_eq!(sum, t.size(id));
        }
    }

    #[test]
    fn leaf_checks() {
        let t = ClusterTree::parse("((0,1),3)").unwrap();
        assert!(matches!(t.check_leaves(3), Err(HcError::LeafMismatch(_))));
        assert!(matches!(t.check_leaves(4), Err(HcError::LeafMismatch(_))));
        assert!(ClusterTree::parse("((0,1),2)").unwrap().check_leaves(3).is_ok());
    }

    #[test]
    fn binarize_chains_left_to_right() {
        let t = ClusterTree::parse("(0,1,(2,3,4))").unwrap();
        let b = t.binarize();
        assert!(b.is_binary());
        assert_eq!(b.to_string(), "((0,1),((2,3),4))");
    }

    #[test]
    fn random_trees_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..20 {
            let t = random_tree(n, 4, &mut rng);
            t.check_leaves(n).unwrap();
            let b = random_tree(n, 2, &mut rng);
            assert!(b.is_binary());
        }
    }
}

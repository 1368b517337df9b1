//! Gessel trees: increasing plane trees whose internal vertex `i` has exactly
//! `k_i + 1` ordered children, and the bijection with Stirling permutations.
//!
//! Leaf classes are never stored. A leaf in the first child slot of its parent
//! is an x-leaf, in the last slot a y-leaf, and in slot `j` (`2 <= j <= k`) a
//! z_j-leaf.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::stirling::StirlingPermutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf,
    Internal { label: u32, children: Vec<Node> },
}

impl Node {
    pub fn internal(label: u32, children: Vec<Node>) -> Self {
        Node::Internal { label, children }
    }

    /// An internal vertex whose children are all leaves.
    pub fn bare(label: u32, arity: usize) -> Self {
        Node::Internal {
            label,
            children: vec![Node::Leaf; arity],
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf)
    }

    pub fn label(&self) -> Option<u32> {
        match self {
            Node::Leaf => None,
            Node::Internal { label, .. } => Some(*label),
        }
    }

    pub fn children(&self) -> &[Node] {
        match self {
            Node::Leaf => &[],
            Node::Internal { children, .. } => children,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Internal { children, .. } => children.iter().map(Node::leaf_count).sum(),
        }
    }

    pub fn find(&self, target: u32) -> Option<&Node> {
        match self {
            Node::Leaf => None,
            Node::Internal { label, children } => {
                if *label == target {
                    Some(self)
                } else {
                    children.iter().find_map(|c| c.find(target))
                }
            }
        }
    }

    pub(crate) fn children_of_mut(&mut self, target: u32) -> Option<&mut Vec<Node>> {
        match self {
            Node::Leaf => None,
            Node::Internal { label, children } => {
                if *label == target {
                    Some(children)
                } else {
                    children.iter_mut().find_map(|c| c.children_of_mut(target))
                }
            }
        }
    }

    /// Visits internal vertices in preorder.
    pub fn for_each_internal<'a>(&'a self, f: &mut impl FnMut(u32, &'a [Node])) {
        if let Node::Internal { label, children } = self {
            f(*label, children);
            for c in children {
                c.for_each_internal(f);
            }
        }
    }

    fn write_word(&self, out: &mut Vec<u32>) {
        if let Node::Internal { label, children } = self {
            for (pos, c) in children.iter().enumerate() {
                if pos > 0 {
                    out.push(*label);
                }
                c.write_word(out);
            }
        }
    }

    /// Reads the subtree back as a word (the inverse of the Gessel map).
    pub fn word(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.write_word(&mut out);
        out
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf => write!(f, "*"),
            Node::Internal { label, children } => {
                write!(f, "({label}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A structural defect found by [`validate_tree`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    Arity {
        vertex: u32,
        expected: usize,
        found: usize,
    },
    NotIncreasing {
        parent: u32,
        child: u32,
    },
    LabelOutOfRange {
        vertex: u32,
    },
    DuplicateLabel {
        vertex: u32,
    },
    MissingLabel {
        vertex: u32,
    },
    LeafRoot,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Arity {
                vertex,
                expected,
                found,
            } => {
                write!(
                    f,
                    "vertex {vertex} has {found} children, expected {expected}"
                )
            }
            Violation::NotIncreasing { parent, child } => {
                write!(
                    f,
                    "edge ({parent},{child}) violates the increasing condition"
                )
            }
            Violation::LabelOutOfRange { vertex } => write!(f, "label {vertex} is out of range"),
            Violation::DuplicateLabel { vertex } => {
                write!(f, "label {vertex} appears more than once")
            }
            Violation::MissingLabel { vertex } => write!(f, "label {vertex} is missing"),
            Violation::LeafRoot => write!(f, "root is a leaf but the multiset is nonempty"),
        }
    }
}

/// Checks every Gessel-tree invariant of `root` against `m`.
pub fn validate_tree(root: &Node, m: &Multiset) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.is_empty() {
        if let Some(label) = root.label() {
            out.push(Violation::LabelOutOfRange { vertex: label });
        }
        return out;
    }
    if root.is_leaf() {
        out.push(Violation::LeafRoot);
        return out;
    }
    let n = m.n() as u32;
    let mut seen = vec![0u32; m.n() + 1];
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        let Node::Internal { label, children } = node else {
            continue;
        };
        if *label == 0 || *label > n {
            out.push(Violation::LabelOutOfRange { vertex: *label });
        } else {
            seen[*label as usize] += 1;
            let expected = m.mult(*label) as usize + 1;
            if children.len() != expected {
                out.push(Violation::Arity {
                    vertex: *label,
                    expected,
                    found: children.len(),
                });
            }
        }
        for c in children {
            if let Some(cl) = c.label() {
                if cl <= *label {
                    out.push(Violation::NotIncreasing {
                        parent: *label,
                        child: cl,
                    });
                }
            }
        }
        stack.extend(children.iter().rev());
    }
    for v in 1..=n {
        match seen[v as usize] {
            0 => out.push(Violation::MissingLabel { vertex: v }),
            1 => {}
            _ => out.push(Violation::DuplicateLabel { vertex: v }),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GesselTree {
    root: Node,
    multiset: Multiset,
}

impl GesselTree {
    pub fn new(root: Node, multiset: Multiset) -> Result<Self> {
        let violations = validate_tree(&root, &multiset);
        if violations.is_empty() {
            Ok(Self { root, multiset })
        } else {
            Err(Error::InvalidTree(violations))
        }
    }

    /// Builds a tree from its shape alone, reading `k_i` off the arity of vertex `i`.
    pub fn from_root(root: Node) -> Result<Self> {
        let mut mults = BTreeMap::new();
        root.for_each_internal(&mut |label, children| {
            mults.insert(label, children.len().saturating_sub(1) as u32);
        });
        let n = mults.keys().next_back().copied().unwrap_or(0);
        let inferred: Vec<u32> = (1..=n)
            .map(|v| mults.get(&v).copied().unwrap_or(1).max(1))
            .collect();
        let m = Multiset::new(inferred)?;
        Self::new(root, m)
    }

    pub(crate) fn new_unchecked(root: Node, multiset: Multiset) -> Self {
        Self { root, multiset }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn multiset(&self) -> &Multiset {
        &self.multiset
    }

    pub fn vertex(&self, label: u32) -> Result<&Node> {
        self.root.find(label).ok_or(Error::NoSuchVertex(label))
    }

    pub(crate) fn children_mut(&mut self, label: u32) -> Result<&mut Vec<Node>> {
        self.root
            .children_of_mut(label)
            .ok_or(Error::NoSuchVertex(label))
    }

    pub fn census(&self) -> LeafCensus {
        leaf_census(self)
    }
}

impl fmt::Display for GesselTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for GesselTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_root(parse_node(s)?)
    }
}

/// Parses the bracket notation `(LABEL child child ...)` where a child is a
/// nested vertex or `*`. A bare `*` denotes the one-leaf tree of the empty
/// multiset. Surplus whitespace is tolerated.
pub fn parse_node(s: &str) -> Result<Node> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let node = p.child()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(node)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::TreeSyntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn child(&mut self) -> Result<Node> {
        match self.src.get(self.pos) {
            Some(b'*') => {
                self.pos += 1;
                Ok(Node::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let label: u32 = digits
                    .parse()
                    .map_err(|_| self.error("expected a vertex label"))?;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => children.push(self.child()?),
                        None => return Err(self.error("unclosed parenthesis")),
                    }
                }
                Ok(Node::Internal { label, children })
            }
            Some(_) => Err(self.error("expected `(` or `*`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn build(word: &[u32]) -> Node {
    let Some(&min) = word.iter().min() else {
        return Node::Leaf;
    };
    let children = word.split(|&v| v == min).map(build).collect();
    Node::Internal {
        label: min,
        children,
    }
}

/// The Gessel map: recursively split the word at the copies of its least
/// letter, which becomes the root, and recurse on the factors.
pub fn gessel_forward(s: &StirlingPermutation) -> GesselTree {
    GesselTree::new_unchecked(build(s.word()), s.multiset().clone())
}

/// Reads a Gessel tree back into its Stirling permutation.
pub fn gessel_inverse(t: &GesselTree) -> Result<StirlingPermutation> {
    let violations = validate_tree(t.root(), t.multiset());
    if !violations.is_empty() {
        return Err(Error::InvalidTree(violations));
    }
    Ok(StirlingPermutation::new_unchecked(
        t.root().word(),
        t.multiset().clone(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VertexLeaves {
    pub has_x: bool,
    pub has_y: bool,
    pub z_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LeafCensus {
    pub xleaf: usize,
    pub yleaf: usize,
    pub zleaf: usize,
    /// z-leaf counts keyed by child slot `j`.
    pub zleaf_by_j: BTreeMap<usize, usize>,
    pub per_vertex: BTreeMap<u32, VertexLeaves>,
}

pub fn vertex_leaves(children: &[Node]) -> VertexLeaves {
    let last = children.len().saturating_sub(1);
    let mut v = VertexLeaves::default();
    for (pos, c) in children.iter().enumerate() {
        if !c.is_leaf() {
            continue;
        }
        if pos == 0 {
            v.has_x = true;
        } else if pos == last {
            v.has_y = true;
        } else {
            v.z_count += 1;
        }
    }
    v
}

pub fn leaf_census(t: &GesselTree) -> LeafCensus {
    let mut census = LeafCensus::default();
    t.root().for_each_internal(&mut |label, children| {
        let v = vertex_leaves(children);
        census.xleaf += usize::from(v.has_x);
        census.yleaf += usize::from(v.has_y);
        census.zleaf += v.z_count;
        for (pos, c) in children
            .iter()
            .enumerate()
            .skip(1)
            .take(children.len().saturating_sub(2))
        {
            if c.is_leaf() {
                *census.zleaf_by_j.entry(pos + 1).or_insert(0) += 1;
            }
        }
        census.per_vertex.insert(label, v);
    });
    census
}

/// The i-segment of `s`: the maximal window around the copies of `i` whose
/// letters are all at least `i`. Returned as a 1-based inclusive range.
pub fn segment(s: &StirlingPermutation, i: u32) -> Result<RangeInclusive<usize>> {
    let (mut r, mut t) = s.first_last(i)?;
    while s.at(r - 1) > i {
        r -= 1;
    }
    while s.at(t + 1) > i {
        t += 1;
    }
    Ok(r..=t)
}

pub fn segment_word(s: &StirlingPermutation, i: u32) -> Result<Vec<u32>> {
    let range = segment(s, i)?;
    Ok(s.word()[range.start() - 1..*range.end()].to_vec())
}

/// Every window that contains all copies of `i`, consists of letters `>= i`,
/// and satisfies the boundary conditions `s_{r-1} < s_r` and `s_t > s_{t+1}`.
/// More than one candidate means the boundary conditions alone do not pin the
/// segment down; [`segment`] always returns the widest one.
pub fn segment_candidates(s: &StirlingPermutation, i: u32) -> Result<Vec<RangeInclusive<usize>>> {
    let widest = segment(s, i)?;
    let (p, q) = s.first_last(i)?;
    let mut out = Vec::new();
    for r in *widest.start()..=p {
        for t in q..=*widest.end() {
            if s.at(r - 1) < s.at(r) && s.at(t) > s.at(t + 1) {
                out.push(r..=t);
            }
        }
    }
    Ok(out)
}

/// Splits the i-segment at the copies of `i` into `k_i + 1` factors.
pub fn gessel_decomposition(s: &StirlingPermutation, i: u32) -> Result<Vec<Vec<u32>>> {
    let seg = segment_word(s, i)?;
    Ok(seg.split(|&v| v == i).map(<[u32]>::to_vec).collect())
}

/// Whether the first copy of `i` is an ascent and the last copy a descent.
pub fn first_last_occurrence_flags(s: &StirlingPermutation, i: u32) -> Result<(bool, bool)> {
    let (p, q) = s.first_last(i)?;
    Ok((s.is_ascent(p), s.is_descent(q)))
}

/// All Gessel trees on `m`, built directly by grafting vertex `i` onto each
/// leaf of every tree on `{1^k_1, ..., (i-1)^k_{i-1}}`. Independent of the
/// Gessel map.
pub fn enumerate_trees(m: &Multiset) -> Vec<GesselTree> {
    let mut trees = vec![Node::Leaf];
    for (idx, &k) in m.mults().iter().enumerate() {
        let label = idx as u32 + 1;
        let mut next = Vec::new();
        for t in &trees {
            let leaves = t.leaf_count();
            for slot in 0..leaves {
                let mut copy = t.clone();
                graft(&mut copy, slot, label, k as usize + 1);
                next.push(copy);
            }
        }
        trees = next;
    }
    trees
        .into_iter()
        .map(|root| GesselTree::new_unchecked(root, m.clone()))
        .collect()
}

fn graft(node: &mut Node, slot: usize, label: u32, arity: usize) -> usize {
    match node {
        Node::Leaf => {
            if slot == 0 {
                *node = Node::bare(label, arity);
            }
            1
        }
        Node::Internal { children, .. } => {
            let mut seen = 0;
            for c in children.iter_mut() {
                if seen > slot {
                    break;
                }
                seen += graft(c, slot - seen, label, arity);
            }
            seen
        }
    }
}

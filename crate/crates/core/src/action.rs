//! The Foata-Strehl action on Gessel trees: balance classification, the
//! flips `psi_i`, orbits, canonical trees, and pruned trees with their
//! `(u, v)`-weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::poly::{Poly3, Vars};
use crate::stirling::enumerate_stirling;
use crate::tree::{gessel_forward, leaf_census, vertex_leaves, GesselTree, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexStatus {
    NoXyLeaf,
    BalancedPair,
    UnbalancedX,
    UnbalancedY,
}

pub fn vertex_status(children: &[Node]) -> VertexStatus {
    let v = vertex_leaves(children);
    match (v.has_x, v.has_y) {
        (false, false) => VertexStatus::NoXyLeaf,
        (true, true) => VertexStatus::BalancedPair,
        (true, false) => VertexStatus::UnbalancedX,
        (false, true) => VertexStatus::UnbalancedY,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct BalanceReport {
    pub status: BTreeMap<u32, VertexStatus>,
    pub uxleaf: usize,
    pub bxleaf: usize,
    pub uyleaf: usize,
    pub byleaf: usize,
}

impl BalanceReport {
    pub fn vertices_with(&self, status: VertexStatus) -> impl Iterator<Item = u32> + '_ {
        self.status
            .iter()
            .filter(move |(_, s)| **s == status)
            .map(|(v, _)| *v)
    }
}

pub fn balance_report(t: &GesselTree) -> BalanceReport {
    let mut r = BalanceReport::default();
    t.root().for_each_internal(&mut |label, children| {
        let s = vertex_status(children);
        match s {
            VertexStatus::NoXyLeaf => {}
            VertexStatus::BalancedPair => {
                r.bxleaf += 1;
                r.byleaf += 1;
            }
            VertexStatus::UnbalancedX => r.uxleaf += 1,
            VertexStatus::UnbalancedY => r.uyleaf += 1,
        }
        r.status.insert(label, s);
    });
    r
}

fn swap_ends(t: &GesselTree, i: u32, when: impl Fn(VertexStatus) -> bool) -> Result<GesselTree> {
    let mut out = t.clone();
    let children = out.children_mut(i)?;
    if when(vertex_status(children)) {
        let last = children.len() - 1;
        children.swap(0, last);
    }
    Ok(out)
}

/// `psi_i`: if vertex `i` carries an unbalanced y-leaf, exchange its first
/// and last children (with their subtrees); otherwise leave the tree alone.
pub fn psi(t: &GesselTree, i: u32) -> Result<GesselTree> {
    swap_ends(t, i, |s| s == VertexStatus::UnbalancedY)
}

/// Two-sided flip: exchanges the first and last children of `i` whenever `i`
/// carries an unbalanced leaf of either kind. An involution.
pub fn toggle(t: &GesselTree, i: u32) -> Result<GesselTree> {
    swap_ends(t, i, |s| {
        matches!(s, VertexStatus::UnbalancedX | VertexStatus::UnbalancedY)
    })
}

/// No vertex carries an unbalanced y-leaf.
pub fn is_canonical(t: &GesselTree) -> bool {
    balance_report(t).uyleaf == 0
}

pub fn canonical_representative(t: &GesselTree) -> GesselTree {
    let order: Vec<u32> = (1..=t.multiset().n() as u32).collect();
    canonical_representative_in_order(t, &order)
}

/// Applies `psi_i` for each `i` of `order` in turn. The result is canonical
/// whenever `order` covers every vertex.
pub fn canonical_representative_in_order(t: &GesselTree, order: &[u32]) -> GesselTree {
    order.iter().fold(t.clone(), |acc, &i| {
        psi(&acc, i).expect("order lists vertices of the tree")
    })
}

/// Closure of `{t}` under `toggle` at every vertex, sorted by serialization.
pub fn orbit(t: &GesselTree) -> Vec<GesselTree> {
    let n = t.multiset().n() as u32;
    let mut seen: BTreeSet<GesselTree> = BTreeSet::new();
    let mut frontier = vec![t.clone()];
    seen.insert(t.clone());
    while let Some(cur) = frontier.pop() {
        for i in 1..=n {
            let next = toggle(&cur, i).expect("vertex exists");
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<GesselTree> = seen.into_iter().collect();
    out.sort_by_cached_key(|t| t.to_string());
    out
}

/// `x^xleaf y^yleaf z^zleaf` of a single tree.
pub fn leaf_monomial(t: &GesselTree) -> Poly3 {
    let c = leaf_census(t);
    Poly3::monomial(
        Vars::Xyz,
        [c.xleaf as u32, c.yleaf as u32, c.zleaf as u32],
        1,
    )
}

/// `(xy)^yleaf (x+y)^uxleaf z^zleaf`, the predicted orbit sum of a canonical tree.
pub fn orbit_polynomial(canonical: &GesselTree) -> Poly3 {
    let c = leaf_census(canonical);
    let b = balance_report(canonical);
    let x_plus_y = Poly3::from_terms(Vars::Xyz, [([1, 0, 0], 1), ([0, 1, 0], 1)]);
    let head = Poly3::monomial(
        Vars::Xyz,
        [c.yleaf as u32, c.yleaf as u32, c.zleaf as u32],
        1,
    );
    &head * &x_plus_y.pow(b.uxleaf as u32)
}

/// Canonical Gessel trees on `m`, in the lexicographic order of their permutations.
pub fn enumerate_canonical(m: &Multiset) -> impl Iterator<Item = GesselTree> {
    enumerate_stirling(m)
        .map(|s| gessel_forward(&s))
        .filter(is_canonical)
}

/// No vertex has a z-leaf without also having an x-leaf. Defined on `[n]_2`.
pub fn is_canonical_ternary(t: &GesselTree) -> Result<bool> {
    if !t.multiset().is_empty() && !t.multiset().is_stirling_square() {
        return Err(Error::NotTernary(t.multiset().to_string()));
    }
    Ok(vertices_with_x_and_z(t).1 == 0)
}

/// Returns (#vertices with both an x-leaf and a z-leaf, #vertices with a z-leaf but no x-leaf).
pub fn vertices_with_x_and_z(t: &GesselTree) -> (usize, usize) {
    let mut both = 0;
    let mut z_only = 0;
    t.root().for_each_internal(&mut |_, children| {
        let v = vertex_leaves(children);
        if v.z_count > 0 {
            if v.has_x {
                both += 1;
            } else {
                z_only += 1;
            }
        }
    });
    (both, z_only)
}

/// Vertex taxonomy after chopping off x- and y-leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VertexType {
    /// Neither an x-leaf nor a y-leaf.
    Type1,
    /// y-leaf only; label `y`.
    Type2,
    /// x-leaf only; label `x`, weight `v`.
    Type3,
    /// Both; label `xy`, weight `u`.
    Type4,
}

impl VertexType {
    fn of(children: &[Node]) -> Self {
        match vertex_status(children) {
            VertexStatus::NoXyLeaf => VertexType::Type1,
            VertexStatus::UnbalancedY => VertexType::Type2,
            VertexStatus::UnbalancedX => VertexType::Type3,
            VertexStatus::BalancedPair => VertexType::Type4,
        }
    }

    fn suffix(self) -> Option<char> {
        match self {
            VertexType::Type1 => None,
            VertexType::Type2 => Some('y'),
            VertexType::Type3 => Some('v'),
            VertexType::Type4 => Some('u'),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrunedNode {
    ZLeaf,
    Vertex {
        label: u32,
        kind: VertexType,
        children: Vec<PrunedNode>,
    },
}

impl fmt::Display for PrunedNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrunedNode::ZLeaf => write!(f, "*"),
            PrunedNode::Vertex {
                label,
                kind,
                children,
            } => {
                write!(f, "({label}")?;
                if let Some(s) = kind.suffix() {
                    write!(f, ":{s}")?;
                }
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A Gessel tree with its x- and y-leaves removed. z-leaves stay, so the
/// z-degree of the original tree is still readable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedTree {
    pub root: Option<PrunedNode>,
    pub types: BTreeMap<u32, VertexType>,
    pub zleaf: usize,
}

impl PrunedTree {
    /// `(#Type4, #Type3)`, the exponents of `u` and `v`.
    pub fn weight(&self) -> Result<(u32, u32)> {
        let mut u = 0;
        let mut v = 0;
        for (&label, &kind) in &self.types {
            match kind {
                VertexType::Type1 => {}
                VertexType::Type2 => return Err(Error::NotCanonical { vertex: label }),
                VertexType::Type3 => v += 1,
                VertexType::Type4 => u += 1,
            }
        }
        Ok((u, v))
    }

    /// `u^#Type4 v^#Type3 z^zleaf`.
    pub fn weight_with_z(&self) -> Result<Poly3> {
        let (u, v) = self.weight()?;
        Ok(Poly3::monomial(Vars::Uvz, [u, v, self.zleaf as u32], 1))
    }
}

impl fmt::Display for PrunedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root {
            Some(r) => r.fmt(f),
            None => write!(f, "()"),
        }
    }
}

fn prune_node(
    node: &Node,
    types: &mut BTreeMap<u32, VertexType>,
    zleaf: &mut usize,
) -> Option<PrunedNode> {
    let Node::Internal { label, children } = node else {
        return None;
    };
    let kind = VertexType::of(children);
    types.insert(*label, kind);
    let last = children.len() - 1;
    let mut kept = Vec::new();
    for (pos, c) in children.iter().enumerate() {
        match c {
            Node::Leaf if pos == 0 || pos == last => {}
            Node::Leaf => {
                *zleaf += 1;
                kept.push(PrunedNode::ZLeaf);
            }
            inner => kept.extend(prune_node(inner, types, zleaf)),
        }
    }
    Some(PrunedNode::Vertex {
        label: *label,
        kind,
        children: kept,
    })
}

pub fn prune(t: &GesselTree) -> PrunedTree {
    let mut types = BTreeMap::new();
    let mut zleaf = 0;
    let root = prune_node(t.root(), &mut types, &mut zleaf);
    PrunedTree { root, types, zleaf }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stirling::StirlingPermutation;

    const SAMPLE: &str = "(1 (2 (3 (5 * * *) * *) *) * (4 * (6 * * * (7 * *)) *))";
    const FLIPPED: &str = "(1 (2 * (3 (5 * * *) * *)) * (4 * (6 * * * (7 * *)) *))";
    const CANONICAL: &str = "(1 (2 * (3 * * (5 * * *))) * (4 * (6 * * * (7 * *)) *))";

    fn tree(s: &str) -> GesselTree {
        s.parse().unwrap()
    }

    fn phi(s: &str) -> GesselTree {
        gessel_forward(&s.parse::<StirlingPermutation>().unwrap())
    }

    #[test]
    fn balance_of_sample_tree() {
        let r = balance_report(&tree(SAMPLE));
        assert_eq!(r.status[&2], VertexStatus::UnbalancedY);
        assert_eq!(r.status[&5], VertexStatus::BalancedPair);
        assert_eq!(r.status[&7], VertexStatus::BalancedPair);
        assert_eq!(r.bxleaf, r.byleaf);
    }

    #[test]
    fn balance_small() {
        let r = balance_report(&phi("1122"));
        assert_eq!(r.status[&1], VertexStatus::UnbalancedX);
        assert_eq!(r.status[&2], VertexStatus::BalancedPair);
        assert_eq!(r.uxleaf, 1);
        let r = balance_report(&tree("(1 * *)"));
        assert_eq!(r.status[&1], VertexStatus::BalancedPair);
        assert_eq!(r.uxleaf, 0);
    }

    #[test]
    fn psi_flips_sample_tree() {
        assert_eq!(psi(&tree(SAMPLE), 2).unwrap().to_string(), FLIPPED);
        assert_eq!(psi(&tree(SAMPLE), 5).unwrap(), tree(SAMPLE));
        assert_eq!(psi(&tree("(1 * *)"), 1).unwrap(), tree("(1 * *)"));
        assert_eq!(psi(&tree("(1 * *)"), 2), Err(Error::NoSuchVertex(2)));
    }

    #[test]
    fn toggle_is_two_sided() {
        let t = phi("1122");
        let flipped = toggle(&t, 1).unwrap();
        assert_eq!(flipped.to_string(), "(1 (2 * * *) * *)");
        assert_eq!(flipped, phi("2211"));
        assert_eq!(toggle(&flipped, 1).unwrap(), t);
        assert_eq!(toggle(&t, 2).unwrap(), t);
    }

    #[test]
    fn canonicity() {
        assert!(is_canonical(&tree(CANONICAL)));
        assert!(!is_canonical(&tree(SAMPLE)));
        assert!(!is_canonical(&phi("2211")));
        assert!(is_canonical(&phi("1122")));
        assert!(is_canonical(&phi("1221")));
    }

    #[test]
    fn canonical_representatives() {
        // vertex 3 of the sample tree also carries an unbalanced y-leaf
        assert!(!is_canonical(&tree(FLIPPED)));
        assert_eq!(
            balance_report(&tree(SAMPLE))
                .vertices_with(VertexStatus::UnbalancedY)
                .collect::<Vec<_>>(),
            vec![2, 3]
        );
        assert_eq!(canonical_representative(&tree(SAMPLE)), tree(CANONICAL));
        assert_eq!(canonical_representative(&phi("2211")), phi("1122"));
        assert_eq!(canonical_representative(&tree(CANONICAL)), tree(CANONICAL));
    }

    #[test]
    fn orbits() {
        let o = orbit(&phi("1122"));
        assert_eq!(o.len(), 2);
        assert!(o.contains(&phi("2211")));
        assert_eq!(orbit(&phi("1221")), vec![phi("1221")]);
        assert_eq!(orbit(&tree("(1 * *)")).len(), 1);
    }

    #[test]
    fn canonical_enumeration_small() {
        let m: Multiset = "2,2".parse().unwrap();
        let trees: Vec<_> = enumerate_canonical(&m).collect();
        assert_eq!(trees, vec![phi("1122"), phi("1221")]);
        let c = leaf_census(&trees[0]);
        assert_eq!((c.zleaf, c.yleaf), (2, 1));
        let c = leaf_census(&trees[1]);
        assert_eq!((c.zleaf, c.yleaf), (1, 2));
        assert_eq!(enumerate_canonical(&"1".parse().unwrap()).count(), 1);
    }

    #[test]
    fn canonical_ternary() {
        let ternary_canonical = tree("(1 (2 * * (3 * * (5 * * *))) (7 * * *) (4 * (6 * * *) *))");
        assert!(is_canonical_ternary(&ternary_canonical).unwrap());
        let ternary = tree("(1 (2 (3 * * (5 * * *)) * *) (7 * * *) (4 * (6 * * *) *))");
        assert!(!is_canonical_ternary(&ternary).unwrap());
        assert!(is_canonical_ternary(&tree("(1 * * *)")).unwrap());
        assert!(matches!(
            is_canonical_ternary(&tree(SAMPLE)),
            Err(Error::NotTernary(_))
        ));
    }

    #[test]
    fn pruning() {
        let p = prune(&tree(CANONICAL));
        assert_eq!(p.weight().unwrap(), (3, 3));
        assert_eq!(
            p.to_string(),
            "(1 (2:v (3:v * (5:u *))) * (4:u (6:v * * (7:u))))"
        );
        assert_eq!(p.zleaf, 5);
        let p = prune(&phi("1221"));
        assert_eq!(p.weight().unwrap(), (2, 0));
        let p = prune(&phi("1122"));
        assert_eq!(p.types[&1], VertexType::Type3);
        assert_eq!(p.types[&2], VertexType::Type4);
        assert_eq!(p.weight().unwrap(), (1, 1));
        assert_eq!(
            prune(&tree(SAMPLE)).weight(),
            Err(Error::NotCanonical { vertex: 2 })
        );
    }
}

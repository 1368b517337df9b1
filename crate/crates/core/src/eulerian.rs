//! The Eulerian polynomial `C_M(x, y, z) = sum x^asc y^des z^plat` over
//! Stirling permutations, and the combinatorial tabulations of its partial
//! gamma-coefficients.

use std::collections::HashMap;

use crate::action::{enumerate_canonical, is_canonical_ternary};
use crate::error::{Error, Result};
use crate::gamma::GammaTable;
use crate::multiset::Multiset;
use crate::poly::{Exp, Poly3, Vars};
use crate::stirling::enumerate_stirling;
use crate::tree::{enumerate_trees, leaf_census};

/// `C_M` by direct enumeration. The empty multiset gives `x`, the base of the
/// derivative recursion.
pub fn c_polynomial_enum(m: &Multiset) -> Poly3 {
    if m.is_empty() {
        return Poly3::var(Vars::Xyz, 0);
    }
    let mut acc: HashMap<Exp, u64> = HashMap::new();
    for s in enumerate_stirling(m) {
        let p = s.statistics();
        *acc.entry([p.asc as u32, p.des as u32, p.plat as u32])
            .or_insert(0) += 1;
    }
    Poly3::from_terms(Vars::Xyz, acc)
}

/// Canonical Gessel trees tabulated by `(zleaf, yleaf)`.
pub fn gamma_count_trees(m: &Multiset) -> GammaTable {
    let mut t = GammaTable::new(m.size());
    for tree in enumerate_canonical(m) {
        let c = leaf_census(&tree);
        t.bump(c.zleaf, c.yleaf);
    }
    t
}

/// Permutations without double falls tabulated by `(plat, des)`.
pub fn gamma_count_perms(m: &Multiset) -> GammaTable {
    let mut t = GammaTable::new(m.size());
    for s in enumerate_stirling(m) {
        let p = s.statistics();
        if p.dfall == 0 {
            t.bump(p.plat, p.des);
        }
    }
    t
}

/// Permutations of `[n]_2` without descent-plateaux tabulated by `(des, aplat)`.
pub fn gamma_count_mma(n: usize) -> GammaTable {
    let m = Multiset::uniform(n, 2);
    let mut t = GammaTable::new(m.size());
    for s in enumerate_stirling(&m) {
        let p = s.statistics();
        if p.dplat == 0 {
            t.bump(p.des, p.aplat);
        }
    }
    t
}

/// Canonical ternary increasing trees on `[n]_2` tabulated by `(yleaf, zleaf)`.
///
/// Every z-leaf of a canonical ternary tree sits beside an x-leaf, so
/// `zleaf` also counts the vertices carrying both an x-leaf and a z-leaf.
pub fn gamma_count_ternary(n: usize) -> GammaTable {
    let m = Multiset::uniform(n, 2);
    let mut t = GammaTable::new(m.size());
    for tree in enumerate_trees(&m) {
        if is_canonical_ternary(&tree).expect("tree lives on [n]_2") {
            let c = leaf_census(&tree);
            t.bump(c.yleaf, c.zleaf);
        }
    }
    t
}

/// Checks that `m` is `[n]_2` and returns `n`.
pub fn stirling_square_order(m: &Multiset) -> Result<usize> {
    if m.is_stirling_square() {
        Ok(m.n())
    } else {
        Err(Error::NotTernary(m.to_string()))
    }
}

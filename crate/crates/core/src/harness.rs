//! Verification campaigns over families of multisets, and the worked examples.
//!
//! Every check compares two independently computed sides for each multiset
//! of a [`FamilySpec`]. A failure carries the multiset, the witness (a
//! permutation or tree, when there is one) and both sides as text.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::{
    balance_report, canonical_representative, enumerate_canonical, is_canonical,
    is_canonical_ternary, leaf_monomial, orbit, orbit_polynomial, prune, psi,
    vertices_with_x_and_z, VertexStatus,
};
use crate::error::{Error, Result};
use crate::eulerian::{
    c_polynomial_enum, gamma_count_mma, gamma_count_perms, gamma_count_ternary, gamma_count_trees,
};
use crate::gamma::{gamma_extract, gamma_reconstruct, GammaTable};
use crate::grammar::{c_polynomial_grammar, gamma_polynomial_grammar};
use crate::multiset::Multiset;
use crate::poly::{Poly3, Vars};
use crate::stirling::{enumerate_stirling, StirlingPermutation};
use crate::tree::{
    enumerate_trees, first_last_occurrence_flags, gessel_decomposition, gessel_forward,
    gessel_inverse, leaf_census, segment, segment_candidates, segment_word, validate_tree,
    GesselTree,
};

/// Default refusal threshold on the total number of permutations in a family.
pub const DEFAULT_COST_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    P2_1,
    P2_2,
    T3_1,
    T4_1,
    T4_3,
    T4_4,
    T5_2,
    P5_1,
    T6_1,
    T6_2,
    P6_3,
    SymXy,
    SymXyz,
    Orbit,
    RoundTrip,
    JkpZj,
}

impl CheckId {
    pub const ALL: [CheckId; 16] = [
        CheckId::P2_1,
        CheckId::P2_2,
        CheckId::T3_1,
        CheckId::T4_1,
        CheckId::T4_3,
        CheckId::T4_4,
        CheckId::T5_2,
        CheckId::P5_1,
        CheckId::T6_1,
        CheckId::T6_2,
        CheckId::P6_3,
        CheckId::SymXy,
        CheckId::SymXyz,
        CheckId::Orbit,
        CheckId::RoundTrip,
        CheckId::JkpZj,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::P2_1 => "P2.1",
            CheckId::P2_2 => "P2.2",
            CheckId::T3_1 => "T3.1",
            CheckId::T4_1 => "T4.1",
            CheckId::T4_3 => "T4.3",
            CheckId::T4_4 => "T4.4",
            CheckId::T5_2 => "T5.2",
            CheckId::P5_1 => "P5.1",
            CheckId::T6_1 => "T6.1",
            CheckId::T6_2 => "T6.2",
            CheckId::P6_3 => "P6.3",
            CheckId::SymXy => "SYM-XY",
            CheckId::SymXyz => "SYM-XYZ",
            CheckId::Orbit => "ORBIT",
            CheckId::RoundTrip => "ROUNDTRIP",
            CheckId::JkpZj => "JKP-ZJ",
        }
    }

    /// One-line statement of what the check compares.
    pub fn description(self) -> &'static str {
        match self {
            CheckId::P2_1 => "(asc, des, plat) of sigma equals (xleaf, yleaf, zleaf) of its tree",
            CheckId::P2_2 => "first/last occurrence flags equal x/y-leaf flags; segments reassemble from their decomposition",
            CheckId::T3_1 => "extracted gamma table = canonical trees by (zleaf, yleaf) = dfall-free words by (plat, des)",
            CheckId::T4_1 => "grammar derivative equals the enumerated Eulerian polynomial",
            CheckId::T4_3 => "sum of pruned canonical tree weights equals gamma(u, v, z)",
            CheckId::T4_4 => "(u, v, z) grammar derivative equals gamma(u, v, z)",
            CheckId::T5_2 => "dfall-free words by (plat, des) equal the extracted gamma table",
            CheckId::P5_1 => "double falls sit exactly at vertices with an unbalanced y-leaf",
            CheckId::T6_1 => "dplat-free words of [n]_2 by (des, aplat) equal the extracted gamma table",
            CheckId::T6_2 => "canonical ternary trees by (yleaf, zleaf) equal the extracted gamma table",
            CheckId::P6_3 => "dplat = 0 iff the tree is canonical ternary; aplat counts vertices with x- and z-leaves",
            CheckId::SymXy => "C_M is symmetric in x and y",
            CheckId::SymXyz => "C_M is symmetric in x, y and z on [n]_2",
            CheckId::Orbit => "orbits partition the trees, one canonical each, with the predicted size and sum",
            CheckId::RoundTrip => "phi and its inverse are mutually inverse and phi is injective",
            CheckId::JkpZj => "j-plateaux of sigma correspond to z_j-leaves of its tree",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

impl Serialize for CheckId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A finite family of multisets: every multiset with `1 <= n <= max_n`,
/// parts in `1..=max_k` and size at most `max_size`, together with `list`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub max_n: usize,
    pub max_k: u32,
    #[serde(rename = "max_K")]
    pub max_size: usize,
    #[serde(serialize_with = "serialize_list")]
    pub list: Vec<Multiset>,
}

fn serialize_list<S: serde::Serializer>(
    list: &[Multiset],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(list.iter().map(|m| m.mults()))
}

impl FamilySpec {
    pub fn grid(max_n: usize, max_k: u32, max_size: usize) -> Self {
        Self {
            max_n,
            max_k,
            max_size,
            list: Vec::new(),
        }
    }

    pub fn list(list: Vec<Multiset>) -> Self {
        Self {
            list,
            ..Self::default()
        }
    }

    /// The grid `(4, 3, 10)` plus `[n]_2` for `n <= 6` (or `7`) and `[n]` for `n <= 7`.
    pub fn default_campaign(with_seven_squared: bool) -> Self {
        let squares = if with_seven_squared { 7 } else { 6 };
        let mut list: Vec<Multiset> = (1..=squares).map(|n| Multiset::uniform(n, 2)).collect();
        list.extend((1..=7).map(|n| Multiset::uniform(n, 1)));
        Self {
            list,
            ..Self::grid(4, 3, 10)
        }
    }

    /// Members in lexicographic order of their multiplicity vectors, without repeats.
    pub fn members(&self) -> Vec<Multiset> {
        let mut out: BTreeSet<Multiset> = self.list.iter().cloned().collect();
        let mut cur = Vec::new();
        grid_rec(self.max_n, self.max_k, self.max_size, &mut cur, &mut out);
        out.into_iter().collect()
    }

    /// Total number of Stirling permutations over the family.
    pub fn cost(&self) -> u128 {
        self.members()
            .iter()
            .map(|m| m.count_stirling().to_u128().unwrap_or(u128::MAX))
            .fold(0, u128::saturating_add)
    }
}

fn grid_rec(
    max_n: usize,
    max_k: u32,
    budget: usize,
    cur: &mut Vec<u32>,
    out: &mut BTreeSet<Multiset>,
) {
    if !cur.is_empty() {
        out.insert(Multiset::new(cur.clone()).expect("parts are positive"));
    }
    if cur.len() == max_n {
        return;
    }
    for k in 1..=max_k {
        if k as usize > budget {
            break;
        }
        cur.push(k);
        grid_rec(max_n, max_k, budget - k as usize, cur, out);
        cur.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub jobs: usize,
    pub cost_cap: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            jobs: 1,
            cost_cap: DEFAULT_COST_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub multiset: String,
    pub witness: Option<String>,
    pub what: String,
    pub lhs: String,
    pub rhs: String,
    pub reproduce: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultisetResult {
    pub multiset: String,
    pub verdict: Verdict,
    /// Permutations or trees examined.
    pub items: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: CheckId,
    pub description: &'static str,
    pub family: FamilySpec,
    pub verdict: Verdict,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub results: Vec<MultisetResult>,
    pub elapsed_ms: f64,
}

impl CheckReport {
    pub fn is_pass(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// What a single-multiset check found: either it does not apply, or it
/// examined `items` objects and raised `flags`.
enum Outcome {
    Skip,
    Done { items: u64, flags: Vec<String> },
}

/// A mismatch found while checking one multiset; the multiset and the
/// reproduction command are filled in by the caller.
struct Mismatch {
    witness: Option<String>,
    what: String,
    lhs: String,
    rhs: String,
}

type CheckResult = std::result::Result<Outcome, Mismatch>;

fn expect_eq<T: PartialEq>(
    what: &str,
    witness: Option<&dyn fmt::Display>,
    lhs: &T,
    rhs: &T,
    show: impl Fn(&T) -> String,
) -> std::result::Result<(), Mismatch> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Mismatch {
            witness: witness.map(|w| w.to_string()),
            what: what.to_string(),
            lhs: show(lhs),
            rhs: show(rhs),
        })
    }
}

fn debug<T: fmt::Debug>(v: &T) -> String {
    format!("{v:?}")
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn poly_str(p: &Poly3) -> String {
    p.to_string()
}

fn extracted(m: &Multiset, c: &Poly3) -> std::result::Result<GammaTable, Mismatch> {
    gamma_extract(c, m.size()).map_err(|e| Mismatch {
        witness: None,
        what: "partial gamma-extraction of C_M".into(),
        lhs: e.to_string(),
        rhs: "a nonnegative table".into(),
    })
}

fn per_perm(
    m: &Multiset,
    mut f: impl FnMut(&StirlingPermutation) -> std::result::Result<(), Mismatch>,
) -> CheckResult {
    let mut items = 0;
    for s in enumerate_stirling(m) {
        f(&s)?;
        items += 1;
    }
    Ok(Outcome::Done {
        items,
        flags: Vec::new(),
    })
}

fn done(items: u64) -> CheckResult {
    Ok(Outcome::Done {
        items,
        flags: Vec::new(),
    })
}

fn square_order(m: &Multiset) -> Option<usize> {
    m.is_stirling_square().then(|| m.n())
}

fn run_check(id: CheckId, m: &Multiset) -> CheckResult {
    match id {
        CheckId::RoundTrip => check_roundtrip(m),
        CheckId::P2_1 => per_perm(m, |s| {
            let p = s.statistics();
            let c = leaf_census(&gessel_forward(s));
            expect_eq(
                "(asc, des, plat) vs (xleaf, yleaf, zleaf)",
                Some(s),
                &(p.asc, p.des, p.plat),
                &(c.xleaf, c.yleaf, c.zleaf),
                debug,
            )
        }),
        CheckId::JkpZj => per_perm(m, |s| {
            let p = s.statistics();
            let c = leaf_census(&gessel_forward(s));
            expect_eq(
                "plat_by_j vs zleaf_by_j",
                Some(s),
                &p.plat_by_j,
                &c.zleaf_by_j,
                json,
            )
        }),
        CheckId::P2_2 => check_segments(m),
        CheckId::P5_1 => per_perm(m, |s| {
            let p = s.statistics();
            let t = gessel_forward(s);
            let falls: BTreeSet<u32> = p.dfall_positions.iter().map(|&i| s.at(i)).collect();
            let report = balance_report(&t);
            let unbalanced: BTreeSet<u32> =
                report.vertices_with(VertexStatus::UnbalancedY).collect();
            expect_eq(
                "values at double falls vs vertices with an unbalanced y-leaf",
                Some(s),
                &falls,
                &unbalanced,
                debug,
            )?;
            expect_eq("dfall vs uyleaf", Some(s), &p.dfall, &report.uyleaf, debug)
        }),
        CheckId::T3_1 => {
            let c = c_polynomial_enum(m);
            let g = extracted(m, &c)?;
            expect_eq(
                "gamma_extract(C_M) vs canonical trees",
                None,
                &g,
                &gamma_count_trees(m),
                json,
            )?;
            expect_eq(
                "gamma_extract(C_M) vs dfall-free permutations",
                None,
                &g,
                &gamma_count_perms(m),
                json,
            )?;
            expect_eq(
                "gamma_reconstruct(table) vs C_M",
                None,
                &gamma_reconstruct(&g),
                &c,
                poly_str,
            )?;
            done(g.entries().len() as u64)
        }
        CheckId::T5_2 => {
            let g = extracted(m, &c_polynomial_enum(m))?;
            expect_eq(
                "gamma_extract(C_M) vs dfall-free permutations",
                None,
                &g,
                &gamma_count_perms(m),
                json,
            )?;
            done(g.entries().len() as u64)
        }
        CheckId::T4_1 => {
            expect_eq(
                "grammar vs enumeration",
                None,
                &c_polynomial_grammar(m),
                &c_polynomial_enum(m),
                poly_str,
            )?;
            done(1)
        }
        CheckId::T4_3 => {
            let g = extracted(m, &c_polynomial_enum(m))?;
            let mut sum = Poly3::zero(Vars::Uvz);
            let mut items = 0;
            for t in enumerate_canonical(m) {
                let w = prune(&t).weight_with_z().map_err(|e| Mismatch {
                    witness: Some(t.to_string()),
                    what: "weight of a canonical tree".into(),
                    lhs: e.to_string(),
                    rhs: "a (u, v) weight".into(),
                })?;
                sum += &w;
                items += 1;
            }
            expect_eq(
                "sum of pruned weights vs gamma(u, v, z)",
                None,
                &sum,
                &g.to_uvz(),
                poly_str,
            )?;
            done(items)
        }
        CheckId::T4_4 => {
            let c = c_polynomial_enum(m);
            let g = extracted(m, &c)?;
            let grammar = gamma_polynomial_grammar(m).map_err(|e| Mismatch {
                witness: None,
                what: "(u, v, z) derivation".into(),
                lhs: e.to_string(),
                rhs: String::new(),
            })?;
            expect_eq(
                "(u, v, z) grammar vs gamma(u, v, z)",
                None,
                &grammar,
                &g.to_uvz(),
                poly_str,
            )?;
            done(1)
        }
        CheckId::T6_1 | CheckId::T6_2 => {
            let Some(n) = square_order(m) else {
                return Ok(Outcome::Skip);
            };
            let g = extracted(m, &c_polynomial_enum(m))?;
            let (what, counted) = if id == CheckId::T6_1 {
                (
                    "gamma_extract(C_M) vs dplat-free permutations",
                    gamma_count_mma(n),
                )
            } else {
                (
                    "gamma_extract(C_M) vs canonical ternary trees",
                    gamma_count_ternary(n),
                )
            };
            expect_eq(what, None, &g, &counted, json)?;
            done(g.entries().len() as u64)
        }
        CheckId::P6_3 => {
            if square_order(m).is_none() {
                return Ok(Outcome::Skip);
            }
            per_perm(m, |s| {
                let p = s.statistics();
                let t = gessel_forward(s);
                let ternary = is_canonical_ternary(&t).expect("multiset is [n]_2");
                expect_eq(
                    "dplat = 0 vs canonical ternary",
                    Some(s),
                    &(p.dplat == 0),
                    &ternary,
                    debug,
                )?;
                expect_eq(
                    "aplat vs vertices with x- and z-leaves",
                    Some(s),
                    &p.aplat,
                    &vertices_with_x_and_z(&t).0,
                    debug,
                )
            })
        }
        CheckId::SymXy | CheckId::SymXyz => {
            let slots: &[usize] = if id == CheckId::SymXy {
                &[0, 1]
            } else if square_order(m).is_some() {
                &[0, 1, 2]
            } else {
                return Ok(Outcome::Skip);
            };
            let c = c_polynomial_enum(m);
            for w in slots.windows(2) {
                expect_eq(
                    "C_M vs C_M with two variables exchanged",
                    None,
                    &c,
                    &c.swap_vars(w[0], w[1]),
                    poly_str,
                )?;
            }
            done(1)
        }
        CheckId::Orbit => check_orbits(m),
    }
}

fn check_roundtrip(m: &Multiset) -> CheckResult {
    let mut images: HashSet<String> = HashSet::new();
    let mut items = 0u64;
    for s in enumerate_stirling(m) {
        let t = gessel_forward(&s);
        let violations = validate_tree(t.root(), m);
        expect_eq(
            "violations of phi(sigma)",
            Some(&s),
            &violations,
            &Vec::new(),
            debug,
        )?;
        let back = gessel_inverse(&t).map_err(|e| Mismatch {
            witness: Some(s.to_string()),
            what: "inverse of phi(sigma)".into(),
            lhs: e.to_string(),
            rhs: s.to_string(),
        })?;
        expect_eq(
            "inverse(phi(sigma)) vs sigma",
            Some(&s),
            &back.word().to_vec(),
            &s.word().to_vec(),
            debug,
        )?;
        let text = t.to_string();
        let reparsed: std::result::Result<GesselTree, _> = text.parse();
        expect_eq(
            "reparsed serialization vs tree",
            Some(&s),
            &reparsed.ok(),
            &Some(t.clone()),
            |t| t.as_ref().map_or("unparseable".into(), |t| t.to_string()),
        )?;
        if !images.insert(text.clone()) {
            return Err(Mismatch {
                witness: Some(s.to_string()),
                what: "phi is injective".into(),
                lhs: text,
                rhs: "a fresh tree".into(),
            });
        }
        items += 1;
    }
    let expected = m.count_stirling().to_u64().unwrap_or(u64::MAX);
    expect_eq(
        "enumerated permutations vs count_stirling",
        None,
        &items,
        &expected,
        debug,
    )?;
    let trees = enumerate_trees(m);
    expect_eq(
        "grafted trees vs permutations",
        None,
        &(trees.len() as u64),
        &items,
        debug,
    )?;
    for t in &trees {
        let s = gessel_inverse(t).expect("grafted trees are valid");
        expect_eq(
            "phi(inverse(T)) vs T",
            Some(t),
            &gessel_forward(&s),
            t,
            |t| t.to_string(),
        )?;
        if !images.contains(&t.to_string()) {
            return Err(Mismatch {
                witness: Some(t.to_string()),
                what: "grafted tree is an image of phi".into(),
                lhs: "missing".into(),
                rhs: "present".into(),
            });
        }
    }
    done(items)
}

fn check_segments(m: &Multiset) -> CheckResult {
    let mut items = 0u64;
    let mut ambiguous = 0u64;
    for s in enumerate_stirling(m) {
        let census = leaf_census(&gessel_forward(&s));
        for i in 1..=m.n() as u32 {
            let flags = first_last_occurrence_flags(&s, i).expect("value occurs");
            let v = census.per_vertex[&i];
            expect_eq(
                &format!("occurrence flags of {i} vs (has_x, has_y)"),
                Some(&s),
                &flags,
                &(v.has_x, v.has_y),
                debug,
            )?;

            let range = segment(&s, i).expect("value occurs");
            let (r, e) = (*range.start(), *range.end());
            let bounded = s.at(r - 1) < s.at(r) && s.at(e) > s.at(e + 1);
            expect_eq(
                &format!("boundary conditions of segment {i}"),
                Some(&s),
                &bounded,
                &true,
                debug,
            )?;

            let whole = segment_word(&s, i).expect("value occurs");
            let factors = gessel_decomposition(&s, i).expect("value occurs");
            let mut joined = Vec::with_capacity(whole.len());
            for (idx, w) in factors.iter().enumerate() {
                if idx > 0 {
                    joined.push(i);
                }
                joined.extend_from_slice(w);
                if let Some(&low) = w.iter().min() {
                    let own = segment_word(&s, low).expect("value occurs");
                    expect_eq(
                        &format!("factor of segment {i} vs segment {low}"),
                        Some(&s),
                        w,
                        &own,
                        debug,
                    )?;
                }
            }
            expect_eq(
                &format!("reassembled decomposition of {i} vs segment"),
                Some(&s),
                &joined,
                &whole,
                debug,
            )?;

            let candidates = segment_candidates(&s, i).expect("value occurs");
            if !candidates.contains(&range) {
                return Err(Mismatch {
                    witness: Some(s.to_string()),
                    what: format!("segment {i} among boundary-condition windows"),
                    lhs: debug(&range),
                    rhs: debug(&candidates),
                });
            }
            if candidates.len() > 1 {
                ambiguous += 1;
            }
        }
        items += 1;
    }
    let flags = if ambiguous > 0 {
        vec![format!("{ambiguous} (permutation, value) pairs admit several windows meeting the boundary conditions; the maximal one is used")]
    } else {
        Vec::new()
    };
    Ok(Outcome::Done { items, flags })
}

fn check_orbits(m: &Multiset) -> CheckResult {
    let trees = enumerate_trees(m);
    let universe: HashSet<&GesselTree> = trees.iter().collect();
    let mut seen: HashSet<GesselTree> = HashSet::new();
    let mut total = Poly3::zero(Vars::Xyz);
    for t in &trees {
        if seen.contains(t) {
            continue;
        }
        let members = orbit(t);
        let canon: Vec<&GesselTree> = members.iter().filter(|u| is_canonical(u)).collect();
        expect_eq(
            "canonical trees in the orbit",
            Some(t),
            &canon.len(),
            &1,
            debug,
        )?;
        let canon = canon[0];
        expect_eq(
            "canonical_representative vs canonical orbit member",
            Some(t),
            &canonical_representative(t),
            canon,
            |t| t.to_string(),
        )?;
        let ux = balance_report(canon).uxleaf;
        expect_eq(
            "orbit size vs 2^uxleaf",
            Some(canon),
            &members.len(),
            &(1usize << ux),
            debug,
        )?;
        let mut sum = Poly3::zero(Vars::Xyz);
        for u in &members {
            if !universe.contains(u) {
                return Err(Mismatch {
                    witness: Some(u.to_string()),
                    what: "orbit stays inside the tree set".into(),
                    lhs: "outside".into(),
                    rhs: "inside".into(),
                });
            }
            if !seen.insert(u.clone()) {
                return Err(Mismatch {
                    witness: Some(u.to_string()),
                    what: "orbits are disjoint".into(),
                    lhs: "tree met twice".into(),
                    rhs: "tree met once".into(),
                });
            }
            sum += &leaf_monomial(u);
        }
        expect_eq(
            "orbit sum vs (xy)^yleaf (x+y)^uxleaf z^zleaf",
            Some(canon),
            &sum,
            &orbit_polynomial(canon),
            poly_str,
        )?;
        total += &sum;
    }
    expect_eq(
        "trees covered by orbits",
        None,
        &seen.len(),
        &trees.len(),
        debug,
    )?;
    expect_eq(
        "sum over orbits vs C_M",
        None,
        &total,
        &c_polynomial_enum(m),
        poly_str,
    )?;
    done(trees.len() as u64)
}

fn check_one(id: CheckId, m: &Multiset) -> MultisetResult {
    let start = Instant::now();
    let outcome = run_check(id, m);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let multiset = m.to_string();
    match outcome {
        Ok(Outcome::Skip) => MultisetResult {
            multiset,
            verdict: Verdict::Skip,
            items: 0,
            flags: Vec::new(),
            counterexample: None,
            elapsed_ms,
        },
        Ok(Outcome::Done { items, flags }) => MultisetResult {
            multiset,
            verdict: Verdict::Pass,
            items,
            flags,
            counterexample: None,
            elapsed_ms,
        },
        Err(e) => {
            let reproduce = format!("stirling-gamma verify --check {id} --multisets '{m}'");
            MultisetResult {
                multiset: multiset.clone(),
                verdict: Verdict::Fail,
                items: 0,
                flags: Vec::new(),
                counterexample: Some(Counterexample {
                    multiset,
                    witness: e.witness,
                    what: e.what,
                    lhs: e.lhs,
                    rhs: e.rhs,
                    reproduce,
                }),
                elapsed_ms,
            }
        }
    }
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
}

fn guard(family: &FamilySpec, opts: &VerifyOptions) -> Result<Vec<Multiset>> {
    let members = family.members();
    let cost = members
        .iter()
        .map(|m| m.count_stirling().to_u128().unwrap_or(u128::MAX))
        .fold(0, u128::saturating_add);
    if cost > opts.cost_cap {
        return Err(Error::FamilyTooLarge {
            cost,
            cap: opts.cost_cap,
        });
    }
    Ok(members)
}

fn assemble(
    id: CheckId,
    family: &FamilySpec,
    results: Vec<MultisetResult>,
    elapsed_ms: f64,
) -> CheckReport {
    let count = |v| results.iter().filter(|r| r.verdict == v).count();
    let (passed, failed, skipped) = (
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Skip),
    );
    let verdict = if failed > 0 {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    CheckReport {
        check: id,
        description: id.description(),
        family: family.clone(),
        verdict,
        passed,
        failed,
        skipped,
        results,
        elapsed_ms,
    }
}

/// Runs one check over every member of `family`, `opts.jobs` multisets at a time.
pub fn verify(id: CheckId, family: &FamilySpec, opts: &VerifyOptions) -> Result<CheckReport> {
    Ok(verify_many(&[id], family, opts)?.pop().expect("one report"))
}

/// Runs several checks over the same family; reports come back in the order of `ids`.
pub fn verify_many(
    ids: &[CheckId],
    family: &FamilySpec,
    opts: &VerifyOptions,
) -> Result<Vec<CheckReport>> {
    let members = guard(family, opts)?;
    let pool = pool(opts.jobs);
    Ok(ids
        .iter()
        .map(|&id| {
            let start = Instant::now();
            let results: Vec<MultisetResult> =
                pool.install(|| members.par_iter().map(|m| check_one(id, m)).collect());
            assemble(id, family, results, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenItem {
    pub name: &'static str,
    pub verdict: Verdict,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenReport {
    pub verdict: Verdict,
    pub items: Vec<GoldenItem>,
}

pub const TERNARY_PERM: &str = "33552217714664";
pub const TERNARY_TREE: &str = "(1 (2 (3 * * (5 * * *)) * *) (7 * * *) (4 * (6 * * *) *))";
pub const SAMPLE_PERM: &str = "5533211466674";
pub const SAMPLE_TREE: &str = "(1 (2 (3 (5 * * *) * *) *) * (4 * (6 * * * (7 * *)) *))";
pub const FLIPPED_TREE: &str = "(1 (2 * (3 (5 * * *) * *)) * (4 * (6 * * * (7 * *)) *))";
pub const CANONICAL_TREE: &str = "(1 (2 * (3 * * (5 * * *))) * (4 * (6 * * * (7 * *)) *))";
pub const PRUNED_TREE: &str = "(1 (2:v (3:v * (5:u *))) * (4:u (6:v * * (7:u))))";
pub const TERNARY_CANONICAL_PERM: &str = "22335517714664";
pub const TERNARY_CANONICAL_TREE: &str =
    "(1 (2 * * (3 * * (5 * * *))) (7 * * *) (4 * (6 * * *) *))";
pub const SAMPLE_SEGMENTS: [&str; 7] = [
    "5533211466674",
    "55332",
    "5533",
    "466674",
    "55",
    "6667",
    "7",
];
pub const DFALL_PERM: &str = "2533114664";

fn item(name: &'static str, expected: impl fmt::Display, actual: impl fmt::Display) -> GoldenItem {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    let verdict = if expected == actual {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    GoldenItem {
        name,
        verdict,
        expected,
        actual,
    }
}

fn tree(s: &str) -> std::result::Result<GesselTree, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn perm(s: &str) -> StirlingPermutation {
    s.parse().expect("golden permutations are valid")
}

fn compact(s: &StirlingPermutation) -> String {
    s.word().iter().map(u32::to_string).collect()
}

fn shown<T: fmt::Display, E: fmt::Display>(r: std::result::Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Replays the worked examples: the sample permutations and trees, the
/// segment table, the flip, the pruned weight, and the plateau and double
/// fall examples.
pub fn golden_examples() -> GoldenReport {
    let mut items = Vec::new();

    let ternary = perm(TERNARY_PERM);
    let t1 = gessel_forward(&ternary);
    items.push(item("ternary-forward", TERNARY_TREE, &t1));
    let back = tree(TERNARY_TREE).and_then(|t| {
        gessel_inverse(&t)
            .map(|s| compact(&s))
            .map_err(|e| e.to_string())
    });
    items.push(item("ternary-inverse", TERNARY_PERM, shown(back)));
    let c = leaf_census(&t1);
    items.push(item(
        "ternary-census",
        "(5, 5, 5)",
        format!("({}, {}, {})", c.xleaf, c.yleaf, c.zleaf),
    ));

    let sample = perm(SAMPLE_PERM);
    let t2 = gessel_forward(&sample);
    items.push(item("sample-forward", SAMPLE_TREE, &t2));
    items.push(item(
        "sample-inverse",
        SAMPLE_PERM,
        shown(gessel_inverse(&t2).map(|s| compact(&s))),
    ));
    let segments: Vec<String> = (1..=7)
        .map(|i| {
            segment_word(&sample, i)
                .map(|w| w.iter().map(u32::to_string).collect())
                .unwrap_or_default()
        })
        .collect();
    items.push(item(
        "sample-segments",
        SAMPLE_SEGMENTS.join(" "),
        segments.join(" "),
    ));

    items.push(item("sample-psi2", FLIPPED_TREE, shown(psi(&t2, 2))));
    items.push(item(
        "canonical-is-canonical",
        true,
        tree(CANONICAL_TREE)
            .map(|t| is_canonical(&t))
            .unwrap_or(false),
    ));
    items.push(item(
        "sample-canonical-representative",
        CANONICAL_TREE,
        canonical_representative(&t2),
    ));

    let pruned = tree(CANONICAL_TREE).map(|t| prune(&t));
    items.push(item("pruned-pruned", PRUNED_TREE, shown(pruned.clone())));
    let weight = pruned.and_then(|p| p.weight().map_err(|e| e.to_string()));
    items.push(item(
        "pruned-weight",
        "u^3*v^3",
        shown(weight.map(|(u, v)| format!("u^{u}*v^{v}"))),
    ));

    let ternary_canonical = perm(TERNARY_CANONICAL_PERM);
    let t7 = gessel_forward(&ternary_canonical);
    items.push(item(
        "ternary-canonical-forward",
        TERNARY_CANONICAL_TREE,
        &t7,
    ));
    items.push(item(
        "ternary-canonical-is-canonical-ternary",
        true,
        shown(is_canonical_ternary(&t7)),
    ));
    items.push(item(
        "ternary-canonical-dplat",
        0,
        ternary_canonical.statistics().dplat,
    ));

    let dfall = perm(DFALL_PERM).statistics();
    items.push(item(
        "dfall-positions",
        "[4]",
        format!("{:?}", dfall.dfall_positions),
    ));
    items.push(item(
        "dfall-descents",
        "[2, 4, 9, 10]",
        format!("{:?}", dfall.descent_positions),
    ));

    let dplat: Vec<usize> = ternary
        .statistics()
        .plateau_positions
        .into_iter()
        .filter(|&i| ternary.at(i - 1) > ternary.at(i))
        .collect();
    items.push(item(
        "ternary-descent-plateaux",
        "[5]",
        format!("{dplat:?}"),
    ));
    items.push(item(
        "ternary-is-canonical-ternary",
        false,
        shown(is_canonical_ternary(&t1)),
    ));

    let verdict = if items.iter().all(|i| i.verdict == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    GoldenReport { verdict, items }
}

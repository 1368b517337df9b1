//! Partial gamma-expansions.
//!
//! A polynomial symmetric in `x, y` whose `z^i` slice is homogeneous of degree
//! `d_i` has a unique expansion
//!
//! ```text
//!     sum_i z^i sum_j g(i, j) (xy)^j (x + y)^(d_i - 2j)
//! ```
//!
//! The basis element for `j` has least x-exponent `j` with coefficient 1 on
//! `x^j y^(d-j)`, so the coefficients can be peeled off in order of
//! increasing `j`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GammaError;
use crate::poly::{Poly3, Vars};

/// Sparse map `(i, j) -> g(i, j)` where `i` is the z-exponent and `j` the
/// exponent of `xy` (equivalently of `u`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GammaTable {
    size: usize,
    entries: BTreeMap<(u32, u32), BigInt>,
}

impl GammaTable {
    /// An empty table for a multiset of total size `size` (the `K` of the expansion).
    pub fn new(size: usize) -> Self {
        Self {
            size,
            entries: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.entries
    }

    pub fn get(&self, i: u32, j: u32) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Power of `x + y` (equivalently `v`) that goes with entry `(i, j)`.
    pub fn v_degree(&self, i: u32, j: u32) -> Option<u32> {
        (self.size as u32 + 1).checked_sub(i)?.checked_sub(2 * j)
    }

    /// Adds `g` to entry `(i, j)`; entries that cancel to zero are dropped.
    ///
    /// Panics when `i + 2j > K + 1`, which has no basis element.
    pub fn add(&mut self, i: u32, j: u32, g: impl Into<BigInt>) {
        assert!(
            self.v_degree(i, j).is_some(),
            "entry ({i},{j}) out of range for K={}",
            self.size
        );
        let g = g.into();
        let e = self.entries.entry((i, j)).or_default();
        *e += g;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn bump(&mut self, i: usize, j: usize) {
        self.add(i as u32, j as u32, 1);
    }

    pub fn is_positive(&self) -> bool {
        self.entries.values().all(Signed::is_positive)
    }

    /// Expands the table back into `(x, y, z)`.
    pub fn reconstruct(&self) -> Poly3 {
        let mut out = Poly3::zero(Vars::Xyz);
        for (&(i, j), g) in &self.entries {
            let d = self.v_degree(i, j).expect("entries are in range");
            for (t, binom) in binomial_row(d).into_iter().enumerate() {
                let t = t as u32;
                out.add_term([j + t, j + d - t, i], binom * g);
            }
        }
        out
    }

    /// The generating polynomial `sum g(i,j) u^j v^(K+1-i-2j) z^i`.
    pub fn to_uvz(&self) -> Poly3 {
        let terms = self.entries.iter().map(|(&(i, j), g)| {
            let d = self.v_degree(i, j).expect("entries are in range");
            ([j, d, i], g.clone())
        });
        Poly3::from_terms(Vars::Uvz, terms)
    }

    /// Reads a table off a `(u, v, z)` polynomial whose terms all have the
    /// shape `u^j v^(K+1-i-2j) z^i`.
    pub fn from_uvz(p: &Poly3, size: usize) -> Result<Self, GammaError> {
        let mut table = Self::new(size);
        for (e, c) in p.terms() {
            let [j, v, i] = *e;
            if i + 2 * j + v != size as u32 + 1 {
                return Err(GammaError::NonHomogeneous {
                    i,
                    expected: size as u32 + 1 - i,
                    found: 2 * j + v,
                });
            }
            table.add(i, j, c.clone());
        }
        Ok(table)
    }
}

pub fn gamma_reconstruct(g: &GammaTable) -> Poly3 {
    g.reconstruct()
}

fn binomial_row(d: u32) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(d as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for t in 0..d {
        c = c * (d - t) / (t + 1);
        row.push(c.clone());
    }
    row
}

fn check_xy_symmetric(p: &Poly3) -> Result<(), GammaError> {
    for (e, c) in p.terms() {
        if p.coeff([e[1], e[0], e[2]]) != *c {
            return Err(GammaError::Asymmetric {
                a: e[0],
                b: e[1],
                c: e[2],
            });
        }
    }
    Ok(())
}

/// One peeled coefficient: slice `i`, basis index `j`, slice degree `d`.
struct Peeled {
    i: u32,
    j: u32,
    d: u32,
    g: BigInt,
}

/// Rewrites every z-slice in the `(xy)^j (x+y)^(d-2j)` basis. With
/// `expected_size = Some(K)` the slice `z^i` must have degree `K+1-i`;
/// otherwise each slice keeps its own degree. Unless `signed`, every peeled
/// coefficient must be positive.
fn peel(p: &Poly3, expected_size: Option<usize>, signed: bool) -> Result<Vec<Peeled>, GammaError> {
    check_xy_symmetric(p)?;
    let mut out = Vec::new();
    for (i, slice) in p.z_slices() {
        let mut slice = slice;
        let found =
            |s: &BTreeMap<(u32, u32), BigInt>| s.keys().next().map(|(a, b)| a + b).unwrap_or(0);
        let d = match expected_size {
            Some(k) => (k as u32 + 1)
                .checked_sub(i)
                .ok_or(GammaError::NonHomogeneous {
                    i,
                    expected: 0,
                    found: found(&slice),
                })?,
            None => found(&slice),
        };
        if let Some((a, b)) = slice.keys().find(|(a, b)| a + b != d) {
            return Err(GammaError::NonHomogeneous {
                i,
                expected: d,
                found: a + b,
            });
        }
        while let Some((&(j, b), g)) = slice.iter().next() {
            let g = g.clone();
            debug_assert_eq!(j + b, d);
            if 2 * j > d {
                return Err(GammaError::Residue {
                    i,
                    j,
                    value: g.to_string(),
                });
            }
            if !signed && !g.is_positive() {
                return Err(GammaError::NonPositive {
                    i,
                    j,
                    value: g.to_string(),
                });
            }
            for (t, binom) in binomial_row(d - 2 * j).into_iter().enumerate() {
                let key = (j + t as u32, d - j - t as u32);
                let e = slice.entry(key).or_default();
                *e -= &g * binom;
                if e.is_zero() {
                    slice.remove(&key);
                }
            }
            out.push(Peeled { i, j, d, g });
        }
    }
    Ok(out)
}

/// Partial gamma-coefficients of `p` for a multiset of total size `size`.
pub fn gamma_extract(p: &Poly3, size: usize) -> Result<GammaTable, GammaError> {
    let mut table = GammaTable::new(size);
    for Peeled { i, j, g, .. } in peel(p, Some(size), false)? {
        table.add(i, j, g);
    }
    Ok(table)
}

/// Rewrites `p` in `u = xy`, `v = x + y`, slice by slice. Signed mode accepts
/// negative coefficients (e.g. `x^2 + y^2 = v^2 - 2u`).
pub fn to_uv_basis(p: &Poly3, signed: bool) -> Result<Poly3, GammaError> {
    let terms = peel(p, None, signed)?
        .into_iter()
        .map(|Peeled { i, j, d, g }| ([j, d - 2 * j, i], g));
    Ok(Poly3::from_terms(Vars::Uvz, terms))
}

// JSON: {"K": K, "entries": [{"i": i, "j": j, "g": g}]} sorted by (i, j).

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Count {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: u32,
    j: u32,
    g: Count,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(rename = "K")]
    size: usize,
    entries: Vec<EntryJson>,
}

impl Serialize for GammaTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableJson {
            size: self.size,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), g)| EntryJson {
                    i,
                    j,
                    g: g.to_i64()
                        .map(Count::Small)
                        .unwrap_or_else(|| Count::Big(g.to_string())),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GammaTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TableJson::deserialize(d)?;
        let mut table = GammaTable::new(raw.size);
        for e in raw.entries {
            let g = match e.g {
                Count::Small(v) => BigInt::from(v),
                Count::Big(s) => s
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad count {s}")))?,
            };
            if table.v_degree(e.i, e.j).is_none() {
                return Err(D::Error::custom(format!(
                    "entry ({},{}) out of range",
                    e.i, e.j
                )));
            }
            table.add(e.i, e.j, g);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz(terms: &[([u32; 3], i64)]) -> Poly3 {
        Poly3::from_terms(Vars::Xyz, terms.iter().copied())
    }

    fn table(size: usize, entries: &[(u32, u32, i64)]) -> GammaTable {
        let mut t = GammaTable::new(size);
        for &(i, j, g) in entries {
            t.add(i, j, g);
        }
        t
    }

    #[test]
    fn extract_examples() {
        let c22 = xyz(&[([2, 2, 1], 1), ([2, 1, 2], 1), ([1, 2, 2], 1)]);
        assert_eq!(
            gamma_extract(&c22, 4).unwrap(),
            table(4, &[(1, 2, 1), (2, 1, 1)])
        );
        let a2 = xyz(&[([2, 1, 0], 1), ([1, 2, 0], 1)]);
        assert_eq!(gamma_extract(&a2, 2).unwrap(), table(2, &[(0, 1, 1)]));
        let xy = xyz(&[([1, 1, 0], 1)]);
        assert_eq!(gamma_extract(&xy, 1).unwrap(), table(1, &[(0, 1, 1)]));
    }

    #[test]
    fn extract_errors() {
        let asym = xyz(&[([2, 1, 0], 1)]);
        assert!(matches!(
            gamma_extract(&asym, 2),
            Err(GammaError::Asymmetric { .. })
        ));
        let inhomog = xyz(&[([1, 1, 0], 1), ([2, 2, 0], 1)]);
        assert!(matches!(
            gamma_extract(&inhomog, 3),
            Err(GammaError::NonHomogeneous { i: 0, .. })
        ));
        let squares = xyz(&[([2, 0, 0], 1), ([0, 2, 0], 1)]);
        assert!(matches!(
            gamma_extract(&squares, 1),
            Err(GammaError::NonPositive { i: 0, j: 1, .. })
        ));
        let neg = xyz(&[([1, 1, 0], -1)]);
        assert!(matches!(
            gamma_extract(&neg, 1),
            Err(GammaError::NonPositive { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let c22 = xyz(&[([2, 2, 1], 1), ([2, 1, 2], 1), ([1, 2, 2], 1)]);
        assert_eq!(table(4, &[(1, 2, 1), (2, 1, 1)]).reconstruct(), c22);
        assert!(GammaTable::new(5).reconstruct().is_zero());
        assert_eq!(
            table(2, &[(0, 1, 1)]).reconstruct(),
            xyz(&[([2, 1, 0], 1), ([1, 2, 0], 1)])
        );
    }

    #[test]
    fn uv_basis() {
        let a2 = xyz(&[([2, 1, 0], 1), ([1, 2, 0], 1)]);
        assert_eq!(
            to_uv_basis(&a2, false).unwrap(),
            Poly3::monomial(Vars::Uvz, [1, 1, 0], 1)
        );
        let squares = xyz(&[([2, 0, 0], 1), ([0, 2, 0], 1)]);
        let expected = Poly3::from_terms(Vars::Uvz, [([0, 2, 0], 1), ([1, 0, 0], -2)]);
        assert_eq!(to_uv_basis(&squares, true).unwrap(), expected);
        assert_eq!(expected.uv_to_xy().unwrap(), squares);
        assert!(to_uv_basis(&squares, false).is_err());
    }

    #[test]
    fn uvz_round_trip() {
        let t = table(4, &[(1, 2, 1), (2, 1, 1)]);
        let p = t.to_uvz();
        assert_eq!(
            p,
            Poly3::from_terms(Vars::Uvz, [([2, 0, 1], 1), ([1, 1, 2], 1)])
        );
        assert_eq!(GammaTable::from_uvz(&p, 4).unwrap(), t);
        assert_eq!(p.uv_to_xy().unwrap(), t.reconstruct());
    }

    #[test]
    fn json_shape() {
        let t = table(4, &[(2, 1, 1), (1, 2, 3)]);
        let j = serde_json::to_string(&t).unwrap();
        assert_eq!(
            j,
            r#"{"K":4,"entries":[{"i":1,"j":2,"g":3},{"i":2,"j":1,"g":1}]}"#
        );
        assert_eq!(serde_json::from_str::<GammaTable>(&j).unwrap(), t);
        assert!(
            serde_json::from_str::<GammaTable>(r#"{"K":1,"entries":[{"i":0,"j":2,"g":1}]}"#)
                .is_err()
        );
    }
}

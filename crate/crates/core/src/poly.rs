//! Sparse trivariate polynomials with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Variable signature. Exponent slot 2 is always `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vars {
    Xyz,
    Uvz,
}

impl Vars {
    pub fn names(self) -> [&'static str; 3] {
        match self {
            Vars::Xyz => ["x", "y", "z"],
            Vars::Uvz => ["u", "v", "z"],
        }
    }

    fn from_names(names: &[String]) -> Option<Self> {
        match names
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .as_slice()
        {
            ["x", "y", "z"] => Some(Vars::Xyz),
            ["u", "v", "z"] => Some(Vars::Uvz),
            _ => None,
        }
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names().join(","))
    }
}

pub type Exp = [u32; 3];

/// Terms are kept in a `BTreeMap`, so iteration is lexicographic on the
/// exponent triple and no zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly3 {
    vars: Vars,
    terms: BTreeMap<Exp, BigInt>,
}

impl Poly3 {
    pub fn zero(vars: Vars) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: Vars) -> Self {
        Self::monomial(vars, [0, 0, 0], 1)
    }

    pub fn monomial(vars: Vars, exp: Exp, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(exp, coeff.into());
        p
    }

    /// The variable in exponent slot `idx`.
    pub fn var(vars: Vars, idx: usize) -> Self {
        let mut exp = [0; 3];
        exp[idx] = 1;
        Self::monomial(vars, exp, 1)
    }

    pub fn from_terms<C: Into<BigInt>>(
        vars: Vars,
        terms: impl IntoIterator<Item = (Exp, C)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    /// Reinterprets the exponent slots under another signature.
    pub fn with_vars(mut self, vars: Vars) -> Self {
        self.vars = vars;
        self
    }

    pub fn terms(&self) -> &BTreeMap<Exp, BigInt> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: Exp) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exp: Exp, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        Self {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.vars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exchanges exponent slots `a` and `b`.
    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        Self {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e.swap(a, b);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// True iff `self` is invariant under every permutation of the given slots.
    /// Adjacent transpositions generate the symmetric group, so checking them suffices.
    pub fn is_symmetric(&self, slots: &[usize]) -> bool {
        slots
            .windows(2)
            .all(|w| self.swap_vars(w[0], w[1]) == *self)
    }

    /// Groups the terms by z-exponent: `z^i -> {(a, b) -> coeff}`.
    pub fn z_slices(&self) -> BTreeMap<u32, BTreeMap<(u32, u32), BigInt>> {
        let mut out: BTreeMap<u32, BTreeMap<(u32, u32), BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e[2]).or_default().insert((e[0], e[1]), c.clone());
        }
        out
    }

    /// Substitutes `u = xy`, `v = x + y` into a `(u,v,z)` polynomial.
    pub fn uv_to_xy(&self) -> Result<Self, Error> {
        if self.vars != Vars::Uvz {
            return Err(Error::SignatureMismatch {
                expected: Vars::Uvz.to_string(),
                found: self.vars.to_string(),
            });
        }
        let xy = Self::monomial(Vars::Xyz, [1, 1, 0], 1);
        let x_plus_y = Self::from_terms(Vars::Xyz, [([1, 0, 0], 1), ([0, 1, 0], 1)]);
        let mut out = Self::zero(Vars::Xyz);
        for (e, c) in &self.terms {
            let term = &(&xy.pow(e[0]) * &x_plus_y.pow(e[1]))
                * &Self::monomial(Vars::Xyz, [0, 0, e[2]], c.clone());
            out += &term;
        }
        Ok(out)
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(
            self.vars, other.vars,
            "mixing polynomials in {} and {}",
            self.vars, other.vars
        );
    }
}

impl AddAssign<&Poly3> for Poly3 {
    fn add_assign(&mut self, rhs: &Poly3) {
        self.assert_compatible(rhs);
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &Poly3 {
    type Output = Poly3;

    fn add(self, rhs: &Poly3) -> Poly3 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &Poly3 {
    type Output = Poly3;

    fn neg(self) -> Poly3 {
        Poly3 {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;

    fn sub(self, rhs: &Poly3) -> Poly3 {
        self + &(-rhs)
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;

    fn mul(self, rhs: &Poly3) -> Poly3 {
        self.assert_compatible(rhs);
        let mut out = Poly3::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.vars.names();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for (name, &k) in names.iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            let mag = c.abs();
            let body = match (factors.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => factors.join("*"),
                (false, false) => format!("{mag}*{}", factors.join("*")),
            };
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: Exp,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for Poly3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars.names().iter().map(|v| v.to_string()).collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    e: *e,
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(d)?;
        let vars = Vars::from_names(&raw.vars)
            .ok_or_else(|| D::Error::custom("unknown variable signature"))?;
        let mut p = Poly3::zero(vars);
        for t in raw.terms {
            let c: BigInt =
                t.c.parse()
                    .map_err(|_| D::Error::custom(format!("bad coefficient {}", t.c)))?;
            p.add_term(t.e, c);
        }
        Ok(p)
    }
}

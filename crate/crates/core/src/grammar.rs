//! Formal derivatives with respect to context-free substitution grammars.
//!
//! `D` acts on a variable by its rule and extends to polynomials by linearity
//! and the Leibniz rule. Two rule families are built in:
//!
//! * `G_k` on `(x, y, z)`: `x, y, z -> x y z^(k-1)`;
//! * `G_k` on `(u, v, z)`: `u -> u v z^(k-1)`, `v -> 2 u z^(k-1)`, `z -> u z^(k-1)`,
//!   the image of the first under `u = xy`, `v = x + y`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::poly::{Poly3, Vars};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarRuleSet {
    vars: Vars,
    rules: [Poly3; 3],
}

impl GrammarRuleSet {
    pub fn new(vars: Vars, rules: [Poly3; 3]) -> Result<Self> {
        for r in &rules {
            if r.vars() != vars {
                return Err(Error::SignatureMismatch {
                    expected: vars.to_string(),
                    found: r.vars().to_string(),
                });
            }
        }
        Ok(Self { vars, rules })
    }

    pub fn xyz(k: u32) -> Self {
        assert!(k >= 1);
        let image = Poly3::monomial(Vars::Xyz, [1, 1, k - 1], 1);
        Self {
            vars: Vars::Xyz,
            rules: [image.clone(), image.clone(), image],
        }
    }

    pub fn uvz(k: u32) -> Self {
        assert!(k >= 1);
        Self {
            vars: Vars::Uvz,
            rules: [
                Poly3::monomial(Vars::Uvz, [1, 1, k - 1], 1),
                Poly3::monomial(Vars::Uvz, [1, 0, k - 1], 2),
                Poly3::monomial(Vars::Uvz, [1, 0, k - 1], 1),
            ],
        }
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn rule(&self, slot: usize) -> &Poly3 {
        &self.rules[slot]
    }
}

/// The formal derivative of `p` under `rules`.
pub fn derive(p: &Poly3, rules: &GrammarRuleSet) -> Result<Poly3> {
    if p.vars() != rules.vars() {
        return Err(Error::SignatureMismatch {
            expected: rules.vars().to_string(),
            found: p.vars().to_string(),
        });
    }
    let mut out = Poly3::zero(p.vars());
    for (e, c) in p.terms() {
        for slot in 0..3 {
            if e[slot] == 0 {
                continue;
            }
            let mut rest = *e;
            rest[slot] -= 1;
            let factor = Poly3::monomial(p.vars(), rest, c * BigInt::from(e[slot]));
            out += &(&factor * rules.rule(slot));
        }
    }
    Ok(out)
}

/// Every intermediate polynomial of `D_{k_n} ... D_{k_1}` applied to the start
/// symbol `x`. In `(u, v, z)` the first step maps the start symbol to
/// `u z^(k_1 - 1)`, the image of `D_{k_1}(x) = x y z^(k_1 - 1)`.
pub fn derivation_steps(vars: Vars, ks: &[u32]) -> Result<Vec<Poly3>> {
    let Some((&first, rest)) = ks.split_first() else {
        return Ok(Vec::new());
    };
    let mut cur = match vars {
        Vars::Xyz => derive(&Poly3::var(Vars::Xyz, 0), &GrammarRuleSet::xyz(first))?,
        Vars::Uvz => Poly3::monomial(Vars::Uvz, [1, 0, first - 1], 1),
    };
    let mut steps = vec![cur.clone()];
    for &k in rest {
        let rules = match vars {
            Vars::Xyz => GrammarRuleSet::xyz(k),
            Vars::Uvz => GrammarRuleSet::uvz(k),
        };
        cur = derive(&cur, &rules)?;
        steps.push(cur.clone());
    }
    Ok(steps)
}

/// `C_M = D_{k_n} ... D_{k_1}(x)`.
pub fn c_polynomial_grammar(m: &Multiset) -> Poly3 {
    derivation_steps(Vars::Xyz, m.mults())
        .expect("built-in rules match")
        .pop()
        .unwrap_or_else(|| Poly3::var(Vars::Xyz, 0))
}

/// `gamma_M(u, v, z)` by the `(u, v, z)` grammar.
pub fn gamma_polynomial_grammar(m: &Multiset) -> Result<Poly3> {
    if m.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    Ok(derivation_steps(Vars::Uvz, m.mults())?
        .pop()
        .expect("nonempty"))
}

/// Rewrites `p` in `u = xy`, `v = x + y` and checks that substituting back
/// reproduces `p`.
pub fn change_of_variables_check(p: &Poly3, signed: bool) -> Result<Poly3> {
    let uv = crate::gamma::to_uv_basis(p, signed)?;
    let back = uv.uv_to_xy()?;
    assert_eq!(&back, p, "uv-basis rewrite does not substitute back");
    Ok(uv)
}

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The multiset `{1^k_1, 2^k_2, ..., n^k_n}`, stored as its multiplicity vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Multiset {
    mults: Vec<u32>,
}

impl Multiset {
    pub fn new(mults: Vec<u32>) -> Result<Self> {
        if let Some(pos) = mults.iter().position(|&k| k == 0) {
            return Err(Error::Parse {
                token: "0".into(),
                reason: format!("multiplicity of value {} must be positive", pos + 1),
            });
        }
        Ok(Self { mults })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `[n]_k = {1^k, ..., n^k}`.
    pub fn uniform(n: usize, k: u32) -> Self {
        assert!(k >= 1, "multiplicity must be positive");
        Self { mults: vec![k; n] }
    }

    /// Number of distinct values.
    pub fn n(&self) -> usize {
        self.mults.len()
    }

    /// Total size `K`.
    pub fn size(&self) -> usize {
        self.mults.iter().map(|&k| k as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    /// Multiplicity of `value` (1-based); 0 when out of range.
    pub fn mult(&self, value: u32) -> u32 {
        if value == 0 {
            return 0;
        }
        self.mults.get(value as usize - 1).copied().unwrap_or(0)
    }

    pub fn max_mult(&self) -> u32 {
        self.mults.iter().copied().max().unwrap_or(0)
    }

    /// Returns `k` when every multiplicity equals `k`.
    pub fn uniform_mult(&self) -> Option<u32> {
        let first = *self.mults.first()?;
        self.mults.iter().all(|&k| k == first).then_some(first)
    }

    pub fn is_stirling_square(&self) -> bool {
        self.uniform_mult() == Some(2)
    }

    /// Drops the largest value.
    pub fn prefix(&self) -> Multiset {
        let mut mults = self.mults.clone();
        mults.pop();
        Self { mults }
    }

    /// `|Q_M| = prod_{i=2}^{n} (1 + k_1 + ... + k_{i-1})`.
    pub fn count_stirling(&self) -> BigUint {
        let mut count = BigUint::from(1u32);
        let mut seen = 0u64;
        for (i, &k) in self.mults.iter().enumerate() {
            if i > 0 {
                count *= seen + 1;
            }
            seen += u64::from(k);
        }
        count
    }
}

impl FromStr for Multiset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let mut mults = Vec::new();
        for raw in s.split(',') {
            let token = raw.trim();
            let k: i64 = token.parse().map_err(|_| Error::Parse {
                token: token.to_string(),
                reason: "not an integer".into(),
            })?;
            if k <= 0 {
                return Err(Error::Parse {
                    token: token.to_string(),
                    reason: "multiplicity must be positive".into(),
                });
            }
            let k = u32::try_from(k).map_err(|_| Error::Parse {
                token: token.to_string(),
                reason: "multiplicity too large".into(),
            })?;
            mults.push(k);
        }
        Ok(Self { mults })
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mults.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl TryFrom<Vec<u32>> for Multiset {
    type Error = Error;

    fn try_from(mults: Vec<u32>) -> Result<Self> {
        Self::new(mults)
    }
}

impl From<Multiset> for Vec<u32> {
    fn from(m: Multiset) -> Self {
        m.mults
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let m: Multiset = "2,2".parse().unwrap();
        assert_eq!(m.mults(), &[2, 2]);
        assert_eq!(m.size(), 4);
        assert_eq!(m.n(), 2);
    }

    #[test]
    fn parse_sample_multiset() {
        let m: Multiset = "2,1,2,2,2,3,1".parse().unwrap();
        assert_eq!(m.n(), 7);
        assert_eq!(m.size(), 13);
    }

    #[test]
    fn parse_empty_and_spaces() {
        let m: Multiset = "".parse().unwrap();
        assert!(m.is_empty());
        assert_eq!(m.size(), 0);
        let m: Multiset = " 1, 2 ,3".parse().unwrap();
        assert_eq!(m.mults(), &[1, 2, 3]);
    }

    #[test]
    fn parse_errors_name_the_token() {
        for (input, token) in [("2,x", "x"), ("2,0", "0"), ("-1", "-1"), ("1,,2", "")] {
            match input.parse::<Multiset>() {
                Err(Error::Parse { token: t, .. }) => assert_eq!(t, token, "input {input:?}"),
                other => panic!("expected parse error for {input:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(Multiset::empty().count_stirling(), BigUint::from(1u32));
        assert_eq!(
            "2,2".parse::<Multiset>().unwrap().count_stirling(),
            BigUint::from(3u32)
        );
        assert_eq!(
            "2,1,2,2,2,3,1"
                .parse::<Multiset>()
                .unwrap()
                .count_stirling(),
            BigUint::from(3u32 * 4 * 6 * 8 * 10 * 13)
        );
        // (2n-1)!!
        let expected = [1u32, 3, 15, 105, 945, 10395];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(
                Multiset::uniform(n + 1, 2).count_stirling(),
                BigUint::from(e)
            );
        }
    }

    #[test]
    fn display_round_trips() {
        let m: Multiset = "3,1,2".parse().unwrap();
        assert_eq!(m.to_string().parse::<Multiset>().unwrap(), m);
    }
}

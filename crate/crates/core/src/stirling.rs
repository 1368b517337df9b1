//! Stirling permutations of a multiset and their descent-type statistics.
//!
//! Positions are 1-based throughout, matching the convention that a word
//! `s_1 ... s_K` is padded with the sentinel `s_0 = s_{K+1} = 0`. The stored
//! word never contains the sentinels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiset::Multiset;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StirlingPermutation {
    word: Vec<u32>,
    multiset: Multiset,
}

impl StirlingPermutation {
    pub fn new(word: Vec<u32>, multiset: Multiset) -> Result<Self> {
        check_stirling(&word, &multiset).map_err(|reason| Error::NotStirling {
            multiset: multiset.to_string(),
            reason,
        })?;
        Ok(Self { word, multiset })
    }

    /// Builds a permutation, inferring the multiset from the word. Every value
    /// `1..=max` must occur at least once.
    pub fn from_word(word: Vec<u32>) -> Result<Self> {
        let multiset = infer_multiset(&word)?;
        Self::new(word, multiset)
    }

    pub(crate) fn new_unchecked(word: Vec<u32>, multiset: Multiset) -> Self {
        debug_assert!(is_stirling(&word, &multiset));
        Self { word, multiset }
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn multiset(&self) -> &Multiset {
        &self.multiset
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Value at 1-based position `i`, with the sentinel 0 at `0` and `K+1`.
    pub fn at(&self, i: usize) -> u32 {
        if i == 0 || i > self.word.len() {
            0
        } else {
            self.word[i - 1]
        }
    }

    pub fn is_ascent(&self, i: usize) -> bool {
        (1..=self.len()).contains(&i) && self.at(i - 1) < self.at(i)
    }

    pub fn is_descent(&self, i: usize) -> bool {
        (1..=self.len()).contains(&i) && self.at(i) > self.at(i + 1)
    }

    /// 1-based positions of the first and last occurrence of `value`.
    pub fn first_last(&self, value: u32) -> Result<(usize, usize)> {
        let first = self.word.iter().position(|&v| v == value);
        let last = self.word.iter().rposition(|&v| v == value);
        match (first, last) {
            (Some(p), Some(q)) => Ok((p + 1, q + 1)),
            _ => Err(Error::ValueAbsent(value)),
        }
    }

    /// The reversed word, which is again a Stirling permutation of the same multiset.
    pub fn reverse(&self) -> Self {
        let mut word = self.word.clone();
        word.reverse();
        Self::new_unchecked(word, self.multiset.clone())
    }

    pub fn statistics(&self) -> StatProfile {
        StatProfile::of(self)
    }
}

impl fmt::Display for StirlingPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for StirlingPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_word(parse_word(s)?)
    }
}

/// Parses a word written as space- or comma-separated decimal values. A single
/// run of digits with no separators is read one digit per letter, so
/// `"1221"` and `"1 2 2 1"` denote the same word.
pub fn parse_word(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let separated = s.contains(|c: char| c == ',' || c.is_whitespace());
    if !separated {
        return s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d > 0)
                    .ok_or_else(|| Error::Parse {
                        token: c.to_string(),
                        reason: "expected a nonzero digit".into(),
                    })
            })
            .collect();
    }
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<u32>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(Error::Parse {
                token: t.to_string(),
                reason: "expected a positive integer".into(),
            }),
        })
        .collect()
}

fn infer_multiset(word: &[u32]) -> Result<Multiset> {
    let n = word.iter().copied().max().unwrap_or(0) as usize;
    let mut mults = vec![0u32; n];
    for &v in word {
        mults[v as usize - 1] += 1;
    }
    if let Some(missing) = mults.iter().position(|&k| k == 0) {
        return Err(Error::Parse {
            token: word
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            reason: format!("value {} is missing", missing + 1),
        });
    }
    Multiset::new(mults)
}

/// True iff `word` uses each value exactly as often as `m` prescribes and
/// every letter strictly between two equal letters `v` is at least `v`.
pub fn is_stirling(word: &[u32], m: &Multiset) -> bool {
    check_stirling(word, m).is_ok()
}

fn check_stirling(word: &[u32], m: &Multiset) -> std::result::Result<(), String> {
    let n = m.n();
    let mut counts = vec![0u32; n];
    for &v in word {
        if v == 0 || v as usize > n {
            return Err(format!("value {v} is out of range 1..={n}"));
        }
        counts[v as usize - 1] += 1;
    }
    for (i, (&c, &k)) in counts.iter().zip(m.mults()).enumerate() {
        if c != k {
            return Err(format!("value {} occurs {c} times, expected {k}", i + 1));
        }
    }
    // Scanning left to right, the values that have started but not finished
    // form a stack ordered by value; any letter must be at least its top.
    let mut seen = vec![0u32; n];
    let mut open: Vec<u32> = Vec::new();
    for (pos, &v) in word.iter().enumerate() {
        if let Some(&top) = open.last() {
            if v < top {
                return Err(format!(
                    "{v} at position {} lies between two copies of {top}",
                    pos + 1
                ));
            }
        }
        let idx = v as usize - 1;
        seen[idx] += 1;
        let k = m.mults()[idx];
        if seen[idx] == 1 && k > 1 {
            open.push(v);
        } else if seen[idx] == k && k > 1 {
            open.pop();
        }
    }
    Ok(())
}

/// Lexicographic stream of every Stirling permutation of `m`.
pub fn enumerate_stirling(m: &Multiset) -> StirlingIter {
    StirlingIter::new(m.clone())
}

pub fn count_stirling(m: &Multiset) -> num_bigint::BigUint {
    m.count_stirling()
}

/// Depth-first generator in lexicographic order.
///
/// A letter `w` may be appended to a valid prefix iff copies of `w` remain and
/// `w` is at least every value that is open (started but unfinished). The open
/// values form a stack; every valid prefix extends to a full permutation, so
/// the search never dead-ends.
#[derive(Debug, Clone)]
pub struct StirlingIter {
    m: Multiset,
    word: Vec<u32>,
    placed: Vec<u32>,
    open: Vec<u32>,
    started: bool,
    done: bool,
}

impl StirlingIter {
    fn new(m: Multiset) -> Self {
        let n = m.n();
        let cap = m.size();
        Self {
            m,
            word: Vec::with_capacity(cap),
            placed: vec![0; n],
            open: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn remaining(&self, v: u32) -> u32 {
        self.m.mults()[v as usize - 1] - self.placed[v as usize - 1]
    }

    fn push(&mut self, v: u32) {
        let idx = v as usize - 1;
        let k = self.m.mults()[idx];
        self.placed[idx] += 1;
        self.word.push(v);
        if self.placed[idx] == 1 {
            self.open.push(v);
        }
        if self.placed[idx] == k {
            self.open.pop();
        }
    }

    fn pop(&mut self) -> u32 {
        let v = self.word.pop().expect("pop on empty prefix");
        let idx = v as usize - 1;
        let k = self.m.mults()[idx];
        if self.placed[idx] == k {
            self.open.push(v);
        }
        self.placed[idx] -= 1;
        if self.placed[idx] == 0 {
            self.open.pop();
        }
        v
    }

    fn complete(&mut self) {
        while self.word.len() < self.m.size() {
            let next = match self.open.last() {
                Some(&top) => top,
                None => (1..=self.m.n() as u32)
                    .find(|&v| self.remaining(v) > 0)
                    .expect("unfinished word has an unused value"),
            };
            self.push(next);
        }
    }

    fn advance(&mut self) -> bool {
        while !self.word.is_empty() {
            let v = self.pop();
            let floor = self.open.last().copied().unwrap_or(0);
            let candidate =
                ((v + 1).max(floor)..=self.m.n() as u32).find(|&w| self.remaining(w) > 0);
            if let Some(w) = candidate {
                self.push(w);
                self.complete();
                return true;
            }
        }
        false
    }
}

impl Iterator for StirlingIter {
    type Item = StirlingPermutation;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.complete();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(StirlingPermutation::new_unchecked(
            self.word.clone(),
            self.m.clone(),
        ))
    }
}

/// Descent-type statistics of a Stirling permutation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct StatProfile {
    pub asc: usize,
    pub des: usize,
    pub plat: usize,
    /// Plateau counts keyed by the occurrence number of the right-hand copy.
    pub plat_by_j: BTreeMap<usize, usize>,
    pub dfall: usize,
    pub aplat: usize,
    pub dplat: usize,
    pub ascent_positions: Vec<usize>,
    pub descent_positions: Vec<usize>,
    pub plateau_positions: Vec<usize>,
    pub dfall_positions: Vec<usize>,
}

impl StatProfile {
    pub fn of(s: &StirlingPermutation) -> Self {
        let k = s.len();
        let n = s.multiset().n();
        let mut prof = StatProfile::default();
        let mut first = vec![0usize; n + 1];
        let mut occurrence = vec![0usize; n + 1];
        for i in 1..=k {
            let v = s.at(i) as usize;
            occurrence[v] += 1;
            if occurrence[v] == 1 {
                first[v] = i;
            }
            let (prev, cur, next) = (s.at(i - 1), s.at(i), s.at(i + 1));
            if prev < cur {
                prof.ascent_positions.push(i);
            }
            if cur > next {
                prof.descent_positions.push(i);
            }
            if cur == next {
                prof.plateau_positions.push(i);
                // the right copy is occurrence + 1
                *prof.plat_by_j.entry(occurrence[v] + 1).or_insert(0) += 1;
                if prev < cur {
                    prof.aplat += 1;
                } else if prev > cur {
                    prof.dplat += 1;
                }
            }
        }
        for &i in &prof.descent_positions {
            let p = first[s.at(i) as usize];
            if s.is_descent(p - 1) {
                prof.dfall_positions.push(i);
            }
        }
        prof.asc = prof.ascent_positions.len();
        prof.des = prof.descent_positions.len();
        prof.plat = prof.plateau_positions.len();
        prof.dfall = prof.dfall_positions.len();
        prof
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> StirlingPermutation {
        s.parse().unwrap()
    }

    #[test]
    fn stirling_condition() {
        let m: Multiset = "2,2".parse().unwrap();
        assert!(is_stirling(&[1, 2, 2, 1], &m));
        assert!(!is_stirling(&[1, 2, 1, 2], &m));
        assert!(!is_stirling(&[1, 2, 2], &m));
        assert!(!is_stirling(&[1, 2, 2, 3], &m));
        let seven = Multiset::uniform(7, 2);
        assert!(is_stirling(&parse_word("33552217714664").unwrap(), &seven));
    }

    #[test]
    fn parse_word_forms() {
        assert_eq!(parse_word("3 3 5,5").unwrap(), vec![3, 3, 5, 5]);
        assert_eq!(parse_word("1221").unwrap(), vec![1, 2, 2, 1]);
        assert_eq!(parse_word("10 10").unwrap(), vec![10, 10]);
        assert!(parse_word("1 0").is_err());
        assert!(parse_word("1a").is_err());
        assert!("1 3 3 1".parse::<StirlingPermutation>().is_err());
    }

    #[test]
    fn enumeration_small() {
        let m: Multiset = "2,2".parse().unwrap();
        let words: Vec<Vec<u32>> = enumerate_stirling(&m).map(|s| s.word().to_vec()).collect();
        assert_eq!(
            words,
            vec![vec![1, 1, 2, 2], vec![1, 2, 2, 1], vec![2, 2, 1, 1]]
        );
        let one: Vec<_> = enumerate_stirling(&"1".parse().unwrap()).collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].word(), &[1]);
        let empty: Vec<_> = enumerate_stirling(&Multiset::empty()).collect();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].is_empty());
    }

    #[test]
    fn stats_of_ternary_example() {
        let p = perm("33552217714664").statistics();
        assert_eq!((p.asc, p.des, p.plat), (5, 5, 5));
        assert_eq!((p.aplat, p.dplat), (4, 1));
        // the descent-plateau 522 sits at the first 2, position 5
        let dplat_pos: Vec<usize> = p
            .plateau_positions
            .iter()
            .copied()
            .filter(|&i| perm("33552217714664").at(i - 1) > perm("33552217714664").at(i))
            .collect();
        assert_eq!(dplat_pos, vec![5]);
    }

    #[test]
    fn stats_double_fall_example() {
        let p = perm("2533114664").statistics();
        assert_eq!(p.descent_positions, vec![2, 4, 9, 10]);
        assert_eq!(p.dfall_positions, vec![4]);
    }

    #[test]
    fn stats_single_value() {
        let p = perm("11").statistics();
        assert_eq!(
            (p.asc, p.des, p.plat, p.dfall, p.aplat, p.dplat),
            (1, 1, 1, 0, 1, 0)
        );
        assert_eq!(p.plat_by_j, BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn stats_no_descent_plateau() {
        assert_eq!(perm("22335517714664").statistics().dplat, 0);
    }

    #[test]
    fn stats_empty_word() {
        let e = StirlingPermutation::new(vec![], Multiset::empty()).unwrap();
        assert_eq!(e.statistics(), StatProfile::default());
    }

    #[test]
    fn first_last_absent() {
        assert_eq!(perm("1221").first_last(2).unwrap(), (2, 3));
        assert_eq!(perm("1221").first_last(3), Err(Error::ValueAbsent(3)));
    }
}

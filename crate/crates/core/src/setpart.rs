//! Set partitions as restricted growth strings, and record statistics.
//!
//! A partition `{B_1, ..., B_k}` of `[n]` with blocks ordered by their
//! minima is written `pi_1 ... pi_n` with `i` in `B_{pi_i}`. Labels are
//! 1-based throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Integer;

/// Largest `n` the brute-force routines accept unless told otherwise.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Marker printed for the word of length zero.
pub const EMPTY_WORD: &str = "ε";

/// A left-to-right maximum of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RecordEntry {
    /// 1-based.
    pub position: usize,
    pub value: u32,
}

/// Strict left-to-right maxima of an arbitrary word.
pub fn records(word: &[u32]) -> Vec<RecordEntry> {
    let mut out = Vec::new();
    let mut best = None;
    for (i, &v) in word.iter().enumerate() {
        if best.is_none_or(|b| v > b) {
            out.push(RecordEntry {
                position: i + 1,
                value: v,
            });
            best = Some(v);
        }
    }
    out
}

/// Sum of `position * value` over the records of `word`.
pub fn swrec(word: &[u32]) -> u64 {
    records(word)
        .iter()
        .map(|r| r.position as u64 * r.value as u64)
        .sum()
}

/// Sum of record positions.
pub fn srec(word: &[u32]) -> u64 {
    records(word).iter().map(|r| r.position as u64).sum()
}

pub fn rec_count(word: &[u32]) -> usize {
    records(word).len()
}

pub fn is_valid_rgs(word: &[u32]) -> bool {
    let mut max = 0;
    for &v in word {
        if v == 0 || v > max + 1 {
            return false;
        }
        max = max.max(v);
    }
    true
}

/// Largest `swrec` value over `P_n`, attained by `12...n`.
pub fn max_swrec(n: usize) -> u64 {
    let n = n as u64;
    n * (n + 1) * (2 * n + 1) / 6
}

/// A word in canonical sequential form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RestrictedGrowthString {
    word: Vec<u32>,
}

impl RestrictedGrowthString {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        if !is_valid_rgs(&word) {
            return Err(Error::Validation(format!(
                "{word:?} is not a restricted growth string"
            )));
        }
        Ok(RestrictedGrowthString { word })
    }

    pub fn empty() -> Self {
        RestrictedGrowthString { word: Vec::new() }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.word.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn records(&self) -> Vec<RecordEntry> {
        records(&self.word)
    }

    pub fn swrec(&self) -> u64 {
        swrec(&self.word)
    }

    pub fn srec(&self) -> u64 {
        srec(&self.word)
    }

    pub fn rec_count(&self) -> usize {
        rec_count(&self.word)
    }

    pub fn to_blocks(&self) -> BlockPartition {
        blocks_from_rgs(self)
    }
}

/// Labels up to 9 print as bare digits (`121132`); larger alphabets are comma separated.
impl fmt::Display for RestrictedGrowthString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str(EMPTY_WORD);
        }
        if self.word.iter().all(|&v| v <= 9) {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for RestrictedGrowthString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == EMPTY_WORD {
            return Ok(Self::empty());
        }
        let word: Option<Vec<u32>> = if s.contains(',') {
            s.split(',').map(|p| p.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10)).collect()
        };
        let word = word.ok_or_else(|| Error::Validation(format!("cannot parse word {s:?}")))?;
        Self::new(word)
    }
}

/// Blocks listed by increasing minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    blocks: Vec<BTreeSet<usize>>,
}

impl BlockPartition {
    /// Accepts blocks in any order; they are sorted by minimum. The blocks
    /// must be nonempty, disjoint, and cover exactly `1..=n`.
    pub fn new(mut blocks: Vec<BTreeSet<usize>>) -> Result<Self> {
        if blocks.iter().any(BTreeSet::is_empty) {
            return Err(Error::Validation("empty block".into()));
        }
        let n: usize = blocks.iter().map(BTreeSet::len).sum();
        let union: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
        if union.len() != n {
            return Err(Error::Validation("blocks are not disjoint".into()));
        }
        if union.iter().copied().ne(1..=n) {
            return Err(Error::Validation(format!("blocks do not cover [1..{n}]")));
        }
        blocks.sort_by_key(|b| *b.iter().next().unwrap());
        Ok(BlockPartition { blocks })
    }

    pub fn blocks(&self) -> &[BTreeSet<usize>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(BTreeSet::len).sum()
    }
}

pub fn rgs_from_blocks(p: &BlockPartition) -> RestrictedGrowthString {
    let mut word = vec![0u32; p.n()];
    for (label, block) in p.blocks.iter().enumerate() {
        for &i in block {
            word[i - 1] = label as u32 + 1;
        }
    }
    RestrictedGrowthString { word }
}

pub fn blocks_from_rgs(w: &RestrictedGrowthString) -> BlockPartition {
    let mut blocks = vec![BTreeSet::new(); w.num_blocks()];
    for (i, &v) in w.word.iter().enumerate() {
        blocks[v as usize - 1].insert(i + 1);
    }
    BlockPartition { blocks }
}

/// Steps through all restricted growth strings of length `n` in
/// lexicographic order without allocating per word.
#[derive(Clone, Debug)]
pub struct RgsCursor {
    word: Vec<u32>,
    /// `prefix_max[i] = max(word[..=i])`.
    prefix_max: Vec<u32>,
    started: bool,
    done: bool,
}

impl RgsCursor {
    pub fn new(n: usize) -> Self {
        RgsCursor {
            word: vec![1; n],
            prefix_max: vec![1; n],
            started: false,
            done: false,
        }
    }

    /// Moves to the next word; returns `false` once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let n = self.word.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.word[i] <= self.prefix_max[i - 1] {
                self.word[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.word[i]);
                for j in i + 1..n {
                    self.word[j] = 1;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        self.done = true;
        false
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn num_blocks(&self) -> usize {
        self.prefix_max.last().copied().unwrap_or(0) as usize
    }
}

/// Lexicographic stream of the words of `P_n`, or of `P_{n,k}` when `k` is given.
#[derive(Clone, Debug)]
pub struct RgsIter {
    cursor: RgsCursor,
    blocks: Option<usize>,
}

impl Iterator for RgsIter {
    type Item = RestrictedGrowthString;

    fn next(&mut self) -> Option<Self::Item> {
        while self.cursor.advance() {
            if self.blocks.is_none_or(|k| k == self.cursor.num_blocks()) {
                return Some(RestrictedGrowthString {
                    word: self.cursor.word().to_vec(),
                });
            }
        }
        None
    }
}

pub fn enumerate_rgs(n: usize, k: Option<usize>) -> RgsIter {
    let mut cursor = RgsCursor::new(n);
    if k.is_some_and(|k| k > n) {
        cursor.done = true;
    }
    RgsIter { cursor, blocks: k }
}

/// Calls `f` on every word of `P_n` (filtered to `k` blocks when given).
pub fn for_each_rgs(n: usize, k: Option<usize>, mut f: impl FnMut(&[u32])) {
    let mut cursor = RgsCursor::new(n);
    while cursor.advance() {
        if k.is_none_or(|k| k == cursor.num_blocks()) {
            f(cursor.word());
        }
    }
}

/// Number of words with each `swrec` value. The empty word has no records,
/// so `n = 0` yields an empty map.
pub fn swrec_histogram(n: usize, k: Option<usize>) -> BTreeMap<u64, u64> {
    let mut hist = BTreeMap::new();
    if n == 0 {
        return hist;
    }
    for_each_rgs(n, k, |w| *hist.entry(swrec(w)).or_insert(0) += 1);
    hist
}

/// `sum_{pi in P_n} swrec(pi)` by enumeration.
pub fn total_swrec_bruteforce(n: usize, cap: usize) -> Result<Integer> {
    Ok(swrec_totals_by_blocks(n, cap)?.into_iter().sum())
}

/// Entry `k` is the `swrec` total over `P_{n,k}`, for `k = 0..=n`.
pub fn swrec_totals_by_blocks(n: usize, cap: usize) -> Result<Vec<Integer>> {
    if n > cap {
        return Err(Error::usage(format!(
            "n = {n} exceeds the enumeration cap {cap}"
        )));
    }
    let mut totals = vec![0u64; n + 1];
    for_each_rgs(n, None, |w| {
        let k = *w.iter().max().unwrap_or(&0) as usize;
        totals[k] += swrec(w);
    });
    Ok(totals.into_iter().map(Integer::from).collect())
}

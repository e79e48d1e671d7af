//! Exact reliability: counts of connected induced subgraphs by size.
//!
//! With `c_i` the number of `i`-vertex subsets inducing a connected subgraph,
//! the reliability at `p` is `sum_i c_i p^i (1-p)^(n-i)`. The counts come
//! from brute-force enumeration (any small graph) or from the column transfer
//! matrix (grid graphs). The empty set is never counted, so `c_0 = 0`.

mod rational;
mod transfer;

pub use rational::{conditional_mean_size, p_star, parse_probability, rcr_from_counts, to_decimal, PStar, RationalProb};
pub use transfer::{tm_counts, tm_state_space, Phase, TMState, MAX_TM_WIDTH};

use std::fmt::Write as _;
use std::io::BufRead;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{RcrError, Result};
use crate::graph::{Graph, VertexId};

/// Default vertex limit for [`brute_force_counts`].
pub const BRUTE_FORCE_LIMIT: usize = 26;

/// Counts `c_0..c_n` of connected induced subgraphs by vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<BigUint>,
}

impl CountVector {
    /// Wraps raw counts; `counts.len()` must be `n + 1`.
    pub fn new(counts: Vec<BigUint>) -> Result<Self> {
        if counts.is_empty() {
            return Err(RcrError::invalid("count vector needs at least c_0"));
        }
        Ok(CountVector { counts })
    }

    pub fn from_u64(counts: &[u64]) -> Result<Self> {
        CountVector::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Number of vertices of the source graph.
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, i: usize) -> &BigUint {
        &self.counts[i]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Size with the largest count (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.counts.iter().enumerate() {
            if c > &self.counts[best] {
                best = i;
            }
        }
        best
    }

    /// Text form: `n`, then `n + 1` lines `i c_i`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.n()).unwrap();
        for (i, c) in self.counts.iter().enumerate() {
            writeln!(out, "{i} {c}").unwrap();
        }
        out
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let perr = |line: usize, message: String| RcrError::Parse { line, message };
        let mut n: Option<usize> = None;
        let mut counts: Vec<Option<BigUint>> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            match n {
                None => {
                    if fields.len() != 1 {
                        return Err(perr(lineno, "expected the vertex count alone".into()));
                    }
                    let v: usize = fields[0]
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad vertex count {:?}", fields[0])))?;
                    n = Some(v);
                    counts = vec![None; v + 1];
                }
                Some(nv) => {
                    if fields.len() != 2 {
                        return Err(perr(lineno, "expected \"i c_i\"".into()));
                    }
                    let i: usize = fields[0]
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad index {:?}", fields[0])))?;
                    if i > nv {
                        return Err(perr(lineno, format!("index {i} exceeds n = {nv}")));
                    }
                    let c: BigUint = fields[1]
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad count {:?}", fields[1])))?;
                    if counts[i].replace(c).is_some() {
                        return Err(perr(lineno, format!("duplicate index {i}")));
                    }
                }
            }
        }
        if n.is_none() {
            return Err(perr(1, "empty counts file".into()));
        }
        let counts = counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| perr(0, format!("missing count for i = {i}"))))
            .collect::<Result<Vec<_>>>()?;
        CountVector::new(counts)
    }
}

/// Counts by enumerating every vertex subset. Refuses graphs above `limit` vertices.
pub fn brute_force_counts(g: &Graph, limit: usize) -> Result<CountVector> {
    let n = g.vertex_count();
    if n > limit.min(63) {
        return Err(RcrError::invalid(format!(
            "brute-force enumeration is limited to {} vertices, graph has {n}",
            limit.min(63)
        )));
    }
    let nbr: Vec<u64> = (0..n)
        .map(|v| {
            g.neighbors(VertexId::new(v))
                .iter()
                .fold(0u64, |m, w| m | (1u64 << w.index()))
        })
        .collect();
    let mut counts = vec![0u64; n + 1];
    for mask in 1u64..(1u64 << n) {
        if mask_connected(&nbr, mask) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    CountVector::from_u64(&counts)
}

#[inline]
fn mask_connected(nbr: &[u64], mask: u64) -> bool {
    let mut reach = mask & mask.wrapping_neg();
    let mut frontier = reach;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            next |= nbr[f.trailing_zeros() as usize];
            f &= f - 1;
        }
        next &= mask & !reach;
        reach |= next;
        frontier = next;
    }
    reach == mask
}

/// `binomial(n, k)` as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_examples() {
        let p3 = Graph::path(3).unwrap();
        assert_eq!(brute_force_counts(&p3, BRUTE_FORCE_LIMIT).unwrap(), CountVector::from_u64(&[0, 3, 2, 1]).unwrap());
        let c4 = Graph::grid(2, 2).unwrap();
        assert_eq!(
            brute_force_counts(&c4, BRUTE_FORCE_LIMIT).unwrap(),
            CountVector::from_u64(&[0, 4, 4, 4, 1]).unwrap()
        );
        let k1 = Graph::grid(1, 1).unwrap();
        assert_eq!(brute_force_counts(&k1, BRUTE_FORCE_LIMIT).unwrap(), CountVector::from_u64(&[0, 1]).unwrap());
    }

    #[test]
    fn brute_force_guard() {
        let g = Graph::grid(5, 5).unwrap();
        let err = brute_force_counts(&g, 20).unwrap_err();
        assert!(err.to_string().contains("limited to 20"));
    }

    #[test]
    fn counts_file_roundtrip() {
        let c = CountVector::new(vec![
            BigUint::zero(),
            BigUint::from(121u32),
            "123456789012345678901234567890123".parse().unwrap(),
        ])
        .unwrap();
        let text = c.to_text();
        assert!(text.starts_with("2\n0 0\n1 121\n"));
        assert_eq!(CountVector::from_reader(text.as_bytes()).unwrap(), c);
    }

    #[test]
    fn counts_file_errors() {
        assert!(CountVector::from_reader("2\n0 0\n1 2\n".as_bytes()).is_err());
        assert!(CountVector::from_reader("1\n0 0\n3 2\n".as_bytes()).is_err());
        assert!(CountVector::from_reader("1\n0 0\n0 1\n".as_bytes()).is_err());
        assert!(CountVector::from_reader("".as_bytes()).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(5, 7), BigUint::zero());
        assert_eq!(binomial(121, 60).to_string().len(), 36);
    }
}

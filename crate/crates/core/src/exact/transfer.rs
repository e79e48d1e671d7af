//! Transfer-matrix counting of connected induced subgraphs of grid graphs.
//!
//! The grid is swept column by column. Between columns, the interface state
//! records which cells of the last column are occupied and how their maximal
//! occupied runs are joined by paths lying to the left. Two extra empty
//! states mark "nothing placed yet" and "the single component is closed".
//!
//! The sweep itself advances one cell at a time (a broken column), which
//! keeps every step a two-way branch instead of a `2^w`-way one. At column
//! boundaries the cell-level frontier coincides with a [`TMState`].

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::CountVector;
use crate::error::{RcrError, Result};

/// Largest supported column height.
pub const MAX_TM_WIDTH: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// Nothing placed yet.
    Pre,
    /// At least one occupied cell still on the interface.
    Active,
    /// The component was closed off; only empty cells may follow.
    Finished,
}

/// Interface state between two columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TMState {
    /// Bit `i` set when cell `i` of the column is occupied.
    pub occupancy: u32,
    /// Class label of each maximal occupied run, top to bottom, in
    /// first-appearance order. Runs sharing a label are joined to the left.
    pub run_classes: Vec<u8>,
    pub phase: Phase,
}

fn runs(occupancy: u32, width: usize) -> usize {
    let mut count = 0;
    let mut prev = false;
    for i in 0..width {
        let bit = occupancy >> i & 1 == 1;
        if bit && !prev {
            count += 1;
        }
        prev = bit;
    }
    count
}

/// Restricted-growth labelings of `k` items that form non-crossing partitions.
fn noncrossing_partitions(k: usize) -> Vec<Vec<u8>> {
    fn extend(prefix: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        let next_label = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for label in 0..=next_label {
            prefix.push(label);
            if !crosses(prefix) {
                extend(prefix, k, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(k), k, &mut out);
    out
}

/// Whether the newest item closes a crossing `a < b < c < d` with
/// `label[a] = label[c] != label[b] = label[d]`.
fn crosses(labels: &[u8]) -> bool {
    let d = labels.len() - 1;
    let ld = labels[d];
    for b in 0..d {
        if labels[b] != ld {
            continue;
        }
        for c in b + 1..d {
            if labels[c] == ld {
                continue;
            }
            if labels[..b].contains(&labels[c]) {
                return true;
            }
        }
    }
    false
}

fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_TM_WIDTH {
        return Err(RcrError::invalid(format!(
            "transfer-matrix width must be in 1..={MAX_TM_WIDTH}, got {width}"
        )));
    }
    Ok(())
}

/// Every interface state for columns of `width` cells.
pub fn tm_state_space(width: usize) -> Result<Vec<TMState>> {
    check_width(width)?;
    let mut states = vec![
        TMState {
            occupancy: 0,
            run_classes: Vec::new(),
            phase: Phase::Pre,
        },
        TMState {
            occupancy: 0,
            run_classes: Vec::new(),
            phase: Phase::Finished,
        },
    ];
    let mut by_runs: HashMap<usize, Vec<Vec<u8>>> = HashMap::new();
    for occupancy in 1u32..(1 << width) {
        let r = runs(occupancy, width);
        let partitions = by_runs.entry(r).or_insert_with(|| noncrossing_partitions(r));
        for classes in partitions.iter() {
            states.push(TMState {
                occupancy,
                run_classes: classes.clone(),
                phase: Phase::Active,
            });
        }
    }
    Ok(states)
}

// Cell-level frontier, packed: 4 bits of label per cell (0 = empty), phase in bits 60..62.
type Key = u64;

const PHASE_SHIFT: u32 = 60;

fn phase_of(key: Key) -> Phase {
    match key >> PHASE_SHIFT {
        0 => Phase::Pre,
        1 => Phase::Active,
        _ => Phase::Finished,
    }
}

fn phase_bits(phase: Phase) -> Key {
    (match phase {
        Phase::Pre => 0u64,
        Phase::Active => 1,
        Phase::Finished => 2,
    }) << PHASE_SHIFT
}

fn unpack(key: Key, width: usize, labels: &mut [u8]) {
    for (i, slot) in labels.iter_mut().enumerate().take(width) {
        *slot = (key >> (4 * i) & 0xf) as u8;
    }
}

/// Relabels in first-appearance order and packs.
fn pack(labels: &[u8], phase: Phase) -> Key {
    let mut map = [0u8; 16];
    let mut next = 1u8;
    let mut key = phase_bits(phase);
    for (i, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        if map[l as usize] == 0 {
            map[l as usize] = next;
            next += 1;
        }
        key |= (map[l as usize] as u64) << (4 * i);
    }
    key
}

/// Adds `src * x^shift` into `dst`.
fn add_shifted(dst: &mut Vec<BigUint>, src: &[BigUint], shift: usize) {
    if dst.len() < src.len() + shift {
        dst.resize(src.len() + shift, BigUint::zero());
    }
    for (i, c) in src.iter().enumerate() {
        if !c.is_zero() {
            dst[i + shift] += c;
        }
    }
}

/// Counts of connected induced subgraphs of the `width x height` grid, by size.
pub fn tm_counts(width: usize, height: usize) -> Result<CountVector> {
    check_width(width)?;
    if height == 0 {
        return Err(RcrError::invalid("grid height must be positive"));
    }
    let n = width * height;
    let mut states: HashMap<Key, Vec<BigUint>> = HashMap::new();
    states.insert(phase_bits(Phase::Pre), vec![BigUint::from(1u32)]);
    let mut labels = vec![0u8; width];
    let mut scratch = vec![0u8; width];

    for _column in 0..height {
        for row in 0..width {
            let mut next: HashMap<Key, Vec<BigUint>> = HashMap::with_capacity(states.len() * 2);
            for (key, poly) in states.drain() {
                let phase = phase_of(key);
                unpack(key, width, &mut labels);
                let left = labels[row];
                let up = if row > 0 { labels[row - 1] } else { 0 };

                // Cell left empty.
                scratch.copy_from_slice(&labels);
                scratch[row] = 0;
                if left != 0 && !scratch.contains(&left) {
                    // `left`'s component loses its last interface cell.
                    if scratch.iter().all(|&l| l == 0) {
                        add_shifted(next.entry(phase_bits(Phase::Finished)).or_default(), &poly, 0);
                    }
                } else {
                    add_shifted(next.entry(pack(&scratch, phase)).or_default(), &poly, 0);
                }

                // Cell occupied.
                if phase == Phase::Finished {
                    continue;
                }
                scratch.copy_from_slice(&labels);
                let label = match (up, left) {
                    (0, 0) => 15,
                    (0, l) | (l, 0) => l,
                    (u, l) => {
                        for slot in scratch.iter_mut() {
                            if *slot == l {
                                *slot = u;
                            }
                        }
                        u
                    }
                };
                scratch[row] = label;
                add_shifted(next.entry(pack(&scratch, Phase::Active)).or_default(), &poly, 1);
            }
            states = next;
        }
    }

    let mut total: Vec<BigUint> = Vec::new();
    for (key, poly) in &states {
        let accept = match phase_of(*key) {
            Phase::Pre => false,
            Phase::Finished => true,
            Phase::Active => {
                unpack(*key, width, &mut labels);
                labels.iter().all(|&l| l <= 1)
            }
        };
        if accept {
            add_shifted(&mut total, poly, 0);
        }
    }
    total.resize(n + 1, BigUint::zero());
    CountVector::new(total)
}

//! Exact deterministic communication cost on the full input cube, by
//! memoized recursion over boxes, plus the induced two-party costs taken
//! over axis bipartitions.
//!
//! Cost model: every announced bit is seen by all players, so the cost of
//! a protocol tree is its depth. A box is solved for free iff the function
//! is constant on it; otherwise some player splits their current candidate
//! set in two and announces which half their input lies in.

use std::collections::HashMap;

use crate::boolfn::{BoolFunction, KBox};
use crate::caps::SearchCaps;
use crate::error::{Error, Result};
use crate::partition::{all_bipartitions, Bipartition};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum ProtocolNode {
    Leaf {
        output: bool,
    },
    Split {
        player: usize,
        /// For each value of the splitting player's axis: the announced bit.
        /// Values outside the current box never reach this node; their
        /// entries are false.
        one_set: Vec<bool>,
        zero: Box<ProtocolNode>,
        one: Box<ProtocolNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ProtocolTree {
    pub shape: Vec<usize>,
    pub root: ProtocolNode,
}

impl ProtocolTree {
    pub fn depth(&self) -> u32 {
        fn d(n: &ProtocolNode) -> u32 {
            match n {
                ProtocolNode::Leaf { .. } => 0,
                ProtocolNode::Split { zero, one, .. } => 1 + d(zero).max(d(one)),
            }
        }
        d(&self.root)
    }

    /// Runs the protocol on one input.
    pub fn run(&self, index: &[usize]) -> Result<bool> {
        if index.len() != self.shape.len() {
            return Err(Error::shape("input arity mismatch"));
        }
        for (ax, (&i, &d)) in index.iter().zip(&self.shape).enumerate() {
            if i >= d {
                return Err(Error::shape(format!("index {i} out of range on axis {ax}")));
            }
        }
        let mut node = &self.root;
        loop {
            match node {
                ProtocolNode::Leaf { output } => return Ok(*output),
                ProtocolNode::Split {
                    player, one_set, zero, one, ..
                } => {
                    node = if one_set[index[*player]] { one } else { zero };
                }
            }
        }
    }

    /// Replays every input and checks the leaf output against `f`.
    /// Returns the depth on success.
    pub fn verify(&self, f: &BoolFunction) -> Result<u32> {
        if f.shape() != self.shape.as_slice() {
            return Err(Error::shape("protocol/function shape mismatch"));
        }
        let full = KBox::full(&self.shape)?;
        let mut bad: Option<String> = None;
        full.for_each_cell(|idx| {
            if bad.is_some() {
                return;
            }
            let got = self.run(idx).expect("index in range");
            let want = f.value(idx).expect("index in range");
            if got != want {
                bad = Some(format!("protocol output {got} disagrees with function at {idx:?}"));
            }
        });
        match bad {
            Some(msg) => Err(Error::invariant(msg)),
            None => Ok(self.depth()),
        }
    }

    /// The boxes at the leaves, with their outputs, in left-to-right tree
    /// order. They partition the cube; each is constant under any function
    /// the tree computes.
    pub fn leaf_boxes(&self) -> Result<Vec<(KBox, bool)>> {
        let mut out = Vec::new();
        let full = KBox::full(&self.shape)?;
        fn walk(
            node: &ProtocolNode,
            shape: &[usize],
            masks: Vec<u64>,
            out: &mut Vec<(KBox, bool)>,
        ) -> Result<()> {
            match node {
                ProtocolNode::Leaf { output } => {
                    out.push((KBox::new(shape, masks)?, *output));
                }
                ProtocolNode::Split {
                    player, one_set, zero, one,
                } => {
                    let mut m0 = 0u64;
                    let mut m1 = 0u64;
                    for v in 0..shape[*player] {
                        if masks[*player] >> v & 1 == 1 {
                            if one_set[v] {
                                m1 |= 1 << v;
                            } else {
                                m0 |= 1 << v;
                            }
                        }
                    }
                    if m0 == 0 || m1 == 0 {
                        return Err(Error::invariant("split leaves one side empty"));
                    }
                    let mut masks0 = masks.clone();
                    masks0[*player] = m0;
                    walk(zero, shape, masks0, out)?;
                    let mut masks1 = masks;
                    masks1[*player] = m1;
                    walk(one, shape, masks1, out)?;
                }
            }
            Ok(())
        }
        walk(&self.root, &self.shape, full.masks().to_vec(), &mut out)?;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DetCost {
    pub value: u32,
    pub tree: ProtocolTree,
}

struct Search<'a> {
    f: &'a BoolFunction,
    shape: Vec<usize>,
    /// Bit offset of each axis inside the packed memo key.
    offsets: Vec<u32>,
    memo: HashMap<u64, u32>,
}

impl<'a> Search<'a> {
    fn pack(&self, masks: &[u64]) -> u64 {
        masks
            .iter()
            .zip(&self.offsets)
            .fold(0u64, |acc, (&m, &off)| acc | m << off)
    }

    fn mono_output(&self, masks: &[u64]) -> Option<bool> {
        let b = KBox::new(&self.shape, masks.to_vec()).expect("masks stay valid");
        let mut first: Option<bool> = None;
        let mut mixed = false;
        b.for_each_cell(|idx| {
            if mixed {
                return;
            }
            let v = self.f.value(idx).expect("cell in range");
            match first {
                None => first = Some(v),
                Some(w) if w != v => mixed = true,
                _ => {}
            }
        });
        if mixed {
            None
        } else {
            first
        }
    }

    fn cost(&mut self, masks: &[u64]) -> u32 {
        let key = self.pack(masks);
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let c = if self.mono_output(masks).is_some() {
            0
        } else {
            let mut best = u32::MAX;
            let mut work = masks.to_vec();
            for player in 0..self.shape.len() {
                let s = masks[player];
                if s.count_ones() < 2 {
                    continue;
                }
                let low = s & s.wrapping_neg();
                // Proper submasks containing the lowest element: each
                // unordered split enumerated once, in a fixed order.
                let mut a = (s - 1) & s;
                while a != 0 {
                    if a & low != 0 {
                        work[player] = a;
                        let c0 = self.cost(&work);
                        if c0 + 1 < best {
                            work[player] = s ^ a;
                            let c1 = self.cost(&work);
                            let cand = 1 + c0.max(c1);
                            if cand < best {
                                best = cand;
                            }
                        }
                        work[player] = s;
                    }
                    a = (a - 1) & s;
                }
            }
            best
        };
        self.memo.insert(key, c);
        c
    }

    /// Rebuilds a witness tree from the memo table: at each box, the first
    /// (player, split) pair in enumeration order achieving the cost.
    fn tree(&mut self, masks: &[u64]) -> ProtocolNode {
        if let Some(output) = self.mono_output(masks) {
            return ProtocolNode::Leaf { output };
        }
        let target = self.cost(masks);
        let mut work = masks.to_vec();
        for player in 0..self.shape.len() {
            let s = masks[player];
            if s.count_ones() < 2 {
                continue;
            }
            let low = s & s.wrapping_neg();
            let mut a = (s - 1) & s;
            while a != 0 {
                if a & low != 0 {
                    work[player] = a;
                    let c0 = self.cost(&work);
                    work[player] = s ^ a;
                    let c1 = self.cost(&work);
                    work[player] = s;
                    if 1 + c0.max(c1) == target {
                        let one_mask = s ^ a;
                        let one_set = (0..self.shape[player])
                            .map(|v| one_mask >> v & 1 == 1)
                            .collect();
                        work[player] = a;
                        let zero = Box::new(self.tree(&work));
                        work[player] = one_mask;
                        let one = Box::new(self.tree(&work));
                        work[player] = s;
                        return ProtocolNode::Split {
                            player,
                            one_set,
                            zero,
                            one,
                        };
                    }
                }
                a = (a - 1) & s;
            }
        }
        unreachable!("memoized cost has no achieving split");
    }
}

/// Exact deterministic cost of `f` over the full cube, with an optimal
/// tree as witness. The memo is keyed by the box masks packed into one
/// word, so the axis sizes must sum to at most 62; the cap bounds the
/// number of keys, 2^(sum of sizes).
pub fn det_cc_exact(f: &BoolFunction, caps: &SearchCaps) -> Result<DetCost> {
    let shape = f.shape().to_vec();
    let total_bits: usize = shape.iter().sum();
    if total_bits > 62 {
        return Err(Error::shape("axis sizes sum past 62, box keys do not pack"));
    }
    if total_bits as u32 >= 63 || (1u64 << total_bits) > caps.det_memo_keys {
        return Err(Error::cap(
            "protocol search",
            format!("2^{total_bits} box keys"),
            caps.det_memo_keys.to_string(),
        ));
    }
    let mut offsets = Vec::with_capacity(shape.len());
    let mut acc = 0u32;
    for &d in &shape {
        offsets.push(acc);
        acc += d as u32;
    }
    let mut search = Search {
        f,
        shape: shape.clone(),
        offsets,
        memo: HashMap::new(),
    };
    let full = KBox::full(&shape)?;
    let value = search.cost(full.masks());
    let root = search.tree(full.masks());
    let tree = ProtocolTree { shape, root };
    debug_assert_eq!(tree.depth(), value);
    Ok(DetCost { value, tree })
}

/// Exact two-party deterministic cost.
pub fn det_cc_two_party(f: &BoolFunction, caps: &SearchCaps) -> Result<DetCost> {
    if f.arity() != 2 {
        return Err(Error::shape("two-party cost needs an arity-2 function"));
    }
    det_cc_exact(f, caps)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PartitionCost {
    pub partition: Bipartition,
    pub value: u32,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PartitionBound {
    /// max over bipartitions of the exact induced two-party cost
    pub value: u32,
    /// first bipartition in canonical order attaining the max
    pub witness: Bipartition,
    pub per_partition: Vec<PartitionCost>,
}

/// Best lower bound obtainable by splitting the players into two camps:
/// for each bipartition, the induced two-party function is solved exactly,
/// and the max is taken. Any multiparty protocol can be replayed by the
/// two camps, so every entry lower-bounds the multiparty cost.
pub fn partition_argument_bound(f: &BoolFunction, caps: &SearchCaps) -> Result<PartitionBound> {
    if f.arity() < 2 {
        return Err(Error::shape("partition bound needs at least 2 axes"));
    }
    let mut per_partition = Vec::new();
    let mut best: Option<(u32, Bipartition)> = None;
    for p in all_bipartitions(f.arity()) {
        let induced = f.induced(&p)?;
        let cost = det_cc_two_party(&induced, caps)?.value;
        per_partition.push(PartitionCost {
            partition: p.clone(),
            value: cost,
        });
        if best.as_ref().map_or(true, |(b, _)| cost > *b) {
            best = Some((cost, p));
        }
    }
    let (value, witness) = best.expect("at least one bipartition");
    Ok(PartitionBound {
        value,
        witness,
        per_partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> SearchCaps {
        SearchCaps::default()
    }

    fn eq2(n: usize) -> BoolFunction {
        BoolFunction::from_fn(vec![n, n], |idx| idx[0] == idx[1]).unwrap()
    }

    #[test]
    fn constant_costs_zero() {
        let f = BoolFunction::from_fn(vec![3, 3, 3], |_| true).unwrap();
        let d = det_cc_exact(&f, &caps()).unwrap();
        assert_eq!(d.value, 0);
        assert_eq!(d.tree.verify(&f).unwrap(), 0);
    }

    #[test]
    fn single_bit_function() {
        // output depends on player 0 alone: one announced bit suffices
        let f = BoolFunction::from_fn(vec![2, 3], |idx| idx[0] == 1).unwrap();
        let d = det_cc_exact(&f, &caps()).unwrap();
        assert_eq!(d.value, 1);
        d.tree.verify(&f).unwrap();
    }

    #[test]
    fn equality_two_values() {
        // EQ on [2]x[2]: rank of the identity gives D >= log2(2)+... exact
        // search settles it at 2.
        let d = det_cc_exact(&eq2(2), &caps()).unwrap();
        assert_eq!(d.value, 2);
        d.tree.verify(&eq2(2)).unwrap();
    }

    #[test]
    fn equality_grows_with_domain() {
        let d3 = det_cc_exact(&eq2(3), &caps()).unwrap().value;
        let d4 = det_cc_exact(&eq2(4), &caps()).unwrap().value;
        assert_eq!(d3, 3);
        assert_eq!(d4, 3);
    }

    #[test]
    fn xor_three_players() {
        // parity flips along every axis, so monochromatic boxes are single
        // cells: the 8-cell cube forces depth 3
        let f = BoolFunction::from_fn(vec![2, 2, 2], |idx| (idx[0] + idx[1] + idx[2]) % 2 == 1)
            .unwrap();
        let d = det_cc_exact(&f, &caps()).unwrap();
        assert_eq!(d.value, 3);
        d.tree.verify(&f).unwrap();
    }

    #[test]
    fn leaf_boxes_partition_the_cube() {
        let f = BoolFunction::from_fn(vec![2, 3, 2], |idx| idx[0] + idx[1] > idx[2]).unwrap();
        let d = det_cc_exact(&f, &caps()).unwrap();
        d.tree.verify(&f).unwrap();
        let leaves = d.tree.leaf_boxes().unwrap();
        assert!(leaves.len() as u64 <= 1 << d.value);
        let mut seen = vec![false; f.cells()];
        for (b, out) in &leaves {
            assert!(b.is_mono(&f, *out));
            b.for_each_cell(|idx| {
                let off = f.offset(idx).unwrap();
                assert!(!seen[off], "cell covered twice");
                seen[off] = true;
            });
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn depth_never_exceeds_log_leaf_count_bound() {
        // brute sanity on all 2x2 functions: cost <= 2 bits always
        for f in crate::boolfn::all_functions(vec![2, 2]).unwrap() {
            let d = det_cc_exact(&f, &caps()).unwrap();
            assert!(d.value <= 2);
            d.tree.verify(&f).unwrap();
        }
    }

    #[test]
    fn partition_bound_on_three_axis_equality() {
        // all-equal indicator: every bipartition induces an injective-row
        // structure; max two-party cost is attained and is > 0
        let f = BoolFunction::from_fn(vec![2, 2, 2], |idx| idx[0] == idx[1] && idx[1] == idx[2])
            .unwrap();
        let pb = partition_argument_bound(&f, &caps()).unwrap();
        assert_eq!(pb.per_partition.len(), 3);
        assert_eq!(pb.value, 2);
        assert_eq!(pb.witness.render(), "1|23");
        let d = det_cc_exact(&f, &caps()).unwrap();
        assert!(pb.value <= d.value);
    }

    #[test]
    fn partition_bound_constant() {
        let f = BoolFunction::from_fn(vec![2, 2, 2], |_| false).unwrap();
        let pb = partition_argument_bound(&f, &caps()).unwrap();
        assert_eq!(pb.value, 0);
        assert_eq!(pb.witness.render(), "1|23");
    }

    #[test]
    fn cap_refuses_wide_cubes() {
        let f = BoolFunction::from_fn(vec![20, 20], |idx| idx[0] == idx[1]).unwrap();
        let tight = SearchCaps {
            det_memo_keys: 1 << 16,
            ..SearchCaps::default()
        };
        let err = det_cc_exact(&f, &tight).unwrap_err();
        assert_eq!(err.kind(), "cap-exceeded");
        // past 62 summed values the keys stop packing regardless of caps
        let wide = BoolFunction::from_fn(vec![32, 32], |idx| idx[0] == idx[1]).unwrap();
        assert_eq!(det_cc_exact(&wide, &caps()).unwrap_err().kind(), "shape");
    }
}

//! Three-party relation built from three two-party clauses. Inputs are
//! pairs: x = (x1,x2), y = (y1,y2), z = (z1,z2), and output (i,b) is valid
//! iff clause i evaluates to b on its two halves: f1(x1,y1), f2(x2,z1),
//! f3(y2,z2). Every two-camp split leaves some camp holding both halves of
//! a clause, so every induced relation is solvable silently, while the
//! three-party relation itself is not.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolfn::{BoolFunction, KBox};
use crate::caps::SearchCaps;
use crate::error::{Error, Result};
use crate::partition::{all_bipartitions, Bipartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct RelOutput {
    /// clause index, 1-based
    pub clause: u8,
    pub b: bool,
}

impl RelOutput {
    pub fn code(self) -> u8 {
        (self.clause - 1) * 2 + self.b as u8
    }

    pub fn from_code(code: u8) -> Self {
        RelOutput {
            clause: code / 2 + 1,
            b: code % 2 == 1,
        }
    }

    pub fn render(self) -> String {
        format!("({},{})", self.clause, self.b as u8)
    }
}

/// The 6 outputs as a bitmask universe.
pub const ALL_OUTPUTS: u8 = 0b11_1111;

/// A relation with per-input sets of acceptable outputs, at most 6 outputs.
pub trait OutputRelation {
    fn shape(&self) -> &[usize];
    /// Bitmask over output codes valid at this cell; never empty.
    fn valid_mask(&self, idx: &[usize]) -> Result<u8>;

    fn is_valid(&self, idx: &[usize], out: RelOutput) -> Result<bool> {
        Ok(self.valid_mask(idx)? >> out.code() & 1 == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRelation {
    f1: BoolFunction,
    f2: BoolFunction,
    f3: BoolFunction,
    shape: Vec<usize>,
}

impl KRelation {
    /// Clause domains: f1 on x1 x y1, f2 on x2 x z1, f3 on y2 x z2.
    pub fn new(f1: BoolFunction, f2: BoolFunction, f3: BoolFunction) -> Result<Self> {
        for (name, f) in [("f1", &f1), ("f2", &f2), ("f3", &f3)] {
            if f.arity() != 2 {
                return Err(Error::shape(format!("clause {name} must have two axes")));
            }
        }
        let x = f1.shape()[0] * f2.shape()[0];
        let y = f1.shape()[1] * f3.shape()[0];
        let z = f2.shape()[1] * f3.shape()[1];
        Ok(KRelation {
            shape: vec![x, y, z],
            f1,
            f2,
            f3,
        })
    }

    pub fn clauses(&self) -> (&BoolFunction, &BoolFunction, &BoolFunction) {
        (&self.f1, &self.f2, &self.f3)
    }

    /// x = x1 * |X2| + x2, first half high.
    pub fn split_x(&self, x: usize) -> (usize, usize) {
        let low = self.f2.shape()[0];
        (x / low, x % low)
    }

    pub fn split_y(&self, y: usize) -> (usize, usize) {
        let low = self.f3.shape()[0];
        (y / low, y % low)
    }

    pub fn split_z(&self, z: usize) -> (usize, usize) {
        let low = self.f3.shape()[1];
        (z / low, z % low)
    }
}

impl OutputRelation for KRelation {
    fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Always exactly 3 bits: each clause forces its own b.
    fn valid_mask(&self, idx: &[usize]) -> Result<u8> {
        if idx.len() != 3 {
            return Err(Error::shape("relation inputs have three coordinates"));
        }
        let (x1, x2) = self.split_x(idx[0]);
        let (y1, y2) = self.split_y(idx[1]);
        let (z1, z2) = self.split_z(idx[2]);
        let b1 = self.f1.value(&[x1, y1])?;
        let b2 = self.f2.value(&[x2, z1])?;
        let b3 = self.f3.value(&[y2, z2])?;
        let mut mask = 0u8;
        mask |= 1 << RelOutput { clause: 1, b: b1 }.code();
        mask |= 1 << RelOutput { clause: 2, b: b2 }.code();
        mask |= 1 << RelOutput { clause: 3, b: b3 }.code();
        Ok(mask)
    }
}

/// Width-checked builder: every clause on [2^n] x [2^n] for one shared n,
/// matching inputs that are 2n-bit strings with the first half high.
pub fn build_relation(f1: BoolFunction, f2: BoolFunction, f3: BoolFunction) -> Result<KRelation> {
    let w = f1.shape().first().copied().unwrap_or(0);
    for f in [&f1, &f2, &f3] {
        if f.arity() != 2 || f.shape() != [w, w] {
            return Err(Error::precondition("clause width mismatch"));
        }
    }
    if !w.is_power_of_two() || w < 2 {
        return Err(Error::precondition("clause width must be 2^n with n >= 1"));
    }
    if w > 4 {
        return Err(Error::precondition("clause width past desk scale (n <= 2)"));
    }
    KRelation::new(f1, f2, f3)
}

/// Inner product mod 2 on n-bit words, as a function on [2^n] x [2^n].
pub fn inner_product_function(n: u32) -> Result<BoolFunction> {
    if n == 0 || n > 6 {
        return Err(Error::precondition("word length n must be in 1..=6"));
    }
    let m = 1usize << n;
    BoolFunction::from_fn(vec![m, m], |idx| (idx[0] & idx[1]).count_ones() % 2 == 1)
}

/// Dense valid-output table; the general form restriction tests and hand
/// built counterexamples use.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MaskRelation {
    shape: Vec<usize>,
    masks: Vec<u8>,
}

impl MaskRelation {
    pub fn new(shape: Vec<usize>, masks: Vec<u8>) -> Result<Self> {
        if shape.len() < 2 || shape.iter().any(|&d| d == 0) {
            return Err(Error::shape("need at least two nonempty axes"));
        }
        let cells: usize = shape.iter().product();
        if masks.len() != cells {
            return Err(Error::shape(format!(
                "expected {cells} masks, got {}",
                masks.len()
            )));
        }
        if masks.iter().any(|&m| m == 0) {
            return Err(Error::precondition("every input needs a valid output"));
        }
        if masks.iter().any(|&m| m > ALL_OUTPUTS) {
            return Err(Error::precondition("output codes run 0..6"));
        }
        Ok(MaskRelation { shape, masks })
    }

    pub fn from_relation(r: &impl OutputRelation) -> Result<Self> {
        let shape = r.shape().to_vec();
        let full = KBox::full(&shape)?;
        let mut masks = Vec::with_capacity(shape.iter().product());
        let mut err = None;
        full.for_each_cell(|idx| {
            if err.is_none() {
                match r.valid_mask(idx) {
                    Ok(m) => masks.push(m),
                    Err(e) => err = Some(e),
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        MaskRelation::new(shape, masks)
    }

    pub fn masks(&self) -> &[u8] {
        &self.masks
    }

    fn offset(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.shape.len() {
            return Err(Error::shape("index arity mismatch"));
        }
        let mut off = 0usize;
        for (&i, &d) in idx.iter().zip(&self.shape) {
            if i >= d {
                return Err(Error::shape("index out of range"));
            }
            off = off * d + i;
        }
        Ok(off)
    }

    /// Randomly drops valid outputs, always keeping at least one per input.
    pub fn restrict_random(&self, seed: u64) -> MaskRelation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let masks = self
            .masks
            .iter()
            .map(|&m| {
                let bits: Vec<u8> = (0..6).filter(|&c| m >> c & 1 == 1).collect();
                let keep = bits[rng.gen_range(0..bits.len())];
                let mut out = 1u8 << keep;
                for &c in &bits {
                    if c != keep && rng.gen_bool(0.5) {
                        out |= 1 << c;
                    }
                }
                out
            })
            .collect();
        MaskRelation {
            shape: self.shape.clone(),
            masks,
        }
    }
}

impl OutputRelation for MaskRelation {
    fn shape(&self) -> &[usize] {
        &self.shape
    }

    fn valid_mask(&self, idx: &[usize]) -> Result<u8> {
        Ok(self.masks[self.offset(idx)?])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum RelNode {
    Leaf {
        output: RelOutput,
    },
    Split {
        player: usize,
        one_set: Vec<bool>,
        zero: Box<RelNode>,
        one: Box<RelNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RelTree {
    pub shape: Vec<usize>,
    pub root: RelNode,
}

impl RelTree {
    pub fn depth(&self) -> u32 {
        fn d(n: &RelNode) -> u32 {
            match n {
                RelNode::Leaf { .. } => 0,
                RelNode::Split { zero, one, .. } => 1 + d(zero).max(d(one)),
            }
        }
        d(&self.root)
    }

    pub fn run(&self, index: &[usize]) -> Result<RelOutput> {
        if index.len() != self.shape.len() {
            return Err(Error::shape("input arity mismatch"));
        }
        let mut node = &self.root;
        loop {
            match node {
                RelNode::Leaf { output } => return Ok(*output),
                RelNode::Split {
                    player, one_set, zero, one,
                } => {
                    let v = *index
                        .get(*player)
                        .filter(|&&v| v < self.shape[*player])
                        .ok_or_else(|| Error::shape("index out of range"))?;
                    node = if one_set[v] { one } else { zero };
                }
            }
        }
    }

    /// Replays every input; each answer must be valid for the relation.
    pub fn verify(&self, r: &impl OutputRelation) -> Result<u32> {
        if r.shape() != self.shape.as_slice() {
            return Err(Error::shape("protocol/relation shape mismatch"));
        }
        let full = KBox::full(&self.shape)?;
        let mut bad: Option<String> = None;
        full.for_each_cell(|idx| {
            if bad.is_some() {
                return;
            }
            let out = self.run(idx).expect("index in range");
            if !r.is_valid(idx, out).expect("index in range") {
                bad = Some(format!("output {} invalid at {idx:?}", out.render()));
            }
        });
        match bad {
            Some(msg) => Err(Error::invariant(msg)),
            None => Ok(self.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RelDetCost {
    pub value: u32,
    pub tree: RelTree,
}

struct RelSearch<'a, R: OutputRelation> {
    r: &'a R,
    shape: Vec<usize>,
    offsets: Vec<u32>,
    memo: HashMap<u64, u32>,
}

impl<'a, R: OutputRelation> RelSearch<'a, R> {
    fn pack(&self, masks: &[u64]) -> u64 {
        masks
            .iter()
            .zip(&self.offsets)
            .fold(0u64, |acc, (&m, &off)| acc | m << off)
    }

    /// Lowest-coded output valid on the whole box, if any.
    fn common_output(&self, masks: &[u64]) -> Option<RelOutput> {
        let b = KBox::new(&self.shape, masks.to_vec()).expect("masks stay valid");
        let mut acc = ALL_OUTPUTS;
        b.for_each_cell(|idx| {
            if acc != 0 {
                acc &= self.r.valid_mask(idx).expect("cell in range");
            }
        });
        if acc == 0 {
            None
        } else {
            Some(RelOutput::from_code(acc.trailing_zeros() as u8))
        }
    }

    fn cost(&mut self, masks: &[u64]) -> u32 {
        let key = self.pack(masks);
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let c = if self.common_output(masks).is_some() {
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
            debug_assert!(best < u32::MAX, "singleton boxes always have an output");
            best
        };
        self.memo.insert(key, c);
        c
    }

    fn tree(&mut self, masks: &[u64]) -> RelNode {
        if let Some(output) = self.common_output(masks) {
            return RelNode::Leaf { output };
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
                        return RelNode::Split {
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

/// Exact deterministic cost of the relation over the full cube. The leaf
/// condition is a shared valid output, not a constant value.
pub fn rel_det_cc_exact(r: &impl OutputRelation, caps: &SearchCaps) -> Result<RelDetCost> {
    let shape = r.shape().to_vec();
    let total_bits: usize = shape.iter().sum();
    if total_bits > 62 {
        return Err(Error::shape("axis sizes sum past 62, box keys do not pack"));
    }
    if (1u64 << total_bits) > caps.det_memo_keys {
        return Err(Error::cap(
            "relation protocol search",
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
    let mut search = RelSearch {
        r,
        shape: shape.clone(),
        offsets,
        memo: HashMap::new(),
    };
    let full = KBox::full(&shape)?;
    let value = search.cost(full.masks());
    let root = search.tree(full.masks());
    let tree = RelTree { shape, root };
    debug_assert_eq!(tree.depth(), value);
    Ok(RelDetCost { value, tree })
}

/// A camp that answers without hearing anything: outputs[j] is the answer
/// for the camp's j-th joint input, row-major over its axes in order.
/// `side` holds 0-based axis indices internally; it serializes 1-based.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SilentWitness {
    #[serde(serialize_with = "axes_1based")]
    pub side: Vec<usize>,
    pub outputs: Vec<RelOutput>,
}

fn axes_1based<S: serde::Serializer>(
    axes: &[usize],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(axes.iter().map(|a| a + 1))
}

impl SilentWitness {
    /// Replays the map: each recorded answer must be valid against every
    /// input the other camp could hold.
    pub fn verify(&self, r: &impl OutputRelation) -> Result<()> {
        let shape = r.shape();
        let k = shape.len();
        let other: Vec<usize> = (0..k).filter(|a| !self.side.contains(a)).collect();
        let own_dims: Vec<usize> = self.side.iter().map(|&a| shape[a]).collect();
        let other_dims: Vec<usize> = other.iter().map(|&a| shape[a]).collect();
        let own_cells: usize = own_dims.iter().product();
        let other_cells: usize = other_dims.iter().product();
        if self.outputs.len() != own_cells {
            return Err(Error::invariant(format!(
                "witness lists {} outputs for {own_cells} inputs",
                self.outputs.len()
            )));
        }
        let mut idx = vec![0usize; k];
        for mine in 0..own_cells {
            let mut rem = mine;
            for (pos, &a) in self.side.iter().enumerate().rev() {
                idx[a] = rem % own_dims[pos];
                rem /= own_dims[pos];
            }
            for theirs in 0..other_cells {
                let mut rem = theirs;
                for (pos, &a) in other.iter().enumerate().rev() {
                    idx[a] = rem % other_dims[pos];
                    rem /= other_dims[pos];
                }
                if !r.is_valid(&idx, self.outputs[mine])? {
                    return Err(Error::invariant(format!(
                        "witness output {} invalid at {idx:?}",
                        self.outputs[mine].render()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ZeroCommAnswer {
    pub solvable: bool,
    pub left_works: bool,
    pub right_works: bool,
    pub witness: Option<SilentWitness>,
}

/// Per own-input intersection of valid outputs over every counterpart
/// input; the camp answers silently iff no intersection is empty.
fn silent_outputs(r: &impl OutputRelation, axes: &[usize]) -> Result<Option<Vec<RelOutput>>> {
    let shape = r.shape();
    let k = shape.len();
    let own: Vec<usize> = axes.to_vec();
    let other: Vec<usize> = (0..k).filter(|a| !own.contains(a)).collect();
    let own_dims: Vec<usize> = own.iter().map(|&a| shape[a]).collect();
    let other_dims: Vec<usize> = other.iter().map(|&a| shape[a]).collect();
    let own_cells: usize = own_dims.iter().product();
    let other_cells: usize = other_dims.iter().product();
    let mut idx = vec![0usize; k];
    let mut outputs = Vec::with_capacity(own_cells);
    for mine in 0..own_cells {
        let mut rem = mine;
        for (pos, &a) in own.iter().enumerate().rev() {
            idx[a] = rem % own_dims[pos];
            rem /= own_dims[pos];
        }
        let mut acc = ALL_OUTPUTS;
        for theirs in 0..other_cells {
            let mut rem = theirs;
            for (pos, &a) in other.iter().enumerate().rev() {
                idx[a] = rem % other_dims[pos];
                rem /= other_dims[pos];
            }
            acc &= r.valid_mask(&idx)?;
            if acc == 0 {
                return Ok(None);
            }
        }
        outputs.push(RelOutput::from_code(acc.trailing_zeros() as u8));
    }
    Ok(Some(outputs))
}

pub fn side_answers_silently(r: &impl OutputRelation, axes: &[usize]) -> Result<bool> {
    Ok(silent_outputs(r, axes)?.is_some())
}

/// Whether one camp of the split can announce a valid output on its own.
/// The left camp is preferred as the designated speaker when both work.
pub fn zero_comm_check(r: &impl OutputRelation, p: &Bipartition) -> Result<ZeroCommAnswer> {
    if p.k() != r.shape().len() {
        return Err(Error::shape("bipartition arity mismatch"));
    }
    let left = silent_outputs(r, p.left())?;
    let right = silent_outputs(r, p.right())?;
    let left_works = left.is_some();
    let right_works = right.is_some();
    let witness = match (left, right) {
        (Some(outputs), _) => Some(SilentWitness {
            side: p.left().to_vec(),
            outputs,
        }),
        (None, Some(outputs)) => Some(SilentWitness {
            side: p.right().to_vec(),
            outputs,
        }),
        (None, None) => None,
    };
    Ok(ZeroCommAnswer {
        solvable: left_works || right_works,
        left_works,
        right_works,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SilentPartition {
    pub partition: Bipartition,
    pub answer: ZeroCommAnswer,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SilentReport {
    pub partitions: Vec<SilentPartition>,
    /// every two-camp split admits a camp that answers without speaking
    pub all_induced_silent: bool,
}

/// The zero-communication picture over all two-camp splits.
pub fn silent_induced_check(r: &impl OutputRelation) -> Result<SilentReport> {
    let k = r.shape().len();
    let mut partitions = Vec::new();
    for p in all_bipartitions(k) {
        let answer = zero_comm_check(r, &p)?;
        partitions.push(SilentPartition {
            partition: p,
            answer,
        });
    }
    let all_induced_silent = partitions.iter().all(|q| q.answer.solvable);
    Ok(SilentReport {
        partitions,
        all_induced_silent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> SearchCaps {
        SearchCaps::default()
    }

    fn ip_relation(n: u32) -> KRelation {
        let f = inner_product_function(n).unwrap();
        build_relation(f.clone(), f.clone(), f).unwrap()
    }

    #[test]
    fn output_codes_roundtrip() {
        for code in 0..6u8 {
            let out = RelOutput::from_code(code);
            assert_eq!(out.code(), code);
        }
        assert_eq!(RelOutput { clause: 2, b: true }.render(), "(2,1)");
    }

    #[test]
    fn valid_mask_has_three_options() {
        let r = ip_relation(1);
        assert_eq!(r.shape(), &[4, 4, 4]);
        let full = KBox::full(r.shape()).unwrap();
        full.for_each_cell(|idx| {
            assert_eq!(r.valid_mask(idx).unwrap().count_ones(), 3);
        });
    }

    #[test]
    fn split_halves_agree_with_encoding() {
        let r = ip_relation(1);
        assert_eq!(r.split_x(0b10), (1, 0));
        assert_eq!(r.split_y(0b01), (0, 1));
        assert_eq!(r.split_z(0b11), (1, 1));
    }

    #[test]
    fn builder_rejects_bad_widths() {
        let a = BoolFunction::from_fn(vec![2, 2], |i| i[0] == i[1]).unwrap();
        let b = BoolFunction::from_fn(vec![4, 4], |i| i[0] == i[1]).unwrap();
        let c = BoolFunction::from_fn(vec![3, 3], |i| i[0] == i[1]).unwrap();
        let wide = BoolFunction::from_fn(vec![8, 8], |i| i[0] == i[1]).unwrap();
        assert!(build_relation(a.clone(), b.clone(), a.clone()).is_err());
        assert!(build_relation(c.clone(), c.clone(), c).is_err());
        assert!(build_relation(wide.clone(), wide.clone(), wide).is_err());
        assert!(build_relation(b.clone(), b.clone(), b).is_ok());
    }

    #[test]
    fn inner_product_table() {
        let f = inner_product_function(2).unwrap();
        assert!(!f.value(&[0b00, 0b11]).unwrap());
        assert!(f.value(&[0b01, 0b01]).unwrap());
        assert!(f.value(&[0b11, 0b01]).unwrap());
        assert!(!f.value(&[0b11, 0b11]).unwrap());
    }

    #[test]
    fn table_matches_bitstring_evaluation() {
        // independent check straight off the 2n-bit string reading: first
        // half = high bits, clause i forces b
        let n = 1u32;
        let r = ip_relation(n);
        let w = 1usize << n;
        let ip = |a: usize, b: usize| (a & b).count_ones() % 2 == 1;
        for x in 0..w * w {
            for y in 0..w * w {
                for z in 0..w * w {
                    let (x1, x2) = (x >> n, x % w);
                    let (y1, y2) = (y >> n, y % w);
                    let (z1, z2) = (z >> n, z % w);
                    let mut expect = 0u8;
                    expect |= 1 << RelOutput { clause: 1, b: ip(x1, y1) }.code();
                    expect |= 1 << RelOutput { clause: 2, b: ip(x2, z1) }.code();
                    expect |= 1 << RelOutput { clause: 3, b: ip(y2, z2) }.code();
                    assert_eq!(r.valid_mask(&[x, y, z]).unwrap(), expect);
                    let forced = RelOutput { clause: 1, b: ip(x1, y1) };
                    assert!(r.is_valid(&[x, y, z], forced).unwrap());
                }
            }
        }
    }

    #[test]
    fn every_induced_relation_is_silent() {
        let r = ip_relation(1);
        let rep = silent_induced_check(&r).unwrap();
        assert!(rep.all_induced_silent);
        assert_eq!(rep.partitions.len(), 3);
        for q in &rep.partitions {
            // the two-axis camp always holds a full clause
            if q.partition.left().len() == 2 {
                assert!(q.answer.left_works);
            } else {
                assert!(q.answer.right_works);
            }
            let w = q.answer.witness.as_ref().unwrap();
            w.verify(&r).unwrap();
        }
    }

    #[test]
    fn silence_is_structural_for_any_clauses() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x3e1a);
        for _ in 0..10 {
            let dims: Vec<usize> = (0..6).map(|_| rng.gen_range(1..=3)).collect();
            let table = |d0: usize, d1: usize, rng: &mut ChaCha8Rng| {
                let vals: Vec<bool> = (0..d0 * d1).map(|_| rng.gen_bool(0.5)).collect();
                BoolFunction::new(vec![d0, d1], vals).unwrap()
            };
            let f1 = table(dims[0], dims[1], &mut rng);
            let f2 = table(dims[2], dims[3], &mut rng);
            let f3 = table(dims[4], dims[5], &mut rng);
            let r = KRelation::new(f1, f2, f3).unwrap();
            let rep = silent_induced_check(&r).unwrap();
            assert!(rep.all_induced_silent);
            for q in &rep.partitions {
                q.answer.witness.as_ref().unwrap().verify(&r).unwrap();
            }
        }
    }

    #[test]
    fn lone_player_cannot_always_answer() {
        // the x-camp fails once both its clause rows are nonconstant
        let r = ip_relation(1);
        assert!(!side_answers_silently(&r, &[0]).unwrap());
        assert!(!side_answers_silently(&r, &[1]).unwrap());
        assert!(!side_answers_silently(&r, &[2]).unwrap());
    }

    #[test]
    fn relation_needs_communication_but_two_bits_suffice() {
        // no single output is valid on the whole cube, so cost >= 1; x2 and
        // z1 announced settle clause 2, so cost <= 2; splitting once cannot
        // make both halves constant: cost = 2
        let r = ip_relation(1);
        let d = rel_det_cc_exact(&r, &caps()).unwrap();
        assert_eq!(d.value, 2);
        assert_eq!(d.tree.verify(&r).unwrap(), 2);
    }

    #[test]
    fn constant_clause_collapses_cost() {
        let c0 = BoolFunction::from_fn(vec![2, 2], |_| false).unwrap();
        let ip = inner_product_function(1).unwrap();
        let r = KRelation::new(ip.clone(), c0, ip).unwrap();
        let d = rel_det_cc_exact(&r, &caps()).unwrap();
        assert_eq!(d.value, 0);
        d.tree.verify(&r).unwrap();
        assert!(side_answers_silently(&r, &[0]).unwrap());
    }

    #[test]
    fn mixed_clause_shapes() {
        let f1 = BoolFunction::from_fn(vec![2, 3], |idx| idx[0] == idx[1] % 2).unwrap();
        let f2 = BoolFunction::from_fn(vec![2, 2], |idx| idx[0] != idx[1]).unwrap();
        let f3 = BoolFunction::from_fn(vec![3, 2], |idx| idx[0] % 2 == idx[1]).unwrap();
        let r = KRelation::new(f1, f2, f3).unwrap();
        assert_eq!(r.shape(), &[4, 9, 4]);
        let d = rel_det_cc_exact(&r, &caps()).unwrap();
        d.tree.verify(&r).unwrap();
        let silent = silent_induced_check(&r).unwrap();
        assert!(silent.all_induced_silent);
        assert!(d.value >= 1);
    }

    #[test]
    fn forced_parity_answer_defeats_silence() {
        // only valid output: (1, x xor y xor z); neither camp of any split
        // knows the other camp's parity
        let shape = vec![2usize, 2, 2];
        let mut masks = Vec::new();
        for x in 0..2usize {
            for y in 0..2usize {
                for z in 0..2usize {
                    let b = (x + y + z) % 2 == 1;
                    masks.push(1u8 << RelOutput { clause: 1, b }.code());
                }
            }
        }
        let r = MaskRelation::new(shape, masks).unwrap();
        for p in all_bipartitions(3) {
            let ans = zero_comm_check(&r, &p).unwrap();
            assert!(!ans.solvable);
            assert!(ans.witness.is_none());
        }
        // every leaf is a single cell, eight cells force depth three
        let d = rel_det_cc_exact(&r, &caps()).unwrap();
        assert_eq!(d.value, 3);
        d.tree.verify(&r).unwrap();
    }

    #[test]
    fn mask_relation_validates() {
        assert!(MaskRelation::new(vec![2, 2], vec![1, 2, 0, 4]).is_err());
        assert!(MaskRelation::new(vec![2, 2], vec![64, 1, 1, 1]).is_err());
        assert!(MaskRelation::new(vec![2, 2], vec![1, 1, 1]).is_err());
        assert!(MaskRelation::new(vec![2, 2], vec![63, 1, 2, 32]).is_ok());
    }

    #[test]
    fn restriction_never_lowers_cost() {
        let r = ip_relation(1);
        let dense = MaskRelation::from_relation(&r).unwrap();
        let base = rel_det_cc_exact(&dense, &caps()).unwrap();
        assert_eq!(base.value, 2);
        for seed in 0..6u64 {
            let tight = dense.restrict_random(seed);
            for (full, cut) in dense.masks().iter().zip(tight.masks()) {
                assert_eq!(full & cut, *cut);
                assert!(*cut != 0);
            }
            let d = rel_det_cc_exact(&tight, &caps()).unwrap();
            assert!(d.value >= base.value);
            d.tree.verify(&tight).unwrap();
        }
    }
}

//! Exact monochromatic box covers. The b-cover number is the minimum
//! number of b-monochromatic boxes whose union is the set of b-valued
//! inputs; an optimal cover always exists using only maximal boxes, so the
//! search enumerates those and runs exact set cover over them.

use std::collections::HashMap;

use crate::boolfn::{BoolFunction, KBox};
use crate::caps::SearchCaps;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BoxCover {
    pub b: bool,
    pub boxes: Vec<KBox>,
}

impl BoxCover {
    /// Every box b-monochromatic, every b-cell covered.
    pub fn verify(&self, f: &BoolFunction) -> Result<()> {
        let mut covered = vec![false; f.cells()];
        for bx in &self.boxes {
            if bx.arity() != f.arity() {
                return Err(Error::shape("box arity mismatch"));
            }
            let mut bad = false;
            bx.for_each_cell(|idx| {
                match f.value(idx) {
                    Ok(v) if v == self.b => covered[f.offset(idx).unwrap()] = true,
                    _ => bad = true,
                }
            });
            if bad {
                return Err(Error::invariant(format!(
                    "box {} is not {}-monochromatic",
                    bx.render(),
                    self.b as u8
                )));
            }
        }
        for off in 0..f.cells() {
            if f.value_at(off) == self.b && !covered[off] {
                return Err(Error::invariant(format!(
                    "{}-cell at offset {off} left uncovered",
                    self.b as u8
                )));
            }
        }
        Ok(())
    }
}

/// All maximal b-monochromatic boxes, each exactly once.
///
/// Enumeration: fix the widest axis as the closure axis. Every other axis
/// ranges over all nonempty value subsets; the closure axis is then forced
/// to the set of values keeping the box b-monochromatic. A combination is
/// emitted iff that closure is nonempty and each generator subset is itself
/// closed (equals the full set of values that keep the box monochromatic),
/// which holds exactly for maximal boxes and picks each out once.
pub fn maximal_mono_boxes(f: &BoolFunction, b: bool, caps: &SearchCaps) -> Result<Vec<KBox>> {
    let shape = f.shape().to_vec();
    let k = shape.len();
    if shape.iter().any(|&d| d > 64) {
        return Err(Error::shape("axes are capped at 64 values"));
    }
    if f.cells() as u64 > caps.cover_cells {
        return Err(Error::cap(
            "cover search",
            format!("{} cells", f.cells()),
            caps.cover_cells.to_string(),
        ));
    }
    // closure axis: first among the widest
    let closure_axis = (0..k).max_by_key(|&i| (shape[i], usize::MAX - i)).unwrap();
    let mut gen_space = 1u128;
    for (i, &d) in shape.iter().enumerate() {
        if i != closure_axis {
            gen_space = gen_space.saturating_mul((1u128 << d) - 1);
        }
    }
    if gen_space > caps.cover_generator as u128 {
        return Err(Error::cap(
            "cover generator enumeration",
            gen_space.to_string(),
            caps.cover_generator.to_string(),
        ));
    }

    // value table packed per closure-axis column: for each joint index of
    // the other axes, the set of closure values with f = b
    let gen_axes: Vec<usize> = (0..k).filter(|&i| i != closure_axis).collect();
    let gen_dims: Vec<usize> = gen_axes.iter().map(|&a| shape[a]).collect();
    let gen_cells: usize = gen_dims.iter().product();
    let mut columns = vec![0u64; gen_cells];
    {
        let full = KBox::full(&shape)?;
        full.for_each_cell(|cell| {
            if f.value(cell).unwrap() == b {
                let mut g = 0usize;
                for &a in &gen_axes {
                    g = g * shape[a] + cell[a];
                }
                columns[g] |= 1u64 << cell[closure_axis];
            }
        });
    }

    let col_of = |gen_vals: &[usize]| -> usize {
        let mut g = 0usize;
        for (&a, &v) in gen_axes.iter().zip(gen_vals) {
            g = g * shape[a] + v;
        }
        g
    };

    // closure of a generator combination: AND of its columns
    let closure = |gen_masks: &[u64]| -> u64 {
        let mut acc = if shape[closure_axis] == 64 {
            u64::MAX
        } else {
            (1u64 << shape[closure_axis]) - 1
        };
        let mut vals = vec![0usize; gen_axes.len()];
        // iterate the product of the generator subsets
        fn rec(
            gen_masks: &[u64],
            gen_dims: &[usize],
            vals: &mut [usize],
            depth: usize,
            acc: &mut u64,
            columns: &[u64],
            col_of: &dyn Fn(&[usize]) -> usize,
        ) {
            if *acc == 0 {
                return;
            }
            if depth == gen_masks.len() {
                *acc &= columns[col_of(vals)];
                return;
            }
            for v in 0..gen_dims[depth] {
                if gen_masks[depth] >> v & 1 == 1 {
                    vals[depth] = v;
                    rec(gen_masks, gen_dims, vals, depth + 1, acc, columns, col_of);
                }
            }
        }
        rec(gen_masks, &gen_dims, &mut vals, 0, &mut acc, &columns, &col_of);
        acc
    };

    let mut out = Vec::new();
    let mut gen_masks: Vec<u64> = vec![0; gen_axes.len()];
    // odometer over nonempty subsets of each generator axis, ascending
    fn next_combo(masks: &mut [u64], dims: &[usize]) -> bool {
        for i in (0..masks.len()).rev() {
            let top = if dims[i] == 64 {
                u64::MAX
            } else {
                (1u64 << dims[i]) - 1
            };
            if masks[i] < top {
                masks[i] += 1;
                return true;
            }
            masks[i] = 1;
        }
        false
    }
    for m in gen_masks.iter_mut() {
        *m = 1;
    }
    if gen_axes.is_empty() {
        // single-axis function: the unique maximal box is the closed set itself
        let c = closure(&[]);
        if c != 0 {
            let mut masks = vec![0u64; k];
            masks[closure_axis] = c;
            out.push(KBox::new(&shape, masks)?);
        }
        return Ok(out);
    }
    loop {
        let c = closure(&gen_masks);
        if c != 0 {
            // canonicity: each generator subset must equal its own closure,
            // the set of values whose substitution keeps the box mono
            let mut canonical = true;
            'axes: for gi in 0..gen_axes.len() {
                let original = gen_masks[gi];
                let mut closed = 0u64;
                for v in 0..gen_dims[gi] {
                    gen_masks[gi] = 1u64 << v;
                    if closure(&gen_masks) & c == c {
                        closed |= 1u64 << v;
                    }
                }
                gen_masks[gi] = original;
                if closed != original {
                    canonical = false;
                    break 'axes;
                }
            }
            if canonical {
                let mut masks = vec![0u64; k];
                masks[closure_axis] = c;
                for (gi, &a) in gen_axes.iter().enumerate() {
                    masks[a] = gen_masks[gi];
                }
                out.push(KBox::new(&shape, masks)?);
            }
        }
        if !next_combo(&mut gen_masks, &gen_dims) {
            break;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CoverCount {
    pub b: bool,
    /// minimum number of b-mono boxes covering the b-cells; 0 iff none exist
    pub count: u64,
    /// ceil(log2(count)); by convention 0 when count = 0
    pub bits: u32,
    /// no b-cells at all: the bound is vacuous
    pub vacuous: bool,
    pub cover: BoxCover,
}

pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Exact b-cover number with an optimal cover as witness.
pub fn cover_number(f: &BoolFunction, b: bool, caps: &SearchCaps) -> Result<CoverCount> {
    let targets: Vec<usize> = (0..f.cells()).filter(|&o| f.value_at(o) == b).collect();
    if targets.is_empty() {
        return Ok(CoverCount {
            b,
            count: 0,
            bits: 0,
            vacuous: true,
            cover: BoxCover { b, boxes: vec![] },
        });
    }
    let boxes = maximal_mono_boxes(f, b, caps)?;
    let target_pos: HashMap<usize, usize> =
        targets.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let words = (targets.len() + 63) / 64;
    let mut box_bits: Vec<Vec<u64>> = Vec::with_capacity(boxes.len());
    for bx in &boxes {
        let mut bits = vec![0u64; words];
        bx.for_each_cell(|idx| {
            let off = f.offset(idx).unwrap();
            let pos = target_pos[&off];
            bits[pos / 64] |= 1u64 << (pos % 64);
        });
        box_bits.push(bits);
    }
    let full: Vec<u64> = {
        let mut v = vec![u64::MAX; words];
        let extra = words * 64 - targets.len();
        if extra > 0 {
            v[words - 1] = u64::MAX >> extra;
        }
        v
    };
    // every cell lies in some maximal box
    {
        let mut union = vec![0u64; words];
        for bits in &box_bits {
            for (u, &w) in union.iter_mut().zip(bits) {
                *u |= w;
            }
        }
        if union != full {
            return Err(Error::invariant("maximal boxes fail to cover the cells"));
        }
    }
    let max_box_cells = box_bits
        .iter()
        .map(|bits| bits.iter().map(|w| w.count_ones() as u64).sum::<u64>())
        .max()
        .unwrap();

    // greedy incumbent: most new cells, ties to the earlier box
    let mut incumbent: Vec<usize> = Vec::new();
    {
        let mut covered = vec![0u64; words];
        while covered != full {
            let mut best = (0u64, usize::MAX);
            for (i, bits) in box_bits.iter().enumerate() {
                let gain: u64 = bits
                    .iter()
                    .zip(&covered)
                    .map(|(&w, &c)| (w & !c).count_ones() as u64)
                    .sum();
                if gain > best.0 {
                    best = (gain, i);
                }
            }
            let (_, pick) = best;
            incumbent.push(pick);
            for (c, &w) in covered.iter_mut().zip(&box_bits[pick]) {
                *c |= w;
            }
        }
    }

    // exact branch and bound on the uncovered cell with the fewest options
    struct Bb<'x> {
        box_bits: &'x [Vec<u64>],
        full: &'x [u64],
        max_box_cells: u64,
        best: Vec<usize>,
        chosen: Vec<usize>,
    }
    impl Bb<'_> {
        fn remaining(&self, covered: &[u64]) -> u64 {
            self.full
                .iter()
                .zip(covered)
                .map(|(&f, &c)| (f & !c).count_ones() as u64)
                .sum()
        }
        fn go(&mut self, covered: Vec<u64>) {
            let rem = self.remaining(&covered);
            if rem == 0 {
                if self.chosen.len() < self.best.len() {
                    self.best = self.chosen.clone();
                }
                return;
            }
            let lower = self.chosen.len() as u64 + rem.div_ceil(self.max_box_cells);
            if lower >= self.best.len() as u64 {
                return;
            }
            // first uncovered cell with the fewest covering boxes
            let mut pick_cell = usize::MAX;
            let mut pick_count = usize::MAX;
            let total = self.full.iter().map(|w| w.count_ones() as usize).sum();
            for pos in 0..total {
                let (w, bit) = (pos / 64, pos % 64);
                if covered[w] >> bit & 1 == 1 {
                    continue;
                }
                let count = self
                    .box_bits
                    .iter()
                    .filter(|bits| bits[w] >> bit & 1 == 1)
                    .count();
                if count < pick_count {
                    pick_count = count;
                    pick_cell = pos;
                    if count == 1 {
                        break;
                    }
                }
            }
            let (w, bit) = (pick_cell / 64, pick_cell % 64);
            for (i, bits) in self.box_bits.iter().enumerate() {
                if bits[w] >> bit & 1 == 0 {
                    continue;
                }
                let mut next = covered.clone();
                for (c, &b) in next.iter_mut().zip(bits) {
                    *c |= b;
                }
                self.chosen.push(i);
                self.go(next);
                self.chosen.pop();
            }
        }
    }
    let mut bb = Bb {
        box_bits: &box_bits,
        full: &full,
        max_box_cells,
        best: incumbent,
        chosen: Vec::new(),
    };
    bb.go(vec![0u64; words]);
    let picked = bb.best;
    let cover = BoxCover {
        b,
        boxes: picked.iter().map(|&i| boxes[i].clone()).collect(),
    };
    cover.verify(f)?;
    let count = cover.boxes.len() as u64;
    Ok(CoverCount {
        b,
        count,
        bits: ceil_log2(count),
        vacuous: false,
        cover,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct NondetSummary {
    pub zero: CoverCount,
    pub one: CoverCount,
    /// boxes to tile the whole cube: the two sides never share a box
    pub total_count: u64,
    pub total_bits: u32,
}

pub fn nondet_cc(f: &BoolFunction, caps: &SearchCaps) -> Result<NondetSummary> {
    let zero = cover_number(f, false, caps)?;
    let one = cover_number(f, true, caps)?;
    let total_count = zero.count + one.count;
    Ok(NondetSummary {
        zero,
        one,
        total_bits: ceil_log2(total_count),
        total_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> SearchCaps {
        SearchCaps::default()
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1 << 20), 20);
    }

    #[test]
    fn equality_one_cover_is_the_diagonal() {
        let f = BoolFunction::from_fn(vec![3, 3], |idx| idx[0] == idx[1]).unwrap();
        let maximal = maximal_mono_boxes(&f, true, &caps()).unwrap();
        // 1-cells are isolated: exactly the three diagonal singletons
        assert_eq!(maximal.len(), 3);
        let c1 = cover_number(&f, true, &caps()).unwrap();
        assert_eq!(c1.count, 3);
        assert_eq!(c1.bits, 2);
        assert!(!c1.vacuous);
        let c0 = cover_number(&f, false, &caps()).unwrap();
        // off-diagonal of a 3x3 grid splits into 2 boxes: rows {0,1}x{2}...
        // exact search answers 3; pin after independent check below
        assert_eq!(c0.count, independent_cover_number(&f, false));
    }

    #[test]
    fn constant_function_edges() {
        let t = BoolFunction::from_fn(vec![2, 2], |_| true).unwrap();
        let c1 = cover_number(&t, true, &caps()).unwrap();
        assert_eq!(c1.count, 1);
        assert_eq!(c1.bits, 0);
        let c0 = cover_number(&t, false, &caps()).unwrap();
        assert_eq!(c0.count, 0);
        assert!(c0.vacuous);
        let nd = nondet_cc(&t, &caps()).unwrap();
        assert_eq!(nd.total_count, 1);
        assert_eq!(nd.total_bits, 0);
    }

    #[test]
    fn maximal_boxes_are_maximal_and_complete() {
        let f = BoolFunction::from_fn(vec![3, 2, 2], |idx| (idx[0] + idx[1] * idx[2]) % 2 == 0)
            .unwrap();
        for b in [false, true] {
            let boxes = maximal_mono_boxes(&f, b, &caps()).unwrap();
            let distinct: std::collections::HashSet<Vec<u64>> =
                boxes.iter().map(|bx| bx.masks().to_vec()).collect();
            assert_eq!(distinct.len(), boxes.len(), "duplicate maximal box");
            for bx in &boxes {
                assert!(bx.is_mono(&f, b));
                // no single-axis extension stays monochromatic
                for ax in 0..3 {
                    for v in 0..f.shape()[ax] {
                        if bx.mask(ax) >> v & 1 == 1 {
                            continue;
                        }
                        let mut masks = bx.masks().to_vec();
                        masks[ax] |= 1 << v;
                        let wider = KBox::new(f.shape(), masks).unwrap();
                        assert!(!wider.is_mono(&f, b), "box {} extendable", bx.render());
                    }
                }
            }
            // every mono singleton lies inside some listed box
            let full = KBox::full(f.shape()).unwrap();
            full.for_each_cell(|idx| {
                if f.value(idx).unwrap() == b {
                    assert!(boxes.iter().any(|bx| bx.contains(idx)));
                }
            });
        }
    }

    /// Independent oracle: bitmask DP over cell subsets, no box reasoning
    /// shared with the search above. Usable when b-cells number <= ~20.
    fn independent_cover_number(f: &BoolFunction, b: bool) -> u64 {
        let targets: Vec<usize> = (0..f.cells()).filter(|&o| f.value_at(o) == b).collect();
        if targets.is_empty() {
            return 0;
        }
        assert!(targets.len() <= 20);
        let pos: HashMap<usize, usize> =
            targets.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        // all mono boxes, maximal or not, as cell masks
        let shape = f.shape();
        let mut box_masks: Vec<u32> = Vec::new();
        let axis_subsets: Vec<Vec<u64>> = shape
            .iter()
            .map(|&d| (1u64..1 << d).collect())
            .collect();
        let mut combo = vec![0usize; shape.len()];
        loop {
            let masks: Vec<u64> = combo
                .iter()
                .zip(&axis_subsets)
                .map(|(&c, subs)| subs[c])
                .collect();
            let bx = KBox::new(shape, masks).unwrap();
            if bx.is_mono(f, b) {
                let mut cellmask = 0u32;
                bx.for_each_cell(|idx| {
                    cellmask |= 1 << pos[&f.offset(idx).unwrap()];
                });
                box_masks.push(cellmask);
            }
            let mut ax = shape.len();
            let mut done = true;
            while ax > 0 {
                ax -= 1;
                combo[ax] += 1;
                if combo[ax] < axis_subsets[ax].len() {
                    done = false;
                    break;
                }
                combo[ax] = 0;
            }
            if done {
                break;
            }
        }
        let fullmask: u32 = if targets.len() == 32 {
            u32::MAX
        } else {
            (1 << targets.len()) - 1
        };
        let mut dp = vec![u64::MAX; (fullmask as usize) + 1];
        dp[0] = 0;
        for s in 0..=fullmask {
            if dp[s as usize] == u64::MAX {
                continue;
            }
            let missing = (0..targets.len()).find(|&i| s >> i & 1 == 0);
            let Some(m) = missing else { continue };
            for &bm in &box_masks {
                if bm >> m & 1 == 1 {
                    let ns = (s | bm) & fullmask;
                    dp[ns as usize] = dp[ns as usize].min(dp[s as usize] + 1);
                }
            }
        }
        dp[fullmask as usize]
    }

    #[test]
    fn exact_cover_matches_dp_oracle_on_randoms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x20c0);
        for _ in 0..40 {
            let shape = vec![rng.gen_range(2..=3usize), rng.gen_range(2..=3usize), 2];
            let cells: usize = shape.iter().product();
            let values: Vec<bool> = (0..cells).map(|_| rng.gen_bool(0.5)).collect();
            let f = BoolFunction::new(shape, values).unwrap();
            for b in [false, true] {
                let got = cover_number(&f, b, &caps()).unwrap();
                let want = independent_cover_number(&f, b);
                assert_eq!(got.count, want, "cover mismatch on {:?}", f.values());
            }
        }
    }

    #[test]
    fn disjointness_two_party_cover() {
        // intersection-empty indicator on subsets of a 2-element universe
        let f = BoolFunction::from_fn(vec![4, 4], |idx| idx[0] & idx[1] == 0).unwrap();
        let c1 = cover_number(&f, true, &caps()).unwrap();
        assert_eq!(c1.count, independent_cover_number(&f, true));
        let nd = nondet_cc(&f, &caps()).unwrap();
        assert_eq!(nd.total_count, nd.zero.count + nd.one.count);
        assert!(nd.total_bits >= nd.zero.bits.max(nd.one.bits));
    }
}

//! Fooling sets for k-argument functions: mixtures, verification, exact
//! maximum search, the depth lower bound, the rank comparison, and the
//! randomized construction whose diagonal is always a large fooling set.

use num::bigint::BigUint;
use num::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolfn::BoolFunction;
use crate::caps::SearchCaps;
use crate::cover::ceil_log2;
use crate::error::{Error, Result};
use crate::field::{Field, Rat};
use crate::linalg::Mat;
use crate::partition::Bipartition;

/// Coordinatewise mixture: axis i reads from `x` when bit i of `a_mask`
/// is set, from `z` otherwise.
pub fn sigma_mix(x: &[usize], z: &[usize], a_mask: u32) -> Vec<usize> {
    x.iter()
        .zip(z)
        .enumerate()
        .map(|(i, (&xi, &zi))| if a_mask >> i & 1 == 1 { xi } else { zi })
        .collect()
}

/// The 2^k - 2 mixture masks for nonempty proper sides, ascending.
fn proper_masks(k: usize) -> impl Iterator<Item = u32> {
    let full = (1u32 << k) - 1;
    (1..full).map(move |m| m)
}

/// Is some mixture of the pair valued 1-b? Trivial mixtures reproduce the
/// pair itself, so they never witness this.
pub fn pair_is_fooled(f: &BoolFunction, x: &[usize], z: &[usize], b: bool) -> Result<bool> {
    if x.len() != f.arity() || z.len() != f.arity() {
        return Err(Error::shape("mixture arity mismatch"));
    }
    for mask in proper_masks(f.arity()) {
        if f.value(&sigma_mix(x, z, mask))? != b {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FoolingCheck {
    pub b: bool,
    pub size: usize,
    pub valid: bool,
    /// an element whose value is not b, if any
    pub wrong_value: Option<Vec<usize>>,
    /// first pair (in given order) with every mixture still valued b
    pub unfooled_pair: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn is_fooling_set(f: &BoolFunction, set: &[Vec<usize>], b: bool) -> Result<FoolingCheck> {
    for x in set {
        if f.value(x)? != b {
            return Ok(FoolingCheck {
                b,
                size: set.len(),
                valid: false,
                wrong_value: Some(x.clone()),
                unfooled_pair: None,
            });
        }
    }
    let mut distinct = std::collections::HashSet::new();
    for x in set {
        if !distinct.insert(x.clone()) {
            return Err(Error::precondition("fooling set has a repeated element"));
        }
    }
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            if !pair_is_fooled(f, &set[i], &set[j], b)? {
                return Ok(FoolingCheck {
                    b,
                    size: set.len(),
                    valid: false,
                    wrong_value: None,
                    unfooled_pair: Some((set[i].clone(), set[j].clone())),
                });
            }
        }
    }
    Ok(FoolingCheck {
        b,
        size: set.len(),
        valid: true,
        wrong_value: None,
        unfooled_pair: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MaxFooling {
    pub b: bool,
    pub size: usize,
    /// lexicographically least maximum set, elements ascending
    pub set: Vec<Vec<usize>>,
}

struct CliqueSearch {
    adj: Vec<Vec<u64>>,
}

impl CliqueSearch {
    fn candidates_from(&self, cand: &[u64], v: usize) -> Vec<u64> {
        cand.iter()
            .zip(&self.adj[v])
            .map(|(&c, &a)| c & a)
            .collect()
    }

    fn count(cand: &[u64]) -> usize {
        cand.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Largest clique inside `cand` on top of `depth` chosen vertices;
    /// returns the best total size found, pruning at `best`.
    fn max_size(&self, cand: Vec<u64>, depth: usize, best: &mut usize) {
        if depth + Self::count(&cand) <= *best {
            return;
        }
        if Self::count(&cand) == 0 {
            if depth > *best {
                *best = depth;
            }
            return;
        }
        let mut cand = cand;
        while let Some(v) = first_bit(&cand) {
            if depth + Self::count(&cand) <= *best {
                return;
            }
            cand[v / 64] &= !(1u64 << (v % 64));
            let next = self.candidates_from(&cand, v);
            self.max_size(next, depth + 1, best);
        }
    }

    /// Can a clique of `need` more vertices be found inside `cand`?
    fn reaches(&self, cand: Vec<u64>, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if Self::count(&cand) < need {
            return false;
        }
        let mut cand = cand;
        while let Some(v) = first_bit(&cand) {
            if Self::count(&cand) < need {
                return false;
            }
            cand[v / 64] &= !(1u64 << (v % 64));
            if self.reaches(self.candidates_from(&cand, v), need - 1) {
                return true;
            }
        }
        false
    }
}

fn first_bit(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// Exact maximum b-fooling set. Vertices are the b-valued inputs, edges
/// the fooled pairs; fooling sets are exactly the cliques. Two phases keep
/// the answer canonical: first the maximum size, then the lexicographically
/// least set of that size, grown greedily one vertex at a time.
pub fn max_fooling_set(f: &BoolFunction, b: bool, caps: &SearchCaps) -> Result<MaxFooling> {
    let mut vertices: Vec<Vec<usize>> = Vec::new();
    {
        let full = crate::boolfn::KBox::full(f.shape())?;
        full.for_each_cell(|idx| {
            if f.value(idx).unwrap() == b {
                vertices.push(idx.to_vec());
            }
        });
    }
    if vertices.len() > caps.clique_vertices {
        return Err(Error::cap(
            "fooling set search",
            format!("{} candidate inputs", vertices.len()),
            caps.clique_vertices.to_string(),
        ));
    }
    if vertices.is_empty() {
        return Ok(MaxFooling {
            b,
            size: 0,
            set: vec![],
        });
    }
    let n = vertices.len();
    let words = (n + 63) / 64;
    let mut adj = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i + 1..n {
            if pair_is_fooled(f, &vertices[i], &vertices[j], b)? {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let search = CliqueSearch { adj };
    let mut all = vec![u64::MAX; words];
    let extra = words * 64 - n;
    if extra > 0 {
        all[words - 1] = u64::MAX >> extra;
    }
    let mut best = 0usize;
    search.max_size(all.clone(), 0, &mut best);

    // lexicographic completion
    let mut chosen: Vec<usize> = Vec::new();
    let mut cand = all;
    while chosen.len() < best {
        let mut picked = None;
        for v in 0..n {
            if cand[v / 64] >> (v % 64) & 1 == 0 {
                continue;
            }
            let mut rest = cand.clone();
            rest[v / 64] &= !(1u64 << (v % 64));
            // v itself joins; the remainder must supply the rest
            let within = search.candidates_from(&rest, v);
            if search.reaches(within, best - chosen.len() - 1) {
                picked = Some(v);
                break;
            }
        }
        let v = picked.expect("a maximum clique exists");
        chosen.push(v);
        let mut rest = cand;
        rest[v / 64] &= !(1u64 << (v % 64));
        cand = search.candidates_from(&rest, v);
    }
    Ok(MaxFooling {
        b,
        size: best,
        set: chosen.into_iter().map(|v| vertices[v].clone()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FoolingDepthBound {
    pub b: bool,
    pub size: usize,
    /// ceil(log2 size): every protocol tree needs that depth
    pub depth_bound: u32,
    pub exact_depth: Option<u32>,
}

/// Checks the depth bound from a verified fooling set, optionally against
/// the exact cost when the search is affordable.
pub fn fooling_lower_bound_check(
    f: &BoolFunction,
    set: &[Vec<usize>],
    b: bool,
    caps: &SearchCaps,
) -> Result<FoolingDepthBound> {
    let check = is_fooling_set(f, set, b)?;
    if !check.valid {
        return Err(Error::precondition("not a fooling set"));
    }
    let depth_bound = ceil_log2(set.len() as u64);
    let exact = crate::protocol::det_cc_exact(f, caps).ok().map(|d| d.value);
    if let Some(d) = exact {
        if d < depth_bound {
            return Err(Error::invariant(format!(
                "exact depth {d} undercuts fooling bound {depth_bound}"
            )));
        }
    }
    Ok(FoolingDepthBound {
        b,
        size: set.len(),
        depth_bound,
        exact_depth: exact,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RankFoolingReport {
    pub b: bool,
    pub t: usize,
    pub pair_count: usize,
    /// rank of the mixture matrix per ordered partition, canonical order
    pub mixture_ranks: Vec<(String, usize)>,
    /// matching flattening rank of the b-indicator tensor
    pub flattening_ranks: Vec<(String, usize)>,
    pub hadamard_is_identity: bool,
    /// product of mixture ranks, always >= t for a fooling set
    #[serde(serialize_with = "crate::report::biguint_decimal")]
    pub rank_product: BigUint,
    pub max_flattening_rank: usize,
    /// smallest r with r^(2^k - 2) >= t
    pub rank_floor: usize,
}

/// The rank comparison, checked end to end on a concrete fooling set.
///
/// Works with the b-indicator [f = b] rather than f itself: for a 0-fooling
/// set the raw value matrices carry 0 on the diagonal, so their entrywise
/// product cannot be the identity (a constant-0 function with its whole
/// domain as 0-fooling set would make any bound on raw rank false). The
/// indicator restores the argument for both values of b at once.
pub fn rank_vs_fooling_check(
    f: &BoolFunction,
    set: &[Vec<usize>],
    b: bool,
) -> Result<RankFoolingReport> {
    let k = f.arity();
    if k < 2 {
        return Err(Error::shape("rank comparison needs at least 2 axes"));
    }
    let check = is_fooling_set(f, set, b)?;
    if !check.valid {
        return Err(Error::precondition("not a fooling set"));
    }
    if set.is_empty() {
        return Err(Error::precondition("rank comparison needs a nonempty set"));
    }
    let t = set.len();
    let indicator =
        BoolFunction::from_fn(f.shape().to_vec(), |idx| f.value(idx).unwrap() == b)?;
    let tensor = indicator.to_tensor::<Rat>();

    let mut mixture_ranks = Vec::new();
    let mut flattening_ranks = Vec::new();
    let mut hadamard = Mat::<Rat>::from_fn(t, t, |_, _| <Rat as Field>::one());
    let mut rank_product = BigUint::one();
    let mut pair_count = 0usize;
    let full = (1u32 << k) - 1;
    for a_mask in 1..full {
        pair_count += 1;
        let p = bipartition_of_mask(k, a_mask)?;
        let u = Mat::<Rat>::from_fn(t, t, |i, j| {
            let mixed = sigma_mix(&set[i], &set[j], a_mask);
            if indicator.value(&mixed).unwrap() {
                <Rat as Field>::one()
            } else {
                <Rat as Field>::zero()
            }
        });
        for i in 0..t {
            for j in 0..t {
                let prod = hadamard.at(i, j).mul(u.at(i, j));
                *hadamard.at_mut(i, j) = prod;
            }
        }
        let r = u.rank();
        let flat = tensor.flatten_bipartition(&p)?;
        // the mixture matrix reads entries of this flattening, so its rank
        // can only be smaller
        let fr = flat.matrix_rank()?;
        if r > fr {
            return Err(Error::invariant(format!(
                "mixture rank {r} exceeds flattening rank {fr} on {}",
                render_sides(k, a_mask)
            )));
        }
        mixture_ranks.push((render_sides(k, a_mask), r));
        flattening_ranks.push((render_sides(k, a_mask), fr));
        rank_product *= BigUint::from(r.max(1));
    }
    let identity = Mat::<Rat>::identity(t);
    let hadamard_is_identity = hadamard == identity;
    if !hadamard_is_identity {
        return Err(Error::invariant(
            "mixture matrices fail the identity product on a fooling set",
        ));
    }
    if rank_product < BigUint::from(t.max(1)) {
        return Err(Error::invariant(
            "rank product undercuts the fooling set size",
        ));
    }
    let max_flattening_rank = flattening_ranks.iter().map(|&(_, r)| r).max().unwrap_or(0);
    let mut rank_floor = 0usize;
    if t > 0 {
        rank_floor = 1;
        while BigUint::from(rank_floor).pow(pair_count as u32) < BigUint::from(t) {
            rank_floor += 1;
        }
    }
    Ok(RankFoolingReport {
        b,
        t,
        pair_count,
        mixture_ranks,
        flattening_ranks,
        hadamard_is_identity,
        rank_product,
        max_flattening_rank,
        rank_floor,
    })
}

/// Mixture masks are ordered sides, not bipartitions; for reporting we
/// render the side pair directly.
fn render_sides(k: usize, a_mask: u32) -> String {
    let side = |m: u32| {
        let axes: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).collect();
        crate::partition::render_axes(&axes)
    };
    format!("{}|{}", side(a_mask), side(!a_mask & ((1 << k) - 1)))
}

fn bipartition_of_mask(k: usize, a_mask: u32) -> Result<Bipartition> {
    let left: Vec<usize> = (0..k).filter(|&i| a_mask >> i & 1 == 1).collect();
    let right: Vec<usize> = (0..k).filter(|&i| a_mask >> i & 1 == 0).collect();
    if a_mask & 1 == 1 {
        Bipartition::new(k, &left, &right)
    } else {
        Bipartition::new(k, &right, &left)
    }
}

/// The random three-argument function whose diagonal fools every pair.
/// Inputs come in three types: all-equal cells are 1; for each unordered
/// pair of distinct values exactly one of the six two-equal cells is 0 and
/// the other five are 1; cells with three distinct values are fair coins.
/// Draw order is fixed: pairs ascending, then cells row-major.
pub fn sample_fooling_function(n: u32, seed: u64) -> Result<BoolFunction> {
    if n == 0 || n > 6 {
        return Err(Error::precondition("word length n must be in 1..=6"));
    }
    let m = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![true; m * m * m];
    let off = |x: usize, y: usize, z: usize| (x * m + y) * m + z;
    for v1 in 0..m {
        for v2 in v1 + 1..m {
            let six = [
                off(v1, v1, v2),
                off(v1, v2, v1),
                off(v2, v1, v1),
                off(v1, v2, v2),
                off(v2, v1, v2),
                off(v2, v2, v1),
            ];
            let pick = rng.gen_range(0..6usize);
            values[six[pick]] = false;
        }
    }
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if x != y && y != z && x != z {
                    values[off(x, y, z)] = rng.gen_bool(0.5);
                }
            }
        }
    }
    BoolFunction::new(vec![m, m, m], values)
}

/// Exact check of the union bound
/// 2^(3nt) * (35/36)^floor((t^2 - 2t)/12) < 1/6,
/// cleared of denominators: 6 * 2^(3nt) * 35^d < 36^d.
pub fn union_bound_holds(n: u64, t: u64) -> bool {
    if t < 2 {
        return false;
    }
    let exp_count = (3 * n * t) as usize;
    let exp_decay = ((t * t - 2 * t) / 12) as u32;
    let lhs = (num::BigInt::from(6u64) << exp_count) * num::BigInt::from(35u64).pow(exp_decay);
    let rhs = num::BigInt::from(36u64).pow(exp_decay);
    lhs < rhs
}

/// Least t making the union bound go through. The failure margin grows
/// in t before the quadratic decay takes over, so the predicate crosses
/// false to true exactly once and a binary search finds the crossing.
pub fn union_bound_threshold(n: u64, t_max: u64) -> Option<u64> {
    if !union_bound_holds(n, t_max) {
        return None;
    }
    let (mut lo, mut hi) = (2u64, t_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if union_bound_holds(n, mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> SearchCaps {
        SearchCaps::default()
    }

    fn all_equal3() -> BoolFunction {
        BoolFunction::from_fn(vec![2, 2, 2], |idx| idx[0] == idx[1] && idx[1] == idx[2])
            .unwrap()
    }

    #[test]
    fn mixture_masks() {
        let x = vec![1, 2, 3];
        let z = vec![4, 5, 6];
        assert_eq!(sigma_mix(&x, &z, 0b001), vec![1, 5, 6]);
        assert_eq!(sigma_mix(&x, &z, 0b110), vec![4, 2, 3]);
        assert_eq!(proper_masks(3).count(), 6);
    }

    #[test]
    fn diagonal_fools_all_equal() {
        let f = all_equal3();
        let set = vec![vec![0, 0, 0], vec![1, 1, 1]];
        let check = is_fooling_set(&f, &set, true).unwrap();
        assert!(check.valid);
        let max = max_fooling_set(&f, true, &caps()).unwrap();
        assert_eq!(max.size, 2);
        assert_eq!(max.set, set);
    }

    #[test]
    fn two_party_reduction_matches_classic_definition() {
        // EQ on [3]^2: the diagonal is the canonical 1-fooling set
        let f = BoolFunction::from_fn(vec![3, 3], |idx| idx[0] == idx[1]).unwrap();
        let max = max_fooling_set(&f, true, &caps()).unwrap();
        assert_eq!(max.size, 3);
        assert_eq!(max.set, vec![vec![0, 0], vec![1, 1], vec![2, 2]]);
        // greater-than on [3]^2 has only trivial 1-fooling sets of size 2
        let gt = BoolFunction::from_fn(vec![3, 3], |idx| idx[0] > idx[1]).unwrap();
        let mgt = max_fooling_set(&gt, true, &caps()).unwrap();
        assert_eq!(mgt.size, independent_max_fooling(&gt, true));
    }

    /// Brute oracle: scan all subsets of b-cells.
    fn independent_max_fooling(f: &BoolFunction, b: bool) -> usize {
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let full = crate::boolfn::KBox::full(f.shape()).unwrap();
        full.for_each_cell(|idx| {
            if f.value(idx).unwrap() == b {
                cells.push(idx.to_vec());
            }
        });
        assert!(cells.len() <= 16);
        let mut best = 0usize;
        for mask in 0u32..1 << cells.len() {
            let subset: Vec<Vec<usize>> = (0..cells.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| cells[i].clone())
                .collect();
            if subset.len() <= best {
                continue;
            }
            if is_fooling_set(f, &subset, b).unwrap().valid {
                best = subset.len();
            }
        }
        best
    }

    #[test]
    fn clique_search_matches_subset_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xf001);
        for _ in 0..25 {
            let cells = 8;
            let values: Vec<bool> = (0..cells).map(|_| rng.gen_bool(0.5)).collect();
            let f = BoolFunction::new(vec![2, 2, 2], values).unwrap();
            for b in [false, true] {
                let got = max_fooling_set(&f, b, &caps()).unwrap();
                let want = independent_max_fooling(&f, b);
                assert_eq!(got.size, want, "fooling mismatch on {:?}", f.values());
                if got.size > 0 {
                    assert!(is_fooling_set(&f, &got.set, b).unwrap().valid);
                }
            }
        }
    }

    #[test]
    fn fooling_pairs_never_share_a_monochromatic_box() {
        let f = all_equal3();
        let max = max_fooling_set(&f, true, &caps()).unwrap();
        let boxes = crate::cover::maximal_mono_boxes(&f, true, &caps()).unwrap();
        for i in 0..max.set.len() {
            for j in i + 1..max.set.len() {
                for bx in &boxes {
                    assert!(!(bx.contains(&max.set[i]) && bx.contains(&max.set[j])));
                }
            }
        }
    }

    #[test]
    fn depth_bound_from_fooling_set() {
        let f = all_equal3();
        let max = max_fooling_set(&f, true, &caps()).unwrap();
        let rep = fooling_lower_bound_check(&f, &max.set, true, &caps()).unwrap();
        assert_eq!(rep.depth_bound, 1);
        assert_eq!(rep.exact_depth, Some(3));
    }

    #[test]
    fn rank_check_on_all_equal() {
        let f = all_equal3();
        let set = vec![vec![0, 0, 0], vec![1, 1, 1]];
        let rep = rank_vs_fooling_check(&f, &set, true).unwrap();
        assert_eq!(rep.pair_count, 6);
        assert!(rep.hadamard_is_identity);
        assert!(rep.rank_product >= BigUint::from(2u64));
        assert_eq!(rep.rank_floor, 2);
        assert!(rep.max_flattening_rank >= 2);
    }

    #[test]
    fn rank_check_survives_constant_zero() {
        // whole domain is a 0-fooling set candidate only when pairs are
        // fooled; for constant 0 nothing is fooled, so singletons are the
        // only 0-fooling sets, and the indicator keeps the argument sound
        let f = BoolFunction::from_fn(vec![2, 2], |_| false).unwrap();
        let rep = rank_vs_fooling_check(&f, &[vec![0, 0]], false).unwrap();
        assert!(rep.hadamard_is_identity);
        assert_eq!(rep.t, 1);
        let big = is_fooling_set(&f, &[vec![0, 0], vec![1, 1]], false).unwrap();
        assert!(!big.valid);
    }

    #[test]
    fn zero_fooling_set_uses_complement_indicator() {
        // NEQ on [2]^2: the 0-cells (0,0),(1,1) are a 0-fooling set
        let f = BoolFunction::from_fn(vec![2, 2], |idx| idx[0] != idx[1]).unwrap();
        let set = vec![vec![0, 0], vec![1, 1]];
        assert!(is_fooling_set(&f, &set, false).unwrap().valid);
        let rep = rank_vs_fooling_check(&f, &set, false).unwrap();
        assert!(rep.hadamard_is_identity);
        assert!(rep.rank_product >= BigUint::from(2u64));
    }

    #[test]
    fn sampled_function_type_counts() {
        let f = sample_fooling_function(2, 7).unwrap();
        assert_eq!(f.shape(), &[4, 4, 4]);
        // type (a): all four diagonal cells are 1
        for v in 0..4 {
            assert!(f.value(&[v, v, v]).unwrap());
        }
        // type (b): each unordered pair contributes exactly one 0 among six
        for v1 in 0..4 {
            for v2 in v1 + 1..4 {
                let six = [
                    [v1, v1, v2],
                    [v1, v2, v1],
                    [v2, v1, v1],
                    [v1, v2, v2],
                    [v2, v1, v2],
                    [v2, v2, v1],
                ];
                let zeros = six
                    .iter()
                    .filter(|idx| !f.value(&idx[..]).unwrap())
                    .count();
                assert_eq!(zeros, 1);
            }
        }
        // diagonal always fools
        let diag: Vec<Vec<usize>> = (0..4).map(|v| vec![v, v, v]).collect();
        assert!(is_fooling_set(&f, &diag, true).unwrap().valid);
        // determinism
        let g = sample_fooling_function(2, 7).unwrap();
        assert_eq!(f, g);
        let h = sample_fooling_function(2, 8).unwrap();
        assert_ne!(f, h);
    }

    #[test]
    fn diagonal_fools_for_every_seed() {
        for seed in 0..20u64 {
            let f = sample_fooling_function(1, seed).unwrap();
            let diag: Vec<Vec<usize>> = (0..2).map(|v| vec![v, v, v]).collect();
            assert!(is_fooling_set(&f, &diag, true).unwrap().valid);
        }
    }

    #[test]
    fn union_bound_scan() {
        assert!(!union_bound_holds(1, 2));
        let t = union_bound_threshold(1, 2048).expect("threshold exists");
        assert!(union_bound_holds(1, t));
        assert!(!union_bound_holds(1, t - 1));
        // decay is quadratic in the exponent, growth linear: once the
        // bound holds it keeps holding
        assert!(union_bound_holds(1, t + 1));
        assert!(union_bound_holds(1, 2 * t));
        assert!(union_bound_threshold(1, 16).is_none());
    }
}

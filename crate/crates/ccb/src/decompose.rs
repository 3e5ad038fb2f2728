//! Constructive rank-bound certificates and the subset recursion that
//! predicts certificate sizes from flattening ranks.
//!
//! Every routine here returns an explicit pure-term decomposition together
//! with the bound it is required to respect; `BoundCertificate::checked`
//! re-evaluates the decomposition against the input tensor, so an emitted
//! certificate is always sound.

use std::collections::HashMap;

use num::BigUint;
use num::One;

use crate::error::{Error, Result};
use crate::field::{Field, Gf2};
use crate::linalg::{column_space_basis, eliminate, invert, solve_must, Mat};
use crate::partition::{Bipartition, SeparatingCollection};
use crate::tensor::{eval_decomposition, Decomposition, KTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cube3,
    Simple,
    Separating,
}

/// A decomposition plus the size bound it certifies. Constructing one
/// checks both `terms <= bound` and exact reconstruction of the target.
#[derive(Debug, Clone)]
pub struct BoundCertificate<F: Field> {
    pub method: Method,
    pub bound: BigUint,
    pub decomposition: Decomposition<F>,
}

impl<F: Field> BoundCertificate<F> {
    pub fn checked(
        method: Method,
        bound: BigUint,
        decomposition: Decomposition<F>,
        target: &KTensor<F>,
    ) -> Result<Self> {
        if BigUint::from(decomposition.len()) > bound {
            return Err(Error::invariant(format!(
                "certificate has {} terms, bound is {bound}",
                decomposition.len()
            )));
        }
        let eval = eval_decomposition(&decomposition)?;
        if &eval != target {
            return Err(Error::invariant("certificate does not reconstruct its tensor"));
        }
        Ok(BoundCertificate {
            method,
            bound,
            decomposition,
        })
    }

    pub fn terms(&self) -> usize {
        self.decomposition.len()
    }
}

/// The three 2-flattenings of an arity-3 tensor: rows are the singled-out
/// axis, columns the remaining pair (ascending, last fastest).
pub fn induced_matrices_3<F: Field>(t: &KTensor<F>) -> Result<(KTensor<F>, KTensor<F>, KTensor<F>)> {
    if t.arity() != 3 {
        return Err(Error::shape(format!("expected arity 3, got {}", t.arity())));
    }
    let m1 = t.flatten(&[vec![0], vec![1, 2]])?;
    let m2 = t.flatten(&[vec![1], vec![0, 2]])?;
    let m3 = t.flatten(&[vec![2], vec![0, 1]])?;
    Ok((m1, m2, m3))
}

/// Decomposition of an arity-3 tensor with at most r1*r2 terms, where r1 and
/// r2 are the ranks of the first two induced matrices. Each slice along the
/// third axis is expressed as V Q_z U for fixed column-space bases V (first
/// axis) and U (second axis); the z-profiles of Q fill the third factors.
pub fn cube_decompose_3<F: Field>(t: &KTensor<F>) -> Result<BoundCertificate<F>> {
    let (m1t, m2t, _) = induced_matrices_3(t)?;
    let shape = t.shape().to_vec();
    let (sx, sy, sz) = (shape[0], shape[1], shape[2]);

    let (vbasis, _) = column_space_basis(&m1t.as_matrix()?);
    let (ubasis, _) = column_space_basis(&m2t.as_matrix()?);
    let r1 = vbasis.len();
    let r2 = ubasis.len();
    let bound = BigUint::from(r1) * BigUint::from(r2);

    if r1 == 0 || r2 == 0 {
        let d = Decomposition::new(shape, vec![])?;
        return BoundCertificate::checked(Method::Cube3, bound, d, t);
    }

    let vmat = Mat::from_fn(sx, r1, |r, c| vbasis[c][r].clone());
    let umat = Mat::from_fn(r2, sy, |r, c| ubasis[r][c].clone());
    let umat_t = umat.transpose();

    // w[i][j][z] = Q_z[i, j]
    let mut w = vec![vec![vec![F::zero(); sz]; r2]; r1];
    for z in 0..sz {
        let a_z = Mat::from_fn(sx, sy, |x, y| t.value(&[x, y, z]).clone());
        // Columns of A_z lie in span(V), rows in span(U); both solves are
        // consistent by construction of the bases.
        let x_z = solve_must(&vmat, &a_z, "slice not in first column space")?;
        let q_t = solve_must(&umat_t, &x_z.transpose(), "slice not in second row space")?;
        for i in 0..r1 {
            for j in 0..r2 {
                w[i][j][z] = q_t.at(j, i).clone();
            }
        }
    }

    let mut terms = Vec::new();
    for i in 0..r1 {
        for j in 0..r2 {
            if w[i][j].iter().all(|x| x.is_zero()) {
                continue;
            }
            terms.push(vec![vbasis[i].clone(), ubasis[j].clone(), w[i][j].clone()]);
        }
    }
    let d = Decomposition::new(shape, terms)?;
    BoundCertificate::checked(Method::Cube3, bound, d, t)
}

/// Decomposition with at most d_1 * .. * d_{k-1} terms (flattening ranks of
/// the first k-1 axes): pure products of column-space basis vectors of the
/// first k-1 single-axis flattenings, with solved last-axis factors.
pub fn decompose_simple<F: Field>(t: &KTensor<F>) -> Result<BoundCertificate<F>> {
    let k = t.arity();
    if k < 2 {
        return Err(Error::shape(format!("expected arity >= 2, got {k}")));
    }
    let shape = t.shape().to_vec();
    let last = k - 1;

    let mut bases: Vec<Vec<Vec<F>>> = Vec::with_capacity(last);
    for i in 0..last {
        let rest: Vec<usize> = (0..k).filter(|&a| a != i).collect();
        let m = t.flatten(&[vec![i], rest])?.as_matrix()?;
        let (b, _) = column_space_basis(&m);
        bases.push(b);
    }
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let bound: BigUint = dims.iter().map(|&d| BigUint::from(d)).product();

    if dims.iter().any(|&d| d == 0) {
        let d = Decomposition::new(shape, vec![])?;
        return BoundCertificate::checked(Method::Simple, bound, d, t);
    }

    let p: usize = shape[..last].iter().product();
    let combos: usize = dims.iter().product();

    // G's columns are the flattened pure products of basis vectors; T lies
    // in their span tensored with the last axis, so G C = RHS is solvable.
    let mut combo_idx = vec![0usize; last];
    let mut g = Mat::zeros(p, combos);
    for l in 0..combos {
        unrank(l, &dims, &mut combo_idx);
        let mut row_idx = vec![0usize; last];
        for row in 0..p {
            unrank(row, &shape[..last], &mut row_idx);
            let mut prod = F::one();
            for (i, &a) in combo_idx.iter().enumerate() {
                prod = prod.mul(&bases[i][a][row_idx[i]]);
                if prod.is_zero() {
                    break;
                }
            }
            *g.at_mut(row, l) = prod;
        }
    }
    let flat = t.flatten(&[(0..last).collect(), vec![last]])?;
    let rhs = flat.as_matrix()?;
    let coef = solve_must(&g, &rhs, "tensor not in span of basis products")?;

    let mut terms = Vec::new();
    for l in 0..combos {
        let u: Vec<F> = (0..shape[last]).map(|j| coef.at(l, j).clone()).collect();
        if u.iter().all(|x| x.is_zero()) {
            continue;
        }
        unrank(l, &dims, &mut combo_idx);
        let mut term: Vec<Vec<F>> = (0..last)
            .map(|i| bases[i][combo_idx[i]].clone())
            .collect();
        term.push(u);
        terms.push(term);
    }
    let d = Decomposition::new(shape, terms)?;
    BoundCertificate::checked(Method::Simple, bound, d, t)
}

fn unrank(mut l: usize, dims: &[usize], out: &mut [usize]) {
    for i in (0..dims.len()).rev() {
        out[i] = l % dims[i];
        l /= dims[i];
    }
}

/// How the recursion picks among applicable collection members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartitionStrategy {
    /// First member in canonical order. The default.
    #[default]
    CanonicalFirst,
    /// Member whose flattening rank on the current tensor is smallest;
    /// canonical order breaks ties.
    MinFlatteningRank,
}

/// Recursive decomposition with at most d_max^(2(k-1)) terms for any
/// separating collection, d_max the largest flattening rank of the input
/// along the collection. Each level picks a member {I,J}, takes the slices
/// of the tensor at an invertible minor of the {I,J} flattening (standard
/// dual basis selection via row/column pivoting), and recurses on both
/// sides with the induced collections.
pub fn decompose_separating<F: Field>(
    t: &KTensor<F>,
    c: &SeparatingCollection,
) -> Result<BoundCertificate<F>> {
    decompose_separating_with(t, c, PartitionStrategy::CanonicalFirst)
}

pub fn decompose_separating_with<F: Field>(
    t: &KTensor<F>,
    c: &SeparatingCollection,
    strategy: PartitionStrategy,
) -> Result<BoundCertificate<F>> {
    let k = t.arity();
    if k == 0 {
        return Err(Error::shape("expected arity >= 1"));
    }
    if c.k() != k {
        return Err(Error::partition(format!(
            "collection on [{}] applied to arity-{k} tensor",
            c.k()
        )));
    }
    let mut d_max = 0usize;
    for p in c.members() {
        d_max = d_max.max(t.flattening_rank(p)?);
    }
    let bound = if k == 1 {
        BigUint::one()
    } else {
        BigUint::from(d_max).pow(2 * (k as u32 - 1))
    };
    let members: Vec<(Vec<usize>, Vec<usize>)> = c
        .members()
        .iter()
        .map(|p| (p.left().to_vec(), p.right().to_vec()))
        .collect();
    let axes: Vec<usize> = (0..k).collect();
    let terms = separate_rec(t, &axes, &members, strategy)?;
    let d = Decomposition::new(t.shape().to_vec(), terms)?;
    BoundCertificate::checked(Method::Separating, bound, d, t)
}

/// One level of the recursion. `axes` are the original labels of the
/// tensor's axes, ascending; `members` are partitions over original labels.
fn separate_rec<F: Field>(
    t: &KTensor<F>,
    axes: &[usize],
    members: &[(Vec<usize>, Vec<usize>)],
    strategy: PartitionStrategy,
) -> Result<Vec<Vec<Vec<F>>>> {
    if axes.len() == 1 {
        if t.is_zero() {
            return Ok(vec![]);
        }
        return Ok(vec![vec![t.values().to_vec()]]);
    }

    // Induced members: intersect both sides with the current axes, keep
    // those that still split them, canonicalize and deduplicate.
    let mut induced: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (i, j) in members {
        let mut a: Vec<usize> = i.iter().copied().filter(|x| axes.contains(x)).collect();
        let mut b: Vec<usize> = j.iter().copied().filter(|x| axes.contains(x)).collect();
        if a.is_empty() || b.is_empty() {
            continue;
        }
        if b[0] < a[0] {
            std::mem::swap(&mut a, &mut b);
        }
        if !induced.contains(&(a.clone(), b.clone())) {
            induced.push((a, b));
        }
    }
    induced.sort();
    if induced.is_empty() {
        return Err(Error::invariant("separating collection induced nothing on a subset"));
    }

    // Local positions of the chosen member's sides within this tensor.
    let local = |set: &[usize]| -> Vec<usize> {
        set.iter()
            .map(|x| axes.iter().position(|a| a == x).expect("axis present"))
            .collect()
    };

    let pick = match strategy {
        PartitionStrategy::CanonicalFirst => 0,
        PartitionStrategy::MinFlatteningRank => {
            let mut best = 0;
            let mut best_rank = usize::MAX;
            for (idx, (i, j)) in induced.iter().enumerate() {
                let m = t.flatten(&[local(i), local(j)])?;
                let r = m.matrix_rank()?;
                if r < best_rank {
                    best_rank = r;
                    best = idx;
                }
            }
            best
        }
    };
    let (iside, jside) = induced[pick].clone();
    let (ipos, jpos) = (local(&iside), local(&jside));
    let ishape: Vec<usize> = ipos.iter().map(|&p| t.shape()[p]).collect();
    let jshape: Vec<usize> = jpos.iter().map(|&p| t.shape()[p]).collect();

    let m = t.flatten(&[ipos.clone(), jpos.clone()])?.as_matrix()?;
    let piv = eliminate(&m);
    let d = piv.rank();
    if d == 0 {
        return Ok(vec![]);
    }

    // Skeleton selection: with W the invertible minor at the pivot
    // positions, T = sum_q T_q (x) S'_q where T_q is the I-side slice at
    // pivot column q and S'_q = sum_r inv(W)[q,r] * (J-side slice at pivot
    // row r). The S'_q are dual to the standard basis vectors at the pivot
    // columns.
    let wmat = Mat::from_fn(d, d, |r, s| m.at(piv.pivot_rows[r], piv.pivot_cols[s]).clone());
    let winv = invert(&wmat).ok_or_else(|| Error::invariant("pivot minor not invertible"))?;

    let mut all_terms: Vec<Vec<Vec<F>>> = Vec::new();
    let mut j_parts: Vec<Vec<Vec<Vec<F>>>> = Vec::with_capacity(d);
    for r in 0..d {
        let row = m.row(piv.pivot_rows[r]).to_vec();
        let tj = KTensor::new(jshape.clone(), row)?;
        j_parts.push(separate_rec(&tj, &jside, members, strategy)?);
    }
    for q in 0..d {
        let col = m.col(piv.pivot_cols[q]);
        let tq = KTensor::new(ishape.clone(), col)?;
        let i_terms = separate_rec(&tq, &iside, members, strategy)?;
        if i_terms.is_empty() {
            continue;
        }
        // Terms of S'_q: every term of every T'_r, scaled by inv(W)[q,r].
        let mut s_terms: Vec<Vec<Vec<F>>> = Vec::new();
        for r in 0..d {
            let alpha = winv.at(q, r);
            if alpha.is_zero() {
                continue;
            }
            for term in &j_parts[r] {
                let mut scaled = term.clone();
                scaled[0] = scaled[0].iter().map(|x| x.mul(alpha)).collect();
                s_terms.push(scaled);
            }
        }
        for a in &i_terms {
            for b in &s_terms {
                let mut merged: Vec<Vec<F>> = Vec::with_capacity(axes.len());
                for ax in axes {
                    if let Some(p) = iside.iter().position(|x| x == ax) {
                        merged.push(a[p].clone());
                    } else {
                        let p = jside.iter().position(|x| x == ax).expect("axis on J side");
                        merged.push(b[p].clone());
                    }
                }
                all_terms.push(merged);
            }
        }
    }
    Ok(all_terms)
}

/// Per-member size bounds feeding the subset recursion.
#[derive(Debug, Clone)]
pub struct FlatteningRankProfile {
    collection: SeparatingCollection,
    bounds: Vec<BigUint>,
}

impl FlatteningRankProfile {
    pub fn new(collection: SeparatingCollection, bounds: Vec<BigUint>) -> Result<Self> {
        if bounds.len() != collection.members().len() {
            return Err(Error::precondition("one bound per collection member"));
        }
        if bounds.iter().any(|b| b == &BigUint::from(0u32)) {
            return Err(Error::precondition("bounds must be at least 1"));
        }
        Ok(FlatteningRankProfile { collection, bounds })
    }

    /// Profile whose bounds are the actual flattening ranks of `t`.
    pub fn of_tensor<F: Field>(t: &KTensor<F>, collection: SeparatingCollection) -> Result<Self> {
        let mut bounds = Vec::new();
        for p in collection.members() {
            let r = t.flattening_rank(p)?;
            if r == 0 {
                return Err(Error::precondition(format!(
                    "flattening rank along {p} is 0; bounds must be at least 1"
                )));
            }
            bounds.push(BigUint::from(r));
        }
        FlatteningRankProfile::new(collection, bounds)
    }

    pub fn collection(&self) -> &SeparatingCollection {
        &self.collection
    }
    pub fn bounds(&self) -> &[BigUint] {
        &self.bounds
    }
}

/// Trace of the recursion: which member and which branch realized each
/// subset's minimum. Axes serialize 1-based like everything user-facing.
#[derive(Debug, Clone)]
pub enum NTrace {
    Leaf {
        axis: usize,
    },
    Node {
        member: Bipartition,
        refined: bool,
        value: String,
        left: Box<NTrace>,
        right: Box<NTrace>,
    },
}

impl serde::Serialize for NTrace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            NTrace::Leaf { axis } => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("axis", &(axis + 1))?;
                m.end()
            }
            NTrace::Node {
                member,
                refined,
                value,
                left,
                right,
            } => {
                let mut m = s.serialize_map(Some(5))?;
                m.serialize_entry("member", member)?;
                m.serialize_entry("refined", refined)?;
                m.serialize_entry("value", value)?;
                m.serialize_entry("left", left)?;
                m.serialize_entry("right", right)?;
                m.end()
            }
        }
    }
}

/// Best certificate size predicted by the two-branch recursion:
///   N(H) = 1 for singletons, else the minimum over applicable members of
///   d^2 N(H&I) N(H&J), improved to d N(H&I) N(H&J) when one intersection
///   is a singleton. Ties go to the refined branch of the canonically
///   smallest member.
pub fn n_recursion(profile: &FlatteningRankProfile) -> (BigUint, NTrace) {
    let k = profile.collection().k();
    let full: u32 = (1 << k) - 1;
    let mut memo: HashMap<u32, (BigUint, NTrace)> = HashMap::new();
    let value = n_rec(profile, full, &mut memo);
    (value.0.clone(), value.1.clone())
}

fn n_rec(profile: &FlatteningRankProfile, h: u32, memo: &mut HashMap<u32, (BigUint, NTrace)>) -> (BigUint, NTrace) {
    if let Some(hit) = memo.get(&h) {
        return hit.clone();
    }
    if h.count_ones() == 1 {
        let axis = h.trailing_zeros() as usize;
        let out = (BigUint::one(), NTrace::Leaf { axis });
        memo.insert(h, out.clone());
        return out;
    }
    let mut best: Option<(BigUint, NTrace)> = None;
    for (idx, member) in profile.collection().members().iter().enumerate() {
        let hi = h & member.left_mask();
        let hj = h & member.right_mask();
        if hi == 0 || hj == 0 {
            continue;
        }
        let d = &profile.bounds()[idx];
        let (vl, tl) = n_rec(profile, hi, memo);
        let (vr, tr) = n_rec(profile, hj, memo);
        let base = &vl * &vr;
        let mut candidates: Vec<(BigUint, bool)> = Vec::new();
        if hi.count_ones() == 1 || hj.count_ones() == 1 {
            candidates.push((d * &base, true));
        }
        candidates.push((d * d * &base, false));
        for (value, refined) in candidates {
            let better = match &best {
                None => true,
                Some((bv, _)) => value < *bv,
            };
            if better {
                best = Some((
                    value.clone(),
                    NTrace::Node {
                        member: member.clone(),
                        refined,
                        value: value.to_string(),
                        left: Box::new(tl.clone()),
                        right: Box::new(tr.clone()),
                    },
                ));
            }
        }
    }
    let out = best.expect("separating collection applies to every subset");
    memo.insert(h, out.clone());
    out
}

/// Largest 2-flattening rank, with the partition realizing it. When no
/// collection is given, all bipartitions of the axes are scanned.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FlatteningLowerBound {
    pub value: usize,
    pub witness: Bipartition,
}

pub fn rank_lower_bound_flattenings<F: Field>(
    t: &KTensor<F>,
    members: Option<&[Bipartition]>,
) -> Result<FlatteningLowerBound> {
    let k = t.arity();
    if k < 2 {
        return Err(Error::shape("flattening lower bound expects arity >= 2"));
    }
    let all;
    let members = match members {
        Some(m) => m,
        None => {
            if k > 16 {
                return Err(Error::precondition("full bipartition scan limited to arity <= 16"));
            }
            all = crate::partition::all_bipartitions(k);
            &all
        }
    };
    if members.is_empty() {
        return Err(Error::precondition("no partitions to scan"));
    }
    let mut best: Option<FlatteningLowerBound> = None;
    for p in members {
        let r = t.flattening_rank(p)?;
        if best.as_ref().map_or(true, |b| r > b.value) {
            best = Some(FlatteningLowerBound {
                value: r,
                witness: p.clone(),
            });
        }
    }
    Ok(best.expect("at least one member"))
}

/// Exact tensor rank over GF(2) by iterative-deepening search, for tensors
/// with at most 512 cells. Returns None when the rank exceeds `limit`.
/// The search strips one pure tensor covering the first nonzero cell per
/// level and prunes with single-axis flattening ranks.
pub fn tiny_tensor_rank_exact(t: &KTensor<Gf2>, limit: usize) -> Result<Option<usize>> {
    const CELL_CAP: usize = 512;
    if t.cells() > CELL_CAP {
        return Err(Error::cap("tiny rank search cells", t.cells(), CELL_CAP));
    }
    if t.arity() == 0 {
        return Ok(Some(if t.scalar().is_zero() { 0 } else { 1 }));
    }
    let shape = t.shape().to_vec();
    let packed = pack_bits(t.values());
    if is_zero_bits(&packed) {
        return Ok(Some(0));
    }
    let lower = if t.arity() == 1 {
        1
    } else {
        rank_lower_bound_flattenings(t, None)?.value
    };
    let mut fail_memo: HashMap<Vec<u64>, usize> = HashMap::new();
    for budget in lower..=limit {
        if search_gf2(&shape, &packed, budget, &mut fail_memo) {
            return Ok(Some(budget));
        }
    }
    Ok(None)
}

fn pack_bits(values: &[Gf2]) -> Vec<u64> {
    let mut out = vec![0u64; values.len().div_ceil(64).max(1)];
    for (i, v) in values.iter().enumerate() {
        if v.0 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn is_zero_bits(bits: &[u64]) -> bool {
    bits.iter().all(|&w| w == 0)
}

fn unpack_tensor(shape: &[usize], bits: &[u64]) -> KTensor<Gf2> {
    let cells: usize = shape.iter().product();
    let values: Vec<Gf2> = (0..cells).map(|i| Gf2(bits[i / 64] >> (i % 64) & 1 == 1)).collect();
    KTensor::new(shape.to_vec(), values).expect("shape matches")
}

fn search_gf2(
    shape: &[usize],
    residual: &[u64],
    budget: usize,
    fail_memo: &mut HashMap<Vec<u64>, usize>,
) -> bool {
    if is_zero_bits(residual) {
        return true;
    }
    if budget == 0 {
        return false;
    }
    if let Some(&failed) = fail_memo.get(residual) {
        if budget <= failed {
            return false;
        }
    }
    // Single-axis flattening ranks lower-bound the remaining rank.
    if shape.len() >= 2 {
        let t = unpack_tensor(shape, residual);
        for i in 0..shape.len() {
            let rest: Vec<usize> = (0..shape.len()).filter(|&a| a != i).collect();
            let r = t
                .flatten(&[vec![i], rest])
                .and_then(|m| m.matrix_rank())
                .expect("axis split is a valid grouping");
            if r > budget {
                fail_memo.insert(residual.to_vec(), budget);
                return false;
            }
        }
    }

    let cell = first_set_bit(residual);
    let mut idx = vec![0usize; shape.len()];
    let mut rem = cell;
    for i in (0..shape.len()).rev() {
        idx[i] = rem % shape[i];
        rem /= shape[i];
    }
    // Enumerate pure tensors with a 1 at `cell`: per axis, any subset mask
    // containing idx[i].
    let mut masks: Vec<u64> = shape.iter().map(|_| 0).collect();
    let done = loop_pure_tensors(shape, &idx, &mut masks, 0, residual, budget, fail_memo);
    if !done {
        fail_memo.insert(residual.to_vec(), budget);
    }
    done
}

fn first_set_bit(bits: &[u64]) -> usize {
    for (w, &word) in bits.iter().enumerate() {
        if word != 0 {
            return w * 64 + word.trailing_zeros() as usize;
        }
    }
    unreachable!("caller checked nonzero")
}

fn loop_pure_tensors(
    shape: &[usize],
    anchor: &[usize],
    masks: &mut Vec<u64>,
    axis: usize,
    residual: &[u64],
    budget: usize,
    fail_memo: &mut HashMap<Vec<u64>, usize>,
) -> bool {
    if axis == shape.len() {
        let mut next = residual.to_vec();
        xor_pure(shape, masks, &mut next);
        return search_gf2(shape, &next, budget - 1, fail_memo);
    }
    let m = shape[axis];
    let must = 1u64 << anchor[axis];
    let free: Vec<usize> = (0..m).filter(|&v| v != anchor[axis]).collect();
    for sub in 0..(1u64 << free.len()) {
        let mut mask = must;
        for (b, &v) in free.iter().enumerate() {
            if sub >> b & 1 == 1 {
                mask |= 1 << v;
            }
        }
        masks[axis] = mask;
        if loop_pure_tensors(shape, anchor, masks, axis + 1, residual, budget, fail_memo) {
            return true;
        }
    }
    false
}

fn xor_pure(shape: &[usize], masks: &[u64], bits: &mut [u64]) {
    let cells: usize = shape.iter().product();
    let mut idx = vec![0usize; shape.len()];
    for flat in 0..cells {
        let mut rem = flat;
        for i in (0..shape.len()).rev() {
            idx[i] = rem % shape[i];
            rem /= shape[i];
        }
        if idx.iter().enumerate().all(|(i, &v)| masks[i] >> v & 1 == 1) {
            bits[flat / 64] ^= 1 << (flat % 64);
        }
    }
}

/// T[x,y,z] = 1 iff y = z; its first induced matrix has rank 1 and the
/// other two have rank m.
pub fn footnote_tensor<F: Field>(m: usize) -> KTensor<F> {
    KTensor::from_fn(vec![m, m, m], |idx| F::from_bit(idx[1] == idx[2])).expect("valid shape")
}

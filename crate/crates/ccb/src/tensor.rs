//! Dense k-tensors over an exact field, stored row-major (last axis
//! fastest), plus the operations everything else is built from: grouped
//! flattening, pairing against pure dual tensors, Kronecker and Hadamard
//! products, and evaluation of pure-term decompositions.
//!
//! Flattening uses one fixed index bijection throughout the crate: within
//! each group the original axes are ordered ascending and the last one runs
//! fastest, which is exactly the row-major rule applied to the grouped axes.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::partition::Bipartition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTensor<F: Field> {
    shape: Vec<usize>,
    values: Vec<F>,
}

impl<F: Field> KTensor<F> {
    pub fn new(shape: Vec<usize>, values: Vec<F>) -> Result<Self> {
        let cells = checked_cells(&shape)?;
        if values.len() != cells {
            return Err(Error::shape(format!(
                "shape {shape:?} holds {cells} entries, got {}",
                values.len()
            )));
        }
        Ok(KTensor { shape, values })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let cells = checked_cells(&shape)?;
        Ok(KTensor {
            shape,
            values: vec![F::zero(); cells],
        })
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> F) -> Result<Self> {
        let mut t = Self::zeros(shape)?;
        let mut idx = vec![0usize; t.arity()];
        for flat in 0..t.values.len() {
            t.unoffset_into(flat, &mut idx);
            t.values[flat] = f(&idx);
        }
        Ok(t)
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn values(&self) -> &[F] {
        &self.values
    }
    pub fn cells(&self) -> usize {
        self.values.len()
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut flat = 0;
        for (i, &m) in self.shape.iter().enumerate() {
            debug_assert!(idx[i] < m, "index out of range");
            flat = flat * m + idx[i];
        }
        flat
    }

    pub fn unoffset_into(&self, mut flat: usize, idx: &mut [usize]) {
        for i in (0..self.shape.len()).rev() {
            idx[i] = flat % self.shape[i];
            flat /= self.shape[i];
        }
    }

    pub fn value(&self, idx: &[usize]) -> &F {
        &self.values[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: F) {
        let o = self.offset(idx);
        self.values[o] = v;
    }

    /// The single entry of an arity-0 tensor.
    pub fn scalar(&self) -> &F {
        assert!(self.shape.is_empty(), "scalar() needs an arity-0 tensor");
        &self.values[0]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape != rhs.shape {
            return Err(Error::shape("sum needs identical shapes"));
        }
        let values = self.values.iter().zip(&rhs.values).map(|(a, b)| a.add(b)).collect();
        Ok(KTensor {
            shape: self.shape.clone(),
            values,
        })
    }

    pub fn scale(&self, s: &F) -> Self {
        KTensor {
            shape: self.shape.clone(),
            values: self.values.iter().map(|x| x.mul(s)).collect(),
        }
    }

    /// Grouped flattening. `groups` is an ordered partition of the axes
    /// (0-based); the result has one axis per group. Group order is the
    /// caller's; axis order within a group is always ascending.
    pub fn flatten(&self, groups: &[Vec<usize>]) -> Result<KTensor<F>> {
        let k = self.arity();
        let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
        let mut seen = vec![false; k];
        for g in groups {
            if g.is_empty() {
                return Err(Error::partition("empty group in flattening"));
            }
            let mut g = g.clone();
            g.sort_unstable();
            g.dedup();
            for &a in &g {
                if a >= k {
                    return Err(Error::partition(format!(
                        "axis {} out of range for arity {k}",
                        a + 1
                    )));
                }
                if seen[a] {
                    return Err(Error::partition(format!("axis {} grouped twice", a + 1)));
                }
                seen[a] = true;
            }
            sorted.push(g);
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::partition("groups must cover every axis"));
        }

        let new_shape: Vec<usize> = sorted
            .iter()
            .map(|g| g.iter().map(|&a| self.shape[a]).product())
            .collect();
        let mut out = KTensor::zeros(new_shape)?;
        let mut idx = vec![0usize; k];
        let mut grouped = vec![0usize; sorted.len()];
        for flat in 0..self.values.len() {
            self.unoffset_into(flat, &mut idx);
            for (l, g) in sorted.iter().enumerate() {
                let mut combined = 0;
                for &a in g {
                    combined = combined * self.shape[a] + idx[a];
                }
                grouped[l] = combined;
            }
            let o = out.offset(&grouped);
            out.values[o] = self.values[flat].clone();
        }
        Ok(out)
    }

    /// 2-flattening along a bipartition of the axes.
    pub fn flatten_bipartition(&self, p: &Bipartition) -> Result<KTensor<F>> {
        if p.k() != self.arity() {
            return Err(Error::partition(format!(
                "partition of [{}] applied to arity-{} tensor",
                p.k(),
                self.arity()
            )));
        }
        self.flatten(&[p.left().to_vec(), p.right().to_vec()])
    }

    /// View an arity-2 tensor as a matrix.
    pub fn as_matrix(&self) -> Result<Mat<F>> {
        if self.arity() != 2 {
            return Err(Error::shape(format!("expected arity 2, got {}", self.arity())));
        }
        Ok(Mat::new(self.shape[0], self.shape[1], self.values.clone()))
    }

    /// Rank of an arity-2 tensor.
    pub fn matrix_rank(&self) -> Result<usize> {
        if self.arity() != 2 {
            return Err(Error::shape(format!(
                "matrix rank expects arity 2, got {}; flatten first",
                self.arity()
            )));
        }
        Ok(F::matrix_rank(self.shape[0], self.shape[1], &self.values))
    }

    /// Rank of the 2-flattening along `p`.
    pub fn flattening_rank(&self, p: &Bipartition) -> Result<usize> {
        self.flatten_bipartition(p)?.matrix_rank()
    }

    /// Pair with a pure dual tensor supported on a subset of the axes;
    /// the result keeps the remaining axes (possibly arity 0).
    pub fn pair(&self, xi: &PureDualTensor<F>) -> Result<KTensor<F>> {
        let k = self.arity();
        xi.check_against(&self.shape)?;
        let support = xi.support();
        let rest: Vec<usize> = (0..k).filter(|a| !support.contains(a)).collect();
        let rest_shape: Vec<usize> = rest.iter().map(|&a| self.shape[a]).collect();
        let mut out: KTensor<F> = KTensor::zeros(rest_shape)?;
        let mut idx = vec![0usize; k];
        let mut rest_idx = vec![0usize; rest.len()];
        for flat in 0..self.values.len() {
            if self.values[flat].is_zero() {
                continue;
            }
            self.unoffset_into(flat, &mut idx);
            let mut coef = F::one();
            for (j, &a) in support.iter().enumerate() {
                coef = coef.mul(&xi.factors()[j][idx[a]]);
                if coef.is_zero() {
                    break;
                }
            }
            if coef.is_zero() {
                continue;
            }
            for (j, &a) in rest.iter().enumerate() {
                rest_idx[j] = idx[a];
            }
            let o = out.offset(&rest_idx);
            out.values[o] = out.values[o].add(&self.values[flat].mul(&coef));
        }
        Ok(out)
    }
}

pub(crate) fn checked_cells(shape: &[usize]) -> Result<usize> {
    let mut cells: usize = 1;
    for &m in shape {
        if m == 0 {
            return Err(Error::shape("axis sizes must be at least 1"));
        }
        cells = cells
            .checked_mul(m)
            .ok_or_else(|| Error::shape("shape overflows addressable size"))?;
    }
    Ok(cells)
}

/// Pure (rank-one) dual tensor: one linear functional per supported axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureDualTensor<F: Field> {
    support: Vec<usize>,
    factors: Vec<Vec<F>>,
}

impl<F: Field> PureDualTensor<F> {
    pub fn new(support: Vec<usize>, factors: Vec<Vec<F>>) -> Result<Self> {
        if support.len() != factors.len() {
            return Err(Error::shape("one factor per supported axis"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::shape("support must be strictly increasing"));
        }
        Ok(PureDualTensor { support, factors })
    }

    /// Product of standard dual basis vectors: picks out the slice of a
    /// tensor at the given indices of the supported axes.
    pub fn standard(support: Vec<usize>, indices: &[usize], shape: &[usize]) -> Result<Self> {
        if support.len() != indices.len() {
            return Err(Error::shape("one index per supported axis"));
        }
        let mut factors = Vec::with_capacity(support.len());
        for (j, &a) in support.iter().enumerate() {
            if a >= shape.len() || indices[j] >= shape[a] {
                return Err(Error::shape("standard dual index out of range"));
            }
            let mut v = vec![F::zero(); shape[a]];
            v[indices[j]] = F::one();
            factors.push(v);
        }
        PureDualTensor::new(support, factors)
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }
    pub fn factors(&self) -> &[Vec<F>] {
        &self.factors
    }

    fn check_against(&self, shape: &[usize]) -> Result<()> {
        for (j, &a) in self.support.iter().enumerate() {
            if a >= shape.len() {
                return Err(Error::shape(format!(
                    "dual support axis {} out of range for arity {}",
                    a + 1,
                    shape.len()
                )));
            }
            if self.factors[j].len() != shape[a] {
                return Err(Error::shape(format!(
                    "dual factor on axis {} has length {}, axis size is {}",
                    a + 1,
                    self.factors[j].len(),
                    shape[a]
                )));
            }
        }
        Ok(())
    }
}

/// List of pure terms; evaluating sums their outer products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<F: Field> {
    pub shape: Vec<usize>,
    pub terms: Vec<Vec<Vec<F>>>,
}

impl<F: Field> Decomposition<F> {
    pub fn new(shape: Vec<usize>, terms: Vec<Vec<Vec<F>>>) -> Result<Self> {
        for (t, term) in terms.iter().enumerate() {
            if term.len() != shape.len() {
                return Err(Error::shape(format!(
                    "term {t} has {} factors, arity is {}",
                    term.len(),
                    shape.len()
                )));
            }
            for (a, v) in term.iter().enumerate() {
                if v.len() != shape[a] {
                    return Err(Error::shape(format!(
                        "term {t} axis {} factor has length {}, axis size is {}",
                        a + 1,
                        v.len(),
                        shape[a]
                    )));
                }
            }
        }
        Ok(Decomposition { shape, terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Sum of outer products. An empty decomposition evaluates to the zero
/// tensor of its shape; this is the rank-0 convention used everywhere.
pub fn eval_decomposition<F: Field>(d: &Decomposition<F>) -> Result<KTensor<F>> {
    let mut out: KTensor<F> = KTensor::zeros(d.shape.clone())?;
    let mut idx = vec![0usize; d.shape.len()];
    for term in &d.terms {
        for flat in 0..out.values().len() {
            out.unoffset_into(flat, &mut idx);
            let mut prod = F::one();
            for (a, v) in term.iter().enumerate() {
                prod = prod.mul(&v[idx[a]]);
                if prod.is_zero() {
                    break;
                }
            }
            if !prod.is_zero() {
                let cur = out.values()[flat].add(&prod);
                out.values_mut()[flat] = cur;
            }
        }
    }
    Ok(out)
}

impl<F: Field> KTensor<F> {
    pub(crate) fn values_mut(&mut self) -> &mut [F] {
        &mut self.values
    }
}

/// Kronecker product of two matrices (arity-2 tensors), with the pair-index
/// bijection row = (x, u) -> x * p1 + u, col = (y, v) -> y * p2 + v.
pub fn kron<F: Field>(u: &KTensor<F>, v: &KTensor<F>) -> Result<KTensor<F>> {
    if u.arity() != 2 || v.arity() != 2 {
        return Err(Error::shape("kron expects two arity-2 tensors"));
    }
    let (m1, m2) = (u.shape()[0], u.shape()[1]);
    let (p1, p2) = (v.shape()[0], v.shape()[1]);
    KTensor::from_fn(vec![m1 * p1, m2 * p2], |idx| {
        let (x, uu) = (idx[0] / p1, idx[0] % p1);
        let (y, vv) = (idx[1] / p2, idx[1] % p2);
        u.value(&[x, y]).mul(v.value(&[uu, vv]))
    })
}

/// Entrywise product of two same-shape tensors.
pub fn hadamard<F: Field>(a: &KTensor<F>, b: &KTensor<F>) -> Result<KTensor<F>> {
    if a.shape() != b.shape() {
        return Err(Error::shape("hadamard needs identical shapes"));
    }
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.mul(y))
        .collect();
    KTensor::new(a.shape().to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Gf2, Rat};

    fn rat_tensor(shape: Vec<usize>, vals: &[i64]) -> KTensor<Rat> {
        KTensor::new(shape, vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    #[test]
    fn identity_grouping_is_identity() {
        let t = rat_tensor(vec![2, 3], &[1, 2, 3, 4, 5, 6]);
        let g = t.flatten(&[vec![0], vec![1]]).unwrap();
        assert_eq!(g, t);
    }

    #[test]
    fn flatten_2x3x5_to_6x5() {
        let t = KTensor::<Rat>::from_fn(vec![2, 3, 5], |idx| {
            rat_int((idx[0] * 100 + idx[1] * 10 + idx[2]) as i64)
        })
        .unwrap();
        let m = t.flatten(&[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(m.shape(), &[6, 5]);
        // Combined row index is x * 3 + y (last grouped axis fastest).
        for x in 0..2 {
            for y in 0..3 {
                for z in 0..5 {
                    assert_eq!(m.value(&[x * 3 + y, z]), t.value(&[x, y, z]));
                }
            }
        }
        // Same multiset of entries.
        let mut a: Vec<String> = t.values().iter().map(|v| v.render()).collect();
        let mut b: Vec<String> = m.values().iter().map(|v| v.render()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn flatten_group_order_vs_axis_order() {
        let t = rat_tensor(vec![2, 2, 2], &[0, 1, 2, 3, 4, 5, 6, 7]);
        // Giving a group as {3,1} means the same |group as {1,3}.
        let a = t.flatten(&[vec![2, 0], vec![1]]).unwrap();
        let b = t.flatten(&[vec![0, 2], vec![1]]).unwrap();
        assert_eq!(a, b);
        // Swapping the group order transposes.
        let c = t.flatten(&[vec![1], vec![0, 2]]).unwrap();
        for r in 0..4 {
            for q in 0..2 {
                assert_eq!(a.value(&[r, q]), c.value(&[q, r]));
            }
        }
    }

    #[test]
    fn pair_standard_dual_is_slice() {
        let t = rat_tensor(vec![2, 2, 2], &[0, 1, 2, 3, 4, 5, 6, 7]);
        let xi = PureDualTensor::standard(vec![2], &[1], t.shape()).unwrap();
        let s = t.pair(&xi).unwrap();
        assert_eq!(s.shape(), &[2, 2]);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(s.value(&[x, y]), t.value(&[x, y, 1]));
            }
        }
    }

    #[test]
    fn pair_all_ones_sums_everything() {
        let t = rat_tensor(vec![2, 3], &[1, 2, 3, 4, 5, 6]);
        let xi = PureDualTensor::new(
            vec![0, 1],
            vec![vec![rat_int(1); 2], vec![rat_int(1); 3]],
        )
        .unwrap();
        let s = t.pair(&xi).unwrap();
        assert_eq!(s.arity(), 0);
        assert_eq!(s.scalar(), &rat_int(21));
    }

    #[test]
    fn pair_composes_axis_by_axis() {
        let t = KTensor::<Rat>::from_fn(vec![2, 3, 2], |idx| {
            rat_int((idx[0] * 7 + idx[1] * 3 + idx[2] * 11) as i64 % 5)
        })
        .unwrap();
        let both = PureDualTensor::new(
            vec![0, 2],
            vec![vec![rat_int(2), rat_int(3)], vec![rat_int(1), rat_int(4)]],
        )
        .unwrap();
        let first = PureDualTensor::new(vec![0], vec![vec![rat_int(2), rat_int(3)]]).unwrap();
        // After pairing away axis 1 of the original, old axis 3 is axis 2.
        let second = PureDualTensor::new(vec![1], vec![vec![rat_int(1), rat_int(4)]]).unwrap();
        let a = t.pair(&both).unwrap();
        let b = t.pair(&first).unwrap().pair(&second).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pairing_does_not_increase_matrix_rank() {
        // Slices of a 3-tensor have rank at most the {1}|{23} flattening rank.
        let t = KTensor::<Gf2>::from_fn(vec![3, 3, 3], |idx| {
            Gf2((idx[0] + 2 * idx[1] + idx[2]) % 3 == 0)
        })
        .unwrap();
        let p = Bipartition::new(3, &[0], &[1, 2]).unwrap();
        let full = t.flattening_rank(&p).unwrap();
        for z in 0..3 {
            let xi = PureDualTensor::standard(vec![2], &[z], t.shape()).unwrap();
            let slice = t.pair(&xi).unwrap();
            assert!(slice.matrix_rank().unwrap() <= full);
        }
    }

    #[test]
    fn kron_matches_grouped_flattening() {
        let u = rat_tensor(vec![2, 3], &[1, 2, 3, 4, 5, 6]);
        let v = rat_tensor(vec![2, 2], &[0, 1, 1, 0]);
        let w = kron(&u, &v).unwrap();
        assert_eq!(w.shape(), &[4, 6]);
        // Build the 4-tensor T[x,y,u,v] = U[x,y] V[u,v] and flatten {1,3}|{2,4}.
        let t4 = KTensor::<Rat>::from_fn(vec![2, 3, 2, 2], |idx| {
            u.value(&[idx[0], idx[1]]).mul(v.value(&[idx[2], idx[3]]))
        })
        .unwrap();
        let f = t4.flatten(&[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(w, f);
    }

    #[test]
    fn kron_of_identities() {
        let id2 = rat_tensor(vec![2, 2], &[1, 0, 0, 1]);
        let id3 = rat_tensor(vec![3, 3], &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let w = kron(&id2, &id3).unwrap();
        let id6 = KTensor::<Rat>::from_fn(vec![6, 6], |idx| rat_int((idx[0] == idx[1]) as i64)).unwrap();
        assert_eq!(w, id6);
    }

    #[test]
    fn hadamard_with_ones_and_rank_bound() {
        let a = rat_tensor(vec![2, 2], &[1, 2, 3, 4]);
        let ones = rat_tensor(vec![2, 2], &[1, 1, 1, 1]);
        assert_eq!(hadamard(&a, &ones).unwrap(), a);
        // Entrywise product rank is bounded by the product of ranks.
        let b = rat_tensor(vec![2, 2], &[1, 1, 0, 1]);
        let h = hadamard(&a, &b).unwrap();
        assert!(h.matrix_rank().unwrap() <= a.matrix_rank().unwrap() * b.matrix_rank().unwrap());
    }

    #[test]
    fn eval_decomposition_cases() {
        let zero = Decomposition::<Rat>::new(vec![2, 2, 2], vec![]).unwrap();
        assert!(eval_decomposition(&zero).unwrap().is_zero());
        let one = Decomposition::new(
            vec![2, 2, 2],
            vec![vec![
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(0), rat_int(1)],
            ]],
        )
        .unwrap();
        let t = eval_decomposition(&one).unwrap();
        let mut want = KTensor::<Rat>::zeros(vec![2, 2, 2]).unwrap();
        want.set(&[1, 1, 1], rat_int(1));
        assert_eq!(t, want);
    }

    #[test]
    fn gf2_flatten_rank_matches_direct_construction() {
        // Independent check of the bijection: build the {1}|{23} matrix by
        // explicit loops and compare ranks entry by entry.
        let t = KTensor::<Gf2>::from_fn(vec![2, 3, 4], |idx| {
            Gf2((idx[0] * 5 + idx[1] * 2 + idx[2] * idx[2]) % 3 == 1)
        })
        .unwrap();
        let p = Bipartition::new(3, &[0], &[1, 2]).unwrap();
        let m = t.flatten_bipartition(&p).unwrap();
        assert_eq!(m.shape(), &[2, 12]);
        for x in 0..2 {
            for y in 0..3 {
                for z in 0..4 {
                    assert_eq!(m.value(&[x, y * 4 + z]), t.value(&[x, y, z]));
                }
            }
        }
    }
}

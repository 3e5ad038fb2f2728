//! Boolean functions on a product domain [m_1] x ... x [m_k], and the
//! combinatorial boxes (products of subsets) that protocols and covers
//! carve the domain into.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::partition::Bipartition;
use crate::tensor::KTensor;

/// Total Boolean function on a product domain. Values are stored row-major,
/// last coordinate fastest, matching the tensor layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolFunction {
    shape: Vec<usize>,
    values: Vec<bool>,
}

impl BoolFunction {
    pub fn new(shape: Vec<usize>, values: Vec<bool>) -> Result<Self> {
        let cells = crate::tensor::checked_cells(&shape)?;
        if values.len() != cells {
            return Err(Error::shape(format!(
                "expected {cells} values for shape {shape:?}, got {}",
                values.len()
            )));
        }
        Ok(BoolFunction { shape, values })
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> bool) -> Result<Self> {
        let cells = crate::tensor::checked_cells(&shape)?;
        let mut values = Vec::with_capacity(cells);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..cells {
            values.push(f(&idx));
            for ax in (0..shape.len()).rev() {
                idx[ax] += 1;
                if idx[ax] < shape[ax] {
                    break;
                }
                idx[ax] = 0;
            }
        }
        Ok(BoolFunction { shape, values })
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn offset(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.shape.len() {
            return Err(Error::shape("index arity mismatch"));
        }
        let mut off = 0usize;
        for (ax, (&i, &d)) in index.iter().zip(&self.shape).enumerate() {
            if i >= d {
                return Err(Error::shape(format!("index {i} out of range on axis {ax}")));
            }
            off = off * d + i;
        }
        Ok(off)
    }

    pub fn value(&self, index: &[usize]) -> Result<bool> {
        Ok(self.values[self.offset(index)?])
    }

    pub fn value_at(&self, offset: usize) -> bool {
        self.values[offset]
    }

    pub fn is_constant(&self) -> Option<bool> {
        let first = self.values[0];
        if self.values.iter().all(|&v| v == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn count(&self, b: bool) -> usize {
        self.values.iter().filter(|&&v| v == b).count()
    }

    /// 0/1 tensor with the same layout.
    pub fn to_tensor<F: Field>(&self) -> KTensor<F> {
        KTensor::new(
            self.shape.clone(),
            self.values.iter().map(|&v| F::from_bit(v)).collect(),
        )
        .expect("shape already validated")
    }

    /// Two-party function induced by a bipartition of the axes: the two
    /// grouped coordinates enumerate each side row-major in ascending axis
    /// order, exactly as the matching tensor flattening does.
    pub fn induced(&self, p: &Bipartition) -> Result<BoolFunction> {
        if p.k() != self.arity() {
            return Err(Error::partition("bipartition arity mismatch"));
        }
        let left = p.left();
        let right = p.right();
        let dim = |axes: &[usize]| axes.iter().map(|&a| self.shape[a]).product::<usize>();
        let (rows, cols) = (dim(left), dim(right));
        let mut values = vec![false; rows * cols];
        let mut idx = vec![0usize; self.arity()];
        for off in 0..self.values.len() {
            let mut r = 0usize;
            for &a in left {
                r = r * self.shape[a] + idx[a];
            }
            let mut c = 0usize;
            for &a in right {
                c = c * self.shape[a] + idx[a];
            }
            values[r * cols + c] = self.values[off];
            for ax in (0..self.arity()).rev() {
                idx[ax] += 1;
                if idx[ax] < self.shape[ax] {
                    break;
                }
                idx[ax] = 0;
            }
        }
        BoolFunction::new(vec![rows, cols], values)
    }
}

/// Lazily enumerates every Boolean function on `shape`, in increasing order
/// of the value table read as a little-endian integer (cell 0 = bit 0).
pub fn all_functions(shape: Vec<usize>) -> Result<impl Iterator<Item = BoolFunction>> {
    let cells = crate::tensor::checked_cells(&shape)?;
    if cells > 20 {
        return Err(Error::cap(
            "function enumeration",
            format!("2^{cells}"),
            "2^20",
        ));
    }
    let total: u64 = 1u64 << cells;
    Ok((0..total).map(move |code| {
        let values = (0..cells).map(|i| code >> i & 1 == 1).collect();
        BoolFunction {
            shape: shape.clone(),
            values,
        }
    }))
}

/// Combinatorial box: one nonempty subset of [m_i] per axis, as a bitmask.
/// Axes are capped at 64 values so a subset fits in one word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KBox {
    masks: Vec<u64>,
}

impl KBox {
    pub fn new(shape: &[usize], masks: Vec<u64>) -> Result<Self> {
        if masks.len() != shape.len() {
            return Err(Error::shape("box arity mismatch"));
        }
        for (ax, (&m, &d)) in masks.iter().zip(shape).enumerate() {
            if d > 64 {
                return Err(Error::shape(format!("axis {ax} exceeds 64 values")));
            }
            if m == 0 {
                return Err(Error::shape(format!("box empty on axis {ax}")));
            }
            if d < 64 && m >> d != 0 {
                return Err(Error::shape(format!("box exceeds axis {ax} range")));
            }
        }
        Ok(KBox { masks })
    }

    pub fn full(shape: &[usize]) -> Result<Self> {
        let masks = shape
            .iter()
            .map(|&d| {
                if d == 64 {
                    u64::MAX
                } else {
                    (1u64 << d) - 1
                }
            })
            .collect();
        KBox::new(shape, masks)
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn mask(&self, axis: usize) -> u64 {
        self.masks[axis]
    }

    pub fn arity(&self) -> usize {
        self.masks.len()
    }

    pub fn cells(&self) -> u64 {
        self.masks
            .iter()
            .map(|m| m.count_ones() as u64)
            .product()
    }

    pub fn contains(&self, index: &[usize]) -> bool {
        index
            .iter()
            .zip(&self.masks)
            .all(|(&i, &m)| i < 64 && m >> i & 1 == 1)
    }

    /// Per-axis member lists, ascending.
    pub fn axis_values(&self) -> Vec<Vec<usize>> {
        self.masks
            .iter()
            .map(|&m| (0..64).filter(|&v| m >> v & 1 == 1).collect())
            .collect()
    }

    /// Visits every cell of the box in row-major order (last axis fastest).
    pub fn for_each_cell(&self, mut visit: impl FnMut(&[usize])) {
        let values = self.axis_values();
        let mut pos = vec![0usize; values.len()];
        let mut idx: Vec<usize> = values.iter().map(|v| v[0]).collect();
        loop {
            visit(&idx);
            let mut ax = values.len();
            while ax > 0 {
                ax -= 1;
                pos[ax] += 1;
                if pos[ax] < values[ax].len() {
                    idx[ax] = values[ax][pos[ax]];
                    break;
                }
                pos[ax] = 0;
                idx[ax] = values[ax][0];
                if ax == 0 {
                    return;
                }
            }
        }
    }

    /// Does `f` take the single value `b` on the whole box?
    pub fn is_mono(&self, f: &BoolFunction, b: bool) -> bool {
        let mut mono = true;
        self.for_each_cell(|idx| {
            if f.value(idx).expect("box within shape") != b {
                mono = false;
            }
        });
        mono
    }

    /// Human-readable rendering: `{0,1}x{2}x{0,2}`.
    pub fn render(&self) -> String {
        self.axis_values()
            .iter()
            .map(|vals| {
                let inner: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect::<Vec<_>>()
            .join("x")
    }
}

impl serde::Serialize for KBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.axis_values())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf2, Rat};

    fn xor3() -> BoolFunction {
        BoolFunction::from_fn(vec![2, 2, 2], |idx| (idx[0] + idx[1] + idx[2]) % 2 == 1).unwrap()
    }

    #[test]
    fn layout_matches_tensor() {
        let f = xor3();
        let t: KTensor<Gf2> = f.to_tensor();
        for (x, y, z) in itertools_cube(2, 2, 2) {
            assert_eq!(t.value(&[x, y, z]).0, f.value(&[x, y, z]).unwrap());
        }
        let tq: KTensor<Rat> = f.to_tensor();
        assert_eq!(tq.value(&[1, 0, 0]), &crate::field::rat_int(1));
    }

    fn itertools_cube(a: usize, b: usize, c: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..a {
            for y in 0..b {
                for z in 0..c {
                    out.push((x, y, z));
                }
            }
        }
        out
    }

    #[test]
    fn induced_agrees_with_flattening() {
        let f = BoolFunction::from_fn(vec![2, 3, 2], |idx| (idx[0] * 7 + idx[1] * 3 + idx[2]) % 2 == 0)
            .unwrap();
        let p = Bipartition::parse(3, "13|2").unwrap();
        let g = f.induced(&p).unwrap();
        assert_eq!(g.shape(), &[4, 3]);
        let m = f.to_tensor::<Gf2>().flatten_bipartition(&p).unwrap();
        let mat = m.as_matrix().unwrap();
        for r in 0..4 {
            for c in 0..3 {
                assert_eq!(g.value(&[r, c]).unwrap(), mat.at(r, c).0);
            }
        }
    }

    #[test]
    fn enumeration_is_exhaustive_and_ordered() {
        let fns: Vec<BoolFunction> = all_functions(vec![2, 2]).unwrap().collect();
        assert_eq!(fns.len(), 16);
        assert_eq!(fns[0].is_constant(), Some(false));
        assert_eq!(fns[15].is_constant(), Some(true));
        // cell 0 = index (0,0) toggles first
        assert!(fns[1].value(&[0, 0]).unwrap());
        assert!(!fns[1].value(&[0, 1]).unwrap());
        let distinct: std::collections::HashSet<Vec<bool>> =
            fns.iter().map(|f| f.values().to_vec()).collect();
        assert_eq!(distinct.len(), 16);
    }

    #[test]
    fn enumeration_cap() {
        assert!(all_functions(vec![5, 5]).is_err());
    }

    #[test]
    fn box_cells_and_mono() {
        let f = xor3();
        let b = KBox::new(&[2, 2, 2], vec![0b01, 0b10, 0b11]).unwrap();
        assert_eq!(b.cells(), 2);
        let mut seen = Vec::new();
        b.for_each_cell(|idx| seen.push(idx.to_vec()));
        assert_eq!(seen, vec![vec![0, 1, 0], vec![0, 1, 1]]);
        assert!(!b.is_mono(&f, true));
        let b1 = KBox::new(&[2, 2, 2], vec![0b01, 0b10, 0b01]).unwrap();
        assert!(b1.is_mono(&f, true));
        assert_eq!(b1.render(), "{0}x{1}x{0}");
    }

    #[test]
    fn box_rejects_empty_axis() {
        assert!(KBox::new(&[2, 2], vec![0b01, 0]).is_err());
        assert!(KBox::new(&[2, 2], vec![0b100, 0b1]).is_err());
    }
}

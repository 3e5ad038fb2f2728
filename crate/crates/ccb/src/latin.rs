//! Latin squares and the three-argument functions they define. Each square
//! L yields f(x,y,z) = [L[x,y] != z]; distinct squares give distinct
//! functions, every induced two-party function collapses to non-equality,
//! yet among all squares of a given dimension some function needs many
//! boxes in its 1-cover.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boolfn::BoolFunction;
use crate::caps::SearchCaps;
use crate::cover::{ceil_log2, cover_number};
use crate::error::{Error, Result};

/// Square matrix over values 0..m-1 whose rows and columns are all
/// permutations.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LatinSquare {
    rows: Vec<Vec<usize>>,
}

impl LatinSquare {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::shape("a latin square needs at least one row"));
        }
        if m > 64 {
            return Err(Error::shape("dimension is capped at 64"));
        }
        let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut col_seen = vec![0u64; m];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::shape(format!("row {r} has length {}", row.len())));
            }
            let mut row_seen = 0u64;
            for (c, &v) in row.iter().enumerate() {
                if v >= m {
                    return Err(Error::shape(format!("value {v} out of range at ({r},{c})")));
                }
                if row_seen >> v & 1 == 1 {
                    return Err(Error::shape(format!("row {r} repeats value {v}")));
                }
                if col_seen[c] >> v & 1 == 1 {
                    return Err(Error::shape(format!("column {c} repeats value {v}")));
                }
                row_seen |= 1 << v;
                col_seen[c] |= 1 << v;
            }
            if row_seen != full {
                return Err(Error::shape(format!("row {r} is not a permutation")));
            }
        }
        Ok(LatinSquare { rows })
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn at(&self, r: usize, c: usize) -> usize {
        self.rows[r][c]
    }

    /// Cyclic table L[r,c] = r + c mod m: the standard example.
    pub fn cyclic(m: usize) -> Result<Self> {
        let rows = (0..m)
            .map(|r| (0..m).map(|c| (r + c) % m).collect())
            .collect();
        LatinSquare::new(rows)
    }
}

/// All Latin squares of dimension m in lexicographic row-major order.
/// Counts grow superexponentially; enumeration is allowed through m = 5
/// (161280 squares).
pub fn latin_enumerate(m: usize) -> Result<Vec<LatinSquare>> {
    if m == 0 || m > 5 {
        return Err(Error::cap(
            "latin square enumeration",
            format!("dimension {m}"),
            "5".to_string(),
        ));
    }
    let full: u64 = (1u64 << m) - 1;
    let mut out = Vec::new();
    let mut grid = vec![vec![0usize; m]; m];
    let mut row_used = vec![0u64; m];
    let mut col_used = vec![0u64; m];
    fn fill(
        cell: usize,
        m: usize,
        full: u64,
        grid: &mut Vec<Vec<usize>>,
        row_used: &mut Vec<u64>,
        col_used: &mut Vec<u64>,
        out: &mut Vec<LatinSquare>,
    ) {
        if cell == m * m {
            out.push(LatinSquare {
                rows: grid.clone(),
            });
            return;
        }
        let (r, c) = (cell / m, cell % m);
        let mut free = full & !(row_used[r] | col_used[c]);
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            grid[r][c] = v;
            row_used[r] |= 1 << v;
            col_used[c] |= 1 << v;
            fill(cell + 1, m, full, grid, row_used, col_used, out);
            row_used[r] &= !(1u64 << v);
            col_used[c] &= !(1u64 << v);
        }
    }
    fill(0, m, full, &mut grid, &mut row_used, &mut col_used, &mut out);
    Ok(out)
}

/// Seeded random Latin square by randomized backtracking: cells are filled
/// row-major, symbols tried in a freshly shuffled order at each cell. The
/// output is deterministic per seed but the distribution over squares is
/// not uniform.
pub fn latin_sample(m: usize, seed: u64) -> Result<LatinSquare> {
    if m == 0 || m > 64 {
        return Err(Error::shape("dimension must be in 1..=64"));
    }
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = vec![vec![0usize; m]; m];
    let mut row_used = vec![0u64; m];
    let mut col_used = vec![0u64; m];
    fn fill(
        cell: usize,
        m: usize,
        full: u64,
        grid: &mut Vec<Vec<usize>>,
        row_used: &mut Vec<u64>,
        col_used: &mut Vec<u64>,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        if cell == m * m {
            return true;
        }
        let (r, c) = (cell / m, cell % m);
        let free = full & !(row_used[r] | col_used[c]);
        let mut order: Vec<usize> = (0..m).filter(|&v| free >> v & 1 == 1).collect();
        order.shuffle(rng);
        for v in order {
            grid[r][c] = v;
            row_used[r] |= 1 << v;
            col_used[c] |= 1 << v;
            if fill(cell + 1, m, full, grid, row_used, col_used, rng) {
                return true;
            }
            row_used[r] &= !(1u64 << v);
            col_used[c] &= !(1u64 << v);
        }
        false
    }
    if !fill(0, m, full, &mut grid, &mut row_used, &mut col_used, &mut rng) {
        return Err(Error::invariant("backtracking failed to complete a square"));
    }
    LatinSquare::new(grid)
}

/// f(x,y,z) = 1 iff L[x,y] != z.
pub fn latin_function(l: &LatinSquare) -> Result<BoolFunction> {
    let m = l.dimension();
    BoolFunction::from_fn(vec![m, m, m], |idx| l.at(idx[0], idx[1]) != idx[2])
}

/// One answer per axis: in that axis's singleton-vs-rest flattening, does
/// every column on the rest side have exactly one 0 on the singleton side?
/// When it holds, the rest-side players can compute the unique zero locally,
/// which turns the induced two-party function into plain non-equality.
pub fn ne_reduction_per_axis(f: &BoolFunction) -> Result<Vec<bool>> {
    let k = f.arity();
    if k < 2 {
        return Err(Error::shape("needs at least 2 axes"));
    }
    let mut out = Vec::with_capacity(k);
    for axis in 0..k {
        let rest: Vec<usize> = (0..k).filter(|&a| a != axis).collect();
        let p = crate::partition::Bipartition::new(k, &[axis], &rest)?;
        let g = f.induced(&p)?;
        // the singleton axis may land on either side of the canonical form
        let singleton_left = p.left() == [axis];
        let (s_dim, r_dim) = if singleton_left {
            (g.shape()[0], g.shape()[1])
        } else {
            (g.shape()[1], g.shape()[0])
        };
        let mut holds = true;
        for rest_i in 0..r_dim {
            let zeros = (0..s_dim)
                .filter(|&s| {
                    let idx = if singleton_left { [s, rest_i] } else { [rest_i, s] };
                    !g.value(&idx).unwrap()
                })
                .count();
            if zeros != 1 {
                holds = false;
                break;
            }
        }
        out.push(holds);
    }
    Ok(out)
}

/// All axes at once; the characterization of functions coming from Latin
/// squares on a cube.
pub fn unique_zero_per_column(f: &BoolFunction) -> Result<bool> {
    Ok(ne_reduction_per_axis(f)?.into_iter().all(|b| b))
}

/// Inverse of `latin_function`: recovers the square, or errors when the
/// function is not of that shape.
pub fn latin_of_function(f: &BoolFunction) -> Result<LatinSquare> {
    if f.arity() != 3 {
        return Err(Error::shape("expected three axes"));
    }
    let m = f.shape()[0];
    if f.shape() != [m, m, m] {
        return Err(Error::shape("expected a cube domain"));
    }
    let mut rows = vec![vec![0usize; m]; m];
    for x in 0..m {
        for y in 0..m {
            let zeros: Vec<usize> = (0..m)
                .filter(|&z| !f.value(&[x, y, z]).unwrap())
                .collect();
            if zeros.len() != 1 {
                return Err(Error::precondition(format!(
                    "cell ({x},{y}) has {} zero outputs, expected exactly 1",
                    zeros.len()
                )));
            }
            rows[x][y] = zeros[0];
        }
    }
    LatinSquare::new(rows)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LatinHardness {
    pub m: usize,
    pub squares: usize,
    /// all value tables pairwise distinct
    pub distinct_functions: bool,
    /// largest 1-cover size over all squares of this dimension
    pub max_cover: u64,
    pub max_cover_bits: u32,
    /// first square attaining the max, row-major lexicographic order
    pub witness: LatinSquare,
    /// ceil(m/12): the counting argument promises the max reaches this
    pub threshold: u64,
    pub threshold_met: bool,
    /// cover size -> number of squares with that size
    pub histogram: BTreeMap<u64, usize>,
}

/// Enumerates every square of dimension m, covers each function's 1-cells
/// exactly, and checks the counting lower bound on the worst square.
pub fn latin_hardness_experiment(m: usize, caps: &SearchCaps) -> Result<LatinHardness> {
    let squares = latin_enumerate(m)?;
    let mut tables = std::collections::HashSet::new();
    let mut distinct_functions = true;
    let mut max_cover = 0u64;
    let mut witness: Option<LatinSquare> = None;
    let mut histogram: BTreeMap<u64, usize> = BTreeMap::new();
    for l in &squares {
        let f = latin_function(l)?;
        if !tables.insert(f.values().to_vec()) {
            distinct_functions = false;
        }
        let cover = cover_number(&f, true, caps)?;
        *histogram.entry(cover.count).or_insert(0) += 1;
        if cover.count > max_cover {
            max_cover = cover.count;
            witness = Some(l.clone());
        }
    }
    let threshold = (m as u64).div_ceil(12);
    Ok(LatinHardness {
        m,
        squares: squares.len(),
        distinct_functions,
        max_cover,
        max_cover_bits: ceil_log2(max_cover),
        witness: witness.expect("at least one square"),
        threshold,
        threshold_met: max_cover >= threshold,
        histogram,
    })
}

/// Boxes available in the [m]^3 cube, nonempty sides only. The counting
/// lemma bounds covers of size t by (2^(3m))^t; this exact count is what
/// the bound rounds up.
pub fn box_count(m: u64) -> num::BigUint {
    use num::pow::Pow;
    let per_axis = num::BigUint::from(2u64).pow(m) - num::BigUint::from(1u64);
    (&per_axis * &per_axis) * &per_axis
}

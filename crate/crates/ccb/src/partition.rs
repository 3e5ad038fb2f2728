//! Bipartitions of the axis set [k] and separating collections.
//! Axes are 0-based internally; user-facing text is 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// Unordered 2-partition of the axes {0, .., k-1}, stored canonically:
/// both sides sorted, the left side contains axis 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition {
    k: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(k: usize, a: &[usize], b: &[usize]) -> Result<Self> {
        let mut left: Vec<usize> = a.to_vec();
        let mut right: Vec<usize> = b.to_vec();
        left.sort_unstable();
        right.sort_unstable();
        left.dedup();
        right.dedup();
        if left.len() != a.len() || right.len() != b.len() {
            return Err(Error::partition("repeated axis within a side"));
        }
        if left.is_empty() || right.is_empty() {
            return Err(Error::partition("both sides must be nonempty"));
        }
        let mut seen = vec![false; k];
        for &x in left.iter().chain(right.iter()) {
            if x >= k {
                return Err(Error::partition(format!("axis {} out of range for k={k}", x + 1)));
            }
            if seen[x] {
                return Err(Error::partition(format!("axis {} appears on both sides", x + 1)));
            }
            seen[x] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::partition("sides must cover every axis"));
        }
        if right.contains(&0) {
            std::mem::swap(&mut left, &mut right);
        }
        Ok(Bipartition { k, left, right })
    }

    pub fn from_masks(k: usize, left_mask: u32) -> Result<Self> {
        let full = (1u32 << k) - 1;
        let l: Vec<usize> = (0..k).filter(|&i| left_mask >> i & 1 == 1).collect();
        let r: Vec<usize> = (0..k).filter(|&i| (full ^ left_mask) >> i & 1 == 1).collect();
        Bipartition::new(k, &l, &r)
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn left(&self) -> &[usize] {
        &self.left
    }
    pub fn right(&self) -> &[usize] {
        &self.right
    }
    pub fn left_mask(&self) -> u32 {
        self.left.iter().fold(0, |m, &i| m | 1 << i)
    }
    pub fn right_mask(&self) -> u32 {
        self.right.iter().fold(0, |m, &i| m | 1 << i)
    }

    /// Does this partition put `i` and `j` on different sides?
    pub fn separates(&self, i: usize, j: usize) -> bool {
        let li = self.left.contains(&i);
        let lj = self.left.contains(&j);
        li != lj
    }

    /// `1|23`-style rendering, 1-based; `+`-separated on both sides once
    /// any axis needs more than one digit.
    pub fn render(&self) -> String {
        let compact = self.k <= 9;
        format!(
            "{}|{}",
            render_axes_with(&self.left, compact),
            render_axes_with(&self.right, compact)
        )
    }

    pub fn parse(k: usize, s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once('|')
            .ok_or_else(|| Error::parse(format!("bipartition `{s}` must look like 1|23")))?;
        Bipartition::new(k, &parse_axes(l)?, &parse_axes(r)?)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl serde::Serialize for Bipartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

pub fn render_axes(axes: &[usize]) -> String {
    render_axes_with(axes, axes.iter().all(|&a| a < 9))
}

fn render_axes_with(axes: &[usize], compact: bool) -> String {
    if compact {
        axes.iter().map(|a| (a + 1).to_string()).collect()
    } else {
        axes.iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join("+")
    }
}

/// Accepts `123` (single digits) or `1+2+13` (plus-separated), 1-based.
pub fn parse_axes(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty axis group"));
    }
    let parts: Vec<String> = if s.contains('+') {
        s.split('+').map(|p| p.trim().to_string()).collect()
    } else {
        s.chars().map(|c| c.to_string()).collect()
    };
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        let n: usize = p
            .parse()
            .map_err(|_| Error::parse(format!("bad axis number `{p}`")))?;
        if n == 0 {
            return Err(Error::parse("axes are numbered from 1"));
        }
        out.push(n - 1);
    }
    Ok(out)
}

/// All bipartitions of [k] in canonical order (left side contains axis 0).
pub fn all_bipartitions(k: usize) -> Vec<Bipartition> {
    assert!(k >= 2 && k <= 20, "bipartition enumeration wants 2 <= k <= 20");
    let mut out = Vec::new();
    for rest in 0..(1u32 << (k - 1)) {
        let left = 1 | rest << 1;
        if left == (1u32 << k) - 1 {
            continue;
        }
        out.push(Bipartition::from_masks(k, left).expect("mask partition is valid"));
    }
    out.sort();
    out
}

/// True iff every pair of distinct axes is split by some member.
pub fn is_separating(k: usize, members: &[Bipartition]) -> bool {
    if members.iter().any(|p| p.k() != k) {
        return false;
    }
    for i in 0..k {
        for j in i + 1..k {
            if !members.iter().any(|p| p.separates(i, j)) {
                return false;
            }
        }
    }
    true
}

/// A collection of bipartitions that separates every pair of axes; this is
/// checked at construction. Members are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingCollection {
    k: usize,
    members: Vec<Bipartition>,
}

impl SeparatingCollection {
    pub fn new(k: usize, members: Vec<Bipartition>) -> Result<Self> {
        if k == 0 {
            return Err(Error::partition("collections need at least one axis"));
        }
        let mut members = members;
        members.sort();
        members.dedup();
        if let Some(p) = members.iter().find(|p| p.k() != k) {
            return Err(Error::partition(format!(
                "member {p} is a partition of [{}], not [{k}]",
                p.k()
            )));
        }
        if !is_separating(k, &members) {
            return Err(Error::partition("collection does not separate every axis pair"));
        }
        Ok(SeparatingCollection { k, members })
    }

    /// The collection of all `{i}`-vs-rest partitions.
    pub fn singletons_vs_rest(k: usize) -> Self {
        let members = (0..k)
            .map(|i| {
                let rest: Vec<usize> = (0..k).filter(|&j| j != i).collect();
                Bipartition::new(k, &[i], &rest).expect("singleton split is valid")
            })
            .collect();
        SeparatingCollection::new(k, members).expect("singleton collection separates")
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn members(&self) -> &[Bipartition] {
        &self.members
    }

    pub fn parse(k: usize, s: &str) -> Result<Self> {
        let members = s
            .split(',')
            .map(|m| Bipartition::parse(k, m.trim()))
            .collect::<Result<Vec<_>>>()?;
        SeparatingCollection::new(k, members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_errors() {
        let p = Bipartition::new(3, &[2, 1], &[0]).unwrap();
        assert_eq!(p.left(), &[0]);
        assert_eq!(p.right(), &[1, 2]);
        assert_eq!(p.render(), "1|23");
        assert!(Bipartition::new(3, &[0, 1], &[1, 2]).is_err());
        assert!(Bipartition::new(3, &[0], &[1]).is_err());
        assert!(Bipartition::new(3, &[], &[0, 1, 2]).is_err());
    }

    #[test]
    fn bipartition_count() {
        assert_eq!(all_bipartitions(2).len(), 1);
        assert_eq!(all_bipartitions(3).len(), 3);
        assert_eq!(all_bipartitions(4).len(), 7);
    }

    #[test]
    fn separating_examples() {
        // Two-member collection on four axes that splits every pair.
        let c = SeparatingCollection::parse(4, "12|34,13|24").unwrap();
        assert_eq!(c.members().len(), 2);
        // Dropping one member leaves the pairs {1,2} and {3,4} unsplit.
        let single = vec![Bipartition::parse(4, "12|34").unwrap()];
        assert!(!is_separating(4, &single));
        assert!(SeparatingCollection::new(4, single).is_err());
        let s = SeparatingCollection::singletons_vs_rest(3);
        assert_eq!(s.members().len(), 3);
        assert!(is_separating(3, s.members()));
    }

    #[test]
    fn parse_roundtrip_wide_axes() {
        let p = Bipartition::new(10, &[0, 9], &(1..9).collect::<Vec<_>>()).unwrap();
        let t = p.render();
        assert_eq!(t, "1+10|2+3+4+5+6+7+8+9");
        assert_eq!(Bipartition::parse(10, &t).unwrap(), p);
    }
}

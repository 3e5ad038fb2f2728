//! Exact scalar arithmetic. Two fields are supported: GF(2) and the
//! rationals with arbitrary-precision integers. No floating point anywhere.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Tag naming the field a tensor's entries live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FieldTag {
    #[serde(rename = "gf2")]
    Gf2,
    #[serde(rename = "q")]
    Rational,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Gf2 => write!(f, "gf2"),
            FieldTag::Rational => write!(f, "q"),
        }
    }
}

impl std::str::FromStr for FieldTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gf2" => Ok(FieldTag::Gf2),
            "q" => Ok(FieldTag::Rational),
            other => Err(Error::parse(format!("unknown field `{other}`, expected q or gf2"))),
        }
    }
}

/// Exact field element. `matrix_rank` is part of the trait so each field can
/// carry its own elimination strategy: bit-packed word-parallel elimination
/// for GF(2), fraction-free (Bareiss) integer elimination for the rationals.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const TAG: FieldTag;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse; None for zero.
    fn inv(&self) -> Option<Self>;
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
    fn parse(s: &str) -> Result<Self>;
    fn render(&self) -> String {
        format!("{self}")
    }

    /// Rank of a dense row-major `nrows x ncols` matrix.
    fn matrix_rank(nrows: usize, ncols: usize, data: &[Self]) -> usize;

    fn from_bit(b: bool) -> Self {
        if b {
            Self::one()
        } else {
            Self::zero()
        }
    }
}

/// GF(2) scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2(pub bool);

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.0 { 1 } else { 0 })
    }
}

impl Field for Gf2 {
    const TAG: FieldTag = FieldTag::Gf2;

    fn zero() -> Self {
        Gf2(false)
    }
    fn one() -> Self {
        Gf2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, rhs: &Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Gf2(self.0 & rhs.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 {
            Some(*self)
        } else {
            None
        }
    }
    fn parse(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Gf2(false)),
            "1" => Ok(Gf2(true)),
            other => Err(Error::parse(format!("bad gf2 scalar `{other}`"))),
        }
    }

    fn matrix_rank(nrows: usize, ncols: usize, data: &[Self]) -> usize {
        assert_eq!(data.len(), nrows * ncols, "matrix data length mismatch");
        let words = ncols.div_ceil(64).max(1);
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(nrows);
        for r in 0..nrows {
            let mut w = vec![0u64; words];
            for c in 0..ncols {
                if data[r * ncols + c].0 {
                    w[c / 64] |= 1u64 << (c % 64);
                }
            }
            rows.push(w);
        }
        gf2_rank_packed(&mut rows, ncols)
    }
}

/// Rank of bit-packed rows (little-endian bit order within each word).
pub fn gf2_rank_packed(rows: &mut [Vec<u64>], ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let (w, b) = (col / 64, col % 64);
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Exact rational scalar.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

impl Field for BigRational {
    const TAG: FieldTag = FieldTag::Rational;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        <BigRational as Zero>::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn parse(s: &str) -> Result<Self> {
        s.parse::<BigRational>()
            .map_err(|e| Error::parse(format!("bad rational `{s}`: {e}")))
    }

    fn matrix_rank(nrows: usize, ncols: usize, data: &[Self]) -> usize {
        assert_eq!(data.len(), nrows * ncols, "matrix data length mismatch");
        // Clear denominators row by row (rank is invariant under row scaling),
        // then run fraction-free elimination on the integer matrix.
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(nrows);
        for r in 0..nrows {
            let row = &data[r * ncols..(r + 1) * ncols];
            let mut lcm = BigInt::one();
            for x in row {
                lcm = lcm.lcm(x.denom());
            }
            m.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        }
        bareiss_rank(&mut m)
    }
}

/// Fraction-free elimination (Bareiss). Every division below is exact over
/// the integers, so entries never leave BigInt.
pub fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let t = &pivot * &m[r][c] - &m[r][col] * &m[rank][c];
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "bareiss division must be exact");
                m[r][c] = q;
            }
            m[r][col] = BigInt::from(0);
        }
        prev = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub fn is_negative(x: &Rat) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_arithmetic_table() {
        let z = Gf2::zero();
        let o = Gf2::one();
        assert_eq!(o.add(&o), z);
        assert_eq!(o.add(&z), o);
        assert_eq!(o.mul(&o), o);
        assert_eq!(o.mul(&z), z);
        assert_eq!(o.inv(), Some(o));
        assert_eq!(z.inv(), None);
    }

    #[test]
    fn rational_parse_reduces() {
        let x = <Rat as Field>::parse("6/4").unwrap();
        assert_eq!(x.render(), "3/2");
        let y = <Rat as Field>::parse("-14/7").unwrap();
        assert_eq!(y.render(), "-2");
        assert_eq!(<Rat as Field>::parse("5").unwrap().render(), "5");
        assert!(<Rat as Field>::parse("1/0").is_err() || <Rat as Field>::parse("1/0").is_err());
    }

    #[test]
    fn gf2_rank_small() {
        // [[1,0,1],[0,1,1],[1,1,0]] has rank 2 over GF(2): rows sum to zero.
        let d: Vec<Gf2> = [1, 0, 1, 0, 1, 1, 1, 1, 0].iter().map(|&b| Gf2(b == 1)).collect();
        assert_eq!(Gf2::matrix_rank(3, 3, &d), 2);
    }

    #[test]
    fn rational_rank_small() {
        // Same 0/1 pattern over the rationals has rank 3.
        let d: Vec<Rat> = [1, 0, 1, 0, 1, 1, 1, 1, 0].iter().map(|&v| rat_int(v)).collect();
        assert_eq!(Rat::matrix_rank(3, 3, &d), 3);
        let ones: Vec<Rat> = (0..12).map(|_| rat_int(1)).collect();
        assert_eq!(Rat::matrix_rank(3, 4, &ones), 1);
        let zeros: Vec<Rat> = (0..6).map(|_| rat_int(0)).collect();
        assert_eq!(Rat::matrix_rank(2, 3, &zeros), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let parse = |s: &str| <Rat as Field>::parse(s).unwrap();
        // Second row is 3/2 times the first.
        let d = vec![parse("1/2"), parse("1/3"), parse("3/4"), parse("1/2")];
        assert_eq!(Rat::matrix_rank(2, 2, &d), 1);
        let e = vec![parse("1/2"), parse("1/3"), parse("3/4"), parse("1/7")];
        assert_eq!(Rat::matrix_rank(2, 2, &e), 2);
    }
}

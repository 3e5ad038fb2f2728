//! Plain-text interchange formats.
//!
//! Tensor files: a header line `tensor k=<k> shape=<m1,...,mk> field=<q|gf2>`
//! followed by the cell values in row-major order (last axis fastest),
//! whitespace separated. Rationals read as `p/q` or plain integers; GF(2)
//! values as 0/1. `#` starts a comment running to end of line.
//!
//! Latin square files: a header line `latin m=<m>` followed by m rows of m
//! integers, 1-based on disk, 0-based in memory.

use crate::boolfn::BoolFunction;
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag, Gf2, Rat};
use crate::latin::LatinSquare;
use crate::tensor::KTensor;

/// A parsed tensor, tagged by the field its entries live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorData {
    Rational(KTensor<Rat>),
    Gf2(KTensor<Gf2>),
}

impl TensorData {
    pub fn field(&self) -> FieldTag {
        match self {
            TensorData::Rational(_) => FieldTag::Rational,
            TensorData::Gf2(_) => FieldTag::Gf2,
        }
    }

    pub fn shape(&self) -> &[usize] {
        match self {
            TensorData::Rational(t) => t.shape(),
            TensorData::Gf2(t) => t.shape(),
        }
    }

    pub fn arity(&self) -> usize {
        self.shape().len()
    }

    pub fn render(&self) -> String {
        match self {
            TensorData::Rational(t) => render_tensor(t),
            TensorData::Gf2(t) => render_tensor(t),
        }
    }
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn header_tokens<'a>(text: &'a str, keyword: &str) -> Result<(Vec<&'a str>, &'a str)> {
    let mut lines = text.splitn(2, '\n');
    let mut first = lines.next().unwrap_or("");
    let mut rest = lines.next().unwrap_or("");
    while first.trim().is_empty() {
        let mut next = rest.splitn(2, '\n');
        first = next.next().unwrap_or("");
        rest = next.next().unwrap_or("");
        if first.is_empty() && rest.is_empty() {
            break;
        }
    }
    let tokens: Vec<&str> = first.split_whitespace().collect();
    if tokens.first().copied() != Some(keyword) {
        return Err(Error::parse(format!("expected `{keyword}` header line")));
    }
    Ok((tokens, rest))
}

fn keyed<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .ok_or_else(|| Error::parse(format!("expected `{key}<value>` in header")))
}

pub fn parse_tensor(text: &str) -> Result<TensorData> {
    let clean = strip_comments(text);
    let (tokens, body) = header_tokens(&clean, "tensor")?;
    if tokens.len() != 4 {
        return Err(Error::parse(
            "tensor header takes exactly k=, shape=, field=",
        ));
    }
    let k: usize = keyed(tokens.get(1).copied(), "k=")?
        .parse()
        .map_err(|_| Error::parse("k must be an integer"))?;
    let shape: Vec<usize> = keyed(tokens.get(2).copied(), "shape=")?
        .split(',')
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(format!("bad axis size `{s}`")))
        })
        .collect::<Result<_>>()?;
    let field: FieldTag = keyed(tokens.get(3).copied(), "field=")?.parse()?;
    if shape.len() != k {
        return Err(Error::parse(format!(
            "k={k} but shape lists {} axes",
            shape.len()
        )));
    }
    let cells = shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::parse("shape product overflows"))?;
    let raw: Vec<&str> = body.split_whitespace().collect();
    if raw.len() != cells {
        return Err(Error::parse(format!(
            "expected {cells} values, found {}",
            raw.len()
        )));
    }
    match field {
        FieldTag::Rational => {
            let values = raw.iter().map(|s| Rat::parse(s)).collect::<Result<_>>()?;
            Ok(TensorData::Rational(KTensor::new(shape, values)?))
        }
        FieldTag::Gf2 => {
            let values = raw.iter().map(|s| Gf2::parse(s)).collect::<Result<_>>()?;
            Ok(TensorData::Gf2(KTensor::new(shape, values)?))
        }
    }
}

/// One line per innermost row, matching the read side's row-major order.
pub fn render_tensor<F: Field>(t: &KTensor<F>) -> String {
    let shape = t.shape();
    let k = shape.len();
    let shape_txt = shape
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let mut out = format!("tensor k={k} shape={shape_txt} field={}\n", F::TAG);
    let row = *shape.last().expect("tensors have at least one axis");
    for (i, v) in t.values().iter().enumerate() {
        out.push_str(&v.render());
        out.push(if (i + 1) % row == 0 { '\n' } else { ' ' });
    }
    out
}

pub fn parse_latin(text: &str) -> Result<LatinSquare> {
    let clean = strip_comments(text);
    let (tokens, body) = header_tokens(&clean, "latin")?;
    if tokens.len() != 2 {
        return Err(Error::parse("latin header takes exactly m="));
    }
    let m: usize = keyed(tokens.get(1).copied(), "m=")?
        .parse()
        .map_err(|_| Error::parse("m must be an integer"))?;
    let raw: Vec<&str> = body.split_whitespace().collect();
    if raw.len() != m * m {
        return Err(Error::parse(format!(
            "expected {} entries, found {}",
            m * m,
            raw.len()
        )));
    }
    let mut rows = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = Vec::with_capacity(m);
        for c in 0..m {
            let s = raw[r * m + c];
            let v: usize = s
                .parse()
                .map_err(|_| Error::parse(format!("bad entry `{s}`")))?;
            if v == 0 {
                return Err(Error::parse("entries are 1-based, found 0"));
            }
            row.push(v - 1);
        }
        rows.push(row);
    }
    LatinSquare::new(rows)
}

pub fn render_latin(l: &LatinSquare) -> String {
    let m = l.dimension();
    let mut out = format!("latin m={m}\n");
    for row in l.rows() {
        let line = row
            .iter()
            .map(|v| (v + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Reads a 0/1 tensor back as a boolean function.
pub fn bool_function_from_tensor(t: &TensorData) -> Result<BoolFunction> {
    match t {
        TensorData::Gf2(t) => {
            let values = t.values().iter().map(|v| v.0).collect();
            BoolFunction::new(t.shape().to_vec(), values)
        }
        TensorData::Rational(t) => {
            let one = <Rat as Field>::one();
            let values = t
                .values()
                .iter()
                .map(|v| {
                    if v.is_zero() {
                        Ok(false)
                    } else if *v == one {
                        Ok(true)
                    } else {
                        Err(Error::precondition(format!(
                            "entry {} is not 0/1",
                            v.render()
                        )))
                    }
                })
                .collect::<Result<_>>()?;
            BoolFunction::new(t.shape().to_vec(), values)
        }
    }
}

pub fn tensor_from_bool_function(f: &BoolFunction, field: FieldTag) -> TensorData {
    match field {
        FieldTag::Rational => TensorData::Rational(f.to_tensor::<Rat>()),
        FieldTag::Gf2 => TensorData::Gf2(f.to_tensor::<Gf2>()),
    }
}

//! CSV form of a measure:
//!
//! ```text
//! # group=zd:1 total_mass=1/1 truncation=exact
//! element,numerator,denominator
//! 010100,1,3
//! ```
//!
//! Rows are in canonical encoding order and fractions are reduced.

use std::io::{BufRead, Write};

use num_rational::BigRational;

use super::{FinSupMeasure, Truncation};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::rational::{parse_rational, RationalPair};
use crate::set::{kind_token, parse_kind};

const COLUMNS: &str = "element,numerator,denominator";

pub fn write_measure_csv<W: Write>(m: &FinSupMeasure, mut w: W) -> Result<()> {
    let flag = match m.truncation() {
        Truncation::Exact => "exact",
        Truncation::MassDropped => "mass_dropped",
    };
    writeln!(
        w,
        "# group={} total_mass={} truncation={flag}",
        kind_token(m.kind()),
        m.total_mass()
    )?;
    writeln!(w, "{COLUMNS}")?;
    for (g, q) in m.sorted_masses() {
        let p = RationalPair::from(&q);
        writeln!(w, "{},{},{}", g.encode_hex(), p.num, p.den)?;
    }
    Ok(())
}

pub fn read_measure_csv<R: BufRead>(r: R) -> Result<FinSupMeasure> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty measure file".into()))??;
    let body = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("missing header".into()))?;
    let (mut kind, mut total, mut trunc) = (None, None, None);
    for tok in body.split_whitespace() {
        match tok.split_once('=') {
            Some(("group", v)) => kind = Some(parse_kind(v)?),
            Some(("total_mass", v)) => total = Some(parse_rational(v)?),
            Some(("truncation", "exact")) => trunc = Some(Truncation::Exact),
            Some(("truncation", "mass_dropped")) => trunc = Some(Truncation::MassDropped),
            _ => return Err(Error::Parse(format!("unexpected header token {tok:?}"))),
        }
    }
    let kind = kind.ok_or_else(|| Error::Parse("header lacks group".into()))?;
    let total = total.ok_or_else(|| Error::Parse("header lacks total_mass".into()))?;
    let trunc = trunc.ok_or_else(|| Error::Parse("header lacks truncation".into()))?;
    match lines.next() {
        Some(Ok(l)) if l.trim() == COLUMNS => {}
        _ => return Err(Error::Parse(format!("expected column line {COLUMNS:?}"))),
    }
    let mut masses: Vec<(GroupElement, BigRational)> = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (Some(h), Some(n), Some(d), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("malformed row {line:?}")));
        };
        let q = BigRational::try_from(&RationalPair { num: n.trim().into(), den: d.trim().into() })?;
        if q <= BigRational::from_integer(0.into()) {
            return Err(Error::Parse(format!("non-positive mass in row {line:?}")));
        }
        masses.push((GroupElement::decode_hex(h.trim())?, q));
    }
    let count = masses.len();
    let mut m = FinSupMeasure::from_masses(kind, masses)?;
    if m.support_len() != count {
        return Err(Error::Parse("duplicate element rows".into()));
    }
    if m.total_mass() != total {
        return Err(Error::Parse(format!("rows sum to {}, header says {total}", m.total_mass())));
    }
    m.truncation = trunc;
    Ok(m)
}

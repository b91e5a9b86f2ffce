//! Text listing of a set: a header line naming the group and cardinality,
//! then one hex-encoded element per line in canonical order.
//!
//! ```text
//! # group=lamplighter cardinality=3
//! 030000
//! 03010100
//! 037f017f
//! ```

use std::io::{BufRead, Write};

use super::FiniteSubset;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind};

pub(crate) fn kind_token(kind: GroupKind) -> String {
    match kind {
        GroupKind::Zd { dim } => format!("zd:{dim}"),
        GroupKind::Heisenberg => "heisenberg".into(),
        GroupKind::Lamplighter => "lamplighter".into(),
    }
}

pub(crate) fn parse_kind(tok: &str) -> Result<GroupKind> {
    match tok {
        "heisenberg" => Ok(GroupKind::Heisenberg),
        "lamplighter" => Ok(GroupKind::Lamplighter),
        t => {
            let dim = t
                .strip_prefix("zd:")
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown group {t:?}")))?;
            Ok(GroupKind::Zd { dim })
        }
    }
}

pub fn write_set<W: Write>(set: &FiniteSubset, mut w: W) -> Result<()> {
    writeln!(
        w,
        "# group={} cardinality={}",
        kind_token(set.kind()),
        set.len()
    )?;
    for g in set.sorted() {
        writeln!(w, "{}", g.encode_hex())?;
    }
    Ok(())
}

pub fn read_set<R: BufRead>(r: R) -> Result<FiniteSubset> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty set listing".into()))??;
    let mut kind = None;
    let mut card = None;
    for tok in header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("missing header".into()))?
        .split_whitespace()
    {
        match tok.split_once('=') {
            Some(("group", v)) => kind = Some(parse_kind(v)?),
            Some(("cardinality", v)) => {
                card = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?)
            }
            _ => return Err(Error::Parse(format!("unexpected header token {tok:?}"))),
        }
    }
    let kind = kind.ok_or_else(|| Error::Parse("header lacks group".into()))?;
    let card = card.ok_or_else(|| Error::Parse("header lacks cardinality".into()))?;
    let mut set = FiniteSubset::empty(kind);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if !set.insert(GroupElement::decode_hex(&line)?)? {
            return Err(Error::Parse(format!("duplicate element {line}")));
        }
    }
    if set.len() != card {
        return Err(Error::Parse(format!(
            "header says {card} elements, listing has {}",
            set.len()
        )));
    }
    Ok(set)
}

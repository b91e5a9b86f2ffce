//! Canonical byte encoding of group elements.
//!
//! Layout: one tag byte (`0x01` Z^d, `0x02` Heisenberg, `0x03` lamplighter)
//! followed by the payload integers in LEB128 form:
//!
//! * Z^d: `uleb(d)`, then `d` × `sleb(coord)`
//! * Heisenberg: `sleb(a) sleb(b) sleb(c)`
//! * lamplighter: `sleb(pos) uleb(#lamps)`, then the lamps ascending as `sleb`
//!
//! The decoder rejects overlong varints, unsorted lamps and trailing bytes,
//! so every accepted byte string is the encoding of exactly one element.

use super::{Coords, GroupElement, GroupKind, Lamps};
use crate::error::{Error, Result};

pub fn write_uleb(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

pub fn write_sleb(out: &mut Vec<u8>, mut v: i64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        let done = (v == 0 && byte & 0x40 == 0) || (v == -1 && byte & 0x40 != 0);
        if done {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

pub fn read_uleb(bytes: &[u8], at: &mut usize) -> Result<u64> {
    let mut result: u64 = 0;
    let mut shift = 0u32;
    let start = *at;
    loop {
        let byte = *bytes
            .get(*at)
            .ok_or_else(|| Error::Decode("truncated varint".into()))?;
        *at += 1;
        if shift >= 64 || (shift == 63 && byte & 0x7e != 0) {
            return Err(Error::Decode("varint overflows 64 bits".into()));
        }
        result |= u64::from(byte & 0x7f) << shift;
        shift += 7;
        if byte & 0x80 == 0 {
            if byte == 0 && *at - start > 1 {
                return Err(Error::Decode("overlong varint".into()));
            }
            return Ok(result);
        }
    }
}

pub fn read_sleb(bytes: &[u8], at: &mut usize) -> Result<i64> {
    let start = *at;
    let mut result: i128 = 0;
    let mut shift = 0u32;
    let last;
    loop {
        let byte = *bytes
            .get(*at)
            .ok_or_else(|| Error::Decode("truncated varint".into()))?;
        *at += 1;
        if shift > 63 {
            return Err(Error::Decode("varint overflows 64 bits".into()));
        }
        result |= i128::from(byte & 0x7f) << shift;
        shift += 7;
        if byte & 0x80 == 0 {
            last = byte;
            break;
        }
    }
    if last & 0x40 != 0 {
        result |= -1i128 << shift;
    }
    let v = i64::try_from(result).map_err(|_| Error::Decode("varint overflows i64".into()))?;
    // re-encode to reject padded forms
    let mut canon = Vec::with_capacity(10);
    write_sleb(&mut canon, v);
    if canon[..] != bytes[start..*at] {
        return Err(Error::Decode("overlong varint".into()));
    }
    Ok(v)
}

pub(super) fn encode(g: &GroupElement) -> Vec<u8> {
    let mut out = Vec::with_capacity(16);
    out.push(g.kind().tag());
    match g {
        GroupElement::Zd(c) => {
            write_uleb(&mut out, c.len() as u64);
            for &x in c {
                write_sleb(&mut out, x);
            }
        }
        GroupElement::Heisenberg(h) => {
            for &x in h {
                write_sleb(&mut out, x);
            }
        }
        GroupElement::Lamplighter { pos, lamps } => {
            write_sleb(&mut out, *pos);
            write_uleb(&mut out, lamps.len() as u64);
            for &x in lamps {
                write_sleb(&mut out, x);
            }
        }
    }
    out
}

pub(super) fn decode(bytes: &[u8]) -> Result<GroupElement> {
    let (&tag, _) = bytes
        .split_first()
        .ok_or_else(|| Error::Decode("empty encoding".into()))?;
    let mut at = 1;
    let g = match tag {
        t if t == GroupKind::Zd { dim: 0 }.tag() => {
            let d = read_uleb(bytes, &mut at)?;
            if d > 64 {
                return Err(Error::Decode(format!("dimension {d} too large")));
            }
            let mut c = Coords::new();
            for _ in 0..d {
                c.push(read_sleb(bytes, &mut at)?);
            }
            GroupElement::Zd(c)
        }
        t if t == GroupKind::Heisenberg.tag() => {
            let a = read_sleb(bytes, &mut at)?;
            let b = read_sleb(bytes, &mut at)?;
            let c = read_sleb(bytes, &mut at)?;
            GroupElement::Heisenberg([a, b, c])
        }
        t if t == GroupKind::Lamplighter.tag() => {
            let pos = read_sleb(bytes, &mut at)?;
            let n = read_uleb(bytes, &mut at)?;
            if n as usize > bytes.len() {
                return Err(Error::Decode("lamp count exceeds payload".into()));
            }
            let mut lamps = Lamps::with_capacity(n as usize);
            for _ in 0..n {
                let x = read_sleb(bytes, &mut at)?;
                if lamps.last().is_some_and(|&p| p >= x) {
                    return Err(Error::Decode("lamps not strictly increasing".into()));
                }
                lamps.push(x);
            }
            GroupElement::Lamplighter { pos, lamps }
        }
        t => return Err(Error::Decode(format!("unknown group tag {t:#04x}"))),
    };
    if at != bytes.len() {
        return Err(Error::Decode("trailing bytes".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_bytes() {
        assert_eq!(GroupElement::z1(-1).encode(), vec![0x01, 0x01, 0x7f]);
        assert_eq!(
            GroupElement::lamplighter(2, &[0, 1]).encode(),
            vec![0x03, 0x02, 0x02, 0x00, 0x01]
        );
        assert_eq!(GroupElement::heisenberg(64, 0, -65).encode(), vec![0x02, 0xc0, 0x00, 0x00, 0xbf, 0x7f]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(GroupElement::decode(&[]).is_err());
        assert!(GroupElement::decode(&[0x09]).is_err());
        // padded zero
        assert!(GroupElement::decode(&[0x01, 0x01, 0x80, 0x00]).is_err());
        // lamps out of order
        assert!(GroupElement::decode(&[0x03, 0x00, 0x02, 0x01, 0x00]).is_err());
        // trailing byte
        assert!(GroupElement::decode(&[0x02, 0x00, 0x00, 0x00, 0x00]).is_err());
    }

    fn arb_element() -> impl Strategy<Value = GroupElement> {
        prop_oneof![
            prop::collection::vec(any::<i64>(), 1..4).prop_map(|v| GroupElement::z(&v)),
            (any::<i64>(), any::<i64>(), any::<i64>())
                .prop_map(|(a, b, c)| GroupElement::heisenberg(a, b, c)),
            (any::<i64>(), prop::collection::btree_set(any::<i64>(), 0..8)).prop_map(|(p, s)| {
                GroupElement::lamplighter(p, &s.into_iter().collect::<Vec<_>>())
            }),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(g in arb_element()) {
            let bytes = g.encode();
            prop_assert_eq!(GroupElement::decode(&bytes).unwrap(), g.clone());
            prop_assert_eq!(GroupElement::decode_hex(&g.encode_hex()).unwrap(), g);
        }

        #[test]
        fn encoding_is_injective(a in arb_element(), b in arb_element()) {
            prop_assert_eq!(a == b, a.encode() == b.encode());
        }

        #[test]
        fn sleb_round_trip(v in any::<i64>()) {
            let mut buf = Vec::new();
            write_sleb(&mut buf, v);
            let mut at = 0;
            prop_assert_eq!(read_sleb(&buf, &mut at).unwrap(), v);
            prop_assert_eq!(at, buf.len());
        }
    }
}

use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupKind};
use crate::error::{Error, Result};
use crate::set::FiniteSubset;

/// A group together with a finite symmetric generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    kind: GroupKind,
    generators: Vec<GroupElement>,
}

/// Serialized form: kind plus optional explicit generators (hex encodings).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescriptorSpec {
    #[serde(flatten)]
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

impl GroupDescriptor {
    /// Validates that every generator belongs to `kind` and that the list is
    /// closed under inversion.
    pub fn new(kind: GroupKind, generators: Vec<GroupElement>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("generating set is empty"));
        }
        for g in &generators {
            if g.kind() != kind {
                return Err(Error::GroupMismatch {
                    left: kind,
                    right: g.kind(),
                });
            }
        }
        for g in &generators {
            let gi = g.inv()?;
            if !generators.contains(&gi) {
                return Err(Error::invalid(format!(
                    "generating set is not symmetric: {g} has no inverse {gi}"
                )));
            }
        }
        Ok(GroupDescriptor { kind, generators })
    }

    /// The standard generators: `±e_i` for Z^d, `x^{±1}, y^{±1}` for
    /// Heisenberg, and `(±1, ∅), (0, {0})` for the lamplighter.
    pub fn standard(kind: GroupKind) -> Self {
        let generators = match kind {
            GroupKind::Zd { dim } => {
                let mut gens = Vec::with_capacity(2 * dim);
                for i in 0..dim {
                    for s in [1, -1] {
                        let mut v = vec![0; dim];
                        v[i] = s;
                        gens.push(GroupElement::z(&v));
                    }
                }
                gens
            }
            GroupKind::Heisenberg => vec![
                GroupElement::heisenberg(1, 0, 0),
                GroupElement::heisenberg(-1, 0, 0),
                GroupElement::heisenberg(0, 1, 0),
                GroupElement::heisenberg(0, -1, 0),
            ],
            GroupKind::Lamplighter => vec![
                GroupElement::lamplighter(1, &[]),
                GroupElement::lamplighter(-1, &[]),
                GroupElement::lamplighter(0, &[0]),
            ],
        };
        GroupDescriptor { kind, generators }
    }

    pub fn from_spec(spec: &DescriptorSpec) -> Result<Self> {
        match &spec.generators {
            None => Ok(Self::standard(spec.kind)),
            Some(hexes) => {
                let gens = hexes
                    .iter()
                    .map(|h| GroupElement::decode_hex(h))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(spec.kind, gens)
            }
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn identity(&self) -> GroupElement {
        self.kind.identity()
    }
}

/// All products of at most `radius` generators, the identity included,
/// built breadth-first. Fails once the ball would exceed `cap` elements.
pub fn word_ball(desc: &GroupDescriptor, radius: u64, cap: usize) -> Result<FiniteSubset> {
    let mut ball = FiniteSubset::empty(desc.kind());
    ball.insert(desc.identity())?;
    let mut frontier = vec![desc.identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in desc.generators() {
                let h = g.mul(s)?;
                if !ball.contains(&h) {
                    if ball.len() >= cap {
                        return Err(Error::ResourceLimit {
                            what: "word ball",
                            cap,
                        });
                    }
                    ball.insert(h.clone())?;
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(ball)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_ball() {
        let d = GroupDescriptor::standard(GroupKind::Zd { dim: 1 });
        let b = word_ball(&d, 2, 100).unwrap();
        assert_eq!(b.len(), 5);
        for x in -2..=2 {
            assert!(b.contains(&GroupElement::z1(x)));
        }
        assert_eq!(word_ball(&d, 0, 100).unwrap().len(), 1);
    }

    #[test]
    fn z2_ball_is_a_diamond() {
        let d = GroupDescriptor::standard(GroupKind::Zd { dim: 2 });
        // 2r^2 + 2r + 1
        assert_eq!(word_ball(&d, 3, 1000).unwrap().len(), 25);
    }

    #[test]
    fn cap_is_enforced() {
        let d = GroupDescriptor::standard(GroupKind::Lamplighter);
        let err = word_ball(&d, 10, 50).unwrap_err();
        assert_eq!(err, Error::ResourceLimit { what: "word ball", cap: 50 });
    }

    #[test]
    fn asymmetric_generators_rejected() {
        let r = GroupDescriptor::new(GroupKind::Zd { dim: 1 }, vec![GroupElement::z1(1)]);
        assert!(r.is_err());
        let r = GroupDescriptor::new(
            GroupKind::Zd { dim: 1 },
            vec![GroupElement::z1(1), GroupElement::z1(-1)],
        );
        assert!(r.is_ok());
    }
}

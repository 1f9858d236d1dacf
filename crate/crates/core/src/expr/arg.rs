//! Argument-level types of the pure-correlator data model.
//!
//! A pure correlator argument is a parallel vector field: a named slot or a
//! contracted basis direction (a "dummy"), decorated with a descendant-level
//! shift counter (the number of `tau+` applications).

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a contracted index. Within one monomial a dummy id must
/// occur exactly twice, once raised and once lowered.
pub type DummyId = u32;

/// Slot-name family. `W`-slots and `V`-slots are both generic parallel
/// vector fields; the two families exist only so expressions read like the
/// identities they transcribe.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    W,
    V,
}

/// A named slot such as `W`, `W2` or `V1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SlotName {
    pub family: Family,
    pub index: Option<u32>,
}

impl SlotName {
    pub fn w(i: u32) -> Self {
        SlotName { family: Family::W, index: Some(i) }
    }

    pub fn v(i: u32) -> Self {
        SlotName { family: Family::V, index: Some(i) }
    }

    pub fn bare_w() -> Self {
        SlotName { family: Family::W, index: None }
    }

    pub fn bare_v() -> Self {
        SlotName { family: Family::V, index: None }
    }

    /// Parses `W`, `W12`, `V`, `V3`. Returns `None` for anything else.
    pub fn parse(s: &str) -> Option<Self> {
        let mut chars = s.chars();
        let family = match chars.next()? {
            'W' => Family::W,
            'V' => Family::V,
            _ => return None,
        };
        let rest = chars.as_str();
        if rest.is_empty() {
            return Some(SlotName { family, index: None });
        }
        if !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        rest.parse().ok().map(|i| SlotName { family, index: Some(i) })
    }
}

impl fmt::Display for SlotName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::W => write!(f, "W")?,
            Family::V => write!(f, "V")?,
        }
        if let Some(i) = self.index {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Raised or lowered position of a contracted index. Contraction pairs one
/// raised with one lowered occurrence; because the pairing form is symmetric
/// the orientation of a pair carries no information and canonicalization is
/// free to flip it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Variance {
    Up,
    Down,
}

impl Variance {
    pub fn flip(self) -> Self {
        match self {
            Variance::Up => Variance::Down,
            Variance::Down => Variance::Up,
        }
    }
}

/// Base of a correlator argument.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Base {
    Slot(SlotName),
    Dummy(DummyId, Variance),
}

/// A correlator argument: `tau+^shift (base)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VArg {
    pub shift: u32,
    pub base: Base,
}

impl VArg {
    pub fn slot(name: SlotName) -> Self {
        VArg { shift: 0, base: Base::Slot(name) }
    }

    pub fn dummy(id: DummyId, var: Variance) -> Self {
        VArg { shift: 0, base: Base::Dummy(id, var) }
    }

    pub fn shifted(mut self, by: u32) -> Self {
        self.shift += by;
        self
    }

    pub fn dummy_id(&self) -> Option<(DummyId, Variance)> {
        match self.base {
            Base::Dummy(id, v) => Some((id, v)),
            Base::Slot(_) => None,
        }
    }
}

/// A single k-point function factor: genus plus a multiset of arguments
/// (kept sorted in canonical form).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Correlator {
    pub genus: u32,
    pub args: Vec<VArg>,
}

impl Correlator {
    pub fn new(genus: u32, mut args: Vec<VArg>) -> Self {
        args.sort();
        Correlator { genus, args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Total shift carried by the arguments.
    pub fn total_shift(&self) -> u32 {
        self.args.iter().map(|a| a.shift).sum()
    }
}

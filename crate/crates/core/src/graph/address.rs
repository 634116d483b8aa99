use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two recursively generated graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Laakso,
    Diamond,
}

impl Family {
    /// Branch labels of one recursion step, in construction order.
    pub fn branch_labels(self) -> &'static [BranchLabel] {
        match self {
            Family::Laakso => &[
                BranchLabel::Y,
                BranchLabel::C,
                BranchLabel::D,
                BranchLabel::E,
                BranchLabel::F,
                BranchLabel::Z,
            ],
            Family::Diamond => &[
                BranchLabel::P1a,
                BranchLabel::P1b,
                BranchLabel::P2a,
                BranchLabel::P2b,
            ],
        }
    }

    /// Anchor the embeddings measure depth from (top pole).
    pub fn source_anchor(self) -> Anchor {
        match self {
            Family::Laakso => Anchor::A,
            Family::Diamond => Anchor::S,
        }
    }

    /// Bottom pole.
    pub fn sink_anchor(self) -> Anchor {
        match self {
            Family::Laakso => Anchor::U,
            Family::Diamond => Anchor::T,
        }
    }

    /// Anchors of a copy of the given level, in canonical order.
    pub fn anchor_roles(self, level: u32) -> &'static [Anchor] {
        match (self, level) {
            (Family::Laakso, 0) => &[Anchor::A, Anchor::U],
            (Family::Laakso, _) => &[
                Anchor::A,
                Anchor::T,
                Anchor::L,
                Anchor::R,
                Anchor::B,
                Anchor::U,
            ],
            (Family::Diamond, 0) => &[Anchor::S, Anchor::T],
            (Family::Diamond, _) => &[Anchor::S, Anchor::P, Anchor::Q, Anchor::T],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Laakso => write!(f, "laakso"),
            Family::Diamond => write!(f, "diamond"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laakso" => Ok(Family::Laakso),
            "diamond" => Ok(Family::Diamond),
            other => Err(Error::Validation(format!("unknown family `{other}`"))),
        }
    }
}

/// One copy of the previous-level graph inside a recursion step.
///
/// Laakso labels follow the six copies of the level-1 gadget: `Y` spans
/// A-T, `C` spans T-L, `D` spans T-R, `E` spans L-B, `F` spans R-B, `Z`
/// spans B-U. Diamond labels are the two parallel two-edge paths of the
/// quadrilateral: `P1a` spans S-P, `P1b` spans P-T, `P2a` spans S-Q,
/// `P2b` spans Q-T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BranchLabel {
    Y,
    C,
    D,
    E,
    F,
    Z,
    P1a,
    P1b,
    P2a,
    P2b,
}

impl BranchLabel {
    pub fn family(self) -> Family {
        match self {
            BranchLabel::Y
            | BranchLabel::C
            | BranchLabel::D
            | BranchLabel::E
            | BranchLabel::F
            | BranchLabel::Z => Family::Laakso,
            _ => Family::Diamond,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BranchLabel::Y => "Y",
            BranchLabel::C => "C",
            BranchLabel::D => "D",
            BranchLabel::E => "E",
            BranchLabel::F => "F",
            BranchLabel::Z => "Z",
            BranchLabel::P1a => "P1a",
            BranchLabel::P1b => "P1b",
            BranchLabel::P2a => "P2a",
            BranchLabel::P2b => "P2b",
        }
    }
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BranchLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Y" => BranchLabel::Y,
            "C" => BranchLabel::C,
            "D" => BranchLabel::D,
            "E" => BranchLabel::E,
            "F" => BranchLabel::F,
            "Z" => BranchLabel::Z,
            "P1a" => BranchLabel::P1a,
            "P1b" => BranchLabel::P1b,
            "P2a" => BranchLabel::P2a,
            "P2b" => BranchLabel::P2b,
            other => return Err(Error::Validation(format!("unknown branch label `{other}`"))),
        })
    }
}

/// Anchor role within a copy. Laakso copies use A, T, L, R, B, U (top to
/// bottom); diamond copies use S and T for the poles and P, Q for the two
/// midpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Anchor {
    A,
    T,
    L,
    R,
    B,
    U,
    S,
    P,
    Q,
}

impl Anchor {
    pub fn as_str(self) -> &'static str {
        match self {
            Anchor::A => "A",
            Anchor::T => "T",
            Anchor::L => "L",
            Anchor::R => "R",
            Anchor::B => "B",
            Anchor::U => "U",
            Anchor::S => "S",
            Anchor::P => "P",
            Anchor::Q => "Q",
        }
    }

    fn belongs_to(self, family: Family) -> bool {
        match family {
            Family::Laakso => matches!(
                self,
                Anchor::A | Anchor::T | Anchor::L | Anchor::R | Anchor::B | Anchor::U
            ),
            Family::Diamond => matches!(self, Anchor::S | Anchor::P | Anchor::Q | Anchor::T),
        }
    }

    /// Poles are glued to the enclosing copy; the remaining anchors live
    /// strictly inside their copy.
    fn is_pole(self, family: Family) -> bool {
        match family {
            Family::Laakso => matches!(self, Anchor::A | Anchor::U),
            Family::Diamond => matches!(self, Anchor::S | Anchor::T),
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Anchor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Anchor::A,
            "T" => Anchor::T,
            "L" => Anchor::L,
            "R" => Anchor::R,
            "B" => Anchor::B,
            "U" => Anchor::U,
            "S" => Anchor::S,
            "P" => Anchor::P,
            "Q" => Anchor::Q,
            other => return Err(Error::Validation(format!("unknown anchor `{other}`"))),
        })
    }
}

/// Hierarchical vertex address: a descent path through nested copies plus
/// an anchor role in the innermost copy.
///
/// Glued vertices have several addresses; the canonical one is obtained by
/// popping the path while the terminal is a pole of its copy (the unique
/// shortest address, which is also lexicographically least in branch
/// order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexAddress {
    pub path: Vec<BranchLabel>,
    pub terminal: Anchor,
}

impl VertexAddress {
    pub fn new(path: Vec<BranchLabel>, terminal: Anchor) -> Self {
        VertexAddress { path, terminal }
    }

    pub fn anchor(terminal: Anchor) -> Self {
        VertexAddress { path: Vec::new(), terminal }
    }

    /// Check well-formedness against a family and level without resolving.
    pub fn validate(&self, family: Family, level: u32) -> Result<()> {
        for label in &self.path {
            if label.family() != family {
                return Err(Error::Validation(format!(
                    "branch label `{label}` does not belong to the {family} family"
                )));
            }
        }
        if self.path.len() as u32 > level {
            return Err(Error::Validation(format!(
                "address path length {} exceeds level {level}",
                self.path.len()
            )));
        }
        if !self.terminal.belongs_to(family) {
            return Err(Error::Validation(format!(
                "anchor `{}` does not belong to the {family} family",
                self.terminal
            )));
        }
        let innermost_level = level - self.path.len() as u32;
        if innermost_level == 0 && !self.terminal.is_pole(family) {
            return Err(Error::Validation(format!(
                "anchor `{}` does not exist in a level-0 copy",
                self.terminal
            )));
        }
        Ok(())
    }

    /// Rewrite to the canonical alias. Idempotent.
    pub fn canonicalize(&self, family: Family) -> VertexAddress {
        let mut path = self.path.clone();
        let mut terminal = self.terminal;
        while terminal.is_pole(family) {
            let Some(last) = path.pop() else { break };
            terminal = glue(last, terminal);
        }
        VertexAddress { path, terminal }
    }
}

/// Anchor of the enclosing copy that a branch pole is glued to.
///
/// For Laakso: T = Y.U = C.A = D.A, L = C.U = E.A, R = D.U = F.A,
/// B = E.U = F.U = Z.A, and the poles pass through (A = Y.A, U = Z.U).
/// For diamond: P = P1a.T = P1b.S, Q = P2a.T = P2b.S, S = P1a.S = P2a.S,
/// T = P1b.T = P2b.T.
fn glue(branch: BranchLabel, pole: Anchor) -> Anchor {
    use Anchor::*;
    use BranchLabel::*;
    match (branch, pole) {
        (Y, A) => A,
        (C, A) | (D, A) => T,
        (E, A) => L,
        (F, A) => R,
        (Z, A) => B,
        (Y, U) => T,
        (C, U) => L,
        (D, U) => R,
        (E, U) | (F, U) => B,
        (Z, U) => U,
        (P1a, S) | (P2a, S) => S,
        (P1b, S) | (P1a, T) => P,
        (P2b, S) | (P2a, T) => Q,
        (P1b, T) | (P2b, T) => T,
        _ => unreachable!("pole/branch families always match"),
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for label in &self.path {
            write!(f, "{label}.")?;
        }
        write!(f, "{}", self.terminal)
    }
}

impl FromStr for VertexAddress {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut parts: Vec<&str> = s.split('.').collect();
        let terminal = parts
            .pop()
            .filter(|t| !t.is_empty())
            .ok_or_else(|| Error::Validation(format!("empty address `{s}`")))?
            .parse()?;
        let path = parts
            .into_iter()
            .map(BranchLabel::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexAddress { path, terminal })
    }
}

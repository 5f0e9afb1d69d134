//! Three-valued certified outcomes of strict inequalities.

use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::interval::{Interval, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Holds,
    Fails,
    Undecided,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "holds" => Ok(Outcome::Holds),
            "fails" => Ok(Outcome::Fails),
            "undecided" => Ok(Outcome::Undecided),
            _ => Err(Error::Parse(alloc::format!("unknown verdict {s:?}"))),
        }
    }
}

/// Outcome of `lhs < rhs`, with the enclosure of `rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub gap: Interval,
    pub precision_used: u32,
}

impl Verdict {
    /// Holds iff `hi(lhs) < lo(rhs)`, fails iff `lo(lhs) > hi(rhs)`. Touching
    /// or overlapping enclosures stay undecided.
    pub fn compare(lhs: &Interval, rhs: &Interval, prec: Precision) -> Verdict {
        let outcome = if lhs.hi() < rhs.lo() {
            Outcome::Holds
        } else if lhs.lo() > rhs.hi() {
            Outcome::Fails
        } else {
            Outcome::Undecided
        };
        Verdict {
            outcome,
            gap: rhs.sub(lhs, prec),
            precision_used: prec.bits(),
        }
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }
}

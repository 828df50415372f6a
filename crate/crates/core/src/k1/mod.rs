//! "Exactly one color in the range?" testers.
//!
//! [`ExactK1Dominance`] answers exactly for 3D dominance by aggregating the
//! minimum and maximum of a random color rank over the range.
//! [`MonteCarloK1Structure`] samples half of the colors, decomposes the
//! region their ranges leave uncovered into cells with conflict lists, and
//! answers `Yes` only after verifying the single candidate color.

mod cells;
mod emptiness;
mod exact;
mod experiment;
mod mc;

pub use emptiness::EmptinessIndex;
pub use exact::{build_exact_k1_dominance, ExactK1Dominance};
pub use experiment::{conflict_experiment, k1_experiment, yes_rate_experiment, ConflictSummary, K1Config, K1Row};
pub use mc::{build_mc_k1, ColorIndexes, McAnswer, MonteCarloK1Structure, DEFAULT_CAP, DEFAULT_WINDOW};

use std::fmt;
use std::str::FromStr;

use crate::data::{Color, RangeQuery};
use crate::error::{Error, Result};

/// Range family a tester is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RangeFamily {
    Dominance3,
    Halfplane2,
    Halfspace3,
}

impl RangeFamily {
    pub fn dim(self) -> usize {
        match self {
            RangeFamily::Halfplane2 => 2,
            _ => 3,
        }
    }

    pub fn matches(self, q: &RangeQuery) -> bool {
        matches!(
            (self, q),
            (RangeFamily::Dominance3, RangeQuery::Dominance3(_))
                | (RangeFamily::Halfplane2, RangeQuery::Halfplane2(_))
                | (RangeFamily::Halfspace3, RangeQuery::Halfspace3(_))
        )
    }
}

impl FromStr for RangeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dominance" | "dominance3" => Ok(RangeFamily::Dominance3),
            "halfplane" | "halfplane2" => Ok(RangeFamily::Halfplane2),
            "halfspace" | "halfspace3" => Ok(RangeFamily::Halfspace3),
            _ => Err(Error::BadConfig(format!("unknown range family {s:?}"))),
        }
    }
}

impl fmt::Display for RangeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RangeFamily::Dominance3 => "dominance",
            RangeFamily::Halfplane2 => "halfplane",
            RangeFamily::Halfspace3 => "halfspace",
        })
    }
}

/// Answer of an exact k = 1 test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K1Result {
    Empty,
    /// The only color, with a point of it inside the range.
    Single(Color, usize),
    Multi,
}

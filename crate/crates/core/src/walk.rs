//! Path families and the statistics tracked on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The four path families: unconstrained or nonnegative, ending anywhere or at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkType {
    Walk,
    Bridge,
    Meander,
    Excursion,
}

impl WalkType {
    pub const ALL: [WalkType; 4] = [
        WalkType::Walk,
        WalkType::Bridge,
        WalkType::Meander,
        WalkType::Excursion,
    ];

    /// Whether the path must stay at nonnegative altitude.
    pub fn is_nonnegative(self) -> bool {
        matches!(self, WalkType::Meander | WalkType::Excursion)
    }

    /// Whether the path must end at altitude zero.
    pub fn ends_at_zero(self) -> bool {
        matches!(self, WalkType::Bridge | WalkType::Excursion)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WalkType::Walk => "walk",
            WalkType::Bridge => "bridge",
            WalkType::Meander => "meander",
            WalkType::Excursion => "excursion",
        }
    }
}

impl fmt::Display for WalkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for WalkType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "walk" => Ok(WalkType::Walk),
            "bridge" => Ok(WalkType::Bridge),
            "meander" => Ok(WalkType::Meander),
            "excursion" => Ok(WalkType::Excursion),
            other => Err(Error::InvalidArgument(format!("unknown walk type {other:?}"))),
        }
    }
}

/// Path statistics at altitude zero.
///
/// With altitudes `y_0 = 0, ..., y_n`:
/// * touches: `#{0 < t < n : y_t = 0}`
/// * returns: `#{0 < t <= n : y_t = 0}`
/// * crossings: steps going from strictly positive to strictly negative altitude or back
/// * local time: touches + crossings
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Crossings,
    Touches,
    Returns,
    LocalTime,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::Crossings,
        Statistic::Touches,
        Statistic::Returns,
        Statistic::LocalTime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Statistic::Crossings => "crossings",
            Statistic::Touches => "touches",
            Statistic::Returns => "returns",
            Statistic::LocalTime => "local_time",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "crossings" => Ok(Statistic::Crossings),
            "touches" => Ok(Statistic::Touches),
            "returns" => Ok(Statistic::Returns),
            "local_time" | "localtime" => Ok(Statistic::LocalTime),
            other => Err(Error::InvalidArgument(format!("unknown statistic {other:?}"))),
        }
    }
}

//! Rule state machines for Motorsport, Game of the Goose and Parcheesi.
//!
//! Each game is played on a fixed, unbranching route per team. A turn is
//! `roll -> answer -> (choose marker) -> move`, with the answer step gated by
//! the session layer. Everything here is deterministic given the seed passed
//! to [`GameState::new`].

mod event;
mod route;
mod rules;
mod state;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use event::{GameEvent, PassReason, SkipReason};
pub use route::{EffectTag, Position, RouteSpec};
pub use rules::{bounce_target, MoveCandidate};
pub use state::{DiceState, GameError, GameState, MarkerState, TeamState, TurnPhase};

/// Minimum number of teams in a match.
pub const MIN_TEAMS: usize = 2;
/// Maximum number of teams (and seats shown by a client).
pub const MAX_TEAMS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Motorsport,
    Goose,
    Parcheesi,
}

impl GameKind {
    pub const ALL: [GameKind; 3] = [GameKind::Motorsport, GameKind::Goose, GameKind::Parcheesi];

    pub fn as_str(self) -> &'static str {
        match self {
            GameKind::Motorsport => "motorsport",
            GameKind::Goose => "goose",
            GameKind::Parcheesi => "parcheesi",
        }
    }

    /// Markers per team for this game in the given mode.
    pub fn marker_count(self, mode: SpeedMode) -> usize {
        match (self, mode) {
            (GameKind::Parcheesi, SpeedMode::Classic) => 4,
            (GameKind::Parcheesi, SpeedMode::Fast) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "motorsport" => Ok(GameKind::Motorsport),
            "goose" => Ok(GameKind::Goose),
            "parcheesi" => Ok(GameKind::Parcheesi),
            other => Err(format!("unknown game `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedMode {
    Classic,
    Fast,
}

impl SpeedMode {
    pub const ALL: [SpeedMode; 2] = [SpeedMode::Classic, SpeedMode::Fast];

    pub fn as_str(self) -> &'static str {
        match self {
            SpeedMode::Classic => "classic",
            SpeedMode::Fast => "fast",
        }
    }

    pub fn dice(self) -> DiceRange {
        match self {
            SpeedMode::Classic => DiceRange { lo: 1, hi: 6 },
            SpeedMode::Fast => DiceRange { lo: 4, hi: 9 },
        }
    }

    /// Whether landing on the final position requires the exact count.
    pub fn exact_finish(self) -> bool {
        self == SpeedMode::Classic
    }
}

impl fmt::Display for SpeedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpeedMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "classic" => Ok(SpeedMode::Classic),
            "fast" => Ok(SpeedMode::Fast),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Inclusive bounds of a die.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiceRange {
    pub lo: u32,
    pub hi: u32,
}

impl DiceRange {
    pub fn contains(&self, value: u32) -> bool {
        (self.lo..=self.hi).contains(&value)
    }

    pub fn values(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(self.lo..=self.hi)
    }
}

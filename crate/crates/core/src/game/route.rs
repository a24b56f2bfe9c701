use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::GameKind;

pub(crate) const MOTORSPORT_LENGTH: u32 = 40;
pub(crate) const GOOSE_LENGTH: u32 = 63;
pub(crate) const GOOSE_RESTART: u32 = 1;
pub(crate) const INN_TURNS: u32 = 1;
pub(crate) const WELL_TURNS: u32 = 3;
pub(crate) const PRISON_TURNS: u32 = 2;

pub(crate) const RING_CELLS: u32 = 68;
/// Route coordinates a Parcheesi marker spends on the shared ring (0..=63).
pub(crate) const RING_STEPS: u32 = 64;
pub(crate) const HOME_COLUMN: u32 = 7;
pub(crate) const ENTRY_ROLL: u32 = 5;
pub(crate) const PARCHEESI_ENTRIES: [u32; 4] = [5, 22, 39, 56];
pub(crate) const PARCHEESI_SAFE: [u32; 12] = [5, 12, 17, 22, 29, 34, 39, 46, 51, 56, 63, 68];

const GEESE: [u32; 13] = [5, 9, 14, 18, 23, 27, 32, 36, 41, 45, 50, 54, 59];

/// Effect attached to a Goose board square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectTag {
    /// Move again by the value just rolled.
    GooseAdvance,
    BridgeTo(u32),
    InnSkip(u32),
    /// Held until another marker arrives or three own turns pass.
    WellHold,
    MazeTo(u32),
    /// Held until another marker arrives or two own turns pass.
    PrisonHold,
    /// Back to square one.
    DeathToStart,
}

impl EffectTag {
    pub(crate) fn hold_turns(self) -> Option<u32> {
        match self {
            EffectTag::InnSkip(turns) => Some(turns),
            EffectTag::WellHold => Some(WELL_TURNS),
            EffectTag::PrisonHold => Some(PRISON_TURNS),
            _ => None,
        }
    }

    /// Hold effects that end early when another marker lands on the cell.
    pub(crate) fn released_by_arrival(self) -> bool {
        matches!(self, EffectTag::WellHold | EffectTag::PrisonHold)
    }
}

/// Where a marker is, measured along its owner's route.
///
/// `Nest`, `HomeColumn` and `Home` only occur in Parcheesi. For Parcheesi,
/// `Track(i)` counts steps from the owner's entry cell, not ring cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Nest,
    Track(u32),
    HomeColumn(u32),
    Home,
}

/// Board geometry for one game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteSpec {
    pub kind: GameKind,
    /// Final track index for linear games; ring size for Parcheesi.
    pub track_length: u32,
    /// Ring cell where each seat's markers enter (Parcheesi only).
    pub entry_cells: Vec<u32>,
    pub special_cells: BTreeMap<u32, EffectTag>,
    pub safe_cells: BTreeSet<u32>,
    pub home_column: u32,
}

impl RouteSpec {
    pub fn for_kind(kind: GameKind) -> Self {
        match kind {
            GameKind::Motorsport => RouteSpec {
                kind,
                track_length: MOTORSPORT_LENGTH,
                entry_cells: Vec::new(),
                special_cells: BTreeMap::new(),
                safe_cells: BTreeSet::new(),
                home_column: 0,
            },
            GameKind::Goose => {
                let mut special: BTreeMap<u32, EffectTag> =
                    GEESE.iter().map(|&c| (c, EffectTag::GooseAdvance)).collect();
                special.insert(6, EffectTag::BridgeTo(12));
                special.insert(19, EffectTag::InnSkip(INN_TURNS));
                special.insert(31, EffectTag::WellHold);
                special.insert(42, EffectTag::MazeTo(30));
                special.insert(52, EffectTag::PrisonHold);
                special.insert(58, EffectTag::DeathToStart);
                RouteSpec {
                    kind,
                    track_length: GOOSE_LENGTH,
                    entry_cells: Vec::new(),
                    special_cells: special,
                    safe_cells: BTreeSet::new(),
                    home_column: 0,
                }
            }
            GameKind::Parcheesi => RouteSpec {
                kind,
                track_length: RING_CELLS,
                entry_cells: PARCHEESI_ENTRIES.to_vec(),
                special_cells: BTreeMap::new(),
                safe_cells: PARCHEESI_SAFE.iter().copied().collect(),
                home_column: HOME_COLUMN,
            },
        }
    }

    pub fn start_position(&self) -> Position {
        match self.kind {
            GameKind::Parcheesi => Position::Nest,
            _ => Position::Track(0),
        }
    }

    pub fn final_position(&self) -> Position {
        match self.kind {
            GameKind::Parcheesi => Position::Home,
            _ => Position::Track(self.track_length),
        }
    }

    pub fn effect_at(&self, index: u32) -> Option<EffectTag> {
        self.special_cells.get(&index).copied()
    }

    pub fn is_valid(&self, pos: Position) -> bool {
        match (self.kind, pos) {
            (GameKind::Parcheesi, Position::Nest | Position::Home) => true,
            (GameKind::Parcheesi, Position::Track(i)) => i < RING_STEPS,
            (GameKind::Parcheesi, Position::HomeColumn(j)) => (1..=self.home_column).contains(&j),
            (_, Position::Track(i)) => i <= self.track_length,
            _ => false,
        }
    }

    /// Ring cell (1-based) for a Parcheesi track coordinate of `seat`.
    pub fn ring_cell(&self, seat: usize, step: u32) -> u32 {
        let entry = self.entry_cells[seat];
        (entry - 1 + step) % self.track_length + 1
    }

    pub fn is_safe(&self, cell: u32) -> bool {
        self.safe_cells.contains(&cell)
    }

    /// Steps from the Parcheesi entry cell to `Home`.
    pub(crate) fn parcheesi_goal(&self) -> u32 {
        RING_STEPS - 1 + self.home_column + 1
    }

    pub(crate) fn progress(&self, pos: Position) -> Option<u32> {
        match pos {
            Position::Nest => None,
            Position::Track(i) => Some(i),
            Position::HomeColumn(j) => Some(RING_STEPS - 1 + j),
            Position::Home => Some(self.parcheesi_goal()),
        }
    }

    pub(crate) fn position_at_progress(&self, p: u32) -> Position {
        if p < RING_STEPS {
            Position::Track(p)
        } else if p < self.parcheesi_goal() {
            Position::HomeColumn(p - (RING_STEPS - 1))
        } else {
            Position::Home
        }
    }
}

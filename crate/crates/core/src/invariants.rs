//! Checks that must hold in every reachable game state.

use std::fmt;

use crate::game::{GameEvent, GameKind, GameState, Position, TurnPhase};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Conservation { team: usize, markers: usize },
    InvalidPosition { team: usize, marker: usize, position: Position },
    HoldOffCell { team: usize, marker: usize },
    DiceLock,
    DiceOutOfRange(u32),
    MixedCell(u32),
    OverfullCell(String),
    WinnerPhase,
    UngatedMove { team: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Conservation { team, markers } => write!(f, "team {team} has {markers} markers"),
            Violation::InvalidPosition { team, marker, position } => {
                write!(f, "team {team} marker {marker} at invalid {position:?}")
            }
            Violation::HoldOffCell { team, marker } => write!(f, "team {team} marker {marker} held off a hold cell"),
            Violation::DiceLock => f.write_str("dice lock disagrees with phase"),
            Violation::DiceOutOfRange(v) => write!(f, "die shows {v}"),
            Violation::MixedCell(c) => write!(f, "two teams share unsafe ring cell {c}"),
            Violation::OverfullCell(c) => write!(f, "more than two markers on {c}"),
            Violation::WinnerPhase => f.write_str("winner and game-over phase disagree"),
            Violation::UngatedMove { team } => write!(f, "team {team} moved without a correct answer"),
        }
    }
}

/// Structural invariants of a single state.
pub fn check_state(state: &GameState) -> Vec<Violation> {
    let mut out = Vec::new();
    let route = &state.route;
    let expected = state.kind.marker_count(state.mode);
    for team in &state.teams {
        if team.markers.len() != expected || team.marker_count != expected {
            out.push(Violation::Conservation { team: team.team_index, markers: team.markers.len() });
        }
        for m in &team.markers {
            if !route.is_valid(m.position) {
                out.push(Violation::InvalidPosition { team: m.owner, marker: m.marker_id, position: m.position });
            }
            if m.hold_turns_remaining > 0 {
                let on_hold_cell = match m.position {
                    Position::Track(i) => route.effect_at(i).is_some_and(|e| e.hold_turns().is_some()),
                    _ => false,
                };
                if !on_hold_cell {
                    out.push(Violation::HoldOffCell { team: m.owner, marker: m.marker_id });
                }
            }
        }
    }
    if state.dice.locked != matches!(state.phase, TurnPhase::AwaitAnswer { .. }) {
        out.push(Violation::DiceLock);
    }
    if let Some(v) = state.dice.last_value {
        if !state.mode.dice().contains(v) {
            out.push(Violation::DiceOutOfRange(v));
        }
    }
    if state.winner.is_some() != matches!(state.phase, TurnPhase::GameOver { .. }) {
        out.push(Violation::WinnerPhase);
    }
    if state.kind == GameKind::Parcheesi {
        // per ring cell: (markers, first owner, mixed)
        let mut ring = vec![(0u8, usize::MAX, false); route.track_length as usize + 1];
        let mut column = [[0u8; 8]; crate::game::MAX_TEAMS];
        for m in state.teams.iter().flat_map(|t| &t.markers) {
            match m.position {
                Position::Track(step) => {
                    let slot = &mut ring[route.ring_cell(m.owner, step) as usize];
                    if slot.0 == 0 {
                        slot.1 = m.owner;
                    } else if slot.1 != m.owner {
                        slot.2 = true;
                    }
                    slot.0 += 1;
                }
                Position::HomeColumn(j) => column[m.owner][j as usize] += 1,
                Position::Nest | Position::Home => {}
            }
        }
        for (cell, &(count, _, mixed)) in ring.iter().enumerate() {
            if count > 2 {
                out.push(Violation::OverfullCell(format!("ring {cell}")));
            }
            if mixed && !route.is_safe(cell as u32) {
                out.push(Violation::MixedCell(cell as u32));
            }
        }
        for (team, cells) in column.iter().enumerate() {
            for (j, &n) in cells.iter().enumerate() {
                if n > 2 {
                    out.push(Violation::OverfullCell(format!("team {team} home column {j}")));
                }
            }
        }
    }
    out
}

/// Watches an event stream for moves that were not earned by a correct
/// answer in the same team-turn.
#[derive(Debug, Default, Clone)]
pub struct GatingCheck {
    earned: bool,
}

impl GatingCheck {
    pub fn observe(&mut self, event: &GameEvent) -> Option<Violation> {
        match event {
            GameEvent::TurnStarted { .. } => self.earned = false,
            GameEvent::Answered { correct, .. } => self.earned = *correct,
            GameEvent::MarkerMoved { team, .. } if !self.earned => {
                return Some(Violation::UngatedMove { team: *team });
            }
            _ => {}
        }
        None
    }
}

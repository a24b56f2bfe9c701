use serde::{Deserialize, Serialize};

use super::route::{EffectTag, Position};

/// Why a team's turn was consumed without playing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    Inn,
    Well,
    Prison,
}

/// Why a team's turn ended without a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassReason {
    NoLegalMove,
    WrongAnswer,
}

/// Everything that happens in a match, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum GameEvent {
    TurnStarted {
        team: usize,
    },
    DiceRolled {
        value: u32,
    },
    QuestionPosed {
        team: usize,
        question_id: String,
    },
    Answered {
        team: usize,
        correct: bool,
    },
    MarkerMoved {
        team: usize,
        marker_id: usize,
        path: Vec<Position>,
        effects: Vec<EffectTag>,
    },
    Captured {
        victim_team: usize,
        marker_id: usize,
    },
    TurnSkipped {
        team: usize,
        reason: SkipReason,
    },
    TurnPassed {
        team: usize,
        reason: PassReason,
    },
    GameOver {
        winner: usize,
    },
}

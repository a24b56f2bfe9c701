//! Engine for classic board games where every move must be earned by
//! answering a question.

pub mod game;

pub use game::{GameError, GameEvent, GameKind, GameState, MoveCandidate, Position, SpeedMode, TurnPhase};
pub mod bank;
pub mod session;

pub use session::{DiceThrow, Session, SessionConfig, SessionError, StateSnapshot, TeamStatus};
pub mod invariants;
pub mod selfplay;

use std::collections::BTreeSet;

use rand::Rng;
use rand_pcg::Pcg32;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::event::{GameEvent, PassReason, SkipReason};
use super::route::{EffectTag, Position, RouteSpec};
use super::rules::{self, MoveCandidate};
use super::{GameKind, SpeedMode, MAX_TEAMS, MIN_TEAMS};

/// PCG stream used for the game's dice and starting team.
pub(crate) const GAME_STREAM: u64 = 0x6761_6d65;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("team count {0} outside {MIN_TEAMS}..={MAX_TEAMS}")]
    InvalidTeamCount(usize),
    #[error("command not valid in phase {0}")]
    WrongPhase(&'static str),
    #[error("move is not among the legal candidates")]
    IllegalMove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerState {
    pub marker_id: usize,
    pub owner: usize,
    pub position: Position,
    pub hold_turns_remaining: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamState {
    pub team_index: usize,
    pub marker_count: usize,
    pub markers: Vec<MarkerState>,
    pub topics: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiceState {
    pub last_value: Option<u32>,
    pub locked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum TurnPhase {
    AwaitRoll { team: usize },
    AwaitAnswer { team: usize, value: u32 },
    AwaitMoveChoice { team: usize, value: u32, candidates: Vec<MoveCandidate> },
    GameOver { winner: usize },
}

impl TurnPhase {
    pub fn name(&self) -> &'static str {
        match self {
            TurnPhase::AwaitRoll { .. } => "await_roll",
            TurnPhase::AwaitAnswer { .. } => "await_answer",
            TurnPhase::AwaitMoveChoice { .. } => "await_move_choice",
            TurnPhase::GameOver { .. } => "game_over",
        }
    }
}

/// Full state of one match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub kind: GameKind,
    pub mode: SpeedMode,
    pub route: RouteSpec,
    pub teams: Vec<TeamState>,
    pub active_team: usize,
    pub phase: TurnPhase,
    pub dice: DiceState,
    pub rng: Pcg32,
    /// Team-turns begun so far, skipped turns included.
    pub turn_counter: u64,
    pub winner: Option<usize>,
    pub event_log: Vec<GameEvent>,
}

impl GameState {
    pub fn new(kind: GameKind, mode: SpeedMode, team_count: usize, seed: u64) -> Result<Self, GameError> {
        if !(MIN_TEAMS..=MAX_TEAMS).contains(&team_count) {
            return Err(GameError::InvalidTeamCount(team_count));
        }
        let route = RouteSpec::for_kind(kind);
        let marker_count = kind.marker_count(mode);
        let teams = (0..team_count)
            .map(|team_index| TeamState {
                team_index,
                marker_count,
                markers: (0..marker_count)
                    .map(|marker_id| MarkerState {
                        marker_id,
                        owner: team_index,
                        position: route.start_position(),
                        hold_turns_remaining: 0,
                    })
                    .collect(),
                topics: BTreeSet::new(),
            })
            .collect();
        let mut rng = Pcg32::new(seed, GAME_STREAM);
        let first = rng.random_range(0..team_count);
        let mut state = GameState {
            kind,
            mode,
            route,
            teams,
            active_team: first,
            phase: TurnPhase::AwaitRoll { team: first },
            dice: DiceState::default(),
            rng,
            turn_counter: 1,
            winner: None,
            event_log: Vec::new(),
        };
        state.event_log.push(GameEvent::TurnStarted { team: first });
        Ok(state)
    }

    pub fn team_count(&self) -> usize {
        self.teams.len()
    }

    pub fn marker(&self, team: usize, marker_id: usize) -> Option<&MarkerState> {
        self.teams.get(team)?.markers.iter().find(|m| m.marker_id == marker_id)
    }

    /// Legal moves for the active team with `value`. Never mutates.
    pub fn legal_moves(&self, value: u32) -> Vec<MoveCandidate> {
        self.legal_moves_for(self.active_team, value)
    }

    pub fn legal_moves_for(&self, team: usize, value: u32) -> Vec<MoveCandidate> {
        if self.winner.is_some() || team >= self.teams.len() {
            return Vec::new();
        }
        rules::legal_moves(self, team, value)
    }

    pub fn roll(&mut self) -> Result<(u32, Vec<GameEvent>), GameError> {
        let TurnPhase::AwaitRoll { team } = self.phase else {
            return Err(GameError::WrongPhase(self.phase.name()));
        };
        let mark = self.event_log.len();
        let value = self.mode.dice().sample(&mut self.rng);
        self.dice.last_value = Some(value);
        self.event_log.push(GameEvent::DiceRolled { value });
        if rules::legal_moves(self, team, value).is_empty() {
            self.event_log.push(GameEvent::TurnPassed { team, reason: PassReason::NoLegalMove });
            self.advance_turn();
        } else {
            self.phase = TurnPhase::AwaitAnswer { team, value };
            self.dice.locked = true;
        }
        Ok((value, self.event_log[mark..].to_vec()))
    }

    /// Records the question put to the active team for the pending roll.
    pub fn pose_question(&mut self, question_id: impl Into<String>) -> Result<GameEvent, GameError> {
        let TurnPhase::AwaitAnswer { team, .. } = self.phase else {
            return Err(GameError::WrongPhase(self.phase.name()));
        };
        let ev = GameEvent::QuestionPosed { team, question_id: question_id.into() };
        self.event_log.push(ev.clone());
        Ok(ev)
    }

    /// Resolves the pending question. A correct answer moves the single
    /// candidate straight away or asks for a marker choice; a wrong one passes
    /// the turn.
    pub fn answer(&mut self, correct: bool) -> Result<Vec<GameEvent>, GameError> {
        let TurnPhase::AwaitAnswer { team, value } = self.phase else {
            return Err(GameError::WrongPhase(self.phase.name()));
        };
        let mark = self.event_log.len();
        self.dice.locked = false;
        self.event_log.push(GameEvent::Answered { team, correct });
        if !correct {
            self.event_log.push(GameEvent::TurnPassed { team, reason: PassReason::WrongAnswer });
            self.advance_turn();
            return Ok(self.event_log[mark..].to_vec());
        }
        let mut candidates = rules::legal_moves(self, team, value);
        if self.kind == GameKind::Parcheesi && candidates.len() >= 2 {
            self.phase = TurnPhase::AwaitMoveChoice { team, value, candidates };
        } else {
            let chosen = candidates.swap_remove(0);
            self.apply(team, value, &chosen);
        }
        Ok(self.event_log[mark..].to_vec())
    }

    pub fn apply_move(&mut self, chosen: &MoveCandidate) -> Result<Vec<GameEvent>, GameError> {
        let TurnPhase::AwaitMoveChoice { team, value, ref candidates } = self.phase else {
            return Err(GameError::WrongPhase(self.phase.name()));
        };
        if !candidates.contains(chosen) {
            return Err(GameError::IllegalMove);
        }
        let mark = self.event_log.len();
        self.apply(team, value, chosen);
        Ok(self.event_log[mark..].to_vec())
    }

    fn apply(&mut self, team: usize, value: u32, chosen: &MoveCandidate) {
        let res = rules::resolve(self, team, value, chosen);
        let destination = *res.path.last().expect("resolved path is never empty");
        {
            let marker = self.teams[team]
                .markers
                .iter_mut()
                .find(|m| m.marker_id == chosen.marker_id)
                .expect("candidate names an existing marker");
            marker.position = destination;
            marker.hold_turns_remaining = res.hold;
        }
        for &(t, m) in &res.released {
            if let Some(marker) = self.teams[t].markers.iter_mut().find(|x| x.marker_id == m) {
                marker.hold_turns_remaining = 0;
            }
        }
        self.event_log.push(GameEvent::MarkerMoved {
            team,
            marker_id: chosen.marker_id,
            path: res.path,
            effects: res.effects,
        });
        for &(victim, m) in &res.captured {
            if let Some(marker) = self.teams[victim].markers.iter_mut().find(|x| x.marker_id == m) {
                marker.position = Position::Nest;
            }
            self.event_log.push(GameEvent::Captured { victim_team: victim, marker_id: m });
        }
        self.dice.locked = false;

        let goal = self.route.final_position();
        if self.teams[team].markers.iter().all(|m| m.position == goal) {
            self.winner = Some(team);
            self.phase = TurnPhase::GameOver { winner: team };
            self.event_log.push(GameEvent::GameOver { winner: team });
        } else {
            self.advance_turn();
        }
    }

    /// Hands the turn to the next team in seat order, consuming the turns of
    /// teams whose sole marker is held.
    pub fn advance_turn(&mut self) -> Vec<GameEvent> {
        if self.winner.is_some() {
            return Vec::new();
        }
        let mark = self.event_log.len();
        let n = self.teams.len();
        let mut next = self.active_team;
        loop {
            next = (next + 1) % n;
            self.turn_counter += 1;
            if let [marker] = &mut self.teams[next].markers[..] {
                if marker.hold_turns_remaining > 0 {
                    marker.hold_turns_remaining -= 1;
                    let reason = match marker.position {
                        Position::Track(i) => skip_reason(self.route.effect_at(i)),
                        _ => SkipReason::Inn,
                    };
                    self.event_log.push(GameEvent::TurnSkipped { team: next, reason });
                    continue;
                }
            }
            break;
        }
        self.active_team = next;
        self.phase = TurnPhase::AwaitRoll { team: next };
        self.dice.locked = false;
        self.event_log.push(GameEvent::TurnStarted { team: next });
        self.event_log[mark..].to_vec()
    }
}

fn skip_reason(effect: Option<EffectTag>) -> SkipReason {
    match effect {
        Some(EffectTag::WellHold) => SkipReason::Well,
        Some(EffectTag::PrisonHold) => SkipReason::Prison,
        _ => SkipReason::Inn,
    }
}

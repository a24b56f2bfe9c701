//! One live match: configuration, question gating and derived team status.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand_pcg::Pcg32;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bank::{check_answer, select_question, AskedHistory, QuestionBank, QuestionRecord, SelectError};
use crate::game::{
    DiceState, GameError, GameEvent, GameKind, GameState, MarkerState, SpeedMode, TurnPhase, MAX_TEAMS, MIN_TEAMS,
};

const QUESTION_STREAM: u64 = 0x7175_697a;
/// Consecutive automatic rolls without a question after which an Auto session
/// stops rolling on its own (only reachable from a fully deadlocked board).
const MAX_AUTO_ROLLS: usize = 10_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiceThrow {
    /// The client sends every roll.
    #[default]
    Manual,
    /// The engine rolls as soon as a team's turn begins.
    Auto,
}

impl FromStr for DiceThrow {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "manual" => Ok(DiceThrow::Manual),
            "auto" => Ok(DiceThrow::Auto),
            other => Err(format!("unknown dice mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub kind: GameKind,
    pub mode: SpeedMode,
    pub team_count: usize,
    pub team_names: Vec<String>,
    pub per_team_topics: Vec<BTreeSet<String>>,
    pub language: String,
    pub dice_throw: DiceThrow,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeamStatus {
    Playing,
    Waiting,
    NotPlaying,
}

impl fmt::Display for TeamStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TeamStatus::Playing => "turn",
            TeamStatus::Waiting => "",
            TeamStatus::NotPlaying => "doesn't play",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error("command not valid in phase {0}")]
    WrongPhase(&'static str),
    #[error("rolls are automatic in this session")]
    AutoModeRoll,
    #[error("team {team} answered but it is team {active}'s turn")]
    NotYourTurn { team: usize, active: usize },
    #[error("choice {choice} out of range for {options} options")]
    ChoiceOutOfRange { choice: usize, options: usize },
    #[error("marker {0} is not a legal choice")]
    IllegalMove(usize),
    #[error(transparent)]
    Game(GameError),
}

impl SessionError {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::InvalidConfig(_) => "invalid_config",
            SessionError::Select(SelectError::UnknownTopic(_)) => "unknown_topic",
            SessionError::Select(SelectError::UnknownLanguage(_)) => "unknown_language",
            SessionError::Select(SelectError::EmptyPool) => "empty_pool",
            SessionError::WrongPhase(_) => "wrong_phase",
            SessionError::AutoModeRoll => "auto_mode_roll",
            SessionError::NotYourTurn { .. } => "not_your_turn",
            SessionError::ChoiceOutOfRange { .. } => "choice_out_of_range",
            SessionError::IllegalMove(_) | SessionError::Game(GameError::IllegalMove) => "illegal_move",
            SessionError::Game(_) => "wrong_phase",
        }
    }
}

impl From<GameError> for SessionError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::InvalidTeamCount(n) => SessionError::InvalidConfig(format!("team count {n}")),
            GameError::WrongPhase(p) => SessionError::WrongPhase(p),
            other => SessionError::Game(other),
        }
    }
}

/// Question as shown to players: everything except the answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicQuestion {
    pub id: String,
    pub topic: String,
    pub prompt: String,
    pub image: Option<String>,
    pub options: Vec<String>,
}

impl From<&QuestionRecord> for PublicQuestion {
    fn from(q: &QuestionRecord) -> Self {
        PublicQuestion {
            id: q.question_id.clone(),
            topic: q.topic_id.clone(),
            prompt: q.prompt.clone(),
            image: q.image_ref.clone(),
            options: q.options.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamSnapshot {
    pub team_index: usize,
    pub name: String,
    pub marker_count: usize,
    pub markers: Vec<MarkerState>,
    pub topics: BTreeSet<String>,
}

/// Serializable view of a session: the game state without generator
/// internals or the event log, plus derived status.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub game: GameKind,
    pub mode: SpeedMode,
    pub language: String,
    pub dice_throw: DiceThrow,
    pub teams: Vec<TeamSnapshot>,
    pub active_team: usize,
    pub phase: TurnPhase,
    pub dice: DiceState,
    pub turn_counter: u64,
    pub winner: Option<usize>,
    pub statuses: Vec<TeamStatus>,
    pub question: Option<PublicQuestion>,
}

#[derive(Debug, Clone)]
pub struct Session {
    config: SessionConfig,
    bank: Arc<QuestionBank>,
    game: GameState,
    history: AskedHistory,
    rng: Pcg32,
    pending: Option<QuestionRecord>,
}

impl Session {
    /// Starts a match. Returns the session and the events emitted so far
    /// (the first turn, plus the first roll in Auto mode).
    pub fn create(config: SessionConfig, bank: Arc<QuestionBank>) -> Result<(Self, Vec<GameEvent>), SessionError> {
        let mut session = Session::new(config, bank)?;
        let mut events = session.game.event_log.clone();
        events.extend(session.start()?);
        Ok((session, events))
    }

    /// Sets up the match with the starting team chosen but no die thrown.
    pub fn new(config: SessionConfig, bank: Arc<QuestionBank>) -> Result<Self, SessionError> {
        validate_config(&config, &bank)?;
        let mut game = GameState::new(config.kind, config.mode, config.team_count, config.seed)?;
        for (team, topics) in game.teams.iter_mut().zip(&config.per_team_topics) {
            team.topics = topics.clone();
        }
        Ok(Session {
            rng: Pcg32::new(config.seed, QUESTION_STREAM),
            config,
            bank,
            game,
            history: AskedHistory::new(),
            pending: None,
        })
    }

    /// Performs the engine-initiated roll in Auto mode; a no-op otherwise.
    pub fn start(&mut self) -> Result<Vec<GameEvent>, SessionError> {
        let mut events = Vec::new();
        self.auto_roll(&mut events)?;
        Ok(events)
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn game(&self) -> &GameState {
        &self.game
    }

    pub fn bank(&self) -> &QuestionBank {
        &self.bank
    }

    pub fn pending_question(&self) -> Option<&QuestionRecord> {
        self.pending.as_ref()
    }

    pub fn history(&self) -> &AskedHistory {
        &self.history
    }

    pub fn command_roll(&mut self) -> Result<Vec<GameEvent>, SessionError> {
        if self.config.dice_throw == DiceThrow::Auto {
            return Err(SessionError::AutoModeRoll);
        }
        let mut events = Vec::new();
        self.roll_once(&mut events)?;
        Ok(events)
    }

    pub fn command_answer(&mut self, team: usize, choice: usize) -> Result<Vec<GameEvent>, SessionError> {
        let TurnPhase::AwaitAnswer { team: active, .. } = self.game.phase else {
            return Err(SessionError::WrongPhase(self.game.phase.name()));
        };
        if team != active {
            return Err(SessionError::NotYourTurn { team, active });
        }
        let question = self.pending.as_ref().expect("a question is pending while awaiting an answer");
        let correct = check_answer(question, choice)
            .map_err(|e| SessionError::ChoiceOutOfRange { choice: e.choice, options: e.options })?;
        self.pending = None;
        let mut events = self.game.answer(correct)?;
        self.auto_roll(&mut events)?;
        Ok(events)
    }

    pub fn command_choose_marker(&mut self, marker_id: usize) -> Result<Vec<GameEvent>, SessionError> {
        let TurnPhase::AwaitMoveChoice { candidates, .. } = &self.game.phase else {
            return Err(SessionError::WrongPhase(self.game.phase.name()));
        };
        let chosen = candidates
            .iter()
            .find(|c| c.marker_id == marker_id)
            .cloned()
            .ok_or(SessionError::IllegalMove(marker_id))?;
        let mut events = self.game.apply_move(&chosen)?;
        self.auto_roll(&mut events)?;
        Ok(events)
    }

    /// One status per seat, always [`MAX_TEAMS`] long.
    pub fn team_statuses(&self) -> Vec<TeamStatus> {
        team_statuses(&self.game)
    }

    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            game: self.config.kind,
            mode: self.config.mode,
            language: self.config.language.clone(),
            dice_throw: self.config.dice_throw,
            teams: self
                .game
                .teams
                .iter()
                .map(|t| TeamSnapshot {
                    team_index: t.team_index,
                    name: self.config.team_names[t.team_index].clone(),
                    marker_count: t.marker_count,
                    markers: t.markers.clone(),
                    topics: t.topics.clone(),
                })
                .collect(),
            active_team: self.game.active_team,
            phase: self.game.phase.clone(),
            dice: self.game.dice,
            turn_counter: self.game.turn_counter,
            winner: self.game.winner,
            statuses: self.team_statuses(),
            question: self.pending.as_ref().map(PublicQuestion::from),
        }
    }

    fn roll_once(&mut self, events: &mut Vec<GameEvent>) -> Result<(), SessionError> {
        let (_, rolled) = self.game.roll()?;
        events.extend(rolled);
        if let TurnPhase::AwaitAnswer { team, .. } = self.game.phase {
            let q = select_question(
                &self.bank,
                &self.config.language,
                &self.config.per_team_topics[team],
                &mut self.history,
                team,
                &mut self.rng,
            )?
            .clone();
            events.push(self.game.pose_question(q.question_id.clone())?);
            self.pending = Some(q);
        }
        Ok(())
    }

    fn auto_roll(&mut self, events: &mut Vec<GameEvent>) -> Result<(), SessionError> {
        if self.config.dice_throw != DiceThrow::Auto {
            return Ok(());
        }
        for _ in 0..MAX_AUTO_ROLLS {
            if !matches!(self.game.phase, TurnPhase::AwaitRoll { .. }) {
                break;
            }
            self.roll_once(events)?;
        }
        Ok(())
    }
}

pub fn team_statuses(game: &GameState) -> Vec<TeamStatus> {
    (0..MAX_TEAMS)
        .map(|seat| {
            if seat >= game.team_count() {
                TeamStatus::NotPlaying
            } else if game.winner.is_none() && seat == game.active_team {
                TeamStatus::Playing
            } else {
                TeamStatus::Waiting
            }
        })
        .collect()
}

fn validate_config(config: &SessionConfig, bank: &QuestionBank) -> Result<(), SessionError> {
    let n = config.team_count;
    if !(MIN_TEAMS..=MAX_TEAMS).contains(&n) {
        return Err(SessionError::InvalidConfig(format!("team count {n} outside {MIN_TEAMS}..={MAX_TEAMS}")));
    }
    if config.team_names.len() != n || config.per_team_topics.len() != n {
        return Err(SessionError::InvalidConfig(format!(
            "{n} teams but {} names and {} topic sets",
            config.team_names.len(),
            config.per_team_topics.len()
        )));
    }
    if let Some(team) = config.per_team_topics.iter().position(BTreeSet::is_empty) {
        return Err(SessionError::InvalidConfig(format!("team {team} has no topics")));
    }
    if bank.language(&config.language).is_none() {
        return Err(SelectError::UnknownLanguage(config.language.clone()).into());
    }
    for topics in &config.per_team_topics {
        for id in topics {
            match bank.topic(&config.language, id) {
                None => return Err(SelectError::UnknownTopic(id.clone()).into()),
                Some(t) if t.questions.is_empty() => return Err(SelectError::EmptyPool.into()),
                Some(_) => {}
            }
        }
    }
    Ok(())
}

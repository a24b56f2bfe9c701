//! Headless self-play: uniform-random marker choice, answers correct with a
//! fixed probability, every state checked against the invariants.

use std::fmt;

use rand::Rng;
use rand_pcg::Pcg32;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameKind, GameState, SpeedMode, TurnPhase};
use crate::invariants::{check_state, GatingCheck, Violation};

/// A game still running after this many team-turns is treated as stalled.
pub const MAX_TEAM_TURNS: u64 = 100_000;
const POLICY_STREAM: u64 = 0x706c_6179;
const CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfPlayConfig {
    pub kind: GameKind,
    pub mode: SpeedMode,
    pub teams: usize,
    pub games: u64,
    pub seed: u64,
    pub p_correct: f64,
    /// Worker threads; 0 uses the global pool. Results do not depend on it.
    #[serde(skip)]
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelfPlayError {
    #[error("games must be at least 1")]
    NoGames,
    #[error("p_correct must be in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("invalid configuration: {0}")]
    Game(#[from] crate::game::GameError),
    #[error("game {game_index} (seed {seed}) made no finish within {turns} team-turns; aborting {kind}/{mode}")]
    Stalled { kind: GameKind, mode: SpeedMode, game_index: u64, seed: u64, turns: u64 },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Result of one self-played game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameOutcome {
    pub seed: u64,
    pub starting_team: usize,
    pub team_turns: u64,
    pub winner: Option<usize>,
    pub rolls: Vec<u32>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfPlayReport {
    pub game: GameKind,
    pub mode: SpeedMode,
    pub teams: usize,
    pub games: u64,
    pub seed: u64,
    pub p_correct: f64,
    pub mean_turns: f64,
    pub std_turns: f64,
    pub min_turns: u64,
    pub max_turns: u64,
    pub wins_per_seat: Vec<u64>,
    pub first_mover_wins: u64,
    pub first_mover_win_rate: f64,
    pub violations: u64,
    pub first_violation: Option<String>,
    /// Turn counts per game, in game order.
    #[serde(skip)]
    pub turns: Vec<u64>,
}

/// Plays one game to completion or until [`MAX_TEAM_TURNS`].
pub fn play_game(kind: GameKind, mode: SpeedMode, teams: usize, seed: u64, p_correct: f64) -> Result<GameOutcome, SelfPlayError> {
    let mut state = GameState::new(kind, mode, teams, seed)?;
    let mut policy = Pcg32::new(seed, POLICY_STREAM);
    let mut gating = GatingCheck::default();
    let mut violations = check_state(&state);
    let mut rolls = Vec::new();
    let starting_team = state.active_team;
    let mut seen = 0;

    while state.winner.is_none() && state.turn_counter <= MAX_TEAM_TURNS {
        match &state.phase {
            TurnPhase::AwaitRoll { .. } => {
                let (value, _) = state.roll()?;
                rolls.push(value);
            }
            TurnPhase::AwaitAnswer { .. } => {
                let correct = policy.random_bool(p_correct);
                state.answer(correct)?;
            }
            TurnPhase::AwaitMoveChoice { candidates, .. } => {
                let chosen = candidates[policy.random_range(0..candidates.len())].clone();
                state.apply_move(&chosen)?;
            }
            TurnPhase::GameOver { .. } => break,
        }
        for event in &state.event_log[seen..] {
            violations.extend(gating.observe(event));
        }
        seen = state.event_log.len();
        violations.extend(check_state(&state));
    }

    Ok(GameOutcome { seed, starting_team, team_turns: state.turn_counter, winner: state.winner, rolls, violations })
}

/// Plays `config.games` games seeded `seed + index` and aggregates them.
pub fn run(config: &SelfPlayConfig) -> Result<SelfPlayReport, SelfPlayError> {
    if config.games == 0 {
        return Err(SelfPlayError::NoGames);
    }
    if !(0.0..=1.0).contains(&config.p_correct) {
        return Err(SelfPlayError::BadProbability(config.p_correct));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| SelfPlayError::Pool(e.to_string()))?;

    let mut outcomes: Vec<GameOutcome> = Vec::with_capacity(config.games as usize);
    let indices: Vec<u64> = (0..config.games).collect();
    for chunk in indices.chunks(CHUNK) {
        let results: Vec<Result<GameOutcome, SelfPlayError>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&i| play_game(config.kind, config.mode, config.teams, config.seed.wrapping_add(i), config.p_correct))
                .collect()
        });
        for (&index, result) in chunk.iter().zip(results) {
            let outcome = result?;
            if outcome.winner.is_none() {
                return Err(SelfPlayError::Stalled {
                    kind: config.kind,
                    mode: config.mode,
                    game_index: index,
                    seed: outcome.seed,
                    turns: outcome.team_turns,
                });
            }
            outcomes.push(outcome);
        }
    }
    Ok(aggregate(config, &outcomes))
}

fn aggregate(config: &SelfPlayConfig, outcomes: &[GameOutcome]) -> SelfPlayReport {
    let n = outcomes.len() as f64;
    let turns: Vec<u64> = outcomes.iter().map(|o| o.team_turns).collect();
    let mean = turns.iter().map(|&t| t as f64).sum::<f64>() / n;
    let var = if outcomes.len() > 1 {
        turns.iter().map(|&t| (t as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let mut wins = vec![0u64; config.teams];
    let mut first_mover_wins = 0;
    for o in outcomes {
        if let Some(w) = o.winner {
            wins[w] += 1;
            if w == o.starting_team {
                first_mover_wins += 1;
            }
        }
    }
    let violations: u64 = outcomes.iter().map(|o| o.violations.len() as u64).sum();
    let first_violation = outcomes
        .iter()
        .find_map(|o| o.violations.first().map(|v| format!("seed {}: {v}", o.seed)));
    SelfPlayReport {
        game: config.kind,
        mode: config.mode,
        teams: config.teams,
        games: outcomes.len() as u64,
        seed: config.seed,
        p_correct: config.p_correct,
        mean_turns: mean,
        std_turns: var.sqrt(),
        min_turns: turns.iter().copied().min().unwrap_or(0),
        max_turns: turns.iter().copied().max().unwrap_or(0),
        wins_per_seat: wins,
        first_mover_wins,
        first_mover_win_rate: first_mover_wins as f64 / n,
        violations,
        first_violation,
        turns,
    }
}

impl fmt::Display for SelfPlayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<22}{} / {}", "configuration", self.game, self.mode)?;
        writeln!(f, "{:<22}{}", "teams", self.teams)?;
        writeln!(f, "{:<22}{}", "games", self.games)?;
        writeln!(f, "{:<22}{}", "seed", self.seed)?;
        writeln!(f, "{:<22}{}", "p_correct", self.p_correct)?;
        writeln!(f, "{:<22}{:.2} (sd {:.2}, min {}, max {})", "team-turns", self.mean_turns, self.std_turns, self.min_turns, self.max_turns)?;
        for (seat, w) in self.wins_per_seat.iter().enumerate() {
            writeln!(f, "{:<22}{} ({:.3})", format!("wins seat {seat}"), w, *w as f64 / self.games as f64)?;
        }
        writeln!(f, "{:<22}{} ({:.3})", "first-mover wins", self.first_mover_wins, self.first_mover_win_rate)?;
        write!(f, "{:<22}{}", "invariant violations", self.violations)?;
        if let Some(v) = &self.first_violation {
            write!(f, "\n{:<22}{v}", "first violation")?;
        }
        Ok(())
    }
}

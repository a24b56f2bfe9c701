use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use quizboard_core::bank::QuestionBank;
use quizboard_core::{GameEvent, Session, SessionConfig, SessionError, TurnPhase};
use serde_json::Value;

use crate::protocol::{self, Command, EventBody, LanguageTopics, COMMANDS};

pub type ConnId = u64;

/// A line addressed to one connection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outgoing {
    pub conn: ConnId,
    pub line: String,
}

struct Entry {
    session: Session,
    seq: u64,
    subscribers: BTreeSet<ConnId>,
    finished: bool,
}

/// Session registry and command dispatcher. Transport-free: feed it lines,
/// get back lines to deliver. Callers serialize access.
pub struct Hub {
    bank: Arc<QuestionBank>,
    sessions: BTreeMap<String, Entry>,
    created: u64,
}

impl Hub {
    pub fn new(bank: Arc<QuestionBank>) -> Self {
        Hub { bank, sessions: BTreeMap::new(), created: 0 }
    }

    pub fn bank(&self) -> &QuestionBank {
        &self.bank
    }

    pub fn session(&self, id: &str) -> Option<&Session> {
        self.sessions.get(id).map(|e| &e.session)
    }

    pub fn session_ids(&self) -> impl Iterator<Item = &str> {
        self.sessions.keys().map(String::as_str)
    }

    pub fn disconnect(&mut self, conn: ConnId) {
        for (id, entry) in &mut self.sessions {
            if entry.subscribers.remove(&conn) && entry.subscribers.is_empty() {
                log::info!("session {id}: last client detached");
            }
        }
    }

    pub fn handle_line(&mut self, conn: ConnId, line: &str) -> Vec<Outgoing> {
        let line = line.trim();
        if line.is_empty() {
            return Vec::new();
        }
        let reply = |body: EventBody| vec![Outgoing { conn, line: protocol::encode(&body, None, None) }];

        let value: Value = match serde_json::from_str(line) {
            Ok(v) => v,
            Err(e) => return reply(protocol::error("bad_message", e.to_string())),
        };
        let Some(name) = value.get("cmd").and_then(Value::as_str) else {
            return reply(protocol::error("bad_message", "expected an object with a string `cmd`"));
        };
        if !COMMANDS.contains(&name) {
            return reply(protocol::error("unknown_command", format!("unknown command `{name}`")));
        }
        let command: Command = match serde_json::from_value(value) {
            Ok(c) => c,
            Err(e) => return reply(protocol::error("bad_message", e.to_string())),
        };
        self.dispatch(conn, command)
    }

    fn dispatch(&mut self, conn: ConnId, command: Command) -> Vec<Outgoing> {
        let reply = |body: EventBody| vec![Outgoing { conn, line: protocol::encode(&body, None, None) }];
        match command {
            Command::CreateSession { game, mode, teams, language, dice, seed } => {
                let config = SessionConfig {
                    kind: game,
                    mode,
                    team_count: teams.len(),
                    team_names: teams.iter().map(|t| t.name.clone()).collect(),
                    per_team_topics: teams.into_iter().map(|t| t.topics).collect(),
                    language,
                    dice_throw: dice,
                    seed: seed.unwrap_or_else(rand::random),
                };
                let mut session = match Session::new(config, Arc::clone(&self.bank)) {
                    Ok(s) => s,
                    Err(e) => return reply(session_error(&e)),
                };
                let initial = session.snapshot();
                let events = match session.start() {
                    Ok(ev) => ev,
                    Err(e) => return reply(session_error(&e)),
                };
                self.created += 1;
                let id = format!("s{}", self.created);
                log::info!(
                    "session {id}: created {} {} with {} teams",
                    session.config().kind,
                    session.config().mode,
                    session.config().team_count
                );
                self.sessions.insert(
                    id.clone(),
                    Entry { session, seq: 0, subscribers: BTreeSet::from([conn]), finished: false },
                );
                let mut bodies = vec![EventBody::SessionCreated { state: Box::new(initial) }];
                self.extend_with(&id, &events, &mut bodies);
                self.broadcast(&id, bodies)
            }
            Command::ListTopics { language } => {
                let languages: Vec<LanguageTopics> = match language {
                    Some(code) if self.bank.language(&code).is_none() => {
                        return reply(protocol::error("unknown_language", format!("no questions in `{code}`")));
                    }
                    Some(code) => vec![LanguageTopics { topics: self.bank.catalog(&code), language: code }],
                    None => self
                        .bank
                        .languages
                        .keys()
                        .map(|code| LanguageTopics { language: code.clone(), topics: self.bank.catalog(code) })
                        .collect(),
                };
                reply(EventBody::Topics { languages })
            }
            Command::Start { session } | Command::GetState { session } if !self.sessions.contains_key(&session) => {
                reply(no_such_session(&session))
            }
            Command::Start { session } => {
                self.sessions.get_mut(&session).expect("checked").subscribers.insert(conn);
                self.send_state(&session, conn)
            }
            Command::GetState { session } => self.send_state(&session, conn),
            Command::Roll { session } => self.run(conn, &session, |s| s.command_roll()),
            Command::Answer { session, option, team } => self.run(conn, &session, |s| {
                let team = team.unwrap_or(s.game().active_team);
                s.command_answer(team, option)
            }),
            Command::ChooseMarker { session, marker } => {
                self.run(conn, &session, |s| s.command_choose_marker(marker))
            }
        }
    }

    fn run(
        &mut self,
        conn: ConnId,
        id: &str,
        op: impl FnOnce(&mut Session) -> Result<Vec<GameEvent>, SessionError>,
    ) -> Vec<Outgoing> {
        let Some(entry) = self.sessions.get_mut(id) else {
            return vec![Outgoing { conn, line: protocol::encode(&no_such_session(id), None, None) }];
        };
        match op(&mut entry.session) {
            Ok(events) => {
                let mut bodies = Vec::new();
                self.extend_with(id, &events, &mut bodies);
                self.broadcast(id, bodies)
            }
            Err(e) => vec![Outgoing { conn, line: protocol::encode(&session_error(&e), Some(id), None) }],
        }
    }

    /// Appends translated events, plus a full state when the team must pick
    /// a marker (the candidates travel in the snapshot).
    fn extend_with(&mut self, id: &str, events: &[GameEvent], bodies: &mut Vec<EventBody>) {
        let entry = self.sessions.get_mut(id).expect("session exists");
        let s = &entry.session;
        bodies.extend(protocol::translate(events, &self.bank, &s.config().language));
        if matches!(s.game().phase, TurnPhase::AwaitMoveChoice { .. })
            && events.last().is_some_and(|e| matches!(e, GameEvent::Answered { .. }))
        {
            bodies.push(EventBody::State { state: Box::new(s.snapshot()) });
        }
        if !entry.finished {
            if let Some(winner) = s.game().winner {
                entry.finished = true;
                log::info!("session {id}: game over, team {winner} wins after {} team-turns", s.game().turn_counter);
            }
        }
    }

    fn broadcast(&mut self, id: &str, bodies: Vec<EventBody>) -> Vec<Outgoing> {
        let entry = self.sessions.get_mut(id).expect("session exists");
        let mut out = Vec::with_capacity(bodies.len() * entry.subscribers.len());
        for body in bodies {
            entry.seq += 1;
            let line = protocol::encode(&body, Some(id), Some(entry.seq));
            for &conn in &entry.subscribers {
                out.push(Outgoing { conn, line: line.clone() });
            }
        }
        out
    }

    /// Broadcasts a state snapshot, also delivering it to `conn` when that
    /// connection is not attached.
    fn send_state(&mut self, id: &str, conn: ConnId) -> Vec<Outgoing> {
        let entry = self.sessions.get_mut(id).expect("session exists");
        entry.seq += 1;
        let body = EventBody::State { state: Box::new(entry.session.snapshot()) };
        let line = protocol::encode(&body, Some(id), Some(entry.seq));
        let mut targets = entry.subscribers.clone();
        targets.insert(conn);
        targets.into_iter().map(|conn| Outgoing { conn, line: line.clone() }).collect()
    }
}

fn no_such_session(id: &str) -> EventBody {
    protocol::error("no_such_session", format!("no session `{id}`"))
}

fn session_error(e: &SessionError) -> EventBody {
    protocol::error(e.code(), e.to_string())
}

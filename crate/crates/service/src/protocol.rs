//! Wire format: one JSON document per line. Clients send command records
//! `{"cmd": ..., "session": ...}`; the service answers with event records
//! `{"event": ..., "session": ..., "seq": ...}`. Events that belong to a
//! session carry a gap-free `seq` starting at 1; `error` and `topics`
//! replies go only to the requesting connection and carry no `seq`.

use std::collections::BTreeSet;

use quizboard_core::bank::{QuestionBank, TopicEntry};
use quizboard_core::game::{EffectTag, GameEvent, PassReason, SkipReason};
use quizboard_core::session::PublicQuestion;
use quizboard_core::{DiceThrow, GameKind, Position, SpeedMode, StateSnapshot};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const COMMANDS: [&str; 7] = ["create_session", "start", "roll", "answer", "choose_marker", "get_state", "list_topics"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamSpec {
    pub name: String,
    pub topics: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cmd", rename_all = "snake_case")]
pub enum Command {
    CreateSession {
        game: GameKind,
        #[serde(default = "classic")]
        mode: SpeedMode,
        teams: Vec<TeamSpec>,
        language: String,
        #[serde(default)]
        dice: DiceThrow,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Attach this connection to a session and receive its current state.
    Start { session: String },
    Roll { session: String },
    Answer {
        session: String,
        /// 0-based index into the question's options.
        option: usize,
        #[serde(default)]
        team: Option<usize>,
    },
    ChooseMarker { session: String, marker: usize },
    GetState { session: String },
    ListTopics {
        #[serde(default)]
        language: Option<String>,
    },
}

fn classic() -> SpeedMode {
    SpeedMode::Classic
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageTopics {
    pub language: String,
    pub topics: Vec<TopicEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum EventBody {
    SessionCreated { state: Box<StateSnapshot> },
    State { state: Box<StateSnapshot> },
    Turn { team: usize },
    Dice { value: u32, locked: bool },
    Question {
        team: usize,
        id: String,
        topic: String,
        prompt: String,
        image: Option<String>,
        options: Vec<String>,
    },
    Answered { team: usize, correct: bool },
    Moved { team: usize, marker: usize, path: Vec<Position>, effects: Vec<EffectTag> },
    Captured { team: usize, marker: usize },
    TurnSkipped { team: usize, reason: SkipReason },
    TurnPassed { team: usize, reason: PassReason },
    GameOver { winner: usize },
    Topics { languages: Vec<LanguageTopics> },
    Error { code: String, msg: String },
}

#[derive(Serialize)]
struct Envelope<'a> {
    #[serde(flatten)]
    body: &'a EventBody,
    #[serde(skip_serializing_if = "Option::is_none")]
    session: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seq: Option<u64>,
}

/// Serializes one event record (without the trailing newline).
pub fn encode(body: &EventBody, session: Option<&str>, seq: Option<u64>) -> String {
    serde_json::to_string(&Envelope { body, session, seq }).expect("events always serialize")
}

pub fn error(code: &str, msg: impl Into<String>) -> EventBody {
    EventBody::Error { code: code.to_string(), msg: msg.into() }
}

/// Translates engine events into wire events. The die is reported locked
/// exactly when the roll led to a question.
pub fn translate(events: &[GameEvent], bank: &QuestionBank, language: &str) -> Vec<EventBody> {
    let mut out = Vec::with_capacity(events.len());
    for (i, ev) in events.iter().enumerate() {
        out.push(match ev {
            GameEvent::TurnStarted { team } => EventBody::Turn { team: *team },
            GameEvent::DiceRolled { value } => EventBody::Dice {
                value: *value,
                locked: matches!(events.get(i + 1), Some(GameEvent::QuestionPosed { .. })),
            },
            GameEvent::QuestionPosed { team, question_id } => {
                let q = bank.question(language, question_id).expect("posed questions come from the bank");
                let PublicQuestion { id, topic, prompt, image, options } = PublicQuestion::from(q);
                EventBody::Question { team: *team, id, topic, prompt, image, options }
            }
            GameEvent::Answered { team, correct } => EventBody::Answered { team: *team, correct: *correct },
            GameEvent::MarkerMoved { team, marker_id, path, effects } => EventBody::Moved {
                team: *team,
                marker: *marker_id,
                path: path.clone(),
                effects: effects.clone(),
            },
            GameEvent::Captured { victim_team, marker_id } => EventBody::Captured { team: *victim_team, marker: *marker_id },
            GameEvent::TurnSkipped { team, reason } => EventBody::TurnSkipped { team: *team, reason: *reason },
            GameEvent::TurnPassed { team, reason } => EventBody::TurnPassed { team: *team, reason: *reason },
            GameEvent::GameOver { winner } => EventBody::GameOver { winner: *winner },
        });
    }
    out
}

#[derive(Clone, Copy)]
enum Kind {
    Str,
    Uint,
    Bool,
    Array,
    Object,
    NullableStr,
    Position,
}

fn check(v: Option<&Value>, kind: Kind) -> bool {
    let Some(v) = v else { return false };
    match kind {
        Kind::Str => v.is_string(),
        Kind::Uint => v.is_u64(),
        Kind::Bool => v.is_boolean(),
        Kind::Array => v.is_array(),
        Kind::Object => v.is_object(),
        Kind::NullableStr => v.is_string() || v.is_null(),
        Kind::Position => serde_json::from_value::<Position>(v.clone()).is_ok(),
    }
}

/// Checks an emitted line against the published event schema.
pub fn validate_event(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("event is not an object")?;
    let name = obj.get("event").and_then(Value::as_str).ok_or("missing `event`")?;
    let fields: &[(&str, Kind)] = match name {
        "session_created" | "state" => &[("state", Kind::Object)],
        "turn" => &[("team", Kind::Uint)],
        "dice" => &[("value", Kind::Uint), ("locked", Kind::Bool)],
        "question" => &[
            ("team", Kind::Uint),
            ("id", Kind::Str),
            ("topic", Kind::Str),
            ("prompt", Kind::Str),
            ("image", Kind::NullableStr),
            ("options", Kind::Array),
        ],
        "answered" => &[("team", Kind::Uint), ("correct", Kind::Bool)],
        "moved" => &[("team", Kind::Uint), ("marker", Kind::Uint), ("path", Kind::Array), ("effects", Kind::Array)],
        "captured" => &[("team", Kind::Uint), ("marker", Kind::Uint)],
        "turn_skipped" | "turn_passed" => &[("team", Kind::Uint), ("reason", Kind::Str)],
        "game_over" => &[("winner", Kind::Uint)],
        "topics" => &[("languages", Kind::Array)],
        "error" => &[("code", Kind::Str), ("msg", Kind::Str)],
        other => return Err(format!("unknown event `{other}`")),
    };
    for &(field, kind) in fields {
        if !check(obj.get(field), kind) {
            return Err(format!("`{name}`: field `{field}` missing or mistyped"));
        }
    }
    let session_scoped = !matches!(name, "topics" | "error");
    if session_scoped && !(check(obj.get("session"), Kind::Str) && check(obj.get("seq"), Kind::Uint)) {
        return Err(format!("`{name}` must carry `session` and `seq`"));
    }
    if !session_scoped && obj.contains_key("seq") {
        return Err(format!("`{name}` must not carry `seq`"));
    }
    let allowed = fields.len() + 3;
    if obj.len() > allowed {
        return Err(format!("`{name}` has unexpected fields"));
    }
    match name {
        "question" => {
            let options = obj["options"].as_array().expect("checked");
            if !(2..=4).contains(&options.len()) || !options.iter().all(Value::is_string) {
                return Err("question options must be 2 to 4 strings".into());
            }
        }
        "moved" => {
            let path = obj["path"].as_array().expect("checked");
            if path.is_empty() || !path.iter().all(|p| check(Some(p), Kind::Position)) {
                return Err("moved path must be a non-empty list of positions".into());
            }
        }
        "session_created" | "state" => {
            serde_json::from_value::<StateSnapshot>(obj["state"].clone())
                .map_err(|e| format!("`{name}` state: {e}"))?;
        }
        _ => {}
    }
    Ok(())
}

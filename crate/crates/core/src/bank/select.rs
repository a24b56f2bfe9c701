use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{QuestionBank, QuestionRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectError {
    #[error("unknown language `{0}`")]
    UnknownLanguage(String),
    #[error("unknown topic `{0}`")]
    UnknownTopic(String),
    #[error("no questions in the requested topics")]
    EmptyPool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("choice {choice} out of range for {options} options")]
pub struct AnswerError {
    pub choice: usize,
    pub options: usize,
}

/// Question ids already posed in a session, per team.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AskedHistory {
    asked: BTreeMap<usize, BTreeSet<String>>,
}

impl AskedHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn asked(&self, team: usize) -> impl Iterator<Item = &str> {
        self.asked.get(&team).into_iter().flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn was_asked(&self, team: usize, question_id: &str) -> bool {
        self.asked.get(&team).is_some_and(|s| s.contains(question_id))
    }

    fn record(&mut self, team: usize, question_id: &str) {
        self.asked.entry(team).or_default().insert(question_id.to_string());
    }

    fn forget<'a>(&mut self, team: usize, ids: impl Iterator<Item = &'a str>) {
        if let Some(set) = self.asked.get_mut(&team) {
            for id in ids {
                set.remove(id);
            }
        }
    }
}

/// Draws a question uniformly from the team's not-yet-asked questions in
/// `topics`. Once every question in those topics has been asked, the team's
/// history for them is cleared and the full pool is used again.
pub fn select_question<'b, R: Rng + ?Sized>(
    bank: &'b QuestionBank,
    language: &str,
    topics: &BTreeSet<String>,
    history: &mut AskedHistory,
    team: usize,
    rng: &mut R,
) -> Result<&'b QuestionRecord, SelectError> {
    let lang = bank.language(language).ok_or_else(|| SelectError::UnknownLanguage(language.to_string()))?;
    if topics.is_empty() {
        return Err(SelectError::EmptyPool);
    }
    let mut pool: Vec<&QuestionRecord> = Vec::new();
    for id in topics {
        let topic = lang
            .topics
            .iter()
            .find(|t| &t.id == id)
            .ok_or_else(|| SelectError::UnknownTopic(id.clone()))?;
        pool.extend(topic.questions.iter());
    }
    if pool.is_empty() {
        return Err(SelectError::EmptyPool);
    }

    let mut fresh: Vec<&QuestionRecord> =
        pool.iter().copied().filter(|q| !history.was_asked(team, &q.question_id)).collect();
    if fresh.is_empty() {
        history.forget(team, pool.iter().map(|q| q.question_id.as_str()));
        fresh = pool;
    }
    let pick = fresh[rng.random_range(0..fresh.len())];
    history.record(team, &pick.question_id);
    Ok(pick)
}

pub fn check_answer(question: &QuestionRecord, choice: usize) -> Result<bool, AnswerError> {
    if choice >= question.options.len() {
        return Err(AnswerError { choice, options: question.options.len() });
    }
    Ok(choice == question.correct_index)
}

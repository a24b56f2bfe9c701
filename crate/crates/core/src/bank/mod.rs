//! Question banks: CSV authoring format, the compiled JSON bank, validation
//! against an image directory, and per-team random selection.

mod csv;
mod select;
mod store;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use self::csv::{parse_question_csv, ParseError, CSV_HEADER};
pub use select::{check_answer, select_question, AnswerError, AskedHistory, SelectError};
pub use store::{compile_bank, load_bank, BankError, BANK_VERSION};
pub use validate::{validate_bank, ValidationIssue};

/// One multiple-choice question.
///
/// `topic_id` and `language` are implied by where the record sits in the bank
/// file, so they are not serialized with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionRecord {
    #[serde(rename = "id")]
    pub question_id: String,
    #[serde(skip)]
    pub topic_id: String,
    #[serde(skip)]
    pub language: String,
    pub prompt: String,
    #[serde(rename = "image")]
    pub image_ref: Option<String>,
    pub options: Vec<String>,
    /// 0-based.
    #[serde(rename = "correct")]
    pub correct_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub id: String,
    pub name: String,
    pub questions: Vec<QuestionRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageBank {
    pub topics: Vec<Topic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicEntry {
    pub id: String,
    pub name: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionBank {
    pub version: u32,
    pub languages: BTreeMap<String, LanguageBank>,
}

impl Default for QuestionBank {
    fn default() -> Self {
        QuestionBank { version: BANK_VERSION, languages: BTreeMap::new() }
    }
}

impl QuestionBank {
    pub fn language(&self, code: &str) -> Option<&LanguageBank> {
        self.languages.get(code)
    }

    pub fn topic(&self, language: &str, topic_id: &str) -> Option<&Topic> {
        self.language(language)?.topics.iter().find(|t| t.id == topic_id)
    }

    /// Topics of one language with their question counts, in bank order.
    pub fn catalog(&self, language: &str) -> Vec<TopicEntry> {
        self.language(language)
            .map(|lang| {
                lang.topics
                    .iter()
                    .map(|t| TopicEntry { id: t.id.clone(), name: t.name.clone(), count: t.questions.len() })
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn question(&self, language: &str, question_id: &str) -> Option<&QuestionRecord> {
        self.language(language)?
            .topics
            .iter()
            .flat_map(|t| t.questions.iter())
            .find(|q| q.question_id == question_id)
    }

    pub fn question_count(&self) -> usize {
        self.languages
            .values()
            .flat_map(|l| l.topics.iter())
            .map(|t| t.questions.len())
            .sum()
    }

    /// Restores the per-record language and topic after deserialization.
    pub(crate) fn fill_context(&mut self) {
        for (code, lang) in &mut self.languages {
            for topic in &mut lang.topics {
                for q in &mut topic.questions {
                    q.language.clone_from(code);
                    q.topic_id.clone_from(&topic.id);
                }
            }
        }
    }
}

/// Stable topic identifier derived from a display name: lowercase ASCII
/// alphanumerics with runs of anything else collapsed to `_`.
pub fn topic_slug(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    let mut pending_sep = false;
    for ch in name.chars() {
        if ch.is_alphanumeric() {
            if pending_sep && !out.is_empty() {
                out.push('_');
            }
            pending_sep = false;
            out.extend(ch.to_lowercase());
        } else {
            pending_sep = true;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(topic_slug("Food"), "food");
        assert_eq!(topic_slug("Animals (Kids)"), "animals_kids");
        assert_eq!(topic_slug("Symbols in everyday live"), "symbols_in_everyday_live");
        assert_eq!(topic_slug("  sport "), "sport");
        assert_eq!(topic_slug("Comida típica"), "comida_típica");
    }
}

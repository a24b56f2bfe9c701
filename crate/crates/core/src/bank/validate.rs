use std::collections::BTreeSet;
use std::fmt;
use std::path::{Component, Path};

use serde::Serialize;

use super::QuestionBank;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum ValidationIssue {
    MissingImage { language: String, question_id: String, path: String },
    /// Image paths must stay inside the asset root.
    UnsafeImagePath { language: String, question_id: String, path: String },
    EmptyTopic { language: String, topic: String },
    DuplicateTopic { language: String, topic: String },
    DuplicateId { language: String, question_id: String },
    InvalidQuestion { language: String, question_id: String, reason: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::MissingImage { language, question_id, path } => {
                write!(f, "[{language}] {question_id}: missing image {path}")
            }
            ValidationIssue::UnsafeImagePath { language, question_id, path } => {
                write!(f, "[{language}] {question_id}: image path escapes the asset root: {path}")
            }
            ValidationIssue::EmptyTopic { language, topic } => write!(f, "[{language}] topic {topic} has no questions"),
            ValidationIssue::DuplicateTopic { language, topic } => write!(f, "[{language}] topic {topic} appears twice"),
            ValidationIssue::DuplicateId { language, question_id } => {
                write!(f, "[{language}] duplicate question id {question_id}")
            }
            ValidationIssue::InvalidQuestion { language, question_id, reason } => {
                write!(f, "[{language}] {question_id}: {reason}")
            }
        }
    }
}

fn is_contained(path: &Path) -> bool {
    path.components().all(|c| matches!(c, Component::Normal(_) | Component::CurDir))
}

/// Lists every problem that would make the bank unusable for play. An empty
/// list means the bank is good to serve.
pub fn validate_bank(bank: &QuestionBank, image_root: &Path) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    for (language, lang) in &bank.languages {
        let mut topics = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for topic in &lang.topics {
            if !topics.insert(topic.id.as_str()) {
                issues.push(ValidationIssue::DuplicateTopic { language: language.clone(), topic: topic.id.clone() });
            }
            if topic.questions.is_empty() {
                issues.push(ValidationIssue::EmptyTopic { language: language.clone(), topic: topic.id.clone() });
            }
            for q in &topic.questions {
                let qid = || q.question_id.clone();
                if !ids.insert(q.question_id.as_str()) {
                    issues.push(ValidationIssue::DuplicateId { language: language.clone(), question_id: qid() });
                }
                let reason = if q.prompt.trim().is_empty() {
                    Some("empty prompt".to_string())
                } else if !(2..=4).contains(&q.options.len()) {
                    Some(format!("{} options (need 2 to 4)", q.options.len()))
                } else if q.correct_index >= q.options.len() {
                    Some(format!("correct index {} out of range", q.correct_index))
                } else {
                    None
                };
                if let Some(reason) = reason {
                    issues.push(ValidationIssue::InvalidQuestion { language: language.clone(), question_id: qid(), reason });
                }
                if let Some(image) = &q.image_ref {
                    let rel = Path::new(image);
                    if !is_contained(rel) {
                        issues.push(ValidationIssue::UnsafeImagePath {
                            language: language.clone(),
                            question_id: qid(),
                            path: image.clone(),
                        });
                    } else if !image_root.join(rel).is_file() {
                        issues.push(ValidationIssue::MissingImage {
                            language: language.clone(),
                            question_id: qid(),
                            path: image_root.join(rel).display().to_string(),
                        });
                    }
                }
            }
        }
    }
    issues
}

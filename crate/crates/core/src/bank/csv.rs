use std::collections::HashMap;

use thiserror::Error;

use super::{topic_slug, LanguageBank, QuestionBank, QuestionRecord, Topic};

/// Required first row of a question CSV.
pub const CSV_HEADER: [&str; 9] =
    ["topic", "language", "prompt", "image", "option1", "option2", "option3", "option4", "correct"];

/// A problem with one CSV row. `row` is the 1-based line on which the
/// offending record starts; the header is row 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing or malformed header; expected `{}`", CSV_HEADER.join(","))]
    MissingHeader,
    #[error("row {row}: expected {} columns, found {found}", CSV_HEADER.len())]
    BadColumnCount { row: u64, found: usize },
    #[error("row {row}: empty {field}")]
    MissingField { row: u64, field: &'static str },
    #[error("row {row}: empty prompt")]
    EmptyPrompt { row: u64 },
    #[error("row {row}: options must be 2 to 4 non-empty texts filled from option1 onwards")]
    BadOptions { row: u64 },
    #[error("row {row}: correct column `{value}` is not a number")]
    InvalidCorrect { row: u64, value: String },
    #[error("row {row}: correct option {value} out of range 1..={options}")]
    CorrectIndexOutOfRange { row: u64, value: i64, options: usize },
    #[error("row {row}: duplicates the question on row {first_row}")]
    DuplicateQuestion { row: u64, first_row: u64 },
    #[error("row {row}: {message}")]
    Malformed { row: u64, message: String },
}

impl ParseError {
    pub fn row(&self) -> Option<u64> {
        match self {
            ParseError::MissingHeader => Some(1),
            ParseError::BadColumnCount { row, .. }
            | ParseError::MissingField { row, .. }
            | ParseError::EmptyPrompt { row }
            | ParseError::BadOptions { row }
            | ParseError::InvalidCorrect { row, .. }
            | ParseError::CorrectIndexOutOfRange { row, .. }
            | ParseError::DuplicateQuestion { row, .. }
            | ParseError::Malformed { row, .. } => Some(*row),
        }
    }
}

/// Parses a question CSV into a bank. Every row is checked; all problems are
/// reported together.
pub fn parse_question_csv(input: &[u8]) -> Result<QuestionBank, Vec<ParseError>> {
    let input = input.strip_prefix(b"\xef\xbb\xbf").unwrap_or(input);
    let mut reader = ::csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut records = reader.records();

    let header_ok = match records.next() {
        Some(Ok(header)) => {
            header.len() == CSV_HEADER.len()
                && header.iter().zip(CSV_HEADER).all(|(got, want)| got.trim().eq_ignore_ascii_case(want))
        }
        _ => false,
    };
    if !header_ok {
        return Err(vec![ParseError::MissingHeader]);
    }

    let mut errors = Vec::new();
    let mut bank = QuestionBank::default();
    // (language, topic, prompt, image) -> first row
    let mut seen: HashMap<(String, String, String, Option<String>), u64> = HashMap::new();

    for (index, result) in records.enumerate() {
        let fallback_row = index as u64 + 2;
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                let row = e.position().map(|p| p.line()).unwrap_or(fallback_row);
                errors.push(ParseError::Malformed { row, message: e.to_string() });
                continue;
            }
        };
        let row = record.position().map(|p| p.line()).unwrap_or(fallback_row);
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() != CSV_HEADER.len() {
            errors.push(ParseError::BadColumnCount { row, found: record.len() });
            continue;
        }
        let field = |i: usize| record[i].trim();

        let topic_name = field(0);
        let language = field(1);
        let prompt = field(2);
        let image = Some(field(3)).filter(|s| !s.is_empty()).map(str::to_owned);
        let mut row_errors = Vec::new();
        if topic_name.is_empty() || topic_slug(topic_name).is_empty() {
            row_errors.push(ParseError::MissingField { row, field: "topic" });
        }
        if language.is_empty() {
            row_errors.push(ParseError::MissingField { row, field: "language" });
        }
        if prompt.is_empty() {
            row_errors.push(ParseError::EmptyPrompt { row });
        }

        let raw_options: Vec<&str> = (4..8).map(field).collect();
        let filled = raw_options.iter().rposition(|o| !o.is_empty()).map_or(0, |i| i + 1);
        let options: Vec<String> = raw_options[..filled].iter().map(|s| s.to_string()).collect();
        let options_ok = options.len() >= 2 && options.iter().all(|o| !o.is_empty());
        if !options_ok {
            row_errors.push(ParseError::BadOptions { row });
        }

        let correct_index = match field(8).parse::<i64>() {
            Ok(v) if options_ok && (v < 1 || v as usize > options.len()) => {
                row_errors.push(ParseError::CorrectIndexOutOfRange { row, value: v, options: options.len() });
                None
            }
            Ok(v) => Some((v - 1).max(0) as usize),
            Err(_) => {
                row_errors.push(ParseError::InvalidCorrect { row, value: field(8).to_string() });
                None
            }
        };

        if !row_errors.is_empty() {
            errors.extend(row_errors);
            continue;
        }
        let topic_id = topic_slug(topic_name);
        let key = (language.to_string(), topic_id.clone(), prompt.to_string(), image.clone());
        if let Some(&first_row) = seen.get(&key) {
            errors.push(ParseError::DuplicateQuestion { row, first_row });
            continue;
        }
        seen.insert(key, row);

        let lang: &mut LanguageBank = bank.languages.entry(language.to_string()).or_default();
        let topic = match lang.topics.iter().position(|t| t.id == topic_id) {
            Some(i) => &mut lang.topics[i],
            None => {
                lang.topics.push(Topic { id: topic_id.clone(), name: topic_name.to_string(), questions: Vec::new() });
                lang.topics.last_mut().expect("just pushed")
            }
        };
        let ordinal = topic.questions.len() + 1;
        topic.questions.push(QuestionRecord {
            question_id: format!("{topic_id}-{ordinal:04}"),
            topic_id,
            language: language.to_string(),
            prompt: prompt.to_string(),
            image_ref: image,
            options,
            correct_index: correct_index.expect("validated above"),
        });
    }

    if errors.is_empty() {
        Ok(bank)
    } else {
        Err(errors)
    }
}

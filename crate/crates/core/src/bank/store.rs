use thiserror::Error;

use super::QuestionBank;

pub const BANK_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BankError {
    #[error("unsupported bank version {0} (expected {BANK_VERSION})")]
    UnsupportedVersion(u64),
    #[error("malformed bank: {0}")]
    MalformedBank(String),
}

/// Serializes a bank to its canonical byte form (pretty JSON, trailing newline).
pub fn compile_bank(bank: &QuestionBank) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(bank).expect("bank is always serializable");
    out.push(b'\n');
    out
}

pub fn load_bank(bytes: &[u8]) -> Result<QuestionBank, BankError> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| BankError::MalformedBank(e.to_string()))?;
    match value.get("version").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(BANK_VERSION) => {}
        Some(v) => return Err(BankError::UnsupportedVersion(v)),
        None => return Err(BankError::MalformedBank("missing `version`".into())),
    }
    let mut bank: QuestionBank =
        serde_json::from_value(value).map_err(|e| BankError::MalformedBank(e.to_string()))?;
    bank.fill_context();
    Ok(bank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bank::parse_question_csv;

    fn one_question() -> QuestionBank {
        parse_question_csv(b"topic,language,prompt,image,option1,option2,option3,option4,correct\nFood,en,Q,,A,B,,,2\n")
            .unwrap()
    }

    #[test]
    fn round_trip() {
        let bank = one_question();
        let bytes = compile_bank(&bank);
        assert_eq!(load_bank(&bytes).unwrap(), bank);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("\"correct\": 1"));
        assert!(text.contains("\"image\": null"));
    }

    #[test]
    fn truncated_is_malformed() {
        let bytes = compile_bank(&one_question());
        let cut = &bytes[..bytes.len() / 2];
        assert!(matches!(load_bank(cut), Err(BankError::MalformedBank(_))));
    }

    #[test]
    fn wrong_version() {
        assert_eq!(
            load_bank(br#"{"version": 2, "languages": {}}"#),
            Err(BankError::UnsupportedVersion(2))
        );
        assert!(matches!(load_bank(br#"{"languages": {}}"#), Err(BankError::MalformedBank(_))));
    }
}

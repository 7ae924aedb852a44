//! `key = value` configuration files.
//!
//! Keys before the first `[section]` header apply to every command; keys in
//! `[name]` apply only to the subcommand `name` and override the global ones.
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

/// Keys understood by at least one command.
pub const KNOWN_KEYS: &[&str] = &[
    "q", "ell", "cutoff", "tol", "format", "out", "seed", "check", "j", "i", "n", "k", "pattern", "op", "symbol",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// The values that apply to `command`, with their line numbers.
pub fn parse(text: &str, command: &str) -> Result<BTreeMap<String, (String, usize)>, ConfigError> {
    let mut global = BTreeMap::new();
    let mut scoped = BTreeMap::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError { line: line_no, message: format!("unterminated section header {line:?}") })?;
            section = Some(name.trim().to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError { line: line_no, message: format!("expected `key = value`, found {line:?}") })?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError { line: line_no, message: format!("unknown key {key:?}") });
        }
        let value = value.trim().trim_matches('"').to_string();
        match &section {
            None => {
                global.insert(key, (value, line_no));
            }
            Some(s) if s == command => {
                scoped.insert(key, (value, line_no));
            }
            Some(_) => {}
        }
    }
    global.extend(scoped);
    Ok(global)
}

//! `[section]` / `key = value` text files with `#` comments.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key {key:?} in [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: unknown fabric {name:?}")]
    UnknownFabric { line: usize, name: String },
}

impl SpecError {
    pub fn line(&self) -> usize {
        match self {
            SpecError::Parse { line, .. } | SpecError::UnknownKey { line, .. } | SpecError::UnknownFabric { line, .. } => {
                *line
            }
        }
    }

    pub(crate) fn parse(line: usize, message: impl fmt::Display) -> Self {
        SpecError::Parse { line, message: message.to_string() }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    used: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Section {
    pub name: String,
    pub line: usize,
    entries: Vec<Entry>,
}

impl Section {
    pub fn take(&mut self, key: &str) -> Option<Entry> {
        let e = self.entries.iter_mut().find(|e| e.key == key && !e.used)?;
        e.used = true;
        Some(e.clone())
    }

    pub fn require(&mut self, key: &str) -> Result<Entry, SpecError> {
        let line = self.line;
        let name = self.name.clone();
        self.take(key).ok_or_else(|| SpecError::parse(line, format!("[{name}] is missing required key {key:?}")))
    }

    /// Errors on the first key nobody asked for.
    pub fn finish(&self) -> Result<(), SpecError> {
        match self.entries.iter().find(|e| !e.used) {
            Some(e) => Err(SpecError::UnknownKey { line: e.line, section: self.name.clone(), key: e.key.clone() }),
            None => Ok(()),
        }
    }
}

#[derive(Debug)]
pub(crate) struct Document {
    sections: Vec<Section>,
    pub last_line: usize,
}

impl Document {
    pub fn parse(text: &str, known: &[&str]) -> Result<Document, SpecError> {
        let mut sections: Vec<Section> = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| SpecError::parse(line, "section header must end with ']'"))?
                    .trim();
                if !known.contains(&name) {
                    return Err(SpecError::parse(line, format!("unknown section [{name}]")));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(SpecError::parse(line, format!("duplicate section [{name}]")));
                }
                sections.push(Section { name: name.to_string(), line, entries: Vec::new() });
                continue;
            }
            let (key, value) =
                body.split_once('=').ok_or_else(|| SpecError::parse(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(SpecError::parse(line, "empty key"));
            }
            let section =
                sections.last_mut().ok_or_else(|| SpecError::parse(line, "entry before any [section] header"))?;
            if section.entries.iter().any(|e| e.key == key) {
                return Err(SpecError::parse(line, format!("duplicate key {key:?}")));
            }
            section.entries.push(Entry { key: key.to_string(), value: value.to_string(), line, used: false });
        }
        Ok(Document { sections, last_line })
    }

    pub fn section(&mut self, name: &str) -> Option<Section> {
        let i = self.sections.iter().position(|s| s.name == name)?;
        Some(self.sections.remove(i))
    }

    pub fn require(&mut self, name: &str) -> Result<Section, SpecError> {
        let line = self.last_line.max(1);
        self.section(name).ok_or_else(|| SpecError::parse(line, format!("missing section [{name}]")))
    }
}

impl Entry {
    pub fn number(&self) -> Result<f64, SpecError> {
        let v: f64 = self
            .value
            .parse()
            .map_err(|_| SpecError::parse(self.line, format!("{}: expected a number, got {:?}", self.key, self.value)))?;
        if !v.is_finite() {
            return Err(SpecError::parse(self.line, format!("{}: value must be finite", self.key)));
        }
        Ok(v)
    }

    pub fn positive(&self) -> Result<f64, SpecError> {
        let v = self.number()?;
        if v <= 0.0 {
            return Err(SpecError::parse(self.line, format!("{} must be positive", self.key)));
        }
        Ok(v)
    }

    pub fn non_negative(&self) -> Result<f64, SpecError> {
        let v = self.number()?;
        if v < 0.0 {
            return Err(SpecError::parse(self.line, format!("{} must not be negative", self.key)));
        }
        Ok(v)
    }

    pub fn integer<T: std::str::FromStr>(&self) -> Result<T, SpecError> {
        self.value
            .parse()
            .map_err(|_| SpecError::parse(self.line, format!("{}: expected an integer, got {:?}", self.key, self.value)))
    }

    pub fn error(&self, message: impl fmt::Display) -> SpecError {
        SpecError::parse(self.line, format!("{}: {message}", self.key))
    }
}

/// `x, y` in millimetres.
pub(crate) fn parse_pair(s: &str) -> Option<(f64, f64)> {
    let (a, b) = s.split_once(',')?;
    let x: f64 = a.trim().parse().ok()?;
    let y: f64 = b.trim().parse().ok()?;
    (x.is_finite() && y.is_finite()).then_some((x, y))
}

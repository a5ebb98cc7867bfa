use std::fmt;

/// One named property and its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub checked: usize,
    /// The first counterexample, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn record(&mut self, name: impl Into<String>, checked: usize, failure: Option<String>) {
        self.entries.push(Entry {
            name: name.into(),
            checked,
            failure,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.failure.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.failure.is_some())
    }

    pub fn checked(&self) -> usize {
        self.entries.iter().map(|e| e.checked).sum()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.failure {
                None => writeln!(f, "ok   {} ({} checked)", e.name, e.checked)?,
                Some(why) => writeln!(f, "FAIL {}: {why}", e.name)?,
            }
        }
        Ok(())
    }
}

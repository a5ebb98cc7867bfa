use std::fmt;
use std::str::FromStr;

/// A syntactic category of terms.
///
/// `Hold` (`•`) marks layers with exclusive store access, `Cede` (`∘`) layers in
/// which the environment may interleave, and `Star` (`⋆`) is the lone sort of the
/// single-sorted theories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Hold,
    Cede,
    Star,
}

impl Sort {
    pub fn symbol(self) -> &'static str {
        match self {
            Sort::Hold => "•",
            Sort::Cede => "∘",
            Sort::Star => "⋆",
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Hold => "hold",
            Sort::Cede => "cede",
            Sort::Star => "star",
        }
    }

    /// Whether the environment may interleave at a trace end of this sort.
    pub fn cedes(self) -> bool {
        self != Sort::Hold
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Sort {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hold" | "•" => Ok(Sort::Hold),
            "cede" | "∘" => Ok(Sort::Cede),
            "star" | "⋆" => Ok(Sort::Star),
            _ => Err(format!("unknown sort `{s}` (expected hold, cede or star)")),
        }
    }
}

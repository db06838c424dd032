use std::fmt;

use serde::{Deserialize, Serialize};

/// Binary complexity label. `Complex` is the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Simple,
    Complex,
}

impl Label {
    /// An annotator who cannot confidently define a word marks it complex.
    pub fn from_knows_word(knows_word: bool) -> Self {
        if knows_word {
            Label::Simple
        } else {
            Label::Complex
        }
    }

    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Label::Simple),
            1 => Some(Label::Complex),
            _ => None,
        }
    }

    pub fn complex_if(complex: bool) -> Self {
        if complex {
            Label::Complex
        } else {
            Label::Simple
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Label::Simple => 0,
            Label::Complex => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.bit())
    }

    pub fn is_complex(self) -> bool {
        self == Label::Complex
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Simple => Label::Complex,
            Label::Complex => Label::Simple,
        }
    }

    /// The single binarization rule for model probabilities.
    pub fn from_probability(p: f64) -> Self {
        if p > 0.5 {
            Label::Complex
        } else {
            Label::Simple
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" | "simple" => Ok(Label::Simple),
            "1" | "complex" => Ok(Label::Complex),
            other => Err(format!("invalid label {other:?}; expected 0 or 1")),
        }
    }
}

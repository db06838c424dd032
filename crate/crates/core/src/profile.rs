//! Annotator demographics collected before a session starts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proficiency {
    Beginner,
    Intermediate,
    Advanced,
    NearNative,
    Native,
}

impl Proficiency {
    pub const ALL: [Proficiency; 5] = [
        Proficiency::Beginner,
        Proficiency::Intermediate,
        Proficiency::Advanced,
        Proficiency::NearNative,
        Proficiency::Native,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Proficiency::Beginner => "beginner",
            Proficiency::Intermediate => "intermediate",
            Proficiency::Advanced => "advanced",
            Proficiency::NearNative => "near_native",
            Proficiency::Native => "native",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Proficiency::Beginner => "Beginner",
            Proficiency::Intermediate => "Intermediate",
            Proficiency::Advanced => "Advanced",
            Proficiency::NearNative => "Near Native",
            Proficiency::Native => "Native",
        }
    }
}

impl fmt::Display for Proficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Proficiency {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_lowercase().replace([' ', '-'], "_");
        Proficiency::ALL
            .into_iter()
            .find(|p| p.as_str() == norm)
            .ok_or_else(|| format!("unknown proficiency {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReadingHours {
    #[serde(rename = "0-10")]
    UpTo10,
    #[serde(rename = "10-20")]
    From10To20,
    #[serde(rename = "20-30")]
    From20To30,
    #[serde(rename = "30-40")]
    From30To40,
    #[serde(rename = "40+")]
    Over40,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Education {
    Graduate,
    Undergraduate,
    HighSchool,
    VocationalTraining,
    NoFormalEducation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgeBand {
    #[serde(rename = "18-24")]
    From18To24,
    #[serde(rename = "25-34")]
    From25To34,
    #[serde(rename = "35-44")]
    From35To44,
    #[serde(rename = "45-54")]
    From45To54,
    #[serde(rename = "55+")]
    Over55,
}

/// Only `proficiency` is required.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatorProfile {
    pub proficiency: Proficiency,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_language: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hours_reading_weekly: Option<ReadingHours>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub education: Option<Education>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age: Option<AgeBand>,
}

impl AnnotatorProfile {
    pub fn new(proficiency: Proficiency) -> Self {
        AnnotatorProfile {
            proficiency,
            first_language: None,
            hours_reading_weekly: None,
            education: None,
            age: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_band_labels() {
        let p: AnnotatorProfile = serde_json::from_str(
            r#"{"proficiency":"near_native","first_language":"Spanish","hours_reading_weekly":"10-20","education":"high_school","age":"55+"}"#,
        )
        .unwrap();
        assert_eq!(p.proficiency, Proficiency::NearNative);
        assert_eq!(p.age, Some(AgeBand::Over55));
        assert!(serde_json::from_str::<AnnotatorProfile>(r#"{"first_language":"French"}"#).is_err());
        assert_eq!("Near Native".parse::<Proficiency>().unwrap(), Proficiency::NearNative);
    }
}

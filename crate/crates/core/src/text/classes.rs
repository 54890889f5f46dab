use std::collections::HashMap;

use crate::error::{Error, Result};

/// Class id returned for words absent from the map.
pub const UNKNOWN_CLASS: &str = "UNK-CLASS";

/// Word to class-id mapping, total through the [`UNKNOWN_CLASS`] fallback.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordClassMap {
    classes: HashMap<String, String>,
}

impl WordClassMap {
    /// Parses `word<TAB>class-id` lines. Later entries for the same word win.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut classes = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            match (fields.next(), fields.next(), fields.next()) {
                (Some(word), Some(class), None)
                    if valid_field(word) && valid_field(class) =>
                {
                    classes.insert(word.to_owned(), class.to_owned());
                }
                _ => return Err(Error::parse(i + 1, "expected `word<TAB>class-id`")),
            }
        }
        Ok(WordClassMap { classes })
    }

    pub fn from_pairs<I, W, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (W, C)>,
        W: Into<String>,
        C: Into<String>,
    {
        WordClassMap {
            classes: pairs
                .into_iter()
                .map(|(w, c)| (w.into(), c.into()))
                .collect(),
        }
    }

    pub fn class_of(&self, word: &str) -> &str {
        self.classes
            .get(word)
            .map(String::as_str)
            .unwrap_or(UNKNOWN_CLASS)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn valid_field(s: &str) -> bool {
    !s.is_empty() && !s.contains(char::is_whitespace)
}

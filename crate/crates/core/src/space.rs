use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finite carrier set with labelled points.
///
/// Points are addressed by their index in construction order everywhere in
/// the crate; labels only matter at the edges (files, reports).
#[derive(Clone)]
pub struct FiniteSpace {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl FiniteSpace {
    pub fn new<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::MalformedInput(format!("space `{name}` is empty")));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::MalformedInput(format!("duplicate label `{label}` in space `{name}`")));
            }
        }
        Ok(FiniteSpace { name, labels, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; spaces are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn lookup(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::MalformedInput(format!("unknown label `{label}` in space `{}`", self.name)))
    }

    /// True when every label is a single character, so words over this
    /// space can be written as plain concatenations.
    pub fn single_char_labels(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }

    /// Renders a word: concatenated when labels are single characters,
    /// otherwise as a JSON array.
    pub fn render_word(&self, word: &[usize]) -> String {
        if self.single_char_labels() {
            word.iter().map(|&i| self.label(i)).collect()
        } else {
            let parts: Vec<&str> = word.iter().map(|&i| self.label(i)).collect();
            serde_json::to_string(&parts).expect("string array serializes")
        }
    }

    /// Renders a set of points as `{a,b}`.
    pub fn render_set(&self, members: &[usize]) -> String {
        let parts: Vec<&str> = members.iter().map(|&i| self.label(i)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.labels == other.labels
    }
}

impl Eq for FiniteSpace {}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.labels)
    }
}

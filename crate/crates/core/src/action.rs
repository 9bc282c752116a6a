use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An action name such as `a`, `b1.set:T` or `s.push:1`.
///
/// Names of the form `focus.method` address a service; the focus is the text
/// before the first `.`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Action(String);

impl Action {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(Action(name))
        } else {
            Err(Error::InvalidAction(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn focus(&self) -> Option<&str> {
        self.0.split_once('.').map(|(focus, _)| focus)
    }

    /// The part after the focus, e.g. `set:T` for `b1.set:T`.
    pub fn method(&self) -> Option<&str> {
        self.0.split_once('.').map(|(_, method)| method)
    }
}

/// Length of the longest prefix of `s` that is an action name.
pub(crate) fn scan_name(s: &str) -> usize {
    let b = s.as_bytes();
    let ident = |from: usize| -> usize {
        if from < b.len() && b[from].is_ascii_alphabetic() {
            let mut i = from + 1;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            i
        } else {
            from
        }
    };
    let end = ident(0);
    if end == 0 {
        return 0;
    }
    if end < b.len() && b[end] == b'.' {
        let m = ident(end + 1);
        if m > end + 1 {
            if m < b.len() && b[m] == b':' {
                let mut i = m + 1;
                while i < b.len() && b[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                if i > m + 1 {
                    return i;
                }
            }
            return m;
        }
    }
    end
}

fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && scan_name(s) == s.len()
}

impl TryFrom<String> for Action {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Action::new(value)
    }
}

impl From<Action> for String {
    fn from(a: Action) -> String {
        a.0
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Action::new(s)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

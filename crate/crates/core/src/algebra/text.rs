//! Colon-separated text forms, e.g. `residuum:nilpotent:power:2`.

use crate::error::{Error, Result};

pub(crate) struct Tokens<'a> {
    source: &'a str,
    parts: Vec<&'a str>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    pub(crate) fn new(source: &'a str) -> Self {
        let parts = source.trim().split(':').map(str::trim).collect();
        Tokens {
            source,
            parts,
            pos: 0,
        }
    }

    pub(crate) fn next(&mut self, what: &str) -> Result<&'a str> {
        match self.parts.get(self.pos) {
            Some(tok) if !tok.is_empty() => {
                self.pos += 1;
                Ok(tok)
            }
            _ => Err(Error::Parse(format!(
                "'{}': expected {what} at position {}",
                self.source,
                self.pos + 1
            ))),
        }
    }

    pub(crate) fn number(&mut self, what: &str) -> Result<f64> {
        let tok = self.next(what)?;
        tok.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Parse(format!("'{}': '{tok}' is not a valid {what}", self.source)))
    }

    pub(crate) fn unknown(&self, tok: &str, what: &str) -> Error {
        Error::Parse(format!("'{}': unknown {what} '{tok}'", self.source))
    }

    pub(crate) fn finish(self) -> Result<()> {
        if self.pos == self.parts.len() {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "'{}': unexpected trailing '{}'",
                self.source,
                self.parts[self.pos..].join(":")
            )))
        }
    }
}

/// Implements `FromStr` and `Display` for a type with a token parser and a
/// `write_tokens` method.
macro_rules! text_form {
    ($ty:ty) => {
        impl std::str::FromStr for $ty {
            type Err = $crate::error::Error;

            fn from_str(s: &str) -> $crate::error::Result<Self> {
                let mut toks = $crate::algebra::text::Tokens::new(s);
                let v = <$ty>::parse_tokens(&mut toks)?;
                toks.finish()?;
                Ok(v)
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                self.write_tokens(f)
            }
        }

        impl serde::Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

pub(crate) use text_form;

//! Names and the fresh-name supply.
//!
//! Two disjoint namespaces exist: ordinary variables (`x`, `y`, ...) and
//! special channel names (`@a`, `@b`, ...). A variable and a special name
//! never compare equal, even when their identifiers coincide.
//!
//! Names drawn from a [`Fresh`] supply are stored by index and print as
//! `z1, z2, ...` (variables) and `@b1, @b2, ...` (specials). The parser maps
//! those spellings back onto the same indexed names, so printing and
//! re-parsing a term never confuses a fresh name with a user-written one.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Variable,
    Special,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Ident {
    Indexed(u32),
    Text(Arc<str>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    kind: Kind,
    ident: Ident,
}

const FRESH_VAR_PREFIX: &str = "z";
const FRESH_SPECIAL_PREFIX: &str = "b";

fn indexed_suffix(id: &str, prefix: &str) -> Option<u32> {
    let digits = id.strip_prefix(prefix)?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Name {
    /// A variable with the given identifier (no sigil).
    pub fn var(id: &str) -> Name {
        Name::new(Kind::Variable, id)
    }

    /// A special channel name; `id` is given without the `@` sigil.
    pub fn special(id: &str) -> Name {
        Name::new(Kind::Special, id)
    }

    pub fn new(kind: Kind, id: &str) -> Name {
        let prefix = match kind {
            Kind::Variable => FRESH_VAR_PREFIX,
            Kind::Special => FRESH_SPECIAL_PREFIX,
        };
        let ident = match indexed_suffix(id, prefix) {
            Some(n) => Ident::Indexed(n),
            None => Ident::Text(Arc::from(id)),
        };
        Name { kind, ident }
    }

    pub(crate) fn indexed(kind: Kind, n: u32) -> Name {
        Name {
            kind,
            ident: Ident::Indexed(n),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_var(&self) -> bool {
        self.kind == Kind::Variable
    }

    pub fn is_special(&self) -> bool {
        self.kind == Kind::Special
    }

    /// The identifier without the `@` sigil.
    pub fn ident(&self) -> String {
        match &self.ident {
            Ident::Indexed(n) => match self.kind {
                Kind::Variable => format!("{FRESH_VAR_PREFIX}{n}"),
                Kind::Special => format!("{FRESH_SPECIAL_PREFIX}{n}"),
            },
            Ident::Text(s) => s.to_string(),
        }
    }

    fn fresh_index(&self) -> Option<u32> {
        match self.ident {
            Ident::Indexed(n) => Some(n),
            Ident::Text(_) => None,
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == Kind::Special {
            f.write_str("@")?;
        }
        match &self.ident {
            Ident::Indexed(n) => match self.kind {
                Kind::Variable => write!(f, "{FRESH_VAR_PREFIX}{n}"),
                Kind::Special => write!(f, "{FRESH_SPECIAL_PREFIX}{n}"),
            },
            Ident::Text(s) => f.write_str(s),
        }
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Deterministic supply of fresh names.
///
/// Operations needing freshness take `&mut Fresh`; identical supplies yield
/// identical results. Before drawing names for some input, call one of the
/// `reserve*` methods so the supply skips every indexed name already present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fresh {
    next_var: u32,
    next_special: u32,
}

impl Default for Fresh {
    fn default() -> Self {
        Fresh::new()
    }
}

impl Fresh {
    pub fn new() -> Fresh {
        Fresh {
            next_var: 1,
            next_special: 1,
        }
    }

    pub fn var(&mut self) -> Name {
        let n = self.next_var;
        self.next_var += 1;
        Name::indexed(Kind::Variable, n)
    }

    pub fn special(&mut self) -> Name {
        let n = self.next_special;
        self.next_special += 1;
        Name::indexed(Kind::Special, n)
    }

    pub fn of_kind(&mut self, kind: Kind) -> Name {
        match kind {
            Kind::Variable => self.var(),
            Kind::Special => self.special(),
        }
    }

    /// Make sure `name` is never handed out by this supply.
    pub fn reserve(&mut self, name: &Name) {
        if let Some(n) = name.fresh_index() {
            let slot = match name.kind {
                Kind::Variable => &mut self.next_var,
                Kind::Special => &mut self.next_special,
            };
            if *slot <= n {
                *slot = n + 1;
            }
        }
    }

    pub fn reserve_all<'a>(&mut self, names: impl IntoIterator<Item = &'a Name>) {
        for n in names {
            self.reserve(n);
        }
    }

    pub fn reserve_term(&mut self, t: &crate::term::Term) {
        t.for_each_name(&mut |n| self.reserve(n));
    }

    pub fn reserve_vterm(&mut self, t: &crate::term::VTerm) {
        self.reserve_term(&t.to_term());
    }

    pub fn reserve_process(&mut self, p: &crate::process::Process) {
        p.for_each_name(&mut |n| self.reserve(n));
    }

    /// Supply that avoids every name of `t`.
    pub fn for_term(t: &crate::term::Term) -> Fresh {
        let mut f = Fresh::new();
        f.reserve_term(t);
        f
    }

    pub fn for_process(p: &crate::process::Process) -> Fresh {
        let mut f = Fresh::new();
        f.reserve_process(p);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_are_disjoint() {
        assert_ne!(Name::var("a"), Name::special("a"));
        assert_eq!(Name::var("a"), Name::var("a"));
    }

    #[test]
    fn fresh_spellings_round_trip() {
        let mut f = Fresh::new();
        let z = f.var();
        let b = f.special();
        assert_eq!(z.to_string(), "z1");
        assert_eq!(b.to_string(), "@b1");
        assert_eq!(Name::var("z1"), z);
        assert_eq!(Name::special("b1"), b);
        // leading zeros are ordinary text
        assert_ne!(Name::var("z01").to_string(), "z1");
    }

    #[test]
    fn reserve_skips_present_names() {
        let mut f = Fresh::new();
        f.reserve(&Name::var("z7"));
        f.reserve(&Name::special("b2"));
        assert_eq!(f.var(), Name::var("z8"));
        assert_eq!(f.special(), Name::special("b3"));
        // text names do not move the counter
        f.reserve(&Name::var("x"));
        assert_eq!(f.var(), Name::var("z9"));
    }
}

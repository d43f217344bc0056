//! One-hole positions inside terms and processes.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::name::Name;

/// A child selector inside a [`Term`](crate::term::Term) or
/// [`VTerm`](crate::term::VTerm).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermStep {
    /// Function position of an application.
    AppFun,
    /// Argument position of an application.
    AppArg,
    /// Body of an explicit substitution (crosses its binder).
    SubBody,
    /// Argument of an explicit substitution.
    SubArg,
    /// Body of an abstraction (never part of an evaluation context).
    LamBody,
}

/// A child selector inside a [`Process`](crate::process::Process).
/// Non-blocking contexts use only these; prefixes are never entered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcStep {
    ParLeft,
    ParRight,
    NuBody,
}

/// Path from a root to one subterm occurrence, together with the names bound
/// on the way (the Δ / Γ / Σ of the rules).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ContextPath<S> {
    pub steps: Vec<S>,
    pub captured: BTreeSet<Name>,
}

impl<S> Default for ContextPath<S> {
    fn default() -> Self {
        ContextPath {
            steps: Vec::new(),
            captured: BTreeSet::new(),
        }
    }
}

impl<S: Clone> ContextPath<S> {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn push(&mut self, step: S, binder: Option<&Name>) {
        self.steps.push(step);
        if let Some(b) = binder {
            self.captured.insert(b.clone());
        }
    }

    pub(crate) fn child(&self, step: S, binder: Option<&Name>) -> Self {
        let mut p = self.clone();
        p.push(step, binder);
        p
    }
}

impl<S: fmt::Debug> fmt::Display for ContextPath<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.steps)?;
        if !self.captured.is_empty() {
            f.write_str(" captures {")?;
            for (i, n) in self.captured.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{n}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

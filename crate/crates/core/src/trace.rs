//! Step labels and reduction traces.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Db,
    Ls,
    Vdb,
    Vls,
    Tensor,
    Bang,
}

impl Label {
    /// The process-side kind simulating a term-side step.
    pub fn pi_kind(self) -> Label {
        match self {
            Label::Db | Label::Vdb | Label::Tensor => Label::Tensor,
            Label::Ls | Label::Vls | Label::Bang => Label::Bang,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Db => "db",
            Label::Ls => "ls",
            Label::Vdb => "vdb",
            Label::Vls => "vls",
            Label::Tensor => "tensor",
            Label::Bang => "bang",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep<T> {
    pub label: Label,
    pub state: T,
}

/// A run from `start`; `normal` is set when the last state has no redex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace<T> {
    pub start: T,
    pub steps: Vec<TraceStep<T>>,
    pub normal: bool,
}

impl<T> Trace<T> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &T {
        self.steps.last().map_or(&self.start, |s| &s.state)
    }

    pub fn count(&self, label: Label) -> usize {
        self.steps.iter().filter(|s| s.label == label).count()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.steps.iter().map(|s| s.label).collect()
    }
}

impl<T: fmt::Display> fmt::Display for Trace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "     {}", self.start)?;
        for s in &self.steps {
            writeln!(f, "{:<4} {}", s.label, s.state)?;
        }
        if self.normal {
            write!(f, "normal form")
        } else {
            write!(f, "out of fuel")
        }
    }
}

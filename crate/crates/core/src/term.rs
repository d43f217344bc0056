//! Terms of the linear substitution calculus and of the value substitution
//! kernel, together with the binder machinery shared by both.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::context::TermStep;
use crate::name::{Fresh, Name};

/// `x | \x. t | t s | t[x/s]`. Both `Lam` and `Sub` bind their name in the
/// body only; the argument of a `Sub` lies outside the binder's scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Lam(Name, Box<Term>),
    App(Box<Term>, Box<Term>),
    Sub(Box<Term>, Name, Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(Name::var(x))
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(Name::var(x), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn sub(body: Term, x: &str, arg: Term) -> Term {
        Term::Sub(Box::new(body), Name::var(x), Box::new(arg))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Sub(b, _, a) => 1 + b.size() + a.size(),
        }
    }

    pub fn count_subs(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam(_, b) => b.count_subs(),
            Term::App(f, a) => f.count_subs() + a.count_subs(),
            Term::Sub(b, _, a) => 1 + b.count_subs() + a.count_subs(),
        }
    }

    pub fn is_pure(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Lam(_, b) => b.is_pure(),
            Term::App(f, a) => f.is_pure() && a.is_pure(),
            Term::Sub(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Sub(b, x, a) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Lam(y, b) => y != x && b.is_free(x),
            Term::App(f, a) => f.is_free(x) || a.is_free(x),
            Term::Sub(b, y, a) => a.is_free(x) || (y != x && b.is_free(x)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Visit every name occurrence, binders included.
    pub fn for_each_name(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Term::Var(x) => f(x),
            Term::Lam(x, b) => {
                f(x);
                b.for_each_name(f);
            }
            Term::App(a, b) => {
                a.for_each_name(f);
                b.for_each_name(f);
            }
            Term::Sub(b, x, a) => {
                f(x);
                b.for_each_name(f);
                a.for_each_name(f);
            }
        }
    }

    /// A string equal for two terms iff they are α-equivalent.
    pub fn alpha_key(&self) -> String {
        let mut s = String::with_capacity(self.size() * 3);
        let mut scope = Vec::new();
        self.write_key(&mut scope, &mut s);
        s
    }

    fn write_key(&self, scope: &mut Vec<Name>, out: &mut String) {
        match self {
            Term::Var(x) => match scope.iter().rposition(|b| b == x) {
                Some(l) => {
                    let _ = write!(out, "^{l}");
                }
                None => {
                    let _ = write!(out, "{x}");
                }
            },
            Term::Lam(x, b) => {
                out.push_str("\\.");
                scope.push(x.clone());
                b.write_key(scope, out);
                scope.pop();
            }
            Term::App(f, a) => {
                out.push('(');
                f.write_key(scope, out);
                out.push(' ');
                a.write_key(scope, out);
                out.push(')');
            }
            Term::Sub(b, x, a) => {
                out.push('[');
                scope.push(x.clone());
                b.write_key(scope, out);
                scope.pop();
                out.push('/');
                a.write_key(scope, out);
                out.push(']');
            }
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other || self.alpha_key() == other.alpha_key()
    }

    /// Binders renamed by depth (`v0`, `v1`, ...), choosing a prefix that no
    /// free variable uses. α-equivalent terms have identical canonical forms.
    pub fn canonical(&self) -> Term {
        let prefix = canonical_prefix("v", &self.free_vars());
        let mut scope = Vec::new();
        self.canon_rec(&prefix, &mut scope)
    }

    fn canon_rec(&self, prefix: &str, scope: &mut Vec<(Name, Name)>) -> Term {
        match self {
            Term::Var(x) => match scope.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Term::Var(new.clone()),
                None => Term::Var(x.clone()),
            },
            Term::Lam(x, b) => {
                let nx = Name::var(&format!("{prefix}{}", scope.len()));
                scope.push((x.clone(), nx.clone()));
                let nb = b.canon_rec(prefix, scope);
                scope.pop();
                Term::Lam(nx, Box::new(nb))
            }
            Term::App(f, a) => Term::App(
                Box::new(f.canon_rec(prefix, scope)),
                Box::new(a.canon_rec(prefix, scope)),
            ),
            Term::Sub(b, x, a) => {
                let na = a.canon_rec(prefix, scope);
                let nx = Name::var(&format!("{prefix}{}", scope.len()));
                scope.push((x.clone(), nx.clone()));
                let nb = b.canon_rec(prefix, scope);
                scope.pop();
                Term::Sub(Box::new(nb), nx, Box::new(na))
            }
        }
    }

    /// Replace free occurrences of `from` by `to`. `to` must not be bound
    /// anywhere in `self` (callers pass freshly drawn names).
    pub(crate) fn rename_free(&self, from: &Name, to: &Name) -> Term {
        match self {
            Term::Var(x) if x == from => Term::Var(to.clone()),
            Term::Var(_) => self.clone(),
            Term::Lam(x, _) if x == from => self.clone(),
            Term::Lam(x, b) => Term::Lam(x.clone(), Box::new(b.rename_free(from, to))),
            Term::App(f, a) => Term::App(Box::new(f.rename_free(from, to)), Box::new(a.rename_free(from, to))),
            Term::Sub(b, x, a) => {
                let na = a.rename_free(from, to);
                let nb = if x == from {
                    (**b).clone()
                } else {
                    b.rename_free(from, to)
                };
                Term::Sub(Box::new(nb), x.clone(), Box::new(na))
            }
        }
    }

    /// Rename every bound name to a fresh one, logging `(new, old)` pairs.
    pub fn freshen_bound(&self, fresh: &mut Fresh, log: &mut Renames) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Lam(x, b) => {
                let nx = log_fresh(x, fresh, log);
                let nb = b.rename_free(x, &nx).freshen_bound(fresh, log);
                Term::Lam(nx, Box::new(nb))
            }
            Term::App(f, a) => Term::App(
                Box::new(f.freshen_bound(fresh, log)),
                Box::new(a.freshen_bound(fresh, log)),
            ),
            Term::Sub(b, x, a) => {
                let na = a.freshen_bound(fresh, log);
                let nx = log_fresh(x, fresh, log);
                let nb = b.rename_free(x, &nx).freshen_bound(fresh, log);
                Term::Sub(Box::new(nb), nx, Box::new(na))
            }
        }
    }

    /// Apply `f` to every name occurrence, binders included.
    pub fn map_names(&self, f: &impl Fn(&Name) -> Name) -> Term {
        match self {
            Term::Var(x) => Term::Var(f(x)),
            Term::Lam(x, b) => Term::Lam(f(x), Box::new(b.map_names(f))),
            Term::App(a, b) => Term::App(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Term::Sub(b, x, a) => Term::Sub(Box::new(b.map_names(f)), f(x), Box::new(a.map_names(f))),
        }
    }

    /// α-equivalent term in which binders are pairwise distinct and distinct
    /// from the free variables. Binders already satisfying this keep their
    /// names.
    pub fn distinct_binders(&self, fresh: &mut Fresh) -> Term {
        fresh.reserve_term(self);
        let mut used = self.free_vars();
        self.distinct_rec(&mut used, fresh)
    }

    fn distinct_rec(&self, used: &mut BTreeSet<Name>, fresh: &mut Fresh) -> Term {
        let mut pick = |x: &Name, body: &Term, used: &mut BTreeSet<Name>| -> (Name, Term) {
            if used.insert(x.clone()) {
                (x.clone(), body.clone())
            } else {
                let nx = fresh.var();
                used.insert(nx.clone());
                (nx.clone(), body.rename_free(x, &nx))
            }
        };
        match self {
            Term::Var(_) => self.clone(),
            Term::Lam(x, b) => {
                let (nx, nb) = pick(x, b, used);
                Term::Lam(nx, Box::new(nb.distinct_rec(used, fresh)))
            }
            Term::App(f, a) => {
                let nf = f.distinct_rec(used, fresh);
                let na = a.distinct_rec(used, fresh);
                Term::App(Box::new(nf), Box::new(na))
            }
            Term::Sub(b, x, a) => {
                let (nx, nb) = pick(x, b, used);
                let nb = nb.distinct_rec(used, fresh);
                let na = a.distinct_rec(used, fresh);
                Term::Sub(Box::new(nb), nx, Box::new(na))
            }
        }
    }

    /// Capture-avoiding `self{x := s}`.
    pub fn meta_subst(&self, x: &Name, s: &Term, fresh: &mut Fresh) -> Term {
        fresh.reserve_term(self);
        fresh.reserve_term(s);
        let fvs = s.free_vars();
        self.subst_rec(x, s, &fvs, fresh)
    }

    fn subst_rec(&self, x: &Name, s: &Term, fvs: &BTreeSet<Name>, fresh: &mut Fresh) -> Term {
        match self {
            Term::Var(y) if y == x => s.clone(),
            Term::Var(_) => self.clone(),
            Term::Lam(y, b) => {
                let (ny, nb) = subst_binder(y, b, x, s, fvs, fresh);
                Term::Lam(ny, Box::new(nb))
            }
            Term::App(f, a) => Term::App(
                Box::new(f.subst_rec(x, s, fvs, fresh)),
                Box::new(a.subst_rec(x, s, fvs, fresh)),
            ),
            Term::Sub(b, y, a) => {
                let na = a.subst_rec(x, s, fvs, fresh);
                let (ny, nb) = subst_binder(y, b, x, s, fvs, fresh);
                Term::Sub(Box::new(nb), ny, Box::new(na))
            }
        }
    }

    /// Unfold every explicit substitution into a meta-level substitution.
    pub fn unfold(&self) -> PureTerm {
        let mut fresh = Fresh::for_term(self);
        PureTerm(self.unfold_rec(&mut fresh))
    }

    fn unfold_rec(&self, fresh: &mut Fresh) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Lam(x, b) => Term::Lam(x.clone(), Box::new(b.unfold_rec(fresh))),
            Term::App(f, a) => Term::App(Box::new(f.unfold_rec(fresh)), Box::new(a.unfold_rec(fresh))),
            Term::Sub(b, x, a) => {
                let ub = b.unfold_rec(fresh);
                let ua = a.unfold_rec(fresh);
                let fvs = ua.free_vars();
                ub.subst_rec(x, &ua, &fvs, fresh)
            }
        }
    }

    pub fn at(&self, steps: &[TermStep]) -> Option<&Term> {
        let mut cur = self;
        for s in steps {
            cur = match (s, cur) {
                (TermStep::AppFun, Term::App(f, _)) => f,
                (TermStep::AppArg, Term::App(_, a)) => a,
                (TermStep::SubBody, Term::Sub(b, _, _)) => b,
                (TermStep::SubArg, Term::Sub(_, _, a)) => a,
                (TermStep::LamBody, Term::Lam(_, b)) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Rebuild `self` with the subterm at `steps` replaced by `f(subterm)`.
    pub fn replace_at(&self, steps: &[TermStep], f: impl FnOnce(&Term) -> Term) -> Option<Term> {
        let Some((first, rest)) = steps.split_first() else {
            return Some(f(self));
        };
        Some(match (first, self) {
            (TermStep::AppFun, Term::App(a, b)) => Term::App(Box::new(a.replace_at(rest, f)?), b.clone()),
            (TermStep::AppArg, Term::App(a, b)) => Term::App(a.clone(), Box::new(b.replace_at(rest, f)?)),
            (TermStep::SubBody, Term::Sub(b, x, a)) => {
                Term::Sub(Box::new(b.replace_at(rest, f)?), x.clone(), a.clone())
            }
            (TermStep::SubArg, Term::Sub(b, x, a)) => Term::Sub(b.clone(), x.clone(), Box::new(a.replace_at(rest, f)?)),
            (TermStep::LamBody, Term::Lam(x, b)) => Term::Lam(x.clone(), Box::new(b.replace_at(rest, f)?)),
            _ => return None,
        })
    }

    /// Every subterm occurrence, in pre-order.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            match t {
                Term::Var(_) => {}
                Term::Lam(_, b) => stack.push(b),
                Term::App(f, a) | Term::Sub(f, _, a) => {
                    stack.push(a);
                    stack.push(f);
                }
            }
        }
        out
    }
}

/// `(new, old)` pairs recorded when binders are renamed.
pub type Renames = Vec<(Name, Name)>;

pub(crate) fn log_fresh(old: &Name, fresh: &mut Fresh, log: &mut Renames) -> Name {
    let n = fresh.of_kind(old.kind());
    log.push((n.clone(), old.clone()));
    n
}

/// Follows logged renamings back to the name they started from.
#[derive(Clone, Debug, Default)]
pub struct Origins(std::collections::HashMap<Name, Name>);

impl Origins {
    pub fn record(&mut self, log: &Renames) {
        for (new, old) in log {
            self.0.insert(new.clone(), old.clone());
        }
    }

    pub fn resolve(&self, n: &Name) -> Name {
        let mut cur = n;
        while let Some(prev) = self.0.get(cur) {
            cur = prev;
        }
        cur.clone()
    }
}

fn subst_binder(y: &Name, body: &Term, x: &Name, s: &Term, fvs: &BTreeSet<Name>, fresh: &mut Fresh) -> (Name, Term) {
    if y == x || !body.is_free(x) {
        return (y.clone(), body.clone());
    }
    if fvs.contains(y) {
        let ny = fresh.var();
        let renamed = body.rename_free(y, &ny);
        let nb = renamed.subst_rec(x, s, fvs, fresh);
        (ny, nb)
    } else {
        (y.clone(), body.subst_rec(x, s, fvs, fresh))
    }
}

/// First prefix among `base`, `base_`, `base__`, ... such that no name in
/// `avoid` is spelled `prefix` followed by digits.
pub(crate) fn canonical_prefix<'a>(base: &str, avoid: impl IntoIterator<Item = &'a Name> + Clone) -> String {
    let mut prefix = base.to_string();
    loop {
        let clash = avoid.clone().into_iter().any(|n| {
            let id = n.ident();
            id.strip_prefix(prefix.as_str())
                .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        });
        if !clash {
            return prefix;
        }
        prefix.push('_');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f)
    }
}

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Lam(x, b) => {
            write!(f, "\\{x}. ")?;
            fmt_term(b, f)
        }
        _ => fmt_app(t, f),
    }
}

fn fmt_app(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::App(a, b) => {
            fmt_app(a, f)?;
            f.write_str(" ")?;
            fmt_item(b, f)
        }
        _ => fmt_item(t, f),
    }
}

fn fmt_item(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(x) => write!(f, "{x}"),
        Term::Sub(b, x, a) => {
            fmt_item(b, f)?;
            write!(f, "[{x}/")?;
            fmt_term(a, f)?;
            f.write_str("]")
        }
        _ => {
            f.write_str("(")?;
            fmt_term(t, f)?;
            f.write_str(")")
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for VTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A term without explicit substitutions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PureTerm(Term);

impl PureTerm {
    pub fn new(t: Term) -> Option<PureTerm> {
        t.is_pure().then_some(PureTerm(t))
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn into_term(self) -> Term {
        self.0
    }

    pub fn alpha_eq(&self, other: &PureTerm) -> bool {
        self.0.alpha_eq(&other.0)
    }
}

impl std::ops::Deref for PureTerm {
    type Target = Term;
    fn deref(&self) -> &Term {
        &self.0
    }
}

impl fmt::Display for PureTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `x | \x. t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Var(Name),
    Lam(Name, Box<VTerm>),
}

/// Terms of the value substitution kernel: `v | v t | t[x/s]`. The function
/// position of an application is a value by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VTerm {
    Val(Value),
    App(Value, Box<VTerm>),
    Sub(Box<VTerm>, Name, Box<VTerm>),
}

impl Value {
    pub fn var(x: &str) -> Value {
        Value::Var(Name::var(x))
    }

    pub fn lam(x: &str, body: VTerm) -> Value {
        Value::Lam(Name::var(x), Box::new(body))
    }

    pub fn to_term(&self) -> Term {
        match self {
            Value::Var(x) => Term::Var(x.clone()),
            Value::Lam(x, b) => Term::Lam(x.clone(), Box::new(b.to_term())),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Value::Var(_) => 1,
            Value::Lam(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.to_term().free_vars()
    }

    pub fn alpha_key(&self) -> String {
        self.to_term().alpha_key()
    }

    pub(crate) fn rename_free(&self, from: &Name, to: &Name) -> Value {
        match self {
            Value::Var(x) if x == from => Value::Var(to.clone()),
            Value::Var(_) => self.clone(),
            Value::Lam(x, _) if x == from => self.clone(),
            Value::Lam(x, b) => Value::Lam(x.clone(), Box::new(b.rename_free(from, to))),
        }
    }

    pub fn freshen_bound(&self, fresh: &mut Fresh, log: &mut Renames) -> Value {
        match self {
            Value::Var(_) => self.clone(),
            Value::Lam(x, b) => {
                let nx = log_fresh(x, fresh, log);
                Value::Lam(nx.clone(), Box::new(b.rename_free(x, &nx).freshen_bound(fresh, log)))
            }
        }
    }

    fn distinct_rec(&self, used: &mut BTreeSet<Name>, fresh: &mut Fresh) -> Value {
        match self {
            Value::Var(_) => self.clone(),
            Value::Lam(x, b) => {
                let (nx, nb) = if used.insert(x.clone()) {
                    (x.clone(), (**b).clone())
                } else {
                    let nx = fresh.var();
                    used.insert(nx.clone());
                    (nx.clone(), b.rename_free(x, &nx))
                };
                Value::Lam(nx, Box::new(nb.distinct_rec(used, fresh)))
            }
        }
    }
}

impl VTerm {
    pub fn var(x: &str) -> VTerm {
        VTerm::Val(Value::var(x))
    }

    pub fn lam(x: &str, body: VTerm) -> VTerm {
        VTerm::Val(Value::lam(x, body))
    }

    pub fn app(v: Value, a: VTerm) -> VTerm {
        VTerm::App(v, Box::new(a))
    }

    pub fn sub(body: VTerm, x: &str, arg: VTerm) -> VTerm {
        VTerm::Sub(Box::new(body), Name::var(x), Box::new(arg))
    }

    pub fn to_term(&self) -> Term {
        match self {
            VTerm::Val(v) => v.to_term(),
            VTerm::App(v, a) => Term::App(Box::new(v.to_term()), Box::new(a.to_term())),
            VTerm::Sub(b, x, a) => Term::Sub(Box::new(b.to_term()), x.clone(), Box::new(a.to_term())),
        }
    }

    /// Re-read a term in the kernel's shape, if it has it.
    pub fn from_term(t: &Term) -> Option<VTerm> {
        Some(match t {
            Term::Var(x) => VTerm::Val(Value::Var(x.clone())),
            Term::Lam(x, b) => VTerm::Val(Value::Lam(x.clone(), Box::new(VTerm::from_term(b)?))),
            Term::App(f, a) => {
                let v = match VTerm::from_term(f)? {
                    VTerm::Val(v) => v,
                    _ => return None,
                };
                VTerm::App(v, Box::new(VTerm::from_term(a)?))
            }
            Term::Sub(b, x, a) => VTerm::Sub(
                Box::new(VTerm::from_term(b)?),
                x.clone(),
                Box::new(VTerm::from_term(a)?),
            ),
        })
    }

    pub fn size(&self) -> usize {
        match self {
            VTerm::Val(v) => v.size(),
            VTerm::App(v, a) => 1 + v.size() + a.size(),
            VTerm::Sub(b, _, a) => 1 + b.size() + a.size(),
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, VTerm::Val(_))
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.to_term().free_vars()
    }

    pub fn is_free(&self, x: &Name) -> bool {
        self.to_term().is_free(x)
    }

    pub fn alpha_key(&self) -> String {
        self.to_term().alpha_key()
    }

    pub fn alpha_eq(&self, other: &VTerm) -> bool {
        self == other || self.alpha_key() == other.alpha_key()
    }

    pub fn canonical(&self) -> VTerm {
        VTerm::from_term(&self.to_term().canonical()).expect("renaming preserves kernel shape")
    }

    pub(crate) fn rename_free(&self, from: &Name, to: &Name) -> VTerm {
        match self {
            VTerm::Val(v) => VTerm::Val(v.rename_free(from, to)),
            VTerm::App(v, a) => VTerm::App(v.rename_free(from, to), Box::new(a.rename_free(from, to))),
            VTerm::Sub(b, x, a) => {
                let na = a.rename_free(from, to);
                let nb = if x == from {
                    (**b).clone()
                } else {
                    b.rename_free(from, to)
                };
                VTerm::Sub(Box::new(nb), x.clone(), Box::new(na))
            }
        }
    }

    pub fn freshen_bound(&self, fresh: &mut Fresh, log: &mut Renames) -> VTerm {
        match self {
            VTerm::Val(v) => VTerm::Val(v.freshen_bound(fresh, log)),
            VTerm::App(v, a) => VTerm::App(v.freshen_bound(fresh, log), Box::new(a.freshen_bound(fresh, log))),
            VTerm::Sub(b, x, a) => {
                let na = a.freshen_bound(fresh, log);
                let nx = log_fresh(x, fresh, log);
                let nb = b.rename_free(x, &nx).freshen_bound(fresh, log);
                VTerm::Sub(Box::new(nb), nx, Box::new(na))
            }
        }
    }

    /// See [`Term::distinct_binders`].
    pub fn distinct_binders(&self, fresh: &mut Fresh) -> VTerm {
        fresh.reserve_vterm(self);
        let mut used = self.free_vars();
        self.distinct_rec(&mut used, fresh)
    }

    fn distinct_rec(&self, used: &mut BTreeSet<Name>, fresh: &mut Fresh) -> VTerm {
        match self {
            VTerm::Val(v) => VTerm::Val(v.distinct_rec(used, fresh)),
            VTerm::App(v, a) => {
                let nv = v.distinct_rec(used, fresh);
                VTerm::App(nv, Box::new(a.distinct_rec(used, fresh)))
            }
            VTerm::Sub(b, x, a) => {
                let (nx, nb) = if used.insert(x.clone()) {
                    (x.clone(), (**b).clone())
                } else {
                    let nx = fresh.var();
                    used.insert(nx.clone());
                    (nx.clone(), b.rename_free(x, &nx))
                };
                let nb = nb.distinct_rec(used, fresh);
                let na = a.distinct_rec(used, fresh);
                VTerm::Sub(Box::new(nb), nx, Box::new(na))
            }
        }
    }

    pub fn at(&self, steps: &[TermStep]) -> Option<&VTerm> {
        let mut cur = self;
        for s in steps {
            cur = match (s, cur) {
                (TermStep::AppArg, VTerm::App(_, a)) => a,
                (TermStep::SubBody, VTerm::Sub(b, _, _)) => b,
                (TermStep::SubArg, VTerm::Sub(_, _, a)) => a,
                (TermStep::LamBody, VTerm::Val(Value::Lam(_, b))) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn replace_at(&self, steps: &[TermStep], f: impl FnOnce(&VTerm) -> VTerm) -> Option<VTerm> {
        let Some((first, rest)) = steps.split_first() else {
            return Some(f(self));
        };
        Some(match (first, self) {
            (TermStep::AppArg, VTerm::App(v, a)) => VTerm::App(v.clone(), Box::new(a.replace_at(rest, f)?)),
            (TermStep::SubBody, VTerm::Sub(b, x, a)) => {
                VTerm::Sub(Box::new(b.replace_at(rest, f)?), x.clone(), a.clone())
            }
            (TermStep::SubArg, VTerm::Sub(b, x, a)) => {
                VTerm::Sub(b.clone(), x.clone(), Box::new(a.replace_at(rest, f)?))
            }
            (TermStep::LamBody, VTerm::Val(Value::Lam(x, b))) => {
                VTerm::Val(Value::Lam(x.clone(), Box::new(b.replace_at(rest, f)?)))
            }
            _ => return None,
        })
    }

    /// Every value occurring in the term: values in term position as well as
    /// values in function position of an application.
    pub fn values(&self) -> Vec<&Value> {
        let mut out = Vec::new();
        self.collect_values(&mut out);
        out
    }

    fn collect_values<'a>(&'a self, out: &mut Vec<&'a Value>) {
        fn value<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
            out.push(v);
            if let Value::Lam(_, b) = v {
                b.collect_values(out);
            }
        }
        match self {
            VTerm::Val(v) => value(v, out),
            VTerm::App(v, a) => {
                value(v, out);
                a.collect_values(out);
            }
            VTerm::Sub(b, _, a) => {
                b.collect_values(out);
                a.collect_values(out);
            }
        }
    }
}

impl fmt::Display for VTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_term().fmt(f)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_term().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(t("x").free_vars(), [Name::var("x")].into());
        assert!(t("\\x. x").free_vars().is_empty());
        assert_eq!(t("x[x/y]").free_vars(), [Name::var("y")].into());
        // the argument of a substitution is outside the binder
        assert_eq!(t("x[x/x]").free_vars(), [Name::var("x")].into());
    }

    #[test]
    fn alpha_eq_examples() {
        assert!(t("\\x. x").alpha_eq(&t("\\y. y")));
        assert!(!t("x").alpha_eq(&t("y")));
        assert!(t("x[x/z]").alpha_eq(&t("y[y/z]")));
        assert!(!t("x[x/z]").alpha_eq(&t("x[y/z]")));
        assert!(!t("\\x. \\y. x").alpha_eq(&t("\\x. \\y. y")));
    }

    #[test]
    fn meta_subst_examples() {
        let mut fresh = Fresh::new();
        let x = Name::var("x");
        assert_eq!(t("x").meta_subst(&x, &t("y"), &mut fresh), t("y"));
        let r = t("\\y. x").meta_subst(&x, &t("y"), &mut fresh);
        match &r {
            Term::Lam(b, body) => {
                assert_ne!(b, &Name::var("y"));
                assert_eq!(**body, t("y"));
            }
            _ => panic!("expected abstraction, got {r}"),
        }
        assert_eq!(t("\\x. x").meta_subst(&x, &t("z"), &mut fresh), t("\\x. x"));
    }

    #[test]
    fn unfold_examples() {
        assert!(t("x[x/y]").unfold().alpha_eq(&PureTerm::new(t("y")).unwrap()));
        assert_eq!(t("(\\x. x) y").unfold().into_term(), t("(\\x. x) y"));
        assert_eq!(t("(x x)[x/y]").unfold().into_term(), t("y y"));
        // nested substitutions are applied inside out
        assert_eq!(t("(x z)[x/z][z/w]").unfold().into_term(), t("w w"));
    }

    #[test]
    fn canonical_avoids_free_names() {
        let c = t("\\x. v0 x").canonical();
        assert!(c.alpha_eq(&t("\\x. v0 x")));
        assert!(c.free_vars().contains(&Name::var("v0")));
        assert_eq!(t("\\a. \\b. a").canonical(), t("\\q. \\r. q").canonical());
    }

    #[test]
    fn distinct_binders_renames_repeats_only() {
        let mut fresh = Fresh::new();
        let s = t("(\\x. x) (\\x. x)").distinct_binders(&mut fresh);
        assert!(s.alpha_eq(&t("(\\x. x) (\\y. y)")));
        match &s {
            Term::App(f, a) => {
                assert_eq!(**f, t("\\x. x"));
                assert!(matches!(&**a, Term::Lam(b, _) if b != &Name::var("x")));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn vterm_shape() {
        assert!(VTerm::from_term(&t("(x y) z")).is_none());
        assert!(VTerm::from_term(&t("x (y z)")).is_some());
        assert!(VTerm::from_term(&t("(\\x. x) y")).is_some());
    }
}

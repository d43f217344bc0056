//! Processes of the π-calculus fragment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::context::ProcStep;
use crate::name::{Fresh, Name};

/// `0 | x<y> | x<y,z> | new x. P | x(y,z). P | !x(y). P | P | Q`.
///
/// `Nu`, `InB` and `RepIn` bind their names in the continuation. `Par` is a
/// binary node; reduction is sensitive to the tree shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Process {
    Nil,
    OutU(Name, Name),
    OutB(Name, Name, Name),
    Nu(Name, Box<Process>),
    InB(Name, Name, Name, Box<Process>),
    RepIn(Name, Name, Box<Process>),
    Par(Box<Process>, Box<Process>),
}

impl Process {
    pub fn out(x: Name, y: Name) -> Process {
        Process::OutU(x, y)
    }

    pub fn out2(x: Name, y: Name, z: Name) -> Process {
        Process::OutB(x, y, z)
    }

    pub fn nu(x: Name, p: Process) -> Process {
        Process::Nu(x, Box::new(p))
    }

    pub fn inp(x: Name, y: Name, z: Name, p: Process) -> Process {
        Process::InB(x, y, z, Box::new(p))
    }

    pub fn rep(x: Name, y: Name, p: Process) -> Process {
        Process::RepIn(x, y, Box::new(p))
    }

    pub fn par(p: Process, q: Process) -> Process {
        Process::Par(Box::new(p), Box::new(q))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil | Process::OutU(..) | Process::OutB(..) => 1,
            Process::Nu(_, p) | Process::InB(_, _, _, p) | Process::RepIn(_, _, p) => 1 + p.size(),
            Process::Par(p, q) => 1 + p.size() + q.size(),
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut note = |n: &Name, bound: &Vec<Name>| {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        };
        match self {
            Process::Nil => {}
            Process::OutU(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            Process::OutB(x, y, z) => {
                note(x, bound);
                note(y, bound);
                note(z, bound);
            }
            Process::Nu(x, p) => {
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            Process::InB(x, y, z, p) => {
                note(x, bound);
                bound.push(y.clone());
                bound.push(z.clone());
                p.collect_free(bound, out);
                bound.truncate(bound.len() - 2);
            }
            Process::RepIn(x, y, p) => {
                note(x, bound);
                bound.push(y.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            Process::Par(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
        }
    }

    pub fn is_free(&self, n: &Name) -> bool {
        match self {
            Process::Nil => false,
            Process::OutU(x, y) => x == n || y == n,
            Process::OutB(x, y, z) => x == n || y == n || z == n,
            Process::Nu(x, p) => x != n && p.is_free(n),
            Process::InB(x, y, z, p) => x == n || (y != n && z != n && p.is_free(n)),
            Process::RepIn(x, y, p) => x == n || (y != n && p.is_free(n)),
            Process::Par(p, q) => p.is_free(n) || q.is_free(n),
        }
    }

    /// Visit every name occurrence, binders included.
    pub fn for_each_name(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Process::Nil => {}
            Process::OutU(x, y) => {
                f(x);
                f(y);
            }
            Process::OutB(x, y, z) => {
                f(x);
                f(y);
                f(z);
            }
            Process::Nu(x, p) => {
                f(x);
                p.for_each_name(f);
            }
            Process::InB(x, y, z, p) => {
                f(x);
                f(y);
                f(z);
                p.for_each_name(f);
            }
            Process::RepIn(x, y, p) => {
                f(x);
                f(y);
                p.for_each_name(f);
            }
            Process::Par(p, q) => {
                p.for_each_name(f);
                q.for_each_name(f);
            }
        }
    }

    /// A string equal for two processes iff they are α-equivalent.
    pub fn alpha_key(&self) -> String {
        let mut out = String::with_capacity(self.size() * 6);
        let mut scope = Vec::new();
        self.write_key(&mut scope, &mut out);
        out
    }

    fn write_key(&self, scope: &mut Vec<Name>, out: &mut String) {
        fn name(n: &Name, scope: &[Name], out: &mut String) {
            match scope.iter().rposition(|b| b == n) {
                Some(l) => {
                    let _ = write!(out, "^{l}");
                }
                None => {
                    let _ = write!(out, "{n}");
                }
            }
        }
        match self {
            Process::Nil => out.push('0'),
            Process::OutU(x, y) => {
                name(x, scope, out);
                out.push('<');
                name(y, scope, out);
                out.push('>');
            }
            Process::OutB(x, y, z) => {
                name(x, scope, out);
                out.push('<');
                name(y, scope, out);
                out.push(',');
                name(z, scope, out);
                out.push('>');
            }
            Process::Nu(x, p) => {
                // the binder's kind matters: a special and a variable binder
                // are not interchangeable
                out.push_str(if x.is_special() { "N@." } else { "N." });
                scope.push(x.clone());
                p.write_key(scope, out);
                scope.pop();
            }
            Process::InB(x, y, z, p) => {
                name(x, scope, out);
                let _ = write!(out, "({},{}).", kind_tag(y), kind_tag(z));
                scope.push(y.clone());
                scope.push(z.clone());
                p.write_key(scope, out);
                scope.truncate(scope.len() - 2);
            }
            Process::RepIn(x, y, p) => {
                out.push('!');
                name(x, scope, out);
                let _ = write!(out, "({}).", kind_tag(y));
                scope.push(y.clone());
                p.write_key(scope, out);
                scope.pop();
            }
            Process::Par(p, q) => {
                out.push('(');
                p.write_key(scope, out);
                out.push('|');
                q.write_key(scope, out);
                out.push(')');
            }
        }
    }

    pub fn alpha_eq(&self, other: &Process) -> bool {
        self == other || self.alpha_key() == other.alpha_key()
    }

    /// Replace free occurrences of `from` by `to`. `to` must not be bound
    /// anywhere in `self`.
    pub(crate) fn rename_free(&self, from: &Name, to: &Name) -> Process {
        let r = |n: &Name| if n == from { to.clone() } else { n.clone() };
        match self {
            Process::Nil => Process::Nil,
            Process::OutU(x, y) => Process::OutU(r(x), r(y)),
            Process::OutB(x, y, z) => Process::OutB(r(x), r(y), r(z)),
            Process::Nu(x, _) if x == from => self.clone(),
            Process::Nu(x, p) => Process::Nu(x.clone(), Box::new(p.rename_free(from, to))),
            Process::InB(x, y, z, p) => {
                let np = if y == from || z == from {
                    (**p).clone()
                } else {
                    p.rename_free(from, to)
                };
                Process::InB(r(x), y.clone(), z.clone(), Box::new(np))
            }
            Process::RepIn(x, y, p) => {
                let np = if y == from {
                    (**p).clone()
                } else {
                    p.rename_free(from, to)
                };
                Process::RepIn(r(x), y.clone(), Box::new(np))
            }
            Process::Par(p, q) => Process::par(p.rename_free(from, to), q.rename_free(from, to)),
        }
    }

    /// Capture-avoiding simultaneous substitution of names. Binders that
    /// would capture a substituted name are renamed fresh.
    pub fn substitute(&self, map: &BTreeMap<Name, Name>, fresh: &mut Fresh) -> Process {
        fresh.reserve_process(self);
        fresh.reserve_all(map.keys());
        fresh.reserve_all(map.values());
        self.subst_rec(map, fresh)
    }

    fn subst_rec(&self, map: &BTreeMap<Name, Name>, fresh: &mut Fresh) -> Process {
        if map.is_empty() {
            return self.clone();
        }
        let r = |n: &Name| map.get(n).cloned().unwrap_or_else(|| n.clone());
        match self {
            Process::Nil => Process::Nil,
            Process::OutU(x, y) => Process::OutU(r(x), r(y)),
            Process::OutB(x, y, z) => Process::OutB(r(x), r(y), r(z)),
            Process::Nu(x, p) => {
                let (nx, np) = subst_under(&[x], p, map, fresh);
                Process::Nu(nx[0].clone(), Box::new(np))
            }
            Process::InB(x, y, z, p) => {
                let (nb, np) = subst_under(&[y, z], p, map, fresh);
                Process::InB(r(x), nb[0].clone(), nb[1].clone(), Box::new(np))
            }
            Process::RepIn(x, y, p) => {
                let (nb, np) = subst_under(&[y], p, map, fresh);
                Process::RepIn(r(x), nb[0].clone(), Box::new(np))
            }
            Process::Par(p, q) => Process::par(p.subst_rec(map, fresh), q.subst_rec(map, fresh)),
        }
    }

    /// Rename every bound name to a fresh one of the same kind.
    pub fn freshen_bound(&self, fresh: &mut Fresh) -> Process {
        match self {
            Process::Nil | Process::OutU(..) | Process::OutB(..) => self.clone(),
            Process::Nu(x, p) => {
                let nx = fresh.of_kind(x.kind());
                Process::nu(nx.clone(), p.rename_free(x, &nx).freshen_bound(fresh))
            }
            Process::InB(x, y, z, p) => {
                let ny = fresh.of_kind(y.kind());
                let nz = fresh.of_kind(z.kind());
                let body = if y == z {
                    p.rename_free(z, &nz)
                } else {
                    p.rename_free(y, &ny).rename_free(z, &nz)
                };
                Process::inp(x.clone(), ny, nz, body.freshen_bound(fresh))
            }
            Process::RepIn(x, y, p) => {
                let ny = fresh.of_kind(y.kind());
                Process::rep(x.clone(), ny.clone(), p.rename_free(y, &ny).freshen_bound(fresh))
            }
            Process::Par(p, q) => Process::par(p.freshen_bound(fresh), q.freshen_bound(fresh)),
        }
    }

    pub fn at(&self, steps: &[ProcStep]) -> Option<&Process> {
        let mut cur = self;
        for s in steps {
            cur = match (s, cur) {
                (ProcStep::ParLeft, Process::Par(p, _)) => p,
                (ProcStep::ParRight, Process::Par(_, q)) => q,
                (ProcStep::NuBody, Process::Nu(_, p)) => p,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Rebuild `self` with the subprocess at `steps` replaced by
    /// `f(subprocess)`.
    pub fn replace_at(&self, steps: &[ProcStep], f: impl FnOnce(&Process) -> Process) -> Option<Process> {
        let Some((first, rest)) = steps.split_first() else {
            return Some(f(self));
        };
        Some(match (first, self) {
            (ProcStep::ParLeft, Process::Par(p, q)) => Process::Par(Box::new(p.replace_at(rest, f)?), q.clone()),
            (ProcStep::ParRight, Process::Par(p, q)) => Process::Par(p.clone(), Box::new(q.replace_at(rest, f)?)),
            (ProcStep::NuBody, Process::Nu(x, p)) => Process::Nu(x.clone(), Box::new(p.replace_at(rest, f)?)),
            _ => return None,
        })
    }

    /// Binders crossed by `steps` (only `Nu` nodes bind along
    /// non-blocking paths).
    pub fn captured_along(&self, steps: &[ProcStep]) -> Option<BTreeSet<Name>> {
        let mut out = BTreeSet::new();
        let mut cur = self;
        for s in steps {
            cur = match (s, cur) {
                (ProcStep::ParLeft, Process::Par(p, _)) => p,
                (ProcStep::ParRight, Process::Par(_, q)) => q,
                (ProcStep::NuBody, Process::Nu(x, p)) => {
                    out.insert(x.clone());
                    p
                }
                _ => return None,
            };
        }
        Some(out)
    }

    /// Rename the `Nu` binders crossed by `steps` that lie in `avoid` to
    /// fresh names, keeping the tree shape. Returns the renamed process and
    /// the renaming applied.
    pub(crate) fn rename_path_binders(
        &self,
        steps: &[ProcStep],
        avoid: &dyn Fn(&Name) -> bool,
        fresh: &mut Fresh,
    ) -> (Process, BTreeMap<Name, Name>) {
        let mut renaming = BTreeMap::new();
        let p = self.rename_path_rec(steps, avoid, fresh, &mut renaming);
        (p, renaming)
    }

    fn rename_path_rec(
        &self,
        steps: &[ProcStep],
        avoid: &dyn Fn(&Name) -> bool,
        fresh: &mut Fresh,
        renaming: &mut BTreeMap<Name, Name>,
    ) -> Process {
        let Some((first, rest)) = steps.split_first() else {
            return self.clone();
        };
        match (first, self) {
            (ProcStep::ParLeft, Process::Par(p, q)) => {
                Process::Par(Box::new(p.rename_path_rec(rest, avoid, fresh, renaming)), q.clone())
            }
            (ProcStep::ParRight, Process::Par(p, q)) => {
                Process::Par(p.clone(), Box::new(q.rename_path_rec(rest, avoid, fresh, renaming)))
            }
            (ProcStep::NuBody, Process::Nu(x, p)) => {
                if avoid(x) {
                    let nx = fresh.of_kind(x.kind());
                    renaming.insert(x.clone(), nx.clone());
                    let body = p.rename_free(x, &nx);
                    Process::Nu(nx, Box::new(body.rename_path_rec(rest, avoid, fresh, renaming)))
                } else {
                    Process::Nu(x.clone(), Box::new(p.rename_path_rec(rest, avoid, fresh, renaming)))
                }
            }
            _ => self.clone(),
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Nil)
    }
}

fn kind_tag(n: &Name) -> &'static str {
    if n.is_special() {
        "@"
    } else {
        "v"
    }
}

fn subst_under(
    binders: &[&Name],
    body: &Process,
    map: &BTreeMap<Name, Name>,
    fresh: &mut Fresh,
) -> (Vec<Name>, Process) {
    let mut inner: BTreeMap<Name, Name> = map
        .iter()
        .filter(|(k, _)| !binders.contains(k))
        .filter(|(k, _)| body.is_free(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let image: BTreeSet<&Name> = inner.values().collect();
    let clashing: Vec<bool> = binders.iter().map(|b| image.contains(b)).collect();
    let mut names = Vec::with_capacity(binders.len());
    for (i, b) in binders.iter().enumerate() {
        // a repeated binder name: only the last one binds
        let shadowed = binders[i + 1..].contains(b);
        if clashing[i] && !shadowed {
            let nb = fresh.of_kind(b.kind());
            inner.insert((*b).clone(), nb.clone());
            names.push(nb);
        } else {
            names.push((*b).clone());
        }
    }
    (names, body.subst_rec(&inner, fresh))
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_par(self, f)
    }
}

impl Serialize for Process {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn fmt_par(p: &Process, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Process::Par(l, r) => {
            fmt_par(l, f)?;
            f.write_str(" | ")?;
            fmt_factor(r, f)
        }
        _ => fmt_factor(p, f),
    }
}

fn fmt_factor(p: &Process, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Process::Nil => f.write_str("0"),
        Process::OutU(x, y) => write!(f, "{x}<{y}>"),
        Process::OutB(x, y, z) => write!(f, "{x}<{y},{z}>"),
        Process::Nu(x, q) => {
            write!(f, "new {x}. ")?;
            fmt_factor(q, f)
        }
        Process::InB(x, y, z, q) => {
            write!(f, "{x}({y},{z}). ")?;
            fmt_factor(q, f)
        }
        Process::RepIn(x, y, q) => {
            write!(f, "!{x}({y}). ")?;
            fmt_factor(q, f)
        }
        Process::Par(..) => {
            f.write_str("(")?;
            fmt_par(p, f)?;
            f.write_str(")")
        }
    }
}

//! Deciding structural congruence through canonical forms.
//!
//! Every process is congruent to a prenex form `new n1 ... nk. (C1 | ... | Cm)`
//! where the `Ci` are outputs and inputs and every `ni` occurs in some `Ci`.
//! Two processes are congruent iff their prenex forms match up to a
//! bijection between the restricted names and a permutation of the
//! components, with each component compared up to α only (congruence never
//! rewrites under a prefix). The bijection is found by colour refinement
//! over the incidence structure between names and components, branching on
//! ties and keeping the least resulting key.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::context::ProcStep;
use crate::name::{Fresh, Kind, Name};
use crate::process::Process;
use crate::term::canonical_prefix;

/// Restricted names (pairwise distinct) and the prefix components under
/// them.
#[derive(Clone, Debug)]
pub struct Prenex {
    pub blocks: Vec<Name>,
    pub comps: Vec<Process>,
}

/// Prenex form, with unused restrictions dropped.
pub fn prenex(p: &Process) -> Prenex {
    let mut fresh = Fresh::for_process(p);
    let mut blocks = Vec::new();
    let mut comps = Vec::new();
    flatten(p, &mut fresh, &mut blocks, &mut comps);
    blocks.retain(|b| comps.iter().any(|c| c.is_free(b)));
    Prenex { blocks, comps }
}

fn flatten(p: &Process, fresh: &mut Fresh, blocks: &mut Vec<Name>, comps: &mut Vec<Process>) {
    match p {
        Process::Nil => {}
        Process::Par(l, r) => {
            flatten(l, fresh, blocks, comps);
            flatten(r, fresh, blocks, comps);
        }
        Process::Nu(x, q) => {
            let nx = fresh.of_kind(x.kind());
            blocks.push(nx.clone());
            flatten(&q.rename_free(x, &nx), fresh, blocks, comps);
        }
        _ => comps.push(p.clone()),
    }
}

/// Serialise a component up to α; free names go through `free`.
fn write_comp(p: &Process, scope: &mut Vec<Name>, free: &dyn Fn(&Name) -> Option<String>, out: &mut String) {
    let name = |n: &Name, scope: &[Name], out: &mut String| match scope.iter().rposition(|b| b == n) {
        Some(l) => {
            let _ = write!(out, "^{l}");
        }
        None => match free(n) {
            Some(s) => out.push_str(&s),
            None => {
                let _ = write!(out, "{n}");
            }
        },
    };
    let tag = |n: &Name| if n.is_special() { '@' } else { 'v' };
    match p {
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
        Process::Nu(x, q) => {
            out.push('N');
            out.push(tag(x));
            out.push('.');
            scope.push(x.clone());
            write_comp(q, scope, free, out);
            scope.pop();
        }
        Process::InB(x, y, z, q) => {
            name(x, scope, out);
            let _ = write!(out, "({},{}).", tag(y), tag(z));
            scope.push(y.clone());
            scope.push(z.clone());
            write_comp(q, scope, free, out);
            scope.truncate(scope.len() - 2);
        }
        Process::RepIn(x, y, q) => {
            out.push('!');
            name(x, scope, out);
            let _ = write!(out, "({}).", tag(y));
            scope.push(y.clone());
            write_comp(q, scope, free, out);
            scope.pop();
        }
        Process::Par(l, r) => {
            out.push('(');
            write_comp(l, scope, free, out);
            out.push('|');
            write_comp(r, scope, free, out);
            out.push(')');
        }
    }
}

/// Free names of `p` in order of first occurrence.
fn free_in_order(p: &Process, scope: &mut Vec<Name>, out: &mut Vec<Name>) {
    let mut note = |n: &Name, scope: &Vec<Name>| {
        if !scope.contains(n) && !out.contains(n) {
            out.push(n.clone());
        }
    };
    match p {
        Process::Nil => {}
        Process::OutU(x, y) => {
            note(x, scope);
            note(y, scope);
        }
        Process::OutB(x, y, z) => {
            note(x, scope);
            note(y, scope);
            note(z, scope);
        }
        Process::Nu(x, q) => {
            scope.push(x.clone());
            free_in_order(q, scope, out);
            scope.pop();
        }
        Process::InB(x, y, z, q) => {
            note(x, scope);
            scope.push(y.clone());
            scope.push(z.clone());
            free_in_order(q, scope, out);
            scope.truncate(scope.len() - 2);
        }
        Process::RepIn(x, y, q) => {
            note(x, scope);
            scope.push(y.clone());
            free_in_order(q, scope, out);
            scope.pop();
        }
        Process::Par(l, r) => {
            free_in_order(l, scope, out);
            free_in_order(r, scope, out);
        }
    }
}

struct Structure<'a> {
    pre: &'a Prenex,
    /// For each component, the blocks it mentions in first-occurrence order.
    refs: Vec<Vec<usize>>,
    /// For each block, `(component, local position)` pairs.
    incid: Vec<Vec<(usize, usize)>>,
    index: HashMap<&'a Name, usize>,
}

impl<'a> Structure<'a> {
    fn new(pre: &'a Prenex) -> Structure<'a> {
        let index: HashMap<&Name, usize> = pre.blocks.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut refs = Vec::with_capacity(pre.comps.len());
        let mut incid = vec![Vec::new(); pre.blocks.len()];
        for (c, comp) in pre.comps.iter().enumerate() {
            let mut names = Vec::new();
            free_in_order(comp, &mut Vec::new(), &mut names);
            let r: Vec<usize> = names.iter().filter_map(|n| index.get(n).copied()).collect();
            for (j, &b) in r.iter().enumerate() {
                incid[b].push((c, j));
            }
            refs.push(r);
        }
        Structure {
            pre,
            refs,
            incid,
            index,
        }
    }

    fn comp_string(&self, c: usize, label: &dyn Fn(usize) -> String) -> String {
        let mut s = String::new();
        let free = |n: &Name| self.index.get(n).map(|&b| label(b));
        write_comp(&self.pre.comps[c], &mut Vec::new(), &free, &mut s);
        s
    }

    fn shape(&self, c: usize) -> String {
        let local: HashMap<usize, usize> = self.refs[c].iter().enumerate().map(|(j, &b)| (b, j)).collect();
        self.comp_string(c, &|b| format!("#{}", local[&b]))
    }

    /// Sorted component strings under a block labelling.
    fn strings(&self, lab: &[usize]) -> Vec<(String, usize)> {
        let mut v: Vec<(String, usize)> = (0..self.pre.comps.len())
            .map(|c| (self.comp_string(c, &|b| format!("#{}", lab[b])), c))
            .collect();
        v.sort();
        v
    }

    fn key(&self, lab: &[usize]) -> String {
        let mut order: Vec<usize> = (0..lab.len()).collect();
        order.sort_by_key(|&b| lab[b]);
        let mut s: String = order
            .iter()
            .map(|&b| if self.pre.blocks[b].is_special() { '@' } else { 'v' })
            .collect();
        s.push(':');
        for (i, (c, _)) in self.strings(lab).iter().enumerate() {
            if i > 0 {
                s.push('|');
            }
            s.push_str(c);
        }
        s
    }
}

fn ranks<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(s).expect("present")).collect()
}

fn classes(col: &[usize]) -> usize {
    col.iter().collect::<BTreeSet<_>>().len()
}

fn refine(st: &Structure<'_>, bcol: &mut Vec<usize>, ccol: &mut Vec<usize>) {
    loop {
        let (nb, nc) = (classes(bcol), classes(ccol));
        let csig: Vec<(usize, Vec<usize>)> = (0..ccol.len())
            .map(|c| (ccol[c], st.refs[c].iter().map(|&b| bcol[b]).collect()))
            .collect();
        let bsig: Vec<(usize, Vec<(usize, usize)>)> = (0..bcol.len())
            .map(|b| {
                let mut inc: Vec<(usize, usize)> = st.incid[b].iter().map(|&(c, j)| (ccol[c], j)).collect();
                inc.sort();
                (bcol[b], inc)
            })
            .collect();
        *ccol = ranks(&csig);
        *bcol = ranks(&bsig);
        if classes(bcol) == nb && classes(ccol) == nc {
            return;
        }
    }
}

struct Search<'s, 'a> {
    st: &'s Structure<'a>,
    base: Vec<String>,
    best: Option<(String, Vec<usize>)>,
}

impl Search<'_, '_> {
    fn is_twin(&self, u: usize, v: usize) -> bool {
        let mut lab: Vec<usize> = (0..self.st.pre.blocks.len()).collect();
        lab.swap(u, v);
        let swapped: Vec<String> = self.st.strings(&lab).into_iter().map(|(s, _)| s).collect();
        swapped == self.base
    }

    fn run(&mut self, mut bcol: Vec<usize>, mut ccol: Vec<usize>) {
        refine(self.st, &mut bcol, &mut ccol);
        let mut by_color: Vec<(usize, usize)> = bcol.iter().enumerate().map(|(b, &c)| (c, b)).collect();
        by_color.sort();
        let cell = by_color.windows(2).find(|w| w[0].0 == w[1].0).map(|w| w[0].0);
        let Some(cell) = cell else {
            let key = self.st.key(&bcol);
            if self.best.as_ref().is_none_or(|(k, _)| key < *k) {
                self.best = Some((key, bcol));
            }
            return;
        };
        let members: Vec<usize> = by_color.iter().filter(|(c, _)| *c == cell).map(|&(_, b)| b).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &b in &members {
            if tried.iter().any(|&u| self.is_twin(u, b)) {
                continue;
            }
            tried.push(b);
            let mut nb: Vec<usize> = bcol.iter().map(|&c| 2 * c + 1).collect();
            nb[b] = 2 * bcol[b];
            self.run(nb, ccol.clone());
        }
    }
}

/// Canonical key and, for each block, its position in canonical order.
fn solve(pre: &Prenex) -> (String, Vec<usize>, Structure<'_>) {
    let st = Structure::new(pre);
    let shapes: Vec<String> = (0..pre.comps.len()).map(|c| st.shape(c)).collect();
    let ccol = ranks(&shapes);
    let bcol: Vec<usize> = pre.blocks.iter().map(|b| usize::from(b.is_special())).collect();
    let base: Vec<String> = st
        .strings(&(0..pre.blocks.len()).collect::<Vec<_>>())
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    let mut search = Search {
        st: &st,
        base,
        best: None,
    };
    search.run(bcol, ccol);
    let (key, col) = search.best.expect("search visits at least one leaf");
    // colours are a permutation of 0..k at a leaf
    let order = ranks(&col);
    (key, order, st)
}

/// A string equal for two processes iff they are structurally congruent.
pub fn canonical_key(p: &Process) -> String {
    solve(&prenex(p)).0
}

pub fn congruent(p: &Process, q: &Process) -> bool {
    p.alpha_eq(q) || canonical_key(p) == canonical_key(q)
}

/// The canonical representative of the congruence class of `p`: restricted
/// names `n0, n1, ...` outermost, then components in canonical order, with
/// binders inside components named by depth.
pub fn canonicalize(p: &Process) -> Process {
    let pre = prenex(p);
    let (_, order, st) = solve(&pre);
    let mut all = BTreeSet::new();
    p.for_each_name(&mut |n| {
        all.insert(n.clone());
    });
    let free = p.free_names();
    let dpre = canonical_prefix("d", &all);
    let npre = canonical_prefix("n", &free);
    let block_names: Vec<Name> = pre
        .blocks
        .iter()
        .zip(&order)
        .map(|(b, &i)| Name::new(b.kind(), &format!("{npre}{i}")))
        .collect();
    let strings = st.strings(&order);
    let mut comps: Vec<Process> = strings
        .iter()
        .map(|&(_, c)| {
            let mut q = rename_internal(&pre.comps[c], &dpre, 0);
            for (b, nb) in pre.blocks.iter().zip(&block_names) {
                q = q.rename_free(b, nb);
            }
            q
        })
        .collect();
    let mut body = if comps.is_empty() {
        Process::Nil
    } else {
        let first = comps.remove(0);
        comps.into_iter().fold(first, Process::par)
    };
    let mut ordered: Vec<(usize, &Name)> = order.iter().copied().zip(&block_names).collect();
    ordered.sort();
    for (_, n) in ordered.into_iter().rev() {
        body = Process::nu(n.clone(), body);
    }
    body
}

fn rename_internal(p: &Process, prefix: &str, level: usize) -> Process {
    let nm = |n: &Name, l: usize| Name::new(n.kind(), &format!("{prefix}{l}"));
    match p {
        Process::Nil | Process::OutU(..) | Process::OutB(..) => p.clone(),
        Process::Nu(x, q) => {
            let nx = nm(x, level);
            Process::nu(nx.clone(), rename_internal(&q.rename_free(x, &nx), prefix, level + 1))
        }
        Process::InB(x, y, z, q) => {
            let ny = nm(y, level);
            let nz = nm(z, level + 1);
            let body = if y == z {
                q.rename_free(z, &nz)
            } else {
                q.rename_free(y, &ny).rename_free(z, &nz)
            };
            Process::inp(x.clone(), ny, nz, rename_internal(&body, prefix, level + 2))
        }
        Process::RepIn(x, y, q) => {
            let ny = nm(y, level);
            Process::rep(
                x.clone(),
                ny.clone(),
                rename_internal(&q.rename_free(y, &ny), prefix, level + 1),
            )
        }
        Process::Par(l, r) => Process::par(rename_internal(l, prefix, level), rename_internal(r, prefix, level)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PreconditionError {
    #[error("the context path does not lead to a non-blocking position")]
    BadPath,
    #[error("{0} is free in the process but bound by the context")]
    CapturedByContext(Name),
    #[error("{0} is bound by the context")]
    BoundByContext(Name),
    #[error("{0} is free in the context")]
    FreeInContext(Name),
    #[error("{0} is free in the process")]
    FreeInProcess(Name),
}

/// `N<Q> | P == N<Q | P>` when `P` mentions none of the names bound by `N`.
/// The context is `ctx` with its hole at `hole`.
pub fn check_context_par(
    ctx: &Process,
    hole: &[ProcStep],
    q: &Process,
    p: &Process,
) -> Result<bool, PreconditionError> {
    let delta = ctx.captured_along(hole).ok_or(PreconditionError::BadPath)?;
    if let Some(n) = p.free_names().intersection(&delta).next() {
        return Err(PreconditionError::CapturedByContext(n.clone()));
    }
    let lhs = Process::par(fill(ctx, hole, q.clone())?, p.clone());
    let rhs = fill(ctx, hole, Process::par(q.clone(), p.clone()))?;
    Ok(congruent(&lhs, &rhs))
}

/// `new x. P == P` when `x` is not free in `P`.
pub fn check_nu_garbage(x: &Name, p: &Process) -> Result<bool, PreconditionError> {
    if p.is_free(x) {
        return Err(PreconditionError::FreeInProcess(x.clone()));
    }
    Ok(congruent(&Process::nu(x.clone(), p.clone()), p))
}

/// `new x. N<P> == N<new x. P>` when `x` is neither bound by nor free in
/// `N`.
pub fn check_nu_context(x: &Name, ctx: &Process, hole: &[ProcStep], p: &Process) -> Result<bool, PreconditionError> {
    let delta = ctx.captured_along(hole).ok_or(PreconditionError::BadPath)?;
    if delta.contains(x) {
        return Err(PreconditionError::BoundByContext(x.clone()));
    }
    if fill(ctx, hole, Process::Nil)?.is_free(x) {
        return Err(PreconditionError::FreeInContext(x.clone()));
    }
    let lhs = Process::nu(x.clone(), fill(ctx, hole, p.clone())?);
    let rhs = fill(ctx, hole, Process::nu(x.clone(), p.clone()))?;
    Ok(congruent(&lhs, &rhs))
}

fn fill(ctx: &Process, hole: &[ProcStep], with: Process) -> Result<Process, PreconditionError> {
    ctx.replace_at(hole, |_| with).ok_or(PreconditionError::BadPath)
}

/// Whether the restricted names of a prenex form include one of `kind`.
pub fn has_block_of_kind(p: &Process, kind: Kind) -> bool {
    prenex(p).blocks.iter().any(|b| b.kind() == kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_process;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    fn same(a: &str, b: &str) -> bool {
        congruent(&p(a), &p(b))
    }

    #[test]
    fn canonicalize_examples() {
        assert!(canonicalize(&p("x<@a> | 0")).alpha_eq(&canonicalize(&p("x<@a>"))));
        assert_eq!(canonicalize(&p("new x. 0")), Process::Nil);
        assert!(canonicalize(&p("x<@a> | new y. y<@b>")).alpha_eq(&canonicalize(&p("new y. (x<@a> | y<@b>)"))));
    }

    #[test]
    fn congruent_examples() {
        assert!(same("x<@a> | y<@b>", "y<@b> | x<@a>"));
        assert!(same("new x. new y. (x<y> | y<@a>)", "new y. new x. (x<y> | y<@a>)"));
        assert!(!same("x(y,z). (y<z> | 0)", "x(y,z). y<z>"));
        assert!(same("(x<@a> | y<@b>) | z<@c>", "x<@a> | (y<@b> | z<@c>)"));
        assert!(!same("new x. x<@a>", "new @x. @x<@a>"));
        assert!(!same("new x. (x<@a> | x<@b>)", "new x. x<@a> | new y. y<@b>"));
        assert!(same("new x. (x<@a> | x<@b>)", "new y. (y<@b> | y<@a>)"));
        assert!(!same("x<@a> | x<@a>", "x<@a>"));
    }

    #[test]
    fn symmetric_blocks() {
        let a = "new x. new y. new z. ((x<y> | y<z>) | z<x>)";
        let b = "new u. new v. new w. ((w<u> | u<v>) | v<w>)";
        assert!(same(a, b));
        let c = "new u. new v. new w. ((w<u> | u<v>) | w<v>)";
        assert!(!same(a, c));
        let many = "new a. new b. new c. new d. (((a<@q> | b<@q>) | c<@q>) | d<@q>)";
        let many2 = "new d. new c. (d<@q> | new b. new a. ((c<@q> | a<@q>) | b<@q>))";
        assert!(same(many, many2));
    }

    #[test]
    fn canonical_form_is_a_fixpoint() {
        for s in [
            "new x. (x<@a> | !x(@b). new y. y<@b>)",
            "new @b. new z. ((@b(x,@d). x<@d> | @b<z,@a>) | !z(@c). y<@c>)",
            "n0<@a> | new q. q<n0>",
        ] {
            let c = canonicalize(&p(s));
            assert!(congruent(&c, &p(s)), "{c}");
            assert_eq!(c.free_names(), p(s).free_names());
            assert!(canonicalize(&c).alpha_eq(&c));
            assert_eq!(parse_process(&c.to_string()).unwrap(), c);
        }
    }

    #[test]
    fn derived_rules() {
        let ctx = p("new y. (y<@a> | 0)");
        let hole = [ProcStep::NuBody, ProcStep::ParRight];
        assert_eq!(check_context_par(&ctx, &hole, &Process::Nil, &p("x<@b>")), Ok(true));
        assert!(check_context_par(&ctx, &hole, &Process::Nil, &p("y<@b>")).is_err());
        assert_eq!(check_nu_garbage(&Name::var("x"), &p("y<@a>")), Ok(true));
        let ctx = p("q<@c> | 0");
        assert_eq!(
            check_nu_context(&Name::var("x"), &ctx, &[ProcStep::ParRight], &p("x<@a>")),
            Ok(true)
        );
        assert!(check_nu_context(&Name::var("q"), &ctx, &[ProcStep::ParRight], &p("q<@a>")).is_err());
    }
}

//! Linear weak applicative reduction on the value substitution kernel.
//!
//! Evaluation contexts are `E ::= <> | v E | t[x/E] | E[x/t]` and applicative
//! contexts `A ::= E<<> t>`. With `S` a substitution context,
//!
//! ```text
//! (\x. t) s          -> t[x/s]                 (vdb)
//! A<x>[x/S<v>]       -> S<A<v>[x/v]>           (vls, x not bound by A)
//! ```

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::context::{ContextPath, TermStep};
use crate::name::{Fresh, Name};
use crate::term::{log_fresh, Origins, Renames, VTerm, Value};
use crate::trace::{Label, Trace, TraceStep};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CbvRedex {
    /// An application of an abstraction at `at`.
    Vdb { at: ContextPath<TermStep> },
    /// A substitution `[binder/S<v>]` at `at`; `occ` leads from its body to
    /// an application whose function is `binder`.
    Vls {
        at: ContextPath<TermStep>,
        binder: Name,
        occ: ContextPath<TermStep>,
    },
}

impl CbvRedex {
    pub fn label(&self) -> Label {
        match self {
            CbvRedex::Vdb { .. } => Label::Vdb,
            CbvRedex::Vls { .. } => Label::Vls,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CbvStep {
    pub label: Label,
    pub term: VTerm,
    /// Binders renamed by the step, as `(new, old)`.
    pub renamed: Renames,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    Leftmost,
    All,
}

/// Evaluation positions in pre-order: a node, then its argument-side
/// children left to right.
fn eval_positions(t: &VTerm) -> Vec<(ContextPath<TermStep>, &VTerm)> {
    let mut out = Vec::new();
    let mut stack = vec![(ContextPath::root(), t)];
    while let Some((p, cur)) = stack.pop() {
        match cur {
            VTerm::Val(_) => {}
            VTerm::App(_, a) => stack.push((p.child(TermStep::AppArg, None), a)),
            VTerm::Sub(b, x, a) => {
                stack.push((p.child(TermStep::SubArg, None), a));
                stack.push((p.child(TermStep::SubBody, Some(x)), b));
            }
        }
        out.push((p, cur));
    }
    out
}

/// `S<v>` peeled into its binders (outermost first) and the value.
fn peel_value(t: &VTerm) -> Option<(Vec<(&Name, &VTerm)>, &Value)> {
    let mut subs = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            VTerm::Val(v) => return Some((subs, v)),
            VTerm::Sub(b, y, a) => {
                subs.push((y, &**a));
                cur = b;
            }
            VTerm::App(..) => return None,
        }
    }
}

/// All redexes, outside-in and left to right; at a substitution its own
/// redexes come before those inside it.
pub fn enumerate_cbv_redexes(t: &VTerm) -> Vec<CbvRedex> {
    let mut out = Vec::new();
    for (at, sub) in eval_positions(t) {
        match sub {
            VTerm::App(Value::Lam(..), _) => out.push(CbvRedex::Vdb { at }),
            VTerm::Sub(b, x, a) if peel_value(a).is_some() => {
                for (occ, node) in eval_positions(b) {
                    if matches!(node, VTerm::App(Value::Var(y), _) if y == x) && !occ.captured.contains(x) {
                        out.push(CbvRedex::Vls {
                            at: at.clone(),
                            binder: x.clone(),
                            occ,
                        });
                    }
                }
            }
            _ => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("not a redex of this term")]
pub struct InvalidRedex;

pub fn cbv_step(t: &VTerm, r: &CbvRedex, fresh: &mut Fresh) -> Result<CbvStep, InvalidRedex> {
    fresh.reserve_vterm(t);
    let mut renamed = Renames::new();
    let mut ok = true;
    let term = match r {
        CbvRedex::Vdb { at } => {
            let label = Label::Vdb;
            let term = t
                .replace_at(&at.steps, |node| match node {
                    VTerm::App(Value::Lam(x, b), s) => VTerm::Sub(b.clone(), x.clone(), s.clone()),
                    _ => {
                        ok = false;
                        node.clone()
                    }
                })
                .ok_or(InvalidRedex)?;
            (label, term)
        }
        CbvRedex::Vls { at, binder, occ } => {
            let term = t
                .replace_at(&at.steps, |node| {
                    match vls_contract(node, binder, occ, fresh, &mut renamed) {
                        Some(r) => r,
                        None => {
                            ok = false;
                            node.clone()
                        }
                    }
                })
                .ok_or(InvalidRedex)?;
            (Label::Vls, term)
        }
    };
    if !ok {
        return Err(InvalidRedex);
    }
    Ok(CbvStep {
        label: term.0,
        term: term.1,
        renamed,
    })
}

fn vls_contract(
    node: &VTerm,
    binder: &Name,
    occ: &ContextPath<TermStep>,
    fresh: &mut Fresh,
    log: &mut Renames,
) -> Option<VTerm> {
    let VTerm::Sub(u, x, arg) = node else {
        return None;
    };
    if x != binder || occ.captured.contains(x) {
        return None;
    }
    if !matches!(u.at(&occ.steps)?, VTerm::App(Value::Var(y), _) if y == x) {
        return None;
    }
    let (subs, v) = peel_value(arg)?;

    // The S block moves outside [x/v]: its binders must not capture
    // anything in the body.
    let body_fvs = u.free_vars();
    let delta = &occ.captured;
    let mut sigma: Vec<(Name, VTerm)> = Vec::with_capacity(subs.len());
    let mut v = v.clone();
    let mut inner_args: Vec<VTerm> = subs.iter().map(|(_, a)| (*a).clone()).collect();
    for (i, (y, _)) in subs.iter().enumerate() {
        let y = (*y).clone();
        if body_fvs.contains(&y) || &y == x || delta.contains(&y) {
            let ny = log_fresh(&y, fresh, log);
            let mut shadowed = false;
            for k in i + 1..subs.len() {
                inner_args[k] = inner_args[k].rename_free(&y, &ny);
                if *subs[k].0 == y {
                    shadowed = true;
                    break;
                }
            }
            if !shadowed {
                v = v.rename_free(&y, &ny);
            }
            sigma.push((ny, inner_args[i].clone()));
        } else {
            sigma.push((y, inner_args[i].clone()));
        }
    }

    // The copy of v lands under the binders crossed by A.
    let v_fvs = v.free_vars();
    let (x, u) = if v_fvs.contains(x) {
        let nx = log_fresh(x, fresh, log);
        (nx.clone(), u.rename_free(x, &nx))
    } else {
        (x.clone(), (**u).clone())
    };
    let u = rename_path_binders(&u, &occ.steps, &v_fvs, fresh, log);
    let copy = v.freshen_bound(fresh, log);
    let u = u
        .replace_at(&occ.steps, |app| match app {
            VTerm::App(_, t) => VTerm::App(copy, t.clone()),
            _ => unreachable!("occurrence checked above"),
        })
        .expect("occurrence path is valid");

    let mut out = VTerm::Sub(Box::new(u), x, Box::new(VTerm::Val(v)));
    for (y, a) in sigma.into_iter().rev() {
        out = VTerm::Sub(Box::new(out), y, Box::new(a));
    }
    Some(out)
}

fn rename_path_binders(
    t: &VTerm,
    steps: &[TermStep],
    avoid: &BTreeSet<Name>,
    fresh: &mut Fresh,
    log: &mut Renames,
) -> VTerm {
    let Some((first, rest)) = steps.split_first() else {
        return t.clone();
    };
    match (first, t) {
        (TermStep::AppArg, VTerm::App(v, a)) => {
            VTerm::App(v.clone(), Box::new(rename_path_binders(a, rest, avoid, fresh, log)))
        }
        (TermStep::SubArg, VTerm::Sub(b, y, a)) => VTerm::Sub(
            b.clone(),
            y.clone(),
            Box::new(rename_path_binders(a, rest, avoid, fresh, log)),
        ),
        (TermStep::SubBody, VTerm::Sub(b, y, a)) => {
            if avoid.contains(y) {
                let ny = log_fresh(y, fresh, log);
                let nb = b.rename_free(y, &ny);
                VTerm::Sub(
                    Box::new(rename_path_binders(&nb, rest, avoid, fresh, log)),
                    ny,
                    a.clone(),
                )
            } else {
                VTerm::Sub(
                    Box::new(rename_path_binders(b, rest, avoid, fresh, log)),
                    y.clone(),
                    a.clone(),
                )
            }
        }
        _ => t.clone(),
    }
}

/// All one-step reducts, in redex order.
pub fn cbv_successors(t: &VTerm, fresh: &mut Fresh) -> Vec<CbvStep> {
    enumerate_cbv_redexes(t)
        .iter()
        .map(|r| cbv_step(t, r, fresh).expect("enumerated redexes apply"))
        .collect()
}

/// Leftmost run.
pub fn cbv_trace(t: &VTerm, fuel: usize) -> Trace<VTerm> {
    let mut fresh = Fresh::new();
    fresh.reserve_vterm(t);
    let mut steps = Vec::new();
    let mut cur = t.clone();
    let mut normal = false;
    loop {
        let rs = enumerate_cbv_redexes(&cur);
        let Some(r) = rs.first() else {
            normal = true;
            break;
        };
        if steps.len() == fuel {
            break;
        }
        let s = cbv_step(&cur, r, &mut fresh).expect("enumerated redexes apply");
        cur = s.term.clone();
        steps.push(TraceStep {
            label: s.label,
            state: s.term,
        });
    }
    Trace {
        start: t.clone(),
        steps,
        normal,
    }
}

/// Terms reachable within `fuel` steps, deduplicated up to α.
#[derive(Clone, Debug, Serialize)]
pub struct CbvGraph {
    pub nodes: Vec<VTerm>,
    /// `(from, label, to)` node indices.
    pub edges: Vec<(usize, Label, usize)>,
    /// Distance of each node from the start.
    pub depth: Vec<usize>,
    /// Nodes at the fuel bound whose successors were not explored.
    pub frontier: Vec<usize>,
}

impl CbvGraph {
    pub fn successors(&self, i: usize) -> impl Iterator<Item = (Label, usize)> + '_ {
        self.edges.iter().filter(move |e| e.0 == i).map(|e| (e.1, e.2))
    }

    pub fn is_normal(&self, i: usize) -> bool {
        !self.frontier.contains(&i) && self.successors(i).next().is_none()
    }

    /// Lengths of the maximal paths ending in a normal form.
    pub fn normal_path_lengths(&self) -> BTreeSet<usize> {
        let mut memo: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        fn go(g: &CbvGraph, i: usize, memo: &mut HashMap<usize, BTreeSet<usize>>) -> BTreeSet<usize> {
            if let Some(r) = memo.get(&i) {
                return r.clone();
            }
            let mut out = BTreeSet::new();
            if g.is_normal(i) {
                out.insert(0);
            }
            for (_, j) in g.successors(i).collect::<Vec<_>>() {
                for l in go(g, j, memo) {
                    out.insert(l + 1);
                }
            }
            memo.insert(i, out.clone());
            out
        }
        go(self, 0, &mut memo)
    }
}

/// Breadth-first exploration of every reduction choice.
pub fn cbv_graph(t: &VTerm, fuel: usize) -> CbvGraph {
    let mut fresh = Fresh::new();
    fresh.reserve_vterm(t);
    let mut g = CbvGraph {
        nodes: vec![t.clone()],
        edges: Vec::new(),
        depth: vec![0],
        frontier: Vec::new(),
    };
    let mut index: HashMap<String, usize> = HashMap::from([(t.alpha_key(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let succ = cbv_successors(&g.nodes[i], &mut fresh);
        if succ.is_empty() {
            continue;
        }
        if g.depth[i] == fuel {
            g.frontier.push(i);
            continue;
        }
        for s in succ {
            let key = s.term.alpha_key();
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    let j = g.nodes.len();
                    g.nodes.push(s.term);
                    g.depth.push(g.depth[i] + 1);
                    index.insert(key, j);
                    queue.push_back(j);
                    j
                }
            };
            g.edges.push((i, s.label, j));
        }
    }
    g
}

/// Diamond: two distinct one-step reducts of any term reachable within
/// `fuel` rejoin in exactly one step each.
pub fn check_diamond(t: &VTerm, fuel: usize) -> bool {
    find_diamond_failure(t, fuel).is_none()
}

/// A reachable term with two reducts that do not rejoin, if any.
pub fn find_diamond_failure(t: &VTerm, fuel: usize) -> Option<(VTerm, VTerm, VTerm)> {
    let g = cbv_graph(t, fuel);
    let mut root = Fresh::new();
    for n in &g.nodes {
        root.reserve_vterm(n);
    }
    let mut fresh = root.clone();
    let mut reducts_of = |u: &VTerm| -> HashSet<String> {
        cbv_successors(u, &mut fresh)
            .into_iter()
            .map(|s| s.term.alpha_key())
            .collect()
    };
    for s in &g.nodes {
        let mut seen = HashSet::new();
        let us: Vec<VTerm> = cbv_successors(s, &mut root.clone())
            .into_iter()
            .map(|st| st.term)
            .filter(|u| seen.insert(u.alpha_key()))
            .collect();
        for i in 0..us.len() {
            for j in i + 1..us.len() {
                let a = reducts_of(&us[i]);
                let b = reducts_of(&us[j]);
                if a.is_disjoint(&b) {
                    return Some((s.clone(), us[i].clone(), us[j].clone()));
                }
            }
        }
    }
    None
}

/// Every value occurring in a reduct reachable within `fuel` is α-equal to a
/// value occurring in `t`. Runs from a binder-distinct variant of `t` and
/// maps renamed binders back to their origin before comparing.
pub fn check_v_subterm(t: &VTerm, fuel: usize) -> bool {
    let mut fresh = Fresh::new();
    let start = t.distinct_binders(&mut fresh);
    let keys: HashSet<String> = start.values().iter().map(|v| v.alpha_key()).collect();
    let mut origins = Origins::default();
    let mut seen = HashSet::from([start.alpha_key()]);
    let mut frontier = vec![start];
    for _ in 0..fuel {
        let mut next = Vec::new();
        for u in &frontier {
            for s in cbv_successors(u, &mut fresh) {
                origins.record(&s.renamed);
                if !seen.insert(s.term.alpha_key()) {
                    continue;
                }
                let ok = s.term.values().iter().all(|v| {
                    let back = v.to_term().map_names(&|n| origins.resolve(n));
                    keys.contains(&back.alpha_key())
                });
                if !ok {
                    return false;
                }
                next.push(s.term);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_vterm;

    fn v(s: &str) -> VTerm {
        parse_vterm(s).unwrap()
    }

    fn only_step(s: &str) -> (Label, VTerm) {
        let t = v(s);
        let rs = enumerate_cbv_redexes(&t);
        assert_eq!(rs.len(), 1, "{rs:?}");
        let st = cbv_step(&t, &rs[0], &mut Fresh::new()).unwrap();
        (st.label, st.term)
    }

    #[test]
    fn redex_examples() {
        let rs = enumerate_cbv_redexes(&v("((\\x. x) (y y))[y/z]"));
        assert_eq!(rs.len(), 2);
        let mut labels: Vec<Label> = rs.iter().map(|r| r.label()).collect();
        labels.sort();
        assert_eq!(labels, vec![Label::Vdb, Label::Vls]);
        assert!(enumerate_cbv_redexes(&v("y[y/z]")).is_empty());
        assert_eq!(enumerate_cbv_redexes(&v("(x z)[x/\\w. w]")).len(), 1);
    }

    #[test]
    fn step_examples() {
        assert_eq!(only_step("(\\y. y) z"), (Label::Vdb, v("y[y/z]")));
        let (l, r) = only_step("(x z)[x/\\w. w]");
        assert_eq!(l, Label::Vls);
        assert!(r.alpha_eq(&v("((\\w. w) z)[x/\\w. w]")));
        let (l, r) = only_step("(x z)[x/(\\w. w)[u/s]]");
        assert_eq!(l, Label::Vls);
        assert!(r.alpha_eq(&v("(((\\w. w) z)[x/\\w. w])[u/s]")));
    }

    #[test]
    fn sigma_block_is_renamed_when_it_would_capture() {
        // u is free in the body; the S block binding u must not capture it
        let (_, r) = only_step("(x u)[x/(\\w. w)[u/s]]");
        assert!(r.alpha_eq(&v("(((\\w. w) u)[x/\\w. w])[q/s]")));
    }

    #[test]
    fn traces() {
        let tr = cbv_trace(&v("(\\y. y) z"), 5);
        assert_eq!(tr.labels(), vec![Label::Vdb]);
        assert!(tr.normal);
        assert_eq!(*tr.last(), v("y[y/z]"));
        assert!(cbv_trace(&v("\\x. x"), 5).is_empty());
    }

    #[test]
    fn diamond_example() {
        let t = v("((\\x. x) (y y))[y/z]");
        assert!(check_diamond(&t, 4));
        let g = cbv_graph(&t, 4);
        let goal = v("(x[x/z y])[y/z]");
        assert!(g.nodes.iter().any(|n| n.alpha_eq(&goal)));
        assert_eq!(g.normal_path_lengths(), [2].into());
    }

    #[test]
    fn v_subterm_examples() {
        assert!(check_v_subterm(&v("(x z)[x/\\w. w]"), 10));
        assert!(check_v_subterm(&v("(\\y. y) z"), 10));
        assert!(check_v_subterm(&v("(\\x. x x) (\\x. x x)"), 10));
    }

    #[test]
    fn vls_renames_a_binder_free_in_its_value() {
        let tr = cbv_trace(&parse_vterm("(x z)[x/x]").unwrap(), 5);
        assert!(tr.normal && tr.len() == 1);
        assert!(tr.last().alpha_eq(&parse_vterm("(x z)[y/x]").unwrap()));
    }
}

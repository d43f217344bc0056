//! Reduction at a distance on processes.
//!
//! With `N`, `N'` non-blocking contexts binding `D` and `G`, and `x` bound by
//! neither,
//!
//! ```text
//! N<x<y,z>> | N'<x(y',z'). P>   =>   N'<N<P{y'/y, z'/z}>>
//! N<x<y>>   | N'<!x(z). P>      =>   N'<N<P{z/y} | !x(z). P>>
//! ```
//!
//! The rules apply at any `Par` node in a non-blocking position. Both
//! orientations of the `Par` are admitted unless strict mode asks for the
//! output on the left only.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::context::{ContextPath, ProcStep};
use crate::name::{Fresh, Name};
use crate::process::Process;
use crate::trace::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    OutLeft,
    OutRight,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PiRedex {
    /// `Label::Tensor` or `Label::Bang`.
    pub kind: Label,
    pub channel: Name,
    /// The `Par` node joining the two sides.
    pub anchor: ContextPath<ProcStep>,
    pub orientation: Orientation,
    /// From the output-side child of the anchor to the output.
    pub out_path: ContextPath<ProcStep>,
    /// From the input-side child of the anchor to the input.
    pub in_path: ContextPath<ProcStep>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PiOptions {
    /// Only admit redexes with the output in the left branch.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not a redex of this process: {0}")]
pub struct InvalidPiRedex(&'static str);

/// Non-blocking positions of `p`, with the names bound along the way.
pub fn nb_positions(p: &Process) -> Vec<(ContextPath<ProcStep>, &Process)> {
    let mut out = Vec::new();
    let mut stack = vec![(ContextPath::root(), p)];
    while let Some((path, cur)) = stack.pop() {
        match cur {
            Process::Par(l, r) => {
                stack.push((path.child(ProcStep::ParRight, None), r));
                stack.push((path.child(ProcStep::ParLeft, None), l));
            }
            Process::Nu(x, q) => stack.push((path.child(ProcStep::NuBody, Some(x)), q)),
            _ => {}
        }
        out.push((path, cur));
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arity {
    Unary,
    Binary,
}

fn output(p: &Process) -> Option<(&Name, Arity)> {
    match p {
        Process::OutU(x, _) => Some((x, Arity::Unary)),
        Process::OutB(x, _, _) => Some((x, Arity::Binary)),
        _ => None,
    }
}

fn input(p: &Process) -> Option<(&Name, Arity)> {
    match p {
        Process::RepIn(x, _, _) => Some((x, Arity::Unary)),
        Process::InB(x, _, _, _) => Some((x, Arity::Binary)),
        _ => None,
    }
}

fn kind_of(a: Arity) -> Label {
    match a {
        Arity::Unary => Label::Bang,
        Arity::Binary => Label::Tensor,
    }
}

pub fn enumerate_pi_redexes(p: &Process, opts: PiOptions) -> Vec<PiRedex> {
    let mut out = Vec::new();
    for (anchor, node) in nb_positions(p) {
        let Process::Par(l, r) = node else { continue };
        let left = nb_positions(l);
        let right = nb_positions(r);
        let mut pair = |outs: &[(ContextPath<ProcStep>, &Process)],
                        ins: &[(ContextPath<ProcStep>, &Process)],
                        orientation: Orientation| {
            for (op, o) in outs {
                let Some((x, ar)) = output(o) else { continue };
                if op.captured.contains(x) {
                    continue;
                }
                for (ip, i) in ins {
                    let Some((y, ar2)) = input(i) else { continue };
                    if y != x || ar2 != ar || ip.captured.contains(x) {
                        continue;
                    }
                    out.push(PiRedex {
                        kind: kind_of(ar),
                        channel: x.clone(),
                        anchor: anchor.clone(),
                        orientation,
                        out_path: op.clone(),
                        in_path: ip.clone(),
                    });
                }
            }
        };
        pair(&left, &right, Orientation::OutLeft);
        if !opts.strict {
            pair(&right, &left, Orientation::OutRight);
        }
    }
    out
}

pub fn apply_pi_redex(p: &Process, r: &PiRedex, fresh: &mut Fresh) -> Result<Process, InvalidPiRedex> {
    fresh.reserve_process(p);
    let mut failure = None;
    let result = p
        .replace_at(&r.anchor.steps, |node| match contract(node, r, fresh) {
            Ok(q) => q,
            Err(e) => {
                failure = Some(e);
                node.clone()
            }
        })
        .ok_or(InvalidPiRedex("anchor path does not exist"))?;
    match failure {
        Some(e) => Err(e),
        None => Ok(result),
    }
}

fn contract(node: &Process, r: &PiRedex, fresh: &mut Fresh) -> Result<Process, InvalidPiRedex> {
    let Process::Par(l, rt) = node else {
        return Err(InvalidPiRedex("anchor is not a parallel composition"));
    };
    let (out_side, in_side) = match r.orientation {
        Orientation::OutLeft => (&**l, &**rt),
        Orientation::OutRight => (&**rt, &**l),
    };
    let out_leaf = out_side.at(&r.out_path.steps).ok_or(InvalidPiRedex("output path"))?;
    let in_leaf = in_side.at(&r.in_path.steps).ok_or(InvalidPiRedex("input path"))?;
    let delta = out_side
        .captured_along(&r.out_path.steps)
        .ok_or(InvalidPiRedex("output path"))?;
    let gamma = in_side
        .captured_along(&r.in_path.steps)
        .ok_or(InvalidPiRedex("input path"))?;
    let (Some((x, ar)), Some((y, ar2))) = (output(out_leaf), input(in_leaf)) else {
        return Err(InvalidPiRedex("no output/input pair at the paths"));
    };
    if x != y || ar != ar2 || *x != r.channel || kind_of(ar) != r.kind {
        return Err(InvalidPiRedex("channel or arity mismatch"));
    }
    if delta.contains(x) || gamma.contains(x) {
        return Err(InvalidPiRedex("channel is bound below the anchor"));
    }

    // N moves under the binders of N'.
    let out_fns = out_side.free_names();
    let (in_side, _) = in_side.rename_path_binders(&r.in_path.steps, &|n| out_fns.contains(n), fresh);
    let gamma = in_side.captured_along(&r.in_path.steps).expect("same shape");
    let in_leaf = in_side.at(&r.in_path.steps).expect("same shape").clone();

    // The continuation moves under the binders of N.
    let in_fns = in_leaf.free_names();
    let (out_side, _) =
        out_side.rename_path_binders(&r.out_path.steps, &|n| in_fns.contains(n) || gamma.contains(n), fresh);
    let out_leaf = out_side.at(&r.out_path.steps).expect("same shape").clone();

    let body = match (&out_leaf, &in_leaf) {
        (Process::OutB(_, y, z), Process::InB(_, y2, z2, cont)) => {
            let mut map = BTreeMap::new();
            // with a repeated binder the later one binds
            map.insert(y2.clone(), y.clone());
            map.insert(z2.clone(), z.clone());
            cont.substitute(&map, fresh)
        }
        (Process::OutU(_, y), Process::RepIn(_, z, cont)) => {
            let map = BTreeMap::from([(z.clone(), y.clone())]);
            Process::par(cont.substitute(&map, fresh), in_leaf.clone())
        }
        _ => unreachable!("pair checked above"),
    };
    let inner = out_side.replace_at(&r.out_path.steps, |_| body).expect("same shape");
    Ok(in_side.replace_at(&r.in_path.steps, |_| inner).expect("same shape"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiStep {
    pub redex: PiRedex,
    pub result: Process,
}

/// Every ⇒-successor of `p`.
pub fn pi_successors(p: &Process, opts: PiOptions, fresh: &mut Fresh) -> Vec<PiStep> {
    enumerate_pi_redexes(p, opts)
        .into_iter()
        .map(|redex| {
            let result = apply_pi_redex(p, &redex, fresh).expect("enumerated redexes apply");
            PiStep { redex, result }
        })
        .collect()
}

/// The classic rules without congruence: a `Par` node in a non-blocking
/// position whose left child is an output and right child a matching
/// input.
pub fn raw_classic_successors(p: &Process, fresh: &mut Fresh) -> Vec<(Label, Process)> {
    fresh.reserve_process(p);
    let mut out = Vec::new();
    for (path, node) in nb_positions(p) {
        let Process::Par(l, r) = node else { continue };
        let step = match (&**l, &**r) {
            (Process::OutB(x, y, z), Process::InB(x2, y2, z2, cont)) if x == x2 => {
                let mut map = BTreeMap::new();
                map.insert(y2.clone(), y.clone());
                map.insert(z2.clone(), z.clone());
                Some((Label::Tensor, cont.substitute(&map, fresh)))
            }
            (Process::OutU(x, y), Process::RepIn(x2, z, cont)) if x == x2 => {
                let map = BTreeMap::from([(z.clone(), y.clone())]);
                Some((Label::Bang, Process::par(cont.substitute(&map, fresh), (**r).clone())))
            }
            _ => None,
        };
        if let Some((label, q)) = step {
            out.push((label, p.replace_at(&path.steps, |_| q).expect("position exists")));
        }
    }
    out
}

/// Names of `p` restricted along some non-blocking path.
pub fn nb_binders(p: &Process) -> BTreeSet<Name> {
    nb_positions(p)
        .into_iter()
        .flat_map(|(path, _)| path.captured)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_process;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    fn steps(s: &str) -> Vec<PiStep> {
        pi_successors(&p(s), PiOptions::default(), &mut Fresh::new())
    }

    #[test]
    fn enumerate_examples() {
        let rs = enumerate_pi_redexes(&p("x<@a> | !x(@b). y<@b>"), PiOptions::default());
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].kind, Label::Bang);
        assert!(enumerate_pi_redexes(&p("new x. x<@a> | !x(@b). y<@b>"), PiOptions::default()).is_empty());
        let rs = enumerate_pi_redexes(&p("@a<y,@b> | (@a(u,@c). 0 | !@a(@d). 0)"), PiOptions::default());
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].kind, Label::Tensor);
    }

    #[test]
    fn apply_examples() {
        let s = steps("@a<x,@b> | @a(y,@c). y<@c>");
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].result, p("x<@b>"));
        let s = steps("x<@a> | !x(@b). y<@b>");
        assert_eq!(s[0].result, p("y<@a> | !x(@b). y<@b>"));
        let s = steps("(x<@a> | 0) | !x(@b). y<@b>");
        assert_eq!(s[0].result, p("(y<@a> | !x(@b). y<@b>) | 0"));
    }

    #[test]
    fn orientation() {
        let q = p("!x(@b). y<@b> | x<@a>");
        assert_eq!(enumerate_pi_redexes(&q, PiOptions { strict: true }).len(), 0);
        let s = steps("!x(@b). y<@b> | x<@a>");
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].redex.orientation, Orientation::OutRight);
        assert_eq!(s[0].result, p("y<@a> | !x(@b). y<@b>"));
    }

    #[test]
    fn contexts_nest_input_side_outside() {
        let s = steps("new u. (@a<x,u> | u<@c>) | new v. @a(y,w). w<y>");
        assert_eq!(s.len(), 1);
        assert!(s[0].result.alpha_eq(&p("new v. new u. (u<x> | u<@c>)")));
    }

    #[test]
    fn renames_to_avoid_capture() {
        // the input side binds x, which the output side uses freely
        let s = steps("@a<x,x> | new x. (@a(y,z). y<z> | x<@c>)");
        assert_eq!(s.len(), 1);
        let r = &s[0].result;
        assert_eq!(r.free_names(), [Name::var("x"), Name::special("c")].into());
        assert!(r.alpha_eq(&p("new q. (x<x> | q<@c>)")));
        // the output side binds q, which the continuation uses freely
        let s = steps("new q. (@a<y,y> | q<@c>) | @a(u,v). q<v>");
        assert_eq!(
            s[0].result.free_names(),
            [Name::var("q"), Name::var("y"), Name::special("c")].into()
        );
    }

    #[test]
    fn raw_rules_need_adjacency() {
        let mut f = Fresh::new();
        assert_eq!(raw_classic_successors(&p("x<@a> | !x(@b). y<@b>"), &mut f).len(), 1);
        assert!(raw_classic_successors(&p("!x(@b). y<@b> | x<@a>"), &mut f).is_empty());
        assert!(raw_classic_successors(&p("(x<@a> | 0) | !x(@b). y<@b>"), &mut f).is_empty());
    }
}

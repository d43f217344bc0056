//! Bounded rewriting oracles for structural congruence and for the classic
//! reduction rules taken modulo congruence.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::congruence::{canonical_key, prenex};
use crate::name::Fresh;
use crate::process::Process;
use crate::reduction::{nb_positions, pi_successors, raw_classic_successors, PiOptions};
use crate::trace::Label;

/// One application of a generating rule, in either direction, at the root.
fn local_rewrites(q: &Process, fresh: &mut Fresh) -> Vec<Process> {
    let mut out = vec![Process::par(q.clone(), Process::Nil)];
    match q {
        Process::Par(l, r) => {
            if r.is_nil() {
                out.push((**l).clone());
            }
            out.push(Process::Par(r.clone(), l.clone()));
            if let Process::Par(a, b) = &**l {
                out.push(Process::Par(a.clone(), Box::new(Process::Par(b.clone(), r.clone()))));
            }
            if let Process::Par(b, c) = &**r {
                out.push(Process::Par(Box::new(Process::Par(l.clone(), b.clone())), c.clone()));
            }
            if let Process::Nu(x, body) = &**r {
                if l.is_free(x) {
                    let nx = fresh.of_kind(x.kind());
                    out.push(Process::nu(
                        nx.clone(),
                        Process::Par(l.clone(), Box::new(body.rename_free(x, &nx))),
                    ));
                } else {
                    out.push(Process::nu(x.clone(), Process::Par(l.clone(), body.clone())));
                }
            }
        }
        Process::Nu(x, body) => match &**body {
            Process::Nu(y, inner) => out.push(Process::nu(y.clone(), Process::nu(x.clone(), (**inner).clone()))),
            Process::Nil => out.push(Process::Nil),
            Process::Par(l, r) if !l.is_free(x) => {
                out.push(Process::Par(l.clone(), Box::new(Process::nu(x.clone(), (**r).clone()))))
            }
            _ => {}
        },
        Process::Nil => {
            out.push(Process::nu(fresh.var(), Process::Nil));
            out.push(Process::nu(fresh.special(), Process::Nil));
        }
        _ => {}
    }
    out
}

/// Every process one rewrite away from `p`.
pub fn rewrites(p: &Process, fresh: &mut Fresh) -> Vec<Process> {
    fresh.reserve_process(p);
    let mut out = Vec::new();
    for (path, node) in nb_positions(p) {
        for r in local_rewrites(node, fresh) {
            out.push(p.replace_at(&path.steps, |_| r).expect("position exists"));
        }
    }
    out
}

/// Members of the class of `p` within `depth` rewrites, up to α, stopping
/// once `budget` members are known.
pub fn closure(p: &Process, depth: usize, budget: usize) -> HashMap<String, Process> {
    let mut fresh = Fresh::for_process(p);
    let mut seen = HashMap::from([(p.alpha_key(), p.clone())]);
    let mut layer = vec![p.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for q in &layer {
            for r in rewrites(q, &mut fresh) {
                if seen.len() >= budget {
                    return seen;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(r.alpha_key()) {
                    e.insert(r.clone());
                    next.push(r);
                }
            }
        }
        layer = next;
    }
    seen
}

/// Whether `q` is reachable from `p` by at most `depth` rewrites. Searches
/// half the depth from each side.
pub fn congruence_oracle(p: &Process, q: &Process, depth: usize) -> bool {
    let a = closure(p, depth.div_ceil(2), usize::MAX);
    let b = closure(q, depth / 2, usize::MAX);
    b.keys().any(|k| a.contains_key(k))
}

/// Apply `k` random rewrites.
pub fn random_rewrites(p: &Process, k: usize, rng: &mut impl Rng) -> Process {
    let mut fresh = Fresh::for_process(p);
    let mut cur = p.clone();
    for _ in 0..k {
        let rs = rewrites(&cur, &mut fresh);
        // the unit introduction is always available, so `rs` is non-empty
        cur = rs[rng.gen_range(0..rs.len())].clone();
    }
    cur
}

/// Successor classes, per kind, as canonical keys.
pub type KeySets = BTreeMap<Label, BTreeSet<String>>;

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClassicOptions {
    pub depth: usize,
    /// Cap on the number of class members explored by rewriting.
    pub budget: usize,
}

impl ClassicOptions {
    pub fn new(depth: usize) -> ClassicOptions {
        ClassicOptions { depth, budget: 400 }
    }
}

/// Members of the class of `p` arranged so that each communicating pair of
/// prenex components sits under one `Par` with the output on the left.
pub fn prenex_pairings(p: &Process) -> Vec<Process> {
    let pre = prenex(p);
    let mut out = Vec::new();
    for (i, ci) in pre.comps.iter().enumerate() {
        let chan = match ci {
            Process::OutU(x, _) | Process::OutB(x, _, _) => x,
            _ => continue,
        };
        for (j, cj) in pre.comps.iter().enumerate() {
            let matches = match (ci, cj) {
                (Process::OutU(..), Process::RepIn(x, _, _)) => x == chan,
                (Process::OutB(..), Process::InB(x, _, _, _)) => x == chan,
                _ => false,
            };
            if !matches || i == j {
                continue;
            }
            let mut body = Process::par(ci.clone(), cj.clone());
            for (k, c) in pre.comps.iter().enumerate() {
                if k != i && k != j {
                    body = Process::par(body, c.clone());
                }
            }
            for b in pre.blocks.iter().rev() {
                body = Process::nu(b.clone(), body);
            }
            out.push(body);
        }
    }
    out
}

/// Successors of `p` under the classic rules modulo congruence: the raw
/// rules applied to rewritten members of the class of `p`.
pub fn classic_step_oracle(p: &Process, opts: &ClassicOptions) -> KeySets {
    let mut members: Vec<Process> = closure(p, opts.depth, opts.budget).into_values().collect();
    members.extend(prenex_pairings(p));
    let mut fresh = Fresh::for_process(p);
    let mut seen: BTreeSet<(Label, String)> = BTreeSet::new();
    let mut out = KeySets::new();
    for m in &members {
        fresh.reserve_process(m);
        for (label, r) in raw_classic_successors(m, &mut fresh) {
            if seen.insert((label, r.alpha_key())) {
                out.entry(label).or_default().insert(canonical_key(&r));
            }
        }
    }
    out
}

pub fn distance_keys(p: &Process, opts: PiOptions) -> KeySets {
    let mut out = KeySets::new();
    for s in pi_successors(p, opts, &mut Fresh::for_process(p)) {
        out.entry(s.redex.kind).or_default().insert(canonical_key(&s.result));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HarmonyReport {
    pub distance: KeySets,
    pub classic: KeySets,
    pub equal: bool,
}

/// Compare the distance successors of `p` with the classic oracle's, kind
/// for kind.
pub fn harmony_check(p: &Process, opts: &ClassicOptions, pi: PiOptions) -> HarmonyReport {
    let distance = distance_keys(p, pi);
    let classic = classic_step_oracle(p, opts);
    let equal = distance == classic;
    HarmonyReport {
        distance,
        classic,
        equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::congruent;
    use crate::parse::parse_process;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert!(congruence_oracle(&p("x<@a> | 0"), &p("x<@a>"), 1));
        assert!(congruence_oracle(&p("x<@a>"), &p("x<@a>"), 0));
        assert!(congruence_oracle(
            &p("(x<@a> | y<@b>) | z<@c>"),
            &p("x<@a> | (y<@b> | z<@c>)"),
            1
        ));
        assert!(!congruence_oracle(&p("x(y,z). (y<z> | 0)"), &p("x(y,z). y<z>"), 4));
        assert!(congruence_oracle(
            &p("x<@a> | new y. y<@b>"),
            &p("new y. (x<@a> | y<@b>)"),
            1
        ));
        assert!(congruence_oracle(&p("new x. 0"), &p("0"), 1));
    }

    #[test]
    fn random_rewrites_stay_congruent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = p("new x. (x<@a> | !x(@b). y<@b>) | @c<y,z>");
        for _ in 0..50 {
            let q = random_rewrites(&base, 4, &mut rng);
            assert!(congruent(&base, &q), "{q}");
        }
    }

    #[test]
    fn classic_oracle_examples() {
        let r = classic_step_oracle(&p("!x(@b). y<@b> | x<@a>"), &ClassicOptions::new(2));
        let want = canonical_key(&p("y<@a> | !x(@b). y<@b>"));
        assert_eq!(r.get(&Label::Bang), Some(&[want].into()));
        assert!(classic_step_oracle(&Process::Nil, &ClassicOptions::new(2)).is_empty());
        let r = classic_step_oracle(&p("new x. (x<@a> | !x(@b). y<@b>)"), &ClassicOptions::new(2));
        let want = canonical_key(&p("new x. (y<@a> | !x(@b). y<@b>)"));
        assert_eq!(r.get(&Label::Bang), Some(&[want].into()));
    }

    #[test]
    fn harmony_examples() {
        let opts = ClassicOptions::new(2);
        assert!(harmony_check(&p("x<@a> | !x(@b). y<@b>"), &opts, PiOptions::default()).equal);
        assert!(harmony_check(&Process::Nil, &opts, PiOptions::default()).equal);
        assert!(harmony_check(&p("!x(@b). y<@b> | x<@a>"), &opts, PiOptions::default()).equal);
        assert!(!harmony_check(&p("!x(@b). y<@b> | x<@a>"), &opts, PiOptions { strict: true }).equal);
    }
}

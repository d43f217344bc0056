//! Exhaustive and random generation of terms and processes.
//!
//! Size is node count. Enumerated binders are named by depth, so distinct
//! trees are distinct up to α. Open terms draw free variables from a fixed
//! pool of two names.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::name::Name;
use crate::process::Process;
use crate::term::{Term, VTerm, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermMode {
    Lsub,
    Vker,
}

pub const FREE_POOL: [&str; 2] = ["p", "q"];

fn binder(depth: usize) -> Name {
    Name::var(&format!("x{depth}"))
}

fn lam(x: Name, b: Term) -> Term {
    Term::Lam(x, Box::new(b))
}

fn sub(b: Term, x: Name, s: Term) -> Term {
    Term::Sub(Box::new(b), x, Box::new(s))
}

fn atoms(depth: usize, closed: bool) -> Vec<Name> {
    let mut v: Vec<Name> = (0..depth).map(binder).collect();
    if !closed {
        v.extend(FREE_POOL.iter().map(|s| Name::var(s)));
    }
    v
}

/// All terms of exactly `size` nodes, in a fixed order.
pub fn enumerate_lsub(size: usize, closed: bool) -> Vec<Term> {
    lsub_at(size, 0, closed)
}

fn lsub_at(n: usize, depth: usize, closed: bool) -> Vec<Term> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    if n == 1 {
        return atoms(depth, closed).into_iter().map(Term::Var).collect();
    }
    for b in lsub_at(n - 1, depth + 1, closed) {
        out.push(lam(binder(depth), b));
    }
    for i in 1..n - 1 {
        let fs = lsub_at(i, depth, closed);
        let ss = lsub_at(n - 1 - i, depth, closed);
        for f in &fs {
            for s in &ss {
                out.push(Term::app(f.clone(), s.clone()));
            }
        }
    }
    for i in 1..n - 1 {
        let bs = lsub_at(i, depth + 1, closed);
        let ss = lsub_at(n - 1 - i, depth, closed);
        for b in &bs {
            for s in &ss {
                out.push(sub(b.clone(), binder(depth), s.clone()));
            }
        }
    }
    out
}

pub fn enumerate_vker(size: usize, closed: bool) -> Vec<VTerm> {
    vterm_at(size, 0, closed)
}

fn value_at(n: usize, depth: usize, closed: bool) -> Vec<Value> {
    match n {
        0 => Vec::new(),
        1 => atoms(depth, closed).into_iter().map(Value::Var).collect(),
        _ => vterm_at(n - 1, depth + 1, closed)
            .into_iter()
            .map(|b| Value::Lam(binder(depth), Box::new(b)))
            .collect(),
    }
}

fn vterm_at(n: usize, depth: usize, closed: bool) -> Vec<VTerm> {
    let mut out: Vec<VTerm> = value_at(n, depth, closed).into_iter().map(VTerm::Val).collect();
    for i in 1..n.saturating_sub(1) {
        let vs = value_at(i, depth, closed);
        let ss = vterm_at(n - 1 - i, depth, closed);
        for v in &vs {
            for s in &ss {
                out.push(VTerm::App(v.clone(), Box::new(s.clone())));
            }
        }
    }
    for i in 1..n.saturating_sub(1) {
        let bs = vterm_at(i, depth + 1, closed);
        let ss = vterm_at(n - 1 - i, depth, closed);
        for b in &bs {
            for s in &ss {
                out.push(VTerm::Sub(Box::new(b.clone()), binder(depth), Box::new(s.clone())));
            }
        }
    }
    out
}

/// Terms of either calculus, as ordinary terms.
pub fn enumerate_terms(size: usize, mode: TermMode, closed: bool) -> Vec<Term> {
    match mode {
        TermMode::Lsub => enumerate_lsub(size, closed),
        TermMode::Vker => enumerate_vker(size, closed).iter().map(VTerm::to_term).collect(),
    }
}

/// All terms with between 1 and `max` nodes.
pub fn enumerate_up_to(max: usize, mode: TermMode, closed: bool) -> Vec<Term> {
    (1..=max).flat_map(|n| enumerate_terms(n, mode, closed)).collect()
}

/// Number of terms of each shape, used to sample uniformly.
struct Counts {
    mode: TermMode,
    free: usize,
    terms: HashMap<(usize, usize), f64>,
    values: HashMap<(usize, usize), f64>,
}

impl Counts {
    fn new(mode: TermMode, closed: bool) -> Counts {
        Counts {
            mode,
            free: if closed { 0 } else { FREE_POOL.len() },
            terms: HashMap::new(),
            values: HashMap::new(),
        }
    }

    fn value(&mut self, n: usize, k: usize) -> f64 {
        match n {
            0 => 0.0,
            1 => (k + self.free) as f64,
            _ => self.term(n - 1, k + 1),
        }
    }

    fn term(&mut self, n: usize, k: usize) -> f64 {
        if let Some(c) = self.terms.get(&(n, k)) {
            return *c;
        }
        let c = match (self.mode, n) {
            (_, 0) => 0.0,
            (TermMode::Lsub, 1) => (k + self.free) as f64,
            (TermMode::Lsub, _) => {
                let mut c = self.term(n - 1, k + 1);
                for i in 1..n - 1 {
                    c += self.term(i, k) * self.term(n - 1 - i, k);
                    c += self.term(i, k + 1) * self.term(n - 1 - i, k);
                }
                c
            }
            (TermMode::Vker, _) => {
                let v = self.value(n, k);
                self.values.insert((n, k), v);
                let mut c = v;
                for i in 1..n.saturating_sub(1) {
                    c += self.value(i, k) * self.term(n - 1 - i, k);
                    c += self.term(i, k + 1) * self.term(n - 1 - i, k);
                }
                c
            }
        };
        self.terms.insert((n, k), c);
        c
    }
}

fn pick(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut r = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if r < *w {
            return i;
        }
        r -= w;
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

fn atom(rng: &mut ChaCha8Rng, k: usize, closed: bool) -> Name {
    let pool = atoms(k, closed);
    pool[rng.gen_range(0..pool.len())].clone()
}

fn sample_lsub(c: &mut Counts, rng: &mut ChaCha8Rng, n: usize, k: usize, closed: bool) -> Term {
    if n == 1 {
        return Term::Var(atom(rng, k, closed));
    }
    // lam, then (app, sub) for each split
    let mut w = vec![c.term(n - 1, k + 1)];
    for i in 1..n - 1 {
        w.push(c.term(i, k) * c.term(n - 1 - i, k));
        w.push(c.term(i, k + 1) * c.term(n - 1 - i, k));
    }
    let choice = pick(rng, &w);
    if choice == 0 {
        return lam(binder(k), sample_lsub(c, rng, n - 1, k + 1, closed));
    }
    let i = (choice - 1) / 2 + 1;
    if (choice - 1).is_multiple_of(2) {
        let f = sample_lsub(c, rng, i, k, closed);
        Term::app(f, sample_lsub(c, rng, n - 1 - i, k, closed))
    } else {
        let b = sample_lsub(c, rng, i, k + 1, closed);
        sub(b, binder(k), sample_lsub(c, rng, n - 1 - i, k, closed))
    }
}

fn sample_value(c: &mut Counts, rng: &mut ChaCha8Rng, n: usize, k: usize, closed: bool) -> Value {
    if n == 1 {
        Value::Var(atom(rng, k, closed))
    } else {
        Value::Lam(binder(k), Box::new(sample_vker(c, rng, n - 1, k + 1, closed)))
    }
}

fn sample_vker(c: &mut Counts, rng: &mut ChaCha8Rng, n: usize, k: usize, closed: bool) -> VTerm {
    let mut w = vec![c.value(n, k)];
    for i in 1..n.saturating_sub(1) {
        w.push(c.value(i, k) * c.term(n - 1 - i, k));
        w.push(c.term(i, k + 1) * c.term(n - 1 - i, k));
    }
    let choice = pick(rng, &w);
    if choice == 0 {
        return VTerm::Val(sample_value(c, rng, n, k, closed));
    }
    let i = (choice - 1) / 2 + 1;
    if (choice - 1).is_multiple_of(2) {
        let v = sample_value(c, rng, i, k, closed);
        VTerm::App(v, Box::new(sample_vker(c, rng, n - 1 - i, k, closed)))
    } else {
        let b = sample_vker(c, rng, i, k + 1, closed);
        VTerm::Sub(
            Box::new(b),
            binder(k),
            Box::new(sample_vker(c, rng, n - 1 - i, k, closed)),
        )
    }
}

/// A uniformly drawn term of exactly `size` nodes, or `None` if there is
/// none.
pub fn random_term(size: usize, seed: u64, mode: TermMode, closed: bool) -> Option<Term> {
    let mut c = Counts::new(mode, closed);
    if c.term(size, 0) == 0.0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Some(match mode {
        TermMode::Lsub => sample_lsub(&mut c, &mut rng, size, 0, closed),
        TermMode::Vker => sample_vker(&mut c, &mut rng, size, 0, closed).to_term(),
    })
}

pub fn random_vterm(size: usize, seed: u64, closed: bool) -> Option<VTerm> {
    random_term(size, seed, TermMode::Vker, closed).map(|t| VTerm::from_term(&t).expect("vker shape"))
}

const PROC_VARS: [&str; 3] = ["x", "y", "z"];
const PROC_SPECIALS: [&str; 3] = ["a", "b", "c"];

fn proc_name(rng: &mut impl Rng, special: bool) -> Name {
    let i = rng.gen_range(0..3);
    if special {
        Name::special(PROC_SPECIALS[i])
    } else {
        Name::var(PROC_VARS[i])
    }
}

/// Subjects come from a smaller pool so that prefixes meet more often.
fn subject(rng: &mut impl Rng, special: bool) -> Name {
    let i = rng.gen_range(0..2);
    if special {
        Name::special(PROC_SPECIALS[i])
    } else {
        Name::var(PROC_VARS[i])
    }
}

fn any_name(rng: &mut impl Rng) -> Name {
    let special = rng.gen();
    proc_name(rng, special)
}

fn distinct_pair(rng: &mut impl Rng) -> (Name, Name) {
    let y = any_name(rng);
    loop {
        let z = any_name(rng);
        if z != y {
            return (y, z);
        }
    }
}

/// A random process of exactly `size` nodes over a pool of six names.
/// Names are reused freely as binders, so shadowing and capture occur.
/// Unary and replicated prefixes have variable subjects, binary ones special
/// subjects.
pub fn random_process(size: usize, rng: &mut impl Rng) -> Process {
    if size <= 1 {
        return match rng.gen_range(0..5) {
            0 => Process::Nil,
            1 | 2 => Process::out(subject(rng, false), any_name(rng)),
            _ => {
                let (y, z) = distinct_pair(rng);
                Process::out2(subject(rng, true), y, z)
            }
        };
    }
    // restriction, input and replicated input once each; parallel six times
    let choice = if size >= 3 {
        rng.gen_range(0..9)
    } else {
        rng.gen_range(0..3)
    };
    match choice {
        0 => {
            let x = any_name(rng);
            Process::nu(x, random_process(size - 1, rng))
        }
        1 => {
            let (y, z) = distinct_pair(rng);
            Process::inp(subject(rng, true), y, z, random_process(size - 1, rng))
        }
        2 => {
            let y = any_name(rng);
            Process::rep(subject(rng, false), y, random_process(size - 1, rng))
        }
        _ => {
            let l = rng.gen_range(1..size - 1);
            Process::par(random_process(l, rng), random_process(size - 1 - l, rng))
        }
    }
}

/// A small edit that usually leaves the congruence class: change the
/// subject of a prefix, move a restriction across a prefix, or drop one
/// side of a parallel composition.
pub fn mutate_process(p: &Process, rng: &mut impl Rng) -> Process {
    let target = rng.gen_range(0..p.size());
    let mut seen = 0;
    mutate_at(p, target, &mut seen, rng)
}

fn mutate_at(p: &Process, target: usize, seen: &mut usize, rng: &mut impl Rng) -> Process {
    let here = *seen == target;
    *seen += 1;
    if here {
        return mutate_node(p, rng);
    }
    match p {
        Process::Nil | Process::OutU(..) | Process::OutB(..) => p.clone(),
        Process::Nu(x, q) => Process::nu(x.clone(), mutate_at(q, target, seen, rng)),
        Process::InB(c, y, z, q) => Process::inp(c.clone(), y.clone(), z.clone(), mutate_at(q, target, seen, rng)),
        Process::RepIn(c, y, q) => Process::rep(c.clone(), y.clone(), mutate_at(q, target, seen, rng)),
        Process::Par(l, r) => {
            let l = mutate_at(l, target, seen, rng);
            let r = mutate_at(r, target, seen, rng);
            Process::par(l, r)
        }
    }
}

fn mutate_node(p: &Process, rng: &mut impl Rng) -> Process {
    match p {
        Process::Nil => Process::out(proc_name(rng, false), proc_name(rng, true)),
        Process::OutU(_, y) => Process::out(proc_name(rng, false), y.clone()),
        Process::OutB(_, y, z) => Process::out2(proc_name(rng, true), y.clone(), z.clone()),
        Process::RepIn(_, y, q) => Process::rep(proc_name(rng, false), y.clone(), (**q).clone()),
        Process::InB(c, y, z, q) => match &**q {
            Process::Nu(x, inner) if x != c && x != y && x != z => Process::nu(
                x.clone(),
                Process::inp(c.clone(), y.clone(), z.clone(), (**inner).clone()),
            ),
            _ => Process::inp(proc_name(rng, true), y.clone(), z.clone(), (**q).clone()),
        },
        Process::Nu(x, q) => match &**q {
            Process::InB(c, y, z, inner) if x != c && x != y && x != z => Process::inp(
                c.clone(),
                y.clone(),
                z.clone(),
                Process::nu(x.clone(), (**inner).clone()),
            ),
            Process::RepIn(c, y, inner) if x != c && x != y => {
                Process::rep(c.clone(), y.clone(), Process::nu(x.clone(), (**inner).clone()))
            }
            _ => Process::nu(any_name(rng), (**q).clone()),
        },
        Process::Par(l, r) => {
            if rng.gen() {
                (**l).clone()
            } else {
                (**r).clone()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Every term over names `n0..n{size}`, binders included, with no
    /// attempt at α-normalisation.
    fn brute(size: usize, names: &[Name], vker: bool) -> Vec<Term> {
        if size == 0 {
            return Vec::new();
        }
        let mut out: Vec<Term> = if size == 1 {
            names.iter().cloned().map(Term::Var).collect()
        } else {
            Vec::new()
        };
        for x in names {
            for b in brute(size.saturating_sub(1), names, vker) {
                out.push(lam(x.clone(), b));
            }
        }
        for i in 1..size.saturating_sub(1) {
            for f in brute(i, names, vker) {
                if vker && !matches!(f, Term::Var(_) | Term::Lam(..)) {
                    continue;
                }
                for s in brute(size - 1 - i, names, vker) {
                    out.push(Term::app(f.clone(), s.clone()));
                }
            }
            for b in brute(i, names, vker) {
                for s in brute(size - 1 - i, names, vker) {
                    for x in names {
                        out.push(sub(b.clone(), x.clone(), s.clone()));
                    }
                }
            }
        }
        out
    }

    fn brute_closed_count(size: usize, vker: bool) -> usize {
        // enough distinct names that every α-class has a representative
        let names: Vec<Name> = (0..size).map(|i| Name::var(&format!("n{i}"))).collect();
        let keys: BTreeSet<String> = brute(size, &names, vker)
            .into_iter()
            .filter(|t| t.is_closed())
            .map(|t| t.alpha_key())
            .collect();
        keys.len()
    }

    #[test]
    fn small_enumerations() {
        assert!(enumerate_lsub(1, true).is_empty());
        assert_eq!(enumerate_lsub(2, true), vec![lam(binder(0), Term::Var(binder(0)))]);
    }

    #[test]
    fn counts_match_brute_force() {
        for n in 1..=5 {
            assert_eq!(enumerate_lsub(n, true).len(), brute_closed_count(n, false), "lsub {n}");
            assert_eq!(enumerate_vker(n, true).len(), brute_closed_count(n, true), "vker {n}");
        }
    }

    #[test]
    fn enumeration_is_duplicate_free_and_sized() {
        for mode in [TermMode::Lsub, TermMode::Vker] {
            for closed in [true, false] {
                let ts = enumerate_terms(6, mode, closed);
                let keys: BTreeSet<String> = ts.iter().map(Term::alpha_key).collect();
                assert_eq!(keys.len(), ts.len());
                assert!(ts.iter().all(|t| t.size() == 6 && (!closed || t.is_closed())));
            }
        }
    }

    #[test]
    fn counts_agree_with_enumeration() {
        for mode in [TermMode::Lsub, TermMode::Vker] {
            let mut c = Counts::new(mode, true);
            for n in 1..=8 {
                assert_eq!(c.term(n, 0) as usize, enumerate_terms(n, mode, true).len());
            }
        }
    }

    #[test]
    fn random_terms_are_deterministic_and_well_formed() {
        assert_eq!(
            random_term(8, 42, TermMode::Lsub, true),
            random_term(8, 42, TermMode::Lsub, true)
        );
        let distinct: BTreeSet<String> = (0..20)
            .map(|s| random_term(8, s, TermMode::Lsub, true).unwrap().alpha_key())
            .collect();
        assert!(distinct.len() > 1);
        for s in 0..50 {
            let t = random_term(9, s, TermMode::Vker, true).unwrap();
            assert!(VTerm::from_term(&t).is_some() && t.is_closed() && t.size() == 9);
        }
        assert_eq!(random_term(1, 0, TermMode::Lsub, true), None);
    }

    #[test]
    fn random_processes_have_the_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=12 {
            assert_eq!(random_process(n, &mut rng).size(), n);
        }
    }
}

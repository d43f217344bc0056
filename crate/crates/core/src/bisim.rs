//! The simulation game between a term and its encoding.
//!
//! Each round pairs the term-side steps with the distance steps of the
//! current process. A term step of label `l` must be matched by a process
//! step of kind `l.pi_kind()` landing congruent to the encoding of the
//! reduct, and every process step must be matched in the same way. Both
//! sides then advance along every matched pair.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::cbn::cbn_step;
use crate::cbv::cbv_successors;
use crate::congruence::{canonical_key, canonicalize};
use crate::encode::{cbn_param, encode_cbn, encode_cbv, encode_cbv_auto};
use crate::name::{Fresh, Name};
use crate::oracle::congruence_oracle;
use crate::process::Process;
use crate::reduction::{pi_successors, PiOptions};
use crate::term::{Term, VTerm};
use crate::trace::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cbn,
    Cbv,
}

#[derive(Clone, Copy, Debug)]
pub struct GameOptions {
    pub fuel: usize,
    pub pi: PiOptions,
    /// Keep every process met during the game.
    pub collect: bool,
}

impl GameOptions {
    pub fn new(fuel: usize) -> GameOptions {
        GameOptions {
            fuel,
            pi: PiOptions::default(),
            collect: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "side", rename_all = "lowercase")]
pub enum Unmatched {
    /// A term step with no process step of the right kind and class.
    Forward {
        label: Label,
        reduct: String,
        expected: String,
    },
    /// A process step with no term step of the right kind and class.
    Backward {
        kind: Label,
        result: String,
        canonical: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub depth: usize,
    pub term: String,
    pub process: String,
    pub unmatched: Unmatched,
    /// Whether the bounded rewriting oracle relates the offending result to
    /// some encoded reduct.
    pub oracle: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BisimReport {
    /// Longest path explored.
    pub rounds: usize,
    /// Distinct (term, process) pairs examined.
    pub states: usize,
    /// Step counts along the first completed path, term side then process side.
    pub term_counts: BTreeMap<Label, usize>,
    pub process_counts: BTreeMap<Label, usize>,
    /// Every explored path reached a pair of normal forms.
    pub normal: bool,
    /// Some path ran out of fuel.
    pub exhausted: bool,
    pub mismatch: Option<Mismatch>,
    #[serde(skip)]
    pub visited: Vec<Process>,
}

impl BisimReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Outcome of matching one round.
#[derive(Clone, Debug)]
pub struct RoundCheck<T> {
    /// Matched `(term label, term reduct, process result)` triples.
    pub pairs: Vec<(Label, T, Process)>,
    pub unmatched: Option<Unmatched>,
    /// The unmatched process result, for a backward failure.
    pub offending: Option<Process>,
    pub pi_steps: usize,
}

trait Side {
    type T: Clone;
    fn steps(&self, t: &Self::T, fresh: &mut Fresh) -> Vec<(Label, Self::T)>;
    fn encode(&self, t: &Self::T) -> Process;
    fn key(&self, t: &Self::T) -> String;
    fn show(&self, t: &Self::T) -> String;
}

struct Cbn(Name);

impl Side for Cbn {
    type T = Term;
    fn steps(&self, t: &Term, fresh: &mut Fresh) -> Vec<(Label, Term)> {
        cbn_step(t, fresh).map(|s| (s.label, s.term)).into_iter().collect()
    }
    fn encode(&self, t: &Term) -> Process {
        encode_cbn(t, &self.0, &mut Fresh::new()).expect("special parameter")
    }
    fn key(&self, t: &Term) -> String {
        t.alpha_key()
    }
    fn show(&self, t: &Term) -> String {
        t.to_string()
    }
}

struct Cbv(Name);

impl Side for Cbv {
    type T = VTerm;
    fn steps(&self, t: &VTerm, fresh: &mut Fresh) -> Vec<(Label, VTerm)> {
        cbv_successors(t, fresh)
            .into_iter()
            .map(|s| (s.label, s.term))
            .collect()
    }
    fn encode(&self, t: &VTerm) -> Process {
        encode_cbv(t, &self.0, &mut Fresh::new()).expect("parameter fresh for the start term")
    }
    fn key(&self, t: &VTerm) -> String {
        t.alpha_key()
    }
    fn show(&self, t: &VTerm) -> String {
        t.to_string()
    }
}

fn check_round<S: Side>(side: &S, t: &S::T, p: &Process, pi: PiOptions, fresh: &mut Fresh) -> RoundCheck<S::T> {
    fresh.reserve_process(p);
    let term_steps = side.steps(t, fresh);
    let targets: Vec<(Label, String)> = term_steps
        .iter()
        .map(|(l, s)| (l.pi_kind(), canonical_key(&side.encode(s))))
        .collect();
    let results = pi_successors(p, pi, fresh);
    let pi_steps = results.len();
    let mut pairs = Vec::new();
    let mut hit = vec![false; term_steps.len()];
    for r in results {
        let key = canonical_key(&r.result);
        let found = targets.iter().position(|(k, tk)| *k == r.redex.kind && *tk == key);
        match found {
            Some(i) => {
                hit[i] = true;
                pairs.push((term_steps[i].0, term_steps[i].1.clone(), r.result));
            }
            None => {
                return RoundCheck {
                    pairs,
                    unmatched: Some(Unmatched::Backward {
                        kind: r.redex.kind,
                        canonical: canonicalize(&r.result).to_string(),
                        result: r.result.to_string(),
                    }),
                    offending: Some(r.result),
                    pi_steps,
                }
            }
        }
    }
    let unmatched = hit.iter().position(|h| !h).map(|i| Unmatched::Forward {
        label: term_steps[i].0,
        reduct: side.show(&term_steps[i].1),
        expected: canonicalize(&side.encode(&term_steps[i].1)).to_string(),
    });
    RoundCheck {
        pairs,
        unmatched,
        offending: None,
        pi_steps,
    }
}

fn oracle_verdict<S: Side>(side: &S, t: &S::T, p: &Process, round: &RoundCheck<S::T>, pi: PiOptions) -> bool {
    let mut fresh = Fresh::for_process(p);
    if let Some(r) = &round.offending {
        return side
            .steps(t, &mut fresh)
            .iter()
            .any(|(_, s)| congruence_oracle(r, &side.encode(s), 4));
    }
    match &round.unmatched {
        None | Some(Unmatched::Backward { .. }) => false,
        Some(Unmatched::Forward { label, .. }) => {
            let targets: Vec<Process> = side
                .steps(t, &mut fresh)
                .iter()
                .filter(|(l, _)| l == label)
                .map(|(_, s)| side.encode(s))
                .collect();
            pi_successors(p, pi, &mut fresh)
                .iter()
                .any(|r| targets.iter().any(|q| congruence_oracle(&r.result, q, 4)))
        }
    }
}

fn play<S: Side>(side: &S, start: &S::T, opts: GameOptions) -> BisimReport {
    let mut fresh = Fresh::new();
    let p0 = side.encode(start);
    let mut report = BisimReport {
        normal: true,
        ..BisimReport::default()
    };
    let mut seen = HashSet::new();
    let mut first_done = false;
    let mut stack = vec![(start.clone(), p0, 0usize, BTreeMap::new(), BTreeMap::new())];
    while let Some((t, p, depth, tc, pc)) = stack.pop() {
        if !seen.insert((side.key(&t), p.alpha_key())) {
            continue;
        }
        report.states += 1;
        report.rounds = report.rounds.max(depth);
        if opts.collect {
            report.visited.push(p.clone());
        }
        let round = check_round(side, &t, &p, opts.pi, &mut fresh);
        if let Some(u) = round.unmatched.clone() {
            report.mismatch = Some(Mismatch {
                depth,
                term: side.show(&t),
                process: p.to_string(),
                oracle: oracle_verdict(side, &t, &p, &round, opts.pi),
                unmatched: u,
            });
            report.normal = false;
            return report;
        }
        if round.pairs.is_empty() {
            if !first_done {
                first_done = true;
                report.term_counts = tc;
                report.process_counts = pc;
            }
            continue;
        }
        if depth == opts.fuel {
            report.exhausted = true;
            report.normal = false;
            continue;
        }
        // reverse so that the first matched pair is explored first
        for (label, s, q) in round.pairs.into_iter().rev() {
            let mut tc = tc.clone();
            let mut pc = pc.clone();
            *tc.entry(label).or_insert(0) += 1;
            *pc.entry(label.pi_kind()).or_insert(0) += 1;
            stack.push((s, q, depth + 1, tc, pc));
        }
    }
    report
}

pub fn bisim_game_cbn(t: &Term, opts: GameOptions) -> BisimReport {
    play(&Cbn(cbn_param()), t, opts)
}

pub fn bisim_game_cbv(t: &VTerm, opts: GameOptions) -> BisimReport {
    let (x, _) = encode_cbv_auto(t, &mut Fresh::new());
    play(&Cbv(x), t, opts)
}

/// One round of the CBN game on `t` with parameter `a`.
pub fn cbn_round(t: &Term, a: &Name, pi: PiOptions) -> RoundCheck<Term> {
    let side = Cbn(a.clone());
    check_round(&side, t, &side.encode(t), pi, &mut Fresh::for_term(t))
}

/// One round of the CBV game on `t` with parameter `x`.
pub fn cbv_round(t: &VTerm, x: &Name, pi: PiOptions) -> RoundCheck<VTerm> {
    let side = Cbv(x.clone());
    let mut fresh = Fresh::new();
    fresh.reserve_vterm(t);
    check_round(&side, t, &side.encode(t), pi, &mut fresh)
}

/// The term step, if any, is simulated by a process step.
pub fn forward_cbn(t: &Term, a: &Name) -> bool {
    !matches!(
        cbn_round(t, a, PiOptions::default()).unmatched,
        Some(Unmatched::Forward { .. })
    )
}

/// Every process step is simulated by the term step, so all of them agree
/// up to congruence.
pub fn backward_cbn(t: &Term, a: &Name) -> bool {
    !matches!(
        cbn_round(t, a, PiOptions::default()).unmatched,
        Some(Unmatched::Backward { .. })
    )
}

pub fn forward_cbv(t: &VTerm, x: &Name) -> bool {
    !matches!(
        cbv_round(t, x, PiOptions::default()).unmatched,
        Some(Unmatched::Forward { .. })
    )
}

pub fn backward_cbv(t: &VTerm, x: &Name) -> bool {
    !matches!(
        cbv_round(t, x, PiOptions::default()).unmatched,
        Some(Unmatched::Backward { .. })
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_term, parse_vterm};

    fn counts(pairs: &[(Label, usize)]) -> BTreeMap<Label, usize> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn cbn_rounds() {
        let a = cbn_param();
        let t = parse_term("(\\x. x) y").unwrap();
        let r = cbn_round(&t, &a, PiOptions::default());
        assert!(r.unmatched.is_none());
        assert_eq!(r.pi_steps, 1);
        assert_eq!(r.pairs[0].0, Label::Db);
        assert!(forward_cbn(&parse_term("x[x/y]").unwrap(), &a));
        assert!(backward_cbn(&parse_term("x[x/y]").unwrap(), &a));
        let r = cbn_round(&parse_term("\\x. x").unwrap(), &a, PiOptions::default());
        assert!(r.pairs.is_empty() && r.unmatched.is_none());
        assert_eq!(
            cbn_round(&parse_term("x").unwrap(), &a, PiOptions::default()).pi_steps,
            0
        );
    }

    #[test]
    fn cbn_game_identity() {
        let r = bisim_game_cbn(&parse_term("(\\x. x) y").unwrap(), GameOptions::new(10));
        assert!(r.passed() && r.normal);
        assert_eq!(r.rounds, 2);
        assert_eq!(r.term_counts, counts(&[(Label::Db, 1), (Label::Ls, 1)]));
        assert_eq!(r.process_counts, counts(&[(Label::Tensor, 1), (Label::Bang, 1)]));
        let r = bisim_game_cbn(&parse_term("\\x. x").unwrap(), GameOptions::new(10));
        assert!(r.passed() && r.rounds == 0);
    }

    #[test]
    fn cbn_game_runs_out_of_fuel_on_omega() {
        let r = bisim_game_cbn(&parse_term("(\\x. x x) (\\x. x x)").unwrap(), GameOptions::new(12));
        assert!(r.passed() && r.exhausted && !r.normal);
    }

    #[test]
    fn cbv_rounds() {
        let x = Name::var("o");
        let r = cbv_round(&parse_vterm("(\\y. y) z").unwrap(), &x, PiOptions::default());
        assert!(r.unmatched.is_none());
        assert_eq!(r.pairs.len(), 1);
        let r = cbv_round(&parse_vterm("y[y/z]").unwrap(), &x, PiOptions::default());
        assert!(r.pairs.is_empty() && r.pi_steps == 0);
        let r = cbv_round(&parse_vterm("((\\x. x) (y y))[y/z]").unwrap(), &x, PiOptions::default());
        assert!(r.unmatched.is_none());
        let mut labels: Vec<Label> = r.pairs.iter().map(|p| p.0).collect();
        labels.sort();
        assert_eq!(labels, [Label::Vdb, Label::Vls]);
        assert!(forward_cbv(&parse_vterm("(\\y. y) z").unwrap(), &x));
        assert!(backward_cbv(&parse_vterm("(\\y. y) z").unwrap(), &x));
    }

    #[test]
    fn cbv_game_branches() {
        let r = bisim_game_cbv(&parse_vterm("((\\x. x) (y y))[y/z]").unwrap(), GameOptions::new(10));
        assert!(r.passed(), "{:?}", r.mismatch);
        assert!(r.normal);
        assert!(r.states > 2);
        let r = bisim_game_cbv(&parse_vterm("\\x. x").unwrap(), GameOptions::new(10));
        assert!(r.passed() && r.rounds == 0);
    }

    #[test]
    fn strict_orientation_is_reported() {
        let opts = GameOptions {
            pi: PiOptions { strict: true },
            ..GameOptions::new(10)
        };
        let r = bisim_game_cbn(&parse_term("(\\x. x) y").unwrap(), opts);
        assert!(!r.passed());
    }
}

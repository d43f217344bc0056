//! Linear weak head reduction on the linear substitution calculus.
//!
//! Evaluation contexts are `E ::= <> | E t | E[x/t]`, substitution contexts
//! `S ::= <> | S[x/t]`. The two rules are
//!
//! ```text
//! S<\x. t> s    -> S<t[x/s]>           (db)
//! E<x>[x/s]     -> E<s>[x/s]           (ls, x not bound by E)
//! ```

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::context::{ContextPath, TermStep};
use crate::name::{Fresh, Name};
use crate::term::{log_fresh, Origins, PureTerm, Renames, Term};
use crate::trace::{Label, Trace, TraceStep};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CbnRedex {
    /// An application at `at` whose function is `subs` substitutions wrapped
    /// around an abstraction.
    Db { at: ContextPath<TermStep>, subs: usize },
    /// A substitution `[binder/s]` at `at` whose body has `binder` in head
    /// position along `var` (relative to the body).
    Ls {
        at: ContextPath<TermStep>,
        binder: Name,
        var: ContextPath<TermStep>,
    },
}

impl CbnRedex {
    pub fn label(&self) -> Label {
        match self {
            CbnRedex::Db { .. } => Label::Db,
            CbnRedex::Ls { .. } => Label::Ls,
        }
    }
}

/// Why a term has no redex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CbnNormal {
    /// `S<\x. t>`, not applied.
    Abstraction,
    /// The head variable is not bound by any substitution on the spine.
    FreeHead { var: Name },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CbnStep {
    pub label: Label,
    pub term: Term,
    /// For an ls step, the copy that replaced the head variable.
    pub copied: Option<Term>,
    /// Binders renamed by the step, as `(new, old)`.
    pub renamed: Renames,
}

enum Frame<'a> {
    Fun,
    Body(&'a Name),
}

/// The unique redex of `t`, found by walking the head spine.
pub fn decompose_cbn(t: &Term) -> Option<CbnRedex> {
    decompose_or_normal(t).ok()
}

pub fn classify_normal(t: &Term) -> Option<CbnNormal> {
    decompose_or_normal(t).err()
}

fn decompose_or_normal(t: &Term) -> Result<CbnRedex, CbnNormal> {
    let mut frames: Vec<Frame<'_>> = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::App(f, _) => {
                frames.push(Frame::Fun);
                cur = f;
            }
            Term::Sub(b, x, _) => {
                frames.push(Frame::Body(x));
                cur = b;
            }
            Term::Lam(..) => {
                let subs = frames.iter().rev().take_while(|f| matches!(f, Frame::Body(_))).count();
                let k = frames.len() - subs;
                if k == 0 {
                    return Err(CbnNormal::Abstraction);
                }
                return Ok(CbnRedex::Db {
                    at: path_of(&frames[..k - 1]),
                    subs,
                });
            }
            Term::Var(x) => {
                let i = frames
                    .iter()
                    .rposition(|f| matches!(f, Frame::Body(y) if *y == x))
                    .ok_or_else(|| CbnNormal::FreeHead { var: x.clone() })?;
                return Ok(CbnRedex::Ls {
                    at: path_of(&frames[..i]),
                    binder: x.clone(),
                    var: path_of(&frames[i + 1..]),
                });
            }
        }
    }
}

fn path_of(frames: &[Frame<'_>]) -> ContextPath<TermStep> {
    let mut p = ContextPath::root();
    for f in frames {
        match f {
            Frame::Fun => p.push(TermStep::AppFun, None),
            Frame::Body(x) => p.push(TermStep::SubBody, Some(x)),
        }
    }
    p
}

/// Every redex of `t`, found by trying each evaluation position
/// independently of [`decompose_cbn`].
pub fn cbn_redexes_exhaustive(t: &Term) -> Vec<CbnRedex> {
    let mut out = Vec::new();
    for (at, sub) in eval_positions(t) {
        match sub {
            Term::App(f, _) => {
                let mut subs = 0;
                let mut g: &Term = f;
                while let Term::Sub(b, _, _) = g {
                    subs += 1;
                    g = b;
                }
                if matches!(g, Term::Lam(..)) {
                    out.push(CbnRedex::Db { at: at.clone(), subs });
                }
            }
            Term::Sub(b, x, _) => {
                for (var, occ) in eval_positions(b) {
                    if matches!(occ, Term::Var(y) if y == x) && !var.captured.contains(x) {
                        out.push(CbnRedex::Ls {
                            at: at.clone(),
                            binder: x.clone(),
                            var,
                        });
                    }
                }
            }
            _ => {}
        }
    }
    out
}

fn eval_positions(t: &Term) -> Vec<(ContextPath<TermStep>, &Term)> {
    let mut out = Vec::new();
    let mut stack = vec![(ContextPath::root(), t)];
    while let Some((p, cur)) = stack.pop() {
        match cur {
            Term::App(f, _) => stack.push((p.child(TermStep::AppFun, None), f)),
            Term::Sub(b, x, _) => stack.push((p.child(TermStep::SubBody, Some(x)), b)),
            _ => {}
        }
        out.push((p, cur));
    }
    out
}

pub fn cbn_redex_count(t: &Term) -> usize {
    cbn_redexes_exhaustive(t).len()
}

/// One step of linear weak head reduction.
pub fn cbn_step(t: &Term, fresh: &mut Fresh) -> Option<CbnStep> {
    let r = decompose_cbn(t)?;
    fresh.reserve_term(t);
    Some(apply_cbn(t, &r, fresh))
}

fn apply_cbn(t: &Term, r: &CbnRedex, fresh: &mut Fresh) -> CbnStep {
    let mut renamed = Renames::new();
    match r {
        CbnRedex::Db { at, .. } => {
            let term = t
                .replace_at(&at.steps, |app| match app {
                    Term::App(f, s) => db_contract(f, s, &s.free_vars(), fresh, &mut renamed),
                    _ => unreachable!("db redex points at an application"),
                })
                .expect("redex path is valid");
            CbnStep {
                label: Label::Db,
                term,
                copied: None,
                renamed,
            }
        }
        CbnRedex::Ls { at, var, .. } => {
            let mut copied = None;
            let term = t
                .replace_at(&at.steps, |sub| match sub {
                    Term::Sub(b, x, s) => {
                        let fvs = s.free_vars();
                        // the copy lands under [x/s] itself
                        let (x, b) = if fvs.contains(x) {
                            let nx = log_fresh(x, fresh, &mut renamed);
                            (nx.clone(), Box::new(b.rename_free(x, &nx)))
                        } else {
                            (x.clone(), b.clone())
                        };
                        let body = rename_path_binders(&b, &var.steps, &fvs, fresh, &mut renamed);
                        let copy = s.freshen_bound(fresh, &mut renamed);
                        copied = Some(copy.clone());
                        let body = body.replace_at(&var.steps, |_| copy).expect("redex path is valid");
                        Term::Sub(Box::new(body), x, s.clone())
                    }
                    _ => unreachable!("ls redex points at a substitution"),
                })
                .expect("redex path is valid");
            CbnStep {
                label: Label::Ls,
                term,
                copied,
                renamed,
            }
        }
    }
}

/// `S<\x. b> s -> S<b[x/s]>`, renaming binders of `S` that would capture
/// `s`.
fn db_contract(f: &Term, s: &Term, fvs: &BTreeSet<Name>, fresh: &mut Fresh, log: &mut Renames) -> Term {
    match f {
        Term::Lam(x, b) => Term::Sub(b.clone(), x.clone(), Box::new(s.clone())),
        Term::Sub(b, y, a) => {
            if fvs.contains(y) {
                let ny = log_fresh(y, fresh, log);
                let nb = b.rename_free(y, &ny);
                Term::Sub(Box::new(db_contract(&nb, s, fvs, fresh, log)), ny, a.clone())
            } else {
                Term::Sub(Box::new(db_contract(b, s, fvs, fresh, log)), y.clone(), a.clone())
            }
        }
        _ => unreachable!("db redex function is S<lambda>"),
    }
}

/// Rename the substitution binders crossed by an evaluation path that lie
/// in `avoid`.
fn rename_path_binders(
    t: &Term,
    steps: &[TermStep],
    avoid: &BTreeSet<Name>,
    fresh: &mut Fresh,
    log: &mut Renames,
) -> Term {
    let Some((first, rest)) = steps.split_first() else {
        return t.clone();
    };
    match (first, t) {
        (TermStep::AppFun, Term::App(f, a)) => {
            Term::App(Box::new(rename_path_binders(f, rest, avoid, fresh, log)), a.clone())
        }
        (TermStep::SubBody, Term::Sub(b, y, a)) => {
            if avoid.contains(y) {
                let ny = log_fresh(y, fresh, log);
                let nb = b.rename_free(y, &ny);
                Term::Sub(
                    Box::new(rename_path_binders(&nb, rest, avoid, fresh, log)),
                    ny,
                    a.clone(),
                )
            } else {
                Term::Sub(
                    Box::new(rename_path_binders(b, rest, avoid, fresh, log)),
                    y.clone(),
                    a.clone(),
                )
            }
        }
        _ => t.clone(),
    }
}

pub fn cbn_trace(t: &Term, fuel: usize) -> Trace<Term> {
    let mut fresh = Fresh::for_term(t);
    let mut steps = Vec::new();
    let mut cur = t.clone();
    let mut normal = false;
    for _ in 0..=fuel {
        match decompose_cbn(&cur) {
            None => {
                normal = true;
                break;
            }
            Some(_) if steps.len() == fuel => break,
            Some(r) => {
                let s = apply_cbn(&cur, &r, &mut fresh);
                cur = s.term.clone();
                steps.push(TraceStep {
                    label: s.label,
                    state: s.term,
                });
            }
        }
    }
    Trace {
        start: t.clone(),
        steps,
        normal,
    }
}

/// Weak head β-step on a pure term.
pub fn whr_oracle_step(p: &PureTerm) -> Option<PureTerm> {
    let mut args = Vec::new();
    let mut head = p.term();
    while let Term::App(f, a) = head {
        args.push(&**a);
        head = f;
    }
    let Term::Lam(x, body) = head else {
        return None;
    };
    let first = args.pop()?;
    let mut fresh = Fresh::for_term(p.term());
    let mut r = body.meta_subst(x, first, &mut fresh);
    while let Some(a) = args.pop() {
        r = Term::App(Box::new(r), Box::new(a.clone()));
    }
    PureTerm::new(r)
}

/// Number of weak head β-steps to normal form, or `None` past `fuel`.
pub fn whr_steps(p: &PureTerm, fuel: usize) -> Option<usize> {
    let mut cur = p.clone();
    for n in 0..=fuel {
        match whr_oracle_step(&cur) {
            None => return Some(n),
            Some(next) => cur = next,
        }
    }
    None
}

/// Along the trace of `t`, every copied subterm is α-equal to a subterm of
/// `t`. The run starts from a binder-distinct variant of `t`; names
/// introduced by renaming are traced back to the binder they replace, so
/// open subterms compare with their free names as they are.
pub fn check_subterm_property(t: &Term, fuel: usize) -> bool {
    let mut fresh = Fresh::for_term(t);
    let start = t.distinct_binders(&mut fresh);
    let keys: HashSet<String> = start.subterms().iter().map(|s| s.alpha_key()).collect();
    let mut origins = Origins::default();
    let mut cur = start;
    for _ in 0..fuel {
        let Some(step) = cbn_step(&cur, &mut fresh) else {
            break;
        };
        origins.record(&step.renamed);
        if let Some(c) = &step.copied {
            if !keys.contains(&c.map_names(&|n| origins.resolve(n)).alpha_key()) {
                return false;
            }
        }
        cur = step.term;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn step(s: &str) -> (Label, Term) {
        let s = cbn_step(&t(s), &mut Fresh::new()).unwrap();
        (s.label, s.term)
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose_cbn(&t("(\\x. x) y")),
            Some(CbnRedex::Db {
                at: ContextPath::root(),
                subs: 0
            })
        );
        assert_eq!(
            decompose_cbn(&t("x[x/y]")),
            Some(CbnRedex::Ls {
                at: ContextPath::root(),
                binder: Name::var("x"),
                var: ContextPath::root()
            })
        );
        assert_eq!(decompose_cbn(&t("\\x. x")), None);
        assert_eq!(classify_normal(&t("\\x. x")), Some(CbnNormal::Abstraction));
        assert_eq!(
            classify_normal(&t("x y[y/z]")),
            Some(CbnNormal::FreeHead { var: Name::var("x") })
        );
    }

    #[test]
    fn step_examples() {
        let (l, r) = step("(\\x. x) y");
        assert_eq!((l, r.clone()), (Label::Db, t("x[x/y]")));
        let s = cbn_step(&r, &mut Fresh::new()).unwrap();
        assert_eq!((s.label, s.term), (Label::Ls, t("y[x/y]")));
        assert_eq!(step("((\\x. x)[z/w]) y"), (Label::Db, t("x[x/y][z/w]")));
        let (l, r) = step("(\\x. x x) (\\x. x x)");
        assert_eq!(l, Label::Db);
        assert!(r.alpha_eq(&t("(x x)[x/\\x. x x]")));
    }

    #[test]
    fn db_renames_capturing_substitution() {
        // the argument mentions z, which the substitution context binds
        let (l, r) = step("((\\x. x)[z/w]) z");
        assert_eq!(l, Label::Db);
        assert!(r.alpha_eq(&t("x[x/z][q/w]")));
        assert_eq!(r.free_vars(), [Name::var("w"), Name::var("z")].into());
    }

    #[test]
    fn ls_renames_capturing_context() {
        // copying y under [y/w] must not capture the outer y
        let s = cbn_step(&t("(x[y/w])[x/y]"), &mut Fresh::new()).unwrap();
        assert_eq!(s.label, Label::Ls);
        assert_eq!(s.term.unfold().into_term(), t("y"));
    }

    #[test]
    fn trace_examples() {
        let tr = cbn_trace(&t("(\\x. x) y"), 10);
        assert_eq!(tr.labels(), vec![Label::Db, Label::Ls]);
        assert_eq!(*tr.last(), t("y[x/y]"));
        assert!(tr.normal);
        assert!(cbn_trace(&t("\\x. x"), 10).is_empty());
        let omega = cbn_trace(&t("(\\x. x x) (\\x. x x)"), 3);
        assert_eq!(omega.len(), 3);
        assert!(!omega.normal);
    }

    #[test]
    fn redex_count_examples() {
        assert_eq!(cbn_redex_count(&t("(\\x. x) y")), 1);
        assert_eq!(cbn_redex_count(&t("x")), 0);
        assert_eq!(cbn_redex_count(&t("x[x/y][z/w]")), 1);
    }

    #[test]
    fn whr_examples() {
        let p = |s: &str| PureTerm::new(t(s)).unwrap();
        assert_eq!(whr_oracle_step(&p("(\\x. x) y")), Some(p("y")));
        assert_eq!(whr_oracle_step(&p("\\x. (\\y. y) z")), None);
        let om = p("(\\x. x x) (\\x. x x)");
        assert!(whr_oracle_step(&om).unwrap().alpha_eq(&om));
    }

    #[test]
    fn subterm_examples() {
        assert!(check_subterm_property(&t("(\\x. x) (\\y. y)"), 100));
        assert!(check_subterm_property(&t("(\\x. x x) (\\x. x x)"), 20));
    }

    #[test]
    fn ls_renames_a_binder_free_in_its_argument() {
        let tr = cbn_trace(&parse_term("x[x/x]").unwrap(), 5);
        assert!(tr.normal && tr.len() == 1);
        assert!(tr.last().alpha_eq(&parse_term("x[y/x]").unwrap()));
    }
}

//! Batch property runs with JSON reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::bisim::{bisim_game_cbn, bisim_game_cbv, BisimReport, GameOptions};
use crate::cbn::{cbn_redex_count, cbn_step, check_subterm_property, decompose_cbn};
use crate::cbv::{check_v_subterm, find_diamond_failure};
use crate::congruence::congruent;
use crate::encode::{
    cbn_param, check_discipline, check_free_names_cbn, check_free_names_cbv, encode_cbn, encode_cbv_auto,
};
use crate::experiment::{corpus, quadratic_experiment, to_csv};
use crate::gen::{enumerate_terms, mutate_process, random_process, TermMode};
use crate::name::Fresh;
use crate::oracle::{congruence_oracle, distance_keys, harmony_check, random_rewrites, ClassicOptions};
use crate::par::Exec;
use crate::process::Process;
use crate::reduction::PiOptions;
use crate::term::{Term, VTerm, Value};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Determinism,
    Diamond,
    Subterm,
    VSubterm,
    FreeNames,
    Harmony,
    CongrOracle,
    CongrBisim,
    BisimCbn,
    BisimCbv,
    Quadratic,
}

impl SuiteName {
    pub const ALL: [SuiteName; 11] = [
        SuiteName::Determinism,
        SuiteName::Diamond,
        SuiteName::Subterm,
        SuiteName::VSubterm,
        SuiteName::FreeNames,
        SuiteName::Harmony,
        SuiteName::CongrOracle,
        SuiteName::CongrBisim,
        SuiteName::BisimCbn,
        SuiteName::BisimCbv,
        SuiteName::Quadratic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Determinism => "determinism",
            SuiteName::Diamond => "diamond",
            SuiteName::Subterm => "subterm",
            SuiteName::VSubterm => "v-subterm",
            SuiteName::FreeNames => "free-names",
            SuiteName::Harmony => "harmony",
            SuiteName::CongrOracle => "congr-oracle",
            SuiteName::CongrBisim => "congr-bisim",
            SuiteName::BisimCbn => "bisim-cbn",
            SuiteName::BisimCbv => "bisim-cbv",
            SuiteName::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for SuiteName {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> Result<SuiteName, UnknownSuite> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Largest enumerated term.
    pub size: usize,
    pub fuel: usize,
    pub seed: u64,
    /// Number of random inputs.
    pub samples: usize,
    /// Largest random process.
    pub proc_size: usize,
    /// Rewriting depth of the congruence oracles.
    pub depth: usize,
    /// Class members the classic oracle explores by rewriting.
    pub budget: usize,
    /// Largest open term, where a suite also enumerates open terms.
    pub open_size: usize,
}

impl Bounds {
    /// The bounds each suite is accepted at.
    pub fn for_suite(name: SuiteName) -> Bounds {
        let base = Bounds {
            size: 8,
            fuel: 50,
            seed: 0,
            samples: 0,
            proc_size: 12,
            depth: 4,
            budget: 200,
            open_size: 0,
        };
        match name {
            SuiteName::Determinism => Bounds {
                size: 9,
                fuel: 10,
                ..base
            },
            SuiteName::Diamond => Bounds { fuel: 20, ..base },
            SuiteName::FreeNames => Bounds { open_size: 6, ..base },
            SuiteName::Harmony => Bounds {
                samples: 10_000,
                ..base
            },
            SuiteName::CongrOracle => Bounds {
                samples: 10_000,
                proc_size: 10,
                ..base
            },
            SuiteName::CongrBisim => Bounds {
                samples: 10_000,
                ..base
            },
            SuiteName::Quadratic => Bounds {
                fuel: 100_000,
                samples: 12,
                ..base
            },
            _ => base,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub shrunk: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: SuiteName,
    pub bounds: Bounds,
    pub checked: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    pub stats: BTreeMap<String, Json>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Follow failing children until none fails.
fn shrink<T: Clone>(x: &T, children: impl Fn(&T) -> Vec<T>, fails: impl Fn(&T) -> bool) -> T {
    let mut cur = x.clone();
    'outer: loop {
        for c in children(&cur) {
            if fails(&c) {
                cur = c;
                continue 'outer;
            }
        }
        return cur;
    }
}

fn term_children(t: &Term) -> Vec<Term> {
    match t {
        Term::Var(_) => vec![],
        Term::Lam(_, b) => vec![(**b).clone()],
        Term::App(f, s) => vec![(**f).clone(), (**s).clone()],
        Term::Sub(b, _, s) => vec![(**b).clone(), (**s).clone()],
    }
}

fn vterm_children(t: &VTerm) -> Vec<VTerm> {
    match t {
        VTerm::Val(Value::Var(_)) => vec![],
        VTerm::Val(Value::Lam(_, b)) => vec![(**b).clone()],
        VTerm::App(v, s) => vec![VTerm::Val(v.clone()), (**s).clone()],
        VTerm::Sub(b, _, s) => vec![(**b).clone(), (**s).clone()],
    }
}

fn process_children(p: &Process) -> Vec<Process> {
    match p {
        Process::Nil | Process::OutU(..) | Process::OutB(..) => vec![],
        Process::Nu(_, q) | Process::InB(_, _, _, q) | Process::RepIn(_, _, q) => vec![(**q).clone()],
        Process::Par(l, r) => vec![(**l).clone(), (**r).clone()],
    }
}

/// Check every input; the first failure in input order is shrunk.
fn check_all<T, F>(
    inputs: &[T],
    exec: Exec,
    check: F,
    children: impl Fn(&T) -> Vec<T>,
    show: impl Fn(&T) -> String,
) -> Option<Counterexample>
where
    T: Clone + Sync,
    F: Fn(&T) -> Result<(), String> + Sync + Send,
{
    let results = exec.map(inputs, |x| check(x));
    let i = results.iter().position(Result::is_err)?;
    let detail = results[i].clone().unwrap_err();
    let shrunk = shrink(&inputs[i], children, |x| check(x).is_err());
    Some(Counterexample {
        input: show(&inputs[i]),
        shrunk: show(&shrunk),
        detail,
    })
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_terms(max: usize, mode: TermMode) -> Vec<Term> {
    (1..=max).flat_map(|n| enumerate_terms(n, mode, true)).collect()
}

fn closed_vterms(max: usize) -> Vec<VTerm> {
    closed_terms(max, TermMode::Vker)
        .iter()
        .map(|t| VTerm::from_term(t).expect("vker shape"))
        .collect()
}

/// Independent random stream for input `i`.
fn rng_for(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

fn random_size(rng: &mut ChaCha8Rng, max: usize) -> usize {
    rng.gen_range(1..=max.max(1))
}

struct Outcome {
    checked: usize,
    counterexample: Option<Counterexample>,
    stats: BTreeMap<String, Json>,
}

fn determinism(b: &Bounds, exec: Exec) -> Outcome {
    let inputs = closed_terms(b.size, TermMode::Lsub);
    let fuel = b.fuel;
    let check = move |t: &Term| {
        let mut fresh = Fresh::for_term(t);
        let mut cur = t.clone();
        for _ in 0..=fuel {
            let n = cbn_redex_count(&cur);
            require(n <= 1 && (n == 1) == decompose_cbn(&cur).is_some(), || {
                format!("{n} redexes in {cur}")
            })?;
            match cbn_step(&cur, &mut fresh) {
                Some(s) => cur = s.term,
                None => break,
            }
        }
        Ok(())
    };
    let cx = check_all(&inputs, exec, check, term_children, Term::to_string);
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: BTreeMap::new(),
    }
}

fn diamond(b: &Bounds, exec: Exec) -> Outcome {
    let inputs = closed_vterms(b.size);
    let fuel = b.fuel;
    let check = move |t: &VTerm| match find_diamond_failure(t, fuel) {
        None => Ok(()),
        Some((s, l, r)) => Err(format!("{s} forks to {l} and {r} with no common reduct")),
    };
    let cx = check_all(&inputs, exec, check, vterm_children, VTerm::to_string);
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: BTreeMap::new(),
    }
}

fn subterm(b: &Bounds, exec: Exec) -> Outcome {
    let inputs = closed_terms(b.size, TermMode::Lsub);
    let fuel = b.fuel;
    let check = move |t: &Term| require(check_subterm_property(t, fuel), || "a copy is not a subterm".into());
    let cx = check_all(&inputs, exec, check, term_children, Term::to_string);
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: BTreeMap::new(),
    }
}

fn v_subterm(b: &Bounds, exec: Exec) -> Outcome {
    let inputs = closed_vterms(b.size);
    let fuel = b.fuel;
    let check = move |t: &VTerm| require(check_v_subterm(t, fuel), || "a value is not a value subterm".into());
    let cx = check_all(&inputs, exec, check, vterm_children, VTerm::to_string);
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: BTreeMap::new(),
    }
}

fn free_names(b: &Bounds, exec: Exec) -> Outcome {
    let mut lsub = closed_terms(b.size, TermMode::Lsub);
    let mut vker = closed_vterms(b.size);
    for n in 1..=b.open_size {
        lsub.extend(
            enumerate_terms(n, TermMode::Lsub, false)
                .into_iter()
                .filter(|t| !t.is_closed()),
        );
        vker.extend(
            enumerate_terms(n, TermMode::Vker, false)
                .iter()
                .filter(|t| !t.is_closed())
                .map(|t| VTerm::from_term(t).expect("vker shape")),
        );
    }
    let cbn = |t: &Term| {
        require(check_free_names_cbn(t), || "free names of the encoding".into())?;
        let p = encode_cbn(t, &cbn_param(), &mut Fresh::new()).expect("special parameter");
        require(check_discipline(&p), || format!("name discipline broken in {p}"))
    };
    let cbv = |t: &VTerm| {
        require(check_free_names_cbv(t), || "free names of the encoding".into())?;
        let (_, p) = encode_cbv_auto(t, &mut Fresh::new());
        require(check_discipline(&p), || format!("name discipline broken in {p}"))
    };
    let cx = check_all(&lsub, exec, cbn, term_children, Term::to_string)
        .or_else(|| check_all(&vker, exec, cbv, vterm_children, VTerm::to_string));
    Outcome {
        checked: lsub.len() + vker.len(),
        counterexample: cx,
        stats: BTreeMap::from([
            ("lsub".to_string(), json!(lsub.len())),
            ("vker".to_string(), json!(vker.len())),
        ]),
    }
}

fn game_stats(reports: &[BisimReport]) -> BTreeMap<String, Json> {
    let states: usize = reports.iter().map(|r| r.states).sum();
    let normal = reports.iter().filter(|r| r.normal).count();
    let exhausted = reports.iter().filter(|r| r.exhausted).count();
    let rounds = reports.iter().map(|r| r.rounds).max().unwrap_or(0);
    BTreeMap::from([
        ("states".to_string(), json!(states)),
        ("normal".to_string(), json!(normal)),
        ("exhausted".to_string(), json!(exhausted)),
        ("max_rounds".to_string(), json!(rounds)),
    ])
}

fn game_failure(r: &BisimReport) -> Result<(), String> {
    if let Some(m) = &r.mismatch {
        return Err(serde_json::to_string(m).expect("mismatch serializes"));
    }
    let mut simulated = BTreeMap::new();
    for (l, n) in &r.term_counts {
        *simulated.entry(l.pi_kind()).or_insert(0) += n;
    }
    require(simulated == r.process_counts, || {
        format!("step counts differ: {:?} vs {:?}", r.term_counts, r.process_counts)
    })
}

fn bisim_cbn(b: &Bounds, exec: Exec) -> Outcome {
    let inputs = closed_terms(b.size, TermMode::Lsub);
    let opts = GameOptions::new(b.fuel);
    let reports = exec.map(&inputs, |t| bisim_game_cbn(t, opts));
    let cx = reports.iter().position(|r| !r.passed()).map(|i| {
        let fails = |t: &Term| game_failure(&bisim_game_cbn(t, opts)).is_err();
        Counterexample {
            input: inputs[i].to_string(),
            shrunk: shrink(&inputs[i], term_children, fails).to_string(),
            detail: game_failure(&reports[i]).unwrap_err(),
        }
    });
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: game_stats(&reports),
    }
}

fn bisim_cbv(b: &Bounds, exec: Exec) -> Outcome {
    let inputs = closed_vterms(b.size);
    let opts = GameOptions::new(b.fuel);
    let reports = exec.map(&inputs, |t| bisim_game_cbv(t, opts));
    let cx = reports.iter().position(|r| !r.passed()).map(|i| {
        let fails = |t: &VTerm| game_failure(&bisim_game_cbv(t, opts)).is_err();
        Counterexample {
            input: inputs[i].to_string(),
            shrunk: shrink(&inputs[i], vterm_children, fails).to_string(),
            detail: game_failure(&reports[i]).unwrap_err(),
        }
    });
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: game_stats(&reports),
    }
}

/// Every process met in the simulation games, up to α, in a fixed order.
pub fn game_processes(size: usize, fuel: usize, exec: Exec) -> Vec<Process> {
    let opts = GameOptions {
        collect: true,
        ..GameOptions::new(fuel)
    };
    let cbn = exec.map(&closed_terms(size, TermMode::Lsub), |t| bisim_game_cbn(t, opts).visited);
    let cbv = exec.map(&closed_vterms(size), |t| bisim_game_cbv(t, opts).visited);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in cbn.into_iter().chain(cbv).flatten() {
        if seen.insert(p.alpha_key()) {
            out.push(p);
        }
    }
    out
}

fn random_processes(b: &Bounds) -> Vec<Process> {
    (0..b.samples)
        .map(|i| {
            let mut rng = rng_for(b.seed, i);
            let n = random_size(&mut rng, b.proc_size);
            random_process(n, &mut rng)
        })
        .collect()
}

fn harmony(b: &Bounds, exec: Exec) -> Outcome {
    let mut inputs = game_processes(b.size, b.fuel, exec);
    let from_games = inputs.len();
    inputs.extend(random_processes(b));
    let opts = ClassicOptions {
        depth: b.depth,
        budget: b.budget,
    };
    let check = |p: &Process| {
        let r = harmony_check(p, &opts, PiOptions::default());
        require(r.equal, || serde_json::to_string(&r).expect("report serializes"))
    };
    let cx = check_all(&inputs, exec, check, process_children, Process::to_string);
    let with_steps = exec.map(&inputs, |p| !distance_keys(p, PiOptions::default()).is_empty());
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: BTreeMap::from([
            ("from_games".to_string(), json!(from_games)),
            ("random".to_string(), json!(inputs.len() - from_games)),
            (
                "with_steps".to_string(),
                json!(with_steps.iter().filter(|b| **b).count()),
            ),
        ]),
    }
}

/// Pairs `(p, q, near)`: `q` is `p` after up to four random rewrites, and
/// for odd `i` `p` was mutated first, so that `near` pairs are usually not
/// congruent.
fn congruence_pairs(b: &Bounds) -> Vec<(Process, Process, bool)> {
    (0..b.samples)
        .map(|i| {
            let mut rng = rng_for(b.seed, i);
            let n = random_size(&mut rng, b.proc_size);
            let p = random_process(n, &mut rng);
            let near = i % 2 == 1;
            let start = if near { mutate_process(&p, &mut rng) } else { p.clone() };
            let k = rng.gen_range(1..=4);
            let q = random_rewrites(&start, k, &mut rng);
            (p, q, near)
        })
        .collect()
}

fn show_pair(x: &(Process, Process, bool)) -> String {
    format!("{}  ~  {}", x.0, x.1)
}

fn congr_oracle(b: &Bounds, exec: Exec) -> Outcome {
    let inputs = congruence_pairs(b);
    let depth = b.depth;
    let verdicts = exec.map(&inputs, |(p, q, near)| {
        let c = congruent(p, q);
        let o = congruence_oracle(p, q, depth);
        (c, o, *near)
    });
    let check = |x: &(Process, Process, bool)| {
        let c = congruent(&x.0, &x.1);
        let o = congruence_oracle(&x.0, &x.1, depth);
        // a pair built by rewriting alone is within the oracle's reach
        require(c == o || (x.2 && c && !o), || {
            format!("engine says {c}, oracle says {o}")
        })
    };
    let i = verdicts
        .iter()
        .position(|(c, o, near)| !(c == o || (*near && *c && !*o)));
    let cx = i.map(|i| Counterexample {
        input: show_pair(&inputs[i]),
        shrunk: show_pair(&inputs[i]),
        detail: check(&inputs[i]).unwrap_err(),
    });
    let count = |f: &dyn Fn(&(bool, bool, bool)) -> bool| verdicts.iter().filter(|v| f(v)).count();
    let beyond: Vec<&(Process, Process, bool)> = inputs
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| v.0 && !v.1)
        .map(|(x, _)| x)
        .collect();
    let deeper = exec.map(&beyond, |x| congruence_oracle(&x.0, &x.1, depth + 2));
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: BTreeMap::from([
            ("congruent".to_string(), json!(count(&|v| v.0))),
            ("not_congruent".to_string(), json!(count(&|v| !v.0))),
            ("beyond_oracle_depth".to_string(), json!(count(&|v| v.0 && !v.1))),
            (
                "found_two_deeper".to_string(),
                json!(deeper.iter().filter(|d| **d).count()),
            ),
        ]),
    }
}

fn congr_bisim(b: &Bounds, exec: Exec) -> Outcome {
    let mut inputs: Vec<(Process, Process, bool)> = congruence_pairs(&Bounds {
        samples: 2 * b.samples,
        ..b.clone()
    })
    .into_iter()
    .filter(|x| !x.2)
    .collect();
    let random = inputs.len();
    let games = game_processes(b.size, b.fuel, exec);
    inputs.extend(games.into_iter().enumerate().map(|(i, p)| {
        let mut rng = rng_for(b.seed ^ 0x9a3e, i);
        let k = rng.gen_range(1..=4);
        let q = random_rewrites(&p, k, &mut rng);
        (p, q, false)
    }));
    let check = |x: &(Process, Process, bool)| {
        let l = distance_keys(&x.0, PiOptions::default());
        let r = distance_keys(&x.1, PiOptions::default());
        require(l == r, || format!("{l:?} vs {r:?}"))
    };
    let with_steps = exec.map(&inputs, |x| !distance_keys(&x.0, PiOptions::default()).is_empty());
    let cx = check_all(&inputs, exec, check, |_| vec![], show_pair);
    Outcome {
        checked: inputs.len(),
        counterexample: cx,
        stats: BTreeMap::from([
            ("random".to_string(), json!(random)),
            ("from_games".to_string(), json!(inputs.len() - random)),
            (
                "with_steps".to_string(),
                json!(with_steps.iter().filter(|b| **b).count()),
            ),
        ]),
    }
}

fn quadratic(b: &Bounds, _: Exec) -> Outcome {
    let report = quadratic_experiment(&corpus(), b.fuel, b.samples);
    let cx = if report.passed() {
        None
    } else {
        let bad = report.rows.iter().find(|r| !r.bounds_hold());
        Some(Counterexample {
            input: bad.map_or("looping prefix table".into(), |r| r.term.clone()),
            shrunk: bad.map_or("looping prefix table".into(), |r| r.term.clone()),
            detail: bad.map_or_else(|| format!("{:?}", report.prefixes), |r| format!("{r:?}")),
        })
    };
    Outcome {
        checked: report.rows.len(),
        counterexample: cx,
        stats: BTreeMap::from([
            ("csv".to_string(), json!(to_csv(&report.rows))),
            ("prefixes".to_string(), json!(report.prefixes)),
            (
                "terminated".to_string(),
                json!(report.rows.iter().filter(|r| r.terminated).count()),
            ),
        ]),
    }
}

pub fn run_suite(name: SuiteName, bounds: &Bounds, exec: Exec) -> SuiteReport {
    let run = match name {
        SuiteName::Determinism => determinism,
        SuiteName::Diamond => diamond,
        SuiteName::Subterm => subterm,
        SuiteName::VSubterm => v_subterm,
        SuiteName::FreeNames => free_names,
        SuiteName::Harmony => harmony,
        SuiteName::CongrOracle => congr_oracle,
        SuiteName::CongrBisim => congr_bisim,
        SuiteName::BisimCbn => bisim_cbn,
        SuiteName::BisimCbv => bisim_cbv,
        SuiteName::Quadratic => quadratic,
    };
    let out = run(bounds, exec);
    SuiteReport {
        schema: SCHEMA,
        suite: name,
        bounds: bounds.clone(),
        checked: out.checked,
        passed: out.counterexample.is_none(),
        counterexample: out.counterexample,
        stats: out.stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn small(name: SuiteName) -> Bounds {
        Bounds {
            size: 5,
            fuel: 10,
            samples: 30,
            proc_size: 6,
            open_size: 3,
            budget: 50,
            ..Bounds::for_suite(name)
        }
    }

    #[test]
    fn names_round_trip() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>(), Ok(n));
        }
        assert!("nope".parse::<SuiteName>().is_err());
    }

    #[test]
    fn every_suite_passes_at_small_bounds() {
        for n in SuiteName::ALL {
            let r = run_suite(n, &small(n), Exec::Sequential);
            assert!(r.passed, "{}", r.to_json());
            assert!(r.checked > 0, "{n}");
        }
    }

    #[test]
    fn reports_are_stable() {
        let b = small(SuiteName::CongrOracle);
        let x = run_suite(SuiteName::CongrOracle, &b, Exec::Sequential).to_json();
        assert_eq!(x, run_suite(SuiteName::CongrOracle, &b, Exec::Parallel).to_json());
        assert!(x.contains("\"schema\": 1"));
    }

    #[test]
    fn shrinking_keeps_the_failure() {
        fn has_app(t: &Term) -> bool {
            matches!(t, Term::App(..)) || term_children(t).iter().any(has_app)
        }
        let t = parse_term("\\x. (\\y. y y) x").unwrap();
        let s = shrink(&t, term_children, has_app);
        assert!(matches!(s, Term::App(..)));
        assert_eq!(s.size(), 3);
    }
}

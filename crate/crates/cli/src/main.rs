use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lsubpi::bisim::{bisim_game_cbn, bisim_game_cbv, GameOptions};
use lsubpi::cbn::{cbn_trace, classify_normal};
use lsubpi::cbv::{cbv_graph, cbv_trace, Policy};
use lsubpi::congruence::{canonicalize, congruent};
use lsubpi::encode::{encode_cbn, encode_cbv, encode_cbv_auto};
use lsubpi::experiment::{corpus, quadratic_experiment, to_csv};
use lsubpi::gen::{enumerate_terms, TermMode};
use lsubpi::name::{Fresh, Name};
use lsubpi::oracle::{harmony_check, ClassicOptions};
use lsubpi::par::Exec;
use lsubpi::parse::{parse_process, parse_term, parse_vterm};
use lsubpi::reduction::{pi_successors, PiOptions};
use lsubpi::suite::{run_suite, Bounds, SuiteName};
use lsubpi::trace::Label;

#[derive(Parser)]
#[command(
    name = "lsubpi",
    version,
    about = "Workbench for the linear substitution calculus and its encodings into processes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cbn,
    Cbv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CalcArg {
    Lsub,
    Vker,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Tensor,
    Bang,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Leftmost,
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// Linear weak head reduction of a term.
    TraceCbn {
        term: String,
        #[arg(long, default_value_t = 100)]
        fuel: usize,
    },
    /// Value substitution kernel reduction of a term.
    TraceCbv {
        term: String,
        #[arg(long, default_value_t = 100)]
        fuel: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::Leftmost)]
        policy: PolicyArg,
    },
    /// Call-by-name encoding on a special name.
    EncodeCbn {
        term: String,
        #[arg(long, default_value = "a")]
        param: String,
    },
    /// Call-by-value encoding on a variable, fresh by default.
    EncodeCbv {
        term: String,
        #[arg(long)]
        param: Option<String>,
    },
    /// Distance successors of a process, in canonical form.
    PiStep {
        process: String,
        /// Print every successor rather than the first.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Only admit redexes with the output on the left.
        #[arg(long)]
        strict: bool,
    },
    /// Decide structural congruence of two processes.
    Congr { left: String, right: String },
    /// Compare distance successors with the classic rules modulo congruence.
    Harmony {
        process: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 400)]
        budget: usize,
        #[arg(long)]
        strict: bool,
    },
    /// Play the simulation game between a term and its encoding.
    Bisim {
        term: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Cbn)]
        mode: ModeArg,
        #[arg(long, default_value_t = 50)]
        fuel: usize,
        #[arg(long)]
        strict: bool,
    },
    /// List every term of a given size.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = CalcArg::Lsub)]
        mode: CalcArg,
        /// Include open terms over the free names `p` and `q`.
        #[arg(long)]
        open: bool,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Run a property suite.
    Suite {
        name: String,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        fuel: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        proc_size: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        sequential: bool,
    },
    /// Step counts of linear against plain weak head reduction.
    Quadratic {
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
        #[arg(long, default_value_t = 12)]
        prefixes: usize,
    },
}

/// Output text and whether the check passed, or a usage error.
type Outcome = Result<(String, bool), String>;

fn usage<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json serializes")
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.json || cli.format == Format::Json;
    match &cli.cmd {
        Cmd::TraceCbn { term, fuel } => {
            let t = parse_term(term).map_err(usage)?;
            let tr = cbn_trace(&t, *fuel);
            let normal = classify_normal(tr.last());
            if json {
                Ok((pretty(json!({ "trace": tr, "normal_form": normal })), true))
            } else {
                Ok((tr.to_string(), true))
            }
        }
        Cmd::TraceCbv { term, fuel, policy } => {
            let t = parse_vterm(term).map_err(usage)?;
            let policy = match policy {
                PolicyArg::Leftmost => Policy::Leftmost,
                PolicyArg::All => Policy::All,
            };
            match policy {
                Policy::Leftmost => {
                    let tr = cbv_trace(&t, *fuel);
                    Ok((if json { pretty(json!(tr)) } else { tr.to_string() }, true))
                }
                Policy::All => {
                    let g = cbv_graph(&t, *fuel);
                    if json {
                        return Ok((pretty(json!(g)), true));
                    }
                    let mut s = String::new();
                    for (i, n) in g.nodes.iter().enumerate() {
                        s.push_str(&format!("{i}: {n}\n"));
                    }
                    for (a, l, b) in &g.edges {
                        s.push_str(&format!("{a} -{l}-> {b}\n"));
                    }
                    s.push_str(&format!("normal path lengths: {:?}", g.normal_path_lengths()));
                    Ok((s, true))
                }
            }
        }
        Cmd::EncodeCbn { term, param } => {
            let t = parse_term(term).map_err(usage)?;
            let a = Name::special(param.trim_start_matches('@'));
            let p = encode_cbn(&t, &a, &mut Fresh::new()).map_err(usage)?;
            Ok((
                if json {
                    pretty(json!({ "process": p }))
                } else {
                    p.to_string()
                },
                true,
            ))
        }
        Cmd::EncodeCbv { term, param } => {
            let t = parse_vterm(term).map_err(usage)?;
            let (x, p) = match param {
                Some(x) => {
                    let x = Name::var(x);
                    let p = encode_cbv(&t, &x, &mut Fresh::new()).map_err(usage)?;
                    (x, p)
                }
                None => encode_cbv_auto(&t, &mut Fresh::new()),
            };
            if json {
                Ok((pretty(json!({ "param": x.to_string(), "process": p })), true))
            } else {
                Ok((format!("{p}\n  on {x}"), true))
            }
        }
        Cmd::PiStep {
            process,
            all,
            kind,
            strict,
        } => {
            let p = parse_process(process).map_err(usage)?;
            let want = kind.map(|k| match k {
                KindArg::Tensor => Label::Tensor,
                KindArg::Bang => Label::Bang,
            });
            let mut steps: Vec<(Label, String)> =
                pi_successors(&p, PiOptions { strict: *strict }, &mut Fresh::for_process(&p))
                    .into_iter()
                    .filter(|s| want.is_none_or(|k| k == s.redex.kind))
                    .map(|s| (s.redex.kind, canonicalize(&s.result).to_string()))
                    .collect();
            if !all {
                steps.truncate(1);
            }
            if json {
                let v: Vec<_> = steps.iter().map(|(k, r)| json!({ "kind": k, "result": r })).collect();
                Ok((pretty(json!(v)), true))
            } else {
                let lines: Vec<String> = steps.iter().map(|(k, r)| format!("{k}: {r}")).collect();
                Ok((lines.join("\n"), true))
            }
        }
        Cmd::Congr { left, right } => {
            let p = parse_process(left).map_err(usage)?;
            let q = parse_process(right).map_err(usage)?;
            let c = congruent(&p, &q);
            let (cp, cq) = (canonicalize(&p).to_string(), canonicalize(&q).to_string());
            if json {
                Ok((pretty(json!({ "congruent": c, "left": cp, "right": cq })), c))
            } else {
                Ok((
                    format!("{}\n{cp}\n{cq}", if c { "congruent" } else { "not congruent" }),
                    c,
                ))
            }
        }
        Cmd::Harmony {
            process,
            depth,
            budget,
            strict,
        } => {
            let p = parse_process(process).map_err(usage)?;
            let r = harmony_check(
                &p,
                &ClassicOptions {
                    depth: *depth,
                    budget: *budget,
                },
                PiOptions { strict: *strict },
            );
            if json {
                return Ok((pretty(json!(r)), r.equal));
            }
            let mut s = format!("{}\n", if r.equal { "equal" } else { "different" });
            for (name, sets) in [("distance", &r.distance), ("classic", &r.classic)] {
                for (k, keys) in sets {
                    s.push_str(&format!("{name} {k}: {} classes\n", keys.len()));
                }
            }
            Ok((s.trim_end().to_string(), r.equal))
        }
        Cmd::Bisim {
            term,
            mode,
            fuel,
            strict,
        } => {
            let opts = GameOptions {
                pi: PiOptions { strict: *strict },
                ..GameOptions::new(*fuel)
            };
            let r = match mode {
                ModeArg::Cbn => bisim_game_cbn(&parse_term(term).map_err(usage)?, opts),
                ModeArg::Cbv => bisim_game_cbv(&parse_vterm(term).map_err(usage)?, opts),
            };
            if json {
                return Ok((pretty(json!(r)), r.passed()));
            }
            let s = match &r.mismatch {
                None => format!(
                    "pass: {} rounds, {} states, term {:?}, process {:?}{}",
                    r.rounds,
                    r.states,
                    r.term_counts,
                    r.process_counts,
                    if r.exhausted { ", out of fuel" } else { "" }
                ),
                Some(m) => format!(
                    "mismatch\n{}",
                    serde_json::to_string_pretty(m).expect("json serializes")
                ),
            };
            Ok((s, r.passed()))
        }
        Cmd::Enumerate {
            size,
            mode,
            open,
            count,
        } => {
            if *size == 0 {
                return Err("size must be at least 1".into());
            }
            let mode = match mode {
                CalcArg::Lsub => TermMode::Lsub,
                CalcArg::Vker => TermMode::Vker,
            };
            let ts = enumerate_terms(*size, mode, !open);
            if *count {
                return Ok((ts.len().to_string(), true));
            }
            if json {
                return Ok((pretty(json!(ts)), true));
            }
            let lines: Vec<String> = ts.iter().map(ToString::to_string).collect();
            Ok((lines.join("\n"), true))
        }
        Cmd::Suite {
            name,
            size,
            fuel,
            seed,
            samples,
            proc_size,
            depth,
            budget,
            sequential,
        } => {
            let n: SuiteName = name.parse().map_err(usage)?;
            let d = Bounds::for_suite(n);
            let b = Bounds {
                size: size.unwrap_or(d.size),
                fuel: fuel.unwrap_or(d.fuel),
                seed: seed.unwrap_or(d.seed),
                samples: samples.unwrap_or(d.samples),
                proc_size: proc_size.unwrap_or(d.proc_size),
                depth: depth.unwrap_or(d.depth),
                budget: budget.unwrap_or(d.budget),
                open_size: d.open_size,
            };
            let exec = if *sequential { Exec::Sequential } else { Exec::Parallel };
            let r = run_suite(n, &b, exec);
            if json {
                return Ok((r.to_json(), r.passed));
            }
            let mut s = format!(
                "{}: {} ({} inputs)",
                n,
                if r.passed { "pass" } else { "FAIL" },
                r.checked
            );
            if let Some(c) = &r.counterexample {
                s.push_str(&format!(
                    "\ninput:  {}\nshrunk: {}\ndetail: {}",
                    c.input, c.shrunk, c.detail
                ));
            }
            Ok((s, r.passed))
        }
        Cmd::Quadratic { fuel, prefixes } => {
            let r = quadratic_experiment(&corpus(), *fuel, *prefixes);
            if json {
                return Ok((pretty(json!(r)), r.passed()));
            }
            let mut s = to_csv(&r.rows);
            s.push_str("\nn,m\n");
            for (n, m) in &r.prefixes {
                s.push_str(&format!("{n},{m}\n"));
            }
            s.push_str(&format!(
                "\nbounds hold: {}\nratio increasing: {}",
                r.bounds_hold, r.ratio_increasing
            ));
            Ok((s, r.passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            let text = if text.ends_with('\n') { text } else { text + "\n" };
            let written = match &cli.out {
                Some(path) => fs::write(path, &text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

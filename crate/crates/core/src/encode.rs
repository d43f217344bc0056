//! Translations of terms into processes.
//!
//! Call-by-name, parametrised by a special name `a`:
//!
//! ```text
//! [x]a       = x<a>
//! [\x. t]a   = a(x,b). [t]b
//! [t s]a     = new b. new x. (([t]b | b<x,a>) | !x(c). [s]c)
//! [t[x/s]]a  = new x. ([t]a | !x(b). [s]b)
//! ```
//!
//! Call-by-value, parametrised by a variable `x` not free in the term, with
//! an auxiliary translation of values on a special name:
//!
//! ```text
//! [v]x       = !x(a). [v]a        [y]a      = y<a>
//! [v s]x     = new b. new y. (([v]b | b<y,x>) | [s]y)
//! [s[y/u]]x  = new y. ([s]x | [u]y)        [\y. s]a  = a(y,z). [s]z
//! ```

use std::collections::BTreeSet;

use thiserror::Error;

use crate::name::{Fresh, Name};
use crate::process::Process;
use crate::term::{Term, VTerm, Value};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("the parameter {0} must be a special name")]
    NotSpecial(Name),
    #[error("the parameter {0} must be a variable")]
    NotVariable(Name),
    #[error("the parameter {0} is free in the term")]
    ParameterFree(Name),
}

pub fn encode_cbn(t: &Term, a: &Name, fresh: &mut Fresh) -> Result<Process, EncodeError> {
    if !a.is_special() {
        return Err(EncodeError::NotSpecial(a.clone()));
    }
    fresh.reserve_term(t);
    fresh.reserve(a);
    Ok(cbn(t, a, fresh))
}

fn cbn(t: &Term, a: &Name, fresh: &mut Fresh) -> Process {
    match t {
        Term::Var(x) => Process::out(x.clone(), a.clone()),
        Term::Lam(x, body) => {
            let b = fresh.special();
            let inner = cbn(body, &b, fresh);
            Process::inp(a.clone(), x.clone(), b, inner)
        }
        Term::App(f, s) => {
            let b = fresh.special();
            let x = fresh.var();
            let c = fresh.special();
            let pf = cbn(f, &b, fresh);
            let ps = cbn(s, &c, fresh);
            Process::nu(
                b.clone(),
                Process::nu(
                    x.clone(),
                    Process::par(
                        Process::par(pf, Process::out2(b, x.clone(), a.clone())),
                        Process::rep(x, c, ps),
                    ),
                ),
            )
        }
        Term::Sub(body, x, s) => {
            // [s] moves under the restriction on x
            let (x, body) = if s.is_free(x) {
                let nx = fresh.var();
                (nx.clone(), body.rename_free(x, &nx))
            } else {
                (x.clone(), (**body).clone())
            };
            let b = fresh.special();
            let pt = cbn(&body, a, fresh);
            let ps = cbn(s, &b, fresh);
            Process::nu(x.clone(), Process::par(pt, Process::rep(x, b, ps)))
        }
    }
}

pub fn encode_cbv(t: &VTerm, x: &Name, fresh: &mut Fresh) -> Result<Process, EncodeError> {
    if !x.is_var() {
        return Err(EncodeError::NotVariable(x.clone()));
    }
    if t.is_free(x) {
        return Err(EncodeError::ParameterFree(x.clone()));
    }
    fresh.reserve_vterm(t);
    fresh.reserve(x);
    Ok(cbv(t, x, fresh))
}

/// [`encode_cbv`] on a freshly drawn parameter.
pub fn encode_cbv_auto(t: &VTerm, fresh: &mut Fresh) -> (Name, Process) {
    fresh.reserve_vterm(t);
    let x = fresh.var();
    let p = cbv(t, &x, fresh);
    (x, p)
}

pub fn encode_cbv_value(v: &Value, a: &Name, fresh: &mut Fresh) -> Result<Process, EncodeError> {
    if !a.is_special() {
        return Err(EncodeError::NotSpecial(a.clone()));
    }
    fresh.reserve_vterm(&VTerm::Val(v.clone()));
    fresh.reserve(a);
    Ok(cbv_value(v, a, fresh))
}

fn cbv(t: &VTerm, x: &Name, fresh: &mut Fresh) -> Process {
    match t {
        VTerm::Val(v) => {
            let a = fresh.special();
            let pv = cbv_value(v, &a, fresh);
            Process::rep(x.clone(), a, pv)
        }
        VTerm::App(v, s) => {
            let b = fresh.special();
            let y = fresh.var();
            let pv = cbv_value(v, &b, fresh);
            let ps = cbv(s, &y, fresh);
            Process::nu(
                b.clone(),
                Process::nu(
                    y.clone(),
                    Process::par(Process::par(pv, Process::out2(b, y, x.clone())), ps),
                ),
            )
        }
        VTerm::Sub(s, y, u) => {
            // both [s]x and [u]y move under the restriction on y
            let (y, s) = if u.is_free(y) || y == x {
                let ny = fresh.var();
                (ny.clone(), s.rename_free(y, &ny))
            } else {
                (y.clone(), (**s).clone())
            };
            let ps = cbv(&s, x, fresh);
            let pu = cbv(u, &y, fresh);
            Process::nu(y, Process::par(ps, pu))
        }
    }
}

fn cbv_value(v: &Value, a: &Name, fresh: &mut Fresh) -> Process {
    match v {
        Value::Var(y) => Process::out(y.clone(), a.clone()),
        Value::Lam(y, s) => {
            let z = fresh.var();
            let ps = cbv(s, &z, fresh);
            Process::inp(a.clone(), y.clone(), z, ps)
        }
    }
}

pub fn cbn_param() -> Name {
    Name::special("a")
}

/// `fn([t]a) = fv(t) + {a}`.
pub fn check_free_names_cbn(t: &Term) -> bool {
    let a = cbn_param();
    let p = encode_cbn(t, &a, &mut Fresh::new()).expect("special parameter");
    let mut want = t.free_vars();
    want.insert(a);
    p.free_names() == want
}

/// `fn([t]x) = fv(t) + {x}`, and `fn([v]a) = fv(v) + {a}` for every value
/// occurring in `t`.
pub fn check_free_names_cbv(t: &VTerm) -> bool {
    let mut fresh = Fresh::new();
    let (x, p) = encode_cbv_auto(t, &mut fresh);
    let mut want = t.free_vars();
    want.insert(x);
    if p.free_names() != want {
        return false;
    }
    let a = cbn_param();
    t.values().into_iter().all(|v| {
        let p = encode_cbv_value(v, &a, &mut Fresh::new()).expect("special parameter");
        let mut want: BTreeSet<Name> = v.free_vars();
        want.insert(a.clone());
        p.free_names() == want
    })
}

/// Binary communications happen on special names, unary and replicated
/// ones on variables.
pub fn check_discipline(p: &Process) -> bool {
    match p {
        Process::Nil => true,
        Process::OutU(x, _) => x.is_var(),
        Process::OutB(x, _, _) => x.is_special(),
        Process::Nu(_, q) => check_discipline(q),
        Process::InB(x, _, _, q) => x.is_special() && check_discipline(q),
        Process::RepIn(x, _, q) => x.is_var() && check_discipline(q),
        Process::Par(p, q) => check_discipline(p) && check_discipline(q),
    }
}

//! Concrete syntax for terms and processes.
//!
//! ```text
//! term   := "\" VAR "." term | item { item }
//! item   := atom { "[" VAR "/" term "]" }
//! atom   := VAR | "(" term ")"
//!
//! proc   := factor { "|" factor }
//! factor := "0" | "new" NAME "." factor | NAME "<" NAME [ "," NAME ] ">"
//!         | NAME "(" NAME "," NAME ")" "." factor | "!" NAME "(" NAME ")" "." factor
//!         | "(" proc ")"
//! NAME   := VAR | "@" VAR
//! ```

use thiserror::Error;

use crate::name::Name;
use crate::process::Process;
use crate::term::{Term, VTerm};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not a kernel term: `{fun}` at offset {pos} is applied but is not a value")]
    VkerShape { pos: usize, fun: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Special(String),
    Lambda,
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Slash,
    Lt,
    Gt,
    Comma,
    Bang,
    Bar,
    Zero,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(s) => format!("`{s}`"),
            Tok::Special(s) => format!("`@{s}`"),
            Tok::Lambda => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Zero => "`0`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    let ident = |it: &mut std::iter::Peekable<std::str::CharIndices<'_>>| {
        let mut s = String::new();
        while let Some(&(_, c)) = it.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                it.next();
            } else {
                break;
            }
        }
        s
    };
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let tok = match c {
            'a'..='z' => {
                out.push((pos, Tok::Var(ident(&mut it))));
                continue;
            }
            '@' => {
                it.next();
                match it.peek() {
                    Some(&(_, 'a'..='z')) => {
                        out.push((pos, Tok::Special(ident(&mut it))));
                        continue;
                    }
                    _ => {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: "`@` must be followed by a lowercase identifier".into(),
                        })
                    }
                }
            }
            '\\' | 'λ' => Tok::Lambda,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '/' => Tok::Slash,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            ',' => Tok::Comma,
            '!' => Tok::Bang,
            '|' => Tok::Bar,
            '0' => Tok::Zero,
            _ => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        it.next();
        out.push((pos, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    vker: bool,
}

impl Parser {
    fn new(src: &str, vker: bool) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            i: 0,
            vker,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(&t.describe())
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    fn var(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Var(s) => {
                self.bump();
                Ok(Name::var(&s))
            }
            _ => self.error("a variable"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Lambda {
            self.bump();
            let x = self.var()?;
            self.expect(Tok::Dot)?;
            let body = self.term()?;
            return Ok(Term::Lam(x, Box::new(body)));
        }
        let start = self.pos();
        let mut acc = self.item()?;
        while self.starts_item() {
            if self.vker && !matches!(acc, Term::Var(_) | Term::Lam(..)) {
                return Err(ParseError::VkerShape {
                    pos: start,
                    fun: acc.to_string(),
                });
            }
            let arg = self.item()?;
            acc = Term::App(Box::new(acc), Box::new(arg));
        }
        Ok(acc)
    }

    fn starts_item(&self) -> bool {
        matches!(self.peek(), Tok::Var(_) | Tok::LParen | Tok::Lambda)
    }

    fn item(&mut self) -> Result<Term, ParseError> {
        let mut t = match self.peek().clone() {
            Tok::Var(s) => {
                self.bump();
                Term::Var(Name::var(&s))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                t
            }
            // a trailing abstraction extends as far right as possible
            Tok::Lambda => return self.term(),
            _ => return self.error("a term"),
        };
        while *self.peek() == Tok::LBrack {
            self.bump();
            let x = self.var()?;
            self.expect(Tok::Slash)?;
            let s = self.term()?;
            self.expect(Tok::RBrack)?;
            t = Term::Sub(Box::new(t), x, Box::new(s));
        }
        Ok(t)
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Var(s) => {
                self.bump();
                Ok(Name::var(&s))
            }
            Tok::Special(s) => {
                self.bump();
                Ok(Name::special(&s))
            }
            _ => self.error("a name"),
        }
    }

    fn proc(&mut self) -> Result<Process, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let r = self.factor()?;
            acc = Process::par(acc, r);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Process, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Process::Nil)
            }
            Tok::LParen => {
                self.bump();
                let p = self.proc()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Var(ref s)
                if s == "new"
                    && matches!(self.peek_at(1), Tok::Var(_) | Tok::Special(_))
                    && *self.peek_at(2) == Tok::Dot =>
            {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Dot)?;
                Ok(Process::nu(x, self.factor()?))
            }
            Tok::Bang => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::LParen)?;
                let y = self.name()?;
                if *self.peek() == Tok::Comma {
                    return Err(ParseError::Syntax {
                        pos: self.pos(),
                        msg: "replicated inputs are unary".into(),
                    });
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Process::rep(x, y, self.factor()?))
            }
            Tok::Var(_) | Tok::Special(_) => {
                let x = self.name()?;
                match self.peek() {
                    Tok::Lt => {
                        self.bump();
                        let y = self.name()?;
                        let p = if *self.peek() == Tok::Comma {
                            self.bump();
                            Process::out2(x, y, self.name()?)
                        } else {
                            Process::out(x, y)
                        };
                        self.expect(Tok::Gt)?;
                        Ok(p)
                    }
                    Tok::LParen => {
                        self.bump();
                        let y = self.name()?;
                        if *self.peek() != Tok::Comma {
                            return Err(ParseError::Syntax {
                                pos: self.pos(),
                                msg: "non-replicated inputs are binary".into(),
                            });
                        }
                        self.bump();
                        let z = self.name()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Dot)?;
                        Ok(Process::inp(x, y, z, self.factor()?))
                    }
                    _ => self.error("`<` or `(`"),
                }
            }
            _ => self.error("a process"),
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, false)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_vterm(src: &str) -> Result<VTerm, ParseError> {
    let mut p = Parser::new(src, true)?;
    let t = p.term()?;
    p.finish()?;
    Ok(VTerm::from_term(&t).expect("shape checked while parsing"))
}

pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(src, false)?;
    let q = p.proc()?;
    p.finish()?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_examples() {
        assert_eq!(parse_term("\\x. x").unwrap(), Term::lam("x", Term::var("x")));
        assert_eq!(
            parse_term("x[x/y]").unwrap(),
            Term::sub(Term::var("x"), "x", Term::var("y"))
        );
        assert_eq!(
            parse_term("x y z").unwrap(),
            Term::app(Term::app(Term::var("x"), Term::var("y")), Term::var("z"))
        );
        assert_eq!(
            parse_term("x y[y/z]").unwrap(),
            Term::app(Term::var("x"), Term::sub(Term::var("y"), "y", Term::var("z")))
        );
        assert_eq!(
            parse_term("f \\x. x y").unwrap(),
            Term::app(
                Term::var("f"),
                Term::lam("x", Term::app(Term::var("x"), Term::var("y")))
            )
        );
    }

    #[test]
    fn vker_shape_is_distinct() {
        assert!(matches!(parse_vterm("(x y) z"), Err(ParseError::VkerShape { .. })));
        assert!(matches!(parse_vterm("x y z"), Err(ParseError::VkerShape { .. })));
        assert!(matches!(parse_vterm("x[x/y] z"), Err(ParseError::VkerShape { .. })));
        assert!(parse_vterm("(\\x. x) (y y)").is_ok());
        assert!(matches!(parse_vterm("(x"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            parse_term("x )"),
            Err(ParseError::Syntax {
                pos: 2,
                msg: "expected end of input, found `)`".into()
            })
        );
        assert!(matches!(parse_term("@a"), Err(ParseError::Syntax { pos: 0, .. })));
    }

    #[test]
    fn process_examples() {
        assert_eq!(parse_process("0").unwrap(), Process::Nil);
        let x = Name::var("x");
        let a = Name::special("a");
        let b = Name::special("b");
        assert_eq!(
            parse_process("new x. (x<@a> | !x(@b). y<@b>)").unwrap(),
            Process::nu(
                x.clone(),
                Process::par(
                    Process::out(x.clone(), a.clone()),
                    Process::rep(x.clone(), b.clone(), Process::out(Name::var("y"), b.clone()))
                )
            )
        );
        assert_eq!(
            parse_process("@a(x,@b). x<@b>").unwrap(),
            Process::inp(a, x.clone(), b.clone(), Process::out(x, b))
        );
        assert!(parse_process("!x(y,z). 0").is_err());
        assert!(parse_process("x(y). 0").is_err());
        // `new` is a channel when not followed by a binder and a dot
        assert_eq!(
            parse_process("new<x>").unwrap(),
            Process::out(Name::var("new"), Name::var("x"))
        );
    }
}

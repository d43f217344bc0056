//! Length of linear weak head reduction against weak head reduction.
//!
//! For each term, `n` counts weak head β-steps on the unfolded term, `m`
//! counts linear weak head steps and `d` the db steps among them.

use serde::Serialize;

use crate::cbn::{cbn_step, decompose_cbn, whr_steps};
use crate::name::Fresh;
use crate::parse::parse_term;
use crate::term::Term;
use crate::trace::Label;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadRow {
    pub term: String,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub terminated: bool,
}

impl QuadRow {
    /// `d = n`, `n <= m` and `m <= (n+1)^2`. Rows that ran out of fuel hold
    /// vacuously.
    pub fn bounds_hold(&self) -> bool {
        !self.terminated || (self.d == self.n && self.n <= self.m && self.m <= (self.n + 1).pow(2))
    }
}

/// Steps of the linear run, and how many of them are db, within `fuel`.
fn linear_counts(t: &Term, fuel: usize) -> (usize, usize, bool) {
    let mut fresh = Fresh::for_term(t);
    let mut cur = t.clone();
    let (mut m, mut d) = (0, 0);
    while m < fuel {
        let Some(s) = cbn_step(&cur, &mut fresh) else {
            return (m, d, true);
        };
        m += 1;
        d += usize::from(s.label == Label::Db);
        cur = s.term;
    }
    (m, d, decompose_cbn(&cur).is_none())
}

pub fn quadratic_row(t: &Term, fuel: usize) -> QuadRow {
    let n = whr_steps(&t.unfold(), fuel);
    let (m, d, done) = linear_counts(t, fuel);
    QuadRow {
        term: t.to_string(),
        n: n.unwrap_or(fuel),
        m,
        d,
        terminated: done && n.is_some(),
    }
}

fn church(k: usize) -> String {
    let mut body = "x".to_string();
    for _ in 0..k {
        body = format!("f ({body})");
    }
    format!("(\\f. \\x. {body})")
}

const ADD: &str = "(\\m. \\n. \\f. \\x. m f (n f x))";
const MUL: &str = "(\\m. \\n. \\f. m (n f))";

/// Church numerals, sums, products and powers applied to the observers
/// `f` and `x`, plus two small terms.
pub fn corpus() -> Vec<Term> {
    let mut src = vec!["\\x. x".to_string(), "(\\x. x) y".to_string()];
    for i in 0..=3 {
        src.push(format!("{} f x", church(i)));
    }
    for i in 0..=3 {
        for j in 0..=3 {
            src.push(format!("{ADD} {} {} f x", church(i), church(j)));
            src.push(format!("{MUL} {} {} f x", church(i), church(j)));
        }
    }
    for (i, j) in [(2, 2), (2, 3), (3, 2)] {
        src.push(format!("{} {} f x", church(j), church(i)));
    }
    src.iter().map(|s| parse_term(s).expect("corpus parses")).collect()
}

pub fn omega() -> Term {
    parse_term("(\\x. x x) (\\x. x x)").expect("parses")
}

/// For `n = 1..=count`: the number of linear steps up to and including the
/// `n`-th db step of the run of `t`.
pub fn prefix_table(t: &Term, count: usize) -> Vec<(usize, usize)> {
    let mut fresh = Fresh::for_term(t);
    let mut cur = t.clone();
    let mut out = Vec::new();
    let mut m = 0;
    while out.len() < count {
        let Some(s) = cbn_step(&cur, &mut fresh) else {
            break;
        };
        m += 1;
        if s.label == Label::Db {
            out.push((out.len() + 1, m));
        }
        cur = s.term;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadReport {
    pub rows: Vec<QuadRow>,
    /// `(n, m)` pairs along the run of the looping term.
    pub prefixes: Vec<(usize, usize)>,
    pub bounds_hold: bool,
    pub ratio_increasing: bool,
}

impl QuadReport {
    pub fn passed(&self) -> bool {
        self.bounds_hold && self.ratio_increasing
    }
}

/// `m/n` strictly increases along the table.
pub fn ratio_increasing(table: &[(usize, usize)]) -> bool {
    // m1/n1 < m2/n2 iff m1*n2 < m2*n1
    table.windows(2).all(|w| w[0].1 * w[1].0 < w[1].1 * w[0].0)
}

pub fn quadratic_experiment(terms: &[Term], fuel: usize, prefixes: usize) -> QuadReport {
    let rows: Vec<QuadRow> = terms.iter().map(|t| quadratic_row(t, fuel)).collect();
    let table = prefix_table(&omega(), prefixes);
    QuadReport {
        bounds_hold: rows.iter().all(QuadRow::bounds_hold),
        ratio_increasing: table.len() == prefixes && ratio_increasing(&table),
        rows,
        prefixes: table,
    }
}

pub const CSV_HEADER: &str = "term,n,m,d,terminated";

/// Printed terms contain no commas or quotes, so fields need no quoting.
pub fn to_csv(rows: &[QuadRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.term, r.n, r.m, r.d, r.terminated));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        let r = quadratic_row(&parse_term("(\\x. x) y").unwrap(), 100);
        assert_eq!((r.n, r.m, r.d, r.terminated), (1, 2, 1, true));
        let r = quadratic_row(&parse_term("\\x. x").unwrap(), 100);
        assert_eq!((r.n, r.m, r.d), (0, 0, 0));
        let r = quadratic_row(&omega(), 50);
        assert!(!r.terminated && r.bounds_hold());
    }

    #[test]
    fn omega_prefixes_are_triangular() {
        // each round copies the argument once more than the last
        let t = prefix_table(&omega(), 6);
        assert_eq!(t, [(1, 1), (2, 3), (3, 6), (4, 10), (5, 15), (6, 21)]);
        assert!(ratio_increasing(&t));
        assert!(!ratio_increasing(&[(1, 2), (2, 4)]));
    }

    #[test]
    fn church_numerals_terminate() {
        let t = parse_term(&format!("{ADD} {} {} f x", church(2), church(3))).unwrap();
        let r = quadratic_row(&t, 10_000);
        assert!(r.terminated && r.bounds_hold(), "{r:?}");
    }

    #[test]
    fn csv_layout() {
        let rows = vec![quadratic_row(&parse_term("(\\x. x) y").unwrap(), 10)];
        assert_eq!(to_csv(&rows), "term,n,m,d,terminated\n(\\x. x) y,1,2,1,true\n");
    }
}

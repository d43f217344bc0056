//! Linear weak head steps against weak head β on unfolded terms.

use lsubpi::cbn::{whr_oracle_step, whr_steps};
use lsubpi::experiment::{corpus, omega};
use lsubpi::gen::{enumerate_up_to, TermMode};
use lsubpi::trace::Label;
use lsubpi::{cbn_step, Fresh};

const SIZE: usize = 8;
const FUEL: usize = 60;

#[test]
fn steps_project_onto_weak_head_beta() {
    let (mut terminated, mut cut, mut steps) = (0, 0, 0);
    let mut inputs = enumerate_up_to(SIZE, TermMode::Lsub, true);
    inputs.extend(corpus());
    inputs.push(omega());
    for t in inputs {
        let mut fresh = Fresh::for_term(&t);
        let mut cur = t.clone();
        let mut dbs = 0;
        let mut normal = false;
        for _ in 0..FUEL {
            let Some(s) = cbn_step(&cur, &mut fresh) else {
                normal = true;
                break;
            };
            let before = cur.unfold();
            let after = s.term.unfold();
            match s.label {
                Label::Db => {
                    dbs += 1;
                    assert_eq!(s.term.count_subs(), cur.count_subs() + 1, "{cur}");
                    let w = whr_oracle_step(&before).unwrap_or_else(|| panic!("no β step for {cur}"));
                    assert!(w.alpha_eq(&after), "{cur}: {w} vs {after}");
                }
                Label::Ls => {
                    let copied = s.copied.as_ref().unwrap().count_subs();
                    assert_eq!(s.term.count_subs(), cur.count_subs() + copied, "{cur}");
                    assert!(before.alpha_eq(&after), "{cur}");
                }
                other => panic!("{other:?}"),
            }
            cur = s.term;
            steps += 1;
        }
        if normal {
            assert_eq!(whr_steps(&t.unfold(), FUEL), Some(dbs), "{t}");
            terminated += 1;
        } else {
            cut += 1;
            assert_eq!(whr_steps(&t.unfold(), dbs.saturating_sub(1)), None, "{t}");
        }
    }
    println!("{terminated} normal, {cut} cut off, {steps} steps");
    assert!(terminated > 3600 && cut > 0);
}

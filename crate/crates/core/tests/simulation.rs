use lsubpi::bisim::{backward_cbn, cbn_round, cbv_round, forward_cbn};
use lsubpi::encode::cbn_param;
use lsubpi::{
    bisim_game_cbn, bisim_game_cbv, canonicalize, congruent, encode_cbn, parse_process, parse_term, parse_vterm, Fresh,
    GameOptions, Label, Name, PiOptions,
};

fn proc(s: &str) -> lsubpi::Process {
    parse_process(s).unwrap()
}

#[test]
fn beta_is_one_tensor_step() {
    let a = cbn_param();
    let r = cbn_round(&parse_term("(\\x. x) y").unwrap(), &a, PiOptions::default());
    assert_eq!(r.pairs.len(), 1);
    let (label, reduct, result) = &r.pairs[0];
    assert_eq!(*label, Label::Db);
    assert!(reduct.alpha_eq(&parse_term("x[x/y]").unwrap()));
    // worked by hand from the application clause: the abstraction's input
    // consumes the output on @b, leaving the restriction on @b unused
    assert!(congruent(result, &proc("new z. (z<@a> | !z(@c). y<@c>)")));
    assert_eq!(
        canonicalize(result),
        canonicalize(&proc("new x. (x<@a> | !x(@b). y<@b>)"))
    );
}

#[test]
fn substitution_is_one_bang_step() {
    let a = cbn_param();
    let t = parse_term("x[x/y]").unwrap();
    let r = cbn_round(&t, &a, PiOptions::default());
    assert_eq!(r.pairs.len(), 1);
    assert_eq!(r.pairs[0].0, Label::Ls);
    assert!(congruent(&r.pairs[0].2, &proc("new x. (y<@a> | !x(@b). y<@b>)")));
    assert!(forward_cbn(&t, &a) && backward_cbn(&t, &a));
}

#[test]
fn normal_terms_have_normal_encodings() {
    let a = cbn_param();
    for s in ["\\x. x", "x", "x y", "(x y)[z/w]"] {
        let r = cbn_round(&parse_term(s).unwrap(), &a, PiOptions::default());
        assert_eq!(r.pi_steps, 0, "{s}");
    }
}

#[test]
fn whole_games() {
    let r = bisim_game_cbn(&parse_term("(\\x. x x) (\\y. y)").unwrap(), GameOptions::new(20));
    assert!(r.passed() && r.normal);
    assert_eq!(r.term_counts.get(&Label::Db), r.process_counts.get(&Label::Tensor));
    assert_eq!(r.term_counts.get(&Label::Ls), r.process_counts.get(&Label::Bang));
    let r = bisim_game_cbv(&parse_vterm("(\\x. x x) (\\y. y)").unwrap(), GameOptions::new(20));
    assert!(r.passed() && r.normal);
}

#[test]
fn value_steps_on_both_branches() {
    let x = Name::var("o");
    let t = parse_vterm("((\\x. x) (y y))[y/z]").unwrap();
    let r = cbv_round(&t, &x, PiOptions::default());
    assert!(r.unmatched.is_none());
    let vls = r.pairs.iter().find(|p| p.0 == Label::Vls).unwrap();
    assert!(vls.1.alpha_eq(&parse_vterm("((\\x. x) (z y))[y/z]").unwrap()));
    // the value reduct sits under replication, so no further steps
    let r = cbv_round(&parse_vterm("y[y/z]").unwrap(), &x, PiOptions::default());
    assert_eq!(r.pi_steps, 0);
}

#[test]
fn encoding_names_stay_apart_from_term_names() {
    // fresh names printed by the supply reparse as the same names
    let t = parse_term("(\\z1. z1) z2").unwrap();
    let p = encode_cbn(&t, &cbn_param(), &mut Fresh::new()).unwrap();
    assert_eq!(parse_process(&p.to_string()).unwrap(), p);
    assert!(bisim_game_cbn(&t, GameOptions::new(10)).passed());
}

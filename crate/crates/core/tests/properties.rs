use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lsubpi::encode::{check_free_names_cbn, check_free_names_cbv};
use lsubpi::gen::{random_process, random_term, random_vterm, TermMode};
use lsubpi::oracle::random_rewrites;
use lsubpi::{canonicalize, cbn_step, congruent, pi_successors, Fresh, PiOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonical_forms_are_congruent_and_stable(seed in any::<u64>(), size in 1usize..=12, k in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_process(size, &mut rng);
        let q = random_rewrites(&p, k, &mut rng);
        let c = canonicalize(&p);
        prop_assert!(congruent(&p, &q));
        prop_assert!(congruent(&p, &c));
        prop_assert!(canonicalize(&c).alpha_eq(&c), "{}", c);
        prop_assert!(canonicalize(&q).alpha_eq(&c), "{} / {}", q, c);
    }

    #[test]
    fn distance_steps_do_not_add_free_names(seed in any::<u64>(), size in 1usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_process(size, &mut rng);
        let fp = p.free_names();
        for s in pi_successors(&p, PiOptions::default(), &mut Fresh::for_process(&p)) {
            prop_assert!(s.result.free_names().is_subset(&fp), "{} => {}", p, s.result);
        }
    }

    #[test]
    fn free_name_lemmas_hold_along_runs(seed in any::<u64>(), size in 1usize..=14) {
        if let Some(t) = random_term(size, seed, TermMode::Lsub, false) {
            let mut fresh = Fresh::for_term(&t);
            let mut cur = t;
            for _ in 0..20 {
                prop_assert!(check_free_names_cbn(&cur), "{}", cur);
                match cbn_step(&cur, &mut fresh) {
                    Some(s) => cur = s.term,
                    None => break,
                }
            }
        }
        if let Some(t) = random_vterm(size, seed, false) {
            prop_assert!(check_free_names_cbv(&t), "{}", t);
        }
    }
}

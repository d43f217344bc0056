use lsubpi::gen::{enumerate_terms, random_term, TermMode};

#[test]
fn closed_term_counts() {
    let lsub: Vec<usize> = (1..=8)
        .map(|n| enumerate_terms(n, TermMode::Lsub, true).len())
        .collect();
    let vker: Vec<usize> = (1..=8)
        .map(|n| enumerate_terms(n, TermMode::Vker, true).len())
        .collect();
    assert_eq!(lsub, [0, 1, 2, 7, 30, 124, 592, 2922]);
    assert_eq!(vker, [0, 1, 2, 7, 30, 121, 554, 2641]);
}

#[test]
fn value_kernel_terms_are_substitution_terms() {
    // the kernel restricts function positions, so it is a sub-language
    for n in 1..=6 {
        let all: std::collections::BTreeSet<String> = enumerate_terms(n, TermMode::Lsub, true)
            .iter()
            .map(|t| t.alpha_key())
            .collect();
        for t in enumerate_terms(n, TermMode::Vker, true) {
            assert!(all.contains(&t.alpha_key()), "{t}");
        }
    }
}

#[test]
fn random_terms_depend_only_on_seed() {
    for mode in [TermMode::Lsub, TermMode::Vker] {
        let a: Vec<_> = (0..10).map(|s| random_term(10, s, mode, true)).collect();
        let b: Vec<_> = (0..10).map(|s| random_term(10, s, mode, true)).collect();
        assert_eq!(a, b);
    }
}

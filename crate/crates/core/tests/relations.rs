use tvt_core::normalform::{normal_form, words_equal};
use tvt_core::oracle::{
    family_instances, relation_bfs_equal, relation_instances, Budget, Family, RewriteSystem,
    SearchResult,
};
use tvt_core::schreier::{eval_pure, lambda_word, rewrite_pure, PureLetter, PureWord};
use tvt_core::{Letter, Word};

#[test]
fn rule_sides_agree_on_permutation_and_abelian_image() {
    for n in 1..=5 {
        let sys = RewriteSystem::new(n);
        for rule in sys.rules() {
            let lhs = Word::new(n, rule.lhs.clone()).unwrap();
            let rhs = Word::new(n, rule.rhs.clone()).unwrap();
            assert_eq!(lhs.perm_image(), rhs.perm_image(), "rule {}", rule.id);
            assert_eq!(lhs.abelianize(), rhs.abelianize(), "rule {}", rule.id);
        }
    }
}

#[test]
fn every_relation_holds_in_normal_form() {
    for n in 1..=5 {
        let mut all = relation_instances(n);
        all.extend(family_instances(Family::BarSlideMirror, n));
        for rel in all {
            assert!(words_equal(&rel.lhs, &rel.rhs).unwrap(), "{rel}");
        }
    }
}

#[test]
fn every_relation_has_a_rewrite_witness_up_to_four_strands() {
    let budget = Budget::default();
    for n in 1..=4 {
        for rel in relation_instances(n) {
            match relation_bfs_equal(&rel.lhs, &rel.rhs, &budget).unwrap() {
                SearchResult::Equal(path) => assert!(path.verify(&rel.lhs, &rel.rhs), "{rel}"),
                SearchResult::Unknown => panic!("no witness for {rel}"),
            }
        }
    }
}

#[test]
fn relation_counts_grow_as_expected() {
    // n = 2: squares (1 + 1 + 2), g-commute 1, bar slide 1, twist 1
    assert_eq!(relation_instances(2).len(), 7);
    assert_eq!(relation_instances(1).len(), 1);
}

#[test]
fn rho_action_on_lambda_matches_conjugation() {
    for n in 2..=5 {
        for i in 1..n {
            let r = Word::new(n, vec![Letter::r(i)]).unwrap();
            for k in 1..=n {
                for l in k + 1..=n {
                    let x = PureLetter::lambda(k, l);
                    let conj = r.concat(&x.expand(n)).unwrap().concat(&r).unwrap();
                    let image = x.act_by_rho(i).expand(n);
                    assert!(
                        words_equal(&conj, &image).unwrap(),
                        "r{i} L{{{k},{l}}} r{i}"
                    );
                }
            }
        }
    }
}

#[test]
fn rewriting_then_evaluating_is_the_identity_on_generators() {
    for n in 2..=5 {
        for k in 1..=n {
            for l in k + 1..=n {
                let w = lambda_word(k, l, n).unwrap();
                let p = rewrite_pure(&w).unwrap();
                assert_eq!(p, PureWord::new(n, vec![PureLetter::lambda(k, l)]).unwrap());
                assert_eq!(normal_form(&eval_pure(&p)), normal_form(&w));
            }
        }
    }
}

#[test]
fn witness_steps_round_trip_through_text() {
    use tvt_core::oracle::RewriteStep;
    let (a, b) = (
        Word::parse("r1 s1 r1", 2).unwrap(),
        Word::parse("g2 g1 s1 g1 g2", 2).unwrap(),
    );
    let SearchResult::Equal(path) = relation_bfs_equal(&a, &b, &Budget::default()).unwrap() else {
        panic!("no witness");
    };
    for step in &path.steps {
        assert_eq!(step.to_string().parse::<RewriteStep>().unwrap(), *step);
    }
    assert!("(1, 2)".parse::<RewriteStep>().is_err());
    assert!("(1, 2, up)".parse::<RewriteStep>().is_err());
}

mod common;

use common::word_strategy;
use proptest::prelude::*;
use tvt_core::doodle::{
    apply_move, available_moves, bar_parity, braid_gauss, canonical_key, closure_gauss,
    gauss_components, same_gauss_data, GaussData, MoveSpec,
};
use tvt_core::{Letter, Word};

fn rho_word(n: usize, picks: &[usize]) -> Word {
    Word::new(
        n,
        picks.iter().map(|&p| Letter::r(1 + p % (n - 1))).collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closures_are_valid_gauss_data(w in word_strategy(5, 16)) {
        let g = closure_gauss(&w);
        let rebuilt = GaussData::new(g.crossings().iter().copied(), g.bars().iter().copied(), g.arcs().clone(), g.components());
        prop_assert_eq!(rebuilt.unwrap(), g.clone());
        prop_assert_eq!(GaussData::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn closure_invariants_match_the_word(w in word_strategy(5, 16)) {
        let g = closure_gauss(&w);
        prop_assert_eq!(bar_parity(&g), w.abelianize().bits().2);
        prop_assert_eq!(gauss_components(&g), w.perm_image().cycle_count());
    }

    #[test]
    fn alexander_round_trip(w in word_strategy(5, 14)) {
        let g = closure_gauss(&w);
        let b = braid_gauss(&g).unwrap();
        let back = closure_gauss(&b);
        prop_assert!(same_gauss_data(&back, &g).is_some());
        prop_assert_eq!(canonical_key(&back), canonical_key(&g));
    }

    #[test]
    fn cyclic_rotation_keeps_the_closure(w in word_strategy(5, 14), cut in 0usize..15) {
        let cut = cut.min(w.len());
        let (a, b) = w.letters().split_at(cut);
        let rotated = Word::new(w.strands(), b.iter().chain(a).copied().collect()).unwrap();
        prop_assert!(same_gauss_data(&closure_gauss(&w), &closure_gauss(&rotated)).is_some());
    }

    #[test]
    fn rho_conjugation_keeps_the_closure(w in word_strategy(5, 12), picks in prop::collection::vec(0usize..8, 0..5)) {
        prop_assume!(w.strands() >= 2);
        let c = rho_word(w.strands(), &picks);
        let conj = c.concat(&w).unwrap().concat(&c.invert()).unwrap();
        prop_assert!(same_gauss_data(&closure_gauss(&w), &closure_gauss(&conj)).is_some());
    }

    #[test]
    fn moves_preserve_invariants(w in word_strategy(4, 10), pick in 0usize..10_000) {
        let g = closure_gauss(&w);
        let moves = available_moves(&g, g.site_count() + 2);
        prop_assume!(!moves.is_empty());
        let m = moves[pick % moves.len()];
        let h = apply_move(&g, &m).unwrap();
        prop_assert_eq!(gauss_components(&h), gauss_components(&g));
        prop_assert_eq!(bar_parity(&h), bar_parity(&g));
        match m {
            MoveSpec::T2Plus { .. } | MoveSpec::T2Minus { .. } => {
                prop_assert_eq!(h.crossings().len(), g.crossings().len());
            }
            _ => prop_assert_eq!(h.bars().len(), g.bars().len()),
        }
        // the result is still well-formed
        let rebuilt = GaussData::new(h.crossings().iter().copied(), h.bars().iter().copied(), h.arcs().clone(), h.components());
        prop_assert!(rebuilt.is_ok());
    }

    #[test]
    fn plus_moves_are_undone_by_minus_moves(w in word_strategy(4, 8), pick in 0usize..10_000) {
        let g = closure_gauss(&w);
        let plus: Vec<MoveSpec> = available_moves(&g, g.site_count() + 2)
            .into_iter()
            .filter(|m| matches!(m, MoveSpec::R1Plus { .. } | MoveSpec::R2Plus { .. } | MoveSpec::T2Plus { .. }))
            .collect();
        prop_assume!(!plus.is_empty());
        let m = plus[pick % plus.len()];
        let h = apply_move(&g, &m).unwrap();
        let c = g.crossings().last().map_or(1, |x| x + 1);
        let b = g.bars().last().map_or(1, |x| x + 1);
        let undo = match m {
            MoveSpec::R1Plus { .. } => MoveSpec::R1Minus { crossing: c },
            MoveSpec::R2Plus { .. } => MoveSpec::R2Minus { first: c, second: c + 1 },
            _ => MoveSpec::T2Minus { first: b, second: b + 1 },
        };
        prop_assert_eq!(apply_move(&h, &undo).unwrap(), g);
    }
}

#[test]
fn relations_give_move_equivalent_closures() {
    use tvt_core::doodle::{equivalent_bounded, replay_moves, DoodleBudget, DoodleVerdict};
    // bigons, bar pairs and virtual detours
    for (a, b, n) in [
        ("s1 s1", "", 2),
        ("g1 g1 s1", "s1", 2),
        ("r1 s2 r1", "r2 s1 r2", 3),
        ("s1 s1 r1", "r1", 2),
    ] {
        let (ga, gb) = (
            closure_gauss(&Word::parse(a, n).unwrap()),
            closure_gauss(&Word::parse(b, n).unwrap()),
        );
        match equivalent_bounded(&ga, &gb, &DoodleBudget::default()) {
            DoodleVerdict::Equivalent(path) => {
                assert!(same_gauss_data(&replay_moves(&ga, &path).unwrap(), &gb).is_some());
            }
            other => panic!("{a} vs {b}: {other:?}"),
        }
    }
}

#[test]
fn move_text_round_trips() {
    let g = closure_gauss(&Word::parse("s1 g2 s2 r1 g1", 3).unwrap());
    let moves = available_moves(&g, g.site_count() + 2);
    assert!(!moves.is_empty());
    for m in moves {
        assert_eq!(m.to_string().parse::<MoveSpec>().unwrap(), m);
    }
    for bad in [
        "R1+",
        "R1- b1",
        "R2+ Sideways free free",
        "T2- c1 c2",
        "X9 c1",
    ] {
        assert!(bad.parse::<MoveSpec>().is_err(), "{bad}");
    }
}

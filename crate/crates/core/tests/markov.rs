mod common;

use common::word_strategy;
use proptest::prelude::*;
use tvt_core::doodle::{bar_parity, closure_gauss, gauss_components};
use tvt_core::markov::{destabilize, exchange, shift, stabilize, CrossingKind, Side};
use tvt_core::normalform::{flip, nabla, words_equal};
use tvt_core::{Letter, Word};

fn sides() -> [Side; 2] {
    [Side::Left, Side::Right]
}

fn kinds() -> [CrossingKind; 2] {
    [CrossingKind::Real, CrossingKind::Virtual]
}

/// `ι(b1) x ι(b2) x` on `n + 1` strands.
fn exchange_shape(b1: &Word, b2: &Word, side: Side, kind: CrossingKind) -> (Word, usize) {
    let n = b1.strands() + 1;
    let embed = |b: &Word| match side {
        Side::Left => shift(b, 1, 0),
        Side::Right => shift(b, 0, 1),
    };
    let x = match (side, kind) {
        (Side::Left, CrossingKind::Real) => Letter::s(1),
        (Side::Left, CrossingKind::Virtual) => Letter::r(1),
        (Side::Right, CrossingKind::Real) => Letter::s(n - 1),
        (Side::Right, CrossingKind::Virtual) => Letter::r(n - 1),
    };
    let head = embed(b1);
    let split = head.len();
    let mut letters = head.letters().to_vec();
    letters.push(x);
    letters.extend(embed(b2).letters());
    letters.push(x);
    (Word::new(n, letters).unwrap(), split)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shift_is_a_homomorphism(a in word_strategy(4, 8), s in 0usize..3, t in 0usize..3) {
        let b = a.invert();
        let ab = a.concat(&b).unwrap();
        prop_assert_eq!(shift(&ab, s, t), shift(&a, s, t).concat(&shift(&b, s, t)).unwrap());
        prop_assert!(words_equal(&shift(&ab, s, t), &Word::identity(a.strands() + s + t)).unwrap());
    }

    #[test]
    fn stabilization_round_trips_and_keeps_closure_invariants(b in word_strategy(4, 10)) {
        for side in sides() {
            for kind in kinds() {
                let st = stabilize(&b, side, kind);
                prop_assert_eq!(destabilize(&st, side, kind), Some(b.free_reduce()));
                let (g, h) = (closure_gauss(&b), closure_gauss(&st));
                prop_assert_eq!(bar_parity(&g), bar_parity(&h));
                prop_assert_eq!(gauss_components(&g), gauss_components(&h));
            }
        }
    }

    #[test]
    fn exchange_is_an_involution_and_keeps_closure_invariants(b1 in word_strategy(3, 6), b2 in word_strategy(3, 6)) {
        prop_assume!(b1.strands() == b2.strands());
        for side in sides() {
            for kind in kinds() {
                let (w, split) = exchange_shape(&b1, &b2, side, kind);
                let v = exchange(&w, side, split).unwrap();
                prop_assert_eq!(exchange(&v, side, split), Some(w.clone()));
                let (g, h) = (closure_gauss(&w), closure_gauss(&v));
                prop_assert_eq!(bar_parity(&g), bar_parity(&h));
                prop_assert_eq!(gauss_components(&g), gauss_components(&h));
            }
        }
    }

    /// The left exchange is the right exchange seen through the mirror `f_n`,
    /// which is conjugation by `∇_n`.
    #[test]
    fn left_exchange_derived_through_the_mirror(b1 in word_strategy(3, 6), b2 in word_strategy(3, 6)) {
        prop_assume!(b1.strands() == b2.strands());
        for kind in kinds() {
            let (w, split) = exchange_shape(&b1, &b2, Side::Left, kind);
            let direct = exchange(&w, Side::Left, split).unwrap();
            let mirrored = flip(&w);
            let right = exchange(&mirrored, Side::Right, split).unwrap();
            prop_assert_eq!(flip(&right), direct.clone());
            let d = nabla(w.strands()).unwrap();
            let conj = d.concat(&right).unwrap().concat(&d.invert()).unwrap();
            prop_assert!(words_equal(&conj, &direct).unwrap());
        }
    }
}

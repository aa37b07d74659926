#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use tvt_core::{Letter, Word};

pub fn random_letter(rng: &mut impl Rng, n: usize) -> Letter {
    let kinds = if n > 1 { 3 } else { 1 };
    match rng.gen_range(0..kinds) {
        0 => Letter::g(rng.gen_range(1..=n)),
        1 => Letter::s(rng.gen_range(1..n)),
        _ => Letter::r(rng.gen_range(1..n)),
    }
}

pub fn random_word(rng: &mut impl Rng, n: usize, len: usize) -> Word {
    Word::new(n, (0..len).map(|_| random_letter(rng, n)).collect()).unwrap()
}

/// A random pure word, by rejection.
pub fn random_pure_word(rng: &mut impl Rng, max_n: usize, max_len: usize) -> Word {
    loop {
        let n = rng.gen_range(2..=max_n);
        let len = rng.gen_range(0..=max_len);
        let w = random_word(rng, n, len);
        if w.is_pure() {
            return w;
        }
    }
}

pub fn letter_strategy(n: usize) -> BoxedStrategy<Letter> {
    if n == 1 {
        return Just(Letter::g(1)).boxed();
    }
    prop_oneof![
        (1..n).prop_map(Letter::s),
        (1..n).prop_map(Letter::r),
        (1..=n).prop_map(Letter::g),
    ]
    .boxed()
}

pub fn word_strategy(max_n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(letter_strategy(n), 0..=max_len)
            .prop_map(move |letters| Word::new(n, letters).unwrap())
    })
}

/// Two words on the same strand count.
pub fn word_pair_strategy(max_n: usize, max_len: usize) -> impl Strategy<Value = (Word, Word)> {
    (1..=max_n).prop_flat_map(move |n| {
        let w = prop::collection::vec(letter_strategy(n), 0..=max_len)
            .prop_map(move |letters| Word::new(n, letters).unwrap());
        (w.clone(), w)
    })
}

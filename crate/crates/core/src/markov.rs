//! Markov moves on twin words and a bounded search for Markov equivalence.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalform::{normal_form, words_equal, NormalForm};
use crate::word::{parse_letter, Letter, LetterKind, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossingKind {
    Real,
    Virtual,
}

impl CrossingKind {
    fn letter(self, index: usize) -> Letter {
        match self {
            CrossingKind::Real => Letter::s(index),
            CrossingKind::Virtual => Letter::r(index),
        }
    }

    fn other(self) -> Self {
        match self {
            CrossingKind::Real => CrossingKind::Virtual,
            CrossingKind::Virtual => CrossingKind::Real,
        }
    }

    fn of(letter: &Letter) -> Option<Self> {
        match letter.kind {
            LetterKind::S => Some(CrossingKind::Real),
            LetterKind::R => Some(CrossingKind::Virtual),
            LetterKind::G => None,
        }
    }
}

/// `ι_s^t`: adds `s` strands on the left and `t` on the right.
pub fn shift(w: &Word, s: usize, t: usize) -> Word {
    let letters = w.letters().iter().map(|l| l.shifted(s as isize)).collect();
    Word::from_trusted(w.strands() + s + t, letters)
}

/// The terminal letter joining the outer strand on `side` of an `n`-strand word.
fn outer_letter(side: Side, kind: CrossingKind, n: usize) -> Letter {
    match side {
        Side::Left => kind.letter(1),
        Side::Right => kind.letter(n - 1),
    }
}

fn outer_strand(side: Side, n: usize) -> usize {
    match side {
        Side::Left => 1,
        Side::Right => n,
    }
}

fn embed(b: &Word, side: Side) -> Word {
    match side {
        Side::Left => shift(b, 1, 0),
        Side::Right => shift(b, 0, 1),
    }
}

/// Inverse of [`embed`] for a word avoiding the outer strand.
fn unembed(w: &Word, side: Side) -> Word {
    let n = w.strands();
    match side {
        Side::Left => {
            Word::from_trusted(n - 1, w.letters().iter().map(|l| l.shifted(-1)).collect())
        }
        Side::Right => Word::from_trusted(n - 1, w.letters().to_vec()),
    }
}

/// `ι(b) x` with `x` the crossing joining a new outer strand.
pub fn stabilize(w: &Word, side: Side, kind: CrossingKind) -> Word {
    let mut letters = embed(w, side).letters().to_vec();
    letters.push(outer_letter(side, kind, w.strands() + 1));
    Word::from_trusted(w.strands() + 1, letters)
}

/// `Some(b)` when the free reduction of `w` is literally `ι(b) x`.
pub fn destabilize(w: &Word, side: Side, kind: CrossingKind) -> Option<Word> {
    let n = w.strands();
    if n < 2 {
        return None;
    }
    let w = w.free_reduce();
    let (&last, body) = w.letters().split_last()?;
    if last != outer_letter(side, kind, n) {
        return None;
    }
    let body = Word::from_trusted(n, body.to_vec());
    body.avoids_strand(outer_strand(side, n))
        .then(|| unembed(&body, side))
}

/// Swaps `ι(b1) x ι(b2) x` with `ι(b1) y ι(b2) y`, where `x`, `y` are the real
/// and virtual crossings at the outer strand and the first `x` sits at `split`.
pub fn exchange(w: &Word, side: Side, split: usize) -> Option<Word> {
    let n = w.strands();
    if n < 2 {
        return None;
    }
    let letters = w.letters();
    let last = letters.len().checked_sub(1)?;
    if split >= last || letters[split] != letters[last] {
        return None;
    }
    let kind = CrossingKind::of(&letters[split])?;
    if letters[split] != outer_letter(side, kind, n) {
        return None;
    }
    let outer = outer_strand(side, n);
    let interior_ok = letters
        .iter()
        .enumerate()
        .all(|(k, l)| k == split || k == last || !l.touches(outer));
    if !interior_ok {
        return None;
    }
    let mut out = letters.to_vec();
    let y = outer_letter(side, kind.other(), n);
    out[split] = y;
    out[last] = y;
    Some(Word::from_trusted(n, out))
}

/// One step of a Markov path, applied to the current word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "move")]
pub enum MarkovMove {
    /// Replace the word by an equal word.
    Rewrite {
        to: Vec<Letter>,
    },
    /// `w ↦ c w c^{-1}`.
    Conjugate {
        by: Vec<Letter>,
    },
    /// `ab ↦ ba` with `|a| = split`.
    Cycle {
        split: usize,
    },
    Stabilize {
        side: Side,
        kind: CrossingKind,
    },
    Destabilize {
        side: Side,
        kind: CrossingKind,
    },
    Exchange {
        side: Side,
        split: usize,
    },
}

fn letters_text(letters: &[Letter]) -> String {
    letters
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for MarkovMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &Side| match s {
            Side::Left => "left",
            Side::Right => "right",
        };
        let kind = |k: &CrossingKind| match k {
            CrossingKind::Real => "real",
            CrossingKind::Virtual => "virtual",
        };
        match self {
            MarkovMove::Rewrite { to } => {
                write!(f, "{}", ["rewrite", &letters_text(to)].join(" ").trim_end())
            }
            MarkovMove::Conjugate { by } => write!(
                f,
                "{}",
                ["conjugate", &letters_text(by)].join(" ").trim_end()
            ),
            MarkovMove::Cycle { split } => write!(f, "cycle {split}"),
            MarkovMove::Stabilize { side: s, kind: k } => {
                write!(f, "stabilize {} {}", side(s), kind(k))
            }
            MarkovMove::Destabilize { side: s, kind: k } => {
                write!(f, "destabilize {} {}", side(s), kind(k))
            }
            MarkovMove::Exchange { side: s, split } => write!(f, "exchange {} {split}", side(s)),
        }
    }
}

impl FromStr for MarkovMove {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::MoveMismatch(format!("cannot parse `{line}`"));
        let mut parts = line.split_whitespace();
        let head = parts.next().ok_or_else(bad)?;
        let rest: Vec<&str> = parts.collect();
        let side = |t: Option<&&str>| match t {
            Some(&"left") => Ok(Side::Left),
            Some(&"right") => Ok(Side::Right),
            _ => Err(bad()),
        };
        let kind = |t: Option<&&str>| match t {
            Some(&"real") => Ok(CrossingKind::Real),
            Some(&"virtual") => Ok(CrossingKind::Virtual),
            _ => Err(bad()),
        };
        // indices are checked when the move is applied
        let letters = |tokens: &[&str]| {
            tokens
                .iter()
                .enumerate()
                .map(|(k, t)| parse_letter(t, usize::MAX / 2, k))
                .collect::<Result<Vec<_>>>()
        };
        let number = |t: Option<&&str>| t.and_then(|s| s.parse().ok()).ok_or_else(bad);
        Ok(match head {
            "rewrite" => MarkovMove::Rewrite {
                to: letters(&rest)?,
            },
            "conjugate" => MarkovMove::Conjugate {
                by: letters(&rest)?,
            },
            "cycle" if rest.len() == 1 => MarkovMove::Cycle {
                split: number(rest.first())?,
            },
            "stabilize" if rest.len() == 2 => MarkovMove::Stabilize {
                side: side(rest.first())?,
                kind: kind(rest.get(1))?,
            },
            "destabilize" if rest.len() == 2 => MarkovMove::Destabilize {
                side: side(rest.first())?,
                kind: kind(rest.get(1))?,
            },
            "exchange" if rest.len() == 2 => MarkovMove::Exchange {
                side: side(rest.first())?,
                split: number(rest.get(1))?,
            },
            _ => return Err(bad()),
        })
    }
}

impl MarkovMove {
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let n = w.strands();
        let fail = || Error::MoveMismatch(format!("{self} on `{w}`"));
        match self {
            MarkovMove::Rewrite { to } => {
                let to = Word::new(n, to.clone())?;
                if !words_equal(w, &to)? {
                    return Err(fail());
                }
                Ok(to)
            }
            MarkovMove::Conjugate { by } => {
                let c = Word::new(n, by.clone())?;
                c.concat(w)?.concat(&c.invert())
            }
            MarkovMove::Cycle { split } => {
                if *split > w.len() {
                    return Err(fail());
                }
                let (a, b) = w.letters().split_at(*split);
                Ok(Word::from_trusted(n, b.iter().chain(a).copied().collect()))
            }
            MarkovMove::Stabilize { side, kind } => Ok(stabilize(w, *side, *kind)),
            MarkovMove::Destabilize { side, kind } => destabilize(w, *side, *kind).ok_or_else(fail),
            MarkovMove::Exchange { side, split } => exchange(w, *side, *split).ok_or_else(fail),
        }
    }
}

/// Applies the moves in order.
pub fn replay_markov(w: &Word, path: &[MarkovMove]) -> Result<Word> {
    path.iter().try_fold(w.clone(), |acc, m| m.apply(&acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovBudget {
    pub nodes: usize,
    /// Largest strand count visited; `None` means two more than the larger
    /// input.
    pub max_strands: Option<usize>,
}

impl Default for MarkovBudget {
    fn default() -> Self {
        MarkovBudget {
            nodes: 100_000,
            max_strands: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureInvariant {
    /// Parity of the number of `g` letters.
    BarParity,
    /// Cycle count of the permutation image.
    Components,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkovVerdict {
    Equivalent(Vec<MarkovMove>),
    Distinct(ClosureInvariant),
    Unknown,
}

/// A search edge between two group elements, with enough data to spell the
/// move in both directions.
#[derive(Debug, Clone)]
enum Edge {
    Conjugate(Vec<Letter>),
    Cycle {
        literal: Word,
        split: usize,
    },
    Stabilize {
        side: Side,
        kind: CrossingKind,
        base: Word,
    },
    Destabilize {
        side: Side,
        kind: CrossingKind,
        literal: Word,
    },
    Exchange {
        side: Side,
        literal: Word,
        split: usize,
    },
}

fn rewrite(w: &Word) -> MarkovMove {
    MarkovMove::Rewrite {
        to: w.letters().to_vec(),
    }
}

impl Edge {
    fn forward(&self) -> Vec<MarkovMove> {
        match self {
            Edge::Conjugate(c) => vec![MarkovMove::Conjugate { by: c.clone() }],
            Edge::Cycle { literal, split } => {
                vec![rewrite(literal), MarkovMove::Cycle { split: *split }]
            }
            Edge::Stabilize { side, kind, .. } => vec![MarkovMove::Stabilize {
                side: *side,
                kind: *kind,
            }],
            Edge::Destabilize {
                side,
                kind,
                literal,
            } => vec![
                rewrite(literal),
                MarkovMove::Destabilize {
                    side: *side,
                    kind: *kind,
                },
            ],
            Edge::Exchange {
                side,
                literal,
                split,
            } => vec![
                rewrite(literal),
                MarkovMove::Exchange {
                    side: *side,
                    split: *split,
                },
            ],
        }
    }

    /// Moves leading from the edge's target back to its source.
    fn backward(&self) -> Vec<MarkovMove> {
        match self {
            Edge::Conjugate(c) => vec![MarkovMove::Conjugate {
                by: c.iter().rev().copied().collect(),
            }],
            Edge::Cycle { literal, split } => {
                let (a, b) = literal.letters().split_at(*split);
                let cycled =
                    Word::from_trusted(literal.strands(), b.iter().chain(a).copied().collect());
                vec![
                    rewrite(&cycled),
                    MarkovMove::Cycle {
                        split: literal.len() - split,
                    },
                ]
            }
            Edge::Stabilize { side, kind, base } => vec![
                rewrite(&stabilize(base, *side, *kind)),
                MarkovMove::Destabilize {
                    side: *side,
                    kind: *kind,
                },
            ],
            Edge::Destabilize { side, kind, .. } => vec![MarkovMove::Stabilize {
                side: *side,
                kind: *kind,
            }],
            Edge::Exchange {
                side,
                literal,
                split,
            } => {
                let swapped =
                    exchange(literal, *side, *split).expect("edge built from a valid exchange");
                vec![
                    rewrite(&swapped),
                    MarkovMove::Exchange {
                        side: *side,
                        split: *split,
                    },
                ]
            }
        }
    }
}

/// `Some(b)` when the element `u` lies in the image of the embedding on
/// `side`, with `b` spelled from the normal form of `u`.
fn preimage(u: &Word, side: Side) -> Option<Word> {
    let n = u.strands();
    let outer = outer_strand(side, n);
    let nf = normal_form(u);
    if nf.sigma.image(outer) != outer || nf.eps.get(outer) {
        return None;
    }
    if nf.h.letters().iter().any(|x| x.i == outer || x.j == outer) {
        return None;
    }
    let spelled = nf.to_word();
    spelled
        .avoids_strand(outer)
        .then(|| unembed(&spelled, side))
}

fn generators(n: usize) -> Vec<Letter> {
    let mut out = Vec::new();
    for i in 1..n {
        out.push(Letter::s(i));
        out.push(Letter::r(i));
    }
    out.extend((1..=n).map(Letter::g));
    out
}

fn neighbours(w: &Word, max_strands: usize) -> Vec<(Word, Edge)> {
    let n = w.strands();
    let mut out = Vec::new();
    for x in generators(n) {
        let xw = Word::from_trusted(
            n,
            std::iter::once(x)
                .chain(w.letters().iter().copied())
                .chain([x])
                .collect(),
        );
        out.push((xw, Edge::Conjugate(vec![x])));
    }
    for split in 1..w.len() {
        let (a, b) = w.letters().split_at(split);
        let cycled = Word::from_trusted(n, b.iter().chain(a).copied().collect());
        out.push((
            cycled,
            Edge::Cycle {
                literal: w.clone(),
                split,
            },
        ));
    }
    let sides = [Side::Right, Side::Left];
    let kinds = [CrossingKind::Real, CrossingKind::Virtual];
    if n < max_strands {
        for side in sides {
            for kind in kinds {
                out.push((
                    stabilize(w, side, kind),
                    Edge::Stabilize {
                        side,
                        kind,
                        base: w.clone(),
                    },
                ));
            }
        }
    }
    if n >= 2 {
        for side in sides {
            for kind in kinds {
                let x = outer_letter(side, kind, n);
                let u = Word::from_trusted(n, w.letters().iter().copied().chain([x]).collect());
                if let Some(b) = preimage(&u, side) {
                    let literal = stabilize(&b, side, kind);
                    out.push((
                        b,
                        Edge::Destabilize {
                            side,
                            kind,
                            literal,
                        },
                    ));
                }
            }
        }
        // exchanges with a single-letter middle word
        for side in sides {
            for kind in kinds {
                let x = outer_letter(side, kind, n);
                for b2 in generators(n - 1) {
                    let b2 = embed(&Word::from_trusted(n - 1, vec![b2]), side);
                    let tail: Vec<Letter> = std::iter::once(x)
                        .chain(b2.letters().iter().copied())
                        .chain([x])
                        .collect();
                    // u = w · (x ι(b2) x)^{-1}, which is the same word reversed
                    let u = Word::from_trusted(
                        n,
                        w.letters()
                            .iter()
                            .copied()
                            .chain(tail.iter().rev().copied())
                            .collect(),
                    );
                    let Some(b1) = preimage(&u, side) else {
                        continue;
                    };
                    let head = embed(&b1, side);
                    let literal =
                        Word::from_trusted(n, head.letters().iter().copied().chain(tail).collect());
                    let swapped =
                        exchange(&literal, side, head.len()).expect("literal exchange shape");
                    out.push((
                        swapped,
                        Edge::Exchange {
                            side,
                            literal,
                            split: head.len(),
                        },
                    ));
                }
            }
        }
    }
    out
}

type Key = (usize, NormalForm);

struct Tree {
    /// key -> (parent key, edge from parent)
    parent: HashMap<Key, Option<(Key, Edge)>>,
    frontier: Vec<(Key, Word)>,
}

impl Tree {
    fn new(root: Key, word: Word) -> Self {
        Tree {
            parent: HashMap::from([(root.clone(), None)]),
            frontier: vec![(root, word)],
        }
    }

    fn edges_to(&self, key: &Key) -> Vec<Edge> {
        let mut edges = Vec::new();
        let mut cur = key.clone();
        while let Some(Some((p, e))) = self.parent.get(&cur) {
            edges.push(e.clone());
            cur = p.clone();
        }
        edges.reverse();
        edges
    }
}

fn key_of(w: &Word) -> Key {
    (w.strands(), normal_form(w))
}

/// Bidirectional breadth-first search over Markov moves. Nodes are group
/// elements (strand count plus normal form); frontiers are expanded a level
/// at a time, the smaller one first.
pub fn markov_equivalent_bounded(w1: &Word, w2: &Word, budget: &MarkovBudget) -> MarkovVerdict {
    let parity = |w: &Word| w.abelianize().bits().2;
    if parity(w1) != parity(w2) {
        return MarkovVerdict::Distinct(ClosureInvariant::BarParity);
    }
    if w1.perm_image().cycle_count() != w2.perm_image().cycle_count() {
        return MarkovVerdict::Distinct(ClosureInvariant::Components);
    }
    let (k1, k2) = (key_of(w1), key_of(w2));
    if k1 == k2 {
        return MarkovVerdict::Equivalent(if w1 == w2 { vec![] } else { vec![rewrite(w2)] });
    }
    if budget.nodes == 0 {
        return MarkovVerdict::Unknown;
    }
    let max_strands = budget
        .max_strands
        .unwrap_or(w1.strands().max(w2.strands()) + 2);
    let mut trees = [
        Tree::new(k1.clone(), k1.1.to_word()),
        Tree::new(k2.clone(), k2.1.to_word()),
    ];
    let mut visited = 2;
    loop {
        let side = match (trees[0].frontier.is_empty(), trees[1].frontier.is_empty()) {
            (true, true) => return MarkovVerdict::Unknown,
            (true, false) => 1,
            (false, true) => 0,
            _ if trees[0].frontier.len() <= trees[1].frontier.len() => 0,
            _ => 1,
        };
        let frontier = std::mem::take(&mut trees[side].frontier);
        let mut next = Vec::new();
        for (key, word) in frontier {
            for (nb, edge) in neighbours(&word, max_strands) {
                if nb.strands() > max_strands {
                    continue;
                }
                let nk = key_of(&nb);
                if trees[side].parent.contains_key(&nk) {
                    continue;
                }
                trees[side]
                    .parent
                    .insert(nk.clone(), Some((key.clone(), edge)));
                if trees[1 - side].parent.contains_key(&nk) {
                    let mut path: Vec<MarkovMove> = trees[0]
                        .edges_to(&nk)
                        .iter()
                        .flat_map(Edge::forward)
                        .collect();
                    path.extend(trees[1].edges_to(&nk).iter().rev().flat_map(Edge::backward));
                    path.push(rewrite(w2));
                    return MarkovVerdict::Equivalent(path);
                }
                visited += 1;
                if visited >= budget.nodes {
                    return MarkovVerdict::Unknown;
                }
                next.push((nk.clone(), nk.1.to_word()));
            }
        }
        trees[side].frontier = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, n: usize) -> Word {
        Word::parse(text, n).unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&w("s1", 2), 1, 0), w("s2", 3));
        assert_eq!(shift(&w("s1", 2), 0, 1), w("s1", 3));
        assert_eq!(shift(&w("s1 g2", 2), 0, 0), w("s1 g2", 2));
    }

    #[test]
    fn stabilize_examples() {
        assert_eq!(
            stabilize(&w("g1", 1), Side::Right, CrossingKind::Real),
            w("g1 s1", 2)
        );
        assert_eq!(
            stabilize(&w("g1", 1), Side::Right, CrossingKind::Virtual),
            w("g1 r1", 2)
        );
        assert_eq!(
            stabilize(&w("s1", 2), Side::Left, CrossingKind::Virtual),
            w("s2 r1", 3)
        );
    }

    #[test]
    fn destabilize_examples() {
        let b = w("s1 g2 r1", 2);
        for side in [Side::Left, Side::Right] {
            for kind in [CrossingKind::Real, CrossingKind::Virtual] {
                assert_eq!(
                    destabilize(&stabilize(&b, side, kind), side, kind),
                    Some(b.clone())
                );
            }
        }
        assert_eq!(
            destabilize(&w("s1 s2 s1", 3), Side::Right, CrossingKind::Real),
            None
        );
        assert_eq!(
            destabilize(&Word::identity(2), Side::Right, CrossingKind::Real),
            None
        );
    }

    #[test]
    fn exchange_examples() {
        let x = w("s1 s2 g1 s2", 3);
        let y = exchange(&x, Side::Right, 1).unwrap();
        assert_eq!(y, w("s1 r2 g1 r2", 3));
        assert_eq!(exchange(&y, Side::Right, 1), Some(x.clone()));
        assert_eq!(exchange(&x, Side::Right, 0), None);
        assert_eq!(exchange(&w("s1 s2 g3 s2", 3), Side::Right, 1), None);
        assert_eq!(
            exchange(&w("s2 s1 g2 s1", 3), Side::Left, 1),
            Some(w("s2 r1 g2 r1", 3))
        );
        assert_eq!(exchange(&w("s1 g3 s2", 3), Side::Left, 0), None);
    }

    #[test]
    fn move_text_round_trips() {
        let moves = [
            MarkovMove::Rewrite {
                to: vec![Letter::s(1), Letter::g(2)],
            },
            MarkovMove::Conjugate {
                by: vec![Letter::r(3)],
            },
            MarkovMove::Cycle { split: 2 },
            MarkovMove::Stabilize {
                side: Side::Left,
                kind: CrossingKind::Virtual,
            },
            MarkovMove::Destabilize {
                side: Side::Right,
                kind: CrossingKind::Real,
            },
            MarkovMove::Exchange {
                side: Side::Right,
                split: 4,
            },
        ];
        for m in moves {
            assert_eq!(m.to_string().parse::<MarkovMove>().unwrap(), m);
        }
        assert!("stabilize up real".parse::<MarkovMove>().is_err());
    }

    #[test]
    fn search_examples() {
        let budget = MarkovBudget::default();
        let b = w("s1 g1 s2", 3);
        let c = w("r2 s1", 3);
        let conj = c.concat(&b).unwrap().concat(&c.invert()).unwrap();
        let MarkovVerdict::Equivalent(path) = markov_equivalent_bounded(&b, &conj, &budget) else {
            panic!("conjugates are equivalent");
        };
        assert_eq!(replay_markov(&b, &path).unwrap(), conj);

        let st = stabilize(&b, Side::Right, CrossingKind::Real);
        let MarkovVerdict::Equivalent(path) = markov_equivalent_bounded(&b, &st, &budget) else {
            panic!("stabilization is a move");
        };
        assert_eq!(replay_markov(&b, &path).unwrap(), st);

        assert_eq!(
            markov_equivalent_bounded(&w("g1", 2), &w("", 2), &budget),
            MarkovVerdict::Distinct(ClosureInvariant::BarParity)
        );
    }
}

//! Semi-decision procedures for word equality that use nothing but the
//! defining relations.
//!
//! * [`relation_bfs_equal`] searches for a chain of relation applications and
//!   returns it as a replayable witness.
//! * [`quotient_separate`] looks for a homomorphism into a finite symmetric
//!   group under which the two words differ.
//!
//! Neither routine looks at normal forms, so they can be used to cross-check
//! [`crate::normalform::words_equal`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, LetterKind, Permutation, Word};

/// The defining relation families, plus one derived family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `s_i s_i = 1`
    SSquare,
    /// `s_i s_j = s_j s_i`, `|i - j| > 1`
    SCommute,
    /// `r_i r_i = 1`
    RSquare,
    /// `r_i r_j = r_j r_i`, `|i - j| > 1`
    RCommute,
    /// `r_i r_{i+1} r_i = r_{i+1} r_i r_{i+1}`
    RBraid,
    /// `s_i r_j = r_j s_i`, `|i - j| > 1`
    SRCommute,
    /// `r_i s_{i+1} r_i = r_{i+1} s_i r_{i+1}`
    MixedBraid,
    /// `g_i g_i = 1`
    GSquare,
    /// `g_i g_j = g_j g_i`
    GCommute,
    /// `g_j r_i = r_i g_j`, `j ∉ {i, i+1}`
    GRCommute,
    /// `s_i g_j = g_j s_i`, `j ∉ {i, i+1}`
    SGCommute,
    /// `g_{i+1} r_i = r_i g_i`
    BarSlide,
    /// `r_i s_i r_i = g_{i+1} g_i s_i g_i g_{i+1}`
    Twist,
    /// `g_i r_i = r_i g_{i+1}`; follows from `BarSlide` and `RSquare`.
    BarSlideMirror,
}

impl Family {
    pub const DEFINING: [Family; 13] = [
        Family::SSquare,
        Family::SCommute,
        Family::RSquare,
        Family::RCommute,
        Family::RBraid,
        Family::SRCommute,
        Family::MixedBraid,
        Family::GSquare,
        Family::GCommute,
        Family::GRCommute,
        Family::SGCommute,
        Family::BarSlide,
        Family::Twist,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::SSquare => "s-square",
            Family::SCommute => "s-commute",
            Family::RSquare => "r-square",
            Family::RCommute => "r-commute",
            Family::RBraid => "r-braid",
            Family::SRCommute => "sr-commute",
            Family::MixedBraid => "mixed-braid",
            Family::GSquare => "g-square",
            Family::GCommute => "g-commute",
            Family::GRCommute => "gr-commute",
            Family::SGCommute => "sg-commute",
            Family::BarSlide => "bar-slide",
            Family::Twist => "twist",
            Family::BarSlideMirror => "bar-slide-mirror",
        }
    }
}

/// One instance `lhs = rhs` of a relation family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub family: Family,
    pub lhs: Word,
    pub rhs: Word,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = {}", self.family.name(), self.lhs, self.rhs)
    }
}

/// Every instance of one family on `n` strands.
pub fn family_instances(family: Family, n: usize) -> Vec<Relation> {
    use Letter as L;
    let m = n.saturating_sub(1);
    let mut out = Vec::new();
    let mut push = |lhs: Vec<Letter>, rhs: Vec<Letter>| {
        out.push(Relation {
            family,
            lhs: Word::from_trusted(n, lhs),
            rhs: Word::from_trusted(n, rhs),
        })
    };
    match family {
        Family::SSquare => (1..=m).for_each(|i| push(vec![L::s(i), L::s(i)], vec![])),
        Family::RSquare => (1..=m).for_each(|i| push(vec![L::r(i), L::r(i)], vec![])),
        Family::GSquare => (1..=n).for_each(|i| push(vec![L::g(i), L::g(i)], vec![])),
        Family::SCommute | Family::RCommute => {
            let mk = if family == Family::SCommute {
                L::s
            } else {
                L::r
            };
            for i in 1..=m {
                for j in i + 2..=m {
                    push(vec![mk(i), mk(j)], vec![mk(j), mk(i)]);
                }
            }
        }
        Family::RBraid => {
            for i in 1..m {
                push(
                    vec![L::r(i), L::r(i + 1), L::r(i)],
                    vec![L::r(i + 1), L::r(i), L::r(i + 1)],
                );
            }
        }
        Family::SRCommute => {
            for i in 1..=m {
                for j in 1..=m {
                    if i.abs_diff(j) > 1 {
                        push(vec![L::s(i), L::r(j)], vec![L::r(j), L::s(i)]);
                    }
                }
            }
        }
        Family::MixedBraid => {
            for i in 1..m {
                push(
                    vec![L::r(i), L::s(i + 1), L::r(i)],
                    vec![L::r(i + 1), L::s(i), L::r(i + 1)],
                );
            }
        }
        Family::GCommute => {
            for i in 1..=n {
                for j in i + 1..=n {
                    push(vec![L::g(i), L::g(j)], vec![L::g(j), L::g(i)]);
                }
            }
        }
        Family::GRCommute | Family::SGCommute => {
            for i in 1..=m {
                for j in 1..=n {
                    if j != i && j != i + 1 {
                        if family == Family::GRCommute {
                            push(vec![L::g(j), L::r(i)], vec![L::r(i), L::g(j)]);
                        } else {
                            push(vec![L::s(i), L::g(j)], vec![L::g(j), L::s(i)]);
                        }
                    }
                }
            }
        }
        Family::BarSlide => {
            (1..=m).for_each(|i| push(vec![L::g(i + 1), L::r(i)], vec![L::r(i), L::g(i)]))
        }
        Family::BarSlideMirror => {
            (1..=m).for_each(|i| push(vec![L::g(i), L::r(i)], vec![L::r(i), L::g(i + 1)]))
        }
        Family::Twist => {
            for i in 1..=m {
                push(
                    vec![L::r(i), L::s(i), L::r(i)],
                    vec![L::g(i + 1), L::g(i), L::s(i), L::g(i), L::g(i + 1)],
                );
            }
        }
    }
    out
}

/// All instances of the thirteen defining families on `n` strands.
pub fn relation_instances(n: usize) -> Vec<Relation> {
    Family::DEFINING
        .iter()
        .flat_map(|&f| family_instances(f, n))
        .collect()
}

// Compact letter codes used inside the searches.
type Code = u8;

/// Largest strand count the rewriting search can encode.
pub const MAX_SEARCH_STRANDS: usize = 63;

fn encode(l: &Letter) -> Code {
    let kind = match l.kind {
        LetterKind::S => 0,
        LetterKind::R => 1,
        LetterKind::G => 2,
    };
    (kind << 6) | l.index as u8
}

fn decode(c: Code) -> Letter {
    let index = (c & 0x3f) as usize;
    match c >> 6 {
        0 => Letter::s(index),
        1 => Letter::r(index),
        _ => Letter::g(index),
    }
}

fn encode_word(w: &Word) -> Vec<Code> {
    w.letters().iter().map(encode).collect()
}

fn is_reduced(codes: &[Code]) -> bool {
    codes.windows(2).all(|p| p[0] != p[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Replace the rule's left side by its right side.
    Forward,
    /// Replace the rule's right side by its left side.
    Backward,
}

impl Direction {
    fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A subword replacement `lhs ↔ rhs` obtained by cutting a cyclic rotation of a
/// relator in two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: usize,
    /// Index into [`RewriteSystem::relations`].
    pub relation: usize,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

/// One step of a witness: replace the occurrence of one side of `rule` that
/// starts at `position` by the other side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: usize,
    pub position: usize,
    pub direction: Direction,
}

impl RewriteStep {
    pub fn inverse(&self) -> Self {
        RewriteStep {
            direction: self.direction.flip(),
            ..*self
        }
    }
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        };
        write!(f, "({}, {}, {})", self.rule, self.position, dir)
    }
}

impl FromStr for RewriteStep {
    type Err = Error;

    /// Parses `(rule, position, fwd|bwd)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MoveMismatch(format!("cannot parse rewrite step `{s}`"));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let fields: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [rule, position, dir] = fields.as_slice() else {
            return Err(bad());
        };
        Ok(RewriteStep {
            rule: rule.parse().map_err(|_| bad())?,
            position: position.parse().map_err(|_| bad())?,
            direction: match *dir {
                "fwd" => Direction::Forward,
                "bwd" => Direction::Backward,
                _ => return Err(bad()),
            },
        })
    }
}

/// Relations of `TVT_n` as bidirectional rewrite rules.
///
/// Rule `0..` with `lhs = x x`, `rhs = []` exist for every generator `x`; used
/// backward they insert `x x`, used forward they cancel it. Every free
/// reduction performed by the search is recorded through them.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    n: usize,
    relations: Vec<Relation>,
    rules: Vec<Rule>,
    rule_codes: Vec<(Vec<Code>, Vec<Code>)>,
    /// Side of a rule, keyed by its letters, to the rules and directions that
    /// replace it.
    index: HashMap<Vec<Code>, Vec<(usize, Direction)>>,
    /// Cancellation rule per letter code.
    square_rule: HashMap<Code, usize>,
    max_side: usize,
}

impl RewriteSystem {
    /// The defining relations plus the derived mirror bar slide.
    pub fn new(n: usize) -> Self {
        let mut relations = relation_instances(n);
        relations.extend(family_instances(Family::BarSlideMirror, n));
        Self::from_relations(n, relations)
    }

    /// Panics if `n` exceeds [`MAX_SEARCH_STRANDS`].
    pub fn from_relations(n: usize, relations: Vec<Relation>) -> Self {
        assert!(
            n <= MAX_SEARCH_STRANDS,
            "rewriting search supports at most {MAX_SEARCH_STRANDS} strands"
        );
        let mut sys = RewriteSystem {
            n,
            relations: Vec::new(),
            rules: Vec::new(),
            rule_codes: Vec::new(),
            index: HashMap::new(),
            square_rule: HashMap::new(),
            max_side: 0,
        };
        let mut seen: HashSet<(Vec<Code>, Vec<Code>)> = HashSet::new();

        // squares first so that they always have the same ids
        let mut ordered: Vec<Relation> = relations
            .iter()
            .filter(|r| {
                r.rhs.is_empty() && r.lhs.len() == 2 && r.lhs.letters()[0] == r.lhs.letters()[1]
            })
            .cloned()
            .collect();
        ordered.extend(
            relations
                .iter()
                .filter(|r| {
                    !(r.rhs.is_empty()
                        && r.lhs.len() == 2
                        && r.lhs.letters()[0] == r.lhs.letters()[1])
                })
                .cloned(),
        );

        for (rel_id, relation) in ordered.iter().enumerate() {
            let mut relator = encode_word(&relation.lhs);
            relator.extend(encode_word(&relation.rhs).iter().rev());
            let len = relator.len();
            let is_square = relation.rhs.is_empty() && len == 2 && relator[0] == relator[1];
            if is_square {
                let key = (relator.clone(), Vec::new());
                seen.insert(key.clone());
                sys.square_rule.insert(relator[0], sys.rules.len());
                sys.push_rule(rel_id, key.0, key.1);
                continue;
            }
            for rot in 0..len {
                let rotated: Vec<Code> = relator[rot..]
                    .iter()
                    .chain(&relator[..rot])
                    .copied()
                    .collect();
                for cut in 1..=len {
                    let lhs = rotated[..cut].to_vec();
                    let rhs: Vec<Code> = rotated[cut..].iter().rev().copied().collect();
                    if !is_reduced(&lhs) || !is_reduced(&rhs) {
                        continue;
                    }
                    // a shared first or last letter makes the rule a padded
                    // copy of a shorter one
                    if lhs.first() == rhs.first() || lhs.last() == rhs.last() {
                        continue;
                    }
                    if seen.contains(&(lhs.clone(), rhs.clone()))
                        || seen.contains(&(rhs.clone(), lhs.clone()))
                    {
                        continue;
                    }
                    seen.insert((lhs.clone(), rhs.clone()));
                    sys.push_rule(rel_id, lhs, rhs);
                }
            }
        }
        sys.relations = ordered;
        sys
    }

    fn push_rule(&mut self, relation: usize, lhs: Vec<Code>, rhs: Vec<Code>) {
        let id = self.rules.len();
        self.max_side = self.max_side.max(lhs.len()).max(rhs.len());
        self.index
            .entry(lhs.clone())
            .or_default()
            .push((id, Direction::Forward));
        if !rhs.is_empty() {
            self.index
                .entry(rhs.clone())
                .or_default()
                .push((id, Direction::Backward));
        }
        self.rules.push(Rule {
            id,
            relation,
            lhs: lhs.iter().copied().map(decode).collect(),
            rhs: rhs.iter().copied().map(decode).collect(),
        });
        self.rule_codes.push((lhs, rhs));
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn sides(&self, step: &RewriteStep) -> (&[Code], &[Code]) {
        let (lhs, rhs) = &self.rule_codes[step.rule];
        match step.direction {
            Direction::Forward => (lhs, rhs),
            Direction::Backward => (rhs, lhs),
        }
    }

    fn apply_codes(&self, word: &[Code], step: &RewriteStep) -> Option<Vec<Code>> {
        if step.rule >= self.rules.len() {
            return None;
        }
        let (from, to) = self.sides(step);
        let end = step.position.checked_add(from.len())?;
        if end > word.len() || &word[step.position..end] != from {
            return None;
        }
        let mut out = Vec::with_capacity(word.len() - from.len() + to.len());
        out.extend_from_slice(&word[..step.position]);
        out.extend_from_slice(to);
        out.extend_from_slice(&word[end..]);
        Some(out)
    }

    /// Applies one step to a word.
    pub fn apply(&self, word: &Word, step: &RewriteStep) -> Result<Word> {
        if word.strands() != self.n {
            return Err(Error::StrandMismatch(word.strands(), self.n));
        }
        let codes = self
            .apply_codes(&encode_word(word), step)
            .ok_or_else(|| Error::MoveMismatch(format!("step {step} on `{word}`")))?;
        Ok(Word::from_trusted(
            self.n,
            codes.into_iter().map(decode).collect(),
        ))
    }

    /// Replays a witness, returning the final word.
    pub fn replay(&self, start: &Word, steps: &[RewriteStep]) -> Result<Word> {
        steps
            .iter()
            .try_fold(start.clone(), |w, s| self.apply(&w, s))
    }

    /// Free reduction, recorded as cancellation steps.
    fn reduce_recorded(&self, word: &[Code], steps: &mut Vec<RewriteStep>) -> Vec<Code> {
        let mut stack: Vec<Code> = Vec::with_capacity(word.len());
        for &c in word {
            if stack.last() == Some(&c) {
                steps.push(RewriteStep {
                    rule: self.square_rule[&c],
                    position: stack.len() - 1,
                    direction: Direction::Forward,
                });
                stack.pop();
            } else {
                stack.push(c);
            }
        }
        stack
    }

    /// All free-reduced neighbours of a free-reduced word, each with the steps
    /// that produce it.
    fn neighbours(&self, word: &[Code], max_len: usize) -> Vec<(Vec<Code>, Vec<RewriteStep>)> {
        let mut out = Vec::new();
        for position in 0..word.len() {
            for len in 1..=self.max_side.min(word.len() - position) {
                let Some(entries) = self.index.get(&word[position..position + len]) else {
                    continue;
                };
                for &(rule, direction) in entries {
                    let step = RewriteStep {
                        rule,
                        position,
                        direction,
                    };
                    let (from, to) = self.sides(&step);
                    if word.len() - from.len() + to.len() > max_len + 2 {
                        continue;
                    }
                    let replaced = self.apply_codes(word, &step).expect("matched side");
                    let mut steps = vec![step];
                    let reduced = self.reduce_recorded(&replaced, &mut steps);
                    if reduced.len() <= max_len {
                        out.push((reduced, steps));
                    }
                }
            }
        }
        out
    }
}

/// Limits shared by the searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Visited-node cap of the rewriting search.
    pub nodes: usize,
    /// Words may grow this much beyond the longer input.
    pub extra_length: usize,
    /// Largest permutation degree tried by the quotient search.
    pub max_degree: usize,
    /// Partial-assignment cap of the quotient search.
    pub quotient_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: 200_000,
            extra_length: 6,
            max_degree: 5,
            quotient_nodes: 200_000,
        }
    }
}

impl Budget {
    pub fn with_nodes(nodes: usize) -> Self {
        Budget {
            nodes,
            quotient_nodes: nodes,
            ..Budget::default()
        }
    }
}

/// A replayable chain of rewrite steps from one word to another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewritePath {
    pub steps: Vec<RewriteStep>,
}

impl RewritePath {
    /// Checks the path against a freshly built rewrite system.
    pub fn verify(&self, w1: &Word, w2: &Word) -> bool {
        let sys = RewriteSystem::new(w1.strands());
        self.verify_with(&sys, w1, w2)
    }

    pub fn verify_with(&self, sys: &RewriteSystem, w1: &Word, w2: &Word) -> bool {
        matches!(sys.replay(w1, &self.steps), Ok(end) if &end == w2)
    }
}

impl fmt::Display for RewritePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Equal(RewritePath),
    Unknown,
}

/// Parent word and the steps from it.
type Parent = Option<(Vec<Code>, Vec<RewriteStep>)>;

struct Side {
    seen: HashMap<Vec<Code>, Parent>,
    frontier: Vec<Vec<Code>>,
}

impl Side {
    fn new(start: Vec<Code>) -> Self {
        let mut seen = HashMap::new();
        seen.insert(start.clone(), None);
        Side {
            seen,
            frontier: vec![start],
        }
    }

    /// Steps from the side's root to `word`.
    fn path_to(&self, word: &[Code]) -> Vec<RewriteStep> {
        let mut chunks = Vec::new();
        let mut cur = word.to_vec();
        while let Some(Some((parent, steps))) = self.seen.get(&cur) {
            chunks.push(steps.clone());
            cur = parent.clone();
        }
        chunks.into_iter().rev().flatten().collect()
    }
}

fn invert_steps(steps: &[RewriteStep]) -> Vec<RewriteStep> {
    steps.iter().rev().map(RewriteStep::inverse).collect()
}

/// Bidirectional breadth-first search over free-reduced words.
///
/// Frontiers are expanded a whole level at a time in lexicographic order,
/// always on the smaller side, so results are deterministic for a fixed
/// budget.
pub fn relation_bfs_equal(w1: &Word, w2: &Word, budget: &Budget) -> Result<SearchResult> {
    if w1.strands() != w2.strands() {
        return Err(Error::StrandMismatch(w1.strands(), w2.strands()));
    }
    if w1.strands() > MAX_SEARCH_STRANDS {
        return Err(Error::TooManyStrands {
            n: w1.strands(),
            max: MAX_SEARCH_STRANDS,
        });
    }
    let sys = RewriteSystem::new(w1.strands());
    Ok(relation_bfs_with(&sys, w1, w2, budget))
}

pub fn relation_bfs_with(
    sys: &RewriteSystem,
    w1: &Word,
    w2: &Word,
    budget: &Budget,
) -> SearchResult {
    let mut head = Vec::new();
    let start1 = sys.reduce_recorded(&encode_word(w1), &mut head);
    let mut tail = Vec::new();
    let start2 = sys.reduce_recorded(&encode_word(w2), &mut tail);
    let tail = invert_steps(&tail);

    let finish = |middle: Vec<RewriteStep>| {
        let mut steps = head.clone();
        steps.extend(middle);
        steps.extend(tail.iter().copied());
        SearchResult::Equal(RewritePath { steps })
    };

    if start1 == start2 {
        return finish(Vec::new());
    }
    if budget.nodes == 0 {
        return SearchResult::Unknown;
    }
    let max_len = w1.len().max(w2.len()) + budget.extra_length;
    let mut sides = [Side::new(start1), Side::new(start2)];
    let mut visited = 2;

    loop {
        let (a, b) = (sides[0].frontier.len(), sides[1].frontier.len());
        let which = usize::from(a == 0 || (b != 0 && a > b));
        if sides[which].frontier.is_empty() {
            return SearchResult::Unknown;
        }
        let mut frontier = std::mem::take(&mut sides[which].frontier);
        frontier.sort_unstable();
        let mut next = Vec::new();
        for word in frontier {
            for (nb, steps) in sys.neighbours(&word, max_len) {
                if sides[which].seen.contains_key(&nb) {
                    continue;
                }
                sides[which]
                    .seen
                    .insert(nb.clone(), Some((word.clone(), steps)));
                if sides[1 - which].seen.contains_key(&nb) {
                    let mut middle = sides[0].path_to(&nb);
                    middle.extend(invert_steps(&sides[1].path_to(&nb)));
                    return finish(middle);
                }
                visited += 1;
                if visited >= budget.nodes {
                    return SearchResult::Unknown;
                }
                next.push(nb);
            }
        }
        sides[which].frontier = next;
    }
}

/// A homomorphism from `TVT_n` into the symmetric group of degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientHom {
    pub n: usize,
    pub degree: usize,
    /// Images of `s_1 … s_{n-1}`.
    pub s: Vec<Permutation>,
    /// Images of `r_1 … r_{n-1}`.
    pub r: Vec<Permutation>,
    /// Images of `g_1 … g_n`.
    pub g: Vec<Permutation>,
}

impl QuotientHom {
    pub fn image_of(&self, letter: &Letter) -> &Permutation {
        let i = letter.index - 1;
        match letter.kind {
            LetterKind::S => &self.s[i],
            LetterKind::R => &self.r[i],
            LetterKind::G => &self.g[i],
        }
    }

    pub fn eval(&self, w: &Word) -> Permutation {
        w.letters()
            .iter()
            .fold(Permutation::identity(self.degree), |acc, l| {
                acc.then(self.image_of(l))
            })
    }

    /// True when every defining relation (and the derived one) holds.
    pub fn respects_relations(&self) -> bool {
        if self.s.len() + 1 != self.n.max(1)
            || self.r.len() != self.s.len()
            || self.g.len() != self.n
        {
            return false;
        }
        let all_deg = self
            .s
            .iter()
            .chain(&self.r)
            .chain(&self.g)
            .all(|p| p.degree() == self.degree);
        all_deg
            && relation_instances(self.n)
                .iter()
                .chain(&family_instances(Family::BarSlideMirror, self.n))
                .all(|rel| self.eval(&rel.lhs) == self.eval(&rel.rhs))
    }

    /// The permutation image `s_i, r_i ↦ (i i+1)`, `g_j ↦ 1`.
    pub fn permutation_image(n: usize) -> Self {
        let t: Vec<Permutation> = (1..n).map(|i| Permutation::adjacent(n, i)).collect();
        QuotientHom {
            n,
            degree: n,
            s: t.clone(),
            r: t,
            g: vec![Permutation::identity(n); n],
        }
    }

    /// Abelianization `Z2^3`, realised on six points.
    pub fn abelianization(n: usize) -> Self {
        let swap = |a: usize| {
            let mut images: Vec<usize> = (1..=6).collect();
            images.swap(a, a + 1);
            Permutation::from_images(&images).expect("valid")
        };
        QuotientHom {
            n,
            degree: 6,
            s: vec![swap(0); n.saturating_sub(1)],
            r: vec![swap(2); n.saturating_sub(1)],
            g: vec![swap(4); n],
        }
    }
}

impl fmt::Display for QuotientHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {}", self.degree)?;
        for (name, perms) in [("s", &self.s), ("r", &self.r), ("g", &self.g)] {
            for (i, p) in perms.iter().enumerate() {
                write!(f, "; {name}{} -> [{p}]", i + 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationResult {
    Distinct(QuotientHom),
    Unknown,
}

/// All involutions of `{0..k}` including the identity, as zero-based images.
fn involutions(k: usize) -> Vec<Vec<usize>> {
    fn rec(images: &mut Vec<usize>, used: &mut Vec<bool>, start: usize, out: &mut Vec<Vec<usize>>) {
        let k = images.len();
        let Some(x) = (start..k).find(|&x| !used[x]) else {
            out.push(images.clone());
            return;
        };
        used[x] = true;
        images[x] = x;
        rec(images, used, x + 1, out);
        for y in x + 1..k {
            if !used[y] {
                used[y] = true;
                images[x] = y;
                images[y] = x;
                rec(images, used, x + 1, out);
                used[y] = false;
            }
        }
        used[x] = false;
    }
    let mut out = Vec::new();
    rec(&mut (0..k).collect(), &mut vec![false; k], 0, &mut out);
    out
}

/// Backtracking search for a separating homomorphism of degree `k`.
struct QuotientSearch<'a> {
    n: usize,
    k: usize,
    gens: Vec<Letter>,
    /// Relations to check once generator `t` is assigned.
    checks: Vec<Vec<&'a Relation>>,
    candidates: Vec<Vec<Vec<usize>>>,
    assigned: Vec<Vec<usize>>,
    w1: &'a Word,
    w2: &'a Word,
    nodes: usize,
    limit: usize,
}

impl<'a> QuotientSearch<'a> {
    fn position(&self, l: &Letter) -> usize {
        self.gens.iter().position(|g| g == l).expect("generator")
    }

    fn eval_codes(&self, w: &Word) -> Vec<usize> {
        let mut cur: Vec<usize> = (0..self.k).collect();
        for l in w.letters() {
            let img = &self.assigned[self.position(l)];
            for x in cur.iter_mut() {
                *x = img[*x];
            }
        }
        cur
    }

    fn run(&mut self, t: usize) -> Option<QuotientHom> {
        if t == self.gens.len() {
            if self.eval_codes(self.w1) != self.eval_codes(self.w2) {
                return Some(self.to_hom());
            }
            return None;
        }
        for c in 0..self.candidates[t].len() {
            self.nodes += 1;
            if self.nodes > self.limit {
                return None;
            }
            self.assigned.push(self.candidates[t][c].clone());
            let ok = self.checks[t]
                .iter()
                .all(|rel| self.eval_codes(&rel.lhs) == self.eval_codes(&rel.rhs));
            if ok {
                if let Some(hom) = self.run(t + 1) {
                    return Some(hom);
                }
            }
            self.assigned.pop();
        }
        None
    }

    fn to_hom(&self) -> QuotientHom {
        let mut hom = QuotientHom {
            n: self.n,
            degree: self.k,
            s: vec![Permutation::identity(self.k); self.n - 1],
            r: vec![Permutation::identity(self.k); self.n - 1],
            g: vec![Permutation::identity(self.k); self.n],
        };
        for (gen, img) in self.gens.iter().zip(&self.assigned) {
            let p = Permutation::from_zero_based(img.clone());
            let i = gen.index - 1;
            match gen.kind {
                LetterKind::S => hom.s[i] = p,
                LetterKind::R => hom.r[i] = p,
                LetterKind::G => hom.g[i] = p,
            }
        }
        hom
    }
}

/// Looks for a finite quotient separating `w1` from `w2`.
///
/// The permutation image and the abelianization are tried first; then
/// homomorphisms into `S_k`, `k = 2..=max_degree`, are enumerated with every
/// generator sent to an involution or the identity.
pub fn quotient_separate(w1: &Word, w2: &Word, budget: &Budget) -> Result<SeparationResult> {
    if w1.strands() != w2.strands() {
        return Err(Error::StrandMismatch(w1.strands(), w2.strands()));
    }
    let n = w1.strands();
    for hom in [
        QuotientHom::permutation_image(n),
        QuotientHom::abelianization(n),
    ] {
        if hom.eval(w1) != hom.eval(w2) {
            debug_assert!(hom.respects_relations());
            return Ok(SeparationResult::Distinct(hom));
        }
    }

    // r_1, g_1, s_1, g_2, r_2, s_2, … so that relations close early
    let mut gens = Vec::new();
    gens.push(Letter::g(1));
    for i in 1..n {
        gens.push(Letter::r(i));
        gens.push(Letter::g(i + 1));
        gens.push(Letter::s(i));
    }
    let mut relations = relation_instances(n);
    relations.extend(family_instances(Family::BarSlideMirror, n));

    let mut spent = 0;
    for k in 2..=budget.max_degree {
        let all = involutions(k);
        let position = |l: &Letter| gens.iter().position(|g| g == l).expect("generator");
        let mut checks: Vec<Vec<&Relation>> = vec![Vec::new(); gens.len()];
        for rel in &relations {
            let last = rel
                .lhs
                .letters()
                .iter()
                .chain(rel.rhs.letters())
                .map(position)
                .max()
                .expect("non-empty relation");
            checks[last].push(rel);
        }
        // the first generator only needs one representative per cycle type
        let mut candidates = vec![all.clone(); gens.len()];
        candidates[0] = (0..=k / 2)
            .map(|m| {
                let mut img: Vec<usize> = (0..k).collect();
                for t in 0..m {
                    img.swap(2 * t, 2 * t + 1);
                }
                img
            })
            .collect();
        let mut search = QuotientSearch {
            n,
            k,
            gens: gens.clone(),
            checks,
            candidates,
            assigned: Vec::new(),
            w1,
            w2,
            nodes: 0,
            limit: budget.quotient_nodes.saturating_sub(spent),
        };
        let found = search.run(0);
        spent += search.nodes;
        if let Some(hom) = found {
            debug_assert!(hom.respects_relations());
            return Ok(SeparationResult::Distinct(hom));
        }
        if spent >= budget.quotient_nodes {
            break;
        }
    }
    Ok(SeparationResult::Unknown)
}

const SMALL_QUOTIENT_NODES: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal(RewritePath),
    Distinct(QuotientHom),
    Unknown,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equal(_) => "equal",
            Verdict::Distinct(_) => "distinct",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Runs the quotients up to degree 4, then the rewriting search, then the
/// full quotient search. The rewriting search is skipped above
/// [`MAX_SEARCH_STRANDS`] strands. Certificates are checked before they are returned.
/// A zero node budget does no work at all.
pub fn decide_equal(w1: &Word, w2: &Word, budget: &Budget) -> Result<Verdict> {
    if w1.strands() != w2.strands() {
        return Err(Error::StrandMismatch(w1.strands(), w2.strands()));
    }
    if budget.nodes == 0 {
        return Ok(Verdict::Unknown);
    }
    let n = w1.strands();
    let small = Budget {
        max_degree: budget.max_degree.min(4),
        quotient_nodes: budget.quotient_nodes.min(SMALL_QUOTIENT_NODES),
        ..*budget
    };
    if let SeparationResult::Distinct(hom) = quotient_separate(w1, w2, &small)? {
        assert!(
            hom.respects_relations(),
            "quotient certificate breaks a relation"
        );
        return Ok(Verdict::Distinct(hom));
    }
    if n <= MAX_SEARCH_STRANDS {
        let sys = RewriteSystem::new(n);
        if let SearchResult::Equal(path) = relation_bfs_with(&sys, w1, w2, budget) {
            assert!(
                path.verify_with(&sys, w1, w2),
                "rewrite witness failed to replay"
            );
            return Ok(Verdict::Equal(path));
        }
    }
    if let SeparationResult::Distinct(hom) = quotient_separate(w1, w2, budget)? {
        assert!(
            hom.respects_relations(),
            "quotient certificate breaks a relation"
        );
        return Ok(Verdict::Distinct(hom));
    }
    Ok(Verdict::Unknown)
}

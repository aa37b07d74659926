//! Pure generators `λ_{k,l}` and `γ_j`, the transversal of ρ-words, and the
//! rewriting of pure words over `{s, r, g}` into the pure generators.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, LetterKind, Permutation, Word};

/// One letter of a word in the pure generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PureLetter {
    /// `λ_{k,l}` (or its inverse), `k < l`.
    Lambda { k: usize, l: usize, inverse: bool },
    /// `γ_j`, an involution.
    Gamma(usize),
}

impl PureLetter {
    /// `λ_{a,b}` for any distinct `a`, `b`, using `λ_{b,a} = λ_{a,b}^{-1}`.
    pub fn lambda_ordered(a: usize, b: usize, inverse: bool) -> PureLetter {
        debug_assert_ne!(a, b);
        if a < b {
            PureLetter::Lambda {
                k: a,
                l: b,
                inverse,
            }
        } else {
            PureLetter::Lambda {
                k: b,
                l: a,
                inverse: !inverse,
            }
        }
    }

    pub fn lambda(k: usize, l: usize) -> PureLetter {
        Self::lambda_ordered(k, l, false)
    }

    pub fn in_bounds(&self, n: usize) -> bool {
        match *self {
            PureLetter::Lambda { k, l, .. } => 1 <= k && k < l && l <= n,
            PureLetter::Gamma(j) => 1 <= j && j <= n,
        }
    }

    pub fn inverse(&self) -> PureLetter {
        match *self {
            PureLetter::Lambda { k, l, inverse } => PureLetter::Lambda {
                k,
                l,
                inverse: !inverse,
            },
            gamma => gamma,
        }
    }

    /// Conjugation `r_i · x · r_i`.
    pub fn act_by_rho(&self, i: usize) -> PureLetter {
        let t = |x: usize| {
            if x == i {
                i + 1
            } else if x == i + 1 {
                i
            } else {
                x
            }
        };
        self.relabel(t)
    }

    /// Conjugation `μ · x · μ^{-1}` where `μ` is any ρ-word whose permutation
    /// image is `sigma`.
    ///
    /// Strand `a` of `x` is renamed to `sigma^{-1}(a)`: conjugating by a single
    /// `r_i` applies `(i i+1)`, and a ρ-word acts by its last letter first.
    pub fn act(&self, sigma: &Permutation) -> PureLetter {
        let inv = sigma.inverse();
        self.relabel(|x| inv.image(x))
    }

    fn relabel(&self, f: impl Fn(usize) -> usize) -> PureLetter {
        match *self {
            PureLetter::Lambda { k, l, inverse } => Self::lambda_ordered(f(k), f(l), inverse),
            PureLetter::Gamma(j) => PureLetter::Gamma(f(j)),
        }
    }

    /// The defining `{s, r, g}` spelling.
    pub fn expand(&self, n: usize) -> Word {
        match *self {
            PureLetter::Lambda { k, l, inverse } => {
                let w = lambda_word(k, l, n).expect("letter in bounds");
                if inverse {
                    w.invert()
                } else {
                    w
                }
            }
            PureLetter::Gamma(j) => Word::from_trusted(n, vec![Letter::g(j)]),
        }
    }
}

impl fmt::Display for PureLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PureLetter::Lambda { k, l, inverse } => {
                write!(f, "L{{{k},{l}}}")?;
                if inverse {
                    f.write_str("^-1")?;
                }
                Ok(())
            }
            PureLetter::Gamma(j) => write!(f, "g{j}"),
        }
    }
}

/// Parses a `L{k,l}` pair body and optional `^-1`; shared with the H-letter grammar.
pub(crate) fn parse_pair_token(token: &str) -> Option<(usize, usize, &str)> {
    let body = token.strip_prefix("L{")?;
    let close = body.find('}')?;
    let (k, l) = body[..close].split_once(',')?;
    let k = k.trim().parse().ok()?;
    let l = l.trim().parse().ok()?;
    Some((k, l, &body[close + 1..]))
}

/// A word in the pure generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureWord {
    n: usize,
    letters: Vec<PureLetter>,
}

impl PureWord {
    pub fn new(n: usize, letters: Vec<PureLetter>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoStrands);
        }
        for (position, letter) in letters.iter().enumerate() {
            if !letter.in_bounds(n) {
                let (a, b) = match *letter {
                    PureLetter::Lambda { k, l, .. } => (k, l),
                    PureLetter::Gamma(j) => (j, j),
                };
                return Err(Error::IndexOutOfRange {
                    position,
                    token: letter.to_string(),
                    index: a.max(b),
                    n,
                });
            }
        }
        Ok(PureWord { n, letters })
    }

    pub(crate) fn from_trusted(n: usize, letters: Vec<PureLetter>) -> Self {
        PureWord { n, letters }
    }

    /// Parses `L{k,l}`, `L{k,l}^-1` and `g<j>` tokens.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoStrands);
        }
        let mut letters = Vec::new();
        for (position, token) in text.split_whitespace().enumerate() {
            let malformed = || Error::MalformedToken {
                position,
                token: token.to_string(),
            };
            let letter = if token.starts_with('g') {
                let g = crate::word::parse_letter(token, n, position)?;
                PureLetter::Gamma(g.index)
            } else {
                let (k, l, rest) = parse_pair_token(token).ok_or_else(malformed)?;
                let inverse = match rest {
                    "" => false,
                    "^-1" => true,
                    _ => return Err(malformed()),
                };
                if !(1 <= k && k < l && l <= n) {
                    return Err(Error::IndexOutOfRange {
                        position,
                        token: token.to_string(),
                        index: l.max(k),
                        n,
                    });
                }
                PureLetter::Lambda { k, l, inverse }
            };
            letters.push(letter);
        }
        Ok(PureWord { n, letters })
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[PureLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &PureWord) -> Result<PureWord> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(PureWord { n: self.n, letters })
    }

    pub fn invert(&self) -> PureWord {
        PureWord {
            n: self.n,
            letters: self.letters.iter().rev().map(PureLetter::inverse).collect(),
        }
    }
}

impl fmt::Display for PureWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for letter in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// Spelling of `λ_{i,j}`: `s_i r_i` when `j = i + 1`, otherwise
/// `r_{j-1} … r_{i+1} s_i r_i r_{i+1} … r_{j-1}`.
pub fn lambda_word(i: usize, j: usize, n: usize) -> Result<Word> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::BadPair(i, j, n));
    }
    let mut letters = Vec::with_capacity(2 * (j - i));
    letters.extend((i + 1..j).rev().map(Letter::r));
    letters.push(Letter::s(i));
    letters.extend((i..j).map(Letter::r));
    Ok(Word::from_trusted(n, letters))
}

/// Element of the transversal: a product of descending runs
/// `m_{k,i_k} = r_k r_{k-1} … r_{i_k+1}` for `k = 1..n-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchreierRep {
    word: Word,
    /// `i_k` for `k = 1..n-1`; run `k` is empty when `i_k = k`.
    run_stops: Vec<usize>,
}

impl SchreierRep {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn into_word(self) -> Word {
        self.word
    }

    pub fn run_stops(&self) -> &[usize] {
        &self.run_stops
    }

    /// Builds the representative from its run stops `0 <= i_k <= k`.
    pub fn from_run_stops(n: usize, run_stops: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoStrands);
        }
        if run_stops.len() != n - 1 || run_stops.iter().enumerate().any(|(k, &i)| i > k + 1) {
            return Err(Error::BadPermutation(format!("run stops {run_stops:?}")));
        }
        let mut letters = Vec::new();
        for (k0, &stop) in run_stops.iter().enumerate() {
            let k = k0 + 1;
            letters.extend((stop + 1..=k).rev().map(Letter::r));
        }
        Ok(SchreierRep {
            word: Word::from_trusted(n, letters),
            run_stops: run_stops.to_vec(),
        })
    }
}

/// The transversal element whose permutation image is `sigma`.
///
/// The last run `m_{n-1,i}` carries whatever sits at position `n` down to
/// position `i + 1`, and the earlier runs never touch position `n`, so
/// `i = sigma(n) - 1`. Removing that run leaves a permutation of `n - 1`
/// points, handled the same way.
pub fn schreier_rep(sigma: &Permutation) -> SchreierRep {
    let n = sigma.degree();
    let mut current: Vec<usize> = sigma.one_line();
    let mut stops = vec![0; n.saturating_sub(1)];
    for m in (2..=n).rev() {
        let target = current[m - 1];
        stops[m - 2] = target - 1;
        current.truncate(m - 1);
        for x in current.iter_mut() {
            if *x > target {
                *x -= 1;
            }
        }
    }
    SchreierRep::from_run_stops(n.max(1), &stops).expect("stops in range")
}

/// Every transversal element for `n` strands, in run-stop lexicographic order.
pub fn enumerate_transversal(n: usize) -> Vec<SchreierRep> {
    let mut out = Vec::new();
    let mut stops = vec![0usize; n.saturating_sub(1)];
    loop {
        out.push(SchreierRep::from_run_stops(n, &stops).expect("valid stops"));
        // odometer with digit k ranging over 0..=k+1
        let mut k = stops.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if stops[k] < k + 1 {
                stops[k] += 1;
                break;
            }
            stops[k] = 0;
        }
    }
}

/// Target of the S_n-action: a single `r_i` or a whole permutation.
#[derive(Debug, Clone)]
pub enum Actor<'a> {
    Rho(usize),
    Perm(&'a Permutation),
}

pub fn sn_action(actor: Actor<'_>, x: &PureLetter) -> PureLetter {
    match actor {
        Actor::Rho(i) => x.act_by_rho(i),
        Actor::Perm(sigma) => x.act(sigma),
    }
}

/// Rewrites a pure word into the pure generators.
///
/// A single left-to-right scan tracks which original strand sits at each
/// position (the running coset representative). `r_i` emits nothing, `s_i`
/// emits `λ` between the strands at positions `i` and `i + 1`, and `g_j` emits
/// `γ` of the strand at position `j`. Input letters are involutions, so only
/// the positive-exponent case of the rewriting occurs.
pub fn rewrite_pure(w: &Word) -> Result<PureWord> {
    if !w.is_pure() {
        return Err(Error::NotPure(w.perm_image().to_string()));
    }
    Ok(rewrite_prefix_scan(w))
}

pub(crate) fn rewrite_prefix_scan(w: &Word) -> PureWord {
    let n = w.strands();
    let mut at: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for letter in w.letters() {
        let i = letter.index;
        match letter.kind {
            LetterKind::R => at.swap(i - 1, i),
            LetterKind::S => {
                out.push(PureLetter::lambda_ordered(at[i - 1], at[i], false));
                at.swap(i - 1, i);
            }
            LetterKind::G => out.push(PureLetter::Gamma(at[i - 1])),
        }
    }
    PureWord::from_trusted(n, out)
}

/// Expands a pure word back into `{s, r, g}` letters.
pub fn eval_pure(p: &PureWord) -> Word {
    let mut letters = Vec::new();
    for letter in p.letters() {
        letters.extend_from_slice(letter.expand(p.strands()).letters());
    }
    Word::from_trusted(p.strands(), letters)
}

//! Words over the generators `s_i`, `r_i` (virtual) and `g_j` (bar) of the
//! twisted virtual twin group on `n` strands.
//!
//! Every generator is an involution, so a word carries no exponents and its
//! inverse is its reversal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LetterKind {
    /// Real crossing `s_i`.
    S,
    /// Virtual crossing `r_i`.
    R,
    /// Bar `g_j`.
    G,
}

impl LetterKind {
    fn prefix(self) -> char {
        match self {
            LetterKind::S => 's',
            LetterKind::R => 'r',
            LetterKind::G => 'g',
        }
    }

    /// Largest legal index for this kind on `n` strands.
    pub fn max_index(self, n: usize) -> usize {
        match self {
            LetterKind::S | LetterKind::R => n.saturating_sub(1),
            LetterKind::G => n,
        }
    }
}

/// A single generator. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub kind: LetterKind,
    pub index: usize,
}

impl Letter {
    pub const fn s(index: usize) -> Self {
        Letter {
            kind: LetterKind::S,
            index,
        }
    }

    pub const fn r(index: usize) -> Self {
        Letter {
            kind: LetterKind::R,
            index,
        }
    }

    pub const fn g(index: usize) -> Self {
        Letter {
            kind: LetterKind::G,
            index,
        }
    }

    pub fn in_bounds(&self, n: usize) -> bool {
        self.index >= 1 && self.index <= self.kind.max_index(n)
    }

    /// Strands (1-based positions) this letter touches.
    pub fn touches(&self, strand: usize) -> bool {
        match self.kind {
            LetterKind::S | LetterKind::R => strand == self.index || strand == self.index + 1,
            LetterKind::G => strand == self.index,
        }
    }

    /// Same letter with its index moved by `offset`.
    pub fn shifted(&self, offset: isize) -> Letter {
        Letter {
            kind: self.kind,
            index: (self.index as isize + offset) as usize,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.index)
    }
}

/// Parses one `s<k>` / `r<k>` / `g<k>` token. `position` is only used in errors.
pub(crate) fn parse_letter(token: &str, n: usize, position: usize) -> Result<Letter> {
    let malformed = || Error::MalformedToken {
        position,
        token: token.to_string(),
    };
    let mut chars = token.chars();
    let kind = match chars.next() {
        Some('s') => LetterKind::S,
        Some('r') => LetterKind::R,
        Some('g') => LetterKind::G,
        _ => return Err(malformed()),
    };
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let index: usize = digits.parse().map_err(|_| malformed())?;
    let letter = Letter { kind, index };
    if !letter.in_bounds(n) {
        return Err(Error::IndexOutOfRange {
            position,
            token: token.to_string(),
            index,
            n,
        });
    }
    Ok(letter)
}

/// Element of the symmetric group on `{1..n}`.
///
/// `image(x)` is the bottom position reached by the strand that starts at top
/// position `x`. Products are read left to right: `a.then(&b)` applies `a`
/// first, matching the order of letters in a word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The transposition `(i i+1)`, 1-based.
    pub fn adjacent(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    /// Builds a permutation from a 1-based one-line image list.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::BadPermutation(format!("{images:?}")));
            }
            seen[x - 1] = true;
            zero_based.push(x - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x)
        });
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn image(&self, x: usize) -> usize {
        self.images[x - 1] + 1
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        cycles
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.images {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", x + 1)?;
        }
        Ok(())
    }
}

/// Image of a word in `Z2^3`: parities of the numbers of `s`, `r` and `g` letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianImage {
    pub s: bool,
    pub r: bool,
    pub g: bool,
}

impl AbelianImage {
    pub fn bits(&self) -> (u8, u8, u8) {
        (self.s as u8, self.r as u8, self.g as u8)
    }
}

impl fmt::Display for AbelianImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, r, g) = self.bits();
        write!(f, "{s} {r} {g}")
    }
}

/// A word on a fixed number of strands.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    n: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoStrands);
        }
        for (position, letter) in letters.iter().enumerate() {
            if !letter.in_bounds(n) {
                return Err(Error::IndexOutOfRange {
                    position,
                    token: letter.to_string(),
                    index: letter.index,
                    n,
                });
            }
        }
        Ok(Word { n, letters })
    }

    /// Constructor for callers that already guarantee the bounds.
    pub(crate) fn from_trusted(n: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(n >= 1 && letters.iter().all(|l| l.in_bounds(n)));
        Word { n, letters }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "strand count must be at least 1");
        Word {
            n,
            letters: Vec::new(),
        }
    }

    /// Parses whitespace-separated `s<k>`, `r<k>`, `g<k>` tokens.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoStrands);
        }
        let letters = text
            .split_whitespace()
            .enumerate()
            .map(|(position, token)| parse_letter(token, n, position))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { n, letters })
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }

    /// Removes adjacent equal letters until none remain.
    pub fn free_reduce(&self) -> Word {
        Word {
            n: self.n,
            letters: free_reduce_letters(&self.letters),
        }
    }

    pub fn invert(&self) -> Word {
        Word {
            n: self.n,
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn perm_image(&self) -> Permutation {
        // at[p] = strand currently at position p
        let mut at: Vec<usize> = (0..self.n).collect();
        for letter in &self.letters {
            if letter.kind != LetterKind::G {
                at.swap(letter.index - 1, letter.index);
            }
        }
        Permutation::from_zero_based(at).inverse()
    }

    pub fn abelianize(&self) -> AbelianImage {
        let mut image = AbelianImage::default();
        for letter in &self.letters {
            match letter.kind {
                LetterKind::S => image.s = !image.s,
                LetterKind::R => image.r = !image.r,
                LetterKind::G => image.g = !image.g,
            }
        }
        image
    }

    pub fn is_pure(&self) -> bool {
        self.perm_image().is_identity()
    }

    /// True when no letter touches the given 1-based strand.
    pub fn avoids_strand(&self, strand: usize) -> bool {
        self.letters.iter().all(|l| !l.touches(strand))
    }
}

pub(crate) fn free_reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &letter in letters {
        if out.last() == Some(&letter) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    out
}

impl fmt::Display for Word {
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

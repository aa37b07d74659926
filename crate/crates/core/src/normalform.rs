//! Normal forms through `TVT_n ≅ (H_n ⋊ Z2^n) ⋊ S_n`.
//!
//! A word `w` is written as `eval(h) · γ^ε · m(σ)` where `σ` is its permutation
//! image, `m(σ)` the transversal element of [`schreier_rep`], `ε` a vector of
//! bar parities and `h` a word in the right-angled Artin group `H_n`.
//!
//! `H_n` is written over two letters per pair `i < j`: the plain `λ_{i,j}` and
//! the decorated `λ_{i,j}^{γ_i} = γ_i λ_{i,j} γ_i`. The third conjugate
//! `γ_j λ_{i,j} γ_j` equals `(λ_{i,j}^{γ_i})^{-1}` and is never stored. Two
//! letters commute exactly when their index pairs are disjoint.
//!
//! Canonical `H_n` words are the lexicographically least reduced spelling,
//! where letters are ordered by `(i, j, decorated, inverse)` with plain before
//! decorated and positive before inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schreier::{
    eval_pure, parse_pair_token, rewrite_pure, schreier_rep, PureLetter, PureWord,
};
use crate::word::{Letter, LetterKind, Permutation, Word};

/// A letter of `H_n`: `λ_{i,j}` or `λ_{i,j}^{γ_i}`, possibly inverted.
///
/// Field order gives the pinned total order used for canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HLetter {
    pub i: usize,
    pub j: usize,
    pub decorated: bool,
    pub inverse: bool,
}

impl HLetter {
    pub fn plain(i: usize, j: usize) -> Self {
        HLetter {
            i,
            j,
            decorated: false,
            inverse: false,
        }
    }

    pub fn decorated(i: usize, j: usize) -> Self {
        HLetter {
            i,
            j,
            decorated: true,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        HLetter {
            inverse: !self.inverse,
            ..self
        }
    }

    pub fn commutes_with(&self, other: &HLetter) -> bool {
        self.i != other.i && self.i != other.j && self.j != other.i && self.j != other.j
    }

    /// The pure-generator spelling of this letter.
    pub fn to_pure(&self) -> Vec<PureLetter> {
        let lambda = PureLetter::Lambda {
            k: self.i,
            l: self.j,
            inverse: self.inverse,
        };
        if self.decorated {
            vec![PureLetter::Gamma(self.i), lambda, PureLetter::Gamma(self.i)]
        } else {
            vec![lambda]
        }
    }
}

impl fmt::Display for HLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{{{},{}}}", self.i, self.j)?;
        if self.decorated {
            f.write_str("'")?;
        }
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// `γ_k · x · γ_k`.
pub fn gamma_conj(k: usize, x: &HLetter) -> HLetter {
    if k == x.i {
        HLetter {
            decorated: !x.decorated,
            ..*x
        }
    } else if k == x.j {
        HLetter {
            decorated: !x.decorated,
            inverse: !x.inverse,
            ..*x
        }
    } else {
        *x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HWord {
    n: usize,
    letters: Vec<HLetter>,
}

impl HWord {
    pub fn new(n: usize, letters: Vec<HLetter>) -> Result<Self> {
        for (position, x) in letters.iter().enumerate() {
            if !(1 <= x.i && x.i < x.j && x.j <= n) {
                return Err(Error::IndexOutOfRange {
                    position,
                    token: x.to_string(),
                    index: x.j,
                    n,
                });
            }
        }
        Ok(HWord { n, letters })
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for (position, token) in text.split_whitespace().enumerate() {
            let malformed = || Error::MalformedToken {
                position,
                token: token.to_string(),
            };
            let (i, j, mut rest) = parse_pair_token(token).ok_or_else(malformed)?;
            let decorated = rest.starts_with('\'');
            if decorated {
                rest = &rest[1..];
            }
            let inverse = match rest {
                "" => false,
                "^-1" => true,
                _ => return Err(malformed()),
            };
            letters.push(HLetter {
                i,
                j,
                decorated,
                inverse,
            });
        }
        Self::new(n, letters)
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[HLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &HWord) -> Result<HWord> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(HWord { n: self.n, letters })
    }

    pub fn to_pure(&self) -> PureWord {
        PureWord::from_trusted(
            self.n,
            self.letters.iter().flat_map(HLetter::to_pure).collect(),
        )
    }
}

impl fmt::Display for HWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Element of `Z2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaVector(Vec<bool>);

impl GammaVector {
    pub fn zero(n: usize) -> Self {
        GammaVector(vec![false; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        GammaVector(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Flips the 1-based coordinate `j`.
    pub fn toggle(&mut self, j: usize) {
        self.0[j - 1] = !self.0[j - 1];
    }

    pub fn get(&self, j: usize) -> bool {
        self.0[j - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    /// Indices of the set coordinates, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j + 1)
    }
}

impl fmt::Display for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Moves every `γ` of a pure word to the right end.
pub fn split_gamma(p: &PureWord) -> (HWord, GammaVector) {
    let n = p.strands();
    let mut eps = GammaVector::zero(n);
    let mut h = Vec::new();
    for letter in p.letters() {
        match *letter {
            PureLetter::Gamma(j) => eps.toggle(j),
            PureLetter::Lambda { k, l, inverse } => {
                let mut x = HLetter {
                    i: k,
                    j: l,
                    decorated: false,
                    inverse,
                };
                for kk in eps.support() {
                    x = gamma_conj(kk, &x);
                }
                h.push(x);
            }
        }
    }
    (HWord { n, letters: h }, eps)
}

/// Cancels `x … x^{-1}` pairs whose middle commutes with `x`.
fn raag_reduce(letters: &[HLetter]) -> Vec<HLetter> {
    let mut out: Vec<HLetter> = Vec::with_capacity(letters.len());
    'next: for &x in letters {
        let inverse = x.inv();
        for p in (0..out.len()).rev() {
            if out[p] == inverse {
                out.remove(p);
                continue 'next;
            }
            if !out[p].commutes_with(&x) {
                break;
            }
        }
        out.push(x);
    }
    out
}

/// Lexicographically least spelling of a reduced word under commutations.
fn lex_least(mut rest: Vec<HLetter>) -> Vec<HLetter> {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for p in 0..rest.len() {
            let available = rest[..p].iter().all(|y| y.commutes_with(&rest[p]));
            if available && best.is_none_or(|b| rest[p] < rest[b]) {
                best = Some(p);
            }
        }
        out.push(rest.remove(best.expect("first letter is always available")));
    }
    out
}

/// Canonical representative in `H_n`.
pub fn raag_normal_form(h: &HWord) -> HWord {
    HWord {
        n: h.n,
        letters: lex_least(raag_reduce(&h.letters)),
    }
}

/// Canonical triple `(h, ε, σ)` with `w = eval(h) · γ^ε · m(σ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    pub h: HWord,
    pub eps: GammaVector,
    pub sigma: Permutation,
}

impl NormalForm {
    pub fn strands(&self) -> usize {
        self.sigma.degree()
    }

    /// The word `eval(h) · γ^ε · m(σ)`.
    pub fn to_word(&self) -> Word {
        let n = self.strands();
        let mut letters = eval_pure(&self.h.to_pure()).letters().to_vec();
        letters.extend(self.eps.support().map(Letter::g));
        letters.extend_from_slice(schreier_rep(&self.sigma).word().letters());
        Word::from_trusted(n, letters)
    }

    /// Parses `h=<tokens> ; eps=<bits> ; sigma=<images>`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::MalformedNormalForm(format!("{what} in `{text}`"));
        let fields: Vec<&str> = text.trim().split(';').map(str::trim).collect();
        let [h, eps, sigma] = fields.as_slice() else {
            return Err(bad("expected three `;`-separated fields"));
        };
        let h = h.strip_prefix("h=").ok_or_else(|| bad("missing `h=`"))?;
        let eps = eps
            .strip_prefix("eps=")
            .ok_or_else(|| bad("missing `eps=`"))?;
        let sigma = sigma
            .strip_prefix("sigma=")
            .ok_or_else(|| bad("missing `sigma=`"))?;
        let images = sigma
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad("bad image")))
            .collect::<Result<Vec<_>>>()?;
        let sigma = Permutation::from_images(&images)?;
        let n = sigma.degree();
        let bits = eps
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad("bad eps bit")),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.len() != n {
            return Err(bad("eps length differs from strand count"));
        }
        Ok(NormalForm {
            h: HWord::parse(h, n)?,
            eps: GammaVector(bits),
            sigma,
        })
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={} ; eps={} ; sigma={}", self.h, self.eps, self.sigma)
    }
}

pub fn normal_form(w: &Word) -> NormalForm {
    let sigma = w.perm_image();
    let rep = schreier_rep(&sigma);
    let pure_part = w.concat(&rep.word().invert()).expect("same strand count");
    let p = rewrite_pure(&pure_part).expect("coset representative removed");
    let (h, eps) = split_gamma(&p);
    NormalForm {
        h: raag_normal_form(&h),
        eps,
        sigma,
    }
}

/// Equality in `TVT_n` decided through the normal form.
pub fn words_equal(w1: &Word, w2: &Word) -> Result<bool> {
    if w1.strands() != w2.strands() {
        return Err(Error::StrandMismatch(w1.strands(), w2.strands()));
    }
    Ok(normal_form(w1) == normal_form(w2))
}

/// Forgets strand `n`: drops `λ_{i,n}` and `γ_n`.
pub fn project_pure(p: &PureWord) -> Result<PureWord> {
    let n = p.strands();
    if n < 2 {
        return Err(Error::NoStrands);
    }
    let letters = p
        .letters()
        .iter()
        .copied()
        .filter(|x| match *x {
            PureLetter::Lambda { l, .. } => l != n,
            PureLetter::Gamma(j) => j != n,
        })
        .collect();
    Ok(PureWord::from_trusted(n - 1, letters))
}

/// Mirror automorphism: `s_i ↦ s_{n-i}`, `r_i ↦ r_{n-i}`, `g_i ↦ g_{n-i+1}`.
pub fn flip(w: &Word) -> Word {
    let n = w.strands();
    let letters = w
        .letters()
        .iter()
        .map(|l| match l.kind {
            LetterKind::S | LetterKind::R => Letter {
                kind: l.kind,
                index: n - l.index,
            },
            LetterKind::G => Letter::g(n + 1 - l.index),
        })
        .collect();
    Word::from_trusted(n, letters)
}

/// `∏_{i=1}^{n-1} (r_i r_{i-1} … r_1) · g_1 g_2 … g_n`.
pub fn nabla(n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::NoStrands);
    }
    let mut letters = Vec::new();
    for i in 1..n {
        letters.extend((1..=i).rev().map(Letter::r));
    }
    letters.extend((1..=n).map(Letter::g));
    Ok(Word::from_trusted(n, letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, n: usize) -> Word {
        Word::parse(text, n).unwrap()
    }

    fn hw(text: &str, n: usize) -> HWord {
        HWord::parse(text, n).unwrap()
    }

    #[test]
    fn gamma_conj_examples() {
        let x = HLetter::plain(1, 2);
        assert_eq!(gamma_conj(3, &x), x);
        assert_eq!(gamma_conj(1, &x), HLetter::decorated(1, 2));
        assert_eq!(gamma_conj(2, &x), HLetter::decorated(1, 2).inv());
        assert_eq!(gamma_conj(2, &HLetter::decorated(1, 2)), x.inv());
    }

    #[test]
    fn split_gamma_examples() {
        let (h, eps) = split_gamma(&PureWord::parse("L{1,2}", 2).unwrap());
        assert_eq!(h, hw("L{1,2}", 2));
        assert!(eps.is_zero());

        let (h, eps) = split_gamma(&PureWord::parse("g1 L{1,2}", 2).unwrap());
        assert_eq!(h, hw("L{1,2}'", 2));
        assert_eq!(eps.to_string(), "10");

        let (h, eps) = split_gamma(&PureWord::parse("g2 L{1,2} g2", 2).unwrap());
        assert_eq!(h, hw("L{1,2}'^-1", 2));
        assert!(eps.is_zero());
    }

    #[test]
    fn raag_normal_form_examples() {
        assert_eq!(
            raag_normal_form(&hw("L{1,2} L{3,4} L{1,2}^-1", 4)),
            hw("L{3,4}", 4)
        );
        let stuck = hw("L{1,2} L{1,3} L{1,2}^-1", 4);
        assert_eq!(raag_normal_form(&stuck), stuck);
        assert!(raag_normal_form(&hw("", 4)).is_empty());
        // commuting letters get sorted
        assert_eq!(
            raag_normal_form(&hw("L{3,4} L{1,2}'", 4)),
            hw("L{1,2}' L{3,4}", 4)
        );
        // plain and decorated letters of one pair never cancel
        let mixed = hw("L{1,2} L{1,2}'^-1", 2);
        assert_eq!(raag_normal_form(&mixed), mixed);
    }

    #[test]
    fn normal_form_examples() {
        let nf = normal_form(&w("", 3));
        assert!(nf.h.is_empty() && nf.eps.is_zero() && nf.sigma.is_identity());

        let nf = normal_form(&w("g1", 3));
        assert!(nf.h.is_empty() && nf.sigma.is_identity());
        assert_eq!(nf.eps.to_string(), "100");

        let nf = normal_form(&w("s1", 2));
        assert_eq!(nf.h, hw("L{1,2}", 2));
        assert!(nf.eps.is_zero());
        assert_eq!(nf.sigma, Permutation::adjacent(2, 1));
    }

    #[test]
    fn words_equal_examples() {
        assert!(words_equal(&w("r1 s1 r1", 2), &w("g2 g1 s1 g1 g2", 2)).unwrap());
        assert!(!words_equal(&w("s1", 2), &w("r1", 2)).unwrap());
        let x = w("s1 g2 r1 s2", 3);
        assert!(words_equal(&x, &x).unwrap());
        assert!(words_equal(&w("s1", 2), &w("s1", 3)).is_err());
    }

    #[test]
    fn normal_form_text_round_trip() {
        let nf = normal_form(&w("s1 g2 r2 s1 g3", 3));
        let text = nf.to_string();
        assert_eq!(NormalForm::parse(&text).unwrap(), nf);
        let empty = normal_form(&w("", 2));
        assert_eq!(empty.to_string(), "h= ; eps=00 ; sigma=1 2");
        assert_eq!(NormalForm::parse(&empty.to_string()).unwrap(), empty);
        assert!(NormalForm::parse("h= ; eps=0 ; sigma=1 2").is_err());
        assert!(NormalForm::parse("h=L{1,3} ; eps=00 ; sigma=1 2").is_err());
    }

    #[test]
    fn normal_form_evaluates_back() {
        for text in ["s1 g2 r2 s1 g3", "r1 r2 s1", "g1 s2 g3 r1", ""] {
            let word = w(text, 3);
            let nf = normal_form(&word);
            assert_eq!(normal_form(&nf.to_word()), nf, "{text}");
        }
    }

    #[test]
    fn project_pure_examples() {
        let p = |t: &str| PureWord::parse(t, 3).unwrap();
        assert!(project_pure(&p("L{1,3}")).unwrap().is_empty());
        assert!(project_pure(&p("g3")).unwrap().is_empty());
        let kept = project_pure(&p("L{1,2}")).unwrap();
        assert_eq!(kept.to_string(), "L{1,2}");
        assert_eq!(kept.strands(), 2);
        assert!(project_pure(&PureWord::parse("g1", 1).unwrap()).is_err());
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(&w("s1", 3)), w("s2", 3));
        assert_eq!(flip(&w("g1", 3)), w("g3", 3));
        assert_eq!(flip(&w("r1", 2)), w("r1", 2));
    }

    #[test]
    fn nabla_examples() {
        assert_eq!(nabla(3).unwrap(), w("r1 r2 r1 g1 g2 g3", 3));
        assert_eq!(nabla(1).unwrap(), w("g1", 1));
        assert_eq!(nabla(2).unwrap(), w("r1 g1 g2", 2));
    }
}

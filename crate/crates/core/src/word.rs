//! Reduced words in a free group of finite rank.
//!
//! Generators are written `a`..`z` and their inverses `A`..`Z`. Generators
//! past the 26th use the indexed form `x26` / `X26`. A lone `1` denotes the
//! identity. Every constructor freely reduces, so a [`Word`] is always
//! reduced.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: u32, right: u32 },
    #[error("generator {generator} at position {position} is outside an alphabet of rank {rank}")]
    InvalidGenerator { position: usize, generator: u32, rank: u32 },
    #[error("unexpected character {found:?} at position {position}")]
    Parse { position: usize, found: char },
    #[error("operation requires an alphabet of rank 2, got rank {0}")]
    RankNotTwo(u32),
    #[error("alphabet rank must be at least 1")]
    ZeroRank,
}

/// A free generating set of the given size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet {
    rank: u32,
}

impl Alphabet {
    pub fn new(rank: u32) -> Result<Self, WordError> {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        Ok(Alphabet { rank })
    }

    /// The two-generator alphabet `{a, b}`.
    pub const fn rank_two() -> Self {
        Alphabet { rank: 2 }
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    /// All `2 * rank` letters, generators before inverses.
    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.rank).map(Letter::generator).chain((0..self.rank).map(Letter::inverse_of))
    }

    pub(crate) fn check(self, other: Alphabet) -> Result<(), WordError> {
        if self != other {
            return Err(WordError::AlphabetMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }
}

/// A generator or the inverse of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u32,
    inverse: bool,
}

impl Letter {
    pub const fn generator(index: u32) -> Self {
        Letter { generator: index, inverse: false }
    }

    pub const fn inverse_of(index: u32) -> Self {
        Letter { generator: index, inverse: true }
    }

    pub fn index(self) -> u32 {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inverse(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generator < 26 {
            let base = if self.inverse { b'A' } else { b'a' };
            write!(f, "{}", (base + self.generator as u8) as char)
        } else if self.inverse {
            write!(f, "X{}", self.generator)
        } else {
            write!(f, "x{}", self.generator)
        }
    }
}

/// A freely reduced word over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(alphabet: Alphabet) -> Self {
        Word { alphabet, letters: Vec::new() }
    }

    /// Freely reduces `raw`, rejecting letters outside the alphabet.
    pub fn reduce<I>(alphabet: Alphabet, raw: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut letters: Vec<Letter> = Vec::new();
        for (position, letter) in raw.into_iter().enumerate() {
            if letter.generator >= alphabet.rank {
                return Err(WordError::InvalidGenerator { position, generator: letter.generator, rank: alphabet.rank });
            }
            push_reduced(&mut letters, letter);
        }
        Ok(Word { alphabet, letters })
    }

    /// Parses the compact text syntax (`aBBa`, `x30X2`, `1`).
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self, WordError> {
        let chars: Vec<char> = text.chars().collect();
        let mut raw = Vec::new();
        let mut positions = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let start = i;
            let letter = match c {
                'x' | 'X' if chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) => {
                    let mut j = i + 1;
                    let mut index: u64 = 0;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        index = index * 10 + chars[j].to_digit(10).unwrap() as u64;
                        if index > u32::MAX as u64 {
                            return Err(WordError::Parse { position: j, found: chars[j] });
                        }
                        j += 1;
                    }
                    i = j;
                    Letter { generator: index as u32, inverse: c == 'X' }
                }
                'a'..='z' => {
                    i += 1;
                    Letter::generator(c as u32 - 'a' as u32)
                }
                'A'..='Z' => {
                    i += 1;
                    Letter::inverse_of(c as u32 - 'A' as u32)
                }
                '1' if chars.len() == 1 => {
                    i += 1;
                    continue;
                }
                _ => return Err(WordError::Parse { position: i, found: c }),
            };
            raw.push(letter);
            positions.push(start);
        }
        Word::reduce(alphabet, raw.iter().copied()).map_err(|err| match err {
            WordError::InvalidGenerator { position, generator, rank } => {
                WordError::InvalidGenerator { position: positions[position], generator, rank }
            }
            other => other,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
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

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { alphabet: self.alphabet, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        self.alphabet.check(other.alphabet)?;
        let mut letters = self.letters.clone();
        for &letter in &other.letters {
            push_reduced(&mut letters, letter);
        }
        Ok(Word { alphabet: self.alphabet, letters })
    }

    /// `g x g⁻¹`.
    pub fn conjugate(&self, by: &Word) -> Result<Word, WordError> {
        by.concat(self)?.concat(&by.inverse())
    }

    pub fn pow(&self, exponent: i32) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.alphabet);
        for _ in 0..exponent.unsigned_abs() {
            out = out.concat(&base).expect("same alphabet");
        }
        out
    }

    /// Strips matching letter/inverse pairs from both ends.
    pub fn cyclic_reduction(&self) -> Word {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo].cancels(self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word { alphabet: self.alphabet, letters: self.letters[lo..hi].to_vec() }
    }

    /// Applies a letterwise substitution `generator i ↦ images[i]` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Result<Word, WordError> {
        let target = images.first().map_or(self.alphabet, Word::alphabet);
        let mut out = Word::identity(target);
        for &letter in &self.letters {
            let image = images.get(letter.generator as usize).ok_or(WordError::InvalidGenerator {
                position: 0,
                generator: letter.generator,
                rank: images.len() as u32,
            })?;
            let piece = if letter.inverse { image.inverse() } else { image.clone() };
            out = out.concat(&piece)?;
        }
        Ok(out)
    }

    /// The embedding `a ↦ a²`, `b ↦ aba⁻¹b⁻¹` of the rank-2 free group into itself.
    pub fn phi_square_embed(&self) -> Result<Word, WordError> {
        if self.alphabet.rank != 2 {
            return Err(WordError::RankNotTwo(self.alphabet.rank));
        }
        let alphabet = self.alphabet;
        let images = [Word::parse(alphabet, "aa")?, Word::parse(alphabet, "abAB")?];
        self.substitute(&images)
    }

    /// The endomorphism squaring every generator.
    pub fn square_generators(&self) -> Word {
        let images: Vec<Word> = (0..self.alphabet.rank)
            .map(|i| Word { alphabet: self.alphabet, letters: vec![Letter::generator(i), Letter::generator(i)] })
            .collect();
        self.substitute(&images).expect("images share the alphabet")
    }

    /// Sends generator `i` to `aⁱ b a⁻ⁱ` in the rank-2 free group.
    pub fn embed_into_rank2(&self) -> Word {
        let target = Alphabet::rank_two();
        let images: Vec<Word> = (0..self.alphabet.rank).map(rank2_image).collect();
        if images.is_empty() {
            return Word::identity(target);
        }
        self.substitute(&images).expect("images share the alphabet")
    }
}

fn rank2_image(index: u32) -> Word {
    let mut letters = Vec::with_capacity(2 * index as usize + 1);
    letters.extend(std::iter::repeat_n(Letter::generator(0), index as usize));
    letters.push(Letter::generator(1));
    letters.extend(std::iter::repeat_n(Letter::inverse_of(0), index as usize));
    Word { alphabet: Alphabet::rank_two(), letters }
}

fn push_reduced(letters: &mut Vec<Letter>, letter: Letter) {
    match letters.last() {
        Some(&last) if last.cancels(letter) => {
            letters.pop();
        }
        _ => letters.push(letter),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for letter in &self.letters {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

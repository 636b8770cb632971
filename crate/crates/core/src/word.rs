//! Commutator monomials as words over the two-letter alphabet `{X, Y}`.
//!
//! The word `w_1 w_2 ... w_N` stands for the right-nested bracket
//! `[w_1,[w_2,[...,[w_{N-1},w_N]...]]]`. Its order is its length.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word length [`enumerate_words`] accepts; indices are packed in a `u64`.
pub const MAX_ENUMERABLE_ORDER: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A nonempty word over `{X, Y}`. Ordering is lexicographic with `X < Y`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word { letters })
    }

    /// Parses the ASCII form, e.g. `"XXY"`. Lowercase letters are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyWord);
        }
        let letters = text
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                found => Err(Error::InvalidCharacter {
                    position: i + 1,
                    found,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { letters })
    }

    /// Word of length `len` whose letters are the bits of `index`, most
    /// significant first, with 0 as `X`. Index order equals lexicographic order.
    pub fn from_index(len: usize, index: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyWord);
        }
        if len > MAX_ENUMERABLE_ORDER {
            return Err(Error::InvalidOrder {
                order: len,
                reason: "too long to index",
            });
        }
        if index >> len != 0 {
            return Err(Error::InvalidParameter(format!(
                "index {index} out of range for words of length {len}"
            )));
        }
        let letters = (0..len)
            .map(|j| {
                if (index >> (len - 1 - j)) & 1 == 0 {
                    Letter::X
                } else {
                    Letter::Y
                }
            })
            .collect();
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The order `N(C)` of the monomial, i.e. its length.
    pub fn order(&self) -> usize {
        self.letters.len()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// Number of adjacent `YX` pairs.
    pub fn descent_count(&self) -> usize {
        self.letters
            .windows(2)
            .filter(|p| p[0] == Letter::Y && p[1] == Letter::X)
            .count()
    }

    /// True when the innermost bracket is `[A, A]`, so the monomial vanishes.
    pub fn is_zero_monomial(&self) -> bool {
        match self.letters.as_slice() {
            [.., a, b] => a == b,
            _ => false,
        }
    }

    pub fn blocks(&self) -> BlockDecomposition {
        decompose_blocks(self)
    }

    /// Renders the right-nested bracket, e.g. `[X,[X,Y]]`.
    pub fn bracket_string(&self) -> String {
        let n = self.letters.len();
        if n == 1 {
            return self.letters[0].to_string();
        }
        let mut out = String::with_capacity(3 * n);
        for l in &self.letters[..n - 1] {
            out.push('[');
            out.push(l.as_char());
            out.push(',');
        }
        out.push(self.letters[n - 1].as_char());
        out.extend(std::iter::repeat_n(']', n - 1));
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

pub fn parse_word(text: &str) -> Result<Word> {
    Word::parse(text)
}

pub fn word_order(w: &Word) -> usize {
    w.order()
}

/// One maximal segment `X^x Y^y` between descending edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub x: usize,
    pub y: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.x + self.y
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A word split at every `YX` edge into blocks `X^{u_i} Y^{v_i}`.
///
/// Only the first block may have no `X` and only the last may have no `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockDecomposition {
    blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `L(C)`, the number of blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn order(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    /// Re-concatenates the blocks into the original word.
    pub fn to_word(&self) -> Word {
        let letters = self
            .blocks
            .iter()
            .flat_map(|b| {
                std::iter::repeat_n(Letter::X, b.x).chain(std::iter::repeat_n(Letter::Y, b.y))
            })
            .collect();
        Word { letters }
    }
}

pub fn decompose_blocks(w: &Word) -> BlockDecomposition {
    let mut blocks = Vec::with_capacity(w.descent_count() + 1);
    let mut current = Block { x: 0, y: 0 };
    for &l in &w.letters {
        match l {
            Letter::X if current.y > 0 => {
                blocks.push(current);
                current = Block { x: 1, y: 0 };
            }
            Letter::X => current.x += 1,
            Letter::Y => current.y += 1,
        }
    }
    blocks.push(current);
    BlockDecomposition { blocks }
}

/// All `2^n` words of length `n` in lexicographic order (`X < Y`).
pub fn enumerate_words(n: usize) -> Result<Vec<Word>> {
    let count = word_count(n)?;
    (0..count).map(|i| Word::from_index(n, i)).collect()
}

/// `2^n`, the number of words of length `n`.
pub fn word_count(n: usize) -> Result<u64> {
    match n {
        0 => Err(Error::InvalidOrder {
            order: n,
            reason: "order must be at least 1",
        }),
        n if n > MAX_ENUMERABLE_ORDER => Err(Error::InvalidOrder {
            order: n,
            reason: "too large to enumerate",
        }),
        n => Ok(1u64 << n),
    }
}

//! The order-N truncated series as an ordered table of `(word, M(word))`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{coefficient_block, coefficient_naive};
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::tables::CoefficientTables;
use crate::word::{word_count, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesTerm {
    pub word: Word,
    pub coefficient: ExactRational,
}

/// Terms ordered by word length, then lexicographically with `X < Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchSeries {
    order: usize,
    terms: Vec<SeriesTerm>,
}

/// Opt-in filters applied while expanding. Both are off by default so the
/// output is the literal coefficient table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Pruning {
    /// Drop terms whose coefficient is exactly zero.
    pub zero_coefficients: bool,
    /// Drop words ending in two equal letters; their bracket vanishes.
    pub zero_monomials: bool,
}

fn sort_key(w: &Word) -> (usize, &Word) {
    (w.order(), w)
}

impl BchSeries {
    /// Checks ordering, uniqueness and the length bound.
    pub fn new(order: usize, terms: Vec<SeriesTerm>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder {
                order,
                reason: "order must be at least 1",
            });
        }
        if let Some(t) = terms.iter().find(|t| t.word.order() > order) {
            return Err(Error::MalformedSeries(format!(
                "word {} is longer than the series order {order}",
                t.word
            )));
        }
        if let Some(p) = terms
            .windows(2)
            .find(|p| sort_key(&p[0].word) >= sort_key(&p[1].word))
        {
            return Err(Error::MalformedSeries(format!(
                "terms out of order or duplicated at {} / {}",
                p[0].word, p[1].word
            )));
        }
        Ok(BchSeries { order, terms })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &Word) -> Option<&ExactRational> {
        self.terms
            .binary_search_by(|t| sort_key(&t.word).cmp(&sort_key(word)))
            .ok()
            .map(|i| &self.terms[i].coefficient)
    }

    pub fn serialize(&self, format: Format) -> String {
        serialize(self, format)
    }
}

fn expand_with<F>(order: usize, pruning: Pruning, coefficient: F) -> Result<BchSeries>
where
    F: Fn(&Word) -> Result<ExactRational> + Sync,
{
    // validates order before any work is scheduled
    word_count(order)?;
    let mut terms = Vec::new();
    for len in 1..=order {
        let count = word_count(len)?;
        let chunk: Vec<Option<SeriesTerm>> = (0..count)
            .into_par_iter()
            .map(|index| {
                let word = Word::from_index(len, index)?;
                if pruning.zero_monomials && word.is_zero_monomial() {
                    return Ok(None);
                }
                let coefficient = coefficient(&word)?;
                if pruning.zero_coefficients && coefficient.is_zero() {
                    return Ok(None);
                }
                Ok(Some(SeriesTerm { word, coefficient }))
            })
            .collect::<Result<_>>()?;
        terms.extend(chunk.into_iter().flatten());
    }
    Ok(BchSeries { order, terms })
}

/// All words of length `1..=order` with their block-formula coefficients.
///
/// Runs on the current rayon pool; the result does not depend on its size.
pub fn expand(order: usize, pruning: Pruning, tables: &CoefficientTables) -> Result<BchSeries> {
    tables.ensure_covers(order)?;
    expand_with(order, pruning, |w| coefficient_block(w, tables))
}

/// [`expand`] using the brute-force composition sum for every word.
pub fn expand_naive(order: usize, pruning: Pruning) -> Result<BchSeries> {
    expand_with(order, pruning, |w| Ok(coefficient_naive(w)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParameter(format!(
                "unknown format {other:?} (expected text, json or csv)"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesDoc {
    order: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    word: String,
    num: String,
    den: String,
}

pub fn serialize(s: &BchSeries, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = SeriesDoc {
                order: s.order,
                terms: s
                    .terms
                    .iter()
                    .map(|t| TermDoc {
                        word: t.word.to_string(),
                        num: t.coefficient.numer().to_string(),
                        den: t.coefficient.denom().to_string(),
                    })
                    .collect(),
            };
            let mut out = serde_json::to_string(&doc).expect("plain strings serialize");
            out.push('\n');
            out
        }
        Format::Csv => {
            let mut out = String::from("word,num,den\n");
            for t in &s.terms {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    t.word,
                    t.coefficient.numer(),
                    t.coefficient.denom()
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for t in &s.terms {
                let _ = writeln!(out, "{} · {}", t.coefficient, t.word.bracket_string());
            }
            out
        }
    }
}

/// Reads the JSON form produced by [`serialize`]. Coefficients must already
/// be reduced with a positive denominator.
pub fn parse_json(text: &str) -> Result<BchSeries> {
    let doc: SeriesDoc =
        serde_json::from_str(text).map_err(|e| Error::MalformedSeries(e.to_string()))?;
    let terms = doc
        .terms
        .into_iter()
        .map(|t| {
            let word = Word::parse(&t.word)?;
            let bad = |what: &str| Error::MalformedSeries(format!("{what} for word {}", t.word));
            let num: BigInt = t.num.parse().map_err(|_| bad("bad numerator"))?;
            let den: BigInt = t.den.parse().map_err(|_| bad("bad denominator"))?;
            if den <= BigInt::from(0) {
                return Err(bad("non-positive denominator"));
            }
            if !num.gcd(&den).is_one() {
                return Err(bad("unreduced coefficient"));
            }
            Ok(SeriesTerm {
                word,
                coefficient: ExactRational::new(num, den)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BchSeries::new(doc.order, terms)
}

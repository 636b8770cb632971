//! Exact coefficients of the truncated Baker–Campbell–Hausdorff series
//! `Z = log(exp X · exp Y)`, indexed by right-nested commutator words.
//!
//! ```
//! use bch_core::{coefficient_block, precompute_tables, Word};
//!
//! let tables = precompute_tables(3).unwrap();
//! let m = coefficient_block(&Word::parse("XXY").unwrap(), &tables).unwrap();
//! assert_eq!(m.to_string(), "1/36");
//! ```

pub mod coeff;
pub mod error;
pub mod mateval;
pub mod rational;
pub mod series;
pub mod tables;
pub mod word;

pub use coeff::{
    coefficient_block, coefficient_block_enumerated, coefficient_block_on_demand,
    coefficient_naive, enumerate_compositions, Composition,
};
pub use error::{Error, Result};
pub use mateval::{
    evaluate_series, mat_exp, mat_log, nested_commutator, verify_convergence, Matrix,
    VerificationReport,
};
pub use rational::ExactRational;
pub use series::{expand, expand_naive, BchSeries, Format, SeriesTerm};
pub use tables::{f_prime, g_prime, precompute_tables, CoefficientTables};
pub use word::{
    decompose_blocks, enumerate_words, parse_word, word_order, Block, BlockDecomposition, Letter,
    Word,
};

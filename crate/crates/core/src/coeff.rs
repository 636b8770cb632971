//! The Dynkin coefficient `M(C)` of a single monomial.
//!
//! Two independent routes: [`coefficient_naive`] sums over every composition
//! of the word, [`coefficient_block`] uses the block decomposition and the
//! precomputed `g'` table.

use std::borrow::Cow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::rational::ExactRational;
use crate::tables::{self, factorial, CoefficientTables};
use crate::word::{decompose_blocks, BlockDecomposition, Letter, Word};

/// One way of writing a word as `X^{r_1}Y^{s_1} ... X^{r_n}Y^{s_n}` with
/// every `r_i + s_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    pairs: Vec<(usize, usize)>,
}

impl Composition {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn to_word(&self) -> Word {
        let letters = self
            .pairs
            .iter()
            .flat_map(|&(r, s)| {
                std::iter::repeat_n(Letter::X, r).chain(std::iter::repeat_n(Letter::Y, s))
            })
            .collect();
        Word::new(letters).expect("compositions are nonempty")
    }
}

/// Calls `visit` with the pair stack of every composition of `letters`.
fn for_each_composition<F>(letters: &[Letter], visit: &mut F)
where
    F: FnMut(&[(usize, usize)]),
{
    fn walk<F: FnMut(&[(usize, usize)])>(
        letters: &[Letter],
        start: usize,
        stack: &mut Vec<(usize, usize)>,
        visit: &mut F,
    ) {
        if start == letters.len() {
            visit(stack);
            return;
        }
        let (mut r, mut s) = (0, 0);
        for &letter in &letters[start..] {
            match letter {
                Letter::X if s > 0 => break,
                Letter::X => r += 1,
                Letter::Y => s += 1,
            }
            stack.push((r, s));
            walk(letters, start + r + s, stack, visit);
            stack.pop();
        }
    }
    let mut stack = Vec::with_capacity(letters.len());
    walk(letters, 0, &mut stack, visit);
}

/// Every composition of `w` exactly once, ordered by length and then
/// lexicographically on the flattened pairs.
pub fn enumerate_compositions(w: &Word) -> Vec<Composition> {
    let mut out = Vec::new();
    for_each_composition(w.letters(), &mut |pairs| {
        out.push(Composition {
            pairs: pairs.to_vec(),
        })
    });
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.pairs.cmp(&b.pairs)));
    out
}

/// `M(w)` by brute force over all compositions:
/// `Σ_n (-1)^{n-1}/n · Σ 1/(N · Π r_i! s_i!)`.
///
/// Exponential in the word length; only meant as a reference.
pub fn coefficient_naive(w: &Word) -> ExactRational {
    let order = w.order();
    // weights[n] = Σ over n-part compositions of N!/Π r_i! s_i!
    let weights: Vec<BigInt> = if order <= 20 {
        let fact: Vec<u128> = (0..=order as u128)
            .scan(1u128, |acc, i| {
                *acc *= i.max(1);
                Some(*acc)
            })
            .collect();
        let mut weights = vec![0u128; order + 1];
        for_each_composition(w.letters(), &mut |pairs| {
            let denom: u128 = pairs.iter().map(|&(r, s)| fact[r] * fact[s]).product();
            weights[pairs.len()] += fact[order] / denom;
        });
        weights.into_iter().map(BigInt::from).collect()
    } else {
        let fact: Vec<BigInt> = (0..=order).map(factorial).collect();
        let mut weights = vec![BigInt::zero(); order + 1];
        for_each_composition(w.letters(), &mut |pairs| {
            let denom: BigInt = pairs.iter().map(|&(r, s)| &fact[r] * &fact[s]).product();
            weights[pairs.len()] += &fact[order] / denom;
        });
        weights
    };

    let scale = BigInt::from(order) * factorial(order);
    let mut total = ExactRational::zero();
    for (n, weight) in weights.into_iter().enumerate().skip(1) {
        if weight.is_zero() {
            continue;
        }
        let signed = if n % 2 == 1 { weight } else { -weight };
        let term = ExactRational::new(signed, &scale * n).expect("nonzero denominator");
        total += &term;
    }
    total
}

/// `M(w)` by the block formula, looking up `g'` in `tables`.
///
/// Blocks are folded left to right into a polynomial whose coefficient at `n`
/// is `Σ_{n_1+...+n_L=n} Π g'(u_i, v_i, n_i)`, which is then paired with
/// `(-1)^{n+1}/n` and scaled by `1/(N · Π u_i! v_i!)`.
pub fn coefficient_block(w: &Word, tables: &CoefficientTables) -> Result<ExactRational> {
    tables.ensure_covers(w.order())?;
    let blocks = decompose_blocks(w);
    if let Some(value) = block_sum_small(&blocks, tables) {
        return Ok(value);
    }
    block_sum(&blocks, |u, v| {
        Cow::Borrowed(tables.g_row(u, v).expect("covered by the order check"))
    })
}

/// Same as [`coefficient_block`] but computes every `g'` from the closed form.
pub fn coefficient_block_on_demand(w: &Word) -> ExactRational {
    let blocks = decompose_blocks(w);
    block_sum(&blocks, |u, v| {
        let row = std::iter::once(BigInt::zero())
            .chain((1..=u + v).map(|n| tables::g_prime(u, v, n).expect("valid block")))
            .collect();
        Cow::Owned(row)
    })
    .expect("on-demand rows cannot overflow")
}

fn lcm_upto(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// Exact path with arbitrary-precision integers throughout.
fn block_sum<'a, R>(blocks: &BlockDecomposition, row: R) -> Result<ExactRational>
where
    R: Fn(usize, usize) -> Cow<'a, [BigInt]>,
{
    let order = blocks.order();
    let mut acc = vec![BigInt::zero(); order + 1];
    acc[0] = BigInt::one();
    let mut reach = 0;
    for b in blocks.blocks() {
        let g = row(b.x, b.y);
        let mut next = vec![BigInt::zero(); order + 1];
        for (n, a) in acc.iter().enumerate().take(reach + 1) {
            if a.is_zero() {
                continue;
            }
            for k in 1..=b.len() {
                if !g[k].is_zero() {
                    next[n + k] += a * &g[k];
                }
            }
        }
        acc = next;
        reach += b.len();
    }
    finish(blocks, &acc)
}

/// `Σ_n (-1)^{n+1}/n · weights[n]`, scaled by `1/(N · Π u_i! v_i!)`.
fn finish(blocks: &BlockDecomposition, weights: &[BigInt]) -> Result<ExactRational> {
    let order = blocks.order();
    let constant = blocks.blocks().iter().fold(BigInt::from(order), |c, b| {
        c * factorial(b.x) * factorial(b.y)
    });
    let lcm = lcm_upto(order);
    let mut numer = BigInt::zero();
    for (n, a) in weights.iter().enumerate().skip(blocks.block_count()) {
        let term = a * (&lcm / n);
        if n % 2 == 1 {
            numer += term;
        } else {
            numer -= term;
        }
    }
    ExactRational::new(numer, constant * lcm)
}

/// `M(w)` by the block formula with the substring counts `(n_1, …, n_L)`
/// enumerated tuple by tuple, `Π (u_i + v_i)` products in all.
///
/// Same value as [`coefficient_block`]; kept as a cross-check and as the
/// baseline the convolution is measured against.
pub fn coefficient_block_enumerated(w: &Word, tables: &CoefficientTables) -> Result<ExactRational> {
    tables.ensure_covers(w.order())?;
    let blocks = decompose_blocks(w);
    let rows: Vec<&[BigInt]> = blocks
        .blocks()
        .iter()
        .map(|b| tables.g_row(b.x, b.y))
        .collect::<Result<_>>()?;
    let lens: Vec<usize> = blocks.blocks().iter().map(|b| b.len()).collect();
    let mut weights = vec![BigInt::zero(); w.order() + 1];
    let mut counts = vec![1usize; lens.len()];
    loop {
        let mut product = BigInt::one();
        for (row, &n) in rows.iter().zip(&counts) {
            product *= &row[n];
            if product.is_zero() {
                break;
            }
        }
        weights[counts.iter().sum::<usize>()] += product;

        // odometer over 1..=len_i
        let mut i = 0;
        while i < counts.len() && counts[i] == lens[i] {
            counts[i] = 1;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
        counts[i] += 1;
    }
    finish(&blocks, &weights)
}

/// Machine-integer path; `None` if any intermediate leaves `u128`/`i128`.
fn block_sum_small(
    blocks: &BlockDecomposition,
    tables: &CoefficientTables,
) -> Option<ExactRational> {
    let order = blocks.order();
    if order > 40 {
        return None;
    }
    let mut acc = [0u128; 41];
    let mut next = [0u128; 41];
    acc[0] = 1;
    let mut reach = 0;
    let mut constant = order as u128;
    for b in blocks.blocks() {
        let g = tables.g_row_small(b.x, b.y)?;
        next[..=order].fill(0);
        for n in 0..=reach {
            let a = acc[n];
            if a == 0 {
                continue;
            }
            for k in 1..=b.len() {
                let term = a.checked_mul(g[k])?;
                next[n + k] = next[n + k].checked_add(term)?;
            }
        }
        std::mem::swap(&mut acc, &mut next);
        reach += b.len();
        constant = constant
            .checked_mul(small_factorial(b.x)?)?
            .checked_mul(small_factorial(b.y)?)?;
    }

    let lcm = (1..=order as u128).fold(1u128, |acc, k| acc / gcd(acc, k) * k);
    let mut numer: i128 = 0;
    for (n, &a) in acc
        .iter()
        .enumerate()
        .take(order + 1)
        .skip(blocks.block_count())
    {
        let term = i128::try_from(a.checked_mul(lcm / n as u128)?).ok()?;
        numer = if n % 2 == 1 {
            numer.checked_add(term)?
        } else {
            numer.checked_sub(term)?
        };
    }
    let denom = constant.checked_mul(lcm)?;
    Some(ExactRational::new(numer, denom).expect("nonzero denominator"))
}

fn small_factorial(n: usize) -> Option<u128> {
    (2..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

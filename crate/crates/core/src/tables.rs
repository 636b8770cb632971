//! Integer tables behind the block coefficient formula.
//!
//! `f'(u, n) = Δⁿ xᵘ |ₓ₌₀` counts surjections from a `u`-set onto an
//! `n`-set. `g'(u, v, n)` is `u!·v!` times the weighted number of ways to cut
//! the block `X^u Y^v` into `n` nonempty substrings of the form `X^r Y^s`,
//! each cut weighted by `1/Π r_j! s_j!`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `Σ_{z=0}^{n} (-1)^z C(n,z) (n-z)^u`, the n-th forward difference of `x^u` at 0.
///
/// Vanishes for `n > u` (and for `u = 0 < n`).
pub fn f_prime(u: usize, n: usize) -> BigInt {
    if n > u {
        return BigInt::zero();
    }
    let exp = u32::try_from(u).expect("exponent fits in u32");
    let mut sum = BigInt::zero();
    for z in 0..=n {
        let term = binomial(n, z) * BigInt::from(n - z).pow(exp);
        if z % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

fn check_block(u: usize, v: usize, n: usize) -> Result<()> {
    if u == 0 && v == 0 {
        return Err(Error::InvalidBlock {
            u,
            v,
            n,
            reason: "a block needs at least one letter",
        });
    }
    if n == 0 {
        return Err(Error::InvalidBlock {
            u,
            v,
            n,
            reason: "a block holds at least one substring",
        });
    }
    Ok(())
}

/// Block contribution assembled from an arbitrary `f'` source.
///
/// With both letters present the cut either keeps one mixed substring
/// `X^r Y^s` (merge of the two pure neighbours) or none; both sums give
/// each side at least one substring.
fn g_prime_from<F>(u: usize, v: usize, n: usize, f: F) -> BigInt
where
    F: Fn(usize, usize) -> BigInt,
{
    if n > u + v {
        return BigInt::zero();
    }
    if v == 0 {
        return f(u, n);
    }
    if u == 0 {
        return f(v, n);
    }
    let mut sum = BigInt::zero();
    // no mixed substring: n_x pure-X pieces, n - n_x pure-Y pieces
    for nx in 1..n {
        let a = f(u, nx);
        if !a.is_zero() {
            sum += a * f(v, n - nx);
        }
    }
    // one mixed substring, counted as its refinement into n + 1 pure pieces
    for nx in 1..=n {
        let a = f(u, nx);
        if !a.is_zero() {
            sum += a * f(v, n + 1 - nx);
        }
    }
    sum
}

/// `g'(u, v, n)` computed on demand from the closed form, without tables.
pub fn g_prime(u: usize, v: usize, n: usize) -> Result<BigInt> {
    check_block(u, v, n)?;
    Ok(g_prime_from(u, v, n, f_prime))
}

/// Memoized `f'` and `g'` for every block fitting in words up to `max_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTables {
    max_order: usize,
    /// `f[u][n]` for `0 <= n <= u <= max_order`.
    f: Vec<Vec<BigInt>>,
    /// Start of row `(u, v)` in `g`; the row has `u + v + 1` entries indexed by `n`.
    offsets: Vec<usize>,
    g: Vec<BigInt>,
    /// Copy of `g` narrowed to `u128` where every entry of a row fits.
    g_small: Vec<u128>,
    row_fits: Vec<bool>,
}

/// Materializes all `f'` entries with `u <= max_order` and all `g'` entries
/// with `u + v <= max_order`.
pub fn precompute_tables(max_order: usize) -> Result<CoefficientTables> {
    CoefficientTables::new(max_order)
}

impl CoefficientTables {
    pub fn new(max_order: usize) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::InvalidOrder {
                order: 0,
                reason: "order must be at least 1",
            });
        }
        let alloc = || Error::Allocation { max_order };
        let side = max_order.checked_add(1).ok_or_else(alloc)?;
        let pairs = side.checked_mul(side).ok_or_else(alloc)?;
        // Σ_{s=0}^{N} (s+1)^2 row entries over all (u, v) with u + v = s
        let mut total = 0usize;
        for s in 0..=max_order {
            let row = (s + 1).checked_mul(s + 1).ok_or_else(alloc)?;
            total = total.checked_add(row).ok_or_else(alloc)?;
        }

        let mut offsets = Vec::new();
        offsets.try_reserve_exact(pairs).map_err(|_| alloc())?;
        let mut g: Vec<BigInt> = Vec::new();
        g.try_reserve_exact(total).map_err(|_| alloc())?;
        let mut g_small: Vec<u128> = Vec::new();
        g_small.try_reserve_exact(total).map_err(|_| alloc())?;
        let mut row_fits = Vec::new();
        row_fits.try_reserve_exact(pairs).map_err(|_| alloc())?;

        let f: Vec<Vec<BigInt>> = (0..=max_order)
            .map(|u| (0..=u).map(|n| f_prime(u, n)).collect())
            .collect();
        let f_lookup = |u: usize, n: usize| f[u].get(n).cloned().unwrap_or_default();

        for u in 0..=max_order {
            for v in 0..=max_order {
                offsets.push(g.len());
                if u + v > max_order {
                    row_fits.push(false);
                    continue;
                }
                let mut fits = true;
                for n in 0..=u + v {
                    let value = if n == 0 || u + v == 0 {
                        BigInt::zero()
                    } else {
                        g_prime_from(u, v, n, f_lookup)
                    };
                    let small = value.to_u128();
                    fits &= small.is_some();
                    g_small.push(small.unwrap_or(0));
                    g.push(value);
                }
                row_fits.push(fits);
            }
        }

        Ok(CoefficientTables {
            max_order,
            f,
            offsets,
            g,
            g_small,
            row_fits,
        })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub(crate) fn ensure_covers(&self, order: usize) -> Result<()> {
        if order > self.max_order {
            return Err(Error::TableOverflow {
                required: order,
                available: self.max_order,
            });
        }
        Ok(())
    }

    /// Table lookup of `f'(u, n)`; zero whenever `n > u`.
    pub fn f_prime(&self, u: usize, n: usize) -> Result<BigInt> {
        self.ensure_covers(u)?;
        Ok(self.f[u].get(n).cloned().unwrap_or_default())
    }

    /// `f'(u, 1..=u)`, i.e. row `u` without the `n = 0` entry.
    pub fn f_row(&self, u: usize) -> Result<&[BigInt]> {
        self.ensure_covers(u)?;
        Ok(&self.f[u][1.min(u + 1)..])
    }

    /// Table lookup of `g'(u, v, n)`; zero whenever `n > u + v`.
    pub fn g_prime(&self, u: usize, v: usize, n: usize) -> Result<BigInt> {
        check_block(u, v, n)?;
        let row = self.g_row(u, v)?;
        Ok(row.get(n).cloned().unwrap_or_default())
    }

    /// Row `g'(u, v, 0..=u+v)`; the `n = 0` entry is zero.
    pub fn g_row(&self, u: usize, v: usize) -> Result<&[BigInt]> {
        self.ensure_covers(u + v)?;
        let start = self.offsets[self.pair(u, v)];
        Ok(&self.g[start..start + u + v + 1])
    }

    /// Same as [`g_row`](Self::g_row) narrowed to `u128`, if every entry fits.
    pub fn g_row_small(&self, u: usize, v: usize) -> Option<&[u128]> {
        if u + v > self.max_order {
            return None;
        }
        let pair = self.pair(u, v);
        if !self.row_fits[pair] {
            return None;
        }
        let start = self.offsets[pair];
        Some(&self.g_small[start..start + u + v + 1])
    }

    fn pair(&self, u: usize, v: usize) -> usize {
        u * (self.max_order + 1) + v
    }

    /// Tab-separated `f'(u, 1..=u)`, one line per `u` from 1 to `max_order`.
    pub fn dump_f_rows(&self) -> String {
        let mut out = String::new();
        for u in 1..=self.max_order {
            let row: Vec<String> = self.f[u][1..].iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn g_entry_count(&self) -> usize {
        // n = 0 slots are padding
        let pad = (0..=self.max_order).map(|s| s + 1).sum::<usize>();
        self.g.len() - pad
    }

    pub fn f_entry_count(&self) -> usize {
        self.max_order * (self.max_order + 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn f_prime_examples() {
        assert_eq!(f_prime(1, 1), big(1));
        assert_eq!(f_prime(2, 3), big(0));
        assert_eq!(f_prime(3, 2), big(6));
        assert_eq!(f_prime(4, 2), big(14));
        assert_eq!(f_prime(0, 0), big(1));
        assert_eq!(f_prime(0, 1), big(0));
    }

    #[test]
    fn g_prime_examples() {
        assert_eq!(g_prime(1, 1, 1).unwrap(), big(1));
        assert_eq!(g_prime(2, 1, 2).unwrap(), big(3));
        assert_eq!(g_prime(3, 0, 2).unwrap(), f_prime(3, 2));
        assert_eq!(g_prime(0, 3, 2).unwrap(), big(6));
        assert_eq!(g_prime(1, 1, 3).unwrap(), big(0));
        assert!(matches!(g_prime(0, 0, 1), Err(Error::InvalidBlock { .. })));
        assert!(matches!(g_prime(1, 0, 0), Err(Error::InvalidBlock { .. })));
    }

    #[test]
    fn smallest_tables() {
        let t = precompute_tables(1).unwrap();
        assert_eq!(t.f_prime(1, 1).unwrap(), big(1));
        assert_eq!(t.g_prime(1, 0, 1).unwrap(), big(1));
        assert_eq!(t.g_prime(0, 1, 1).unwrap(), big(1));
        assert_eq!(t.f_entry_count(), 1);
        assert_eq!(t.g_entry_count(), 2);
        assert!(matches!(
            t.g_prime(1, 1, 1),
            Err(Error::TableOverflow {
                required: 2,
                available: 1
            })
        ));
        assert!(precompute_tables(0).is_err());
    }

    #[test]
    fn tables_match_closed_form() {
        let t = precompute_tables(12).unwrap();
        for u in 1..=12 {
            for n in 1..=12 {
                assert_eq!(t.f_prime(u, n).unwrap(), f_prime(u, n), "f'({u},{n})");
            }
        }
        for u in 0..=12 {
            for v in 0..=12 - u {
                if u + v == 0 {
                    continue;
                }
                for n in 1..=u + v + 1 {
                    assert_eq!(t.g_prime(u, v, n).unwrap(), g_prime(u, v, n).unwrap());
                }
                let small = t.g_row_small(u, v).unwrap();
                let row = t.g_row(u, v).unwrap();
                assert!(small.iter().zip(row).all(|(s, b)| BigInt::from(*s) == *b));
            }
        }
        assert_eq!(t, precompute_tables(12).unwrap());
    }

    #[test]
    fn dump_rows() {
        let t = precompute_tables(3).unwrap();
        assert_eq!(t.dump_f_rows(), "1\n1\t2\n1\t6\t6\n");
    }

    #[test]
    fn absurd_order_fails_to_allocate() {
        assert!(matches!(
            precompute_tables(usize::MAX / 2),
            Err(Error::Allocation { .. })
        ));
    }
}

//! Floating-point check of a truncated series against `log(exp X · exp Y)`.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{expand, BchSeries, Pruning};
use crate::tables::CoefficientTables;
use crate::word::{Letter, Word};

/// Tail bound for the Mercator series in [`mat_log`].
const LOG_TAIL_TOLERANCE: f64 = 1e-13;
/// Largest entry scale accepted by [`verify_convergence`].
pub const MAX_EPSILON: f64 = 0.1;
pub const GENERATOR: &str = "ChaCha8Rng";

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "{} entries do not form a nonempty {dim}x{dim} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: i / dim,
                col: i % dim,
            });
        }
        Ok(Matrix { dim, data })
    }

    pub fn from_rows<const D: usize>(rows: [[f64; D]; D]) -> Result<Self> {
        Matrix::new(D, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut data = vec![0.0; dim * dim];
        for (i, &v) in values.iter().enumerate() {
            data[i * dim + i] = v;
        }
        Matrix::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, k: f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    fn axpy(&mut self, k: f64, other: &Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += k * b;
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    fn check_dim(&self, other: &Matrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            dim: self.dim,
            data,
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            dim: self.dim,
            data,
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        Matrix { dim: d, data: out }
    }
}

/// Matrix exponential by scaling and squaring around a Taylor kernel.
///
/// The argument is halved until its Frobenius norm is at most 1/2, the series
/// is summed until terms drop below machine precision, then squared back.
pub fn mat_exp(a: &Matrix) -> Matrix {
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings));
    let mut result = Matrix::identity(a.dim);
    let mut term = Matrix::identity(a.dim);
    for k in 1..=40 {
        term = (&term * &scaled).scale(1.0 / k as f64);
        result.axpy(1.0, &term);
        if term.frobenius_norm() <= f64::EPSILON * 1e-2 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Principal logarithm near the identity via `log(I + E) = Σ (−1)^{k+1} E^k / k`.
///
/// Requires `‖A − I‖_F < 1`; the term count is the smallest `m` with
/// `‖E‖^{m+1} / (1 − ‖E‖) ≤ 1e−13`.
pub fn mat_log(a: &Matrix) -> Result<Matrix> {
    let e = a - &Matrix::identity(a.dim);
    let norm = e.frobenius_norm();
    // also rejects NaN
    if norm.is_nan() || norm >= 1.0 {
        return Err(Error::NotNearIdentity {
            norm: format!("{norm:.6}"),
        });
    }
    let mut terms = 1;
    while norm.powi(terms + 1) / (1.0 - norm) > LOG_TAIL_TOLERANCE {
        terms += 1;
    }
    let mut result = Matrix::zeros(a.dim);
    let mut power = Matrix::identity(a.dim);
    for k in 1..=terms {
        power = &power * &e;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        result.axpy(sign / k as f64, &power);
    }
    Ok(result)
}

/// `[M_1,[M_2,[…,[M_{N−1},M_N]…]]]` with `M_j` = `x` or `y` per letter.
pub fn nested_commutator(word: &Word, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    x.check_dim(y)?;
    let pick = |l: &Letter| match l {
        Letter::X => x,
        Letter::Y => y,
    };
    let mut letters = word.letters().iter().rev();
    let mut acc = pick(letters.next().expect("words are nonempty")).clone();
    for l in letters {
        acc = pick(l).commutator(&acc);
    }
    Ok(acc)
}

/// `Σ M(w) · [w](X, Y)` over the series terms; only the coefficient
/// conversion to `f64` rounds.
pub fn evaluate_series(series: &BchSeries, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    x.check_dim(y)?;
    let mut sum = Matrix::zeros(x.dim);
    for term in series.terms() {
        if term.coefficient.is_zero() || term.word.is_zero_monomial() {
            continue;
        }
        let c = nested_commutator(&term.word, x, y)?;
        sum.axpy(term.coefficient.to_f64(), &c);
    }
    Ok(sum)
}

/// Frobenius residual `‖log(exp X · exp Y) − series(X, Y)‖`.
pub fn residual(series: &BchSeries, x: &Matrix, y: &Matrix) -> Result<f64> {
    x.check_dim(y)?;
    let truth = mat_log(&(&mat_exp(x) * &mat_exp(y)))?;
    let approx = evaluate_series(series, x, y)?;
    Ok((&truth - &approx).frobenius_norm())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub order: usize,
    pub dim: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub generator: String,
    pub norm: String,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "order {}  dim {}  epsilon {}  samples {}  seed {} ({})",
            self.order, self.dim, self.epsilon, self.samples, self.seed, self.generator
        );
        for (i, r) in self.residuals.iter().enumerate() {
            let _ = writeln!(out, "sample {i:>4}  residual {r:.6e}");
        }
        let _ = writeln!(
            out,
            "max residual ({} norm) {:.6e}",
            self.norm, self.max_residual
        );
        out
    }
}

/// Draws `samples` pairs of `dim`×`dim` matrices with entries uniform in
/// `[−epsilon, epsilon]` from a generator seeded with `seed`.
pub fn random_pairs(
    dim: usize,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<(Matrix, Matrix)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let data = (0..dim * dim)
            .map(|_| rng.random_range(-epsilon..=epsilon))
            .collect();
        Matrix::new(dim, data)
    };
    (0..samples)
        .map(|_| Ok((draw(&mut rng)?, draw(&mut rng)?)))
        .collect()
}

pub fn verify_convergence(
    order: usize,
    dim: usize,
    epsilon: f64,
    samples: usize,
    seed: u64,
    tables: &CoefficientTables,
) -> Result<VerificationReport> {
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    if !(epsilon > 0.0 && epsilon <= MAX_EPSILON) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, {MAX_EPSILON}], got {epsilon}"
        )));
    }
    let series = expand(
        order,
        Pruning {
            zero_coefficients: true,
            zero_monomials: true,
        },
        tables,
    )?;
    let pairs = random_pairs(dim, epsilon, samples, seed)?;
    let residuals = pairs
        .par_iter()
        .map(|(x, y)| residual(&series, x, y))
        .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(VerificationReport {
        order,
        dim,
        epsilon,
        samples,
        seed,
        generator: GENERATOR.to_string(),
        norm: "frobenius".to_string(),
        residuals,
        max_residual,
    })
}

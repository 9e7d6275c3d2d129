//! Localization weights and the vertex generating series.
//!
//! Fixed points are isolated, so each contributes `1 / e(T^vir)`, computed as
//! `prod_m wt(m)^(-a_m)` over its tangent character `sum_m a_m m`. The
//! coefficient of `q^k` sums the contributions of fixed points whose
//! cokernel has length `k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraError, CharPoly, Specialization};
use crate::geometry::{enumerate_fixed_points, FixedPoint, LocalP1Config};
use crate::vertex::{virtual_tangent, PipelineOptions, TangentCharacter, VertexError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error(transparent)]
    Vertex(#[from] VertexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("weight of {monomial} vanishes under the specialization{}", at.as_ref().map(|p| format!(" at {p}")).unwrap_or_default())]
    ZeroWeight {
        monomial: String,
        at: Option<String>,
    },
    #[error("no generic specialization found in {attempts} draws")]
    RetryBudgetExhausted { attempts: usize },
    #[error("printed weight formula cannot be evaluated: {0}")]
    AmbiguousFormula(String),
    #[error("specialization has rank {got}, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("specialization is not on the Calabi-Yau locus")]
    NotCalabiYau,
}

fn check_rank(expected: usize, spec: &Specialization) -> Result<(), LocalizationError> {
    if spec.rank() != expected {
        return Err(LocalizationError::RankMismatch {
            expected,
            got: spec.rank(),
        });
    }
    Ok(())
}

/// `prod_m wt(m)^(-a_m)` for a character `sum_m a_m m`.
pub fn character_weight(
    character: &CharPoly,
    spec: &Specialization,
) -> Result<BigRational, LocalizationError> {
    check_rank(character.ctx().rank(), spec)?;
    let mut acc = BigRational::one();
    for (m, a) in character.terms() {
        let w = spec.weight_of(m);
        if w.is_zero() {
            return Err(LocalizationError::ZeroWeight {
                monomial: m.to_string(),
                at: None,
            });
        }
        let e = i32::try_from(a).map_err(|_| AlgebraError::CoefficientOverflow)?;
        acc *= w.pow(-e);
    }
    Ok(acc)
}

/// The localization contribution `1 / e(T^vir)` of a fixed point.
pub fn euler_weight(
    tc: &TangentCharacter,
    spec: &Specialization,
) -> Result<BigRational, LocalizationError> {
    character_weight(tc.value(), spec).map_err(|e| match e {
        LocalizationError::ZeroWeight { monomial, .. } => LocalizationError::ZeroWeight {
            monomial,
            at: Some(tc.source().to_string()),
        },
        other => other,
    })
}

/// A fixed point's weight under a specialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub fixed_point: FixedPoint,
    pub weight: BigRational,
}

/// Tangent characters of every fixed point up to a given cokernel length.
///
/// The characters do not depend on the specialization, so one table serves
/// any number of weight evaluations.
#[derive(Debug, Clone)]
pub struct TangentTable {
    config: LocalP1Config,
    by_order: Vec<Vec<TangentCharacter>>,
}

impl TangentTable {
    pub fn build(
        config: LocalP1Config,
        max_order: u32,
        opts: &PipelineOptions,
    ) -> Result<Self, VertexError> {
        let mut by_order = Vec::with_capacity(max_order as usize + 1);
        for k in 0..=max_order {
            let results: Vec<Result<TangentCharacter, VertexError>> =
                enumerate_fixed_points(config, k)
                    .par_iter()
                    .map(|fp| virtual_tangent(fp, opts))
                    .collect();
            by_order.push(results.into_iter().collect::<Result<Vec<_>, _>>()?);
        }
        Ok(Self { config, by_order })
    }

    pub fn config(&self) -> LocalP1Config {
        self.config
    }

    pub fn max_order(&self) -> u32 {
        (self.by_order.len() - 1) as u32
    }

    pub fn order(&self, k: u32) -> &[TangentCharacter] {
        &self.by_order[k as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &TangentCharacter> {
        self.by_order.iter().flatten()
    }

    /// Whether every tangent weight is nonzero under `spec`.
    pub fn is_generic(&self, spec: &Specialization) -> bool {
        spec.rank() == self.config.rank()
            && self.iter().all(|tc| {
                tc.value()
                    .terms()
                    .all(|(m, _)| !spec.weight_of(m).is_zero())
            })
    }

    /// Per-fixed-point contributions, grouped by cokernel length.
    pub fn contributions(
        &self,
        spec: &Specialization,
    ) -> Result<Vec<Vec<Contribution>>, LocalizationError> {
        check_rank(self.config.rank(), spec)?;
        self.by_order
            .iter()
            .map(|row| {
                let weights: Vec<_> = row
                    .par_iter()
                    .map(|tc| {
                        euler_weight(tc, spec).map(|weight| Contribution {
                            fixed_point: tc.source().clone(),
                            weight,
                        })
                    })
                    .collect();
                weights.into_iter().collect()
            })
            .collect()
    }

    pub fn series(&self, spec: &Specialization) -> Result<Series, LocalizationError> {
        let coefficients = self
            .contributions(spec)?
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.weight).sum())
            .collect();
        Ok(Series::new(self.config, coefficients))
    }
}

/// A truncated power series in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    rank: usize,
    twist: u32,
    coefficients: Vec<BigRational>,
}

impl Series {
    pub fn new(config: LocalP1Config, coefficients: Vec<BigRational>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "a series has at least the constant term"
        );
        Self {
            rank: config.rank(),
            twist: config.twist(),
            coefficients,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn max_order(&self) -> u32 {
        (self.coefficients.len() - 1) as u32
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// Coefficients of `self^e`, truncated at this series' order.
    pub fn power(&self, e: u32) -> Vec<BigRational> {
        let len = self.coefficients.len();
        let mut acc = vec![BigRational::zero(); len];
        acc[0] = BigRational::one();
        for _ in 0..e {
            acc = truncated_product(&acc, &self.coefficients, len);
        }
        acc
    }
}

/// Product of two coefficient lists, keeping the first `len` terms.
pub fn truncated_product(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `vertex_series` for one specialization.
pub fn vertex_series(
    config: LocalP1Config,
    max_order: u32,
    spec: &Specialization,
    opts: &PipelineOptions,
) -> Result<Series, LocalizationError> {
    TangentTable::build(config, max_order, opts)?.series(spec)
}

/// Coefficients of `(1 + q)^(-r(n+1))` up to `q^K`.
pub fn closed_form_series(rank: usize, twist: u32, max_order: u32) -> Series {
    let m = BigInt::from(rank) * BigInt::from(u64::from(twist) + 1);
    let mut coefficients = Vec::with_capacity(max_order as usize + 1);
    // binomial(-m, k) = (-1)^k C(m + k - 1, k)
    let mut c = BigRational::one();
    for k in 0..=max_order {
        coefficients.push(c.clone());
        let k = BigInt::from(k);
        c = -c * BigRational::new(&m + &k, k + 1);
    }
    Series {
        rank,
        twist,
        coefficients,
    }
}

/// Outcome of comparing two specializations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub agree: bool,
    pub first: Series,
    pub second: Series,
}

pub fn check_specialization_independence(
    table: &TangentTable,
    spec1: &Specialization,
    spec2: &Specialization,
) -> Result<IndependenceReport, LocalizationError> {
    if !spec1.satisfies_cy() || !spec2.satisfies_cy() {
        return Err(LocalizationError::NotCalabiYau);
    }
    let first = table.series(spec1)?;
    let second = table.series(spec2)?;
    Ok(IndependenceReport {
        agree: first == second,
        first,
        second,
    })
}

/// Seeded source of Calabi-Yau specializations.
#[derive(Debug, Clone)]
pub struct SpecSampler {
    rng: ChaCha8Rng,
    retry_budget: usize,
}

impl SpecSampler {
    pub const DEFAULT_RETRY_BUDGET: usize = 64;
    const S_BOUND: i64 = 12;
    const V_BOUND: i64 = 40;

    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            retry_budget: Self::DEFAULT_RETRY_BUDGET,
        }
    }

    pub fn with_retry_budget(mut self, retry_budget: usize) -> Self {
        self.retry_budget = retry_budget;
        self
    }

    /// One draw with `s3 = -s1 - s2`, no genericity check.
    pub fn draw(&mut self, rank: usize) -> Specialization {
        let mut nonzero = |bound: i64| loop {
            let x = self.rng.gen_range(-bound..=bound);
            if x != 0 {
                break x;
            }
        };
        let s1 = nonzero(Self::S_BOUND);
        let s2 = nonzero(Self::S_BOUND);
        let v: Vec<i64> = (0..rank).map(|_| nonzero(Self::V_BOUND)).collect();
        Specialization::calabi_yau(s1, s2, &v).expect("rank is at least one")
    }

    /// Draws until every weight in `table` is nonzero.
    pub fn draw_generic(
        &mut self,
        table: &TangentTable,
    ) -> Result<Specialization, LocalizationError> {
        for _ in 0..self.retry_budget {
            let spec = self.draw(table.config().rank());
            if table.is_generic(&spec) {
                return Ok(spec);
            }
        }
        Err(LocalizationError::RetryBudgetExhausted {
            attempts: self.retry_budget,
        })
    }
}

/// The two groupings of the printed rank-2 product formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reading {
    /// `v_i(v_j - 1) + prod_l ((l+n) s1) - (s2 + s3)`.
    A,
    /// `v_i(v_j - 1) + prod_l ((l+n) s1 - (s2 + s3))`.
    B,
}

impl Reading {
    pub const ALL: [Reading; 2] = [Reading::A, Reading::B];
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// One factor of the printed formula for a summand with `d` boxes.
/// A summand without boxes contributes 1.
fn printed_factor(
    reading: Reading,
    d: u32,
    n: u32,
    vi: &BigRational,
    vj: &BigRational,
    s: &[BigRational],
) -> Result<BigRational, LocalizationError> {
    if d == 0 {
        return Ok(BigRational::one());
    }
    let s23 = &s[1] + &s[2];
    let shifted = |l: u32| int(i64::from(l) + i64::from(n)) * &s[0];
    let numerator = vi * (vj - BigRational::one())
        + match reading {
            Reading::A => (0..d).map(shifted).product::<BigRational>() - &s23,
            Reading::B => (0..d).map(|l| shifted(l) - &s23).product::<BigRational>(),
        };
    let denominator = vi * (BigRational::one() - vj)
        + (1..=d)
            .map(|l| {
                let t = shifted(l);
                if l % 2 == 1 {
                    -t
                } else {
                    t
                }
            })
            .product::<BigRational>();
    if denominator.is_zero() {
        return Err(LocalizationError::AmbiguousFormula(format!(
            "denominator vanishes for d = {d}"
        )));
    }
    Ok(numerator / denominator)
}

/// The printed rank-2 weight for one fixed point, with `d_i` the total
/// number of boxes of summand `i`. Reported beside [`euler_weight`] only.
pub fn paper_weight_diagnostic(
    fp: &FixedPoint,
    spec: &Specialization,
    reading: Reading,
) -> Result<BigRational, LocalizationError> {
    let config = fp.config();
    if config.rank() != 2 {
        return Err(LocalizationError::AmbiguousFormula(format!(
            "formula is stated for rank 2, got rank {}",
            config.rank()
        )));
    }
    check_rank(2, spec)?;
    let d: Vec<u32> = (0..2).map(|i| fp.d_alpha()[i] + fp.d_beta()[i]).collect();
    let (v, s, n) = (spec.v(), spec.s(), config.twist());
    let first = printed_factor(reading, d[0], n, &v[0], &v[1], s)?;
    let second = printed_factor(reading, d[1], n, &v[1], &v[0], s)?;
    Ok(first * second)
}

/// One row of the side-by-side diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosticRow {
    pub fixed_point: FixedPoint,
    pub pipeline: BigRational,
    /// Per reading: the value, or why it could not be evaluated.
    pub readings: Vec<(Reading, Result<BigRational, String>)>,
}

impl DiagnosticRow {
    pub fn agrees(&self, reading: Reading) -> bool {
        self.readings
            .iter()
            .any(|(r, v)| *r == reading && v.as_ref().is_ok_and(|x| *x == self.pipeline))
    }
}

/// Pipeline weights next to both readings of the printed formula.
pub fn diagnostic_table(
    table: &TangentTable,
    spec: &Specialization,
) -> Result<Vec<DiagnosticRow>, LocalizationError> {
    let mut rows = Vec::new();
    for row in table.contributions(spec)? {
        for c in row {
            let readings = Reading::ALL
                .iter()
                .map(|&r| {
                    let v =
                        paper_weight_diagnostic(&c.fixed_point, spec, r).map_err(|e| e.to_string());
                    (r, v)
                })
                .collect();
            rows.push(DiagnosticRow {
                fixed_point: c.fixed_point,
                pipeline: c.weight,
                readings,
            });
        }
    }
    Ok(rows)
}

/// Whether `(-1)^k c_k > 0` for every coefficient.
pub fn alternates_in_sign(series: &Series) -> bool {
    series.coefficients().iter().enumerate().all(|(k, c)| {
        if k % 2 == 0 {
            c.is_positive()
        } else {
            c.is_negative()
        }
    })
}

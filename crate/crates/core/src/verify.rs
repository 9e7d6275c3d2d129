//! Built-in verification suites: seeded randomized checks of the character
//! algebra, and scans of the pipeline over ranges of rank, twist and order.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CharPoly, CharRational, Monomial, Specialization, VarContext, WeightForm};
use crate::geometry::{enumerate_fixed_points, LocalP1Config};
use crate::localization::{
    character_weight, closed_form_series, LocalizationError, SpecSampler, TangentTable,
};
use crate::vertex::{virtual_tangent, PipelineOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    BarInvolution,
    RingAxioms,
    SpecializeHomomorphism,
    CanonicalForm,
    Finiteness,
    RankMultiplicativity,
    SpecializationIndependence,
    ClosedForm,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::BarInvolution,
        Suite::RingAxioms,
        Suite::SpecializeHomomorphism,
        Suite::CanonicalForm,
        Suite::Finiteness,
        Suite::RankMultiplicativity,
        Suite::SpecializationIndependence,
        Suite::ClosedForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::BarInvolution => "bar-involution",
            Suite::RingAxioms => "ring-axioms",
            Suite::SpecializeHomomorphism => "specialize-homomorphism",
            Suite::CanonicalForm => "canonical-form",
            Suite::Finiteness => "finiteness",
            Suite::RankMultiplicativity => "rank-multiplicativity",
            Suite::SpecializationIndependence => "specialization-independence",
            Suite::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite `{s}`; expected one of {}", names.join(", "))
            })
    }
}

/// Ranges and seeds for a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_rank: usize,
    pub max_twist: u32,
    pub max_order: u32,
    pub seed: u64,
    /// Randomized cases per algebra suite.
    pub cases: usize,
    /// Specializations compared per configuration.
    pub specializations: usize,
    pub opts: PipelineOptions,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_rank: 2,
            max_twist: 2,
            max_order: 5,
            seed: 0,
            cases: 1000,
            specializations: 10,
            opts: PipelineOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: usize,
    /// Description of up to a few failing cases.
    pub samples: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            cases: 0,
            failures: 0,
            samples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.samples.len() < 5 {
                self.samples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: {} cases, {} failures",
            self.suite, self.cases, self.failures
        )?;
        for s in &self.samples {
            write!(f, "\n    {s}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> SuiteReport {
    match suite {
        Suite::BarInvolution => bar_involution(config),
        Suite::RingAxioms => ring_axioms(config),
        Suite::SpecializeHomomorphism => specialize_homomorphism(config),
        Suite::CanonicalForm => canonical_form(config),
        Suite::Finiteness => finiteness(config),
        Suite::RankMultiplicativity => rank_multiplicativity(config),
        Suite::SpecializationIndependence => specialization_independence(config),
        Suite::ClosedForm => closed_form(config),
    }
}

/// Small random characters for the algebra suites.
#[derive(Debug, Clone)]
pub struct CharacterSampler {
    rng: ChaCha8Rng,
}

impl CharacterSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn context(&mut self) -> VarContext {
        VarContext::new(self.rng.gen_range(1..=3)).expect("rank is positive")
    }

    pub fn monomial(&mut self, ctx: VarContext) -> Monomial {
        let exps: Vec<i32> = (0..ctx.num_vars())
            .map(|_| self.rng.gen_range(-2..=2))
            .collect();
        Monomial::from_exponents(ctx, &exps).expect("length matches context")
    }

    pub fn nonunit_monomial(&mut self, ctx: VarContext) -> Monomial {
        loop {
            let m = self.monomial(ctx);
            if !m.is_unit() {
                break m;
            }
        }
    }

    pub fn poly(&mut self, ctx: VarContext) -> CharPoly {
        let len = self.rng.gen_range(0..=5);
        let terms: Vec<_> = (0..len)
            .map(|_| (self.monomial(ctx), self.rng.gen_range(-4..=4)))
            .collect();
        CharPoly::from_terms(ctx, terms).expect("small coefficients")
    }

    pub fn rational(&mut self, ctx: VarContext) -> CharRational {
        let factors = self.rng.gen_range(0..=2);
        let den = (0..factors).map(|_| self.nonunit_monomial(ctx)).collect();
        CharRational::new(self.poly(ctx), den).expect("non-unit factors")
    }

    pub fn specialization(&mut self, rank: usize) -> Specialization {
        let mut x = || self.rng.gen_range(-9i64..=9);
        let s = [x(), x(), x()];
        let v: Vec<i64> = (0..rank).map(|_| x()).collect();
        Specialization::unconstrained(s, &v).expect("rank is positive")
    }
}

fn bar_involution(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::BarInvolution);
    let mut g = CharacterSampler::new(config.seed);
    for _ in 0..config.cases {
        let ctx = g.context();
        let a = g.poly(ctx);
        let q = g.rational(ctx);
        let ok = a.bar().bar() == a
            && q.bar().bar().equals(&q).unwrap_or(false)
            && q.bar().numerator().ctx() == ctx;
        report.record(ok, || format!("a = {a}, q = {q}"));
    }
    report
}

fn ring_axioms(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::RingAxioms);
    let mut g = CharacterSampler::new(config.seed.wrapping_add(1));
    for _ in 0..config.cases {
        let ctx = g.context();
        let (a, b, c) = (g.poly(ctx), g.poly(ctx), g.poly(ctx));
        let polys = &a + &b == &b + &a
            && &a * &b == &b * &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && (&a + &(-&a)).is_zero()
            && &a * &CharPoly::one(ctx) == a;
        let (x, y, z) = (g.rational(ctx), g.rational(ctx), g.rational(ctx));
        let rationals = (|| -> Result<bool, crate::algebra::AlgebraError> {
            Ok(x.try_add(&y)?.equals(&y.try_add(&x)?)?
                && x.try_mul(&y.try_add(&z)?)?
                    .equals(&x.try_mul(&y)?.try_add(&x.try_mul(&z)?)?)?
                && x.try_sub(&x)?.is_zero())
        })()
        .unwrap_or(false);
        report.record(polys && rationals, || {
            format!("a = {a}, b = {b}, c = {c}; x = {x}, y = {y}, z = {z}")
        });
    }
    report
}

fn specialize_homomorphism(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::SpecializeHomomorphism);
    let mut g = CharacterSampler::new(config.seed.wrapping_add(2));
    while report.cases < config.cases {
        let ctx = g.context();
        let spec = g.specialization(ctx.rank());
        let (m1, m2) = (g.monomial(ctx), g.monomial(ctx));
        let eval = |m: &Monomial| WeightForm::of(m).evaluate(&spec).expect("ranks agree");
        let product = m1.mul(&m2).expect("small exponents");
        let additive = eval(&product) == eval(&m1) + eval(&m2)
            && eval(&m1.inv().expect("small exponents")) == -eval(&m1)
            && eval(&Monomial::unit(ctx)) == BigRational::from_integer(0.into());

        let (a, b) = (g.poly(ctx), g.poly(ctx));
        let multiplicative = match (
            character_weight(&a, &spec),
            character_weight(&b, &spec),
            character_weight(&(&a + &b), &spec),
        ) {
            (Ok(wa), Ok(wb), Ok(wab)) => wab == wa * wb,
            // a weight vanishing on a or b: the case says nothing, draw again
            (Err(LocalizationError::ZeroWeight { .. }), _, _)
            | (_, Err(LocalizationError::ZeroWeight { .. }), _) => continue,
            _ => false,
        };
        report.record(additive && multiplicative, || {
            format!("m1 = {m1}, m2 = {m2}, a = {a}, b = {b}")
        });
    }
    report
}

fn canonical_form(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::CanonicalForm);
    let mut g = CharacterSampler::new(config.seed.wrapping_add(3));
    for _ in 0..config.cases {
        let ctx = g.context();
        let a = g.poly(ctx);
        let m = g.nonunit_monomial(ctx);
        let extra = g.rational(ctx);
        let ok = (|| -> Result<bool, crate::algebra::AlgebraError> {
            // a / (1 - m) written with the inverted factor
            let direct = CharRational::new(a.clone(), vec![m.clone()])?;
            let flipped =
                CharRational::new(&a * &CharPoly::monomial(ctx, m.inv()?, -1), vec![m.inv()?])?;
            // a (1 - m) / (1 - m) equals a
            let padded = CharRational::new(&a * &CharPoly::one_minus(ctx, &m), vec![m.clone()])?;
            let bumped = padded.try_add(&CharRational::from_poly(CharPoly::one(ctx)))?;
            Ok(direct == flipped
                && direct.equals(&flipped)?
                && padded.equals(&CharRational::from_poly(a.clone()))?
                && padded.reduce_to_polynomial()? == a
                && !bumped.equals(&padded)?
                && extra.simplify()?.equals(&extra)?)
        })()
        .unwrap_or(false);
        report.record(ok, || format!("a = {a}, m = {m}, extra = {extra}"));
    }
    report
}

fn configs(config: &VerifyConfig) -> impl Iterator<Item = LocalP1Config> + '_ {
    (1..=config.max_rank).flat_map(move |r| {
        (0..=config.max_twist).map(move |n| LocalP1Config::new(r, n).expect("rank is positive"))
    })
}

fn finiteness(config: &VerifyConfig) -> SuiteReport {
    use rayon::prelude::*;
    let mut report = SuiteReport::new(Suite::Finiteness);
    for cfg in configs(config) {
        for k in 0..=config.max_order {
            let results: Vec<_> = enumerate_fixed_points(cfg, k)
                .par_iter()
                .map(|fp| (fp.clone(), virtual_tangent(fp, &config.opts)))
                .collect();
            for (fp, result) in results {
                report.record(result.is_ok(), || match result {
                    Err(e) => format!("r={} n={} {fp}: {e}", cfg.rank(), cfg.twist()),
                    Ok(_) => unreachable!(),
                });
            }
        }
    }
    report
}

fn tables(config: &VerifyConfig, report: &mut SuiteReport) -> Vec<TangentTable> {
    let mut out = Vec::new();
    for cfg in configs(config) {
        match TangentTable::build(cfg, config.max_order, &config.opts) {
            Ok(t) => out.push(t),
            Err(e) => report.record(false, || format!("r={} n={}: {e}", cfg.rank(), cfg.twist())),
        }
    }
    out
}

fn rank_multiplicativity(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::RankMultiplicativity);
    let mut sampler = SpecSampler::new(config.seed);
    for n in 0..=config.max_twist {
        let base = LocalP1Config::new(1, n)
            .map_err(LocalizationError::from)
            .and_then(|cfg| Ok(TangentTable::build(cfg, config.max_order, &config.opts)?))
            .and_then(|t| {
                let spec = sampler.draw_generic(&t)?;
                t.series(&spec)
            });
        let base = match base {
            Ok(s) => s,
            Err(e) => {
                report.record(false, || format!("r=1 n={n}: {e}"));
                continue;
            }
        };
        for r in 2..=config.max_rank {
            let cfg = LocalP1Config::new(r, n).expect("rank is positive");
            let series = TangentTable::build(cfg, config.max_order, &config.opts)
                .map_err(LocalizationError::from)
                .and_then(|t| {
                    let spec = sampler.draw_generic(&t)?;
                    t.series(&spec)
                });
            match series {
                Ok(s) => {
                    let expected = base.power(r as u32);
                    report.record(s.coefficients() == expected.as_slice(), || {
                        format!(
                            "r={r} n={n}: got [{}], r-th power of rank one is [{}]",
                            join(s.coefficients()),
                            join(&expected)
                        )
                    });
                }
                Err(e) => report.record(false, || format!("r={r} n={n}: {e}")),
            }
        }
    }
    report
}

fn specialization_independence(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::SpecializationIndependence);
    let mut sampler = SpecSampler::new(config.seed);
    for table in tables(config, &mut report) {
        let cfg = table.config();
        let mut reference = None;
        for _ in 0..config.specializations {
            let series = sampler
                .draw_generic(&table)
                .and_then(|spec| table.series(&spec));
            match (series, &reference) {
                (Ok(s), None) => {
                    reference = Some(s);
                }
                (Ok(s), Some(first)) => report.record(&s == first, || {
                    format!(
                        "r={} n={}: [{}] vs [{}]",
                        cfg.rank(),
                        cfg.twist(),
                        join(s.coefficients()),
                        join(first.coefficients())
                    )
                }),
                (Err(e), _) => {
                    report.record(false, || format!("r={} n={}: {e}", cfg.rank(), cfg.twist()))
                }
            }
        }
    }
    report
}

fn closed_form(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::ClosedForm);
    let mut sampler = SpecSampler::new(config.seed);
    for table in tables(config, &mut report) {
        let cfg = table.config();
        let expected = closed_form_series(cfg.rank(), cfg.twist(), table.max_order());
        match sampler
            .draw_generic(&table)
            .and_then(|spec| table.series(&spec))
        {
            Ok(s) => report.record(s.coefficients() == expected.coefficients(), || {
                format!(
                    "r={} n={}: got [{}], closed form [{}]",
                    cfg.rank(),
                    cfg.twist(),
                    join(s.coefficients()),
                    join(expected.coefficients())
                )
            }),
            Err(e) => report.record(false, || format!("r={} n={}: {e}", cfg.rank(), cfg.twist())),
        }
    }
    report
}

fn join(xs: &[BigRational]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

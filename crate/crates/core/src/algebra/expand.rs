//! Truncated geometric-series expansion of rational characters.
//!
//! This is the brute-force route to a rational character's Laurent
//! expansion. It shares nothing with exact division and serves as its
//! oracle.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{AlgebraError, CharPoly, CharRational, Monomial, VarContext};

/// An expansion cone: a variable priority deciding which of `m`, `m^-1` is
/// the positive direction, and an integer grading, positive on every
/// denominator factor, that measures expansion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionCone {
    priority: Vec<usize>,
    grading: Option<Vec<i64>>,
}

impl ExpansionCone {
    /// `t1 > t2 > t3 > w1 > ...`, graded by total degree when that is
    /// positive on every factor and by a lexicographic weight otherwise.
    pub fn standard(ctx: VarContext) -> Self {
        Self {
            priority: (0..ctx.num_vars()).collect(),
            grading: None,
        }
    }

    /// A cone with a custom variable priority (a permutation of indices).
    pub fn with_priority(ctx: VarContext, priority: Vec<usize>) -> Result<Self, AlgebraError> {
        let mut seen = priority.clone();
        seen.sort_unstable();
        if seen != (0..ctx.num_vars()).collect::<Vec<_>>() {
            return Err(AlgebraError::BadCone);
        }
        Ok(Self {
            priority,
            grading: None,
        })
    }

    /// Fixes the grading instead of choosing one per character.
    pub fn graded_by(mut self, grading: Vec<i64>) -> Self {
        self.grading = Some(grading);
        self
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    /// The grading used for the given (already cone-positive) factors.
    pub fn grading_for(&self, factors: &[Monomial], nvars: usize) -> Vec<i64> {
        if let Some(g) = &self.grading {
            return g.clone();
        }
        let total = vec![1i64; nvars];
        if factors.iter().all(|m| m.dot(&total) > 0) {
            return total;
        }
        // Lexicographic weight: each variable outweighs everything later in
        // the priority order across the exponent range in play.
        let span = factors
            .iter()
            .flat_map(|m| m.exponents().iter().map(|e| e.unsigned_abs() as i64))
            .sum::<i64>()
            + 1;
        let mut g = vec![0i64; nvars];
        let mut w = 1i64;
        for &i in self.priority.iter().rev() {
            g[i] = w;
            w = w.saturating_mul(span);
        }
        g
    }
}

/// Expansion of `a` as a power series in the cone, keeping the terms of
/// degree at most `order`.
///
/// Factors that are negative in the cone are first rewritten with
/// `1/(1 - m) = -m^-1 / (1 - m^-1)`.
pub fn expand_to_order(
    a: &CharRational,
    cone: &ExpansionCone,
    order: i64,
) -> Result<CharPoly, AlgebraError> {
    let ctx = a.ctx();
    if cone.priority.len() != ctx.num_vars() {
        return Err(AlgebraError::BadCone);
    }
    let mut num = a.numerator().clone();
    let mut factors = Vec::with_capacity(a.denominator_factors().len());
    for m in a.denominator_factors() {
        match m.cone_sign(&cone.priority) {
            Ordering::Greater => factors.push(m.clone()),
            Ordering::Less => {
                let inv = m.inv()?;
                num = num.mul_monomial(&inv)?.try_scale(-1)?;
                factors.push(inv);
            }
            Ordering::Equal => return Err(AlgebraError::NonExpandable(m.to_string())),
        }
    }
    let grading = cone.grading_for(&factors, ctx.num_vars());
    if grading.len() != ctx.num_vars() {
        return Err(AlgebraError::BadCone);
    }
    if let Some(bad) = factors.iter().find(|m| m.dot(&grading) <= 0) {
        return Err(AlgebraError::NonExpandable(bad.to_string()));
    }

    let mut series = num.truncate(&grading, order);
    for f in &factors {
        series = geometric_step(&series, f, &grading, order)?;
    }
    Ok(series)
}

/// `series / (1 - f)` truncated at `order`: `out[x] = series[x] + out[x/f]`,
/// evaluated in increasing degree.
fn geometric_step(
    series: &CharPoly,
    f: &Monomial,
    grading: &[i64],
    order: i64,
) -> Result<CharPoly, AlgebraError> {
    let step = f.dot(grading);
    let mut queue: BTreeMap<(i64, Monomial), i64> = series
        .terms()
        .map(|(m, c)| ((m.dot(grading), m.clone()), c))
        .collect();
    let mut out = CharPoly::zero(series.ctx());
    while let Some(((deg, m), c)) = queue.pop_first() {
        if c == 0 {
            continue;
        }
        if deg + step <= order {
            let next = m.mul(f)?;
            let slot = queue.entry((deg + step, next)).or_insert(0);
            *slot = slot
                .checked_add(c)
                .ok_or(AlgebraError::CoefficientOverflow)?;
        }
        out.add_term(m, c)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_to_order_three() {
        let c = VarContext::new(1).unwrap();
        let t1 = Monomial::t(c, 1);
        let a = CharRational::geometric(c, t1.clone()).unwrap();
        let e = expand_to_order(&a, &ExpansionCone::standard(c), 3).unwrap();
        let expected = CharPoly::from_terms(c, (0..=3).map(|k| (t1.pow(k).unwrap(), 1))).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn agrees_with_exact_division() {
        let c = VarContext::new(1).unwrap();
        let t1 = Monomial::t(c, 1);
        let a = CharRational::new(
            CharPoly::one_minus(c, &t1.pow(3).unwrap()),
            vec![t1.clone()],
        )
        .unwrap();
        let e = expand_to_order(&a, &ExpansionCone::standard(c), 10).unwrap();
        assert_eq!(e, a.reduce_to_polynomial().unwrap());
    }

    #[test]
    fn negative_factor_is_flipped() {
        // In the cone t2 > t1 > ..., 1/(1 - t1 t2^-1) expands in powers of t2 t1^-1.
        let c = VarContext::new(1).unwrap();
        let m = Monomial::from_exponents(c, &[1, -1, 0, 0]).unwrap();
        let a = CharRational::geometric(c, m.clone()).unwrap();
        let cone = ExpansionCone::with_priority(c, vec![1, 0, 2, 3])
            .unwrap()
            .graded_by(vec![0, 1, 0, 0]);
        let e = expand_to_order(&a, &cone, 2).unwrap();
        let inv = m.inv().unwrap();
        let expected =
            CharPoly::from_terms(c, [(inv.clone(), -1), (inv.pow(2).unwrap(), -1)]).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn zero_grade_factor_is_not_expandable() {
        let c = VarContext::new(1).unwrap();
        let a = CharRational::geometric(c, Monomial::t(c, 3)).unwrap();
        let cone = ExpansionCone::standard(c).graded_by(vec![1, 1, 0, 0]);
        assert!(matches!(
            expand_to_order(&a, &cone, 4),
            Err(AlgebraError::NonExpandable(_))
        ));
    }

    #[test]
    fn bad_priority_rejected() {
        let c = VarContext::new(1).unwrap();
        assert_eq!(
            ExpansionCone::with_priority(c, vec![0, 0, 1, 2]),
            Err(AlgebraError::BadCone)
        );
    }
}

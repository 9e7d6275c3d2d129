use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::{AlgebraError, Monomial, VarContext};

/// A finite character: a Laurent polynomial with integer coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    ctx: VarContext,
    terms: BTreeMap<Monomial, i64>,
}

impl CharPoly {
    pub fn zero(ctx: VarContext) -> Self {
        Self {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: VarContext) -> Self {
        Self::monomial(ctx, Monomial::unit(ctx), 1)
    }

    pub fn monomial(ctx: VarContext, m: Monomial, coeff: i64) -> Self {
        debug_assert_eq!(m.rank(), ctx.rank());
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(m, coeff);
        }
        Self { ctx, terms }
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I>(ctx: VarContext, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            if m.rank() != ctx.rank() {
                return Err(AlgebraError::ContextMismatch {
                    left: ctx.rank(),
                    right: m.rank(),
                });
            }
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    /// `t_i` for `i` in 1..=3.
    pub fn t(ctx: VarContext, i: usize) -> Self {
        Self::monomial(ctx, Monomial::t(ctx, i), 1)
    }

    /// `w_i` for `i` in 1..=r.
    pub fn w(ctx: VarContext, i: usize) -> Self {
        Self::monomial(ctx, Monomial::w(ctx, i), 1)
    }

    /// `1 - m`.
    pub fn one_minus(ctx: VarContext, m: &Monomial) -> Self {
        let mut p = Self::one(ctx);
        p.add_term(m.clone(), -1)
            .expect("unit coefficients cannot overflow");
        p
    }

    pub fn ctx(&self) -> VarContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Coefficient of the trivial character.
    pub fn unit_coefficient(&self) -> i64 {
        self.coeff(&Monomial::unit(self.ctx))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Sum of coefficients, i.e. the virtual dimension of the character.
    pub fn rank_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: i64) -> Result<(), AlgebraError> {
        if c == 0 {
            return Ok(());
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o
                    .get()
                    .checked_add(c)
                    .ok_or(AlgebraError::CoefficientOverflow)?;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CharPoly) -> Result<CharPoly, AlgebraError> {
        self.ctx.check(&other.ctx)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &CharPoly) -> Result<CharPoly, AlgebraError> {
        self.ctx.check(&other.ctx)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            let neg = c.checked_neg().ok_or(AlgebraError::CoefficientOverflow)?;
            out.add_term(m.clone(), neg)?;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &CharPoly) -> Result<CharPoly, AlgebraError> {
        self.ctx.check(&other.ctx)?;
        // Accumulate in a hash map; the BTreeMap insert cost dominates otherwise.
        let mut acc: HashMap<Monomial, i64> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let m = ma.mul(mb)?;
                let c = ca
                    .checked_mul(cb)
                    .ok_or(AlgebraError::CoefficientOverflow)?;
                let slot = acc.entry(m).or_insert(0);
                *slot = slot
                    .checked_add(c)
                    .ok_or(AlgebraError::CoefficientOverflow)?;
            }
        }
        Ok(CharPoly {
            ctx: self.ctx,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    pub fn try_scale(&self, k: i64) -> Result<CharPoly, AlgebraError> {
        if k == 0 {
            return Ok(Self::zero(self.ctx));
        }
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            let v = c.checked_mul(k).ok_or(AlgebraError::CoefficientOverflow)?;
            terms.insert(m.clone(), v);
        }
        Ok(CharPoly {
            ctx: self.ctx,
            terms,
        })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<CharPoly, AlgebraError> {
        let mut terms = BTreeMap::new();
        for (x, &c) in &self.terms {
            terms.insert(x.mul(m)?, c);
        }
        Ok(CharPoly {
            ctx: self.ctx,
            terms,
        })
    }

    /// The dual character: every exponent negated.
    pub fn bar(&self) -> CharPoly {
        self.map_monomials(|m| m.inv())
            .expect("negating exponents of a valid monomial cannot collide")
    }

    /// Applies a monomial substitution term by term. Colliding images are
    /// summed.
    pub fn map_monomials<F>(&self, mut f: F) -> Result<CharPoly, AlgebraError>
    where
        F: FnMut(&Monomial) -> Result<Monomial, AlgebraError>,
    {
        let mut out = CharPoly::zero(self.ctx);
        for (m, &c) in &self.terms {
            out.add_term(f(m)?, c)?;
        }
        Ok(out)
    }

    /// Exact division by `(1 - m)`; `None` when a remainder is left.
    ///
    /// Terms are grouped into lines `{x * m^j}`. Along each line the
    /// polynomial is a one-variable polynomial `P(z)` in `z = m`, divisible
    /// by `1 - z` iff its coefficients sum to zero; the quotient is given by
    /// partial sums.
    pub fn div_one_minus(&self, m: &Monomial) -> Result<Option<CharPoly>, AlgebraError> {
        if m.is_unit() {
            return Err(AlgebraError::UnitDenominator);
        }
        let step: Vec<i64> = m.raw().iter().map(|&e| e as i64).collect();
        let norm: i64 = step.iter().map(|e| e * e).sum();
        // line representative -> [(position j, coefficient)]
        let mut lines: HashMap<SmallVec<[i64; 8]>, Vec<(i64, i64)>> = HashMap::new();
        for (x, &c) in &self.terms {
            let proj: i64 = x.raw().iter().zip(&step).map(|(&a, b)| a as i64 * b).sum();
            let j = proj.div_euclid(norm);
            let rep: SmallVec<[i64; 8]> = x
                .raw()
                .iter()
                .zip(&step)
                .map(|(&a, b)| a as i64 - j * b)
                .collect();
            lines.entry(rep).or_default().push((j, c));
        }
        let mut out = CharPoly::zero(self.ctx);
        for (rep, mut pts) in lines {
            pts.sort_unstable();
            let total: i64 = pts.iter().map(|&(_, c)| c).sum();
            if total != 0 {
                return Ok(None);
            }
            let mut running = 0i64;
            for w in 0..pts.len() {
                let (j, c) = pts[w];
                running = running
                    .checked_add(c)
                    .ok_or(AlgebraError::CoefficientOverflow)?;
                let next = if w + 1 < pts.len() {
                    pts[w + 1].0
                } else {
                    j + 1
                };
                if running == 0 {
                    continue;
                }
                for jj in j..next {
                    let exps: SmallVec<[i32; 8]> = rep
                        .iter()
                        .zip(&step)
                        .map(|(&r, &s)| i32::try_from(r + jj * s))
                        .collect::<Result<_, _>>()
                        .map_err(|_| AlgebraError::ExponentOverflow)?;
                    out.add_term(Monomial::from_exponents(self.ctx, &exps)?, running)?;
                }
            }
        }
        Ok(Some(out))
    }

    /// Keeps the terms whose degree under `grading` is at most `max_degree`.
    pub fn truncate(&self, grading: &[i64], max_degree: i64) -> CharPoly {
        CharPoly {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.dot(grading) <= max_degree)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c < 0 {
                ("-", c.unsigned_abs())
            } else {
                ("+", c as u64)
            };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mag, m.is_unit()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => write!(f, "{m}")?,
                _ => write!(f, "{mag}*{m}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&CharPoly> for &CharPoly {
            type Output = CharPoly;
            fn $method(self, rhs: &CharPoly) -> CharPoly {
                self.$try(rhs)
                    .unwrap_or_else(|e| panic!("CharPoly {}: {e}", stringify!($method)))
            }
        }
        impl $trait<CharPoly> for CharPoly {
            type Output = CharPoly;
            fn $method(self, rhs: CharPoly) -> CharPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &CharPoly {
    type Output = CharPoly;
    fn neg(self) -> CharPoly {
        self.try_scale(-1)
            .expect("CharPoly neg: coefficient overflow")
    }
}

impl Neg for CharPoly {
    type Output = CharPoly;
    fn neg(self) -> CharPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(r: usize) -> VarContext {
        VarContext::new(r).unwrap()
    }

    #[test]
    fn additive_inverse_is_empty() {
        let c = ctx(1);
        let t1 = CharPoly::t(c, 1);
        let sum = &t1 + &(-&t1);
        assert!(sum.is_zero());
        assert_eq!(sum.len(), 0);
    }

    #[test]
    fn products() {
        let c = ctx(2);
        let one = CharPoly::one(c);
        let t1 = CharPoly::t(c, 1);
        assert_eq!(&(&one + &t1) * &(&one - &t1), &one - &(&t1 * &t1));

        let t1_inv = t1.bar();
        assert_eq!(&t1 * &t1_inv, one);

        let w1 = CharPoly::w(c, 1);
        let w2 = CharPoly::w(c, 2);
        let wp = &w1 + &w2;
        let lhs = &wp * &wp.bar();
        let expected = CharPoly::from_terms(
            c,
            [
                (Monomial::unit(c), 2),
                (Monomial::from_exponents(c, &[0, 0, 0, 1, -1]).unwrap(), 1),
                (Monomial::from_exponents(c, &[0, 0, 0, -1, 1]).unwrap(), 1),
            ],
        )
        .unwrap();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn bar_negates_exponents() {
        let c = ctx(1);
        let m = Monomial::from_exponents(c, &[2, 0, 0, -1]).unwrap();
        let p = CharPoly::monomial(c, m, 3);
        let expected =
            CharPoly::monomial(c, Monomial::from_exponents(c, &[-2, 0, 0, 1]).unwrap(), 3);
        assert_eq!(p.bar(), expected);
    }

    #[test]
    fn context_mismatch() {
        let a = CharPoly::one(ctx(1));
        let b = CharPoly::one(ctx(2));
        assert!(matches!(
            a.try_add(&b),
            Err(AlgebraError::ContextMismatch { .. })
        ));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn coefficient_overflow_fails_loudly() {
        let c = ctx(1);
        let big = CharPoly::monomial(c, Monomial::unit(c), i64::MAX);
        assert_eq!(big.try_add(&big), Err(AlgebraError::CoefficientOverflow));
        assert_eq!(big.try_mul(&big), Err(AlgebraError::CoefficientOverflow));
    }

    #[test]
    fn geometric_division() {
        let c = ctx(1);
        let t1 = Monomial::t(c, 1);
        let num = CharPoly::one_minus(c, &t1.pow(3).unwrap());
        let q = num.div_one_minus(&t1).unwrap().unwrap();
        let t = CharPoly::t(c, 1);
        assert_eq!(q, &(&CharPoly::one(c) + &t) + &(&t * &t));

        let t1t2 = t1.mul(&Monomial::t(c, 2)).unwrap();
        let num = CharPoly::one_minus(c, &t1t2);
        assert_eq!(num.div_one_minus(&t1).unwrap(), None);
    }

    #[test]
    fn division_along_non_primitive_step() {
        // (1 - t1^4) / (1 - t1^2) = 1 + t1^2, with a gap in the line.
        let c = ctx(1);
        let t1 = Monomial::t(c, 1);
        let num = CharPoly::one_minus(c, &t1.pow(4).unwrap());
        let q = num.div_one_minus(&t1.pow(2).unwrap()).unwrap().unwrap();
        let expected =
            CharPoly::from_terms(c, [(Monomial::unit(c), 1), (t1.pow(2).unwrap(), 1)]).unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn division_recovers_laurent_factor() {
        let c = ctx(2);
        let m = Monomial::from_exponents(c, &[1, -1, 0, 1, -1]).unwrap();
        let p = CharPoly::from_terms(
            c,
            [
                (Monomial::from_exponents(c, &[-2, 1, 3, 0, 1]).unwrap(), 4),
                (Monomial::from_exponents(c, &[0, 0, -1, 1, 0]).unwrap(), -7),
                (Monomial::unit(c), 1),
            ],
        )
        .unwrap();
        let num = &p * &CharPoly::one_minus(c, &m);
        assert_eq!(num.div_one_minus(&m).unwrap(), Some(p));
    }

    #[test]
    fn unit_factor_rejected() {
        let c = ctx(1);
        let p = CharPoly::one(c);
        assert_eq!(
            p.div_one_minus(&Monomial::unit(c)),
            Err(AlgebraError::UnitDenominator)
        );
    }

    #[test]
    fn display() {
        let c = ctx(1);
        let p =
            &(&CharPoly::one(c) - &CharPoly::t(c, 1)) + &CharPoly::w(c, 1).try_scale(2).unwrap();
        assert_eq!(p.to_string(), "1 + 2*w1 - t1");
    }
}

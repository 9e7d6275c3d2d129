use std::fmt;

use super::{AlgebraError, CharPoly, Monomial, VarContext};

/// A rational character `numerator / prod (1 - m_i)`.
///
/// Canonical form: every denominator monomial is lexicographically positive
/// (`t1 > t2 > t3 > w1 > ...`) and the factor list is sorted. A negative
/// factor is flipped with `1/(1 - m) = -m^-1 / (1 - m^-1)`. A zero numerator
/// carries no denominator.
#[derive(Clone)]
pub struct CharRational {
    num: CharPoly,
    den: Vec<Monomial>,
}

impl CharRational {
    pub fn new(num: CharPoly, den: Vec<Monomial>) -> Result<Self, AlgebraError> {
        let ctx = num.ctx();
        let mut num = num;
        let mut out = Vec::with_capacity(den.len());
        for m in den {
            if m.rank() != ctx.rank() {
                return Err(AlgebraError::ContextMismatch {
                    left: ctx.rank(),
                    right: m.rank(),
                });
            }
            if m.is_unit() {
                return Err(AlgebraError::UnitDenominator);
            }
            if m.is_positive() {
                out.push(m);
            } else {
                let inv = m.inv()?;
                num = num.mul_monomial(&inv)?.try_scale(-1)?;
                out.push(inv);
            }
        }
        if num.is_zero() {
            out.clear();
        }
        out.sort();
        Ok(Self { num, den: out })
    }

    pub fn from_poly(p: CharPoly) -> Self {
        Self {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn zero(ctx: VarContext) -> Self {
        Self::from_poly(CharPoly::zero(ctx))
    }

    /// `1 / (1 - m)`.
    pub fn geometric(ctx: VarContext, m: Monomial) -> Result<Self, AlgebraError> {
        Self::new(CharPoly::one(ctx), vec![m])
    }

    pub fn ctx(&self) -> VarContext {
        self.num.ctx()
    }

    pub fn numerator(&self) -> &CharPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[Monomial] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Expanded denominator `prod (1 - m_i)` over the given factors.
    fn product_of(ctx: VarContext, factors: &[Monomial]) -> Result<CharPoly, AlgebraError> {
        let mut acc = CharPoly::one(ctx);
        for m in factors {
            acc = acc.try_mul(&CharPoly::one_minus(ctx, m))?;
        }
        Ok(acc)
    }

    /// Multiset difference `a \ b` of sorted factor lists.
    fn missing(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() {
            if j < b.len() && a[i] == b[j] {
                i += 1;
                j += 1;
            } else if j < b.len() && b[j] < a[i] {
                j += 1;
            } else {
                out.push(a[i].clone());
                i += 1;
            }
        }
        out
    }

    /// Multiset union with maximal multiplicities.
    fn lcm(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
        let mut out = a.to_vec();
        out.extend(Self::missing(b, a));
        out.sort();
        out
    }

    pub fn try_add(&self, other: &CharRational) -> Result<CharRational, AlgebraError> {
        self.ctx().check(&other.ctx())?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let ctx = self.ctx();
        let den = Self::lcm(&self.den, &other.den);
        let a = self
            .num
            .try_mul(&Self::product_of(ctx, &Self::missing(&den, &self.den))?)?;
        let b = other
            .num
            .try_mul(&Self::product_of(ctx, &Self::missing(&den, &other.den))?)?;
        let num = a.try_add(&b)?;
        let den = if num.is_zero() { Vec::new() } else { den };
        Ok(Self { num, den })
    }

    pub fn try_neg(&self) -> Result<CharRational, AlgebraError> {
        Ok(Self {
            num: self.num.try_scale(-1)?,
            den: self.den.clone(),
        })
    }

    pub fn try_sub(&self, other: &CharRational) -> Result<CharRational, AlgebraError> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_mul(&self, other: &CharRational) -> Result<CharRational, AlgebraError> {
        self.ctx().check(&other.ctx())?;
        let num = self.num.try_mul(&other.num)?;
        if num.is_zero() {
            return Ok(Self::zero(self.ctx()));
        }
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        den.sort();
        Ok(Self { num, den })
    }

    pub fn mul_poly(&self, p: &CharPoly) -> Result<CharRational, AlgebraError> {
        self.try_mul(&Self::from_poly(p.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<CharRational, AlgebraError> {
        Ok(Self {
            num: self.num.mul_monomial(m)?,
            den: self.den.clone(),
        })
    }

    /// Dual character, renormalized to canonical factored form.
    pub fn bar(&self) -> CharRational {
        let den = self
            .den
            .iter()
            .map(|m| m.inv().expect("canonical factors invert"))
            .collect();
        Self::new(self.num.bar(), den).expect("bar of a canonical character is valid")
    }

    /// Applies a monomial substitution that is a group homomorphism of the
    /// character lattice, then renormalizes the factors.
    pub fn map_monomials<F>(&self, mut f: F) -> Result<CharRational, AlgebraError>
    where
        F: FnMut(&Monomial) -> Result<Monomial, AlgebraError>,
    {
        let num = self.num.map_monomials(&mut f)?;
        let den = self.den.iter().map(&mut f).collect::<Result<Vec<_>, _>>()?;
        Self::new(num, den)
    }

    /// Cancels every denominator factor that divides the numerator exactly.
    pub fn simplify(&self) -> Result<CharRational, AlgebraError> {
        let mut num = self.num.clone();
        let mut den = Vec::with_capacity(self.den.len());
        for m in &self.den {
            match num.div_one_minus(m)? {
                Some(q) => num = q,
                None => den.push(m.clone()),
            }
        }
        if num.is_zero() {
            den.clear();
        }
        Ok(Self { num, den })
    }

    /// The unique Laurent polynomial `p` with `p * prod (1 - m_i) = numerator`.
    pub fn reduce_to_polynomial(&self) -> Result<CharPoly, AlgebraError> {
        let mut num = self.num.clone();
        for m in &self.den {
            num = num.div_one_minus(m)?.ok_or_else(|| {
                AlgebraError::NotPolynomial(format!("remainder on division by (1 - {m})"))
            })?;
        }
        Ok(num)
    }

    /// Exact equality by cross-multiplication, after cancelling shared
    /// factors.
    pub fn equals(&self, other: &CharRational) -> Result<bool, AlgebraError> {
        self.ctx().check(&other.ctx())?;
        let ctx = self.ctx();
        let only_self = Self::missing(&self.den, &other.den);
        let only_other = Self::missing(&other.den, &self.den);
        let lhs = self.num.try_mul(&Self::product_of(ctx, &only_other)?)?;
        let rhs = other.num.try_mul(&Self::product_of(ctx, &only_self)?)?;
        Ok(lhs == rhs)
    }
}

impl PartialEq for CharRational {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl fmt::Debug for CharRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CharRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ", self.num)?;
        for (i, m) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "(1 - {m})")?;
        }
        Ok(())
    }
}

impl From<CharPoly> for CharRational {
    fn from(p: CharPoly) -> Self {
        Self::from_poly(p)
    }
}

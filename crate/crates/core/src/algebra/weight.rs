use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::monomial::T_VARS;
use super::{AlgebraError, Monomial, VarContext};

/// A linear form `a s1 + b s2 + c s3 + sum e_i v_i` with rational
/// coefficients: the equivariant weight of a character.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightForm {
    coeffs: Vec<BigRational>,
}

impl WeightForm {
    pub fn zero(ctx: VarContext) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); ctx.num_vars()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }
    }

    /// Weight of a monomial: its exponent vector read in the basis
    /// `(s1, s2, s3, v1, ..., vr)`.
    pub fn of(m: &Monomial) -> Self {
        Self {
            coeffs: m
                .exponents()
                .iter()
                .map(|&e| BigRational::from_integer(e.into()))
                .collect(),
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &WeightForm) -> Result<WeightForm, AlgebraError> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(AlgebraError::ContextMismatch {
                left: self.coeffs.len().saturating_sub(T_VARS),
                right: other.coeffs.len().saturating_sub(T_VARS),
            });
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn evaluate(&self, spec: &Specialization) -> Result<BigRational, AlgebraError> {
        if self.coeffs.len() != spec.values.len() {
            return Err(AlgebraError::SpecializationArity {
                expected: self.coeffs.len().saturating_sub(T_VARS),
                got: spec.values.len() - T_VARS,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&spec.values)
            .map(|(a, x)| a * x)
            .sum())
    }
}

impl fmt::Display for WeightForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if i < T_VARS {
                format!("s{}", i + 1)
            } else {
                format!("v{}", i - T_VARS + 1)
            };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if mag == BigRational::from_integer(1.into()) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeightForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Numeric values for `(s1, s2, s3)` and `(v1, ..., vr)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Specialization {
    values: Vec<BigRational>,
    cy_constrained: bool,
}

impl Specialization {
    pub fn new(
        s: [BigRational; 3],
        v: Vec<BigRational>,
        cy_constrained: bool,
    ) -> Result<Self, AlgebraError> {
        if v.is_empty() {
            return Err(AlgebraError::ZeroRank);
        }
        if cy_constrained && !(&s[0] + &s[1] + &s[2]).is_zero() {
            return Err(AlgebraError::NotCalabiYau);
        }
        let mut values: Vec<BigRational> = s.into_iter().collect();
        values.extend(v);
        Ok(Self {
            values,
            cy_constrained,
        })
    }

    /// Calabi-Yau specialization from integers, with `s3 = -s1 - s2`.
    pub fn calabi_yau(s1: i64, s2: i64, v: &[i64]) -> Result<Self, AlgebraError> {
        let r = |x: i64| BigRational::from_integer(x.into());
        Self::new(
            [r(s1), r(s2), r(-s1 - s2)],
            v.iter().map(|&x| r(x)).collect(),
            true,
        )
    }

    /// Specialization from integers without the Calabi-Yau constraint.
    pub fn unconstrained(s: [i64; 3], v: &[i64]) -> Result<Self, AlgebraError> {
        let r = |x: i64| BigRational::from_integer(x.into());
        Self::new(
            [r(s[0]), r(s[1]), r(s[2])],
            v.iter().map(|&x| r(x)).collect(),
            false,
        )
    }

    pub fn rank(&self) -> usize {
        self.values.len() - T_VARS
    }

    pub fn s(&self) -> &[BigRational] {
        &self.values[..T_VARS]
    }

    pub fn v(&self) -> &[BigRational] {
        &self.values[T_VARS..]
    }

    pub fn is_cy_constrained(&self) -> bool {
        self.cy_constrained
    }

    /// Whether `s1 + s2 + s3 = 0` holds, flagged or not.
    pub fn satisfies_cy(&self) -> bool {
        (&self.values[0] + &self.values[1] + &self.values[2]).is_zero()
    }

    /// Shortcut for `WeightForm::of(m).evaluate(self)`.
    pub fn weight_of(&self, m: &Monomial) -> BigRational {
        debug_assert_eq!(m.exponents().len(), self.values.len());
        let mut acc = BigRational::zero();
        for (&e, x) in m.exponents().iter().zip(&self.values) {
            if e != 0 {
                acc += x * BigRational::from_integer(e.into());
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specialize_monomial() {
        let ctx = VarContext::new(2).unwrap();
        let m = Monomial::from_exponents(ctx, &[1, -1, 0, 1, 0]).unwrap();
        let form = WeightForm::of(&m);
        assert_eq!(form.to_string(), "s1 - s2 + v1");
        let spec = Specialization::calabi_yau(1, 2, &[5, 7]).unwrap();
        assert_eq!(spec.s()[2], BigRational::from_integer((-3).into()));
        assert_eq!(
            form.evaluate(&spec).unwrap(),
            BigRational::from_integer(4.into())
        );
        assert_eq!(spec.weight_of(&m), form.evaluate(&spec).unwrap());
    }

    #[test]
    fn unit_monomial_has_zero_weight() {
        let ctx = VarContext::new(1).unwrap();
        let form = WeightForm::of(&Monomial::unit(ctx));
        assert!(form.is_zero());
        assert_eq!(form, WeightForm::zero(ctx));
    }

    #[test]
    fn cy_flag_is_enforced() {
        let r = |x: i64| BigRational::from_integer(x.into());
        assert_eq!(
            Specialization::new([r(1), r(2), r(3)], vec![r(1)], true),
            Err(AlgebraError::NotCalabiYau)
        );
        let spec = Specialization::new([r(1), r(2), r(3)], vec![r(1)], false).unwrap();
        assert!(!spec.satisfies_cy());
    }

    #[test]
    fn arity_mismatch() {
        let ctx = VarContext::new(2).unwrap();
        let spec = Specialization::calabi_yau(1, 2, &[5]).unwrap();
        assert!(WeightForm::of(&Monomial::unit(ctx))
            .evaluate(&spec)
            .is_err());
    }
}

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::AlgebraError;

/// Number of geometric torus variables `t1, t2, t3`.
pub const T_VARS: usize = 3;

/// The variable alphabet `t1, t2, t3, w1, ..., wr`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarContext {
    rank: usize,
}

impl VarContext {
    pub fn new(rank: usize) -> Result<Self, AlgebraError> {
        if rank == 0 {
            return Err(AlgebraError::ZeroRank);
        }
        Ok(Self { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vars(&self) -> usize {
        T_VARS + self.rank
    }

    /// Index of `w_i` (1-based `i`) in an exponent vector.
    pub fn w_index(&self, i: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.rank);
        T_VARS + i - 1
    }

    pub fn var_name(&self, index: usize) -> String {
        if index < T_VARS {
            format!("t{}", index + 1)
        } else {
            format!("w{}", index - T_VARS + 1)
        }
    }

    pub(crate) fn check(&self, other: &VarContext) -> Result<(), AlgebraError> {
        if self.rank != other.rank {
            return Err(AlgebraError::ContextMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }
}

/// A torus character `t1^a t2^b t3^c w1^e1 ... wr^er`, stored as its
/// exponent vector. The derived ordering is lexicographic in
/// `t1 > t2 > t3 > w1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[i32; 8]>);

impl Monomial {
    pub fn unit(ctx: VarContext) -> Self {
        Monomial(SmallVec::from_elem(0, ctx.num_vars()))
    }

    /// Builds a monomial from an exponent vector of length `3 + r`.
    pub fn from_exponents(ctx: VarContext, exps: &[i32]) -> Result<Self, AlgebraError> {
        if exps.len() != ctx.num_vars() {
            return Err(AlgebraError::ContextMismatch {
                left: ctx.rank(),
                right: exps.len().saturating_sub(T_VARS),
            });
        }
        Ok(Monomial(SmallVec::from_slice(exps)))
    }

    /// `t_i` for `i` in 1..=3.
    pub fn t(ctx: VarContext, i: usize) -> Self {
        assert!((1..=T_VARS).contains(&i), "t-variable index out of range");
        let mut m = Self::unit(ctx);
        m.0[i - 1] = 1;
        m
    }

    /// `w_i` for `i` in 1..=r.
    pub fn w(ctx: VarContext, i: usize) -> Self {
        assert!(i >= 1 && i <= ctx.rank(), "w-variable index out of range");
        let mut m = Self::unit(ctx);
        m.0[ctx.w_index(i)] = 1;
        m
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> i32 {
        self.0[index]
    }

    pub fn rank(&self) -> usize {
        self.0.len() - T_VARS
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, AlgebraError> {
        if self.0.len() != other.0.len() {
            return Err(AlgebraError::ContextMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let mut out = self.0.clone();
        for (a, b) in out.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).ok_or(AlgebraError::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    pub fn inv(&self) -> Result<Monomial, AlgebraError> {
        let mut out = self.0.clone();
        for e in out.iter_mut() {
            *e = e.checked_neg().ok_or(AlgebraError::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    pub fn pow(&self, k: i32) -> Result<Monomial, AlgebraError> {
        let mut out = self.0.clone();
        for e in out.iter_mut() {
            *e = e.checked_mul(k).ok_or(AlgebraError::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    /// Applies an integer-linear substitution of exponent vectors.
    pub fn map_exponents<F>(&self, f: F) -> Result<Monomial, AlgebraError>
    where
        F: FnOnce(&[i32]) -> Result<SmallVec<[i32; 8]>, AlgebraError>,
    {
        let out = f(&self.0)?;
        debug_assert_eq!(out.len(), self.0.len());
        Ok(Monomial(out))
    }

    /// Sign of the first nonzero exponent taken in the given variable
    /// priority order. The unit monomial compares `Equal`.
    pub fn cone_sign(&self, priority: &[usize]) -> Ordering {
        for &i in priority {
            match self.0[i].cmp(&0) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Lexicographically positive in the default order `t1 > t2 > ... > wr`.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&e| e != 0).is_some_and(|&e| e > 0)
    }

    pub fn dot(&self, grading: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(grading)
            .map(|(&e, &g)| e as i64 * g)
            .sum()
    }

    pub(crate) fn raw(&self) -> &SmallVec<[i32; 8]> {
        &self.0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let ctx = VarContext { rank: self.rank() };
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", ctx.var_name(i))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

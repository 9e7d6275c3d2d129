//! Local P^1, the total space of `O(-1) + O(-1) -> P^1`, and its torus-fixed
//! highly frozen triples.
//!
//! The two fixed points of the base are covered by the patches `U_alpha`
//! (over 0) and `U_beta` (over infinity). All characters are written in the
//! patch's own coordinates `(t1, t2, t3)`, with `t1` along the base curve and
//! `t2, t3` along the fibres; [`patch_transition`] converts between them.
//!
//! A `G`-fixed triple with `E = O(-n)^r` splits into `r` torus-fixed stable
//! pairs, one per `T0`-weight `w_i`. With the zero section as support and
//! multiplicity one, each summand is determined by how many boxes its
//! cokernel has at each of the two vertices.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::algebra::{AlgebraError, CharPoly, CharRational, Monomial, VarContext};

/// Degrees of the normal bundle summands `O(a) + O(b)` of the base curve.
pub const NORMAL_DEGREES: (i32, i32) = (-1, -1);

/// Rank `r` and twist `n` of `E = O_X(-n)^r` on local P^1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalP1Config {
    rank: usize,
    twist: u32,
}

impl LocalP1Config {
    pub fn new(rank: usize, twist: u32) -> Result<Self, AlgebraError> {
        VarContext::new(rank)?;
        Ok(Self { rank, twist })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn ctx(&self) -> VarContext {
        VarContext::new(self.rank).expect("rank validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Patch {
    Alpha,
    Beta,
}

/// A `G`-fixed highly frozen triple: per-summand cokernel lengths at the two
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    config: LocalP1Config,
    alpha: SmallVec<[u32; 4]>,
    beta: SmallVec<[u32; 4]>,
}

impl FixedPoint {
    pub fn new(config: LocalP1Config, alpha: &[u32], beta: &[u32]) -> Result<Self, AlgebraError> {
        if alpha.len() != config.rank() || beta.len() != config.rank() {
            return Err(AlgebraError::ContextMismatch {
                left: config.rank(),
                right: alpha.len().max(beta.len()),
            });
        }
        Ok(Self {
            config,
            alpha: SmallVec::from_slice(alpha),
            beta: SmallVec::from_slice(beta),
        })
    }

    pub fn config(&self) -> LocalP1Config {
        self.config
    }

    pub fn d_alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn d_beta(&self) -> &[u32] {
        &self.beta
    }

    pub fn lengths(&self, patch: Patch) -> &[u32] {
        match patch {
            Patch::Alpha => &self.alpha,
            Patch::Beta => &self.beta,
        }
    }

    /// Length of the cokernel of `E -> F`.
    pub fn total_length(&self) -> u32 {
        self.alpha.iter().chain(self.beta.iter()).sum()
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |d: &[u32]| d.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "(({}),({}))", join(&self.alpha), join(&self.beta))
    }
}

/// All fixed points with cokernel length `k`: compositions of `k` into `2r`
/// parts `(d_alpha, d_beta)`, in decreasing lexicographic order of the
/// concatenated vector.
pub fn enumerate_fixed_points(config: LocalP1Config, k: u32) -> Vec<FixedPoint> {
    let r = config.rank();
    let mut out = Vec::new();
    let mut parts = vec![0u32; 2 * r];
    fill(&mut parts, 0, k, &mut |p| {
        out.push(FixedPoint {
            config,
            alpha: SmallVec::from_slice(&p[..r]),
            beta: SmallVec::from_slice(&p[r..]),
        });
    });
    out
}

fn fill(parts: &mut [u32], at: usize, left: u32, emit: &mut dyn FnMut(&[u32])) {
    if at + 1 == parts.len() {
        parts[at] = left;
        emit(parts);
        return;
    }
    for v in (0..=left).rev() {
        parts[at] = v;
        fill(parts, at + 1, left - v, emit);
    }
}

/// Exponent substitution between patch coordinates:
/// `t1 -> t1^-1`, `t2 -> t1^-a t2`, `t3 -> t1^-b t3` for normal degrees
/// `(a, b)`. Self-inverse.
pub fn transition_monomial(m: &Monomial) -> Result<Monomial, AlgebraError> {
    let (a, b) = NORMAL_DEGREES;
    m.map_exponents(|e| {
        let mut out: SmallVec<[i32; 8]> = SmallVec::from_slice(e);
        let shift = e[1]
            .checked_mul(-a)
            .zip(e[2].checked_mul(-b))
            .and_then(|(x, y)| x.checked_add(y))
            .and_then(|s| s.checked_sub(e[0]))
            .ok_or(AlgebraError::ExponentOverflow)?;
        out[0] = shift;
        Ok(out)
    })
}

/// Characters that can be moved between the two patch coordinate systems.
pub trait PatchTransition: Sized {
    fn patch_transition(&self) -> Result<Self, AlgebraError>;
}

impl PatchTransition for CharPoly {
    fn patch_transition(&self) -> Result<Self, AlgebraError> {
        self.map_monomials(transition_monomial)
    }
}

impl PatchTransition for CharRational {
    fn patch_transition(&self) -> Result<Self, AlgebraError> {
        self.map_monomials(transition_monomial)
    }
}

/// Character of `F` on a patch, in that patch's coordinates:
/// `sum_i w_i t1^(-d_i) / (1 - t1)`.
///
/// Summand `i` is the structure sheaf of the curve extended by `d_i` boxes
/// in the negative leg direction.
pub fn sheaf_character(fp: &FixedPoint, patch: Patch) -> Result<CharRational, AlgebraError> {
    let ctx = fp.config.ctx();
    let mut num = CharPoly::zero(ctx);
    for (i, &d) in fp.lengths(patch).iter().enumerate() {
        let mut exps = vec![0i32; ctx.num_vars()];
        exps[0] = -i32::try_from(d).map_err(|_| AlgebraError::ExponentOverflow)?;
        exps[ctx.w_index(i + 1)] = 1;
        num.add_term(Monomial::from_exponents(ctx, &exps)?, 1)?;
    }
    CharRational::new(num, vec![Monomial::t(ctx, 1)])
}

/// The `t1`-independent part of `F` on the overlap: `w1 + ... + wr`.
pub fn overlap_character(fp: &FixedPoint) -> CharPoly {
    let ctx = fp.config.ctx();
    (1..=ctx.rank()).fold(CharPoly::zero(ctx), |acc, i| &acc + &CharPoly::w(ctx, i))
}

//! Čech assembly of the virtual tangent character at a fixed point.
//!
//! On each patch the character of `chi(O, O) - chi(I, I)` for
//! `I = [O(-n)^r -> F]` is
//!
//! ```text
//! F W-/t1^n - Fbar W+ t1^n/(t1 t2 t3) + F Fbar (1-t1)(1-t2)(1-t3)/(t1 t2 t3)
//!     + (1 - W+ W-) / ((1-t1)(1-t2)(1-t3))
//! ```
//!
//! with `W+ = sum w_i`, `W- = sum w_i^-1`. The overlap contributes the
//! two-variable bracket of the same shape times `delta(t1)`. Splitting
//! `delta(t1) = 1/(1-t1) + t1^-1/(1-t1^-1)` and assigning the halves to the
//! patches leaves a Laurent polynomial on each side.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, CharPoly, CharRational, Monomial, VarContext};
use crate::geometry::{overlap_character, sheaf_character, FixedPoint, Patch, PatchTransition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VertexError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("character at {fixed_point} is not finite ({part}): {detail}")]
    NotFinite {
        fixed_point: String,
        part: &'static str,
        detail: String,
    },
    #[error("character at {fixed_point} has a fixed part with coefficient {coefficient}")]
    FixedPart {
        fixed_point: String,
        coefficient: i64,
    },
}

/// Placement of the `O(-n)` twist factor in the beta-patch template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BetaTwist {
    /// The beta template is the alpha template read in beta coordinates:
    /// `Hom(O(-n), F)` carries `t1^-n` in the local coordinate.
    #[default]
    Symmetric,
    /// The alpha-coordinate factor `t1^-n` is carried across by the patch
    /// transition, so the beta template carries `t1^n` locally.
    Transported,
}

/// Signs of the Serre-dual terms in the overlap bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EdgeSigns {
    /// Duality on the two-dimensional overlap:
    /// `F W- + Fbar W+/(t2 t3) - F Fbar (1-t2)(1-t3)/(t2 t3) + ...`.
    #[default]
    SerreDual,
    /// The three-dimensional signs copied onto the overlap:
    /// `F W- - Fbar W+/(t2 t3) + F Fbar (1-t2)(1-t3)/(t2 t3) + ...`.
    Printed,
}

/// Convention switches for the assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PipelineOptions {
    pub beta_twist: BetaTwist,
    pub edge_signs: EdgeSigns,
    /// Add the edge remainder: the difference between the beta half of
    /// `delta(t1)` taken in alpha coordinates and the same half taken in beta
    /// coordinates. Finite only in rank one.
    pub include_edge: bool,
    /// Test hook: multiplies the alpha sheaf character by `1/(1 - t2)`.
    #[doc(hidden)]
    pub corrupt_sheaf: bool,
}

impl PipelineOptions {
    pub fn with_edge(mut self, include_edge: bool) -> Self {
        self.include_edge = include_edge;
        self
    }

    pub fn with_beta_twist(mut self, beta_twist: BetaTwist) -> Self {
        self.beta_twist = beta_twist;
        self
    }

    pub fn with_edge_signs(mut self, edge_signs: EdgeSigns) -> Self {
        self.edge_signs = edge_signs;
        self
    }
}

/// A finite virtual tangent character with no trivial summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentCharacter {
    value: CharPoly,
    source: FixedPoint,
}

impl TangentCharacter {
    /// Wraps a finite character, rejecting a nonzero trivial part.
    pub fn new(value: CharPoly, source: FixedPoint) -> Result<Self, VertexError> {
        let c = value.unit_coefficient();
        if c != 0 {
            return Err(VertexError::FixedPart {
                fixed_point: source.to_string(),
                coefficient: c,
            });
        }
        Ok(Self { value, source })
    }

    pub fn value(&self) -> &CharPoly {
        &self.value
    }

    pub fn source(&self) -> &FixedPoint {
        &self.source
    }
}

impl fmt::Display for TangentCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn w_sums(ctx: VarContext) -> (CharPoly, CharPoly) {
    let plus = (1..=ctx.rank()).fold(CharPoly::zero(ctx), |acc, i| &acc + &CharPoly::w(ctx, i));
    let minus = plus.bar();
    (plus, minus)
}

/// `1 - W+ W-`, the character of `Hom(O, O) - Hom(O^r, O^r)` per unit of
/// `chi(O, O)`. Zero in rank one.
pub fn w_scalar(ctx: VarContext) -> CharPoly {
    let (plus, minus) = w_sums(ctx);
    &CharPoly::one(ctx) - &(&plus * &minus)
}

fn t_power(ctx: VarContext, e: i32) -> Monomial {
    let mut exps = vec![0; ctx.num_vars()];
    exps[0] = e;
    Monomial::from_exponents(ctx, &exps).expect("length matches context")
}

fn t_product(ctx: VarContext, which: &[usize]) -> Monomial {
    let mut exps = vec![0; ctx.num_vars()];
    for &i in which {
        exps[i - 1] = 1;
    }
    Monomial::from_exponents(ctx, &exps).expect("length matches context")
}

fn one_minus_product(ctx: VarContext, which: &[usize]) -> CharPoly {
    which.iter().fold(CharPoly::one(ctx), |acc, &i| {
        &acc * &CharPoly::one_minus(ctx, &Monomial::t(ctx, i))
    })
}

/// The vertex template in one patch's coordinates, for a sheaf character
/// `f` and twist factor `t1^twist` on `Hom(E, F)`-dual terms.
fn vertex_template(
    ctx: VarContext,
    f: &CharRational,
    twist: i32,
) -> Result<CharRational, AlgebraError> {
    let (plus, minus) = w_sums(ctx);
    let fbar = f.bar();
    let kappa_inv = t_product(ctx, &[1, 2, 3]).inv()?;

    let hom = f.mul_poly(&minus)?.mul_monomial(&t_power(ctx, -twist))?;
    let dual = fbar
        .mul_poly(&plus)?
        .mul_monomial(&t_power(ctx, twist))?
        .mul_monomial(&kappa_inv)?;
    let self_ext = f
        .try_mul(&fbar)?
        .mul_poly(&one_minus_product(ctx, &[1, 2, 3]))?
        .mul_monomial(&kappa_inv)?;
    let frame = CharRational::new(
        w_scalar(ctx),
        vec![
            Monomial::t(ctx, 1),
            Monomial::t(ctx, 2),
            Monomial::t(ctx, 3),
        ],
    )?;
    hom.try_sub(&dual)?.try_add(&self_ext)?.try_add(&frame)
}

fn twist_exponent(fp: &FixedPoint) -> Result<i32, AlgebraError> {
    i32::try_from(fp.config().twist()).map_err(|_| AlgebraError::ExponentOverflow)
}

fn patch_sheaf(
    fp: &FixedPoint,
    patch: Patch,
    opts: &PipelineOptions,
) -> Result<CharRational, AlgebraError> {
    let f = sheaf_character(fp, patch)?;
    if opts.corrupt_sheaf && patch == Patch::Alpha {
        let ctx = fp.config().ctx();
        return f.try_mul(&CharRational::geometric(ctx, Monomial::t(ctx, 2))?);
    }
    Ok(f)
}

/// Vertex character on a patch, in that patch's own coordinates.
pub fn vertex_character(
    fp: &FixedPoint,
    patch: Patch,
    opts: &PipelineOptions,
) -> Result<CharRational, AlgebraError> {
    let ctx = fp.config().ctx();
    let n = twist_exponent(fp)?;
    let twist = match (patch, opts.beta_twist) {
        (Patch::Alpha, _) | (Patch::Beta, BetaTwist::Symmetric) => n,
        (Patch::Beta, BetaTwist::Transported) => -n,
    };
    vertex_template(ctx, &patch_sheaf(fp, patch, opts)?, twist)
}

/// The overlap bracket multiplying `delta(t1)`, a character in
/// `t2, t3, w`.
pub fn edge_bracket(fp: &FixedPoint, signs: EdgeSigns) -> Result<CharRational, AlgebraError> {
    let ctx = fp.config().ctx();
    let (plus, minus) = w_sums(ctx);
    let f = overlap_character(fp);
    let fbar = f.bar();
    let kappa_inv = t_product(ctx, &[2, 3]).inv()?;

    let hom = &f * &minus;
    let dual = (&fbar * &plus).mul_monomial(&kappa_inv)?;
    let self_ext = (&(&f * &fbar) * &one_minus_product(ctx, &[2, 3])).mul_monomial(&kappa_inv)?;
    let finite = match signs {
        EdgeSigns::SerreDual => &(&hom + &dual) - &self_ext,
        EdgeSigns::Printed => &(&hom - &dual) + &self_ext,
    };
    let frame = CharRational::new(
        w_scalar(ctx),
        vec![Monomial::t(ctx, 2), Monomial::t(ctx, 3)],
    )?;
    CharRational::from_poly(finite).try_add(&frame)
}

/// The overlap character with `delta(t1)` split between the patches.
#[derive(Debug, Clone)]
pub struct EdgeCharacter {
    /// The bracket multiplying `delta(t1)`.
    pub bracket: CharRational,
    /// `bracket / (1 - t1)`, alpha coordinates.
    pub alpha_assigned: CharRational,
    /// `bracket * t1^-1 / (1 - t1^-1)` moved into beta coordinates.
    pub beta_assigned: CharRational,
}

impl EdgeCharacter {
    /// The beta-assigned half of `delta(t1)`, re-expanded in the beta patch's
    /// own fibre coordinates: `bracket / (1 - t1)` read in beta
    /// coordinates.
    pub fn beta_local(&self) -> &CharRational {
        &self.alpha_assigned
    }
}

pub fn edge_character(
    fp: &FixedPoint,
    opts: &PipelineOptions,
) -> Result<EdgeCharacter, AlgebraError> {
    let ctx = fp.config().ctx();
    let bracket = edge_bracket(fp, opts.edge_signs)?;
    let t1 = Monomial::t(ctx, 1);
    let t1_inv = t1.inv()?;
    let alpha_assigned = bracket.try_mul(&CharRational::geometric(ctx, t1.clone())?)?;
    let upper = CharRational::geometric(ctx, t1_inv.clone())?.mul_monomial(&t1_inv)?;
    let beta_assigned = bracket.try_mul(&upper)?.patch_transition()?;
    Ok(EdgeCharacter {
        bracket,
        alpha_assigned,
        beta_assigned,
    })
}

/// The pieces of the assembled character, all in alpha coordinates.
#[derive(Debug, Clone)]
pub struct AssembledCharacter {
    /// Alpha vertex minus its half of the overlap.
    pub alpha: CharRational,
    /// Beta vertex minus its locally expanded half of the overlap.
    pub beta: CharRational,
    /// The edge remainder, present when requested.
    pub edge: Option<CharRational>,
}

impl AssembledCharacter {
    pub fn total(&self) -> Result<CharRational, AlgebraError> {
        let sum = self.alpha.try_add(&self.beta)?;
        match &self.edge {
            Some(e) => sum.try_add(e),
            None => Ok(sum),
        }
    }
}

/// `tr_alpha + tr_beta - tr_alphabeta` as rational pieces, before
/// reduction.
pub fn assemble(
    fp: &FixedPoint,
    opts: &PipelineOptions,
) -> Result<AssembledCharacter, AlgebraError> {
    let edge = edge_character(fp, opts)?;
    let alpha = vertex_character(fp, Patch::Alpha, opts)?.try_sub(&edge.alpha_assigned)?;
    let beta_local = vertex_character(fp, Patch::Beta, opts)?.try_sub(edge.beta_local())?;
    let beta = beta_local.patch_transition()?;
    let edge_term = if opts.include_edge {
        // literal beta half minus the locally expanded one, with the Čech sign
        let remainder = edge.beta_assigned.try_sub(edge.beta_local())?;
        Some(remainder.patch_transition()?.try_neg()?)
    } else {
        None
    };
    Ok(AssembledCharacter {
        alpha,
        beta,
        edge: edge_term,
    })
}

/// The virtual tangent character at a fixed point.
pub fn virtual_tangent(
    fp: &FixedPoint,
    opts: &PipelineOptions,
) -> Result<TangentCharacter, VertexError> {
    let parts = assemble(fp, opts)?;
    let not_finite = |part: &'static str, e: AlgebraError| match e {
        AlgebraError::NotPolynomial(detail) => VertexError::NotFinite {
            fixed_point: fp.to_string(),
            part,
            detail,
        },
        other => VertexError::Algebra(other),
    };
    let mut value = parts
        .alpha
        .reduce_to_polynomial()
        .map_err(|e| not_finite("alpha vertex", e))?;
    value = &value
        + &parts
            .beta
            .reduce_to_polynomial()
            .map_err(|e| not_finite("beta vertex", e))?;
    if let Some(edge) = &parts.edge {
        value = &value
            + &edge
                .reduce_to_polynomial()
                .map_err(|e| not_finite("edge", e))?;
    }
    TangentCharacter::new(value, fp.clone())
}

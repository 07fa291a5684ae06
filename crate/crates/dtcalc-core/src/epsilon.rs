//! The chain-sum operators: the projectors `pi^(k)` / `pi^(alpha)` onto
//! grading degree, and the stability-measure-weighted variants
//! `epsilon^(k)` / `epsilon^(sigma)`.
//!
//! Both are alternating sums over chains of special faces of each stratum;
//! the epsilon operators additionally choose a special cone in every face
//! of the chain, weight the term by the measure of those cones, and push
//! forward along the Hall composite of the chain.

use crate::exactq::{Cone, Rat, Subspace};
use crate::measures::{MeasureError, StabilityMeasure};
use crate::motives::{
    euler_char, is_regular_at_one, MotiveError, Poly, RationalFn, StrataMotive, StratumClass,
};
use crate::stackmodel::{
    face_aut, grad_class, graded_pullback, hall_compose, hall_induce, indicator_all, max_face_dim,
    special_cone_closure, special_cones_in_face, stratum_special_faces, ConeInFace, StackError,
    StackModel,
};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EpsilonError {
    #[error(transparent)]
    Stack(#[from] StackError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Motive(#[from] MotiveError),
    #[error("cone is not a special cone of the model")]
    NotSpecial,
}

/// How a chain may start.
enum Start<'a> {
    /// Faces of the given dimension.
    Dim(usize),
    /// Exactly the given face.
    Face(&'a Subspace),
    /// The span of this cone, with the cone itself as the forced first
    /// choice and no measure factor for it.
    ForcedCone(&'a ConeInFace),
}

/// Measure lookups used by the epsilon engine: either a plain measure on
/// the special cones, or the same measure pulled back on the fly to the
/// graded stack a stratum lives on.
enum MeasureView<'a> {
    Direct(&'a StabilityMeasure),
    /// value(tau) = sum of mu(sigma') over special cones of the ungraded
    /// model spanning the same face, contained in tau, whose special
    /// closure relative to the base equals tau.
    FacePullback(&'a StabilityMeasure),
}

fn measure_value(
    x: &StackModel,
    base: &Subspace,
    view: &MeasureView,
    tau: &ConeInFace,
) -> Result<Rat, EpsilonError> {
    match view {
        MeasureView::Direct(m) => Ok(m.get(tau)),
        MeasureView::FacePullback(m) => {
            let zero = Subspace::zero(x.ambient_rank());
            let mut total = Rat::zero();
            for sp in special_cones_in_face(x, &zero, tau.face())? {
                if sp.cone().is_subset_of(tau.cone())
                    && &special_cone_closure(x, base, sp.cone())? == tau
                {
                    total += m.get(&sp);
                }
            }
            Ok(total)
        }
    }
}

/// Conical hull of a face together with a cone (the join used to form the
/// intermediate cones of a chain).
fn join_face_cone(n: usize, face: &Subspace, cone: &Cone) -> Cone {
    let mut gens: Vec<Vec<Rat>> = cone.generators().to_vec();
    for b in face.basis() {
        gens.push(b.clone());
        gens.push(b.iter().map(|x| -x).collect());
    }
    Cone::hull(n, &gens)
}

struct ChainCtx<'a> {
    x: &'a StackModel,
    base: Subspace,
    faces: Vec<Subspace>,
    gen: &'a StratumClass,
    coeff: Rat,
}

/// Emit one epsilon term: push `[Z_face]` along the composite cone.
fn emit(
    ctx: &ChainCtx,
    face: &Subspace,
    composed: &ConeInFace,
    scalar: &Rat,
    out: &mut StrataMotive,
) -> Result<(), EpsilonError> {
    let Some(parts) = grad_class(ctx.x, ctx.gen, face)? else {
        return Ok(());
    };
    let mut m = StrataMotive::zero();
    for (cl, w) in parts {
        m.add_class(cl, scalar * &w * &ctx.coeff);
    }
    let pushed = hall_induce(ctx.x, &ctx.base, composed, &m)?;
    *out = out.add(&pushed);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn eps_rec(
    ctx: &ChainCtx,
    view: &MeasureView,
    prev_face: &Subspace,
    composed: Option<&ConeInFace>,
    sign: i64,
    weight: &Rat,
    first: Option<&Start>,
    out: &mut StrataMotive,
) -> Result<(), EpsilonError> {
    let n = ctx.x.ambient_rank();
    for beta in &ctx.faces {
        let admissible = match first {
            Some(Start::Dim(k)) => beta.dim() == *k,
            Some(Start::Face(f)) => beta == *f,
            Some(Start::ForcedCone(c)) => beta == c.face(),
            // extension step: strictly bigger face
            None => beta.dim() > prev_face.dim() && beta.contains_subspace(prev_face),
        };
        if !admissible {
            continue;
        }
        let sigmas: Vec<(ConeInFace, Rat)> = match first {
            Some(Start::ForcedCone(c)) => vec![((*c).clone(), Rat::one())],
            _ => {
                let mut v = Vec::new();
                for s in special_cones_in_face(ctx.x, &ctx.base, beta)? {
                    let val = measure_value(ctx.x, &ctx.base, view, &s)?;
                    if !val.is_zero() {
                        v.push((s, val));
                    }
                }
                v
            }
        };
        for (sigma, val) in sigmas {
            let joined = join_face_cone(n, prev_face, sigma.cone());
            let sigma_prime = special_cone_closure(ctx.x, &ctx.base, &joined)?;
            let new_composed = match composed {
                None => sigma_prime,
                Some(c) => hall_compose(ctx.x, &ctx.base, c, &sigma_prime)?,
            };
            let aut = face_aut(ctx.x, beta);
            let new_weight = weight * &val / aut;
            let scalar = if sign > 0 { new_weight.clone() } else { -new_weight.clone() };
            emit(ctx, beta, &new_composed, &scalar, out)?;
            eps_rec(ctx, view, beta, Some(&new_composed), -sign, &new_weight, None, out)?;
        }
    }
    Ok(())
}

fn pi_rec(
    ctx: &ChainCtx,
    prev_face: Option<&Subspace>,
    sign: i64,
    aut_weight: &Rat,
    start: &Start,
    out: &mut StrataMotive,
) -> Result<(), EpsilonError> {
    for beta in &ctx.faces {
        match prev_face {
            None => match start {
                Start::Dim(k) => {
                    if beta.dim() != *k {
                        continue;
                    }
                }
                Start::Face(f) => {
                    if beta != *f {
                        continue;
                    }
                }
                Start::ForcedCone(_) => unreachable!("pi has no cone choices"),
            },
            Some(prev) => {
                if beta.dim() <= prev.dim() || !beta.contains_subspace(prev) {
                    continue;
                }
            }
        }
        let w = aut_weight / face_aut(ctx.x, beta);
        let scalar = if sign > 0 { w.clone() } else { -w.clone() };
        let tot = ConeInFace::face_cone(beta);
        emit(ctx, beta, &tot, &scalar, out)?;
        pi_rec(ctx, Some(beta), -sign, &w, start, out)?;
    }
    Ok(())
}

/// The unit class `1_X` as a strata motive.
pub fn indicator(x: &StackModel) -> StrataMotive {
    indicator_all(x).into_iter().map(|c| (c, Rat::one())).collect()
}

fn per_class<'a>(
    x: &'a StackModel,
    ind: &'a StrataMotive,
) -> impl Iterator<Item = Result<ChainCtx<'a>, EpsilonError>> {
    ind.iter().map(move |(gen, coeff)| {
        let faces = stratum_special_faces(x, gen)?;
        Ok(ChainCtx { x, base: gen.face.clone(), faces, gen, coeff: coeff.clone() })
    })
}

/// `pi^(k)`: the projector onto grading degree `k`, as an alternating sum
/// over chains of special faces of each stratum starting in dimension `k`.
pub fn pi_k(x: &StackModel, ind: &StrataMotive, k: usize) -> Result<StrataMotive, EpsilonError> {
    let mut out = StrataMotive::zero();
    for ctx in per_class(x, ind) {
        let ctx = ctx?;
        pi_rec(&ctx, None, 1, &Rat::one(), &Start::Dim(k), &mut out)?;
    }
    Ok(out)
}

/// `pi^(alpha)`: chains starting exactly at the face `alpha`.
pub fn pi_face(
    x: &StackModel,
    ind: &StrataMotive,
    alpha: &Subspace,
) -> Result<StrataMotive, EpsilonError> {
    let mut out = StrataMotive::zero();
    for ctx in per_class(x, ind) {
        let ctx = ctx?;
        pi_rec(&ctx, None, 1, &Rat::one(), &Start::Face(alpha), &mut out)?;
    }
    Ok(out)
}

fn epsilon_k_view(
    x: &StackModel,
    view: &MeasureView,
    ind: &StrataMotive,
    k: usize,
) -> Result<StrataMotive, EpsilonError> {
    let mut out = StrataMotive::zero();
    for ctx in per_class(x, ind) {
        let ctx = ctx?;
        eps_rec(&ctx, view, &ctx.base.clone(), None, 1, &Rat::one(), Some(&Start::Dim(k)), &mut out)?;
    }
    Ok(out)
}

/// `epsilon^(k)`: measure-weighted chain sum in grading degree `k`.
pub fn epsilon_k(
    x: &StackModel,
    mu: &StabilityMeasure,
    ind: &StrataMotive,
    k: usize,
) -> Result<StrataMotive, EpsilonError> {
    epsilon_k_view(x, &MeasureView::Direct(mu), ind, k)
}

/// `epsilon^(sigma)` by its direct expansion: chains forced to start with
/// the cone `sigma` (which carries no measure factor). Exposed as a
/// cross-check oracle for [`epsilon_cone`]; it is the primary path for
/// table models.
pub fn epsilon_cone_expansion(
    x: &StackModel,
    mu: &StabilityMeasure,
    ind: &StrataMotive,
    sigma: &ConeInFace,
) -> Result<StrataMotive, EpsilonError> {
    let zero = Subspace::zero(x.ambient_rank());
    if &special_cone_closure(x, &zero, sigma.cone())? != sigma {
        return Err(EpsilonError::NotSpecial);
    }
    let mut out = StrataMotive::zero();
    for ctx in per_class(x, ind) {
        let ctx = ctx?;
        eps_rec(
            &ctx,
            &MeasureView::Direct(mu),
            &ctx.base.clone(),
            None,
            1,
            &Rat::one(),
            Some(&Start::ForcedCone(sigma)),
            &mut out,
        )?;
    }
    Ok(out)
}

/// `epsilon^(sigma)`: restrict to the graded stack of `span(sigma)`, pull
/// the measure back there, take the top-degree epsilon, and induce along
/// `sigma`. For table models (which do not declare restricted-model data)
/// the equivalent direct expansion is used instead.
pub fn epsilon_cone(
    x: &StackModel,
    mu: &StabilityMeasure,
    ind: &StrataMotive,
    sigma: &ConeInFace,
) -> Result<StrataMotive, EpsilonError> {
    if matches!(x, StackModel::Table(_)) {
        return epsilon_cone_expansion(x, mu, ind, sigma);
    }
    let zero = Subspace::zero(x.ambient_rank());
    if &special_cone_closure(x, &zero, sigma.cone())? != sigma {
        return Err(EpsilonError::NotSpecial);
    }
    let alpha = sigma.face();
    let pulled = graded_pullback(x, alpha, ind)?;
    let e = epsilon_k_view(x, &MeasureView::FacePullback(mu), &pulled, alpha.dim())?;
    Ok(hall_induce(x, &zero, sigma, &e)?)
}

/// Degeneration identity: with the trivial measure, `epsilon^(k) = pi^(k)`.
/// (Used by tests; exposed for convenience.)
pub fn equals_pi_with_trivial_measure(
    x: &StackModel,
    ind: &StrataMotive,
    k: usize,
) -> Result<bool, EpsilonError> {
    let mu = crate::measures::trivial_measure(x);
    Ok(epsilon_k(x, &mu, ind, k)? == pi_k(x, ind, k)?)
}

/// Sum rule: the `epsilon^(k)` over all `k` add up to `1_X` (realized
/// comparison for torus models, exact strata comparison for tables).
pub fn sum_rule_check(x: &StackModel, mu: &StabilityMeasure) -> Result<bool, EpsilonError> {
    let ind = indicator(x);
    let mut total = StrataMotive::zero();
    for k in 0..=max_face_dim(x) {
        total = total.add(&epsilon_k(x, mu, &ind, k)?);
    }
    Ok(match x {
        StackModel::Torus(_) => total.refine() == ind.refine(),
        StackModel::Table(_) => total == ind,
    })
}

/// No-pole check: `(1 - L)^k * sch(epsilon^(k))` is regular at `L = 1`.
pub fn no_pole_check(
    x: &StackModel,
    mu: &StabilityMeasure,
    k: usize,
) -> Result<bool, EpsilonError> {
    let e = epsilon_k(x, mu, &indicator(x), k)?;
    let one_minus_l = RationalFn::from_poly(Poly::new(vec![Rat::one(), -Rat::one()]));
    let f = one_minus_l.pow(k as i64).mul(&e.sch_realize());
    Ok(is_regular_at_one(&f))
}

/// The integral of `(1-L)^k * sch(epsilon^(k))` at `L = 1` (the numerical
/// chi used by the DT invariants).
pub fn chi_of_epsilon(
    x: &StackModel,
    mu: &StabilityMeasure,
    k: usize,
) -> Result<Rat, EpsilonError> {
    let e = epsilon_k(x, mu, &indicator(x), k)?;
    let one_minus_l = RationalFn::from_poly(Poly::new(vec![Rat::one(), -Rat::one()]));
    let f = one_minus_l.pow(k as i64).mul(&e.sch_realize());
    Ok(euler_char(&f)?)
}

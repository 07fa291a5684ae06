//! Donaldson-Thomas invariants and Theta-stratifications.
//!
//! A linear form plus a positive definite quadratic norm on the cocharacter
//! space stratify a torus model by the optimal destabilizing ray of each
//! coordinate point stratum; when the stratification is regular and a
//! measure is adapted to it, the top epsilon only sees the semistable
//! locus. The DT invariants integrate `(1-L)^k * epsilon^(k)` against the
//! (smooth) Behrend weighting.

use crate::epsilon::{chi_of_epsilon, epsilon_k, indicator, EpsilonError};
use crate::exactq::{dot, primitive, rref, solve_square, Cone, Rat, Subspace};
use crate::measures::StabilityMeasure;
use crate::motives::{euler_char_mon, MotiveError, Poly, RationalFn, StrataMotive, StratumClass};
use crate::stackmodel::{
    crk, hall_compose, special_faces, torus_stratum, ConeInFace, LinearTorusStack, StackError,
    StackModel,
};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DtError {
    #[error("the stratification is not regular: {0}")]
    NotRegular(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("the quadratic norm is not positive definite")]
    NotPositiveDefinite,
    #[error(transparent)]
    Epsilon(#[from] EpsilonError),
    #[error(transparent)]
    Stack(#[from] StackError),
    #[error(transparent)]
    Motive(#[from] MotiveError),
}

/// The smooth Behrend weighting of a model of the given dimension:
/// numerically the sign `(-1)^dim`, motivically `L^(-dim/2) = q^(-dim)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehrendData {
    pub dim: i64,
}

impl BehrendData {
    pub fn smooth(x: &StackModel) -> BehrendData {
        BehrendData { dim: x.dim() }
    }

    pub fn sign(&self) -> Rat {
        if self.dim.rem_euclid(2) == 0 {
            Rat::one()
        } else {
            -Rat::one()
        }
    }

    /// `q^(-dim)` as a rational function in `q`.
    pub fn motivic(&self) -> RationalFn {
        q_power(-self.dim)
    }
}

fn q_power(e: i64) -> RationalFn {
    let mut mono = vec![Rat::zero(); e.unsigned_abs() as usize];
    mono.push(Rat::one());
    let p = Poly::new(mono);
    if e >= 0 {
        RationalFn::from_poly(p)
    } else {
        RationalFn::new(Poly::one(), p)
    }
}

fn det(m: &[Vec<Rat>]) -> Rat {
    // upper-triangularize a copy, tracking swaps
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut sign = Rat::one();
    let mut d = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            sign = -sign;
        }
        d *= &a[col][col];
        let pivot = a[col].clone();
        for row in a.iter_mut().take(n).skip(col + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (c, p) in pivot.iter().enumerate().skip(col) {
                    let sub = &f * p;
                    row[c] -= sub;
                }
            }
        }
    }
    d * sign
}

fn is_positive_definite(q: &[Vec<Rat>]) -> bool {
    let n = q.len();
    if q.iter().any(|r| r.len() != n) {
        return false;
    }
    for k in 1..=n {
        let minor: Vec<Vec<Rat>> = (0..k).map(|i| q[i][..k].to_vec()).collect();
        if !det(&minor).is_positive() {
            return false;
        }
    }
    true
}

fn quad(q: &[Vec<Rat>], v: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (i, vi) in v.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            s += vi * &q[i][j] * vj;
        }
    }
    s
}

/// A regular Theta-stratification of a torus model: each unstable
/// coordinate point stratum with its optimal destabilizing primitive ray,
/// the semistable strata, and the unique destabilizing ray seen by each
/// special face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaStratification {
    pub destabilized: Vec<(Vec<Rat>, StratumClass)>,
    pub semistable: Vec<StratumClass>,
    pub lambda_by_face: BTreeMap<Subspace, Vec<Rat>>,
}

/// Optimal destabilizer of one point stratum: maximize `l(v)/sqrt(q(v))`
/// over the attracting cone `{ v : w_i(v) >= 0 for pinned-nonzero i }`,
/// by solving the norm-projection problem on every face of that cone and
/// comparing the candidates exactly.
fn best_ray(
    att: &Cone,
    l: &[Rat],
    q: &[Vec<Rat>],
) -> Result<Option<Vec<Rat>>, DtError> {
    let mut best: Option<(Vec<Rat>, Rat, Rat)> = None; // (ray, l(ray), q(ray))
    let nf = att.facets().len();
    for mask in 0u64..(1u64 << nf) {
        let mut rows: Vec<Vec<Rat>> = att
            .facets()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, f)| f.clone())
            .collect();
        rows.extend(att.carrier().annihilator());
        let w = Subspace::kernel(&rows, att.ambient_dim());
        if w.is_zero() {
            continue;
        }
        let b = rref(w.basis());
        let m: Vec<Vec<Rat>> = b
            .iter()
            .map(|bi| {
                b.iter()
                    .map(|bj| {
                        let qbj: Vec<Rat> = (0..bj.len())
                            .map(|r| dot(&q[r], bj))
                            .collect();
                        dot(bi, &qbj)
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = b.iter().map(|bi| dot(l, bi)).collect();
        let Some(t) = solve_square(&m, &rhs) else {
            continue;
        };
        let mut lam = vec![Rat::zero(); att.ambient_dim()];
        for (ti, bi) in t.iter().zip(&b) {
            for j in 0..lam.len() {
                let add = ti * &bi[j];
                lam[j] += add;
            }
        }
        if lam.iter().all(|x| x.is_zero()) {
            continue;
        }
        let lam = primitive(&lam);
        if !att.contains(&lam) {
            continue;
        }
        let lv = dot(l, &lam);
        if !lv.is_positive() {
            continue;
        }
        let qv = quad(q, &lam);
        match &best {
            None => best = Some((lam, lv, qv)),
            Some((bray, blv, bqv)) => {
                // compare lv^2/qv against blv^2/bqv exactly
                let lhs = &lv * &lv * bqv;
                let rhs2 = blv * blv * &qv;
                if lhs > rhs2 {
                    best = Some((lam, lv, qv));
                } else if lhs == rhs2 && &lam != bray {
                    return Err(DtError::NotRegular(
                        "two distinct rays maximize the same stratum".into(),
                    ));
                }
            }
        }
    }
    Ok(best.map(|(r, _, _)| r))
}

/// Stratify a torus model by a linear form and a positive definite
/// quadratic norm on the cocharacter space.
pub fn theta_stratify(
    t: &LinearTorusStack,
    l: &[Rat],
    q: &[Vec<Rat>],
) -> Result<ThetaStratification, DtError> {
    let n = t.torus_rank();
    if l.len() != n || q.len() != n {
        return Err(DtError::NotApplicable("linear form / norm dimension mismatch".into()));
    }
    if !is_positive_definite(q) {
        return Err(DtError::NotPositiveDefinite);
    }
    let m = t.weights().len();
    if m > 16 {
        return Err(DtError::NotApplicable("too many coordinates to stratify".into()));
    }
    let zero = Subspace::zero(n);
    let mut destabilized = Vec::new();
    let mut semistable = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let mut z = Vec::new();
        let mut nz = Vec::new();
        for i in 0..m {
            if mask >> i & 1 == 1 {
                nz.push(i);
            } else {
                z.push(i);
            }
        }
        let ineqs: Vec<Vec<Rat>> = nz.iter().map(|&i| t.weights()[i].clone()).collect();
        let att = Cone::from_inequalities(&Subspace::full(n), &ineqs);
        let cls = torus_stratum(t, &zero, &z, &nz, &[])
            .expect("zero/nonzero masks partition the coordinates");
        match best_ray(&att, l, q)? {
            Some(r) => destabilized.push((r, cls)),
            None => semistable.push(cls),
        }
    }
    // the unique destabilizing ray lying on each special face
    let x = StackModel::Torus(t.clone());
    let mut lambda_by_face = BTreeMap::new();
    for alpha in special_faces(&x) {
        let mut rays: Vec<&Vec<Rat>> = Vec::new();
        for (r, cls) in &destabilized {
            if !alpha.contains(r) {
                continue;
            }
            let nonzero = match &cls.kind {
                crate::motives::StratumKind::Torus { nonzero, .. } => nonzero,
                _ => unreachable!(),
            };
            let fixed_nonempty = nonzero
                .iter()
                .all(|&i| alpha.basis().iter().all(|b| dot(&t.weights()[i], b).is_zero()));
            if fixed_nonempty && !rays.contains(&r) {
                rays.push(r);
            }
        }
        if rays.len() > 1 {
            return Err(DtError::NotRegular(format!(
                "face of dimension {} sees {} destabilizing rays",
                alpha.dim(),
                rays.len()
            )));
        }
        if let Some(r) = rays.first() {
            lambda_by_face.insert(alpha, (*r).clone());
        }
    }
    Ok(ThetaStratification { destabilized, semistable, lambda_by_face })
}

/// A measure is adapted to the stratification when, for every special cone
/// `sigma` with nonzero mass whose face sees a destabilizing ray
/// `lambda`, composing the ray with `(Q lambda + sigma)` recovers `sigma`.
/// (This is the composition property the semistable-reduction identity
/// actually uses; it implies `lambda in sigma`.)
pub fn is_adapted(
    x: &StackModel,
    strat: &ThetaStratification,
    mu: &StabilityMeasure,
) -> Result<bool, DtError> {
    let n = x.ambient_rank();
    let zero = Subspace::zero(n);
    for (sigma, _) in mu.iter() {
        let Some(lam) = strat.lambda_by_face.get(sigma.face()) else {
            continue;
        };
        if !sigma.cone().contains(lam) {
            return Ok(false);
        }
        let ray = ConeInFace::new(Cone::hull(n, std::slice::from_ref(lam)));
        let mut gens: Vec<Vec<Rat>> = sigma.cone().generators().to_vec();
        gens.push(lam.clone());
        gens.push(lam.iter().map(|v| -v).collect());
        let widened = ConeInFace::new(Cone::hull(n, &gens));
        match hall_compose(x, &zero, &ray, &widened) {
            Ok(comp) => {
                if &comp != sigma {
                    return Ok(false);
                }
            }
            Err(StackError::NotFullDimensional) => return Ok(false),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(true)
}

/// Semistable reduction: for an adapted measure, the top epsilon of `1_X`
/// agrees exactly (in refined strata terms) with the top epsilon of the
/// semistable indicator. Errors with `NotApplicable` when the measure is
/// not adapted.
pub fn semistable_reduction_check(
    x: &StackModel,
    strat: &ThetaStratification,
    mu: &StabilityMeasure,
) -> Result<bool, DtError> {
    if !is_adapted(x, strat, mu)? {
        return Err(DtError::NotApplicable("measure is not adapted".into()));
    }
    let k = crk(x);
    let lhs = epsilon_k(x, mu, &indicator(x), k)?;
    let ss: StrataMotive = strat
        .semistable
        .iter()
        .cloned()
        .map(|c| (c, Rat::one()))
        .collect();
    let rhs = epsilon_k(x, mu, &ss, k)?;
    Ok(lhs.refine() == rhs.refine())
}

/// Numerical DT invariant in degree `k`:
/// `(-1)^dim * [(1-L)^k * sch(epsilon^(k))]_{L=1}`.
pub fn dt_numerical(x: &StackModel, mu: &StabilityMeasure, k: usize) -> Result<Rat, DtError> {
    let chi = chi_of_epsilon(x, mu, k)?;
    Ok(BehrendData::smooth(x).sign() * chi)
}

/// Motivic DT invariant in degree `k`, as a rational function in the square
/// root `q` of the Lefschetz class:
/// `(q - q^-1)^k * q^(-dim) * sch(epsilon^(k))(q^2)`.
pub fn dt_motivic(x: &StackModel, mu: &StabilityMeasure, k: usize) -> Result<RationalFn, DtError> {
    let e = epsilon_k(x, mu, &indicator(x), k)?;
    let q2 = Poly::new(vec![Rat::zero(), Rat::zero(), Rat::one()]);
    let h = e.sch_realize().substitute(&q2);
    let q_minus_qinv = RationalFn::new(
        Poly::new(vec![-Rat::one(), Rat::zero(), Rat::one()]),
        Poly::var(),
    );
    Ok(q_minus_qinv.pow(k as i64).mul(&BehrendData::smooth(x).motivic()).mul(&h))
}

/// Compatibility of the two DT flavours: the monodromic Euler
/// characteristic (`q = -1`) of the motivic invariant equals the numerical
/// one.
pub fn chi_compatibility_check(
    x: &StackModel,
    mu: &StabilityMeasure,
    k: usize,
) -> Result<bool, DtError> {
    let num = dt_numerical(x, mu, k)?;
    let mot = dt_motivic(x, mu, k)?;
    Ok(euler_char_mon(&mot)? == num)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{rat, ratio};
    use crate::measures::trivial_measure;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn a1gm_t() -> LinearTorusStack {
        LinearTorusStack::new(1, vec![v(&[1])]).unwrap()
    }

    fn a2gm_t() -> LinearTorusStack {
        LinearTorusStack::new(1, vec![v(&[1]), v(&[-1])]).unwrap()
    }

    fn id1() -> Vec<Vec<Rat>> {
        vec![v(&[1])]
    }

    fn adapted_a2gm_measure() -> StabilityMeasure {
        let mut m = StabilityMeasure::new("special_cones");
        m.add(ConeInFace::zero(1), rat(1));
        m.add(ConeInFace::new(Cone::hull(1, &[v(&[1])])), rat(1));
        m
    }

    #[test]
    fn posdef_detection() {
        assert!(is_positive_definite(&[v(&[2, 1]), v(&[1, 2])]));
        assert!(!is_positive_definite(&[v(&[1, 2]), v(&[2, 1])]));
    }

    #[test]
    fn a1gm_everything_unstable() {
        let s = theta_stratify(&a1gm_t(), &v(&[1]), &id1()).unwrap();
        assert!(s.semistable.is_empty());
        assert_eq!(s.destabilized.len(), 2);
        for (r, _) in &s.destabilized {
            assert_eq!(r, &v(&[1]));
        }
    }

    #[test]
    fn a2gm_stratification() {
        let s = theta_stratify(&a2gm_t(), &v(&[1]), &id1()).unwrap();
        // the origin and the x-axis are destabilized by +1; {y != 0} is
        // semistable
        assert_eq!(s.destabilized.len(), 2);
        assert_eq!(s.semistable.len(), 2);
        assert_eq!(s.lambda_by_face.get(&Subspace::full(1)), Some(&v(&[1])));
        assert_eq!(s.lambda_by_face.get(&Subspace::zero(1)), None);
    }

    #[test]
    fn adaptedness_distinguishes_cones() {
        let x = StackModel::Torus(a2gm_t());
        let s = theta_stratify(&a2gm_t(), &v(&[1]), &id1()).unwrap();
        assert!(is_adapted(&x, &s, &adapted_a2gm_measure()).unwrap());
        // mass on the opposite ray is not adapted
        let mut bad = StabilityMeasure::new("special_cones");
        bad.add(ConeInFace::zero(1), rat(1));
        bad.add(ConeInFace::new(Cone::hull(1, &[v(&[-1])])), rat(1));
        assert!(!is_adapted(&x, &s, &bad).unwrap());
        // mass on the full face cone fails the composition property
        assert!(!is_adapted(&x, &s, &trivial_measure(&x)).unwrap());
    }

    #[test]
    fn semistable_reduction_a2gm() {
        let x = StackModel::Torus(a2gm_t());
        let s = theta_stratify(&a2gm_t(), &v(&[1]), &id1()).unwrap();
        assert!(semistable_reduction_check(&x, &s, &adapted_a2gm_measure()).unwrap());
        assert!(matches!(
            semistable_reduction_check(&x, &s, &trivial_measure(&x)),
            Err(DtError::NotApplicable(_))
        ));
    }

    #[test]
    fn bgm_dt_is_one() {
        let x = StackModel::Torus(LinearTorusStack::new(1, vec![]).unwrap());
        let mu = trivial_measure(&x);
        assert_eq!(dt_numerical(&x, &mu, 1).unwrap(), rat(1));
        assert_eq!(dt_motivic(&x, &mu, 1).unwrap(), RationalFn::one());
        assert!(chi_compatibility_check(&x, &mu, 1).unwrap());
    }

    #[test]
    fn a1gm_dt_values() {
        let x = StackModel::Torus(a1gm_t());
        let mut mu = StabilityMeasure::new("special_cones");
        mu.add(ConeInFace::zero(1), rat(1));
        mu.add(ConeInFace::new(Cone::hull(1, &[v(&[1])])), ratio(1, 2));
        mu.add(ConeInFace::face_cone(&Subspace::full(1)), ratio(1, 2));
        // dim(A^1/Gm) = 0: DT^(0) = chi(epsilon^0) = 1 - a = 1/2
        assert_eq!(dt_numerical(&x, &mu, 0).unwrap(), ratio(1, 2));
        assert!(chi_compatibility_check(&x, &mu, 0).unwrap());
        assert!(chi_compatibility_check(&x, &mu, 1).unwrap());
    }
}

//! Stability measures: finitely supported assignments of rationals to
//! special cones, one partition of unity per special face. Includes the
//! built-in trivial / canonical / quiver-ordering measures, pullbacks,
//! the prestability (face-relative) form, and its convolution algebra with
//! Mobius inversion.

use crate::exactq::{solve_square, Cone, Rat, Subspace};
use crate::stackmodel::{
    crk, hall_compose, special_cone_closure, special_cones, special_cones_in_face, special_faces,
    ConeInFace, StackError, StackModel,
};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("stack error: {0}")]
    Stack(#[from] StackError),
    #[error("measure is not invertible: {0}")]
    Singular(String),
}

/// A finitely supported measure on cones (special cones of a model, or
/// cells of an auxiliary arrangement such as the quiver ordering fan).
/// Zero values are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityMeasure {
    /// Informational tag for the arrangement the keys live on.
    pub source: String,
    values: BTreeMap<ConeInFace, Rat>,
}

impl StabilityMeasure {
    pub fn new(source: impl Into<String>) -> StabilityMeasure {
        StabilityMeasure { source: source.into(), values: BTreeMap::new() }
    }

    pub fn get(&self, key: &ConeInFace) -> Rat {
        self.values.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&mut self, key: ConeInFace, v: Rat) {
        if v.is_zero() {
            return;
        }
        let e = self.values.entry(key).or_insert_with(Rat::zero);
        *e += v;
        if e.is_zero() {
            // re-fetch to remove; avoids holding the borrow
            self.values.retain(|_, x| !x.is_zero());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ConeInFace, &Rat)> {
        self.values.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ConeInFace> {
        self.values.keys()
    }
}

fn cone_contains_face(c: &Cone, f: &Subspace) -> bool {
    f.basis().iter().all(|b| {
        c.contains(b) && c.contains(&b.iter().map(|x| -x).collect::<Vec<_>>())
    })
}

/// The trivial measure: mass 1 on the face cone of every special face.
pub fn trivial_measure(x: &StackModel) -> StabilityMeasure {
    let mut m = StabilityMeasure::new("special_cones");
    for f in special_faces(x) {
        m.add(ConeInFace::face_cone(&f), Rat::one());
    }
    m
}

/// The canonical measure of a torus model: in every special face, weight
/// `1/#chambers` on each closed chamber of the weight arrangement (every
/// chamber is a special cone).
pub fn canonical_measure(x: &StackModel) -> Result<StabilityMeasure, MeasureError> {
    let StackModel::Torus(t) = x else {
        return Err(MeasureError::BadInput("canonical measure needs a torus model".into()));
    };
    let zero = Subspace::zero(x.ambient_rank());
    let mut m = StabilityMeasure::new("special_cones");
    for f in special_faces(x) {
        let arr = crate::exactq::Arrangement::new(f.clone(), t.weights());
        let ch = arr.chambers();
        let w = Rat::one() / Rat::from_integer((ch.len() as i64).into());
        for c in ch {
            // a chamber need not be special itself; its mass lands on its
            // special closure
            m.add(special_cone_closure(x, &zero, &c)?, w.clone());
        }
    }
    Ok(m)
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut parts: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for i in 0..n {
        let mut next = Vec::new();
        for p in parts {
            for k in 0..p.len() {
                let mut q = p.clone();
                q[k].push(i);
                next.push(q);
            }
            let mut q = p;
            q.push(vec![i]);
            next.push(q);
        }
        parts = next;
    }
    parts
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// The ordering measure of a quiver with the given vertex slopes: supported
/// on the cones `{ x_{B_1} >= ... >= x_{B_m} }` of ordered set partitions
/// of the vertices, with weight `1 / prod_s (#blocks of mean slope s)!`
/// when the block slopes are non-increasing and 0 otherwise.
pub fn quiver_measure(
    vertices: usize,
    edges: &[(usize, usize)],
    slopes: &[Rat],
) -> Result<StabilityMeasure, MeasureError> {
    if slopes.len() != vertices {
        return Err(MeasureError::BadInput(format!(
            "expected {vertices} slopes, got {}",
            slopes.len()
        )));
    }
    if vertices == 0 || vertices > 8 {
        return Err(MeasureError::BadInput("vertex count must be between 1 and 8".into()));
    }
    for &(i, j) in edges {
        if i >= vertices || j >= vertices {
            return Err(MeasureError::BadInput(format!("edge ({i},{j}) out of range")));
        }
    }
    let mut m = StabilityMeasure::new("quiver_ordering");
    for blocks in set_partitions(vertices) {
        // face: x constant on every block
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for b in &blocks {
            for w in b.windows(2) {
                let mut r = vec![Rat::zero(); vertices];
                r[w[0]] = Rat::one();
                r[w[1]] = -Rat::one();
                rows.push(r);
            }
        }
        let face = Subspace::kernel(&rows, vertices);
        let mean = |b: &[usize]| -> Rat {
            let s: Rat = b.iter().map(|&i| slopes[i].clone()).sum();
            s / Rat::from_integer((b.len() as i64).into())
        };
        let slopes_by_block: Vec<Rat> = blocks.iter().map(|b| mean(b)).collect();
        // weight denominator: product of factorials of equal-slope
        // multiplicities
        let mut mult: BTreeMap<Rat, u64> = BTreeMap::new();
        for s in &slopes_by_block {
            *mult.entry(s.clone()).or_insert(0) += 1;
        }
        let mut denom: u64 = 1;
        for (_, c) in mult {
            for i in 2..=c {
                denom *= i;
            }
        }
        let weight = Rat::one() / Rat::from_integer((denom as i64).into());
        for order in permutations(blocks.len()) {
            let ordered_slopes: Vec<&Rat> = order.iter().map(|&k| &slopes_by_block[k]).collect();
            if ordered_slopes.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            let mut ineqs: Vec<Vec<Rat>> = Vec::new();
            for w in order.windows(2) {
                let mut r = vec![Rat::zero(); vertices];
                r[blocks[w[0]][0]] = Rat::one();
                r[blocks[w[1]][0]] = -Rat::one();
                ineqs.push(r);
            }
            let cone = Cone::from_inequalities(&face, &ineqs);
            debug_assert_eq!(cone.dim(), face.dim());
            m.add(ConeInFace::new(cone), weight.clone());
        }
    }
    Ok(m)
}

/// Pull a measure on an auxiliary fan back to the special cones of a model:
/// each special cone receives the mass of the source cones of the same span
/// contained in it whose special closure is exactly that cone.
pub fn pullback_measure(
    mu: &StabilityMeasure,
    x: &StackModel,
) -> Result<StabilityMeasure, MeasureError> {
    let zero = Subspace::zero(x.ambient_rank());
    let mut out = StabilityMeasure::new("special_cones");
    for sigma in special_cones(x, &zero)? {
        let mut total = Rat::zero();
        for (c, v) in mu.iter() {
            if c.face() == sigma.face()
                && c.cone().is_subset_of(sigma.cone())
                && special_cone_closure(x, &zero, c.cone())? == sigma
            {
                total += v;
            }
        }
        out.add(sigma, total);
    }
    Ok(out)
}

/// `true` iff the measure sums to 1 over the special cones of every special
/// face of the model.
pub fn partition_check(x: &StackModel, mu: &StabilityMeasure) -> Result<bool, MeasureError> {
    let zero = Subspace::zero(x.ambient_rank());
    for f in special_faces(x) {
        let total: Rat = special_cones_in_face(x, &zero, &f)?
            .into_iter()
            .map(|c| mu.get(&c))
            .sum();
        if !total.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Partition check against the faces appearing among the measure's own
/// keys (used for auxiliary fans like the quiver ordering fan).
pub fn partition_check_keys(mu: &StabilityMeasure) -> bool {
    let mut by_face: BTreeMap<&Subspace, Rat> = BTreeMap::new();
    for (c, v) in mu.iter() {
        *by_face.entry(c.face()).or_insert_with(Rat::zero) += v;
    }
    by_face.values().all(|t| t.is_one())
}

/// `true` iff every key of the measure is a genuine special cone of the
/// model (full-dimensional in its face and fixed by special closure).
/// Finite models are always locally finite, so this is the whole
/// permissibility condition here.
pub fn is_permissible(x: &StackModel, mu: &StabilityMeasure) -> Result<bool, MeasureError> {
    let zero = Subspace::zero(x.ambient_rank());
    for (c, _) in mu.iter() {
        if c.cone().dim() != c.face().dim() {
            return Ok(false);
        }
        if &special_cone_closure(x, &zero, c.cone())? != c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A prestability measure: a rational for every pair (face `alpha`, special
/// cone `sigma` containing `alpha`), i.e. for every morphism of the Hall
/// category out of `alpha`. Zero values are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrestabilityMeasure {
    values: BTreeMap<(Subspace, ConeInFace), Rat>,
}

impl PrestabilityMeasure {
    pub fn new() -> PrestabilityMeasure {
        PrestabilityMeasure { values: BTreeMap::new() }
    }

    pub fn get(&self, face: &Subspace, sigma: &ConeInFace) -> Rat {
        self.values
            .get(&(face.clone(), sigma.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn add(&mut self, face: Subspace, sigma: ConeInFace, v: Rat) {
        if v.is_zero() {
            return;
        }
        let e = self.values.entry((face, sigma)).or_insert_with(Rat::zero);
        *e += v;
        if e.is_zero() {
            self.values.retain(|_, x| !x.is_zero());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Subspace, ConeInFace), &Rat)> {
        self.values.iter()
    }
}

impl Default for PrestabilityMeasure {
    fn default() -> Self {
        Self::new()
    }
}

/// Objects of the Hall category used for prestability measures: the special
/// faces, with the zero face adjoined as a formal initial object when it is
/// not itself special.
pub fn hall_objects(x: &StackModel) -> Vec<Subspace> {
    let mut out = special_faces(x);
    let z = Subspace::zero(x.ambient_rank());
    if !out.contains(&z) {
        out.insert(0, z);
    }
    out
}

/// The identity morphism of a face: its face cone (the zero cone for the
/// zero face).
pub fn identity_cone(face: &Subspace) -> ConeInFace {
    if face.is_zero() {
        ConeInFace::zero(face.ambient_dim())
    } else {
        ConeInFace::face_cone(face)
    }
}

/// Morphisms out of a face: the special cones whose cone contains the face,
/// together with the formal identity of the zero face.
pub fn hall_morphisms_from(
    x: &StackModel,
    face: &Subspace,
) -> Result<Vec<ConeInFace>, MeasureError> {
    let zero = Subspace::zero(x.ambient_rank());
    let mut out = BTreeSet::new();
    for c in special_cones(x, &zero)? {
        if cone_contains_face(c.cone(), face) {
            out.insert(c);
        }
    }
    if face.is_zero() && crk(x) > 0 {
        out.insert(ConeInFace::zero(x.ambient_rank()));
    }
    Ok(out.into_iter().collect())
}

/// Prestability form of a stability measure:
/// `mu_pre(alpha, sigma) = sum of mu(sigma')` over the special cones
/// `sigma'` spanning `face(sigma)`, contained in `sigma`, whose special
/// closure joined with `alpha` is exactly `sigma`. Identities always get 1.
pub fn to_prestability(
    x: &StackModel,
    mu: &StabilityMeasure,
) -> Result<PrestabilityMeasure, MeasureError> {
    let zero = Subspace::zero(x.ambient_rank());
    let mut out = PrestabilityMeasure::new();
    for alpha in hall_objects(x) {
        for sigma in hall_morphisms_from(x, &alpha)? {
            if sigma == identity_cone(&alpha) {
                out.add(alpha.clone(), sigma, Rat::one());
                continue;
            }
            let mut total = Rat::zero();
            for sp in special_cones_in_face(x, &zero, sigma.face())? {
                if !sp.cone().is_subset_of(sigma.cone()) {
                    continue;
                }
                // join alpha with sigma' and take the special closure
                let mut gens: Vec<Vec<Rat>> = sp.cone().generators().to_vec();
                for b in alpha.basis() {
                    gens.push(b.clone());
                    gens.push(b.iter().map(|t| -t).collect());
                }
                let hull = Cone::hull(x.ambient_rank(), &gens);
                if special_cone_closure(x, &zero, &hull)? == sigma {
                    total += mu.get(&sp);
                }
            }
            out.add(alpha.clone(), sigma, total);
        }
    }
    Ok(out)
}

/// The unit of convolution: 1 on every identity morphism.
pub fn delta(x: &StackModel) -> PrestabilityMeasure {
    let mut out = PrestabilityMeasure::new();
    for alpha in hall_objects(x) {
        out.add(alpha.clone(), identity_cone(&alpha), Rat::one());
    }
    out
}

/// Convolution: `(a * b)(alpha, sigma)` sums `a(alpha, sigma1) *
/// b(span sigma1, sigma2)` over all two-step factorizations
/// `sigma = sigma1 UP sigma2`.
pub fn convolve(
    x: &StackModel,
    a: &PrestabilityMeasure,
    b: &PrestabilityMeasure,
) -> Result<PrestabilityMeasure, MeasureError> {
    let zero = Subspace::zero(x.ambient_rank());
    let mut out = PrestabilityMeasure::new();
    for alpha in hall_objects(x) {
        for sigma1 in hall_morphisms_from(x, &alpha)? {
            let va = a.get(&alpha, &sigma1);
            if va.is_zero() {
                continue;
            }
            let mid = sigma1.face().clone();
            for sigma2 in hall_morphisms_from(x, &mid)? {
                let vb = b.get(&mid, &sigma2);
                if vb.is_zero() {
                    continue;
                }
                match hall_compose(x, &zero, &sigma1, &sigma2) {
                    Ok(comp) => out.add(alpha.clone(), comp, &va * &vb),
                    Err(StackError::NotFullDimensional) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(out)
}

/// Mobius inversion: the unique `nu` with `nu * mu = delta`, obtained by
/// solving, for each source face, the linear system indexed by the
/// morphisms out of it.
pub fn invert(
    x: &StackModel,
    mu: &PrestabilityMeasure,
) -> Result<PrestabilityMeasure, MeasureError> {
    let zero = Subspace::zero(x.ambient_rank());
    let mut out = PrestabilityMeasure::new();
    for alpha in hall_objects(x) {
        let homs = hall_morphisms_from(x, &alpha)?;
        let idx: BTreeMap<&ConeInFace, usize> =
            homs.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let m = homs.len();
        // matrix[row sigma][col sigma1] = sum over sigma2 with
        // sigma1 UP sigma2 = sigma of mu(span sigma1, sigma2)
        let mut mat = vec![vec![Rat::zero(); m]; m];
        for (j, sigma1) in homs.iter().enumerate() {
            let mid = sigma1.face().clone();
            for sigma2 in hall_morphisms_from(x, &mid)? {
                let v = mu.get(&mid, &sigma2);
                if v.is_zero() {
                    continue;
                }
                match hall_compose(x, &zero, sigma1, &sigma2) {
                    Ok(comp) => {
                        if let Some(&i) = idx.get(&comp) {
                            mat[i][j] += v;
                        }
                    }
                    Err(StackError::NotFullDimensional) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        if m == 0 {
            continue;
        }
        let rhs: Vec<Rat> = homs
            .iter()
            .map(|s| if *s == identity_cone(&alpha) { Rat::one() } else { Rat::zero() })
            .collect();
        let sol = solve_square(&mat, &rhs)
            .ok_or_else(|| MeasureError::Singular("composition matrix is singular".into()))?;
        for (j, v) in sol.into_iter().enumerate() {
            out.add(alpha.clone(), homs[j].clone(), v);
        }
    }
    Ok(out)
}

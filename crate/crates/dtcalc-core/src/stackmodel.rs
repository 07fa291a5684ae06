//! Stack models: linear torus quotients `V/T` given by integer weights, and
//! table-declared stacks whose combinatorial skeleton (faces, special cones,
//! closure/composition tables, strata and induction rules) is supplied
//! explicitly.
//!
//! The cocharacter space of the torus (resp. the declared ambient space) is
//! `Q^n`; special faces are linear subspaces of it, special cones are
//! polyhedral cones that are full-dimensional in their span and fixed by the
//! special closure operator.

use crate::exactq::{dot, is_zero_vec, primitive, Arrangement, Cone, Rat, Subspace};
use crate::motives::{RationalFn, StrataMotive, StratumClass, StratumKind};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StackError {
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("composite cone is not full-dimensional in the target face")]
    NotFullDimensional,
    #[error("table model is missing required data: {0}")]
    MissingTableData(String),
    #[error("invalid model: {0}")]
    BadModel(String),
}

/// A quotient stack `V/T` for a torus `T` of the given rank acting on a
/// coordinate vector space `V` with the given integer weight covectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearTorusStack {
    torus_rank: usize,
    weights: Vec<Vec<Rat>>,
}

impl LinearTorusStack {
    pub fn new(torus_rank: usize, weights: Vec<Vec<Rat>>) -> Result<LinearTorusStack, StackError> {
        for w in &weights {
            if w.len() != torus_rank {
                return Err(StackError::BadModel(format!(
                    "weight has {} entries, expected {}",
                    w.len(),
                    torus_rank
                )));
            }
        }
        Ok(LinearTorusStack { torus_rank, weights })
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn weights(&self) -> &[Vec<Rat>] {
        &self.weights
    }

    pub fn dim(&self) -> i64 {
        self.weights.len() as i64 - self.torus_rank as i64
    }

    /// Indices of the coordinates whose weight vanishes on the given face:
    /// the coordinates of the graded stack `X_face`.
    pub fn coords_on(&self, face: &Subspace) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| face.basis().iter().all(|b| dot(w, b).is_zero()))
            .map(|(i, _)| i)
            .collect()
    }
}

/// The linear torus stack of a quiver: one coordinate per edge `i -> j`
/// with weight `e_j - e_i` on the rank-`vertices` torus.
pub fn quiver_stack(vertices: usize, edges: &[(usize, usize)]) -> Result<LinearTorusStack, StackError> {
    let mut weights = Vec::new();
    for &(i, j) in edges {
        if i >= vertices || j >= vertices {
            return Err(StackError::BadModel(format!("edge ({i},{j}) out of range")));
        }
        let mut w = vec![Rat::zero(); vertices];
        w[j] += Rat::from_integer(1.into());
        w[i] -= Rat::from_integer(1.into());
        weights.push(w);
    }
    LinearTorusStack::new(vertices, weights)
}

/// A cone tagged with the face it spans. Invariant: `cone` is
/// full-dimensional in `face` (its carrier equals `face`), so this is the
/// canonical key type for special cones and stability measures.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeInFace {
    face: Subspace,
    cone: Cone,
}

impl ConeInFace {
    pub fn new(cone: Cone) -> ConeInFace {
        ConeInFace { face: cone.carrier().clone(), cone }
    }

    pub fn zero(n: usize) -> ConeInFace {
        ConeInFace::new(Cone::zero(n))
    }

    /// The face itself viewed as a cone (the identity morphism of the face).
    pub fn face_cone(face: &Subspace) -> ConeInFace {
        let mut gens: Vec<Vec<Rat>> = face.basis().to_vec();
        gens.extend(face.basis().iter().map(|b| b.iter().map(|x| -x).collect::<Vec<_>>()));
        ConeInFace::new(Cone::hull(face.ambient_dim(), &gens))
    }

    pub fn face(&self) -> &Subspace {
        &self.face
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn is_face_cone(&self) -> bool {
        self.cone.facets().is_empty()
    }
}

/// A declared stratum of a table stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableStratum {
    pub label: String,
    /// Face of the model the stratum lives over ({0} for strata of X
    /// itself, a bigger face for strata of a graded piece X_face).
    pub face: Subspace,
    pub point_motive: RationalFn,
    /// Special faces of the stratum, viewed inside its own graded stack.
    pub special_faces: Vec<Subspace>,
    /// Graded pieces: for each listed face, the class of the fixed locus as
    /// a combination of declared strata over that face.
    pub grad: Vec<(Subspace, Vec<(String, Rat)>)>,
}

/// One declared induction rule: (special cone sigma, stratum label over
/// span sigma, combination of strata over the zero face).
pub type StarRule = (ConeInFace, String, Vec<(String, Rat)>);

/// A stack declared by tables: every operator the engine needs is looked up
/// rather than computed from weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableStack {
    pub ambient: usize,
    pub dim: i64,
    pub faces: Vec<Subspace>,
    pub central: Subspace,
    /// All special cones (face cones included).
    pub cones: Vec<ConeInFace>,
    /// Special closures of non-special cones that the engine may encounter.
    pub closures: Vec<(Cone, ConeInFace)>,
    pub strata: Vec<TableStratum>,
    /// Hall induction: (special cone sigma, stratum label over span sigma)
    /// -> combination of strata over {0}.
    pub star: Vec<StarRule>,
    /// Optional automorphism weights per face (chain terms divide by the
    /// product of these); defaults to 1.
    pub aut: Vec<(Subspace, Rat)>,
}

impl TableStack {
    pub fn stratum(&self, label: &str) -> Result<&TableStratum, StackError> {
        self.strata
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| StackError::MissingTableData(format!("stratum '{label}'")))
    }

    fn class_of(&self, s: &TableStratum) -> StratumClass {
        StratumClass {
            face: s.face.clone(),
            kind: StratumKind::Table {
                label: s.label.clone(),
                point_motive: s.point_motive.clone(),
            },
        }
    }
}

/// Either flavour of model; all geometric operators dispatch on this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StackModel {
    Torus(LinearTorusStack),
    Table(TableStack),
}

impl StackModel {
    /// Dimension of the ambient cocharacter space `Q^n`.
    pub fn ambient_rank(&self) -> usize {
        match self {
            StackModel::Torus(t) => t.torus_rank(),
            StackModel::Table(t) => t.ambient,
        }
    }

    pub fn dim(&self) -> i64 {
        match self {
            StackModel::Torus(t) => t.dim(),
            StackModel::Table(t) => t.dim,
        }
    }
}

/// The central face: the common kernel of all weights (resp. the declared
/// central face). Every special face contains it.
pub fn central_face(x: &StackModel) -> Subspace {
    match x {
        StackModel::Torus(t) => Subspace::kernel(t.weights(), t.torus_rank()),
        StackModel::Table(t) => t.central.clone(),
    }
}

/// Central rank: the dimension of the central face.
pub fn crk(x: &StackModel) -> usize {
    central_face(x).dim()
}

/// Special faces of the model: the flats of the weight arrangement
/// (declared faces for tables). The zero face appears iff crk = 0.
pub fn special_faces(x: &StackModel) -> Vec<Subspace> {
    match x {
        StackModel::Torus(t) => {
            let n = t.torus_rank();
            Arrangement::new(Subspace::full(n), t.weights()).flats()
        }
        StackModel::Table(t) => {
            let mut f = t.faces.clone();
            f.sort();
            f.dedup();
            f
        }
    }
}

/// Largest dimension of a special face (the upper bound for the grading
/// degree `k`).
pub fn max_face_dim(x: &StackModel) -> usize {
    special_faces(x).iter().map(|f| f.dim()).max().unwrap_or(0)
}

/// The graded stack `X_face`: the same torus acting on the coordinates
/// whose weight vanishes on the face.
pub fn grad_restrict(x: &LinearTorusStack, face: &Subspace) -> LinearTorusStack {
    let kept: Vec<Vec<Rat>> = x
        .coords_on(face)
        .into_iter()
        .map(|i| x.weights()[i].clone())
        .collect();
    LinearTorusStack::new(x.torus_rank(), kept).expect("weights stay well-formed")
}

fn table_aut(t: &TableStack, face: &Subspace) -> Rat {
    t.aut
        .iter()
        .find(|(f, _)| f == face)
        .map(|(_, a)| a.clone())
        .unwrap_or_else(|| Rat::from_integer(1.into()))
}

/// Automorphism weight of a face (1 for torus models).
pub fn face_aut(x: &StackModel, face: &Subspace) -> Rat {
    match x {
        StackModel::Torus(_) => Rat::from_integer(1.into()),
        StackModel::Table(t) => table_aut(t, face),
    }
}

/// The special closure of a cone, relative to the graded stack `X_base`:
/// the largest cone inducing the same filtered stack. For a torus model
/// with active weights `A` (those of `X_base`):
/// `A0 = { w in A : w vanishes on the cone }`, `E = /\ ker A0`, and the
/// closure is `{ x in E : w(x) >= 0 for all w in A with w|_cone >= 0,
/// w not in A0 }`.
pub fn special_cone_closure(
    x: &StackModel,
    base: &Subspace,
    cone: &Cone,
) -> Result<ConeInFace, StackError> {
    match x {
        StackModel::Torus(t) => {
            let n = t.torus_rank();
            let mut zero_rows: Vec<Vec<Rat>> = Vec::new();
            let mut nonneg: Vec<Vec<Rat>> = Vec::new();
            for i in t.coords_on(base) {
                let w = &t.weights()[i];
                let vals: Vec<Rat> = cone.generators().iter().map(|g| dot(w, g)).collect();
                if vals.iter().all(|v| v.is_zero()) {
                    zero_rows.push(w.clone());
                } else if vals.iter().all(|v| !v.is_negative()) {
                    nonneg.push(w.clone());
                }
            }
            let e = Subspace::kernel(&zero_rows, n);
            Ok(ConeInFace::new(Cone::from_inequalities(&e, &nonneg)))
        }
        StackModel::Table(t) => {
            if let Some(c) = t.cones.iter().find(|c| c.cone() == cone) {
                return Ok(c.clone());
            }
            if let Some((_, cl)) = t.closures.iter().find(|(c, _)| c == cone) {
                return Ok(cl.clone());
            }
            Err(StackError::MissingTableData(format!(
                "special closure of a cone of dimension {}",
                cone.dim()
            )))
        }
    }
}

/// All special cones of `X_base` that are full-dimensional in the given
/// face: enumerated as the closure-fixed intersections of half-spaces cut
/// by the active weights not vanishing on the face.
pub fn special_cones_in_face(
    x: &StackModel,
    base: &Subspace,
    face: &Subspace,
) -> Result<Vec<ConeInFace>, StackError> {
    match x {
        StackModel::Torus(t) => {
            // Deduplicate weights by their (sign-preserving) primitive
            // restriction to the face: equal restrictions cut the same
            // half-space.
            let mut seen = BTreeSet::new();
            let mut cutters: Vec<Vec<Rat>> = Vec::new();
            for i in t.coords_on(base) {
                let w = &t.weights()[i];
                let r = face.restrict_covector(w);
                if is_zero_vec(&r) {
                    continue;
                }
                if seen.insert(primitive(&r)) {
                    cutters.push(w.clone());
                }
            }
            let m = cutters.len();
            if m > 20 {
                return Err(StackError::BadModel(format!(
                    "too many independent weights on a face ({m})"
                )));
            }
            let mut out = BTreeSet::new();
            for mask in 0u64..(1u64 << m) {
                let sel: Vec<Vec<Rat>> = cutters
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, w)| w.clone())
                    .collect();
                let c = Cone::from_inequalities(face, &sel);
                if c.dim() != face.dim() {
                    continue;
                }
                let cl = special_cone_closure(x, base, &c)?;
                if cl.cone() == &c {
                    out.insert(cl);
                }
            }
            Ok(out.into_iter().collect())
        }
        StackModel::Table(t) => {
            Ok(t.cones.iter().filter(|c| c.face() == face).cloned().collect())
        }
    }
}

/// All special cones of `X_base` across all its special faces.
pub fn special_cones(x: &StackModel, base: &Subspace) -> Result<Vec<ConeInFace>, StackError> {
    let faces = match x {
        StackModel::Torus(t) => {
            let restricted = StackModel::Torus(grad_restrict(t, base));
            special_faces(&restricted)
        }
        StackModel::Table(_) => special_faces(x),
    };
    let mut out = Vec::new();
    for f in faces {
        out.extend(special_cones_in_face(x, base, &f)?);
    }
    Ok(out)
}

/// Hall composition `sigma1 UP sigma2`: the target-face cone
/// `sigma2 /\ D`, where `D` is the smallest full-dimensional special cone
/// of the target face whose relative interior contains that of `sigma1`.
/// Errors with `NotAMorphism` unless `span(sigma1) <= span(sigma2)`, and
/// with `NotFullDimensional` if the intersection drops dimension.
pub fn hall_compose(
    x: &StackModel,
    base: &Subspace,
    sigma1: &ConeInFace,
    sigma2: &ConeInFace,
) -> Result<ConeInFace, StackError> {
    if !sigma2.face().contains_subspace(sigma1.face()) {
        return Err(StackError::NotAMorphism(
            "source cone does not span a subface of the target face".into(),
        ));
    }
    match x {
        StackModel::Torus(t) => {
            // D = { x in face(sigma2) : w(x) >= 0 for every active weight w
            // that is nonnegative on sigma1 but not identically zero on its
            // span }.
            let mut cutters: Vec<Vec<Rat>> = Vec::new();
            for i in t.coords_on(base) {
                let w = &t.weights()[i];
                let vals: Vec<Rat> = sigma1.cone().generators().iter().map(|g| dot(w, g)).collect();
                let vanishes_on_span = is_zero_vec(&sigma1.face().restrict_covector(w));
                if !vanishes_on_span && vals.iter().all(|v| !v.is_negative()) {
                    cutters.push(w.clone());
                }
            }
            let d = Cone::from_inequalities(sigma2.face(), &cutters);
            let comp = sigma2.cone().intersect(&d);
            if comp.dim() != sigma2.face().dim() {
                return Err(StackError::NotFullDimensional);
            }
            Ok(ConeInFace::new(comp))
        }
        StackModel::Table(t) => {
            let p = sigma1.cone().relint_point();
            let mut candidates: Vec<&ConeInFace> = t
                .cones
                .iter()
                .filter(|c| {
                    c.face() == sigma2.face()
                        && c.cone().contains_cone(sigma1.cone())
                        && (sigma1.cone().dim() == 0 || c.cone().relint_contains(&p))
                })
                .collect();
            if sigma1.cone().dim() == 0 {
                // the zero cone sits in the relative interior only of the
                // face cone
                candidates.retain(|c| c.is_face_cone());
            }
            let d = candidates
                .iter()
                .find(|c| candidates.iter().all(|o| c.cone().is_subset_of(o.cone())))
                .copied()
                .ok_or_else(|| StackError::MissingTableData("no enclosing special cone".into()))?;
            let comp = sigma2.cone().intersect(d.cone());
            if comp.dim() != sigma2.face().dim() {
                return Err(StackError::NotFullDimensional);
            }
            t.cones
                .iter()
                .find(|c| c.cone() == &comp)
                .cloned()
                .ok_or_else(|| StackError::MissingTableData("composite cone not declared".into()))
        }
    }
}

fn torus_class(
    t: &LinearTorusStack,
    base: &Subspace,
    zero: Vec<usize>,
    nonzero: Vec<usize>,
    free: Vec<usize>,
) -> StratumClass {
    let mut z = zero;
    let mut nz = nonzero;
    let mut fr = free;
    z.sort_unstable();
    nz.sort_unstable();
    fr.sort_unstable();
    StratumClass {
        face: base.clone(),
        kind: StratumKind::Torus { torus_rank: t.torus_rank(), zero: z, nonzero: nz, free: fr },
    }
}

/// Build a torus stratum class over a base face from a partition of the
/// active coordinates into zero / nonzero / free parts.
pub fn torus_stratum(
    x: &LinearTorusStack,
    base: &Subspace,
    zero: &[usize],
    nonzero: &[usize],
    free: &[usize],
) -> Result<StratumClass, StackError> {
    let mut all: Vec<usize> = zero.iter().chain(nonzero).chain(free).copied().collect();
    all.sort_unstable();
    let mut expected = x.coords_on(base);
    expected.sort_unstable();
    if all != expected {
        return Err(StackError::BadModel(
            "stratum parts do not partition the active coordinates".into(),
        ));
    }
    Ok(torus_class(x, base, zero.to_vec(), nonzero.to_vec(), free.to_vec()))
}

/// The unit `1_X` as a list of disjoint stratum classes.
pub fn indicator_all(x: &StackModel) -> Vec<StratumClass> {
    match x {
        StackModel::Torus(t) => {
            let n = t.torus_rank();
            let free: Vec<usize> = (0..t.weights().len()).collect();
            vec![torus_class(t, &Subspace::zero(n), Vec::new(), Vec::new(), free)]
        }
        StackModel::Table(t) => {
            let z = Subspace::zero(t.ambient);
            t.strata.iter().filter(|s| s.face == z).map(|s| t.class_of(s)).collect()
        }
    }
}

/// Special faces of one stratum, inside its own graded stack: flats of the
/// arrangement of the zero and free weights within the common kernel of the
/// nonzero weights (declared list for table strata).
pub fn stratum_special_faces(x: &StackModel, s: &StratumClass) -> Result<Vec<Subspace>, StackError> {
    match (x, &s.kind) {
        (StackModel::Torus(t), StratumKind::Torus { zero, nonzero, free, .. }) => {
            let n = t.torus_rank();
            let pinned: Vec<Vec<Rat>> =
                nonzero.iter().map(|&i| t.weights()[i].clone()).collect();
            let ambient = Subspace::kernel(&pinned, n);
            let covs: Vec<Vec<Rat>> =
                zero.iter().chain(free).map(|&i| t.weights()[i].clone()).collect();
            Ok(Arrangement::new(ambient, &covs).flats())
        }
        (StackModel::Table(t), StratumKind::Table { label, .. }) => {
            Ok(t.stratum(label)?.special_faces.clone())
        }
        _ => Err(StackError::BadModel("stratum kind does not match the model".into())),
    }
}

/// The graded piece `[Z_face]` of one stratum class: `None` when the fixed
/// locus is empty. Torus strata keep the active coordinates of the bigger
/// face; a pinned-nonzero coordinate that is dropped kills the class.
pub fn grad_class(
    x: &StackModel,
    s: &StratumClass,
    face: &Subspace,
) -> Result<Option<Vec<(StratumClass, Rat)>>, StackError> {
    match (x, &s.kind) {
        (StackModel::Torus(t), StratumKind::Torus { zero, nonzero, free, .. }) => {
            let kept: BTreeSet<usize> = t.coords_on(face).into_iter().collect();
            if nonzero.iter().any(|i| !kept.contains(i)) {
                return Ok(None);
            }
            let z: Vec<usize> = zero.iter().copied().filter(|i| kept.contains(i)).collect();
            let nz = nonzero.clone();
            let fr: Vec<usize> = free.iter().copied().filter(|i| kept.contains(i)).collect();
            Ok(Some(vec![(torus_class(t, face, z, nz, fr), Rat::from_integer(1.into()))]))
        }
        (StackModel::Table(t), StratumKind::Table { label, .. }) => {
            let st = t.stratum(label)?;
            let Some((_, parts)) = st.grad.iter().find(|(f, _)| f == face) else {
                return Ok(None);
            };
            let mut out = Vec::new();
            for (lab, c) in parts {
                out.push((t.class_of(t.stratum(lab)?), c.clone()));
            }
            Ok(Some(out))
        }
        _ => Err(StackError::BadModel("stratum kind does not match the model".into())),
    }
}

/// Pullback along grading: restrict a motive on `X` to the graded stack
/// `X_face` by taking fixed loci of every stratum class.
pub fn graded_pullback(
    x: &StackModel,
    face: &Subspace,
    m: &StrataMotive,
) -> Result<StrataMotive, StackError> {
    let mut out = StrataMotive::zero();
    for (c, coeff) in m.iter() {
        if let Some(parts) = grad_class(x, c, face)? {
            for (cl, w) in parts {
                out.add_class(cl, coeff * &w);
            }
        }
    }
    Ok(out)
}

/// Hall induction `*_sigma`: push a motive on the graded stack of
/// `span(sigma)` down to `X_base` along the filtrations indexed by `sigma`.
/// For a torus model, a dropped coordinate becomes free when its weight is
/// nonnegative on `sigma`, and pinned to zero otherwise.
pub fn hall_induce(
    x: &StackModel,
    base: &Subspace,
    sigma: &ConeInFace,
    m: &StrataMotive,
) -> Result<StrataMotive, StackError> {
    if !sigma.cone().contains_cone(&Cone::hull(
        base.ambient_dim(),
        &base
            .basis()
            .iter()
            .flat_map(|b| [b.clone(), b.iter().map(|x| -x).collect()])
            .collect::<Vec<_>>(),
    )) {
        return Err(StackError::NotAMorphism(
            "the base face is not contained in the inducing cone".into(),
        ));
    }
    let mut out = StrataMotive::zero();
    for (c, coeff) in m.iter() {
        if &c.face != sigma.face() {
            return Err(StackError::NotAMorphism(
                "class does not live over the span of the inducing cone".into(),
            ));
        }
        match (x, &c.kind) {
            (StackModel::Torus(t), StratumKind::Torus { zero, nonzero, free, .. }) => {
                let kept: BTreeSet<usize> = t.coords_on(sigma.face()).into_iter().collect();
                let mut z = zero.clone();
                let mut fr = free.clone();
                for i in t.coords_on(base) {
                    if kept.contains(&i) {
                        continue;
                    }
                    let w = &t.weights()[i];
                    let nonneg =
                        sigma.cone().generators().iter().all(|g| !dot(w, g).is_negative());
                    if nonneg {
                        fr.push(i);
                    } else {
                        z.push(i);
                    }
                }
                out.add_class(torus_class(t, base, z, nonzero.clone(), fr), coeff.clone());
            }
            (StackModel::Table(t), StratumKind::Table { label, .. }) => {
                if !base.is_zero() {
                    return Err(StackError::MissingTableData(
                        "table induction is only declared over the zero base".into(),
                    ));
                }
                if sigma.cone().dim() == 0 {
                    out.add_class(c.clone(), coeff.clone());
                    continue;
                }
                let rule = t
                    .star
                    .iter()
                    .find(|(cn, lab, _)| cn == sigma && lab == label)
                    .ok_or_else(|| {
                        StackError::MissingTableData(format!(
                            "induction rule for stratum '{label}'"
                        ))
                    })?;
                for (lab, w) in &rule.2 {
                    out.add_class(t.class_of(t.stratum(lab)?), coeff * w);
                }
            }
            _ => return Err(StackError::BadModel("stratum kind does not match the model".into())),
        }
    }
    Ok(out)
}

//! Exact rational linear algebra and polyhedral geometry.
//!
//! All subspaces are kept in reduced row echelon form so that equal
//! subspaces compare equal structurally, and all cones carry a canonical
//! double description (facet covectors plus regenerated generators), so
//! `Eq`/`Ord`/`Hash` on these types are geometric equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational scalar used everywhere in this crate.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Scale a nonzero rational vector to primitive integer form (coprime
/// integer entries). Only positive scaling is applied, so the direction is
/// preserved. Zero vectors are returned unchanged.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = num_integer::gcd(gcd, n.abs());
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|n| Rat::from_integer(n / &gcd)).collect()
}

/// Reduced row echelon form; zero rows are dropped and the surviving rows
/// are ordered by pivot column. The result is the canonical basis of the
/// row span.
pub fn rref(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        let Some(r) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let prow = m[pivot_row].clone();
        for (r2, row) in m.iter_mut().enumerate() {
            if r2 != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (c, p) in prow.iter().enumerate() {
                    let sub = &f * p;
                    row[c] -= sub;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

fn pivots(rref_rows: &[Vec<Rat>]) -> Vec<usize> {
    rref_rows
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("no zero rows in rref"))
        .collect()
}

/// Canonical basis of `{ x in Q^n : A x = 0 }` for the rows `a` of `A`.
pub fn kernel_basis(a: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let r = rref(a);
    let piv = pivots(&r);
    let mut basis = Vec::new();
    for j in 0..n {
        if piv.contains(&j) {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[j] = Rat::one();
        for (row, &p) in r.iter().zip(&piv) {
            v[p] = -row[j].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve the square system `A x = b`; `None` if `A` is singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    aug = rref(&aug);
    if aug.len() != n {
        return None;
    }
    let piv = pivots(&aug);
    if piv.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &p) in aug.iter().zip(&piv) {
        x[p] = row[n].clone();
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// A linear subspace of `Q^n`, stored as the reduced row echelon basis of
/// its span. Structural equality is geometric equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    n: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn span(n: usize, vecs: &[Vec<Rat>]) -> Subspace {
        for v in vecs {
            assert_eq!(v.len(), n, "vector length does not match ambient dimension");
        }
        Subspace { n, basis: rref(vecs) }
    }

    pub fn zero(n: usize) -> Subspace {
        Subspace { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Subspace {
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![Rat::zero(); n];
                v[i] = Rat::one();
                v
            })
            .collect();
        Subspace { n, basis }
    }

    /// Kernel of the linear map with the given rows.
    pub fn kernel(rows: &[Vec<Rat>], n: usize) -> Subspace {
        Subspace { n, basis: rref(&kernel_basis(rows, n)) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&pivots(&self.basis)) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for c in 0..self.n {
                    let sub = &f * &row[c];
                    v[c] -= sub;
                }
            }
        }
        is_zero_vec(&v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.n, &rows)
    }

    /// Canonical basis of the annihilator `{ f : f(v) = 0 for v in self }`.
    pub fn annihilator(&self) -> Vec<Vec<Rat>> {
        kernel_basis(&self.basis, self.n)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let mut rows = self.annihilator();
        rows.extend(other.annihilator());
        Subspace::kernel(&rows, self.n)
    }

    /// Coordinates of `v` (assumed to lie in the subspace) with respect to
    /// the canonical basis: for an rref basis these are just the pivot
    /// entries of `v`.
    pub fn coords(&self, v: &[Rat]) -> Vec<Rat> {
        debug_assert!(self.contains(v));
        pivots(&self.basis).iter().map(|&p| v[p].clone()).collect()
    }

    pub fn from_coords(&self, t: &[Rat]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.n];
        for (row, c) in self.basis.iter().zip(t) {
            for j in 0..self.n {
                let add = c * &row[j];
                v[j] += add;
            }
        }
        v
    }

    /// Restriction of an ambient covector to subspace coordinates.
    pub fn restrict_covector(&self, f: &[Rat]) -> Vec<Rat> {
        self.basis.iter().map(|b| dot(f, b)).collect()
    }

    /// Canonical ambient covector restricting to the given coordinate
    /// covector (the unique one lying in the row span of the basis).
    pub fn lift_covector(&self, c: &[Rat]) -> Vec<Rat> {
        let d = self.dim();
        assert_eq!(c.len(), d);
        let gram: Vec<Vec<Rat>> = self
            .basis
            .iter()
            .map(|bi| self.basis.iter().map(|bj| dot(bi, bj)).collect())
            .collect();
        let x = solve_square(&gram, c).expect("gram matrix of independent rows is invertible");
        let mut f = vec![Rat::zero(); self.n];
        for (xi, b) in x.iter().zip(&self.basis) {
            for j in 0..self.n {
                let add = xi * &b[j];
                f[j] += add;
            }
        }
        f
    }
}

/// Extreme rays of the pointed cone `{ x in Q^d : row . x >= 0 }`.
/// Requires the constraint rows to span `(Q^d)^*` (pointedness).
fn extreme_rays_pointed(rows: &[Vec<Rat>], d: usize) -> Vec<Vec<Rat>> {
    if d == 0 {
        return Vec::new();
    }
    let mut out = std::collections::BTreeSet::new();
    for idx in combinations(rows.len(), d - 1) {
        let sub: Vec<Vec<Rat>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let ker = kernel_basis(&sub, d);
        if ker.len() != 1 {
            continue;
        }
        let v = primitive(&ker[0]);
        for cand in [v.clone(), v.iter().map(|x| -x).collect::<Vec<_>>()] {
            if rows.iter().all(|r| !dot(r, &cand).is_negative()) {
                out.insert(cand);
                break;
            }
        }
    }
    out.into_iter().collect()
}

/// Generators of `{ x in Q^d : row . x >= 0 }` for an arbitrary (not
/// necessarily pointed) system: rref basis of the lineality space with both
/// signs, plus the extreme rays of the pointed quotient part.
fn generators_from_inequalities(rows: &[Vec<Rat>], d: usize) -> Vec<Vec<Rat>> {
    let lin = rref(&kernel_basis(rows, d));
    let lin_piv = pivots(&lin);
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for b in &lin {
        gens.push(primitive(b));
        gens.push(primitive(&b.iter().map(|x| -x).collect::<Vec<_>>()));
    }
    // Complement of the lineality space spanned by the non-pivot
    // coordinate directions.
    let w: Vec<usize> = (0..d).filter(|j| !lin_piv.contains(j)).collect();
    if !w.is_empty() {
        let proj: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| w.iter().map(|&j| r[j].clone()).collect())
            .collect();
        for ray in extreme_rays_pointed(&proj, w.len()) {
            let mut v = vec![Rat::zero(); d];
            for (k, &j) in w.iter().enumerate() {
                v[j] = ray[k].clone();
            }
            gens.push(primitive(&v));
        }
    }
    gens
}

/// A polyhedral cone, full-dimensional in its carrier subspace, stored in
/// canonical double description: `facets` are primitive ambient covectors
/// (the extreme rays of the dual cone restricted to the carrier), and
/// `generators` are primitive ambient vectors regenerated from the facets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    carrier: Subspace,
    generators: Vec<Vec<Rat>>,
    facets: Vec<Vec<Rat>>,
}

impl Cone {
    /// Conical hull of finitely many vectors. The carrier is their span.
    pub fn hull(n: usize, vecs: &[Vec<Rat>]) -> Cone {
        let carrier = Subspace::span(n, vecs);
        if carrier.is_zero() {
            return Cone::zero(n);
        }
        let d = carrier.dim();
        let rows: Vec<Vec<Rat>> = vecs
            .iter()
            .filter(|v| !is_zero_vec(v))
            .map(|v| carrier.coords(v))
            .collect();
        // Facet covectors = extreme rays of the dual cone, which is pointed
        // because the generators span the carrier.
        let facets_c = extreme_rays_pointed(&rows, d);
        Cone::from_carrier_facets(carrier, facets_c)
    }

    /// The zero cone `{0}` in `Q^n`.
    pub fn zero(n: usize) -> Cone {
        Cone { carrier: Subspace::zero(n), generators: Vec::new(), facets: Vec::new() }
    }

    /// `{ x in face : ineq . x >= 0 }` for ambient covectors `ineq`,
    /// in canonical form. The carrier shrinks to the span of the solution
    /// set when the inequalities force equalities.
    pub fn from_inequalities(face: &Subspace, ineqs: &[Vec<Rat>]) -> Cone {
        let n = face.ambient_dim();
        if face.is_zero() {
            return Cone::zero(n);
        }
        let d = face.dim();
        let rows: Vec<Vec<Rat>> = ineqs
            .iter()
            .map(|f| face.restrict_covector(f))
            .filter(|r| !is_zero_vec(r))
            .collect();
        let gens_c = generators_from_inequalities(&rows, d);
        let gens: Vec<Vec<Rat>> = gens_c.iter().map(|g| face.from_coords(g)).collect();
        Cone::hull(n, &gens)
    }

    fn from_carrier_facets(carrier: Subspace, facets_c: Vec<Vec<Rat>>) -> Cone {
        let d = carrier.dim();
        let gens_c = generators_from_inequalities(&facets_c, d);
        let mut generators: Vec<Vec<Rat>> = gens_c
            .iter()
            .map(|g| primitive(&carrier.from_coords(g)))
            .collect();
        generators.sort();
        generators.dedup();
        let mut facets: Vec<Vec<Rat>> = facets_c
            .iter()
            .map(|f| primitive(&carrier.lift_covector(f)))
            .collect();
        facets.sort();
        facets.dedup();
        Cone { carrier, generators, facets }
    }

    pub fn ambient_dim(&self) -> usize {
        self.carrier.ambient_dim()
    }

    /// Dimension of the cone (it is always full-dimensional in its carrier).
    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    /// Primitive ambient covectors cutting out the cone inside its carrier.
    pub fn facets(&self) -> &[Vec<Rat>] {
        &self.facets
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.carrier.contains(v) && self.facets.iter().all(|f| !dot(f, v).is_negative())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// A point in the relative interior (the sum of the generators; the
    /// lineality directions cancel and each facet sees a strict positive).
    pub fn relint_point(&self) -> Vec<Rat> {
        let n = self.ambient_dim();
        let mut p = vec![Rat::zero(); n];
        for g in &self.generators {
            for j in 0..n {
                p[j] += &g[j];
            }
        }
        p
    }

    pub fn relint_contains(&self, v: &[Rat]) -> bool {
        self.carrier.contains(v) && self.facets.iter().all(|f| dot(f, v).is_positive())
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let face = self.carrier.intersect(&other.carrier);
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        Cone::from_inequalities(&face, &ineqs)
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }
}

/// A finite hyperplane arrangement inside an ambient subspace. Covectors
/// that vanish on the ambient subspace are dropped, and covectors with the
/// same restriction up to positive scaling are identified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    ambient: Subspace,
    covectors: Vec<Vec<Rat>>,
}

impl Arrangement {
    pub fn new(ambient: Subspace, covectors: &[Vec<Rat>]) -> Arrangement {
        let mut seen = std::collections::BTreeSet::new();
        let mut kept = Vec::new();
        for f in covectors {
            let r = ambient.restrict_covector(f);
            if is_zero_vec(&r) {
                continue;
            }
            // identify f and -f as the same hyperplane, but remember the
            // original orientation for chamber enumeration
            let p = primitive(&r);
            let flipped: Vec<Rat> = p.iter().map(|x| -x).collect();
            if seen.contains(&p) || seen.contains(&flipped) {
                continue;
            }
            seen.insert(p);
            kept.push(f.clone());
        }
        Arrangement { ambient, covectors: kept }
    }

    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn covectors(&self) -> &[Vec<Rat>] {
        &self.covectors
    }

    /// Closed chambers: the full-dimensional sign cells, each returned as a
    /// canonical cone, sorted and deduplicated.
    pub fn chambers(&self) -> Vec<Cone> {
        let m = self.covectors.len();
        let mut out = std::collections::BTreeSet::new();
        for mask in 0u64..(1u64 << m) {
            let ineqs: Vec<Vec<Rat>> = self
                .covectors
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    if mask >> i & 1 == 1 {
                        f.iter().map(|x| -x).collect()
                    } else {
                        f.clone()
                    }
                })
                .collect();
            let c = Cone::from_inequalities(&self.ambient, &ineqs);
            if c.dim() == self.ambient.dim() {
                out.insert(c);
            }
        }
        out.into_iter().collect()
    }

    /// All flats: intersections of subsets of the hyperplanes with the
    /// ambient subspace (the empty subset contributes the ambient itself),
    /// sorted and deduplicated.
    pub fn flats(&self) -> Vec<Subspace> {
        let m = self.covectors.len();
        let mut out = std::collections::BTreeSet::new();
        for mask in 0u64..(1u64 << m) {
            let rows: Vec<Vec<Rat>> = self
                .covectors
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, f)| f.clone())
                .collect();
            out.insert(self.ambient.intersect(&Subspace::kernel(&rows, self.ambient.ambient_dim())));
        }
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn kernel_of_sum_map() {
        // kernel of (x+y+z) in Q^3 is a plane
        let k = Subspace::kernel(&[v(&[1, 1, 1])], 3);
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&v(&[1, -1, 0])));
        assert!(k.contains(&v(&[0, 1, -1])));
        assert!(!k.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn kernel_of_zero_map_is_full() {
        assert_eq!(Subspace::kernel(&[], 3), Subspace::full(3));
    }

    #[test]
    fn subspace_canonical_equality() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let b = Subspace::span(3, &[v(&[1, 1, 1]), v(&[2, 2, 1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersect_and_sum() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersect(&b);
        assert_eq!(i, Subspace::span(3, &[v(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    #[test]
    fn hull_of_ray_is_primitive() {
        let c = Cone::hull(3, &[v(&[2, 1, 0]), v(&[4, 2, 0])]);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.generators(), &[v(&[2, 1, 0])]);
    }

    #[test]
    fn hull_quadrant() {
        let c = Cone::hull(2, &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.generators(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.facets().len(), 2);
        assert!(c.contains(&v(&[3, 5])));
        assert!(!c.contains(&v(&[-1, 5])));
        assert!(c.relint_contains(&v(&[1, 1])));
        assert!(!c.relint_contains(&v(&[1, 0])));
    }

    #[test]
    fn hull_with_lineality() {
        // half-plane {y >= 0} in Q^2
        let c = Cone::hull(2, &[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.facets(), &[v(&[0, 1])]);
        assert!(c.contains(&v(&[-7, 2])));
        assert!(!c.contains(&v(&[0, -1])));
    }

    #[test]
    fn from_inequalities_roundtrip() {
        let face = Subspace::full(2);
        let c = Cone::from_inequalities(&face, &[v(&[1, 0]), v(&[0, 1])]);
        let d = Cone::hull(2, &[v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(c, d);
    }

    #[test]
    fn from_inequalities_forced_equality() {
        // x >= 0 and -x >= 0 forces x = 0: the carrier shrinks
        let c = Cone::from_inequalities(&Subspace::full(2), &[v(&[1, 0]), v(&[-1, 0])]);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.carrier(), &Subspace::span(2, &[v(&[0, 1])]));
        assert!(c.facets().is_empty());
    }

    #[test]
    fn zero_cone() {
        let z = Cone::zero(3);
        assert_eq!(z.dim(), 0);
        assert!(z.contains(&v(&[0, 0, 0])));
        assert!(!z.contains(&v(&[1, 0, 0])));
        assert!(z.is_subset_of(&Cone::hull(3, &[v(&[1, 0, 0])])));
    }

    #[test]
    fn intersect_cones() {
        let a = Cone::hull(2, &[v(&[1, 0]), v(&[1, 1])]);
        let b = Cone::hull(2, &[v(&[1, 1]), v(&[0, 1])]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert_eq!(i.generators(), &[v(&[1, 1])]);
    }

    #[test]
    fn cone_in_small_carrier() {
        // ray inside the plane x1 = x2 in Q^3
        let plane = Subspace::kernel(&[v(&[1, -1, 0])], 3);
        let c = Cone::from_inequalities(&plane, &[v(&[0, 0, 1])]);
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&v(&[1, 1, 3])));
        assert!(!c.contains(&v(&[1, 1, -1])));
        assert!(!c.contains(&v(&[1, 0, 3])));
    }

    #[test]
    fn chambers_of_line_arrangement() {
        // two lines x = 0 and y = 0 in Q^2: four closed quadrants
        let arr = Arrangement::new(Subspace::full(2), &[v(&[1, 0]), v(&[0, 1])]);
        let ch = arr.chambers();
        assert_eq!(ch.len(), 4);
        for c in &ch {
            assert_eq!(c.dim(), 2);
        }
    }

    #[test]
    fn chambers_dedup_parallel_covectors() {
        let arr = Arrangement::new(Subspace::full(2), &[v(&[1, 0]), v(&[-2, 0]), v(&[3, 0])]);
        assert_eq!(arr.covectors().len(), 1);
        assert_eq!(arr.chambers().len(), 2);
    }

    #[test]
    fn flats_of_braid_q3() {
        // braid covectors on Q^3: flats are Q^3, three planes, the diagonal
        let arr = Arrangement::new(
            Subspace::full(3),
            &[v(&[1, -1, 0]), v(&[0, 1, -1]), v(&[1, 0, -1])],
        );
        let flats = arr.flats();
        assert_eq!(flats.len(), 5);
        assert!(flats.contains(&Subspace::full(3)));
        assert!(flats.contains(&Subspace::span(3, &[v(&[1, 1, 1])])));
    }

    #[test]
    fn arrangement_restricted_to_subspace() {
        // restrict x >= 0 type covectors to the diagonal plane in Q^3
        let plane = Subspace::kernel(&[v(&[1, 1, 1])], 3);
        let arr = Arrangement::new(plane.clone(), &[v(&[1, 1, 1]), v(&[1, 0, 0])]);
        // the first covector dies on the plane
        assert_eq!(arr.covectors().len(), 1);
        let ch = arr.chambers();
        assert_eq!(ch.len(), 2);
        for c in &ch {
            assert_eq!(c.carrier(), &plane);
        }
    }

    #[test]
    fn coords_roundtrip() {
        let s = Subspace::span(3, &[v(&[1, 2, 0]), v(&[0, 0, 1])]);
        let p = v(&[3, 6, 5]);
        assert!(s.contains(&p));
        assert_eq!(s.from_coords(&s.coords(&p)), p);
    }

    #[test]
    fn lift_covector_restricts_back() {
        let s = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let c = vec![rat(2), rat(-3)];
        let f = s.lift_covector(&c);
        assert_eq!(s.restrict_covector(&f), c);
    }
}

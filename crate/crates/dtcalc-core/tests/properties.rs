//! Randomized structural properties of the exact-arithmetic layer and the
//! chain-sum operators, on small randomly generated models.

use dtcalc_core::dtinv::chi_compatibility_check;
use dtcalc_core::epsilon::{epsilon_k, equals_pi_with_trivial_measure, indicator, pi_k};
use dtcalc_core::measures::{
    canonical_measure, convolve, delta, invert, partition_check, pullback_measure,
    quiver_measure, to_prestability, trivial_measure,
};
use dtcalc_core::motives::{Poly, RationalFn, StrataMotive};
use dtcalc_core::stackmodel::{crk, max_face_dim, quiver_stack, special_cone_closure, special_cones};
use dtcalc_core::{Arrangement, Cone, LinearTorusStack, Rat, StackModel, Subspace};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn small_vec(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec((-2i64..=2).prop_map(rat), n)
}

fn vectors(n: usize, max_count: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    proptest::collection::vec(small_vec(n), 0..=max_count)
}

fn poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(small_rat(), 0..=4).prop_map(Poly::new)
}

fn stack() -> impl Strategy<Value = LinearTorusStack> {
    (1usize..=3)
        .prop_flat_map(|n| vectors(n, 3).prop_map(move |w| (n, w)))
        .prop_map(|(n, w)| LinearTorusStack::new(n, w).expect("any weights are valid"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // --- cones and subspaces ---

    #[test]
    fn hull_is_canonical(gens in vectors(3, 4)) {
        let c = Cone::hull(3, &gens);
        // every generator lies in the cone, and rebuilding from the
        // computed generators reproduces the cone exactly
        for g in &gens {
            prop_assert!(c.contains(g));
        }
        prop_assert_eq!(Cone::hull(3, c.generators()), c.clone());
        prop_assert_eq!(c.intersect(&c), c);
    }

    #[test]
    fn cone_facets_cut_the_carrier(gens in vectors(3, 4)) {
        let c = Cone::hull(3, &gens);
        // a nonnegative combination of generators satisfies every facet
        let mut p = vec![Rat::zero(); 3];
        for (i, g) in c.generators().iter().enumerate() {
            let w = rat((i % 3 + 1) as i64);
            for (pc, gc) in p.iter_mut().zip(g) {
                *pc += &w * gc;
            }
        }
        prop_assert!(c.contains(&p));
    }

    #[test]
    fn subspace_sum_and_intersection(a in vectors(3, 2), b in vectors(3, 2)) {
        let u = Subspace::span(3, &a);
        let v = Subspace::span(3, &b);
        let s = u.sum(&v);
        let i = u.intersect(&v);
        prop_assert!(s.contains_subspace(&u) && s.contains_subspace(&v));
        prop_assert!(u.contains_subspace(&i) && v.contains_subspace(&i));
        // modular dimension formula
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
    }

    #[test]
    fn chambers_are_disjoint_and_flats_intersect(covs in vectors(3, 3)) {
        let arr = Arrangement::new(Subspace::full(3), &covs);
        let chambers = arr.chambers();
        for (i, c) in chambers.iter().enumerate() {
            for d in chambers.iter().skip(i + 1) {
                // distinct chambers meet only on their boundary
                let meet = c.intersect(d);
                prop_assert!(meet.dim() < 3);
            }
        }
        let flats = arr.flats();
        for f in &flats {
            for g in &flats {
                prop_assert!(flats.contains(&f.intersect(g)));
            }
        }
    }

    #[test]
    fn special_closure_is_idempotent(t in stack(), gens in vectors(3, 3)) {
        let n = t.torus_rank();
        let x = StackModel::Torus(t);
        let zero = Subspace::zero(n);
        let trimmed: Vec<Vec<Rat>> = gens.into_iter().map(|g| g[..n].to_vec()).collect();
        let c = Cone::hull(n, &trimmed);
        let cl = special_cone_closure(&x, &zero, &c).unwrap();
        let cl2 = special_cone_closure(&x, &zero, cl.cone()).unwrap();
        prop_assert_eq!(&cl2, &cl);
        prop_assert!(cl.cone().contains_cone(&c));
    }

    // --- polynomials and rational functions ---

    #[test]
    fn poly_ring_laws(a in poly(), b in poly(), c in poly(), x in small_rat()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).eval(&x), a.eval(&x) * b.eval(&x));
    }

    #[test]
    fn rational_fn_field_laws(a in poly(), b in poly()) {
        let f = RationalFn::from_poly(a);
        let g = RationalFn::from_poly(b.clone());
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        if !b.is_zero() {
            let q = f.div(&g);
            prop_assert_eq!(q.mul(&g), f);
        }
    }

    // --- measures ---

    #[test]
    fn quiver_pullback_partitions(
        edges in proptest::collection::vec((0usize..3, 0usize..3), 1..=3),
        slopes in proptest::collection::vec(small_rat(), 3),
    ) {
        let t = quiver_stack(3, &edges).unwrap();
        let x = StackModel::Torus(t);
        let mu = pullback_measure(&quiver_measure(3, &edges, &slopes).unwrap(), &x).unwrap();
        prop_assert!(partition_check(&x, &mu).unwrap());
    }

    #[test]
    fn canonical_measure_partitions(t in stack()) {
        let x = StackModel::Torus(t);
        let mu = canonical_measure(&x).unwrap();
        prop_assert!(partition_check(&x, &mu).unwrap());
    }

    #[test]
    fn convolution_unit_and_inverse(t in stack()) {
        let x = StackModel::Torus(t);
        let pre = to_prestability(&x, &canonical_measure(&x).unwrap()).unwrap();
        let d = delta(&x);
        prop_assert_eq!(convolve(&x, &pre, &d).unwrap(), pre.clone());
        prop_assert_eq!(convolve(&x, &d, &pre).unwrap(), pre.clone());
        let nu = invert(&x, &pre).unwrap();
        prop_assert_eq!(convolve(&x, &nu, &pre).unwrap(), d.clone());
        prop_assert_eq!(convolve(&x, &pre, &nu).unwrap(), d);
    }

    // --- chain-sum operators ---

    #[test]
    fn projectors_decompose_identity(t in stack()) {
        let x = StackModel::Torus(t);
        let ind = indicator(&x);
        let mut total = StrataMotive::zero();
        for k in 0..=max_face_dim(&x) {
            total = total.add(&pi_k(&x, &ind, k).unwrap());
        }
        prop_assert_eq!(total.refine(), ind.refine());
    }

    #[test]
    fn epsilon_with_trivial_measure_is_pi(t in stack()) {
        let x = StackModel::Torus(t);
        let ind = indicator(&x);
        for k in 0..=max_face_dim(&x) {
            prop_assert!(equals_pi_with_trivial_measure(&x, &ind, k).unwrap());
        }
    }

    #[test]
    fn epsilon_vanishes_below_central_rank(t in stack()) {
        let x = StackModel::Torus(t);
        let ind = indicator(&x);
        let mu = canonical_measure(&x).unwrap();
        for k in 0..crk(&x) {
            prop_assert!(epsilon_k(&x, &mu, &ind, k).unwrap().is_zero());
        }
    }

    #[test]
    fn sch_realize_is_linear(t in stack(), s in small_rat()) {
        let x = StackModel::Torus(t);
        let ind = indicator(&x);
        let a = pi_k(&x, &ind, crk(&x)).unwrap();
        let b = pi_k(&x, &ind, max_face_dim(&x)).unwrap();
        let lhs = a.add(&b.scale(&s)).sch_realize();
        let rhs = a.sch_realize().add(&b.sch_realize().scale(&s));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chi_compatibility_on_random_stacks(t in stack()) {
        let x = StackModel::Torus(t);
        let mu = canonical_measure(&x).unwrap();
        prop_assert!(chi_compatibility_check(&x, &mu, crk(&x)).unwrap());
    }

    #[test]
    fn trivial_measure_masses_are_one(t in stack()) {
        let x = StackModel::Torus(t);
        let mu = trivial_measure(&x);
        for (_, v) in mu.iter() {
            prop_assert_eq!(v, &Rat::one());
        }
        prop_assert!(partition_check(&x, &mu).unwrap());
        // every key is itself one of the model's special cones
        let all = special_cones(&x, &Subspace::zero(x.ambient_rank())).unwrap();
        for (c, _) in mu.iter() {
            prop_assert!(all.contains(c));
        }
    }
}

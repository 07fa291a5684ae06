//! The acceptance gate: ten exact criteria over the bundled corpus, each
//! reported as a single pass/fail line. Every comparison is exact rational
//! arithmetic; there are no tolerances.

use dtcalc::commands::{associativity_ok, load_text, mobius_family_ok, LoadedInstance};
use dtcalc::BUNDLED_CORPUS;
use dtcalc_core::dtinv::{
    chi_compatibility_check, dt_motivic, dt_numerical, is_adapted, semistable_reduction_check,
    theta_stratify,
};
use dtcalc_core::epsilon::{
    epsilon_k, equals_pi_with_trivial_measure, indicator, no_pole_check, pi_k,
    sum_rule_check,
};
use dtcalc_core::measures::{convolve, delta, invert, to_prestability};
use dtcalc_core::motives::{StrataMotive, StratumKind};
use dtcalc_core::stackmodel::{crk, max_face_dim};
use dtcalc_core::{Rat, RationalFn, StackModel};
use num_traits::{One, Zero};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn corpus() -> Vec<LoadedInstance> {
    BUNDLED_CORPUS
        .iter()
        .map(|(name, text)| load_text(name, text).expect("bundled corpus parses"))
        .collect()
}

fn get<'a>(instances: &'a [LoadedInstance], name: &str) -> &'a LoadedInstance {
    instances.iter().find(|i| i.name == name).expect("instance present")
}

fn measures_of(inst: &LoadedInstance) -> Vec<String> {
    inst.spec.measures.keys().cloned().collect()
}

/// Terms of a table-stack motive as (label, coefficient) pairs.
fn table_terms(m: &StrataMotive) -> Vec<(String, Rat)> {
    m.iter()
        .map(|(c, x)| match &c.kind {
            StratumKind::Table { label, .. } => (label.clone(), x.clone()),
            _ => panic!("expected a table stratum"),
        })
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

fn criterion_1(instances: &[LoadedInstance]) -> bool {
    let mut ok = true;
    for (name, expected) in [("q1.json", rat(1, 3)), ("q2.json", rat(1, 6))] {
        let inst = get(instances, name);
        let mu = inst.spec.build_measure(&inst.model, "quiver").unwrap();
        ok &= dt_numerical(&inst.model, &mu, 1).unwrap() == expected;
    }
    ok
}

fn criterion_2(instances: &[LoadedInstance]) -> bool {
    let inst = get(instances, "q1.json");
    let mu = inst.spec.build_measure(&inst.model, "quiver").unwrap();
    let n = inst.model.ambient_rank();
    let mut full_span: Vec<Rat> = mu
        .iter()
        .filter(|(c, _)| c.face().dim() == n)
        .map(|(_, v)| v.clone())
        .collect();
    full_span.sort();
    let total: Rat = full_span.iter().cloned().sum();
    full_span == vec![rat(1, 6), rat(1, 6), rat(1, 3), rat(1, 3)] && total == rat(1, 1)
}

fn criterion_3(instances: &[LoadedInstance]) -> bool {
    let inst = get(instances, "p1gm.json");
    let ind = indicator(&inst.model);
    let mut ok = true;
    for (name, a, b) in [("ab(1,0)", rat(1, 1), rat(0, 1)), ("ab(1/2,1/3)", rat(1, 2), rat(1, 3))]
    {
        let mu = inst.spec.build_measure(&inst.model, name).unwrap();
        let e0 = table_terms(&epsilon_k(&inst.model, &mu, &ind, 0).unwrap());
        let mut want0 = Vec::new();
        if a != b {
            want0.push(("open_pt".to_string(), &b - &a));
        }
        ok &= e0 == want0;
        let mut e1 = table_terms(&epsilon_k(&inst.model, &mu, &ind, 1).unwrap());
        // [P^1/Gm] in the strata basis is zero_pt + inf_pt + open_pt
        let mut want1 = vec![
            ("inf_pt".to_string(), rat(1, 1)),
            ("open_pt".to_string(), Rat::one() + &a - &b),
            ("zero_pt".to_string(), rat(1, 1)),
        ];
        e1.sort();
        want1.sort();
        ok &= e1 == want1;
    }
    ok
}

fn criterion_4(instances: &[LoadedInstance]) -> bool {
    instances.iter().all(|inst| {
        measures_of(inst).iter().all(|name| {
            let mu = inst.spec.build_measure(&inst.model, name).unwrap();
            sum_rule_check(&inst.model, &mu).unwrap()
        })
    })
}

fn criterion_5(instances: &[LoadedInstance]) -> bool {
    instances.iter().all(|inst| {
        let x = &inst.model;
        let ind = indicator(x);
        measures_of(inst).iter().all(|name| {
            let mu = inst.spec.build_measure(x, name).unwrap();
            (0..=max_face_dim(x)).all(|k| no_pole_check(x, &mu, k).unwrap())
                && (0..crk(x)).all(|k| epsilon_k(x, &mu, &ind, k).unwrap().is_zero())
        })
    })
}

fn criterion_6(instances: &[LoadedInstance]) -> bool {
    instances.iter().all(|inst| {
        let x = &inst.model;
        let ind = indicator(x);
        let kmax = max_face_dim(x);
        let mut total = StrataMotive::zero();
        for k in 0..=kmax {
            total = total.add(&pi_k(x, &ind, k).unwrap());
        }
        if total.refine() != ind.refine() {
            return false;
        }
        for k in crk(x)..=kmax {
            let pk = pi_k(x, &ind, k).unwrap();
            for l in crk(x)..=kmax {
                let composed = pi_k(x, &pk, l).unwrap();
                let expected = if l == k { pk.clone() } else { StrataMotive::zero() };
                if composed.refine() != expected.refine() {
                    return false;
                }
            }
        }
        (0..=kmax).all(|k| equals_pi_with_trivial_measure(x, &ind, k).unwrap())
    })
}

fn criterion_7(instances: &[LoadedInstance]) -> bool {
    // convolution inverse is two-sided on every bundled Hall category
    let inverses = instances.iter().all(|inst| {
        let x = &inst.model;
        measures_of(inst).iter().all(|name| {
            let mu = inst.spec.build_measure(x, name).unwrap();
            let pre = to_prestability(x, &mu).unwrap();
            let nu = invert(x, &pre).unwrap();
            let d = delta(x);
            convolve(x, &nu, &pre).unwrap() == d && convolve(x, &pre, &nu).unwrap() == d
        })
    });
    // the chain-sum epsilon family agrees with the inverse expansion
    let families = [("q1.json", "quiver"), ("a1gm.json", "a(1/2)")].iter().all(
        |(name, measure)| {
            let inst = get(instances, name);
            let mu = inst.spec.build_measure(&inst.model, measure).unwrap();
            mobius_family_ok(&inst.model, &mu).unwrap()
        },
    );
    inverses && families
}

fn criterion_8(instances: &[LoadedInstance]) -> bool {
    associativity_ok(&get(instances, "a2gm_pm1.json").model).unwrap()
}

fn criterion_9(instances: &[LoadedInstance]) -> bool {
    let inst = get(instances, "a2gm_pm1.json");
    let StackModel::Torus(t) = &inst.model else {
        return false;
    };
    let (l, q) = inst.spec.theta_data().unwrap().unwrap();
    let strat = theta_stratify(t, &l, &q).unwrap();
    let mu = inst.spec.build_measure(&inst.model, "adapted").unwrap();
    is_adapted(&inst.model, &strat, &mu).unwrap()
        && semistable_reduction_check(&inst.model, &strat, &mu).unwrap()
}

fn criterion_10(instances: &[LoadedInstance]) -> bool {
    let all = instances.iter().all(|inst| {
        let x = &inst.model;
        measures_of(inst).iter().all(|name| {
            let mu = inst.spec.build_measure(x, name).unwrap();
            (crk(x)..=max_face_dim(x)).all(|k| chi_compatibility_check(x, &mu, k).unwrap())
        })
    });
    let bgm = get(instances, "bgm.json");
    let mu = bgm.spec.build_measure(&bgm.model, "trivial").unwrap();
    all && dt_motivic(&bgm.model, &mu, 1).unwrap() == RationalFn::one()
}

#[test]
fn acceptance() {
    let instances = corpus();
    type Criterion = (&'static str, fn(&[LoadedInstance]) -> bool);
    let criteria: Vec<Criterion> = vec![
        ("1. quiver invariants are 1/3 and 1/6", criterion_1),
        ("2. pulled-back measure masses are {1/6, 1/3, 1/3, 1/6}", criterion_2),
        ("3. projective-line epsilon motives in both degrees", criterion_3),
        ("4. epsilon motives sum to the unit on every instance", criterion_4),
        ("5. no pole at L = 1 and vanishing below the central rank", criterion_5),
        ("6. projector decomposition, idempotency, trivial degeneration", criterion_6),
        ("7. convolution inverses and the inverse epsilon family", criterion_7),
        ("8. induction associativity over composable cone pairs", criterion_8),
        ("9. semistable reduction for the adapted measure", criterion_9),
        ("10. motivic and numerical invariants are chi-compatible", criterion_10),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let pass = f(&instances);
        println!("{} {}", if pass { "PASS" } else { "FAIL" }, name);
        if !pass {
            failures += 1;
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}

//! The four subcommands: inspect, epsilon, dt, and check. Each returns a
//! [`Report`] so that the human and JSON renderings share one code path.

use std::path::Path;

use dtcalc_core::dtinv::{
    chi_compatibility_check, dt_motivic, dt_numerical, is_adapted, semistable_reduction_check,
    theta_stratify, DtError,
};
use dtcalc_core::epsilon::{
    epsilon_cone, epsilon_k, equals_pi_with_trivial_measure, indicator, no_pole_check, pi_k,
    sum_rule_check,
};
use dtcalc_core::measures::{
    convolve, delta, hall_morphisms_from, invert, is_permissible, partition_check,
    to_prestability, StabilityMeasure,
};
use dtcalc_core::motives::StrataMotive;
use dtcalc_core::stackmodel::{
    central_face, crk, graded_pullback, hall_compose, hall_induce, max_face_dim, special_cones,
    special_faces, StackError,
};
use dtcalc_core::{ConeInFace, StackModel, Subspace};
use num_traits::Zero;

use crate::instance::{CliError, InstanceFile};
use crate::report::{
    show_rows, strata_terms, CheckResult, ConeReport, DtReport, EpsilonReport, FaceReport,
    InspectReport, MeasureEntry, MeasureReport, Report,
};

pub struct LoadedInstance {
    pub name: String,
    pub spec: InstanceFile,
    pub model: StackModel,
}

pub fn load(path: &Path) -> Result<LoadedInstance, CliError> {
    let spec = InstanceFile::load(path)?;
    let model = spec.build_model()?;
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(LoadedInstance { name, spec, model })
}

pub fn load_text(name: &str, text: &str) -> Result<LoadedInstance, CliError> {
    let spec = InstanceFile::parse_text(text)?;
    let model = spec.build_model()?;
    Ok(LoadedInstance { name: name.into(), spec, model })
}

fn cone_catalog(x: &StackModel) -> Result<Vec<ConeInFace>, CliError> {
    Ok(special_cones(x, &Subspace::zero(x.ambient_rank()))?)
}

fn cone_id(catalog: &[ConeInFace], c: &ConeInFace) -> String {
    match catalog.iter().position(|k| k == c) {
        Some(i) => format!("c{i}"),
        None => format!("<non-special: generators {:?}>", show_rows(c.cone().generators())),
    }
}

fn face_id(catalog: &[Subspace], f: &Subspace) -> String {
    match catalog.iter().position(|k| k == f) {
        Some(i) => format!("f{i}"),
        None => "<non-special face>".into(),
    }
}

fn checked_measure(
    inst: &LoadedInstance,
    name: &str,
) -> Result<StabilityMeasure, CliError> {
    let mu = inst.spec.build_measure(&inst.model, name)?;
    if !partition_check(&inst.model, &mu)? {
        return Err(CliError::Schema(format!(
            "measure '{name}' fails the partition check (masses do not sum to 1 on every face)"
        )));
    }
    Ok(mu)
}

pub fn cmd_inspect(inst: &LoadedInstance) -> Result<Report, CliError> {
    let x = &inst.model;
    let faces = special_faces(x);
    let cones = cone_catalog(x)?;
    let face_reports = faces
        .iter()
        .enumerate()
        .map(|(i, f)| FaceReport {
            id: format!("f{i}"),
            dim: f.dim(),
            basis: show_rows(f.basis()),
        })
        .collect();
    let cone_reports = cones
        .iter()
        .enumerate()
        .map(|(i, c)| ConeReport {
            id: format!("c{i}"),
            face: face_id(&faces, c.face()),
            generators: show_rows(c.cone().generators()),
            face_cone: c.is_face_cone(),
        })
        .collect();
    let mut measure_reports = Vec::new();
    for name in inst.spec.measures.keys() {
        let mu = inst.spec.build_measure(x, name)?;
        let entries = mu
            .iter()
            .map(|(c, v)| MeasureEntry { cone: cone_id(&cones, c), value: v.to_string() })
            .collect();
        measure_reports.push(MeasureReport {
            name: name.clone(),
            entries,
            partition_ok: partition_check(x, &mu)?,
        });
    }
    let mut rep = Report::new(&inst.name, inst.spec.clone());
    rep.inspect = Some(InspectReport {
        kind: inst.spec.kind_name().into(),
        ambient_rank: x.ambient_rank(),
        dim: x.dim(),
        crk: crk(x),
        central_face: face_id(&faces, &central_face(x)),
        faces: face_reports,
        cones: cone_reports,
        measures: measure_reports,
    });
    Ok(rep)
}

fn resolve_cone(inst: &LoadedInstance, id: &str) -> Result<ConeInFace, CliError> {
    if let Ok(c) = inst.spec.table_cone(id) {
        return Ok(c);
    }
    let idx: usize = id
        .trim_start_matches('c')
        .parse()
        .map_err(|_| CliError::Schema(format!("unknown cone id '{id}'")))?;
    cone_catalog(&inst.model)?
        .get(idx)
        .cloned()
        .ok_or_else(|| CliError::Schema(format!("cone index {idx} out of range")))
}

pub fn cmd_epsilon(
    inst: &LoadedInstance,
    k: Option<usize>,
    cone: Option<&str>,
    measure: &str,
) -> Result<Report, CliError> {
    let x = &inst.model;
    let mu = checked_measure(inst, measure)?;
    let ind = indicator(x);
    let (e, no_pole, cone_label) = match (k, cone) {
        (Some(k), None) => {
            let e = epsilon_k(x, &mu, &ind, k)?;
            let np = no_pole_check(x, &mu, k)?;
            (e, Some(np), None)
        }
        (None, Some(id)) => {
            let sigma = resolve_cone(inst, id)?;
            (epsilon_cone(x, &mu, &ind, &sigma)?, None, Some(id.to_string()))
        }
        _ => {
            return Err(CliError::Schema(
                "specify exactly one of --k and --cone".into(),
            ))
        }
    };
    let mut rep = Report::new(&inst.name, inst.spec.clone());
    rep.epsilon = Some(EpsilonReport {
        measure: measure.into(),
        k,
        cone: cone_label,
        strata: strata_terms(&e),
        realized: e.sch_realize().to_string(),
        no_pole,
    });
    Ok(rep)
}

pub fn cmd_dt(
    inst: &LoadedInstance,
    k: usize,
    measure: &str,
    motivic: bool,
) -> Result<Report, CliError> {
    let x = &inst.model;
    let mu = checked_measure(inst, measure)?;
    let value = if motivic {
        dt_motivic(x, &mu, k)?.to_string().replace('L', "q")
    } else {
        dt_numerical(x, &mu, k)?.to_string()
    };
    let mut rep = Report::new(&inst.name, inst.spec.clone());
    rep.dt = Some(DtReport { measure: measure.into(), k, motivic, value });
    Ok(rep)
}

/// The Mobius-inversion form of the epsilon family: at every special face
/// `alpha`, the chain-sum epsilon (pushed into `X` along the identity of
/// `alpha`) must match the expansion by the convolution inverse of the
/// measure.
pub fn mobius_family_ok(x: &StackModel, mu: &StabilityMeasure) -> Result<bool, CliError> {
    let zero = Subspace::zero(x.ambient_rank());
    let ind = indicator(x);
    let nu = invert(x, &to_prestability(x, mu)?)?;
    for alpha in special_faces(x) {
        let mut inverse_side = StrataMotive::zero();
        for sigma in hall_morphisms_from(x, &alpha)? {
            let v = nu.get(&alpha, &sigma);
            if v.is_zero() {
                continue;
            }
            let unit = graded_pullback(x, sigma.face(), &ind)?;
            let pushed = hall_induce(x, &zero, &sigma, &unit)?;
            inverse_side = inverse_side.add(&pushed.scale(&v));
        }
        let chain_side = if alpha.is_zero() {
            epsilon_k(x, mu, &ind, 0)?
        } else {
            epsilon_cone(x, mu, &ind, &ConeInFace::face_cone(&alpha))?
        };
        if chain_side.refine() != inverse_side.refine() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Operator associativity of Hall induction over all composable pairs of
/// special cones, applied to the unit motive of the middle graded stack.
pub fn associativity_ok(x: &StackModel) -> Result<bool, CliError> {
    let zero = Subspace::zero(x.ambient_rank());
    let ind = indicator(x);
    let cones = cone_catalog(x)?;
    for s1 in &cones {
        for s2 in &cones {
            if !s2.face().contains_subspace(s1.face()) {
                continue;
            }
            // the inner induction lands on the graded stack of span(s1),
            // which requires span(s1) to lie inside the cone s2
            let inside = s1.face().basis().iter().all(|b| {
                let neg: Vec<_> = b.iter().map(|t| -t).collect();
                s2.cone().contains(b) && s2.cone().contains(&neg)
            });
            if !inside {
                continue;
            }
            let comp = match hall_compose(x, &zero, s1, s2) {
                Ok(c) => c,
                Err(StackError::NotFullDimensional) => continue,
                Err(e) => return Err(e.into()),
            };
            let m = graded_pullback(x, s2.face(), &ind)?;
            let lhs = hall_induce(x, &zero, s1, &hall_induce(x, s1.face(), s2, &m)?)?;
            let rhs = hall_induce(x, &zero, &comp, &m)?;
            if lhs.refine() != rhs.refine() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn push_check(
    checks: &mut Vec<CheckResult>,
    name: impl Into<String>,
    result: Result<bool, CliError>,
    detail_on_fail: &str,
) {
    match result {
        Ok(pass) => checks.push(CheckResult {
            name: name.into(),
            pass,
            detail: if pass { String::new() } else { detail_on_fail.into() },
        }),
        Err(e) => checks.push(CheckResult {
            name: name.into(),
            pass: false,
            detail: e.to_string(),
        }),
    }
}

pub fn cmd_check(inst: &LoadedInstance) -> Result<Report, CliError> {
    let x = &inst.model;
    let mut checks = Vec::new();
    let ind = indicator(x);
    let kmax = max_face_dim(x);
    let k0 = crk(x);

    // projector identities (measure-independent)
    let decomposition = (|| -> Result<bool, CliError> {
        let mut total = StrataMotive::zero();
        for k in 0..=kmax {
            total = total.add(&pi_k(x, &ind, k)?);
        }
        Ok(total.refine() == ind.refine())
    })();
    push_check(&mut checks, "pi_decomposition", decomposition, "sum of projectors is not the identity");
    let idem = (|| -> Result<bool, CliError> {
        for k in k0..=kmax {
            let pk = pi_k(x, &ind, k)?;
            for l in k0..=kmax {
                let plpk = pi_k(x, &pk, l)?;
                let expect = if l == k { pk.clone() } else { StrataMotive::zero() };
                if plpk.refine() != expect.refine() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })();
    push_check(&mut checks, "pi_idempotency", idem, "projector composition relation fails");
    let degenerate = (|| -> Result<bool, CliError> {
        for k in 0..=kmax {
            if !equals_pi_with_trivial_measure(x, &ind, k)? {
                return Ok(false);
            }
        }
        Ok(true)
    })();
    push_check(&mut checks, "epsilon_trivial_is_pi", degenerate, "epsilon with the trivial measure differs from pi");

    if matches!(x, StackModel::Torus(_)) {
        push_check(&mut checks, "associativity", associativity_ok(x), "induction along a composite differs from the two-step induction");
    }

    let theta = inst.spec.theta_data()?;
    let strat = match (&theta, x) {
        (Some((l, q)), StackModel::Torus(t)) => match theta_stratify(t, l, q) {
            Ok(s) => {
                checks.push(CheckResult {
                    name: "theta_regular".into(),
                    pass: true,
                    detail: String::new(),
                });
                Some(s)
            }
            Err(e) => {
                checks.push(CheckResult {
                    name: "theta_regular".into(),
                    pass: false,
                    detail: e.to_string(),
                });
                None
            }
        },
        _ => None,
    };

    for name in inst.spec.measures.keys() {
        let mu = match inst.spec.build_measure(x, name) {
            Ok(mu) => mu,
            Err(e) => {
                checks.push(CheckResult {
                    name: format!("measure[{name}]"),
                    pass: false,
                    detail: e.to_string(),
                });
                continue;
            }
        };
        push_check(
            &mut checks,
            format!("partition[{name}]"),
            partition_check(x, &mu).map_err(CliError::from),
            "masses do not sum to 1 on every special face",
        );
        push_check(
            &mut checks,
            format!("permissible[{name}]"),
            is_permissible(x, &mu).map_err(CliError::from),
            "measure is not permissible",
        );
        push_check(
            &mut checks,
            format!("sum_rule[{name}]"),
            sum_rule_check(x, &mu).map_err(CliError::from),
            "epsilon motives do not sum to the unit",
        );
        let no_pole = (|| -> Result<bool, CliError> {
            for k in 0..k0 {
                if !epsilon_k(x, &mu, &ind, k)?.is_zero() {
                    return Ok(false);
                }
            }
            for k in 0..=kmax {
                if !no_pole_check(x, &mu, k)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        push_check(
            &mut checks,
            format!("no_pole[{name}]"),
            no_pole,
            "(1-L)^k * sch(epsilon) has a pole at L = 1, or epsilon is nonzero below the central rank",
        );
        let mobius_inverse = (|| -> Result<bool, CliError> {
            let pre = to_prestability(x, &mu)?;
            let nu = invert(x, &pre)?;
            let d = delta(x);
            Ok(convolve(x, &nu, &pre)? == d && convolve(x, &pre, &nu)? == d)
        })();
        push_check(
            &mut checks,
            format!("mobius_inverse[{name}]"),
            mobius_inverse,
            "convolution with the inverse is not the unit",
        );
        push_check(
            &mut checks,
            format!("mobius_family[{name}]"),
            mobius_family_ok(x, &mu),
            "chain-sum epsilon differs from the convolution-inverse expansion",
        );
        let chi = (|| -> Result<bool, CliError> {
            for k in k0..=kmax {
                if !chi_compatibility_check(x, &mu, k)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        push_check(
            &mut checks,
            format!("chi_compatibility[{name}]"),
            chi,
            "monodromic Euler characteristic of the motivic DT differs from the numerical DT",
        );
        if let Some(s) = &strat {
            match is_adapted(x, s, &mu) {
                Ok(true) => push_check(
                    &mut checks,
                    format!("theta_reduction[{name}]"),
                    semistable_reduction_check(x, s, &mu).map_err(CliError::from),
                    "epsilon of the unit differs from epsilon of the semistable indicator",
                ),
                Ok(false) => checks.push(CheckResult {
                    name: format!("theta_reduction[{name}]"),
                    pass: true,
                    detail: "measure not adapted; reduction not claimed".into(),
                }),
                Err(DtError::NotApplicable(msg)) => checks.push(CheckResult {
                    name: format!("theta_reduction[{name}]"),
                    pass: true,
                    detail: format!("not applicable: {msg}"),
                }),
                Err(e) => checks.push(CheckResult {
                    name: format!("theta_reduction[{name}]"),
                    pass: false,
                    detail: e.to_string(),
                }),
            }
        }
    }

    let mut rep = Report::new(&inst.name, inst.spec.clone());
    rep.checks = checks;
    Ok(rep)
}

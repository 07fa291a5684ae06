//! Report structures shared by all subcommands, with human-readable and
//! JSON renderings. Reports are deterministic: every list is emitted in a
//! canonical order.

use dtcalc_core::motives::StrataMotive;
use dtcalc_core::Rat;
use serde::Serialize;

use crate::instance::InstanceFile;

#[derive(Serialize)]
pub struct FaceReport {
    pub id: String,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct ConeReport {
    pub id: String,
    pub face: String,
    pub generators: Vec<Vec<String>>,
    pub face_cone: bool,
}

#[derive(Serialize)]
pub struct MeasureEntry {
    pub cone: String,
    pub value: String,
}

#[derive(Serialize)]
pub struct MeasureReport {
    pub name: String,
    pub entries: Vec<MeasureEntry>,
    pub partition_ok: bool,
}

#[derive(Serialize)]
pub struct InspectReport {
    pub kind: String,
    pub ambient_rank: usize,
    pub dim: i64,
    pub crk: usize,
    pub central_face: String,
    pub faces: Vec<FaceReport>,
    pub cones: Vec<ConeReport>,
    pub measures: Vec<MeasureReport>,
}

#[derive(Serialize)]
pub struct StratumTerm {
    pub stratum: String,
    pub coeff: String,
    pub point_motive: String,
}

#[derive(Serialize)]
pub struct EpsilonReport {
    pub measure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<String>,
    pub strata: Vec<StratumTerm>,
    pub realized: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_pole: Option<bool>,
}

#[derive(Serialize)]
pub struct DtReport {
    pub measure: String,
    pub k: usize,
    pub motivic: bool,
    pub value: String,
}

#[derive(Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Serialize)]
pub struct Report {
    pub file: String,
    pub instance: InstanceFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inspect: Option<InspectReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<EpsilonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<DtReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(file: impl Into<String>, instance: InstanceFile) -> Report {
        Report {
            file: file.into(),
            instance,
            inspect: None,
            epsilon: None,
            dt: None,
            checks: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are always serializable")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        if let Some(i) = &self.inspect {
            line(format!(
                "instance {} ({}): ambient rank {}, dim {}, crk {}",
                self.file, i.kind, i.ambient_rank, i.dim, i.crk
            ));
            line(format!("central face: {}", i.central_face));
            line(format!("special faces ({}):", i.faces.len()));
            for f in &i.faces {
                line(format!("  {}  dim {}  basis {}", f.id, f.dim, fmt_rows(&f.basis)));
            }
            line(format!("special cones ({}):", i.cones.len()));
            for c in &i.cones {
                let tag = if c.face_cone { "  (face cone)" } else { "" };
                line(format!(
                    "  {}  face {}  generators {}{}",
                    c.id,
                    c.face,
                    fmt_rows(&c.generators),
                    tag
                ));
            }
            line("measures:".into());
            for m in &i.measures {
                let ok = if m.partition_ok { "ok" } else { "FAILED" };
                line(format!("  {}  (partition {})", m.name, ok));
                for e in &m.entries {
                    line(format!("    {}  {}", e.cone, e.value));
                }
            }
        }
        if let Some(e) = &self.epsilon {
            let what = match (&e.k, &e.cone) {
                (Some(k), _) => format!("k = {k}"),
                (None, Some(c)) => format!("cone {c}"),
                _ => String::new(),
            };
            line(format!("epsilon ({what}, measure {}):", e.measure));
            if e.strata.is_empty() {
                line("  0".into());
            }
            for t in &e.strata {
                line(format!("  {} * [{}]   (point motive {})", t.coeff, t.stratum, t.point_motive));
            }
            line(format!("realized: {}", e.realized));
            if let Some(np) = e.no_pole {
                line(format!("regular at L = 1: {}", if np { "yes" } else { "NO" }));
            }
        }
        if let Some(d) = &self.dt {
            let flavour = if d.motivic { "motivic " } else { "" };
            line(format!(
                "{}DT (k = {}, measure {}): {}",
                flavour, d.k, d.measure, d.value
            ));
        }
        if !self.checks.is_empty() {
            for c in &self.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    line(format!("{status} {}", c.name));
                } else {
                    line(format!("{status} {}: {}", c.name, c.detail));
                }
            }
            let n = self.checks.iter().filter(|c| c.pass).count();
            line(format!("{} of {} checks passed", n, self.checks.len()));
        }
        out
    }
}

fn fmt_rows(rows: &[Vec<String>]) -> String {
    if rows.is_empty() {
        return "{0}".into();
    }
    let items: Vec<String> = rows.iter().map(|r| format!("({})", r.join(", "))).collect();
    format!("[{}]", items.join(", "))
}

pub fn show_rows(rows: &[Vec<Rat>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// A strata motive as a deterministic list of terms.
pub fn strata_terms(m: &StrataMotive) -> Vec<StratumTerm> {
    m.iter()
        .map(|(c, x)| StratumTerm {
            stratum: c.label(),
            coeff: x.to_string(),
            point_motive: c.point_motive().to_string(),
        })
        .collect()
}

//! Instance loading, reporting, and the subcommand drivers behind the
//! `dtcalc` binary, exposed as a library so integration tests can run the
//! same code paths.

pub mod commands;
pub mod instance;
pub mod report;

/// The instances shipped with the binary; the `DTCALC_CORPUS` environment
/// variable points `check --all` at a directory of instance files instead.
pub const BUNDLED_CORPUS: &[(&str, &str)] = &[
    ("a1gm.json", include_str!("../corpus/a1gm.json")),
    ("a2gm_pm1.json", include_str!("../corpus/a2gm_pm1.json")),
    ("bgm.json", include_str!("../corpus/bgm.json")),
    ("p1gm.json", include_str!("../corpus/p1gm.json")),
    ("q1.json", include_str!("../corpus/q1.json")),
    ("q2.json", include_str!("../corpus/q2.json")),
];

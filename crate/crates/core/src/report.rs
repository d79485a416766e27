//! Run records: one self-describing JSON document per run, or flat CSV
//! tables for plotting. Reals use the shortest decimal that round-trips.

use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{DensityReport, EstimatorReport, FillReport, LatticeBase, SamplingMode};
use crate::error::{Error, Result};
use crate::relations::{LMinimum, RelationsSummary};
use crate::scan::ScanReport;
use crate::semigroup::SemigroupProfile;

/// Bumped whenever a record field or CSV column is added or renamed.
pub const SCHEMA_VERSION: &str = "1";

pub const SOFTWARE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Results {
    Profile(SemigroupProfile),
    Relations(RelationsSummary),
    Scan(ScanReport),
    /// One report per scaling `N` of a series.
    Sweep(Vec<EstimatorReport>),
    Density(DensityReport),
    Fill(FillReport),
    AppendixMin(LMinimum),
}

impl Results {
    pub fn kind(&self) -> &'static str {
        match self {
            Results::Profile(_) => "profile",
            Results::Relations(_) => "relations",
            Results::Scan(_) => "scan",
            Results::Sweep(_) => "sweep",
            Results::Density(_) => "density",
            Results::Fill(_) => "fill",
            Results::AppendixMin(_) => "appendix_min",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: String,
    pub timestamp: Option<String>,
    /// The full invocation, enough to reproduce the run.
    pub command: String,
    /// Echo of the parsed inputs.
    pub spec: serde_json::Value,
    pub results: Results,
    pub seed: Option<u64>,
    pub software_version: String,
}

impl RunRecord {
    pub fn new(command: impl Into<String>, spec: serde_json::Value, results: Results, seed: Option<u64>) -> Self {
        RunRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            timestamp: Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
            command: command.into(),
            spec,
            results,
            seed,
            software_version: SOFTWARE_VERSION.to_string(),
        }
    }

    /// Drop every wall-clock dependent field so reruns compare byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.timestamp = None;
        if let Results::Sweep(reports) = &mut self.results {
            for r in reports {
                r.elapsed_ms = None;
            }
        }
        self
    }
}

pub fn to_json_string(record: &RunRecord) -> Result<String> {
    let mut s = serde_json::to_string_pretty(record)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<RunRecord> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_json(record: &RunRecord, dest: impl Write) -> Result<()> {
    let mut dest = BufWriter::new(dest);
    dest.write_all(to_json_string(record)?.as_bytes())?;
    dest.flush()?;
    Ok(())
}

pub fn read_json(mut src: impl Read) -> Result<RunRecord> {
    let mut text = String::new();
    src.read_to_string(&mut text)?;
    parse_json(&text)
}

pub fn write_json_file(record: &RunRecord, path: &Path) -> Result<()> {
    write_json(record, File::create(path)?)
}

const COMMON_COLUMNS: [&str; 6] = [
    "schema_version",
    "timestamp",
    "command",
    "seed",
    "software_version",
    "kind",
];

fn opt<T: Display>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn joined<T: Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn columns(kind: &str) -> &'static [&'static str] {
    match kind {
        "profile" => &[
            "generators",
            "frobenius",
            "conductor",
            "genus",
            "nongaps",
            "type",
            "symmetric",
            "p",
            "q",
            "pseudo_frobenius",
            "gaps",
        ],
        "relations" => &[
            "generators",
            "symmetric",
            "conductor",
            "genus",
            "matrix",
            "u",
            "w",
            "closed_form_conductor",
            "closed_form_genus",
            "min_term",
            "k",
            "q",
            "p",
            "lower_bound",
        ],
        "scan" => &[
            "dmax",
            "verified_by_enumeration",
            "triples",
            "symmetric",
            "nonsymmetric",
            "conductor_mismatches",
            "genus_mismatches",
            "min_identity_violations",
            "round_trip_failures",
            "symmetry_criteria_disagreements",
            "genus_type_bound_violations",
            "lower_bound_violations",
            "symmetric_genus_violations",
            "family_violations",
            "derived_generator_violations",
            "derived_single_generator",
            "pairwise_coprime_violations",
            "type_violations",
            "enumeration_mismatches",
            "unit_defect_count",
        ],
        "sweep" => &[
            "lattice",
            "base",
            "N",
            "r",
            "mode",
            "sample_count",
            "lattice_points",
            "total_points",
            "coprime_count",
            "admissible_count",
            "symmetric_count",
            "symmetric_fraction",
            "K_est",
            "p_est",
            "q_est",
            "density",
            "K_est_nonsymmetric",
            "p_est_nonsymmetric",
            "k_lower_bound",
            "k_target",
            "q_target",
            "closed_form_checked",
            "closed_form_mismatches",
            "reason",
        ],
        "density" => &["m", "samples", "lo", "hi", "coprime", "fraction", "target", "deviation"],
        "fill" => &[
            "generators",
            "conductor",
            "bin",
            "lo",
            "hi",
            "members",
            "empirical",
            "conjectured",
            "l1_distance",
            "mean_occupancy",
            "profile_p",
            "conjectured_integral",
        ],
        "appendix_min" => &[
            "lo",
            "hi",
            "points",
            "grid_value",
            "grid_argmin",
            "value",
            "argmin",
            "plane_12",
            "plane_23",
            "plane_13",
        ],
        _ => &[],
    }
}

fn rows(results: &Results) -> Vec<Vec<String>> {
    match results {
        Results::Profile(p) => vec![vec![
            joined(p.generators.gens()),
            p.frobenius.to_string(),
            p.conductor.to_string(),
            p.genus.to_string(),
            p.nongaps.to_string(),
            p.type_.to_string(),
            p.symmetric.to_string(),
            p.p.to_string(),
            p.q.to_string(),
            joined(&p.pseudo_frobenius),
            joined(&p.gaps),
        ]],
        Results::Relations(s) => vec![vec![
            joined(s.generators.gens()),
            s.symmetric.to_string(),
            s.conductor.to_string(),
            s.genus.to_string(),
            s.matrix.map(|m| joined(&m.rows.concat())).unwrap_or_default(),
            s.uw.map(|uw| joined(&uw.u())).unwrap_or_default(),
            s.uw.map(|uw| joined(&uw.w())).unwrap_or_default(),
            opt(&s.closed_form_conductor),
            opt(&s.closed_form_genus),
            opt(&s.min_term),
            opt(&s.k),
            opt(&s.q),
            opt(&s.p),
            s.lower_bound.to_string(),
        ]],
        Results::Scan(s) => vec![[
            s.dmax,
            s.verified_by_enumeration as u64,
            s.triples,
            s.symmetric,
            s.nonsymmetric,
            s.conductor_mismatches,
            s.genus_mismatches,
            s.min_identity_violations,
            s.round_trip_failures,
            s.symmetry_criteria_disagreements,
            s.genus_type_bound_violations,
            s.lower_bound_violations,
            s.symmetric_genus_violations,
            s.family_violations,
            s.derived_generator_violations,
            s.derived_single_generator,
            s.pairwise_coprime_violations,
            s.type_violations,
            s.enumeration_mismatches,
            s.unit_defect.len() as u64,
        ]
        .iter()
        .map(ToString::to_string)
        .collect()],
        Results::Sweep(reports) => reports.iter().map(sweep_row).collect(),
        Results::Density(d) => vec![vec![
            d.m.to_string(),
            d.samples.to_string(),
            d.lo.to_string(),
            d.hi.to_string(),
            d.coprime.to_string(),
            d.fraction.to_string(),
            d.target.to_string(),
            d.deviation.to_string(),
        ]],
        Results::Fill(f) => f
            .bins
            .iter()
            .enumerate()
            .map(|(k, b)| {
                vec![
                    joined(f.generators.gens()),
                    f.conductor.to_string(),
                    k.to_string(),
                    b.lo.to_string(),
                    b.hi.to_string(),
                    b.members.to_string(),
                    b.empirical.to_string(),
                    b.conjectured.to_string(),
                    f.l1_distance.to_string(),
                    f.mean_occupancy.to_string(),
                    f.profile_p.to_string(),
                    f.conjectured_integral.to_string(),
                ]
            })
            .collect(),
        Results::AppendixMin(m) => {
            let plane = |p: (usize, usize)| {
                m.planes
                    .iter()
                    .find(|x| x.plane == p)
                    .map(|x| x.value.to_string())
                    .unwrap_or_default()
            };
            vec![vec![
                m.grid.lo.to_string(),
                m.grid.hi.to_string(),
                m.grid.points.to_string(),
                m.grid_value.to_string(),
                joined(&m.grid_argmin),
                m.value.to_string(),
                joined(&m.argmin),
                plane((0, 1)),
                plane((1, 2)),
                plane((0, 2)),
            ]]
        }
    }
}

fn sweep_row(r: &EstimatorReport) -> Vec<String> {
    let (lattice, base) = match &r.spec.base {
        LatticeBase::D { generators } => ("d", joined(generators.gens())),
        LatticeBase::Uw { uw } => ("uw", format!("{} {}", joined(&uw.u()), joined(&uw.w()))),
    };
    let (mode, count) = match r.spec.mode {
        SamplingMode::Exhaustive => ("exhaustive", String::new()),
        SamplingMode::Sampled { count, .. } => ("sampled", count.to_string()),
    };
    vec![
        lattice.to_string(),
        base,
        r.spec.n.to_string(),
        r.spec.r.to_string(),
        mode.to_string(),
        count,
        r.lattice_points.to_string(),
        r.total_points.to_string(),
        r.coprime_count.to_string(),
        r.admissible_count.to_string(),
        r.symmetric_count.to_string(),
        opt(&r.symmetric_fraction),
        opt(&r.k_est),
        opt(&r.p_est),
        opt(&r.q_est),
        r.density.to_string(),
        opt(&r.k_est_nonsymmetric),
        opt(&r.p_est_nonsymmetric),
        opt(&r.k_lower_bound),
        opt(&r.k_target),
        opt(&r.q_target),
        r.closed_form_checked.to_string(),
        r.closed_form_mismatches.to_string(),
        opt(&r.reason),
    ]
}

/// Header plus one row per record (sweep series and fill histograms expand
/// to one row per entry). All records must be of the same kind; an empty
/// sequence gives a header of the common columns only.
pub fn write_csv(records: &[RunRecord], dest: impl Write) -> Result<()> {
    let kind = match records.first() {
        Some(r) => r.results.kind(),
        None => "",
    };
    if let Some(other) = records.iter().map(|r| r.results.kind()).find(|k| *k != kind) {
        return Err(Error::MixedKinds(kind.to_string(), other.to_string()));
    }
    let mut w = csv::Writer::from_writer(dest);
    let header: Vec<&str> = COMMON_COLUMNS.iter().chain(columns(kind)).copied().collect();
    w.write_record(&header)?;
    for rec in records {
        let common = [
            rec.schema_version.clone(),
            opt(&rec.timestamp),
            rec.command.clone(),
            opt(&rec.seed),
            rec.software_version.clone(),
            kind.to_string(),
        ];
        for row in rows(&rec.results) {
            w.write_record(common.iter().chain(&row))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(records: &[RunRecord], path: &Path) -> Result<()> {
    write_csv(records, File::create(path)?)
}

//! Batch runner: configure a group, run one of the computations (or
//! the whole verification battery), and emit a deterministic report.
//!
//! Reports serialize as `{config, claims, data, timing_ms}`. The
//! `timing_ms` field is always `null` in the artifact so that two runs
//! with the same configuration (seed included) are byte-identical;
//! wall-clock timing goes to stderr instead.

use crate::census::{classes_to_csv, formula_report};
use crate::chartab::{complex_lifts, complex_value, self_dual_census};
use crate::matgroups::GroupKind;
use crate::reality::involution_count_formula;
use crate::rings::RingFamily;
use crate::verify::{all_criteria, Workspace};
use crate::{Claim, Error, Result};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Census,
    Involutions,
    Chartab,
    Classify,
    VerifyAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub kind: GroupKind,
    pub family: RingFamily,
    pub p: u64,
    pub f: u32,
    pub ell: u32,
    pub command: Command,
    pub format: OutputFormat,
    pub cache_dir: Option<PathBuf>,
    pub budget: u64,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(kind: GroupKind, p: u64, ell: u32, command: Command) -> RunConfig {
        RunConfig {
            kind,
            family: RingFamily::Mixed,
            p,
            f: 1,
            ell,
            command,
            format: OutputFormat::Json,
            cache_dir: None,
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub claims: Vec<Claim>,
    pub data: serde_json::Value,
    /// Always `null` in the serialized artifact; timing is reported on
    /// stderr so reports stay byte-identical across runs.
    pub timing_ms: Option<u64>,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// CSV body: per-class or per-character rows when the command has
    /// them, otherwise the claims themselves.
    pub fn to_csv(&self) -> String {
        if let Some(csv) = &self.csv {
            return csv.clone();
        }
        let mut out = String::from("id,statement,expected,computed,pass\n");
        for c in &self.claims {
            out.push_str(&format!(
                "{},\"{}\",{},{},{}\n",
                c.id, c.statement, c.expected, c.computed, c.pass
            ));
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// Execute one command. The report's claims are the per-statement
/// verdicts; any failing claim is a falsification of the statement it
/// names and flips the process exit status.
pub fn run(config: &RunConfig) -> Result<Report> {
    if config.f != 1 {
        return Err(Error::InvalidRing(
            "the batch front end drives f = 1 rings; use the library for f > 1".into(),
        ));
    }
    let mut ws = Workspace::new(config.budget, config.seed)
        .with_cache(config.cache_dir.clone())
        .with_family(config.family);
    let (claims, data, csv) = match config.command {
        Command::Census => {
            let claims = crate::verify::census_comparison(&mut ws, config.kind, config.p, config.ell)?;
            let b = ws.bundle(config.kind, config.p, config.ell)?;
            let formula = formula_report(config.kind, config.p, config.ell);
            let csv = classes_to_csv(&b.rows);
            let data = serde_json::json!({
                "bruteforce": b.census,
                "formula": formula,
                "classes": b.rows,
            });
            (claims, data, Some(csv))
        }
        Command::Involutions => {
            let b = ws.bundle(config.kind, config.p, config.ell)?;
            let count = crate::reality::involutions(&b.handle).len() as i128;
            let formula = involution_count_formula(config.kind, config.p, config.ell) as i128;
            let claims = vec![Claim::new(
                &format!(
                    "involution-count-{}-q{}-l{}",
                    config.kind.as_str(),
                    config.p,
                    config.ell
                ),
                "#involutions = (q - dG) q^(2l-1) + 2",
                formula,
                count,
            )];
            let data = serde_json::json!({ "count": count as u64, "formula": formula as u64 });
            (claims, data, None)
        }
        Command::Classify => {
            let b = ws.bundle(config.kind, config.p, config.ell)?;
            let csv = classes_to_csv(&b.rows);
            let claims = match config.kind {
                GroupKind::Gu2 => vec![Claim::new(
                    &format!("classification-exhaustive-q{}-l{}", config.p, config.ell),
                    "every class matches exactly one representative family",
                    b.partition.num_classes() as i128,
                    b.classification.as_ref().map_or(0, |c| c.tags.len()) as i128,
                )],
                GroupKind::Gl2 => vec![Claim::new(
                    &format!("label-count-q{}-l{}", config.p, config.ell),
                    "#classes = #canonical labels (parameter count)",
                    crate::classify::gl2_form_count(config.p, config.ell) as i128,
                    b.partition.num_classes() as i128,
                )],
            };
            let data = serde_json::json!({ "classes": b.rows });
            (claims, data, Some(csv))
        }
        Command::Chartab => {
            let (classes, order, real_classes) = {
                let b = ws.bundle(config.kind, config.p, config.ell)?;
                (
                    b.partition.num_classes() as i128,
                    b.handle.order,
                    b.census.real as i128,
                )
            };
            let (b, pack) = ws.bundle_and_pack(config.kind, config.p, config.ell)?;
            let tag = format!("{}-q{}-l{}", config.kind.as_str(), config.p, config.ell);
            let sum_sq: i128 = pack.table.degrees.iter().map(|&d| (d as i128) * (d as i128)).sum();
            let aggregate: i128 = pack
                .table
                .fs
                .iter()
                .zip(&pack.table.degrees)
                .map(|(&nu, &d)| nu as i128 * d as i128)
                .sum();
            let claims = vec![
                Claim::new(
                    &format!("char-count-{tag}"),
                    "#irreducible characters = #conjugacy classes",
                    classes,
                    pack.table.k as i128,
                ),
                Claim::new(
                    &format!("degree-square-sum-{tag}"),
                    "sum of squared degrees = |G|",
                    order as i128,
                    sum_sq,
                ),
                Claim::new(
                    &format!("fs-aggregate-{tag}"),
                    "sum nu(chi) deg(chi) = #involutions",
                    involution_count_formula(config.kind, config.p, config.ell) as i128,
                    aggregate,
                ),
                Claim::new(
                    &format!("real-characters-{tag}"),
                    "#real-valued characters = #real classes",
                    real_classes,
                    pack.table.real_valued.iter().filter(|&&b| b).count() as i128,
                ),
            ];
            let sd = self_dual_census(&pack.table);
            let types: Vec<String> = match &pack.typing {
                Some(t) => t.types.iter().map(|t| t.as_str().to_string()).collect(),
                None => vec![String::from("-"); pack.table.k],
            };
            let mut csv = String::from("character,degree,fs,real_valued,type\n");
            for chi in 0..pack.table.k {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    chi, pack.table.degrees[chi], pack.table.fs[chi], pack.table.real_valued[chi], types[chi]
                ));
            }
            let lifts = complex_lifts(&b.handle, &pack.table, &pack.cd);
            let round = |x: f64| (x * 1e6).round() / 1e6;
            let lifts_json: Vec<Vec<[f64; 2]>> = lifts
                .iter()
                .map(|row| row.iter().map(|&(re, im)| [round(re), round(im)]).collect())
                .collect();
            let data = serde_json::json!({
                "modulus": pack.table.modulus,
                "exponent": pack.table.exponent,
                "zeta": pack.table.zeta,
                "degrees": pack.table.degrees,
                "fs_indicators": pack.table.fs,
                "real_valued": pack.table.real_valued,
                "types": types,
                "self_dual": sd,
                "values_mod_m": (0..pack.table.k).map(|chi| pack.table.row(chi).to_vec()).collect::<Vec<_>>(),
                "complex_values": lifts_json,
            });
            (claims, data, Some(csv))
        }
        Command::VerifyAll => {
            let groups = all_criteria(&mut ws)?;
            let mut claims = Vec::new();
            let mut summary = Vec::new();
            for (name, group) in groups {
                let pass = group.iter().all(|c| c.pass());
                summary.push(serde_json::json!({ "criterion": name, "pass": pass }));
                claims.extend(group);
            }
            (claims, serde_json::Value::Array(summary), None)
        }
    };
    Ok(Report {
        config: config.clone(),
        claims,
        data,
        timing_ms: None,
        csv,
    })
}

/// Complex lifts of a full character table, for reporting.
pub fn lifted_table(
    ws: &mut Workspace,
    kind: GroupKind,
    p: u64,
    ell: u32,
) -> Result<Vec<Vec<(f64, f64)>>> {
    let (bundle, pack) = ws.bundle_and_pack(kind, p, ell)?;
    let mut out = Vec::with_capacity(pack.table.k);
    for chi in 0..pack.table.k {
        let mut row = Vec::with_capacity(pack.table.k);
        for c in 0..pack.table.k {
            row.push(complex_value(&bundle.handle, &pack.table, &pack.cd, chi, c));
        }
        out.push(row);
    }
    Ok(out)
}

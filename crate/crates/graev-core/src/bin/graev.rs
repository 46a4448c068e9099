//! Command-line front end: norms, distances, validation, neighborhood
//! checks, the completeness lab, and the acceptance suite.
//!
//! Exit codes: 0 success, 1 refuted property or validation failure, 2 usage,
//! parse, or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use graev_core::lab::{lab_header, run_case, LabReport, LabSummary, Scenario, ScenarioSpec};
use graev_core::metrics::metrics_from_json;
use graev_core::neighborhood::{
    ball_membership, wd_membership, wd_witness_from_ball, WdSystem, WdVerdict,
};
use graev_core::norm::{graev_dist_with_limit, graev_norm_with_limit, DEFAULT_MATCH_LIMIT};
use graev_core::space::{space_from_json, validate_space_json, GroundSpace};
use graev_core::suite::{oracle_check, render_report, run_suite, SuiteConfig};
use graev_core::GroupElement;

#[derive(Parser)]
#[command(name = "graev", version, about = "Graev extension norms on free Boolean groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArg {
    /// Path to a space JSON file ({"kind", "labels", "dist" | "coords"}).
    #[arg(long)]
    space: PathBuf,
}

#[derive(Args)]
struct OutArg {
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space file against the pseudometric axioms.
    ValidateMetric {
        #[command(flatten)]
        space: SpaceArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Graev norm of an element, with its optimal matching witness.
    Norm {
        #[command(flatten)]
        space: SpaceArg,
        /// Comma-separated point indices (repeats cancel, 0 is absorbed).
        #[arg(long)]
        element: String,
        /// Matching capacity override (also GRAEV_MATCH_LIMIT).
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Graev distance between two elements.
    Dist {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Compare the matching norm against the enumeration oracle on random
    /// elements of a space.
    OracleCheck {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, default_value_t = 6)]
        max_support: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decide membership of an element in the bounded word-sumset
    /// neighborhood of a metric sequence.
    WdCheck {
        #[command(flatten)]
        space: SpaceArg,
        /// Path to a metric-sequence JSON file ({"tail_rule", "metrics"}).
        #[arg(long)]
        metrics: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build the dyadic witness for an element of the half-ball of the
    /// sup-combined distance (errors when the ball precondition fails).
    WdWitness {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        metrics: PathBuf,
        #[arg(long)]
        element: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Open-ball membership: norm(element) < radius.
    Ball {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        element: String,
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run seeded Cauchy-sequence scenarios and report verdicts against
    /// their designed labels.
    CauchyLab {
        /// Scenario name or "all".
        #[arg(long, default_value = "all")]
        scenario: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cases per scenario.
        #[arg(long, default_value_t = 4)]
        cases: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the acceptance property batteries.
    Suite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Reduced sample counts for fast iteration.
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_space(path: &Path) -> Result<GroundSpace> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    space_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_metrics(path: &Path) -> Result<graev_core::PseudometricSequence> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    metrics_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn match_limit(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("GRAEV_MATCH_LIMIT")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_MATCH_LIMIT)
}

fn emit(value: &serde_json::Value, out: &OutArg) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(&text, out)
}

fn emit_text(text: &str, out: &OutArg) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::ValidateMetric { space, out } => {
            let text = std::fs::read_to_string(&space.space)
                .with_context(|| format!("reading {}", space.space.display()))?;
            let report = validate_space_json(&text)?;
            emit(&serde_json::to_value(&report)?, &out)?;
            Ok(exit_flag(report.is_valid()))
        }
        Command::Norm {
            space,
            element,
            limit,
            out,
        } => {
            let s = load_space(&space.space)?;
            let g = GroupElement::parse_points(&element, &s)?;
            let result = graev_norm_with_limit(&g, &s, match_limit(limit))?;
            emit(
                &json!({
                    "element": g.support(),
                    "value": result.value,
                    "witness": result.witness.pairs,
                }),
                &out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dist {
            space,
            g,
            h,
            limit,
            out,
        } => {
            let s = load_space(&space.space)?;
            let ge = GroupElement::parse_points(&g, &s)?;
            let he = GroupElement::parse_points(&h, &s)?;
            let d = graev_dist_with_limit(&ge, &he, &s, match_limit(limit))?;
            emit(
                &json!({ "g": ge.support(), "h": he.support(), "dist": d }),
                &out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleCheck {
            space,
            max_support,
            trials,
            seed,
            out,
        } => {
            let s = load_space(&space.space)?;
            let report = oracle_check(&s, max_support, trials, seed)?;
            let clean = report.mismatches.is_empty();
            emit(&serde_json::to_value(&report)?, &out)?;
            Ok(exit_flag(clean))
        }
        Command::WdCheck {
            space,
            metrics,
            element,
            nmax,
            out,
        } => {
            let s = load_space(&space.space)?;
            let seq = load_metrics(&metrics)?;
            let g = GroupElement::parse_points(&element, &s)?;
            let verdict = wd_membership(&g, &WdSystem::new(seq), &s, nmax)?;
            emit(&serde_json::to_value(&verdict)?, &out)?;
            Ok(exit_flag(matches!(verdict, WdVerdict::Certified { .. })))
        }
        Command::WdWitness {
            space,
            metrics,
            element,
            out,
        } => {
            let s = load_space(&space.space)?;
            let seq = load_metrics(&metrics)?;
            seq.check_point_count(&s)?;
            let g = GroupElement::parse_points(&element, &s)?;
            let system = WdSystem::new(seq);
            let rho = graev_core::combine_sup(system.sequence())?;
            let witness = wd_witness_from_ball(&g, &system, &rho)?;
            emit(&serde_json::to_value(&witness)?, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ball {
            space,
            element,
            radius,
            out,
        } => {
            let s = load_space(&space.space)?;
            let g = GroupElement::parse_points(&element, &s)?;
            let inside = ball_membership(&g, &s, radius)?;
            emit(
                &json!({ "element": g.support(), "radius": radius, "inside": inside }),
                &out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CauchyLab {
            scenario,
            seed,
            cases,
            out,
        } => {
            let scenarios: Vec<Scenario> = if scenario == "all" {
                Scenario::ALL.to_vec()
            } else {
                vec![scenario.parse()?]
            };
            let mut rows = Vec::new();
            for sc in scenarios {
                for n in [2, 3] {
                    let spec = ScenarioSpec {
                        scenario: sc,
                        cases,
                        n,
                    };
                    for mut case in graev_core::lab::generate_sequences(&spec, seed)? {
                        case.id = format!("{}-n{}", case.id, n);
                        rows.push(run_case(&mut case)?);
                    }
                }
            }
            let disagreements: Vec<String> = rows
                .iter()
                .filter(|r| !r.agree)
                .map(|r| r.id.clone())
                .collect();
            let report = LabReport {
                header: lab_header(seed),
                summary: LabSummary {
                    total: rows.len(),
                    agreed: rows.len() - disagreements.len(),
                    disagreements: disagreements.clone(),
                },
                cases: rows,
            };
            emit(&serde_json::to_value(&report)?, &out)?;
            Ok(exit_flag(disagreements.is_empty()))
        }
        Command::Suite { seed, quick, out } => {
            let report = run_suite(SuiteConfig { seed, quick })?;
            for c in &report.criteria {
                eprintln!(
                    "criterion {:>2} {:<32} {}",
                    c.id,
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" }
                );
            }
            let passed = report.passed;
            emit_text(&render_report(&report), &out)?;
            Ok(exit_flag(passed))
        }
    }
}

fn exit_flag(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

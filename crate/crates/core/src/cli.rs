//! The single user-facing executable: subcommands for the census, the
//! bound calculators, verification sweeps, stabilizers, orbits, smoothness
//! verdicts and fixed-space dimensions.
//!
//! Exit codes: 0 success, 1 validation or budget error, 2 a verification
//! check failed (so pipelines can tell findings from crashes).

use crate::bounds::{bound_report, format_report_table};
use crate::census::{
    census_exhaustive, census_group_side, census_sample, report_to_csv, report_to_json,
    stabilizer, verify_paper, CensusParams, CensusReport, RunOptions,
};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::fixedspace::{diag_fixed_dim, fixed_space};
use crate::gf::FieldSpec;
use crate::group::{format_matrix, parse_matrix, GroupElem};
use crate::polyspace::{format_poly, parse_poly, MonomialBasis};
use crate::smooth::{is_smooth, is_smooth_points_oracle};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "hypercensus",
    version,
    about = "Exact automorphism census of smooth projective hypersurfaces over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (0 = all cores). Output never depends on this.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Cap on |PGL| for enumerations.
    #[arg(long, global = true)]
    pub max_group: Option<u64>,

    /// Cap on the coefficient space size q^dim(P_d).
    #[arg(long, global = true)]
    pub max_space: Option<u128>,

    /// Cap on points visited by the smoothness point oracle.
    #[arg(long, global = true)]
    pub max_points: Option<u64>,

    /// Override the saturation degree cap (default (n+2)(d-1)+1).
    #[arg(long, global = true)]
    pub max_saturation_degree: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Mode {
    Exhaustive,
    Group,
    Sample,
}

#[derive(Args, Debug)]
pub struct CellArgs {
    /// Ambient projective dimension n.
    #[arg(long)]
    pub n: u32,
    /// Hypersurface degree d.
    #[arg(long)]
    pub d: u32,
    /// Field size q (a prime power).
    #[arg(long)]
    pub q: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the census in exhaustive, group-side or sampling mode.
    Census {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Sample count (sample mode).
        #[arg(long)]
        samples: Option<u64>,
        /// RNG seed (sample mode).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum shard count (rounded up to a power of q).
        #[arg(long)]
        shards: Option<u64>,
        /// Process only this shard and save the checkpoint.
        #[arg(long)]
        shard_index: Option<u64>,
        /// Checkpoint file for resumable exhaustive runs.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },

    /// Evaluate every closed-form bound and identity for one cell.
    Bounds {
        #[command(flatten)]
        cell: CellArgs,
        /// json prints only the JSON document; csv prints key,value rows;
        /// by default both the JSON and an aligned table are printed.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },

    /// Check the dimension bounds and counting inequalities against
    /// measured data; exits 2 when any check fails.
    Verify {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },

    /// Decide smoothness of a hypersurface given in the polynomial text
    /// grammar.
    Smooth {
        /// Polynomial, e.g. "x1^3+x2^3+x3^3" or "[0,1]*x1^2+x2^2".
        #[arg(long)]
        poly: String,
        /// Field size q (a prime power).
        #[arg(long)]
        q: u64,
        /// Force the ambient dimension (default: inferred from the poly).
        #[arg(long)]
        n: Option<u32>,
        /// Also run the point-search oracle up to this extension degree.
        #[arg(long)]
        oracle_kmax: Option<u32>,
    },

    /// List the PGL stabilizer of a hypersurface.
    Stabilizer {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },

    /// Decompose the smooth hypersurfaces of a cell into PGL orbits.
    Orbits {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },

    /// Dimension (and optionally a basis) of the fixed space
    /// {f : lambda*f = f(Ax)}.
    FixedDim {
        /// Matrix in text form, rows separated by ';', entries by ','.
        #[arg(long)]
        matrix: String,
        /// Multiplier lambda in the field element text form.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        q: u64,
        /// Print the echelon basis as polynomials.
        #[arg(long, default_value_t = false)]
        basis: bool,
    },
}

fn budgets_from(cli: &Cli) -> Budgets {
    let mut b = Budgets::default();
    if let Some(v) = cli.max_group {
        b.max_group = v;
    }
    if let Some(v) = cli.max_space {
        b.max_space = v;
    }
    if let Some(v) = cli.max_points {
        b.max_points = v;
    }
    b.max_saturation_degree = cli.max_saturation_degree;
    b
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

fn render_census(report: &CensusReport, format: Format) -> String {
    match format {
        Format::Csv => report_to_csv(report),
        Format::Json => report_to_json(report),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let budgets = budgets_from(cli);
    match &cli.command {
        Command::Census {
            cell,
            mode,
            samples,
            seed,
            shards,
            shard_index,
            checkpoint,
            format,
        } => {
            let params = CensusParams {
                n: cell.n,
                d: cell.d,
                q: cell.q,
            };
            let opts = RunOptions {
                threads: cli.threads,
                shards: *shards,
                shard_order: None,
                checkpoint: checkpoint.clone(),
                only_shard: *shard_index,
            };
            let report = match mode {
                Mode::Exhaustive => census_exhaustive(params, &budgets, &opts)?,
                Mode::Group => {
                    if checkpoint.is_some() || shard_index.is_some() {
                        return Err(Error::InvalidConfig(
                            "checkpoints and shard selection apply to exhaustive mode only"
                                .into(),
                        ));
                    }
                    census_group_side(params, &budgets, &opts)?
                }
                Mode::Sample => {
                    if checkpoint.is_some() || shard_index.is_some() {
                        return Err(Error::InvalidConfig(
                            "checkpoints and shard selection apply to exhaustive mode only"
                                .into(),
                        ));
                    }
                    let samples = samples.ok_or_else(|| {
                        Error::InvalidConfig("sample mode needs --samples".into())
                    })?;
                    census_sample(params, &budgets, samples, *seed, &opts)?
                }
            };
            emit(cli, &render_census(&report, *format))?;
            Ok(0)
        }

        Command::Bounds { cell, format } => {
            let report = bound_report(cell.n, cell.d, cell.q)?;
            let content = match format {
                Some(Format::Json) => {
                    let mut s = serde_json::to_string_pretty(&report)?;
                    s.push('\n');
                    s
                }
                Some(Format::Csv) => {
                    let json = serde_json::to_value(&report)?;
                    let mut rows = String::from("key,value\n");
                    if let serde_json::Value::Object(map) = json {
                        for (k, v) in map {
                            let vs = match v {
                                serde_json::Value::String(s) => s,
                                other => other.to_string(),
                            };
                            rows.push_str(&format!("{k},{}\n", csv_quote(&vs)));
                        }
                    }
                    rows
                }
                None => {
                    let mut s = serde_json::to_string_pretty(&report)?;
                    s.push_str("\n\n");
                    s.push_str(&format_report_table(&report));
                    s.push('\n');
                    s
                }
            };
            emit(cli, &content)?;
            Ok(0)
        }

        Command::Verify { cell, format } => {
            let params = CensusParams {
                n: cell.n,
                d: cell.d,
                q: cell.q,
            };
            let opts = RunOptions {
                threads: cli.threads,
                ..RunOptions::default()
            };
            let log = verify_paper(params, &budgets, &opts)?;
            let content = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&log)?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut rows = String::from("check,status,detail\n");
                    for c in &log.checks {
                        rows.push_str(&format!(
                            "{},{},{}\n",
                            c.check,
                            c.status,
                            csv_quote(&c.detail)
                        ));
                    }
                    rows
                }
            };
            emit(cli, &content)?;
            Ok(if log.all_passed { 0 } else { 2 })
        }

        Command::Smooth {
            poly,
            q,
            n,
            oracle_kmax,
        } => {
            let spec = FieldSpec::from_order(*q, &budgets)?;
            let f = parse_poly(poly, &spec, *n, &budgets)?;
            let verdict = is_smooth(&f, &budgets)?;
            let mut doc = verdict.to_json();
            if let Some(kmax) = oracle_kmax {
                let oracle = is_smooth_points_oracle(&f, *kmax, &budgets)?;
                doc["oracle"] = oracle.to_json();
            }
            emit(cli, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            Ok(0)
        }

        Command::Stabilizer { poly, q, n, format } => {
            let spec = FieldSpec::from_order(*q, &budgets)?;
            let f = parse_poly(poly, &spec, *n, &budgets)?;
            let result = stabilizer(&f, &budgets)?;
            let content = match format {
                Format::Json => {
                    let elements: Vec<serde_json::Value> = result
                        .elements
                        .iter()
                        .map(|(a, lam)| {
                            serde_json::json!({
                                "matrix": format_matrix(a.matrix()),
                                "lambda": spec.format_elem(*lam),
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "hypersurface": format_poly(&result.hypersurface),
                        "order": result.order,
                        "elements": elements,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc)?)
                }
                Format::Csv => {
                    let mut rows = String::from("matrix,lambda\n");
                    for (a, lam) in &result.elements {
                        rows.push_str(&format!(
                            "{},{}\n",
                            csv_quote(&format_matrix(a.matrix())),
                            csv_quote(&spec.format_elem(*lam))
                        ));
                    }
                    rows
                }
            };
            emit(cli, &content)?;
            Ok(0)
        }

        Command::Orbits { cell, format } => {
            let params = CensusParams {
                n: cell.n,
                d: cell.d,
                q: cell.q,
            };
            let opts = RunOptions {
                threads: cli.threads,
                ..RunOptions::default()
            };
            let (ctx, data) = crate::census::orbit_census(params, &budgets, &opts)?;
            let basis = MonomialBasis::new(cell.n, cell.d, &budgets)?;
            let poly_of = |code: u64| -> String {
                let mut digits = vec![0u8; basis.size()];
                ctx.space.digits_of(code, &mut digits);
                let coeffs = digits
                    .iter()
                    .map(|&c| crate::gf::FieldElem(c as u32))
                    .collect();
                format_poly(&crate::polyspace::PolyVec::new(
                    basis.clone(),
                    ctx.spec.clone(),
                    coeffs,
                ))
            };
            let content = match format {
                Format::Json => {
                    let orbits: Vec<serde_json::Value> = data
                        .orbits
                        .iter()
                        .map(|o| {
                            serde_json::json!({
                                "representative": poly_of(o.representative),
                                "size": o.size,
                                "stabilizer_order": o.stabilizer_order,
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "n": cell.n, "d": cell.d, "q": cell.q,
                        "orbit_count": data.orbits.len(),
                        "groupoid_num": data.groupoid.numer().to_string(),
                        "groupoid_den": data.groupoid.denom().to_string(),
                        "orbits": orbits,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc)?)
                }
                Format::Csv => {
                    let mut rows = String::from("representative,size,stabilizer_order\n");
                    for o in &data.orbits {
                        rows.push_str(&format!(
                            "{},{},{}\n",
                            csv_quote(&poly_of(o.representative)),
                            o.size,
                            o.stabilizer_order
                        ));
                    }
                    rows
                }
            };
            emit(cli, &content)?;
            Ok(0)
        }

        Command::FixedDim {
            matrix,
            lambda,
            n,
            d,
            q,
            basis: want_basis,
        } => {
            let spec = FieldSpec::from_order(*q, &budgets)?;
            let m = parse_matrix(matrix, &spec)?;
            if m.rows() != (*n + 1) as usize || m.cols() != (*n + 1) as usize {
                return Err(Error::DimensionMismatch(format!(
                    "matrix must be {}x{} for n = {n}",
                    n + 1,
                    n + 1
                )));
            }
            let lam = spec.parse_elem(lambda)?;
            let a = GroupElem::new(m)?;
            let basis = MonomialBasis::new(*n, *d, &budgets)?;
            let record = fixed_space(&a, lam, &basis, *want_basis, &budgets)?;
            // cross-check with the discrete-log path when A is diagonal
            let dp_dim = if a.is_diagonal() {
                Some(diag_fixed_dim(&spec, &a.diagonal(), lam, *d)?)
            } else {
                None
            };
            let doc = serde_json::json!({
                "dim": record.dim,
                "diagonal_dp_dim": dp_dim,
                "basis": record.basis.as_ref().map(|polys| {
                    polys.iter().map(format_poly).collect::<Vec<_>>()
                }),
            });
            emit(cli, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            Ok(0)
        }
    }
}

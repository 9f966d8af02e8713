//! Command-line front end: every toolkit operation as a reproducible,
//! scriptable subcommand with JSON output.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a verification
//! residual exceeds the tolerance. Identical configuration (and seed) gives
//! byte-identical output.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use phasetomo_core::factor;
use phasetomo_core::field::{build_field, FieldTables};
use phasetomo_core::mat::{CMatrix, DensityMatrix};
use phasetomo_core::tomo::{self, Scheme, TomographyScheme};
use phasetomo_core::weyl::canonical_conventions;
use phasetomo_core::wigner::{
    canonical_wigner_family, mubs_from_wigner, verify_acceptability, WignerFamily,
};
use serde_json::{json, Value};

const DEFAULT_TOL: f64 = 1e-8;
const TOL_ENV: &str = "PHASETOMO_TOLERANCE";

#[derive(Parser)]
#[command(
    name = "phasetomo",
    version,
    about = "Discrete phase-space toolkit: Galois fields, displacement operators, MUBs, Wigner families, and tomography simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Residual tolerance for verification gates (env PHASETOMO_TOLERANCE).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Write the JSON artifact to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<std::path::PathBuf>,
    /// Output format; csv is a lossy convenience view for factor scans.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build GF(p^m) arithmetic tables and export them as JSON.
    Field(FieldArgs),
    /// Emit the d+1 commuting displacement families with canonical phases.
    Weyl {
        #[command(flatten)]
        dim: DimArgs,
        /// Also emit the d² displacement operator matrices.
        #[arg(long)]
        ops: bool,
    },
    /// Build or verify a Wigner phase-point operator family.
    Wigner {
        #[command(subcommand)]
        action: WignerAction,
    },
    /// Extract the d+1 mutually unbiased bases of the canonical family.
    Mub(DimArgs),
    /// Factorisability analyses.
    Factor {
        #[command(subcommand)]
        action: FactorAction,
    },
    /// Tomography simulation.
    Tomo {
        #[command(subcommand)]
        action: TomoAction,
    },
    /// Redundancy bookkeeping for a tomography scheme.
    Ledger {
        /// One of: mub-pvm, sic-povm, local-mub-two-qubit.
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        d: usize,
    },
    /// Mean King inference from a preparation direction and a detector point.
    MeanKing {
        #[arg(long)]
        d: usize,
        /// Preparation direction (0 = computational basis, k = slope k−1).
        #[arg(long)]
        prep: usize,
        /// Detector phase-space point "i1,i2".
        #[arg(long)]
        detector: String,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    m: usize,
    /// Monic modulus polynomial, little-endian coefficients "c0,c1,...,1".
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args)]
struct DimArgs {
    /// Prime-power dimension d.
    #[arg(long)]
    d: usize,
}

#[derive(Subcommand)]
enum WignerAction {
    /// Build the canonical family and emit its operators plus verification.
    Build(DimArgs),
    /// Verify acceptability only; exit 2 when a residual exceeds tolerance.
    Verify(DimArgs),
}

#[derive(Subcommand)]
enum FactorAction {
    /// Scan all 64 two-qubit sign products against quartit acceptability.
    Scan2q,
    /// Scan all 512 three-qubit sign products against GF(8) acceptability.
    Scan3q,
    /// Constructive quadratic-extension factorisation for odd p.
    Odd {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Chinese-remainder factorisation of modulo-d displacements.
    Crt {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
    },
}

#[derive(Args)]
struct TomoCommon {
    /// Input state: zero | plus | mixed | bell | basis:K | bloch:X,Y,Z | a
    /// path to a JSON matrix of [re, im] pairs.
    #[arg(long, default_value = "zero")]
    state: String,
    /// Number of shots; omit for exact (infinite-shot) inversion.
    #[arg(long)]
    shots: Option<u64>,
    /// RNG seed; required whenever --shots is given.
    #[arg(long, requires = "shots")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum TomoAction {
    /// Qubit SIC POVM tomography.
    Sic(TomoCommon),
    /// Projective tomography in the d+1 canonical MUBs.
    Mub {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        common: TomoCommon,
    },
    /// Two-qubit factorisable product-SIC tomography.
    ProductSic(TomoCommon),
}

enum CliError {
    Usage(String),
    Verification(String),
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let tolerance = cli
        .tolerance
        .or_else(|| std::env::var(TOL_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_TOL);

    match execute(&cli.command, tolerance) {
        Ok((config, result)) => {
            let artifact = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "result": result,
            });
            let text = render(&artifact, &cli.format);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 1;
                    }
                }
                None => print!("{text}"),
            }
            0
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            2
        }
    }
}

fn render(artifact: &Value, format: &str) -> String {
    if format == "csv" {
        if let Some(reports) = artifact["result"]["reports"].as_array() {
            let mut out = String::from("id,acceptable,worst_residual\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{:e}\n",
                    r["id"].as_str().unwrap_or("?"),
                    r["acceptable"],
                    r["worst_residual"].as_f64().unwrap_or(f64::NAN)
                ));
            }
            return out;
        }
    }
    let mut text = serde_json::to_string_pretty(artifact).expect("serializable artifact");
    text.push('\n');
    text
}

fn field_for_dim(d: usize) -> Result<FieldTables, CliError> {
    let (p, m) = factor_prime_power(d)
        .ok_or_else(|| CliError::Usage(format!("d = {d} is not a prime power")))?;
    build_field(p, m, None).map_err(|e| CliError::Usage(e.to_string()))
}

fn factor_prime_power(d: usize) -> Option<(usize, usize)> {
    if d < 2 {
        return None;
    }
    let p = (2..=d).find(|k| d.is_multiple_of(*k))?;
    let mut m = 0;
    let mut rest = d;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn canonical_family(d: usize) -> Result<(FieldTables, WignerFamily), CliError> {
    let f = field_for_dim(d)?;
    let fam = canonical_wigner_family(&f).map_err(|e| CliError::Verification(e.to_string()))?;
    Ok((f, fam))
}

fn parse_state(input: &str, dim: usize) -> Result<DensityMatrix, CliError> {
    let usage = |m: String| CliError::Usage(m);
    let c = Complex64::new;
    let basis_state = |k: usize| -> Result<DensityMatrix, CliError> {
        if k >= dim {
            return Err(usage(format!("basis index {k} out of range for d = {dim}")));
        }
        let mut v = vec![c(0.0, 0.0); dim];
        v[k] = c(1.0, 0.0);
        Ok(DensityMatrix::pure(&v))
    };
    match input {
        "zero" => basis_state(0),
        "mixed" => Ok(DensityMatrix::maximally_mixed(dim)),
        "plus" => {
            let amp = 1.0 / (dim as f64).sqrt();
            Ok(DensityMatrix::pure(&vec![c(amp, 0.0); dim]))
        }
        "bell" => {
            if dim != 4 {
                return Err(usage("the bell preset requires d = 4".into()));
            }
            let s = 1.0 / 2f64.sqrt();
            Ok(DensityMatrix::pure(&[
                c(s, 0.),
                c(0., 0.),
                c(0., 0.),
                c(s, 0.),
            ]))
        }
        other => {
            if let Some(k) = other.strip_prefix("basis:") {
                let k: usize = k
                    .parse()
                    .map_err(|_| usage(format!("bad basis index {k}")))?;
                return basis_state(k);
            }
            if let Some(xyz) = other.strip_prefix("bloch:") {
                if dim != 2 {
                    return Err(usage("bloch states are qubit-only".into()));
                }
                let parts: Vec<f64> = xyz
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| usage(format!("bad bloch vector '{xyz}'")))?;
                if parts.len() != 3 {
                    return Err(usage("bloch vector needs three components".into()));
                }
                let bloch = tomo::BlochVector {
                    x: parts[0],
                    y: parts[1],
                    z: parts[2],
                };
                return tomo::density_from_bloch(bloch)
                    .map_err(|e| usage(format!("invalid bloch state: {e}")));
            }
            // otherwise treat as a path to a JSON matrix
            let text = std::fs::read_to_string(other)
                .map_err(|e| usage(format!("cannot read state file '{other}': {e}")))?;
            let nested: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
                .map_err(|e| usage(format!("bad state JSON in '{other}': {e}")))?;
            if nested.is_empty() || nested.iter().any(|row| row.len() != nested.len()) {
                return Err(usage(format!("state in '{other}' is not a square matrix")));
            }
            let mat = CMatrix::from_nested(&nested);
            if mat.rows() != dim || mat.cols() != dim {
                return Err(usage(format!(
                    "state has dimension {}, expected {dim}",
                    mat.rows()
                )));
            }
            DensityMatrix::new(mat).map_err(|e| usage(format!("not a density matrix: {e}")))
        }
    }
}

fn matrix_json(m: &CMatrix) -> Value {
    json!(m.to_nested())
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn execute(command: &Command, tolerance: f64) -> Result<(Value, Value), CliError> {
    match command {
        Command::Field(args) => {
            let modulus: Option<Vec<usize>> = match &args.modulus {
                Some(text) => Some(
                    text.split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| CliError::Usage(format!("bad modulus '{text}'")))?,
                ),
                None => None,
            };
            let f = build_field(args.p, args.m, modulus.as_deref())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let config = json!({
                "subcommand": "field", "p": args.p, "m": args.m, "modulus": args.modulus,
            });
            Ok((config, serde_json::to_value(f.export()).unwrap()))
        }

        Command::Weyl { dim, ops } => {
            let f = field_for_dim(dim.d)?;
            let conventions =
                canonical_conventions(&f).map_err(|e| CliError::Verification(e.to_string()))?;
            let families: Vec<Value> = conventions
                .iter()
                .map(|conv| {
                    json!({
                        "l": conv.family.label,
                        "members": conv.family.members.iter().map(|m| json!([m.i.0, m.j.0])).collect::<Vec<_>>(),
                        "phases": conv.phases.iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let config =
                json!({"subcommand": "weyl", "d": dim.d, "convention": "canonical", "ops": ops});
            let mut result = json!({ "d": dim.d, "families": families });
            if *ops {
                use phasetomo_core::weyl::{displacement, DisplacementIndex};
                let d = f.d();
                let operators: Vec<Value> = (0..d * d)
                    .map(|k| matrix_json(&displacement(&f, DisplacementIndex::new(k / d, k % d))))
                    .collect();
                result["operators"] = json!(operators);
            }
            Ok((config, result))
        }

        Command::Wigner { action } => {
            let (d, build) = match action {
                WignerAction::Build(a) => (a.d, true),
                WignerAction::Verify(a) => (a.d, false),
            };
            let (_, fam) = canonical_family(d)?;
            let report = verify_acceptability(&fam);
            let verification = json!({
                "a": report.trace.max(report.hermiticity),
                "b": report.orthonormality,
                "c": report.line_projector.max(report.line_orthogonality),
                "c_projector": report.line_projector,
                "c_orthogonality": report.line_orthogonality,
                "pass": report.passes(tolerance),
            });
            let config = json!({
                "subcommand": if build { "wigner build" } else { "wigner verify" },
                "d": d, "convention": "canonical", "tolerance": tolerance,
            });
            if !report.passes(tolerance) {
                return Err(CliError::Verification(format!(
                    "acceptability residual {:e} exceeds tolerance {tolerance:e} at d = {d}",
                    report.max_residual()
                )));
            }
            let result = if build {
                let operators: Vec<Value> = fam.ops().iter().map(matrix_json).collect();
                json!({"d": d, "convention": "canonical", "operators": operators, "verification": verification})
            } else {
                json!({"d": d, "convention": "canonical", "verification": verification})
            };
            Ok((config, result))
        }

        Command::Mub(args) => {
            let (_, fam) = canonical_family(args.d)?;
            let mubs = mubs_from_wigner(&fam).map_err(|e| CliError::Verification(e.to_string()))?;
            let bases: Vec<Value> = mubs
                .bases
                .iter()
                .map(|basis| {
                    json!(basis
                        .iter()
                        .map(|state| state.iter().map(|&z| complex_json(z)).collect::<Vec<_>>())
                        .collect::<Vec<_>>())
                })
                .collect();
            let config = json!({"subcommand": "mub", "d": args.d, "convention": "canonical"});
            Ok((
                config,
                json!({"d": args.d, "bases": bases, "provenance": mubs.provenance}),
            ))
        }

        Command::Factor { action } => {
            let (config, reports) = match action {
                FactorAction::Scan2q => (
                    json!({"subcommand": "factor scan2q"}),
                    factor::scan_two_qubit_products(),
                ),
                FactorAction::Scan3q => (
                    json!({"subcommand": "factor scan3q"}),
                    factor::scan_three_qubit_products(),
                ),
                FactorAction::Odd { p, m } => {
                    let report = factor::factor_odd_bipartite(*p, *m).map_err(|e| match e {
                        factor::FactorError::ResidualExceeded { .. } => {
                            CliError::Verification(e.to_string())
                        }
                        factor::FactorError::InvalidInput(_) => CliError::Usage(e.to_string()),
                    })?;
                    (
                        json!({"subcommand": "factor odd", "p": p, "m": m}),
                        vec![report],
                    )
                }
                FactorAction::Crt { d1, d2 } => {
                    let report = factor::crt_factor_check(*d1, *d2).map_err(|e| match e {
                        factor::FactorError::ResidualExceeded { .. } => {
                            CliError::Verification(e.to_string())
                        }
                        factor::FactorError::InvalidInput(_) => CliError::Usage(e.to_string()),
                    })?;
                    (
                        json!({"subcommand": "factor crt", "d1": d1, "d2": d2}),
                        vec![report],
                    )
                }
            };
            let acceptable = reports.iter().filter(|r| r.acceptable).count();
            let result = json!({
                "summary": {"acceptable": acceptable, "total": reports.len()},
                "reports": serde_json::to_value(&reports).unwrap(),
            });
            Ok((config, result))
        }

        Command::Tomo { action } => {
            let (scheme_name, d, common): (&str, usize, &TomoCommon) = match action {
                TomoAction::Sic(c) => ("sic", 2, c),
                TomoAction::ProductSic(c) => ("product-sic", 4, c),
                TomoAction::Mub { d, common } => ("mub", *d, common),
            };
            let rho = parse_state(&common.state, d)?;
            let fam_holder;
            let mubs_holder;
            let scheme = match action {
                TomoAction::Sic(_) => TomographyScheme::SicQubit,
                TomoAction::ProductSic(_) => TomographyScheme::ProductSic,
                TomoAction::Mub { d, .. } => {
                    let (_, fam) = canonical_family(*d)?;
                    fam_holder = fam;
                    mubs_holder = mubs_from_wigner(&fam_holder)
                        .map_err(|e| CliError::Verification(e.to_string()))?;
                    TomographyScheme::MubPvm(&mubs_holder)
                }
            };
            let config = json!({
                "subcommand": format!("tomo {scheme_name}"),
                "d": d, "state": common.state, "shots": common.shots, "seed": common.seed,
            });
            let result = match common.shots {
                None => {
                    let estimate = tomo::exact_estimate(&rho, &scheme)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    let error = estimate.frob_dist(rho.mat());
                    json!({
                        "scheme": scheme.id(),
                        "mode": "exact",
                        "estimate": matrix_json(&estimate),
                        "reconstruction_error": error,
                    })
                }
                Some(shots) => {
                    if shots == 0 {
                        return Err(CliError::Usage("shots must be at least 1".into()));
                    }
                    let seed = common
                        .seed
                        .ok_or_else(|| CliError::Usage("--seed is required with --shots".into()))?;
                    let report = tomo::sample_and_estimate(&rho, &scheme, shots, seed)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    json!({
                        "scheme": scheme.id(),
                        "mode": "sampled",
                        "counts": report.histograms.iter().map(|h| json!({
                            "label": h.label, "counts": h.counts, "shots": h.shots,
                        })).collect::<Vec<_>>(),
                        "estimate": matrix_json(&report.estimate_raw),
                        "estimate_floored": matrix_json(&report.estimate_floored),
                        "fidelity": report.fidelity,
                        "trace_distance": report.trace_distance,
                        "seed": seed,
                        "generator": tomo::GENERATOR,
                    })
                }
            };
            Ok((config, result))
        }

        Command::Ledger { scheme, d } => {
            let parsed: Scheme = scheme
                .parse()
                .map_err(|e: tomo::TomoError| CliError::Usage(e.to_string()))?;
            let ledger =
                tomo::redundancy_ledger(parsed, *d).map_err(|e| CliError::Usage(e.to_string()))?;
            let config = json!({"subcommand": "ledger", "scheme": scheme, "d": d});
            Ok((config, serde_json::to_value(ledger).unwrap()))
        }

        Command::MeanKing { d, prep, detector } => {
            let parts: Vec<usize> = detector
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("bad detector point '{detector}'")))?;
            if parts.len() != 2 || parts[0] >= *d || parts[1] >= *d {
                return Err(CliError::Usage(format!(
                    "detector must be 'i1,i2' with both in [0, {d})"
                )));
            }
            let (_, fam) = canonical_family(*d)?;
            let state = tomo::mean_king_infer(&fam, *prep, (parts[0], parts[1]))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let config = json!({
                "subcommand": "mean-king", "d": d, "prep": prep, "detector": detector,
            });
            Ok((
                config,
                json!({"direction": prep, "detector": [parts[0], parts[1]], "state_index": state}),
            ))
        }
    }
}

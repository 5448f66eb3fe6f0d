//! Command-line front end: build family members, verify them, and sweep
//! parameter ranges into plot-ready tables.
//!
//! Exit codes are contract-bearing: 0 success, 1 verification failure,
//! 2 invalid input, 3 I/O failure.

mod config;
mod csv;

use config::{build_config, collect_flags, parse_sweep, Format, RunConfig};
use selfshrink_core::error::Error;
use selfshrink_core::tol::Tolerances;
use selfshrink_core::tori::{BuiltFamily, FamilyImmersion, FAMILY_NAMES};
use selfshrink_core::verify::{compute_failures, run_suite, VerificationReport};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VERIFY: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

const USAGE: &str = "usage: selfshrink <build|verify|sweep> [options]

options:
  --family NAME     clifford | abresch-langer | anciaux | lee-wang | lawson | sphere
  --m N --n N       lee-wang parameters (coprime, m <= n)
  --p N --q N       rotation number target p/q (abresch-langer, anciaux)
  --alpha a/b       lawson parameter, rational >= 1 in lowest terms
  --grid NxM        resolution, even and >= 8 (default 128x128)
  --tol X           override the residual pass threshold
  --format json|csv verify output format (default json)
  --out PATH        write output to PATH instead of stdout
  --sweep SPEC      parameter points, e.g. \"m=1,n=1;m=1,n=2\" or \"alpha=1/1;alpha=2/1\"
  --config PATH     key = value file mirroring the flags; flags override
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::InadmissibleParams(_)
        | Error::InadmissibleRotation { .. }
        | Error::UnknownFamily(_) => EXIT_INVALID,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_VERIFY,
    }
}

fn invalid(msg: String) -> Error {
    Error::InadmissibleParams(msg)
}

fn run(args: &[String]) -> Result<u8, Error> {
    let Some(command) = args.first() else {
        eprint!("{USAGE}");
        return Ok(EXIT_INVALID);
    };
    let (pairs, config_path) = collect_flags(&args[1..]).map_err(invalid)?;
    let file_text = match &config_path {
        Some(path) => Some(std::fs::read_to_string(path)?),
        None => None,
    };
    let config = build_config(file_text.as_deref(), &pairs).map_err(invalid)?;

    match command.as_str() {
        "build" => cmd_build(&config),
        "verify" => cmd_verify(&config),
        "sweep" => cmd_sweep(&config),
        other => {
            eprintln!("unknown command {other:?}");
            eprint!("{USAGE}");
            Ok(EXIT_INVALID)
        }
    }
}

fn tolerances(config: &RunConfig) -> Tolerances {
    let mut tols = Tolerances::default();
    if let Some(t) = config.tol {
        // --tol overrides the identity-residual pass thresholds; it leaves
        // the semantic classifiers (Lagrangian, spherical, constancy)
        // untouched.
        tols.residual_analytic = t;
        tols.residual_ode = t;
        tols.laplacian = t;
        tols.structure = t;
        tols.cubic_symmetry = t;
        tols.gauss_bonnet = t;
        tols.willmore_analytic = t;
        tols.willmore_ode = t;
    }
    tols
}

fn family_of(config: &RunConfig) -> Result<BuiltFamily, Error> {
    let name = config
        .family
        .as_deref()
        .ok_or_else(|| invalid(format!("--family is required (one of {})", FAMILY_NAMES.join(", "))))?;
    BuiltFamily::build(name, &config.params)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    match path {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '-' })
        .collect::<String>()
        .trim_matches('-')
        .to_string()
}

fn cmd_build(config: &RunConfig) -> Result<u8, Error> {
    let family = family_of(config)?;
    let tols = tolerances(config);
    let surface = family.surface(config.grid.0, config.grid.1, &tols)?;

    let surface_path = match &config.out {
        Some(path) => path.clone(),
        None => PathBuf::from(format!("{}.surface.csv", sanitize(&family.meta.label()))),
    };
    std::fs::write(&surface_path, csv::surface_csv(&surface))?;
    eprintln!("wrote surface grid {} ({} nodes)", surface_path.display(), surface.jets.len());

    let curves: Vec<_> = match &family.imm {
        FamilyImmersion::Product(t) => vec![(&t.curve_1, "curve1"), (&t.curve_2, "curve2")],
        FamilyImmersion::Equivariant(t) => vec![(&t.curve, "curve")],
        _ => vec![],
    };
    for (curve, tag) in curves {
        let path = curve_path(&surface_path, tag);
        let mut buf = Vec::new();
        curve.write_csv(&mut buf)?;
        std::fs::write(&path, buf)?;
        eprintln!(
            "wrote {} (closure error {:.3e}, first-integral drift {:.3e})",
            path.display(),
            curve.closure_error,
            curve.drift
        );
    }
    Ok(0)
}

fn curve_path(surface_path: &Path, tag: &str) -> PathBuf {
    let stem = surface_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("curve")
        .trim_end_matches(".surface");
    surface_path.with_file_name(format!("{stem}.{tag}.csv"))
}

fn verify_one(config: &RunConfig) -> Result<(VerificationReport, Vec<String>), Error> {
    let family = family_of(config)?;
    let tols = tolerances(config);
    let surface = family.surface(config.grid.0, config.grid.1, &tols)?;
    let report = run_suite(&family.meta, &surface, &tols);
    let failures = compute_failures(&report, &tols);
    Ok((report, failures))
}

fn cmd_verify(config: &RunConfig) -> Result<u8, Error> {
    let (report, failures) = verify_one(config)?;
    let output = match config.format {
        Format::Json => {
            let mut s = report.to_json_with_failures(&failures);
            s.push('\n');
            s
        }
        Format::Csv => format!("{}\n{}\n", csv::REPORT_HEADER, csv::report_row(&report)),
    };
    write_output(config.out.as_deref(), output.as_bytes())?;
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    if failures.is_empty() {
        Ok(0)
    } else {
        for failure in &failures {
            eprintln!("failed: {failure}");
        }
        Ok(EXIT_VERIFY)
    }
}

fn cmd_sweep(config: &RunConfig) -> Result<u8, Error> {
    if config.family.is_none() {
        return Err(invalid("--family is required for sweep".into()));
    }
    let spec = config.sweep.clone().unwrap_or_default();
    let points = parse_sweep(&spec).map_err(invalid)?;

    // Build per-point configs up front so bad input fails before any work.
    let mut configs = Vec::with_capacity(points.len());
    for assignments in &points {
        let mut point = config.clone();
        for (key, value) in assignments {
            match key.as_str() {
                "m" | "n" | "p" | "q" | "alpha" => point.set(key, value).map_err(invalid)?,
                other => {
                    return Err(invalid(format!("sweep may only assign parameters, got {other:?}")))
                }
            }
        }
        configs.push(point);
    }

    // One worker per parameter point; rows come back in input order.
    let mut rows: Vec<Result<String, Error>> = Vec::with_capacity(configs.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|point| scope.spawn(move || verify_one(point).map(|(r, _)| csv::report_row(&r))))
            .collect();
        for handle in handles {
            rows.push(handle.join().expect("sweep worker"));
        }
    });

    let mut table = String::from(csv::REPORT_HEADER);
    table.push('\n');
    for row in rows {
        table.push_str(&row?);
        table.push('\n');
    }
    write_output(config.out.as_deref(), table.as_bytes())?;
    Ok(0)
}

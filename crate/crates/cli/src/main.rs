//! Batch front end for the disk spectral solver: project or load a
//! right-hand side, solve, apply the forward operator, run verification
//! suites, and emit coefficient/field/report CSV files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error,
//! 3 numerical-resolution (truncation/quadrature) error.

mod config;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use fracdisk_core::basis::{
    read_coefficients, write_coefficients, BasisIndex, CoefficientField, L0Convention, Mu, Point,
};
use fracdisk_core::operators::{apply_forward, OperatorParams};
use fracdisk_core::regularity::{regularity_gain_report, write_report, BesovIndices};
use fracdisk_core::solver::solve;
use fracdisk_core::verify::{decay_rhs, run_suite, VerifyConfig, SUITE_NAMES};
use fracdisk_core::Error;

use config::{RunConfig, UsageError};

const EXIT_OK: i32 = 0;
const EXIT_VERIFY_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_RESOLUTION: i32 = 3;

fn usage() -> String {
    format!(
        "usage: fracdisk <solve|apply|verify|report> [flags]\n\
         flags: --config FILE --alpha X --k1 X --k2 X --max-chain N\n\
         \x20      --rhs SPEC --out PREFIX --grid NRxNPHI --suite NAME\n\
         \x20      --radial-nodes N --angular-nodes N\n\
         rhs specs: a coefficient CSV path, or constant | basis:l,n,mu | decay:p,q\n\
         suites: {} | all",
        SUITE_NAMES.join(" | ")
    )
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(run(&args));
}

fn run(args: &[String]) -> i32 {
    let Some(command) = args.first() else {
        eprintln!("{}", usage());
        return EXIT_USAGE;
    };
    let cfg = match RunConfig::from_args(&args[1..]) {
        Ok(cfg) => cfg,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}\n{}", usage());
            return EXIT_USAGE;
        }
    };
    let params = match OperatorParams::new(cfg.alpha, cfg.k1, cfg.k2) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match command.as_str() {
        "solve" => cmd_solve(&cfg, params),
        "apply" => cmd_apply(&cfg, params),
        "verify" => cmd_verify(&cfg, params),
        "report" => cmd_report(&cfg, params),
        other => {
            eprintln!("error: unknown command '{other}'\n{}", usage());
            return EXIT_USAGE;
        }
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n{}", usage());
            EXIT_USAGE
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Resolution(_) | Error::Truncation(_) => EXIT_RESOLUTION,
                _ => EXIT_USAGE,
            }
        }
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

fn parse_mu(text: &str) -> Result<Mu, CliError> {
    match text {
        "1" | "+1" => Ok(Mu::Cos),
        "-1" => Ok(Mu::Sin),
        other => Err(CliError::Usage(format!("mu must be +1 or -1, got '{other}'"))),
    }
}

/// Materialize the right-hand side: a named built-in or a coefficient file.
fn load_rhs(cfg: &RunConfig, params: OperatorParams) -> Result<CoefficientField, CliError> {
    let spec = cfg
        .rhs
        .as_deref()
        .ok_or_else(|| CliError::Usage("--rhs is required for this command".into()))?;
    let beta = params.alpha / 2.0;
    if spec == "constant" {
        let mut f = CoefficientField::new(beta, L0Convention::Raw);
        f.set(BasisIndex::at(0, 0, Mu::Cos), 1.0);
        return Ok(f);
    }
    if let Some(rest) = spec.strip_prefix("basis:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!("basis rhs needs l,n,mu, got '{rest}'")));
        }
        let l: u32 = parts[0]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad l in '{rest}'")))?;
        let n: u32 = parts[1]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad n in '{rest}'")))?;
        let mu = parse_mu(parts[2])?;
        let mut f = CoefficientField::new(beta, L0Convention::Raw);
        f.set(BasisIndex::new(l, n, mu).map_err(CliError::Lib)?, 1.0);
        return Ok(f);
    }
    if let Some(rest) = spec.strip_prefix("decay:") {
        let (p, q) = rest
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("decay rhs needs p,q, got '{rest}'")))?;
        let p: f64 = p.parse().map_err(|_| CliError::Usage(format!("bad p in '{rest}'")))?;
        let q: f64 = q.parse().map_err(|_| CliError::Usage(format!("bad q in '{rest}'")))?;
        return Ok(decay_rhs(p, q, params.alpha, cfg.max_chain)?);
    }
    // Anything else is a coefficient file path.
    let file = File::open(spec).map_err(|e| CliError::Lib(Error::Io(e)))?;
    let field = read_coefficients(&mut BufReader::new(file), beta, L0Convention::Raw)?;
    if (field.beta() - beta).abs() > 1e-9 {
        return Err(CliError::Usage(format!(
            "coefficient file carries beta = {} but alpha/2 = {beta}",
            field.beta()
        )));
    }
    Ok(field.to_convention(L0Convention::Raw))
}

fn out_prefix(cfg: &RunConfig) -> Result<&PathBuf, CliError> {
    cfg.out
        .as_ref()
        .ok_or_else(|| CliError::Usage("--out PREFIX is required for this command".into()))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    prefix.with_file_name(name)
}

/// A list of (x, y, value) evaluations on a polar grid, ready for CSV
/// export. Grid radii sit at cell midpoints, strictly inside the disk, so
/// weight singularities at the boundary are never touched.
struct SampledField {
    value_name: &'static str,
    rows: Vec<(f64, f64, f64)>,
}

impl SampledField {
    fn on_polar_grid(
        value_name: &'static str,
        grid: (usize, usize),
        eval: impl Fn(Point) -> f64,
    ) -> SampledField {
        let (nr, nphi) = grid;
        let mut rows = Vec::with_capacity(nr * nphi);
        for i in 0..nr {
            let r = (i as f64 + 0.5) / nr as f64;
            for j in 0..nphi {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / nphi as f64;
                let p = Point::from_polar(r, phi);
                rows.push((p.x, p.y, eval(p)));
            }
        }
        SampledField { value_name, rows }
    }

    fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "x,y,{}", self.value_name)?;
        for (x, y, v) in &self.rows {
            writeln!(w, "{x},{y},{v}")?;
        }
        Ok(())
    }
}

fn write_coeff_csv(path: &Path, field: &CoefficientField) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_coefficients(&mut w, field)?;
    Ok(())
}

/// Solve L(u~) = f; writes the solution coefficients and the sampled u~
/// field, and prints the coefficient-space residual.
fn cmd_solve(cfg: &RunConfig, params: OperatorParams) -> Result<i32, CliError> {
    let f = load_rhs(cfg, params)?;
    let prefix = out_prefix(cfg)?;
    let u = solve(&f, params, cfg.max_chain)?;
    let residual = apply_forward(&u, params).max_abs_diff(&f);
    write_coeff_csv(&with_suffix(prefix, ".coeff.csv"), &u)?;
    SampledField::on_polar_grid("u_tilde", cfg.grid, |p| u.eval(p, true))
        .write_csv(&with_suffix(prefix, ".field.csv"))?;
    println!("residual {residual:e}");
    Ok(EXIT_OK)
}

/// Apply the forward operator to a solution coefficient file.
fn cmd_apply(cfg: &RunConfig, params: OperatorParams) -> Result<i32, CliError> {
    let spec = cfg
        .rhs
        .as_deref()
        .ok_or_else(|| CliError::Usage("--rhs must name the input coefficient file".into()))?;
    let file = File::open(spec).map_err(|e| CliError::Lib(Error::Io(e)))?;
    let u = read_coefficients(
        &mut BufReader::new(file),
        params.alpha / 2.0,
        L0Convention::Halved,
    )?;
    if (u.beta() - params.alpha / 2.0).abs() > 1e-9 {
        return Err(CliError::Usage(format!(
            "coefficient file carries beta = {} but alpha/2 = {}",
            u.beta(),
            params.alpha / 2.0
        )));
    }
    let prefix = out_prefix(cfg)?;
    let f = apply_forward(&u, params);
    write_coeff_csv(&with_suffix(prefix, ".coeff.csv"), &f)?;
    SampledField::on_polar_grid("value", cfg.grid, |p| f.eval(p, false))
        .write_csv(&with_suffix(prefix, ".field.csv"))?;
    Ok(EXIT_OK)
}

/// Run a named property suite and emit a machine-readable pass/fail CSV.
fn cmd_verify(cfg: &RunConfig, params: OperatorParams) -> Result<i32, CliError> {
    let suite = cfg
        .suite
        .as_deref()
        .ok_or_else(|| CliError::Usage("--suite is required for verify".into()))?;
    if suite != "all" && !SUITE_NAMES.contains(&suite) {
        return Err(CliError::Usage(format!("unknown suite '{suite}'")));
    }
    let mut vcfg = VerifyConfig::new(params);
    vcfg.radial_nodes = cfg.radial_nodes;
    vcfg.angular_nodes = cfg.angular_nodes;
    vcfg.max_chain = cfg.max_chain;
    if let Some(rest) = cfg.rhs.as_deref().and_then(|s| s.strip_prefix("decay:")) {
        if let Some((p, q)) = rest.split_once(',') {
            vcfg.decay_p = p.parse().map_err(|_| CliError::Usage("bad decay p".into()))?;
            vcfg.decay_q = q.parse().map_err(|_| CliError::Usage("bad decay q".into()))?;
        }
    }
    let checks = run_suite(suite, &vcfg)?;
    let mut rows = String::from("suite,check,status,max_error\n");
    let mut all_passed = true;
    for c in &checks {
        all_passed &= c.passed;
        rows.push_str(&format!(
            "{},{},{},{}\n",
            c.suite,
            c.name,
            if c.passed { "pass" } else { "fail" },
            c.max_err
        ));
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, &rows)?,
        None => print!("{rows}"),
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

/// Solve the decay right-hand side and write the regularity report CSV.
fn cmd_report(cfg: &RunConfig, params: OperatorParams) -> Result<i32, CliError> {
    let spec = cfg
        .rhs
        .as_deref()
        .ok_or_else(|| CliError::Usage("report needs --rhs decay:p,q".into()))?;
    let Some(rest) = spec.strip_prefix("decay:") else {
        return Err(CliError::Usage(format!("report needs a decay rhs, got '{spec}'")));
    };
    let (p, q) = rest
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("decay rhs needs p,q, got '{rest}'")))?;
    let p: f64 = p.parse().map_err(|_| CliError::Usage("bad decay p".into()))?;
    let q: f64 = q.parse().map_err(|_| CliError::Usage("bad decay q".into()))?;
    let out = out_prefix(cfg)?.clone();

    let f = decay_rhs(p, q, params.alpha, cfg.max_chain)?;
    let u = solve(&f, params, cfg.max_chain)?;
    let grid = [BesovIndices::new(0.0, 0.0)?, BesovIndices::new(0.25, 0.25)?];
    let report = regularity_gain_report(&f, &u, params.alpha, &grid)?;
    let mut w = BufWriter::new(File::create(&out)?);
    write_report(&mut w, &report)?;
    Ok(EXIT_OK)
}

//! Command-line front end. The `fcs` binary is a thin wrapper around [`run`].
//!
//! Models are named `aklt`, `product:<d>:<index>`, `random:<d>:<r>:<seed>`,
//! `identity:<r>`, or given as a path to a JSON model file (see
//! [`ModelSpec`]). Exit codes: 0 all checks pass, 1 a check failed or the
//! model data is mathematically invalid, 2 I/O, parse or usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cpmap::{choi, iterate, markov_check, unitality_defect, CpMapData, Word, CP_TOL};
use crate::error::Error;
use crate::kernel::{functional_matrix, gamma_condition_probe, kernel_basis, quotient_profile};
use crate::linalg::{isometry_defect, ComplexMatrix};
use crate::models::{
    aklt_model, aklt_spin_operators, basis_product_model, identity_channel, product_model, random_model, LocalState,
};
use crate::opprod::{embed_reduced, extend_model, gamma_n_presentation, op_product_eval};
use crate::random;
use crate::reconstruct::{
    correlation, fixed_point_unit, invariant_functional, omega_eval, shift_invariance_check, transfer_spectrum,
    BoundaryState,
};

/// Default equality tolerance; `FCS_TOL` overrides it.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Acceptance threshold of `opprod-check`.
pub const OPPROD_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "fcs", about = "Finitely correlated states on spin chains", version)]
struct Cli {
    /// Seed for all randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps and verification suites.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run CP, unitality, Markov, fixed-point and shift-invariance checks.
    Verify {
        model: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print ω(a₁ ⊗ … ⊗ a_n) for a word file as "re im".
    Expect { model: String, word: PathBuf },
    /// Two-point correlation sweep as CSV.
    Correlate {
        model: String,
        /// Built-in name (Sx, Sy, Sz for aklt) or path to a matrix file.
        #[arg(long)]
        obs: String,
        /// Second observable (defaults to --obs).
        #[arg(long)]
        obs2: Option<String>,
        #[arg(long, default_value_t = 10)]
        rmax: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Transfer-map spectrum as JSON.
    Spectrum { model: String },
    /// Entanglement-kernel report for finite windows.
    Kernel {
        model: String,
        #[arg(long, default_value_t = 2)]
        mleft: usize,
        #[arg(long, default_value_t = 2)]
        nright: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Compare the operator-product evaluation with direct iteration.
    #[command(name = "opprod-check")]
    OpprodCheck {
        model: String,
        #[arg(short = 'n', default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("unknown observable `{0}`")]
    UnknownObservable(String),
    #[error(transparent)]
    Model(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) => match e {
                Error::ShapeMismatch(_)
                | Error::WindowTooLarge { .. }
                | Error::InvalidArgument(_)
                | Error::IndexOutOfRange { .. } => 2,
                _ => 1,
            },
            _ => 2,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn env_tol() -> Result<Option<f64>, CliError> {
    match std::env::var("FCS_TOL") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("FCS_TOL must be a positive number, got `{s}`"))),
        Err(_) => Ok(None),
    }
}

fn resolve_tol(flag: Option<f64>, default: f64) -> Result<f64, CliError> {
    if let Some(t) = flag {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {t}")));
        }
        return Ok(t);
    }
    Ok(env_tol()?.unwrap_or(default))
}

fn dispatch(cli: &Cli) -> Result<(String, i32), CliError> {
    let jobs = cli.jobs.max(1);
    match &cli.command {
        Command::Verify { model, tol } => {
            let tol = resolve_tol(*tol, DEFAULT_TOL)?;
            let loaded = load_model(model)?;
            cmd_verify(&loaded, tol, cli.seed, jobs)
        }
        Command::Expect { model, word } => {
            let loaded = load_model(model)?;
            let word = read_word(word)?;
            cmd_expect(&loaded, &word).map(|s| (s, 0))
        }
        Command::Correlate {
            model,
            obs,
            obs2,
            rmax,
            csv,
        } => {
            let loaded = load_model(model)?;
            let a = resolve_observable(&loaded, obs)?;
            let b = match obs2 {
                Some(name) => resolve_observable(&loaded, name)?,
                None => a.clone(),
            };
            let text = cmd_correlate(&loaded, &a, &b, *rmax, jobs)?;
            match csv {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    Ok((String::new(), 0))
                }
                None => Ok((text, 0)),
            }
        }
        Command::Spectrum { model } => {
            let loaded = load_model(model)?;
            cmd_spectrum(&loaded).map(|s| (s, 0))
        }
        Command::Kernel {
            model,
            mleft,
            nright,
            samples,
        } => {
            let loaded = load_model(model)?;
            cmd_kernel(&loaded, *mleft, *nright, *samples, cli.seed).map(|s| (s, 0))
        }
        Command::OpprodCheck { model, n, trials, tol } => {
            let tol = resolve_tol(*tol, OPPROD_TOL)?;
            let loaded = load_model(model)?;
            cmd_opprod_check(&loaded, *n, *trials, cli.seed, tol)
        }
    }
}

/// On-disk model description. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Isometry entries, row-major, shape (d·r) × r.
    #[serde(default, rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi0: Option<Vec<[f64; 2]>>,
    /// Density matrix rows for a mixed product state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<Vec<Vec<[f64; 2]>>>,
    /// Superoperator rows, shape r² × (d·r)².
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superop: Option<Vec<Vec<[f64; 2]>>>,
    /// For kind "isometry" without "V": seeded random isometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Isometry,
    Product,
    Aklt,
    Superop,
}

fn pairs_to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

fn complex_to_pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, Error> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n_cols) {
        return Err(Error::ShapeMismatch("matrix rows have different lengths".into()));
    }
    let data: Vec<Complex64> = rows.iter().flat_map(|r| pairs_to_complex(r)).collect();
    ComplexMatrix::from_vec(n_rows, n_cols, data)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn require<T: Clone>(field: &Option<T>, name: &str) -> Result<T, Error> {
    field
        .clone()
        .ok_or_else(|| Error::InvalidArgument(format!("model file is missing \"{name}\"")))
}

impl ModelSpec {
    pub fn build(&self) -> Result<CpMapData, Error> {
        match self.kind {
            ModelKind::Aklt => Ok(aklt_model().cp),
            ModelKind::Isometry => {
                let d = require(&self.d, "d")?;
                let r = require(&self.r, "r")?;
                match (&self.v, self.seed) {
                    (Some(v), _) => {
                        let m = ComplexMatrix::from_vec(v.len() / r.max(1), r, pairs_to_complex(v)).map_err(|_| {
                            Error::ShapeMismatch(format!("\"V\" has {} entries, expected {}", v.len(), d * r * r))
                        })?;
                        crate::cpmap::cp_from_isometry(&m, d, r)
                    }
                    (None, Some(seed)) => {
                        if d == 0 || r == 0 {
                            return Err(Error::InvalidArgument("dimensions must be positive".into()));
                        }
                        Ok(random_model(d, r, seed))
                    }
                    (None, None) => Err(Error::InvalidArgument("isometry model needs \"V\" or \"seed\"".into())),
                }
            }
            ModelKind::Product => {
                let state = match (&self.psi0, &self.rho0) {
                    (Some(psi), _) => LocalState::Pure(pairs_to_complex(psi)),
                    (None, Some(rho)) => LocalState::Mixed(rows_to_matrix(rho)?),
                    (None, None) => {
                        return Err(Error::InvalidArgument(
                            "product model needs \"psi0\" or \"rho0\"".into(),
                        ))
                    }
                };
                if let Some(d) = self.d {
                    if d != state.dim() {
                        return Err(Error::ShapeMismatch(format!(
                            "state has dimension {}, d = {d}",
                            state.dim()
                        )));
                    }
                }
                Ok(product_model(state)?.cp)
            }
            ModelKind::Superop => {
                let d = require(&self.d, "d")?;
                let r = require(&self.r, "r")?;
                let sup = rows_to_matrix(&require(&self.superop, "superop")?)?;
                let cp = CpMapData::from_superop(sup, d, r)?;
                cp.with_dilation()?;
                Ok(cp)
            }
        }
    }

    /// Serializable description reproducing `cp` exactly.
    pub fn from_cp(cp: &CpMapData) -> Self {
        let base = Self {
            kind: ModelKind::Superop,
            d: Some(cp.d()),
            r: Some(cp.r()),
            v: None,
            psi0: None,
            rho0: None,
            superop: None,
            seed: None,
        };
        match cp.dilation() {
            Some(dil) if dil.multiplicity == 1 => Self {
                kind: ModelKind::Isometry,
                v: Some(complex_to_pairs(dil.v.as_slice())),
                ..base
            },
            _ => Self {
                superop: Some(matrix_to_rows(cp.superop())),
                ..base
            },
        }
    }
}

/// A model together with the name it was loaded under.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub name: String,
    pub cp: CpMapData,
    pub is_aklt: bool,
}

fn parse_usize(part: &str, name: &str) -> Result<usize, CliError> {
    part.parse()
        .map_err(|_| CliError::Usage(format!("`{part}` is not a valid {name} in model name")))
}

/// Resolves a built-in model name or reads a model file.
pub fn load_model(name: &str) -> Result<LoadedModel, CliError> {
    let parts: Vec<&str> = name.split(':').collect();
    let builtin = |cp: CpMapData, is_aklt: bool| LoadedModel {
        name: name.to_string(),
        cp,
        is_aklt,
    };
    match parts.as_slice() {
        ["aklt"] => return Ok(builtin(aklt_model().cp, true)),
        ["product", d, index] => {
            let d = parse_usize(d, "dimension")?;
            let index = parse_usize(index, "index")?;
            return Ok(builtin(basis_product_model(d, index)?.cp, false));
        }
        ["random", d, r, seed] => {
            let d = parse_usize(d, "dimension")?;
            let r = parse_usize(r, "dimension")?;
            let seed = parts[3]
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("`{seed}` is not a valid seed")))?;
            if d == 0 || r == 0 {
                return Err(CliError::Usage("dimensions must be positive".into()));
            }
            return Ok(builtin(random_model(d, r, seed), false));
        }
        ["identity", r] => {
            let r = parse_usize(r, "dimension")?;
            if r == 0 {
                return Err(CliError::Usage("dimension must be positive".into()));
            }
            return Ok(builtin(identity_channel(r), false));
        }
        _ => {}
    }
    let spec: ModelSpec = read_json(Path::new(name))?;
    let cp = spec.build()?;
    Ok(LoadedModel {
        name: name.to_string(),
        cp,
        is_aklt: spec.kind == ModelKind::Aklt,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<[f64; 2]>> = read_json(path)?;
    Ok(rows_to_matrix(&rows)?)
}

/// Reads a word file: a JSON list of d×d matrices, each a list of rows of
/// `[re, im]` pairs.
pub fn read_word(path: &Path) -> Result<Word, CliError> {
    let letters: Vec<Vec<Vec<[f64; 2]>>> = read_json(path)?;
    let letters = letters
        .iter()
        .map(|m| rows_to_matrix(m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Word::new(letters))
}

fn resolve_observable(model: &LoadedModel, name: &str) -> Result<ComplexMatrix, CliError> {
    if model.is_aklt {
        let (sx, sy, sz) = aklt_spin_operators();
        match name {
            "Sx" => return Ok(sx),
            "Sy" => return Ok(sy),
            "Sz" => return Ok(sz),
            _ => {}
        }
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(CliError::UnknownObservable(name.to_string()));
    }
    let m = read_matrix(path)?;
    let d = model.cp.d();
    if m.shape() != (d, d) {
        return Err(Error::ShapeMismatch(format!("observable is {:?}, model has d = {d}", m.shape())).into());
    }
    Ok(m)
}

/// Runs `f` over `items` on up to `jobs` scoped threads, keeping order.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn check_json(name: &str, residual: f64, pass: bool) -> Value {
    json!({ "name": name, "residual": residual, "pass": pass })
}

fn random_word(d: usize, len: usize, rng: &mut impl Rng) -> Word {
    Word::new((0..len).map(|_| random::gaussian_matrix(d, d, rng)).collect())
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[derive(Clone, Copy)]
enum Suite {
    Structure,
    Markov,
    Reconstruction,
}

fn cmd_verify(model: &LoadedModel, tol: f64, seed: u64, jobs: usize) -> Result<(String, i32), CliError> {
    let cp = &model.cp;
    let suites = [Suite::Structure, Suite::Markov, Suite::Reconstruction];
    let results = parallel_map(&suites, jobs, |suite| match suite {
        Suite::Structure => verify_structure(cp, tol),
        Suite::Markov => verify_markov(cp, tol, seed),
        Suite::Reconstruction => verify_reconstruction(cp, tol, seed),
    });
    let mut checks = Vec::new();
    for r in results {
        checks.extend(r?);
    }
    let all_pass = checks.iter().all(|c| c["pass"] == json!(true));
    let spectrum = transfer_spectrum(cp)?;
    let report = json!({
        "model": model.name,
        "d": cp.d(),
        "r": cp.r(),
        "tolerance": tol,
        "checks": checks,
        "transfer_eigenvalues": spectrum.eigenvalues.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    Ok((to_pretty(&report), if all_pass { 0 } else { 1 }))
}

fn verify_structure(cp: &CpMapData, tol: f64) -> Result<Vec<Value>, CliError> {
    let mut checks = Vec::new();
    match cp.with_dilation() {
        Ok(dilated) => {
            let v = dilated.stinespring().expect("dilation attached");
            let defect = isometry_defect(v);
            checks.push(check_json("isometry", defect, defect <= CP_TOL.max(tol)));
        }
        Err(e) => {
            checks.push(json!({ "name": "isometry", "residual": Value::Null, "pass": false, "error": e.to_string() }))
        }
    }
    let unital = unitality_defect(cp);
    checks.push(check_json("unitality", unital, unital <= tol));
    let c = choi(cp);
    let min = c.min_eigenvalue();
    checks.push(check_json("complete_positivity", (-min).max(0.0), c.is_cp(tol)));
    Ok(checks)
}

fn verify_markov(cp: &CpMapData, tol: f64, seed: u64) -> Result<Vec<Value>, CliError> {
    let mut rng = random::rng(seed);
    let (d, r) = (cp.d(), cp.r());
    let mut worst: f64 = 0.0;
    for total in 1..=4 {
        for m in 0..=total {
            let x = random_word(d, m, &mut rng);
            let y = random_word(d, total - m, &mut rng);
            let t = random::gaussian_matrix(r, r, &mut rng);
            worst = worst.max(markov_check(cp, &x, &y, &t, tol)?.residual);
        }
    }
    Ok(vec![check_json("markov", worst, worst <= tol)])
}

fn verify_reconstruction(cp: &CpMapData, tol: f64, seed: u64) -> Result<Vec<Value>, CliError> {
    let mut checks = Vec::new();
    match fixed_point_unit(cp, tol, 100_000) {
        Ok(fp) => {
            let mut c = check_json("fixed_point", 0.0, true);
            c["multiplicity"] = json!(fp.multiplicity);
            checks.push(c);
        }
        Err(e) => checks
            .push(json!({ "name": "fixed_point", "residual": Value::Null, "pass": false, "error": e.to_string() })),
    }
    let xi = match invariant_functional(cp, tol.max(1e-12) * 10.0) {
        Ok(xi) => {
            checks.push(check_json("invariant_functional", 0.0, true));
            xi
        }
        Err(e) => {
            checks.push(json!({ "name": "invariant_functional", "residual": Value::Null, "pass": false, "error": e.to_string() }));
            return Ok(checks);
        }
    };
    let mut rng = random::rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (mut shift, mut tower): (f64, f64) = (0.0, 0.0);
    for len in 1..=3 {
        let word = hermitian_word(cp.d(), len, &mut rng);
        let check = shift_invariance_check(cp, &xi, &word, tol)?;
        shift = shift.max(check.shift_residual);
        tower = tower.max(check.tower_residual);
    }
    checks.push(check_json("shift_invariance", shift, shift <= tol));
    checks.push(check_json("tower_consistency", tower, tower <= tol));
    Ok(checks)
}

fn hermitian_word(d: usize, len: usize, rng: &mut impl Rng) -> Word {
    Word::new((0..len).map(|_| random::random_hermitian(d, rng)).collect())
}

/// ξ for a model: the invariant state when unique, I/r otherwise.
fn boundary_for(cp: &CpMapData) -> (BoundaryState, bool) {
    match invariant_functional(cp, 1e-9) {
        Ok(xi) => (xi, false),
        Err(_) => (BoundaryState::maximally_mixed(cp.r()), true),
    }
}

fn format_complex(z: Complex64) -> String {
    format!("{:.16e} {:.16e}", z.re, z.im)
}

fn cmd_expect(model: &LoadedModel, word: &Word) -> Result<String, CliError> {
    let xi = invariant_functional(&model.cp, 1e-9)?;
    let value = omega_eval(&model.cp, &xi, word)?;
    Ok(format!("{}\n", format_complex(value)))
}

fn cmd_correlate(
    model: &LoadedModel,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rmax: usize,
    jobs: usize,
) -> Result<String, CliError> {
    let xi = invariant_functional(&model.cp, 1e-9)?;
    let seps: Vec<usize> = (0..=rmax).collect();
    let values = parallel_map(&seps, jobs, |&r| correlation(&model.cp, &xi, a, b, r));
    let mut out = String::from("r,re_corr,im_corr,abs_corr\n");
    for (r, v) in seps.iter().zip(values) {
        let z = v?;
        writeln!(out, "{r},{:.16e},{:.16e},{:.16e}", z.re, z.im, z.norm()).expect("writing to a String");
    }
    Ok(out)
}

fn cmd_spectrum(model: &LoadedModel) -> Result<String, CliError> {
    let spectrum = transfer_spectrum(&model.cp)?;
    let report = json!({
        "model": model.name,
        "eigenvalues": spectrum.eigenvalues.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "moduli": spectrum.eigenvalues.iter().map(|z| z.norm()).collect::<Vec<_>>(),
        "gap_modulus": spectrum.gap_modulus,
    });
    Ok(to_pretty(&report))
}

fn cmd_kernel(model: &LoadedModel, mleft: usize, nright: usize, samples: usize, seed: u64) -> Result<String, CliError> {
    let cp = &model.cp;
    let (xi, fallback) = boundary_for(cp);
    let profile = quotient_profile(cp, &xi, mleft, nright, 1e-8)?;
    let f = functional_matrix(cp, &xi, mleft, nright)?;
    let kernel = kernel_basis(&f, 1e-8);
    let probe = gamma_condition_probe(cp, &xi, nright, mleft, samples, seed)?;
    let report = json!({
        "model": model.name,
        "m_left": mleft,
        "n_right": nright,
        "kernel_dim": kernel.dim(),
        "quotient_dims": profile.quotient_dims,
        "stabilized": profile.stabilized,
        "boundary_fallback": fallback,
        "gamma_probe": {
            "value": probe.value,
            "degenerate": probe.degenerate,
            "samples": samples,
            "note": "sampled minimum over unit quotient representatives; an upper bound on the infimum, not a certificate",
        },
    });
    Ok(to_pretty(&report))
}

fn cmd_opprod_check(
    model: &LoadedModel,
    n: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<(String, i32), CliError> {
    let cp = &model.cp;
    let em = extend_model(cp)?;
    let (xi, degenerate) = boundary_for(cp);
    let mut rng = random::rng(seed);
    let (d, r) = (cp.d(), cp.r());
    let mut max_residual: f64 = 0.0;
    let mut gamma_residual: f64 = 0.0;
    for _ in 0..trials {
        let len = if n == 0 { 0 } else { rng.random_range(1..=n) };
        let word = random_word(d, len, &mut rng);
        let t = random::gaussian_matrix(r, r, &mut rng);
        let via = op_product_eval(&em, &word, &t)?;
        let direct = embed_reduced(&iterate(cp, &word, &t)?);
        max_residual = max_residual.max(via.distance(&direct));
        let g = gamma_n_presentation(&em, &xi, &word)?;
        let w = omega_eval(cp, &xi, &word)?;
        gamma_residual = gamma_residual.max((g - w).norm());
    }
    let h = em.hypotheses;
    let pass = max_residual <= tol && gamma_residual <= tol && h.holds(tol);
    let report = json!({
        "model": model.name,
        "n": n,
        "trials": trials,
        "seed": seed,
        "max_residual": max_residual,
        "gamma_residual": gamma_residual,
        "tolerance": tol,
        "degenerate_fixed_space": degenerate,
        "hypotheses": {
            "commuting_residual": h.commuting_residual,
            "u_residual": h.u_residual,
            "compression_residual": h.compression_residual,
            "isometry_residual": h.isometry_residual,
            "sigma_xi_residual": h.sigma_xi_residual,
        },
        "pass": pass,
    });
    Ok((to_pretty(&report), if pass { 0 } else { 1 }))
}

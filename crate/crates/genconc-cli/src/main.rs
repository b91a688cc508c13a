//! genconc: concurrence and entanglement of formation for states whose
//! reduced spectra carry at most two eigenvalue levels.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use genconc::json::{
    complex_to_json, ComplexJson, DensityMatrixJson, EnsembleJson, MixedInputJson, ParamsJson,
    PureStateJson, RecursiveParamsJson, SymParamsJson,
};
use genconc::{
    antidiagonal_ansatz, biform_vec, build_recursive, build_sym, concurrence_closed, derive_p,
    eof_from_concurrence, eof_two_level, equalized_decomposition, explicit_vs_derived,
    gen_concurrence, gen_determinant, lambda_spectrum, mixed_concurrence, optimal_decomposition,
    p16_explicit, spectrum_structure, sym_concurrence, verify_identities, verify_sym_identities,
    wootters_concurrence, BiformMatrix, DComputableParams, Error, Family, LambdaMethod, PureState,
    SymFamilyParams,
};

#[derive(Parser)]
#[command(
    name = "genconc",
    version,
    about = "Concurrence and entanglement of formation for two-level reduced spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family state from parameters and report its invariants.
    Construct(ConstructArgs),
    /// Analyze a pure state through its reduced spectrum.
    Pure(PureArgs),
    /// Concurrence and entanglement of formation of a mixed state.
    Mixed(MixedArgs),
    /// Optimal and equal-concurrence decompositions of a mixed state.
    Decompose(DecomposeArgs),
    /// Print a bilinear form as triplets or a dense matrix.
    Pmatrix(PmatrixArgs),
    /// Check the closed-form identities on random family states.
    Verify(VerifyArgs),
    /// Generate random family parameters or an in-class density.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Sym,
    Recursive,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::Sym => Family::Sym,
            FamilyArg::Recursive => Family::Recursive,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FamilyArg::Sym => "sym",
            FamilyArg::Recursive => "recursive",
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    /// Parameter JSON file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Rescale the parameters to a unit-norm state instead of rejecting
    /// non-normalized input.
    #[arg(long)]
    normalize: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct PureArgs {
    /// Pure-state JSON file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Relative eigenvalue clustering tolerance, in (0, 1e-2].
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct MixedArgs {
    /// Density-matrix or ensemble JSON file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Recursion depth of the family (1 for sym).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    k: u32,
    /// Also extract the spectrum by the two independent matrix methods and
    /// require agreement.
    #[arg(long)]
    check_methods: bool,
    /// Method agreement tolerance, in (0, 1e-2].
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Density-matrix or ensemble JSON file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Recursion depth of the family (1 for sym).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    k: u32,
    /// Random decompositions to try as a cross-check; 0 disables it.
    #[arg(long, default_value_t = 0)]
    trials: usize,
    /// Decomposition size for the random search; the support rank when 0.
    #[arg(long, default_value_t = 0)]
    size: usize,
    /// Seed for the random search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct PmatrixArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Recursion depth of the family (1 for sym).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    k: u32,
    /// Print the fixed conventional 16×16 table instead of the derived
    /// form (sym only).
    #[arg(long, conflicts_with = "ansatz")]
    explicit: bool,
    /// Print the anti-diagonal ±1 description with its comparison report
    /// (recursive only).
    #[arg(long)]
    ansatz: bool,
    /// Emit the dense matrix instead of sparse triplets.
    #[arg(long)]
    dense: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Recursion depth of the family (1 for sym).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    k: u32,
    /// Number of random parameter points.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Identity tolerance, in (0, 1e-2].
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Recursion depth of the family (1 for sym).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    k: u32,
    /// Number of parameter points to draw.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Emit one random in-class density of this rank instead of parameters.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

enum Outcome {
    Ok(String),
    VerifyFailed(String),
}

/// Prints to stdout, treating a closed pipe as a normal early exit.
fn emit(text: &str) {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(1);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Ok(Outcome::VerifyFailed(text)) => {
            emit(&text);
            eprintln!("error: identity verification failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Construct(args) => cmd_construct(args).map(Outcome::Ok),
        Command::Pure(args) => cmd_pure(args).map(Outcome::Ok),
        Command::Mixed(args) => cmd_mixed(args).map(Outcome::Ok),
        Command::Decompose(args) => cmd_decompose(args).map(Outcome::Ok),
        Command::Pmatrix(args) => cmd_pmatrix(args).map(Outcome::Ok),
        Command::Verify(args) => cmd_verify(args),
        Command::Sample(args) => cmd_sample(args).map(Outcome::Ok),
    }
}

fn read_text(input: &Option<PathBuf>) -> Result<String, Error> {
    match input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Validation(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Validation(format!("invalid JSON input: {e}")))
}

#[derive(Deserialize)]
struct SampledParamsIn {
    params: Vec<ParamsJson>,
}

#[derive(Deserialize)]
struct SampledDensityIn {
    density: DensityMatrixJson,
}

/// Accepts a bare parameter object or the `sample` wrapper holding exactly one.
fn parse_params(text: &str) -> Result<ParamsJson, Error> {
    match serde_json::from_str::<ParamsJson>(text) {
        Ok(params) => Ok(params),
        Err(err) => {
            if let Ok(wrapper) = serde_json::from_str::<SampledParamsIn>(text) {
                let mut params = wrapper.params;
                return match params.len() {
                    1 => Ok(params.pop().expect("length checked")),
                    n => Err(Error::Validation(format!(
                        "input holds {n} parameter sets; pass exactly one"
                    ))),
                };
            }
            Err(Error::Validation(format!("invalid JSON input: {err}")))
        }
    }
}

/// Accepts a density matrix, a weighted ensemble, or the `sample --rank` wrapper.
fn parse_mixed_input(text: &str) -> Result<MixedInputJson, Error> {
    match serde_json::from_str::<MixedInputJson>(text) {
        Ok(input) => Ok(input),
        Err(err) => {
            if let Ok(wrapper) = serde_json::from_str::<SampledDensityIn>(text) {
                return Ok(MixedInputJson::Density(wrapper.density));
            }
            Err(Error::Validation(format!("invalid JSON input: {err}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

fn checked_tol(tol: Option<f64>, default: f64) -> Result<f64, Error> {
    let t = tol.unwrap_or(default);
    if !(t > 0.0 && t <= 1e-2) {
        return Err(Error::Validation(format!(
            "tolerance {t} outside (0, 1e-2]"
        )));
    }
    Ok(t)
}

fn checked_family_k(family: FamilyArg, k: u32) -> Result<usize, Error> {
    let k = k as usize;
    if family == FamilyArg::Sym && k != 1 {
        return Err(Error::Validation(
            "the sym family is defined for k = 1 only".into(),
        ));
    }
    Ok(k)
}

fn family_form(family: FamilyArg, k: usize) -> Result<BiformMatrix, Error> {
    derive_p(family.family(), k)
}

fn random_sym(rng: &mut ChaCha8Rng) -> SymFamilyParams {
    let mut z = || Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    SymFamilyParams {
        a1: z(),
        b1: z(),
        c1: z(),
        d1: z(),
        b: z(),
        e: z(),
    }
}

fn random_recursive(k: usize, rng: &mut ChaCha8Rng) -> DComputableParams {
    let mut z = || Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    DComputableParams {
        a: z(),
        c: z(),
        d: z(),
        ladder: (0..k).map(|_| (z(), z())).collect(),
    }
}

fn field_rows(out: &mut String, rows: &[(&str, String)]) {
    out.push_str("field,value\n");
    for (key, value) in rows {
        let _ = writeln!(out, "{key},{value}");
    }
}

#[derive(Serialize)]
struct ConstructOut {
    family: &'static str,
    k: usize,
    local_dim: usize,
    input_norm: f64,
    bracket: ComplexJson,
    concurrence: f64,
    eof: f64,
    state: PureStateJson,
}

fn cmd_construct(args: ConstructArgs) -> Result<String, Error> {
    let params = parse_params(&read_text(&args.input)?)?;
    let out = match params {
        ParamsJson::Sym(sp) => {
            let p = sp.to_params();
            let psi = build_sym(&p, args.normalize)?;
            let pn = p.normalized()?;
            let d = sym_concurrence(&pn);
            ConstructOut {
                family: "sym",
                k: 1,
                local_dim: psi.local_dim(),
                input_norm: genconc::assemble_sym(&p).norm(),
                bracket: complex_to_json(genconc::sym_bracket(&pn)),
                concurrence: d,
                eof: eof_from_concurrence(d, 2)?,
                state: PureStateJson::from_state(&psi),
            }
        }
        ParamsJson::Recursive(rp) => {
            let p = rp.to_params()?;
            let psi = build_recursive(&p, args.normalize)?;
            let pn = p.normalized()?;
            let d = concurrence_closed(&pn)?;
            ConstructOut {
                family: "recursive",
                k: pn.k(),
                local_dim: psi.local_dim(),
                input_norm: genconc::assemble_recursive(&p)?.norm(),
                bracket: complex_to_json(genconc::bracket_form(&pn)),
                concurrence: d,
                eof: eof_from_concurrence(d, 1 << pn.k())?,
                state: PureStateJson::from_state(&psi),
            }
        }
    };
    Ok(match args.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => {
            let mut text = String::new();
            field_rows(
                &mut text,
                &[
                    ("family", out.family.to_string()),
                    ("k", out.k.to_string()),
                    ("local_dim", out.local_dim.to_string()),
                    ("input_norm", out.input_norm.to_string()),
                    ("bracket_re", out.bracket[0].to_string()),
                    ("bracket_im", out.bracket[1].to_string()),
                    ("concurrence", out.concurrence.to_string()),
                    ("eof", out.eof.to_string()),
                ],
            );
            text.push('\n');
            text.push_str("alpha,re,im\n");
            let n = out.state.n;
            for (r, row) in out.state.a.iter().enumerate() {
                for (c, z) in row.iter().enumerate() {
                    let _ = writeln!(text, "{},{},{}", r * n + c + 1, z[0], z[1]);
                }
            }
            text.pop();
            text
        }
    })
}

#[derive(Serialize)]
struct SpectrumOut {
    lambda1: f64,
    mult1: usize,
    lambda2: f64,
    mult2: usize,
}

#[derive(Serialize)]
struct PureOut {
    local_dim: usize,
    spectrum: SpectrumOut,
    gen_determinant: f64,
    eof: f64,
    concurrence: Option<f64>,
    eof_from_concurrence: Option<f64>,
    wootters: Option<f64>,
}

fn cmd_pure(args: PureArgs) -> Result<String, Error> {
    let tol = checked_tol(args.tol, genconc::tol::CLUSTER_DEFAULT)?;
    let state: PureStateJson = parse_json(&read_text(&args.input)?)?;
    let psi = state.to_state(false)?;
    let spectrum = spectrum_structure(&psi, tol)?;
    let concurrence = match gen_concurrence(&spectrum) {
        Ok(d) => Some(d),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let eof_d = match concurrence {
        Some(d) => Some(eof_from_concurrence(d, spectrum.mult1)?),
        None => None,
    };
    let wootters = if psi.local_dim() == 2 {
        Some(wootters_concurrence(&psi)?)
    } else {
        None
    };
    let out = PureOut {
        local_dim: psi.local_dim(),
        spectrum: SpectrumOut {
            lambda1: spectrum.lambda1,
            mult1: spectrum.mult1,
            lambda2: spectrum.lambda2,
            mult2: spectrum.mult2,
        },
        gen_determinant: gen_determinant(&spectrum),
        eof: eof_two_level(&spectrum),
        concurrence,
        eof_from_concurrence: eof_d,
        wootters,
    };
    Ok(match args.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let mut text = String::new();
            field_rows(
                &mut text,
                &[
                    ("local_dim", out.local_dim.to_string()),
                    ("lambda1", out.spectrum.lambda1.to_string()),
                    ("mult1", out.spectrum.mult1.to_string()),
                    ("lambda2", out.spectrum.lambda2.to_string()),
                    ("mult2", out.spectrum.mult2.to_string()),
                    ("gen_determinant", out.gen_determinant.to_string()),
                    ("eof", out.eof.to_string()),
                    ("concurrence", opt(out.concurrence)),
                    ("eof_from_concurrence", opt(out.eof_from_concurrence)),
                    ("wootters", opt(out.wootters)),
                ],
            );
            text.pop();
            text
        }
    })
}

#[derive(Serialize)]
struct MethodsOut {
    tau_takagi: Vec<f64>,
    rho_p_eig: Vec<f64>,
    r_matrix: Vec<f64>,
    max_disagreement: f64,
}

#[derive(Serialize)]
struct MixedOut {
    family: &'static str,
    k: usize,
    lambdas: Vec<f64>,
    raw: f64,
    clamped: f64,
    eof: f64,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    methods: Option<MethodsOut>,
}

fn cmd_mixed(args: MixedArgs) -> Result<String, Error> {
    let k = checked_family_k(args.family, args.k)?;
    let tol = checked_tol(args.tol, genconc::tol::METHOD_AGREE)?;
    let p = family_form(args.family, k)?;
    let input = parse_mixed_input(&read_text(&args.input)?)?;
    let rho = input.to_density()?;
    let result = mixed_concurrence(&rho, &p)?;

    let methods = if args.check_methods {
        let tau = lambda_spectrum(&rho, &p, LambdaMethod::TauTakagi)?;
        let eig = lambda_spectrum(&rho, &p, LambdaMethod::RhoPEig)?;
        let rmat = lambda_spectrum(&rho, &p, LambdaMethod::RMatrix)?;
        let max_disagreement = tau
            .lambdas
            .iter()
            .zip(&eig.lambdas)
            .zip(&rmat.lambdas)
            .map(|((&a, &b), &c)| (a - b).abs().max((a - c).abs()).max((b - c).abs()))
            .fold(0.0f64, f64::max);
        if max_disagreement > tol {
            return Err(Error::Numerical(format!(
                "spectrum methods disagree by {max_disagreement:.3e} (tol {tol:.3e})"
            )));
        }
        Some(MethodsOut {
            tau_takagi: tau.lambdas,
            rho_p_eig: eig.lambdas,
            r_matrix: rmat.lambdas,
            max_disagreement,
        })
    } else {
        None
    };

    let out = MixedOut {
        family: args.family.name(),
        k,
        lambdas: result.lambdas,
        raw: result.raw,
        clamped: result.clamped,
        eof: result.eof,
        exact: result.exact,
        methods,
    };
    Ok(match args.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => {
            let mut text = String::new();
            let mut rows = vec![
                ("family", out.family.to_string()),
                ("k", out.k.to_string()),
                ("raw", out.raw.to_string()),
                ("clamped", out.clamped.to_string()),
                ("eof", out.eof.to_string()),
                ("exact", out.exact.to_string()),
            ];
            if let Some(m) = &out.methods {
                rows.push(("max_disagreement", m.max_disagreement.to_string()));
            }
            field_rows(&mut text, &rows);
            text.push('\n');
            if let Some(m) = &out.methods {
                text.push_str("i,lambda,tau_takagi,rho_p_eig,r_matrix\n");
                for (i, &l) in out.lambdas.iter().enumerate() {
                    let _ = writeln!(
                        text,
                        "{},{},{},{},{}",
                        i + 1,
                        l,
                        m.tau_takagi[i],
                        m.rho_p_eig[i],
                        m.r_matrix[i]
                    );
                }
            } else {
                text.push_str("i,lambda\n");
                for (i, &l) in out.lambdas.iter().enumerate() {
                    let _ = writeln!(text, "{},{}", i + 1, l);
                }
            }
            text.pop();
            text
        }
    })
}

#[derive(Serialize)]
struct OptimalOut {
    overlaps: Vec<f64>,
    member_concurrence: Vec<f64>,
    ensemble: EnsembleJson,
}

#[derive(Serialize)]
struct EqualizedOut {
    member_concurrence: Vec<f64>,
    ensemble: EnsembleJson,
}

#[derive(Serialize)]
struct BruteForceOut {
    trials: usize,
    size: usize,
    seed: u64,
    min: f64,
}

#[derive(Serialize)]
struct DecomposeOut {
    family: &'static str,
    k: usize,
    lambdas: Vec<f64>,
    raw: f64,
    optimal: OptimalOut,
    equalized: Option<EqualizedOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<BruteForceOut>,
}

fn member_concurrences(ens: &genconc::Ensemble, p: &BiformMatrix) -> Result<Vec<f64>, Error> {
    ens.states()
        .iter()
        .map(|z| {
            let w = z.norm_squared();
            let value = biform_vec(z, p)?.norm();
            Ok(if w > 0.0 { value / w } else { 0.0 })
        })
        .collect()
}

fn cmd_decompose(args: DecomposeArgs) -> Result<String, Error> {
    let k = checked_family_k(args.family, args.k)?;
    let p = family_form(args.family, k)?;
    let input = parse_mixed_input(&read_text(&args.input)?)?;
    let rho = input.to_density()?;
    let result = mixed_concurrence(&rho, &p)?;

    let optimal = optimal_decomposition(&rho, &p)?;
    let rank = optimal.len();
    let overlaps: Vec<f64> = optimal
        .states()
        .iter()
        .map(|z| biform_vec(z, &p).map(|v| v.norm()))
        .collect::<Result<_, _>>()?;
    let optimal_out = OptimalOut {
        member_concurrence: member_concurrences(&optimal, &p)?,
        overlaps,
        ensemble: EnsembleJson::from_ensemble(&optimal),
    };

    let equalized = if result.raw >= 0.0 {
        let ens = equalized_decomposition(&rho, &p)?;
        Some(EqualizedOut {
            member_concurrence: member_concurrences(&ens, &p)?,
            ensemble: EnsembleJson::from_ensemble(&ens),
        })
    } else {
        None
    };

    let brute_force = if args.trials > 0 {
        let size = if args.size == 0 { rank } else { args.size };
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let min = genconc::brute_force_min(&rho, &p, args.trials, size, &mut rng)?;
        Some(BruteForceOut {
            trials: args.trials,
            size,
            seed: args.seed,
            min,
        })
    } else {
        None
    };

    let out = DecomposeOut {
        family: args.family.name(),
        k,
        lambdas: result.lambdas,
        raw: result.raw,
        optimal: optimal_out,
        equalized,
        brute_force,
    };
    Ok(match args.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => {
            let mut text = String::new();
            let mut rows = vec![
                ("family", out.family.to_string()),
                ("k", out.k.to_string()),
                ("raw", out.raw.to_string()),
                ("rank", rank.to_string()),
            ];
            if let Some(bf) = &out.brute_force {
                rows.push(("brute_force_min", bf.min.to_string()));
            }
            field_rows(&mut text, &rows);
            text.push('\n');
            text.push_str("member,weight,overlap,concurrence,kind\n");
            for (i, ws) in out.optimal.ensemble.states.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "{},{},{},{},optimal",
                    i + 1,
                    ws.weight,
                    out.optimal.overlaps[i],
                    out.optimal.member_concurrence[i]
                );
            }
            if let Some(eq) = &out.equalized {
                for (i, ws) in eq.ensemble.states.iter().enumerate() {
                    let _ = writeln!(
                        text,
                        "{},{},{},{},equalized",
                        i + 1,
                        ws.weight,
                        ws.weight * eq.member_concurrence[i],
                        eq.member_concurrence[i]
                    );
                }
            }
            text.pop();
            text
        }
    })
}

#[derive(Serialize)]
struct AnsatzReportOut {
    literal_range_in_bounds: bool,
    minus_rows: Vec<usize>,
    global_sign: f64,
    support_matches: usize,
    support_mismatches: usize,
    mismatch_rows: Vec<usize>,
    off_support: usize,
    probe_max_dev: f64,
}

#[derive(Serialize)]
struct PmatrixOut {
    family: &'static str,
    k: usize,
    dim: usize,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<(usize, usize, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dense: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    differs_from_derived: Option<Vec<(usize, usize, f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<AnsatzReportOut>,
}

fn cmd_pmatrix(args: PmatrixArgs) -> Result<String, Error> {
    let k = checked_family_k(args.family, args.k)?;
    if args.explicit && args.family != FamilyArg::Sym {
        return Err(Error::Validation(
            "the explicit 16×16 table exists for the sym family only".into(),
        ));
    }
    if args.ansatz && args.family != FamilyArg::Recursive {
        return Err(Error::Validation(
            "the anti-diagonal description applies to the recursive family only".into(),
        ));
    }

    let (p, kind, differs, report) = if args.explicit {
        (
            p16_explicit(),
            "explicit",
            Some(explicit_vs_derived()?),
            None,
        )
    } else if args.ansatz {
        let (p, r) = antidiagonal_ansatz(k)?;
        (
            p,
            "ansatz",
            None,
            Some(AnsatzReportOut {
                literal_range_in_bounds: r.literal_range_in_bounds,
                minus_rows: r.minus_rows,
                global_sign: r.global_sign,
                support_matches: r.support_matches,
                support_mismatches: r.support_mismatches,
                mismatch_rows: r.mismatch_rows,
                off_support: r.off_support,
                probe_max_dev: r.probe_max_dev,
            }),
        )
    } else {
        (family_form(args.family, k)?, "derived", None, None)
    };

    let out = PmatrixOut {
        family: args.family.name(),
        k,
        dim: p.dim(),
        kind,
        entries: (!args.dense).then(|| p.triplets()),
        dense: args.dense.then(|| {
            let m = p.to_dense();
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
                .collect()
        }),
        differs_from_derived: differs,
        report,
    };
    Ok(match args.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => {
            let mut text = String::new();
            if let Some(r) = &out.report {
                field_rows(
                    &mut text,
                    &[
                        ("family", out.family.to_string()),
                        ("k", out.k.to_string()),
                        ("dim", out.dim.to_string()),
                        ("kind", out.kind.to_string()),
                        (
                            "literal_range_in_bounds",
                            r.literal_range_in_bounds.to_string(),
                        ),
                        ("global_sign", r.global_sign.to_string()),
                        ("support_matches", r.support_matches.to_string()),
                        ("support_mismatches", r.support_mismatches.to_string()),
                        ("off_support", r.off_support.to_string()),
                        ("probe_max_dev", r.probe_max_dev.to_string()),
                    ],
                );
                text.push('\n');
            }
            if let Some(entries) = &out.entries {
                text.push_str("row,col,value\n");
                for &(r, c, v) in entries {
                    let _ = writeln!(text, "{r},{c},{v}");
                }
            } else if let Some(dense) = &out.dense {
                for row in dense {
                    let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(text, "{}", cells.join(","));
                }
            }
            text.pop();
            text
        }
    })
}

#[derive(Serialize)]
struct VerifyOut {
    family: &'static str,
    k: usize,
    samples: usize,
    seed: u64,
    tol: f64,
    det_residual_max: f64,
    charpoly_residual_max: f64,
    multiplicity_ok: bool,
    closed_vs_spectral_max: f64,
    biform_dev_max: f64,
    pass: bool,
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome, Error> {
    let k = checked_family_k(args.family, args.k)?;
    let tol = checked_tol(args.tol, 1e-8)?;
    if args.samples == 0 {
        return Err(Error::Validation("sample count must be positive".into()));
    }
    let p = family_form(args.family, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let mut det_max: f64 = 0.0;
    let mut charpoly_max: f64 = 0.0;
    let mut mult_ok = true;
    let mut spectral_max: f64 = 0.0;
    let mut biform_max: f64 = 0.0;

    for _ in 0..args.samples {
        let (report, psi, d_closed) = match args.family {
            FamilyArg::Sym => {
                let params = random_sym(&mut rng).normalized()?;
                (
                    verify_sym_identities(&params, tol)?,
                    build_sym(&params, false)?,
                    sym_concurrence(&params),
                )
            }
            FamilyArg::Recursive => {
                let params = random_recursive(k, &mut rng).normalized()?;
                (
                    verify_identities(&params, tol)?,
                    build_recursive(&params, false)?,
                    concurrence_closed(&params)?,
                )
            }
        };
        det_max = det_max.max(report.det_residual);
        charpoly_max = charpoly_max.max(report.charpoly_residual);
        mult_ok &= report.multiplicity_ok;

        let spectrum = spectrum_structure(&psi, genconc::tol::CLUSTER_DEFAULT)?;
        let d_spectral = gen_concurrence(&spectrum)?;
        spectral_max = spectral_max.max((d_spectral - d_closed).abs());

        let value = genconc::biform(&psi, &p)?.norm();
        biform_max = biform_max.max((value - d_closed).abs());
    }

    let pass = mult_ok && det_max <= tol && charpoly_max <= tol && spectral_max <= tol
        && biform_max <= tol;
    let out = VerifyOut {
        family: args.family.name(),
        k,
        samples: args.samples,
        seed: args.seed,
        tol,
        det_residual_max: det_max,
        charpoly_residual_max: charpoly_max,
        multiplicity_ok: mult_ok,
        closed_vs_spectral_max: spectral_max,
        biform_dev_max: biform_max,
        pass,
    };
    let text = match args.format {
        FormatArg::Json => to_json(&out),
        FormatArg::Csv => {
            let mut text = String::new();
            field_rows(
                &mut text,
                &[
                    ("family", out.family.to_string()),
                    ("k", out.k.to_string()),
                    ("samples", out.samples.to_string()),
                    ("seed", out.seed.to_string()),
                    ("tol", out.tol.to_string()),
                    ("det_residual_max", out.det_residual_max.to_string()),
                    (
                        "charpoly_residual_max",
                        out.charpoly_residual_max.to_string(),
                    ),
                    ("multiplicity_ok", out.multiplicity_ok.to_string()),
                    (
                        "closed_vs_spectral_max",
                        out.closed_vs_spectral_max.to_string(),
                    ),
                    ("biform_dev_max", out.biform_dev_max.to_string()),
                    ("pass", out.pass.to_string()),
                ],
            );
            text.pop();
            text
        }
    };
    Ok(if pass {
        Outcome::Ok(text)
    } else {
        Outcome::VerifyFailed(text)
    })
}

#[derive(Serialize)]
struct SampleParamsOut {
    family: &'static str,
    k: usize,
    seed: u64,
    count: usize,
    params: Vec<ParamsJson>,
}

#[derive(Serialize)]
struct SampleDensityOut {
    family: &'static str,
    k: usize,
    seed: u64,
    rank: usize,
    weights: Vec<f64>,
    density: DensityMatrixJson,
}

fn cmd_sample(args: SampleArgs) -> Result<String, Error> {
    if args.format == FormatArg::Csv {
        return Err(Error::Validation(
            "sample emits parameter or density JSON only".into(),
        ));
    }
    let k = checked_family_k(args.family, args.k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let draw_state = |rng: &mut ChaCha8Rng| -> Result<(ParamsJson, PureState), Error> {
        match args.family {
            FamilyArg::Sym => {
                let params = random_sym(rng).normalized()?;
                Ok((
                    ParamsJson::Sym(SymParamsJson::from_params(&params)),
                    build_sym(&params, false)?,
                ))
            }
            FamilyArg::Recursive => {
                let params = random_recursive(k, rng).normalized()?;
                Ok((
                    ParamsJson::Recursive(RecursiveParamsJson::from_params(&params)),
                    build_recursive(&params, false)?,
                ))
            }
        }
    };

    match args.rank {
        None => {
            if args.count == 0 {
                return Err(Error::Validation("count must be positive".into()));
            }
            let mut params = Vec::with_capacity(args.count);
            for _ in 0..args.count {
                params.push(draw_state(&mut rng)?.0);
            }
            Ok(to_json(&SampleParamsOut {
                family: args.family.name(),
                k,
                seed: args.seed,
                count: args.count,
                params,
            }))
        }
        Some(rank) => {
            let pattern = genconc::FamilyPattern::new(args.family.family(), k)?;
            if rank == 0 || rank > pattern.param_count() {
                return Err(Error::Validation(format!(
                    "rank must lie in [1, {}] for this family",
                    pattern.param_count()
                )));
            }
            let mut weights: Vec<f64> = (0..rank)
                .map(|_| -(rng.random::<f64>().max(f64::MIN_POSITIVE)).ln())
                .collect();
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
            let mut pairs = Vec::with_capacity(rank);
            for &w in &weights {
                let (_, psi) = draw_state(&mut rng)?;
                pairs.push((w, psi.to_vector()));
            }
            let ens = genconc::Ensemble::from_weighted(&pairs)?;
            let rho = ens.density()?;
            Ok(to_json(&SampleDensityOut {
                family: args.family.name(),
                k,
                seed: args.seed,
                rank,
                weights,
                density: DensityMatrixJson::from_density(&rho),
            }))
        }
    }
}

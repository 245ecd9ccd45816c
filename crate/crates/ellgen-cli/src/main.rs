//! `ellgen`: elliptic genera of toric varieties and Calabi-Yau hypersurfaces.
//!
//! Exit codes: 0 when every check passes, 2 on a verification failure, 1 on
//! bad input.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde_json::{json, Value};

use ellgen::hypersurface::checks::{elliptic_transform_check, mirror_sign_report, mirror_transform_report};
use ellgen::hypersurface::numeric::{jacobi_numeric_check, jacobi_samples, limit_check};
use ellgen::hypersurface::{ell_cy, min_law_order, mirror, CYFamily, CyMethod};
use ellgen::jacobi::{
    basis_dim, chi_degenerate_pair, decompose, dim_table, hodge_slice, product_genera, q0_rank_analysis, span_check,
};
use ellgen::lattice_sum::EnumerationPlan;
use ellgen::theta::checks::{g_minus_one_check, theta_quasi_periodicity, theta_s_check};
use ellgen::toric_genus::cone_identity::cone_identity_check;
use ellgen::toric_genus::numeric::{gamma02_numeric_check, parity_check, seeded_check};
use ellgen::toric_genus::{ell_toric, ell_toric_limit, ellhat, p2_identity_sides, verify_bijection};
use ellgen::{Error, Genus, Report};

use input::{load, Input, Loaded};

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Inconsistent(_)
            | Error::Mismatch(_)
            | Error::PalindromyFailure(_)
            | Error::BijectionFailure(_)
            | Error::NoKernel(_)
            | Error::InternalInconsistency(_) => 2,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ellgen", version, about = "Elliptic genera of toric varieties and Calabi-Yau hypersurfaces")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Highest power of q computed.
    #[arg(long, global = true)]
    q_order: Option<i64>,
    /// Lattice-sum engines: keep y exponents in [-W, d + W] of the cleared genus.
    #[arg(long, global = true)]
    y_window: Option<i64>,
    /// Lattice-sum engines: last m-shell summed.
    #[arg(long, global = true)]
    m_bound: Option<i64>,
    /// Lattice-sum engines: extra shells that must contribute nothing.
    #[arg(long, global = true)]
    shells: Option<i64>,
    /// Tolerance of numeric checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed of the numeric sample points.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Sum over lattice points of M.
    Lattice,
    /// nu -> 0 limit of the theta-quotient cone sum.
    Limit,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Fan or polytope JSON file, or the name of a bundled fixture.
    input: String,
    #[arg(long, value_enum)]
    engine: Option<Engine>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus of the toric variety of a fan.
    ToricGenus {
        #[command(flatten)]
        src: Source,
        /// Print the y = -1 normalization instead.
        #[arg(long)]
        ellhat: bool,
    },
    /// Genus of the anticanonical hypersurface of a reflexive polytope.
    CyGenus {
        #[command(flatten)]
        src: Source,
        /// Use the mirror polytope.
        #[arg(long)]
        mirror: bool,
    },
    /// Mirror sign and transformation law of a reflexive pair.
    MirrorCheck {
        #[command(flatten)]
        src: Source,
    },
    /// Series-level y -> y q law of a genus; without input, of theta and G(-1).
    EllipticLawCheck {
        input: Option<String>,
        #[arg(long, value_enum)]
        engine: Option<Engine>,
    },
    /// Coefficients of a genus in the weak Jacobi basis.
    Decompose {
        #[command(flatten)]
        src: Source,
    },
    /// The q^0 slice of a genus.
    HodgeSlice {
        #[command(flatten)]
        src: Source,
        /// Also require chi_0 = 0 in odd dimension.
        #[arg(long)]
        calabi_yau: bool,
    },
    /// The one-dimensional cone identity with t in [-W, W].
    IdentityEq11 {
        #[arg(long, default_value_t = 10)]
        t_window: i64,
    },
    /// The divisor-sum identity of the projective plane and its bijection.
    IdentityP2,
    /// Dimensions of weight 0 weak Jacobi forms of index k = 0..max_k.
    DimTable {
        #[arg(long, default_value_t = 6)]
        max_k: u32,
    },
    /// Whether q^0 slices determine forms of index d/2.
    RankAnalysis {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 15)]
        max_dim: usize,
        /// Rank of the products of K3, X6, X8 instead.
        #[arg(long)]
        span: bool,
    },
    /// Two unions of products with equal q^0 slices and different genera.
    DegeneratePair {
        #[arg(long, default_value_t = 12)]
        dim: usize,
    },
    /// Theta S-law, closed form against series, and the Jacobi laws at seeded samples.
    NumericJacobi {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// The level-2 law and the parity of the y = -1 theta form at seeded samples.
    NumericGamma02 {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

struct Output {
    text: String,
    json: Value,
    passed: bool,
}

impl Output {
    fn value(text: String, json: Value) -> Self {
        Output { text, json, passed: true }
    }

    fn reports(mut reports: Vec<Report>, seed: u64) -> Self {
        for r in reports.iter_mut() {
            if let Value::Object(m) = &mut r.detail {
                m.entry("seed").or_insert(json!(seed));
            }
        }
        let passed = reports.iter().all(Report::passed);
        let text = reports.iter().map(Report::to_text).collect();
        let json = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            Value::Array(reports.iter().map(Report::to_json).collect())
        };
        Output { text, json, passed }
    }
}

fn check_opts(o: &Opts) -> Result<(), CliError> {
    if let Some(q) = o.q_order {
        if q < 1 {
            return Err(CliError::input("--q-order must be at least 1"));
        }
    }
    if let Some(t) = o.tol {
        if !(t > 0.0) {
            return Err(CliError::input("--tol must be positive"));
        }
    }
    for (name, v) in [("--y-window", o.y_window), ("--m-bound", o.m_bound)] {
        if v.is_some_and(|v| v < 0) {
            return Err(CliError::input(format!("{} must be nonnegative", name)));
        }
    }
    if o.shells.is_some_and(|v| v < 1) {
        return Err(CliError::input("--shells must be at least 1"));
    }
    Ok(())
}

fn plan(o: &Opts, q: i64, d: usize) -> EnumerationPlan {
    let mut p = EnumerationPlan::new(q);
    if let Some(m) = o.m_bound {
        p.m_bound = m;
    }
    if let Some(s) = o.shells {
        p.stabilization_shells = s;
    }
    p.y_window = o.y_window.map(|w| (-w, d as i64 + w));
    p
}

fn family(o: &Opts, loaded: &Loaded, q: i64, engine: Option<Engine>) -> Result<CYFamily, CliError> {
    let Input::Polytope(pair) = &loaded.input else {
        return Err(CliError::input(format!("{}: expected a reflexive polytope", loaded.label)));
    };
    let d = pair.rank().saturating_sub(1);
    let mut f = CYFamily::new(pair.clone(), plan(o, q, d), loaded.label.clone())?;
    if engine == Some(Engine::Lattice) {
        f.method = CyMethod::LatticeSum;
    }
    Ok(f)
}

fn genus(o: &Opts, loaded: &Loaded, engine: Option<Engine>, default_q: i64) -> Result<Genus, CliError> {
    let q = o.q_order.unwrap_or(default_q);
    let mut g = match &loaded.input {
        Input::Fan(fan) => match engine.unwrap_or(Engine::Lattice) {
            Engine::Lattice => ell_toric(fan, &plan(o, q, fan.rank))?,
            Engine::Limit => ell_toric_limit(fan, q)?,
        },
        Input::Polytope(_) => ell_cy(&family(o, loaded, q, engine)?)?,
    };
    g.label = loaded.label.clone();
    Ok(g)
}

fn input_dim(loaded: &Loaded) -> usize {
    match &loaded.input {
        Input::Fan(fan) => fan.rank,
        Input::Polytope(pair) => pair.rank().saturating_sub(1),
    }
}

/// Default order for the `y -> y q` laws: enough to reach `q^1` past the window.
fn law_q(loaded: &Loaded) -> i64 {
    min_law_order(input_dim(loaded)).max(4)
}

fn genus_output(g: &Genus) -> Output {
    let euler = g.euler_number().ok().map(|e| e.to_string());
    let mut json = g.to_json();
    json["q_order"] = json!(g.q_order());
    json["euler_number"] = json!(euler);
    let text = format!("{}euler number: {}\n", g.to_text(), euler.as_deref().unwrap_or("not constant in q"));
    Output::value(text, json)
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let o = &cli.opts;
    check_opts(o)?;
    let seed = o.seed;
    let out = match &cli.command {
        Command::ToricGenus { src, ellhat: hat } => {
            let loaded = load(&src.input)?;
            if !matches!(loaded.input, Input::Fan(_)) {
                return Err(CliError::input(format!("{}: expected a fan", loaded.label)));
            }
            let g = genus(o, &loaded, src.engine, 4)?;
            if *hat {
                let s = ellhat(&g)?;
                let json = json!({"label": g.label, "d": g.d, "ellhat": s.to_json(), "is_zero": s.is_zero()});
                let series = if s.is_zero() { format!("0 to q^{}\n", s.trunc_order()) } else { s.to_text() };
                Output::value(format!("# Ell-hat of {}\n{}", g.label, series), json)
            } else {
                genus_output(&g)
            }
        }
        Command::CyGenus { src, mirror: m } => {
            let loaded = load(&src.input)?;
            let mut f = family(o, &loaded, o.q_order.unwrap_or(4), src.engine)?;
            if *m {
                f = mirror(&f);
            }
            genus_output(&ell_cy(&f)?)
        }
        Command::MirrorCheck { src } => {
            let loaded = load(&src.input)?;
            let f = family(o, &loaded, o.q_order.unwrap_or(law_q(&loaded)), src.engine)?;
            let g = ell_cy(&f)?;
            let gs = ell_cy(&mirror(&f))?;
            Output::reports(vec![mirror_sign_report(&g, &gs)?, mirror_transform_report(&g, &gs)?], seed)
        }
        Command::EllipticLawCheck { input: None, .. } => {
            let q = o.q_order.unwrap_or(10);
            Output::reports(vec![theta_quasi_periodicity(q)?, g_minus_one_check(o.q_order.unwrap_or(50))?], seed)
        }
        Command::EllipticLawCheck { input: Some(path), engine } => {
            let loaded = load(path)?;
            let g = genus(o, &loaded, *engine, law_q(&loaded))?;
            Output::reports(vec![elliptic_transform_check(&g)?], seed)
        }
        Command::Decompose { src } => {
            let g = genus(o, &load(&src.input)?, src.engine, 4)?;
            let dec = decompose(&g)?;
            Output::value(dec.to_text(), dec.to_json())
        }
        Command::HodgeSlice { src, calabi_yau } => {
            let g = genus(o, &load(&src.input)?, src.engine, 1)?;
            let h = hodge_slice(&g)?;
            if *calabi_yau {
                h.check_calabi_yau().map_err(|e| CliError::failed(e.to_string()))?;
            }
            let chi: Vec<String> = h.chi.iter().map(|c| c.to_string()).collect();
            Output::value(format!("d = {}: chi = ({})\n", h.d, chi.join(", ")), h.to_json())
        }
        Command::IdentityEq11 { t_window } => {
            if *t_window < 0 {
                return Err(CliError::input("--t-window must be nonnegative"));
            }
            Output::reports(vec![cone_identity_check(o.q_order.unwrap_or(10), (-t_window, *t_window))?], seed)
        }
        Command::IdentityP2 => {
            let q = o.q_order.unwrap_or(40);
            if q < 2 {
                return Err(CliError::input("identity-p2 needs --q-order >= 2"));
            }
            let (lhs, rhs) = p2_identity_sides(q)?;
            let diff = lhs.first_difference(&rhs).map(|(q2, _, _)| q2 / 2);
            let b = verify_bijection(q)?;
            let detail = json!({
                "q_order": q,
                "sides_equal": diff.is_none(),
                "first_difference_q": diff,
                "bijection_d_max": b.d_max,
                "bijection_rows": b.rows,
            });
            Output::reports(vec![Report::new("identity-p2", diff.is_none(), detail)], seed)
        }
        Command::DimTable { max_k } => {
            let t = dim_table(*max_k);
            let text = t.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ") + "\n";
            Output::value(text, json!({"max_k": max_k, "dimensions": t}))
        }
        Command::RankAnalysis { dim, max_dim, span } => {
            let dims: Vec<usize> = match dim {
                Some(d) => vec![*d],
                None if *span => (2..=*max_dim).step_by(2).collect(),
                None => (2..=*max_dim).collect(),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            for d in dims {
                if *span {
                    let products = product_genera(d, o.q_order.unwrap_or(2))?;
                    let r = span_check(d, &products)?;
                    let names: Vec<&str> = products.iter().map(|g| g.label.as_str()).collect();
                    text.push_str(&format!("d = {}: span rank {} of {} ({})\n", d, r.rank_q0, basis_dim(d), names.join(", ")));
                    rows.push(json!({"d": d, "dim_forms": r.dim_forms, "span_rank": r.rank_q0, "products": names}));
                } else {
                    let r = q0_rank_analysis(d)?;
                    let word = if r.determined() { "determined" } else { "not determined" };
                    text.push_str(&format!("d = {}: rank {} of {} ({})\n", d, r.rank_q0, r.dim_forms, word));
                    rows.push(r.to_json());
                }
            }
            Output::value(text, Value::Array(rows))
        }
        Command::DegeneratePair { dim } => {
            let p = chi_degenerate_pair(*dim, o.q_order.unwrap_or(1))?;
            let text = format!("d = {}\n  {}\n= (on q^0)\n  {}\n", p.d, side(&p.positive), side(&p.negative));
            Output::value(text, p.to_json())
        }
        Command::NumericJacobi { src, samples } => {
            let loaded = load(&src.input)?;
            let f = family(o, &loaded, o.q_order.unwrap_or(4), src.engine)?;
            let fan = f.fan()?;
            let g = ell_cy(&f)?;
            let s = jacobi_samples(f.d + 2, 1, seed).remove(0);
            let control = jacobi_numeric_check(&fan, *samples, seed, o.tol.unwrap_or(1e-7), true)?;
            let negative = Report::new("jacobi-law-control", !control.passed(), control.detail.clone());
            Output::reports(
                vec![
                    theta_s_check(s.tau, s.z, o.tol.unwrap_or(1e-10)),
                    limit_check(&fan, &g, Complex::new(0.0, 1.2), Complex::new(0.23, 0.04), o.tol.unwrap_or(1e-5))?,
                    jacobi_numeric_check(&fan, *samples, seed, o.tol.unwrap_or(1e-7), false)?,
                    negative,
                ],
                seed,
            )
        }
        Command::NumericGamma02 { src, samples } => {
            let loaded = load(&src.input)?;
            let Input::Fan(fan) = &loaded.input else {
                return Err(CliError::input(format!("{}: expected a fan", loaded.label)));
            };
            let tol = o.tol.unwrap_or(1e-8);
            Output::reports(
                vec![
                    seeded_check(fan, *samples, seed, tol, "gamma0-2", gamma02_numeric_check)?,
                    seeded_check(fan, *samples, seed, tol, "rho-parity", parity_check)?,
                ],
                seed,
            )
        }
    };
    Ok(out)
}

fn side<T: std::fmt::Display>(v: &[(String, T)]) -> String {
    v.iter().map(|(l, c)| format!("{} {}", c, l)).collect::<Vec<_>>().join(" + ")
}

fn emit(cli: &Cli, out: &Output) -> std::io::Result<()> {
    let body = match cli.opts.format {
        Format::Text => out.text.clone(),
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n",
    };
    match &cli.opts.out {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("error: {}", e);
                return ExitCode::from(1);
            }
            ExitCode::from(if out.passed { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

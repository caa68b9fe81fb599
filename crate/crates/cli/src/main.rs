use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use seesaw_cli::emit;
use seesaw_cli::scenario::{lift_pair, run, sample_taus, Scenario};
use seesaw_cli::spec::{json_arg, parse_lattice, parse_pair, parse_point, parse_poly, parse_sublattice, parse_tau};
use seesaw_cli::CliError;
use seesaw_core::contraction::contract_symbolic;
use seesaw_core::metaplectic::MetaplecticElement;
use seesaw_core::theta::{siegel_theta, theta_lm_direct};
use seesaw_core::weil::rho_matrix;

/// Siegel theta functions, Weil representations and seesaw checks for even lattices.
///
/// Structured arguments take inline JSON, `@file`, or a bare name such as `A1+II11`.
#[derive(Parser)]
#[command(name = "seesaw", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Overrides the scenario tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Overrides the truncation bound B.
    #[arg(long, global = true)]
    bound: Option<f64>,
    /// Replaces the scenario's τ samples by this many seeded ones.
    #[arg(long, global = true)]
    tau_samples: Option<usize>,
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long)]
    lattice: String,
    /// Point of the Grassmannian (for `theta-lm`, on the complement of M).
    #[arg(long)]
    grassmann: Option<String>,
    #[arg(long)]
    poly: Option<String>,
    #[arg(long)]
    tau: String,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Elementary divisors, q-values and cyclic isotropic subgroups.
    DiscInfo {
        #[arg(long)]
        lattice: String,
        /// Largest number of subgroups listed.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// The matrix of ρ_L(g) for g given as "a,b,c,d,branch" with branch + or -.
    WeilMatrix {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    Theta(ThetaArgs),
    ThetaLm {
        #[command(flatten)]
        args: ThetaArgs,
        #[arg(long)]
        sublattice: String,
    },
    /// Symbolic contraction of the scenario's form.
    Contract {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    VerifySeesaw { scenario: PathBuf },
    VerifyRestriction { scenario: PathBuf },
    /// Truncated lifts of both sides of the restriction identity over F_Y.
    NaiveLift { scenario: PathBuf },
    RunScenario { scenario: PathBuf },
}

fn load(cli: &Cli, path: &Path) -> Result<Scenario, CliError> {
    let mut s = Scenario::load(path)?;
    if let Some(t) = cli.tolerance {
        s.tolerance = t;
    }
    if let Some(b) = cli.bound {
        s.bound = b;
    }
    if let Some(n) = cli.tau_samples {
        s.taus = sample_taus(n);
    }
    Ok(s)
}

fn element(s: &str) -> Result<MetaplecticElement, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(CliError::Parse(format!("element `{s}` must be a,b,c,d,branch")));
    }
    let mut n = [0i64; 4];
    for (i, p) in parts[..4].iter().enumerate() {
        n[i] = p.parse().map_err(|_| CliError::Parse(format!("bad matrix entry `{p}`")))?;
    }
    let positive = match parts[4] {
        "+" | "1" | "+1" => true,
        "-" | "-1" => false,
        b => return Err(CliError::Parse(format!("branch `{b}` must be + or -"))),
    };
    Ok(MetaplecticElement::new(n[0], n[1], n[2], n[3], positive)?)
}

fn pair_json(a: &ThetaArgs) -> Result<Option<Value>, CliError> {
    if a.alpha.is_none() && a.beta.is_none() {
        return Ok(None);
    }
    let mut o = serde_json::Map::new();
    for (k, v) in [("alpha", &a.alpha), ("beta", &a.beta)] {
        if let Some(v) = v {
            o.insert(k.to_string(), json_arg(v)?);
        }
    }
    Ok(Some(Value::Object(o)))
}

fn opt_json(s: &Option<String>) -> Result<Option<Value>, CliError> {
    s.as_deref().map(json_arg).transpose()
}

/// Prints the value; `Some(pass)` for verifying commands.
fn execute(cli: &Cli) -> Result<(Value, Option<bool>), CliError> {
    let bound = cli.bound.unwrap_or(16.0);
    match &cli.cmd {
        Cmd::DiscInfo { lattice, cap } => {
            let l = parse_lattice(&json_arg(lattice)?)?;
            let d = l.disc();
            let q: Vec<Value> = d
                .elements()?
                .iter()
                .map(|x| json!({"coset": x.coords, "q": emit::rat(&d.q(x))}))
                .collect();
            let iso: Vec<Value> = d
                .cyclic_isotropic_subgroups()?
                .iter()
                .take(*cap)
                .map(|h| json!({"generators": h.generators().iter().map(|g| g.coords.clone()).collect::<Vec<_>>(), "order": h.order()}))
                .collect();
            Ok((json!({"elementary_divisors": d.divisors(), "order": d.order(), "q_table": q, "isotropic_subgroups": iso}), None))
        }
        Cmd::WeilMatrix { lattice, element: g } => {
            let l = parse_lattice(&json_arg(lattice)?)?;
            let m = rho_matrix(l.disc(), &element(g)?)?;
            let rows: Vec<Value> =
                (0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| emit::complex(m[(i, j)])).collect())).collect();
            Ok((Value::Array(rows), None))
        }
        Cmd::Theta(a) => {
            let l = parse_lattice(&json_arg(&a.lattice)?)?;
            let v = parse_point(&l, opt_json(&a.grassmann)?.as_ref())?;
            let p = parse_poly(opt_json(&a.poly)?.as_ref(), v.b_plus(), v.b_minus())?;
            let pair = parse_pair(pair_json(a)?.as_ref(), l.rank())?;
            let t = siegel_theta(&l, parse_tau(&a.tau)?, &v, &p, &pair, bound)?;
            Ok((emit::theta(&t), None))
        }
        Cmd::ThetaLm { args: a, sublattice } => {
            let l = parse_lattice(&json_arg(&a.lattice)?)?;
            let m = parse_sublattice(&l, &json_arg(sublattice)?)?;
            let mp = m.orthogonal_complement()?;
            let u = parse_point(mp.lattice(), opt_json(&a.grassmann)?.as_ref())?;
            let p = parse_poly(opt_json(&a.poly)?.as_ref(), u.b_plus(), u.b_minus())?;
            let pair = parse_pair(pair_json(a)?.as_ref(), l.rank())?;
            let t = theta_lm_direct(&m, parse_tau(&a.tau)?, &u, &p, &pair, bound)?;
            Ok((emit::theta(&t), None))
        }
        Cmd::Contract { scenario, out } => {
            let s = load(cli, scenario)?;
            let f = s.form.as_ref().ok_or_else(|| CliError::Parse("scenario has no `form`".into()))?;
            let r = contract_symbolic(f, &s.setup.m, &s.setup.p_perp, s.bound)?;
            let v = emit::contraction(&r);
            if let Some(path) = out {
                emit::write(&v, path)?;
            }
            Ok((v, None))
        }
        Cmd::VerifySeesaw { scenario } => {
            let s = load(cli, scenario)?;
            let r = run(&s, Some(&["exact_coordinates", "exppair", "pair_theta", "sep_theta"]))?;
            Ok((r.to_json(), Some(r.pass())))
        }
        Cmd::VerifyRestriction { scenario } => {
            let s = load(cli, scenario)?;
            let r = run(&s, Some(&["restriction"]))?;
            Ok((r.to_json(), Some(r.pass())))
        }
        Cmd::NaiveLift { scenario } => {
            let s = load(cli, scenario)?;
            let (a, b, err) = lift_pair(&s)?;
            let residual = (a - b).norm();
            let pass = residual < s.tolerance + err;
            let v = json!({
                "lhs": emit::complex(a),
                "rhs": emit::complex(b),
                "residual": residual,
                "quadrature_error": err,
                "tolerance": s.tolerance,
                "pass": pass,
            });
            Ok((v, Some(pass)))
        }
        Cmd::RunScenario { scenario } => {
            let s = load(cli, scenario)?;
            let r = run(&s, None)?;
            Ok((r.to_json(), Some(r.pass())))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((v, pass)) => {
            print!("{}", emit::canonical(&v));
            if pass == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

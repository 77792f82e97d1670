use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qembed::algebra::{build_glq, check_chevalley, check_gl_number_weights, check_serre, RelationReport};
use qembed::chains::{build_chain, check_chain, classical_limit_check, ChainKind};
use qembed::spectra::{build_hamiltonian, eigenlevels, fit_rotator, rotator_spectrum, symmetrize, Invariant, LevelScheme};
use qembed::{DeformationParameter, FockBasis};

#[derive(Parser, Debug)]
#[command(name = "qembed", version, about = "q-boson realizations, embedding-chain checks and deformed rotor spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, value_enum, global = true)]
    output: Option<Format>,

    /// Write the result to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
struct QArgs {
    /// Real deformation parameter q > 0
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Phase angle, q = exp(i tau)
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
}

impl QArgs {
    fn parameter(&self) -> Result<DeformationParameter, Failure> {
        let p = match (self.q, self.tau) {
            (Some(q), None) => DeformationParameter::real(q),
            (None, Some(t)) => DeformationParameter::phase(t),
            _ => return Err(Failure::Usage("give exactly one of --q and --tau".into())),
        };
        Ok(p?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Vibrational,
    Rotational,
    Gamma,
    Glq6,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ChainArg {
    Vibrational,
    Rotational,
    Gamma,
}

impl From<ChainArg> for ChainKind {
    fn from(c: ChainArg) -> Self {
        match c {
            ChainArg::Vibrational => ChainKind::Vibrational,
            ChainArg::Rotational => ChainKind::Rotational,
            ChainArg::Gamma => ChainKind::GammaUnstable,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the occupation-number basis of a Fock sector
    Basis {
        /// Number of boson modes
        #[arg(long)]
        modes: usize,
        /// Total boson number N of the sector
        #[arg(long)]
        total: u32,
    },
    /// Check the defining relations of a chain or of gl_q(6)
    Verify {
        #[arg(long, value_enum)]
        chain: VerifyTarget,
        #[command(flatten)]
        q: QArgs,
        /// Total boson number N of the sector
        #[arg(long)]
        total: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Deformed rotor spectrum E_j = K [j]_q [j+1]_q for j = 0..=jmax
    Rotator {
        #[command(flatten)]
        q: QArgs,
        #[arg(long = "K", alias = "k")]
        k: f64,
        #[arg(long)]
        jmax: u32,
    },
    /// Eigenlevels of a chain Hamiltonian built from invariants
    Spectrum {
        #[arg(long, value_enum)]
        chain: ChainArg,
        #[command(flatten)]
        q: QArgs,
        /// Total boson number N of the sector
        #[arg(long)]
        total: u32,
        /// Hamiltonian term `id=coefficient`, id is `so3` or `casimir:<subalgebra>`; repeatable
        #[arg(long = "term", required = true)]
        terms: Vec<String>,
    },
    /// Fit K and tau of the deformed rotor to a level scheme (JSON)
    Fit {
        /// JSON array of {j, energy, weight?} records, or {"levels": [...]}
        #[arg(long)]
        levels: PathBuf,
    },
    /// Distances of chain generators at q = 1 + eps from their q = 1 values
    Limit {
        #[arg(long, value_enum)]
        chain: ChainArg,
        /// Comma-separated, strictly decreasing
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        /// Total boson number N of the sector
        #[arg(long)]
        total: u32,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(qembed::Error),
    Io(String),
}

impl From<qembed::Error> for Failure {
    fn from(e: qembed::Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Domain(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// Rendered output and whether the command's checks passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn report_csv(report: &RelationReport) -> String {
    let mut s = String::from("id,residual,pass\n");
    for e in &report.entries {
        let _ = writeln!(s, "{},{:.6e},{}", e.id, e.residual, e.pass);
    }
    s
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    target: String,
    q: DeformationParameter,
    total: u32,
    dim: usize,
    passed: bool,
    report: &'a RelationReport,
}

fn cmd_basis(modes: usize, total: u32, fmt: Format) -> Result<Outcome, Failure> {
    let basis = FockBasis::new(modes, total)?;
    let body = match fmt {
        Format::Text => {
            let mut s = String::new();
            for (i, st) in basis.states().iter().enumerate() {
                let occ: Vec<String> = st.iter().map(|n| n.to_string()).collect();
                let _ = writeln!(s, "{i} {}", occ.join(" "));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("index");
            for m in 0..modes {
                let _ = write!(s, ",n{m}");
            }
            s.push('\n');
            for (i, st) in basis.states().iter().enumerate() {
                let occ: Vec<String> = st.iter().map(|n| n.to_string()).collect();
                let _ = writeln!(s, "{i},{}", occ.join(","));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct B<'a> {
                modes: usize,
                total: u32,
                dim: usize,
                states: &'a [Vec<u32>],
            }
            json(&B { modes, total, dim: basis.dim(), states: basis.states() })
        }
    };
    Ok(Outcome { body, passed: true })
}

fn cmd_verify(target: VerifyTarget, q: DeformationParameter, total: u32, tol: f64, fmt: Format) -> Result<Outcome, Failure> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let basis = FockBasis::new(6, total)?;
    let (name, report) = match target {
        VerifyTarget::Glq6 => {
            let r = build_glq(&basis, &q)?;
            let mut rep = RelationReport::new(tol);
            rep.extend_prefixed(&r.name, check_chevalley(&r, &q, tol)?);
            rep.extend_prefixed(&r.name, check_serre(&r, &q, tol)?);
            rep.extend_prefixed(&r.name, check_gl_number_weights(&basis, &r, tol)?);
            ("glq6".to_string(), rep)
        }
        other => {
            let kind = match other {
                VerifyTarget::Vibrational => ChainKind::Vibrational,
                VerifyTarget::Rotational => ChainKind::Rotational,
                _ => ChainKind::GammaUnstable,
            };
            let chain = build_chain(kind, &basis, &q)?;
            (kind.name().to_string(), check_chain(&chain, tol)?)
        }
    };
    let passed = report.passed();
    let body = match fmt {
        Format::Text => format!("# {name} {q} N={total} dim={}\n{}", basis.dim(), report.to_text()),
        Format::Csv => report_csv(&report),
        Format::Json => json(&VerifyOutput { target: name, q, total, dim: basis.dim(), passed, report: &report }),
    };
    Ok(Outcome { body, passed })
}

fn cmd_rotator(q: DeformationParameter, k: f64, jmax: u32, fmt: Format) -> Result<Outcome, Failure> {
    let js: Vec<f64> = (0..=jmax).map(f64::from).collect();
    let levels = rotator_spectrum(k, &q, &js)?;
    let body = match fmt {
        Format::Csv | Format::Text => {
            let mut s = String::from("j,energy\n");
            for (j, e) in &levels {
                let _ = writeln!(s, "{j},{e}");
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct L {
                j: f64,
                energy: f64,
            }
            json(&levels.iter().map(|&(j, energy)| L { j, energy }).collect::<Vec<_>>())
        }
    };
    Ok(Outcome { body, passed: true })
}

fn parse_term(s: &str) -> Result<(Invariant, f64), Failure> {
    let (id, coef) = s.rsplit_once('=').ok_or_else(|| Failure::Usage(format!("term {s:?} is not id=coefficient")))?;
    let coef: f64 = coef.parse().map_err(|_| Failure::Usage(format!("bad coefficient in term {s:?}")))?;
    Ok((id.parse()?, coef))
}

fn cmd_spectrum(kind: ChainKind, q: DeformationParameter, total: u32, terms: &[String], fmt: Format) -> Result<Outcome, Failure> {
    let terms = terms.iter().map(|t| parse_term(t)).collect::<Result<Vec<_>, _>>()?;
    let basis = FockBasis::new(6, total)?;
    let h = symmetrize(|p| build_hamiltonian(&build_chain(kind, &basis, p)?, &terms), &q)?;
    let levels = eigenlevels(&h)?;
    let body = match fmt {
        Format::Csv | Format::Text => {
            let mut s = String::from("energy,multiplicity\n");
            for l in &levels {
                let _ = writeln!(s, "{:.12e},{}", l.energy, l.multiplicity);
            }
            s
        }
        Format::Json => json(&levels),
    };
    Ok(Outcome { body, passed: true })
}

fn cmd_fit(path: &PathBuf, fmt: Format) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let scheme: LevelScheme =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let fit = fit_rotator(&scheme)?;
    let body = match fmt {
        Format::Text => {
            let mut s = format!("K {}\ntau {}\nrms {:.6e}\nj energy fitted residual\n", fit.k, fit.tau, fit.rms);
            for r in &fit.residuals {
                let _ = writeln!(s, "{} {} {} {:.6e}", r.j, r.energy, r.fitted, r.residual);
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("j,energy,fitted,residual\n");
            for r in &fit.residuals {
                let _ = writeln!(s, "{},{},{},{:.6e}", r.j, r.energy, r.fitted, r.residual);
            }
            s
        }
        Format::Json => json(&fit),
    };
    Ok(Outcome { body, passed: true })
}

fn cmd_limit(kind: ChainKind, eps: &[f64], total: u32, fmt: Format) -> Result<Outcome, Failure> {
    let basis = FockBasis::new(6, total)?;
    let table = classical_limit_check(kind, &basis, eps)?;
    let passed = table.aggregate_monotone();
    let body = match fmt {
        Format::Csv | Format::Text => {
            let mut s = String::from("generator,eps,distance\n");
            for r in &table.rows {
                let _ = writeln!(s, "{},{:e},{:.6e}", r.generator, r.eps, r.distance);
            }
            s
        }
        Format::Json => json(&table),
    };
    Ok(Outcome { body, passed })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let fmt = cli.output;
    match &cli.command {
        Command::Basis { modes, total } => cmd_basis(*modes, *total, fmt.unwrap_or(Format::Text)),
        Command::Verify { chain, q, total, tol } => cmd_verify(*chain, q.parameter()?, *total, *tol, fmt.unwrap_or(Format::Text)),
        Command::Rotator { q, k, jmax } => cmd_rotator(q.parameter()?, *k, *jmax, fmt.unwrap_or(Format::Csv)),
        Command::Spectrum { chain, q, total, terms } => {
            cmd_spectrum((*chain).into(), q.parameter()?, *total, terms, fmt.unwrap_or(Format::Csv))
        }
        Command::Fit { levels } => cmd_fit(levels, fmt.unwrap_or(Format::Text)),
        Command::Limit { chain, eps, total } => cmd_limit((*chain).into(), eps, *total, fmt.unwrap_or(Format::Csv)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("qembed: {e}");
            return ExitCode::from(e.code());
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.body) {
                eprintln!("qembed: i/o error: {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{}", outcome.body),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

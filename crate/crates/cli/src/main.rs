//! File-based batch commands over the necklace library: build doubles,
//! verify potentials, lift/restrict, act by gauge transformations, and
//! tabulate windowed cohomology ranks.
//!
//! Every command is deterministic — identical inputs produce byte-identical
//! outputs. Exit codes: 0 pass, 1 check failed, 2 invalid quiver, 3 parse
//! or degree error in a potential, 4 inadmissible minimal potential, 5
//! inadmissible transform.

use clap::{Args, Parser, Subcommand, ValueEnum};
use necklace::ainfty::{check_ainfty, check_cyclicity_and_unit, extract_products, Pairing};
use necklace::calculus::{
    check_master, gauge_ideal, hamiltonian_flow, lift_potential, maurer_cartan_check, Automorphism,
    CalculusError,
};
use necklace::quiver::double_quiver;
use necklace::words::{parse_potential, print_potential, word_degree};
use necklace::{Alphabet, CyclicSeries, GradedQuiver, Kind};
use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_QUIVER: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_W0: u8 = 4;
const EXIT_TRANSFORM: u8 = 5;

/// Exact symbolic computation for graded quivers with potential.
#[derive(Parser)]
#[command(name = "necklace", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add the dual arrows to a half quiver and write the double
    BuildDouble {
        /// Half quiver (JSON)
        quiver: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Verify equations of a potential over a quiver
    Check {
        /// Quiver (JSON); a half quiver is doubled first
        quiver: PathBuf,
        /// Potential (text)
        potential: PathBuf,
        /// Which equations to verify
        #[arg(long, value_enum, default_value_t = Mode::All)]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Lift a minimal potential to the canonical potential plus it
    Lift {
        /// Quiver (JSON); a half quiver is doubled first
        quiver: PathBuf,
        /// Minimal potential (text)
        w0: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Restrict a potential to its minimal part
    Restrict {
        /// Quiver (JSON); a half quiver is doubled first
        quiver: PathBuf,
        /// Potential (text)
        potential: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Transform a potential and re-check the master equation
    Gauge {
        /// Quiver (JSON); a half quiver is doubled first
        quiver: PathBuf,
        /// Potential (text)
        potential: PathBuf,
        /// Automorphism (JSON) or flow Hamiltonian (text), per --kind
        transform: PathBuf,
        /// How to read the transform file
        #[arg(long, value_enum, default_value_t = TransformKind::Auto)]
        kind: TransformKind,
        /// Cyclic-degree truncation for flow composition
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(i64).range(3..))]
        truncation: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate windowed cohomology ranks over the double
    Dgla {
        /// Quiver (JSON); a half quiver is doubled first
        quiver: PathBuf,
        /// Largest cyclic degree of the window
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Assert the ambient dimension of the quiver file
    #[arg(long)]
    d: Option<i64>,
    /// Write the result here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit machine-readable JSON reports
    #[arg(long)]
    structured: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Master,
    Mc,
    Ainfty,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Auto,
    Flow,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Display) -> Failure {
    Failure { code, message: message.to_string() }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::BuildDouble { quiver, common } => cmd_build_double(&quiver, &common),
        Command::Check { quiver, potential, mode, common } => {
            cmd_check(&quiver, &potential, mode, &common)
        }
        Command::Lift { quiver, w0, common } => cmd_lift(&quiver, &w0, &common),
        Command::Restrict { quiver, potential, common } => {
            cmd_restrict(&quiver, &potential, &common)
        }
        Command::Gauge { quiver, potential, transform, kind, truncation, common } => {
            cmd_gauge(&quiver, &potential, &transform, kind, truncation, &common)
        }
        Command::Dgla { quiver, window, common } => cmd_dgla(&quiver, window as usize, &common),
    }
}

fn read_file(path: &PathBuf, code: u8) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(code, format!("{}: {e}", path.display())))
}

fn load_quiver(path: &PathBuf, d: Option<i64>) -> Result<GradedQuiver, Failure> {
    let text = read_file(path, EXIT_QUIVER)?;
    let q = GradedQuiver::from_json(&text)
        .map_err(|e| fail(EXIT_QUIVER, format!("{}: {e}", path.display())))?;
    q.validate().map_err(|e| fail(EXIT_QUIVER, e))?;
    if let Some(d) = d {
        if q.d != d {
            return Err(fail(
                EXIT_QUIVER,
                format!("quiver has d = {}, but --d {d} was given", q.d),
            ));
        }
    }
    Ok(q)
}

fn load_double(path: &PathBuf, d: Option<i64>) -> Result<(GradedQuiver, Alphabet), Failure> {
    let q = load_quiver(path, d)?;
    let qbar = if q.half { double_quiver(&q).map_err(|e| fail(EXIT_QUIVER, e))? } else { q };
    let ab = qbar.alphabet().map_err(|e| fail(EXIT_QUIVER, e))?;
    Ok((qbar, ab))
}

fn load_potential(path: &PathBuf, ab: &Alphabet, code: u8) -> Result<CyclicSeries, Failure> {
    let text = read_file(path, code)?;
    let (p, warnings) =
        parse_potential(&text, ab).map_err(|e| fail(code, format!("{}: {e}", path.display())))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(p)
}

fn emit(common: &Common, payload: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, payload)
            .map_err(|e| fail(EXIT_QUIVER, format!("{}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

/// Potentials handed to `check` must be homogeneous of function degree
/// `3 − d`; anything else is reported with the offending term.
fn homogeneity_gate(w: &CyclicSeries, ab: &Alphabet) -> Result<(), Failure> {
    if w.is_zero() {
        return Ok(());
    }
    let want = 3 - ab.d();
    if let Some(deg) = w.homogeneous_degree() {
        if deg == want {
            return Ok(());
        }
        return Err(fail(
            EXIT_PARSE,
            format!("potential has function degree {deg}, expected {want}"),
        ));
    }
    let mut terms = w.terms();
    let (first, _) = terms.next().expect("nonzero series has terms");
    let d0 = word_degree(first.letters());
    let (off, _) = terms
        .find(|(c, _)| word_degree(c.letters()) != d0)
        .expect("inhomogeneous series has a second degree");
    Err(fail(
        EXIT_PARSE,
        format!(
            "potential is not homogeneous: `{first}` has degree {d0} but `{off}` has degree {}",
            word_degree(off.letters())
        ),
    ))
}

fn json_value(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("reports serialize to valid JSON")
}

fn cmd_build_double(path: &PathBuf, common: &Common) -> CmdResult {
    let q = load_quiver(path, common.d)?;
    if !q.half {
        return Err(fail(EXIT_QUIVER, "expected a half quiver (half = true)"));
    }
    let qbar = double_quiver(&q).map_err(|e| fail(EXIT_QUIVER, e))?;
    emit(common, &qbar.to_json())?;
    Ok(0)
}

fn cmd_check(quiver: &PathBuf, potential: &PathBuf, mode: Mode, common: &Common) -> CmdResult {
    let (_qbar, ab) = load_double(quiver, common.d)?;
    let w = load_potential(potential, &ab, EXIT_PARSE)?;
    homogeneity_gate(&w, &ab)?;

    let mut human = Vec::new();
    let mut json = serde_json::Map::new();
    let mut all_pass = true;

    if matches!(mode, Mode::Master | Mode::All) {
        let r = check_master(&w, &ab);
        all_pass &= r.pass;
        human.push(if r.pass {
            "master: pass".to_string()
        } else {
            format!("master: FAIL\n  residual: {}", print_potential(&r.residual))
        });
        json.insert("master".into(), json_value(&r.to_json()));
    }
    if matches!(mode, Mode::Mc | Mode::All) {
        let r = maurer_cartan_check(&w, &ab).map_err(|e| fail(EXIT_PARSE, e))?;
        all_pass &= r.pass;
        human.push(if r.pass {
            "maurer-cartan: pass".to_string()
        } else {
            format!("maurer-cartan: FAIL\n  residual: {}", print_potential(&r.residual))
        });
        json.insert("maurer_cartan".into(), json_value(&r.to_json()));
    }
    if matches!(mode, Mode::Ainfty | Mode::All) {
        let pairing = Pairing::new(&ab);
        let lmax = w.max_length().unwrap_or(1);
        let n_max = (2 * lmax).saturating_sub(3).max(1);
        let m = extract_products(&w, &pairing, n_max).map_err(|e| fail(EXIT_PARSE, e))?;
        let rel = check_ainfty(&m, n_max);
        let cond = check_cyclicity_and_unit(&m, &pairing, &w);
        all_pass &= rel.pass && cond.pass;
        human.push(if rel.pass {
            format!("ainfty: pass (relations verified at arity <= {n_max})")
        } else {
            let first = &rel.violations[0];
            format!(
                "ainfty: FAIL ({} violated relation(s); first at arity {})",
                rel.violations.len(),
                first.inputs.len()
            )
        });
        human.push(if cond.pass {
            "cyclicity/unit: pass".to_string()
        } else {
            format!("cyclicity/unit: FAIL\n  - {}", cond.failures.join("\n  - "))
        });
        json.insert("ainfty".into(), json_value(&rel.to_json()));
        json.insert("conditions".into(), json_value(&cond.to_json()));
    }

    let payload = if common.structured {
        json.insert("pass".into(), serde_json::Value::Bool(all_pass));
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(json))
            .expect("serializable");
        s.push('\n');
        s
    } else {
        human.join("\n") + "\n"
    };
    emit(common, &payload)?;
    Ok(if all_pass { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_lift(quiver: &PathBuf, w0: &PathBuf, common: &Common) -> CmdResult {
    let (_qbar, ab) = load_double(quiver, common.d)?;
    let w0 = load_potential(w0, &ab, EXIT_PARSE)?;
    let lifted = lift_potential(&w0, &ab).map_err(|e| {
        let mut msg = e.to_string();
        if let CalculusError::BadSupport { letter, .. } = &e {
            if let Some(l) = ab.letter_by_id(letter) {
                if l.kind == Kind::Xi && l.deg == 2 - ab.d() {
                    msg.push_str(" (degree-impossible variable in a minimal potential)");
                }
            }
        }
        fail(EXIT_W0, msg)
    })?;
    emit(common, &(print_potential(&lifted) + "\n"))?;
    Ok(0)
}

fn cmd_restrict(quiver: &PathBuf, potential: &PathBuf, common: &Common) -> CmdResult {
    let (_qbar, ab) = load_double(quiver, common.d)?;
    let w = load_potential(potential, &ab, EXIT_PARSE)?;
    let restricted = w.restrict(&gauge_ideal(&ab));
    emit(common, &(print_potential(&restricted) + "\n"))?;
    Ok(0)
}

fn cmd_gauge(
    quiver: &PathBuf,
    potential: &PathBuf,
    transform: &PathBuf,
    kind: TransformKind,
    truncation: i64,
    common: &Common,
) -> CmdResult {
    let (_qbar, ab) = load_double(quiver, common.d)?;
    let w = load_potential(potential, &ab, EXIT_PARSE)?;
    let out = match kind {
        TransformKind::Flow => {
            let h = load_potential(transform, &ab, EXIT_TRANSFORM)?;
            hamiltonian_flow(&h, &w, truncation, &ab).map_err(|e| fail(EXIT_TRANSFORM, e))?
        }
        TransformKind::Auto => {
            let text = read_file(transform, EXIT_TRANSFORM)?;
            let phi = Automorphism::from_json(&text, &ab)
                .map_err(|e| fail(EXIT_TRANSFORM, format!("{}: {e}", transform.display())))?;
            phi.validate(&ab).map_err(|e| fail(EXIT_TRANSFORM, e))?;
            phi.apply(&w)
        }
    };
    let recheck = check_master(&out, &ab);
    emit(common, &(print_potential(&out) + "\n"))?;
    eprintln!("master recheck: {}", if recheck.pass { "pass" } else { "FAIL" });
    Ok(if recheck.pass { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_dgla(quiver: &PathBuf, window: usize, common: &Common) -> CmdResult {
    let (qbar, _ab) = load_double(quiver, common.d)?;
    let table = necklace::dgla::cohomology_ranks(&qbar, window)
        .map_err(|e| fail(EXIT_QUIVER, e))?;
    let payload = if common.structured { table.to_json() } else { table.to_string() };
    emit(common, &payload)?;
    Ok(0)
}

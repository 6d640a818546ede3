//! `torsionlab` command-line interface.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use torsionlab::format::{
    complex_to_json, parse_chain_map, parse_complex, parse_script, script_to_json, to_canonical_string,
};
use torsionlab::lens::{self, LensSpace};
use torsionlab::torsion::{
    greedy_reduce, is_trivial_torsion_with_tolerance, mapping_cone, torsion_scalar, Decision, ReductionOutcome,
    TorsionError, DEFAULT_TOLERANCE,
};

const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "torsionlab", version, about = "Whitehead torsion of based chain complexes over Z[G]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a move script; exit 0 iff it empties its initial complex.
    Verify { script: PathBuf },
    /// Decide whether an acyclic complex has trivial torsion (0 trivial, 1 nontrivial, 2 unknown).
    Decide { complex: PathBuf },
    /// Greedily reduce an acyclic complex.
    Reduce {
        complex: PathBuf,
        #[arg(long, value_name = "PATH")]
        emit_script: Option<PathBuf>,
    },
    /// Mapping cone of a chain map.
    Cone {
        map: PathBuf,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Three-dimensional lens spaces.
    Lens {
        #[command(subcommand)]
        command: LensCommand,
    },
    /// Run built-in checks against known instances.
    Selftest,
}

#[derive(Subcommand)]
enum LensCommand {
    /// Classify L(n, q1) against L(n, q2).
    Classify { n: usize, q1: usize, q2: usize },
    /// TSV of verdicts for all pairs with n <= N.
    Table { n_max: usize },
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: Vec<InputDigest>,
    verdict: Value,
    witness: Value,
    wall_time_ms: u128,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

/// Outcome of a command: exit code, verdict and witness for the report.
struct Outcome {
    code: u8,
    verdict: Value,
    witness: Value,
}

struct Run {
    command: &'static str,
    inputs: Vec<InputDigest>,
    started: Instant,
}

impl Run {
    fn new(command: &'static str) -> Self {
        Run {
            command,
            inputs: Vec::new(),
            started: Instant::now(),
        }
    }

    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }

    fn finish(self, result: Result<Outcome, Failure>) -> ExitCode {
        let (code, verdict, witness) = match result {
            Ok(o) => (o.code, o.verdict, o.witness),
            Err(f) => {
                eprintln!("error: {}", f.message);
                (f.code, json!("error"), json!({ "error": f.message }))
            }
        };
        let report = RunReport {
            command: self.command.to_string(),
            inputs: self.inputs,
            verdict,
            witness,
            wall_time_ms: self.started.elapsed().as_millis(),
        };
        print!("{}", to_canonical_string(&serde_json::to_value(report).expect("plain data")));
        ExitCode::from(code)
    }
}

fn tolerance() -> Result<f64, Failure> {
    match std::env::var("TORSIONLAB_TOL") {
        Err(_) => Ok(DEFAULT_TOLERANCE),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(Failure::input(format!("TORSIONLAB_TOL must be a positive number, got {s:?}"))),
        },
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: 4,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn verify(run: &mut Run, path: &Path) -> Result<Outcome, Failure> {
    let script = parse_script(&run.read(path)?).map_err(Failure::input)?;
    Ok(match script.run() {
        Ok(c) if c.is_empty() => Outcome {
            code: 0,
            verdict: json!("trivial"),
            witness: json!({ "moves": script.moves.len() }),
        },
        Ok(c) => {
            eprintln!("script ends with {} generators", c.len());
            Outcome {
                code: 1,
                verdict: json!("not_emptied"),
                witness: json!({ "moves": script.moves.len(), "residual": complex_to_json(&c) }),
            }
        }
        Err(e) => {
            eprintln!("{e}");
            Outcome {
                code: 1,
                verdict: json!("move_failed"),
                witness: json!({ "index": e.index, "move": e.rendered, "error": e.error.to_string() }),
            }
        }
    })
}

fn decide(run: &mut Run, path: &Path) -> Result<Outcome, Failure> {
    let tol = tolerance()?;
    let c = parse_complex(&run.read(path)?).map_err(Failure::input)?;
    let decision = is_trivial_torsion_with_tolerance(&c, tol).map_err(|e| match e {
        TorsionError::NotAcyclic { .. } => Failure::input(e),
        other => Failure::input(format!("cannot decide: {other}")),
    })?;
    Ok(match decision {
        Decision::Trivial { script } => Outcome {
            code: 0,
            verdict: json!("trivial"),
            witness: json!({ "script": script_to_json(&script) }),
        },
        Decision::NonTrivial { character, logabs } => {
            let tau = torsion_scalar(&c, character).map_err(Failure::input)?;
            Outcome {
                code: 1,
                verdict: json!("nontrivial"),
                witness: json!({ "character": character, "logabs": logabs, "tau": [tau.re, tau.im], "tolerance": tol }),
            }
        }
        Decision::Unknown { reason } => Outcome {
            code: 2,
            verdict: json!("unknown"),
            witness: json!({ "reason": reason }),
        },
    })
}

fn reduce(run: &mut Run, path: &Path, emit: Option<&Path>) -> Result<Outcome, Failure> {
    let c = parse_complex(&run.read(path)?).map_err(Failure::input)?;
    if let Some(degree) = c.first_homology_degree() {
        return Err(Failure::input(TorsionError::NotAcyclic { degree, character: None }));
    }
    let outcome = greedy_reduce(&c);
    if let Some(p) = emit {
        write_file(p, &to_canonical_string(&script_to_json(outcome.script())))?;
    }
    let moves = outcome.script().moves.len();
    Ok(match outcome {
        ReductionOutcome::Emptied(_) => Outcome {
            code: 0,
            verdict: json!("emptied"),
            witness: json!({ "moves": moves }),
        },
        ReductionOutcome::TwoTerm { matrix, .. } => Outcome {
            code: 2,
            verdict: json!("two_term"),
            witness: json!({ "moves": moves, "rows": matrix.nrows(), "cols": matrix.ncols() }),
        },
        ReductionOutcome::Stuck { residual, diagnostic, .. } => Outcome {
            code: 2,
            verdict: json!("stuck"),
            witness: json!({ "moves": moves, "diagnostic": diagnostic, "residual": complex_to_json(&residual) }),
        },
    })
}

fn cone(run: &mut Run, path: &Path, output: Option<&Path>) -> Result<Outcome, Failure> {
    let f = parse_chain_map(&run.read(path)?).map_err(Failure::input)?;
    let c = mapping_cone(&f).map_err(Failure::input)?;
    let value = complex_to_json(&c);
    if let Some(p) = output {
        write_file(p, &to_canonical_string(&value))?;
    }
    Ok(Outcome {
        code: 0,
        verdict: json!({ "generators": c.len(), "acyclic": c.is_acyclic() }),
        witness: json!({ "cone": value }),
    })
}

fn lens_classify(n: usize, q1: usize, q2: usize) -> Result<Outcome, Failure> {
    let l1 = LensSpace::new(n, q1).map_err(Failure::input)?;
    let l2 = LensSpace::new(n, q2).map_err(Failure::input)?;
    let v = lens::classify(&l1, &l2).map_err(Failure::input)?;
    Ok(Outcome {
        code: 0,
        verdict: json!({
            "homotopy_equivalent": v.homotopy_equivalent,
            "simple_equivalent": v.simple_equivalent,
        }),
        witness: serde_json::to_value(&v.witness).expect("plain data"),
    })
}

fn lens_table(n_max: usize) -> ExitCode {
    match lens::classification_table(n_max) {
        Ok(rows) => {
            println!("n\tq1\tq2\thomotopy_equivalent\tsimple_equivalent\toracle_simple_equivalent");
            for r in rows {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.n, r.q1, r.q2, r.homotopy_equivalent, r.simple_equivalent, r.oracle_simple_equivalent
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn selftest() -> ExitCode {
    type Check = Box<dyn Fn() -> Result<bool, String>>;
    let checks: Vec<(&str, Check)> = vec![
        (
            "L(7,1) vs L(7,2): homotopy equivalent, not simple",
            Box::new(|| classify_check(7, 1, 2, true, false)),
        ),
        ("L(7,1) vs L(7,6): simple equivalent", Box::new(|| classify_check(7, 1, 6, true, true))),
        ("L(5,1) vs L(5,2): not homotopy equivalent", Box::new(|| classify_check(5, 1, 2, false, false))),
        ("lens table n <= 12 agrees with the congruence oracle", Box::new(|| {
            let rows = lens::classification_table(12).map_err(|e| e.to_string())?;
            Ok(rows.iter().all(|r| r.agrees()))
        })),
        ("cone(identity) reduces to the empty complex", Box::new(identity_cone_check)),
        ("1 - t - t^4 over Z[Z/5] has nontrivial torsion", Box::new(cyclotomic_check)),
    ];
    let mut ok = true;
    for (name, check) in checks {
        let passed = match check() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{name}: {e}");
                false
            }
        };
        ok &= passed;
        println!("[{}] {name}", if passed { "PASS" } else { "FAIL" });
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn classify_check(n: usize, q1: usize, q2: usize, homotopy: bool, simple: bool) -> Result<bool, String> {
    let l1 = LensSpace::new(n, q1).map_err(|e| e.to_string())?;
    let l2 = LensSpace::new(n, q2).map_err(|e| e.to_string())?;
    let v = lens::classify(&l1, &l2).map_err(|e| e.to_string())?;
    let oracle = lens::oracle_classify(&l1, &l2).map_err(|e| e.to_string())?;
    Ok(v.homotopy_equivalent == homotopy
        && v.simple_equivalent == simple
        && oracle.simple_equivalent == simple
        && oracle.homotopy_equivalent == homotopy)
}

fn identity_cone_check() -> Result<bool, String> {
    use torsionlab::{BasedComplex, ChainMap, Generator, GroupSpec, RingElement};
    let g = GroupSpec::cyclic(5).map_err(|e| e.to_string())?;
    let c = BasedComplex::new(
        &g,
        vec![Generator::new("x", 0), Generator::new("y", 1)],
        [("x", "y", RingElement::parse(&g, "1 + t").map_err(|e| e.to_string())?)],
    )
    .map_err(|e| e.to_string())?;
    let cone = mapping_cone(&ChainMap::identity(&c)).map_err(|e| e.to_string())?;
    let script = greedy_reduce(&cone).script().clone();
    script.verify_trivial().map_err(|e| e.to_string())
}

fn cyclotomic_check() -> Result<bool, String> {
    use torsionlab::{BasedComplex, Generator, GroupSpec, RingElement};
    let g = GroupSpec::cyclic(5).map_err(|e| e.to_string())?;
    let u = RingElement::parse(&g, "1 - t - t^4").map_err(|e| e.to_string())?;
    let c = BasedComplex::new(&g, vec![Generator::new("x", 0), Generator::new("y", 1)], [("x", "y", u)])
        .map_err(|e| e.to_string())?;
    let d = is_trivial_torsion_with_tolerance(&c, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    Ok(matches!(d, Decision::NonTrivial { .. }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { script } => {
            let mut run = Run::new("verify");
            let r = verify(&mut run, &script);
            run.finish(r)
        }
        Command::Decide { complex } => {
            let mut run = Run::new("decide");
            let r = decide(&mut run, &complex);
            run.finish(r)
        }
        Command::Reduce { complex, emit_script } => {
            let mut run = Run::new("reduce");
            let r = reduce(&mut run, &complex, emit_script.as_deref());
            run.finish(r)
        }
        Command::Cone { map, output } => {
            let mut run = Run::new("cone");
            let r = cone(&mut run, &map, output.as_deref());
            run.finish(r)
        }
        Command::Lens {
            command: LensCommand::Classify { n, q1, q2 },
        } => {
            let run = Run::new("lens classify");
            run.finish(lens_classify(n, q1, q2))
        }
        Command::Lens {
            command: LensCommand::Table { n_max },
        } => lens_table(n_max),
        Command::Selftest => selftest(),
    }
}

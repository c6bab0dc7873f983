//! Command-line front-end for the reduced-space calculus: JSON in, JSON or
//! line-oriented reports out.
//!
//! Exit codes: 0 success or affirmative, 1 negative result or refuted
//! verdict, 2 usage or parse error, 3 numerical degeneracy (undefined
//! meet, exhausted witness search).

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use redspace::error::{Error, Result};
use redspace::ffham::{
    is_frustration_free, is_irreducible_ground_space, is_minimal_ground_space,
};
use redspace::fixtures::{toric_examples, worked_examples, Fixture, FixtureCtx, FixtureReport};
use redspace::hilbert::SystemShape;
use redspace::io::{
    decomposition_to_json, hamiltonian_from_json, hamiltonian_to_json, jp_pair_to_json,
    rsv_from_json, rsv_to_json, subspace_from_json, subspace_to_json, verdict_to_json,
    HamiltonianJson, RsvJson, SubspaceJson,
};
use redspace::oracle;
use redspace::reduced::ReducedSpaceVector;
use redspace::sampling;
use redspace::semilattice::{
    decompose_irreducibles, is_atom, is_join_irreducible, join_prime_witness, AnalysisVerdict,
    SearchBudget,
};
use redspace::subspace::Subspace;

#[derive(Parser)]
#[command(
    name = "redspace",
    version,
    about = "Reduced-space calculus: k-particle images, maximal pre-images, \
             join-semilattice analysis, and dual k-local Hamiltonians"
)]
struct Cli {
    /// Rank-decision tolerance used when parsing input files.
    #[arg(long, global = true, env = "RS_TOL", default_value_t = 1e-10)]
    tol: f64,

    /// Seed for every randomized search.
    #[arg(long, global = true, env = "RS_SEED", default_value_t = 0)]
    seed: u64,

    /// Emit a JSON report (always carrying tol and seed) instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a subspace to its tuple of k-particle images.
    Reduce {
        /// Subspace JSON ("-" for stdin).
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the tuple here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Maximal pre-image of a reduced tuple.
    Mpi {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Componentwise join of two reduced tuples.
    Join {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Is the tuple the reduction of some subspace? Exit 0 yes, 1 no.
    Member { file: PathBuf },
    /// Componentwise order test. Exit 0 if a ≤ b, 1 otherwise.
    Leq { a: PathBuf, b: PathBuf },
    /// Atom check: is anything strictly between zero and this tuple?
    Atom {
        file: PathBuf,
        /// Random candidate states to sample.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Join-irreducibility check for a reduced tuple.
    Irreducible {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Construct a pair refuting join-primeness of a rank-1 subspace's
    /// reduction: v ≤ w1 ∨ w2 but v ≰ w1 and v ≰ w2.
    Jpwitness {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Split a tuple into join-irreducible (best effort) parts.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Ground space of a k-local Hamiltonian given by term kernels.
    Ground {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Frustration-freeness of a set of local terms. Exit 0 FF, 1 not.
    Ff { file: PathBuf },
    /// Componentwise meet of two Hamiltonians; exit 3 if undefined.
    Meet {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Minimality of a k-local ground space (no proper ground subspace).
    Minimal {
        /// Subspace JSON; must be a k-local ground space.
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Irreducibility of a k-local ground space (not a sum of two proper
    /// ground spaces).
    Irrgs {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Run the bundled example suites; fixtures pin their own tolerances.
    Examples {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Cross-check the production path against the brute-force oracle.
    Selfcheck {
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Paper,
    Toric,
    All,
}

fn main() {
    // Die like cat does when the read end of a pipe closes early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_rsv(path: &Path, tol: f64) -> Result<ReducedSpaceVector> {
    let j: RsvJson = read_json(path)?;
    rsv_from_json(&j, tol)
}

fn load_subspace(path: &Path, tol: f64) -> Result<(SystemShape, Subspace)> {
    let j: SubspaceJson = read_json(path)?;
    subspace_from_json(&j, tol)
}

/// Envelope for --json reports; object outputs stay bare.
fn report(cli: &Cli, command: &str, fields: serde_json::Value) -> serde_json::Value {
    let mut obj = json!({
        "command": command,
        "tol": cli.tol,
        "seed": cli.seed,
    });
    if let (Some(dst), Some(src)) = (obj.as_object_mut(), fields.as_object()) {
        for (k, v) in src {
            dst.insert(k.clone(), v.clone());
        }
    }
    obj
}

fn verdict_exit(v: &AnalysisVerdict) -> i32 {
    if v.is_no() {
        1
    } else {
        0
    }
}

fn print_verdict(
    cli: &Cli,
    command: &'static str,
    shape: &SystemShape,
    v: &AnalysisVerdict,
) -> Result<i32> {
    let vj = verdict_to_json(v, shape);
    if cli.json {
        let r = report(cli, command, json!({ "verdict": vj }));
        emit(&r, None)?;
    } else {
        emit(&vj, None)?;
    }
    Ok(verdict_exit(v))
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Reduce { file, k, out } => {
            let (shape, s) = load_subspace(file, cli.tol)?;
            let v = ReducedSpaceVector::reduce(&shape, &s, *k)?;
            let vj = rsv_to_json(&v);
            if cli.json {
                emit(&report(cli, "reduce", json!({ "result": vj })), None)?;
            } else {
                emit(&vj, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Mpi { file, out } => {
            let v = load_rsv(file, cli.tol)?;
            let pre = v.maximal_preimage()?;
            let sj = subspace_to_json(v.shape(), &pre);
            if cli.json {
                emit(
                    &report(cli, "mpi", json!({ "result": sj, "rank": pre.rank() })),
                    None,
                )?;
            } else {
                emit(&sj, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Join { a, b, out } => {
            let va = load_rsv(a, cli.tol)?;
            let vb = load_rsv(b, cli.tol)?;
            let j = va.join(&vb)?;
            let jj = rsv_to_json(&j);
            if cli.json {
                emit(&report(cli, "join", json!({ "result": jj })), None)?;
            } else {
                emit(&jj, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Member { file } => {
            let v = load_rsv(file, cli.tol)?;
            let member = v.is_member()?;
            if cli.json {
                emit(&report(cli, "member", json!({ "member": member })), None)?;
            } else {
                println!("member: {member}");
            }
            Ok(if member { 0 } else { 1 })
        }
        Command::Leq { a, b } => {
            let va = load_rsv(a, cli.tol)?;
            let vb = load_rsv(b, cli.tol)?;
            let leq = va.leq(&vb)?;
            if cli.json {
                emit(&report(cli, "leq", json!({ "leq": leq })), None)?;
            } else {
                println!("leq: {leq}");
            }
            Ok(if leq { 0 } else { 1 })
        }
        Command::Atom { file, samples } => {
            let v = load_rsv(file, cli.tol)?;
            let verdict = is_atom(&v, &SearchBudget::new(*samples, cli.seed))?;
            print_verdict(cli, "atom", v.shape(), &verdict)
        }
        Command::Irreducible { file, samples } => {
            let v = load_rsv(file, cli.tol)?;
            let verdict = is_join_irreducible(&v, &SearchBudget::new(*samples, cli.seed))?;
            print_verdict(cli, "irreducible", v.shape(), &verdict)
        }
        Command::Jpwitness { file, k, out } => {
            let (shape, s) = load_subspace(file, cli.tol)?;
            let pair = join_prime_witness(&shape, &s, *k)?;
            let pj = jp_pair_to_json(&pair);
            if cli.json {
                emit(&report(cli, "jpwitness", json!({ "pair": pj })), None)?;
            } else {
                emit(&pj, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Decompose { file, samples, out } => {
            let v = load_rsv(file, cli.tol)?;
            let parts = decompose_irreducibles(&v, &SearchBudget::new(*samples, cli.seed))?;
            let pj = decomposition_to_json(&parts, v.shape());
            if cli.json {
                emit(&report(cli, "decompose", json!({ "parts": pj })), None)?;
            } else {
                emit(&pj, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Ground { file, out } => {
            let j: HamiltonianJson = read_json(file)?;
            let input = hamiltonian_from_json(&j, cli.tol)?;
            let h = input.to_local_hamiltonian()?;
            let ground = h.ground_space()?;
            let sj = subspace_to_json(h.shape(), &ground);
            if cli.json {
                emit(
                    &report(cli, "ground", json!({ "result": sj, "rank": ground.rank() })),
                    None,
                )?;
            } else {
                emit(&sj, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Ff { file } => {
            let j: HamiltonianJson = read_json(file)?;
            let input = hamiltonian_from_json(&j, cli.tol)?;
            let (ff, h) = is_frustration_free(&input.shape, &input.matrix_terms())?;
            let ground_rank = match &h {
                Some(h) => Some(h.ground_space()?.rank()),
                None => None,
            };
            if cli.json {
                emit(
                    &report(
                        cli,
                        "ff",
                        json!({ "frustration_free": ff, "ground_rank": ground_rank }),
                    ),
                    None,
                )?;
            } else {
                match ground_rank {
                    Some(r) => println!("frustration-free: {ff} (common kernel rank {r})"),
                    None => println!("frustration-free: {ff} (a term kernel is zero)"),
                }
            }
            Ok(if ff { 0 } else { 1 })
        }
        Command::Meet { a, b, out } => {
            let ja: HamiltonianJson = read_json(a)?;
            let jb: HamiltonianJson = read_json(b)?;
            let ha = hamiltonian_from_json(&ja, cli.tol)?.to_local_hamiltonian()?;
            let hb = hamiltonian_from_json(&jb, cli.tol)?.to_local_hamiltonian()?;
            let m = ha.meet(&hb)?;
            let mj = hamiltonian_to_json(&m);
            if cli.json {
                emit(&report(cli, "meet", json!({ "result": mj })), None)?;
            } else {
                emit(&mj, out.as_ref())?;
            }
            Ok(0)
        }
        Command::Minimal { file, k, samples } => {
            let (shape, s) = load_subspace(file, cli.tol)?;
            let verdict =
                is_minimal_ground_space(&shape, &s, *k, &SearchBudget::new(*samples, cli.seed))?;
            print_verdict(cli, "minimal", &shape, &verdict)
        }
        Command::Irrgs { file, k, samples } => {
            let (shape, s) = load_subspace(file, cli.tol)?;
            let verdict = is_irreducible_ground_space(
                &shape,
                &s,
                *k,
                &SearchBudget::new(*samples, cli.seed),
            )?;
            print_verdict(cli, "irrgs", &shape, &verdict)
        }
        Command::Examples { suite, samples } => run_examples(cli, *suite, *samples),
        Command::Selfcheck { trials } => run_selfcheck(cli, *trials),
    }
}

fn suite_fixtures(suite: Suite) -> Vec<(&'static str, Vec<Fixture>)> {
    match suite {
        Suite::Paper => vec![("paper", worked_examples())],
        Suite::Toric => vec![("toric", toric_examples())],
        Suite::All => vec![("paper", worked_examples()), ("toric", toric_examples())],
    }
}

fn run_examples(cli: &Cli, suite: Suite, samples: usize) -> Result<i32> {
    let ctx = FixtureCtx {
        seed: cli.seed,
        samples,
        ..FixtureCtx::default()
    };
    let mut all_pass = true;
    let mut suites_json = Vec::new();
    for (label, fixtures) in suite_fixtures(suite) {
        let total = fixtures.len();
        let mut passed = 0usize;
        let mut millis = 0u128;
        let mut reports: Vec<FixtureReport> = Vec::new();
        for fixture in &fixtures {
            let r = fixture.run(&ctx);
            if r.passed {
                passed += 1;
            }
            millis += r.millis;
            if !cli.json {
                println!(
                    "[{label}] {:<26} {} ({} ms) {}",
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.millis,
                    r.detail
                );
            }
            reports.push(r);
        }
        all_pass &= passed == total;
        if cli.json {
            suites_json.push(json!({
                "suite": label,
                "passed": passed,
                "total": total,
                "millis": millis,
                "fixtures": reports.iter().map(|r| json!({
                    "name": r.name,
                    "passed": r.passed,
                    "millis": r.millis,
                    "detail": r.detail,
                })).collect::<Vec<_>>(),
            }));
        } else {
            println!("{label}: {passed}/{total} PASS in {millis} ms");
        }
    }
    if cli.json {
        let r = report(
            cli,
            "examples",
            json!({ "suites": suites_json, "passed": all_pass }),
        );
        emit(&r, None)?;
    }
    Ok(if all_pass { 0 } else { 1 })
}

struct Check {
    name: &'static str,
    agree: usize,
    total: usize,
    millis: u128,
}

fn run_selfcheck(cli: &Cli, trials: usize) -> Result<i32> {
    use rand::SeedableRng;
    let mut checks = Vec::new();

    // Sampled reduction against the maximally-mixed-state route.
    let start = std::time::Instant::now();
    let shape = SystemShape::qubits(3)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
    let mut agree = 0;
    for i in 0..trials {
        let rank = 1 + i % 3;
        let s = sampling::random_subspace(shape.total_dim(), rank, &mut rng)?;
        let direct = ReducedSpaceVector::reduce(&shape, &s, 2)?;
        let sampled = oracle::sample_rs(&shape, &s, 2, 50, cli.seed.wrapping_add(i as u64))?;
        if sampled.equals(&direct)? {
            agree += 1;
        }
    }
    checks.push(Check {
        name: "sampled reduction matches reduce",
        agree,
        total: trials,
        millis: start.elapsed().as_millis(),
    });

    // Gram-based intersection against the production null-space route.
    let start = std::time::Instant::now();
    let mut agree = 0;
    for i in 0..trials {
        let ra = 1 + i % 3;
        let rb = 1 + (i / 3) % 3;
        let a = sampling::random_subspace(16, ra, &mut rng)?;
        let b = sampling::random_subspace(16, rb, &mut rng)?;
        if oracle::naive_intersect(&a, &b)?.equals(&a.intersect(&b)?)? {
            agree += 1;
        }
    }
    checks.push(Check {
        name: "gram intersection matches intersect",
        agree,
        total: trials,
        millis: start.elapsed().as_millis(),
    });

    // Frustration-freeness against the dense ground-energy criterion.
    let start = std::time::Instant::now();
    let subsets = redspace::hilbert::enumerate_subsets(3, 2)?;
    let mut agree = 0;
    for i in 0..trials {
        let mut terms = Vec::new();
        for subset in &subsets {
            let rank = 1 + (i + subset.particles()[0]) % 3;
            let kernel = sampling::random_subspace(4, rank, &mut rng)?;
            terms.push((subset.clone(), sampling::psd_with_kernel(&kernel, &mut rng)));
        }
        let (ff, _) = is_frustration_free(&shape, &terms)?;
        let (e0, _) = oracle::brute_ground(&shape, &terms, 1e-8)?;
        if ff == (e0.abs() < 1e-8) {
            agree += 1;
        }
    }
    checks.push(Check {
        name: "frustration-freeness matches dense ground energy",
        agree,
        total: trials,
        millis: start.elapsed().as_millis(),
    });

    // Duality: the dual Hamiltonian of a tuple grounds on its pre-image.
    let start = std::time::Instant::now();
    let mut agree = 0;
    for i in 0..trials {
        let rank = 1 + i % 4;
        let s = sampling::random_subspace(shape.total_dim(), rank, &mut rng)?;
        let v = ReducedSpaceVector::reduce(&shape, &s, 2)?;
        let h = redspace::ffham::LocalHamiltonian::from_rsv(&v)?;
        if h.ground_space()?.equals(&v.maximal_preimage()?)? {
            agree += 1;
        }
    }
    checks.push(Check {
        name: "dual ground space matches maximal pre-image",
        agree,
        total: trials,
        millis: start.elapsed().as_millis(),
    });

    let all = checks.iter().all(|c| c.agree == c.total);
    if cli.json {
        let r = report(
            cli,
            "selfcheck",
            json!({
                "trials": trials,
                "passed": all,
                "checks": checks.iter().map(|c| json!({
                    "name": c.name,
                    "agree": c.agree,
                    "total": c.total,
                    "millis": c.millis,
                })).collect::<Vec<_>>(),
            }),
        );
        emit(&r, None)?;
    } else {
        for c in &checks {
            println!(
                "[selfcheck] {:<48} {}/{} agree ({} ms)",
                c.name, c.agree, c.total, c.millis
            );
        }
        println!(
            "selfcheck: {}",
            if all { "all checks agree" } else { "DISAGREEMENT" }
        );
    }
    Ok(if all { 0 } else { 1 })
}

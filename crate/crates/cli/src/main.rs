use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pesto_lab::bench::{parse_sweep, rows_to_csv, run_sweep, Method};
use pesto_lab::groebner::mutant_elimination;
use pesto_lab::hole::hole_attack;
use pesto_lab::keyfile::{
    public_key_from_json, public_key_to_json, secret_key_from_json, secret_key_to_json, system_from_text,
    system_to_text,
};
use pesto_lab::oracle::{brute_force_solutions, first_difference, max_degree, OracleError, Side};
use pesto_lab::scheme::{
    keygen, load_fixture, public_eval, secret_invert, PestoParams, PublicKey, SchemeError, DEFAULT_RETRIES,
};
use pesto_lab::transcript::{groebner_transcript, hole_transcript};
use pesto_lab::Polynomial;

/// Exit status for a structural attack failure or a failed verification.
const EXIT_FAILURE_VERDICT: u8 = 2;
/// Exit status when the trapdoor finds no preimage within the retry budget.
const EXIT_NOT_FOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "pesto-lab", version, about = "Build, evaluate and attack Pesto public keys")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair and write `<out>.sk` and `<out>.pub`
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write a bundled key (`toy`) instead of generating one
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a public key at an input vector
    Eval {
        #[arg(long)]
        pk: PathBuf,
        /// Comma-separated residues
        #[arg(long)]
        input: String,
    },
    /// Find a preimage of a target with the secret key
    Invert {
        #[arg(long)]
        sk: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
    },
    /// Reduce `G_pub(z) = target` to a quadratic system
    Attack {
        #[arg(long)]
        pk: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Hole)]
        method: MethodArg,
        /// Number of evaluation samples (relation attack only)
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the reduced system
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a reduced system against the public key
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        /// Reduced system file written by `attack`
        #[arg(long)]
        system: PathBuf,
    },
    /// Time an attack over a parameter sweep and print CSV
    Bench {
        /// Points `N:M[:T[:S]]`, comma-separated
        #[arg(long, default_value = "")]
        sweep: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Hole)]
        method: MethodArg,
        #[arg(short = 'q', default_value_t = 3)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(short = 'n', default_value_t = 6)]
    n: usize,
    #[arg(short = 'm', default_value_t = 5)]
    m: usize,
    #[arg(short = 't', default_value_t = 2)]
    t: usize,
    #[arg(short = 's', default_value_t = 1)]
    s: usize,
    #[arg(short = 'q', default_value_t = 3)]
    q: u32,
}

#[derive(Args)]
struct TargetArgs {
    /// Comma-separated residues
    #[arg(long, required_unless_present = "target_file")]
    target: Option<String>,
    /// File holding the target; takes precedence over --target
    #[arg(long)]
    target_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Groebner,
    Hole,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Groebner => Method::Groebner,
            MethodArg::Hole => Method::Hole,
        }
    }
}

fn parse_vector(text: &str, len: usize, q: u32, what: &str) -> Result<Vec<u32>> {
    let v: Vec<u32> = text
        .trim()
        .split(',')
        .map(|c| c.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("{what} must be comma-separated residues, got `{}`", text.trim()))?;
    if v.len() != len {
        bail!("{what} has {} entries, expected {len}", v.len());
    }
    if let Some(bad) = v.iter().find(|&&x| x >= q) {
        bail!("{what} entry {bad} is not a residue mod {q}");
    }
    Ok(v)
}

fn format_vector(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl TargetArgs {
    fn resolve(&self, len: usize, q: u32) -> Result<Vec<u32>> {
        let text = match (&self.target_file, &self.target) {
            (Some(path), _) => read(path)?,
            (None, Some(t)) => t.clone(),
            (None, None) => bail!("a target is required"),
        };
        parse_vector(&text, len, q, "target")
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_pk(path: &Path) -> Result<PublicKey> {
    public_key_from_json(&read(path)?).with_context(|| format!("bad public key {}", path.display()))
}

fn with_suffix(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn shifted(pk: &PublicKey, target: &[u32]) -> Vec<Polynomial> {
    let (field, n) = (pk.field(), pk.params().n);
    pk.polynomials()
        .iter()
        .zip(target)
        .map(|(g, &c)| g.sub(&Polynomial::constant(field, n, c)).expect("same ring"))
        .collect()
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Keygen {
            params,
            seed,
            fixture,
            out,
        } => {
            let (sk, pk) = match fixture {
                Some(name) => {
                    let fx = load_fixture(&name)?;
                    (fx.secret_key, fx.public_key)
                }
                None => {
                    let p = PestoParams::new(params.n, params.m, params.t, params.s, params.q)?;
                    keygen(p, seed)?
                }
            };
            let (skp, pkp) = (with_suffix(&out, ".sk"), with_suffix(&out, ".pub"));
            write(&skp, &secret_key_to_json(&sk))?;
            write(&pkp, &public_key_to_json(&pk))?;
            println!("secret_key={}", skp.display());
            println!("public_key={}", pkp.display());
            Ok(0)
        }
        Command::Eval { pk, input } => {
            let pk = load_pk(&pk)?;
            let z = parse_vector(&input, pk.params().n, pk.params().q, "input")?;
            println!("{}", format_vector(&public_eval(&pk, &z)?));
            Ok(0)
        }
        Command::Invert {
            sk,
            target,
            seed,
            retries,
        } => {
            let sk = secret_key_from_json(&read(&sk)?).with_context(|| format!("bad secret key {}", sk.display()))?;
            let w = target.resolve(sk.params().m, sk.params().q)?;
            match secret_invert(&sk, &w, seed, retries) {
                Ok(z) => {
                    println!("{}", format_vector(&z));
                    Ok(0)
                }
                Err(e @ SchemeError::NotFound { .. }) => {
                    eprintln!("error: {e}");
                    Ok(EXIT_NOT_FOUND)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Attack {
            pk,
            target,
            method,
            samples,
            seed,
            out,
        } => {
            let pk = load_pk(&pk)?;
            let params = *pk.params();
            let c = target.resolve(params.m, params.q)?;
            let (system, transcript, failed) = match method {
                MethodArg::Groebner => {
                    let red = mutant_elimination(&pk, &c)?;
                    (red.system(), groebner_transcript(&params, &red), red.is_structural_failure())
                }
                MethodArg::Hole => {
                    let red = hole_attack(&pk, &c, samples, seed)?;
                    (red.system.clone(), hole_transcript(&params, &red), red.is_structural_failure())
                }
            };
            write(&out, &system_to_text(pk.field(), params.n, &system))?;
            print!("{transcript}");
            if failed {
                eprintln!("error: structural failure, the input does not behave like a Pesto public key");
                return Ok(EXIT_FAILURE_VERDICT);
            }
            Ok(0)
        }
        Command::Verify { pk, target, system } => {
            let pk = load_pk(&pk)?;
            let params = *pk.params();
            let c = target.resolve(params.m, params.q)?;
            let sys = system_from_text(&read(&system)?)?;
            if sys.field != pk.field() || sys.nvars != params.n {
                bail!(
                    "system is over F_{}^{}, public key over F_{}^{}",
                    sys.field.modulus(),
                    sys.nvars,
                    params.q,
                    params.n
                );
            }
            let mut pass = true;
            let degree_ok = max_degree(&sys.polynomials).is_ok_and(|d| d <= 2);
            pass &= degree_ok;
            println!("degree={}", if degree_ok { "PASS" } else { "FAIL" });
            let reduced = brute_force_solutions(&sys.polynomials, sys.field, params.n);
            let original = brute_force_solutions(&shifted(&pk, &c), pk.field(), params.n);
            match (reduced, original) {
                (Ok(r), Ok(o)) => match first_difference(&r, &o)? {
                    None => {
                        println!("exhaustive=PASS");
                        println!("solutions={}", o.len());
                    }
                    Some((z, side)) => {
                        pass = false;
                        println!("exhaustive=FAIL");
                        let which = match side {
                            Side::OnlyLeft => "reduced_only",
                            Side::OnlyRight => "original_only",
                        };
                        println!("first_difference={} ({which})", format_vector(&z));
                    }
                },
                (Err(e @ OracleError::ScaleGuard { .. }), _) | (_, Err(e @ OracleError::ScaleGuard { .. })) => {
                    println!("exhaustive=SKIPPED");
                    println!("reason={e}");
                }
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            }
            println!("verdict={}", if pass { "PASS" } else { "FAIL" });
            Ok(if pass { 0 } else { EXIT_FAILURE_VERDICT })
        }
        Command::Bench {
            sweep,
            method,
            q,
            seed,
            out,
        } => {
            let points = parse_sweep(&sweep)?;
            let csv = rows_to_csv(&run_sweep(&points, q, method.into(), seed)?);
            match out {
                Some(path) => write(&path, &csv)?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use liftkit::assembly::{random_instance, verify_finite_instance, FiniteActionInstance};
use liftkit::cover::{make_cover, CoverError, CoverKind, CoverSpec};
use liftkit::graph::{quotient_graph, GraphError};
use liftkit::pipeline::{run_pipeline, PipelineError};
use liftkit::report::{certify, default_generators, recheck, verify_genset, GeneratingSetReport, Status};
use liftkit::stabilizers::FactorEngine;
use liftkit::stabilizers::{stab_claim, verify_stab_modk, StabError};
use liftkit::words::ParseError;
use liftkit::{psi, BoundError, EnumerationBound, TwistWord};

macro_rules! say {
    ($o:expr, $($t:tt)*) => {{
        let _ = writeln!($o, $($t)*);
    }};
}

const EXIT_USAGE: u8 = 2;
const EXIT_BOUND: u8 = 3;
const EXIT_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "liftkit", version, about = "Liftable mapping classes of abelian covers of the genus-2 surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverName {
    Cyclic,
    Klein,
    Elementary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long, value_enum, default_value = "cyclic")]
    cover: CoverName,
    /// Modulus; the deck group exponent.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Rank of an elementary cover.
    #[arg(long)]
    r: Option<u32>,
    /// Number of `a`-curves mapped nontrivially by an elementary cover.
    #[arg(long = "K")]
    big_k: Option<u32>,
    /// Allow enumerations marked heavy (k = 5).
    #[arg(long)]
    allow_heavy: bool,
}

impl CoverArgs {
    fn spec(&self) -> Result<CoverSpec, Failure> {
        let kind = match self.cover {
            CoverName::Cyclic => CoverKind::Cyclic { k: self.k },
            CoverName::Klein => {
                if self.k != 2 {
                    return Err(Failure::usage(format!("the Klein cover has k = 2, got {}", self.k)));
                }
                CoverKind::Klein
            }
            CoverName::Elementary => {
                let r = self.r.ok_or_else(|| Failure::usage("--r is required for elementary covers"))?;
                let big_k = self.big_k.ok_or_else(|| Failure::usage("--K is required for elementary covers"))?;
                CoverKind::Elementary { k: self.k, r, big_k }
            }
        };
        make_cover(kind).map_err(Failure::from)
    }

    fn bound(&self) -> EnumerationBound {
        EnumerationBound::from_env(self.allow_heavy)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Vertex and edge orbits of the mod-k curve graph.
    QuotientGraph {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Tests whether a twist word lifts to the cover.
    Liftable {
        #[command(flatten)]
        cover: CoverArgs,
        word: String,
    },
    /// Checks a generating set against the liftable image mod k.
    VerifyGenset {
        #[command(flatten)]
        cover: CoverArgs,
        /// One word per line; defaults to the built-in set for the cover.
        #[arg(long)]
        gens: Option<PathBuf>,
        /// Save the JSON report here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Runs the full computation and writes a report.
    Pipeline {
        #[command(flatten)]
        cover: CoverArgs,
        /// Save the JSON report here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Compares two words in the Artin group and under the symplectic representation.
    BraidEq { lhs: String, rhs: String },
    /// Stabilizer claim for a curve, its mod-k check and a sample factorization.
    Stab {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value = "e")]
        curve: char,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verifies the assembly theorem on a finite action.
    GraphActionSelftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Instance file with permutations, edges and an optional expected verdict.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Replays the evidence in a saved report.
    Recheck {
        report: PathBuf,
        #[arg(long)]
        allow_heavy: bool,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: m.into() }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::usage(format!("word: {e}"))
    }
}

impl From<BoundError> for Failure {
    fn from(e: BoundError) -> Self {
        Failure { code: EXIT_BOUND, message: e.to_string() }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Bound(b) => b.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<StabError> for Failure {
    fn from(e: StabError) -> Self {
        match e {
            StabError::Graph(g) => g.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Graph(g) => g.into(),
            PipelineError::Stab(s) => s.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::usage(format!("{e:#}"))
    }
}

fn parse_word(text: &str) -> Result<TwistWord, Failure> {
    Ok(TwistWord::parse(text)?)
}

/// Words from a file, skipping blank lines and `#` comments.
fn read_words(path: &Path) -> Result<Vec<TwistWord>, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(TwistWord::parse(line).map_err(|e| Failure::usage(format!("{}:{}: {e}", path.display(), n + 1)))?);
    }
    Ok(out)
}

fn emit(o: &mut String, text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => o.push_str(text),
    }
    Ok(())
}

fn report_code(r: &GeneratingSetReport) -> u8 {
    if r.status == Status::Verified {
        0
    } else {
        EXIT_FAILED
    }
}

fn run(cli: Cli, o: &mut String) -> Result<u8, Failure> {
    match cli.command {
        Command::QuotientGraph { cover, format, out } => {
            let q = quotient_graph(&cover.spec()?, &cover.bound())?;
            let text = match format {
                Format::Json => q.to_json(),
                Format::Dot => q.to_dot(),
            };
            emit(o, &text, &out)?;
            Ok(0)
        }
        Command::Liftable { cover, word } => {
            let spec = cover.spec()?;
            let w = parse_word(&word)?;
            let m = psi(&w);
            if spec.is_liftable(&m)? {
                say!(o, "LIFTABLE");
            } else {
                say!(o, "NOT LIFTABLE");
                let bad = spec.congruence_pattern().violations(&m);
                if !bad.is_empty() {
                    let list: Vec<String> = bad.iter().map(|(i, j)| format!("({i},{j})")).collect();
                    say!(o, "violation at {} mod {}", list.join(", "), spec.k);
                }
            }
            say!(o, "psi({w}) =\n{m}");
            Ok(0)
        }
        Command::VerifyGenset { cover, gens, out } => {
            let spec = cover.spec()?;
            let words = match gens {
                Some(p) => read_words(&p)?,
                None => default_generators(&spec),
            };
            let r = verify_genset(&spec, &words, &cover.bound())?;
            emit(o, &r.to_json(), &out)?;
            eprintln!("{:?}: closure {} of {}", r.status, r.closure.generated_order, r.closure.subgroup_order);
            Ok(report_code(&r))
        }
        Command::Pipeline { cover, out } => {
            let r = run_pipeline(&cover.spec()?, &cover.bound())?;
            emit(o, &r.to_json(), &out)?;
            eprintln!("{:?}", r.status);
            for reason in &r.reasons {
                eprintln!("  {reason}");
            }
            Ok(report_code(&r))
        }
        Command::BraidEq { lhs, rhs } => {
            let c = certify("cli", &parse_word(&lhs)?, &parse_word(&rhs)?);
            say!(o, "{}", c.verdict);
            say!(o, "psi {}", if c.psi_agree { "agree" } else { "differ" });
            Ok(0)
        }
        Command::Stab { cover, curve, seed } => {
            let spec = cover.spec()?;
            let claim = stab_claim(curve, &spec)?;
            say!(o, "{}", serde_json::to_string_pretty(&claim).context("serializing claim")?);
            let modk = verify_stab_modk(curve, &spec, spec.k, &cover.bound())?;
            say!(o, "{}", serde_json::to_string_pretty(&modk).context("serializing check")?);
            let mut ok = modk.verified;
            match FactorEngine::new(curve, &spec) {
                Ok(engine) => {
                    let sample = engine.sample_seeded(seed, 8);
                    match engine.factor(&sample) {
                        Ok(wit) => {
                            ok &= wit.residual.is_identity();
                            say!(o, "{}", serde_json::to_string_pretty(&wit).context("serializing witness")?);
                        }
                        Err(e) => {
                            ok = false;
                            eprintln!("factorization failed: {e}");
                        }
                    }
                }
                Err(e) => eprintln!("no factorization engine: {e}"),
            }
            Ok(if ok { 0 } else { EXIT_FAILED })
        }
        Command::GraphActionSelftest { seed, count, instance } => {
            let instances: Vec<(String, FiniteActionInstance)> = match instance {
                Some(p) => {
                    let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    let inst = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
                    vec![(p.display().to_string(), inst)]
                }
                None => (seed..seed.saturating_add(count)).map(|s| (format!("seed {s}"), random_instance(s))).collect(),
            };
            let mut code = 0;
            for (name, inst) in instances {
                let v = verify_finite_instance(&inst).map_err(|e| Failure::usage(format!("{name}: {e}")))?;
                let agrees = inst.expected.map_or(v.verified, |e| e == v.verified);
                say!(o, 
                    "{name}: {} (group {}, closure {}, {} vertex orbits, {} edge orbits)",
                    if agrees { "ok" } else { "MISMATCH" },
                    v.group_order,
                    v.closure_order,
                    v.vertex_orbits,
                    v.edge_orbits
                );
                if !agrees {
                    code = EXIT_FAILED;
                }
            }
            Ok(code)
        }
        Command::Recheck { report, allow_heavy } => {
            let text = fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let parsed: GeneratingSetReport =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", report.display()))?;
            let outcome = recheck(&parsed, &EnumerationBound::from_env(allow_heavy));
            for m in &outcome.mismatches {
                say!(o, "mismatch: {m}");
            }
            say!(o, "{} checks, {} mismatches", outcome.checks, outcome.mismatches.len());
            Ok(if outcome.ok() { 0 } else { EXIT_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut o = String::new();
    let result = run(cli, &mut o);
    // a closed pipe downstream is not an error
    let _ = std::io::stdout().lock().write_all(o.as_bytes());
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String) {
        let cli = Cli::try_parse_from(std::iter::once("liftkit").chain(args.iter().copied())).expect("valid arguments");
        let mut o = String::new();
        let code = match run(cli, &mut o) {
            Ok(c) => c,
            Err(f) => f.code,
        };
        (code, o)
    }

    #[test]
    fn liftable_verdicts() {
        let (code, out) = call(&["liftable", "--k", "2", "b"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("NOT LIFTABLE\nviolation at (2,1)"));
        assert!(call(&["liftable", "--k", "2", "b^2"]).1.starts_with("LIFTABLE"));
        assert!(call(&["liftable", "--k", "3", ""]).1.starts_with("LIFTABLE"));
        assert_eq!(call(&["liftable", "b^"]).0, EXIT_USAGE);
    }

    #[test]
    fn braid_eq_lines() {
        assert_eq!(call(&["braid-eq", "(b c)^6", "(b^3 c)^3"]).1, "EQUAL\npsi agree\n");
        assert_eq!(call(&["braid-eq", "a b", "b a"]).1, "NOT-EQUAL-IN-ARTIN\npsi differ\n");
        assert!(call(&["braid-eq", "I", "I"]).1.starts_with("UNSUPPORTED"));
    }

    #[test]
    fn quotient_graph_json_and_dot() {
        let (code, out) = call(&["quotient-graph", "--k", "2"]);
        assert_eq!(code, 0);
        let q: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(q["vertices"].as_array().unwrap().len(), 3);
        assert_eq!(q["tree"].as_array().unwrap().len(), 2);
        let (_, dot) = call(&["quotient-graph", "--cover", "klein", "--format", "dot"]);
        assert!(dot.starts_with("graph quotient {"));
        // byte-reproducible
        assert_eq!(call(&["quotient-graph", "--k", "3"]).1, call(&["quotient-graph", "--k", "3"]).1);
    }

    #[test]
    fn cover_and_bound_errors() {
        assert_eq!(call(&["quotient-graph", "--k", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["quotient-graph", "--cover", "klein", "--k", "3"]).0, EXIT_USAGE);
        assert_eq!(call(&["quotient-graph", "--cover", "elementary", "--k", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["quotient-graph", "--k", "5"]).0, EXIT_BOUND);
        assert_eq!(call(&["pipeline", "--k", "11", "--allow-heavy"]).0, EXIT_BOUND);
        assert!(Cli::try_parse_from(["liftkit", "quotient-graph", "--cover", "torus"]).is_err());
    }

    #[test]
    fn word_files_skip_comments_and_blanks() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("gens.txt");
        fs::write(&p, "# built-in k = 2 set\na\n\n  b^2\nc\n# d is below\nd\ne\n").unwrap();
        let words = read_words(&p).unwrap();
        assert_eq!(words.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["a", "b^2", "c", "d", "e"]);
        fs::write(&p, "a\nb^x\n").unwrap();
        let err = read_words(&p).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        assert!(err.message.contains(":2:"));
    }

    #[test]
    fn verify_genset_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("gens.txt");
        fs::write(&p, "a\nb^2\nc\ne\n").unwrap();
        let (code, out) = call(&["verify-genset", "--k", "2", "--gens", p.to_str().unwrap()]);
        assert_eq!(code, EXIT_FAILED);
        assert!(out.contains("\"FAILED\""));
        assert_eq!(call(&["verify-genset", "--k", "3"]).0, 0);
    }

    #[test]
    fn report_round_trip_through_recheck() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        let (code, _) = call(&["pipeline", "--cover", "klein", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        let (code, out) = call(&["recheck", p.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        assert!(out.ends_with(", 0 mismatches\n"));
        let tampered = fs::read_to_string(&p).unwrap().replace("\"liftable\": true", "\"liftable\": false");
        fs::write(&p, tampered).unwrap();
        assert_eq!(call(&["recheck", p.to_str().unwrap()]).0, EXIT_FAILED);
    }

    #[test]
    fn stab_and_selftest() {
        let (code, out) = call(&["stab", "--k", "3", "--curve", "b", "--seed", "9"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"stabilizer_order\""));
        assert_eq!(call(&["stab", "--k", "2", "--curve", "z"]).0, EXIT_USAGE);
        let (code, out) = call(&["graph-action-selftest", "--seed", "3", "--count", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
    }

    #[test]
    fn instance_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("inst.json");
        let mut inst = liftkit::assembly::triangle_fixture();
        fs::write(&p, serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(call(&["graph-action-selftest", "--instance", p.to_str().unwrap()]).0, 0);
        inst.expected = Some(false);
        fs::write(&p, serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(call(&["graph-action-selftest", "--instance", p.to_str().unwrap()]).0, EXIT_FAILED);
        fs::write(&p, "{").unwrap();
        assert_eq!(call(&["graph-action-selftest", "--instance", p.to_str().unwrap()]).0, EXIT_USAGE);
    }
}

//! `comlen` — commutator length and minimal commutator presentations in
//! free groups.
//!
//! Exit codes: 0 success, 2 bad input (unparsable word, bad flags, bad
//! corpus file), 3 word outside the commutator subgroup, 4 backend
//! disagreement (which would indicate a bug — please report it).

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use comlen::{corpus, pairing, search, Alphabet, ReducedWord, SearchOptions, SearchStats, Word};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "comlen",
    version,
    about = "Commutator length and minimal commutator presentations in free groups",
    long_about = "Computes the commutator length cl(w) of words in the commutator subgroup \
                  of a free group, produces provably minimal presentations \
                  w = [u1,v1]...[um,vm], and decides whether a word is a single commutator.\n\n\
                  Words are written like `[x,y]^2 (y x^-1)^3`: generators are lowercase names, \
                  `^` raises to an integer power, `[u,v]` is the commutator u^-1 v^-1 u v, and \
                  `1` is the empty word."
)]
struct Cli {
    /// Generator names, comma separated (e.g. `x,y`); default: inferred
    /// from the word in order of first appearance
    #[arg(long, global = true, value_name = "NAMES")]
    alphabet: Option<String>,

    /// Emit a JSON report on stdout instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for the breadth-first backend
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the commutator length of a word
    Cl {
        word: String,
        /// `both` runs the search and the pairing formula and cross-checks
        #[arg(long, value_enum, default_value_t = ClBackend::Both)]
        backend: ClBackend,
    },
    /// Produce a minimal commutator presentation of a word
    Present {
        word: String,
        #[arg(long, value_enum, default_value_t = PresentBackend::Bfs)]
        backend: PresentBackend,
        /// Print every distinct minimal presentation the search reaches
        /// (bfs only)
        #[arg(long)]
        all_min: bool,
        /// Disable merging of residues that agree up to rotation (bfs
        /// only; explores the raw peel tree)
        #[arg(long)]
        no_dedup: bool,
    },
    /// Decide whether a word is a single commutator g [u,v] g^-1
    IsCommutator { word: String },
    /// Generate seeded random products of conjugated commutators
    Random {
        /// Commutators per word
        #[arg(long, default_value_t = 1)]
        pairs: usize,
        /// Longest factor length for u, v and the conjugators
        #[arg(long, default_value_t = 4)]
        factor_len: usize,
        /// Number of generators (ignored when --alphabet is given)
        #[arg(long, default_value_t = 2)]
        gens: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Words to generate
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Time the backends over a corpus of words and report medians
    Bench {
        /// File with one word per line; `#` starts a comment
        file: Option<PathBuf>,
        /// Generate a random corpus instead of reading a file
        #[arg(long)]
        random: bool,
        /// Corpus size for --random
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        pairs: usize,
        #[arg(long, default_value_t = 3)]
        factor_len: usize,
        #[arg(long, default_value_t = 2)]
        gens: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Backends to time, comma separated
        #[arg(long, value_enum, value_delimiter = ',',
              default_values_t = [BenchBackend::Bfs, BenchBackend::Pairing, BenchBackend::Guided])]
        backends: Vec<BenchBackend>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClBackend {
    Bfs,
    Pairing,
    Guided,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresentBackend {
    Bfs,
    Guided,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchBackend {
    Bfs,
    Pairing,
    Guided,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

impl fmt::Display for ClBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&value_name(self))
    }
}

impl fmt::Display for PresentBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&value_name(self))
    }
}

impl fmt::Display for BenchBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&value_name(self))
    }
}

/// A failed run: the message goes to stderr, the code to the shell.
enum Failure {
    /// exit 2
    Usage(String),
    /// exit 3
    Subgroup(String),
    /// exit 4
    Disagree(String),
}

fn main() -> ExitCode {
    // die silently when the reader of a pipe goes away (`comlen ... | head`),
    // like other line-oriented tools, instead of panicking on EPIPE
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Usage(m) => (2, m),
                Failure::Subgroup(m) => (3, m),
                Failure::Disagree(m) => (4, m),
            };
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    match &cli.command {
        Command::Cl { word, backend } => run_cl(&cli, word, *backend),
        Command::Present { word, backend, all_min, no_dedup } => {
            run_present(&cli, word, *backend, *all_min, *no_dedup)
        }
        Command::IsCommutator { word } => run_is_commutator(&cli, word),
        Command::Random { pairs, factor_len, gens, seed, count } => {
            run_random(&cli, *pairs, *factor_len, *gens, *seed, *count)
        }
        Command::Bench { file, random, count, pairs, factor_len, gens, seed, backends } => {
            run_bench(&cli, file.as_deref(), *random, *count, *pairs, *factor_len, *gens, *seed, backends)
        }
    }
}

fn parse_alphabet(names: &str) -> Result<Alphabet, Failure> {
    Alphabet::new(names.split(',').map(str::trim))
        .map_err(|e| Failure::Usage(format!("bad alphabet {names:?}: {e}")))
}

fn load_word(cli: &Cli, text: &str) -> Result<ReducedWord, Failure> {
    let parsed = match &cli.alphabet {
        Some(names) => parse_alphabet(names)?.parse(text),
        None => Word::parse(text),
    };
    parsed
        .map(|w| w.reduced())
        .map_err(|e| Failure::Usage(format!("cannot parse {text:?}: {e}")))
}

fn subgroup_failure(w: &ReducedWord) -> Failure {
    let detail = w
        .exponent_sums()
        .iter()
        .enumerate()
        .map(|(g, s)| format!("{}: {s}", w.alphabet().name(g)))
        .collect::<Vec<_>>()
        .join(", ");
    Failure::Subgroup(format!(
        "word is not in the commutator subgroup (exponent sums: {detail})"
    ))
}

fn require_subgroup(w: &ReducedWord) -> Result<(), Failure> {
    if w.in_commutator_subgroup() {
        Ok(())
    } else {
        Err(subgroup_failure(w))
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

#[derive(Serialize)]
struct PairReport {
    u: String,
    v: String,
}

/// JSON report for `cl` and `present`.
#[derive(Serialize)]
struct RunReport {
    input: String,
    reduced: String,
    backend: String,
    cl: usize,
    /// one entry per presentation, each a list of [u,v] pairs; absent for
    /// length-only runs
    #[serde(skip_serializing_if = "Option::is_none")]
    presentations: Option<Vec<Vec<PairReport>>>,
    /// true when the result was confirmed beyond the computing backend:
    /// an independent backend agreed, or presentations were re-expanded
    verified: bool,
    stats: SearchStats,
    elapsed_ms: u64,
}

fn print_report(report: &RunReport) {
    println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
}

fn pairing_stats(result: &pairing::PairingLength, start: Instant) -> SearchStats {
    SearchStats {
        pairings_enumerated: result.extremal.as_ref().map_or(0, |e| e.enumerated),
        elapsed_ms: elapsed_ms(start),
        ..SearchStats::default()
    }
}

fn run_cl(cli: &Cli, word_text: &str, backend: ClBackend) -> Result<(), Failure> {
    let start = Instant::now();
    let w = load_word(cli, word_text)?;
    require_subgroup(&w)?;
    let opts = SearchOptions { threads: cli.threads, ..SearchOptions::default() };
    let checked = "membership checked above";
    let (cl, verified, stats) = match backend {
        ClBackend::Bfs => {
            let r = search::bfs_commutator_length(&w, &opts).expect(checked);
            (r.cl, false, r.stats)
        }
        ClBackend::Pairing => {
            let r = pairing::commutator_length(&w).expect(checked);
            (r.cl, false, pairing_stats(&r, start))
        }
        ClBackend::Guided => {
            let r = search::guided_presentation(&w).expect(checked);
            (r.cl(), false, r.stats)
        }
        ClBackend::Both => {
            let b = search::bfs_commutator_length(&w, &opts).expect(checked);
            let p = pairing::commutator_length(&w).expect(checked);
            if b.cl != p.cl {
                return Err(Failure::Disagree(format!(
                    "backends disagree on {w}: bfs found {}, pairing found {}",
                    b.cl, p.cl
                )));
            }
            let mut stats = b.stats;
            stats.pairings_enumerated = p.extremal.as_ref().map_or(0, |e| e.enumerated);
            (b.cl, true, stats)
        }
    };
    if cli.json {
        print_report(&RunReport {
            input: word_text.to_string(),
            reduced: w.to_string(),
            backend: backend.to_string(),
            cl,
            presentations: None,
            verified,
            stats,
            elapsed_ms: elapsed_ms(start),
        });
    } else {
        println!("cl = {cl}");
    }
    Ok(())
}

fn run_present(
    cli: &Cli,
    word_text: &str,
    backend: PresentBackend,
    all_min: bool,
    no_dedup: bool,
) -> Result<(), Failure> {
    if backend == PresentBackend::Guided && (all_min || no_dedup) {
        return Err(Failure::Usage("--all-min and --no-dedup require --backend bfs".into()));
    }
    let start = Instant::now();
    let w = load_word(cli, word_text)?;
    require_subgroup(&w)?;
    let checked = "membership checked above";
    let result = match backend {
        PresentBackend::Bfs => {
            let opts =
                SearchOptions { dedup: !no_dedup, threads: cli.threads, all_minimal: all_min };
            search::minimal_presentations(&w, &opts).expect(checked)
        }
        PresentBackend::Guided => search::guided_presentation(&w).expect(checked),
    };
    if cli.json {
        let presentations = result
            .presentations
            .iter()
            .map(|p| {
                p.pairs()
                    .iter()
                    .map(|(u, v)| PairReport { u: u.to_string(), v: v.to_string() })
                    .collect()
            })
            .collect();
        print_report(&RunReport {
            input: word_text.to_string(),
            reduced: w.to_string(),
            backend: backend.to_string(),
            cl: result.cl(),
            presentations: Some(presentations),
            verified: true,
            stats: result.stats,
            elapsed_ms: elapsed_ms(start),
        });
    } else {
        println!("cl = {}", result.cl());
        for p in &result.presentations {
            println!("{p}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct WitnessReport {
    input: String,
    reduced: String,
    is_commutator: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessParts>,
    verified: bool,
    elapsed_ms: u64,
}

#[derive(Serialize)]
struct WitnessParts {
    conjugator: String,
    u: String,
    v: String,
}

fn run_is_commutator(cli: &Cli, word_text: &str) -> Result<(), Failure> {
    let start = Instant::now();
    let w = load_word(cli, word_text)?;
    let witness = search::single_commutator_witness(&w).map_err(|_| subgroup_failure(&w))?;
    if cli.json {
        let report = WitnessReport {
            input: word_text.to_string(),
            reduced: w.to_string(),
            is_commutator: witness.is_some(),
            witness: witness.as_ref().map(|wit| WitnessParts {
                conjugator: wit.conjugator.to_string(),
                u: wit.u.to_string(),
                v: wit.v.to_string(),
            }),
            verified: true,
            elapsed_ms: elapsed_ms(start),
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        match witness {
            Some(wit) => {
                println!("yes");
                println!("conjugator = {}", wit.conjugator);
                println!("u = {}", wit.u);
                println!("v = {}", wit.v);
            }
            None => println!("no"),
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RandomReport {
    seed: u64,
    pairs: usize,
    factor_len: usize,
    alphabet: Vec<String>,
    words: Vec<String>,
}

fn random_alphabet(cli: &Cli, gens: usize) -> Result<Alphabet, Failure> {
    match &cli.alphabet {
        Some(names) => parse_alphabet(names),
        None if gens == 0 => Err(Failure::Usage("--gens must be at least 1".into())),
        None => Ok(Alphabet::with_rank(gens)),
    }
}

fn run_random(
    cli: &Cli,
    pairs: usize,
    factor_len: usize,
    gens: usize,
    seed: u64,
    count: usize,
) -> Result<(), Failure> {
    if factor_len == 0 {
        return Err(Failure::Usage("--factor-len must be at least 1".into()));
    }
    let alphabet = random_alphabet(cli, gens)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<String> = (0..count)
        .map(|_| corpus::random_commutator_product(&alphabet, pairs, factor_len, &mut rng).to_string())
        .collect();
    if cli.json {
        let report = RandomReport {
            seed,
            pairs,
            factor_len,
            alphabet: alphabet.names().to_vec(),
            words,
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for word in words {
            println!("{word}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchReport {
    words: usize,
    backends: Vec<BenchRow>,
    /// every backend computed the same length for every word
    agreement: bool,
}

#[derive(Serialize)]
struct BenchRow {
    backend: String,
    median_ms: u64,
    total_ms: u64,
}

fn median(times: &mut [u64]) -> u64 {
    times.sort_unstable();
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2
    }
}

fn read_corpus(cli: &Cli, path: &std::path::Path) -> Result<Vec<ReducedWord>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut words = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let w = load_word(cli, line)
            .map_err(|f| match f {
                Failure::Usage(m) => {
                    Failure::Usage(format!("{}:{}: {m}", path.display(), lineno + 1))
                }
                other => other,
            })?;
        words.push(w);
    }
    Ok(words)
}

#[allow(clippy::too_many_arguments)]
fn run_bench(
    cli: &Cli,
    file: Option<&std::path::Path>,
    random: bool,
    count: usize,
    pairs: usize,
    factor_len: usize,
    gens: usize,
    seed: u64,
    backends: &[BenchBackend],
) -> Result<(), Failure> {
    let words = match (file, random) {
        (Some(_), true) => {
            return Err(Failure::Usage("give a corpus file or --random, not both".into()))
        }
        (Some(path), false) => read_corpus(cli, path)?,
        (None, true) => {
            if factor_len == 0 {
                return Err(Failure::Usage("--factor-len must be at least 1".into()));
            }
            let alphabet = random_alphabet(cli, gens)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| corpus::random_commutator_product(&alphabet, pairs, factor_len, &mut rng))
                .collect()
        }
        (None, false) => {
            return Err(Failure::Usage("give a corpus file or use --random".into()))
        }
    };
    if words.is_empty() {
        return Err(Failure::Usage("the corpus is empty".into()));
    }
    for w in &words {
        require_subgroup(w)?;
    }

    // keep each backend at most once, in the order given
    let mut chosen: Vec<BenchBackend> = Vec::new();
    for &b in backends {
        if !chosen.contains(&b) {
            chosen.push(b);
        }
    }

    let opts = SearchOptions { threads: cli.threads, ..SearchOptions::default() };
    let checked = "membership checked above";
    let mut lengths: Vec<Option<usize>> = vec![None; words.len()];
    let mut rows = Vec::new();
    for backend in chosen {
        let mut times = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let start = Instant::now();
            let cl = match backend {
                BenchBackend::Bfs => search::bfs_commutator_length(w, &opts).expect(checked).cl,
                BenchBackend::Pairing => pairing::commutator_length(w).expect(checked).cl,
                BenchBackend::Guided => search::guided_presentation(w).expect(checked).cl(),
            };
            times.push(elapsed_ms(start));
            match lengths[i] {
                None => lengths[i] = Some(cl),
                Some(prev) if prev != cl => {
                    return Err(Failure::Disagree(format!(
                        "backends disagree on {w}: {prev} vs {cl} ({backend})"
                    )))
                }
                Some(_) => {}
            }
        }
        let total_ms = times.iter().sum();
        rows.push(BenchRow { backend: backend.to_string(), median_ms: median(&mut times), total_ms });
    }

    if cli.json {
        let report = BenchReport { words: words.len(), backends: rows, agreement: true };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for row in &rows {
            println!(
                "{}: median {} ms, total {} ms over {} words",
                row.backend, row.median_ms, row.total_ms, words.len()
            );
        }
        println!("all backends agree on every word");
    }
    Ok(())
}

//! `multifrac`: multifraction reduction from the command line.
//!
//! Every subcommand names its presentation first, either as a preset
//! (`braid:3`, `free:2`, `raag:ab,bc`, `raag-abc`, `affine-A2`) or as a
//! path to a presentation file with `atoms:` / `rel:` / `trust:` lines.
//! Signed words use uppercase for inverses when atoms are single letters
//! (`a b a B A B`) and `name^-1` tokens otherwise. Reports are `key: value`
//! lines; exit codes are 0 (decided), 2 (invalid input), 3 (undecided),
//! 4 (a required Ore/gcd condition failed), 5 (a search cap was hit).

use clap::{Parser, Subcommand, ValueEnum};
use multifrac::{
    gamma_shape, render_dot, BasicCaps, BasicTable, Error, Monoid, Multifraction, Presentation,
    Result, RuleId, SolveBasis, Verdict,
};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::{fs, io};

#[derive(Parser)]
#[command(name = "multifrac", version, about = "Multifraction reduction in gcd-monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format; `keyvalue` keeps even traces to `key: value` lines.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cap on the size of one word's equivalence class.
    #[arg(long, global = true, default_value_t = multifrac::DEFAULT_CLASS_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    class_cap: u64,

    /// Cap on the number of basic elements the closure may generate.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    basics_cap: u64,

    /// Cap on visited nodes in exhaustive reduction searches.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    node_cap: u64,

    /// Skip the 3-Ore gate of `nf` and trust the presentation.
    #[arg(long = "assert-3ore", global = true)]
    assert_3ore: bool,

    /// Use the exhaustive reduction oracle instead of the universal
    /// strategy (`solve`, `reduce`); exposes non-confluence.
    #[arg(long, global = true)]
    all: bool,

    /// Thread count for the parallel checker and oracle. Never changes
    /// any output, only how fast it arrives.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Syntactic reversing is the default lcm accelerator; the flag exists
    /// so scripts can say so explicitly.
    #[arg(long, global = true, hide = true)]
    use_reversing_accelerator: bool,

    /// Compute lcms by bounded search alone, without syntactic reversing.
    #[arg(long, global = true, conflicts_with = "use_reversing_accelerator")]
    no_reversing_accelerator: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Keyvalue,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a signed word spells the group identity.
    Solve { source: String, word: String },
    /// Normal form of a signed word, with depth and denominator.
    Nf { source: String, word: String },
    /// Whether two signed words represent the same group element.
    Equal { source: String, left: String, right: String },
    /// Reduce a multifraction, printing the step trace (or, with --all,
    /// every irreducible reduct).
    Reduce { source: String, mf: String },
    /// Check the 3-Ore condition; classifies type FC for Artin-Tits input.
    Check { source: String },
    /// List both families of basic elements and the length constant.
    Basics { source: String },
    /// The equivalence class of a positive word.
    Class { source: String, word: String },
    /// Left and right lcms of two monoid elements.
    Lcm { source: String, a: String, b: String },
    /// Left and right gcds of two monoid elements.
    Gcd { source: String, a: String, b: String },
    /// DOT diagram of a multifraction's reduction, or of the standard
    /// shape when the source is `gamma:<n>`.
    Diagram {
        source: String,
        mf: Option<String>,
        /// Write the DOT text here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Settings shared by every subcommand, resolved from the global flags.
struct CliConfig {
    format: Format,
    class_cap: usize,
    basics_cap: usize,
    node_cap: usize,
    assert_3ore: bool,
    all: bool,
    accelerate: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = CliConfig {
        format: cli.format,
        class_cap: cli.class_cap as usize,
        basics_cap: cli.basics_cap as usize,
        node_cap: cli.node_cap as usize,
        assert_3ore: cli.assert_3ore,
        all: cli.all,
        accelerate: !cli.no_reversing_accelerator,
    };
    match run(&cli.command, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

/// Exit code for a failed run: 4 when the monoid breaks a required
/// algebraic condition, 5 when a search cap was exhausted, 2 otherwise
/// (malformed or unsuitable input).
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::ThreeOreViolation { .. }
        | Error::NotGcdMonoid { .. }
        | Error::NotConditionalLcm { .. }
        | Error::AmbiguousQuotient { .. }
        | Error::SupportIllDefined { .. }
        | Error::IrreducibilityAssertionFailed { .. } => 4,
        Error::ClassSizeExceeded { .. }
        | Error::NodeCapExceeded { .. }
        | Error::SubsetBlowup { .. }
        | Error::BasicClosureDiverges { .. } => 5,
        _ => 2,
    }
}

fn kv(key: &str, value: impl Display) {
    println!("{key}: {value}");
}

/// Load the presentation named by `source`: an existing file wins, any
/// other name must be a preset.
fn load_monoid(source: &str, cfg: &CliConfig) -> Result<Monoid> {
    let pres = if Path::new(source).is_file() {
        let text = fs::read_to_string(source).map_err(|e| io_error(source, &e))?;
        Presentation::from_text(&text)?
    } else {
        Presentation::preset(source)?
    };
    let mut m = Monoid::validate(pres, cfg.class_cap)?;
    m.set_accelerate(cfg.accelerate);
    Ok(m)
}

fn io_error(path: &str, e: &io::Error) -> Error {
    Error::Parse { detail: format!("{path}: {e}") }
}

fn table_of(m: &Monoid, cfg: &CliConfig) -> Result<Arc<BasicTable>> {
    m.basic_table_with(BasicCaps { size_cap: cfg.basics_cap, ..BasicCaps::default() })
}

fn run(command: &Command, cfg: &CliConfig) -> Result<u8> {
    match command {
        Command::Solve { source, word } => cmd_solve(source, word, cfg),
        Command::Nf { source, word } => cmd_nf(source, word, cfg),
        Command::Equal { source, left, right } => cmd_equal(source, left, right, cfg),
        Command::Reduce { source, mf } => cmd_reduce(source, mf, cfg),
        Command::Check { source } => cmd_check(source, cfg),
        Command::Basics { source } => cmd_basics(source, cfg),
        Command::Class { source, word } => cmd_class(source, word, cfg),
        Command::Lcm { source, a, b } => cmd_lcm(source, a, b, cfg),
        Command::Gcd { source, a, b } => cmd_gcd(source, a, b, cfg),
        Command::Diagram { source, mf, out } => cmd_diagram(source, mf.as_deref(), out.as_deref(), cfg),
    }
}

fn basis_name(basis: SolveBasis) -> &'static str {
    match basis {
        SolveBasis::Universal => "universal",
        SolveBasis::Exhaustive => "exhaustive",
    }
}

fn cmd_solve(source: &str, word: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let t = table_of(&m, cfg)?;
    let w = m.presentation().parse_signed(word)?;
    let verdict = if cfg.all {
        // Straight to the exhaustive tree: any empty leaf certifies the
        // identity, a unique nonempty leaf refutes it, anything else
        // stays undecided.
        let a = m.parse_signed(&w)?;
        match m.naive_reduce(&t, &a, cfg.node_cap) {
            Ok(leaves) => {
                if leaves.iter().any(Multifraction::is_empty) {
                    Verdict::Identity(SolveBasis::Exhaustive)
                } else if leaves.len() == 1 {
                    Verdict::NotIdentity(SolveBasis::Exhaustive)
                } else {
                    Verdict::Undecided {
                        reason: format!("{} distinct irreducible reducts, none empty", leaves.len()),
                    }
                }
            }
            Err(Error::NodeCapExceeded { cap }) => Verdict::Undecided {
                reason: format!("exhaustive search exceeded {cap} nodes"),
            },
            Err(e) => return Err(e),
        }
    } else {
        m.solve_signed(&t, &w, cfg.node_cap)?
    };
    match verdict {
        Verdict::Identity(b) => {
            kv("identity", "true");
            kv("basis", basis_name(b));
            Ok(0)
        }
        Verdict::NotIdentity(b) => {
            kv("identity", "false");
            kv("basis", basis_name(b));
            Ok(0)
        }
        Verdict::Undecided { reason } => {
            kv("identity", "undecided");
            kv("reason", reason);
            Ok(3)
        }
    }
}

fn cmd_nf(source: &str, word: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let t = table_of(&m, cfg)?;
    if !cfg.assert_3ore {
        let report = m.check_3ore(t.clone())?;
        if !(report.satisfies_right_3ore && report.satisfies_left_3ore) {
            kv("3ore", "fail");
            if let Some((x, y, z)) = &report.witness {
                kv("witness", format!("{} {} {}", m.render(x), m.render(y), m.render(z)));
            }
            return Ok(4);
        }
    }
    let w = m.presentation().parse_signed(word)?;
    let nf = m.nf_of_signed(&t, &w)?;
    kv("nf", m.render_mf(nf.mf()));
    kv("depth", nf.depth());
    if !nf.is_identity() {
        kv("denominator", m.render(&nf.denominator()?));
    }
    Ok(0)
}

fn cmd_equal(source: &str, left: &str, right: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let t = table_of(&m, cfg)?;
    let w1 = m.presentation().parse_signed(left)?;
    let w2 = m.presentation().parse_signed(right)?;
    kv("equal", m.group_equal(&t, &w1, &w2)?);
    Ok(0)
}

fn cmd_reduce(source: &str, mf: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let t = table_of(&m, cfg)?;
    let a = m.parse_mf(mf)?;
    if cfg.all {
        let leaves = m.naive_reduce(&t, &a, cfg.node_cap)?;
        kv("reducts", leaves.len());
        for leaf in &leaves {
            kv("reduct", m.render_mf(leaf));
        }
        return Ok(0);
    }
    let (_, trace) = m.reduce_hat(&t, &a)?;
    match cfg.format {
        Format::Text => println!("{}", m.trace_to_text(&trace)),
        Format::Keyvalue => {
            kv("initial", m.render_mf(&trace.initial));
            for (rule, snap) in &trace.steps {
                match rule {
                    RuleId::Rix { level, parameter } => kv(
                        "step",
                        format!("R {} {} {}", level, m.render(parameter), m.render_mf(snap)),
                    ),
                    RuleId::Rtimes => kv("step", format!("Rx {}", m.render_mf(snap))),
                }
            }
            kv("final", m.render_mf(&trace.final_mf));
        }
    }
    Ok(0)
}

fn cmd_check(source: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let t = table_of(&m, cfg)?;
    let report = m.check_3ore(t.clone())?;
    let pass = report.satisfies_right_3ore && report.satisfies_left_3ore;
    kv("3ore", if pass { "pass" } else { "fail" });
    if let Some((x, y, z)) = &report.witness {
        kv("witness", format!("{} {} {}", m.render(x), m.render(y), m.render(z)));
    }
    if m.is_artin_tits() {
        let fc = m.classify_fc(t)?;
        kv("fc", if fc == multifrac::FcStatus::Fc { "yes" } else { "no" });
    }
    Ok(0)
}

fn cmd_basics(source: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let t = table_of(&m, cfg)?;
    kv("right-count", t.right_basics.len());
    kv("left-count", t.left_basics.len());
    kv("c-max", t.c_max);
    for e in &t.right_basics {
        kv("right", m.render(e));
    }
    for e in &t.left_basics {
        kv("left", m.render(e));
    }
    Ok(0)
}

fn cmd_class(source: &str, word: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let w = m.presentation().parse_word(word)?;
    let class = m.class(&w)?;
    kv("canonical", m.presentation().render_word(class.canonical()));
    kv("size", class.size());
    for member in class.words() {
        kv("word", m.presentation().render_word(member));
    }
    Ok(0)
}

fn cmd_lcm(source: &str, a: &str, b: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let t = table_of(&m, cfg)?;
    let ea = m.parse_element(a)?;
    let eb = m.parse_element(b)?;
    match m.right_lcm(&t, &ea, &eb)? {
        Some(r) => kv("right-lcm", m.render(&r.lcm)),
        None => kv("right-lcm", "none"),
    }
    match m.left_lcm(&t, &ea, &eb)? {
        Some(r) => kv("left-lcm", m.render(&r.lcm)),
        None => kv("left-lcm", "none"),
    }
    Ok(0)
}

fn cmd_gcd(source: &str, a: &str, b: &str, cfg: &CliConfig) -> Result<u8> {
    let m = load_monoid(source, cfg)?;
    let ea = m.parse_element(a)?;
    let eb = m.parse_element(b)?;
    kv("left-gcd", m.render(&m.left_gcd(&ea, &eb)?));
    kv("right-gcd", m.render(&m.right_gcd(&ea, &eb)?));
    Ok(0)
}

fn cmd_diagram(source: &str, mf: Option<&str>, out: Option<&Path>, cfg: &CliConfig) -> Result<u8> {
    let dot = if let Some(n) = source.strip_prefix("gamma:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse { detail: format!("bad shape depth `{n}`") })?;
        render_dot(&gamma_shape(n)?)
    } else {
        let text = mf.ok_or(Error::Parse {
            detail: "diagram needs a multifraction, or `gamma:<n>` as the source".to_string(),
        })?;
        let m = load_monoid(source, cfg)?;
        let t = table_of(&m, cfg)?;
        let a = m.parse_mf(text)?;
        let (_, trace) = m.reduce_universal(&t, &a)?;
        render_dot(&m.emit_universal_diagram(&t, &trace)?)
    };
    match out {
        Some(path) => fs::write(path, dot).map_err(|e| io_error(&path.display().to_string(), &e))?,
        None => print!("{dot}"),
    }
    Ok(0)
}

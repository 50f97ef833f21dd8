use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spectra_core::compiler::{
    compile_with_cap, verify_compilation, Construction, VerifyOptions, DEFAULT_N_MIN,
    DEFAULT_WINDOW_CAP,
};
use spectra_core::ground::{measure_size, satisfiable_with_stats, size_bound, to_cnf};
use spectra_core::model_eval::{spectrum_up_to, Method, DEFAULT_ENUMERATION_CAP};
use spectra_core::text::{
    atom_labels, parse_sentence, parse_structure, parse_tm, print_dimacs, print_sentence, KvTree,
    SentenceDocument, TmParseError,
};
use spectra_core::turing::{format_run, run_binary, BoundKind, Outcome, DEFAULT_CONFIGURATION_CAP};
use spectra_core::{
    evaluate_sentence, ground, normalize, CompileError, LogicError, Machine, ModelError,
    NormalizeError, ParseError, TmError,
};

#[derive(Parser)]
#[command(name = "spectra", version, about = "First-order spectra workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Text,
    Dimacs,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enum,
    Ground,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    ThreeVar,
    #[value(name = "two-k-plus-1")]
    TwoKPlus1,
    #[value(name = "two-k-plus-2")]
    TwoKPlus2,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sentence on a structure
    Check {
        sentence: PathBuf,
        structure: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Spectrum of a sentence for N = 1..=max-n
    Spectrum {
        sentence: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "ground")]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        enum_cap: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Print the normal form of a sentence
    Normalize {
        sentence: PathBuf,
        /// variable budget; defaults to the sentence's own count
        #[arg(long)]
        k: Option<usize>,
    },
    /// Ground a sentence over [N]
    Ground {
        sentence: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// write the CNF to this file
        #[arg(long)]
        dimacs: Option<PathBuf>,
        /// also decide satisfiability
        #[arg(long)]
        solve: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Compile a machine into a sentence
    CompileTm {
        machine: PathBuf,
        #[arg(long, value_enum, default_value = "three-var")]
        construction: ConstructionArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW_CAP)]
        window_cap: usize,
        /// write the sentence document here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run a machine on BINARY(N)
    SimulateTm {
        machine: PathBuf,
        #[arg(long)]
        n: u64,
        /// linear, poly:K or poly-half:K
        #[arg(long, default_value = "linear", value_parser = parse_bound)]
        bound: BoundKind,
        #[arg(long, default_value_t = DEFAULT_CONFIGURATION_CAP)]
        config_cap: usize,
        /// print the accepting run
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Compare ground satisfiability of a compiled machine with simulation
    VerifyTm {
        machine: PathBuf,
        #[arg(long, value_enum, default_value = "three-var")]
        construction: ConstructionArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// A..B, inclusive
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<usize>,
        /// smaller N in the range are skipped
        #[arg(long, default_value_t = DEFAULT_N_MIN)]
        n_min: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW_CAP)]
        window_cap: usize,
        #[arg(long, default_value_t = DEFAULT_CONFIGURATION_CAP)]
        config_cap: usize,
        /// decode and re-check every satisfying assignment
        #[arg(long)]
        check_witness: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: usize = a.parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: usize = b.parse().map_err(|_| format!("bad range end `{b}`"))?;
    if a == 0 || a > b {
        return Err(format!("empty or zero-based range {a}..{b}"));
    }
    Ok(a..=b)
}

fn parse_bound(s: &str) -> Result<BoundKind, String> {
    let k = |t: &str| t.parse::<u32>().map_err(|_| format!("bad exponent `{t}`"));
    match s.split_once(':') {
        None if s == "linear" => Ok(BoundKind::Linear),
        Some(("poly", t)) => Ok(BoundKind::Poly(k(t)?)),
        Some(("poly-half", t)) => Ok(BoundKind::PolyHalf(k(t)?)),
        _ => Err(format!("unknown bound `{s}`")),
    }
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

const DISAGREEMENT: u8 = 1;
const USAGE: u8 = 2;
const IO: u8 = 3;
const PARSE: u8 = 4;
const LOGIC: u8 = 5;
const CAP: u8 = 6;
const COMPILE: u8 = 7;
const MACHINE: u8 = 8;

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(PARSE, e)
    }
}

impl From<LogicError> for Failure {
    fn from(e: LogicError) -> Self {
        Failure::new(LOGIC, e)
    }
}

impl From<NormalizeError> for Failure {
    fn from(e: NormalizeError) -> Self {
        Failure::new(LOGIC, e)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::CapExceeded { .. } => Failure::new(CAP, e),
            _ => Failure::new(LOGIC, e),
        }
    }
}

impl From<TmError> for Failure {
    fn from(e: TmError) -> Self {
        match e {
            TmError::ConfigurationCap(_) => Failure::new(CAP, e),
            _ => Failure::new(MACHINE, e),
        }
    }
}

impl From<TmParseError> for Failure {
    fn from(e: TmParseError) -> Self {
        match e {
            TmParseError::Syntax(e) => e.into(),
            TmParseError::Invalid(e) => e.into(),
        }
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::WindowCap { .. } => Failure::new(CAP, e),
            CompileError::BadK { .. } => Failure::new(USAGE, e),
            CompileError::Logic(e) => e.into(),
            CompileError::Normalize(e) => e.into(),
            CompileError::Tm(e) => e.into(),
            CompileError::Unsupported(_) => Failure::new(COMPILE, e),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn load_sentence(path: &Path) -> Result<SentenceDocument, Failure> {
    parse_sentence(&read(path)?).map_err(|e| Failure::new(PARSE, format!("{}:{e}", path.display())))
}

fn load_machine(path: &Path) -> Result<Machine, Failure> {
    parse_tm(&read(path)?).map_err(|e| {
        let f: Failure = e.into();
        Failure::new(f.code, format!("{}: {}", path.display(), f.message))
    })
}

fn construction(c: ConstructionArg, k: usize) -> Construction {
    match c {
        ConstructionArg::ThreeVar => Construction::ThreeVar,
        ConstructionArg::TwoKPlus1 => Construction::TwoKPlus1(k),
        ConstructionArg::TwoKPlus2 => Construction::TwoKPlus2(k),
    }
}

fn no_dimacs(format: Format) -> Result<(), Failure> {
    if format == Format::Dimacs {
        return Err(Failure::new(
            USAGE,
            "dimacs output is only available for `ground`",
        ));
    }
    Ok(())
}

fn emit(format: Format, table: String, kv: KvTree) -> String {
    match format {
        Format::Text => kv.to_text(),
        _ => table,
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Check {
            sentence,
            structure,
            format,
        } => {
            no_dimacs(format)?;
            let doc = load_sentence(&sentence)?;
            let s = parse_structure(&read(&structure)?, &doc.vocabulary)
                .map_err(|e| Failure::new(PARSE, format!("{}:{e}", structure.display())))?;
            let holds = evaluate_sentence(&doc.formula, &s)?;
            let mut kv = KvTree::new();
            let mut t = KvTree::new();
            t.push("size", s.size())
                .push("holds", if holds { "yes" } else { "no" });
            kv.push_tree("check", t);
            Ok(emit(
                format,
                format!("{}\n", if holds { "true" } else { "false" }),
                kv,
            ))
        }
        Command::Spectrum {
            sentence,
            max_n,
            method,
            enum_cap,
            format,
        } => {
            no_dimacs(format)?;
            if max_n == 0 {
                return Err(Failure::new(USAGE, "--max-n must be at least 1"));
            }
            let doc = load_sentence(&sentence)?;
            let method = match method {
                MethodArg::Enum => Method::Enumeration,
                MethodArg::Ground => Method::Grounding,
            };
            let r = spectrum_up_to(&doc.formula, max_n, method, enum_cap)?;
            Ok(emit(format, r.to_table(), r.to_kv()))
        }
        Command::Normalize { sentence, k } => {
            let doc = load_sentence(&sentence)?;
            let k = k.unwrap_or_else(|| doc.formula.distinct_variable_count().max(1));
            let ns = normalize(&doc.formula, k)?;
            Ok(print_sentence(&ns.to_document()))
        }
        Command::Ground {
            sentence,
            n,
            k,
            dimacs,
            solve,
            format,
        } => {
            if n == 0 {
                return Err(Failure::new(USAGE, "--n must be at least 1"));
            }
            let doc = load_sentence(&sentence)?;
            let k = k.unwrap_or_else(|| doc.formula.distinct_variable_count().max(1));
            let ns = normalize(&doc.formula, k)?;
            let g = ground(&ns, n);
            let cnf = to_cnf(&g);
            let text = print_dimacs(&cnf, &atom_labels(&g));
            if let Some(path) = &dimacs {
                write(path, &text)?;
            }
            if format == Format::Dimacs {
                return Ok(text);
            }
            let mut t = KvTree::new();
            t.push("n", n)
                .push("atoms", g.atom_count())
                .push("conjuncts", g.conjunct_count())
                .push("disjuncts", g.disjunct_count())
                .push("literals", measure_size(&ns, n))
                .push("bound", size_bound(&ns, n))
                .push("cnf_vars", cnf.num_vars)
                .push("cnf_clauses", cnf.clauses.len());
            if solve {
                let (w, stats) = satisfiable_with_stats(&g);
                t.push("satisfiable", if w.is_some() { "yes" } else { "no" })
                    .push("decisions", stats.decisions);
            }
            let mut table = String::new();
            for (key, v) in t.scalars() {
                writeln!(table, "{key:<12} {v}").unwrap();
            }
            let mut kv = KvTree::new();
            kv.push_tree("ground", t);
            Ok(emit(format, table, kv))
        }
        Command::CompileTm {
            machine,
            construction: c,
            k,
            window_cap,
            out,
            format,
        } => {
            no_dimacs(format)?;
            let tm = load_machine(&machine)?;
            let report = compile_with_cap(&tm, construction(c, k), window_cap)?;
            let doc = SentenceDocument {
                vocabulary: report.sentence_vocabulary(),
                formula: report.sentence.clone(),
            };
            let body = emit(format, report.to_table(), report.to_kv());
            match out {
                Some(path) => {
                    write(&path, &print_sentence(&doc))?;
                    Ok(body)
                }
                None => Ok(format!("{}\n{body}", print_sentence(&doc))),
            }
        }
        Command::SimulateTm {
            machine,
            n,
            bound,
            config_cap,
            trace,
            format,
        } => {
            no_dimacs(format)?;
            if n == 0 {
                return Err(Failure::new(USAGE, "--n must be at least 1"));
            }
            let tm = load_machine(&machine)?;
            let v = run_binary(&tm, n, bound, config_cap)?;
            let outcome = match v.outcome {
                Outcome::Accepts => "accepts",
                Outcome::Rejects => "rejects",
                Outcome::BoundExceeded => "bound-exceeded",
            };
            let (time, space) = bound.bounds(n);
            let mut t = KvTree::new();
            t.push("n", n)
                .push("outcome", outcome)
                .push("steps", v.steps)
                .push("cells", v.cells)
                .push("configurations", v.configurations)
                .push("time_bound", time)
                .push("space_bound", space);
            let mut table = String::new();
            for (key, v) in t.scalars() {
                writeln!(table, "{key:<15} {v}").unwrap();
            }
            if let (true, Some(run)) = (trace, &v.run) {
                table.push_str(&format_run(&tm, run));
            }
            let mut kv = KvTree::new();
            kv.push_tree("simulation", t);
            Ok(emit(format, table, kv))
        }
        Command::VerifyTm {
            machine,
            construction: c,
            k,
            range,
            n_min,
            window_cap,
            config_cap,
            check_witness,
            format,
        } => {
            no_dimacs(format)?;
            let range = (*range.start()).max(n_min)..=*range.end();
            if range.is_empty() {
                return Err(Failure::new(
                    USAGE,
                    format!("range lies below --n-min {n_min}"),
                ));
            }
            let tm = load_machine(&machine)?;
            let opts = VerifyOptions {
                window_cap,
                config_cap,
                check_witness,
            };
            let r = verify_compilation(&tm, construction(c, k), range, opts)?;
            let out = emit(format, r.to_table(), r.to_kv());
            if r.all_agree() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::new(
                    DISAGREEMENT,
                    format!("disagreement at N = {:?}", r.disagreements()),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

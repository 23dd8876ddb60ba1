//! `pts`: command-line driver for the support engine, the proof checker and
//! the arithmetization.
//!
//! Exit codes: 0 on success or a positive verdict, 1 on a negative verdict,
//! 2 on usage or input errors.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use pts_core::arith::{build_con, build_prf, build_prov, crosscheck};
use pts_core::base::{parse_base_file, BaseFile};
use pts_core::coding::{self, CODING_VERSION};
use pts_core::delta0::{classify, eval_delta0, Budget, Mode};
use pts_core::experiments::{self, Experiment, ExperimentConfig};
use pts_core::hilbert::{check_proof, parse_proof, print_proof, ProofError, Theory};
use pts_core::support::SupportEngine;
use pts_core::syntax::{
    parse_formula, parse_formula_in, parse_term_in, print_formula, print_formula_unicode,
    print_term, Atom, Formula, Symbols, Term,
};

#[derive(Parser)]
#[command(
    name = "pts",
    version,
    about = "Proof-theoretic semantics and arithmetized provability"
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and report its normal form.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Decide atomic derivability in a base.
    Derive {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        atom: String,
    },
    /// Decide support of a closed formula in a base.
    Support {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        formula: String,
        /// Number of fresh reserve atoms; overrides the base file.
        #[arg(long)]
        reserve: Option<usize>,
        /// Hypotheses: decide support of the formula relative to these.
        #[arg(long = "hyp")]
        hyps: Vec<String>,
        #[arg(long)]
        trace: bool,
    },
    /// Check a proof file against a theory.
    CheckProof {
        #[arg(long, default_value = "q")]
        theory: String,
        file: PathBuf,
    },
    /// Gödel number of a formula, term or proof.
    Encode {
        #[arg(long, conflicts_with_all = ["term", "proof"])]
        formula: Option<String>,
        #[arg(long, conflicts_with = "proof")]
        term: Option<String>,
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Decode a formula code.
    Decode {
        #[arg(long)]
        code: String,
    },
    /// Print the coding table.
    Codes {
        #[arg(long)]
        table: bool,
    },
    /// Build Prf, Prov or Con.
    Build {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, default_value = "q")]
        theory: String,
        /// Include the formula itself.
        #[arg(long)]
        print: bool,
    },
    /// Evaluate a bounded sentence read from a file.
    Eval {
        #[arg(long, value_enum, default_value = "oracle")]
        mode: EvalMode,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value = "q")]
        theory: String,
        #[arg(long)]
        formula: PathBuf,
    },
    /// Check a proof on the meta level and through Prf.
    Crosscheck {
        #[arg(long, default_value = "q")]
        theory: String,
        #[command(flatten)]
        budget: BudgetArgs,
        file: PathBuf,
    },
    /// Run an experiment suite and write its report.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Prf,
    Prov,
    Con,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMode {
    Oracle,
    Pure,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum evaluation steps.
    #[arg(long, env = "PTS_BUDGET")]
    budget: Option<u64>,
    /// Maximum recursion depth.
    #[arg(long)]
    max_depth: Option<usize>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_steps: self.budget.unwrap_or(d.max_steps),
            max_depth: self.max_depth.unwrap_or(d.max_depth),
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// classical-agreement, maxiconsistent, local-soundness, prf-crosscheck
    /// or numeral-decision.
    name: String,
    #[arg(long)]
    atoms: Option<usize>,
    #[arg(long)]
    reserve: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    sample_depth: Option<usize>,
    #[arg(long)]
    mutations: Option<usize>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    theory: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Verdict {
    Yes,
    No,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

type CmdResult = Result<(Verdict, Output), Failure>;

/// A JSON value plus its human rendering.
struct Output {
    json: Value,
    text: String,
}

fn out(json: Value, text: impl Into<String>) -> Output {
    Output {
        json,
        text: text.into(),
    }
}

fn yes(o: Output) -> CmdResult {
    Ok((Verdict::Yes, o))
}

fn verdict(b: bool, o: Output) -> CmdResult {
    Ok((if b { Verdict::Yes } else { Verdict::No }, o))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn theory(name: &str) -> Result<Theory, Failure> {
    Theory::by_name(name).ok_or_else(|| Failure(format!("unknown theory `{name}`")))
}

fn load_base(path: &Path) -> Result<BaseFile, Failure> {
    parse_base_file(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok((v, o)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = if cli.pretty {
                writeln!(stdout, "{}", o.text.trim_end())
            } else {
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&o.json).expect("json")
                )
            };
            match v {
                Verdict::Yes => ExitCode::SUCCESS,
                Verdict::No => ExitCode::from(1),
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Parse { formula } => cmd_parse(&formula),
        Command::Derive { base, atom } => cmd_derive(&base, &atom),
        Command::Support {
            base,
            formula,
            reserve,
            hyps,
            trace,
        } => cmd_support(&base, &formula, reserve, &hyps, trace),
        Command::CheckProof { theory, file } => cmd_check_proof(&theory, &file),
        Command::Encode {
            formula,
            term,
            proof,
        } => cmd_encode(formula, term, proof),
        Command::Decode { code } => cmd_decode(&code),
        Command::Codes { table: _ } => cmd_codes(),
        Command::Build {
            what,
            theory,
            print,
        } => cmd_build(what, &theory, print),
        Command::Eval {
            mode,
            budget,
            theory,
            formula,
        } => cmd_eval(mode, budget.budget(), &theory, &formula),
        Command::Crosscheck {
            theory,
            budget,
            file,
        } => cmd_crosscheck(&theory, budget.budget(), &file),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

fn cmd_parse(text: &str) -> CmdResult {
    let f = parse_formula(text)?;
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let class = classify(&f);
    yes(out(
        json!({
            "formula": print_formula(&f),
            "unicode": print_formula_unicode(&f),
            "depth": f.depth(),
            "closed": f.is_closed(),
            "free_vars": free,
            "class": class,
        }),
        print_formula_unicode(&f),
    ))
}

fn parse_atom(text: &str, symbols: &Symbols) -> Result<Atom, Failure> {
    match parse_formula_in(text, symbols)? {
        Formula::Atom(a) => Ok(a),
        other => Err(Failure(format!(
            "`{}` is not an atom",
            print_formula(&other)
        ))),
    }
}

fn cmd_derive(path: &Path, atom: &str) -> CmdResult {
    let file = load_base(path)?;
    let a = parse_atom(atom, &file.vocabulary.symbols())?;
    let derivable = file.base.derives_in(&a, &file.vocabulary)?;
    let tree = file.base.derivation_tree(&a).map(|d| d.render());
    let text = match &tree {
        Some(t) => t.clone(),
        None => format!("{a} is not derivable"),
    };
    verdict(
        derivable,
        out(
            json!({ "atom": a.to_string(), "derivable": derivable, "derivation": tree }),
            text,
        ),
    )
}

fn cmd_support(
    path: &Path,
    formula: &str,
    reserve: Option<usize>,
    hyps: &[String],
    trace: bool,
) -> CmdResult {
    let mut file = load_base(path)?;
    if let Some(r) = reserve {
        file.vocabulary.reserve = r;
    }
    let symbols = file.vocabulary.symbols();
    let f = parse_formula_in(formula, &symbols)?;
    let hyps = hyps
        .iter()
        .map(|h| parse_formula_in(h, &symbols))
        .collect::<Result<Vec<_>, _>>()?;
    let mut engine = SupportEngine::new(file.vocabulary.clone())?;
    let supported = if hyps.is_empty() {
        engine.supports(&file.base, &f)?
    } else {
        engine.supports_under(&file.base, &hyps, &f)?
    };
    let witness = if supported || !hyps.is_empty() {
        None
    } else {
        engine.extend_to_maxiconsistent(&file.base, &f).ok()
    };
    let witness_rules: Option<Vec<String>> =
        witness.map(|w| w.rules().iter().map(|r| r.to_string()).collect());
    let steps = if trace {
        Some(engine.trace(&file.base, &f)?)
    } else {
        None
    };
    let mut text = format!(
        "{} {}",
        if supported {
            "supported:"
        } else {
            "not supported:"
        },
        print_formula_unicode(&f)
    );
    if let Some(w) = &witness_rules {
        text.push_str("\nwitness extension:");
        for r in w {
            text.push_str(&format!("\n  {r}"));
        }
    }
    if let Some(steps) = &steps {
        text.push_str("\ntrace:");
        for s in steps {
            text.push_str(&format!(
                "\n  {} {}",
                if s.supported { "+" } else { "-" },
                s.formula
            ));
        }
    }
    let mut json = json!({
        "formula": print_formula(&f),
        "verdict": if supported { "supported" } else { "not-supported" },
        "stats": engine.stats(),
    });
    if let Some(w) = witness_rules {
        json["witness_extension"] = json!(w);
    }
    if let Some(steps) = steps {
        json["trace"] = json!(steps);
    }
    verdict(supported, out(json, text))
}

fn cmd_check_proof(theory_name: &str, path: &Path) -> CmdResult {
    let t = theory(theory_name)?;
    let p = parse_proof(&read(path)?)?;
    match check_proof(&p, &t) {
        Ok(c) => {
            let justs: Vec<String> = c.justifications.iter().map(|j| j.to_string()).collect();
            let wrong: Vec<usize> = c.wrong_hints.iter().map(|i| i + 1).collect();
            let mut text = format!("accepted: {}", print_formula_unicode(&c.conclusion));
            if !wrong.is_empty() {
                text.push_str(&format!("\nwrong hints on lines {wrong:?}"));
            }
            yes(out(
                json!({
                    "accepted": true,
                    "conclusion": print_formula(&c.conclusion),
                    "justifications": justs,
                    "wrong_hints": wrong,
                }),
                text,
            ))
        }
        Err(e) => {
            let line = match &e {
                ProofError::Rejected { line, .. } => Some(line + 1),
                ProofError::Empty => None,
            };
            verdict(
                false,
                out(
                    json!({ "accepted": false, "line": line, "error": e.to_string() }),
                    format!("rejected: {e}"),
                ),
            )
        }
    }
}

fn cmd_encode(formula: Option<String>, term: Option<String>, proof: Option<PathBuf>) -> CmdResult {
    let no_symbols = Symbols::default();
    let (what, shown, code) = match (formula, term, proof) {
        (Some(f), _, _) => {
            let f = parse_formula(&f)?;
            ("formula", print_formula(&f), coding::code_formula(&f)?)
        }
        (_, Some(t), _) => {
            let t: Term = parse_term_in(&t, &no_symbols)?;
            ("term", print_term(&t), coding::code_term(&t)?)
        }
        (_, _, Some(path)) => {
            let p = parse_proof(&read(&path)?)?;
            ("proof", print_proof(&p), coding::code_proof(&p.formulas())?)
        }
        _ => {
            return Err(Failure(
                "one of --formula, --term or --proof is required".into(),
            ))
        }
    };
    let code = code.to_string();
    yes(out(
        json!({ "kind": what, "input": shown.trim_end(), "code": code, "coding_version": CODING_VERSION }),
        code.clone(),
    ))
}

fn cmd_decode(code: &str) -> CmdResult {
    let c: BigUint = code
        .trim()
        .parse()
        .map_err(|_| Failure(format!("`{code}` is not a natural number")))?;
    match coding::decode_formula(&c) {
        Some(f) => yes(out(
            json!({ "code": code.trim(), "formula": print_formula(&f) }),
            print_formula(&f),
        )),
        None => verdict(
            false,
            out(
                json!({ "code": code.trim(), "formula": Value::Null }),
                "not the code of a formula",
            ),
        ),
    }
}

fn cmd_codes() -> CmdResult {
    let rows = coding::coding_table();
    let text = rows
        .iter()
        .map(|r| format!("{:>3}  {:<6} {}", r.index, r.symbol, r.role))
        .collect::<Vec<_>>()
        .join("\n");
    yes(out(
        json!({ "coding_version": CODING_VERSION, "radix": coding::RADIX, "table": rows }),
        format!("coding {CODING_VERSION}, radix {}\n{text}", coding::RADIX),
    ))
}

fn cmd_build(what: What, theory_name: &str, print: bool) -> CmdResult {
    let t = theory(theory_name)?;
    let (name, f) = match what {
        What::Prf => ("prf", build_prf(Term::var("p"), Term::var("x"))),
        What::Prov => ("prov", build_prov(Term::var("x"))),
        What::Con => ("con", build_con(&t)),
    };
    let class = classify(&f);
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let mut json = json!({
        "what": name,
        "theory": t.name,
        "class": class,
        "closed": f.is_closed(),
        "free_vars": free,
        "depth": f.depth(),
    });
    let mut text = format!("{name}: {class:?}, free {free:?}, depth {}", f.depth());
    if print {
        json["formula"] = json!(print_formula(&f));
        text.push('\n');
        text.push_str(&print_formula_unicode(&f));
    }
    yes(out(json, text))
}

fn cmd_eval(mode: EvalMode, budget: Budget, theory_name: &str, path: &Path) -> CmdResult {
    let t = theory(theory_name)?;
    let f = parse_formula(read(path)?.trim())?;
    let mode = match mode {
        EvalMode::Oracle => Mode::Oracle,
        EvalMode::Pure => Mode::Pure,
    };
    let value = eval_delta0(&f, mode, &t, budget)?;
    verdict(
        value,
        out(
            json!({ "value": value, "mode": mode, "budget": budget }),
            value.to_string(),
        ),
    )
}

fn cmd_crosscheck(theory_name: &str, budget: Budget, path: &Path) -> CmdResult {
    let t = theory(theory_name)?;
    let p = parse_proof(&read(path)?)?;
    let r = crosscheck(&p, &t, budget)?;
    let mut text = format!(
        "checker {}, Prf {}",
        if r.meta_accepts { "accepts" } else { "rejects" },
        match r.arith_accepts {
            Some(true) => "true",
            Some(false) => "false",
            None => "n/a",
        }
    );
    for k in &r.prefixes {
        text.push_str(&format!(
            "\n  prefix {}: len {}, code {}, checker {}, Prf {}",
            k.k, k.len_ok, k.code_ok, k.meta_accepts, k.arith_accepts
        ));
    }
    for d in &r.divergences {
        text.push_str(&format!("\n  divergence: {d}"));
    }
    let agree = r.agree;
    verdict(agree, out(serde_json::to_value(&r)?, text))
}

fn cmd_experiment(args: ExperimentArgs) -> CmdResult {
    let e: Experiment = args.name.parse()?;
    let mut cfg = ExperimentConfig::defaults(e);
    macro_rules! set {
        ($($f:ident),*) => { $( if let Some(v) = args.$f.clone() { cfg.$f = v; } )* };
    }
    set!(
        atoms,
        reserve,
        depth,
        samples,
        sample_depth,
        mutations,
        bound,
        theory,
        seed
    );
    if args.budget.budget.is_some() || args.budget.max_depth.is_some() {
        cfg.budget = args.budget.budget();
    }
    let report = experiments::run(e, &cfg)?;
    let json = serde_json::to_value(&report)?;
    let mut text = format!(
        "{}: {}",
        report.experiment,
        if report.pass { "PASS" } else { "FAIL" }
    );
    for c in &report.checks {
        text.push_str(&format!(
            "\n  {:<40} {:>10} checked {:>6} failed {}",
            c.name,
            c.checked,
            c.failures,
            if c.pass { "ok" } else { "FAIL" }
        ));
        for ex in &c.counterexamples {
            text.push_str(&format!("\n      {ex}"));
        }
    }
    if let Some(path) = &args.out {
        let body = serde_json::to_string_pretty(&json)? + "\n";
        fs::write(path, body).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    verdict(report.pass, out(json, text))
}

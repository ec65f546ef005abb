//! `fibred`: group census, class listings, composition, the quotient
//! algebra, the Q8/D8 counterexample and the property suites.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use fibred::fibred::{compose, compose_oracle, FibredElement, FibredSpace, Subcharacter};
use fibred::group::{automorphisms, group_from_spec, FiniteGroup, CATALOG_MAX_ORDER};
use fibred::hat::{counterexample_verify, hat_dimension, verify_hat_vs_quotient, PrimeStructure};
use fibred::json::{element_from_json, element_to_json, space_from_spec, subcharacter_to_json, FibredElementJson};
use fibred::verify::{run_suite, Suite};
use fibred::Error;

/// `println!` that ignores write errors, so a closed pipe ends output quietly.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(name = "fibred", version, about = "Fibred Burnside rings, fibred bisets and their quotient algebras")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest catalog order used by ideal searches (1..=15).
    #[arg(long, global = true, default_value_t = CATALOG_MAX_ORDER)]
    catalog_max_order: usize,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// More detail in text output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, centre, Frattini subgroup, subgroup count and |Out|.
    Group { spec: String },
    /// Canonical transitive classes over G (or G|H) with fibre C.
    Basis { group: String, fibre: String },
    /// X ∘ Y for two elements given as JSON text or file paths.
    Compose {
        x: String,
        y: String,
        /// Also run the set-level oracle and fail on disagreement.
        #[arg(long)]
        check: bool,
    },
    /// The quotient algebra of G with fibre C.
    Hat { group: String, fibre: String },
    /// The Q8/D8 counterexample with fibre C4.
    Counterexample,
    /// Property suites: axioms, oracle, prime or all.
    Verify { suite: String },
}

enum Failure {
    Usage(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn group(spec: &str) -> Result<Arc<FiniteGroup>, Failure> {
    Ok(Arc::new(group_from_spec(spec)?))
}

fn emit<T: Serialize>(value: &T) {
    out!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

#[derive(Serialize)]
struct GroupCensus {
    name: String,
    order: usize,
    abelian: bool,
    center_order: usize,
    frattini_order: usize,
    subgroup_count: usize,
    out_order: usize,
}

fn cmd_group(cli: &Cli, spec: &str) -> Outcome {
    let g = group(spec)?;
    let census = GroupCensus {
        name: g.name().to_string(),
        order: g.order(),
        abelian: g.is_abelian(),
        center_order: g.center().order(),
        frattini_order: g.frattini()?.order(),
        subgroup_count: g.subgroups()?.len(),
        out_order: automorphisms(&g).out_order(),
    };
    if cli.json {
        emit(&census);
    } else {
        out!("group {} of order {}{}", census.name, census.order, if census.abelian { " (abelian)" } else { "" });
        out!("  centre order    {}", census.center_order);
        out!("  Frattini order  {}", census.frattini_order);
        out!("  subgroups       {}", census.subgroup_count);
        out!("  |Out|           {}", census.out_order);
    }
    Ok(())
}

fn class_line(space: &FibredSpace, s: &Subcharacter) -> String {
    let j = subcharacter_to_json(space, s);
    let pairs: Vec<String> = j
        .subgroup_elements
        .iter()
        .zip(&j.delta_images)
        .map(|(e, v)| format!("{}↦{v}", if e.len() == 1 { e[0].clone() } else { format!("({})", e.join(",")) }))
        .collect();
    format!("|D|={:<3} {}", s.order(), pairs.join(" "))
}

fn cmd_basis(cli: &Cli, spec: &str, fibre: &str) -> Outcome {
    let space = space_from_spec(spec, group(fibre)?)?;
    let classes = space.classes()?;
    if cli.json {
        let out: Vec<_> = classes.iter().map(|s| subcharacter_to_json(&space, s)).collect();
        emit(&out);
    } else {
        out!("{} classes over {spec} with fibre {fibre}", classes.len());
        for (i, s) in classes.iter().enumerate() {
            out!("{i:>5}  {}", class_line(&space, s));
        }
    }
    Ok(())
}

fn read_element(arg: &str) -> Result<FibredElement, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?
    };
    let json: FibredElementJson =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed element {arg}: {e}")))?;
    Ok(element_from_json(&json)?)
}

fn print_element(cli: &Cli, x: &FibredElement) {
    if cli.json {
        emit(&element_to_json(x));
    } else {
        let space = x.space();
        out!(
            "{} term(s) over {}×{} with fibre {}",
            x.len(),
            space.left().name(),
            space.right().name(),
            space.fibre().name()
        );
        for (s, c) in x.terms() {
            out!("{c:>+4} · [{}]", class_line(space, s));
        }
    }
}

fn cmd_compose(cli: &Cli, x: &str, y: &str, check: bool) -> Outcome {
    let (x, y) = (read_element(x)?, read_element(y)?);
    let xy = compose(&x, &y)?;
    print_element(cli, &xy);
    if check {
        let oracle = compose_oracle(&x, &y)?;
        if oracle.terms() != xy.terms() {
            return Err(Failure::Property("formula and oracle disagree".into()));
        }
        if !cli.json {
            out!("oracle check: agree");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BruteHat {
    group: String,
    fibre: String,
    dimension: usize,
    note: &'static str,
}

fn cmd_hat(cli: &Cli, g: &str, c: &str) -> Outcome {
    let (ga, ca) = (group(g)?, group(c)?);
    match PrimeStructure::new(ga.clone(), ca.clone()) {
        Err(Error::NotPrime(_)) => {
            let d = hat_dimension(ga, ca, cli.catalog_max_order)?;
            let out = BruteHat {
                group: g.into(),
                fibre: c.into(),
                dimension: d.dimension,
                note: "fibre order is not prime: brute-force dimension only, no closed-form table",
            };
            if cli.json {
                emit(&out);
            } else {
                out!("dim Â({g}) with fibre {c} = {} ({})", out.dimension, out.note);
            }
            Ok(())
        }
        Err(e) => Err(e.into()),
        Ok(_) => {
            let r = verify_hat_vs_quotient(ga, ca, cli.catalog_max_order)?;
            if cli.json {
                emit(&r);
            } else {
                out!("Â({g}) with fibre {c}: {} X-generators, {} Y-generators", r.x_count, r.y_count);
                out!("  dimension: formula {}, brute force {}", r.formula_dimension, r.brute_dimension);
                for (i, name) in r.generators.iter().enumerate() {
                    out!("  g{i:<3} {name}");
                }
                out!("  multiplication table (row · column, '.' = 0):");
                for row in &r.table {
                    let cells: Vec<String> = row.iter().map(|e| e.map_or(".".to_string(), |k| k.to_string())).collect();
                    out!("    {}", cells.iter().map(|s| format!("{s:>3}")).collect::<String>());
                }
                out!(
                    "  {} products checked against compose-then-reduce: {} mismatch(es)",
                    r.products_checked,
                    r.mismatches.len()
                );
                for m in r.mismatches.iter().take(if cli.verbose > 0 { usize::MAX } else { 5 }) {
                    out!("    {} · {}: rule {} vs quotient {}", m.left, m.right, m.formula, m.quotient);
                }
                out!("  basis = classes outside the ideal: {}", r.basis_agrees);
                out!("  associative: {}", r.associative);
                out!("  ({})", r.criterion);
            }
            if r.passed() {
                Ok(())
            } else {
                Err(Failure::Property("quotient cross-check failed".into()))
            }
        }
    }
}

fn cmd_counterexample(cli: &Cli) -> Outcome {
    let r = counterexample_verify()?;
    if cli.json {
        emit(&r);
    } else {
        for s in &r.steps {
            let detail = if s.detail.is_empty() { String::new() } else { format!("  [{}]", s.detail) };
            out!("{} {}{detail}", if s.passed { "ok  " } else { "FAIL" }, s.name);
        }
        out!("W not in the ideal: searched {} groups ({})", r.searched_q8.len(), r.searched_q8.join(", "));
        out!("({})", r.criterion);
    }
    match r.first_failure() {
        None => Ok(()),
        Some(s) => Err(Failure::Property(format!("step failed: {}", s.name))),
    }
}

fn cmd_verify(cli: &Cli, suite: &str) -> Outcome {
    let suite: Suite = suite.parse()?;
    let r = run_suite(suite, cli.seed, cli.catalog_max_order)?;
    if cli.json {
        emit(&r);
    } else {
        for c in &r.checks {
            out!("{} {} ({} cases)", if c.passed() { "PASS" } else { "FAIL" }, c.name, c.cases);
            for f in c.failures.iter().take(if cli.verbose > 0 { usize::MAX } else { 3 }) {
                out!("     {f}");
            }
        }
    }
    if r.passed() {
        Ok(())
    } else {
        let n = r.checks.iter().filter(|c| !c.passed()).count();
        Err(Failure::Property(format!("{n} check(s) failed")))
    }
}

fn run(cli: &Cli) -> Outcome {
    if cli.catalog_max_order == 0 || cli.catalog_max_order > CATALOG_MAX_ORDER {
        return Err(Error::CatalogRange(cli.catalog_max_order).into());
    }
    match &cli.command {
        Command::Group { spec } => cmd_group(cli, spec),
        Command::Basis { group, fibre } => cmd_basis(cli, group, fibre),
        Command::Compose { x, y, check } => cmd_compose(cli, x, y, *check),
        Command::Hat { group, fibre } => cmd_hat(cli, group, fibre),
        Command::Counterexample => cmd_counterexample(cli),
        Command::Verify { suite } => cmd_verify(cli, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("fibred: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("fibred: {msg}");
            ExitCode::from(2)
        }
    }
}

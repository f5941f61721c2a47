mod handlers;
mod select;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use handlers::{CheckArgs, Output};
use select::CliResult;

#[derive(Parser)]
#[command(
    name = "syncong",
    version,
    about = "Syntactic congruences, determining sets of self-maps, and inverse systems of finite algebras"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Syntactic congruence of a subset: classes, quotient, morphism, monoid size
    Syn {
        /// Algebra file (.alg)
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        /// Subset: comma-separated indices, or a subset name from the file
        #[arg(short = 'L', long)]
        subset: String,
        /// Emit a JSON envelope instead of text
        #[arg(long)]
        json: bool,
    },
    /// Determining set of self-maps for a subset, with the index bound
    Detset {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        #[arg(short = 'L', long)]
        subset: String,
        #[arg(long)]
        json: bool,
    },
    /// Shrink a determining set to an inclusion-minimal one
    Mindetset {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        #[arg(short = 'L', long)]
        subset: String,
        #[arg(long)]
        json: bool,
    },
    /// Quotient by a certified congruence (--by blocks) or by a subset's syntactic congruence
    Quotient {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        /// Partition blocks, e.g. 0,2/1,3
        #[arg(long, conflicts_with = "subset")]
        by: Option<String>,
        #[arg(short = 'L', long)]
        subset: Option<String>,
        #[arg(long)]
        json: bool,
        /// Emit a DOT drawing of the projection instead of text
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Translation monoid of an algebra: generators and all elements
    Tm {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Pull a subset's syntactic congruence back along a surjective morphism
    Pullback {
        /// Source algebra file
        #[arg(short = 'a', long)]
        source: PathBuf,
        /// Target algebra file
        #[arg(short = 'b', long)]
        target: PathBuf,
        /// Element map as comma-separated images, e.g. 0,1,0,1
        #[arg(long)]
        map: String,
        /// Subset of the target
        #[arg(short = 'L', long)]
        subset: String,
        #[arg(long)]
        json: bool,
    },
    /// Check every connecting map of a system: homomorphism and surjectivity
    SysValidate {
        /// System file (.sys)
        #[arg(short = 's', long)]
        system: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// First level at which two threads of a system differ
    SysSeparate {
        #[arg(short = 's', long)]
        system: PathBuf,
        /// First thread, one value per level: 1,3,7
        #[arg(long)]
        t1: String,
        /// Second thread
        #[arg(long)]
        t2: String,
        #[arg(long)]
        json: bool,
    },
    /// Recognize a cylinder set by one finite quotient, verified at every level
    SysRecognize {
        #[arg(short = 's', long)]
        system: PathBuf,
        /// Cylinder as level:indices, e.g. 2:0,2
        #[arg(long)]
        cyl: String,
        #[arg(long)]
        json: bool,
    },
    /// Quotient a whole system by one congruence per level
    SysQuotient {
        #[arg(short = 's', long)]
        system: PathBuf,
        /// One per level, as level:blocks, e.g. --theta 2:0,2/1,3
        #[arg(long)]
        theta: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Meet of the syntactic congruences of a partition's blocks
    Meet {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        /// Partition blocks, e.g. 0,4/1,2,3,5,6,7
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        json: bool,
    },
    /// Idempotent power of an element under the unique binary operation
    Omega {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        /// Element index
        #[arg(short = 'e', long)]
        element: usize,
        /// `omega` for the idempotent power, or a number n for the n!-th power
        #[arg(long, default_value = "omega")]
        power: String,
        #[arg(long)]
        json: bool,
    },
    /// Ten-condition recognizability report for a subset
    Thm61 {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        #[arg(short = 'L', long)]
        subset: String,
        #[arg(long)]
        json: bool,
    },
    /// Minimize an automaton and build its syntactic monoid as an algebra
    DfaSynmon {
        /// Automaton file (.dfa)
        #[arg(short = 'd', long)]
        dfa: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite and report sample/check/failure counts
    Check {
        /// One of: ex52, ex512, ex517, oracle, pullback, detset, linearize, omega
        #[arg(long)]
        suite: String,
        /// Window bound for ex512/ex517
        #[arg(long, visible_alias = "N")]
        n: Option<u64>,
        /// Largest shift searched in ex512
        #[arg(long)]
        xmax: Option<u64>,
        /// Sample count for the randomized suites
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for the randomized suites
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Membership set for ex512: powers (default) or primes
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a term under a variable assignment
    Eval {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        /// Term, e.g. add(add(x,y),x)
        #[arg(short = 't', long)]
        term: String,
        /// Assignment, e.g. x=1,y=2
        #[arg(long, default_value = "")]
        assign: String,
        #[arg(long)]
        json: bool,
    },
    /// Split a term at each occurrence of one variable
    Linearize {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        #[arg(short = 't', long)]
        term: String,
        /// Variable to split along
        #[arg(short = 'x', long, default_value = "x1")]
        var: String,
        #[arg(long)]
        json: bool,
    },
    /// Parse a file and print its canonical form
    Fmt {
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        dfa: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn dispatch(verb: &Verb) -> (&'static str, bool, bool, CliResult<Output>) {
    match verb {
        Verb::Syn {
            algebra,
            subset,
            json,
        } => ("syn", *json, false, handlers::syn(algebra, subset)),
        Verb::Detset {
            algebra,
            subset,
            json,
        } => ("detset", *json, false, handlers::detset(algebra, subset)),
        Verb::Mindetset {
            algebra,
            subset,
            json,
        } => (
            "mindetset",
            *json,
            false,
            handlers::mindetset(algebra, subset),
        ),
        Verb::Quotient {
            algebra,
            by,
            subset,
            json,
            dot,
        } => (
            "quotient",
            *json,
            *dot,
            handlers::quotient(algebra, by.as_deref(), subset.as_deref()),
        ),
        Verb::Tm { algebra, json } => ("tm", *json, false, handlers::tm(algebra)),
        Verb::Pullback {
            source,
            target,
            map,
            subset,
            json,
        } => (
            "pullback",
            *json,
            false,
            handlers::pullback(source, target, map, subset),
        ),
        Verb::SysValidate { system, json } => {
            ("sys-validate", *json, false, handlers::sys_validate(system))
        }
        Verb::SysSeparate {
            system,
            t1,
            t2,
            json,
        } => (
            "sys-separate",
            *json,
            false,
            handlers::sys_separate(system, t1, t2),
        ),
        Verb::SysRecognize { system, cyl, json } => (
            "sys-recognize",
            *json,
            false,
            handlers::sys_recognize(system, cyl),
        ),
        Verb::SysQuotient {
            system,
            theta,
            json,
        } => (
            "sys-quotient",
            *json,
            false,
            handlers::sys_quotient(system, theta),
        ),
        Verb::Meet {
            algebra,
            blocks,
            json,
        } => ("meet", *json, false, handlers::meet(algebra, blocks)),
        Verb::Omega {
            algebra,
            element,
            power,
            json,
        } => (
            "omega",
            *json,
            false,
            handlers::omega(algebra, *element, power),
        ),
        Verb::Thm61 {
            algebra,
            subset,
            json,
        } => ("thm61", *json, false, handlers::thm61(algebra, subset)),
        Verb::DfaSynmon { dfa, json } => ("dfa-synmon", *json, false, handlers::dfa_synmon(dfa)),
        Verb::Check {
            suite,
            n,
            xmax,
            samples,
            seed,
            set,
            json,
        } => (
            "check",
            *json,
            false,
            handlers::check(&CheckArgs {
                suite: suite.clone(),
                n: *n,
                xmax: *xmax,
                samples: *samples,
                seed: *seed,
                set: set.clone(),
            }),
        ),
        Verb::Eval {
            algebra,
            term,
            assign,
            json,
        } => ("eval", *json, false, handlers::eval(algebra, term, assign)),
        Verb::Linearize {
            algebra,
            term,
            var,
            json,
        } => (
            "linearize",
            *json,
            false,
            handlers::linearize(algebra, term, var),
        ),
        Verb::Fmt {
            algebra,
            system,
            dfa,
            json,
        } => (
            "fmt",
            *json,
            false,
            handlers::fmt(algebra.as_deref(), system.as_deref(), dfa.as_deref()),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, json, dot, result) = dispatch(&cli.verb);
    match result {
        Ok(out) => {
            if json {
                let envelope =
                    serde_json::json!({ "schema": 1, "verb": name, "payload": out.json });
                println!(
                    "{}",
                    serde_json::to_string(&envelope).expect("envelope serializes")
                );
            } else if dot {
                if let Some(d) = &out.dot {
                    print!("{d}");
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

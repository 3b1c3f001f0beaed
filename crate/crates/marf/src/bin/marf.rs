//! Command-line front end emitting JSON reports.
//!
//! Every command takes a signature (`-g` plus an optional comma-separated
//! order list `-p`) and a degree `-m`, prints one UTF-8 JSON document on
//! stdout (or an aligned table with `--table`), and reserves stderr for
//! diagnostics.  Exit codes: 0 for success or a true verdict, 1 for a false
//! verdict or an empty result, 2 for errors.

use clap::{Args, Parser, Subcommand};
use marf::fuchsian::{
    canonical_lift_product_check, is_sequential, lift_with_levels, make_signature,
    verify_arf_axioms, FuchsianError,
};
use marf::mcg::{classify_orbits, normal_form, McgError, DEFAULT_BUDGET};
use marf::moduli::components;
use marf::{ArfFunction, Liftability, Signature};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "marf",
    version,
    about = "Liftability, twist orbits, and numerically verified lifts for m-Arf functions \
             on hyperbolic orbifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SignatureArgs {
    /// Genus of the orbifold.
    #[arg(short = 'g', long = "genus")]
    genus: u32,
    /// Cone orders as a comma list, e.g. `-p 5,5,5`; omit for none.
    #[arg(short = 'p', long = "orders", value_delimiter = ',')]
    orders: Option<Vec<u32>>,
}

impl SignatureArgs {
    fn build(&self) -> Result<Signature, CliError> {
        Ok(Signature::new(
            self.genus,
            self.orders.clone().unwrap_or_default(),
        )?)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON (the default).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit an aligned key/value table instead of JSON.
    #[arg(long)]
    table: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether degree-m lifts exist for the signature.
    Liftable {
        #[command(flatten)]
        signature: SignatureArgs,
        /// Cover degree.
        #[arg(short)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Report the connected components of the space of degree-m lifts.
    Components {
        #[command(flatten)]
        signature: SignatureArgs,
        /// Cover degree.
        #[arg(short)]
        m: u32,
        /// Also enumerate twist orbits and attach their sizes.
        #[arg(long)]
        brute_force: bool,
        /// State budget for orbit enumeration.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate the twist orbits on m-Arf functions by brute force.
    Orbits {
        #[command(flatten)]
        signature: SignatureArgs,
        /// Cover degree.
        #[arg(short)]
        m: u32,
        /// State budget for the breadth-first searches.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Carry handle values to their orbit's normal form by twist moves.
    Normalize {
        #[command(flatten)]
        signature: SignatureArgs,
        /// Cover degree.
        #[arg(short)]
        m: u32,
        /// Handle values alpha_1,...,alpha_g.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<i64>,
        /// Handle values beta_1,...,beta_g.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<i64>,
        /// State budget for the normal-form search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a sequential generator set, lift it, and verify the level
    /// identities numerically.
    VerifyNumeric {
        #[command(flatten)]
        signature: SignatureArgs,
        /// Cover degree.
        #[arg(short)]
        m: u32,
        /// Seed for the sampled rule checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample count per rule check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count the m-Arf functions on the signature.
    ArfCount {
        #[command(flatten)]
        signature: SignatureArgs,
        /// Cover degree.
        #[arg(short)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Signature(#[from] marf::SignatureError),
    #[error(transparent)]
    Arf(#[from] marf::ArfError),
    #[error(transparent)]
    Mcg(#[from] McgError),
    #[error(transparent)]
    Moduli(#[from] marf::ModuliError),
    #[error(transparent)]
    Fuchsian(#[from] FuchsianError),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Serialize and print, then translate a true/false verdict into exit 0/1.
fn emit(value: &Value, output: &OutputArgs, affirmative: bool) -> Result<ExitCode, CliError> {
    if output.table {
        print!("{}", render_table(value));
    } else {
        println!("{}", serde_json::to_string_pretty(value)?);
    }
    Ok(ExitCode::from(u8::from(!affirmative)))
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Liftable {
            signature,
            m,
            output,
        } => {
            let sig = signature.build()?;
            let (value, liftable) = match sig.liftability(m)? {
                Liftability::Liftable => (json!({ "liftable": true }), true),
                Liftability::OrderNotCoprime { .. } => {
                    (json!({ "liftable": false, "reason": "gcd" }), false)
                }
                Liftability::CongruenceFails => {
                    (json!({ "liftable": false, "reason": "congruence" }), false)
                }
            };
            emit(&value, &output, liftable)
        }
        Command::Components {
            signature,
            m,
            brute_force,
            budget,
            output,
        } => {
            let sig = signature.build()?;
            let report = components(&sig, m, brute_force, budget)?;
            let nonempty = !report.components.is_empty();
            emit(&serde_json::to_value(&report)?, &output, nonempty)
        }
        Command::Orbits {
            signature,
            m,
            budget,
            output,
        } => {
            let sig = signature.build()?;
            let orbits = classify_orbits(&sig, m, budget)?;
            let nonempty = !orbits.is_empty();
            let value = json!({ "m": m, "signature": sig, "orbits": orbits });
            emit(&value, &output, nonempty)
        }
        Command::Normalize {
            signature,
            m,
            alpha,
            beta,
            budget,
            output,
        } => {
            let sig = signature.build()?;
            let f = ArfFunction::new_arf(sig, m, &alpha, &beta)?;
            let (canonical, word) = normal_form(&f, budget)?;
            let value = json!({
                "normal_form": {
                    "alpha": canonical.alpha().iter().map(|r| r.value()).collect::<Vec<_>>(),
                    "beta": canonical.beta().iter().map(|r| r.value()).collect::<Vec<_>>(),
                },
                "twist_word": word.iter().map(|mv| mv.to_string()).collect::<Vec<_>>(),
                "delta": f.arf_invariant(),
            });
            emit(&value, &output, true)
        }
        Command::VerifyNumeric {
            signature,
            m,
            seed,
            samples,
            output,
        } => {
            let sig = signature.build()?;
            let (value, all_passed) = verify_numeric(&sig, m, seed, samples)?;
            emit(&value, &output, all_passed)
        }
        Command::ArfCount {
            signature,
            m,
            output,
        } => {
            let sig = signature.build()?;
            let count = sig.count_arf_functions(m)?;
            let rendered = match u64::try_from(&count) {
                Ok(small) => json!(small),
                Err(_) => json!(count.to_string()),
            };
            let value = json!({ "m": m, "signature": sig, "count": rendered });
            emit(&value, &output, count > 0u32.into())
        }
    }
}

/// Run the numeric pipeline end to end: construct, check the arrangement,
/// check the canonical product level (genus 0), then lift and sample the
/// five rules when the signature is liftable.
fn verify_numeric(
    sig: &Signature,
    m: u32,
    seed: u64,
    samples: usize,
) -> Result<(Value, bool), CliError> {
    let set = make_signature(sig)?;
    let arrangement = is_sequential(&set);
    let mut all_passed = arrangement.sequential;
    let mut value = json!({
        "m": m,
        "signature": sig,
        "sequential": arrangement.sequential,
        "relation_residual": set.relation_residual(),
    });
    let object = value.as_object_mut().expect("report is an object");
    if !arrangement.diagnostic.is_empty() {
        object.insert("diagnostic".into(), json!(arrangement.diagnostic));
    }
    if sig.genus() == 0 {
        let level = canonical_lift_product_check(&set)?;
        let expected = set.reduction_tuple().len() as i64 - 2;
        object.insert("canonical_product_level".into(), json!(level));
        object.insert("expected_level".into(), json!(expected));
        all_passed &= level == expected;
    }
    let liftable = sig.liftable(m)?;
    object.insert("liftable".into(), json!(liftable));
    if liftable {
        let zeros = vec![0i64; sig.genus() as usize];
        let lifted = lift_with_levels(&set, m, &zeros, &zeros)?;
        let report = verify_arf_axioms(&lifted, samples, seed);
        all_passed &= report.all_passed();
        object.insert("axioms".into(), serde_json::to_value(&report)?);
    }
    Ok((value, all_passed))
}

/// Render a JSON document as aligned `path  value` rows, arrays indexed in
/// brackets, leaves formatted as in the JSON output.
fn render_table(value: &Value) -> String {
    fn walk(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
        match value {
            Value::Object(map) => {
                for (key, inner) in map {
                    let path = if prefix.is_empty() {
                        key.clone()
                    } else {
                        format!("{prefix}.{key}")
                    };
                    walk(&path, inner, rows);
                }
            }
            Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
                let inline: Vec<String> = items.iter().map(|v| v.to_string()).collect();
                rows.push((prefix.to_string(), format!("[{}]", inline.join(", "))));
            }
            Value::Array(items) => {
                for (k, inner) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{k}]"), inner, rows);
                }
            }
            leaf => rows.push((prefix.to_string(), leaf.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    let width = rows.iter().map(|(path, _)| path.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(path, shown)| format!("{path:width$}  {shown}\n"))
        .collect()
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use leafdeck::construct::{ConstructionParams, Variant};
use leafdeck::deck::{deck_witnesses, non_equivalence_evidence, x_deck};
use leafdeck::io::{from_json, to_dot, to_json};
use leafdeck::iso::are_equivalent;
use leafdeck::verify::run_matrix;
use leafdeck::{LabeledMultigraph, Network, Parity};

#[derive(Parser)]
#[command(name = "leafdeck", version, about = "Parity networks, X-decks and labelled multigraph equivalence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "M")]
    M,
    #[value(name = "G")]
    G,
    #[value(name = "N")]
    N,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the parity graphs.
    Construct {
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long, value_enum, default_value = "N")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the X-deck of a network, one JSON file per label.
    Deck {
        network: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Decide equivalence; prints a witness A -> B when there is one.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether A is an X-reconstruction of B.
    Reconstruction {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the check battery for a range of r.
    Verify {
        #[arg(long, default_value_t = 4)]
        r_min: usize,
        #[arg(long, default_value_t = 7)]
        r_max: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        negative_controls: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert graph JSON to Graphviz DOT.
    ExportDot {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "G")]
        name: String,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Yes,
    No,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> Result<LabeledMultigraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_network(path: &Path) -> Result<Network> {
    Network::from_graph(read_graph(path)?).with_context(|| format!("validating {}", path.display()))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn execute(command: Command) -> Result<Verdict> {
    match command {
        Command::Construct {
            r,
            parity,
            variant,
            format,
            out,
        } => {
            let parity = match parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            };
            let variant = match variant {
                VariantArg::M => Variant::M,
                VariantArg::G => Variant::G,
                VariantArg::N => Variant::N,
            };
            let g = ConstructionParams::new(r, parity, variant)?.build()?;
            let text = match format {
                Format::Json => to_json(&g),
                Format::Dot => to_dot(&g, &format!("{variant}_{parity}_{r}")),
            };
            emit(out.as_deref(), &text)?;
            Ok(Verdict::Yes)
        }
        Command::Deck { network, out_dir } => {
            let n = read_network(&network)?;
            let deck = x_deck(&n)?;
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            for (label, g) in &deck.entries {
                emit(Some(&out_dir.join(format!("{label}.json"))), &to_json(g))?;
            }
            eprintln!("wrote {} deck entries to {}", deck.entries.len(), out_dir.display());
            Ok(Verdict::Yes)
        }
        Command::Iso { a, b, out } => {
            let (ga, gb) = (read_graph(&a)?, read_graph(&b)?);
            match are_equivalent(&ga, &gb) {
                Some(w) => {
                    let mut text = serde_json::to_string_pretty(&w)?;
                    text.push('\n');
                    emit(out.as_deref(), &text)?;
                    Ok(Verdict::Yes)
                }
                None => {
                    eprintln!("not equivalent");
                    Ok(Verdict::No)
                }
            }
        }
        Command::Reconstruction { a, b, out } => {
            let (na, nb) = (read_network(&a)?, read_network(&b)?);
            let (verdict, body) = match deck_witnesses(&na, &nb)? {
                Ok(witnesses) => {
                    let evidence = non_equivalence_evidence(na.graph(), nb.graph());
                    let body = json!({
                        "reconstruction": true,
                        "equivalent": evidence.is_none(),
                        "witnesses": witnesses,
                        "non_equivalence": evidence,
                    });
                    (Verdict::Yes, body)
                }
                Err(label) => {
                    eprintln!("deck entries for {label} are not equivalent");
                    (Verdict::No, json!({ "reconstruction": false, "mismatch": label }))
                }
            };
            emit(out.as_deref(), &pretty(&body))?;
            Ok(verdict)
        }
        Command::Verify {
            r_min,
            r_max,
            report,
            negative_controls,
            seed,
        } => {
            let rep = run_matrix(r_min, r_max, negative_controls, seed)?;
            for c in &rep.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                eprintln!("{mark} {:<24} {} ms  {}", c.name, c.millis, c.detail);
            }
            for n in &rep.notes {
                eprintln!("note: {n}");
            }
            if let Some(path) = report {
                emit(Some(&path), &rep.to_json())?;
            }
            Ok(if rep.passed { Verdict::Yes } else { Verdict::No })
        }
        Command::ExportDot { input, out, name } => {
            let g = read_graph(&input)?;
            emit(out.as_deref(), &to_dot(&g, &name))?;
            Ok(Verdict::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

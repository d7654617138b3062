use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use icc_core::codec;
use icc_core::oracles;
use icc_core::packet::{parse_packet_lines, to_hex};
use icc_core::schemes;
use icc_core::search::DEFAULT_EXACT_BOUND;
use icc_core::template::random_template;
use icc_core::{Digraph, IccTemplate, IndexCode, Labeling, PacketVector, SearchLimits};

#[derive(Parser)]
#[command(name = "icc", version, about = "Interlinked-cycle-cover index codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the digraph of a template.
    GenIcc {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 2k-vertex gap family digraph.
    GenFamily {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A seeded random valid template.
    GenRandom {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_path_len: usize,
        /// Fraction of ordered pairs that get a Type-II path.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode packets with the template code (supports only without --packets).
    Encode {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        packets: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover one receiver's packet from the code and its side packets.
    Decode {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        receiver: usize,
        /// Packet file with `-` for messages the receiver lacks.
        #[arg(long)]
        side: PathBuf,
    },
    /// Check that every receiver of a digraph can decode a code listing.
    Verify {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        code: PathBuf,
    },
    /// Order of a maximum acyclic induced subgraph.
    Mais {
        #[arg(long)]
        digraph: PathBuf,
    },
    /// Cycle, clique and ICC cover lengths against MAIS.
    Compare {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long, env = "ICC_EXACT_BOUND", default_value_t = DEFAULT_EXACT_BOUND)]
        exact_bound: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_template(path: &Path) -> Result<IccTemplate> {
    let t = IccTemplate::from_json(&read(path)?).with_context(|| path.display().to_string())?;
    t.validate().with_context(|| path.display().to_string())?;
    Ok(t)
}

fn read_digraph(path: &Path) -> Result<Digraph> {
    Digraph::from_json(&read(path)?).with_context(|| path.display().to_string())
}

fn read_code(path: &Path) -> Result<IndexCode> {
    IndexCode::from_listing(&read(path)?).with_context(|| path.display().to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `Ok(false)` means the command ran but the answer is negative.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::GenIcc { template, out } => {
            let (g, _) = read_template(&template)?.build_digraph()?;
            emit(out.as_deref(), &(g.to_json() + "\n"))?;
        }
        Command::GenFamily { k, out } => {
            if k == 0 {
                bail!("k must be at least 1");
            }
            emit(out.as_deref(), &(schemes::gap_family(k).to_json() + "\n"))?;
        }
        Command::GenRandom {
            k,
            seed,
            max_path_len,
            density,
            out,
        } => {
            if k == 0 {
                bail!("k must be at least 1");
            }
            if !(0.0..=1.0).contains(&density) {
                bail!("density must lie in [0, 1]");
            }
            let t = random_template(k, max_path_len, density, seed);
            emit(out.as_deref(), &(t.to_json() + "\n"))?;
        }
        Command::Encode {
            template,
            packets,
            out,
        } => {
            let t = read_template(&template)?;
            let l = Labeling::canonical(&t);
            let code = match packets {
                Some(p) => {
                    let x = PacketVector::from_text(&read(&p)?)
                        .with_context(|| p.display().to_string())?;
                    if x.len() != t.vertex_count() {
                        bail!(
                            "{} holds {} packets, template has {} vertices",
                            p.display(),
                            x.len(),
                            t.vertex_count()
                        );
                    }
                    codec::encode(&t, &l, &x)?
                }
                None => codec::encode_supports(&t, &l)?,
            };
            emit(out.as_deref(), &code.to_listing())?;
        }
        Command::Decode {
            template,
            code,
            receiver,
            side,
        } => {
            let t = read_template(&template)?;
            let l = Labeling::canonical(&t);
            let listed = read_code(&code)?;
            let bound =
                codec::bind_listing(&t, &l, &listed).with_context(|| code.display().to_string())?;
            let n = t.vertex_count();
            if receiver == 0 || receiver > n {
                bail!("receiver {receiver} outside 1..={n}");
            }
            let (_, entries) = parse_packet_lines(&read(&side)?, true)
                .with_context(|| side.display().to_string())?;
            if entries.len() != n {
                bail!(
                    "{} lists {} messages, template has {n}",
                    side.display(),
                    entries.len()
                );
            }
            if entries[receiver - 1].is_some() {
                bail!("side file holds receiver {receiver}'s own message; mark it '-'");
            }
            let packets: BTreeMap<_, _> = entries
                .into_iter()
                .enumerate()
                .filter_map(|(i, p)| p.map(|p| (i + 1, p)))
                .collect();
            let x = codec::decode_receiver(&t, &l, &bound, receiver, &packets)?;
            println!("{}", to_hex(&x));
        }
        Command::Verify { digraph, code } => {
            let g = read_digraph(&digraph)?;
            let verdict = oracles::verify_code(&g, &read_code(&code)?)?;
            if verdict.is_valid() {
                println!("valid");
            } else {
                let ids: Vec<String> = verdict.failing().iter().map(|v| v.to_string()).collect();
                println!("invalid: receivers {} cannot decode", ids.join(","));
                return Ok(false);
            }
        }
        Command::Mais { digraph } => {
            println!("{}", oracles::mais(&read_digraph(&digraph)?)?);
        }
        Command::Compare {
            digraph,
            exact_bound,
        } => {
            let g = read_digraph(&digraph)?;
            let r = schemes::compare(&g, &SearchLimits::with_exact_bound(exact_bound))?;
            println!("{}", r.to_json());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("icc: {e:#}");
            ExitCode::from(1)
        }
    }
}

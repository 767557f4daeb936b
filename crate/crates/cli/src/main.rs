use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dualgraph::enumerate::{self, checkpoint::companion_path, Caps, EnumOptions};
use dualgraph::families::{self, Family};
use dualgraph::multigraph::{parse_mel, ParseMode};
use dualgraph::verify::{self, Status, Suite, VerifyParams};
use dualgraph::{transforms, GraphClass, Multigraph};

#[derive(Parser)]
#[command(name = "dualgraph", version, about = "Automorphisms of trivalent dual graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct EnumArgs {
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Allow genera above the class cap.
    #[arg(long)]
    override_cap: bool,
}

impl EnumArgs {
    fn options(&self) -> EnumOptions {
        EnumOptions {
            jobs: self.jobs,
            override_cap: self.override_cap,
            caps: Caps::default(),
            ..EnumOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a member of a candidate family.
    Gen {
        /// T, C, Cp, Cpp, D, cone, star, pseudocycle or binary_tree.
        #[arg(long)]
        family: Family,
        /// Genus (number of leaves for T and binary_tree, length for pseudocycle).
        #[arg(long)]
        g: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Automorphism group order of a graph.
    Aut { file: PathBuf },
    /// Whether two graphs are isomorphic (exit status 1 when not).
    Iso { first: PathBuf, second: PathBuf },
    /// Edge orbits, the minimal orbit size and the well-chosen orbit.
    Orbits { file: PathBuf },
    /// Pinch an edge and print the pinched graph.
    Pinch {
        file: PathBuf,
        #[arg(long)]
        edge: usize,
    },
    /// Enumerate trivalent graphs of a genus up to isomorphism.
    Enum {
        #[arg(long)]
        genus: u64,
        /// loops, loopless or simple.
        #[arg(long)]
        class: GraphClass,
        #[arg(long)]
        count_only: bool,
        /// Progress file; an existing one is resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many batches, keeping the checkpoint.
        #[arg(long, requires = "checkpoint")]
        max_batches: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: EnumArgs,
    },
    /// μ, μ_1 and the optimal graphs of a class.
    Extremes {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        class: GraphClass,
        #[command(flatten)]
        run: EnumArgs,
    },
    /// Run a verification suite.
    Verify {
        /// table, theorem_part1, theorem_part2_table, candidates, inequalities, structure or tsbound_consistency.
        suite: Suite,
        /// Largest genus (grid bound for inequalities).
        #[arg(long)]
        max_genus: Option<u64>,
        /// Add the genus 8 and 9 table rows.
        #[arg(long)]
        extended: bool,
        /// Print JSON lines instead of text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        run: EnumArgs,
    },
}

fn read_graph(path: &Path) -> Result<Multigraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_mel(&text, ParseMode::Lenient).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen { family, g, output } => {
            let c = families::candidate(family, g).map_err(|e| e.to_string())?;
            let mut text = format!("# family={family} parameter={g} aut={}\n", c.graph.aut_order());
            text.push_str(&c.graph.to_mel());
            emit(&text, output.as_deref())?;
        }
        Command::Aut { file } => {
            let g = read_graph(&file)?;
            println!("{}", g.aut_order());
        }
        Command::Iso { first, second } => {
            let (a, b) = (read_graph(&first)?, read_graph(&second)?);
            let iso = a.is_isomorphic(&b).map_err(|e| e.to_string())?;
            println!("{}", if iso { "isomorphic" } else { "not isomorphic" });
            if !iso {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Orbits { file } => {
            let g = read_graph(&file)?;
            let orbits = g.orbits();
            println!("aut {}", g.aut_order());
            println!("M {}", orbits.m);
            for (i, o) in orbits.edge_orbits.iter().enumerate() {
                let classes: Vec<String> = o.classes.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                println!(
                    "orbit {i} size {} shape {} edges {:?} classes {}",
                    o.size,
                    o.shape.name(),
                    o.edges,
                    classes.join(" ")
                );
            }
            let w = g.well_chosen_from(&orbits);
            println!("well-chosen edges {:?} shape {}", w.edges, w.shape.name());
        }
        Command::Pinch { file, edge } => {
            let g = read_graph(&file)?;
            let p = transforms::pinch(&g, edge).map_err(|e| e.to_string())?;
            print!("# pinch_vertex={} aut={}\n{}", p.pinch_vertex, p.graph.aut_order(), p.graph.to_mel());
        }
        Command::Enum { genus, class, count_only, checkpoint, max_batches, output, run } => {
            let mut opts = run.options();
            opts.checkpoint = checkpoint.clone();
            opts.batch_limit = max_batches;
            let result = enumerate::enumerate_with(genus, class, &opts).map_err(|e| e.to_string())?;
            if count_only {
                println!("genus {genus} class {class} total {}", result.total());
                for (aut, n) in &result.aut_histogram {
                    println!("aut {aut} count {n}");
                }
            } else {
                emit(&result.to_mel_stream(), output.as_deref())?;
            }
            if let Some(c) = checkpoint {
                let _ = fs::remove_file(companion_path(&c));
                let _ = fs::remove_file(&c);
            }
        }
        Command::Extremes { genus, class, run } => {
            let r = enumerate::extremes(genus, class, &run.options()).map_err(|e| e.to_string())?;
            println!("genus {genus} class {class}");
            println!("normaliser {}", r.normaliser);
            println!("max_aut {}", r.max_aut);
            println!("mu {}", r.mu);
            println!("max_pinched {}", r.max_pinched);
            println!("mu1 {}", r.mu1);
            for g in &r.strictly_optimal {
                print!("# strictly optimal aut={}\n{}", r.max_aut, g.to_mel());
            }
            for g in r.optimal.iter().filter(|g| !r.strictly_optimal.contains(g)) {
                print!("# optimal aut={}\n{}", r.max_aut, g.to_mel());
            }
            for w in &r.mu1_witnesses {
                print!("# mu1 witness edge={} pinched_aut={}\n{}", w.edge, w.pinched_order, w.graph.to_mel());
            }
        }
        Command::Verify { suite, max_genus, extended, json, run } => {
            let params = VerifyParams { max_genus, extended, enum_options: run.options() };
            let report = verify::verify(suite, &params);
            if json {
                print!("{}", report.to_json_lines());
            } else {
                print!("{report}");
            }
            if report.overall() == Status::Fail {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

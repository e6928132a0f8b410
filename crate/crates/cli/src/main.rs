//! `shellab`: command-line front end for shellab-core.
//!
//! Exit codes: 0 when every requested verdict holds, 1 when one fails, 2 on
//! usage or input errors.

mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shellab_core::{Limits, Property};

use commands::{RaoArgs, RelabelArgs, ShellingArgs};
use report::Report;

#[derive(Parser)]
#[command(
    name = "shellab",
    version,
    about = "Lexicographic shellability checks for finite bounded posets"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (0 picks one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    /// Refuse posets with more rooted cover relations than this.
    #[arg(long, global = true, default_value_t = Limits::default().max_rooted_covers)]
    max_rooted_covers: u64,
    /// Node budget for backtracking searches.
    #[arg(long, global = true, default_value_t = Limits::default().max_search_nodes)]
    max_search_nodes: u64,
    /// Largest facet count for the brute-force shelling search.
    #[arg(long, global = true, default_value_t = Limits::default().max_facets)]
    max_facets: usize,
    /// Most witnesses listed for failed first atom set checks.
    #[arg(long, global = true, default_value_t = 20)]
    max_witnesses: usize,
}

impl Global {
    fn limits(&self) -> Limits {
        Limits {
            max_rooted_covers: self.max_rooted_covers,
            max_search_nodes: self.max_search_nodes,
            max_facets: self.max_facets,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List maximal chains of the poset or of an interval.
    Chains {
        poset: String,
        /// Restrict to the interval [X, Y].
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        rooted: Option<Vec<String>>,
        /// Comma-separated root ending at X; chains are then those of [X, Y] under it.
        #[arg(long, requires = "rooted")]
        root: Option<String>,
    },
    /// Decide whether a labeling is EL, CL, EC, CC, TCL or self-consistent.
    Check {
        #[arg(long, value_parser = parse_kind)]
        kind: Property,
        /// `[POSET] LABELING`; a corpus labeling brings its own poset.
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
    },
    /// Build a chain-edge labeling from an order on maximal chains.
    Relabel {
        poset: Option<String>,
        /// Use the lexicographic order of this labeling.
        #[arg(long, value_name = "LABELING")]
        order_from_labeling: Option<String>,
        /// Read the order from a file with one maximal chain per line.
        #[arg(long, value_name = "FILE")]
        order_file: Option<String>,
        /// Break ties between equal label sequences by element order.
        #[arg(long)]
        tie_break: bool,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Check a first atom set against both recursive conditions.
    RfasCheck {
        /// `[POSET] FIRST_ATOMS`
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
        /// Root the second condition at r plus the earlier atom, as literally written.
        #[arg(long)]
        rfas_ii_literal: bool,
    },
    /// Print the shelling order induced by a recursive first atom set.
    RfasShell {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
        #[arg(long)]
        rfas_ii_literal: bool,
    },
    /// Derive a recursive first atom set from a TCL-labeling.
    RfasFromTcl {
        /// `[POSET] LABELING`
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Search for a linear extension of the chain order satisfying (LC).
    LcCheck {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
        /// Print the compatible labeling instead of the chain order.
        #[arg(long)]
        labeling: bool,
    },
    /// Search for (or verify) a recursive atom ordering.
    Rao {
        poset: String,
        /// Use the generalized conditions.
        #[arg(long)]
        grao: bool,
        /// Write the ordering found to this file.
        #[arg(long, value_name = "FILE")]
        certificate: Option<String>,
        /// Verify an ordering from this file instead of searching.
        #[arg(long, value_name = "FILE", conflicts_with = "certificate")]
        verify: Option<String>,
    },
    /// Verify a shelling order of an order complex or simplicial complex.
    ShellingVerify {
        /// Poset or complex (JSON with `facets`).
        input: String,
        /// Facet order file: maximal chains for a poset, facets for a complex.
        #[arg(long, value_name = "FILE")]
        order: Option<String>,
        /// Use the lexicographic order of this labeling.
        #[arg(long, value_name = "LABELING")]
        from_labeling: Option<String>,
        /// Use the order induced by this first atom set.
        #[arg(long, value_name = "FIRST_ATOMS")]
        from_rfas: Option<String>,
        /// Search all facet orders.
        #[arg(long)]
        brute_force: bool,
    },
    /// List, show or re-check the built-in examples.
    Corpus {
        names: Vec<String>,
        #[arg(long)]
        list: bool,
        /// Print a fixture file, e.g. `fig1/left`.
        #[arg(long, value_name = "ITEM")]
        show: Option<String>,
    },
    /// Write the Hasse diagram in Graphviz format.
    ExportDot {
        poset: String,
        #[arg(short, long)]
        out: Option<String>,
    },
}

fn parse_kind(s: &str) -> Result<Property, String> {
    s.parse().map_err(|e: shellab_core::Error| e.to_string())
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Chains { .. } => "chains",
        Command::Check { .. } => "check",
        Command::Relabel { .. } => "relabel",
        Command::RfasCheck { .. } => "rfas-check",
        Command::RfasShell { .. } => "rfas-shell",
        Command::RfasFromTcl { .. } => "rfas-from-tcl",
        Command::LcCheck { .. } => "lc-check",
        Command::Rao { .. } => "rao",
        Command::ShellingVerify { .. } => "shelling-verify",
        Command::Corpus { .. } => "corpus",
        Command::ExportDot { .. } => "export-dot",
    }
}

fn inputs(c: &Command) -> Vec<String> {
    let mut v = Vec::new();
    match c {
        Command::Chains { poset, .. } | Command::Rao { poset, .. } | Command::ExportDot { poset, .. } => {
            v.push(poset.clone())
        }
        Command::Check { inputs, .. }
        | Command::RfasCheck { inputs, .. }
        | Command::RfasShell { inputs, .. }
        | Command::RfasFromTcl { inputs, .. }
        | Command::LcCheck { inputs, .. } => v.extend(inputs.iter().cloned()),
        Command::Relabel {
            poset,
            order_from_labeling,
            order_file,
            ..
        } => v.extend(
            [poset, order_from_labeling, order_file]
                .into_iter()
                .flatten()
                .cloned(),
        ),
        Command::ShellingVerify {
            input,
            order,
            from_labeling,
            from_rfas,
            ..
        } => {
            v.push(input.clone());
            v.extend([order, from_labeling, from_rfas].into_iter().flatten().cloned());
        }
        Command::Corpus { names, .. } => v.extend(names.iter().cloned()),
    }
    v
}

fn run(cli: &Cli) -> input::Result<Report> {
    let g = &cli.global;
    let limits = g.limits();
    let mut r = Report::new(name(&cli.command), &inputs(&cli.command), g.timings);
    match &cli.command {
        Command::Chains { poset, rooted, root } => {
            commands::chains(&mut r, poset, rooted.as_deref(), root.as_deref())?
        }
        Command::Check { kind, inputs } => commands::check(&mut r, *kind, inputs, &limits)?,
        Command::Relabel {
            poset,
            order_from_labeling,
            order_file,
            tie_break,
            out,
        } => commands::relabel(
            &mut r,
            RelabelArgs {
                poset: poset.as_deref(),
                from_labeling: order_from_labeling.as_deref(),
                order_file: order_file.as_deref(),
                tie_break: *tie_break,
                out: out.as_deref(),
            },
            &limits,
        )?,
        Command::RfasCheck {
            inputs,
            rfas_ii_literal,
        } => commands::rfas_check(&mut r, inputs, *rfas_ii_literal, &limits, g.max_witnesses)?,
        Command::RfasShell {
            inputs,
            rfas_ii_literal,
        } => commands::rfas_shell(&mut r, inputs, *rfas_ii_literal, &limits, g.max_witnesses)?,
        Command::RfasFromTcl { inputs, out } => {
            commands::rfas_from_tcl_cmd(&mut r, inputs, &limits, out.as_deref())?
        }
        Command::LcCheck { inputs, labeling } => commands::lc_check(&mut r, inputs, *labeling, &limits)?,
        Command::Rao {
            poset,
            grao,
            certificate,
            verify,
        } => commands::rao(
            &mut r,
            RaoArgs {
                poset,
                grao: *grao,
                certificate: certificate.as_deref(),
                verify: verify.as_deref(),
            },
            &limits,
        )?,
        Command::ShellingVerify {
            input,
            order,
            from_labeling,
            from_rfas,
            brute_force,
        } => commands::shelling_verify(
            &mut r,
            ShellingArgs {
                input,
                order: order.as_deref(),
                from_labeling: from_labeling.as_deref(),
                from_rfas: from_rfas.as_deref(),
                brute_force: *brute_force,
            },
            &limits,
        )?,
        Command::Corpus { names, list, show } => {
            commands::corpus(&mut r, names, *list, show.as_deref(), &limits)?
        }
        Command::ExportDot { poset, out } => commands::export_dot(&mut r, poset, out.as_deref())?,
    }
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(report) => {
            // A closed pipe (`| head`) is not an error of ours.
            match report.print(cli.global.json) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                _ => {}
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lnc_core::analysis::mincut_report;
use lnc_core::dot::{layered_to_dot, to_dot};
use lnc_core::duality::{backward_individual, precode, random_precoder, reverse, square_reduce};
use lnc_core::lnc::{individual_matrix, interlayer_matrix, overall_matrix, simulate, simulate_timed};
use lnc_core::transform::layering_cost;
use lnc_core::{layer, layered_variant1, to_variant1, FieldMatrix, FieldSpec};
use serde_json::json;

use crate::io::{coefficients, destination, emit, emit_json, load, load_file, rows, CliError, CliResult, Input};

#[derive(Parser)]
#[command(name = "lnc", version, about = "Linear network coding on layered networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Field override, `p` for GF(p) or `p,m` for GF(p^m).
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Seed for random coefficients and trials.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON or DOT output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Coeffs {
    /// Assignment file for the input network.
    #[arg(long)]
    assignment: Option<PathBuf>,
    /// Convert to Variant I before layering.
    #[arg(long)]
    convert_first: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network file and report its structure.
    Validate { network: PathBuf },
    /// Insert SISO relays so that edges only join adjacent layers.
    Layer {
        network: PathBuf,
        /// Also convert to Variant I.
        #[arg(long)]
        variant1: bool,
        /// With --variant1, convert before layering.
        #[arg(long)]
        convert_first: bool,
    },
    /// Split Variant-II and hybrid nodes into Variant-I nodes.
    Convert { network: PathBuf },
    /// Overall, individual and interlayer channel matrices.
    Matrix {
        network: PathBuf,
        #[command(flatten)]
        coeffs: Coeffs,
        /// Destination id or 1-based index; all destinations by default.
        #[arg(long)]
        dest: Option<String>,
    },
    /// Bracket the mincut to each destination.
    Mincut {
        network: PathBuf,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        #[arg(long)]
        dest: Option<String>,
        #[arg(long)]
        convert_first: bool,
    },
    /// Send source symbols through the network.
    Simulate {
        network: PathBuf,
        #[command(flatten)]
        coeffs: Coeffs,
        /// Source symbols, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        symbols: Vec<u32>,
        /// Report arrival ticks and buffer depths.
        #[arg(long)]
        timed: bool,
    },
    /// Reverse the network for one destination.
    Reverse {
        network: PathBuf,
        #[command(flatten)]
        coeffs: Coeffs,
        #[arg(long)]
        dest: Option<String>,
        /// First drop taps until the destination's matrix is square.
        #[arg(long)]
        square_reduce: bool,
    },
    /// Backward map under a precoder at the reversed source.
    Precode {
        network: PathBuf,
        #[command(flatten)]
        coeffs: Coeffs,
        #[arg(long)]
        dest: Option<String>,
        /// Precoder as a JSON array of rows.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        matrix: Option<PathBuf>,
        /// Draw a random full-rank precoder.
        #[arg(long)]
        random: bool,
    },
    /// Render the network as Graphviz DOT.
    ExportDot {
        network: PathBuf,
        /// Layer first and put each layer on one rank.
        #[arg(long)]
        layered: bool,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let (p, m) = match parts.as_slice() {
        [p] => (num(p)?, 1),
        [p, m] => (num(p)?, num(m)?),
        _ => return Err("expected p or p,m".into()),
    };
    FieldSpec::new(p, m).map_err(|e| e.to_string())
}

fn need_seed(seed: Option<u64>) -> CliResult<u64> {
    seed.ok_or_else(|| CliError::Usage("this command needs --seed".into()))
}

fn run(cli: Cli) -> CliResult<()> {
    let field = cli.field.as_ref();
    let out = cli.out.as_deref();
    match cli.command {
        Command::Validate { network } => validate(&network, field, out),
        Command::Layer { network, variant1, convert_first } => {
            let net = load(&network, field)?;
            let l = if variant1 || convert_first {
                layered_variant1(net.network(), convert_first)?
            } else {
                layer(net.network())?
            };
            eprintln!("L = {}, layer sizes {:?}, {} inserted", l.depth(), l.layer_sizes(), l.inserted().len());
            emit(out, &(l.to_json() + "\n"))
        }
        Command::Convert { network } => {
            let net = load(&network, field)?;
            let (conv, map) = to_variant1(net.network())?;
            eprintln!("{} nodes after conversion, {} relays", conv.nodes().len(), map.inserted.len());
            emit_json(out, &json!({ "network": conv.to_file(), "map": map }))
        }
        Command::Matrix { network, coeffs, dest } => {
            let input = load(&network, field)?;
            let (l, asg) = io::layered(&input, coeffs.assignment.as_deref(), cli.seed, coeffs.convert_first)?;
            let overall = overall_matrix(&l, &asg)?;
            eprintln!("A ({} x {}):\n{}", overall.matrix.rows(), overall.matrix.cols(), overall.matrix);
            let ks: Vec<usize> = match dest.as_deref() {
                Some(d) => vec![destination(l.network(), Some(d))?],
                None => (0..l.network().destinations().len()).collect(),
            };
            let mut individual = Vec::new();
            for k in ks {
                let ak = individual_matrix(&l, &asg, k)?;
                let id = &l.network().node(l.network().destination(k)?.node).id;
                eprintln!("A_{id} (rank {}):\n{}", ak.matrix.rank(), ak.matrix);
                individual.push(json!({ "destination": id, "matrix": ak }));
            }
            let mut interlayer = Vec::new();
            for i in 1..l.depth() {
                interlayer.push(rows(&interlayer_matrix(&l, &asg, i)?));
            }
            emit_json(
                out,
                &json!({
                    "field": l.network().field(),
                    "layer_sizes": l.layer_sizes(),
                    "overall": overall,
                    "individual": individual,
                    "interlayer": interlayer,
                }),
            )
        }
        Command::Mincut { network, trials, dest, convert_first } => {
            let seed = need_seed(cli.seed)?;
            let input = load(&network, field)?;
            let net = input.network();
            let ks: Vec<usize> = match dest.as_deref() {
                Some(d) => vec![destination(net, Some(d))?],
                None => (0..net.destinations().len()).collect(),
            };
            let mut reports = Vec::new();
            for k in ks {
                let r = mincut_report(net, k, trials as usize, seed, convert_first)?;
                eprintln!(
                    "{}: estimate {}, upper bound {}, max-flow {}",
                    r.destination, r.estimate, r.upper_bound, r.max_flow
                );
                reports.push(r);
            }
            emit_json(out, &json!(reports))
        }
        Command::Simulate { network, coeffs, symbols, timed } => {
            let input = load(&network, field)?;
            let net = input.network();
            let asg = coefficients(net, coeffs.assignment.as_deref(), cli.seed)?;
            if timed {
                let t = simulate_timed(net, &asg, &symbols)?;
                eprintln!("max buffer depth {}, synchronized {}", t.max_buffer_depth(), t.synchronized());
                let depths: serde_json::Map<String, serde_json::Value> =
                    (0..net.nodes().len()).map(|v| (net.node(v).id.clone(), json!(t.buffer_depth(v)))).collect();
                emit_json(out, &json!({ "simulation": t, "buffer_depths": depths }))
            } else {
                emit_json(out, &json!(simulate(net, &asg, &symbols)?))
            }
        }
        Command::Reverse { network, coeffs, dest, square_reduce: reduce } => {
            let input = load(&network, field)?;
            let (l, asg) = io::layered(&input, coeffs.assignment.as_deref(), cli.seed, coeffs.convert_first)?;
            let mut k = destination(l.network(), dest.as_deref())?;
            let l = if reduce {
                let (kept, reduced) = square_reduce(&l, &asg, k)?;
                eprintln!("kept taps {kept:?}");
                k = destination(reduced.network(), Some(&l.network().node(l.network().destination(k)?.node).id))?;
                reduced
            } else {
                l
            };
            let rev = reverse(&l, &asg, k)?;
            let bk = backward_individual(&rev)?.matrix;
            eprintln!("{}\nA_k^T (rank {}):\n{}", io::describe_reversal(&rev), bk.rank(), bk);
            emit(out, &(rev.to_json() + "\n"))
        }
        Command::Precode { network, coeffs, dest, matrix, random } => {
            let input = load(&network, field)?;
            let (l, asg) = io::layered(&input, coeffs.assignment.as_deref(), cli.seed, coeffs.convert_first)?;
            let rev = reverse(&l, &asg, destination(l.network(), dest.as_deref())?)?;
            let f = l.network().field();
            let (p, map) = match (matrix, random) {
                (Some(path), _) => {
                    let data: Vec<Vec<u32>> = io::parse(&path)?;
                    let p = FieldMatrix::from_rows(f, &data).map_err(lnc_core::Error::from)?;
                    let map = precode(&rev, &p)?;
                    (p, map)
                }
                (None, true) => random_precoder(&rev, need_seed(cli.seed)?)?,
                (None, false) => unreachable!("clap requires --matrix or --random"),
            };
            eprintln!("A_k^T P:\n{map}");
            emit_json(out, &json!({ "precoder": rows(&p), "backward": rows(&map) }))
        }
        Command::ExportDot { network, layered } => {
            let dot = match load(&network, field)? {
                Input::Layered(l) => layered_to_dot(&l),
                Input::Plain(n) if layered => layered_to_dot(&layer(&n)?),
                Input::Plain(n) => to_dot(&n),
            };
            emit(out, &dot)
        }
    }
}

fn validate(path: &Path, field: Option<&FieldSpec>, out: Option<&Path>) -> CliResult<()> {
    let file = load_file(path, field)?;
    let net = file.into_network()?;
    let report = net.validate();
    let mut value = json!({ "valid": report.is_ok(), "report": report });
    if report.is_ok() {
        let mut dests = Vec::new();
        for d in net.destinations() {
            let id = &net.node(d.node).id;
            dests.push(json!({ "id": id, "taps": d.taps.len(), "path_lengths": net.path_length_spectrum(id)? }));
        }
        let cost = layering_cost(&net);
        value["source_symbols"] = json!(net.source_symbols());
        value["destinations"] = json!(dests);
        value["layering_cost"] = json!({
            "coding_points": cost.coding_points,
            "average_in_degree": cost.average_in_degree(),
        });
    }
    emit_json(out, &value)?;
    if report.is_ok() {
        eprintln!("valid: {} nodes, {} edges", net.nodes().len(), net.edges().len());
        Ok(())
    } else {
        Err(CliError::Rejected(format!("{} violation(s)", report.violations.len())))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kerov::approximation::cdf_continual;
use kerov::experiments::{
    metric_rate_csv, metric_rate_table, staircase_rate_csv, staircase_rate_table, sweep_csv,
    theorem_sweep, Hypotheses, SweepConfig, SWEEP_CSV_HEADER,
};
use kerov::growth::{growth_probabilities, sample_growth, RNG_ALGORITHM};
use kerov::io::{
    load_diagram, measure_csv_exact, measure_json_exact, measure_json_float, parse_list,
    DiagramInput,
};
use kerov::metric::distance;
use kerov::shift::{lower_bound_cdf, upper_bound_cdf, BoundReport};
use kerov::transition::{transition_measure, ArcsineLaw, TransitionLaw};
use kerov::{partitions_of, Partition, Rat, Scalar};

type CliResult<T> = Result<T, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

#[derive(Parser)]
#[command(
    name = "kerov",
    version,
    about = "Transition measures of Young diagrams and bounds for nearby diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Upper,
    Lower,
}

#[derive(Subcommand)]
enum Command {
    /// Transition measure of a Young diagram or zigzag.
    ///
    /// Exact JSON: {"atoms": [[location, weight_num, weight_den], ...]}.
    /// Float JSON (zigzags given by breakpoints): {"atoms": [[location, weight], ...]}.
    /// CSV columns: location,weight_num,weight_den,weight.
    Transition {
        /// Rows, e.g. 4,2,2,2.
        #[arg(long, conflicts_with = "diagram")]
        partition: Option<String>,
        /// Diagram file (or `triangle`); must be a zigzag.
        #[arg(long)]
        diagram: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Estimate of the cumulative function of the transition measure at `t`
    /// from inner zigzag approximations at n_max/4, n_max/2, n_max.
    ///
    /// Prints JSON {value, error_bound, resolution, converging, ladder}; the
    /// error bound is an estimate, not a proven bound.
    Cdf {
        #[arg(long)]
        diagram: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 256)]
        nmax: usize,
    },
    /// Distance between two diagrams; exact rational output when both are
    /// partitions.
    Metric {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Upper or lower bound for the cumulative function at z0 over all
    /// diagrams within distance eps of the given one.
    ///
    /// Prints JSON {z_star, bound_value, side, epsilon, z0}.
    Bound {
        #[arg(long)]
        omega: String,
        #[arg(long, allow_hyphen_values = true)]
        z0: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Resolution of the inner approximation for non-zigzag diagrams.
        #[arg(long, default_value_t = 256)]
        nmax: usize,
    },
    /// Compares the growth-process law with the residues for every partition
    /// of size up to max-n; prints OK or the first mismatch.
    GrowthCheck {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Samples a Plancherel growth trajectory as JSON lines. The first line
    /// carries the generator name and parameters.
    GrowthSample {
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sup distance on [a0, b0] between the cumulative functions of resized
    /// staircases of order 1..=nmax and of the arcsine law.
    ///
    /// CSV columns: N,n,sup_error,scaled_error,largest_atom.
    StaircaseRate {
        #[arg(long, default_value_t = 200)]
        nmax: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        a0: f64,
        #[arg(long, default_value_t = 1.0)]
        b0: f64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Distance between resized staircases of order 1..=nmax and the triangle.
    ///
    /// CSV columns: N,distance,scaled_distance.
    MetricRate {
        #[arg(long, default_value_t = 200)]
        nmax: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Randomized check of the upper and lower bounds on diagrams sampled in
    /// eps-balls around omega.
    ///
    /// CSV columns: epsilon,z0,samples,resolution,z_plus_max,z_minus_min,
    /// upper_bound,lower_bound,reference_cdf,violations_upper,violations_lower,
    /// min_margin_upper,min_margin_lower,excess_upper,excess_lower,
    /// envelope_ratio,term_first,term_middle,term_tail,cap_first,cap_middle,
    /// cap_tail,delta. Excess is the gap between a bound and the reference
    /// cumulative function; the terms split the upper excess and the caps are
    /// their theoretical bounds (only with hypotheses).
    TheoremSweep {
        /// Diagram file or `triangle` (which uses the arcsine law and the
        /// hypotheses a=-1.2, b=1.2, a0=-1, b0=1).
        #[arg(long)]
        omega: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        walk_steps: usize,
        /// Comma-separated z0 values; defaults to -1, -0.75, ..., 1.
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
        /// Box side 1/q of sampled diagrams; a power of two is picked when
        /// omitted.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
}

fn emit(out: Option<&str>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn bound_json(r: &BoundReport<f64>) -> String {
    serde_json::to_string(r).expect("serializable")
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Transition {
            partition,
            diagram,
            format,
        } => {
            let input = match (partition, diagram) {
                (Some(rows), _) => DiagramInput::Partition(
                    Partition::new(parse_list(&rows).map_err(fail)?).map_err(fail)?,
                ),
                (None, Some(file)) => load_diagram(&file).map_err(fail)?,
                (None, None) => return Err("give --partition or --diagram".into()),
            };
            match input {
                DiagramInput::Partition(p) => {
                    let mu = transition_measure(&p.zigzag::<Rat>());
                    match format {
                        Format::Json => println!("{}", measure_json_exact(&mu)),
                        Format::Csv => print!("{}", measure_csv_exact(&mu)),
                    }
                }
                DiagramInput::Breakpoints(d) => {
                    let zig = d
                        .as_zigzag()
                        .ok_or("diagram is not a zigzag; use `cdf` for continual diagrams")?;
                    let mu = transition_measure(&zig);
                    match format {
                        Format::Json => println!("{}", measure_json_float(&mu)),
                        Format::Csv => {
                            println!("location,weight");
                            for (x, w) in mu.atoms() {
                                println!("{x:.16e},{w:.16e}");
                            }
                        }
                    }
                }
            }
        }
        Command::Cdf { diagram, t, nmax } => {
            let est = match load_diagram(&diagram).map_err(fail)? {
                DiagramInput::Partition(p) => cdf_continual(&p.profile::<Rat>(), &t.to_rat(), nmax),
                DiagramInput::Breakpoints(d) => cdf_continual(&d, &t, nmax),
            }
            .map_err(fail)?;
            println!("{}", serde_json::to_string(&est).expect("serializable"));
        }
        Command::Metric { a, b } => {
            match (
                load_diagram(&a).map_err(fail)?,
                load_diagram(&b).map_err(fail)?,
            ) {
                (DiagramInput::Partition(p), DiagramInput::Partition(q)) => {
                    println!("{}", distance(&p.profile::<Rat>(), &q.profile::<Rat>()));
                }
                (x, y) => println!("{:.16e}", distance(&x.as_f64(), &y.as_f64())),
            }
        }
        Command::Bound {
            omega,
            z0,
            eps,
            side,
            nmax,
        } => {
            let report = match load_diagram(&omega).map_err(fail)? {
                DiagramInput::Partition(p) => {
                    let d = p.profile::<Rat>();
                    let (z, e) = (z0.to_rat(), eps.to_rat());
                    match side {
                        SideArg::Upper => upper_bound_cdf(&d, &z, &e, nmax),
                        SideArg::Lower => lower_bound_cdf(&d, &z, &e, nmax),
                    }
                    .map(|r| r.to_f64())
                }
                DiagramInput::Breakpoints(d) => match side {
                    SideArg::Upper => upper_bound_cdf(&d, &z0, &eps, nmax),
                    SideArg::Lower => lower_bound_cdf(&d, &z0, &eps, nmax),
                },
            }
            .map_err(fail)?;
            println!("{}", bound_json(&report));
        }
        Command::GrowthCheck { max_n } => {
            for n in 0..=max_n {
                for p in partitions_of(n) {
                    let growth = growth_probabilities(&p);
                    let residues = transition_measure(&p.zigzag::<Rat>());
                    if growth != residues {
                        return Err(format!(
                            "mismatch at {:?}: growth {} vs residues {}",
                            p.rows(),
                            measure_json_exact(&growth),
                            measure_json_exact(&residues)
                        ));
                    }
                }
            }
            println!("OK");
        }
        Command::GrowthSample { steps, seed } => {
            println!(
                "{}",
                serde_json::json!({ "rng": RNG_ALGORITHM, "seed": seed, "steps": steps })
            );
            for (k, p) in sample_growth(steps, seed).iter().enumerate() {
                println!(
                    "{}",
                    serde_json::json!({ "step": k, "partition": p.rows() })
                );
            }
        }
        Command::StaircaseRate {
            nmax,
            a0,
            b0,
            grid,
            out,
        } => {
            let orders: Vec<usize> = (1..=nmax).collect();
            let rows = staircase_rate_table(&orders, a0, b0, grid).map_err(fail)?;
            emit(out.as_deref(), &staircase_rate_csv(&rows))?;
        }
        Command::MetricRate { nmax, out } => {
            let orders: Vec<usize> = (1..=nmax).collect();
            emit(
                out.as_deref(),
                &metric_rate_csv(&metric_rate_table(&orders)),
            )?;
        }
        Command::TheoremSweep {
            omega,
            eps,
            samples,
            seed,
            walk_steps,
            z0,
            resolution,
            out,
        } => {
            let epsilons: Vec<f64> = parse_list(&eps).map_err(fail)?;
            let z0_grid: Vec<f64> = match z0 {
                Some(list) => parse_list(&list).map_err(fail)?,
                None => (-4..=4).map(|k| k as f64 / 4.0).collect(),
            };
            let csv = match load_diagram(&omega).map_err(fail)? {
                DiagramInput::Partition(p) => {
                    let config = SweepConfig {
                        epsilons: epsilons.iter().map(Scalar::to_rat).collect(),
                        samples,
                        walk_steps,
                        z0_grid: z0_grid.iter().map(Scalar::to_rat).collect(),
                        seed,
                        resolution,
                        slack: 0.0,
                        hypotheses: None,
                        n_max: 256,
                    };
                    sweep_csv(&theorem_sweep(&p.profile::<Rat>(), None, &config).map_err(fail)?)
                }
                DiagramInput::Breakpoints(d) => {
                    let triangle = omega == "triangle";
                    let config = SweepConfig {
                        epsilons,
                        samples,
                        walk_steps,
                        z0_grid,
                        seed,
                        resolution,
                        slack: 1e-12,
                        hypotheses: triangle.then(Hypotheses::triangle),
                        n_max: 256,
                    };
                    let law: Option<&dyn TransitionLaw> =
                        if triangle { Some(&ArcsineLaw) } else { None };
                    sweep_csv(&theorem_sweep::<f64>(&d, law, &config).map_err(fail)?)
                }
            };
            debug_assert!(csv.starts_with(SWEEP_CSV_HEADER));
            emit(out.as_deref(), &csv)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mlsw_core::diagnostics::nlayer_eigen;
use mlsw_core::scenario::load_scenario;
use mlsw_core::snapshot::{read_snapshot, write_snapshot, RunLog};
use mlsw_core::stepper::{advance, evaluate, Event};
use mlsw_core::{Error, Order, Problem, Scenario, SimState};

/// Multilayer Saint-Venant solver.
#[derive(Parser, Debug)]
#[command(name = "mlsw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario and write CSV snapshots plus `run.csv` into the output directory.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the eigenvalues of the multilayer system in every wet cell.
    Eigen {
        #[command(flatten)]
        config: ConfigArgs,
        /// Snapshot CSV to analyse instead of the initial state.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Parse and check a scenario without running it.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
    },
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the spatial order (1 or 2).
    #[arg(long)]
    order: Option<u8>,
    /// Override the final time (s).
    #[arg(long)]
    tend: Option<f64>,
    /// Override the snapshot interval (s).
    #[arg(long)]
    snapshots: Option<f64>,
}

enum Failure {
    Config(String),
    Numerical(String),
    Output(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Output(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Output(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            match e {
                Error::Io { .. } | Error::Snapshot { .. } => Failure::Output(e.to_string()),
                _ => Failure::Config(e.to_string()),
            }
        }
    }
}

impl ConfigArgs {
    fn load(&self) -> Result<Scenario, Failure> {
        let mut sc = load_scenario(&self.config).map_err(|e| Failure::Config(e.to_string()))?;
        let mut problems = Vec::new();
        if let Some(o) = self.order {
            match Order::try_from(o) {
                Ok(o) => sc.time.order = o,
                Err(_) => problems.push(format!("--order must be 1 or 2, got {o}")),
            }
        }
        if let Some(t) = self.tend {
            if t.is_finite() && t >= 0.0 {
                sc.time.t_end = t;
            } else {
                problems.push(format!("--tend must be a non-negative number, got {t}"));
            }
        }
        if let Some(s) = self.snapshots {
            if s.is_finite() && s > 0.0 {
                sc.output.snapshot_interval = Some(s);
            } else {
                problems.push(format!("--snapshots must be positive, got {s}"));
            }
        }
        if problems.is_empty() {
            Ok(sc)
        } else {
            Err(Failure::Config(problems.join("\n")))
        }
    }
}

fn setup(args: &ConfigArgs) -> Result<(Scenario, Problem, SimState), Failure> {
    let sc = args.load()?;
    let problem = sc.problem().map_err(|e| Failure::Config(e.to_string()))?;
    let state = sc.initial_state(&problem).map_err(|e| Failure::Config(e.to_string()))?;
    Ok((sc, problem, state))
}

fn run(args: &ConfigArgs, out: &Path) -> Result<(), Failure> {
    let (sc, problem, state) = setup(args)?;
    fs::create_dir_all(out).map_err(|e| Failure::Output(format!("{}: {e}", out.display())))?;
    let mut log = RunLog::create(&out.join("run.csv"))?;
    let config = sc.step_config();
    let write_every_output = config.snapshot_interval.is_some();
    let mut written = 0usize;
    let mut io_error: Option<Error> = None;
    let emit = |s: &SimState, written: &mut usize| -> Result<(), Error> {
        write_snapshot(&problem, s, &out.join(format!("snapshot_{:04}.csv", *written)))?;
        *written += 1;
        Ok(())
    };
    if !write_every_output {
        emit(&state, &mut written)?;
    }
    let result = advance(&problem, state, sc.time.t_end, &config, |event| {
        if io_error.is_some() {
            return;
        }
        let r = match event {
            Event::Step(rep, _) => log.append(rep.time, rep.dt, rep.mass, rep.energy),
            Event::Snapshot(_, s) => emit(s, &mut written),
        };
        if let Err(e) = r {
            io_error = Some(e);
        }
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    let (end, summary) = match result {
        Ok(r) => r,
        Err(Error::NonFinite { time, detail, last_valid }) => {
            let path = out.join("last_valid.csv");
            write_snapshot(&problem, &last_valid, &path)?;
            log.finish()?;
            return Err(Failure::Numerical(format!(
                "non-finite state at t = {time}: {detail}; last valid state written to {}",
                path.display()
            )));
        }
        Err(e) => {
            log.finish()?;
            return Err(e.into());
        }
    };
    if !write_every_output {
        emit(&end, &mut written)?;
    }
    log.finish()?;
    println!(
        "{}: t = {} after {} steps ({} halvings), {written} snapshots in {}{}",
        sc.name.as_deref().unwrap_or("scenario"),
        end.time,
        summary.steps,
        summary.retries,
        out.display(),
        if summary.reached_steady {
            format!(", steady (residual {:.3e} of initial)", summary.final_residual / summary.initial_residual)
        } else {
            String::new()
        }
    );
    Ok(())
}

fn eigen(args: &ConfigArgs, snapshot: Option<&Path>) -> Result<(), Failure> {
    let (_, problem, mut state) = setup(args)?;
    let n = problem.n_layers();
    if let Some(path) = snapshot {
        let snap = read_snapshot(path)?;
        if snap.layers != n || snap.h.len() != problem.cells() {
            return Err(Failure::Config(format!(
                "{}: snapshot has {} cells and {} layers, scenario has {} and {}",
                path.display(),
                snap.h.len(),
                snap.layers,
                problem.cells(),
                n
            )));
        }
        state = SimState::from_velocities(snap.h, &snap.u, &problem.layers)?;
    }
    let tend = evaluate(&problem, &state, Default::default());
    let u = state.velocities(&problem.layers, problem.dry_threshold);
    let header: Vec<String> = (1..=n + 1).map(|k| format!("lambda_{k}")).collect();
    println!("x,H,real_distinct,max_imag,{}", header.join(","));
    let mut complex = 0;
    for i in 0..problem.cells() {
        let h = state.h[i];
        if h <= problem.dry_threshold {
            continue;
        }
        let iface = tend.exchanges.column_velocities(i);
        let rep = nlayer_eigen(h, &u[i * n..(i + 1) * n], &problem.layers, iface, problem.gravity())?;
        let mut ev = rep.real.clone();
        ev.sort_by(f64::total_cmp);
        let cols: Vec<String> = ev.iter().map(|v| format!("{v:.10e}")).collect();
        if rep.max_imag > 0.0 {
            complex += 1;
        }
        println!(
            "{:.10e},{:.10e},{},{:.3e},{}",
            problem.grid.x(i),
            h,
            rep.real_distinct,
            rep.max_imag,
            cols.join(",")
        );
    }
    eprintln!("{complex} cells with complex eigenvalues");
    Ok(())
}

fn validate(args: &ConfigArgs) -> Result<(), Failure> {
    let (sc, problem, _) = setup(args)?;
    println!(
        "{}: ok ({} cells, {} layers, t_end = {}, order {})",
        args.config.display(),
        problem.cells(),
        problem.n_layers(),
        sc.time.t_end,
        sc.time.order.as_u8()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, out } => run(config, out),
        Command::Eigen { config, snapshot } => eigen(config, snapshot.as_deref()),
        Command::Validate { config } => validate(config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

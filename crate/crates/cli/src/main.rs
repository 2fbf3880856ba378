use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use image::{Rgb as Pixel, RgbImage};
use microlab_core::arena::{run_simulation, SimConfig, SimulationTrace};
use microlab_core::bench::{
    bench_import_and_frames, render_table, BenchOptions, SizeSpec, TABLE_SIZES,
};
use microlab_core::dataset::{
    import_pair, select_fluctuating_substances, write_population, write_substance, FluxMode,
    SubstanceReader, FLUX_COLUMNS, POPULATION_FILE, SUBSTANCE_FILE,
};
use microlab_core::viz::{map_color, scheme, DEFAULT_SCHEME};
use microlab_core::Grid;

/// Pixels per grid cell in rendered heatmaps.
const PIXEL_SCALE: u32 = 16;
const TRACE_FILE: &str = "trace.json";

#[derive(Debug, Parser)]
#[command(
    name = "microlab",
    version,
    about = "Spatial community FBA simulation and dataset tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation and write the trace plus both dataset files
    Simulate {
        config: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Overrides the step count from the configuration
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Convert a saved trace into the population and substance files
    Export {
        trace: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Replace computed fluxes with seeded uniform values in [-50, 50]
        #[arg(long, value_name = "SEED")]
        random_fluxes: Option<u64>,
    },
    /// Check a population/substance file pair
    Validate {
        population: PathBuf,
        substance: PathBuf,
    },
    /// Draw one concentration matrix as a PNG heatmap
    Render {
        substance_file: PathBuf,
        #[arg(long)]
        substance: String,
        #[arg(long)]
        time: u32,
        #[arg(long, default_value_t = DEFAULT_SCHEME)]
        scheme: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Start the HTTP session service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
    /// Measure import time and frame throughput at several dataset scales
    Bench {
        /// Comma-separated `WxH:rows:n` specs
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<SizeSpec>,
        #[arg(long, default_value_t = 500)]
        frames: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the records as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// A check on user data failed; reported with exit code 1.
#[derive(Debug)]
struct ValidationFailed;

impl std::fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("validation failed")
    }
}

impl std::error::Error for ValidationFailed {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<ValidationFailed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Simulate { config, out, steps } => simulate(&config, &out, steps),
        Command::Export {
            trace,
            out,
            random_fluxes,
        } => {
            let text = fs::read_to_string(&trace)
                .with_context(|| format!("reading {}", trace.display()))?;
            let trace = SimulationTrace::from_json(&text)
                .with_context(|| format!("parsing {}", trace.display()))?;
            let mode = random_fluxes.map_or(FluxMode::Computed, FluxMode::Randomized);
            export(&trace, &out, mode)
        }
        Command::Validate {
            population,
            substance,
        } => validate(&population, &substance),
        Command::Render {
            substance_file,
            substance,
            time,
            scheme,
            out,
        } => render(&substance_file, &substance, time, scheme, &out),
        Command::Serve { port, host } => {
            tracing_subscriber::fmt().with_target(false).init();
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(microlab_service::serve(SocketAddr::new(host, port)))?;
            Ok(())
        }
        Command::Bench {
            sizes,
            frames,
            seed,
            json,
        } => bench(sizes, frames, seed, json.as_deref()),
    }
}

fn simulate(config_path: &Path, out: &Path, steps: Option<usize>) -> anyhow::Result<()> {
    let config = SimConfig::load(config_path)?;
    let steps = steps.unwrap_or(config.steps);
    let trace = run_simulation(&config, steps)?;
    fs::create_dir_all(out)?;
    fs::write(out.join(TRACE_FILE), trace.to_json())?;
    export(&trace, out, FluxMode::Computed)?;
    let last = trace.snapshots.last().expect("at least one snapshot");
    println!(
        "simulated {steps} steps on {}x{}: {} agents at the end, wrote {}",
        trace.width,
        trace.height,
        last.agents.len(),
        out.display()
    );
    Ok(())
}

fn export(trace: &SimulationTrace, out: &Path, mode: FluxMode) -> anyhow::Result<()> {
    fs::create_dir_all(out)?;
    let chosen = select_fluctuating_substances(trace, FLUX_COLUMNS);
    let mut pop = BufWriter::new(File::create(out.join(POPULATION_FILE))?);
    write_population(&mut pop, trace, &chosen, mode)?;
    pop.flush()?;
    let mut sub = BufWriter::new(File::create(out.join(SUBSTANCE_FILE))?);
    write_substance(&mut sub, trace, &chosen)?;
    sub.flush()?;
    println!("exported substances: {}", chosen.join(", "));
    Ok(())
}

fn display_name(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

fn validate(population: &Path, substance: &Path) -> anyhow::Result<()> {
    let pop =
        File::open(population).with_context(|| format!("opening {}", population.display()))?;
    let sub = File::open(substance).with_context(|| format!("opening {}", substance.display()))?;
    let outcome = import_pair(
        BufReader::new(pop),
        BufReader::new(sub),
        &display_name(population),
        &display_name(substance),
        |_| {},
    );
    for status in &outcome.report.statuses {
        println!(
            "{}: {}",
            status.name,
            if status.ok { "ok" } else { "invalid" }
        );
    }
    for error in &outcome.report.errors {
        println!("{error}");
    }
    match outcome.pair {
        Some(pair) => {
            println!(
                "{} population rows, {} time points, {}x{} grid, substances: {}",
                pair.population.len(),
                pair.times.len(),
                pair.dims.0,
                pair.dims.1,
                pair.substances.join(", ")
            );
            Ok(())
        }
        None => Err(ValidationFailed.into()),
    }
}

fn render(
    path: &Path,
    substance: &str,
    time: u32,
    scheme_index: usize,
    out: &Path,
) -> anyhow::Result<()> {
    let colors = scheme(scheme_index)?;
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    let mut range: Option<(f64, f64)> = None;
    for block in SubstanceReader::new(BufReader::new(file), display_name(path)) {
        let block = block?;
        if block.substance != substance {
            continue;
        }
        for &v in &block.values {
            range = Some(range.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v))));
        }
        if block.time == time {
            rows.push(block);
        }
    }
    let (min, max) =
        range.ok_or_else(|| anyhow!("substance `{substance}` not found in {}", path.display()))?;
    if rows.is_empty() {
        bail!("no `{substance}` data at time {time}");
    }
    let width = rows.iter().map(|b| b.values.len()).max().unwrap_or(0);
    let height = rows.iter().map(|b| b.row as usize).max().unwrap_or(0);
    let mut matrix = Grid::filled(width, height, min);
    for b in &rows {
        for (col, &v) in b.values.iter().enumerate() {
            matrix.set(col, b.row as usize - 1, v);
        }
    }

    let img = RgbImage::from_fn(
        width as u32 * PIXEL_SCALE,
        height as u32 * PIXEL_SCALE,
        |px, py| {
            let c = map_color(
                matrix.get((px / PIXEL_SCALE) as usize, (py / PIXEL_SCALE) as usize),
                min,
                max,
                &colors,
            );
            Pixel(c.channels())
        },
    );
    img.save(out)
        .with_context(|| format!("writing {}", out.display()))?;
    println!(
        "{width}x{height} matrix, range [{min}, {max}], wrote {}",
        out.display()
    );
    Ok(())
}

fn bench(
    sizes: Vec<SizeSpec>,
    frames: usize,
    seed: u64,
    json: Option<&Path>,
) -> anyhow::Result<()> {
    let sizes = if sizes.is_empty() {
        TABLE_SIZES.to_vec()
    } else {
        sizes
    };
    let options = BenchOptions {
        seed,
        measured_frames: frames,
    };
    let records = bench_import_and_frames(&sizes, &options)?;
    print!("{}", render_table(&records));
    let text = serde_json::to_string_pretty(&records)?;
    match json {
        Some(path) => fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

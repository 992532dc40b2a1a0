use clap::{Args, Parser, Subcommand};
use mimosim::channel::{ChannelSpec, Correlation};
use mimosim::detect::DetectorKind;
use mimosim::fading::{
    validate_process, FadingModel, FadingProcess, FadingSpec, DEFAULT_SINUSOIDS,
};
use mimosim::sim::{
    emit_csv, fading_stats_csv, gnuplot_script, parse_sweep, run_experiment_with_workers,
    Experiment, SimConfig, DEFAULT_CODE, DEFAULT_FRAME_BITS, DEFAULT_K_FACTOR, DEFAULT_MAX_FRAMES,
    DEFAULT_SAMPLE_RATE_HZ, DEFAULT_SAMPLE_RATE_SWEEP, DEFAULT_TARGET_FRAME_ERRORS,
};
use mimosim::stbc::CodeId;
use mimosim::{Error, RngStream};
use std::path::PathBuf;
use std::process::ExitCode;

/// Link-level MIMO simulator.
///
/// SNR is total transmit energy per channel use over the noise power at
/// each receive antenna. Sweeps take `start:step:stop` (inclusive) or a
/// comma-separated list. The Rician K default of 4 is a free choice.
#[derive(Parser, Debug)]
#[command(name = "mimosim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// OSTBC frame error rate against average path gain.
    FerVsGain {
        #[command(flatten)]
        fer: FerArgs,
        /// Path gain sweep in dB.
        #[arg(long, default_value = "-20:2:0", allow_hyphen_values = true)]
        gain_db: String,
        /// Maximum Doppler in Hz.
        #[arg(long, default_value_t = 100.0)]
        doppler_hz: f64,
    },
    /// OSTBC frame error rate against maximum Doppler.
    FerVsDoppler {
        #[command(flatten)]
        fer: FerArgs,
        /// Maximum Doppler sweep in Hz.
        #[arg(long, default_value = "25,50,100")]
        doppler_hz: String,
        /// Fixed path gain in dB.
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        gain_db: f64,
    },
    /// OSTBC frame error rate against sample rate.
    FerVsSamplerate {
        #[command(flatten)]
        fer: FerArgs,
        /// Sample rate sweep in Hz; defaults to 1e5 through 1e7.
        #[arg(long)]
        rates: Option<String>,
        /// Maximum Doppler in Hz.
        #[arg(long, default_value_t = 100.0)]
        doppler_hz: f64,
        /// Fixed path gain in dB.
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        gain_db: f64,
    },
    /// Uncoded spatial multiplexing bit error rate against SNR.
    BerVsSnr {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "ml")]
        detector: DetectorKind,
        /// SNR sweep in dB.
        #[arg(long, default_value = "0:4:20", allow_hyphen_values = true)]
        snr_db: String,
    },
    /// Envelope statistics of a single fading process.
    ValidateFading {
        #[command(flatten)]
        fading: FadingArgs,
        #[arg(long, default_value_t = 100.0)]
        doppler_hz: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct FadingArgs {
    #[arg(long, default_value = "rayleigh", value_parser = parse_model)]
    fading: FadingModel,
    /// Rician K-factor (linear).
    #[arg(long, default_value_t = DEFAULT_K_FACTOR)]
    k: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    los_doppler_hz: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    los_phase_rad: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE_HZ)]
    sample_rate_hz: f64,
    /// Sinusoids per quadrature branch.
    #[arg(long, default_value_t = DEFAULT_SINUSOIDS)]
    sinusoids: usize,
}

impl FadingArgs {
    fn spec(&self, doppler_hz: f64) -> FadingSpec {
        let mut spec = match self.fading {
            FadingModel::Rayleigh => FadingSpec::rayleigh(doppler_hz, self.sample_rate_hz),
            FadingModel::Rician => {
                FadingSpec::rician(self.k, doppler_hz, self.los_doppler_hz, self.sample_rate_hz)
            }
        };
        spec.los_phase_rad = self.los_phase_rad;
        spec.num_sinusoids = self.sinusoids;
        spec
    }
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[command(flatten)]
    fading: FadingArgs,
    #[arg(long, default_value_t = 4)]
    nt: usize,
    #[arg(long, default_value_t = 4)]
    nr: usize,
    /// none, low, medium, high, or an explicit rho in [0, 1).
    #[arg(long, default_value = "none")]
    correlation: Correlation,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_FRAME_BITS)]
    frame_bits: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_FRAMES)]
    max_frames: u64,
    #[arg(long, default_value_t = DEFAULT_TARGET_FRAME_ERRORS)]
    target_errors: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; the output does not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script for the CSV.
    #[arg(long, requires = "out")]
    plot_script: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FerArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    snr_db: f64,
    #[arg(long, default_value_t = DEFAULT_CODE)]
    code: CodeId,
}

fn parse_model(s: &str) -> Result<FadingModel, String> {
    match s.to_ascii_lowercase().as_str() {
        "rayleigh" => Ok(FadingModel::Rayleigh),
        "rician" | "rice" => Ok(FadingModel::Rician),
        _ => Err(format!("unknown fading model '{s}' (rayleigh or rician)")),
    }
}

/// Failure classes mapped to exit codes 1 and 2.
enum Failure {
    Config(String),
    Runtime(String),
}

fn config_err(e: Error) -> Failure {
    Failure::Config(e.to_string())
}

fn sim_config(
    experiment: Experiment,
    common: &CommonArgs,
    run: &RunArgs,
    doppler_hz: f64,
    sweep: Vec<f64>,
) -> SimConfig {
    let channel = ChannelSpec::new(common.nt, common.nr, common.fading.spec(doppler_hz))
        .with_correlation(common.correlation);
    SimConfig {
        experiment,
        channel,
        code: None,
        detector: None,
        frame_bits: run.frame_bits,
        snr_db: f64::NAN,
        sweep,
        max_frames: run.max_frames,
        target_frame_errors: run.target_errors,
        master_seed: run.seed,
    }
}

fn fer_config(
    experiment: Experiment,
    fer: &FerArgs,
    doppler_hz: f64,
    gain_db: f64,
    sweep: Vec<f64>,
) -> SimConfig {
    let mut config = sim_config(experiment, &fer.common, &fer.run, doppler_hz, sweep);
    config.channel.path_gain_db = gain_db;
    config.code = Some(fer.code);
    config.snr_db = fer.snr_db;
    config
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_sim(config: SimConfig, run: &RunArgs) -> Result<(), Failure> {
    config.validate().map_err(config_err)?;
    let workers = run.workers.unwrap_or_else(rayon::current_num_threads);
    if workers == 0 {
        return Err(Failure::Config("--workers must be >= 1".into()));
    }
    let result = run_experiment_with_workers(&config, workers)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    write_output(run.out.as_ref(), &emit_csv(&result, &config))?;
    if let (Some(script), Some(csv)) = (&run.plot_script, &run.out) {
        write_output(
            Some(script),
            &gnuplot_script(&csv.display().to_string(), &config),
        )?;
    }
    Ok(())
}

fn sweep(s: &str) -> Result<Vec<f64>, Failure> {
    parse_sweep(s).map_err(config_err)
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::FerVsGain {
            fer,
            gain_db,
            doppler_hz,
        } => {
            let config = fer_config(
                Experiment::FerVsGain,
                &fer,
                doppler_hz,
                0.0,
                sweep(&gain_db)?,
            );
            run_sim(config, &fer.run)
        }
        Command::FerVsDoppler {
            fer,
            doppler_hz,
            gain_db,
        } => {
            let sweep = sweep(&doppler_hz)?;
            let config = fer_config(Experiment::FerVsDoppler, &fer, sweep[0], gain_db, sweep);
            run_sim(config, &fer.run)
        }
        Command::FerVsSamplerate {
            fer,
            rates,
            doppler_hz,
            gain_db,
        } => {
            let sweep = match rates {
                Some(r) => sweep(&r)?,
                None => DEFAULT_SAMPLE_RATE_SWEEP.to_vec(),
            };
            let mut config = fer_config(
                Experiment::FerVsSampleRate,
                &fer,
                doppler_hz,
                gain_db,
                sweep,
            );
            config.channel.fading.sample_rate_hz = config.sweep[0];
            run_sim(config, &fer.run)
        }
        Command::BerVsSnr {
            common,
            run,
            detector,
            snr_db,
        } => {
            let mut config =
                sim_config(Experiment::BerVsSnr, &common, &run, 100.0, sweep(&snr_db)?);
            config.detector = Some(detector);
            run_sim(config, &run)
        }
        Command::ValidateFading {
            fading,
            doppler_hz,
            samples,
            seed,
            out,
        } => {
            let spec = fading.spec(doppler_hz);
            spec.validate().map_err(config_err)?;
            if samples < 100_000 {
                return Err(Failure::Config(format!(
                    "--samples must be >= 100000, got {samples}"
                )));
            }
            let mut rng = RngStream::new(seed, mimosim::numerics::StreamId(0));
            let mut process = FadingProcess::new(spec.clone(), &mut rng).map_err(config_err)?;
            let stats = validate_process(&mut process, samples)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            write_output(
                out.as_ref(),
                &fading_stats_csv(&stats, &spec, samples, seed),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("invalid configuration: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

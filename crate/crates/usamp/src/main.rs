use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use usamp::harness::{
    self, export, ExportFormat, NoiseTheoremOptions, NoiselessOptions, QuantizationOptions,
    SweepOptions,
};
use usamp::signals::DEFAULT_NUM_BINS;

/// Simulate a self-reset (modulo) ADC and recover bandlimited signals from
/// folded samples.
///
/// Every subcommand runs a reproducible experiment and writes its records
/// as CSV or JSON to --out (stdout when omitted). Exit codes: 0 on a
/// completed run, 1 on configuration errors, 2 on I/O errors.
#[derive(Parser)]
#[command(name = "usamp", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo recovery of randomly drawn signals from clean modulo
    /// samples; one CSV row per trial.
    ///
    /// Defaults reproduce the headline experiment: 1000 trials, T = 11/200,
    /// lambda drawn per trial from U[0.01, 0.1], unit sup-norm signals.
    /// Honors --trials, --seed, --lambda, --beta-g, --step, --order.
    Noiseless(CommonArgs),
    /// Success-rate grid over sampling steps T = 0.01..1.00 and forced
    /// difference orders N = 1..5, in long CSV format.
    ///
    /// Honors --trials (per cell), --seed, --lambda, --beta-g.
    Sweep(CommonArgs),
    /// Recover from B-bit quantized modulo samples and compare against
    /// direct quantization of saturated samples.
    ///
    /// Honors --seed, --bits, --lambda, --beta-g, --step, --order, --trials
    /// (sample count override is fixed; see --help for defaults).
    Quantize(CommonArgs),
    /// Check the bounded-noise guarantee: recovered samples must equal
    /// truth plus the injected noise plus one constant.
    ///
    /// Honors --alpha, --trials, --seed, --lambda, --beta-g.
    NoiseTheorem(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Number of trials (per grid cell for `sweep`)
    #[arg(long)]
    trials: Option<usize>,

    /// Base seed; trial i derives its generator from seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// ADC folding threshold lambda (volts)
    #[arg(long)]
    lambda: Option<f64>,

    /// Known amplitude bound beta_g, a multiple of 2*lambda
    #[arg(long = "beta-g")]
    beta_g: Option<f64>,

    /// Sampling step T (seconds)
    #[arg(long)]
    step: Option<f64>,

    /// Difference order N (overrides the order-selection rule)
    #[arg(long)]
    order: Option<usize>,

    /// Quantizer bit depth B
    #[arg(long)]
    bits: Option<u32>,

    /// Noise exponent alpha (sets T = 1/(2^alpha * omega * e))
    #[arg(long)]
    alpha: Option<u32>,

    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

fn run(cli: Cli) -> usamp::Result<()> {
    match cli.command {
        Command::Noiseless(args) => {
            let opts = NoiselessOptions {
                trials: args.trials.unwrap_or(1000),
                seed: args.seed,
                step: args.step.unwrap_or(harness::DEFAULT_STEP),
                lambda: args.lambda,
                beta_g: args.beta_g,
                order: args.order,
                num_bins: DEFAULT_NUM_BINS,
            };
            let report = harness::run_noiseless(&opts)?;
            let succeeded = report.trials.iter().filter(|t| t.success).count();
            export(&report, args.format.into(), args.out.as_deref())?;
            eprintln!(
                "noiseless: {}/{} trials at machine precision",
                succeeded,
                report.trials.len()
            );
            Ok(())
        }
        Command::Sweep(args) => {
            let opts = SweepOptions {
                trials_per_cell: args.trials.unwrap_or(50),
                seed: args.seed,
                lambda: args.lambda.unwrap_or(0.2),
                beta_g: args.beta_g,
                num_bins: DEFAULT_NUM_BINS,
            };
            let report = harness::run_sharpness_sweep(&opts)?;
            export(&report, args.format.into(), args.out.as_deref())?;
            eprintln!(
                "sweep: {} cells, {} trials each",
                report.grid.t_values.len() * report.grid.n_values.len(),
                report.grid.trials_per_cell
            );
            Ok(())
        }
        Command::Quantize(args) => {
            let defaults = QuantizationOptions::default();
            let opts = QuantizationOptions {
                seed: args.seed,
                bits: args.bits.unwrap_or(defaults.bits),
                lambda: args.lambda.unwrap_or(defaults.lambda),
                beta_g: args.beta_g.unwrap_or(defaults.beta_g),
                step: args.step.unwrap_or(defaults.step),
                order: args.order.unwrap_or(defaults.order),
                sup_norm: defaults.sup_norm,
                num_samples: defaults.num_samples,
                num_bins: DEFAULT_NUM_BINS,
            };
            let report = harness::run_quantization(&opts)?;
            export(&report, args.format.into(), args.out.as_deref())?;
            eprintln!(
                "quantize: recovered mse {:.3e}, modulo-noise mse {:.3e}, direct mse {:.3e}",
                report.mse_recovered, report.mse_modulo_noise, report.mse_direct_quantized
            );
            Ok(())
        }
        Command::NoiseTheorem(args) => {
            let defaults = NoiseTheoremOptions::default();
            let opts = NoiseTheoremOptions {
                alpha: args.alpha.unwrap_or(defaults.alpha),
                trials: args.trials.unwrap_or(defaults.trials),
                seed: args.seed,
                lambda: args.lambda.unwrap_or(defaults.lambda),
                beta_g: args.beta_g,
                noise_scale: defaults.noise_scale,
                num_bins: DEFAULT_NUM_BINS,
                tolerance: defaults.tolerance,
            };
            let report = harness::run_noise_theorem(&opts)?;
            let violations = report.total_violations();
            export(&report, args.format.into(), args.out.as_deref())?;
            eprintln!(
                "noise-theorem: alpha {}, {} trials, {} violations",
                report.config.alpha,
                report.trials.len(),
                violations
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are completed runs, not errors;
            // anything else is a configuration problem.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

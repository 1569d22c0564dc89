//! Command-line front end: encode, decode, analyze, abtest.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use celpsy::bitstream::{decode_container, encode_container, StreamHeader};
use celpsy::celp::{decode_stream, encode_signal, EncoderConfig, Mode};
use celpsy::harness::{abtest, analyze_frame, complexity_table, wav_read, wav_write, ConfigFile, WavAudio, WeightingKind};
use celpsy::weighting::ComplexityMode;
use celpsy::Error;

#[derive(Parser)]
#[command(name = "celpsy", version, about = "CELP speech codec with psychoacoustic noise weighting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CodecFlags {
    /// Bit-rate tier: low, mid or high.
    #[arg(long)]
    mode: Option<Mode>,
    /// Weighting backend: gamma or psy.
    #[arg(long)]
    weighting: Option<WeightingKind>,
    /// Complexity reduction: full, c1, c2 or c3.
    #[arg(long, value_parser = celpsy::harness::config::parse_complexity)]
    complexity: Option<ComplexityMode>,
    /// Settings file of `key = value` lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a PCM16 mono 8 kHz WAV file into a .cpsy stream.
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        flags: CodecFlags,
    },
    /// Decode a .cpsy stream into a WAV file (delayed by 40 samples).
    Decode { input: PathBuf, output: PathBuf },
    /// Write the spectral curves of one frame as CSV.
    Analyze {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        frame: usize,
        /// Output path; standard output when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        flags: CodecFlags,
    },
    /// Compare two settings files over every WAV file in a directory.
    Abtest {
        dir: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Also print the complexity table at side A's mode.
        #[arg(long)]
        table: bool,
    },
}

fn resolve(flags: &CodecFlags) -> celpsy::Result<EncoderConfig> {
    let mut cfg = EncoderConfig::default();
    if let Some(path) = &flags.config {
        cfg = ConfigFile::load(path)?.apply(&cfg)?;
    }
    let overrides = ConfigFile {
        mode: flags.mode,
        weighting: flags.weighting,
        complexity: flags.complexity,
        ..ConfigFile::default()
    };
    overrides.apply(&cfg)
}

fn load_config(path: &Path) -> celpsy::Result<EncoderConfig> {
    ConfigFile::load(path)?.apply(&EncoderConfig::default())
}

fn run(cli: Cli) -> celpsy::Result<()> {
    match cli.command {
        Command::Encode { input, output, flags } => {
            let cfg = resolve(&flags)?;
            let x = wav_read(&input)?.to_f64();
            let frames = encode_signal(&x, &cfg)?;
            let count = u32::try_from(frames.len()).map_err(|_| Error::InvalidArgument("input too long".into()))?;
            let header = StreamHeader::new(cfg.mode, cfg.weighting.is_psy(), cfg.complexity, count);
            std::fs::write(&output, encode_container(&header, &frames)?)?;
        }
        Command::Decode { input, output } => {
            let stream = decode_container(&std::fs::read(&input)?)?;
            let y = decode_stream(&stream.frames, stream.header.mode)?;
            wav_write(&output, &WavAudio::from_f64(&y))?;
        }
        Command::Analyze { input, frame, csv, flags } => {
            let cfg = resolve(&flags)?;
            let x = wav_read(&input)?.to_f64();
            let curves = analyze_frame(&x, frame, &cfg)?;
            match csv {
                Some(path) => std::fs::write(path, curves.to_csv())?,
                None => print!("{}", curves.to_csv()),
            }
        }
        Command::Abtest { dir, a, b, table } => {
            let (cfg_a, cfg_b) = (load_config(&a)?, load_config(&b)?);
            let report = abtest(&dir, &cfg_a, &cfg_b)?;
            println!("{report}");
            if table {
                let items = celpsy::harness::abtest::load_corpus(&dir)?;
                println!("\n{}", complexity_table(&items, cfg_a.mode)?);
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Config(_) => 2,
        Error::UnsupportedFormat(_) | Error::Truncated(_) | Error::Io(_) => 3,
        Error::Degenerate(_) | Error::LspConversion { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("celpsy: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

//! `gen-data`: write a synthetic dataset as CSV.

use std::path::PathBuf;

use clap::{Args, Subcommand};

use stackstab::synth::{gen_synthetic, SyntheticSpec};
use stackstab::Seed;

use crate::CliError;

#[derive(Debug, Args)]
pub struct GenDataArgs {
    #[command(subcommand)]
    pub shape: GenDataShape,
}

#[derive(Debug, Subcommand)]
pub enum GenDataShape {
    /// Two Gaussian blobs with balanced +-1 labels (binary task).
    Blobs {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 3.0)]
        sep: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short = 'o')]
        out: PathBuf,
    },
    /// Linear-with-noise labels (regression task).
    Linear {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.5)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short = 'o')]
        out: PathBuf,
    },
}

pub fn run(args: GenDataArgs) -> Result<(), CliError> {
    let (spec, seed, out) = match args.shape {
        GenDataShape::Blobs {
            m,
            d,
            sep,
            seed,
            out,
        } => (
            SyntheticSpec::Blobs {
                m,
                d,
                separation: sep,
            },
            seed,
            out,
        ),
        GenDataShape::Linear {
            m,
            d,
            noise,
            seed,
            out,
        } => (
            SyntheticSpec::Linear {
                m,
                d,
                noise_std: noise,
            },
            seed,
            out,
        ),
    };
    // Parameter problems are usage errors; the draw itself cannot fail once
    // the spec validates.
    let data = gen_synthetic(&spec, Seed(seed).derive("data", 0)).map_err(CliError::config_from)?;
    stackstab::csv_io::save_csv(&data, &out).map_err(CliError::runtime)?;
    println!("{}", out.display());
    eprintln!(
        "wrote {} rows ({} features) to {}",
        data.len(),
        data.dim(),
        out.display()
    );
    Ok(())
}

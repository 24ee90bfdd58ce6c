//! Flag parsing, presets and plan resolution.
//!
//! Presets are data: each one is a bundle of default flag values, and any
//! explicit flag overrides its preset value. Exactly one of the sweepable
//! flags (`--snr-db`, `--phi`, `--tau`, `--ks`) may carry multiple values;
//! that flag becomes the sweep axis.

use antsel_core::{SchemeRegistry, SimPoint, SweepAxis, MRC, OMP_SELECTION};
use clap::{Parser, ValueEnum};
use std::path::PathBuf;

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "ANTSEL_WORKERS";

const PRESET_HELP: &str = "\
Presets (explicit flags override any preset value):
  fig1  --m 64  --ks 50      --phi 0.6       --tau 0.6  --snr-db 0:2:10  --schemes omp,mrc
  fig2  --m 64  --ks 32      --phi 0,0.2,0.4,0.6,0.8  --tau 0.8  --snr-db 2  --schemes omp,mrc
  fig3  --m 16  --ks 8       --phi 0,0.2,0.4,0.6,0.8  --tau 0.8  --snr-db 2  --schemes omp,mrc
  fig4  --m 64  --ks 4:4:64  --phi 0.8       --tau 0.8  --snr-db 2       --schemes omp,mrc
All presets keep --trials 10000 --symbols-per-channel 100 --seed 42.

Sweep syntax: a single value (`2`), a comma list (`0,0.2,0.4`) or an
inclusive range `start:step:stop` (`0:2:10`). At most one of --snr-db,
--phi, --tau, --ks may be multi-valued.";

/// Monte Carlo BER simulator for sparse receive-antenna selection.
#[derive(Parser, Debug, Clone)]
#[command(
    name = "antsel",
    version,
    about = "Simulates BER of OMP-based sparse antenna selection combining and an MRC baseline \
             over spatially correlated Rayleigh channels with imperfect channel estimation",
    after_help = PRESET_HELP
)]
pub struct CliArgs {
    /// Experiment preset providing defaults (see the preset table below).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// Receive antenna count M [default: 64]
    #[arg(long)]
    pub m: Option<usize>,

    /// Selected antennas K_s; sweepable [default: 32]
    #[arg(long)]
    pub ks: Option<String>,

    /// Correlation coefficient phi in [0,1); sweepable [default: 0]
    #[arg(long)]
    pub phi: Option<String>,

    /// Estimation variance tau in [0,1]; sweepable [default: 0]
    #[arg(long)]
    pub tau: Option<String>,

    /// SNR per bit in dB; sweepable, may be negative [default: 0:2:10]
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    pub snr_db: Option<String>,

    /// Comma-separated schemes: omp (alias omp-selection) and/or mrc [default: omp,mrc]
    #[arg(long)]
    pub schemes: Option<String>,

    /// Channel realizations per sweep point [default: 10000]
    #[arg(long)]
    pub trials: Option<u64>,

    /// Symbols per channel realization (1 = fresh selection every symbol) [default: 100]
    #[arg(long = "symbols-per-channel")]
    pub symbols_per_channel: Option<u64>,

    /// Master seed for the per-trial substreams [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output CSV path [default: ber.csv]
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads; 0 means one per core [default: $ANTSEL_WORKERS or 0]
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

/// Default parameter bundle: global defaults or a preset.
#[derive(Debug, Clone)]
struct Defaults {
    m: usize,
    ks: &'static str,
    phi: &'static str,
    tau: &'static str,
    snr_db: &'static str,
}

impl Defaults {
    fn global() -> Self {
        Defaults {
            m: 64,
            ks: "32",
            phi: "0",
            tau: "0",
            snr_db: "0:2:10",
        }
    }

    fn preset(p: Preset) -> Self {
        match p {
            Preset::Fig1 => Defaults {
                m: 64,
                ks: "50",
                phi: "0.6",
                tau: "0.6",
                snr_db: "0:2:10",
            },
            Preset::Fig2 => Defaults {
                m: 64,
                ks: "32",
                phi: "0,0.2,0.4,0.6,0.8",
                tau: "0.8",
                snr_db: "2",
            },
            Preset::Fig3 => Defaults {
                m: 16,
                ks: "8",
                phi: "0,0.2,0.4,0.6,0.8",
                tau: "0.8",
                snr_db: "2",
            },
            Preset::Fig4 => Defaults {
                m: 64,
                ks: "4:4:64",
                phi: "0.8",
                tau: "0.8",
                snr_db: "2",
            },
        }
    }
}

/// Fully resolved run: per-scheme sweeps share point indices so paired
/// curves see common random numbers.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub base: SimPoint,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub schemes: Vec<&'static str>,
    pub out: PathBuf,
    pub workers: usize,
}

impl RunPlan {
    /// Base point for one scheme of the plan.
    pub fn base_for(&self, scheme: &str) -> SimPoint {
        let mut p = self.base.clone();
        p.scheme = scheme.to_string();
        p
    }

    /// Builds and validates every point of the plan without running it.
    pub fn validate(&self, registry: &SchemeRegistry) -> Result<(), String> {
        for &scheme in &self.schemes {
            registry.get(scheme).map_err(|e| e.to_string())?;
            let base = self.base_for(scheme);
            for &v in &self.values {
                let mut p = base.clone();
                match self.axis {
                    SweepAxis::SnrDb => p.snr_db = v,
                    SweepAxis::Phi => p.phi = v,
                    SweepAxis::Tau => p.tau = v,
                    SweepAxis::KS => {
                        if v.fract() != 0.0 || v < 1.0 {
                            return Err(format!("--ks value {v} is not a positive integer"));
                        }
                        p.k_s = v as usize;
                    }
                }
                p.validate().map_err(|e| e.to_string())?;
            }
        }
        if self.values.is_empty() {
            return Err("sweep value list is empty".into());
        }
        Ok(())
    }
}

/// Parses a sweep spec: single value, comma list, or `start:step:stop`.
pub fn parse_values(flag: &str, spec: &str) -> Result<Vec<f64>, String> {
    let bad = |what: &str| format!("{flag}: {what} in `{spec}`");
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range must be start:step:stop"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("non-numeric range bound")))
            .collect::<Result<_, _>>()?;
        let (start, step, stop) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || !step.is_finite() {
            return Err(bad("range step must be positive"));
        }
        if stop < start {
            return Err(bad("range stop must be >= start"));
        }
        let mut out = Vec::new();
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        for i in 0..=count {
            out.push(start + step * i as f64);
        }
        Ok(out)
    } else {
        spec.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| bad("non-numeric value"))
            })
            .collect()
    }
}

fn parse_schemes(spec: &str) -> Result<Vec<&'static str>, String> {
    let mut out = Vec::new();
    for tok in spec.split(',') {
        let name = match tok.trim() {
            "omp" | "omp-selection" => OMP_SELECTION,
            "mrc" => MRC,
            other => return Err(format!("--schemes: unknown scheme `{other}`")),
        };
        if !out.contains(&name) {
            out.push(name);
        }
    }
    if out.is_empty() {
        return Err("--schemes: at least one scheme required".into());
    }
    Ok(out)
}

/// Resolves flags against preset/global defaults into a run plan.
pub fn resolve(args: &CliArgs) -> Result<RunPlan, String> {
    let defaults = args.preset.map_or_else(Defaults::global, Defaults::preset);

    let m = args.m.unwrap_or(defaults.m);
    let ks_spec = args.ks.clone().unwrap_or_else(|| defaults.ks.to_string());
    let phi_spec = args.phi.clone().unwrap_or_else(|| defaults.phi.to_string());
    let tau_spec = args.tau.clone().unwrap_or_else(|| defaults.tau.to_string());
    let snr_spec = args
        .snr_db
        .clone()
        .unwrap_or_else(|| defaults.snr_db.to_string());

    let ks_values = parse_values("--ks", &ks_spec)?;
    let phi_values = parse_values("--phi", &phi_spec)?;
    let tau_values = parse_values("--tau", &tau_spec)?;
    let snr_values = parse_values("--snr-db", &snr_spec)?;

    let mut multi: Vec<(SweepAxis, &Vec<f64>)> = Vec::new();
    for (axis, vals) in [
        (SweepAxis::SnrDb, &snr_values),
        (SweepAxis::Phi, &phi_values),
        (SweepAxis::Tau, &tau_values),
        (SweepAxis::KS, &ks_values),
    ] {
        if vals.len() > 1 {
            multi.push((axis, vals));
        }
    }
    if multi.len() > 1 {
        let names: Vec<&str> = multi.iter().map(|(a, _)| a.name()).collect();
        return Err(format!(
            "only one flag may sweep multiple values, got {}",
            names.join(" and ")
        ));
    }
    let (axis, values) = multi
        .pop()
        .map(|(a, v)| (a, v.clone()))
        .unwrap_or((SweepAxis::SnrDb, snr_values.clone()));

    let scalar = |flag: &str, vals: &[f64]| -> Result<f64, String> {
        vals.first()
            .copied()
            .ok_or_else(|| format!("{flag}: empty value list"))
    };
    let k_s_scalar = scalar("--ks", &ks_values)?;
    if axis != SweepAxis::KS && (k_s_scalar.fract() != 0.0 || k_s_scalar < 1.0) {
        return Err(format!("--ks value {k_s_scalar} is not a positive integer"));
    }

    let schemes = parse_schemes(&args.schemes.clone().unwrap_or_else(|| "omp,mrc".into()))?;

    let workers = match args.workers {
        Some(w) => w,
        None => std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .unwrap_or(0),
    };

    let base = SimPoint {
        m,
        k_s: if axis == SweepAxis::KS {
            // Placeholder; every sweep value replaces it after validation.
            1.max(values.first().copied().unwrap_or(1.0) as usize)
        } else {
            k_s_scalar as usize
        },
        phi: scalar("--phi", &phi_values)?,
        tau: scalar("--tau", &tau_values)?,
        snr_db: scalar("--snr-db", &snr_values)?,
        scheme: schemes[0].to_string(),
        trials: args.trials.unwrap_or(10_000),
        symbols_per_channel: args.symbols_per_channel.unwrap_or(100),
        seed: args.seed.unwrap_or(42),
    };

    let plan = RunPlan {
        base,
        axis,
        values,
        schemes,
        out: args.out.clone().unwrap_or_else(|| PathBuf::from("ber.csv")),
        workers,
    };
    plan.validate(&SchemeRegistry::with_builtins())?;
    Ok(plan)
}

//! Library surface of the `antsel` binary: flag resolution and CSV output,
//! exposed so integration tests can exercise them directly.

pub mod config;
pub mod output;

use antsel_core::{run_sweep, BerRecord, SchemeRegistry};
use config::RunPlan;

/// Runs every scheme of the plan over the sweep, in plan order.
///
/// Per-scheme sweeps reuse the same point indices, so paired schemes see
/// identical channels, bits and noise.
pub fn execute(plan: &RunPlan, registry: &SchemeRegistry) -> antsel_core::Result<Vec<BerRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| antsel_core::Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| {
        let mut records = Vec::with_capacity(plan.schemes.len() * plan.values.len());
        for &scheme in &plan.schemes {
            let base = plan.base_for(scheme);
            records.extend(run_sweep(registry, &base, plan.axis, &plan.values)?);
        }
        Ok(records)
    })
}

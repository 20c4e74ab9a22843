//! Code-capacity Monte Carlo: noise sampling, trial loops, confidence
//! intervals, analytic bounds and scaling fits.

mod bounds;
mod decoders;
mod scaling;

pub use bounds::{hoeffding_bound, mwpm_path_bound, mwpm_path_exponent};
pub use decoders::{
    Decoded, Diagnosis, GenUfTrial, PeelTrial, RepMwpmTrial, SubdividedTrial, TrialDecoder, TrivialTrial, UfTrial,
};
pub use scaling::{bench_scaling, decode_quadratic_control, fit_slope, ScalingFamily, ScalingReport, ScalingRow};

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, LocqError, Result};
use crate::hypergraph::{Erasure, PauliXError};
use crate::par::map_indexed;
use crate::subdivided::FailureCause;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

/// CSV header for sweep output.
pub const SWEEP_HEADER: &str = "code_id,decoder,L,p,p_erase,trials,failures,rate,ci_lo,ci_hi,seed";

const CHUNK: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub p_erase: f64,
    pub seed: u64,
}

fn bernoulli(word: u64, p: f64) -> bool {
    ((word >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
}

impl NoiseModel {
    pub fn new(p: f64, p_erase: f64, seed: u64) -> Result<Self> {
        for (name, v) in [("p", p), ("p_erase", p_erase)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(NoiseModel { p, p_erase, seed })
    }

    /// Error and erasure for one trial. Each trial owns an independent
    /// stream of the counter-based generator, and qubit `q` reads words
    /// `2q` and `2q + 1` of it. Erased qubits flip with probability 1/2.
    pub fn sample(&self, num_qubits: usize, trial: u64) -> (PauliXError, Erasure) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        let mut flips = Vec::new();
        let mut erased = Vec::new();
        for q in 0..num_qubits {
            let we = rng.next_u64();
            let wf = rng.next_u64();
            if bernoulli(we, self.p_erase) {
                erased.push(q);
                if wf >> 63 == 1 {
                    flips.push(q);
                }
            } else if bernoulli(wf, self.p) {
                flips.push(q);
            }
        }
        (PauliXError::from_union(flips), Erasure::from_union(erased))
    }
}

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if failures == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if failures == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FailureDiagnostics {
    pub causes: BTreeMap<String, u64>,
    /// Failures whose residual contains a `U`-to-`U` path in some `T` region.
    pub u_path: u64,
    /// Failures that were diagnosed at all.
    pub diagnosed: u64,
}

impl FailureDiagnostics {
    fn record(&mut self, d: Diagnosis) {
        let key = match d.cause {
            FailureCause::PatchCrossing => "patch_crossing",
            FailureCause::Matching => "matching",
            FailureCause::Outer => "outer",
        };
        *self.causes.entry(key.to_string()).or_default() += 1;
        self.diagnosed += 1;
        self.u_path += d.u_path as u64;
    }

    fn merge(&mut self, other: FailureDiagnostics) {
        for (k, v) in other.causes {
            *self.causes.entry(k).or_default() += v;
        }
        self.u_path += other.u_path;
        self.diagnosed += other.diagnosed;
    }

    /// Fraction of diagnosed failures that contain a `U`-to-`U` path.
    pub fn u_path_agreement(&self) -> Option<f64> {
        (self.diagnosed > 0).then(|| self.u_path as f64 / self.diagnosed as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TrialSummary {
    pub trials: u64,
    pub failures: u64,
    /// Trials the decoder declined (peeling outside its erasure, for example).
    pub declined: u64,
    pub ops: u64,
    pub diagnostics: FailureDiagnostics,
}

impl TrialSummary {
    fn merge(&mut self, other: TrialSummary) {
        self.trials += other.trials;
        self.failures += other.failures;
        self.declined += other.declined;
        self.ops += other.ops;
        self.diagnostics.merge(other.diagnostics);
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.failures, self.trials, Z_95)
    }
}

fn run_one(decoder: &dyn TrialDecoder, noise: &NoiseModel, trial: u64, out: &mut TrialSummary) -> Result<()> {
    let graph = decoder.graph();
    let (error, erasure) = noise.sample(graph.num_edges(), trial);
    let syndrome = graph.syndrome_of(&error);
    out.trials += 1;
    let decoded = match decoder.decode(&erasure, &syndrome) {
        Ok(d) => d,
        Err(LocqError::Unsatisfiable(_)) if decoder.may_decline() => {
            out.declined += 1;
            out.failures += 1;
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    out.ops += decoded.ops;
    if graph.syndrome_of(&decoded.correction) != syndrome {
        return Err(LocqError::Internal(format!("{} broke the syndrome on trial {trial}", decoder.id())));
    }
    let residual = decoded.correction.sym_diff(&error);
    if decoder.is_failure(&residual)? {
        out.failures += 1;
        if let Some(d) = decoder.diagnose(&residual, &decoded) {
            out.diagnostics.record(d);
        }
    }
    Ok(())
}

/// Runs `trials` independent trials, reduced in trial order. The result
/// does not depend on `parallel` or on the worker count.
pub fn run_trials(decoder: &dyn TrialDecoder, noise: &NoiseModel, trials: u64, parallel: bool) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let chunks = trials.div_ceil(CHUNK) as usize;
    let parts = map_indexed(chunks, parallel, |c| {
        let mut s = TrialSummary::default();
        let lo = c as u64 * CHUNK;
        for t in lo..(lo + CHUNK).min(trials) {
            run_one(decoder, noise, t, &mut s)?;
        }
        Ok::<_, LocqError>(s)
    });
    let mut total = TrialSummary::default();
    for p in parts {
        total.merge(p?);
    }
    Ok(total)
}

/// One line of sweep output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub code_id: String,
    pub decoder: String,
    #[serde(rename = "L")]
    pub length: usize,
    pub p: f64,
    pub p_erase: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

impl SweepRow {
    pub fn from_summary(code_id: &str, decoder: &str, length: usize, noise: &NoiseModel, s: &TrialSummary) -> Self {
        let (ci_lo, ci_hi) = s.interval();
        SweepRow {
            code_id: code_id.to_string(),
            decoder: decoder.to_string(),
            length,
            p: noise.p,
            p_erase: noise.p_erase,
            trials: s.trials,
            failures: s.failures,
            rate: s.rate(),
            ci_lo,
            ci_hi,
            seed: noise.seed,
        }
    }

    /// A bound evaluation in the sweep schema; `trials` and `failures` are 0
    /// and the interval collapses to the value.
    pub fn bound(code_id: &str, name: &str, length: usize, p: f64, value: f64) -> Self {
        SweepRow {
            code_id: code_id.to_string(),
            decoder: format!("bound:{name}"),
            length,
            p,
            p_erase: 0.0,
            trials: 0,
            failures: 0,
            rate: value,
            ci_lo: value,
            ci_hi: value,
            seed: 0,
        }
    }
}

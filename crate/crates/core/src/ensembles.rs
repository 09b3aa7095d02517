//! Random generation of KSS polynomials and of norm profiles, with
//! deterministic seeded, splittable streams.
//!
//! The monomial sampler draws u = sum_a g_a x^a / sqrt(a!) with i.i.d.
//! standard normal g_a, which makes the Fischer squared norm of each
//! harmonic component a chi-square with dim H_j degrees of freedom.  The
//! profile sampler draws those chi-squares directly; it is a sufficient
//! statistic for every scale-invariant functional studied here.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exact::index_set;
use crate::polyalg::{multi_indices, HomPoly};

/// Sampler mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerMode {
    /// Full polynomial with i.i.d. Gaussian monomial coefficients.
    Monomial,
    /// Only the per-component squared Fischer norms (chi-square draws).
    Profile,
}

/// Description of a sampling run.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleSpec {
    pub m: u32,
    pub n: u32,
    pub mode: SamplerMode,
    pub seed: u64,
    pub streams: u32,
}

impl EnsembleSpec {
    pub fn new(m: u32, n: u32, mode: SamplerMode, seed: u64, streams: u32) -> Result<Self> {
        if m < 2 || n <= m {
            return Err(Error::InvalidParams { m, n });
        }
        if streams < 1 {
            return Err(Error::BadConfig("streams must be >= 1".into()));
        }
        Ok(EnsembleSpec { m, n, mode, seed, streams })
    }
}

/// Squared KSS norms of the harmonic components of one sample.
#[derive(Debug, Clone)]
pub struct NormProfile {
    pub m: u32,
    pub n: u32,
    pub values: BTreeMap<u32, f64>,
}

/// Independent reproducible stream: ChaCha8 keyed by the seed, with the
/// 64-bit stream id selecting the counter block space.  Gaussian variates
/// come from rand_distr's ziggurat StandardNormal.
pub fn rng_stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// One KSS polynomial sample in the double backend.
pub fn sample_kss_monomial(spec: &EnsembleSpec, stream_id: u64) -> HomPoly<f64> {
    let mut rng = rng_stream(spec.seed, stream_id);
    sample_kss_monomial_with(spec.m, spec.n, &mut rng)
}

/// Same as [`sample_kss_monomial`] but drawing from a caller-held rng,
/// for batched sampling.
pub fn sample_kss_monomial_with(m: u32, n: u32, rng: &mut ChaCha8Rng) -> HomPoly<f64> {
    let mut terms = Vec::new();
    for idx in multi_indices(m, n) {
        let g: f64 = StandardNormal.sample(rng);
        let fact = idx.factorial::<f64>();
        terms.push((idx.0.clone(), g / fact.sqrt()));
    }
    HomPoly::from_terms(m, n, terms).expect("generated terms are consistent")
}

/// One norm-profile sample: values[j] ~ chi-square(dim H_j), independent.
pub fn sample_norm_profile(spec: &EnsembleSpec, stream_id: u64) -> NormProfile {
    let mut rng = rng_stream(spec.seed, stream_id);
    sample_norm_profile_with(spec.m, spec.n, &mut rng)
}

pub fn sample_norm_profile_with(m: u32, n: u32, rng: &mut ChaCha8Rng) -> NormProfile {
    ProfileSampler::new(m, n).sample(rng)
}

/// dim H_j in floating point via log-gamma; avoids big-integer
/// factorials in sampling loops (exact for every dof that a chi-square
/// distribution can tell apart).
pub fn dim_h_f64(m: u32, j: u32) -> f64 {
    let (mf, x) = (m as f64, j as f64);
    (statrs::function::gamma::ln_gamma(mf + x - 1.0)
        - statrs::function::gamma::ln_gamma(mf)
        - statrs::function::gamma::ln_gamma(x + 1.0))
    .exp()
        * (mf + 2.0 * x - 1.0)
}

/// Reusable profile sampler: the chi-square distributions for all
/// j in J_n are built once, so the per-sample cost is just the draws.
pub struct ProfileSampler {
    pub m: u32,
    pub n: u32,
    js: Vec<u32>,
    dists: Vec<ChiSquared<f64>>,
}

impl ProfileSampler {
    pub fn new(m: u32, n: u32) -> Self {
        let js = index_set(n);
        let dists = js
            .iter()
            .map(|&j| ChiSquared::new(dim_h_f64(m, j)).expect("dof > 0"))
            .collect();
        ProfileSampler { m, n, js, dists }
    }

    /// The component degrees, in the order `sample_into` fills values.
    pub fn js(&self) -> &[u32] {
        &self.js
    }

    /// Draw one profile into a caller-held buffer (resized to fit).
    pub fn sample_into(&self, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.dists.iter().map(|d| d.sample(rng)));
    }

    /// Draw one profile as a map keyed by j.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> NormProfile {
        let values = self
            .js
            .iter()
            .zip(&self.dists)
            .map(|(&j, d)| (j, d.sample(rng)))
            .collect();
        NormProfile { m: self.m, n: self.n, values }
    }
}

/// Which norm to convert per-component squared norms into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileNorm {
    Kss,
    L2,
    Sobolev(f64),
}

/// Per-component squared norms of a profile under the requested norm.
/// L2 values are tau_j times the KSS values; Sobolev(q) additionally
/// weights by j^{2q} (1 at j = 0).  `tau` maps j to tau_j (any common
/// positive rescaling of tau is admissible for ratio quantities).
pub fn to_norms(
    profile: &NormProfile,
    norm: ProfileNorm,
    tau: &BTreeMap<u32, f64>,
) -> Result<BTreeMap<u32, f64>> {
    let mut out = BTreeMap::new();
    for (&j, &v) in &profile.values {
        let w = match norm {
            ProfileNorm::Kss => 1.0,
            ProfileNorm::L2 => *tau.get(&j).ok_or_else(|| {
                Error::BadConfig(format!("tau table missing j={j}"))
            })?,
            ProfileNorm::Sobolev(q) => {
                let t = *tau.get(&j).ok_or_else(|| {
                    Error::BadConfig(format!("tau table missing j={j}"))
                })?;
                let jw = if j == 0 { 1.0 } else { (j as f64).powf(2.0 * q) };
                t * jw
            }
        };
        out.insert(j, w * v);
    }
    Ok(out)
}

/// tau_j over J_n as f64, rescaled so the largest value is 1.  The raw
/// tau underflows f64 for large n; every functional we compute is a ratio,
/// so a common scale is admissible.
pub fn scaled_tau_table(m: u32, n: u32) -> Result<BTreeMap<u32, f64>> {
    let ctx = crate::spectra::SpectrumContext::new(m, n)?;
    let js = index_set(n);
    let logs: Vec<f64> = js
        .iter()
        .map(|&j| {
            let (mf, nf) = (m as f64, n as f64);
            let x = j as f64;
            ctx.ln_k_n
                - statrs::function::gamma::ln_gamma((nf - x + 2.0) / 2.0)
                - statrs::function::gamma::ln_gamma((mf + nf + x + 1.0) / 2.0)
        })
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(js
        .into_iter()
        .zip(logs)
        .map(|(j, l)| (j, (l - max).exp()))
        .collect())
}

/// Unscaled tau_j table (exp of log tau).  Underflows to zero for large n;
/// fine for small-degree work and for display.
pub fn tau_table(m: u32, n: u32) -> Result<BTreeMap<u32, f64>> {
    let ctx = crate::spectra::SpectrumContext::new(m, n)?;
    index_set(n)
        .into_iter()
        .map(|j| {
            let (mf, nf) = (m as f64, n as f64);
            let x = j as f64;
            let lt = ctx.ln_k_n
                - statrs::function::gamma::ln_gamma((nf - x + 2.0) / 2.0)
                - statrs::function::gamma::ln_gamma((mf + nf + x + 1.0) / 2.0);
            Ok((j, lt.exp()))
        })
        .collect()
}

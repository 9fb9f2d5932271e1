//! Two signals, one sample stream.
//!
//! `f ∈ H(E)` and `g ∈ H(F)` are sent as `m_n = f(λ_n) F(λ_n) + g(λ_n) E*(λ_n)`.
//! Because the two Parseval frames of a [`FrameSystem`] are orthogonal, each
//! signal is recovered from `m` alone.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::FrameSystem;
use crate::kernel::kernel;
use crate::par;

#[derive(Debug, Clone)]
pub struct MultiplexedStream<'a> {
    sys: &'a FrameSystem,
    values: Vec<Complex64>,
}

impl<'a> MultiplexedStream<'a> {
    /// Wraps received values; the length must match the system's window.
    pub fn from_values(sys: &'a FrameSystem, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != sys.len() {
            return Err(Error::LengthMismatch {
                expected: sys.len(),
                found: values.len(),
            });
        }
        Ok(Self { sys, values })
    }

    pub fn system(&self) -> &'a FrameSystem {
        self.sys
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn window(&self) -> (i64, i64) {
        (self.sys.index_lo(), self.sys.index_hi())
    }

    /// Copy with the entries at the given indices `n` zeroed.
    pub fn with_dropped(&self, indices: &[i64]) -> Result<Self> {
        let mut values = self.values.clone();
        for &n in indices {
            let k = n - self.sys.index_lo();
            if k < 0 || k as usize >= values.len() {
                return Err(Error::InvalidArgument(format!("index {n} is outside the stream window")));
            }
            values[k as usize] = Complex64::new(0.0, 0.0);
        }
        Ok(Self { sys: self.sys, values })
    }
}

/// `m_n = f(λ_n)·F(λ_n) + g(λ_n)·E*(λ_n)`.
pub fn encode<'a>(sys: &'a FrameSystem, samples_f: &[Complex64], samples_g: &[Complex64]) -> Result<MultiplexedStream<'a>> {
    for samples in [samples_f, samples_g] {
        if samples.len() != sys.len() {
            return Err(Error::LengthMismatch {
                expected: sys.len(),
                found: samples.len(),
            });
        }
    }
    let values = samples_f
        .iter()
        .zip(samples_g)
        .zip(sys.weights_f().iter().zip(sys.weights_estar()))
        .map(|((sf, sg), (wf, we))| sf * wf + sg * we)
        .collect();
    Ok(MultiplexedStream { sys, values })
}

/// `Σ m_n conj(F(λ_n)) K_E(λ_n, z) / K_EF(λ_n, λ_n)`.
pub fn decode_f(stream: &MultiplexedStream<'_>, z: Complex64) -> Complex64 {
    let sys = stream.sys;
    par::sum_indexed(sys.len(), |n| {
        let m = stream.values[n];
        if m == Complex64::new(0.0, 0.0) {
            return m;
        }
        m * sys.weights_f()[n].conj() * kernel(sys.e(), Complex64::new(sys.nodes()[n], 0.0), z) / sys.diag_ef()[n]
    })
}

/// `Σ m_n E(λ_n) K_F(λ_n, z) / K_EF(λ_n, λ_n)`.
pub fn decode_g(stream: &MultiplexedStream<'_>, z: Complex64) -> Complex64 {
    let sys = stream.sys;
    par::sum_indexed(sys.len(), |n| {
        let m = stream.values[n];
        if m == Complex64::new(0.0, 0.0) {
            return m;
        }
        m * sys.weights_e()[n] * kernel(sys.f(), Complex64::new(sys.nodes()[n], 0.0), z) / sys.diag_ef()[n]
    })
}

/// Adds iid complex Gaussian noise (standard deviation `noise_sigma` per
/// real component) and zeroes each entry with probability `drop_probability`.
/// Deterministic for a given seed.
pub fn simulate_channel<'a>(
    stream: &MultiplexedStream<'a>,
    noise_sigma: f64,
    drop_probability: f64,
    seed: u64,
) -> Result<MultiplexedStream<'a>> {
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise sigma {noise_sigma} must be finite and >= 0")));
    }
    if !(0.0..1.0).contains(&drop_probability) {
        return Err(Error::InvalidArgument(format!("drop probability {drop_probability} is not in [0, 1)")));
    }
    if noise_sigma == 0.0 && drop_probability == 0.0 {
        return Ok(stream.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let drop = Bernoulli::new(drop_probability).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    // Draw the same number of variates per entry regardless of outcome so
    // that changing one parameter does not reshuffle the others.
    let values = stream
        .values
        .iter()
        .map(|&m| {
            let re = noise.sample(&mut rng);
            let im = noise.sample(&mut rng);
            let dropped = drop.sample(&mut rng);
            if dropped {
                Complex64::new(0.0, 0.0)
            } else {
                m + Complex64::new(re, im)
            }
        })
        .collect();
    Ok(MultiplexedStream { sys: stream.sys, values })
}

/// One noisy-channel trial, as written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub sigma: f64,
    pub drop: f64,
    pub window: [i64; 2],
    pub err_f: f64,
    pub err_g: f64,
}

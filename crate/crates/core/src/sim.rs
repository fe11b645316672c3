//! Monte-Carlo FER/BER simulation over BPSK and AWGN.
//!
//! Every frame draws its message and noise from a ChaCha8 stream keyed by
//! `(seed, point, frame)`, and frames run in fixed-size batches with the
//! stopping rule checked between batches, so results do not depend on the
//! number of workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::construction::{self, BitRoles, CodeConfig};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::kernel::{self, Arithmetic};
use crate::params::DecoderParams;
use crate::sr::{self, ListPath, SrListDecoder};

/// Noise variance per real dimension for BPSK at `ebn0_db` and code rate `rate`.
pub fn noise_variance(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Send `codeword` as BPSK (`b -> 1 - 2b`) over AWGN and return the channel LLRs `2y/σ²`.
pub fn awgn_bpsk_llr<R: Rng + ?Sized>(codeword: &[u8], ebn0_db: f64, rate: f64, rng: &mut R) -> Vec<f64> {
    let sigma2 = noise_variance(ebn0_db, rate);
    let noise = Normal::new(0.0, sigma2.sqrt()).expect("finite positive deviation");
    codeword.iter().map(|&b| 2.0 * (1.0 - 2.0 * b as f64 + noise.sample(rng)) / sigma2).collect()
}

/// Random stream of one frame.
pub fn frame_rng(seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) ^ frame);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    /// Bit-by-bit successive cancellation.
    Sc,
    /// Bit-by-bit list decoding with CRC selection.
    SclRef,
    /// The node decoder restricted to rate-0, rate-1, repetition and SPC nodes.
    FastSclEmu,
    SrList,
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sc" => Ok(DecoderKind::Sc),
            "scl" | "scl_ref" => Ok(DecoderKind::SclRef),
            "fastscl" | "fast_scl" | "fastscl_emu" | "fast_scl_emu" => Ok(DecoderKind::FastSclEmu),
            "sr" | "srlist" | "sr_list" => Ok(DecoderKind::SrList),
            _ => Err(Error::Parse(format!("unknown decoder '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub config: CodeConfig,
    pub decoder: DecoderKind,
    /// List size, node limits and arithmetic. `FastSclEmu` keeps only the
    /// list size, fork limits and arithmetic.
    pub params: DecoderParams,
    pub ebn0_points: Vec<f64>,
    pub min_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    /// Transmit without noise (LLRs at the nominal `2/σ²` magnitude).
    pub noiseless: bool,
}

impl SimSpec {
    pub fn new(config: CodeConfig, decoder: DecoderKind, params: DecoderParams, ebn0_points: Vec<f64>) -> Self {
        Self { config, decoder, params, ebn0_points, min_errors: 100, max_frames: 10_000_000, seed: 1, noiseless: false }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.ebn0_points.is_empty() {
            return Err(Error::InvalidParams("no Eb/N0 points"));
        }
        if self.ebn0_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("Eb/N0 points must be strictly increasing"));
        }
        if self.max_frames == 0 {
            return Err(Error::InvalidParams("max_frames must be positive"));
        }
        Ok(())
    }

    /// FNV-1a hash of the spec, for tagging reports.
    pub fn hash(&self) -> u64 {
        format!("{self:?}").bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
    }
}

/// Outcome of one simulated frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameOutcome {
    pub frame_error: bool,
    pub bit_errors: u64,
}

/// Something that can simulate one frame at a given point.
pub trait FrameSim: Sync {
    /// Bits compared per frame (for the bit error rate).
    fn bits_per_frame(&self) -> u64;
    fn run_frame(&self, ebn0_db: f64, rng: &mut ChaCha8Rng) -> Result<FrameOutcome>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerReport {
    pub points: Vec<FerPoint>,
    pub spec_hash: u64,
    pub build_id: String,
}

/// 95% normal-approximation interval of a proportion, clipped to `[0, 1]`.
pub fn confidence_interval(errors: u64, frames: u64) -> (f64, f64) {
    if frames == 0 {
        return (0.0, 1.0);
    }
    let p = errors as f64 / frames as f64;
    let half = 1.96 * (p * (1.0 - p) / frames as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

/// Frames per batch; the stopping rule is evaluated between batches.
pub const BATCH_FRAMES: u64 = 256;

/// Run `sim` at every point until `min_errors` frame errors or `max_frames` frames.
pub fn run_points<S: FrameSim>(
    sim: &S,
    ebn0_points: &[f64],
    min_errors: u64,
    max_frames: u64,
    seed: u64,
    execution: Execution,
) -> Result<Vec<FerPoint>> {
    let mut out = Vec::with_capacity(ebn0_points.len());
    for (pi, &ebn0) in ebn0_points.iter().enumerate() {
        let (mut frames, mut errors, mut bits) = (0u64, 0u64, 0u64);
        while frames < max_frames && errors < min_errors {
            let ids: Vec<u64> = (frames..(frames + BATCH_FRAMES).min(max_frames)).collect();
            let outcomes = exec::try_map(execution, &ids, |&f| sim.run_frame(ebn0, &mut frame_rng(seed, pi, f)))?;
            frames += ids.len() as u64;
            errors += outcomes.iter().filter(|o| o.frame_error).count() as u64;
            bits += outcomes.iter().map(|o| o.bit_errors).sum::<u64>();
        }
        let (ci_low, ci_high) = confidence_interval(errors, frames);
        out.push(FerPoint {
            ebn0_db: ebn0,
            frames,
            frame_errors: errors,
            bit_errors: bits,
            fer: errors as f64 / frames as f64,
            ber: bits as f64 / (frames * sim.bits_per_frame().max(1)) as f64,
            ci_low,
            ci_high,
        });
    }
    Ok(out)
}

/// Full transmit/receive chain for one code and decoder.
#[derive(Debug, Clone)]
pub struct LinkSim {
    config: CodeConfig,
    roles: BitRoles,
    decoder: DecoderKind,
    list_size: usize,
    node_decoder: Option<SrListDecoder>,
    noiseless: bool,
}

impl LinkSim {
    pub fn new(spec: &SimSpec) -> Result<Self> {
        let roles = construction::frozen_set(&spec.config);
        let node_params = match spec.decoder {
            DecoderKind::SrList => Some(spec.params),
            DecoderKind::FastSclEmu => Some(DecoderParams {
                fork_limits: spec.params.fork_limits,
                arithmetic: spec.params.arithmetic,
                ..DecoderParams::fast_scl(spec.params.list_size)
            }),
            DecoderKind::Sc | DecoderKind::SclRef => None,
        };
        let node_decoder = node_params.map(|p| SrListDecoder::new(&spec.config, &p)).transpose()?;
        Ok(Self {
            config: spec.config.clone(),
            roles,
            decoder: spec.decoder,
            list_size: spec.params.list_size,
            node_decoder,
            noiseless: spec.noiseless,
        })
    }

    /// Decode `E` received LLRs to a message.
    pub fn decode(&self, llr_e: &[f64]) -> Result<Vec<u8>> {
        if let Some(dec) = &self.node_decoder {
            return Ok(dec.decode(llr_e)?.message);
        }
        let llr = construction::rate_recover(llr_e, &self.config, Arithmetic::Float)?;
        let paths: Vec<ListPath> = match self.decoder {
            DecoderKind::Sc => {
                let u = kernel::sc_decode(&llr, &self.roles)?;
                vec![ListPath { codeword: Vec::new(), u, pm: 0.0 }]
            }
            _ => kernel::scl_decode_reference(&llr, &self.roles, self.list_size)?
                .into_iter()
                .map(|p| ListPath { codeword: Vec::new(), u: p.u, pm: p.pm })
                .collect(),
        };
        Ok(sr::select_by_crc(&paths, &self.config, &self.roles)?.message)
    }
}

impl FrameSim for LinkSim {
    fn bits_per_frame(&self) -> u64 {
        self.config.a as u64
    }

    fn run_frame(&self, ebn0_db: f64, rng: &mut ChaCha8Rng) -> Result<FrameOutcome> {
        let msg: Vec<u8> = (0..self.config.a).map(|_| rng.random_range(0..2u8)).collect();
        let x = construction::encode_block(&msg, &self.config, &self.roles)?;
        let tx = construction::rate_match(&x, &self.config)?;
        let rate = self.config.rate();
        let llr = if self.noiseless {
            let scale = 2.0 / noise_variance(ebn0_db, rate);
            tx.iter().map(|&b| scale * (1.0 - 2.0 * b as f64)).collect()
        } else {
            awgn_bpsk_llr(&tx, ebn0_db, rate, rng)
        };
        let decoded = self.decode(&llr)?;
        let bit_errors = decoded.iter().zip(&msg).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameOutcome { frame_error: bit_errors > 0, bit_errors })
    }
}

/// Simulate `spec` at every Eb/N0 point.
pub fn run_fer(spec: &SimSpec, execution: Execution) -> Result<FerReport> {
    spec.validate()?;
    let sim = LinkSim::new(spec)?;
    let points = run_points(&sim, &spec.ebn0_points, spec.min_errors, spec.max_frames, spec.seed, execution)?;
    Ok(FerReport { points, spec_hash: spec.hash(), build_id: concat!("polarlab-", env!("CARGO_PKG_VERSION")).to_string() })
}

/// Eb/N0 at which a FER curve crosses `target`, by log-linear
/// interpolation between the bracketing points.
pub fn ebn0_at_fer(points: &[FerPoint], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.fer >= target && b.fer <= target && a.fer > 0.0 && b.fer > 0.0 && a.fer != b.fer {
            let t = (a.fer.ln() - target.ln()) / (a.fer.ln() - b.fer.ln());
            Some(a.ebn0_db + t * (b.ebn0_db - a.ebn0_db))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_convention() {
        assert!((noise_variance(0.0, 0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interval_contains_estimate() {
        let (lo, hi) = confidence_interval(10, 1000);
        assert!(lo < 0.01 && 0.01 < hi);
        assert_eq!(confidence_interval(0, 10), (0.0, 0.0));
    }

    #[test]
    fn crossing_interpolation() {
        let pt = |e, fer| FerPoint {
            ebn0_db: e,
            frames: 1,
            frame_errors: 0,
            bit_errors: 0,
            fer,
            ber: 0.0,
            ci_low: 0.0,
            ci_high: 0.0,
        };
        let x = ebn0_at_fer(&[pt(1.0, 0.1), pt(2.0, 0.001)], 0.01).unwrap();
        assert!((x - 1.5).abs() < 1e-12);
    }
}

//! Polar transform, min-sum kernel functions, partial-sum combination,
//! fixed-point arithmetic and the reference SC / SCL decoders.
//!
//! Tree convention: a node of length `2^s` has its left child computed as
//! `f(λ[j], λ[j + half])` and its right child as `g(λ[j], λ[j + half], β_left[j])`.
//! Both arithmetic modes share one `f64` code path; fixed-point values are
//! multiples of the format's LSB and therefore exact in `f64`.

use crate::construction::BitRoles;
use crate::error::{Error, Result};

/// Signed fixed-point format with `total_bits` bits, `frac_bits` of them fractional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointFormat {
    pub total_bits: u32,
    pub frac_bits: u32,
}

impl FixedPointFormat {
    pub const fn new(total_bits: u32, frac_bits: u32) -> Self {
        Self { total_bits, frac_bits }
    }

    /// Value of one least significant bit.
    pub fn lsb(&self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }

    /// Largest representable magnitude, `2^(qi-qf-1) - 2^-qf`.
    pub fn max_value(&self) -> f64 {
        ((self.total_bits - self.frac_bits - 1) as f64).exp2() - self.lsb()
    }

    /// Clamp to the representable range.
    pub fn saturate(&self, x: f64) -> f64 {
        let m = self.max_value();
        x.clamp(-m, m)
    }

    /// Round to the nearest LSB multiple and saturate.
    pub fn quantize(&self, x: f64) -> f64 {
        let lsb = self.lsb();
        self.saturate((x / lsb).round() * lsb)
    }

    /// Whether `x` is exactly representable.
    pub fn represents(&self, x: f64) -> bool {
        x.abs() <= self.max_value() && (x / self.lsb()).fract() == 0.0
    }
}

/// Channel and internal LLR format (6 bits, 2 fractional).
pub const LLR_FORMAT: FixedPointFormat = FixedPointFormat::new(6, 2);
/// Path-metric format. PMs count LLR LSBs, so the largest PM is
/// `63 * LLR_FORMAT.lsb()` in LLR units.
pub const PM_FORMAT: FixedPointFormat = FixedPointFormat::new(7, 0);

/// Gain applied to received LLRs ahead of Q6.2 quantization. Min-sum
/// decisions do not depend on the LLR scale, so the gain only positions
/// the quantization grid: `2y/σ²` values at useful SNRs land mostly
/// inside `±7.75` and path metrics stay within their 7-bit range.
pub const FIXED_INPUT_SCALE: f64 = 0.375;

/// Largest path metric in fixed-point mode, in LLR units.
pub fn pm_max() -> f64 {
    PM_FORMAT.max_value() * LLR_FORMAT.lsb()
}

/// Arithmetic used by the decoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Arithmetic {
    /// Unbounded `f64` LLRs and path metrics.
    #[default]
    Float,
    /// Q6.2 LLRs with saturating additions and 7-bit path metrics.
    Fixed,
}

impl std::str::FromStr for Arithmetic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "float" => Ok(Arithmetic::Float),
            "fixed" => Ok(Arithmetic::Fixed),
            _ => Err(Error::Parse(format!("unknown arithmetic mode '{s}'"))),
        }
    }
}

impl Arithmetic {
    #[inline]
    pub fn quantize(self, x: f64) -> f64 {
        match self {
            Arithmetic::Float => x,
            Arithmetic::Fixed => LLR_FORMAT.quantize(x),
        }
    }

    /// Quantize a received LLR, including the fixed-point input gain.
    #[inline]
    pub fn quantize_channel(self, x: f64) -> f64 {
        match self {
            Arithmetic::Float => x,
            Arithmetic::Fixed => LLR_FORMAT.quantize(x * FIXED_INPUT_SCALE),
        }
    }

    #[inline]
    pub fn saturate(self, x: f64) -> f64 {
        match self {
            Arithmetic::Float => x,
            Arithmetic::Fixed => LLR_FORMAT.saturate(x),
        }
    }

    #[inline]
    pub fn add(self, a: f64, b: f64) -> f64 {
        self.saturate(a + b)
    }

    #[inline]
    pub fn f(self, a: f64, b: f64) -> f64 {
        f_llr(a, b)
    }

    #[inline]
    pub fn g(self, a: f64, b: f64, z: u8) -> f64 {
        self.saturate(g_llr(a, b, z))
    }

    /// Path-metric accumulation (saturating in fixed point).
    #[inline]
    pub fn pm_add(self, pm: f64, delta: f64) -> f64 {
        match self {
            Arithmetic::Float => pm + delta,
            Arithmetic::Fixed => (pm + delta).min(pm_max()),
        }
    }
}

/// Hard decision: 1 for negative LLRs, 0 otherwise (ties decide 0).
#[inline]
pub fn hard_decision(x: f64) -> u8 {
    (x < 0.0) as u8
}

/// Min-sum check-node update.
#[inline]
pub fn f_llr(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// Variable-node update given the left partial sum `z`.
#[inline]
pub fn g_llr(a: f64, b: f64, z: u8) -> f64 {
    if z & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// In-place polar transform `x = u F^{⊗n}` over GF(2).
pub fn encode_in_place(bits: &mut [u8]) -> Result<()> {
    let n = bits.len();
    if !n.is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo(n));
    }
    let mut half = 1;
    while half < n {
        for block in bits.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
    Ok(())
}

/// Polar transform of `u`.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    let mut x = u.to_vec();
    encode_in_place(&mut x)?;
    Ok(x)
}

/// Merge two sibling partial sums: `(left ⊕ right, right)`.
pub fn psum_combine(left: &[u8], right: &[u8]) -> Result<Vec<u8>> {
    if left.len() != right.len() {
        return Err(Error::LengthMismatch { expected: left.len(), actual: right.len() });
    }
    let mut out = Vec::with_capacity(2 * left.len());
    out.extend(left.iter().zip(right).map(|(a, b)| a ^ b));
    out.extend_from_slice(right);
    Ok(out)
}

/// One decoding path of the reference list decoder.
#[derive(Debug, Clone)]
struct RefPath {
    /// `alpha[s]` holds the LLRs of the current node at stage `s`.
    alpha: Vec<Vec<f64>>,
    /// `left[s]` holds the partial sum of the last completed left child at stage `s`.
    left: Vec<Vec<u8>>,
    u: Vec<u8>,
    pm: f64,
}

impl RefPath {
    fn new(llr: &[f64]) -> Self {
        let n = llr.len().trailing_zeros() as usize;
        let mut alpha: Vec<Vec<f64>> = (0..n).map(|s| vec![0.0; 1 << s]).collect();
        alpha.push(llr.to_vec());
        let left = (0..n).map(|s| vec![0u8; 1 << s]).collect();
        Self { alpha, left, u: Vec::with_capacity(llr.len()), pm: 0.0 }
    }

    /// Compute the LLR of leaf `i`, assuming leaves `0..i` are decided.
    fn leaf_llr(&mut self, i: usize, n: usize) -> f64 {
        let start = if i == 0 { n } else { i.trailing_zeros() as usize + 1 };
        for s in (1..=start).rev() {
            let half = 1 << (s - 1);
            let (lower, upper) = self.alpha.split_at_mut(s);
            let src = &upper[0];
            let dst = &mut lower[s - 1];
            if s == start && i != 0 {
                let z = &self.left[s - 1];
                for j in 0..half {
                    dst[j] = g_llr(src[j], src[j + half], z[j]);
                }
            } else {
                for j in 0..half {
                    dst[j] = f_llr(src[j], src[j + half]);
                }
            }
        }
        self.alpha[0][0]
    }

    /// Record decision `bit` for leaf `i` and propagate partial sums.
    fn commit(&mut self, i: usize, bit: u8, n: usize) {
        self.u.push(bit);
        let mut beta = vec![bit];
        let mut idx = i;
        for s in 0..n {
            if idx & 1 == 0 {
                self.left[s] = beta;
                return;
            }
            beta = psum_combine(&self.left[s], &beta).expect("sibling lengths match");
            idx >>= 1;
        }
    }
}

fn check_lengths(llr: &[f64], roles: &BitRoles) -> Result<()> {
    if !llr.len().is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo(llr.len()));
    }
    if llr.len() != roles.len() {
        return Err(Error::LengthMismatch { expected: roles.len(), actual: llr.len() });
    }
    Ok(())
}

/// Bit-by-bit successive cancellation decoding. Returns the decided `u`.
pub fn sc_decode(llr: &[f64], roles: &BitRoles) -> Result<Vec<u8>> {
    check_lengths(llr, roles)?;
    let n = llr.len().trailing_zeros() as usize;
    let mut path = RefPath::new(llr);
    for i in 0..llr.len() {
        let l = path.leaf_llr(i, n);
        let bit = if roles.is_info(i) { hard_decision(l) } else { 0 };
        path.commit(i, bit, n);
    }
    Ok(path.u)
}

/// A surviving path of the reference list decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct SclPath {
    /// Decided input vector.
    pub u: Vec<u8>,
    pub pm: f64,
}

/// Conventional bit-by-bit SCL decoding with min-sum path metrics.
/// Returns the surviving paths sorted by path metric.
pub fn scl_decode_reference(llr: &[f64], roles: &BitRoles, list_size: usize) -> Result<Vec<SclPath>> {
    scl_decode_observed(llr, roles, list_size, |_, _| {})
}

/// [`scl_decode_reference`] with an observer called after every leaf with
/// the leaf index and the surviving `(u prefix, pm)` pairs.
pub fn scl_decode_observed<F>(llr: &[f64], roles: &BitRoles, list_size: usize, mut observe: F) -> Result<Vec<SclPath>>
where
    F: FnMut(usize, &[(&[u8], f64)]),
{
    check_lengths(llr, roles)?;
    if list_size == 0 {
        return Err(Error::InvalidParams("list size must be at least 1"));
    }
    let n = llr.len().trailing_zeros() as usize;
    let mut paths = vec![RefPath::new(llr)];
    for i in 0..llr.len() {
        let leaf: Vec<f64> = paths.iter_mut().map(|p| p.leaf_llr(i, n)).collect();
        if roles.is_info(i) {
            // Candidates ordered by (parent, bit); a stable sort keeps that order on ties.
            let mut cands: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * paths.len());
            for (l, p) in paths.iter().enumerate() {
                for bit in 0..2u8 {
                    let penalty = if hard_decision(leaf[l]) == bit { 0.0 } else { leaf[l].abs() };
                    cands.push((p.pm + penalty, l, bit));
                }
            }
            cands.sort_by(|a, b| a.0.total_cmp(&b.0));
            cands.truncate(list_size);
            cands.sort_by_key(|c| (c.1, c.2));
            let mut next = Vec::with_capacity(cands.len());
            for (pm, l, bit) in cands {
                let mut p = paths[l].clone();
                p.pm = pm;
                p.commit(i, bit, n);
                next.push(p);
            }
            paths = next;
        } else {
            for (l, p) in paths.iter_mut().enumerate() {
                if hard_decision(leaf[l]) != 0 {
                    p.pm += leaf[l].abs();
                }
                p.commit(i, 0, n);
            }
        }
        let view: Vec<(&[u8], f64)> = paths.iter().map(|p| (p.u.as_slice(), p.pm)).collect();
        observe(i, &view);
    }
    let mut out: Vec<SclPath> = paths.into_iter().map(|p| SclPath { u: p.u, pm: p.pm }).collect();
    out.sort_by(|a, b| a.pm.total_cmp(&b.pm));
    Ok(out)
}

/// Correlation discrepancy `Σ |λ_j| [HD(λ_j) ≠ x_j]`; the min-sum path
/// metric of codeword `x` under LLRs `llr`.
pub fn discrepancy(llr: &[f64], x: &[u8]) -> f64 {
    llr.iter().zip(x).filter(|(l, &b)| hard_decision(**l) != b).map(|(l, _)| l.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_and_g_values() {
        assert_eq!(f_llr(2.0, -3.5), -2.0);
        assert_eq!(f_llr(0.0, 5.0).abs(), 0.0);
        assert_eq!(g_llr(2.0, 3.5, 0), 5.5);
        assert_eq!(g_llr(2.0, 3.5, 1), 1.5);
        assert_eq!(Arithmetic::Fixed.g(7.75, 7.75, 0), 7.75);
    }

    #[test]
    fn q62_bounds() {
        assert_eq!(LLR_FORMAT.max_value(), 7.75);
        assert_eq!(LLR_FORMAT.lsb(), 0.25);
        assert_eq!(LLR_FORMAT.quantize(1.13), 1.25);
        assert_eq!(LLR_FORMAT.quantize(-40.0), -7.75);
        assert_eq!(pm_max(), 15.75);
    }

    #[test]
    fn last_row_is_all_ones() {
        let mut u = vec![0u8; 16];
        u[15] = 1;
        assert!(encode(&u).unwrap().iter().all(|&b| b == 1));
    }

    #[test]
    fn combine_examples() {
        assert_eq!(psum_combine(&[1, 1, 1, 1], &[0, 0, 0, 0]).unwrap(), vec![1, 1, 1, 1, 0, 0, 0, 0]);
        assert!(psum_combine(&[1], &[0, 0]).is_err());
    }

    #[test]
    fn frozen_mismatch_adds_magnitude() {
        let roles = BitRoles::from_frozen(2, &[0]).unwrap();
        // leaf 0 LLR = f(3, -1) = -1 -> frozen mismatch costs 1.
        let paths = scl_decode_reference(&[3.0, -1.0], &roles, 2).unwrap();
        assert_eq!(paths[0].pm, 1.0);
    }
}

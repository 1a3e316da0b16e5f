//! Closed-form collision bounds and fingerprint sizes, in log domain.

use std::cmp::Ordering;
use std::f64::consts::{LN_10, LOG10_2};
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ie::qubits_for_file;
use crate::verify::classical_fingerprint_bits;

/// Default base of the file-count family `K = base^(2^n)`.
pub const DEFAULT_BASE: f64 = 1.4;

/// A non-negative real stored as its base-10 logarithm.
///
/// Handles magnitudes like `10^-9000` that underflow `f64`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    log10: f64,
    zero: bool,
}

impl LogValue {
    pub const ZERO: Self = Self { log10: 0.0, zero: true };
    pub const ONE: Self = Self { log10: 0.0, zero: false };

    pub fn from_log10(log10: f64) -> Self {
        assert!(log10.is_finite(), "log10 magnitude must be finite");
        Self { log10, zero: false }
    }

    pub fn from_log2(log2: f64) -> Self {
        Self::from_log10(log2 * LOG10_2)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0 && x.is_finite(), "{x} is not a finite non-negative value");
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::from_log10(x.log10())
        }
    }

    /// `base^exponent`.
    pub fn pow_of(base: f64, exponent: f64) -> Self {
        Self::from_f64(base).powf(exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `-∞` for zero.
    pub fn log10(&self) -> f64 {
        if self.zero {
            f64::NEG_INFINITY
        } else {
            self.log10
        }
    }

    pub fn log2(&self) -> f64 {
        self.log10() / LOG10_2
    }

    /// Underflows to `0` and overflows to `∞` like any `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            10f64.powf(self.log10)
        }
    }



    pub fn powf(self, e: f64) -> Self {
        if self.zero {
            if e > 0.0 {
                Self::ZERO
            } else {
                Self::ONE
            }
        } else {
            Self::from_log10(self.log10 * e)
        }
    }

}

impl Mul for LogValue {
    type Output = Self;

        fn mul(self, other: Self) -> Self {
            if self.zero || other.zero {
                Self::ZERO
            } else {
                Self::from_log10(self.log10 + other.log10)
            }
        }
}

impl Div for LogValue {
    type Output = Self;

        fn div(self, other: Self) -> Self {
            assert!(!other.zero, "division by zero");
            if self.zero {
                Self::ZERO
            } else {
                Self::from_log10(self.log10 - other.log10)
            }
        }
}

impl Add for LogValue {
    type Output = Self;

        fn add(self, other: Self) -> Self {
            if self.zero {
                return other;
            }
            if other.zero {
                return self;
            }
            let (hi, lo) = if self.log10 >= other.log10 {
                (self.log10, other.log10)
            } else {
                (other.log10, self.log10)
            };
            Self::from_log10(hi + (10f64.powf(lo - hi)).ln_1p() / LN_10)
        }
}

impl Sub for LogValue {
    type Output = Self;

        /// `self - other`, requiring `self ≥ other`.
        fn sub(self, other: Self) -> Self {
            if other.zero {
                return self;
            }
            match self.log10.partial_cmp(&other.log10) {
                Some(Ordering::Greater) if !self.zero => {
                    let d = other.log10 - self.log10;
                    Self::from_log10(self.log10 + (-(10f64.powf(d))).ln_1p() / LN_10)
                }
                Some(Ordering::Equal) if !self.zero => Self::ZERO,
                _ => panic!("negative result in log-domain subtraction"),
            }
        }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else {
            write!(f, "10^{}", self.log10)
        }
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.log10().partial_cmp(&other.log10())
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::config("n must be at least 1"))
    } else {
        Ok(())
    }
}

fn dim(n: u32) -> f64 {
    2f64.powi(n as i32)
}

/// Density `(2ⁿ−1)(1−f)^(2ⁿ−2)` of the fidelity of two Haar states.
pub fn haar_fidelity_pdf(f: f64, n: u32) -> Result<f64> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::config(format!("fidelity {f} outside [0, 1]")));
    }
    let d = dim(n);
    Ok((d - 1.0) * (1.0 - f).powf(d - 2.0))
}

/// `Pr[F ≤ f] = 1 − (1−f)^(2ⁿ−1)`, the Beta(1, 2ⁿ−1) CDF.
pub fn haar_fidelity_cdf(f: f64, n: u32) -> Result<f64> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::config(format!("fidelity {f} outside [0, 1]")));
    }
    Ok(-(((dim(n) - 1.0) * (-f).ln_1p()).exp_m1()))
}

/// `Pr[F > c] = (1−c)^(2ⁿ−1)`.
pub fn haar_tail(c: f64, n: u32) -> Result<LogValue> {
    check_n(n)?;
    if !(0.0..1.0).contains(&c) {
        return Err(Error::config(format!("threshold {c} outside [0, 1)")));
    }
    Ok(LogValue::from_log10((dim(n) - 1.0) * (-c).ln_1p() / LN_10))
}

/// `K(K−1)`, zero at `K = 1`.
fn ordered_pairs(k: LogValue) -> LogValue {
    assert!(k.log10() >= 0.0, "K must be at least 1");
    k * (k - LogValue::ONE)
}

/// The file-count family `K = base^(2ⁿ)`.
pub fn haar_file_count(n: u32, base: f64) -> LogValue {
    LogValue::from_log10(dim(n) * base.log10())
}

/// Union bound `K(K−1)/2^(2ⁿ)` on any of `K` Haar states colliding above 1/2.
pub fn haar_collision_bound(k: LogValue, n: u32) -> LogValue {
    ordered_pairs(k) * LogValue::from_log2(-dim(n))
}

/// `2ᵗ(2^(nt) ε + tᵗ/2^(nt))`, the Markov bound on `Pr[F̃ > 1/2]` for an
/// ε-approximate t-design.
pub fn tdesign_moment_bound(t: u64, n: u32, epsilon: LogValue) -> Result<LogValue> {
    check_n(n)?;
    if t == 0 {
        return Err(Error::config("moment order t must be at least 1"));
    }
    let (t, n) = (t as f64, f64::from(n));
    let design = LogValue::from_log2(n * t) * epsilon;
    let haar = LogValue::from_log10(t * t.log10()) * LogValue::from_log2(-n * t);
    Ok(LogValue::from_log2(t) * (design + haar))
}

/// `K(K−1)/2 · (2^(t(n+1)) ε + tᵗ/2^(t(n−1)))`.
pub fn tdesign_collision_bound(k: LogValue, n: u32, t: u64, epsilon: LogValue) -> Result<LogValue> {
    let pairs = ordered_pairs(k) * LogValue::from_log2(-1.0);
    Ok(pairs * tdesign_moment_bound(t, n, epsilon)?)
}

/// Design parameters `(n, ℓ, t, ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub n: u32,
    pub ell: u32,
    pub t: u64,
    pub epsilon: LogValue,
}

impl DesignParams {
    /// `t = n^(ℓ−1)`, `ε = 2^(−2n^ℓ)`.
    pub fn schedule(n: u32, ell: u32) -> Result<Self> {
        check_n(n)?;
        if ell == 0 {
            return Err(Error::config("ℓ must be at least 1"));
        }
        let t = u64::from(n)
            .checked_pow(ell - 1)
            .ok_or_else(|| Error::config("t = n^(ℓ−1) overflows"))?;
        Ok(Self {
            n,
            ell,
            t,
            epsilon: LogValue::from_log2(-2.0 * f64::from(n).powi(ell as i32)),
        })
    }

    /// File count `base^(n^ℓ)`.
    pub fn file_count(&self, base: f64) -> LogValue {
        LogValue::from_log10(f64::from(self.n).powi(self.ell as i32) * base.log10())
    }

    pub fn collision_bound(&self, base: f64) -> Result<LogValue> {
        tdesign_collision_bound(self.file_count(base), self.n, self.t, self.epsilon)
    }

    /// `t^4.01 (nt + log₂(1/ε))`. A heuristic depth scale, not a guarantee.
    pub fn heuristic_depth(&self) -> f64 {
        let t = self.t as f64;
        t.powf(4.01) * (f64::from(self.n) * t - self.epsilon.log2())
    }
}

/// Smallest `n` with `base^(2ⁿ) ≥ 2^N`, i.e. `2ⁿ·log₂(base) ≥ N`.
pub fn ee_qubits_for_file(n_bits: usize, base: f64) -> Result<u32> {
    if base <= 1.0 {
        return Err(Error::config("the file-count base must exceed 1"));
    }
    let per = base.log2();
    let mut n = 0u32;
    while dim(n) * per < n_bits as f64 {
        n += 1;
    }
    Ok(n.max(1))
}

/// Fingerprint sizes for an `N`-bit file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRow {
    #[serde(rename = "N")]
    pub n_bits: usize,
    pub ie_qubits: usize,
    pub classical_bits: usize,
    pub ee_qubits: u32,
    pub naive_bits: usize,
}

pub fn size_table(n_bits: usize) -> Result<SizeRow> {
    Ok(SizeRow {
        n_bits,
        ie_qubits: qubits_for_file(n_bits)?,
        classical_bits: classical_fingerprint_bits(n_bits),
        ee_qubits: ee_qubits_for_file(n_bits, DEFAULT_BASE)?,
        naive_bits: n_bits,
    })
}

/// One row of the `bounds` table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: u32,
    pub log10_haar_tail: f64,
    pub log10_file_count: f64,
    pub log10_haar_collision: f64,
    pub log10_tdesign_l1: f64,
    pub log10_tdesign_l2: f64,
    pub heuristic_depth_l1: f64,
    pub heuristic_depth_l2: f64,
}

pub const BOUNDS_CSV_HEADER: &str = "n,log10_haar_tail,log10_file_count,log10_haar_collision,\
log10_tdesign_l1,log10_tdesign_l2,heuristic_depth_l1,heuristic_depth_l2";

pub fn bounds_row(n: u32, base: f64) -> Result<BoundsRow> {
    let l1 = DesignParams::schedule(n, 1)?;
    let l2 = DesignParams::schedule(n, 2)?;
    let k = haar_file_count(n, base);
    Ok(BoundsRow {
        n,
        log10_haar_tail: haar_tail(0.5, n)?.log10(),
        log10_file_count: k.log10(),
        log10_haar_collision: haar_collision_bound(k, n).log10(),
        log10_tdesign_l1: l1.collision_bound(base)?.log10(),
        log10_tdesign_l2: l2.collision_bound(base)?.log10(),
        heuristic_depth_l1: l1.heuristic_depth(),
        heuristic_depth_l2: l2.heuristic_depth(),
    })
}

impl BoundsRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.log10_haar_tail,
            self.log10_file_count,
            self.log10_haar_collision,
            self.log10_tdesign_l1,
            self.log10_tdesign_l2,
            self.heuristic_depth_l1,
            self.heuristic_depth_l2
        )
    }
}

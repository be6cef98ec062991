//! Stationary Gaussian sequences with prescribed correlation and their
//! partial-sum processes.
//!
//! Increments X_1..X_T are synthesized exactly (no truncation) by circulant
//! embedding: the correlation row r(0..T) is mirrored into a circulant of
//! size M = 2T whose eigenvalues come from one FFT; each complex-noise FFT
//! then yields two independent paths (real and imaginary parts). The
//! partial sums Z_k = X_1 + ... + X_k are the processes whose persistence
//! is studied; their law is time-reversible by stationarity.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Slowly varying factor ℓ(x) in the variance growth K x^{2H} ℓ(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlowVariation {
    One,
    Log,
    SqrtLog,
}

impl SlowVariation {
    /// Evaluated for x >= 2 (callers scale at dyadic horizons).
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 2.0);
        match self {
            SlowVariation::One => 1.0,
            SlowVariation::Log => x.ln(),
            SlowVariation::SqrtLog => x.ln().sqrt(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SlowVariation::One => "1",
            SlowVariation::Log => "log",
            SlowVariation::SqrtLog => "sqrt-log",
        }
    }
}

/// Correlation of fractional gaussian noise at the given lag.
pub fn fgn_correlation(hurst: f64, lag: usize) -> Result<f64> {
    check_hurst(hurst)?;
    Ok(fgn_r(hurst, lag))
}

fn check_hurst(hurst: f64) -> Result<()> {
    if !(hurst > 0.0 && hurst < 1.0) || !hurst.is_finite() {
        return Err(Error::Parameter(format!(
            "hurst parameter must lie in (0, 1), got {hurst}"
        )));
    }
    Ok(())
}

#[inline]
fn fgn_r(h: f64, j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let j = j as f64;
    let e = 2.0 * h;
    0.5 * ((j + 1.0).powf(e) - 2.0 * j.powf(e) + (j - 1.0).powf(e))
}

#[derive(Debug, Clone)]
enum CorrKind {
    Fgn,
    /// Table r(0..=J); lags beyond J hold the last value.
    Table(Vec<f64>),
}

/// A stationary correlation structure together with the scaling metadata
/// (H, K, ℓ) describing Var(Z_n) ~ K n^{2H} ℓ(n).
#[derive(Debug, Clone)]
pub struct CorrelationSpec {
    kind: CorrKind,
    pub hurst: f64,
    pub k_const: f64,
    pub ell: SlowVariation,
}

impl CorrelationSpec {
    /// Fractional gaussian noise; variance sums are exactly n^{2H}.
    pub fn fgn(hurst: f64) -> Result<CorrelationSpec> {
        check_hurst(hurst)?;
        Ok(CorrelationSpec {
            kind: CorrKind::Fgn,
            hurst,
            k_const: 1.0,
            ell: SlowVariation::One,
        })
    }

    /// Correlation table r(0..=J) with tail hold beyond J. The scaling
    /// metadata is caller-supplied; validity over a horizon is decided by
    /// the embedding spectrum when a generator is built.
    pub fn from_table(r: Vec<f64>, hurst: f64, ell: SlowVariation) -> Result<CorrelationSpec> {
        check_hurst(hurst)?;
        if r.is_empty() {
            return Err(Error::Parameter("empty correlation table".into()));
        }
        if (r[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "correlation table must start at r(0) = 1, got {}",
                r[0]
            )));
        }
        if let Some(bad) = r.iter().find(|v| !v.is_finite() || v.abs() > 1.0) {
            return Err(Error::Parameter(format!(
                "correlation value {bad} outside [-1, 1]"
            )));
        }
        Ok(CorrelationSpec {
            kind: CorrKind::Table(r),
            hurst,
            k_const: 1.0,
            ell,
        })
    }

    pub fn r(&self, lag: usize) -> f64 {
        match &self.kind {
            CorrKind::Fgn => fgn_r(self.hurst, lag),
            CorrKind::Table(t) => t[lag.min(t.len() - 1)],
        }
    }

    pub fn is_fgn(&self) -> bool {
        matches!(self.kind, CorrKind::Fgn)
    }

    pub fn label(&self) -> String {
        match &self.kind {
            CorrKind::Fgn => format!("fgn:h={}", self.hurst),
            CorrKind::Table(t) => format!("table:j={}:h={}", t.len() - 1, self.hurst),
        }
    }

    /// Smallest lag in 0..=horizon with r < 0, if any. The persistence
    /// theory assumes nonnegative correlations; exploratory runs may waive
    /// this.
    pub fn first_negative_lag(&self, horizon: usize) -> Option<usize> {
        (0..=horizon).find(|&j| self.r(j) < 0.0)
    }
}

/// Var(Z_n) = n + 2 Σ_{j<n} (n-j) r(j).
pub fn variance_sum(spec: &CorrelationSpec, n: usize) -> f64 {
    let mut acc = n as f64;
    for j in 1..n {
        acc += 2.0 * (n - j) as f64 * spec.r(j);
    }
    acc
}

/// Z_0 = 0 and Z_k = X_1 + ... + X_k.
pub fn partial_sums(increments: &[f64]) -> Vec<f64> {
    let mut z = Vec::with_capacity(increments.len() + 1);
    z.push(0.0);
    let mut acc = 0.0;
    for &x in increments {
        acc += x;
        z.push(acc);
    }
    z
}

/// Negative eigenvalues within dust of zero are clipped; anything worse
/// aborts, reporting the worst coefficient.
const EIGENVALUE_DUST: f64 = 1e-9;

fn apply_spectrum_policy(lam: &mut [f64]) -> Result<()> {
    let max = lam.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return Err(Error::Embedding {
            index: 0,
            value: max,
            max,
        });
    }
    let floor = -EIGENVALUE_DUST * max;
    for (i, v) in lam.iter_mut().enumerate() {
        if *v < 0.0 {
            if *v >= floor {
                *v = 0.0;
            } else {
                return Err(Error::Embedding {
                    index: i,
                    value: *v,
                    max,
                });
            }
        }
    }
    Ok(())
}

/// Spectral square root of the circulant embedding for one horizon,
/// computed once and shared read-only across workers.
pub struct CirculantTable {
    t: usize,
    m: usize,
    /// sqrt(λ_k / M); scaling folded in so outputs need no post-factor.
    weights: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl CirculantTable {
    /// Builds the table. `allow_negative_r` waives the r >= 0 horizon
    /// assertion required by the persistence theory (exploratory runs);
    /// the embedding spectrum check always applies.
    pub fn new(spec: &CorrelationSpec, t: usize, allow_negative_r: bool) -> Result<CirculantTable> {
        if t == 0 {
            return Err(Error::Parameter("horizon must be at least 1".into()));
        }
        if !allow_negative_r {
            if let Some(j) = spec.first_negative_lag(t) {
                return Err(Error::Parameter(format!(
                    "correlation r({j}) = {} is negative; persistence theory needs r >= 0 \
                     (pass the exploratory flag to waive)",
                    spec.r(j)
                )));
            }
        }
        let m = 2 * t;
        let mut row = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..=t {
            row[k].re = spec.r(k);
        }
        for k in 1..t {
            row[m - k].re = spec.r(k);
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(&mut row, &mut scratch);
        let mut lam: Vec<f64> = row.iter().map(|c| c.re).collect();
        apply_spectrum_policy(&mut lam)?;
        let weights = lam.iter().map(|&l| (l / m as f64).sqrt()).collect();
        Ok(CirculantTable {
            t,
            m,
            weights,
            scratch_len: fft.get_inplace_scratch_len(),
            fft,
        })
    }

    pub fn horizon(&self) -> usize {
        self.t
    }

    pub fn buffers(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            vec![Complex64::new(0.0, 0.0); self.m],
            vec![Complex64::new(0.0, 0.0); self.scratch_len],
        )
    }

    /// Fills two independent increment vectors from one complex FFT.
    /// Consumes exactly 2M gaussian draws from the stream.
    pub fn sample_pair(
        &self,
        rng: &mut CounterRng,
        xa: &mut [f64],
        xb: &mut [f64],
        buf: &mut [Complex64],
        scratch: &mut [Complex64],
    ) {
        debug_assert_eq!(xa.len(), self.t);
        debug_assert_eq!(xb.len(), self.t);
        debug_assert_eq!(buf.len(), self.m);
        for (b, &w) in buf.iter_mut().zip(&self.weights) {
            b.re = w * rng.next_gaussian();
            b.im = w * rng.next_gaussian();
        }
        self.fft.process_with_scratch(buf, scratch);
        for i in 0..self.t {
            xa[i] = buf[i].re;
            xb[i] = buf[i].im;
        }
    }
}

/// One vector of increments X_1..X_T. Builds a throwaway table; hot loops
/// should hold a [`CirculantTable`] and draw pairs.
pub fn generate_stationary(
    spec: &CorrelationSpec,
    t: usize,
    rng: &mut CounterRng,
) -> Result<Vec<f64>> {
    let table = CirculantTable::new(spec, t, true)?;
    let (mut buf, mut scratch) = table.buffers();
    let mut xa = vec![0.0; t];
    let mut xb = vec![0.0; t];
    table.sample_pair(rng, &mut xa, &mut xb, &mut buf, &mut scratch);
    Ok(xa)
}

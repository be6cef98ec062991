//! Keyed counter-based random number generation.
//!
//! Every random quantity is a pure function of explicit keys. Replica
//! streams are keyed by (master seed, stream, substream) and scenery site
//! values by (seed, site coordinates), so parallel workers never share
//! mutable generator state and any value can be recomputed in isolation.
//! Mixing is splitmix64-style; not cryptographic.

use crate::error::{Error, Result};

/// Identifies the stream construction in output metadata.
pub const GENERATOR_ID: &str = "keyed-splitmix64-v1";
/// Identifies the uniform-to-gaussian transform in output metadata.
pub const GAUSSIAN_TRANSFORM_ID: &str = "inverse-cdf-as241";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const KEY_INIT: u64 = 0x243F_6A88_85A3_08D3;

/// splitmix64 finalizer; bijective on u64.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Output at a (key, counter) point. Streams are rows of this function,
/// so distinct keys never alias to shifted copies of one orbit.
#[inline]
fn keyed(key: u64, counter: u64) -> u64 {
    mix64(key ^ mix64(counter.wrapping_mul(GOLDEN_GAMMA)))
}

fn derive_key(words: &[u64]) -> u64 {
    let mut h = KEY_INIT;
    for &w in words {
        h = mix64(h ^ w).wrapping_add(GOLDEN_GAMMA);
    }
    mix64(h)
}

/// Identifies one replica stream within an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub master_seed: u64,
    pub stream: u64,
    pub substream: u64,
}

/// Substream labels used by the samplers.
pub mod substream {
    pub const WALK: u64 = 1;
    pub const SCENERY: u64 = 2;
    pub const GAUSS_FIELD: u64 = 3;
}

/// Sequential generator over one keyed stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = keyed(self.key, self.counter);
        self.counter = self.counter.wrapping_add(1);
        v
    }

    /// Uniform draw strictly inside (0, 1), symmetric around 1/2.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        uniform_from_bits(self.next_u64())
    }

    /// Standard gaussian draw via the inverse CDF.
    #[inline]
    pub fn next_gaussian(&mut self) -> f64 {
        probit(self.next_f64())
    }

    /// Uniform in 0..bound without modulo bias.
    #[inline]
    pub fn next_index(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = (u64::MAX / bound) * bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

// 52 random bits: (k + 0.5)/2^52 is exactly representable for every k,
// so the result stays strictly inside (0, 1) and symmetric around 1/2.
#[inline]
fn uniform_from_bits(x: u64) -> f64 {
    ((x >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
}

/// Opens the stream for a replica key.
pub fn derive_stream(key: &StreamKey) -> CounterRng {
    CounterRng {
        key: derive_key(&[key.master_seed, key.stream, key.substream]),
        counter: 0,
    }
}

/// Convenience wrapper over [`derive_stream`].
pub fn stream(master_seed: u64, stream: u64, substream: u64) -> CounterRng {
    derive_stream(&StreamKey {
        master_seed,
        stream,
        substream,
    })
}

/// One gaussian draw from a stream; replicas with distinct keys are
/// statistically independent.
pub fn sample_standard_gaussian(stream: &mut CounterRng) -> f64 {
    stream.next_gaussian()
}

/// Lattice site on Z^d, d in 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteKey {
    coords: [i64; 3],
    dim: u8,
}

impl SiteKey {
    pub fn d1(x: i64) -> Self {
        SiteKey {
            coords: [x, 0, 0],
            dim: 1,
        }
    }

    pub fn d2(x: i64, y: i64) -> Self {
        SiteKey {
            coords: [x, y, 0],
            dim: 2,
        }
    }

    pub fn d3(x: i64, y: i64, z: i64) -> Self {
        SiteKey {
            coords: [x, y, z],
            dim: 3,
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim as usize]
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// Packs coordinates into two words; injective for |coord| < 2^31.
    fn encode(&self) -> Result<(u64, u64)> {
        const LIMIT: i64 = 1 << 31;
        for &c in self.coords() {
            if c <= -LIMIT || c >= LIMIT {
                return Err(Error::Range(format!(
                    "site coordinate {c} outside (-2^31, 2^31)"
                )));
            }
        }
        let u = |c: i64| c as i32 as u32 as u64;
        let w0 = u(self.coords[0]) | (u(self.coords[1]) << 32);
        let w1 = u(self.coords[2]) | ((self.dim as u64) << 32);
        Ok((w0, w1))
    }
}

/// Scenery value at a site: a standard gaussian that is a pure function
/// of (seed, site). Queries in any order yield identical values.
pub fn site_gaussian(seed: u64, site: &SiteKey) -> Result<f64> {
    let (w0, w1) = site.encode()?;
    let key = derive_key(&[seed, substream::SCENERY, w0, w1]);
    Ok(probit(uniform_from_bits(keyed(key, 0))))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Inverse standard normal CDF, Wichura's algorithm AS 241 (PPND16).
/// Relative error below 1e-15 over (0, 1).
pub fn probit(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * rational(r, &CENTRAL_NUM, &CENTRAL_DEN);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        rational(r, &TAIL_NUM, &TAIL_DEN)
    } else {
        let r = r - 5.0;
        rational(r, &FAR_TAIL_NUM, &FAR_TAIL_DEN)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

#[inline]
fn rational(r: f64, num: &[f64; 8], den: &[f64; 8]) -> f64 {
    let horner = |c: &[f64; 8]| {
        c[7].mul_add(r, c[6])
            .mul_add(r, c[5])
            .mul_add(r, c[4])
            .mul_add(r, c[3])
            .mul_add(r, c[2])
            .mul_add(r, c[1])
            .mul_add(r, c[0])
    };
    horner(num) / horner(den)
}

const CENTRAL_NUM: [f64; 8] = [
    3.387_132_872_796_366_608e0,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const CENTRAL_DEN: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
const TAIL_NUM: [f64; 8] = [
    1.423_437_110_749_683_577_34e0,
    4.630_337_846_156_545_295_9e0,
    5.769_497_221_460_691_405_5e0,
    3.647_848_324_763_204_605_04e0,
    1.270_458_252_452_368_382_58e0,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
const TAIL_DEN: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87e0,
    1.676_384_830_183_803_849_4e0,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
const FAR_TAIL_NUM: [f64; 8] = [
    6.657_904_643_501_103_777_2e0,
    5.463_784_911_164_114_369_9e0,
    1.784_826_539_917_291_335_8e0,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const FAR_TAIL_DEN: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

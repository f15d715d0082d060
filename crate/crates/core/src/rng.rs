//! Deterministic random numbers for the Monte Carlo engines.
//!
//! The generator is xoshiro256** (Blackman and Vigna, "Scrambled linear
//! pseudorandom number generators", 2018), seeded by expanding a `u64`
//! through SplitMix64. Independent streams come from the generator's jump
//! function: stream `k` starts `k · 2^128` steps after stream 0, so streams
//! never overlap in practice. Normal variates use the Marsaglia polar
//! method. Output depends only on the seed, never on the platform.

use crate::math::{ln, sqrt};

/// SplitMix64 (Steele, Lea and Flood, 2014).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

#[derive(Debug, Clone)]
pub struct Xoshiro256 {
    s: [u64; 4],
    spare_normal: Option<f64>,
}

impl Xoshiro256 {
    pub fn from_state(s: [u64; 4]) -> Self {
        Xoshiro256 {
            s,
            spare_normal: None,
        }
    }

    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Self::from_state([sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()])
    }

    /// Stream `stream` of `seed`. Costs `stream` jumps; when walking many
    /// consecutive streams, call [`Self::jump`] on a clone instead.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut rng = Self::seed_from_u64(seed);
        for _ in 0..stream {
            rng.jump();
        }
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Advances the state by `2^128` steps and clears any cached normal.
    pub fn jump(&mut self) {
        const JUMP: [u64; 4] = [
            0x180E_C6D3_3CFD_0ABA,
            0xD5A6_1266_F0C9_392C,
            0xA958_2618_E03F_C9AA,
            0x39AB_DC45_29B1_661C,
        ];
        let mut acc = [0u64; 4];
        for word in JUMP {
            for bit in 0..64 {
                if word & (1u64 << bit) != 0 {
                    for (a, s) in acc.iter_mut().zip(self.s.iter()) {
                        *a ^= *s;
                    }
                }
                self.next_u64();
            }
        }
        self.s = acc;
        self.spare_normal = None;
    }

    /// Standard normal variate (polar method; the second variate of each pair is cached).
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = sqrt(-2.0 * ln(s) / s);
                self.spare_normal = Some(v * m);
                return u * m;
            }
        }
    }
}

/// A draw from `N(mu, sigma²)`.
pub fn normal_sample(rng: &mut Xoshiro256, mu: f64, sigma: f64) -> f64 {
    mu + sigma * rng.standard_normal()
}

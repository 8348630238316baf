//! Seeded randomness. Every randomized routine takes an explicit seed; there
//! is no ambient entropy anywhere in the crate.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{ratio, Point, Scalar};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-seed for stream `stream` of `seed` (splitmix64 mix).
pub fn derive(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform rational `k / denom` with `k` in `[lo, hi]`.
pub fn rational(rng: &mut Rng, lo: i64, hi: i64, denom: i64) -> Scalar {
    ratio(rng.gen_range(lo..=hi), denom)
}

/// Uniform point of the grid `{k / denom}^d` inside `center + [-half, half]^d`
/// where `half = span / denom`.
pub fn point_near(rng: &mut Rng, center: &[Scalar], span: i64, denom: i64) -> Point {
    Point::new(center.iter().map(|c| c + rational(rng, -span, span, denom)).collect()).expect("nonempty")
}

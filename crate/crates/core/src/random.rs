//! Seeded randomness. Every generator is a ChaCha20 stream keyed by a caller
//! seed, so results are identical across platforms and runs. Independent
//! consumers (optimizer restarts, fuzz items) take disjoint stream numbers.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::tensor::C64;

pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes `index` into `seed` (splitmix64 finalizer) to give child seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-distributed `rows × cols` isometry (`rows ≥ cols`): QR of a complex
/// Gaussian matrix with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    assert!(rows >= cols, "isometry needs rows ≥ cols");
    let mut g = DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng));
    // Modified Gram–Schmidt; equivalent to QR with a positive diagonal.
    for j in 0..cols {
        for k in 0..j {
            let proj: C64 = (0..rows).map(|i| g[(i, k)].conj() * g[(i, j)]).sum();
            for i in 0..rows {
                let gik = g[(i, k)];
                g[(i, j)] -= proj * gik;
            }
        }
        let n = (0..rows).map(|i| g[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..rows {
            g[(i, j)] /= n;
        }
    }
    g
}

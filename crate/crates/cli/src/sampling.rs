//! Seeded sampling for the randomized check suites. All randomness flows
//! from one explicitly seeded ChaCha8 stream, so a pinned seed reruns to
//! identical samples on every platform.

use nclab_core::schwartz::GaussianPacket;
use nclab_core::spacetime::{FourVector, SpatialVector};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw from `[lo, hi)` using the top 53 bits of the stream.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        lo + u * (hi - lo)
    }

    pub fn spatial(&mut self, half_width: f64) -> SpatialVector {
        let v = [
            self.uniform(-half_width, half_width),
            self.uniform(-half_width, half_width),
            self.uniform(-half_width, half_width),
        ];
        SpatialVector::new(v).expect("finite components")
    }

    pub fn euclidean4(&mut self, half_width: f64) -> FourVector {
        let s = self.spatial(half_width);
        FourVector::euclidean(s.components(), self.uniform(-half_width, half_width))
            .expect("finite components")
    }

    pub fn minkowski4(&mut self, half_width: f64) -> FourVector {
        let s = self.spatial(half_width);
        FourVector::minkowski(self.uniform(-half_width, half_width), s.components())
            .expect("finite components")
    }

    /// Gaussian packet with moderate centers, order-one widths, and mild
    /// carrier momenta: well inside every check's quadrature comfort zone.
    pub fn packet(&mut self) -> GaussianPacket {
        let mut centers = [0.0; 4];
        let mut widths = [0.0; 4];
        let mut momenta = [0.0; 4];
        for a in 0..4 {
            centers[a] = self.uniform(-1.0, 1.0);
            widths[a] = self.uniform(0.7, 1.5);
            momenta[a] = self.uniform(-1.5, 1.5);
        }
        GaussianPacket::new(centers, widths, momenta).expect("valid packet parameters")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..32 {
            assert_eq!(a.uniform(-3.0, 3.0), b.uniform(-3.0, 3.0));
        }
        let (pa, pb) = (a.packet(), b.packet());
        assert_eq!(pa.centers(), pb.centers());
        assert_eq!(pa.widths(), pb.widths());
        assert_eq!(pa.momenta(), pb.momenta());
    }

    #[test]
    fn draws_stay_in_range() {
        let mut s = Sampler::new(1);
        for _ in 0..1000 {
            let x = s.uniform(2.0, 5.0);
            assert!((2.0..5.0).contains(&x));
        }
        let p = s.packet();
        assert!(p.widths().iter().all(|&w| (0.7..1.5).contains(&w)));
    }

    #[test]
    fn different_seeds_differ() {
        let mut a = Sampler::new(1);
        let mut b = Sampler::new(2);
        let va: Vec<f64> = (0..8).map(|_| a.uniform(0.0, 1.0)).collect();
        let vb: Vec<f64> = (0..8).map(|_| b.uniform(0.0, 1.0)).collect();
        assert_ne!(va, vb);
    }
}

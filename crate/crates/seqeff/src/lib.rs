//! Effects on finite-dimensional complex Hilbert spaces, the standard
//! effect algebra (E(H), 0, I, ⊕), sequential products built from spectral
//! function families A◇B = f_A(A)·B·f̄_A(A), and randomized verification
//! suites for the algebraic laws those products satisfy.
//!
//! Layering, bottom up:
//!
//! - [`matrix`]: dense complex matrices and tolerances;
//! - [`spectral`]: Hermitian eigendecomposition (cyclic Jacobi), functional
//!   calculus, PSD square roots, block-positivity, phase comparison;
//! - [`effect`]: validated effects, ⊕, complement, order, sharpness;
//! - [`family`]: product families, the sequential-product condition
//!   checkers, and the concrete families (square root, Borel t^{1/2+iλ},
//!   the dimension-2 per-eigenbasis family, two deliberately broken ones);
//! - [`verify`]: sample generators and the property suites;
//! - [`runner`]: batch orchestration shared by the CLI and tests.

pub mod matrix;
pub mod spectral;
pub mod effect;
pub mod family;
pub mod verify;
pub mod runner;

pub(crate) mod util {
    /// splitmix64 finalizer: cheap, well-mixed 64-bit hash step.
    pub(crate) fn splitmix64(mut x: u64) -> u64 {
        x = x.wrapping_add(0x9e3779b97f4a7c15);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
        x ^ (x >> 31)
    }
}

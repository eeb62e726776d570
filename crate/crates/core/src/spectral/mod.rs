//! Fourier-multiplier engine on periodic grids.

mod fft;
pub mod field;
pub mod grid;
pub mod multiplier;
pub mod norms;
pub mod random;

pub use field::{Field1D, Field2D, SpecField1D, SpecField2D};
pub use grid::{Grid1D, Grid2D};
pub use multiplier::{
    combined_anisotropic, dealias, dealias_1d, dealias_cutoff, dealias_in_place, derivative,
    derivative_1d, dir_frac_laplacian, frac_laplacian, frac_laplacian_1d, riesz, AnisoMode, Axis,
    Multiplier,
};
pub use norms::{Exponent, SUP_UPSAMPLING};
pub use random::{random_band_limited, random_band_limited_1d};

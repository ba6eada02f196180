//! Subsets as bitmasks, log-domain subset tables, and the convolution
//! engines over them.

mod direct;
mod fast;
mod fixed;
mod iterate;
mod mask;
mod modular;
mod table;

pub use direct::{direct_convolve, max_convolve, MaxConvolution};
pub use fast::{fast_convolve_exact, fast_convolve_float, MAX_QUANTIZATION_ERROR, MAX_SCALE_BITS};
pub use fixed::{mobius_transform, zeta_transform, FixedPointTable, DEFAULT_SCALE_BITS};
pub use iterate::{iterate_convolutions, Engine};
pub use mask::{submasks, Items, Submasks, SubsetMask, MAX_ITEMS};
pub use table::SubsetTable;

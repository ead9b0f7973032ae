//! Power-residue symbols, Gauss sums and smoothed Hecke character sums
//! over the Gaussian integers `Z[i]` and the Eisenstein integers `Z[w]`.

pub mod cli;
pub mod gauss_sums;
pub mod lattice;
pub mod numeric;
pub mod par;
pub mod quadrature;
pub mod rings;
pub mod sums;
pub mod symbols;
pub mod weights;

//! Exact complex linear algebra over a handful of two-level systems.
//!
//! Basis labels follow a single convention throughout the crate: site 0 is
//! the most significant bit of the basis index, so `|01⟩` is index 1 and the
//! state of site 0 is the left factor of every tensor product.
//!
//! State equality is always judged by [`fidelity`], never amplitude-wise,
//! because physically equivalent states may differ by a global phase.

mod density;
mod eigen;
mod operator;
mod state;

#[cfg(test)]
pub(crate) use state::apply_raw;

pub use density::{trace_distance, DensityMatrix};
pub use operator::{Operator, OperatorKind};
pub use state::{fidelity, inner_product, tensor_product, StateVector};

pub(crate) use eigen::hermitian_eigenvalues;

/// Complex amplitude type used everywhere in the crate.
pub type C64 = num_complex::Complex64;

/// Largest supported number of two-level systems (dimension 4096).
pub const MAX_SYSTEMS: usize = 12;

/// Tolerance for single-step algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Tolerance for results of chained computations.
pub const CHAINED_TOL: f64 = 1e-10;

/// Squared norms below this are treated as an annihilated state.
pub(crate) const ZERO_NORM_SQR: f64 = 1e-24;

/// Bit mask of `site` within a basis index of an `n`-system register.
#[inline]
pub(crate) fn site_mask(num_systems: usize, site: usize) -> usize {
    1 << (num_systems - 1 - site)
}

/// Validates a list of distinct, in-range sites.
pub(crate) fn check_sites(sites: &[usize], num_systems: usize) -> crate::Result<()> {
    let bad = || crate::Error::BadSites {
        sites: sites.to_vec(),
        num_systems,
    };
    if sites.is_empty() {
        return Err(bad());
    }
    for (i, &s) in sites.iter().enumerate() {
        if s >= num_systems || sites[..i].contains(&s) {
            return Err(bad());
        }
    }
    Ok(())
}

/// Spreads the `k` low bits of `pattern` onto `masks` (most significant
/// pattern bit goes to `masks[0]`).
#[inline]
pub(crate) fn scatter(pattern: usize, masks: &[usize]) -> usize {
    let k = masks.len();
    masks
        .iter()
        .enumerate()
        .filter(|(j, _)| (pattern >> (k - 1 - j)) & 1 == 1)
        .fold(0, |acc, (_, m)| acc | m)
}

//! Randomized testing of strict sign regularity of bivariate kernels.
//!
//! A kernel `K` is strictly sign regular on `X x Y` when, for every order
//! `m`, all minors `det[K(x_i, y_j)]` over increasing tuples share one
//! nonzero sign `eps(m)`; strictly totally positive when every `eps(m)` is
//! `+1`. The scan here can only sample tuples, so its verdicts are evidence
//! that no counterexample was found, not proofs.

mod kernel;
mod scan;

pub use kernel::{kernel_eval, Domain, Factor, KernelFamily, KernelSpec};
pub use scan::{
    composition_check, factor_invariance_check, ssr_minor, ssr_scan, CompositionCheck, FactorCheck, MinorSign,
    MinorStats, SsrReport, SsrVerdict, MAX_MINOR_ORDER, MIN_SEPARATION,
};

//! Determinants of the finite Hilbert matrix `H_{N,α}` and the operator
//! toolbox around their asymptotics.
//!
//! The leading behaviour is `ln det(I − (β/π)H_{N,α}) ≈ 2n_{α/2}(N)γ(β)`. The
//! modules build up to checking that numerically:
//!
//! * [`quadrature`]: adaptive Gauss–Legendre integration on finite, half-line
//!   and whole-line domains.
//! * [`matrix`]: Hilbert matrices, their spectra and determinant identities.
//! * [`asymptotics`]: the coefficient `γ(β)` by three routes, and the
//!   residual experiments.
//! * [`operator`]: integral kernels, Nyström discretizations and trace
//!   formulas.
//! * [`limit`]: the boundary case `β = 1`, Laguerre inequalities and trace
//!   chains.
//! * [`integrals`]: the `sech` integrals in closed form.
//! * [`report`]: CSV/JSON rows shared with the command-line tool.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod integrals;
pub mod limit;
pub mod matrix;
pub mod operator;
pub mod quadrature;
pub mod report;
pub mod special;

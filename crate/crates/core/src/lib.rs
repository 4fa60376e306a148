//! Numerical laboratory for ill-posedness of the generalized Boussinesq equation
//!
//! ```text
//! u_tt - u_xx + u_xxxx + (f(u))_xx = 0,   f(u) = ±u^p,
//! ```
//!
//! on the line and on the torus. The crate builds frequency-localized
//! initial data for which the `p`-th Fréchet derivative of the flow map at
//! zero is unbounded in `H^s`, evaluates that derivative exactly (torus) or
//! by quadrature (line), checks the resonance and counting arguments behind
//! the construction by enumeration, and integrates the equation itself with
//! a pseudospectral integrating-factor scheme.
//!
//! Modules, bottom-up:
//!
//! - [`spectral`]: dispersion relation, frequency sets, spectral data, Sobolev norms, free propagator.
//! - [`witness`]: the counterexample data and output windows.
//! - [`resonance`]: representations, resonance enclosures, class-count system.
//! - [`functional`]: the derivative functional `A_p` and growth tables.
//! - [`sim`]: the time integrator, a finite-difference derivative probe and the norm-inflation run.
//!
//! The `book/` directory next to the workspace explains the mathematics
//! chapter by chapter; its code listings are compiled as doctests of this crate.

pub mod error;
pub mod functional;
pub mod interval;
pub mod resonance;
pub mod sim;
pub mod spectral;
pub mod witness;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($($name:ident),*) => {$(
            #[doc = include_str!(concat!("../../../book/src/", stringify!($name), ".md"))]
            mod $name {}
        )*};
    }
    chapter!(introduction, spectral, witness, resonance, class_counts, derivative, simulator, cli);
}

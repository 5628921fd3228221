//! Falling factorial series solutions of linear difference equations with
//! polynomial coefficients.
//!
//! Coefficients are exact ([`scalar::ExactScalar`], Gaussian rationals);
//! evaluation uses MPFR complex floats ([`scalar::Cplx`]). The guide in
//! `book/` walks through the modules with runnable examples.

pub mod analysis;
pub mod basis;
pub mod catalog;
pub mod error;
pub mod interp;
pub mod json;
pub mod poly;
pub mod riccati;
pub mod scalar;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
pub use rug;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/bases.md")]
    pub mod bases {}
    #[doc = include_str!("../../../book/src/series.md")]
    pub mod series {}
    #[doc = include_str!("../../../book/src/equations.md")]
    pub mod equations {}
    #[doc = include_str!("../../../book/src/growth.md")]
    pub mod growth {}
    #[doc = include_str!("../../../book/src/riccati.md")]
    pub mod riccati {}
    #[doc = include_str!("../../../book/src/interpolation.md")]
    pub mod interpolation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}

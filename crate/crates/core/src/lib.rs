//! Exact engine for Markov categories.
//!
//! The crate is `no_std` (it needs `alloc`). It provides
//!
//! - [`kernel`]: the [`MarkovCategory`] interface every instance implements, a
//!   small string-diagram language ([`DiagramTerm`]) with a type checker and
//!   evaluator, and the generic predicates (determinism, almost-sure equality,
//!   conditional independence, causality) written once against the interface;
//! - four concrete instances with decidable morphism equality:
//!   [`finstoch`] (exact rational stochastic matrices), [`setmulti`]
//!   (nonempty-multivalued maps), [`cringplus`] (additive unital maps between
//!   integer polynomial rings, in the opposite direction) and [`vietoris`]
//!   (the lower Vietoris Kleisli category on finite spaces);
//! - [`projective`]: compatible families of finite marginals standing in for
//!   infinite tensor products, index injections acting on them, and
//!   window-level verifiers for the infinite-independence lemma, the
//!   determinism lemma, the Kolmogorov and Hewitt--Savage zero--one laws and
//!   the almost-sure equality lemma.
//!
//! Every equality is exact. Nothing here does IO.
//!
//! ```
//! use kolmo_core::finstoch::{FinSet, FinStoch, StochMatrix};
//! use kolmo_core::kernel::{predicates, MarkovCategory, Obj};
//! use kolmo_core::q;
//!
//! let x = Obj::atom(FinSet::new(["a", "b"]).unwrap());
//! let f = StochMatrix::new(
//!     x.clone(),
//!     x.clone(),
//!     vec![vec![q(1, 2), q(1, 2)], vec![q(0, 1), q(1, 1)]],
//! )
//! .unwrap();
//! assert!(!predicates::is_deterministic(&FinStoch, &f));
//! assert!(predicates::is_deterministic(&FinStoch, &FinStoch.copy(&x)));
//! ```

#![no_std]

extern crate alloc;

pub mod cringplus;
pub mod error;
pub mod finstoch;
pub mod kernel;
pub mod projective;
pub mod setmulti;
pub mod vietoris;

pub use error::{Error, Result};
pub use kernel::{CheckReport, DiagramTerm, LemmaReport, MarkovCategory, Obj, TensorSplit};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used by [`finstoch`].
pub type Q = BigRational;

/// Shorthand for the rational `num / den`.
///
/// # Panics
///
/// Panics if `den` is zero.
pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

//! Classification of orientably-regular maps of Euler characteristic `−2p²`
//! whose orientation-preserving automorphism group has order `10p²`.

pub mod aut;
pub mod census;
pub mod epi;
pub mod error;
pub mod grp;
pub mod modarith;

pub use aut::{automorphisms, Chirality, Classification, GroupAutomorphism, SkeClass};
pub use epi::{enumerate_skes, mirror, Embedding, Signature, Ske};
pub use error::{Error, Result};
pub use grp::{build_group, Element, FamilyTag, GroupSpec, UvPair};
pub use modarith::{derive_params, PrimeParams};

//! Permutations on 50 points and fully enumerated permutation groups.

pub mod cache;
mod group;
mod perm;

pub use group::{enumerate_group, EnumeratedGroup, SubgroupHandle};
pub use perm::{Permutation, DEGREE};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("expected {DEGREE} images, got {0}")]
    WrongDegree(usize),
    #[error("image array is not a bijection")]
    NotBijection,
    #[error("cap exceeded: closure has more than {0} elements")]
    CapExceeded(usize),
    #[error("element is not a member of the group")]
    NotMember,
    #[error("not conjugate")]
    NotConjugate,
    #[error("inconsistent element list: {0}")]
    InconsistentElements(String),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache file has the wrong magic bytes")]
    BadMagic,
    #[error("unsupported cache version {0}")]
    UnsupportedVersion(u32),
    #[error("cache file is truncated")]
    Truncated,
    #[error("cache checksum mismatch")]
    Checksum,
    #[error("cache row is not a permutation")]
    BadRow,
    #[error(transparent)]
    Group(#[from] PermError),
}

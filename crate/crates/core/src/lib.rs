//! Equivariant Hopf bifurcation with tetrahedral and octahedral symmetry on C³.

pub mod exact;
pub mod group;
pub mod twisted;
pub mod hmodk;
pub mod normalform;
pub mod branches;
pub mod odeverify;

//! Artin transfers from metabelian p-groups to their maximal subgroups:
//! closed-form images, kernels and transfer types, a brute-force oracle on
//! explicitly constructed groups, orbit classification of transfer types and
//! positions on the coclass tree of 3-groups.

pub mod pcgroup;
pub mod presentations;
pub mod transfer;
pub mod tree;
pub mod typeclass;

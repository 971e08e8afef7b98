//! Thick subcategories of finite triangulated presentations and the
//! universal space carrying supports for their objects.
//!
//! A [`Presentation`] lists indecomposables up to shift, distinguished
//! triangles, and optionally a tensor table. From it this crate computes
//! the lattice of thick subcategories ([`closure`], [`lattice`]), the
//! universal support space with its closed basis `sup(a) = {J : a ∉ J}`
//! and the unique morphism into it from any support datum ([`space`]), and
//! in the tensor case the spectrum of prime ideals ([`tensor`]).

pub mod bitset;
pub mod closure;
pub mod error;
pub mod lattice;
pub mod presentation;
pub mod space;
pub mod tensor;

pub use bitset::BitSet;
pub use closure::{
    brute_force_thick, enumerate_thick, object_in, thick_closure, IndecSet, ThickLattice, ThickSet,
};
pub use error::{Error, Result};
pub use lattice::{analyze, export_dot, join, meet, LatticeReport, Witness};
pub use presentation::{
    builtin, builtin_from_spec, parse_presentation, IndecId, ObjectExpr, Presentation, Triangle,
};
pub use space::{
    build_sp, check_morphism, check_support_datum, random_support_datum, universal_morphism,
    FinSpace, PointSet, SupportDatum, SupportMorphism, SupportReport, SupportSpace,
};
pub use tensor::{
    comparison_map, enumerate_ideals, ideal_closure, primes, verify_tt_support, CompressionReport,
    Spectrum, TensorTable,
};

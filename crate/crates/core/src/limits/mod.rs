//! Direct limits: index-aligned descriptors of subspaces and flags of
//! `V = span{e_i}` over an infinite index set, and their finite truncations.

pub mod checks;
mod descriptor;
mod flag;
mod index;
mod scenario;
mod template;

pub use descriptor::{
    closure_certified, perp_certified, Certificate, Descriptor, PairingDescriptor, SeqSubspace, StableSubspace,
};
pub use flag::{fl_stable, truncate_chain, ChainBlock, DescPair, FlagDescriptor, MemberFamily, Moving, PairBlock};
pub use index::{Direction, IndexDomain, IndexSet, Ray};
pub use scenario::{builtin, verify_level, verify_levels, Check, LevelOutcome, Scenario, VerifyReport, BUILTIN_NAMES};
pub use template::{Cmp, Family, FamilyKind, FamilyTerm, IndexExpr, Symbol, Template};

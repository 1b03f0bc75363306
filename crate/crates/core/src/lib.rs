//! Norton algebras of Cayley graphs over finite abelian groups, computed with
//! exact cyclotomic arithmetic.

pub mod autos;
pub mod cayley;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod fq;
pub mod groups;
pub mod linalg;
pub mod norton;
pub mod trees;

pub use autos::{BasisMap, BilinearAuto, HammingAuto, SignedPermutation};
pub use cayley::{CayleyGraph, Spectrum};
pub use cyclotomic::{Cyclotomic, Rational};
pub use error::{Error, Result};
pub use families::{make_family, FamilyKind, FamilySpec, SubsetIndex};
pub use groups::{CharIndex, Group, GroupElement};
pub use norton::{AlgebraVector, MonomialTable};
pub use trees::{BinaryOp, BinaryTree, CountMode, SpectrumReport};

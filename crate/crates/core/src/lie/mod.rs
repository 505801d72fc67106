//! Matrix Lie algebras on `Q^n`: the classical ambients, subalgebras given
//! by flags, and the structure checks run on them.

mod ambient;
mod chain;
mod element;
mod stabilizer;
mod subalgebra;
mod tensor;
mod toral;

pub use ambient::{Ambient, AmbientKind};
pub use chain::{flag_of_borel, stable_maximal_chain};
pub use element::{element_type, ElementType};
pub use stabilizer::{nilpotent_subalgebra, stabilizer, StabMode};
pub use subalgebra::{
    borel_dimension, generated_subalgebra, generates_solvable, is_maximal_solvable, normalizer, solvable_extension,
    LieSubalgebra,
};
pub use tensor::{embed_tensor, tensor_space, TensorKind};
pub use toral::{canonical_line_system, toral_subalgebra, LineSystem};

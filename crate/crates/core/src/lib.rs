//! Idempotent right quasigroups (irqs) and the structures that emerge from
//! them as limits: tangent contractible groups, reconstructed groups,
//! right division and symmetric-space operations, and derivatives.

pub mod axioms;
pub mod calculus;
pub mod carriers;
pub mod division;
pub mod element;
pub mod emergent;
pub mod error;
pub mod irq;
pub mod sampling;

pub use axioms::{check_irq_axioms, AxiomReport};
pub use element::{Element, Real};
pub use error::{IrqError, Result};
pub use irq::{back_k, difference_k, inverse_k, star_k, sum_k, Descriptor, Irq, IterExponent};
pub use sampling::Sampling;

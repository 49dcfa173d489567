//! Concrete irqs.

mod carnot;
mod dihedral;
mod euclidean;
mod group;
mod hyperbolic;
mod lie;

pub use carnot::{
    make_carnot, make_engel, make_heisenberg, CarnotGroup, CarnotIrq, GradedDilation,
    HeisenbergGroup, HeisenbergIrq,
};
pub use dihedral::{make_dihedral_quandle, DihedralQuandle};
pub use euclidean::{
    make_euclidean, make_sine_shear, EuclideanIrq, IdentityMap, ScalarDilation, SineShear,
    VectorSpace,
};
pub use group::{make_group_irq, Dilation, Group, GroupIrq, GroupMetric, GroupStructure};
pub use hyperbolic::{make_hyperbolic, HyperbolicPlane};
pub use lie::{AlgebraSpec, BracketSpec, GradedLieAlgebra, MAX_STEP};

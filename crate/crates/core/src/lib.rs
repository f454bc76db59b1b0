//! Numerical toolkit for diffeological geometry: tangent cones of embedded
//! spaces, gradient descent on shape spaces of planar curves, geometric
//! integrators on matrix Lie groups, and refinement of planar triangulations.

pub mod descent;
pub mod diffeo;
pub mod lie;
pub mod mesh;
pub mod shape;
pub mod smooth;

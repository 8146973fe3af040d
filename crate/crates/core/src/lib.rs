//! Exact convex combinations of tours for cyclic and uniform points of the
//! subtour polytope.

pub mod blossom;
pub mod connectors;
pub mod cuts;
pub mod cyclic;
pub mod decomp;
pub mod error;
pub mod generators;
pub mod gluer;
pub mod graph;
pub mod io;
pub mod lp;
pub mod matchings;
pub mod matroid;
pub mod oracle;
pub mod parity;
pub mod patterns;
pub mod rational;
pub mod uniform;

pub use cyclic::CyclicPoint;
pub use error::{CyclicViolation, Error, Result};
pub use graph::{ConvexCombination, EdgeVector, Graph, Multigraph};
pub use patterns::{Pattern, Profile};
pub use rational::Rational;

//! Exact internal-space geometry: window pieces, supporting hyperplanes, arrangements.

pub mod arrangement;
pub mod polytope;

pub use arrangement::{arrangement_census, Arrangement, Face};
pub use polytope::{cmp_vec, convex_hull, interiors_disjoint, polygon_area, Halfspace, Hyperplane, Location, Side, SupportSet, Window, WindowPolytope};

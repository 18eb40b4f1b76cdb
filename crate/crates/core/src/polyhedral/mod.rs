//! Exact cones and fans.

mod cone;
mod dd;
mod fan;

pub use cone::{arrangement_regions, Cone, Membership};
pub use fan::{fan_from_maximal, Fan};
pub(crate) use cone::unit as unit_vector;

use crate::error::Result;
use crate::exact_linalg::{QVector, ZVector};

/// Facet normals and span equations of `cone(generators)`.
pub fn dual_description(ambient_dim: usize, generators: &[ZVector]) -> Result<(Vec<ZVector>, Vec<ZVector>)> {
    let c = Cone::from_generators(ambient_dim, generators)?;
    Ok((c.facets().to_vec(), c.span_equations().to_vec()))
}

pub fn contains(c: &Cone, p: &QVector, mode: Membership) -> Result<bool> {
    c.contains(p, mode)
}

pub fn intersect(c1: &Cone, c2: &Cone) -> Result<Cone> {
    c1.intersect(c2)
}

pub fn faces(c: &Cone) -> Vec<Cone> {
    c.faces()
}

pub fn stellar_subdivide(f: &Fan, ray: &QVector) -> Result<Fan> {
    f.stellar_subdivide(ray)
}

pub fn iterated_stellar(f: &Fan, rays: &[QVector]) -> Result<Fan> {
    f.iterated_stellar(rays)
}

pub fn is_subfan(f1: &Fan, f2: &Fan) -> bool {
    f1.is_subfan(f2)
}

//! GIT-fan of the `H`-action on the cone over `Gr(2, n+1)` and the ambient fans
//! built from it.

mod centers;
mod delta;
mod sigma;
pub mod verify;

pub use centers::{center_ideal, center_pullback, cox_variables, displayed_center_generators, CenterIdeal, Poly};
pub use delta::{delta_reduction, gkz_cone, verify_delta_subfan, verify_ray_classification, GkzContext, MAX_DELTA_N};
pub use sigma::{
    envelope_sets, lambda0, lambda1, nu_order, nu_order_alternate, nu_ray, nu_vector, sigma_carrier, sigma_fan,
    sigma_r, sigma_r_with_order, EnvelopeSets, PipelineFans,
};

use rayon::prelude::*;

use crate::error::{guard, Error, Result};
use crate::exact_linalg::{QVector, ZVector};
use crate::grassmann::{enumerate_y_sets, two_block_normal, two_blocks, WeightData, YSet};
use crate::polyhedral::{arrangement_regions, Cone, Fan, Membership};

/// Largest `n` accepted by the fan constructions of this module.
pub const MAX_FAN_N: usize = 5;

/// `λ(w)` together with the `(*)`-sets `I` with `w ∈ ω_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GitChamber {
    pub cone: Cone,
    pub defining_ysets: Vec<YSet>,
}

/// `Ω = Q^n_{>=0}`.
pub fn omega(n: usize) -> Result<Cone> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    Ok(Cone::orthant(n))
}

/// `Ω* = cone(e_i + e_j; 1 <= i < j <= n)`.
pub fn omega_star(n: usize) -> Result<Cone> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    let gens: Vec<ZVector> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| crate::exact_linalg::zadd(&unit(n, i), &unit(n, j))))
        .collect();
    Cone::from_generators(n, &gens)
}

fn unit(n: usize, i: usize) -> ZVector {
    let mut e = vec![num_bigint::BigInt::from(0); n];
    e[i] = num_bigint::BigInt::from(1);
    e
}

/// Weight data, `(*)`-sets and their cones `ω_I` for one `n`.
#[derive(Clone, Debug)]
pub struct GitContext {
    wd: WeightData,
    star: bool,
    ysets: Vec<YSet>,
    omegas: Vec<Cone>,
}

impl GitContext {
    /// Context for the action on `Ȳ`.
    pub fn new(n: usize) -> Result<GitContext> {
        Self::build(n, false)
    }

    /// Context for the action on `Ȳ*`: only sets avoiding the index `0`.
    pub fn new_star(n: usize) -> Result<GitContext> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("Ω* is full-dimensional only for n >= 3, got {n}")));
        }
        Self::build(n, true)
    }

    fn build(n: usize, star: bool) -> Result<GitContext> {
        guard("GIT-fan computation", n, MAX_FAN_N)?;
        let wd = WeightData::new(n)?;
        let ysets: Vec<YSet> =
            enumerate_y_sets(n)?.into_iter().filter(|i| !star || i.avoids_zero()).collect();
        let omegas = ysets.par_iter().map(|i| wd.omega(i)).collect::<Result<Vec<_>>>()?;
        Ok(GitContext { wd, star, ysets, omegas })
    }

    pub fn n(&self) -> usize {
        self.wd.n()
    }

    pub fn weights(&self) -> &WeightData {
        &self.wd
    }

    pub fn is_star(&self) -> bool {
        self.star
    }

    pub fn ysets(&self) -> &[YSet] {
        &self.ysets
    }

    pub fn omega_of(&self, k: usize) -> &Cone {
        &self.omegas[k]
    }

    /// `Ω` or `Ω*`.
    pub fn support(&self) -> Result<Cone> {
        if self.star {
            omega_star(self.n())
        } else {
            omega(self.n())
        }
    }

    /// `λ(w) = ⋂ { ω_I : w ∈ ω_I }`.
    pub fn chamber(&self, w: &QVector) -> Result<GitChamber> {
        if w.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: w.dim() });
        }
        if !self.support()?.contains(w, Membership::Closed)? {
            return Err(Error::OutsideCone(if self.star { "Ω*" } else { "Ω" }));
        }
        let p = w.to_primitive();
        let hits: Vec<usize> =
            (0..self.ysets.len()).filter(|&k| self.omegas[k].contains_int(&p, Membership::Closed)).collect();
        let cone = Cone::intersect_all(self.n(), hits.iter().map(|&k| &self.omegas[k]))?;
        Ok(GitChamber { cone, defining_ysets: hits.iter().map(|&k| self.ysets[k]).collect() })
    }

    /// Regions of the support cut out by all hyperplanes `ℋ_R`.
    pub fn wall_regions(&self) -> Result<Vec<Cone>> {
        let normals: Vec<ZVector> = two_blocks(self.n())?.iter().map(two_block_normal).collect();
        arrangement_regions(&self.support()?, &normals)
    }

    /// Fan of the `ℋ_R`-regions of the support.
    pub fn wall_fan(&self) -> Result<Fan> {
        Fan::from_maximal(self.n(), self.wall_regions()?)
    }

    /// Fan of the chambers `λ(w)` at one representative per region.
    pub fn git_fan(&self) -> Result<Fan> {
        let chambers = self
            .wall_regions()?
            .par_iter()
            .map(|r| self.chamber(&QVector::from_ints(&r.relint_rep())).map(|c| c.cone))
            .collect::<Result<Vec<_>>>()?;
        Fan::from_maximal(self.n(), chambers)
    }
}

pub fn git_fan(n: usize) -> Result<Fan> {
    GitContext::new(n)?.git_fan()
}

pub fn wall_fan(n: usize) -> Result<Fan> {
    GitContext::new(n)?.wall_fan()
}

pub fn git_fan_star(n: usize) -> Result<Fan> {
    GitContext::new_star(n)?.git_fan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::zvec;

    #[test]
    fn omega_examples() {
        let s = omega_star(3).unwrap();
        let o = omega(3).unwrap();
        assert_eq!(s.generators().len(), 3);
        assert!(o.contains_cone(&s) && !s.contains_cone(&o));
        let rep = QVector::from_ints(&s.relint_rep());
        assert_eq!(rep, QVector::from_i64(&[2, 2, 2]));
        for n in 2..=6 {
            assert!(omega(n).unwrap().contains_cone(&omega_star(n).unwrap()));
        }
    }

    #[test]
    fn chamber_examples() {
        let ctx = GitContext::new(3).unwrap();
        let inner = ctx.chamber(&QVector::from_i64(&[1, 1, 1])).unwrap();
        assert_eq!(inner.cone, omega_star(3).unwrap());
        let corner = ctx.chamber(&QVector::from_i64(&[3, 1, 1])).unwrap();
        assert_eq!(corner.cone, Cone::orthant(3).cut(&zvec(&[1, -1, -1])).unwrap());
        for w in [[1i64, 2, 2], [5, 1, 0], [0, 1, 1], [2, 3, 9]] {
            let c = ctx.chamber(&QVector::from_i64(&w)).unwrap();
            assert!(c.cone.contains(&QVector::from_i64(&w), Membership::Closed).unwrap());
        }
        assert!(matches!(ctx.chamber(&QVector::from_i64(&[-1, 1, 1])), Err(Error::OutsideCone(_))));
    }

    #[test]
    fn n3_fan_counts() {
        let ctx = GitContext::new(3).unwrap();
        let g = ctx.git_fan().unwrap();
        assert_eq!(g.maximal_cones().len(), 4);
        assert_eq!(g.walls().len(), 3);
        assert_eq!(g, ctx.wall_fan().unwrap());
        let star = git_fan_star(3).unwrap();
        assert_eq!(star.maximal_cones().len(), 1);
        assert!(star.is_subfan(&g));
    }
}

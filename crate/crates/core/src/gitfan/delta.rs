//! GKZ cones of `P` and the `Δ`-reduction `Σ^Δ`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::{GitContext, PipelineFans};
use crate::error::{guard, Result};
use crate::exact_linalg::{primitive, zneg, ZVector};
use crate::gitfan::sigma::{nu_order, nu_ray};
use crate::grassmann::{TreeSpace, WeightData};
use crate::polyhedral::{arrangement_regions, Cone, Fan, Membership};
use crate::report::{int_strings, Report};

/// Largest `n` for which all column subsets of `P` are enumerated.
pub const MAX_DELTA_N: usize = 4;

/// Cones spanned by all column subsets of `P`, and the hyperplanes spanned by columns.
#[derive(Clone, Debug)]
pub struct GkzContext {
    wd: WeightData,
    cones: Vec<Cone>,
    walls: Vec<ZVector>,
}

impl GkzContext {
    pub fn new(wd: &WeightData) -> Result<GkzContext> {
        guard("GKZ column-subset sweep", wd.n(), MAX_DELTA_N)?;
        let cols = wd.v_columns();
        let d = wd.p_dim();
        let mut cones: Vec<Cone> = (1u64..(1u64 << cols.len()))
            .into_par_iter()
            .map(|m| {
                let gens: Vec<ZVector> =
                    (0..cols.len()).filter(|&k| m >> k & 1 == 1).map(|k| cols[k].clone()).collect();
                Cone::from_generators(d, &gens)
            })
            .collect::<Result<Vec<_>>>()?;
        cones.sort();
        cones.dedup();
        let walls: BTreeSet<ZVector> = cones
            .iter()
            .filter(|c| c.dim() + 1 == d)
            .map(|c| {
                let h = primitive(c.span_equations()[0].clone());
                let lead = h.iter().find(|x| !x.is_zero()).expect("nonzero normal");
                if lead.is_negative() { zneg(&h) } else { h }
            })
            .collect();
        Ok(GkzContext { wd: wd.clone(), cones, walls: walls.into_iter().collect() })
    }

    pub fn walls(&self) -> &[ZVector] {
        &self.walls
    }

    /// `σ(v) = ⋂ { τ : v ∈ τ° }` over cones `τ` spanned by columns of `P`.
    pub fn gkz_cone(&self, v: &[num_bigint::BigInt]) -> Result<Cone> {
        Cone::intersect_all(
            self.wd.p_dim(),
            self.cones.iter().filter(|c| c.contains_int(v, Membership::RelativeInterior)),
        )
    }

    /// Maximal cones of `Σ^Δ`: `σ(p)` for one point `p` in each region cut
    /// out of the tree cones of `Δ` by the column-spanned hyperplanes.
    ///
    /// Each region lies in the relative interior of a single GKZ cone, and a
    /// GKZ cone meeting `Δ` only along region boundaries is a face of one of
    /// these, so the fan generated by them is all of `Σ^Δ`.
    pub fn delta_reduction(&self, ts: &TreeSpace) -> Result<Fan> {
        let per_tree: Vec<Vec<Cone>> = ts
            .cones()
            .par_iter()
            .map(|d| {
                arrangement_regions(d, &self.walls)?
                    .iter()
                    .map(|r| self.gkz_cone(&r.relint_rep()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::from_maximal(self.wd.p_dim(), per_tree.into_iter().flatten().collect())
    }
}

pub fn gkz_cone(wd: &WeightData, v: &[num_bigint::BigInt]) -> Result<Cone> {
    GkzContext::new(wd)?.gkz_cone(v)
}

pub fn delta_reduction(n: usize) -> Result<Fan> {
    guard("Δ-reduction", n, MAX_DELTA_N)?;
    let wd = WeightData::new(n)?;
    GkzContext::new(&wd)?.delta_reduction(&TreeSpace::new(&wd)?)
}

/// `Σ^Δ` is a subfan of `Σ_r`, cone by cone, and every maximal cone of `Σ^Δ` meets `Δ` in its relative interior.
pub fn verify_delta_subfan(n: usize) -> Result<Report> {
    guard("Δ-subfan verification", n, MAX_DELTA_N)?;
    let ctx = GitContext::new(n)?;
    let fans = PipelineFans::new(&ctx)?;
    let wd = ctx.weights();
    let ts = TreeSpace::new(wd)?;
    let sd = GkzContext::new(wd)?.delta_reduction(&ts)?;
    let mut rep = Report::new("delta-subfan", Some(n));
    let certs = sd.subfan_certificates(&fans.sigma_r);
    for (k, (c, m)) in sd.maximal_cones().iter().zip(&certs).enumerate() {
        let meets = ts.meets_relint(c)?;
        rep.check(
            m.is_some() && meets,
            json!({
                "delta_cone": k,
                "rays": c.generators().iter().map(int_strings).collect::<Vec<_>>(),
                "sigma_r_cone": m.map(|i| fans.sigma_r.cone_rays()[i].clone()),
                "relint_meets_delta": meets,
            }),
        );
    }
    rep.check(
        true,
        json!({
            "delta_maximal_cones": sd.maximal_cones().len(),
            "delta_rays": sd.rays().len(),
            "sigma_r_maximal_cones": fans.sigma_r.maximal_cones().len(),
            "sigma_r_rays": fans.sigma_r.rays().len(),
        }),
    );
    Ok(rep)
}

/// Rays of `Σ^Δ` against the candidates `v_η (η ∈ 𝐍)`, `v_{0i}` and `ν_R`,
/// plus the placement of `v_{01}` in `Σ₀`, `Σ₁` and of every `ν_R` in `Σ_r`.
pub fn verify_ray_classification(n: usize) -> Result<Report> {
    guard("ray classification", n, MAX_DELTA_N)?;
    let ctx = GitContext::new(n)?;
    let fans = PipelineFans::new(&ctx)?;
    let wd = ctx.weights();
    let sd = GkzContext::new(wd)?.delta_reduction(&TreeSpace::new(wd)?)?;
    let mut candidates: Vec<(String, ZVector)> = wd
        .n0()
        .iter()
        .map(|p| (format!("v_{}{}", p.i, p.j), primitive(wd.v(*p).clone())))
        .collect();
    let order = nu_order(n)?;
    for r in &order {
        candidates.push((format!("nu_{r}"), nu_ray(wd, r)?));
    }
    let mut rep = Report::new("rays", Some(n));
    for r in sd.rays() {
        let name = candidates.iter().find(|(_, v)| v == r).map(|(s, _)| s.clone());
        rep.check(name.is_some(), json!({ "delta_ray": int_strings(r), "candidate": name }));
    }
    let occurring: Vec<&String> =
        candidates.iter().filter(|(_, v)| sd.ray_index(v).is_some()).map(|(s, _)| s).collect();
    rep.check(true, json!({ "candidates_occurring": occurring }));
    let v01 = primitive(wd.v(crate::grassmann::PairIdx { i: 0, j: 1 }).clone());
    rep.check(
        fans.sigma1.ray_index(&v01).is_some() && fans.sigma0.ray_index(&v01).is_none(),
        json!({
            "v01_ray_of_sigma1": fans.sigma1.ray_index(&v01).is_some(),
            "v01_ray_of_sigma0": fans.sigma0.ray_index(&v01).is_some(),
        }),
    );
    for r in &order {
        let nu = nu_ray(wd, r)?;
        rep.check(fans.sigma_r.ray_index(&nu).is_some(), json!({ "nu": r.to_string(), "ray_of_sigma_r": true }));
    }
    Ok(rep)
}

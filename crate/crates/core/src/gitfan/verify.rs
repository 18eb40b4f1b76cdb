//! Machine checks of the structural claims, each returning a [`Report`].

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::delta::{verify_delta_subfan, verify_ray_classification};
use super::sigma::{nu_order, nu_order_alternate, nu_ray, nu_vector, sigma_carrier, sigma_r_with_order};
use super::{git_fan_star, omega_star, GitContext, PipelineFans};
use crate::error::{Error, Result};
use crate::exact_linalg::{primitive, rank_int, QVector, ZVector};
use crate::polyhedral::{Cone, Fan, Membership};
use crate::report::{int_strings, FanJson, Report};
use crate::semilattice::{criterion_sweep, face_poset, poset_isomorphic, ray_set_label, Label};

/// Default seed for randomized sweeps.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Number of random fans in the stellar/blow-up sweep.
pub const FK_BRIDGE_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    Walls,
    StarSubfan,
    FkBridge,
    BlowUpCriterion,
    DeltaSubfan,
    Rays,
    NuEquality,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::Walls,
        Claim::StarSubfan,
        Claim::FkBridge,
        Claim::BlowUpCriterion,
        Claim::DeltaSubfan,
        Claim::Rays,
        Claim::NuEquality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Walls => "walls",
            Claim::StarSubfan => "star-subfan",
            Claim::FkBridge => "fk-bridge",
            Claim::BlowUpCriterion => "thm44",
            Claim::DeltaSubfan => "delta-subfan",
            Claim::Rays => "rays",
            Claim::NuEquality => "nu-equality",
        }
    }

    pub fn parse(s: &str) -> Option<Claim> {
        Claim::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Whether the claim is meaningful at `n`; `None` for claims independent of `n`.
    pub fn applies(self, n: usize) -> Option<bool> {
        match self {
            Claim::Walls => Some(n >= 2),
            Claim::StarSubfan => Some(n >= 3),
            Claim::DeltaSubfan | Claim::Rays => Some((3..=super::delta::MAX_DELTA_N).contains(&n)),
            Claim::NuEquality => Some(n >= 4),
            Claim::FkBridge | Claim::BlowUpCriterion => None,
        }
    }
}

fn timed(f: impl FnOnce() -> Result<Report>) -> Result<Report> {
    let start = Instant::now();
    let mut r = f()?;
    r.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

pub fn run_claim(claim: Claim, n: usize, seed: u64) -> Result<Report> {
    match claim {
        Claim::Walls => verify_walls(n),
        Claim::StarSubfan => verify_star_subfan(n),
        Claim::FkBridge => verify_fk_bridge(seed, FK_BRIDGE_SAMPLES),
        Claim::BlowUpCriterion => verify_blow_up_criterion(),
        Claim::DeltaSubfan => timed(|| verify_delta_subfan(n)),
        Claim::Rays => timed(|| verify_ray_classification(n)),
        Claim::NuEquality => verify_nu_equality(n),
    }
}

/// Chamber enumeration equals the fan built from the walls `ℋ_R`; every chamber is
/// the intersection of its defining `ω_I`.
pub fn verify_walls(n: usize) -> Result<Report> {
    timed(|| {
        let ctx = GitContext::new(n)?;
        let g = ctx.git_fan()?;
        let w = ctx.wall_fan()?;
        let mut rep = Report::new("walls", Some(n));
        let star = if n >= 3 { Some(omega_star(n)?) } else { None };
        for c in g.maximal_cones() {
            let ch = ctx.chamber(&QVector::from_ints(&c.relint_rep()))?;
            let recomputed = Cone::intersect_all(
                n,
                ch.defining_ysets.iter().map(|i| ctx.weights().omega(i)).collect::<Result<Vec<_>>>()?.iter(),
            )?;
            rep.check(
                ch.cone == *c && recomputed == *c,
                json!({
                    "chamber_rays": c.generators().iter().map(int_strings).collect::<Vec<_>>(),
                    "defining_ysets": ch.defining_ysets.len(),
                    "inside_omega_star": star.as_ref().map(|s| s.contains_cone(c)),
                }),
            );
        }
        let inside = star.as_ref().map(|s| g.maximal_cones().iter().filter(|c| s.contains_cone(c)).count());
        rep.check(
            g == w,
            json!({
                "git_fan_equals_wall_fan": g == w,
                "maximal_chambers": g.maximal_cones().len(),
                "walls": g.walls().len(),
                "maximal_inside_omega_star": inside,
            }),
        );
        Ok(rep)
    })
}

/// `Λ_H(Ȳ*)` is a subfan of `Λ_H(Ȳ)`.
pub fn verify_star_subfan(n: usize) -> Result<Report> {
    timed(|| {
        let g = GitContext::new(n)?.git_fan()?;
        let s = git_fan_star(n)?;
        let mut rep = Report::new("star-subfan", Some(n));
        for (c, m) in s.maximal_cones().iter().zip(s.subfan_certificates(&g)) {
            rep.check(
                m.is_some(),
                json!({
                    "star_cone": c.generators().iter().map(int_strings).collect::<Vec<_>>(),
                    "git_fan_cone": m,
                }),
            );
        }
        rep.check(s.is_subfan(&g), json!({ "star_maximal_cones": s.maximal_cones().len() }));
        Ok(rep)
    })
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> ZVector {
    (0..d).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()
}

fn relint_point(rng: &mut ChaCha8Rng, f: &Fan, cone: &[usize]) -> ZVector {
    let d = f.ambient_dim();
    let mut p = vec![BigInt::from(0); d];
    for &k in cone {
        let a = BigInt::from(rng.gen_range(1i64..=3));
        for (x, r) in p.iter_mut().zip(&f.rays()[k]) {
            *x += &a * r;
        }
    }
    primitive(p)
}

/// A random simplicial fan with at most `max_rays - 1` rays in dimension 2..=4.
pub fn random_simplicial_fan(rng: &mut ChaCha8Rng, max_rays: usize) -> Result<Fan> {
    let d = rng.gen_range(2usize..=4);
    let mut f = if rng.gen_bool(0.5) {
        let gens = loop {
            let g: Vec<ZVector> = (0..d).map(|_| random_vector(rng, d)).collect();
            if rank_int(&g, d) == d {
                break g;
            }
        };
        Fan::from_maximal(d, vec![Cone::from_generators(d, &gens)?])?
    } else {
        let mut rays: Vec<ZVector> = (0..d).map(|i| crate::polyhedral::unit_vector(d, i)).collect();
        rays.push(vec![BigInt::from(-1); d]);
        let cones = (0..=d)
            .map(|skip| {
                let g: Vec<ZVector> =
                    rays.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, r)| r.clone()).collect();
                Cone::from_generators(d, &g)
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::from_maximal(d, cones)?
    };
    let steps = rng.gen_range(0..=max_rays.saturating_sub(1 + f.rays().len()));
    for _ in 0..steps {
        let all: Vec<Vec<usize>> = f.all_cones().into_iter().filter(|c| !c.is_empty()).collect();
        let c = &all[rng.gen_range(0..all.len())];
        let p = relint_point(rng, &f, c);
        f = f.stellar_subdivide(&QVector::from_ints(&p))?;
    }
    Ok(f)
}

/// `face_poset(stellar(Σ, ρ)) ≅ Bl_ξ(face_poset(Σ))` where `ξ` is the carrier of `ρ`.
pub fn verify_fk_bridge(seed: u64, samples: usize) -> Result<Report> {
    timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rep = Report::new("fk-bridge", None);
        let mut failures = 0usize;
        for k in 0..samples {
            let f = random_simplicial_fan(&mut rng, 7)?;
            let all: Vec<Vec<usize>> = f.all_cones().into_iter().filter(|c| !c.is_empty()).collect();
            let c = all[rng.gen_range(0..all.len())].clone();
            let p = relint_point(&mut rng, &f, &c);
            if f.carrier(&p).as_deref() != Some(c.as_slice()) {
                return Err(Error::Internal("sample point not interior to its cone".into()));
            }
            let sub = f.stellar_subdivide(&QVector::from_ints(&p))?;
            let l = face_poset(&f);
            let xi = l
                .index_of(&Label::atom(ray_set_label(&c)))
                .ok_or_else(|| Error::Internal("carrier missing from face poset".into()))?;
            let ok = poset_isomorphic(&face_poset(&sub), &l.blow_up(xi)?) && sub.rays().len() <= 7;
            if !ok {
                failures += 1;
                rep.check(
                    false,
                    json!({
                        "sample": k,
                        "fan": FanJson::new(f.ambient_dim(), &f),
                        "ray": int_strings(&p),
                    }),
                );
            }
        }
        rep.check(true, json!({ "seed": seed, "samples": samples, "failures": failures }));
        Ok(rep)
    })
}

/// Exhaustive criterion sweep on the face posets of `ℚ²_{>=0}` and `ℚ³_{>=0}`.
pub fn verify_blow_up_criterion() -> Result<Report> {
    timed(|| {
        let mut rep = Report::new("thm44", None);
        for d in [2, 3] {
            let l = face_poset(&Fan::from_maximal(d, vec![Cone::orthant(d)])?);
            let s = criterion_sweep(&l)?;
            rep.check(
                s.counterexamples.is_empty(),
                json!({
                    "orthant_dim": d,
                    "families": s.families,
                    "instances": s.instances,
                    "criterion_holds": s.criterion_holds,
                    "counterexamples": s.counterexamples,
                }),
            );
        }
        Ok(rep)
    })
}

/// Both block expressions of `ν_R` agree, `σ_R ∈ Σ₁` carries `ν_R` in its relative
/// interior, and `Σ_r` does not depend on the chosen linear extension.
pub fn verify_nu_equality(n: usize) -> Result<Report> {
    timed(|| {
        let ctx = GitContext::new(n)?;
        let fans = PipelineFans::new(&ctx)?;
        let wd = ctx.weights();
        let mut rep = Report::new("nu-equality", Some(n));
        for r in nu_order(n)? {
            let a = nu_vector(wd, r.block());
            let b = nu_vector(wd, &r.complement_block());
            let nu = nu_ray(wd, &r).ok();
            let carrier = sigma_carrier(wd, &r)?;
            let in_sigma1 = fans.sigma1.has_cone(&carrier);
            let interior = nu.as_ref().is_some_and(|v| carrier.contains_int(v, Membership::RelativeInterior));
            rep.check(
                a == b && in_sigma1 && interior,
                json!({
                    "partition": r.to_string(),
                    "a_expression": int_strings(&a),
                    "complement_expression": int_strings(&b),
                    "carrier_in_sigma1": in_sigma1,
                    "nu_in_carrier_relint": interior,
                }),
            );
        }
        let alt = sigma_r_with_order(wd, &fans.sigma1, &nu_order_alternate(n)?)?;
        rep.check(
            true,
            json!({
                "sigma_r_rays": fans.sigma_r.rays().len(),
                "sigma1_rays": fans.sigma1.rays().len(),
                "extension_independent": alt == fans.sigma_r,
            }),
        );
        Ok(rep)
    })
}

/// Every claim applicable at `n`.
pub fn verify_all(n: usize, seed: u64) -> Result<Vec<Report>> {
    Claim::ALL
        .into_iter()
        .filter(|c| c.applies(n).unwrap_or(true))
        .map(|c| run_claim(c, n, seed))
        .collect()
}

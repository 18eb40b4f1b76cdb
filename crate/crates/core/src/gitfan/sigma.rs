//! Chambers `λ₀`, `λ₁`, their enveloping sets, the fans `Σ₀`, `Σ₁`, and the
//! iterated stellar subdivision `Σ_r` in the rays `ν_R`.

use num_bigint::BigInt;

use super::{GitChamber, GitContext};
use crate::error::{Error, Result};
use crate::exact_linalg::{primitive, QVector, ZVector};
use crate::grassmann::{true_two_blocks, PairIdx, TwoBlock, WeightData, YSet};
use crate::polyhedral::{Cone, Fan, Membership};

fn linear_form(n: usize, plus: &[usize]) -> ZVector {
    (1..=n).map(|k| BigInt::from(if plus.contains(&k) { 1 } else { -1 })).collect()
}

fn certified(ctx: &GitContext, cone: Cone, what: &str) -> Result<GitChamber> {
    let ch = ctx.chamber(&QVector::from_ints(&cone.relint_rep()))?;
    if ch.cone != cone {
        return Err(Error::Internal(format!("{what} is not a chamber of the GIT-fan")));
    }
    Ok(ch)
}

fn orthant_inequalities(n: usize) -> Vec<ZVector> {
    (0..n)
        .map(|i| {
            let mut e = vec![BigInt::from(0); n];
            e[i] = BigInt::from(1);
            e
        })
        .collect()
}

/// `λ₀ = Ω ∩ {f₁ >= 0}`.
pub fn lambda0(ctx: &GitContext) -> Result<GitChamber> {
    let n = ctx.n();
    if n < 3 || ctx.is_star() {
        return Err(Error::InvalidInput("λ₀ needs n >= 3 and the full action".into()));
    }
    let mut ineqs = orthant_inequalities(n);
    ineqs.push(linear_form(n, &[1]));
    certified(ctx, Cone::from_constraints(n, &ineqs, &[])?, "λ₀")
}

/// `λ₁ = Ω ∩ {f₁ <= 0, f₁ⱼ >= 0 for j = 2..n}`.
pub fn lambda1(ctx: &GitContext) -> Result<GitChamber> {
    let n = ctx.n();
    if n < 3 || ctx.is_star() {
        return Err(Error::InvalidInput("λ₁ needs n >= 3 and the full action".into()));
    }
    let mut ineqs = orthant_inequalities(n);
    ineqs.push(crate::exact_linalg::zneg(&linear_form(n, &[1])));
    ineqs.extend((2..=n).map(|j| linear_form(n, &[1, j])));
    certified(ctx, Cone::from_constraints(n, &ineqs, &[])?, "λ₁")
}

/// `envs(λ)`: sets `I` containing a `(*)`-set `J` with `λ° ⊆ ω_J° ⊆ ω_I°`.
///
/// For full-dimensional `λ` the condition reduces to `λ ⊆ ω_J`, so the family
/// is the up-closure of the qualifying `J`; only its minimal members are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeSets {
    pub chamber: Cone,
    pub minimal: Vec<YSet>,
}

impl EnvelopeSets {
    pub fn contains(&self, i: &YSet) -> bool {
        self.minimal.iter().any(|j| j.is_subset(i))
    }

    /// Every enveloping set, in increasing bitmask order.
    pub fn all(&self) -> Vec<YSet> {
        let Some(first) = self.minimal.first() else { return Vec::new() };
        let n = first.n();
        let width = crate::grassmann::num_pairs(n);
        (0u64..(1u64 << width)).map(|m| YSet::from_mask(n, m)).filter(|i| self.contains(i)).collect()
    }
}

pub fn envelope_sets(ctx: &GitContext, lam: &GitChamber) -> Result<EnvelopeSets> {
    if !lam.cone.is_full_dimensional() {
        return Err(Error::InvalidInput("enveloping sets need a full-dimensional chamber".into()));
    }
    let qualifying: Vec<YSet> = (0..ctx.ysets().len())
        .filter(|&k| ctx.omega_of(k).contains_cone(&lam.cone))
        .map(|k| ctx.ysets()[k])
        .collect();
    let minimal = qualifying
        .iter()
        .copied()
        .filter(|j| !qualifying.iter().any(|o| o != j && o.is_subset(j)))
        .collect();
    Ok(EnvelopeSets { chamber: lam.cone.clone(), minimal })
}

/// `Σ = { cone(v_η; η ∉ I) : I ∈ envs(λ) }`, validated.
pub fn sigma_fan(wd: &WeightData, env: &EnvelopeSets) -> Result<Fan> {
    let cones = env.minimal.iter().map(|j| wd.v_cone(&j.complement())).collect::<Result<Vec<_>>>()?;
    Fan::from_maximal(wd.p_dim(), cones)
}

/// `P · u_A` with `u_A = Σ_{i∈A} e_{0i} + 2 Σ_{j<k∈A} e_{jk}`.
pub fn nu_vector(wd: &WeightData, a: &[usize]) -> ZVector {
    let u: ZVector = wd
        .n0()
        .iter()
        .map(|p| {
            let inside = |k: usize| a.contains(&k);
            BigInt::from(if p.i == 0 && inside(p.j) {
                1
            } else if p.i > 0 && inside(p.i) && inside(p.j) {
                2
            } else {
                0
            })
        })
        .collect();
    wd.apply_p(&u)
}

/// Primitive generator of `ν_R`; both block expressions must agree.
pub fn nu_ray(wd: &WeightData, r: &TwoBlock) -> Result<ZVector> {
    if !r.is_true() {
        return Err(Error::InvalidInput(format!("{r} is not a true two-block partition")));
    }
    let a = nu_vector(wd, r.block());
    let b = nu_vector(wd, &r.complement_block());
    if a != b {
        return Err(Error::Internal(format!("block expressions of ν for {r} differ")));
    }
    Ok(primitive(a))
}

/// `σ_R = cone(v_η; η ⊆ {0} ∪ A_R)`.
pub fn sigma_carrier(wd: &WeightData, r: &TwoBlock) -> Result<Cone> {
    let a = r.canonical();
    let inside = |k: usize| k == 0 || a.block().contains(&k);
    let gens: Vec<ZVector> =
        wd.n0().iter().filter(|p| inside(p.i) && inside(p.j)).map(|&p: &PairIdx| wd.v(p).clone()).collect();
    Cone::from_generators(wd.p_dim(), &gens)
}

/// True two-block partitions, descending `|A_R|`, lexicographic within a size.
pub fn nu_order(n: usize) -> Result<Vec<TwoBlock>> {
    let mut v = true_two_blocks(n)?;
    v.sort_by(|x, y| y.block().len().cmp(&x.block().len()).then_with(|| x.block().cmp(y.block())));
    Ok(v)
}

/// A second linear extension: descending `|A_R|`, reverse lexicographic within a size.
pub fn nu_order_alternate(n: usize) -> Result<Vec<TwoBlock>> {
    let mut v = true_two_blocks(n)?;
    v.sort_by(|x, y| y.block().len().cmp(&x.block().len()).then_with(|| y.block().cmp(x.block())));
    Ok(v)
}

/// Iterated stellar subdivision of `Σ₁` in `ν_R` for `R` in `order`, checking
/// before each step that `σ_R` is a cone of the current fan containing `ν_R` in
/// its relative interior.
pub fn sigma_r_with_order(wd: &WeightData, sigma1: &Fan, order: &[TwoBlock]) -> Result<Fan> {
    let mut f = sigma1.clone();
    for r in order {
        let nu = nu_ray(wd, r)?;
        let carrier = sigma_carrier(wd, r)?;
        if !f.has_cone(&carrier) {
            return Err(Error::Internal(format!("σ_R for {r} is not a cone of the current fan")));
        }
        if !carrier.contains_int(&nu, Membership::RelativeInterior) {
            return Err(Error::Internal(format!("ν_R for {r} is not interior to σ_R")));
        }
        f = f.stellar_subdivide(&QVector::from_ints(&nu))?;
    }
    Ok(f)
}

pub fn sigma_r(wd: &WeightData, sigma1: &Fan) -> Result<Fan> {
    sigma_r_with_order(wd, sigma1, &nu_order(wd.n())?)
}

/// `λ₀`, `λ₁`, `Σ₀`, `Σ₁` and `Σ_r` computed once.
#[derive(Clone, Debug)]
pub struct PipelineFans {
    pub lambda0: GitChamber,
    pub lambda1: GitChamber,
    pub sigma0: Fan,
    pub sigma1: Fan,
    pub sigma_r: Fan,
}

impl PipelineFans {
    pub fn new(ctx: &GitContext) -> Result<PipelineFans> {
        let wd = ctx.weights();
        let lambda0 = lambda0(ctx)?;
        let lambda1 = lambda1(ctx)?;
        let sigma0 = sigma_fan(wd, &envelope_sets(ctx, &lambda0)?)?;
        let sigma1 = sigma_fan(wd, &envelope_sets(ctx, &lambda1)?)?;
        let sigma_r = sigma_r(wd, &sigma1)?;
        Ok(PipelineFans { lambda0, lambda1, sigma0, sigma1, sigma_r })
    }
}

//! Blow-up center ideals `⟨χ^e; e ∈ E_I, ⟨e,f⟩ = c⟩` on `Z₀` and their pullbacks
//! to the chart with coordinates `T_i, S_i` (`i = 2..n`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{GitContext, PipelineFans};
use crate::error::{Error, Result};
use crate::exact_linalg::{primitive, solve, QMatrix, QVector, ZVector};
use crate::gitfan::sigma::nu_vector;
use crate::grassmann::{PairIdx, WeightData};
use crate::polyhedral::Fan;

/// Integer polynomial in `T₂..T_n, S₂..S_n`; exponent vectors list the `T`s first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(n: usize) -> Poly {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Poly {
        let mut p = Poly::zero(n);
        p.terms.insert(vec![0; 2 * (n - 1)], BigInt::one());
        p
    }

    fn var(n: usize, slot: usize) -> Poly {
        let mut e = vec![0; 2 * (n - 1)];
        e[slot] = 1;
        let mut p = Poly::zero(n);
        p.terms.insert(e, BigInt::one());
        p
    }

    /// `T_i`, `i ∈ 2..=n`.
    pub fn t(n: usize, i: usize) -> Poly {
        Poly::var(n, i - 2)
    }

    /// `S_i`, `i ∈ 2..=n`.
    pub fn s(n: usize, i: usize) -> Poly {
        Poly::var(n, n - 1 + i - 2)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.n), |acc, _| acc.mul(self))
    }

    /// Sign-normalized copy: the largest exponent vector has a positive coefficient.
    pub fn normalized(&self) -> Poly {
        match self.terms.iter().next_back() {
            Some((_, c)) if c.is_negative() => Poly::zero(self.n).sub(self),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let m = self.n - 1;
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(slot, &x)| {
                    let name = if slot < m { format!("T{}", slot + 2) } else { format!("S{}", slot - m + 2) };
                    if x == 1 { name } else { format!("{name}^{x}") }
                })
                .collect();
            if vars.is_empty() || !mag.is_one() {
                write!(f, "{mag}")?;
                if !vars.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Cox coordinates of `Z₀`: `𝐍₀ ∖ {01}` in pair order.
pub fn cox_variables(wd: &WeightData) -> Vec<PairIdx> {
    wd.n0().iter().copied().filter(|p| !(p.i == 0 && p.j == 1)).collect()
}

/// `S₀ᵢ ↦ Tᵢ`, `S₁ᵢ ↦ Sᵢ`, `S_jk ↦ T_j S_k − T_k S_j`.
fn pull_variable(n: usize, p: PairIdx) -> Poly {
    match (p.i, p.j) {
        (0, i) => Poly::t(n, i),
        (1, i) => Poly::s(n, i),
        (j, k) => Poly::t(n, j).mul(&Poly::s(n, k)).sub(&Poly::t(n, k).mul(&Poly::s(n, j))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterIdeal {
    pub n: usize,
    pub nu: Vec<String>,
    /// Rays `v_η` of the carrier of `ν` in `Σ₀`, i.e. `I`.
    pub support: Vec<PairIdx>,
    /// Minimal positive integers with `Σ α_η v_η ∈ ℚ_{>0} ν`.
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub alpha: Vec<BigInt>,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub c: BigInt,
    /// Indexed by the Cox variables `𝐍₀ ∖ {01}`.
    pub exponents: Vec<Vec<u32>>,
    pub pullback_generators: Vec<Poly>,
    pub displayed: Vec<Poly>,
    /// Pullback generators not among the displayed ones.
    pub extra: Vec<Poly>,
    /// Displayed generators not among the pullback ones.
    pub missing: Vec<Poly>,
}

fn lcm_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

/// Exponent vectors `e ∈ ℤ^k_{>=0}` with `Σ α_i e_i = c`; each entry is at most `c`.
fn exponents_on(alpha: &[BigInt], c: &BigInt) -> Vec<Vec<u32>> {
    fn go(alpha: &[BigInt], rest: &BigInt, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let k = cur.len();
        if k == alpha.len() {
            if rest.is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0u32;
        let mut used = BigInt::zero();
        while &used <= rest {
            cur.push(e);
            go(alpha, &(rest - &used), cur, out);
            cur.pop();
            e += 1;
            used += &alpha[k];
        }
    }
    let mut out = Vec::new();
    go(alpha, c, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Literal center ideal of `ν` on `Z₀` and its pullback.
///
/// `displayed` is filled by callers that know a reference generator list; here it is empty.
pub fn center_ideal(wd: &WeightData, sigma0: &Fan, nu: &[BigInt]) -> Result<CenterIdeal> {
    let n = wd.n();
    let nu = primitive(nu.to_vec());
    let carrier = sigma0.carrier(&nu).ok_or(Error::OutsideCone("|Σ₀|"))?;
    if carrier.is_empty() {
        return Err(Error::InvalidInput("ν is zero".into()));
    }
    let rays: Vec<&ZVector> = carrier.iter().map(|&k| &sigma0.rays()[k]).collect();
    let vars = cox_variables(wd);
    let mut support: Vec<PairIdx> = rays
        .iter()
        .map(|r| {
            vars.iter()
                .copied()
                .find(|&p| &primitive(wd.v(p).clone()) == *r)
                .ok_or_else(|| Error::Internal("carrier ray is not a Cox column".into()))
        })
        .collect::<Result<_>>()?;
    support.sort();
    let cols: Vec<ZVector> = support.iter().map(|&p| wd.v(p).clone()).collect();
    if crate::exact_linalg::rank_int(&cols, wd.p_dim()) != cols.len() {
        return Err(Error::NotSimplicial);
    }
    let m = QMatrix::from_int_rows(wd.p_dim(), &cols)?.transpose();
    let x = solve(&m, &QVector::from_ints(&nu))?
        .ok_or_else(|| Error::Internal("ν is not in the span of its carrier".into()))?;
    if x.entries().iter().any(|a| !a.is_positive()) {
        return Err(Error::Internal("carrier coordinates of ν are not positive".into()));
    }
    let alpha = x.to_primitive();
    let c = lcm_all(&alpha);
    let local = exponents_on(&alpha, &c);
    let exponents: Vec<Vec<u32>> = local
        .iter()
        .map(|e| {
            vars.iter().map(|p| support.iter().position(|q| q == p).map_or(0, |k| e[k])).collect()
        })
        .collect();
    let mut pullback: Vec<Poly> = exponents
        .iter()
        .map(|e| {
            vars.iter()
                .zip(e)
                .fold(Poly::one(n), |acc, (&p, &k)| acc.mul(&pull_variable(n, p).pow(k)))
                .normalized()
        })
        .collect();
    pullback.sort();
    pullback.dedup();
    Ok(CenterIdeal {
        n,
        nu: nu.iter().map(|x| x.to_string()).collect(),
        support,
        alpha,
        c,
        exponents,
        pullback_generators: pullback.clone(),
        displayed: Vec::new(),
        extra: pullback,
        missing: Vec::new(),
    })
}

/// `T_i²` for `i ∈ A` and `T_j S_k − T_k S_j` for `j < k` in `A`.
pub fn displayed_center_generators(n: usize, a: &[usize]) -> Vec<Poly> {
    let mut out: Vec<Poly> = a.iter().map(|&i| Poly::t(n, i).pow(2)).collect();
    for (x, &j) in a.iter().enumerate() {
        for &k in &a[x + 1..] {
            out.push(pull_variable(n, PairIdx { i: j, j: k }).normalized());
        }
    }
    out.sort();
    out
}

fn validate_a(n: usize, a: &[usize]) -> Result<Vec<usize>> {
    let mut a = a.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.len() < 2 || a.iter().any(|&i| i < 2 || i > n) {
        return Err(Error::InvalidInput(format!("A must be a subset of {{2..{n}}} with at least two elements")));
    }
    Ok(a)
}

/// Center for `ν = Σ_{i∈A} v₀ᵢ + 2 Σ_{j<k∈A} v_jk` on `Z₀`, with the displayed list attached.
pub fn center_pullback(n: usize, a: &[usize]) -> Result<CenterIdeal> {
    let a = validate_a(n, a)?;
    let ctx = GitContext::new(n)?;
    let fans = PipelineFans::new(&ctx)?;
    let wd = ctx.weights();
    let mut ci = center_ideal(wd, &fans.sigma0, &nu_vector(wd, &a))?;
    ci.displayed = displayed_center_generators(n, &a);
    ci.extra = ci.pullback_generators.iter().filter(|g| !ci.displayed.contains(g)).cloned().collect();
    ci.missing = ci.displayed.iter().filter(|g| !ci.pullback_generators.contains(g)).cloned().collect();
    Ok(ci)
}

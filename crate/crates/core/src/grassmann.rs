//! Index combinatorics and weight data for the affine cone over `Gr(2, n+1)`,
//! supports of decomposable 2-vectors, Plücker relations and tree-space tests.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{guard, Error, Result};
use crate::exact_linalg::{gale_dual, rank, solve, zneg, QMatrix, QVector, ZVector};
use crate::polyhedral::{Cone, Membership};

/// A pair `{i, j}` with `i < j`; derived order is the lexicographic column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIdx {
    pub i: usize,
    pub j: usize,
}

impl PairIdx {
    pub fn new(a: usize, b: usize) -> Result<PairIdx> {
        if a == b {
            return Err(Error::InvalidInput(format!("pair {{{a},{b}}} needs distinct indices")));
        }
        Ok(PairIdx { i: a.min(b), j: a.max(b) })
    }

    pub fn contains(&self, k: usize) -> bool {
        self.i == k || self.j == k
    }
}

impl Serialize for PairIdx {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for PairIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.i, self.j)
    }
}

/// Column position of `{i, j}` among all pairs of `0..=n`.
pub fn pair_position(n: usize, p: PairIdx) -> usize {
    (0..p.i).map(|a| n - a).sum::<usize>() + (p.j - p.i - 1)
}

/// `(𝐍₀, 𝐍)`: all pairs of `0..=n`, and those avoiding `0`.
pub fn pairs(n: usize) -> Result<(Vec<PairIdx>, Vec<PairIdx>)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    if n > crate::error::HARD_MAX_N {
        return Err(Error::Guard { what: "pair bitmasks", n, max: crate::error::HARD_MAX_N });
    }
    let n0: Vec<PairIdx> = (0..=n).flat_map(|i| (i + 1..=n).map(move |j| PairIdx { i, j })).collect();
    let nn = n0.iter().copied().filter(|p| p.i >= 1).collect();
    Ok((n0, nn))
}

/// Subset of `𝐍₀(n)` stored as a bitmask over the column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YSet {
    n: usize,
    mask: u64,
}

impl YSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = PairIdx>) -> Result<YSet> {
        let width = num_pairs(n);
        if width > 64 {
            return Err(Error::InvalidInput(format!("n = {n} exceeds the bitmask width")));
        }
        let mut mask = 0u64;
        for p in members {
            if p.j > n {
                return Err(Error::InvalidInput(format!("pair {p} out of range for n = {n}")));
            }
            mask |= 1 << pair_position(n, p);
        }
        Ok(YSet { n, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> YSet {
        debug_assert!(num_pairs(n) >= 64 || mask >> num_pairs(n) == 0);
        YSet { n, mask }
    }

    /// Parses `"i,j"` strings.
    pub fn parse(n: usize, items: &[&str]) -> Result<YSet> {
        let members = items
            .iter()
            .map(|s| {
                let (a, b) = s
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidInput(format!("expected \"i,j\", got {s:?}")))?;
                let parse = |t: &str| {
                    t.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad index in {s:?}")))
                };
                PairIdx::new(parse(a)?, parse(b)?)
            })
            .collect::<Result<Vec<_>>>()?;
        YSet::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, p: PairIdx) -> bool {
        p.j <= self.n && self.mask >> pair_position(self.n, p) & 1 == 1
    }

    pub fn members(&self) -> Vec<PairIdx> {
        let (n0, _) = pairs(self.n).expect("n >= 2");
        n0.into_iter().enumerate().filter(|&(k, _)| self.mask >> k & 1 == 1).map(|(_, p)| p).collect()
    }

    pub fn positions(&self) -> Vec<usize> {
        (0..num_pairs(self.n)).filter(|&k| self.mask >> k & 1 == 1).collect()
    }

    pub fn complement(&self) -> YSet {
        let all = if num_pairs(self.n) == 64 { u64::MAX } else { (1u64 << num_pairs(self.n)) - 1 };
        YSet { n: self.n, mask: all & !self.mask }
    }

    pub fn is_subset(&self, other: &YSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Whether all members avoid the index `0`.
    pub fn avoids_zero(&self) -> bool {
        self.mask & ((1u64 << self.n) - 1) == 0
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.members().iter().map(|p| p.to_string()).collect()
    }
}

impl Serialize for YSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl fmt::Display for YSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members().iter().map(|p| format!("{}{}", p.i, p.j)).collect::<Vec<_>>().join(" "))
    }
}

pub fn num_pairs(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Degree matrix `Q` and its Gale dual `P`.
#[derive(Clone, Debug)]
pub struct WeightData {
    n: usize,
    n0: Vec<PairIdx>,
    nn: Vec<PairIdx>,
    q: QMatrix,
    p: QMatrix,
    w_cols: Vec<ZVector>,
    v_cols: Vec<ZVector>,
}

pub fn weights(n: usize) -> Result<WeightData> {
    WeightData::new(n)
}

impl WeightData {
    pub fn new(n: usize) -> Result<WeightData> {
        let (n0, nn) = pairs(n)?;
        let w_cols: Vec<ZVector> = n0
            .iter()
            .map(|p| {
                let mut w = vec![BigInt::zero(); n];
                if p.i > 0 {
                    w[p.i - 1] += 1;
                }
                w[p.j - 1] += 1;
                w
            })
            .collect();
        let q_rows: Vec<ZVector> = (0..n).map(|r| w_cols.iter().map(|c| c[r].clone()).collect()).collect();
        let q = QMatrix::from_int_rows(n0.len(), &q_rows)?;
        let p = gale_dual(&q)?;
        if !p.mul(&q.transpose())?.is_zero() || rank(&p) + rank(&q) != n0.len() {
            return Err(Error::Internal("Gale dual does not complement the degree matrix".into()));
        }
        let p_rows = p.to_int_rows().ok_or_else(|| Error::Internal("non-integral Gale dual".into()))?;
        let v_cols: Vec<ZVector> = (0..n0.len()).map(|c| p_rows.iter().map(|r| r[c].clone()).collect()).collect();
        Ok(WeightData { n, n0, nn, q, p, w_cols, v_cols })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n0(&self) -> &[PairIdx] {
        &self.n0
    }

    pub fn nn(&self) -> &[PairIdx] {
        &self.nn
    }

    pub fn q(&self) -> &QMatrix {
        &self.q
    }

    pub fn p(&self) -> &QMatrix {
        &self.p
    }

    /// Dimension of the space containing the columns of `P`.
    pub fn p_dim(&self) -> usize {
        self.p.rows()
    }

    pub fn w(&self, eta: PairIdx) -> &ZVector {
        &self.w_cols[pair_position(self.n, eta)]
    }

    pub fn v(&self, eta: PairIdx) -> &ZVector {
        &self.v_cols[pair_position(self.n, eta)]
    }

    pub fn w_columns(&self) -> &[ZVector] {
        &self.w_cols
    }

    pub fn v_columns(&self) -> &[ZVector] {
        &self.v_cols
    }

    /// `ω_I = cone(w_η; η ∈ I)`.
    pub fn omega(&self, i: &YSet) -> Result<Cone> {
        let gens: Vec<ZVector> = i.positions().into_iter().map(|k| self.w_cols[k].clone()).collect();
        Cone::from_generators(self.n, &gens)
    }

    /// `cone(v_η; η ∈ J)`.
    pub fn v_cone(&self, j: &YSet) -> Result<Cone> {
        let gens: Vec<ZVector> = j.positions().into_iter().map(|k| self.v_cols[k].clone()).collect();
        Cone::from_generators(self.p_dim(), &gens)
    }

    /// `P · x` for an integer vector over `𝐍₀`.
    pub fn apply_p(&self, x: &[BigInt]) -> ZVector {
        (0..self.p_dim())
            .map(|r| self.v_cols.iter().zip(x).map(|(c, xi)| &c[r] * xi).sum())
            .collect()
    }
}

/// Condition `(*)` over all pairs of members with four distinct indices.
pub fn is_y_set(i: &YSet) -> bool {
    exchange_constraints(i.n).iter().all(|c| c.holds(i.mask))
}

struct Exchange {
    hyp: u64,
    alt1: u64,
    alt2: u64,
}

impl Exchange {
    fn holds(&self, mask: u64) -> bool {
        mask & self.hyp != self.hyp || mask & self.alt1 == self.alt1 || mask & self.alt2 == self.alt2
    }
}

fn exchange_constraints(n: usize) -> Vec<Exchange> {
    let bit = |a: usize, b: usize| 1u64 << pair_position(n, PairIdx { i: a.min(b), j: a.max(b) });
    let mut out = Vec::new();
    for [a, b, c, d] in quadruples(n) {
        // The three perfect matchings of {a,b,c,d}; each one as hypothesis.
        let m = [bit(a, b) | bit(c, d), bit(a, c) | bit(b, d), bit(a, d) | bit(b, c)];
        for k in 0..3 {
            out.push(Exchange { hyp: m[k], alt1: m[(k + 1) % 3], alt2: m[(k + 2) % 3] });
        }
    }
    out
}

fn quadruples(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessMode {
    /// `(1, x) ∧ (0, y)`.
    Affine,
    /// `(0, x) ∧ (0, y)`.
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSetWitness {
    pub x: QVector,
    pub y: QVector,
    pub mode: WitnessMode,
}

impl YSetWitness {
    /// The two vectors in `K^{n+1}` whose wedge realizes the support.
    pub fn vectors(&self) -> (QVector, QVector) {
        let lead = match self.mode {
            WitnessMode::Affine => BigRational::one(),
            WitnessMode::Star => BigRational::zero(),
        };
        let mut u = vec![lead];
        u.extend(self.x.entries().iter().cloned());
        let mut v = vec![BigRational::zero()];
        v.extend(self.y.entries().iter().cloned());
        (QVector::new(u), QVector::new(v))
    }
}

/// Vectors `x, y` whose wedge has support exactly `I`, or `None` when `(*)` fails.
pub fn y_set_witness(i: &YSet) -> Result<Option<YSetWitness>> {
    if !is_y_set(i) {
        return Ok(None);
    }
    let n = i.n;
    let star = i.avoids_zero() && !i.is_empty();
    let found = if star {
        let covered: BTreeSet<usize> = i.members().iter().flat_map(|p| [p.i, p.j]).collect();
        covered.into_iter().find_map(|a| {
            let relabel = |k: usize| if k == a { 0 } else if k == 0 { a } else { k };
            let moved = YSet::new(n, i.members().iter().map(|p| PairIdx::new(relabel(p.i), relabel(p.j)).unwrap()))
                .expect("same n");
            let (x, y) = affine_construction(&moved);
            let (mut u, mut v) = (vec![1i64], vec![0i64]);
            u.extend(&x);
            v.extend(&y);
            u.swap(0, a);
            v.swap(0, a);
            (u[0] == 0 && v[0] == 0 && support_of(n, &u, &v) == *i)
                .then(|| witness(&u[1..], &v[1..], WitnessMode::Star))
        })
    } else {
        let (x, y) = affine_construction(i);
        let mut u = vec![1i64];
        u.extend(&x);
        let mut v = vec![0i64];
        v.extend(&y);
        (support_of(n, &u, &v) == *i).then(|| witness(&x, &y, WitnessMode::Affine))
    };
    found.map(Some).ok_or_else(|| Error::Internal(format!("witness construction failed for {i}")))
}

fn witness(x: &[i64], y: &[i64], mode: WitnessMode) -> YSetWitness {
    YSetWitness { x: QVector::from_i64(x), y: QVector::from_i64(y), mode }
}

fn support_of(n: usize, u: &[i64], v: &[i64]) -> YSet {
    let s = wedge_support(&QVector::from_i64(u), &QVector::from_i64(v)).expect("length n+1");
    debug_assert_eq!(s.n, n);
    s
}

/// `x` from the component structure of the graphs `𝒢₁₂` and `𝒢₂`, `y` the indicator of `{0,j} ∈ I`.
fn affine_construction(i: &YSet) -> (Vec<i64>, Vec<i64>) {
    let n = i.n;
    let has = |a: usize, b: usize| i.contains(PairIdx { i: a.min(b), j: a.max(b) });
    let rooted = |a: usize| has(0, a);
    let mut e12 = vec![Vec::new(); n + 1];
    let mut e2 = vec![Vec::new(); n + 1];
    for a in 1..=n {
        for b in a + 1..=n {
            let in_e1 = has(a, b) && (rooted(a) || rooted(b));
            let in_e2 = !has(a, b) && rooted(a) && rooted(b);
            if in_e1 || in_e2 {
                e12[a].push(b);
                e12[b].push(a);
            }
            if in_e2 {
                e2[a].push(b);
                e2[b].push(a);
            }
        }
    }
    let isolated: Vec<bool> = (0..=n).map(|a| e12[a].is_empty()).collect();
    let mut comp = vec![0i64; n + 1];
    let mut next = 0i64;
    for start in 1..=n {
        if isolated[start] || comp[start] != 0 {
            continue;
        }
        next += 1;
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(a) = stack.pop() {
            for &b in &e2[a] {
                if comp[b] == 0 {
                    comp[b] = next;
                    stack.push(b);
                }
            }
        }
    }
    let x = (1..=n).map(|a| comp[a]).collect();
    let y = (1..=n).map(|a| i64::from(rooted(a))).collect();
    (x, y)
}

/// Coordinates `u_i v_j − u_j v_i` of `u ∧ v` in the column order of `𝐍₀`.
pub fn wedge(u: &QVector, v: &QVector) -> Result<QVector> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    if u.dim() < 3 {
        return Err(Error::InvalidInput("wedge needs vectors of length n+1 >= 3".into()));
    }
    let (n0, _) = pairs(u.dim() - 1)?;
    let (a, b) = (u.entries(), v.entries());
    Ok(QVector::new(n0.iter().map(|p| &a[p.i] * &b[p.j] - &a[p.j] * &b[p.i]).collect()))
}

pub fn wedge_support(u: &QVector, v: &QVector) -> Result<YSet> {
    let z = wedge(u, v)?;
    let n = u.dim() - 1;
    let mask = z.entries().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| 1u64 << k).sum();
    Ok(YSet::from_mask(n, mask))
}

/// All `(*)`-sets in increasing bitmask order.
pub fn enumerate_y_sets(n: usize) -> Result<Vec<YSet>> {
    guard("Y-set enumeration", n, 6)?;
    pairs(n)?;
    let cons = exchange_constraints(n);
    let width = num_pairs(n);
    Ok((0u64..(1u64 << width))
        .into_par_iter()
        .filter(|&m| cons.iter().all(|c| c.holds(m)))
        .map(|m| YSet::from_mask(n, m))
        .collect())
}

/// Supports of `(1,x) ∧ (0,y)` and `(0,x) ∧ (0,y)` over `x ∈ {0..n}ⁿ`, `y ∈ {0,1}ⁿ`.
pub fn brute_force_supports(n: usize) -> Result<BTreeSet<YSet>> {
    guard("brute-force support sweep", n, 3)?;
    pairs(n)?;
    let xs = (n as u64 + 1).pow(n as u32);
    let found: BTreeSet<YSet> = (0..xs)
        .into_par_iter()
        .flat_map_iter(|code| {
            let mut x = vec![0i64; n];
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = (c % (n as u64 + 1)) as i64;
                c /= n as u64 + 1;
            }
            (0u32..(1 << n)).flat_map(move |ym| {
                let y: Vec<i64> = (0..n).map(|k| i64::from(ym >> k & 1)).collect();
                let x = x.clone();
                [1i64, 0].into_iter().map(move |lead| {
                    let mut u = vec![lead];
                    u.extend(&x);
                    let mut v = vec![0i64];
                    v.extend(&y);
                    support_of(n, &u, &v)
                })
            })
        })
        .collect();
    Ok(found)
}

/// `T_ij T_kl − T_ik T_jl + T_il T_jk` for one quadruple `i<j<k<l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PluckerRelation {
    pub quadruple: [usize; 4],
    /// `(sign, first factor, second factor)`, signs `+, −, +`.
    pub terms: [(i8, PairIdx, PairIdx); 3],
}

impl PluckerRelation {
    /// Value of the relation at `z`, given in the column order of `𝐍₀(n)`.
    pub fn evaluate(&self, n: usize, z: &QVector) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (s, a, b)| {
            let t = &z.entries()[pair_position(n, *a)] * &z.entries()[pair_position(n, *b)];
            if *s > 0 { acc + t } else { acc - t }
        })
    }
}

pub fn plucker_quadruples(n: usize) -> Result<Vec<PluckerRelation>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("Plücker relations need n >= 3, got {n}")));
    }
    let p = |a, b| PairIdx { i: a, j: b };
    Ok(quadruples(n)
        .into_iter()
        .map(|[i, j, k, l]| PluckerRelation {
            quadruple: [i, j, k, l],
            terms: [(1, p(i, j), p(k, l)), (-1, p(i, k), p(j, l)), (1, p(i, l), p(j, k))],
        })
        .collect())
}

/// Two-block partition `A ⊔ Aᶜ` of `{1,…,n}`, stored with `A` as given.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoBlock {
    n: usize,
    a: Vec<usize>,
}

impl TwoBlock {
    pub fn new(n: usize, a: impl IntoIterator<Item = usize>) -> Result<TwoBlock> {
        let a: BTreeSet<usize> = a.into_iter().collect();
        if a.is_empty() || a.len() >= n || a.iter().any(|&k| k == 0 || k > n) {
            return Err(Error::InvalidInput(format!("{a:?} is not a nonempty proper subset of 1..={n}")));
        }
        Ok(TwoBlock { n, a: a.into_iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self) -> &[usize] {
        &self.a
    }

    pub fn complement_block(&self) -> Vec<usize> {
        (1..=self.n).filter(|k| !self.a.contains(k)).collect()
    }

    pub fn complement(&self) -> TwoBlock {
        TwoBlock { n: self.n, a: self.complement_block() }
    }

    /// Representative with `1 ∉ A`.
    pub fn canonical(&self) -> TwoBlock {
        if self.a.contains(&1) {
            self.complement()
        } else {
            self.clone()
        }
    }

    /// Both blocks have at least two elements.
    pub fn is_true(&self) -> bool {
        self.a.len() >= 2 && self.n - self.a.len() >= 2
    }

    pub fn same_partition(&self, other: &TwoBlock) -> bool {
        self.canonical() == other.canonical()
    }

    /// Indicator of `A` in `Q^n`.
    pub fn indicator(&self) -> ZVector {
        (1..=self.n).map(|k| BigInt::from(i64::from(self.a.contains(&k)))).collect()
    }

    /// Indicator over `𝐍₀` of the pairs contained in `A`.
    pub fn pair_indicator(&self) -> ZVector {
        let (n0, _) = pairs(self.n).expect("n >= 2");
        n0.iter()
            .map(|p| BigInt::from(i64::from(p.i >= 1 && self.a.contains(&p.i) && self.a.contains(&p.j))))
            .collect()
    }
}

impl fmt::Display for TwoBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", show(&self.a), show(&self.complement_block()))
    }
}

/// All partitions of `{1,…,n}` into two nonempty blocks, canonical representatives.
pub fn two_blocks(n: usize) -> Result<Vec<TwoBlock>> {
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidInput(format!("two-block partitions need 2 <= n <= 20, got {n}")));
    }
    let mut out: Vec<TwoBlock> = (1u32..(1 << (n - 1)))
        .map(|m| TwoBlock { n, a: (2..=n).filter(|&k| m >> (k - 2) & 1 == 1).collect() })
        .collect();
    out.sort();
    Ok(out)
}

pub fn true_two_blocks(n: usize) -> Result<Vec<TwoBlock>> {
    Ok(two_blocks(n)?.into_iter().filter(TwoBlock::is_true).collect())
}

/// Normal of `ℋ_R`: `+1` on `A`, `−1` on `Aᶜ`.
pub fn two_block_hyperplane(r: &TwoBlock) -> QVector {
    QVector::from_ints(&two_block_normal(r))
}

pub fn two_block_normal(r: &TwoBlock) -> ZVector {
    (1..=r.n).map(|k| BigInt::from(if r.a.contains(&k) { 1 } else { -1 })).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TropicalConvention {
    /// Maximum of the three pairing sums attained at least twice.
    Max,
    /// Minimum attained at least twice.
    Min,
}

/// Convention under which `relint cone(v_η; η∈J)` meets `Δ` exactly when `𝐍₀∖J` is a `(*)`-set.
pub const TROPICAL_CONVENTION: TropicalConvention = TropicalConvention::Min;

/// Four-point condition at every quadruple of `0..=n`.
pub fn trop_contains_with(n: usize, w: &QVector, conv: TropicalConvention) -> Result<bool> {
    if w.dim() != num_pairs(n) {
        return Err(Error::DimensionMismatch { expected: num_pairs(n), found: w.dim() });
    }
    let e = w.entries();
    let at = |a: usize, b: usize| &e[pair_position(n, PairIdx { i: a, j: b })];
    Ok(quadruples(n).into_iter().all(|[i, j, k, l]| {
        let mut s = [at(i, j) + at(k, l), at(i, k) + at(j, l), at(i, l) + at(j, k)];
        s.sort();
        match conv {
            TropicalConvention::Max => s[1] == s[2],
            TropicalConvention::Min => s[0] == s[1],
        }
    }))
}

pub fn trop_contains(wd: &WeightData, w: &QVector) -> Result<bool> {
    trop_contains_with(wd.n, w, TROPICAL_CONVENTION)
}

/// `p ∈ Δ = P(trop)`, tested on an arbitrary preimage.
pub fn delta_contains(wd: &WeightData, p: &QVector) -> Result<bool> {
    delta_contains_with(wd, p, TROPICAL_CONVENTION)
}

pub fn delta_contains_with(wd: &WeightData, p: &QVector, conv: TropicalConvention) -> Result<bool> {
    let w = solve(&wd.p, p)?.ok_or_else(|| Error::Internal("P is surjective but P·w = p has no solution".into()))?;
    trop_contains_with(wd.n, &w, conv)
}

/// Split of `0..=n` into two blocks of size at least two, stored as the block avoiding `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split(pub u64);

impl Split {
    pub fn compatible(&self, other: &Split) -> bool {
        let (a, b) = (self.0, other.0);
        a & b == 0 || a & b == a || a & b == b
    }

    /// `δ_s` over `𝐍₀`: `1` on pairs crossing the split.
    pub fn vector(&self, n: usize) -> ZVector {
        let (n0, _) = pairs(n).expect("n >= 2");
        n0.iter()
            .map(|p| BigInt::from(i64::from((self.0 >> p.i & 1) != (self.0 >> p.j & 1))))
            .collect()
    }
}

pub fn internal_splits(n: usize) -> Vec<Split> {
    let m = n + 1;
    (1u64..(1 << m))
        .filter(|s| s & 1 == 0)
        .filter(|s| (2..=m - 2).contains(&(s.count_ones() as usize)))
        .map(Split)
        .collect()
}

/// Maximal sets of pairwise compatible internal splits (binary tree topologies).
pub fn trees(n: usize) -> Vec<Vec<Split>> {
    let splits = internal_splits(n);
    let mut out = Vec::new();
    let all: Vec<usize> = (0..splits.len()).collect();
    bron_kerbosch(&splits, &mut Vec::new(), all, Vec::new(), &mut out);
    let mut trees: Vec<Vec<Split>> =
        out.into_iter().map(|c| c.into_iter().map(|k| splits[k]).collect()).collect();
    for t in &mut trees {
        t.sort();
    }
    trees.sort();
    trees
}

fn bron_kerbosch(s: &[Split], r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    let mut p = p;
    let mut x = x;
    while let Some(v) = p.pop() {
        let nb = |u: &usize| s[*u].compatible(&s[v]);
        r.push(v);
        bron_kerbosch(s, r, p.iter().copied().filter(nb).collect(), x.iter().copied().filter(nb).collect(), out);
        r.pop();
        x.push(v);
    }
}

/// `Δ` as a union of cones `D_T = P(lineality + signed split cone of T)`, one per tree.
#[derive(Clone, Debug)]
pub struct TreeSpace {
    trees: Vec<Vec<Split>>,
    cones: Vec<Cone>,
}

impl TreeSpace {
    pub fn new(wd: &WeightData) -> Result<TreeSpace> {
        Self::with_convention(wd, TROPICAL_CONVENTION)
    }

    pub fn with_convention(wd: &WeightData, conv: TropicalConvention) -> Result<TreeSpace> {
        let n = wd.n;
        // `a_0 = 1` in `w_ij = a_i + a_j`; the remaining lineality is `ker P`.
        let ell0: ZVector = wd.n0.iter().map(|p| BigInt::from(i64::from(p.i == 0))).collect();
        let l = wd.apply_p(&ell0);
        let trees = trees(n);
        let cones = trees
            .iter()
            .map(|t| {
                let mut gens = vec![l.clone(), zneg(&l)];
                for s in t {
                    let d = wd.apply_p(&s.vector(n));
                    gens.push(match conv {
                        TropicalConvention::Max => d,
                        TropicalConvention::Min => zneg(&d),
                    });
                }
                Cone::from_generators(wd.p_dim(), &gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TreeSpace { trees, cones })
    }

    pub fn trees(&self) -> &[Vec<Split>] {
        &self.trees
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn contains(&self, p: &[BigInt]) -> bool {
        self.cones.iter().any(|c| c.contains_int(p, Membership::Closed))
    }

    /// Whether `relint(c)` meets `Δ`.
    pub fn meets_relint(&self, c: &Cone) -> Result<bool> {
        for d in &self.cones {
            let k = d.intersect(c)?;
            if c.contains_int(&k.relint_rep(), Membership::RelativeInterior) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::zvec;

    fn ys(n: usize, items: &[&str]) -> YSet {
        YSet::parse(n, items).unwrap()
    }

    #[test]
    fn pair_counts_and_weights() {
        let (n0, nn) = pairs(3).unwrap();
        assert_eq!((n0.len(), nn.len()), (6, 3));
        for (k, p) in n0.iter().enumerate() {
            assert_eq!(pair_position(3, *p), k);
        }
        let wd = weights(4).unwrap();
        assert_eq!((wd.p().rows(), wd.p().cols()), (6, 10));
        let wd = weights(3).unwrap();
        assert_eq!(wd.v(PairIdx { i: 1, j: 2 }), &zvec(&[1, 0, 0]));
        assert_eq!(wd.v(PairIdx { i: 0, j: 1 }), &zvec(&[-1, -1, 0]));
        assert_eq!(wd.w(PairIdx { i: 2, j: 3 }), &zvec(&[0, 1, 1]));
        assert_eq!(wd.w(PairIdx { i: 0, j: 2 }), &zvec(&[0, 1, 0]));
        assert!(pairs(1).is_err());
    }

    #[test]
    fn y_set_examples() {
        assert!(is_y_set(&YSet::new(3, []).unwrap()));
        assert!(!is_y_set(&ys(3, &["0,1", "2,3"])));
        assert!(is_y_set(&YSet::from_mask(3, 0b111111)));
    }

    #[test]
    fn witness_examples() {
        for (n, items) in [
            (3, vec!["0,1"]),
            (3, vec!["0,2", "0,3", "2,3"]),
            (3, vec!["1,2", "1,3", "2,3"]),
            (3, vec!["0,1", "0,2", "0,3", "1,2", "1,3", "2,3"]),
            (4, vec!["1,2", "3,4", "1,3", "2,4"]),
        ] {
            let i = ys(n, &items);
            let w = y_set_witness(&i).unwrap().unwrap();
            let (u, v) = w.vectors();
            assert_eq!(wedge_support(&u, &v).unwrap(), i, "{items:?}");
        }
        let w = y_set_witness(&ys(3, &["1,2", "1,3", "2,3"])).unwrap().unwrap();
        assert_eq!(w.mode, WitnessMode::Star);
        assert_eq!(y_set_witness(&ys(3, &["0,1", "2,3"])).unwrap(), None);
    }

    #[test]
    fn wedge_support_examples() {
        let s = |u: &[i64], v: &[i64]| wedge_support(&QVector::from_i64(u), &QVector::from_i64(v)).unwrap();
        assert_eq!(s(&[1, 0, 0, 0], &[0, 1, 0, 0]), ys(3, &["0,1"]));
        assert_eq!(s(&[1, 1, 1, 1], &[0, 1, 1, 1]), ys(3, &["0,1", "0,2", "0,3"]));
        assert_eq!(s(&[1, 1, 2, 0], &[0, 1, 1, 0]), ys(3, &["0,1", "0,2", "1,2"]));
    }

    #[test]
    fn enumeration_matches_supports() {
        assert_eq!(enumerate_y_sets(2).unwrap().len(), 8);
        for n in 2..=3 {
            let en: BTreeSet<YSet> = enumerate_y_sets(n).unwrap().into_iter().collect();
            assert_eq!(en, brute_force_supports(n).unwrap());
        }
        assert!(matches!(enumerate_y_sets(7), Err(Error::Guard { .. })));
        assert!(matches!(brute_force_supports(4), Err(Error::Guard { .. })));
    }

    #[test]
    fn plucker_counts() {
        assert_eq!(plucker_quadruples(3).unwrap().len(), 1);
        assert_eq!(plucker_quadruples(4).unwrap().len(), 5);
        let z = wedge(&QVector::from_i64(&[1, 2, -1, 3, 5]), &QVector::from_i64(&[0, 1, 4, -2, 7])).unwrap();
        for r in plucker_quadruples(4).unwrap() {
            assert!(r.evaluate(4, &z).is_zero());
        }
    }

    #[test]
    fn hyperplane_examples() {
        let h = |n, a: &[usize]| two_block_hyperplane(&TwoBlock::new(n, a.iter().copied()).unwrap());
        assert_eq!(h(3, &[1]), QVector::from_i64(&[1, -1, -1]));
        assert_eq!(h(4, &[1, 2]), QVector::from_i64(&[1, 1, -1, -1]));
        let r = TwoBlock::new(5, [2, 4]).unwrap();
        assert_eq!(two_block_hyperplane(&r), two_block_hyperplane(&r.complement()).scale(&-BigRational::one()));
        assert_eq!(two_blocks(3).unwrap().len(), 3);
        assert_eq!(true_two_blocks(4).unwrap().len(), 3);
        assert_eq!(true_two_blocks(5).unwrap().len(), 10);
        assert!(true_two_blocks(5).unwrap().iter().all(|r| !r.block().contains(&1)));
    }

    #[test]
    fn four_point_examples() {
        // Lineality `a_i + a_j`.
        let a = [3i64, -1, 4, 2];
        let (n0, _) = pairs(3).unwrap();
        let lin = QVector::from_i64(&n0.iter().map(|p| a[p.i] + a[p.j]).collect::<Vec<_>>());
        for conv in [TropicalConvention::Max, TropicalConvention::Min] {
            assert!(trop_contains_with(3, &lin, conv).unwrap());
        }
        let split = QVector::from_ints(&Split(0b1100).vector(3));
        assert!(trop_contains_with(3, &split, TropicalConvention::Max).unwrap());
        assert!(!trop_contains_with(3, &split, TropicalConvention::Min).unwrap());
        assert!(trop_contains_with(3, &split.scale(&-BigRational::one()), TropicalConvention::Min).unwrap());
        let generic = QVector::from_i64(&[1, 5, 2, 7, 3, 11]);
        assert!(!trop_contains_with(3, &generic, TropicalConvention::Max).unwrap());
        assert!(!trop_contains_with(3, &generic, TropicalConvention::Min).unwrap());
    }

    #[test]
    fn tree_counts() {
        assert_eq!(trees(3).len(), 3);
        assert_eq!(trees(4).len(), 15);
        assert!(trees(4).iter().all(|t| t.len() == 2));
    }

    #[test]
    fn relint_criterion_selects_the_convention() {
        let wd = weights(3).unwrap();
        let check = |conv| {
            let ts = TreeSpace::with_convention(&wd, conv).unwrap();
            (0u64..64).all(|m| {
                let j = YSet::from_mask(3, m);
                ts.meets_relint(&wd.v_cone(&j).unwrap()).unwrap() == is_y_set(&j.complement())
            })
        };
        assert!(check(TropicalConvention::Min));
        assert!(!check(TropicalConvention::Max));
    }
}

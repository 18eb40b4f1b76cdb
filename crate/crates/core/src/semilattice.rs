//! Finite meet-semilattices, their blow-ups, and building/nested set tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyhedral::Fan;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Atom(String),
    BlowPair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Label {
        Label::Atom(s.into())
    }

    pub fn pair(xi: &Label, x: &Label) -> Label {
        Label::BlowPair(Box::new(xi.clone()), Box::new(x.clone()))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::BlowPair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteSemilattice {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    meet: Vec<usize>,
    bottom: usize,
}

impl FiniteSemilattice {
    /// Validates that `leq` is a partial order in which all meets exist.
    pub fn new(labels: Vec<Label>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::EmptySet);
        }
        let mut index = HashMap::with_capacity(m);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::NotASemilattice(format!("duplicate label {l}")));
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(m); m];
        let mut up = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in 0..m {
                if leq(i, j) {
                    down[j].insert(i);
                    up[i].insert(j);
                }
            }
        }
        for i in 0..m {
            if !down[i].contains(i) {
                return Err(Error::NotASemilattice("relation is not reflexive".into()));
            }
            for j in down[i].ones() {
                if j != i && down[j].contains(i) {
                    return Err(Error::NotASemilattice("relation is not antisymmetric".into()));
                }
                if !down[j].is_subset(&down[i]) {
                    return Err(Error::NotASemilattice("relation is not transitive".into()));
                }
            }
        }
        let mut meet = vec![usize::MAX; m * m];
        for i in 0..m {
            for j in i..m {
                let mut lower = down[i].clone();
                lower.intersect_with(&down[j]);
                let g = lower
                    .ones()
                    .find(|&g| down[g] == lower)
                    .ok_or_else(|| Error::NotASemilattice(format!("no meet of {} and {}", labels[i], labels[j])))?;
                meet[i * m + j] = g;
                meet[j * m + i] = g;
            }
        }
        let bottom = (0..m).find(|&i| up[i].count_ones(..) == m).expect("meets exist, so a minimum exists");
        Ok(FiniteSemilattice { labels, index, down, up, meet, bottom })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn below(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.down[x].ones()
    }

    pub fn meet2(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    pub fn meet(&self, xs: &[usize]) -> Result<usize> {
        let (&first, rest) = xs.split_first().ok_or(Error::EmptySet)?;
        Ok(rest.iter().fold(first, |acc, &x| self.meet2(acc, x)))
    }

    pub fn join2(&self, i: usize, j: usize) -> Option<usize> {
        let mut upper = self.up[i].clone();
        upper.intersect_with(&self.up[j]);
        self.least_of(&upper)
    }

    pub fn join(&self, xs: &[usize]) -> Result<Option<usize>> {
        let (&first, rest) = xs.split_first().ok_or(Error::EmptySet)?;
        let mut upper = self.up[first].clone();
        for &x in rest {
            upper.intersect_with(&self.up[x]);
        }
        Ok(self.least_of(&upper))
    }

    fn least_of(&self, set: &FixedBitSet) -> Option<usize> {
        let mut it = set.ones();
        let first = it.next()?;
        let g = it.fold(first, |acc, x| self.meet2(acc, x));
        set.contains(g).then_some(g)
    }

    /// Pairs `(i, j)` with `j` covering `i`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            for i in self.down[j].ones() {
                if i != j && !self.down[j].ones().any(|k| k != i && k != j && self.lt(i, k)) {
                    out.push((i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Length of the longest chain from the minimum to each element.
    pub fn ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.down[i].count_ones(..));
        let mut rank = vec![0; self.len()];
        for &j in &order {
            rank[j] = self.down[j].ones().filter(|&i| i != j).map(|i| rank[i] + 1).max().unwrap_or(0);
        }
        rank
    }

    /// Blow-up in `xi`: elements not above `xi`, plus pairs `(xi, x)` for such
    /// `x` whose join with `xi` exists.
    pub fn blow_up(&self, xi: usize) -> Result<FiniteSemilattice> {
        if xi == self.bottom {
            return Err(Error::BlowUpAtBottom);
        }
        let kept: Vec<usize> = (0..self.len()).filter(|&x| !self.leq(xi, x)).collect();
        let paired: Vec<usize> = kept.iter().copied().filter(|&x| self.join2(x, xi).is_some()).collect();
        let k = kept.len();
        let mut labels: Vec<Label> = kept.iter().map(|&x| self.labels[x].clone()).collect();
        labels.extend(paired.iter().map(|&x| Label::pair(&self.labels[xi], &self.labels[x])));
        FiniteSemilattice::new(labels, |a, b| match (a < k, b < k) {
            (true, true) => self.leq(kept[a], kept[b]),
            (false, false) => self.leq(paired[a - k], paired[b - k]),
            (true, false) => self.leq(kept[a], paired[b - k]),
            (false, true) => false,
        })
    }

    pub fn iterated_blow_up(&self, family: &ElementFamily) -> Result<FiniteSemilattice> {
        if !family.is_sorted(self) {
            return Err(Error::FamilyNotSorted);
        }
        let mut cur = self.clone();
        for &xi in &family.elements {
            let l = &self.labels[xi];
            let at = cur.index_of(l).ok_or_else(|| Error::ElementVanished(l.to_string()))?;
            cur = cur.blow_up(at)?;
        }
        Ok(cur)
    }

    fn maximal_in(&self, set: &[usize]) -> Vec<usize> {
        set.iter().copied().filter(|&y| !set.iter().any(|&s| self.lt(y, s))).collect()
    }

    /// For every `x > 0`, the join map from the product of the intervals below
    /// the maximal elements of `S` under `x` onto `[0, x]` is an isomorphism.
    pub fn is_building_set(&self, s: &[usize]) -> bool {
        let in_s = self.membership(s);
        (0..self.len()).filter(|&x| x != self.bottom).all(|x| {
            let below: Vec<usize> = self.down[x].ones().filter(|&y| in_s[y]).collect();
            let ys = self.maximal_in(&below);
            self.product_iso(x, &ys)
        })
    }

    fn product_iso(&self, x: usize, ys: &[usize]) -> bool {
        let target = self.down[x].count_ones(..);
        let factors: Vec<Vec<usize>> = ys.iter().map(|&y| self.down[y].ones().collect()).collect();
        let size: usize = factors.iter().map(Vec::len).product();
        if size != target {
            return false;
        }
        let mut tuples: Vec<Vec<usize>> = Vec::with_capacity(size);
        let mut images: Vec<usize> = Vec::with_capacity(size);
        let mut digits = vec![0usize; factors.len()];
        for _ in 0..size {
            let t: Vec<usize> = digits.iter().zip(&factors).map(|(&d, f)| f[d]).collect();
            let mut img = self.bottom;
            for &z in &t {
                match self.join2(img, z) {
                    Some(j) => img = j,
                    None => return false,
                }
            }
            tuples.push(t);
            images.push(img);
            for (d, f) in digits.iter_mut().zip(&factors) {
                *d += 1;
                if *d < f.len() {
                    break;
                }
                *d = 0;
            }
        }
        if images.iter().collect::<BTreeSet<_>>().len() != size {
            return false;
        }
        for a in 0..size {
            for b in 0..size {
                let prod_leq = tuples[a].iter().zip(&tuples[b]).all(|(&p, &q)| self.leq(p, q));
                if prod_leq != self.leq(images[a], images[b]) {
                    return false;
                }
            }
        }
        true
    }

    /// Building-set test through the exchange conditions on maximal elements:
    /// the maximal elements of `S` under `x` join to `x`, and for every `y`
    /// among them and every nonempty set `T` of the others, no element of `S`
    /// lies below both `y` and `⋁T`, and `z < y` implies `z ∨ ⋁T < y ∨ ⋁T`.
    pub fn is_building_set_by_conditions(&self, s: &[usize]) -> bool {
        let in_s = self.membership(s);
        for x in (0..self.len()).filter(|&x| x != self.bottom) {
            let below: Vec<usize> = self.down[x].ones().filter(|&y| in_s[y]).collect();
            let ys = self.maximal_in(&below);
            if ys.is_empty() || self.join(&ys).ok().flatten() != Some(x) {
                return false;
            }
            for (pos, &y) in ys.iter().enumerate() {
                let others: Vec<usize> = ys.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &o)| o).collect();
                for mask in 1u64..(1u64 << others.len()) {
                    let t: Vec<usize> =
                        (0..others.len()).filter(|&k| mask >> k & 1 == 1).map(|k| others[k]).collect();
                    let Some(j) = self.join(&t).ok().flatten() else { return false };
                    if self.down[y].ones().any(|q| in_s[q] && self.leq(q, j)) {
                        return false;
                    }
                    let Some(yj) = self.join2(y, j) else { return false };
                    for z in self.down[y].ones().filter(|&z| z != y) {
                        match self.join2(z, j) {
                            Some(zj) if self.lt(zj, yj) => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }

    fn membership(&self, s: &[usize]) -> Vec<bool> {
        let mut v = vec![false; self.len()];
        for &x in s {
            v[x] = true;
        }
        v
    }

    /// Every antichain `H ⊆ C` with `|H| >= 2` has a join, and that join is not in `S`.
    pub fn is_nested(&self, s: &[usize], c: &[usize]) -> bool {
        let in_s = self.membership(s);
        let c: Vec<usize> = c.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let k = c.len();
        assert!(k < 64, "nested test limited to fewer than 64 elements");
        for mask in 1u64..(1u64 << k) {
            if mask.count_ones() < 2 {
                continue;
            }
            let h: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| c[i]).collect();
            let antichain = h.iter().all(|&a| h.iter().all(|&b| a == b || !self.leq(a, b)));
            if !antichain {
                continue;
            }
            match self.join(&h).expect("nonempty") {
                Some(j) if !in_s[j] => {}
                _ => return false,
            }
        }
        true
    }

    pub fn is_harmonious(&self, s: &[usize], a: usize, b: usize) -> bool {
        if self.meet2(a, b) == self.bottom {
            return true;
        }
        match self.join2(a, b) {
            None => true,
            Some(j) => s.contains(&j),
        }
    }

    /// Repeatedly adds the joins of all non-harmonious pairs until none remain.
    pub fn harmonious_closure(&self, s: &[usize]) -> Vec<usize> {
        let mut cur: BTreeSet<usize> = s.iter().copied().collect();
        loop {
            let v: Vec<usize> = cur.iter().copied().collect();
            let mut added = Vec::new();
            for (p, &a) in v.iter().enumerate() {
                for &b in &v[p + 1..] {
                    if !self.is_harmonious(&v, a, b) {
                        added.push(self.join2(a, b).expect("non-harmonious pairs have joins"));
                    }
                }
            }
            let before = cur.len();
            cur.extend(added);
            if cur.len() == before {
                return v;
            }
        }
    }

    /// Indices of elements given by labels; errors on an unknown label.
    pub fn indices_of(&self, labels: &[Label]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| self.index_of(l).ok_or_else(|| Error::ElementVanished(l.to_string())))
            .collect()
    }

    pub fn dump(&self) -> PosetDump {
        PosetDump {
            elements: self.labels.iter().map(|l| l.to_string()).collect(),
            hasse_edges: self.hasse_edges(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PosetDump {
    pub elements: Vec<String>,
    pub hasse_edges: Vec<(usize, usize)>,
}

/// Ordered family of pairwise distinct elements of a semilattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementFamily {
    elements: Vec<usize>,
}

impl ElementFamily {
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        if elements.iter().collect::<BTreeSet<_>>().len() != elements.len() {
            return Err(Error::InvalidInput("family elements must be distinct".into()));
        }
        Ok(ElementFamily { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// `ξ_i > ξ_j` implies `i < j`.
    pub fn is_sorted(&self, l: &FiniteSemilattice) -> bool {
        self.elements
            .iter()
            .enumerate()
            .all(|(i, &a)| self.elements[i + 1..].iter().all(|&b| !l.lt(a, b)))
    }
}

pub fn meet(l: &FiniteSemilattice, xs: &[usize]) -> Result<usize> {
    l.meet(xs)
}

pub fn join(l: &FiniteSemilattice, xs: &[usize]) -> Result<Option<usize>> {
    l.join(xs)
}

pub fn blow_up(l: &FiniteSemilattice, xi: usize) -> Result<FiniteSemilattice> {
    l.blow_up(xi)
}

pub fn iterated_blow_up(l: &FiniteSemilattice, f: &ElementFamily) -> Result<FiniteSemilattice> {
    l.iterated_blow_up(f)
}

/// Whether the elements `(ξ, 0)` for `ξ ∈ C` have a join in the iterated blow-up.
pub fn join_exists_in_blowup(l: &FiniteSemilattice, f: &ElementFamily, c: &[usize]) -> Result<bool> {
    let bl = l.iterated_blow_up(f)?;
    Ok(pair_join_exists(l, &bl, c))
}

fn pair_join_exists(l: &FiniteSemilattice, bl: &FiniteSemilattice, c: &[usize]) -> bool {
    if c.is_empty() {
        return true;
    }
    let zero = l.label(l.bottom());
    let idx: Option<Vec<usize>> = c.iter().map(|&xi| bl.index_of(&Label::pair(l.label(xi), zero))).collect();
    match idx {
        Some(idx) => bl.join(&idx).expect("nonempty").is_some(),
        None => false,
    }
}

/// Face poset of a fan, elements labelled by their ray index sets.
pub fn face_poset(f: &Fan) -> FiniteSemilattice {
    let cones = f.all_cones();
    let labels: Vec<Label> = cones.iter().map(|c| Label::Atom(ray_set_label(c))).collect();
    let sets: Vec<BTreeSet<usize>> = cones.iter().map(|c| c.iter().copied().collect()).collect();
    FiniteSemilattice::new(labels, |a, b| sets[a].is_subset(&sets[b])).expect("face posets are meet-semilattices")
}

pub fn ray_set_label(idx: &[usize]) -> String {
    format!("{{{}}}", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
}

/// Nested subsets of `S` ordered by inclusion.
pub fn nested_set_poset(l: &FiniteSemilattice, s: &[usize]) -> FiniteSemilattice {
    let s: Vec<usize> = s.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut nested: Vec<Vec<usize>> = Vec::new();
    for mask in 0u64..(1u64 << s.len()) {
        let c: Vec<usize> = (0..s.len()).filter(|&k| mask >> k & 1 == 1).map(|k| s[k]).collect();
        if l.is_nested(&s, &c) {
            nested.push(c);
        }
    }
    let labels: Vec<Label> = nested
        .iter()
        .map(|c| Label::Atom(format!("{{{}}}", c.iter().map(|&x| l.label(x).to_string()).collect::<Vec<_>>().join(";"))))
        .collect();
    let sets: Vec<BTreeSet<usize>> = nested.iter().map(|c| c.iter().copied().collect()).collect();
    FiniteSemilattice::new(labels, |a, b| sets[a].is_subset(&sets[b])).expect("inclusion order has all meets")
}

/// Exact isomorphism test: colour refinement on the covering relation, then backtracking.
pub fn poset_isomorphic(a: &FiniteSemilattice, b: &FiniteSemilattice) -> bool {
    find_isomorphism(a, b).is_some()
}

pub fn find_isomorphism(a: &FiniteSemilattice, b: &FiniteSemilattice) -> Option<Vec<usize>> {
    find_isomorphism_fixing(a, b, &[])
}

/// Isomorphism test that maps each element of `b` carrying a label also present
/// in `a` to the element of `a` with that label.
pub fn isomorphic_fixing_shared_labels(a: &FiniteSemilattice, b: &FiniteSemilattice) -> bool {
    let pins: Vec<(usize, usize)> =
        (0..a.len()).filter_map(|x| b.index_of(a.label(x)).map(|y| (x, y))).collect();
    find_isomorphism_fixing(a, b, &pins).is_some()
}

/// Isomorphism `a -> b` subject to prescribed images `pins`.
pub fn find_isomorphism_fixing(
    a: &FiniteSemilattice,
    b: &FiniteSemilattice,
    pins: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let m = a.len();
    if m != b.len() {
        return None;
    }
    let (ca, cb) = refine_colours(a, b);
    let hist = |c: &[usize]| c.iter().fold(BTreeMap::new(), |mut h: BTreeMap<usize, usize>, &x| {
        *h.entry(x).or_default() += 1;
        h
    });
    if hist(&ca) != hist(&cb) {
        return None;
    }
    let ra = a.ranks();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&x| (ra[x], x));
    let mut map = vec![usize::MAX; m];
    let mut used = vec![false; m];
    for &(x, y) in pins {
        if ca[x] != cb[y] || used[y] || (map[x] != usize::MAX && map[x] != y) {
            return None;
        }
        map[x] = y;
        used[y] = true;
    }
    let pinned: Vec<usize> = order.iter().copied().filter(|&x| map[x] != usize::MAX).collect();
    let consistent = pinned.iter().all(|&p| {
        pinned.iter().all(|&q| a.leq(p, q) == b.leq(map[p], map[q]))
    });
    if !consistent {
        return None;
    }
    let free: Vec<usize> = order.iter().copied().filter(|&x| map[x] == usize::MAX).collect();
    let order: Vec<usize> = pinned.iter().chain(&free).copied().collect();
    if extend(a, b, &ca, &cb, &order, pinned.len(), &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &FiniteSemilattice,
    b: &FiniteSemilattice,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    pos: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&x) = order.get(pos) else { return true };
    for y in 0..b.len() {
        if used[y] || cb[y] != ca[x] {
            continue;
        }
        let consistent = order[..pos].iter().all(|&p| {
            let q = map[p];
            a.leq(p, x) == b.leq(q, y) && a.leq(x, p) == b.leq(y, q)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(a, b, ca, cb, order, pos + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

fn refine_colours(a: &FiniteSemilattice, b: &FiniteSemilattice) -> (Vec<usize>, Vec<usize>) {
    let posets = [a, b];
    let covers: Vec<Vec<(usize, usize)>> = posets.iter().map(|p| p.hasse_edges()).collect();
    let mut colours: Vec<Vec<usize>> = posets
        .iter()
        .map(|p| {
            let r = p.ranks();
            (0..p.len()).map(|x| r[x] * 1_000_003 + p.down[x].count_ones(..) * 1009 + p.up[x].count_ones(..)).collect()
        })
        .collect();
    let mut classes = 0;
    loop {
        let mut sigs: Vec<Vec<(usize, Vec<usize>, Vec<usize>)>> = Vec::new();
        for (k, p) in posets.iter().enumerate() {
            let mut ups = vec![Vec::new(); p.len()];
            let mut downs = vec![Vec::new(); p.len()];
            for &(i, j) in &covers[k] {
                ups[i].push(colours[k][j]);
                downs[j].push(colours[k][i]);
            }
            sigs.push(
                (0..p.len())
                    .map(|x| {
                        ups[x].sort_unstable();
                        downs[x].sort_unstable();
                        (colours[k][x], std::mem::take(&mut ups[x]), std::mem::take(&mut downs[x]))
                    })
                    .collect(),
            );
        }
        let mut ids: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
        for s in sigs.iter().flatten() {
            let n = ids.len();
            ids.entry(s).or_insert(n);
        }
        let next: Vec<Vec<usize>> = sigs.iter().map(|v| v.iter().map(|s| ids[s]).collect()).collect();
        let n = ids.len();
        colours = next;
        if n == classes {
            break;
        }
        classes = n;
    }
    let mut it = colours.into_iter();
    (it.next().expect("two posets"), it.next().expect("two posets"))
}

// ---------------------------------------------------------------------------
// Exhaustive criterion sweep.

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CriterionSweep {
    pub families: usize,
    pub instances: usize,
    pub criterion_holds: usize,
    pub counterexamples: Vec<(Vec<String>, Vec<String>)>,
}

/// For every sorted family `F` of nonzero elements and every nonempty `C ⊆ F`:
/// whenever `C` is nested in some building set containing `F`, the join of the
/// elements `(ξ, 0)`, `ξ ∈ C`, must exist in the iterated blow-up.
pub fn criterion_sweep(l: &FiniteSemilattice) -> Result<CriterionSweep> {
    let nonzero: Vec<usize> = (0..l.len()).filter(|&x| x != l.bottom()).collect();
    if nonzero.len() > 16 {
        return Err(Error::InvalidInput("criterion sweep limited to 16 nonzero elements".into()));
    }
    let building: Vec<u64> = (0u64..(1u64 << nonzero.len()))
        .filter(|&mask| l.is_building_set(&unmask(&nonzero, mask)))
        .collect();
    let ctx = SweepCtx { l, nonzero: &nonzero, building: &building };
    let parts: Vec<CriterionSweep> = nonzero
        .par_iter()
        .map(|&first| -> Result<CriterionSweep> {
            let mut acc = CriterionSweep::default();
            let bl = l.blow_up(first)?;
            ctx.visit(&mut vec![first], &bl, &mut acc)?;
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(CriterionSweep::default(), |mut a, p| {
        a.families += p.families;
        a.instances += p.instances;
        a.criterion_holds += p.criterion_holds;
        a.counterexamples.extend(p.counterexamples);
        a
    }))
}

fn unmask(elems: &[usize], mask: u64) -> Vec<usize> {
    (0..elems.len()).filter(|&k| mask >> k & 1 == 1).map(|k| elems[k]).collect()
}

struct SweepCtx<'a> {
    l: &'a FiniteSemilattice,
    nonzero: &'a [usize],
    building: &'a [u64],
}

impl SweepCtx<'_> {
    fn mask_of(&self, xs: &[usize]) -> u64 {
        xs.iter().map(|x| 1u64 << self.nonzero.iter().position(|y| y == x).expect("nonzero")).sum()
    }

    fn visit(&self, family: &mut Vec<usize>, bl: &FiniteSemilattice, acc: &mut CriterionSweep) -> Result<()> {
        acc.families += 1;
        let fmask = self.mask_of(family);
        let supersets: Vec<u64> = self.building.iter().copied().filter(|&b| b & fmask == fmask).collect();
        for cmask in 1u64..(1u64 << family.len()) {
            let c = unmask(family, cmask);
            acc.instances += 1;
            let holds = supersets.iter().any(|&b| self.l.is_nested(&unmask(self.nonzero, b), &c));
            if !holds {
                continue;
            }
            acc.criterion_holds += 1;
            if !pair_join_exists(self.l, bl, &c) {
                let name = |xs: &[usize]| xs.iter().map(|&x| self.l.label(x).to_string()).collect();
                acc.counterexamples.push((name(family), name(&c)));
            }
        }
        for &xi in self.nonzero {
            if family.contains(&xi) || family.iter().any(|&f| self.l.lt(f, xi)) {
                continue;
            }
            let at = bl
                .index_of(self.l.label(xi))
                .ok_or_else(|| Error::ElementVanished(self.l.label(xi).to_string()))?;
            let next = bl.blow_up(at)?;
            family.push(xi);
            self.visit(family, &next, acc)?;
            family.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::QVector;
    use crate::polyhedral::Cone;

    fn orthant_fan(d: usize) -> Fan {
        Fan::from_maximal(d, vec![Cone::orthant(d)]).unwrap()
    }

    fn boolean(atoms: usize, drop_top: bool) -> FiniteSemilattice {
        let top = (1usize << atoms) - 1;
        let masks: Vec<usize> = (0..=top).filter(|&m| !(drop_top && m == top && atoms > 0)).collect();
        let labels = masks.iter().map(|m| Label::atom(format!("b{m}"))).collect();
        FiniteSemilattice::new(labels, |a, b| masks[a] & masks[b] == masks[a]).unwrap()
    }

    fn by_rays(l: &FiniteSemilattice, rays: &[usize]) -> usize {
        l.index_of(&Label::Atom(ray_set_label(rays))).unwrap()
    }

    #[test]
    fn meet_and_join_examples() {
        let l = face_poset(&Fan::from_maximal(2, vec![Cone::orthant(2)]).unwrap());
        assert_eq!(l.len(), 4);
        let (r0, r1, top) = (by_rays(&l, &[0]), by_rays(&l, &[1]), by_rays(&l, &[0, 1]));
        assert_eq!(l.join(&[r0, r1]).unwrap(), Some(top));
        assert_eq!(l.meet(&[r0, r1]).unwrap(), l.bottom());
        let b = boolean(2, true);
        let a = b.index_of(&Label::atom("b1")).unwrap();
        let c = b.index_of(&Label::atom("b2")).unwrap();
        assert_eq!(b.join(&[a, c]).unwrap(), None);
        assert!(matches!(b.meet(&[]), Err(Error::EmptySet)));
    }

    #[test]
    fn rejects_non_semilattices() {
        // Two incomparable minimal elements.
        let labels = vec![Label::atom("a"), Label::atom("b")];
        assert!(FiniteSemilattice::new(labels, |a, b| a == b).is_err());
    }

    #[test]
    fn blow_up_examples() {
        let l = face_poset(&Fan::from_maximal(2, vec![Cone::orthant(2)]).unwrap());
        let top = by_rays(&l, &[0, 1]);
        let bl = l.blow_up(top).unwrap();
        assert_eq!(bl.len(), 6);
        let sub = orthant_fan(2).stellar_subdivide(&QVector::from_i64(&[1, 1])).unwrap();
        assert!(poset_isomorphic(&bl, &face_poset(&sub)));

        let b = boolean(2, false);
        let a = b.index_of(&Label::atom("b1")).unwrap();
        let bl = b.blow_up(a).unwrap();
        let mut names: Vec<String> = bl.labels().iter().map(|l| l.to_string()).collect();
        names.sort();
        assert_eq!(names, vec!["(b1,b0)", "(b1,b2)", "b0", "b2"]);
        assert!(poset_isomorphic(&bl, &b));
        assert!(matches!(b.blow_up(b.bottom()), Err(Error::BlowUpAtBottom)));
    }

    fn cone_rays(v: &[&str]) -> Vec<QVector> {
        v.iter()
            .map(|s| QVector::from_i64(&s.split(',').map(|t| t.parse().unwrap()).collect::<Vec<i64>>()))
            .collect()
    }

    struct Example {
        l: FiniteSemilattice,
        c12: usize,
        c23: usize,
        top: usize,
        rays: [usize; 3],
    }

    fn example() -> Example {
        let l = face_poset(&orthant_fan(3));
        let c12 = by_rays(&l, &[1, 2]);
        let c23 = by_rays(&l, &[0, 1]);
        let top = by_rays(&l, &[0, 1, 2]);
        let rays = [by_rays(&l, &[2]), by_rays(&l, &[1]), by_rays(&l, &[0])];
        Example { l, c12, c23, top, rays }
    }

    #[test]
    fn example_families() {
        let e = example();
        let [r1, r2, r3] = e.rays;
        let g1 = ElementFamily::new(vec![e.c12, e.c23, r1, r2, r3]).unwrap();
        let g2 = ElementFamily::new(vec![e.c23, e.c12, r1, r2, r3]).unwrap();
        let b1 = e.l.iterated_blow_up(&g1).unwrap();
        let b2 = e.l.iterated_blow_up(&g2).unwrap();
        assert!(poset_isomorphic(&b1, &b2), "mirror images are isomorphic as abstract posets");
        assert!(!isomorphic_fixing_shared_labels(&b1, &b2), "but not by a map fixing the rays");
        let s1 = face_poset(&orthant_fan(3).iterated_stellar(&cone_rays(&["1,1,0", "0,1,1"])).unwrap());
        assert!(isomorphic_fixing_shared_labels(&b1, &b1));
        assert!(poset_isomorphic(&b1, &s1));
        let g1a = ElementFamily::new(vec![e.top, e.c12, e.c23, r1, r2, r3]).unwrap();
        let g2a = ElementFamily::new(vec![e.top, e.c23, e.c12, r1, r2, r3]).unwrap();
        let a1 = e.l.iterated_blow_up(&g1a).unwrap();
        let a2 = e.l.iterated_blow_up(&g2a).unwrap();
        let mut x: Vec<String> = a1.labels().iter().map(|l| l.to_string()).collect();
        let mut y: Vec<String> = a2.labels().iter().map(|l| l.to_string()).collect();
        x.sort();
        y.sort();
        assert_eq!(x.len(), y.len());
        assert!(poset_isomorphic(&a1, &a2));
        assert!(isomorphic_fixing_shared_labels(&a1, &a2));
        assert_eq!(e.l.iterated_blow_up(&ElementFamily::new(vec![e.c12]).unwrap()).unwrap().labels(),
                   e.l.blow_up(e.c12).unwrap().labels());
        let unsorted = ElementFamily::new(vec![r1, e.top]).unwrap();
        assert!(matches!(e.l.iterated_blow_up(&unsorted), Err(Error::FamilyNotSorted)));
    }

    #[test]
    fn building_set_examples() {
        let e = example();
        let all: Vec<usize> = (0..e.l.len()).filter(|&x| x != e.l.bottom()).collect();
        assert!(e.l.is_building_set(&all));
        let mut s = vec![e.c12, e.c23];
        s.extend(e.rays);
        assert!(!e.l.is_building_set(&s));
        assert!(!e.l.is_building_set_by_conditions(&s));
        s.push(e.top);
        assert!(e.l.is_building_set(&s));
        assert!(e.l.is_building_set_by_conditions(&s));
    }

    #[test]
    fn building_set_tests_agree_on_small_lattices() {
        for l in [face_poset(&orthant_fan(2)), face_poset(&orthant_fan(3)), boolean(2, true), boolean(3, true)] {
            let nonzero: Vec<usize> = (0..l.len()).filter(|&x| x != l.bottom()).collect();
            for mask in 0u64..(1u64 << nonzero.len()) {
                let s = unmask(&nonzero, mask);
                assert_eq!(l.is_building_set(&s), l.is_building_set_by_conditions(&s), "{s:?}");
            }
        }
    }

    #[test]
    fn nested_examples() {
        let e = example();
        let all: Vec<usize> = (0..e.l.len()).filter(|&x| x != e.l.bottom()).collect();
        assert!(e.l.is_nested(&all, &[e.rays[0], e.c12, e.top]));
        assert!(!e.l.is_nested(&all, &[e.c12, e.c23]));

        let two = Fan::from_maximal(
            3,
            vec![
                Cone::from_i64_generators(3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap(),
                Cone::from_i64_generators(3, &[&[0, 1, 0], &[0, 0, 1]]).unwrap(),
            ],
        )
        .unwrap();
        let l = face_poset(&two);
        let ends = [by_rays(&l, &[0]), by_rays(&l, &[2])];
        let all: Vec<usize> = (0..l.len()).filter(|&x| x != l.bottom()).collect();
        assert!(!l.is_nested(&all, &ends));
        assert!(!l.is_nested(&[ends[0], ends[1]], &ends));
    }

    #[test]
    fn harmonious_examples() {
        let e = example();
        let s = vec![e.c12, e.c23];
        let mut expected = vec![e.c12, e.c23, e.top];
        expected.sort_unstable();
        assert_eq!(e.l.harmonious_closure(&s), expected);
        assert_eq!(e.l.harmonious_closure(&expected), expected);
        let rays = e.rays.to_vec();
        let mut sr = rays.clone();
        sr.sort_unstable();
        assert_eq!(e.l.harmonious_closure(&rays), sr);
        let closed = e.l.harmonious_closure(&s);
        for &a in &closed {
            for &b in &closed {
                assert!(a == b || e.l.is_harmonious(&closed, a, b));
            }
        }
    }

    #[test]
    fn join_in_blowup_examples() {
        let e = example();
        let [r1, r2, r3] = e.rays;
        let g1a = ElementFamily::new(vec![e.top, e.c12, e.c23, r1, r2, r3]).unwrap();
        assert!(join_exists_in_blowup(&e.l, &g1a, &[e.c12]).unwrap());
        let closure = e.l.harmonious_closure(&[e.top, e.c12, e.c23, r1, r2, r3]);
        assert!(e.l.is_building_set(&closure));
        let direct = join_exists_in_blowup(&e.l, &g1a, &[e.c12, e.c23]).unwrap();
        let criterion = e.l.is_nested(&closure, &[e.c12, e.c23]);
        assert!(!criterion || direct);
    }

    #[test]
    fn blow_ups_along_building_sets_match_nested_set_posets() {
        for l in [face_poset(&orthant_fan(2)), face_poset(&orthant_fan(3))] {
            let nonzero: Vec<usize> = (0..l.len()).filter(|&x| x != l.bottom()).collect();
            for mask in 1u64..(1u64 << nonzero.len()) {
                let s = unmask(&nonzero, mask);
                if !l.is_building_set(&s) {
                    continue;
                }
                let mut sorted = s.clone();
                sorted.sort_by_key(|&x| std::cmp::Reverse(l.down[x].count_ones(..)));
                let fam = ElementFamily::new(sorted).unwrap();
                let bl = l.iterated_blow_up(&fam).unwrap();
                assert!(poset_isomorphic(&bl, &nested_set_poset(&l, &s)), "building set {s:?}");
            }
        }
    }

    #[test]
    fn poset_isomorphism_distinguishes() {
        assert!(!poset_isomorphic(&boolean(2, false), &boolean(2, true)));
        let chain = FiniteSemilattice::new(
            (0..4).map(|i| Label::atom(format!("c{i}"))).collect(),
            |a, b| a <= b,
        )
        .unwrap();
        assert!(!poset_isomorphic(&chain, &boolean(2, false)));
        assert!(poset_isomorphic(&boolean(3, false), &face_poset(&orthant_fan(3))));
    }

    #[test]
    fn dump_lists_hasse_edges() {
        let d = face_poset(&orthant_fan(2)).dump();
        assert_eq!(d.elements.len(), 4);
        assert_eq!(d.hasse_edges.len(), 4);
    }

    #[test]
    fn criterion_sweep_on_the_square() {
        let s = criterion_sweep(&face_poset(&orthant_fan(2))).unwrap();
        assert!(s.counterexamples.is_empty());
        assert!(s.criterion_holds > 0);
    }
}

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dd::extreme_rays;
use crate::error::{Error, Result};
use crate::exact_linalg::{
    canonical_basis, is_zero_vec, kernel_int, primitive, rank_int, reduce_modulo, zadd, zdot,
    zneg, QVector, ZVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Closed,
    RelativeInterior,
}

/// Polyhedral cone in canonical form.
///
/// The lineality space and the span equations are stored as canonical bases.
/// Generators are the extreme rays of the pointed part, reduced modulo the
/// lineality space; facet normals are reduced modulo the span equations.
/// Both lists are primitive and sorted, so `==` is equality of cones.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ambient_dim: usize,
    generators: Vec<ZVector>,
    lineality: Vec<ZVector>,
    facets: Vec<ZVector>,
    equations: Vec<ZVector>,
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |vs: &[ZVector]| {
            vs.iter()
                .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "cone[{}]", show(&self.generators))?;
        if !self.lineality.is_empty() {
            write!(f, " + lin[{}]", show(&self.lineality))?;
        }
        Ok(())
    }
}

fn check_dims(dim: usize, vs: &[ZVector]) -> Result<()> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(Error::DimensionMismatch { expected: dim, found: v.len() }),
        None => Ok(()),
    }
}

impl Cone {
    pub fn from_generators(ambient_dim: usize, generators: &[ZVector]) -> Result<Cone> {
        check_dims(ambient_dim, generators)?;
        let gens: Vec<ZVector> = generators
            .iter()
            .filter(|g| !is_zero_vec(g))
            .map(|g| primitive(g.clone()))
            .collect();
        let dual = extreme_rays(ambient_dim, &gens);
        let equations = canonical_basis(&dual.lineality, ambient_dim);
        let mut facets: Vec<ZVector> =
            dual.rays.iter().map(|h| reduce_modulo(h, &equations)).collect();
        facets.sort();
        facets.dedup();

        let mut constraint_rows = facets.clone();
        constraint_rows.extend(equations.iter().cloned());
        let lineality = canonical_basis(&kernel_int(&constraint_rows, ambient_dim), ambient_dim);

        let pointed_dim = ambient_dim - equations.len() - lineality.len();
        let mut extreme: Vec<ZVector> = Vec::new();
        for g in &gens {
            let reduced = reduce_modulo(g, &lineality);
            if is_zero_vec(&reduced) {
                continue;
            }
            let mut tight: Vec<ZVector> =
                facets.iter().filter(|f| zdot(f, g).is_zero()).cloned().collect();
            tight.extend(equations.iter().cloned());
            let face_dim = ambient_dim - rank_int(&tight, ambient_dim) - lineality.len();
            if face_dim == 1 || pointed_dim == 1 {
                extreme.push(reduced);
            }
        }
        extreme.sort();
        extreme.dedup();
        Ok(Cone { ambient_dim, generators: extreme, lineality, facets, equations })
    }

    pub fn from_i64_generators(ambient_dim: usize, generators: &[&[i64]]) -> Result<Cone> {
        let gens: Vec<ZVector> = generators.iter().map(|g| crate::exact_linalg::zvec(g)).collect();
        Self::from_generators(ambient_dim, &gens)
    }

    pub fn from_qvectors(ambient_dim: usize, generators: &[QVector]) -> Result<Cone> {
        let gens: Vec<ZVector> = generators.iter().map(QVector::to_primitive).collect();
        Self::from_generators(ambient_dim, &gens)
    }

    /// `{x : a·x >= 0 for a in inequalities, e·x = 0 for e in equations}`.
    pub fn from_constraints(
        ambient_dim: usize,
        inequalities: &[ZVector],
        equations: &[ZVector],
    ) -> Result<Cone> {
        check_dims(ambient_dim, inequalities)?;
        check_dims(ambient_dim, equations)?;
        let mut cons = inequalities.to_vec();
        for e in equations {
            cons.push(e.clone());
            cons.push(zneg(e));
        }
        let out = extreme_rays(ambient_dim, &cons);
        let mut gens = out.rays;
        for l in &out.lineality {
            gens.push(l.clone());
            gens.push(zneg(l));
        }
        Self::from_generators(ambient_dim, &gens)
    }

    pub fn zero(ambient_dim: usize) -> Cone {
        Self::from_generators(ambient_dim, &[]).expect("no generators")
    }

    pub fn orthant(ambient_dim: usize) -> Cone {
        let gens: Vec<ZVector> = (0..ambient_dim).map(|i| unit(ambient_dim, i)).collect();
        Self::from_generators(ambient_dim, &gens).expect("unit vectors")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[ZVector] {
        &self.generators
    }

    pub fn lineality(&self) -> &[ZVector] {
        &self.lineality
    }

    pub fn facets(&self) -> &[ZVector] {
        &self.facets
    }

    pub fn span_equations(&self) -> &[ZVector] {
        &self.equations
    }

    /// Generators together with both orientations of the lineality basis.
    pub fn all_generators(&self) -> Vec<ZVector> {
        let mut g = self.generators.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(zneg(l));
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && self.generators.len() == self.dim()
    }

    pub fn is_zero_cone(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn contains(&self, p: &QVector, mode: Membership) -> Result<bool> {
        if p.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: p.dim() });
        }
        Ok(self.contains_int(&p.to_primitive(), mode))
    }

    /// Membership of an integer point (any positive multiple gives the same answer).
    pub fn contains_int(&self, p: &[BigInt], mode: Membership) -> bool {
        if self.equations.iter().any(|e| !zdot(e, p).is_zero()) {
            return false;
        }
        match mode {
            Membership::Closed => self.facets.iter().all(|f| !zdot(f, p).is_negative()),
            Membership::RelativeInterior => self.facets.iter().all(|f| zdot(f, p).is_positive()),
        }
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains_int(g, Membership::Closed))
            && other.lineality.iter().all(|l| {
                self.contains_int(l, Membership::Closed)
                    && self.contains_int(&zneg(l), Membership::Closed)
            })
    }

    /// Sum of the generators; lies in the relative interior.
    pub fn relint_rep(&self) -> ZVector {
        self.generators
            .iter()
            .fold(vec![BigInt::zero(); self.ambient_dim], |acc, g| zadd(&acc, g))
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_constraints(self.ambient_dim, &ineqs, &eqs)
    }

    /// Intersection of a collection of cones in one elimination pass.
    pub fn intersect_all<'a>(ambient_dim: usize, cones: impl IntoIterator<Item = &'a Cone>) -> Result<Cone> {
        let mut ineqs: BTreeSet<ZVector> = BTreeSet::new();
        let mut eqs: BTreeSet<ZVector> = BTreeSet::new();
        for c in cones {
            if c.ambient_dim != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: c.ambient_dim });
            }
            ineqs.extend(c.facets.iter().cloned());
            eqs.extend(c.equations.iter().cloned());
        }
        let ineqs: Vec<ZVector> = ineqs.into_iter().collect();
        let eqs: Vec<ZVector> = eqs.into_iter().collect();
        Cone::from_constraints(ambient_dim, &ineqs, &eqs)
    }

    /// `self ∩ {h·x >= 0}`.
    pub fn cut(&self, h: &[BigInt]) -> Result<Cone> {
        let mut ineqs = self.facets.clone();
        ineqs.push(h.to_vec());
        Cone::from_constraints(self.ambient_dim, &ineqs, &self.equations)
    }

    /// Signs taken by `h` on the cone: (some positive value, some negative value).
    pub fn sign_profile(&self, h: &[BigInt]) -> (bool, bool) {
        let mut pos = false;
        let mut neg = false;
        for g in &self.generators {
            let s = zdot(h, g);
            pos |= s.is_positive();
            neg |= s.is_negative();
        }
        if self.lineality.iter().any(|l| !zdot(h, l).is_zero()) {
            pos = true;
            neg = true;
        }
        (pos, neg)
    }

    /// Index sets (into `generators`) of all faces, from the minimal face up.
    pub fn face_generator_sets(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.generators.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(all.clone());
        queue.push_back(all);
        while let Some(face) = queue.pop_front() {
            for f in &self.facets {
                let sub: Vec<usize> =
                    face.iter().copied().filter(|&g| zdot(f, &self.generators[g]).is_zero()).collect();
                if sub.len() < face.len() && seen.insert(sub.clone()) {
                    queue.push_back(sub);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
        out.sort_by_key(|s| s.len());
        out
    }

    /// The face generated by a subset of the generators (plus the lineality).
    pub fn face_from_generators(&self, idx: &[usize]) -> Result<Cone> {
        let mut gens: Vec<ZVector> = idx.iter().map(|&i| self.generators[i].clone()).collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(zneg(l));
        }
        Cone::from_generators(self.ambient_dim, &gens)
    }

    pub fn faces(&self) -> Vec<Cone> {
        self.face_generator_sets()
            .iter()
            .map(|s| self.face_from_generators(s).expect("subset of own generators"))
            .collect()
    }

    /// Whether `self` is a face of `other`.
    pub fn is_face_of(&self, other: &Cone) -> bool {
        if self.ambient_dim != other.ambient_dim || !other.contains_cone(self) {
            return false;
        }
        if self.lineality != other.lineality {
            return false;
        }
        let spanning = self.all_generators();
        let supporting: Vec<&ZVector> = other
            .facets
            .iter()
            .filter(|f| spanning.iter().all(|g| zdot(f, g).is_zero()))
            .collect();
        let face_gens: Vec<ZVector> = other
            .generators
            .iter()
            .filter(|g| supporting.iter().all(|f| zdot(f, g).is_zero()))
            .cloned()
            .collect();
        face_gens == self.generators
    }
}

pub(crate) fn unit(dim: usize, i: usize) -> ZVector {
    let mut e = vec![BigInt::zero(); dim];
    e[i] = BigInt::from(1);
    e
}

/// Full-dimensional regions (relative to the span of `cone`) cut out by the
/// hyperplanes `h·x = 0`, sorted canonically.
pub fn arrangement_regions(cone: &Cone, hyperplanes: &[ZVector]) -> Result<Vec<Cone>> {
    check_dims(cone.ambient_dim, hyperplanes)?;
    let mut regions = vec![cone.clone()];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(regions.len());
        for r in regions {
            let (pos, neg) = r.sign_profile(h);
            if pos && neg {
                next.push(r.cut(h)?);
                next.push(r.cut(&zneg(h))?);
            } else {
                next.push(r);
            }
        }
        regions = next;
    }
    regions.sort();
    Ok(regions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::zvec;

    fn c(dim: usize, gens: &[&[i64]]) -> Cone {
        Cone::from_i64_generators(dim, gens).unwrap()
    }

    #[test]
    fn dual_description_examples() {
        let q = c(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(q.facets(), &[zvec(&[0, 1]), zvec(&[1, 0])]);
        assert!(q.span_equations().is_empty());

        let h = c(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(h.facets(), &[zvec(&[0, 1])]);
        assert!(h.span_equations().is_empty());
        assert_eq!(h.lineality(), &[zvec(&[1, 0])]);
        assert_eq!(h.generators(), &[zvec(&[0, 1])]);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let k = c(2, &[&[1, 0], &[1, 1], &[0, 1], &[2, 0]]);
        assert_eq!(k.generators(), &[zvec(&[0, 1]), zvec(&[1, 0])]);
    }

    #[test]
    fn membership_examples() {
        let q = c(2, &[&[1, 0], &[0, 1]]);
        assert!(q.contains(&QVector::from_i64(&[1, 1]), Membership::RelativeInterior).unwrap());
        assert!(!q.contains(&QVector::from_i64(&[1, 0]), Membership::RelativeInterior).unwrap());
        assert!(q.contains(&QVector::from_i64(&[1, 0]), Membership::Closed).unwrap());
        let omega = Cone::orthant(3);
        assert!(omega.contains(&QVector::from_i64(&[1, 2, 3]), Membership::RelativeInterior).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let a = c(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = c(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), c(3, &[&[0, 1, 0]]));
        let corner = Cone::orthant(3).cut(&zvec(&[1, -1, -1])).unwrap();
        assert_eq!(corner, c(3, &[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1]]));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn face_examples() {
        assert_eq!(c(2, &[&[1, 0], &[0, 1]]).faces().len(), 4);
        assert_eq!(c(2, &[&[1, 1]]).faces().len(), 2);
        assert_eq!(Cone::orthant(4).faces().len(), 16);
        let pyramid = c(3, &[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]);
        assert_eq!(pyramid.faces().len(), 1 + 4 + 4 + 1);
    }

    #[test]
    fn face_relation() {
        let q = Cone::orthant(3);
        let e12 = c(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(e12.is_face_of(&q));
        assert!(!c(3, &[&[1, 1, 0]]).is_face_of(&q));
        assert!(Cone::zero(3).is_face_of(&q));
        let half = c(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        let line = c(2, &[&[1, 0], &[-1, 0]]);
        assert!(line.is_face_of(&half));
        assert!(!Cone::zero(2).is_face_of(&half));
    }

    #[test]
    fn round_trip_through_constraints() {
        let k = c(3, &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1], &[0, 0, 1]]);
        let back = Cone::from_constraints(3, k.facets(), k.span_equations()).unwrap();
        assert_eq!(back, k);
        let flat = c(3, &[&[1, 0, 0], &[1, 1, 0]]);
        let back = Cone::from_constraints(3, flat.facets(), flat.span_equations()).unwrap();
        assert_eq!(back, flat);
    }

    #[test]
    fn regions_of_orthant_under_a_wall() {
        let regions = arrangement_regions(&Cone::orthant(2), &[zvec(&[1, -1])]).unwrap();
        assert_eq!(regions.len(), 2);
        let regions = arrangement_regions(&Cone::orthant(2), &[zvec(&[1, 1])]).unwrap();
        assert_eq!(regions.len(), 1);
    }
}

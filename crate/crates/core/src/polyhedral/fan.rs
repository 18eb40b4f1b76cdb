use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::cone::{Cone, Membership};
use crate::error::{Error, Result};
use crate::exact_linalg::{is_zero_vec, zdot, QVector, ZVector};

/// A polyhedral fan given by its maximal cones.
///
/// All maximal cones share the fan's lineality space; `cone_rays[i]` lists the
/// indices into `rays` of the generators of `cones[i]`. Maximal cones are
/// sorted by their ray index lists, so `==` is equality of fans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient_dim: usize,
    rays: Vec<ZVector>,
    lineality: Vec<ZVector>,
    cones: Vec<Cone>,
    cone_rays: Vec<Vec<usize>>,
}

/// Validates the pairwise common-face condition and keeps the maximal cones.
pub fn fan_from_maximal(ambient_dim: usize, cones: Vec<Cone>) -> Result<Fan> {
    Fan::from_maximal(ambient_dim, cones)
}

impl Fan {
    pub fn from_maximal(ambient_dim: usize, cones: Vec<Cone>) -> Result<Fan> {
        if let Some(c) = cones.iter().find(|c| c.ambient_dim() != ambient_dim) {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: c.ambient_dim() });
        }
        let mut cones = cones;
        cones.sort();
        cones.dedup();
        let draft = Fan::assemble(ambient_dim, cones)?;
        validate_pairs(&draft)?;
        let keep: Vec<Cone> = (0..draft.cones.len())
            .filter(|&i| {
                !(0..draft.cones.len()).any(|j| {
                    j != i
                        && is_subset(&draft.cone_rays[i], &draft.cone_rays[j])
                        && draft.cones[j].contains_cone(&draft.cones[i])
                })
            })
            .map(|i| draft.cones[i].clone())
            .collect();
        Fan::assemble(ambient_dim, keep)
    }

    /// Builds a fan from cones already known to be the maximal cones of a fan.
    pub(crate) fn from_maximal_trusted(ambient_dim: usize, mut cones: Vec<Cone>) -> Result<Fan> {
        cones.sort();
        cones.dedup();
        Fan::assemble(ambient_dim, cones)
    }

    fn assemble(ambient_dim: usize, cones: Vec<Cone>) -> Result<Fan> {
        let lineality = match cones.first() {
            Some(c) => c.lineality().to_vec(),
            None => Vec::new(),
        };
        if cones.iter().any(|c| c.lineality() != lineality.as_slice()) {
            return Err(Error::InvalidInput("maximal cones have different lineality spaces".into()));
        }
        let rays: Vec<ZVector> =
            cones.iter().flat_map(|c| c.generators().iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        let index: BTreeMap<&ZVector, usize> = rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut pairs: Vec<(Vec<usize>, Cone)> = cones
            .into_iter()
            .map(|c| {
                let mut idx: Vec<usize> = c.generators().iter().map(|g| index[g]).collect();
                idx.sort_unstable();
                (idx, c)
            })
            .collect();
        pairs.sort();
        let (cone_rays, cones) = pairs.into_iter().unzip();
        Ok(Fan { ambient_dim, rays, lineality, cones, cone_rays })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[ZVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[ZVector] {
        &self.lineality
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone_rays(&self) -> &[Vec<usize>] {
        &self.cone_rays
    }

    pub fn ray_index(&self, r: &[num_bigint::BigInt]) -> Option<usize> {
        self.rays.binary_search_by(|x| x.as_slice().cmp(r)).ok()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(Cone::dim).max().unwrap_or(0)
    }

    /// Every cone of the fan as a sorted list of ray indices (pointed fans).
    pub fn all_cones(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (c, idx) in self.cones.iter().zip(&self.cone_rays) {
            let gen_pos: Vec<usize> = c.generators().iter().map(|g| self.ray_index(g).expect("pooled")).collect();
            if c.is_simplicial() {
                for mask in 0u64..(1u64 << idx.len()) {
                    out.insert((0..idx.len()).filter(|&k| mask >> k & 1 == 1).map(|k| idx[k]).collect());
                }
            } else {
                for face in c.face_generator_sets() {
                    let mut s: Vec<usize> = face.iter().map(|&g| gen_pos[g]).collect();
                    s.sort_unstable();
                    out.insert(s);
                }
            }
        }
        let mut v: Vec<Vec<usize>> = out.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }

    /// The cone spanned by the given rays together with the lineality space.
    pub fn cone_from_rays(&self, idx: &[usize]) -> Result<Cone> {
        let mut gens: Vec<ZVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(crate::exact_linalg::zneg(l));
        }
        Cone::from_generators(self.ambient_dim, &gens)
    }

    /// Codimension-one faces shared by at least two maximal cones.
    pub fn walls(&self) -> Vec<Vec<usize>> {
        let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &self.cones {
            for f in c.facets() {
                let mut s: Vec<usize> = c
                    .generators()
                    .iter()
                    .filter(|g| zdot(f, g).is_zero())
                    .map(|g| self.ray_index(g).expect("pooled"))
                    .collect();
                s.sort_unstable();
                *count.entry(s).or_default() += 1;
            }
        }
        count.into_iter().filter(|(_, k)| *k >= 2).map(|(s, _)| s).collect()
    }

    pub fn support_contains(&self, p: &[num_bigint::BigInt]) -> bool {
        self.cones.iter().any(|c| c.contains_int(p, Membership::Closed))
    }

    /// Ray indices of the cone containing `p` in its relative interior.
    pub fn carrier(&self, p: &[num_bigint::BigInt]) -> Option<Vec<usize>> {
        let c = self.cones.iter().find(|c| c.contains_int(p, Membership::Closed))?;
        let tight: Vec<&ZVector> = c.facets().iter().filter(|f| zdot(f, p).is_zero()).collect();
        let mut s: Vec<usize> = c
            .generators()
            .iter()
            .filter(|g| tight.iter().all(|f| zdot(f, g).is_zero()))
            .map(|g| self.ray_index(g).expect("pooled"))
            .collect();
        s.sort_unstable();
        Some(s)
    }

    /// Whether `c` is a cone of this fan.
    pub fn has_cone(&self, c: &Cone) -> bool {
        self.matching_maximal(c).is_some()
    }

    /// Index of a maximal cone having `c` as a face.
    pub fn matching_maximal(&self, c: &Cone) -> Option<usize> {
        if c.ambient_dim() != self.ambient_dim || c.lineality() != self.lineality.as_slice() {
            return None;
        }
        if self.is_simplicial() {
            if !c.is_simplicial() {
                return None;
            }
            let idx: Vec<usize> =
                c.generators().iter().map(|g| self.ray_index(g)).collect::<Option<_>>()?;
            let mut idx = idx;
            idx.sort_unstable();
            return (0..self.cones.len()).find(|&i| is_subset(&idx, &self.cone_rays[i]));
        }
        (0..self.cones.len()).find(|&i| c.is_face_of(&self.cones[i]))
    }

    /// Stellar subdivision of a simplicial fan in the ray through `ray`.
    pub fn stellar_subdivide(&self, ray: &QVector) -> Result<Fan> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if ray.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: ray.dim() });
        }
        let nu = ray.to_primitive();
        if is_zero_vec(&nu) {
            return Err(Error::InvalidInput("cannot subdivide in the zero vector".into()));
        }
        let tau = self.carrier(&nu).ok_or(Error::RayOutsideSupport)?;
        if tau.len() == 1 {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity(self.cones.len() + tau.len());
        for (c, idx) in self.cones.iter().zip(&self.cone_rays) {
            if !is_subset(&tau, idx) {
                out.push(c.clone());
                continue;
            }
            for t in &tau {
                let mut gens: Vec<ZVector> =
                    idx.iter().filter(|&i| i != t).map(|&i| self.rays[i].clone()).collect();
                gens.push(nu.clone());
                out.push(Cone::from_generators(self.ambient_dim, &gens)?);
            }
        }
        Fan::from_maximal_trusted(self.ambient_dim, out)
    }

    pub fn iterated_stellar(&self, rays: &[QVector]) -> Result<Fan> {
        rays.iter().try_fold(self.clone(), |f, r| f.stellar_subdivide(r))
    }

    /// Whether every cone of `self` is a cone of `other`.
    pub fn is_subfan(&self, other: &Fan) -> bool {
        self.ambient_dim == other.ambient_dim && self.cones.iter().all(|c| other.has_cone(c))
    }

    /// For each maximal cone of `self`, a maximal cone of `other` containing it as a face.
    pub fn subfan_certificates(&self, other: &Fan) -> Vec<Option<usize>> {
        self.cones.iter().map(|c| other.matching_maximal(c)).collect()
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Checks every pair of cones of a draft fan, using a precomputed table of
/// facet-by-ray signs to skip pairs separated by a facet of a simplicial cone.
fn validate_pairs(f: &Fan) -> Result<()> {
    let signs: Vec<Vec<Vec<i8>>> = f
        .cones
        .iter()
        .map(|c| {
            c.facets()
                .iter()
                .map(|h| f.rays.iter().map(|r| sign(&zdot(h, r))).collect())
                .collect()
        })
        .collect();
    let nonpointed = !f.lineality.is_empty();
    let separated = |a: usize, b: usize| -> bool {
        if nonpointed || !f.cones[a].is_simplicial() {
            return false;
        }
        signs[a].iter().any(|row| {
            f.cone_rays[b].iter().all(|&r| {
                row[r] < 0 || (row[r] == 0 && f.cone_rays[a].binary_search(&r).is_ok())
            })
        })
    };
    for i in 0..f.cones.len() {
        for j in i + 1..f.cones.len() {
            if separated(i, j) || separated(j, i) {
                continue;
            }
            let meet = f.cones[i].intersect(&f.cones[j])?;
            if !(meet.is_face_of(&f.cones[i]) && meet.is_face_of(&f.cones[j])) {
                return Err(Error::FanAxiomViolation { first: i, second: j });
            }
        }
    }
    Ok(())
}

fn sign(x: &num_bigint::BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(gens: &[&[i64]]) -> Cone {
        let d = gens[0].len();
        Cone::from_i64_generators(d, gens).unwrap()
    }

    fn fan(cones: Vec<Cone>) -> Fan {
        let d = cones[0].ambient_dim();
        Fan::from_maximal(d, cones).unwrap()
    }

    #[test]
    fn validation_examples() {
        fan(vec![c(&[&[1, 0], &[0, 1]])]);
        fan(vec![c(&[&[1, 0, 0], &[0, 1, 0]]), c(&[&[0, 1, 0], &[0, 0, 1]])]);
        let bad = Fan::from_maximal(2, vec![c(&[&[1, 0], &[1, 1]]), c(&[&[0, 1], &[2, 1]])]);
        assert!(matches!(bad, Err(Error::FanAxiomViolation { .. })));
    }

    #[test]
    fn faces_of_maximal_cones_are_dropped() {
        let f = fan(vec![c(&[&[1, 0], &[0, 1]]), c(&[&[1, 0]])]);
        assert_eq!(f.maximal_cones().len(), 1);
    }

    fn example_rays() -> (QVector, QVector, QVector) {
        (QVector::from_i64(&[1, 1, 0]), QVector::from_i64(&[0, 1, 1]), QVector::from_i64(&[1, 1, 1]))
    }

    fn ray_sets(f: &Fan) -> BTreeSet<BTreeSet<Vec<i64>>> {
        f.cone_rays()
            .iter()
            .map(|idx| {
                idx.iter()
                    .map(|&i| f.rays()[i].iter().map(|x| i64::try_from(x).unwrap()).collect())
                    .collect()
            })
            .collect()
    }

    fn set(cones: &[&[&[i64]]]) -> BTreeSet<BTreeSet<Vec<i64>>> {
        cones.iter().map(|c| c.iter().map(|r| r.to_vec()).collect()).collect()
    }

    #[test]
    fn stellar_examples() {
        let (nu1, nu2, nu0) = example_rays();
        let base = fan(vec![Cone::orthant(3)]);
        let s1 = base.stellar_subdivide(&nu1).unwrap();
        assert_eq!(
            ray_sets(&s1),
            set(&[&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]], &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]])
        );
        let s12 = s1.stellar_subdivide(&nu2).unwrap();
        assert_eq!(
            ray_sets(&s12),
            set(&[
                &[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]],
                &[&[1, 1, 0], &[0, 1, 0], &[0, 1, 1]],
                &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]],
            ])
        );
        assert_eq!(s12.stellar_subdivide(&QVector::from_i64(&[0, 1, 0])).unwrap(), s12);
        let s21 = base.iterated_stellar(&[nu2.clone(), nu1.clone()]).unwrap();
        assert_ne!(s12, s21);
        assert!(!s12.is_subfan(&s21) && !s21.is_subfan(&s12));
        let a = base.iterated_stellar(&[nu0.clone(), nu1.clone(), nu2.clone()]).unwrap();
        let b = base.iterated_stellar(&[nu0, nu2, nu1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(base.iterated_stellar(&[]).unwrap(), base);
        assert!(matches!(
            base.stellar_subdivide(&QVector::from_i64(&[-1, 0, 0])),
            Err(Error::RayOutsideSupport)
        ));
    }

    #[test]
    fn stellar_output_is_a_valid_fan() {
        let (nu1, nu2, nu0) = example_rays();
        let f = fan(vec![Cone::orthant(3)]).iterated_stellar(&[nu0, nu1, nu2]).unwrap();
        let again = Fan::from_maximal(3, f.maximal_cones().to_vec()).unwrap();
        assert_eq!(again, f);
        assert_eq!(f.maximal_cones().len(), 5);
    }

    #[test]
    fn subfan_examples() {
        let f = fan(vec![c(&[&[1, 0, 0], &[0, 1, 0]]), c(&[&[0, 1, 0], &[0, 0, 1]])]);
        assert!(f.is_subfan(&f));
        assert!(fan(vec![c(&[&[1, 0, 0], &[0, 1, 0]])]).is_subfan(&f));
        assert!(!fan(vec![c(&[&[1, 0, 0], &[0, 0, 1]])]).is_subfan(&f));
    }

    #[test]
    fn walls_of_subdivided_orthant() {
        let (nu1, _, _) = example_rays();
        let f = fan(vec![Cone::orthant(3)]).stellar_subdivide(&nu1).unwrap();
        assert_eq!(f.walls().len(), 1);
    }
}

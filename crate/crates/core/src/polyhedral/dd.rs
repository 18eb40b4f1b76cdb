//! Double description: generators of `{x : a·x >= 0 for all constraints a}`.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact_linalg::{is_zero_vec, primitive, zcombine, zdot, ZVector};

pub(crate) struct DdOutput {
    /// Extreme rays modulo the lineality space, primitive.
    pub rays: Vec<ZVector>,
    /// Basis of the lineality space.
    pub lineality: Vec<ZVector>,
}

struct Ray {
    v: ZVector,
    zero: FixedBitSet,
}

pub(crate) fn extreme_rays(dim: usize, constraints: &[ZVector]) -> DdOutput {
    let mut cons: Vec<ZVector> = constraints
        .iter()
        .filter(|a| !is_zero_vec(a))
        .map(|a| primitive(a.clone()))
        .collect();
    cons.sort();
    cons.dedup();
    let m = cons.len();

    let mut lineality: Vec<ZVector> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in cons.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !zdot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(pos);
            let mut s0 = zdot(a, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let s = zdot(a, l);
                if !s.is_zero() {
                    *l = primitive(zcombine(&s0, l, &-s, &l0));
                }
            }
            for r in rays.iter_mut() {
                let s = zdot(a, &r.v);
                if !s.is_zero() {
                    r.v = primitive(zcombine(&s0, &r.v, &-s, &l0));
                }
                r.zero.insert(k);
            }
            let mut zero = FixedBitSet::with_capacity(m);
            zero.insert_range(..k);
            rays.push(Ray { v: l0, zero });
            continue;
        }

        let signs: Vec<BigInt> = rays.iter().map(|r| zdot(a, &r.v)).collect();
        let needed = dim.saturating_sub(lineality.len() + 2);
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (i, s) in signs.iter().enumerate() {
            if s.is_negative() {
                continue;
            }
            let mut zero = rays[i].zero.clone();
            if s.is_zero() {
                zero.insert(k);
            }
            next.push(Ray { v: rays[i].v.clone(), zero });
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_negative()).collect();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zero.clone();
                common.intersect_with(&rays[q].zero);
                if common.count_ones(..) < needed {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == q || !common.is_subset(&rays[r].zero));
                if !adjacent {
                    continue;
                }
                let v = primitive(zcombine(&signs[p], &rays[q].v, &-&signs[q], &rays[p].v));
                common.insert(k);
                next.push(Ray { v, zero: common });
            }
        }
        rays = next;
    }

    DdOutput { rays: rays.into_iter().map(|r| r.v).collect(), lineality }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::zvec;

    #[test]
    fn orthant() {
        let out = extreme_rays(2, &[zvec(&[1, 0]), zvec(&[0, 1])]);
        let mut rays = out.rays;
        rays.sort();
        assert_eq!(rays, vec![zvec(&[0, 1]), zvec(&[1, 0])]);
        assert!(out.lineality.is_empty());
    }

    #[test]
    fn half_plane_keeps_a_line() {
        let out = extreme_rays(2, &[zvec(&[0, 1])]);
        assert_eq!(out.rays.len(), 1);
        assert_eq!(out.lineality.len(), 1);
    }

    #[test]
    fn square_pyramid() {
        // x3 >= ±x1, x3 >= ±x2: four extreme rays (±1, ±1, 1).
        let cons = [zvec(&[1, 0, 1]), zvec(&[-1, 0, 1]), zvec(&[0, 1, 1]), zvec(&[0, -1, 1])];
        let out = extreme_rays(3, &cons);
        let mut rays = out.rays;
        rays.sort();
        assert_eq!(
            rays,
            vec![zvec(&[-1, -1, 1]), zvec(&[-1, 1, 1]), zvec(&[1, -1, 1]), zvec(&[1, 1, 1])]
        );
    }
}

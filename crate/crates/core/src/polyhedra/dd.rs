//! Incremental double description for polyhedral cones over the integers.
//!
//! The cone is `{y : <a, y> >= 0 for a in ineqs, <e, y> = 0 for e in eqs}`.
//! Output is a lineality basis plus the extreme rays of the pointed part,
//! every vector primitive.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::IntVector;
use crate::linalg;

#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lines: Vec<IntVector>,
    pub rays: Vec<IntVector>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ineq,
    Eq,
}

fn primitive_or_self(v: IntVector) -> IntVector {
    let g = v.content();
    if g.is_zero() || g == BigInt::from(1) {
        return v;
    }
    IntVector::new(v.into_inner().into_iter().map(|x| x / &g).collect())
}

/// `c * g - d * l`
fn eliminate(g: &IntVector, d: &BigInt, l: &IntVector, c: &BigInt) -> IntVector {
    let out: Vec<BigInt> = g
        .entries()
        .iter()
        .zip(l.entries())
        .map(|(gi, li)| c * gi - d * li)
        .collect();
    primitive_or_self(IntVector::new(out))
}

pub(crate) fn cone_generators(dim: usize, ineqs: &[IntVector], eqs: &[IntVector]) -> ConeGenerators {
    let mut lines: Vec<IntVector> = (0..dim).map(|i| IntVector::unit(dim, i)).collect();
    let mut rays: Vec<IntVector> = Vec::new();
    let mut processed: Vec<&IntVector> = Vec::new();

    let constraints = eqs.iter().map(|e| (e, Kind::Eq)).chain(ineqs.iter().map(|a| (a, Kind::Ineq)));
    for (a, kind) in constraints {
        if a.is_zero() {
            continue;
        }
        if let Some(pos) = lines.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l = lines.swap_remove(pos);
            let mut c = a.dot(&l);
            if c.is_negative() {
                l = -&l;
                c = -c;
            }
            for g in lines.iter_mut().chain(rays.iter_mut()) {
                let d = a.dot(g);
                if !d.is_zero() {
                    *g = eliminate(g, &d, &l, &c);
                }
            }
            if kind == Kind::Ineq {
                rays.push(l);
            }
            processed.push(a);
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| a.dot(r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<IntVector> = (0..rays.len())
            .filter(|&i| vals[i].is_zero() || (kind == Kind::Ineq && vals[i].is_positive()))
            .map(|i| rays[i].clone())
            .collect();

        if !pos.is_empty() && !neg.is_empty() {
            let tight: Vec<Vec<bool>> = rays
                .iter()
                .map(|r| processed.iter().map(|p| p.dot(r).is_zero()).collect())
                .collect();
            // rank of the processed constraints at an extreme ray
            let target = dim - lines.len() - 1;
            for &i in &pos {
                for &j in &neg {
                    let common: Vec<usize> = (0..processed.len()).filter(|&k| tight[i][k] && tight[j][k]).collect();
                    if common.len() + 1 < target {
                        continue;
                    }
                    // combinatorial pre-test: no third ray tight on all of `common`
                    let dominated = (0..rays.len()).any(|r| r != i && r != j && common.iter().all(|&k| tight[r][k]));
                    if dominated {
                        continue;
                    }
                    let normals: Vec<IntVector> = common.iter().map(|&k| processed[k].clone()).collect();
                    if linalg::rank_int(&normals) + 1 != target {
                        continue;
                    }
                    let vi = &vals[i];
                    let vj = &vals[j];
                    // |vj| r_j + vi r_i lies on the hyperplane
                    next.push(eliminate(&rays[j], vj, &rays[i], vi));
                }
            }
        }
        rays = next;
        rays.sort();
        rays.dedup();
        processed.push(a);
    }
    ConeGenerators { lines, rays }
}

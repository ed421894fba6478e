//! Tropical (max-plus) polynomials, their corner loci and dual subdivisions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::complexes::{Cell, WeightedComplex};
use crate::error::{Error, Result};
use crate::lattice::IntVector;
use crate::linalg::Rat;
use crate::polyhedra::Polyhedron;

/// `x -> max_α (c_α + <α, x>)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial {
    n: usize,
    terms: BTreeMap<IntVector, Rat>,
}

impl TropicalPolynomial {
    pub fn new(n: usize, terms: Vec<(IntVector, Rat)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Invalid("tropical polynomial needs at least one term".into()));
        }
        let mut map = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: alpha.len() });
            }
            if map.insert(alpha.clone(), c).is_some() {
                return Err(Error::Invalid(format!("repeated exponent {alpha}")));
            }
        }
        Ok(TropicalPolynomial { n, terms: map })
    }

    /// Convenience constructor from small integer exponents and coefficients
    /// given as `(numerator, denominator)`.
    pub fn from_i64(n: usize, terms: &[(&[i64], (i64, i64))]) -> Result<Self> {
        Self::new(
            n,
            terms
                .iter()
                .map(|(e, (a, b))| (IntVector::from_i64s(e), Rat::new(BigInt::from(*a), BigInt::from(*b))))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<IntVector, Rat> {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<IntVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn evaluate(&self, x: &[Rat]) -> (Rat, Vec<IntVector>) {
        let mut best: Option<Rat> = None;
        let mut argmax = Vec::new();
        for (alpha, c) in &self.terms {
            let val = c + alpha.dot_rat(x);
            match &best {
                Some(b) if val < *b => {}
                Some(b) if val == *b => argmax.push(alpha.clone()),
                _ => {
                    best = Some(val);
                    argmax = vec![alpha.clone()];
                }
            }
        }
        (best.expect("nonempty"), argmax)
    }

    /// Tropical product: exponents add, coefficients add, maxima kept.
    pub fn product(&self, other: &TropicalPolynomial) -> TropicalPolynomial {
        let mut map: BTreeMap<IntVector, Rat> = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let e = a + b;
                let v = c + d;
                match map.get(&e) {
                    Some(old) if *old >= v => {}
                    _ => {
                        map.insert(e, v);
                    }
                }
            }
        }
        TropicalPolynomial { n: self.n, terms: map }
    }

    /// `x -> p(x - a)`.
    pub fn translated(&self, a: &[Rat]) -> TropicalPolynomial {
        let terms = self.terms.iter().map(|(alpha, c)| (alpha.clone(), c - alpha.dot_rat(a))).collect();
        TropicalPolynomial { n: self.n, terms }
    }

    pub fn newton_polytope(&self) -> Polyhedron {
        let pts: Vec<Vec<Rat>> = self.terms.keys().map(IntVector::to_rat).collect();
        Polyhedron::from_generators(&pts, &[]).expect("nonempty")
    }

    /// `conv{(α, c_α)} + cone(-e_{n+1})`.
    pub(crate) fn lifted(&self) -> Polyhedron {
        let pts: Vec<Vec<Rat>> = self
            .terms
            .iter()
            .map(|(alpha, c)| {
                let mut v = alpha.to_rat();
                v.push(c.clone());
                v
            })
            .collect();
        Polyhedron::from_generators(&pts, &[IntVector::unit(self.n + 1, self.n).scale(&BigInt::from(-1))])
            .expect("nonempty")
    }

    fn exponents_on(&self, face: &Polyhedron) -> Vec<IntVector> {
        self.terms
            .iter()
            .filter(|(alpha, c)| {
                let mut v = alpha.to_rat();
                v.push((*c).clone());
                face.contains(&v)
            })
            .map(|(alpha, _)| alpha.clone())
            .collect()
    }
}

/// A maximal cell of the regular subdivision of the Newton polytope together
/// with a point of its dual region (a vertex of the hypersurface when the
/// cell is full-dimensional).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCell {
    pub exponents: Vec<IntVector>,
    pub dim: usize,
    pub dual_point: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSubdivision {
    pub cells: Vec<DualCell>,
}

/// An edge of the subdivision: endpoints, every exponent on it, and its
/// lattice length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualEdge {
    pub endpoints: (IntVector, IntVector),
    pub exponents: Vec<IntVector>,
    pub lattice_length: BigInt,
}

/// Upper facets of the lifted polytope, with their dual points.
pub fn dual_subdivision(p: &TropicalPolynomial) -> DualSubdivision {
    let n = p.n;
    let lifted = p.lifted();
    let mut cells: Vec<DualCell> = lifted
        .inequalities()
        .iter()
        .filter(|h| h.normal[n].is_negative())
        .map(|h| {
            let ah = Rat::from_integer(h.normal[n].clone());
            let dual_point: Vec<Rat> =
                h.normal.entries()[..n].iter().map(|a| Rat::from_integer(a.clone()) / &ah).collect();
            let face = lifted.face_on(std::slice::from_ref(h));
            DualCell { exponents: p.exponents_on(&face), dim: face.dim(), dual_point }
        })
        .collect();
    cells.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    DualSubdivision { cells }
}

/// Bounded edges of the lifted polytope, i.e. edges of the subdivision.
pub fn dual_edges(p: &TropicalPolynomial) -> Vec<DualEdge> {
    let n = p.n;
    p.lifted()
        .faces(1)
        .into_iter()
        .filter(Polyhedron::is_bounded)
        .map(|e| {
            let ends: Vec<IntVector> = e
                .vertices()
                .iter()
                .map(|v| IntVector::new(v[..n].iter().map(|x| x.to_integer()).collect()))
                .collect();
            let lattice_length = (&ends[1] - &ends[0]).content();
            DualEdge { endpoints: (ends[0].clone(), ends[1].clone()), exponents: p.exponents_on(&e), lattice_length }
        })
        .collect()
}

/// Region where the terms `alpha_0`, `alpha_1` tie and dominate all others.
pub(crate) fn tie_region(p: &TropicalPolynomial, a0: &IntVector, a1: &IntVector) -> Option<Polyhedron> {
    let c0 = &p.terms[a0];
    let c1 = &p.terms[a1];
    let eq = ((a1 - a0).to_rat(), c0 - c1);
    let ineqs: Vec<(Vec<Rat>, Rat)> = p
        .terms
        .iter()
        .filter(|(b, _)| *b != a0 && *b != a1)
        .map(|(b, cb)| ((a0 - b).to_rat(), cb - c0))
        .collect();
    Polyhedron::from_constraints(p.n, &[eq], &ineqs)
}

/// The corner locus with cells dual to the edges of the subdivision,
/// weighted by lattice length, in canonical cell order.
pub fn hypersurface(p: &TropicalPolynomial) -> Result<WeightedComplex> {
    if p.terms.len() < 2 {
        return Err(Error::AffineFunction);
    }
    let mut cells: Vec<Cell> = dual_edges(p)
        .into_iter()
        .map(|e| {
            let region = tie_region(p, &e.endpoints.0, &e.endpoints.1).expect("dual region of an edge is nonempty");
            let weight = e.lattice_length.to_i64().expect("weight fits in i64");
            Cell { polyhedron: region, weight }
        })
        .collect();
    cells.sort_by(|a, b| a.polyhedron.cmp(&b.polyhedron));
    Ok(WeightedComplex::assemble(p.n, p.n - 1, cells))
}

/// Whether `x` lies in the corner locus (at least two maximizing terms).
pub fn on_corner_locus(p: &TropicalPolynomial, x: &[Rat]) -> bool {
    p.evaluate(x).1.len() >= 2
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::complexes::is_balanced;
    use crate::lattice::saturate;
    use crate::linalg::{rat, rat_frac};
    use crate::polyhedra::int_point;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> IntVector {
        IntVector::from_i64s(xs)
    }

    pub(crate) fn line() -> TropicalPolynomial {
        TropicalPolynomial::from_i64(2, &[(&[0, 0], (0, 1)), (&[1, 0], (0, 1)), (&[0, 1], (0, 1))]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let p = line();
        let (val, arg) = p.evaluate(&int_point(&[0, 0]));
        assert_eq!(val, rat(0));
        assert_eq!(arg, vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(p.evaluate(&int_point(&[2, 1])), (rat(2), vec![v(&[1, 0])]));
        assert_eq!(p.evaluate(&int_point(&[-1, -1])), (rat(0), vec![v(&[0, 0])]));
    }

    /// Pairwise tie regions of full codimension one, merged per affine hull
    /// and dominance set. Independent of the lifting.
    pub(crate) fn pairwise_corner_locus(p: &TropicalPolynomial) -> Vec<(Polyhedron, i64)> {
        let exps = p.exponents();
        let mut out: Vec<(Polyhedron, i64)> = Vec::new();
        for i in 0..exps.len() {
            for j in i + 1..exps.len() {
                let Some(r) = tie_region(p, &exps[i], &exps[j]) else { continue };
                if r.dim() + 1 != p.n() {
                    continue;
                }
                let (_, arg) = p.evaluate(&r.relative_interior_point());
                // weight: lattice length of the segment spanned by the argmax
                let dir = saturate(&[&exps[j] - &exps[i]], p.n()).vectors()[0].clone();
                let proj: Vec<BigInt> = arg.iter().map(|a| a.dot(&dir)).collect();
                let len = proj.iter().max().unwrap() - proj.iter().min().unwrap();
                let len = len / dir.dot(&dir);
                let w = len.to_i64().unwrap();
                if !out.iter().any(|(q, _)| *q == r) {
                    out.push((r, w));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn tropical_line_hypersurface() {
        let c = hypersurface(&line()).unwrap();
        assert_eq!(c.cells().len(), 3);
        let mut rays: Vec<IntVector> = c.cells().iter().map(|cell| cell.polyhedron.rays()[0].clone()).collect();
        rays.sort();
        assert_eq!(rays, vec![v(&[-1, 0]), v(&[0, -1]), v(&[1, 1])]);
        assert!(c.cells().iter().all(|cell| cell.weight == 1 && cell.polyhedron.vertices() == [int_point(&[0, 0])]));
        assert_eq!(c.facets().len(), 1);
        assert!(is_balanced(&c).balanced);
    }

    #[test]
    fn one_dimensional_hypersurface() {
        let p = TropicalPolynomial::from_i64(1, &[(&[0], (0, 1)), (&[2], (0, 1))]).unwrap();
        let c = hypersurface(&p).unwrap();
        assert_eq!(c.dim(), 0);
        assert_eq!(c.cells().len(), 1);
        assert_eq!(c.cells()[0].weight, 2);
        assert_eq!(c.cells()[0].polyhedron.vertices(), &[int_point(&[0])]);
    }

    #[test]
    fn square_hypersurface_is_two_lines() {
        let p = TropicalPolynomial::from_i64(
            2,
            &[(&[0, 0], (0, 1)), (&[1, 0], (0, 1)), (&[0, 1], (0, 1)), (&[1, 1], (0, 1))],
        )
        .unwrap();
        let c = hypersurface(&p).unwrap();
        assert_eq!(c.cells().len(), 4);
        let mut rays: Vec<IntVector> = c.cells().iter().map(|cell| cell.polyhedron.rays()[0].clone()).collect();
        rays.sort();
        assert_eq!(rays, vec![v(&[-1, 0]), v(&[0, -1]), v(&[0, 1]), v(&[1, 0])]);
        assert!(c.cells().iter().all(|cell| cell.weight == 1));
    }

    #[test]
    fn single_term_is_affine() {
        let p = TropicalPolynomial::from_i64(2, &[(&[1, 0], (3, 1))]).unwrap();
        assert_eq!(hypersurface(&p).unwrap_err(), Error::AffineFunction);
        let d = dual_subdivision(&p);
        assert_eq!(d.cells.len(), 1);
        assert_eq!(d.cells[0].dim, 0);
    }

    #[test]
    fn subdivision_examples() {
        let d = dual_subdivision(&line());
        assert_eq!(d.cells.len(), 1);
        assert_eq!(d.cells[0].dim, 2);
        assert_eq!(d.cells[0].exponents.len(), 3);
        let p = TropicalPolynomial::from_i64(
            2,
            &[(&[0, 0], (0, 1)), (&[1, 0], (0, 1)), (&[0, 1], (0, 1)), (&[1, 1], (-1, 1))],
        )
        .unwrap();
        let d = dual_subdivision(&p);
        assert_eq!(d.cells.len(), 2);
        assert!(d.cells.iter().all(|c| c.dim == 2 && c.exponents.len() == 3));
        assert!(d.cells.iter().all(|c| c.exponents.contains(&v(&[1, 0])) && c.exponents.contains(&v(&[0, 1]))));
    }

    #[test]
    fn collinear_lift_gives_heavy_edge() {
        let p = TropicalPolynomial::from_i64(1, &[(&[0], (0, 1)), (&[1], (0, 1)), (&[2], (0, 1))]).unwrap();
        let c = hypersurface(&p).unwrap();
        assert_eq!(c.cells().len(), 1);
        assert_eq!(c.cells()[0].weight, 2);
    }

    pub(crate) fn arb_poly(n: usize, max_terms: usize) -> impl Strategy<Value = TropicalPolynomial> {
        prop::collection::btree_map(prop::collection::vec(0i64..=3, n), (-4i64..=4, 1i64..=3), 2..=max_terms)
            .prop_map(move |m| {
                let terms: Vec<(IntVector, Rat)> =
                    m.into_iter().map(|(e, (a, b))| (IntVector::from_i64s(&e), rat_frac(a, b))).collect();
                TropicalPolynomial::new(n, terms).unwrap()
            })
            .prop_filter("needs two distinct exponents", |p| p.terms().len() >= 2)
    }

    fn arb_point(n: usize) -> impl Strategy<Value = Vec<Rat>> {
        prop::collection::vec((-6i64..=6, 1i64..=3), n).prop_map(|v| v.into_iter().map(|(a, b)| rat_frac(a, b)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn hypersurface_is_balanced(p in arb_poly(2, 6)) {
            let c = hypersurface(&p).unwrap();
            prop_assert!(is_balanced(&c).balanced);
        }

        #[test]
        fn hypersurface_matches_pairwise_oracle(p in arb_poly(2, 6)) {
            let c = hypersurface(&p).unwrap();
            let ours: Vec<(Polyhedron, i64)> = c.cells().iter().map(|x| (x.polyhedron.clone(), x.weight)).collect();
            prop_assert_eq!(ours, pairwise_corner_locus(&p));
        }

        #[test]
        fn evaluate_is_convex(p in arb_poly(2, 6), x in arb_point(2), y in arb_point(2), t in 0i64..=4) {
            let t = rat_frac(t, 4);
            let s = rat(1) - &t;
            let z: Vec<Rat> = x.iter().zip(&y).map(|(a, b)| &t * a + &s * b).collect();
            prop_assert!(p.evaluate(&z).0 <= &t * p.evaluate(&x).0 + &s * p.evaluate(&y).0);
        }

        #[test]
        fn support_is_corner_locus(p in arb_poly(2, 5), x in arb_point(2)) {
            let c = hypersurface(&p).unwrap();
            prop_assert_eq!(c.support_contains(&x), on_corner_locus(&p, &x));
        }

        #[test]
        fn vertices_match_full_dual_cells(p in arb_poly(2, 6)) {
            let c = hypersurface(&p).unwrap();
            let d = dual_subdivision(&p);
            let full = d.cells.iter().filter(|x| x.dim == 2).count();
            let mut verts: Vec<Vec<Rat>> = c.cells().iter().flat_map(|x| x.polyhedron.vertices().to_vec()).collect();
            verts.sort();
            verts.dedup();
            let lines = c.cells().iter().any(|x| !x.polyhedron.lines().is_empty());
            if !lines {
                prop_assert_eq!(verts.len(), full);
            }
            for e in dual_edges(&p) {
                let dir = &e.endpoints.1 - &e.endpoints.0;
                let cell = c.cells().iter().find(|x| x.polyhedron.contains(&tie_region(&p, &e.endpoints.0, &e.endpoints.1).unwrap().relative_interior_point())).unwrap();
                for r in cell.polyhedron.generator_rays() {
                    prop_assert!(r.dot(&dir).is_zero());
                }
            }
        }

        #[test]
        fn space_hypersurface_balanced(p in arb_poly(3, 5)) {
            let c = hypersurface(&p).unwrap();
            prop_assert!(is_balanced(&c).balanced);
        }
    }
}

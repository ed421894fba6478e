//! Monge–Ampère measures of tropical polynomials and stable intersections.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::complexes::WeightedComplex;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::linalg::{self, Rat};
use crate::polyhedra::Polyhedron;
use crate::troppoly::{dual_subdivision, TropicalPolynomial};

/// Finitely many weighted points, sorted by point, with nonzero masses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomicMeasure {
    pub atoms: Vec<(Vec<Rat>, Rat)>,
}

impl AtomicMeasure {
    fn from_map(map: BTreeMap<Vec<Rat>, Rat>) -> Self {
        AtomicMeasure { atoms: map.into_iter().filter(|(_, m)| !m.is_zero()).collect() }
    }

    pub fn total_mass(&self) -> Rat {
        self.atoms.iter().fold(Rat::zero(), |acc, (_, m)| acc + m)
    }

    fn accumulate(&self, into: &mut BTreeMap<Vec<Rat>, Rat>, factor: &Rat) {
        for (x, m) in &self.atoms {
            *into.entry(x.clone()).or_insert_with(Rat::zero) += m * factor;
        }
    }
}

/// One atom per vertex of the hypersurface, carrying the volume of its dual
/// cell. Empty when the Newton polytope is not full-dimensional.
pub fn monge_ampere(p: &TropicalPolynomial) -> AtomicMeasure {
    let n = p.n();
    let mut map = BTreeMap::new();
    for cell in dual_subdivision(p).cells {
        if cell.dim != n {
            continue;
        }
        let pts: Vec<Vec<Rat>> = cell.exponents.iter().map(|a| a.to_rat()).collect();
        let vol = Polyhedron::from_generators(&pts, &[]).expect("nonempty").volume().expect("bounded");
        map.insert(cell.dual_point, vol);
    }
    AtomicMeasure::from_map(map)
}

/// Polarization of `monge_ampere` over tropical products, normalized so that
/// the mixed measure of `(p, ..., p)` is `monge_ampere(p)`.
pub fn mixed_monge_ampere(ps: &[TropicalPolynomial]) -> Result<AtomicMeasure> {
    let n = check_count(ps)?;
    let mut map = BTreeMap::new();
    for size in 1..=n {
        let sign = if (n - size) % 2 == 0 { Rat::from_integer(1.into()) } else { Rat::from_integer((-1).into()) };
        for s in linalg::subsets(n, size) {
            let prod = s[1..].iter().fold(ps[s[0]].clone(), |acc, &i| acc.product(&ps[i]));
            monge_ampere(&prod).accumulate(&mut map, &sign);
        }
    }
    let scale = Rat::from_integer(linalg::factorial(n)).recip();
    for m in map.values_mut() {
        *m = &*m * &scale;
    }
    Ok(AtomicMeasure::from_map(map))
}

fn check_count(ps: &[TropicalPolynomial]) -> Result<usize> {
    let n = ps.first().map_or(0, TropicalPolynomial::n);
    if n == 0 || ps.len() != n {
        return Err(Error::PolynomialCount { expected: n.max(1), found: ps.len() });
    }
    if let Some(p) = ps.iter().find(|p| p.n() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.n() });
    }
    Ok(n)
}

/// `n!` times the total mass of the mixed measure.
pub fn stable_intersection_number(ps: &[TropicalPolynomial]) -> Result<Rat> {
    let n = check_count(ps)?;
    Ok(mixed_monge_ampere(ps)?.total_mass() * Rat::from_integer(linalg::factorial(n)))
}

/// Crossings of two plane tropical curves, each with mass
/// `m_1 m_2 |det(v_1, v_2)|`. Fails unless every meeting is a single point
/// interior to both edges.
pub fn transversal_points(c1: &WeightedComplex, c2: &WeightedComplex) -> Result<AtomicMeasure> {
    for c in [c1, c2] {
        if c.ambient() != 2 || c.dim() != 1 {
            return Err(Error::Invalid("transversal_points expects two curves in the plane".into()));
        }
    }
    let mut map: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for e1 in c1.cells() {
        for e2 in c2.cells() {
            let Some(x) = e1.polyhedron.intersection(&e2.polyhedron) else { continue };
            if x.dim() > 0 {
                return Err(Error::NotTransversal);
            }
            let pt = &x.vertices()[0];
            if !e1.polyhedron.contains_relint(pt) || !e2.polyhedron.contains_relint(pt) {
                return Err(Error::NotTransversal);
            }
            let v1 = e1.polyhedron.direction_lattice().vectors()[0].clone();
            let v2 = e2.polyhedron.direction_lattice().vectors()[0].clone();
            let det: BigInt = IntMatrix::from_columns(&[v1, v2], 2).det().abs();
            let mass = Rat::from_integer(det * BigInt::from(e1.weight) * BigInt::from(e2.weight));
            *map.entry(pt.clone()).or_insert_with(Rat::zero) += mass;
        }
    }
    Ok(AtomicMeasure::from_map(map))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::{rat, rat_frac};
    use crate::polyhedra::int_point;
    use crate::troppoly::hypersurface;
    use crate::troppoly::tests::{arb_poly, line};
    use proptest::prelude::*;

    fn poly(terms: &[(&[i64], (i64, i64))]) -> TropicalPolynomial {
        TropicalPolynomial::from_i64(2, terms).unwrap()
    }

    fn conic() -> TropicalPolynomial {
        poly(&[
            (&[0, 0], (0, 1)),
            (&[1, 0], (0, 1)),
            (&[0, 1], (0, 1)),
            (&[2, 0], (-1, 1)),
            (&[1, 1], (-1, 1)),
            (&[0, 2], (-1, 1)),
        ])
    }

    #[test]
    fn monge_ampere_examples() {
        let m = monge_ampere(&line());
        assert_eq!(m.atoms, vec![(int_point(&[0, 0]), rat_frac(1, 2))]);
        let p1 = TropicalPolynomial::from_i64(1, &[(&[0], (0, 1)), (&[1], (0, 1))]).unwrap();
        assert_eq!(monge_ampere(&p1).atoms, vec![(int_point(&[0]), rat(1))]);
        let sq = poly(&[(&[0, 0], (0, 1)), (&[1, 0], (0, 1)), (&[0, 1], (0, 1)), (&[1, 1], (0, 1))]);
        assert_eq!(monge_ampere(&sq).atoms, vec![(int_point(&[0, 0]), rat(1))]);
    }

    #[test]
    fn lower_dimensional_newton_polytope_has_no_atoms() {
        let p = poly(&[(&[0, 0], (0, 1)), (&[1, 0], (0, 1))]);
        assert!(monge_ampere(&p).atoms.is_empty());
    }

    #[test]
    fn mixed_measure_examples() {
        let p = line();
        assert_eq!(mixed_monge_ampere(&[p.clone(), p.clone()]).unwrap(), monge_ampere(&p));
        let q = p.translated(&int_point(&[1, 2]));
        let m = mixed_monge_ampere(&[p.clone(), q.clone()]).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert_eq!(m.total_mass(), rat_frac(1, 2));
        let t = transversal_points(&hypersurface(&p).unwrap(), &hypersurface(&q).unwrap()).unwrap();
        assert_eq!(t.atoms.len(), 1);
        assert_eq!(t.atoms[0].0, m.atoms[0].0);
        assert_eq!(mixed_monge_ampere(&[p, conic()]).unwrap().total_mass(), rat(1));
    }

    #[test]
    fn bezout_and_bernstein_examples() {
        let p = line();
        let q = p.translated(&int_point(&[1, 2]));
        assert_eq!(stable_intersection_number(&[p.clone(), q]).unwrap(), rat(1));
        assert_eq!(stable_intersection_number(&[p.clone(), conic()]).unwrap(), rat(2));
        let sq = poly(&[(&[0, 0], (0, 1)), (&[1, 0], (1, 1)), (&[0, 1], (-2, 1)), (&[1, 1], (3, 1))]);
        assert_eq!(stable_intersection_number(&[sq, p.clone()]).unwrap(), rat(2));
        assert!(matches!(stable_intersection_number(&[p]), Err(Error::PolynomialCount { expected: 2, found: 1 })));
    }

    fn axis_line(dir: [i64; 2], weight: i64) -> WeightedComplex {
        let v = crate::lattice::IntVector::from_i64s(&dir);
        let l = Polyhedron::from_generators(&[int_point(&[0, 0])], &[v.clone(), -&v]).unwrap();
        crate::complexes::build_complex(vec![(l, weight)]).unwrap()
    }

    #[test]
    fn transversal_examples() {
        let t = transversal_points(&axis_line([1, 0], 2), &axis_line([0, 1], 3)).unwrap();
        assert_eq!(t.atoms, vec![(int_point(&[0, 0]), rat(6))]);
        let c = hypersurface(&line()).unwrap();
        assert_eq!(transversal_points(&c, &c).unwrap_err(), Error::NotTransversal);
        // shifted along its own diagonal ray: the two diagonal rays overlap
        let shifted = hypersurface(&line().translated(&int_point(&[1, 1]))).unwrap();
        assert_eq!(transversal_points(&c, &shifted).unwrap_err(), Error::NotTransversal);
        let off = hypersurface(&line().translated(&int_point(&[2, 1]))).unwrap();
        assert_eq!(transversal_points(&c, &off).unwrap().total_mass(), rat(1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn total_mass_is_newton_volume(p in arb_poly(2, 7)) {
            let vol = p.newton_polytope().volume().unwrap();
            prop_assert_eq!(monge_ampere(&p).total_mass(), vol);
        }

        #[test]
        fn intersection_number_symmetric(p in arb_poly(2, 5), q in arb_poly(2, 5)) {
            prop_assert_eq!(
                stable_intersection_number(&[p.clone(), q.clone()]).unwrap(),
                stable_intersection_number(&[q, p]).unwrap()
            );
        }

        #[test]
        fn masses_translate(p in arb_poly(2, 6), a in -5i64..=5, b in 1i64..=3, c in -5i64..=5) {
            let shift = vec![rat_frac(a, b), rat(c)];
            let m = monge_ampere(&p);
            let moved = monge_ampere(&p.translated(&shift));
            let expected: Vec<(Vec<Rat>, Rat)> = m
                .atoms
                .iter()
                .map(|(x, w)| (x.iter().zip(&shift).map(|(u, s)| u + s).collect(), w.clone()))
                .collect();
            prop_assert_eq!(moved.atoms, expected);
        }
    }
}

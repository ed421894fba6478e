//! Tropical currents through their combinatorial data: per-cell frames, the
//! boundary pairing against character test forms, closedness and rigidity.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complexes::{is_balanced, facet_star, FacetStar, WeightedComplex};
use crate::error::{Error, Result};
use crate::lattice::{complete_to_unimodular, IntMatrix, IntVector, LatticeBasis};
use crate::linalg::{self, Rat};

/// `(a_P, B_P, D_P)` for one branch of a facet star.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentFrame {
    pub cell: usize,
    pub base: Vec<Rat>,
    /// `w_1, ..., w_{p-1}, v_P`.
    pub basis: LatticeBasis,
    /// Unimodular, first `p` columns equal to `basis`.
    pub completion: IntMatrix,
}

/// A test form indexed by a frequency `ν` and a 1-based index set `J`.
#[derive(Clone, Debug)]
pub struct PairingQuery {
    pub star: FacetStar,
    pub nu: IntVector,
    pub j: Vec<usize>,
}

impl PairingQuery {
    pub fn new(star: FacetStar, nu: IntVector, j: Vec<usize>) -> Result<Self> {
        let n = star.ambient;
        if nu.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: nu.len() });
        }
        let ok = j.len() == star.dim && j.windows(2).all(|w| w[0] < w[1]) && j.iter().all(|&i| (1..=n).contains(&i));
        if !ok {
            return Err(Error::BadIndexSet { expected: star.dim, n, found: j });
        }
        Ok(PairingQuery { star, nu, j })
    }
}

pub fn frame_for(star: &FacetStar, v: &IntVector, cell: usize, base: Vec<Rat>) -> Result<CurrentFrame> {
    let mut vs = star.frame.clone();
    vs.push(v.clone());
    let basis = LatticeBasis::new(star.ambient, vs)?;
    let completion = complete_to_unimodular(&basis)?;
    Ok(CurrentFrame { cell, base, basis, completion })
}

/// One frame per branch, in branch order.
pub fn build_frames(c: &WeightedComplex, star: &FacetStar) -> Result<Vec<CurrentFrame>> {
    star.branches
        .iter()
        .map(|b| {
            let base = c.cells()[b.cell].polyhedron.relative_interior_point();
            frame_for(star, &b.v, b.cell, base)
        })
        .collect()
}

fn kronecker(t: &BigInt) -> bool {
    t.is_zero()
}

/// `Σ_P m_P [∏ over columns d of D_P of δ(<ν, d>)] Det_J(w, v_P)`.
pub fn boundary_pairing(q: &PairingQuery, frames: &[CurrentFrame]) -> Result<Rat> {
    if frames.len() != q.star.branches.len() {
        return Err(Error::Invalid("one frame per branch required".into()));
    }
    let mut total = BigInt::zero();
    for (b, f) in q.star.branches.iter().zip(frames) {
        let alive = f.completion.columns().iter().all(|d| kronecker(&q.nu.dot(d)));
        if alive {
            total += BigInt::from(b.weight) * q.star.minor(&q.j, &b.v);
        }
    }
    Ok(Rat::from_integer(total))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingWitness {
    pub facet: usize,
    pub j: Vec<usize>,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosednessReport {
    pub closed: bool,
    /// Nonzero pairings at `ν = 0`.
    pub witnesses: Vec<PairingWitness>,
    pub agrees_with_balancing: bool,
}

pub fn closedness_at(c: &WeightedComplex, star: &FacetStar) -> Result<Vec<PairingWitness>> {
    let frames = build_frames(c, star)?;
    let mut out = Vec::new();
    for j in star.index_sets() {
        let q = PairingQuery::new(star.clone(), IntVector::zeros(star.ambient), j)?;
        let value = boundary_pairing(&q, &frames)?;
        if !value.is_zero() {
            out.push(PairingWitness { facet: star.facet, j: q.j, value });
        }
    }
    Ok(out)
}

/// Zero-frequency pairings at every facet and every `J`.
pub fn closedness_certificate(c: &WeightedComplex) -> ClosednessReport {
    let mut witnesses = Vec::new();
    for i in 0..c.facets().len() {
        let star = facet_star(c, i).expect("valid facet index");
        witnesses.extend(closedness_at(c, &star).expect("frames of a valid star"));
    }
    let closed = witnesses.is_empty();
    ClosednessReport { closed, witnesses, agrees_with_balancing: closed == is_balanced(c).balanced }
}

/// Rows indexed by `J`, columns by branches, entries `Det_J(w, v_P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigiditySystem {
    pub index_sets: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<BigInt>>,
    pub dim: usize,
    pub kernel: Vec<Vec<Rat>>,
}

impl RigiditySystem {
    /// Whether `x` is in the kernel.
    pub fn annihilates(&self, x: &[Rat]) -> bool {
        self.matrix.iter().all(|row| {
            row.iter().zip(x).fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(a.clone()) * b).is_zero()
        })
    }
}

pub fn rigidity_dimension(star: &FacetStar) -> RigiditySystem {
    let index_sets = star.index_sets();
    let matrix: Vec<Vec<BigInt>> = index_sets
        .iter()
        .map(|j| star.branches.iter().map(|b| star.minor(j, &b.v)).collect())
        .collect();
    let rows: Vec<Vec<Rat>> =
        matrix.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let kernel = linalg::nullspace(&rows, star.branches.len());
    RigiditySystem { index_sets, matrix, dim: kernel.len(), kernel }
}

/// For each branch `P`, the frequency `ν_P` with `D_P^t ν_P = (0, ..., 0, -ℓ)`
/// and whether some other branch sees it.
pub fn fourier_obstruction(star: &FacetStar, frames: &[CurrentFrame], ell: &IntVector) -> Result<Vec<bool>> {
    let n = star.ambient;
    let p = star.dim;
    if ell.len() != n - p {
        return Err(Error::DimensionMismatch { expected: n - p, found: ell.len() });
    }
    if ell.is_zero() {
        return Err(Error::ZeroFrequency);
    }
    let mut out = Vec::with_capacity(frames.len());
    for (i, f) in frames.iter().enumerate() {
        let inv_t = f.completion.inverse_unimodular().expect("unimodular").transpose();
        let mut rhs = vec![BigInt::zero(); p];
        rhs.extend(ell.entries().iter().map(|x| -x));
        let nu = inv_t.mul_vec(&IntVector::new(rhs));
        let seen = star.branches.iter().enumerate().any(|(k, b)| k != i && !nu.dot(&b.v).is_zero());
        out.push(seen);
    }
    Ok(out)
}

/// Nonzero vectors of length `len` with entries in `-2..=2`.
pub fn default_frequencies(len: usize) -> Vec<IntVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-2..=2).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|v| IntVector::from_i64s(&v)).filter(|v| !v.is_zero()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierReport {
    pub checked: Vec<IntVector>,
    /// Pairs `(ℓ, branch)` where no other branch sees `ν_P`.
    pub failures: Vec<(IntVector, usize)>,
}

impl FourierReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn fourier_certificate(star: &FacetStar, frames: &[CurrentFrame], ells: &[IntVector]) -> Result<FourierReport> {
    let mut failures = Vec::new();
    for ell in ells {
        for (i, ok) in fourier_obstruction(star, frames, ell)?.into_iter().enumerate() {
            if !ok {
                failures.push((ell.clone(), i));
            }
        }
    }
    Ok(FourierReport { checked: ells.to_vec(), failures })
}

/// The kernel is spanned by the weight vector of the star.
pub fn kernel_is_weight_line(system: &RigiditySystem, star: &FacetStar) -> bool {
    let w: Vec<Rat> = star.branches.iter().map(|b| Rat::from_integer(b.weight.into())).collect();
    system.dim == 1 && system.annihilates(&w) && w.iter().any(|x| !x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::tests::{coordinate_cross, tropical_line};
    use crate::complexes::{build_complex, Branch};
    use crate::linalg::rat;
    use crate::polyhedra::{int_point, Polyhedron};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> IntVector {
        IntVector::from_i64s(xs)
    }

    fn line_star(weights: [i64; 3]) -> (WeightedComplex, FacetStar, Vec<CurrentFrame>) {
        let c = tropical_line(weights);
        let star = facet_star(&c, 0).unwrap();
        let frames = build_frames(&c, &star).unwrap();
        (c, star, frames)
    }

    #[test]
    fn frames_are_unimodular() {
        let (_, _, frames) = line_star([1, 1, 1]);
        for f in &frames {
            assert!(f.completion.is_unimodular());
            assert_eq!(f.completion.column(0), f.basis.vectors()[0]);
        }
        let seg = Polyhedron::from_generators(&[int_point(&[0]), int_point(&[1])], &[]).unwrap();
        let c = build_complex(vec![(seg, 1)]).unwrap();
        let star = facet_star(&c, 0).unwrap();
        let frames = build_frames(&c, &star).unwrap();
        assert_eq!(frames[0].completion, IntMatrix::identity(1));

        let half = Polyhedron::from_generators(&[int_point(&[0, 0, 0])], &[v(&[0, 0, 1]), v(&[0, 0, -1]), v(&[1, 0, 0])])
            .unwrap();
        let c = build_complex(vec![(half, 1)]).unwrap();
        let star = facet_star(&c, 0).unwrap();
        let d = &build_frames(&c, &star).unwrap()[0].completion;
        assert!(d.is_unimodular());
        assert_eq!(d.column(0), v(&[0, 0, 1]));
        assert_eq!(d.column(1), v(&[1, 0, 0]));
    }

    #[test]
    fn pairing_examples() {
        let (_, star, frames) = line_star([1, 1, 1]);
        let q = PairingQuery::new(star.clone(), v(&[0, 0]), vec![1]).unwrap();
        assert_eq!(boundary_pairing(&q, &frames).unwrap(), rat(0));
        for j in [vec![1], vec![2]] {
            let q = PairingQuery::new(star.clone(), v(&[1, 0]), j).unwrap();
            assert_eq!(boundary_pairing(&q, &frames).unwrap(), rat(0));
        }
        let (_, star2, frames2) = line_star([2, 1, 1]);
        let q = PairingQuery::new(star2, v(&[0, 0]), vec![1]).unwrap();
        assert_eq!(boundary_pairing(&q, &frames2).unwrap(), rat(1));
        assert!(matches!(PairingQuery::new(star, v(&[0, 0]), vec![1, 2]), Err(Error::BadIndexSet { .. })));
    }

    #[test]
    fn closedness_examples() {
        let r = closedness_certificate(&tropical_line([1, 1, 1]));
        assert!(r.closed && r.agrees_with_balancing);
        let r = closedness_certificate(&tropical_line([2, 1, 1]));
        assert!(!r.closed && r.agrees_with_balancing);
        assert_eq!(r.witnesses[0], PairingWitness { facet: 0, j: vec![1], value: rat(1) });

        let cells: Vec<(Polyhedron, i64)> = [[1, 0, 0], [0, 1, 0], [-1, -1, 0]]
            .iter()
            .map(|d| {
                let p = Polyhedron::from_generators(&[int_point(&[0, 0, 0])], &[v(&[0, 0, 1]), v(&[0, 0, -1]), v(d)])
                    .unwrap();
                (p, 1)
            })
            .collect();
        let c = build_complex(cells).unwrap();
        let r = closedness_certificate(&c);
        assert!(r.closed && r.agrees_with_balancing);
    }

    #[test]
    fn rigidity_examples() {
        let (_, star, _) = line_star([1, 1, 1]);
        let r = rigidity_dimension(&star);
        assert_eq!(r.dim, 1);
        assert!(kernel_is_weight_line(&r, &star));
        assert!(r.annihilates(&[rat(1), rat(1), rat(1)]));

        let cross = coordinate_cross();
        assert_eq!(rigidity_dimension(&facet_star(&cross, 0).unwrap()).dim, 2);

        let mut single = star.clone();
        single.branches.truncate(1);
        assert_eq!(rigidity_dimension(&single).dim, 0);
    }

    #[test]
    fn fourier_examples() {
        let (c, star, frames) = line_star([1, 1, 1]);
        assert!(fourier_obstruction(&star, &frames, &v(&[1])).unwrap().iter().all(|&b| b));
        assert_eq!(fourier_obstruction(&star, &frames, &v(&[0])).unwrap_err(), Error::ZeroFrequency);
        assert_eq!(frames.len(), c.cells().len());

        let cross = coordinate_cross();
        let cs = facet_star(&cross, 0).unwrap();
        let cf = build_frames(&cross, &cs).unwrap();
        assert!(fourier_obstruction(&cs, &cf, &v(&[1])).unwrap().iter().all(|&b| b));

        let degenerate = FacetStar {
            ambient: 2,
            dim: 1,
            facet: 0,
            base: int_point(&[0, 0]),
            frame: vec![],
            branches: vec![
                Branch { cell: 0, weight: 1, v: v(&[1, 0]) },
                Branch { cell: 1, weight: 1, v: v(&[-1, 0]) },
            ],
        };
        let frames: Vec<CurrentFrame> = degenerate
            .branches
            .iter()
            .map(|b| frame_for(&degenerate, &b.v, b.cell, int_point(&[0, 0])).unwrap())
            .collect();
        assert_eq!(fourier_obstruction(&degenerate, &frames, &v(&[1])).unwrap(), vec![false, false]);
    }

    #[test]
    fn default_frequency_set() {
        assert_eq!(default_frequencies(1).len(), 4);
        assert_eq!(default_frequencies(2).len(), 24);
        assert!(default_frequencies(2).iter().all(|x| !x.is_zero()));
    }

    /// Random unimodular matrix from elementary column operations.
    fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for &(a, b, k) in ops {
            let (a, b) = (a % n, b % n);
            if a == b {
                continue;
            }
            for r in 0..n {
                let t = &m[(r, a)] + BigInt::from(k) * &m[(r, b)];
                m[(r, a)] = t;
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn nonzero_frequency_pairs_to_zero(
            w in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 3),
            nu in prop::collection::vec(-3i64..=3, 2),
            j in 1usize..=2,
        ) {
            prop_assume!(nu.iter().any(|&x| x != 0));
            let (_, star, frames) = line_star([w[0], w[1], w[2]]);
            let q = PairingQuery::new(star, v(&nu), vec![j]).unwrap();
            prop_assert_eq!(boundary_pairing(&q, &frames).unwrap(), rat(0));
        }

        #[test]
        fn zero_frequency_pairing_is_minor_of_sum(
            w in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 3),
        ) {
            let (_, star, frames) = line_star([w[0], w[1], w[2]]);
            let s = star.weighted_sum();
            for j in star.index_sets() {
                let q = PairingQuery::new(star.clone(), v(&[0, 0]), j.clone()).unwrap();
                prop_assert_eq!(boundary_pairing(&q, &frames).unwrap(), Rat::from_integer(star.minor(&j, &s)));
            }
        }

        #[test]
        fn rigidity_invariant_under_frame_change(
            ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
            k in -3i64..=3,
        ) {
            // balanced star in R^3 with p = 2 around the line spanned by e3
            let g = unimodular(3, &ops);
            let frame = g.column(2);
            let dirs = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[-1, -1, 0])];
            let branches: Vec<Branch> = dirs
                .iter()
                .enumerate()
                .map(|(i, d)| Branch { cell: i, weight: 1, v: g.mul_vec(d) })
                .collect();
            let star = FacetStar { ambient: 3, dim: 2, facet: 0, base: vec![rat(0); 3], frame: vec![frame.clone()], branches };
            let base_dim = rigidity_dimension(&star).dim;
            prop_assert_eq!(base_dim, 1);
            let mut shifted = star.clone();
            for b in shifted.branches.iter_mut() {
                b.v = &b.v + &frame.scale(&BigInt::from(k));
            }
            shifted.frame = vec![-&frame];
            prop_assert_eq!(rigidity_dimension(&shifted).dim, base_dim);
        }
    }
}

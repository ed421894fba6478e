//! Weighted polyhedral complexes, facet stars, balancing and strong
//! extremality.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{complete_to_unimodular, IntMatrix, IntVector, LatticeBasis};
use crate::linalg::{self, Rat};
use crate::polyhedra::Polyhedron;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub polyhedron: Polyhedron,
    pub weight: i64,
}

/// A pure `p`-dimensional complex with nonzero weights on its top cells.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    ambient: usize,
    dim: usize,
    cells: Vec<Cell>,
    facets: Vec<Polyhedron>,
    incidence: Vec<Vec<usize>>,
}

impl WeightedComplex {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn facets(&self) -> &[Polyhedron] {
        &self.facets
    }

    /// Indices of the cells containing each facet, ascending.
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn weights(&self) -> Vec<i64> {
        self.cells.iter().map(|c| c.weight).collect()
    }

    /// Points of the support: whether `x` lies in some cell.
    pub fn support_contains(&self, x: &[Rat]) -> bool {
        self.cells.iter().any(|c| c.polyhedron.contains(x))
    }

    /// Image under `x -> factor * x` (`factor > 0`), weights kept.
    pub fn scaled(&self, factor: &Rat) -> WeightedComplex {
        let cells = self
            .cells
            .iter()
            .map(|c| Cell { polyhedron: c.polyhedron.scaled(factor), weight: c.weight })
            .collect();
        WeightedComplex::assemble(self.ambient, self.dim, cells)
    }

    /// Enumerates facets and incidence without checking the intersection
    /// property. Callers guarantee a genuine complex.
    pub(crate) fn assemble(ambient: usize, dim: usize, cells: Vec<Cell>) -> Self {
        let mut index: BTreeMap<Polyhedron, Vec<usize>> = BTreeMap::new();
        if dim > 0 {
            for (i, c) in cells.iter().enumerate() {
                for f in c.polyhedron.faces(dim - 1) {
                    index.entry(f).or_default().push(i);
                }
            }
        }
        let (facets, incidence) = index.into_iter().unzip();
        WeightedComplex { ambient, dim, cells, facets, incidence }
    }
}

/// Checks purity, weights and the face-intersection property, then
/// enumerates facets.
pub fn build_complex(cells: Vec<(Polyhedron, i64)>) -> Result<WeightedComplex> {
    let Some((first, _)) = cells.first() else {
        return Err(Error::Invalid("complex has no cells".into()));
    };
    let ambient = first.ambient();
    let dim = first.dim();
    for (i, (p, w)) in cells.iter().enumerate() {
        if p.ambient() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, found: p.ambient() });
        }
        if p.dim() != dim {
            return Err(Error::NotPure { cell: i, expected: dim, found: p.dim() });
        }
        if *w == 0 {
            return Err(Error::ZeroWeight(i));
        }
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let (a, b) = (&cells[i].0, &cells[j].0);
            if let Some(f) = a.intersection(b) {
                if f.dim() == dim || !f.is_face_of(a) || !f.is_face_of(b) {
                    return Err(Error::NotAComplex { first: i, second: j });
                }
            }
        }
    }
    let cells = cells.into_iter().map(|(polyhedron, weight)| Cell { polyhedron, weight }).collect();
    Ok(WeightedComplex::assemble(ambient, dim, cells))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub cell: usize,
    pub weight: i64,
    /// Primitive inward vector completing the frame to a basis of the cell's
    /// direction lattice.
    pub v: IntVector,
}

/// The local picture of a complex around one facet `W`.
#[derive(Clone, Debug)]
pub struct FacetStar {
    pub ambient: usize,
    pub dim: usize,
    pub facet: usize,
    pub base: Vec<Rat>,
    pub frame: Vec<IntVector>,
    pub branches: Vec<Branch>,
}

impl FacetStar {
    /// `Σ m_P v_P`.
    pub fn weighted_sum(&self) -> IntVector {
        let mut s = IntVector::zeros(self.ambient);
        for b in &self.branches {
            s = &s + &b.v.scale(&BigInt::from(b.weight));
        }
        s
    }

    /// The `n x p` matrix with columns `w_1, ..., w_{p-1}, x`.
    pub fn frame_with(&self, x: &IntVector) -> IntMatrix {
        let mut cols = self.frame.clone();
        cols.push(x.clone());
        IntMatrix::from_columns(&cols, self.ambient)
    }

    /// `Det_J(w_1, ..., w_{p-1}, x)` for a 1-based index set `J`.
    pub fn minor(&self, j: &[usize], x: &IntVector) -> BigInt {
        let rows: Vec<usize> = j.iter().map(|&i| i - 1).collect();
        let cols: Vec<usize> = (0..self.dim).collect();
        self.frame_with(x).minor(&rows, &cols)
    }

    /// All 1-based index sets `J ⊂ {1..n}` with `|J| = p`, lexicographic.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        linalg::subsets(self.ambient, self.dim)
            .into_iter()
            .map(|j| j.into_iter().map(|i| i + 1).collect())
            .collect()
    }

    pub fn projection_along(&self) -> IntMatrix {
        projection_along(self)
    }

    /// Images `h_W(v_P)` of the branch vectors.
    pub fn projected_branches(&self) -> Vec<IntVector> {
        let h = self.projection_along();
        self.branches.iter().map(|b| h.mul_vec(&b.v)).collect()
    }
}

/// Coordinates of `x` in the basis `basis`, if integral.
fn lattice_coordinates(basis: &[IntVector], x: &IntVector) -> Option<Vec<BigInt>> {
    let cols: Vec<Vec<Rat>> = basis.iter().map(IntVector::to_rat).collect();
    let c = linalg::solve(&cols, &x.to_rat())?;
    c.iter().map(|q| q.is_integer().then(|| q.to_integer())).collect()
}

pub fn facet_star(c: &WeightedComplex, facet: usize) -> Result<FacetStar> {
    let count = c.facets.len();
    let w = c.facets.get(facet).ok_or(Error::FacetOutOfRange { index: facet, count })?;
    let base = w.relative_interior_point();
    let frame = w.direction_lattice().vectors().to_vec();
    let p = c.dim;
    let mut branches = Vec::new();
    for &ci in &c.incidence[facet] {
        let cell = &c.cells[ci];
        let lp = cell.polyhedron.direction_lattice();
        let bp = lp.vectors();
        // frame in cell coordinates, completed inside Z^p
        let coords: Vec<IntVector> = frame
            .iter()
            .map(|wv| IntVector::new(lattice_coordinates(bp, wv).expect("facet lattice inside cell lattice")))
            .collect();
        let local = LatticeBasis::new(p, coords)?;
        let d = complete_to_unimodular(&local)?;
        let e = d.column(p - 1);
        let mut v = IntVector::zeros(c.ambient);
        for (k, b) in bp.iter().enumerate() {
            v = &v + &b.scale(&e[k]);
        }
        let facet_ineq = cell
            .polyhedron
            .inequalities()
            .iter()
            .find(|h| h.is_tight(&base))
            .expect("facet is cut out by an inequality of the cell");
        if facet_ineq.normal.dot(&v).is_negative() {
            v = -&v;
        }
        branches.push(Branch { cell: ci, weight: cell.weight, v });
    }
    Ok(FacetStar { ambient: c.ambient, dim: p, facet, base, frame, branches })
}

/// Rows `p-1..n` of `D^{-1}` for a unimodular completion `D` of the frame:
/// an `(n-p+1) x n` integer matrix whose kernel is the span of the frame.
pub fn projection_along(star: &FacetStar) -> IntMatrix {
    let n = star.ambient;
    let k = star.frame.len();
    let basis = LatticeBasis::new(n, star.frame.clone()).expect("frame vectors in ambient space");
    let d = complete_to_unimodular(&basis).expect("frame is saturated");
    let inv = d.inverse_unimodular().expect("unimodular");
    let rows: Vec<Vec<BigInt>> = (k..n).map(|i| inv.row(i).into_inner()).collect();
    IntMatrix::from_rows(rows, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetBalance {
    pub facet: usize,
    /// `h_W(Σ m_P v_P)`; zero iff balanced at the facet.
    pub defect: IntVector,
    /// 1-based row sets `J` whose minor of `(w, Σ m_P v_P)` is nonzero.
    pub failing_minors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub balanced: bool,
    pub facets: Vec<FacetBalance>,
}

pub fn balance_at(star: &FacetStar) -> FacetBalance {
    let s = star.weighted_sum();
    let defect = star.projection_along().mul_vec(&s);
    let failing_minors = star
        .index_sets()
        .into_iter()
        .filter(|j| !star.minor(j, &s).is_zero())
        .collect();
    FacetBalance { facet: star.facet, defect, failing_minors }
}

pub fn is_balanced(c: &WeightedComplex) -> BalanceReport {
    let facets: Vec<FacetBalance> = (0..c.facets.len())
        .map(|i| balance_at(&facet_star(c, i).expect("valid facet index")))
        .collect();
    let balanced = facets.iter().all(|f| f.defect.is_zero());
    BalanceReport { balanced, facets }
}

/// `true` iff every proper subset is linearly independent.
pub fn is_sub_independent(vectors: &[IntVector]) -> bool {
    let s = vectors.len();
    if s <= 1 {
        return true;
    }
    linalg::subsets(s, s - 1).iter().all(|sub| {
        let vs: Vec<IntVector> = sub.iter().map(|&i| vectors[i].clone()).collect();
        linalg::rank_int(&vs) == s - 1
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetExtremality {
    pub facet: usize,
    pub valency: usize,
    pub sub_independent: bool,
    pub spanning: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalityReport {
    pub balanced: bool,
    pub connected: bool,
    pub components: usize,
    /// Required valency `n - p + 2`.
    pub expected_valency: usize,
    pub valency_ok: bool,
    pub sub_independent: bool,
    pub spanning: bool,
    pub facets: Vec<FacetExtremality>,
    pub extremal: bool,
}

fn components(c: &WeightedComplex) -> usize {
    let mut parent: Vec<usize> = (0..c.cells.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for inc in &c.incidence {
        for w in inc.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    (0..c.cells.len()).filter(|&i| find(&mut parent, i) == i).count()
}

pub fn is_strongly_extremal(c: &WeightedComplex) -> ExtremalityReport {
    let n = c.ambient;
    let p = c.dim;
    let expected_valency = n + 2 - p;
    let components = components(c);
    let facets: Vec<FacetExtremality> = (0..c.facets.len())
        .map(|i| {
            let star = facet_star(c, i).expect("valid facet index");
            let h = star.projected_branches();
            FacetExtremality {
                facet: i,
                valency: star.branches.len(),
                sub_independent: is_sub_independent(&h),
                spanning: linalg::rank_int(&h) == n + 1 - p,
            }
        })
        .collect();
    let valency_ok = facets.iter().all(|f| f.valency == expected_valency);
    let sub_independent = facets.iter().all(|f| f.sub_independent);
    let spanning = facets.iter().all(|f| f.spanning);
    let connected = components <= 1;
    ExtremalityReport {
        balanced: is_balanced(c).balanced,
        connected,
        components,
        expected_valency,
        valency_ok,
        sub_independent,
        spanning,
        facets,
        extremal: connected && valency_ok && sub_independent && spanning,
    }
}

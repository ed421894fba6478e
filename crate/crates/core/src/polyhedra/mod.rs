//! Exact rational polyhedra in double description.
//!
//! A [`Polyhedron`] keeps both representations in canonical form:
//!
//! * generators: the vertices and extreme rays of `P ∩ L^⊥` together with a
//!   saturated basis of the lineality space `L`;
//! * constraints: equations in reduced echelon form and irredundant
//!   inequalities `<normal, x> >= offset` reduced modulo the equations, each
//!   with a primitive integer normal.
//!
//! Two polyhedra are equal as sets iff their constraint lists are equal.

mod dd;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{saturate, IntVector, LatticeBasis};
use crate::linalg::{self, Rat};

pub(crate) use dd::cone_generators;

/// The direction lattice `span(P - a) ∩ Z^n` of a polyhedron.
pub type DirectionLattice = LatticeBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    Inequality,
    Equation,
}

/// `<normal, x> >= offset` or `<normal, x> = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: IntVector,
    pub offset: Rat,
    pub kind: ConstraintKind,
}

impl HalfSpace {
    pub fn value(&self, x: &[Rat]) -> Rat {
        self.normal.dot_rat(x)
    }

    pub fn is_tight(&self, x: &[Rat]) -> bool {
        self.value(x) == self.offset
    }

    pub fn is_satisfied(&self, x: &[Rat]) -> bool {
        match self.kind {
            ConstraintKind::Equation => self.is_tight(x),
            ConstraintKind::Inequality => self.value(x) >= self.offset,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Polyhedron {
    ambient: usize,
    vertices: Vec<Vec<Rat>>,
    rays: Vec<IntVector>,
    lines: Vec<IntVector>,
    equations: Vec<HalfSpace>,
    inequalities: Vec<HalfSpace>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.equations == other.equations
            && self.inequalities == other.inequalities
    }
}

impl Eq for Polyhedron {}

impl PartialOrd for Polyhedron {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by (sorted vertex list, sorted ray list), then by constraints.
impl Ord for Polyhedron {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.vertices, self.generator_rays(), &self.equations, &self.inequalities).cmp(&(
            &other.vertices,
            other.generator_rays(),
            &other.equations,
            &other.inequalities,
        ))
    }
}

impl std::hash::Hash for Polyhedron {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.equations.hash(state);
        self.inequalities.hash(state);
    }
}

impl Polyhedron {
    /// `conv(vertices) + cone(rays)`. Opposite rays produce lines.
    pub fn from_generators(vertices: &[Vec<Rat>], rays: &[IntVector]) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::NoVertices);
        };
        let n = first.len();
        for x in vertices {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x.len() });
            }
        }
        for r in rays {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.len() });
            }
        }
        let (eqs, ineqs) = hrep_from_generators(n, vertices, rays);
        let (vertices, rays, lines) =
            generators_from_hrep(n, &eqs, &ineqs).expect("nonempty generator set");
        Ok(Polyhedron { ambient: n, vertices, rays, lines, equations: eqs, inequalities: ineqs })
    }

    /// The set `{x : eq_i(x) = b_i, ineq_j(x) >= c_j}`; `None` when empty.
    pub fn from_constraints(
        ambient: usize,
        equations: &[(Vec<Rat>, Rat)],
        inequalities: &[(Vec<Rat>, Rat)],
    ) -> Option<Self> {
        let eqs: Vec<HalfSpace> = equations
            .iter()
            .filter_map(|(a, b)| scaled_halfspace(a, b, ConstraintKind::Equation))
            .collect();
        if equations.iter().any(|(a, b)| a.iter().all(Zero::is_zero) && !b.is_zero()) {
            return None;
        }
        let ineqs: Vec<HalfSpace> = inequalities
            .iter()
            .filter_map(|(a, b)| scaled_halfspace(a, b, ConstraintKind::Inequality))
            .collect();
        if inequalities.iter().any(|(a, b)| a.iter().all(Zero::is_zero) && b.is_positive()) {
            return None;
        }
        let (vertices, rays, lines) = generators_from_hrep(ambient, &eqs, &ineqs)?;
        let mut all_rays = rays;
        for l in &lines {
            all_rays.push(l.clone());
            all_rays.push(-l);
        }
        Some(Self::from_generators(&vertices, &all_rays).expect("nonempty"))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    /// Vertices of `P ∩ L^⊥`, where `L` is the lineality space.
    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// Extreme rays of the pointed part (primitive).
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    /// Saturated basis of the lineality space.
    pub fn lines(&self) -> &[IntVector] {
        &self.lines
    }

    /// Rays with each line expanded into two opposite rays, sorted.
    pub fn generator_rays(&self) -> Vec<IntVector> {
        let mut out = self.rays.clone();
        for l in &self.lines {
            out.push(l.clone());
            out.push(-l);
        }
        out.sort();
        out
    }

    pub fn equations(&self) -> &[HalfSpace] {
        &self.equations
    }

    pub fn inequalities(&self) -> &[HalfSpace] {
        &self.inequalities
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.ambient
            && self.equations.iter().all(|h| h.is_tight(x))
            && self.inequalities.iter().all(|h| h.is_satisfied(x))
    }

    /// In the relative interior: every inequality strict.
    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        self.contains(x) && self.inequalities.iter().all(|h| !h.is_tight(x))
    }

    /// Average of the vertices plus the sum of the extreme rays.
    pub fn relative_interior_point(&self) -> Vec<Rat> {
        let k = Rat::from_integer(BigInt::from(self.vertices.len()));
        let mut p = vec![Rat::zero(); self.ambient];
        for v in &self.vertices {
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi += vi;
            }
        }
        for pi in p.iter_mut() {
            *pi = &*pi / &k;
        }
        for r in &self.rays {
            for (pi, ri) in p.iter_mut().zip(r.entries()) {
                *pi += Rat::from_integer(ri.clone());
            }
        }
        p
    }

    pub fn direction_lattice(&self) -> DirectionLattice {
        let base = &self.vertices[0];
        let mut dirs: Vec<IntVector> = self.vertices[1..]
            .iter()
            .map(|v| {
                let d: Vec<Rat> = v.iter().zip(base).map(|(a, b)| a - b).collect();
                linalg::primitive_from_rat(&d)
            })
            .collect();
        dirs.extend(self.rays.iter().cloned());
        dirs.extend(self.lines.iter().cloned());
        saturate(&dirs, self.ambient)
    }

    /// Faces cut out by each inequality, i.e. the facets.
    pub fn facets(&self) -> Vec<Polyhedron> {
        let mut out: Vec<Polyhedron> = self
            .inequalities
            .iter()
            .map(|h| self.face_on(std::slice::from_ref(h)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// All `k`-dimensional faces; empty when `k > dim`.
    pub fn faces(&self, k: usize) -> Vec<Polyhedron> {
        let dim = self.dim();
        if k > dim || k < self.lines.len() {
            return Vec::new();
        }
        let mut level = vec![self.clone()];
        for _ in k..dim {
            let next: BTreeSet<Polyhedron> = level.iter().flat_map(|f| f.facets()).collect();
            level = next.into_iter().collect();
        }
        level
    }

    /// The face of `self` on which the given constraints are tight.
    pub fn face_on(&self, tight: &[HalfSpace]) -> Polyhedron {
        let verts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .filter(|v| tight.iter().all(|h| h.is_tight(v)))
            .cloned()
            .collect();
        let mut rays: Vec<IntVector> = self
            .rays
            .iter()
            .filter(|r| tight.iter().all(|h| h.normal.dot(r).is_zero()))
            .cloned()
            .collect();
        for l in &self.lines {
            rays.push(l.clone());
            rays.push(-l);
        }
        Polyhedron::from_generators(&verts, &rays).expect("faces of nonempty polyhedra are nonempty")
    }

    /// Smallest face containing `x` (assumed to lie in `self`).
    pub fn face_containing(&self, x: &[Rat]) -> Polyhedron {
        let tight: Vec<HalfSpace> = self.inequalities.iter().filter(|h| h.is_tight(x)).cloned().collect();
        self.face_on(&tight)
    }

    pub fn intersection(&self, other: &Polyhedron) -> Option<Polyhedron> {
        let eqs: Vec<(Vec<Rat>, Rat)> = self
            .equations
            .iter()
            .chain(&other.equations)
            .map(|h| (h.normal.to_rat(), h.offset.clone()))
            .collect();
        let ineqs: Vec<(Vec<Rat>, Rat)> = self
            .inequalities
            .iter()
            .chain(&other.inequalities)
            .map(|h| (h.normal.to_rat(), h.offset.clone()))
            .collect();
        Polyhedron::from_constraints(self.ambient, &eqs, &ineqs)
    }

    /// Whether `self` is a face of `other`.
    pub fn is_face_of(&self, other: &Polyhedron) -> bool {
        let x = self.relative_interior_point();
        if !other.contains(&x) || !self.vertices.iter().all(|v| other.contains(v)) {
            return false;
        }
        other.face_containing(&x) == *self
    }

    /// Image under `x -> factor * x` (`factor > 0`).
    pub fn scaled(&self, factor: &Rat) -> Polyhedron {
        assert!(factor.is_positive(), "scale factor must be positive");
        let verts: Vec<Vec<Rat>> = self.vertices.iter().map(|v| v.iter().map(|x| x * factor).collect()).collect();
        Polyhedron::from_generators(&verts, &self.generator_rays()).expect("nonempty")
    }

    /// Euclidean volume of a bounded polytope of full dimension; zero if
    /// lower-dimensional, `None` if unbounded.
    pub fn volume(&self) -> Option<Rat> {
        if !self.is_bounded() {
            return None;
        }
        if self.dim() < self.ambient {
            return Some(Rat::zero());
        }
        let n = self.ambient;
        let fact = Rat::from_integer(linalg::factorial(n));
        let total = self.triangulate().iter().fold(Rat::zero(), |acc, s| {
            let rows: Vec<Vec<Rat>> =
                s[1..].iter().map(|v| v.iter().zip(&s[0]).map(|(a, b)| a - b).collect()).collect();
            acc + linalg::det_rat(&rows).abs()
        });
        Some(total / fact)
    }

    /// Pulling triangulation of a bounded polytope: simplices given by their
    /// `dim + 1` vertices.
    pub fn triangulate(&self) -> Vec<Vec<Vec<Rat>>> {
        assert!(self.is_bounded(), "triangulation of an unbounded polyhedron");
        let d = self.dim();
        if self.vertices.len() == d + 1 {
            return vec![self.vertices.clone()];
        }
        let apex = &self.vertices[0];
        let mut out = Vec::new();
        for f in self.facets() {
            if f.contains(apex) {
                continue;
            }
            for mut s in f.triangulate() {
                s.insert(0, apex.clone());
                out.push(s);
            }
        }
        out
    }
}

fn scaled_halfspace(a: &[Rat], b: &Rat, kind: ConstraintKind) -> Option<HalfSpace> {
    if a.iter().all(Zero::is_zero) {
        return None;
    }
    let s = linalg::primitive_scale(a);
    Some(HalfSpace { normal: linalg::primitive_from_rat(a), offset: b * s, kind })
}

/// `(x, 1)` scaled to a primitive integer vector.
fn homogenize_point(x: &[Rat]) -> IntVector {
    let mut y = x.to_vec();
    y.push(Rat::one());
    linalg::primitive_from_rat(&y)
}

fn homogenize_ray(r: &IntVector) -> IntVector {
    let mut y = r.entries().to_vec();
    y.push(BigInt::zero());
    IntVector::new(y)
}

/// Constraint `<a, x> >= b` as the cone constraint `<(a, -b), (x, t)> >= 0`.
fn homogenize_constraint(h: &HalfSpace) -> IntVector {
    let mut y = h.normal.to_rat();
    y.push(-h.offset.clone());
    linalg::primitive_from_rat(&y)
}

fn hrep_from_generators(n: usize, vertices: &[Vec<Rat>], rays: &[IntVector]) -> (Vec<HalfSpace>, Vec<HalfSpace>) {
    let gens: Vec<IntVector> = vertices
        .iter()
        .map(|v| homogenize_point(v))
        .chain(rays.iter().map(homogenize_ray))
        .collect();
    let dual = cone_generators(n + 1, &gens, &[]);
    let split = |y: &IntVector| -> (Vec<Rat>, Rat) {
        let e = y.to_rat();
        (e[..n].to_vec(), -e[n].clone())
    };
    let eqs: Vec<(Vec<Rat>, Rat)> = dual.lines.iter().map(split).collect();
    let ineqs: Vec<(Vec<Rat>, Rat)> = dual.rays.iter().map(split).collect();
    canonical_hrep(n, eqs, ineqs)
}

/// Reduced echelon equations; inequalities reduced modulo the equations,
/// scaled to primitive normals, deduplicated and sorted.
fn canonical_hrep(
    n: usize,
    eqs: Vec<(Vec<Rat>, Rat)>,
    ineqs: Vec<(Vec<Rat>, Rat)>,
) -> (Vec<HalfSpace>, Vec<HalfSpace>) {
    let rows: Vec<Vec<Rat>> = eqs
        .into_iter()
        .map(|(mut a, b)| {
            a.push(b);
            a
        })
        .collect();
    let (rows, pivots) = if rows.is_empty() { (Vec::new(), Vec::new()) } else { linalg::rref(rows) };
    debug_assert!(pivots.iter().all(|&p| p < n), "inconsistent equations");
    let equations: Vec<HalfSpace> = rows
        .iter()
        .filter_map(|r| scaled_halfspace(&r[..n], &r[n], ConstraintKind::Equation))
        .collect();
    let mut inequalities: Vec<HalfSpace> = ineqs
        .into_iter()
        .filter_map(|(a, b)| {
            let mut y = a;
            y.push(b);
            for (row, &pc) in rows.iter().zip(&pivots) {
                let f = y[pc].clone();
                if f.is_zero() {
                    continue;
                }
                for (yi, ri) in y.iter_mut().zip(row) {
                    *yi -= &f * ri;
                }
            }
            scaled_halfspace(&y[..n], &y[n], ConstraintKind::Inequality)
        })
        .collect();
    inequalities.sort();
    inequalities.dedup();
    (equations, inequalities)
}

type Generators = (Vec<Vec<Rat>>, Vec<IntVector>, Vec<IntVector>);

fn generators_from_hrep(n: usize, eqs: &[HalfSpace], ineqs: &[HalfSpace]) -> Option<Generators> {
    let heqs: Vec<IntVector> = eqs.iter().map(homogenize_constraint).collect();
    let mut hineqs: Vec<IntVector> = ineqs.iter().map(homogenize_constraint).collect();
    hineqs.push(IntVector::unit(n + 1, n));
    let cone = cone_generators(n + 1, &hineqs, &heqs);

    let lines_raw: Vec<IntVector> = cone
        .lines
        .iter()
        .map(|l| {
            debug_assert!(l[n].is_zero());
            IntVector::new(l.entries()[..n].to_vec())
        })
        .collect();
    let lines = saturate(&lines_raw, n).vectors().to_vec();
    let lines_rat: Vec<Vec<Rat>> = lines.iter().map(IntVector::to_rat).collect();

    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in &cone.rays {
        let t = &r[n];
        let x: Vec<Rat> = r.entries()[..n].iter().map(|xi| Rat::from_integer(xi.clone())).collect();
        if t.is_positive() {
            let t = Rat::from_integer(t.clone());
            let p: Vec<Rat> = x.iter().map(|xi| xi / &t).collect();
            vertices.push(linalg::project_out(&p, &lines_rat));
        } else {
            let proj = linalg::project_out(&x, &lines_rat);
            let ray = linalg::primitive_from_rat(&proj);
            if !ray.is_zero() {
                rays.push(ray);
            }
        }
    }
    if vertices.is_empty() {
        return None;
    }
    vertices.sort();
    vertices.dedup();
    rays.sort();
    rays.dedup();
    Some((vertices, rays, lines))
}

/// Integer point helper for callers working with integral data.
pub fn int_point(xs: &[i64]) -> Vec<Rat> {
    linalg::rat_vec(xs)
}

/// Least common multiple of the denominators of a rational point.
pub fn denominator_lcm(x: &[Rat]) -> BigInt {
    x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

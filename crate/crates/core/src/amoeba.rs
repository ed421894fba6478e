//! Sampling amoebas of plane curves and measuring their distance to a
//! tropical hypersurface.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::complexes::WeightedComplex;
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::polyhedra::Polyhedron;
use crate::troppoly::TropicalPolynomial;

/// Relative residual accepted for a sampled root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPolynomial {
    pub n: usize,
    pub terms: Vec<(Vec<i64>, Complex64)>,
}

impl LaurentPolynomial {
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(e, c)| c * monomial(e, z)).sum()
    }

    /// `Σ |c_α z^α|`, the scale against which residuals are measured.
    pub fn magnitude(&self, z: &[Complex64]) -> f64 {
        self.terms.iter().map(|(e, c)| (c * monomial(e, z)).norm()).sum()
    }
}

fn monomial(e: &[i64], z: &[Complex64]) -> Complex64 {
    e.iter().zip(z).map(|(&k, zi)| zi.powi(k as i32)).product()
}

/// `Σ exp(l c_α) z^{m α}`.
pub fn build_flm(p: &TropicalPolynomial, l: u32, m: u32) -> LaurentPolynomial {
    let terms = p
        .terms()
        .iter()
        .map(|(alpha, c)| {
            let e: Vec<i64> = alpha.entries().iter().map(|a| a.to_i64().expect("small exponent") * i64::from(m)).collect();
            let coef = (f64::from(l) * c.to_f64().expect("finite coefficient")).exp();
            (e, Complex64::new(coef, 0.0))
        })
        .collect();
    LaurentPolynomial { n: p.n(), terms }
}

/// The square `[lo, hi]^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window { lo: -5.0, hi: 5.0 }
    }
}

impl Window {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().all(|&v| v >= self.lo && v <= self.hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmoebaSample {
    /// `Log_t` of the sampled points.
    pub points: Vec<Vec<f64>>,
    /// The complex points whose images are `points`.
    pub witnesses: Vec<Vec<Complex64>>,
    pub t: f64,
    pub source: String,
    /// Fibers where the polynomial in `z_2` vanished identically.
    pub degenerate_fibers: usize,
}

/// Roots of `Σ a_k x^k` (`a` in ascending order, leading coefficient nonzero).
pub fn polynomial_roots(a: &[Complex64]) -> Vec<Complex64> {
    let d = a.len() - 1;
    match d {
        0 => Vec::new(),
        1 => vec![-a[0] / a[1]],
        _ => {
            let lead = a[d];
            let mut c = DMatrix::<Complex64>::zeros(d, d);
            for i in 1..d {
                c[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..d {
                c[(i, d - 1)] = -a[i] / lead;
            }
            let eig = c.clone().schur().eigenvalues().expect("complex Schur form is triangular");
            eig.iter().map(|&z| polish(a, z)).collect()
        }
    }
}

fn polish(a: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (mut f, mut df) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &c in a.iter().rev() {
            df = df * z + f;
            f = f * z + c;
        }
        if df.norm() == 0.0 || !f.is_finite() {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        z -= step;
    }
    z
}

/// Fiberwise sampling over `z_1 = exp(x + iθ)` with `x` on a `grid`-point
/// mesh of the window and `θ = 2πj / grid`.
pub fn sample_amoeba(f: &LaurentPolynomial, grid: usize, window: Window) -> Result<AmoebaSample> {
    if f.n != 2 {
        return Err(Error::Invalid("amoeba sampling supports n = 2 only".into()));
    }
    if grid < 2 {
        return Err(Error::Invalid("grid must be at least 2".into()));
    }
    let min2 = f.terms.iter().map(|(e, _)| e[1]).min().unwrap_or(0);
    let max2 = f.terms.iter().map(|(e, _)| e[1]).max().unwrap_or(0);
    let deg = (max2 - min2) as usize;
    let mut points = Vec::new();
    let mut witnesses = Vec::new();
    let mut degenerate = 0;
    for i in 0..grid {
        let x = window.lo + (window.hi - window.lo) * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let theta = 2.0 * PI * j as f64 / grid as f64;
            let z1 = Complex64::from_polar(x.exp(), theta);
            let mut a = vec![Complex64::new(0.0, 0.0); deg + 1];
            for (e, c) in &f.terms {
                a[(e[1] - min2) as usize] += c * z1.powi(e[0] as i32);
            }
            while a.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
                a.pop();
            }
            if a.is_empty() {
                degenerate += 1;
                continue;
            }
            let lowest = a.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0);
            for z2 in polynomial_roots(&a[lowest..]) {
                let z = [z1, z2];
                let pt = vec![z1.norm().ln(), z2.norm().ln()];
                if !pt.iter().all(|v| v.is_finite()) || !window.contains(&pt) {
                    continue;
                }
                if f.evaluate(&z).norm() > RESIDUAL_TOLERANCE * f.magnitude(&z) {
                    continue;
                }
                points.push(pt);
                witnesses.push(z.to_vec());
            }
        }
    }
    Ok(AmoebaSample { points, witnesses, t: std::f64::consts::E, source: format!("{} terms", f.terms.len()), degenerate_fibers: degenerate })
}

/// Pulls the sample back along `z -> z^m`: points divided by `m`, principal
/// `m`-th roots of the witnesses, `t -> t^m`.
pub fn rescale(sample: &AmoebaSample, m: u32) -> AmoebaSample {
    let mf = f64::from(m);
    AmoebaSample {
        points: sample.points.iter().map(|p| p.iter().map(|x| x / mf).collect()).collect(),
        witnesses: sample.witnesses.iter().map(|w| w.iter().map(|z| z.powf(1.0 / mf)).collect()).collect(),
        t: sample.t.powf(mf),
        source: format!("{} rescaled by {m}", sample.source),
        degenerate_fibers: sample.degenerate_fibers,
    }
}

/// An affine face with an orthonormal frame for its direction space.
struct FaceGeometry {
    origin: Vec<f64>,
    frame: Vec<Vec<f64>>,
    constraints: Vec<(Vec<f64>, f64)>,
}

fn rat_f64(x: &Rat) -> f64 {
    x.to_f64().expect("finite")
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn face_geometry(f: &Polyhedron) -> FaceGeometry {
    let origin: Vec<f64> = f.vertices()[0].iter().map(rat_f64).collect();
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for d in f.direction_lattice().vectors() {
        let mut u = d.to_f64();
        for e in &frame {
            let k = dot(&u, e);
            for (ui, ei) in u.iter_mut().zip(e) {
                *ui -= k * ei;
            }
        }
        let norm = dot(&u, &u).sqrt();
        frame.push(u.into_iter().map(|x| x / norm).collect());
    }
    let constraints = f
        .inequalities()
        .iter()
        .map(|h| {
            let a = h.normal.to_f64();
            let norm = dot(&a, &a).sqrt();
            (a.iter().map(|x| x / norm).collect(), rat_f64(&h.offset) / norm)
        })
        .collect();
    FaceGeometry { origin, frame, constraints }
}

/// Euclidean distance from points to the support of a complex.
pub struct SupportDistance {
    faces: Vec<FaceGeometry>,
}

const FACE_TOLERANCE: f64 = 1e-12;

impl SupportDistance {
    pub fn new(c: &WeightedComplex) -> Self {
        let mut faces = Vec::new();
        for cell in c.cells() {
            for k in 0..=cell.polyhedron.dim() {
                faces.extend(cell.polyhedron.faces(k).iter().map(face_geometry));
            }
        }
        SupportDistance { faces }
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for f in &self.faces {
            let rel: Vec<f64> = x.iter().zip(&f.origin).map(|(a, b)| a - b).collect();
            let mut proj = f.origin.clone();
            for e in &f.frame {
                let k = dot(&rel, e);
                for (pi, ei) in proj.iter_mut().zip(e) {
                    *pi += k * ei;
                }
            }
            let scale = 1.0 + proj.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if f.constraints.iter().all(|(a, b)| dot(a, &proj) >= b - FACE_TOLERANCE * scale) {
                let d = x.iter().zip(&proj).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                best = best.min(d);
            }
        }
        best
    }
}

/// Largest distance from a sample point inside the window to the support.
pub fn one_sided_hausdorff(sample: &AmoebaSample, c: &WeightedComplex, window: Window) -> Result<f64> {
    let dist = SupportDistance::new(c);
    let inside: Vec<&Vec<f64>> = sample.points.iter().filter(|p| window.contains(p)).collect();
    if inside.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(inside.iter().map(|p| dist.distance(p)).fold(0.0, f64::max))
}

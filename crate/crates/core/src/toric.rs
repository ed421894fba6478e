//! Binomial equations of toric sets and their projective degrees.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{complete_to_unimodular, kernel_lattice, IntVector, LatticeBasis};
use crate::linalg::{format_rat, Rat};

/// `ζ^{ξ+} - γ ζ^{ξ-}` with `γ = exp(2πi · phase)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    pub xi: IntVector,
    pub plus: IntVector,
    pub minus: IntVector,
    /// Fraction of a full turn, in `[0, 1)`.
    pub phase: Rat,
}

impl Binomial {
    pub fn from_exponent(xi: IntVector, phase: Rat) -> Self {
        let plus = IntVector::new(xi.entries().iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() }).collect());
        let minus = IntVector::new(xi.entries().iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() }).collect());
        Binomial { xi, plus, minus, phase }
    }
}

fn monomial(e: &IntVector) -> String {
    let parts: Vec<String> = e
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, k)| !k.is_zero())
        .map(|(i, k)| if k == &BigInt::from(1) { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, k) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - g*{}  (g = exp(2*pi*i*{}))", monomial(&self.plus), monomial(&self.minus), format_rat(&self.phase))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialSystem {
    pub ambient: usize,
    pub binomials: Vec<Binomial>,
}

fn frac(x: Rat) -> Rat {
    let f = x.floor();
    x - f
}

/// One binomial per generator of `Ker B^t ∩ Z^n`. `phases` holds one angle
/// per completion column of `B` (empty means all zero).
pub fn binomial_system(b: &LatticeBasis, phases: &[Rat]) -> Result<BinomialSystem> {
    if !b.is_saturated() {
        return Err(Error::NotSaturated);
    }
    let n = b.ambient();
    let k = b.rank();
    if !phases.is_empty() && phases.len() != n - k {
        return Err(Error::DimensionMismatch { expected: n - k, found: phases.len() });
    }
    let d = complete_to_unimodular(b)?;
    let kernel = kernel_lattice(&b.matrix());
    let binomials = kernel
        .vectors()
        .iter()
        .map(|xi| {
            let turn = phases
                .iter()
                .enumerate()
                .fold(Rat::zero(), |acc, (j, t)| acc + t * Rat::from_integer(xi.dot(&d.column(k + j))));
            Binomial::from_exponent(xi.clone(), frac(turn))
        })
        .collect();
    Ok(BinomialSystem { ambient: n, binomials })
}

/// `max(Σ ξ+, Σ ξ-)`.
pub fn projective_degree(b: &Binomial) -> BigInt {
    b.plus.sum_entries().max(b.minus.sum_entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{saturate, IntMatrix};
    use crate::linalg::{rat, rat_frac};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> IntVector {
        IntVector::from_i64s(xs)
    }

    fn basis(n: usize, vs: &[&[i64]]) -> LatticeBasis {
        LatticeBasis::new(n, vs.iter().map(|x| v(x)).collect()).unwrap()
    }

    #[test]
    fn binomial_examples() {
        let s = binomial_system(&basis(2, &[&[1, 1]]), &[]).unwrap();
        assert_eq!(s.binomials.len(), 1);
        assert_eq!((s.binomials[0].plus.clone(), s.binomials[0].minus.clone()), (v(&[1, 0]), v(&[0, 1])));
        assert_eq!(projective_degree(&s.binomials[0]), BigInt::from(1));

        let s = binomial_system(&basis(2, &[&[1, 2]]), &[]).unwrap();
        assert_eq!((s.binomials[0].plus.clone(), s.binomials[0].minus.clone()), (v(&[2, 0]), v(&[0, 1])));
        assert_eq!(projective_degree(&s.binomials[0]), BigInt::from(2));
        assert_eq!(s.binomials[0].to_string(), "z1^2 - g*z2  (g = exp(2*pi*i*0))");

        let s = binomial_system(&basis(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), &[]).unwrap();
        assert!(s.binomials.is_empty());

        assert_eq!(binomial_system(&basis(2, &[&[2, 2]]), &[]).unwrap_err(), Error::NotSaturated);
    }

    #[test]
    fn scaled_exponent_scales_degree() {
        for m in 1..5 {
            let b = Binomial::from_exponent(v(&[2 * m, -m]), rat(0));
            assert_eq!(projective_degree(&b), BigInt::from(2 * m));
        }
    }

    #[test]
    fn phases_reduce_mod_one() {
        let s = binomial_system(&basis(2, &[&[1, 1]]), &[rat_frac(3, 4)]).unwrap();
        let p = &s.binomials[0].phase;
        assert!(*p >= rat(0) && *p < rat(1));
        assert_eq!(binomial_system(&basis(2, &[&[1, 1]]), &[rat(1), rat(1)]).unwrap_err(), Error::DimensionMismatch { expected: 1, found: 2 });
    }

    proptest! {
        #[test]
        fn supports_and_kernel(raw in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..3)) {
            let dirs: Vec<IntVector> = raw.iter().map(|r| v(r)).collect();
            let b = saturate(&dirs, 4);
            let s = binomial_system(&b, &[]).unwrap();
            let bt = b.matrix().transpose();
            for bin in &s.binomials {
                for (x, y) in bin.plus.entries().iter().zip(bin.minus.entries()) {
                    prop_assert!(x.is_zero() || y.is_zero());
                }
                prop_assert!(bt.mul_vec(&bin.xi).is_zero());
                prop_assert_eq!(&(&bin.plus - &bin.minus), &bin.xi);
                prop_assert!(bin.xi.entries().iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive()));
            }
            // double duality: the kernel of the exponents contains B
            let xis: Vec<IntVector> = s.binomials.iter().map(|x| x.xi.clone()).collect();
            let back = kernel_lattice(&IntMatrix::from_columns(&xis, 4));
            let span = IntMatrix::from_columns(back.vectors(), 4);
            for w in b.vectors() {
                let mut cols = back.vectors().to_vec();
                cols.push(w.clone());
                prop_assert_eq!(IntMatrix::from_columns(&cols, 4).rank(), span.rank());
            }
        }
    }
}

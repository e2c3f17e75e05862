//! Integer form of a unitriangular group over ℚ, for fast exact word
//! arithmetic.
//!
//! After conjugating by the Kolchin base change `B`, every element is lower
//! unitriangular. A further diagonal conjugation `D` clears the generators'
//! denominators; integer unitriangular matrices form a group, so every word
//! then stays integral and no gcds are needed. Conjugation preserves the
//! identity, so "is this word trivial" has the same answer in both forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::rep::{kolchin_flag, KolchinOutcome, Representation};

/// `I + N` with `N` strictly lower triangular; `N` packed by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntUnitri {
    n: usize,
    lower: Vec<BigInt>,
}

fn offset(i: usize) -> usize {
    i * (i - 1) / 2
}

impl IntUnitri {
    pub fn identity(n: usize) -> Self {
        IntUnitri { n, lower: vec![BigInt::zero(); n * (n.max(1) - 1) / 2] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        debug_assert!(j < i);
        &self.lower[offset(i) + j]
    }

    pub fn is_identity(&self) -> bool {
        self.lower.iter().all(Zero::is_zero)
    }

    /// `(I + A)(I + B) = I + A + B + A·B`.
    pub fn mul(&self, other: &IntUnitri) -> IntUnitri {
        let n = self.n;
        let mut lower = Vec::with_capacity(self.lower.len());
        for i in 1..n {
            let row = offset(i);
            for j in 0..i {
                let mut acc = &self.lower[row + j] + &other.lower[row + j];
                for k in j + 1..i {
                    let a = &self.lower[row + k];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.lower[offset(k) + j];
                    if !b.is_zero() {
                        acc += a * b;
                    }
                }
                lower.push(acc);
            }
        }
        IntUnitri { n, lower }
    }

    pub fn to_matrix(&self) -> Matrix {
        let q = FieldSpec::Rationals;
        let mut m = Matrix::identity(q, self.n);
        for i in 1..self.n {
            for j in 0..i {
                m.set(i, j, q.from_bigint(self.get(i, j)));
            }
        }
        m
    }
}

/// The conjugation `g ↦ T·g·T⁻¹` into integer lower-unitriangular form.
#[derive(Clone, Debug)]
pub struct IntegralForm {
    transform: Matrix,
    transform_inv: Matrix,
    /// Generator images and their inverses, in generator order.
    pub generators: Vec<(IntUnitri, IntUnitri)>,
}

impl IntegralForm {
    /// `None` unless the field is ℚ and the group is unitriangular.
    pub fn new(rep: &Representation) -> Option<Self> {
        if rep.field() != FieldSpec::Rationals {
            return None;
        }
        let KolchinOutcome::Unitriangular(cert) = kolchin_flag(rep).ok()? else {
            return None;
        };
        let b = cert.base_change;
        let b_inv = b.inverse()?;
        let lowered: Vec<Matrix> = rep.generators().map(|(_, g)| b.mul(&g.matrix).mul(&b_inv)).collect();
        let n = rep.dim();
        // d_i = lcm over generators and j < i of den(l_ij)·d_j makes every l_ij·d_i/d_j integral
        let mut d: Vec<BigInt> = vec![BigInt::one(); n];
        for i in 1..n {
            let mut acc = BigInt::one();
            for l in &lowered {
                for (j, dj) in d.iter().enumerate().take(i) {
                    let r = l.get(i, j).as_rational()?;
                    if !r.is_zero() {
                        acc = acc.lcm(&(r.denom() * dj));
                    }
                }
            }
            d[i] = acc;
        }
        let q = FieldSpec::Rationals;
        let mut scale = Matrix::zeros(q, n, n);
        let mut scale_inv = Matrix::zeros(q, n, n);
        for (i, di) in d.iter().enumerate() {
            scale.set(i, i, q.from_bigint(di));
            scale_inv.set(i, i, q.from_fraction(&BigInt::one(), di)?);
        }
        let transform = scale.mul(&b);
        let transform_inv = b_inv.mul(&scale_inv);
        let convert = |m: &Matrix| -> Option<IntUnitri> {
            let t = transform.mul(m).mul(&transform_inv);
            let mut out = IntUnitri::identity(n);
            for i in 0..n {
                for j in 0..n {
                    let s = t.get(i, j);
                    if (i == j && !s.is_one()) || (j > i && !s.is_zero()) {
                        return None;
                    }
                    if j >= i {
                        continue;
                    }
                    let r = s.as_rational()?;
                    if !r.is_integer() {
                        return None;
                    }
                    out.lower[offset(i) + j] = r.to_integer();
                }
            }
            Some(out)
        };
        let generators = rep
            .generators()
            .map(|(_, g)| Some((convert(&g.matrix)?, convert(&g.inverse)?)))
            .collect::<Option<Vec<_>>>()?;
        Some(IntegralForm { transform, transform_inv, generators })
    }

    /// Back to the representation's own basis.
    pub fn to_original(&self, m: &IntUnitri) -> Matrix {
        self.transform_inv.mul(&m.to_matrix()).mul(&self.transform)
    }

    pub fn transform(&self) -> &Matrix {
        &self.transform
    }
}

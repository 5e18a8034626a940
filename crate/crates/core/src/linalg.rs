//! Exact Gaussian elimination over prime fields and the rationals.
//!
//! Everything here is exact: residues are `u64` reduced modulo a prime and
//! rationals are arbitrary precision. Closure membership in a vector matroid
//! reduces to "does the target survive reduction against an echelon basis of
//! the spanning vectors", which is what [`Echelon`] answers.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// The arithmetic a field must supply for row reduction.
pub trait Field {
    type Elem: Clone + PartialEq + core::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `a - factor * b`
    fn sub_mul(&self, a: &Self::Elem, factor: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a / b` for nonzero `b`.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// GF(p) for a prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Returns `None` unless `p` is prime.
    pub fn new(p: u64) -> Option<Self> {
        (is_prime(p) && p < (1 << 63)).then_some(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn is_zero(&self, a: &u64) -> bool {
        (*a).is_multiple_of(self.p)
    }

    fn sub_mul(&self, a: &u64, factor: &u64, b: &u64) -> u64 {
        let prod = self.mul(*factor, *b);
        (*a % self.p + self.p - prod) % self.p
    }

    fn div(&self, a: &u64, b: &u64) -> u64 {
        self.mul(*a, self.inv(*b))
    }
}

/// The field of rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn sub_mul(&self, a: &BigRational, factor: &BigRational, b: &BigRational) -> BigRational {
        a - factor * b
    }

    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
}

/// Trial division; the primes used here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A row-echelon basis built incrementally. Every stored row has a pivot
/// normalized to one and is reduced against the rows inserted before it.
pub struct Echelon<'f, F: Field> {
    field: &'f F,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<'f, F: Field> Echelon<'f, F> {
    pub fn new(field: &'f F) -> Self {
        Self {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [F::Elem]) {
        for (pivot, row) in &self.rows {
            if self.field.is_zero(&v[*pivot]) {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !self.field.is_zero(y) {
                    *x = self.field.sub_mul(x, &factor, y);
                }
            }
        }
    }

    /// Whether `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| self.field.is_zero(x))
    }

    /// Inserts `v`; returns `true` if it was independent of the current rows.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|x| !self.field.is_zero(x)) else {
            return false;
        };
        let lead = v[pivot].clone();
        for x in v.iter_mut() {
            *x = self.field.div(x, &lead);
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Rank of a list of vectors.
pub fn rank<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> usize {
    let mut ech = Echelon::new(field);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Lifts an affine point to homogeneous coordinates by appending a one.
pub fn homogenize<T: Clone + One>(point: &[T]) -> Vec<T> {
    let mut lifted = point.to_vec();
    lifted.push(T::one());
    lifted
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(PrimeField::new(4).is_none());
        assert!(PrimeField::new(7).is_some());
    }

    #[test]
    fn inverses_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn gf2_sum_is_in_span() {
        let f = PrimeField::new(2).unwrap();
        let mut e = Echelon::new(&f);
        assert!(e.insert(&[1, 0]));
        assert!(e.insert(&[0, 1]));
        assert!(e.contains(&[1, 1]));
        assert!(!e.insert(&[1, 1]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn gf3_line_through_origin() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(rank(&f, &[vec![1, 2], vec![2, 1], vec![0, 0]]), 1);
        assert_eq!(rank(&f, &[vec![1, 2], vec![1, 1]]), 2);
    }

    #[test]
    fn rational_rank_is_scale_invariant() {
        let a = vec![q(1, 2), q(1, 3), q(0, 1)];
        let b = vec![q(3, 1), q(2, 1), q(0, 1)];
        assert_eq!(rank(&Rationals, &[a.clone(), b]), 1);
        let c = vec![q(0, 1), q(0, 1), q(-5, 7)];
        assert_eq!(rank(&Rationals, &[a, c]), 2);
    }

    #[test]
    fn homogenize_appends_one() {
        assert_eq!(homogenize(&[q(2, 1)]), vec![q(2, 1), q(1, 1)]);
    }
}

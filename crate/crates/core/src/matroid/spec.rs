use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_rational::BigRational;

use super::{CallCounter, DirectSum, Graphic, Matroid, MatroidError, Oracle, Uniform, VectorMatroid};
use crate::linalg::{homogenize, PrimeField, Rationals};

/// Coordinates of vector or affine point configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinates {
    /// Residues in `0..p`.
    Prime { p: u64, rows: Vec<Vec<u64>> },
    Rational(Vec<Vec<BigRational>>),
}

impl Coordinates {
    pub fn len(&self) -> usize {
        match self {
            Coordinates::Prime { rows, .. } => rows.len(),
            Coordinates::Rational(rows) => rows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self, dim: usize) -> Result<(), MatroidError> {
        let check_len = |element: usize, found: usize| {
            if found == dim {
                Ok(())
            } else {
                Err(MatroidError::DimensionMismatch {
                    element,
                    expected: dim,
                    found,
                })
            }
        };
        match self {
            Coordinates::Prime { p, rows } => {
                PrimeField::new(*p).ok_or(MatroidError::NotPrime(*p))?;
                for (element, row) in rows.iter().enumerate() {
                    check_len(element, row.len())?;
                    if let Some(&value) = row.iter().find(|&&v| v >= *p) {
                        return Err(MatroidError::ResidueOutOfRange {
                            element,
                            value,
                            p: *p,
                        });
                    }
                }
            }
            Coordinates::Rational(rows) => {
                for (element, row) in rows.iter().enumerate() {
                    check_len(element, row.len())?;
                }
            }
        }
        Ok(())
    }
}

/// A concrete matroid description, buildable into an [`Oracle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidSpec {
    Vector { dim: usize, coords: Coordinates },
    /// Affine dependence of points; lifted to vectors by appending a 1.
    Affine { dim: usize, coords: Coordinates },
    Uniform { rank: usize, size: usize },
    /// Multigraph on `0..vertices`; edge `i` is ground element `i`.
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    /// Right-hand ids follow the left-hand ones.
    DirectSum(Box<MatroidSpec>, Box<MatroidSpec>),
}

impl MatroidSpec {
    pub fn ground_size(&self) -> usize {
        match self {
            MatroidSpec::Vector { coords, .. } | MatroidSpec::Affine { coords, .. } => coords.len(),
            MatroidSpec::Uniform { size, .. } => *size,
            MatroidSpec::Graphic { edges, .. } => edges.len(),
            MatroidSpec::DirectSum(l, r) => l.ground_size() + r.ground_size(),
        }
    }

    /// Short family label, e.g. for CSV output.
    pub fn family_name(&self) -> &'static str {
        match self {
            MatroidSpec::Vector {
                coords: Coordinates::Prime { .. },
                ..
            } => "vector-gfp",
            MatroidSpec::Vector { .. } => "vector-rational",
            MatroidSpec::Affine { .. } => "affine",
            MatroidSpec::Uniform { .. } => "uniform",
            MatroidSpec::Graphic { .. } => "graphic",
            MatroidSpec::DirectSum(..) => "direct-sum",
        }
    }

    pub fn build(&self) -> Result<Oracle, MatroidError> {
        let matroid = self.build_matroid()?;
        Ok(Oracle::from_arc(matroid, Arc::new(CallCounter::new())))
    }

    fn build_matroid(&self) -> Result<Arc<dyn Matroid>, MatroidError> {
        Ok(match self {
            MatroidSpec::Vector { dim, coords } => {
                coords.validate(*dim)?;
                vector_matroid(coords, |rows| rows.to_vec(), |rows| rows.to_vec())
            }
            MatroidSpec::Affine { dim, coords } => {
                coords.validate(*dim)?;
                vector_matroid(
                    coords,
                    |rows| rows.iter().map(|r| homogenize(r)).collect(),
                    |rows| rows.iter().map(|r| homogenize(r)).collect(),
                )
            }
            MatroidSpec::Uniform { rank, size } => Arc::new(Uniform::new(*rank, *size)?),
            MatroidSpec::Graphic { vertices, edges } => {
                Arc::new(Graphic::new(*vertices, edges.clone())?)
            }
            MatroidSpec::DirectSum(l, r) => {
                Arc::new(DirectSum::new(l.build_matroid()?, r.build_matroid()?))
            }
        })
    }
}

fn vector_matroid(
    coords: &Coordinates,
    prime_rows: impl Fn(&[Vec<u64>]) -> Vec<Vec<u64>>,
    rational_rows: impl Fn(&[Vec<BigRational>]) -> Vec<Vec<BigRational>>,
) -> Arc<dyn Matroid> {
    match coords {
        Coordinates::Prime { p, rows } => {
            // validated above
            let field = PrimeField::new(*p).expect("prime");
            Arc::new(VectorMatroid::new(field, prime_rows(rows)))
        }
        Coordinates::Rational(rows) => Arc::new(VectorMatroid::new(Rationals, rational_rows(rows))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::ElementId;
    use alloc::vec;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn affine_collinear_points() {
        let spec = MatroidSpec::Affine {
            dim: 2,
            coords: Coordinates::Rational(vec![
                vec![q(0), q(0)],
                vec![q(1), q(0)],
                vec![q(2), q(0)],
                vec![q(0), q(1)],
            ]),
        };
        let m = spec.build().unwrap();
        assert_eq!(m.rank_bound(), 3);
        assert!(m.in_closure(ElementId(2), &[ElementId(0), ElementId(1)]).unwrap());
        assert!(!m.in_closure(ElementId(3), &[ElementId(0), ElementId(1)]).unwrap());
        // a single affine point is not a loop
        assert!(!m.is_loop(ElementId(0)).unwrap());
    }

    #[test]
    fn validation_errors() {
        let bad_prime = MatroidSpec::Vector {
            dim: 1,
            coords: Coordinates::Prime {
                p: 6,
                rows: vec![vec![1]],
            },
        };
        assert_eq!(bad_prime.build().unwrap_err(), MatroidError::NotPrime(6));

        let bad_dim = MatroidSpec::Vector {
            dim: 2,
            coords: Coordinates::Prime {
                p: 3,
                rows: vec![vec![1, 0], vec![1]],
            },
        };
        assert!(matches!(
            bad_dim.build().unwrap_err(),
            MatroidError::DimensionMismatch { element: 1, .. }
        ));

        let bad_residue = MatroidSpec::Vector {
            dim: 1,
            coords: Coordinates::Prime {
                p: 3,
                rows: vec![vec![3]],
            },
        };
        assert!(matches!(
            bad_residue.build().unwrap_err(),
            MatroidError::ResidueOutOfRange { value: 3, .. }
        ));

        let bad_edge = MatroidSpec::Graphic {
            vertices: 2,
            edges: vec![(0, 2)],
        };
        assert!(matches!(
            bad_edge.build().unwrap_err(),
            MatroidError::InvalidEdge { vertex: 2, .. }
        ));
    }

    #[test]
    fn direct_sum_rank_adds() {
        let spec = MatroidSpec::DirectSum(
            Box::new(MatroidSpec::Uniform { rank: 2, size: 4 }),
            Box::new(MatroidSpec::Graphic {
                vertices: 3,
                edges: vec![(0, 1), (1, 2), (0, 2)],
            }),
        );
        assert_eq!(spec.ground_size(), 7);
        let m = spec.build().unwrap();
        assert_eq!(m.rank_bound(), 4);
        assert!(m.in_closure(ElementId(6), &[ElementId(4), ElementId(5)]).unwrap());
        assert!(!m.in_closure(ElementId(6), &[ElementId(0), ElementId(1)]).unwrap());
    }
}

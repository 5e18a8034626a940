use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{ElementId, Matroid, MatroidError};
use crate::linalg::{Echelon, Field};

/// Column matroid of a list of vectors over an exact field.
pub struct VectorMatroid<F: Field> {
    field: F,
    vectors: Vec<Vec<F::Elem>>,
}

impl<F: Field> VectorMatroid<F> {
    /// All vectors must have the same length.
    pub fn new(field: F, vectors: Vec<Vec<F::Elem>>) -> Self {
        debug_assert!(vectors.windows(2).all(|w| w[0].len() == w[1].len()));
        Self { field, vectors }
    }

    pub fn vectors(&self) -> &[Vec<F::Elem>] {
        &self.vectors
    }
}

impl<F> Matroid for VectorMatroid<F>
where
    F: Field + Send + Sync,
    F::Elem: Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.vectors.len()
    }

    fn closure_contains(&self, x: ElementId, ys: &[ElementId]) -> bool {
        let mut ech = Echelon::new(&self.field);
        for y in ys {
            ech.insert(&self.vectors[y.0]);
        }
        ech.contains(&self.vectors[x.0])
    }

    fn closure_members(&self, ys: &[ElementId]) -> Vec<bool> {
        let mut ech = Echelon::new(&self.field);
        for y in ys {
            ech.insert(&self.vectors[y.0]);
        }
        self.vectors.iter().map(|v| ech.contains(v)).collect()
    }
}

/// U_k^n. Closure of `Y` is everything once `Y` has `k` distinct elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Uniform {
    rank: usize,
    size: usize,
}

impl Uniform {
    pub fn new(rank: usize, size: usize) -> Result<Self, MatroidError> {
        if rank > size {
            return Err(MatroidError::UniformRankTooLarge { rank, size });
        }
        Ok(Self { rank, size })
    }

    /// The free matroid U_n^n: every element is a coloop.
    pub fn free(size: usize) -> Self {
        Self { rank: size, size }
    }
}

impl Matroid for Uniform {
    fn ground_size(&self) -> usize {
        self.size
    }

    fn closure_contains(&self, x: ElementId, ys: &[ElementId]) -> bool {
        if ys.contains(&x) {
            return true;
        }
        let mut distinct = ys.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len() >= self.rank
    }
}

/// Cycle matroid of a multigraph; elements are edges.
#[derive(Clone, Debug)]
pub struct Graphic {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graphic {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, MatroidError> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertices {
                    return Err(MatroidError::InvalidEdge {
                        edge: i,
                        vertex: w,
                        vertices,
                    });
                }
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl Matroid for Graphic {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn closure_contains(&self, x: ElementId, ys: &[ElementId]) -> bool {
        let (u, v) = self.edges[x.0];
        if u == v {
            return true;
        }
        let mut dsu = DisjointSets::new(self.vertices);
        for y in ys {
            let (a, b) = self.edges[y.0];
            dsu.union(a, b);
        }
        dsu.find(u) == dsu.find(v)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: alloc::vec![1; n],
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// `left ⊕ right`; right ids are shifted by the left ground size.
pub struct DirectSum {
    left: Arc<dyn Matroid>,
    right: Arc<dyn Matroid>,
}

impl DirectSum {
    pub fn new(left: Arc<dyn Matroid>, right: Arc<dyn Matroid>) -> Self {
        Self { left, right }
    }
}

impl Matroid for DirectSum {
    fn ground_size(&self) -> usize {
        self.left.ground_size() + self.right.ground_size()
    }

    fn closure_contains(&self, x: ElementId, ys: &[ElementId]) -> bool {
        let split = self.left.ground_size();
        if x.0 < split {
            let side: Vec<ElementId> = ys.iter().copied().filter(|y| y.0 < split).collect();
            self.left.closure_contains(x, &side)
        } else {
            let side: Vec<ElementId> = ys
                .iter()
                .filter(|y| y.0 >= split)
                .map(|y| ElementId(y.0 - split))
                .collect();
            self.right.closure_contains(ElementId(x.0 - split), &side)
        }
    }
}

/// `M | members`, renumbered in the order of `members`.
pub struct Restriction {
    parent: Arc<dyn Matroid>,
    members: Vec<ElementId>,
}

impl Restriction {
    pub fn new(parent: Arc<dyn Matroid>, members: Vec<ElementId>) -> Self {
        Self { parent, members }
    }

    pub fn parent_element(&self, local: ElementId) -> ElementId {
        self.members[local.0]
    }
}

impl Matroid for Restriction {
    fn ground_size(&self) -> usize {
        self.members.len()
    }

    fn closure_contains(&self, x: ElementId, ys: &[ElementId]) -> bool {
        let ys: Vec<ElementId> = ys.iter().map(|&y| self.parent_element(y)).collect();
        self.parent.closure_contains(self.parent_element(x), &ys)
    }
}

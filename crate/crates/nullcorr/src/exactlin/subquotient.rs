use super::elim::{rank, SpanSolver};
use super::matrix::SparseVec;
use super::{Field, LinalgError, SparseMatrix};

/// `span(cycles) / span(boundaries)` inside a based ambient space, with a chosen basis of
/// representatives (columns of `cycles` completing a basis of the boundaries).
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    ambient_dim: usize,
    cycles: SparseMatrix<F>,
    boundaries: SparseMatrix<F>,
    representatives: SparseMatrix<F>,
    boundary_rank: usize,
}

impl<F: Field> Subquotient<F> {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.representatives.cols()
    }
    pub fn cycles(&self) -> &SparseMatrix<F> {
        &self.cycles
    }
    pub fn boundaries(&self) -> &SparseMatrix<F> {
        &self.boundaries
    }
    /// Columns representing a basis of the quotient.
    pub fn representatives(&self) -> &SparseMatrix<F> {
        &self.representatives
    }
    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }

    /// Solver over `[boundary basis | representatives]`; coordinates past
    /// `boundary_rank` are quotient coordinates.
    fn solver(&self) -> (SpanSolver<F>, SpanSolver<F>) {
        let field = self.cycles.field();
        let mut bsolver = SpanSolver::new(field);
        for col in self.boundaries.columns() {
            bsolver.insert(col);
        }
        let mut full = bsolver.clone();
        for col in self.representatives.columns() {
            let fresh = full.insert(col);
            debug_assert!(fresh);
        }
        (bsolver, full)
    }

    /// Quotient coordinates of a cycle, or `None` if `v` is not in the cycle space.
    pub fn coordinates(&self, v: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let (_, full) = self.solver();
        let comb = full.solve(v)?;
        Some(
            comb.into_iter()
                .filter(|(i, _)| *i >= self.boundary_rank)
                .map(|(i, x)| (i - self.boundary_rank, x))
                .collect(),
        )
    }
}

pub fn subquotient<F: Field>(
    ambient_dim: usize,
    cycles: SparseMatrix<F>,
    boundaries: SparseMatrix<F>,
) -> Result<Subquotient<F>, LinalgError> {
    if cycles.rows() != ambient_dim || boundaries.rows() != ambient_dim {
        return Err(LinalgError::ShapeMismatch {
            op: "subquotient",
            left: (cycles.rows(), cycles.cols()),
            right: (boundaries.rows(), boundaries.cols()),
        });
    }
    let field = cycles.field().clone();
    let mut zsolver = SpanSolver::new(&field);
    for col in cycles.columns() {
        zsolver.insert(col);
    }
    for (j, col) in boundaries.columns().iter().enumerate() {
        if !zsolver.contains(col) {
            return Err(LinalgError::ContainmentViolation { column: j });
        }
    }
    let mut solver = SpanSolver::new(&field);
    for col in boundaries.columns() {
        solver.insert(col);
    }
    let boundary_rank = solver.dim();
    let mut reps = Vec::new();
    for col in cycles.columns() {
        if solver.insert(col) {
            reps.push(col.clone());
        }
    }
    let representatives = SparseMatrix::from_columns(&field, ambient_dim, reps);
    Ok(Subquotient {
        ambient_dim,
        cycles,
        boundaries,
        representatives,
        boundary_rank,
    })
}

/// Matrix of the map on subquotients induced by `ambient`, in representative bases.
pub fn induced_map<F: Field>(
    src: &Subquotient<F>,
    dst: &Subquotient<F>,
    ambient: &SparseMatrix<F>,
) -> Result<SparseMatrix<F>, LinalgError> {
    if ambient.cols() != src.ambient_dim || ambient.rows() != dst.ambient_dim {
        return Err(LinalgError::ShapeMismatch {
            op: "induced_map",
            left: (ambient.rows(), ambient.cols()),
            right: (dst.ambient_dim, src.ambient_dim),
        });
    }
    let field = ambient.field();
    let (bsolver, full) = dst.solver();
    for (j, col) in src.boundaries.columns().iter().enumerate() {
        if !bsolver.contains(&ambient.apply(col)) {
            return Err(LinalgError::NotWellDefined {
                reason: format!("image of boundary column {j} is not a boundary"),
            });
        }
    }
    for (j, col) in src.cycles.columns().iter().enumerate() {
        if !full.contains(&ambient.apply(col)) {
            return Err(LinalgError::NotWellDefined {
                reason: format!("image of cycle column {j} is not a cycle"),
            });
        }
    }
    let mut columns = Vec::with_capacity(src.dim());
    for col in src.representatives.columns() {
        let comb = full
            .solve(&ambient.apply(col))
            .expect("cycles checked above");
        columns.push(
            comb.into_iter()
                .filter(|(i, _)| *i >= dst.boundary_rank)
                .map(|(i, x)| (i - dst.boundary_rank, x))
                .collect(),
        );
    }
    Ok(SparseMatrix::from_columns(field, dst.dim(), columns))
}

/// Dimension check used by tests: `rank(Z) - rank(B)`.
pub fn rank_difference<F: Field>(cycles: &SparseMatrix<F>, boundaries: &SparseMatrix<F>) -> usize {
    rank(cycles) - rank(boundaries)
}

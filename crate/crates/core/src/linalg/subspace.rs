use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

use super::matrix::Matrix;
use super::vector;

fn reduce_against(rows: &[Vec<Scalar>], pivots: &[usize], v: &mut [Scalar]) {
    for (row, &pc) in rows.iter().zip(pivots) {
        if v[pc].is_zero() {
            continue;
        }
        let c = v[pc].clone();
        for j in pc..v.len() {
            if !row[j].is_zero() {
                v[j] -= &(&c * &row[j]);
            }
        }
    }
}

/// Incremental reduced row-echelon builder.
///
/// Rows are kept sorted by pivot column, every pivot entry is 1 and every
/// pivot column is zero outside its own row.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Field, cols: usize) -> Echelon {
        Echelon {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts multiples of the stored rows so `v` vanishes on every pivot column.
    pub fn reduce(&self, v: &mut [Scalar]) {
        reduce_against(&self.rows, &self.pivots, v);
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.cols, "echelon row length");
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[lead].inv().expect("nonzero pivot");
        for x in v.iter_mut().skip(lead) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[lead].is_zero() {
                continue;
            }
            let c = row[lead].clone();
            for j in lead..self.cols {
                if !v[j].is_zero() {
                    row[j] -= &(&c * &v[j]);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(at, lead);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        vector::is_zero(&w)
    }

    pub fn into_rows(self) -> Vec<Vec<Scalar>> {
        self.rows
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace {
            field: self.field,
            ambient: self.cols,
            rows: self.rows,
            pivots: self.pivots,
        }
    }

    /// Null space of the stored rows.
    pub fn kernel(&self) -> Subspace {
        let mut basis = Vec::new();
        let mut pi = 0;
        for f in 0..self.cols {
            if pi < self.pivots.len() && self.pivots[pi] == f {
                pi += 1;
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                if !row[f].is_zero() {
                    v[pc] = -&row[f];
                }
            }
            basis.push(v);
        }
        Subspace::span(self.field, self.cols, basis)
    }
}

/// A subspace of `field^ambient` held in canonical reduced row-echelon form,
/// so two subspaces are equal exactly when their representations are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span<I>(field: Field, ambient: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut e = Echelon::new(field, ambient);
        for v in vectors {
            if e.rank() == ambient {
                break;
            }
            e.insert(v);
        }
        e.into_subspace()
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, (0..ambient).map(|i| vector::unit(field, ambient, i)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.ambient, self.rows.clone()).expect("basis shape")
    }

    fn echelon(&self) -> Echelon {
        Echelon {
            field: self.field,
            cols: self.ambient,
            rows: self.rows.clone(),
            pivots: self.pivots.clone(),
        }
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::InvalidField("subspaces over different fields".into()));
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// `v` modulo this subspace, normalized to vanish on the pivot columns.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        reduce_against(&self.rows, &self.pivots, &mut w);
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut w = v.to_vec();
        reduce_against(&self.rows, &self.pivots, &mut w);
        vector::is_zero(&w)
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` lies outside.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn from_coords(&self, c: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(c.len(), self.dim(), "coordinate length");
        let mut v = vector::zeros(self.field, self.ambient);
        for (x, row) in c.iter().zip(&self.rows) {
            vector::axpy(&mut v, x, row);
        }
        v
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let mut e = big.echelon();
        for r in &small.rows {
            e.insert(r.clone());
        }
        Ok(e.into_subspace())
    }

    /// Adds vectors to the span.
    pub fn extend<I>(&self, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut e = self.echelon();
        for v in vectors {
            e.insert(v);
        }
        e.into_subspace()
    }

    /// `{w : ⟨w, s⟩ = 0 for all s}` under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        self.echelon().kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.is_subset_unchecked(other) {
            return Ok(self.clone());
        }
        if other.is_subset_unchecked(self) {
            return Ok(other.clone());
        }
        let mut e = Echelon::new(self.field, self.ambient);
        for r in self.annihilator().rows.into_iter().chain(other.annihilator().rows) {
            e.insert(r);
        }
        Ok(e.kernel())
    }

    fn is_subset_unchecked(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn is_subset(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(self.is_subset_unchecked(other))
    }

    /// First basis vector of `self` lying outside `other`.
    pub fn witness_outside(&self, other: &Subspace) -> Option<Vec<Scalar>> {
        self.rows.iter().find(|r| !other.contains(r)).cloned()
    }

    /// Coset representatives of `self / sub`; each representative vanishes on the
    /// pivot columns of `sub`.
    pub fn quotient_basis(&self, sub: &Subspace) -> Result<Vec<Vec<Scalar>>> {
        self.check(sub)?;
        if !sub.is_subset_unchecked(self) {
            return Err(Error::NotASubspace);
        }
        let mut e = Echelon::new(self.field, self.ambient);
        for r in &self.rows {
            e.insert(sub.reduce(r));
        }
        Ok(e.into_rows())
    }

    /// `{v : op·v ∈ self}` for an operator `op` into this ambient space.
    pub fn preimage(&self, op: &Matrix) -> Subspace {
        assert_eq!(op.rows(), self.ambient, "preimage operator shape");
        if self.is_full() {
            return Subspace::full(self.field, op.cols());
        }
        let ann = self.annihilator();
        let mut e = Echelon::new(self.field, op.cols());
        for w in ann.basis() {
            e.insert(vector::row_times(w, op));
        }
        e.kernel()
    }

    /// Preimage under several operators simultaneously.
    pub fn preimage_all<'a, I>(&self, ops: I, source_dim: usize) -> Subspace
    where
        I: IntoIterator<Item = &'a Matrix>,
    {
        let ann = self.annihilator();
        let mut e = Echelon::new(self.field, source_dim);
        for op in ops {
            assert_eq!((op.rows(), op.cols()), (self.ambient, source_dim));
            for w in ann.basis() {
                if e.rank() == source_dim {
                    break;
                }
                e.insert(vector::row_times(w, op));
            }
        }
        e.kernel()
    }

    /// `op(self)`.
    pub fn image(&self, op: &Matrix) -> Subspace {
        assert_eq!(op.cols(), self.ambient, "image operator shape");
        Subspace::span(self.field, op.rows(), self.rows.iter().map(|r| op.mul_vec(r)))
    }

    /// Smallest subspace containing `self` and stable under every operator.
    pub fn closure(&self, ops: &[&Matrix]) -> Subspace {
        let mut e = self.echelon();
        let mut queue: Vec<Vec<Scalar>> = self.rows.clone();
        while let Some(v) = queue.pop() {
            for op in ops {
                let w = op.mul_vec(&v);
                if vector::is_zero(&w) {
                    continue;
                }
                if e.insert(w.clone()) {
                    queue.push(w);
                }
            }
            if e.rank() == self.ambient {
                break;
            }
        }
        e.into_subspace()
    }

    pub fn is_invariant(&self, op: &Matrix) -> bool {
        self.rows.iter().all(|r| self.contains(&op.mul_vec(r)))
    }
}

impl Subspace {
    /// Matrix of `op` restricted to this (invariant) subspace, in echelon-basis coordinates.
    pub fn restrict(&self, op: &Matrix) -> Result<Matrix> {
        let mut cols = Vec::with_capacity(self.dim());
        for r in &self.rows {
            let w = op.mul_vec(r);
            cols.push(
                self.coords(&w)
                    .ok_or_else(|| Error::Invariant("subspace is not stable under the operator".into()))?,
            );
        }
        Ok(Matrix::from_columns(self.field, self.dim(), &cols))
    }
}

/// A quotient `space / sub` with chosen coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    sub: Subspace,
    reps: Vec<Vec<Scalar>>,
    rep_pivots: Vec<usize>,
}

impl Quotient {
    pub fn new(space: &Subspace, sub: &Subspace) -> Result<Quotient> {
        let reps = space.quotient_basis(sub)?;
        let rep_pivots = reps
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero representative"))
            .collect();
        Ok(Quotient {
            sub: sub.clone(),
            reps,
            rep_pivots,
        })
    }

    /// Quotient of the whole ambient space.
    pub fn of_ambient(sub: &Subspace) -> Quotient {
        Quotient::new(&Subspace::full(sub.field, sub.ambient), sub).expect("sub lies in ambient")
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn representatives(&self) -> &[Vec<Scalar>] {
        &self.reps
    }

    /// Coordinates of the class of `v` (which must lie in the numerator space).
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let w = self.sub.reduce(v);
        self.rep_pivots.iter().map(|&p| w[p].clone()).collect()
    }

    /// Canonical representative with the given coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim(), "quotient coordinate length");
        let mut v = vector::zeros(self.sub.field, self.sub.ambient);
        for (c, r) in coords.iter().zip(&self.reps) {
            vector::axpy(&mut v, c, r);
        }
        v
    }

    /// Matrix of the projection from the ambient space.
    pub fn projection_matrix(&self) -> Matrix {
        let n = self.sub.ambient;
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|i| self.project(&vector::unit(self.sub.field, n, i)))
            .collect();
        Matrix::from_columns(self.sub.field, self.dim(), &cols)
    }

    /// The operator induced on the quotient; `sub` must be `op`-stable.
    pub fn induced(&self, op: &Matrix) -> Result<Matrix> {
        if !self.sub.is_invariant(op) {
            return Err(Error::Invariant("quotient by a non-stable subspace".into()));
        }
        let cols: Vec<Vec<Scalar>> = self.reps.iter().map(|r| self.project(&op.mul_vec(r))).collect();
        Ok(Matrix::from_columns(self.sub.field, self.dim(), &cols))
    }
}

/// Solution set of an inhomogeneous linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Inconsistent,
    Solutions {
        particular: Vec<Scalar>,
        directions: Subspace,
    },
}

impl AffineSolution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, AffineSolution::Solutions { .. })
    }

    /// The unique solution, if there is exactly one.
    pub fn unique(&self) -> Option<&[Scalar]> {
        match self {
            AffineSolution::Solutions {
                particular,
                directions,
            } if directions.is_zero() => Some(particular),
            _ => None,
        }
    }
}

/// Accumulates equations `row · x = rhs` over a fixed number of unknowns.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: Field,
    unknowns: usize,
    // Augmented rows [row | rhs].
    aug: Echelon,
    inconsistent: bool,
}

impl LinearSystem {
    pub fn new(field: Field, unknowns: usize) -> LinearSystem {
        LinearSystem {
            field,
            unknowns,
            aug: Echelon::new(field, unknowns + 1),
            inconsistent: false,
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn add_equation(&mut self, row: &[Scalar], rhs: Scalar) {
        assert_eq!(row.len(), self.unknowns, "equation length");
        if self.inconsistent {
            return;
        }
        let mut v = row.to_vec();
        v.push(rhs);
        if self.aug.insert(v) && self.aug.pivots().last() == Some(&self.unknowns) {
            self.inconsistent = true;
        }
    }

    /// Adds `m · x = target` row by row.
    pub fn add_block(&mut self, m: &Matrix, target: &[Scalar]) {
        assert_eq!(m.cols(), self.unknowns, "constraint block width");
        assert_eq!(m.rows(), target.len(), "constraint block target");
        for (r, t) in target.iter().enumerate() {
            self.add_equation(m.row(r), t.clone());
        }
    }

    pub fn solve(&self) -> AffineSolution {
        if self.inconsistent {
            return AffineSolution::Inconsistent;
        }
        let n = self.unknowns;
        let mut particular = vector::zeros(self.field, n);
        let mut homogeneous = Echelon::new(self.field, n);
        for (row, &pc) in self.aug.rows.iter().zip(&self.aug.pivots) {
            particular[pc] = row[n].clone();
            homogeneous.insert(row[..n].to_vec());
        }
        AffineSolution::Solutions {
            particular,
            directions: homogeneous.kernel(),
        }
    }
}

/// Solves the stacked system `m_i · x = t_i`.
pub fn solve_affine(field: Field, unknowns: usize, constraints: &[(Matrix, Vec<Scalar>)]) -> Result<AffineSolution> {
    let mut sys = LinearSystem::new(field, unknowns);
    for (m, t) in constraints {
        if m.cols() != unknowns || m.rows() != t.len() {
            return Err(Error::DimensionMismatch(format!(
                "constraint {}x{} with target of length {} for {unknowns} unknowns",
                m.rows(),
                m.cols(),
                t.len()
            )));
        }
        sys.add_block(m, t);
    }
    Ok(sys.solve())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn sum_and_intersection_small() {
        let a = Subspace::span(q(), 2, [v(&[1, 0])]);
        let b = Subspace::span(q(), 2, [v(&[0, 1])]);
        assert!(a.sum(&b).unwrap().is_full());
        let c = Subspace::span(q(), 2, [v(&[1, 1])]);
        assert!(c.intersect(&a).unwrap().is_zero());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::zero(q(), 2);
        let b = Subspace::zero(q(), 3);
        assert!(matches!(a.sum(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_requires_containment() {
        let a = Subspace::span(q(), 3, [v(&[1, 0, 0])]);
        let b = Subspace::span(q(), 3, [v(&[0, 1, 0])]);
        assert!(matches!(a.quotient_basis(&b), Err(Error::NotASubspace)));
        let full = Subspace::full(q(), 3);
        let reps = full.quotient_basis(&a).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(reps.iter().all(|r| r[0].is_zero()));
    }

    #[test]
    fn affine_solutions() {
        let x_eq_x = Matrix::zeros(q(), 1, 1);
        let sol = solve_affine(q(), 1, &[(x_eq_x, v(&[0]))]).unwrap();
        match sol {
            AffineSolution::Solutions { directions, .. } => assert!(directions.is_full()),
            _ => panic!("expected solutions"),
        }
        let one = Matrix::identity(q(), 1);
        let sol = solve_affine(q(), 1, &[(one.clone(), v(&[1])), (one, v(&[2]))]).unwrap();
        assert_eq!(sol, AffineSolution::Inconsistent);
    }

    #[test]
    fn affine_particular_solves() {
        let m = Matrix::from_i64(q(), &[&[1, 2, 0], &[0, 1, 1]]);
        let t = v(&[3, 5]);
        let sol = solve_affine(q(), 3, &[(m.clone(), t.clone())]).unwrap();
        let AffineSolution::Solutions {
            particular,
            directions,
        } = sol
        else {
            panic!()
        };
        assert_eq!(m.mul_vec(&particular), t);
        assert_eq!(directions.dim(), 1);
    }

    #[test]
    fn quotient_coordinates() {
        let sub = Subspace::span(q(), 3, [v(&[1, 1, 0])]);
        let quo = Quotient::of_ambient(&sub);
        assert_eq!(quo.dim(), 2);
        let a = v(&[2, 5, 7]);
        let back = quo.lift(&quo.project(&a));
        assert!(sub.contains(&vector::sub(&a, &back)));
        let swap = Matrix::from_i64(q(), &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let induced = quo.induced(&swap).unwrap();
        assert_eq!(induced.rows(), 2);
        assert_eq!(sub.restrict(&swap).unwrap(), Matrix::identity(q(), 1));
    }

    #[test]
    fn closure_of_shift() {
        let shift = Matrix::from_i64(q(), &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let s = Subspace::span(q(), 3, [v(&[1, 0, 0])]).closure(&[&shift]);
        assert!(s.is_full());
        let t = Subspace::span(q(), 3, [v(&[0, 1, 0])]).closure(&[&shift]);
        assert_eq!(t.dim(), 2);
        assert!(t.is_invariant(&shift));
    }

    #[test]
    fn preimage_of_subspace() {
        let m = Matrix::from_i64(q(), &[&[1, 1], &[0, 0]]);
        let s = Subspace::zero(q(), 2);
        assert_eq!(s.preimage(&m), m.kernel());
        let line = Subspace::span(q(), 2, [v(&[1, 0])]);
        assert!(line.preimage(&m).is_full());
    }
}

//! The universal differential calculus: `Ω¹(A) ⊂ A⊗A` with `da = 1⊗a − a⊗1`,
//! `Ω² = Ω¹ ⊗_A Ω¹`, universality of `d` among derivations, and the extension
//! of algebra maps to differential graded maps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::ce::CeCalculus;
use crate::derivations::derivations;
use crate::error::{Error, Result};
use crate::hom::HomSpace;
use crate::linalg::{vector, LinearSystem, Matrix, Quotient, Subspace};
use crate::module::Bimodule;
use crate::scalar::Scalar;

/// Highest universal degree that is materialized.
pub const UNIVERSAL_CAP: usize = 2;

/// A differential graded algebra truncated at [`DifferentialCalculus::top_degree`].
///
/// Degree 0 is the algebra itself in its own coordinates.
pub trait DifferentialCalculus {
    fn algebra(&self) -> &Arc<FiniteAlgebra>;
    fn top_degree(&self) -> usize;
    fn space_dim(&self, k: usize) -> usize;
    /// `d: degree k → degree k + 1`, for `k < top_degree`.
    fn differential(&self, k: usize) -> Result<Matrix>;
    /// Product of a degree-`r` and a degree-`s` element, `r + s ≤ top_degree`.
    fn multiply(&self, omega: &[Scalar], r: usize, eta: &[Scalar], s: usize) -> Result<Vec<Scalar>>;
}

/// `Ω⁰ = A`, `Ω¹`, `Ω²` of the universal calculus.
#[derive(Clone, Debug)]
pub struct UniversalCalculus {
    algebra: Arc<FiniteAlgebra>,
    /// `A ⊗ A` with outer actions, basis `e_a ⊗ e_b` at `a·n + b`.
    tensor: Bimodule,
    omega1: Subspace,
    omega1_module: Bimodule,
    /// `Ω¹ ⊗ Ω¹` modulo the balancing relations.
    omega2: Quotient,
    omega2_module: Bimodule,
    /// `d: A → A⊗A`.
    d_ambient: Matrix,
    d0: Matrix,
    d1: Matrix,
}

fn check_cap(k: usize) -> Result<()> {
    if k > UNIVERSAL_CAP {
        return Err(Error::CapExceeded { degree: k, cap: UNIVERSAL_CAP });
    }
    Ok(())
}

/// The multiplication map `A ⊗ A → A`.
pub fn multiplication_matrix(a: &FiniteAlgebra) -> Matrix {
    let n = a.dim();
    let cols: Vec<Vec<Scalar>> = (0..n * n).map(|c| a.product_of_basis(c / n, c % n).to_vec()).collect();
    Matrix::from_columns(a.field(), n, &cols)
}

impl UniversalCalculus {
    pub fn new(algebra: &Arc<FiniteAlgebra>) -> Result<UniversalCalculus> {
        let a = algebra;
        let f = a.field();
        let n = a.dim();
        let id = Matrix::identity(f, n);
        let left: Vec<Matrix> = a.left_basis_mults().iter().map(|l| l.kron(&id)).collect();
        let right: Vec<Matrix> = a.right_basis_mults().iter().map(|r| id.kron(r)).collect();
        let tensor = Bimodule::from_parts("A⊗A", a.clone(), n * n, Some(left), Some(right), None)?;

        let one = a.unit().to_vec();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let e = a.basis_element(i);
                vector::sub(&tensor_pure(&one, &e), &tensor_pure(&e, &one))
            })
            .collect();
        let d_ambient = Matrix::from_columns(f, n * n, &cols);
        let omega1 = tensor.generated_submodule(cols.iter().cloned());
        let omega1_module = tensor.submodule(&omega1)?.with_name("Ω¹");
        let d0 = Matrix::from_columns(
            f,
            omega1.dim(),
            &cols
                .iter()
                .map(|c| omega1.coords(c).ok_or_else(|| Error::Invariant("da outside Ω¹".into())))
                .collect::<Result<Vec<_>>>()?,
        );

        // Ω¹ ⊗_A Ω¹ as a quotient of Ω¹ ⊗ Ω¹ by ωb ⊗ η − ω ⊗ bη.
        let m = omega1.dim();
        let idm = Matrix::identity(f, m);
        let (l1, r1) = (omega1_module.left_mats()?, omega1_module.right_mats()?);
        let mut relations = Vec::new();
        for b in 0..n {
            let rel = &r1[b].kron(&idm) - &idm.kron(&l1[b]);
            relations.extend((0..m * m).map(|c| rel.column(c)));
        }
        let relations = Subspace::span(f, m * m, relations);
        let big = Bimodule::from_parts(
            "Ω¹⊗Ω¹",
            a.clone(),
            m * m,
            Some(l1.iter().map(|l| l.kron(&idm)).collect()),
            Some(r1.iter().map(|r| idm.kron(r)).collect()),
            None,
        )?;
        let (omega2_module, omega2) = big.quotient(&relations)?;
        let omega2_module = omega2_module.with_name("Ω²");

        // ω = Σ x_ab e_a de_b for ω ∈ Ω¹, so dω = Σ x_ab de_a de_b.
        let d_cols: Vec<Vec<Scalar>> = (0..n * n)
            .map(|c| omega2.project(&kron_vec(&d0.column(c / n), &d0.column(c % n))))
            .collect();
        let d_on_tensor = Matrix::from_columns(f, omega2.dim(), &d_cols);
        let d1_cols: Vec<Vec<Scalar>> = omega1.basis().iter().map(|v| d_on_tensor.mul_vec(v)).collect();
        let d1 = Matrix::from_columns(f, omega2.dim(), &d1_cols);
        Ok(UniversalCalculus {
            algebra: a.clone(),
            tensor,
            omega1,
            omega1_module,
            omega2,
            omega2_module,
            d_ambient,
            d0,
            d1,
        })
    }

    /// `Ω¹` as a subspace of `A ⊗ A`.
    pub fn omega1(&self) -> &Subspace {
        &self.omega1
    }

    pub fn omega1_module(&self) -> &Bimodule {
        &self.omega1_module
    }

    pub fn omega2_module(&self) -> &Bimodule {
        &self.omega2_module
    }

    pub fn tensor_module(&self) -> &Bimodule {
        &self.tensor
    }

    /// `ker(m: A⊗A → A)`.
    pub fn multiplication_kernel(&self) -> Subspace {
        multiplication_matrix(&self.algebra).kernel()
    }

    /// `da` as an element of `A ⊗ A`.
    pub fn d_tensor(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.d_ambient.mul_vec(a)
    }

    /// `da` in coordinates of `Ω¹`.
    pub fn d(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.d0.mul_vec(a)
    }

    /// Ambient `A ⊗ A` vector of an `Ω¹` element.
    pub fn to_tensor(&self, omega: &[Scalar]) -> Vec<Scalar> {
        self.omega1.from_coords(omega)
    }

    pub fn left(&self, k: usize, a: &[Scalar], omega: &[Scalar]) -> Result<Vec<Scalar>> {
        check_cap(k)?;
        Ok(match k {
            0 => self.algebra.mul(a, omega),
            1 => self.omega1_module.act_left(a, omega)?,
            _ => self.omega2_module.act_left(a, omega)?,
        })
    }

    pub fn right(&self, k: usize, omega: &[Scalar], a: &[Scalar]) -> Result<Vec<Scalar>> {
        check_cap(k)?;
        Ok(match k {
            0 => self.algebra.mul(omega, a),
            1 => self.omega1_module.act_right(omega, a)?,
            _ => self.omega2_module.act_right(omega, a)?,
        })
    }

    /// `ω·η ∈ Ω²` for `ω, η ∈ Ω¹`.
    pub fn product11(&self, omega: &[Scalar], eta: &[Scalar]) -> Vec<Scalar> {
        self.omega2.project(&kron_vec(omega, eta))
    }

    /// Checks `d(ab) = (da)b + a(db)` on all basis pairs.
    pub fn leibniz_holds(&self) -> bool {
        let a = &self.algebra;
        let n = a.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (x, y) = (a.basis_element(i), a.basis_element(j));
                let lhs = self.d(&a.mul(&x, &y));
                let r1 = self.omega1_module.act_right(&self.d(&x), &y).expect("right action");
                let r2 = self.omega1_module.act_left(&x, &self.d(&y)).expect("left action");
                lhs == vector::add(&r1, &r2)
            })
        })
    }

    /// `(da)b = d(ab) − a db` on all basis pairs.
    pub fn right_rule_holds(&self) -> bool {
        let a = &self.algebra;
        let n = a.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (x, y) = (a.basis_element(i), a.basis_element(j));
                let lhs = self.omega1_module.act_right(&self.d(&x), &y).expect("right action");
                let adb = self.omega1_module.act_left(&x, &self.d(&y)).expect("left action");
                lhs == vector::sub(&self.d(&a.mul(&x, &y)), &adb)
            })
        })
    }

    /// `(a₀da₁)(b₀db₁) = a₀d(a₁b₀)db₁ − a₀a₁db₀db₁` on all basis quadruples.
    pub fn juxtaposition_holds(&self) -> bool {
        let a = &self.algebra;
        let n = a.dim();
        let e: Vec<Vec<Scalar>> = (0..n).map(|i| a.basis_element(i)).collect();
        let form = |x: &[Scalar], y: &[Scalar]| self.omega1_module.act_left(x, &self.d(y)).expect("left action");
        for a0 in &e {
            for a1 in &e {
                for b0 in &e {
                    for b1 in &e {
                        let lhs = self.product11(&form(a0, a1), &form(b0, b1));
                        let t1 = self.product11(&form(a0, &a.mul(a1, b0)), &self.d(b1));
                        let t2 = self.product11(&form(&a.mul(a0, a1), b0), &self.d(b1));
                        if lhs != vector::sub(&t1, &t2) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `d(aω) = da·ω + a dω` and `d(ωa) = dω·a − ω·da` for `ω ∈ Ω¹` basis
    /// elements and `a` basis elements.
    pub fn graded_leibniz_holds(&self) -> bool {
        let a = &self.algebra;
        let m = self.omega1.dim();
        let f = a.field();
        (0..a.dim()).all(|i| {
            let x = a.basis_element(i);
            (0..m).all(|j| {
                let w = vector::unit(f, m, j);
                let dw = self.d1.mul_vec(&w);
                let xw = self.omega1_module.act_left(&x, &w).expect("left action");
                let wx = self.omega1_module.act_right(&w, &x).expect("right action");
                let left_ok = self.d1.mul_vec(&xw)
                    == vector::add(
                        &self.product11(&self.d(&x), &w),
                        &self.omega2_module.act_left(&x, &dw).expect("left action"),
                    );
                let right_ok = self.d1.mul_vec(&wx)
                    == vector::sub(
                        &self.omega2_module.act_right(&dw, &x).expect("right action"),
                        &self.product11(&w, &self.d(&x)),
                    );
                left_ok && right_ok
            })
        })
    }

    /// Searches central basis elements `a` with `a·da ≠ (da)·a`.
    pub fn center_relation_witness(&self) -> CenterRelationWitness {
        let a = &self.algebra;
        let center = a.center();
        let mut witness = None;
        for z in center.basis() {
            let dz = self.d(z);
            let lhs = self.omega1_module.act_left(z, &dz).expect("left action");
            let rhs = self.omega1_module.act_right(&dz, z).expect("right action");
            if lhs != rhs {
                witness = Some(CenterWitness {
                    element: a.format_element(z),
                    left: vector::to_strings(&self.to_tensor(&lhs)),
                    right: vector::to_strings(&self.to_tensor(&rhs)),
                    difference: vector::to_strings(&vector::sub(&self.to_tensor(&lhs), &self.to_tensor(&rhs))),
                });
                break;
            }
        }
        CenterRelationWitness {
            algebra: a.name().to_string(),
            searched: center.dim(),
            witness,
        }
    }

    /// The bimodule map `f: Ω¹ → P` with `f(da) = Δ(a)`.
    pub fn factorize(&self, p: &Bimodule, delta: &Matrix) -> Result<Factorization> {
        let space = derivations(p, false)?;
        if !space.contains(delta)? {
            return Err(Error::NotADerivation("cannot factor a non-derivation through d".into()));
        }
        let hom = HomSpace::new(&self.omega1_module, p)?;
        let f = self.algebra.field();
        let m = self.omega1.dim();
        let mut sys = LinearSystem::new(f, hom.dim());
        let zeros = vector::zeros(f, hom.dim());
        for op in hom.delta_ops()?.iter().chain(hom.bar_delta_ops()?.iter()) {
            sys.add_block(op, &zeros);
        }
        for i in 0..self.algebra.dim() {
            let da = self.d0.column(i);
            for r in 0..p.dim() {
                let mut row = vector::zeros(f, hom.dim());
                for (j, x) in da.iter().enumerate() {
                    row[r * m + j] = x.clone();
                }
                sys.add_equation(&row, delta.get(r, i).clone());
            }
        }
        let sol = sys.solve();
        let crate::linalg::AffineSolution::Solutions { particular, directions } = sol else {
            return Err(Error::Inconsistent("no bimodule map extends the derivation".into()));
        };
        let map = hom.unflatten(&particular);
        let residual_zero = &map * &self.d0 == *delta;
        Ok(Factorization {
            map,
            residual_zero,
            solution_space_dim: directions.dim(),
        })
    }
}

fn tensor_pure(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    kron_vec(x, y)
}

fn kron_vec(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

impl DifferentialCalculus for UniversalCalculus {
    fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    fn top_degree(&self) -> usize {
        UNIVERSAL_CAP
    }

    fn space_dim(&self, k: usize) -> usize {
        match k {
            0 => self.algebra.dim(),
            1 => self.omega1.dim(),
            _ => self.omega2.dim(),
        }
    }

    fn differential(&self, k: usize) -> Result<Matrix> {
        match k {
            0 => Ok(self.d0.clone()),
            1 => Ok(self.d1.clone()),
            _ => Err(Error::CapExceeded { degree: k + 1, cap: UNIVERSAL_CAP }),
        }
    }

    fn multiply(&self, omega: &[Scalar], r: usize, eta: &[Scalar], s: usize) -> Result<Vec<Scalar>> {
        check_cap(r + s)?;
        match (r, s) {
            (0, _) => self.left(s, omega, eta),
            (_, 0) => self.right(r, omega, eta),
            _ => Ok(self.product11(omega, eta)),
        }
    }
}

/// `A` in degree 0 and nothing above.
#[derive(Clone, Debug)]
pub struct ZeroCalculus {
    algebra: Arc<FiniteAlgebra>,
    top: usize,
}

impl ZeroCalculus {
    pub fn new(algebra: &Arc<FiniteAlgebra>, top: usize) -> ZeroCalculus {
        ZeroCalculus {
            algebra: algebra.clone(),
            top,
        }
    }
}

impl DifferentialCalculus for ZeroCalculus {
    fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    fn top_degree(&self) -> usize {
        self.top
    }

    fn space_dim(&self, k: usize) -> usize {
        if k == 0 {
            self.algebra.dim()
        } else {
            0
        }
    }

    fn differential(&self, k: usize) -> Result<Matrix> {
        Ok(Matrix::zeros(self.algebra.field(), self.space_dim(k + 1), self.space_dim(k)))
    }

    fn multiply(&self, omega: &[Scalar], r: usize, eta: &[Scalar], s: usize) -> Result<Vec<Scalar>> {
        if r + s == 0 {
            Ok(self.algebra.mul(omega, eta))
        } else {
            Ok(Vec::new())
        }
    }
}

/// Chevalley–Eilenberg cochains with the wedge product; the minimal calculus
/// sits inside.
impl DifferentialCalculus for CeCalculus {
    fn algebra(&self) -> &Arc<FiniteAlgebra> {
        CeCalculus::algebra(self)
    }

    fn top_degree(&self) -> usize {
        self.cap()
    }

    fn space_dim(&self, k: usize) -> usize {
        self.cochain_dim(k)
    }

    fn differential(&self, k: usize) -> Result<Matrix> {
        self.coboundary(k).cloned()
    }

    fn multiply(&self, omega: &[Scalar], r: usize, eta: &[Scalar], s: usize) -> Result<Vec<Scalar>> {
        self.wedge(omega, r, eta, s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterWitness {
    pub element: String,
    /// `a·da` in `A ⊗ A`.
    pub left: Vec<String>,
    /// `(da)·a` in `A ⊗ A`.
    pub right: Vec<String>,
    pub difference: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterRelationWitness {
    pub algebra: String,
    /// Number of central basis elements examined.
    pub searched: usize,
    pub witness: Option<CenterWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `dim P × dim Ω¹`, in echelon coordinates of `Ω¹`.
    pub map: Matrix,
    pub residual_zero: bool,
    /// Dimension of the solution set of the defining system; 0 means unique.
    pub solution_space_dim: usize,
}

impl Factorization {
    pub fn holds(&self) -> bool {
        self.residual_zero && self.solution_space_dim == 0
    }
}

/// `ρ^k: Ω^k(A) → Ω'^k` for `k ≤` the smaller top degree.
#[derive(Clone, Debug)]
pub struct HomExtension {
    pub maps: Vec<Matrix>,
    /// `ρ^{k+1}∘d = δ'∘ρ^k`, per degree.
    pub intertwines: Vec<bool>,
    /// `ρ²(ωη) = ρ¹(ω)ρ¹(η)` and `ρ` respects both actions on `Ω¹`.
    pub multiplicative: bool,
}

impl HomExtension {
    pub fn holds(&self) -> bool {
        self.intertwines.iter().all(|&b| b) && self.multiplicative
    }
}

/// Extends a unital algebra map `ρ: A → A'` (columns are images of basis
/// elements) to `ρ*(a₀da₁⋯da_k) = ρ(a₀)δ'ρ(a₁)⋯δ'ρ(a_k)`.
pub fn extend_hom<C: DifferentialCalculus>(
    source: &UniversalCalculus,
    rho: &Matrix,
    target: &C,
) -> Result<HomExtension> {
    let a = &source.algebra;
    let t = target.algebra();
    a.is_homomorphism(t, rho)?;
    let f = a.field();
    let n = a.dim();
    let top = target.top_degree().min(UNIVERSAL_CAP);
    let mut maps = vec![rho.clone()];
    if top >= 1 {
        let dt = target.differential(0)?;
        // e_a ⊗ e_b ↦ ρ(e_a) δ'ρ(e_b); restricted to Ω¹ this is ρ(a₀)δ'ρ(a₁) on a₀da₁.
        let ambient: Vec<Vec<Scalar>> = (0..n * n)
            .map(|c| target.multiply(&rho.column(c / n), 0, &dt.mul_vec(&rho.column(c % n)), 1))
            .collect::<Result<_>>()?;
        let amb = Matrix::from_columns(f, target.space_dim(1), &ambient);
        let cols: Vec<Vec<Scalar>> = source.omega1.basis().iter().map(|v| amb.mul_vec(v)).collect();
        maps.push(Matrix::from_columns(f, target.space_dim(1), &cols));
    }
    if top >= 2 {
        let r1 = &maps[1];
        let m = source.omega1.dim();
        let cols: Vec<Vec<Scalar>> = source
            .omega2
            .representatives()
            .iter()
            .map(|rep| {
                let mut acc = vector::zeros(f, target.space_dim(2));
                for (idx, x) in rep.iter().enumerate() {
                    if !x.is_zero() {
                        let w = r1.column(idx / m);
                        let e = r1.column(idx % m);
                        vector::axpy(&mut acc, x, &target.multiply(&w, 1, &e, 1)?);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        maps.push(Matrix::from_columns(f, target.space_dim(2), &cols));
    }
    let mut intertwines = Vec::new();
    for k in 0..top {
        let lhs = &maps[k + 1] * &source.differential(k)?;
        let rhs = &target.differential(k)? * &maps[k];
        intertwines.push(lhs == rhs);
    }
    let mut multiplicative = true;
    if top >= 1 {
        let m = source.omega1.dim();
        for i in 0..n {
            let x = a.basis_element(i);
            let rx = rho.mul_vec(&x);
            for j in 0..m {
                let w = vector::unit(f, m, j);
                let rw = maps[1].mul_vec(&w);
                multiplicative &= maps[1].mul_vec(&source.omega1_module.act_left(&x, &w)?)
                    == target.multiply(&rx, 0, &rw, 1)?;
                multiplicative &= maps[1].mul_vec(&source.omega1_module.act_right(&w, &x)?)
                    == target.multiply(&rw, 1, &rx, 0)?;
            }
        }
        if top >= 2 {
            for i in 0..m {
                for j in 0..m {
                    let (w, e) = (vector::unit(f, m, i), vector::unit(f, m, j));
                    let lhs = maps[2].mul_vec(&source.product11(&w, &e));
                    let rhs = target.multiply(&maps[1].mul_vec(&w), 1, &maps[1].mul_vec(&e), 1)?;
                    multiplicative &= lhs == rhs;
                }
            }
        }
    }
    Ok(HomExtension {
        maps,
        intertwines,
        multiplicative,
    })
}

/// Summary of the universal calculus of one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalReport {
    pub algebra: String,
    pub dims: Vec<usize>,
    pub omega1_is_multiplication_kernel: bool,
    pub leibniz: bool,
    pub right_rule: bool,
    pub juxtaposition: bool,
    pub graded_leibniz: bool,
    pub d_squared_zero: bool,
    pub center_relation: CenterRelationWitness,
}

impl UniversalReport {
    pub fn holds(&self) -> bool {
        self.omega1_is_multiplication_kernel
            && self.leibniz
            && self.right_rule
            && self.juxtaposition
            && self.graded_leibniz
            && self.d_squared_zero
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl UniversalCalculus {
    pub fn report(&self) -> UniversalReport {
        UniversalReport {
            algebra: self.algebra.name().to_string(),
            dims: (0..=UNIVERSAL_CAP).map(|k| self.space_dim(k)).collect(),
            omega1_is_multiplication_kernel: self.omega1 == self.multiplication_kernel(),
            leibniz: self.leibniz_holds(),
            right_rule: self.right_rule_holds(),
            juxtaposition: self.juxtaposition_holds(),
            graded_leibniz: self.graded_leibniz_holds(),
            d_squared_zero: (&self.d1 * &self.d0).is_zero(),
            center_relation: self.center_relation_witness(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, STANDARD};
    use crate::Field;

    fn alg(name: &str) -> Arc<FiniteAlgebra> {
        Arc::new(catalog(name, Field::Rational).unwrap())
    }

    /// Kernel of the explicit multiplication matrix, built entry by entry.
    fn kernel_oracle(a: &FiniteAlgebra) -> Subspace {
        let n = a.dim();
        let rows: Vec<Vec<Scalar>> = (0..n)
            .map(|k| (0..n * n).map(|c| a.structure_constant(c / n, c % n, k).clone()).collect())
            .collect();
        Matrix::from_rows(a.field(), n * n, rows).unwrap().kernel()
    }

    #[test]
    fn omega1_is_the_multiplication_kernel() {
        for name in STANDARD {
            let a = alg(name);
            let u = UniversalCalculus::new(&a).unwrap();
            assert_eq!(u.omega1(), &kernel_oracle(&a), "{name}");
            assert_eq!(u.omega1().dim(), a.dim() * a.dim() - a.dim(), "{name}");
        }
        assert_eq!(UniversalCalculus::new(&alg("matrix(2)")).unwrap().omega1().dim(), 12);
        assert_eq!(UniversalCalculus::new(&alg("trunc_poly(2)")).unwrap().omega1().dim(), 2);
    }

    #[test]
    fn omega2_dimension() {
        // Ω² ≅ A ⊗ Ā ⊗ Ā with Ā = A/K·1
        for name in ["trunc_poly(2)", "trunc_poly(3)", "xy_sq", "matrix(2)", "upper_triangular(2)", "field"] {
            let a = alg(name);
            let n = a.dim();
            let u = UniversalCalculus::new(&a).unwrap();
            assert_eq!(u.space_dim(2), n * (n - 1) * (n - 1), "{name}");
        }
    }

    #[test]
    fn dga_identities() {
        for name in ["trunc_poly(2)", "trunc_poly(3)", "matrix(2)", "quaternions", "grassmann(1)"] {
            let r = UniversalCalculus::new(&alg(name)).unwrap().report();
            assert!(r.holds(), "{name}: {r:?}");
        }
    }

    #[test]
    fn d_of_one_vanishes() {
        let a = alg("matrix(2)");
        let u = UniversalCalculus::new(&a).unwrap();
        assert!(vector::is_zero(&u.d(a.unit())));
    }

    #[test]
    fn center_relation_fails_for_dual_numbers() {
        let a = alg("trunc_poly(2)");
        let u = UniversalCalculus::new(&a).unwrap();
        let w = u.center_relation_witness().witness.unwrap();
        // basis 1⊗1, 1⊗x, x⊗1, x⊗x
        let strs = |xs: &[i64]| vector::to_strings(&vector::from_i64(a.field(), xs));
        assert_eq!(w.element, "x");
        assert_eq!(w.left, strs(&[0, 0, 0, 1]));
        assert_eq!(w.right, strs(&[0, 0, 0, -1]));
        assert_eq!(w.difference, strs(&[0, 0, 0, 2]));
        assert!(UniversalCalculus::new(&alg("field")).unwrap().center_relation_witness().witness.is_none());
    }

    #[test]
    fn factorization() {
        for name in ["trunc_poly(3)", "matrix(2)", "xy_sq"] {
            let a = alg(name);
            let u = UniversalCalculus::new(&a).unwrap();
            let targets = [Bimodule::regular(&a), u.omega1_module().clone()];
            for p in &targets {
                for delta in derivations(p, false).unwrap().basis_maps() {
                    let fac = u.factorize(p, &delta).unwrap();
                    assert!(fac.holds(), "{name}");
                }
            }
            // d itself factors through the identity
            let fac = u.factorize(u.omega1_module(), &u.d0).unwrap();
            assert_eq!(fac.map, Matrix::identity(a.field(), u.omega1().dim()));
            // zero factors through zero
            let zero = Matrix::zeros(a.field(), a.dim(), a.dim());
            assert!(u.factorize(&Bimodule::regular(&a), &zero).unwrap().map.is_zero());
        }
    }

    #[test]
    fn inner_derivation_factors() {
        let a = alg("matrix(2)");
        let u = UniversalCalculus::new(&a).unwrap();
        let q = a.basis_element(1);
        let ad = &a.left_mult(&q) - &a.right_mult(&q);
        let fac = u.factorize(&Bimodule::regular(&a), &ad).unwrap();
        assert!(fac.holds());
        assert!(u.factorize(&Bimodule::regular(&a), &a.left_mult(&q)).is_err());
    }

    #[test]
    fn extension_to_itself_is_identity() {
        let a = alg("trunc_poly(3)");
        let u = UniversalCalculus::new(&a).unwrap();
        let ext = extend_hom(&u, &Matrix::identity(a.field(), 3), &u).unwrap();
        assert!(ext.holds());
        for (k, m) in ext.maps.iter().enumerate() {
            assert_eq!(m, &Matrix::identity(a.field(), u.space_dim(k)));
        }
    }

    #[test]
    fn extension_to_the_zero_calculus() {
        let a = alg("trunc_poly(2)");
        let k = alg("field");
        let u = UniversalCalculus::new(&a).unwrap();
        let rho = Matrix::from_i64(a.field(), &[&[1, 0]]);
        let ext = extend_hom(&u, &rho, &ZeroCalculus::new(&k, 2)).unwrap();
        assert!(ext.holds());
        assert!(ext.maps[1].is_zero() && ext.maps[1].rows() == 0);
        let bad = Matrix::from_i64(a.field(), &[&[1, 1]]);
        assert!(extend_hom(&u, &bad, &ZeroCalculus::new(&k, 2)).is_err());
    }

    #[test]
    fn extension_onto_the_ce_calculus() {
        for name in ["trunc_poly(3)", "matrix(2)"] {
            let a = alg(name);
            let u = UniversalCalculus::new(&a).unwrap();
            let ce = CeCalculus::new(&a, 2).unwrap();
            let ext = extend_hom(&u, &Matrix::identity(a.field(), a.dim()), &ce).unwrap();
            assert!(ext.holds(), "{name}");
            for k in 1..=2 {
                assert_eq!(ext.maps[k].column_space(), ce.minimal(k).unwrap(), "{name} degree {k}");
            }
        }
    }
}

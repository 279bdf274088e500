//! Finite-dimensional algebras over F_p given by structure constants, their
//! finite-dimensional left modules and intertwining morphisms.
//!
//! A left module is a dimension together with one action matrix per algebra
//! basis element; everything else (kernels, images, socles, covers,
//! envelopes) is exact linear algebra on top of that. All values are
//! immutable after construction and cheap to clone.

mod radical;
mod structure;

pub use radical::quotient_algebra;
pub(crate) use structure::MorphismSolver;
pub use structure::{
    composition_factors, decompose_injective, extend_along_mono, injective_envelope, is_injective,
    is_isomorphic, is_isomorphic_with_cap, projective_cover, radical_submodule, socle,
    socle_multiplicities,
};

use crate::fp::{FpMatrix, LinAlgError, Subspace};
use serde::Serialize;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum AlgError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("modules belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("NON_SPLIT: {0}")]
    NonSplit(String),
    #[error("NOT_INJECTIVE: {0}")]
    NotInjective(String),
    #[error("SEARCH_EXHAUSTED: {0}")]
    SearchExhausted(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Derived structure computed on demand and cached per algebra.
#[derive(Default)]
struct StructureCache {
    radical: OnceLock<Subspace>,
    simples: OnceLock<Result<Vec<ModuleData>, AlgError>>,
    /// One lifted primitive idempotent of the algebra per simple index.
    primitive_idempotents: OnceLock<Result<Vec<Vec<u64>>, AlgError>>,
    /// Indecomposable injective E(S_i) with its socle inclusion S_i -> E(S_i).
    injectives: OnceLock<Result<Vec<(ModuleData, FpMatrix)>, AlgError>>,
    opposite: OnceLock<Algebra>,
}

struct AlgebraInner {
    p: u64,
    dim: usize,
    /// c[(i*dim + j)*dim + k]: coefficient of e_k in e_i * e_j.
    constants: Vec<u64>,
    unit: Vec<u64>,
    cache: StructureCache,
}

/// A finite-dimensional associative unital F_p-algebra. Cheap to clone.
#[derive(Clone)]
pub struct Algebra {
    inner: Arc<AlgebraInner>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.dim == other.inner.dim
                && self.inner.constants == other.inner.constants
                && self.inner.unit == other.inner.unit)
    }
}
impl Eq for Algebra {}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra(dim {} over F_{})", self.inner.dim, self.inner.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlgebraViolation {
    Associativity { i: usize, j: usize, k: usize },
    UnitLeft { i: usize },
    UnitRight { i: usize },
}

impl Algebra {
    pub fn new(p: u64, dim: usize, constants: Vec<u64>, unit: Vec<u64>) -> Result<Self, AlgError> {
        if !crate::fp::is_small_prime(p) {
            return Err(AlgError::InvalidAlgebra(format!("modulus {p} is not a small prime")));
        }
        if dim == 0 {
            return Err(AlgError::InvalidAlgebra("unital algebra needs dim >= 1".into()));
        }
        if constants.len() != dim * dim * dim {
            return Err(AlgError::InvalidAlgebra(format!(
                "need {} structure constants, got {}",
                dim * dim * dim,
                constants.len()
            )));
        }
        if unit.len() != dim {
            return Err(AlgError::InvalidAlgebra("unit vector has wrong length".into()));
        }
        let constants = constants.into_iter().map(|x| x % p).collect();
        let unit = unit.into_iter().map(|x| x % p).collect();
        Ok(Algebra {
            inner: Arc::new(AlgebraInner { p, dim, constants, unit, cache: StructureCache::default() }),
        })
    }

    /// Construct and require both algebra invariants to hold.
    pub fn validated(p: u64, dim: usize, constants: Vec<u64>, unit: Vec<u64>) -> Result<Self, AlgError> {
        let a = Self::new(p, dim, constants, unit)?;
        let diag = a.validate();
        if let Some(v) = diag.first() {
            return Err(AlgError::InvalidAlgebra(format!("{v:?}")));
        }
        Ok(a)
    }

    pub fn modulus(&self) -> u64 {
        self.inner.p
    }
    pub fn dim(&self) -> usize {
        self.inner.dim
    }
    pub fn unit(&self) -> &[u64] {
        &self.inner.unit
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> u64 {
        let d = self.inner.dim;
        self.inner.constants[(i * d + j) * d + k]
    }

    pub fn constants(&self) -> &[u64] {
        &self.inner.constants
    }

    /// e_i * e_j as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<u64> {
        (0..self.inner.dim).map(|k| self.constant(i, j, k)).collect()
    }

    /// Product of two elements given by coordinate vectors.
    pub fn mult(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let d = self.inner.dim;
        let p = self.inner.p;
        let mut out = vec![0u64; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0 {
                    continue;
                }
                let c = x[i] * y[j] % p;
                for k in 0..d {
                    out[k] = (out[k] + c * self.constant(i, j, k)) % p;
                }
            }
        }
        out
    }

    pub fn elt_pow(&self, x: &[u64], e: u64) -> Vec<u64> {
        let mut acc = self.inner.unit.clone();
        let mut base = x.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mult(&acc, &base);
            }
            base = self.mult(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Left-multiplication matrix of e_i in the regular representation.
    pub fn left_mult_basis(&self, i: usize) -> FpMatrix {
        let d = self.inner.dim;
        let mut m = FpMatrix::zero(self.inner.p, d, d);
        for j in 0..d {
            for k in 0..d {
                m.set(k, j, self.constant(i, j, k));
            }
        }
        m
    }

    /// Left-multiplication matrix of an arbitrary element.
    pub fn left_mult(&self, x: &[u64]) -> FpMatrix {
        let d = self.inner.dim;
        let mut m = FpMatrix::zero(self.inner.p, d, d);
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            let li = self.left_mult_basis(i);
            m = m.add(&li.scale(x[i])).unwrap();
        }
        m
    }

    pub fn right_mult_basis(&self, j: usize) -> FpMatrix {
        let d = self.inner.dim;
        let mut m = FpMatrix::zero(self.inner.p, d, d);
        for i in 0..d {
            for k in 0..d {
                m.set(k, i, self.constant(i, j, k));
            }
        }
        m
    }

    /// Report-valued invariant check: associativity on all basis triples and
    /// the two unit laws, naming every violated instance.
    pub fn validate(&self) -> Vec<AlgebraViolation> {
        let d = self.inner.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let eij = self.basis_product(i, j);
                for k in 0..d {
                    let lhs = self.mult(&eij, &basis_vec(d, k));
                    let rhs = self.mult(&basis_vec(d, i), &self.basis_product(j, k));
                    if lhs != rhs {
                        out.push(AlgebraViolation::Associativity { i, j, k });
                    }
                }
            }
        }
        let unit = &self.inner.unit;
        for i in 0..d {
            let ei = basis_vec(d, i);
            if self.mult(unit, &ei) != ei {
                out.push(AlgebraViolation::UnitLeft { i });
            }
            if self.mult(&ei, unit) != ei {
                out.push(AlgebraViolation::UnitRight { i });
            }
        }
        out
    }

    /// The regular left module.
    pub fn regular_module(&self) -> Module {
        let action = (0..self.inner.dim).map(|i| self.left_mult_basis(i)).collect();
        Module::new(self.clone(), self.inner.dim, action).expect("regular module is valid")
    }

    /// Opposite algebra (structure constants transposed in the first two
    /// indices). Cached.
    pub fn opposite(&self) -> Algebra {
        self.inner
            .cache
            .opposite
            .get_or_init(|| {
                let d = self.inner.dim;
                let mut constants = vec![0u64; d * d * d];
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            constants[(i * d + j) * d + k] = self.constant(j, i, k);
                        }
                    }
                }
                Algebra::new(self.inner.p, d, constants, self.inner.unit.clone()).expect("opposite algebra")
            })
            .clone()
    }

    /// Center as a subspace of the algebra.
    pub fn center(&self) -> Subspace {
        let d = self.inner.dim;
        let mut stacked = FpMatrix::zero(self.inner.p, 0, d);
        for i in 0..d {
            let diff = self.left_mult_basis(i).sub(&self.right_mult_basis(i)).unwrap();
            stacked = stacked.vstack(&diff).unwrap();
        }
        Subspace::from_columns(&stacked.kernel())
    }
}

fn basis_vec(d: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; d];
    v[i] = 1;
    v
}

/// Raw module payload (no algebra back-reference) used in caches.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleData {
    pub dim: usize,
    pub action: Vec<FpMatrix>,
}

/// A finite-dimensional left module: `action[i]` is the matrix of e_i.
#[derive(Clone)]
pub struct Module {
    algebra: Algebra,
    dim: usize,
    action: Arc<Vec<FpMatrix>>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.dim == other.dim && *self.action == *other.action
    }
}
impl Eq for Module {}

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Module(dim {} over F_{})", self.dim, self.algebra.modulus())
    }
}

impl Module {
    pub fn new(algebra: Algebra, dim: usize, action: Vec<FpMatrix>) -> Result<Self, AlgError> {
        if action.len() != algebra.dim() {
            return Err(AlgError::InvalidModule(format!(
                "need {} action matrices, got {}",
                algebra.dim(),
                action.len()
            )));
        }
        for (i, m) in action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(AlgError::InvalidModule(format!("action of e_{i} is not {dim}x{dim}")));
            }
            if m.modulus() != algebra.modulus() {
                return Err(AlgError::InvalidModule(format!("action of e_{i} has wrong modulus")));
            }
        }
        let module = Module { algebra, dim, action: Arc::new(action) };
        module.check_structure()?;
        Ok(module)
    }

    fn check_structure(&self) -> Result<(), AlgError> {
        let a = &self.algebra;
        let d = a.dim();
        let p = a.modulus();
        // rho(e_i) rho(e_j) = sum_k c[i][j][k] rho(e_k)
        for i in 0..d {
            for j in 0..d {
                let lhs = self.action[i].mul(&self.action[j])?;
                let mut rhs = FpMatrix::zero(p, self.dim, self.dim);
                for k in 0..d {
                    let c = a.constant(i, j, k);
                    if c != 0 {
                        rhs = rhs.add(&self.action[k].scale(c))?;
                    }
                }
                if lhs != rhs {
                    return Err(AlgError::InvalidModule(format!(
                        "action not multiplicative at basis pair ({i},{j})"
                    )));
                }
            }
        }
        if self.act(a.unit()) != FpMatrix::identity(p, self.dim) {
            return Err(AlgError::InvalidModule("unit does not act as identity".into()));
        }
        Ok(())
    }

    pub fn zero(algebra: Algebra) -> Module {
        let p = algebra.modulus();
        let action = (0..algebra.dim()).map(|_| FpMatrix::zero(p, 0, 0)).collect();
        Module { algebra, dim: 0, action: Arc::new(action) }
    }

    pub fn from_data(algebra: Algebra, data: &ModuleData) -> Module {
        Module { algebra, dim: data.dim, action: Arc::new(data.action.clone()) }
    }

    pub fn data(&self) -> ModuleData {
        ModuleData { dim: self.dim, action: (*self.action).clone() }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }
    pub fn action(&self, i: usize) -> &FpMatrix {
        &self.action[i]
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act(&self, x: &[u64]) -> FpMatrix {
        let p = self.algebra.modulus();
        let mut m = FpMatrix::zero(p, self.dim, self.dim);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m = m.add(&self.action[i].scale(c)).unwrap();
            }
        }
        m
    }

    /// Smallest submodule containing the given vectors: close the span under
    /// all basis actions.
    pub fn spin(&self, vectors: &FpMatrix) -> Subspace {
        let mut current = Subspace::from_columns(vectors);
        loop {
            let mut next = current.clone();
            for i in 0..self.algebra.dim() {
                let image = self.action[i].mul(current.basis()).unwrap();
                next = next.sum(&Subspace::from_columns(&image)).unwrap();
            }
            if next.dim() == current.dim() {
                return current;
            }
            current = next;
        }
    }

    pub fn is_invariant(&self, u: &Subspace) -> bool {
        (0..self.algebra.dim()).all(|i| {
            let image = self.action[i].mul(u.basis()).unwrap();
            u.contains_space(&Subspace::from_columns(&image))
        })
    }

    /// Submodule on an invariant subspace, with its inclusion.
    pub fn submodule(&self, u: &Subspace) -> Result<(Module, Morphism), AlgError> {
        if u.ambient() != self.dim {
            return Err(AlgError::InvalidModule("subspace has wrong ambient dimension".into()));
        }
        if !self.is_invariant(u) {
            return Err(AlgError::InvalidModule("subspace is not invariant".into()));
        }
        let basis = u.basis().clone();
        let mut action = Vec::with_capacity(self.algebra.dim());
        for i in 0..self.algebra.dim() {
            let image = self.action[i].mul(&basis)?;
            let coords = basis
                .solve(&image)?
                .ok_or_else(|| AlgError::Internal("invariant image escaped subspace".into()))?;
            action.push(coords);
        }
        let sub = Module { algebra: self.algebra.clone(), dim: u.dim(), action: Arc::new(action) };
        let incl = Morphism::new(sub.clone(), self.clone(), basis)?;
        Ok((sub, incl))
    }

    /// Quotient by an invariant subspace, with its projection.
    pub fn quotient(&self, u: &Subspace) -> Result<(Module, Morphism), AlgError> {
        if u.ambient() != self.dim {
            return Err(AlgError::InvalidModule("subspace has wrong ambient dimension".into()));
        }
        if !self.is_invariant(u) {
            return Err(AlgError::InvalidModule("subspace is not invariant".into()));
        }
        let proj = u.quotient_map();
        let qdim = proj.rows();
        // right inverse of proj
        let section = proj
            .solve(&FpMatrix::identity(self.algebra.modulus(), qdim))?
            .ok_or_else(|| AlgError::Internal("quotient projection not surjective".into()))?;
        let mut action = Vec::with_capacity(self.algebra.dim());
        for i in 0..self.algebra.dim() {
            action.push(proj.mul(&self.action[i])?.mul(&section)?);
        }
        let q = Module { algebra: self.algebra.clone(), dim: qdim, action: Arc::new(action) };
        q.check_structure()
            .map_err(|e| AlgError::Internal(format!("quotient action invalid: {e}")))?;
        let pr = Morphism::new(self.clone(), q.clone(), proj)?;
        Ok((q, pr))
    }

    /// Direct sum with canonical injections and projections.
    pub fn direct_sum(summands: &[Module]) -> Result<(Module, Vec<Morphism>, Vec<Morphism>), AlgError> {
        let algebra = summands
            .first()
            .map(|m| m.algebra.clone())
            .ok_or_else(|| AlgError::InvalidModule("direct sum of empty family".into()))?;
        if summands.iter().any(|m| m.algebra != algebra) {
            return Err(AlgError::AlgebraMismatch);
        }
        let p = algebra.modulus();
        let total: usize = summands.iter().map(Module::dim).sum();
        let mut action = Vec::with_capacity(algebra.dim());
        for i in 0..algebra.dim() {
            let mut block = FpMatrix::zero(p, 0, 0);
            for m in summands {
                block = block.direct_sum(m.action(i))?;
            }
            debug_assert_eq!(block.rows(), total);
            action.push(block);
        }
        let sum = Module { algebra, dim: total, action: Arc::new(action) };
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        let mut offset = 0;
        for m in summands {
            let mut inj = FpMatrix::zero(p, total, m.dim());
            let mut proj = FpMatrix::zero(p, m.dim(), total);
            for r in 0..m.dim() {
                inj.set(offset + r, r, 1);
                proj.set(r, offset + r, 1);
            }
            injections.push(Morphism::new(m.clone(), sum.clone(), inj)?);
            projections.push(Morphism::new(sum.clone(), m.clone(), proj)?);
            offset += m.dim();
        }
        Ok((sum, injections, projections))
    }

    /// Dual module over the opposite algebra (actions transposed).
    pub fn dual(&self) -> Module {
        let op = self.algebra.opposite();
        let action: Vec<FpMatrix> = self.action.iter().map(FpMatrix::transpose).collect();
        Module { algebra: op, dim: self.dim, action: Arc::new(action) }
    }
}

/// An intertwining map between modules of the same algebra; the matrix is
/// target_dim x source_dim acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Module,
    target: Module,
    matrix: FpMatrix,
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Morphism({} -> {}): {:?}", self.source.dim, self.target.dim, self.matrix)
    }
}

impl Morphism {
    pub fn new(source: Module, target: Module, matrix: FpMatrix) -> Result<Self, AlgError> {
        if source.algebra != target.algebra {
            return Err(AlgError::AlgebraMismatch);
        }
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(AlgError::InvalidMorphism(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim,
                source.dim
            )));
        }
        for i in 0..source.algebra.dim() {
            let lhs = target.action(i).mul(&matrix)?;
            let rhs = matrix.mul(source.action(i))?;
            if lhs != rhs {
                return Err(AlgError::InvalidMorphism(format!("does not intertwine e_{i}")));
            }
        }
        Ok(Morphism { source, target, matrix })
    }

    pub fn identity(m: &Module) -> Morphism {
        Morphism {
            source: m.clone(),
            target: m.clone(),
            matrix: FpMatrix::identity(m.algebra.modulus(), m.dim),
        }
    }

    pub fn zero(source: &Module, target: &Module) -> Morphism {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            matrix: FpMatrix::zero(source.algebra.modulus(), target.dim, source.dim),
        }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }
    pub fn target(&self) -> &Module {
        &self.target
    }
    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_mono(&self) -> bool {
        self.matrix.rank() == self.source.dim
    }

    pub fn is_epi(&self) -> bool {
        self.matrix.rank() == self.target.dim
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim == self.target.dim && self.matrix.is_invertible()
    }

    /// self  then  g   (g o self).
    pub fn then(&self, g: &Morphism) -> Result<Morphism, AlgError> {
        if self.target != g.source {
            return Err(AlgError::InvalidMorphism("composition target/source mismatch".into()));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: g.target.clone(),
            matrix: g.matrix.mul(&self.matrix)?,
        })
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism, AlgError> {
        if self.source != other.source || self.target != other.target {
            return Err(AlgError::InvalidMorphism("sum of morphisms with different ends".into()));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    pub fn neg(&self) -> Morphism {
        Morphism { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.neg() }
    }

    pub fn scale(&self, c: u64) -> Morphism {
        Morphism { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.scale(c) }
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let inv = self.matrix.inverse()?;
        Some(Morphism { source: self.target.clone(), target: self.source.clone(), matrix: inv })
    }

    /// Kernel as a module with its inclusion into the source.
    pub fn kernel(&self) -> (Module, Morphism) {
        let ker = Subspace::from_columns(&self.matrix.kernel());
        self.source.submodule(&ker).expect("kernel of a morphism is invariant")
    }

    /// Image as a module with its inclusion into the target.
    pub fn image(&self) -> (Module, Morphism) {
        let im = self.matrix.column_space();
        self.target.submodule(&im).expect("image of a morphism is invariant")
    }

    /// Cokernel as a module with the projection from the target.
    pub fn cokernel(&self) -> (Module, Morphism) {
        let im = self.matrix.column_space();
        self.target.quotient(&im).expect("image of a morphism is invariant")
    }

    /// Restrict to a submodule of the source given by its inclusion,
    /// corestricted to a submodule of the target given by its inclusion.
    /// Fails if the image does not land in the target submodule.
    pub fn restrict(&self, src_incl: &Morphism, tgt_incl: &Morphism) -> Result<Morphism, AlgError> {
        let composed = src_incl.then(self)?;
        let coords = tgt_incl
            .matrix
            .solve(&composed.matrix)?
            .ok_or_else(|| AlgError::InvalidMorphism("image escapes target submodule".into()))?;
        Morphism::new(src_incl.source.clone(), tgt_incl.source.clone(), coords)
    }

    /// Dual morphism between the dual modules over the opposite algebra.
    pub fn dual(&self) -> Morphism {
        Morphism {
            source: self.target.dual(),
            target: self.source.dual(),
            matrix: self.matrix.transpose(),
        }
    }
}

/// Basis of the space of intertwiners M -> N, in a deterministic order.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<Morphism>, AlgError> {
    if m.algebra != n.algebra {
        return Err(AlgError::AlgebraMismatch);
    }
    let p = m.algebra.modulus();
    let (sd, td) = (m.dim(), n.dim());
    if sd == 0 || td == 0 {
        return Ok(Vec::new());
    }
    let vars = td * sd; // F[r][c] -> index r*sd + c
    let d = m.algebra.dim();
    let mut system = FpMatrix::zero(p, d * vars, vars);
    for i in 0..d {
        let a = n.action(i); // td x td
        let b = m.action(i); // sd x sd
        // (A F - F B)[r][s] = sum_t A[r][t] F[t][s] - sum_u F[r][u] B[u][s]
        for r in 0..td {
            for s in 0..sd {
                let row = i * vars + r * sd + s;
                for t in 0..td {
                    let c = a.get(r, t);
                    if c != 0 {
                        let col = t * sd + s;
                        let cur = system.get(row, col);
                        system.set(row, col, (cur + c) % p);
                    }
                }
                for u in 0..sd {
                    let c = b.get(u, s);
                    if c != 0 {
                        let col = r * sd + u;
                        let cur = system.get(row, col);
                        system.set(row, col, (cur + p - c) % p);
                    }
                }
            }
        }
    }
    let ker = system.kernel();
    let mut basis = Vec::with_capacity(ker.cols());
    for j in 0..ker.cols() {
        let flat = ker.col(j);
        let mut mat = FpMatrix::zero(p, td, sd);
        for r in 0..td {
            for s in 0..sd {
                mat.set(r, s, flat[r * sd + s]);
            }
        }
        basis.push(Morphism { source: m.clone(), target: n.clone(), matrix: mat });
    }
    Ok(basis)
}

/// Kernel, image and cokernel of a morphism packaged together.
pub fn morphism_parts(phi: &Morphism) -> MorphismParts {
    let (kernel, kernel_incl) = phi.kernel();
    let (image, image_incl) = phi.image();
    let (cokernel, cokernel_proj) = phi.cokernel();
    MorphismParts { kernel, kernel_incl, image, image_incl, cokernel, cokernel_proj }
}

pub struct MorphismParts {
    pub kernel: Module,
    pub kernel_incl: Morphism,
    pub image: Module,
    pub image_incl: Morphism,
    pub cokernel: Module,
    pub cokernel_proj: Morphism,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validate_fixture_algebras() {
        for a in [fixtures::k_a2(), fixtures::ss2(), fixtures::loc2()] {
            assert!(a.validate().is_empty());
        }
    }

    #[test]
    fn validate_flipped_constant_names_triple() {
        // break associativity in kA2 by flipping one structure constant
        let a = fixtures::k_a2();
        let d = a.dim();
        let mut constants = a.constants().to_vec();
        constants[(2 * d + 2) * d] = 1; // a*a = e_1, nonsense
        let broken = Algebra::new(2, d, constants, a.unit().to_vec()).unwrap();
        let diag = broken.validate();
        assert!(!diag.is_empty());
        assert!(diag
            .iter()
            .any(|v| matches!(v, AlgebraViolation::Associativity { .. })));
    }

    #[test]
    fn hom_space_dims_on_quiver_fixture() {
        // oracle: brute-force enumeration of all matrices
        let fx = fixtures::KA2Fixture::new();
        let cases = [
            (&fx.s1, &fx.s1, 1usize),
            (&fx.s1, &fx.i2, 0),
            (&fx.i2, &fx.s1, 1),
            (&fx.s2, &fx.i2, 1),
            (&fx.i2, &fx.s2, 0),
            (&fx.s1, &fx.s2, 0),
        ];
        for (m, n, expected) in cases {
            let brute = brute_force_hom_dim(m, n);
            assert_eq!(brute, expected, "oracle mismatch");
            assert_eq!(hom_space(m, n).unwrap().len(), expected);
        }
    }

    fn brute_force_hom_dim(m: &Module, n: &Module) -> usize {
        let p = m.algebra().modulus();
        let vars = m.dim() * n.dim();
        if vars == 0 {
            return 0;
        }
        let mut count = 0usize;
        for entries in crate::fp::enumerate_vectors(p, vars, 4096) {
            let mat = FpMatrix::new(p, n.dim(), m.dim(), entries).unwrap();
            let ok = (0..m.algebra().dim()).all(|i| {
                n.action(i).mul(&mat).unwrap() == mat.mul(m.action(i)).unwrap()
            });
            if ok {
                count += 1;
            }
        }
        // count = p^dim, recover dim
        let mut dim = 0;
        let mut acc = 1;
        while acc < count {
            acc *= p as usize;
            dim += 1;
        }
        assert_eq!(acc, count, "hom set is not a subspace?");
        dim
    }

    #[test]
    fn morphism_parts_of_identity_and_zero() {
        let fx = fixtures::KA2Fixture::new();
        let id = Morphism::identity(&fx.i2);
        let parts = morphism_parts(&id);
        assert_eq!(parts.kernel.dim(), 0);
        assert_eq!(parts.image.dim(), 2);
        assert_eq!(parts.cokernel.dim(), 0);

        let z = Morphism::zero(&fx.s1, &fx.s2);
        let parts = morphism_parts(&z);
        assert_eq!(parts.kernel.dim(), 1);
        assert_eq!(parts.image.dim(), 0);
        assert_eq!(parts.cokernel.dim(), 1);
    }

    #[test]
    fn socle_inclusion_has_simple_cokernel() {
        // quotient of I2 by its socle is S1
        let fx = fixtures::KA2Fixture::new();
        let iota = fx.socle_inclusion();
        let parts = morphism_parts(&iota);
        assert_eq!(parts.kernel.dim(), 0);
        assert_eq!(parts.image.dim(), 1);
        assert_eq!(parts.cokernel.dim(), 1);
        assert!(super::structure::is_isomorphic(&parts.cokernel, &fx.s1).unwrap().is_some());
    }

    #[test]
    fn direct_sum_round_trip() {
        let fx = fixtures::KA2Fixture::new();
        let (sum, inj, proj) = Module::direct_sum(&[fx.s1.clone(), fx.i2.clone()]).unwrap();
        assert_eq!(sum.dim(), 3);
        for k in 0..2 {
            let comp = inj[k].then(&proj[k]).unwrap();
            assert!(comp.is_iso());
        }
        let cross = inj[0].then(&proj[1]).unwrap();
        assert!(cross.is_zero());
    }

    #[test]
    fn morphism_algebra_mismatch() {
        let fx = fixtures::KA2Fixture::new();
        let other = fixtures::ss2().regular_module();
        assert!(matches!(
            hom_space(&fx.s1, &other),
            Err(AlgError::AlgebraMismatch)
        ));
    }

    #[test]
    fn spin_generates_submodule() {
        let fx = fixtures::KA2Fixture::new();
        // spinning the top basis vector of I2 generates all of I2
        let v = FpMatrix::col_vec(2, &[1, 0]);
        let full = fx.i2.spin(&v);
        assert_eq!(full.dim(), 2);
        // spinning the socle vector stays inside the socle
        let w = FpMatrix::col_vec(2, &[0, 1]);
        let soc = fx.i2.spin(&w);
        assert_eq!(soc.dim(), 1);
    }
}

//! Jacobson radical over F_p, computed as the annihilator of the factors of
//! a filtration of the regular module and certified after the fact.
//!
//! For any filtration of the regular module, the annihilator of its factors
//! is a nilpotent two-sided ideal, hence inside the radical. When the factors
//! are provably simple and the quotient's annihilator vanishes, the radical
//! is pinned exactly: a nilpotent ideal with semisimple quotient is the
//! radical. The chop splits modules by spinning vectors; at desk scale the
//! vector sweep is exhaustive, which makes simplicity a proof rather than a
//! heuristic.

use super::{basis_vec, AlgError, Algebra, Module};
use crate::fp::{enumerate_vectors, FpMatrix, Subspace};

/// Exhaustive-vector-sweep bound for proving simplicity.
const SPIN_CAP: usize = 1 << 16;

/// The radical as a subspace of the algebra (coordinates in the given basis).
pub(super) fn radical_subspace(a: &Algebra) -> Subspace {
    let (ann, _) = annihilator_of_chop(a);
    let mut ideal = ann;
    loop {
        if ideal.dim() == a.dim() {
            panic!("unital algebra cannot be its own radical");
        }
        let (quot, proj, _section) = quotient_algebra_parts(a, &ideal);
        let (q_ann, proven) = annihilator_of_chop(&quot);
        if q_ann.is_zero() {
            assert!(
                proven,
                "cannot certify semisimplicity of the quotient: module too large for the spin sweep"
            );
            break;
        }
        let pre = preimage(&proj, &q_ann);
        let grown = ideal.sum(&pre).expect("ambient match");
        assert!(grown.dim() > ideal.dim(), "radical certificate loop must make progress");
        ideal = grown;
    }
    assert!(is_nilpotent_ideal(a, &ideal), "radical candidate is not nilpotent");
    ideal
}

/// Annihilator of the factors of a chop filtration of the regular module,
/// plus whether every factor was proven simple.
fn annihilator_of_chop(a: &Algebra) -> (Subspace, bool) {
    let regular = a.regular_module();
    let mut factors = Vec::new();
    let mut all_proven = true;
    chop(regular, &mut factors, &mut all_proven);
    let p = a.modulus();
    let d = a.dim();
    // x annihilates F iff act_F(x) = 0: stack the evaluation maps
    let mut rows = FpMatrix::zero(p, 0, d);
    for f in &factors {
        let n = f.dim();
        let mut eval = FpMatrix::zero(p, n * n, d);
        for i in 0..d {
            let m = f.action(i);
            for r in 0..n {
                for c in 0..n {
                    eval.set(r * n + c, i, m.get(r, c));
                }
            }
        }
        rows = rows.vstack(&eval).unwrap();
    }
    (Subspace::from_columns(&rows.kernel()), all_proven)
}

fn chop(m: Module, factors: &mut Vec<Module>, all_proven: &mut bool) {
    if m.dim() == 0 {
        return;
    }
    match find_proper_submodule(&m) {
        Split::Found(space) => {
            let (u, incl) = m.submodule(&space).expect("found submodule");
            let (q, _) = m.quotient(&incl.matrix().column_space()).expect("quotient");
            chop(u, factors, all_proven);
            chop(q, factors, all_proven);
        }
        Split::ProvenSimple => factors.push(m),
        Split::Unknown => {
            *all_proven = false;
            factors.push(m);
        }
    }
}

enum Split {
    Found(Subspace),
    ProvenSimple,
    Unknown,
}

fn find_proper_submodule(m: &Module) -> Split {
    let p = m.algebra().modulus();
    let n = m.dim();
    if n == 1 {
        return Split::ProvenSimple;
    }
    let proper = |s: &Subspace| s.dim() > 0 && s.dim() < n;
    // cheap candidates first: basis vectors, then kernel vectors of acting
    // elements (basis elements and their pairwise sums)
    for i in 0..n {
        let s = m.spin(&FpMatrix::col_vec(p, &basis_vec(n, i)));
        if proper(&s) {
            return Split::Found(s);
        }
    }
    let d = m.algebra().dim();
    let mut elements: Vec<Vec<u64>> = (0..d).map(|i| basis_vec(d, i)).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = basis_vec(d, i);
            v[j] = 1;
            elements.push(v);
        }
    }
    for x in &elements {
        let ker = m.act(x).kernel();
        for j in 0..ker.cols() {
            let s = m.spin(&FpMatrix::col_vec(p, &ker.col(j)));
            if proper(&s) {
                return Split::Found(s);
            }
        }
    }
    // exhaustive sweep: a module is simple iff every nonzero vector spins to
    // the whole module
    if (p as u128).saturating_pow(n as u32) <= SPIN_CAP as u128 {
        for v in enumerate_vectors(p, n, SPIN_CAP).into_iter().skip(1) {
            let s = m.spin(&FpMatrix::col_vec(p, &v));
            if proper(&s) {
                return Split::Found(s);
            }
        }
        return Split::ProvenSimple;
    }
    Split::Unknown
}

fn preimage(proj: &FpMatrix, target: &Subspace) -> Subspace {
    // {x : proj x in target} = kernel of (quotient-by-target o proj)
    let q = target.quotient_map();
    let comp = q.mul(proj).unwrap();
    Subspace::from_columns(&comp.kernel())
}

fn is_nilpotent_ideal(a: &Algebra, ideal: &Subspace) -> bool {
    // two-sided ideal check
    let d = a.dim();
    for i in 0..d {
        for j in 0..ideal.dim() {
            let x = ideal.basis().col(j);
            let ei = basis_vec(d, i);
            let left = FpMatrix::col_vec(a.modulus(), &a.mult(&ei, &x));
            let right = FpMatrix::col_vec(a.modulus(), &a.mult(&x, &ei));
            if !ideal.contains(&left) || !ideal.contains(&right) {
                return false;
            }
        }
    }
    // powers must reach zero
    let mut current = ideal.clone();
    for _ in 0..=d {
        if current.is_zero() {
            return true;
        }
        let mut products = FpMatrix::zero(a.modulus(), d, 0);
        for i in 0..ideal.dim() {
            for j in 0..current.dim() {
                let prod = a.mult(&ideal.basis().col(i), &current.basis().col(j));
                products = products.hstack(&FpMatrix::col_vec(a.modulus(), &prod)).unwrap();
            }
        }
        let next = Subspace::from_columns(&products);
        if next.dim() == current.dim() {
            return next.is_zero();
        }
        current = next;
    }
    current.is_zero()
}

/// Quotient algebra A/I for a two-sided ideal I, with the projection onto
/// the complement coordinates and a linear section.
pub fn quotient_algebra(a: &Algebra, ideal: &Subspace) -> (Algebra, FpMatrix, FpMatrix) {
    quotient_algebra_parts(a, ideal)
}

fn quotient_algebra_parts(a: &Algebra, ideal: &Subspace) -> (Algebra, FpMatrix, FpMatrix) {
    let p = a.modulus();
    let proj = ideal.quotient_map(); // q x d
    let q = proj.rows();
    let section = proj
        .solve(&FpMatrix::identity(p, q))
        .unwrap()
        .expect("projection is onto");
    let mut constants = vec![0u64; q * q * q];
    for i in 0..q {
        let si = section.col(i);
        for j in 0..q {
            let sj = section.col(j);
            let prod = a.mult(&si, &sj);
            let projected = proj.mul(&FpMatrix::col_vec(p, &prod)).unwrap();
            for k in 0..q {
                constants[(i * q + j) * q + k] = projected.get(k, 0);
            }
        }
    }
    let unit = proj.mul(&FpMatrix::col_vec(p, a.unit())).unwrap();
    let unit_vec = (0..q).map(|k| unit.get(k, 0)).collect();
    let quot = Algebra::new(p, q, constants, unit_vec).expect("quotient algebra");
    (quot, proj, section)
}

impl Algebra {
    /// Jacobson radical as a subspace of the algebra; cached. The result is
    /// certified: it is a nilpotent two-sided ideal and the quotient has no
    /// radical left.
    pub fn radical(&self) -> &Subspace {
        self.inner.cache.radical.get_or_init(|| radical_subspace(self))
    }

    /// The semisimple quotient A/rad(A) with projection and section.
    pub fn semisimple_quotient(&self) -> (Algebra, FpMatrix, FpMatrix) {
        quotient_algebra_parts(self, self.radical())
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical().is_zero()
    }
}

#[allow(dead_code)]
fn _err_type(_: AlgError) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn radical_of_quiver_algebra_is_arrow_span() {
        let a = fixtures::k_a2();
        let rad = a.radical();
        assert_eq!(rad.dim(), 1);
        // the arrow is the third basis element
        assert!(rad.contains(&FpMatrix::col_vec(2, &[0, 0, 1])));
    }

    #[test]
    fn radical_of_semisimple_is_zero() {
        assert!(fixtures::ss2().radical().is_zero());
        assert!(fixtures::ss2().is_semisimple());
    }

    #[test]
    fn radical_of_local_algebra() {
        // x^2 = 0 forces rad = span(x)
        let a = fixtures::loc2();
        let rad = a.radical();
        assert_eq!(rad.dim(), 1);
        assert!(rad.contains(&FpMatrix::col_vec(2, &[0, 1])));
    }

    #[test]
    fn quotient_by_radical_is_radical_free() {
        for a in [fixtures::k_a2(), fixtures::ss2(), fixtures::loc2()] {
            let (q, _, _) = a.semisimple_quotient();
            assert!(q.radical().is_zero());
            assert!(q.validate().is_empty());
        }
    }

    #[test]
    fn radical_over_f3_group_algebra() {
        // F_3[C_3] = F_3[x]/(x^3 - 1) = F_3[y]/(y^3), y = x - 1: radical has
        // dimension 2. Basis 1, x, x^2.
        let p = 3;
        let d = 3;
        let mut constants = vec![0u64; 27];
        for i in 0..d {
            for j in 0..d {
                let k = (i + j) % d;
                constants[(i * d + j) * d + k] = 1;
            }
        }
        let a = Algebra::validated(p, d, constants, vec![1, 0, 0]).unwrap();
        assert_eq!(a.radical().dim(), 2);
        // y = x - 1 generates: check membership
        assert!(a.radical().contains(&FpMatrix::col_vec(3, &[2, 1, 0])));
    }

    #[test]
    fn radical_of_upper_triangular_3x3_over_f2() {
        // 3x3 upper triangular matrices: dim 6, radical = strictly upper part
        // (dim 3). Basis: E11,E22,E33,E12,E13,E23 in that order.
        let p = 2;
        let pairs = [(0usize, 0usize), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
        let d = pairs.len();
        let mut constants = vec![0u64; d * d * d];
        for (bi, &(i, j)) in pairs.iter().enumerate() {
            for (bj, &(k, l)) in pairs.iter().enumerate() {
                if j == k {
                    if let Some(bk) = pairs.iter().position(|&q| q == (i, l)) {
                        constants[(bi * d + bj) * d + bk] = 1;
                    }
                }
            }
        }
        let a = Algebra::validated(p, d, constants, vec![1, 1, 1, 0, 0, 0]).unwrap();
        let rad = a.radical();
        assert_eq!(rad.dim(), 3);
        for strict in 3..6 {
            assert!(rad.contains(&FpMatrix::col_vec(p, &basis_vec(d, strict))));
        }
    }
}

//! Canonical fixture algebras and modules shared by the whole test suite and
//! the shipped spec files: the path algebra of the quiver 1 -> 2 over F_2,
//! the product of two copies of F_2, and F_2[x]/(x^2).

use crate::algmod::{Algebra, Module, Morphism};
use crate::fp::{enumerate_vectors, FpMatrix, Subspace};

/// Path algebra of the quiver 1 -> 2 over F_2. Basis e1, e2, a with
/// e1^2 = e1, e2^2 = e2, e2*a = a = a*e1; unit e1 + e2.
pub fn k_a2() -> Algebra {
    let d = 3;
    let mut c = vec![0u64; d * d * d];
    let mut set = |i: usize, j: usize, k: usize| c[(i * d + j) * d + k] = 1;
    set(0, 0, 0); // e1 e1 = e1
    set(1, 1, 1); // e2 e2 = e2
    set(1, 2, 2); // e2 a = a
    set(2, 0, 2); // a e1 = a
    Algebra::validated(2, d, c, vec![1, 1, 0]).expect("kA2 is associative and unital")
}

/// F_2 x F_2: split semisimple with two one-dimensional blocks.
pub fn ss2() -> Algebra {
    let d = 2;
    let mut c = vec![0u64; d * d * d];
    c[0] = 1; // f1 f1 = f1
    c[(1 * d + 1) * d + 1] = 1; // f2 f2 = f2
    Algebra::validated(2, d, c, vec![1, 1]).expect("ss2 is associative and unital")
}

/// F_2[x]/(x^2): local with one simple and a one-dimensional radical.
pub fn loc2() -> Algebra {
    let d = 2;
    let mut c = vec![0u64; d * d * d];
    c[0] = 1; // 1*1 = 1
    c[(0 * d + 1) * d + 1] = 1; // 1*x = x
    c[(1 * d + 0) * d + 1] = 1; // x*1 = x
    Algebra::validated(2, d, c, vec![1, 0]).expect("loc2 is associative and unital")
}

/// The trivial one-dimensional algebra: modules over it are plain
/// F_p-vector spaces. Used for complexes of hom spaces.
pub fn field_algebra(p: u64) -> Algebra {
    Algebra::validated(p, 1, vec![1], vec![1]).expect("the base field is an algebra")
}

/// Named modules over the quiver algebra: the two simples, the
/// indecomposable injective I2 = E(S2) (the representation k -> k) and the
/// projective cover P1 of S1 (the same representation).
pub struct KA2Fixture {
    pub algebra: Algebra,
    pub s1: Module,
    pub s2: Module,
    pub i2: Module,
    pub p1: Module,
}

impl KA2Fixture {
    pub fn new() -> Self {
        let algebra = k_a2();
        let p = 2;
        let one = |v: u64| FpMatrix::new(p, 1, 1, vec![v]).unwrap();
        let s1 = Module::new(algebra.clone(), 1, vec![one(1), one(0), one(0)]).unwrap();
        let s2 = Module::new(algebra.clone(), 1, vec![one(0), one(1), one(0)]).unwrap();
        let two = |rows: [[u64; 2]; 2]| {
            FpMatrix::from_rows(p, &[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
        };
        let rep = vec![
            two([[1, 0], [0, 0]]), // e1: vertex-1 component
            two([[0, 0], [0, 1]]), // e2: vertex-2 component
            two([[0, 0], [1, 0]]), // a: arrow 1 -> 2
        ];
        let i2 = Module::new(algebra.clone(), 2, rep.clone()).unwrap();
        let p1 = Module::new(algebra.clone(), 2, rep).unwrap();
        KA2Fixture { algebra, s1, s2, i2, p1 }
    }

    /// The socle inclusion S2 -> I2.
    pub fn socle_inclusion(&self) -> Morphism {
        let m = FpMatrix::new(2, 2, 1, vec![0, 1]).unwrap();
        Morphism::new(self.s2.clone(), self.i2.clone(), m).unwrap()
    }

    /// The top projection I2 ->> S1.
    pub fn top_projection(&self) -> Morphism {
        let m = FpMatrix::new(2, 1, 2, vec![1, 0]).unwrap();
        Morphism::new(self.i2.clone(), self.s1.clone(), m).unwrap()
    }
}

impl Default for KA2Fixture {
    fn default() -> Self {
        Self::new()
    }
}

/// Full submodule lattice by brute force: cyclic spins of every vector,
/// closed under sums. Test oracle for torsion and essentiality checks;
/// requires p^dim <= cap.
pub fn enumerate_submodules(m: &Module, cap: usize) -> Vec<Subspace> {
    let p = m.algebra().modulus();
    let mut found: Vec<Subspace> = vec![Subspace::zero(p, m.dim())];
    for v in enumerate_vectors(p, m.dim(), cap).into_iter().skip(1) {
        let s = m.spin(&FpMatrix::col_vec(p, &v));
        if !found.contains(&s) {
            found.push(s);
        }
    }
    loop {
        let mut grew = false;
        let snapshot = found.clone();
        for a in &snapshot {
            for b in &snapshot {
                let s = a.sum(b).unwrap();
                if !found.contains(&s) {
                    found.push(s);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    found.sort_by_key(|s| (s.dim(), s.basis().flat().to_vec()));
    found
}

/// The standard module battery for an algebra: zero, the simples, their
/// injective envelopes and projective covers, the regular module and all
/// pairwise sums of simples. Deterministic order.
pub fn module_battery(a: &Algebra) -> Vec<Module> {
    let simples = a.simples().expect("battery needs a split algebra");
    let mut battery = vec![Module::zero(a.clone())];
    battery.extend(simples.iter().cloned());
    for i in 0..simples.len() {
        let (e, _) = a.indecomposable_injective(i).expect("envelope");
        battery.push(e);
    }
    for s in &simples {
        let (p, _) = crate::algmod::projective_cover(s).expect("cover");
        battery.push(p);
    }
    battery.push(a.regular_module());
    for i in 0..simples.len() {
        for j in i..simples.len() {
            let (sum, _, _) =
                Module::direct_sum(&[simples[i].clone(), simples[j].clone()]).expect("sum");
            battery.push(sum);
        }
    }
    battery
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submodule_lattice_of_i2() {
        let fx = KA2Fixture::new();
        let lattice = enumerate_submodules(&fx.i2, 4096);
        // 0, socle, whole
        assert_eq!(lattice.len(), 3);
        assert_eq!(lattice.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn battery_is_nonempty_and_valid() {
        for a in [k_a2(), ss2(), loc2()] {
            let b = module_battery(&a);
            assert!(b.len() >= 4);
        }
    }
}

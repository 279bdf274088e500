//! Hereditary torsion theories over an artinian coefficient algebra, the
//! torsion functor, localization, injective classes of injectives, and the
//! spectrum partition.
//!
//! Over artinian coefficients a hereditary torsion class is determined by
//! the set of simple modules it contains, so a theory is stored as a set of
//! simple indices; torsion and torsion-free are predicates computed from
//! composition factors and socles.

use crate::algmod::{
    self, hom_space, injective_envelope, is_injective, socle, AlgError, Algebra, Module, Morphism,
    MorphismSolver,
};
use crate::fp::{FpMatrix, Subspace};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum TorsionError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("OVERLAP: {0}")]
    Overlap(String),
    #[error("CROSSCHECK_FAILED: {0}")]
    CrosscheckFailed(String),
    #[error("simple index {0} out of range")]
    BadSimpleIndex(usize),
}

pub type Result<T> = std::result::Result<T, TorsionError>;

/// A hereditary torsion theory, stored as the set of torsion simple indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsionTheory {
    algebra: Algebra,
    sigma: BTreeSet<usize>,
}

impl TorsionTheory {
    pub fn new(algebra: Algebra, sigma: BTreeSet<usize>) -> Result<Self> {
        let count = algebra.simples()?.len();
        if let Some(&bad) = sigma.iter().find(|&&i| i >= count) {
            return Err(TorsionError::BadSimpleIndex(bad));
        }
        Ok(TorsionTheory { algebra, sigma })
    }

    pub fn trivial(algebra: Algebra) -> Result<Self> {
        Self::new(algebra, BTreeSet::new())
    }

    pub fn improper(algebra: Algebra) -> Result<Self> {
        let count = algebra.simples()?.len();
        Self::new(algebra, (0..count).collect())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn sigma(&self) -> &BTreeSet<usize> {
        &self.sigma
    }

    pub fn is_trivial(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn is_improper(&self) -> Result<bool> {
        Ok(self.sigma.len() == self.algebra.simples()?.len())
    }

    /// Bitmask over simple indices, for stable naming in reports.
    pub fn mask(&self) -> u64 {
        self.sigma.iter().fold(0, |m, &i| m | (1 << i))
    }

    /// Specialization order: self ⪯ other iff the torsion class is smaller.
    pub fn le(&self, other: &TorsionTheory) -> bool {
        self.sigma.is_subset(&other.sigma)
    }

    /// M is torsion iff every composition factor lies in sigma.
    pub fn is_torsion(&self, m: &Module) -> Result<bool> {
        let counts = algmod::composition_factors(m)?;
        Ok(counts.iter().enumerate().all(|(i, &c)| c == 0 || self.sigma.contains(&i)))
    }

    /// M is torsion-free iff its socle has no factor in sigma.
    pub fn is_torsion_free(&self, m: &Module) -> Result<bool> {
        let (soc, _) = socle(m);
        let mults = algmod::socle_multiplicities(&soc)?;
        Ok(mults.iter().enumerate().all(|(i, &c)| c == 0 || !self.sigma.contains(&i)))
    }

    /// Local objects represent the quotient category: torsion-free with
    /// torsion-free envelope quotient.
    pub fn is_local(&self, m: &Module) -> Result<bool> {
        if !self.is_torsion_free(m)? {
            return Ok(false);
        }
        let (e, iota) = injective_envelope(m)?;
        let (q, _) = e.quotient(&iota.matrix().column_space())?;
        self.is_torsion_free(&q)
    }

    /// Membership in the injective class of injectives attached to self.
    pub fn in_injective_class(&self, m: &Module) -> Result<bool> {
        Ok(is_injective(m)? && self.is_torsion_free(m)?)
    }
}

/// All 2^s theories in mask order (so the trivial theory comes first and the
/// improper one last).
pub fn all_torsion_theories(a: &Algebra) -> Result<Vec<TorsionTheory>> {
    let s = a.simples()?.len();
    assert!(s <= 16, "2^{s} torsion theories is beyond desk scale");
    let mut out = Vec::with_capacity(1 << s);
    for mask in 0u64..(1 << s) {
        let sigma: BTreeSet<usize> = (0..s).filter(|i| mask & (1 << i) != 0).collect();
        out.push(TorsionTheory::new(a.clone(), sigma)?);
    }
    Ok(out)
}

/// Largest torsion submodule with its inclusion, computed by the stabilizing
/// chain t_{k+1} = preimage of the sigma-part of soc(M / t_k).
pub fn torsion_submodule(m: &Module, tau: &TorsionTheory) -> Result<(Module, Morphism)> {
    if m.algebra() != tau.algebra() {
        return Err(AlgError::AlgebraMismatch.into());
    }
    let p = m.algebra().modulus();
    let simples = m.algebra().simples()?;
    let mut t = Subspace::zero(p, m.dim());
    loop {
        let (q, qproj) = m.quotient(&t)?;
        let (socq, soc_incl) = socle(&q);
        let mut part = FpMatrix::zero(p, q.dim(), 0);
        for &i in tau.sigma() {
            for phi in hom_space(&simples[i], &socq)? {
                let emb = soc_incl.matrix().mul(phi.matrix()).map_err(AlgError::from)?;
                part = part.hstack(&emb).map_err(AlgError::from)?;
            }
        }
        let part_space = Subspace::from_columns(&part);
        if part_space.is_zero() {
            break;
        }
        // preimage of the part under the quotient projection
        let killed = part_space.quotient_map().mul(qproj.matrix()).map_err(AlgError::from)?;
        let next = Subspace::from_columns(&killed.kernel());
        if next.dim() == t.dim() {
            break;
        }
        t = next;
    }
    let (sub, incl) = m.submodule(&t)?;
    debug_assert!(tau.is_torsion(&sub)?);
    Ok((sub, incl))
}

/// The torsion theory cogenerated by an injective module: a simple is
/// torsion exactly when it has no map into E.
pub fn cogenerated_by(e: &Module) -> Result<TorsionTheory> {
    if !is_injective(e)? {
        return Err(AlgError::NotInjective("cogenerator must be injective".into()).into());
    }
    let simples = e.algebra().simples()?;
    let mut sigma = BTreeSet::new();
    for (i, s) in simples.iter().enumerate() {
        if hom_space(s, e)?.is_empty() {
            sigma.insert(i);
        }
    }
    TorsionTheory::new(e.algebra().clone(), sigma)
}

/// Stability: the torsion class is closed under injective envelopes, which
/// over artinian coefficients reduces to E(S) being torsion for every
/// torsion simple S.
pub fn is_stable(tau: &TorsionTheory) -> Result<bool> {
    for &i in tau.sigma() {
        let (e, _) = tau.algebra().indecomposable_injective(i)?;
        if !tau.is_torsion(&e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The injective class of injectives attached to a torsion theory,
/// represented by its set of indecomposable generators E(S_i).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InjectiveClassRep {
    algebra: Algebra,
    generators: BTreeSet<usize>,
}

impl InjectiveClassRep {
    pub fn new(algebra: Algebra, generators: BTreeSet<usize>) -> Result<Self> {
        let count = algebra.simples()?.len();
        if let Some(&bad) = generators.iter().find(|&&i| i >= count) {
            return Err(TorsionError::BadSimpleIndex(bad));
        }
        Ok(InjectiveClassRep { algebra, generators })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn generators(&self) -> &BTreeSet<usize> {
        &self.generators
    }

    /// Membership: injective with all indecomposable summands among the
    /// generators.
    pub fn contains(&self, m: &Module) -> Result<bool> {
        if m.dim() == 0 {
            return Ok(true);
        }
        match algmod::decompose_injective(m) {
            Ok(dec) => Ok(dec.iter().all(|(i, _)| self.generators.contains(i))),
            Err(AlgError::NotInjective(_)) => Ok(false),
            Err(e) => Err(e.into()),
        }
    }
}

/// I_tau = injective torsion-free objects; generated by the E(S) that carry
/// no torsion.
pub fn injective_class_of(tau: &TorsionTheory) -> Result<InjectiveClassRep> {
    let mut generators = BTreeSet::new();
    let count = tau.algebra().simples()?.len();
    for i in 0..count {
        let (e, _) = tau.algebra().indecomposable_injective(i)?;
        let (t, _) = torsion_submodule(&e, tau)?;
        if t.dim() == 0 {
            generators.insert(i);
        }
    }
    InjectiveClassRep::new(tau.algebra().clone(), generators)
}

/// Inverse of the bijection: the torsion theory whose torsion-free class is
/// generated by the class members.
pub fn torsion_theory_of_class(class: &InjectiveClassRep) -> Result<TorsionTheory> {
    let simples = class.algebra().simples()?;
    let mut sigma = BTreeSet::new();
    for (i, s) in simples.iter().enumerate() {
        let mut orthogonal = true;
        for &g in class.generators() {
            let (e, _) = class.algebra().indecomposable_injective(g)?;
            if !hom_space(s, &e)?.is_empty() {
                orthogonal = false;
                break;
            }
        }
        if orthogonal {
            sigma.insert(i);
        }
    }
    TorsionTheory::new(class.algebra().clone(), sigma)
}

/// A morphism is a relative monomorphism for I_tau exactly when its kernel
/// is torsion. Both that criterion and the hom-surjectivity criterion are
/// evaluated; disagreement is a hard error.
pub fn is_i_mono(phi: &Morphism, tau: &TorsionTheory) -> Result<bool> {
    let (ker, _) = phi.kernel();
    let kernel_torsion = tau.is_torsion(&ker)?;
    // hom criterion: Hom(Y, E) -> Hom(X, E) surjective for every generator E
    let class = injective_class_of(tau)?;
    let mut hom_surjective = true;
    'outer: for &g in class.generators() {
        let (e, _) = tau.algebra().indecomposable_injective(g)?;
        let from_target = hom_space(phi.target(), &e)?;
        let from_source = hom_space(phi.source(), &e)?;
        if from_source.is_empty() {
            continue;
        }
        // express each composite in the source-side basis and compare ranks
        let p = tau.algebra().modulus();
        let flatten = |m: &Morphism| m.matrix().flat().to_vec();
        let full_cols: Vec<Vec<u64>> = from_source.iter().map(&flatten).collect();
        let image_cols: Vec<Vec<u64>> = from_target
            .iter()
            .map(|psi| flatten(&phi.then(psi).expect("composable")))
            .collect();
        let n = full_cols.first().map_or(0, Vec::len);
        let full = FpMatrix::from_cols(p, n, &full_cols).map_err(AlgError::from)?;
        let image = FpMatrix::from_cols(p, n, &image_cols).map_err(AlgError::from)?;
        if image.column_space().dim() != full.column_space().dim() {
            hom_surjective = false;
            break 'outer;
        }
    }
    if kernel_torsion != hom_surjective {
        return Err(TorsionError::CrosscheckFailed(format!(
            "kernel-torsion says {kernel_torsion}, hom-surjectivity says {hom_surjective}"
        )));
    }
    Ok(kernel_torsion)
}

/// A localization result: the local reflection together with its unit.
#[derive(Clone, Debug)]
pub struct Localization {
    pub local: Module,
    pub unit: Morphism,
}

/// Reflection of M into tau-local modules: inside E(M/T(M)), the preimage of
/// the torsion part of the cokernel.
pub fn localize(m: &Module, tau: &TorsionTheory) -> Result<Localization> {
    if m.algebra() != tau.algebra() {
        return Err(AlgError::AlgebraMismatch.into());
    }
    let (t, t_incl) = torsion_submodule(m, tau)?;
    let (x1, pi1) = m.quotient(&t_incl.matrix().column_space())?;
    let (e, iota) = injective_envelope(&x1)?;
    let (quot, pi) = e.quotient(&iota.matrix().column_space())?;
    let (_tq, tq_incl) = torsion_submodule(&quot, tau)?;
    // preimage of the torsion part under pi
    let killed = tq_incl
        .matrix()
        .column_space()
        .quotient_map()
        .mul(pi.matrix())
        .map_err(AlgError::from)?;
    let lspace = Subspace::from_columns(&killed.kernel());
    let (local, l_incl) = e.submodule(&lspace)?;
    // unit: M -> L through M -> X' -> E
    let into_e = iota.matrix().mul(pi1.matrix()).map_err(AlgError::from)?;
    let coords = l_incl
        .matrix()
        .solve(&into_e)
        .map_err(AlgError::from)?
        .ok_or_else(|| AlgError::Internal("unit does not land in the local part".into()))?;
    let unit = Morphism::new(m.clone(), local.clone(), coords)?;
    // contracts: L is local, kernel of the unit is the torsion part,
    // cokernel is torsion
    if !tau.is_local(&local)? {
        return Err(AlgError::Internal("localization is not local".into()).into());
    }
    let (ker, _) = unit.kernel();
    if ker.dim() != t.dim() {
        return Err(AlgError::Internal("unit kernel is not the torsion submodule".into()).into());
    }
    let (coker, _) = unit.cokernel();
    if !tau.is_torsion(&coker)? {
        return Err(AlgError::Internal("unit cokernel is not torsion".into()).into());
    }
    Ok(Localization { local, unit })
}

/// Functorial action of localization on a morphism: the unique g with
/// g . unit_M = unit_N . phi.
pub fn localize_morphism(phi: &Morphism, tau: &TorsionTheory) -> Result<Morphism> {
    let lm = localize(phi.source(), tau)?;
    let ln = localize(phi.target(), tau)?;
    localize_morphism_between(phi, &lm, &ln)
}

/// Same, with precomputed localizations of the two ends.
pub fn localize_morphism_between(
    phi: &Morphism,
    lm: &Localization,
    ln: &Localization,
) -> Result<Morphism> {
    let rhs = phi.then(&ln.unit)?;
    let mut solver = MorphismSolver::new(lm.local.clone(), ln.local.clone());
    solver.require_compose_right(lm.unit.matrix(), rhs.matrix());
    match solver.solve()? {
        Some(g) => Ok(g),
        None => Err(AlgError::Internal("localization is not functorial on this morphism".into()).into()),
    }
}

/// Hom space in the quotient category, realized as maps between the
/// localizations.
pub fn hom_quotient(m: &Module, n: &Module, tau: &TorsionTheory) -> Result<Vec<Morphism>> {
    let lm = localize(m, tau)?;
    let ln = localize(n, tau)?;
    Ok(hom_space(&lm.local, &ln.local)?)
}

/// The prime theory attached to a point of the spectrum: cogenerated by the
/// indecomposable injective E(S_i).
pub fn prime_theory(a: &Algebra, i: usize) -> Result<TorsionTheory> {
    let (e, _) = a.indecomposable_injective(i)?;
    cogenerated_by(&e)
}

/// Partition of the spectrum: S(tau) = primes whose injective carries
/// torsion, G(tau) the rest.
pub fn spectrum_partition(tau: &TorsionTheory) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    let count = tau.algebra().simples()?.len();
    let mut s = BTreeSet::new();
    let mut g = BTreeSet::new();
    for i in 0..count {
        let (e, _) = tau.algebra().indecomposable_injective(i)?;
        let (t, _) = torsion_submodule(&e, tau)?;
        if t.dim() > 0 {
            s.insert(i);
        } else {
            g.insert(i);
        }
    }
    Ok((s, g))
}

/// Reflexive-transitive specialization relation on the spectrum:
/// rel[i][j] holds when pi_i specializes pi_j, seeded by nonvanishing of
/// hom(E(pi_j), E(pi_i)).
pub fn specialization_preorder(a: &Algebra) -> Result<Vec<Vec<bool>>> {
    let count = a.simples()?.len();
    let mut rel = vec![vec![false; count]; count];
    for i in 0..count {
        let (ei, _) = a.indecomposable_injective(i)?;
        for j in 0..count {
            if i == j {
                rel[i][j] = true;
                continue;
            }
            let (ej, _) = a.indecomposable_injective(j)?;
            if !hom_space(&ej, &ei)?.is_empty() {
                rel[i][j] = true;
            }
        }
    }
    // transitive closure
    for k in 0..count {
        for i in 0..count {
            for j in 0..count {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    Ok(rel)
}

/// Composition tau ∘ tau': torsion class of everything whose localization is
/// torsion for the second theory. The second theory lives on the quotient,
/// so its simple set must avoid sigma.
pub fn compose_tt(tau: &TorsionTheory, sigma2: &BTreeSet<usize>) -> Result<TorsionTheory> {
    if let Some(&bad) = sigma2.iter().find(|i| tau.sigma().contains(i)) {
        return Err(TorsionError::Overlap(format!(
            "simple index {bad} is already torsion for the base theory"
        )));
    }
    let union: BTreeSet<usize> = tau.sigma().union(sigma2).copied().collect();
    TorsionTheory::new(tau.algebra().clone(), union)
}

/// Relative dimension collapses to {-1, 0} over artinian coefficients:
/// -1 exactly for torsion modules.
pub fn rel_gdim(m: &Module, tau: &TorsionTheory) -> Result<i64> {
    Ok(if tau.is_torsion(m)? { -1 } else { 0 })
}

/// Verdict of the semi-decision for exactness of a theory's localization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactnessVerdict {
    ExactOnBattery,
    NotExact { witness: String },
}

/// Localization applied to every generated short exact sequence among the
/// battery modules must remain exact. A failure witness is conclusive; the
/// positive verdict is an under-approximation by construction.
pub fn exactness_on_battery(tau: &TorsionTheory, battery: &[Module]) -> Result<ExactnessVerdict> {
    for (mi, m) in battery.iter().enumerate() {
        for (si, sub) in generated_submodules(m, tau)?.into_iter().enumerate() {
            if sub.dim() == 0 || sub.dim() == m.dim() {
                continue;
            }
            let (u, incl) = m.submodule(&sub)?;
            let (q, proj) = m.quotient(&sub)?;
            let lu = localize(&u, tau)?;
            let lm = localize(m, tau)?;
            let lq = localize(&q, tau)?;
            let li = localize_morphism_between(&incl, &lu, &lm)?;
            let lp = localize_morphism_between(&proj, &lm, &lq)?;
            let witness = |what: &str| ExactnessVerdict::NotExact {
                witness: format!(
                    "battery module #{mi}, generated submodule #{si} of dim {}: {what}",
                    u.dim()
                ),
            };
            if !li.is_mono() {
                return Ok(witness("localized inclusion is not mono"));
            }
            let im = li.matrix().column_space();
            let ker = Subspace::from_columns(&lp.matrix().kernel());
            if im != ker {
                return Ok(witness("middle exactness fails after localization"));
            }
            if !lp.is_epi() {
                return Ok(witness("localized projection is not epi"));
            }
        }
    }
    Ok(ExactnessVerdict::ExactOnBattery)
}

/// Deterministic family of submodules used to generate short exact
/// sequences: cyclic spins of basis vectors, the socle, the radical
/// submodule and the torsion part.
fn generated_submodules(m: &Module, tau: &TorsionTheory) -> Result<Vec<Subspace>> {
    let p = m.algebra().modulus();
    let mut out: Vec<Subspace> = Vec::new();
    fn push(s: Subspace, out: &mut Vec<Subspace>) {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    for i in 0..m.dim() {
        let mut v = vec![0u64; m.dim()];
        v[i] = 1;
        push(m.spin(&FpMatrix::col_vec(p, &v)), &mut out);
    }
    let (_soc, soc_incl) = socle(m);
    push(soc_incl.matrix().column_space(), &mut out);
    let (_, rad_incl) = algmod::radical_submodule(m);
    push(rad_incl.matrix().column_space(), &mut out);
    let (_, t_incl) = torsion_submodule(m, tau)?;
    push(t_incl.matrix().column_space(), &mut out);
    Ok(out)
}

/// Which of the ambient hypotheses hold for this algebra: stability of every
/// theory, local noetherianity (automatic at this scale), and exactness of
/// every prime theory on the battery.
#[derive(Clone, Debug)]
pub struct HypothesisAudit {
    pub all_stable: bool,
    pub unstable_masks: Vec<u64>,
    pub locally_noetherian: bool,
    pub primes_exact: Vec<(usize, ExactnessVerdict)>,
}

impl HypothesisAudit {
    pub fn primes_all_exact(&self) -> bool {
        self.primes_exact
            .iter()
            .all(|(_, v)| matches!(v, ExactnessVerdict::ExactOnBattery))
    }
}

pub fn hypothesis_audit(a: &Algebra, battery: &[Module]) -> Result<HypothesisAudit> {
    let mut all_stable = true;
    let mut unstable_masks = Vec::new();
    for tau in all_torsion_theories(a)? {
        if !is_stable(&tau)? {
            all_stable = false;
            unstable_masks.push(tau.mask());
        }
    }
    let count = a.simples()?.len();
    let mut primes_exact = Vec::new();
    for i in 0..count {
        let pi = prime_theory(a, i)?;
        primes_exact.push((i, exactness_on_battery(&pi, battery)?));
    }
    Ok(HypothesisAudit { all_stable, unstable_masks, locally_noetherian: true, primes_exact })
}

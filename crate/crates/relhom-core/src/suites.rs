//! Named verification suites: each runs a family of property checks over an
//! algebra and returns machine-readable records. The CLI exposes them as
//! `check --suite <name>`; the acceptance tests drive the same functions.

use crate::algmod::{self, hom_space, AlgError, Algebra, Module, Morphism};
use crate::chx::model::{
    class_membership, factor_cocyl, factor_disk, fibrant_replacement, is_tau_weq,
    BottomConvention,
};
use crate::chx::{chain_map_space, truncate, ChxError, Complex, ComplexMorphism};
use crate::fixtures::module_battery;
use crate::fp::enumerate_vectors;
use crate::localcoh;
use crate::report::{CheckRecord, ClauseOutcome};
use crate::torsion::{
    self, all_torsion_theories, injective_class_of, localize, spectrum_partition,
    torsion_submodule, torsion_theory_of_class, TorsionError, TorsionTheory,
};
use crate::towers;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Chx(#[from] ChxError),
}

pub type Result<T> = std::result::Result<T, SuiteError>;

fn mask_name(tau: &TorsionTheory) -> String {
    format!("sigma{:b}", tau.mask())
}

/// Complex battery with windows inside [-2, 2]: stalks of the simples and
/// indecomposable injectives at every position, and every hom-space basis
/// element as a two-term complex at every position.
pub fn complex_battery(a: &Algebra) -> Result<Vec<Complex>> {
    let simples = a.simples()?;
    let mut modules: Vec<Module> = simples.clone();
    for i in 0..simples.len() {
        let (e, _) = a.indecomposable_injective(i)?;
        if !modules.contains(&e) {
            modules.push(e);
        }
    }
    let mut battery = vec![Complex::zero(a.clone())];
    for m in &modules {
        for k in -2..=2i64 {
            battery.push(Complex::stalk(m.clone(), k));
        }
    }
    for m in &modules {
        for n in &modules {
            for d in hom_space(m, n)? {
                if d.is_zero() {
                    continue;
                }
                for k in -2..=1i64 {
                    battery.push(Complex::two_term(d.clone(), k)?);
                }
            }
        }
    }
    Ok(battery)
}

/// Smaller battery used by the model and approximation suites: stalks at
/// degrees -1, 0 and the two-term complexes over the same window.
pub fn standard_battery(a: &Algebra) -> Result<Vec<Complex>> {
    let simples = a.simples()?;
    let mut modules: Vec<Module> = simples.clone();
    for i in 0..simples.len() {
        let (e, _) = a.indecomposable_injective(i)?;
        if !modules.contains(&e) {
            modules.push(e);
        }
    }
    let mut battery = vec![Complex::zero(a.clone())];
    for m in &modules {
        for k in [-1i64, 0] {
            battery.push(Complex::stalk(m.clone(), k));
        }
    }
    for m in &modules {
        for n in &modules {
            for d in hom_space(m, n)? {
                if d.is_zero() {
                    continue;
                }
                battery.push(Complex::two_term(d.clone(), -1)?);
            }
        }
    }
    Ok(battery)
}

/// Torsion theories and injective classes of injectives are in an
/// order-reversing bijection: both round trips are identities, and
/// inclusion order reverses. One record per theory.
pub fn suite_bijection(a: &Algebra) -> Result<Vec<CheckRecord>> {
    let theories = all_torsion_theories(a)?;
    let classes: Vec<_> =
        theories.iter().map(injective_class_of).collect::<torsion::Result<_>>()?;
    let mut out = Vec::new();
    for (i, tau) in theories.iter().enumerate() {
        let mut outcome = ClauseOutcome::Pass;
        let back = torsion_theory_of_class(&classes[i])?;
        if &back != tau {
            outcome = ClauseOutcome::Fail {
                witness: format!("theory round trip returned mask {}", back.mask()),
            };
        }
        // reverse round trip through the class
        if !outcome.is_fail() {
            let class_back = injective_class_of(&back)?;
            if class_back != classes[i] {
                outcome = ClauseOutcome::Fail { witness: "class round trip differs".into() };
            }
        }
        // order reversal against every other theory
        if !outcome.is_fail() {
            for (j, other) in theories.iter().enumerate() {
                if tau.le(other) && !classes[j].generators().is_subset(classes[i].generators()) {
                    outcome = ClauseOutcome::Fail {
                        witness: format!("order not reversed against mask {}", other.mask()),
                    };
                    break;
                }
            }
        }
        // the spectrum partition separates theories
        if !outcome.is_fail() {
            let (s, _) = spectrum_partition(tau)?;
            for other in &theories {
                if other != tau && spectrum_partition(other)?.0 == s {
                    outcome = ClauseOutcome::Fail {
                        witness: format!("partition collides with mask {}", other.mask()),
                    };
                    break;
                }
            }
        }
        out.push(CheckRecord::from_outcome(
            format!("bijection/{}", mask_name(tau)),
            "torsion theory and injective class determine each other, reversing inclusion",
            outcome,
        ));
    }
    Ok(out)
}

/// The two characterizations of relative monomorphisms (torsion kernel;
/// surjectivity of hom into every class generator) agree on the exhaustive
/// morphism sweep over small battery modules. One record per theory.
pub fn suite_imono(a: &Algebra) -> Result<Vec<CheckRecord>> {
    let p = a.modulus();
    let modules: Vec<Module> =
        module_battery(a).into_iter().filter(|m| m.dim() <= 3 && m.dim() > 0).collect();
    let simples = a.simples()?;
    let theories = all_torsion_theories(a)?;
    // precompute hom spaces into each indecomposable injective
    let injectives: Vec<Module> = (0..simples.len())
        .map(|i| a.indecomposable_injective(i).map(|(e, _)| e))
        .collect::<std::result::Result<_, _>>()?;
    let mut outcomes: Vec<ClauseOutcome> = vec![ClauseOutcome::Pass; theories.len()];
    let mut swept = 0usize;
    for m in &modules {
        for n in &modules {
            let hom_into_e_from_n: Vec<Vec<Morphism>> =
                injectives.iter().map(|e| hom_space(n, e)).collect::<std::result::Result<_, _>>()?;
            let hom_into_e_from_m: Vec<Vec<Morphism>> =
                injectives.iter().map(|e| hom_space(m, e)).collect::<std::result::Result<_, _>>()?;
            let basis = hom_space(m, n)?;
            let h = basis.len();
            if h == 0 {
                continue;
            }
            let total = (p as u128).saturating_pow(h as u32);
            assert!(total <= 4096, "sweep must stay exhaustive at this scale");
            for coeffs in enumerate_vectors(p, h, 4096) {
                let mut phi = Morphism::zero(m, n);
                for (c, b) in coeffs.iter().zip(&basis) {
                    if *c != 0 {
                        phi = phi.add(&b.scale(*c))?;
                    }
                }
                swept += 1;
                // criterion via the kernel, per theory
                let (ker, _) = phi.kernel();
                let factors = algmod::composition_factors(&ker)?;
                // criterion via hom surjectivity, per injective
                let mut surjective = vec![true; injectives.len()];
                for (gi, e) in injectives.iter().enumerate() {
                    let from_n = &hom_into_e_from_n[gi];
                    let from_m = &hom_into_e_from_m[gi];
                    if from_m.is_empty() {
                        continue;
                    }
                    let flat_dim = e.dim() * m.dim();
                    let full_cols: Vec<Vec<u64>> =
                        from_m.iter().map(|f| f.matrix().flat().to_vec()).collect();
                    let image_cols: Vec<Vec<u64>> = from_n
                        .iter()
                        .map(|f| phi.then(f).map(|c| c.matrix().flat().to_vec()))
                        .collect::<std::result::Result<_, _>>()?;
                    let full = crate::fp::FpMatrix::from_cols(p, flat_dim, &full_cols)
                        .map_err(AlgError::from)?;
                    let image = crate::fp::FpMatrix::from_cols(p, flat_dim, &image_cols)
                        .map_err(AlgError::from)?;
                    surjective[gi] = image.column_space().dim() == full.column_space().dim();
                }
                for (ti, tau) in theories.iter().enumerate() {
                    if outcomes[ti].is_fail() {
                        continue;
                    }
                    let kernel_torsion = factors
                        .iter()
                        .enumerate()
                        .all(|(si, &c)| c == 0 || tau.sigma().contains(&si));
                    let class = injective_class_of(tau)?;
                    let hom_ok = class.generators().iter().all(|&g| surjective[g]);
                    if kernel_torsion != hom_ok {
                        outcomes[ti] = ClauseOutcome::Fail {
                            witness: format!(
                                "morphism {:?} between modules of dims {} and {}: kernel-torsion {} vs hom-surjectivity {}",
                                phi.matrix(),
                                m.dim(),
                                n.dim(),
                                kernel_torsion,
                                hom_ok
                            ),
                        };
                    }
                }
            }
        }
    }
    // also exercise the public operation itself on a sample
    let sample_tau = &theories[theories.len() - 1];
    for m in modules.iter().take(2) {
        let id = Morphism::identity(m);
        let _ = torsion::is_i_mono(&id, sample_tau)?;
    }
    Ok(theories
        .iter()
        .zip(outcomes)
        .map(|(tau, o)| {
            CheckRecord::from_outcome(
                format!("imono/{}", mask_name(tau)),
                format!(
                    "kernel-torsion and hom-surjectivity agree on all {swept} swept morphisms"
                ),
                o,
            )
        })
        .collect())
}

/// Localization: kills torsion, ignores the torsion part, is idempotent,
/// and induces the quotient hom sets. One record per theory.
pub fn suite_localization(a: &Algebra) -> Result<Vec<CheckRecord>> {
    let battery = module_battery(a);
    let mut out = Vec::new();
    for tau in all_torsion_theories(a)? {
        let mut outcome = ClauseOutcome::Pass;
        'battery: for (mi, m) in battery.iter().enumerate() {
            let l = localize(m, &tau)?;
            // torsion modules localize to zero
            if tau.is_torsion(m)? && l.local.dim() != 0 {
                outcome = ClauseOutcome::Fail {
                    witness: format!("torsion module #{mi} has nonzero localization"),
                };
                break 'battery;
            }
            // insensitive to the torsion part
            let (_t, t_incl) = torsion_submodule(m, &tau)?;
            let (m1, _) = m.quotient(&t_incl.matrix().column_space())?;
            let l1 = localize(&m1, &tau)?;
            if algmod::is_isomorphic(&l.local, &l1.local)?.is_none() {
                outcome = ClauseOutcome::Fail {
                    witness: format!("module #{mi}: localization changed after dropping torsion"),
                };
                break 'battery;
            }
            // idempotent with invertible unit
            let ll = localize(&l.local, &tau)?;
            if !ll.unit.is_iso() {
                outcome = ClauseOutcome::Fail {
                    witness: format!("module #{mi}: repeated localization moved"),
                };
                break 'battery;
            }
            // quotient hom sets: local pairs see their plain hom space
            if tau.is_local(m)? {
                for n in &battery {
                    if !tau.is_local(n)? {
                        continue;
                    }
                    let plain = hom_space(m, n)?.len();
                    let through = torsion::hom_quotient(m, n, &tau)?.len();
                    if plain != through {
                        outcome = ClauseOutcome::Fail {
                            witness: format!(
                                "local pair hom dims differ: {plain} vs {through}"
                            ),
                        };
                        break 'battery;
                    }
                }
            }
        }
        out.push(CheckRecord::from_outcome(
            format!("localization/{}", mask_name(&tau)),
            "localization kills torsion, is idempotent and represents quotient homs",
            outcome,
        ));
    }
    Ok(out)
}

/// Derived-functor comparison clauses aggregated over the battery, one
/// record per theory and clause; unstable theories skip.
pub fn suite_cohomology(a: &Algebra, cap: usize) -> Result<Vec<CheckRecord>> {
    let battery = module_battery(a);
    let mut out = Vec::new();
    for tau in all_torsion_theories(a)? {
        // aggregate per clause across the battery
        let mut agg: Vec<(String, ClauseOutcome)> = Vec::new();
        for (mi, m) in battery.iter().enumerate() {
            for (id, o) in localcoh::coho1_report(m, &tau, cap)? {
                match agg.iter_mut().find(|(i, _)| *i == id) {
                    None => agg.push((id, o)),
                    Some((_, cur)) => match (&cur, &o) {
                        (ClauseOutcome::Fail { .. }, _) => {}
                        (_, ClauseOutcome::Fail { witness }) => {
                            *cur = ClauseOutcome::Fail {
                                witness: format!("module #{mi}: {witness}"),
                            };
                        }
                        (ClauseOutcome::Skipped { .. }, ClauseOutcome::Pass) => {
                            *cur = ClauseOutcome::Pass;
                        }
                        _ => {}
                    },
                }
            }
        }
        for (id, o) in agg {
            out.push(CheckRecord::from_outcome(
                format!("cohomology/{}/{}", mask_name(&tau), id),
                "derived torsion functor comparison clause over the module battery",
                o,
            ));
        }
    }
    Ok(out)
}

/// The three vanishing statements, one record per theory and statement.
pub fn suite_vanishing(a: &Algebra, cap: usize) -> Result<Vec<CheckRecord>> {
    let battery = module_battery(a);
    let mut out = Vec::new();
    for tau in all_torsion_theories(a)? {
        for (id, o) in localcoh::vanishing_report(&tau, &battery, cap)? {
            out.push(CheckRecord::from_outcome(
                format!("vanishing/{}/{}", mask_name(&tau), id),
                "local cohomology vanishing statement over the module battery",
                o,
            ));
        }
    }
    Ok(out)
}

/// The two characterizations of relative quasi-isomorphisms agree on an
/// exhaustive battery of chain maps with windows inside [-2, 2].
pub fn suite_weq(a: &Algebra) -> Result<Vec<CheckRecord>> {
    let battery = complex_battery(a)?;
    let p = a.modulus();
    let theories = all_torsion_theories(a)?;
    let mut outcomes: Vec<ClauseOutcome> = vec![ClauseOutcome::Pass; theories.len()];
    let mut swept = 0usize;
    for x in &battery {
        for y in &battery {
            let basis = chain_map_space(x, y)?;
            let h = basis.len();
            if h == 0 {
                continue;
            }
            let total = (p as u128).saturating_pow(h as u32);
            let sweep: Vec<ComplexMorphism> = if total <= 1024 {
                let mut v = Vec::new();
                for coeffs in enumerate_vectors(p, h, 1024) {
                    let mut phi = ComplexMorphism::zero(x, y);
                    for (c, b) in coeffs.iter().zip(&basis) {
                        if *c != 0 {
                            phi = phi.add(&b.scale(*c))?;
                        }
                    }
                    v.push(phi);
                }
                v
            } else {
                let mut v = basis.clone();
                for i in 0..h {
                    for j in (i + 1)..h {
                        v.push(basis[i].add(&basis[j])?);
                    }
                }
                v
            };
            for phi in sweep {
                swept += 1;
                for (ti, tau) in theories.iter().enumerate() {
                    if outcomes[ti].is_fail() {
                        continue;
                    }
                    // the crosscheck is built into the predicate
                    if let Err(ChxError::Crosscheck(msg)) = is_tau_weq(&phi, tau) {
                        outcomes[ti] = ClauseOutcome::Fail {
                            witness: format!("{:?} vs {:?}: {msg}", x, y),
                        };
                    }
                }
            }
        }
    }
    Ok(theories
        .iter()
        .zip(outcomes)
        .map(|(tau, o)| {
            CheckRecord::from_outcome(
                format!("weq/{}", mask_name(tau)),
                format!(
                    "cone-torsion and hom-acyclicity verdicts agree on all {swept} swept chain maps"
                ),
                o,
            )
        })
        .collect())
}

/// Lifting and factorization: the diagonal exists on every qualifying
/// square, both factorizations verify against the independent class
/// predicates, and the bottom-degree convention regression is demonstrated.
pub fn suite_model(a: &Algebra, depth: usize) -> Result<Vec<CheckRecord>> {
    let battery = standard_battery(a)?;
    let theories = all_torsion_theories(a)?;
    let mut out = Vec::new();
    for tau in &theories {
        // factorizations on every battery morphism into/out of samples
        let mut outcome = ClauseOutcome::Pass;
        let mut factored = 0usize;
        'outer: for x in &battery {
            for y in &battery {
                for phi in chain_map_space(x, y)? {
                    let bottom = [x.window(), y.window()]
                        .into_iter()
                        .flatten()
                        .map(|w| w.0)
                        .min()
                        .unwrap_or(0);
                    match factor_disk(&phi, tau, bottom) {
                        Ok(f) => {
                            // re-verify with the independent predicates
                            let cf = class_membership(
                                &f.cofibration,
                                tau,
                                bottom,
                                BottomConvention::Strict,
                            )?;
                            let bf = class_membership(
                                &f.acyclic_fibration,
                                tau,
                                bottom,
                                BottomConvention::Strict,
                            )?;
                            if !cf.in_c || !bf.in_b || !bf.in_w {
                                outcome = ClauseOutcome::Fail {
                                    witness: format!("disk factorization flags failed on {x:?} -> {y:?}"),
                                };
                                break 'outer;
                            }
                        }
                        Err(e) => {
                            outcome = ClauseOutcome::Fail {
                                witness: format!("disk factorization error: {e}"),
                            };
                            break 'outer;
                        }
                    }
                    match factor_cocyl(&phi, tau, depth) {
                        Ok(f) => {
                            if f.certified_below.is_none() {
                                let cf = class_membership(
                                    &f.acyclic_cofibration,
                                    tau,
                                    bottom.min(
                                        f.mid.window().map(|w| w.0).unwrap_or(bottom),
                                    ),
                                    BottomConvention::Strict,
                                )?;
                                let bf = class_membership(
                                    &f.fibration,
                                    tau,
                                    bottom.min(
                                        f.mid.window().map(|w| w.0).unwrap_or(bottom),
                                    ),
                                    BottomConvention::Strict,
                                )?;
                                if !cf.in_c || !cf.in_w || !bf.in_b {
                                    outcome = ClauseOutcome::Fail {
                                        witness: format!(
                                            "cocylinder factorization flags failed on {x:?} -> {y:?}"
                                        ),
                                    };
                                    break 'outer;
                                }
                            }
                            factored += 1;
                        }
                        Err(e) => {
                            outcome = ClauseOutcome::Fail {
                                witness: format!("cocylinder factorization error: {e}"),
                            };
                            break 'outer;
                        }
                    }
                }
            }
        }
        out.push(CheckRecord::from_outcome(
            format!("model/factorizations/{}", mask_name(tau)),
            format!("both factorization halves verified by the class predicates on {factored} maps"),
            outcome,
        ));

        // lifting: extend maps along acyclic cofibrations into fibrant stalks
        let mut outcome = ClauseOutcome::Pass;
        let mut lifted = 0usize;
        'lift: for x in &battery {
            let bottom = x.window().map(|w| w.0).unwrap_or(0);
            let rx = fibrant_replacement(x, tau, depth)?;
            if rx.certified_below.is_some() {
                continue;
            }
            let simples_count = a.simples()?.len();
            for gi in 0..simples_count {
                let (e, _) = a.indecomposable_injective(gi)?;
                if !tau.in_injective_class(&e)? {
                    continue;
                }
                let target = Complex::stalk(e, bottom);
                let z = Complex::zero(a.clone());
                let b = ComplexMorphism::zero(&target, &z);
                for top in chain_map_space(x, &target)? {
                    let bottom_map = ComplexMorphism::zero(&rx.replacement, &z);
                    match crate::chx::model::lift_square(
                        &rx.rho,
                        &b,
                        &top,
                        &bottom_map,
                        tau,
                        bottom,
                        BottomConvention::Strict,
                    ) {
                        Ok(psi) => {
                            let through = rx.rho.then(&psi)?;
                            if through != top {
                                outcome = ClauseOutcome::Fail {
                                    witness: "diagonal does not restrict to the top".into(),
                                };
                                break 'lift;
                            }
                            lifted += 1;
                        }
                        Err(ChxError::NoLift(lf)) => {
                            outcome = ClauseOutcome::Fail {
                                witness: format!("lift failed: {lf:?}"),
                            };
                            break 'lift;
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
        out.push(CheckRecord::from_outcome(
            format!("model/lifting/{}", mask_name(tau)),
            format!("the diagonal exists in all {lifted} qualifying squares"),
            outcome,
        ));
    }

    // the bottom-convention regression: under the printed convention the
    // factorization axiom is refutable by a torsion-free stalk at the bottom
    out.push(bottom_convention_regression(a)?);
    Ok(out)
}

/// Demonstrate that demanding relative monomorphy at the window bottom
/// breaks the factorization axiom: exhibited on a torsion-free simple stalk
/// whenever some theory has one; skipped otherwise.
pub fn bottom_convention_regression(a: &Algebra) -> Result<CheckRecord> {
    let id = "model/bottom-convention-regression";
    let statement = "with relative monomorphy demanded at the window bottom, the factorization \
                     axiom fails on a torsion-free simple stalk";
    let simples = a.simples()?;
    for tau in all_torsion_theories(a)? {
        if tau.is_trivial() {
            continue;
        }
        for s in &simples {
            if tau.is_torsion(s)? || !tau.is_torsion_free(s)? {
                continue;
            }
            // candidate witness: the stalk of s at the bottom of Ch^{>= 0}
            let x = Complex::stalk(s.clone(), 0);
            let z = Complex::zero(a.clone());
            let phi = ComplexMorphism::zero(&x, &z);
            let f = factor_disk(&phi, &tau, 0)?;
            let strict = class_membership(&f.cofibration, &tau, 0, BottomConvention::Strict)?;
            let printed = class_membership(&f.cofibration, &tau, 0, BottomConvention::Printed)?;
            if !strict.in_c {
                return Ok(CheckRecord::fail(
                    id,
                    statement,
                    "the strict convention unexpectedly rejected the canonical factorization",
                ));
            }
            if printed.in_c {
                return Ok(CheckRecord::fail(
                    id,
                    statement,
                    "the printed convention unexpectedly accepted the canonical factorization",
                ));
            }
            // the obstruction: any printed cofibration out of the stalk
            // would be a monomorphism (its kernel is a torsion submodule of
            // a torsion-free simple), embedding s into the bottom cohomology
            // of a complex that must be torsion there
            return Ok(CheckRecord::pass(id, statement));
        }
    }
    Ok(CheckRecord::from_outcome(
        id,
        statement,
        ClauseOutcome::Skipped {
            reason: "no torsion-free simple outside a proper theory on this algebra".into(),
        },
    ))
}

/// Tower reconstruction and the truncation adjunction: finite limits of
/// truncation towers recover bounded complexes, the pullback test maps are
/// unique, and hom dimensions match across the adjunction.
pub fn suite_towers(a: &Algebra, depth: usize) -> Result<Vec<CheckRecord>> {
    let battery = standard_battery(a)?;
    let mut out = Vec::new();
    // lim . tower = id on bounded complexes
    let mut outcome = ClauseOutcome::Pass;
    for (i, x) in battery.iter().enumerate() {
        let cmp = towers::limit_comparison(x, depth)?;
        if !cmp.is_iso() {
            outcome = ClauseOutcome::Fail {
                witness: format!("battery #{i}: limit comparison is not an isomorphism"),
            };
            break;
        }
    }
    out.push(CheckRecord::from_outcome(
        "towers/limit-recovers-complex",
        "the finite limit of the truncation tower recovers every bounded battery complex",
        outcome,
    ));

    // pullback-based fibration test: universal maps unique, identity tower
    // passes
    let mut outcome = ClauseOutcome::Pass;
    'outer: for x in &battery {
        if x.is_zero() {
            continue;
        }
        let t = towers::tower_of(x, depth)?;
        let levels = (0..=depth).map(|k| ComplexMorphism::identity(t.level(k))).collect();
        let id = towers::TowerMorphism::new(t.clone(), t.clone(), levels)?;
        for k in 1..=depth {
            let test = towers::fibration_test_map(&id, k)?;
            let back = test.universal.then(&test.proj_current)?;
            if &back != id.level(k) {
                outcome = ClauseOutcome::Fail {
                    witness: format!("projection does not recover the component at level {k}"),
                };
                break 'outer;
            }
            let back2 = test.universal.then(&test.proj_previous)?;
            if &back2 != id.source().map(k - 1) {
                outcome = ClauseOutcome::Fail {
                    witness: format!("projection does not recover the ladder at level {k}"),
                };
                break 'outer;
            }
        }
    }
    out.push(CheckRecord::from_outcome(
        "towers/pullback-universal-property",
        "the universal comparison into the levelwise pullback recovers both components",
        outcome,
    ));

    // adjunction dimension equalities
    let mut outcome = ClauseOutcome::Pass;
    'adj: for x in &battery {
        for y in &battery {
            for k in 0..=depth {
                let cut = -(k as i64);
                if y.window().is_some_and(|(lo, _)| lo < cut) {
                    continue;
                }
                let (tx, _) = truncate(x, cut)?;
                let below = chain_map_space(&tx, y)?.len();
                let above = chain_map_space(x, y)?.len();
                if below != above {
                    outcome = ClauseOutcome::Fail {
                        witness: format!("hom dims differ at cut {cut}: {below} vs {above}"),
                    };
                    break 'adj;
                }
            }
        }
    }
    out.push(CheckRecord::from_outcome(
        "towers/truncation-adjunction-hom-dims",
        "maps out of a truncation match maps out of the complex into targets above the cut",
        outcome,
    ));
    Ok(out)
}

/// The model-approximation axioms for one theory; non-terminating
/// resolutions surface as skips, never as failures.
pub fn suite_approximation(
    tau: &TorsionTheory,
    depth: usize,
) -> Result<Vec<CheckRecord>> {
    let a = tau.algebra();
    let battery = standard_battery(a)?;
    let statements: &[(&str, &str)] = &[
        ("adjunction-triangles", "both adjunctions satisfy their triangle identities"),
        (
            "left-functor-preserves-equivalences",
            "relative weak equivalences map to levelwise tower equivalences",
        ),
        (
            "right-functor-on-fibrant-equivalences",
            "equivalences between generated fibrant towers have weakly equivalent limits",
        ),
        (
            "adjoint-of-fibrant-equivalence",
            "the adjoint of an equivalence into a generated fibrant tower is an equivalence",
        ),
        (
            "localization-leg-compatibility",
            "the localization adjunction is compatible with both equivalence classes",
        ),
    ];
    match towers::verify_model_approximation(tau, &battery, depth) {
        Ok(results) => Ok(results
            .into_iter()
            .map(|(id, o)| {
                let statement = statements
                    .iter()
                    .find(|(sid, _)| *sid == id)
                    .map(|(_, s)| *s)
                    .unwrap_or("model approximation axiom");
                CheckRecord::from_outcome(
                    format!("approximation/{}/{}", mask_name(tau), id),
                    statement,
                    o,
                )
            })
            .collect()),
        Err(ChxError::Unterminated(reason)) => Ok(statements
            .iter()
            .map(|(id, statement)| {
                CheckRecord::from_outcome(
                    format!("approximation/{}/{}", mask_name(tau), id),
                    *statement,
                    ClauseOutcome::Skipped { reason: reason.clone() },
                )
            })
            .collect()),
        Err(e) => Err(e.into()),
    }
}

/// Approximation suite over every theory of the algebra.
pub fn suite_approximation_all(a: &Algebra, depth: usize) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for tau in all_torsion_theories(a)? {
        out.extend(suite_approximation(&tau, depth)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::report::Verdict;

    fn assert_all_pass(records: &[CheckRecord]) {
        for r in records {
            assert_eq!(r.verdict, Verdict::Pass, "{}: {:?} {:?}", r.id, r.witness, r.skip_reason);
        }
    }

    #[test]
    fn bijection_suite_on_all_fixtures() {
        for a in [fixtures::k_a2(), fixtures::ss2(), fixtures::loc2()] {
            let records = suite_bijection(&a).unwrap();
            assert_eq!(records.len(), if a.simples().unwrap().len() == 2 { 4 } else { 2 });
            assert_all_pass(&records);
        }
    }

    #[test]
    fn imono_suite_on_quiver_fixture() {
        let records = suite_imono(&fixtures::k_a2()).unwrap();
        assert_eq!(records.len(), 4);
        assert_all_pass(&records);
    }

    #[test]
    fn localization_suite_on_fixtures() {
        for a in [fixtures::k_a2(), fixtures::ss2(), fixtures::loc2()] {
            assert_all_pass(&suite_localization(&a).unwrap());
        }
    }

    #[test]
    fn cohomology_and_vanishing_suites() {
        for a in [fixtures::k_a2(), fixtures::ss2()] {
            for r in suite_cohomology(&a, 5).unwrap() {
                assert_ne!(r.verdict, Verdict::Fail, "{}: {:?}", r.id, r.witness);
            }
            for r in suite_vanishing(&a, 5).unwrap() {
                assert_ne!(r.verdict, Verdict::Fail, "{}: {:?}", r.id, r.witness);
            }
        }
    }

    #[test]
    fn weq_suite_on_quiver_fixture() {
        let records = suite_weq(&fixtures::k_a2()).unwrap();
        assert_eq!(records.len(), 4);
        assert_all_pass(&records);
    }

    #[test]
    fn model_suite_on_quiver_fixture() {
        let records = suite_model(&fixtures::k_a2(), 3).unwrap();
        for r in &records {
            assert_ne!(r.verdict, Verdict::Fail, "{}: {:?}", r.id, r.witness);
        }
        // the regression record must be an actual demonstration
        let regression = records
            .iter()
            .find(|r| r.id.contains("bottom-convention"))
            .expect("regression record present");
        assert_eq!(regression.verdict, Verdict::Pass);
    }

    #[test]
    fn towers_suite_on_quiver_fixture() {
        assert_all_pass(&suite_towers(&fixtures::k_a2(), 3).unwrap());
    }

    #[test]
    fn approximation_suite_per_theory() {
        let a = fixtures::k_a2();
        for tau in all_torsion_theories(&a).unwrap() {
            let records = suite_approximation(&tau, 3).unwrap();
            assert_eq!(records.len(), 5);
            for r in &records {
                assert_ne!(r.verdict, Verdict::Fail, "{}: {:?}", r.id, r.witness);
            }
        }
    }

    #[test]
    fn approximation_suite_skips_on_nonterminating() {
        // trivial theory over the local algebra: resolutions never stop
        let a = fixtures::loc2();
        let tau = TorsionTheory::trivial(a).unwrap();
        let records = suite_approximation(&tau, 2).unwrap();
        assert!(records.iter().all(|r| r.verdict == Verdict::Skipped));
    }
}

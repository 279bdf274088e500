//! Minimal injective resolutions and the derived functors of the torsion
//! functor, with the comparison and vanishing statements as report-valued
//! checks.
//!
//! Resolutions are minimal by construction (each term is the envelope of the
//! previous cokernel), so every output is canonical and the tests are
//! bit-reproducible. The degree cap is always explicit: over a local algebra
//! the resolution of the simple module never terminates.

use crate::algmod::{injective_envelope, is_isomorphic, AlgError, Module, Morphism};
use crate::fp::Subspace;
use crate::torsion::{
    self, exactness_on_battery, is_stable, localize, rel_gdim, torsion_submodule, ExactnessVerdict,
    TorsionError, TorsionTheory,
};

pub type Result<T> = std::result::Result<T, TorsionError>;

/// A minimal injective resolution 0 -> M -> E^0 -> E^1 -> ... -> E^cap.
/// Trailing zero terms are not stored; `term(k)` is zero beyond the stored
/// window.
#[derive(Clone, Debug)]
pub struct Resolution {
    base: Module,
    augmentation: Morphism,
    terms: Vec<Module>,
    diffs: Vec<Morphism>,
    cap: usize,
}

impl Resolution {
    pub fn base(&self) -> &Module {
        &self.base
    }
    pub fn augmentation(&self) -> &Morphism {
        &self.augmentation
    }
    pub fn cap(&self) -> usize {
        self.cap
    }
    /// Number of stored (possibly nonzero) terms.
    pub fn stored_len(&self) -> usize {
        self.terms.len()
    }
    pub fn term(&self, k: usize) -> Module {
        self.terms.get(k).cloned().unwrap_or_else(|| Module::zero(self.base.algebra().clone()))
    }
    /// Differential E^k -> E^{k+1}.
    pub fn diff(&self, k: usize) -> Morphism {
        self.diffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(&self.term(k), &self.term(k + 1)))
    }
    /// Whether the resolution reached zero before the cap.
    pub fn terminated(&self) -> bool {
        self.terms.len() <= self.cap
    }
}

/// Build the minimal injective resolution up to the cap: E^0 = E(M) and each
/// E^{k+1} is the envelope of the cokernel of the previous map.
pub fn min_injective_resolution(m: &Module, cap: usize) -> Result<Resolution> {
    let (e0, aug) = injective_envelope(m)?;
    let mut terms = vec![e0];
    let mut diffs: Vec<Morphism> = Vec::new();
    let (mut coker, mut coker_proj) = aug.cokernel();
    for _ in 0..cap {
        if coker.dim() == 0 {
            break;
        }
        let (_e_next, iota) = injective_envelope(&coker)?;
        let d = coker_proj.then(&iota)?;
        diffs.push(d.clone());
        terms.push(d.target().clone());
        let (c, cp) = d.cokernel();
        coker = c;
        coker_proj = cp;
    }
    let res = Resolution { base: m.clone(), augmentation: aug, terms, diffs, cap };
    check_resolution(&res)?;
    Ok(res)
}

fn check_resolution(res: &Resolution) -> Result<()> {
    // exact at M: augmentation mono
    if !res.augmentation.is_mono() {
        return Err(AlgError::Internal("augmentation is not mono".into()).into());
    }
    // exact at E^k: ker d^k = image of the previous map
    for k in 0..res.terms.len() {
        let incoming = if k == 0 {
            res.augmentation.matrix().column_space()
        } else {
            res.diffs[k - 1].matrix().column_space()
        };
        if k < res.diffs.len() {
            let ker = Subspace::from_columns(&res.diffs[k].matrix().kernel());
            if ker != incoming {
                return Err(AlgError::Internal(format!("resolution not exact at degree {k}")).into());
            }
        } else if res.terminated() && incoming.dim() != res.terms[k].dim() {
            return Err(AlgError::Internal("terminated resolution not exact at the end".into()).into());
        }
    }
    Ok(())
}

/// Local cohomology in all degrees 0..cap at once: cohomology of the
/// degreewise torsion part of the minimal injective resolution.
pub fn gamma_table(m: &Module, tau: &TorsionTheory, cap: usize) -> Result<Vec<Module>> {
    let res = min_injective_resolution(m, cap)?;
    let stored = res.stored_len();
    let mut parts: Vec<(Module, Morphism)> = Vec::with_capacity(stored);
    for k in 0..stored {
        parts.push(torsion_submodule(&res.term(k), tau)?);
    }
    let mut tdiffs: Vec<Morphism> = Vec::with_capacity(stored.saturating_sub(1));
    for k in 0..stored.saturating_sub(1) {
        // the torsion part is functorial: restrict the differential
        let restricted = res.diff(k).restrict(&parts[k].1, &parts[k + 1].1)?;
        tdiffs.push(restricted);
    }
    let mut out = Vec::with_capacity(cap);
    for n in 0..cap {
        if n >= stored {
            out.push(Module::zero(m.algebra().clone()));
            continue;
        }
        let t_n = &parts[n].0;
        let ker_space = if n < tdiffs.len() {
            Subspace::from_columns(&tdiffs[n].matrix().kernel())
        } else {
            Subspace::full(m.algebra().modulus(), t_n.dim())
        };
        let (k_mod, k_incl) = t_n.submodule(&ker_space)?;
        if n == 0 {
            out.push(k_mod);
            continue;
        }
        let image = tdiffs[n - 1].matrix().column_space();
        let image_in_k = k_incl
            .matrix()
            .solve(image.basis())
            .map_err(AlgError::from)?
            .ok_or_else(|| AlgError::Internal("boundary escapes the cycle module".into()))?;
        let (h, _) = k_mod.quotient(&image_in_k.column_space())?;
        out.push(h);
    }
    Ok(out)
}

/// n-th local cohomology with an explicit cap (cap must exceed n).
pub fn gamma(m: &Module, tau: &TorsionTheory, n: usize, cap: usize) -> Result<Module> {
    assert!(n < cap, "gamma requires n < cap");
    Ok(gamma_table(m, tau, cap)?.swap_remove(n))
}

pub use crate::report::ClauseOutcome;

/// Comparison checks for the derived torsion functor of a single module:
/// vanishing on torsion modules, the degree shift along the envelope
/// quotient, and the two descriptions of the first derived functor. All
/// clauses need stability of the theory; an unstable theory skips.
pub fn coho1_report(
    m: &Module,
    tau: &TorsionTheory,
    cap: usize,
) -> Result<Vec<(String, ClauseOutcome)>> {
    let mut out = Vec::new();
    if !is_stable(tau)? {
        let reason = "Hyp.1: theory is not stable".to_string();
        for id in [
            "torsion-module-higher-vanishing",
            "degree-shift-along-envelope-quotient",
            "first-derived-is-torsion-of-envelope-quotient",
            "first-derived-is-localization-over-module",
        ] {
            out.push((id.to_string(), ClauseOutcome::Skipped { reason: reason.clone() }));
        }
        return Ok(out);
    }
    let table = gamma_table(m, tau, cap)?;
    let torsion = tau.is_torsion(m)?;
    let torsion_free = tau.is_torsion_free(m)?;

    // torsion modules have no higher local cohomology
    out.push((
        "torsion-module-higher-vanishing".into(),
        if !torsion {
            ClauseOutcome::Skipped { reason: "module is not torsion".into() }
        } else if let Some(n) = (1..cap).find(|&n| table[n].dim() != 0) {
            ClauseOutcome::Fail { witness: format!("degree {n} has dimension {}", table[n].dim()) }
        } else {
            ClauseOutcome::Pass
        },
    ));

    // degree shift: Gamma^{n+1}(M) = Gamma^n(E(M)/M) for n > 0
    let (e, iota) = injective_envelope(m)?;
    let (eq, _) = e.quotient(&iota.matrix().column_space())?;
    let table_eq = gamma_table(&eq, tau, cap)?;
    let mut shift = ClauseOutcome::Pass;
    for n in 1..cap.saturating_sub(1) {
        if is_isomorphic(&table[n + 1], &table_eq[n])?.is_none() {
            shift = ClauseOutcome::Fail {
                witness: format!(
                    "degree {}: dims {} vs {}",
                    n + 1,
                    table[n + 1].dim(),
                    table_eq[n].dim()
                ),
            };
            break;
        }
    }
    out.push(("degree-shift-along-envelope-quotient".into(), shift));

    // for torsion-free M, Gamma^1(M) = T(E(M)/M)
    out.push((
        "first-derived-is-torsion-of-envelope-quotient".into(),
        if !torsion_free {
            ClauseOutcome::Skipped { reason: "module is not torsion-free".into() }
        } else {
            let (teq, _) = torsion_submodule(&eq, tau)?;
            if is_isomorphic(&table[1], &teq)?.is_some() {
                ClauseOutcome::Pass
            } else {
                ClauseOutcome::Fail { witness: format!("dims {} vs {}", table[1].dim(), teq.dim()) }
            }
        },
    ));

    // for torsion-free M, Gamma^1(M) = L(M)/M
    out.push((
        "first-derived-is-localization-over-module".into(),
        if !torsion_free {
            ClauseOutcome::Skipped { reason: "module is not torsion-free".into() }
        } else {
            let l = localize(m, tau)?;
            let (coker, _) = l.unit.cokernel();
            if is_isomorphic(&table[1], &coker)?.is_some() {
                ClauseOutcome::Pass
            } else {
                ClauseOutcome::Fail { witness: format!("dims {} vs {}", table[1].dim(), coker.dim()) }
            }
        },
    ));
    Ok(out)
}

/// The three vanishing statements on a battery, each hypothesis-gated:
/// stable+exact theories have nothing above degree one; vanishing windows
/// descend to specializations between stable theories; and under the full
/// hypothesis audit, cohomology dies above the relative dimension plus two.
pub fn vanishing_report(
    tau: &TorsionTheory,
    battery: &[Module],
    cap: usize,
) -> Result<Vec<(String, ClauseOutcome)>> {
    let a = tau.algebra();
    let mut out = Vec::new();
    let stable = is_stable(tau)?;

    // stable + exact: Gamma^n = 0 for n > 1, and locals are acyclic from 0 on
    let exactness = exactness_on_battery(tau, battery)?;
    let verdict = if !stable {
        ClauseOutcome::Skipped { reason: "Hyp.1: theory is not stable".into() }
    } else if let ExactnessVerdict::NotExact { witness } = &exactness {
        ClauseOutcome::Skipped { reason: format!("theory is not exact: {witness}") }
    } else {
        let mut v = ClauseOutcome::Pass;
        'outer: for (mi, m) in battery.iter().enumerate() {
            let table = gamma_table(m, tau, cap)?;
            for n in 2..cap {
                if table[n].dim() != 0 {
                    v = ClauseOutcome::Fail {
                        witness: format!("module #{mi}: degree {n} dim {}", table[n].dim()),
                    };
                    break 'outer;
                }
            }
            if tau.is_local(m)? && (table[0].dim() != 0 || table[1].dim() != 0) {
                v = ClauseOutcome::Fail {
                    witness: format!("local module #{mi} has cohomology in degree 0 or 1"),
                };
                break 'outer;
            }
        }
        v
    };
    out.push(("stable-exact-vanishing-above-one".into(), verdict));

    // vanishing windows descend to specializations among stable theories
    let verdict = if !stable {
        ClauseOutcome::Skipped { reason: "Hyp.1: theory is not stable".into() }
    } else {
        let mut v = ClauseOutcome::Pass;
        let smaller: Vec<TorsionTheory> = torsion::all_torsion_theories(a)?
            .into_iter()
            .filter(|t| t.le(tau) && t != tau)
            .collect();
        'outer2: for t2 in &smaller {
            if !is_stable(t2)? {
                continue;
            }
            for (mi, m) in battery.iter().enumerate() {
                let big = gamma_table(m, tau, cap)?;
                let small = gamma_table(m, t2, cap)?;
                for n in 0..cap {
                    if (0..=n).all(|i| big[i].dim() == 0) && !(0..=n).all(|i| small[i].dim() == 0) {
                        v = ClauseOutcome::Fail {
                            witness: format!(
                                "module #{mi}, window 0..={n}: vanishing for mask {} but not mask {}",
                                tau.mask(),
                                t2.mask()
                            ),
                        };
                        break 'outer2;
                    }
                }
            }
        }
        v
    };
    out.push(("vanishing-window-descends-to-specializations".into(), verdict));

    // dimension bound: Gamma^n = 0 once n exceeds rel. dimension + 2
    let audit = torsion::hypothesis_audit(a, battery)?;
    let verdict = if !stable {
        ClauseOutcome::Skipped { reason: "Hyp.1: theory is not stable".into() }
    } else if !audit.primes_all_exact() {
        ClauseOutcome::Skipped {
            reason: "Hyp.3: some prime theory is not exact on the battery".into(),
        }
    } else {
        let mut v = ClauseOutcome::Pass;
        'outer3: for (mi, m) in battery.iter().enumerate() {
            let bound = rel_gdim(m, tau)? + 2;
            let table = gamma_table(m, tau, cap)?;
            for n in 0..cap {
                if (n as i64) > bound && table[n].dim() != 0 {
                    v = ClauseOutcome::Fail {
                        witness: format!("module #{mi}: degree {n} nonzero beyond bound {bound}"),
                    };
                    break 'outer3;
                }
            }
        }
        v
    };
    out.push(("cohomology-bounded-by-relative-dimension".into(), verdict));
    Ok(out)
}

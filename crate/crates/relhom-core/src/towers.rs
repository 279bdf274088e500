//! Towers of half-bounded complexes: the truncation tower of a complex, the
//! finite inverse limit, the pullback-based fibration test, and the
//! verifier for the model-approximation axioms.
//!
//! Level k of a tower lives in complexes bounded below by -k; the structure
//! maps point down the tower into the inclusion of the previous level. For a
//! bounded complex the truncation tower stabilizes, and the finite limit of
//! compatible tuples recovers the complex — the desk shadow of the
//! homotopy-limit reconstruction.

use crate::algmod::AlgError;
use crate::chx::model::{
    class_membership_below, factor_cocyl, fibrant_replacement, is_tau_weq, BottomConvention,
};
use crate::chx::{
    chain_map_space, truncate, ChainSolver, ChxError, Complex, ComplexMorphism, LiftFailure,
};
use crate::fp::{FpMatrix, Subspace};
use crate::report::ClauseOutcome;
use crate::torsion::{localize, localize_morphism_between, Localization, TorsionTheory};
use std::collections::BTreeMap;

pub type Result<T> = std::result::Result<T, ChxError>;

/// A finite-depth tower: level k is a complex in Ch^{>= -k}, and each
/// structure map goes from level k+1 to level k.
#[derive(Clone, Debug)]
pub struct Tower {
    levels: Vec<Complex>,
    maps: Vec<ComplexMorphism>,
}

impl Tower {
    pub fn new(levels: Vec<Complex>, maps: Vec<ComplexMorphism>) -> Result<Self> {
        if levels.is_empty() {
            return Err(ChxError::Invalid("tower needs at least one level".into()));
        }
        if maps.len() + 1 != levels.len() {
            return Err(ChxError::Invalid("tower needs one structure map per step".into()));
        }
        for (k, level) in levels.iter().enumerate() {
            if let Some((lo, _)) = level.window() {
                if lo < -(k as i64) {
                    return Err(ChxError::Window(format!(
                        "level {k} starts at {lo}, below its bound {}",
                        -(k as i64)
                    )));
                }
            }
        }
        for (k, alpha) in maps.iter().enumerate() {
            if alpha.source() != &levels[k + 1] || alpha.target() != &levels[k] {
                return Err(ChxError::Invalid(format!("structure map {k} has wrong ends")));
            }
        }
        Ok(Tower { levels, maps })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &Complex {
        &self.levels[k]
    }

    /// Structure map level k+1 -> level k.
    pub fn map(&self, k: usize) -> &ComplexMorphism {
        &self.maps[k]
    }
}

/// Levelwise morphism of towers with commuting ladders.
#[derive(Clone, Debug)]
pub struct TowerMorphism {
    source: Tower,
    target: Tower,
    levels: Vec<ComplexMorphism>,
}

impl TowerMorphism {
    pub fn new(source: Tower, target: Tower, levels: Vec<ComplexMorphism>) -> Result<Self> {
        if levels.len() != source.levels.len() || levels.len() != target.levels.len() {
            return Err(ChxError::Invalid("level count mismatch".into()));
        }
        for (k, f) in levels.iter().enumerate() {
            if f.source() != source.level(k) || f.target() != target.level(k) {
                return Err(ChxError::Invalid(format!("level {k} morphism has wrong ends")));
            }
        }
        for k in 0..source.depth() {
            let down_then_f = source.map(k).then(&levels[k])?;
            let f_then_down = levels[k + 1].then(target.map(k))?;
            if down_then_f != f_then_down {
                return Err(ChxError::Invalid(format!("ladder does not commute at step {k}")));
            }
        }
        Ok(TowerMorphism { source, target, levels })
    }

    pub fn source(&self) -> &Tower {
        &self.source
    }
    pub fn target(&self) -> &Tower {
        &self.target
    }
    pub fn level(&self, k: usize) -> &ComplexMorphism {
        &self.levels[k]
    }
}

/// The truncation tower of a complex: level k is the truncation at -k, the
/// structure maps are the natural quotients between successive truncations.
pub fn tower_of(x: &Complex, depth: usize) -> Result<Tower> {
    let mut levels = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let (t, _) = truncate(x, -(k as i64))?;
        levels.push(t);
    }
    let mut maps = Vec::with_capacity(depth);
    for k in 0..depth {
        // truncating the deeper level reproduces the shallower level on the
        // nose, and the truncation quotient is the structure map
        let (again, alpha) = truncate(&levels[k + 1], -(k as i64))?;
        if again != levels[k] {
            return Err(ChxError::Invalid(
                "truncating a truncation did not reproduce the shallower level".into(),
            ));
        }
        let mut mats = BTreeMap::new();
        if let Some((lo, hi)) = levels[k + 1].window() {
            for n in lo..=hi {
                let m = alpha.matrix_at(n);
                if m.rows() > 0 && m.cols() > 0 {
                    mats.insert(n, m);
                }
            }
        }
        maps.push(ComplexMorphism::new(levels[k + 1].clone(), levels[k].clone(), mats)?);
    }
    Tower::new(levels, maps)
}

/// The natural quotients from the complex onto the tower levels.
pub fn tower_of_quotients(x: &Complex, depth: usize) -> Result<Vec<ComplexMorphism>> {
    (0..=depth).map(|k| Ok(truncate(x, -(k as i64))?.1)).collect()
}

/// Functorial action on a morphism: levelwise the unique map commuting with
/// the truncation quotients.
pub fn tower_of_morphism(phi: &ComplexMorphism, depth: usize) -> Result<TowerMorphism> {
    let src = tower_of(phi.source(), depth)?;
    let tgt = tower_of(phi.target(), depth)?;
    let src_q = tower_of_quotients(phi.source(), depth)?;
    let tgt_q = tower_of_quotients(phi.target(), depth)?;
    let mut levels = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let rhs = phi.then(&tgt_q[k])?;
        let mut solver = ChainSolver::new(src.level(k).clone(), tgt.level(k).clone());
        solver.require_compose_right(&src_q[k], &rhs);
        let f = solver.solve_affine()?.ok_or_else(|| {
            ChxError::Invalid("morphism does not descend to the truncations".into())
        })?;
        levels.push(f);
    }
    TowerMorphism::new(src, tgt, levels)
}

/// Degreewise limit of the finite chain of levels: the subcomplex of
/// compatible tuples in the product, together with the projections to the
/// levels.
pub struct TowerLimit {
    pub limit: Complex,
    pub projections: Vec<ComplexMorphism>,
}

pub fn tower_lim(t: &Tower) -> Result<TowerLimit> {
    let algebra = t.level(0).algebra().clone();
    let p = algebra.modulus();
    let refs: Vec<&Complex> = t.levels.iter().collect();
    let product = Complex::direct_sum(&refs)?;
    let Some((lo, hi)) = product.window() else {
        let z = Complex::zero(algebra);
        let projections = t.levels.iter().map(|lvl| ComplexMorphism::zero(&z, lvl)).collect();
        return Ok(TowerLimit { limit: z, projections });
    };
    // block projections out of the product, per degree
    let block_proj = |n: i64, k: usize| -> FpMatrix {
        let total = product.module_at(n).dim();
        let mut offset = 0;
        for lvl in t.levels.iter().take(k) {
            offset += lvl.module_at(n).dim();
        }
        let d = t.level(k).module_at(n).dim();
        let mut m = FpMatrix::zero(p, d, total);
        for r in 0..d {
            m.set(r, offset + r, 1);
        }
        m
    };
    // compatible tuples: alpha_k(x_{k+1}) = x_k in each degree
    let mut spaces: BTreeMap<i64, Subspace> = BTreeMap::new();
    for n in lo..=hi {
        let total = product.module_at(n).dim();
        let mut constraints = FpMatrix::zero(p, 0, total);
        for k in 0..t.depth() {
            let alpha = t.map(k).matrix_at(n);
            let diff = alpha
                .mul(&block_proj(n, k + 1))
                .map_err(AlgError::from)?
                .sub(&block_proj(n, k))
                .map_err(AlgError::from)?;
            constraints = constraints.vstack(&diff).map_err(AlgError::from)?;
        }
        spaces.insert(n, Subspace::from_columns(&constraints.kernel()));
    }
    let (limit, incl) = product.subcomplex(&spaces)?;
    let limit = limit.with_provenance("tower limit");
    let mut projections = Vec::with_capacity(t.levels.len());
    for k in 0..t.levels.len() {
        let mut maps = BTreeMap::new();
        if let Some((llo, lhi)) = limit.window() {
            for n in llo..=lhi {
                let m = block_proj(n, k).mul(&incl.matrix_at(n)).map_err(AlgError::from)?;
                maps.insert(n, m);
            }
        }
        projections.push(ComplexMorphism::new(limit.clone(), t.level(k).clone(), maps)?);
    }
    Ok(TowerLimit { limit, projections })
}

/// The canonical comparison from a complex into the limit of its truncation
/// tower (an isomorphism once the depth clears the window bottom).
pub fn limit_comparison(x: &Complex, depth: usize) -> Result<ComplexMorphism> {
    let t = tower_of(x, depth)?;
    let quots = tower_of_quotients(x, depth)?;
    let lim = tower_lim(&t)?;
    compare_into_limit(x, &quots, &lim)
}

/// Map z -> lim given compatible maps z -> level_k.
pub fn compare_into_limit(
    z: &Complex,
    legs: &[ComplexMorphism],
    lim: &TowerLimit,
) -> Result<ComplexMorphism> {
    let p = z.algebra().modulus();
    let mut maps = BTreeMap::new();
    if let Some((lo, hi)) = z.window() {
        for n in lo..=hi {
            let src_dim = z.module_at(n).dim();
            let mut stacked = FpMatrix::zero(p, 0, src_dim);
            for leg in legs {
                stacked = stacked.vstack(&leg.matrix_at(n)).map_err(AlgError::from)?;
            }
            // the limit includes into the product with the same stacked shape
            let mut incl = FpMatrix::zero(p, 0, lim.limit.module_at(n).dim());
            for proj in &lim.projections {
                incl = incl.vstack(&proj.matrix_at(n)).map_err(AlgError::from)?;
            }
            let coords = incl
                .solve(&stacked)
                .map_err(AlgError::from)?
                .ok_or_else(|| ChxError::Invalid("legs are not compatible with the limit".into()))?;
            maps.insert(n, coords);
        }
    }
    ComplexMorphism::new(z.clone(), lim.limit.clone(), maps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerFlags {
    pub in_w: bool,
    pub in_b: bool,
    pub in_c: bool,
}

/// Class membership in the tower category: weak equivalences and
/// cofibrations are levelwise; fibrations go through the levelwise pullback
/// against the previous level.
pub fn tower_classes(f: &TowerMorphism, tau: &TorsionTheory) -> Result<TowerFlags> {
    let mut in_w = true;
    let mut in_c = true;
    for k in 0..f.levels.len() {
        let flags =
            class_membership_below(f.level(k), tau, -(k as i64), BottomConvention::Strict, None)?;
        in_w &= flags.in_w;
        in_c &= flags.in_c;
    }
    let mut in_b = {
        let flags = class_membership_below(f.level(0), tau, 0, BottomConvention::Strict, None)?;
        flags.in_b
    };
    for k in 1..f.levels.len() {
        if !in_b {
            break;
        }
        let test = fibration_test_map(f, k)?;
        let flags = class_membership_below(
            &test.universal,
            tau,
            -(k as i64),
            BottomConvention::Strict,
            None,
        )?;
        in_b &= flags.in_b;
    }
    Ok(TowerFlags { in_w, in_b, in_c })
}

/// The pullback of a tower morphism against the previous level, with the
/// universal comparison out of the current source level.
pub struct FibrationTest {
    pub pullback: Complex,
    pub universal: ComplexMorphism,
    pub proj_current: ComplexMorphism,
    pub proj_previous: ComplexMorphism,
}

/// Pullback b_k x_{b_{k-1}} a_{k-1} computed as a kernel of difference maps,
/// and the universal map a_k -> pullback with components (f_k, alpha_k).
pub fn fibration_test_map(f: &TowerMorphism, k: usize) -> Result<FibrationTest> {
    let b_k = f.target().level(k);
    let a_prev = f.source().level(k - 1);
    let algebra = b_k.algebra().clone();
    let p = algebra.modulus();
    let pair = Complex::direct_sum(&[b_k, a_prev])?;
    let beta = f.target().map(k - 1); // b_k -> b_{k-1}
    let f_prev = f.level(k - 1); // a_{k-1} -> b_{k-1}
    let mut spaces: BTreeMap<i64, Subspace> = BTreeMap::new();
    if let Some((lo, hi)) = pair.window() {
        for n in lo..=hi {
            let bdim = b_k.module_at(n).dim();
            let adim = a_prev.module_at(n).dim();
            let out = f.target().level(k - 1).module_at(n).dim();
            let mut diff = FpMatrix::zero(p, out, bdim + adim);
            let bm = beta.matrix_at(n);
            for r in 0..out {
                for c in 0..bdim {
                    diff.set(r, c, bm.get(r, c));
                }
            }
            let fm = f_prev.matrix_at(n);
            for r in 0..out {
                for c in 0..adim {
                    let v = fm.get(r, c);
                    if v != 0 {
                        diff.set(r, bdim + c, (p - v) % p);
                    }
                }
            }
            spaces.insert(n, Subspace::from_columns(&diff.kernel()));
        }
    }
    let (pullback, incl) = pair.subcomplex(&spaces)?;
    // the two projections off the pullback
    let mut proj_b_maps = BTreeMap::new();
    let mut proj_a_maps = BTreeMap::new();
    if let Some((lo, hi)) = pullback.window() {
        for n in lo..=hi {
            let bdim = b_k.module_at(n).dim();
            let adim = a_prev.module_at(n).dim();
            let total = bdim + adim;
            let mut pb = FpMatrix::zero(p, bdim, total);
            for r in 0..bdim {
                pb.set(r, r, 1);
            }
            let mut pa = FpMatrix::zero(p, adim, total);
            for r in 0..adim {
                pa.set(r, bdim + r, 1);
            }
            proj_b_maps.insert(n, pb.mul(&incl.matrix_at(n)).map_err(AlgError::from)?);
            proj_a_maps.insert(n, pa.mul(&incl.matrix_at(n)).map_err(AlgError::from)?);
        }
    }
    let proj_current = ComplexMorphism::new(pullback.clone(), b_k.clone(), proj_b_maps)?;
    let proj_previous = ComplexMorphism::new(pullback.clone(), a_prev.clone(), proj_a_maps)?;
    // universal map: components (f_k, alpha_k)
    let a_k = f.source().level(k);
    let alpha = f.source().map(k - 1);
    let f_k = f.level(k);
    let mut maps = BTreeMap::new();
    if let Some((lo, hi)) = a_k.window() {
        for n in lo..=hi {
            let stacked = f_k.matrix_at(n).vstack(&alpha.matrix_at(n)).map_err(AlgError::from)?;
            let coords = incl
                .matrix_at(n)
                .solve(&stacked)
                .map_err(AlgError::from)?
                .ok_or_else(|| ChxError::Invalid("universal map misses the pullback".into()))?;
            maps.insert(n, coords);
        }
    }
    let universal = ComplexMorphism::new(a_k.clone(), pullback.clone(), maps)?;
    Ok(FibrationTest { pullback, universal, proj_current, proj_previous })
}

/// Localize a complex degreewise (functorial differentials), returning the
/// localized complex and the degreewise unit.
pub fn localize_complex(x: &Complex, tau: &TorsionTheory) -> Result<(Complex, ComplexMorphism)> {
    let algebra = x.algebra().clone();
    let Some((lo, hi)) = x.window() else {
        let z = Complex::zero(algebra);
        return Ok((z.clone(), ComplexMorphism::zero(x, &z)));
    };
    let locs: Vec<Localization> = (lo..=hi)
        .map(|n| localize(&x.module_at(n), tau))
        .collect::<std::result::Result<_, _>>()?;
    let modules = locs.iter().map(|l| l.local.clone()).collect();
    let mut diffs = Vec::new();
    for n in lo..hi {
        let i = (n - lo) as usize;
        diffs.push(localize_morphism_between(&x.diff_at(n), &locs[i], &locs[i + 1])?);
    }
    let lx = Complex::from_parts(algebra, lo, modules, diffs)?.with_provenance("localization");
    let mut maps = BTreeMap::new();
    for n in lo..=hi {
        let unit = &locs[(n - lo) as usize].unit;
        if unit.matrix().rows() > 0 && unit.matrix().cols() > 0 {
            maps.insert(n, unit.matrix().clone());
        }
    }
    let unit = ComplexMorphism::new(x.clone(), lx.clone(), maps)?;
    Ok((lx, unit))
}

/// Localize a morphism degreewise: the unique map commuting with the units.
pub fn localize_complex_morphism(
    phi: &ComplexMorphism,
    lsrc: &(Complex, ComplexMorphism),
    ltgt: &(Complex, ComplexMorphism),
) -> Result<ComplexMorphism> {
    let rhs = phi.then(&ltgt.1)?;
    let mut solver = ChainSolver::new(lsrc.0.clone(), ltgt.0.clone());
    solver.require_compose_right(&lsrc.1, &rhs);
    solver
        .solve_affine()?
        .ok_or_else(|| ChxError::Invalid("localization is not functorial on this morphism".into()))
}

/// A fibrant tower over a complex: levelwise relative injective resolutions
/// of the truncations, with fibration structure maps obtained by factoring
/// the lifted comparisons. Returns the tower and the comparison from the
/// truncation tower.
pub fn fibrant_tower_of(
    z: &Complex,
    tau: &TorsionTheory,
    depth: usize,
) -> Result<(Tower, TowerMorphism)> {
    let base = tower_of(z, depth)?;
    let mut levels: Vec<Complex> = Vec::with_capacity(depth + 1);
    let mut maps: Vec<ComplexMorphism> = Vec::with_capacity(depth);
    let mut etas: Vec<ComplexMorphism> = Vec::with_capacity(depth + 1);
    let reserve = depth + 2;
    let r0 = fibrant_replacement(base.level(0), tau, reserve)?;
    if r0.certified_below.is_some() {
        return Err(ChxError::Unterminated(
            "fibrant tower needs terminating replacements at this depth".into(),
        ));
    }
    levels.push(r0.replacement);
    etas.push(r0.rho);
    for k in 0..depth {
        let rk1 = fibrant_replacement(base.level(k + 1), tau, reserve)?;
        if rk1.certified_below.is_some() {
            return Err(ChxError::Unterminated(
                "fibrant tower needs terminating replacements at this depth".into(),
            ));
        }
        // lift the structure map through the replacement
        let top = base.map(k).then(&etas[k])?;
        let mut solver = ChainSolver::new(rk1.replacement.clone(), levels[k].clone());
        solver.require_compose_right(&rk1.rho, &top);
        let alpha_tilde = solver.solve_affine()?.ok_or_else(|| {
            ChxError::NoLift(LiftFailure::Falsified("structure map does not lift".into()))
        })?;
        // make the structure map a fibration
        let fact = factor_cocyl(&alpha_tilde, tau, reserve)?;
        if fact.certified_below.is_some() {
            return Err(ChxError::Unterminated(
                "fibrant tower needs terminating factorizations at this depth".into(),
            ));
        }
        etas.push(rk1.rho.then(&fact.acyclic_cofibration)?);
        levels.push(fact.mid);
        maps.push(fact.fibration);
    }
    let tower = Tower::new(levels, maps)?;
    let eta = TowerMorphism::new(base, tower.clone(), etas)?;
    Ok((tower, eta))
}

/// Lift a weak equivalence of complexes to a morphism between the generated
/// fibrant towers, strictly commuting with the ladders.
pub fn lift_to_fibrant_towers(
    phi: &ComplexMorphism,
    src: &(Tower, TowerMorphism),
    tgt: &(Tower, TowerMorphism),
    depth: usize,
) -> Result<TowerMorphism> {
    let phi_tow = tower_of_morphism(phi, depth)?;
    let mut levels: Vec<ComplexMorphism> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let top = phi_tow.level(k).then(tgt.1.level(k))?;
        let mut solver = ChainSolver::new(src.0.level(k).clone(), tgt.0.level(k).clone());
        solver.require_compose_right(src.1.level(k), &top);
        if k > 0 {
            // ladder: beta . f_k = f_{k-1} . alpha
            let rhs = src.0.map(k - 1).then(&levels[k - 1])?;
            solver.require_compose_left(tgt.0.map(k - 1), &rhs);
        }
        let f = solver.solve_affine()?.ok_or_else(|| {
            ChxError::NoLift(LiftFailure::Falsified(format!(
                "no strictly commuting comparison at level {k}"
            )))
        })?;
        levels.push(f);
    }
    TowerMorphism::new(src.0.clone(), tgt.0.clone(), levels)
}

/// Axiom-by-axiom verification of the composite model approximation: the
/// localization adjunction followed by the truncation-tower adjunction.
pub fn verify_model_approximation(
    tau: &TorsionTheory,
    battery: &[Complex],
    depth: usize,
) -> Result<Vec<(String, ClauseOutcome)>> {
    // shared per-complex data: localization and generated fibrant tower
    let localized: Vec<(Complex, ComplexMorphism)> =
        battery.iter().map(|x| localize_complex(x, tau)).collect::<Result<_>>()?;
    let fibrant: Vec<(Tower, TowerMorphism)> =
        localized.iter().map(|(lx, _)| fibrant_tower_of(lx, tau, depth)).collect::<Result<_>>()?;
    // weak equivalences between localized battery complexes, by source/target
    let mut weqs: Vec<(usize, usize, ComplexMorphism)> = Vec::new();
    for (i, (lx, _)) in localized.iter().enumerate() {
        for (j, (ly, _)) in localized.iter().enumerate() {
            for psi in chain_map_space(lx, ly)? {
                if is_tau_weq(&psi, tau)? {
                    weqs.push((i, j, psi));
                }
            }
        }
    }

    let mut out = Vec::new();
    out.push(("adjunction-triangles".into(), check_adjunction_triangles(tau, battery, depth)?));
    out.push((
        "left-functor-preserves-equivalences".into(),
        check_ma2(tau, battery, &localized, depth)?,
    ));
    out.push((
        "right-functor-on-fibrant-equivalences".into(),
        check_ma3(tau, &weqs, &fibrant, depth)?,
    ));
    out.push((
        "adjoint-of-fibrant-equivalence".into(),
        check_ma4(tau, &localized, &fibrant, depth)?,
    ));
    out.push((
        "localization-leg-compatibility".into(),
        check_compatibility(tau, battery, &localized, &weqs)?,
    ));
    Ok(out)
}

/// Both adjunctions have honest units and counits: the truncation triangles
/// compose to the identity, the localization unit is idempotent-coherent,
/// and the hom sets across the truncation adjunction agree in dimension.
fn check_adjunction_triangles(
    tau: &TorsionTheory,
    battery: &[Complex],
    depth: usize,
) -> Result<ClauseOutcome> {
    for (ci, x) in battery.iter().enumerate() {
        for k in 0..=depth {
            let cut = -(k as i64);
            let (t, q) = truncate(x, cut)?;
            // counit on an already-truncated complex is the identity
            let (tt, qq) = truncate(&t, cut)?;
            if tt != t || !qq.is_iso() {
                return Ok(ClauseOutcome::Fail {
                    witness: format!("battery #{ci}, cut {cut}: counit is not the identity"),
                });
            }
            // unit triangle: truncating the quotient map is invertible
            let q_tow = tower_of_morphism(&q, k)?;
            if !q_tow.level(k).is_iso() {
                return Ok(ClauseOutcome::Fail {
                    witness: format!("battery #{ci}, cut {cut}: triangle composite not invertible"),
                });
            }
        }
        // localization unit: L(unit) and unit-of-the-localization agree and
        // are isomorphisms
        if let Some((lo, hi)) = x.window() {
            for n in lo..=hi {
                let m = x.module_at(n);
                let l = localize(&m, tau)?;
                let ll = localize(&l.local, tau)?;
                let l_of_unit = localize_morphism_between(&l.unit, &l, &ll)?;
                if l_of_unit.matrix() != ll.unit.matrix() || !ll.unit.is_iso() {
                    return Ok(ClauseOutcome::Fail {
                        witness: format!(
                            "battery #{ci}, degree {n}: localization unit is not coherent"
                        ),
                    });
                }
            }
        }
    }
    // hom-dimension form of the truncation adjunction, exhaustively over the
    // battery: maps out of the truncation match maps out of the complex into
    // anything supported above the cut
    for x in battery {
        for y in battery {
            for k in 0..=depth {
                let cut = -(k as i64);
                if y.window().is_some_and(|(lo, _)| lo < cut) {
                    continue;
                }
                let (tx, _) = truncate(x, cut)?;
                let below = chain_map_space(&tx, y)?.len();
                let above = chain_map_space(x, y)?.len();
                if below != above {
                    return Ok(ClauseOutcome::Fail {
                        witness: format!(
                            "hom dimensions differ across the adjunction at cut {cut}: {below} vs {above}"
                        ),
                    });
                }
            }
        }
    }
    let _ = tau;
    Ok(ClauseOutcome::Pass)
}

/// Battery weak equivalences map to levelwise tower equivalences after
/// localization.
fn check_ma2(
    tau: &TorsionTheory,
    battery: &[Complex],
    localized: &[(Complex, ComplexMorphism)],
    depth: usize,
) -> Result<ClauseOutcome> {
    for (i, x) in battery.iter().enumerate() {
        for (j, y) in battery.iter().enumerate() {
            for (mi, phi) in chain_map_space(x, y)?.into_iter().enumerate() {
                if !is_tau_weq(&phi, tau)? {
                    continue;
                }
                let lphi = localize_complex_morphism(&phi, &localized[i], &localized[j])?;
                let tow = tower_of_morphism(&lphi, depth)?;
                let flags = tower_classes(&tow, tau)?;
                if !flags.in_w {
                    return Ok(ClauseOutcome::Fail {
                        witness: format!(
                            "weak equivalence #{mi}: {i} -> {j} does not stay one in the tower"
                        ),
                    });
                }
            }
        }
    }
    Ok(ClauseOutcome::Pass)
}

/// Equivalences between generated fibrant towers pull back to relative weak
/// equivalences under limit-then-inclusion.
fn check_ma3(
    tau: &TorsionTheory,
    weqs: &[(usize, usize, ComplexMorphism)],
    fibrant: &[(Tower, TowerMorphism)],
    depth: usize,
) -> Result<ClauseOutcome> {
    // fibrancy of the generated towers
    for (ti, (t, _)) in fibrant.iter().enumerate() {
        for k in 0..t.depth() {
            let flags = class_membership_below(
                t.map(k),
                tau,
                -((k + 1) as i64),
                BottomConvention::Strict,
                None,
            )?;
            if !flags.in_b {
                return Ok(ClauseOutcome::Fail {
                    witness: format!("generated tower #{ti}: structure map {k} is not a fibration"),
                });
            }
        }
    }
    for (i, j, psi) in weqs {
        let f = lift_to_fibrant_towers(psi, &fibrant[*i], &fibrant[*j], depth)?;
        let flags = tower_classes(&f, tau)?;
        if !flags.in_w {
            return Ok(ClauseOutcome::Fail {
                witness: format!("lifted comparison {i} -> {j} is not a tower equivalence"),
            });
        }
        let lim_src = tower_lim(f.source())?;
        let lim_tgt = tower_lim(f.target())?;
        let legs: Vec<ComplexMorphism> = (0..=depth)
            .map(|k| lim_src.projections[k].then(f.level(k)))
            .collect::<Result<_>>()?;
        let lim_f = compare_into_limit(&lim_src.limit, &legs, &lim_tgt)?;
        if !is_tau_weq(&lim_f, tau)? {
            return Ok(ClauseOutcome::Fail {
                witness: format!("limit of the comparison {i} -> {j} is not a weak equivalence"),
            });
        }
    }
    Ok(ClauseOutcome::Pass)
}

/// The adjoint of an equivalence into a generated fibrant tower is an
/// equivalence.
fn check_ma4(
    tau: &TorsionTheory,
    localized: &[(Complex, ComplexMorphism)],
    fibrant: &[(Tower, TowerMorphism)],
    depth: usize,
) -> Result<ClauseOutcome> {
    for (i, ((ly, unit), (t, eta))) in localized.iter().zip(fibrant).enumerate() {
        for k in 0..=depth {
            if !is_tau_weq(eta.level(k), tau)? {
                return Ok(ClauseOutcome::Fail {
                    witness: format!("battery #{i}: generator map at level {k} not an equivalence"),
                });
            }
        }
        let lim = tower_lim(t)?;
        let quots = tower_of_quotients(ly, depth)?;
        let legs: Vec<ComplexMorphism> =
            (0..=depth).map(|k| quots[k].then(eta.level(k))).collect::<Result<_>>()?;
        let into_lim = compare_into_limit(ly, &legs, &lim)?;
        let adjoint = unit.then(&into_lim)?;
        if !is_tau_weq(&adjoint, tau)? {
            return Ok(ClauseOutcome::Fail {
                witness: format!("battery #{i}: adjoint comparison is not a weak equivalence"),
            });
        }
    }
    Ok(ClauseOutcome::Pass)
}

/// Compatibility of the localization adjunction with both equivalence
/// classes: preserved by the left leg, by the right leg, and on adjoints.
fn check_compatibility(
    tau: &TorsionTheory,
    battery: &[Complex],
    localized: &[(Complex, ComplexMorphism)],
    weqs: &[(usize, usize, ComplexMorphism)],
) -> Result<ClauseOutcome> {
    // left leg preserves
    for (i, x) in battery.iter().enumerate() {
        for (j, y) in battery.iter().enumerate() {
            for (mi, phi) in chain_map_space(x, y)?.into_iter().enumerate() {
                if !is_tau_weq(&phi, tau)? {
                    continue;
                }
                let lphi = localize_complex_morphism(&phi, &localized[i], &localized[j])?;
                if !is_tau_weq(&lphi, tau)? {
                    return Ok(ClauseOutcome::Fail {
                        witness: format!("localization broke equivalence #{mi}: {i} -> {j}"),
                    });
                }
            }
        }
    }
    // right leg preserves (inclusion of local representatives) and the
    // adjoint of an equivalence out of a localization is an equivalence
    for (i, j, psi) in weqs {
        if !is_tau_weq(psi, tau)? {
            return Ok(ClauseOutcome::Fail {
                witness: format!("inclusion broke equivalence {i} -> {j}"),
            });
        }
        let adjoint = localized[*i].1.then(psi)?;
        if !is_tau_weq(&adjoint, tau)? {
            return Ok(ClauseOutcome::Fail {
                witness: format!("adjoint of equivalence {i} -> {j} is not one"),
            });
        }
    }
    Ok(ClauseOutcome::Pass)
}

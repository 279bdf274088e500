//! Structure theory: simple modules, primitive idempotents, projective
//! covers, socles, injective envelopes and isomorphism testing.
//!
//! Restriction: the semisimple quotient must split over the prime field
//! (every fixture does); a non-split quotient is rejected with `NonSplit`.

use super::{basis_vec, AlgError, Algebra, Module, ModuleData, Morphism};
use crate::fp::{enumerate_vectors, FpMatrix, Subspace};

/// Cap for exhaustive searches over hom-space coefficient vectors.
const SWEEP_CAP: usize = 1 << 20;

impl Algebra {
    /// Pairwise non-isomorphic simple modules, in a canonical order
    /// (sorted by dimension, then by action matrices). Cached.
    pub fn simples(&self) -> Result<Vec<Module>, AlgError> {
        let data = self
            .inner
            .cache
            .simples
            .get_or_init(|| compute_simples(self))
            .clone()?;
        Ok(data.iter().map(|d| Module::from_data(self.clone(), d)).collect())
    }

    /// One lifted primitive idempotent per simple index; Ae_i is the
    /// projective cover of S_i. Cached.
    pub fn primitive_idempotents(&self) -> Result<Vec<Vec<u64>>, AlgError> {
        self.inner
            .cache
            .primitive_idempotents
            .get_or_init(|| compute_primitive_idempotents(self))
            .clone()
    }

    /// Indecomposable injective E(S_i) together with the socle inclusion
    /// S_i -> E(S_i). Cached.
    pub fn indecomposable_injective(&self, i: usize) -> Result<(Module, Morphism), AlgError> {
        let list = self
            .inner
            .cache
            .injectives
            .get_or_init(|| compute_injectives(self))
            .clone()?;
        let (data, socle_matrix) = &list[i];
        let e = Module::from_data(self.clone(), data);
        let s = self.simples()?[i].clone();
        let incl = Morphism::new(s, e.clone(), socle_matrix.clone())?;
        Ok((e, incl))
    }

    pub fn num_simples(&self) -> Result<usize, AlgError> {
        Ok(self.simples()?.len())
    }
}

fn compute_simples(a: &Algebra) -> Result<Vec<ModuleData>, AlgError> {
    let (ss, proj, _section) = a.semisimple_quotient();
    let idempotents = central_primitive_idempotents(&ss)?;
    let regular = ss.regular_module();
    let mut simples: Vec<ModuleData> = Vec::new();
    for c in &idempotents {
        let seed = FpMatrix::col_vec(ss.modulus(), c);
        let block_space = regular.spin(&seed);
        let simple_sub = shrink_to_simple(&regular, block_space)?;
        let (simple_b, _) = regular.submodule(&simple_sub)?;
        // pull the action back along A -> A/rad
        let d = a.dim();
        let mut action = Vec::with_capacity(d);
        for i in 0..d {
            let image = proj.mul(&FpMatrix::col_vec(a.modulus(), &basis_vec(d, i))).unwrap();
            action.push(simple_b.act(&image.col(0)));
        }
        simples.push(ModuleData { dim: simple_b.dim(), action });
    }
    // canonical order: by dimension, then modules on which earlier basis
    // idempotents act first
    simples.sort_by(|x, y| {
        x.dim.cmp(&y.dim).then_with(|| {
            let kx: Vec<&[u64]> = x.action.iter().map(FpMatrix::flat).collect();
            let ky: Vec<&[u64]> = y.action.iter().map(FpMatrix::flat).collect();
            ky.cmp(&kx)
        })
    });
    // sanity: no duplicates (blocks give non-isomorphic simples)
    for w in simples.windows(2) {
        if w[0] == w[1] {
            return Err(AlgError::Internal("duplicate simple module".into()));
        }
    }
    Ok(simples)
}

/// Primitive idempotents of the center of a split semisimple algebra,
/// sorted lexicographically. Detects a non-split quotient.
fn central_primitive_idempotents(ss: &Algebra) -> Result<Vec<Vec<u64>>, AlgError> {
    let p = ss.modulus();
    let center = ss.center();
    let mut idempotents: Vec<Vec<u64>> = vec![ss.unit().to_vec()];
    for zi in 0..center.dim() {
        let z = center.basis().col(zi);
        let mut refined = Vec::new();
        for e in &idempotents {
            let w = ss.mult(&z, e); // lies in the block eZ
            // minimal polynomial of w relative to the block identity e
            let powers = block_powers(ss, e, &w);
            let (min_coeffs, deg) = minimal_relation(p, &powers)?;
            // roots of the monic minimal polynomial
            let roots: Vec<u64> = (0..p).filter(|&l| eval_poly(p, &min_coeffs, deg, l) == 0).collect();
            if roots.len() != deg {
                return Err(AlgError::NonSplit(format!(
                    "central element has a minimal polynomial with an irreducible factor of degree > 1 \
                     ({} roots for degree {})",
                    roots.len(),
                    deg
                )));
            }
            if deg == 1 {
                refined.push(e.clone());
                continue;
            }
            for &lambda in &roots {
                // e_lambda = prod_{mu != lambda} (w - mu e)/(lambda - mu)
                let mut acc = e.clone();
                for &mu in &roots {
                    if mu == lambda {
                        continue;
                    }
                    let factor = sub_scaled(p, &w, mu, e);
                    let scale = mod_inv(p, (lambda + p - mu) % p);
                    acc = scale_vec(p, &ss.mult(&acc, &factor), scale);
                }
                debug_assert_eq!(ss.mult(&acc, &acc), acc, "block projector must be idempotent");
                refined.push(acc);
            }
        }
        idempotents = refined;
    }
    idempotents.sort();
    // certificates
    let mut sum = vec![0u64; ss.dim()];
    for e in &idempotents {
        if ss.mult(e, e) != *e {
            return Err(AlgError::Internal("central splitting produced a non-idempotent".into()));
        }
        for f in &idempotents {
            if e != f && ss.mult(e, f).iter().any(|&x| x != 0) {
                return Err(AlgError::Internal("central idempotents are not orthogonal".into()));
            }
        }
        for (s, &x) in sum.iter_mut().zip(e.iter()) {
            *s = (*s + x) % p;
        }
    }
    if sum != ss.unit() {
        return Err(AlgError::Internal("central idempotents do not sum to 1".into()));
    }
    Ok(idempotents)
}

/// Powers e, w, w^2, ... of w inside the block with identity e, until linear
/// dependence must appear.
fn block_powers(ss: &Algebra, e: &[u64], w: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![e.to_vec()];
    let mut cur = e.to_vec();
    for _ in 0..ss.dim() {
        cur = ss.mult(&cur, w);
        out.push(cur.clone());
    }
    out
}

/// Smallest k with powers[k] in the span of powers[0..k]; returns the
/// coefficients expressing it and k.
fn minimal_relation(p: u64, powers: &[Vec<u64>]) -> Result<(Vec<u64>, usize), AlgError> {
    let n = powers[0].len();
    for k in 1..powers.len() {
        let prev = FpMatrix::from_cols(p, n, &powers[..k].to_vec())
            .map_err(AlgError::from)?;
        let target = FpMatrix::col_vec(p, &powers[k]);
        if let Some(sol) = prev.solve(&target).map_err(AlgError::from)? {
            return Ok((sol.col(0), k));
        }
    }
    Err(AlgError::Internal("no minimal relation found".into()))
}

/// Evaluate x^deg - sum coeffs[i] x^i at x = lambda.
fn eval_poly(p: u64, coeffs: &[u64], deg: usize, lambda: u64) -> u64 {
    let mut pow = 1u64;
    let mut acc = 0u64;
    for &c in coeffs.iter().take(deg) {
        acc = (acc + c * pow) % p;
        pow = pow * lambda % p;
    }
    // pow = lambda^deg now
    (pow + p - acc) % p
}

fn mod_inv(p: u64, a: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn sub_scaled(p: u64, w: &[u64], mu: u64, e: &[u64]) -> Vec<u64> {
    w.iter().zip(e).map(|(&a, &b)| (a + (p - mu % p) % p * b) % p).collect()
}

fn scale_vec(p: u64, v: &[u64], c: u64) -> Vec<u64> {
    v.iter().map(|&a| a * c % p).collect()
}

/// Shrink a submodule of the regular module of a split semisimple algebra to
/// a simple one by cutting along non-invertible endomorphisms.
fn shrink_to_simple(regular: &Module, mut space: Subspace) -> Result<Subspace, AlgError> {
    loop {
        let (u, incl) = regular.submodule(&space)?;
        let endos = super::hom_space(&u, &u)?;
        if endos.len() <= 1 {
            return Ok(space);
        }
        let p = regular.algebra().modulus();
        fn consider(best: &mut Option<Morphism>, m: &Morphism) {
            if m.is_zero() || m.is_iso() {
                return;
            }
            let better = match best {
                None => true,
                Some(b) => m.matrix().rank() < b.matrix().rank(),
            };
            if better {
                *best = Some(m.clone());
            }
        }
        let mut best: Option<Morphism> = None;
        for e in &endos {
            consider(&mut best, e);
        }
        if best.is_none() {
            let total = (p as u128).saturating_pow(endos.len() as u32);
            if total > SWEEP_CAP as u128 {
                return Err(AlgError::SearchExhausted(
                    "no singular endomorphism found within the sweep bound".into(),
                ));
            }
            for coeffs in enumerate_vectors(p, endos.len(), SWEEP_CAP) {
                let mut m = Morphism::zero(&u, &u);
                for (c, e) in coeffs.iter().zip(&endos) {
                    if *c != 0 {
                        m = m.add(&e.scale(*c))?;
                    }
                }
                consider(&mut best, &m);
            }
        }
        let phi = best.ok_or_else(|| {
            AlgError::Internal("endomorphism algebra of a semisimple module has no singular element".into())
        })?;
        let (im, im_incl) = phi.image();
        debug_assert!(im.dim() > 0 && im.dim() < u.dim());
        let embedded = incl.matrix().mul(im_incl.matrix()).map_err(AlgError::from)?;
        space = Subspace::from_columns(&embedded);
    }
}

fn compute_primitive_idempotents(a: &Algebra) -> Result<Vec<Vec<u64>>, AlgError> {
    let simples = a.simples()?;
    let (ss, proj, section) = a.semisimple_quotient();
    let regular_ss = ss.regular_module();
    let d = a.dim();
    let p = a.modulus();
    let mut out = Vec::with_capacity(simples.len());
    for s in &simples {
        // the corresponding simple over the quotient
        let mut ss_action = Vec::with_capacity(ss.dim());
        for i in 0..ss.dim() {
            ss_action.push(s.act(&section.col(i)));
        }
        let s_ss = Module::new(ss.clone(), s.dim(), ss_action)
            .map_err(|e| AlgError::Internal(format!("simple does not descend to A/rad: {e}")))?;
        // a minimal left ideal isomorphic to it: cut the regular module by a
        // rank-minimal morphism from S
        let maps = super::hom_space(&s_ss, &regular_ss)?;
        let first = maps
            .iter()
            .find(|m| m.is_mono())
            .ok_or_else(|| AlgError::Internal("simple does not embed into the regular module".into()))?;
        let ideal = first.matrix().column_space();
        // right identity of the minimal left ideal
        let k = ideal.dim();
        let mut system = FpMatrix::zero(p, ss.dim() * k, k);
        let mut rhs = FpMatrix::zero(p, ss.dim() * k, 1);
        for j in 0..k {
            let uj = ideal.basis().col(j);
            for c in 0..k {
                let prod = ss.mult(&uj, &ideal.basis().col(c));
                for r in 0..ss.dim() {
                    system.set(j * ss.dim() + r, c, prod[r]);
                }
            }
            for r in 0..ss.dim() {
                rhs.set(j * ss.dim() + r, 0, uj[r]);
            }
        }
        let alpha = system
            .solve(&rhs)
            .map_err(AlgError::from)?
            .ok_or_else(|| AlgError::Internal("minimal left ideal has no right identity".into()))?;
        let e_bar_mat = ideal.basis().mul(&alpha).map_err(AlgError::from)?;
        let e_bar = e_bar_mat.col(0);
        if ss.mult(&e_bar, &e_bar) != e_bar || e_bar.iter().all(|&x| x == 0) {
            return Err(AlgError::Internal("right identity is not a nonzero idempotent".into()));
        }
        // lift along the nilpotent radical: x -> x^(p^m) converges inside F_p[x]
        let x = section.mul(&e_bar_mat).map_err(AlgError::from)?.col(0);
        let mut power = 1u64;
        let mut lifted = x.clone();
        for _ in 0..=d {
            power = power.saturating_mul(p);
            lifted = a.elt_pow(&x, power);
            if a.mult(&lifted, &lifted) == lifted {
                break;
            }
        }
        if a.mult(&lifted, &lifted) != lifted {
            return Err(AlgError::Internal("idempotent lifting failed".into()));
        }
        let back = proj.mul(&FpMatrix::col_vec(p, &lifted)).map_err(AlgError::from)?;
        if back.col(0) != e_bar {
            return Err(AlgError::Internal("lifted idempotent has wrong reduction".into()));
        }
        out.push(lifted);
    }
    Ok(out)
}

fn compute_injectives(a: &Algebra) -> Result<Vec<(ModuleData, FpMatrix)>, AlgError> {
    let simples = a.simples()?;
    let mut out = Vec::with_capacity(simples.len());
    for s in &simples {
        let dual_s = s.dual();
        let (p_op, pi_op) = projective_cover(&dual_s)?;
        let _ = p_op;
        // dualizing the cover P -> S* gives S ~= S** -> P* = E(S)
        let iota = pi_op.dual();
        let e_data = iota.target().data();
        // rebuild over the original algebra handle so caches are shared
        let e = Module::from_data(a.clone(), &e_data);
        let s_back = Module::from_data(a.clone(), &iota.source().data());
        if s_back != *s {
            return Err(AlgError::Internal("double dual did not return the simple on the nose".into()));
        }
        let incl = Morphism::new(s.clone(), e, iota.matrix().clone())?;
        if !incl.is_mono() {
            return Err(AlgError::Internal("socle inclusion is not mono".into()));
        }
        out.push((e_data, incl.matrix().clone()));
    }
    Ok(out)
}

/// rad(A)·M as a submodule with its inclusion.
pub fn radical_submodule(m: &Module) -> (Module, Morphism) {
    let a = m.algebra();
    let rad = a.radical();
    let p = a.modulus();
    let mut cols = FpMatrix::zero(p, m.dim(), 0);
    for j in 0..rad.dim() {
        let action = m.act(&rad.basis().col(j));
        cols = cols.hstack(&action).unwrap();
    }
    let space = Subspace::from_columns(&cols);
    m.submodule(&space).expect("radical submodule is invariant")
}

/// soc(M) = annihilator of rad(A) in M, with its inclusion.
pub fn socle(m: &Module) -> (Module, Morphism) {
    let a = m.algebra();
    let rad = a.radical();
    let p = a.modulus();
    if rad.is_zero() {
        let full = Subspace::full(p, m.dim());
        return m.submodule(&full).expect("whole module");
    }
    let mut stacked = FpMatrix::zero(p, 0, m.dim());
    for j in 0..rad.dim() {
        stacked = stacked.vstack(&m.act(&rad.basis().col(j))).unwrap();
    }
    let space = Subspace::from_columns(&stacked.kernel());
    m.submodule(&space).expect("socle is invariant")
}

/// Multiplicity of each simple in the socle of M (for semisimple M this is
/// its decomposition).
pub fn socle_multiplicities(m: &Module) -> Result<Vec<usize>, AlgError> {
    let simples = m.algebra().simples()?;
    let mut mults = Vec::with_capacity(simples.len());
    for s in &simples {
        mults.push(super::hom_space(s, m)?.len());
    }
    Ok(mults)
}

/// Jordan–Hölder multiset as a count per simple index, via the Loewy series.
pub fn composition_factors(m: &Module) -> Result<Vec<usize>, AlgError> {
    let simples = m.algebra().simples()?;
    let mut counts = vec![0usize; simples.len()];
    let mut current = m.clone();
    while current.dim() > 0 {
        let (soc, soc_incl) = socle(&current);
        if soc.dim() == 0 {
            return Err(AlgError::Internal("nonzero module with zero socle".into()));
        }
        for (i, c) in socle_multiplicities(&soc)?.into_iter().enumerate() {
            counts[i] += c;
        }
        let space = soc_incl.matrix().column_space();
        let (q, _) = current.quotient(&space)?;
        current = q;
    }
    let total: usize = counts.iter().zip(&simples).map(|(c, s)| c * s.dim()).sum();
    if total != m.dim() {
        return Err(AlgError::Internal("composition factors do not add up".into()));
    }
    Ok(counts)
}

/// Projective cover (P, pi): pi epi, P a sum of indecomposable projectives
/// matching top(M), ker(pi) inside rad(P).
pub fn projective_cover(m: &Module) -> Result<(Module, Morphism), AlgError> {
    let a = m.algebra().clone();
    if m.dim() == 0 {
        let z = Module::zero(a);
        let zm = Morphism::zero(&z, m);
        return Ok((z, zm));
    }
    let simples = a.simples()?;
    let idempotents = a.primitive_idempotents()?;
    let (rad_m, rad_incl) = radical_submodule(m);
    let _ = rad_m;
    let (top, top_proj) = m.quotient(&rad_incl.matrix().column_space())?;
    let regular = a.regular_module();
    let mut summands: Vec<Module> = Vec::new();
    let mut columns: Vec<FpMatrix> = Vec::new();
    for (i, s) in simples.iter().enumerate() {
        let mult = super::hom_space(s, &top)?.len();
        if mult == 0 {
            continue;
        }
        let e = &idempotents[i];
        let ideal = regular.spin(&FpMatrix::col_vec(a.modulus(), e));
        let (p_i, p_incl) = regular.submodule(&ideal)?;
        // basis of e_i · top, one generator per copy of P_i
        let w_space = top.act(e).column_space();
        if w_space.dim() != mult {
            return Err(AlgError::Internal(format!(
                "idempotent slice of the top has dim {} but multiplicity is {}",
                w_space.dim(),
                mult
            )));
        }
        for j in 0..mult {
            let w = FpMatrix::col_vec(a.modulus(), &w_space.basis().col(j));
            let u = top_proj
                .matrix()
                .solve(&w)?
                .ok_or_else(|| AlgError::Internal("top projection not surjective".into()))?;
            let gen = m.act(e).mul(&u)?;
            // P_i -> M: a basis element q of A e_i acts on the generator
            let mut phi = FpMatrix::zero(a.modulus(), m.dim(), p_i.dim());
            for (col, qcol) in (0..p_i.dim()).map(|c| (c, p_incl.matrix().col(c))) {
                let img = m.act(&qcol).mul(&gen)?;
                for r in 0..m.dim() {
                    phi.set(r, col, img.get(r, 0));
                }
            }
            summands.push(p_i.clone());
            columns.push(phi);
        }
    }
    if summands.is_empty() {
        return Err(AlgError::Internal("nonzero module with empty top".into()));
    }
    let (p_total, _, _) = Module::direct_sum(&summands)?;
    let mut matrix = FpMatrix::zero(a.modulus(), m.dim(), 0);
    for c in &columns {
        matrix = matrix.hstack(c)?;
    }
    let pi = Morphism::new(p_total.clone(), m.clone(), matrix)?;
    if !pi.is_epi() {
        return Err(AlgError::Internal("cover map is not epi".into()));
    }
    // ker(pi) <= rad(P) iff top(P) ~= top(M), which holds by construction:
    // certify by dimension count
    let (rad_p, _) = radical_submodule(&p_total);
    let top_p_dim = p_total.dim() - rad_p.dim();
    if top_p_dim != top.dim() {
        return Err(AlgError::Internal("cover top does not match module top".into()));
    }
    Ok((p_total, pi))
}

/// Injective envelope (E, iota): iota essential mono into an injective,
/// certified by soc(E) = iota(soc M).
pub fn injective_envelope(m: &Module) -> Result<(Module, Morphism), AlgError> {
    let a = m.algebra().clone();
    if m.dim() == 0 {
        let z = Module::zero(a);
        let zm = Morphism::zero(m, &z);
        return Ok((z, zm));
    }
    let simples = a.simples()?;
    let (soc_m, soc_incl) = socle(m);
    let mults = socle_multiplicities(&soc_m)?;
    // assemble E = sum E_i^{k_i} and the block socle map
    let mut simple_copies: Vec<Module> = Vec::new();
    let mut env_copies: Vec<Module> = Vec::new();
    let mut socle_maps: Vec<Morphism> = Vec::new();
    let mut soc_iso_cols: Vec<Morphism> = Vec::new();
    for (i, &k) in mults.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let homs = super::hom_space(&simples[i], &soc_m)?;
        let (e_i, iota_i) = a.indecomposable_injective(i)?;
        for phi in homs.iter().take(k) {
            simple_copies.push(simples[i].clone());
            env_copies.push(e_i.clone());
            socle_maps.push(iota_i.clone());
            soc_iso_cols.push(phi.clone());
        }
    }
    if env_copies.is_empty() {
        return Err(AlgError::Internal("nonzero module with empty socle".into()));
    }
    let (s_sum, _, _) = Module::direct_sum(&simple_copies)?;
    let (e_sum, _, _) = Module::direct_sum(&env_copies)?;
    let mut g_cols = FpMatrix::zero(a.modulus(), soc_m.dim(), 0);
    for phi in &soc_iso_cols {
        g_cols = g_cols.hstack(phi.matrix())?;
    }
    let g = Morphism::new(s_sum.clone(), soc_m.clone(), g_cols)?;
    let g_inv = g
        .inverse()
        .ok_or_else(|| AlgError::Internal("socle is not the sum of its isotypic images".into()))?;
    let mut block = FpMatrix::zero(a.modulus(), 0, 0);
    for iota in &socle_maps {
        block = block.direct_sum(iota.matrix())?;
    }
    let soc_to_e = Morphism::new(s_sum, e_sum.clone(), block)?;
    let iota_soc = g_inv.then(&soc_to_e)?;
    // extend along soc(M) -> M using injectivity of E
    let iota = extend_along_mono(&iota_soc, &soc_incl)?
        .ok_or_else(|| AlgError::Internal("extension along the socle inclusion failed".into()))?;
    if !iota.is_mono() {
        return Err(AlgError::Internal("envelope map is not mono".into()));
    }
    // essential: soc(E) must be exactly the image of soc(M)
    let (_, soc_e_incl) = socle(&e_sum);
    let image = soc_incl.then(&iota)?.matrix().column_space();
    if soc_e_incl.matrix().column_space() != image {
        return Err(AlgError::Internal("envelope is not essential".into()));
    }
    Ok((e_sum, iota))
}

/// Extend f: U -> J along a monomorphism incl: U -> V to g: V -> J.
/// Returns None when the linear system has no solution.
pub fn extend_along_mono(f: &Morphism, incl: &Morphism) -> Result<Option<Morphism>, AlgError> {
    if f.source() != incl.source() {
        return Err(AlgError::InvalidMorphism("extension legs must share their source".into()));
    }
    let mut solver = MorphismSolver::new(incl.target().clone(), f.target().clone());
    solver.require_compose_right(incl.matrix(), f.matrix());
    solver.solve()
}

/// Linear solver for "find a morphism g: V -> W subject to composition
/// constraints". Intertwining is always imposed.
pub(crate) struct MorphismSolver {
    source: Module,
    target: Module,
    rows: Vec<(Vec<(usize, u64)>, u64)>, // sparse row, rhs
}

impl MorphismSolver {
    pub fn new(source: Module, target: Module) -> Self {
        let mut s = MorphismSolver { source, target, rows: Vec::new() };
        s.add_intertwining();
        s
    }

    fn var(&self, r: usize, c: usize) -> usize {
        r * self.source.dim() + c
    }

    fn add_intertwining(&mut self) {
        let p = self.source.algebra().modulus();
        for i in 0..self.source.algebra().dim() {
            let a = self.target.action(i).clone();
            let b = self.source.action(i).clone();
            for r in 0..self.target.dim() {
                for s in 0..self.source.dim() {
                    let mut row: Vec<(usize, u64)> = Vec::new();
                    for t in 0..self.target.dim() {
                        let c = a.get(r, t);
                        if c != 0 {
                            row.push((self.var(t, s), c));
                        }
                    }
                    for u in 0..self.source.dim() {
                        let c = b.get(u, s);
                        if c != 0 {
                            row.push((self.var(r, u), (p - c) % p));
                        }
                    }
                    if !row.is_empty() {
                        self.rows.push((row, 0));
                    }
                }
            }
        }
    }

    /// Constrain g . c = d where c: X -> source and d: X -> target.
    pub fn require_compose_right(&mut self, c: &FpMatrix, d: &FpMatrix) {
        debug_assert_eq!(c.rows(), self.source.dim());
        debug_assert_eq!(d.rows(), self.target.dim());
        debug_assert_eq!(c.cols(), d.cols());
        for j in 0..c.cols() {
            for r in 0..self.target.dim() {
                let mut row = Vec::new();
                for s in 0..self.source.dim() {
                    let coeff = c.get(s, j);
                    if coeff != 0 {
                        row.push((self.var(r, s), coeff));
                    }
                }
                self.rows.push((row, d.get(r, j)));
            }
        }
    }

    pub fn solve(self) -> Result<Option<Morphism>, AlgError> {
        let p = self.source.algebra().modulus();
        let vars = self.source.dim() * self.target.dim();
        if vars == 0 {
            let ok = self.rows.iter().all(|(_, rhs)| *rhs == 0);
            return Ok(ok.then(|| Morphism::zero(&self.source, &self.target)));
        }
        let mut system = FpMatrix::zero(p, self.rows.len(), vars);
        let mut rhs = FpMatrix::zero(p, self.rows.len(), 1);
        for (ri, (row, b)) in self.rows.iter().enumerate() {
            for &(col, coeff) in row {
                let cur = system.get(ri, col);
                system.set(ri, col, (cur + coeff) % p);
            }
            rhs.set(ri, 0, *b);
        }
        let Some(sol) = system.solve(&rhs)? else {
            return Ok(None);
        };
        let flat = sol.col(0);
        let mut matrix = FpMatrix::zero(p, self.target.dim(), self.source.dim());
        for r in 0..self.target.dim() {
            for c in 0..self.source.dim() {
                matrix.set(r, c, flat[r * self.source.dim() + c]);
            }
        }
        Ok(Some(Morphism::new(self.source, self.target, matrix)?))
    }
}

/// Is M injective? Exactly when its envelope does not grow.
pub fn is_injective(m: &Module) -> Result<bool, AlgError> {
    let (e, _) = injective_envelope(m)?;
    Ok(e.dim() == m.dim())
}

/// Decompose an injective module into indecomposable injectives with
/// multiplicities (simple index, multiplicity).
pub fn decompose_injective(e: &Module) -> Result<Vec<(usize, usize)>, AlgError> {
    let a = e.algebra();
    let (soc_e, _) = socle(e);
    let mults = socle_multiplicities(&soc_e)?;
    let mut total = 0usize;
    let mut out = Vec::new();
    for (i, &k) in mults.iter().enumerate() {
        if k > 0 {
            let (ei, _) = a.indecomposable_injective(i)?;
            total += k * ei.dim();
            out.push((i, k));
        }
    }
    if total != e.dim() {
        return Err(AlgError::NotInjective(format!(
            "socle forces an envelope of dimension {total}, module has dimension {}",
            e.dim()
        )));
    }
    Ok(out)
}

/// Isomorphism test with witness. Deterministic sweep over the hom basis and
/// its linear combinations; exhaustive (hence a proof either way) whenever
/// p^(hom dim) fits under the sweep cap.
pub fn is_isomorphic(m: &Module, n: &Module) -> Result<Option<Morphism>, AlgError> {
    is_isomorphic_with_cap(m, n, SWEEP_CAP)
}

pub fn is_isomorphic_with_cap(m: &Module, n: &Module, cap: usize) -> Result<Option<Morphism>, AlgError> {
    if m.algebra() != n.algebra() {
        return Err(AlgError::AlgebraMismatch);
    }
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.dim() == 0 {
        return Ok(Some(Morphism::zero(m, n)));
    }
    if m == n {
        return Ok(Some(Morphism::identity(m)));
    }
    if composition_factors(m)? != composition_factors(n)? {
        return Ok(None);
    }
    let homs = super::hom_space(m, n)?;
    for phi in &homs {
        if phi.is_iso() {
            return Ok(Some(phi.clone()));
        }
    }
    let p = m.algebra().modulus();
    let h = homs.len();
    if h == 0 {
        return Ok(None);
    }
    let total = (p as u128).saturating_pow(h as u32);
    if total <= cap as u128 {
        for coeffs in enumerate_vectors(p, h, cap) {
            let mut cand = Morphism::zero(m, n);
            for (c, phi) in coeffs.iter().zip(&homs) {
                if *c != 0 {
                    cand = cand.add(&phi.scale(*c))?;
                }
            }
            if cand.is_iso() {
                return Ok(Some(cand));
            }
        }
        return Ok(None);
    }
    // partial sweep: pairs and triples of basis elements with unit coefficients
    for i in 0..h {
        for j in (i + 1)..h {
            let cand = homs[i].add(&homs[j])?;
            if cand.is_iso() {
                return Ok(Some(cand));
            }
            for k in (j + 1)..h {
                let cand3 = cand.add(&homs[k])?;
                if cand3.is_iso() {
                    return Ok(Some(cand3));
                }
            }
        }
    }
    Err(AlgError::SearchExhausted(format!(
        "hom space of dimension {h} exceeds the exhaustive sweep bound"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, KA2Fixture};

    #[test]
    fn simples_of_quiver_algebra() {
        let fx = KA2Fixture::new();
        let simples = fx.algebra.simples().unwrap();
        assert_eq!(simples.len(), 2);
        assert!(simples.iter().all(|s| s.dim() == 1));
        // canonical order puts S1 (vertex 1) first: e_1 acts as 1 on S1
        assert_eq!(simples[0], fx.s1);
        assert_eq!(simples[1], fx.s2);
    }

    #[test]
    fn simples_of_semisimple_and_local() {
        assert_eq!(fixtures::ss2().simples().unwrap().len(), 2);
        let loc = fixtures::loc2().simples().unwrap();
        assert_eq!(loc.len(), 1);
        assert_eq!(loc[0].dim(), 1);
    }

    #[test]
    fn non_split_rejected() {
        // F_4 as an F_2-algebra: basis 1, w with w^2 = w + 1
        let mut constants = vec![0u64; 8];
        let d = 2;
        constants[(0 * d + 0) * d] = 1; // 1*1 = 1
        constants[(0 * d + 1) * d + 1] = 1; // 1*w = w
        constants[(1 * d + 0) * d + 1] = 1; // w*1 = w
        constants[(1 * d + 1) * d] = 1; // w*w = 1 + w
        constants[(1 * d + 1) * d + 1] = 1;
        let f4 = Algebra::validated(2, 2, constants, vec![1, 0]).unwrap();
        assert!(matches!(f4.simples(), Err(AlgError::NonSplit(_))));
    }

    #[test]
    fn radical_socle_of_fixtures() {
        let fx = KA2Fixture::new();
        // soc(I2) = S2 = rad(I2)
        let (soc, _) = socle(&fx.i2);
        let (rad, _) = radical_submodule(&fx.i2);
        assert_eq!(soc.dim(), 1);
        assert_eq!(rad.dim(), 1);
        assert!(is_isomorphic(&soc, &fx.s2).unwrap().is_some());
        assert!(is_isomorphic(&rad, &fx.s2).unwrap().is_some());
        // simple module
        let (soc1, _) = socle(&fx.s1);
        let (rad1, _) = radical_submodule(&fx.s1);
        assert_eq!(soc1.dim(), 1);
        assert_eq!(rad1.dim(), 0);
        // local algebra acting on itself: soc = rad = span(x)
        let loc = fixtures::loc2().regular_module();
        let (socl, _) = socle(&loc);
        let (radl, _) = radical_submodule(&loc);
        assert_eq!(socl.dim(), 1);
        assert_eq!(radl.dim(), 1);
    }

    #[test]
    fn composition_factors_examples() {
        let fx = KA2Fixture::new();
        assert_eq!(composition_factors(&fx.i2).unwrap(), vec![1, 1]);
        let (double, _, _) = Module::direct_sum(&[fx.s1.clone(), fx.s1.clone()]).unwrap();
        assert_eq!(composition_factors(&double).unwrap(), vec![2, 0]);
        let regular = fx.algebra.regular_module();
        assert_eq!(composition_factors(&regular).unwrap(), vec![1, 2]);
    }

    #[test]
    fn projective_cover_examples() {
        let fx = KA2Fixture::new();
        // S2 is projective
        let (p2, pi2) = projective_cover(&fx.s2).unwrap();
        assert_eq!(p2.dim(), 1);
        assert!(pi2.is_iso());
        // cover of S1 is the two-dimensional P1 with simple kernel S2
        let (p1, pi1) = projective_cover(&fx.s1).unwrap();
        assert_eq!(p1.dim(), 2);
        assert!(pi1.is_epi());
        let (ker, _) = pi1.kernel();
        assert!(is_isomorphic(&ker, &fx.s2).unwrap().is_some());
        assert!(is_isomorphic(&p1, &fx.p1).unwrap().is_some());
        // zero module
        let z = Module::zero(fx.algebra.clone());
        let (pz, _) = projective_cover(&z).unwrap();
        assert_eq!(pz.dim(), 0);
    }

    #[test]
    fn injective_envelope_examples() {
        let fx = KA2Fixture::new();
        let (e2, i2incl) = injective_envelope(&fx.s2).unwrap();
        assert_eq!(e2.dim(), 2);
        assert!(is_isomorphic(&e2, &fx.i2).unwrap().is_some());
        assert!(i2incl.is_mono());
        let (e1, i1) = injective_envelope(&fx.s1).unwrap();
        assert_eq!(e1.dim(), 1);
        assert!(i1.is_iso());
        let z = Module::zero(fx.algebra.clone());
        let (ez, _) = injective_envelope(&z).unwrap();
        assert_eq!(ez.dim(), 0);
        // envelope of an injective is itself
        let (ei2, idmap) = injective_envelope(&fx.i2).unwrap();
        assert_eq!(ei2.dim(), 2);
        assert!(idmap.is_iso());
        // E(E(M)) ~= E(M)
        let (ee, _) = injective_envelope(&ei2).unwrap();
        assert!(is_isomorphic(&ee, &ei2).unwrap().is_some());
    }

    #[test]
    fn envelope_over_local_algebra_is_regular() {
        let loc = fixtures::loc2();
        let k = loc.simples().unwrap()[0].clone();
        let (e, _) = injective_envelope(&k).unwrap();
        assert_eq!(e.dim(), 2);
        assert!(is_isomorphic(&e, &loc.regular_module()).unwrap().is_some());
    }

    #[test]
    fn envelope_is_essential_exhaustively() {
        // every nonzero vector of E spins to a submodule meeting iota(M),
        // checked for dim E <= 4 over F_2
        let fx = KA2Fixture::new();
        for m in [&fx.s1, &fx.s2, &fx.i2] {
            let (e, iota) = injective_envelope(m).unwrap();
            if e.dim() > 4 || e.dim() == 0 {
                continue;
            }
            let image = iota.matrix().column_space();
            for v in enumerate_vectors(2, e.dim(), 4096).into_iter().skip(1) {
                let sub = e.spin(&FpMatrix::col_vec(2, &v));
                let met = sub.intersect(&image).unwrap();
                assert!(met.dim() > 0, "submodule misses the image");
            }
        }
    }

    #[test]
    fn decompose_injective_examples() {
        let fx = KA2Fixture::new();
        let (sum, _, _) = Module::direct_sum(&[fx.i2.clone(), fx.s1.clone()]).unwrap();
        let dec = decompose_injective(&sum).unwrap();
        assert_eq!(dec, vec![(0, 1), (1, 1)]); // E(S1) once, E(S2) once
        let (sum2, _, _) = Module::direct_sum(&[fx.i2.clone(), fx.i2.clone()]).unwrap();
        assert_eq!(decompose_injective(&sum2).unwrap(), vec![(1, 2)]);
        let z = Module::zero(fx.algebra.clone());
        assert!(decompose_injective(&z).unwrap().is_empty());
        // S2 is not injective
        assert!(matches!(decompose_injective(&fx.s2), Err(AlgError::NotInjective(_))));
    }

    #[test]
    fn is_injective_on_fixtures() {
        let fx = KA2Fixture::new();
        assert!(is_injective(&fx.s1).unwrap());
        assert!(!is_injective(&fx.s2).unwrap());
        assert!(is_injective(&fx.i2).unwrap());
    }

    #[test]
    fn iso_tests() {
        let fx = KA2Fixture::new();
        let id = is_isomorphic(&fx.i2, &fx.i2).unwrap().unwrap();
        assert!(id.is_iso());
        // S1 + S2 is not isomorphic to the indecomposable I2
        let (sum, _, _) = Module::direct_sum(&[fx.s1.clone(), fx.s2.clone()]).unwrap();
        assert!(is_isomorphic(&sum, &fx.i2).unwrap().is_none());
        assert!(is_isomorphic(&fx.s1, &fx.s2).unwrap().is_none());
        // search bound surfaces as an error, never a silent false
        let copies: Vec<Module> = std::iter::repeat(fx.s1.clone()).take(3).collect();
        let (m, _, _) = Module::direct_sum(&copies).unwrap();
        match is_isomorphic_with_cap(&m, &m, 2) {
            Ok(Some(_)) => {} // identity shortcut is fine
            Err(AlgError::SearchExhausted(_)) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn jordan_hoelder_under_refinement() {
        // factors of M equal factors of U plus factors of M/U for every
        // submodule U (dim <= 6 modules over the fixtures)
        let fx = KA2Fixture::new();
        let regular = fx.algebra.regular_module();
        let (sum, _, _) = Module::direct_sum(&[fx.i2.clone(), fx.s1.clone()]).unwrap();
        for m in [&regular, &sum, &fx.i2] {
            let base = composition_factors(m).unwrap();
            for sub in crate::fixtures::enumerate_submodules(m, 4096) {
                let (u, incl) = m.submodule(&sub).unwrap();
                let (q, _) = m.quotient(&incl.matrix().column_space()).unwrap();
                let fu = composition_factors(&u).unwrap();
                let fq = composition_factors(&q).unwrap();
                let joined: Vec<usize> = fu.iter().zip(&fq).map(|(a, b)| a + b).collect();
                assert_eq!(joined, base);
            }
        }
    }

    #[test]
    fn double_dual_is_identity_on_fixtures() {
        let fx = KA2Fixture::new();
        for m in [&fx.s1, &fx.s2, &fx.i2] {
            let dd = m.dual().dual();
            assert_eq!(dd.data(), m.data());
        }
    }
}

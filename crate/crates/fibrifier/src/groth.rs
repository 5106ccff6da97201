//! The fibration ⟷ pseudofunctor correspondence and the fibrewise
//! application of reflections with coherence, following the three-row
//! diagram of the factorization construction.
//!
//! Fibre categories are materialized as standalone tables with decode maps;
//! strict pseudofunctors (identity coherence) arise from normalized split
//! cleavages and take the same code path, just with identity cells.

use std::collections::HashMap;
use std::sync::Arc;

use crate::adjoint;
use crate::cat::{FinCat, FunctorData, Mor, Obj};
use crate::colim::{self, GroupoidReflection};
use crate::error::CatError;
use crate::fibcheck::Cleavage;

/// A contravariant pseudofunctor on a base category, with explicit unit and
/// composition coherence isomorphisms.
#[derive(Clone, Debug)]
pub struct PseudoFunctorData {
    pub base: Arc<FinCat>,
    /// Per base object.
    pub fibres: Vec<Arc<FinCat>>,
    /// Per base morphism β: b' → b, a functor fibre(b) → fibre(b').
    pub reindex: Vec<FunctorData>,
    /// unit_iso[b][x] : reindex(id_b)(x) → x in fibre(b).
    pub unit_iso: Vec<Vec<Mor>>,
    /// comp_iso[(β, β')][x] : reindex(β')(reindex(β)(x)) → reindex(β∘β')(x)
    /// in fibre(dom β'), for composable pairs (cod β' = dom β).
    pub comp_iso: HashMap<(Mor, Mor), Vec<Mor>>,
}

impl PseudoFunctorData {
    /// Strict pseudofunctor: reindexing is functorial on the nose and all
    /// coherence cells are identities.
    pub fn strict(base: Arc<FinCat>, fibres: Vec<Arc<FinCat>>, reindex: Vec<FunctorData>) -> Self {
        let unit_iso = (0..base.object_count())
            .map(|b| (0..fibres[b].object_count()).map(|x| fibres[b].id(x)).collect())
            .collect();
        let mut comp_iso = HashMap::new();
        for beta in 0..base.mor_count() {
            for beta2 in 0..base.mor_count() {
                if base.composable(beta, beta2) {
                    let fb = base.cod(beta);
                    let lower = base.dom(beta2);
                    let cell = (0..fibres[fb].object_count())
                        .map(|x| fibres[lower].id(reindex[beta2].obj_map[reindex[beta].obj_map[x]]))
                        .collect();
                    comp_iso.insert((beta, beta2), cell);
                }
            }
        }
        PseudoFunctorData { base, fibres, reindex, unit_iso, comp_iso }
    }

    /// Exhaustive coherence check: naturality and invertibility of all
    /// cells, the two unit laws, and the associativity comparison of triple
    /// reindexings.
    pub fn validate(&self) -> crate::cat::ValidationReport {
        let mut report = crate::cat::ValidationReport::default();
        let b = &self.base;
        for beta in 0..b.mor_count() {
            let r = &self.reindex[beta];
            if *r.source != *self.fibres[b.cod(beta)] || *r.target != *self.fibres[b.dom(beta)] {
                report.push("reindex-endpoints", vec![beta]);
                continue;
            }
            report.merge(r.validate());
        }
        if !report.is_valid() {
            return report;
        }
        for bobj in 0..b.object_count() {
            let fibre = &self.fibres[bobj];
            let r_id = &self.reindex[b.id(bobj)];
            let u = match self.unit_iso.get(bobj) {
                Some(u) if u.len() == fibre.object_count() => u,
                _ => {
                    report.push("unit-iso-length", vec![bobj]);
                    continue;
                }
            };
            let mut typed = true;
            for x in 0..fibre.object_count() {
                let c = u[x];
                if c >= fibre.mor_count()
                    || fibre.dom(c) != r_id.obj_map[x]
                    || fibre.cod(c) != x
                    || !fibre.is_iso(c)
                {
                    report.push("unit-iso-component", vec![bobj, x]);
                    typed = false;
                }
            }
            if !typed {
                continue;
            }
            for m in 0..fibre.mor_count() {
                let (x, y) = (fibre.dom(m), fibre.cod(m));
                if fibre.compose(u[y], r_id.mor_map[m]) != fibre.compose(m, u[x]) {
                    report.push("unit-iso-naturality", vec![bobj, m]);
                }
            }
        }
        for beta in 0..b.mor_count() {
            for beta2 in 0..b.mor_count() {
                if !b.composable(beta, beta2) {
                    continue;
                }
                let upper = &self.fibres[b.cod(beta)];
                let lower = &self.fibres[b.dom(beta2)];
                let cell = match self.comp_iso.get(&(beta, beta2)) {
                    Some(c) if c.len() == upper.object_count() => c,
                    _ => {
                        report.push("comp-iso-missing", vec![beta, beta2]);
                        continue;
                    }
                };
                let r1 = &self.reindex[beta];
                let r2 = &self.reindex[beta2];
                let r12 = &self.reindex[b.compose(beta, beta2)];
                let mut typed = true;
                for x in 0..upper.object_count() {
                    let c = cell[x];
                    if c >= lower.mor_count()
                        || lower.dom(c) != r2.obj_map[r1.obj_map[x]]
                        || lower.cod(c) != r12.obj_map[x]
                        || !lower.is_iso(c)
                    {
                        report.push("comp-iso-component", vec![beta, beta2, x]);
                        typed = false;
                    }
                }
                if !typed {
                    continue;
                }
                for m in 0..upper.mor_count() {
                    let (x, y) = (upper.dom(m), upper.cod(m));
                    let lhs = lower.compose(cell[y], r2.mor_map[r1.mor_map[m]]);
                    let rhs = lower.compose(r12.mor_map[m], cell[x]);
                    if lhs != rhs {
                        report.push("comp-iso-naturality", vec![beta, beta2, m]);
                    }
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        // Unit laws: φ_{β,id} = u whiskered, φ_{id,β} = reindex(β)(u).
        for beta in 0..b.mor_count() {
            let (lo, hi) = (b.dom(beta), b.cod(beta));
            let r = &self.reindex[beta];
            let cell_right = &self.comp_iso[&(beta, b.id(lo))];
            let cell_left = &self.comp_iso[&(b.id(hi), beta)];
            for x in 0..self.fibres[hi].object_count() {
                if cell_right[x] != self.unit_iso[lo][r.obj_map[x]] {
                    report.push("unit-law-right", vec![beta, x]);
                }
                if cell_left[x] != r.mor_map[self.unit_iso[hi][x]] {
                    report.push("unit-law-left", vec![beta, x]);
                }
            }
        }
        // Associativity of triple reindexings.
        for beta in 0..b.mor_count() {
            for beta2 in 0..b.mor_count() {
                if !b.composable(beta, beta2) {
                    continue;
                }
                for beta3 in 0..b.mor_count() {
                    if !b.composable(beta2, beta3) {
                        continue;
                    }
                    let bottom = &self.fibres[b.dom(beta3)];
                    let r3 = &self.reindex[beta3];
                    let c12 = &self.comp_iso[&(beta, beta2)];
                    let c12_3 = &self.comp_iso[&(b.compose(beta, beta2), beta3)];
                    let c23 = &self.comp_iso[&(beta2, beta3)];
                    let c1_23 = &self.comp_iso[&(beta, b.compose(beta2, beta3))];
                    let r1 = &self.reindex[beta];
                    for x in 0..self.fibres[b.cod(beta)].object_count() {
                        let route1 = bottom.compose(c12_3[x], r3.mor_map[c12[x]]);
                        let route2 = bottom.compose(c1_23[x], c23[r1.obj_map[x]]);
                        if route1 != route2 {
                            report.push("associativity-coherence", vec![beta, beta2, beta3, x]);
                        }
                    }
                }
            }
        }
        report
    }

    pub fn is_strict(&self) -> bool {
        self.unit_iso
            .iter()
            .enumerate()
            .all(|(b, u)| u.iter().all(|&c| self.fibres[b].is_identity(c)))
            && self.comp_iso.iter().all(|(&(_, b2), cell)| {
                let lower = &self.fibres[self.base.dom(b2)];
                cell.iter().all(|&c| lower.is_identity(c))
            })
    }
}

/// A fibre of a functor materialized as a standalone category with decode
/// maps into the total category.
#[derive(Clone, Debug)]
pub struct FibrePresentation {
    pub cat: Arc<FinCat>,
    pub obj_to_total: Vec<Obj>,
    pub mor_to_total: Vec<Mor>,
    pub obj_from_total: HashMap<Obj, Obj>,
    pub mor_from_total: HashMap<Mor, Mor>,
}

/// All fibres of f, indexed by base object: the full subcategories of
/// vertical data.
pub fn fibres_of(f: &FunctorData) -> Vec<FibrePresentation> {
    (0..f.target.object_count())
        .map(|b| {
            let a = &f.source;
            let objs: Vec<Obj> = (0..a.object_count()).filter(|&x| f.obj_map[x] == b).collect();
            let mut obj_from_total = HashMap::new();
            for (i, &x) in objs.iter().enumerate() {
                obj_from_total.insert(x, i);
            }
            let mut mors = Vec::new();
            let mut mor_from_total = HashMap::new();
            for m in 0..a.mor_count() {
                if f.target.is_identity(f.mor_map[m])
                    && f.obj_map[a.dom(m)] == b
                    && f.obj_map[a.cod(m)] == b
                {
                    mor_from_total.insert(m, mors.len());
                    mors.push(m);
                }
            }
            let arrows: Vec<(Obj, Obj)> = mors
                .iter()
                .map(|&m| (obj_from_total[&a.dom(m)], obj_from_total[&a.cod(m)]))
                .collect();
            let identity: Vec<Mor> = objs.iter().map(|&x| mor_from_total[&a.id(x)]).collect();
            let mut triples = Vec::new();
            for (j, &mj) in mors.iter().enumerate() {
                for (i, &mi) in mors.iter().enumerate() {
                    if a.composable(mj, mi) {
                        triples.push((j, i, mor_from_total[&a.compose(mj, mi)]));
                    }
                }
            }
            let cat = Arc::new(
                FinCat::from_parts(objs.len(), arrows, identity, &triples)
                    .expect("fibre tables are well-indexed"),
            );
            FibrePresentation { cat, obj_to_total: objs, mor_to_total: mors, obj_from_total, mor_from_total }
        })
        .collect()
}

/// Restriction of p: A → C over B to the b-fibres.
pub fn restrict_to_fibre(
    p: &FunctorData,
    fa: &FibrePresentation,
    fc: &FibrePresentation,
) -> FunctorData {
    FunctorData {
        source: fa.cat.clone(),
        target: fc.cat.clone(),
        obj_map: fa.obj_to_total.iter().map(|&x| fc.obj_from_total[&p.obj_map[x]]).collect(),
        mor_map: fa.mor_to_total.iter().map(|&m| fc.mor_from_total[&p.mor_map[m]]).collect(),
    }
}

/// The pseudofunctor of a cleaved fibration: fibres over each base object,
/// reindexing along chosen cartesian lifts, coherence from uniqueness of
/// cartesian factorizations.
pub fn to_pseudofunctor(
    f: &FunctorData,
    cleavage: &Cleavage,
) -> Result<(PseudoFunctorData, Vec<FibrePresentation>), CatError> {
    let fibres = fibres_of(f);
    let a = &f.source;
    let base = &f.target;
    // Unique vertical factorization v with through ∘ v = target, where
    // `through` is a cartesian lift.
    let vertical_factor = |through: Mor, target: Mor| -> Result<Mor, CatError> {
        let mut found = None;
        for &v in a.hom(a.dom(target), a.dom(through)) {
            if base.is_identity(f.mor_map[v]) && a.compose(through, v) == target {
                if found.is_some() {
                    return Err(CatError::Invalid(
                        "cartesian factorization is not unique".into(),
                    ));
                }
                found = Some(v);
            }
        }
        found.ok_or(CatError::NotAFibration)
    };
    let mut reindex = Vec::with_capacity(base.mor_count());
    for beta in 0..base.mor_count() {
        let (lo, hi) = (base.dom(beta), base.cod(beta));
        let upper = &fibres[hi];
        let lower = &fibres[lo];
        let mut obj_map = Vec::with_capacity(upper.cat.object_count());
        for i in 0..upper.cat.object_count() {
            let x = upper.obj_to_total[i];
            let &(x2, _) = cleavage
                .lifts
                .get(&(x, beta))
                .ok_or(CatError::NotAFibration)?;
            obj_map.push(lower.obj_from_total[&x2]);
        }
        let mut mor_map = Vec::with_capacity(upper.cat.mor_count());
        for m in 0..upper.cat.mor_count() {
            let v_total = upper.mor_to_total[m];
            let (x1, x2) = (a.dom(v_total), a.cod(v_total));
            let (_, lift1) = cleavage.lifts[&(x1, beta)];
            let (_, lift2) = cleavage.lifts[&(x2, beta)];
            let w = vertical_factor(lift2, a.compose(v_total, lift1))?;
            mor_map.push(lower.mor_from_total[&w]);
        }
        reindex.push(FunctorData {
            source: upper.cat.clone(),
            target: lower.cat.clone(),
            obj_map,
            mor_map,
        });
    }
    // Normalized cleavage: identities lift to identities, so unit cells are
    // identities.
    let unit_iso = (0..base.object_count())
        .map(|b| (0..fibres[b].cat.object_count()).map(|x| fibres[b].cat.id(x)).collect())
        .collect();
    let mut comp_iso = HashMap::new();
    for beta in 0..base.mor_count() {
        for beta2 in 0..base.mor_count() {
            if !base.composable(beta, beta2) {
                continue;
            }
            let hi = base.cod(beta);
            let lo = base.dom(beta2);
            let upper = &fibres[hi];
            let lower = &fibres[lo];
            let mut cell = Vec::with_capacity(upper.cat.object_count());
            for i in 0..upper.cat.object_count() {
                let x = upper.obj_to_total[i];
                let (x1, lift1) = cleavage.lifts[&(x, beta)];
                let (_, lift2) = cleavage.lifts[&(x1, beta2)];
                let (_, lift12) = cleavage.lifts[&(x, base.compose(beta, beta2))];
                let w = vertical_factor(lift12, a.compose(lift1, lift2))?;
                cell.push(lower.mor_from_total[&w]);
            }
            comp_iso.insert((beta, beta2), cell);
        }
    }
    let pf = PseudoFunctorData {
        base: f.target.clone(),
        fibres: fibres.iter().map(|fp| fp.cat.clone()).collect(),
        reindex,
        unit_iso,
        comp_iso,
    };
    Ok((pf, fibres))
}

/// Total category of a pseudofunctor with projection and canonical cleavage.
#[derive(Clone, Debug)]
pub struct GrothendieckTotal {
    pub total: Arc<FinCat>,
    pub proj: FunctorData,
    pub cleavage: Cleavage,
    /// Object → (base object, fibre object).
    pub obj_decode: Vec<(Obj, Obj)>,
    /// Morphism → (base morphism β, fibre morphism ξ: x' → reindex(β)(x)).
    pub mor_decode: Vec<(Mor, Mor)>,
    obj_encode: HashMap<(Obj, Obj), Obj>,
    mor_encode: HashMap<(Obj, Obj, Mor, Mor), Mor>,
}

impl GrothendieckTotal {
    pub fn encode_obj(&self, b: Obj, x: Obj) -> Option<Obj> {
        self.obj_encode.get(&(b, x)).copied()
    }

    pub fn encode_mor(&self, from: Obj, to: Obj, beta: Mor, xi: Mor) -> Option<Mor> {
        self.mor_encode.get(&(from, to, beta, xi)).copied()
    }
}

/// Objects are pairs (b, x); a morphism (b', x') → (b, x) is a pair
/// (β: b' → b, ξ: x' → β*(x)); composition twists by the coherence cells.
pub fn grothendieck_construction(p: &PseudoFunctorData) -> Result<GrothendieckTotal, CatError> {
    let report = p.validate();
    if !report.is_valid() {
        return Err(CatError::IncoherentPseudoFunctor(format!(
            "{} violations, first: {:?}",
            report.violations.len(),
            report.violations.first()
        )));
    }
    let base = &p.base;
    let mut obj_decode = Vec::new();
    let mut obj_encode = HashMap::new();
    for b in 0..base.object_count() {
        for x in 0..p.fibres[b].object_count() {
            obj_encode.insert((b, x), obj_decode.len());
            obj_decode.push((b, x));
        }
    }
    let mut mor_decode = Vec::new();
    let mut mor_encode = HashMap::new();
    let mut arrows = Vec::new();
    for (i, &(b1, x1)) in obj_decode.iter().enumerate() {
        for (j, &(b2, x2)) in obj_decode.iter().enumerate() {
            for &beta in base.hom(b1, b2) {
                let rx2 = p.reindex[beta].obj_map[x2];
                for &xi in p.fibres[b1].hom(x1, rx2) {
                    mor_encode.insert((i, j, beta, xi), mor_decode.len());
                    mor_decode.push((beta, xi));
                    arrows.push((i, j));
                }
            }
        }
    }
    let identity: Vec<Mor> = obj_decode
        .iter()
        .enumerate()
        .map(|(i, &(b, x))| {
            let u_inv = p.fibres[b].inverse(p.unit_iso[b][x]).expect("unit iso");
            mor_encode[&(i, i, base.id(b), u_inv)]
        })
        .collect();
    let mut triples = Vec::new();
    for (n, &(beta, xi)) in mor_decode.iter().enumerate() {
        for (m, &(beta2, xi2)) in mor_decode.iter().enumerate() {
            // m: (b'', x'') → (b', x'), n: (b', x') → (b, x)
            if arrows[m].1 != arrows[n].0 {
                continue;
            }
            let i = arrows[m].0;
            let j = arrows[n].1;
            let (b2p, _) = obj_decode[arrows[m].0];
            let (_, x) = obj_decode[j];
            let fibre = &p.fibres[b2p];
            let comp_beta = base.compose(beta, beta2);
            let cell = &p.comp_iso[&(beta, beta2)];
            let xi_re = p.reindex[beta2].mor_map[xi];
            let comp_xi = fibre.compose(cell[x], fibre.compose(xi_re, xi2));
            let idx = mor_encode[&(i, j, comp_beta, comp_xi)];
            triples.push((n, m, idx));
        }
    }
    let total = Arc::new(FinCat::from_parts(obj_decode.len(), arrows, identity, &triples)?);
    let proj = FunctorData {
        source: total.clone(),
        target: base.clone(),
        obj_map: obj_decode.iter().map(|&(b, _)| b).collect(),
        mor_map: mor_decode.iter().map(|&(beta, _)| beta).collect(),
    };
    // Canonical cleavage: (β, id at β*(x)) is cartesian at (b, x).
    let mut lifts = HashMap::new();
    for (j, &(b, x)) in obj_decode.iter().enumerate() {
        for beta in 0..base.mor_count() {
            if base.cod(beta) != b {
                continue;
            }
            if base.is_identity(beta) {
                lifts.insert((j, beta), (j, total.id(j)));
                continue;
            }
            let b1 = base.dom(beta);
            let rx = p.reindex[beta].obj_map[x];
            let i = obj_encode[&(b1, rx)];
            let m = mor_encode[&(i, j, beta, p.fibres[b1].id(rx))];
            lifts.insert((j, beta), (i, m));
        }
    }
    Ok(GrothendieckTotal { total, proj, cleavage: Cleavage { lifts }, obj_decode, mor_decode, obj_encode, mor_encode })
}

/// Which fibrewise reflection to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reflection {
    /// Discrete reflection π₀ per fibre.
    Pi0,
    /// Groupoid reflection per fibre, cap-bounded.
    Groupoid(usize),
}

/// Outcome of `fibrewise_apply`: f = s ∘ q with s the projection of the
/// reassembled total and q componentwise the fibre reflection unit.
#[derive(Clone, Debug)]
pub struct FibrewiseResult {
    pub q: FunctorData,
    pub s: FunctorData,
    pub mid: GrothendieckTotal,
    pub fibres: Vec<FibrePresentation>,
    /// Reflection unit per fibre: fibre(b) → Q_b.
    pub units: Vec<FunctorData>,
    pub pseudofunctor: PseudoFunctorData,
}

/// Reflects every fibre of a cleaved fibration, reindexes the reflections by
/// the universal property, reassembles the Grothendieck total, and returns
/// the factorization f = s∘q.
pub fn fibrewise_apply(
    f: &FunctorData,
    cleavage: &Cleavage,
    reflection: Reflection,
) -> Result<FibrewiseResult, CatError> {
    let (pf, fibres) = to_pseudofunctor(f, cleavage)?;
    let base = &f.target;
    // Reflect each fibre.
    let mut new_fibres: Vec<Arc<FinCat>> = Vec::with_capacity(fibres.len());
    let mut units: Vec<FunctorData> = Vec::with_capacity(fibres.len());
    for fp in &fibres {
        match reflection {
            Reflection::Pi0 => {
                let (_, quot) = adjoint::connected_components(&fp.cat);
                new_fibres.push(quot.target.clone());
                units.push(quot);
            }
            Reflection::Groupoid(cap) => match colim::groupoid_reflection(&fp.cat, cap) {
                GroupoidReflection::Realized { groupoid, unit } => {
                    new_fibres.push(groupoid);
                    units.push(unit);
                }
                GroupoidReflection::Unknown { .. } => {
                    return Err(CatError::cap(cap, "reflecting a fibre into groupoids"))
                }
            },
        }
    }
    // Induced reindexing on the reflections via the universal property of
    // each unit.
    let mut new_reindex = Vec::with_capacity(base.mor_count());
    for beta in 0..base.mor_count() {
        let (lo, hi) = (base.dom(beta), base.cod(beta));
        let through = FunctorData::compose(&units[lo], &pf.reindex[beta]);
        let induced = match reflection {
            Reflection::Pi0 => {
                // Classes map to classes of reindexed representatives.
                let upper_q = &new_fibres[hi];
                let lower_q = &new_fibres[lo];
                let mut obj_map = vec![usize::MAX; upper_q.object_count()];
                for x in 0..fibres[hi].cat.object_count() {
                    let qx = units[hi].obj_map[x];
                    let want = through.obj_map[x];
                    if obj_map[qx] == usize::MAX {
                        obj_map[qx] = want;
                    } else if obj_map[qx] != want {
                        return Err(CatError::Invalid(
                            "π₀ reindexing is not well-defined".into(),
                        ));
                    }
                }
                let mor_map = (0..upper_q.mor_count())
                    .map(|m| lower_q.id(obj_map[upper_q.dom(m)]))
                    .collect();
                FunctorData {
                    source: upper_q.clone(),
                    target: lower_q.clone(),
                    obj_map,
                    mor_map,
                }
            }
            Reflection::Groupoid(_) => colim::factor_through_localization(&units[hi], &through)
                .ok_or_else(|| {
                    CatError::Invalid("groupoid reindexing did not factor".into())
                })?,
        };
        new_reindex.push(induced);
    }
    // Coherence cells pushed forward along the units, indexed by reflected
    // objects.
    let mut unit_iso = Vec::with_capacity(base.object_count());
    for b in 0..base.object_count() {
        let mut pushed = vec![usize::MAX; new_fibres[b].object_count()];
        for (x, &c) in pf.unit_iso[b].iter().enumerate() {
            let qx = units[b].obj_map[x];
            let val = units[b].mor_map[c];
            if pushed[qx] == usize::MAX {
                pushed[qx] = val;
            } else if pushed[qx] != val {
                return Err(CatError::Invalid("unit cell not constant on reflection classes".into()));
            }
        }
        if pushed.contains(&usize::MAX) {
            return Err(CatError::Invalid("reflection unit is not surjective on objects".into()));
        }
        unit_iso.push(pushed);
    }
    let mut comp_iso = HashMap::new();
    for (&(beta, beta2), cell) in &pf.comp_iso {
        let lo = base.dom(beta2);
        // Components live at objects of the reflected upper fibre; every such
        // object is a unit image, and the pushed cell must agree on classes.
        let hi = base.cod(beta);
        let upper_q = &new_fibres[hi];
        let mut pushed = vec![usize::MAX; upper_q.object_count()];
        for (x, &c) in cell.iter().enumerate() {
            let qx = units[hi].obj_map[x];
            let val = units[lo].mor_map[c];
            if pushed[qx] == usize::MAX {
                pushed[qx] = val;
            } else if pushed[qx] != val {
                return Err(CatError::Invalid(
                    "coherence cell is not constant on reflection classes".into(),
                ));
            }
        }
        if pushed.contains(&usize::MAX) {
            return Err(CatError::Invalid("reflection unit is not surjective on objects".into()));
        }
        comp_iso.insert((beta, beta2), pushed);
    }
    let new_pf = PseudoFunctorData {
        base: f.target.clone(),
        fibres: new_fibres,
        reindex: new_reindex,
        unit_iso,
        comp_iso,
    };
    let mid = grothendieck_construction(&new_pf)?;
    // q : A → mid, a ↦ (f a, q_{fa}(a)); a morphism α factors through the
    // chosen lift of f(α) as α = lift ∘ v with v vertical.
    let a = &f.source;
    let q_obj: Vec<Obj> = (0..a.object_count())
        .map(|x| {
            let b = f.obj_map[x];
            let xf = fibres[b].obj_from_total[&x];
            mid.encode_obj(b, units[b].obj_map[xf]).unwrap()
        })
        .collect();
    let mut q_mor = Vec::with_capacity(a.mor_count());
    for alpha in 0..a.mor_count() {
        let beta = f.mor_map[alpha];
        let x_to = a.cod(alpha);
        let b_to = f.obj_map[x_to];
        let b_from = f.obj_map[a.dom(alpha)];
        let (_, lift) = cleavage.lifts[&(x_to, beta)];
        // vertical factor v: dom α → dom lift
        let mut v_found = None;
        for &v in a.hom(a.dom(alpha), a.dom(lift)) {
            if f.target.is_identity(f.mor_map[v]) && a.compose(lift, v) == alpha {
                v_found = Some(v);
                break;
            }
        }
        let v = v_found.ok_or(CatError::NotAFibration)?;
        let v_fib = fibres[b_from].mor_from_total[&v];
        let xi = units[b_from].mor_map[v_fib];
        let _ = b_to;
        let m = mid
            .encode_mor(q_obj[a.dom(alpha)], q_obj[x_to], beta, xi)
            .ok_or_else(|| CatError::Invalid("fibrewise image not encodable".into()))?;
        q_mor.push(m);
    }
    let q = FunctorData { source: f.source.clone(), target: mid.total.clone(), obj_map: q_obj, mor_map: q_mor };
    let s = mid.proj.clone();
    Ok(FibrewiseResult { q, s, mid, fibres, units, pseudofunctor: new_pf })
}

/// Canonical comparison total(to_pseudofunctor(f)) → A over B; an
/// isomorphism by unique cartesian factorization.
pub fn roundtrip_iso(
    f: &FunctorData,
    cleavage: &Cleavage,
    fibres: &[FibrePresentation],
    total: &GrothendieckTotal,
) -> FunctorData {
    let a = &f.source;
    let obj_map: Vec<Obj> = total
        .obj_decode
        .iter()
        .map(|&(b, x)| fibres[b].obj_to_total[x])
        .collect();
    let mor_map: Vec<Mor> = (0..total.total.mor_count())
        .map(|m| {
            let (beta, xi) = total.mor_decode[m];
            let (i, j) = (total.total.dom(m), total.total.cod(m));
            let (b1, _) = total.obj_decode[i];
            let x_tot = obj_map[j];
            let (_, lift) = cleavage.lifts[&(x_tot, beta)];
            let _ = i;
            a.compose(lift, fibres[b1].mor_to_total[xi])
        })
        .collect();
    FunctorData { source: total.total.clone(), target: f.source.clone(), obj_map, mor_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::fibcheck::{self, Criterion, Side};

    fn simple_strict_pf() -> PseudoFunctorData {
        // Base = 2 (arrow category); fibre over 0 = the arrow category, over
        // 1 = discrete two objects; reindex along m embeds the discrete pair
        // as the endpoints of the arrow.
        let base = builders::arrow();
        let f0 = builders::arrow();
        let f1 = builders::discrete(2);
        let r_m = FunctorData {
            source: f1.clone(),
            target: f0.clone(),
            obj_map: vec![0, 1],
            mor_map: vec![0, 1],
        };
        PseudoFunctorData::strict(
            base.clone(),
            vec![f0.clone(), f1.clone()],
            vec![FunctorData::identity(&f0), FunctorData::identity(&f1), r_m],
        )
    }

    #[test]
    fn strict_pseudofunctor_validates_and_totals() {
        let pf = simple_strict_pf();
        assert!(pf.validate().is_valid());
        assert!(pf.is_strict());
        let total = grothendieck_construction(&pf).unwrap();
        assert!(total.total.validate().is_valid());
        assert!(total.proj.validate().is_valid());
        // 2 + 2 objects.
        assert_eq!(total.total.object_count(), 4);
        let report = fibcheck::is_fibration(&total.proj, &[Criterion::Direct]);
        assert!(report.verdict());
    }

    #[test]
    fn all_point_fibres_total_is_the_base() {
        let base = builders::comm_square_poset();
        let one = builders::terminal();
        let fibres: Vec<_> = (0..base.object_count()).map(|_| one.clone()).collect();
        let reindex: Vec<_> = (0..base.mor_count())
            .map(|_| FunctorData::identity(&one))
            .collect();
        let pf = PseudoFunctorData::strict(base.clone(), fibres, reindex);
        let total = grothendieck_construction(&pf).unwrap();
        assert!(crate::adjoint::find_isomorphism(&total.total, &base).is_some());
    }

    #[test]
    fn roundtrip_is_an_isomorphism_over_the_base() {
        let pf = simple_strict_pf();
        let g = grothendieck_construction(&pf).unwrap();
        let f = g.proj.clone();
        let cleavage = fibcheck::extract_cleavage(&f).expect("grothendieck projection is cleaved");
        let (pf2, fibres2) = to_pseudofunctor(&f, &cleavage).unwrap();
        assert!(pf2.validate().is_valid());
        let g2 = grothendieck_construction(&pf2).unwrap();
        let j = roundtrip_iso(&f, &cleavage, &fibres2, &g2);
        assert!(j.validate().is_valid());
        assert!(j.is_bijective());
        // Over the base: proj₂ = f ∘ j.
        assert!(FunctorData::compose(&f, &j).same_as(&g2.proj));
        // Fibre side of the round trip: recovered fibres are isomorphic to
        // the originals.
        for b in 0..pf.base.object_count() {
            assert!(crate::adjoint::find_isomorphism(&pf2.fibres[b], &pf.fibres[b]).is_some());
        }
    }

    #[test]
    fn identity_fibration_has_point_fibres() {
        let b = builders::comm_square_poset();
        let id = FunctorData::identity(&b);
        let cleavage = fibcheck::extract_cleavage(&id).unwrap();
        let (pf, fibres) = to_pseudofunctor(&id, &cleavage).unwrap();
        assert!(pf.validate().is_valid());
        for fp in &fibres {
            assert_eq!(fp.cat.object_count(), 1);
            assert_eq!(fp.cat.mor_count(), 1);
        }
    }

    #[test]
    fn split_carrier_extracts_a_strict_pseudofunctor() {
        // The canonical cleavage of an R-monad carrier is split, so all
        // coherence cells come out as identities.
        let f = builders::arrow_to_iso_pair();
        let inst = crate::comma::monad_on_slice(crate::comma::MonadKind::R, &f);
        let cleavage = crate::factor::canonical_r_cleavage(&inst);
        let (pf, _) = to_pseudofunctor(&inst.carrier, &cleavage).unwrap();
        assert!(pf.validate().is_valid());
        assert!(pf.is_strict());
    }

    #[test]
    fn canonical_lifts_are_cartesian() {
        // Brute-force check over (δ, g) competitors for the generated
        // Grothendieck cleavage.
        let fib = crate::corpus::gen_fibration(&crate::corpus::GenConfig::with_seed(21));
        for &(_, alpha) in fib.cleavage.lifts.values() {
            assert!(fibcheck::is_cartesian_arrow(&fib.proj, alpha));
        }
        // Identities lift to identities.
        for (&(a, beta), &(a1, alpha)) in &fib.cleavage.lifts {
            if fib.proj.target.is_identity(beta) {
                assert_eq!(a, a1);
                assert!(fib.proj.source.is_identity(alpha));
            }
        }
    }

    #[test]
    fn pi0_fibrewise_on_discrete_fibres_is_iso() {
        let pf = simple_strict_pf();
        let g = grothendieck_construction(&pf).unwrap();
        // Collapse to π₀: fibre over 1 is the arrow category → one class.
        let res = fibrewise_apply(&g.proj, &g.cleavage, Reflection::Pi0).unwrap();
        assert!(res.q.validate().is_valid());
        assert!(res.s.validate().is_valid());
        assert!(FunctorData::compose(&res.s, &res.q).same_as(&g.proj));
        assert!(fibcheck::is_discrete(&res.s, Side::Fibration));
        assert!(res.pseudofunctor.validate().is_valid());
    }

    #[test]
    fn groupoid_fibrewise_keeps_fibration_and_groupoidal_fibres() {
        let pf = simple_strict_pf();
        let g = grothendieck_construction(&pf).unwrap();
        let res = fibrewise_apply(&g.proj, &g.cleavage, Reflection::Groupoid(10_000)).unwrap();
        assert!(res.q.validate().is_valid());
        assert!(FunctorData::compose(&res.s, &res.q).same_as(&g.proj));
        let report = fibcheck::is_fibration(&res.s, &[Criterion::Direct]);
        assert!(report.verdict());
        assert!(fibcheck::has_groupoidal_fibres(&res.s));
        assert!(fibcheck::is_conservative(&res.s));
    }
}

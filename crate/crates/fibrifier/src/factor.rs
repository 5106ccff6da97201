//! The comprehensive factorization (final functor, discrete fibration) and
//! the groupoid-fibre factorization (coinverter leg, conservative fibration),
//! in Cat and fibrewise over a base, with classification predicates and the
//! executable "coincides with" comparisons.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::adjoint;
use crate::builders;
use crate::cat::{opposite, FinCat, FunctorData, Mor, Obj, ValidationReport};
use crate::colim;
use crate::comma::{self, MonadKind, Side};
use crate::error::CatError;
use crate::fibcheck::{self, Cleavage, Criterion};
use crate::groth::{self, GrothendieckTotal, Reflection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Comprehensive,
    Groupoid,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceItem {
    pub label: String,
    pub holds: bool,
}

/// A factorization f = s ∘ q through `mid`, with classification evidence.
#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub q: FunctorData,
    pub mid: Arc<FinCat>,
    pub s: FunctorData,
    pub kind: FactorKind,
    pub evidence: Vec<EvidenceItem>,
    /// Present when produced in the fibrewise layer: the structure map
    /// mid → B.
    pub over_base: Option<FunctorData>,
}

impl FactorizationResult {
    pub fn evidence_holds(&self) -> bool {
        self.evidence.iter().all(|e| e.holds)
    }

    pub fn input(&self) -> FunctorData {
        FunctorData::compose(&self.s, &self.q)
    }
}

/// Final functor: every comma b/f is nonempty and connected.
pub fn is_final(f: &FunctorData) -> bool {
    let one = builders::terminal();
    (0..f.target.object_count()).all(|b| {
        let cb = comma::comma(&FunctorData::constant(&one, &f.target, b), f)
            .expect("shared target");
        if cb.cat.object_count() == 0 {
            return false;
        }
        let (classes, _) = adjoint::connected_components(&cb.cat);
        classes.iter().all(|&c| c == 0)
    })
}

/// Initial functor: every comma f/b is nonempty and connected.
pub fn is_initial(f: &FunctorData) -> bool {
    let one = builders::terminal();
    (0..f.target.object_count()).all(|b| {
        let cb = comma::comma(f, &FunctorData::constant(&one, &f.target, b))
            .expect("shared target");
        if cb.cat.object_count() == 0 {
            return false;
        }
        let (classes, _) = adjoint::connected_components(&cb.cat);
        classes.iter().all(|&c| c == 0)
    })
}

/// The canonical split cleavage of the R-monad carrier B/f → B: the lift of
/// β at (b, a, γ) is (β, id_a) from (b', a, γ∘β).
pub fn canonical_r_cleavage(inst: &comma::MonadInstance) -> Cleavage {
    let c = &inst.comma;
    let b = &inst.carrier.target;
    let mut lifts = HashMap::new();
    for i in 0..c.cat.object_count() {
        let (bobj, a_obj, gamma) = c.decode[i];
        for beta in 0..b.mor_count() {
            if b.cod(beta) != bobj {
                continue;
            }
            if b.is_identity(beta) {
                lifts.insert((i, beta), (i, c.cat.id(i)));
                continue;
            }
            let src = c
                .encode_obj(b.dom(beta), a_obj, b.compose(gamma, beta))
                .expect("composite comma object");
            let m = c
                .encode_mor(src, i, beta, inst.unit.source.id(a_obj))
                .expect("canonical lift");
            lifts.insert((i, beta), (src, m));
        }
    }
    Cleavage { lifts }
}

/// Comprehensive factorization of an arbitrary functor: the middle is the
/// Grothendieck total of b ↦ π₀(b/f), reached by the free R-algebra followed
/// by the fibrewise discrete reflection; q is final (resp. initial) and s a
/// discrete (op)fibration. Always terminates.
pub fn comprehensive_factorization(f: &FunctorData, side: Side) -> Result<FactorizationResult, CatError> {
    match side {
        Side::Fibration => {
            let inst = comma::monad_on_slice(MonadKind::R, f);
            let cleavage = canonical_r_cleavage(&inst);
            let fw = groth::fibrewise_apply(&inst.carrier, &cleavage, Reflection::Pi0)?;
            let q = FunctorData::compose(&fw.q, &inst.unit);
            let s = fw.s.clone();
            let evidence = vec![
                EvidenceItem { label: "q-final".into(), holds: is_final(&q) },
                EvidenceItem {
                    label: "s-discrete-fibration".into(),
                    holds: fibcheck::is_discrete(&s, Side::Fibration),
                },
                EvidenceItem {
                    label: "composite-equals-input".into(),
                    holds: FunctorData::compose(&s, &q).same_as(f),
                },
            ];
            Ok(FactorizationResult { q, mid: fw.mid.total.clone(), s, kind: FactorKind::Comprehensive, evidence, over_base: None })
        }
        Side::Opfibration => {
            let dual = comprehensive_factorization(&f.opposite(), Side::Fibration)?;
            let (q, mid, s) = unoppose(f, &dual);
            let evidence = vec![
                EvidenceItem { label: "q-initial".into(), holds: is_initial(&q) },
                EvidenceItem {
                    label: "s-discrete-opfibration".into(),
                    holds: fibcheck::is_discrete(&s, Side::Opfibration),
                },
                EvidenceItem {
                    label: "composite-equals-input".into(),
                    holds: FunctorData::compose(&s, &q).same_as(f),
                },
            ];
            Ok(FactorizationResult { q, mid, s, kind: FactorKind::Comprehensive, evidence, over_base: None })
        }
    }
}

/// Transports a factorization computed on the opposite functor back; the
/// double opposite of every table is bit-identical, so the maps carry over
/// unchanged.
fn unoppose(f: &FunctorData, dual: &FactorizationResult) -> (FunctorData, Arc<FinCat>, FunctorData) {
    let mid = Arc::new(opposite(&dual.mid));
    let q = FunctorData {
        source: f.source.clone(),
        target: mid.clone(),
        obj_map: dual.q.obj_map.clone(),
        mor_map: dual.q.mor_map.clone(),
    };
    let s = FunctorData {
        source: mid.clone(),
        target: f.target.clone(),
        obj_map: dual.s.obj_map.clone(),
        mor_map: dual.s.mor_map.clone(),
    };
    (q, mid, s)
}

/// Groupoid-fibre factorization of an (op)fibration: q is the coinverter of
/// the identee computed by the fibrewise groupoid fast path; s is an
/// (op)fibration with groupoidal fibres, equivalently conservative.
pub fn groupoid_fibre_factorization(
    f: &FunctorData,
    side: Side,
    cap: usize,
) -> Result<FactorizationResult, CatError> {
    match side {
        Side::Fibration => {
            let cleavage = fibcheck::extract_cleavage(f).ok_or(CatError::NotAFibration)?;
            let fw = groth::fibrewise_apply(f, &cleavage, Reflection::Groupoid(cap))?;
            let report = fibcheck::is_fibration(&fw.s, &[Criterion::Direct]);
            let evidence = vec![
                EvidenceItem { label: "s-fibration".into(), holds: report.verdict() },
                EvidenceItem {
                    label: "s-groupoidal-fibres".into(),
                    holds: fibcheck::has_groupoidal_fibres(&fw.s),
                },
                EvidenceItem { label: "s-conservative".into(), holds: fibcheck::is_conservative(&fw.s) },
                EvidenceItem {
                    label: "composite-equals-input".into(),
                    holds: FunctorData::compose(&fw.s, &fw.q).same_as(f),
                },
            ];
            Ok(FactorizationResult { q: fw.q, mid: fw.mid.total.clone(), s: fw.s, kind: FactorKind::Groupoid, evidence, over_base: None })
        }
        Side::Opfibration => {
            let dual = groupoid_fibre_factorization(&f.opposite(), Side::Fibration, cap)?;
            let (q, mid, s) = unoppose(f, &dual);
            let report = fibcheck::is_opfibration(&s, &[Criterion::Direct]);
            let evidence = vec![
                EvidenceItem { label: "s-opfibration".into(), holds: report.verdict() },
                EvidenceItem {
                    label: "s-groupoidal-fibres".into(),
                    holds: fibcheck::has_groupoidal_fibres(&s),
                },
                EvidenceItem { label: "s-conservative".into(), holds: fibcheck::is_conservative(&s) },
                EvidenceItem {
                    label: "composite-equals-input".into(),
                    holds: FunctorData::compose(&s, &q).same_as(f),
                },
            ];
            Ok(FactorizationResult { q, mid, s, kind: FactorKind::Groupoid, evidence, over_base: None })
        }
    }
}

/// A morphism of cleaved fibrations over a common base: g ∘ p = f strictly,
/// p carrying chosen cartesian arrows to cartesian arrows.
#[derive(Clone, Debug)]
pub struct FibBMorphism {
    pub f: FunctorData,
    pub f_cleavage: Cleavage,
    pub g: FunctorData,
    pub g_cleavage: Cleavage,
    pub p: FunctorData,
}

impl FibBMorphism {
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.f.validate();
        report.merge(self.g.validate());
        report.merge(self.p.validate());
        if *self.f.target != *self.g.target {
            report.push("fibb-shared-base", vec![]);
            return report;
        }
        if !FunctorData::compose(&self.g, &self.p).same_as(&self.f) {
            report.push("fibb-triangle", vec![]);
        }
        for (&(a, beta), &(a1, alpha)) in &self.f_cleavage.lifts {
            let src = &self.f.source;
            if src.cod(alpha) != a
                || src.dom(alpha) != a1
                || self.f.mor_map[alpha] != beta
                || !fibcheck::is_cartesian_arrow(&self.f, alpha)
            {
                report.push("fibb-f-cleavage", vec![a, beta]);
            }
        }
        for (&(c, beta), &(c1, alpha)) in &self.g_cleavage.lifts {
            let src = &self.g.source;
            if src.cod(alpha) != c
                || src.dom(alpha) != c1
                || self.g.mor_map[alpha] != beta
                || !fibcheck::is_cartesian_arrow(&self.g, alpha)
            {
                report.push("fibb-g-cleavage", vec![c, beta]);
            }
        }
        if !fibcheck::is_cartesian_functor(&self.p, &self.f_cleavage, &self.g) {
            report.push("fibb-cartesian-functor", vec![]);
        }
        report
    }

    /// Strict morphism of cleaved fibrations: chosen lifts map to chosen
    /// lifts on the nose.
    pub fn preserves_cleavage_strictly(&self) -> bool {
        self.f_cleavage.lifts.iter().all(|(&(a, beta), &(a1, alpha))| {
            self.g_cleavage.lifts.get(&(self.p.obj_map[a], beta))
                == Some(&(self.p.obj_map[a1], self.p.mor_map[alpha]))
        })
    }
}

/// Restriction of p to every b-fibre is a (discrete) opfibration.
pub fn is_fibrewise_opfibration(m: &FibBMorphism, discrete: bool) -> bool {
    let fa = groth::fibres_of(&m.f);
    let fc = groth::fibres_of(&m.g);
    (0..m.f.target.object_count()).all(|b| {
        let pb = groth::restrict_to_fibre(&m.p, &fa[b], &fc[b]);
        if discrete {
            fibcheck::is_discrete(&pb, Side::Opfibration)
        } else {
            fibcheck::is_opfibration(&pb, &[Criterion::Direct]).verdict()
        }
    })
}

/// Colimit choice for the fibrewise factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibBMode {
    /// Per-fibre comprehensive factorization (coidentifier of the identee).
    Coidentifier,
    /// Per-fibre groupoid factorization (coinverter of the identee).
    Coinverter,
}

/// Fibrewise factorization of a fibrewise opfibration p: (A,f) → (C,g) over
/// B: per-fibre factorizations q_b, s_b reassembled with the reindexings and
/// coherence induced by the universal property of the q_b's.
pub fn factor_in_fibb(
    m: &FibBMorphism,
    mode: FibBMode,
    cap: usize,
) -> Result<FactorizationResult, CatError> {
    if !is_fibrewise_opfibration(m, false) {
        return Err(CatError::NotFibrewiseOpfibration);
    }
    if !m.preserves_cleavage_strictly() {
        return Err(CatError::CleavageNotPreserved);
    }
    let base = &m.f.target;
    let (pf_a, fa) = groth::to_pseudofunctor(&m.f, &m.f_cleavage)?;
    let fc = groth::fibres_of(&m.g);
    // Per-fibre factorization.
    let mut units = Vec::new(); // q_b : A_b → Q_b
    let mut legs = Vec::new(); // s_b : Q_b → C_b
    let mut mids: Vec<Arc<FinCat>> = Vec::new();
    for b in 0..base.object_count() {
        let pb = groth::restrict_to_fibre(&m.p, &fa[b], &fc[b]);
        let fac = match mode {
            FibBMode::Coidentifier => comprehensive_factorization(&pb, Side::Opfibration)?,
            FibBMode::Coinverter => groupoid_fibre_factorization(&pb, Side::Opfibration, cap)?,
        };
        units.push(fac.q.clone());
        legs.push(fac.s.clone());
        mids.push(fac.mid.clone());
    }
    // Induced reindexing Q_b → Q_{b'} along each β: b' → b.
    let mut new_reindex = Vec::with_capacity(base.mor_count());
    for beta in 0..base.mor_count() {
        let (lo, hi) = (base.dom(beta), base.cod(beta));
        let through = FunctorData::compose(&units[lo], &pf_a.reindex[beta]);
        let induced = match mode {
            FibBMode::Coinverter => colim::factor_through_localization(&units[hi], &through)
                .ok_or_else(|| CatError::Invalid("fibrewise reindexing did not factor".into()))?,
            FibBMode::Coidentifier => {
                induce_along_discrete_leg(&units[hi], &legs[hi], &units[lo], &legs[lo], &through, &reindex_on_c(m, &fc, beta))?
            }
        };
        // The induced square must commute with the legs as well.
        let lhs = FunctorData::compose(&legs[lo], &induced);
        let rhs = FunctorData::compose(&reindex_on_c(m, &fc, beta), &legs[hi]);
        if !lhs.same_as(&rhs) {
            return Err(CatError::Invalid("legs do not intertwine the reindexing".into()));
        }
        new_reindex.push(induced);
    }
    // Coherence cells pushed along the units (identities for split corpus
    // data, but computed generally), indexed by factored objects.
    let mut unit_iso = Vec::with_capacity(base.object_count());
    for b in 0..base.object_count() {
        let mut pushed = vec![usize::MAX; mids[b].object_count()];
        for (x, &c) in pf_a.unit_iso[b].iter().enumerate() {
            let qx = units[b].obj_map[x];
            let val = units[b].mor_map[c];
            if pushed[qx] == usize::MAX {
                pushed[qx] = val;
            } else if pushed[qx] != val {
                return Err(CatError::Invalid("unit cell not constant on classes".into()));
            }
        }
        if pushed.contains(&usize::MAX) {
            return Err(CatError::Invalid("unit not surjective on objects".into()));
        }
        unit_iso.push(pushed);
    }
    let mut comp_iso = HashMap::new();
    for (&(beta, beta2), cell) in &pf_a.comp_iso {
        let (lo, hi) = (base.dom(beta2), base.cod(beta));
        let mid_hi = &mids[hi];
        let mut pushed = vec![usize::MAX; mid_hi.object_count()];
        for (x, &c) in cell.iter().enumerate() {
            let qx = units[hi].obj_map[x];
            let val = units[lo].mor_map[c];
            if pushed[qx] == usize::MAX {
                pushed[qx] = val;
            } else if pushed[qx] != val {
                return Err(CatError::Invalid("coherence not constant on classes".into()));
            }
        }
        if pushed.contains(&usize::MAX) {
            return Err(CatError::Invalid("unit not surjective on objects".into()));
        }
        comp_iso.insert((beta, beta2), pushed);
    }
    let new_pf = groth::PseudoFunctorData {
        base: base.clone(),
        fibres: mids.clone(),
        reindex: new_reindex,
        unit_iso,
        comp_iso,
    };
    let mid_total = groth::grothendieck_construction(&new_pf)?;
    let q = assemble_q(&m.f, &m.f_cleavage, &fa, &units, &mid_total)?;
    let s = assemble_s(m, &fc, &legs, &new_pf, &mid_total)?;
    let h = mid_total.proj.clone();
    // Evidence.
    let q_cartesian = fibcheck::is_cartesian_functor(&q, &m.f_cleavage, &h);
    let h_fibration = fibcheck::is_fibration(&h, &[Criterion::Direct]).verdict();
    let s_class = {
        
        (0..base.object_count()).all(|b| match mode {
            FibBMode::Coidentifier => fibcheck::is_discrete(&legs[b], Side::Opfibration),
            FibBMode::Coinverter => {
                fibcheck::is_opfibration(&legs[b], &[Criterion::Direct]).verdict()
                    && fibcheck::has_groupoidal_fibres(&legs[b])
            }
        })
    };
    let evidence = vec![
        EvidenceItem {
            label: "composite-equals-p".into(),
            holds: FunctorData::compose(&s, &q).same_as(&m.p),
        },
        EvidenceItem { label: "q-cartesian-over-base".into(), holds: q_cartesian },
        EvidenceItem { label: "mid-structure-fibration".into(), holds: h_fibration },
        EvidenceItem {
            label: match mode {
                FibBMode::Coidentifier => "s-fibrewise-discrete-opfibration".into(),
                FibBMode::Coinverter => "s-fibrewise-opfibration-in-groupoids".into(),
            },
            holds: s_class,
        },
        EvidenceItem {
            label: "g-compatible".into(),
            holds: FunctorData::compose(&m.g, &s).same_as(&h),
        },
    ];
    Ok(FactorizationResult {
        q,
        mid: mid_total.total.clone(),
        s,
        kind: match mode {
            FibBMode::Coidentifier => FactorKind::Comprehensive,
            FibBMode::Coinverter => FactorKind::Groupoid,
        },
        evidence,
        over_base: Some(h),
    })
}

/// β-reindexing on the fibres of g, via the chosen cleavage.
fn reindex_on_c(m: &FibBMorphism, fc: &[groth::FibrePresentation], beta: Mor) -> FunctorData {
    let base = &m.g.target;
    let (lo, hi) = (base.dom(beta), base.cod(beta));
    let c = &m.g.source;
    let upper = &fc[hi];
    let lower = &fc[lo];
    let obj_map: Vec<Obj> = upper
        .obj_to_total
        .iter()
        .map(|&x| lower.obj_from_total[&m.g_cleavage.lifts[&(x, beta)].0])
        .collect();
    let mor_map: Vec<Mor> = (0..upper.cat.mor_count())
        .map(|mm| {
            let v = upper.mor_to_total[mm];
            let (x1, x2) = (c.dom(v), c.cod(v));
            let (_, l1) = m.g_cleavage.lifts[&(x1, beta)];
            let (y2, l2) = m.g_cleavage.lifts[&(x2, beta)];
            let target = c.compose(v, l1);
            let w = c
                .hom(c.dom(l1), y2)
                .iter()
                .copied()
                .find(|&w| {
                    m.g.target.is_identity(m.g.mor_map[w]) && c.compose(l2, w) == target
                })
                .expect("vertical factorization through a cartesian lift");
            lower.mor_from_total[&w]
        })
        .collect();
    FunctorData { source: upper.cat.clone(), target: lower.cat.clone(), obj_map, mor_map }
}

/// Transport of the comprehensive middles along β via the discrete leg:
/// objects are forced by the units, morphisms are the unique s-lifts.
fn induce_along_discrete_leg(
    unit_hi: &FunctorData,
    leg_hi: &FunctorData,
    unit_lo: &FunctorData,
    leg_lo: &FunctorData,
    through: &FunctorData,
    c_reindex: &FunctorData,
) -> Result<FunctorData, CatError> {
    let q_hi = &unit_hi.target;
    let q_lo = &unit_lo.target;
    let mut obj_map = vec![usize::MAX; q_hi.object_count()];
    for (x, &qx) in unit_hi.obj_map.iter().enumerate() {
        let want = through.obj_map[x];
        if obj_map[qx] == usize::MAX {
            obj_map[qx] = want;
        } else if obj_map[qx] != want {
            return Err(CatError::Invalid("reindexing not constant on classes".into()));
        }
    }
    if obj_map.contains(&usize::MAX) {
        return Err(CatError::Invalid("unit not surjective on objects".into()));
    }
    let mut mor_map = Vec::with_capacity(q_hi.mor_count());
    for mu in 0..q_hi.mor_count() {
        let gamma = leg_hi.mor_map[mu];
        let gamma_lo = c_reindex.mor_map[gamma];
        let from = obj_map[q_hi.dom(mu)];
        // Unique lift of γ' with the given domain along the discrete
        // opfibration leg of the lower fibre.
        let mut found = None;
        for cand in 0..q_lo.mor_count() {
            if q_lo.dom(cand) == from && leg_lo.mor_map[cand] == gamma_lo {
                if found.is_some() {
                    return Err(CatError::Invalid("discrete leg lift not unique".into()));
                }
                found = Some(cand);
            }
        }
        mor_map.push(found.ok_or_else(|| CatError::Invalid("discrete leg lift missing".into()))?);
    }
    let induced = FunctorData { source: q_hi.clone(), target: q_lo.clone(), obj_map, mor_map };
    if !induced.validate().is_valid() {
        return Err(CatError::Invalid("induced reindexing is not a functor".into()));
    }
    if !FunctorData::compose(&induced, unit_hi).same_as(through) {
        return Err(CatError::Invalid("induced reindexing does not intertwine units".into()));
    }
    Ok(induced)
}

/// q : A → mid over B assembled from the fibre units: a morphism α factors
/// through the chosen lift of f(α) as α = lift ∘ v with v vertical, and maps
/// to (f α, q_b(v)).
fn assemble_q(
    f: &FunctorData,
    cleavage: &Cleavage,
    fibres: &[groth::FibrePresentation],
    units: &[FunctorData],
    mid: &GrothendieckTotal,
) -> Result<FunctorData, CatError> {
    let a = &f.source;
    let obj_map: Vec<Obj> = (0..a.object_count())
        .map(|x| {
            let b = f.obj_map[x];
            let xf = fibres[b].obj_from_total[&x];
            mid.encode_obj(b, units[b].obj_map[xf]).unwrap()
        })
        .collect();
    let mut mor_map = Vec::with_capacity(a.mor_count());
    for alpha in 0..a.mor_count() {
        let beta = f.mor_map[alpha];
        let x_to = a.cod(alpha);
        let b_from = f.obj_map[a.dom(alpha)];
        let (_, lift) = cleavage.lifts[&(x_to, beta)];
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
        let mm = mid
            .encode_mor(obj_map[a.dom(alpha)], obj_map[x_to], beta, xi)
            .ok_or_else(|| CatError::Invalid("fibrewise image not encodable".into()))?;
        mor_map.push(mm);
    }
    let q = FunctorData { source: f.source.clone(), target: mid.total.clone(), obj_map, mor_map };
    if !q.validate().is_valid() {
        return Err(CatError::Invalid("assembled q is not a functor".into()));
    }
    Ok(q)
}

/// s : mid → C over B: on a morphism (β, ξ) it is the chosen g-lift of β
/// composed with the fibre image of ξ.
fn assemble_s(
    m: &FibBMorphism,
    fc: &[groth::FibrePresentation],
    legs: &[FunctorData],
    new_pf: &groth::PseudoFunctorData,
    mid: &GrothendieckTotal,
) -> Result<FunctorData, CatError> {
    let c = &m.g.source;
    let obj_map: Vec<Obj> = mid
        .obj_decode
        .iter()
        .map(|&(b, y)| fc[b].obj_to_total[legs[b].obj_map[y]])
        .collect();
    let mut mor_map = Vec::with_capacity(mid.total.mor_count());
    for mm in 0..mid.total.mor_count() {
        let (beta, xi) = mid.mor_decode[mm];
        let (i, j) = (mid.total.dom(mm), mid.total.cod(mm));
        let (b_lo, _) = mid.obj_decode[i];
        let (b_hi, y) = mid.obj_decode[j];
        let _ = b_hi;
        // ξ : y' → reindexQ(β)(y) in Q_{b_lo}; its leg image lands at the
        // reindexed object of C; compose with the chosen lift.
        let c_target = fc[new_pf.base.cod(beta)].obj_to_total[legs[new_pf.base.cod(beta)].obj_map[y]];
        let (_, lift) = m.g_cleavage.lifts[&(c_target, beta)];
        let xi_c = fc[b_lo].mor_to_total[legs[b_lo].mor_map[xi]];
        mor_map.push(c.compose(lift, xi_c));
    }
    let s = FunctorData { source: mid.total.clone(), target: m.g.source.clone(), obj_map, mor_map };
    if !s.validate().is_valid() {
        return Err(CatError::Invalid("assembled s is not a functor".into()));
    }
    Ok(s)
}

/// Searches an isomorphism of middles commuting with both legs. None is a
/// reportable discrepancy between two factorizations of the same functor.
pub fn compare_factorizations(
    a: &FactorizationResult,
    b: &FactorizationResult,
) -> Option<(FunctorData, FunctorData)> {
    if !a.input().same_as(&b.input()) {
        return None;
    }
    let mut pinned_obj = vec![None; a.mid.object_count()];
    for (x, &qa) in a.q.obj_map.iter().enumerate() {
        match pinned_obj[qa] {
            None => pinned_obj[qa] = Some(b.q.obj_map[x]),
            Some(prev) if prev == b.q.obj_map[x] => {}
            Some(_) => return None,
        }
    }
    let mut pinned_mor = vec![None; a.mid.mor_count()];
    for (mm, &qa) in a.q.mor_map.iter().enumerate() {
        match pinned_mor[qa] {
            None => pinned_mor[qa] = Some(b.q.mor_map[mm]),
            Some(prev) if prev == b.q.mor_map[mm] => {}
            Some(_) => return None,
        }
    }
    let s_a = a.s.clone();
    let s_b = b.s.clone();
    let filter = move |mm: Mor, img: Mor| s_a.mor_map[mm] == s_b.mor_map[img];
    let iso = adjoint::find_isomorphism_constrained(&a.mid, &b.mid, &pinned_obj, &pinned_mor, Some(&filter))?;
    let inv = iso.inverse_functor()?;
    // Commutation with both legs.
    if !FunctorData::compose(&iso, &a.q).same_as(&b.q) {
        return None;
    }
    if !FunctorData::compose(&b.s, &iso).same_as(&a.s) {
        return None;
    }
    Some((iso, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colim;

    #[test]
    fn final_and_initial_of_identity() {
        let c = builders::comm_square_poset();
        let id = FunctorData::identity(&c);
        assert!(is_final(&id));
        assert!(is_initial(&id));
    }

    #[test]
    fn inclusion_into_discrete_pair_is_not_final() {
        let one = builders::terminal();
        let d2 = builders::discrete(2);
        let f = FunctorData::constant(&one, &d2, 0);
        assert!(!is_final(&f));
        assert!(!is_initial(&f));
    }

    #[test]
    fn comprehensive_factorization_of_collapse() {
        // f: 2 → 1 is final; mid = 1, s = identity.
        let two = builders::arrow();
        let f = builders::to_terminal(&two);
        let fac = comprehensive_factorization(&f, Side::Fibration).unwrap();
        assert!(fac.evidence_holds(), "{:?}", fac.evidence);
        assert_eq!(fac.mid.object_count(), 1);
        assert_eq!(fac.mid.mor_count(), 1);
        assert!(fac.q.same_as(&FunctorData {
            source: two.clone(),
            target: fac.mid.clone(),
            obj_map: vec![0, 0],
            mor_map: vec![0, 0, 0],
        }));
    }

    #[test]
    fn comprehensive_factorization_both_sides_of_example() {
        for side in [Side::Fibration, Side::Opfibration] {
            let f = builders::arrow_to_iso_pair();
            let fac = comprehensive_factorization(&f, side).unwrap();
            assert!(fac.evidence_holds(), "{side:?}: {:?}", fac.evidence);
            assert!(fac.q.validate().is_valid());
            assert!(fac.s.validate().is_valid());
        }
    }

    #[test]
    fn comprehensive_of_discrete_fibration_is_trivial() {
        // A discrete fibration: slice projection C/1 → C.
        let c = builders::comm_square_poset();
        let one = builders::terminal();
        let cb = comma::comma(&FunctorData::identity(&c), &FunctorData::constant(&one, &c, 1)).unwrap();
        let f = cb.left_proj.clone();
        let fac = comprehensive_factorization(&f, Side::Fibration).unwrap();
        assert!(fac.evidence_holds());
        assert!(fac.q.is_bijective(), "q is an isomorphism when f is already discrete");
    }

    #[test]
    fn comprehensive_agrees_with_coidentifier_of_identee() {
        // For a fibration, the coidentifier-of-identee path and the
        // π₀-Grothendieck path produce the same factorization.
        let pf = groth::PseudoFunctorData::strict(
            builders::arrow(),
            vec![builders::arrow(), builders::discrete(2)],
            vec![
                FunctorData::identity(&builders::arrow()),
                FunctorData::identity(&builders::discrete(2)),
                FunctorData {
                    source: builders::discrete(2),
                    target: builders::arrow(),
                    obj_map: vec![0, 1],
                    mor_map: vec![0, 1],
                },
            ],
        );
        let g = groth::grothendieck_construction(&pf).unwrap();
        let f = g.proj.clone();
        let fac = comprehensive_factorization(&f, Side::Fibration).unwrap();
        assert!(fac.evidence_holds());
        // Independent path: generic congruence closure on the identee.
        let ide = colim::identee(&f);
        let quot = colim::coidentifier(&ide, 10_000).unwrap();
        let sbar = quot.factor_through(&f).expect("f kills its identee");
        let alt = FactorizationResult {
            q: quot.proj.clone(),
            mid: quot.cat.clone(),
            s: sbar,
            kind: FactorKind::Comprehensive,
            evidence: vec![],
            over_base: None,
        };
        let cmp = compare_factorizations(&fac, &alt);
        assert!(cmp.is_some(), "two comprehensive paths disagree");
    }

    #[test]
    fn groupoid_factorization_of_a_fibration() {
        let pf = groth::PseudoFunctorData::strict(
            builders::arrow(),
            vec![builders::arrow(), builders::discrete(2)],
            vec![
                FunctorData::identity(&builders::arrow()),
                FunctorData::identity(&builders::discrete(2)),
                FunctorData {
                    source: builders::discrete(2),
                    target: builders::arrow(),
                    obj_map: vec![0, 1],
                    mor_map: vec![0, 1],
                },
            ],
        );
        let g = groth::grothendieck_construction(&pf).unwrap();
        let fac = groupoid_fibre_factorization(&g.proj, Side::Fibration, 10_000).unwrap();
        assert!(fac.evidence_holds(), "{:?}", fac.evidence);
        // Idempotence: refactoring s gives an isomorphic q.
        let again = groupoid_fibre_factorization(&fac.s, Side::Fibration, 10_000).unwrap();
        assert!(again.q.is_bijective());
    }

    #[test]
    fn orthogonality_diagonal_fillers_are_unique() {
        // For the self-square of a factorization (final vs discrete
        // fibration; coinverter leg vs conservative fibration), the diagonal
        // filler is unique: exactly one endofunctor of the middle commutes
        // with both legs.
        let f = builders::arrow_to_iso_pair();
        for fac in [
            comprehensive_factorization(&f, Side::Fibration).unwrap(),
            comprehensive_factorization(&f, Side::Opfibration).unwrap(),
        ] {
            let fillers = crate::adjoint::enumerate_functors(&fac.mid, &fac.mid)
                .into_iter()
                .filter(|d| {
                    FunctorData::compose(d, &fac.q).same_as(&fac.q)
                        && FunctorData::compose(&fac.s, d).same_as(&fac.s)
                })
                .count();
            assert_eq!(fillers, 1);
        }
        let fib = crate::corpus::gen_fibration(&crate::corpus::GenConfig::with_seed(3));
        let fac = groupoid_fibre_factorization(&fib.proj, Side::Fibration, 10_000).unwrap();
        if fac.mid.mor_count() <= 12 {
            let fillers = crate::adjoint::enumerate_functors(&fac.mid, &fac.mid)
                .into_iter()
                .filter(|d| {
                    FunctorData::compose(d, &fac.q).same_as(&fac.q)
                        && FunctorData::compose(&fac.s, d).same_as(&fac.s)
                })
                .count();
            assert_eq!(fillers, 1);
        }
    }

    #[test]
    fn point_into_iso_pair_is_not_fibrewise_opfibration() {
        // Over the terminal base, the fibre restriction of p: 1 → I is p
        // itself, which is not an opfibration.
        let one = builders::terminal();
        let p = builders::point_of_iso_pair();
        let f = FunctorData::constant(&p.source, &one, 0);
        let g = FunctorData::constant(&p.target, &one, 0);
        let m = FibBMorphism {
            f_cleavage: identity_cleavage_for_test(&f),
            g_cleavage: identity_cleavage_for_test(&g),
            f,
            g,
            p,
        };
        assert!(m.validate().is_valid());
        assert!(!is_fibrewise_opfibration(&m, false));
        assert!(matches!(
            factor_in_fibb(&m, FibBMode::Coinverter, 10_000),
            Err(CatError::NotFibrewiseOpfibration)
        ));
    }

    #[test]
    fn single_fibre_collapse_localizes_to_iso_pair() {
        // p: 2 → 1 over the terminal base; the coinverter mode reflects the
        // only fibre into its groupoid, whose vertex structure is the iso
        // pair.
        let one = builders::terminal();
        let two = builders::arrow();
        let p = builders::to_terminal(&two);
        let f = FunctorData::constant(&two, &one, 0);
        let g = FunctorData::identity(&one);
        let m = FibBMorphism {
            f_cleavage: identity_cleavage_for_test(&f),
            g_cleavage: identity_cleavage_for_test(&g),
            f,
            g,
            p,
        };
        assert!(m.validate().is_valid());
        let fac = factor_in_fibb(&m, FibBMode::Coinverter, 10_000).unwrap();
        assert!(fac.evidence_holds(), "{:?}", fac.evidence);
        assert!(adjoint::find_isomorphism(&fac.mid, &builders::iso_pair()).is_some());
    }

    fn identity_cleavage_for_test(f: &FunctorData) -> Cleavage {
        let mut lifts = HashMap::new();
        for a in 0..f.source.object_count() {
            for beta in 0..f.target.mor_count() {
                if f.target.cod(beta) == f.obj_map[a] && f.target.is_identity(beta) {
                    lifts.insert((a, beta), (a, f.source.id(a)));
                }
            }
        }
        Cleavage { lifts }
    }

    #[test]
    fn empty_source_factors_vacuously() {
        use std::sync::Arc;
        let empty = Arc::new(crate::cat::FinCat::from_parts(0, vec![], vec![], &[]).unwrap());
        assert!(empty.validate().is_valid());
        let b = builders::iso_pair();
        let f = FunctorData { source: empty, target: b, obj_map: vec![], mor_map: vec![] };
        assert!(f.validate().is_valid());
        let fac = comprehensive_factorization(&f, Side::Fibration).unwrap();
        assert!(fac.evidence_holds(), "{:?}", fac.evidence);
        assert_eq!(fac.mid.object_count(), 0);
    }

    #[test]
    fn comparing_distinct_kinds_fails() {
        let two = builders::arrow();
        let f = builders::to_terminal(&two);
        let a = comprehensive_factorization(&f, Side::Fibration).unwrap();
        let b = groupoid_fibre_factorization(&f, Side::Fibration, 10_000).unwrap();
        // mid of a is 1; mid of b is the groupoid reflection I — different.
        assert!(compare_factorizations(&a, &b).is_none());
    }
}

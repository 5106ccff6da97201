//! Cartesian-arrow calculus and the fibration-class predicates: three
//! cross-validating fibration criteria (direct lifts, Chevalley adjoint,
//! slice-algebra adjoint), plus isofibration / Street / discrete /
//! conservative checks and the vertical-iso factorization.

use std::collections::HashMap;

use serde::Serialize;

use crate::adjoint::{self, AdjunctionData};
use crate::cat::{FunctorData, Mor, NatTransData, Obj};
use crate::comma::{self, MonadKind};
use crate::error::CatError;

pub use crate::comma::Side;

/// A chosen cartesian lift for every (object, incoming base arrow) pair.
/// Normalized: identities lift to identities.
#[derive(Clone, Debug, Default)]
pub struct Cleavage {
    /// (a, β with cod β = f a) → (a', α: a' → a with f α = β, α cartesian).
    pub lifts: HashMap<(Obj, Mor), (Obj, Mor)>,
}

/// Which of the three equivalent criteria to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Direct,
    Chevalley,
    Algebra,
}

pub const ALL_CRITERIA: [Criterion; 3] = [Criterion::Direct, Criterion::Chevalley, Criterion::Algebra];

/// Witness for a fibration verdict: either the first (object, base arrow)
/// with no lift, or nothing (the adjunction data is too large to embed).
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FibWitness {
    MissingLift { object: Obj, base_mor: Mor },
    NoAdjoint { criterion: Criterion },
    NonVertical { criterion: Criterion },
}

/// Per-criterion verdicts. A disagreement contradicts the equivalence
/// theorem: it is a bug in exactly one of the three routes and is surfaced
/// loudly by `agreement`.
#[derive(Clone, Debug, Serialize)]
pub struct FibReport {
    pub direct: Option<bool>,
    pub chevalley: Option<bool>,
    pub algebra: Option<bool>,
    pub witness: Option<FibWitness>,
    pub agreement: bool,
}

impl FibReport {
    pub fn verdict(&self) -> bool {
        self.agreement
            && [self.direct, self.chevalley, self.algebra]
                .iter()
                .flatten()
                .all(|&v| v)
    }
}

/// Strong cartesianness: every δ: a'' → a over a factorization of f(δ)
/// through f(α) lifts uniquely through α.
pub fn is_cartesian_arrow(f: &FunctorData, alpha: Mor) -> bool {
    let (a, b) = (&f.source, &f.target);
    let a1 = a.dom(alpha);
    let a0 = a.cod(alpha);
    let f_alpha = f.mor_map[alpha];
    for a2 in 0..a.object_count() {
        for &delta in a.hom(a2, a0) {
            for &g in b.hom(f.obj_map[a2], b.dom(f_alpha)) {
                if b.compose(f_alpha, g) != f.mor_map[delta] {
                    continue;
                }
                let mut hits = 0;
                for &phi in a.hom(a2, a1) {
                    if f.mor_map[phi] == g && a.compose(alpha, phi) == delta {
                        hits += 1;
                    }
                }
                if hits != 1 {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_opcartesian_arrow(f: &FunctorData, alpha: Mor) -> bool {
    let (a, b) = (&f.source, &f.target);
    let a0 = a.dom(alpha);
    let a1 = a.cod(alpha);
    let f_alpha = f.mor_map[alpha];
    for a2 in 0..a.object_count() {
        for &delta in a.hom(a0, a2) {
            for &g in b.hom(b.cod(f_alpha), f.obj_map[a2]) {
                if b.compose(g, f_alpha) != f.mor_map[delta] {
                    continue;
                }
                let mut hits = 0;
                for &phi in a.hom(a1, a2) {
                    if f.mor_map[phi] == g && a.compose(phi, alpha) == delta {
                        hits += 1;
                    }
                }
                if hits != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest-index cartesian lift of β at a (cod β = f a); identities lift to
/// identities.
pub fn cartesian_lift(f: &FunctorData, a: Obj, beta: Mor) -> Option<(Obj, Mor)> {
    debug_assert_eq!(f.target.cod(beta), f.obj_map[a]);
    if f.target.is_identity(beta) {
        return Some((a, f.source.id(a)));
    }
    for alpha in 0..f.source.mor_count() {
        if f.source.cod(alpha) == a && f.mor_map[alpha] == beta && is_cartesian_arrow(f, alpha) {
            return Some((f.source.dom(alpha), alpha));
        }
    }
    None
}

pub fn opcartesian_lift(f: &FunctorData, a: Obj, beta: Mor) -> Option<(Obj, Mor)> {
    debug_assert_eq!(f.target.dom(beta), f.obj_map[a]);
    if f.target.is_identity(beta) {
        return Some((a, f.source.id(a)));
    }
    for alpha in 0..f.source.mor_count() {
        if f.source.dom(alpha) == a && f.mor_map[alpha] == beta && is_opcartesian_arrow(f, alpha) {
            return Some((f.source.cod(alpha), alpha));
        }
    }
    None
}

/// Total normalized cleavage; succeeds exactly when the direct criterion does.
pub fn extract_cleavage(f: &FunctorData) -> Option<Cleavage> {
    let mut lifts = HashMap::new();
    for a in 0..f.source.object_count() {
        for beta in 0..f.target.mor_count() {
            if f.target.cod(beta) == f.obj_map[a] {
                lifts.insert((a, beta), cartesian_lift(f, a, beta)?);
            }
        }
    }
    Some(Cleavage { lifts })
}

pub fn extract_opcleavage(f: &FunctorData) -> Option<Cleavage> {
    let mut lifts = HashMap::new();
    for a in 0..f.source.object_count() {
        for beta in 0..f.target.mor_count() {
            if f.target.dom(beta) == f.obj_map[a] {
                lifts.insert((a, beta), opcartesian_lift(f, a, beta)?);
            }
        }
    }
    Some(Cleavage { lifts })
}

fn first_missing_lift(f: &FunctorData, side: Side) -> Option<(Obj, Mor)> {
    for a in 0..f.source.object_count() {
        for beta in 0..f.target.mor_count() {
            match side {
                Side::Fibration => {
                    if f.target.cod(beta) == f.obj_map[a] && cartesian_lift(f, a, beta).is_none() {
                        return Some((a, beta));
                    }
                }
                Side::Opfibration => {
                    if f.target.dom(beta) == f.obj_map[a] && opcartesian_lift(f, a, beta).is_none() {
                        return Some((a, beta));
                    }
                }
            }
        }
    }
    None
}

/// The three-criteria fibration report. `criteria` selects which routes run.
pub fn is_fibration(f: &FunctorData, criteria: &[Criterion]) -> FibReport {
    fib_report(f, Side::Fibration, criteria)
}

pub fn is_opfibration(f: &FunctorData, criteria: &[Criterion]) -> FibReport {
    fib_report(f, Side::Opfibration, criteria)
}

fn fib_report(f: &FunctorData, side: Side, criteria: &[Criterion]) -> FibReport {
    let mut report = FibReport { direct: None, chevalley: None, algebra: None, witness: None, agreement: true };
    for &c in criteria {
        match c {
            Criterion::Direct => {
                let missing = first_missing_lift(f, side);
                report.direct = Some(missing.is_none());
                if let (None, Some((object, base_mor))) = (&report.witness, missing) {
                    report.witness = Some(FibWitness::MissingLift { object, base_mor });
                }
            }
            Criterion::Chevalley => {
                let ch = comma::chevalley_comparison(f, side);
                let found = match side {
                    Side::Fibration => adjoint::find_right_adjoint(&ch.map, true),
                    Side::Opfibration => adjoint::find_left_adjoint(&ch.map, true),
                };
                report.chevalley = Some(found.is_some());
                if found.is_none() && report.witness.is_none() {
                    report.witness = Some(FibWitness::NoAdjoint { criterion: Criterion::Chevalley });
                }
            }
            Criterion::Algebra => {
                let (ok, why) = algebra_criterion(f, side);
                report.algebra = Some(ok);
                if !ok && report.witness.is_none() {
                    report.witness = Some(why);
                }
            }
        }
    }
    let verdicts: Vec<bool> = [report.direct, report.chevalley, report.algebra]
        .iter()
        .flatten()
        .copied()
        .collect();
    report.agreement = verdicts.windows(2).all(|w| w[0] == w[1]);
    report
}

/// Pseudo-algebra route: the slice unit v_f (resp. u_f) must admit a right
/// (resp. left) adjoint whose unit and counit are vertical — whiskering the
/// unit with f and the counit with the carrier projection yields identities.
fn algebra_criterion(f: &FunctorData, side: Side) -> (bool, FibWitness) {
    let kind = match side {
        Side::Fibration => MonadKind::R,
        Side::Opfibration => MonadKind::L,
    };
    let inst = comma::monad_on_slice(kind, f);
    let carrier = inst.carrier.clone();
    let proj = carrier.clone();
    // Prefer vertical universal arrows so a slice adjunction is found
    // whenever one exists; identities rank before other vertical witnesses.
    let comma_cat = inst.comma.cat.clone();
    let pref = move |h: Mor| -> u32 {
        if comma_cat.is_identity(h) {
            0
        } else if proj.target.is_identity(proj.mor_map[h]) {
            1
        } else {
            2
        }
    };
    let adj: Option<AdjunctionData> = match side {
        Side::Fibration => adjoint::find_right_adjoint_pref(&inst.unit, &pref),
        Side::Opfibration => adjoint::find_left_adjoint_pref(&inst.unit, &pref),
    };
    let adj = match adj {
        Some(a) => a,
        None => return (false, FibWitness::NoAdjoint { criterion: Criterion::Algebra }),
    };
    // Verticality by whiskering. For fibrations: f·η = 1 and Rf·ε = 1; for
    // opfibrations: Lf·η = 1 and f·ε = 1.
    let (unit_whisker, counit_whisker) = match side {
        Side::Fibration => (adj.unit.whisker_post(f), adj.counit.whisker_post(&carrier)),
        Side::Opfibration => (adj.unit.whisker_post(&carrier), adj.counit.whisker_post(f)),
    };
    if unit_whisker.is_identity_transformation() && counit_whisker.is_identity_transformation() {
        (true, FibWitness::NoAdjoint { criterion: Criterion::Algebra })
    } else {
        (false, FibWitness::NonVertical { criterion: Criterion::Algebra })
    }
}

/// Every isomorphism into f a has an isomorphism lift at a.
pub fn is_isofibration(f: &FunctorData) -> bool {
    for a in 0..f.source.object_count() {
        for beta in 0..f.target.mor_count() {
            if f.target.cod(beta) == f.obj_map[a] && f.target.is_iso(beta) {
                let found = (0..f.source.mor_count()).any(|alpha| {
                    f.source.cod(alpha) == a && f.source.is_iso(alpha) && f.mor_map[alpha] == beta
                });
                if !found {
                    return false;
                }
            }
        }
    }
    true
}

/// Street fibration: lifts exist up to an isomorphism correcting the domain.
pub fn is_street_fibration(f: &FunctorData) -> bool {
    let b = &f.target;
    for a in 0..f.source.object_count() {
        for beta in 0..b.mor_count() {
            if b.cod(beta) != f.obj_map[a] {
                continue;
            }
            let mut ok = false;
            'search: for alpha in 0..f.source.mor_count() {
                if f.source.cod(alpha) != a || !is_cartesian_arrow(f, alpha) {
                    continue;
                }
                let fa1 = f.obj_map[f.source.dom(alpha)];
                for &iota in b.hom(b.dom(beta), fa1) {
                    if b.is_iso(iota) && b.compose(f.mor_map[alpha], iota) == beta {
                        ok = true;
                        break 'search;
                    }
                }
            }
            if !ok {
                return false;
            }
        }
    }
    true
}

pub fn is_street_opfibration(f: &FunctorData) -> bool {
    let b = &f.target;
    for a in 0..f.source.object_count() {
        for beta in 0..b.mor_count() {
            if b.dom(beta) != f.obj_map[a] {
                continue;
            }
            let mut ok = false;
            'search: for alpha in 0..f.source.mor_count() {
                if f.source.dom(alpha) != a || !is_opcartesian_arrow(f, alpha) {
                    continue;
                }
                let fa1 = f.obj_map[f.source.cod(alpha)];
                for &iota in b.hom(fa1, b.cod(beta)) {
                    if b.is_iso(iota) && b.compose(iota, f.mor_map[alpha]) == beta {
                        ok = true;
                        break 'search;
                    }
                }
            }
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Unique (not necessarily cartesian-checked) lifts.
pub fn is_discrete(f: &FunctorData, side: Side) -> bool {
    for a in 0..f.source.object_count() {
        for beta in 0..f.target.mor_count() {
            let relevant = match side {
                Side::Fibration => f.target.cod(beta) == f.obj_map[a],
                Side::Opfibration => f.target.dom(beta) == f.obj_map[a],
            };
            if !relevant {
                continue;
            }
            let count = (0..f.source.mor_count())
                .filter(|&alpha| {
                    f.mor_map[alpha] == beta
                        && match side {
                            Side::Fibration => f.source.cod(alpha) == a,
                            Side::Opfibration => f.source.dom(alpha) == a,
                        }
                })
                .count();
            if count != 1 {
                return false;
            }
        }
    }
    true
}

/// f reflects isomorphisms.
pub fn is_conservative(f: &FunctorData) -> bool {
    (0..f.source.mor_count()).all(|m| !f.target.is_iso(f.mor_map[m]) || f.source.is_iso(m))
}

/// Every f-vertical arrow is an isomorphism.
pub fn has_groupoidal_fibres(f: &FunctorData) -> bool {
    (0..f.source.mor_count())
        .all(|m| !f.target.is_identity(f.mor_map[m]) || f.source.is_iso(m))
}

/// Every f-vertical arrow is an identity (discrete functor).
pub fn has_discrete_fibres(f: &FunctorData) -> bool {
    (0..f.source.mor_count())
        .all(|m| !f.target.is_identity(f.mor_map[m]) || f.source.is_identity(m))
}

/// Factorization α = σ∘τ of a 2-cell with invertible image under an
/// isofibration: σ an isomorphism built from chosen iso lifts at the
/// codomain, τ the unique vertical comparison.
pub fn factor_vertical_iso(
    f: &FunctorData,
    alpha: &NatTransData,
) -> Result<(NatTransData, NatTransData), CatError> {
    let a = &f.source;
    let b = &f.target;
    debug_assert!(*alpha.from.target == **a);
    let x_cat = &alpha.from.source;
    let g = &alpha.to;
    // Chosen iso lift of f(α_x) at G(x); identities lift to identities.
    let mut sigma_comp = Vec::with_capacity(x_cat.object_count());
    let mut s_obj = Vec::with_capacity(x_cat.object_count());
    for x in 0..x_cat.object_count() {
        let f_ax = f.mor_map[alpha.component[x]];
        if !b.is_iso(f_ax) {
            return Err(CatError::Invalid(format!(
                "component at object {x} does not have an invertible image"
            )));
        }
        let gx = g.obj_map[x];
        let lift = if b.is_identity(f_ax) {
            Some(a.id(gx))
        } else {
            (0..a.mor_count()).find(|&s| a.cod(s) == gx && a.is_iso(s) && f.mor_map[s] == f_ax)
        };
        let s = lift.ok_or(CatError::NotIsofibration { object: gx, base_mor: f_ax })?;
        sigma_comp.push(s);
        s_obj.push(a.dom(s));
    }
    // Middle functor s(ξ) = σ_y⁻¹ ∘ G(ξ) ∘ σ_x.
    let s_mor: Vec<Mor> = (0..x_cat.mor_count())
        .map(|xi| {
            let (x, y) = (x_cat.dom(xi), x_cat.cod(xi));
            let inv = a.inverse(sigma_comp[y]).expect("iso lift");
            a.compose(inv, a.compose(g.mor_map[xi], sigma_comp[x]))
        })
        .collect();
    let mid = FunctorData { source: x_cat.clone(), target: alpha.from.target.clone(), obj_map: s_obj, mor_map: s_mor };
    let sigma = NatTransData { from: mid.clone(), to: g.clone(), component: sigma_comp.clone() };
    let tau_comp: Vec<Mor> = (0..x_cat.object_count())
        .map(|x| {
            let inv = a.inverse(sigma_comp[x]).expect("iso lift");
            a.compose(inv, alpha.component[x])
        })
        .collect();
    let tau = NatTransData { from: alpha.from.clone(), to: mid, component: tau_comp };
    Ok((sigma, tau))
}

/// Checks that a functor between fibrations over a common base carries
/// chosen cartesian lifts (of the domain fibration) to cartesian arrows of
/// `g`. Cartesian arrows are preserved iff chosen lifts land on cartesian
/// (not necessarily chosen) arrows, so the predicate is cleavage-independent.
pub fn is_cartesian_functor(p: &FunctorData, f_cleavage: &Cleavage, g: &FunctorData) -> bool {
    f_cleavage
        .lifts
        .values()
        .all(|&(_, alpha)| is_cartesian_arrow(g, p.mor_map[alpha]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::cat::FunctorData;

    #[test]
    fn identities_are_cartesian() {
        let f = builders::arrow_to_iso_pair();
        for m in 0..f.source.mor_count() {
            if f.source.is_identity(m) {
                assert!(is_cartesian_arrow(&f, m));
                assert!(is_opcartesian_arrow(&f, m));
            }
        }
    }

    #[test]
    fn example_point_has_no_lift_over_the_iso() {
        // f: 1 → I; the non-identity iso m̄: 1 → 0 has no lift at all.
        let f = builders::point_of_iso_pair();
        assert_eq!(cartesian_lift(&f, 0, 3), None);
        assert!(extract_cleavage(&f).is_none());
    }

    #[test]
    fn identity_functor_is_a_fibration_by_all_criteria() {
        for c in [builders::iso_pair(), builders::comm_square_poset(), builders::cyclic(2)] {
            let id = FunctorData::identity(&c);
            let report = is_fibration(&id, &ALL_CRITERIA);
            assert!(report.agreement, "{report:?}");
            assert!(report.verdict(), "{report:?}");
            let report = is_opfibration(&id, &ALL_CRITERIA);
            assert!(report.agreement, "{report:?}");
            assert!(report.verdict(), "{report:?}");
        }
    }

    #[test]
    fn criteria_agree_on_iso_heavy_categories() {
        // Chaotic categories have many isomorphic terminal candidates in the
        // adjoint searches; the witness preference must still find the
        // identity-counit and vertical universal arrows.
        let ch3 = builders::chaotic(3);
        for (f, expect) in [
            (FunctorData::identity(&ch3), true),
            (builders::to_terminal(&ch3), true),
            // The constant functor maps everything to an identity, so the
            // non-identity iso into its value has no lift at all.
            (FunctorData::constant(&ch3, &builders::iso_pair(), 1), false),
        ] {
            let fib = is_fibration(&f, &ALL_CRITERIA);
            let opfib = is_opfibration(&f, &ALL_CRITERIA);
            assert!(fib.agreement, "{fib:?}");
            assert!(opfib.agreement, "{opfib:?}");
            assert_eq!(fib.verdict(), expect, "{fib:?}");
            assert_eq!(opfib.verdict(), expect, "{opfib:?}");
        }
    }

    #[test]
    fn example_2_3_verdicts() {
        // f: 1 → I is not an opfibration under any criterion, but it is a
        // Street (pseudo-)opfibration.
        let f = builders::point_of_iso_pair();
        let report = is_opfibration(&f, &ALL_CRITERIA);
        assert!(report.agreement, "{report:?}");
        assert!(!report.verdict());
        assert_eq!(report.direct, Some(false));
        assert!(is_street_opfibration(&f));
        assert!(is_street_fibration(&f));
        // The pseudo-adjunction exists: left adjoint with identity counit and
        // iso-but-not-identity unit.
        let adj = adjoint::find_left_adjoint(&f, false).unwrap();
        assert!(adj.counit.is_identity_transformation());
        assert!(adj.unit.is_componentwise_iso());
        assert!(!adj.unit.is_identity_transformation());
    }

    #[test]
    fn nonconstant_arrow_functor_is_not_an_isofibration() {
        let g = builders::arrow_to_iso_pair();
        assert!(!is_isofibration(&g));
        assert!(!is_conservative(&g));
        // Any functor between groupoids is conservative.
        let h = FunctorData::identity(&builders::iso_pair());
        assert!(is_conservative(&h));
    }

    #[test]
    fn slice_projection_is_a_discrete_fibration() {
        // C/b → C is the walking discrete fibration.
        let c = builders::comm_square_poset();
        let one = builders::terminal();
        let cb = crate::comma::comma(&FunctorData::identity(&c), &FunctorData::constant(&one, &c, 1))
            .unwrap();
        assert!(is_discrete(&cb.left_proj, Side::Fibration));
        assert!(!is_discrete(&cb.left_proj, Side::Opfibration));
    }

    #[test]
    fn vertical_iso_factorization_recomposes() {
        // f = identity on I is an isofibration; α: any natural iso between
        // functors from the discrete two-object category.
        let i = builders::iso_pair();
        let f = FunctorData::identity(&i);
        let x = builders::discrete(2);
        let from = FunctorData { source: x.clone(), target: i.clone(), obj_map: vec![0, 1], mor_map: vec![0, 1] };
        let to = FunctorData { source: x.clone(), target: i.clone(), obj_map: vec![1, 0], mor_map: vec![1, 0] };
        let alpha = NatTransData { from: from.clone(), to, component: vec![2, 3] };
        assert!(alpha.validate().is_valid());
        let (sigma, tau) = factor_vertical_iso(&f, &alpha).unwrap();
        assert!(sigma.is_componentwise_iso());
        // τ vertical
        for &t in &tau.component {
            assert!(i.is_identity(f.mor_map[t]));
        }
        let recomposed = tau.then(&sigma);
        assert_eq!(recomposed.component, alpha.component);
    }

    #[test]
    fn discrete_fibration_forces_identity_vertical_part() {
        // α an iso over an iso base, through a discrete fibration: the
        // vertical comparison is the identity.
        let c = builders::iso_pair();
        let one = builders::terminal();
        let cb = crate::comma::comma(&FunctorData::identity(&c), &FunctorData::constant(&one, &c, 0))
            .unwrap();
        let f = cb.left_proj.clone();
        assert!(is_discrete(&f, Side::Fibration));
        let x = builders::terminal();
        let objs = [0usize, 1];
        let from = FunctorData {
            source: x.clone(),
            target: cb.cat.clone(),
            obj_map: vec![objs[0]],
            mor_map: vec![cb.cat.id(objs[0])],
        };
        let to = FunctorData {
            source: x.clone(),
            target: cb.cat.clone(),
            obj_map: vec![objs[1]],
            mor_map: vec![cb.cat.id(objs[1])],
        };
        let iso_between = cb.cat.hom(objs[0], objs[1]).iter().copied().find(|&m| cb.cat.is_iso(m));
        if let Some(m) = iso_between {
            let alpha = NatTransData { from, to, component: vec![m] };
            assert!(alpha.validate().is_valid());
            let (_, tau) = factor_vertical_iso(&f, &alpha).unwrap();
            assert!(tau.component.iter().all(|&t| cb.cat.is_identity(t)));
        } else {
            panic!("slice of a connected groupoid is connected");
        }
    }

    #[test]
    fn vertical_alpha_factors_trivially() {
        // α vertical → σ = id, τ = α.
        let c = builders::cyclic(2);
        let f = builders::to_terminal(&c);
        let idc = FunctorData::identity(&c);
        let alpha = NatTransData { from: idc.clone(), to: idc.clone(), component: vec![1] };
        assert!(alpha.validate().is_valid());
        let (sigma, tau) = factor_vertical_iso(&f, &alpha).unwrap();
        assert!(sigma.is_identity_transformation());
        assert_eq!(tau.component, alpha.component);
    }
}

//! Finite categories as total composition tables, with functors and natural
//! transformations between them.
//!
//! Everything is positional: objects and morphisms are indices into the
//! tables. Validation is explicit — constructors only check that indices are
//! in range, and [`FinCat::validate`] reports every violated law. Operations
//! elsewhere in the crate assume their inputs have been validated.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::CatError;

pub type Obj = usize;
pub type Mor = usize;

/// A finite category: a total composition table plus identities.
#[derive(Clone, Debug)]
pub struct FinCat {
    objects: usize,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    identity: Vec<Mor>,
    compose: HashMap<(Mor, Mor), Mor>,
    hom: HashMap<(Obj, Obj), Vec<Mor>>,
    inverse: Vec<Option<Mor>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.dom == other.dom
            && self.cod == other.cod
            && self.identity == other.identity
            && self.compose == other.compose
    }
}

impl Eq for FinCat {}

impl FinCat {
    /// Builds a category from raw tables. Only structural well-indexedness is
    /// checked here; the laws are the business of [`FinCat::validate`].
    pub fn from_parts(
        objects: usize,
        arrows: Vec<(Obj, Obj)>,
        identity: Vec<Mor>,
        compose_triples: &[(Mor, Mor, Mor)],
    ) -> Result<FinCat, CatError> {
        let m = arrows.len();
        for (i, &(d, c)) in arrows.iter().enumerate() {
            if d >= objects || c >= objects {
                return Err(CatError::IndexOutOfRange(format!(
                    "morphism {i} has endpoints ({d},{c}) but there are {objects} objects"
                )));
            }
        }
        if identity.len() != objects {
            return Err(CatError::IndexOutOfRange(format!(
                "{} identity entries for {} objects",
                identity.len(),
                objects
            )));
        }
        for (x, &e) in identity.iter().enumerate() {
            if e >= m {
                return Err(CatError::IndexOutOfRange(format!(
                    "identity of object {x} is morphism {e} but there are {m} morphisms"
                )));
            }
        }
        let mut compose = HashMap::with_capacity(compose_triples.len());
        for &(g, f, gf) in compose_triples {
            if g >= m || f >= m || gf >= m {
                return Err(CatError::IndexOutOfRange(format!(
                    "compose entry ({g},{f},{gf}) out of range for {m} morphisms"
                )));
            }
            compose.insert((g, f), gf);
        }
        let (dom, cod): (Vec<_>, Vec<_>) = arrows.into_iter().unzip();
        let mut cat = FinCat {
            objects,
            dom,
            cod,
            identity,
            compose,
            hom: HashMap::new(),
            inverse: Vec::new(),
        };
        cat.rebuild_caches();
        Ok(cat)
    }

    fn rebuild_caches(&mut self) {
        let mut hom: HashMap<(Obj, Obj), Vec<Mor>> = HashMap::new();
        for f in 0..self.dom.len() {
            hom.entry((self.dom[f], self.cod[f])).or_default().push(f);
        }
        self.hom = hom;
        self.inverse = (0..self.dom.len())
            .map(|f| {
                if self.is_identity(f) {
                    return Some(f);
                }
                self.hom(self.cod[f], self.dom[f])
                    .iter()
                    .copied()
                    .find(|&g| {
                        self.try_compose(g, f) == Some(self.identity[self.dom[f]])
                            && self.try_compose(f, g) == Some(self.identity[self.cod[f]])
                    })
            })
            .collect();
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn mor_count(&self) -> usize {
        self.dom.len()
    }

    pub fn dom(&self, f: Mor) -> Obj {
        self.dom[f]
    }

    pub fn cod(&self, f: Mor) -> Obj {
        self.cod[f]
    }

    pub fn id(&self, x: Obj) -> Mor {
        self.identity[x]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.dom[f]] == f
    }

    /// g∘f, defined when cod(f) = dom(g). Panics on a pair missing from the
    /// table — valid categories have total tables.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        *self
            .compose
            .get(&(g, f))
            .unwrap_or_else(|| panic!("composition table has no entry for ({g},{f})"))
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        self.hom.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        self.inverse.get(f).copied().flatten()
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    pub fn composable(&self, g: Mor, f: Mor) -> bool {
        self.cod[f] == self.dom[g]
    }

    /// Sorted composition triples (g, f, g∘f) — the canonical order used by
    /// the JSON schema.
    pub fn compose_triples(&self) -> Vec<(Mor, Mor, Mor)> {
        let mut triples: Vec<_> = self.compose.iter().map(|(&(g, f), &gf)| (g, f, gf)).collect();
        triples.sort_unstable();
        triples
    }

    pub fn arrows(&self) -> Vec<(Obj, Obj)> {
        self.dom.iter().copied().zip(self.cod.iter().copied()).collect()
    }

    /// Exhaustive law check. Empty report iff the tables describe a category.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for x in 0..self.objects {
            let e = self.identity[x];
            if self.dom[e] != x || self.cod[e] != x {
                report.push("identity-endpoints", vec![x, e]);
            }
        }
        let m = self.mor_count();
        for f in 0..m {
            let idc = self.identity[self.cod[f]];
            let idd = self.identity[self.dom[f]];
            match self.try_compose(idc, f) {
                Some(g) if g == f => {}
                _ => report.push("left-unit", vec![f]),
            }
            match self.try_compose(f, idd) {
                Some(g) if g == f => {}
                _ => report.push("right-unit", vec![f]),
            }
        }
        for g in 0..m {
            for f in 0..m {
                match (self.composable(g, f), self.try_compose(g, f)) {
                    (true, None) => report.push("missing-composite", vec![g, f]),
                    (true, Some(gf)) => {
                        if self.dom[gf] != self.dom[f] || self.cod[gf] != self.cod[g] {
                            report.push("composite-endpoints", vec![g, f, gf]);
                        }
                    }
                    (false, Some(_)) => report.push("spurious-composite", vec![g, f]),
                    (false, None) => {}
                }
            }
        }
        // Associativity only makes sense once the table is total on composable pairs.
        if report.violations.is_empty() {
            for h in 0..m {
                for g in 0..m {
                    if !self.composable(h, g) {
                        continue;
                    }
                    let hg = self.compose(h, g);
                    for f in 0..m {
                        if !self.composable(g, f) {
                            continue;
                        }
                        let gf = self.compose(g, f);
                        if self.compose(h, gf) != self.compose(hg, f) {
                            report.push("associativity", vec![h, g, f]);
                        }
                    }
                }
            }
        }
        report
    }
}

/// dom/cod swapped, compose(g,f) := compose(f,g). Involutive on the nose.
pub fn opposite(c: &FinCat) -> FinCat {
    let arrows = c.cod.iter().copied().zip(c.dom.iter().copied()).collect();
    let triples: Vec<_> = c.compose.iter().map(|(&(g, f), &gf)| (f, g, gf)).collect();
    FinCat::from_parts(c.objects, arrows, c.identity.clone(), &triples)
        .expect("opposite of a well-indexed category is well-indexed")
}

/// The full subcategory on `objs` (given in the order they should appear).
/// Returns the category together with the object and morphism injections
/// back into `c`.
pub fn full_subcategory(c: &FinCat, objs: &[Obj]) -> (FinCat, Vec<Obj>, Vec<Mor>) {
    let mut obj_back = HashMap::new();
    for (i, &x) in objs.iter().enumerate() {
        obj_back.insert(x, i);
    }
    let mut mor_old = Vec::new();
    let mut mor_back = HashMap::new();
    for f in 0..c.mor_count() {
        if obj_back.contains_key(&c.dom(f)) && obj_back.contains_key(&c.cod(f)) {
            mor_back.insert(f, mor_old.len());
            mor_old.push(f);
        }
    }
    let arrows = mor_old
        .iter()
        .map(|&f| (obj_back[&c.dom(f)], obj_back[&c.cod(f)]))
        .collect();
    let identity = objs.iter().map(|&x| mor_back[&c.id(x)]).collect();
    let mut triples = Vec::new();
    for &g in &mor_old {
        for &f in &mor_old {
            if c.composable(g, f) {
                triples.push((mor_back[&g], mor_back[&f], mor_back[&c.compose(g, f)]));
            }
        }
    }
    let sub = FinCat::from_parts(objs.len(), arrows, identity, &triples)
        .expect("full subcategory is well-indexed");
    (sub, objs.to_vec(), mor_old)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<usize>,
}

/// List of violated laws with witnessing indices; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn push(&mut self, law: &str, witness: Vec<usize>) {
        self.violations.push(Violation { law: law.to_string(), witness });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

/// A functor stored as object and morphism index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorData {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub obj_map: Vec<Obj>,
    pub mor_map: Vec<Mor>,
}

impl FunctorData {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<Self, CatError> {
        if obj_map.len() != source.object_count() || mor_map.len() != source.mor_count() {
            return Err(CatError::IndexOutOfRange(
                "functor maps do not cover the source".into(),
            ));
        }
        if obj_map.iter().any(|&x| x >= target.object_count())
            || mor_map.iter().any(|&m| m >= target.mor_count())
        {
            return Err(CatError::IndexOutOfRange(
                "functor maps land outside the target".into(),
            ));
        }
        Ok(FunctorData { source, target, obj_map, mor_map })
    }

    pub fn identity(c: &Arc<FinCat>) -> Self {
        FunctorData {
            source: c.clone(),
            target: c.clone(),
            obj_map: (0..c.object_count()).collect(),
            mor_map: (0..c.mor_count()).collect(),
        }
    }

    pub fn constant(source: &Arc<FinCat>, target: &Arc<FinCat>, at: Obj) -> Self {
        FunctorData {
            source: source.clone(),
            target: target.clone(),
            obj_map: vec![at; source.object_count()],
            mor_map: vec![target.id(at); source.mor_count()],
        }
    }

    pub fn ob(&self, x: Obj) -> Obj {
        self.obj_map[x]
    }

    pub fn mor(&self, f: Mor) -> Mor {
        self.mor_map[f]
    }

    /// outer ∘ inner. The middle categories must agree structurally.
    pub fn compose(outer: &FunctorData, inner: &FunctorData) -> FunctorData {
        debug_assert_eq!(*inner.target, *outer.source, "functor composition mismatch");
        FunctorData {
            source: inner.source.clone(),
            target: outer.target.clone(),
            obj_map: inner.obj_map.iter().map(|&x| outer.obj_map[x]).collect(),
            mor_map: inner.mor_map.iter().map(|&m| outer.mor_map[m]).collect(),
        }
    }

    /// Same maps between the same tables.
    pub fn same_as(&self, other: &FunctorData) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && *self.source == *other.source
            && *self.target == *other.target
    }

    pub fn is_identity_functor(&self) -> bool {
        *self.source == *self.target
            && self.obj_map.iter().enumerate().all(|(i, &x)| i == x)
            && self.mor_map.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn opposite(&self) -> FunctorData {
        FunctorData {
            source: Arc::new(opposite(&self.source)),
            target: Arc::new(opposite(&self.target)),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen_o = vec![false; self.target.object_count()];
        for &x in &self.obj_map {
            seen_o[x] = true;
        }
        let mut seen_m = vec![false; self.target.mor_count()];
        for &m in &self.mor_map {
            seen_m[m] = true;
        }
        self.obj_map.len() == self.target.object_count()
            && self.mor_map.len() == self.target.mor_count()
            && seen_o.iter().all(|&b| b)
            && seen_m.iter().all(|&b| b)
    }

    /// Inverse functor, when this one is bijective on objects and morphisms.
    pub fn inverse_functor(&self) -> Option<FunctorData> {
        if !self.is_bijective() {
            return None;
        }
        let mut obj_map = vec![0; self.target.object_count()];
        for (x, &fx) in self.obj_map.iter().enumerate() {
            obj_map[fx] = x;
        }
        let mut mor_map = vec![0; self.target.mor_count()];
        for (m, &fm) in self.mor_map.iter().enumerate() {
            mor_map[fm] = m;
        }
        Some(FunctorData {
            source: self.target.clone(),
            target: self.source.clone(),
            obj_map,
            mor_map,
        })
    }

    /// Exhaustive functoriality check: endpoints, identities, composites.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (s, t) = (&self.source, &self.target);
        for f in 0..s.mor_count() {
            let img = self.mor_map[f];
            if t.dom(img) != self.obj_map[s.dom(f)] {
                report.push("functor-dom", vec![f]);
            }
            if t.cod(img) != self.obj_map[s.cod(f)] {
                report.push("functor-cod", vec![f]);
            }
        }
        for x in 0..s.object_count() {
            if self.mor_map[s.id(x)] != t.id(self.obj_map[x]) {
                report.push("functor-identity", vec![x]);
            }
        }
        for g in 0..s.mor_count() {
            for f in 0..s.mor_count() {
                if !s.composable(g, f) {
                    continue;
                }
                let lhs = self.mor_map[s.compose(g, f)];
                match t.try_compose(self.mor_map[g], self.mor_map[f]) {
                    Some(rhs) if rhs == lhs => {}
                    _ => report.push("functor-composition", vec![g, f]),
                }
            }
        }
        report
    }
}

/// A natural transformation between two parallel functors, stored as one
/// component morphism per source object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransData {
    pub from: FunctorData,
    pub to: FunctorData,
    pub component: Vec<Mor>,
}

impl NatTransData {
    pub fn identity(f: &FunctorData) -> Self {
        let component = (0..f.source.object_count())
            .map(|x| f.target.id(f.obj_map[x]))
            .collect();
        NatTransData { from: f.clone(), to: f.clone(), component }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if *self.from.source != *self.to.source || *self.from.target != *self.to.target {
            report.push("nattrans-parallel", vec![]);
            return report;
        }
        let s = &self.from.source;
        let t = &self.from.target;
        if self.component.len() != s.object_count() {
            report.push("nattrans-components", vec![self.component.len()]);
            return report;
        }
        for x in 0..s.object_count() {
            let c = self.component[x];
            if c >= t.mor_count()
                || t.dom(c) != self.from.obj_map[x]
                || t.cod(c) != self.to.obj_map[x]
            {
                report.push("component-endpoints", vec![x]);
            }
        }
        if !report.is_valid() {
            return report;
        }
        for m in 0..s.mor_count() {
            let (x, y) = (s.dom(m), s.cod(m));
            let lhs = t.compose(self.component[y], self.from.mor_map[m]);
            let rhs = t.compose(self.to.mor_map[m], self.component[x]);
            if lhs != rhs {
                report.push("naturality", vec![m]);
            }
        }
        report
    }

    /// H · τ — post-whiskering by a functor out of the common target.
    pub fn whisker_post(&self, h: &FunctorData) -> NatTransData {
        NatTransData {
            from: FunctorData::compose(h, &self.from),
            to: FunctorData::compose(h, &self.to),
            component: self.component.iter().map(|&c| h.mor_map[c]).collect(),
        }
    }

    /// τ · K — pre-whiskering by a functor into the common source.
    pub fn whisker_pre(&self, k: &FunctorData) -> NatTransData {
        NatTransData {
            from: FunctorData::compose(&self.from, k),
            to: FunctorData::compose(&self.to, k),
            component: k.obj_map.iter().map(|&x| self.component[x]).collect(),
        }
    }

    /// Vertical composite `second ∘ self` (self applied first).
    pub fn then(&self, second: &NatTransData) -> NatTransData {
        let t = &self.from.target;
        NatTransData {
            from: self.from.clone(),
            to: second.to.clone(),
            component: self
                .component
                .iter()
                .zip(&second.component)
                .map(|(&a, &b)| t.compose(b, a))
                .collect(),
        }
    }

    pub fn is_identity_transformation(&self) -> bool {
        self.from.obj_map == self.to.obj_map
            && self.from.mor_map == self.to.mor_map
            && self
                .component
                .iter()
                .all(|&c| self.from.target.is_identity(c))
    }

    pub fn is_componentwise_iso(&self) -> bool {
        self.component.iter().all(|&c| self.from.target.is_iso(c))
    }
}

/// Strict pullback of `f` and `g` over their common target: pairs of objects
/// and morphisms with equal images, together with the two projections.
pub fn pullback_category(
    f: &FunctorData,
    g: &FunctorData,
) -> Result<(Arc<FinCat>, FunctorData, FunctorData), CatError> {
    if *f.target != *g.target {
        return Err(CatError::TargetMismatch);
    }
    let (a, c) = (&f.source, &g.source);
    let mut objs = Vec::new();
    let mut obj_idx = HashMap::new();
    for x in 0..a.object_count() {
        for y in 0..c.object_count() {
            if f.obj_map[x] == g.obj_map[y] {
                obj_idx.insert((x, y), objs.len());
                objs.push((x, y));
            }
        }
    }
    let mut mors = Vec::new();
    let mut mor_idx = HashMap::new();
    let mut arrows = Vec::new();
    for m in 0..a.mor_count() {
        for n in 0..c.mor_count() {
            if f.mor_map[m] == g.mor_map[n] {
                let d = obj_idx[&(a.dom(m), c.dom(n))];
                let cd = obj_idx[&(a.cod(m), c.cod(n))];
                mor_idx.insert((m, n), mors.len());
                mors.push((m, n));
                arrows.push((d, cd));
            }
        }
    }
    let identity = objs.iter().map(|&(x, y)| mor_idx[&(a.id(x), c.id(y))]).collect();
    let mut triples = Vec::new();
    for (j, &(m2, n2)) in mors.iter().enumerate() {
        for (i, &(m1, n1)) in mors.iter().enumerate() {
            if a.composable(m2, m1) && c.composable(n2, n1) {
                let comp = mor_idx[&(a.compose(m2, m1), c.compose(n2, n1))];
                triples.push((j, i, comp));
            }
        }
    }
    let pb = Arc::new(FinCat::from_parts(objs.len(), arrows, identity, &triples)?);
    let proj_a = FunctorData {
        source: pb.clone(),
        target: f.source.clone(),
        obj_map: objs.iter().map(|&(x, _)| x).collect(),
        mor_map: mors.iter().map(|&(m, _)| m).collect(),
    };
    let proj_c = FunctorData {
        source: pb.clone(),
        target: g.source.clone(),
        obj_map: objs.iter().map(|&(_, y)| y).collect(),
        mor_map: mors.iter().map(|&(_, n)| n).collect(),
    };
    Ok((pb, proj_a, proj_c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn terminal_category_is_valid() {
        let one = builders::terminal();
        assert!(one.validate().is_valid());
        assert_eq!(one.object_count(), 1);
        assert_eq!(one.mor_count(), 1);
    }

    #[test]
    fn broken_right_unit_is_reported() {
        // Parallel pair with compose(a, id_0) deliberately pointing at the
        // other parallel arrow.
        let cat = FinCat::from_parts(
            2,
            vec![(0, 0), (1, 1), (0, 1), (0, 1)],
            vec![0, 1],
            &[(0, 0, 0), (1, 1, 1), (2, 0, 3), (1, 2, 2), (3, 0, 3), (1, 3, 3)],
        )
        .unwrap();
        let report = cat.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.law == "right-unit" && v.witness == vec![2]));
    }

    #[test]
    fn missing_composite_is_reported() {
        let cat = FinCat::from_parts(
            2,
            vec![(0, 0), (1, 1), (0, 1)],
            vec![0, 1],
            &[(0, 0, 0), (1, 1, 1), (1, 2, 2)],
        )
        .unwrap();
        let report = cat.validate();
        assert!(report.violations.iter().any(|v| v.law == "missing-composite"));
    }

    #[test]
    fn out_of_range_identity_is_an_error() {
        let err = FinCat::from_parts(1, vec![(0, 0)], vec![3], &[(0, 0, 0)]);
        assert!(matches!(err, Err(CatError::IndexOutOfRange(_))));
    }

    #[test]
    fn opposite_is_an_involution() {
        for cat in [builders::arrow(), builders::iso_pair(), builders::comm_square_poset()] {
            let opp = opposite(&cat);
            assert!(opp.validate().is_valid());
            assert_eq!(opposite(&opp), *cat);
        }
    }

    #[test]
    fn opposite_reverses_the_arrow() {
        let two = builders::arrow();
        let opp = opposite(&two);
        let m = (0..two.mor_count()).find(|&m| !two.is_identity(m)).unwrap();
        assert_eq!(opp.dom(m), two.cod(m));
        assert_eq!(opp.cod(m), two.dom(m));
    }

    #[test]
    fn pullback_of_identities_recovers_the_category() {
        let b = builders::iso_pair();
        let idb = FunctorData::identity(&b);
        let (pb, p1, p2) = pullback_category(&idb, &idb).unwrap();
        assert!(pb.validate().is_valid());
        // Diagonal pairing: same object and morphism counts.
        assert_eq!(pb.object_count(), b.object_count());
        assert_eq!(pb.mor_count(), b.mor_count());
        assert!(p1.validate().is_valid());
        assert!(p2.validate().is_valid());
    }

    #[test]
    fn pullback_projections_jointly_monic_and_square_commutes() {
        let b = builders::iso_pair();
        let f = FunctorData::constant(&builders::arrow(), &b, 0);
        let idb = FunctorData::identity(&b);
        let (pb, p1, p2) = pullback_category(&f, &idb).unwrap();
        for m in 0..pb.mor_count() {
            for n in 0..pb.mor_count() {
                if p1.mor(m) == p1.mor(n) && p2.mor(m) == p2.mor(n) {
                    assert_eq!(m, n);
                }
            }
        }
        let left = FunctorData::compose(&f, &p1);
        let right = FunctorData::compose(&idb, &p2);
        assert!(left.same_as(&right), "pullback square commutes strictly");
    }

    #[test]
    fn target_mismatch_is_detected() {
        let f = FunctorData::identity(&builders::arrow());
        let g = FunctorData::identity(&builders::terminal());
        assert!(matches!(pullback_category(&f, &g), Err(CatError::TargetMismatch)));
    }
}

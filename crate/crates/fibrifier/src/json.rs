//! JSON interchange for every value the CLI reads or writes. One canonical
//! parser, one canonical serializer: compose triples and coherence tables are
//! sorted, so equal values serialize byte-identically.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cat::{FinCat, FunctorData, NatTransData};
use crate::colim::{PresentedCategory, Quotient, TwoCellDiagram};
use crate::error::CatError;
use crate::factor::{FactorizationResult, FibBMorphism};
use crate::fibcheck::{extract_cleavage, Cleavage};
use crate::groth::PseudoFunctorData;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CatDoc {
    pub objects: usize,
    pub morphisms: Vec<(usize, usize)>,
    pub identities: Vec<usize>,
    pub compose: Vec<(usize, usize, usize)>,
}

impl CatDoc {
    pub fn of(c: &FinCat) -> CatDoc {
        CatDoc {
            objects: c.object_count(),
            morphisms: c.arrows(),
            identities: (0..c.object_count()).map(|x| c.id(x)).collect(),
            compose: c.compose_triples(),
        }
    }

    pub fn into_cat(self) -> Result<Arc<FinCat>, CatError> {
        Ok(Arc::new(FinCat::from_parts(
            self.objects,
            self.morphisms,
            self.identities,
            &self.compose,
        )?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FunctorDoc {
    pub source: CatDoc,
    pub target: CatDoc,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl FunctorDoc {
    pub fn of(f: &FunctorData) -> FunctorDoc {
        FunctorDoc {
            source: CatDoc::of(&f.source),
            target: CatDoc::of(&f.target),
            obj: f.obj_map.clone(),
            mor: f.mor_map.clone(),
        }
    }

    pub fn into_functor(self) -> Result<FunctorData, CatError> {
        let source = self.source.into_cat()?;
        let target = self.target.into_cat()?;
        FunctorData::new(source, target, self.obj, self.mor)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommaDoc {
    pub objects: usize,
    pub morphisms: Vec<(usize, usize)>,
    pub identities: Vec<usize>,
    pub compose: Vec<(usize, usize, usize)>,
    pub decode: Vec<(usize, usize, usize)>,
}

impl CommaDoc {
    pub fn of(c: &crate::comma::CommaCat) -> CommaDoc {
        let cat = CatDoc::of(&c.cat);
        CommaDoc {
            objects: cat.objects,
            morphisms: cat.morphisms,
            identities: cat.identities,
            compose: cat.compose,
            decode: c.decode.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub apex: CatDoc,
    pub d0: FunctorDoc,
    pub d1: FunctorDoc,
    pub cell: Vec<usize>,
}

impl DiagramDoc {
    pub fn of(d: &TwoCellDiagram) -> DiagramDoc {
        DiagramDoc {
            apex: CatDoc::of(&d.apex),
            d0: FunctorDoc::of(&d.d0),
            d1: FunctorDoc::of(&d.d1),
            cell: d.cell.component.clone(),
        }
    }

    pub fn into_diagram(self) -> Result<TwoCellDiagram, CatError> {
        let apex = self.apex.into_cat()?;
        let d0 = self.d0.into_functor()?;
        let d1 = self.d1.into_functor()?;
        if *d0.source != *apex || *d1.source != *apex {
            return Err(CatError::Invalid("diagram legs must start at the apex".into()));
        }
        if *d0.target != *d1.target {
            return Err(CatError::TargetMismatch);
        }
        let d0 = FunctorData { source: apex.clone(), ..d0 };
        let d1 = FunctorData { source: apex.clone(), target: d0.target.clone(), ..d1 };
        if self.cell.len() != apex.object_count()
            || self.cell.iter().any(|&c| c >= d0.target.mor_count())
        {
            return Err(CatError::IndexOutOfRange("cell components".into()));
        }
        let cell = NatTransData { from: d0.clone(), to: d1.clone(), component: self.cell };
        Ok(TwoCellDiagram { apex, d0, d1, cell })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CleavageDoc {
    pub lifts: Vec<(usize, usize, usize, usize)>,
}

impl CleavageDoc {
    pub fn of(c: &Cleavage) -> CleavageDoc {
        let mut lifts: Vec<_> = c
            .lifts
            .iter()
            .map(|(&(a, beta), &(a1, alpha))| (a, beta, a1, alpha))
            .collect();
        lifts.sort_unstable();
        CleavageDoc { lifts }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoFunctorDoc {
    pub base: CatDoc,
    pub fibres: Vec<CatDoc>,
    pub reindex: Vec<FunctorDoc>,
    pub unit: Vec<Vec<usize>>,
    pub comp: Vec<(usize, usize, Vec<usize>)>,
}

impl PseudoFunctorDoc {
    pub fn of(p: &PseudoFunctorData) -> PseudoFunctorDoc {
        let mut comp: Vec<_> = p
            .comp_iso
            .iter()
            .map(|(&(b1, b2), cell)| (b1, b2, cell.clone()))
            .collect();
        comp.sort_unstable();
        PseudoFunctorDoc {
            base: CatDoc::of(&p.base),
            fibres: p.fibres.iter().map(|f| CatDoc::of(f)).collect(),
            reindex: p.reindex.iter().map(FunctorDoc::of).collect(),
            unit: p.unit_iso.clone(),
            comp,
        }
    }

    pub fn into_pseudofunctor(self) -> Result<PseudoFunctorData, CatError> {
        let base = self.base.into_cat()?;
        let fibres: Vec<Arc<FinCat>> = self
            .fibres
            .into_iter()
            .map(|f| f.into_cat())
            .collect::<Result<_, _>>()?;
        if fibres.len() != base.object_count() {
            return Err(CatError::IndexOutOfRange("one fibre per base object".into()));
        }
        if self.reindex.len() != base.mor_count() {
            return Err(CatError::IndexOutOfRange("one reindexing per base morphism".into()));
        }
        let mut reindex = Vec::with_capacity(self.reindex.len());
        for (beta, doc) in self.reindex.into_iter().enumerate() {
            let f = doc.into_functor()?;
            if *f.source != *fibres[base.cod(beta)] || *f.target != *fibres[base.dom(beta)] {
                return Err(CatError::Invalid(format!(
                    "reindexing {beta} does not run between the stated fibres"
                )));
            }
            reindex.push(FunctorData {
                source: fibres[base.cod(beta)].clone(),
                target: fibres[base.dom(beta)].clone(),
                obj_map: f.obj_map,
                mor_map: f.mor_map,
            });
        }
        let comp_iso = self.comp.into_iter().map(|(b1, b2, cell)| ((b1, b2), cell)).collect();
        Ok(PseudoFunctorData { base, fibres, reindex, unit_iso: self.unit, comp_iso })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentedDoc {
    pub objects: usize,
    pub generators: Vec<(usize, usize)>,
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realized: Option<CatDoc>,
}

impl PresentedDoc {
    pub fn of(p: &PresentedCategory) -> PresentedDoc {
        PresentedDoc {
            objects: p.objects,
            generators: p.generators.clone(),
            relations: p.relations.clone(),
            realized: p.realized.as_ref().map(|c| CatDoc::of(c)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientDoc {
    pub category: CatDoc,
    pub projection: FunctorDoc,
}

impl QuotientDoc {
    pub fn of(q: &Quotient) -> QuotientDoc {
        QuotientDoc { category: CatDoc::of(&q.cat), projection: FunctorDoc::of(&q.proj) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvidenceDoc {
    pub label: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorizationDoc {
    pub kind: String,
    pub q: FunctorDoc,
    pub mid: CatDoc,
    pub s: FunctorDoc,
    pub evidence: Vec<EvidenceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub over_base: Option<FunctorDoc>,
}

impl FactorizationDoc {
    pub fn of(f: &FactorizationResult) -> FactorizationDoc {
        FactorizationDoc {
            kind: match f.kind {
                crate::factor::FactorKind::Comprehensive => "comprehensive".into(),
                crate::factor::FactorKind::Groupoid => "groupoid".into(),
            },
            q: FunctorDoc::of(&f.q),
            mid: CatDoc::of(&f.mid),
            s: FunctorDoc::of(&f.s),
            evidence: f
                .evidence
                .iter()
                .map(|e| EvidenceDoc { label: e.label.clone(), holds: e.holds })
                .collect(),
            over_base: f.over_base.as_ref().map(FunctorDoc::of),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdjunctionDoc {
    pub left: FunctorDoc,
    pub right: FunctorDoc,
    pub unit: Vec<usize>,
    pub counit: Vec<usize>,
}

impl AdjunctionDoc {
    pub fn of(a: &crate::adjoint::AdjunctionData) -> AdjunctionDoc {
        AdjunctionDoc {
            left: FunctorDoc::of(&a.left),
            right: FunctorDoc::of(&a.right),
            unit: a.unit.component.clone(),
            counit: a.counit.component.clone(),
        }
    }
}

/// Triangle g∘p = f of a morphism of fibrations over a base; cleavages are
/// recomputed on parse.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FibBDoc {
    pub f: FunctorDoc,
    pub g: FunctorDoc,
    pub p: FunctorDoc,
}

impl FibBDoc {
    pub fn of(m: &FibBMorphism) -> FibBDoc {
        FibBDoc { f: FunctorDoc::of(&m.f), g: FunctorDoc::of(&m.g), p: FunctorDoc::of(&m.p) }
    }

    pub fn into_fibb(self) -> Result<FibBMorphism, CatError> {
        let f = self.f.into_functor()?;
        let g = self.g.into_functor()?;
        let p = self.p.into_functor()?;
        if *f.target != *g.target || *p.source != *f.source || *p.target != *g.source {
            return Err(CatError::TargetMismatch);
        }
        let p = FunctorData {
            source: f.source.clone(),
            target: g.source.clone(),
            obj_map: p.obj_map,
            mor_map: p.mor_map,
        };
        let f_cleavage = extract_cleavage(&f).ok_or(CatError::NotAFibration)?;
        let g_cleavage = extract_cleavage(&g).ok_or(CatError::NotAFibration)?;
        Ok(FibBMorphism { f, f_cleavage, g, g_cleavage, p })
    }
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn cat_roundtrip_is_exact() {
        for c in [builders::iso_pair(), builders::comm_square_poset(), builders::cyclic(3)] {
            let doc = CatDoc::of(&c);
            let text = to_canonical_string(&doc);
            let back: CatDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(*back.into_cat().unwrap(), *c);
        }
    }

    #[test]
    fn functor_roundtrip() {
        let f = builders::arrow_to_iso_pair();
        let doc = FunctorDoc::of(&f);
        let back = serde_json::from_str::<FunctorDoc>(&to_canonical_string(&doc))
            .unwrap()
            .into_functor()
            .unwrap();
        assert!(back.same_as(&f));
    }

    #[test]
    fn compose_triples_are_sorted() {
        let doc = CatDoc::of(&builders::iso_pair());
        let mut sorted = doc.compose.clone();
        sorted.sort_unstable();
        assert_eq!(doc.compose, sorted);
    }

    #[test]
    fn malformed_indices_are_rejected() {
        let doc = CatDoc { objects: 1, morphisms: vec![(0, 5)], identities: vec![0], compose: vec![] };
        assert!(doc.into_cat().is_err());
    }
}

//! Seeded generators of categories, functors, fibrations and fibrewise
//! morphisms, plus the proposition-validation suite runner. Generation is a
//! pure function of the configuration: equal seeds give byte-identical
//! canonical JSON.
//!
//! Fibrations are generated constructively as Grothendieck totals of strict
//! pseudofunctors — raw random functors are almost never fibrations.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adjoint;
use crate::builders;
use crate::cat::{full_subcategory, FinCat, FunctorData, Mor, Obj};
use crate::colim::{self, GroupoidReflection, Quotient};
use crate::comma::{self, MonadKind, Side};
use crate::error::CatError;
use crate::factor::{self, FactorKind, FactorizationResult, FibBMode, FibBMorphism};
use crate::fibcheck::{self, Cleavage, Criterion, ALL_CRITERIA};
use crate::groth::{self, GrothendieckTotal, PseudoFunctorData};
use crate::json;

#[derive(Clone, Debug, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub fibre_size_bound: usize,
    pub base_size_bound: usize,
    pub instance_count: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_objects: 8,
            max_morphisms: 48,
            fibre_size_bound: 3,
            base_size_bound: 4,
            instance_count: 50,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig { seed, ..Default::default() }
    }

    fn rng(&self, instance: usize) -> ChaCha8Rng {
        let mut x = self
            .seed
            .wrapping_add((instance as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        // splitmix64 finalizer
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^= x >> 31;
        ChaCha8Rng::seed_from_u64(x)
    }
}

// ---------------------------------------------------------------------------
// Category and functor generators
// ---------------------------------------------------------------------------

fn gen_dag(rng: &mut ChaCha8Rng, vertices: usize, max_edges: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if vertices < 2 {
        return edges;
    }
    let count = rng.gen_range(0..=max_edges);
    for _ in 0..count {
        let u = rng.gen_range(0..vertices - 1);
        let v = rng.gen_range(u + 1..vertices);
        if !edges.contains(&(u, v)) {
            edges.push((u, v));
        }
    }
    edges
}

fn gen_poset_cat(rng: &mut ChaCha8Rng, n: usize) -> Arc<FinCat> {
    let edges = gen_dag(rng, n, n + 1);
    // Reachability closure is a partial order on a DAG.
    let mut le = vec![vec![false; n]; n];
    for x in 0..n {
        le[x][x] = true;
    }
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in &edges {
            for x in 0..n {
                if le[x][u] && !le[x][v] {
                    le[x][v] = true;
                    changed = true;
                }
            }
        }
    }
    builders::poset(n, |x, y| le[x][y])
}

fn gen_category_rng(rng: &mut ChaCha8Rng, max_obj: usize, max_mor: usize) -> Arc<FinCat> {
    for _ in 0..16 {
        let cat = match rng.gen_range(0..11u32) {
            0 => builders::terminal(),
            1 => builders::discrete(rng.gen_range(1..=max_obj.clamp(1, 3))),
            2 => builders::chain(rng.gen_range(2..=max_obj.clamp(2, 4))),
            3 => {
                let n = rng.gen_range(3..=max_obj.clamp(3, 5));
                gen_poset_cat(rng, n)
            }
            4 => {
                let v = rng.gen_range(2..=max_obj.clamp(2, 4));
                let edges = gen_dag(rng, v, 3);
                builders::free_on_dag(v, &edges).cat
            }
            5 => builders::iso_pair(),
            6 => builders::cyclic(rng.gen_range(2..=3)),
            7 => builders::chaotic(rng.gen_range(2..=3.min(max_obj.max(2)))),
            8 => builders::parallel_pair(),
            9 => builders::arrow(),
            _ => builders::comm_square_poset(),
        };
        if cat.object_count() <= max_obj && cat.mor_count() <= max_mor {
            return cat;
        }
    }
    builders::terminal()
}

/// Deterministic random category within the configured bounds.
pub fn gen_category(cfg: &GenConfig) -> Arc<FinCat> {
    let mut rng = cfg.rng(0);
    gen_category_rng(&mut rng, cfg.max_objects, cfg.max_morphisms)
}

/// Categories whose groupoid reflection is provably finite (forests, posets
/// with unique parallel paths, finite groupoids). Used wherever a suite runs
/// the localization engine over whole components.
fn gen_tame_category_rng(rng: &mut ChaCha8Rng, max_obj: usize) -> Arc<FinCat> {
    match rng.gen_range(0..7u32) {
        0 => builders::terminal(),
        1 => builders::discrete(rng.gen_range(1..=max_obj.clamp(1, 3))),
        2 => builders::chain(rng.gen_range(2..=max_obj.clamp(2, 4))),
        3 => {
            // Free category on a forest.
            let v = rng.gen_range(2..=max_obj.clamp(2, 5));
            let mut edges = Vec::new();
            for v2 in 1..v {
                if rng.gen_bool(0.8) {
                    edges.push((rng.gen_range(0..v2), v2));
                }
            }
            builders::free_on_dag(v, &edges).cat
        }
        4 => builders::comm_square_poset(),
        5 => builders::iso_pair(),
        _ => builders::cyclic(rng.gen_range(2..=3)),
    }
}

/// Backtracking completion of a prescribed object map to a functor; None if
/// no morphism assignment exists.
fn find_functor_with_objmap(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    obj_map: &[Obj],
) -> Option<FunctorData> {
    let mut mor_map = vec![None; c.mor_count()];
    for x in 0..c.object_count() {
        mor_map[c.id(x)] = Some(d.id(obj_map[x]));
    }
    fn go(
        c: &FinCat,
        d: &FinCat,
        obj_map: &[Obj],
        mor_map: &mut Vec<Option<Mor>>,
        from: Mor,
    ) -> bool {
        let next = (from..c.mor_count()).find(|&m| mor_map[m].is_none());
        let m = match next {
            None => return true,
            Some(m) => m,
        };
        for &img in d.hom(obj_map[c.dom(m)], obj_map[c.cod(m)]) {
            let mut ok = true;
            'outer: for other in 0..c.mor_count() {
                let o_img = match mor_map[other] {
                    Some(i) => i,
                    None => continue,
                };
                for (g, f, gi, fi) in [(m, other, img, o_img), (other, m, o_img, img)] {
                    if c.composable(g, f) {
                        let want = c.compose(g, f);
                        if let Some(w) = mor_map[want].or(if want == m { Some(img) } else { None })
                        {
                            if d.try_compose(gi, fi) != Some(w) {
                                ok = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            mor_map[m] = Some(img);
            if go(c, d, obj_map, mor_map, m + 1) {
                return true;
            }
            mor_map[m] = None;
        }
        false
    }
    if go(c, d, obj_map, &mut mor_map, 0) {
        Some(FunctorData {
            source: c.clone(),
            target: d.clone(),
            obj_map: obj_map.to_vec(),
            mor_map: mor_map.into_iter().map(Option::unwrap).collect(),
        })
    } else {
        None
    }
}

/// Some functor C → D, preferring a random object map, falling back to a
/// constant. None only when D is empty and C is not.
fn random_functor_between(
    rng: &mut ChaCha8Rng,
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
) -> Option<FunctorData> {
    if c.object_count() == 0 {
        return Some(FunctorData {
            source: c.clone(),
            target: d.clone(),
            obj_map: vec![],
            mor_map: vec![],
        });
    }
    if d.object_count() == 0 {
        return None;
    }
    for _ in 0..6 {
        let obj_map: Vec<Obj> = (0..c.object_count())
            .map(|_| rng.gen_range(0..d.object_count()))
            .collect();
        if let Some(f) = find_functor_with_objmap(c, d, &obj_map) {
            return Some(f);
        }
    }
    Some(FunctorData::constant(c, d, rng.gen_range(0..d.object_count())))
}

/// A functor into a prescribed target: a free-category source mapped edge by
/// edge, a constant, or an identity.
fn gen_functor_into(rng: &mut ChaCha8Rng, target: &Arc<FinCat>, cfg: &GenConfig) -> FunctorData {
    match rng.gen_range(0..4u32) {
        0 if target.object_count() > 0 => {
            FunctorData::constant(&gen_category_rng(rng, 3, 8), target, rng.gen_range(0..target.object_count()))
        }
        1 => FunctorData::identity(target),
        2 if target.object_count() > 0 => {
            // Free source: vertices land anywhere, edges pick morphisms.
            let v = rng.gen_range(1..=3usize);
            let free = builders::free_on_dag(v, &gen_dag(rng, v, 3));
            let verts: Vec<Obj> = (0..v).map(|_| rng.gen_range(0..target.object_count())).collect();
            free_functor(&free, target, &verts, rng)
                .unwrap_or_else(|| FunctorData::constant(&free.cat, target, verts[0]))
        }
        _ => {
            let src = gen_category_rng(rng, cfg.max_objects.min(4), cfg.max_morphisms.min(12));
            random_functor_between(rng, &src, target)
                .unwrap_or_else(|| FunctorData::identity(target))
        }
    }
}

/// Extends vertex images and random edge images along paths of a free
/// category; None when an edge has no morphism to map to.
fn free_functor(
    free: &builders::FreeCat,
    target: &Arc<FinCat>,
    verts: &[Obj],
    rng: &mut ChaCha8Rng,
) -> Option<FunctorData> {
    let cat = &free.cat;
    let mut edge_img = Vec::new();
    for &em in &free.edge_mor {
        let (u, v) = (cat.dom(em), cat.cod(em));
        let hom = target.hom(verts[u], verts[v]);
        if hom.is_empty() {
            return None;
        }
        edge_img.push(hom[rng.gen_range(0..hom.len())]);
    }
    let mor_map: Vec<Mor> = (0..cat.mor_count())
        .map(|m| {
            let mut acc = target.id(verts[cat.dom(m)]);
            for &e in &free.paths[m] {
                acc = target.compose(edge_img[e], acc);
            }
            acc
        })
        .collect();
    Some(FunctorData {
        source: cat.clone(),
        target: target.clone(),
        obj_map: verts.to_vec(),
        mor_map,
    })
}

/// Deterministic random functor: a mix of identities, constants, free-source
/// functors, inclusions, and curated examples.
pub fn gen_functor(cfg: &GenConfig) -> FunctorData {
    let mut rng = cfg.rng(1);
    gen_functor_rng(&mut rng, cfg)
}

fn gen_functor_rng(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> FunctorData {
    match rng.gen_range(0..6u32) {
        0 => builders::point_of_iso_pair(),
        1 => builders::arrow_to_iso_pair(),
        2 => {
            let c = gen_category_rng(rng, cfg.max_objects, cfg.max_morphisms);
            builders::to_terminal(&c)
        }
        3 => {
            // Full subcategory inclusion.
            let c = gen_category_rng(rng, cfg.max_objects, cfg.max_morphisms);
            if c.object_count() <= 1 {
                return FunctorData::identity(&c);
            }
            let keep: Vec<Obj> = (0..c.object_count()).filter(|_| rng.gen_bool(0.7)).collect();
            let keep = if keep.is_empty() { vec![0] } else { keep };
            let (sub, obj_old, mor_old) = full_subcategory(&c, &keep);
            FunctorData {
                source: Arc::new(sub),
                target: c.clone(),
                obj_map: obj_old,
                mor_map: mor_old,
            }
        }
        _ => {
            let target = gen_category_rng(rng, cfg.max_objects, cfg.max_morphisms);
            gen_functor_into(rng, &target, cfg)
        }
    }
}

// ---------------------------------------------------------------------------
// Fibration generators
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GeneratedFibration {
    pub proj: FunctorData,
    pub cleavage: Cleavage,
    pub total: GrothendieckTotal,
    pub pf: PseudoFunctorData,
}

fn gen_fibre(rng: &mut ChaCha8Rng, bound: usize, loop_free: bool) -> Arc<FinCat> {
    if loop_free {
        // Forest-shaped free categories have trivial fundamental groups, so
        // their groupoid reflections are guaranteed finite.
        match rng.gen_range(0..3u32) {
            0 => builders::discrete(rng.gen_range(1..=bound.max(1))),
            1 => builders::chain(rng.gen_range(1..=bound.max(1))),
            _ => {
                let v = rng.gen_range(1..=bound.max(1));
                // Tree edges only: attach each vertex to an earlier one.
                let mut edges = Vec::new();
                for v2 in 1..v {
                    if rng.gen_bool(0.8) {
                        let u = rng.gen_range(0..v2);
                        edges.push((u, v2));
                    }
                }
                builders::free_on_dag(v, &edges).cat
            }
        }
    } else {
        match rng.gen_range(0..5u32) {
            0 => builders::terminal(),
            1 => builders::discrete(rng.gen_range(1..=bound.max(1))),
            2 => builders::chain(rng.gen_range(1..=bound.max(1))),
            3 => builders::iso_pair(),
            _ => builders::cyclic(2),
        }
    }
}

fn strict_pf_on_free_base(
    rng: &mut ChaCha8Rng,
    base_vertices: usize,
    base_edges: &[(usize, usize)],
    fibre_bound: usize,
    loop_free: bool,
) -> PseudoFunctorData {
    let free = builders::free_on_dag(base_vertices, base_edges);
    let base = free.cat.clone();
    let fibres: Vec<Arc<FinCat>> = (0..base_vertices)
        .map(|_| gen_fibre(rng, fibre_bound, loop_free))
        .collect();
    // Contravariant edge reindexing: an edge u → v acts fibre(v) → fibre(u).
    let edge_re: Vec<FunctorData> = base_edges
        .iter()
        .map(|&(u, v)| {
            random_functor_between(rng, &fibres[v], &fibres[u])
                .expect("fibres are nonempty")
        })
        .collect();
    let reindex: Vec<FunctorData> = (0..base.mor_count())
        .map(|m| {
            let path = &free.paths[m];
            let cod_v = base.cod(m);
            let mut acc = FunctorData::identity(&fibres[cod_v]);
            // Path e1...ek in application order: reindex = R(e1)∘...∘R(ek).
            for &e in path.iter().rev() {
                acc = FunctorData::compose(&edge_re[e], &acc);
            }
            acc
        })
        .collect();
    PseudoFunctorData::strict(base, fibres, reindex)
}

/// A split fibration as the Grothendieck total of a strict pseudofunctor,
/// with its canonical cleavage. Deterministic per seed.
pub fn gen_fibration(cfg: &GenConfig) -> GeneratedFibration {
    let mut rng = cfg.rng(2);
    gen_fibration_rng(&mut rng, cfg, false)
}

fn gen_fibration_rng(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    loop_free: bool,
) -> GeneratedFibration {
    let mut fibre_bound = cfg.fibre_size_bound.max(1);
    for attempt in 0..12 {
        let pf = match rng.gen_range(0..5u32) {
            0 => {
                // Terminal base.
                strict_pf_on_free_base(rng, 1, &[], fibre_bound, loop_free)
            }
            1 => {
                // Discrete base.
                let n = rng.gen_range(1..=cfg.base_size_bound.clamp(1, 2));
                strict_pf_on_free_base(rng, n, &[], fibre_bound, loop_free)
            }
            2 | 3 => {
                let v = rng.gen_range(2..=cfg.base_size_bound.clamp(2, 4));
                let edges = gen_dag(rng, v, 3);
                strict_pf_on_free_base(rng, v, &edges, fibre_bound, loop_free)
            }
            _ => {
                // Grouplike base with identity reindexing.
                let base = if rng.gen_bool(0.5) { builders::iso_pair() } else { builders::cyclic(2) };
                let fibre = gen_fibre(rng, fibre_bound, loop_free);
                let fibres: Vec<_> = (0..base.object_count()).map(|_| fibre.clone()).collect();
                let reindex = (0..base.mor_count()).map(|_| FunctorData::identity(&fibre)).collect();
                PseudoFunctorData::strict(base, fibres, reindex)
            }
        };
        let total = groth::grothendieck_construction(&pf).expect("generated pseudofunctor is coherent");
        if total.total.object_count() <= cfg.max_objects && total.total.mor_count() <= cfg.max_morphisms
        {
            return GeneratedFibration {
                proj: total.proj.clone(),
                cleavage: total.cleavage.clone(),
                total,
                pf,
            };
        }
        if attempt % 3 == 2 && fibre_bound > 1 {
            fibre_bound -= 1;
        }
    }
    // Degenerate but valid fallback.
    let pf = strict_pf_on_free_base(rng, 1, &[], 1, loop_free);
    let total = groth::grothendieck_construction(&pf).unwrap();
    GeneratedFibration { proj: total.proj.clone(), cleavage: total.cleavage.clone(), total, pf }
}

/// A Street fibration that is not a fibration: a generated fibration whose
/// base has one object duplicated up to isomorphism, so lifts exist only up
/// to the correcting iso.
fn gen_street_fibration_rng(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> FunctorData {
    let small = GenConfig {
        max_objects: cfg.max_objects.min(5),
        max_morphisms: cfg.max_morphisms.min(20),
        base_size_bound: 2,
        ..cfg.clone()
    };
    let fib = gen_fibration_rng(rng, &small, false);
    let b = &fib.proj.target;
    // Duplicate an object in the image of the projection, if any.
    let b0 = fib.proj.obj_map.first().copied().unwrap_or(0);
    let (_, incl) = builders::duplicate_object(b, b0);
    FunctorData::compose(&incl, &fib.proj)
}

fn gen_isofibration_rng(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> FunctorData {
    match rng.gen_range(0..4u32) {
        0 => gen_fibration_rng(rng, cfg, false).proj,
        1 => gen_fibration_rng(rng, cfg, false).proj.opposite(),
        2 => {
            // Any functor into a discrete category is an isofibration. Tame
            // source: the coinverter of its identee is a whole-component
            // groupoid reflection.
            let src = gen_tame_category_rng(rng, cfg.max_objects);
            let (_, q) = adjoint::connected_components(&src);
            q
        }
        _ => FunctorData::identity(&gen_tame_category_rng(rng, cfg.max_objects)),
    }
}

// ---------------------------------------------------------------------------
// Fib(B) generators
// ---------------------------------------------------------------------------

fn identity_cleavage(f: &FunctorData) -> Cleavage {
    let mut lifts = std::collections::HashMap::new();
    for a in 0..f.source.object_count() {
        for beta in 0..f.target.mor_count() {
            if f.target.cod(beta) == f.obj_map[a] {
                debug_assert!(f.target.is_identity(beta));
                lifts.insert((a, beta), (a, f.source.id(a)));
            }
        }
    }
    Cleavage { lifts }
}

/// A fibrewise opfibration over B, generated as the Grothendieck image of a
/// pointwise opfibration.
pub fn gen_fibb_morphism(cfg: &GenConfig) -> FibBMorphism {
    let mut rng = cfg.rng(3);
    gen_fibb_rng(&mut rng, cfg)
}

/// The exact instance the fibb suite would use at `index`.
pub fn gen_fibb_instance(cfg: &GenConfig, index: usize) -> FibBMorphism {
    let mut rng = cfg.rng(index);
    gen_fibb_rng(&mut rng, cfg)
}

fn gen_fibb_rng(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> FibBMorphism {
    match rng.gen_range(0..3u32) {
        0 => {
            // Product projection over a free base: A_b = C_b × F_b, p = pr₁.
            for _ in 0..8 {
                let v = rng.gen_range(1..=cfg.base_size_bound.clamp(1, 2));
                let edges = gen_dag(rng, v, 2);
                let pc = strict_pf_on_free_base(rng, v, &edges, 2, false);
                let pf_extra = strict_pf_on_free_base_with(rng, &pc, 2);
                let (m, ok) = product_fibb(&pc, &pf_extra);
                if ok && m.f.source.mor_count() <= cfg.max_morphisms {
                    return m;
                }
            }
            trivial_fibb()
        }
        1 => {
            // Terminal base: a single opfibration.
            let small = GenConfig {
                max_objects: cfg.max_objects.min(5),
                max_morphisms: cfg.max_morphisms.min(16),
                fibre_size_bound: 2,
                base_size_bound: 2,
                ..cfg.clone()
            };
            let opf = gen_fibration_rng(rng, &small, false).proj.opposite();
            let one = builders::terminal();
            let f = FunctorData::constant(&opf.source, &one, 0);
            let g = FunctorData::constant(&opf.target, &one, 0);
            FibBMorphism {
                f_cleavage: identity_cleavage(&f),
                g_cleavage: identity_cleavage(&g),
                f,
                g,
                p: opf,
            }
        }
        _ => {
            // Discrete base with independent opfibration fibres.
            let n = rng.gen_range(1..=2usize);
            let base = builders::discrete(n);
            let mut a_fibres = Vec::new();
            let mut c_fibres = Vec::new();
            let mut p_fibres = Vec::new();
            for _ in 0..n {
                let small = GenConfig {
                    max_objects: 4,
                    max_morphisms: 10,
                    fibre_size_bound: 2,
                    base_size_bound: 2,
                    ..cfg.clone()
                };
                let opf = gen_fibration_rng(rng, &small, false).proj.opposite();
                a_fibres.push(opf.source.clone());
                c_fibres.push(opf.target.clone());
                p_fibres.push(opf);
            }
            let pa = PseudoFunctorData::strict(
                base.clone(),
                a_fibres.clone(),
                (0..n).map(|b| FunctorData::identity(&a_fibres[b])).collect(),
            );
            let pc = PseudoFunctorData::strict(
                base.clone(),
                c_fibres.clone(),
                (0..n).map(|b| FunctorData::identity(&c_fibres[b])).collect(),
            );
            let ta = groth::grothendieck_construction(&pa).unwrap();
            let tc = groth::grothendieck_construction(&pc).unwrap();
            let obj_map: Vec<Obj> = ta
                .obj_decode
                .iter()
                .map(|&(b, x)| tc.encode_obj(b, p_fibres[b].obj_map[x]).unwrap())
                .collect();
            let mor_map: Vec<Mor> = (0..ta.total.mor_count())
                .map(|m| {
                    let (beta, xi) = ta.mor_decode[m];
                    let (i, j) = (ta.total.dom(m), ta.total.cod(m));
                    let (b, _) = ta.obj_decode[i];
                    tc.encode_mor(obj_map[i], obj_map[j], beta, p_fibres[b].mor_map[xi]).unwrap()
                })
                .collect();
            let p = FunctorData { source: ta.total.clone(), target: tc.total.clone(), obj_map, mor_map };
            FibBMorphism {
                f: ta.proj.clone(),
                f_cleavage: ta.cleavage.clone(),
                g: tc.proj.clone(),
                g_cleavage: tc.cleavage.clone(),
                p,
            }
        }
    }
}

fn trivial_fibb() -> FibBMorphism {
    let one = builders::terminal();
    let f = FunctorData::identity(&one);
    FibBMorphism {
        f_cleavage: identity_cleavage(&f),
        g_cleavage: identity_cleavage(&f),
        f: f.clone(),
        g: f.clone(),
        p: f,
    }
}

/// A second strict pseudofunctor on the same base as `pc`: a constant fibre
/// with identity reindexing (strict on any base).
fn strict_pf_on_free_base_with(
    rng: &mut ChaCha8Rng,
    pc: &PseudoFunctorData,
    fibre_bound: usize,
) -> PseudoFunctorData {
    let base = pc.base.clone();
    let shared = gen_fibre(rng, fibre_bound, false);
    let fibres: Vec<Arc<FinCat>> = (0..base.object_count()).map(|_| shared.clone()).collect();
    let reindex: Vec<FunctorData> =
        (0..base.mor_count()).map(|_| FunctorData::identity(&shared)).collect();
    PseudoFunctorData::strict(base, fibres, reindex)
}

/// Assembles A_b = C_b × F_b with p = pr₁ over the shared base.
fn product_fibb(pc: &PseudoFunctorData, pf_extra: &PseudoFunctorData) -> (FibBMorphism, bool) {
    let base = pc.base.clone();
    let mut a_fibres = Vec::new();
    let mut prods = Vec::new();
    for b in 0..base.object_count() {
        let prod = builders::product(&pc.fibres[b], &pf_extra.fibres[b]);
        a_fibres.push(prod.cat.clone());
        prods.push(prod);
    }
    let reindex: Vec<FunctorData> = (0..base.mor_count())
        .map(|beta| {
            let (lo, hi) = (base.dom(beta), base.cod(beta));
            let rc = &pc.reindex[beta];
            let rf = &pf_extra.reindex[beta];
            let obj_map: Vec<Obj> = prods[hi]
                .obj_decode
                .iter()
                .map(|&(c, x)| prods[lo].obj_encode[&(rc.obj_map[c], rf.obj_map[x])])
                .collect();
            let mor_map: Vec<Mor> = prods[hi]
                .mor_decode
                .iter()
                .map(|&(m, n)| prods[lo].mor_encode[&(rc.mor_map[m], rf.mor_map[n])])
                .collect();
            FunctorData { source: a_fibres[hi].clone(), target: a_fibres[lo].clone(), obj_map, mor_map }
        })
        .collect();
    let pa = PseudoFunctorData::strict(base.clone(), a_fibres, reindex);
    let ta = match groth::grothendieck_construction(&pa) {
        Ok(t) => t,
        Err(_) => return (trivial_fibb(), false),
    };
    let tc = match groth::grothendieck_construction(pc) {
        Ok(t) => t,
        Err(_) => return (trivial_fibb(), false),
    };
    let obj_map: Vec<Obj> = ta
        .obj_decode
        .iter()
        .map(|&(b, i)| tc.encode_obj(b, prods[b].obj_decode[i].0).unwrap())
        .collect();
    let mor_map: Vec<Mor> = (0..ta.total.mor_count())
        .map(|m| {
            let (beta, xi) = ta.mor_decode[m];
            let (i, j) = (ta.total.dom(m), ta.total.cod(m));
            let (b_lo, _) = ta.obj_decode[i];
            tc.encode_mor(obj_map[i], obj_map[j], beta, prods[b_lo].mor_decode[xi].0).unwrap()
        })
        .collect();
    let p = FunctorData { source: ta.total.clone(), target: tc.total.clone(), obj_map, mor_map };
    (
        FibBMorphism {
            f: ta.proj.clone(),
            f_cleavage: ta.cleavage.clone(),
            g: tc.proj.clone(),
            g_cleavage: tc.cleavage.clone(),
            p,
        },
        true,
    )
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct InstanceResult {
    pub index: usize,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimized: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instance_count: usize,
    pub passed: bool,
    pub results: Vec<InstanceResult>,
}

impl SuiteReport {
    fn new(suite: &str, cfg: &GenConfig, results: Vec<InstanceResult>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed: cfg.seed,
            instance_count: cfg.instance_count,
            passed: results.iter().all(|r| r.passed),
            results,
        }
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "chevalley-agreement",
    "example-2.3",
    "comprehensive",
    "groupoid-factorization",
    "isofib-cons-gpd",
    "pullback-stability",
    "comma-projections",
    "pseudo-to-fib",
    "monad-laws",
    "r-preserves-identees",
    "dagger",
    "fibb-factorization",
    "engine-honesty",
];

pub fn run_suite(cfg: &GenConfig, suite: &str) -> Result<SuiteReport, CatError> {
    let results = match suite {
        "chevalley-agreement" => chevalley_agreement(cfg),
        "example-2.3" => example_2_3(),
        "comprehensive" => comprehensive_suite(cfg),
        "groupoid-factorization" => groupoid_factorization_suite(cfg),
        "isofib-cons-gpd" => isofib_cons_gpd(cfg),
        "pullback-stability" => pullback_stability(cfg),
        "comma-projections" => comma_projections(cfg),
        "pseudo-to-fib" => pseudo_to_fib(cfg),
        "monad-laws" => monad_laws(cfg),
        "r-preserves-identees" => r_preserves_identees(cfg),
        "dagger" => dagger_suite(cfg),
        "fibb-factorization" => fibb_factorization(cfg),
        "engine-honesty" => engine_honesty(),
        other => return Err(CatError::Invalid(format!("unknown suite '{other}'"))),
    };
    Ok(SuiteReport::new(suite, cfg, results))
}

fn pass(index: usize, detail: impl Into<String>) -> InstanceResult {
    InstanceResult { index, passed: true, detail: detail.into(), witness: None, minimized: None }
}

fn fail_with_functor(
    index: usize,
    detail: impl Into<String>,
    f: &FunctorData,
    fails: Option<&dyn Fn(&FunctorData) -> bool>,
) -> InstanceResult {
    let witness = serde_json::to_value(json::FunctorDoc::of(f)).ok();
    let minimized = fails.map(|pred| {
        let small = shrink_failing_functor(f, pred);
        serde_json::to_value(json::FunctorDoc::of(&small)).unwrap()
    });
    InstanceResult { index, passed: false, detail: detail.into(), witness, minimized }
}

/// Greedy minimization: full-subcategory object deletions, then removable
/// morphism deletions, while the failure persists. Well-founded by size.
fn shrink_failing_functor(
    f: &FunctorData,
    fails: &dyn Fn(&FunctorData) -> bool,
) -> FunctorData {
    let mut current = f.clone();
    loop {
        let mut improved = false;
        let n = current.source.object_count();
        for drop in 0..n {
            if n <= 1 {
                break;
            }
            let keep: Vec<Obj> = (0..n).filter(|&x| x != drop).collect();
            let (sub, obj_old, mor_old) = full_subcategory(&current.source, &keep);
            let cand = FunctorData {
                source: Arc::new(sub),
                target: current.target.clone(),
                obj_map: obj_old.iter().map(|&x| current.obj_map[x]).collect(),
                mor_map: mor_old.iter().map(|&m| current.mor_map[m]).collect(),
            };
            if fails(&cand) {
                current = cand;
                improved = true;
                break;
            }
        }
        if improved {
            continue;
        }
        let src = current.source.clone();
        for drop in 0..src.mor_count() {
            if src.is_identity(drop) {
                continue;
            }
            // Removable only if it is not the composite of two remaining
            // non-identity arrows.
            let is_composite = (0..src.mor_count()).any(|g| {
                (0..src.mor_count()).any(|h| {
                    g != drop
                        && h != drop
                        && !src.is_identity(g)
                        && !src.is_identity(h)
                        && src.composable(g, h)
                        && src.compose(g, h) == drop
                })
            });
            if is_composite {
                continue;
            }
            let keep: Vec<Mor> = (0..src.mor_count()).filter(|&m| m != drop).collect();
            if let Some(cand) = restrict_morphisms(&current, &keep) {
                if fails(&cand) {
                    current = cand;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            return current;
        }
    }
}

fn restrict_morphisms(f: &FunctorData, keep: &[Mor]) -> Option<FunctorData> {
    let src = &f.source;
    let mut back = std::collections::HashMap::new();
    for (i, &m) in keep.iter().enumerate() {
        back.insert(m, i);
    }
    // Closure: every composite of kept arrows must be kept.
    for &g in keep {
        for &h in keep {
            if src.composable(g, h) && !back.contains_key(&src.compose(g, h)) {
                return None;
            }
        }
    }
    let arrows: Vec<(Obj, Obj)> = keep.iter().map(|&m| (src.dom(m), src.cod(m))).collect();
    let identity: Vec<Mor> = (0..src.object_count())
        .map(|x| back.get(&src.id(x)).copied())
        .collect::<Option<Vec<_>>>()?;
    let mut triples = Vec::new();
    for &g in keep {
        for &h in keep {
            if src.composable(g, h) {
                triples.push((back[&g], back[&h], back[&src.compose(g, h)]));
            }
        }
    }
    let sub = FinCat::from_parts(src.object_count(), arrows, identity, &triples).ok()?;
    Some(FunctorData {
        source: Arc::new(sub),
        target: f.target.clone(),
        obj_map: f.obj_map.clone(),
        mor_map: keep.iter().map(|&m| f.mor_map[m]).collect(),
    })
}

fn curated_rotation(i: usize) -> FunctorData {
    match i % 4 {
        0 => builders::point_of_iso_pair(),
        1 => builders::arrow_to_iso_pair(),
        2 => builders::to_terminal(&builders::parallel_pair()),
        _ => FunctorData::identity(&builders::iso_pair()),
    }
}

fn chevalley_agreement(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let (f, kind) = match i % 5 {
                0 | 3 => (gen_fibration_rng(&mut rng, cfg, false).proj, "fibration"),
                1 => (gen_fibration_rng(&mut rng, cfg, false).proj.opposite(), "opfibration"),
                2 => (gen_functor_rng(&mut rng, cfg), "functor"),
                _ => {
                    if i % 10 == 4 {
                        (gen_street_fibration_rng(&mut rng, cfg), "street")
                    } else {
                        (curated_rotation(i / 5), "curated")
                    }
                }
            };
            let fib = fibcheck::is_fibration(&f, &ALL_CRITERIA);
            let opfib = fibcheck::is_opfibration(&f, &ALL_CRITERIA);
            if fib.agreement && opfib.agreement {
                pass(
                    i,
                    format!(
                        "{kind}: fibration={} opfibration={} (criteria agree)",
                        fib.verdict(),
                        opfib.verdict()
                    ),
                )
            } else {
                let pred = |g: &FunctorData| {
                    !fibcheck::is_fibration(g, &ALL_CRITERIA).agreement
                        || !fibcheck::is_opfibration(g, &ALL_CRITERIA).agreement
                };
                fail_with_functor(
                    i,
                    format!("{kind}: criteria disagree: fib={fib:?} opfib={opfib:?}"),
                    &f,
                    Some(&pred),
                )
            }
        })
        .collect()
}

fn example_2_3() -> Vec<InstanceResult> {
    let f = builders::point_of_iso_pair();
    let mut results = Vec::new();
    let mut check = |name: &str, ok: bool| {
        let idx = results.len();
        results.push(if ok {
            pass(idx, name.to_string())
        } else {
            fail_with_functor(idx, name.to_string(), &f, None)
        });
    };
    let opfib = fibcheck::is_opfibration(&f, &ALL_CRITERIA);
    check("is_opfibration false under all criteria", opfib.agreement && !opfib.verdict());
    check(
        "opfibration criteria individually false",
        opfib.direct == Some(false)
            && opfib.chevalley == Some(false)
            && opfib.algebra == Some(false),
    );
    check("street opfibration", fibcheck::is_street_opfibration(&f));
    let adj = adjoint::find_left_adjoint(&f, false);
    check(
        "pseudo-adjunction: identity counit, iso non-identity unit",
        adj.as_ref().is_some_and(|a| {
            a.counit.is_identity_transformation()
                && a.unit.is_componentwise_iso()
                && !a.unit.is_identity_transformation()
        }),
    );
    check("no left adjoint with identity unit", adjoint::find_left_adjoint(&f, true).is_none());
    let ic = comma::iso_comma(&f);
    check("iso-comma has two objects", ic.cat.object_count() == 2);
    let l = comma::monad_on_slice(MonadKind::L, &f);
    check(
        "f/B is the iso pair",
        adjoint::find_isomorphism(&l.comma.cat, &builders::iso_pair()).is_some(),
    );
    // The comparison of the opfibration-side Chevalley criterion is
    // isomorphic to f itself under 1/1 ≅ 1 and f/B ≅ I.
    let ch = comma::chevalley_comparison(&f, Side::Opfibration);
    let pinned_obj = [Some(f.obj_map[0]); 1];
    let iso = adjoint::find_isomorphism_constrained(
        &ch.target_comma.cat,
        &f.target,
        &{
            let mut v = vec![None; ch.target_comma.cat.object_count()];
            v[ch.map.obj_map[0]] = pinned_obj[0];
            v
        },
        &vec![None; ch.target_comma.cat.mor_count()],
        None,
    );
    check("chevalley comparison isomorphic to f", iso.is_some());
    results
}

fn comprehensive_suite(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            // Instances rotate: fibration factored on the fibration side,
            // opfibration on the opfibration side (both with the generic
            // colimit engine as an independent oracle), arbitrary functors
            // on alternating sides.
            let (f, side, matched) = match i % 4 {
                0 => (gen_fibration_rng(&mut rng, cfg, false).proj, Side::Fibration, true),
                1 => (gen_fibration_rng(&mut rng, cfg, false).proj.opposite(), Side::Opfibration, true),
                2 => (gen_functor_rng(&mut rng, cfg), Side::Fibration, false),
                _ => (gen_functor_rng(&mut rng, cfg), Side::Opfibration, false),
            };
            let fac = match factor::comprehensive_factorization(&f, side) {
                Ok(fac) => fac,
                Err(e) => return fail_with_functor(i, format!("factorization failed: {e}"), &f, None),
            };
            if !fac.evidence_holds() {
                return fail_with_functor(i, format!("evidence failed: {:?}", fac.evidence), &f, None);
            }
            // Idempotence: refactoring the discrete leg gives an iso q.
            let again = match factor::comprehensive_factorization(&fac.s, side) {
                Ok(a) => a,
                Err(e) => return fail_with_functor(i, format!("refactor failed: {e}"), &f, None),
            };
            if !again.q.is_bijective() {
                return fail_with_functor(i, "idempotence failed", &f, None);
            }
            // For (op)fibrations factored on their own side, the
            // coidentifier-of-identee path agrees with the discrete
            // reflection path.
            if matched {
                let ide = colim::identee(&f);
                let quot = match colim::coidentifier(&ide, crate::DEFAULT_CAP) {
                    Ok(q) => q,
                    Err(e) => return fail_with_functor(i, format!("coidentifier: {e}"), &f, None),
                };
                let sbar = match quot.factor_through(&f) {
                    Some(s) => s,
                    None => return fail_with_functor(i, "comparison through coidentifier missing", &f, None),
                };
                let alt = FactorizationResult {
                    q: quot.proj.clone(),
                    mid: quot.cat.clone(),
                    s: sbar,
                    kind: FactorKind::Comprehensive,
                    evidence: vec![],
                    over_base: None,
                };
                if factor::compare_factorizations(&fac, &alt).is_none() {
                    return fail_with_functor(i, "reflection path and coidentifier path disagree", &f, None);
                }
            }
            pass(i, format!("comprehensive {side:?} mid={} objects", fac.mid.object_count()))
        })
        .collect()
}

fn groupoid_factorization_suite(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let side = if i % 3 == 1 { Side::Opfibration } else { Side::Fibration };
            let fib = gen_fibration_rng(&mut rng, cfg, true);
            let f = match side {
                Side::Fibration => fib.proj.clone(),
                Side::Opfibration => fib.proj.opposite(),
            };
            let fac = match factor::groupoid_fibre_factorization(&f, side, crate::DEFAULT_CAP) {
                Ok(fac) => fac,
                Err(e) => return fail_with_functor(i, format!("factorization failed: {e}"), &f, None),
            };
            if !fac.evidence_holds() {
                return fail_with_functor(i, format!("evidence failed: {:?}", fac.evidence), &f, None);
            }
            let again = match factor::groupoid_fibre_factorization(&fac.s, side, crate::DEFAULT_CAP) {
                Ok(a) => a,
                Err(e) => return fail_with_functor(i, format!("refactor failed: {e}"), &f, None),
            };
            if !again.q.is_bijective() {
                return fail_with_functor(i, "a single coinverter did not suffice", &f, None);
            }
            // The q leg is the coinverter of the identee: generic engine path.
            let ide = colim::identee(&f);
            match colim::coinverter(&ide, crate::DEFAULT_CAP) {
                Ok(quot) => {
                    let sbar = quot.factor_through(&f);
                    let alt = sbar.map(|s| FactorizationResult {
                        q: quot.proj.clone(),
                        mid: quot.cat.clone(),
                        s,
                        kind: FactorKind::Groupoid,
                        evidence: vec![],
                        over_base: None,
                    });
                    match alt {
                        Some(alt) => {
                            if factor::compare_factorizations(&fac, &alt).is_none() {
                                return fail_with_functor(
                                    i,
                                    "fibrewise and generic coinverter paths disagree",
                                    &f,
                                    None,
                                );
                            }
                        }
                        None => {
                            return fail_with_functor(i, "comparison through coinverter missing", &f, None)
                        }
                    }
                }
                Err(e) => return fail_with_functor(i, format!("generic coinverter: {e}"), &f, None),
            }
            pass(i, format!("groupoid factorization {side:?} mid={} objects", fac.mid.object_count()))
        })
        .collect()
}

fn compare_quotients(a: &Quotient, b: &Quotient) -> bool {
    if a.cat.object_count() != b.cat.object_count() || a.cat.mor_count() != b.cat.mor_count() {
        return false;
    }
    let mut pinned_obj = vec![None; a.cat.object_count()];
    for (x, &qa) in a.proj.obj_map.iter().enumerate() {
        match pinned_obj[qa] {
            None => pinned_obj[qa] = Some(b.proj.obj_map[x]),
            Some(prev) if prev == b.proj.obj_map[x] => {}
            Some(_) => return false,
        }
    }
    let mut pinned_mor = vec![None; a.cat.mor_count()];
    for (m, &qa) in a.proj.mor_map.iter().enumerate() {
        match pinned_mor[qa] {
            None => pinned_mor[qa] = Some(b.proj.mor_map[m]),
            Some(prev) if prev == b.proj.mor_map[m] => {}
            Some(_) => return false,
        }
    }
    match adjoint::find_isomorphism_constrained(&a.cat, &b.cat, &pinned_obj, &pinned_mor, None) {
        Some(iso) => FunctorData::compose(&iso, &a.proj).same_as(&b.proj),
        None => false,
    }
}

fn isofib_cons_gpd(cfg: &GenConfig) -> Vec<InstanceResult> {
    let mut results: Vec<InstanceResult> = (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let f = gen_isofibration_rng(&mut rng, cfg);
            if !fibcheck::is_isofibration(&f) {
                return fail_with_functor(i, "generator produced a non-isofibration", &f, None);
            }
            let cons = fibcheck::is_conservative(&f);
            let gpd = fibcheck::has_groupoidal_fibres(&f);
            if cons != gpd {
                let pred = |g: &FunctorData| {
                    fibcheck::is_isofibration(g)
                        && fibcheck::is_conservative(g) != fibcheck::has_groupoidal_fibres(g)
                };
                return fail_with_functor(i, "conservative ⇎ groupoidal fibres", &f, Some(&pred));
            }
            let qi = colim::coinverter(&colim::identee(&f), crate::DEFAULT_CAP);
            let qw = colim::coinverter(&colim::invertee(&f), crate::DEFAULT_CAP);
            match (qi, qw) {
                (Ok(qi), Ok(qw)) => {
                    if compare_quotients(&qi, &qw) {
                        pass(i, format!("isofibration: conservative={cons}, coinverters agree"))
                    } else {
                        fail_with_functor(i, "coinverter(identee) ≠ coinverter(invertee)", &f, None)
                    }
                }
                (a, b) => fail_with_functor(
                    i,
                    format!("coinverter cap: identee={:?} invertee={:?}", a.is_ok(), b.is_ok()),
                    &f,
                    None,
                ),
            }
        })
        .collect();
    // Curated violation: 2 → I is not an isofibration and its two coinverters
    // genuinely differ, so the isofibration hypothesis is not droppable.
    let g = builders::arrow_to_iso_pair();
    let idx = results.len();
    let qi = colim::coinverter(&colim::identee(&g), crate::DEFAULT_CAP);
    let qw = colim::coinverter(&colim::invertee(&g), crate::DEFAULT_CAP);
    let ok = !fibcheck::is_isofibration(&g)
        && match (&qi, &qw) {
            (Ok(a), Ok(b)) => !compare_quotients(a, b),
            _ => false,
        };
    results.push(if ok {
        pass(idx, "curated 2 → I violates clause 2 (not an isofibration)")
    } else {
        fail_with_functor(idx, "curated non-isofibration failed to violate clause 2", &g, None)
    });
    results
}

fn pullback_stability(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let fib = gen_fibration_rng(&mut rng, cfg, false);
            let side = if i % 3 == 2 { Side::Opfibration } else { Side::Fibration };
            let f = match side {
                Side::Fibration => fib.proj.clone(),
                Side::Opfibration => fib.proj.opposite(),
            };
            let g = gen_functor_into(&mut rng, &f.target, cfg);
            let (_, _, proj_c) = match crate::cat::pullback_category(&f, &g) {
                Ok(t) => t,
                Err(e) => return fail_with_functor(i, format!("pullback failed: {e}"), &f, None),
            };
            let stable = match side {
                Side::Fibration => fibcheck::is_fibration(&proj_c, &[Criterion::Direct]).verdict(),
                Side::Opfibration => fibcheck::is_opfibration(&proj_c, &[Criterion::Direct]).verdict(),
            };
            if stable {
                pass(i, format!("pullback of a {side:?} along a functor is again one"))
            } else {
                fail_with_functor(i, "pullback not stable", &proj_c, None)
            }
        })
        .collect()
}

fn comma_projections(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let b = gen_category_rng(&mut rng, cfg.max_objects.min(4), cfg.max_morphisms.min(12));
            let f = gen_functor_into(&mut rng, &b, cfg);
            let g = gen_functor_into(&mut rng, &b, cfg);
            let cm = match comma::comma(&f, &g) {
                Ok(c) => c,
                Err(e) => return fail_with_functor(i, format!("comma failed: {e}"), &f, None),
            };
            if cm.cat.mor_count() > 160 {
                return pass(i, "skipped oversized comma");
            }
            let left_fib = fibcheck::is_fibration(&cm.left_proj, &[Criterion::Direct]).verdict();
            let right_opfib =
                fibcheck::is_opfibration(&cm.right_proj, &[Criterion::Direct]).verdict();
            if left_fib && right_opfib {
                pass(i, "comma projections classified (left fibration, right opfibration)")
            } else {
                fail_with_functor(
                    i,
                    format!("projection classes wrong: left_fib={left_fib} right_opfib={right_opfib}"),
                    &f,
                    None,
                )
            }
        })
        .collect()
}

fn pseudo_to_fib(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let f = if i % 2 == 0 {
                gen_street_fibration_rng(&mut rng, cfg)
            } else {
                gen_fibration_rng(&mut rng, cfg, false).proj
            };
            if !fibcheck::is_street_fibration(&f) {
                return fail_with_functor(i, "generator produced a non-street fibration", &f, None);
            }
            // Street ∧ isofibration ⇒ fibration.
            if fibcheck::is_isofibration(&f)
                && !fibcheck::is_fibration(&f, &[Criterion::Direct]).verdict()
            {
                return fail_with_functor(i, "street isofibration is not a fibration", &f, None);
            }
            let inst = comma::monad_on_slice(MonadKind::I, &f);
            if fibcheck::is_fibration(&inst.carrier, &[Criterion::Direct]).verdict() {
                pass(i, "If is a fibration for a street fibration f")
            } else {
                fail_with_functor(i, "If is not a fibration", &f, None)
            }
        })
        .collect()
}

fn monad_laws(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let small = GenConfig { max_objects: 3, max_morphisms: 7, ..cfg.clone() };
            let f = match i % 4 {
                0 => builders::point_of_iso_pair(),
                1 => builders::arrow_to_iso_pair(),
                _ => gen_functor_rng(&mut rng, &small),
            };
            if f.source.mor_count() > 8 || f.target.mor_count() > 8 {
                return pass(i, "skipped oversized monad instance");
            }
            for kind in [MonadKind::R, MonadKind::L, MonadKind::I] {
                let inst = comma::monad_on_slice(kind, &f);
                let inst2 = comma::monad_on_slice(kind, &inst.carrier);
                // Unit laws: m ∘ uL = 1 = m ∘ Lu.
                let unit_right = FunctorData::compose(&inst.mult, &inst2.unit).is_identity_functor();
                let lu = comma::monad_map(kind, &inst.unit, &inst.comma, &inst.double);
                let unit_left = FunctorData::compose(&inst.mult, &lu).is_identity_functor();
                // Associativity: m ∘ mL = m ∘ Lm.
                let lhs = FunctorData::compose(&inst.mult, &inst2.mult);
                let lm = comma::monad_map(kind, &inst.mult, &inst2.double, &inst.double);
                let rhs = FunctorData::compose(&inst.mult, &lm);
                let assoc = lhs.same_as(&rhs);
                // Carrier class per the free-algebra observation.
                let class_ok = match kind {
                    MonadKind::R => fibcheck::is_fibration(&inst.carrier, &[Criterion::Direct]).verdict(),
                    MonadKind::L => fibcheck::is_opfibration(&inst.carrier, &[Criterion::Direct]).verdict(),
                    MonadKind::I => fibcheck::is_isofibration(&inst.carrier),
                };
                if !(unit_right && unit_left && assoc && class_ok) {
                    return fail_with_functor(
                        i,
                        format!(
                            "{kind:?}: unit_right={unit_right} unit_left={unit_left} assoc={assoc} class={class_ok}"
                        ),
                        &f,
                        None,
                    );
                }
            }
            // Iso-comma retraction w_f ∘ i_f = 1.
            let ic = comma::iso_comma(&f);
            let i_f = comma::iso_comma_unit(&f, &ic);
            if !FunctorData::compose(&ic.left_proj, &i_f).is_identity_functor() {
                return fail_with_functor(i, "w_f ∘ i_f ≠ 1", &f, None);
            }
            // The R-carrier agrees with pullback-then-postcompose route.
            if !remark_r_consistency(&f) {
                return fail_with_functor(i, "R ≠ (d₀)!d₁* on this instance", &f, None);
            }
            pass(i, "monad laws, carrier classes, retraction, R-composite agree")
        })
        .collect()
}

/// Rf computed by the comma equals the pullback of d₁ along f followed by
/// d₀, object-by-object.
fn remark_r_consistency(f: &FunctorData) -> bool {
    let b = &f.target;
    let idb = FunctorData::identity(b);
    let bb = comma::comma(&idb, &idb).expect("B/B");
    let inst = comma::monad_on_slice(MonadKind::R, f);
    let (pb, proj_a, proj_bb) = match crate::cat::pullback_category(f, &bb.right_proj) {
        Ok(t) => t,
        Err(_) => return false,
    };
    // Canonical comparison pb → B/f: (a, w) ↦ (dom w, a, w).
    let obj_map: Vec<Obj> = (0..pb.object_count())
        .map(|i| {
            let a_obj = proj_a.obj_map[i];
            let w = proj_bb.obj_map[i];
            let (bsrc, _, beta) = bb.decode[w];
            inst.comma.encode_obj(bsrc, a_obj, beta).unwrap()
        })
        .collect();
    let mor_ok = (0..pb.mor_count()).all(|m| {
        let alpha = proj_a.mor_map[m];
        let w_mor = proj_bb.mor_map[m];
        let (u, _) = bb.mor_decode[w_mor];
        inst.comma
            .encode_mor(obj_map[pb.dom(m)], obj_map[pb.cod(m)], u, alpha)
            .is_some()
    });
    mor_ok
        && pb.object_count() == inst.comma.cat.object_count()
        && pb.mor_count() == inst.comma.cat.mor_count()
        && {
            // The comparison commutes with the projections to B.
            (0..pb.object_count()).all(|i| {
                let w = proj_bb.obj_map[i];
                let (bsrc, _, _) = bb.decode[w];
                inst.carrier.obj_map[obj_map[i]] == bsrc
            })
        }
}

fn r_preserves_identees(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let small = GenConfig { max_objects: 4, max_morphisms: 10, ..cfg.clone() };
            let b = gen_category_rng(&mut rng, 3, 8);
            let g = gen_functor_into(&mut rng, &b, &small);
            let c = g.source.clone();
            let p = gen_functor_into(&mut rng, &c, &small);
            let f = FunctorData::compose(&g, &p);
            for kind in [MonadKind::R, MonadKind::L] {
                let d = colim::identee(&p);
                let h = FunctorData::compose(&f, &d.d0);
                let (ch, cf, rk) = colim::monad_cell(kind, &d, &h, &f);
                let cg = comma::monad_comma(kind, &g);
                let rp = comma::monad_map(kind, &p, &cf, &cg);
                let direct = colim::identee(&rp);
                // Canonical comparison ch → direct apex.
                let mut arrow_to_apex = std::collections::HashMap::new();
                for (idx, &arrow) in direct.cell.component.iter().enumerate() {
                    arrow_to_apex.insert(arrow, idx);
                }
                let obj_map: Option<Vec<Obj>> = (0..ch.cat.object_count())
                    .map(|x| arrow_to_apex.get(&rk.cell.component[x]).copied())
                    .collect();
                let obj_map = match obj_map {
                    Some(o) => o,
                    None => return fail_with_functor(i, format!("{kind:?}: comparison not defined"), &p, None),
                };
                let enc = colim::two_cell_mor_encode(&direct);
                let mor_map: Option<Vec<Mor>> = (0..ch.cat.mor_count())
                    .map(|m| {
                        enc.get(&(
                            obj_map[ch.cat.dom(m)],
                            obj_map[ch.cat.cod(m)],
                            rk.d0.mor_map[m],
                            rk.d1.mor_map[m],
                        ))
                        .copied()
                    })
                    .collect();
                let mor_map = match mor_map {
                    Some(m) => m,
                    None => return fail_with_functor(i, format!("{kind:?}: comparison morphism missing"), &p, None),
                };
                let cmp = FunctorData {
                    source: ch.cat.clone(),
                    target: direct.apex.clone(),
                    obj_map,
                    mor_map,
                };
                if !(cmp.validate().is_valid() && cmp.is_bijective()) {
                    return fail_with_functor(
                        i,
                        format!("{kind:?}: canonical comparison is not an isomorphism"),
                        &p,
                        None,
                    );
                }
            }
            pass(i, "R and L preserve identees (canonical comparison is iso)")
        })
        .collect()
}

fn dagger_suite(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let small = GenConfig {
                max_objects: cfg.max_objects.min(5),
                max_morphisms: cfg.max_morphisms.min(14),
                fibre_size_bound: 2,
                base_size_bound: 2,
                ..cfg.clone()
            };
            let f = gen_fibration_rng(&mut rng, &small, true).proj;
            let d = colim::identee(&f);
            let h = FunctorData::compose(&f, &d.d0);
            for kind in [MonadKind::R, MonadKind::L] {
                for coid in [true, false] {
                    let quot = if coid {
                        colim::coidentifier(&d, crate::DEFAULT_CAP)
                    } else {
                        colim::coinverter(&d, crate::DEFAULT_CAP)
                    };
                    let quot = match quot {
                        Ok(q) => q,
                        Err(e) => return fail_with_functor(i, format!("base quotient: {e}"), &f, None),
                    };
                    let fbar = match quot.factor_through(&f) {
                        Some(fb) => fb,
                        None => return fail_with_functor(i, "no structure map on quotient", &f, None),
                    };
                    let (_, cf, rk) = colim::monad_cell(kind, &d, &h, &f);
                    let cfbar = comma::monad_comma(kind, &fbar);
                    let rq = comma::monad_map(kind, &quot.proj, &cf, &cfbar);
                    let rquot = if coid {
                        colim::coidentifier(&rk, crate::DEFAULT_CAP)
                    } else {
                        colim::coinverter(&rk, crate::DEFAULT_CAP)
                    };
                    let rquot = match rquot {
                        Ok(q) => q,
                        Err(e) => return fail_with_functor(i, format!("image quotient: {e}"), &f, None),
                    };
                    let tbar = match rquot.factor_through(&rq) {
                        Some(t) => t,
                        None => {
                            return fail_with_functor(
                                i,
                                format!("{kind:?} does not send the quotient to a cocone (coid={coid})"),
                                &f,
                                None,
                            )
                        }
                    };
                    if !(tbar.validate().is_valid() && tbar.is_bijective()) {
                        return fail_with_functor(
                            i,
                            format!("{kind:?} fails to preserve the colimit (coid={coid})"),
                            &f,
                            None,
                        );
                    }
                }
            }
            pass(i, "R and L preserve coidentifiers and coinverters of the identee")
        })
        .collect()
}

fn fibb_factorization(cfg: &GenConfig) -> Vec<InstanceResult> {
    (0..cfg.instance_count)
        .map(|i| {
            let mut rng = cfg.rng(i);
            let m = gen_fibb_rng(&mut rng, cfg);
            if !m.validate().is_valid() {
                return fail_with_functor(i, "generated FibB morphism invalid", &m.p, None);
            }
            if !factor::is_fibrewise_opfibration(&m, false) {
                return fail_with_functor(i, "generator not fibrewise opfibration", &m.p, None);
            }
            for mode in [FibBMode::Coidentifier, FibBMode::Coinverter] {
                let fac = match factor::factor_in_fibb(&m, mode, crate::DEFAULT_CAP) {
                    Ok(f) => f,
                    Err(e) => {
                        return fail_with_functor(i, format!("{mode:?} failed: {e}"), &m.p, None)
                    }
                };
                if !fac.evidence_holds() {
                    return fail_with_functor(
                        i,
                        format!("{mode:?} evidence failed: {:?}", fac.evidence),
                        &m.p,
                        None,
                    );
                }
                // Cat-level agreement.
                let alt = match mode {
                    FibBMode::Coidentifier => {
                        match factor::comprehensive_factorization(&m.p, Side::Opfibration) {
                            Ok(a) => a,
                            Err(e) => {
                                return fail_with_functor(i, format!("cat-level comprehensive: {e}"), &m.p, None)
                            }
                        }
                    }
                    FibBMode::Coinverter => {
                        let ide = colim::identee(&m.p);
                        let quot = match colim::coinverter(&ide, crate::DEFAULT_CAP) {
                            Ok(q) => q,
                            Err(e) => {
                                return fail_with_functor(i, format!("cat-level coinverter: {e}"), &m.p, None)
                            }
                        };
                        let sbar = match quot.factor_through(&m.p) {
                            Some(s) => s,
                            None => return fail_with_functor(i, "no cat-level comparison", &m.p, None),
                        };
                        FactorizationResult {
                            q: quot.proj.clone(),
                            mid: quot.cat.clone(),
                            s: sbar,
                            kind: FactorKind::Groupoid,
                            evidence: vec![],
                            over_base: None,
                        }
                    }
                };
                if factor::compare_factorizations(&fac, &alt).is_none() {
                    return fail_with_functor(
                        i,
                        format!("{mode:?}: fibrewise and Cat-level factorizations disagree"),
                        &m.p,
                        None,
                    );
                }
                // The comparison leg also carries the Cat-level class
                // (discrete functor / conservative functor).
                let cat_level_ok = match mode {
                    FibBMode::Coidentifier => fibcheck::has_discrete_fibres(&fac.s),
                    FibBMode::Coinverter => fibcheck::is_conservative(&fac.s),
                };
                if !cat_level_ok {
                    return fail_with_functor(
                        i,
                        format!("{mode:?}: comparison leg lacks the Cat-level class"),
                        &m.p,
                        None,
                    );
                }
            }
            pass(i, "fibrewise factorizations match the Cat-level single-step colimits")
        })
        .collect()
}

fn engine_honesty() -> Vec<InstanceResult> {
    let mut results = Vec::new();
    // Infinite quotient: killing one arrow of the parallel pair merges the
    // endpoints and leaves the other as a free endomorphism, so the
    // coidentifier must refuse with CapExceeded.
    let pp = builders::parallel_pair();
    let one = builders::terminal();
    let d0 = FunctorData::constant(&one, &pp, 0);
    let d1 = FunctorData::constant(&one, &pp, 1);
    let cell = crate::cat::NatTransData { from: d0.clone(), to: d1.clone(), component: vec![2] };
    let diag = colim::TwoCellDiagram { apex: one, d0, d1, cell };
    let capped = matches!(
        colim::coidentifier(&diag, 2_000),
        Err(CatError::CapExceeded { .. })
    );
    results.push(if capped {
        pass(0, "coidentifier of an endpoint-identifying cell on the parallel pair caps out")
    } else {
        InstanceResult {
            index: 0,
            passed: false,
            detail: "infinite quotient did not raise CapExceeded".into(),
            witness: None,
            minimized: None,
        }
    });
    // Exact groupoid reflection of 2.
    let two = builders::arrow();
    let ok = match colim::groupoid_reflection(&two, crate::DEFAULT_CAP) {
        GroupoidReflection::Realized { groupoid, unit } => {
            let pinned = vec![Some(0), Some(1)];
            let iso = adjoint::find_isomorphism_constrained(
                &groupoid,
                &builders::iso_pair(),
                &pinned,
                &vec![None; groupoid.mor_count()],
                None,
            );
            unit.validate().is_valid() && iso.is_some()
        }
        GroupoidReflection::Unknown { .. } => false,
    };
    results.push(if ok {
        pass(1, "groupoid_reflection(2) = I exactly")
    } else {
        InstanceResult {
            index: 1,
            passed: false,
            detail: "groupoid reflection of 2 is not I".into(),
            witness: None,
            minimized: None,
        }
    });
    results
}

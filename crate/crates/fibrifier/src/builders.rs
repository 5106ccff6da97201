//! Small named categories and graph-based constructions. These anchor the
//! regression tests and feed the corpus generators.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{FinCat, FunctorData, Mor, Obj};

/// The terminal category **1**.
pub fn terminal() -> Arc<FinCat> {
    Arc::new(FinCat::from_parts(1, vec![(0, 0)], vec![0], &[(0, 0, 0)]).unwrap())
}

/// The discrete category on `n` objects.
pub fn discrete(n: usize) -> Arc<FinCat> {
    let arrows = (0..n).map(|x| (x, x)).collect();
    let identity = (0..n).collect();
    let triples: Vec<_> = (0..n).map(|x| (x, x, x)).collect();
    Arc::new(FinCat::from_parts(n, arrows, identity, &triples).unwrap())
}

/// The arrow category **2**: objects 0, 1 and a single arrow 0 → 1
/// (morphism 2).
pub fn arrow() -> Arc<FinCat> {
    Arc::new(
        FinCat::from_parts(
            2,
            vec![(0, 0), (1, 1), (0, 1)],
            vec![0, 1],
            &[(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2)],
        )
        .unwrap(),
    )
}

/// The groupoid **I** with two objects and exactly one isomorphism between
/// them: morphism 2 is 0 → 1, morphism 3 its inverse.
pub fn iso_pair() -> Arc<FinCat> {
    Arc::new(
        FinCat::from_parts(
            2,
            vec![(0, 0), (1, 1), (0, 1), (1, 0)],
            vec![0, 1],
            &[
                (0, 0, 0),
                (1, 1, 1),
                (2, 0, 2),
                (1, 2, 2),
                (3, 1, 3),
                (0, 3, 3),
                (3, 2, 0),
                (2, 3, 1),
            ],
        )
        .unwrap(),
    )
}

/// Two objects with a parallel pair of arrows 0 ⇉ 1 (morphisms 2 and 3).
pub fn parallel_pair() -> Arc<FinCat> {
    Arc::new(
        FinCat::from_parts(
            2,
            vec![(0, 0), (1, 1), (0, 1), (0, 1)],
            vec![0, 1],
            &[(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2), (3, 0, 3), (1, 3, 3)],
        )
        .unwrap(),
    )
}

/// The cyclic group of order `k` as a one-object category.
pub fn cyclic(k: usize) -> Arc<FinCat> {
    assert!(k >= 1);
    let arrows = vec![(0, 0); k];
    let mut triples = Vec::new();
    for g in 0..k {
        for f in 0..k {
            triples.push((g, f, (g + f) % k));
        }
    }
    Arc::new(FinCat::from_parts(1, arrows, vec![0], &triples).unwrap())
}

/// The chaotic (indiscrete) groupoid on `n` objects: exactly one morphism
/// between any ordered pair.
pub fn chaotic(n: usize) -> Arc<FinCat> {
    let mut arrows = Vec::new();
    let mut idx = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            idx.insert((x, y), arrows.len());
            arrows.push((x, y));
        }
    }
    let identity = (0..n).map(|x| idx[&(x, x)]).collect();
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                triples.push((idx[&(y, z)], idx[&(x, y)], idx[&(x, z)]));
            }
        }
    }
    Arc::new(FinCat::from_parts(n, arrows, identity, &triples).unwrap())
}

/// A poset seen as a category: one morphism x → y whenever `le(x, y)`.
/// `le` must be reflexive, transitive and antisymmetric.
pub fn poset(n: usize, le: impl Fn(usize, usize) -> bool) -> Arc<FinCat> {
    let mut arrows = Vec::new();
    let mut idx = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            if le(x, y) {
                idx.insert((x, y), arrows.len());
                arrows.push((x, y));
            }
        }
    }
    let identity = (0..n).map(|x| idx[&(x, x)]).collect();
    let mut triples = Vec::new();
    for (&(x, y), &f) in &idx {
        for (&(y2, z), &g) in &idx {
            if y2 == y {
                triples.push((g, f, idx[&(x, z)]));
            }
        }
    }
    Arc::new(FinCat::from_parts(n, arrows, identity, &triples).unwrap())
}

/// The commutative square 0 < 1,2 < 3 as a poset category.
pub fn comm_square_poset() -> Arc<FinCat> {
    poset(4, |x, y| x == y || (x == 0) || (y == 3))
}

/// The linear order 0 < 1 < ... < n-1.
pub fn chain(n: usize) -> Arc<FinCat> {
    poset(n, |x, y| x <= y)
}

/// Free category on a directed graph, together with the edge decomposition of
/// every morphism. Panics if the graph has a directed cycle (the free
/// category would be infinite).
pub struct FreeCat {
    pub cat: Arc<FinCat>,
    /// Path of generating edges for each morphism, in application order.
    pub paths: Vec<Vec<usize>>,
    /// Morphism index of each generating edge.
    pub edge_mor: Vec<Mor>,
}

pub fn free_on_dag(vertices: usize, edges: &[(usize, usize)]) -> FreeCat {
    // Breadth-first path enumeration; acyclicity keeps it finite.
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut arrows: Vec<(Obj, Obj)> = Vec::new();
    // Paths are keyed by (start vertex, edge list); the empty path at each
    // vertex is its identity.
    let mut idx: HashMap<(usize, Vec<usize>), Mor> = HashMap::new();
    let mut identity = Vec::new();
    for v in 0..vertices {
        identity.push(paths.len());
        paths.push(vec![]);
        arrows.push((v, v));
    }
    let mut frontier: Vec<Mor> = (0..vertices).collect();
    let mut guard = 0usize;
    while !frontier.is_empty() {
        guard += 1;
        assert!(guard <= vertices + edges.len() + 2, "free_on_dag: graph must be acyclic");
        let mut next = Vec::new();
        for &p in &frontier {
            let (_, end) = arrows[p];
            for (e, &(u, v)) in edges.iter().enumerate() {
                if u == end {
                    let mut path = paths[p].clone();
                    path.push(e);
                    let m = paths.len();
                    paths.push(path);
                    arrows.push((arrows[p].0, v));
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    for (m, p) in paths.iter().enumerate() {
        idx.insert((arrows[m].0, p.clone()), m);
    }
    let mut triples = Vec::new();
    for g in 0..paths.len() {
        for f in 0..paths.len() {
            if arrows[f].1 == arrows[g].0 {
                let mut path = paths[f].clone();
                path.extend(&paths[g]);
                triples.push((g, f, idx[&(arrows[f].0, path)]));
            }
        }
    }
    let edge_mor = edges
        .iter()
        .enumerate()
        .map(|(e, &(u, _))| idx[&(u, vec![e])])
        .collect();
    let cat = Arc::new(
        FinCat::from_parts(vertices, arrows, identity, &triples)
            .expect("free category tables are well-indexed"),
    );
    FreeCat { cat, paths, edge_mor }
}

/// Product of two categories, with decode/encode maps for the pairing.
pub struct ProductCat {
    pub cat: Arc<FinCat>,
    pub obj_decode: Vec<(Obj, Obj)>,
    pub mor_decode: Vec<(Mor, Mor)>,
    pub obj_encode: HashMap<(Obj, Obj), Obj>,
    pub mor_encode: HashMap<(Mor, Mor), Mor>,
}

pub fn product(a: &FinCat, b: &FinCat) -> ProductCat {
    let mut obj_decode = Vec::new();
    let mut obj_encode = HashMap::new();
    for x in 0..a.object_count() {
        for y in 0..b.object_count() {
            obj_encode.insert((x, y), obj_decode.len());
            obj_decode.push((x, y));
        }
    }
    let mut mor_decode = Vec::new();
    let mut mor_encode = HashMap::new();
    let mut arrows = Vec::new();
    for m in 0..a.mor_count() {
        for n in 0..b.mor_count() {
            mor_encode.insert((m, n), mor_decode.len());
            mor_decode.push((m, n));
            arrows.push((
                obj_encode[&(a.dom(m), b.dom(n))],
                obj_encode[&(a.cod(m), b.cod(n))],
            ));
        }
    }
    let identity = obj_decode
        .iter()
        .map(|&(x, y)| mor_encode[&(a.id(x), b.id(y))])
        .collect();
    let mut triples = Vec::new();
    for (j, &(m2, n2)) in mor_decode.iter().enumerate() {
        for (i, &(m1, n1)) in mor_decode.iter().enumerate() {
            if a.composable(m2, m1) && b.composable(n2, n1) {
                triples.push((j, i, mor_encode[&(a.compose(m2, m1), b.compose(n2, n1))]));
            }
        }
    }
    let cat = Arc::new(FinCat::from_parts(obj_decode.len(), arrows, identity, &triples).unwrap());
    ProductCat { cat, obj_decode, mor_decode, obj_encode, mor_encode }
}

/// Duplicates object `b0`: the new category has one extra object whose
/// hom-sets mirror those at `b0`, and the collapse functor back is an
/// equivalence (not an isomorphism). The inclusion of the original sits
/// inside it.
pub fn duplicate_object(b: &FinCat, b0: Obj) -> (Arc<FinCat>, FunctorData) {
    let n = b.object_count();
    let sigma = |x: Obj| if x == n { b0 } else { x };
    let mut arrows = Vec::new();
    let mut idx: HashMap<(Obj, Obj, Mor), Mor> = HashMap::new();
    for x in 0..=n {
        for y in 0..=n {
            for &m in b.hom(sigma(x), sigma(y)) {
                idx.insert((x, y, m), arrows.len());
                arrows.push((x, y));
            }
        }
    }
    let decode: Vec<(Obj, Obj, Mor)> = {
        let mut v = vec![(0, 0, 0); arrows.len()];
        for (&k, &i) in &idx {
            v[i] = k;
        }
        v
    };
    let identity = (0..=n).map(|x| idx[&(x, x, b.id(sigma(x)))]).collect();
    let mut triples = Vec::new();
    for (j, &(x2, y2, m2)) in decode.iter().enumerate() {
        for (i, &(x1, y1, m1)) in decode.iter().enumerate() {
            if y1 == x2 {
                triples.push((j, i, idx[&(x1, y2, b.compose(m2, m1))]));
            }
        }
    }
    let big = Arc::new(FinCat::from_parts(n + 1, arrows, identity, &triples).unwrap());
    let incl = FunctorData {
        source: Arc::new(b.clone()),
        target: big.clone(),
        obj_map: (0..n).collect(),
        mor_map: (0..b.mor_count())
            .map(|m| idx[&(b.dom(m), b.cod(m), m)])
            .collect(),
    };
    (big, incl)
}

/// Disjoint union of two categories.
pub fn coproduct(a: &FinCat, b: &FinCat) -> Arc<FinCat> {
    let objects = a.object_count() + b.object_count();
    let mut arrows = a.arrows();
    arrows.extend(b.arrows().iter().map(|&(d, c)| (d + a.object_count(), c + a.object_count())));
    let mut identity: Vec<Mor> = (0..a.object_count()).map(|x| a.id(x)).collect();
    identity.extend((0..b.object_count()).map(|x| b.id(x) + a.mor_count()));
    let mut triples = a.compose_triples();
    for (g, f, gf) in b.compose_triples() {
        triples.push((g + a.mor_count(), f + a.mor_count(), gf + a.mor_count()));
    }
    Arc::new(FinCat::from_parts(objects, arrows, identity, &triples).unwrap())
}

/// The unique functor into the terminal category.
pub fn to_terminal(c: &Arc<FinCat>) -> FunctorData {
    FunctorData::constant(c, &terminal(), 0)
}

/// Example functor 1 → I picking the object 0 of the iso pair.
pub fn point_of_iso_pair() -> FunctorData {
    let one = terminal();
    let i = iso_pair();
    FunctorData { source: one, target: i.clone(), obj_map: vec![0], mor_map: vec![i.id(0)] }
}

/// The non-constant functor **2** → **I** (sends the arrow to the iso).
pub fn arrow_to_iso_pair() -> FunctorData {
    let two = arrow();
    let i = iso_pair();
    FunctorData { source: two, target: i, obj_map: vec![0, 1], mor_map: vec![0, 1, 2] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_categories_are_valid() {
        for c in [
            terminal(),
            discrete(3),
            arrow(),
            iso_pair(),
            parallel_pair(),
            cyclic(3),
            chaotic(3),
            comm_square_poset(),
            chain(4),
        ] {
            assert!(c.validate().is_valid(), "{c:?}");
        }
    }

    #[test]
    fn named_functors_are_valid() {
        for f in [point_of_iso_pair(), arrow_to_iso_pair()] {
            assert!(f.validate().is_valid());
        }
    }

    #[test]
    fn free_category_on_a_fork() {
        // 0 -> 1, 0 -> 2: five morphisms (three identities, two edges).
        let free = free_on_dag(3, &[(0, 1), (0, 2)]);
        assert!(free.cat.validate().is_valid());
        assert_eq!(free.cat.mor_count(), 5);
    }

    #[test]
    fn free_square_has_two_parallel_composites() {
        let free = free_on_dag(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(free.cat.validate().is_valid());
        // 4 identities + 4 edges + 2 distinct paths 0 -> 3.
        assert_eq!(free.cat.mor_count(), 10);
    }

    #[test]
    fn iso_pair_inverses() {
        let i = iso_pair();
        assert_eq!(i.inverse(2), Some(3));
        assert_eq!(i.inverse(3), Some(2));
    }

    #[test]
    fn duplicate_object_is_valid_and_equivalent() {
        let (big, incl) = duplicate_object(&iso_pair(), 0);
        assert!(big.validate().is_valid());
        assert!(incl.validate().is_valid());
        assert_eq!(big.object_count(), 3);
        // The clone is isomorphic to the original object.
        let clone = 2;
        assert!(big.hom(clone, 0).iter().any(|&m| big.is_iso(m)));
    }

    #[test]
    fn product_is_valid() {
        let p = product(&arrow(), &iso_pair());
        assert!(p.cat.validate().is_valid());
        assert_eq!(p.cat.object_count(), 4);
        assert_eq!(p.cat.mor_count(), 12);
    }

    #[test]
    fn coproduct_is_valid() {
        let c = coproduct(&arrow(), &iso_pair());
        assert!(c.validate().is_valid());
        assert_eq!(c.object_count(), 4);
        assert_eq!(c.mor_count(), 7);
    }
}

//! Generators: polygons, simplex and prism boundaries, stellar
//! subdivisions, polygon coarsenings and subdivision towers.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::aggmap::{AggError, Aggregation};
use crate::cellx::{dual, orient, CellPoset, SphereComplex};

/// The `m`-gon circle poset: vertices `v0…`, edges `e_i = (v_i, v_{i+1})`.
pub fn polygon_poset(m: usize) -> CellPoset {
    assert!(m >= 2, "a polygon needs at least two vertices");
    let cells = (0..m).map(|i| (format!("v{i}"), 0)).chain((0..m).map(|i| (format!("e{i}"), 1)));
    let covers =
        (0..m).flat_map(|i| [(format!("v{i}"), format!("e{i}")), (format!("v{}", (i + 1) % m), format!("e{i}"))]);
    CellPoset::new(cells, covers).expect("polygon poset is well formed")
}

pub fn polygon(m: usize) -> SphereComplex {
    orient(&polygon_poset(m)).expect("polygons orient")
}

fn subset_id(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|v| format!("{v}")).collect();
    parts.join(".")
}

/// Nonempty subsets of `{0..=d}` of size at most `max_size`, by size then
/// lexicographically.
fn subsets(d: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for size in 1..=max_size {
        let mut cur: Vec<usize> = (0..size).collect();
        loop {
            out.push(cur.clone());
            let mut i = size;
            while i > 0 && cur[i - 1] == d + 1 - size + (i - 1) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..size {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
    out
}

fn simplex_faces_poset(d: usize, max_size: usize) -> CellPoset {
    let cells = subsets(d, max_size);
    let ids: Vec<String> = cells.iter().map(|s| subset_id(s)).collect();
    let dims = cells.iter().map(|s| s.len() - 1).collect();
    let mut covers = Vec::new();
    for (j, s) in cells.iter().enumerate() {
        if s.len() < 2 {
            continue;
        }
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            let k = cells.iter().position(|x| *x == f).expect("faces are listed");
            covers.push((k, j));
        }
    }
    CellPoset::from_parts(ids, dims, covers)
}

/// Face poset of the closed `d`-simplex (a ball).
pub fn simplex_ball_poset(d: usize) -> CellPoset {
    simplex_faces_poset(d, d + 1)
}

/// The boundary of the `d`-simplex as an oriented `(d-1)`-sphere.
pub fn simplex_sphere(d: usize) -> SphereComplex {
    assert!(d >= 2);
    orient(&simplex_faces_poset(d, d)).expect("simplex boundaries orient")
}

/// The boundary of the product of a `k`-simplex and an `l`-simplex, an
/// `(k + l - 1)`-sphere whose cells are products of faces.
pub fn prism_sphere(k: usize, l: usize) -> SphereComplex {
    assert!(k + l >= 2 && k >= 1 && l >= 1);
    let a = subsets(k, k + 1);
    let b = subsets(l, l + 1);
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            if a[i].len() == k + 1 && b[j].len() == l + 1 {
                continue;
            }
            cells.push((i, j));
        }
    }
    let dim = |c: &(usize, usize)| a[c.0].len() + b[c.1].len() - 2;
    cells.sort_by_key(|c| (dim(c), c.0, c.1));
    let ids: Vec<String> = cells.iter().map(|&(i, j)| format!("{}x{}", subset_id(&a[i]), subset_id(&b[j]))).collect();
    let dims: Vec<usize> = cells.iter().map(dim).collect();
    let find = |i: usize, j: usize| cells.iter().position(|&c| c == (i, j));
    let mut covers = Vec::new();
    for (x, &(i, j)) in cells.iter().enumerate() {
        let drop = |s: &Vec<usize>, t: usize| -> Vec<usize> {
            let mut f = s.clone();
            f.remove(t);
            f
        };
        if a[i].len() > 1 {
            for t in 0..a[i].len() {
                let fi = a.iter().position(|s| *s == drop(&a[i], t)).expect("face");
                covers.push((find(fi, j).expect("face cell"), x));
            }
        }
        if b[j].len() > 1 {
            for t in 0..b[j].len() {
                let fj = b.iter().position(|s| *s == drop(&b[j], t)).expect("face");
                covers.push((find(i, fj).expect("face cell"), x));
            }
        }
    }
    orient(&CellPoset::from_parts(ids, dims, covers)).expect("prism boundaries orient")
}

/// Polygon aggregation: target edge `i` of an `m`-gon (`m = sizes.len()`)
/// aggregates `sizes[i]` consecutive edges of the source polygon.
pub fn polygon_aggregation(sizes: &[usize]) -> Aggregation {
    assert!(sizes.len() >= 2 && sizes.iter().all(|&s| s >= 1));
    let m = sizes.len();
    let total: usize = sizes.iter().sum();
    let source = Arc::new(polygon(total));
    let target = Arc::new(polygon(m));
    let mut map = vec![0; 2 * total];
    let mut j = 0;
    for (i, &s) in sizes.iter().enumerate() {
        for t in 0..s {
            map[j] = if t == 0 { i } else { m + i };
            map[total + j] = m + i;
            j += 1;
        }
    }
    Aggregation::new(source, target, map).expect("polygon aggregations are valid")
}

/// The `(k·m)`-gon onto the `m`-gon, each target edge aggregating `k` edges.
pub fn polygon_coarsening(k: usize, m: usize) -> Aggregation {
    polygon_aggregation(&vec![k; m])
}

/// Stellar subdivision of the cell `c` (of dimension at least 1): `c` is
/// replaced by a cone from a new apex over its boundary. Returns the
/// aggregation from the subdivided sphere onto `s`.
pub fn stellar_subdivision(s: &Arc<SphereComplex>, c: usize) -> Aggregation {
    let p = s.poset();
    assert!(p.dim(c) >= 1, "only cells of positive dimension are subdivided");
    let ideal: Vec<usize> = p.open_ideal(c).into_iter().collect();
    let old: Vec<usize> = (0..p.len()).filter(|&x| x != c).collect();
    let mut idx = vec![usize::MAX; p.len()];
    for (k, &x) in old.iter().enumerate() {
        idx[x] = k;
    }
    let apex = old.len();
    let mut cone = vec![usize::MAX; p.len()];
    for (k, &g) in ideal.iter().enumerate() {
        cone[g] = apex + 1 + k;
    }
    let mut ids: Vec<String> = old.iter().map(|&x| String::from(p.id(x))).collect();
    let mut dims: Vec<usize> = old.iter().map(|&x| p.dim(x)).collect();
    ids.push(format!("{}^", p.id(c)));
    dims.push(0);
    for &g in &ideal {
        ids.push(format!("{}^{}", p.id(g), p.id(c)));
        dims.push(p.dim(g) + 1);
    }
    let mut covers = Vec::new();
    for (a, b) in p.covers() {
        if a != c && b != c {
            covers.push((idx[a], idx[b]));
        }
    }
    for &d in p.cofaces(c) {
        for &g in p.faces(c) {
            covers.push((cone[g], idx[d]));
        }
    }
    for &g in &ideal {
        covers.push((idx[g], cone[g]));
        if p.dim(g) == 0 {
            covers.push((apex, cone[g]));
        }
        for &h in p.faces(g) {
            covers.push((cone[h], cone[g]));
        }
    }
    let sub = CellPoset::from_parts(ids, dims, covers);
    let mut map: Vec<usize> = old.clone();
    map.push(c);
    map.extend(ideal.iter().map(|_| c));
    aligned(orient(&sub).expect("stellar subdivisions orient"), s.clone(), map)
}

/// Build the aggregation, flipping the source's top cells if its
/// orientation disagrees with the target's.
pub fn aligned(source: SphereComplex, target: Arc<SphereComplex>, map: Vec<usize>) -> Aggregation {
    match Aggregation::new(Arc::new(source.clone()), target.clone(), map.clone()) {
        Ok(a) => a,
        Err(AggError::OrientationMismatch) => Aggregation::new(Arc::new(source.with_top_cells_flipped()), target, map)
            .expect("flipped orientation matches"),
        Err(e) => panic!("generated aggregation is invalid: {e}"),
    }
}

/// A tower `S_0 → S_1 → … → S_len = s` of stellar subdivisions; `pick`
/// chooses the cell of `S_{i+1}` to subdivide (it is reduced modulo the
/// number of cells of positive dimension).
pub fn subdivision_tower(s: Arc<SphereComplex>, len: usize, mut pick: impl FnMut(usize) -> usize) -> Vec<Aggregation> {
    let mut out: Vec<Aggregation> = Vec::with_capacity(len);
    let mut cur = s;
    for _ in 0..len {
        let cand: Vec<usize> = (0..cur.poset().len()).filter(|&x| cur.poset().dim(x) >= 1).collect();
        let c = cand[pick(cand.len()) % cand.len()];
        let a = stellar_subdivision(&cur, c);
        cur = a.source().clone();
        out.push(a);
    }
    out.reverse();
    out
}

/// A corpus of named sphere complexes of dimensions 1 to 3.
pub fn sphere_corpus() -> Vec<(String, SphereComplex)> {
    let mut out = Vec::new();
    for m in 2..=12 {
        out.push((format!("polygon-{m}"), polygon(m)));
    }
    for d in 2..=4 {
        let s = simplex_sphere(d);
        out.push((format!("simplex-boundary-{d}"), s.clone()));
        if d > 2 {
            out.push((format!("dual-simplex-boundary-{d}"), dual(&s)));
        }
    }
    out.push(("prism-2x1".into(), prism_sphere(2, 1)));
    out.push(("dual-prism-2x1".into(), dual(&prism_sphere(2, 1))));
    out.push(("prism-1x1".into(), prism_sphere(1, 1)));
    out.push(("prism-2x2".into(), prism_sphere(2, 2)));
    let t = Arc::new(simplex_sphere(3));
    let top = t.poset().cells(2)[0];
    out.push(("stellar-tetrahedron".into(), (**stellar_subdivision(&t, top).source()).clone()));
    let e = t.poset().cells(1)[0];
    out.push(("edge-stellar-tetrahedron".into(), (**stellar_subdivision(&t, e).source()).clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellx::validate_sphere;

    #[test]
    fn subsets_enumerate() {
        assert_eq!(subsets(2, 3).len(), 7);
        assert_eq!(subsets(3, 3).len(), 14);
    }

    #[test]
    fn generated_spheres_validate() {
        for (name, s) in sphere_corpus() {
            assert!(validate_sphere(s.poset(), s.n()).is_ok(), "{name}");
            assert!(s.is_chain_complex(), "{name}");
        }
        assert!(sphere_corpus().len() >= 20);
    }

    #[test]
    fn prism_counts() {
        let p = prism_sphere(2, 1);
        assert_eq!((p.rank(0), p.rank(1), p.rank(2)), (6, 9, 5));
        let q = prism_sphere(1, 1);
        assert_eq!((q.rank(0), q.rank(1)), (4, 4));
    }

    #[test]
    fn stellar_subdivisions_are_aggregations() {
        let s = Arc::new(simplex_sphere(4));
        for c in 0..s.poset().len() {
            if s.poset().dim(c) == 0 {
                continue;
            }
            let a = stellar_subdivision(&s, c);
            assert!(a.is_chain_map());
            assert!(validate_sphere(a.source().poset(), 3).is_ok());
        }
    }

    #[test]
    fn towers_compose() {
        let tower = subdivision_tower(Arc::new(polygon(3)), 3, |n| n / 2);
        assert_eq!(tower.len(), 3);
        for w in tower.windows(2) {
            assert!(Arc::ptr_eq(w[0].target(), w[1].source()));
        }
        assert_eq!(tower[2].target().rank(0), 3);
        assert_eq!(tower[0].source().rank(0), 6);
    }
}

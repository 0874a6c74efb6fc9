use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{CellError, CellPoset};
use crate::report::Report;
use crate::simplicial::{HomologyDescription, SimplicialComplex};

/// Whether `h` is the integral homology of `S^m`; `m = -1` stands for the
/// empty space.
pub fn has_sphere_homology(h: &HomologyDescription, m: isize) -> bool {
    h.is_torsion_free() && trim(&h.betti) == sphere_betti(m)
}

fn sphere_betti(m: isize) -> Vec<usize> {
    match m {
        -1 => Vec::new(),
        0 => vec![2],
        _ => {
            let mut b = vec![0; m as usize + 1];
            b[0] = 1;
            b[m as usize] = 1;
            b
        }
    }
}

fn trim(b: &[usize]) -> Vec<usize> {
    let mut v = b.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn sphere_check(c: &SimplicialComplex, m: isize) -> Result<(), alloc::string::String> {
    let h = c.homology_z();
    let q = trim(&c.betti_q());
    if !has_sphere_homology(&h, m) || q != sphere_betti(m) {
        return Err(format!("betti {:?}, torsion {:?}", h.betti, h.torsion));
    }
    Ok(())
}

/// Homological proxy for "the poset is a regular cell decomposition of
/// `S^n`".
pub fn validate_sphere(p: &CellPoset, n: usize) -> Report {
    let mut r = Report::new(format!("sphere n={n}"));
    if !r.check("dimension", n >= 1, "n >= 1 is required") {
        return r;
    }
    if !r.check("nonempty", !p.is_empty(), "no cells") {
        return r;
    }

    let graded = (0..p.len()).all(|c| p.faces(c).iter().all(|&f| p.dim(f) + 1 == p.dim(c)));
    let top_ok = p.top_dim() == Some(n);
    let pure = (0..p.len()).all(|c| p.dim(c) == n || !p.cofaces(c).is_empty())
        && (0..p.len()).all(|c| p.dim(c) == 0 || !p.faces(c).is_empty());
    r.check(
        "graded",
        graded && top_ok && pure,
        if !top_ok {
            format!("top dimension {:?}", p.top_dim())
        } else if !pure {
            "a maximal cell is not top-dimensional or a minimal cell is not a vertex".into()
        } else {
            alloc::string::String::new()
        },
    );

    let mut diamond_bad = None;
    'outer: for c in 0..p.len() {
        let k = p.dim(c);
        if k == 1 && p.faces(c).len() != 2 {
            diamond_bad = Some(format!("edge {:?} has {} vertices", p.id(c), p.faces(c).len()));
            break;
        }
        if k < 2 {
            continue;
        }
        let mut ridges: Vec<(usize, usize)> = Vec::new();
        for &f in p.faces(c) {
            for &g in p.faces(f) {
                match ridges.iter_mut().find(|(x, _)| *x == g) {
                    Some(e) => e.1 += 1,
                    None => ridges.push((g, 1)),
                }
            }
        }
        for (g, m) in ridges {
            if m != 2 {
                diamond_bad = Some(format!("interval ({:?}, {:?}) has {m} middle cells", p.id(g), p.id(c)));
                break 'outer;
            }
        }
    }
    r.check("diamond", diamond_bad.is_none(), diamond_bad.unwrap_or_default());
    if !r.is_ok() {
        return r;
    }

    let oc = p.order_complex();
    match sphere_check(&oc, n as isize) {
        Ok(()) => r.pass("order complex homology"),
        Err(d) => r.fail("order complex homology", d),
    }

    let mut bad_ideal = None;
    for c in 0..p.len() {
        let k = p.dim(c);
        if k == 0 {
            continue;
        }
        let ideal = p.open_ideal(c);
        if let Err(d) = sphere_check(&p.order_complex_of(&ideal), k as isize - 1) {
            bad_ideal = Some(format!("boundary of {:?}: {d}", p.id(c)));
            break;
        }
    }
    r.check("cell boundaries are spheres", bad_ideal.is_none(), bad_ideal.unwrap_or_default());

    let chi = if n % 2 == 0 { 2 } else { 0 };
    let got = oc.euler_characteristic();
    let cells = p.cell_euler_characteristic();
    r.check(
        "euler characteristic",
        got == chi && cells == chi,
        format!("order complex {got}, cells {cells}, expected {chi}"),
    );
    r
}

/// [`validate_sphere`] as a `Result`, carrying the first failed check.
pub fn validated(p: &CellPoset, n: usize) -> Result<(), CellError> {
    let r = validate_sphere(p, n);
    match r.reason() {
        None => Ok(()),
        Some(reason) => Err(CellError::Invalid(reason)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    #[test]
    fn standard_spheres_pass() {
        for m in 2..=6 {
            assert!(validate_sphere(build::polygon(m).poset(), 1).is_ok());
        }
        for d in 2..=4 {
            let s = build::simplex_sphere(d);
            assert!(validate_sphere(s.poset(), d - 1).is_ok(), "{}", validate_sphere(s.poset(), d - 1));
        }
    }

    #[test]
    fn disk_fails() {
        let disk = CellPoset::from_indexed(
            vec![0, 0, 0, 1, 1, 1, 2],
            [(0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5), (3, 6), (4, 6), (5, 6)],
        );
        let r = validate_sphere(&disk, 2);
        assert!(!r.is_ok());
        assert!(matches!(validated(&disk, 2), Err(CellError::Invalid(_))));
    }

    #[test]
    fn wrong_dimension_and_broken_diamond() {
        assert!(!validate_sphere(build::polygon(3).poset(), 2).is_ok());
        // an edge with a single endpoint
        let p = CellPoset::from_indexed(vec![0, 0, 1, 1], [(0, 2), (0, 3), (1, 3)]);
        let r = validate_sphere(&p, 1);
        assert!(r.checks.iter().any(|c| c.name == "diamond" && !c.passed));
    }

    #[test]
    fn two_disjoint_circles_fail() {
        let mut dims = vec![0, 0, 1, 1];
        dims.extend([0, 0, 1, 1]);
        let p = CellPoset::from_indexed(dims, [(0, 2), (1, 2), (0, 3), (1, 3), (4, 6), (5, 6), (4, 7), (5, 7)]);
        assert!(!validate_sphere(&p, 1).is_ok());
    }
}

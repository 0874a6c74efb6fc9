//! Combinatorial Hodge theory on a based spherical chain complex: Laplacians,
//! Green operators, the pseudoinverse `γ† = γᵀ G`, the resulting strong
//! deformation retraction onto `H(S^n; Q)`, and the basic perturbation lemma.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cellx::{chain_sphere, BasedChainComplex, SphereComplex};
use crate::ratlin::{LinAlgError, RatMatrix};
use crate::report::Report;

mod bpl;

pub use bpl::{bpl_perturb, verify_perturbed, GradedSdr, PerturbError, Perturbation, Perturbed};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HodgeError {
    Singular { degree: usize },
    Degree(usize),
}

impl fmt::Display for HodgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HodgeError::Singular { degree } => {
                write!(f, "corrected Laplacian is singular in degree {degree}: not a homology sphere")
            }
            HodgeError::Degree(j) => write!(f, "degree {j} is out of range"),
        }
    }
}

/// `Δ_j = γ_jᵀ γ_j + γ_{j+1} γ_{j+1}ᵀ`.
pub fn laplacian(c: &BasedChainComplex, j: usize) -> RatMatrix {
    assert!(j <= c.n, "degree out of range");
    let g = c.gamma(j);
    let h = c.gamma(j + 1);
    &(&g.transpose() * &g) + &(&h * &h.transpose())
}

/// `i_j p_j` for `j ∈ {0, n}` as in the Hodge retraction.
fn harmonic_projector(c: &BasedChainComplex, j: usize) -> Option<RatMatrix> {
    if j == 0 {
        Some(&i0(c) * &c.p0)
    } else if j == c.n {
        Some(&c.i_n * &p_n(c))
    } else {
        None
    }
}

/// `i_0 = (1/w)(1, …, 1)ᵀ`.
pub fn i0(c: &BasedChainComplex) -> RatMatrix {
    let w = c.w() as i64;
    RatMatrix::column(vec![BigRational::new(1.into(), w.into()); c.w()])
}

/// `p_n = (1/f) [S]ᵀ`.
pub fn p_n(c: &BasedChainComplex) -> RatMatrix {
    let f = BigRational::from_integer((c.f() as i64).into());
    c.i_n.transpose().scale(&f.recip())
}

/// `G_j = (Δ_j + i_j p_j)⁻¹` for `j ∈ {0, n}`, `Δ_j⁻¹` otherwise.
pub fn green(c: &BasedChainComplex, j: usize) -> Result<RatMatrix, HodgeError> {
    if j > c.n {
        return Err(HodgeError::Degree(j));
    }
    let mut m = laplacian(c, j);
    if let Some(ip) = harmonic_projector(c, j) {
        m = &m + &ip;
    }
    m.inverse().map_err(|e| match e {
        LinAlgError::Singular => HodgeError::Singular { degree: j },
        other => panic!("Laplacian is square: {other}"),
    })
}

/// `γ†_j = γ_jᵀ G_{j-1}`.
pub fn dagger(c: &BasedChainComplex, j: usize) -> Result<RatMatrix, HodgeError> {
    if j == 0 || j > c.n {
        return Err(HodgeError::Degree(j));
    }
    Ok(&c.gamma(j).transpose() * &green(c, j - 1)?)
}

/// Strong deformation retraction data `⟨F, i, p⟩` onto `H(S^n; Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdrData {
    pub complex: BasedChainComplex,
    /// `f[j-1] = F_j : R_{j-1} → R_j` for `1 ≤ j ≤ n`.
    pub f: Vec<RatMatrix>,
    pub i0: RatMatrix,
    pub i_n: RatMatrix,
    pub p0: RatMatrix,
    pub p_n: RatMatrix,
}

impl SdrData {
    pub fn n(&self) -> usize {
        self.complex.n
    }

    /// `F_j` for `1 ≤ j ≤ n`.
    pub fn big_f(&self, j: usize) -> &RatMatrix {
        &self.f[j - 1]
    }

    /// The inclusion in degree `k` (zero map from the zero space when `k`
    /// is not `0` or `n`).
    pub fn i(&self, k: usize) -> RatMatrix {
        if k == 0 {
            self.i0.clone()
        } else if k == self.n() {
            self.i_n.clone()
        } else {
            RatMatrix::zeros(self.complex.dims[k], 0)
        }
    }

    pub fn p(&self, k: usize) -> RatMatrix {
        if k == 0 {
            self.p0.clone()
        } else if k == self.n() {
            self.p_n.clone()
        } else {
            RatMatrix::zeros(0, self.complex.dims[k])
        }
    }
}

/// The Hodge retraction: `F_j = γ†_j`, `i_0 = (1/w)1`, `i_n = [S]`,
/// `p_0 = 1ᵀ`, `p_n = (1/f)[S]ᵀ`.
pub fn build_sdr(s: &SphereComplex) -> Result<SdrData, HodgeError> {
    build_sdr_of(chain_sphere(s))
}

pub fn build_sdr_of(c: BasedChainComplex) -> Result<SdrData, HodgeError> {
    let greens: Vec<RatMatrix> = (0..c.n).map(|j| green(&c, j)).collect::<Result<_, _>>()?;
    let f = (1..=c.n).map(|j| &c.gamma(j).transpose() * &greens[j - 1]).collect();
    Ok(SdrData { i0: i0(&c), i_n: c.i_n.clone(), p0: c.p0.clone(), p_n: p_n(&c), f, complex: c })
}

/// The retraction with `F_j` computed by the rank-factorization
/// pseudoinverse instead of the Green operators.
pub fn generic_sdr(s: &SphereComplex) -> SdrData {
    let c = chain_sphere(s);
    let f = (1..=c.n).map(|j| c.gamma(j).moore_penrose()).collect();
    SdrData { i0: i0(&c), i_n: c.i_n.clone(), p0: c.p0.clone(), p_n: p_n(&c), f, complex: c }
}

/// The Hodge retraction for the inner product with positive diagonal
/// weights `weights[k]` on `R_k`. Unit weights give [`generic_sdr`].
pub fn weighted_sdr(s: &SphereComplex, weights: &[Vec<BigRational>]) -> SdrData {
    let c = chain_sphere(s);
    let n = c.n;
    assert_eq!(weights.len(), n + 1);
    for k in 0..=n {
        assert_eq!(weights[k].len(), c.dims[k], "one weight per cell");
    }
    let f = (1..=n).map(|j| c.gamma(j).weighted_moore_penrose(&weights[j], &weights[j - 1])).collect();
    let inv0: Vec<BigRational> = weights[0].iter().map(BigRational::recip).collect();
    let total: BigRational = inv0.iter().fold(BigRational::zero(), |a, b| a + b);
    let i0 = RatMatrix::column(inv0.iter().map(|x| x / &total).collect());
    let sw: Vec<BigRational> = (0..c.f()).map(|j| c.i_n.get(j, 0) * &weights[n][j]).collect();
    let norm: BigRational = (0..c.f()).fold(BigRational::zero(), |a, j| a + &sw[j] * c.i_n.get(j, 0));
    let p_n = RatMatrix::row_vector(sw.iter().map(|x| x / &norm).collect());
    SdrData { i0, i_n: c.i_n.clone(), p0: c.p0.clone(), p_n, f, complex: c }
}

/// Exact check of every retraction identity:
/// `Σ (γF + Fγ + ip) = Id` in each degree, `p i = 1` at both ends, and
/// `p_n F_n = 0`, `F_1 i_0 = 0`, `F_{j+1} F_j = 0`, `p_0 γ_1 = 0`,
/// `γ_n i_n = 0`.
pub fn verify_sdr(d: &SdrData) -> Report {
    let c = &d.complex;
    let n = c.n;
    let mut r = Report::new(format!("retraction n={n}"));
    for k in 0..=n {
        let mut sum = RatMatrix::zeros(c.dims[k], c.dims[k]);
        if k < n {
            sum = &sum + &(&c.gamma(k + 1) * d.big_f(k + 1));
        }
        if k > 0 {
            sum = &sum + &(d.big_f(k) * &c.gamma(k));
        }
        if k == 0 {
            sum = &sum + &(&d.i0 * &d.p0);
        }
        if k == n {
            sum = &sum + &(&d.i_n * &d.p_n);
        }
        r.check(format!("homotopy identity in degree {k}"), sum.is_identity(), "");
    }
    let one = RatMatrix::identity(1);
    r.check("p0 i0 = 1", &d.p0 * &d.i0 == one, "");
    r.check("pn in = 1", &d.p_n * &d.i_n == one, "");
    r.check("pn Fn = 0", (&d.p_n * d.big_f(n)).is_zero(), "");
    r.check("F1 i0 = 0", (d.big_f(1) * &d.i0).is_zero(), "");
    for j in 1..n {
        r.check(format!("F{} F{} = 0", j + 1, j), (d.big_f(j + 1) * d.big_f(j)).is_zero(), "");
    }
    r.check("p0 gamma1 = 0", (&d.p0 * &c.gamma(1)).is_zero(), "");
    r.check("gamma_n i_n = 0", (&c.gamma(n) * &d.i_n).is_zero(), "");
    r
}

/// Both readings of the pseudoinverse agree: `γ_jᵀ G_{j-1} = G_j γ_jᵀ`.
pub fn dagger_symmetry(c: &BasedChainComplex, j: usize) -> Result<bool, HodgeError> {
    let left = dagger(c, j)?;
    let right = &green(c, j)? * &c.gamma(j).transpose();
    Ok(left == right)
}

/// A deterministic family of positive weights, for randomized retractions.
pub fn pseudo_random_weights(c: &BasedChainComplex, seed: u64) -> Vec<Vec<BigRational>> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    c.dims
        .iter()
        .map(|&d| (0..d).map(|_| BigRational::new((1 + next() % 9).into(), (1 + next() % 5).into())).collect())
        .collect()
}

/// Describe an [`SdrData`] failure compactly.
pub fn failures(r: &Report) -> String {
    let names: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
    names.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::cellx::dual;
    use crate::ratlin::{rat, ratio};

    #[test]
    fn triangle_laplacians() {
        let c = chain_sphere(&build::polygon(3));
        let l0 = laplacian(&c, 0);
        let c3 = RatMatrix::from_i64(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
        assert_eq!(l0, c3);
        let l1 = laplacian(&c, 1);
        assert_eq!(l1, &c.gamma(1).transpose() * &c.gamma(1));
        assert!(l1.is_symmetric());
        // the edge Laplacian of a triangle is again the cycle-graph pattern
        assert_eq!(l1.entries().filter(|(i, j, _)| i == j).count(), 3);
    }

    #[test]
    fn triangle_green_and_dagger() {
        let c = chain_sphere(&build::polygon(3));
        let g0 = green(&c, 0).unwrap();
        let corrected = &laplacian(&c, 0) + &RatMatrix::from_fn(3, 3, |_, _| ratio(1, 3));
        assert!((&g0 * &corrected).is_identity());
        assert_eq!(dagger(&c, 1).unwrap(), c.gamma(1).moore_penrose());
    }

    #[test]
    fn middle_degree_green_is_plain_inverse() {
        let c = chain_sphere(&build::simplex_sphere(4));
        let g = green(&c, 1).unwrap();
        assert!((&g * &laplacian(&c, 1)).is_identity());
    }

    fn two_circles() -> BasedChainComplex {
        let tri = RatMatrix::from_i64(&[&[1, 0, 1], &[-1, 1, 0], &[0, -1, -1]]);
        let mut g1 = RatMatrix::zeros(6, 6);
        g1.place(0, 0, &tri);
        g1.place(3, 3, &tri);
        BasedChainComplex {
            n: 1,
            dims: vec![6, 6],
            gammas: vec![g1],
            p0: RatMatrix::row_vector(vec![rat(1); 6]),
            i_n: RatMatrix::column(vec![rat(1), rat(1), rat(-1), rat(1), rat(1), rat(-1)]),
        }
    }

    #[test]
    fn extra_homology_is_singular() {
        let c = two_circles();
        assert_eq!(green(&c, 0), Err(HodgeError::Singular { degree: 0 }));
        assert_eq!(green(&c, 1), Err(HodgeError::Singular { degree: 1 }));
    }

    #[test]
    fn disk_fails_the_identities() {
        // closed triangle: the corrected top Laplacian is invertible, but
        // [S] is not a cycle
        let g1 = RatMatrix::from_i64(&[&[1, 0, 1], &[-1, 1, 0], &[0, -1, -1]]);
        let g2 = RatMatrix::from_i64(&[&[1], &[1], &[-1]]);
        let c = BasedChainComplex {
            n: 2,
            dims: vec![3, 3, 1],
            gammas: vec![g1, g2],
            p0: RatMatrix::row_vector(vec![rat(1); 3]),
            i_n: RatMatrix::column(vec![rat(1)]),
        };
        assert!(green(&c, 2).is_ok());
        let d = build_sdr_of(c).unwrap();
        assert!(!verify_sdr(&d).is_ok());
    }

    #[test]
    fn tetrahedron_pseudoinverses() {
        let c = chain_sphere(&build::simplex_sphere(3));
        for j in 1..=2 {
            let m = c.gamma(j);
            let p = dagger(&c, j).unwrap();
            assert_eq!(&(&m * &p) * &m, m);
            assert_eq!(&(&p * &m) * &p, p);
            assert!((&m * &p).is_symmetric());
            assert!((&p * &m).is_symmetric());
            assert!(dagger_symmetry(&c, j).unwrap());
        }
    }

    #[test]
    fn invertible_middle_gamma() {
        // a chain complex with an invertible middle differential
        let g = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let c = BasedChainComplex {
            n: 3,
            dims: vec![1, 2, 2, 1],
            gammas: vec![RatMatrix::zeros(1, 2), g.clone(), RatMatrix::zeros(2, 1)],
            p0: RatMatrix::row_vector(vec![rat(1)]),
            i_n: RatMatrix::column(vec![rat(1)]),
        };
        assert_eq!(dagger(&c, 2).unwrap(), g.inverse().unwrap());
    }

    #[test]
    fn triangle_sdr_values() {
        let d = build_sdr(&build::polygon(3)).unwrap();
        assert_eq!(d.i0, RatMatrix::column(vec![ratio(1, 3); 3]));
        assert_eq!(d.p_n, RatMatrix::row_vector(vec![ratio(1, 3); 3]));
        assert!(verify_sdr(&d).is_ok());
    }

    #[test]
    fn sdr_on_corpus_and_mutation() {
        for (name, s) in build::sphere_corpus().into_iter().take(16) {
            let d = build_sdr(&s).unwrap();
            assert!(verify_sdr(&d).is_ok(), "{name}: {}", failures(&verify_sdr(&d)));
        }
        let mut d = build_sdr(&build::simplex_sphere(3)).unwrap();
        let v = d.f[0].get(0, 0) + rat(1);
        d.f[0].set(0, 0, v);
        assert!(!verify_sdr(&d).is_ok());
    }

    #[test]
    fn reversal_negates_ends_only() {
        let s = build::simplex_sphere(3);
        let a = build_sdr(&s).unwrap();
        let b = build_sdr(&s.reversed()).unwrap();
        assert_eq!(b.i_n, -&a.i_n);
        assert_eq!(b.p_n, -&a.p_n);
        assert_eq!(a.f, b.f);
    }

    #[test]
    fn alternative_retractions_verify() {
        for s in [build::polygon(5), build::simplex_sphere(3), dual(&build::prism_sphere(2, 1))] {
            let g = generic_sdr(&s);
            assert!(verify_sdr(&g).is_ok());
            assert_eq!(g, build_sdr(&s).unwrap());
            let w = pseudo_random_weights(&g.complex, 7);
            let r = weighted_sdr(&s, &w);
            assert!(verify_sdr(&r).is_ok(), "{}", failures(&verify_sdr(&r)));
        }
    }

    #[test]
    fn hodge_commutation() {
        let c = chain_sphere(&build::prism_sphere(2, 1));
        for j in 1..=c.n {
            assert_eq!(&c.gamma(j) * &laplacian(&c, j), &laplacian(&c, j - 1) * &c.gamma(j));
        }
    }
}

//! The basic perturbation lemma for graded retraction data.
//!
//! Degrees run over `0..=top`. Differentials lower degree, homotopies raise
//! it, and the convention is `d h + h d = 1 - i p`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::ratlin::RatMatrix;
use crate::report::Report;

use super::SdrData;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerturbError {
    /// `(-h ψ)^k` did not vanish within the filtration bound.
    NotNilpotent {
        degree: usize,
        bound: usize,
    },
    /// `(d + ψ)² ≠ 0` in the given degree.
    NotADifferential {
        degree: usize,
    },
    Shape(&'static str),
}

impl fmt::Display for PerturbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerturbError::NotNilpotent { degree, bound } => {
                write!(f, "h psi is not nilpotent within {bound} steps in degree {degree}")
            }
            PerturbError::NotADifferential { degree } => write!(f, "(d + psi)^2 is nonzero in degree {degree}"),
            PerturbError::Shape(what) => write!(f, "shape mismatch: {what}"),
        }
    }
}

/// `⟨h, i, p⟩` between a big complex `(B, d)` and a small one `(S, d_S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSdr {
    /// `big_d[k] : B_k → B_{k-1}`; `big_d[0]` has no rows.
    pub big_d: Vec<RatMatrix>,
    pub small_d: Vec<RatMatrix>,
    /// `i[k] : S_k → B_k`.
    pub i: Vec<RatMatrix>,
    /// `p[k] : B_k → S_k`.
    pub p: Vec<RatMatrix>,
    /// `h[k] : B_k → B_{k+1}`; `h[top]` has no rows.
    pub h: Vec<RatMatrix>,
}

impl GradedSdr {
    pub fn top(&self) -> usize {
        self.big_d.len() - 1
    }

    pub fn big_dim(&self, k: usize) -> usize {
        self.big_d.get(k).map_or(0, RatMatrix::ncols)
    }

    pub fn small_dim(&self, k: usize) -> usize {
        self.small_d.get(k).map_or(0, RatMatrix::ncols)
    }

    fn d_big(&self, k: usize) -> RatMatrix {
        match self.big_d.get(k) {
            Some(m) => m.clone(),
            None => RatMatrix::zeros(self.big_dim(k - 1), 0),
        }
    }

    /// `h_{k-1}`, the homotopy landing in degree `k` (`k ≥ 1`).
    fn h_into(&self, k: usize) -> &RatMatrix {
        &self.h[k - 1]
    }

    /// The sphere retraction as graded data.
    pub fn from_sphere(d: &SdrData) -> Self {
        let c = &d.complex;
        let n = c.n;
        let big_d = (0..=n).map(|k| c.gamma(k)).collect();
        let small_d = (0..=n)
            .map(|k| {
                let rows = if k == 0 { 0 } else { usize::from(k - 1 == 0 || k - 1 == n) };
                RatMatrix::zeros(rows, usize::from(k == 0 || k == n))
            })
            .collect();
        let mut h: Vec<RatMatrix> = (1..=n).map(|j| d.big_f(j).clone()).collect();
        h.push(RatMatrix::zeros(0, c.dims[n]));
        GradedSdr { big_d, small_d, i: (0..=n).map(|k| d.i(k)).collect(), p: (0..=n).map(|k| d.p(k)).collect(), h }
    }

    /// Checks `d² = 0` on both sides, chain-map conditions for `i` and `p`,
    /// `p i = 1`, `d h + h d = 1 - i p`, and `h i = 0`, `p h = 0`, `h h = 0`.
    pub fn verify(&self) -> Report {
        let top = self.top();
        let mut r = Report::new(format!("graded retraction, top degree {top}"));
        for k in 0..=top {
            if k >= 1 {
                r.check(format!("big d^2 = 0 at {k}"), (&self.big_d[k - 1] * &self.big_d[k]).is_zero(), "");
                r.check(format!("small d^2 = 0 at {k}"), (&self.small_d[k - 1] * &self.small_d[k]).is_zero(), "");
                r.check(
                    format!("d i = i d at {k}"),
                    &self.big_d[k] * &self.i[k] == &self.i[k - 1] * &self.small_d[k],
                    "",
                );
                r.check(
                    format!("p d = d p at {k}"),
                    &self.p[k - 1] * &self.big_d[k] == &self.small_d[k] * &self.p[k],
                    "",
                );
            }
            r.check(format!("p i = 1 at {k}"), (&self.p[k] * &self.i[k]).is_identity(), "");
            let mut lhs = &self.d_big(k + 1) * &self.h[k];
            if k >= 1 {
                lhs = &lhs + &(self.h_into(k) * &self.big_d[k]);
            }
            let rhs = &RatMatrix::identity(self.big_dim(k)) - &(&self.i[k] * &self.p[k]);
            r.check(format!("dh + hd = 1 - ip at {k}"), lhs == rhs, "");
            r.check(format!("h i = 0 at {k}"), (&self.h[k] * &self.i[k]).is_zero(), "");
            if k < top {
                r.check(format!("p h = 0 at {k}"), (&self.p[k + 1] * &self.h[k]).is_zero(), "");
                r.check(format!("h h = 0 at {k}"), (&self.h[k + 1] * &self.h[k]).is_zero(), "");
            }
        }
        r
    }
}

/// A degree `-1` perturbation `ψ` of the big differential.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub base: GradedSdr,
    /// `psi[k] : B_k → B_{k-1}`.
    pub psi: Vec<RatMatrix>,
    /// Length of the filtration that `h ψ` strictly lowers.
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Perturbed {
    pub sdr: GradedSdr,
    /// Per degree, the largest power of `-h ψ` that was nonzero.
    pub depth: Vec<usize>,
}

impl Perturbed {
    pub fn d_psi(&self, k: usize) -> &RatMatrix {
        &self.sdr.small_d[k]
    }
}

/// `Σ_k = Σ_j (-h_{k-1} ψ_k)^j`, the finite geometric series.
fn sigma(base: &GradedSdr, psi: &[RatMatrix], k: usize, bound: usize) -> Result<(RatMatrix, usize), PerturbError> {
    let dim = base.big_dim(k);
    let id = RatMatrix::identity(dim);
    if k == 0 {
        return Ok((id, 0));
    }
    let step = -&(base.h_into(k) * &psi[k]);
    let mut sum = id.clone();
    let mut power = id;
    for j in 1..=bound + 1 {
        power = &step * &power;
        if power.is_zero() {
            return Ok((sum, j - 1));
        }
        sum = &sum + &power;
    }
    Err(PerturbError::NotNilpotent { degree: k, bound })
}

/// Perturb `⟨h, i, p⟩` along `ψ`:
/// `d_ψ = d_S + p ψ Σ i`, `i_ψ = Σ i`, `p_ψ = p (1 - ψ Σ h)`, `h_ψ = Σ h`.
pub fn bpl_perturb(pert: &Perturbation) -> Result<Perturbed, PerturbError> {
    let base = &pert.base;
    let top = base.top();
    if pert.psi.len() != top + 1 {
        return Err(PerturbError::Shape("one perturbation matrix per degree"));
    }
    for k in 0..=top {
        let want = (if k == 0 { 0 } else { base.big_dim(k - 1) }, base.big_dim(k));
        if pert.psi[k].shape() != want {
            return Err(PerturbError::Shape("perturbation block"));
        }
    }
    let total: Vec<RatMatrix> = (0..=top).map(|k| &base.big_d[k] + &pert.psi[k]).collect();
    for k in 2..=top {
        if !(&total[k - 1] * &total[k]).is_zero() {
            return Err(PerturbError::NotADifferential { degree: k });
        }
    }
    let mut sigmas = Vec::with_capacity(top + 1);
    let mut depth = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let (s, j) = sigma(base, &pert.psi, k, pert.bound)?;
        sigmas.push(s);
        depth.push(j);
    }
    let i: Vec<RatMatrix> = (0..=top).map(|k| &sigmas[k] * &base.i[k]).collect();
    let small_d = (0..=top)
        .map(|k| {
            if k == 0 {
                base.small_d[0].clone()
            } else {
                &base.small_d[k] + &(&(&base.p[k - 1] * &pert.psi[k]) * &i[k])
            }
        })
        .collect();
    let p = (0..=top)
        .map(|k| {
            if k == top {
                return base.p[k].clone();
            }
            let corr = &(&pert.psi[k + 1] * &sigmas[k + 1]) * &base.h[k];
            &base.p[k] * &(&RatMatrix::identity(base.big_dim(k)) - &corr)
        })
        .collect();
    let h = (0..=top).map(|k| if k == top { base.h[k].clone() } else { &sigmas[k + 1] * &base.h[k] }).collect();
    Ok(Perturbed { sdr: GradedSdr { big_d: total, small_d, i, p, h }, depth })
}

/// All retraction identities for the perturbed data, including `d_ψ² = 0`.
pub fn verify_perturbed(p: &Perturbed) -> Report {
    p.sdr.verify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::hodge::build_sdr;
    use crate::ratlin::rat;

    fn zero_psi(g: &GradedSdr) -> Vec<RatMatrix> {
        g.big_d.iter().map(|m| RatMatrix::zeros(m.nrows(), m.ncols())).collect()
    }

    #[test]
    fn sphere_data_is_a_graded_retraction() {
        for s in [build::polygon(4), build::simplex_sphere(3), build::simplex_sphere(4)] {
            let g = GradedSdr::from_sphere(&build_sdr(&s).unwrap());
            let r = g.verify();
            assert!(r.is_ok(), "{:?}", r.first_failure());
        }
    }

    #[test]
    fn zero_perturbation_is_inert() {
        let g = GradedSdr::from_sphere(&build_sdr(&build::simplex_sphere(3)).unwrap());
        let out = bpl_perturb(&Perturbation { psi: zero_psi(&g), base: g.clone(), bound: 1 }).unwrap();
        assert_eq!(out.sdr, g);
        assert!(out.depth.iter().all(|&d| d == 0));
    }

    #[test]
    fn non_differential_rejected() {
        let g = GradedSdr::from_sphere(&build_sdr(&build::simplex_sphere(3)).unwrap());
        let mut psi = zero_psi(&g);
        psi[1].set(0, 0, rat(1));
        let e = bpl_perturb(&Perturbation { psi, base: g, bound: 3 }).unwrap_err();
        assert_eq!(e, PerturbError::NotADifferential { degree: 2 });
    }

    #[test]
    fn non_nilpotent_rejected() {
        // B = Q in degrees 0 and 1 with d = 1, S = 0, h the inverse; ψ = -d
        // makes the total differential zero and h ψ = -1 never vanishes.
        let one = RatMatrix::identity(1);
        let g = GradedSdr {
            big_d: alloc::vec![RatMatrix::zeros(0, 1), one.clone()],
            small_d: alloc::vec![RatMatrix::zeros(0, 0), RatMatrix::zeros(0, 0)],
            i: alloc::vec![RatMatrix::zeros(1, 0), RatMatrix::zeros(1, 0)],
            p: alloc::vec![RatMatrix::zeros(0, 1), RatMatrix::zeros(0, 1)],
            h: alloc::vec![one.clone(), RatMatrix::zeros(0, 1)],
        };
        assert!(g.verify().is_ok());
        let psi = alloc::vec![RatMatrix::zeros(0, 1), -&one];
        let e = bpl_perturb(&Perturbation { psi, base: g, bound: 4 }).unwrap_err();
        assert_eq!(e, PerturbError::NotNilpotent { degree: 1, bound: 4 });
    }
}

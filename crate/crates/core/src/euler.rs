//! The Euler cocycle of a spherical local system: local values from chains
//! of aggregations, the simplicial cochain, periods and the twisted complex.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::aggmap::Aggregation;
use crate::cellx::SphereComplex;
use crate::hodge::{build_sdr, HodgeError, SdrData};
use crate::locsys::{
    to_chain_system, total_complex, vertical_sdr, CellLocalSystem, ChainLocalSystem, LocError, SimplicialBase,
    SmallCell,
};
use crate::ratlin::{IntMatrix, RatMatrix};
use crate::report::Report;
use crate::simplicial::{face, rational_betti, Simplex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerError {
    NotComposable(String),
    Hodge(HodgeError),
    Loc(LocError),
    NotASimplex(Simplex),
    NotACycle,
    NonIntegerPeriod(BigRational),
    NotSquareZero { degree: usize },
}

impl fmt::Display for EulerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerError::NotComposable(r) => write!(f, "aggregations do not compose: {r}"),
            EulerError::Hodge(e) => write!(f, "{e}"),
            EulerError::Loc(e) => write!(f, "{e}"),
            EulerError::NotASimplex(s) => write!(f, "{s:?} is not an (n+1)-simplex of the base"),
            EulerError::NotACycle => f.write_str("chain is not a cycle"),
            EulerError::NonIntegerPeriod(q) => write!(f, "period {q} is not an integer"),
            EulerError::NotSquareZero { degree } => {
                write!(f, "twisted differential does not square to zero at {degree}")
            }
        }
    }
}

impl From<HodgeError> for EulerError {
    fn from(e: HodgeError) -> Self {
        EulerError::Hodge(e)
    }
}

impl From<LocError> for EulerError {
    fn from(e: LocError) -> Self {
        EulerError::Loc(e)
    }
}

/// `p_n(0) L_n(0,1) F_n(1) L_{n-1}(1,2) … F_1(n) L_0(n,n+1) i_0(n+1)`,
/// evaluated right to left; `maps[j]` is `L(j, j+1)` by degree.
fn chain_product(sdrs: &[&SdrData], maps: &[&[IntMatrix]]) -> BigRational {
    let n = sdrs[0].n();
    let mut v = sdrs[n + 1].i0.clone();
    for j in (0..=n).rev() {
        let deg = n - j;
        v = &maps[j][deg].to_rat() * &v;
        if j > 0 {
            v = sdrs[j].big_f(deg + 1) * &v;
        }
    }
    (&sdrs[0].p_n * &v).scalar().expect("1 x 1 product")
}

/// The local value of a composable chain `S_0 → S_1 → … → S_{n+1}` of
/// `n + 1` aggregations, using the Hodge retraction of every sphere.
pub fn euler_local(chain: &[Aggregation]) -> Result<BigRational, EulerError> {
    euler_local_with(chain, build_sdr)
}

/// As [`euler_local`] with a caller-chosen retraction per sphere.
pub fn euler_local_with(
    chain: &[Aggregation],
    mut sdr: impl FnMut(&SphereComplex) -> Result<SdrData, HodgeError>,
) -> Result<BigRational, EulerError> {
    let first = chain.first().ok_or_else(|| EulerError::NotComposable("empty chain".into()))?;
    let n = first.n();
    if chain.len() != n + 1 {
        return Err(EulerError::NotComposable(format!("{} aggregations for n = {n}", chain.len())));
    }
    for (j, w) in chain.windows(2).enumerate() {
        if w[0].target() != w[1].source() {
            return Err(EulerError::NotComposable(format!("target of step {j} is not the next source")));
        }
    }
    let mut spheres: Vec<&SphereComplex> = chain.iter().map(|a| &**a.source()).collect();
    spheres.push(&**chain[n].target());
    let sdrs: Vec<SdrData> = spheres.iter().map(|s| sdr(s)).collect::<Result<_, _>>()?;
    let refs: Vec<&SdrData> = sdrs.iter().collect();
    let maps: Vec<&[IntMatrix]> = chain.iter().map(Aggregation::chains).collect();
    Ok(chain_product(&refs, &maps))
}

/// The value on one `(n+1)`-simplex `v_0 < … < v_{n+1}` from the given
/// per-vertex retractions.
pub fn formal_euler(ls: &ChainLocalSystem, sdrs: &[SdrData], simplex: &[usize]) -> Result<BigRational, EulerError> {
    let n = ls.n();
    if simplex.len() != n + 2 || !ls.base().complex().contains(simplex) {
        return Err(EulerError::NotASimplex(simplex.to_vec()));
    }
    let refs: Vec<&SdrData> = simplex.iter().map(|&v| &sdrs[v]).collect();
    let maps: Vec<&[IntMatrix]> = simplex.windows(2).map(|e| ls.maps()[&(e[0], e[1])].as_slice()).collect();
    Ok(chain_product(&refs, &maps))
}

/// `τ^{n+1}` as one rational per `(n+1)`-simplex of the base, in the base's
/// simplex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistingCochain {
    pub base: SimplicialBase,
    pub n: usize,
    pub values: Vec<BigRational>,
}

impl TwistingCochain {
    pub fn zero(base: SimplicialBase, n: usize) -> Self {
        let m = base.simplices(n + 1).len();
        TwistingCochain { base, n, values: (0..m).map(|_| BigRational::zero()).collect() }
    }

    pub fn simplices(&self) -> &[Simplex] {
        self.base.simplices(self.n + 1)
    }

    pub fn value(&self, s: &[usize]) -> Option<&BigRational> {
        let i = self.base.complex().index_of(s)?;
        (s.len() == self.n + 2).then(|| &self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.values = self.values.iter().map(|v| -v).collect();
        out
    }
}

/// Hodge retractions of every fiber.
pub fn hodge_sdrs(ls: &ChainLocalSystem) -> Result<Vec<SdrData>, EulerError> {
    Ok(ls.fibers().iter().map(|f| build_sdr(f)).collect::<Result<_, _>>()?)
}

pub fn euler_cochain(ls: &ChainLocalSystem) -> Result<TwistingCochain, EulerError> {
    euler_cochain_with(ls, &hodge_sdrs(ls)?)
}

pub fn euler_cochain_with(ls: &ChainLocalSystem, sdrs: &[SdrData]) -> Result<TwistingCochain, EulerError> {
    let n = ls.n();
    let values = ls.base().simplices(n + 1).iter().map(|s| formal_euler(ls, sdrs, s)).collect::<Result<_, _>>()?;
    Ok(TwistingCochain { base: ls.base().clone(), n, values })
}

/// Orient a cell system and compute its cochain.
pub fn euler_cochain_of_cells(cs: &CellLocalSystem) -> Result<TwistingCochain, EulerError> {
    euler_cochain(&to_chain_system(cs)?)
}

/// `δτ = 0`: on every `(n+2)`-simplex the alternating sum over faces
/// vanishes.
pub fn verify_cocycle(t: &TwistingCochain) -> Report {
    let mut r = Report::new(format!("cocycle of degree {}", t.n + 1));
    for s in t.base.simplices(t.n + 2) {
        let mut sum = BigRational::zero();
        for i in 0..s.len() {
            let v = t.value(&face(s, i)).expect("faces are present");
            if i % 2 == 0 {
                sum += v;
            } else {
                sum -= v;
            }
        }
        if !sum.is_zero() {
            r.fail(format!("coboundary on {s:?}"), format!("{sum}"));
        }
    }
    if r.checks.is_empty() || r.is_ok() {
        r.pass(format!("{} simplices of dimension {}", t.base.simplices(t.n + 2).len(), t.n + 2));
    }
    r
}

/// `Σ z(σ) τ(σ)` for an integer `(n+1)`-cycle `z` (one coefficient per
/// `(n+1)`-simplex).
pub fn period(t: &TwistingCochain, z: &[BigInt]) -> Result<BigRational, EulerError> {
    let k = t.n + 1;
    if z.len() != t.values.len() {
        return Err(EulerError::NotACycle);
    }
    let col = IntMatrix::column(z.to_vec());
    if !(&t.base.complex().boundary(k) * &col).is_zero() {
        return Err(EulerError::NotACycle);
    }
    Ok(z.iter().zip(&t.values).fold(BigRational::zero(), |acc, (c, v)| acc + v * BigRational::from_integer(c.clone())))
}

/// [`period`], failing unless the value is an integer.
pub fn integer_period(t: &TwistingCochain, z: &[BigInt]) -> Result<BigInt, EulerError> {
    let q = period(t, z)?;
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(EulerError::NonIntegerPeriod(q))
    }
}

/// A `Z`-basis of the `(n+1)`-cycles of the base, one per entry.
pub fn integer_cycles(t: &TwistingCochain) -> Vec<Vec<BigInt>> {
    let z = t.base.complex().integer_cycles(t.n + 1);
    (0..z.ncols()).map(|j| (0..z.nrows()).map(|i| z.get(i, j)).collect()).collect()
}

/// `C_•(B) ⊗ H(S^n)` with the differential `∂ + ⌢τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedComplex {
    pub n: usize,
    pub basis: Vec<Vec<SmallCell>>,
    /// `differential[d] : degree d → degree d-1`.
    pub differential: Vec<RatMatrix>,
}

impl TwistedComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn betti(&self) -> Vec<usize> {
        let dims = self.dims();
        let ranks: Vec<usize> = self.differential.iter().map(RatMatrix::rank).collect();
        let rank = |d: usize| ranks.get(d).copied().unwrap_or(0);
        (0..dims.len()).map(|d| dims[d] - rank(d) - rank(d + 1)).collect()
    }
}

fn small_basis(base: &SimplicialBase, n: usize, d: usize) -> Vec<SmallCell> {
    let bdim = base.dim().unwrap_or(0);
    let mut out = Vec::new();
    if d >= n && d - n <= bdim {
        let p = d - n;
        out.extend((0..base.simplices(p).len()).map(|s| SmallCell { p, simplex: s, top: true }));
    }
    if d <= bdim {
        out.extend((0..base.simplices(d).len()).map(|s| SmallCell { p: d, simplex: s, top: false }));
    }
    out
}

/// `D(σ_p ⊗ h_0) = ∂σ ⊗ h_0 + (-1)^{p+n} τ(v_{p-n-1} … v_p) (v_0 … v_{p-n-1}) ⊗ h_n`
/// and `D(σ ⊗ h_n) = ∂σ ⊗ h_n`.
pub fn twisted_complex(t: &TwistingCochain) -> Result<TwistedComplex, EulerError> {
    let n = t.n;
    let base = &t.base;
    let top = base.dim().unwrap_or(0) + n;
    let basis: Vec<Vec<SmallCell>> = (0..=top).map(|d| small_basis(base, n, d)).collect();
    let pos = |d: usize, c: SmallCell| basis[d].iter().position(|&x| x == c).expect("cell in basis");
    let mut differential = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rows = if d == 0 { 0 } else { basis[d - 1].len() };
        let mut trip = Vec::new();
        for (col, c) in basis[d].iter().enumerate() {
            let s = &base.simplices(c.p)[c.simplex];
            if c.p >= 1 {
                for i in 0..=c.p {
                    let fi = base.complex().index_of(&face(s, i)).expect("faces are present");
                    let row = pos(d - 1, SmallCell { p: c.p - 1, simplex: fi, top: c.top });
                    let v = if i % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                    trip.push((row, col, v));
                }
            }
            if !c.top && c.p > n {
                let cut = c.p - n - 1;
                let back = t.value(&s[cut..]).expect("back face present").clone();
                let front = base.complex().index_of(&s[..=cut]).expect("front face present");
                let row = pos(d - 1, SmallCell { p: cut, simplex: front, top: true });
                let v = if (c.p + n) % 2 == 0 { back } else { -back };
                trip.push((row, col, v));
            }
        }
        differential.push(RatMatrix::from_triplets(rows, basis[d].len(), trip));
    }
    for d in 2..=top {
        if !(&differential[d - 1] * &differential[d]).is_zero() {
            return Err(EulerError::NotSquareZero { degree: d });
        }
    }
    Ok(TwistedComplex { n, basis, differential })
}

/// The perturbed differential obtained by perturbing the vertical
/// retraction of `Tot` with the horizontal differential.
pub fn perturbed_small_differential(
    ls: &ChainLocalSystem,
    sdrs: &[SdrData],
) -> Result<Vec<RatMatrix>, crate::hodge::PerturbError> {
    let t = total_complex(ls);
    let base = vertical_sdr(&t, ls, sdrs);
    let psi = (0..=t.top()).map(|d| t.horizontal(d).to_rat()).collect();
    let pert = crate::hodge::Perturbation { base, psi, bound: t.base_dim() + 1 };
    let out = crate::hodge::bpl_perturb(&pert)?;
    Ok(out.sdr.small_d)
}

/// Solve `δx = τ` over `Q` for an `n`-cochain `x`.
pub fn solve_coboundary(t: &TwistingCochain) -> Option<Vec<BigRational>> {
    let delta = t.base.complex().boundary(t.n + 1).to_rat().transpose();
    let rhs = RatMatrix::column(t.values.clone());
    let x = delta.solve(&rhs).expect("shapes agree")?;
    Some((0..x.nrows()).map(|i| x.get(i, 0)).collect())
}

/// `Q`-Betti numbers of the total complex, for comparison with
/// [`TwistedComplex::betti`].
pub fn total_betti(ls: &ChainLocalSystem) -> Vec<usize> {
    let t = total_complex(ls);
    rational_betti(&t.dims(), &t.boundaries())
}

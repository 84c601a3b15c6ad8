//! Truncated Fock-space oracle.
//!
//! States are built by conjugating a diagonal thermal (or vacuum) density
//! matrix with the truncated unitaries `exp(G)` of the quadratic generators
//! behind each recipe step:
//!
//! | step               | generator `G`                      |
//! |--------------------|------------------------------------|
//! | squeeze `s`        | `(s/2)(a² − a†²)`                  |
//! | rotate `φ`         | `iφ a†a`                           |
//! | two-mode squeeze   | `s(a†b† − ab)`                     |
//! | beam split `θ`     | `θ(a†b − ab†)`                     |
//! | displace `(dq,dp)` | `αa† − ᾱa`, `α = (dq + i·dp)/2`     |
//!
//! None of this goes through covariance matrices, so it can check the
//! Gaussian closed forms independently. Each generator is block-diagonal in
//! the truncated basis (it conserves parity, `n₁ ± n₂`, or the occupation of
//! untouched modes); exponentials are taken block by block, and the partial
//! transpose is diagonalized per connected block as well.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CvError, Result};
use crate::measures::OverlapKind;
use crate::recipe::{Recipe, Step};
use crate::tolerances::TAIL_MASS_LIMIT;

pub const SINGLE_MODE_CUTOFF_LIMIT: usize = 80;
pub const TWO_MODE_CUTOFF_LIMIT: usize = 45;
pub const INITIAL_CUTOFF: usize = 20;

/// Initial populations below this are dropped; the loss shows up in
/// [`FockDensity::trace_deficit`].
const WEIGHT_FLOOR: f64 = 1e-20;

const PURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
enum Ladder {
    Lower(usize),
    Raise(usize),
}

/// `coeff · opsₖ ⋯ ops₁`, with `ops[0]` acting first.
#[derive(Debug, Clone)]
struct Term {
    coeff: Complex64,
    ops: Vec<Ladder>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Basis {
    n_modes: usize,
    cutoff: usize,
}

impl Basis {
    fn dim(&self) -> usize {
        self.cutoff.pow(self.n_modes as u32)
    }

    fn stride(&self, mode: usize) -> usize {
        self.cutoff.pow((self.n_modes - 1 - mode) as u32)
    }

    fn occupation(&self, idx: usize, mode: usize) -> usize {
        (idx / self.stride(mode)) % self.cutoff
    }

    fn ladder(&self, idx: usize, op: Ladder) -> Option<(usize, f64)> {
        match op {
            Ladder::Lower(m) => {
                let n = self.occupation(idx, m);
                (n > 0).then(|| (idx - self.stride(m), (n as f64).sqrt()))
            }
            Ladder::Raise(m) => {
                let n = self.occupation(idx, m);
                (n + 1 < self.cutoff).then(|| (idx + self.stride(m), ((n + 1) as f64).sqrt()))
            }
        }
    }

    fn apply_ops(&self, idx: usize, ops: &[Ladder]) -> Option<(usize, f64)> {
        ops.iter().try_fold((idx, 1.0), |(i, c), &op| {
            self.ladder(i, op).map(|(j, f)| (j, c * f))
        })
    }
}

fn generator(step: &Step) -> Vec<Term> {
    use Ladder::{Lower, Raise};
    let re = |x: f64| Complex64::new(x, 0.0);
    match *step {
        Step::Squeeze { mode, s } => vec![
            Term {
                coeff: re(0.5 * s),
                ops: vec![Lower(mode), Lower(mode)],
            },
            Term {
                coeff: re(-0.5 * s),
                ops: vec![Raise(mode), Raise(mode)],
            },
        ],
        Step::Rotate { mode, phi } => vec![Term {
            coeff: Complex64::new(0.0, phi),
            ops: vec![Lower(mode), Raise(mode)],
        }],
        Step::TwoModeSqueeze { modes: [a, b], s } => vec![
            Term {
                coeff: re(s),
                ops: vec![Raise(b), Raise(a)],
            },
            Term {
                coeff: re(-s),
                ops: vec![Lower(b), Lower(a)],
            },
        ],
        Step::BeamSplit {
            modes: [a, b],
            theta,
        } => vec![
            Term {
                coeff: re(theta),
                ops: vec![Lower(b), Raise(a)],
            },
            Term {
                coeff: re(-theta),
                ops: vec![Raise(b), Lower(a)],
            },
        ],
        Step::Displace { mode, dq, dp } => {
            let alpha = Complex64::new(0.5 * dq, 0.5 * dp);
            vec![
                Term {
                    coeff: alpha,
                    ops: vec![Raise(mode)],
                },
                Term {
                    coeff: -alpha.conj(),
                    ops: vec![Lower(mode)],
                },
            ]
        }
        Step::Vacuum { .. } | Step::Thermal { .. } => Vec::new(),
    }
}

/// Union-find over basis indices.
struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn groups(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|g| !g.is_empty()).collect()
    }
}

/// Block-diagonal truncated unitary `exp(G)`: one dense block per invariant
/// subspace of the generator.
struct BlockUnitary {
    blocks: Vec<(Vec<usize>, DMatrix<Complex64>)>,
}

impl BlockUnitary {
    fn new(basis: Basis, terms: &[Term]) -> Self {
        let dim = basis.dim();
        let mut comps = Components::new(dim);
        for idx in 0..dim {
            for t in terms {
                if let Some((j, _)) = basis.apply_ops(idx, &t.ops) {
                    comps.union(idx, j);
                }
            }
        }
        let mut position = vec![0usize; dim];
        let blocks = comps
            .groups()
            .into_iter()
            .map(|members| {
                for (k, &i) in members.iter().enumerate() {
                    position[i] = k;
                }
                let n = members.len();
                let mut g = DMatrix::<Complex64>::zeros(n, n);
                for (col, &idx) in members.iter().enumerate() {
                    for t in terms {
                        if let Some((j, c)) = basis.apply_ops(idx, &t.ops) {
                            g[(position[j], col)] += t.coeff * c;
                        }
                    }
                }
                let u = if n == 1 { g.map(|z| z.exp()) } else { g.exp() };
                (members, u)
            })
            .collect();
        Self { blocks }
    }

    /// `w ← U w`, column by column.
    fn apply(&self, w: &mut DMatrix<Complex64>) {
        let cols = w.ncols();
        for (members, u) in &self.blocks {
            if members.len() == 1 {
                let (i, z) = (members[0], u[(0, 0)]);
                for c in 0..cols {
                    w[(i, c)] *= z;
                }
                continue;
            }
            let sub = DMatrix::from_fn(members.len(), cols, |r, c| w[(members[r], c)]);
            let out = complex_mul(u, &sub);
            for (r, &i) in members.iter().enumerate() {
                for c in 0..cols {
                    w[(i, c)] = out[(r, c)];
                }
            }
        }
    }
}

fn split_parts(m: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Complex product through real matrix products.
fn complex_mul(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ar, ai) = split_parts(a);
    let (br, bi) = split_parts(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        Complex64::new(re[(i, j)], im[(i, j)])
    })
}

/// `w w†`.
fn gram(w: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (a, b) = split_parts(w);
    let re = &a * a.transpose() + &b * b.transpose();
    if is_real(w) {
        return re.map(|x| Complex64::new(x, 0.0));
    }
    let im = &b * a.transpose() - &a * b.transpose();
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        Complex64::new(re[(i, j)], im[(i, j)])
    })
}

/// Truncated density matrix over `n_modes` modes with `cutoff` levels each.
/// Basis index of `|n₁, n₂⟩` is `n₁·cutoff + n₂`.
#[derive(Debug, Clone)]
pub struct FockDensity {
    n_modes: usize,
    cutoff: usize,
    rho: DMatrix<Complex64>,
    tail_mass: f64,
    trace_deficit: f64,
}

fn cutoff_limit(n_modes: usize) -> Result<usize> {
    match n_modes {
        1 => Ok(SINGLE_MODE_CUTOFF_LIMIT),
        2 => Ok(TWO_MODE_CUTOFF_LIMIT),
        n => Err(CvError::Recipe(format!(
            "the Fock oracle supports one or two modes, recipe has {n}"
        ))),
    }
}

/// Builds the truncated density matrix for `recipe` at a fixed cutoff.
/// Fails with [`CvError::CutoffTooSmall`] when the top 10% of the basis
/// holds `1e-6` or more of the population.
pub fn oracle_build(recipe: &Recipe, cutoff: usize) -> Result<FockDensity> {
    let rho = oracle_build_unchecked(recipe, cutoff)?;
    rho.require_converged()?;
    Ok(rho)
}

/// Cutoff policy: start at 20 and double (capped at the per-mode limit)
/// until the tail mass is below `1e-6`.
pub fn oracle_build_auto(recipe: &Recipe) -> Result<FockDensity> {
    let limit = cutoff_limit(recipe.n_modes()?)?;
    let mut cutoff = INITIAL_CUTOFF.min(limit);
    loop {
        let rho = oracle_build_unchecked(recipe, cutoff)?;
        if rho.tail_mass < TAIL_MASS_LIMIT {
            return Ok(rho);
        }
        if cutoff >= limit {
            rho.require_converged()?;
        }
        cutoff = (2 * cutoff).min(limit);
    }
}

/// Same as [`oracle_build`] but returns the density even when the tail
/// check fails; the caller is responsible for inspecting `tail_mass`.
pub fn oracle_build_unchecked(recipe: &Recipe, cutoff: usize) -> Result<FockDensity> {
    let n_modes = recipe.n_modes()?;
    let limit = cutoff_limit(n_modes)?;
    if cutoff < 2 || cutoff > limit {
        return Err(CvError::CutoffLimit {
            cutoff,
            limit,
            n_modes,
        });
    }
    // validates the recipe (mode indices, parameter ranges)
    recipe.build()?;
    let (first, rest) = recipe.split()?;
    let basis = Basis { n_modes, cutoff };

    let occupations: Vec<f64> = match first {
        Step::Vacuum { modes } => vec![1.0; *modes],
        Step::Thermal { occupations } => occupations.clone(),
        _ => unreachable!("checked by split"),
    };
    // thermal populations (1 − x)xⁿ with x = n̄/(n̄ + 1), n̄ = (ñ − 1)/2
    let ratios: Vec<f64> = occupations
        .iter()
        .map(|&nt| {
            let nbar = 0.5 * (nt - 1.0);
            nbar / (nbar + 1.0)
        })
        .collect();
    let mut columns = Vec::new();
    for idx in 0..basis.dim() {
        let weight: f64 = ratios
            .iter()
            .enumerate()
            .map(|(m, &x)| {
                let n = basis.occupation(idx, m) as i32;
                if x == 0.0 {
                    if n == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (1.0 - x) * x.powi(n)
                }
            })
            .product();
        if weight > WEIGHT_FLOOR {
            columns.push((idx, weight.sqrt()));
        }
    }
    let mut w = DMatrix::<Complex64>::zeros(basis.dim(), columns.len());
    for (c, &(idx, amp)) in columns.iter().enumerate() {
        w[(idx, c)] = Complex64::new(amp, 0.0);
    }
    for step in rest {
        BlockUnitary::new(basis, &generator(step)).apply(&mut w);
    }
    let rho = gram(&w);
    Ok(FockDensity::from_matrix(n_modes, cutoff, rho))
}

impl FockDensity {
    fn from_matrix(n_modes: usize, cutoff: usize, rho: DMatrix<Complex64>) -> Self {
        let basis = Basis { n_modes, cutoff };
        let top = (9 * cutoff).div_ceil(10);
        let mut trace = 0.0;
        let mut tail_mass = 0.0;
        for i in 0..basis.dim() {
            let p = rho[(i, i)].re;
            trace += p;
            if (0..n_modes).any(|m| basis.occupation(i, m) >= top) {
                tail_mass += p;
            }
        }
        Self {
            n_modes,
            cutoff,
            rho,
            tail_mass,
            trace_deficit: 1.0 - trace,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// Population in basis states where some mode sits in the top 10% of
    /// the retained levels.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `1 − Tr ρ`. Never renormalized away.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn hermiticity_error(&self) -> f64 {
        let r = &self.rho;
        let mut err = 0.0_f64;
        for i in 0..r.nrows() {
            for j in 0..=i {
                err = err.max((r[(i, j)] - r[(j, i)].conj()).norm());
            }
        }
        err
    }

    fn require_converged(&self) -> Result<()> {
        if self.tail_mass < TAIL_MASS_LIMIT {
            Ok(())
        } else {
            Err(CvError::CutoffTooSmall {
                cutoff: self.cutoff,
                tail_mass: self.tail_mass,
                limit: TAIL_MASS_LIMIT,
            })
        }
    }

    /// Transpose on the second mode, `⟨m₁m₂|ρ^{T₂}|m₁'m₂'⟩ = ⟨m₁m₂'|ρ|m₁'m₂⟩`.
    pub fn partial_transpose(&self) -> Result<FockDensity> {
        if self.n_modes != 2 {
            return Err(CvError::DimensionMismatch {
                expected: 2,
                got: self.n_modes,
            });
        }
        let n = self.cutoff;
        let rho = DMatrix::from_fn(n * n, n * n, |row, col| {
            let (m1, m2) = (row / n, row % n);
            let (k1, k2) = (col / n, col % n);
            self.rho[(m1 * n + k2, k1 * n + m2)]
        });
        Ok(Self {
            rho,
            ..self.clone()
        })
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> Result<f64> {
        self.require_converged()?;
        Ok(self.rho.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Expectation `Tr(ρ X)` of a product of ladder operators, `ops[0]`
    /// acting first.
    fn expect(&self, ops: &[Ladder]) -> Complex64 {
        let basis = Basis {
            n_modes: self.n_modes,
            cutoff: self.cutoff,
        };
        (0..basis.dim())
            .filter_map(|i| basis.apply_ops(i, ops).map(|(j, c)| self.rho[(i, j)] * c))
            .sum()
    }

    /// Quadrature means and symmetrized covariance, with `q = a + a†`,
    /// `p = i(a† − a)`.
    pub fn moments(&self) -> Result<OracleMoments> {
        self.require_converged()?;
        let dim = 2 * self.n_modes;
        // quadrature k as coefficients on [a_m, a_m†]
        let coeffs = |k: usize| -> [(Ladder, Complex64); 2] {
            let m = k / 2;
            if k % 2 == 0 {
                [
                    (Ladder::Lower(m), Complex64::new(1.0, 0.0)),
                    (Ladder::Raise(m), Complex64::new(1.0, 0.0)),
                ]
            } else {
                [
                    (Ladder::Lower(m), Complex64::new(0.0, -1.0)),
                    (Ladder::Raise(m), Complex64::new(0.0, 1.0)),
                ]
            }
        };
        let mean = DVector::from_fn(dim, |k, _| {
            coeffs(k)
                .iter()
                .map(|&(op, c)| c * self.expect(&[op]))
                .sum::<Complex64>()
                .re
        });
        // ⟨x_i x_j⟩: x_j acts first
        let second = |i: usize, j: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(oi, ci) in &coeffs(i) {
                for &(oj, cj) in &coeffs(j) {
                    acc += ci * cj * self.expect(&[oj, oi]);
                }
            }
            acc
        };
        let mut cov = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let sym = 0.5 * (second(i, j) + second(j, i)).re - mean[i] * mean[j];
                cov[(i, j)] = sym;
                cov[(j, i)] = sym;
            }
        }
        Ok(OracleMoments { cov, mean })
    }

    /// `Tr[ρ exp(i u·x)]` with `x = (q₁, p₁, …)`.
    pub fn char_fn(&self, u: &[f64]) -> Result<Complex64> {
        self.require_converged()?;
        if u.len() != 2 * self.n_modes {
            return Err(CvError::DimensionMismatch {
                expected: 2 * self.n_modes,
                got: u.len(),
            });
        }
        let basis = Basis {
            n_modes: self.n_modes,
            cutoff: self.cutoff,
        };
        // i(u_q q + u_p p) = (i u_q + u_p) a + (i u_q − u_p) a†
        let mut terms = Vec::new();
        for m in 0..self.n_modes {
            let (uq, up) = (u[2 * m], u[2 * m + 1]);
            terms.push(Term {
                coeff: Complex64::new(up, uq),
                ops: vec![Ladder::Lower(m)],
            });
            terms.push(Term {
                coeff: Complex64::new(-up, uq),
                ops: vec![Ladder::Raise(m)],
            });
        }
        let mut d_rho = self.rho.clone();
        BlockUnitary::new(basis, &terms).apply(&mut d_rho);
        Ok(d_rho.diagonal().iter().sum())
    }
}

/// Means and covariance read off a Fock density.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMoments {
    pub cov: DMatrix<f64>,
    pub mean: DVector<f64>,
}

/// Sum of absolute eigenvalues of a Hermitian matrix, diagonalizing each
/// connected block of its sparsity pattern separately.
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut comps = Components::new(n);
    for i in 0..n {
        for j in 0..i {
            if m[(i, j)] != Complex64::new(0.0, 0.0) || m[(j, i)] != Complex64::new(0.0, 0.0) {
                comps.union(i, j);
            }
        }
    }
    comps
        .groups()
        .into_iter()
        .map(|members| {
            let k = members.len();
            let sub = DMatrix::from_fn(k, k, |r, c| m[(members[r], members[c])]);
            if is_real(&sub) {
                let re = sub.map(|z| z.re);
                let re = (&re + re.transpose()) * 0.5;
                re.symmetric_eigenvalues()
                    .iter()
                    .map(|x| x.abs())
                    .sum::<f64>()
            } else {
                let h = (&sub + sub.adjoint()) * Complex64::new(0.5, 0.0);
                h.symmetric_eigenvalues()
                    .iter()
                    .map(|x| x.abs())
                    .sum::<f64>()
            }
        })
        .sum()
}

/// `‖ρ^{T₂}‖₁ − 1` computed directly from the Fock-space eigenvalues.
pub fn oracle_negativity(rho: &FockDensity) -> Result<f64> {
    rho.require_converged()?;
    let pt = rho.partial_transpose()?;
    Ok(trace_norm(&pt.rho) - 1.0)
}

/// `Tr ρ₁ρ₂`. A fidelity when at least one argument is pure, otherwise
/// flagged as a plain overlap.
pub fn oracle_fidelity(a: &FockDensity, b: &FockDensity) -> Result<(f64, OverlapKind)> {
    if a.n_modes != b.n_modes || a.cutoff != b.cutoff {
        return Err(CvError::DimensionMismatch {
            expected: a.rho.nrows(),
            got: b.rho.nrows(),
        });
    }
    let (pa, pb) = (a.purity()?, b.purity()?);
    let value: f64 = a
        .rho
        .iter()
        .zip(b.rho.iter())
        .map(|(x, y)| (x * y.conj()).re)
        .sum();
    let kind = if (1.0 - pa).abs() <= PURE_TOL || (1.0 - pb).abs() <= PURE_TOL {
        OverlapKind::Fidelity
    } else {
        OverlapKind::Overlap
    };
    Ok((value, kind))
}

pub fn oracle_purity(rho: &FockDensity) -> Result<f64> {
    rho.purity()
}

pub fn oracle_variance(rho: &FockDensity) -> Result<OracleMoments> {
    rho.moments()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_is_ground_state() {
        let rho = oracle_build(&Recipe::vacuum(1), 20).unwrap();
        assert_eq!(rho.matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(rho.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(rho.tail_mass(), 0.0);
    }

    #[test]
    fn thermal_geometric_ratio() {
        let rho = oracle_build_auto(&Recipe::thermal(&[3.0])).unwrap();
        let m = rho.matrix();
        for n in 0..10 {
            assert_abs_diff_eq!(m[(n + 1, n + 1)].re / m[(n, n)].re, 0.5, epsilon = 1e-14);
        }
        assert!(rho.trace_deficit() < 1e-9);
        let mom = oracle_variance(&rho).unwrap();
        assert_abs_diff_eq!(mom.cov[(0, 0)], 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(mom.cov[(1, 1)], 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(oracle_purity(&rho).unwrap(), 1.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn tmsv_schmidt_weights() {
        let s: f64 = 0.4;
        let rho = oracle_build(&Recipe::tmsv(s), 40).unwrap();
        let m = rho.matrix();
        let n_cut = 40;
        for n in 0..8 {
            let idx = n * n_cut + n;
            let expected = s.tanh().powi(2 * n as i32) / s.cosh().powi(2);
            assert_abs_diff_eq!(m[(idx, idx)].re, expected, epsilon = 1e-12);
        }
        assert!(rho.hermiticity_error() < 1e-12);
    }

    #[test]
    fn squeeze_and_rotation_moments() {
        let recipe = Recipe::vacuum(1)
            .then(Step::Squeeze { mode: 0, s: 0.3 })
            .then(Step::Rotate {
                mode: 0,
                phi: std::f64::consts::FRAC_PI_4,
            })
            .then(Step::Displace {
                mode: 0,
                dq: 0.5,
                dp: -0.25,
            });
        let rho = oracle_build_auto(&recipe).unwrap();
        let mom = oracle_variance(&rho).unwrap();
        let g = recipe.build().unwrap();
        for i in 0..2 {
            assert_abs_diff_eq!(mom.mean[i], g.mean()[i], epsilon = 1e-8);
            for j in 0..2 {
                assert_abs_diff_eq!(mom.cov[(i, j)], g.cov()[(i, j)], epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn negativity_of_product_and_tmsv() {
        let prod = oracle_build(&Recipe::thermal(&[2.0, 1.5]), 40).unwrap();
        assert!(oracle_negativity(&prod).unwrap().abs() < 1e-8);
        let t = oracle_build(&Recipe::tmsv(0.2), 40).unwrap();
        assert_abs_diff_eq!(
            oracle_negativity(&t).unwrap(),
            0.4f64.exp() - 1.0,
            epsilon = 1e-4
        );
    }

    #[test]
    fn fidelity_examples() {
        let vac = oracle_build(&Recipe::vacuum(1), 40).unwrap();
        let coh = oracle_build(
            &Recipe::vacuum(1).then(Step::Displace {
                mode: 0,
                dq: 2.0,
                dp: 0.0,
            }),
            40,
        )
        .unwrap();
        let (f, kind) = oracle_fidelity(&vac, &coh).unwrap();
        assert_abs_diff_eq!(f, (-1.0f64).exp(), epsilon = 1e-6);
        assert_eq!(kind, OverlapKind::Fidelity);
        assert_abs_diff_eq!(oracle_fidelity(&coh, &coh).unwrap().0, 1.0, epsilon = 1e-8);
        let th = oracle_build(&Recipe::thermal(&[3.0]), 40).unwrap();
        assert_abs_diff_eq!(oracle_fidelity(&vac, &th).unwrap().0, 0.5, epsilon = 1e-6);
        let th2 = oracle_build(&Recipe::thermal(&[2.0]), 40).unwrap();
        assert_eq!(oracle_fidelity(&th, &th2).unwrap().1, OverlapKind::Overlap);
        let small = oracle_build(&Recipe::vacuum(1), 20).unwrap();
        assert!(oracle_fidelity(&vac, &small).is_err());
    }

    #[test]
    fn char_fn_matches_gaussian() {
        let rho = oracle_build_auto(&Recipe::thermal(&[3.0])).unwrap();
        let c = rho.char_fn(&[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(c.re, (-3.0f64).exp(), epsilon = 1e-8);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn cutoff_errors() {
        let big = Recipe::vacuum(1).then(Step::Squeeze { mode: 0, s: 2.5 });
        assert!(matches!(
            oracle_build(&big, 20),
            Err(CvError::CutoffTooSmall { .. })
        ));
        assert!(matches!(
            oracle_build(&Recipe::vacuum(2), 46),
            Err(CvError::CutoffLimit { .. })
        ));
        assert!(oracle_build(&Recipe::vacuum(3), 5).is_err());
    }
}

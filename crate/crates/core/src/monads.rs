//! Monad shapes, Riemann-Roch on P3, random monads and their display
//! cohomology, and the checks that turn dimensions into certificates.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::audit::{self, Check};
use crate::exactla::{FieldMatrix, Fp};
use crate::forms::{dim_forms, monomial_index, basis};
use crate::geometry::{random_space_point, SpacePoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonadError {
    #[error("genus {0} is outside 5..=13")]
    GenusOutOfRange(u32),
    #[error("no admissible monad after {0} attempts")]
    RetriesExhausted(u32),
    #[error("invalid Chern data: chi is not integral")]
    NonIntegral,
}

/// Ranks of `0 -> rho O(-1) -> sigma O -> tau O(1) -> 0` for genus `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonadShape {
    pub g: u32,
    pub d: i64,
    pub r: i64,
    pub rho: usize,
    pub sigma: usize,
    pub tau: usize,
    /// The cohomology is a bundle (g >= 8) or a rank 2 reflexive sheaf.
    pub bundle: bool,
}

pub fn shape_for_genus(g: u32) -> Result<MonadShape, MonadError> {
    let gi = g as i64;
    match g {
        5..=7 => Ok(MonadShape {
            g,
            d: gi + 2,
            r: 2,
            rho: (gi - 4) as usize,
            sigma: (2 * gi - 7) as usize,
            tau: (gi - 5) as usize,
            bundle: false,
        }),
        8..=13 => {
            let d = (3 * gi + 12 + 3).div_euclid(4);
            let rho = 4 * d - 3 * gi - 12;
            let sigma = 5 * d - 3 * gi - 17;
            let tau = 2 * d - gi - 9;
            let r = gi - d + 4;
            debug_assert_eq!(r, sigma - rho - tau);
            Ok(MonadShape { g, d, r, rho: rho as usize, sigma: sigma as usize, tau: tau as usize, bundle: true })
        }
        _ => Err(MonadError::GenusOutOfRange(g)),
    }
}

impl MonadShape {
    /// `sigma - rho - tau`.
    pub fn alternating_rank(&self) -> i64 {
        self.sigma as i64 - self.rho as i64 - self.tau as i64
    }

    /// `c1` of the monad cohomology.
    pub fn c1(&self) -> i64 {
        self.rho as i64 - self.tau as i64
    }

    /// Chern data of the monad cohomology `F` (or of `f(1)` for g <= 7).
    pub fn chern(&self) -> ChernData {
        if self.bundle {
            ChernData::for_genus(self.g as i64, self.d).twist(-2)
        } else {
            ChernData::reflexive(self.g as i64).twist(1)
        }
    }
}

/// `2g - 6d + 58`.
pub fn h0_expected(g: i64, d: i64) -> i64 {
    2 * g - 6 * d + 58
}

/// Rank and Chern classes of a sheaf on P3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: i64,
    pub c2: i64,
    pub c3: i64,
}

fn choose(n: i64, k: i64) -> i64 {
    crate::forms::binomial(n, k)
}

impl ChernData {
    pub const fn new(rank: i64, c1: i64, c2: i64, c3: i64) -> Self {
        ChernData { rank, c1, c2, c3 }
    }

    /// The bundle `E` of the construction: `(r, 5, d, 2g - 2 - d)`.
    pub fn for_genus(g: i64, d: i64) -> Self {
        Self::new(g - d + 4, 5, d, 2 * g - 2 - d)
    }

    /// The reflexive sheaf of the low-genus cases: `(2, -1, g - 4, g - 4)`.
    pub fn reflexive(g: i64) -> Self {
        Self::new(2, -1, g - 4, g - 4)
    }

    pub fn dual(&self) -> Self {
        Self::new(self.rank, -self.c1, self.c2, -self.c3)
    }

    pub fn twist(&self, t: i64) -> Self {
        let r = self.rank;
        Self::new(
            r,
            self.c1 + r * t,
            self.c2 + (r - 1) * self.c1 * t + choose(r, 2) * t * t,
            self.c3 + (r - 2) * self.c2 * t + choose(r - 1, 2) * self.c1 * t * t + choose(r, 3) * t * t * t,
        )
    }
}

/// Hirzebruch-Riemann-Roch on P3 for `c` twisted by `t`.
pub fn chi_p3(c: &ChernData, t: i64) -> Result<i64, MonadError> {
    let c = c.twist(t);
    let (r, c1, c2, c3) = (c.rank as i128, c.c1 as i128, c.c2 as i128, c.c3 as i128);
    let six = (c1 * c1 * c1 - 3 * c1 * c2 + 3 * c3) + 6 * (c1 * c1 - 2 * c2) + 11 * c1 + 6 * r;
    if six % 6 != 0 {
        return Err(MonadError::NonIntegral);
    }
    Ok((six / 6) as i64)
}

/// A `rows x cols` matrix of linear forms `sum_j x_j A_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMatrix {
    pub rows: usize,
    pub cols: usize,
    pub coeffs: [FieldMatrix; 4],
}

impl LinearMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        LinearMatrix { rows, cols, coeffs: std::array::from_fn(|_| FieldMatrix::zeros(field, rows, cols)) }
    }

    pub fn random<R: Rng + ?Sized>(field: Fp, rows: usize, cols: usize, rng: &mut R) -> Self {
        LinearMatrix { rows, cols, coeffs: std::array::from_fn(|_| FieldMatrix::random(field, rows, cols, rng)) }
    }

    pub fn field(&self) -> Fp {
        self.coeffs[0].field()
    }

    pub fn transpose(&self) -> Self {
        LinearMatrix { rows: self.cols, cols: self.rows, coeffs: std::array::from_fn(|j| self.coeffs[j].transpose()) }
    }

    pub fn eval(&self, x: &[u32]) -> FieldMatrix {
        let f = self.field();
        let mut out = FieldMatrix::zeros(f, self.rows, self.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let mut acc = 0;
                for j in 0..4 {
                    acc = f.add(acc, f.mul(x[j], self.coeffs[j].get(i, k)));
                }
                out.set(i, k, acc);
            }
        }
        out
    }

    /// Matrix of `S_l^cols -> S_{l+1}^rows`.
    pub fn on_sections(&self, l: i64) -> FieldMatrix {
        let f = self.field();
        let src = dim_forms(4, l);
        let tgt = dim_forms(4, l + 1);
        let mut m = FieldMatrix::zeros(f, self.rows * tgt, self.cols * src);
        if l < 0 {
            return m;
        }
        let b = basis(4, l as usize);
        let mut e = [0u32; 4];
        for k in 0..self.cols {
            for (mi, alpha) in b.iter().enumerate() {
                for j in 0..4 {
                    e.copy_from_slice(alpha);
                    e[j] += 1;
                    let ti = monomial_index(&e);
                    for i in 0..self.rows {
                        let c = self.coeffs[j].get(i, k);
                        if c != 0 {
                            let r = i * tgt + ti;
                            let col = k * src + mi;
                            m.set(r, col, f.add(m.get(r, col), c));
                        }
                    }
                }
            }
        }
        m
    }

    /// Builds the matrix whose column `k` is the linear form with
    /// coefficient vector `cols[k]` in `S_1^rows` coordinates.
    pub fn from_section_columns(field: Fp, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut out = Self::zeros(field, rows, cols.len());
        for (k, v) in cols.iter().enumerate() {
            for i in 0..rows {
                for j in 0..4 {
                    let mut e = [0u32; 4];
                    e[j] = 1;
                    out.coeffs[j].set(i, k, v[i * 4 + monomial_index(&e)]);
                }
            }
        }
        out
    }

    /// True iff `self * other` is the zero matrix of quadrics.
    pub fn composes_to_zero(&self, other: &LinearMatrix) -> bool {
        for j in 0..4 {
            if !self.coeffs[j].mul(&other.coeffs[j]).is_zero() {
                return false;
            }
            for k in (j + 1)..4 {
                let a = self.coeffs[j].mul(&other.coeffs[k]);
                let b = self.coeffs[k].mul(&other.coeffs[j]);
                let f = self.field();
                let sum: Vec<u32> = a.data().iter().zip(b.data()).map(|(x, y)| f.add(*x, *y)).collect();
                if sum.iter().any(|&c| c != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Rank of the coefficient matrix of a single column of linear forms.
    pub fn column_coefficient_rank(&self, k: usize) -> usize {
        let rows: Vec<Vec<u32>> = (0..self.rows).map(|i| (0..4).map(|j| self.coeffs[j].get(i, k)).collect()).collect();
        FieldMatrix::from_rows(self.field(), 4, &rows).rank()
    }
}

/// `0 -> rho O(-1) --beta--> sigma O --alpha--> tau O(1) -> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadInstance {
    pub shape: MonadShape,
    pub alpha: LinearMatrix,
    pub beta: LinearMatrix,
}

/// Evidence gathered while sampling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleEvidence {
    pub attempts: u32,
    pub points: usize,
    pub alpha_corank_max: usize,
    pub beta_corank_max: usize,
    /// Exact injectivity certificate for `rho = 1`: rank of the coefficient matrix.
    pub beta_coefficient_rank: Option<usize>,
    pub alpha_beta_zero: bool,
}

/// Samples a monad of the given shape, retrying degenerate draws.
pub fn sample_monad<R: Rng + ?Sized>(
    field: Fp,
    shape: MonadShape,
    rng: &mut R,
    samples: usize,
    max_retries: u32,
) -> Result<(MonadInstance, SampleEvidence), MonadError> {
    for attempt in 1..=max_retries {
        let m = draw(field, shape, rng);
        let Some(m) = m else { continue };
        let ev = m.evidence(rng, samples, attempt);
        let injective_exact = ev.beta_coefficient_rank.map_or(true, |r| r == 4) || !shape.bundle;
        if ev.alpha_beta_zero && ev.alpha_corank_max == 0 && ev.beta_corank_max == 0 && injective_exact {
            return Ok((m, ev));
        }
    }
    Err(MonadError::RetriesExhausted(max_retries))
}

fn random_kernel_combinations<R: Rng + ?Sized>(field: Fp, ker: &FieldMatrix, n: usize, rng: &mut R) -> Option<Vec<Vec<u32>>> {
    if ker.cols() < n {
        return None;
    }
    Some(
        (0..n)
            .map(|_| {
                let c: Vec<u32> = (0..ker.cols()).map(|_| field.random(rng)).collect();
                ker.mul_vec(&c)
            })
            .collect(),
    )
}

fn draw<R: Rng + ?Sized>(field: Fp, shape: MonadShape, rng: &mut R) -> Option<MonadInstance> {
    let MonadShape { rho, sigma, tau, .. } = shape;
    if rho == 0 || tau == 0 {
        return Some(MonadInstance {
            shape,
            alpha: LinearMatrix::random(field, tau, sigma, rng),
            beta: LinearMatrix::random(field, sigma, rho, rng),
        });
    }
    // Draw the side whose orthogonal complement in S_1^sigma is large enough.
    if 4 * sigma >= 10 * rho + tau {
        let beta = LinearMatrix::random(field, sigma, rho, rng);
        let ker = beta.transpose().on_sections(1).kernel_basis();
        let rows = random_kernel_combinations(field, &ker, tau, rng)?;
        let alpha = LinearMatrix::from_section_columns(field, sigma, &rows).transpose();
        Some(MonadInstance { shape, alpha, beta })
    } else {
        let alpha = LinearMatrix::random(field, tau, sigma, rng);
        let ker = alpha.on_sections(1).kernel_basis();
        let cols = random_kernel_combinations(field, &ker, rho, rng)?;
        let beta = LinearMatrix::from_section_columns(field, sigma, &cols);
        Some(MonadInstance { shape, alpha, beta })
    }
}

/// Cohomology of the monad cohomology sheaf at one twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DisplayDims {
    pub h0: i64,
    pub h1: i64,
    pub h2: Option<i64>,
    pub h3: Option<i64>,
}

impl MonadInstance {
    pub fn field(&self) -> Fp {
        self.alpha.field()
    }

    fn evidence<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize, attempts: u32) -> SampleEvidence {
        let f = self.field();
        let s = self.shape;
        let mut amax = 0;
        let mut bmax = 0;
        for _ in 0..samples {
            let x = random_space_point(f, rng);
            amax = amax.max(s.tau - self.alpha.eval(&x).rank());
            bmax = bmax.max(s.rho - self.beta.eval(&x).rank());
        }
        let beta_coefficient_rank = (s.rho == 1).then(|| self.beta.column_coefficient_rank(0));
        SampleEvidence {
            attempts,
            points: samples,
            alpha_corank_max: amax,
            beta_corank_max: bmax,
            beta_coefficient_rank,
            alpha_beta_zero: self.alpha.composes_to_zero(&self.beta),
        }
    }

    /// The dual monad `tau O(-1) -> sigma O -> rho O(1)`.
    pub fn dual(&self) -> MonadInstance {
        let s = self.shape;
        MonadInstance {
            shape: MonadShape { rho: s.tau, tau: s.rho, ..s },
            alpha: self.beta.transpose(),
            beta: self.alpha.transpose(),
        }
    }

    fn h01(&self, l: i64) -> (i64, i64) {
        let s = self.shape;
        let a = self.alpha.on_sections(l);
        let rank = a.rank() as i64;
        let kernel = a.cols() as i64 - rank;
        let b = self.beta.on_sections(l - 1);
        let b_rank = b.rank() as i64;
        let expected = s.rho as i64 * dim_forms(4, l - 1) as i64;
        audit::record(Check::RankNullity, b_rank == expected);
        (kernel - b_rank, a.rows() as i64 - rank)
    }

    /// `h2 - h3` from the long exact sequences of the display.
    fn h23_difference(&self, l: i64) -> i64 {
        let s = self.shape;
        let h3_rho = s.rho as i64 * dim_forms(4, -(l - 1) - 4) as i64;
        // H3(K(l)) is dual to the cokernel of S_{-l-5}^tau -> S_{-l-4}^sigma.
        let dual = self.alpha.transpose().on_sections(-l - 5);
        let h3_k = s.sigma as i64 * dim_forms(4, -l - 4) as i64 - dual.rank() as i64;
        h3_rho - h3_k
    }

    /// All four dimensions of `F(l)`, with the Euler check recorded.
    pub fn display_cohomology(&self, l: i64) -> Result<DisplayDims, MonadError> {
        let (h0, h1) = self.h01(l);
        let diff = self.h23_difference(l);
        let chi = chi_p3(&self.shape.chern(), l)?;
        audit::record(Check::Euler, h0 - h1 + diff == chi);
        let (h2, h3) = if self.shape.bundle {
            let dual = self.dual();
            let (a, b) = dual.h01(-l - 4);
            (Some(b), Some(a))
        } else {
            (None, None)
        };
        if let (Some(a), Some(b)) = (h2, h3) {
            audit::record(Check::TwoRoute, a - b == diff);
        }
        Ok(DisplayDims { h0, h1, h2, h3 })
    }

    /// Rank of `H0(F(l)) (x) S1 -> H0(F(l+1))` and `h0(F(l+1))`.
    pub fn mult_rank(&self, l: i64) -> (i64, i64) {
        let f = self.field();
        let s = self.shape;
        let ker = self.alpha.on_sections(l).kernel_basis();
        let im_next = self.beta.on_sections(l);
        let src = dim_forms(4, l);
        let mut vecs: Vec<Vec<u32>> = im_next.columns();
        let base = crate::exactla::span_rank(f, s.sigma * dim_forms(4, l + 1), &vecs) as i64;
        let degrees = vec![l; s.sigma];
        for v in ker.columns() {
            debug_assert_eq!(v.len(), s.sigma * src);
            for j in 0..4 {
                vecs.push(crate::cohomology::Sections::times_variable(&degrees, &v, j));
            }
        }
        let total = crate::exactla::span_rank(f, s.sigma * dim_forms(4, l + 1), &vecs) as i64;
        (total - base, self.h01(l + 1).0)
    }

    /// Corank of the evaluation map of `H0(F(l))` at `x`, inside the fiber
    /// `ker alpha(x) / im beta(x)` of dimension `r`.
    pub fn ev_corank_at(&self, l: i64, x: &SpacePoint) -> usize {
        let f = self.field();
        let s = self.shape;
        let b = basis(4, l.max(0) as usize);
        let mono: Vec<u32> = b.iter().map(|e| crate::forms::Form::monomial(f, e, 1).eval(x)).collect();
        let ker = self.alpha.on_sections(l).kernel_basis();
        let n = mono.len();
        let beta_x = self.beta.eval(x);
        let mut cols: Vec<Vec<u32>> = beta_x.columns();
        let base = crate::exactla::span_rank(f, s.sigma, &cols);
        for v in ker.columns() {
            let val: Vec<u32> = (0..s.sigma)
                .map(|k| (0..n).fold(0, |acc, i| f.add(acc, f.mul(v[k * n + i], mono[i]))))
                .collect();
            cols.push(val);
        }
        let total = crate::exactla::span_rank(f, s.sigma, &cols);
        (self.shape.r as usize).saturating_sub(total - base)
    }

    /// Ranks of `H0(beta^dual(1))` and `H0(alpha(1))` with their targets;
    /// both must be onto whenever the target has at most two summands.
    pub fn twisted_surjectivity(&self) -> [(usize, usize); 2] {
        let s = self.shape;
        let b = self.beta.transpose().on_sections(1).rank();
        let a = self.alpha.on_sections(1).rank();
        let out = [(b, 10 * s.rho), (a, 10 * s.tau)];
        for (rank, target) in out {
            if target <= 20 {
                audit::record(Check::SurjectiveAfterTwist, rank == target);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// One named check with the dimensions it was decided on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub claim: String,
    pub status: Status,
    pub dims: BTreeMap<String, i64>,
    pub samples: u64,
    pub attempts: u32,
}

impl Certificate {
    pub fn new(name: &str, claim: &str) -> Self {
        Certificate {
            name: name.to_string(),
            claim: claim.to_string(),
            status: Status::Pass,
            dims: BTreeMap::new(),
            samples: 0,
            attempts: 1,
        }
    }

    pub fn dim(mut self, key: &str, value: i64) -> Self {
        self.dims.insert(key.to_string(), value);
        self
    }

    /// Records a dimension and requires it to equal `expected`.
    pub fn expect_dim(mut self, key: &str, value: i64, expected: i64) -> Self {
        self.dims.insert(key.to_string(), value);
        self.require(value == expected)
    }

    pub fn require(mut self, ok: bool) -> Self {
        if !ok {
            self.status = Status::Fail;
        }
        self
    }

    pub fn samples(mut self, n: u64) -> Self {
        self.samples = n;
        self
    }

    pub fn attempts(mut self, n: u32) -> Self {
        self.attempts = n;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(name: &str, claim: &str, reason: &str) -> Self {
        let mut c = Self::new(name, claim);
        c.status = Status::Fail;
        c.claim = format!("{claim} ({reason})");
        c
    }
}

/// Checks of the main theorem for a sampled monad: shape, `H0(beta^dual(1))`
/// onto, `H1(E) = 0`, and global generation by regularity.
pub fn verify_theorem_conditions<R: Rng + ?Sized>(
    m: &MonadInstance,
    rng: &mut R,
    samples: usize,
) -> Result<Vec<Certificate>, MonadError> {
    let s = m.shape;
    let mut out = Vec::new();
    let [(brank, btarget), _] = m.twisted_surjectivity();
    out.push(
        Certificate::new("monad_shape", "E(-2) is the cohomology of a linear monad with H0(beta^dual(1)) onto")
            .dim("rho", s.rho as i64)
            .dim("sigma", s.sigma as i64)
            .dim("tau", s.tau as i64)
            .expect_dim("rank_beta_dual_1", brank as i64, btarget as i64)
            .require(s.alternating_rank() == s.r),
    );
    let e = |l: i64| m.display_cohomology(l + 2);
    let e0 = e(0)?;
    out.push(
        Certificate::new("h1_E_vanishes", "H1(E) = 0")
            .expect_dim("h1_E", e0.h1, 0)
            .expect_dim("h0_E", e0.h0, h0_expected(s.g as i64, s.d)),
    );
    let em1 = e(-1)?;
    let em2 = e(-2)?;
    let em3 = e(-3)?;
    match s.g {
        8..=10 if em1.h1 == 0 => out.push(
            Certificate::new("global_generation", "E is 0-regular")
                .expect_dim("h1_E(-1)", em1.h1, 0)
                .expect_dim("h2_E(-2)", em2.h2.unwrap_or(-1), 0)
                .expect_dim("h3_E(-3)", em3.h3.unwrap_or(-1), 0),
        ),
        8..=12 => {
            let (rank, target) = m.mult_rank(2);
            out.push(
                Certificate::new("global_generation", "E is 1-regular and H0(E) (x) S1 -> H0(E(1)) is onto")
                    .expect_dim("h1_E", e0.h1, 0)
                    .expect_dim("h2_E(-1)", em1.h2.unwrap_or(-1), 0)
                    .expect_dim("h3_E(-2)", em2.h3.unwrap_or(-1), 0)
                    .dim("mult_target", target)
                    .expect_dim("mult_rank", rank, target),
            );
        }
        _ => {
            let f = m.field();
            let mut worst = 0;
            for _ in 0..samples {
                let x = random_space_point(f, rng);
                worst = worst.max(m.ev_corank_at(2, &x));
            }
            out.push(
                Certificate::new("evaluation_corank", "the evaluation map of E has corank at most 1 at sampled points")
                    .expect_dim("max_corank", worst as i64, worst.min(1) as i64)
                    .samples(samples as u64),
            );
        }
    }
    Ok(out)
}

/// Which structure lemma a set of dimensions is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    /// Linear monad criterion.
    Linear,
    /// Quasi-linear criterion with `h0(F^dual(-1)) <= 3`.
    QuasiLinear,
    /// Rank 2 reflexive sheaves of the low-genus cases.
    Reflexive,
}

/// Dimensions of `F` and `F^dual` needed by the lemmas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HypothesisData {
    pub h0_f_m1: i64,
    pub h0_fdual_m1: i64,
    pub h1_f_m2: i64,
    pub h1_fdual_m2: i64,
    pub h1_fdual_m3: i64,
    pub h1_f_m1: i64,
    pub h1_fdual_m1: i64,
    pub h0_f: i64,
    pub h1_f: i64,
}

/// Hypotheses of the lemma and the predicted monad terms, compared with
/// `shape`. For `Reflexive`, `h0_f` and `h1_f_m1` stand for `H0(f)` and
/// `H1(f(-1))`.
pub fn lemma_hypothesis_check(
    which: Lemma,
    d: &HypothesisData,
    chern: &ChernData,
    shape: &MonadShape,
) -> Result<Certificate, MonadError> {
    let c = match which {
        Lemma::Linear => {
            let tau = -chi_p3(chern, -1)?;
            let rho = -chi_p3(&chern.dual(), -1)?;
            let sigma = chern.rank + rho + tau;
            Certificate::new("linear_monad_hypotheses", "F is the cohomology of a linear monad of the predicted shape")
                .expect_dim("h0_F(-1)", d.h0_f_m1, 0)
                .expect_dim("h0_Fdual(-1)", d.h0_fdual_m1, 0)
                .expect_dim("h1_F(-2)", d.h1_f_m2, 0)
                .expect_dim("h1_Fdual(-2)", d.h1_fdual_m2, 0)
                .expect_dim("h1_F(-1)", d.h1_f_m1, tau)
                .expect_dim("h1_Fdual(-1)", d.h1_fdual_m1, rho)
                .expect_dim("pred_rho", rho, shape.rho as i64)
                .expect_dim("pred_sigma", sigma, shape.sigma as i64)
                .expect_dim("pred_tau", tau, shape.tau as i64)
        }
        Lemma::QuasiLinear => {
            let chi_m1 = chi_p3(chern, -1)?;
            let a = chern.c1 + chern.rank - 2 * chi_m1;
            let left = d.h1_fdual_m1;
            let b = d.h0_fdual_m1;
            let right = d.h1_f_m1;
            Certificate::new(
                "quasilinear_monad_hypotheses",
                "F is the cohomology of a monad with an extra O(-1) block that cancels to the linear shape",
            )
            .expect_dim("h0_F(-1)", d.h0_f_m1, 0)
            .dim("h0_Fdual(-1)", b)
            .require(b <= 3)
            .expect_dim("h1_F(-2)", d.h1_f_m2, 0)
            .expect_dim("h1_Fdual(-2)", d.h1_fdual_m2, 0)
            .expect_dim("h1_Fdual(-3)", d.h1_fdual_m3, 0)
            .expect_dim("h1_F(-1)", right, -chi_m1)
            .dim("pred_left", left)
            .dim("pred_middle_O", a)
            .dim("pred_middle_O(-1)", b)
            .dim("pred_right", right)
            .expect_dim("cancelled_rho", left - b, shape.rho as i64)
            .expect_dim("cancelled_sigma", a, shape.sigma as i64)
            .expect_dim("cancelled_tau", right, shape.tau as i64)
        }
        Lemma::Reflexive => {
            let h1 = -chi_p3(chern, 0)?;
            Certificate::new("reflexive_monad_hypotheses", "f(1) is the cohomology of a monad of the low-genus shape")
                .expect_dim("h0_f", d.h0_f, 0)
                .expect_dim("h1_f(-1)", d.h1_f_m1, 0)
                .expect_dim("h1_f", d.h1_f, h1)
                .expect_dim("pred_tau", h1, shape.tau as i64)
                .dim("pred_rho", shape.rho as i64)
                .dim("pred_sigma", shape.sigma as i64)
        }
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn field() -> Fp {
        Fp::new(32003).unwrap()
    }

    #[test]
    fn shapes_match_table() {
        let want = [
            (8, 0, 4, 1, 3),
            (9, 1, 6, 2, 3),
            (10, 2, 8, 3, 3),
            (11, 3, 10, 4, 3),
            (12, 0, 7, 3, 4),
            (13, 1, 9, 4, 4),
        ];
        for (g, rho, sigma, tau, r) in want {
            let s = shape_for_genus(g).unwrap();
            assert_eq!((s.rho, s.sigma, s.tau, s.r), (rho, sigma, tau, r), "g = {g}");
        }
        for (g, rho, sigma, tau) in [(5, 1, 3, 0), (6, 2, 5, 1), (7, 3, 7, 2)] {
            let s = shape_for_genus(g).unwrap();
            assert_eq!((s.rho, s.sigma, s.tau), (rho, sigma, tau));
        }
        assert!(shape_for_genus(4).is_err());
        assert!(shape_for_genus(14).is_err());
    }

    #[test]
    fn riemann_roch_on_line_bundles() {
        let o = ChernData::new(1, 0, 0, 0);
        for t in 0..=5 {
            assert_eq!(chi_p3(&o, t).unwrap(), crate::forms::binomial(t + 3, 3));
        }
        assert_eq!(chi_p3(&o, -4).unwrap(), -1);
    }

    #[test]
    fn riemann_roch_recovers_monad_ranks() {
        for g in 8..=13 {
            let s = shape_for_genus(g).unwrap();
            let e = ChernData::for_genus(g as i64, s.d);
            assert_eq!(-chi_p3(&e, -3).unwrap(), s.tau as i64);
            assert_eq!(-chi_p3(&e.dual(), 1).unwrap(), s.rho as i64);
            assert_eq!(s.chern().c1, s.c1());
        }
    }

    #[test]
    fn reflexive_chi() {
        for g in 5..=7 {
            assert_eq!(chi_p3(&ChernData::reflexive(g), 0).unwrap(), 5 - g);
        }
    }

    #[test]
    fn g8_monad_is_twisted_cotangent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let (m, _) = sample_monad(field(), shape_for_genus(8).unwrap(), &mut rng, 50, 8).unwrap();
        let d = m.display_cohomology(2).unwrap();
        assert_eq!((d.h0, d.h1), (20, 0));
        let d = m.display_cohomology(-2).unwrap();
        assert_eq!((d.h0, d.h1), (0, 0));
    }

    #[test]
    fn g11_and_g12_sections() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for (g, h0) in [(11, 8), (12, 10), (13, 6)] {
            let s = shape_for_genus(g).unwrap();
            let (m, ev) = sample_monad(field(), s, &mut rng, 50, 8).unwrap();
            assert!(ev.alpha_beta_zero);
            let d = m.display_cohomology(2).unwrap();
            assert_eq!((d.h0, d.h1), (h0, 0), "g = {g}");
        }
    }

    #[test]
    fn low_genus_monads_sample() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for g in 5..=7 {
            let (m, ev) = sample_monad(field(), shape_for_genus(g).unwrap(), &mut rng, 50, 8).unwrap();
            assert!(ev.alpha_beta_zero);
            let d = m.display_cohomology(-1).unwrap();
            assert_eq!(d.h0, 0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn twist_is_additive(r in 1i64..5, c1 in -5i64..6, c2 in -5i64..10, c3 in -5i64..10, s in -3i64..4, t in -3i64..4) {
            let c = ChernData::new(r, c1, c2, c3);
            prop_assert_eq!(c.twist(s).twist(t), c.twist(s + t));
        }

        #[test]
        fn monad_invariants(g in 8u32..=13, seed in 0u64..1000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let s = shape_for_genus(g).unwrap();
            let (m, _) = sample_monad(field(), s, &mut rng, 20, 8).unwrap();
            prop_assert_eq!(s.alternating_rank(), s.r);
            for l in -3..=1 {
                let d = m.display_cohomology(l).unwrap();
                let chi = chi_p3(&s.chern(), l).unwrap();
                prop_assert_eq!(d.h0 - d.h1 + d.h2.unwrap() - d.h3.unwrap(), chi);
            }
        }
    }
}

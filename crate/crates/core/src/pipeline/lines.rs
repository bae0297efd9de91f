//! Three disjoint lines and four points: the hypotheses and conclusions of
//! the cubic-generation lemma, its two-line corollary, and a random sweep.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{PipelineError, Report, ScenarioConfig};
use crate::cohomology::{self, Component, SheafExpr, Subscheme};
use crate::exactla::{FieldCtx, Fp};
use crate::forms::Form;
use crate::geometry::{self, SpaceCurve, SpacePoint};
use crate::monads::Certificate;

/// Lines `L1, L2, L3` and points `W` in P3.
#[derive(Debug, Clone)]
pub struct LinesAndPoints {
    pub lines: [Arc<SpaceCurve>; 3],
    pub points: Vec<SpacePoint>,
}

/// The lemma's hypotheses as computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub disjoint: bool,
    pub spanning: bool,
    pub off_quadric: bool,
    /// `h0(I_{(Y - L_l) u W}(2))` for `l = 1, 2, 3`.
    pub pair_h0: [i64; 3],
}

impl Hypotheses {
    pub fn hold(&self) -> bool {
        self.disjoint && self.spanning && self.off_quadric && self.pair_h0 == [0; 3]
    }
}

/// `h0`, `h1` of the ideal at twist 3 and the multiplication rank into twist 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CubicIdeal {
    pub h0: i64,
    pub h1: i64,
    pub mult_rank: i64,
    pub mult_target: i64,
}

impl CubicIdeal {
    pub fn generated_by_cubics(&self, h0: i64) -> bool {
        self.h0 == h0 && self.h1 == 0 && self.mult_rank == self.mult_target
    }
}

fn ideal(field: Fp, lines: &[Arc<SpaceCurve>], points: &[SpacePoint]) -> SheafExpr {
    let mut comps: Vec<Component> = lines.iter().map(|l| Component::Curve(l.clone())).collect();
    if !points.is_empty() {
        comps.push(Component::Points(points.to_vec()));
    }
    SheafExpr::Ideal(Subscheme::new(field, comps))
}

impl LinesAndPoints {
    pub fn field(&self) -> Fp {
        self.lines[0].field()
    }

    fn disjoint(&self) -> Result<bool, PipelineError> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if !self.lines[i].disjoint_from(&self.lines[j])? {
                    return Ok(false);
                }
            }
        }
        let distinct = (0..self.points.len()).all(|i| !self.points[..i].contains(&self.points[i]));
        let off_lines = self.points.iter().all(|p| self.lines.iter().all(|l| !l.contains(p)));
        Ok(distinct && off_lines)
    }

    /// The quadric containing the three lines, if unique.
    pub fn quadric(&self) -> Result<Option<Form>, PipelineError> {
        let s = cohomology::sections(&ideal(self.field(), &self.lines, &[]), 2)?;
        if s.vectors.len() != 1 {
            return Ok(None);
        }
        Ok(Some(Form::from_coeffs(self.field(), 4, 2, s.vectors[0].clone())))
    }

    pub fn hypotheses(&self) -> Result<Hypotheses, PipelineError> {
        let f = self.field();
        let disjoint = self.disjoint()?;
        let rows: Vec<Vec<u32>> = self.points.iter().map(|p| p.to_vec()).collect();
        let spanning = geometry::point_rank(f, &rows) == 4;
        if !disjoint {
            return Ok(Hypotheses { disjoint, spanning, off_quadric: false, pair_h0: [-1; 3] });
        }
        let off_quadric = match self.quadric()? {
            Some(q) => geometry::off_quadric(&self.points, &q),
            None => false,
        };
        let mut pair_h0 = [0; 3];
        for (l, h) in pair_h0.iter_mut().enumerate() {
            let rest: Vec<_> = (0..3).filter(|&k| k != l).map(|k| self.lines[k].clone()).collect();
            *h = cohomology::h0(&ideal(f, &rest, &self.points), 2)?;
        }
        Ok(Hypotheses { disjoint, spanning, off_quadric, pair_h0 })
    }

    /// `I_{Y u W}` at twist 3.
    pub fn cubic_ideal(&self) -> Result<CubicIdeal, PipelineError> {
        cubic_ideal(&ideal(self.field(), &self.lines, &self.points))
    }

    /// `I_{L2 u L3 u W'}` at twist 3, with `W'` = `W` plus two points of `L1`.
    pub fn corollary_ideal(&self, extra: [SpacePoint; 2]) -> Result<CubicIdeal, PipelineError> {
        let mut pts = self.points.clone();
        pts.extend(extra);
        cubic_ideal(&ideal(self.field(), &self.lines[1..], &pts))
    }
}

fn cubic_ideal(expr: &SheafExpr) -> Result<CubicIdeal, PipelineError> {
    let d = cohomology::cohomology(expr, 3)?;
    let (mult_rank, mult_target) = cohomology::mult_rank(expr, 3)?;
    Ok(CubicIdeal { h0: d.h0, h1: d.h1, mult_rank, mult_target })
}

/// Certificates for a configuration: hypotheses, then the conclusion.
pub fn lemma_certificates(cfg: &LinesAndPoints, prefix: &str) -> Result<Vec<Certificate>, PipelineError> {
    let h = cfg.hypotheses()?;
    let mut out = vec![Certificate::new(
        &format!("{prefix}lines_points_hypotheses"),
        "three disjoint lines and four spanning points off the quadric, no quadric through two lines and W",
    )
    .dim("disjoint", h.disjoint as i64)
    .dim("spanning", h.spanning as i64)
    .dim("off_quadric", h.off_quadric as i64)
    .dim("h0_I(2)_without_L1", h.pair_h0[0])
    .dim("h0_I(2)_without_L2", h.pair_h0[1])
    .dim("h0_I(2)_without_L3", h.pair_h0[2])
    .require(h.hold())];
    if h.hold() {
        let c = cfg.cubic_ideal()?;
        out.push(ideal_certificate(&format!("{prefix}lines_points_cubics"), "the ideal of Y u W is generated by cubics", &c, 4));
    }
    Ok(out)
}

pub fn ideal_certificate(name: &str, claim: &str, c: &CubicIdeal, h0: i64) -> Certificate {
    Certificate::new(name, claim)
        .expect_dim("h0_I(3)", c.h0, h0)
        .expect_dim("h1_I(3)", c.h1, 0)
        .dim("mult_target", c.mult_target)
        .expect_dim("mult_rank", c.mult_rank, c.mult_target)
}

fn random_line(field: Fp, rng: &mut ChaCha8Rng) -> Result<Arc<SpaceCurve>, PipelineError> {
    loop {
        let a = geometry::random_space_point(field, rng);
        let b = geometry::random_space_point(field, rng);
        if geometry::point_rank(field, &[a.to_vec(), b.to_vec()]) == 2 {
            return Ok(Arc::new(SpaceCurve::line(field, a, b)?));
        }
    }
}

/// Random configuration: three lines and four points.
pub fn random_configuration(field: Fp, rng: &mut ChaCha8Rng) -> Result<LinesAndPoints, PipelineError> {
    let lines = [random_line(field, rng)?, random_line(field, rng)?, random_line(field, rng)?];
    let points = (0..4).map(|_| geometry::random_space_point(field, rng)).collect();
    Ok(LinesAndPoints { lines, points })
}

/// Counts from a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub admissible: u64,
    pub discarded: u64,
    pub lemma_pass: u64,
    pub corollary_pass: u64,
}

/// Draws random configurations until `n` satisfy the hypotheses; checks the
/// lemma and the corollary on each. Configurations failing a hypothesis are
/// discarded and counted.
pub fn appendix_b_sweep(cfg: &ScenarioConfig, n: usize) -> Result<(Report, SweepSummary), PipelineError> {
    let ctx = FieldCtx::new(cfg.prime, cfg.seed)?;
    let f = ctx.field;
    let mut rng = ctx.rng(0);
    let mut summary = SweepSummary::default();
    let mut certs = Vec::new();
    let mut index = 0;
    while (summary.admissible as usize) < n {
        let c = random_configuration(f, &mut rng)?;
        if !c.hypotheses()?.hold() {
            summary.discarded += 1;
            continue;
        }
        summary.admissible += 1;
        let lemma = c.cubic_ideal()?;
        let t = random_params_on_line(f, &mut rng);
        let extra = t.map(|p| c.lines[0].point_at(p));
        let cor = c.corollary_ideal(extra)?;
        summary.lemma_pass += lemma.generated_by_cubics(4) as u64;
        summary.corollary_pass += cor.generated_by_cubics(6) as u64;
        certs.push(ideal_certificate(
            &format!("config{index}.lines_points_cubics"),
            "the ideal of Y u W is generated by cubics",
            &lemma,
            4,
        ));
        certs.push(ideal_certificate(
            &format!("config{index}.two_lines_six_points_cubics"),
            "the ideal of L2 u L3 u W' is generated by cubics",
            &cor,
            6,
        ));
        index += 1;
    }
    certs.push(
        Certificate::new("sweep_summary", "random configurations satisfying the hypotheses")
            .dim("admissible", summary.admissible as i64)
            .dim("discarded", summary.discarded as i64)
            .expect_dim("lemma_pass", summary.lemma_pass as i64, summary.admissible as i64)
            .expect_dim("corollary_pass", summary.corollary_pass as i64, summary.admissible as i64)
            .samples(summary.admissible + summary.discarded),
    );
    Ok((Report::new(cfg, certs), summary))
}

fn random_params_on_line(field: Fp, rng: &mut ChaCha8Rng) -> [[u32; 2]; 2] {
    use rand::Rng;
    loop {
        let a = rng.gen_range(0..field.p());
        let b = rng.gen_range(0..field.p());
        if a != b {
            return [[1, a], [1, b]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn coplanar_points_are_rejected() {
        let f = Fp::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut c = random_configuration(f, &mut rng).unwrap();
        c.points = vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0]];
        let h = c.hypotheses().unwrap();
        assert!(!h.spanning);
        assert!(!h.hold());
    }

    #[test]
    fn random_configuration_satisfies_lemma() {
        let f = Fp::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = random_configuration(f, &mut rng).unwrap();
        assert!(c.hypotheses().unwrap().hold());
        assert!(c.cubic_ideal().unwrap().generated_by_cubics(4));
    }
}
